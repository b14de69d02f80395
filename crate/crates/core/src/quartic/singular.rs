use super::{certify_node, NodeRecord};
use crate::arith::Gf;
use crate::enumerate::CommonZeros;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::projgeo::ProjPoint;

/// Exhaustive search for points where every partial derivative vanishes.
pub struct SingularSearch {
    zeros: CommonZeros,
}

impl SingularSearch {
    pub fn new(f: &MultiPoly<Gf>) -> Result<Self> {
        if f.nvars() < 2 || f.degree() < 2 {
            return Err(Error::invalid("need a form of degree at least 2 in at least 2 variables"));
        }
        Ok(SingularSearch {
            zeros: CommonZeros::new(f.field(), f.nvars(), &f.gradient())?,
        })
    }

    /// All gradient-zero points, in lexicographic order of normalized coordinates.
    pub fn run(&self, budget: u128) -> Result<Vec<Vec<u32>>> {
        self.zeros.run(budget)
    }
}

/// Every point of `P^{n-1}(GF(q))` where the gradient of `f` vanishes, certified.
pub fn singular_points_enumerate(f: &MultiPoly<Gf>, budget: u128) -> Result<Vec<NodeRecord<Gf>>> {
    let search = SingularSearch::new(f)?;
    search
        .run(budget)?
        .into_iter()
        .map(|x| {
            let rec = certify_node(f, &ProjPoint::new(f.field(), x)?)?;
            if !rec.gradient_zero {
                return Err(Error::Inconsistency("enumerated point has nonzero gradient".into()));
            }
            Ok(rec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::ProjectiveSpace;
    use crate::poly::parse_poly;

    fn brute(f: &MultiPoly<Gf>) -> Vec<Vec<u32>> {
        let space = ProjectiveSpace::new(f.field(), f.nvars() - 1).unwrap();
        let grad = f.gradient();
        space.par_filter(|x| grad.iter().all(|g| g.eval(x).unwrap() == 0))
    }

    #[test]
    fn agrees_with_brute_force() {
        let g = Gf::prime(7).unwrap();
        for text in [
            "x0*x1*x2*x3 + x4^4",
            "(x0*x1 - x2*x3)^2 + x4^4",
            "x0^3*x1 + x1^3*x2 + x2^3*x3 + x3^3*x4 + x4^3*x0",
            "x0*x1^3 + x2^2*x3*x4",
        ] {
            let f = parse_poly(&g, text, 5).unwrap();
            let fast = SingularSearch::new(&f).unwrap().run(u128::MAX).unwrap();
            assert_eq!(fast, brute(&f), "{text}");
        }
    }

    #[test]
    fn double_quadric_points_are_not_nodes() {
        let g = Gf::prime(5).unwrap();
        let f = parse_poly(&g, "(x0*x1 - x2*x3)^2", 5).unwrap();
        let recs = singular_points_enumerate(&f, u128::MAX).unwrap();
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| !r.is_node));
    }

    #[test]
    fn budget_is_enforced() {
        let g = Gf::prime(11).unwrap();
        let f = parse_poly(&g, "x0^4 + x1^4 + x2^4 + x3^4 + x4^4", 5).unwrap();
        assert!(matches!(
            singular_points_enumerate(&f, 100),
            Err(Error::BudgetExceeded { required: 16105, budget: 100 })
        ));
    }
}
