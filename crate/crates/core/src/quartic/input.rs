use super::{build_qqlc, QuarticInput};
use crate::arith::Field;
use crate::error::{Error, Result};
use crate::poly::{parse_poly, MultiPoly};

const LABELS: [(&str, u32); 5] = [("Q':", 2), ("Q:", 2), ("L:", 1), ("C:", 3), ("F:", 4)];

struct Block {
    label: &'static str,
    degree: u32,
    offset: usize,
    text: String,
}

/// Parses named blocks `F:` or `Q:`, `Q':`, `L:`, `C:`; a block continues on
/// following lines until the next label. A `field` line and `#` lines are skipped.
pub fn parse_quartic_input<F: Field>(field: &F, text: &str) -> Result<QuarticInput<F>> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let start = offset;
        offset += line.len() + 1;
        let lead = line.len() - line.trim_start().len();
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with("field") {
            continue;
        }
        if let Some(&(label, degree)) = LABELS.iter().find(|(l, _)| t.starts_with(l)) {
            if blocks.iter().any(|b| b.label == label) {
                return Err(Error::parse(start, format!("block {label} appears twice")));
            }
            blocks.push(Block {
                label,
                degree,
                offset: start + lead + label.len(),
                text: t[label.len()..].to_string(),
            });
        } else {
            let cur = blocks
                .last_mut()
                .ok_or_else(|| Error::parse(start, "expected a block label such as F: or Q:"))?;
            cur.text.push(' ');
            cur.text.push_str(t);
        }
    }
    let get = |label: &str| -> Result<Option<MultiPoly<F>>> {
        let Some(b) = blocks.iter().find(|b| b.label == label) else {
            return Ok(None);
        };
        let p = parse_poly(field, &b.text, 5).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos: pos + b.offset,
                msg: format!("in block {}: {msg}", b.label),
            },
            other => other,
        })?;
        if p.is_zero() {
            return Ok(Some(MultiPoly::zero(field, 5, b.degree)));
        }
        if p.degree() != b.degree {
            return Err(Error::Degree(format!(
                "block {} must have degree {}, found {}",
                b.label,
                b.degree,
                p.degree()
            )));
        }
        Ok(Some(p))
    };
    let f = get("F:")?;
    let parts = [get("Q:")?, get("Q':")?, get("L:")?, get("C:")?];
    let given = parts.iter().filter(|p| p.is_some()).count();
    match (f, given) {
        (Some(f), 0) => QuarticInput::new(f),
        (f, 4) => {
            let [q, qp, l, c] = parts.map(|p| p.expect("present"));
            let inp = build_qqlc(q, qp, l, c)?;
            if let Some(f) = f {
                if f != inp.f {
                    return Err(Error::invalid("F differs from Q*Q' - L*C"));
                }
            }
            Ok(inp)
        }
        (None, 0) => Err(Error::invalid("no F: block and no Q:, Q':, L:, C: blocks")),
        _ => Err(Error::invalid("a decomposition needs all four blocks Q:, Q':, L:, C:")),
    }
}

/// Writes an input in the block format, with the given field header line.
pub fn render_quartic_input<F: Field>(inp: &QuarticInput<F>, header: &str) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    match &inp.decomposition {
        Some(d) => {
            out.push_str(&format!("Q: {}\n", d.q));
            out.push_str(&format!("Q': {}\n", d.q_prime));
            out.push_str(&format!("L: {}\n", d.l));
            out.push_str(&format!("C: {}\n", d.c));
        }
        None => out.push_str(&format!("F: {}\n", inp.f)),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Gf, Rationals};

    #[test]
    fn blocks_and_continuations() {
        let g = Gf::prime(11).unwrap();
        let text = "field p=11\n# comment\nQ: x0*x1 + x2^2\nQ': x3^2\n  - x4^2\nL: x0\nC: x1^3\n";
        let inp = parse_quartic_input(&g, text).unwrap();
        let d = inp.decomposition.as_ref().unwrap();
        assert_eq!(d.q_prime.to_string(), "x3^2 + 10*x4^2");
        let again = parse_quartic_input(&g, &render_quartic_input(&inp, "field p=11")).unwrap();
        assert_eq!(again, inp);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_quartic_input(&Rationals, "F: x0^4 + * x1^4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { pos, .. } if pos >= 3));
        assert!(matches!(
            parse_quartic_input(&Rationals, "F: x0^3*x1\nQ: x0^2\n"),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(parse_quartic_input(&Rationals, "F: x0^3\n"), Err(Error::Degree(_))));
    }
}
