//! Dense univariate polynomials over a prime field `Z/p`, coefficients stored
//! low degree first. Only what the field construction needs.

pub(crate) type UPoly = Vec<u64>;

pub(crate) fn trim(a: &mut UPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &UPoly, b: &UPoly, p: u64) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &UPoly, b: &UPoly, p: u64) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub(crate) fn rem(a: &UPoly, m: &UPoly, p: u64) -> UPoly {
    let mut r = a.clone();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(a: &UPoly, b: &UPoly, m: &UPoly, p: u64) -> UPoly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_poly_mod(base: &UPoly, mut e: u128, m: &UPoly, p: u64) -> UPoly {
    let mut acc: UPoly = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &UPoly, b: &UPoly, p: u64) -> UPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv_mod(lead, p);
        for c in x.iter_mut() {
            *c = *c * li % p;
        }
    }
    x
}

/// Rabin-style test: a monic `f` of degree `k` over `Z/p` is irreducible iff
/// `gcd(f, x^(p^i) - x) = 1` for every `i <= k/2`.
pub(crate) fn is_irreducible(f: &UPoly, p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x: UPoly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=k / 2 {
        xp = pow_poly_mod(&xp, p as u128, f, p);
        let g = gcd(f, &sub(&xp, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_over_small_primes() {
        // x^2 + 1 is irreducible mod 3, reducible mod 5
        assert!(is_irreducible(&vec![1, 0, 1], 3));
        assert!(!is_irreducible(&vec![1, 0, 1], 5));
        // x^4 + x + 1 irreducible mod 2-like check done mod 3: x^4+1 = (x^2+x+2)(x^2+2x+2) mod 3
        assert!(!is_irreducible(&vec![1, 0, 0, 0, 1], 3));
    }

    #[test]
    fn gcd_is_monic() {
        let a = vec![2, 3, 1]; // (x+1)(x+2) mod 7
        let b = vec![3, 4, 1]; // (x+1)(x+3) mod 7
        assert_eq!(gcd(&a, &b, 7), vec![1, 1]);
    }
}
