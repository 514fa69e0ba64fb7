//! Multivariate polynomial gcd.
//!
//! Computed by recursive content / primitive-part reduction to univariate
//! pseudo-remainder sequences: exactness over speed at desk scale. The result
//! is canonicalized monic so that equal gcds have equal representations.

use crate::poly::MPoly;

/// gcd of the contents of `coeffs` (a univariate coefficient list).
fn content_of(coeffs: &[MPoly]) -> MPoly {
    let mut acc = MPoly::zero();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Pseudo-remainder of `a` by `b`, both viewed as univariate in `v`.
fn pseudo_rem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let db = b.degree_in(v);
    let vars = a.vars().clone();
    let b_coeffs = b.univariate_in(v);
    let lb = b_coeffs[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let r_coeffs = r.univariate_in(v);
        let lr = r_coeffs[dr as usize].clone();
        // r <- lb*r - lr * x^(dr-db) * b
        let mut shift_coeffs = vec![MPoly::zero(); (dr - db) as usize + 1];
        shift_coeffs[(dr - db) as usize] = lr;
        let shift = MPoly::from_univariate(&vars, v, &shift_coeffs);
        r = r.mul(&lb).sub(&shift.mul(b));
    }
    r
}

/// Primitive part with respect to `v`, normalized monic in grlex order.
fn primitive_monic(p: &MPoly, v: usize) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let cont = content_of(&p.univariate_in(v));
    let pp = if cont.is_one() {
        p.clone()
    } else {
        p.div_exact(&cont).expect("content divides")
    };
    pp.monic()
}

/// Greatest common divisor, monic; `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return if b.is_zero() { MPoly::zero() } else { b.monic() };
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let (a, b) = MPoly::align(a, b);
    let used_a = a.used_vars();
    let used_b = b.used_vars();
    let common: Vec<usize> = used_a
        .iter()
        .copied()
        .filter(|i| used_b.contains(i))
        .collect();
    if common.is_empty() {
        return MPoly::one();
    }
    // Main variable: smallest combined degree keeps the PRS short.
    let v = common
        .iter()
        .copied()
        .min_by_key(|&i| a.degree_in(i) as u32 + b.degree_in(i) as u32)
        .expect("nonempty common");

    let ca = content_of(&a.univariate_in(v));
    let cb = content_of(&b.univariate_in(v));
    let cg = gcd(&ca, &cb);
    let mut p = primitive_monic(&a.div_exact(&ca).expect("content divides"), v);
    let mut q = primitive_monic(&b.div_exact(&cb).expect("content divides"), v);
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            let g = primitive_monic(&q, v);
            return g.mul(&cg).monic();
        }
        p = q;
        q = primitive_monic(&r, v);
        if q.is_constant() {
            return cg.monic();
        }
    }
}

/// Least common multiple, monic.
pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    a.div_exact(&g)
        .expect("gcd divides")
        .mul(b)
        .monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn v(name: &str) -> MPoly {
        MPoly::var(name)
    }

    /// One-variable-at-a-time Euclidean oracle for bivariate tests:
    /// compares against gcd computed by dividing out the known factor.
    #[test]
    fn gcd_reduction_difference_of_squares() {
        let x1 = v("x1");
        let x2 = v("x2");
        let num = x1.pow(2).sub(&x2.pow(2));
        let den = x1.sub(&x2);
        let g = gcd(&num, &den);
        assert_eq!(g, den.monic());
        assert_eq!(num.div_exact(&g).unwrap(), x1.add(&x2));
    }

    #[test]
    fn gcd_with_content() {
        // a = (x1+x2) * x3^2, b = (x1+x2) * x3 => gcd = (x1+x2)*x3
        let s = v("x1").add(&v("x2"));
        let a = s.mul(&v("x3").pow(2));
        let b = s.mul(&v("x3")).scale(&ExactScalar::from_int(4));
        let g = gcd(&a, &b);
        assert_eq!(g, s.mul(&v("x3")).monic());
    }

    #[test]
    fn coprime_gcd_is_one() {
        assert!(gcd(&v("x1"), &v("x2")).is_one());
        let a = v("x1").add(&MPoly::one());
        let b = v("x1").sub(&MPoly::one());
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn random_products_share_factor() {
        // (x1 - x2)(x1 + 2x2) vs (x1 - x2)(x2 + 3)
        let f = v("x1").sub(&v("x2"));
        let a = f.mul(&v("x1").add(&v("x2").scale(&ExactScalar::from_int(2))));
        let b = f.mul(&v("x2").add(&MPoly::from_int(3)));
        assert_eq!(gcd(&a, &b), f.monic());
        assert_eq!(lcm(&f, &f.scale(&ExactScalar::from_int(5))), f.monic());
    }
}
