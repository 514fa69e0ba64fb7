//! Rational functions: quotients of multivariate polynomials.
//!
//! Invariants: the denominator is nonzero, `gcd(num, den) = 1`, and the
//! denominator's leading coefficient is normalized to 1. Canonical string
//! form is `num` when the denominator is 1 and `(num) / (den)` otherwise.

use std::fmt;

use crate::error::CasError;
use crate::gcd::gcd;
use crate::poly::MPoly;
use crate::scalar::ExactScalar;

#[derive(Clone)]
pub struct RatFn {
    num: MPoly,
    den: MPoly,
}

impl RatFn {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, CasError> {
        if den.is_zero() {
            return Err(CasError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: MPoly, den: MPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFn {
                num,
                den: MPoly::one(),
            };
        }
        let (mut num, mut den) = if den.is_one() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides num"),
                    den.div_exact(&g).expect("gcd divides den"),
                )
            }
        };
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip().expect("nonzero leading coefficient");
            den = den.scale(&inv);
            num = num.scale(&inv);
        }
        RatFn { num, den }
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFn {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn from_scalar(c: ExactScalar) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(MPoly::from_int(n))
    }

    pub fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(MPoly::var(name))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// True when the reduced denominator is the constant 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<ExactScalar> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFn::from_poly(self.num.add(&rhs.num));
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            let den = self.den.mul(&rhs.den);
            return Self::reduced(num, den);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d2).add(&rhs.num.mul(&d1));
        // only g can still share a factor with num
        let h = gcd(&num, &g);
        if h.is_one() {
            Self::reduced_nogcd(num, self.den.mul(&d2))
        } else {
            let num = num.div_exact(&h).expect("gcd divides");
            let den = self
                .den
                .div_exact(&h)
                .expect("h divides g divides den")
                .mul(&d2);
            Self::reduced_nogcd(num, den)
        }
    }

    /// Normalizes the leading coefficient only; caller guarantees coprimality.
    fn reduced_nogcd(mut num: MPoly, mut den: MPoly) -> RatFn {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFn::zero();
        }
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip().expect("nonzero leading coefficient");
            den = den.scale(&inv);
            num = num.scale(&inv);
        }
        RatFn { num, den }
    }

    pub fn sub(&self, rhs: &RatFn) -> RatFn {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.div_exact(&g1).expect("gcd divides")
        };
        let d2 = if g1.is_one() {
            rhs.den.clone()
        } else {
            rhs.den.div_exact(&g1).expect("gcd divides")
        };
        let n2 = if g2.is_one() {
            rhs.num.clone()
        } else {
            rhs.num.div_exact(&g2).expect("gcd divides")
        };
        let d1 = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.div_exact(&g2).expect("gcd divides")
        };
        Self::reduced_nogcd(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &ExactScalar) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<RatFn, CasError> {
        if self.is_zero() {
            return Err(CasError::DivisionByZero);
        }
        Ok(Self::reduced_nogcd(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFn) -> Result<RatFn, CasError> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn pow(&self, e: u32) -> RatFn {
        RatFn {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Formal partial derivative by the quotient rule.
    pub fn partial_derivative(&self, var: &str) -> RatFn {
        let dn = self.num.partial_derivative(var);
        if self.den.is_one() {
            return RatFn::from_poly(dn);
        }
        let dd = self.den.partial_derivative(var);
        if dd.is_zero() {
            return Self::reduced(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        let den = self.den.mul(&self.den);
        Self::reduced(num, den)
    }

    /// Substitutes polynomials for variables in both numerator and denominator.
    pub fn substitute(&self, map: &[(&str, MPoly)]) -> Result<RatFn, CasError> {
        RatFn::new(self.num.substitute(map), self.den.substitute(map))
    }

    /// Substitutes rational functions for variables.
    pub fn substitute_ratfn(&self, map: &[(&str, RatFn)]) -> Result<RatFn, CasError> {
        let eval_poly = |p: &MPoly| -> RatFn {
            let names = p.vars().names();
            let mut acc = RatFn::zero();
            for (e, c) in p.terms() {
                let mut term = RatFn::from_scalar(c.clone());
                for (i, &x) in e.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let base = map
                        .iter()
                        .find(|(k, _)| *k == names[i])
                        .map(|(_, v)| v.clone())
                        .unwrap_or_else(|| RatFn::var(&names[i]));
                    term = term.mul(&base.pow(x as u32));
                }
                acc = acc.add(&term);
            }
            acc
        };
        let n = eval_poly(&self.num);
        let d = eval_poly(&self.den);
        n.div(&d)
    }

    /// Evaluates at a rational point; errors when the denominator vanishes.
    pub fn eval(&self, point: &[(&str, ExactScalar)]) -> Result<ExactScalar, CasError> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(CasError::DivisionByZero);
        }
        let n = self.num.eval(point)?;
        n.checked_div(&d)
    }

    pub fn to_canonical_string(&self) -> String {
        if self.den.is_one() {
            self.num.to_canonical_string()
        } else {
            format!(
                "({}) / ({})",
                self.num.to_canonical_string(),
                self.den.to_canonical_string()
            )
        }
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        // canonical forms are unique: compare componentwise
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFn {}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}
