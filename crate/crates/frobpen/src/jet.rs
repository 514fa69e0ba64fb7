//! Minimal differential-polynomial algebra on jet variables.
//!
//! A `DiffPoly` is a polynomial in the jet variables `u^i_{x^j}` (with
//! `j = 0` meaning `u^i` itself), so coefficients are polynomial functions
//! of `u` by construction. The two operations are the total x-derivative
//! `D` (Leibniz rule, `D(u^i_{x^j}) = u^i_{x^{j+1}}`) and the variational
//! derivative given by the Euler-Lagrange formula.
//!
//! Text form mirrors the usual notation: `u1_x`, `u2_xx` for orders up to
//! nine, `u1_x{12}` from ten on.

use crate::poly::MPoly;
use crate::scalar::ExactScalar;

/// Jet variable `u^comp_{x^order}`; `order == 0` is the field variable itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVar {
    pub comp: usize,
    pub order: usize,
}

impl JetVar {
    pub fn name(&self) -> String {
        match self.order {
            0 => format!("u{}", self.comp),
            1..=9 => format!("u{}_{}", self.comp, "x".repeat(self.order)),
            _ => format!("u{}_x{{{}}}", self.comp, self.order),
        }
    }

    /// Parses names produced by [`JetVar::name`].
    pub fn parse(name: &str) -> Option<JetVar> {
        let rest = name.strip_prefix('u')?;
        let (digits, tail) = match rest.find(|c: char| !c.is_ascii_digit()) {
            Some(pos) => rest.split_at(pos),
            None => (rest, ""),
        };
        let comp: usize = digits.parse().ok()?;
        if tail.is_empty() {
            return Some(JetVar { comp, order: 0 });
        }
        let tail = tail.strip_prefix('_')?;
        if let Some(braced) = tail.strip_prefix("x{") {
            let inner = braced.strip_suffix('}')?;
            let order: usize = inner.parse().ok()?;
            return Some(JetVar { comp, order });
        }
        if !tail.is_empty() && tail.bytes().all(|b| b == b'x') {
            return Some(JetVar {
                comp,
                order: tail.len(),
            });
        }
        None
    }
}

/// A differential polynomial: a polynomial in finitely many jet variables.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffPoly {
    poly: MPoly,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly {
            poly: MPoly::zero(),
        }
    }

    pub fn constant(c: ExactScalar) -> Self {
        DiffPoly {
            poly: MPoly::constant(c),
        }
    }

    /// The jet variable `u^comp_{x^order}` as a differential polynomial.
    pub fn jet(comp: usize, order: usize) -> Self {
        DiffPoly {
            poly: MPoly::var(&JetVar { comp, order }.name()),
        }
    }

    /// Wraps a polynomial whose variables all parse as jet variables.
    pub fn from_poly(poly: MPoly) -> Self {
        for name in poly.vars().names() {
            assert!(
                JetVar::parse(name).is_some(),
                "not a jet variable name: {name}"
            );
        }
        DiffPoly { poly }
    }

    pub fn as_poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, rhs: &DiffPoly) -> DiffPoly {
        DiffPoly {
            poly: self.poly.add(&rhs.poly),
        }
    }

    pub fn sub(&self, rhs: &DiffPoly) -> DiffPoly {
        DiffPoly {
            poly: self.poly.sub(&rhs.poly),
        }
    }

    pub fn mul(&self, rhs: &DiffPoly) -> DiffPoly {
        DiffPoly {
            poly: self.poly.mul(&rhs.poly),
        }
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            poly: self.poly.neg(),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> DiffPoly {
        DiffPoly {
            poly: self.poly.scale(c),
        }
    }

    fn jet_vars(&self) -> Vec<JetVar> {
        self.poly
            .vars()
            .names()
            .iter()
            .map(|n| JetVar::parse(n).expect("validated jet name"))
            .collect()
    }

    /// Differential degree: max over monomials of sum(order * exponent).
    pub fn diff_degree(&self) -> u64 {
        let jv = self.jet_vars();
        self.poly
            .terms()
            .iter()
            .map(|(e, _)| {
                e.iter()
                    .enumerate()
                    .map(|(i, &x)| jv[i].order as u64 * x as u64)
                    .sum::<u64>()
            })
            .max()
            .unwrap_or(0)
    }

    /// Total x-derivative: Leibniz on each monomial, `D(u^i_{x^j}) = u^i_{x^{j+1}}`.
    pub fn total_derivative(&self) -> DiffPoly {
        let jv = self.jet_vars();
        let names = self.poly.vars().names().to_vec();
        let mut out = MPoly::zero();
        for (e, c) in self.poly.terms() {
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                // c * x * v_i^(x-1) * prod_{k != i} v_k^{e_k} * D(v_i)
                let bumped = JetVar {
                    comp: jv[i].comp,
                    order: jv[i].order + 1,
                };
                let mut term = MPoly::constant(c * &ExactScalar::from_int(x as i64));
                for (k, &xk) in e.iter().enumerate() {
                    let pw = if k == i { xk - 1 } else { xk };
                    if pw > 0 {
                        term = term.mul(&MPoly::var(&names[k]).pow(pw as u32));
                    }
                }
                term = term.mul(&MPoly::var(&bumped.name()));
                out = out.add(&term);
            }
        }
        DiffPoly { poly: out }
    }

    /// Partial derivative with respect to a jet variable.
    pub fn partial(&self, v: JetVar) -> DiffPoly {
        DiffPoly {
            poly: self.poly.partial_derivative(&v.name()),
        }
    }

    /// Variational derivative `delta H / delta u^i`, Euler–Lagrange formula:
    /// `sum_k (-1)^k D^k (dH/du^i_{x^k})`.
    pub fn variational_derivative(&self, comp: usize) -> DiffPoly {
        let max_order = self
            .jet_vars()
            .iter()
            .filter(|v| v.comp == comp)
            .map(|v| v.order)
            .max();
        let Some(max_order) = max_order else {
            return DiffPoly::zero();
        };
        let mut acc = DiffPoly::zero();
        for k in 0..=max_order {
            let mut term = self.partial(JetVar { comp, order: k });
            for _ in 0..k {
                term = term.total_derivative();
            }
            if k % 2 == 1 {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn to_canonical_string(&self) -> String {
        self.poly.to_canonical_string()
    }
}

impl std::fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl std::fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}
