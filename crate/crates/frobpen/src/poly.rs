//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in graded lexicographic order (total degree first, then
//! lexicographic on the exponent vector with respect to the declared variable
//! order), descending, with no zero coefficients stored. Equal polynomials
//! over the same universe therefore have identical representations, and the
//! canonical string form is the bit-exact contract used by golden files.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::CasError;
use crate::scalar::ExactScalar;
use crate::vars::VarSet;

pub type Expo = Vec<u16>;

/// Graded lexicographic comparison of exponent vectors of equal length.
fn grlex_cmp(a: &[u16], b: &[u16]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone)]
pub struct MPoly {
    vars: VarSet,
    /// Sorted descending in grlex order; no zero coefficients.
    terms: Vec<(Expo, ExactScalar)>,
}

impl MPoly {
    // ---- constructors ----

    pub fn zero() -> Self {
        MPoly {
            vars: VarSet::empty(),
            terms: Vec::new(),
        }
    }

    pub fn zero_over(vars: &VarSet) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(c: ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            vars: VarSet::empty(),
            terms: vec![(Vec::new(), c)],
        }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(ExactScalar::from_int(n))
    }

    /// The variable `name` as a polynomial.
    pub fn var(name: &str) -> Self {
        let vars = VarSet::new([name]);
        MPoly {
            vars,
            terms: vec![(vec![1], ExactScalar::one())],
        }
    }

    /// Builds from raw terms over a universe (exponent length must match).
    pub fn from_terms(vars: VarSet, raw: Vec<(Expo, ExactScalar)>) -> Self {
        let n = vars.len();
        let mut acc: BTreeMap<Expo, ExactScalar> = BTreeMap::new();
        for (e, c) in raw {
            assert_eq!(e.len(), n, "exponent vector length mismatch");
            let entry = acc.entry(e).or_insert_with(ExactScalar::zero);
            *entry += c;
        }
        let mut terms: Vec<(Expo, ExactScalar)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|x, y| grlex_cmp(&y.0, &x.0));
        MPoly { vars, terms }
    }

    // ---- inspection ----

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> &[(Expo, ExactScalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        if self.is_zero() {
            return Some(ExactScalar::zero());
        }
        if self.is_constant() {
            return Some(self.terms[0].1.clone());
        }
        None
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .first()
            .map(|(e, _)| e.iter().map(|&x| x as u64).sum())
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var_idx: usize) -> u16 {
        self.terms
            .iter()
            .map(|(e, _)| e.get(var_idx).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Leading (grlex-greatest) coefficient; zero polynomial yields zero.
    pub fn leading_coeff(&self) -> ExactScalar {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn leading_expo(&self) -> Option<&Expo> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Indices of variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        let n = self.vars.len();
        let mut used = vec![false; n];
        for (e, _) in &self.terms {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    used[i] = true;
                }
            }
        }
        (0..n).filter(|&i| used[i]).collect()
    }

    // ---- universe management ----

    fn remap(&self, vars: &VarSet, map: &[usize]) -> MPoly {
        let n = vars.len();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0u16; n];
                for (i, &x) in e.iter().enumerate() {
                    ne[map[i]] = x;
                }
                (ne, c.clone())
            })
            .collect();
        let mut p = MPoly {
            vars: vars.clone(),
            terms,
        };
        p.terms.sort_by(|x, y| grlex_cmp(&y.0, &x.0));
        p
    }

    /// Rewrites both operands over the union universe.
    pub fn align(a: &MPoly, b: &MPoly) -> (MPoly, MPoly) {
        if a.vars.same(&b.vars) {
            return (a.clone(), b.clone());
        }
        let (u, ma, mb) = a.vars.union(&b.vars);
        (a.remap(&u, &ma), b.remap(&u, &mb))
    }

    /// Rewrites over a (super-)universe containing all of this one's names.
    pub fn over(&self, vars: &VarSet) -> MPoly {
        if self.vars.same(vars) {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                vars.index_of(n)
                    .unwrap_or_else(|| panic!("target universe misses variable {n}"))
            })
            .collect();
        self.remap(vars, &map)
    }

    // ---- arithmetic ----

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        let (a, b) = Self::align(self, rhs);
        let mut out: Vec<(Expo, ExactScalar)> = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match grlex_cmp(&a.terms[i].0, &b.terms[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.terms[i].1 + &b.terms[j].1;
                    if !c.is_zero() {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend_from_slice(&b.terms[j..]);
        MPoly {
            vars: a.vars,
            terms: out,
        }
    }

    pub fn sub(&self, rhs: &MPoly) -> MPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            let (a, _) = Self::align(self, rhs);
            return MPoly::zero_over(&a.vars);
        }
        let (a, b) = Self::align(self, rhs);
        let mut acc: BTreeMap<Expo, ExactScalar> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Expo = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let entry = acc.entry(e).or_insert_with(ExactScalar::zero);
                *entry += ca * cb;
            }
        }
        let mut terms: Vec<(Expo, ExactScalar)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|x, y| grlex_cmp(&y.0, &x.0));
        MPoly {
            vars: a.vars,
            terms,
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero_over(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc
    }

    // ---- calculus / evaluation ----

    /// Formal partial derivative; a name absent from the universe gives zero.
    pub fn partial_derivative(&self, var: &str) -> MPoly {
        let Some(idx) = self.vars.index_of(var) else {
            return MPoly::zero_over(&self.vars);
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[idx] > 0)
            .map(|(e, c)| {
                let mut ne = e.clone();
                ne[idx] -= 1;
                (ne, c * &ExactScalar::from_int(e[idx] as i64))
            })
            .collect();
        let mut p = MPoly {
            vars: self.vars.clone(),
            terms,
        };
        p.terms.sort_by(|x, y| grlex_cmp(&y.0, &x.0));
        p
    }

    /// Substitutes polynomials for variables (unlisted variables stay put).
    pub fn substitute(&self, map: &[(&str, MPoly)]) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let idx_map: Vec<Option<&MPoly>> = self
            .vars
            .names()
            .iter()
            .map(|n| map.iter().find(|(k, _)| k == n).map(|(_, v)| v))
            .collect();
        let mut out = MPoly::zero_over(&self.vars);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let factor = match idx_map[i] {
                    Some(p) => p.pow(x as u32),
                    None => MPoly::var(&self.vars.names()[i]).pow(x as u32),
                };
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluates at a rational point given as name -> value.
    pub fn eval(&self, point: &[(&str, ExactScalar)]) -> Result<ExactScalar, CasError> {
        let idx_vals: Vec<ExactScalar> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                point
                    .iter()
                    .find(|(k, _)| k == n)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| CasError::UnknownVariable(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut acc = ExactScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= idx_vals[i].pow(x as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    // ---- structure used by gcd / exact division ----

    /// Coefficients of `self` viewed as univariate in `var_idx`, ascending
    /// degree; coefficients live over the same universe with that exponent
    /// zeroed.
    pub fn univariate_in(&self, var_idx: usize) -> Vec<MPoly> {
        let d = self.degree_in(var_idx) as usize;
        let mut coeffs: Vec<Vec<(Expo, ExactScalar)>> = vec![Vec::new(); d + 1];
        for (e, c) in &self.terms {
            let k = e[var_idx] as usize;
            let mut ne = e.clone();
            ne[var_idx] = 0;
            coeffs[k].push((ne, c.clone()));
        }
        coeffs
            .into_iter()
            .map(|raw| MPoly::from_terms(self.vars.clone(), raw))
            .collect()
    }

    /// Rebuilds from ascending univariate coefficients in `var_idx`.
    pub fn from_univariate(vars: &VarSet, var_idx: usize, coeffs: &[MPoly]) -> MPoly {
        let mut raw = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let c = c.over(vars);
            for (e, s) in &c.terms {
                let mut ne = e.clone();
                ne[var_idx] += k as u16;
                raw.push((ne, s.clone()));
            }
        }
        MPoly::from_terms(vars.clone(), raw)
    }

    /// Exact division: returns `self / d` when the division leaves no
    /// remainder.
    pub fn div_exact(&self, d: &MPoly) -> Result<MPoly, CasError> {
        if d.is_zero() {
            return Err(CasError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(MPoly::zero_over(&self.vars));
        }
        let (mut rem, d) = Self::align(self, d);
        let vars = rem.vars.clone();
        let d_lead = d.terms.first().expect("nonzero divisor");
        let mut q_terms: Vec<(Expo, ExactScalar)> = Vec::new();
        while !rem.is_zero() {
            let r_lead = rem.terms.first().expect("nonzero remainder");
            let mut qe = Vec::with_capacity(r_lead.0.len());
            for (&re, &de) in r_lead.0.iter().zip(d_lead.0.iter()) {
                if re < de {
                    return Err(CasError::InexactDivision);
                }
                qe.push(re - de);
            }
            let qc = &r_lead.1 / &d_lead.1;
            let qt = MPoly {
                vars: vars.clone(),
                terms: vec![(qe.clone(), qc.clone())],
            };
            rem = rem.sub(&qt.mul(&d));
            q_terms.push((qe, qc));
        }
        Ok(MPoly::from_terms(vars, q_terms))
    }

    /// Divides every coefficient so the leading one becomes 1.
    pub fn monic(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip().expect("nonzero leading coefficient"))
    }

    // ---- canonical string ----

    /// Canonical form: terms in grlex-descending order joined by " + ";
    /// each term is `coeff*v1^e1*...` with `^1` omitted, a coefficient of 1
    /// omitted for non-constant terms, and negative coefficients
    /// parenthesized, e.g. `(-1)*x1^2*x2 + 3/2*x2`.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let names = self.vars.names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut factors: Vec<String> = Vec::new();
                for (i, &x) in e.iter().enumerate() {
                    match x {
                        0 => {}
                        1 => factors.push(names[i].clone()),
                        _ => factors.push(format!("{}^{}", names[i], x)),
                    }
                }
                let coeff = if c.is_negative() {
                    format!("({c})")
                } else {
                    format!("{c}")
                };
                if factors.is_empty() {
                    coeff
                } else if c.is_one() {
                    factors.join("*")
                } else {
                    format!("{}*{}", coeff, factors.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars.same(&other.vars) {
            return self.terms == other.terms;
        }
        let (a, b) = Self::align(self, other);
        a.terms == b.terms
    }
}

impl Eq for MPoly {}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}
