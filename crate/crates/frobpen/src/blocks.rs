//! Single-block building material: the companion-form operator `L`, the
//! metric `g0`, the polynomial pencil `P(L) g0`, and the diagonal-chart
//! representations.
//!
//! In the companion chart `y1..yn` the operator and metric follow the fixed
//! patterns
//!
//! ```text
//! L = [ y1 1 0 .. ]        g0[i][j] = 1     if i+j = n+1
//!     [ y2 0 1 .. ]                 = -y(i+j-n-1) if i+j > n+1
//!     [ ..        ]                 = 0     otherwise (1-based indices)
//!     [ yn 0 0 .. ]
//! ```
//!
//! so `char(L) = t^n - y1 t^{n-1} - ... - yn`. In the diagonal chart
//! `x1..xn` the same pair reads `L = diag(x1..xn)` and
//! `g = diag(1/prod_{s≠i}(x^i - x^s))`. The characteristic-polynomial
//! coefficients `σ^k` (`char = t^n - σ^1 t^{n-1} - ... - σ^n`) connect the
//! two charts: `σ^k = (-1)^{k+1} e_k(x)`.

use crate::error::{CasError, SpecError};
use crate::matrix::RMatrix;
use crate::metric::{Chart, MetricRep, Variance};
use crate::poly::MPoly;
use crate::ratfn::RatFn;
use crate::scalar::ExactScalar;

/// One AFF block in both charts.
#[derive(Clone, Debug)]
pub struct AFFBlock {
    pub dim: usize,
    pub y_vars: Vec<String>,
    pub x_vars: Vec<String>,
    /// Companion-form operator in the y chart.
    pub l_y: RMatrix,
    /// The metric `g0` in the y chart (polynomial entries).
    pub g0_y: RMatrix,
    /// `diag(x1..xn)` in the x chart.
    pub l_x: RMatrix,
    /// The Levi-Civita-style diagonal metric in the x chart.
    pub g_lc_x: RMatrix,
}

/// Builds the block with default variable names `y1..yn` / `x1..xn`.
pub fn make_block(n: usize) -> Result<AFFBlock, SpecError> {
    let y: Vec<String> = (1..=n).map(|k| format!("y{k}")).collect();
    let x: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    make_block_with_vars(n, y, x)
}

/// Builds the block over caller-supplied coordinate names (used by the
/// multi-block assembly, where block α gets `y{α}_{k}` / `x{α}_{k}`).
pub fn make_block_with_vars(
    n: usize,
    y_vars: Vec<String>,
    x_vars: Vec<String>,
) -> Result<AFFBlock, SpecError> {
    if n < 1 {
        return Err(SpecError::InvalidForest("block dimension must be >= 1".into()));
    }
    assert_eq!(y_vars.len(), n);
    assert_eq!(x_vars.len(), n);

    let yv = |k: usize| RatFn::var(&y_vars[k - 1]); // 1-based
    let l_y = RMatrix::from_fn(n, n, |i, j| {
        if j == 0 {
            yv(i + 1)
        } else if j == i + 1 {
            RatFn::one()
        } else {
            RatFn::zero()
        }
    });
    let g0_y = RMatrix::from_fn(n, n, |i, j| {
        let (i, j) = (i + 1, j + 1);
        if i + j == n + 1 {
            RatFn::one()
        } else if i + j > n + 1 {
            yv(i + j - n - 1).neg()
        } else {
            RatFn::zero()
        }
    });

    let l_x = RMatrix::diagonal((0..n).map(|i| RatFn::var(&x_vars[i])).collect());
    let g_lc_x = RMatrix::from_fn(n, n, |i, j| {
        if i != j {
            return RatFn::zero();
        }
        let mut den = MPoly::one();
        for s in 0..n {
            if s != i {
                den = den.mul(&MPoly::var(&x_vars[i]).sub(&MPoly::var(&x_vars[s])));
            }
        }
        RatFn::new(MPoly::one(), den).expect("nonzero denominator")
    });

    Ok(AFFBlock {
        dim: n,
        y_vars,
        x_vars,
        l_y,
        g0_y,
        l_x,
        g_lc_x,
    })
}

impl AFFBlock {
    /// `P(L)` in the requested chart by Horner's rule; coefficients may be
    /// polynomial (symbolic pencil parameters ride along as variables).
    pub fn poly_of_l(&self, coeffs: &[MPoly], chart: Chart) -> Result<RMatrix, CasError> {
        let l = match chart {
            Chart::BlockY => &self.l_y,
            Chart::DiagonalX => &self.l_x,
            Chart::FrobeniusU => {
                return Err(CasError::DimensionMismatch(
                    "P(L) is built in the x or y chart".into(),
                ))
            }
        };
        let n = self.dim;
        let mut acc = RMatrix::zeros(n, n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(l)?;
            let c = RatFn::from_poly(c.clone());
            for i in 0..n {
                let v = acc.at(i, i).add(&c);
                *acc.at_mut(i, i) = v;
            }
        }
        Ok(acc)
    }

    /// The pencil metric `P(L) g0` (chart y) or `P(L) g_LC` (chart x).
    ///
    /// Degree at most `n + 1`; the identically zero polynomial is flagged
    /// degenerate. Symmetry of the product is certified on construction.
    pub fn pencil_metric(&self, coeffs: &[MPoly], chart: Chart) -> Result<MetricRep, SpecError> {
        if coeffs.len() > self.dim + 2 {
            return Err(SpecError::Parse(format!(
                "deg P = {} exceeds n + 1 = {}",
                coeffs.len() - 1,
                self.dim + 1
            )));
        }
        if coeffs.iter().all(MPoly::is_zero) {
            return Err(SpecError::Degenerate("P is the zero polynomial".into()));
        }
        let pl = self.poly_of_l(coeffs, chart)?;
        let (g, vars) = match chart {
            Chart::BlockY => (pl.mul(&self.g0_y)?, self.y_vars.clone()),
            Chart::DiagonalX => (pl.mul(&self.g_lc_x)?, self.x_vars.clone()),
            Chart::FrobeniusU => unreachable!("rejected above"),
        };
        Ok(MetricRep::new(chart, Variance::Contravariant, g, vars).map_err(SpecError::Cas)?)
    }

    /// Rational-coefficient convenience wrapper.
    pub fn pencil_metric_scalar(
        &self,
        coeffs: &[ExactScalar],
        chart: Chart,
    ) -> Result<MetricRep, SpecError> {
        let c: Vec<MPoly> = coeffs.iter().map(|c| MPoly::constant(c.clone())).collect();
        self.pencil_metric(&c, chart)
    }

    /// Characteristic-polynomial coordinates in the x chart:
    /// `σ^k = (-1)^{k+1} e_k(x)`, so `char(L) = t^n - σ^1 t^{n-1} - ... - σ^n`.
    /// In the y chart these are the coordinates themselves.
    pub fn char_poly_coords(&self) -> Vec<MPoly> {
        let n = self.dim;
        // elementary symmetric polynomials by the recurrence
        // e[k] after processing x_i: e[k] += x_i * e[k-1]
        let mut e: Vec<MPoly> = vec![MPoly::one()];
        e.resize(n + 1, MPoly::zero());
        for i in 0..n {
            let xi = MPoly::var(&self.x_vars[i]);
            for k in (1..=i + 1).rev() {
                e[k] = e[k].add(&xi.mul(&e[k - 1]));
            }
        }
        (1..=n)
            .map(|k| if k % 2 == 1 { e[k].clone() } else { e[k].neg() })
            .collect()
    }

    /// `χ_L(λ)` as a polynomial in the y-chart coordinates:
    /// `λ^n - y^1 λ^{n-1} - ... - y^n`. The argument may itself be a
    /// polynomial (symbolic marks).
    pub fn char_poly_at(&self, lambda: &MPoly) -> MPoly {
        let n = self.dim;
        let mut acc = lambda.pow(n as u32);
        for (k, yname) in self.y_vars.iter().enumerate() {
            let term = MPoly::var(yname).mul(&lambda.pow((n - 1 - k) as u32));
            acc = acc.sub(&term);
        }
        acc
    }

    /// `χ_L(λ)` in the x chart: `prod_i (λ - x^i)`.
    pub fn char_poly_at_x(&self, lambda: &MPoly) -> MPoly {
        let mut acc = MPoly::one();
        for xv in &self.x_vars {
            acc = acc.mul(&lambda.sub(&MPoly::var(xv)));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::{constant_curvature, is_flat, nijenhuis_torsion, ConstCurvature};

    fn sc(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn consts(v: &[i64]) -> Vec<MPoly> {
        v.iter().map(|&n| MPoly::from_int(n)).collect()
    }

    #[test]
    fn norm_pattern_n2() {
        let b = make_block(2).unwrap();
        assert_eq!(b.l_y.entry_strings(), vec![vec!["y1", "1"], vec!["y2", "0"]]);
        assert_eq!(
            b.g0_y.entry_strings(),
            vec![vec!["0", "1"], vec!["1", "(-1)*y1"]]
        );
        // chart x: diag(1/(x1-x2), 1/(x2-x1))
        assert_eq!(
            b.g_lc_x.at(0, 0).to_canonical_string(),
            "(1) / (x1 + (-1)*x2)"
        );
        assert_eq!(
            b.g_lc_x.at(1, 1).to_canonical_string(),
            "((-1)) / (x1 + (-1)*x2)"
        );
    }

    #[test]
    fn n1_degenerate_pattern() {
        let b = make_block(1).unwrap();
        assert_eq!(b.l_y.entry_strings(), vec![vec!["y1"]]);
        assert_eq!(b.g0_y.entry_strings(), vec![vec!["1"]]);
        assert_eq!(b.g_lc_x.entry_strings(), vec![vec!["1"]]);
    }

    #[test]
    fn p3_blocks_n2() {
        let b = make_block(2).unwrap();
        // P(t) = t: [[1,0],[0,y2]]
        let g1 = b.pencil_metric(&consts(&[0, 1]), Chart::BlockY).unwrap();
        assert_eq!(
            g1.mat.entry_strings(),
            vec![vec!["1", "0"], vec!["0", "y2"]]
        );
        // P(t) = t^2: [[y1,y2],[y2,0]]
        let g2 = b.pencil_metric(&consts(&[0, 0, 1]), Chart::BlockY).unwrap();
        assert_eq!(
            g2.mat.entry_strings(),
            vec![vec!["y1", "y2"], vec!["y2", "0"]]
        );
        // P(t) = 1: g0 itself
        let g0 = b.pencil_metric(&consts(&[1]), Chart::BlockY).unwrap();
        assert_eq!(g0.mat, b.g0_y);
    }

    #[test]
    fn sigma_coordinates() {
        let b2 = make_block(2).unwrap();
        let sig = b2.char_poly_coords();
        assert_eq!(sig[0].to_canonical_string(), "x1 + x2");
        assert_eq!(sig[1].to_canonical_string(), "(-1)*x1*x2");
        let b1 = make_block(1).unwrap();
        assert_eq!(b1.char_poly_coords()[0].to_canonical_string(), "x1");
        // n = 3: sign fixed by χ(t) = det(t·Id - L): σ^3 = x1 x2 x3
        let b3 = make_block(3).unwrap();
        let sig3 = b3.char_poly_coords();
        assert_eq!(sig3[2].to_canonical_string(), "x1*x2*x3");
        // det(t·Id - L) expanded symbolically must equal
        // t^3 - σ1 t^2 - σ2 t - σ3 (oracle: matrix determinant)
        let t = RatFn::var("t");
        let tid_minus_l = RMatrix::identity(3)
            .scale(&t)
            .sub(&b3.l_x)
            .unwrap();
        let det = tid_minus_l.determinant().unwrap();
        let tp = MPoly::var("t");
        let mut expect = tp.pow(3);
        for (k, s) in sig3.iter().enumerate() {
            expect = expect.sub(&s.mul(&tp.pow((2 - k) as u32)));
        }
        assert_eq!(det, RatFn::from_poly(expect));
    }

    #[test]
    fn chart_consistency_via_sigma_pushforward() {
        // Pushing (L, g_LC) through x ↦ σ reproduces the companion pair for
        // n = 2 and 3: J L J^{-1} = L_y(σ) and J g J^T = g0_y(σ).
        for n in [2usize, 3] {
            let b = make_block(n).unwrap();
            let sig = b.char_poly_coords();
            let jac = RMatrix::from_fn(n, n, |i, j| {
                RatFn::from_poly(sig[i].partial_derivative(&b.x_vars[j]))
            });
            let jinv = jac.inverse().unwrap();
            let l_push = jac.mul(&b.l_x).unwrap().mul(&jinv).unwrap();
            let g_push = jac.mul(&b.g_lc_x).unwrap().mul(&jac.transpose()).unwrap();
            let subs: Vec<(&str, MPoly)> = b
                .y_vars
                .iter()
                .zip(sig.iter())
                .map(|(name, s)| (name.as_str(), s.clone()))
                .collect();
            let l_expect = b.l_y.substitute(&subs).unwrap();
            let g_expect = b.g0_y.substitute(&subs).unwrap();
            assert_eq!(l_push, l_expect, "operator chart consistency n={n}");
            assert_eq!(g_push, g_expect, "metric chart consistency n={n}");
        }
    }

    #[test]
    fn symmetry_for_any_p() {
        let b = make_block(3).unwrap();
        let g = b
            .pencil_metric(&consts(&[3, -1, 2, 5]), Chart::BlockY)
            .unwrap();
        assert!(g.mat.is_symmetric());
        // follows from L g0 = g0 L^T
        let lg = b.l_y.mul(&b.g0_y).unwrap();
        let glt = b.g0_y.mul(&b.l_y.transpose()).unwrap();
        assert_eq!(lg, glt);
    }

    #[test]
    fn companion_torsion_vanishes_n3() {
        let b = make_block(3).unwrap();
        let (_, cert) = nijenhuis_torsion(&b.l_y, &b.y_vars).unwrap();
        assert!(cert.passed());
    }

    #[test]
    fn flatness_and_constant_curvature() {
        // deg P <= n: flat; deg P = n + 1: constant curvature -a_{n+1}/4.
        let b = make_block(2).unwrap();
        let flat = b.pencil_metric(&consts(&[1, 2, -3]), Chart::BlockY).unwrap();
        assert!(is_flat(&flat).unwrap().passed());
        // P(t) = t^3 in the x chart: K = -1/4
        let curved = b
            .pencil_metric(&consts(&[0, 0, 0, 1]), Chart::DiagonalX)
            .unwrap();
        match constant_curvature(&curved).unwrap() {
            ConstCurvature::Constant(k) => assert_eq!(k, ExactScalar::new(-1, 4)),
            other => panic!("expected constant curvature, got {other:?}"),
        }
        // P(t) = 4 t^3: K = -1 (scale linearity)
        let curved4 = b
            .pencil_metric(&consts(&[0, 0, 0, 4]), Chart::DiagonalX)
            .unwrap();
        match constant_curvature(&curved4).unwrap() {
            ConstCurvature::Constant(k) => assert_eq!(k, sc(-1)),
            other => panic!("expected constant curvature, got {other:?}"),
        }
        // nonzero curvature tensor for the cubic member
        assert!(!is_flat(&curved).unwrap().passed());
    }

    #[test]
    fn char_poly_at_consistency() {
        let b = make_block(2).unwrap();
        let lam = MPoly::constant(ExactScalar::new(1, 2));
        // y chart: λ^2 - y1 λ - y2
        let chi = b.char_poly_at(&lam);
        assert_eq!(chi.to_canonical_string(), "(-1/2)*y1 + (-1)*y2 + 1/4");
        // x chart: (λ - x1)(λ - x2); substituting σ into the y-chart form
        // must agree with the x-chart product
        let chi_x = b.char_poly_at_x(&lam);
        let sig = b.char_poly_coords();
        let subs: Vec<(&str, MPoly)> = b
            .y_vars
            .iter()
            .zip(sig.iter())
            .map(|(n, s)| (n.as_str(), s.clone()))
            .collect();
        assert_eq!(chi.substitute(&subs), chi_x);
    }
}
