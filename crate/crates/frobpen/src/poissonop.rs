//! Coefficient data of the Poisson operators: the first-order operator
//! `g^{αβ} D - Γ^{αβ}_γ u^γ_x`, the third-order Darboux operator in an
//! arbitrary chart (four bands computed from the Levi-Civita connection of
//! `h`), the simultaneous normal form built from affine data, and the
//! hydrodynamic Hamiltonian flow.
//!
//! The index convention is fixed once: the operator is applied to
//! `δH/δu^α` and the result is multiplied by `δHbar/δu^β`, so every band
//! is a tensor in `(α, β)` plus the jet indices of its monomial.

use crate::error::{CasError, SpecError};
use crate::frobalg::FormMatrix;
use crate::frobmap::FrobeniusData;
use crate::jet::DiffPoly;
use crate::matrix::RMatrix;
use crate::metric::{Chart, MetricRep, Variance};
use crate::poly::MPoly;
use crate::ratfn::RatFn;
use crate::report::Certificate;
use crate::riemann::{contravariant_christoffel, is_flat, levi_civita, Connection3};
use crate::scalar::ExactScalar;

fn t3(n: usize) -> Vec<RatFn> {
    vec![RatFn::zero(); n * n * n]
}

fn t4(n: usize) -> Vec<RatFn> {
    vec![RatFn::zero(); n * n * n * n]
}

fn t5(n: usize) -> Vec<RatFn> {
    vec![RatFn::zero(); n * n * n * n * n]
}

/// First-order operator coefficients: `g^{αβ}` at `D`, and the
/// `u^γ_x`-coefficient `-Γ^{αβ}_γ` at `D^0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderOp {
    pub n: usize,
    pub g: RMatrix,
    d0: Vec<RatFn>,
    /// Flatness of the defining metric: a warning, not a gate.
    pub flat: Certificate,
}

impl FirstOrderOp {
    pub fn d0(&self, al: usize, be: usize, ga: usize) -> &RatFn {
        &self.d0[(al * self.n + be) * self.n + ga]
    }

    pub fn scale(&self, c: &ExactScalar) -> FirstOrderOp {
        FirstOrderOp {
            n: self.n,
            g: self.g.scale(&RatFn::from_scalar(c.clone())),
            d0: self.d0.iter().map(|e| e.scale(c)).collect(),
            flat: self.flat.clone(),
        }
    }

    pub fn add(&self, rhs: &FirstOrderOp) -> FirstOrderOp {
        FirstOrderOp {
            n: self.n,
            g: self.g.add(&rhs.g).expect("same dimension"),
            d0: self
                .d0
                .iter()
                .zip(rhs.d0.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
            flat: Certificate::pass(),
        }
    }
}

/// The operator `A_g = g^{αβ} D - Γ^{αβ}_γ u^γ_x`.
///
/// Non-flat metrics are accepted (so counterexamples can be built); the
/// flatness certificate rides along as a warning.
pub fn first_order_op(g: &MetricRep) -> Result<FirstOrderOp, CasError> {
    let n = g.dim();
    let gamma = contravariant_christoffel(g, &levi_civita(g)?)?;
    let flat = is_flat(g)?;
    let mut d0 = t3(n);
    for al in 0..n {
        for be in 0..n {
            for ga in 0..n {
                d0[(al * n + be) * n + ga] = gamma.at(al, be, ga).neg();
            }
        }
    }
    Ok(FirstOrderOp {
        n,
        g: g.contravariant_mat()?,
        d0,
        flat,
    })
}

/// Third-order operator coefficients, exactly the four-band expansion:
///
/// ```text
/// B_h = h^{αβ} D^3
///     - 3 h^{αq} Γ^β_{qs} u^s_x D^2
///     + 3 ( h^{αq}(Γ^p_{qs}Γ^β_{pr} - ∂_r Γ^β_{qs}) u^s_x u^r_x
///         - h^{αq} Γ^β_{qs} u^s_{xx} ) D
///     + ( cubic u^s_x u^r_x u^p_x + mixed u^s_x u^r_{xx} - h^{αq}Γ^β_{qs} u^s_{xxx} )
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct ThirdOrderOp {
    pub n: usize,
    pub h: RMatrix,
    d2: Vec<RatFn>,
    d1_xx: Vec<RatFn>,
    d1_x2: Vec<RatFn>,
    d0_xxx: Vec<RatFn>,
    d0_x_x2: Vec<RatFn>,
    d0_x3: Vec<RatFn>,
    pub flat: Certificate,
}

impl ThirdOrderOp {
    /// Coefficient of `u^s_x` at `D^2`.
    pub fn d2(&self, al: usize, be: usize, s: usize) -> &RatFn {
        &self.d2[(al * self.n + be) * self.n + s]
    }

    /// Coefficient of `u^s_x u^r_x` at `D`.
    pub fn d1_xx(&self, al: usize, be: usize, s: usize, r: usize) -> &RatFn {
        &self.d1_xx[((al * self.n + be) * self.n + s) * self.n + r]
    }

    /// Coefficient of `u^s_{xx}` at `D`.
    pub fn d1_x2(&self, al: usize, be: usize, s: usize) -> &RatFn {
        &self.d1_x2[(al * self.n + be) * self.n + s]
    }

    /// Coefficient of `u^s_x u^r_x u^p_x` at `D^0`.
    pub fn d0_xxx(&self, al: usize, be: usize, s: usize, r: usize, p: usize) -> &RatFn {
        &self.d0_xxx[(((al * self.n + be) * self.n + s) * self.n + r) * self.n + p]
    }

    /// Coefficient of `u^s_x u^r_{xx}` at `D^0`.
    pub fn d0_x_x2(&self, al: usize, be: usize, s: usize, r: usize) -> &RatFn {
        &self.d0_x_x2[((al * self.n + be) * self.n + s) * self.n + r]
    }

    /// Coefficient of `u^s_{xxx}` at `D^0`.
    pub fn d0_x3(&self, al: usize, be: usize, s: usize) -> &RatFn {
        &self.d0_x3[(al * self.n + be) * self.n + s]
    }

    /// Darboux collapse: every band below `D^3` is identically zero.
    pub fn subleading_is_zero(&self) -> bool {
        self.d2.iter().all(RatFn::is_zero)
            && self.d1_xx.iter().all(RatFn::is_zero)
            && self.d1_x2.iter().all(RatFn::is_zero)
            && self.d0_xxx.iter().all(RatFn::is_zero)
            && self.d0_x_x2.iter().all(RatFn::is_zero)
            && self.d0_x3.iter().all(RatFn::is_zero)
    }

    pub fn scale(&self, c: &ExactScalar) -> ThirdOrderOp {
        let sc = |v: &Vec<RatFn>| v.iter().map(|e| e.scale(c)).collect();
        ThirdOrderOp {
            n: self.n,
            h: self.h.scale(&RatFn::from_scalar(c.clone())),
            d2: sc(&self.d2),
            d1_xx: sc(&self.d1_xx),
            d1_x2: sc(&self.d1_x2),
            d0_xxx: sc(&self.d0_xxx),
            d0_x_x2: sc(&self.d0_x_x2),
            d0_x3: sc(&self.d0_x3),
            flat: self.flat.clone(),
        }
    }

    pub fn add(&self, rhs: &ThirdOrderOp) -> ThirdOrderOp {
        let zip = |a: &Vec<RatFn>, b: &Vec<RatFn>| {
            a.iter().zip(b.iter()).map(|(x, y)| x.add(y)).collect()
        };
        ThirdOrderOp {
            n: self.n,
            h: self.h.add(&rhs.h).expect("same dimension"),
            d2: zip(&self.d2, &rhs.d2),
            d1_xx: zip(&self.d1_xx, &rhs.d1_xx),
            d1_x2: zip(&self.d1_x2, &rhs.d1_x2),
            d0_xxx: zip(&self.d0_xxx, &rhs.d0_xxx),
            d0_x_x2: zip(&self.d0_x_x2, &rhs.d0_x_x2),
            d0_x3: zip(&self.d0_x3, &rhs.d0_x3),
            flat: Certificate::pass(),
        }
    }
}

/// The full four-band expansion of `B_h` from the Levi-Civita connection of
/// `h` in the metric's own chart.
///
/// Constant-entry metrics short-circuit to `h D^3` (their chart is already
/// flat, and the connection vanishes without inverting `h`, so degenerate
/// constant forms are accepted the way the normal-form construction needs).
pub fn third_order_op(h: &MetricRep) -> Result<ThirdOrderOp, CasError> {
    let n = h.dim();
    let constant = (0..n).all(|i| {
        (0..n).all(|j| h.mat.at(i, j).as_poly().map(MPoly::is_constant) == Some(true))
    });
    if constant {
        return Ok(ThirdOrderOp {
            n,
            h: match h.variance {
                Variance::Contravariant => h.mat.clone(),
                Variance::Covariant => h.mat.inverse()?,
            },
            d2: t3(n),
            d1_xx: t4(n),
            d1_x2: t3(n),
            d0_xxx: t5(n),
            d0_x_x2: t4(n),
            d0_x3: t3(n),
            flat: Certificate::pass(),
        });
    }
    let vars = &h.vars;
    let gamma = levi_civita(h)?;
    let flat = is_flat(h)?;
    let hm = h.contravariant_mat()?;

    let dgamma = |l: usize, i: usize, j: usize, v: usize| -> RatFn {
        gamma.at(l, i, j).partial_derivative(&vars[v])
    };

    let mut d2 = t3(n);
    let mut d1_xx = t4(n);
    let mut d1_x2 = t3(n);
    let mut d0_xxx = t5(n);
    let mut d0_x_x2 = t4(n);
    let mut d0_x3 = t3(n);

    // h^{αq} Γ^β_{qs} appears in three bands
    let hgam = |al: usize, be: usize, s: usize| -> RatFn {
        let mut acc = RatFn::zero();
        for q in 0..n {
            if hm.at(al, q).is_zero() {
                continue;
            }
            acc = acc.add(&hm.at(al, q).mul(gamma.at(be, q, s)));
        }
        acc
    };

    for al in 0..n {
        for be in 0..n {
            for s in 0..n {
                let hg = hgam(al, be, s);
                d2[(al * n + be) * n + s] = hg.scale(&ExactScalar::from_int(-3));
                d1_x2[(al * n + be) * n + s] = hg.scale(&ExactScalar::from_int(-3));
                d0_x3[(al * n + be) * n + s] = hg.neg();
            }
        }
    }

    let three = ExactScalar::from_int(3);
    for al in 0..n {
        for q in 0..n {
            if hm.at(al, q).is_zero() {
                continue;
            }
            let hq = hm.at(al, q);
            for be in 0..n {
                for s in 0..n {
                    for r in 0..n {
                        // D band, u^s_x u^r_x: 3 h^{αq}(Γ^p_{qs}Γ^β_{pr} - ∂_r Γ^β_{qs})
                        let mut inner = dgamma(be, q, s, r).neg();
                        for p in 0..n {
                            inner = inner.add(&gamma.at(p, q, s).mul(gamma.at(be, p, r)));
                        }
                        let idx = ((al * n + be) * n + s) * n + r;
                        d1_xx[idx] = d1_xx[idx].add(&hq.mul(&inner).scale(&three));

                        // D^0 band, u^s_x u^r_{xx}:
                        // h^{αq}(2Γ^a_{qs}Γ^β_{ar} + Γ^a_{qr}Γ^β_{as}
                        //        - 2 ∂_s Γ^β_{qr} - ∂_r Γ^β_{qs})
                        let mut inner = dgamma(be, q, r, s)
                            .scale(&ExactScalar::from_int(-2))
                            .sub(&dgamma(be, q, s, r));
                        for a in 0..n {
                            inner = inner.add(
                                &gamma
                                    .at(a, q, s)
                                    .mul(gamma.at(be, a, r))
                                    .scale(&ExactScalar::from_int(2)),
                            );
                            inner = inner.add(&gamma.at(a, q, r).mul(gamma.at(be, a, s)));
                        }
                        d0_x_x2[idx] = d0_x_x2[idx].add(&hq.mul(&inner));

                        // D^0 band, u^s_x u^r_x u^p_x:
                        // h^{αq}(2Γ^a_{qs} ∂_p Γ^β_{ar} + ∂_r Γ^a_{qs} Γ^β_{ap}
                        //        - Γ^a_{qs}Γ^b_{ar}Γ^β_{bp} - ∂²_{rp} Γ^β_{qs})
                        for p in 0..n {
                            let mut inner = dgamma(be, q, s, r)
                                .partial_derivative(&vars[p])
                                .neg();
                            for a in 0..n {
                                inner = inner.add(
                                    &gamma
                                        .at(a, q, s)
                                        .mul(&dgamma(be, a, r, p))
                                        .scale(&ExactScalar::from_int(2)),
                                );
                                inner = inner.add(&dgamma(a, q, s, r).mul(gamma.at(be, a, p)));
                                for bb in 0..n {
                                    inner = inner.sub(
                                        &gamma
                                            .at(a, q, s)
                                            .mul(gamma.at(bb, a, r))
                                            .mul(gamma.at(be, bb, p)),
                                    );
                                }
                            }
                            let idx5 = (((al * n + be) * n + s) * n + r) * n + p;
                            d0_xxx[idx5] = d0_xxx[idx5].add(&hq.mul(&inner));
                        }
                    }
                }
            }
        }
    }

    Ok(ThirdOrderOp {
        n,
        h: hm,
        d2,
        d1_xx,
        d1_x2,
        d0_xxx,
        d0_x_x2,
        d0_x3,
        flat,
    })
}

/// The simultaneous normal form built directly from affine data:
/// `h^{αβ} D^3 + (b^{αβ} + a^{αβ}_s u^s) D + 1/2 a^{αβ}_s u^s_x`,
/// cross-checked against the two independently computed operators.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub third: ThirdOrderOp,
    pub first: FirstOrderOp,
    /// Exact agreement of the direct coefficients with the two
    /// independently computed operator expansions.
    pub consistent: bool,
}

/// Builds the canonical coefficient set from `(b, a, h)` and certifies it
/// against `third_order_op(h) + first_order_op(b + a·u)` computed through
/// the general chart-level formulas.
pub fn normal_form(d: &FrobeniusData, h: &FormMatrix) -> Result<NormalForm, SpecError> {
    let n = d.n;
    let u_vars: Vec<String> = (1..=n).map(|k| format!("u{k}")).collect();

    // canonical (direct) coefficients
    let half = ExactScalar::new(1, 2);
    let mut d0 = t3(n);
    for al in 0..n {
        for be in 0..n {
            for ga in 0..n {
                d0[(al * n + be) * n + ga] =
                    RatFn::from_poly(d.a[ga][al][be].clone()).scale(&half);
            }
        }
    }
    let g_affine = d.reconstruct(&u_vars)?;
    let canonical_first = FirstOrderOp {
        n,
        g: g_affine.mat.clone(),
        d0,
        flat: Certificate::pass(),
    };
    let h_mat = RMatrix::from_fn(n, n, |i, j| RatFn::from_poly(h[i][j].clone()));
    let canonical_third = ThirdOrderOp {
        n,
        h: h_mat.clone(),
        d2: t3(n),
        d1_xx: t4(n),
        d1_x2: t3(n),
        d0_xxx: t5(n),
        d0_x_x2: t4(n),
        d0_x3: t3(n),
        flat: Certificate::pass(),
    };

    // independent path: generic operators on the reconstructed metrics
    let first = first_order_op(&g_affine).map_err(SpecError::Cas)?;
    let h_metric = MetricRep::new(
        Chart::FrobeniusU,
        Variance::Contravariant,
        h_mat,
        u_vars,
    )
    .map_err(SpecError::Cas)?;
    let third = third_order_op(&h_metric).map_err(SpecError::Cas)?;

    let consistent = first.g == canonical_first.g
        && first.d0 == canonical_first.d0
        && third.h == canonical_third.h
        && third.subleading_is_zero();

    Ok(NormalForm {
        third: canonical_third,
        first: canonical_first,
        consistent,
    })
}

/// Hamiltonian flow of hydrodynamic type for a degree-0 Hamiltonian `H(u)`:
/// `u^β_t = g^{βα} H_{,αγ} u^γ_x - Γ^{βα}_γ H_{,α} u^γ_x`.
///
/// Coefficients must reduce to polynomials in `u` (differential polynomials
/// carry polynomial coefficients only); metrics with non-polynomial
/// Christoffel data are rejected.
pub fn hydro_flow(g: &MetricRep, hamiltonian: &MPoly) -> Result<Vec<DiffPoly>, SpecError> {
    let n = g.dim();
    let gm = g.contravariant_mat().map_err(SpecError::Cas)?;
    let gamma = contravariant_christoffel(g, &levi_civita(g).map_err(SpecError::Cas)?)
        .map_err(SpecError::Cas)?;
    let d1: Vec<MPoly> = g
        .vars
        .iter()
        .map(|v| hamiltonian.partial_derivative(v))
        .collect();
    let mut flows = Vec::with_capacity(n);
    for be in 0..n {
        let mut flow = DiffPoly::zero();
        for ga in 0..n {
            let mut coeff = RatFn::zero();
            for al in 0..n {
                let hess = d1[al].partial_derivative(&g.vars[ga]);
                coeff = coeff.add(&gm.at(be, al).mul(&RatFn::from_poly(hess)));
                coeff = coeff.sub(&gamma.at(be, al, ga).mul(&RatFn::from_poly(d1[al].clone())));
            }
            if coeff.is_zero() {
                continue;
            }
            let Some(poly) = coeff.as_poly() else {
                return Err(SpecError::Unsupported(format!(
                    "flow coefficient for u{}_x is not polynomial: {}",
                    ga + 1,
                    coeff.to_canonical_string()
                )));
            };
            let term = DiffPoly::from_poly(poly.mul(&MPoly::var(&format!("u{}_x", ga + 1))));
            flow = flow.add(&term);
        }
        flows.push(flow);
    }
    Ok(flows)
}

/// Paper-style display of the normal form, one line per index pair:
/// `B[α,β] = h D^3 + (b + a·u) D + 1/2 a u^s_x`.
pub fn pretty_normal_form(nf: &NormalForm) -> String {
    let n = nf.first.n;
    let mut out = String::new();
    for al in 0..n {
        for be in 0..n {
            let h = nf.third.h.at(al, be);
            let g = nf.first.g.at(al, be);
            let mut line = format!("({},{}): ", al + 1, be + 1);
            let mut parts = Vec::new();
            if !h.is_zero() {
                parts.push(format!("({}) D^3", h.to_canonical_string()));
            }
            if !g.is_zero() {
                parts.push(format!("({}) D", g.to_canonical_string()));
            }
            for ga in 0..n {
                let c = nf.first.d0(al, be, ga);
                if !c.is_zero() {
                    parts.push(format!("({})*u{}_x", c.to_canonical_string(), ga + 1));
                }
            }
            if parts.is_empty() {
                parts.push("0".into());
            }
            line.push_str(&parts.join(" + "));
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::assemble;
    use crate::forest::{ForestSpec, PencilSpec};
    use crate::frobalg::build_h;
    use crate::frobmap::decompose_assembled;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn metric(entries: Vec<RatFn>, vars: &[&str]) -> MetricRep {
        let n = vars.len();
        MetricRep::new(
            Chart::FrobeniusU,
            Variance::Contravariant,
            RMatrix::new(n, n, entries),
            vars.iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    fn aff_data(coeffs: &[i64]) -> FrobeniusData {
        let f = ForestSpec::new(vec![2], vec![]).unwrap();
        let spec = PencilSpec::new(f, vec![coeffs.iter().map(|&x| s(x)).collect()]).unwrap();
        let am = assemble(&spec, Chart::BlockY).unwrap();
        decompose_assembled(&am).unwrap().1.data().unwrap().clone()
    }

    #[test]
    fn constant_metric_first_order() {
        let g = metric(
            vec![RatFn::one(), RatFn::zero(), RatFn::zero(), RatFn::from_int(2)],
            &["u1", "u2"],
        );
        let op = first_order_op(&g).unwrap();
        assert!(op.flat.passed());
        for al in 0..2 {
            for be in 0..2 {
                for ga in 0..2 {
                    assert!(op.d0(al, be, ga).is_zero());
                }
            }
        }
    }

    #[test]
    fn aff_g2_d0_band_is_half_a() {
        // g2 = [[u1, u2], [u2, 0]]: D^0 term must be +1/2 a^{αβ}_s u^s_x
        let d = aff_data(&[0, 0, 1]);
        let g = d.reconstruct(&["u1".into(), "u2".into()]).unwrap();
        let op = first_order_op(&g).unwrap();
        assert!(op.flat.passed());
        let half = ExactScalar::new(1, 2);
        for al in 0..2 {
            for be in 0..2 {
                for ga in 0..2 {
                    let expect = RatFn::from_poly(d.a[ga][al][be].clone()).scale(&half);
                    assert_eq!(op.d0(al, be, ga), &expect);
                }
            }
        }
    }

    #[test]
    fn darboux_collapse_for_constant_h() {
        let h = metric(
            vec![RatFn::from_int(2), RatFn::one(), RatFn::one(), RatFn::from_int(-1)],
            &["u1", "u2"],
        );
        let op = third_order_op(&h).unwrap();
        assert!(op.flat.passed());
        assert!(op.subleading_is_zero());
    }

    #[test]
    fn nonflat_h_raises_warning_and_produces_bands() {
        // diag(1, u1) is curved; coefficients are produced and the warning
        // certificate carries a witness
        let h = metric(
            vec![RatFn::one(), RatFn::zero(), RatFn::zero(), RatFn::var("u1")],
            &["u1", "u2"],
        );
        let op = third_order_op(&h).unwrap();
        assert!(!op.flat.passed());
        assert!(!op.subleading_is_zero());
    }

    #[test]
    fn flat_nonconstant_chart_collapses_after_transform() {
        // take h constant in the u chart, pull it back to the x chart along
        // u = σ(x): the x-chart expansion has nonzero bands, the u-chart
        // one collapses to h D^3 (two-chart comparison).
        let blk = crate::blocks::make_block(2).unwrap();
        let sig = blk.char_poly_coords();
        let jac = RMatrix::from_fn(2, 2, |i, j| {
            RatFn::from_poly(sig[i].partial_derivative(&blk.x_vars[j]))
        });
        let jinv = jac.inverse().unwrap();
        let h_const = RMatrix::new(
            2,
            2,
            vec![RatFn::zero(), RatFn::one(), RatFn::one(), RatFn::from_int(-5)],
        );
        // contravariant pullback: h_x = J^{-1} h (J^{-1})^T
        let hx_mat = jinv.mul(&h_const).unwrap().mul(&jinv.transpose()).unwrap();
        let hx = MetricRep::new(
            Chart::DiagonalX,
            Variance::Contravariant,
            hx_mat,
            vec!["x1".into(), "x2".into()],
        )
        .unwrap();
        let op_x = third_order_op(&hx).unwrap();
        assert!(op_x.flat.passed());
        assert!(!op_x.subleading_is_zero());
        let hu = metric(
            vec![RatFn::zero(), RatFn::one(), RatFn::one(), RatFn::from_int(-5)],
            &["u1", "u2"],
        );
        let op_u = third_order_op(&hu).unwrap();
        assert!(op_u.subleading_is_zero());
        assert_eq!(op_u.h, h_const);
    }

    #[test]
    fn normal_form_two_paths_agree() {
        let d = aff_data(&[0, 3, -2]);
        let h = build_h(&d, &s(1), &[s(0), s(0)]);
        let nf = normal_form(&d, &h).unwrap();
        assert!(nf.consistent);
        // a = 0 degenerates to the constant-coefficient operator
        let mut d0 = FrobeniusData::zero(2);
        d0.b[0][0] = MPoly::one();
        d0.b[1][1] = MPoly::from_int(3);
        let h0 = build_h(&d0, &s(2), &[s(0), s(0)]);
        let nf0 = normal_form(&d0, &h0).unwrap();
        assert!(nf0.consistent);
        for al in 0..2 {
            for be in 0..2 {
                for ga in 0..2 {
                    assert!(nf0.first.d0(al, be, ga).is_zero());
                }
            }
        }
    }

    #[test]
    fn disppert_member_matches_build_h() {
        // h for g = P(L) g0 via the parameter substitution agrees with the
        // (b, a)-linear construction for the AFF pencil: check one member.
        // P(t) = t^2, (m0, m) = (1, (m1, m2)): h = [[m1, m2], [m2, 0]].
        let d = aff_data(&[0, 0, 1]);
        let h = build_h(&d, &s(1), &[s(4), s(9)]);
        assert_eq!(h[0][0], MPoly::from_int(4));
        assert_eq!(h[0][1], MPoly::from_int(9));
        assert_eq!(h[1][1], MPoly::zero());
        let nf = normal_form(&d, &h).unwrap();
        assert!(nf.consistent);
    }

    #[test]
    fn pencil_linearity_of_coefficients() {
        let d1 = aff_data(&[0, 1, 0]);
        let d2 = aff_data(&[0, 0, 1]);
        let h1 = build_h(&d1, &s(3), &[s(1), s(-2)]);
        let h2 = build_h(&d2, &s(3), &[s(1), s(-2)]);
        let (lam, mu) = (s(5), s(-7));

        // coefficient-wise combination
        let nf1 = normal_form(&d1, &h1).unwrap();
        let nf2 = normal_form(&d2, &h2).unwrap();
        let combo_first = nf1.first.scale(&lam).add(&nf2.first.scale(&mu));
        let combo_third = nf1.third.scale(&lam).add(&nf2.third.scale(&mu));

        // combination of the data, then coefficients
        let add_mat = |x: &Vec<Vec<MPoly>>, y: &Vec<Vec<MPoly>>| -> Vec<Vec<MPoly>> {
            x.iter()
                .zip(y.iter())
                .map(|(r1, r2)| {
                    r1.iter()
                        .zip(r2.iter())
                        .map(|(a, b)| a.scale(&lam).add(&b.scale(&mu)))
                        .collect()
                })
                .collect()
        };
        let d_sum = FrobeniusData {
            n: 2,
            b: add_mat(&d1.b, &d2.b),
            a: d1
                .a
                .iter()
                .zip(d2.a.iter())
                .map(|(m1, m2)| add_mat(m1, m2))
                .collect(),
        };
        let h_sum = add_mat(&h1, &h2);
        let nf_sum = normal_form(&d_sum, &h_sum).unwrap();
        assert!(nf_sum.consistent);
        assert_eq!(nf_sum.first.g, combo_first.g);
        assert_eq!(nf_sum.third.h, combo_third.h);
        for al in 0..2 {
            for be in 0..2 {
                for ga in 0..2 {
                    assert_eq!(nf_sum.first.d0(al, be, ga), combo_first.d0(al, be, ga));
                }
            }
        }
    }

    #[test]
    fn hydro_flow_examples() {
        // n = 1, g = (1), H = u^2/2: u_t = u_x
        let g = metric(vec![RatFn::one()], &["u1"]);
        let ham = MPoly::var("u1")
            .pow(2)
            .scale(&ExactScalar::new(1, 2));
        let flows = hydro_flow(&g, &ham).unwrap();
        assert_eq!(flows.len(), 1);
        assert_eq!(flows[0].to_canonical_string(), "u1_x");
        // H = const: u_t = 0
        let flows = hydro_flow(&g, &MPoly::from_int(5)).unwrap();
        assert!(flows[0].is_zero());
        // linear H on a flat constant metric transports nothing
        let g2 = metric(
            vec![RatFn::one(), RatFn::zero(), RatFn::zero(), RatFn::one()],
            &["u1", "u2"],
        );
        let lin = MPoly::var("u1").scale(&s(3)).add(&MPoly::var("u2"));
        let flows = hydro_flow(&g2, &lin).unwrap();
        assert!(flows.iter().all(DiffPoly::is_zero));
    }
}
