//! Differential-geometric certificates: Levi-Civita connections, curvature,
//! flatness, constant curvature, Nijenhuis torsion and Poisson compatibility
//! of metric pairs.
//!
//! Every check is an identity in the rational-function field of the chart
//! variables, so no evaluation points are involved and coinciding-eigenvalue
//! singularities never arise. The pair compatibility test adjoins one formal
//! parameter `t` and certifies the whole pencil `t g + gbar` at once: both
//! flatness and the Christoffel linearity of Definition 2.1-type
//! compatibility are projective in the two pencil weights, so a single
//! parameter suffices.

use crate::error::CasError;
use crate::matrix::RMatrix;
use crate::metric::MetricRep;
use crate::ratfn::RatFn;
use crate::report::Certificate;
use crate::scalar::ExactScalar;

/// Christoffel symbols, either second kind `Γ^i_{jk}` or contravariant
/// `Γ^{ij}_k = g^{is} Γ^j_{sk}` (index raised by the metric's own inverse).
#[derive(Clone, Debug, PartialEq)]
pub struct Connection3 {
    pub kind: ConnectionKind,
    pub n: usize,
    coeffs: Vec<RatFn>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectionKind {
    SecondKind,
    Contravariant,
}

impl Connection3 {
    fn new(kind: ConnectionKind, n: usize) -> Self {
        Connection3 {
            kind,
            n,
            coeffs: vec![RatFn::zero(); n * n * n],
        }
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> &RatFn {
        &self.coeffs[(i * self.n + j) * self.n + k]
    }

    fn at_mut(&mut self, i: usize, j: usize, k: usize) -> &mut RatFn {
        &mut self.coeffs[(i * self.n + j) * self.n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFn::is_zero)
    }
}

/// Curvature tensor `R^i_{jkl}` (first index upper), antisymmetric in (k,l).
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature4 {
    pub n: usize,
    coeffs: Vec<RatFn>,
}

impl Curvature4 {
    pub fn at(&self, i: usize, j: usize, k: usize, l: usize) -> &RatFn {
        &self.coeffs[((i * self.n + j) * self.n + k) * self.n + l]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFn::is_zero)
    }

    /// First nonzero component as a witness, if any.
    pub fn witness(&self) -> Option<(usize, usize, usize, usize, &RatFn)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.at(i, j, k, l);
                        if !v.is_zero() {
                            return Some((i, j, k, l, v));
                        }
                    }
                }
            }
        }
        None
    }
}

/// Levi-Civita connection (second kind) of a metric.
///
/// `Γ^i_{jk} = 1/2 g^{is} (∂_j g_{sk} + ∂_k g_{sj} - ∂_s g_{jk})`.
pub fn levi_civita(g: &MetricRep) -> Result<Connection3, CasError> {
    let n = g.dim();
    let cov = g.covariant_mat()?;
    let contra = g.contravariant_mat()?;
    let vars = &g.vars;
    // precompute ∂_k g_{ij}
    let mut d = vec![RatFn::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                d[(i * n + j) * n + k] = cov.at(i, j).partial_derivative(&vars[k]);
            }
        }
    }
    let dg = |i: usize, j: usize, k: usize| &d[(i * n + j) * n + k];
    let mut out = Connection3::new(ConnectionKind::SecondKind, n);
    let half = ExactScalar::new(1, 2);
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let mut acc = RatFn::zero();
                for s in 0..n {
                    if contra.at(i, s).is_zero() {
                        continue;
                    }
                    let sum = dg(s, k, j).add(dg(s, j, k)).sub(dg(j, k, s));
                    acc = acc.add(&contra.at(i, s).mul(&sum));
                }
                let v = acc.scale(&half);
                *out.at_mut(i, j, k) = v.clone();
                if j != k {
                    *out.at_mut(i, k, j) = v;
                }
            }
        }
    }
    Ok(out)
}

/// Contravariant Christoffel symbols `Γ^{ij}_k = g^{is} Γ^j_{sk}` of a
/// metric from its Levi-Civita connection (index raised by the own metric).
pub fn contravariant_christoffel(
    g: &MetricRep,
    gamma: &Connection3,
) -> Result<Connection3, CasError> {
    let n = g.dim();
    if gamma.n != n {
        return Err(CasError::DimensionMismatch(
            "connection dimension != metric dimension".into(),
        ));
    }
    let contra = g.contravariant_mat()?;
    let mut out = Connection3::new(ConnectionKind::Contravariant, n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = RatFn::zero();
                for s in 0..n {
                    if contra.at(i, s).is_zero() {
                        continue;
                    }
                    acc = acc.add(&contra.at(i, s).mul(gamma.at(j, s, k)));
                }
                *out.at_mut(i, j, k) = acc;
            }
        }
    }
    Ok(out)
}

/// The Levi-Civita characteristic identity
/// `∂_s g^{ij} + g^{iq} Γ^j_{qs} + Γ^i_{qs} g^{qj} = 0`, exact.
pub fn characteristic_identity_holds(g: &MetricRep, gamma: &Connection3) -> Result<bool, CasError> {
    let n = g.dim();
    let contra = g.contravariant_mat()?;
    for i in 0..n {
        for j in 0..n {
            for s in 0..n {
                let mut acc = contra.at(i, j).partial_derivative(&g.vars[s]);
                for q in 0..n {
                    acc = acc.add(&contra.at(i, q).mul(gamma.at(j, q, s)));
                    acc = acc.add(&gamma.at(i, q, s).mul(contra.at(q, j)));
                }
                if !acc.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Curvature tensor by the standard formula
/// `R^l_{ijk} = ∂_j Γ^l_{ik} - ∂_k Γ^l_{ij} + Γ^l_{js}Γ^s_{ik} - Γ^l_{ks}Γ^s_{ij}`.
pub fn curvature(g: &MetricRep) -> Result<Curvature4, CasError> {
    let gamma = levi_civita(g)?;
    curvature_of_connection(&gamma, &g.vars)
}

/// Curvature of an arbitrary second-kind connection.
pub fn curvature_of_connection(
    gamma: &Connection3,
    vars: &[String],
) -> Result<Curvature4, CasError> {
    let n = gamma.n;
    if vars.len() != n {
        return Err(CasError::DimensionMismatch(
            "variable count != connection dimension".into(),
        ));
    }
    let mut coeffs = vec![RatFn::zero(); n * n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in j + 1..n {
                    let mut acc = gamma
                        .at(l, i, k)
                        .partial_derivative(&vars[j])
                        .sub(&gamma.at(l, i, j).partial_derivative(&vars[k]));
                    for s in 0..n {
                        acc = acc.add(&gamma.at(l, j, s).mul(gamma.at(s, i, k)));
                        acc = acc.sub(&gamma.at(l, k, s).mul(gamma.at(s, i, j)));
                    }
                    coeffs[((l * n + i) * n + j) * n + k] = acc.clone();
                    coeffs[((l * n + i) * n + k) * n + j] = acc.neg();
                }
            }
        }
    }
    Ok(Curvature4 { n, coeffs })
}

/// Flatness certificate: pass iff every curvature component is the zero
/// rational function, otherwise one nonzero component as witness.
pub fn is_flat(g: &MetricRep) -> Result<Certificate, CasError> {
    let r = curvature(g)?;
    Ok(match r.witness() {
        None => Certificate::pass(),
        Some((i, j, k, l, v)) => Certificate::fail(
            vec![i as i64, j as i64, k as i64, l as i64],
            v.to_canonical_string(),
        ),
    })
}

/// Result of the constant-curvature test.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstCurvature {
    Constant(ExactScalar),
    NotConstant { indices: Vec<i64>, entry: String },
}

/// Tests `R_{ijkl} = K (g_{ik} g_{jl} - g_{il} g_{jk})` identically for a
/// constant rational `K`; flat metrics return `K = 0`.
pub fn constant_curvature(g: &MetricRep) -> Result<ConstCurvature, CasError> {
    let n = g.dim();
    if n < 2 {
        return Err(CasError::DimensionMismatch(
            "constant curvature needs dim >= 2".into(),
        ));
    }
    let r_up = curvature(g)?;
    let cov = g.covariant_mat()?;
    // lower the first index
    let low = |i: usize, j: usize, k: usize, l: usize| -> RatFn {
        let mut acc = RatFn::zero();
        for s in 0..n {
            if cov.at(i, s).is_zero() {
                continue;
            }
            acc = acc.add(&cov.at(i, s).mul(r_up.at(s, j, k, l)));
        }
        acc
    };
    let shape = |i: usize, j: usize, k: usize, l: usize| -> RatFn {
        cov.at(i, k)
            .mul(cov.at(j, l))
            .sub(&cov.at(i, l).mul(cov.at(j, k)))
    };
    // determine K from the first index tuple where the shape factor is nonzero
    let mut k_val: Option<ExactScalar> = None;
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let sh = shape(i, j, k, l);
                    if sh.is_zero() {
                        continue;
                    }
                    let ratio = low(i, j, k, l).div(&sh)?;
                    match ratio.as_constant() {
                        Some(c) => {
                            k_val = Some(c);
                            break 'outer;
                        }
                        None => {
                            return Ok(ConstCurvature::NotConstant {
                                indices: vec![i as i64, j as i64, k as i64, l as i64],
                                entry: ratio.to_canonical_string(),
                            })
                        }
                    }
                }
            }
        }
    }
    let k_val = k_val.ok_or(CasError::SingularMatrix)?;
    // verify the identity everywhere
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let resid = low(i, j, k, l).sub(&shape(i, j, k, l).scale(&k_val));
                    if !resid.is_zero() {
                        return Ok(ConstCurvature::NotConstant {
                            indices: vec![i as i64, j as i64, k as i64, l as i64],
                            entry: resid.to_canonical_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(ConstCurvature::Constant(k_val))
}

/// First Bianchi identity `R^i_{jkl} + R^i_{klj} + R^i_{ljk} = 0`, exact.
pub fn first_bianchi_holds(r: &Curvature4) -> bool {
    let n = r.n;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let s = r.at(i, j, k, l).add(r.at(i, k, l, j)).add(r.at(i, l, j, k));
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Nijenhuis torsion of a (1,1)-tensor:
/// `N^i_{jk} = L^s_j ∂_s L^i_k - L^s_k ∂_s L^i_j - L^i_s (∂_j L^s_k - ∂_k L^s_j)`.
///
/// Returns the full tensor plus a zero certificate.
pub fn nijenhuis_torsion(l: &RMatrix, vars: &[String]) -> Result<(Vec<RatFn>, Certificate), CasError> {
    if !l.is_square() || l.rows() != vars.len() {
        return Err(CasError::DimensionMismatch(
            "operator dimension != variable count".into(),
        ));
    }
    let n = vars.len();
    let mut tensor = vec![RatFn::zero(); n * n * n];
    let mut cert = Certificate::pass();
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                let mut acc = RatFn::zero();
                for s in 0..n {
                    acc = acc.add(&l.at(s, j).mul(&l.at(i, k).partial_derivative(&vars[s])));
                    acc = acc.sub(&l.at(s, k).mul(&l.at(i, j).partial_derivative(&vars[s])));
                    let curl = l
                        .at(s, k)
                        .partial_derivative(&vars[j])
                        .sub(&l.at(s, j).partial_derivative(&vars[k]));
                    acc = acc.sub(&l.at(i, s).mul(&curl));
                }
                tensor[(i * n + j) * n + k] = acc.clone();
                tensor[(i * n + k) * n + j] = acc.neg();
                if cert.passed() && !acc.is_zero() {
                    cert = Certificate::fail(
                        vec![i as i64, j as i64, k as i64],
                        acc.to_canonical_string(),
                    );
                }
            }
        }
    }
    Ok((tensor, cert))
}

/// Report of the Poisson-compatibility certificate for a metric pair.
#[derive(Clone, Debug)]
pub struct CompatReport {
    /// Flatness of `t g + gbar` identically in `t`.
    pub pencil_flat: Certificate,
    /// `Γ_t^{ij}_k == t Γ^{ij}_k + Γbar^{ij}_k` identically in `t`.
    pub christoffel_linear: Certificate,
    /// Determinant of the pencil metric as a polynomial in `t` (canonical
    /// string); its vanishing locus is reported, not adjudicated.
    pub det_pencil: String,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.pencil_flat.passed() && self.christoffel_linear.passed()
    }

    pub fn certificate(&self) -> Certificate {
        if self.passed() {
            Certificate::pass()
        } else if !self.pencil_flat.passed() {
            self.pencil_flat.clone()
        } else {
            self.christoffel_linear.clone()
        }
    }
}

/// Poisson compatibility of two contravariant flat metrics over one chart:
/// adjoins a formal parameter `t`, forms `g_t = t g + gbar`, and certifies
/// that (a) `g_t` is flat identically in `t` and (b) the contravariant
/// Christoffel symbols of `g_t` are `t Γ + Γbar` identically in `t`.
pub fn poisson_compatible(g: &MetricRep, gbar: &MetricRep) -> Result<CompatReport, CasError> {
    if g.dim() != gbar.dim() || g.vars != gbar.vars {
        return Err(CasError::DimensionMismatch(
            "metrics live over different charts".into(),
        ));
    }
    let n = g.dim();
    let gm = g.contravariant_mat()?;
    let gbm = gbar.contravariant_mat()?;
    let t = RatFn::var("t");
    let pencil_mat = gm.scale(&t).add(&gbm)?;
    let det = pencil_mat.determinant()?;
    if det.is_zero() {
        return Err(CasError::SingularMatrix);
    }
    let pencil = MetricRep::new(
        g.chart,
        crate::metric::Variance::Contravariant,
        pencil_mat,
        g.vars.clone(),
    )?;

    let pencil_flat = is_flat(&pencil)?;

    let gamma_t = contravariant_christoffel(&pencil, &levi_civita(&pencil)?)?;
    let gamma_g = contravariant_christoffel(g, &levi_civita(g)?)?;
    let gamma_gb = contravariant_christoffel(gbar, &levi_civita(gbar)?)?;
    let mut christoffel_linear = Certificate::pass();
    'search: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let expect = gamma_g.at(i, j, k).mul(&t).add(gamma_gb.at(i, j, k));
                let resid = gamma_t.at(i, j, k).sub(&expect);
                if !resid.is_zero() {
                    christoffel_linear = Certificate::fail(
                        vec![i as i64, j as i64, k as i64],
                        resid.to_canonical_string(),
                    );
                    break 'search;
                }
            }
        }
    }

    Ok(CompatReport {
        pencil_flat,
        christoffel_linear,
        det_pencil: det.to_canonical_string(),
    })
}

/// `g(df, df)` for a scalar function `f` and a contravariant metric.
pub fn quadratic_form(g: &MetricRep, f: &RatFn) -> Result<RatFn, CasError> {
    let gm = g.contravariant_mat()?;
    let n = g.dim();
    let grads: Vec<RatFn> = g
        .vars
        .iter()
        .map(|v| f.partial_derivative(v))
        .collect();
    let mut acc = RatFn::zero();
    for i in 0..n {
        for j in 0..n {
            if gm.at(i, j).is_zero() {
                continue;
            }
            acc = acc.add(&gm.at(i, j).mul(&grads[i]).mul(&grads[j]));
        }
    }
    Ok(acc)
}
