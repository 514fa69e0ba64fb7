//! Pure algebra layer: Frobenius algebra axioms, pencil compatibility of
//! two algebras with forms, construction of the constant partner metrics
//! `h`, and the catalogue of truncated-polynomial algebras.
//!
//! Structure constants are stored as `a[s][i][j] = a^{ij}_s`, symmetric in
//! `(i, j)` by construction (commutativity is built into the storage).
//! Associativity and the Frobenius identity are certificate outputs.
//! Entries are constants of the coefficient field, kept as polynomials so
//! symbolic pencil parameters flow through unchanged.

use crate::error::SpecError;
use crate::frobmap::FrobeniusData;
use crate::linsolve::kernel_basis;
use crate::poly::MPoly;
use crate::scalar::ExactScalar;

pub type FormMatrix = Vec<Vec<MPoly>>;

/// A commutative algebra with a list of named symmetric bilinear forms.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraWithForms {
    pub n: usize,
    /// `a[s][i][j] = a^{ij}_s`.
    pub a: Vec<Vec<Vec<MPoly>>>,
    pub forms: Vec<(String, FormMatrix)>,
}

impl AlgebraWithForms {
    pub fn new(n: usize, a: Vec<Vec<Vec<MPoly>>>) -> Self {
        assert_eq!(a.len(), n);
        for m in &a {
            assert_eq!(m.len(), n);
            for (i, row) in m.iter().enumerate() {
                assert_eq!(row.len(), n);
                for (j, e) in row.iter().enumerate() {
                    assert_eq!(e, &m[j][i], "structure constants must be symmetric in (i,j)");
                }
            }
        }
        AlgebraWithForms {
            n,
            a,
            forms: Vec::new(),
        }
    }

    pub fn with_form(mut self, name: &str, form: FormMatrix) -> Self {
        self.forms.push((name.to_string(), form));
        self
    }

    /// From the affine part of a decomposed metric.
    pub fn from_frobenius_data(d: &FrobeniusData) -> Self {
        AlgebraWithForms::new(d.n, d.a.clone()).with_form("b", d.b.clone())
    }

    /// Change of basis `ẽ^i = T^i_p e^p`: structure constants pick up two
    /// copies of `T` and one inverse; forms transform as `T b T^T`.
    pub fn change_of_basis(&self, t: &[Vec<ExactScalar>]) -> Result<AlgebraWithForms, SpecError> {
        let n = self.n;
        let tinv = invert(t)?;
        let mut a = vec![vec![vec![MPoly::zero(); n]; n]; n];
        for s in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = MPoly::zero();
                    for p in 0..n {
                        if t[i][p].is_zero() {
                            continue;
                        }
                        for q in 0..n {
                            if t[j][q].is_zero() {
                                continue;
                            }
                            for r in 0..n {
                                if tinv[r][s].is_zero() {
                                    continue;
                                }
                                let c = &(&t[i][p] * &t[j][q]) * &tinv[r][s];
                                acc = acc.add(&self.a[r][p][q].scale(&c));
                            }
                        }
                    }
                    a[s][i][j] = acc;
                }
            }
        }
        let forms = self
            .forms
            .iter()
            .map(|(name, b)| {
                let mut out = vec![vec![MPoly::zero(); n]; n];
                for (i, oi) in out.iter_mut().enumerate() {
                    for (j, o) in oi.iter_mut().enumerate() {
                        let mut acc = MPoly::zero();
                        for (p, bp) in b.iter().enumerate() {
                            for (q, bpq) in bp.iter().enumerate() {
                                if t[i][p].is_zero() || t[j][q].is_zero() {
                                    continue;
                                }
                                acc = acc.add(&bpq.scale(&(&t[i][p] * &t[j][q])));
                            }
                        }
                        *o = acc;
                    }
                }
                (name.clone(), out)
            })
            .collect();
        Ok(AlgebraWithForms {
            n,
            a,
            forms,
        })
    }
}

fn invert(t: &[Vec<ExactScalar>]) -> Result<Vec<Vec<ExactScalar>>, SpecError> {
    use crate::linsolve::solve_linear;
    let n = t.len();
    let mut out = vec![vec![ExactScalar::zero(); n]; n];
    for j in 0..n {
        let rhs: Vec<ExactScalar> = (0..n)
            .map(|i| if i == j { ExactScalar::one() } else { ExactScalar::zero() })
            .collect();
        let sol = solve_linear(t, &rhs);
        let Some(col) = sol.particular else {
            return Err(SpecError::Parse("change of basis is singular".into()));
        };
        if !sol.kernel.is_empty() {
            return Err(SpecError::Parse("change of basis is singular".into()));
        }
        for i in 0..n {
            out[i][j] = col[i].clone();
        }
    }
    Ok(out)
}

/// One violated identity: which family, at which indices.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraViolation {
    pub family: String,
    pub indices: Vec<usize>,
    pub residual: String,
}

/// Report of an algebra/form certificate; lists every violated index tuple.
#[derive(Clone, Debug)]
pub struct AlgebraReport {
    pub violations: Vec<AlgebraViolation>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies associativity `a^{ij}_q a^{qr}_k = a^{iq}_k a^{jr}_q` and the
/// Frobenius identity `b^{qr} a^{ij}_q = b^{iq} a^{jr}_q` for the given form.
pub fn check_frobenius(alg: &AlgebraWithForms, form: &FormMatrix) -> AlgebraReport {
    let n = alg.n;
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                for k in 0..n {
                    let mut lhs = MPoly::zero();
                    let mut rhs = MPoly::zero();
                    for q in 0..n {
                        lhs = lhs.add(&alg.a[q][i][j].mul(&alg.a[k][q][r]));
                        rhs = rhs.add(&alg.a[k][i][q].mul(&alg.a[q][j][r]));
                    }
                    let resid = lhs.sub(&rhs);
                    if !resid.is_zero() {
                        violations.push(AlgebraViolation {
                            family: "associativity".into(),
                            indices: vec![i, j, r, k],
                            residual: resid.to_canonical_string(),
                        });
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                let mut lhs = MPoly::zero();
                let mut rhs = MPoly::zero();
                for q in 0..n {
                    lhs = lhs.add(&form[q][r].mul(&alg.a[q][i][j]));
                    rhs = rhs.add(&form[i][q].mul(&alg.a[q][j][r]));
                }
                let resid = lhs.sub(&rhs);
                if !resid.is_zero() {
                    violations.push(AlgebraViolation {
                        family: "frobenius".into(),
                        indices: vec![i, j, r],
                        residual: resid.to_canonical_string(),
                    });
                }
            }
        }
    }
    AlgebraReport { violations }
}

/// A pencil member: affine data `(b, a)` plus a constant partner form `h`.
#[derive(Clone, Debug)]
pub struct PencilMember {
    pub data: FrobeniusData,
    pub h: FormMatrix,
}

/// Verifies all nine identity families required for two members to span a
/// compatible pencil of non-homogeneous structures: three associativity-type
/// conditions on the structure constants, four single-member Frobenius
/// conditions, and two mixed ones. Reports the first violated family.
pub fn check_pencil_compat(d1: &PencilMember, d2: &PencilMember) -> AlgebraReport {
    let n = d1.data.n;
    assert_eq!(n, d2.data.n, "dimension mismatch");
    let a = &d1.data.a;
    let ab = &d2.data.a;
    let b = &d1.data.b;
    let bb = &d2.data.b;
    let h = &d1.h;
    let hb = &d2.h;

    // F1/F2: a^{αβ}_q a^{qγ}_s = a^{γβ}_q a^{qα}_s
    let assoc =
        |x: &Vec<Vec<Vec<MPoly>>>, al: usize, be: usize, ga: usize, s: usize| -> MPoly {
            let mut lhs = MPoly::zero();
            let mut rhs = MPoly::zero();
            for q in 0..n {
                lhs = lhs.add(&x[q][al][be].mul(&x[s][q][ga]));
                rhs = rhs.add(&x[q][ga][be].mul(&x[s][q][al]));
            }
            lhs.sub(&rhs)
        };
    // F3 mixed associativity
    let assoc_mixed = |al: usize, be: usize, ga: usize, s: usize| -> MPoly {
        let mut lhs = MPoly::zero();
        let mut rhs = MPoly::zero();
        for q in 0..n {
            lhs = lhs.add(&ab[q][al][be].mul(&a[s][q][ga]));
            lhs = lhs.add(&a[q][al][be].mul(&ab[s][q][ga]));
            rhs = rhs.add(&ab[q][ga][be].mul(&a[s][q][al]));
            rhs = rhs.add(&a[q][ga][be].mul(&ab[s][q][al]));
        }
        lhs.sub(&rhs)
    };
    // F4..F7: m^{αq} x^{βγ}_q = m^{γq} x^{βα}_q
    let frob = |m: &FormMatrix, x: &Vec<Vec<Vec<MPoly>>>, al: usize, be: usize, ga: usize| {
        let mut lhs = MPoly::zero();
        let mut rhs = MPoly::zero();
        for q in 0..n {
            lhs = lhs.add(&m[al][q].mul(&x[q][be][ga]));
            rhs = rhs.add(&m[ga][q].mul(&x[q][be][al]));
        }
        lhs.sub(&rhs)
    };
    // F8/F9 mixed: m̄^{αq} x^{βγ}_q + m^{αq} x̄^{βγ}_q = (α ↔ γ)
    let frob_mixed = |m: &FormMatrix,
                      mb: &FormMatrix,
                      x: &Vec<Vec<Vec<MPoly>>>,
                      xb: &Vec<Vec<Vec<MPoly>>>,
                      al: usize,
                      be: usize,
                      ga: usize| {
        let mut lhs = MPoly::zero();
        let mut rhs = MPoly::zero();
        for q in 0..n {
            lhs = lhs.add(&mb[al][q].mul(&x[q][be][ga]));
            lhs = lhs.add(&m[al][q].mul(&xb[q][be][ga]));
            rhs = rhs.add(&mb[ga][q].mul(&x[q][be][al]));
            rhs = rhs.add(&m[ga][q].mul(&xb[q][be][al]));
        }
        lhs.sub(&rhs)
    };

    let mut violations = Vec::new();
    'families: for (fam, check) in [
        ("a-assoc", 0usize),
        ("abar-assoc", 1),
        ("mixed-assoc", 2),
        ("h-frobenius", 3),
        ("b-frobenius", 4),
        ("hbar-frobenius", 5),
        ("bbar-frobenius", 6),
        ("mixed-h", 7),
        ("mixed-b", 8),
    ] {
        for al in 0..n {
            for be in 0..n {
                for ga in 0..n {
                    let residuals: Vec<MPoly> = match check {
                        0 | 1 | 2 => (0..n)
                            .map(|s| match check {
                                0 => assoc(a, al, be, ga, s),
                                1 => assoc(ab, al, be, ga, s),
                                _ => assoc_mixed(al, be, ga, s),
                            })
                            .collect(),
                        3 => vec![frob(h, a, al, be, ga)],
                        4 => vec![frob(b, a, al, be, ga)],
                        5 => vec![frob(hb, ab, al, be, ga)],
                        6 => vec![frob(bb, ab, al, be, ga)],
                        7 => vec![frob_mixed(h, hb, a, ab, al, be, ga)],
                        _ => vec![frob_mixed(b, bb, a, ab, al, be, ga)],
                    };
                    for (s, resid) in residuals.iter().enumerate() {
                        if !resid.is_zero() {
                            violations.push(AlgebraViolation {
                                family: fam.to_string(),
                                indices: vec![al, be, ga, s],
                                residual: resid.to_canonical_string(),
                            });
                            break 'families;
                        }
                    }
                }
            }
        }
    }
    AlgebraReport { violations }
}

/// `h = m^0 b + Σ_s m^s a_s`. Degeneracy of `h` is the caller's concern
/// (reported separately, not fatal).
pub fn build_h(d: &FrobeniusData, m0: &ExactScalar, m: &[ExactScalar]) -> FormMatrix {
    let n = d.n;
    assert_eq!(m.len(), n, "m-vector length mismatch");
    let mut out = vec![vec![MPoly::zero(); n]; n];
    for (i, oi) in out.iter_mut().enumerate() {
        for (j, o) in oi.iter_mut().enumerate() {
            let mut acc = d.b[i][j].scale(m0);
            for (s, ms) in m.iter().enumerate() {
                acc = acc.add(&d.a[s][i][j].scale(ms));
            }
            *o = acc;
        }
    }
    out
}

/// Determinant of a form as an exact rational (None when symbolic entries
/// remain); used to report the degeneracy flag.
pub fn form_determinant(form: &FormMatrix) -> Option<ExactScalar> {
    use crate::matrix::RMatrix;
    use crate::ratfn::RatFn;
    let n = form.len();
    let m = RMatrix::from_fn(n, n, |i, j| RatFn::from_poly(form[i][j].clone()));
    m.determinant().ok()?.as_constant()
}

/// Catalogue kinds: the non-unital truncation algebra, the unital truncated
/// polynomial algebra, and direct sums of the two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogueKind {
    /// `e_i ⋆ e_j = e_{i+j}` when `i + j <= n`, else 0.
    AN,
    /// `e_i ⋆ e_j = e_{i+j-1}` when `i + j - 1 <= n`, else 0.
    BN,
}

/// Structure constants of a catalogue algebra.
pub fn catalogue(kind: CatalogueKind, n: usize) -> AlgebraWithForms {
    assert!(n >= 1);
    let mut a = vec![vec![vec![MPoly::zero(); n]; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let k = match kind {
                CatalogueKind::AN => i + j,
                CatalogueKind::BN => i + j - 1,
            };
            if (1..=n).contains(&k) {
                a[k - 1][i - 1][j - 1] = MPoly::one();
            }
        }
    }
    AlgebraWithForms::new(n, a)
}

/// Direct sum of two algebras (block structure constants and forms).
pub fn direct_sum(x: &AlgebraWithForms, y: &AlgebraWithForms) -> AlgebraWithForms {
    let n = x.n + y.n;
    let mut a = vec![vec![vec![MPoly::zero(); n]; n]; n];
    for s in 0..x.n {
        for i in 0..x.n {
            for j in 0..x.n {
                a[s][i][j] = x.a[s][i][j].clone();
            }
        }
    }
    for s in 0..y.n {
        for i in 0..y.n {
            for j in 0..y.n {
                a[x.n + s][x.n + i][x.n + j] = y.a[s][i][j].clone();
            }
        }
    }
    AlgebraWithForms::new(n, a)
}

/// Solution space of the linear system on the pair `(h, hbar)` for fixed
/// structure constants: the single-member Frobenius families for each side
/// plus the mixed family. Returns the dimension and a basis of symmetric
/// matrix pairs. Structure constants must be rational.
pub fn solve_h_pair_space(
    d1: &FrobeniusData,
    d2: &FrobeniusData,
) -> Result<(usize, Vec<(Vec<Vec<ExactScalar>>, Vec<Vec<ExactScalar>>)>), SpecError> {
    let n = d1.n;
    assert_eq!(n, d2.n);
    let (_, a) = d1
        .as_rational()
        .ok_or_else(|| SpecError::Unsupported("symbolic structure constants".into()))?;
    let (_, ab) = d2
        .as_rational()
        .ok_or_else(|| SpecError::Unsupported("symbolic structure constants".into()))?;
    // unknowns: upper triangles of h and hbar
    let per = n * (n + 1) / 2;
    let idx = |i: usize, j: usize| -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * n + j - i * (i + 1) / 2
    };
    let total = 2 * per;
    let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
    let mut push_family =
        |x: &Vec<Vec<Vec<ExactScalar>>>, which: usize /* 0: h, 1: hbar */| {
            for al in 0..n {
                for be in 0..n {
                    for ga in 0..n {
                        let mut r = vec![ExactScalar::zero(); total];
                        for q in 0..n {
                            let off = which * per;
                            r[off + idx(al, q)] += x[q][be][ga].clone();
                            r[off + idx(ga, q)] -= x[q][be][al].clone();
                        }
                        if r.iter().any(|c| !c.is_zero()) {
                            rows.push(r);
                        }
                    }
                }
            }
        };
    push_family(&a, 0);
    push_family(&ab, 1);
    // mixed: hbar with a plus h with abar
    for al in 0..n {
        for be in 0..n {
            for ga in 0..n {
                let mut r = vec![ExactScalar::zero(); total];
                for q in 0..n {
                    r[per + idx(al, q)] += a[q][be][ga].clone();
                    r[idx(al, q)] += ab[q][be][ga].clone();
                    r[per + idx(ga, q)] -= a[q][be][al].clone();
                    r[idx(ga, q)] -= ab[q][be][al].clone();
                }
                if r.iter().any(|c| !c.is_zero()) {
                    rows.push(r);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..total)
            .map(|i| {
                let mut v = vec![ExactScalar::zero(); total];
                v[i] = ExactScalar::one();
                v
            })
            .collect()
    } else {
        kernel_basis(&rows)
    };
    let unpack = |v: &[ExactScalar]| -> (Vec<Vec<ExactScalar>>, Vec<Vec<ExactScalar>>) {
        let mut h = vec![vec![ExactScalar::zero(); n]; n];
        let mut hb = vec![vec![ExactScalar::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                h[i][j] = v[idx(i, j)].clone();
                h[j][i] = v[idx(i, j)].clone();
                hb[i][j] = v[per + idx(i, j)].clone();
                hb[j][i] = v[per + idx(i, j)].clone();
            }
        }
        (h, hb)
    };
    let dim = kernel.len();
    Ok((dim, kernel.iter().map(|v| unpack(v)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::assemble;
    use crate::forest::{ForestSpec, PencilSpec};
    use crate::frobmap::decompose_assembled;
    use crate::metric::Chart;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn c(n: i64) -> MPoly {
        MPoly::from_int(n)
    }

    #[test]
    fn catalogue_relations() {
        // b3: e2 ⋆ e2 = e3
        let b3 = catalogue(CatalogueKind::BN, 3);
        assert_eq!(b3.a[2][1][1], MPoly::one());
        assert_eq!(b3.a[0][0][0], MPoly::one()); // e1 is the unit
        // a2: e1 ⋆ e2 = 0 (index 3 > 2 truncates)
        let a2 = catalogue(CatalogueKind::AN, 2);
        assert!(a2.a.iter().all(|m| m[0][1].is_zero()));
        assert_eq!(a2.a[1][0][0], MPoly::one()); // e1 ⋆ e1 = e2
    }

    #[test]
    fn truncated_algebras_are_frobenius() {
        // b_n with the Hankel form m_{i+j-1}
        let n = 3;
        let alg = catalogue(CatalogueKind::BN, n);
        let m = [s(2), s(-1), s(5)];
        let mut form = vec![vec![MPoly::zero(); n]; n];
        for i in 1..=n {
            for j in 1..=n {
                if i + j - 1 <= n {
                    form[i - 1][j - 1] = MPoly::constant(m[i + j - 2].clone());
                }
            }
        }
        assert!(check_frobenius(&alg, &form).passed());
        // zero algebra with any symmetric form passes
        let zero = AlgebraWithForms::new(2, vec![vec![vec![MPoly::zero(); 2]; 2]; 2]);
        let anyform = vec![vec![c(1), c(7)], vec![c(7), c(-2)]];
        assert!(check_frobenius(&zero, &anyform).passed());
    }

    #[test]
    fn corrupted_associativity_is_witnessed() {
        // corrupt a2 into e1⋆e1 = e2, e1⋆e2 = e1:
        // (e1⋆e1)⋆e2 = e2⋆e2 = 0 but e1⋆(e1⋆e2) = e1⋆e1 = e2.
        let mut a2 = catalogue(CatalogueKind::AN, 2);
        a2.a[0][0][1] = c(1);
        a2.a[0][1][0] = c(1);
        // brute-force over index triples must find a violation
        let form = vec![vec![c(0), c(1)], vec![c(1), c(0)]];
        let rep = check_frobenius(&a2, &form);
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.family == "associativity"));
    }

    #[test]
    fn build_h_substitution_rule() {
        // AFF n=2, g2 = [[u1,u2],[u2,0]]: h = [[m1,m2],[m2,0]]
        let mut d = FrobeniusData::zero(2);
        d.a[0][0][0] = c(1); // a^{11}_1
        d.a[1][0][1] = c(1);
        d.a[1][1][0] = c(1);
        let h = build_h(&d, &s(9), &[s(4), s(7)]);
        assert_eq!(h[0][0], c(4));
        assert_eq!(h[0][1], c(7));
        assert_eq!(h[1][1], c(0));
        // m = 0, m0 = 1: h = b
        let mut d2 = FrobeniusData::zero(2);
        d2.b[0][1] = c(1);
        d2.b[1][0] = c(1);
        d2.b[1][1] = c(-3);
        let h2 = build_h(&d2, &s(1), &[s(0), s(0)]);
        assert_eq!(h2, d2.b);
        // g0 pattern (n=2): [[0,1],[1,-u1]] -> replace 1 with m0 and u with m
        let mut d0 = FrobeniusData::zero(2);
        d0.b[0][1] = c(1);
        d0.b[1][0] = c(1);
        d0.a[0][1][1] = c(-1);
        let h0 = build_h(&d0, &s(5), &[s(3), s(8)]);
        assert_eq!(h0[0][1], c(5));
        assert_eq!(h0[1][1], c(-3));
    }

    fn aff_member(coeffs: &[i64]) -> PencilMember {
        let f = ForestSpec::new(vec![2], vec![]).unwrap();
        let spec = PencilSpec::new(
            f,
            vec![coeffs.iter().map(|&x| s(x)).collect()],
        )
        .unwrap();
        let am = assemble(&spec, Chart::BlockY).unwrap();
        let (_, res) = decompose_assembled(&am).unwrap();
        let data = res.data().unwrap().clone();
        let h = build_h(&data, &s(3), &[s(1), s(-2)]);
        PencilMember { data, h }
    }

    #[test]
    fn pencil_compat_for_aff_pair() {
        // two AFF members with shared (m0, m): all nine families hold
        let m1 = aff_member(&[0, 1, 0]); // P = t
        let m2 = aff_member(&[0, 0, 1]); // P = t^2
        assert!(check_pencil_compat(&m1, &m2).passed());
        // degenerate case d1 = d2 passes too
        assert!(check_pencil_compat(&m1, &m1).passed());
    }

    #[test]
    fn bilinearity_of_compat() {
        // scaling one member by a nonzero rational keeps every family
        let m1 = aff_member(&[0, 1, 0]);
        let m2 = aff_member(&[1, 2, -1]);
        let lam = ExactScalar::new(-3, 7);
        let scaled = PencilMember {
            data: FrobeniusData {
                n: m1.data.n,
                b: m1
                    .data
                    .b
                    .iter()
                    .map(|r| r.iter().map(|e| e.scale(&lam)).collect())
                    .collect(),
                a: m1
                    .data
                    .a
                    .iter()
                    .map(|m| {
                        m.iter()
                            .map(|r| r.iter().map(|e| e.scale(&lam)).collect())
                            .collect()
                    })
                    .collect(),
            },
            h: m1
                .h
                .iter()
                .map(|r| r.iter().map(|e| e.scale(&lam)).collect())
                .collect(),
        };
        assert!(check_pencil_compat(&scaled, &m2).passed());
    }

    #[test]
    fn sum_closure() {
        // if (a,b,h) and (abar,bbar,hbar) are compatible, the sum algebra
        // with form b + bbar (and h + hbar) is Frobenius
        let m1 = aff_member(&[0, 1, 0]);
        let m2 = aff_member(&[0, 0, 1]);
        assert!(check_pencil_compat(&m1, &m2).passed());
        let n = m1.data.n;
        let mut sum_a = vec![vec![vec![MPoly::zero(); n]; n]; n];
        let mut sum_b = vec![vec![MPoly::zero(); n]; n];
        let mut sum_h = vec![vec![MPoly::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                sum_b[i][j] = m1.data.b[i][j].add(&m2.data.b[i][j]);
                sum_h[i][j] = m1.h[i][j].add(&m2.h[i][j]);
                for sidx in 0..n {
                    sum_a[sidx][i][j] = m1.data.a[sidx][i][j].add(&m2.data.a[sidx][i][j]);
                }
            }
        }
        let alg = AlgebraWithForms::new(n, sum_a);
        assert!(check_frobenius(&alg, &sum_b).passed());
        assert!(check_frobenius(&alg, &sum_h).passed());
    }

    #[test]
    fn aff_g1_n3_isomorphic_to_a2_plus_b1() {
        // AFF n=3, i=1: g1 = diag([[0,1],[1,-u1]], [u3]) has structure
        // constants e2⋆e2 = -e1, e3⋆e3 = e3; the basis flip
        // (E1, E2, F) = (-e2, -e1, e3) turns it into a2 ⊕ b1.
        let f = ForestSpec::new(vec![3], vec![]).unwrap();
        let spec = PencilSpec::new(f, vec![vec![s(0), s(1), s(0), s(0)]]).unwrap();
        let am = assemble(&spec, Chart::BlockY).unwrap();
        let (_, res) = decompose_assembled(&am).unwrap();
        let d = res.data().unwrap();
        let alg = AlgebraWithForms::from_frobenius_data(d);
        let t = vec![
            vec![s(0), s(-1), s(0)],
            vec![s(-1), s(0), s(0)],
            vec![s(0), s(0), s(1)],
        ];
        let flipped = alg.change_of_basis(&t).unwrap();
        let expect = direct_sum(
            &catalogue(CatalogueKind::AN, 2),
            &catalogue(CatalogueKind::BN, 1),
        );
        assert_eq!(flipped.a, expect.a);
    }

    #[test]
    fn h_pair_solution_space_dimension() {
        // for a generic AFF n=2 pair the (h, hbar) solution space is the
        // (n+1)-parameter family of the m-substitution forms
        let m1 = aff_member(&[0, 1, 0]);
        let m2 = aff_member(&[0, 0, 1]);
        let (dim, basis) = solve_h_pair_space(&m1.data, &m2.data).unwrap();
        assert_eq!(dim, 3);
        // each basis member really solves all h-involving families
        for (h, hb) in basis {
            let p1 = PencilMember {
                data: m1.data.clone(),
                h: h.iter()
                    .map(|r| r.iter().map(|e| MPoly::constant(e.clone())).collect())
                    .collect(),
            };
            let p2 = PencilMember {
                data: m2.data.clone(),
                h: hb
                    .iter()
                    .map(|r| r.iter().map(|e| MPoly::constant(e.clone())).collect())
                    .collect(),
            };
            assert!(check_pencil_compat(&p1, &p2).passed());
        }
    }
}
