//! Labeled directed rooted in-forests and the linear pencil of admissible
//! block polynomials they cut out.
//!
//! A forest carries one block per vertex (with a positive dimension) and one
//! rational mark per edge. The derived data are the strict partial order
//! `s ≺ α` (an oriented path α → … → s exists), the 0/1 warp exponents
//! `c(s,α)`, and the mark matrix `λ(s,α)`: for `s ≺ α` there is a unique
//! `β` with `s ≺ β ⪯ α` and `s = next(β)`, and `λ(s,α) = λ_β`.
//!
//! The admissibility conditions on the block polynomials
//! `P_α(t) = a_0 + a_1 t + … + a_{n_α+1} t^{n_α+1}` are
//! (i) roots of the forest have `a_{n_α+1} = 0`;
//! (ii) if `α = next(β)` then `P_α(λ_β) = 0` and the leading coefficient of
//! `P_β` equals `+P_α'(λ_β)` — the sign was fixed empirically: with the
//! `det(λ·Id − L)` convention used by the coordinate map, the affine
//! decomposition succeeds on a two-vertex chain with one-dimensional blocks
//! exactly for the `+` sign;
//! (iii) two siblings with equal marks force a double root.
//! All three are linear in the coefficients, so the admissible vectors form
//! a linear space whose exact basis [`pencil_basis`] computes.

use serde::{Deserialize, Serialize};

use crate::error::SpecError;
use crate::linsolve::{kernel_basis, rank, solve_linear};
use crate::scalar::ExactScalar;

/// A labeled directed rooted in-forest with block dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestSpec {
    /// Block dimensions, indexed by vertex id - 1 (ids run 1..=B).
    pub dims: Vec<usize>,
    /// Edges (child, parent, mark): the child's unique outgoing edge.
    pub edges: Vec<(usize, usize, ExactScalar)>,
}

impl ForestSpec {
    pub fn new(dims: Vec<usize>, edges: Vec<(usize, usize, ExactScalar)>) -> Result<Self, SpecError> {
        let f = ForestSpec { dims, edges };
        f.validate()?;
        Ok(f)
    }

    pub fn block_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    fn validate(&self) -> Result<(), SpecError> {
        let b = self.dims.len();
        if b == 0 {
            return Err(SpecError::InvalidForest("no blocks".into()));
        }
        if self.dims.iter().any(|&d| d == 0) {
            return Err(SpecError::InvalidForest("block dimension must be >= 1".into()));
        }
        let mut out_edge = vec![None; b];
        for &(child, parent, _) in &self.edges {
            if child == 0 || child > b || parent == 0 || parent > b {
                return Err(SpecError::InvalidForest(format!(
                    "edge ({child},{parent}) references missing vertex"
                )));
            }
            if child == parent {
                return Err(SpecError::InvalidForest(format!("self-loop at {child}")));
            }
            if out_edge[child - 1].is_some() {
                return Err(SpecError::InvalidForest(format!(
                    "vertex {child} has two outgoing edges (not an in-forest)"
                )));
            }
            out_edge[child - 1] = Some(parent);
        }
        // acyclicity: follow next-pointers, counting steps
        for start in 1..=b {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = out_edge[cur - 1] {
                cur = p;
                steps += 1;
                if steps > b {
                    return Err(SpecError::InvalidForest("cycle detected".into()));
                }
            }
        }
        Ok(())
    }

    /// The mark on the unique outgoing edge of `beta`, if any.
    pub fn mark_of(&self, beta: usize) -> Option<&ExactScalar> {
        self.edges
            .iter()
            .find(|(c, _, _)| *c == beta)
            .map(|(_, _, m)| m)
    }
}

/// Data derived from the forest: partial order, next-map, warp exponents and
/// mark matrix.
#[derive(Clone, Debug)]
pub struct DerivedOrder {
    pub b: usize,
    /// `precedes[s][a]` is `s ≺ α` (1-based indices shifted down by one).
    pub precedes: Vec<Vec<bool>>,
    /// `next[β]` is the parent of β, if β is not a root.
    pub next: Vec<Option<usize>>,
    /// Warp exponents `c(s,α) ∈ {0,1}`, strictly upper triangular.
    pub cmat: Vec<Vec<u8>>,
    /// `λ(s,α)`, defined exactly where `cmat` is 1.
    pub lammat: Vec<Vec<Option<ExactScalar>>>,
}

/// Computes the derived order; errors when the labeling violates
/// `s ≺ α ⇒ s < α`, suggesting a relabeling.
pub fn derive_order(f: &ForestSpec) -> Result<DerivedOrder, SpecError> {
    let b = f.block_count();
    let mut next = vec![None; b];
    for &(child, parent, _) in &f.edges {
        next[child - 1] = Some(parent);
    }
    // s ≺ α iff an oriented path α → … → s exists.
    let mut precedes = vec![vec![false; b]; b];
    for alpha in 1..=b {
        let mut cur = alpha;
        while let Some(p) = next[cur - 1] {
            precedes[p - 1][alpha - 1] = true;
            cur = p;
        }
    }
    // labeling convention: s ≺ α implies s < α
    let mut bad = false;
    for s in 1..=b {
        for alpha in 1..=b {
            if precedes[s - 1][alpha - 1] && s >= alpha {
                bad = true;
            }
        }
    }
    if bad {
        // topological relabeling: ancestors first
        let mut depth = vec![0usize; b];
        for v in 1..=b {
            let mut cur = v;
            let mut d = 0;
            while let Some(p) = next[cur - 1] {
                cur = p;
                d += 1;
            }
            depth[v - 1] = d;
        }
        let mut order: Vec<usize> = (1..=b).collect();
        order.sort_by_key(|&v| (depth[v - 1], v));
        let suggestion: Vec<(usize, usize)> = order
            .iter()
            .enumerate()
            .map(|(newi, &old)| (old, newi + 1))
            .collect();
        return Err(SpecError::BadLabeling { suggestion });
    }

    let mut cmat = vec![vec![0u8; b]; b];
    let mut lammat = vec![vec![None; b]; b];
    for s in 1..=b {
        for alpha in 1..=b {
            if !precedes[s - 1][alpha - 1] {
                continue;
            }
            cmat[s - 1][alpha - 1] = 1;
            // unique β on the path α → … → s with next(β) = s
            let mut beta = alpha;
            while next[beta - 1] != Some(s) {
                beta = next[beta - 1].expect("path to ancestor exists");
            }
            let mark = f
                .mark_of(beta)
                .expect("non-root has an outgoing edge mark")
                .clone();
            lammat[s - 1][alpha - 1] = Some(mark);
        }
    }
    Ok(DerivedOrder {
        b,
        precedes,
        next,
        cmat,
        lammat,
    })
}

impl DerivedOrder {
    /// Proper ancestors of `alpha` (all `s` with `s ≺ alpha`), ascending.
    pub fn ancestors(&self, alpha: usize) -> Vec<usize> {
        (1..=self.b)
            .filter(|&s| self.precedes[s - 1][alpha - 1])
            .collect()
    }

    pub fn is_root(&self, alpha: usize) -> bool {
        self.next[alpha - 1].is_none()
    }

    /// Structural checks on `cmat`:
    /// (a) strictly upper triangular, (b) `c(α,β)=0 ⇒ c(s,β)c(α,s)=0`,
    /// (c) `c(α,β)=0, α<β ⇒ c(β,s)c(α,s)=0`, plus every ancestor set a chain.
    pub fn cmat_properties_hold(&self) -> bool {
        let b = self.b;
        let c = |i: usize, j: usize| self.cmat[i - 1][j - 1];
        for a in 1..=b {
            for be in 1..=b {
                if a >= be && c(a, be) != 0 {
                    return false;
                }
                if c(a, be) == 0 {
                    for s in 1..=b {
                        if c(s, be) * c(a, s) != 0 {
                            return false;
                        }
                        if a < be && c(be, s) * c(a, s) != 0 {
                            return false;
                        }
                    }
                }
            }
        }
        // ancestor sets are chains
        for s in 1..=self.b {
            let anc = self.ancestors(s);
            for (i, &x) in anc.iter().enumerate() {
                for &y in &anc[i + 1..] {
                    if !self.precedes[x - 1][y - 1] && !self.precedes[y - 1][x - 1] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A forest plus one coefficient vector per block: block α carries
/// `(a_0, …, a_{n_α+1})`, low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilSpec {
    pub forest: ForestSpec,
    pub coeffs: Vec<Vec<ExactScalar>>,
}

impl PencilSpec {
    pub fn new(forest: ForestSpec, coeffs: Vec<Vec<ExactScalar>>) -> Result<Self, SpecError> {
        if coeffs.len() != forest.block_count() {
            return Err(SpecError::Parse(format!(
                "{} coefficient vectors for {} blocks",
                coeffs.len(),
                forest.block_count()
            )));
        }
        for (i, c) in coeffs.iter().enumerate() {
            let want = forest.dims[i] + 2;
            if c.len() > want {
                return Err(SpecError::Parse(format!(
                    "block {} has {} coefficients, at most {} allowed (deg <= n+1)",
                    i + 1,
                    c.len(),
                    want
                )));
            }
        }
        let mut coeffs = coeffs;
        for (i, c) in coeffs.iter_mut().enumerate() {
            c.resize(forest.dims[i] + 2, ExactScalar::zero());
        }
        Ok(PencilSpec { forest, coeffs })
    }

    /// `P_α(t)` at a rational value.
    pub fn poly_eval(&self, alpha: usize, t: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs[alpha - 1].iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    /// `P_α'(t)` at a rational value.
    pub fn poly_deriv_eval(&self, alpha: usize, t: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for k in (1..self.coeffs[alpha - 1].len()).rev() {
            let c = &self.coeffs[alpha - 1][k];
            acc = acc * t.clone() + c.clone() * ExactScalar::from_int(k as i64);
        }
        acc
    }

    /// Leading slot `a_{n_α+1}` of block α.
    pub fn top_coeff(&self, alpha: usize) -> &ExactScalar {
        let n = self.forest.dims[alpha - 1];
        &self.coeffs[alpha - 1][n + 1]
    }

    /// True when `P_α` is identically zero, which makes the assembled
    /// metric degenerate (still admissible algebraically).
    pub fn block_poly_is_zero(&self, alpha: usize) -> bool {
        self.coeffs[alpha - 1].iter().all(ExactScalar::is_zero)
    }
}

/// One violated clause of conditions (i)-(iii).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// "i", "ii-root", "ii-deriv" or "iii".
    pub clause: String,
    pub alpha: usize,
    pub beta: usize,
    pub detail: String,
}

/// Certificate for conditions (i)-(iii); lists every violated clause.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub violations: Vec<Violation>,
    /// Blocks whose polynomial is identically zero (degenerate metric flag).
    pub degenerate_blocks: Vec<usize>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks conditions (i)-(iii) on a pencil spec.
pub fn validate_conditions(p: &PencilSpec) -> Result<ConditionReport, SpecError> {
    let order = derive_order(&p.forest)?;
    let mut violations = Vec::new();
    for alpha in 1..=order.b {
        if order.is_root(alpha) && !p.top_coeff(alpha).is_zero() {
            violations.push(Violation {
                clause: "i".into(),
                alpha,
                beta: 0,
                detail: format!(
                    "root block {alpha} has nonzero leading coefficient {}",
                    p.top_coeff(alpha)
                ),
            });
        }
    }
    for beta in 1..=order.b {
        let Some(alpha) = order.next[beta - 1] else {
            continue;
        };
        let lam = p.forest.mark_of(beta).expect("non-root has a mark").clone();
        let val = p.poly_eval(alpha, &lam);
        if !val.is_zero() {
            violations.push(Violation {
                clause: "ii-root".into(),
                alpha,
                beta,
                detail: format!("P_{alpha}({lam}) = {val} != 0"),
            });
        }
        let want = p.poly_deriv_eval(alpha, &lam);
        let got = p.top_coeff(beta).clone();
        if got != want {
            violations.push(Violation {
                clause: "ii-deriv".into(),
                alpha,
                beta,
                detail: format!("leading coeff of P_{beta} is {got}, P_{alpha}'({lam}) = {want}"),
            });
        }
    }
    // (iii) siblings with equal marks force a double root
    for beta in 1..=order.b {
        for gamma in (beta + 1)..=order.b {
            let (Some(a1), Some(a2)) = (order.next[beta - 1], order.next[gamma - 1]) else {
                continue;
            };
            if a1 != a2 {
                continue;
            }
            let (lb, lg) = (
                p.forest.mark_of(beta).unwrap().clone(),
                p.forest.mark_of(gamma).unwrap().clone(),
            );
            if lb != lg {
                continue;
            }
            let alpha = a1;
            if !p.poly_eval(alpha, &lb).is_zero() || !p.poly_deriv_eval(alpha, &lb).is_zero() {
                violations.push(Violation {
                    clause: "iii".into(),
                    alpha,
                    beta,
                    detail: format!(
                        "siblings {beta},{gamma} share mark {lb} but it is not a double root of P_{alpha}"
                    ),
                });
            }
        }
    }
    let degenerate_blocks = (1..=order.b)
        .filter(|&a| p.block_poly_is_zero(a))
        .collect();
    Ok(ConditionReport {
        violations,
        degenerate_blocks,
    })
}

/// Exact basis of the linear space of admissible coefficient vectors.
#[derive(Clone, Debug)]
pub struct PencilBasis {
    /// Offset of each block's slots in the concatenated vector.
    pub offsets: Vec<usize>,
    /// Slot count per block (`n_α + 2`).
    pub widths: Vec<usize>,
    /// Kernel basis vectors (concatenated coefficient layout).
    pub basis: Vec<Vec<ExactScalar>>,
}

impl PencilBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Splits a concatenated vector into per-block coefficient vectors.
    pub fn split(&self, v: &[ExactScalar]) -> Vec<Vec<ExactScalar>> {
        self.offsets
            .iter()
            .zip(self.widths.iter())
            .map(|(&o, &w)| v[o..o + w].to_vec())
            .collect()
    }

    /// Linear combination of basis vectors.
    pub fn member(&self, weights: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(weights.len(), self.basis.len());
        let len = self.basis.first().map(|b| b.len()).unwrap_or(0);
        let mut out = vec![ExactScalar::zero(); len];
        for (w, b) in weights.iter().zip(self.basis.iter()) {
            for (o, x) in out.iter_mut().zip(b.iter()) {
                *o += w * x;
            }
        }
        out
    }
}

/// Assembles conditions (i)-(iii) as a homogeneous linear system on the
/// concatenated coefficient vectors and returns an exact kernel basis.
pub fn pencil_basis(f: &ForestSpec) -> Result<PencilBasis, SpecError> {
    let order = derive_order(f)?;
    let b = f.block_count();
    let widths: Vec<usize> = f.dims.iter().map(|&n| n + 2).collect();
    let mut offsets = vec![0usize; b];
    for i in 1..b {
        offsets[i] = offsets[i - 1] + widths[i - 1];
    }
    let total: usize = widths.iter().sum();
    let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
    let row = || vec![ExactScalar::zero(); total];

    for alpha in 1..=b {
        if order.is_root(alpha) {
            // (i): a_{n+1} = 0
            let mut r = row();
            r[offsets[alpha - 1] + widths[alpha - 1] - 1] = ExactScalar::one();
            rows.push(r);
        }
    }
    for beta in 1..=b {
        let Some(alpha) = order.next[beta - 1] else {
            continue;
        };
        let lam = f.mark_of(beta).unwrap().clone();
        // (ii) P_alpha(lam) = 0
        let mut r = row();
        let mut pw = ExactScalar::one();
        for k in 0..widths[alpha - 1] {
            r[offsets[alpha - 1] + k] = pw.clone();
            pw *= lam.clone();
        }
        rows.push(r);
        // (ii) leading(P_beta) - P_alpha'(lam) = 0
        let mut r = row();
        r[offsets[beta - 1] + widths[beta - 1] - 1] = ExactScalar::one();
        let mut pw = ExactScalar::one();
        for k in 1..widths[alpha - 1] {
            r[offsets[alpha - 1] + k] = -(ExactScalar::from_int(k as i64) * pw.clone());
            pw *= lam.clone();
        }
        rows.push(r);
    }
    // (iii): equal sibling marks force P_alpha'(lam) = 0 as well
    for beta in 1..=b {
        for gamma in (beta + 1)..=b {
            let (Some(a1), Some(a2)) = (order.next[beta - 1], order.next[gamma - 1]) else {
                continue;
            };
            if a1 != a2 {
                continue;
            }
            let lam = f.mark_of(beta).unwrap().clone();
            if &lam != f.mark_of(gamma).unwrap() {
                continue;
            }
            let mut r = row();
            let mut pw = ExactScalar::one();
            for k in 1..widths[a1 - 1] {
                r[offsets[a1 - 1] + k] = ExactScalar::from_int(k as i64) * pw.clone();
                pw *= lam.clone();
            }
            rows.push(r);
        }
    }

    let basis = if rows.is_empty() {
        // no constraints: standard basis
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
    Ok(PencilBasis {
        offsets,
        widths,
        basis,
    })
}

/// True when `v` lies in the span of the basis.
pub fn vector_in_span(basis: &PencilBasis, v: &[ExactScalar]) -> bool {
    if basis.basis.is_empty() {
        return v.iter().all(ExactScalar::is_zero);
    }
    let cols = basis.basis.len();
    let rows = v.len();
    let a: Vec<Vec<ExactScalar>> = (0..rows)
        .map(|r| (0..cols).map(|c| basis.basis[c][r].clone()).collect())
        .collect();
    !solve_linear(&a, &v.to_vec()).is_infeasible()
}

/// Rank-equality probe: appending `probe` to the basis must not raise the rank.
pub fn basis_matches_conditions(basis: &PencilBasis, probe: &[ExactScalar]) -> bool {
    let mut mat: Vec<Vec<ExactScalar>> = basis.basis.clone();
    let r0 = rank(&mat);
    mat.push(probe.to_vec());
    rank(&mat) == r0
}

/// Shift-equivalence normalization utility: `L_α ↦ L_α + c·Id` adds `c` to
/// the marks on edges into α and turns the block polynomial into
/// `P_α(t - c)`, producing an isomorphic pencil. Exposed explicitly, never
/// applied silently.
pub fn shift_block(p: &PencilSpec, alpha: usize, c: &ExactScalar) -> Result<PencilSpec, SpecError> {
    let b = p.forest.block_count();
    if alpha == 0 || alpha > b {
        return Err(SpecError::InvalidForest(format!("no block {alpha}")));
    }
    let mut forest = p.forest.clone();
    for (_, parent, mark) in forest.edges.iter_mut() {
        if *parent == alpha {
            *mark = mark.clone() + c.clone();
        }
    }
    // P_alpha(t - c) via binomial expansion: a_k (t - c)^k
    let shift = -c.clone();
    let old = &p.coeffs[alpha - 1];
    let w = old.len();
    let mut newc = vec![ExactScalar::zero(); w];
    for (k, ak) in old.iter().enumerate() {
        // C(k, j) * shift^(k-j) * t^j
        let mut binom = ExactScalar::one(); // C(k, k)
        for j in (0..=k).rev() {
            newc[j] += ak.clone() * binom.clone() * shift.pow((k - j) as u32);
            if j > 0 {
                binom = binom * ExactScalar::from_int(j as i64)
                    / ExactScalar::from_int((k - j + 1) as i64);
            }
        }
    }
    let mut coeffs = p.coeffs.clone();
    coeffs[alpha - 1] = newc;
    PencilSpec::new(forest, coeffs)
}

// ---------------------------------------------------------------------------
// JSON interchange format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BlockJson {
    id: usize,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    child: usize,
    parent: usize,
    lambda: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    block: usize,
    coeffs: Vec<String>,
}

/// On-disk spec: `{"blocks":[...], "edges":[...], "polys":[...]}` with
/// rationals as strings and coefficients listed low degree first.
#[derive(Serialize, Deserialize)]
pub struct SpecJson {
    blocks: Vec<BlockJson>,
    edges: Vec<EdgeJson>,
    #[serde(default)]
    polys: Vec<PolyJson>,
}

fn parse_mark(s: &str) -> Result<ExactScalar, SpecError> {
    if s.contains(['i', 'I']) {
        return Err(SpecError::ComplexBlock(s.to_string()));
    }
    s.parse::<ExactScalar>()
        .map_err(|_| SpecError::Parse(format!("bad rational {s:?}")))
}

/// Parses the JSON interchange format into a pencil spec.
pub fn parse_spec_json(text: &str) -> Result<PencilSpec, SpecError> {
    let sj: SpecJson = serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    spec_from_json(sj)
}

fn spec_from_json(sj: SpecJson) -> Result<PencilSpec, SpecError> {
    let b = sj.blocks.len();
    let mut dims = vec![0usize; b];
    for blk in &sj.blocks {
        if blk.id == 0 || blk.id > b {
            return Err(SpecError::Parse(format!(
                "block ids must be 1..={b}, got {}",
                blk.id
            )));
        }
        if dims[blk.id - 1] != 0 {
            return Err(SpecError::Parse(format!("duplicate block id {}", blk.id)));
        }
        dims[blk.id - 1] = blk.dim;
    }
    let mut edges = Vec::new();
    for e in &sj.edges {
        edges.push((e.child, e.parent, parse_mark(&e.lambda)?));
    }
    let forest = ForestSpec::new(dims, edges)?;
    let mut coeffs = vec![Vec::new(); b];
    for pj in &sj.polys {
        if pj.block == 0 || pj.block > b {
            return Err(SpecError::Parse(format!(
                "polys for missing block {}",
                pj.block
            )));
        }
        coeffs[pj.block - 1] = pj
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<ExactScalar>()
                    .map_err(|_| SpecError::Parse(format!("bad rational {s:?}")))
            })
            .collect::<Result<_, _>>()?;
    }
    PencilSpec::new(forest, coeffs)
}

/// Parses a polys-only JSON (`{"polys": [...]}`) as a second member of the
/// same forest's pencil.
pub fn parse_polys_json(text: &str, forest: &ForestSpec) -> Result<PencilSpec, SpecError> {
    #[derive(Deserialize)]
    struct PolysOnly {
        polys: Vec<PolyJson>,
    }
    let pj: PolysOnly = serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    spec_from_json(SpecJson {
        blocks: forest
            .dims
            .iter()
            .enumerate()
            .map(|(i, &d)| BlockJson { id: i + 1, dim: d })
            .collect(),
        edges: forest
            .edges
            .iter()
            .map(|(c, p, m)| EdgeJson {
                child: *c,
                parent: *p,
                lambda: m.to_string(),
            })
            .collect(),
        polys: pj.polys,
    })
}

/// Canonical JSON serialization of a pencil spec (stable field order).
pub fn spec_to_json(p: &PencilSpec) -> serde_json::Value {
    serde_json::json!({
        "blocks": p.forest.dims.iter().enumerate()
            .map(|(i, &d)| serde_json::json!({"id": i + 1, "dim": d}))
            .collect::<Vec<_>>(),
        "edges": p.forest.edges.iter()
            .map(|(c, pa, m)| serde_json::json!({"child": c, "parent": pa, "lambda": m.to_string()}))
            .collect::<Vec<_>>(),
        "polys": p.coeffs.iter().enumerate()
            .map(|(i, cs)| serde_json::json!({
                "block": i + 1,
                "coeffs": cs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    /// The six-vertex forest of the paper's figure: edges 2→1, 3→2, 4→2, 6→5.
    fn fig1_forest() -> ForestSpec {
        ForestSpec::new(
            vec![1, 1, 1, 1, 1, 1],
            vec![(2, 1, s(2)), (3, 2, s(3)), (4, 2, s(4)), (6, 5, s(6))],
        )
        .unwrap()
    }

    #[test]
    fn fig1_order_and_marks() {
        let f = fig1_forest();
        let o = derive_order(&f).unwrap();
        for (a, b) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (5, 6)] {
            assert!(o.precedes[a - 1][b - 1], "{a} ≺ {b}");
        }
        assert!(!o.precedes[0][4]);
        assert!(!o.precedes[2][3]);
        // λ(1,3) = λ_2, λ(2,3) = λ_3, λ(1,2) = λ_2
        assert_eq!(o.lammat[0][2], Some(s(2)));
        assert_eq!(o.lammat[1][2], Some(s(3)));
        assert_eq!(o.lammat[0][1], Some(s(2)));
        assert_eq!(o.lammat[1][3], Some(s(4)));
        assert_eq!(o.lammat[4][5], Some(s(6)));
        assert!(o.cmat_properties_hold());
    }

    #[test]
    fn single_vertex_trivial_order() {
        let f = ForestSpec::new(vec![3], vec![]).unwrap();
        let o = derive_order(&f).unwrap();
        assert!(o.cmat.iter().flatten().all(|&c| c == 0));
        assert!(o.cmat_properties_hold());
    }

    #[test]
    fn bad_labeling_is_reported() {
        // edge 1→2 makes 2 ≺ 1 but 2 > 1
        let f = ForestSpec::new(vec![1, 1], vec![(1, 2, s(0))]).unwrap();
        match derive_order(&f) {
            Err(SpecError::BadLabeling { suggestion }) => {
                assert_eq!(suggestion, vec![(2, 1), (1, 2)]);
            }
            other => panic!("expected BadLabeling, got {other:?}"),
        }
    }

    #[test]
    fn not_a_forest_rejected() {
        assert!(ForestSpec::new(vec![1, 1], vec![(2, 1, s(0)), (2, 1, s(1))]).is_err());
        assert!(ForestSpec::new(vec![1], vec![(1, 1, s(0))]).is_err());
        assert!(
            ForestSpec::new(vec![1, 1, 1], vec![(2, 1, s(0)), (3, 2, s(0)), (1, 3, s(0))]).is_err()
        );
    }

    #[test]
    fn single_vertex_conditions_and_basis() {
        // single vertex, n = 2, P(t) = t^2 passes (deg <= n)
        let f = ForestSpec::new(vec![2], vec![]).unwrap();
        let p = PencilSpec::new(f.clone(), vec![vec![s(0), s(0), s(1)]]).unwrap();
        assert!(validate_conditions(&p).unwrap().passed());
        // basis dimension n + 1
        let basis = pencil_basis(&f).unwrap();
        assert_eq!(basis.dim(), 3);
    }

    #[test]
    fn example1_conditions() {
        // two blocks of dim 2, edge 2→1, λ = 0; P1 = a1 t + a2 t^2,
        // P2 = b0 + b1 t + b2 t^2 + b3 t^3 with b3 = a1.
        let f = ForestSpec::new(vec![2, 2], vec![(2, 1, s(0))]).unwrap();
        let ok = PencilSpec::new(
            f.clone(),
            vec![vec![s(0), s(3), s(5), s(0)], vec![s(7), s(2), s(4), s(3)]],
        )
        .unwrap();
        let rep = validate_conditions(&ok).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);

        // constant term violates the root condition (clause ii)
        let bad = PencilSpec::new(
            f.clone(),
            vec![vec![s(1), s(3), s(5), s(0)], vec![s(7), s(2), s(4), s(3)]],
        )
        .unwrap();
        let rep = validate_conditions(&bad).unwrap();
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.clause == "ii-root"));

        // basis: free parameters {a1, a2, b0, b1, b2} — dimension 5
        let basis = pencil_basis(&f).unwrap();
        assert_eq!(basis.dim(), 5);
    }

    #[test]
    fn two_isolated_vertices_basis() {
        let f = ForestSpec::new(vec![1, 1], vec![]).unwrap();
        let basis = pencil_basis(&f).unwrap();
        assert_eq!(basis.dim(), 4);
    }

    #[test]
    fn span_equals_condition_set() {
        let f = ForestSpec::new(vec![2, 2], vec![(2, 1, s(0))]).unwrap();
        let basis = pencil_basis(&f).unwrap();
        // every basis member passes the conditions
        for b in &basis.basis {
            let p = PencilSpec::new(f.clone(), basis.split(b)).unwrap();
            assert!(validate_conditions(&p).unwrap().passed());
        }
        // a passing vector lies in the span (rank equality)
        let passing: Vec<ExactScalar> =
            vec![s(0), s(3), s(5), s(0), s(7), s(2), s(4), s(3)];
        assert!(basis_matches_conditions(&basis, &passing));
        assert!(vector_in_span(&basis, &passing));
        // and a violating one does not
        let violating: Vec<ExactScalar> =
            vec![s(1), s(3), s(5), s(0), s(7), s(2), s(4), s(3)];
        assert!(!vector_in_span(&basis, &violating));
    }

    #[test]
    fn sibling_double_root_clause() {
        // 1 ← 2 and 1 ← 3 with equal marks: (iii) forces a double root of P1.
        let f = ForestSpec::new(vec![2, 1, 1], vec![(2, 1, s(1)), (3, 1, s(1))]).unwrap();
        // P1 = (t-1)^2 = 1 - 2t + t^2: P1(1) = 0, P1'(1) = 0; leading coeffs
        // of P2, P3 must equal P1'(1) = 0.
        let p = PencilSpec::new(
            f.clone(),
            vec![
                vec![s(1), s(-2), s(1), s(0)],
                vec![s(5), s(6), s(0)],
                vec![s(1), s(2), s(0)],
            ],
        )
        .unwrap();
        assert!(validate_conditions(&p).unwrap().passed());
        // single root only: clause iii fires
        let p = PencilSpec::new(
            f,
            vec![
                vec![s(-1), s(1), s(0), s(0)], // P1 = t - 1
                vec![s(5), s(6), s(1)],
                vec![s(1), s(2), s(1)],
            ],
        )
        .unwrap();
        let rep = validate_conditions(&p).unwrap();
        assert!(rep.violations.iter().any(|v| v.clause == "iii"));
    }

    #[test]
    fn shift_equivalence_preserves_conditions() {
        let f = ForestSpec::new(vec![2, 2], vec![(2, 1, s(0))]).unwrap();
        let p = PencilSpec::new(
            f,
            vec![vec![s(0), s(3), s(5), s(0)], vec![s(7), s(2), s(4), s(3)]],
        )
        .unwrap();
        let shifted = shift_block(&p, 1, &s(2)).unwrap();
        assert!(
            validate_conditions(&shifted).unwrap().passed(),
            "{:?}",
            validate_conditions(&shifted).unwrap().violations
        );
        assert_eq!(shifted.forest.mark_of(2), Some(&s(2)));
        // degenerate pencils stay flagged, not rejected
        let z = PencilSpec::new(
            ForestSpec::new(vec![1], vec![]).unwrap(),
            vec![vec![s(0), s(0), s(0)]],
        )
        .unwrap();
        let rep = validate_conditions(&z).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.degenerate_blocks, vec![1]);
    }

    #[test]
    fn json_roundtrip_and_complex_rejection() {
        let text = r#"{"blocks":[{"id":1,"dim":2},{"id":2,"dim":2}],
            "edges":[{"child":2,"parent":1,"lambda":"0"}],
            "polys":[{"block":1,"coeffs":["0","1","1"]},{"block":2,"coeffs":["1","0","0","1"]}]}"#;
        let p = parse_spec_json(text).unwrap();
        assert_eq!(p.forest.dims, vec![2, 2]);
        assert_eq!(p.coeffs[0], vec![s(0), s(1), s(1), s(0)]);
        let round = spec_to_json(&p);
        let p2 = parse_spec_json(&round.to_string()).unwrap();
        assert_eq!(p, p2);

        let complex = r#"{"blocks":[{"id":1,"dim":1},{"id":2,"dim":1}],
            "edges":[{"child":2,"parent":1,"lambda":"1+2i"}],"polys":[]}"#;
        assert!(matches!(
            parse_spec_json(complex),
            Err(SpecError::ComplexBlock(_))
        ));
    }
}
