//! Multi-block metric assembly: warp factors from the forest, the
//! block-diagonal hat-metric, and the full contravariant metric
//! `g = diag(P_1(L_1) ĝ_1, …, P_B(L_B) ĝ_B)` with
//! `ĝ_α = prod_{s ≺ α} χ_{L_s}(λ(s,α))^{-1} g_α`.
//!
//! In the block-companion chart every block entry is polynomial and the warp
//! denominators are the characteristic polynomials `χ_{L_s}(λ)` evaluated at
//! the derived marks — no matrix determinant is ever needed. The diagonal
//! chart uses global coordinates `x1..xn` and the product form
//! `χ_{L_s}(λ) = prod_i (λ - x^i_s)`.

use crate::blocks::{make_block_with_vars, AFFBlock};
use crate::error::SpecError;
use crate::forest::{derive_order, validate_conditions, DerivedOrder, ForestSpec, PencilSpec};
use crate::matrix::RMatrix;
use crate::metric::{Chart, MetricRep, Variance};
use crate::poly::MPoly;
use crate::ratfn::RatFn;

/// The assembled multi-block metric together with everything used to build
/// it (blocks, warp factors, derived order, coordinate offsets).
#[derive(Clone, Debug)]
pub struct AssembledMetric {
    pub forest: ForestSpec,
    /// Per-block polynomial coefficients (constants for numeric pencils,
    /// genuine polynomials when symbolic parameters are carried).
    pub coeffs: Vec<Vec<MPoly>>,
    pub chart: Chart,
    pub g: MetricRep,
    /// Warp factor of each block (1 for roots).
    pub warps: Vec<RatFn>,
    pub blocks: Vec<AFFBlock>,
    pub order: DerivedOrder,
    /// Coordinate offset of each block inside the global chart.
    pub offsets: Vec<usize>,
}

fn block_vars(forest: &ForestSpec, chart: Chart) -> Vec<(Vec<String>, Vec<String>)> {
    let b = forest.block_count();
    let mut out = Vec::with_capacity(b);
    let mut offset = 0usize;
    for alpha in 1..=b {
        let n = forest.dims[alpha - 1];
        let yv: Vec<String> = (1..=n).map(|k| format!("y{alpha}_{k}")).collect();
        let xv: Vec<String> = (1..=n).map(|k| format!("x{}", offset + k)).collect();
        offset += n;
        let _ = chart;
        out.push((yv, xv));
    }
    out
}

/// Assembles after checking conditions (i)-(iii); rejects violating specs.
pub fn assemble(spec: &PencilSpec, chart: Chart) -> Result<AssembledMetric, SpecError> {
    let rep = validate_conditions(spec)?;
    if !rep.passed() {
        let clauses: Vec<String> = rep
            .violations
            .iter()
            .map(|v| format!("({}, alpha={}, beta={})", v.clause, v.alpha, v.beta))
            .collect();
        return Err(SpecError::ConditionsViolated(clauses.join(", ")));
    }
    assemble_unchecked(spec, chart)
}

/// Assembles without the conditions check, so counterexample metrics for
/// negative tests can be built.
pub fn assemble_unchecked(spec: &PencilSpec, chart: Chart) -> Result<AssembledMetric, SpecError> {
    let coeffs: Vec<Vec<MPoly>> = spec
        .coeffs
        .iter()
        .map(|cs| cs.iter().map(|c| MPoly::constant(c.clone())).collect())
        .collect();
    assemble_symbolic(&spec.forest, coeffs, chart)
}

/// Core assembly over polynomial coefficients (symbolic parameters allowed).
pub fn assemble_symbolic(
    forest: &ForestSpec,
    coeffs: Vec<Vec<MPoly>>,
    chart: Chart,
) -> Result<AssembledMetric, SpecError> {
    if chart == Chart::FrobeniusU {
        return Err(SpecError::Unsupported(
            "assembly happens in the x or y chart; push forward for u".into(),
        ));
    }
    let order = derive_order(forest)?;
    let b = forest.block_count();
    if coeffs.len() != b {
        return Err(SpecError::Parse(format!(
            "{} coefficient vectors for {b} blocks",
            coeffs.len()
        )));
    }
    let vars = block_vars(forest, chart);
    let mut blocks = Vec::with_capacity(b);
    for alpha in 1..=b {
        let (yv, xv) = vars[alpha - 1].clone();
        blocks.push(make_block_with_vars(forest.dims[alpha - 1], yv, xv)?);
    }

    // warp factors: prod over ancestors s of 1/χ_{L_s}(λ(s,α))
    let mut warps = Vec::with_capacity(b);
    for alpha in 1..=b {
        let mut den = MPoly::one();
        for s in order.ancestors(alpha) {
            let lam = order.lammat[s - 1][alpha - 1]
                .clone()
                .expect("mark defined where cmat = 1");
            let lam = MPoly::constant(lam);
            let chi = match chart {
                Chart::BlockY => blocks[s - 1].char_poly_at(&lam),
                Chart::DiagonalX => blocks[s - 1].char_poly_at_x(&lam),
                Chart::FrobeniusU => unreachable!(),
            };
            if chi.is_zero() {
                return Err(SpecError::Degenerate(format!(
                    "warp denominator chi_L{s}(lambda) vanishes identically"
                )));
            }
            den = den.mul(&chi);
        }
        warps.push(RatFn::new(MPoly::one(), den).expect("nonzero warp denominator"));
    }

    // per-block metrics, then embed block-diagonally
    let n_total = forest.total_dim();
    let mut g = RMatrix::zeros(n_total, n_total);
    let mut offsets = Vec::with_capacity(b);
    let mut offset = 0usize;
    let mut degenerate = Vec::new();
    for alpha in 1..=b {
        offsets.push(offset);
        let blk = &blocks[alpha - 1];
        if coeffs[alpha - 1].iter().all(MPoly::is_zero) {
            degenerate.push(alpha);
            offset += blk.dim;
            continue;
        }
        let gm = blk
            .pencil_metric(&coeffs[alpha - 1], chart)?
            .mat
            .scale(&warps[alpha - 1]);
        for i in 0..blk.dim {
            for j in 0..blk.dim {
                *g.at_mut(offset + i, offset + j) = gm.at(i, j).clone();
            }
        }
        offset += blk.dim;
    }
    if !degenerate.is_empty() {
        return Err(SpecError::Degenerate(format!(
            "blocks {degenerate:?} carry the zero polynomial; assembled metric is singular"
        )));
    }

    let chart_vars: Vec<String> = match chart {
        Chart::BlockY => blocks.iter().flat_map(|b| b.y_vars.clone()).collect(),
        Chart::DiagonalX => blocks.iter().flat_map(|b| b.x_vars.clone()).collect(),
        Chart::FrobeniusU => unreachable!(),
    };
    let g = MetricRep::new(chart, Variance::Contravariant, g, chart_vars)
        .map_err(SpecError::Cas)?;
    Ok(AssembledMetric {
        forest: forest.clone(),
        coeffs,
        chart,
        g,
        warps,
        blocks,
        order,
        offsets,
    })
}

impl AssembledMetric {
    /// Determinant of the assembled metric (zero means degenerate member).
    pub fn determinant(&self) -> Result<RatFn, SpecError> {
        Ok(self.g.mat.determinant().map_err(SpecError::Cas)?)
    }

    /// Human-readable iterated warped-sum decomposition,
    /// e.g. `g1 + (1/chi_{L1}(0))*g2`.
    pub fn warped_sum_form(&self) -> String {
        let b = self.forest.block_count();
        let mut parts = Vec::with_capacity(b);
        for alpha in 1..=b {
            let anc = self.order.ancestors(alpha);
            if anc.is_empty() {
                parts.push(format!("g{alpha}"));
            } else {
                let factors: Vec<String> = anc
                    .iter()
                    .map(|&s| {
                        let lam = self.order.lammat[s - 1][alpha - 1]
                            .clone()
                            .expect("mark defined");
                        format!("chi_{{L{s}}}({lam})")
                    })
                    .collect();
                if factors.len() == 1 {
                    parts.push(format!("(1/{})*g{alpha}", factors[0]));
                } else {
                    parts.push(format!("(1/({}))*g{alpha}", factors.join("*")));
                }
            }
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::ForestSpec;
    use crate::scalar::ExactScalar;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn example1_spec() -> PencilSpec {
        // P1 = 3t + 5t^2, P2 = 7 + 2t + 4t^2 + 3t^3 (b3 = a1 = 3)
        let f = ForestSpec::new(vec![2, 2], vec![(2, 1, s(0))]).unwrap();
        PencilSpec::new(
            f,
            vec![vec![s(0), s(3), s(5), s(0)], vec![s(7), s(2), s(4), s(3)]],
        )
        .unwrap()
    }

    #[test]
    fn example1_x_chart_diagonal() {
        let am = assemble(&example1_spec(), Chart::DiagonalX).unwrap();
        // g = diag(P1(x1)/(x1-x2), P1(x2)/(x2-x1),
        //          P2(x3)/(x1 x2 (x3-x4)), P2(x4)/(x1 x2 (x4-x3)))
        let m = &am.g.mat;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(m.at(i, j).is_zero());
                }
            }
        }
        assert_eq!(
            m.at(0, 0).to_canonical_string(),
            "(5*x1^2 + 3*x1) / (x1 + (-1)*x2)"
        );
        // block 2 warp: 1/chi_{L1}(0) = 1/(x1 x2)
        assert_eq!(
            m.at(2, 2).to_canonical_string(),
            "(3*x3^3 + 4*x3^2 + 2*x3 + 7) / (x1*x2*x3 + (-1)*x1*x2*x4)"
        );
        assert_eq!(am.warps[0], RatFn::one());
        assert_eq!(
            am.warps[1].to_canonical_string(),
            "(1) / (x1*x2)"
        );
    }

    #[test]
    fn single_vertex_is_plain_pencil_metric() {
        let f = ForestSpec::new(vec![2], vec![]).unwrap();
        let p = PencilSpec::new(f, vec![vec![s(1), s(2), s(-3)]]).unwrap();
        let am = assemble(&p, Chart::BlockY).unwrap();
        assert_eq!(am.warps, vec![RatFn::one()]);
        assert_eq!(am.warped_sum_form(), "g1");
        let blk = crate::blocks::make_block_with_vars(
            2,
            vec!["y1_1".into(), "y1_2".into()],
            vec!["x1".into(), "x2".into()],
        )
        .unwrap();
        let direct = blk
            .pencil_metric_scalar(&[s(1), s(2), s(-3)], Chart::BlockY)
            .unwrap();
        assert_eq!(am.g.mat, direct.mat);
    }

    #[test]
    fn fig1_upper_tree_block4_warp() {
        // chain 1 ← 2 with leaves 3, 4 on 2: warp of block 4 is
        // 1/(chi_{L1}(λ2) chi_{L2}(λ4)).
        let f = ForestSpec::new(
            vec![1, 1, 1, 1],
            vec![(2, 1, s(0)), (3, 2, s(1)), (4, 2, s(2))],
        )
        .unwrap();
        // P1 = c(t - 0) with c = 1; P2 = 1 (t-1)(t-2) = 2 - 3t + t^2;
        // leading of P2 must be P1'(0) = 1 ok; P3, P4 leading = P2'(λ).
        // P2'(1) = -1, P2'(2) = 1.
        let p = PencilSpec::new(
            f,
            vec![
                vec![s(0), s(1), s(0)],
                vec![s(2), s(-3), s(1)],
                vec![s(5), s(1), s(-1)],
                vec![s(3), s(2), s(1)],
            ],
        )
        .unwrap();
        assert!(validate_conditions(&p).unwrap().passed());
        let am = assemble(&p, Chart::BlockY).unwrap();
        // chi_{L1}(0) = -y1_1 (n=1: λ - y); chi_{L2}(2) = 2 - y2_1;
        // product (-y1_1)(2 - y2_1) = y1_1 y2_1 - 2 y1_1, already monic
        assert_eq!(
            am.warps[3].to_canonical_string(),
            "(1) / (y1_1*y2_1 + (-2)*y1_1)"
        );
        assert_eq!(
            am.warped_sum_form(),
            "g1 + (1/chi_{L1}(0))*g2 + (1/(chi_{L1}(0)*chi_{L2}(1)))*g3 + (1/(chi_{L1}(0)*chi_{L2}(2)))*g4"
        );
    }

    #[test]
    fn three_chain_warp_nesting() {
        let f = ForestSpec::new(vec![1, 1, 1], vec![(2, 1, s(1)), (3, 2, s(2))]).unwrap();
        // P1 = t - 1; P2 = 1 (t - 2)(...)? P2 quadratic with P2(2) = 0 and
        // leading = P1'(1) = 1: P2 = (t-2)(t-c). Take c = 0: P2 = t^2 - 2t.
        // P3 leading = P2'(2) = 2.
        let p = PencilSpec::new(
            f,
            vec![
                vec![s(-1), s(1), s(0)],
                vec![s(0), s(-2), s(1)],
                vec![s(1), s(1), s(2)],
            ],
        )
        .unwrap();
        assert!(validate_conditions(&p).unwrap().passed());
        let am = assemble(&p, Chart::BlockY).unwrap();
        assert_eq!(
            am.warped_sum_form(),
            "g1 + (1/chi_{L1}(1))*g2 + (1/(chi_{L1}(1)*chi_{L2}(2)))*g3"
        );
        // block-3 warp denominator: (1 - y1_1)(2 - y2_1)
        assert_eq!(
            am.warps[2].to_canonical_string(),
            "(1) / (y1_1*y2_1 + (-2)*y1_1 + (-1)*y2_1 + 2)"
        );
    }

    #[test]
    fn violating_spec_rejected_but_unchecked_builds() {
        let f = ForestSpec::new(vec![2, 2], vec![(2, 1, s(0))]).unwrap();
        let bad = PencilSpec::new(
            f,
            vec![vec![s(1), s(3), s(5), s(0)], vec![s(7), s(2), s(4), s(3)]],
        )
        .unwrap();
        assert!(matches!(
            assemble(&bad, Chart::BlockY),
            Err(SpecError::ConditionsViolated(_))
        ));
        assert!(assemble_unchecked(&bad, Chart::BlockY).is_ok());
    }

    #[test]
    fn zero_block_polynomial_flagged_degenerate() {
        let f = ForestSpec::new(vec![1], vec![]).unwrap();
        let p = PencilSpec::new(f, vec![vec![s(0), s(0), s(0)]]).unwrap();
        assert!(matches!(
            assemble(&p, Chart::BlockY),
            Err(SpecError::Degenerate(_))
        ));
    }
}
