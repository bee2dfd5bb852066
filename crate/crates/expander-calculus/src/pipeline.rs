//! Iterative expander constructions: the initial zigzag iteration, the
//! main-iteration schedule and build, and the final 3-regularization.
//!
//! The initial iteration grows F₁ = 𝒞_{d²}(G₀) and
//! F_{j+1} = 𝒞_m(𝒜_t(F_j)) ⓩ G₀, keeping m^j vertices at constant
//! degree d². The main iteration composes a family {F_j(k)} along a
//! strictly decreasing index sequence h₀(k) = k > h₁(k) > … > 1 with
//! Cesàro smoothing 𝒜_{M_h} between zigzag steps; the true parameters
//! M_k = (2k³)^k are astronomically large, so the builder accepts
//! overridden (small) M values and records the substitution in the
//! trace. The 3-regularization maps a degree-d graph H to
//! (H ⓩ C_d°) ⓡ C₉, a 3-regular graph on 9d|V(H)| vertices.

use crate::error::{Error, Result};
use crate::graph::RegularMultigraph;
use crate::products::{self, RotationLabeling};
use crate::spectral;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

/// How rotation labelings for products are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LabelingPolicy {
    Canonical,
    Random,
}

/// Parameters of the initial iteration.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub g0: RegularMultigraph,
    pub t: u32,
    pub j_max: usize,
    pub labeling: LabelingPolicy,
    pub seed: u64,
}

impl PipelineConfig {
    /// Checks t ≥ 1, j_max ≥ 1 and the degree-budget requirement
    /// t·d^{2(t−1)} ≤ m that makes the m-completion of 𝒜_t possible.
    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.j_max == 0 {
            return Err(Error::InvalidInput("t and j_max must be positive".into()));
        }
        let m = self.g0.vertex_count() as u128;
        let d = self.g0.degree() as u128;
        let mut need: u128 = self.t as u128;
        for _ in 0..(2 * (self.t - 1)) {
            need = need.checked_mul(d).ok_or(Error::Overflow("t·d^{2(t-1)}"))?;
        }
        if need > m {
            return Err(Error::InvalidInput(format!(
                "t·d^(2(t-1)) = {need} exceeds m = {m}"
            )));
        }
        Ok(())
    }
}

/// One record of an iteration trace. Spectral fields are `None` when the
/// eigensolver fails or the quantity was not computed — construction
/// never aborts on analysis failures.
#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub label: String,
    pub vertices: usize,
    pub degree: u64,
    pub lambda_abs: Option<f64>,
    pub gamma_plus: Option<f64>,
    /// γ₊ of the Cesàro stage feeding this step (when applicable).
    pub gamma_plus_cesaro: Option<f64>,
    /// γ₊ of the completed (pre-zigzag) stage (when applicable).
    pub gamma_plus_completed: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IterationTrace {
    pub steps: Vec<StageRecord>,
}

fn spectral_pair(g: &RegularMultigraph) -> (Option<f64>, Option<f64>) {
    match spectral::report(&g.normalized_adjacency(), Some(g.degree())) {
        Ok(r) => (Some(r.lambda_abs), Some(r.gamma_plus_euclid)),
        Err(_) => (None, None),
    }
}

fn record(
    label: impl Into<String>,
    g: &RegularMultigraph,
    ces: Option<f64>,
    comp: Option<f64>,
) -> StageRecord {
    let (lambda_abs, gamma_plus) = spectral_pair(g);
    StageRecord {
        label: label.into(),
        vertices: g.vertex_count(),
        degree: g.degree(),
        lambda_abs,
        gamma_plus,
        gamma_plus_cesaro: ces,
        gamma_plus_completed: comp,
    }
}

fn pick_labeling(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
    policy: LabelingPolicy,
    seed: u64,
) -> Result<RotationLabeling> {
    match policy {
        LabelingPolicy::Canonical => products::default_labeling(g1, g2),
        LabelingPolicy::Random => products::random_labeling(g1, g2, seed),
    }
}

/// Runs the initial iteration: F₁ = 𝒞_{d²}(G₀), then
/// F_{j+1} = 𝒞_m(𝒜_t(F_j)) ⓩ G₀ up to j_max. Every F_j has m^j
/// vertices and degree d² (validated by construction).
pub fn initial_iteration(
    cfg: &PipelineConfig,
) -> Result<(Vec<RegularMultigraph>, IterationTrace)> {
    cfg.validate()?;
    let m = cfg.g0.vertex_count() as u64;
    let d = cfg.g0.degree();
    let d2 = d.checked_mul(d).ok_or(Error::Overflow("d²"))?;
    let mut graphs = Vec::with_capacity(cfg.j_max);
    let mut trace = IterationTrace::default();
    trace.steps.push(record("G0", &cfg.g0, None, None));

    let f1 = cfg.g0.edge_completion(d2)?;
    trace.steps.push(record("F1", &f1, None, None));
    graphs.push(f1);

    for j in 1..cfg.j_max {
        let prev = &graphs[j - 1];
        let ces = prev.cesaro(cfg.t)?;
        let gp_ces = spectral_pair(&ces).1;
        let completed = ces.edge_completion(m)?;
        let gp_comp = spectral_pair(&completed).1;
        let labeling = pick_labeling(
            &completed,
            &cfg.g0,
            cfg.labeling,
            cfg.seed.wrapping_add(j as u64),
        )?;
        let next = products::zigzag(&completed, &cfg.g0, &labeling)?;
        if next.degree() != d2 {
            return Err(Error::InvalidInput(format!(
                "iteration degree drifted to {}",
                next.degree()
            )));
        }
        let expected = (m as u128).pow(j as u32 + 1);
        if next.vertex_count() as u128 != expected {
            return Err(Error::InvalidInput(format!(
                "iteration size drifted to {}",
                next.vertex_count()
            )));
        }
        trace
            .steps
            .push(record(format!("F{}", j + 1), &next, gp_ces, gp_comp));
        graphs.push(next);
    }
    Ok((graphs, trace))
}

/// M_k = (2k³)^k.
pub fn m_k(k: usize) -> BigUint {
    let base = BigUint::from(2usize) * BigUint::from(k).pow(3);
    base.pow(k as u32)
}

/// One composition step of the main-iteration schedule.
#[derive(Clone, Debug, Serialize)]
pub struct ScheduleStep {
    /// Step number i ≥ 1.
    pub i: usize,
    /// h_i(k): which family column supplies the zigzag partner.
    pub h: usize,
    /// j(h_i(k)): which row of that column.
    pub j: usize,
    /// Completion target = n_{j(h_i)}(h_i) = partner vertex count.
    pub completion: BigUint,
    /// Cesàro parameter for this step (M_{h_i(k)}, possibly overridden).
    pub cesaro: BigUint,
}

/// The full bookkeeping output for one k.
#[derive(Clone, Debug, Serialize)]
pub struct Schedule {
    pub k: usize,
    /// j(k) for the starting graph W⁰ = F_{j(k)}(k).
    pub j_start: usize,
    /// h₀ = k > h₁ > … > h_ℓ = 1.
    pub h_seq: Vec<usize>,
    pub steps: Vec<ScheduleStep>,
    /// Degree after the last step: M₁·d₁^{2(M₁−1)} (with overrides, the
    /// overridden M₁ in place of 2).
    pub final_degree: BigUint,
    /// Whether overridden M values were used.
    pub m_overridden: bool,
}

/// The data of the graph family {F_j(k)}: degrees d_k and the strictly
/// increasing vertex-count tables n_j(k), all 1-indexed in (j, k).
pub struct FamilyShape {
    /// degrees[k-1] = d_k; must cover k+1 columns for a schedule at k.
    pub degrees: Vec<BigUint>,
    /// sizes[k-1][j-1] = n_j(k), strictly increasing in j.
    pub sizes: Vec<Vec<BigUint>>,
}

impl FamilyShape {
    fn check(&self, k_needed: usize) -> Result<()> {
        if self.degrees.len() < k_needed || self.sizes.len() < k_needed {
            return Err(Error::InvalidInput(format!(
                "family tables must cover k = {k_needed}"
            )));
        }
        for (col, sizes) in self.sizes.iter().enumerate() {
            if sizes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(format!(
                    "n_j({}) is not strictly increasing",
                    col + 1
                )));
            }
        }
        Ok(())
    }

    fn d(&self, k: usize) -> &BigUint {
        &self.degrees[k - 1]
    }

    fn n(&self, j: usize, k: usize) -> &BigUint {
        &self.sizes[k - 1][j - 1]
    }
}

fn effective_m(k: usize, m_override: Option<&[BigUint]>) -> BigUint {
    match m_override {
        Some(over) if k - 1 < over.len() => over[k - 1].clone(),
        _ => m_k(k),
    }
}

/// Degree after a Cesàro-M step at column h: M·d_h^{2(M−1)}.
fn stage_degree(shape: &FamilyShape, h: usize, m_override: Option<&[BigUint]>) -> Result<BigUint> {
    let m = effective_m(h, m_override);
    let expo = (&m - 1usize) * 2usize;
    let expo = expo
        .to_u32()
        .ok_or(Error::InvalidInput("M too large to schedule without overrides".into()))?;
    Ok(&m * shape.d(h).pow(expo))
}

/// j(k) = min{j : n_j(k) > 2d₁² + M_{k+1}·d_{k+1}^{2(M_{k+1}−1)}}.
fn j_of(shape: &FamilyShape, k: usize, m_override: Option<&[BigUint]>) -> Result<usize> {
    let threshold = BigUint::from(2usize) * shape.d(1).pow(2) + stage_degree(shape, k + 1, m_override)?;
    for (idx, n) in shape.sizes[k - 1].iter().enumerate() {
        if n > &threshold {
            return Ok(idx + 1);
        }
    }
    Err(Error::InvalidInput(format!(
        "no n_j({k}) exceeds the threshold {threshold}; schedule infeasible"
    )))
}

/// Computes the complete main-iteration schedule for one k: j(k), the
/// strictly decreasing h-sequence, and per-step completion/Cesàro
/// parameters, without building any graphs.
pub fn main_iteration_bookkeeping(
    shape: &FamilyShape,
    k: usize,
    m_override: Option<&[BigUint]>,
) -> Result<Schedule> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    shape.check(k + 1)?;
    let j_start = j_of(shape, k, m_override)?;
    let mut h_seq = vec![k];
    let mut steps = Vec::new();
    // Threshold for h₁ is the degree of W⁰ itself (d_k); for i ≥ 2 it is
    // the degree of W^{i−1}.
    let mut threshold = shape.d(k).clone();
    while *h_seq.last().unwrap() > 1 {
        let prev = *h_seq.last().unwrap();
        let mut h = None;
        for cand in 1..=shape.sizes.len() {
            let j = match j_of(shape, cand, m_override) {
                Ok(j) => j,
                Err(_) => continue,
            };
            if shape.n(j, cand) >= &threshold {
                h = Some((cand, j));
                break;
            }
        }
        let (h, j) = h.ok_or_else(|| {
            Error::InvalidInput("no feasible h for the next step; schedule infeasible".into())
        })?;
        if h >= prev {
            return Err(Error::InvalidInput(format!(
                "h-sequence failed to decrease ({h} after {prev}); schedule infeasible"
            )));
        }
        let cesaro = effective_m(h, m_override);
        steps.push(ScheduleStep {
            i: steps.len() + 1,
            h,
            j,
            completion: shape.n(j, h).clone(),
            cesaro,
        });
        threshold = stage_degree(shape, h, m_override)?;
        h_seq.push(h);
    }
    if steps.len() > k {
        return Err(Error::InvalidInput("ℓ(k) exceeded k".into()));
    }
    let final_degree = if steps.is_empty() {
        shape.d(k).clone()
    } else {
        stage_degree(shape, 1, m_override)?
    };
    Ok(Schedule {
        k,
        j_start,
        h_seq,
        steps,
        final_degree,
        m_overridden: m_override.is_some(),
    })
}

/// Builds H_k from a schedule: W⁰ = F_{j(k)}(k) and
/// W^i = 𝒜_M(𝒞_n(W^{i−1}) ⓩ F_{j(h_i)}(h_i)). The supplier provides
/// F_j(k) on demand (arguments are 1-indexed j, k).
pub fn main_iteration_build(
    schedule: &Schedule,
    supplier: &dyn Fn(usize, usize) -> Result<RegularMultigraph>,
    labeling: LabelingPolicy,
    seed: u64,
) -> Result<(RegularMultigraph, IterationTrace)> {
    let mut w = supplier(schedule.j_start, schedule.k)?;
    let mut trace = IterationTrace::default();
    trace.steps.push(record("W0", &w, None, None));
    for step in &schedule.steps {
        let completion = step
            .completion
            .to_u64()
            .ok_or(Error::Overflow("completion target"))?;
        let cesaro = step
            .cesaro
            .to_u32()
            .ok_or(Error::Overflow("cesaro parameter"))?;
        let partner = supplier(step.j, step.h)?;
        if partner.vertex_count() as u64 != completion {
            return Err(Error::InvalidInput(format!(
                "supplier returned {} vertices for F_{}({}) but the schedule expects {completion}",
                partner.vertex_count(),
                step.j,
                step.h
            )));
        }
        let completed = w.edge_completion(completion)?;
        let gp_comp = spectral_pair(&completed).1;
        let l = pick_labeling(&completed, &partner, labeling, seed + step.i as u64)?;
        let zz = products::zigzag(&completed, &partner, &l)?;
        let next = zz.cesaro(cesaro)?;
        let gp_ces = spectral_pair(&zz).1;
        trace
            .steps
            .push(record(format!("W{}", step.i), &next, gp_ces, gp_comp));
        w = next;
    }
    Ok((w, trace))
}

/// Outcome of the 3-regularization H* = (H ⓩ C_d°) ⓡ C₉.
#[derive(Clone, Debug, Serialize)]
pub struct ThreeRegularizeTrace {
    /// Whether H had to be pre-completed to degree 3 (d < 3).
    pub pre_completed: bool,
    pub intermediate_vertices: usize,
    pub gamma_plus_h: Option<f64>,
    pub gamma_plus_cycle_loops: Option<f64>,
    pub gamma_plus_c9: Option<f64>,
    /// The composed bound 9·γ₊(H)·γ₊(C_d°)²·γ₊(C₉)² when all parts are
    /// available.
    pub chain_bound: Option<f64>,
}

/// Converts any regular graph into a 3-regular one on 9d|V| vertices via
/// a zigzag with the self-looped cycle C_d° (degree 3) followed by a
/// replacement with C₉. Degrees below 3 are first raised by edge
/// completion.
pub fn three_regularize(
    h: &RegularMultigraph,
    labeling: LabelingPolicy,
    seed: u64,
) -> Result<(RegularMultigraph, ThreeRegularizeTrace)> {
    let (h, pre_completed) = if h.degree() < 3 {
        (h.edge_completion(3)?, true)
    } else {
        (h.clone(), false)
    };
    let d = h.degree() as usize;
    let cd = RegularMultigraph::cycle_with_loops(d)?;
    let l1 = pick_labeling(&h, &cd, labeling, seed)?;
    let z = products::zigzag(&h, &cd, &l1)?;
    debug_assert_eq!(z.degree(), 9);
    let c9 = RegularMultigraph::cycle(9)?;
    let l2 = pick_labeling(&z, &c9, labeling, seed + 1)?;
    let out = products::replacement(&z, &c9, &l2)?;
    if out.degree() != 3 {
        return Err(Error::InvalidInput(format!(
            "3-regularization produced degree {}",
            out.degree()
        )));
    }
    let gp_h = spectral_pair(&h).1;
    let gp_cd = spectral_pair(&cd).1;
    let gp_c9 = spectral_pair(&c9).1;
    let chain_bound = match (gp_h, gp_cd, gp_c9) {
        (Some(a), Some(b), Some(c)) => Some(9.0 * a * b * b * c * c),
        _ => None,
    };
    Ok((
        out,
        ThreeRegularizeTrace {
            pre_completed,
            intermediate_vertices: z.vertex_count(),
            gamma_plus_h: gp_h,
            gamma_plus_cycle_loops: gp_cd,
            gamma_plus_c9: gp_c9,
            chain_bound,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn toy_config(j_max: usize) -> PipelineConfig {
        PipelineConfig {
            g0: graph::random_regular_connected(32, 4, 7, 200).unwrap(),
            t: 2,
            j_max,
            labeling: LabelingPolicy::Canonical,
            seed: 7,
        }
    }

    #[test]
    fn config_gate() {
        // t·d^(2(t-1)) = 3·4⁴ = 768 > 32.
        let cfg = PipelineConfig {
            t: 3,
            ..toy_config(2)
        };
        assert!(cfg.validate().is_err());
        assert!(toy_config(2).validate().is_ok());
    }

    #[test]
    fn initial_iteration_shapes() {
        let (graphs, trace) = initial_iteration(&toy_config(3)).unwrap();
        let sizes: Vec<usize> = graphs.iter().map(|g| g.vertex_count()).collect();
        assert_eq!(sizes, vec![32, 1024, 32768]);
        assert!(graphs.iter().all(|g| g.degree() == 16));
        // Proof chain: γ₊(F_{j+1}) ≤ 2·γ₊(𝒜_t(F_j))·γ₊(G₀)², and the
        // completion stage itself loses at most a factor 2.
        let g0_gp = trace.steps[0].gamma_plus.unwrap();
        for step in &trace.steps[2..] {
            let ces = step.gamma_plus_cesaro.unwrap();
            let comp = step.gamma_plus_completed.unwrap();
            assert!(comp <= 2.0 * ces + 1e-7, "{}", step.label);
            if let Some(gp) = step.gamma_plus {
                assert!(gp <= comp * g0_gp * g0_gp + 1e-7, "{}", step.label);
                assert!(gp <= 2.0 * ces * g0_gp * g0_gp + 1e-7, "{}", step.label);
            }
        }
    }

    #[test]
    fn degenerate_t1_smoke() {
        let cfg = PipelineConfig {
            t: 1,
            ..toy_config(2)
        };
        let (graphs, _) = initial_iteration(&cfg).unwrap();
        assert_eq!(graphs[1].vertex_count(), 1024);
        assert_eq!(graphs[1].degree(), 16);
    }

    #[test]
    fn m_k_values() {
        assert_eq!(m_k(1), BigUint::from(2usize));
        assert_eq!(m_k(2), BigUint::from(256usize));
    }

    fn toy_shape() -> FamilyShape {
        // d_k = 2 for all k; n_j(k) = 24·2^{j-1}.
        let degrees = vec![BigUint::from(2usize); 4];
        let sizes = (0..4)
            .map(|_| (0..6).map(|j| BigUint::from(24usize << j)).collect())
            .collect();
        FamilyShape { degrees, sizes }
    }

    #[test]
    fn bookkeeping_schedule() {
        let shape = toy_shape();
        let overrides = vec![BigUint::from(2usize); 4];
        let s = main_iteration_bookkeeping(&shape, 2, Some(&overrides)).unwrap();
        // Threshold = 2·d₁² + 2·d₃² = 8 + 8 = 16 < 24 → j(k) = 1.
        assert_eq!(s.j_start, 1);
        assert_eq!(s.h_seq, vec![2, 1]);
        assert_eq!(s.steps.len(), 1);
        assert_eq!(s.steps[0].completion, BigUint::from(24usize));
        assert_eq!(s.steps[0].cesaro, BigUint::from(2usize));
        // Final degree = M₁·d₁^{2(M₁−1)} = 2·4 = 8.
        assert_eq!(s.final_degree, BigUint::from(8usize));
        assert!(s.steps.len() <= s.k);
        assert!(s.h_seq.windows(2).all(|w| w[0] > w[1]));
        // k = 1: ℓ(1) = 0, H₁ = W⁰.
        let s1 = main_iteration_bookkeeping(&shape, 1, Some(&overrides)).unwrap();
        assert!(s1.steps.is_empty());
        // Without overrides the true M_k are unschedulable at this scale.
        assert!(main_iteration_bookkeeping(&shape, 2, None).is_err());
    }

    #[test]
    fn build_from_schedule() {
        let shape = toy_shape();
        let overrides = vec![BigUint::from(2usize); 4];
        let s = main_iteration_bookkeeping(&shape, 2, Some(&overrides)).unwrap();
        let supplier = |j: usize, k: usize| {
            let n = (24usize) << (j - 1);
            graph::random_regular(n, 2, (j * 17 + k) as u64)
        };
        let (h, trace) = main_iteration_build(&s, &supplier, LabelingPolicy::Canonical, 3).unwrap();
        // 𝒞₂₄(W⁰) ⓩ F₁(1): 24·24 vertices, degree 4; 𝒜₂ → degree 8.
        assert_eq!(h.vertex_count(), 576);
        assert_eq!(h.degree(), 8);
        assert_eq!(trace.steps.len(), 2);
        // Crude chain: γ₊(W¹-zigzag) ≤ 2·γ₊(W⁰)·γ₊(F)².
        let w0 = trace.steps[0].gamma_plus.unwrap();
        let f = spectral_pair(&supplier(1, 1).unwrap()).1.unwrap();
        let zz = trace.steps[1].gamma_plus_cesaro.unwrap();
        assert!(zz <= 2.0 * w0 * f * f + 1e-7);
    }

    #[test]
    fn three_regularize_shapes() {
        let h = graph::random_regular_connected(20, 5, 11, 200).unwrap();
        let (out, tr) = three_regularize(&h, LabelingPolicy::Canonical, 1).unwrap();
        assert_eq!(out.degree(), 3);
        assert_eq!(out.vertex_count(), 20 * 5 * 9);
        assert!(out.is_connected());
        assert!(!tr.pre_completed);
        // γ₊(C_d°) ≤ 12d².
        assert!(tr.gamma_plus_cycle_loops.unwrap() <= 12.0 * 25.0);
        // Degenerate degrees get pre-completed.
        let tiny = RegularMultigraph::cycle(5).unwrap(); // degree 2
        let (out, tr) = three_regularize(&tiny, LabelingPolicy::Canonical, 1).unwrap();
        assert_eq!(out.degree(), 3);
        assert!(tr.pre_completed);
        assert_eq!(out.vertex_count(), 5 * 3 * 9);
    }
}
