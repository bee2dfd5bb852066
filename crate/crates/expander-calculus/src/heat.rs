//! Heat-kernel discretization on the hypercube and its code quotient.
//!
//! For t > 0 and n ∈ ℕ set τ = (1−e^{−t})/2 ∈ (0,1/2) and
//! σ = τ^{4τn}(1−τ)^{(1−4τ)n}. The edge-multiplicity table is
//! e(k) = floor(τ^k(1−τ)^{n−k}/σ) = floor(((1−τ)/τ)^{4τn−k}); the graph
//! G on F₂ⁿ joins x,y by e(‖x−y‖₁) edges, and quotienting by the dual of
//! a linear code collapses it to 2^dim vertices at the same degree.
//! Everything numeric is computed either in exact rational arithmetic
//! (τ rational with 4τn an integer) or in certified interval arithmetic
//! with floors verified by precision escalation.

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::exact::{self, Interval};
use crate::graph::RegularMultigraph;
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Precision ladder for certified comparisons and floors.
const START_BITS: u32 = 96;
const MAX_BITS: u32 = 16384;

/// τ, stored exactly when possible.
#[derive(Clone, Debug)]
pub enum TauValue {
    /// Exact rational τ (e.g. 1/4); enables fully exact arithmetic when
    /// 4τn is an integer.
    Rational(BigRational),
    /// τ = (1−e^{−t})/2 for exact rational t, materialized as a certified
    /// enclosure on demand.
    FromT(BigRational),
}

/// The (t, n) parameter block of the discretized heat kernel.
#[derive(Clone, Debug)]
pub struct HeatParams {
    pub n: usize,
    pub tau: TauValue,
}

impl HeatParams {
    /// From the continuous-time parameter t > 0.
    pub fn from_t(t: f64, n: usize) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidInput("t must be positive".into()));
        }
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        let t = BigRational::from_float(t).unwrap();
        Ok(Self {
            n,
            tau: TauValue::FromT(t),
        })
    }

    /// From an exact rational τ ∈ (0, 1/2).
    pub fn from_tau_rational(num: i64, den: i64, n: usize) -> Result<Self> {
        let tau = BigRational::new(BigInt::from(num), BigInt::from(den));
        if !tau.is_positive() || tau >= BigRational::new(BigInt::one(), BigInt::from(2)) {
            return Err(Error::InvalidInput("τ must lie in (0, 1/2)".into()));
        }
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        Ok(Self {
            n,
            tau: TauValue::Rational(tau),
        })
    }

    /// Certified enclosure of τ.
    pub fn tau_interval(&self, bits: u32) -> Interval {
        match &self.tau {
            TauValue::Rational(r) => Interval::point(r.clone()),
            TauValue::FromT(t) => {
                let e = exact::exp_point(&-t.clone(), bits + 8);
                let one = Interval::point(BigRational::one());
                let two = Interval::point(BigRational::from_integer(2.into()));
                one.sub(&e).div(&two).unwrap().round_out(bits)
            }
        }
    }

    pub fn tau_f64(&self) -> f64 {
        self.tau_interval(64).midpoint_f64()
    }

    /// Exact rational τ when 4τn is an integer (the fully exact path).
    fn exact_tau(&self) -> Option<BigRational> {
        if let TauValue::Rational(r) = &self.tau {
            let four_tau_n = r * BigRational::from_integer(BigInt::from(4 * self.n as i64));
            if four_tau_n.is_integer() {
                return Some(r.clone());
            }
        }
        None
    }

    /// σ = τ^{4τn}(1−τ)^{(1−4τ)n} as a certified enclosure.
    pub fn sigma_interval(&self, bits: u32) -> Result<Interval> {
        if let Some(tau) = self.exact_tau() {
            // σ = p^F (q−p)^{n−F} / q^n for τ = p/q and F = 4τn, built
            // from three integer powers (one rational reduction at the
            // end) rather than thousands of reduced multiplications.
            let f = (&tau * BigRational::from_integer(BigInt::from(4 * self.n as i64)))
                .to_integer()
                .to_u32()
                .ok_or(Error::Overflow("4τn"))?;
            let (p, q) = (tau.numer().clone(), tau.denom().clone());
            let num = p.pow(f) * (&q - &p).pow(self.n as u32 - f);
            let den = q.pow(self.n as u32);
            return Ok(Interval::point(BigRational::new(num, den)));
        }
        let tau = self.tau_interval(bits + 32);
        let one = Interval::point(BigRational::one());
        let one_minus = one.sub(&tau);
        let nn = BigRational::from_integer(BigInt::from(self.n as i64));
        let four_tau_n = tau.mul(&Interval::point(&nn * BigRational::from_integer(4.into())));
        let a = exact::pow_real(&tau, &four_tau_n, bits + 16)?;
        let expo2 = Interval::point(nn).sub(&four_tau_n);
        let b = exact::pow_real(&one_minus, &expo2, bits + 16)?;
        Ok(a.mul(&b).round_out(bits))
    }

    pub fn sigma_f64(&self) -> Result<f64> {
        Ok(self.sigma_interval(96)?.midpoint_f64())
    }

    /// e(k) = floor(((1−τ)/τ)^{4τn−k}), certified.
    pub fn e(&self, k: usize) -> Result<BigInt> {
        if k > self.n {
            return Err(Error::InvalidInput("k exceeds n".into()));
        }
        if let Some(tau) = self.exact_tau() {
            let f = (&tau * BigRational::from_integer(BigInt::from(4 * self.n as i64)))
                .to_integer()
                .to_i64()
                .ok_or(Error::Overflow("4τn"))?;
            if (k as i64) > f {
                return Ok(BigInt::zero());
            }
            // floor(((q−p)/p)^{F−k}) by two integer powers and a division.
            let (p, q) = (tau.numer().clone(), tau.denom().clone());
            let e = (f - k as i64) as u32;
            return Ok((&q - &p).pow(e) / p.pow(e));
        }
        let mut bits = START_BITS;
        loop {
            let tau = self.tau_interval(bits + 32);
            let one = Interval::point(BigRational::one());
            let r = one.sub(&tau).div(&tau)?;
            let nn = BigRational::from_integer(BigInt::from(4 * self.n as i64));
            let expo = tau
                .mul(&Interval::point(nn))
                .sub(&Interval::point(BigRational::from_integer(BigInt::from(
                    k as i64,
                ))));
            match exact::pow_real(&r, &expo, bits)?.floor_certified() {
                Some(f) => return Ok(f.max(BigInt::zero())),
                None => {
                    if bits >= MAX_BITS {
                        return Err(Error::PrecisionFailure(format!(
                            "e({k}) not certified at {bits} bits"
                        )));
                    }
                    bits *= 2;
                }
            }
        }
    }

    /// The whole multiplicity table e(0..=n).
    pub fn e_table(&self) -> Result<Vec<BigInt>> {
        let kmax = self.k_max()?;
        let mut out = Vec::with_capacity(self.n + 1);
        for k in 0..=self.n {
            if k <= kmax {
                out.push(self.e(k)?);
            } else {
                out.push(BigInt::zero());
            }
        }
        Ok(out)
    }

    /// Largest k with k ≤ 4τn (beyond it e(k) = 0).
    pub fn k_max(&self) -> Result<usize> {
        if let Some(tau) = self.exact_tau() {
            let f = (&tau * BigRational::from_integer(BigInt::from(4 * self.n as i64)))
                .to_integer()
                .to_i64()
                .ok_or(Error::Overflow("4τn"))?;
            return Ok((f.max(0) as usize).min(self.n));
        }
        let mut bits = START_BITS;
        loop {
            let tau = self.tau_interval(bits);
            let f = tau.mul(&Interval::point(BigRational::from_integer(BigInt::from(
                4 * self.n as i64,
            ))));
            if let Some(fl) = f.floor_certified() {
                let v = fl.to_i64().ok_or(Error::Overflow("4τn"))?;
                return Ok((v.max(0) as usize).min(self.n));
            }
            if bits >= MAX_BITS {
                return Err(Error::PrecisionFailure("4τn straddles an integer".into()));
            }
            bits *= 2;
        }
    }

    /// Degree of the heat graph: d = Σ_k C(n,k)·e(k), exact.
    pub fn degree(&self) -> Result<BigInt> {
        let e = self.e_table()?;
        let mut d = BigInt::zero();
        let mut binom = BigInt::one();
        for (k, ek) in e.iter().enumerate() {
            d += &binom * ek;
            // Pascal step C(n,k+1) = C(n,k)·(n−k)/(k+1): far cheaper than
            // recomputing each coefficient from scratch at large n.
            binom = binom * BigInt::from((self.n - k) as i64) / BigInt::from(k as i64 + 1);
        }
        Ok(d)
    }
}

/// Certified verdict on `lhs·σ·mult ≥ 1` (`ge` = true) or `≤ 1`.
fn certified_sigma_cmp(params: &HeatParams, lhs: &BigInt, mult: i64, ge: bool) -> Result<bool> {
    let target = Interval::point(BigRational::one());
    let factor = BigRational::from_integer(BigInt::from(mult)) * BigRational::from_integer(lhs.clone());
    let mut bits = START_BITS;
    loop {
        let prod = params
            .sigma_interval(bits)?
            .mul(&Interval::point(factor.clone()));
        if ge && prod.lo >= target.lo {
            return Ok(true);
        }
        if ge && prod.hi < target.lo {
            return Ok(false);
        }
        if !ge && prod.hi <= target.lo {
            return Ok(true);
        }
        if !ge && prod.lo > target.lo {
            return Ok(false);
        }
        if bits >= MAX_BITS {
            return Err(Error::PrecisionFailure(
                "σ comparison not certified (value on the boundary)".into(),
            ));
        }
        bits *= 2;
    }
}

/// Verdicts of the binomial-sum estimates: 1/(3σ) ≤ Σ C(n,k)e(k) ≤ 1/σ
/// over k ≤ 4τn, and both parity-restricted sums ≥ 1/(18σ) — the latter
/// covers every window Σ_m C(n,s−2m)e(s−2m) for s ∈ (4τn, n], since any
/// such window is exactly the k ≡ s (mod 2), k ≤ 4τn slice.
#[derive(Clone, Debug, Serialize)]
pub struct TauEstimatesReport {
    pub n: usize,
    pub tau: f64,
    pub k_max: usize,
    pub useful1_lower_ok: bool,
    pub useful1_upper_ok: bool,
    pub useful2_even_ok: bool,
    pub useful2_odd_ok: bool,
}

impl TauEstimatesReport {
    pub fn all_ok(&self) -> bool {
        self.useful1_lower_ok
            && self.useful1_upper_ok
            && self.useful2_even_ok
            && self.useful2_odd_ok
    }
}

/// Checks the hypotheses t ∈ (0, 1/4) (equivalently τ below the t = 1/4
/// level), n ≥ 8000, and 9nτ² ≥ 1, then verifies the binomial-sum
/// estimates in exact/certified arithmetic. Pure arithmetic — no graph
/// is materialized.
pub fn tau_estimates_check(params: &HeatParams) -> Result<TauEstimatesReport> {
    if params.n < 8000 {
        return Err(Error::InvalidInput("hypothesis n ≥ 8000 violated".into()));
    }
    let tau = params.tau_interval(128);
    // t < 1/4 ⟺ τ < (1 − e^{−1/4})/2.
    let e_quarter = exact::exp_point(&BigRational::new(BigInt::from(-1), BigInt::from(4)), 160);
    let tau_cap = Interval::point(BigRational::one())
        .sub(&e_quarter)
        .div(&Interval::point(BigRational::from_integer(2.into())))?;
    if !(tau.hi < tau_cap.lo) {
        return Err(Error::InvalidInput(
            "hypothesis t ∈ (0, 1/4) violated (or not certifiable)".into(),
        ));
    }
    if !tau.lo.is_positive() {
        return Err(Error::InvalidInput("hypothesis τ > 0 violated".into()));
    }
    // τ ≥ 1/(3√n) ⟺ 9nτ² ≥ 1.
    let nine_n = BigRational::from_integer(BigInt::from(9 * params.n as i64));
    if &tau.lo * &tau.lo * &nine_n < BigRational::one() {
        return Err(Error::InvalidInput(
            "hypothesis τ ≥ 1/(3√n) violated (or not certifiable)".into(),
        ));
    }

    let kmax = params.k_max()?;
    let mut s_even = BigInt::zero();
    let mut s_odd = BigInt::zero();
    let mut binom = BigInt::one();
    for k in 0..=kmax {
        let term = &binom * params.e(k)?;
        if k % 2 == 0 {
            s_even += term;
        } else {
            s_odd += term;
        }
        binom = binom * BigInt::from((params.n - k) as i64) / BigInt::from(k as i64 + 1);
    }
    let total = &s_even + &s_odd;
    Ok(TauEstimatesReport {
        n: params.n,
        tau: params.tau_f64(),
        k_max: kmax,
        useful1_lower_ok: certified_sigma_cmp(params, &total, 3, true)?,
        useful1_upper_ok: certified_sigma_cmp(params, &total, 1, false)?,
        useful2_even_ok: certified_sigma_cmp(params, &s_even, 18, true)?,
        useful2_odd_ok: certified_sigma_cmp(params, &s_odd, 18, true)?,
    })
}

/// Smallest τ = num/10⁶ satisfying the lower hypothesis 9nτ² ≥ 1 — a
/// rational stand-in for the boundary value 1/(3√n).
pub fn boundary_tau(n: usize) -> (i64, i64) {
    let den: i64 = 1_000_000;
    // smallest num with 9n·num² ≥ den².
    let mut num = ((den as f64) / (3.0 * (n as f64).sqrt())).floor() as i64;
    while 9 * (n as i128) * (num as i128) * (num as i128) < (den as i128) * (den as i128) {
        num += 1;
    }
    (num, den)
}

/// Builds G on F₂ⁿ: x,y joined by e(‖x⊕y‖₁) parallel edges. The edge
/// budget bounds 2ⁿ · (#masks with e > 0).
pub fn heat_graph(params: &HeatParams, edge_budget: u64) -> Result<RegularMultigraph> {
    let n = params.n;
    if n > 20 {
        return Err(Error::TooLarge {
            n: 1 << n.min(63),
            threshold: 1 << 20,
        });
    }
    let e = params.e_table()?;
    let mult: Vec<u64> = e
        .iter()
        .map(|b| b.to_u64().ok_or(Error::Overflow("edge multiplicity e(k)")))
        .collect::<Result<_>>()?;
    let masks: Vec<u32> = (0..(1u32 << n))
        .filter(|m| mult[m.count_ones() as usize] > 0)
        .collect();
    let pair_count = (1u64 << n)
        .checked_mul(masks.len() as u64)
        .ok_or(Error::Overflow("edge budget"))?;
    if pair_count > edge_budget {
        return Err(Error::CapExceeded {
            needed: pair_count as f64,
            cap: edge_budget,
        });
    }
    let mut edges = Vec::new();
    for u in 0..(1u32 << n) {
        for &m in &masks {
            let v = u ^ m;
            if v >= u {
                edges.push((u as usize, v as usize, mult[m.count_ones() as usize]));
            }
        }
    }
    RegularMultigraph::build(1 << n, &edges)
}

/// The quotient of the heat graph by V⊥ (the dual of `code`): one vertex
/// per coset index, with multiplicity between cosets c₁, c₂ equal to
/// Σ_{w ∈ V⊥} e(‖rep(c₁) ⊕ rep(c₂) ⊕ w‖₁). Same degree as the heat
/// graph; built directly from the coset representatives without
/// materializing the 2ⁿ-vertex graph.
pub fn quotient_heat_graph(params: &HeatParams, code: &LinearCode) -> Result<RegularMultigraph> {
    if code.n != params.n {
        return Err(Error::InvalidInput("code length must equal n".into()));
    }
    if params.n > 20 {
        return Err(Error::TooLarge {
            n: 1 << params.n.min(63),
            threshold: 1 << 20,
        });
    }
    let e = params.e_table()?;
    let dual = code.dual()?;
    let reps = code.coset_reps()?;
    let m = reps.len();
    let mut edges = Vec::new();
    for c1 in 0..m {
        for c2 in c1..m {
            let base = reps[c1] ^ reps[c2];
            let mut total = BigInt::zero();
            for msg in 0..(1u64 << dual.dim) {
                let w = dual.encode(msg);
                total += &e[(base ^ w).count_ones() as usize];
            }
            if !total.is_zero() {
                let t = total
                    .to_u64()
                    .ok_or(Error::Overflow("quotient multiplicity"))?;
                edges.push((c1, c2, t));
            }
        }
    }
    RegularMultigraph::build(m, &edges)
}

/// Heat-kernel matrix entry (e^{−tΔ}δ_x)(y) =
/// ((1−e^{−t})/2)^k·((1+e^{−t})/2)^{n−k} with k = ‖x−y‖₁.
pub fn heat_matrix_entry(t: f64, n: usize, x: u64, y: u64) -> f64 {
    let k = (x ^ y).count_ones() as i32;
    let em = (-t).exp();
    ((1.0 - em) / 2.0).powi(k) * ((1.0 + em) / 2.0).powi(n as i32 - k)
}

/// Σ_m C(n,m)·|τ^m(1−τ)^{n−m} − 2^{−n}| — the L¹ distance between the
/// evolved normalized delta and the uniform density (whose total mass
/// comparison point is 2(1−2^{−n})).
pub fn heat_l1_ratio(n: usize, t: f64) -> Result<f64> {
    if n > 60 {
        return Err(Error::TooLarge {
            n,
            threshold: 60,
        });
    }
    let tau = (1.0 - (-t).exp()) / 2.0;
    let uniform = 0.5f64.powi(n as i32);
    let mut sum = 0.0f64;
    for m in 0..=n {
        let binom = binomial(BigInt::from(n as i64), BigInt::from(m as i64))
            .to_f64()
            .ok_or(Error::Overflow("binomial"))?;
        let w = tau.powi(m as i32) * (1.0 - tau).powi((n - m) as i32);
        sum += binom * (w - uniform).abs();
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;

    fn toy() -> HeatParams {
        HeatParams::from_tau_rational(1, 4, 4).unwrap()
    }

    #[test]
    fn exact_e_values() {
        let p = toy();
        let e: Vec<i64> = (0..=4).map(|k| p.e(k).unwrap().to_i64().unwrap()).collect();
        assert_eq!(e, vec![81, 27, 9, 3, 1]);
        let d = p.degree().unwrap().to_i64().unwrap();
        assert_eq!(d, 256);
        let sigma = p.sigma_interval(64).unwrap();
        assert_eq!(sigma.lo, sigma.hi);
        assert_eq!(sigma.lo, BigRational::new(BigInt::one(), BigInt::from(256)));
    }

    #[test]
    fn interval_path_agrees_with_exact() {
        // τ = 1/4 via t = ln(4/3)·... : e^{-t} = 1/2 gives τ = 1/4.
        let p = HeatParams::from_t(std::f64::consts::LN_2, 4).unwrap();
        // t = ln 2 in f64 is not exactly ln 2, so 4τn is near-integer but
        // not on it; the floors still certify and match the exact table
        // except possibly at the k = 4τn boundary. Compare k < 4.
        for k in 0..4usize {
            let exact_v = toy().e(k).unwrap();
            let interval_v = p.e(k).unwrap();
            let diff = (&exact_v - &interval_v).abs();
            assert!(diff <= BigInt::one(), "k={k}: {exact_v} vs {interval_v}");
        }
    }

    #[test]
    fn heat_graph_shape() {
        let g = heat_graph(&toy(), 1 << 20).unwrap();
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.degree(), 256);
        // XOR-translation invariance: multiplicity depends only on the
        // Hamming weight of the difference.
        let m = g.multiplicity_matrix();
        for u in 0..16usize {
            for v in 0..16usize {
                let k = (u ^ v).count_ones() as usize;
                let expect = [81u64, 27, 9, 3, 1][k];
                assert_eq!(m[u][v], expect);
            }
        }
    }

    #[test]
    fn quotient_properties() {
        let p = toy();
        // Full space: V⊥ = {0}, quotient is the graph itself.
        let full = codes::LinearCode::new(4, vec![1, 2, 4, 8]).unwrap();
        let q = quotient_heat_graph(&p, &full).unwrap();
        let g = heat_graph(&p, 1 << 20).unwrap();
        assert_eq!(q.multiplicity_matrix(), g.multiplicity_matrix());
        // Repetition code: 2 cosets, degree preserved, loop multiplicity
        // is the even-weight e-sum: 81 + 6·9 + 1 = 136.
        let rep = codes::repetition(4).unwrap();
        let q = quotient_heat_graph(&p, &rep).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.degree(), 256);
        assert_eq!(q.multiplicity_matrix()[0][0], 136);
        assert_eq!(q.multiplicity_matrix()[0][1], 4 * 27 + 4 * 3);
        // Edge-count conservation: |V⊥|·(total multiplicity of quotient)
        // equals total multiplicity of the full graph, trivially via
        // regularity at equal degree.
        let dual_size = 1u64 << rep.dual().unwrap().dim;
        let tot_q: u64 = q.multiplicity_matrix().iter().flatten().sum();
        let tot_g: u64 = g.multiplicity_matrix().iter().flatten().sum();
        assert_eq!(tot_q * dual_size, tot_g);
    }

    #[test]
    fn tau_estimates_on_exact_point() {
        // τ = 1/50 = 0.02, n = 8000: 4τn = 640 exactly.
        let p = HeatParams::from_tau_rational(1, 50, 8000).unwrap();
        let rep = tau_estimates_check(&p).unwrap();
        assert_eq!(rep.k_max, 640);
        assert!(rep.all_ok(), "{rep:?}");
    }

    #[test]
    fn tau_estimates_hypothesis_gate() {
        // t = 0.5 > 1/4 is a hypothesis violation, not a false verdict.
        let p = HeatParams::from_t(0.5, 8000).unwrap();
        assert!(tau_estimates_check(&p).is_err());
        // n too small.
        let p = HeatParams::from_tau_rational(1, 50, 4000).unwrap();
        assert!(tau_estimates_check(&p).is_err());
        // τ below the boundary.
        let p = HeatParams::from_tau_rational(1, 1000, 8000).unwrap();
        assert!(tau_estimates_check(&p).is_err());
    }

    #[test]
    fn boundary_tau_is_minimal() {
        let (num, den) = boundary_tau(8000);
        let (num, den, below) = (num as i128, den as i128, (num - 1) as i128);
        assert!(9 * 8000 * num * num >= den * den);
        assert!(9 * 8000 * below * below < den * den);
    }

    #[test]
    fn heat_matrix_rows_sum_to_one() {
        for (t, n) in [(0.3f64, 6usize), (1.0, 9), (2.5, 12)] {
            for x in [0u64, 5, (1 << n) - 1] {
                let s: f64 = (0..(1u64 << n)).map(|y| heat_matrix_entry(t, n, x, y)).sum();
                assert!((s - 1.0).abs() < 1e-12, "t={t} n={n}: {s}");
            }
        }
        // t = 0: the kernel is the indicator of x = y.
        assert_eq!(heat_matrix_entry(0.0, 5, 3, 3), 1.0);
        assert_eq!(heat_matrix_entry(0.0, 5, 3, 4), 0.0);
    }

    #[test]
    fn l1_ratio_values() {
        // n = 1, t = 1: 2·|(1−e^{−1})/2 − 1/2| = e^{−1}.
        let v = heat_l1_ratio(1, 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-12);
        // t = 0: the full mass 2(1−2^{−n}).
        let v = heat_l1_ratio(10, 0.0).unwrap();
        assert!((v - 2.0 * (1.0 - 0.5f64.powi(10))).abs() < 1e-12);
        // Growing n at t = 1 approaches the full mass monotonically from
        // below; at n = 60 the exact ratio is ≈ 0.8581.
        let ratios: Vec<f64> = [20usize, 40, 60]
            .iter()
            .map(|&n| {
                heat_l1_ratio(n, 1.0).unwrap() / (2.0 * (1.0 - 0.5f64.powi(n as i32)))
            })
            .collect();
        assert!(ratios[0] < ratios[1] && ratios[1] < ratios[2]);
        assert!(ratios[2] > 0.85 && ratios[2] < 1.0, "ratio {}", ratios[2]);
    }
}
