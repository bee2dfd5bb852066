//! Nonlinear Poincaré machinery.
//!
//! For a symmetric stochastic matrix A and a kernel K: X×X → [0,∞), the
//! two-function Poincaré constant γ₊(A,K) is the supremum over maps
//! f,g: V → X of
//!
//!   [(1/n²) ΣΣ K(f_i, g_j)] / [(1/n) ΣΣ a_ij K(f_i, g_j)],
//!
//! and γ(A,K) is the same with f = g. On finite targets both are computed
//! exactly by enumeration in integer arithmetic (this is the oracle the
//! inequality batteries test against); on vector targets we provide a
//! ratio evaluator, a seeded search-based lower bound, the Markov-cotype
//! witness and checks, and the non-decay experiment for the kernel
//! ρ(x,y)² with ρ = log(1 + ‖x-y‖_∞).

use crate::error::{Error, Result};
use crate::graph::RegularMultigraph;
use crate::matrix::StochasticMatrix;
use crate::par;
use crate::spectral;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A kernel on a ground set X.
#[derive(Clone, Debug)]
pub enum KernelSpec {
    /// K(x,y) = ‖x-y‖₂² on ℝ^dim.
    EuclidSq,
    /// K(x,y) = Σ|x_i-y_i|^p — the ℓ_p metric raised to the power p.
    LpPower { dim: usize, p: f64 },
    /// K(x,y) = D[x][y]^p on a finite metric space given by its distance
    /// matrix.
    FiniteMetric { dist: Vec<Vec<f64>>, p: f64 },
    /// K(x,y) = log(1 + ‖x-y‖_∞)^p on integer vectors.
    LogLinf { dim: usize, p: f64 },
}

impl KernelSpec {
    /// Validates the spec (FiniteMetric: symmetry, zero diagonal, triangle
    /// inequality within 1e-12).
    pub fn validate(&self) -> Result<()> {
        if let KernelSpec::FiniteMetric { dist, p } = self {
            if *p < 1.0 {
                return Err(Error::InvalidInput("metric power needs p ≥ 1".into()));
            }
            let x = dist.len();
            for (i, row) in dist.iter().enumerate() {
                if row.len() != x {
                    return Err(Error::InvalidInput("distance matrix not square".into()));
                }
                if row[i] != 0.0 {
                    return Err(Error::InvalidInput("nonzero diagonal".into()));
                }
                for (j, &dij) in row.iter().enumerate() {
                    if dij < 0.0 || (dij - dist[j][i]).abs() > 1e-12 {
                        return Err(Error::InvalidInput("asymmetric distances".into()));
                    }
                    for k in 0..x {
                        if dij > dist[i][k] + dist[k][j] + 1e-12 {
                            return Err(Error::InvalidInput(format!(
                                "triangle inequality fails at ({i},{j},{k})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The quasi-metric exponent κ = p-1 for metric-power kernels; a
    /// metric power d^p satisfies d^p(x,y) ≤ 2^κ (d^p(x,z) + d^p(z,y)).
    pub fn kappa(&self) -> f64 {
        match self {
            KernelSpec::EuclidSq => 1.0,
            KernelSpec::LpPower { p, .. }
            | KernelSpec::FiniteMetric { p, .. }
            | KernelSpec::LogLinf { p, .. } => p - 1.0,
        }
    }

    /// Kernel evaluation on two points.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        match (self, x, y) {
            (KernelSpec::EuclidSq, Point::Vector(a), Point::Vector(b)) => {
                check_dims(a, b)?;
                Ok(a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum())
            }
            (KernelSpec::LpPower { p, .. }, Point::Vector(a), Point::Vector(b)) => {
                check_dims(a, b)?;
                Ok(a.iter().zip(b).map(|(u, v)| (u - v).abs().powf(*p)).sum())
            }
            (KernelSpec::FiniteMetric { dist, p }, Point::Index(i), Point::Index(j)) => {
                if *i >= dist.len() || *j >= dist.len() {
                    return Err(Error::InvalidInput("point index out of range".into()));
                }
                Ok(dist[*i][*j].powf(*p))
            }
            (KernelSpec::LogLinf { p, .. }, Point::Vector(a), Point::Vector(b)) => {
                check_dims(a, b)?;
                let linf = a
                    .iter()
                    .zip(b)
                    .map(|(u, v)| (u - v).abs())
                    .fold(0.0f64, f64::max);
                Ok((1.0 + linf).ln().powf(*p))
            }
            _ => Err(Error::InvalidInput(
                "point type does not match kernel ground set".into(),
            )),
        }
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput("point dimension mismatch".into()));
    }
    Ok(())
}

/// A point of a kernel's ground set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Point {
    Vector(Vec<f64>),
    Index(usize),
}

/// A pair of maps f,g: vertices → X.
#[derive(Clone, Debug, Serialize)]
pub struct Configuration {
    pub f: Vec<Point>,
    pub g: Vec<Point>,
}

impl Configuration {
    pub fn identity_indices(n: usize) -> Self {
        let pts: Vec<Point> = (0..n).map(Point::Index).collect();
        Self { f: pts.clone(), g: pts }
    }
}

/// The Poincaré ratio of one configuration:
/// [(1/n²) ΣΣ K(f_i,g_j)] / [(1/n) ΣΣ a_ij K(f_i,g_j)].
/// Returns ∞ when the denominator vanishes but not the numerator, and 1
/// when both vanish (a constant pair carries no information).
pub fn ratio(a: &StochasticMatrix, kernel: &KernelSpec, c: &Configuration) -> Result<f64> {
    let n = a.order();
    if c.f.len() != n || c.g.len() != n {
        return Err(Error::InvalidInput("configuration size mismatch".into()));
    }
    let mut num = 0.0f64;
    for fi in &c.f {
        for gj in &c.g {
            num += kernel.eval(fi, gj)?;
        }
    }
    num /= (n * n) as f64;
    let mut den = 0.0f64;
    for (i, row) in a.rows().iter().enumerate() {
        for &(j, w) in row {
            den += w * kernel.eval(&c.f[i], &c.g[j])?;
        }
    }
    den /= n as f64;
    Ok(if den == 0.0 {
        if num == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    })
}

// ---------------------------------------------------------------------------
// Exact enumeration oracle on finite metric targets.
// ---------------------------------------------------------------------------

/// An exact Poincaré constant: a nonnegative rational or ∞.
#[derive(Clone, Debug)]
pub struct ExactValue {
    pub finite: Option<BigRational>,
}

impl ExactValue {
    pub fn infinite() -> Self {
        Self { finite: None }
    }

    pub fn from_ratio(num: i128, den: i128) -> Self {
        Self {
            finite: Some(BigRational::new(BigInt::from(num), BigInt::from(den))),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.finite.is_none()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.finite {
            None => f64::INFINITY,
            Some(r) => r.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    /// self ≤ other, with ∞ ≤ ∞ true and ∞ ≤ finite false.
    pub fn le(&self, other: &ExactValue) -> bool {
        match (&self.finite, &other.finite) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        }
    }

    /// Product of exact values (∞ absorbs).
    pub fn mul(&self, other: &ExactValue) -> ExactValue {
        match (&self.finite, &other.finite) {
            (Some(a), Some(b)) => ExactValue {
                finite: Some(a * b),
            },
            _ => ExactValue::infinite(),
        }
    }

    /// Product with a rational scalar.
    pub fn scale(&self, num: i64, den: i64) -> ExactValue {
        let s = BigRational::new(BigInt::from(num), BigInt::from(den));
        ExactValue {
            finite: self.finite.as_ref().map(|a| a * s),
        }
    }
}

/// Result of exact enumeration.
#[derive(Clone, Debug)]
pub struct BruteResult {
    pub value: ExactValue,
    pub witness_f: Vec<usize>,
    pub witness_g: Vec<usize>,
    /// Number of configurations enumerated (full path) or of outer maps
    /// (hybrid path).
    pub enumerated: u64,
}

/// A finite metric with exact rational entries, scaled to a common-
/// denominator integer kernel matrix K[x][y] = scale·d(x,y)^p. The scale
/// cancels in every Poincaré ratio.
#[derive(Clone, Debug)]
pub struct ExactKernel {
    pub size: usize,
    pub k: Vec<Vec<i128>>,
}

impl ExactKernel {
    /// Builds from a rational distance matrix (f64 entries are read as
    /// exact rationals) and an integer power p ∈ {1,..,4}.
    pub fn from_metric(dist: &[Vec<f64>], p: u32) -> Result<Self> {
        if p == 0 || p > 4 {
            return Err(Error::InvalidInput(
                "exact oracle supports integer powers 1..4".into(),
            ));
        }
        let spec = KernelSpec::FiniteMetric {
            dist: dist.to_vec(),
            p: p as f64,
        };
        spec.validate()?;
        let x = dist.len();
        // Exact rationals d^p, then clear denominators.
        let mut rat = vec![vec![BigRational::zero(); x]; x];
        let mut lcm = BigInt::one();
        for i in 0..x {
            for j in 0..x {
                let r = BigRational::from_float(dist[i][j])
                    .ok_or_else(|| Error::InvalidInput("non-finite distance".into()))?;
                let mut v = BigRational::one();
                for _ in 0..p {
                    v *= &r;
                }
                lcm = num_integer::lcm(lcm, v.denom().clone());
                rat[i][j] = v;
            }
        }
        let mut k = vec![vec![0i128; x]; x];
        for i in 0..x {
            for j in 0..x {
                let scaled = (&rat[i][j] * BigRational::from_integer(lcm.clone()))
                    .to_integer();
                k[i][j] = scaled.to_i128().ok_or(Error::Overflow("kernel scaling"))?;
            }
        }
        Ok(Self { size: x, k })
    }
}

/// Shared integer view of the matrix side: entries w[i][j] over a common
/// denominator `den` (for a graph: multiplicities over the degree).
struct ScaledMatrix {
    n: usize,
    den: i128,
    w: Vec<Vec<i128>>,
}

impl ScaledMatrix {
    fn from_graph(g: &RegularMultigraph) -> Self {
        let n = g.vertex_count();
        let w = g
            .multiplicity_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|m| m as i128).collect())
            .collect();
        Self {
            n,
            den: g.degree() as i128,
            w,
        }
    }
}

fn decode(mut idx: u64, x: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0usize; n];
    for slot in out.iter_mut() {
        *slot = (idx % x as u64) as usize;
        idx /= x as u64;
    }
    out
}

/// Exact γ(G, d^p) by full enumeration of all maps f: V → X (f = g).
pub fn gamma_bruteforce(
    g: &RegularMultigraph,
    kernel: &ExactKernel,
    cap: u64,
) -> Result<BruteResult> {
    let mat = ScaledMatrix::from_graph(g);
    let n = mat.n;
    let x = kernel.size;
    let total = checked_pow(x as u64, n as u32, cap)?;
    let result = par::reduce_indexed(
        total as usize,
        Candidate::unit(),
        |idx| {
            let f = decode(idx as u64, x, n);
            let mut num = 0i128;
            for &fi in &f {
                for &fj in &f {
                    num += kernel.k[fi][fj];
                }
            }
            let mut den = 0i128;
            for i in 0..n {
                for j in 0..n {
                    if mat.w[i][j] != 0 {
                        den += mat.w[i][j] * kernel.k[f[i]][f[j]];
                    }
                }
            }
            Candidate::from_sums(num, den, &mat, idx as u64, idx as u64)
        },
        Candidate::max,
    );
    Ok(result.into_result(x, n, total))
}

/// Exact γ₊(G, d^p): full enumeration of map pairs (f,g) when |X|^{2n}
/// fits the cap, otherwise enumeration of f with an exact linear-
/// fractional maximization over g (both paths are exact; the second is a
/// Dinkelbach iteration in integer arithmetic over the finite value set).
pub fn gamma_plus_bruteforce(
    g: &RegularMultigraph,
    kernel: &ExactKernel,
    cap: u64,
) -> Result<BruteResult> {
    let mat = ScaledMatrix::from_graph(g);
    let n = mat.n;
    let x = kernel.size;
    if x == 1 {
        // Single-point target: every ratio is 0/0, convention 1.
        return Ok(BruteResult {
            value: ExactValue::from_ratio(1, 1),
            witness_f: vec![0; n],
            witness_g: vec![0; n],
            enumerated: 1,
        });
    }
    if let Ok(total) = checked_pow(x as u64, 2 * n as u32, cap) {
        return gamma_plus_full(&mat, kernel, total);
    }
    let outer = checked_pow(x as u64, n as u32, cap)?;
    gamma_plus_hybrid(&mat, kernel, outer)
}

fn checked_pow(x: u64, e: u32, cap: u64) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(x).ok_or(Error::CapExceeded {
            needed: (x as f64).powi(e as i32),
            cap,
        })?;
        if acc > cap {
            return Err(Error::CapExceeded {
                needed: (x as f64).powi(e as i32),
                cap,
            });
        }
    }
    Ok(acc)
}

/// A running maximum of exact ratios with its witness.
#[derive(Clone)]
struct Candidate {
    /// (num, den) with den == 0 marking ∞; scaled so the ratio is
    /// (den_matrix·num)/(n·den) — callers pass already-scaled values.
    num: i128,
    den: i128,
    f_idx: u64,
    g_idx: u64,
}

impl Candidate {
    /// The 0/0-convention baseline: ratio 1 from a constant pair.
    fn unit() -> Self {
        Self {
            num: 1,
            den: 1,
            f_idx: 0,
            g_idx: 0,
        }
    }

    fn from_sums(num: i128, den: i128, mat: &ScaledMatrix, f_idx: u64, g_idx: u64) -> Self {
        // ratio = (mat.den · num) / (n · den); 0/0 → 1 (dominated by unit).
        if den == 0 && num == 0 {
            return Self::unit();
        }
        Self {
            num: mat.den * num,
            den: mat.n as i128 * den,
            f_idx,
            g_idx,
        }
    }

    fn is_infinite(&self) -> bool {
        self.den == 0 && self.num > 0
    }

    fn max(a: Candidate, b: Candidate) -> Candidate {
        if a.is_infinite() {
            return a;
        }
        if b.is_infinite() {
            return b;
        }
        // Compare a.num/a.den vs b.num/b.den; both denominators positive.
        if a.num * b.den >= b.num * a.den {
            a
        } else {
            b
        }
    }

    fn into_result(self, x: usize, n: usize, enumerated: u64) -> BruteResult {
        let value = if self.is_infinite() {
            ExactValue::infinite()
        } else {
            ExactValue::from_ratio(self.num, self.den)
        };
        BruteResult {
            value,
            witness_f: decode(self.f_idx, x, n),
            witness_g: decode(self.g_idx, x, n),
            enumerated,
        }
    }
}

fn gamma_plus_full(
    mat: &ScaledMatrix,
    kernel: &ExactKernel,
    total: u64,
) -> Result<BruteResult> {
    let n = mat.n;
    let x = kernel.size;
    let outer = (x as u64).pow(n as u32);
    let result = par::reduce_indexed(
        outer as usize,
        Candidate::unit(),
        |fi| {
            let f = decode(fi as u64, x, n);
            // Per-f tables: ncol[c] = Σ_i K[f_i][c] (numerator gain of
            // setting any g_j = c) and dcol[j][c] = Σ_i w[i][j]·K[f_i][c].
            let mut ncol = vec![0i128; x];
            for c in 0..x {
                for &fv in &f {
                    ncol[c] += kernel.k[fv][c];
                }
            }
            let mut dcol = vec![vec![0i128; x]; n];
            for (j, dj) in dcol.iter_mut().enumerate() {
                for c in 0..x {
                    let mut s = 0i128;
                    for i in 0..n {
                        if mat.w[i][j] != 0 {
                            s += mat.w[i][j] * kernel.k[f[i]][c];
                        }
                    }
                    dj[c] = s;
                }
            }
            // Odometer over g with O(1) digit updates.
            let mut gdig = vec![0usize; n];
            let mut s_num: i128 = n as i128 * ncol[0];
            let mut s_den: i128 = dcol.iter().map(|dj| dj[0]).sum();
            let mut best = Candidate::from_sums(s_num, s_den, mat, fi as u64, 0);
            let inner = (x as u64).pow(n as u32);
            for gi in 1..inner {
                // Increment the odometer.
                let mut pos = 0;
                loop {
                    let old = gdig[pos];
                    if old + 1 < x {
                        gdig[pos] = old + 1;
                        s_num += ncol[old + 1] - ncol[old];
                        s_den += dcol[pos][old + 1] - dcol[pos][old];
                        break;
                    }
                    gdig[pos] = 0;
                    s_num += ncol[0] - ncol[old];
                    s_den += dcol[pos][0] - dcol[pos][old];
                    pos += 1;
                }
                best = Candidate::max(
                    best,
                    Candidate::from_sums(s_num, s_den, mat, fi as u64, gi),
                );
            }
            best
        },
        Candidate::max,
    );
    Ok(result.into_result(x, n, total))
}

fn gamma_plus_hybrid(
    mat: &ScaledMatrix,
    kernel: &ExactKernel,
    outer: u64,
) -> Result<BruteResult> {
    let n = mat.n;
    let x = kernel.size;
    let result = par::reduce_indexed(
        outer as usize,
        Candidate::unit(),
        |fi| {
            let f = decode(fi as u64, x, n);
            let mut ncol = vec![0i128; x];
            for c in 0..x {
                for &fv in &f {
                    ncol[c] += kernel.k[fv][c];
                }
            }
            let mut dcol = vec![vec![0i128; x]; n];
            for (j, dj) in dcol.iter_mut().enumerate() {
                for c in 0..x {
                    let mut s = 0i128;
                    for i in 0..n {
                        if mat.w[i][j] != 0 {
                            s += mat.w[i][j] * kernel.k[f[i]][c];
                        }
                    }
                    dj[c] = s;
                }
            }
            // ∞ check: a g with zero edge energy but positive numerator.
            let mut inf_num = 0i128;
            let mut inf_possible = true;
            let mut inf_g = vec![0usize; n];
            for j in 0..n {
                let mut best_c = None;
                for c in 0..x {
                    if dcol[j][c] == 0 && best_c.map_or(true, |bc: usize| ncol[c] > ncol[bc]) {
                        best_c = Some(c);
                    }
                }
                match best_c {
                    Some(c) => {
                        inf_num += ncol[c];
                        inf_g[j] = c;
                    }
                    None => {
                        inf_possible = false;
                        break;
                    }
                }
            }
            if inf_possible && inf_num > 0 {
                let mut cand = Candidate::from_sums(1, 0, mat, fi as u64, 0);
                cand.g_idx = encode(&inf_g, x);
                return cand;
            }
            // Dinkelbach: repeatedly maximize q·N'(g) - p·D'(g), which is
            // separable over the coordinates of g; each round strictly
            // improves the rational λ = p/q over a finite value set, so
            // this terminates at the exact supremum over g.
            let (mut p_cur, mut q_cur) = (1i128, 1i128); // λ = 1 baseline
            let mut best_g = vec![0usize; n];
            let mut best_valid = false;
            loop {
                let mut g_next = vec![0usize; n];
                for j in 0..n {
                    let mut bc = 0usize;
                    let mut bv = i128::MIN;
                    for c in 0..x {
                        // objective q·(den_m·n·...) folded: the constants
                        // mat.den and n multiply N' and D' respectively.
                        let v = q_cur * mat.den * (ncol[c])
                            - p_cur * (n as i128) * dcol[j][c];
                        if v > bv {
                            bv = v;
                            bc = c;
                        }
                    }
                    g_next[j] = bc;
                }
                let mut s_num = 0i128;
                let mut s_den = 0i128;
                for (j, &c) in g_next.iter().enumerate() {
                    s_num += ncol[c];
                    s_den += dcol[j][c];
                }
                let new_p = mat.den * s_num;
                let new_q = n as i128 * s_den;
                if new_q == 0 {
                    // Only reachable with s_num == 0 here (the ∞ case was
                    // handled above): nothing beats λ.
                    break;
                }
                if new_p * q_cur > p_cur * new_q {
                    p_cur = new_p;
                    q_cur = new_q;
                    best_g = g_next;
                    best_valid = true;
                } else {
                    break;
                }
            }
            let mut cand = Candidate {
                num: p_cur,
                den: q_cur,
                f_idx: fi as u64,
                g_idx: 0,
            };
            if best_valid {
                cand.g_idx = encode(&best_g, x);
            } else {
                cand.g_idx = fi as u64; // λ never left the baseline
                cand.num = 1;
                cand.den = 1;
            }
            cand
        },
        Candidate::max,
    );
    Ok(result.into_result(x, n, outer))
}

fn encode(digits: &[usize], x: usize) -> u64 {
    let mut idx = 0u64;
    for &d in digits.iter().rev() {
        idx = idx * x as u64 + d as u64;
    }
    idx
}

// ---------------------------------------------------------------------------
// Search-based lower bounds.
// ---------------------------------------------------------------------------

/// Best Poincaré ratio found by seeded multi-start search; the returned
/// value is a certified lower bound (it is the ratio of the returned
/// witness). Budget is counted in ratio evaluations.
pub fn gamma_plus_search(
    a: &StochasticMatrix,
    kernel: &KernelSpec,
    budget: u64,
    seed: u64,
) -> Result<(f64, Configuration)> {
    kernel.validate()?;
    let n = a.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_cfg = random_configuration(kernel, n, &mut rng);
    let mut best_val = ratio(a, kernel, &best_cfg)?;
    let mut evals = 1u64;

    // Eigenvector-seeded starts for the Euclidean kernel.
    if matches!(kernel, KernelSpec::EuclidSq) && n <= crate::matrix::DENSE_THRESHOLD {
        for (mu, v) in spectral::eigenpairs_dense(a)?.into_iter().skip(1) {
            if evals >= budget.max(1) {
                break;
            }
            let f: Vec<Point> = v.iter().map(|&x| Point::Vector(vec![x])).collect();
            let sgn = if mu < 0.0 { -1.0 } else { 1.0 };
            let g: Vec<Point> = v.iter().map(|&x| Point::Vector(vec![sgn * x])).collect();
            let cfg = Configuration { f, g };
            let val = ratio(a, kernel, &cfg)?;
            evals += 1;
            if val > best_val {
                best_val = val;
                best_cfg = cfg;
            }
        }
    }

    while evals < budget {
        // Local move: perturb one coordinate of one map.
        let mut cfg = best_cfg.clone();
        let on_f: bool = rng.gen();
        let i = rng.gen_range(0..n);
        let target = if on_f { &mut cfg.f[i] } else { &mut cfg.g[i] };
        perturb(kernel, target, &mut rng);
        let val = ratio(a, kernel, &cfg)?;
        evals += 1;
        if val > best_val {
            best_val = val;
            best_cfg = cfg;
        }
    }
    Ok((best_val, best_cfg))
}

fn random_configuration(kernel: &KernelSpec, n: usize, rng: &mut ChaCha8Rng) -> Configuration {
    let mk = |rng: &mut ChaCha8Rng| -> Vec<Point> {
        (0..n)
            .map(|_| match kernel {
                KernelSpec::EuclidSq => Point::Vector(vec![rng.gen_range(-1.0..1.0)]),
                KernelSpec::LpPower { dim, .. } => {
                    Point::Vector((0..*dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
                }
                KernelSpec::FiniteMetric { dist, .. } => {
                    Point::Index(rng.gen_range(0..dist.len()))
                }
                KernelSpec::LogLinf { dim, .. } => Point::Vector(
                    (0..*dim).map(|_| rng.gen_range(-8i64..=8) as f64).collect(),
                ),
            })
            .collect()
    };
    Configuration {
        f: mk(rng),
        g: mk(rng),
    }
}

fn perturb(kernel: &KernelSpec, p: &mut Point, rng: &mut ChaCha8Rng) {
    match (kernel, p) {
        (KernelSpec::FiniteMetric { dist, .. }, Point::Index(i)) => {
            *i = rng.gen_range(0..dist.len());
        }
        (KernelSpec::LogLinf { .. }, Point::Vector(v)) => {
            let c = rng.gen_range(0..v.len());
            v[c] = (v[c] + if rng.gen() { 1.0 } else { -1.0 }).clamp(-64.0, 64.0);
        }
        (_, Point::Vector(v)) => {
            let c = rng.gen_range(0..v.len());
            v[c] += rng.gen_range(-0.5..0.5);
        }
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// Metric Markov cotype.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct CotypeParams {
    pub p: f64,
    pub q: f64,
    pub k_p: f64,
    pub m: u32,
}

impl CotypeParams {
    pub fn validate(&self) -> Result<()> {
        if self.p < 2.0 || self.q <= 1.0 || self.k_p < 1.0 || self.m == 0 {
            return Err(Error::InvalidInput(
                "cotype needs p ≥ 2, q > 1, K_p ≥ 1, m ≥ 1".into(),
            ));
        }
        Ok(())
    }
}

/// The smoothing witness y_i = (1/m) Σ_{s<m} (A^s x)_i, computed by m-1
/// successive applications of A.
pub fn cotype_witness(a: &StochasticMatrix, x: &[Vec<f64>], m: u32) -> Vec<Vec<f64>> {
    let mut acc: Vec<Vec<f64>> = x.to_vec();
    let mut cur: Vec<Vec<f64>> = x.to_vec();
    for _ in 1..m {
        cur = a.apply_pointwise(&cur);
        for (ai, ci) in acc.iter_mut().zip(&cur) {
            for (av, cv) in ai.iter_mut().zip(ci) {
                *av += cv;
            }
        }
    }
    for ai in acc.iter_mut() {
        for av in ai.iter_mut() {
            *av /= m as f64;
        }
    }
    acc
}

/// Outcome of one cotype check.
#[derive(Clone, Debug, Serialize)]
pub struct CotypeCheck {
    pub holds: bool,
    /// Σ ‖x_i-y_i‖^q.
    pub term_displacement: f64,
    /// Scaled edge term: c^q · m^{min(1,q/p)} · ΣΣ a_ij ‖y_i-y_j‖^q.
    pub term_edge: f64,
    /// ΣΣ 𝒜_m(A)_ij ‖x_i-x_j‖^q.
    pub rhs: f64,
    /// rhs - max(lhs terms).
    pub slack: f64,
    /// For q = 2: the combined form
    /// Σ‖x-y‖² + m^{2/p} ΣΣ a_ij‖y-y‖² ≤ (32K_p)²·rhs.
    pub combined_holds: Option<bool>,
    pub combined_slack: Option<f64>,
}

fn diff_norm(a: &[f64], b: &[f64], p: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Checks the explicit cotype inequality for the ℓ_p target on the given
/// points, using the paper-of-record witness y.
pub fn check_cotype(
    a: &StochasticMatrix,
    x: &[Vec<f64>],
    params: &CotypeParams,
) -> Result<CotypeCheck> {
    params.validate()?;
    let n = a.order();
    if x.len() != n {
        return Err(Error::InvalidInput("point list size mismatch".into()));
    }
    let (p, q, k_p, m) = (params.p, params.q, params.k_p, params.m);
    let y = cotype_witness(a, x, m);
    let term_displacement: f64 = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| diff_norm(xi, yi, p).powf(q))
        .sum();
    let edge_raw: f64 = a
        .rows()
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            let y = &y;
            row.iter()
                .map(move |&(j, w)| w * diff_norm(&y[i], &y[j], p).powf(q))
        })
        .sum();
    let c_const = ((1.0 - 1.0 / p) * (1.0 - 1.0 / q)).powf(1.0 - 1.0 / p)
        / (32.0 * 5f64.powf(1.0 - 1.0 / p) * k_p);
    let term_edge = c_const.powf(q) * (m as f64).powf((q / p).min(1.0)) * edge_raw;
    let cesaro = a.cesaro(m)?;
    let rhs: f64 = cesaro
        .rows()
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            let x = &x;
            row.iter()
                .map(move |&(j, w)| w * diff_norm(&x[i], &x[j], p).powf(q))
        })
        .sum();
    let lhs = term_displacement.max(term_edge);
    let slack = rhs - lhs;
    let (combined_holds, combined_slack) = if (q - 2.0).abs() < 1e-12 {
        let lhs2 = term_displacement + (m as f64).powf(2.0 / p) * edge_raw;
        let rhs2 = (32.0 * k_p).powi(2) * rhs;
        (Some(lhs2 <= rhs2 + 1e-9), Some(rhs2 - lhs2))
    } else {
        (None, None)
    };
    Ok(CotypeCheck {
        holds: lhs <= rhs + 1e-9,
        term_displacement,
        term_edge,
        rhs,
        slack,
        combined_holds,
        combined_slack,
    })
}

// ---------------------------------------------------------------------------
// Calculus decay checks.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct DecayCheck {
    pub holds: bool,
    pub gamma_plus: f64,
    pub gamma_plus_cesaro: f64,
    pub bound: f64,
    /// γ₊(𝒜_m) / max{1, γ₊/m^ε} — the decay factor actually achieved.
    pub achieved_ratio: f64,
}

/// Euclid instance of the decay inequality
/// γ₊(𝒜_m(A)) ≤ (45C)^q · max{1, γ₊(A)/m^ε} with q = 2.
pub fn check_calculus_decay_euclid(
    a: &StochasticMatrix,
    m: u32,
    c: f64,
    eps: f64,
) -> Result<DecayCheck> {
    let gp = spectral::gamma_plus_euclid(a)?;
    let ces = a.cesaro(m)?;
    let gpc = spectral::gamma_plus_euclid(&ces)?;
    decay_verdict(gp, gpc, m, c, eps, 2.0)
}

/// Finite-target instance via the exact oracle.
pub fn check_calculus_decay_oracle(
    g: &RegularMultigraph,
    kernel: &ExactKernel,
    m: u32,
    c: f64,
    eps: f64,
    q: f64,
    cap: u64,
) -> Result<DecayCheck> {
    let gp = gamma_plus_bruteforce(g, kernel, cap)?.value.to_f64();
    let ces = g.cesaro(m)?;
    let gpc = gamma_plus_bruteforce(&ces, kernel, cap)?.value.to_f64();
    decay_verdict(gp, gpc, m, c, eps, q)
}

fn decay_verdict(gp: f64, gpc: f64, m: u32, c: f64, eps: f64, q: f64) -> Result<DecayCheck> {
    let decayed = (gp / (m as f64).powf(eps)).max(1.0);
    let bound = (45.0 * c).powf(q) * decayed;
    let holds = if gpc.is_infinite() {
        gp.is_infinite()
    } else {
        gpc <= bound + 1e-9
    };
    Ok(DecayCheck {
        holds,
        gamma_plus: gp,
        gamma_plus_cesaro: gpc,
        bound,
        achieved_ratio: if gpc.is_finite() { gpc / decayed } else { f64::INFINITY },
    })
}

// ---------------------------------------------------------------------------
// Fréchet embedding and the non-decay experiment.
// ---------------------------------------------------------------------------

/// The row embedding x_u = (D(u,0), …, D(u,n-1)); ℓ_∞ distances between
/// rows reproduce D exactly for any metric D.
pub fn frechet_embed(d: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let spec = KernelSpec::FiniteMetric {
        dist: d.to_vec(),
        p: 1.0,
    };
    spec.validate()?;
    Ok(d.to_vec())
}

#[derive(Clone, Debug, Serialize)]
pub struct NondecayReport {
    pub n: usize,
    pub t: u32,
    /// Identity-configuration lower bound for γ₊(A_G, ρ²).
    pub lower_bound_graph: f64,
    /// Same lower bound for 𝒜_t(G).
    pub lower_bound_cesaro: f64,
    pub diameter: usize,
}

/// Evaluates the ρ² Poincaré lower bound (ρ = log(1+‖·‖_∞)) on G and on
/// 𝒜_t(G) via the Fréchet embedding of the shortest-path metric of
/// 𝒜_t(G) and the identity configuration.
pub fn nondecay_experiment(g: &RegularMultigraph, t: u32) -> Result<NondecayReport> {
    if !g.is_connected() {
        return Err(Error::InvalidInput("nondecay experiment needs a connected graph".into()));
    }
    let n = g.vertex_count();
    let ces = g.cesaro(t)?;
    let sp = ces.shortest_path_matrix();
    let dim = n;
    // Fréchet rows of the 𝒜_t(G) metric; the ℓ_∞ distance of rows u,v is
    // exactly sp[u][v], so the kernel matrix is log(1+sp)².
    let embed: Vec<Vec<f64>> = sp
        .iter()
        .map(|row| row.iter().map(|&x| x as f64).collect())
        .collect();
    let mut diameter = 0usize;
    for row in &sp {
        for &x in row {
            if x == usize::MAX {
                return Err(Error::InvalidInput("cesaro support is disconnected".into()));
            }
            diameter = diameter.max(x);
        }
    }
    // kernel values via the embedding (ℓ_∞ of row differences), computed
    // in parallel; spot-agreement with sp is a structural identity.
    let kvals: Vec<Vec<f64>> = par::map_indexed(n, |u| {
        (0..n)
            .map(|v| {
                let linf = embed[u]
                    .iter()
                    .zip(&embed[v])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                (1.0 + linf).ln().powi(2)
            })
            .collect()
    });
    let _ = dim;
    let num: f64 = kvals.iter().flatten().sum::<f64>() / (n * n) as f64;
    let den_for = |m: &StochasticMatrix| -> f64 {
        m.rows()
            .iter()
            .enumerate()
            .flat_map(|(u, row)| {
                let kv = &kvals;
                row.iter().map(move |&(v, w)| w * kv[u][v])
            })
            .sum::<f64>()
            / n as f64
    };
    let den_g = den_for(&g.normalized_adjacency());
    let den_c = den_for(&ces.normalized_adjacency());
    let bound = |den: f64| if den == 0.0 { if num == 0.0 { 1.0 } else { f64::INFINITY } } else { num / den };
    Ok(NondecayReport {
        n,
        t,
        lower_bound_graph: bound(den_g),
        lower_bound_cesaro: bound(den_c),
        diameter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn two_point() -> Vec<Vec<f64>> {
        vec![vec![0.0, 1.0], vec![1.0, 0.0]]
    }

    #[test]
    fn ratio_conventions() {
        let a = RegularMultigraph::cycle(3).unwrap().normalized_adjacency();
        let c = Configuration {
            f: vec![Point::Vector(vec![1.0]); 3],
            g: vec![Point::Vector(vec![1.0]); 3],
        };
        assert_eq!(ratio(&a, &KernelSpec::EuclidSq, &c).unwrap(), 1.0);

        // C₄ with the λ = -1 eigenvector and g = -f: denominator vanishes.
        let a4 = RegularMultigraph::cycle(4).unwrap().normalized_adjacency();
        let v = [1.0, -1.0, 1.0, -1.0];
        let c = Configuration {
            f: v.iter().map(|&x| Point::Vector(vec![x])).collect(),
            g: v.iter().map(|&x| Point::Vector(vec![-x])).collect(),
        };
        assert!(ratio(&a4, &KernelSpec::EuclidSq, &c).unwrap().is_infinite());
    }

    #[test]
    fn eigenvector_extremality_c3() {
        let a = RegularMultigraph::cycle(3).unwrap().normalized_adjacency();
        let v = [1.0, -0.5, -0.5];
        let c = Configuration {
            f: v.iter().map(|&x| Point::Vector(vec![x])).collect(),
            g: v.iter().map(|&x| Point::Vector(vec![-x])).collect(),
        };
        let r = ratio(&a, &KernelSpec::EuclidSq, &c).unwrap();
        assert!((r - 2.0).abs() < 1e-12, "got {r}");
    }

    #[test]
    fn bruteforce_two_point_c3() {
        let g = RegularMultigraph::cycle(3).unwrap();
        let kernel = ExactKernel::from_metric(&two_point(), 1).unwrap();
        let res = gamma_plus_bruteforce(&g, &kernel, 10_000_000).unwrap();
        // Extremal pair: f = 1{v=0}, g = 1{v≠0}; ratio (5/9)/(1/3) = 5/3.
        assert!(!res.value.is_infinite());
        assert_eq!(res.value.finite.as_ref().unwrap(), &BigRational::new(5.into(), 3.into()));
        let resg = gamma_bruteforce(&g, &kernel, 10_000_000).unwrap();
        assert!(resg.value.le(&res.value)); // γ ≤ γ₊
    }

    #[test]
    fn bruteforce_full_vs_hybrid_agree() {
        // Force the hybrid path with a small cap and compare to the full
        // path with a large cap on several graphs and kernels.
        let three_point = vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 2.0],
            vec![1.0, 2.0, 0.0],
        ];
        for seed in 0..4 {
            let g = graph::random_regular(4, 2, seed).unwrap();
            for p in [1u32, 2] {
                for dist in [two_point(), three_point.clone()] {
                    let kernel = ExactKernel::from_metric(&dist, p).unwrap();
                    let full = gamma_plus_bruteforce(&g, &kernel, 10_000_000).unwrap();
                    let hybrid =
                        super::gamma_plus_hybrid(&ScaledMatrix::from_graph(&g), &kernel, 81)
                            .unwrap();
                    assert_eq!(
                        full.value.is_infinite(),
                        hybrid.value.is_infinite(),
                        "seed {seed} p {p}"
                    );
                    if !full.value.is_infinite() {
                        assert_eq!(
                            full.value.finite.as_ref().unwrap(),
                            hybrid.value.finite.as_ref().unwrap(),
                            "seed {seed} p {p}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bruteforce_bipartite_is_infinite() {
        let c4 = RegularMultigraph::cycle(4).unwrap();
        let kernel = ExactKernel::from_metric(&two_point(), 1).unwrap();
        let res = gamma_plus_bruteforce(&c4, &kernel, 10_000_000).unwrap();
        assert!(res.value.is_infinite());
    }

    #[test]
    fn bruteforce_matches_euclid_on_two_point() {
        // For a 2-point metric with p=2 the kernel is a scaled Euclidean
        // kernel on {0,1} ⊂ ℝ, so γ₊(2-point) ≤ γ₊-Euclid and the search
        // can approach it.
        let g = graph::random_regular_connected(5, 4, 11, 50).unwrap();
        let kernel = ExactKernel::from_metric(&two_point(), 2).unwrap();
        let res = gamma_plus_bruteforce(&g, &kernel, 10_000_000).unwrap();
        let euclid = spectral::gamma_plus_euclid(&g.normalized_adjacency()).unwrap();
        assert!(res.value.to_f64() <= euclid + 1e-9);
    }

    #[test]
    fn search_matches_oracle_on_small_targets() {
        let g = RegularMultigraph::cycle(3).unwrap();
        let a = g.normalized_adjacency();
        let kernel = KernelSpec::FiniteMetric {
            dist: two_point(),
            p: 1.0,
        };
        let (val, cfg) = gamma_plus_search(&a, &kernel, 3000, 7).unwrap();
        let exact = gamma_plus_bruteforce(
            &g,
            &ExactKernel::from_metric(&two_point(), 1).unwrap(),
            10_000_000,
        )
        .unwrap();
        assert!(val <= exact.value.to_f64() + 1e-12);
        assert!((val - exact.value.to_f64()).abs() < 1e-9, "search found {val}");
        // The returned value is the ratio of the returned witness.
        let again = ratio(&a, &kernel, &cfg).unwrap();
        assert!((again - val).abs() < 1e-12);
    }

    #[test]
    fn search_euclid_hits_spectral_value() {
        for seed in 0..3 {
            let g = graph::random_regular_connected(6, 4, seed, 50).unwrap();
            let a = g.normalized_adjacency();
            let (val, _) = gamma_plus_search(&a, &KernelSpec::EuclidSq, 50, seed).unwrap();
            let exact = spectral::gamma_plus_euclid(&a).unwrap();
            assert!(val <= exact + 1e-9);
            assert!((val - exact).abs() < 1e-6, "seed {seed}: {val} vs {exact}");
        }
    }

    #[test]
    fn cotype_witness_cases() {
        let a = RegularMultigraph::cycle(3).unwrap().normalized_adjacency();
        let x = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 2.0]];
        // m = 1 → y = x.
        assert_eq!(cotype_witness(&a, &x, 1), x);
        // A = J/n, m = 2 → y_i = (x_i + mean)/2.
        let j = RegularMultigraph::complete_with_loops(3)
            .unwrap()
            .normalized_adjacency();
        let y = cotype_witness(&j, &x, 2);
        let mean = [1.0, 1.0];
        for (yi, xi) in y.iter().zip(&x) {
            for k in 0..2 {
                assert!((yi[k] - (xi[k] + mean[k]) / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cotype_holds_on_random_instances() {
        let params = CotypeParams {
            p: 2.0,
            q: 2.0,
            k_p: 1.0,
            m: 3,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..20 {
            let g = graph::random_regular(10, 4, seed).unwrap();
            let a = g.normalized_adjacency();
            let x: Vec<Vec<f64>> = (0..10)
                .map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let chk = check_cotype(&a, &x, &params).unwrap();
            assert!(chk.holds, "seed {seed}: slack {}", chk.slack);
            assert_eq!(chk.combined_holds, Some(true));
        }
    }

    #[test]
    fn decay_euclid_holds() {
        for seed in 0..10 {
            let g = graph::random_regular(12, 4, seed).unwrap();
            let a = g.normalized_adjacency();
            // m = 1 is vacuous: 𝒜₁ = I has no spectral gap.
            for m in [2u32, 5, 16] {
                let chk = check_calculus_decay_euclid(&a, m, 32.0, 1.0).unwrap();
                assert!(chk.holds, "seed {seed} m {m}");
            }
        }
    }

    #[test]
    fn frechet_rows_reproduce_metric() {
        let d = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        let e = frechet_embed(&d).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let linf = e[i]
                    .iter()
                    .zip(&e[j])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                assert!((linf - d[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nondecay_runs_on_c3() {
        let g = RegularMultigraph::cycle(3).unwrap();
        let rep = nondecay_experiment(&g, 2).unwrap();
        assert!(rep.lower_bound_graph.is_finite());
        assert!(rep.lower_bound_cesaro.is_finite());
        assert!(rep.lower_bound_graph > 0.0);
    }

}
