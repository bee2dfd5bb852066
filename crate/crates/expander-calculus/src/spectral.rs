//! Euclidean spectral quantities: eigenvalues of the symmetric stochastic
//! matrix, λ₂ and λ(A) = max_{i≥2} |λ_i|, and the closed-form Euclidean
//! Poincaré constants γ = 1/(1-λ₂), γ₊ = 1/(1-λ(A)).
//!
//! Small matrices are solved densely (nalgebra); above the dense threshold
//! a deflated power iteration runs on the mean-zero subspace, with the
//! residual ‖Av - ρv‖₂ reported so callers can see what is certified.

use crate::error::{Error, Result};
use crate::matrix::{StochasticMatrix, DENSE_THRESHOLD};
use serde::Serialize;

/// Gap below which γ is reported as ∞ rather than a huge float.
pub const GAP_EPS: f64 = 1e-9;

/// Residual tolerance for the iterative path.
pub const ITER_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

/// Spectral summary of one matrix (or graph).
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    pub lambda2: f64,
    pub lambda_abs: f64,
    /// 1/(1-λ₂); f64::INFINITY when the gap is below 1e-9.
    pub gamma_euclid: f64,
    /// 1/(1-λ(A)); f64::INFINITY when the absolute gap is below 1e-9.
    pub gamma_plus_euclid: f64,
    pub method: Method,
    pub residual: f64,
}

/// Full real spectrum of the symmetric stochastic matrix, descending.
pub fn eigenvalues_dense(a: &StochasticMatrix) -> Result<Vec<f64>> {
    let d = a.to_dense()?;
    // Symmetrize to wash out representation rounding before the solver.
    let sym = (&d + d.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(vals)
}

/// Eigenvalues plus eigenvectors (columns), descending by eigenvalue.
pub fn eigenpairs_dense(a: &StochasticMatrix) -> Result<Vec<(f64, Vec<f64>)>> {
    let d = a.to_dense()?;
    let sym = (&d + d.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<f64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, eig.eigenvectors.column(i).iter().copied().collect()))
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    Ok(pairs)
}

fn project_out_ones(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn deterministic_start(n: usize) -> Vec<f64> {
    // Deterministic quasi-random start so runs are reproducible.
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let x = (i as u64).wrapping_mul(0x9e3779b97f4a7c15) >> 11;
            (x as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect();
    project_out_ones(&mut v);
    v
}

/// Both spectral extremes of A restricted to the mean-zero subspace,
/// computed by Lanczos with full reorthogonalization. Returns
/// (θ_min, θ_max, residual) where the residual is the explicit certificate
/// max(‖Ay - θy‖₂) over the two reconstructed extreme Ritz vectors.
/// One extreme eigenvalue on the mean-zero subspace by restarted Lanczos:
/// bounded-length fully reorthogonalized sweeps, each restarted from the
/// best Ritz vector of the previous sweep. Memory stays bounded by the
/// sweep length while the overall iteration budget follows 10·n·log n.
fn lanczos_extreme(a: &StochasticMatrix, largest: bool) -> Result<(f64, f64)> {
    let n = a.order();
    if n == 1 {
        // Mean-zero subspace is empty; the gap is vacuous.
        return Ok((0.0, 0.0));
    }
    // Sweep length: short enough that full reorthogonalization stays cheap
    // on the largest pipeline graphs, long enough for Krylov acceleration.
    let mem_cap = ((2.0e8 / 8.0 / n as f64) as usize).max(16);
    let sweep_len = (n - 1).min(mem_cap).min(96);
    let budget = (10.0 * (n as f64) * (n as f64).ln()).ceil() as usize;

    let mut start = deterministic_start(n);
    let mut used = 0usize;
    let mut last_residual = f64::INFINITY;
    while used < budget {
        let nv = norm(&start);
        if nv < 1e-300 {
            break;
        }
        for x in start.iter_mut() {
            *x /= nv;
        }
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut exhausted = false;
        for _ in 0..sweep_len.min(budget - used) {
            let vj = basis.last().unwrap().clone();
            let mut w = a.matvec(&vj);
            used += 1;
            let alpha = vj.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>();
            alphas.push(alpha);
            // Full reorthogonalization (twice against the sweep basis),
            // plus the exact constant-vector deflation.
            project_out_ones(&mut w);
            for _ in 0..2 {
                for u in &basis {
                    let c: f64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
                    for (wi, ui) in w.iter_mut().zip(u) {
                        *wi -= c * ui;
                    }
                }
            }
            let beta = norm(&w);
            if beta < 1e-13 {
                // Krylov space exhausted: the Ritz value is exact on the
                // invariant subspace reached from this start.
                exhausted = true;
                break;
            }
            betas.push(beta);
            for wi in w.iter_mut() {
                *wi /= beta;
            }
            basis.push(w);
        }
        match ritz_extreme(a, &basis, &alphas, &betas, largest) {
            Some((theta, y, res)) => {
                last_residual = res;
                if res <= ITER_TOL || exhausted {
                    return Ok((theta, res));
                }
                start = y;
            }
            None => break,
        }
    }
    Err(Error::NoConvergence {
        iterations: used,
        residual: last_residual,
    })
}

/// Extreme Ritz value of the current tridiagonal with its Ritz vector and
/// the explicit residual certificate ‖Ay − θy‖.
fn ritz_extreme(
    a: &StochasticMatrix,
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
    largest: bool,
) -> Option<(f64, Vec<f64>, f64)> {
    let m = alphas.len();
    if m == 0 {
        return None;
    }
    let mut t = nalgebra::DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut idx = 0;
    for i in 0..m {
        let better = if largest {
            eig.eigenvalues[i] > eig.eigenvalues[idx]
        } else {
            eig.eigenvalues[i] < eig.eigenvalues[idx]
        };
        if better {
            idx = i;
        }
    }
    let theta = eig.eigenvalues[idx];
    // y = Σ_j s_j v_j, then the explicit certificate ‖Ay - θy‖.
    let n = basis[0].len();
    let mut y = vec![0.0f64; n];
    for (j, u) in basis.iter().enumerate().take(m) {
        let s = eig.eigenvectors[(j, idx)];
        for (yi, ui) in y.iter_mut().zip(u) {
            *yi += s * ui;
        }
    }
    let ny = norm(&y);
    if ny < 1e-300 {
        return None;
    }
    for yi in y.iter_mut() {
        *yi /= ny;
    }
    let mut ay = a.matvec(&y);
    project_out_ones(&mut ay);
    let res = ay
        .iter()
        .zip(&y)
        .map(|(ai, yi)| (ai - theta * yi).powi(2))
        .sum::<f64>()
        .sqrt();
    Some((theta, y, res))
}

/// λ₂ via the Lanczos path; returns (λ₂, certified residual).
pub fn lambda2_iterative(a: &StochasticMatrix) -> Result<(f64, f64)> {
    lanczos_extreme(a, true)
}

/// λ(A) via the Lanczos path; returns (λ_abs, certified residual).
pub fn lambda_abs_iterative(a: &StochasticMatrix) -> Result<(f64, f64)> {
    let (theta_max, res_max) = lanczos_extreme(a, true)?;
    let (theta_min, res_min) = lanczos_extreme(a, false)?;
    Ok((theta_min.abs().max(theta_max.abs()), res_max.max(res_min)))
}

/// λ₂(A): second-largest eigenvalue.
pub fn lambda2(a: &StochasticMatrix) -> Result<f64> {
    if a.order() <= DENSE_THRESHOLD {
        let vals = eigenvalues_dense(a)?;
        Ok(if vals.len() > 1 { vals[1] } else { vals[0] })
    } else {
        Ok(lambda2_iterative(a)?.0)
    }
}

/// λ(A) = max_{i ≥ 2} |λ_i|.
pub fn lambda_abs(a: &StochasticMatrix) -> Result<f64> {
    if a.order() <= DENSE_THRESHOLD {
        let vals = eigenvalues_dense(a)?;
        Ok(vals
            .iter()
            .skip(1)
            .map(|v| v.abs())
            .fold(0.0f64, f64::max))
    } else {
        Ok(lambda_abs_iterative(a)?.0)
    }
}

/// γ-Euclid = 1/(1-λ₂), ∞ when the gap is below 1e-9.
pub fn gamma_from_lambda(lambda: f64) -> f64 {
    if 1.0 - lambda < GAP_EPS {
        f64::INFINITY
    } else {
        1.0 / (1.0 - lambda)
    }
}

pub fn gamma_euclid(a: &StochasticMatrix) -> Result<f64> {
    Ok(gamma_from_lambda(lambda2(a)?))
}

pub fn gamma_plus_euclid(a: &StochasticMatrix) -> Result<f64> {
    Ok(gamma_from_lambda(lambda_abs(a)?))
}

/// Full spectral report for a matrix; `degree` is attached when the matrix
/// came from a graph.
pub fn report(a: &StochasticMatrix, degree: Option<u64>) -> Result<SpectralReport> {
    let n = a.order();
    let (lambda2, lambda_abs, method, residual) = if n <= DENSE_THRESHOLD {
        let vals = eigenvalues_dense(a)?;
        let l2 = if vals.len() > 1 { vals[1] } else { vals[0] };
        let la = vals.iter().skip(1).map(|v| v.abs()).fold(0.0f64, f64::max);
        (l2, la, Method::Dense, 0.0)
    } else {
        let (l2, r2) = lambda2_iterative(a)?;
        let (la, ra) = lambda_abs_iterative(a)?;
        (l2, la, Method::Iterative, r2.max(ra))
    };
    Ok(SpectralReport {
        order: n,
        degree,
        lambda2,
        lambda_abs,
        gamma_euclid: gamma_from_lambda(lambda2),
        gamma_plus_euclid: gamma_from_lambda(lambda_abs),
        method,
        residual,
    })
}

/// (1 + 4/(1-λ))^p: Poincaré bound from the operator norm λ = λ_X^(p)(A).
pub fn bound_norm_to_poincare(lambda: f64, p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&lambda) || p < 1.0 {
        return Err(Error::InvalidInput(format!(
            "need 0 ≤ λ < 1 and p ≥ 1, got λ={lambda}, p={p}"
        )));
    }
    Ok((1.0 + 4.0 / (1.0 - lambda)).powf(p))
}

/// (1 - 1/((2^{p-1}-1)·K_p^p·γ₊))^{1/p}: operator-norm bound from γ₊ in a
/// p-convex space with constant K_p.
pub fn bound_poincare_to_norm(gamma_plus: f64, p: f64, k_p: f64) -> Result<f64> {
    if gamma_plus < 1.0 || p < 2.0 || k_p < 1.0 {
        return Err(Error::InvalidInput(format!(
            "need γ₊ ≥ 1, p ≥ 2, K_p ≥ 1, got γ₊={gamma_plus}, p={p}, K={k_p}"
        )));
    }
    if gamma_plus.is_infinite() {
        return Ok(1.0);
    }
    Ok((1.0 - 1.0 / (((2f64).powf(p - 1.0) - 1.0) * k_p.powf(p) * gamma_plus)).powf(1.0 / p))
}

/// (4K_p)^{p²}·max{1, (γ₊/t)^p}: γ₊ decay under matrix powers in a
/// p-convex space.
pub fn bound_power_decay(gamma_plus: f64, t: u32, p: f64, k_p: f64) -> Result<f64> {
    if gamma_plus < 1.0 || t == 0 || p < 2.0 || k_p < 1.0 {
        return Err(Error::InvalidInput("domain violation in power-decay bound".into()));
    }
    Ok((4.0 * k_p).powf(p * p) * (gamma_plus / t as f64).powf(p).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{random_regular, RegularMultigraph};

    #[test]
    fn cycle_spectra() {
        let a3 = RegularMultigraph::cycle(3).unwrap().normalized_adjacency();
        let vals = eigenvalues_dense(&a3).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-9);
        assert!((vals[1] + 0.5).abs() < 1e-12);
        assert!((vals[2] + 0.5).abs() < 1e-12);
        assert!((lambda_abs(&a3).unwrap() - 0.5).abs() < 1e-12);
        assert!((lambda2(&a3).unwrap() + 0.5).abs() < 1e-12);
        assert!((gamma_euclid(&a3).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((gamma_plus_euclid(&a3).unwrap() - 2.0).abs() < 1e-12);

        let a4 = RegularMultigraph::cycle(4).unwrap().normalized_adjacency();
        let vals = eigenvalues_dense(&a4).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-9);
        assert!(vals[1].abs() < 1e-12);
        assert!(vals[2].abs() < 1e-12);
        assert!((vals[3] + 1.0).abs() < 1e-12);
        assert!((lambda_abs(&a4).unwrap() - 1.0).abs() < 1e-12);
        assert!(gamma_plus_euclid(&a4).unwrap().is_infinite());
    }

    #[test]
    fn uniform_matrix_has_zero_gap_complement() {
        let a = RegularMultigraph::complete_with_loops(5)
            .unwrap()
            .normalized_adjacency();
        assert!(lambda_abs(&a).unwrap().abs() < 1e-12);
        assert!((gamma_euclid(&a).unwrap() - 1.0).abs() < 1e-12);
        assert!((gamma_plus_euclid(&a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_vs_iterative_agree() {
        for seed in 0..5 {
            let g = random_regular(40, 4, seed).unwrap();
            let a = g.normalized_adjacency();
            let dense = lambda_abs(&a).unwrap();
            let (iter, res) = lambda_abs_iterative(&a).unwrap();
            assert!(res <= ITER_TOL);
            assert!((dense - iter).abs() < 1e-7, "dense {dense} vs iter {iter}");
            let dense2 = lambda2(&a).unwrap();
            let (iter2, _) = lambda2_iterative(&a).unwrap();
            assert!((dense2 - iter2).abs() < 1e-7);
        }
    }

    #[test]
    fn bound_arithmetic() {
        assert!((bound_norm_to_poincare(0.5, 2.0).unwrap() - 81.0).abs() < 1e-12);
        assert!((bound_norm_to_poincare(0.0, 1.0).unwrap() - 5.0).abs() < 1e-12);
        assert!(bound_norm_to_poincare(1.0, 2.0).is_err());

        let v = bound_poincare_to_norm(2.0, 2.0, 1.0).unwrap();
        assert!((v - (0.5f64).sqrt()).abs() < 1e-12);
        assert!((bound_poincare_to_norm(f64::INFINITY, 2.0, 1.0).unwrap() - 1.0).abs() < 1e-12);

        assert!((bound_power_decay(10.0, 20, 2.0, 1.0).unwrap() - 256.0).abs() < 1e-9);
        assert!((bound_power_decay(100.0, 10, 2.0, 1.0).unwrap() - 25600.0).abs() < 1e-9);
    }

    #[test]
    fn report_invariants() {
        for seed in 0..10 {
            let g = random_regular(30, 4, seed).unwrap();
            let r = report(&g.normalized_adjacency(), Some(4)).unwrap();
            assert!(r.lambda_abs >= r.lambda2.abs() - 1e-9);
            assert!(r.lambda_abs <= 1.0 + 1e-9 && r.lambda2 >= -1.0 - 1e-9);
            assert!(r.gamma_plus_euclid >= r.gamma_euclid - 1e-9);
        }
    }

    #[test]
    fn power_decay_euclid_consistency() {
        // γ₊(A^t) ≤ (4K)^{p²}·max{1,(γ₊/t)^p} for the Euclid case p=2, K=1.
        for seed in 0..10 {
            let g = crate::graph::random_regular_connected(16, 4, seed, 50).unwrap();
            let a = g.normalized_adjacency();
            let gp = gamma_plus_euclid(&a).unwrap();
            for t in [1u32, 2, 4, 8] {
                let at = g.power(t).unwrap().normalized_adjacency();
                let gpt = gamma_plus_euclid(&at).unwrap();
                let bound = bound_power_decay(gp.max(1.0), t, 2.0, 1.0).unwrap();
                assert!(gpt <= bound + 1e-9, "seed {seed} t {t}: {gpt} > {bound}");
            }
        }
    }
}
