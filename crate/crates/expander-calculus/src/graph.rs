//! Regular multigraphs with exact integer edge multiplicities.
//!
//! A graph here is a symmetric multiplicity function E(u,v) on a finite
//! vertex set, with self loops allowed; a self loop contributes 1 (not 2)
//! to the degree, and every vertex has the same degree d = Σ_v E(u,v).
//! All multiplicities are u64 and every arithmetic step that could wrap is
//! checked: operations fail loudly instead of silently overflowing, since
//! Cesàro averages and graph powers grow degrees geometrically.

use crate::error::{Error, Result};
use crate::matrix::StochasticMatrix;
use crate::par;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// A d-regular multigraph on n vertices with u64 edge multiplicities.
///
/// Stored both as a sorted sparse list of (u, v, mult) with u ≤ v (the
/// canonical serialization order) and as a per-vertex adjacency table for
/// fast neighbor scans. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularMultigraph {
    n: usize,
    degree: u64,
    /// Sorted (u, v, mult) with u ≤ v and mult > 0.
    edges: Vec<(usize, usize, u64)>,
    /// adj[u] = sorted list of (v, E(u,v)), loops included once.
    adj: Vec<Vec<(usize, u64)>>,
}

impl RegularMultigraph {
    /// Builds and validates a graph from (u, v, multiplicity) entries.
    ///
    /// Entries are symmetrized: (u, v, m) and (v, u, m) describe the same
    /// edge bundle, and duplicate entries for the same pair accumulate.
    pub fn build(n: usize, entries: &[(usize, usize, u64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("vertex count must be positive".into()));
        }
        let mut mult: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for &(u, v, m) in entries {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if m == 0 {
                return Err(Error::InvalidInput("zero multiplicity entry".into()));
            }
            let key = (u.min(v), u.max(v));
            let slot = mult.entry(key).or_insert(0);
            *slot = slot.checked_add(m).ok_or(Error::Overflow("edge multiplicity"))?;
        }
        let edges: Vec<(usize, usize, u64)> =
            mult.into_iter().map(|((u, v), m)| (u, v, m)).collect();
        Self::from_sorted_edges(n, edges)
    }

    /// Builds from an already-deduplicated upper-triangular edge list.
    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<(usize, usize, u64)>) -> Result<Self> {
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for &(u, v, m) in &edges {
            debug_assert!(u <= v && m > 0);
            adj[u].push((v, m));
            if u != v {
                adj[v].push((u, m));
            }
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        // Regularity check: every row must sum to the same degree.
        let mut degree = 0u64;
        for (u, row) in adj.iter().enumerate() {
            let mut sum = 0u64;
            for &(_, m) in row {
                sum = sum.checked_add(m).ok_or(Error::Overflow("vertex degree"))?;
            }
            if u == 0 {
                degree = sum;
            } else if sum != degree {
                return Err(Error::NonRegular {
                    vertex: u,
                    found: sum,
                    expected: degree,
                });
            }
        }
        if degree == 0 {
            return Err(Error::InvalidInput("graph has degree 0".into()));
        }
        Ok(Self { n, degree, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Sorted (u, v, mult) entries with u ≤ v.
    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// Sorted neighbor list of `u` as (v, E(u,v)), loops included once.
    pub fn neighbors(&self, u: usize) -> &[(usize, u64)] {
        &self.adj[u]
    }

    /// E(u,v).
    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.adj[u][i].1)
            .unwrap_or(0)
    }

    /// Dense integer multiplicity matrix (small graphs only).
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; self.n]; self.n];
        for &(u, v, w) in &self.edges {
            m[u][v] = w;
            m[v][u] = w;
        }
        m
    }

    /// The normalized adjacency matrix A_G with entries E(u,v)/d.
    pub fn normalized_adjacency(&self) -> StochasticMatrix {
        let d = self.degree as f64;
        let rows = self
            .adj
            .iter()
            .map(|row| row.iter().map(|&(v, m)| (v, m as f64 / d)).collect())
            .collect();
        StochasticMatrix::from_rows(self.n, rows)
    }

    /// The cycle C_n (2-regular), n ≥ 3.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("cycle needs n ≥ 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1)).collect();
        Self::build(n, &edges)
    }

    /// The cycle with one self loop per vertex, C_n° (3-regular), n ≥ 1.
    ///
    /// Degenerate n: C_1° is one vertex with 3 loops, C_2° a doubled edge
    /// plus one loop per endpoint, so the output is always 3-regular.
    pub fn cycle_with_loops(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("cycle_with_loops needs n ≥ 1".into()));
        }
        let mut edges: Vec<(usize, usize, u64)> = Vec::new();
        match n {
            1 => edges.push((0, 0, 3)),
            2 => {
                edges.push((0, 1, 2));
                edges.push((0, 0, 1));
                edges.push((1, 1, 1));
            }
            _ => {
                for i in 0..n {
                    edges.push((i, (i + 1) % n, 1));
                    edges.push((i, i, 1));
                }
            }
        }
        Self::build(n, &edges)
    }

    /// Complete graph with loops: E(u,v) = 1 for all u,v (degree n).
    pub fn complete_with_loops(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u..n {
                edges.push((u, v, 1));
            }
        }
        Self::build(n, &edges)
    }

    /// One self loop per vertex; the identity as a 1-regular graph.
    pub fn identity(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|i| (i, i, 1)).collect();
        Self::build(n, &edges)
    }

    /// Row `u` of M^t where M is the integer multiplicity matrix, computed
    /// by t sparse vector-matrix products with overflow checks.
    fn walk_row(&self, u: usize, t: u32) -> Result<Vec<u64>> {
        let mut cur = vec![0u64; self.n];
        cur[u] = 1;
        for _ in 0..t {
            let mut next = vec![0u64; self.n];
            for (w, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &(v, m) in &self.adj[w] {
                    let add = c.checked_mul(m).ok_or(Error::Overflow("walk count"))?;
                    next[v] = next[v].checked_add(add).ok_or(Error::Overflow("walk count"))?;
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// The t-th power G^t: one edge per length-t walk; degree d^t.
    pub fn power(&self, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidInput("graph power needs t ≥ 1".into()));
        }
        // Degree sanity before doing any work.
        let mut d = 1u64;
        for _ in 0..t {
            d = d.checked_mul(self.degree).ok_or(Error::Overflow("degree d^t"))?;
        }
        let rows = par::try_map_indexed(self.n, |u| self.walk_row(u, t))?;
        let mut edges = Vec::new();
        for (u, row) in rows.iter().enumerate() {
            for (v, &m) in row.iter().enumerate() {
                if v >= u && m > 0 {
                    edges.push((u, v, m));
                }
            }
        }
        Self::from_sorted_edges(self.n, edges)
    }

    /// The Cesàro graph 𝒜_m(G): d^{m-1-t} parallel edges for every
    /// length-t walk, t = 0..m-1; degree m·d^{m-1}, and its normalized
    /// adjacency is exactly (1/m) Σ_{t<m} A_G^t.
    pub fn cesaro(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("cesaro needs m ≥ 1".into()));
        }
        // New degree m·d^{m-1}; fail early on overflow.
        let mut dm1 = 1u64;
        for _ in 0..m - 1 {
            dm1 = dm1.checked_mul(self.degree).ok_or(Error::Overflow("degree d^{m-1}"))?;
        }
        (m as u64).checked_mul(dm1).ok_or(Error::Overflow("degree m·d^{m-1}"))?;
        let rows: Vec<Vec<u64>> = par::try_map_indexed(self.n, |u| -> Result<Vec<u64>> {
            let mut acc = vec![0u64; self.n];
            let mut cur = vec![0u64; self.n];
            cur[u] = 1;
            // scale for walk length t is d^{m-1-t}
            let mut scale = dm1;
            for t in 0..m {
                for (v, &c) in cur.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let add = c.checked_mul(scale).ok_or(Error::Overflow("cesaro mult"))?;
                    acc[v] = acc[v].checked_add(add).ok_or(Error::Overflow("cesaro mult"))?;
                }
                if t + 1 < m {
                    scale /= self.degree;
                    let mut next = vec![0u64; self.n];
                    for (w, &c) in cur.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for &(v, mm) in &self.adj[w] {
                            let add = c.checked_mul(mm).ok_or(Error::Overflow("walk count"))?;
                            next[v] =
                                next[v].checked_add(add).ok_or(Error::Overflow("walk count"))?;
                        }
                    }
                    cur = next;
                }
            }
            Ok(acc)
        })?;
        let mut edges = Vec::new();
        for (u, row) in rows.iter().enumerate() {
            for (v, &m) in row.iter().enumerate() {
                if v >= u && m > 0 {
                    edges.push((u, v, m));
                }
            }
        }
        Self::from_sorted_edges(self.n, edges)
    }

    /// The D-edge completion 𝒞_D(G): with D = m·d + r (0 ≤ r < d), every
    /// edge is duplicated m times and r self loops are added per vertex.
    pub fn edge_completion(&self, target: u64) -> Result<Self> {
        let d = self.degree;
        if target < d {
            return Err(Error::InvalidInput(format!(
                "completion target {target} below degree {d}"
            )));
        }
        let m = target / d;
        let r = target % d;
        let mut edges = Vec::with_capacity(self.edges.len() + self.n);
        let mut loops = vec![0u64; self.n];
        for &(u, v, w) in &self.edges {
            let scaled = w.checked_mul(m).ok_or(Error::Overflow("completion mult"))?;
            if u == v {
                loops[u] = loops[u].checked_add(scaled).ok_or(Error::Overflow("completion"))?;
            } else {
                edges.push((u, v, scaled));
            }
        }
        if r > 0 {
            for u in 0..self.n {
                loops[u] = loops[u].checked_add(r).ok_or(Error::Overflow("completion"))?;
            }
        }
        for (u, &w) in loops.iter().enumerate() {
            if w > 0 {
                edges.push((u, u, w));
            }
        }
        edges.sort_unstable();
        Self::from_sorted_edges(self.n, edges)
    }

    /// The bipartite double cover as a graph on 2n vertices: vertex u and
    /// its twin u+n, with E'(u, v+n) = E(u,v) and no edges within a side.
    pub fn bipartite_double(&self) -> Result<Self> {
        let n = self.n;
        let mut edges = Vec::with_capacity(2 * self.edges.len());
        for &(u, v, m) in &self.edges {
            if u == v {
                edges.push((u, u + n, m));
            } else {
                edges.push((u, v + n, m));
                edges.push((v, u + n, m));
            }
        }
        edges.sort_unstable();
        Self::from_sorted_edges(2 * n, edges)
    }

    /// Collapses a d-regular bipartite graph on V ∪ W (first half / second
    /// half, |V| = |W| = n) into a 2d-regular graph on V:
    /// F(u,v) = E(u, σ(v)) + E(σ(u), v), with σ a bijection V → W given as
    /// `sigma[i]` ∈ 0..n meaning vertex n + sigma[i]. `None` uses the index
    /// shift i ↦ i + n.
    pub fn collapse_bipartite(&self, sigma: Option<&[usize]>) -> Result<Self> {
        let half = self.bipartite_half()?;
        let sigma = resolve_bijection(sigma, half)?;
        let mut edges = Vec::new();
        for u in 0..half {
            for v in u..half {
                let m = self
                    .multiplicity(u, half + sigma[v])
                    .checked_add(self.multiplicity(half + sigma[u], v))
                    .ok_or(Error::Overflow("collapse"))?;
                if m > 0 {
                    edges.push((u, v, m));
                }
            }
        }
        Self::from_sorted_edges(half, edges)
    }

    /// Validates the (first half, second half) bipartition and returns n.
    fn bipartite_half(&self) -> Result<usize> {
        if self.n % 2 != 0 {
            return Err(Error::InvalidInput("odd vertex count".into()));
        }
        let half = self.n / 2;
        for &(u, v, _) in &self.edges {
            if (u < half) == (v < half) {
                return Err(Error::InvalidInput(format!(
                    "not bipartite across the half split: edge ({u},{v})"
                )));
            }
        }
        Ok(half)
    }

    /// Halves the vertex count of a d-regular graph on 2n vertices at the
    /// cost of quadrupling the degree: builds the intermediate 2d-regular
    /// bipartite graph B(x,y) = E(x,y) + E(x,σ⁻¹(y)) + d·1{y=σ(x)} on
    /// V₁ ∪ V₂ (first/second half, σ: V₁ → V₂) and collapses it along σ.
    pub fn half_size(&self, sigma: Option<&[usize]>) -> Result<Self> {
        if self.n % 2 != 0 {
            return Err(Error::InvalidInput("odd vertex count".into()));
        }
        let half = self.n / 2;
        let d = self.degree;
        let sigma = resolve_bijection(sigma, half)?;
        let mut sigma_inv = vec![usize::MAX; half];
        for (i, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = i;
        }
        let mut edges = Vec::new();
        for x in 0..half {
            for y in 0..half {
                // y here indexes V₂, i.e. vertex half + y of self.
                let mut m = self.multiplicity(x, half + y);
                m = m
                    .checked_add(self.multiplicity(x, sigma_inv[y]))
                    .ok_or(Error::Overflow("half_size"))?;
                if y == sigma[x] {
                    m = m.checked_add(d).ok_or(Error::Overflow("half_size"))?;
                }
                if m > 0 {
                    edges.push((x, half + y, m));
                }
            }
        }
        edges.sort_unstable();
        let bipartite = Self::from_sorted_edges(self.n, edges)?;
        debug_assert_eq!(bipartite.degree(), 2 * d);
        bipartite.collapse_bipartite(Some(&sigma))
    }

    /// Connectivity via union-find over the edge support.
    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.n;
        for &(u, v, _) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                components -= 1;
            }
        }
        components == 1
    }

    /// Bipartiteness via BFS 2-coloring (self loops make a graph
    /// non-bipartite).
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for &(v, _) in &self.adj[u] {
                    if v == u {
                        return false;
                    }
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Shortest-path distances from every vertex over the edge support
    /// (unit edge lengths); usize::MAX marks unreachable pairs.
    pub fn shortest_path_matrix(&self) -> Vec<Vec<usize>> {
        par::map_indexed(self.n, |s| {
            let mut dist = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut frontier = vec![s];
            let mut next = Vec::new();
            let mut level = 0usize;
            while !frontier.is_empty() {
                level += 1;
                for &u in &frontier {
                    for &(v, _) in &self.adj[u] {
                        if dist[v] == usize::MAX {
                            dist[v] = level;
                            next.push(v);
                        }
                    }
                }
                frontier.clear();
                std::mem::swap(&mut frontier, &mut next);
            }
            dist
        })
    }
}

fn resolve_bijection(sigma: Option<&[usize]>, half: usize) -> Result<Vec<usize>> {
    let sigma: Vec<usize> = match sigma {
        Some(s) => s.to_vec(),
        None => (0..half).collect(),
    };
    if sigma.len() != half {
        return Err(Error::InvalidInput("bijection has wrong length".into()));
    }
    let mut seen = vec![false; half];
    for &s in &sigma {
        if s >= half || seen[s] {
            return Err(Error::InvalidInput("not a bijection".into()));
        }
        seen[s] = true;
    }
    Ok(sigma)
}

/// The trivial Poincaré upper bounds for a d-regular connected graph on n
/// vertices against a kernel that is a κ-quasi-metric power:
/// γ ≤ 2^{κ-1}·d·n^{κ+1} and γ₊ ≤ 2^{2κ}·d·n^{κ+1}.
pub fn trivial_poincare_bounds(n: u64, d: u64, kappa: f64) -> (f64, f64) {
    let base = d as f64 * (n as f64).powf(kappa + 1.0);
    (2f64.powf(kappa - 1.0) * base, 2f64.powf(2.0 * kappa) * base)
}

/// Seeded random d-regular multigraph on n vertices via the configuration
/// model: n·d stubs are paired uniformly; a pair inside one vertex becomes
/// a double self loop (2 loops = 2 stubs worth of degree). Requires n·d
/// even.
pub fn random_regular(n: usize, d: u64, seed: u64) -> Result<RegularMultigraph> {
    let stubs_total = (n as u64).checked_mul(d).ok_or(Error::Overflow("stub count"))?;
    if stubs_total % 2 != 0 {
        return Err(Error::InvalidInput("n·d must be even".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat(u).take(d as usize)).collect();
    stubs.shuffle(&mut rng);
    let mut entries = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            entries.push((u, u, 2u64));
        } else {
            entries.push((u, v, 1u64));
        }
    }
    RegularMultigraph::build(n, &entries)
}

/// Seeded random d-regular multigraph, resampled until both connected and
/// non-bipartite (hence λ_abs < 1). Fails after `max_tries` rejections.
pub fn random_regular_connected(
    n: usize,
    d: u64,
    seed: u64,
    max_tries: u64,
) -> Result<RegularMultigraph> {
    for t in 0..max_tries {
        let g = random_regular(n, d, seed.wrapping_add(t.wrapping_mul(0x9e3779b97f4a7c15)))?;
        if g.is_connected() && !g.is_bipartite() {
            return Ok(g);
        }
    }
    Err(Error::NotFound(max_tries))
}

/// All d-regular multigraphs on n vertices (loops allowed), enumerated as
/// symmetric nonnegative integer matrices with row sums d. Exhaustive;
/// intended for small n·d only.
pub fn enumerate_regular(n: usize, d: u64) -> Vec<RegularMultigraph> {
    let mut out = Vec::new();
    let mut m = vec![vec![0u64; n]; n];
    let mut remaining = vec![d; n];
    fn rec(
        n: usize,
        u: usize,
        v: usize,
        m: &mut Vec<Vec<u64>>,
        remaining: &mut Vec<u64>,
        out: &mut Vec<RegularMultigraph>,
    ) {
        if u == n {
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a..n {
                    if m[a][b] > 0 {
                        edges.push((a, b, m[a][b]));
                    }
                }
            }
            out.push(RegularMultigraph::from_sorted_edges(n, edges).expect("regular by construction"));
            return;
        }
        if v == n {
            if remaining[u] == 0 {
                rec(n, u + 1, u + 1, m, remaining, out);
            }
            return;
        }
        let cap = if v == u {
            remaining[u]
        } else {
            remaining[u].min(remaining[v])
        };
        for w in 0..=cap {
            m[u][v] = w;
            m[v][u] = w;
            remaining[u] -= w;
            if v != u {
                remaining[v] -= w;
            }
            rec(n, u, v + 1, m, remaining, out);
            remaining[u] += w;
            if v != u {
                remaining[v] += w;
            }
            m[u][v] = 0;
            m[v][u] = 0;
        }
    }
    rec(n, 0, 0, &mut m, &mut remaining, &mut out);
    out
}

/// All d-regular bipartite multigraphs on n + n vertices (first half vs
/// second half): nonnegative integer n×n matrices with all row and column
/// sums d. Exhaustive; small n·d only.
pub fn enumerate_biregular(n: usize, d: u64) -> Vec<RegularMultigraph> {
    let mut out = Vec::new();
    let mut m = vec![vec![0u64; n]; n];
    let mut row_rem = vec![d; n];
    let mut col_rem = vec![d; n];
    fn rec(
        n: usize,
        u: usize,
        v: usize,
        d: u64,
        m: &mut Vec<Vec<u64>>,
        row_rem: &mut Vec<u64>,
        col_rem: &mut Vec<u64>,
        out: &mut Vec<RegularMultigraph>,
    ) {
        if u == n {
            let mut edges = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if m[a][b] > 0 {
                        edges.push((a, n + b, m[a][b]));
                    }
                }
            }
            out.push(
                RegularMultigraph::from_sorted_edges(2 * n, {
                    let mut e = edges;
                    e.sort_unstable();
                    e
                })
                .expect("biregular by construction"),
            );
            return;
        }
        if v == n {
            if row_rem[u] == 0 {
                rec(n, u + 1, 0, d, m, row_rem, col_rem, out);
            }
            return;
        }
        let cap = row_rem[u].min(col_rem[v]);
        for w in 0..=cap {
            m[u][v] = w;
            row_rem[u] -= w;
            col_rem[v] -= w;
            rec(n, u, v + 1, d, m, row_rem, col_rem, out);
            row_rem[u] += w;
            col_rem[v] += w;
            m[u][v] = 0;
        }
    }
    rec(n, 0, 0, d, &mut m, &mut row_rem, &mut col_rem, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_symmetrizes_and_validates() {
        let g = RegularMultigraph::build(2, &[(0, 1, 3)]).unwrap();
        assert_eq!(g.degree(), 3);
        assert_eq!(g.multiplicity(1, 0), 3);

        let g = RegularMultigraph::build(1, &[(0, 0, 5)]).unwrap();
        assert_eq!(g.degree(), 5);

        let err = RegularMultigraph::build(3, &[(0, 1, 1), (1, 2, 1)]).unwrap_err();
        assert!(matches!(err, Error::NonRegular { .. }));
    }

    #[test]
    fn cycles() {
        let c4 = RegularMultigraph::cycle(4).unwrap();
        assert_eq!(c4.degree(), 2);
        assert!(c4.is_bipartite());

        let c4l = RegularMultigraph::cycle_with_loops(4).unwrap();
        assert_eq!(c4l.degree(), 3);
        for i in 0..4 {
            assert_eq!(c4l.multiplicity(i, i), 1);
        }

        let c9 = RegularMultigraph::cycle(9).unwrap();
        assert_eq!(c9.vertex_count(), 9);
        assert_eq!(c9.degree(), 2);
        assert!(!c9.is_bipartite());
    }

    #[test]
    fn normalized_adjacency_entries() {
        let c3 = RegularMultigraph::cycle(3).unwrap();
        let a = c3.normalized_adjacency();
        assert_eq!(a.entry(0, 1), 0.5);
        assert_eq!(a.entry(0, 0), 0.0);

        let c3l = RegularMultigraph::cycle_with_loops(3).unwrap();
        let a = c3l.normalized_adjacency();
        assert!((a.entry(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((a.entry(0, 1) - 1.0 / 3.0).abs() < 1e-15);

        let one = RegularMultigraph::build(1, &[(0, 0, 5)]).unwrap();
        assert_eq!(one.normalized_adjacency().entry(0, 0), 1.0);
    }

    #[test]
    fn power_walk_counts() {
        let c3 = RegularMultigraph::cycle(3).unwrap();
        assert_eq!(c3.power(1).unwrap(), c3);
        let sq = c3.power(2).unwrap();
        assert_eq!(sq.degree(), 4);
        assert_eq!(sq.multiplicity(0, 0), 2);
        assert_eq!(sq.multiplicity(0, 1), 1);

        let c4 = RegularMultigraph::cycle(4).unwrap();
        let sq = c4.power(2).unwrap();
        assert_eq!(sq.multiplicity(0, 0), 2);
        assert_eq!(sq.multiplicity(0, 2), 2);
        assert_eq!(sq.multiplicity(0, 1), 0);
    }

    #[test]
    fn cesaro_counts() {
        let c3 = RegularMultigraph::cycle(3).unwrap();
        let id = c3.cesaro(1).unwrap();
        assert_eq!(id.degree(), 1);
        for i in 0..3 {
            assert_eq!(id.multiplicity(i, i), 1);
        }
        let ces2 = c3.cesaro(2).unwrap();
        assert_eq!(ces2.degree(), 4);
        // (I + A)/2 scaled by 4: loops d^{1}·1 = 2, edges d^{0}·1 = 1.
        assert_eq!(ces2.multiplicity(0, 0), 2);
        assert_eq!(ces2.multiplicity(0, 1), 1);

        let g = random_regular(10, 4, 7).unwrap();
        for m in 1..5u32 {
            let c = g.cesaro(m).unwrap();
            assert_eq!(c.degree(), m as u64 * 4u64.pow(m - 1));
        }
    }

    #[test]
    fn completion() {
        let c3 = RegularMultigraph::cycle(3).unwrap();
        let c = c3.edge_completion(5).unwrap();
        assert_eq!(c.degree(), 5);
        assert_eq!(c.multiplicity(0, 1), 2);
        assert_eq!(c.multiplicity(0, 0), 1);
        assert_eq!(c3.edge_completion(2).unwrap(), c3);
    }

    #[test]
    fn double_and_collapse() {
        // Perfect matching (d=1) with the matching as σ: all-loops, 2-regular.
        let matching = RegularMultigraph::build(4, &[(0, 2, 1), (1, 3, 1)]).unwrap();
        let collapsed = matching.collapse_bipartite(None).unwrap();
        assert_eq!(collapsed.vertex_count(), 2);
        assert_eq!(collapsed.degree(), 2);
        assert_eq!(collapsed.multiplicity(0, 0), 2);
        assert_eq!(collapsed.multiplicity(1, 1), 2);

        // Complete bipartite on 2+2 collapses to a 4-regular graph on 2.
        let k22 = RegularMultigraph::build(
            4,
            &[(0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1)],
        )
        .unwrap();
        let collapsed = k22.collapse_bipartite(None).unwrap();
        assert_eq!(collapsed.vertex_count(), 2);
        assert_eq!(collapsed.degree(), 4);

        let c3 = RegularMultigraph::cycle(3).unwrap();
        let double = c3.bipartite_double().unwrap();
        assert_eq!(double.vertex_count(), 6);
        assert_eq!(double.degree(), 2);
        assert!(double.is_bipartite());
    }

    #[test]
    fn half_size_shapes() {
        // Two disjoint triangles, σ = index shift: connected 8-regular on 3.
        let g = RegularMultigraph::build(
            6,
            &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)],
        )
        .unwrap();
        let h = g.half_size(None).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.degree(), 8);
        assert!(h.is_connected());

        let odd = RegularMultigraph::cycle(3).unwrap();
        assert!(odd.half_size(None).is_err());
    }

    #[test]
    fn trivial_bounds_values() {
        let (g, gp) = trivial_poincare_bounds(3, 2, 1.0);
        assert_eq!((g, gp), (18.0, 72.0));
        let (g, gp) = trivial_poincare_bounds(4, 3, 0.0);
        assert_eq!((g, gp), (6.0, 12.0));
        let (_, gp) = trivial_poincare_bounds(9, 2, 1.0);
        assert_eq!(gp, 648.0);
    }

    #[test]
    fn random_regular_is_regular_and_seeded() {
        let g1 = random_regular(20, 3, 42).unwrap();
        let g2 = random_regular(20, 3, 42).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1.degree(), 3);
        assert!(random_regular(3, 3, 0).is_err()); // nd odd

        let g = random_regular_connected(16, 4, 1, 100).unwrap();
        assert!(g.is_connected() && !g.is_bipartite());
    }

    #[test]
    fn enumeration_counts() {
        // 1-regular multigraphs on 2 vertices: the single edge only
        // (a loop contributes 1, so no loop can close a 1-regular row alone
        // except... a single loop gives degree 1 too).
        let gs = enumerate_regular(2, 1);
        // Either one edge between them, or a loop at each vertex.
        assert_eq!(gs.len(), 2);
        for g in &gs {
            assert_eq!(g.degree(), 1);
        }
        // 2-regular on 2 vertices: {double edge}, {edge+impossible}, {loops}…
        let gs = enumerate_regular(2, 2);
        for g in &gs {
            assert_eq!(g.degree(), 2);
        }
        assert!(gs.len() >= 2);

        let bs = enumerate_biregular(2, 2);
        for b in &bs {
            assert_eq!(b.degree(), 2);
            assert!(b.is_bipartite());
        }
        assert_eq!(bs.len(), 3); // column-sum-2 2x2 matrices: (2,0),(1,1),(0,2) diag patterns
    }

    #[test]
    fn shortest_paths() {
        let c5 = RegularMultigraph::cycle(5).unwrap();
        let d = c5.shortest_path_matrix();
        assert_eq!(d[0][2], 2);
        assert_eq!(d[0][3], 2);
        assert_eq!(d[0][0], 0);
    }
}
