//! The five graph products: tensor, zigzag, replacement, balanced
//! replacement, and derandomized square.
//!
//! All of them pair a "large" graph G₁ (n₁ vertices, degree d₁) with a
//! "small" graph G₂ on exactly d₁ vertices, wired together by a rotation
//! labeling: for every vertex u of G₁, a bijection π_u from the d₁ edge
//! slots at u (edge copies counted with multiplicity, in a deterministic
//! order) onto V(G₂), plus for every a ∈ V(G₂) an enumeration κ_a of its
//! d₂ neighbor slots. Multi-edges get one slot per copy; a self loop is a
//! single slot that is its own reverse.
//!
//! Product vertex indexing is row-major: (u, a) ↦ u·|V₂| + a.

use crate::error::{Error, Result};
use crate::graph::RegularMultigraph;
use crate::par;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// The π/κ labeling data for a product of G₁ with G₂.
#[derive(Clone, Debug)]
pub struct RotationLabeling {
    /// pi[u][s] = G₂-vertex assigned to edge slot s at u.
    pub pi: Vec<Vec<usize>>,
    /// kappa[a][i] = i-th neighbor slot at a in G₂ (slot index into the
    /// slot table of G₂'s vertex a).
    pub kappa: Vec<Vec<usize>>,
}

/// The ordered edge slots at every vertex: slot s at u is the s-th edge
/// copy (v, c) in lexicographic (neighbor, copy) order. The reverse of
/// slot (v, c) at u is slot (u, c) at v; a loop slot is its own reverse.
pub(crate) struct SlotTable {
    /// slots[u] = list of (neighbor, copy index).
    pub slots: Vec<Vec<(usize, u64)>>,
    /// offset[u] maps neighbor v to the first slot index of copies of (u,v).
    offset: Vec<BTreeMap<usize, usize>>,
}

impl SlotTable {
    pub fn new(g: &RegularMultigraph) -> Self {
        let n = g.vertex_count();
        let mut slots = Vec::with_capacity(n);
        let mut offset = Vec::with_capacity(n);
        for u in 0..n {
            let mut row = Vec::with_capacity(g.degree() as usize);
            let mut off = BTreeMap::new();
            for &(v, m) in g.neighbors(u) {
                off.insert(v, row.len());
                for c in 0..m {
                    row.push((v, c));
                }
            }
            slots.push(row);
            offset.push(off);
        }
        Self { slots, offset }
    }

    /// Slot index at u of the c-th copy of edge (u, v).
    pub fn slot_of(&self, u: usize, v: usize, c: u64) -> usize {
        self.offset[u][&v] + c as usize
    }
}

fn check_degree_match(g1: &RegularMultigraph, g2: &RegularMultigraph) -> Result<()> {
    if g1.degree() as usize != g2.vertex_count() {
        return Err(Error::DegreeMismatch {
            d1: g1.degree(),
            n2: g2.vertex_count(),
        });
    }
    Ok(())
}

/// The canonical deterministic labeling: slot s at u maps to G₂-vertex s,
/// and κ_a enumerates a's neighbor slots in sorted order.
pub fn default_labeling(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
) -> Result<RotationLabeling> {
    check_degree_match(g1, g2)?;
    let d1 = g1.degree() as usize;
    let pi = vec![(0..d1).collect::<Vec<_>>(); g1.vertex_count()];
    let kappa = kappa_canonical(g2);
    Ok(RotationLabeling { pi, kappa })
}

/// A seeded random labeling: each π_u is an independent uniform
/// permutation, κ likewise shuffled per vertex.
pub fn random_labeling(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
    seed: u64,
) -> Result<RotationLabeling> {
    check_degree_match(g1, g2)?;
    let d1 = g1.degree() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pi = Vec::with_capacity(g1.vertex_count());
    for _ in 0..g1.vertex_count() {
        let mut perm: Vec<usize> = (0..d1).collect();
        perm.shuffle(&mut rng);
        pi.push(perm);
    }
    let mut kappa = kappa_canonical(g2);
    for row in &mut kappa {
        row.shuffle(&mut rng);
    }
    Ok(RotationLabeling { pi, kappa })
}

fn kappa_canonical(g2: &RegularMultigraph) -> Vec<Vec<usize>> {
    let t = SlotTable::new(g2);
    t.slots
        .iter()
        .map(|row| (0..row.len()).collect())
        .collect()
}

fn validate_labeling(g1: &RegularMultigraph, l: &RotationLabeling) -> Result<()> {
    let d1 = g1.degree() as usize;
    if l.pi.len() != g1.vertex_count() {
        return Err(Error::InvalidInput("labeling has wrong vertex count".into()));
    }
    for perm in &l.pi {
        let mut seen = vec![false; d1];
        if perm.len() != d1 {
            return Err(Error::InvalidInput("π_u has wrong length".into()));
        }
        for &x in perm {
            if x >= d1 || seen[x] {
                return Err(Error::InvalidInput("π_u is not a bijection".into()));
            }
            seen[x] = true;
        }
    }
    Ok(())
}

/// Accumulates directed multiplicity rows into a validated graph.
fn rows_to_graph(
    n: usize,
    rows: Vec<BTreeMap<usize, u64>>,
) -> Result<RegularMultigraph> {
    let mut edges = Vec::new();
    for (u, row) in rows.iter().enumerate() {
        for (&v, &m) in row {
            if v >= u && m > 0 {
                edges.push((u, v, m));
            }
        }
    }
    RegularMultigraph::from_sorted_edges(n, edges)
}

/// The zigzag product G₁ ⓩ G₂: vertex set V₁ × V₂ with
/// E((u,a),(v,b)) = Σ over edge copies e of (u,v) of
/// E₂(π_u(e), a) · E₂(π_v(ē), b); n₁d₁ vertices and degree d₂².
pub fn zigzag(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
    l: &RotationLabeling,
) -> Result<RegularMultigraph> {
    check_degree_match(g1, g2)?;
    validate_labeling(g1, l)?;
    let d1 = g1.degree() as usize;
    let e2 = g2.multiplicity_matrix();
    let table = SlotTable::new(g1);
    let n_out = g1
        .vertex_count()
        .checked_mul(d1)
        .ok_or(Error::Overflow("zigzag vertex count"))?;
    // Build the d₁ output rows of every cloud u in parallel.
    let cloud_rows = par::try_map_indexed(g1.vertex_count(), |u| -> Result<Vec<BTreeMap<usize, u64>>> {
        let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); d1];
        for (s, &(v, c)) in table.slots[u].iter().enumerate() {
            let x = l.pi[u][s];
            let rev = table.slot_of(v, u, c);
            let y = l.pi[v][rev];
            for a in 0..d1 {
                let exa = e2[x][a];
                if exa == 0 {
                    continue;
                }
                let row = &mut rows[a];
                for b in 0..d1 {
                    let eyb = e2[y][b];
                    if eyb == 0 {
                        continue;
                    }
                    let add = exa.checked_mul(eyb).ok_or(Error::Overflow("zigzag mult"))?;
                    let slot = row.entry(v * d1 + b).or_insert(0);
                    *slot = slot.checked_add(add).ok_or(Error::Overflow("zigzag mult"))?;
                }
            }
        }
        Ok(rows)
    })?;
    rows_to_graph(n_out, cloud_rows.into_iter().flatten().collect())
}

/// The replacement product G₁ ⓡ G₂: a copy of G₂ per cloud plus one
/// matching edge per G₁-edge copy between the slots it occupies;
/// (d₂+1)-regular on n₁d₁ vertices.
pub fn replacement(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
    l: &RotationLabeling,
) -> Result<RegularMultigraph> {
    replacement_weighted(g1, g2, l, 1)
}

/// The balanced replacement product G₁ ⓑ G₂: like replacement but the
/// inter-cloud matching edges carry multiplicity d₂; 2d₂-regular.
pub fn balanced_replacement(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
    l: &RotationLabeling,
) -> Result<RegularMultigraph> {
    replacement_weighted(g1, g2, l, g2.degree())
}

fn replacement_weighted(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
    l: &RotationLabeling,
    weight: u64,
) -> Result<RegularMultigraph> {
    check_degree_match(g1, g2)?;
    validate_labeling(g1, l)?;
    let d1 = g1.degree() as usize;
    let table = SlotTable::new(g1);
    let n_out = g1
        .vertex_count()
        .checked_mul(d1)
        .ok_or(Error::Overflow("replacement vertex count"))?;
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    // Cloud copies of G₂.
    for u in 0..g1.vertex_count() {
        for &(i, j, m) in g2.edges() {
            edges.push((u * d1 + i, u * d1 + j, m));
        }
    }
    // Matching edges: one bundle of `weight` per G₁ edge copy. Non-loop
    // copies are counted from their lower endpoint; a loop slot is its own
    // reverse and yields one self loop.
    for (u, slots) in table.slots.iter().enumerate() {
        for (s, &(v, c)) in slots.iter().enumerate() {
            if v < u {
                continue;
            }
            let rev = table.slot_of(v, u, c);
            let i = l.pi[u][s];
            let j = l.pi[v][rev];
            let (a, b) = (u * d1 + i, v * d1 + j);
            edges.push((a.min(b), a.max(b), weight));
        }
    }
    let mut acc: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (u, v, m) in edges {
        let slot = acc.entry((u, v)).or_insert(0);
        *slot = slot.checked_add(m).ok_or(Error::Overflow("replacement mult"))?;
    }
    RegularMultigraph::from_sorted_edges(
        n_out,
        acc.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
    )
}

/// The derandomized square G₁ ⓢ G₂: on V₁, with
/// E(u,v) = Σ_w Σ over slot pairs (e → u, e' → v) at w of
/// E₂(π_w(e), π_w(e')) — two-step walks through w steered by G₂;
/// d₁d₂-regular.
pub fn derandomized_square(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
    l: &RotationLabeling,
) -> Result<RegularMultigraph> {
    check_degree_match(g1, g2)?;
    validate_labeling(g1, l)?;
    let n = g1.vertex_count();
    let e2 = g2.multiplicity_matrix();
    let table = SlotTable::new(g1);
    let contributions = par::try_map_indexed(n, |w| -> Result<Vec<((usize, usize), u64)>> {
        let slots = &table.slots[w];
        let mut local: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        // E(u,v) is the ordered count of slot pairs (e → u, e' → v); we
        // store each unordered vertex pair once, so the inner loop only
        // takes pairs with endpoint(e') ≥ endpoint(e). For u == v the full
        // ordered sum (including e = e') lands on the loop entry, which is
        // exactly what d₁d₂-regularity under the loops-count-once
        // convention requires.
        for (s, &(u, _)) in slots.iter().enumerate() {
            let x = l.pi[w][s];
            for (s2, &(v, _)) in slots.iter().enumerate() {
                if v < u {
                    continue;
                }
                let y = l.pi[w][s2];
                let m = e2[x][y];
                if m == 0 {
                    continue;
                }
                let slot = local.entry((u, v)).or_insert(0);
                *slot = slot.checked_add(m).ok_or(Error::Overflow("square mult"))?;
            }
        }
        Ok(local.into_iter().collect())
    })?;
    let mut acc: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for chunk in contributions {
        for ((u, v), m) in chunk {
            let slot = acc.entry((u, v)).or_insert(0);
            *slot = slot.checked_add(m).ok_or(Error::Overflow("square mult"))?;
        }
    }
    RegularMultigraph::from_sorted_edges(
        n,
        acc.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
    )
}

/// The tensor (Kronecker) product graph: vertex (u,s) ↦ u·n₂+s,
/// multiplicities E₁(u,v)·E₂(s,t); degree d₁d₂.
pub fn tensor_graph(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
) -> Result<RegularMultigraph> {
    let n2 = g2.vertex_count();
    let n_out = g1
        .vertex_count()
        .checked_mul(n2)
        .ok_or(Error::Overflow("tensor vertex count"))?;
    g1.degree()
        .checked_mul(g2.degree())
        .ok_or(Error::Overflow("tensor degree"))?;
    let mut edges = Vec::new();
    for u in 0..g1.vertex_count() {
        for &(v, m1) in g1.neighbors(u) {
            if v < u {
                continue;
            }
            for &(s, t, m2) in g2.edges() {
                let m = m1.checked_mul(m2).ok_or(Error::Overflow("tensor mult"))?;
                let mut push = |a: usize, b: usize, mm: u64| {
                    edges.push((a.min(b), a.max(b), mm));
                };
                // For u == v, ((u,t),(v,s)) is the same unordered pair as
                // ((u,s),(v,t)), so it is pushed only once.
                push(u * n2 + s, v * n2 + t, m);
                if u != v && s != t {
                    push(u * n2 + t, v * n2 + s, m);
                }
            }
        }
    }
    let mut acc: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (u, v, m) in edges {
        let slot = acc.entry((u, v)).or_insert(0);
        *slot = slot.checked_add(m).ok_or(Error::Overflow("tensor mult"))?;
    }
    RegularMultigraph::from_sorted_edges(
        n_out,
        acc.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{random_regular, RegularMultigraph};

    #[test]
    fn labeling_shapes_and_determinism() {
        let g1 = RegularMultigraph::cycle_with_loops(8).unwrap(); // 3-regular
        let g2 = RegularMultigraph::cycle(3).unwrap();
        let l1 = default_labeling(&g1, &g2).unwrap();
        let l2 = default_labeling(&g1, &g2).unwrap();
        assert_eq!(l1.pi, l2.pi);
        assert_eq!(l1.kappa, l2.kappa);

        let c3 = RegularMultigraph::cycle(3).unwrap(); // 2-regular
        assert!(matches!(
            default_labeling(&c3, &g2),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn zigzag_shape() {
        let g1 = RegularMultigraph::cycle_with_loops(8).unwrap();
        let g2 = RegularMultigraph::cycle(3).unwrap();
        let l = default_labeling(&g1, &g2).unwrap();
        let z = zigzag(&g1, &g2, &l).unwrap();
        assert_eq!(z.vertex_count(), 24);
        assert_eq!(z.degree(), 4);

        // Random labelings keep the shape contract.
        for seed in 0..5 {
            let l = random_labeling(&g1, &g2, seed).unwrap();
            let z = zigzag(&g1, &g2, &l).unwrap();
            assert_eq!(z.vertex_count(), 24);
            assert_eq!(z.degree(), 4);
        }
    }

    #[test]
    fn zigzag_with_multiedges_and_loops() {
        // G₁ with a loop and a double edge; degree 3 so G₂ needs 3 vertices.
        let g1 = RegularMultigraph::build(2, &[(0, 1, 2), (0, 0, 1), (1, 1, 1)]).unwrap();
        let g2 = RegularMultigraph::cycle_with_loops(3).unwrap(); // 3-regular on 3
        let l = default_labeling(&g1, &g2).unwrap();
        let z = zigzag(&g1, &g2, &l).unwrap();
        assert_eq!(z.vertex_count(), 6);
        assert_eq!(z.degree(), 9);
    }

    #[test]
    fn replacement_degrees() {
        let g1 = random_regular(6, 3, 1).unwrap();
        let g2 = RegularMultigraph::cycle(3).unwrap();
        let l = default_labeling(&g1, &g2).unwrap();
        let r = replacement(&g1, &g2, &l).unwrap();
        assert_eq!(r.vertex_count(), 18);
        assert_eq!(r.degree(), 3); // d₂ + 1 = 3

        let b = balanced_replacement(&g1, &g2, &l).unwrap();
        assert_eq!(b.vertex_count(), 18);
        assert_eq!(b.degree(), 4); // 2 d₂
    }

    #[test]
    fn square_degree_and_uniform_case() {
        let g1 = random_regular(4, 3, 2).unwrap();
        let g2 = RegularMultigraph::complete_with_loops(3).unwrap(); // degree 3
        let l = default_labeling(&g1, &g2).unwrap();
        let s = derandomized_square(&g1, &g2, &l).unwrap();
        assert_eq!(s.degree(), 9); // d₁ d₂ = 3·3

        // Steering by the uniform small graph reproduces G₁² entrywise for
        // simple G₁.
        let g1 = RegularMultigraph::cycle_with_loops(4).unwrap();
        let g2 = RegularMultigraph::complete_with_loops(3).unwrap();
        let l = default_labeling(&g1, &g2).unwrap();
        let s = derandomized_square(&g1, &g2, &l).unwrap();
        let sq = g1.power(2).unwrap();
        assert_eq!(s, sq);
    }

    #[test]
    fn tensor_shapes() {
        let g1 = RegularMultigraph::cycle(3).unwrap();
        let g2 = RegularMultigraph::cycle(4).unwrap();
        let t = tensor_graph(&g1, &g2).unwrap();
        assert_eq!(t.vertex_count(), 12);
        assert_eq!(t.degree(), 4);
        // Multiplicity check: ((0,0),(1,1)) should be E₁(0,1)·E₂(0,1) = 1.
        assert_eq!(t.multiplicity(0 * 4 + 0, 1 * 4 + 1), 1);
    }
}
