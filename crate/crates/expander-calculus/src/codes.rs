//! F₂-linear codes with verified minimum distance, duals, and coset
//! indexing — the inputs to the hypercube quotient construction.
//!
//! Codewords and generator rows are stored as `u64` bitmasks (bit i =
//! coordinate i), so block lengths up to 64 are supported; exhaustive
//! distance verification is capped at dimension 24.

use crate::error::{Error, Result};
use crate::par;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Maximum dimension for exhaustive distance verification (2^24 words).
pub const DISTANCE_DIM_CAP: usize = 24;

/// An F₂-linear code given by an independent generator matrix.
#[derive(Clone, Debug, Serialize)]
pub struct LinearCode {
    /// Block length (≤ 64).
    pub n: usize,
    /// Dimension (number of generator rows).
    pub dim: usize,
    /// Generator rows as bitmasks; linearly independent over F₂.
    pub generator: Vec<u64>,
    /// Verified minimum Hamming weight over nonzero codewords; `None`
    /// for codes produced without verification (duals) or for the zero
    /// code.
    pub min_distance: Option<u32>,
}

fn rank_f2(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            let pivot = 1u64 << (63 - b.leading_zeros());
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

impl LinearCode {
    /// Builds a code from generator rows, checking independence, and
    /// verifies its minimum distance exhaustively.
    pub fn new(n: usize, generator: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidInput("block length must be in 1..=64".into()));
        }
        let dim = generator.len();
        if dim > n {
            return Err(Error::InvalidInput("dimension exceeds block length".into()));
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if generator.iter().any(|&r| r & !mask != 0) {
            return Err(Error::InvalidInput("generator row exceeds block length".into()));
        }
        if rank_f2(&generator) != dim {
            return Err(Error::InvalidInput("generator rows are dependent".into()));
        }
        let mut code = Self {
            n,
            dim,
            generator,
            min_distance: None,
        };
        code.min_distance = code.verify_min_distance()?;
        Ok(code)
    }

    /// Exhaustive minimum distance over all 2^dim − 1 nonzero codewords
    /// (None for the zero code), parallel over message prefixes.
    pub fn verify_min_distance(&self) -> Result<Option<u32>> {
        if self.dim == 0 {
            return Ok(None);
        }
        if self.dim > DISTANCE_DIM_CAP {
            return Err(Error::CapExceeded {
                needed: 2f64.powi(self.dim as i32),
                cap: 1 << DISTANCE_DIM_CAP,
            });
        }
        let total = 1u64 << self.dim;
        let min = par::reduce_indexed(
            total as usize - 1,
            u32::MAX,
            |i| self.encode((i + 1) as u64).count_ones(),
            |a, b| a.min(b),
        );
        Ok(Some(min))
    }

    /// Second, independent distance computation: walks messages in Gray-
    /// code order so consecutive codewords differ by a single generator
    /// row, tracking the word incrementally.
    pub fn verify_min_distance_gray(&self) -> Result<Option<u32>> {
        if self.dim == 0 {
            return Ok(None);
        }
        if self.dim > DISTANCE_DIM_CAP {
            return Err(Error::CapExceeded {
                needed: 2f64.powi(self.dim as i32),
                cap: 1 << DISTANCE_DIM_CAP,
            });
        }
        let total = 1u64 << self.dim;
        let mut word = 0u64;
        let mut min = u32::MAX;
        for i in 1..total {
            // Gray code flips bit trailing_zeros(i) between step i−1 and i.
            word ^= self.generator[i.trailing_zeros() as usize];
            if word != 0 {
                min = min.min(word.count_ones());
            }
        }
        Ok(Some(min))
    }

    /// Codeword for a message (low `dim` bits select generator rows).
    pub fn encode(&self, message: u64) -> u64 {
        let mut w = 0u64;
        for (k, &row) in self.generator.iter().enumerate() {
            if message >> k & 1 == 1 {
                w ^= row;
            }
        }
        w
    }

    /// Generator of the dual code: a basis of the F₂ null space of the
    /// generator matrix (dim n − dim; distance left unverified).
    pub fn dual(&self) -> Result<LinearCode> {
        // Gaussian elimination on rows, tracking pivot columns.
        let mut rows = self.generator.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0usize;
        for c in 0..self.n {
            let bit = 1u64 << c;
            if let Some(k) = (r..rows.len()).find(|&k| rows[k] & bit != 0) {
                rows.swap(r, k);
                let pivot_row = rows[r];
                for (k, row) in rows.iter_mut().enumerate() {
                    if k != r && *row & bit != 0 {
                        *row ^= pivot_row;
                    }
                }
                pivots.push(c);
                r += 1;
            }
        }
        let free: Vec<usize> = (0..self.n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = 1u64 << fc;
            for (ri, &pc) in pivots.iter().enumerate() {
                if rows[ri] & (1u64 << fc) != 0 {
                    v |= 1u64 << pc;
                }
            }
            basis.push(v);
        }
        let dual = LinearCode {
            n: self.n,
            dim: basis.len(),
            generator: basis,
            min_distance: None,
        };
        if rank_f2(&dual.generator) != dual.dim {
            return Err(Error::InvalidInput("dual basis degenerate".into()));
        }
        debug_assert!(dual
            .generator
            .iter()
            .all(|&v| self.generator.iter().all(|&g| (v & g).count_ones() % 2 == 0)));
        Ok(dual)
    }

    /// Syndrome index of x with respect to the quotient F₂ⁿ/V⊥ where V⊥
    /// is the dual's row space: the dim-bit integer whose k-th bit is
    /// ⟨generator row k, x⟩ over F₂. Constant on cosets of V⊥ and
    /// surjective onto [0, 2^dim).
    pub fn coset_index(&self, x: u64) -> Result<usize> {
        let mask = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        if x & !mask != 0 {
            return Err(Error::InvalidInput("vector exceeds block length".into()));
        }
        let mut idx = 0usize;
        for (k, &row) in self.generator.iter().enumerate() {
            idx |= (((row & x).count_ones() as usize) & 1) << k;
        }
        Ok(idx)
    }

    /// One representative per coset index — the lexicographically
    /// smallest preimage (requires materializing F₂ⁿ; n ≤ 24).
    pub fn coset_reps(&self) -> Result<Vec<u64>> {
        if self.n > DISTANCE_DIM_CAP {
            return Err(Error::CapExceeded {
                needed: 2f64.powi(self.n as i32),
                cap: 1 << DISTANCE_DIM_CAP,
            });
        }
        let mut reps = vec![u64::MAX; 1 << self.dim];
        for x in 0..(1u64 << self.n) {
            let c = self.coset_index(x)?;
            if reps[c] == u64::MAX {
                reps[c] = x;
            }
        }
        if reps.iter().any(|&r| r == u64::MAX) {
            return Err(Error::InvalidInput("coset index not surjective".into()));
        }
        Ok(reps)
    }

    /// Whether dimension and verified distance both reach the n/10
    /// thresholds of a good code.
    pub fn is_good_tenth(&self) -> bool {
        let thr = (self.n as f64 / 10.0).ceil() as u32;
        self.dim as u32 >= thr && self.min_distance.map_or(false, |d| d >= thr)
    }
}

/// Seeded rejection sampling of generator matrices until one has
/// dimension `dim` and verified minimum distance ≥ `min_dist`.
pub fn random_code(
    n: usize,
    dim: usize,
    min_dist: u32,
    seed: u64,
    max_tries: u64,
) -> Result<LinearCode> {
    if dim > n || dim > DISTANCE_DIM_CAP {
        return Err(Error::InvalidInput("dimension out of range".into()));
    }
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        let rows: Vec<u64> = (0..dim).map(|_| rng.gen::<u64>() & mask).collect();
        if rank_f2(&rows) != dim {
            continue;
        }
        let code = LinearCode::new(n, rows)?;
        if code.min_distance.map_or(false, |d| d >= min_dist) {
            return Ok(code);
        }
    }
    Err(Error::NotFound(max_tries))
}

/// The [n, 1, n] repetition code.
pub fn repetition(n: usize) -> Result<LinearCode> {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    LinearCode::new(n, vec![mask])
}

/// The [n, n−1, 2] single-parity-check code (all even-weight words).
pub fn single_parity_check(n: usize) -> Result<LinearCode> {
    if n < 2 {
        return Err(Error::InvalidInput("parity-check code needs n ≥ 2".into()));
    }
    let rows: Vec<u64> = (1..n).map(|i| 1u64 | (1u64 << i)).collect();
    LinearCode::new(n, rows)
}

/// The extended Hamming [8, 4, 4] code.
pub fn extended_hamming8() -> Result<LinearCode> {
    // Rows of a standard [8,4,4] generator (identity | parity part).
    LinearCode::new(
        8,
        vec![0b0111_0001, 0b1011_0010, 0b1101_0100, 0b1110_1000],
    )
}

/// Serializes as "n dim min_dist" then one generator row of n bits per
/// line, most significant coordinate first ("-" when unverified).
pub fn to_text(code: &LinearCode) -> String {
    let mut out = String::new();
    match code.min_distance {
        Some(d) => out.push_str(&format!("{} {} {}\n", code.n, code.dim, d)),
        None => out.push_str(&format!("{} {} -\n", code.n, code.dim)),
    }
    for &row in &code.generator {
        for i in (0..code.n).rev() {
            out.push(if row >> i & 1 == 1 { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Parses the `to_text` format and re-verifies the declared distance.
pub fn from_text(s: &str) -> Result<LinearCode> {
    let mut lines = s.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse {
            line: 1,
            message: "empty file".into(),
        })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Parse {
            line: 1,
            message: "expected 'n dim min_dist'".into(),
        });
    }
    let n: usize = parts[0].parse().map_err(|_| Error::Parse {
        line: 1,
        message: "bad block length".into(),
    })?;
    let dim: usize = parts[1].parse().map_err(|_| Error::Parse {
        line: 1,
        message: "bad dimension".into(),
    })?;
    let declared: Option<u32> = if parts[2] == "-" {
        None
    } else {
        Some(parts[2].parse().map_err(|_| Error::Parse {
            line: 1,
            message: "bad distance".into(),
        })?)
    };
    let mut rows = Vec::with_capacity(dim);
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if line.len() != n || line.bytes().any(|b| b != b'0' && b != b'1') {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected {n} bits"),
            });
        }
        let mut row = 0u64;
        for b in line.bytes() {
            row = (row << 1) | (b - b'0') as u64;
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected {dim} rows, found {}", rows.len()),
        });
    }
    let code = LinearCode::new(n, rows)?;
    if let Some(d) = declared {
        if code.min_distance != Some(d) {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "declared distance {d} but verified {:?}",
                    code.min_distance
                ),
            });
        }
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let rep = repetition(4).unwrap();
        assert_eq!((rep.dim, rep.min_distance), (1, Some(4)));
        let spc = single_parity_check(5).unwrap();
        assert_eq!((spc.dim, spc.min_distance), (4, Some(2)));
        let h8 = extended_hamming8().unwrap();
        assert_eq!((h8.n, h8.dim, h8.min_distance), (8, 4, Some(4)));
        // All 15 nonzero codewords of the extended Hamming code have
        // weight in {4, 8}.
        for msg in 1u64..16 {
            let w = h8.encode(msg).count_ones();
            assert!(w == 4 || w == 8, "weight {w}");
        }
    }

    #[test]
    fn gray_code_distance_agrees() {
        for (seed, n, dim) in [(1u64, 10usize, 4usize), (2, 12, 6), (3, 16, 8), (4, 8, 3)] {
            let code = random_code(n, dim, 1, seed, 1000).unwrap();
            assert_eq!(
                code.verify_min_distance().unwrap(),
                code.verify_min_distance_gray().unwrap()
            );
        }
    }

    #[test]
    fn dual_properties() {
        let rep = repetition(4).unwrap();
        let dual = rep.dual().unwrap();
        assert_eq!(dual.dim, 3);
        // Dual of repetition = even-weight code.
        for msg in 0u64..8 {
            assert_eq!(dual.encode(msg).count_ones() % 2, 0);
        }
        // Double dual spans the original row space.
        let dd = dual.dual().unwrap();
        assert_eq!(dd.dim, 1);
        assert_eq!(dd.generator[0], rep.generator[0]);
        // Full space → zero code.
        let full = LinearCode::new(3, vec![1, 2, 4]).unwrap();
        assert_eq!(full.dual().unwrap().dim, 0);
    }

    #[test]
    fn coset_structure() {
        for code in [
            repetition(4).unwrap(),
            single_parity_check(6).unwrap(),
            extended_hamming8().unwrap(),
            random_code(10, 3, 2, 9, 1000).unwrap(),
        ] {
            let dual = code.dual().unwrap();
            // Dual words index to 0.
            for msg in 0..(1u64 << dual.dim) {
                assert_eq!(code.coset_index(dual.encode(msg)).unwrap(), 0);
            }
            // Index is constant on cosets: spot-check translations.
            for x in [0u64, 1, 3, (1 << code.n) - 1] {
                let c = code.coset_index(x).unwrap();
                for msg in 0..(1u64 << dual.dim.min(6)) {
                    assert_eq!(code.coset_index(x ^ dual.encode(msg)).unwrap(), c);
                }
            }
            // Equal coset sizes 2^{n-dim}, exhaustively.
            let mut counts = vec![0u64; 1 << code.dim];
            for x in 0..(1u64 << code.n) {
                counts[code.coset_index(x).unwrap()] += 1;
            }
            assert!(counts.iter().all(|&c| c == 1 << (code.n - code.dim)));
            // Representatives are lexicographically smallest.
            let reps = code.coset_reps().unwrap();
            assert_eq!(reps.len(), 1 << code.dim);
            assert_eq!(reps[0], 0);
            for (c, &r) in reps.iter().enumerate() {
                assert_eq!(code.coset_index(r).unwrap(), c);
                for x in 0..r {
                    assert_ne!(code.coset_index(x).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn random_code_and_failures() {
        let c = random_code(10, 1, 1, 42, 100).unwrap();
        assert!(c.min_distance.unwrap() >= 1);
        // Full space contains weight-1 words: distance 2 is impossible.
        assert!(matches!(
            random_code(4, 4, 2, 0, 200),
            Err(Error::NotFound(200))
        ));
        let c = random_code(4, 1, 4, 7, 5000).unwrap();
        assert_eq!(c.generator[0], 0b1111);
    }

    #[test]
    fn text_round_trip() {
        for code in [repetition(5).unwrap(), extended_hamming8().unwrap()] {
            let s = to_text(&code);
            let back = from_text(&s).unwrap();
            assert_eq!(back.generator, code.generator);
            assert_eq!(back.min_distance, code.min_distance);
            assert_eq!(to_text(&back), s);
        }
        assert!(from_text("3 1 2\n111\n").is_err()); // declared ≠ verified
        assert!(from_text("4 1 4\n11x1\n").is_err());
    }
}
