//! Partitions of `Q_n`, `n = 2^s - 1`, into induced paths with antipodal
//! endpoints.
//!
//! Construction. Coordinates are labelled by the nonzero `s`-bit values
//! (coordinate `j` has label `j+1`); the label of a vertex's support XORs to
//! its syndrome, whose kernel is a perfect single-error-correcting code `C`.
//! A path that flips every coordinate exactly once is isometric and
//! antipodal, and its syndrome walk is determined by the order of the flip
//! labels. We search for a flip order whose partial syndrome sums are
//! pairwise distinct except for the forced repeat at the two endpoints
//! (complementary vertices always share a syndrome), giving a base path `A`
//! that meets `2^s - 1` of the `2^s` syndrome classes. A translated copy
//! `B = b0 + A` is placed so that its walk covers the class `A` misses and
//! skips the class `A` doubles. Translating both paths by an index-2 subcode
//! `T < C` chosen to avoid the all-ones word (and to separate the positions
//! where the two walks share a syndrome) yields `2^n / (n+1)` pairwise
//! disjoint paths, which must then cover everything by counting. The
//! subcode is the kernel of a linear functional found by solving a small
//! F_2 system; if no functional works for a flip order, the next order is
//! tried. The returned object is checked to be a partition before use.

use thiserror::Error;

use crate::certfile::PackingCertificate;
use crate::grid::{Grid, GridError, Mode, PatternGraph, Placement};

#[derive(Debug, Error)]
pub enum AntipodalError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("s must be at least 1")]
    ZeroS,
    #[error("Q_{0} exceeds the resource limit for materialized path partitions")]
    ResourceLimit(usize),
    #[error("internal construction failure: {0}")]
    Internal(String),
}

/// A partition of `Q_n` into `2^n/(n+1)` induced antipodal paths, each given
/// by its vertex order.
#[derive(Clone, Debug)]
pub struct RamrasDecomposition {
    pub s: u32,
    pub n: usize,
    pub host: Grid,
    pub paths: Vec<Vec<u64>>,
}

impl RamrasDecomposition {
    pub fn certificate(&self) -> PackingCertificate {
        let path_box = Grid::new(vec![(self.n + 1) as u32]).expect("path box");
        let verts: Vec<u64> = path_box.vertices().collect();
        let pattern = PatternGraph::induced_from_indices(path_box, verts).expect("full path");
        let placements: Vec<Placement> = self
            .paths
            .iter()
            .map(|p| Placement {
                pattern: 0,
                mode: Mode::Induced,
                image: p.clone(),
            })
            .collect();
        let mut cert = PackingCertificate {
            host: self.host.clone(),
            patterns: vec![pattern],
            placements,
            uncovered: Vec::new(),
        };
        cert.canonicalize();
        cert
    }
}

pub fn ramras_decomposition(s: u32) -> Result<RamrasDecomposition, AntipodalError> {
    if s == 0 {
        return Err(AntipodalError::ZeroS);
    }
    let n = (1usize << s) - 1;
    if n > 22 {
        return Err(AntipodalError::ResourceLimit(n));
    }
    let host = Grid::hypercube(n)?;
    if s == 1 {
        return Ok(RamrasDecomposition {
            s,
            n,
            host,
            paths: vec![vec![0, 1]],
        });
    }

    let code = CodeTables::new(n, s);
    let mut found: Option<Vec<Vec<u64>>> = None;
    let mut deltas: Vec<u32> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    let mut visited = vec![false; n + 1];
    search_walks(
        n,
        0,
        &mut deltas,
        &mut used,
        &mut visited,
        &mut |walk| match assemble_partition(n, s, walk, &code) {
            Some(paths) => {
                found = Some(paths);
                true
            }
            None => false,
        },
    );
    let mut paths = found.ok_or_else(|| {
        AntipodalError::Internal("no flip order admits a separating subcode".into())
    })?;
    paths.sort_by_key(|p| p[0]);
    Ok(RamrasDecomposition { s, n, host, paths })
}

/// Depth-first search over flip-label orders whose syndrome partial sums are
/// distinct, returning to 0 exactly at the last step. Lexicographically
/// first orders are tried first; `try_walk` stops the search by returning
/// true.
fn search_walks(
    n: usize,
    sigma: u32,
    deltas: &mut Vec<u32>,
    used: &mut [bool],
    visited: &mut [bool],
    try_walk: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    if deltas.len() == n {
        return try_walk(deltas);
    }
    let last = deltas.len() == n - 1;
    for delta in 1..=n as u32 {
        if used[delta as usize] {
            continue;
        }
        let next = sigma ^ delta;
        if last {
            if next != 0 {
                continue;
            }
        } else if next == 0 || visited[next as usize] {
            continue;
        }
        used[delta as usize] = true;
        visited[next as usize] = true;
        deltas.push(delta);
        if search_walks(n, next, deltas, used, visited, try_walk) {
            return true;
        }
        deltas.pop();
        visited[next as usize] = false;
        used[delta as usize] = false;
    }
    false
}

/// Syndrome arithmetic and a basis of the perfect code in systematic form.
struct CodeTables {
    n: usize,
    /// coordinates whose label is not a power of two (information positions)
    info_coords: Vec<usize>,
    /// basis vector per information coordinate
    basis: Vec<u64>,
    /// all codewords, ascending
    codewords: Vec<u64>,
}

impl CodeTables {
    fn new(n: usize, s: u32) -> Self {
        let coord_bit = |j: usize| 1u64 << (n - 1 - j);
        let mut info_coords = Vec::new();
        let mut basis = Vec::new();
        for j in 0..n {
            let label = (j + 1) as u32;
            if label.is_power_of_two() {
                continue;
            }
            let mut word = coord_bit(j);
            for b in 0..s {
                if label >> b & 1 == 1 {
                    word ^= coord_bit((1usize << b) - 1);
                }
            }
            info_coords.push(j);
            basis.push(word);
        }
        let dim = basis.len();
        let mut codewords = Vec::with_capacity(1 << dim);
        for mask in 0u64..1 << dim {
            let mut w = 0u64;
            for (b, &v) in basis.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    w ^= v;
                }
            }
            codewords.push(w);
        }
        codewords.sort_unstable();
        CodeTables {
            n,
            info_coords,
            basis,
            codewords,
        }
    }

    /// Coefficients of a codeword in the systematic basis: its bits at the
    /// information coordinates.
    fn coeffs(&self, word: u64) -> u64 {
        let mut out = 0u64;
        for (b, &j) in self.info_coords.iter().enumerate() {
            if word >> (self.n - 1 - j) & 1 == 1 {
                out |= 1 << b;
            }
        }
        out
    }

    fn syndrome(&self, word: u64) -> u32 {
        let mut syn = 0u32;
        for b in 0..self.n {
            if word >> b & 1 == 1 {
                syn ^= (self.n - b) as u32;
            }
        }
        syn
    }
}

/// Builds the partition for one flip order, or reports that no functional
/// separates the shared syndrome positions for it.
fn assemble_partition(n: usize, s: u32, walk: &[u32], code: &CodeTables) -> Option<Vec<Vec<u64>>> {
    let span = 1u32 << s;
    // base path and syndrome positions
    let mut path_a = Vec::with_capacity(n + 1);
    let mut pos_of = vec![usize::MAX; span as usize];
    let mut x = 0u64;
    let mut sigma = 0u32;
    path_a.push(x);
    pos_of[0] = 0;
    for (i, &delta) in walk.iter().enumerate() {
        x ^= 1u64 << (n - delta as usize);
        sigma ^= delta;
        path_a.push(x);
        if sigma != 0 {
            pos_of[sigma as usize] = i + 1;
        }
    }
    let missed = (1..span).find(|&v| pos_of[v as usize] == usize::MAX)?;

    // pair differences constraining the functional
    let anchor = 1u64 << (n - missed as usize); // weight-1 word with syndrome `missed`
    debug_assert_eq!(code.syndrome(anchor), missed);
    let mut pair_diffs = Vec::new();
    for v in 1..span {
        let w = v ^ missed;
        if v == missed || v >= w {
            continue;
        }
        let d = path_a[pos_of[v as usize]] ^ path_a[pos_of[w as usize]] ^ anchor;
        debug_assert_eq!(code.syndrome(d), 0);
        pair_diffs.push(code.coeffs(d));
    }

    // solve for phi: phi(all-ones) = 1 and phi constant on the pair diffs
    let all_ones = code.coeffs((1u64 << n) - 1);
    let mut rows: Vec<(u64, u8)> = vec![(all_ones, 1)];
    for d in &pair_diffs[1..] {
        rows.push((d ^ pair_diffs[0], 0));
    }
    let phi = solve_f2(&rows, code.basis.len())?;
    let eval = |word: u64| (code.coeffs(word) & phi).count_ones() as u8 & 1;

    let d0 = eval_coeffs(pair_diffs[0], phi);
    let want = 1 ^ d0;
    let gamma = *code.codewords.iter().find(|&&w| eval(w) == want)?;
    let b0 = anchor ^ gamma;
    let subcode: Vec<u64> = code
        .codewords
        .iter()
        .copied()
        .filter(|&w| eval(w) == 0)
        .collect();

    let mut paths = Vec::with_capacity(2 * subcode.len());
    let mut covered = vec![false; 1usize << n];
    for &t in &subcode {
        for base in [0u64, b0] {
            let path: Vec<u64> = path_a.iter().map(|&v| v ^ base ^ t).collect();
            for &v in &path {
                if covered[v as usize] {
                    return None; // not a partition for this walk; keep searching
                }
                covered[v as usize] = true;
            }
            paths.push(path);
        }
    }
    if covered.iter().any(|&c| !c) {
        return None;
    }
    Some(paths)
}

fn eval_coeffs(coeffs: u64, phi: u64) -> u8 {
    (coeffs & phi).count_ones() as u8 & 1
}

/// Solves `dot(row, y) = rhs` over F_2; free variables are set to zero.
fn solve_f2(rows: &[(u64, u8)], dim: usize) -> Option<u64> {
    let mut rows: Vec<(u64, u8)> = rows.to_vec();
    let mut pivots: Vec<(usize, u64, u8)> = Vec::new();
    for col in 0..dim {
        let Some(at) = rows.iter().position(|&(r, _)| r >> col & 1 == 1) else {
            continue;
        };
        let (pr, prhs) = rows.swap_remove(at);
        for row in rows.iter_mut() {
            if row.0 >> col & 1 == 1 {
                row.0 ^= pr;
                row.1 ^= prhs;
            }
        }
        pivots.push((col, pr, prhs));
    }
    if rows.iter().any(|&(r, rhs)| r == 0 && rhs == 1) {
        return None;
    }
    let mut y = 0u64;
    for &(col, row, rhs) in pivots.iter().rev() {
        let val = rhs ^ ((row & y).count_ones() as u8 & 1);
        if val == 1 {
            y |= 1 << col;
        }
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::validate_placement;

    fn check_decomposition(d: &RamrasDecomposition) {
        let n = d.n;
        assert_eq!(d.paths.len() as u64, d.host.vertex_count() / (n as u64 + 1));
        let mut covered = vec![false; d.host.vertex_count() as usize];
        for path in &d.paths {
            assert_eq!(path.len(), n + 1);
            // antipodal endpoints
            assert_eq!(d.host.distance_idx(path[0], path[n]), n as u64);
            // consecutive adjacency and induced (in fact isometric) order
            for i in 0..path.len() {
                for j in (i + 1)..path.len() {
                    let dist = d.host.distance_idx(path[i], path[j]);
                    assert_eq!(dist, (j - i) as u64, "path is isometric");
                }
            }
            for &v in path {
                assert!(!covered[v as usize], "vertex repeated");
                covered[v as usize] = true;
            }
        }
        assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn s1_is_the_single_edge() {
        let d = ramras_decomposition(1).unwrap();
        assert_eq!(d.paths, vec![vec![0, 1]]);
    }

    #[test]
    fn s2_partitions_q3_into_two_paths() {
        let d = ramras_decomposition(2).unwrap();
        assert_eq!(d.n, 3);
        assert_eq!(d.paths.len(), 2);
        check_decomposition(&d);
    }

    #[test]
    fn s3_partitions_q7() {
        let d = ramras_decomposition(3).unwrap();
        assert_eq!(d.paths.len(), 16);
        check_decomposition(&d);
    }

    #[test]
    fn s4_partitions_q15() {
        let d = ramras_decomposition(4).unwrap();
        assert_eq!(d.paths.len(), 2048);
        check_decomposition(&d);
    }

    #[test]
    fn certificate_paths_validate_induced() {
        let d = ramras_decomposition(2).unwrap();
        let cert = d.certificate();
        for pl in &cert.placements {
            let rep = validate_placement(&cert.host, &cert.patterns[0], &pl.image).unwrap();
            assert!(rep.induced && rep.isometric);
        }
        assert!(cert.uncovered.is_empty());
    }

    #[test]
    fn deterministic_output() {
        let a = ramras_decomposition(3).unwrap();
        let b = ramras_decomposition(3).unwrap();
        assert_eq!(a.paths, b.paths);
    }
}
