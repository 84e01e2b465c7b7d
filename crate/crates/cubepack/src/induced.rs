//! Induced-copy machinery: staircase partitions of `block x P_{l-1}` and the
//! composition producing induced `(P_l)^t` packings of hypercubes.
//!
//! The staircase partition cuts the product of a Hamilton-ordered `l`-vertex
//! block with the `(l-1)`-vertex path into `l-1` induced `l`-vertex paths.
//! Writing block positions `h` and path positions `p` (both 0-based), path
//! `i` (1-based) is
//!
//! ```text
//!   (i-1, 0) .. (i-1, l-i-1), (i, l-i-1) .. (i, l-2)
//! ```
//!
//! Two cells of one path share a `p` only at the elbow, where the block
//! positions are consecutive, so chords of the block never join two of its
//! cells and the path is induced no matter which Hamilton-path graph the
//! block carries.
//!
//! The full composition splits `Q_n = Q_{n - t c} x (Q_c)^t` with
//! `c = 2^m - 1`, packs the first factor by block products of `(b+1)`-vertex
//! Hamilton-ordered blocks, partitions each cube factor into induced
//! antipodal paths, cuts each such path into `l-1-a` short pieces (`l-1`
//! vertices) and one long piece (`b` vertices, `b ≡ -1 mod l`), and
//! staircases blocks against pieces; products over the `t` factors give the
//! induced `(P_l)^t` copies. The parameters satisfy
//! `2^m = (l-1-a)(l-1) + b` with `a = 2^m mod l`.

use thiserror::Error;

use crate::antipodal::{ramras_decomposition, AntipodalError};
use crate::certfile::PackingCertificate;
use crate::grid::{Grid, GridError, Mode, PatternGraph, Placement};
use crate::hampath::{
    any_power_min, pack_any_path_power, HamOrderedBlock, HampathError, PackParams,
};

#[derive(Debug, Error)]
pub enum InducedError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Hampath(#[from] HampathError),
    #[error(transparent)]
    Antipodal(#[from] AntipodalError),
    #[error("staircase needs a block with at least 2 vertices (the product with P_0 is empty)")]
    BlockTooSmall,
    #[error("path length must be at least 2")]
    LengthTooSmall,
    #[error(
        "invalid exponent override m = {m}: it gives piece length b = {b}, which must be positive"
    )]
    BadOverride { m: u32, b: i128 },
    #[error("n = {n} is too small for l = {l}, t = {t} with m = {m}; the minimum is {min}")]
    HostTooSmall {
        l: u64,
        t: usize,
        n: usize,
        m: u32,
        min: usize,
    },
    #[error("Q_{0} exceeds the resource limit for materialized packings")]
    ResourceLimit(usize),
}

/// The `l-1` staircase paths as (block position, path position) index pairs.
pub fn staircase_index_paths(l: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(l >= 2);
    (1..l)
        .map(|i| {
            let mut path = Vec::with_capacity(l);
            for p in 0..=(l - i - 1) {
                path.push((i - 1, p));
            }
            for p in (l - i - 1)..=(l - 2) {
                path.push((i, p));
            }
            debug_assert_eq!(path.len(), l);
            path
        })
        .collect()
}

/// Partitions `block x P_{l-1}` into `l-1` induced copies of `P_l`. The
/// certificate's host is the block's own box with the path factor appended;
/// vertices of the box outside the block stay uncovered.
pub fn staircase_partition(block: &HamOrderedBlock) -> Result<PackingCertificate, InducedError> {
    block.validate()?;
    let l = block.len();
    if l < 2 {
        return Err(InducedError::BlockTooSmall);
    }
    let mut dims = block.sub_box.dims().to_vec();
    dims.push((l - 1) as u32);
    let host = Grid::new(dims)?;

    let pattern_box = Grid::new(vec![l as u32])?;
    let verts: Vec<u64> = pattern_box.vertices().collect();
    let pattern = PatternGraph::induced_from_indices(pattern_box, verts)?;

    let placements: Vec<Placement> = staircase_index_paths(l)
        .into_iter()
        .map(|path| {
            let image = path
                .into_iter()
                .map(|(h, p)| block.order[h] * (l as u64 - 1) + p as u64)
                .collect();
            Placement {
                pattern: 0,
                mode: Mode::Induced,
                image,
            }
        })
        .collect();

    let in_block: std::collections::BTreeSet<u64> = block.order.iter().copied().collect();
    let uncovered: Vec<u64> = block
        .sub_box
        .vertices()
        .filter(|v| !in_block.contains(v))
        .flat_map(|v| (0..l as u64 - 1).map(move |p| v * (l as u64 - 1) + p))
        .collect();

    let mut cert = PackingCertificate {
        host,
        patterns: vec![pattern],
        placements,
        uncovered,
    };
    cert.canonicalize();
    Ok(cert)
}

/// Derived parameters of the induced packing for a path length `l` and an
/// optional exponent override.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InducedParams {
    pub l: u64,
    pub m: u32,
    pub a: u64,
    pub b: u64,
}

pub fn induced_power_params(
    l: u64,
    m_override: Option<u32>,
) -> Result<InducedParams, InducedError> {
    if l < 2 {
        return Err(InducedError::LengthTooSmall);
    }
    let m = match m_override {
        Some(m) => m,
        None => {
            let mut m = 0u32;
            while 1u128 << m < (l as u128) * (l as u128) {
                m += 1;
            }
            m
        }
    };
    let two_m = 1i128 << m;
    let a = (two_m % l as i128) as u64;
    let b = two_m - (l as i128 - 1 - a as i128) * (l as i128 - 1);
    if b <= 0 {
        return Err(InducedError::BadOverride { m, b });
    }
    let b = b as u64;
    debug_assert_eq!(b % l, l - 1, "piece length is forced to -1 mod l");
    debug_assert_eq!((b + 1) % l, 0);
    Ok(InducedParams { l, m, a, b })
}

/// An induced `(P_l)^t` packing of `Q_n` together with its construction data.
#[derive(Clone, Debug)]
pub struct InducedPowerPacking {
    pub host: Grid,
    pub l: u64,
    pub t: usize,
    pub params: InducedParams,
    pub base_params: PackParams,
    pub placements: Vec<Placement>,
    pub uncovered: Vec<u64>,
}

impl InducedPowerPacking {
    pub fn certificate(&self) -> PackingCertificate {
        let pattern_box = Grid::path_power(self.l as u32, self.t).expect("pattern box");
        let verts: Vec<u64> = pattern_box.vertices().collect();
        let pattern = PatternGraph::induced_from_indices(pattern_box, verts).expect("full box");
        let mut cert = PackingCertificate {
            host: self.host.clone(),
            patterns: vec![pattern],
            placements: self.placements.clone(),
            uncovered: self.uncovered.clone(),
        };
        cert.canonicalize();
        cert
    }

    /// The committed uncovered count: the base packing's remainder blown up
    /// by the cube factors.
    pub fn predicted_uncovered(&self) -> u64 {
        self.base_params.predicted_uncovered << (self.t as u32 * ((1u32 << self.params.m) - 1))
    }
}

const MAX_HOST_VERTICES: u64 = 1 << 24;

pub fn induced_path_power_packing(
    l: u64,
    t: usize,
    n: usize,
    m_override: Option<u32>,
) -> Result<InducedPowerPacking, InducedError> {
    let params = induced_power_params(l, m_override)?;
    if t == 0 {
        return Err(InducedError::Hampath(HampathError::ZeroFactors));
    }
    let n_cube = (1usize << params.m) - 1;
    let base_l = params.b + 1;
    let base_min = any_power_min(base_l, t)?;
    let min = t * n_cube + base_min;
    if n < min {
        return Err(InducedError::HostTooSmall {
            l,
            t,
            n,
            m: params.m,
            min,
        });
    }
    if n >= 63 || 1u64 << n > MAX_HOST_VERTICES {
        return Err(InducedError::ResourceLimit(n));
    }
    let n_base = n - t * n_cube;
    let host = Grid::hypercube(n)?;

    let base = pack_any_path_power(base_l, t, n_base)?;
    let ram = ramras_decomposition(params.m)?;

    // cut every antipodal path into l-1-a short pieces then one long piece
    let short = (params.l - 1) as usize;
    let n_short = (params.l - 1 - params.a) as usize;
    let pieces: Vec<Vec<&[u64]>> = ram
        .paths
        .iter()
        .map(|path| {
            let mut cuts: Vec<&[u64]> = Vec::with_capacity(n_short + 1);
            for q in 0..n_short {
                cuts.push(&path[q * short..(q + 1) * short]);
            }
            cuts.push(&path[n_short * short..]);
            debug_assert_eq!(cuts.last().unwrap().len(), params.b as usize);
            cuts
        })
        .collect();

    let stair_l = staircase_index_paths(l as usize);
    let stair_long = staircase_index_paths(base_l as usize);
    let segments = (base_l / l) as usize;

    let pattern_box = Grid::path_power(l as u32, t)?;
    let mut placements = Vec::new();
    for copy in &base.copies {
        let anchor_base: u64 = copy
            .anchor
            .iter()
            .map(|&(c, v)| v as u64 * host.stride(c))
            .sum();
        // per factor: the list of induced P_l pieces as host-index offsets
        let factor_pieces: Vec<Vec<Vec<u64>>> = (0..t)
            .map(|f| {
                let block = &copy.blocks[f];
                let blk: Vec<u64> = block
                    .order
                    .iter()
                    .map(|&w| {
                        (0..block.sub_box.ndim())
                            .map(|i| {
                                block.sub_box.coord(w, i) as u64 * host.stride(block.host_coords[i])
                            })
                            .sum()
                    })
                    .collect();
                let shift = ((t - 1 - f) * n_cube) as u32;
                let mut out = Vec::new();
                for path_pieces in &pieces {
                    for (pidx, piece) in path_pieces.iter().enumerate() {
                        let cube: Vec<u64> = piece.iter().map(|&c| c << shift).collect();
                        if pidx < n_short {
                            // short piece: staircase each l-vertex sub-block
                            for sb in 0..segments {
                                for path in &stair_l {
                                    out.push(
                                        path.iter()
                                            .map(|&(h, p)| blk[sb * l as usize + h] + cube[p])
                                            .collect(),
                                    );
                                }
                            }
                        } else {
                            // long piece: staircase the whole block, then cut
                            for path in &stair_long {
                                for seg in 0..segments {
                                    out.push(
                                        path[seg * l as usize..(seg + 1) * l as usize]
                                            .iter()
                                            .map(|&(h, p)| blk[h] + cube[p])
                                            .collect::<Vec<u64>>(),
                                    );
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();

        // products across the t factors
        let mut pick = vec![0usize; t];
        loop {
            let image: Vec<u64> = pattern_box
                .vertices()
                .map(|pv| {
                    let mut idx = anchor_base;
                    for f in 0..t {
                        idx += factor_pieces[f][pick[f]][pattern_box.coord(pv, f) as usize];
                    }
                    idx
                })
                .collect();
            placements.push(Placement {
                pattern: 0,
                mode: Mode::Induced,
                image,
            });
            let mut f = 0;
            loop {
                if f == t {
                    break;
                }
                pick[f] += 1;
                if pick[f] < factor_pieces[f].len() {
                    break;
                }
                pick[f] = 0;
                f += 1;
            }
            if f == t {
                break;
            }
        }
    }

    // the base remainder crossed with the full cube factors stays uncovered
    let pad = (t * n_cube) as u32;
    let mut uncovered = Vec::with_capacity(base.uncovered.len() << pad.min(24));
    for &u in &base.uncovered {
        for suffix in 0..1u64 << pad {
            uncovered.push(u << pad | suffix);
        }
    }
    uncovered.sort_unstable();

    Ok(InducedPowerPacking {
        host,
        l,
        t,
        params,
        base_params: base.params.clone(),
        placements,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::verify_packing;

    #[test]
    fn staircase_indices_match_the_formula() {
        assert_eq!(
            staircase_index_paths(3),
            vec![vec![(0, 0), (0, 1), (1, 1)], vec![(1, 0), (2, 0), (2, 1)]]
        );
        assert_eq!(staircase_index_paths(2), vec![vec![(0, 0), (1, 0)]]);
    }

    fn corner_block() -> HamOrderedBlock {
        HamOrderedBlock {
            sub_box: Grid::hypercube(2).unwrap(),
            host_coords: vec![0, 1],
            order: vec![0, 1, 3],
        }
    }

    #[test]
    fn staircase_partitions_corner_block() {
        let cert = staircase_partition(&corner_block()).unwrap();
        assert_eq!(cert.host.dims(), &[2, 2, 2]);
        assert_eq!(cert.placements.len(), 2);
        let report = verify_packing(&cert);
        assert!(report.valid, "{:?}", report.failures);
        assert!(report
            .mode_verified
            .iter()
            .all(|m| m >= &Some(Mode::Induced)));
        // exactly the off-block column remains uncovered
        assert_eq!(report.uncovered.len(), 2);
    }

    #[test]
    fn staircase_handles_blocks_with_chords() {
        // the full square with Hamilton order 00,01,11,10 has the chord 00-10
        let block = HamOrderedBlock {
            sub_box: Grid::hypercube(2).unwrap(),
            host_coords: vec![0, 1],
            order: vec![0, 1, 3, 2],
        };
        let cert = staircase_partition(&block).unwrap();
        assert_eq!(cert.placements.len(), 3);
        let report = verify_packing(&cert);
        assert!(report.valid, "{:?}", report.failures);
        assert!(report.uncovered.is_empty());
        for mode in &report.mode_verified {
            assert!(mode >= &Some(Mode::Induced));
        }
    }

    #[test]
    fn staircase_rejects_single_vertex_block() {
        let block = HamOrderedBlock {
            sub_box: Grid::hypercube(1).unwrap(),
            host_coords: vec![0],
            order: vec![0],
        };
        assert!(matches!(
            staircase_partition(&block),
            Err(InducedError::BlockTooSmall)
        ));
    }

    #[test]
    fn parameter_arithmetic() {
        let p = induced_power_params(3, None).unwrap();
        assert_eq!((p.m, p.a, p.b), (4, 1, 14));
        let p = induced_power_params(3, Some(2)).unwrap();
        assert_eq!((p.m, p.a, p.b), (2, 1, 2));
        let p = induced_power_params(4, None).unwrap();
        assert_eq!((p.m, p.a, p.b), (4, 0, 7));
        assert!(matches!(
            induced_power_params(6, Some(2)),
            Err(InducedError::BadOverride { m: 2, b: -1 })
        ));
    }

    #[test]
    fn piece_length_congruences_hold_for_every_accepted_length() {
        for l in 2..=64u64 {
            let p = induced_power_params(l, None).unwrap();
            assert_eq!(p.b % l, l - 1, "b ≡ -1 (mod {l})");
            assert_eq!((p.b + 1) % l, 0);
            assert!((1u128 << p.m) >= (l as u128) * (l as u128));
        }
    }

    #[test]
    fn small_induced_packing_audits_clean() {
        let pack = induced_path_power_packing(3, 1, 7, Some(2)).unwrap();
        let cert = pack.certificate();
        let report = verify_packing(&cert);
        assert!(report.valid, "{:?}", report.failures.first());
        for mode in &report.mode_verified {
            assert!(mode >= &Some(Mode::Induced));
        }
        assert_eq!(pack.uncovered.len() as u64, pack.predicted_uncovered());
        assert_eq!(pack.uncovered.len(), 8); // base remainder 1, cube factor Q_3
    }

    #[test]
    fn induced_packing_reports_minimum() {
        match induced_path_power_packing(3, 1, 4, Some(2)) {
            Err(InducedError::HostTooSmall { min, .. }) => assert_eq!(min, 5),
            other => panic!("expected a sizing error, got {other:?}"),
        }
    }
}
