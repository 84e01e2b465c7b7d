//! Multiset covers with modular coverage targets.
//!
//! Three constructions live here: the shift-based cover whose coverage is
//! exactly `|H|` at every vertex, its lift from `Q_n` to `(P_2l)^n` through
//! the partition of `P_2l` into `l` edges, and the residue-1 cover of
//! `(P_2l)^k` by isometric copies of a pattern `H ⊆ Q_k` with `l = |H|`.
//! A congruence solver over `Z_l` acts as a constructive backstop: it decides
//! whether any multiset of a given generator set meets a coverage residue.
//!
//! The residue-1 construction recurses on the last cube coordinate. At each
//! level it takes the recursive cover of the lower slice and extends every
//! copy one layer up (`E1`, anchored at layer `p`, spilling into `p+1`) and
//! one layer down (`E2`, anchored at `p`, spilling into `p-1`). The spill
//! profiles are not constant, so the per-layer multiplicities are chosen to
//! cancel them pairwise: weights `p/2 + 1` for `E1` and `l - p/2` for `E2`
//! satisfy, for every layer `q`,
//!
//! ```text
//!   mu1(q) + mu2(q) ≡ 1 (mod l)      anchored coverage
//!   mu1(q-1) + mu2(q+1) ≡ 0 (mod l)  spill coverage from both sides
//! ```
//!
//! so the anchored parts sum to 1 and the spilled parts vanish identically.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::grid::{
    enumerate_placements, validate_placement, Grid, GridError, Mode, PatternGraph, Placement,
};
use crate::zsolve::solve_mod_linear;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("pattern ambient must be a hypercube for this construction")]
    NotHypercube,
    #[error("host dimension {n} is smaller than the pattern dimension {k}")]
    HostTooSmall { n: usize, k: usize },
    #[error("cover host does not match the expected box")]
    HostMismatch,
    #[error("generator {index} is invalid: {reason}")]
    InvalidGenerator { index: usize, reason: String },
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("internal construction failure: {0}")]
    Internal(String),
}

/// A placement together with a positive multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverEntry {
    pub placement: Placement,
    pub mult: u64,
}

/// Placements with multiplicities whose coverage hits `residue` mod `modulus`
/// at every host vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisetCover {
    pub host: Grid,
    pub patterns: Vec<PatternGraph>,
    pub entries: Vec<CoverEntry>,
    pub modulus: u64,
    pub residue: u64,
}

impl MultisetCover {
    /// Raw coverage (with multiplicities) per host vertex.
    pub fn coverage_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.host.vertex_count() as usize];
        for entry in &self.entries {
            for &v in &entry.placement.image {
                counts[v as usize] += entry.mult;
            }
        }
        counts
    }

    /// Merges duplicate placements, reduces multiplicities into `[0, modulus)`
    /// (dropping zeros) and sorts entries by canonical key then multiplicity.
    pub fn canonicalize(&mut self) {
        let mut merged: BTreeMap<(usize, Mode, Vec<u64>), u64> = BTreeMap::new();
        for entry in self.entries.drain(..) {
            *merged
                .entry((
                    entry.placement.pattern,
                    entry.placement.mode,
                    entry.placement.image,
                ))
                .or_insert(0) += entry.mult;
        }
        let mut entries: Vec<CoverEntry> = merged
            .into_iter()
            .filter_map(|((pattern, mode, image), mult)| {
                let mult = reduce_mult(mult, self.modulus)?;
                Some(CoverEntry {
                    placement: Placement {
                        pattern,
                        mode,
                        image,
                    },
                    mult,
                })
            })
            .collect();
        entries.sort_by(|a, b| {
            (a.placement.canonical_key(), a.mult).cmp(&(b.placement.canonical_key(), b.mult))
        });
        self.entries = entries;
    }
}

fn reduce_mult(m: u64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        // canonical reduction would zero every entry; coverage mod 1 does not
        // care, so multiplicity 1 is kept
        return Some(1);
    }
    match m % modulus {
        0 => None,
        r => Some(r),
    }
}

/// The cover of `Q_n` by all `2^n` shifts of `pattern`, each once. Coverage
/// is exactly `|pattern|` at every vertex, so the cover has residue 0 mod
/// `|pattern|`.
pub fn shift_l_partition(pattern: &PatternGraph, n: usize) -> Result<MultisetCover, CoverError> {
    if !pattern.ambient().is_hypercube() {
        return Err(CoverError::NotHypercube);
    }
    let k = pattern.ambient().ndim();
    if n < k {
        return Err(CoverError::HostTooSmall { n, k });
    }
    let host = Grid::hypercube(n)?;
    let pad = (n - k) as u32;
    let mut entries = Vec::with_capacity(host.vertex_count() as usize);
    for shift in host.vertices() {
        let image: Vec<u64> = pattern
            .verts()
            .iter()
            .map(|&v| (v << pad) ^ shift)
            .collect();
        entries.push(CoverEntry {
            placement: Placement {
                pattern: 0,
                mode: Mode::Induced,
                image,
            },
            mult: 1,
        });
    }
    let mut cover = MultisetCover {
        host,
        patterns: vec![pattern.clone()],
        entries,
        modulus: pattern.len() as u64,
        residue: 0,
    };
    cover.canonicalize();
    Ok(cover)
}

/// Transplants a cover of `Q_n` into every one of the `l^n` aligned `Q_n`
/// blocks of `(P_2l)^n` (block `j` of a coordinate holds values `2j, 2j+1`).
/// Exact per-vertex coverage is preserved.
pub fn lift_to_path_power(cover: &MultisetCover, l: u32) -> Result<MultisetCover, CoverError> {
    if !cover.host.is_hypercube() {
        return Err(CoverError::HostMismatch);
    }
    let n = cover.host.ndim();
    let host = Grid::path_power(2 * l, n)?;
    let mut entries = Vec::with_capacity(cover.entries.len() * (l as usize).pow(n as u32));
    let mut block = vec![0u32; n];
    loop {
        let base: u64 = (0..n).map(|i| 2 * block[i] as u64 * host.stride(i)).sum();
        for entry in &cover.entries {
            let image: Vec<u64> = entry
                .placement
                .image
                .iter()
                .map(|&v| {
                    let mut idx = base;
                    for i in 0..n {
                        idx += cover.host.coord(v, i) as u64 * host.stride(i);
                    }
                    idx
                })
                .collect();
            entries.push(CoverEntry {
                placement: Placement {
                    pattern: entry.placement.pattern,
                    mode: entry.placement.mode,
                    image,
                },
                mult: entry.mult,
            });
        }
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            block[i] += 1;
            if block[i] < l {
                break;
            }
            block[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let mut lifted = MultisetCover {
        host,
        patterns: cover.patterns.clone(),
        entries,
        modulus: cover.modulus,
        residue: cover.residue,
    };
    lifted.canonicalize();
    Ok(lifted)
}

/// An isometric embedding of a cube into a box, given per cube coordinate as
/// the pair of values the coordinate's 0 and 1 map to (necessarily adjacent).
#[derive(Clone, Debug)]
struct CubeIso {
    pairs: Vec<(u32, u32)>,
}

impl CubeIso {
    fn apply(&self, cube: &Grid, v: u64, host: &Grid) -> u64 {
        let mut idx = 0u64;
        for (i, &(v0, v1)) in self.pairs.iter().enumerate() {
            let val = if cube.coord(v, i) == 0 { v0 } else { v1 };
            idx += val as u64 * host.stride(i);
        }
        idx
    }
}

/// Residue-1 cover of `(P_2l)^k` (`l = |pattern|`) by isometric copies of
/// `pattern ⊆ Q_k`. Every returned placement is an isometric embedding, and
/// coverage is ≡ 1 (mod l) at every host vertex.
pub fn one_mod_l_partition(pattern: &PatternGraph) -> Result<MultisetCover, CoverError> {
    if !pattern.ambient().is_hypercube() {
        return Err(CoverError::NotHypercube);
    }
    let k = pattern.ambient().ndim();
    let l = pattern.len() as u64;
    let host = Grid::path_power((2 * l) as u32, k)?;
    if k == 0 {
        let mut cover = MultisetCover {
            host,
            patterns: vec![pattern.clone()],
            entries: vec![CoverEntry {
                placement: Placement {
                    pattern: 0,
                    mode: Mode::Isometric,
                    image: vec![0],
                },
                mult: 1,
            }],
            modulus: l,
            residue: 1,
        };
        cover.canonicalize();
        return Ok(cover);
    }

    let isos = residue_one_isometries(pattern.verts(), k, l);
    let cube = pattern.ambient().clone();
    let entries: Vec<CoverEntry> = isos
        .into_iter()
        .map(|(iso, mult)| {
            let image: Vec<u64> = pattern
                .verts()
                .iter()
                .map(|&v| iso.apply(&cube, v, &host))
                .collect();
            CoverEntry {
                placement: Placement {
                    pattern: 0,
                    mode: Mode::Isometric,
                    image,
                },
                mult,
            }
        })
        .collect();
    let mut cover = MultisetCover {
        host: host.clone(),
        patterns: vec![pattern.clone()],
        entries,
        modulus: l,
        residue: 1,
    };
    cover.canonicalize();

    if residue_ok(&cover) {
        return Ok(cover);
    }
    // Constructive backstop: solve for multiplicities over the full isometric
    // placement set. Not expected to be reached; kept because the recursive
    // construction and the solver are independent routes to the same object.
    let generators = enumerate_placements(pattern, &host, Mode::Isometric);
    match congruence_cover_solve(&host, &[pattern.clone()], &generators, l, 1)? {
        SolveOutcome::Solved(cover) => Ok(cover),
        SolveOutcome::Unsolvable => Err(CoverError::Internal(
            "residue-1 cover does not exist over isometries".into(),
        )),
    }
}

fn residue_ok(cover: &MultisetCover) -> bool {
    cover
        .coverage_counts()
        .iter()
        .all(|&c| c % cover.modulus == cover.residue % cover.modulus)
}

/// Recursive core: multiplicity-weighted cube isometries into `(P_2l)^k`
/// whose images of `verts` cover every box vertex ≡ 1 (mod l).
fn residue_one_isometries(verts: &[u64], k: usize, l: u64) -> Vec<(CubeIso, u64)> {
    let span = 2 * l as u32;
    if k == 1 {
        return match verts.len() {
            2 => (0..l as u32)
                .map(|i| {
                    (
                        CubeIso {
                            pairs: vec![(2 * i, 2 * i + 1)],
                        },
                        1,
                    )
                })
                .collect(),
            1 => (0..span)
                .map(|j| {
                    let partner = if j + 1 < span { j + 1 } else { j - 1 };
                    let pair = if verts[0] == 0 {
                        (j, partner)
                    } else {
                        (partner, j)
                    };
                    (CubeIso { pairs: vec![pair] }, 1)
                })
                .collect(),
            _ => unreachable!("k = 1 patterns have one or two vertices"),
        };
    }

    // split on the last cube coordinate (lowest-order index bit)
    let lower: Vec<u64> = verts
        .iter()
        .filter(|&&v| v & 1 == 0)
        .map(|&v| v >> 1)
        .collect();
    let upper: Vec<u64> = verts
        .iter()
        .filter(|&&v| v & 1 == 1)
        .map(|&v| v >> 1)
        .collect();

    if upper.is_empty() || lower.is_empty() {
        // single-layer pattern: replicate the recursive cover across every
        // layer; each host vertex lies in exactly one layer
        let (sub_verts, anchored_at_zero) = if upper.is_empty() {
            (&lower, true)
        } else {
            (&upper, false)
        };
        let sub = residue_one_isometries(sub_verts, k - 1, l);
        let mut out = Vec::with_capacity(sub.len() * span as usize);
        for p in 0..span {
            let partner = if p + 1 < span { p + 1 } else { p - 1 };
            let pair = if anchored_at_zero {
                (p, partner)
            } else {
                (partner, p)
            };
            for (iso, mult) in &sub {
                let mut pairs = iso.pairs.clone();
                pairs.push(pair);
                out.push((CubeIso { pairs }, *mult));
            }
        }
        return out;
    }

    let sub = residue_one_isometries(&lower, k - 1, l);
    let mut out = Vec::new();
    // E1(p): anchored at layer p, upper slice spills into p+1
    for p in 0..span - 1 {
        let mu = p as u64 / 2 + 1;
        for (iso, mult) in &sub {
            if let Some(m) = keep_weight(mult * mu, l) {
                let mut pairs = iso.pairs.clone();
                pairs.push((p, p + 1));
                out.push((CubeIso { pairs }, m));
            }
        }
    }
    // E2(p): anchored at layer p, upper slice spills into p-1
    for p in 1..span {
        let mu = l - p as u64 / 2;
        for (iso, mult) in &sub {
            if let Some(m) = keep_weight(mult * mu, l) {
                let mut pairs = iso.pairs.clone();
                pairs.push((p, p - 1));
                out.push((CubeIso { pairs }, m));
            }
        }
    }
    out
}

fn keep_weight(m: u64, l: u64) -> Option<u64> {
    if l == 1 {
        return Some(1);
    }
    if m % l == 0 {
        None
    } else {
        Some(m % l)
    }
}

/// Outcome of the congruence solver: either a cover, or a proof that no
/// multiset of the given generators meets the residue.
#[derive(Debug)]
pub enum SolveOutcome {
    Solved(MultisetCover),
    Unsolvable,
}

const SOLVE_CELL_BUDGET: u64 = 50_000_000;

/// Finds multiplicities `m_c ∈ [0, l)` with `Σ m_c · χ_c ≡ r` (mod `l`) at
/// every host vertex, over the given generator placements. Orbit compression
/// under the host's per-factor reflections is tried first when the generator
/// set is closed under them; the full system is solved otherwise, so
/// `Unsolvable` is exact for the given generators.
pub fn congruence_cover_solve(
    host: &Grid,
    patterns: &[PatternGraph],
    generators: &[Placement],
    modulus: u64,
    residue: u64,
) -> Result<SolveOutcome, CoverError> {
    for (index, g) in generators.iter().enumerate() {
        let pattern = patterns
            .get(g.pattern)
            .ok_or_else(|| CoverError::InvalidGenerator {
                index,
                reason: "pattern id out of range".into(),
            })?;
        let report = validate_placement(host, pattern, &g.image).map_err(|e| {
            CoverError::InvalidGenerator {
                index,
                reason: e.to_string(),
            }
        })?;
        if !report.satisfies(g.mode) {
            return Err(CoverError::InvalidGenerator {
                index,
                reason: format!("placement does not satisfy mode {}", g.mode),
            });
        }
    }
    let v = host.vertex_count();
    let c = generators.len() as u64;
    if v.saturating_mul(c.max(1)) > SOLVE_CELL_BUDGET {
        return Err(CoverError::Budget(format!(
            "incidence system of {v} vertices x {c} generators exceeds the solver budget"
        )));
    }

    if let Some(mults) = orbit_compressed_solve(host, generators, modulus, residue) {
        return Ok(SolveOutcome::Solved(build_cover(
            host, patterns, generators, &mults, modulus, residue,
        )));
    }

    let columns: Vec<Vec<u64>> = generators
        .iter()
        .map(|g| {
            let mut col = vec![0u64; v as usize];
            for &vtx in &g.image {
                col[vtx as usize] += 1;
            }
            col
        })
        .collect();
    let target = vec![residue % modulus.max(1); v as usize];
    match solve_mod_linear(&columns, &target, modulus) {
        Some(mults) => Ok(SolveOutcome::Solved(build_cover(
            host, patterns, generators, &mults, modulus, residue,
        ))),
        None => Ok(SolveOutcome::Unsolvable),
    }
}

fn build_cover(
    host: &Grid,
    patterns: &[PatternGraph],
    generators: &[Placement],
    mults: &[u64],
    modulus: u64,
    residue: u64,
) -> MultisetCover {
    let entries: Vec<CoverEntry> = generators
        .iter()
        .zip(mults)
        .filter(|&(_, &m)| m % modulus.max(2) != 0 || (modulus == 1 && m > 0))
        .map(|(g, &m)| CoverEntry {
            placement: g.clone(),
            mult: m % modulus.max(2),
        })
        .collect();
    let mut cover = MultisetCover {
        host: host.clone(),
        patterns: patterns.to_vec(),
        entries,
        modulus,
        residue,
    };
    cover.canonicalize();
    debug_assert!(residue_ok(&cover));
    cover
}

fn reflect_idx(host: &Grid, idx: u64, mask: u32) -> u64 {
    let mut out = 0u64;
    for i in 0..host.ndim() {
        let c = host.coord(idx, i);
        let c = if mask >> i & 1 == 1 {
            host.dims()[i] - 1 - c
        } else {
            c
        };
        out += c as u64 * host.stride(i);
    }
    out
}

/// Reflection-orbit fast path. Returns verified multiplicities or `None`
/// (not closed, too many factors, compressed system unsolvable, or the
/// expansion fails its check) — `None` always falls back to the full solve.
fn orbit_compressed_solve(
    host: &Grid,
    generators: &[Placement],
    modulus: u64,
    residue: u64,
) -> Option<Vec<u64>> {
    let ndim = host.ndim();
    if ndim == 0 || ndim > 12 || generators.is_empty() {
        return None;
    }
    let masks: Vec<u32> = (0..(1u32 << ndim)).collect();
    let by_image: BTreeMap<&[u64], usize> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.image.as_slice(), i))
        .collect();

    // generator orbits under per-factor reflections; require closure
    let mut orbit_of = vec![usize::MAX; generators.len()];
    let mut orbit_reps: Vec<usize> = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let orbit_id = orbit_reps.len();
        let mut members = Vec::new();
        for &mask in &masks {
            let image: Vec<u64> = g
                .image
                .iter()
                .map(|&v| reflect_idx(host, v, mask))
                .collect();
            match by_image.get(image.as_slice()) {
                Some(&j) if generators[j].pattern == g.pattern && generators[j].mode == g.mode => {
                    members.push(j)
                }
                _ => return None, // not closed under reflections
            }
        }
        members.sort_unstable();
        members.dedup();
        for &j in &members {
            if orbit_of[j] != usize::MAX && orbit_of[j] != orbit_id {
                return None;
            }
            orbit_of[j] = orbit_id;
        }
        orbit_reps.push(i);
    }

    // vertex orbit representatives
    let mut vert_rep = vec![u64::MAX; host.vertex_count() as usize];
    let mut reps = Vec::new();
    for vtx in host.vertices() {
        if vert_rep[vtx as usize] != u64::MAX {
            continue;
        }
        for &mask in &masks {
            vert_rep[reflect_idx(host, vtx, mask) as usize] = vtx;
        }
        reps.push(vtx);
    }

    // compressed incidence: orbit-sum coverage measured at each vertex rep
    let mut counts: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::new(); orbit_reps.len()];
    for (i, g) in generators.iter().enumerate() {
        for &vtx in &g.image {
            *counts[orbit_of[i]].entry(vtx).or_insert(0) += 1;
        }
    }
    let columns: Vec<Vec<u64>> = counts
        .iter()
        .map(|cnt| {
            reps.iter()
                .map(|r| *cnt.get(r).unwrap_or(&0) % modulus.max(1))
                .collect()
        })
        .collect();
    let target = vec![residue % modulus.max(1); reps.len()];
    let orbit_mults = solve_mod_linear(&columns, &target, modulus)?;

    let mults: Vec<u64> = (0..generators.len())
        .map(|i| orbit_mults[orbit_of[i]])
        .collect();
    // the compressed solution must verify on the full system
    let mut coverage = vec![0u64; host.vertex_count() as usize];
    for (g, &m) in generators.iter().zip(&mults) {
        for &vtx in &g.image {
            coverage[vtx as usize] += m;
        }
    }
    if coverage
        .iter()
        .all(|&cov| cov % modulus.max(1) == residue % modulus.max(1))
        || modulus == 1
    {
        Some(mults)
    } else {
        None
    }
}
