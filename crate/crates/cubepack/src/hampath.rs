//! Gray-code Hamilton machinery and path-power packings of hypercubes.
//!
//! `Q_m` carries the reflected-binary Hamilton cycle. When `l` divides
//! `2^m - 1`, cutting the cycle after its all-zeros vertex partitions `Q_m`
//! into `(2^m - 1)/l` ordered `l`-vertex path blocks and one leftover vertex.
//! Taking products over `Q_n = (Q_m)^r x Q_a` yields pairwise-disjoint copies
//! of `(P_l)^t` (as products of Hamilton-ordered blocks) covering everything
//! outside the cells with fewer than `t` path factors, so the uncovered count
//! is exactly `2^a * sum_{s<t} C(r,s) (2^m-1)^s`.
//!
//! Even `l` reduces to its odd core: each halving step crosses every block
//! with a fresh coordinate and splices the order into the zig-zag Hamilton
//! path of `block x Q_1`, doubling the uncovered remainder per coordinate.

use thiserror::Error;

use crate::certfile::PackingCertificate;
use crate::grid::{Grid, GridError, Mode, PatternGraph, Placement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HampathError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("l must be positive")]
    ZeroLength,
    #[error("l must be odd, got {0}")]
    EvenLength(u64),
    #[error("t must be at least 1")]
    ZeroFactors,
    #[error("n = {n} is too small for l = {l}, t = {t}; the minimum is {min}")]
    HostTooSmall {
        l: u64,
        t: usize,
        n: usize,
        min: usize,
    },
    #[error("block order is not a Hamilton path: {0}")]
    BadBlockOrder(String),
}

/// Reflected-binary Gray cycle of `Q_n`: all `2^n` vertex indices, starting
/// at the all-zeros vertex, consecutive entries (cyclically) adjacent.
pub fn gray_cycle(n: usize) -> Result<Vec<u64>, HampathError> {
    if n == 0 {
        return Err(HampathError::ZeroDimension);
    }
    if n > 62 {
        return Err(HampathError::Grid(GridError::Overflow));
    }
    Ok((0u64..1 << n).map(|i| i ^ (i >> 1)).collect())
}

/// Minimal `m >= 1` with `2^m ≡ 1 (mod l)`, for odd `l` (`m = 1` for `l = 1`).
pub fn mult_order_of_two(l: u64) -> Result<u32, HampathError> {
    if l == 0 {
        return Err(HampathError::ZeroLength);
    }
    if l % 2 == 0 {
        return Err(HampathError::EvenLength(l));
    }
    let mut pow = 1u64 % l;
    for m in 1..=64 * l.max(2) {
        pow = pow * 2 % l;
        if pow == 1 % l {
            return Ok(m as u32);
        }
    }
    unreachable!("order of 2 modulo odd l divides phi(l)")
}

/// A vertex set spanning a Hamilton path, on a subset of host coordinates.
/// `order[q]` is a vertex of `sub_box` (the box on `host_coords`, in that
/// coordinate order); consecutive entries are adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamOrderedBlock {
    pub sub_box: Grid,
    pub host_coords: Vec<usize>,
    pub order: Vec<u64>,
}

impl HamOrderedBlock {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn validate(&self) -> Result<(), HampathError> {
        if self.order.is_empty() {
            return Err(HampathError::BadBlockOrder("empty order".into()));
        }
        if self.host_coords.len() != self.sub_box.ndim() {
            return Err(HampathError::BadBlockOrder(
                "coordinate count mismatch".into(),
            ));
        }
        let mut coords = self.host_coords.clone();
        coords.sort_unstable();
        coords.dedup();
        if coords.len() != self.host_coords.len() {
            return Err(HampathError::BadBlockOrder(
                "repeated host coordinate".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &v in &self.order {
            if v >= self.sub_box.vertex_count() {
                return Err(HampathError::BadBlockOrder(format!(
                    "vertex {v} out of range"
                )));
            }
            if !seen.insert(v) {
                return Err(HampathError::BadBlockOrder(format!("vertex {v} repeated")));
            }
        }
        for w in self.order.windows(2) {
            if !self.sub_box.adjacent_idx(w[0], w[1]) {
                return Err(HampathError::BadBlockOrder(format!(
                    "consecutive entries {} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }
}

/// A product of Hamilton-ordered blocks over pairwise disjoint coordinate
/// sets, with every other host coordinate pinned by `anchor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockProductCopy {
    pub blocks: Vec<HamOrderedBlock>,
    pub anchor: Vec<(usize, u32)>,
}

impl BlockProductCopy {
    pub fn validate(&self, host: &Grid) -> Result<(), HampathError> {
        let mut covered = vec![false; host.ndim()];
        for block in &self.blocks {
            block.validate()?;
            for &c in &block.host_coords {
                if c >= host.ndim() || covered[c] {
                    return Err(HampathError::BadBlockOrder(format!(
                        "coordinate {c} reused across blocks"
                    )));
                }
                covered[c] = true;
            }
        }
        for &(c, v) in &self.anchor {
            if c >= host.ndim() || covered[c] {
                return Err(HampathError::BadBlockOrder(format!(
                    "anchor coordinate {c} clashes with a block"
                )));
            }
            covered[c] = true;
            if v >= host.dims()[c] {
                return Err(HampathError::BadBlockOrder(format!(
                    "anchor value {v} out of range"
                )));
            }
        }
        if covered.iter().any(|&c| !c) {
            return Err(HampathError::BadBlockOrder(
                "host coordinate left unassigned".into(),
            ));
        }
        Ok(())
    }

    /// The placement of the pattern box `[l_1] x .. x [l_t]` this copy induces;
    /// pattern vertex `(x_1..x_t)` maps through block `f`'s order at `x_f`.
    pub fn to_placement(&self, host: &Grid, pattern_box: &Grid, mode: Mode) -> Placement {
        let anchor_base: u64 = self
            .anchor
            .iter()
            .map(|&(c, v)| v as u64 * host.stride(c))
            .sum();
        let contributions: Vec<Vec<u64>> = self
            .blocks
            .iter()
            .map(|b| {
                b.order
                    .iter()
                    .map(|&w| {
                        (0..b.sub_box.ndim())
                            .map(|i| b.sub_box.coord(w, i) as u64 * host.stride(b.host_coords[i]))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let image: Vec<u64> = pattern_box
            .vertices()
            .map(|pv| {
                let mut idx = anchor_base;
                for (f, contrib) in contributions.iter().enumerate() {
                    idx += contrib[pattern_box.coord(pv, f) as usize];
                }
                idx
            })
            .collect();
        Placement {
            pattern: 0,
            mode,
            image,
        }
    }
}

/// Construction parameters and the committed exact uncovered count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackParams {
    pub l: u64,
    pub t: usize,
    pub n: usize,
    pub valuation: u32,
    pub odd_core: u64,
    pub m: u32,
    pub r: usize,
    pub a: usize,
    pub predicted_uncovered: u64,
}

/// `2^{t v} * 2^a * sum_{s < t} C(r, s) (2^m - 1)^s`
pub fn predicted_uncovered(m: u32, r: usize, a: usize, t: usize, valuation: u32) -> u64 {
    let seg_verts = (1u128 << m) - 1;
    let mut sum: u128 = 0;
    for s in 0..t.min(r + 1) {
        sum += binomial(r, s) * seg_verts.pow(s as u32);
    }
    let total = (sum << a) << (t as u32 * valuation);
    u64::try_from(total).expect("uncovered count fits u64 for any feasible host")
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// A packing of a hypercube by copies of `(P_l)^t` given as block products.
#[derive(Clone, Debug)]
pub struct PathPowerPacking {
    pub host: Grid,
    pub params: PackParams,
    pub copies: Vec<BlockProductCopy>,
    pub uncovered: Vec<u64>,
}

impl PathPowerPacking {
    pub fn certificate(&self) -> PackingCertificate {
        let pattern_box = Grid::path_power(self.params.l as u32, self.params.t)
            .expect("pattern box fits: it embeds in the host");
        let verts: Vec<u64> = pattern_box.vertices().collect();
        let pattern = PatternGraph::induced_from_indices(pattern_box.clone(), verts)
            .expect("full box vertex set");
        let placements: Vec<Placement> = self
            .copies
            .iter()
            .map(|c| c.to_placement(&self.host, &pattern_box, Mode::Subgraph))
            .collect();
        let mut cert = PackingCertificate {
            host: self.host.clone(),
            patterns: vec![pattern],
            placements,
            uncovered: self.uncovered.clone(),
        };
        cert.canonicalize();
        cert
    }
}

/// Packs `Q_n` by subgraph copies of `(P_l)^t` for odd `l`. Blocks are
/// consecutive Gray-cycle segments; the cycle's all-zeros vertex is the
/// leftover on every `Q_m` factor.
pub fn pack_odd_path_power(l: u64, t: usize, n: usize) -> Result<PathPowerPacking, HampathError> {
    if t == 0 {
        return Err(HampathError::ZeroFactors);
    }
    let m = mult_order_of_two(l)?;
    if n < t * m as usize {
        return Err(HampathError::HostTooSmall {
            l,
            t,
            n,
            min: t * m as usize,
        });
    }
    let host = Grid::hypercube(n)?;
    let r = n / m as usize;
    let a = n % m as usize;
    let cycle = gray_cycle(m as usize)?;
    let nseg = ((cycle.len() - 1) / l as usize) as usize;
    let segments: Vec<Vec<u64>> = (0..nseg)
        .map(|q| cycle[1 + q * l as usize..1 + (q + 1) * l as usize].to_vec())
        .collect();
    let sub_box = Grid::hypercube(m as usize)?;

    let params = PackParams {
        l,
        t,
        n,
        valuation: 0,
        odd_core: l,
        m,
        r,
        a,
        predicted_uncovered: predicted_uncovered(m, r, a, t, 0),
    };

    let mut copies = Vec::new();
    let mut uncovered = Vec::new();
    // cell choice per Q_m factor: None = leftover vertex, Some(q) = segment q
    let mut choice: Vec<Option<usize>> = vec![None; r];
    enumerate_cells(
        &mut choice,
        0,
        &mut |choice| {
            let path_factors: Vec<usize> = (0..r).filter(|&i| choice[i].is_some()).collect();
            let s = path_factors.len();
            if s < t {
                // every vertex of the cell stays uncovered
                collect_cell_vertices(n, m, r, a, choice, &segments, &mut uncovered);
                return;
            }
            let primary = &path_factors[..t];
            let secondary = &path_factors[t..];
            // iterate fixed vertices of secondary path factors and the Q_a part
            let mut sec_pick = vec![0usize; secondary.len()];
            loop {
                for y in 0..1u64 << a {
                    let mut anchor: Vec<(usize, u32)> = Vec::with_capacity(n - t * m as usize);
                    for i in 0..r {
                        if primary.contains(&i) {
                            continue;
                        }
                        let w = match choice[i] {
                            None => 0u64,
                            Some(q) => {
                                let pos = secondary.iter().position(|&f| f == i).unwrap();
                                segments[q][sec_pick[pos]]
                            }
                        };
                        for c in 0..m as usize {
                            anchor.push((i * m as usize + c, sub_box.coord(w, c)));
                        }
                    }
                    for c in 0..a {
                        anchor.push((r * m as usize + c, (y >> (a - 1 - c) & 1) as u32));
                    }
                    let blocks: Vec<HamOrderedBlock> = primary
                        .iter()
                        .map(|&i| HamOrderedBlock {
                            sub_box: sub_box.clone(),
                            host_coords: (i * m as usize..(i + 1) * m as usize).collect(),
                            order: segments[choice[i].unwrap()].clone(),
                        })
                        .collect();
                    copies.push(BlockProductCopy { blocks, anchor });
                }
                // advance secondary picks
                let mut j = 0;
                loop {
                    if j == secondary.len() {
                        return;
                    }
                    sec_pick[j] += 1;
                    if sec_pick[j] < l as usize {
                        break;
                    }
                    sec_pick[j] = 0;
                    j += 1;
                }
            }
        },
        nseg,
    );

    uncovered.sort_unstable();
    debug_assert_eq!(uncovered.len() as u64, params.predicted_uncovered);
    Ok(PathPowerPacking {
        host,
        params,
        copies,
        uncovered,
    })
}

fn enumerate_cells(
    choice: &mut Vec<Option<usize>>,
    i: usize,
    f: &mut impl FnMut(&Vec<Option<usize>>),
    nseg: usize,
) {
    if i == choice.len() {
        f(choice);
        return;
    }
    choice[i] = None;
    enumerate_cells(choice, i + 1, f, nseg);
    for q in 0..nseg {
        choice[i] = Some(q);
        enumerate_cells(choice, i + 1, f, nseg);
    }
    choice[i] = None;
}

fn collect_cell_vertices(
    n: usize,
    m: u32,
    r: usize,
    a: usize,
    choice: &[Option<usize>],
    segments: &[Vec<u64>],
    out: &mut Vec<u64>,
) {
    // vertices of the cell: product of per-factor vertex sets times Q_a
    let mut factor_sets: Vec<&[u64]> = Vec::with_capacity(r);
    const LEFTOVER: [u64; 1] = [0];
    for &c in choice {
        match c {
            None => factor_sets.push(&LEFTOVER),
            Some(q) => factor_sets.push(&segments[q]),
        }
    }
    let mut pick = vec![0usize; r];
    loop {
        let mut base: u64 = 0;
        for i in 0..r {
            base |= factor_sets[i][pick[i]] << (n - (i + 1) * m as usize);
        }
        for y in 0..1u64 << a {
            out.push(base | y);
        }
        let mut j = 0;
        loop {
            if j == r {
                return;
            }
            pick[j] += 1;
            if pick[j] < factor_sets[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

/// Smallest `n` accepted by [`pack_any_path_power`] for this `(l, t)`.
pub fn any_power_min(l: u64, t: usize) -> Result<usize, HampathError> {
    if l == 0 {
        return Err(HampathError::ZeroLength);
    }
    if t == 0 {
        return Err(HampathError::ZeroFactors);
    }
    let valuation = l.trailing_zeros();
    let odd_core = l >> valuation;
    // Power-of-two lengths tile perfectly from the one-vertex base; the odd
    // core otherwise needs t whole Q_m factors.
    if odd_core == 1 && valuation > 0 {
        Ok(t * valuation as usize)
    } else {
        Ok(t * (mult_order_of_two(odd_core)? as usize + valuation as usize))
    }
}

/// Packs `Q_n` by copies of `(P_l)^t` for any `l >= 1`, by doubling the odd
/// core's blocks once per factor of 2 in `l`. Every block keeps a certified
/// Hamilton order; given block order `b_1..b_k` and a fresh coordinate, the
/// spliced order is `(b_1,0)..(b_k,0),(b_k,1)..(b_1,1)`.
pub fn pack_any_path_power(l: u64, t: usize, n: usize) -> Result<PathPowerPacking, HampathError> {
    let min = any_power_min(l, t)?;
    if n < min {
        return Err(HampathError::HostTooSmall { l, t, n, min });
    }
    let valuation = l.trailing_zeros();
    let odd_core = l >> valuation;
    let n_base = n - t * valuation as usize;
    let base = if odd_core == 1 && valuation > 0 {
        perfect_vertex_base(t, n_base)?
    } else {
        pack_odd_path_power(odd_core, t, n_base)?
    };
    if valuation == 0 {
        return Ok(base);
    }

    let host = Grid::hypercube(n)?;
    let copies: Vec<BlockProductCopy> = base
        .copies
        .into_iter()
        .map(|mut copy| {
            for j in 0..valuation as usize {
                for (f, block) in copy.blocks.iter_mut().enumerate() {
                    let fresh = n_base + j * t + f;
                    let forward = block.order.iter().map(|&w| w << 1);
                    let backward = block.order.iter().rev().map(|&w| w << 1 | 1);
                    block.order = forward.chain(backward).collect();
                    block.host_coords.push(fresh);
                    block.sub_box = Grid::hypercube(block.sub_box.ndim() + 1)
                        .expect("block dimension bounded by n");
                }
            }
            copy
        })
        .collect();

    let pad = (t as u32 * valuation) as u64;
    let mut uncovered = Vec::with_capacity(base.uncovered.len() << pad);
    for &u in &base.uncovered {
        for suffix in 0..1u64 << pad {
            uncovered.push(u << pad | suffix);
        }
    }
    uncovered.sort_unstable();

    let params = PackParams {
        l,
        t,
        n,
        valuation,
        odd_core,
        m: base.params.m,
        r: base.params.r,
        a: base.params.a,
        predicted_uncovered: base.params.predicted_uncovered << pad,
    };
    debug_assert_eq!(uncovered.len() as u64, params.predicted_uncovered);
    Ok(PathPowerPacking {
        host,
        params,
        copies,
        uncovered,
    })
}

/// Perfect `(P_1)^t` packing: every vertex is one copy made of `t` trivial
/// blocks over empty coordinate sets. Used as the doubling base for
/// power-of-two path lengths.
fn perfect_vertex_base(t: usize, n: usize) -> Result<PathPowerPacking, HampathError> {
    let host = Grid::hypercube(n)?;
    let point = Grid::hypercube(0)?;
    let copies: Vec<BlockProductCopy> = host
        .vertices()
        .map(|u| BlockProductCopy {
            blocks: (0..t)
                .map(|_| HamOrderedBlock {
                    sub_box: point.clone(),
                    host_coords: Vec::new(),
                    order: vec![0],
                })
                .collect(),
            anchor: (0..n).map(|c| (c, host.coord(u, c))).collect(),
        })
        .collect();
    let params = PackParams {
        l: 1,
        t,
        n,
        valuation: 0,
        odd_core: 1,
        m: 1,
        r: n,
        a: 0,
        predicted_uncovered: 0,
    };
    Ok(PathPowerPacking {
        host,
        params,
        copies,
        uncovered: Vec::new(),
    })
}
