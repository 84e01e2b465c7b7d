//! Boxes (Cartesian products of paths), their vertices, pattern graphs and
//! placements.
//!
//! A [`Grid`] is a product of paths given by its factor lengths; the hypercube
//! `Q_n` is the all-2s box and `(P_l)^t` is the all-`l` box. Vertices are
//! coordinate tuples, stored internally as mixed-radix indices so that vertex
//! sets can be manipulated as flat integer sets. The index order equals the
//! lexicographic order of the coordinate tuples.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("every factor length must be at least 1")]
    ZeroFactor,
    #[error("vertex count overflows the address space")]
    Overflow,
    #[error("vertex has {got} coordinates but the box has {want} factors")]
    DimensionMismatch { got: usize, want: usize },
    #[error("coordinate {coord} out of range: {value} >= {len}")]
    CoordOutOfRange { coord: usize, value: u32, len: u32 },
    #[error("pattern must be non-empty")]
    EmptyPattern,
    #[error("pattern vertices must be distinct")]
    DuplicateVertex,
    #[error("edge endpoint index out of range")]
    BadEdgeIndex,
    #[error("coordinate index {0} out of range")]
    BadCoordinate(usize),
    #[error("placement map has {got} entries but the pattern has {want} vertices")]
    MapLengthMismatch { got: usize, want: usize },
    #[error("placement map is not injective")]
    NonInjective,
    #[error("placement image {0} is not a vertex of the host")]
    ImageOutOfRange(u64),
}

/// A product of paths. Factor `i` is the path on `dims[i]` vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    dims: Vec<u32>,
    strides: Vec<u64>,
    count: u64,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid{:?}", self.dims)
    }
}

impl Grid {
    pub fn new(dims: Vec<u32>) -> Result<Self, GridError> {
        if dims.iter().any(|&d| d == 0) {
            return Err(GridError::ZeroFactor);
        }
        let mut count: u64 = 1;
        for &d in &dims {
            count = count.checked_mul(d as u64).ok_or(GridError::Overflow)?;
        }
        // usize address space: vertex sets are indexed by usize downstream.
        if count > usize::MAX as u64 {
            return Err(GridError::Overflow);
        }
        let mut strides = vec![1u64; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1] as u64;
        }
        Ok(Grid {
            dims,
            strides,
            count,
        })
    }

    /// The hypercube `Q_n`.
    pub fn hypercube(n: usize) -> Result<Self, GridError> {
        Self::new(vec![2; n])
    }

    /// The box `(P_l)^t`.
    pub fn path_power(l: u32, t: usize) -> Result<Self, GridError> {
        Self::new(vec![l; t])
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn vertex_count(&self) -> u64 {
        self.count
    }

    pub fn is_hypercube(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub fn vertices(&self) -> impl Iterator<Item = u64> {
        0..self.count
    }

    /// The box with `other`'s factors appended after `self`'s.
    pub fn concat(&self, other: &Grid) -> Result<Grid, GridError> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Grid::new(dims)
    }

    pub fn index_of(&self, v: &Vertex) -> Result<u64, GridError> {
        if v.0.len() != self.dims.len() {
            return Err(GridError::DimensionMismatch {
                got: v.0.len(),
                want: self.dims.len(),
            });
        }
        let mut idx = 0u64;
        for (i, (&c, &d)) in v.0.iter().zip(&self.dims).enumerate() {
            if c >= d {
                return Err(GridError::CoordOutOfRange {
                    coord: i,
                    value: c,
                    len: d,
                });
            }
            idx += c as u64 * self.strides[i];
        }
        Ok(idx)
    }

    pub fn vertex_at(&self, idx: u64) -> Vertex {
        debug_assert!(idx < self.count);
        let mut coords = Vec::with_capacity(self.dims.len());
        for i in 0..self.dims.len() {
            coords.push(((idx / self.strides[i]) % self.dims[i] as u64) as u32);
        }
        Vertex(coords)
    }

    pub fn coord(&self, idx: u64, i: usize) -> u32 {
        ((idx / self.strides[i]) % self.dims[i] as u64) as u32
    }

    pub fn stride(&self, i: usize) -> u64 {
        self.strides[i]
    }

    /// True iff `u` and `v` differ in exactly one coordinate, and there by 1.
    pub fn adjacent(&self, u: &Vertex, v: &Vertex) -> Result<bool, GridError> {
        let ui = self.index_of(u)?;
        let vi = self.index_of(v)?;
        Ok(self.adjacent_idx(ui, vi))
    }

    pub fn adjacent_idx(&self, u: u64, v: u64) -> bool {
        self.distance_idx(u, v) == 1
    }

    /// Graph distance; in a product of paths this is the L1 distance of the
    /// coordinate tuples.
    pub fn distance(&self, u: &Vertex, v: &Vertex) -> Result<u64, GridError> {
        let ui = self.index_of(u)?;
        let vi = self.index_of(v)?;
        Ok(self.distance_idx(ui, vi))
    }

    pub fn distance_idx(&self, u: u64, v: u64) -> u64 {
        if self.is_hypercube() {
            return (u ^ v).count_ones() as u64;
        }
        let mut d = 0u64;
        for i in 0..self.dims.len() {
            let cu = (u / self.strides[i]) % self.dims[i] as u64;
            let cv = (v / self.strides[i]) % self.dims[i] as u64;
            d += cu.abs_diff(cv);
        }
        d
    }

    pub fn neighbors_idx(&self, u: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(2 * self.dims.len());
        for i in 0..self.dims.len() {
            let c = (u / self.strides[i]) % self.dims[i] as u64;
            if c > 0 {
                out.push(u - self.strides[i]);
            }
            if c + 1 < self.dims[i] as u64 {
                out.push(u + self.strides[i]);
            }
        }
        out
    }
}

/// A vertex as an explicit coordinate tuple. The canonical textual form is
/// the comma-separated coordinate list, e.g. `1,0,2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(pub Vec<u32>);

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Vertex {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(Vertex(Vec::new()));
        }
        s.split(',')
            .map(|p| p.parse::<u32>())
            .collect::<Result<_, _>>()
            .map(Vertex)
    }
}

/// How faithfully a placement embeds its pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Pattern edges map to host edges.
    Subgraph,
    /// Additionally, pattern non-edges map to host non-edges.
    Induced,
    /// Pairwise distances in the pattern's ambient box are preserved exactly.
    Isometric,
}

impl Mode {
    pub fn token(self) -> &'static str {
        match self {
            Mode::Subgraph => "subgraph",
            Mode::Induced => "induced",
            Mode::Isometric => "isometric",
        }
    }

    pub fn from_token(s: &str) -> Option<Mode> {
        match s {
            "subgraph" => Some(Mode::Subgraph),
            "induced" => Some(Mode::Induced),
            "isometric" => Some(Mode::Isometric),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Edge structure of a pattern: inherited from the ambient box, or an explicit
/// list for abstract graphs carried as a vertex set with their own edges
/// (e.g. Hamilton-ordered blocks whose path edges are not all ambient edges).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeSpec {
    Derived,
    Explicit(Vec<(usize, usize)>),
}

/// A finite graph given as a vertex subset of a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    ambient: Grid,
    verts: Vec<u64>,
    edges: EdgeSpec,
}

impl PatternGraph {
    /// Pattern whose edges are the ambient adjacencies restricted to `verts`.
    pub fn induced(ambient: Grid, verts: &[Vertex]) -> Result<Self, GridError> {
        let idx = verts
            .iter()
            .map(|v| ambient.index_of(v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::induced_from_indices(ambient, idx)
    }

    pub fn induced_from_indices(ambient: Grid, verts: Vec<u64>) -> Result<Self, GridError> {
        Self::check_verts(&ambient, &verts)?;
        Ok(PatternGraph {
            ambient,
            verts,
            edges: EdgeSpec::Derived,
        })
    }

    /// Pattern with an explicit edge list over vertex positions.
    pub fn with_edges(
        ambient: Grid,
        verts: &[Vertex],
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GridError> {
        let idx = verts
            .iter()
            .map(|v| ambient.index_of(v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_edges_from_indices(ambient, idx, edges)
    }

    pub fn with_edges_from_indices(
        ambient: Grid,
        verts: Vec<u64>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GridError> {
        Self::check_verts(&ambient, &verts)?;
        let mut canon = BTreeSet::new();
        for (a, b) in edges {
            if a >= verts.len() || b >= verts.len() || a == b {
                return Err(GridError::BadEdgeIndex);
            }
            canon.insert((a.min(b), a.max(b)));
        }
        Ok(PatternGraph {
            ambient,
            verts,
            edges: EdgeSpec::Explicit(canon.into_iter().collect()),
        })
    }

    fn check_verts(ambient: &Grid, verts: &[u64]) -> Result<(), GridError> {
        if verts.is_empty() {
            return Err(GridError::EmptyPattern);
        }
        let mut seen = BTreeSet::new();
        for &v in verts {
            if v >= ambient.vertex_count() {
                return Err(GridError::ImageOutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(GridError::DuplicateVertex);
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> &Grid {
        &self.ambient
    }

    pub fn verts(&self) -> &[u64] {
        &self.verts
    }

    pub fn vert_coords(&self, i: usize) -> Vertex {
        self.ambient.vertex_at(self.verts[i])
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty vertex sets
    }

    pub fn edge_spec(&self) -> &EdgeSpec {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        match &self.edges {
            EdgeSpec::Derived => self.ambient.adjacent_idx(self.verts[i], self.verts[j]),
            EdgeSpec::Explicit(list) => {
                let key = (i.min(j), i.max(j));
                list.binary_search(&key).is_ok()
            }
        }
    }

    /// Restriction to `coord = value`, with the coordinate dropped from the
    /// ambient box. Returns `None` for the empty slice (patterns are non-empty
    /// by construction, but emptiness of a slice is meaningful to callers).
    pub fn slice(&self, coord: usize, value: u32) -> Result<Option<PatternGraph>, GridError> {
        if coord >= self.ambient.ndim() {
            return Err(GridError::BadCoordinate(coord));
        }
        if value >= self.ambient.dims()[coord] {
            return Err(GridError::CoordOutOfRange {
                coord,
                value,
                len: self.ambient.dims()[coord],
            });
        }
        let mut dims = self.ambient.dims().to_vec();
        dims.remove(coord);
        let sub = Grid::new(dims)?;
        let mut kept = Vec::new();
        let mut kept_pos = Vec::new();
        for (pos, &v) in self.verts.iter().enumerate() {
            if self.ambient.coord(v, coord) == value {
                let mut coords = self.ambient.vertex_at(v).0;
                coords.remove(coord);
                kept.push(sub.index_of(&Vertex(coords))?);
                kept_pos.push(pos);
            }
        }
        if kept.is_empty() {
            return Ok(None);
        }
        let edges = match &self.edges {
            EdgeSpec::Derived => EdgeSpec::Derived,
            EdgeSpec::Explicit(list) => {
                let mut out = Vec::new();
                for (a, b) in list {
                    let (na, nb) = (
                        kept_pos.iter().position(|&p| p == *a),
                        kept_pos.iter().position(|&p| p == *b),
                    );
                    if let (Some(na), Some(nb)) = (na, nb) {
                        out.push((na, nb));
                    }
                }
                EdgeSpec::Explicit(out)
            }
        };
        Ok(Some(PatternGraph {
            ambient: sub,
            verts: kept,
            edges,
        }))
    }
}

/// One copy of a pattern in a host. `image[i]` is the host vertex that the
/// `i`-th pattern vertex maps to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Placement {
    pub pattern: usize,
    pub mode: Mode,
    pub image: Vec<u64>,
}

impl Placement {
    /// Canonical sort key: sorted image vertex list, then the map itself.
    pub fn canonical_key(&self) -> (Vec<u64>, Vec<u64>) {
        let mut sorted = self.image.clone();
        sorted.sort_unstable();
        (sorted, self.image.clone())
    }
}

/// Which mode predicates a placement satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub subgraph: bool,
    pub induced: bool,
    pub isometric: bool,
}

impl ValidityReport {
    pub fn satisfies(&self, mode: Mode) -> bool {
        match mode {
            Mode::Subgraph => self.subgraph,
            Mode::Induced => self.induced,
            Mode::Isometric => self.isometric,
        }
    }

    /// Strongest mode along the subgraph < induced < isometric chain.
    pub fn strongest(&self) -> Option<Mode> {
        if self.subgraph && self.induced && self.isometric {
            Some(Mode::Isometric)
        } else if self.subgraph && self.induced {
            Some(Mode::Induced)
        } else if self.subgraph {
            Some(Mode::Subgraph)
        } else {
            None
        }
    }
}

/// Checks the mode predicates of a map from `pattern` into `host`.
///
/// Structural defects (wrong length, out-of-range images, repeated images)
/// are errors; failing a mode predicate is reported, not an error.
pub fn validate_placement(
    host: &Grid,
    pattern: &PatternGraph,
    image: &[u64],
) -> Result<ValidityReport, GridError> {
    if image.len() != pattern.len() {
        return Err(GridError::MapLengthMismatch {
            got: image.len(),
            want: pattern.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for &v in image {
        if v >= host.vertex_count() {
            return Err(GridError::ImageOutOfRange(v));
        }
        if !seen.insert(v) {
            return Err(GridError::NonInjective);
        }
    }
    let k = pattern.len();
    let mut subgraph = true;
    let mut induced = true;
    let mut isometric = true;
    for i in 0..k {
        for j in (i + 1)..k {
            let host_dist = host.distance_idx(image[i], image[j]);
            let pat_dist = pattern
                .ambient
                .distance_idx(pattern.verts[i], pattern.verts[j]);
            if host_dist != pat_dist {
                isometric = false;
            }
            if pattern.has_edge(i, j) {
                if host_dist != 1 {
                    subgraph = false;
                    induced = false;
                }
            } else if host_dist == 1 {
                induced = false;
            }
        }
    }
    induced &= subgraph;
    Ok(ValidityReport {
        subgraph,
        induced,
        isometric,
    })
}

/// All placements of `pattern` into `host` generated by injecting the
/// pattern's ambient factors into host factors, translating and reflecting
/// each factor, and fixing the unused host coordinates, filtered by the mode
/// predicate. Each distinct map is emitted exactly once, in the lexicographic
/// order of its canonical key.
pub fn enumerate_placements(pattern: &PatternGraph, host: &Grid, mode: Mode) -> Vec<Placement> {
    let k = pattern.ambient.ndim();
    let n = host.ndim();
    let mut out: BTreeSet<(Vec<u64>, Vec<u64>)> = BTreeSet::new();
    if k > n {
        return Vec::new();
    }

    let mut targets = Vec::with_capacity(k);
    let mut used = vec![false; n];
    enumerate_injections(pattern, host, mode, &mut targets, &mut used, &mut out);

    out.into_iter()
        .map(|(_, image)| Placement {
            pattern: 0,
            mode,
            image,
        })
        .collect()
}

fn enumerate_injections(
    pattern: &PatternGraph,
    host: &Grid,
    mode: Mode,
    targets: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut BTreeSet<(Vec<u64>, Vec<u64>)>,
) {
    let k = pattern.ambient.ndim();
    if targets.len() == k {
        emit_arrangements(pattern, host, mode, targets, used, out);
        return;
    }
    let i = targets.len();
    for h in 0..host.ndim() {
        if used[h] || pattern.ambient.dims()[i] > host.dims()[h] {
            continue;
        }
        used[h] = true;
        targets.push(h);
        enumerate_injections(pattern, host, mode, targets, used, out);
        targets.pop();
        used[h] = false;
    }
}

fn emit_arrangements(
    pattern: &PatternGraph,
    host: &Grid,
    mode: Mode,
    targets: &[usize],
    used: &[bool],
    out: &mut BTreeSet<(Vec<u64>, Vec<u64>)>,
) {
    let k = pattern.ambient.ndim();
    // Per mapped factor: (offset, reflected). Reflection is skipped for
    // length-1 factors where it is the identity.
    let mut arrangements: Vec<Vec<(u32, bool)>> = Vec::with_capacity(k);
    for (i, &h) in targets.iter().enumerate() {
        let pl = pattern.ambient.dims()[i];
        let hl = host.dims()[h];
        let mut opts = Vec::new();
        for off in 0..=(hl - pl) {
            opts.push((off, false));
            if pl > 1 {
                opts.push((off, true));
            }
        }
        arrangements.push(opts);
    }
    let unused: Vec<usize> = (0..host.ndim()).filter(|&h| !used[h]).collect();

    let mut pick = vec![0usize; k];
    loop {
        // fills over unused coordinates
        let mut fill = vec![0u32; unused.len()];
        loop {
            let image = apply_map(pattern, host, targets, &pick, &arrangements, &unused, &fill);
            if let Ok(report) = validate_placement(host, pattern, &image) {
                if report.satisfies(mode) {
                    let mut sorted = image.clone();
                    sorted.sort_unstable();
                    out.insert((sorted, image));
                }
            }
            // next fill
            let mut j = 0;
            loop {
                if j == unused.len() {
                    break;
                }
                fill[j] += 1;
                if fill[j] < host.dims()[unused[j]] {
                    break;
                }
                fill[j] = 0;
                j += 1;
            }
            if j == unused.len() {
                break;
            }
        }
        // next arrangement pick
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            pick[i] += 1;
            if pick[i] < arrangements[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn apply_map(
    pattern: &PatternGraph,
    host: &Grid,
    targets: &[usize],
    pick: &[usize],
    arrangements: &[Vec<(u32, bool)>],
    unused: &[usize],
    fill: &[u32],
) -> Vec<u64> {
    let k = pattern.ambient.ndim();
    let mut base = 0u64;
    for (j, &h) in unused.iter().enumerate() {
        base += fill[j] as u64 * host.stride(h);
    }
    pattern
        .verts()
        .iter()
        .map(|&pv| {
            let mut idx = base;
            for i in 0..k {
                let c = pattern.ambient.coord(pv, i);
                let (off, refl) = arrangements[i][pick[i]];
                let len = pattern.ambient.dims()[i];
                let val = if refl { off + (len - 1 - c) } else { off + c };
                idx += val as u64 * host.stride(targets[i]);
            }
            idx
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize) -> Grid {
        Grid::hypercube(n).unwrap()
    }

    fn vx(coords: &[u32]) -> Vertex {
        Vertex(coords.to_vec())
    }

    #[test]
    fn adjacency_in_q2() {
        let g = q(2);
        assert!(g.adjacent(&vx(&[0, 0]), &vx(&[0, 1])).unwrap());
        assert!(!g.adjacent(&vx(&[0, 0]), &vx(&[1, 1])).unwrap());
    }

    #[test]
    fn adjacency_in_p3xp3() {
        let g = Grid::new(vec![3, 3]).unwrap();
        assert!(g.adjacent(&vx(&[0, 1]), &vx(&[0, 2])).unwrap());
        assert!(!g.adjacent(&vx(&[0, 0]), &vx(&[0, 2])).unwrap());
    }

    #[test]
    fn adjacency_rejects_dimension_mismatch() {
        let g = q(2);
        assert_eq!(
            g.adjacent(&vx(&[0, 0, 0]), &vx(&[0, 1])).unwrap_err(),
            GridError::DimensionMismatch { got: 3, want: 2 }
        );
    }

    #[test]
    fn distances() {
        let g = q(3);
        assert_eq!(g.distance(&vx(&[0, 0, 0]), &vx(&[1, 1, 1])).unwrap(), 3);
        assert_eq!(g.distance(&vx(&[1, 0, 1]), &vx(&[1, 0, 1])).unwrap(), 0);
        let p66 = Grid::new(vec![6, 6]).unwrap();
        // frozen from the breadth-first-search oracle in the proptest below
        assert_eq!(p66.distance(&vx(&[0, 5]), &vx(&[5, 0])).unwrap(), 10);
    }

    fn bfs_distance(g: &Grid, from: u64, to: u64) -> u64 {
        let mut dist = vec![u64::MAX; g.vertex_count() as usize];
        let mut queue = std::collections::VecDeque::new();
        dist[from as usize] = 0;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for w in g.neighbors_idx(u) {
                if dist[w as usize] == u64::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist[to as usize]
    }

    #[test]
    fn vertex_roundtrip() {
        let g = Grid::new(vec![3, 2, 4]).unwrap();
        for idx in g.vertices() {
            assert_eq!(g.index_of(&g.vertex_at(idx)).unwrap(), idx);
        }
    }

    #[test]
    fn overflow_rejected() {
        assert_eq!(
            Grid::new(vec![u32::MAX; 3]).unwrap_err(),
            GridError::Overflow
        );
        assert_eq!(Grid::new(vec![2, 0]).unwrap_err(), GridError::ZeroFactor);
    }

    #[test]
    fn identity_placement_is_induced_and_isometric() {
        let g = q(2);
        let p = PatternGraph::induced(g.clone(), &[vx(&[0, 0]), vx(&[0, 1]), vx(&[1, 1])]).unwrap();
        let image = p.verts().to_vec();
        let rep = validate_placement(&g, &p, &image).unwrap();
        assert!(rep.induced && rep.isometric);
        assert_eq!(rep.strongest(), Some(Mode::Isometric));
    }

    #[test]
    fn gray_segment_is_subgraph_not_induced() {
        // path pattern on 4 vertices mapped onto 000,001,011,010: the ends
        // are adjacent in the host, so the copy is not induced.
        let host = q(3);
        let amb = q(3);
        let p = PatternGraph::induced(
            amb,
            &[
                vx(&[0, 0, 0]),
                vx(&[0, 0, 1]),
                vx(&[0, 1, 1]),
                vx(&[1, 1, 1]),
            ],
        )
        .unwrap();
        let image = vec![
            host.index_of(&vx(&[0, 0, 0])).unwrap(),
            host.index_of(&vx(&[0, 0, 1])).unwrap(),
            host.index_of(&vx(&[0, 1, 1])).unwrap(),
            host.index_of(&vx(&[0, 1, 0])).unwrap(),
        ];
        let rep = validate_placement(&host, &p, &image).unwrap();
        assert!(rep.subgraph);
        assert!(!rep.induced);
        assert_eq!(rep.strongest(), Some(Mode::Subgraph));
    }

    #[test]
    fn cross_cube_isometric() {
        let host = q(3);
        let p = PatternGraph::induced(q(2), &[vx(&[0, 0]), vx(&[0, 1]), vx(&[1, 1])]).unwrap();
        let image = vec![
            host.index_of(&vx(&[0, 0, 0])).unwrap(),
            host.index_of(&vx(&[0, 0, 1])).unwrap(),
            host.index_of(&vx(&[0, 1, 1])).unwrap(),
        ];
        let rep = validate_placement(&host, &p, &image).unwrap();
        assert!(rep.isometric && rep.induced);
    }

    #[test]
    fn validate_rejects_non_injective() {
        let g = q(1);
        let p = PatternGraph::induced(g.clone(), &[vx(&[0]), vx(&[1])]).unwrap();
        assert_eq!(
            validate_placement(&g, &p, &[0, 0]).unwrap_err(),
            GridError::NonInjective
        );
    }

    #[test]
    fn enumerate_edges_in_q2() {
        // single edge into Q_2: 4 undirected edges, both orientations each
        let host = q(2);
        let p = PatternGraph::induced(q(1), &[vx(&[0]), vx(&[1])]).unwrap();
        let placements = enumerate_placements(&p, &host, Mode::Induced);
        assert_eq!(placements.len(), 8);
        let sets: BTreeSet<Vec<u64>> = placements
            .iter()
            .map(|pl| {
                let mut s = pl.image.clone();
                s.sort_unstable();
                s
            })
            .collect();
        assert_eq!(sets.len(), 4);
    }

    #[test]
    fn enumerate_corner_paths_isometric() {
        // all isometric images of the corner path are its rotations and
        // reflections; cross-checked against a direct filter over all maps
        let host = q(2);
        let p = PatternGraph::induced(q(2), &[vx(&[0, 0]), vx(&[0, 1]), vx(&[1, 1])]).unwrap();
        let placements = enumerate_placements(&p, &host, Mode::Isometric);

        let mut brute: BTreeSet<Vec<u64>> = BTreeSet::new();
        for a in 0..4u64 {
            for b in 0..4u64 {
                for c in 0..4u64 {
                    if a == b || a == c || b == c {
                        continue;
                    }
                    let image = vec![a, b, c];
                    if validate_placement(&host, &p, &image).unwrap().isometric {
                        brute.insert(image);
                    }
                }
            }
        }
        let ours: BTreeSet<Vec<u64>> = placements.iter().map(|pl| pl.image.clone()).collect();
        assert_eq!(ours, brute);
        assert_eq!(placements.len(), 8);
        let sets: BTreeSet<Vec<u64>> = placements
            .iter()
            .map(|pl| {
                let mut s = pl.image.clone();
                s.sort_unstable();
                s
            })
            .collect();
        assert_eq!(sets.len(), 4);
    }

    #[test]
    fn enumerate_pattern_larger_than_host() {
        let host = q(1);
        let p = PatternGraph::induced(q(2), &[vx(&[0, 0]), vx(&[0, 1]), vx(&[1, 0]), vx(&[1, 1])])
            .unwrap();
        assert!(enumerate_placements(&p, &host, Mode::Subgraph).is_empty());
    }

    #[test]
    fn enumerate_is_duplicate_free_and_valid() {
        let host = Grid::new(vec![4, 3]).unwrap();
        let p = PatternGraph::induced(q(2), &[vx(&[0, 0]), vx(&[0, 1]), vx(&[1, 1])]).unwrap();
        for mode in [Mode::Subgraph, Mode::Induced, Mode::Isometric] {
            let placements = enumerate_placements(&p, &host, mode);
            let mut seen = BTreeSet::new();
            for pl in &placements {
                assert!(seen.insert(pl.image.clone()), "duplicate map emitted");
                assert!(validate_placement(&host, &p, &pl.image)
                    .unwrap()
                    .satisfies(mode));
            }
            // emitted in canonical order
            let keys: Vec<_> = placements.iter().map(|pl| pl.canonical_key()).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted);
        }
    }

    #[test]
    fn slice_examples() {
        let p = PatternGraph::induced(q(2), &[vx(&[0, 0]), vx(&[0, 1]), vx(&[1, 1])]).unwrap();
        // restrict the second coordinate
        let lower = p.slice(1, 0).unwrap().unwrap();
        assert_eq!(lower.verts(), &[0]);
        assert_eq!(lower.ambient().ndim(), 1);
        let upper = p.slice(1, 1).unwrap().unwrap();
        assert_eq!(upper.verts(), &[0, 1]);

        let full =
            PatternGraph::induced(q(2), &[vx(&[0, 0]), vx(&[0, 1]), vx(&[1, 0]), vx(&[1, 1])])
                .unwrap();
        for coord in 0..2 {
            for val in 0..2 {
                let s = full.slice(coord, val).unwrap().unwrap();
                assert_eq!(s.len(), 2);
                assert_eq!(s.ambient().dims(), &[2]);
            }
        }
    }

    #[test]
    fn slice_can_be_empty() {
        let p = PatternGraph::induced(q(2), &[vx(&[0, 0]), vx(&[0, 1])]).unwrap();
        assert!(p.slice(0, 1).unwrap().is_none());
    }

    #[test]
    fn empty_pattern_rejected() {
        assert_eq!(
            PatternGraph::induced(q(2), &[]).unwrap_err(),
            GridError::EmptyPattern
        );
    }

    #[test]
    fn vertex_text_roundtrip() {
        let v = vx(&[1, 0, 2]);
        assert_eq!(v.to_string(), "1,0,2");
        assert_eq!("1,0,2".parse::<Vertex>().unwrap(), v);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_grid() -> impl Strategy<Value = Grid> {
            proptest::collection::vec(1u32..5, 1..5)
                .prop_filter("bounded vertex count", |dims| {
                    dims.iter().map(|&d| d as u64).product::<u64>() <= 10_000
                })
                .prop_map(|dims| Grid::new(dims).unwrap())
        }

        proptest! {
            #[test]
            fn l1_equals_bfs(g in small_grid(), seed in 0u64..1_000_000) {
                let n = g.vertex_count();
                let u = seed % n;
                let v = (seed / n) % n;
                prop_assert_eq!(g.distance_idx(u, v), bfs_distance(&g, u, v));
            }

            #[test]
            fn adjacent_iff_distance_one(g in small_grid(), seed in 0u64..1_000_000) {
                let n = g.vertex_count();
                let u = seed % n;
                let v = (seed / n) % n;
                prop_assert_eq!(g.adjacent_idx(u, v), g.distance_idx(u, v) == 1);
            }

            #[test]
            fn mode_chain_on_derived_patterns(seed in 0u64..1_000_000) {
                // isometric => induced => subgraph for patterns with derived edges
                let host = Grid::new(vec![3, 3]).unwrap();
                let amb = Grid::hypercube(2).unwrap();
                let mut vs = vec![seed % 4, (seed / 4) % 4, (seed / 16) % 4];
                vs.sort_unstable();
                vs.dedup();
                let p = PatternGraph::induced_from_indices(amb, vs.clone()).unwrap();
                let mut image = Vec::new();
                let mut x = seed / 64;
                for _ in 0..vs.len() {
                    image.push(x % 9);
                    x /= 9;
                }
                image.sort_unstable();
                image.dedup();
                if image.len() == vs.len() {
                    let rep = validate_placement(&host, &p, &image).unwrap();
                    if rep.isometric {
                        prop_assert!(rep.induced);
                    }
                    if rep.induced {
                        prop_assert!(rep.subgraph);
                    }
                }
            }
        }
    }
}
