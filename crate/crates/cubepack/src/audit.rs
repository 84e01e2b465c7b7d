//! Independent verification of certificates.
//!
//! Every check here is a pure function of the certificate it inspects and
//! never trusts the constructors: disjointness, per-placement mode validity
//! and uncovered lists are recomputed from scratch. The codimension checks
//! and the separating-family audit act on packings by powers of the
//! three-vertex path inside hypercubes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::certfile::PackingCertificate;
use crate::grid::{validate_placement, Grid, Mode, PatternGraph, Placement};
use crate::modcover::MultisetCover;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("invalid copy: {0}")]
    InvalidCopy(String),
    #[error("intersection fits none of the admissible classes: {0}")]
    ClassificationFailure(String),
    #[error("host must be a hypercube for this audit")]
    NotHypercube,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditFailure {
    pub placement: Option<usize>,
    pub reason: String,
}

/// Outcome of verifying a packing certificate or multiset cover.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub valid: bool,
    /// strongest mode verified per placement (`None` when structurally broken)
    pub mode_verified: Vec<Option<Mode>>,
    /// vertices covered by no placement
    pub uncovered: Vec<u64>,
    /// raw coverage count -> number of vertices
    pub coverage_counts: BTreeMap<u64, u64>,
    /// coverage residue -> number of vertices (modulo the cover's modulus;
    /// equal to `coverage_counts` for packings)
    pub coverage_histogram: BTreeMap<u64, u64>,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        let _ = write!(out, "\"valid\":{}", self.valid);
        let _ = write!(out, ",\"placements\":{}", self.mode_verified.len());
        let _ = write!(out, ",\"uncovered_count\":{}", self.uncovered.len());
        out.push_str(",\"coverage_counts\":{");
        for (i, (count, verts)) in self.coverage_counts.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{count}\":{verts}");
        }
        out.push_str("},\"residue_histogram\":{");
        for (i, (residue, verts)) in self.coverage_histogram.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{residue}\":{verts}");
        }
        out.push_str("},\"failures\":[");
        for (i, f) in self.failures.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match f.placement {
                Some(id) => {
                    let _ = write!(out, "{{\"placement\":{id},\"reason\":\"{}\"}}", f.reason);
                }
                None => {
                    let _ = write!(out, "{{\"placement\":null,\"reason\":\"{}\"}}", f.reason);
                }
            }
        }
        out.push_str("]}");
        out
    }
}

fn placement_modes(
    host: &Grid,
    patterns: &[PatternGraph],
    placements: impl Iterator<Item = (usize, Placement)>,
    failures: &mut Vec<AuditFailure>,
) -> Vec<Option<Mode>> {
    let mut modes = Vec::new();
    for (id, pl) in placements {
        let Some(pattern) = patterns.get(pl.pattern) else {
            failures.push(AuditFailure {
                placement: Some(id),
                reason: format!("pattern id {} out of range", pl.pattern),
            });
            modes.push(None);
            continue;
        };
        match validate_placement(host, pattern, &pl.image) {
            Err(e) => {
                failures.push(AuditFailure {
                    placement: Some(id),
                    reason: e.to_string(),
                });
                modes.push(None);
            }
            Ok(report) => {
                if !report.satisfies(pl.mode) {
                    failures.push(AuditFailure {
                        placement: Some(id),
                        reason: format!("declared mode {} not satisfied", pl.mode),
                    });
                }
                modes.push(report.strongest());
            }
        }
    }
    modes
}

/// Checks pairwise disjointness, per-placement mode validity, and that the
/// certificate's uncovered list equals the host minus the placement union.
pub fn verify_packing(cert: &PackingCertificate) -> AuditReport {
    let mut failures = Vec::new();
    let mode_verified = placement_modes(
        &cert.host,
        &cert.patterns,
        cert.placements.iter().cloned().enumerate(),
        &mut failures,
    );

    let nverts = cert.host.vertex_count() as usize;
    let mut owner: Vec<Option<usize>> = vec![None; nverts];
    let mut coverage = vec![0u64; nverts];
    for (id, pl) in cert.placements.iter().enumerate() {
        for &v in &pl.image {
            if v >= nverts as u64 {
                continue; // already reported
            }
            coverage[v as usize] += 1;
            match owner[v as usize] {
                None => owner[v as usize] = Some(id),
                Some(first) => failures.push(AuditFailure {
                    placement: Some(id),
                    reason: format!(
                        "vertex {} already covered by placement {first}",
                        cert.host.vertex_at(v)
                    ),
                }),
            }
        }
    }

    let uncovered: Vec<u64> = (0..nverts as u64)
        .filter(|&v| coverage[v as usize] == 0)
        .collect();
    let mut claimed = cert.uncovered.clone();
    claimed.sort_unstable();
    claimed.dedup();
    if claimed != uncovered {
        failures.push(AuditFailure {
            placement: None,
            reason: format!(
                "uncovered list mismatch: certificate claims {}, audit finds {}",
                claimed.len(),
                uncovered.len()
            ),
        });
    }

    let mut coverage_counts = BTreeMap::new();
    for &c in &coverage {
        *coverage_counts.entry(c).or_insert(0u64) += 1;
    }
    AuditReport {
        valid: failures.is_empty(),
        mode_verified,
        uncovered,
        coverage_histogram: coverage_counts.clone(),
        coverage_counts,
        failures,
    }
}

/// Checks that weighted coverage hits the target residue at every host
/// vertex and that each placement satisfies its declared mode.
pub fn verify_multiset(cover: &MultisetCover) -> AuditReport {
    let mut failures = Vec::new();
    let mode_verified = placement_modes(
        &cover.host,
        &cover.patterns,
        cover
            .entries
            .iter()
            .map(|e| e.placement.clone())
            .enumerate(),
        &mut failures,
    );
    for (id, entry) in cover.entries.iter().enumerate() {
        if entry.mult == 0 {
            failures.push(AuditFailure {
                placement: Some(id),
                reason: "multiplicity must be at least 1".into(),
            });
        }
    }

    let modulus = cover.modulus.max(1);
    let counts = cover.coverage_counts();
    let mut bad = 0u64;
    let mut coverage_counts = BTreeMap::new();
    let mut coverage_histogram = BTreeMap::new();
    for &c in &counts {
        *coverage_counts.entry(c).or_insert(0u64) += 1;
        *coverage_histogram.entry(c % modulus).or_insert(0u64) += 1;
        if c % modulus != cover.residue % modulus {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(AuditFailure {
            placement: None,
            reason: format!("coverage misses the target residue at {bad} vertices"),
        });
    }
    let uncovered: Vec<u64> = (0..cover.host.vertex_count())
        .filter(|&v| counts[v as usize] == 0)
        .collect();
    AuditReport {
        valid: failures.is_empty(),
        mode_verified,
        uncovered,
        coverage_counts,
        coverage_histogram,
        failures,
    }
}

/// Intersection type of a path-power copy with a codimension-1 halfspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Codim1Class {
    Empty,
    P3PowKm1,
    P2xP3PowKm1,
    P3PowK,
}

impl Codim1Class {
    pub fn token(self) -> &'static str {
        match self {
            Codim1Class::Empty => "EMPTY",
            Codim1Class::P3PowKm1 => "P3_POW_KM1",
            Codim1Class::P2xP3PowKm1 => "P2_X_P3_POW_KM1",
            Codim1Class::P3PowK => "P3_POW_K",
        }
    }
}

/// Classifies the intersection of a `(P_3)^k` copy with the halfspace
/// `coordinate = side` of its hypercube host. The intersection is decoded in
/// pattern coordinates and must factor as a product of per-factor sets that
/// are full, an adjacent pair, or a single vertex; anything else raises
/// `ClassificationFailure`, which a valid copy can never do.
pub fn classify_codim1_intersection(
    host: &Grid,
    pattern: &PatternGraph,
    placement: &Placement,
    coord: usize,
    side: u32,
) -> Result<Codim1Class, AuditError> {
    if !host.is_hypercube() {
        return Err(AuditError::NotHypercube);
    }
    let k = pattern.ambient().ndim();
    if pattern.ambient().dims().iter().any(|&d| d != 3)
        || pattern.len() as u64 != pattern.ambient().vertex_count()
    {
        return Err(AuditError::InvalidCopy(
            "pattern is not a full power of P_3".into(),
        ));
    }
    let report = validate_placement(host, pattern, &placement.image)
        .map_err(|e| AuditError::InvalidCopy(e.to_string()))?;
    if !report.subgraph {
        return Err(AuditError::InvalidCopy(
            "pattern edges are not mapped to edges".into(),
        ));
    }
    if coord >= host.ndim() || side > 1 {
        return Err(AuditError::InvalidCopy("halfspace out of range".into()));
    }

    // pattern vertices (ambient coordinates) landing in the halfspace
    let members: Vec<u64> = (0..pattern.len())
        .filter(|&i| host.coord(placement.image[i], coord) == side)
        .map(|i| pattern.verts()[i])
        .collect();
    if members.is_empty() {
        return Ok(Codim1Class::Empty);
    }
    let mut projections: Vec<std::collections::BTreeSet<u32>> = vec![Default::default(); k];
    for &v in &members {
        for f in 0..k {
            projections[f].insert(pattern.ambient().coord(v, f));
        }
    }
    let product: u64 = projections.iter().map(|p| p.len() as u64).product();
    if product != members.len() as u64 {
        return Err(AuditError::ClassificationFailure(
            "intersection is not a coordinate product".into(),
        ));
    }
    let mut singletons = 0usize;
    let mut pairs = 0usize;
    for p in &projections {
        let vals: Vec<u32> = p.iter().copied().collect();
        match vals.as_slice() {
            [0, 1, 2] => {}
            [_] => singletons += 1,
            [a, b] if b - a == 1 => pairs += 1,
            other => {
                return Err(AuditError::ClassificationFailure(format!(
                    "factor projection {other:?} is neither full, adjacent pair nor singleton"
                )))
            }
        }
    }
    match (singletons, pairs) {
        (0, 0) => Ok(Codim1Class::P3PowK),
        (1, 0) => Ok(Codim1Class::P3PowKm1),
        (0, 1) => Ok(Codim1Class::P2xP3PowKm1),
        _ => Err(AuditError::ClassificationFailure(format!(
            "{singletons} collapsed and {pairs} halved factors"
        ))),
    }
}

/// Result of the separating-family audit of an uncovered vertex set.
#[derive(Clone, Debug)]
pub struct SeparatingReport {
    pub k: usize,
    pub is_separating: bool,
    /// on failure, an unseparated ordered pair of disjoint k-subsets of
    /// coordinates (0-based)
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub size: usize,
    /// the informational lower bound `k * log2(n)`
    pub bound: f64,
    pub meets_bound: bool,
}

impl SeparatingReport {
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        let _ = write!(
            out,
            "\"k\":{},\"is_separating\":{},\"size\":{},\"bound\":{:.4},\"meets_bound\":{}",
            self.k, self.is_separating, self.size, self.bound, self.meets_bound
        );
        if let Some((a, b)) = &self.witness {
            let _ = write!(out, ",\"witness\":[{a:?},{b:?}]");
        }
        out.push('}');
        out
    }
}

/// Checks that the subsets of `[n]` corresponding to `uncovered` vertices of
/// `Q_n` separate ordered pairs of disjoint `k`-subsets: for each pair
/// `(A, B)` some uncovered vertex contains all of `A` and none of `B`.
/// Vertices map to subsets by taking the coordinates equal to 1.
pub fn separating_audit(n: usize, uncovered: &[u64], k: usize) -> SeparatingReport {
    let coord_is_one = |v: u64, i: usize| v >> (n - 1 - i) & 1 == 1;
    let mut subsets = Vec::new();
    enumerate_subsets(n, k, &mut Vec::new(), &mut subsets);
    let mut witness = None;
    'outer: for a in &subsets {
        for b in &subsets {
            if a.iter().any(|i| b.contains(i)) {
                continue;
            }
            let separated = uncovered.iter().any(|&v| {
                a.iter().all(|&i| coord_is_one(v, i)) && b.iter().all(|&j| !coord_is_one(v, j))
            });
            if !separated {
                witness = Some((a.clone(), b.clone()));
                break 'outer;
            }
        }
    }
    let bound = k as f64 * (n as f64).log2();
    SeparatingReport {
        k,
        is_separating: witness.is_none(),
        witness,
        size: uncovered.len(),
        bound,
        meets_bound: uncovered.len() as f64 >= bound - 1e-9,
    }
}

fn enumerate_subsets(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    let start = prefix.last().map_or(0, |&p| p + 1);
    for i in start..n {
        prefix.push(i);
        enumerate_subsets(n, k, prefix, out);
        prefix.pop();
    }
}

/// Codimension-2 coverage report for packings by `(P_3)^3` copies.
#[derive(Clone, Debug)]
pub struct Codim2Report {
    pub pass: bool,
    /// ordered coordinate pairs (i, j) whose subcube {x_i = 1, x_j = 0}
    /// contains no uncovered vertex
    pub missing_uncovered: Vec<(usize, usize)>,
    /// (placement, i, j) whose intersection with the subcube has size not
    /// divisible by 3
    pub divisibility_failures: Vec<(usize, usize, usize)>,
}

impl Codim2Report {
    pub fn to_json(&self) -> String {
        format!(
            "{{\"pass\":{},\"missing_uncovered\":{:?},\"divisibility_failures\":{:?}}}",
            self.pass, self.missing_uncovered, self.divisibility_failures
        )
    }
}

/// For every ordered coordinate pair `(i, j)`, checks that the subcube
/// `{x_i = 1, x_j = 0}` contains an uncovered vertex, and that each copy
/// meets it in a vertex count divisible by 3. Requires a certificate that
/// already passes `verify_packing`.
pub fn codim2_coverage_check(cert: &PackingCertificate) -> Result<Codim2Report, AuditError> {
    if !cert.host.is_hypercube() {
        return Err(AuditError::NotHypercube);
    }
    let base = verify_packing(cert);
    if !base.valid {
        return Err(AuditError::InvalidCopy(format!(
            "certificate fails verify_packing ({} failures)",
            base.failures.len()
        )));
    }
    let n = cert.host.ndim();
    let bit = |v: u64, i: usize| v >> (n - 1 - i) & 1;
    let mut missing_uncovered = Vec::new();
    let mut divisibility_failures = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if !base
                .uncovered
                .iter()
                .any(|&v| bit(v, i) == 1 && bit(v, j) == 0)
            {
                missing_uncovered.push((i, j));
            }
            for (id, pl) in cert.placements.iter().enumerate() {
                let hits = pl
                    .image
                    .iter()
                    .filter(|&&v| bit(v, i) == 1 && bit(v, j) == 0)
                    .count();
                if hits % 3 != 0 {
                    divisibility_failures.push((id, i, j));
                }
            }
        }
    }
    Ok(Codim2Report {
        pass: missing_uncovered.is_empty() && divisibility_failures.is_empty(),
        missing_uncovered,
        divisibility_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Vertex;

    fn corner_cert() -> PackingCertificate {
        let host = Grid::hypercube(2).unwrap();
        let pattern = PatternGraph::induced(
            Grid::hypercube(2).unwrap(),
            &[Vertex(vec![0, 0]), Vertex(vec![0, 1]), Vertex(vec![1, 1])],
        )
        .unwrap();
        PackingCertificate {
            host,
            patterns: vec![pattern],
            placements: vec![Placement {
                pattern: 0,
                mode: Mode::Induced,
                image: vec![0, 1, 3],
            }],
            uncovered: vec![2],
        }
    }

    #[test]
    fn corner_certificate_is_valid() {
        let report = verify_packing(&corner_cert());
        assert!(report.valid, "{:?}", report.failures);
        assert_eq!(report.uncovered, vec![2]);
        assert_eq!(report.mode_verified, vec![Some(Mode::Isometric)]);
    }

    #[test]
    fn overlap_is_caught() {
        let host = Grid::hypercube(1).unwrap();
        let pattern = PatternGraph::induced(
            Grid::hypercube(1).unwrap(),
            &[Vertex(vec![0]), Vertex(vec![1])],
        )
        .unwrap();
        let cert = PackingCertificate {
            host,
            patterns: vec![pattern],
            placements: vec![
                Placement {
                    pattern: 0,
                    mode: Mode::Induced,
                    image: vec![0, 1],
                },
                Placement {
                    pattern: 0,
                    mode: Mode::Induced,
                    image: vec![1, 0],
                },
            ],
            uncovered: vec![],
        };
        let report = verify_packing(&cert);
        assert!(!report.valid);
        assert!(report
            .failures
            .iter()
            .any(|f| f.reason.contains("already covered")));
    }

    #[test]
    fn wrong_uncovered_list_is_caught() {
        let mut cert = corner_cert();
        cert.uncovered = vec![];
        let report = verify_packing(&cert);
        assert!(!report.valid);
        assert!(report
            .failures
            .iter()
            .any(|f| f.reason.contains("uncovered list mismatch")));
    }

    #[test]
    fn mode_overclaim_is_caught() {
        let host = Grid::hypercube(3).unwrap();
        let pattern = {
            let verts: Vec<u64> = vec![0, 1, 3, 7];
            PatternGraph::induced_from_indices(Grid::hypercube(3).unwrap(), verts).unwrap()
        };
        // 000,001,011,010 is a subgraph copy of the path but not induced
        let cert = PackingCertificate {
            host,
            patterns: vec![pattern],
            placements: vec![Placement {
                pattern: 0,
                mode: Mode::Induced,
                image: vec![0, 1, 3, 2],
            }],
            uncovered: (4..8).collect(),
        };
        let report = verify_packing(&cert);
        assert!(!report.valid);
        assert_eq!(report.mode_verified, vec![Some(Mode::Subgraph)]);
    }

    #[test]
    fn multiset_shift_cover_audits_clean() {
        let pattern = PatternGraph::induced(
            Grid::hypercube(1).unwrap(),
            &[Vertex(vec![0]), Vertex(vec![1])],
        )
        .unwrap();
        let cover = crate::modcover::shift_l_partition(&pattern, 1).unwrap();
        let report = verify_multiset(&cover);
        assert!(report.valid);
        assert_eq!(report.coverage_counts, BTreeMap::from([(2, 2)]));
        assert_eq!(report.coverage_histogram, BTreeMap::from([(0, 2)]));
    }

    #[test]
    fn tampered_multiplicity_is_caught() {
        let pattern = PatternGraph::induced(
            Grid::hypercube(2).unwrap(),
            &[Vertex(vec![0, 0]), Vertex(vec![0, 1]), Vertex(vec![1, 1])],
        )
        .unwrap();
        let mut cover = crate::modcover::one_mod_l_partition(&pattern).unwrap();
        assert!(verify_multiset(&cover).valid);
        cover.entries[0].mult += 1;
        let report = verify_multiset(&cover);
        assert!(!report.valid);
        // exactly the 3 vertices of the bumped placement go wrong
        assert!(report
            .failures
            .iter()
            .any(|f| f.reason.contains("misses the target residue at 3 vertices")));
    }

    fn p3_pattern(k: usize) -> PatternGraph {
        let b = Grid::path_power(3, k).unwrap();
        let verts: Vec<u64> = b.vertices().collect();
        PatternGraph::induced_from_indices(b, verts).unwrap()
    }

    #[test]
    fn classify_edge_cases() {
        let host = Grid::hypercube(2).unwrap();
        let pattern = p3_pattern(1);
        // path 0,1,2 -> 00, 01, 11
        let pl = Placement {
            pattern: 0,
            mode: Mode::Subgraph,
            image: vec![0, 1, 3],
        };
        assert_eq!(
            classify_codim1_intersection(&host, &pattern, &pl, 0, 0).unwrap(),
            Codim1Class::P2xP3PowKm1
        );
        assert_eq!(
            classify_codim1_intersection(&host, &pattern, &pl, 1, 0).unwrap(),
            Codim1Class::P3PowKm1
        );

        // constant-coordinate halfspaces give the full copy or nothing
        let host3 = Grid::hypercube(3).unwrap();
        let pl3 = Placement {
            pattern: 0,
            mode: Mode::Subgraph,
            image: vec![0, 1, 3],
        };
        assert_eq!(
            classify_codim1_intersection(&host3, &pattern, &pl3, 0, 0).unwrap(),
            Codim1Class::P3PowK
        );
        assert_eq!(
            classify_codim1_intersection(&host3, &pattern, &pl3, 0, 1).unwrap(),
            Codim1Class::Empty
        );
    }

    #[test]
    fn classify_rejects_invalid_copy() {
        let host = Grid::hypercube(2).unwrap();
        let pattern = p3_pattern(1);
        // 00, 11 are not adjacent: not a subgraph copy
        let pl = Placement {
            pattern: 0,
            mode: Mode::Subgraph,
            image: vec![0, 3, 1],
        };
        assert!(matches!(
            classify_codim1_intersection(&host, &pattern, &pl, 0, 0),
            Err(AuditError::InvalidCopy(_))
        ));
    }

    #[test]
    fn separating_examples() {
        // subsets {1} and {2} separate [2]
        let r = separating_audit(2, &[0b10, 0b01], 1);
        assert!(r.is_separating);
        assert!(r.meets_bound);

        // a single subset cannot separate three coordinates
        let r = separating_audit(3, &[0b100], 1);
        assert!(!r.is_separating);
        assert!(r.witness.is_some());
    }

    #[test]
    fn codim2_trivial_on_empty_packing() {
        let host = Grid::hypercube(2).unwrap();
        let cert = PackingCertificate {
            host,
            patterns: vec![],
            placements: vec![],
            uncovered: (0..4).collect(),
        };
        let report = codim2_coverage_check(&cert).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn codim2_gated_by_verify() {
        let mut cert = corner_cert();
        cert.uncovered = vec![]; // corrupt
        assert!(matches!(
            codim2_coverage_check(&cert),
            Err(AuditError::InvalidCopy(_))
        ));
    }

    #[test]
    fn report_json_is_stable() {
        let report = verify_packing(&corner_cert());
        let json = report.to_json();
        assert!(json.starts_with("{\"valid\":true"));
        assert!(json.contains("\"uncovered_count\":1"));
    }
}
