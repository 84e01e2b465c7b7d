//! The certificate file format and the packing certificate type.
//!
//! Files are line-oriented UTF-8 with a `%cubepack v1 <kind>` header, where
//! `<kind>` is `pack`, `mcov` or `pattern`:
//!
//! ```text
//! %cubepack v1 pack
//! host 2,2,2
//! pattern 0 ambient 2,2 verts 0,0;0,1;1,1
//! copy 0 mode induced map 0,0->0,0,0;0,1->0,0,1;1,1->0,1,1
//! uncovered 1,0,0;1,1,0;...
//! ```
//!
//! Multiset covers add `modulus` and `residue` lines and a `mult` field per
//! copy. Pattern files carry a single `pattern` line, optionally with
//! explicit `edges` and a Hamilton `order`. Vertices are written as
//! comma-separated coordinates throughout. Serialization is canonical:
//! placements are sorted by (sorted image, map), covers additionally by
//! multiplicity, so identical objects produce byte-identical files.
//! Structural problems are parse errors; semantic defects (overlaps, bad
//! modes, wrong uncovered lists) are left for the audit to find.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::grid::{EdgeSpec, Grid, Mode, PatternGraph, Placement, Vertex};
use crate::modcover::{CoverEntry, MultisetCover};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing or unknown header (expected `%cubepack v1 pack|mcov|pattern`)")]
    BadHeader,
    #[error("unexpected end of file: {0}")]
    UnexpectedEof(String),
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        msg: msg.into(),
    }
}

/// Host, patterns, pairwise-disjoint placements and the uncovered remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingCertificate {
    pub host: Grid,
    pub patterns: Vec<PatternGraph>,
    pub placements: Vec<Placement>,
    pub uncovered: Vec<u64>,
}

impl PackingCertificate {
    /// Sorts placements by canonical key and the uncovered list by index.
    pub fn canonicalize(&mut self) {
        self.placements.sort_by_key(|p| p.canonical_key());
        self.uncovered.sort_unstable();
        self.uncovered.dedup();
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("%cubepack v1 pack\n");
        write_host(&mut out, &self.host);
        for (id, p) in self.patterns.iter().enumerate() {
            write_pattern_line(&mut out, id, p, None);
        }
        let mut placements = self.placements.clone();
        placements.sort_by_key(|p| p.canonical_key());
        for pl in &placements {
            out.push_str("copy ");
            let _ = write!(out, "{} mode {} map ", pl.pattern, pl.mode);
            write_map(&mut out, &self.patterns[pl.pattern], &self.host, &pl.image);
            out.push('\n');
        }
        let mut uncovered = self.uncovered.clone();
        uncovered.sort_unstable();
        out.push_str("uncovered");
        for (i, &v) in uncovered.iter().enumerate() {
            out.push(if i == 0 { ' ' } else { ';' });
            let _ = write!(out, "{}", self.host.vertex_at(v));
        }
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        match parse_any(text)? {
            CertFile::Pack(c) => Ok(c),
            _ => Err(ParseError::BadHeader),
        }
    }
}

/// A parsed certificate of either kind.
#[derive(Debug)]
pub enum CertFile {
    Pack(PackingCertificate),
    Cover(MultisetCover),
}

pub fn cover_to_text(cover: &MultisetCover) -> String {
    let mut out = String::new();
    out.push_str("%cubepack v1 mcov\n");
    write_host(&mut out, &cover.host);
    let _ = writeln!(out, "modulus {}", cover.modulus);
    let _ = writeln!(out, "residue {}", cover.residue);
    for (id, p) in cover.patterns.iter().enumerate() {
        write_pattern_line(&mut out, id, p, None);
    }
    let mut entries = cover.entries.clone();
    entries.sort_by(|a, b| {
        (a.placement.canonical_key(), a.mult).cmp(&(b.placement.canonical_key(), b.mult))
    });
    for entry in &entries {
        let pl = &entry.placement;
        let _ = write!(
            out,
            "copy {} mode {} mult {} map ",
            pl.pattern, pl.mode, entry.mult
        );
        write_map(
            &mut out,
            &cover.patterns[pl.pattern],
            &cover.host,
            &pl.image,
        );
        out.push('\n');
    }
    out
}

/// A pattern file: the graph plus an optional Hamilton order over vertex
/// positions (used by staircase blocks).
#[derive(Clone, Debug)]
pub struct PatternFile {
    pub graph: PatternGraph,
    pub order: Option<Vec<usize>>,
}

pub fn pattern_to_text(p: &PatternFile) -> String {
    let mut out = String::new();
    out.push_str("%cubepack v1 pattern\n");
    write_pattern_line(&mut out, 0, &p.graph, p.order.as_deref());
    out
}

pub fn parse_pattern_file(text: &str) -> Result<PatternFile, ParseError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ParseError::BadHeader)?;
    if header.trim() != "%cubepack v1 pattern" {
        return Err(ParseError::BadHeader);
    }
    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (graph, order) = parse_pattern_line(no + 1, line, 0)?;
        return Ok(PatternFile { graph, order });
    }
    Err(ParseError::UnexpectedEof("pattern line".into()))
}

pub fn parse_any(text: &str) -> Result<CertFile, ParseError> {
    let mut lines = text.lines().enumerate().peekable();
    let (_, header) = lines.next().ok_or(ParseError::BadHeader)?;
    let kind = match header.trim() {
        "%cubepack v1 pack" => "pack",
        "%cubepack v1 mcov" => "mcov",
        _ => return Err(ParseError::BadHeader),
    };

    let mut host: Option<Grid> = None;
    let mut modulus: Option<u64> = None;
    let mut residue: Option<u64> = None;
    let mut patterns: Vec<PatternGraph> = Vec::new();
    let mut placements: Vec<Placement> = Vec::new();
    let mut entries: Vec<CoverEntry> = Vec::new();
    let mut uncovered: Vec<u64> = Vec::new();
    let mut saw_uncovered = false;

    for (no, raw) in lines {
        let no = no + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (word, rest) = split_word(line);
        match word {
            "host" => {
                let dims = parse_dims(no, rest)?;
                host = Some(Grid::new(dims).map_err(|e| err(no, e.to_string()))?);
            }
            "modulus" => {
                modulus = Some(rest.trim().parse().map_err(|_| err(no, "bad modulus"))?);
            }
            "residue" => {
                residue = Some(rest.trim().parse().map_err(|_| err(no, "bad residue"))?);
            }
            "pattern" => {
                let (graph, _) = parse_pattern_line(no, line, patterns.len())?;
                patterns.push(graph);
            }
            "copy" => {
                let host = host.as_ref().ok_or_else(|| err(no, "copy before host"))?;
                let (placement, mult) = parse_copy_line(no, rest, &patterns, host)?;
                match kind {
                    "pack" => {
                        if mult.is_some() {
                            return Err(err(no, "mult is only valid in mcov files"));
                        }
                        placements.push(placement);
                    }
                    _ => entries.push(CoverEntry {
                        placement,
                        mult: mult.unwrap_or(1),
                    }),
                }
            }
            "uncovered" => {
                let host = host
                    .as_ref()
                    .ok_or_else(|| err(no, "uncovered before host"))?;
                saw_uncovered = true;
                uncovered = parse_vertex_list(no, rest, host)?;
            }
            other => return Err(err(no, format!("unknown record `{other}`"))),
        }
    }

    let host = host.ok_or(ParseError::UnexpectedEof("host line".into()))?;
    match kind {
        "pack" => {
            if !saw_uncovered {
                return Err(ParseError::UnexpectedEof("uncovered line".into()));
            }
            Ok(CertFile::Pack(PackingCertificate {
                host,
                patterns,
                placements,
                uncovered,
            }))
        }
        _ => {
            let modulus = modulus.ok_or(ParseError::UnexpectedEof("modulus line".into()))?;
            let residue = residue.ok_or(ParseError::UnexpectedEof("residue line".into()))?;
            if modulus == 0 {
                return Err(err(0, "modulus must be at least 1"));
            }
            if residue >= modulus {
                return Err(err(0, "residue must lie in [0, modulus)"));
            }
            Ok(CertFile::Cover(MultisetCover {
                host,
                patterns,
                entries,
                modulus,
                residue,
            }))
        }
    }
}

fn write_host(out: &mut String, host: &Grid) {
    out.push_str("host ");
    for (i, d) in host.dims().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{d}");
    }
    out.push('\n');
}

fn write_pattern_line(out: &mut String, id: usize, p: &PatternGraph, order: Option<&[usize]>) {
    let _ = write!(out, "pattern {id} ambient ");
    for (i, d) in p.ambient().dims().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{d}");
    }
    out.push_str(" verts ");
    for (i, &v) in p.verts().iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        let _ = write!(out, "{}", p.ambient().vertex_at(v));
    }
    if let EdgeSpec::Explicit(edges) = p.edge_spec() {
        out.push_str(" edges ");
        for (i, (a, b)) in edges.iter().enumerate() {
            if i > 0 {
                out.push(';');
            }
            let _ = write!(out, "{a}-{b}");
        }
    }
    if let Some(order) = order {
        out.push_str(" order ");
        for (i, pos) in order.iter().enumerate() {
            if i > 0 {
                out.push(';');
            }
            let _ = write!(out, "{pos}");
        }
    }
    out.push('\n');
}

fn write_map(out: &mut String, pattern: &PatternGraph, host: &Grid, image: &[u64]) {
    for (i, &hv) in image.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        let _ = write!(out, "{}->{}", pattern.vert_coords(i), host.vertex_at(hv));
    }
}

fn split_word(line: &str) -> (&str, &str) {
    match line.split_once(char::is_whitespace) {
        Some((w, rest)) => (w, rest.trim_start()),
        None => (line, ""),
    }
}

fn parse_dims(no: usize, s: &str) -> Result<Vec<u32>, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| err(no, format!("bad factor length `{p}`")))
        })
        .collect()
}

fn parse_vertex(no: usize, s: &str, grid: &Grid) -> Result<u64, ParseError> {
    let v: Vertex = s
        .parse()
        .map_err(|_| err(no, format!("bad vertex `{s}`")))?;
    grid.index_of(&v)
        .map_err(|e| err(no, format!("vertex `{s}`: {e}")))
}

fn parse_vertex_list(no: usize, s: &str, grid: &Grid) -> Result<Vec<u64>, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|p| parse_vertex(no, p.trim(), grid))
        .collect()
}

/// Parses a full `pattern <id> ambient <dims> verts <..> [edges ..] [order ..]`
/// line; `line` still contains the leading `pattern` word.
fn parse_pattern_line(
    no: usize,
    line: &str,
    expect_id: usize,
) -> Result<(PatternGraph, Option<Vec<usize>>), ParseError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 6 || tokens[0] != "pattern" || tokens[2] != "ambient" || tokens[4] != "verts"
    {
        return Err(err(no, "malformed pattern line"));
    }
    let id: usize = tokens[1].parse().map_err(|_| err(no, "bad pattern id"))?;
    if id != expect_id {
        return Err(err(
            no,
            format!("pattern ids must be consecutive (expected {expect_id})"),
        ));
    }
    let ambient = Grid::new(parse_dims(no, tokens[3])?).map_err(|e| err(no, e.to_string()))?;
    let verts: Vec<u64> = tokens[5]
        .split(';')
        .map(|p| parse_vertex(no, p, &ambient))
        .collect::<Result<_, _>>()?;

    let mut edges: Option<Vec<(usize, usize)>> = None;
    let mut order: Option<Vec<usize>> = None;
    let mut i = 6;
    while i < tokens.len() {
        match tokens[i] {
            "edges" => {
                let payload = tokens
                    .get(i + 1)
                    .ok_or_else(|| err(no, "missing edge list"))?;
                let list = payload
                    .split(';')
                    .map(|e| {
                        let (a, b) = e
                            .split_once('-')
                            .ok_or_else(|| err(no, format!("bad edge `{e}`")))?;
                        Ok((
                            a.parse::<usize>()
                                .map_err(|_| err(no, format!("bad edge `{e}`")))?,
                            b.parse::<usize>()
                                .map_err(|_| err(no, format!("bad edge `{e}`")))?,
                        ))
                    })
                    .collect::<Result<Vec<_>, ParseError>>()?;
                edges = Some(list);
                i += 2;
            }
            "order" => {
                let payload = tokens
                    .get(i + 1)
                    .ok_or_else(|| err(no, "missing order list"))?;
                let list = payload
                    .split(';')
                    .map(|p| {
                        p.parse::<usize>()
                            .map_err(|_| err(no, format!("bad order entry `{p}`")))
                    })
                    .collect::<Result<Vec<_>, ParseError>>()?;
                order = Some(list);
                i += 2;
            }
            other => return Err(err(no, format!("unknown pattern field `{other}`"))),
        }
    }

    let graph = match edges {
        Some(edges) => PatternGraph::with_edges_from_indices(ambient, verts, edges),
        None => PatternGraph::induced_from_indices(ambient, verts),
    }
    .map_err(|e| err(no, e.to_string()))?;
    if let Some(order) = &order {
        if order.len() != graph.len() || order.iter().any(|&p| p >= graph.len()) {
            return Err(err(no, "order must be a permutation of vertex positions"));
        }
    }
    Ok((graph, order))
}

fn parse_copy_line(
    no: usize,
    rest: &str,
    patterns: &[PatternGraph],
    host: &Grid,
) -> Result<(Placement, Option<u64>), ParseError> {
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if tokens.len() < 4 || tokens[1] != "mode" {
        return Err(err(no, "malformed copy line"));
    }
    let pattern_id: usize = tokens[0].parse().map_err(|_| err(no, "bad pattern id"))?;
    let pattern = patterns
        .get(pattern_id)
        .ok_or_else(|| err(no, format!("unknown pattern id {pattern_id}")))?;
    let mode = Mode::from_token(tokens[2]).ok_or_else(|| err(no, "unknown placement mode"))?;

    let (mult, map_at) = if tokens[3] == "mult" {
        let m: u64 = tokens
            .get(4)
            .ok_or_else(|| err(no, "missing multiplicity"))?
            .parse()
            .map_err(|_| err(no, "bad multiplicity"))?;
        if m == 0 {
            return Err(err(no, "multiplicity must be at least 1"));
        }
        (Some(m), 5)
    } else {
        (None, 3)
    };
    if tokens.get(map_at).copied() != Some("map") {
        return Err(err(no, "malformed copy line (expected `map`)"));
    }
    let payload = tokens
        .get(map_at + 1)
        .ok_or_else(|| err(no, "missing map"))?;
    let pairs: Vec<&str> = payload.split(';').collect();
    if pairs.len() != pattern.len() {
        return Err(err(
            no,
            format!(
                "map has {} entries, pattern has {}",
                pairs.len(),
                pattern.len()
            ),
        ));
    }
    let mut image = Vec::with_capacity(pairs.len());
    for (i, pair) in pairs.iter().enumerate() {
        let (src, dst) = pair
            .split_once("->")
            .ok_or_else(|| err(no, format!("bad map entry `{pair}`")))?;
        let src_idx = parse_vertex(no, src, pattern.ambient())?;
        if src_idx != pattern.verts()[i] {
            return Err(err(no, "map entries must follow the pattern vertex order"));
        }
        image.push(parse_vertex(no, dst, host)?);
    }
    Ok((
        Placement {
            pattern: pattern_id,
            mode,
            image,
        },
        mult,
    ))
}

/// Writes `content` to `path` atomically (temp file + rename).
pub fn write_atomic(path: &Path, content: &str) -> io::Result<()> {
    let tmp = path.with_extension("tmp~");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)
}
