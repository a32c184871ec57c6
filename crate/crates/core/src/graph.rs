//! Edge-list ingestion and reproducible edge streams.
//!
//! Input is the plain SNAP/KONECT text layout: one edge per line, two integer
//! node labels separated by whitespace, `#` or `%` comment lines, and any
//! extra columns (weights, timestamps) ignored. Gzip input is detected from
//! its magic bytes.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque node label. No contiguity is assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(id: u64) -> Self {
        NodeId(id)
    }
}

/// An undirected edge stored in canonical orientation (`u < v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    u: NodeId,
    v: NodeId,
}

impl Edge {
    /// Returns `None` for a self-loop.
    pub fn new(a: impl Into<NodeId>, b: impl Into<NodeId>) -> Option<Edge> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Some(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn u(&self) -> NodeId {
        self.u
    }

    pub fn v(&self) -> NodeId {
        self.v
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }

    /// The endpoint opposite `x`, if `x` is an endpoint.
    pub fn other(&self, x: NodeId) -> Option<NodeId> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// A normalized edge sequence: no self-loops, no duplicates, canonical orientation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    edges: Vec<Edge>,
    node_count: usize,
}

impl EdgeList {
    /// Normalizes raw pairs, keeping the first occurrence of every undirected edge.
    pub fn from_pairs<I, A>(pairs: I) -> EdgeList
    where
        I: IntoIterator<Item = (A, A)>,
        A: Into<NodeId>,
    {
        let mut builder = Normalizer::default();
        for (a, b) in pairs {
            builder.push(a.into(), b.into());
        }
        builder.finish()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edge> {
        self.edges.iter()
    }

    /// Same edges in a new order. The caller guarantees `edges` is a
    /// permutation of `self.edges`.
    fn reordered(&self, edges: Vec<Edge>) -> EdgeList {
        debug_assert_eq!(edges.len(), self.edges.len());
        EdgeList {
            edges,
            node_count: self.node_count,
        }
    }
}

impl<'a> IntoIterator for &'a EdgeList {
    type Item = &'a Edge;
    type IntoIter = std::slice::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}

#[derive(Default)]
struct Normalizer {
    seen: HashSet<Edge>,
    nodes: HashSet<NodeId>,
    edges: Vec<Edge>,
}

impl Normalizer {
    fn push(&mut self, a: NodeId, b: NodeId) {
        if let Some(e) = Edge::new(a, b) {
            if self.seen.insert(e) {
                self.nodes.insert(a);
                self.nodes.insert(b);
                self.edges.push(e);
            }
        }
    }

    fn len(&self) -> usize {
        self.edges.len()
    }

    fn finish(self) -> EdgeList {
        EdgeList {
            node_count: self.nodes.len(),
            edges: self.edges,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Refuse inputs with more distinct edges than this.
    pub max_edges: Option<usize>,
}

/// Seed that fully determines a stream permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamSeed(pub u64);

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

/// Parses a text (optionally gzip-compressed) edge list.
pub fn parse_edge_list<R: Read>(source: R, options: &ParseOptions) -> Result<EdgeList> {
    let mut reader = BufReader::new(source);
    let gz = reader.fill_buf()?.starts_with(&GZIP_MAGIC);
    if gz {
        parse_text(BufReader::new(MultiGzDecoder::new(reader)), options)
    } else {
        parse_text(reader, options)
    }
}

pub fn read_edge_list_file(path: impl AsRef<Path>, options: &ParseOptions) -> Result<EdgeList> {
    parse_edge_list(File::open(path)?, options)
}

fn parse_text<R: BufRead>(reader: R, options: &ParseOptions) -> Result<EdgeList> {
    let mut norm = Normalizer::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let a = parse_node(tokens.next(), lineno)?;
        let b = parse_node(tokens.next(), lineno)?;
        norm.push(a, b);
        if let Some(max) = options.max_edges {
            if norm.len() > max {
                return Err(Error::Infeasible(format!(
                    "input exceeds the edge budget of {max} edges"
                )));
            }
        }
    }
    Ok(norm.finish())
}

fn parse_node(token: Option<&str>, line: usize) -> Result<NodeId> {
    let token = token.ok_or_else(|| Error::Parse {
        line,
        message: "expected two node ids".into(),
    })?;
    token.parse::<u64>().map(NodeId).map_err(|_| Error::Parse {
        line,
        message: format!("invalid node id {token:?}"),
    })
}

/// Writes one `u v` pair per line, newline-terminated.
pub fn write_edge_list<W: Write>(list: &EdgeList, mut out: W) -> std::io::Result<()> {
    for e in list {
        writeln!(out, "{} {}", e.u, e.v)?;
    }
    out.flush()
}

/// Uniform random permutation of the stream, fully determined by `seed`.
pub fn shuffle_stream(list: &EdgeList, seed: StreamSeed) -> EdgeList {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let mut edges = list.edges.clone();
    edges.shuffle(&mut rng);
    list.reordered(edges)
}
