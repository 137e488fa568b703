//! Undirected simple graphs, the edge-list file format, and the fixed
//! instance family used throughout the crate.
//!
//! Vertices are 0-based internally. Everything that crosses an I/O boundary
//! (edge-list files, cover listings, JSON) uses 1-based labels.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// An immutable undirected graph without self-loops or parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted, each pair stored as `(min, max)`.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists.
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on `n` vertices from 0-based edge pairs.
    ///
    /// Duplicate pairs (in either orientation) collapse to one edge.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!(
                    "edge ({}, {}) references a vertex outside 1..={n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::arg(format!("self-loop on vertex {}", u + 1)));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adjacency,
        })
    }

    /// Builds a graph from 1-based edge pairs.
    pub fn from_labeled_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == 0 || v == 0 {
                return Err(Error::arg("vertex labels start at 1"));
            }
            zero_based.push((u - 1, v - 1));
        }
        Graph::new(n, zero_based)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 0-based `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The subgraph induced by the first `prefix` vertices.
    pub fn induced_prefix(&self, prefix: usize) -> Graph {
        let prefix = prefix.min(self.n);
        let edges = self.edges.iter().copied().filter(|&(_, v)| v < prefix);
        Graph::new(prefix, edges).expect("subgraph of a valid graph is valid")
    }

    /// Applies a vertex relabeling `perm` (0-based, `perm[old] = new`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        check_permutation(perm, self.n)?;
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Serializes to the edge-list format with edges in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::arg(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::arg("not a permutation"));
        }
    }
    Ok(())
}

/// Parses the line-oriented edge-list format:
///
/// ```text
/// c optional comment lines
/// p edge <n> <m>
/// e <u> <v>        (m times, 1 <= u, v <= n, u != v)
/// ```
///
/// Blank lines are ignored. Duplicate edge lines are counted towards `m` but
/// collapse to one edge (a warning is logged).
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(parse_err("duplicate header line".into()));
                }
                if fields.next() != Some("edge") {
                    return Err(parse_err("expected header `p edge <n> <m>`".into()));
                }
                let n = parse_count(fields.next(), "vertex count").map_err(parse_err)?;
                let m = parse_count(fields.next(), "edge count").map_err(parse_err)?;
                if fields.next().is_some() {
                    return Err(parse_err("trailing fields after header".into()));
                }
                header = Some((n, m));
            }
            "e" => {
                let (n, _) =
                    header.ok_or_else(|| parse_err("edge line before `p edge` header".into()))?;
                let u = parse_vertex(fields.next(), n).map_err(parse_err)?;
                let v = parse_vertex(fields.next(), n).map_err(parse_err)?;
                if fields.next().is_some() {
                    return Err(parse_err("trailing fields after edge".into()));
                }
                if u == v {
                    return Err(parse_err(format!("self-loop on vertex {u}")));
                }
                let key = (u.min(v), u.max(v));
                if !seen.insert(key) {
                    log::warn!("line {line_no}: duplicate edge {} {} ignored", key.0, key.1);
                }
                edges.push((u - 1, v - 1));
            }
            other => return Err(parse_err(format!("unknown line type `{other}`"))),
        }
    }

    let (n, m) = header.ok_or(Error::Parse {
        line: last_line.max(1),
        message: "missing `p edge <n> <m>` header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line.max(1),
            message: format!(
                "header declares {m} edges but {} edge lines follow",
                edges.len()
            ),
        });
    }
    Graph::new(n, edges)
}

fn parse_count(field: Option<&str>, what: &str) -> std::result::Result<usize, String> {
    let field = field.ok_or_else(|| format!("missing {what}"))?;
    field
        .parse()
        .map_err(|_| format!("invalid {what} `{field}`"))
}

fn parse_vertex(field: Option<&str>, n: usize) -> std::result::Result<usize, String> {
    let field = field.ok_or_else(|| "edge line needs two endpoints".to_string())?;
    let v: usize = field
        .parse()
        .map_err(|_| format!("invalid vertex `{field}`"))?;
    if v == 0 || v > n {
        return Err(format!("vertex {v} outside 1..={n}"));
    }
    Ok(v)
}

/// Edges of the 8-vertex instance, 1-based. Vertex 3 is isolated.
pub const PAPER_EDGES: [(usize, usize); 8] = [
    (1, 5),
    (1, 6),
    (2, 5),
    (2, 6),
    (2, 7),
    (2, 8),
    (4, 7),
    (4, 8),
];

/// The 8-vertex bipartite instance with a population local optimum.
pub fn paper_instance() -> Graph {
    Graph::from_labeled_edges(8, &PAPER_EDGES).expect("static instance is valid")
}

/// [`paper_instance`] plus a disjoint `K_{m,m}`: left side on vertices
/// `9..=8+m`, right side on `9+m..=8+2m` (1-based). The matching cover budget
/// is `k = m + 4`.
pub fn extended_instance(m: usize) -> Result<Graph> {
    if m < 1 {
        return Err(Error::arg("extended_instance needs m >= 1"));
    }
    let n = 8 + 2 * m;
    let base = PAPER_EDGES.iter().map(|&(u, v)| (u - 1, v - 1));
    let bipartite = (0..m).flat_map(|i| (0..m).map(move |j| (8 + i, 8 + m + j)));
    Graph::new(n, base.chain(bipartite))
}

/// If `g` is `extended_instance(m)` for some `m`, returns that `m`.
pub fn extended_side(g: &Graph) -> Option<usize> {
    if g.n() < 10 || !g.n().is_multiple_of(2) {
        return None;
    }
    let m = (g.n() - 8) / 2;
    match extended_instance(m) {
        Ok(ext) if &ext == g => Some(m),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = parse_graph("p edge 2 1\ne 1 2\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn empty_edge_set() {
        let g = parse_graph("p edge 3 0").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 0);
        assert!((0..3).all(|v| g.degree(v) == 0));
    }

    #[test]
    fn instance_document_matches_constructor() {
        let doc =
            "c Figure graph\np edge 8 8\ne 1 5\ne 1 6\ne 2 5\ne 2 6\ne 2 7\ne 2 8\ne 4 7\ne 4 8\n";
        assert_eq!(parse_graph(doc).unwrap(), paper_instance());
    }

    #[test]
    fn paper_instance_degrees() {
        let g = paper_instance();
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.degree(1), 4);
        assert_eq!(g.degree(2), 0);
        for v in [0, 3, 4, 5, 6, 7] {
            assert_eq!(g.degree(v), 2, "vertex {}", v + 1);
        }
        assert_eq!(g.neighbors(0), &[4, 5]);
    }

    #[test]
    fn duplicates_collapse() {
        let g = parse_graph("p edge 3 3\ne 1 2\ne 2 1\ne 2 3\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("p edge 3 1\ne 1 4\n", 2),
            ("p edge 3 1\ne 2 2\n", 2),
            ("p edge 3 1\nc ok\ne 1 x\n", 3),
            ("e 1 2\n", 1),
            ("p edge 3 1\nq 1 2\n", 2),
            ("p edge 3\n", 1),
            ("p edge 3 2\ne 1 2\n", 2),
        ];
        for (doc, line) in cases {
            match parse_graph(doc) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{doc:?}"),
                other => panic!("expected parse error for {doc:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn serialize_round_trip() {
        let g = paper_instance();
        let text = g.to_edge_list();
        assert!(text.starts_with("p edge 8 8\ne 1 5\ne 1 6\n"));
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn extended_sizes() {
        let g1 = extended_instance(1).unwrap();
        assert_eq!((g1.n(), g1.edge_count()), (10, 9));
        assert!(g1.has_edge(8, 9));
        let g3 = extended_instance(3).unwrap();
        assert_eq!((g3.n(), g3.edge_count()), (14, 17));
        assert!(extended_instance(0).is_err());
    }

    #[test]
    fn extended_components_and_prefix() {
        for m in 1..=4 {
            let g = extended_instance(m).unwrap();
            let base = paper_instance();
            assert_eq!(g.induced_prefix(8), base);
            let mut expected = base.components();
            expected.push((8..8 + 2 * m).collect());
            assert_eq!(g.components(), expected);
            assert_eq!(extended_side(&g), Some(m));
        }
        assert_eq!(extended_side(&paper_instance()), None);
    }

    #[test]
    fn adjacency_is_symmetric() {
        for g in [paper_instance(), extended_instance(3).unwrap()] {
            for u in 0..g.n() {
                for v in 0..g.n() {
                    let in_edges = g.edges().contains(&(u.min(v), u.max(v)));
                    assert_eq!(g.has_edge(u, v), in_edges);
                    assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
                }
            }
        }
    }
}
