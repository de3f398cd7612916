//! Undirected simple graphs and the `p edge` text format.
//!
//! Vertices are 0-indexed in memory and 1-indexed on disk. Edges are kept
//! canonically as `(min, max)` pairs in sorted order; every edge carries a
//! stable id (its position in that order) which the search code uses to key
//! matchings as edge bitsets.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

impl ParseError {
    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            msg: msg.into(),
        }
    }
}

/// Undirected simple graph.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    // (neighbor, edge id), sorted by neighbor
    adj: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range
    /// endpoints. Edge orientation in the input does not matter.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::OutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for (id, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b, id));
            adj[b].push((a, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_sorted(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(min, max)` pairs; the index is the edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    /// Neighbors of `v` paired with the id of the connecting edge.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Induced subgraph on the vertices not in `vs`. The returned map sends
    /// each old vertex to its new index, or `None` if it was deleted.
    pub fn delete_vertices(&self, vs: &[usize]) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        let mut gone = vec![false; self.n];
        for &v in vs {
            if v >= self.n {
                return Err(GraphError::UnknownVertex(v));
            }
            gone[v] = true;
        }
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !gone[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((map[a]?, map[b]?)))
            .collect();
        // relabeling is monotone, so the edge order survives
        Ok((Self::from_sorted(next, edges), map))
    }

    /// Same vertex set with one edge removed.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let id = self
            .edge_id(u, v)
            .ok_or(GraphError::UnknownVertex(if u >= self.n { u } else { v }))?;
        let mut edges = self.edges.clone();
        edges.remove(id);
        Ok(Self::from_sorted(self.n, edges))
    }

    /// Connected component label per vertex, numbered in order of the
    /// smallest vertex of each component.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbors(x) {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Proper 2-coloring of every component (each component's smallest
    /// vertex gets color 0), or `None` when an odd cycle exists.
    pub fn bipartition(&self) -> Option<Bipartition> {
        let mut color = vec![u8::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbors(x) {
                    if color[y] == u8::MAX {
                        color[y] = 1 - color[x];
                        queue.push_back(y);
                    } else if color[y] == color[x] {
                        return None;
                    }
                }
            }
        }
        let b = Bipartition { color };
        debug_assert!(b.is_valid_for(self));
        Some(b)
    }
}

/// A 2-coloring with colors 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    color: Vec<u8>,
}

impl Bipartition {
    pub fn color(&self, v: usize) -> u8 {
        self.color[v]
    }

    pub fn colors(&self) -> &[u8] {
        &self.color
    }

    /// Edge-by-edge check that no edge is monochromatic.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.color.len() == g.vertex_count()
            && g.edges().iter().all(|&(a, b)| self.color[a] != self.color[b])
    }
}

/// Incremental construction used by the reduction builders.
#[derive(Default, Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        Graph::new(self.n, self.edges)
    }
}

/// Splits a line into whitespace tokens, skipping blank and `c` comment lines.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

pub(crate) fn parse_num(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .map_err(|_| ParseError::syntax(line, format!("expected a non-negative integer, got `{tok}`")))
}

/// Parses `p edge <n> <m>` followed by exactly `m` lines `e <u> <v>`.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(1, "missing `p edge` header"))?;
    if header.len() != 4 || header[0] != "p" || header[1] != "edge" {
        return Err(ParseError::syntax(hline, "bad header, expected `p edge <n> <m>`"));
    }
    let n = parse_num(hline, header[2])?;
    let m = parse_num(hline, header[3])?;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for (line, toks) in lines {
        if toks.len() != 3 || toks[0] != "e" {
            return Err(ParseError::syntax(line, "expected `e <u> <v>`"));
        }
        let u = parse_num(line, toks[1])?;
        let v = parse_num(line, toks[2])?;
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(ParseError::Graph {
                    line,
                    source: GraphError::OutOfRange { vertex: x, n },
                });
            }
        }
        if u == v {
            return Err(ParseError::Graph {
                line,
                source: GraphError::SelfLoop(u),
            });
        }
        let key = (u.min(v) - 1, u.max(v) - 1);
        if !seen.insert(key) {
            return Err(ParseError::Graph {
                line,
                source: GraphError::DuplicateEdge(key.0 + 1, key.1 + 1),
            });
        }
        if edges.len() == m {
            return Err(ParseError::syntax(line, format!("more than the declared {m} edges")));
        }
        edges.push(key);
    }
    if edges.len() != m {
        return Err(ParseError::syntax(
            hline,
            format!("header declares {m} edges but {} were given", edges.len()),
        ));
    }
    Graph::new(n, edges).map_err(|source| ParseError::Graph { line: hline, source })
}

/// Writes the canonical file: header, then edges in sorted order, LF endings.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for &(a, b) in g.edges() {
        writeln!(out, "e {} {}", a + 1, b + 1).unwrap();
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::{cycle, path};
    use super::*;

    #[test]
    fn parses_smallest_graph() {
        let g = parse_graph("p edge 1 0").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parses_c5() {
        let g = parse_graph("p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n").unwrap();
        assert_eq!(g, cycle(5));
    }

    #[test]
    fn rejects_self_loop_with_line_number() {
        let err = parse_graph("p edge 2 1\ne 1 1\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Graph {
                line: 2,
                source: GraphError::SelfLoop(1)
            }
        );
        assert_eq!(err.to_string(), "line 2: self-loop at vertex 1");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_graph("p edge 3 2\ne 1 2\ne 2 1\n"),
            Err(ParseError::Graph { line: 3, source: GraphError::DuplicateEdge(1, 2) })
        ));
        assert!(matches!(
            parse_graph("p edge 3 1\ne 1 4\n"),
            Err(ParseError::Graph { line: 2, .. })
        ));
        assert!(matches!(parse_graph("p graph 3 1\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_graph("p edge 3 2\ne 1 2\n"), Err(ParseError::Syntax { .. })));
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let g = parse_graph("c hello\np edge 2 1\nc mid\ne 2 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn serializes_sorted() {
        assert_eq!(serialize_graph(&Graph::empty(1)), "p edge 1 0\n");
        let text = serialize_graph(&cycle(5));
        assert_eq!(text, "p edge 5 5\ne 1 2\ne 1 5\ne 2 3\ne 3 4\ne 4 5\n");
        assert_eq!(parse_graph(&text).unwrap(), cycle(5));
    }

    #[test]
    fn delete_vertices_examples() {
        let (g, map) = cycle(5).delete_vertices(&[0]).unwrap();
        assert_eq!(g, path(4));
        assert_eq!(map, vec![None, Some(0), Some(1), Some(2), Some(3)]);
        let (g, _) = cycle(5).delete_vertices(&[0, 1]).unwrap();
        assert_eq!(g, path(3));
        let (g, _) = Graph::empty(1).delete_vertices(&[0]).unwrap();
        assert_eq!(g.vertex_count(), 0);
        let (g, _) = cycle(5).delete_vertices(&[]).unwrap();
        assert_eq!(g, cycle(5));
        assert_eq!(cycle(5).delete_vertices(&[7]).unwrap_err(), GraphError::UnknownVertex(7));
    }

    #[test]
    fn bipartition_examples() {
        assert!(cycle(5).bipartition().is_none());
        let b = path(4).bipartition().unwrap();
        assert_eq!(b.colors(), &[0, 1, 0, 1]);
        assert!(b.is_valid_for(&path(4)));
    }

    #[test]
    fn adjacency_matches_edges() {
        let g = cycle(6);
        for (id, &(a, b)) in g.edges().iter().enumerate() {
            assert_eq!(g.edge_id(a, b), Some(id));
            assert_eq!(g.edge_id(b, a), Some(id));
        }
        let rebuilt: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
        assert_eq!(rebuilt, 2 * g.edge_count());
    }
}
