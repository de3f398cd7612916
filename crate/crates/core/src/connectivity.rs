//! Maximum matching in general graphs and the polynomial test for
//! connectivity of the flip graph.
//!
//! An edge of a graph with an odd number of vertices is *forbidden* if no
//! odd matching uses it, *forced* if every odd matching does, and otherwise
//! flexible. The flip graph is connected iff every edge is forced,
//! forbidden, or has an endpoint whose removal leaves a graph with a
//! perfect matching.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnectivityError {
    #[error("graph has an even number of vertices ({0})")]
    EvenVertexCount(usize),
    #[error("({}, {}) is not an edge", .0 + 1, .1 + 1)]
    NotAnEdge(usize, usize),
}

/// Maximum-cardinality matching by Edmonds' blossom algorithm. Free
/// vertices are processed in increasing index order and neighbors in
/// adjacency order, so the result is deterministic. Returns the mate of
/// every vertex.
pub fn maximum_matching_mates(g: &Graph) -> Vec<Option<usize>> {
    Blossom::new(g).run()
}

/// Matched edges `(a, b)` with `a < b`, sorted.
pub fn maximum_matching(g: &Graph) -> Vec<(usize, usize)> {
    let mates = maximum_matching_mates(g);
    (0..g.vertex_count())
        .filter_map(|v| mates[v].filter(|&u| v < u).map(|u| (v, u)))
        .collect()
}

pub fn matching_number(g: &Graph) -> usize {
    maximum_matching_mates(g).iter().filter(|m| m.is_some()).count() / 2
}

const NONE: usize = usize::MAX;

struct Blossom<'g> {
    g: &'g Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    in_queue: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'g> Blossom<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            in_queue: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn run(mut self) -> Vec<Option<usize>> {
        for root in 0..self.g.vertex_count() {
            if self.mate[root] == NONE {
                if let Some(end) = self.find_path(root) {
                    self.augment(end);
                }
            }
        }
        self.mate.iter().map(|&m| (m != NONE).then_some(m)).collect()
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.parent.fill(NONE);
        self.in_queue.fill(false);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.queue.push_back(root);
        self.in_queue[root] = true;
        while let Some(v) = self.queue.pop_front() {
            for to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    // odd cycle: contract it
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.in_queue[i] {
                                self.in_queue[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.in_queue[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }
}

pub fn has_perfect_matching(g: &Graph) -> bool {
    let n = g.vertex_count();
    n % 2 == 0 && matching_number(g) == n / 2
}

/// Whether `g` (odd order) has an odd matching at all.
pub fn has_odd_matching(g: &Graph) -> bool {
    let n = g.vertex_count();
    n % 2 == 1 && matching_number(g) == n / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    /// In every odd matching.
    Forced,
    /// In no odd matching.
    Forbidden,
    Flexible,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeClass::Forced => "forced",
            EdgeClass::Forbidden => "forbidden",
            EdgeClass::Flexible => "flexible",
        })
    }
}

fn require_odd(g: &Graph) -> Result<(), ConnectivityError> {
    if g.vertex_count() % 2 == 0 {
        return Err(ConnectivityError::EvenVertexCount(g.vertex_count()));
    }
    Ok(())
}

pub fn classify_edge(g: &Graph, (a, b): (usize, usize)) -> Result<EdgeClass, ConnectivityError> {
    require_odd(g)?;
    if !g.has_edge(a, b) {
        return Err(ConnectivityError::NotAnEdge(a, b));
    }
    let n = g.vertex_count();
    let (without_ends, _) = g.delete_vertices(&[a, b]).expect("endpoints exist");
    if matching_number(&without_ends) < (n - 3) / 2 {
        return Ok(EdgeClass::Forbidden);
    }
    let without_edge = g.delete_edge(a, b).expect("edge exists");
    if matching_number(&without_edge) < (n - 1) / 2 {
        return Ok(EdgeClass::Forced);
    }
    Ok(EdgeClass::Flexible)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeReport {
    pub edge: (usize, usize),
    pub class: EdgeClass,
    /// Smallest endpoint whose removal leaves a perfectly matchable graph.
    pub pm_endpoint: Option<usize>,
}

impl EdgeReport {
    pub fn is_fine(&self) -> bool {
        self.class != EdgeClass::Flexible || self.pm_endpoint.is_some()
    }
}

/// Classification of every edge, in edge order.
pub fn edge_reports(g: &Graph) -> Result<Vec<EdgeReport>, ConnectivityError> {
    require_odd(g)?;
    let n = g.vertex_count();
    // removing u leaves a perfect matching iff some odd matching isolates u
    let pm_without: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|u| has_perfect_matching(&g.delete_vertices(&[u]).expect("vertex exists").0))
        .collect();
    g.edges()
        .par_iter()
        .map(|&(a, b)| {
            Ok(EdgeReport {
                edge: (a, b),
                class: classify_edge(g, (a, b))?,
                pm_endpoint: [a, b].into_iter().find(|&u| pm_without[u]),
            })
        })
        .collect()
}

/// Whether the flip graph of `g` is connected, with the first edge that
/// violates the criterion otherwise.
pub fn is_flip_connected(g: &Graph) -> Result<(bool, Option<(usize, usize)>), ConnectivityError> {
    let reports = edge_reports(g)?;
    match reports.iter().find(|r| !r.is_fine()) {
        Some(r) => Ok((false, Some(r.edge))),
        None => Ok((true, None)),
    }
}
