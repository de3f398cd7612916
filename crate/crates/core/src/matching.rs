//! Odd matchings, flips, flip sequences and the union decomposition of two
//! odd matchings.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{content_lines, parse_num, Graph, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("graph has an even number of vertices ({0}); odd matchings cannot exist")]
    EvenVertexCount(usize),
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("edge ({0}, {1}) is not in the graph")]
    NotAnEdge(usize, usize),
    #[error("vertex {0} is covered twice")]
    Overlap(usize),
    #[error("vertex {0} is neither matched nor isolated")]
    Uncovered(usize),
    #[error("isolated vertex {0} is also matched")]
    IsolatedMatched(usize),
    #[error("vertex {w} is not adjacent to the isolated vertex {isolated}")]
    IllegalFlip { isolated: usize, w: usize },
    #[error("matchings live on different vertex counts ({0} vs {1})")]
    SizeMismatch(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("illegal flip at step {index}: {source}")]
pub struct SequenceError {
    pub index: usize,
    #[source]
    pub source: MatchingError,
}

/// A matching covering every vertex except `isolated`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OddMatching {
    // mate[isolated] == isolated
    mate: Vec<usize>,
    isolated: usize,
}

impl OddMatching {
    /// Validates `edges` against `g` and the single-isolated-vertex rule.
    pub fn new<I>(g: &Graph, isolated: usize, edges: I) -> Result<OddMatching, MatchingError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = g.vertex_count();
        if n % 2 == 0 {
            return Err(MatchingError::EvenVertexCount(n));
        }
        if isolated >= n {
            return Err(MatchingError::OutOfRange(isolated));
        }
        let mut mate = vec![usize::MAX; n];
        mate[isolated] = isolated;
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(MatchingError::OutOfRange(a.max(b)));
            }
            if !g.has_edge(a, b) {
                return Err(MatchingError::NotAnEdge(a, b));
            }
            for x in [a, b] {
                if x == isolated {
                    return Err(MatchingError::IsolatedMatched(x));
                }
                if mate[x] != usize::MAX {
                    return Err(MatchingError::Overlap(x));
                }
            }
            mate[a] = b;
            mate[b] = a;
        }
        if let Some(v) = mate.iter().position(|&m| m == usize::MAX) {
            return Err(MatchingError::Uncovered(v));
        }
        Ok(OddMatching { mate, isolated })
    }

    /// Trusted constructor for internal use (search decoding, builders).
    pub(crate) fn from_mates(mate: Vec<usize>, isolated: usize) -> OddMatching {
        let m = OddMatching { mate, isolated };
        debug_assert!(m.is_consistent());
        m
    }

    fn is_consistent(&self) -> bool {
        self.mate[self.isolated] == self.isolated
            && self
                .mate
                .iter()
                .enumerate()
                .all(|(v, &u)| u < self.mate.len() && self.mate[u] == v && (u != v || v == self.isolated))
    }

    pub fn vertex_count(&self) -> usize {
        self.mate.len()
    }

    pub fn isolated(&self) -> usize {
        self.isolated
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        let u = self.mate[v];
        (u != v).then_some(u)
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.mate.len() && self.mate[a] == b
    }

    /// Matched edges as sorted `(min, max)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(v, &u)| v < u)
            .map(|(v, &u)| (v, u))
            .collect()
    }
}

/// Matches the isolated vertex to `w`; `w`'s former partner becomes isolated.
pub fn apply_flip(g: &Graph, m: &OddMatching, w: usize) -> Result<OddMatching, MatchingError> {
    let v = m.isolated;
    if w >= m.vertex_count() || w == v || !g.has_edge(v, w) {
        return Err(MatchingError::IllegalFlip { isolated: v, w });
    }
    let p = m.mate[w];
    let mut mate = m.mate.clone();
    mate[v] = w;
    mate[w] = v;
    mate[p] = p;
    Ok(OddMatching::from_mates(mate, p))
}

/// Vertices the isolated vertex can be matched to, ascending.
pub fn legal_flips(g: &Graph, m: &OddMatching) -> Vec<usize> {
    g.neighbors(m.isolated).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipSequence {
    pub start: OddMatching,
    /// Target vertex of each flip.
    pub steps: Vec<usize>,
}

/// Replays `s`, returning the final matching and the number of flips.
pub fn validate_sequence(g: &Graph, s: &FlipSequence) -> Result<(OddMatching, usize), SequenceError> {
    let mut cur = s.start.clone();
    for (index, &w) in s.steps.iter().enumerate() {
        cur = apply_flip(g, &cur, w).map_err(|source| SequenceError { index, source })?;
    }
    Ok((cur, s.steps.len()))
}

/// Components of the union of two odd matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionDecomposition {
    /// From the isolated vertex of the first matching to that of the second.
    pub path: Vec<usize>,
    /// Each cycle starts at its smallest vertex, then its smaller neighbor.
    pub cycles: Vec<Vec<usize>>,
    pub happy_edges: Vec<(usize, usize)>,
}

impl UnionDecomposition {
    /// Number of second-matching edges on the path.
    pub fn path_k(&self) -> usize {
        (self.path.len() - 1) / 2
    }

    /// Total edge count over all components.
    pub fn edge_count(&self) -> usize {
        (self.path.len() - 1) + self.cycles.iter().map(Vec::len).sum::<usize>() + self.happy_edges.len()
    }
}

pub fn decompose_union(m1: &OddMatching, m2: &OddMatching) -> Result<UnionDecomposition, MatchingError> {
    let n = m1.vertex_count();
    if n != m2.vertex_count() {
        return Err(MatchingError::SizeMismatch(n, m2.vertex_count()));
    }
    let mut seen = vec![false; n];

    let mut path = vec![m1.isolated];
    seen[m1.isolated] = true;
    let mut cur = m1.isolated;
    let mut use_second = true;
    while cur != m2.isolated {
        let next = if use_second { m2.mate[cur] } else { m1.mate[cur] };
        path.push(next);
        seen[next] = true;
        cur = next;
        use_second = !use_second;
    }

    let mut happy_edges = Vec::new();
    let mut cycles = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let (a, b) = (m1.mate[s], m2.mate[s]);
        if a == b {
            seen[s] = true;
            seen[a] = true;
            happy_edges.push((s, a));
            continue;
        }
        // s is the smallest vertex on its cycle; walk toward the smaller neighbor
        let (first, via_second) = if b < a { (b, true) } else { (a, false) };
        let mut cycle = vec![s];
        seen[s] = true;
        let mut cur = first;
        let mut use_second = !via_second;
        while cur != s {
            cycle.push(cur);
            seen[cur] = true;
            cur = if use_second { m2.mate[cur] } else { m1.mate[cur] };
            use_second = !use_second;
        }
        cycles.push(cycle);
    }
    Ok(UnionDecomposition {
        path,
        cycles,
        happy_edges,
    })
}

/// Path contributes its `k`, each cycle `k + 1`, happy edges nothing.
pub fn charging_lower_bound(d: &UnionDecomposition) -> usize {
    d.path_k() + d.cycles.iter().map(|c| c.len() / 2 + 1).sum::<usize>()
}

/// Lower bound on the flip distance between two matchings.
pub fn lower_bound(m1: &OddMatching, m2: &OddMatching) -> Result<usize, MatchingError> {
    decompose_union(m1, m2).map(|d| charging_lower_bound(&d))
}

/// Parses `p matching <n>`, `i <v>`, then `m <u> <v>` lines into raw parts
/// (0-indexed). Validation against a graph happens in [`OddMatching::new`].
pub fn parse_matching_parts(text: &str) -> Result<(usize, usize, Vec<(usize, usize)>), ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(1, "missing `p matching` header"))?;
    if header.len() != 3 || header[0] != "p" || header[1] != "matching" {
        return Err(ParseError::syntax(hline, "bad header, expected `p matching <n>`"));
    }
    let n = parse_num(hline, header[2])?;
    let check = |line: usize, x: usize| {
        if x == 0 || x > n {
            Err(ParseError::syntax(line, format!("vertex {x} out of range 1..={n}")))
        } else {
            Ok(x - 1)
        }
    };
    let (iline, itoks) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(hline + 1, "missing `i <v>` line"))?;
    if itoks.len() != 2 || itoks[0] != "i" {
        return Err(ParseError::syntax(iline, "expected `i <v>`"));
    }
    let iso = check(iline, parse_num(iline, itoks[1])?)?;
    let mut edges = Vec::new();
    for (line, toks) in lines {
        if toks.len() != 3 || toks[0] != "m" {
            return Err(ParseError::syntax(line, "expected `m <u> <v>`"));
        }
        let a = check(line, parse_num(line, toks[1])?)?;
        let b = check(line, parse_num(line, toks[2])?)?;
        edges.push((a, b));
    }
    Ok((n, iso, edges))
}

#[derive(Debug, Error)]
pub enum MatchingFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("matching declares {declared} vertices but the graph has {actual}")]
    WrongSize { declared: usize, actual: usize },
    #[error(transparent)]
    Invalid(#[from] MatchingError),
}

pub fn parse_matching(g: &Graph, text: &str) -> Result<OddMatching, MatchingFileError> {
    let (n, iso, edges) = parse_matching_parts(text)?;
    if n != g.vertex_count() {
        return Err(MatchingFileError::WrongSize {
            declared: n,
            actual: g.vertex_count(),
        });
    }
    Ok(OddMatching::new(g, iso, edges)?)
}

pub fn serialize_matching(m: &OddMatching) -> String {
    let mut out = String::new();
    writeln!(out, "p matching {}", m.vertex_count()).unwrap();
    writeln!(out, "i {}", m.isolated + 1).unwrap();
    for (a, b) in m.edges() {
        writeln!(out, "m {} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// `f <w>` lines, 1-indexed.
pub fn serialize_steps(steps: &[usize]) -> String {
    let mut out = String::new();
    for &w in steps {
        writeln!(out, "f {}", w + 1).unwrap();
    }
    out
}

/// Reads `f <w>` lines; a leading `distance <k>` line is accepted and ignored.
pub fn parse_steps(text: &str) -> Result<Vec<usize>, ParseError> {
    let mut steps = Vec::new();
    for (line, toks) in content_lines(text) {
        match toks.as_slice() {
            ["distance", _] => {}
            ["f", w] => {
                let w = parse_num(line, w)?;
                if w == 0 {
                    return Err(ParseError::syntax(line, "vertex 0 out of range"));
                }
                steps.push(w - 1);
            }
            _ => return Err(ParseError::syntax(line, "expected `f <w>`")),
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{cycle, path};

    // tests use 1-indexed vertex names
    fn m(g: &Graph, iso: usize, edges: &[(usize, usize)]) -> OddMatching {
        OddMatching::new(g, iso - 1, edges.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    #[test]
    fn flip_on_p3() {
        let g = path(3);
        let start = m(&g, 3, &[(1, 2)]);
        let next = apply_flip(&g, &start, 1).unwrap();
        assert_eq!(next, m(&g, 1, &[(2, 3)]));
        assert_eq!(apply_flip(&g, &next, 1).unwrap(), start);
    }

    #[test]
    fn flip_on_c5() {
        let g = cycle(5);
        let start = m(&g, 1, &[(2, 3), (4, 5)]);
        let next = apply_flip(&g, &start, 1).unwrap();
        assert_eq!(next, m(&g, 3, &[(1, 2), (4, 5)]));
        // the reverse step flips to the same vertex
        assert_eq!(apply_flip(&g, &next, 1).unwrap(), start);
        assert_eq!(
            apply_flip(&g, &start, 2),
            Err(MatchingError::IllegalFlip { isolated: 0, w: 2 })
        );
    }

    #[test]
    fn legal_flip_lists() {
        let k1 = Graph::empty(1);
        assert!(legal_flips(&k1, &m(&k1, 1, &[])).is_empty());
        let c5 = cycle(5);
        assert_eq!(legal_flips(&c5, &m(&c5, 1, &[(2, 3), (4, 5)])), vec![1, 4]);
        let p3 = path(3);
        assert_eq!(legal_flips(&p3, &m(&p3, 3, &[(1, 2)])), vec![1]);
    }

    #[test]
    fn construction_errors() {
        let c4 = cycle(4);
        assert_eq!(OddMatching::new(&c4, 0, [(1, 2)]), Err(MatchingError::EvenVertexCount(4)));
        let c5 = cycle(5);
        assert_eq!(OddMatching::new(&c5, 0, [(1, 3), (2, 4)]), Err(MatchingError::NotAnEdge(1, 3)));
        assert_eq!(OddMatching::new(&c5, 0, [(1, 2)]), Err(MatchingError::Uncovered(3)));
        assert_eq!(OddMatching::new(&c5, 0, [(0, 1), (2, 3)]), Err(MatchingError::IsolatedMatched(0)));
        assert_eq!(OddMatching::new(&c5, 0, [(1, 2), (2, 3)]), Err(MatchingError::Overlap(2)));
    }

    #[test]
    fn sequence_validation() {
        let p3 = path(3);
        let start = m(&p3, 3, &[(1, 2)]);
        let empty = FlipSequence { start: start.clone(), steps: vec![] };
        assert_eq!(validate_sequence(&p3, &empty).unwrap(), (start.clone(), 0));
        let one = FlipSequence { start, steps: vec![1] };
        assert_eq!(validate_sequence(&p3, &one).unwrap(), (m(&p3, 1, &[(2, 3)]), 1));

        let c5 = cycle(5);
        let s = FlipSequence { start: m(&c5, 1, &[(2, 3), (4, 5)]), steps: vec![1, 4] };
        let err = validate_sequence(&c5, &s).unwrap_err();
        assert_eq!(err.index, 1);
    }

    #[test]
    fn union_of_identical_matchings() {
        let c5 = cycle(5);
        let a = m(&c5, 1, &[(2, 3), (4, 5)]);
        let d = decompose_union(&a, &a).unwrap();
        assert_eq!(d.path, vec![0]);
        assert!(d.cycles.is_empty());
        assert_eq!(d.happy_edges, vec![(1, 2), (3, 4)]);
        assert_eq!(charging_lower_bound(&d), 0);
    }

    #[test]
    fn union_on_c5() {
        let c5 = cycle(5);
        let a = m(&c5, 1, &[(2, 3), (4, 5)]);
        let b = m(&c5, 3, &[(1, 2), (4, 5)]);
        let d = decompose_union(&a, &b).unwrap();
        assert_eq!(d.path, vec![0, 1, 2]);
        assert_eq!(d.happy_edges, vec![(3, 4)]);
        assert!(d.cycles.is_empty());
        assert_eq!(charging_lower_bound(&d), 1);
    }

    #[test]
    fn union_with_a_four_cycle() {
        // 8-cycle 1..8 plus pendant 9 on vertex 1; both matchings isolate 9.
        // Inside, vertices 5..8 stay happy and 1..4 alternate through chord (1,4).
        let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        edges.push((0, 8));
        edges.push((0, 3));
        let g = Graph::new(9, edges).unwrap();
        let a = m(&g, 9, &[(1, 2), (3, 4), (5, 6), (7, 8)]);
        let b = m(&g, 9, &[(2, 3), (1, 4), (5, 6), (7, 8)]);
        let d = decompose_union(&a, &b).unwrap();
        assert_eq!(d.path, vec![8]);
        assert_eq!(d.cycles, vec![vec![0, 1, 2, 3]]);
        assert_eq!(d.happy_edges, vec![(4, 5), (6, 7)]);
        assert_eq!(charging_lower_bound(&d), 3);
    }

    #[test]
    fn six_cycle_charges_four() {
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.push((0, 6));
        let g = Graph::new(7, edges).unwrap();
        let a = m(&g, 7, &[(1, 2), (3, 4), (5, 6)]);
        let b = m(&g, 7, &[(2, 3), (4, 5), (6, 1)]);
        let d = decompose_union(&a, &b).unwrap();
        assert_eq!(d.cycles.len(), 1);
        assert_eq!(charging_lower_bound(&d), 4);
    }

    #[test]
    fn matching_file_round_trip() {
        let c5 = cycle(5);
        let a = m(&c5, 1, &[(4, 5), (2, 3)]);
        let text = serialize_matching(&a);
        assert_eq!(text, "p matching 5\ni 1\nm 2 3\nm 4 5\n");
        assert_eq!(parse_matching(&c5, &text).unwrap(), a);
        assert!(parse_matching(&c5, "p matching 5\ni 1\nm 1 3\nm 4 5\n").is_err());
        assert!(matches!(
            parse_matching(&c5, "p matching 7\ni 1\n"),
            Err(MatchingFileError::WrongSize { .. })
        ));
    }

    #[test]
    fn steps_round_trip() {
        let text = serialize_steps(&[0, 4, 2]);
        assert_eq!(text, "f 1\nf 5\nf 3\n");
        assert_eq!(parse_steps(&format!("distance 3\n{text}")).unwrap(), vec![0, 4, 2]);
        assert!(parse_steps("g 1\n").is_err());
    }
}
