//! Set cover to flip distance, and the map from flip sequences back to
//! covers.

use std::collections::BTreeSet;

use crate::graph::{content_lines, parse_num, Graph, GraphBuilder, ParseError};
use crate::matching::{validate_sequence, FlipSequence, OddMatching};

use super::{check_length, matching, Meta, ReductionError, ReductionParams, Role};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub n: usize,
    /// Elements are 1-based.
    pub sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<SetCoverInstance, ReductionError> {
        let mut covered = vec![false; n + 1];
        let mut clean = Vec::with_capacity(sets.len());
        for (i, s) in sets.into_iter().enumerate() {
            if s.is_empty() {
                return Err(ReductionError::EmptySet(i + 1));
            }
            let s: BTreeSet<usize> = s.into_iter().collect();
            for &e in &s {
                if e == 0 || e > n {
                    return Err(ReductionError::ElementOutOfRange {
                        set: i + 1,
                        element: e,
                        n,
                    });
                }
                covered[e] = true;
            }
            clean.push(s.into_iter().collect());
        }
        if let Some(e) = (1..=n).find(|&e| !covered[e]) {
            return Err(ReductionError::NotCovering(e));
        }
        Ok(SetCoverInstance { n, sets: clean })
    }

    pub fn covers(&self, chosen: &[usize]) -> bool {
        let mut covered = vec![false; self.n + 1];
        for &i in chosen {
            for &e in &self.sets[i] {
                covered[e] = true;
            }
        }
        covered[1..].iter().all(|&c| c)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SetCoverFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Instance(#[from] ReductionError),
}

/// `p setcover <n> <t>` then `t` lines `s <elements...> 0`.
pub fn parse_setcover(text: &str) -> Result<SetCoverInstance, SetCoverFileError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(1, "missing `p setcover` header"))?;
    if header.len() != 4 || header[0] != "p" || header[1] != "setcover" {
        return Err(ParseError::syntax(hline, "bad header, expected `p setcover <n> <t>`").into());
    }
    let n = parse_num(hline, header[2])?;
    let t = parse_num(hline, header[3])?;
    let mut sets = Vec::new();
    for (line, toks) in lines {
        if toks[0] != "s" || toks.last() != Some(&"0") {
            return Err(ParseError::syntax(line, "expected `s <elements...> 0`").into());
        }
        let elems = toks[1..toks.len() - 1]
            .iter()
            .map(|t| parse_num(line, t))
            .collect::<Result<Vec<_>, _>>()?;
        sets.push(elems);
    }
    if sets.len() != t {
        return Err(ParseError::syntax(hline, format!("header declares {t} sets but {} were given", sets.len())).into());
    }
    Ok(SetCoverInstance::new(n, sets)?)
}

pub fn serialize_setcover(sc: &SetCoverInstance) -> String {
    let mut out = format!("p setcover {} {}\n", sc.n, sc.sets.len());
    for s in &sc.sets {
        out.push('s');
        for e in s {
            out.push_str(&format!(" {e}"));
        }
        out.push_str(" 0\n");
    }
    out
}

#[derive(Clone, Debug)]
pub struct SetCoverReduction {
    pub graph: Graph,
    pub m_in: OddMatching,
    pub m_tar: OddMatching,
    /// Vertices per set path.
    pub path_len: usize,
    pub n: usize,
    pub t: usize,
    pub u: usize,
    pub roles: Vec<Role>,
    /// Far end of each set path.
    pub far_ends: Vec<usize>,
}

/// Smallest even path length at least `6n`.
pub fn default_path_len(n: usize) -> usize {
    6 * n + 2
}

pub fn build_setcover_instance(sc: &SetCoverInstance, p: &ReductionParams) -> Result<SetCoverReduction, ReductionError> {
    let sc = SetCoverInstance::new(sc.n, sc.sets.clone())?;
    let big_v = check_length("path length", p.path_len_override)?.unwrap_or(default_path_len(sc.n));
    let mut b = GraphBuilder::new();
    let mut roles = Vec::new();
    let mut add = |b: &mut GraphBuilder, r| {
        roles.push(r);
        b.add_vertex()
    };
    let u = add(&mut b, Role::Shared);
    let mut paths = Vec::new();
    for set in 1..=sc.sets.len() {
        let ids: Vec<usize> = (1..=big_v).map(|pos| add(&mut b, Role::SetPath { set, pos })).collect();
        b.add_edge(u, ids[0]);
        for w in ids.windows(2) {
            b.add_edge(w[0], w[1]);
        }
        paths.push(ids);
    }
    let mut elements = Vec::new();
    for element in 1..=sc.n {
        let ids: Vec<usize> = (1..=4).map(|pos| add(&mut b, Role::Element { element, pos })).collect();
        for i in 0..4 {
            b.add_edge(ids[i], ids[(i + 1) % 4]);
        }
        elements.push(ids);
    }
    for (i, s) in sc.sets.iter().enumerate() {
        for &e in s {
            b.add_edge(*paths[i].last().unwrap(), elements[e - 1][0]);
        }
    }
    let graph = b.build()?;
    let expected = 1 + sc.sets.len() * big_v + 4 * sc.n;
    if graph.vertex_count() != expected || expected % 2 == 0 {
        return Err(ReductionError::Invariant(format!(
            "vertex count {} (expected odd {expected})",
            graph.vertex_count()
        )));
    }

    let mut path_edges = Vec::new();
    for ids in &paths {
        path_edges.extend(ids.chunks(2).map(|c| (c[0], c[1])));
    }
    let mut m_in = path_edges.clone();
    let mut m_tar = path_edges;
    for c in &elements {
        m_in.extend([(c[0], c[1]), (c[2], c[3])]);
        m_tar.extend([(c[1], c[2]), (c[3], c[0])]);
    }
    let m_in = matching(&graph, u, m_in)?;
    let m_tar = matching(&graph, u, m_tar)?;

    let colors = graph
        .bipartition()
        .ok_or_else(|| ReductionError::Invariant("set-cover graph is not bipartite".into()))?;
    let side = colors.color(u);
    let same_side = paths
        .iter()
        .flat_map(|ids| ids.iter().skip(1).step_by(2))
        .chain(elements.iter().flat_map(|c| [&c[1], &c[3]]))
        .all(|&x| colors.color(x) == side);
    if !same_side {
        return Err(ReductionError::Invariant("2-coloring does not match the construction".into()));
    }

    Ok(SetCoverReduction {
        graph,
        m_in,
        m_tar,
        path_len: big_v,
        n: sc.n,
        t: sc.sets.len(),
        u,
        roles,
        far_ends: paths.iter().map(|ids| *ids.last().unwrap()).collect(),
    })
}

impl SetCoverReduction {
    /// Reassembles a reduction from its files; sizes come from the roles.
    pub fn from_parts(
        graph: Graph,
        roles: Vec<Role>,
        m_in: OddMatching,
        m_tar: OddMatching,
    ) -> Result<SetCoverReduction, ReductionError> {
        let mut u = None;
        let mut n = 0;
        let mut path_len = 0;
        let mut far: Vec<(usize, usize, usize)> = Vec::new();
        for (x, r) in roles.iter().enumerate() {
            match *r {
                Role::Shared => u = Some(x),
                Role::Element { element, .. } => n = n.max(element),
                Role::SetPath { set, pos } => {
                    path_len = path_len.max(pos);
                    far.push((set, pos, x));
                }
                _ => return Err(ReductionError::Invariant(format!("unexpected role {r} in a set-cover reduction"))),
            }
        }
        let u = u.ok_or_else(|| ReductionError::Invariant("no shared vertex".into()))?;
        let t = far.iter().map(|f| f.0).max().unwrap_or(0);
        let mut far_ends = vec![usize::MAX; t];
        for (set, pos, x) in far {
            if pos == path_len {
                far_ends[set - 1] = x;
            }
        }
        if far_ends.contains(&usize::MAX) {
            return Err(ReductionError::Invariant("set paths of unequal length".into()));
        }
        Ok(SetCoverReduction {
            graph,
            m_in,
            m_tar,
            path_len,
            n,
            t,
            u,
            roles,
            far_ends,
        })
    }

    pub fn meta(&self, sc: &SetCoverInstance) -> Meta {
        let mut m = Meta::default();
        m.push("kind", "setcover");
        m.push("n", self.n);
        m.push("t", self.t);
        m.push("path_len", self.path_len);
        m.push("vertices", self.graph.vertex_count());
        m.push("u", self.u + 1);
        m.push("distance_formula", format!("c*{}+{}", self.path_len, 3 * self.n));
        m.push("instance_sha256", super::sha256_hex(serialize_setcover(sc).as_bytes()));
        m
    }

    /// Flip distance that a cover of size `c` corresponds to.
    pub fn distance_for_cover(&self, c: usize) -> usize {
        c * self.path_len + 3 * self.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredCover {
    /// 0-based set indices, ascending.
    pub cover: Vec<usize>,
    pub size_bound: usize,
}

/// Sets whose far path end ever held the isolated vertex along `s`, and
/// the size bound `floor((|s| - 3n) / path_len)`.
pub fn recover_cover(red: &SetCoverReduction, s: &FlipSequence) -> Result<RecoveredCover, ReductionError> {
    if s.start != red.m_in {
        return Err(ReductionError::Invariant("sequence does not start at the start matching".into()));
    }
    let (end, len) = validate_sequence(&red.graph, s).map_err(|e| ReductionError::Matching(e.source))?;
    if end != red.m_tar {
        return Err(ReductionError::WrongEnd);
    }
    let mut visited = BTreeSet::new();
    let mut m = s.start.clone();
    let mut note = |iso: usize| {
        if let Some(i) = red.far_ends.iter().position(|&f| f == iso) {
            visited.insert(i);
        }
    };
    note(m.isolated());
    for &w in &s.steps {
        m = crate::matching::apply_flip(&red.graph, &m, w)?;
        note(m.isolated());
    }
    Ok(RecoveredCover {
        cover: visited.into_iter().collect(),
        size_bound: len.saturating_sub(3 * red.n) / red.path_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six_element_instance() -> SetCoverInstance {
        SetCoverInstance::new(6, vec![vec![1], vec![1, 2, 3, 4, 5], vec![2, 4], vec![3, 6]]).unwrap()
    }

    #[test]
    fn six_element_instance_shape() {
        let red = build_setcover_instance(&six_element_instance(), &ReductionParams::default()).unwrap();
        assert_eq!(red.path_len, 38);
        assert_eq!((red.n, red.t), (6, 4));
        assert_eq!(red.graph.vertex_count(), 1 + 4 * 38 + 24);
        assert_eq!(red.m_in.isolated(), red.u);
        assert_eq!(red.m_tar.isolated(), red.u);
        let back = SetCoverReduction::from_parts(red.graph.clone(), red.roles.clone(), red.m_in.clone(), red.m_tar.clone())
            .unwrap();
        assert_eq!(back.far_ends, red.far_ends);
        assert_eq!(back.path_len, 38);
    }

    #[test]
    fn rejects_bad_systems() {
        assert!(matches!(
            SetCoverInstance::new(2, vec![vec![1]]),
            Err(ReductionError::NotCovering(2))
        ));
        assert!(matches!(SetCoverInstance::new(1, vec![vec![]]), Err(ReductionError::EmptySet(1))));
        let sc = SetCoverInstance::new(1, vec![vec![1]]).unwrap();
        let odd = ReductionParams {
            path_len_override: Some(3),
            ..Default::default()
        };
        assert!(build_setcover_instance(&sc, &odd).is_err());
    }

    #[test]
    fn file_round_trip() {
        let sc = six_element_instance();
        let text = serialize_setcover(&sc);
        assert_eq!(parse_setcover(&text).unwrap(), sc);
        assert!(parse_setcover("p setcover 2 1\ns 1 0\n").is_err());
        assert!(parse_setcover("p setcover 1 1\ns 1\n").is_err());
    }
}
