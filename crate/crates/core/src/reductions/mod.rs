//! Generators for the diameter, radius and set-cover hardness
//! constructions, with their thresholds, witness matchings, role
//! annotations and the set-cover recovery map.

use std::fmt;

use thiserror::Error;

use crate::graph::{content_lines, Graph, GraphBuilder, GraphError, ParseError};
use crate::matching::{MatchingError, OddMatching};
use crate::search::{SearchConfig, SearchError};

pub mod diameter;
pub mod formula;
pub mod gadgets;
pub mod radius;
pub mod setcover;

pub use diameter::{build_diameter_instance, build_witness_pair, DiameterInstance};
pub use formula::{parse_formula, Literal, QuantBlock, QuantifiedFormula, Quantifier};
pub use radius::{build_radius_instance, build_radius_witnesses, RadiusInstance};
pub use setcover::{
    build_setcover_instance, parse_setcover, recover_cover, serialize_setcover, RecoveredCover, SetCoverInstance,
    SetCoverReduction,
};

use gadgets::GadgetShape;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Forcing paths just longer than twice the exact flip-graph diameter
    /// of what they hang on.
    #[default]
    SafeMinimal,
    /// Path lengths `2c(s+1)` and `2c(s+ell+1)` from the linear diameter
    /// bound with constant `c`.
    ClosedForm,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::SafeMinimal => "safe-minimal",
            Mode::ClosedForm => "closed-form",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct ReductionParams {
    pub mode: Mode,
    pub c_constant: Option<usize>,
    pub ell_override: Option<usize>,
    pub big_l_override: Option<usize>,
    pub path_len_override: Option<usize>,
    /// Limits for the diameter computations of safe-minimal mode.
    pub search: SearchConfig,
}

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("expected quantifier prefix {expected}, found {found}")]
    WrongPrefix { expected: &'static str, found: String },
    #[error("{name} must be an even positive integer, got {value}")]
    BadLength { name: &'static str, value: usize },
    #[error("closed-form mode needs the constant c")]
    MissingConstant,
    #[error("assignment has {found} values, expected {expected}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("set system does not cover element {0}")]
    NotCovering(usize),
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("set {set} contains element {element} outside 1..={n}")]
    ElementOutOfRange { set: usize, element: usize, n: usize },
    #[error("sequence does not end at the target matching")]
    WrongEnd,
    #[error("construction invariant violated: {0}")]
    Invariant(String),
    #[error("computing a forcing path length: {0}")]
    Search(#[from] SearchError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// What a vertex of a generated graph stands for. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Center,
    /// Forcing path hung on the center.
    BigPath(usize),
    /// Path from the center to the 4-cycle `Z` (radius only).
    SmallPath(usize),
    Z(usize),
    Clause { clause: usize, pos: usize },
    Forall { var: usize, label: usize },
    Exists1 { var: usize, label: usize },
    Exists2 { var: usize, label: usize },
    Shared,
    SetPath { set: usize, pos: usize },
    Element { element: usize, pos: usize },
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::Center => write!(f, "v"),
            Role::BigPath(i) => write!(f, "P.{i}"),
            Role::SmallPath(i) => write!(f, "p.{i}"),
            Role::Z(i) => write!(f, "Z.{i}"),
            Role::Clause { clause, pos } => write!(f, "clause.{clause}.{pos}"),
            Role::Forall { var, label } => write!(f, "forall.{var}.{label}"),
            Role::Exists1 { var, label } => write!(f, "exists1.{var}.{label}"),
            Role::Exists2 { var, label } => write!(f, "exists2.{var}.{label}"),
            Role::Shared => write!(f, "u"),
            Role::SetPath { set, pos } => write!(f, "setpath.{set}.{pos}"),
            Role::Element { element, pos } => write!(f, "element.{element}.{pos}"),
        }
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Role, String> {
        let parts: Vec<&str> = s.split('.').collect();
        let num = |t: &str| -> Result<usize, String> {
            match t.parse::<usize>() {
                Ok(x) if x >= 1 => Ok(x),
                _ => Err(format!("bad index `{t}` in role `{s}`")),
            }
        };
        let two = |a: &str, b: &str| -> Result<(usize, usize), String> { Ok((num(a)?, num(b)?)) };
        Ok(match parts.as_slice() {
            ["v"] => Role::Center,
            ["u"] => Role::Shared,
            ["P", i] => Role::BigPath(num(i)?),
            ["p", i] => Role::SmallPath(num(i)?),
            ["Z", i] => Role::Z(num(i)?),
            ["clause", a, b] => {
                let (clause, pos) = two(a, b)?;
                Role::Clause { clause, pos }
            }
            ["forall", a, b] => {
                let (var, label) = two(a, b)?;
                Role::Forall { var, label }
            }
            ["exists1", a, b] => {
                let (var, label) = two(a, b)?;
                Role::Exists1 { var, label }
            }
            ["exists2", a, b] => {
                let (var, label) = two(a, b)?;
                Role::Exists2 { var, label }
            }
            ["setpath", a, b] => {
                let (set, pos) = two(a, b)?;
                Role::SetPath { set, pos }
            }
            ["element", a, b] => {
                let (element, pos) = two(a, b)?;
                Role::Element { element, pos }
            }
            _ => return Err(format!("unknown role `{s}`")),
        })
    }
}

/// `role <vertex> <tag>` lines, 1-based, sorted by vertex.
pub fn serialize_roles(roles: &[Role]) -> String {
    roles
        .iter()
        .enumerate()
        .map(|(i, r)| format!("role {} {r}\n", i + 1))
        .collect()
}

pub fn parse_roles(n: usize, text: &str) -> Result<Vec<Role>, ParseError> {
    let mut roles = vec![None; n];
    for (line, toks) in content_lines(text) {
        if toks.len() != 3 || toks[0] != "role" {
            return Err(ParseError::syntax(line, "expected `role <vertex> <tag>`"));
        }
        let v = crate::graph::parse_num(line, toks[1])?;
        if v == 0 || v > n {
            return Err(ParseError::syntax(line, format!("vertex {v} outside 1..={n}")));
        }
        if roles[v - 1].is_some() {
            return Err(ParseError::syntax(line, format!("vertex {v} has two roles")));
        }
        roles[v - 1] = Some(toks[2].parse::<Role>().map_err(|e| ParseError::syntax(line, e))?);
    }
    roles
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| ParseError::syntax(1, format!("vertex {} has no role", i + 1))))
        .collect()
}

/// `key value` lines in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta(pub Vec<(String, String)>);

impl Meta {
    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Meta, ParseError> {
        let mut m = Meta::default();
        for (line, toks) in content_lines(text) {
            if toks.len() < 2 {
                return Err(ParseError::syntax(line, "expected `<key> <value>`"));
            }
            m.0.push((toks[0].to_string(), toks[1..].join(" ")));
        }
        Ok(m)
    }
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.0 {
            writeln!(f, "{k} {v}")?;
        }
        Ok(())
    }
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn check_length(name: &'static str, value: Option<usize>) -> Result<Option<usize>, ReductionError> {
    match value {
        Some(x) if x == 0 || x % 2 == 1 => Err(ReductionError::BadLength { name, value: x }),
        other => Ok(other),
    }
}

/// Smallest even integer strictly greater than `2 * d`.
pub fn smallest_even_above_twice(d: usize) -> usize {
    2 * d + 2
}

pub(crate) fn check_prefix(phi: &QuantifiedFormula, expected: &[Quantifier], name: &'static str) -> Result<(), ReductionError> {
    if phi.quantifiers() != expected {
        let found = phi
            .quantifiers()
            .iter()
            .map(|q| match q {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
            })
            .collect::<Vec<_>>()
            .join(",");
        return Err(ReductionError::WrongPrefix {
            expected: name,
            found: if found.is_empty() { "(none)".into() } else { found },
        });
    }
    Ok(())
}

/// Center, variable gadgets and clause gadgets of a formula, before any
/// path is attached.
pub(crate) struct Core {
    pub builder: GraphBuilder,
    pub roles: Vec<Role>,
    pub v: usize,
    /// `[block][var][label - 1]` -> vertex.
    pub gadgets: Vec<Vec<Vec<usize>>>,
    /// `[clause][pos - 1]` -> vertex.
    pub clauses: Vec<Vec<usize>>,
}

impl Core {
    pub fn vertex(&self, block: usize, var: usize, label: usize) -> usize {
        self.gadgets[block][var][label - 1]
    }

    pub fn add_vertex(&mut self, role: Role) -> usize {
        self.roles.push(role);
        self.builder.add_vertex()
    }
}

pub(crate) type RoleFn = fn(usize, usize) -> Role;

pub(crate) fn assemble_core(phi: &QuantifiedFormula, shapes: &[(&GadgetShape, RoleFn)]) -> Core {
    let mut core = Core {
        builder: GraphBuilder::new(),
        roles: Vec::new(),
        v: 0,
        gadgets: Vec::new(),
        clauses: Vec::new(),
    };
    core.v = core.add_vertex(Role::Center);
    for (block, &(shape, role)) in phi.blocks().iter().zip(shapes) {
        let mut per_block = Vec::new();
        for var in 0..block.vars.len() {
            let ids: Vec<usize> = (1..=shape.size).map(|l| core.add_vertex(role(var + 1, l))).collect();
            for (a, b) in shape.edges() {
                core.builder.add_edge(ids[a - 1], ids[b - 1]);
            }
            for &l in shape.entry {
                core.builder.add_edge(core.v, ids[l - 1]);
            }
            per_block.push(ids);
        }
        core.gadgets.push(per_block);
    }
    for j in 0..phi.clauses().len() {
        let ids: Vec<usize> = (1..=4)
            .map(|pos| core.add_vertex(Role::Clause { clause: j + 1, pos }))
            .collect();
        for (a, b) in gadgets::CLAUSE_4.edges() {
            core.builder.add_edge(ids[a - 1], ids[b - 1]);
        }
        core.clauses.push(ids);
    }
    // a literal repeated in one clause would wire the same edge twice
    let mut wired = std::collections::BTreeSet::new();
    for j in 0..phi.clauses().len() {
        let port = core.clauses[j][gadgets::CLAUSE_PORT - 1];
        for lit in phi.clause_literals(j) {
            let (shape, _) = shapes[lit.block];
            for &l in shape.ports(lit.positive) {
                let x = core.vertex(lit.block, lit.index, l);
                if wired.insert((x, port)) {
                    core.builder.add_edge(x, port);
                }
            }
        }
    }
    core
}

/// Witness edges shared by both constructions: each gadget's pair of
/// perfect matchings, as vertex pairs, checked to form one alternating
/// cycle over the whole gadget.
pub(crate) fn gadget_pair(
    ids: &[usize],
    size: usize,
    a: &[(usize, usize)],
    b: &[(usize, usize)],
) -> Result<(Vec<(usize, usize)>, Vec<(usize, usize)>), ReductionError> {
    if !gadgets::union_is_single_cycle(size, a, b) {
        return Err(ReductionError::Invariant(format!(
            "gadget matchings {a:?} / {b:?} do not form a single alternating cycle"
        )));
    }
    let map = |m: &[(usize, usize)]| m.iter().map(|&(x, y)| (ids[x - 1], ids[y - 1])).collect();
    Ok((map(a), map(b)))
}

/// Clause 4-cycles: `(1,2),(3,4)` on the start side, `(2,3),(4,1)` on the
/// target side.
pub(crate) fn clause_pairs(clauses: &[Vec<usize>]) -> Result<(Vec<(usize, usize)>, Vec<(usize, usize)>), ReductionError> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for ids in clauses {
        let (x, y) = gadget_pair(
            ids,
            4,
            &gadgets::rim_matching(4, false),
            &gadgets::rim_matching(4, true),
        )?;
        a.extend(x);
        b.extend(y);
    }
    Ok((a, b))
}

pub(crate) fn expect_len(bits: &[bool], expected: usize) -> Result<(), ReductionError> {
    if bits.len() != expected {
        return Err(ReductionError::AssignmentLength {
            expected,
            found: bits.len(),
        });
    }
    Ok(())
}

pub(crate) fn exact_diameter(g: &Graph, cfg: &SearchConfig) -> Result<usize, ReductionError> {
    Ok(crate::search::diameter_exact(g, cfg)?)
}

pub(crate) fn matching(g: &Graph, iso: usize, edges: Vec<(usize, usize)>) -> Result<OddMatching, ReductionError> {
    Ok(OddMatching::new(g, iso, edges)?)
}
