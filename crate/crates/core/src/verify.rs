//! Cross-checks of the constructions against exact search and the
//! exhaustive oracles.
//!
//! Every check produces [`VerificationReport`]s whose observed values come
//! from `search` or `oracles` only. Reports print as
//! `CHECK <name> PASS|FAIL|SKIP ...` lines without timings, so a run's output
//! depends on its inputs alone.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::connectivity::is_flip_connected;
use crate::graph::{serialize_graph, Graph};
use crate::matching::{lower_bound, serialize_matching, validate_sequence, OddMatching};
use crate::oracles::{inner_witness, min_set_cover, solve_exists_forall_exists, solve_forall_exists};
use crate::reductions::gadgets::{self, GadgetShape};
use crate::reductions::{
    build_diameter_instance, build_radius_instance, build_radius_witnesses, build_setcover_instance,
    build_witness_pair, recover_cover, serialize_setcover, QuantifiedFormula, ReductionParams, SetCoverInstance,
};
use crate::search::{build_flip_graph, enumerate_odd_matchings, flip_distance, SearchConfig, SearchError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub name: String,
    /// SHA-256 of the serialized inputs.
    pub inputs_digest: String,
    pub expected: String,
    pub observed: String,
    pub status: Status,
    pub nodes_expanded: u64,
    pub wall_time: Duration,
}

impl VerificationReport {
    fn new(name: impl Into<String>, inputs: &str) -> Self {
        VerificationReport {
            name: name.into(),
            inputs_digest: crate::reductions::sha256_hex(inputs.as_bytes()),
            expected: String::new(),
            observed: String::new(),
            status: Status::Pass,
            nodes_expanded: 0,
            wall_time: Duration::ZERO,
        }
    }

    fn finish(mut self, start: Instant, expected: impl Into<String>, observed: impl Into<String>, ok: bool) -> Self {
        self.expected = expected.into();
        self.observed = observed.into();
        self.status = if ok { Status::Pass } else { Status::Fail };
        self.wall_time = start.elapsed();
        self
    }

    fn skip(mut self, start: Instant, why: impl Into<String>) -> Self {
        self.status = Status::Skip;
        self.observed = why.into();
        self.wall_time = start.elapsed();
        self
    }

    fn error(self, start: Instant, e: impl fmt::Display) -> Self {
        let msg = e.to_string().replace(' ', "_");
        self.finish(start, "no-error", format!("error:{msg}"), false)
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// The report line, without timing.
    pub fn line(&self) -> String {
        let mut s = format!("CHECK {} {}", self.name, self.status);
        if !self.expected.is_empty() {
            s.push_str(&format!(" expected={}", self.expected));
        }
        s.push_str(&format!(" observed={}", self.observed));
        s.push_str(&format!(" nodes={} inputs={}", self.nodes_expanded, &self.inputs_digest[..12]));
        s
    }
}

// ---------------------------------------------------------------- cycles

/// A `2k`-cycle plus one pendant vertex on cycle vertex 1, which is
/// isolated in both matchings; the matchings alternate on the cycle.
pub fn cycle_switch_instance(k: usize) -> (Graph, OddMatching, OddMatching) {
    let n = 2 * k;
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.push((0, n));
    let g = Graph::new(n + 1, edges).expect("cycle with pendant");
    let a = OddMatching::new(&g, n, (0..k).map(|i| (2 * i, 2 * i + 1))).expect("alternate edges");
    let b = OddMatching::new(&g, n, (0..k).map(|i| (2 * i + 1, (2 * i + 2) % n))).expect("alternate edges");
    (g, a, b)
}

pub fn check_cycle_switch(k: usize, cfg: &SearchConfig) -> VerificationReport {
    let start = Instant::now();
    let (g, a, b) = cycle_switch_instance(k);
    let report = VerificationReport::new(format!("cycle-switch.k{k}"), &serialize_graph(&g));
    if !(2..=6).contains(&k) {
        return report.skip(start, "k-outside-2..6");
    }
    match flip_distance(&g, &a, &b, None, cfg) {
        Ok(r) => {
            let d = r.distance.unwrap_or(usize::MAX);
            let lb = lower_bound(&a, &b).unwrap_or(0);
            let mut rep = report.finish(start, (k + 1).to_string(), d.to_string(), d == k + 1 && lb <= d);
            rep.nodes_expanded = r.nodes_expanded;
            rep
        }
        Err(e) => report.error(start, e),
    }
}

// --------------------------------------------------------------- gadgets

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    /// Plain 12-cycle with two doors.
    Exists12,
    /// 12-cycle with diagonals (2,10),(3,11).
    Forall12,
    /// 14-cycle with four diagonals.
    Forall14,
    Clause,
}

impl GadgetKind {
    fn shape(self) -> &'static GadgetShape {
        match self {
            GadgetKind::Exists12 => &gadgets::TWO_DOOR_12,
            GadgetKind::Forall12 => &gadgets::CROSSED_12,
            GadgetKind::Forall14 => &gadgets::DOUBLE_CROSSED_14,
            GadgetKind::Clause => &gadgets::CLAUSE_4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GadgetKind::Exists12 => "exists12",
            GadgetKind::Forall12 => "forall12",
            GadgetKind::Forall14 => "forall14",
            GadgetKind::Clause => "clause",
        }
    }
}

/// Which clause stubs the target asks to be switched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiteralSide {
    Positive,
    Negative,
    Both,
    /// No clause involved (clause gadget itself).
    None,
}

impl LiteralSide {
    fn name(self) -> &'static str {
        match self {
            LiteralSide::Positive => "pos",
            LiteralSide::Negative => "neg",
            LiteralSide::Both => "both",
            LiteralSide::None => "none",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GadgetCostExpectation {
    pub kind: GadgetKind,
    /// Union state on the gadget.
    pub state: &'static str,
    /// Gadget matchings in labels.
    pub start: Vec<(usize, usize)>,
    pub target: Vec<(usize, usize)>,
    pub side: LiteralSide,
    pub expected_flips: usize,
}

impl GadgetCostExpectation {
    pub fn name(&self) -> String {
        format!("gadget.{}.{}.{}", self.kind.name(), self.state, self.side.name())
    }
}

/// Flip counts charged to a gadget for each union state and the literal
/// side whose clauses get visited.
pub fn gadget_cost_table() -> Vec<GadgetCostExpectation> {
    use GadgetKind::*;
    use LiteralSide::*;
    let r12 = |s| gadgets::rim_matching(12, s);
    let r14 = |s| gadgets::rim_matching(14, s);
    let diag = gadgets::CROSSED_12_DIAGONAL.to_vec();
    let outer = gadgets::DOUBLE_CROSSED_14_OUTER.to_vec();
    let inner = gadgets::DOUBLE_CROSSED_14_INNER.to_vec();
    let e = |kind, state, start: &Vec<(usize, usize)>, target: &Vec<(usize, usize)>, side, expected_flips| {
        GadgetCostExpectation {
            kind,
            state,
            start: start.clone(),
            target: target.clone(),
            side,
            expected_flips,
        }
    };
    vec![
        e(Exists12, "cycle", &r12(false), &r12(true), Positive, 7),
        e(Exists12, "cycle", &r12(false), &r12(true), Negative, 7),
        e(Exists12, "happy-shifted", &r12(true), &r12(true), Positive, 4),
        e(Exists12, "happy-shifted", &r12(true), &r12(true), Negative, 4),
        e(Forall12, "uncrossed", &r12(false), &r12(true), Positive, 7),
        e(Forall12, "uncrossed", &r12(false), &r12(true), Negative, 9),
        e(Forall12, "crossed", &r12(false), &diag, Negative, 7),
        e(Forall12, "crossed", &r12(false), &diag, Positive, 9),
        e(Forall12, "happy-rim", &r12(false), &r12(false), Positive, 4),
        e(Forall12, "happy-rim", &r12(false), &r12(false), Negative, 4),
        e(Forall12, "happy-rim", &r12(false), &r12(false), Both, 6),
        e(Forall12, "happy-shifted", &r12(true), &r12(true), Positive, 4),
        e(Forall12, "happy-shifted", &r12(true), &r12(true), Negative, 6),
        e(Forall12, "happy-shifted", &r12(true), &r12(true), Both, 6),
        e(Forall12, "happy-diagonal", &diag, &diag, Negative, 4),
        e(Forall12, "happy-diagonal", &diag, &diag, Positive, 6),
        e(Forall12, "happy-diagonal", &diag, &diag, Both, 6),
        e(Forall12, "small-cycle", &r12(true), &diag, Positive, 5),
        e(Forall12, "small-cycle", &r12(true), &diag, Negative, 5),
        e(Forall12, "small-cycle", &r12(true), &diag, Both, 5),
        e(Forall14, "zero-crossings", &r14(false), &r14(true), Positive, 8),
        e(Forall14, "zero-crossings", &r14(false), &r14(true), Negative, 10),
        e(Forall14, "two-crossings", &inner, &outer, Positive, 8),
        e(Forall14, "two-crossings", &inner, &outer, Negative, 10),
        e(Forall14, "one-crossing-outer", &r14(false), &outer, Negative, 8),
        e(Forall14, "one-crossing-outer", &r14(false), &outer, Positive, 10),
        e(Forall14, "one-crossing-inner", &inner, &r14(true), Negative, 8),
        e(Forall14, "one-crossing-inner", &inner, &r14(true), Positive, 10),
        e(Clause, "cycle", &gadgets::rim_matching(4, false), &gadgets::rim_matching(4, true), None, 3),
    ]
}

/// Gadget in its anchor context. For variable gadgets: a pendant path
/// `v - a1 - a2` holding the isolated vertex at `a2` in both matchings
/// (two flips to enter and leave), and one stub clause 4-cycle on the
/// positive and one on the negative ports, switched in the target exactly
/// when asked for (three flips each). For the clause gadget: one pendant
/// vertex on the port. Returns the graph, both matchings and the flips
/// spent outside the gadget.
pub fn gadget_context(e: &GadgetCostExpectation) -> (Graph, OddMatching, OddMatching, usize) {
    let shape = e.kind.shape();
    let rim = |s| gadgets::rim_matching(4, s);
    if e.kind == GadgetKind::Clause {
        // pendant x = 0, clause labels 1..=4 at ids 1..=4
        let mut edges: Vec<(usize, usize)> = shape.edges();
        edges.push((0, gadgets::CLAUSE_PORT));
        let g = Graph::new(5, edges).expect("clause context");
        let a = OddMatching::new(&g, 0, e.start.iter().copied()).expect("start");
        let b = OddMatching::new(&g, 0, e.target.iter().copied()).expect("target");
        return (g, a, b, 0);
    }
    let (a2, a1, v) = (0, 1, 2);
    let gid = |l: usize| 2 + l;
    let pos = 3 + shape.size;
    let neg = pos + 4;
    let n = neg + 4;
    let mut edges = vec![(a2, a1), (a1, v)];
    edges.extend(shape.edges().into_iter().map(|(x, y)| (gid(x), gid(y))));
    edges.extend(shape.entry.iter().map(|&l| (v, gid(l))));
    for stub in [pos, neg] {
        edges.extend(rim(false).into_iter().chain(rim(true)).map(|(x, y)| (stub + x - 1, stub + y - 1)));
    }
    edges.extend(shape.positive.iter().map(|&l| (gid(l), pos)));
    edges.extend(shape.negative.iter().map(|&l| (gid(l), neg)));
    let g = Graph::new(n, edges).expect("gadget context");

    let switch_pos = matches!(e.side, LiteralSide::Positive | LiteralSide::Both);
    let switch_neg = matches!(e.side, LiteralSide::Negative | LiteralSide::Both);
    let stub = |base: usize, switched: bool| -> Vec<(usize, usize)> {
        rim(switched).into_iter().map(|(x, y)| (base + x - 1, base + y - 1)).collect()
    };
    let mut m_in: Vec<(usize, usize)> = vec![(a1, v)];
    m_in.extend(e.start.iter().map(|&(x, y)| (gid(x), gid(y))));
    m_in.extend(stub(pos, false));
    m_in.extend(stub(neg, false));
    let mut m_tar: Vec<(usize, usize)> = vec![(a1, v)];
    m_tar.extend(e.target.iter().map(|&(x, y)| (gid(x), gid(y))));
    m_tar.extend(stub(pos, switch_pos));
    m_tar.extend(stub(neg, switch_neg));
    let a = OddMatching::new(&g, a2, m_in).expect("start");
    let b = OddMatching::new(&g, a2, m_tar).expect("target");
    let outside = 2 + 3 * (usize::from(switch_pos) + usize::from(switch_neg));
    (g, a, b, outside)
}

pub fn check_gadget_cost(e: &GadgetCostExpectation, cfg: &SearchConfig) -> VerificationReport {
    let start = Instant::now();
    let (g, a, b, outside) = gadget_context(e);
    let inputs = format!("{}{}{}", serialize_graph(&g), serialize_matching(&a), serialize_matching(&b));
    let report = VerificationReport::new(e.name(), &inputs);
    match flip_distance(&g, &a, &b, None, cfg) {
        Ok(r) => {
            let observed = r.distance.map(|d| d.saturating_sub(outside));
            let lb_ok = r.distance.is_some_and(|d| lower_bound(&a, &b).unwrap_or(0) <= d);
            let mut rep = report.finish(
                start,
                e.expected_flips.to_string(),
                observed.map_or("unreachable".into(), |d| d.to_string()),
                observed == Some(e.expected_flips) && lb_ok,
            );
            rep.nodes_expanded = r.nodes_expanded;
            rep
        }
        Err(err) => report.error(start, err),
    }
}

pub fn check_gadget_costs(cfg: &SearchConfig) -> Vec<VerificationReport> {
    gadget_cost_table().par_iter().map(|e| check_gadget_cost(e, cfg)).collect()
}

// ------------------------------------------------------------ reductions

fn bits(mut x: usize, len: usize) -> Vec<bool> {
    let mut out = vec![false; len];
    for i in (0..len).rev() {
        out[i] = x & 1 == 1;
        x >>= 1;
    }
    out
}

fn bit_string(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

/// Per universal assignment: witness-pair distance within the threshold
/// iff some existential assignment satisfies the formula.
pub fn check_diameter_tier_a(name: &str, phi: &QuantifiedFormula, p: &ReductionParams) -> VerificationReport {
    let start = Instant::now();
    let report = VerificationReport::new(format!("diameter.tier-a.{name}"), &phi.to_string());
    let verdict = match solve_forall_exists(phi) {
        Ok(v) => v,
        Err(e) => return report.error(start, e),
    };
    let inst = match build_diameter_instance(phi, p) {
        Ok(i) => i,
        Err(e) => return report.error(start, e),
    };
    let mut expected = Vec::new();
    let mut observed = Vec::new();
    let mut nodes = 0;
    let mut ok = true;
    for (x, y) in &verdict.exists_witnesses {
        let (a, b) = match build_witness_pair(&inst, x) {
            Ok(pair) => pair,
            Err(e) => return report.error(start, e),
        };
        let within = match flip_distance(&inst.graph, &a, &b, Some(inst.threshold), &p.search) {
            Ok(r) => {
                nodes += r.nodes_expanded;
                let d = r.distance.expect("within budget");
                ok &= lower_bound(&a, &b).unwrap_or(0) <= d;
                true
            }
            Err(SearchError::BudgetExceeded { nodes_expanded, .. }) => {
                nodes += nodes_expanded;
                false
            }
            Err(e) => return report.error(start, e),
        };
        ok &= within == y.is_some();
        expected.push(format!("{}:{}", bit_string(x), if y.is_some() { "yes" } else { "no" }));
        observed.push(format!("{}:{}", bit_string(x), if within { "yes" } else { "no" }));
    }
    let mut rep = report.finish(
        start,
        format!("{}@{}", expected.join(","), inst.threshold),
        observed.join(","),
        ok,
    );
    rep.nodes_expanded = nodes;
    rep
}

/// Exact diameter of the whole instance against the threshold, skipped
/// when the flip graph has more than `budget` states.
pub fn check_diameter_tier_b(
    name: &str,
    phi: &QuantifiedFormula,
    p: &ReductionParams,
    budget: u64,
) -> VerificationReport {
    let start = Instant::now();
    let report = VerificationReport::new(format!("diameter.tier-b.{name}"), &phi.to_string());
    let verdict = match solve_forall_exists(phi) {
        Ok(v) => v,
        Err(e) => return report.error(start, e),
    };
    let inst = match build_diameter_instance(phi, p) {
        Ok(i) => i,
        Err(e) => return report.error(start, e),
    };
    let cfg = SearchConfig { cap: budget, ..p.search };
    let fg = match build_flip_graph(&inst.graph, &cfg) {
        Ok(fg) => fg,
        Err(SearchError::CapExceeded { .. }) => return report.skip(start, "budget"),
        Err(e) => return report.error(start, e),
    };
    match fg.diameter_bounded() {
        Ok(d) => {
            let within = d <= inst.threshold;
            let mut rep = report.finish(
                start,
                format!("{}@{}", if verdict.satisfied { "yes" } else { "no" }, inst.threshold),
                format!("{}:{d}", if within { "yes" } else { "no" }),
                within == verdict.satisfied,
            );
            rep.nodes_expanded = fg.state_count() as u64;
            rep
        }
        Err(e) => report.error(start, e),
    }
}

pub fn check_diameter_reduction(
    name: &str,
    phi: &QuantifiedFormula,
    p: &ReductionParams,
    budget: Option<u64>,
) -> Vec<VerificationReport> {
    let mut out = vec![check_diameter_tier_a(name, phi, p)];
    if let Some(b) = budget {
        out.push(check_diameter_tier_b(name, phi, p, b));
    }
    out
}

/// Per pair of outer and universal assignments: distance from the center
/// candidate to the adversary within the threshold iff the last block can
/// satisfy the formula.
pub fn check_radius_tier_a(name: &str, psi: &QuantifiedFormula, p: &ReductionParams) -> VerificationReport {
    let start = Instant::now();
    let report = VerificationReport::new(format!("radius.tier-a.{name}"), &psi.to_string());
    if let Err(e) = solve_exists_forall_exists(psi) {
        return report.error(start, e);
    }
    let inst = match build_radius_instance(psi, p) {
        Ok(i) => i,
        Err(e) => return report.error(start, e),
    };
    let sizes = psi.block_sizes();
    let mut expected = Vec::new();
    let mut observed = Vec::new();
    let mut nodes = 0;
    let mut ok = true;
    for xb in 0..1usize << sizes[0] {
        let x = bits(xb, sizes[0]);
        for yb in 0..1usize << sizes[1] {
            let y = bits(yb, sizes[1]);
            let xy: Vec<bool> = x.iter().chain(&y).copied().collect();
            let sat = match inner_witness(psi, &xy) {
                Ok(z) => z.is_some(),
                Err(e) => return report.error(start, e),
            };
            let (a, b) = match build_radius_witnesses(&inst, &x, &y) {
                Ok(pair) => pair,
                Err(e) => return report.error(start, e),
            };
            let within = match flip_distance(&inst.graph, &a, &b, Some(inst.threshold), &p.search) {
                Ok(r) => {
                    nodes += r.nodes_expanded;
                    ok &= lower_bound(&a, &b).unwrap_or(0) <= r.distance.expect("within budget");
                    true
                }
                Err(SearchError::BudgetExceeded { nodes_expanded, .. }) => {
                    nodes += nodes_expanded;
                    false
                }
                Err(e) => return report.error(start, e),
            };
            ok &= within == sat;
            let tag = format!("{}/{}", bit_string(&x), bit_string(&y));
            expected.push(format!("{tag}:{}", if sat { "yes" } else { "no" }));
            observed.push(format!("{tag}:{}", if within { "yes" } else { "no" }));
        }
    }
    let mut rep = report.finish(
        start,
        format!("{}@{}", expected.join(","), inst.threshold),
        observed.join(","),
        ok,
    );
    rep.nodes_expanded = nodes;
    rep
}

pub fn check_radius_tier_b(name: &str, psi: &QuantifiedFormula, p: &ReductionParams, budget: u64) -> VerificationReport {
    let start = Instant::now();
    let report = VerificationReport::new(format!("radius.tier-b.{name}"), &psi.to_string());
    let verdict = match solve_exists_forall_exists(psi) {
        Ok(v) => v,
        Err(e) => return report.error(start, e),
    };
    let inst = match build_radius_instance(psi, p) {
        Ok(i) => i,
        Err(e) => return report.error(start, e),
    };
    let cfg = SearchConfig { cap: budget, ..p.search };
    let fg = match build_flip_graph(&inst.graph, &cfg) {
        Ok(fg) => fg,
        Err(SearchError::CapExceeded { .. }) => return report.skip(start, "budget"),
        Err(e) => return report.error(start, e),
    };
    match fg.radius_center_indices(p.search.jobs) {
        Ok((r, _)) => {
            let within = r <= inst.threshold;
            let mut rep = report.finish(
                start,
                format!("{}@{}", if verdict.satisfied { "yes" } else { "no" }, inst.threshold),
                format!("{}:{r}", if within { "yes" } else { "no" }),
                within == verdict.satisfied,
            );
            rep.nodes_expanded = fg.state_count() as u64;
            rep
        }
        Err(e) => report.error(start, e),
    }
}

pub fn check_radius_reduction(
    name: &str,
    psi: &QuantifiedFormula,
    p: &ReductionParams,
    budget: Option<u64>,
) -> Vec<VerificationReport> {
    let mut out = vec![check_radius_tier_a(name, psi, p)];
    if let Some(b) = budget {
        out.push(check_radius_tier_b(name, psi, p, b));
    }
    out
}

/// Exact distance equals `c* * path_len + 3n`, and the cover recovered
/// from the shortest sequence is a valid cover of size `c*`.
pub fn check_setcover_reduction(name: &str, sc: &SetCoverInstance, p: &ReductionParams) -> VerificationReport {
    let start = Instant::now();
    let report = VerificationReport::new(format!("setcover.{name}"), &serialize_setcover(sc));
    let (c_star, _) = match min_set_cover(sc) {
        Ok(c) => c,
        Err(e) => return report.error(start, e),
    };
    let red = match build_setcover_instance(sc, p) {
        Ok(r) => r,
        Err(e) => return report.error(start, e),
    };
    let want = red.distance_for_cover(c_star);
    match flip_distance(&red.graph, &red.m_in, &red.m_tar, None, &p.search) {
        Ok(r) => {
            let d = r.distance.unwrap_or(usize::MAX);
            let mut ok = d == want && lower_bound(&red.m_in, &red.m_tar).unwrap_or(0) <= d;
            let mut recovered = String::from("none");
            if let Some(w) = &r.witness {
                match (validate_sequence(&red.graph, w), recover_cover(&red, w)) {
                    (Ok((end, _)), Ok(cover)) => {
                        ok &= end == red.m_tar
                            && sc.covers(&cover.cover)
                            && cover.cover.len() == c_star
                            && cover.size_bound == c_star;
                        recovered = cover.cover.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("+");
                    }
                    _ => ok = false,
                }
            }
            let mut rep = report.finish(
                start,
                format!("d={want},c*={c_star},V={}", red.path_len),
                format!("d={d},cover={recovered}"),
                ok,
            );
            rep.nodes_expanded = r.nodes_expanded;
            rep
        }
        Err(e) => report.error(start, e),
    }
}

// ------------------------------------------------------------ arithmetic

/// The two cases of the approximation bound with `beta = 4`: if
/// `r - 1 >= 1/(2c+1)` then `r c + r/2 <= c (1 + 4 (r - 1))`, otherwise
/// `r c + r/2 < c + 1`. Exact rational arithmetic.
pub fn ap_case_holds(r: Ratio<i64>, c: i64) -> bool {
    let one = Ratio::from_integer(1);
    let cr = Ratio::from_integer(c);
    let lhs = r * cr + r / 2;
    if r - one >= Ratio::new(1, 2 * c + 1) {
        lhs <= cr * (one + Ratio::from_integer(4) * (r - one))
    } else {
        lhs < cr + one
    }
}

pub fn check_ap_arithmetic(samples: &[(Ratio<i64>, i64)]) -> VerificationReport {
    let start = Instant::now();
    let inputs: String = samples.iter().map(|(r, c)| format!("{r} {c}\n")).collect();
    let report = VerificationReport::new("ap-arithmetic", &inputs);
    let bad: Vec<_> = samples.iter().filter(|&&(r, c)| !ap_case_holds(r, c)).collect();
    let observed = match bad.first() {
        None => format!("{}/{}", samples.len(), samples.len()),
        Some((r, c)) => format!("{}/{},first-violation=r{r}c{c}", samples.len() - bad.len(), samples.len()),
    };
    report.finish(start, format!("{0}/{0}", samples.len()), observed, bad.is_empty())
}

/// `r` in `{1, 1.01, ..., 3}` times `c*` in `1..=50`.
pub fn ap_grid() -> Vec<(Ratio<i64>, i64)> {
    (100..=300)
        .flat_map(|a| (1..=50).map(move |c| (Ratio::new(a, 100), c)))
        .collect()
}

// ---------------------------------------------------------- connectivity

/// All graphs on `n` labeled vertices, by edge bitmask over the pairs in
/// lexicographic order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0..1u64 << pairs.len()).map(move |mask| {
        Graph::new(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap()
    })
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                e.push((a, b));
            }
        }
    }
    Graph::new(n, e).unwrap()
}

/// Criterion and explicit flip graph agree on connectivity. A graph
/// without odd matchings has an empty flip graph, counted as connected.
pub fn connectivity_agrees(g: &Graph, cfg: &SearchConfig) -> Result<(bool, bool), String> {
    let (crit, _) = is_flip_connected(g).map_err(|e| e.to_string())?;
    let fg = build_flip_graph(g, cfg).map_err(|e| e.to_string())?;
    Ok((crit, fg.component_count() <= 1))
}

#[derive(Clone, Debug)]
pub struct ConnectivitySample {
    pub seed: u64,
    pub random_graphs: usize,
    pub vertices: usize,
}

impl Default for ConnectivitySample {
    fn default() -> Self {
        ConnectivitySample {
            seed: 1,
            random_graphs: 200,
            vertices: 7,
        }
    }
}

/// Criterion vs explicit flip graph on every 5-vertex graph and a seeded
/// sample of larger ones, plus a few generated reduction instances.
pub fn check_connectivity_agreement(spec: &ConnectivitySample, cfg: &SearchConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let start = Instant::now();
    let sweep: Vec<Graph> = all_graphs(5).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sample: Vec<Graph> = (0..spec.random_graphs)
        .map(|_| {
            let p = rng.gen_range(0.15..0.6);
            random_graph(&mut rng, spec.vertices, p)
        })
        .collect();
    for (name, graphs) in [("connectivity.all-5".to_string(), sweep), (format!("connectivity.random-{}", spec.vertices), sample)] {
        let start = Instant::now();
        let inputs: String = graphs.iter().map(serialize_graph).collect();
        let report = VerificationReport::new(name, &inputs);
        let results: Vec<_> = graphs.par_iter().map(|g| connectivity_agrees(g, cfg)).collect();
        let mut agree = 0;
        let mut disconnected = 0;
        let mut first_bad = None;
        for (i, r) in results.iter().enumerate() {
            match r {
                Ok((a, b)) if a == b => {
                    agree += 1;
                    disconnected += usize::from(!a);
                }
                _ => {
                    first_bad.get_or_insert(i);
                }
            }
        }
        let observed = match first_bad {
            None => format!("{agree}/{},disconnected={disconnected}", graphs.len()),
            Some(i) => format!("{agree}/{},first-disagreement=graph{i}", graphs.len()),
        };
        out.push(report.finish(start, format!("{0}/{0}", graphs.len()), observed, first_bad.is_none()));
    }
    let _ = start;

    let start = Instant::now();
    let fe = QuantifiedFormula::from_prefix(
        &[(crate::reductions::Quantifier::Forall, 1), (crate::reductions::Quantifier::Exists, 1)],
        vec![vec![1, 2], vec![-1, -2]],
    )
    .expect("valid formula");
    let efe = QuantifiedFormula::from_prefix(
        &[
            (crate::reductions::Quantifier::Exists, 1),
            (crate::reductions::Quantifier::Forall, 1),
            (crate::reductions::Quantifier::Exists, 1),
        ],
        vec![vec![1, 2, 3]],
    )
    .expect("valid formula");
    let sc = SetCoverInstance::new(2, vec![vec![1], vec![2], vec![1, 2]]).expect("valid instance");
    let params = ReductionParams {
        search: *cfg,
        ..Default::default()
    };
    let graphs: Vec<Result<Graph, String>> = vec![
        build_diameter_instance(&fe, &params).map(|i| i.graph).map_err(|e| e.to_string()),
        build_radius_instance(&efe, &params).map(|i| i.graph).map_err(|e| e.to_string()),
        build_setcover_instance(&sc, &params).map(|r| r.graph).map_err(|e| e.to_string()),
    ];
    let inputs = format!("{fe}{efe}{}", serialize_setcover(&sc));
    let report = VerificationReport::new("connectivity.reductions", &inputs);
    let verdicts: Vec<String> = graphs
        .iter()
        .map(|g| match g {
            Ok(g) => match is_flip_connected(g) {
                Ok((true, _)) => "connected".to_string(),
                Ok((false, _)) => "disconnected".to_string(),
                Err(e) => format!("error:{e}").replace(' ', "_"),
            },
            Err(e) => format!("error:{e}").replace(' ', "_"),
        })
        .collect();
    let ok = verdicts.iter().all(|v| v == "connected");
    out.push(report.finish(start, "connected,connected,connected", verdicts.join(","), ok));
    out
}

// ------------------------------------------------------------ properties

fn random_odd_instance(rng: &mut ChaCha8Rng, max_n: usize) -> (Graph, Vec<OddMatching>) {
    loop {
        let n = 2 * rng.gen_range(1..=max_n / 2) + 1;
        let p = rng.gen_range(0.25..0.8);
        let g = random_graph(rng, n, p);
        if let Ok(ms) = enumerate_odd_matchings(&g) {
            if !ms.is_empty() {
                return (g, ms);
            }
        }
    }
}

/// Charging lower bound never exceeds the exact distance.
pub fn check_charging_soundness(seed: u64, samples: usize, cfg: &SearchConfig) -> VerificationReport {
    let start = Instant::now();
    let report = VerificationReport::new("charging-soundness", &format!("seed {seed} samples {samples}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut reachable = 0;
    let mut nodes = 0;
    for _ in 0..samples {
        let (g, ms) = random_odd_instance(&mut rng, 11);
        let a = ms.choose(&mut rng).unwrap();
        let b = ms.choose(&mut rng).unwrap();
        match flip_distance(&g, a, b, None, cfg) {
            Ok(r) => {
                nodes += r.nodes_expanded;
                if let Some(d) = r.distance {
                    reachable += 1;
                    if lower_bound(a, b).unwrap_or(usize::MAX) > d {
                        violations += 1;
                    }
                }
            }
            Err(e) => return report.error(start, e),
        }
    }
    let mut rep = report.finish(
        start,
        "violations=0",
        format!("violations={violations},reachable={reachable}/{samples}"),
        violations == 0,
    );
    rep.nodes_expanded = nodes;
    rep
}

/// Symmetry and triangle inequality on sampled triples, and
/// `radius <= diameter <= 2 radius` on connected flip graphs.
pub fn check_metric_properties(seed: u64, triples: usize, cfg: &SearchConfig) -> VerificationReport {
    let start = Instant::now();
    let report = VerificationReport::new("metric-properties", &format!("seed {seed} triples {triples}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut graphs_checked = 0;
    for _ in 0..triples {
        let (g, ms) = random_odd_instance(&mut rng, 9);
        let fg = match build_flip_graph(&g, cfg) {
            Ok(fg) => fg,
            Err(e) => return report.error(start, e),
        };
        let t: Vec<&OddMatching> = (0..3).map(|_| ms.choose(&mut rng).unwrap()).collect();
        let d = |x: &OddMatching, y: &OddMatching| flip_distance(&g, x, y, None, cfg).map(|r| r.distance);
        let (ab, ba, bc, ac) = match (d(t[0], t[1]), d(t[1], t[0]), d(t[1], t[2]), d(t[0], t[2])) {
            (Ok(ab), Ok(ba), Ok(bc), Ok(ac)) => (ab, ba, bc, ac),
            _ => return report.error(start, "search failed"),
        };
        if ab != ba || d(t[0], t[0]).ok() != Some(Some(0)) {
            violations += 1;
        }
        if let (Some(ab), Some(bc)) = (ab, bc) {
            if ac.map_or(true, |ac| ac > ab + bc) {
                violations += 1;
            }
        }
        // the implicit search agrees with BFS on the explicit graph
        let i = fg.index_of(t[0]).expect("state");
        let j = fg.index_of(t[1]).expect("state");
        if fg.distances_from(i)[j].map(|x| x as usize) != ab {
            violations += 1;
        }
        if fg.component_count() == 1 {
            graphs_checked += 1;
            let ecc = fg.eccentricities(cfg.jobs);
            let diam = *ecc.iter().max().unwrap();
            let rad = *ecc.iter().min().unwrap();
            if !(rad <= diam && diam <= 2 * rad) {
                violations += 1;
            }
        }
    }
    report.finish(
        start,
        "violations=0",
        format!("violations={violations},connected-graphs={graphs_checked}"),
        violations == 0,
    )
}

// ---------------------------------------------------------------- suites

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Gadgets,
    Reductions,
    Connectivity,
    Arithmetic,
    Properties,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// State budget for the full diameter/radius checks.
    pub budget: u64,
    pub search: SearchConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            budget: 2_000_000,
            search: SearchConfig::default(),
        }
    }
}

fn formula(prefix: &[(crate::reductions::Quantifier, usize)], clauses: Vec<Vec<i32>>) -> QuantifiedFormula {
    QuantifiedFormula::from_prefix(prefix, clauses).expect("valid formula")
}

/// Reports of a suite, ordered by check name within each group.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<VerificationReport> {
    use crate::reductions::Quantifier::{Exists as E, Forall as A};
    let cfg = &opts.search;
    let mut out = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Gadgets) {
        out.extend((2..=6).into_par_iter().map(|k| check_cycle_switch(k, cfg)).collect::<Vec<_>>());
        out.extend(check_gadget_costs(cfg));
    }
    if want(Suite::Reductions) {
        let params = ReductionParams {
            search: *cfg,
            ..Default::default()
        };
        let fe = [(A, 1), (E, 1)];
        let efe = [(E, 1), (A, 1), (E, 1)];
        let diam = vec![
            ("x-or-y", formula(&fe, vec![vec![1, 2]])),
            ("x-and-y", formula(&fe, vec![vec![1], vec![2]])),
            (
                "two-by-two",
                formula(&[(A, 2), (E, 2)], vec![vec![1, -2, 3], vec![2, 3, -4]]),
            ),
        ];
        let rad = vec![
            ("x-or-y-or-z", formula(&efe, vec![vec![1, 2, 3]])),
            ("y", formula(&efe, vec![vec![2]])),
            ("notx-or-z-and-notx-or-notz", formula(&efe, vec![vec![-1, 3], vec![-1, -3]])),
        ];
        let sets = vec![
            ("n1-single", SetCoverInstance::new(1, vec![vec![1]]).unwrap()),
            ("n2-with-union", SetCoverInstance::new(2, vec![vec![1], vec![2], vec![1, 2]]).unwrap()),
            ("n2-singletons", SetCoverInstance::new(2, vec![vec![1], vec![2]]).unwrap()),
        ];
        let budget = Some(opts.budget);
        out.extend(
            diam.par_iter()
                .flat_map_iter(|(n, f)| check_diameter_reduction(n, f, &params, budget))
                .collect::<Vec<_>>(),
        );
        out.extend(
            rad.par_iter()
                .flat_map_iter(|(n, f)| check_radius_reduction(n, f, &params, budget))
                .collect::<Vec<_>>(),
        );
        out.extend(
            sets.par_iter()
                .map(|(n, sc)| check_setcover_reduction(n, sc, &params))
                .collect::<Vec<_>>(),
        );
    }
    if want(Suite::Connectivity) {
        let spec = ConnectivitySample {
            seed: opts.seed,
            ..Default::default()
        };
        out.extend(check_connectivity_agreement(&spec, cfg));
    }
    if want(Suite::Arithmetic) {
        out.push(check_ap_arithmetic(&ap_grid()));
    }
    if want(Suite::Properties) {
        out.push(check_charging_soundness(opts.seed, 500, cfg));
        out.push(check_metric_properties(opts.seed, 1000, cfg));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_switch_small() {
        let cfg = SearchConfig::default();
        for k in 2..=4 {
            let r = check_cycle_switch(k, &cfg);
            assert_eq!(r.status, Status::Pass, "{}", r.line());
        }
        assert_eq!(check_cycle_switch(7, &cfg).status, Status::Skip);
    }

    /// Hand-derived route switching the 12-cycle gadget from the rim
    /// matching to the shifted one through the diagonal (2,10), so the
    /// isolated vertex sits on negative ports 9 and 3 along the way. Eight
    /// gadget flips: one more than the positive side, not two.
    #[test]
    fn opposite_side_route_on_crossed_gadget() {
        use crate::matching::FlipSequence;
        let e = gadget_cost_table()
            .into_iter()
            .find(|e| e.name() == "gadget.forall12.uncrossed.neg")
            .unwrap();
        let (g, a, _, _) = gadget_context(&e);
        let id = |label: usize| 2 + label;
        // pendant a2 = 0, a1 = 1; the isolated vertex sits on 9 after the
        // diagonal and on 3 before closing the cycle; no stub is switched
        let steps = vec![1, id(1), id(10), id(8), id(6), id(4), id(2), id(11), id(1), 1];
        let seq = FlipSequence { start: a, steps };
        let (end, len) = validate_sequence(&g, &seq).unwrap();
        assert_eq!(len, 10);
        let target: Vec<(usize, usize)> = gadgets::rim_matching(12, true).into_iter().map(|(x, y)| (id(x), id(y))).collect();
        for (x, y) in target {
            assert!(end.contains_edge(x, y));
        }
    }

    #[test]
    fn ap_cases() {
        assert!(ap_case_holds(Ratio::from_integer(1), 5));
        assert!(ap_case_holds(Ratio::from_integer(2), 1));
        assert!(ap_case_holds(Ratio::new(11, 10), 10));
        // boundary r - 1 = 1/(2c+1)
        assert!(ap_case_holds(Ratio::new(6, 5), 2));
    }

    #[test]
    fn report_line_has_no_timing() {
        let r = check_cycle_switch(2, &SearchConfig::default());
        let line = r.line();
        assert!(line.starts_with("CHECK cycle-switch.k2 PASS expected=3 observed=3 nodes="));
        assert!(!line.contains("ms"));
    }
}
