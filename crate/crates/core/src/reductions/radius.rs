//! Exists-forall-exists formulas to flip-graph radius.

use crate::graph::{Graph, GraphBuilder};
use crate::matching::{decompose_union, OddMatching};

use super::gadgets::{self, CROSSED_12, DOUBLE_CROSSED_14, TWO_DOOR_12};
use super::{
    assemble_core, check_length, check_prefix, clause_pairs, exact_diameter, expect_len, gadget_pair, matching, Core,
    Meta, Mode, QuantifiedFormula, Quantifier, ReductionError, ReductionParams, Role,
};

#[derive(Clone, Debug)]
pub struct RadiusInstance {
    pub formula: QuantifiedFormula,
    pub graph: Graph,
    pub v: usize,
    /// Length of the path `p` ending in `Z`.
    pub ell: usize,
    /// Length of the forcing path `P`.
    pub big_l: usize,
    /// `Z.1..Z.4`; `Z.1` is attached to the end of `p`.
    pub z: [usize; 4],
    pub threshold: usize,
    pub roles: Vec<Role>,
    /// `[block][var][label - 1]` for the three quantifier blocks.
    pub gadgets: Vec<Vec<Vec<usize>>>,
    pub clauses: Vec<Vec<usize>>,
    /// Exact diameters behind safe-minimal `ell` and `L`, when computed.
    pub core_diameter: Option<usize>,
    pub inner_diameter: Option<usize>,
    pub mode: Mode,
}

const SHAPES: [(&gadgets::GadgetShape, super::RoleFn); 3] = [
    (&CROSSED_12, |var, label| Role::Exists1 { var, label }),
    (&DOUBLE_CROSSED_14, |var, label| Role::Forall { var, label }),
    (&TWO_DOOR_12, |var, label| Role::Exists2 { var, label }),
];

const PREFIX: [Quantifier; 3] = [Quantifier::Exists, Quantifier::Forall, Quantifier::Exists];

fn gadget_vertices(psi: &QuantifiedFormula) -> usize {
    let s = psi.block_sizes();
    12 * s[0] + 14 * s[1] + 12 * s[2] + 4 * psi.clauses().len()
}

fn attach_path(builder: &mut GraphBuilder, roles: &mut Vec<Role>, from: usize, len: usize, role: fn(usize) -> Role) -> Vec<usize> {
    let mut prev = from;
    (1..=len)
        .map(|i| {
            roles.push(role(i));
            let x = builder.add_vertex();
            builder.add_edge(prev, x);
            prev = x;
            x
        })
        .collect()
}

/// Path `p` of `ell` edges from `v`, closed by the 4-cycle `Z`.
fn attach_p_and_z(core: &mut Core, ell: usize) -> (Vec<usize>, [usize; 4]) {
    let p = attach_path(&mut core.builder, &mut core.roles, core.v, ell, Role::SmallPath);
    let z: [usize; 4] = std::array::from_fn(|i| core.add_vertex(Role::Z(i + 1)));
    for i in 0..4 {
        core.builder.add_edge(z[i], z[(i + 1) % 4]);
    }
    core.builder.add_edge(*p.last().unwrap_or(&core.v), z[0]);
    (p, z)
}

/// Graph of the construction without `p`, `Z` and `P`.
pub fn radius_core(psi: &QuantifiedFormula) -> Result<Graph, ReductionError> {
    check_prefix(psi, &PREFIX, "exists,forall,exists")?;
    Ok(assemble_core(psi, &SHAPES).builder.build()?)
}

/// Graph of the construction without the forcing path `P`.
pub fn radius_inner(psi: &QuantifiedFormula, ell: usize) -> Result<Graph, ReductionError> {
    check_prefix(psi, &PREFIX, "exists,forall,exists")?;
    let mut core = assemble_core(psi, &SHAPES);
    attach_p_and_z(&mut core, ell);
    Ok(core.builder.build()?)
}

pub fn build_radius_instance(psi: &QuantifiedFormula, p: &ReductionParams) -> Result<RadiusInstance, ReductionError> {
    check_prefix(psi, &PREFIX, "exists,forall,exists")?;
    let s = gadget_vertices(psi);
    let mut core_diameter = None;
    let mut inner_diameter = None;
    let ell = match check_length("ell", p.ell_override)? {
        Some(ell) => ell,
        None => match p.mode {
            Mode::ClosedForm => 2 * p.c_constant.ok_or(ReductionError::MissingConstant)? * (s + 1),
            Mode::SafeMinimal => {
                let d = exact_diameter(&radius_core(psi)?, &p.search)?;
                core_diameter = Some(d);
                super::smallest_even_above_twice(d)
            }
        },
    };
    let big_l = match check_length("L", p.big_l_override)? {
        Some(l) => l,
        None => match p.mode {
            Mode::ClosedForm => 2 * p.c_constant.ok_or(ReductionError::MissingConstant)? * (s + ell + 1),
            Mode::SafeMinimal => {
                let d = exact_diameter(&radius_inner(psi, ell)?, &p.search)?;
                inner_diameter = Some(d);
                super::smallest_even_above_twice(d)
            }
        },
    };
    let mut core = assemble_core(psi, &SHAPES);
    let (_, z) = attach_p_and_z(&mut core, ell);
    attach_path(&mut core.builder, &mut core.roles, core.v, big_l, Role::BigPath);
    let Core {
        builder,
        roles,
        v,
        gadgets,
        clauses,
    } = core;
    let graph = builder.build()?;
    let sizes = psi.block_sizes();
    let k = psi.clauses().len();
    let expected = 1 + s + ell + 4 + big_l;
    if graph.vertex_count() != expected || expected % 2 == 0 {
        return Err(ReductionError::Invariant(format!(
            "vertex count {} (expected odd {expected})",
            graph.vertex_count()
        )));
    }
    Ok(RadiusInstance {
        formula: psi.clone(),
        graph,
        v,
        ell,
        big_l,
        z,
        threshold: (big_l + ell) / 2 + 7 * (sizes[0] + sizes[2]) + 8 * sizes[1] + 3 * k + 2,
        roles,
        gadgets,
        clauses,
        core_diameter,
        inner_diameter,
        mode: p.mode,
    })
}

impl RadiusInstance {
    pub fn gadget_vertex_count(&self) -> usize {
        gadget_vertices(&self.formula)
    }

    fn path(&self, small: bool) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter_map(|(i, r)| match (r, small) {
                (Role::SmallPath(_), true) | (Role::BigPath(_), false) => Some(i),
                _ => None,
            })
            .collect()
    }

    /// Far end of `P`.
    pub fn far_end(&self) -> usize {
        *self.path(false).last().unwrap_or(&self.v)
    }

    pub fn meta(&self) -> Meta {
        let mut m = Meta::default();
        let sizes = self.formula.block_sizes();
        m.push("kind", "radius");
        m.push("mode", self.mode);
        m.push("m1", sizes[0]);
        m.push("m2", sizes[1]);
        m.push("m3", sizes[2]);
        m.push("clauses", self.formula.clauses().len());
        m.push("ell", self.ell);
        m.push("L", self.big_l);
        m.push("threshold", self.threshold);
        m.push("vertices", self.graph.vertex_count());
        m.push("v", self.v + 1);
        if let Some(d) = self.core_diameter {
            m.push("core_diameter", d);
        }
        if let Some(d) = self.inner_diameter {
            m.push("inner_diameter", d);
        }
        m.push("formula_sha256", super::sha256_hex(self.formula.to_string().as_bytes()));
        m
    }
}

fn pairs(seq: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    seq.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1]))
}

/// Center candidate for the existential assignment `x` and the adversary
/// for the universal assignment `y`. The first isolates `Z.2`, the second
/// the far end of `P`.
pub fn build_radius_witnesses(
    inst: &RadiusInstance,
    x: &[bool],
    y: &[bool],
) -> Result<(OddMatching, OddMatching), ReductionError> {
    let sizes = inst.formula.block_sizes();
    expect_len(x, sizes[0])?;
    expect_len(y, sizes[1])?;
    let small = inst.path(true);
    let big = inst.path(false);
    let z = inst.z;

    let mut m_in: Vec<(usize, usize)> = Vec::new();
    let mut m_tar: Vec<(usize, usize)> = Vec::new();
    // start: v-p1, p2-p3, ..., p_ell-Z1, Z3-Z4; P perfectly matched
    let mut chain = vec![inst.v];
    chain.extend(&small);
    chain.push(z[0]);
    m_in.extend(pairs(&chain));
    m_in.push((z[2], z[3]));
    m_in.extend(pairs(&big));
    // target: p perfectly matched, Z2-Z3, Z4-Z1; v-P1, P2-P3, ...
    m_tar.extend(pairs(&small));
    m_tar.extend([(z[1], z[2]), (z[3], z[0])]);
    let mut chain = vec![inst.v];
    chain.extend(&big);
    m_tar.extend(pairs(&chain));

    let r12 = |s| gadgets::rim_matching(12, s);
    let r14 = |s| gadgets::rim_matching(14, s);
    for (i, ids) in inst.gadgets[0].iter().enumerate() {
        let start: &[(usize, usize)] = if x[i] { &r12(true) } else { &gadgets::CROSSED_12_DIAGONAL };
        let (a, b) = gadget_pair(ids, 12, start, &r12(false))?;
        m_in.extend(a);
        m_tar.extend(b);
    }
    for (i, ids) in inst.gadgets[1].iter().enumerate() {
        let tar: &[(usize, usize)] = if y[i] { &r14(true) } else { &gadgets::DOUBLE_CROSSED_14_OUTER };
        let (a, b) = gadget_pair(ids, 14, &r14(false), tar)?;
        m_in.extend(a);
        m_tar.extend(b);
    }
    for ids in &inst.gadgets[2] {
        let (a, b) = gadget_pair(ids, 12, &r12(false), &r12(true))?;
        m_in.extend(a);
        m_tar.extend(b);
    }
    let (a, b) = clause_pairs(&inst.clauses)?;
    m_in.extend(a);
    m_tar.extend(b);
    let m_in = matching(&inst.graph, z[1], m_in)?;
    let m_tar = matching(&inst.graph, inst.far_end(), m_tar)?;

    let d = decompose_union(&m_in, &m_tar)?;
    let gadget_count = sizes.iter().sum::<usize>() + inst.clauses.len();
    let ends = (d.path.first().copied(), d.path.last().copied());
    if ends != (Some(z[1]), Some(inst.far_end())) || d.cycles.len() != gadget_count || !d.happy_edges.is_empty() {
        return Err(ReductionError::Invariant(format!(
            "witness union has path {:?}..{:?}, {} cycles, {} happy edges",
            ends.0,
            ends.1,
            d.cycles.len(),
            d.happy_edges.len()
        )));
    }
    Ok((m_in, m_tar))
}
