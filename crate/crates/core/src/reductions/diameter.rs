//! Forall-exists formulas to flip-graph diameter.

use crate::graph::Graph;
use crate::matching::{decompose_union, OddMatching};

use super::gadgets::{self, CROSSED_12, TWO_DOOR_12};
use super::{
    assemble_core, check_length, check_prefix, clause_pairs, exact_diameter, expect_len, gadget_pair, matching, Core,
    Meta, Mode, QuantifiedFormula, Quantifier, ReductionError, ReductionParams, Role,
};

#[derive(Clone, Debug)]
pub struct DiameterInstance {
    pub formula: QuantifiedFormula,
    pub graph: Graph,
    pub v: usize,
    /// Far end of the forcing path.
    pub w: usize,
    pub ell: usize,
    pub threshold: usize,
    pub roles: Vec<Role>,
    /// `gadgets[0]` universal, `gadgets[1]` existential; `[var][label - 1]`.
    pub gadgets: Vec<Vec<Vec<usize>>>,
    /// `[clause][pos - 1]`.
    pub clauses: Vec<Vec<usize>>,
    /// Exact flip-graph diameter without the forcing path, when computed.
    pub core_diameter: Option<usize>,
    pub mode: Mode,
}

const SHAPES: [(&gadgets::GadgetShape, super::RoleFn); 2] = [
    (&CROSSED_12, |var, label| Role::Forall { var, label }),
    (&TWO_DOOR_12, |var, label| Role::Exists2 { var, label }),
];

/// Gadget and clause vertex total.
fn gadget_vertices(phi: &QuantifiedFormula) -> usize {
    let s = phi.block_sizes();
    12 * s[0] + 12 * s[1] + 4 * phi.clauses().len()
}

/// Graph of the construction without the forcing path.
pub fn diameter_core(phi: &QuantifiedFormula) -> Result<Graph, ReductionError> {
    check_prefix(phi, &[Quantifier::Forall, Quantifier::Exists], "forall,exists")?;
    Ok(assemble_core(phi, &SHAPES).builder.build()?)
}

pub fn build_diameter_instance(
    phi: &QuantifiedFormula,
    p: &ReductionParams,
) -> Result<DiameterInstance, ReductionError> {
    check_prefix(phi, &[Quantifier::Forall, Quantifier::Exists], "forall,exists")?;
    let mut core_diameter = None;
    let ell = match check_length("ell", p.ell_override)? {
        Some(ell) => ell,
        None => match p.mode {
            Mode::ClosedForm => {
                let c = p.c_constant.ok_or(ReductionError::MissingConstant)?;
                2 * c * (gadget_vertices(phi) + 1)
            }
            Mode::SafeMinimal => {
                let d = exact_diameter(&diameter_core(phi)?, &p.search)?;
                core_diameter = Some(d);
                super::smallest_even_above_twice(d)
            }
        },
    };
    let Core {
        mut builder,
        mut roles,
        v,
        gadgets,
        clauses,
    } = assemble_core(phi, &SHAPES);
    let mut prev = v;
    for i in 1..=ell {
        roles.push(Role::BigPath(i));
        let x = builder.add_vertex();
        builder.add_edge(prev, x);
        prev = x;
    }
    let graph = builder.build()?;
    let sizes = phi.block_sizes();
    let k = phi.clauses().len();
    let expected = 1 + 12 * sizes[0] + 12 * sizes[1] + 4 * k + ell;
    if graph.vertex_count() != expected || expected % 2 == 0 {
        return Err(ReductionError::Invariant(format!(
            "vertex count {} (expected odd {expected})",
            graph.vertex_count()
        )));
    }
    Ok(DiameterInstance {
        formula: phi.clone(),
        v,
        w: prev,
        ell,
        threshold: ell + 7 * (sizes[0] + sizes[1]) + 3 * k,
        roles,
        gadgets,
        clauses,
        graph,
        core_diameter,
        mode: p.mode,
    })
}

impl DiameterInstance {
    pub fn gadget_vertex_count(&self) -> usize {
        gadget_vertices(&self.formula)
    }

    pub fn meta(&self) -> Meta {
        let mut m = Meta::default();
        let sizes = self.formula.block_sizes();
        m.push("kind", "diameter");
        m.push("mode", self.mode);
        m.push("m1", sizes[0]);
        m.push("m2", sizes[1]);
        m.push("clauses", self.formula.clauses().len());
        m.push("ell", self.ell);
        m.push("threshold", self.threshold);
        m.push("vertices", self.graph.vertex_count());
        m.push("v", self.v + 1);
        m.push("w", self.w + 1);
        if let Some(d) = self.core_diameter {
            m.push("core_diameter", d);
        }
        m.push("formula_sha256", super::sha256_hex(self.formula.to_string().as_bytes()));
        m
    }

    fn path_edges(&self) -> Vec<(usize, usize)> {
        // (v,P1),(P2,P3),...: the far end stays isolated
        let mut path = vec![self.v];
        path.extend(self.roles.iter().enumerate().filter_map(|(i, r)| match r {
            Role::BigPath(_) => Some(i),
            _ => None,
        }));
        path.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect()
    }
}

/// Start and target matchings realizing the assignment `x` of the
/// universal block. Both isolate the far end of the forcing path; every
/// gadget carries one alternating cycle, crossed on the universal gadgets
/// whose variable is false.
pub fn build_witness_pair(
    inst: &DiameterInstance,
    x: &[bool],
) -> Result<(OddMatching, OddMatching), ReductionError> {
    let sizes = inst.formula.block_sizes();
    expect_len(x, sizes[0])?;
    let mut m_in = inst.path_edges();
    let mut m_tar = m_in.clone();
    let odd = gadgets::rim_matching(12, false);
    let even = gadgets::rim_matching(12, true);
    for (i, ids) in inst.gadgets[0].iter().enumerate() {
        let tar: &[(usize, usize)] = if x[i] { &even } else { &gadgets::CROSSED_12_DIAGONAL };
        let (a, b) = gadget_pair(ids, 12, &odd, tar)?;
        m_in.extend(a);
        m_tar.extend(b);
    }
    for ids in &inst.gadgets[1] {
        let (a, b) = gadget_pair(ids, 12, &odd, &even)?;
        m_in.extend(a);
        m_tar.extend(b);
    }
    let (a, b) = clause_pairs(&inst.clauses)?;
    m_in.extend(a);
    m_tar.extend(b);
    let m_in = matching(&inst.graph, inst.w, m_in)?;
    let m_tar = matching(&inst.graph, inst.w, m_tar)?;

    let d = decompose_union(&m_in, &m_tar)?;
    let gadget_count = sizes[0] + sizes[1] + inst.clauses.len();
    if d.path.len() != 1 || d.cycles.len() != gadget_count || d.happy_edges.len() != inst.ell / 2 {
        return Err(ReductionError::Invariant(format!(
            "witness union has path of {} vertices, {} cycles, {} happy edges",
            d.path.len(),
            d.cycles.len(),
            d.happy_edges.len()
        )));
    }
    Ok((m_in, m_tar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::parse_formula;

    fn fixed(ell: usize) -> ReductionParams {
        ReductionParams {
            ell_override: Some(ell),
            ..Default::default()
        }
    }

    #[test]
    fn two_by_two_formula_counts() {
        let phi = parse_formula("p cnf 4 2\na 1 2 0\ne 3 4 0\n1 -2 3 0\n2 3 -4 0\n").unwrap();
        let inst = build_diameter_instance(&phi, &fixed(10)).unwrap();
        assert_eq!(inst.gadget_vertex_count(), 56);
        assert_eq!(inst.threshold, 10 + 34);
        assert_eq!(inst.graph.vertex_count(), 1 + 56 + 10);
        for x in [[true, true], [true, false], [false, true], [false, false]] {
            build_witness_pair(&inst, &x).unwrap();
        }
    }

    #[test]
    fn smallest_formula_and_errors() {
        let phi = QuantifiedFormula::from_prefix(
            &[(Quantifier::Forall, 1), (Quantifier::Exists, 1)],
            vec![vec![1, 2]],
        )
        .unwrap();
        let inst = build_diameter_instance(&phi, &fixed(4)).unwrap();
        assert_eq!(inst.gadget_vertex_count(), 28);
        assert_eq!(inst.threshold, 4 + 17);
        assert_eq!(inst.w, inst.graph.vertex_count() - 1);
        assert!(matches!(
            build_witness_pair(&inst, &[]),
            Err(ReductionError::AssignmentLength { .. })
        ));
        assert!(matches!(
            build_diameter_instance(&phi, &fixed(5)),
            Err(ReductionError::BadLength { .. })
        ));
        let closed = ReductionParams {
            mode: Mode::ClosedForm,
            ..Default::default()
        };
        assert!(matches!(
            build_diameter_instance(&phi, &closed),
            Err(ReductionError::MissingConstant)
        ));
        let with_c = ReductionParams {
            c_constant: Some(1),
            ..closed
        };
        assert_eq!(build_diameter_instance(&phi, &with_c).unwrap().ell, 58);

        let swapped = QuantifiedFormula::from_prefix(
            &[(Quantifier::Exists, 1), (Quantifier::Forall, 1)],
            vec![vec![1, 2]],
        )
        .unwrap();
        assert!(matches!(
            build_diameter_instance(&swapped, &fixed(4)),
            Err(ReductionError::WrongPrefix { .. })
        ));
    }

    #[test]
    fn universal_gadget_wiring() {
        let phi = QuantifiedFormula::from_prefix(
            &[(Quantifier::Forall, 1), (Quantifier::Exists, 1)],
            vec![vec![1, 2], vec![-1, -2]],
        )
        .unwrap();
        let inst = build_diameter_instance(&phi, &fixed(2)).unwrap();
        let g = &inst.graph;
        let x = &inst.gadgets[0][0];
        let y = &inst.gadgets[1][0];
        let (c1, c2) = (inst.clauses[0][0], inst.clauses[1][0]);
        assert!(g.has_edge(x[1], x[9]) && g.has_edge(x[2], x[10]));
        assert!(g.has_edge(inst.v, x[0]) && !g.has_edge(inst.v, x[11]));
        assert!(g.has_edge(inst.v, y[0]) && g.has_edge(inst.v, y[11]));
        for l in [4, 10] {
            assert!(g.has_edge(x[l - 1], c1) && !g.has_edge(x[l - 1], c2));
        }
        for l in [3, 9] {
            assert!(g.has_edge(x[l - 1], c2));
        }
        for l in [2, 10] {
            assert!(g.has_edge(y[l - 1], c1));
        }
        for l in [3, 11] {
            assert!(g.has_edge(y[l - 1], c2));
        }
        // port is the only clause vertex with outside neighbors
        for &c in &inst.clauses[0][1..] {
            assert_eq!(g.degree(c), 2);
        }
    }

    #[test]
    fn witness_cycles_cross_where_false() {
        let phi = QuantifiedFormula::from_prefix(
            &[(Quantifier::Forall, 1), (Quantifier::Exists, 1)],
            vec![vec![1, 2]],
        )
        .unwrap();
        let inst = build_diameter_instance(&phi, &fixed(4)).unwrap();
        let x = &inst.gadgets[0][0];
        let (_, t) = build_witness_pair(&inst, &[true]).unwrap();
        assert!(t.contains_edge(x[1], x[2]) && !t.contains_edge(x[1], x[9]));
        let (_, f) = build_witness_pair(&inst, &[false]).unwrap();
        assert!(f.contains_edge(x[1], x[9]) && f.contains_edge(x[2], x[10]));
        assert_eq!(f.isolated(), inst.w);
    }
}
