//! Exhaustive ground truth: CNF evaluation, two- and three-block QBF, and
//! exact minimum set cover.

use thiserror::Error;

use crate::reductions::{QuantifiedFormula, Quantifier, SetCoverInstance};

/// Largest total variable count the QBF oracles accept.
pub const MAX_QBF_VARS: usize = 16;
/// Largest set count the set-cover oracle accepts.
pub const MAX_SETS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("assignment has {found} values, formula has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("expected quantifier prefix {0}")]
    WrongPrefix(&'static str),
    #[error("{0} variables exceed the exhaustive limit of {MAX_QBF_VARS}")]
    TooManyVariables(usize),
    #[error("{0} sets exceed the exhaustive limit of {MAX_SETS}")]
    TooManySets(usize),
}

/// Truth of the CNF under `assignment`, given in prefix order (block by
/// block, variables in block order).
pub fn eval_cnf(phi: &QuantifiedFormula, assignment: &[bool]) -> Result<bool, OracleError> {
    if assignment.len() != phi.variable_count() {
        return Err(OracleError::AssignmentLength {
            expected: phi.variable_count(),
            found: assignment.len(),
        });
    }
    let offsets = phi.block_offsets();
    Ok((0..phi.clauses().len()).all(|j| {
        phi.clause_literals(j)
            .iter()
            .any(|l| assignment[offsets[l.block] + l.index] == l.positive)
    }))
}

/// `bits` as an assignment of `len` variables, first variable most
/// significant, so increasing `bits` walks assignments lexicographically
/// (false before true).
fn unpack(bits: u32, len: usize) -> Vec<bool> {
    (0..len).map(|i| bits >> (len - 1 - i) & 1 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbfVerdict {
    pub satisfied: bool,
    /// Forall-exists: one entry per universal assignment (in increasing
    /// order), the smallest satisfying existential assignment or `None`.
    pub exists_witnesses: Vec<(Vec<bool>, Option<Vec<bool>>)>,
    /// Exists-forall-exists: the smallest outer assignment that works.
    pub outer_witness: Option<Vec<bool>>,
}

fn check_prefix(phi: &QuantifiedFormula, expected: &[Quantifier], name: &'static str) -> Result<(), OracleError> {
    if phi.quantifiers() != expected {
        return Err(OracleError::WrongPrefix(name));
    }
    if phi.variable_count() > MAX_QBF_VARS {
        return Err(OracleError::TooManyVariables(phi.variable_count()));
    }
    Ok(())
}

/// Smallest assignment of the last block making the CNF true with the
/// given prefix assignment, if any.
pub fn inner_witness(phi: &QuantifiedFormula, prefix: &[bool]) -> Result<Option<Vec<bool>>, OracleError> {
    let last = phi.variable_count() - prefix.len();
    for bits in 0..1u32 << last {
        let tail = unpack(bits, last);
        let full: Vec<bool> = prefix.iter().copied().chain(tail.iter().copied()).collect();
        if eval_cnf(phi, &full)? {
            return Ok(Some(tail));
        }
    }
    Ok(None)
}

pub fn solve_forall_exists(phi: &QuantifiedFormula) -> Result<QbfVerdict, OracleError> {
    check_prefix(phi, &[Quantifier::Forall, Quantifier::Exists], "forall,exists")?;
    let m1 = phi.block_sizes()[0];
    let mut witnesses = Vec::new();
    for bits in 0..1u32 << m1 {
        let x = unpack(bits, m1);
        let y = inner_witness(phi, &x)?;
        witnesses.push((x, y));
    }
    Ok(QbfVerdict {
        satisfied: witnesses.iter().all(|(_, y)| y.is_some()),
        exists_witnesses: witnesses,
        outer_witness: None,
    })
}

pub fn solve_exists_forall_exists(psi: &QuantifiedFormula) -> Result<QbfVerdict, OracleError> {
    check_prefix(
        psi,
        &[Quantifier::Exists, Quantifier::Forall, Quantifier::Exists],
        "exists,forall,exists",
    )?;
    let sizes = psi.block_sizes();
    for xb in 0..1u32 << sizes[0] {
        let x = unpack(xb, sizes[0]);
        let mut all = true;
        for yb in 0..1u32 << sizes[1] {
            let xy: Vec<bool> = x.iter().copied().chain(unpack(yb, sizes[1])).collect();
            if inner_witness(psi, &xy)?.is_none() {
                all = false;
                break;
            }
        }
        if all {
            return Ok(QbfVerdict {
                satisfied: true,
                exists_witnesses: Vec::new(),
                outer_witness: Some(x),
            });
        }
    }
    Ok(QbfVerdict {
        satisfied: false,
        exists_witnesses: Vec::new(),
        outer_witness: None,
    })
}

/// Exact minimum cover: subsets in increasing size, each size in
/// lexicographic order of 0-based indices.
pub fn min_set_cover(sc: &SetCoverInstance) -> Result<(usize, Vec<usize>), OracleError> {
    let t = sc.sets.len();
    if t > MAX_SETS {
        return Err(OracleError::TooManySets(t));
    }
    for size in 1..=t {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            if sc.covers(&pick) {
                return Ok((size, pick));
            }
            // next combination
            let mut i = size;
            while i > 0 && pick[i - 1] == t - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            pick[i - 1] += 1;
            for j in i..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    // SetCoverInstance guarantees coverage, so the full family always works
    unreachable!("a validated set system is covered by all of its sets")
}
