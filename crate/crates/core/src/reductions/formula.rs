//! Quantified CNF formulas and their QDIMACS-style text form.

use std::fmt::{self, Write as _};

use crate::graph::{content_lines, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantBlock {
    pub quantifier: Quantifier,
    /// Variable ids as written in the file (1-based).
    pub vars: Vec<u32>,
}

/// A literal resolved against the prefix: variable `index` of block `block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Literal {
    pub block: usize,
    pub index: usize,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantifiedFormula {
    declared_vars: u32,
    blocks: Vec<QuantBlock>,
    clauses: Vec<Vec<i32>>,
    // var id -> (block, index)
    position: Vec<Option<(usize, usize)>>,
}

impl QuantifiedFormula {
    pub fn new(declared_vars: u32, blocks: Vec<QuantBlock>, clauses: Vec<Vec<i32>>) -> Result<Self, String> {
        let mut position = vec![None; declared_vars as usize + 1];
        for (bi, block) in blocks.iter().enumerate() {
            for (vi, &var) in block.vars.iter().enumerate() {
                if var == 0 || var > declared_vars {
                    return Err(format!("variable {var} outside 1..={declared_vars}"));
                }
                if position[var as usize].is_some() {
                    return Err(format!("variable {var} quantified twice"));
                }
                position[var as usize] = Some((bi, vi));
            }
        }
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(format!("clause {} is empty", ci + 1));
            }
            for &lit in clause {
                let var = lit.unsigned_abs();
                if lit == 0 || var > declared_vars || position[var as usize].is_none() {
                    return Err(format!("clause {} uses unquantified variable {var}", ci + 1));
                }
            }
        }
        Ok(QuantifiedFormula {
            declared_vars,
            blocks,
            clauses,
            position,
        })
    }

    /// Numbers variables consecutively in prefix order; clause literals use
    /// those 1-based numbers with sign for polarity.
    pub fn from_prefix(prefix: &[(Quantifier, usize)], clauses: Vec<Vec<i32>>) -> Result<Self, String> {
        let mut next = 1;
        let blocks = prefix
            .iter()
            .map(|&(quantifier, count)| {
                let vars = (next..next + count as u32).collect();
                next += count as u32;
                QuantBlock { quantifier, vars }
            })
            .collect();
        Self::new(next - 1, blocks, clauses)
    }

    pub fn blocks(&self) -> &[QuantBlock] {
        &self.blocks
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn quantifiers(&self) -> Vec<Quantifier> {
        self.blocks.iter().map(|b| b.quantifier).collect()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.vars.len()).collect()
    }

    pub fn variable_count(&self) -> usize {
        self.blocks.iter().map(|b| b.vars.len()).sum()
    }

    pub fn literal(&self, lit: i32) -> Literal {
        let (block, index) = self.position[lit.unsigned_abs() as usize].expect("validated at construction");
        Literal {
            block,
            index,
            positive: lit > 0,
        }
    }

    pub fn clause_literals(&self, clause: usize) -> Vec<Literal> {
        self.clauses[clause].iter().map(|&l| self.literal(l)).collect()
    }

    /// Offset of each block inside a flat assignment in prefix order.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.vars.len();
                o
            })
            .collect()
    }
}

impl fmt::Display for QuantifiedFormula {
    /// Canonical QDIMACS text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.declared_vars, self.clauses.len())?;
        for b in &self.blocks {
            let q = match b.quantifier {
                Quantifier::Forall => 'a',
                Quantifier::Exists => 'e',
            };
            let mut line = String::from(q);
            for v in &b.vars {
                write!(line, " {v}")?;
            }
            writeln!(f, "{line} 0")?;
        }
        for c in &self.clauses {
            let mut line = String::new();
            for l in c {
                write!(line, "{l} ")?;
            }
            writeln!(f, "{line}0")?;
        }
        Ok(())
    }
}

fn parse_ints(line: usize, toks: &[&str]) -> Result<Vec<i64>, ParseError> {
    toks.iter()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| ParseError::syntax(line, format!("expected an integer, got `{t}`")))
        })
        .collect()
}

fn zero_terminated(line: usize, mut vals: Vec<i64>) -> Result<Vec<i64>, ParseError> {
    if vals.pop() != Some(0) {
        return Err(ParseError::syntax(line, "line must end with 0"));
    }
    if vals.contains(&0) {
        return Err(ParseError::syntax(line, "0 only allowed as terminator"));
    }
    Ok(vals)
}

/// Parses `p cnf <vars> <clauses>`, quantifier lines `a ... 0` / `e ... 0`
/// in prefix order, then one clause per line terminated by 0.
pub fn parse_formula(text: &str) -> Result<QuantifiedFormula, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(1, "missing `p cnf` header"))?;
    if header.len() != 4 || header[0] != "p" || header[1] != "cnf" {
        return Err(ParseError::syntax(hline, "bad header, expected `p cnf <vars> <clauses>`"));
    }
    let nums = parse_ints(hline, &header[2..])?;
    if nums.iter().any(|&x| x < 0 || x > u32::MAX as i64) {
        return Err(ParseError::syntax(hline, "negative count in header"));
    }
    let (vars, nclauses) = (nums[0] as u32, nums[1] as usize);
    let mut blocks = Vec::new();
    let mut clauses = Vec::new();
    for (line, toks) in lines {
        match toks[0] {
            "a" | "e" => {
                if !clauses.is_empty() {
                    return Err(ParseError::syntax(line, "quantifier line after clauses"));
                }
                let quantifier = if toks[0] == "a" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                let vals = zero_terminated(line, parse_ints(line, &toks[1..])?)?;
                if vals.is_empty() {
                    return Err(ParseError::syntax(line, "empty quantifier block"));
                }
                if vals.iter().any(|&v| v < 0 || v > u32::MAX as i64) {
                    return Err(ParseError::syntax(line, "quantified variables must be positive"));
                }
                blocks.push(QuantBlock {
                    quantifier,
                    vars: vals.into_iter().map(|v| v as u32).collect(),
                });
            }
            _ => {
                let vals = zero_terminated(line, parse_ints(line, &toks)?)?;
                if vals.iter().any(|&v| v.unsigned_abs() > u32::MAX as u64 / 2) {
                    return Err(ParseError::syntax(line, "literal out of range"));
                }
                clauses.push(vals.into_iter().map(|v| v as i32).collect());
            }
        }
    }
    if clauses.len() != nclauses {
        return Err(ParseError::syntax(
            hline,
            format!("header declares {nclauses} clauses but {} were given", clauses.len()),
        ));
    }
    QuantifiedFormula::new(vars, blocks, clauses).map_err(|msg| ParseError::syntax(hline, msg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let text = "c two by two\np cnf 4 2\na 1 2 0\ne 3 4 0\n1 -2 3 0\n2 3 -4 0\n";
        let f = parse_formula(text).unwrap();
        assert_eq!(f.quantifiers(), vec![Quantifier::Forall, Quantifier::Exists]);
        assert_eq!(f.block_sizes(), vec![2, 2]);
        assert_eq!(
            f.literal(-2),
            Literal {
                block: 0,
                index: 1,
                positive: false
            }
        );
        assert_eq!(f.to_string(), text.trim_start_matches("c two by two\n"));
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_formula("p cnf 1 1\na 1 0\n2 0\n").is_err());
        assert!(parse_formula("p cnf 1 1\na 1\n1 0\n").is_err());
        assert!(parse_formula("p cnf 1 2\na 1 0\n1 0\n").is_err());
        assert!(parse_formula("p cnf 2 1\na 1 0\ne 1 0\n1 0\n").is_err());
        assert!(parse_formula("p cnf 1 1\na 1 0\n0\n").is_err());
        assert!(parse_formula("p sat 1 1\n").is_err());
    }

    #[test]
    fn from_prefix_numbers_consecutively() {
        let f = QuantifiedFormula::from_prefix(
            &[(Quantifier::Exists, 1), (Quantifier::Forall, 1), (Quantifier::Exists, 1)],
            vec![vec![1, 2, 3]],
        )
        .unwrap();
        assert_eq!(f.block_offsets(), vec![0, 1, 2]);
        assert_eq!(f.literal(3).block, 2);
    }
}
