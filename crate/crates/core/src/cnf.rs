//! CNF formulas and DIMACS parsing.

use serde::{Deserialize, Serialize};

/// Literals are non-zero integers: `i` is `x_i`, `-i` its negation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("literal {literal} exceeds the declared {num_vars} variables")]
    VariableOutOfRange { literal: i32, num_vars: usize },
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        Cnf { num_vars, clauses }
    }

    /// `assignment[i]` is the value of `x_{i+1}`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|cl| cl.iter().any(|&l| literal_value(l, assignment)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for cl in &self.clauses {
            for l in cl {
                s.push_str(&l.to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }
}

pub fn literal_value(lit: i32, assignment: &[bool]) -> bool {
    let v = assignment[lit.unsigned_abs() as usize - 1];
    if lit > 0 {
        v
    } else {
        !v
    }
}

/// Parses DIMACS CNF. Comment lines start with `c`; clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(DimacsError::Syntax { line: lineno, message: "expected `p cnf <vars> <clauses>`".into() });
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| DimacsError::Syntax { line: lineno, message: format!("bad count `{s}`") })
            };
            header = Some((parse(parts[2])?, parse(parts[3])?));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::Syntax { line: lineno, message: "clause before header".into() });
        };
        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| DimacsError::Syntax { line: lineno, message: format!("bad literal `{tok}`") })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > num_vars {
                    return Err(DimacsError::VariableOutOfRange { literal: lit, num_vars });
                }
                current.push(lit);
            }
        }
    }
    let Some((num_vars, _)) = header else {
        return Err(DimacsError::Syntax { line: 0, message: "missing header".into() });
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    Ok(Cnf { num_vars, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "c demo\np cnf 3 2\n1 -2 3 0\n-1\n 2 0\n";
        let cnf = parse_dimacs(text).unwrap();
        assert_eq!(cnf, Cnf::new(3, vec![vec![1, -2, 3], vec![-1, 2]]));
        assert_eq!(parse_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(DimacsError::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn evaluation() {
        let cnf = Cnf::new(2, vec![vec![1, -2], vec![2]]);
        assert!(cnf.evaluate(&[true, true]));
        assert!(!cnf.evaluate(&[false, true]));
    }
}
