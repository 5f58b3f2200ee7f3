use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("formula has no variables")]
    NoVariables,
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} has {len} literals, at most 3 are allowed")]
    TooManyLiterals { clause: usize, len: usize },
    #[error("clause {clause} mentions variable {var}, but there are only {num_vars}")]
    VariableOutOfRange { clause: usize, var: usize, num_vars: usize },
    #[error("clause {clause} mentions variable {var} twice")]
    RepeatedVariable { clause: usize, var: usize },
}

/// A formula in conjunctive normal form with one to three literals per
/// clause and no variable repeated inside a clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self, CnfError> {
        if num_vars == 0 {
            return Err(CnfError::NoVariables);
        }
        for (clause, lits) in clauses.iter().enumerate() {
            match lits.len() {
                0 => return Err(CnfError::EmptyClause { clause }),
                1..=3 => {}
                len => return Err(CnfError::TooManyLiterals { clause, len }),
            }
            for (k, l) in lits.iter().enumerate() {
                if l.var >= num_vars {
                    return Err(CnfError::VariableOutOfRange { clause, var: l.var, num_vars });
                }
                if lits[..k].iter().any(|m| m.var == l.var) {
                    return Err(CnfError::RepeatedVariable { clause, var: l.var });
                }
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// Builds from signed one-based literals as in DIMACS (`-2` is the
    /// negation of the second variable).
    pub fn from_signed(num_vars: usize, clauses: &[Vec<i64>]) -> Result<Self, CnfError> {
        let mut out = Vec::with_capacity(clauses.len());
        for (clause, lits) in clauses.iter().enumerate() {
            let mut c = Vec::with_capacity(lits.len());
            for &l in lits {
                let var = l.unsigned_abs() as usize;
                if var == 0 || var > num_vars {
                    return Err(CnfError::VariableOutOfRange { clause, var, num_vars });
                }
                c.push(Literal { var: var - 1, positive: l > 0 });
            }
            out.push(c);
        }
        Cnf::new(num_vars, out)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars && self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_malformed() {
        assert_eq!(Cnf::new(0, vec![]), Err(CnfError::NoVariables));
        assert_eq!(Cnf::new(2, vec![vec![]]), Err(CnfError::EmptyClause { clause: 0 }));
        assert_eq!(
            Cnf::from_signed(4, &[vec![1, 2, 3, 4]]),
            Err(CnfError::TooManyLiterals { clause: 0, len: 4 })
        );
        assert_eq!(
            Cnf::from_signed(2, &[vec![1], vec![1, -1]]),
            Err(CnfError::RepeatedVariable { clause: 1, var: 0 })
        );
        assert_eq!(
            Cnf::from_signed(2, &[vec![3]]),
            Err(CnfError::VariableOutOfRange { clause: 0, var: 3, num_vars: 2 })
        );
    }

    #[test]
    fn satisfaction() {
        let f = Cnf::from_signed(2, &[vec![1, -2]]).unwrap();
        assert!(f.is_satisfied_by(&[true, true]));
        assert!(f.is_satisfied_by(&[false, false]));
        assert!(!f.is_satisfied_by(&[false, true]));
    }
}
