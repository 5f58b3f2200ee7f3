use delivery_core::gadget::{Cnf, CnfError};

#[derive(Debug, thiserror::Error)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error(transparent)]
    Cnf(#[from] CnfError),
}

/// Parses DIMACS CNF text: `c` comment lines, one `p cnf VARS CLAUSES`
/// header, then signed literals with each clause closed by `0`. Clauses
/// may span lines, and a trailing `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let syntax = |message: String| DimacsError::Syntax { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if let Some(rest) = trimmed.strip_prefix('p') {
            if header.is_some() {
                return Err(syntax("second header".into()));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let [kind, vars, count] = fields[..] else {
                return Err(syntax("expected `p cnf VARS CLAUSES`".into()));
            };
            if kind != "cnf" {
                return Err(syntax(format!("unsupported format `{kind}`")));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|e| syntax(format!("bad count `{s}`: {e}")));
            header = Some((num(vars)?, num(count)?));
            continue;
        }
        if header.is_none() {
            return Err(DimacsError::MissingHeader);
        }
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|e| syntax(format!("bad literal `{token}`: {e}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let (vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount { declared, found: clauses.len() });
    }
    Ok(Cnf::from_signed(vars, &clauses)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use delivery_core::gadget::Literal;

    #[test]
    fn comments_and_wrapped_clauses() {
        let cnf = parse_dimacs("c example\np cnf 3 2\n1 -2\n 3 0\n-1 0\n").unwrap();
        assert_eq!(cnf.num_vars(), 3);
        assert_eq!(cnf.clauses()[0], vec![Literal::pos(0), Literal::neg(1), Literal::pos(2)]);
        assert_eq!(cnf.clauses()[1], vec![Literal::neg(0)]);
    }

    #[test]
    fn percent_terminator() {
        assert_eq!(parse_dimacs("p cnf 1 1\n1 0\n%\n0\n").unwrap().clauses().len(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_dimacs("1 0\n"), Err(DimacsError::MissingHeader)));
        assert!(matches!(parse_dimacs(""), Err(DimacsError::MissingHeader)));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2\n"), Err(DimacsError::Unterminated)));
        assert!(matches!(parse_dimacs("p cnf 2 2\n1 2 0\n"), Err(DimacsError::ClauseCount { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 x 0\n"), Err(DimacsError::Syntax { line: 2, .. })));
        assert!(matches!(parse_dimacs("p dnf 2 1\n"), Err(DimacsError::Syntax { line: 1, .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 3 0\n"), Err(DimacsError::Cnf(_))));
    }
}
