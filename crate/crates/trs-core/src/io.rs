//! Problem-file format: a small UTF-8 text format that round-trips losslessly.
//!
//! ```text
//! # comment lines start with '#'
//! TRS <n> BALL|SPHERE
//! DENSE                 (followed by n lines of n reals, full matrix)
//!   ... or ...
//! SPARSE <nnz>          (followed by nnz lines "row col value", row >= col)
//! C <n reals>
//! ```
//!
//! Values are written with 17 significant digits so parse(serialize(p))
//! reproduces every f64 bit-exactly.

use crate::error::{Result, TrsError};
use crate::operator::SymmetricOperator;
use crate::problem::{Constraint, QuadraticProblem, TrsProblem, TrseProblem};

/// A parsed problem of either constraint kind.
#[derive(Clone, Debug)]
pub enum AnyProblem {
    Ball(TrsProblem),
    Sphere(TrseProblem),
}

impl AnyProblem {
    pub fn constraint(&self) -> Constraint {
        match self {
            AnyProblem::Ball(_) => Constraint::Ball,
            AnyProblem::Sphere(_) => Constraint::Sphere,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyProblem::Ball(p) => p.dim(),
            AnyProblem::Sphere(p) => p.dim(),
        }
    }

    pub fn op(&self) -> &SymmetricOperator {
        match self {
            AnyProblem::Ball(p) => p.op(),
            AnyProblem::Sphere(p) => p.op(),
        }
    }

    pub fn linear(&self) -> &[f64] {
        match self {
            AnyProblem::Ball(p) => p.linear(),
            AnyProblem::Sphere(p) => p.linear(),
        }
    }

    pub fn as_ball(&self) -> Option<&TrsProblem> {
        match self {
            AnyProblem::Ball(p) => Some(p),
            AnyProblem::Sphere(_) => None,
        }
    }

    pub fn as_sphere(&self) -> Option<&TrseProblem> {
        match self {
            AnyProblem::Sphere(p) => Some(p),
            AnyProblem::Ball(_) => None,
        }
    }
}

impl From<TrsProblem> for AnyProblem {
    fn from(p: TrsProblem) -> Self {
        AnyProblem::Ball(p)
    }
}

impl From<TrseProblem> for AnyProblem {
    fn from(p: TrseProblem) -> Self {
        AnyProblem::Sphere(p)
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    current_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            current_line: 0,
        }
    }

    /// Next non-comment, non-blank line with its 1-based physical number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, raw) in self.inner.by_ref() {
            let line = raw.trim();
            self.current_line = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((idx + 1, line));
        }
        None
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> TrsError {
    TrsError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid real '{tok}'")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value '{tok}'")));
    }
    Ok(v)
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

/// Parses a problem file. Errors carry the offending line number.
pub fn parse_problem(text: &str) -> Result<AnyProblem> {
    let mut lines = Lines::new(text);

    let (hline, header) = lines
        .next_content()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let mut toks = header.split_whitespace();
    match toks.next() {
        Some("TRS") => {}
        other => {
            return Err(parse_err(
                hline,
                format!("expected 'TRS', got '{}'", other.unwrap_or("")),
            ))
        }
    }
    let n = parse_usize(
        toks.next().ok_or_else(|| parse_err(hline, "missing dimension"))?,
        hline,
        "dimension",
    )?;
    if n == 0 {
        return Err(parse_err(hline, "dimension must be positive"));
    }
    let constraint = match toks.next() {
        Some("BALL") => Constraint::Ball,
        Some("SPHERE") => Constraint::Sphere,
        other => {
            return Err(parse_err(
                hline,
                format!("expected BALL or SPHERE, got '{}'", other.unwrap_or("")),
            ))
        }
    };
    if toks.next().is_some() {
        return Err(parse_err(hline, "trailing tokens after header"));
    }

    let (mline, mat_header) = lines
        .next_content()
        .ok_or_else(|| parse_err(hline, "missing matrix block"))?;
    let mut mtoks = mat_header.split_whitespace();
    let op = match mtoks.next() {
        Some("DENSE") => {
            if mtoks.next().is_some() {
                return Err(parse_err(mline, "trailing tokens after DENSE"));
            }
            let mut entries = Vec::with_capacity(n * n);
            for _ in 0..n {
                let (rline, row) = lines
                    .next_content()
                    .ok_or_else(|| parse_err(mline, "missing matrix row"))?;
                let vals: Vec<f64> = row
                    .split_whitespace()
                    .map(|t| parse_f64(t, rline))
                    .collect::<Result<_>>()?;
                if vals.len() != n {
                    return Err(parse_err(
                        rline,
                        format!("expected {n} entries in matrix row, got {}", vals.len()),
                    ));
                }
                entries.extend_from_slice(&vals);
            }
            SymmetricOperator::from_dense(n, &entries)
                .map_err(|e| parse_err(mline, e.to_string()))?
        }
        Some("SPARSE") => {
            let nnz = parse_usize(
                mtoks.next().ok_or_else(|| parse_err(mline, "missing nnz"))?,
                mline,
                "nnz",
            )?;
            if mtoks.next().is_some() {
                return Err(parse_err(mline, "trailing tokens after SPARSE <nnz>"));
            }
            let mut triplets = Vec::with_capacity(nnz);
            for _ in 0..nnz {
                let (tline, row) = lines
                    .next_content()
                    .ok_or_else(|| parse_err(mline, "missing triplet line"))?;
                let toks: Vec<&str> = row.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(parse_err(tline, "expected 'row col value'"));
                }
                let r = parse_usize(toks[0], tline, "row index")?;
                let c = parse_usize(toks[1], tline, "col index")?;
                let v = parse_f64(toks[2], tline)?;
                if r >= n || c >= n {
                    return Err(parse_err(
                        tline,
                        format!("triplet index ({r},{c}) out of range for n={n}"),
                    ));
                }
                if r < c {
                    return Err(parse_err(tline, "triplets must satisfy row >= col"));
                }
                triplets.push((r, c, v));
            }
            SymmetricOperator::from_triplets(n, triplets)
                .map_err(|e| parse_err(mline, e.to_string()))?
        }
        other => {
            return Err(parse_err(
                mline,
                format!("expected DENSE or SPARSE, got '{}'", other.unwrap_or("")),
            ))
        }
    };

    let (cline, cfirst) = lines
        .next_content()
        .ok_or_else(|| parse_err(mline, "missing C block"))?;
    let mut ctoks = cfirst.split_whitespace();
    match ctoks.next() {
        Some("C") => {}
        other => {
            return Err(parse_err(
                cline,
                format!("expected 'C', got '{}'", other.unwrap_or("")),
            ))
        }
    }
    let mut c: Vec<f64> = Vec::with_capacity(n);
    let mut last_line = cline;
    for t in ctoks {
        c.push(parse_f64(t, cline)?);
    }
    while c.len() < n {
        let (l, row) = lines
            .next_content()
            .ok_or_else(|| parse_err(last_line, format!("expected {n} entries in c")))?;
        last_line = l;
        for t in row.split_whitespace() {
            c.push(parse_f64(t, l)?);
        }
    }
    if c.len() != n {
        return Err(parse_err(
            last_line,
            format!("expected {n} entries in c, got {}", c.len()),
        ));
    }
    if lines.next_content().is_some() {
        return Err(parse_err(
            lines.current_line,
            "unexpected content after c vector",
        ));
    }

    Ok(match constraint {
        Constraint::Ball => AnyProblem::Ball(
            TrsProblem::new(op, c).map_err(|e| parse_err(cline, e.to_string()))?,
        ),
        Constraint::Sphere => AnyProblem::Sphere(
            TrseProblem::new(op, c).map_err(|e| parse_err(cline, e.to_string()))?,
        ),
    })
}

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes a problem to the text format, preserving storage kind.
pub fn serialize_problem(p: &AnyProblem) -> String {
    let n = p.dim();
    let tag = match p.constraint() {
        Constraint::Ball => "BALL",
        Constraint::Sphere => "SPHERE",
    };
    let mut out = String::new();
    out.push_str(&format!("TRS {n} {tag}\n"));
    let op = p.op();
    if op.is_dense() {
        out.push_str("DENSE\n");
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| fmt_real(op.entry(i, j))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    } else {
        let entries = op.lower_entries();
        out.push_str(&format!("SPARSE {}\n", entries.len()));
        for (r, c, v) in entries {
            out.push_str(&format!("{r} {c} {}\n", fmt_real(v)));
        }
    }
    let cs: Vec<String> = p.linear().iter().map(|&v| fmt_real(v)).collect();
    out.push_str(&format!("C {}\n", cs.join(" ")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> AnyProblem {
        let op = SymmetricOperator::from_diagonal(&[-13.0, 13.0]).unwrap();
        AnyProblem::Ball(TrsProblem::new(op, vec![-250.0 / 169.0, 3456.0 / 169.0]).unwrap())
    }

    #[test]
    fn roundtrip_is_exact() {
        let p = example1();
        let text = serialize_problem(&p);
        let q = parse_problem(&text).unwrap();
        assert_eq!(q.constraint(), Constraint::Ball);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(p.op().entry(i, j).to_bits(), q.op().entry(i, j).to_bits());
            }
        }
        for (a, b) in p.linear().iter().zip(q.linear()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn roundtrip_dense_sphere() {
        let op = SymmetricOperator::from_dense(2, &[27.0, 0.25, 0.25, 53.0]).unwrap();
        let p = AnyProblem::Sphere(TrseProblem::new(op, vec![-4.0, 9.0]).unwrap());
        let text = serialize_problem(&p);
        let q = parse_problem(&text).unwrap();
        assert_eq!(q.constraint(), Constraint::Sphere);
        assert_eq!(q.op().entry(1, 0), 0.25);
    }

    #[test]
    fn mirror_fill_from_sparse_triplet() {
        let text = "TRS 2 BALL\nSPARSE 1\n1 0 1.0\nC 0 0\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.op().apply(&[3.0, 4.0]).unwrap(), vec![4.0, 3.0]);
    }

    #[test]
    fn arity_mismatch_in_c() {
        let text = "TRS 2 BALL\nDENSE\n1 0\n0 1\nC 1 2 3\n";
        let err = parse_problem(text).unwrap_err();
        assert!(matches!(err, TrsError::Parse { .. }), "{err}");
    }

    #[test]
    fn reports_line_numbers() {
        let text = "# header comment\nTRS 2 BALL\nSPARSE 1\n0 1 1.0\nC 0 0\n";
        match parse_problem(text).unwrap_err() {
            TrsError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn rejects_malformed_header() {
        assert!(parse_problem("QP 2 BALL\n").is_err());
        assert!(parse_problem("TRS 2 CUBE\nDENSE\n1 0\n0 1\nC 0 0\n").is_err());
    }

    #[test]
    fn rejects_duplicate_triplets() {
        let text = "TRS 2 BALL\nSPARSE 2\n1 0 1.0\n1 0 2.0\nC 0 0\n";
        assert!(parse_problem(text).is_err());
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# a file\n\nTRS 2 SPHERE\n# matrix\nSPARSE 2\n0 0 27.0\n1 1 53.0\n\nC -4.0 9.0\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.linear(), &[-4.0, 9.0]);
    }
}
