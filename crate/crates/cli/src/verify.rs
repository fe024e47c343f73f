//! Independent witness checking. Only matrix primitives are used here, never
//! the solvers' own validators.

use binapprox::matrix::{boolean_product, gf2_rank, hamming_mat};
use binapprox::{BinaryMatrix, BitVector, IndexPartition};

use crate::error::{CliError, CliResult};
use crate::instance::parse_pattern;
use crate::record::{Problem, ResultRecord, Witness};

/// Parameters the witness is checked against.
#[derive(Debug, Clone, Default)]
pub struct Bounds {
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub pattern: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub cost: usize,
    pub failures: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::MalformedWitness(msg.into())
}

fn vector(text: &str, len: usize, what: &str) -> CliResult<BitVector> {
    let v = BitVector::parse(text).map_err(|e| malformed(format!("{what}: {e}")))?;
    if v.len() != len {
        return Err(malformed(format!("{what} has length {}, expected {len}", v.len())));
    }
    Ok(v)
}

fn matrix(rows: &[String], width: usize, what: &str) -> CliResult<BinaryMatrix> {
    let rows = rows.iter().map(|r| vector(r, width, what)).collect::<CliResult<Vec<_>>>()?;
    BinaryMatrix::from_rows(width, rows).map_err(|e| malformed(e.to_string()))
}

fn partition(universe: usize, parts: &[Vec<usize>], what: &str) -> CliResult<IndexPartition> {
    IndexPartition::new(universe, parts.to_vec()).map_err(|e| malformed(format!("{what}: {e}")))
}

pub fn verify(problem: Problem, a: &BinaryMatrix, record: &ResultRecord, bounds: &Bounds) -> CliResult<Verdict> {
    let Some(witness) = &record.witness else {
        return Err(malformed("record carries no witness"));
    };
    let (m, n) = a.shape();
    let r = bounds.r.or(record.r);
    let k = bounds.k.or(record.k).or(record.min_cost);
    let mut failures = Vec::new();
    let b = match (problem, witness) {
        (Problem::Means, Witness::Means { clusters, means }) => {
            let parts = partition(n, clusters, "clusters")?;
            if means.len() != parts.len() {
                return Err(malformed(format!("{} means for {} clusters", means.len(), parts.len())));
            }
            let means = means.iter().map(|c| vector(c, m, "mean")).collect::<CliResult<Vec<_>>>()?;
            if r.is_some_and(|r| parts.len() > r) {
                failures.push(format!("{} clusters exceed r", parts.len()));
            }
            let mut cols = vec![BitVector::zeros(m); n];
            for (part, mean) in parts.parts().iter().zip(&means) {
                for &j in part {
                    cols[j] = mean.clone();
                }
            }
            BinaryMatrix::from_columns(m, &cols).map_err(|e| malformed(e.to_string()))?
        }
        (Problem::Gf2, Witness::Gf2 { basis, assignment }) => {
            let basis = basis.iter().map(|v| vector(v, m, "basis vector")).collect::<CliResult<Vec<_>>>()?;
            if assignment.len() != n {
                return Err(malformed(format!("{} assignments for {n} columns", assignment.len())));
            }
            if assignment.iter().flatten().any(|&i| i >= basis.len()) {
                return Err(malformed("assignment names a missing basis vector"));
            }
            let stacked = BinaryMatrix::from_columns(m, &basis).map_err(|e| malformed(e.to_string()))?;
            if gf2_rank(&stacked) != basis.len() {
                failures.push("basis is linearly dependent".into());
            }
            if r.is_some_and(|r| basis.len() > r) {
                failures.push(format!("{} basis vectors exceed r", basis.len()));
            }
            let cols: Vec<BitVector> = assignment
                .iter()
                .map(|set| set.iter().fold(BitVector::zeros(m), |acc, &i| acc.xor(&basis[i])))
                .collect();
            BinaryMatrix::from_columns(m, &cols).map_err(|e| malformed(e.to_string()))?
        }
        (Problem::Pmatrix, Witness::Pmatrix { pattern, row_parts, col_parts }) => {
            let p = parse_pattern(pattern).map_err(|e| malformed(e.to_string()))?;
            if let Some(expected) = &bounds.pattern {
                let expected = parse_pattern(expected)?;
                if expected != p {
                    failures.push("witness uses a different pattern".into());
                }
            }
            let rows = partition(m, row_parts, "row parts")?;
            let cols = partition(n, col_parts, "column parts")?;
            if rows.len() != p.p() || cols.len() != p.q() {
                return Err(malformed(format!(
                    "{}x{} parts for a {}x{} pattern",
                    rows.len(),
                    cols.len(),
                    p.p(),
                    p.q()
                )));
            }
            let (rl, cl) = (rows.labels(), cols.labels());
            BinaryMatrix::from_fn(m, n, |i, j| p.matrix().get(rl[i], cl[j]))
        }
        (Problem::Boolean, Witness::Boolean { u, v }) => {
            if u.len() != m {
                return Err(malformed(format!("U has {} rows, expected {m}", u.len())));
            }
            let inner = u.first().map_or(v.len(), String::len);
            if v.len() != inner {
                return Err(malformed(format!("V has {} rows, expected {inner}", v.len())));
            }
            let u = matrix(u, inner, "row of U")?;
            let v = matrix(v, n, "row of V")?;
            if r.is_some_and(|r| inner > r) {
                failures.push(format!("inner dimension {inner} exceeds r"));
            }
            boolean_product(&u, &v).map_err(|e| malformed(e.to_string()))?
        }
        (problem, _) => return Err(malformed(format!("witness kind does not match problem {problem:?}"))),
    };
    let cost = hamming_mat(a, &b).map_err(|e| malformed(e.to_string()))?;
    if let Some(claimed) = record.cost {
        if claimed != cost {
            failures.push(format!("cost field says {claimed}, recomputed {cost}"));
        }
    }
    if let Some(k) = k {
        if cost > k {
            failures.push(format!("cost {cost} exceeds budget {k}"));
        }
    }
    Ok(Verdict { cost, failures })
}
