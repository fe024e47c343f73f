//! Parameter sweeps over planted instances, written as CSV.

use std::io::Write;
use std::time::Duration;

use binapprox::planted::plant;
use binapprox::pmatrix::PatternMatrix;
use itertools::iproduct;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::generate::plant_kind;
use crate::record::{Algorithm, Problem};
use crate::solve::{solve, Limits, SolveRequest};

#[derive(Debug, Clone)]
pub struct Sweep {
    pub problem: Problem,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Ignored for pmatrix.
    pub ranks: Vec<usize>,
    /// Planted flips per instance.
    pub flips: Vec<usize>,
    /// Budgets each instance is decided at.
    pub budgets: Vec<usize>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub pattern: Option<PatternMatrix>,
    pub limits: Limits,
    pub omit_time: bool,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    m: usize,
    n: usize,
    r: Option<usize>,
    flips: usize,
    k: usize,
    seed: u64,
}

#[derive(Debug, Clone)]
struct Row {
    algorithm: Algorithm,
    status: &'static str,
    decision: Option<bool>,
    cost: Option<usize>,
    nodes: u64,
    wall_ms: f64,
}

const HEADER: [&str; 13] = [
    "problem", "algorithm", "m", "n", "r", "flips", "k", "seed", "status", "decision", "cost", "nodes", "agree",
];

impl Sweep {
    fn cells(&self) -> Vec<Cell> {
        let ranks: Vec<Option<usize>> = match self.problem {
            Problem::Pmatrix => vec![None],
            _ => self.ranks.iter().copied().map(Some).collect(),
        };
        iproduct!(&self.rows, &self.cols, &ranks, &self.flips, &self.budgets, &self.seeds)
            .map(|(&m, &n, &r, &flips, &k, &seed)| Cell { m, n, r, flips, k, seed })
            .collect()
    }

    fn run_cell(&self, cell: &Cell) -> Vec<Row> {
        let error_rows = |status| {
            self.algorithms
                .iter()
                .map(|&algorithm| Row { algorithm, status, decision: None, cost: None, nodes: 0, wall_ms: 0.0 })
                .collect()
        };
        let Ok(kind) = plant_kind(self.problem, cell.r, self.pattern.as_ref()) else {
            return error_rows("error");
        };
        let Ok(planted) = plant(&kind, cell.m, cell.n, cell.flips, cell.seed) else {
            return error_rows("error");
        };
        self.algorithms
            .iter()
            .map(|&algorithm| {
                let req = SolveRequest {
                    r: cell.r,
                    k: Some(cell.k),
                    pattern: self.pattern.clone(),
                    limits: self.limits,
                    seed: cell.seed,
                    ..SolveRequest::new(self.problem, algorithm)
                };
                match solve(&planted.noisy, &req) {
                    Ok(rec) => Row {
                        algorithm,
                        status: "ok",
                        decision: Some(rec.decision),
                        cost: rec.cost,
                        nodes: rec.nodes,
                        wall_ms: rec.wall_ms,
                    },
                    Err(e) => Row {
                        algorithm,
                        status: match e {
                            CliError::Resource(_) => "limit",
                            CliError::UnknownAlgorithm(_) => "unsupported",
                            _ => "error",
                        },
                        decision: None,
                        cost: None,
                        nodes: 0,
                        wall_ms: 0.0,
                    },
                }
            })
            .collect()
    }

    /// Runs every cell (in parallel) and writes one CSV row per cell and
    /// algorithm, in sweep order. Returns whether all decided algorithms
    /// agreed in every cell.
    pub fn run(&self, out: impl Write) -> CliResult<bool> {
        let cells = self.cells();
        let results: Vec<Vec<Row>> = cells.par_iter().map(|c| self.run_cell(c)).collect();
        let mut writer = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = HEADER.to_vec();
        if !self.omit_time {
            header.push("time_ms");
        }
        writer.write_record(&header).map_err(csv_error)?;
        let problem = self.problem.tag().to_string();
        let mut all_agree = true;
        for (cell, rows) in cells.iter().zip(&results) {
            let decided: Vec<bool> = rows.iter().filter_map(|r| r.decision).collect();
            let agree = decided.windows(2).all(|w| w[0] == w[1]);
            all_agree &= agree;
            for row in rows {
                let mut fields = vec![
                    problem.clone(),
                    row.algorithm.tag().to_string(),
                    cell.m.to_string(),
                    cell.n.to_string(),
                    cell.r.map_or(String::new(), |r| r.to_string()),
                    cell.flips.to_string(),
                    cell.k.to_string(),
                    cell.seed.to_string(),
                    row.status.to_string(),
                    row.decision.map_or(String::new(), |d| if d { "yes" } else { "no" }.to_string()),
                    row.cost.map_or(String::new(), |c| c.to_string()),
                    row.nodes.to_string(),
                    agree.to_string(),
                ];
                if !self.omit_time {
                    fields.push(format!("{:.3}", row.wall_ms));
                }
                writer.write_record(&fields).map_err(csv_error)?;
            }
        }
        writer.flush()?;
        Ok(all_agree)
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

/// Per-cell timeout used when none is given.
pub const DEFAULT_CELL_TIMEOUT: Duration = Duration::from_secs(10);
