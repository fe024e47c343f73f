//! Solver dispatch for the `solve` and `bench` subcommands.

use std::time::{Duration, Instant};

use binapprox::boolean::{oracle_boolean, oracle_boolean_min, solve_boolean_budgeted};
use binapprox::gf2::{branch_gf2_budgeted, extend_solution_gf2_budgeted, oracle_gf2, oracle_gf2_min, Gf2Instance};
use binapprox::means::{extend_means_budgeted, extend_means_unkernelized, oracle_means, oracle_means_min, MeansInstance};
use binapprox::pmatrix::{
    branch_pmatrix_budgeted, extend_p_solution_budgeted, oracle_pmatrix, oracle_pmatrix_min, PatternMatrix,
};
use binapprox::selection::{color_coding_means, ColorCodingOptions};
use binapprox::{BinaryMatrix, Budget};

use crate::error::{CliError, CliResult};
use crate::instance::format_pattern;
use crate::record::{Algorithm, Problem, ResultRecord, Witness};
use crate::verify::{verify, Bounds};

/// Search limits. A solver that exceeds them fails with a resource error
/// rather than answering.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
}

impl Limits {
    fn budget(&self) -> Budget {
        let mut budget = Budget::unlimited();
        if let Some(n) = self.max_nodes {
            budget = budget.with_max_nodes(n);
        }
        if let Some(t) = self.timeout {
            budget = budget.with_timeout(t);
        }
        budget
    }
}

#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub problem: Problem,
    pub algorithm: Algorithm,
    pub r: Option<usize>,
    /// `None` asks for the minimum budget.
    pub k: Option<usize>,
    pub pattern: Option<PatternMatrix>,
    /// Largest budget tried in optimization mode; defaults to `m * n`.
    pub max_k: Option<usize>,
    pub limits: Limits,
    pub seed: u64,
    pub trials: Option<usize>,
}

impl SolveRequest {
    pub fn new(problem: Problem, algorithm: Algorithm) -> Self {
        SolveRequest {
            problem,
            algorithm,
            r: None,
            k: None,
            pattern: None,
            max_k: None,
            limits: Limits::default(),
            seed: 0,
            trials: None,
        }
    }

    fn rank(&self) -> CliResult<usize> {
        match self.r {
            Some(r) if r > 0 => Ok(r),
            Some(_) => Err(CliError::Usage("r must be positive".into())),
            None => Err(CliError::Usage(format!("{:?} needs r", self.problem))),
        }
    }

    fn pattern(&self) -> CliResult<&PatternMatrix> {
        self.pattern.as_ref().ok_or_else(|| CliError::Usage("pmatrix needs a pattern".into()))
    }

    fn check_algorithm(&self) -> CliResult<()> {
        if Algorithm::available(self.problem).contains(&self.algorithm) {
            Ok(())
        } else {
            Err(CliError::UnknownAlgorithm(format!(
                "{} is not available for {:?}",
                self.algorithm.tag(),
                self.problem
            )))
        }
    }
}

/// Decision at budget `k`.
fn decide(a: &BinaryMatrix, req: &SolveRequest, k: usize, budget: &mut Budget) -> CliResult<Option<Witness>> {
    use Algorithm::*;
    let witness = match req.problem {
        Problem::Means => {
            let inst = MeansInstance::new(a.clone(), req.rank()?, k)?;
            let found = match req.algorithm {
                Oracle => oracle_means(&inst)?,
                Extend => extend_means_unkernelized(&inst, budget)?,
                KernelExtend => extend_means_budgeted(&inst, budget)?,
                ColorCoding => {
                    let options = ColorCodingOptions { seed: req.seed, trials: req.trials, ..Default::default() };
                    color_coding_means(&inst, &options, budget)?
                }
                _ => unreachable!("checked by check_algorithm"),
            };
            found.as_ref().map(Witness::from)
        }
        Problem::Gf2 => {
            let inst = Gf2Instance::new(a.clone(), req.rank()?, k)?;
            let found = match req.algorithm {
                Oracle => oracle_gf2(&inst)?,
                Branch => branch_gf2_budgeted(&inst, budget)?,
                Extend => extend_solution_gf2_budgeted(&inst, budget)?,
                _ => unreachable!("checked by check_algorithm"),
            };
            found.as_ref().map(Witness::from)
        }
        Problem::Pmatrix => {
            let p = req.pattern()?;
            let found = match req.algorithm {
                Oracle => oracle_pmatrix(a, p, k)?,
                Branch => branch_pmatrix_budgeted(a, p, k, budget)?,
                Extend => extend_p_solution_budgeted(a, p, k, budget)?,
                _ => unreachable!("checked by check_algorithm"),
            };
            found.map(|w| Witness::pmatrix(&w, p))
        }
        Problem::Boolean => {
            let r = req.rank()?;
            let found = match req.algorithm {
                Oracle => oracle_boolean(a, r, k)?,
                PatternEnum => solve_boolean_budgeted(a, r, k, budget)?,
                _ => unreachable!("checked by check_algorithm"),
            };
            found.as_ref().map(Witness::from)
        }
    };
    Ok(witness)
}

/// Minimum-cost witness straight from the brute-force oracles.
fn oracle_minimum(a: &BinaryMatrix, req: &SolveRequest) -> CliResult<Option<Witness>> {
    Ok(match req.problem {
        Problem::Means => Some(Witness::from(&oracle_means_min(a, req.rank()?)?)),
        Problem::Gf2 => Some(Witness::from(&oracle_gf2_min(a, req.rank()?)?)),
        Problem::Pmatrix => {
            let p = req.pattern()?;
            oracle_pmatrix_min(a, p)?.map(|w| Witness::pmatrix(&w, p))
        }
        Problem::Boolean => Some(Witness::from(&oracle_boolean_min(a, req.rank()?)?)),
    })
}

/// Runs one request and re-validates the witness before returning it.
pub fn solve(a: &BinaryMatrix, req: &SolveRequest) -> CliResult<ResultRecord> {
    req.check_algorithm()?;
    let start = Instant::now();
    let mut budget = req.limits.budget();
    let (witness, min_cost) = match req.k {
        Some(k) => (decide(a, req, k, &mut budget)?, None),
        None if req.algorithm == Algorithm::Oracle => (oracle_minimum(a, req)?, None),
        None => {
            let cap = req.max_k.unwrap_or(a.rows_count() * a.cols_count());
            let mut found = (None, None);
            for k in 0..=cap {
                if let Some(w) = decide(a, req, k, &mut budget)? {
                    found = (Some(w), Some(k));
                    break;
                }
            }
            found
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut record = ResultRecord {
        problem: req.problem,
        algorithm: req.algorithm,
        r: if req.problem == Problem::Pmatrix { None } else { req.r },
        k: req.k,
        decision: witness.is_some(),
        min_cost,
        cost: None,
        witness,
        wall_ms,
        nodes: budget.nodes(),
    };
    if record.witness.is_some() {
        let bounds = Bounds { r: req.r, k: req.k.or(min_cost), pattern: req.pattern.as_ref().map(format_pattern) };
        let verdict = verify(req.problem, a, &record, &bounds)?;
        if !verdict.passed() {
            return Err(CliError::Usage(format!("solver produced an invalid witness: {}", verdict.failures.join("; "))));
        }
        record.cost = Some(verdict.cost);
        if req.k.is_none() {
            record.min_cost = Some(verdict.cost);
        }
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn means_oracle_optimizes_identity() {
        let mut req = SolveRequest::new(Problem::Means, Algorithm::Oracle);
        req.r = Some(1);
        let record = solve(&BinaryMatrix::identity(2), &req).unwrap();
        assert_eq!(record.min_cost, Some(2));
    }

    #[test]
    fn optimization_agrees_across_algorithms() {
        let a = mat(&["0110", "1011", "0100"]);
        for problem in [Problem::Means, Problem::Gf2, Problem::Boolean] {
            let costs: Vec<Option<usize>> = Algorithm::available(problem)
                .iter()
                .map(|&alg| {
                    let mut req = SolveRequest::new(problem, alg);
                    req.r = Some(1);
                    solve(&a, &req).unwrap().min_cost
                })
                .collect();
            assert!(costs.windows(2).all(|w| w[0] == w[1]), "{problem:?}: {costs:?}");
        }
    }

    #[test]
    fn low_rank_input_is_accepted_without_edits() {
        let mut req = SolveRequest::new(Problem::Gf2, Algorithm::Branch);
        req.r = Some(2);
        req.k = Some(0);
        let record = solve(&mat(&["110", "011", "101"]), &req).unwrap();
        assert!(record.decision);
        assert_eq!(record.cost, Some(0));
    }

    #[test]
    fn staircase_pattern_is_recognized() {
        let p = mat(&["00", "01"]);
        let mut req = SolveRequest::new(Problem::Pmatrix, Algorithm::Extend);
        req.pattern = Some(PatternMatrix::new(p.clone()).unwrap());
        req.k = Some(0);
        assert!(solve(&p, &req).unwrap().decision);
    }

    #[test]
    fn mismatched_algorithm_is_rejected() {
        let mut req = SolveRequest::new(Problem::Boolean, Algorithm::Branch);
        req.r = Some(1);
        req.k = Some(0);
        let err = solve(&BinaryMatrix::identity(2), &req).unwrap_err();
        assert!(matches!(err, CliError::UnknownAlgorithm(_)));
    }

    #[test]
    fn node_limit_is_a_resource_error() {
        let mut req = SolveRequest::new(Problem::Gf2, Algorithm::Branch);
        req.r = Some(1);
        req.k = Some(6);
        req.limits.max_nodes = Some(2);
        let a = BinaryMatrix::from_fn(6, 6, |i, j| (i * 5 + j * 3) % 4 == 0);
        let err = solve(&a, &req).unwrap_err();
        assert!(matches!(err, CliError::Resource(_)));
    }
}
