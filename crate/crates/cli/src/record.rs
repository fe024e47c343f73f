//! Line-delimited JSON result records and their witnesses.

use binapprox::boolean::BoolSolution;
use binapprox::gf2::Gf2Solution;
use binapprox::means::Clustering;
use binapprox::pmatrix::{PMatrixWitness, PatternMatrix};
use binapprox::BinaryMatrix;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::instance::format_pattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// Clustering around at most r binary means
    Means,
    /// GF(2)-rank at most r
    Gf2,
    /// Fixed block pattern
    Pmatrix,
    /// Boolean rank at most r
    Boolean,
}

impl Problem {
    pub fn tag(self) -> &'static str {
        match self {
            Problem::Means => "means",
            Problem::Gf2 => "gf2",
            Problem::Pmatrix => "pmatrix",
            Problem::Boolean => "boolean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
pub enum Algorithm {
    #[serde(rename = "oracle")]
    Oracle,
    #[serde(rename = "branch")]
    Branch,
    #[serde(rename = "extend")]
    Extend,
    #[serde(rename = "kernel+extend")]
    #[value(name = "kernel+extend")]
    KernelExtend,
    #[serde(rename = "color-coding")]
    ColorCoding,
    #[serde(rename = "pattern-enum")]
    PatternEnum,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::Branch => "branch",
            Algorithm::Extend => "extend",
            Algorithm::KernelExtend => "kernel+extend",
            Algorithm::ColorCoding => "color-coding",
            Algorithm::PatternEnum => "pattern-enum",
        }
    }

    /// Algorithms implemented for a problem, oracle first.
    pub fn available(problem: Problem) -> &'static [Algorithm] {
        use Algorithm::*;
        match problem {
            Problem::Means => &[Oracle, Extend, KernelExtend, ColorCoding],
            Problem::Gf2 | Problem::Pmatrix => &[Oracle, Branch, Extend],
            Problem::Boolean => &[Oracle, PatternEnum],
        }
    }
}

/// Witness payloads. Vectors and matrix rows are written as 0/1 strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Means {
        clusters: Vec<Vec<usize>>,
        means: Vec<String>,
    },
    Gf2 {
        basis: Vec<String>,
        assignment: Vec<Vec<usize>>,
    },
    Pmatrix {
        pattern: String,
        row_parts: Vec<Vec<usize>>,
        col_parts: Vec<Vec<usize>>,
    },
    Boolean {
        u: Vec<String>,
        v: Vec<String>,
    },
}

fn rows_of(m: &BinaryMatrix) -> Vec<String> {
    m.rows().iter().map(ToString::to_string).collect()
}

impl From<&Clustering> for Witness {
    fn from(c: &Clustering) -> Self {
        Witness::Means {
            clusters: c.clusters().parts().to_vec(),
            means: c.means().iter().map(ToString::to_string).collect(),
        }
    }
}

impl From<&Gf2Solution> for Witness {
    fn from(s: &Gf2Solution) -> Self {
        Witness::Gf2 {
            basis: s.basis.iter().map(ToString::to_string).collect(),
            assignment: s.assignment.clone(),
        }
    }
}

impl From<&BoolSolution> for Witness {
    fn from(s: &BoolSolution) -> Self {
        Witness::Boolean { u: rows_of(&s.u), v: rows_of(&s.v) }
    }
}

impl Witness {
    pub fn pmatrix(w: &PMatrixWitness, pattern: &PatternMatrix) -> Self {
        Witness::Pmatrix {
            pattern: format_pattern(pattern),
            row_parts: w.row_parts.parts().to_vec(),
            col_parts: w.col_parts.parts().to_vec(),
        }
    }
}

/// One solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub problem: Problem,
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Edit budget; absent in optimization mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub decision: bool,
    /// Smallest feasible budget, in optimization mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_cost: Option<usize>,
    /// Edits made by the witness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub wall_ms: f64,
    pub nodes: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_round_trip_through_json() {
        let record = ResultRecord {
            problem: Problem::Gf2,
            algorithm: Algorithm::KernelExtend,
            r: Some(1),
            k: None,
            decision: true,
            min_cost: Some(1),
            cost: Some(1),
            witness: Some(Witness::Gf2 { basis: vec!["01".into()], assignment: vec![vec![0], vec![]] }),
            wall_ms: 0.5,
            nodes: 3,
        };
        let line = serde_json::to_string(&record).unwrap();
        assert!(line.contains("\"kernel+extend\""));
        assert!(!line.contains("\"k\""));
        let back: ResultRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, record);
    }
}
