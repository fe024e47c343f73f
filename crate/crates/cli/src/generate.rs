//! Planted instance files.

use binapprox::planted::{plant, PlantKind};
use binapprox::pmatrix::PatternMatrix;

use crate::error::{CliError, CliResult};
use crate::instance::{format_pattern, InstanceFile};
use crate::record::Problem;

#[derive(Debug, Clone)]
pub struct GenerateRequest {
    pub problem: Problem,
    pub rows: usize,
    pub cols: usize,
    pub r: Option<usize>,
    pub pattern: Option<PatternMatrix>,
    pub flips: usize,
    pub seed: u64,
}

pub fn plant_kind(problem: Problem, r: Option<usize>, pattern: Option<&PatternMatrix>) -> CliResult<PlantKind> {
    let rank = || r.ok_or_else(|| CliError::Usage(format!("{problem:?} needs r")));
    Ok(match problem {
        Problem::Means => PlantKind::Means { r: rank()? },
        Problem::Gf2 => PlantKind::Gf2 { r: rank()? },
        Problem::Boolean => PlantKind::Boolean { r: rank()? },
        Problem::Pmatrix => {
            let p = pattern.ok_or_else(|| CliError::Usage("pmatrix needs a pattern".into()))?;
            PlantKind::Pattern(p.clone())
        }
    })
}

/// Draws the planted matrix and records the plant as metadata, so the file
/// is a yes-instance at `k` equal to the number of flips.
pub fn generate(req: &GenerateRequest) -> CliResult<InstanceFile> {
    let kind = plant_kind(req.problem, req.r, req.pattern.as_ref())?;
    let planted = plant(&kind, req.rows, req.cols, req.flips, req.seed)?;
    let flips: Vec<String> = planted.flips.iter().map(|(i, j)| format!("{i}:{j}")).collect();
    let mut file = InstanceFile::new(planted.noisy)
        .with("problem", req.problem.tag())
        .with("k", req.flips)
        .with("seed", req.seed)
        .with("flips", flips.join(","));
    if let Some(p) = &req.pattern {
        file = file.with("pattern", format_pattern(p));
    }
    if let (Some(r), false) = (req.r, req.problem == Problem::Pmatrix) {
        file = file.with("r", r);
    }
    Ok(file)
}
