//! Solver dispatch and the solve/verify reports behind the command line.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::bivalued::{detect_bivalued, solve_bi_general, solve_bi_three};
use crate::general_n::{self, solve_general_n};
use crate::io::{self, AllocationFile, FormatError, InstanceFile, Provenance};
use crate::model::{
    divide_and_choose, format_rational, int, min_efx_alpha, trivial_tail_allocation, Allocation,
    Alpha, Cost, Instance, Witness,
};
use crate::three_agents::solve_three;

/// Exit status for a run within its bound.
pub const EXIT_OK: i32 = 0;
/// Exit status for a bound violation.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status for usage, parse and input errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("algorithm {algorithm} does not apply: {reason}")]
    InapplicableAlgorithm {
        algorithm: Algorithm,
        reason: String,
    },
    #[error("allocation does not match the instance: {0}")]
    MismatchedFiles(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("unknown algorithm {0:?} (expected auto, three, general, bi3, bin or trivial)")]
    UnknownAlgorithm(String),
}

/// The algorithm selector accepted by `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Auto,
    Three,
    General,
    Bi3,
    Bin,
    Trivial,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Three => "three",
            Algorithm::General => "general",
            Algorithm::Bi3 => "bi3",
            Algorithm::Bin => "bin",
            Algorithm::Trivial => "trivial",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Algorithm::Auto,
            Algorithm::Three,
            Algorithm::General,
            Algorithm::Bi3,
            Algorithm::Bin,
            Algorithm::Trivial,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| RunError::UnknownAlgorithm(s.to_string()))
    }
}

/// What `auto` resolves to for an instance.
pub fn auto_algorithm(inst: &Instance) -> Algorithm {
    let bi = detect_bivalued(inst).is_some();
    match inst.n() {
        3 if bi => Algorithm::Bi3,
        3 => Algorithm::Three,
        n if n >= 4 && bi => Algorithm::Bin,
        n if n >= 4 => Algorithm::General,
        // One or two agents: divide and choose, reported as the trivial case.
        _ => Algorithm::Trivial,
    }
}

/// A solved instance with the algorithm that ran and its advertised bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved {
    pub algorithm: &'static str,
    pub allocation: Allocation,
    pub bound: Cost,
}

fn inapplicable(algorithm: Algorithm, reason: impl ToString) -> RunError {
    RunError::InapplicableAlgorithm {
        algorithm,
        reason: reason.to_string(),
    }
}

fn count(v: usize) -> Cost {
    Cost::from_integer(BigInt::from(v))
}

pub fn solve_with(inst: &Instance, algorithm: Algorithm) -> Result<Solved, RunError> {
    let algorithm = match algorithm {
        Algorithm::Auto => auto_algorithm(inst),
        other => other,
    };
    let (n, m) = (inst.n(), inst.m());
    let solved = |name, allocation, bound| Solved {
        algorithm: name,
        allocation,
        bound,
    };
    match algorithm {
        Algorithm::Three => {
            let alloc = solve_three(inst).map_err(|e| inapplicable(algorithm, e))?;
            Ok(solved("three", alloc, int(5)))
        }
        Algorithm::General => {
            let alloc = solve_general_n(inst).map_err(|e| inapplicable(algorithm, e))?;
            Ok(solved("general", alloc, general_n::bound(n)))
        }
        Algorithm::Bi3 => {
            let alloc = solve_bi_three(inst).map_err(|e| inapplicable(algorithm, e))?;
            Ok(solved("bi3", alloc, int(1)))
        }
        Algorithm::Bin => {
            let alloc = solve_bi_general(inst).map_err(|e| inapplicable(algorithm, e))?;
            Ok(solved("bin", alloc, count(n - 1)))
        }
        Algorithm::Trivial if n == 1 => Ok(solved(
            "single-agent",
            Allocation::new(vec![inst.items().collect()]),
            Cost::zero(),
        )),
        Algorithm::Trivial if n == 2 => {
            let items: Vec<usize> = inst.items().collect();
            let (cut, chosen) = divide_and_choose(inst, 0, 1, &items);
            Ok(solved(
                "divide-and-choose",
                Allocation::new(vec![cut, chosen]),
                int(1),
            ))
        }
        Algorithm::Trivial => {
            let alloc = trivial_tail_allocation(inst, 0).map_err(|e| inapplicable(algorithm, e))?;
            Ok(solved("trivial", alloc, count(m - n)))
        }
        Algorithm::Auto => unreachable!("auto was resolved above"),
    }
}

/// The outcome of a solve or verify run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub algorithm: String,
    pub alpha: Alpha,
    /// The advertised factor for `solve`, the requested one for `verify`.
    pub bound: Cost,
    pub witness: Option<Witness>,
    pub partial: bool,
    pub wall_time: Duration,
    pub provenance: Option<Provenance>,
}

impl RunReport {
    pub fn within_bound(&self) -> bool {
        self.alpha.within(&self.bound)
    }

    pub fn exit_code(&self) -> i32 {
        if self.within_bound() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        }
    }

    /// The report as `key: value` lines. Wall time is left out so identical
    /// runs render identically; see [`RunReport::wall_time`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k}: {v}\n"));
        line("algorithm", self.algorithm.clone());
        line("alpha", self.alpha.to_string());
        line("bound", format_rational(&self.bound));
        line(
            "witness",
            match self.witness {
                Some(w) => format!(
                    "agent {} against agent {} without item {}",
                    w.envier, w.envied, w.item
                ),
                None => "none".to_string(),
            },
        );
        line("partial", self.partial.to_string());
        if let Some(p) = &self.provenance {
            let params: Vec<String> = p.params.iter().map(|(k, v)| format!(" {k}={v}")).collect();
            line(
                "provenance",
                format!("{} seed={}{}", p.kind, p.seed, params.concat()),
            );
        }
        line(
            "status",
            if self.within_bound() {
                "ok"
            } else {
                "VIOLATION"
            }
            .to_string(),
        );
        out
    }
}

fn report(
    algorithm: String,
    inst: &Instance,
    alloc: &Allocation,
    bound: Cost,
    started: Instant,
    provenance: Option<Provenance>,
) -> Result<RunReport, RunError> {
    let verdict =
        min_efx_alpha(inst, alloc).map_err(|e| RunError::MismatchedFiles(e.to_string()))?;
    Ok(RunReport {
        algorithm,
        alpha: verdict.alpha,
        bound,
        witness: verdict.witness,
        partial: !alloc.is_complete(inst.m()),
        wall_time: started.elapsed(),
        provenance,
    })
}

/// Solves an already loaded instance and verifies the result.
pub fn solve_file(
    file: &InstanceFile,
    algorithm: Algorithm,
) -> Result<(Allocation, RunReport), RunError> {
    let started = Instant::now();
    let solved = solve_with(&file.instance, algorithm)?;
    let rep = report(
        solved.algorithm.to_string(),
        &file.instance,
        &solved.allocation,
        solved.bound,
        started,
        file.provenance.clone(),
    )?;
    Ok((solved.allocation, rep))
}

/// Reads an instance, solves it, writes the allocation file to `output` (if
/// given) and returns the report.
pub fn run_solve(
    algorithm: Algorithm,
    input: &Path,
    output: Option<&Path>,
) -> Result<RunReport, RunError> {
    let file = io::load_instance(input)?;
    let (alloc, rep) = solve_file(&file, algorithm)?;
    if let Some(out) = output {
        io::write_text(
            out,
            &io::emit_allocation(&AllocationFile::new(&alloc, file.instance.m())),
        )?;
    }
    Ok(rep)
}

/// Verifies an allocation against an instance at the requested factor.
pub fn verify_file(
    file: &InstanceFile,
    alloc: &AllocationFile,
    alpha: &Cost,
) -> Result<RunReport, RunError> {
    let started = Instant::now();
    let allocation = alloc.allocation();
    let mut rep = report(
        "verify".to_string(),
        &file.instance,
        &allocation,
        alpha.clone(),
        started,
        file.provenance.clone(),
    )?;
    rep.partial |= alloc.partial;
    Ok(rep)
}

pub fn run_verify(instance: &Path, allocation: &Path, alpha: &Cost) -> Result<RunReport, RunError> {
    let file = io::load_instance(instance)?;
    let alloc = io::load_allocation(allocation)?;
    verify_file(&file, &alloc, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_instance;
    use crate::model::ratio;

    fn file(rows: &[&[i64]]) -> InstanceFile {
        InstanceFile::new(Instance::from_integers(rows).unwrap())
    }

    #[test]
    fn auto_dispatch() {
        let bi3 = Instance::from_integers(&[[1, 3, 3], [3, 1, 3], [3, 3, 1]]).unwrap();
        assert_eq!(auto_algorithm(&bi3), Algorithm::Bi3);
        let three = Instance::from_integers(&[[1, 2, 3], [1, 2, 3], [1, 2, 4]]).unwrap();
        assert_eq!(auto_algorithm(&three), Algorithm::Three);
        let four = Instance::from_integers(&[[1, 2, 3]; 4]).unwrap();
        assert_eq!(auto_algorithm(&four), Algorithm::General);
        let two = Instance::from_integers(&[[1, 2], [1, 2]]).unwrap();
        assert_eq!(auto_algorithm(&two), Algorithm::Trivial);
    }

    #[test]
    fn bivalued_three_has_bound_one() {
        let (_, rep) = solve_file(
            &file(&[&[1, 3, 3, 1], &[3, 1, 3, 3], &[3, 3, 1, 1]]),
            Algorithm::Auto,
        )
        .unwrap();
        assert_eq!(rep.algorithm, "bi3");
        assert_eq!(rep.bound, int(1));
        assert_eq!(rep.exit_code(), EXIT_OK);
    }

    #[test]
    fn three_rejects_four_agents() {
        let err = solve_file(
            &file(&[&[1, 2], &[1, 2], &[1, 2], &[1, 2]]),
            Algorithm::Three,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            RunError::InapplicableAlgorithm {
                algorithm: Algorithm::Three,
                ..
            }
        ));
    }

    #[test]
    fn two_agents_divide_and_choose() {
        let (alloc, rep) =
            solve_file(&file(&[&[5, 1, 1, 3], &[2, 2, 2, 2]]), Algorithm::Auto).unwrap();
        assert_eq!(rep.algorithm, "divide-and-choose");
        assert!(alloc.is_complete(4));
        assert!(rep.within_bound());
    }

    #[test]
    fn verify_reports_violations() {
        // Agent 0 keeps 3 after dropping item 1 and sees 2 in the other bundle.
        let inst = file(&[&[3, 1, 2], &[1, 1, 1]]);
        let alloc = AllocationFile::new(&Allocation::new(vec![vec![0, 1], vec![2]]), 3);
        let rep = verify_file(&inst, &alloc, &int(1)).unwrap();
        assert_eq!(rep.alpha, Alpha::Finite(ratio(3, 2)));
        assert_eq!(rep.exit_code(), EXIT_VIOLATION);
        assert!(rep
            .render()
            .contains("witness: agent 0 against agent 1 without item 1"));
    }

    #[test]
    fn verify_partial_and_mismatched() {
        let inst = parse_instance(
            r#"{"version": 1, "n": 2, "m": 2, "costs": [["1", "1"], ["1", "1"]]}"#,
            "m",
        )
        .unwrap();
        let partial = AllocationFile::new(&Allocation::new(vec![vec![0], vec![]]), 2);
        let rep = verify_file(&inst, &partial, &Cost::zero()).unwrap();
        assert!(rep.partial && rep.within_bound());
        let wrong = AllocationFile::new(&Allocation::new(vec![vec![0, 5], vec![]]), 2);
        assert!(matches!(
            verify_file(&inst, &wrong, &int(1)),
            Err(RunError::MismatchedFiles(_))
        ));
    }
}
