//! Seeded instance generators.
//!
//! Every generator draws from a ChaCha8 stream seeded with the given seed, in
//! row-major order, so the same arguments always produce the same file.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::io::{InstanceFile, Provenance};
use crate::model::{format_rational, ratio, Cost, Instance};

/// Largest cost drawn by the uniform generator.
pub const UNIFORM_MAX: i64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error("unknown generator kind {0:?} (expected uniform, bivalued, ido or identical)")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Independent integer costs in `[0, 1000]`.
    Uniform,
    /// Each entry is 1 with probability `p` and `eps` otherwise.
    Bivalued,
    /// All agents rank the items in the same (random) order.
    Ido,
    /// One uniform row shared by every agent.
    Identical,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::Uniform,
        GeneratorKind::Bivalued,
        GeneratorKind::Ido,
        GeneratorKind::Identical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Uniform => "uniform",
            GeneratorKind::Bivalued => "bivalued",
            GeneratorKind::Ido => "ido",
            GeneratorKind::Identical => "identical",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GenerateError::UnknownKind(s.to_string()))
    }
}

/// Parameters of the bi-valued generator; ignored by the other kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    /// The small cost, in `[0, 1)`.
    pub eps: Cost,
    /// Probability that an entry is the large cost 1, in `[0, 1]`.
    pub p: Cost,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            eps: ratio(1, 2),
            p: ratio(1, 2),
        }
    }
}

/// Draws `true` with exact rational probability `p` (numerator and
/// denominator must fit in a `u64`).
pub fn bernoulli<R: Rng>(rng: &mut R, p: &Cost) -> bool {
    let (num, den) = small_fraction(p).expect("probability was validated");
    rng.gen_range(0..den) < num
}

fn small_fraction(p: &Cost) -> Option<(u64, u64)> {
    Some((p.numer().to_u64()?, p.denom().to_u64()?))
}

fn check_params(kind: GeneratorKind, n: usize, params: &GenParams) -> Result<(), GenerateError> {
    if n == 0 {
        return Err(GenerateError::BadParams("n must be at least 1".into()));
    }
    if kind == GeneratorKind::Bivalued {
        if params.eps < Cost::zero() || params.eps >= Cost::one() {
            return Err(GenerateError::BadParams(format!(
                "eps = {} is outside [0, 1)",
                format_rational(&params.eps)
            )));
        }
        if params.p < Cost::zero() || params.p > Cost::one() || small_fraction(&params.p).is_none()
        {
            return Err(GenerateError::BadParams(format!(
                "p = {} is not a probability with 64-bit terms",
                format_rational(&params.p)
            )));
        }
    }
    Ok(())
}

pub fn generate_instance(
    kind: GeneratorKind,
    n: usize,
    m: usize,
    seed: u64,
    params: &GenParams,
) -> Result<InstanceFile, GenerateError> {
    check_params(kind, n, params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = match kind {
        GeneratorKind::Uniform => (0..n).map(|_| uniform_row(&mut rng, m)).collect(),
        GeneratorKind::Identical => vec![uniform_row(&mut rng, m); n],
        GeneratorKind::Bivalued => (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        if bernoulli(&mut rng, &params.p) {
                            Cost::one()
                        } else {
                            params.eps.clone()
                        }
                    })
                    .collect()
            })
            .collect(),
        GeneratorKind::Ido => ido_rows(&mut rng, n, m),
    };
    let mut recorded = BTreeMap::new();
    if kind == GeneratorKind::Bivalued {
        recorded.insert("eps".to_string(), format_rational(&params.eps));
        recorded.insert("p".to_string(), format_rational(&params.p));
    }
    Ok(InstanceFile {
        instance: Instance::new(rows).expect("generated rows are rectangular and nonnegative"),
        provenance: Some(Provenance {
            kind: kind.name().to_string(),
            seed,
            params: recorded,
        }),
    })
}

fn uniform_row<R: Rng>(rng: &mut R, m: usize) -> Vec<Cost> {
    (0..m)
        .map(|_| Cost::from_integer(BigInt::from(rng.gen_range(0..=UNIFORM_MAX))))
        .collect()
}

/// A shared random ranking; each agent gets strictly decreasing integer
/// costs along it, built from her own random gaps, so ties never reorder it.
fn ido_rows<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<Vec<Cost>> {
    let mut ranking: Vec<usize> = (0..m).collect();
    ranking.shuffle(rng);
    (0..n)
        .map(|_| {
            let gaps: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=100)).collect();
            let mut row = vec![Cost::zero(); m];
            let mut acc = 0i64;
            for rank in (0..m).rev() {
                acc += gaps[rank];
                row[ranking[rank]] = Cost::from_integer(BigInt::from(acc));
            }
            row
        })
        .collect()
}
