//! Planted instances: a structured matrix plus exactly `k` distinct random
//! flips, so the clean matrix certifies feasibility at budget `k`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{boolean_product, gf2_product};
use crate::pmatrix::PatternMatrix;
use crate::{BinaryMatrix, BitVector, Error, Result};

/// Which structure the clean matrix carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlantKind {
    /// At most `r` distinct columns.
    Means { r: usize },
    /// GF(2)-rank at most `r`.
    Gf2 { r: usize },
    /// Boolean rank at most `r`.
    Boolean { r: usize },
    /// Realizes the given pattern.
    Pattern(PatternMatrix),
}

#[derive(Clone, Debug)]
pub struct Planted {
    pub clean: BinaryMatrix,
    pub noisy: BinaryMatrix,
    pub flips: Vec<(usize, usize)>,
}

/// Draws a clean matrix of the requested kind and flips `k` distinct
/// entries. Deterministic in `seed`.
pub fn plant(kind: &PlantKind, m: usize, n: usize, k: usize, seed: u64) -> Result<Planted> {
    if m == 0 || n == 0 {
        return Err(Error::usage("dimensions must be positive"));
    }
    if k > m * n {
        return Err(Error::usage(format!("cannot flip {k} of {} entries", m * n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clean = match kind {
        PlantKind::Means { r } => {
            if *r == 0 {
                return Err(Error::usage("r must be positive"));
            }
            let means: Vec<BitVector> = (0..*r).map(|_| random_vector(&mut rng, m)).collect();
            let cols: Vec<BitVector> = (0..n).map(|_| means[rng.random_range(0..*r)].clone()).collect();
            BinaryMatrix::from_columns(m, &cols)?
        }
        PlantKind::Gf2 { r } => {
            let (u, v) = factors(&mut rng, m, n, *r);
            gf2_product(&u, &v)?
        }
        PlantKind::Boolean { r } => {
            let (u, v) = factors(&mut rng, m, n, *r);
            boolean_product(&u, &v)?
        }
        PlantKind::Pattern(pattern) => {
            let (p, q) = (pattern.p(), pattern.q());
            if p > m || q > n {
                return Err(Error::usage(format!("a {p}x{q} pattern needs at least that many rows and columns")));
            }
            let rows = surjective_labels(&mut rng, m, p);
            let cols = surjective_labels(&mut rng, n, q);
            BinaryMatrix::from_fn(m, n, |i, j| pattern.matrix().get(rows[i], cols[j]))
        }
    };
    let mut noisy = clean.clone();
    let flips: Vec<(usize, usize)> = sample(&mut rng, m * n, k).into_iter().map(|e| (e / n, e % n)).collect();
    for &(i, j) in &flips {
        noisy.flip(i, j);
    }
    Ok(Planted { clean, noisy, flips })
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> BitVector {
    BitVector::from_fn(len, |_| rng.random_bool(0.5))
}

fn factors(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> (BinaryMatrix, BinaryMatrix) {
    let u = BinaryMatrix::from_fn(m, r, |_, _| rng.random_bool(0.5));
    let v = BinaryMatrix::from_fn(r, n, |_, _| rng.random_bool(0.5));
    (u, v)
}

/// Labels in `0..parts` for `len` items, each label used at least once.
fn surjective_labels(rng: &mut ChaCha8Rng, len: usize, parts: usize) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..len).map(|i| if i < parts { i } else { rng.random_range(0..parts) }).collect();
    for i in (1..len).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    labels
}
