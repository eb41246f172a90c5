//! Trajectory generation, additive Gaussian noise, and block smoothing.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::sampling::{subsample, SamplingPattern};
use crate::signal::{EvolutionOperator, Signal};

/// Zero-mean i.i.d. Gaussian noise with standard deviation `sigma`,
/// reproducible from `seed` within one build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    sigma: f64,
    seed: u64,
}

impl NoiseModel {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise standard deviation must be nonnegative, got {sigma}"
            )));
        }
        Ok(Self { sigma, seed })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Whether a series holds clean, noisy, or denoised values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Clean,
    Noisy,
    Denoised,
}

/// Sampled values over time: rows are the retained spatial indices of the
/// pattern, columns are time levels `0…L`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSeries {
    values: DMatrix<f64>,
    pattern: SamplingPattern,
    kind: SeriesKind,
}

impl MeasurementSeries {
    pub fn new(values: DMatrix<f64>, pattern: SamplingPattern, kind: SeriesKind) -> Result<Self> {
        if values.ncols() == 0 {
            return Err(Error::EmptyInput);
        }
        if values.nrows() != pattern.len() {
            return Err(Error::DimensionMismatch {
                expected: pattern.len(),
                got: values.nrows(),
            });
        }
        Ok(Self {
            values,
            pattern,
            kind,
        })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn pattern(&self) -> &SamplingPattern {
        &self.pattern
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    /// The highest time level `L` (columns span `0…L`).
    pub fn levels(&self) -> usize {
        self.values.ncols() - 1
    }
}

/// Evolves `f` under `op` for `levels` steps; column `n` of the result is
/// `Aⁿf`, so the matrix is `d × (levels+1)`.
pub fn evolve(op: &EvolutionOperator, f: &Signal, levels: usize) -> Result<DMatrix<f64>> {
    if op.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: f.dim(),
        });
    }
    let d = f.dim();
    let mut out = DMatrix::zeros(d, levels + 1);
    let mut x = f.as_vector().clone();
    out.set_column(0, &x);
    for n in 1..=levels {
        x = op.apply(&x)?;
        out.set_column(n, &x);
    }
    Ok(out)
}

/// Adds i.i.d. `N(0, σ²)` entries to a matrix, deterministically in the seed.
pub fn add_noise(x: &DMatrix<f64>, noise: &NoiseModel) -> DMatrix<f64> {
    if noise.sigma == 0.0 {
        return x.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut out = x.clone();
    for v in out.iter_mut() {
        let g: f64 = StandardNormal.sample(&mut rng);
        *v += noise.sigma * g;
    }
    out
}

/// How [`block_aggregate`] combines the columns of a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregateMode {
    Sum,
    #[default]
    Mean,
}

/// Aggregates consecutive groups of `block` columns (time smoothing);
/// a trailing partial block is dropped.
pub fn block_aggregate(x: &DMatrix<f64>, block: usize, mode: AggregateMode) -> Result<DMatrix<f64>> {
    if block == 0 {
        return Err(Error::InvalidParameter("block size must be positive".into()));
    }
    if x.ncols() < block {
        return Err(Error::InvalidParameter(format!(
            "matrix has {} columns, fewer than block size {block}",
            x.ncols()
        )));
    }
    let groups = x.ncols() / block;
    let mut out = DMatrix::zeros(x.nrows(), groups);
    for g in 0..groups {
        for c in 0..block {
            for r in 0..x.nrows() {
                out[(r, g)] += x[(r, g * block + c)];
            }
        }
    }
    if mode == AggregateMode::Mean {
        out /= block as f64;
    }
    Ok(out)
}

/// Restricts every column of a full `d × (L+1)` trajectory to the pattern,
/// producing a measurement series.
pub fn sample_series(
    x: &DMatrix<f64>,
    pattern: &SamplingPattern,
    kind: SeriesKind,
) -> Result<MeasurementSeries> {
    if x.nrows() != pattern.dim() {
        return Err(Error::DimensionMismatch {
            expected: pattern.dim(),
            got: x.nrows(),
        });
    }
    let mut values = DMatrix::zeros(pattern.len(), x.ncols());
    for c in 0..x.ncols() {
        let col: Vec<f64> = x.column(c).iter().copied().collect();
        let sub = subsample(&col, pattern)?;
        for (r, v) in sub.into_iter().enumerate() {
            values[(r, c)] = v;
        }
    }
    MeasurementSeries::new(values, pattern.clone(), kind)
}
