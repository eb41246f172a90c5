//! Spatial sampling patterns, sub-sampling, and recoverability checking.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::signal::EvolutionOperator;

/// Relative singular-value threshold below which the stacked observation
/// matrix counts as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A subset Ω of spatial indices `{0, …, d−1}`, optionally a uniform grid
/// `{0, m, 2m, …, d−m}` recorded through `uniform_step`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingPattern {
    indices: Vec<usize>,
    dim: usize,
    uniform_step: Option<usize>,
}

impl SamplingPattern {
    /// A pattern from explicit 0-based indices (strictly increasing).
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidPattern("empty index set".into()));
        }
        Self::validated(indices, dim, None)
    }

    fn validated(indices: Vec<usize>, dim: usize, uniform_step: Option<usize>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPattern("ambient dimension is zero".into()));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidPattern(format!(
                    "indices not strictly increasing at {}, {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(Error::InvalidPattern(format!(
                    "index {last} out of range for dimension {dim}"
                )));
            }
        }
        Ok(Self {
            indices,
            dim,
            uniform_step,
        })
    }

    /// The empty pattern. Only meaningful for the recoverability checker,
    /// which reports it as non-recoverable.
    pub fn empty(dim: usize) -> Self {
        Self {
            indices: Vec::new(),
            dim,
            uniform_step: None,
        }
    }

    /// The uniform pattern `{0, m, 2m, …, d−m}`; `m` must divide `d`.
    pub fn uniform(dim: usize, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidPattern("uniform step is zero".into()));
        }
        if dim == 0 || dim % step != 0 {
            return Err(Error::InvalidPattern(format!(
                "step {step} does not divide dimension {dim}"
            )));
        }
        let indices = (0..dim).step_by(step).collect();
        Self::validated(indices, dim, Some(step))
    }

    /// All indices `{0, …, d−1}`.
    pub fn full(dim: usize) -> Result<Self> {
        Self::validated((0..dim).collect(), dim, Some(1))
    }

    /// The union of this pattern with extra indices. The result loses the
    /// uniform tag unless the extras were already present.
    pub fn with_extra(&self, extra: &[usize]) -> Result<Self> {
        let mut indices = self.indices.clone();
        for &e in extra {
            if e >= self.dim {
                return Err(Error::InvalidPattern(format!(
                    "extra index {e} out of range for dimension {}",
                    self.dim
                )));
            }
            if !indices.contains(&e) {
                indices.push(e);
            }
        }
        indices.sort_unstable();
        let uniform_step = if indices == self.indices {
            self.uniform_step
        } else {
            None
        };
        Self::validated(indices, self.dim, uniform_step)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn uniform_step(&self) -> Option<usize> {
        self.uniform_step
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Restricts a vector to the pattern's indices: `output(i) = x(indices(i))`.
pub fn subsample(x: &[f64], pattern: &SamplingPattern) -> Result<Vec<f64>> {
    if x.len() != pattern.dim() {
        return Err(Error::DimensionMismatch {
            expected: pattern.dim(),
            got: x.len(),
        });
    }
    Ok(pattern.indices().iter().map(|&i| x[i]).collect())
}

/// Outcome of [`check_recoverability`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recoverability {
    pub recoverable: bool,
    /// Smallest `L` for which the stack of `S_Ω A^i`, `i = 0…L`, already has
    /// full column rank. Present only when recoverable.
    pub min_levels: Option<usize>,
}

/// Whether a signal is identifiable from the samples `{S_Ω A^i f}`: the
/// stack of `S_Ω A^i` for `i = 0…d−1` must have full column rank `d`
/// (singular values above `1e−10·σ_max`).
pub fn check_recoverability(
    op: &EvolutionOperator,
    pattern: &SamplingPattern,
) -> Result<Recoverability> {
    let d = op.dim();
    if pattern.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: pattern.dim(),
        });
    }
    if pattern.is_empty() {
        return Ok(Recoverability {
            recoverable: false,
            min_levels: None,
        });
    }

    // Rows of S_Ω A^i are (Aᵀ)^i e_ω, advanced one level at a time.
    let mut rows: Vec<DVector<f64>> = pattern
        .indices()
        .iter()
        .map(|&w| {
            let mut e = DVector::zeros(d);
            e[w] = 1.0;
            e
        })
        .collect();

    let mut stack: Vec<DVector<f64>> = Vec::with_capacity(d * pattern.len());
    for level in 0..d {
        stack.extend(rows.iter().cloned());
        let m = DMatrix::from_fn(stack.len(), d, |r, c| stack[r][c]);
        let svals = m.singular_values();
        let smax = svals.max();
        let rank = svals.iter().filter(|&&s| s > RANK_TOLERANCE * smax).count();
        if rank == d {
            return Ok(Recoverability {
                recoverable: true,
                min_levels: Some(level),
            });
        }
        if level + 1 < d {
            for r in rows.iter_mut() {
                *r = op.apply_adjoint(r)?;
            }
        }
    }
    Ok(Recoverability {
        recoverable: false,
        min_levels: None,
    })
}
