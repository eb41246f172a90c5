//! Signals, real symmetric filters, and the evolution operator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{dft, dft_real, FftDirection};

/// A length-`d` real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: DVector<f64>,
}

impl Signal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            values: DVector::from_vec(values),
        })
    }

    pub fn from_vector(values: DVector<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        self.values.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.norm()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: &self.values * factor,
        }
    }
}

/// A real filter with `taps(k) = taps((d−k) mod d)`, defining a symmetric
/// circulant operator. Its forward transform is real.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymmetricFilter {
    taps: Vec<f64>,
}

impl RealSymmetricFilter {
    /// Builds a filter from taps that are already exactly symmetric.
    pub fn new(taps: Vec<f64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::EmptyInput);
        }
        let d = taps.len();
        for k in 0..d {
            if taps[k] != taps[(d - k) % d] {
                return Err(Error::InvalidParameter(format!(
                    "taps not symmetric at index {k}: {} vs {}",
                    taps[k],
                    taps[(d - k) % d]
                )));
            }
        }
        Ok(Self { taps })
    }

    /// Builds a filter by averaging the `k` and `d−k` taps, making the
    /// symmetry exact.
    pub fn symmetrized(mut taps: Vec<f64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::EmptyInput);
        }
        let d = taps.len();
        for k in 1..=(d - 1) / 2 {
            let avg = 0.5 * (taps[k] + taps[d - k]);
            taps[k] = avg;
            taps[d - k] = avg;
        }
        Ok(Self { taps })
    }

    /// Builds the filter whose transform takes the given values on the folded
    /// frequencies `0, 1, …, ⌊d/2⌋` (and mirrors them onto `d−k`).
    pub fn from_folded_spectrum(folded: &[f64], dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyInput);
        }
        let folds = dim / 2 + 1;
        if folded.len() != folds {
            return Err(Error::DimensionMismatch {
                expected: folds,
                got: folded.len(),
            });
        }
        let spectrum: Vec<Complex64> = (0..dim)
            .map(|k| Complex64::new(folded[k.min(dim - k)], 0.0))
            .collect();
        let taps_c = dft(&spectrum, FftDirection::Inverse)?;
        let taps: Vec<f64> = taps_c.values().iter().map(|v| v.re).collect();
        Self::symmetrized(taps)
    }

    pub fn dim(&self) -> usize {
        self.taps.len()
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// The operator's eigenvalues `â(k)`: the forward transform, which is
    /// real for a symmetric filter. The imaginary residue is discarded.
    pub fn spectrum(&self) -> Vec<f64> {
        let fwd = dft_real(&self.taps, FftDirection::Forward)
            .expect("filter is nonempty by construction");
        fwd.values().iter().map(|v| v.re).collect()
    }
}

/// Circular convolution `(a ∗ f)(k) = Σ_j a(j)·f((k−j) mod d)`, computed
/// through the transform domain.
pub fn circular_convolve(taps: &[f64], signal: &[f64]) -> Result<Vec<f64>> {
    if taps.len() != signal.len() {
        return Err(Error::DimensionMismatch {
            expected: taps.len(),
            got: signal.len(),
        });
    }
    if taps.is_empty() {
        return Err(Error::EmptyInput);
    }
    let a_hat = dft_real(taps, FftDirection::Forward)?;
    let f_hat = dft_real(signal, FftDirection::Forward)?;
    let product: Vec<Complex64> = a_hat
        .values()
        .iter()
        .zip(f_hat.values())
        .map(|(a, f)| a * f)
        .collect();
    let back = dft(&product, FftDirection::Inverse)?;
    Ok(back.values().iter().map(|v| v.re).collect())
}

/// The linear map advancing a signal one time level.
#[derive(Debug, Clone)]
pub enum EvolutionOperator {
    /// Circular convolution with a real symmetric filter; applied via FFT.
    Circulant(RealSymmetricFilter),
    /// An arbitrary square matrix; applied by dense multiplication.
    Dense(DMatrix<f64>),
}

impl EvolutionOperator {
    pub fn circulant(filter: RealSymmetricFilter) -> Self {
        Self::Circulant(filter)
    }

    pub fn dense(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self::Dense(matrix))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Circulant(f) => f.dim(),
            Self::Dense(m) => m.nrows(),
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(match self {
            Self::Circulant(f) => {
                DVector::from_vec(circular_convolve(f.taps(), x.as_slice())?)
            }
            Self::Dense(m) => m * x,
        })
    }

    /// Applies the adjoint. A circulant from a real symmetric filter is
    /// symmetric, so this coincides with `apply` for that variant.
    pub fn apply_adjoint(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        match self {
            Self::Circulant(_) => self.apply(x),
            Self::Dense(m) => {
                if x.len() != self.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim(),
                        got: x.len(),
                    });
                }
                Ok(m.transpose() * x)
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Self::Circulant(_) => true,
            Self::Dense(m) => {
                let scale = m.amax().max(1e-300);
                (0..m.nrows()).all(|i| {
                    (0..i).all(|j| (m[(i, j)] - m[(j, i)]).abs() <= 1e-12 * scale)
                })
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            Self::Circulant(f) => {
                let d = f.dim();
                let taps = f.taps();
                DMatrix::from_fn(d, d, |r, c| taps[(d + r - c) % d])
            }
            Self::Dense(m) => m.clone(),
        }
    }
}
