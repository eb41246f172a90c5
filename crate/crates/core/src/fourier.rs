//! Discrete Fourier transform with a fixed convention.
//!
//! The forward transform is unnormalized, `ẑ(k) = Σ_t z(t)·e^{−2πikt/d}`,
//! and the inverse carries the `1/d` factor, so that a forward-then-inverse
//! round trip is the identity and the eigenvalues of a circulant operator
//! equal the forward transform of its filter.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match direction {
            FftDirection::Forward => p.plan_fft_forward(len),
            FftDirection::Inverse => p.plan_fft_inverse(len),
        }
    })
}

/// Transform direction; the inverse applies the `1/d` normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FftDirection {
    Forward,
    Inverse,
}

/// Result of a [`dft`] call. The values follow the forward-unnormalized
/// convention above; this type is only constructed by `dft`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    values: Vec<Complex64>,
}

impl SpectralVector {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Discrete Fourier transform of a complex sequence.
pub fn dft(x: &[Complex64], direction: FftDirection) -> Result<SpectralVector> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut buf = x.to_vec();
    plan(buf.len(), direction).process(&mut buf);
    if direction == FftDirection::Inverse {
        let scale = 1.0 / buf.len() as f64;
        for v in &mut buf {
            *v *= scale;
        }
    }
    Ok(SpectralVector { values: buf })
}

/// Forward transform of a real sequence.
pub fn dft_real(x: &[f64], direction: FftDirection) -> Result<SpectralVector> {
    let buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft(&buf, direction)
}
