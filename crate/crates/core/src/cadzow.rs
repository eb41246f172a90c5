//! Iterative Hankel low-rank denoising of uniform dynamical samples.
//!
//! Per frequency bin, the transformed sample sequence fills a square Hankel
//! matrix whose clean rank is `m` (bin `j ≠ 0`) or `(m+1)/2` (bin `0`).
//! Noise breaks the rank condition; alternating SVD truncation and
//! anti-diagonal averaging restores it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{dft, FftDirection};
use crate::simulate::{MeasurementSeries, SeriesKind};
use crate::spectrum::{bin_spectra, fixed_rank_rule};

/// Relative change between successive iterates below which the projection
/// loop stops early.
pub const EARLY_EXIT_TOLERANCE: f64 = 1e-12;

/// Default iteration cap for [`denoise_series`].
pub const DEFAULT_MAX_ITERATIONS: usize = 25;

/// A square complex matrix with constant anti-diagonals, tagged with the
/// frequency bin it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    entries: DMatrix<Complex64>,
    source_bin: usize,
}

impl HankelMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn source_bin(&self) -> usize {
        self.source_bin
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// The generating sequence of length `2n−1`, read off the anti-diagonals.
    pub fn sequence(&self) -> Vec<Complex64> {
        let n = self.size();
        (0..2 * n - 1)
            .map(|s| {
                let p = s.min(n - 1);
                self.entries[(p, s - p)]
            })
            .collect()
    }

    /// Exact anti-diagonal constancy.
    pub fn is_exactly_hankel(&self) -> bool {
        let n = self.size();
        (0..n).all(|p| {
            (0..n).all(|q| {
                let s = p + q;
                let rp = s.min(n - 1);
                self.entries[(p, q)] == self.entries[(rp, s - rp)]
            })
        })
    }
}

/// Builds the `(n×n)` Hankel matrix of a sequence of odd length `2n−1`:
/// entry `(p, q)` is `seq[p+q]`.
pub fn hankel_from_sequence(seq: &[Complex64], source_bin: usize) -> Result<HankelMatrix> {
    if seq.is_empty() {
        return Err(Error::EmptyInput);
    }
    if seq.len() % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "Hankel sequence length must be odd, got {}",
            seq.len()
        )));
    }
    let n = (seq.len() + 1) / 2;
    Ok(HankelMatrix {
        entries: DMatrix::from_fn(n, n, |p, q| seq[p + q]),
        source_bin,
    })
}

fn antidiagonal_average(x: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = x.nrows();
    let mut sums = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    let mut counts = vec![0usize; 2 * n - 1];
    for p in 0..n {
        for q in 0..n {
            sums[p + q] += x[(p, q)];
            counts[p + q] += 1;
        }
    }
    sums.iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect()
}

/// One Cadzow step: zero the singular values past `rank`, then average each
/// anti-diagonal. The output is exactly Hankel.
pub fn cadzow_project(
    x: &DMatrix<Complex64>,
    rank: usize,
    source_bin: usize,
) -> Result<HankelMatrix> {
    if x.nrows() != x.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            got: x.ncols(),
        });
    }
    if x.nrows() == 0 {
        return Err(Error::EmptyInput);
    }
    if rank == 0 {
        return Err(Error::InvalidParameter("target rank must be positive".into()));
    }
    let n = x.nrows();
    let truncated = if rank >= n {
        x.clone()
    } else {
        let svd = x.clone().svd(true, true);
        let u = svd.u.as_ref().expect("svd computed with vectors");
        let vt = svd.v_t.as_ref().expect("svd computed with vectors");
        let mut acc = DMatrix::zeros(n, n);
        for i in 0..rank {
            let s = svd.singular_values[i];
            if s == 0.0 {
                break;
            }
            let ui = u.column(i);
            let vi = vt.row(i);
            for p in 0..n {
                for q in 0..n {
                    acc[(p, q)] += ui[p] * s * vi[q];
                }
            }
        }
        acc
    };
    let seq = antidiagonal_average(&truncated);
    hankel_from_sequence(&seq, source_bin)
}

/// Denoises a uniform measurement series with the per-bin rank rule of the
/// algorithm (`(m+1)/2` for bin 0, `m` otherwise).
pub fn denoise_series(
    series: &MeasurementSeries,
    step: usize,
    max_iterations: usize,
) -> Result<MeasurementSeries> {
    denoise_series_with_rank(series, step, max_iterations, None)
}

/// Denoises with an explicit uniform rank for every bin (for rank sweeps);
/// `None` applies the per-bin rule.
pub fn denoise_series_with_rank(
    series: &MeasurementSeries,
    step: usize,
    max_iterations: usize,
    rank_override: Option<usize>,
) -> Result<MeasurementSeries> {
    if max_iterations == 0 {
        return Err(Error::InvalidParameter(
            "max_iterations must be at least 1".into(),
        ));
    }
    if let Some(r) = rank_override {
        if r == 0 {
            return Err(Error::InvalidParameter("rank override must be positive".into()));
        }
    }

    // The square Hankel form needs an even number of level transitions;
    // an odd L drops the last level.
    let mut working = series.clone();
    if series.levels() % 2 != 0 {
        log::warn!(
            "denoise_series: dropping the last time level to make L = {} even",
            series.levels()
        );
        let cols = series.values().ncols() - 1;
        let values = series.values().columns(0, cols).into_owned();
        working = MeasurementSeries::new(values, series.pattern().clone(), series.kind())?;
    }

    let spectra = bin_spectra(&working, step)?;
    let j_bins = spectra.bins();
    let cols = spectra.columns();

    let mut denoised_rows: Vec<Vec<Complex64>> = Vec::with_capacity(j_bins);
    for j in 0..j_bins {
        let rank = rank_override.unwrap_or_else(|| fixed_rank_rule(step, j));
        let seq = spectra.row(j);
        let mut x = hankel_from_sequence(&seq, j)?.into_entries();
        for _ in 0..max_iterations {
            let next = cadzow_project(&x, rank, j)?.into_entries();
            let change = (&next - &x).norm();
            let scale = x.norm();
            x = next;
            if change <= EARLY_EXIT_TOLERANCE * scale {
                break;
            }
        }
        denoised_rows.push(
            HankelMatrix {
                entries: x,
                source_bin: j,
            }
            .sequence(),
        );
    }

    // Bins j and J−j of a real series carry conjugate data; averaging them
    // as conjugates makes the inverse transform real.
    for j in 1..=(j_bins - 1) / 2 {
        let jj = j_bins - j;
        for l in 0..cols {
            let avg = 0.5 * (denoised_rows[j][l] + denoised_rows[jj][l].conj());
            denoised_rows[j][l] = avg;
            denoised_rows[jj][l] = avg.conj();
        }
    }
    for l in 0..cols {
        denoised_rows[0][l] = Complex64::new(denoised_rows[0][l].re, 0.0);
    }

    let mut values = DMatrix::zeros(j_bins, cols);
    for c in 0..cols {
        let col: Vec<Complex64> = (0..j_bins).map(|j| denoised_rows[j][c]).collect();
        let back = dft(&col, FftDirection::Inverse)?;
        for (r, v) in back.values().iter().enumerate() {
            values[(r, c)] = v.re;
        }
    }
    MeasurementSeries::new(values, working.pattern().clone(), SeriesKind::Denoised)
}
