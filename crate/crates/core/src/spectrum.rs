//! Spectrum recovery for unknown symmetric convolution operators from
//! uniformly subsampled dynamical samples, and filter assembly from the
//! recovered spectrum.
//!
//! Uniform subsampling by an odd step `m` folds the `d = J·m` frequencies
//! into `J` bins. Along time, each bin's transformed sample sequence
//! satisfies a linear recurrence whose minimal (annihilating) polynomial has
//! the folded operator eigenvalues as roots: degree `m` for bins `j ≠ 0` and
//! `(m+1)/2` for bin `0`, where folded frequencies collide.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{dft, dft_real, FftDirection};
use crate::signal::RealSymmetricFilter;
use crate::simulate::MeasurementSeries;

/// Default relative residual tolerance for the auto rank mode.
pub const DEFAULT_AUTO_TOL: f64 = 1e-6;

/// Relative imaginary-part tolerance below which a root snaps to the real
/// axis: `|Im| ≤ 1e−8·(1 + |Re|)`.
pub const ROOT_SNAP_TOLERANCE: f64 = 1e-8;

/// Largest subsampling step accepted in fixed-rank mode. Conditioning of the
/// annihilator systems degrades quickly with the step; beyond `m = 5` the
/// recovery is increasingly noise sensitive.
pub const MAX_FIXED_STEP: usize = 15;

/// Per-bin transformed sample sequences: entry `(j, ℓ)` is the `J`-point
/// forward transform of the level-`ℓ` subsampled vector at bin `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinSpectra {
    values: DMatrix<Complex64>,
    step: usize,
}

impl BinSpectra {
    pub fn bins(&self) -> usize {
        self.values.nrows()
    }

    /// Number of time levels, i.e. columns (`L+1`).
    pub fn columns(&self) -> usize {
        self.values.ncols()
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    /// The bin-`j` sequence `(ŷ_ℓ(j))_ℓ`.
    pub fn row(&self, j: usize) -> Vec<Complex64> {
        self.values.row(j).iter().copied().collect()
    }
}

/// Transforms a uniform measurement series into per-bin sequences.
///
/// Requires the series' pattern to be uniform with the given odd step and an
/// odd bin count `J = d/m`.
pub fn bin_spectra(series: &MeasurementSeries, step: usize) -> Result<BinSpectra> {
    let pattern = series.pattern();
    if pattern.uniform_step() != Some(step) {
        return Err(Error::InvalidPattern(format!(
            "series pattern is not uniform with step {step}"
        )));
    }
    let j_bins = pattern.len();
    if step % 2 == 0 || j_bins % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "step m = {step} and bin count J = {j_bins} must both be odd"
        )));
    }
    let cols = series.values().ncols();
    let mut values = DMatrix::zeros(j_bins, cols);
    for c in 0..cols {
        let col: Vec<f64> = series.values().column(c).iter().copied().collect();
        let hat = dft_real(&col, FftDirection::Forward)?;
        for (j, v) in hat.values().iter().enumerate() {
            values[(j, c)] = *v;
        }
    }
    Ok(BinSpectra { values, step })
}

/// Monic annihilating polynomial `x^r + c_{r−1}x^{r−1} + … + c_0` of a bin
/// sequence, with the least-squares misfit of its recurrence.
#[derive(Debug, Clone)]
pub struct AnnihilatorPolynomial {
    coefficients: Vec<Complex64>,
    bin: usize,
    residual: f64,
}

impl AnnihilatorPolynomial {
    /// Coefficients `c_0 … c_{r−1}`; the monic leading term is implicit.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn bin(&self) -> usize {
        self.bin
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Builds a polynomial from explicit coefficients (for tests and tools).
    pub fn from_coefficients(coefficients: Vec<Complex64>, bin: usize, residual: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            coefficients,
            bin,
            residual,
        })
    }

    /// Evaluates the recurrence misfit of this polynomial on a sequence:
    /// `max_k |s_{k+r} + Σ c_ℓ s_{k+ℓ}|` over all full windows.
    pub fn recurrence_residual(&self, seq: &[Complex64]) -> f64 {
        let r = self.degree();
        let mut worst = 0.0f64;
        for k in 0..seq.len().saturating_sub(r) {
            let mut acc = seq[k + r];
            for (l, c) in self.coefficients.iter().enumerate() {
                acc += c * seq[k + l];
            }
            worst = worst.max(acc.norm());
        }
        worst
    }
}

/// How the annihilator degree is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankMode {
    /// Solve for a monic polynomial of exactly this degree.
    Fixed(usize),
    /// Smallest degree whose relative recurrence residual meets `tol`.
    Auto { tol: f64 },
}

fn seq_norm(seq: &[Complex64]) -> f64 {
    seq.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn solve_fixed(seq: &[Complex64], degree: usize, bin: usize) -> Result<AnnihilatorPolynomial> {
    let n = seq.len();
    if degree == 0 {
        return Err(Error::InvalidParameter("annihilator degree must be positive".into()));
    }
    let needed = 2 * degree + 1;
    if n < needed {
        return Err(Error::SequenceTooShort {
            degree,
            needed,
            got: n,
        });
    }
    let windows = n - degree;
    let mut m = DMatrix::zeros(windows, degree);
    let mut rhs = DVector::zeros(windows);
    for k in 0..windows {
        for l in 0..degree {
            m[(k, l)] = seq[k + l];
        }
        rhs[k] = -seq[k + degree];
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let coef = svd
        .solve(&rhs, smax * 1e-13)
        .map_err(|e| Error::DegenerateData(format!("annihilator solve failed: {e}")))?;
    let residual = (&m * &coef - &rhs).norm();
    Ok(AnnihilatorPolynomial {
        coefficients: coef.iter().copied().collect(),
        bin,
        residual,
    })
}

/// Finds the monic annihilating polynomial of a sequence.
pub fn find_annihilator(seq: &[Complex64], mode: RankMode) -> Result<AnnihilatorPolynomial> {
    find_annihilator_for_bin(seq, mode, 0)
}

/// Same as [`find_annihilator`] with the source bin recorded in the result.
pub fn find_annihilator_for_bin(
    seq: &[Complex64],
    mode: RankMode,
    bin: usize,
) -> Result<AnnihilatorPolynomial> {
    let norm = seq_norm(seq);
    if norm < 1e-200 {
        return Err(Error::DegenerateData(format!(
            "bin {bin} sequence is numerically zero"
        )));
    }
    match mode {
        RankMode::Fixed(r) => solve_fixed(seq, r, bin),
        RankMode::Auto { tol } => {
            if !(tol > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "auto tolerance must be positive, got {tol}"
                )));
            }
            let mut best: Option<AnnihilatorPolynomial> = None;
            let mut r = 1usize;
            while 2 * r + 1 <= seq.len() {
                let cand = solve_fixed(seq, r, bin)?;
                if cand.residual <= tol * norm {
                    return Ok(cand);
                }
                if best.as_ref().map_or(true, |b| cand.residual < b.residual) {
                    best = Some(cand);
                }
                r += 1;
            }
            let best = best.ok_or(Error::SequenceTooShort {
                degree: 1,
                needed: 3,
                got: seq.len(),
            })?;
            Err(Error::NoAnnihilator {
                max_degree: (seq.len().saturating_sub(1)) / 2,
                tol,
                best_residual: best.residual,
                best_degree: best.degree(),
            })
        }
    }
}

fn snap_root(root: Complex64) -> Complex64 {
    if root.im.abs() <= ROOT_SNAP_TOLERANCE * (1.0 + root.re.abs()) {
        Complex64::new(root.re, 0.0)
    } else {
        root
    }
}

/// All roots of the monic polynomial, via companion-matrix eigenvalues.
/// Roots within the snap tolerance of the real axis are returned real.
pub fn polynomial_roots(p: &AnnihilatorPolynomial) -> Result<Vec<Complex64>> {
    let r = p.degree();
    if r == 1 {
        return Ok(vec![snap_root(-p.coefficients[0])]);
    }
    let mut companion = DMatrix::<Complex64>::zeros(r, r);
    for i in 1..r {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..r {
        companion[(i, r - 1)] = -p.coefficients[i];
    }
    let eig = companion
        .eigenvalues()
        .ok_or_else(|| Error::DegenerateData("companion eigenvalue iteration did not converge".into()))?;
    Ok(eig.iter().map(|&z| snap_root(z)).collect())
}

/// Recovered operator spectrum: per-bin root sets and their union.
#[derive(Debug, Clone)]
pub struct SpectrumEstimate {
    per_bin_roots: Vec<Vec<Complex64>>,
    union: Vec<Complex64>,
}

impl SpectrumEstimate {
    pub fn per_bin_roots(&self) -> &[Vec<Complex64>] {
        &self.per_bin_roots
    }

    /// Union (multiset) of all per-bin roots.
    pub fn union(&self) -> &[Complex64] {
        &self.union
    }

    pub fn from_per_bin(per_bin_roots: Vec<Vec<Complex64>>) -> Self {
        let union = per_bin_roots.iter().flatten().copied().collect();
        Self {
            per_bin_roots,
            union,
        }
    }
}

/// Degree selection for [`recover_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumRankMode {
    /// The fixed rule: degree `m` for bins `j ≠ 0`, `(m+1)/2` for bin `0`.
    Fixed,
    /// Per-bin automatic degree by residual tolerance.
    Auto { tol: f64 },
}

/// The fixed-rule annihilator degree for a bin.
pub fn fixed_rank_rule(step: usize, bin: usize) -> usize {
    if bin == 0 {
        (step + 1) / 2
    } else {
        step
    }
}

/// Recovers the operator spectrum from a uniform measurement series.
pub fn recover_spectrum(
    series: &MeasurementSeries,
    step: usize,
    mode: SpectrumRankMode,
) -> Result<SpectrumEstimate> {
    let spectra = bin_spectra(series, step)?;
    if spectra.columns() < 2 * step {
        return Err(Error::SequenceTooShort {
            degree: step,
            needed: 2 * step,
            got: spectra.columns(),
        });
    }
    if matches!(mode, SpectrumRankMode::Fixed) && step > MAX_FIXED_STEP {
        return Err(Error::InvalidParameter(format!(
            "fixed-rank mode supports steps up to {MAX_FIXED_STEP}, got {step}"
        )));
    }
    let mut per_bin = Vec::with_capacity(spectra.bins());
    for j in 0..spectra.bins() {
        let seq = spectra.row(j);
        let bin_mode = match mode {
            SpectrumRankMode::Fixed => RankMode::Fixed(fixed_rank_rule(step, j)),
            SpectrumRankMode::Auto { tol } => RankMode::Auto { tol },
        };
        let poly = find_annihilator_for_bin(&seq, bin_mode, j)?;
        per_bin.push(polynomial_roots(&poly)?);
    }
    Ok(SpectrumEstimate::from_per_bin(per_bin))
}

/// Frequencies of bin `j` fold to these distinct values `min(k, d−k)`.
fn folded_frequencies(dim: usize, step: usize, bin: usize) -> Vec<usize> {
    let j_bins = dim / step;
    let mut folds: Vec<usize> = (0..step)
        .map(|n| {
            let k = (bin + n * j_bins) % dim;
            k.min(dim - k)
        })
        .collect();
    folds.sort_unstable();
    folds.dedup();
    folds
}

/// Assembles the real symmetric filter from a recovered spectrum.
///
/// Within each bin, larger roots pair with smaller folded frequencies —
/// valid exactly under the standing assumption that the filter transform is
/// strictly decreasing on `[0, (d−1)/2]`. Folded frequencies covered by
/// several bins average their estimates.
pub fn assemble_filter(
    est: &SpectrumEstimate,
    dim: usize,
    step: usize,
) -> Result<RealSymmetricFilter> {
    if step == 0 || dim == 0 || dim % step != 0 {
        return Err(Error::InvalidParameter(format!(
            "step {step} must divide dimension {dim}"
        )));
    }
    let j_bins = dim / step;
    if step % 2 == 0 || j_bins % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "step m = {step} and bin count J = {j_bins} must both be odd"
        )));
    }
    if est.per_bin_roots().len() != j_bins {
        return Err(Error::DimensionMismatch {
            expected: j_bins,
            got: est.per_bin_roots().len(),
        });
    }

    let mut sums = vec![0.0f64; dim / 2 + 1];
    let mut counts = vec![0usize; dim / 2 + 1];
    for (j, roots) in est.per_bin_roots().iter().enumerate() {
        let folds = folded_frequencies(dim, step, j);
        // With J and m odd, folded collisions happen only inside bin 0.
        assert!(
            j == 0 || folds.len() == step,
            "unexpected folded collision in bin {j}"
        );
        let expected = fixed_rank_rule(step, j);
        if roots.len() != expected {
            return Err(Error::RootCountMismatch {
                bin: j,
                expected,
                got: roots.len(),
            });
        }
        let mut reals = Vec::with_capacity(roots.len());
        for &root in roots {
            let snapped = snap_root(root);
            if snapped.im != 0.0 {
                return Err(Error::ComplexRoot { root });
            }
            reals.push(snapped.re);
        }
        reals.sort_by(|a, b| b.partial_cmp(a).expect("roots are finite"));
        debug_assert_eq!(folds.len(), reals.len());
        for (fold, value) in folds.iter().zip(reals) {
            sums[*fold] += value;
            counts[*fold] += 1;
        }
    }

    let spectrum: Vec<Complex64> = (0..dim)
        .map(|k| {
            let fold = k.min(dim - k);
            debug_assert!(counts[fold] > 0, "fold {fold} not covered");
            Complex64::new(sums[fold] / counts[fold] as f64, 0.0)
        })
        .collect();
    let taps_c = dft(&spectrum, FftDirection::Inverse)?;
    let max_re = taps_c
        .values()
        .iter()
        .map(|v| v.re.abs())
        .fold(0.0, f64::max);
    let max_im = taps_c
        .values()
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0, f64::max);
    if max_im > 1e-8 * (1.0 + max_re) {
        return Err(Error::DegenerateData(format!(
            "assembled filter has imaginary residue {max_im:e}"
        )));
    }
    RealSymmetricFilter::symmetrized(taps_c.values().iter().map(|v| v.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SamplingPattern;
    use crate::signal::{EvolutionOperator, Signal};
    use crate::simulate::{evolve, sample_series, SeriesKind};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn fig_filter_15() -> RealSymmetricFilter {
        let folded = [1.0, 7.0 / 8.0, 3.0 / 4.0, 5.0 / 8.0, 0.5, 3.0 / 8.0, 0.25, 0.125];
        RealSymmetricFilter::from_folded_spectrum(&folded, 15).unwrap()
    }

    fn fig_signal_15() -> Signal {
        Signal::new(vec![
            0.2931, 0.3258, 0.04568, 0.3286, 0.2275, 0.0351, 0.1002, 0.1967, 0.3444,
            0.34710, 0.0567, 0.3492, 0.3443, 0.1746, 0.2879,
        ])
        .unwrap()
    }

    fn fig_series(levels: usize) -> MeasurementSeries {
        let op = EvolutionOperator::circulant(fig_filter_15());
        let full = evolve(&op, &fig_signal_15(), levels).unwrap();
        let pattern = SamplingPattern::uniform(15, 3).unwrap();
        sample_series(&full, &pattern, SeriesKind::Clean).unwrap()
    }

    #[test]
    fn fig_setup_bin_dimensions() {
        let spectra = bin_spectra(&fig_series(100), 3).unwrap();
        assert_eq!((spectra.bins(), spectra.columns()), (5, 101));
    }

    #[test]
    fn nonuniform_pattern_rejected() {
        let op = EvolutionOperator::circulant(fig_filter_15());
        let full = evolve(&op, &fig_signal_15(), 10).unwrap();
        let pattern = SamplingPattern::new(vec![0, 2, 6, 9, 12], 15).unwrap();
        let series = sample_series(&full, &pattern, SeriesKind::Clean).unwrap();
        assert!(bin_spectra(&series, 3).is_err());
    }

    #[test]
    fn single_bin_step_equals_dimension() {
        // d = 3 = m, J = 1: the only bin sequence is ŷ_ℓ(0) = (aℓ∗f)(0)·…,
        // the fold of all three frequencies; check against the direct sum.
        let filter = RealSymmetricFilter::new(vec![0.5, 0.2, 0.2]).unwrap();
        let op = EvolutionOperator::circulant(filter.clone());
        let f = Signal::new(vec![0.3, -0.1, 0.8]).unwrap();
        let full = evolve(&op, &f, 8).unwrap();
        let pattern = SamplingPattern::uniform(3, 3).unwrap();
        let series = sample_series(&full, &pattern, SeriesKind::Clean).unwrap();
        let spectra = bin_spectra(&series, 3).unwrap();
        let a_hat = filter.spectrum();
        let f_hat = dft_real(f.values(), FftDirection::Forward).unwrap();
        for l in 0..=8usize {
            let mut rhs = Complex64::new(0.0, 0.0);
            for n in 0..3 {
                rhs += a_hat[n].powi(l as i32) * f_hat.values()[n];
            }
            rhs /= 3.0;
            assert!((spectra.values()[(0, l)] - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn step_one_has_no_folding() {
        let filter = fig_filter_15();
        let op = EvolutionOperator::circulant(filter.clone());
        let f = fig_signal_15();
        let full = evolve(&op, &f, 5).unwrap();
        let pattern = SamplingPattern::uniform(15, 1).unwrap();
        let series = sample_series(&full, &pattern, SeriesKind::Clean).unwrap();
        let spectra = bin_spectra(&series, 1).unwrap();
        let a_hat = filter.spectrum();
        let f_hat = dft_real(f.values(), FftDirection::Forward).unwrap();
        for l in 0..=5usize {
            for k in 0..15 {
                let expected = a_hat[k].powi(l as i32) * f_hat.values()[k];
                assert!((spectra.values()[(k, l)] - expected).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn single_mode_gives_degree_one() {
        let lambda = 0.7;
        let seq: Vec<Complex64> = (0..12).map(|l| c(2.5 * lambda.powi(l))).collect();
        let poly = find_annihilator(&seq, RankMode::Auto { tol: 1e-9 }).unwrap();
        assert_eq!(poly.degree(), 1);
        let roots = polynomial_roots(&poly).unwrap();
        assert!((roots[0] - c(lambda)).norm() < 1e-10);
    }

    #[test]
    fn two_modes_give_known_coefficients() {
        // Oracle: (x−1)(x−1/2) = x² − 1.5x + 0.5 ⇒ (c_0, c_1) = (0.5, −1.5).
        let seq: Vec<Complex64> = (0..14)
            .map(|l| c(0.8 + 1.7 * 0.5f64.powi(l)))
            .collect();
        let poly = find_annihilator(&seq, RankMode::Fixed(2)).unwrap();
        assert!((poly.coefficients()[0] - c(0.5)).norm() < 1e-9);
        assert!((poly.coefficients()[1] - c(-1.5)).norm() < 1e-9);
        assert!(poly.residual() < 1e-10);
    }

    #[test]
    fn too_short_sequence_errors() {
        let seq = vec![c(1.0); 4];
        assert!(matches!(
            find_annihilator(&seq, RankMode::Fixed(2)),
            Err(Error::SequenceTooShort { needed: 5, .. })
        ));
    }

    #[test]
    fn auto_mode_exhaustion_carries_best_residual() {
        // White-noise-like sequence with no short recurrence.
        let seq: Vec<Complex64> = (0..9)
            .map(|l| c(((l * l * 7919 + 13) % 101) as f64 / 101.0 - 0.5))
            .collect();
        match find_annihilator(&seq, RankMode::Auto { tol: 1e-14 }) {
            Err(Error::NoAnnihilator { best_residual, .. }) => {
                assert!(best_residual > 0.0);
            }
            other => panic!("expected NoAnnihilator, got {other:?}"),
        }
    }

    #[test]
    fn zero_sequence_is_degenerate() {
        let seq = vec![c(0.0); 10];
        assert!(matches!(
            find_annihilator(&seq, RankMode::Fixed(2)),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn cubic_roots_recovered() {
        // Oracle expands (x−7/8)(x−1/2)(x−1/4):
        // x³ − 1.625x² + 0.78125x − 0.109375.
        let poly = AnnihilatorPolynomial::from_coefficients(
            vec![c(-0.109375), c(0.78125), c(-1.625)],
            0,
            0.0,
        )
        .unwrap();
        let mut roots: Vec<f64> = polynomial_roots(&poly)
            .unwrap()
            .iter()
            .map(|z| {
                assert_eq!(z.im, 0.0);
                z.re
            })
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected = [0.25, 0.5, 0.875];
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-10);
        }
    }

    #[test]
    fn quadratic_roots_from_derived_coefficients() {
        let poly =
            AnnihilatorPolynomial::from_coefficients(vec![c(0.5), c(-1.5)], 0, 0.0).unwrap();
        let mut roots: Vec<f64> = polynomial_roots(&poly).unwrap().iter().map(|z| z.re).collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((roots[0] - 0.5).abs() < 1e-10);
        assert!((roots[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fig_spectrum_recovered_noiselessly() {
        let series = fig_series(100);
        let est = recover_spectrum(&series, 3, SpectrumRankMode::Fixed).unwrap();
        // Construction oracle: distinct folded transform values per bin.
        let a_hat = fig_filter_15().spectrum();
        let mut expected: Vec<f64> = Vec::new();
        for j in 0..5usize {
            let mut vals: Vec<f64> = (0..3).map(|n| a_hat[(j + 5 * n) % 15]).collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            vals.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            expected.extend(vals);
        }
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut got: Vec<f64> = est.union().iter().map(|z| z.re).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-6, "got {g}, expected {e}");
        }
    }

    #[test]
    fn bin_zero_has_half_rank_root_count() {
        // Oracle: number of distinct â values on {0, J, 2J} with â(k)=â(d−k).
        let series = fig_series(40);
        let est = recover_spectrum(&series, 3, SpectrumRankMode::Fixed).unwrap();
        let a_hat = fig_filter_15().spectrum();
        let mut distinct: Vec<f64> = (0..3).map(|n| a_hat[5 * n]).collect();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(distinct.len(), 2);
        assert_eq!(est.per_bin_roots()[0].len(), 2);
    }

    #[test]
    fn identity_operator_auto_mode() {
        let mut taps = vec![0.0; 15];
        taps[0] = 1.0;
        let filter = RealSymmetricFilter::new(taps).unwrap();
        let op = EvolutionOperator::circulant(filter);
        let full = evolve(&op, &fig_signal_15(), 12).unwrap();
        let pattern = SamplingPattern::uniform(15, 3).unwrap();
        let series = sample_series(&full, &pattern, SeriesKind::Clean).unwrap();
        let est = recover_spectrum(&series, 3, SpectrumRankMode::Auto { tol: DEFAULT_AUTO_TOL })
            .unwrap();
        for roots in est.per_bin_roots() {
            assert_eq!(roots.len(), 1);
            assert!((roots[0] - c(1.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn scaling_the_signal_leaves_spectrum_unchanged() {
        let op = EvolutionOperator::circulant(fig_filter_15());
        let pattern = SamplingPattern::uniform(15, 3).unwrap();
        let mut unions = Vec::new();
        for scale in [1.0, 12.5] {
            let full = evolve(&op, &fig_signal_15().scaled(scale), 60).unwrap();
            let series = sample_series(&full, &pattern, SeriesKind::Clean).unwrap();
            let est = recover_spectrum(&series, 3, SpectrumRankMode::Fixed).unwrap();
            let mut u: Vec<f64> = est.union().iter().map(|z| z.re).collect();
            u.sort_by(|a, b| a.partial_cmp(b).unwrap());
            unions.push(u);
        }
        for (a, b) in unions[0].iter().zip(&unions[1]) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn fig_assembly_matches_spec_vector() {
        // Bin 1 folds {1, 6, 4} and receives {7/8, 1/2, 1/4} descending;
        // bin 0 folds {0, 5} and receives {1, 3/8}. Assembled transform is
        // (1, 7/8, 3/4, 5/8, 1/2, 3/8, 1/4, 1/8, 1/8, 1/4, …, 7/8).
        let per_bin = vec![
            vec![c(1.0), c(3.0 / 8.0)],
            vec![c(7.0 / 8.0), c(0.5), c(0.25)],
            vec![c(3.0 / 4.0), c(5.0 / 8.0), c(0.125)],
            vec![c(3.0 / 4.0), c(5.0 / 8.0), c(0.125)],
            vec![c(7.0 / 8.0), c(0.5), c(0.25)],
        ];
        let est = SpectrumEstimate::from_per_bin(per_bin);
        let filter = assemble_filter(&est, 15, 3).unwrap();
        let spec = filter.spectrum();
        let expected = [
            1.0,
            7.0 / 8.0,
            3.0 / 4.0,
            5.0 / 8.0,
            0.5,
            3.0 / 8.0,
            0.25,
            0.125,
            0.125,
            0.25,
            3.0 / 8.0,
            0.5,
            5.0 / 8.0,
            3.0 / 4.0,
            7.0 / 8.0,
        ];
        for (s, e) in spec.iter().zip(expected) {
            assert!((s - e).abs() < 1e-10);
        }
        // taps match the generating filter
        let oracle = fig_filter_15();
        for (a, b) in filter.taps().iter().zip(oracle.taps()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn all_ones_spectrum_assembles_to_impulse() {
        let per_bin = vec![
            vec![c(1.0)],
            vec![c(1.0)],
            vec![c(1.0)],
        ];
        // d = 3, m = 1, J = 3: every bin has a single fold.
        let est = SpectrumEstimate::from_per_bin(per_bin);
        let filter = assemble_filter(&est, 3, 1).unwrap();
        assert!((filter.taps()[0] - 1.0).abs() < 1e-12);
        assert!(filter.taps()[1].abs() < 1e-12);
        assert!(filter.taps()[2].abs() < 1e-12);
    }

    #[test]
    fn complex_root_rejected_by_assembly() {
        let bad = vec![
            vec![c(1.0), c(0.5)],
            vec![Complex64::new(0.8, 0.1), c(0.5), c(0.25)],
            vec![c(0.7), c(0.6), c(0.1)],
            vec![c(0.7), c(0.6), c(0.1)],
            vec![c(0.8), c(0.5), c(0.25)],
        ];
        let est = SpectrumEstimate::from_per_bin(bad);
        assert!(matches!(
            assemble_filter(&est, 15, 3),
            Err(Error::ComplexRoot { .. })
        ));
    }

    #[test]
    fn root_count_mismatch_rejected() {
        let bad = vec![
            vec![c(1.0)],
            vec![c(0.8), c(0.5), c(0.25)],
            vec![c(0.7), c(0.6), c(0.1)],
            vec![c(0.7), c(0.6), c(0.1)],
            vec![c(0.8), c(0.5), c(0.25)],
        ];
        let est = SpectrumEstimate::from_per_bin(bad);
        assert!(matches!(
            assemble_filter(&est, 15, 3),
            Err(Error::RootCountMismatch { bin: 0, expected: 2, got: 1 })
        ));
    }

    #[test]
    fn noiseless_round_trip_from_random_decreasing_spectrum() {
        // End-to-end oracle: build a strictly decreasing transform, evolve,
        // subsample, recover, assemble; taps must match the generator.
        let mut folded = [0.0; 8];
        let mut v = 1.3;
        for f in folded.iter_mut() {
            *f = v;
            v *= 0.78;
        }
        let filter = RealSymmetricFilter::from_folded_spectrum(&folded, 15).unwrap();
        let op = EvolutionOperator::circulant(filter.clone());
        let full = evolve(&op, &fig_signal_15(), 80).unwrap();
        let pattern = SamplingPattern::uniform(15, 3).unwrap();
        let series = sample_series(&full, &pattern, SeriesKind::Clean).unwrap();
        let est = recover_spectrum(&series, 3, SpectrumRankMode::Fixed).unwrap();
        let rec = assemble_filter(&est, 15, 3).unwrap();
        let scale = filter.taps().iter().map(|t| t.abs()).fold(0.0, f64::max);
        for (a, b) in rec.taps().iter().zip(filter.taps()) {
            assert!((a - b).abs() < 1e-8 * (1.0 + scale));
        }
        // exact symmetry of the assembled taps
        let taps = rec.taps();
        for k in 0..15 {
            assert_eq!(taps[k], taps[(15 - k) % 15]);
        }
    }

    #[test]
    fn annihilation_invariant_on_noiseless_rows() {
        let series = fig_series(60);
        let spectra = bin_spectra(&series, 3).unwrap();
        for j in 0..spectra.bins() {
            let seq = spectra.row(j);
            let poly =
                find_annihilator_for_bin(&seq, RankMode::Fixed(fixed_rank_rule(3, j)), j).unwrap();
            let norm = seq.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!(poly.recurrence_residual(&seq) <= 1e-9 * norm);
        }
    }
}
