//! Signal recovery by least squares.
//!
//! The streaming solver absorbs equation blocks one at a time: each update
//! stacks the current triangular factor over the new block and re-factors by
//! Householder QR, keeping a constant-size state (`d×d` triangle plus a
//! length-`d` reduced right-hand side) regardless of how many blocks have
//! been seen. Solving the triangle recovers the least-squares minimizer over
//! all absorbed equations.
//!
//! Unlike the textbook setting, the first block is not required to have full
//! column rank: the state accumulates rank as blocks arrive and refuses to
//! solve until the triangle is invertible. This matters in dynamical
//! sampling, where each block `S_Ω A^i` is individually rank deficient
//! whenever `|Ω| < d`.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative magnitude below which a diagonal entry of the triangular factor
/// counts as zero for rank detection.
pub const DIAG_TOLERANCE: f64 = 1e-12;

/// Constant-size state of the streaming least-squares solver.
#[derive(Debug, Clone)]
pub struct StreamingLsqState<T: ComplexField> {
    r: DMatrix<T>,
    rhs: DVector<T>,
    rows_seen: usize,
}

impl<T: ComplexField> StreamingLsqState<T> {
    /// Fresh state for `dim` unknowns; no equations absorbed yet.
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            r: DMatrix::zeros(dim, dim),
            rhs: DVector::zeros(dim),
            rows_seen: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    /// Number of equation rows absorbed so far.
    pub fn rows_seen(&self) -> usize {
        self.rows_seen
    }

    /// The upper-triangular factor. Entries below the diagonal are exactly
    /// zero.
    pub fn triangle(&self) -> &DMatrix<T> {
        &self.r
    }

    /// The reduced right-hand side.
    pub fn reduced_rhs(&self) -> &DVector<T> {
        &self.rhs
    }

    fn max_abs(&self) -> f64 {
        self.r
            .iter()
            .map(|v| v.clone().modulus().to_subset().unwrap_or(0.0))
            .fold(0.0, f64::max)
    }

    fn deficient_columns(&self) -> usize {
        let tol = DIAG_TOLERANCE * self.max_abs();
        (0..self.dim())
            .filter(|&i| {
                let m = self.r[(i, i)].clone().modulus().to_subset().unwrap_or(0.0);
                m <= tol
            })
            .count()
    }

    /// Whether the triangle is invertible at the rank tolerance, i.e. the
    /// absorbed equations determine all unknowns.
    pub fn is_full_rank(&self) -> bool {
        self.rows_seen > 0 && self.deficient_columns() == 0
    }

    /// Absorbs a block of equations `block·g ≈ rhs`.
    pub fn update(&mut self, block: &DMatrix<T>, rhs: &DVector<T>) -> Result<()> {
        let d = self.dim();
        if block.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: block.ncols(),
            });
        }
        if block.nrows() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: block.nrows(),
                got: rhs.len(),
            });
        }
        if block.nrows() == 0 {
            return Ok(());
        }

        let m = block.nrows();
        let mut stacked = DMatrix::zeros(d + m, d);
        stacked.view_mut((0, 0), (d, d)).copy_from(&self.r);
        stacked.view_mut((d, 0), (m, d)).copy_from(block);
        let mut stacked_rhs = DVector::zeros(d + m);
        stacked_rhs.rows_mut(0, d).copy_from(&self.rhs);
        stacked_rhs.rows_mut(d, m).copy_from(rhs);

        let qr = stacked.qr();
        qr.q_tr_mul(&mut stacked_rhs);

        self.r = qr.r();
        // Householder roundoff can leave nonzero dust below the diagonal of
        // the returned factor; clear it so the triangular invariant is exact.
        for i in 1..d {
            for j in 0..i {
                self.r[(i, j)] = T::zero();
            }
        }
        self.rhs = stacked_rhs.rows(0, d).into_owned();
        self.rows_seen += m;
        Ok(())
    }

    /// Solves the accumulated least-squares problem by back substitution.
    pub fn solve(&self) -> Result<DVector<T>> {
        let deficient = if self.rows_seen == 0 {
            self.dim()
        } else {
            self.deficient_columns()
        };
        if deficient > 0 {
            return Err(Error::RankDeficient {
                deficient,
                dim: self.dim(),
            });
        }
        self.r
            .clone()
            .solve_upper_triangular(&self.rhs)
            .ok_or(Error::RankDeficient {
                deficient: 1,
                dim: self.dim(),
            })
    }
}

/// Direct (non-streaming) least-squares solution of a stack of blocks via
/// the singular value decomposition; the test oracle for the streaming path.
pub fn batch_lsq<T: ComplexField>(blocks: &[(DMatrix<T>, DVector<T>)]) -> Result<DVector<T>> {
    if blocks.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = blocks[0].0.ncols();
    let rows: usize = blocks.iter().map(|(a, _)| a.nrows()).sum();
    let mut stacked = DMatrix::zeros(rows, d);
    let mut rhs = DVector::zeros(rows);
    let mut at = 0;
    for (a, b) in blocks {
        if a.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: a.ncols(),
            });
        }
        if a.nrows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: b.len(),
            });
        }
        stacked.view_mut((at, 0), (a.nrows(), d)).copy_from(a);
        rhs.rows_mut(at, b.len()).copy_from(b);
        at += a.nrows();
    }
    if rows < d {
        return Err(Error::RankDeficient {
            deficient: d - rows,
            dim: d,
        });
    }
    let svd = stacked.svd(true, true);
    let smax = svd
        .singular_values
        .iter()
        .fold(0.0f64, |acc, s| acc.max(s.clone().to_subset().unwrap_or(0.0)));
    let deficient = svd
        .singular_values
        .iter()
        .filter(|s| s.clone().clone().to_subset().unwrap_or(0.0) <= DIAG_TOLERANCE * smax)
        .count();
    if deficient > 0 {
        return Err(Error::RankDeficient { deficient, dim: d });
    }
    svd.solve(&rhs, T::RealField::from_subset(&0.0))
        .map_err(|_| Error::RankDeficient { deficient: 1, dim: d })
}

/// Zeroes every entry with magnitude at most `2σ`, the sample/solution
/// post-processor for sparsely supported signals.
pub fn apply_threshold(x: &[f64], sigma: f64) -> Result<Vec<f64>> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold sigma must be nonnegative, got {sigma}"
        )));
    }
    let t = 2.0 * sigma;
    Ok(x.iter().map(|&v| if v.abs() <= t { 0.0 } else { v }).collect())
}
