use ndarray::Array2;
use num_traits::Zero;

use crate::cmat::{self, CMatrix};
use crate::error::{LabError, Result};
use crate::gridfield::{Grid1D, SampledFunction};
use crate::scalar::{re, Real, C};

/// Dense operator on sampled functions: `(A f)_j = dx * sum_k A_jk f_k`.
///
/// The stored entries are kernel values `K(x_j, y_k)`; [`OperatorMatrix::linear_map`]
/// returns the `dx`-weighted matrix acting on sample vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T> {
    pub grid: Grid1D<T>,
    pub kernel: CMatrix<T>,
    /// `false` when built outside the parameter range covered by accuracy contracts.
    pub accuracy_contract: bool,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn from_kernel(grid: Grid1D<T>, kernel: CMatrix<T>) -> Result<Self> {
        if kernel.dim() != (grid.n(), grid.n()) {
            return Err(LabError::Dimension(format!("kernel must be {0}x{0}", grid.n())));
        }
        if kernel.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(LabError::Accuracy("non-finite kernel entry".into()));
        }
        Ok(Self { grid, kernel, accuracy_contract: true })
    }

    /// Wraps a matrix acting directly on sample vectors.
    pub fn from_linear_map(grid: Grid1D<T>, map: CMatrix<T>) -> Result<Self> {
        let inv_dx = re(T::one() / grid.dx());
        Self::from_kernel(grid, map.mapv(|v| v * inv_dx))
    }

    pub fn identity(grid: Grid1D<T>) -> Self {
        let inv_dx = re(T::one() / grid.dx());
        Self { grid, kernel: cmat::identity::<T>(grid.n()).mapv(|v| v * inv_dx), accuracy_contract: true }
    }

    pub fn zeros(grid: Grid1D<T>) -> Self {
        Self { grid, kernel: Array2::zeros((grid.n(), grid.n())), accuracy_contract: true }
    }

    pub fn linear_map(&self) -> CMatrix<T> {
        let dx = re(self.grid.dx());
        self.kernel.mapv(|v| v * dx)
    }

    pub fn apply(&self, f: &SampledFunction<T>) -> SampledFunction<T> {
        assert_eq!(f.grid.n(), self.grid.n(), "grid mismatch");
        let n = self.grid.n();
        let dx = self.grid.dx();
        let values = (0..n)
            .map(|j| (0..n).fold(C::<T>::zero(), |s, k| s + self.kernel[(j, k)] * f.values[k]) * dx)
            .collect();
        SampledFunction { grid: self.grid, values }
    }

    /// Operator product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let dx = re(self.grid.dx());
        Self {
            grid: self.grid,
            kernel: self.kernel.dot(&other.kernel).mapv(|v| v * dx),
            accuracy_contract: self.accuracy_contract && other.accuracy_contract,
        }
    }

    /// Adjoint with respect to `(f | g) = sum f conj(g) dx`.
    pub fn adjoint(&self) -> Self {
        Self { grid: self.grid, kernel: cmat::adjoint(self.kernel.view()), accuracy_contract: self.accuracy_contract }
    }

    pub fn scaled(&self, s: C<T>) -> Self {
        Self { grid: self.grid, kernel: self.kernel.mapv(|v| v * s), accuracy_contract: self.accuracy_contract }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { grid: self.grid, kernel: &self.kernel + &other.kernel, accuracy_contract: self.accuracy_contract && other.accuracy_contract }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { grid: self.grid, kernel: &self.kernel - &other.kernel, accuracy_contract: self.accuracy_contract && other.accuracy_contract }
    }

    /// Frobenius norm of the linear map.
    pub fn fro_norm(&self) -> T {
        cmat::fro_norm(self.kernel.view()) * self.grid.dx()
    }

    /// `||self - other||_F / ||other||_F`.
    pub fn rel_dist(&self, other: &Self) -> T {
        cmat::rel_fro(self.kernel.view(), other.kernel.view())
    }

    /// Applies the linear map to the columns of `v` (an `N x K` block).
    pub fn apply_block(&self, v: &CMatrix<T>) -> CMatrix<T> {
        self.linear_map().dot(v)
    }

    /// Writes `x, y, re, im` kernel rows.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        use crate::gridfield::fmt17;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "re", "im"])?;
        for j in 0..self.grid.n() {
            for k in 0..self.grid.n() {
                let v = self.kernel[(j, k)];
                w.write_record([fmt17(self.grid.x(j)), fmt17(self.grid.x(k)), fmt17(v.re), fmt17(v.im)])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Multiplication by `x` as a linear map.
pub fn position_map<T: Real>(grid: &Grid1D<T>) -> CMatrix<T> {
    Array2::from_shape_fn((grid.n(), grid.n()), |(i, j)| if i == j { re(grid.x(i)) } else { C::<T>::zero() })
}

/// `P = (2 pi i)^{-1} d/dx` realized spectrally: `F^{-1} diag(p_k) F`.
pub fn momentum_map<T: Real>(grid: &Grid1D<T>) -> CMatrix<T> {
    momentum_power_map(grid, 1)
}

/// `P^b = F^{-1} diag(p_k^b) F`.
pub fn momentum_power_map<T: Real>(grid: &Grid1D<T>, b: usize) -> CMatrix<T> {
    let f = crate::gridfield::fourier_matrix(grid);
    let finv = crate::gridfield::inverse_fourier_matrix(grid);
    let mut scaled = f;
    for (k, mut row) in scaled.rows_mut().into_iter().enumerate() {
        let pk = re(grid.p(k).powi(b as i32));
        row.mapv_inplace(|v| v * pk);
    }
    finv.dot(&scaled)
}

/// `X^a` as a linear map.
pub fn position_power_map<T: Real>(grid: &Grid1D<T>, a: usize) -> CMatrix<T> {
    Array2::from_shape_fn((grid.n(), grid.n()), |(i, j)| if i == j { re(grid.x(i).powi(a as i32)) } else { C::<T>::zero() })
}
