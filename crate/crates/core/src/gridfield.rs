//! Uniform periodic 1-D grids, sampled functions, phase-space tables and the
//! discrete Fourier and symplectic Fourier transforms.

use std::io::Write;
use std::path::Path;

use ndarray::{Array2, ArrayView2};
use num_traits::Zero;

use crate::cmat::CMatrix;
use crate::error::{LabError, Result};
use crate::scalar::{cis, cis2pi, re, Real, C};

/// Centered grid `x_j = (j - N/2) dx`, `dx = L/N`, with momenta `p_k = (k - N/2)/L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D<T> {
    n: usize,
    l: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(n: usize, l: T) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(LabError::Validation(format!("N must be a power of two >= 2, got {n}")));
        }
        if l <= T::zero() || !l.is_finite() {
            return Err(LabError::Validation(format!("L must be positive and finite, got {l}")));
        }
        Ok(Self { n, l })
    }

    /// Square grid `L = sqrt(N)`, for which `dx = dp` and the position and momentum
    /// lattices coincide.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, T::from_usize_lossy(n).sqrt())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn dx(&self) -> T {
        self.l / T::from_usize_lossy(self.n)
    }

    pub fn dp(&self) -> T {
        T::one() / self.l
    }

    fn centered(&self, j: usize) -> T {
        T::from_usize_lossy(j) - T::from_usize_lossy(self.n / 2)
    }

    pub fn x(&self, j: usize) -> T {
        self.centered(j) * self.dx()
    }

    pub fn p(&self, k: usize) -> T {
        self.centered(k) * self.dp()
    }

    pub fn xs(&self) -> Vec<T> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn ps(&self) -> Vec<T> {
        (0..self.n).map(|k| self.p(k)).collect()
    }

    /// `true` when the position and momentum lattices coincide.
    pub fn is_square(&self) -> bool {
        (self.dx() - self.dp()).abs() <= T::epsilon() * T::lit(16.0) * self.dx()
    }

    /// Nearest grid index of `x` (periodic), with the signed offset.
    pub fn nearest_shift(&self, x: T) -> (i64, T) {
        let s = (x / self.dx()).round();
        (s.to_i64().unwrap_or(0), x - s * self.dx())
    }

    /// `e^{-2 pi i p_k x_j}` via the exact integer form `(k - N/2)(j - N/2) / N`.
    pub fn dft_phase(&self, k: usize, j: usize) -> C<T> {
        let n = self.n as i64;
        let h = n / 2;
        let m = ((k as i64 - h) * (j as i64 - h)).rem_euclid(n);
        cis2pi(-T::from_i64(m).unwrap() / T::from_usize_lossy(self.n))
    }
}

/// Complex samples on a [`Grid1D`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction<T> {
    pub grid: Grid1D<T>,
    pub values: Vec<C<T>>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(grid: Grid1D<T>, values: Vec<C<T>>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(LabError::Dimension(format!("expected {} samples, got {}", grid.n(), values.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(LabError::Validation("non-finite sample".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D<T>, f: impl Fn(T) -> C<T>) -> Self {
        let values = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sum |f_j|^2 dx`.
    pub fn norm_sqr(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr()).sum::<T>() * self.grid.dx()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `(f | g) = sum f_j conj(g_j) dx`, linear in `f`.
    pub fn inner(&self, g: &Self) -> C<T> {
        assert_eq!(self.len(), g.len(), "grid mismatch");
        self.values.iter().zip(&g.values).fold(C::<T>::zero(), |s, (a, b)| s + *a * b.conj()) * self.grid.dx()
    }

    /// Largest magnitude among the first and last `width` samples.
    pub fn edge_magnitude(&self, width: usize) -> T {
        let n = self.len();
        (0..width.min(n)).flat_map(|i| [self.values[i], self.values[n - 1 - i]]).fold(T::zero(), |m, v| m.max(v.norm()))
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scaled(&self, s: C<T>) -> Self {
        self.map(|v| v * s)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `sum |f - g| dx / sum |g| dx`.
    pub fn rel_l2_dist(&self, other: &Self) -> T {
        let num: T = self.values.iter().zip(&other.values).map(|(a, b)| (*a - *b).norm_sqr()).sum();
        let den: T = other.values.iter().map(|b| b.norm_sqr()).sum();
        (num / den).sqrt()
    }

    pub fn max_abs_dist(&self, other: &Self) -> T {
        self.values.iter().zip(&other.values).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// Writes `x, re, im` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "re", "im"])?;
        for (j, v) in self.values.iter().enumerate() {
            w.write_record([fmt17(self.grid.x(j)), fmt17(v.re), fmt17(v.im)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt17<T: Real>(v: T) -> String {
    format!("{:.16e}", v.to_f64_lossy())
}

/// Discrete Fourier transform `F f(p_k) = dx sum_j e^{-2 pi i p_k x_j} f(x_j)`.
/// The result lives on the momentum lattice, stored with the same grid descriptor.
pub fn fourier<T: Real>(f: &SampledFunction<T>) -> SampledFunction<T> {
    let g = f.grid;
    let dx = re(g.dx());
    let values = (0..g.n())
        .map(|k| (0..g.n()).fold(C::<T>::zero(), |s, j| s + g.dft_phase(k, j) * f.values[j]) * dx)
        .collect();
    SampledFunction { grid: g, values }
}

/// Inverse of [`fourier`]: `f(x_j) = dp sum_k e^{2 pi i p_k x_j} F f(p_k)`.
pub fn inverse_fourier<T: Real>(fh: &SampledFunction<T>) -> SampledFunction<T> {
    let g = fh.grid;
    let dp = re(g.dp());
    let values = (0..g.n())
        .map(|j| (0..g.n()).fold(C::<T>::zero(), |s, k| s + g.dft_phase(k, j).conj() * fh.values[k]) * dp)
        .collect();
    SampledFunction { grid: g, values }
}

/// Linear map of [`fourier`] as an `N x N` matrix.
pub fn fourier_matrix<T: Real>(g: &Grid1D<T>) -> CMatrix<T> {
    let dx = re(g.dx());
    Array2::from_shape_fn((g.n(), g.n()), |(k, j)| g.dft_phase(k, j) * dx)
}

/// Linear map of [`inverse_fourier`].
pub fn inverse_fourier_matrix<T: Real>(g: &Grid1D<T>) -> CMatrix<T> {
    let dp = re(g.dp());
    Array2::from_shape_fn((g.n(), g.n()), |(j, k)| g.dft_phase(k, j).conj() * dp)
}

/// Complex table on the phase lattice, `data[(j, k)] = a(x_j, p_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseTable<T> {
    pub grid: Grid1D<T>,
    pub data: Array2<C<T>>,
}

/// Alias emphasising the lattice itself.
pub type PhaseGrid<T> = Grid1D<T>;

impl<T: Real> PhaseTable<T> {
    pub fn zeros(grid: Grid1D<T>) -> Self {
        Self { grid, data: Array2::zeros((grid.n(), grid.n())) }
    }

    pub fn new(grid: Grid1D<T>, data: Array2<C<T>>) -> Result<Self> {
        if data.dim() != (grid.n(), grid.n()) {
            return Err(LabError::Dimension(format!("phase table must be {0}x{0}", grid.n())));
        }
        if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(LabError::Validation("non-finite phase-table entry".into()));
        }
        Ok(Self { grid, data })
    }

    pub fn from_fn(grid: Grid1D<T>, f: impl Fn(T, T) -> C<T>) -> Self {
        let data = Array2::from_shape_fn((grid.n(), grid.n()), |(j, k)| f(grid.x(j), grid.p(k)));
        Self { grid, data }
    }

    /// Discrete delta of unit mass (`sum * dx dp = 1`) at lattice index `(j, k)`.
    pub fn delta(grid: Grid1D<T>, j: usize, k: usize) -> Self {
        let mut t = Self::zeros(grid);
        t.data[(j, k)] = re(T::from_usize_lossy(grid.n()));
        t
    }

    pub fn cell(&self) -> T {
        self.grid.dx() * self.grid.dp()
    }

    /// `sum a dx dp`.
    pub fn mass(&self) -> C<T> {
        self.data.iter().fold(C::<T>::zero(), |s, v| s + *v) * self.cell()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// Largest magnitude on the outer ring of `width` lattice rows/columns.
    pub fn edge_magnitude(&self, width: usize) -> T {
        let n = self.grid.n();
        let w = width.min(n / 2);
        let mut m = T::zero();
        for j in 0..n {
            for k in 0..n {
                if j < w || k < w || j >= n - w || k >= n - w {
                    m = m.max(self.data[(j, k)].norm());
                }
            }
        }
        m
    }

    pub fn max_abs_dist(&self, other: &Self) -> T {
        crate::cmat::max_abs_dist(self.data.view(), other.data.view())
    }

    pub fn view(&self) -> ArrayView2<'_, C<T>> {
        self.data.view()
    }

    /// Writes `x, p, re, im` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "p", "re", "im"])?;
        for j in 0..self.grid.n() {
            for k in 0..self.grid.n() {
                let v = self.data[(j, k)];
                w.write_record([fmt17(self.grid.x(j)), fmt17(self.grid.p(k)), fmt17(v.re), fmt17(v.im)])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Symplectic Fourier transform
/// `a_s(x_j, p_k) = dx dp sum e^{-2 pi i (p_k x_j' - p_k' x_j)} a(x_j', p_k')`.
pub fn symplectic_fourier<T: Real>(a: &PhaseTable<T>) -> PhaseTable<T> {
    let g = a.grid;
    let f = Array2::from_shape_fn((g.n(), g.n()), |(k, j)| g.dft_phase(k, j));
    let fbar = f.mapv(|v| v.conj());
    let prod = f.dot(&a.data).dot(&fbar);
    let cell = re(a.cell());
    PhaseTable { grid: g, data: prod.t().mapv(|v| v * cell) }
}

/// Band-limited (trigonometric) interpolant of a sampled function.
///
/// Uses the symmetric spectrum `-N/2 ..= N/2` with the Nyquist coefficient split in half,
/// so the interpolant of real data is real and reproduces every sample exactly.
#[derive(Clone, Debug)]
pub struct BandLimited<T> {
    grid: Grid1D<T>,
    freqs: Vec<T>,
    coeffs: Vec<C<T>>,
}

impl<T: Real> BandLimited<T> {
    pub fn new(f: &SampledFunction<T>) -> Self {
        let g = f.grid;
        let n = g.n();
        let inv_n = T::one() / T::from_usize_lossy(n);
        let mut freqs = Vec::with_capacity(n + 1);
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..n {
            let c = (0..n).fold(C::<T>::zero(), |s, j| s + g.dft_phase(k, j) * f.values[j]) * inv_n;
            if k == 0 {
                freqs.push(g.p(0));
                coeffs.push(c * T::lit(0.5));
                freqs.push(-g.p(0));
                coeffs.push(c * T::lit(0.5));
            } else {
                freqs.push(g.p(k));
                coeffs.push(c);
            }
        }
        Self { grid: g, freqs, coeffs }
    }

    pub fn grid(&self) -> Grid1D<T> {
        self.grid
    }

    pub fn eval(&self, y: T) -> C<T> {
        self.freqs.iter().zip(&self.coeffs).fold(C::<T>::zero(), |s, (&p, &c)| s + c * cis2pi(p * y))
    }

    /// Evaluates at the 2-D family of points `rows[r] + cols[c]` as a `rows x cols` table
    /// using one matrix product.
    pub fn eval_outer(&self, rows: &[T], cols: &[T]) -> Array2<C<T>> {
        let nf = self.freqs.len();
        let a = Array2::from_shape_fn((rows.len(), nf), |(r, f)| self.coeffs[f] * cis2pi(self.freqs[f] * rows[r]));
        let b = Array2::from_shape_fn((nf, cols.len()), |(f, c)| cis2pi(self.freqs[f] * cols[c]));
        a.dot(&b)
    }

    /// Interpolation weights: `f(y) = sum_l w_l f_l`.
    pub fn weights(grid: &Grid1D<T>, y: T) -> Vec<C<T>> {
        let n = grid.n();
        let nf = T::from_usize_lossy(n);
        let dx = grid.dx();
        (0..n)
            .map(|l| {
                let t = (y - grid.x(l)) / dx;
                let r = t - t.round();
                if r.abs() < T::lit(1e-12) {
                    let m = t.round().to_i64().unwrap_or(0).rem_euclid(n as i64);
                    return if m == 0 { re(T::one()) } else { C::<T>::zero() };
                }
                let theta = T::TAU() * t / nf;
                let half = theta * T::lit(0.5);
                let d = (half * (nf - T::one())).sin() / half.sin() + (half * nf).cos();
                re(d / nf)
            })
            .collect()
    }
}

/// `L^2`-normalized Hermite functions `h_k(x) ~ H_k(sqrt(2 pi) x) e^{-pi x^2}`, sampled on the grid.
pub fn hermite_function<T: Real>(grid: &Grid1D<T>, k: usize) -> SampledFunction<T> {
    SampledFunction::from_fn(*grid, |x| re(hermite_value(k, x)))
}

/// Continuous value of the `k`-th Hermite function (unit `L^2` norm on the line).
pub fn hermite_value<T: Real>(k: usize, x: T) -> T {
    let t = (T::TAU()).sqrt() * x;
    let h0 = T::lit(2f64.powf(0.25)) * (-T::PI() * x * x).exp();
    if k == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = T::lit(2f64.sqrt()) * t * h0;
    for m in 1..k {
        let mf = T::from_usize_lossy(m);
        let next = (T::lit(2.0) / (mf + T::one())).sqrt() * t * cur - (mf / (mf + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `N x K` matrix whose columns are the first `K` Hermite functions, orthonormalized
/// in the plain `l^2` sense (`V^* V = I`). This is the probe subspace used to measure
/// identities on well-resolved states.
pub fn probe_basis<T: Real>(grid: &Grid1D<T>, k: usize) -> CMatrix<T> {
    let n = grid.n();
    let mut v = Array2::<C<T>>::zeros((n, k));
    for c in 0..k {
        let h = hermite_function(grid, c);
        let mut col: Vec<C<T>> = h.values.clone();
        for _pass in 0..2 {
            for prev in 0..c {
                let proj = (0..n).fold(C::<T>::zero(), |s, i| s + v[(i, prev)].conj() * col[i]);
                for i in 0..n {
                    col[i] -= v[(i, prev)] * proj;
                }
            }
        }
        let nrm = col.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for i in 0..n {
            v[(i, c)] = col[i] / nrm;
        }
    }
    v
}

/// Built-in test signals.
#[derive(Clone, Debug, PartialEq)]
pub enum Signal<T> {
    /// `(2/s^2)^{1/4} e^{-pi (x - x0)^2 / s^2} e^{2 pi i p0 x}`.
    Gaussian { width: T, center: T, freq: T },
    Hermite(usize),
    /// Gaussian envelope times `e^{i pi alpha x^2}`.
    Chirp(T),
    /// Two separated unit Gaussians, normalized.
    TwoGaussian { separation: T },
}

impl<T: Real> Signal<T> {
    pub fn standard() -> Self {
        Signal::Gaussian { width: T::one(), center: T::zero(), freq: T::zero() }
    }

    pub fn sample(&self, grid: &Grid1D<T>) -> SampledFunction<T> {
        match self {
            Signal::Gaussian { width, center, freq } => {
                let amp = (T::lit(2.0) / (*width * *width)).powf(T::lit(0.25));
                SampledFunction::from_fn(*grid, |x| {
                    let d = (x - *center) / *width;
                    cis2pi(*freq * x) * (amp * (-T::PI() * d * d).exp())
                })
            }
            Signal::Hermite(k) => hermite_function(grid, *k),
            Signal::Chirp(alpha) => {
                let amp = T::lit(2f64.powf(0.25));
                SampledFunction::from_fn(*grid, |x| cis(T::PI() * *alpha * x * x) * (amp * (-T::PI() * x * x).exp()))
            }
            Signal::TwoGaussian { separation } => {
                let h = *separation * T::lit(0.5);
                let amp = T::lit(2f64.powf(0.25));
                let f = SampledFunction::from_fn(*grid, |x| {
                    re(amp * ((-T::PI() * (x - h) * (x - h)).exp() + (-T::PI() * (x + h) * (x + h)).exp()))
                });
                let nrm = f.norm();
                f.scaled(re(T::one() / nrm))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_gauss(g: &Grid1D<f64>) -> SampledFunction<f64> {
        Signal::standard().sample(g)
    }

    #[test]
    fn grid_reciprocity() {
        let g = Grid1D::<f64>::new(128, 16.0).unwrap();
        assert!((g.dx() * g.dp() - 1.0 / 128.0).abs() < 1e-18);
        assert_eq!(g.x(64), 0.0);
        assert!(Grid1D::<f64>::new(100, 16.0).is_err());
        assert!(Grid1D::<f64>::new(128, -1.0).is_err());
        assert!(Grid1D::<f64>::square(128).unwrap().is_square());
    }

    #[test]
    fn gaussian_is_fourier_fixed_point() {
        let g = Grid1D::<f64>::new(128, 16.0).unwrap();
        let f = std_gauss(&g);
        let fh = fourier(&f);
        let on_p = SampledFunction::new(g, g.ps().iter().map(|&p| re(2f64.powf(0.25) * (-std::f64::consts::PI * p * p).exp())).collect()).unwrap();
        assert!(fh.rel_l2_dist(&on_p) <= 1e-8, "{}", fh.rel_l2_dist(&on_p));
    }

    #[test]
    fn delta_maps_to_unit_modulus_column() {
        let g = Grid1D::<f64>::new(64, 8.0).unwrap();
        let mut v = vec![C::<f64>::zero(); 64];
        v[40] = re(1.0 / g.dx());
        let fh = fourier(&SampledFunction::new(g, v).unwrap());
        for k in 0..64 {
            assert!((fh.values[k].norm() - 1.0).abs() < 1e-13);
            let want = cis2pi(-g.p(k) * g.x(40));
            assert!((fh.values[k] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn parseval_and_inverse() {
        let g = Grid1D::<f64>::new(128, 16.0).unwrap();
        let f = Signal::Gaussian { width: 0.8, center: 0.7, freq: 0.4 }.sample(&g);
        let h = Signal::Chirp(0.6).sample(&g);
        let lhs = fourier(&f).inner(&fourier(&h).clone());
        // inner on the momentum grid carries dp, not dx
        let lhs = lhs * (g.dp() / g.dx());
        assert!((lhs - f.inner(&h)).norm() < 1e-10);
        assert!(inverse_fourier(&fourier(&f)).max_abs_dist(&f) < 1e-12);
    }

    #[test]
    fn symplectic_fourier_examples() {
        let g = Grid1D::<f64>::square(64).unwrap();
        let one = PhaseTable::from_fn(g, |_, _| re(1.0));
        let s = symplectic_fourier(&one);
        assert!((s.data[(32, 32)] - re(64.0)).norm() < 1e-10);
        assert!((s.mass() - re(1.0)).norm() < 1e-12);
        let gauss = PhaseTable::from_fn(g, |x, p| re((-std::f64::consts::PI * (x * x + p * p)).exp()));
        assert!(symplectic_fourier(&gauss).max_abs_dist(&gauss) < 1e-10);
        let t = PhaseTable::from_fn(g, |x, p| re((-3.0 * (x - 0.3) * (x - 0.3) - p * p).exp()) * cis(x * p));
        let back = symplectic_fourier(&symplectic_fourier(&t));
        assert!(back.max_abs_dist(&t) < 1e-9);
    }

    #[test]
    fn band_limited_reproduces_samples_and_smooth_values() {
        let g = Grid1D::<f64>::new(128, 16.0).unwrap();
        let f = std_gauss(&g);
        let bl = BandLimited::new(&f);
        for j in [0usize, 17, 64, 100] {
            assert!((bl.eval(g.x(j)) - f.values[j]).norm() < 1e-12);
        }
        for y in [0.0123, -0.77, 1.234] {
            let want = 2f64.powf(0.25) * (-std::f64::consts::PI * y * y).exp();
            assert!((bl.eval(y) - re(want)).norm() < 1e-12);
            let w = BandLimited::weights(&g, y);
            let v = w.iter().zip(&f.values).fold(C::<f64>::zero(), |s, (a, b)| s + *a * *b);
            assert!((v - re(want)).norm() < 1e-12);
        }
        let tab = bl.eval_outer(&[0.1, -0.2], &[0.0, 0.05]);
        assert!((tab[(1, 1)] - bl.eval(-0.15)).norm() < 1e-13);
    }

    #[test]
    fn probe_basis_is_orthonormal() {
        let g = Grid1D::<f64>::square(128).unwrap();
        let v = probe_basis(&g, 8);
        let gram = crate::cmat::adjoint(v.view()).dot(&v);
        assert!(crate::cmat::max_abs_dist(gram.view(), crate::cmat::identity::<f64>(8).view()) < 1e-13);
        let h3 = hermite_function(&g, 3);
        assert!((h3.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_shape() {
        let g = Grid1D::<f64>::new(8, 2.0).unwrap();
        let mut buf = Vec::new();
        std_gauss(&g).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with("x,re,im"));
    }
}
