//! Real symplectic linear algebra: membership, the symplectic Cayley transform
//! and the generators `J`, `V_{-P}`, `M_L`.

use rand::Rng;

use crate::error::{LabError, Result};
use crate::linalg::RMat;
use crate::scalar::Real;

/// Threshold on `|det(S - I)|` below which `S` is treated as outside `Sp_(0)`.
pub const SP0_DET_TOL: f64 = 1e-10;
/// Rejection threshold used by the random sampler.
pub const SAMPLER_DET_TOL: f64 = 1e-6;

/// Membership tolerance scaled to the working precision.
pub fn membership_tol<T: Real>() -> T {
    (T::epsilon() * T::lit(4096.0)).max(T::lit(1e-12))
}

/// The standard symplectic matrix `[[0, I], [-I, 0]]`.
pub fn j_matrix<T: Real>(n: usize) -> RMat<T> {
    RMat::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            T::one()
        } else if i == j + n {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// `true` iff `max |S^T J S - J| <= tol`.
pub fn is_symplectic<T: Real>(s: &RMat<T>, tol: T) -> Result<bool> {
    if !s.is_square() || !s.rows().is_multiple_of(2) {
        return Err(LabError::Dimension(format!("expected a square even-dimensional matrix, got {}x{}", s.rows(), s.cols())));
    }
    let j = j_matrix::<T>(s.rows() / 2);
    Ok((&(&s.transpose() * &j) * s).dist(&j) <= tol)
}

/// A validated element of `Sp(2n, R)`, blocks ordered `(x, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SympMatrix<T> {
    n: usize,
    m: RMat<T>,
}

impl<T: Real> SympMatrix<T> {
    pub fn new(m: RMat<T>) -> Result<Self> {
        let scale = T::one() + m.max_abs() * m.max_abs();
        if !is_symplectic(&m, membership_tol::<T>() * scale)? {
            return Err(LabError::Validation("matrix is not symplectic".into()));
        }
        Ok(Self { n: m.rows() / 2, m })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, m: RMat::identity(2 * n) }
    }

    pub fn j(n: usize) -> Self {
        Self { n, m: j_matrix(n) }
    }

    /// `-I`.
    pub fn minus_identity(n: usize) -> Self {
        Self { n, m: RMat::identity(2 * n).scale(-T::one()) }
    }

    /// Builds an `n = 1` element from its four entries.
    pub fn from_2x2(a: T, b: T, c: T, d: T) -> Result<Self> {
        Self::new(RMat::from_rows(&[&[a, b], &[c, d]]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMat<T> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.m[(i, j)]
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { n: self.n, m: &self.m * &other.m }
    }

    /// `S^{-1} = -J S^T J`.
    pub fn inverse(&self) -> Self {
        let j = j_matrix::<T>(self.n);
        Self { n: self.n, m: -&(&(&j * &self.m.transpose()) * &j) }
    }

    /// `det(S - I)`.
    pub fn det_minus_identity(&self) -> T {
        (&self.m - &RMat::identity(2 * self.n)).det()
    }

    pub fn in_sp0(&self) -> bool {
        self.det_minus_identity().abs() > T::lit(SP0_DET_TOL)
    }

    /// Applies `S` to a phase-space point `(x, p)` (n = 1).
    pub fn apply2(&self, x: T, p: T) -> (T, T) {
        (self.m[(0, 0)] * x + self.m[(0, 1)] * p, self.m[(1, 0)] * x + self.m[(1, 1)] * p)
    }
}

/// Symmetric matrix `M(S)` produced by the symplectic Cayley transform.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleyMatrix<T> {
    m: RMat<T>,
}

impl<T: Real> CayleyMatrix<T> {
    pub fn new(m: RMat<T>) -> Result<Self> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(LabError::Dimension(format!("Cayley matrix must be 2n x 2n, got {}x{}", m.rows(), m.cols())));
        }
        let tol = membership_tol::<T>() * (T::one() + m.max_abs());
        if !m.is_symmetric(tol) {
            return Err(LabError::Validation("Cayley matrix must be symmetric".into()));
        }
        Ok(Self { m: m.symmetrize() })
    }

    pub fn matrix(&self) -> &RMat<T> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.m[(i, j)]
    }

    pub fn n(&self) -> usize {
        self.m.rows() / 2
    }
}

/// `M(S) = 1/2 J (S + I)(S - I)^{-1}`.
pub fn cayley<T: Real>(s: &SympMatrix<T>) -> Result<CayleyMatrix<T>> {
    let n2 = 2 * s.n();
    let id = RMat::identity(n2);
    let inv = (&s.m - &id).inverse_checked("S - I", T::lit(SP0_DET_TOL))?;
    let m = (&(&j_matrix::<T>(s.n()) * &(&s.m + &id)) * &inv).scale(T::lit(0.5));
    Ok(CayleyMatrix { m: m.symmetrize() })
}

/// `S = (M - 1/2 J)^{-1}(M + 1/2 J)`.
pub fn cayley_inverse<T: Real>(m: &CayleyMatrix<T>) -> Result<SympMatrix<T>> {
    let hj = j_matrix::<T>(m.n()).scale(T::lit(0.5));
    let inv = (&m.m - &hj).inverse_checked("M - J/2", T::lit(SP0_DET_TOL))?;
    Ok(SympMatrix { n: m.n(), m: &inv * &(&m.m + &hj) })
}

/// `M(S S2)` from `M(S)` and `M(S2)`:
/// `M(S) + (S^T - I)^{-1} J (M(S) + M(S2))^{-1} J (S - I)^{-1}`.
pub fn cayley_compose<T: Real>(s: &SympMatrix<T>, s2: &SympMatrix<T>) -> Result<CayleyMatrix<T>> {
    let prod = s.compose(s2);
    let det = prod.det_minus_identity();
    if det.abs() <= T::lit(SP0_DET_TOL) {
        return Err(LabError::Singular { what: "S S2 - I".into(), det: det.to_f64_lossy() });
    }
    let m1 = cayley(s)?;
    let m2 = cayley(s2)?;
    let id = RMat::identity(2 * s.n());
    let j = j_matrix::<T>(s.n());
    let sum_inv = (&m1.m + &m2.m).inverse_checked("M(S) + M(S2)", T::lit(SP0_DET_TOL))?;
    let left = (&s.m.transpose() - &id).inverse_checked("S^T - I", T::lit(SP0_DET_TOL))?;
    let right = (&s.m - &id).inverse_checked("S - I", T::lit(SP0_DET_TOL))?;
    let corr = &(&(&(&left * &j) * &sum_inv) * &j) * &right;
    Ok(CayleyMatrix { m: (&m1.m + &corr).symmetrize() })
}

/// Signature (#positive - #negative eigenvalues) of a symmetric matrix.
pub fn signature<T: Real>(m: &RMat<T>) -> i32 {
    let (ev, _) = m.symmetric_eigen();
    let tol = T::epsilon() * T::lit(64.0) * (T::one() + m.max_abs());
    ev.iter().map(|&e| if e > tol { 1 } else if e < -tol { -1 } else { 0 }).sum()
}

/// Named generators of `Sp(2n, R)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator<T> {
    J,
    /// `V_{-P} = [[I, 0], [P, I]]` for symmetric `P`.
    V(RMat<T>),
    /// `M_L = [[L^{-1}, 0], [0, L^T]]` for invertible `L`.
    M(RMat<T>),
}

impl<T: Real> Generator<T> {
    pub fn v_scalar(p: T) -> Self {
        Generator::V(RMat::from_rows(&[&[p]]))
    }

    pub fn m_scalar(l: T) -> Self {
        Generator::M(RMat::from_rows(&[&[l]]))
    }

    pub fn label(&self) -> String {
        match self {
            Generator::J => "J".into(),
            Generator::V(p) if p.rows() == 1 => format!("V({})", p[(0, 0)]),
            Generator::M(l) if l.rows() == 1 => format!("M({})", l[(0, 0)]),
            Generator::V(_) => "V(P)".into(),
            Generator::M(_) => "M(L)".into(),
        }
    }
}

/// Symplectic matrix of a generator.
pub fn generator<T: Real>(kind: &Generator<T>, n: usize) -> Result<SympMatrix<T>> {
    let block = |b: &RMat<T>| -> Result<()> {
        if b.rows() != n || b.cols() != n {
            return Err(LabError::Dimension(format!("generator block must be {n}x{n}")));
        }
        Ok(())
    };
    let m = match kind {
        Generator::J => j_matrix(n),
        Generator::V(p) => {
            block(p)?;
            if !p.is_symmetric(membership_tol::<T>()) {
                return Err(LabError::Validation("chirp matrix P must be symmetric".into()));
            }
            RMat::from_fn(2 * n, 2 * n, |i, j| {
                if i == j {
                    T::one()
                } else if i >= n && j < n {
                    p[(i - n, j)]
                } else {
                    T::zero()
                }
            })
        }
        Generator::M(l) => {
            block(l)?;
            let linv = l.inverse_checked("L", T::zero()).map_err(|_| LabError::Validation("scaling matrix L must be invertible".into()))?;
            RMat::from_fn(2 * n, 2 * n, |i, j| {
                if i < n && j < n {
                    linv[(i, j)]
                } else if i >= n && j >= n {
                    l[(j - n, i - n)]
                } else {
                    T::zero()
                }
            })
        }
    };
    Ok(SympMatrix { n, m })
}

/// Random element of `Sp_(0)`: `exp(J A)` with `A` symmetric, entries uniform in `[-1, 1]`,
/// rejected while `|det(S - I)| < 1e-6`.
pub fn random_sp0<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> SympMatrix<T> {
    let j = j_matrix::<T>(n);
    loop {
        let mut a = RMat::<T>::zeros(2 * n, 2 * n);
        for i in 0..2 * n {
            for k in i..2 * n {
                let v = T::lit(rng.gen_range(-1.0..=1.0));
                a[(i, k)] = v;
                a[(k, i)] = v;
            }
        }
        let s = SympMatrix { n, m: (&j * &a).expm() };
        if s.det_minus_identity().abs() >= T::lit(SAMPLER_DET_TOL) {
            return s;
        }
    }
}
