use num_traits::{One, Zero};

use crate::error::{LabError, Result};
use crate::gridfield::{symplectic_fourier, Grid1D, PhaseTable};
use crate::scalar::{cis2pi, im, re, Real, C};
use crate::sympcore::SympMatrix;

/// Largest total degree carried by closed-form symbols.
pub const MAX_DEGREE: usize = 4;

/// Complex polynomial in `(x, p)` of total degree at most 4.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2<T> {
    coeffs: [[C<T>; MAX_DEGREE + 1]; MAX_DEGREE + 1],
}

impl<T: Real> Poly2<T> {
    pub fn zero() -> Self {
        Self { coeffs: [[C::<T>::zero(); MAX_DEGREE + 1]; MAX_DEGREE + 1] }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, C::<T>::one())
    }

    /// `c x^a p^b`.
    pub fn monomial(a: usize, b: usize, c: C<T>) -> Self {
        assert!(a + b <= MAX_DEGREE, "degree {} exceeds {MAX_DEGREE}", a + b);
        let mut p = Self::zero();
        p.coeffs[a][b] = c;
        p
    }

    /// Builds from `(a, b, coefficient)` triples.
    pub fn from_terms(terms: &[(usize, usize, C<T>)]) -> Self {
        let mut p = Self::zero();
        for &(a, b, c) in terms {
            assert!(a + b <= MAX_DEGREE, "degree {} exceeds {MAX_DEGREE}", a + b);
            p.coeffs[a][b] += c;
        }
        p
    }

    pub fn coeff(&self, a: usize, b: usize) -> C<T> {
        if a + b > MAX_DEGREE {
            C::<T>::zero()
        } else {
            self.coeffs[a][b]
        }
    }

    /// Nonzero `(a, b, c)` terms.
    pub fn terms(&self) -> Vec<(usize, usize, C<T>)> {
        let mut out = Vec::new();
        for a in 0..=MAX_DEGREE {
            for b in 0..=MAX_DEGREE - a {
                if !self.coeffs[a][b].is_zero() {
                    out.push((a, b, self.coeffs[a][b]));
                }
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms().iter().map(|t| t.0 + t.1).max().unwrap_or(0)
    }

    pub fn eval(&self, x: T, p: T) -> C<T> {
        let mut s = C::<T>::zero();
        let mut xa = T::one();
        for a in 0..=MAX_DEGREE {
            let mut pb = T::one();
            for b in 0..=MAX_DEGREE - a {
                s += self.coeffs[a][b] * (xa * pb);
                pb *= p;
            }
            xa *= x;
        }
        s
    }

    /// Coefficients of `p -> poly(u, p)` for fixed `u`, lowest degree first.
    pub fn in_p(&self, u: T) -> [C<T>; MAX_DEGREE + 1] {
        let mut out = [C::<T>::zero(); MAX_DEGREE + 1];
        for (b, slot) in out.iter_mut().enumerate() {
            let mut ua = T::one();
            for a in 0..=MAX_DEGREE - b {
                *slot += self.coeffs[a][b] * ua;
                ua *= u;
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut p = self.clone();
        for row in p.coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c = c.conj();
            }
        }
        p
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut p = self.clone();
        for row in p.coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c *= s;
            }
        }
        p
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a1, b1, c1) in self.terms() {
            for (a2, b2, c2) in other.terms() {
                assert!(a1 + a2 + b1 + b2 <= MAX_DEGREE, "product degree exceeds {MAX_DEGREE}");
                out.coeffs[a1 + a2][b1 + b2] += c1 * c2;
            }
        }
        out
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b, c) in other.terms() {
            out.coeffs[a][b] += c;
        }
        out
    }

    /// `z -> poly(S z)` with `S = [[s00, s01], [s10, s11]]`.
    pub fn compose_linear(&self, s: [[T; 2]; 2]) -> Self {
        let lx = Self::from_terms(&[(1, 0, re(s[0][0])), (0, 1, re(s[0][1]))]);
        let lp = Self::from_terms(&[(1, 0, re(s[1][0])), (0, 1, re(s[1][1]))]);
        let mut out = Self::zero();
        for (a, b, c) in self.terms() {
            let mut term = Self::monomial(0, 0, c);
            for _ in 0..a {
                term = term.mul(&lx);
            }
            for _ in 0..b {
                term = term.mul(&lp);
            }
            out = out.add(&term);
        }
        out
    }
}

/// `a(z) = poly(z) e^{i pi Q z.z + 2 pi i b.z + c}` with complex symmetric `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm<T> {
    pub q: [[C<T>; 2]; 2],
    pub b: [C<T>; 2],
    pub c: C<T>,
    pub poly: Poly2<T>,
}

impl<T: Real> ClosedForm<T> {
    pub fn exponent(&self, x: T, p: T) -> C<T> {
        let quad = self.q[0][0] * (x * x) + self.q[0][1] * (T::lit(2.0) * x * p) + self.q[1][1] * (p * p);
        im(T::PI()) * quad + im(T::TAU()) * (self.b[0] * x + self.b[1] * p) + self.c
    }

    pub fn eval(&self, x: T, p: T) -> C<T> {
        self.poly.eval(x, p) * self.exponent(x, p).exp()
    }

    /// No exponential part beyond the constant: a pure polynomial symbol.
    pub fn is_polynomial(&self) -> bool {
        self.q.iter().flatten().all(|v| v.is_zero()) && self.b.iter().all(|v| v.is_zero())
    }

    /// Gaussian decay in `p` (`Im Q_22 > 0`).
    pub fn decays_in_p(&self) -> bool {
        self.q[1][1].im > T::zero()
    }
}

/// Phase-space symbol: closed form or tabulated on the lattice.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolSpec<T> {
    ClosedForm(ClosedForm<T>),
    Tabulated(PhaseTable<T>),
}

impl<T: Real> SymbolSpec<T> {
    /// `poly(z) e^{-pi (a11 x^2 + 2 a12 x p + a22 p^2) + 2 pi i (b1 x + b2 p)}` with real `A > 0`.
    pub fn gaussian_poly(a: [[T; 2]; 2], b: [T; 2], poly: Poly2<T>) -> Self {
        SymbolSpec::ClosedForm(ClosedForm {
            q: [[im(a[0][0]), im(a[0][1])], [im(a[1][0]), im(a[1][1])]],
            b: [re(b[0]), re(b[1])],
            c: C::<T>::zero(),
            poly,
        })
    }

    pub fn gaussian(a: [[T; 2]; 2], b: [T; 2]) -> Self {
        Self::gaussian_poly(a, b, Poly2::one())
    }

    /// `e^{-pi (x^2 + p^2)}`.
    pub fn standard_gaussian() -> Self {
        Self::gaussian([[T::one(), T::zero()], [T::zero(), T::one()]], [T::zero(), T::zero()])
    }

    pub fn polynomial(poly: Poly2<T>) -> Self {
        SymbolSpec::ClosedForm(ClosedForm { q: [[C::<T>::zero(); 2]; 2], b: [C::<T>::zero(); 2], c: C::<T>::zero(), poly })
    }

    /// `x^a p^b`.
    pub fn monomial(a: usize, b: usize) -> Self {
        Self::polynomial(Poly2::monomial(a, b, C::<T>::one()))
    }

    pub fn scaled(&self, s: C<T>) -> Self {
        match self {
            SymbolSpec::ClosedForm(cf) => SymbolSpec::ClosedForm(ClosedForm { poly: cf.poly.scale(s), ..cf.clone() }),
            SymbolSpec::Tabulated(t) => SymbolSpec::Tabulated(PhaseTable { grid: t.grid, data: t.data.mapv(|v| v * s) }),
        }
    }

    pub fn closed_form(&self) -> Option<&ClosedForm<T>> {
        match self {
            SymbolSpec::ClosedForm(cf) => Some(cf),
            SymbolSpec::Tabulated(_) => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.closed_form().is_some_and(|cf| cf.is_polynomial())
    }

    /// Pointwise value; tabulated symbols only answer on lattice points.
    pub fn eval(&self, x: T, p: T) -> Result<C<T>> {
        match self {
            SymbolSpec::ClosedForm(cf) => Ok(cf.eval(x, p)),
            SymbolSpec::Tabulated(t) => {
                let g = t.grid;
                let (j, ej) = g.nearest_shift(x);
                let kf = (p / g.dp()).round();
                let ek = p - kf * g.dp();
                let tol = T::lit(1e-9) * g.dx();
                let h = (g.n() / 2) as i64;
                let (j, k) = (j + h, kf.to_i64().unwrap_or(i64::MAX) + h);
                if ej.abs() > tol || ek.abs() > tol || j < 0 || k < 0 || j >= g.n() as i64 || k >= g.n() as i64 {
                    return Err(LabError::Domain(format!("({x}, {p}) is not a lattice point")));
                }
                Ok(t.data[(j as usize, k as usize)])
            }
        }
    }

    /// Complex conjugate symbol.
    pub fn conj(&self) -> Self {
        match self {
            SymbolSpec::ClosedForm(cf) => SymbolSpec::ClosedForm(ClosedForm {
                q: [[-cf.q[0][0].conj(), -cf.q[0][1].conj()], [-cf.q[1][0].conj(), -cf.q[1][1].conj()]],
                b: [-cf.b[0].conj(), -cf.b[1].conj()],
                c: cf.c.conj(),
                poly: cf.poly.conj(),
            }),
            SymbolSpec::Tabulated(t) => SymbolSpec::Tabulated(PhaseTable { grid: t.grid, data: t.data.mapv(|v| v.conj()) }),
        }
    }

    /// `z -> a(S z)` for a closed-form symbol (n = 1).
    pub fn compose_linear(&self, s: &SympMatrix<T>) -> Result<Self> {
        let cf = self
            .closed_form()
            .ok_or_else(|| LabError::Validation("composition with a linear map needs a closed-form symbol".into()))?;
        if s.n() != 1 {
            return Err(LabError::Dimension("symbols live on a 2-D phase space".into()));
        }
        let m = [[s.get(0, 0), s.get(0, 1)], [s.get(1, 0), s.get(1, 1)]];
        let mut q = [[C::<T>::zero(); 2]; 2];
        for (i, row) in q.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                for k in 0..2 {
                    for l in 0..2 {
                        *v += cf.q[k][l] * (m[k][i] * m[l][j]);
                    }
                }
            }
        }
        let b = [cf.b[0] * m[0][0] + cf.b[1] * m[1][0], cf.b[0] * m[0][1] + cf.b[1] * m[1][1]];
        Ok(SymbolSpec::ClosedForm(ClosedForm { q, b, c: cf.c, poly: cf.poly.compose_linear(m) }))
    }

    /// Samples on the phase lattice.
    pub fn tabulate(&self, grid: &Grid1D<T>) -> Result<PhaseTable<T>> {
        match self {
            SymbolSpec::ClosedForm(cf) => Ok(PhaseTable::from_fn(*grid, |x, p| cf.eval(x, p))),
            SymbolSpec::Tabulated(t) if t.grid == *grid => Ok(t.clone()),
            SymbolSpec::Tabulated(_) => Err(LabError::Dimension("tabulated symbol lives on another grid".into())),
        }
    }

    /// Twisted symbol `a_sigma` on the lattice.
    pub fn twisted(&self, grid: &Grid1D<T>) -> Result<PhaseTable<T>> {
        Ok(symplectic_fourier(&self.tabulate(grid)?))
    }
}

/// `e^{2 pi i (b1 x + b2 p)}` for real `b`, a convenience for tests and signals.
pub fn plane_wave<T: Real>(b: [T; 2], x: T, p: T) -> C<T> {
    cis2pi(b[0] * x + b[1] * p)
}
