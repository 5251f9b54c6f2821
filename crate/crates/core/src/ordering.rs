//! Exact noncommutative algebra in `X`, `P` over `Q[tau, c]`, where `c = [X, P] = i/(2 pi)`
//! is a formal central scalar with `conj(c) = -c`. Normal order puts every `X` before
//! every `P` using `P X = X P - c`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    P,
}

pub type Word = Vec<Letter>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn binom(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Element of `Q[tau, c]`, keyed by `(tau power, c power)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coeff(BTreeMap<(u32, u32), BigRational>);

impl Coeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(r: BigRational) -> Self {
        Self::monomial(r, 0, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::rational(q(n))
    }

    /// `r tau^i c^j`.
    pub fn monomial(r: BigRational, tau_pow: u32, c_pow: u32) -> Self {
        let mut m = BTreeMap::new();
        if !r.is_zero() {
            m.insert((tau_pow, c_pow), r);
        }
        Self(m)
    }

    pub fn tau() -> Self {
        Self::monomial(q(1), 1, 0)
    }

    pub fn c() -> Self {
        Self::monomial(q(1), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.0.iter()
    }

    fn add_term(&mut self, key: (u32, u32), r: BigRational) {
        let e = self.0.entry(key).or_insert_with(BigRational::zero);
        *e += r;
        if e.is_zero() {
            self.0.remove(&key);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &o.0 {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|(k, v)| (*k, -v.clone())).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for ((a1, b1), r1) in &self.0 {
            for ((a2, b2), r2) in &o.0 {
                out.add_term((a1 + a2, b1 + b2), r1 * r2);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::int(1), |acc, _| acc.mul(self))
    }

    /// `conj`: `c -> -c`, `tau` real.
    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|(&(t, cp), v)| ((t, cp), if cp % 2 == 1 { -v.clone() } else { v.clone() })).collect())
    }

    /// Substitutes `tau -> 1 - tau`.
    pub fn reflect_tau(&self) -> Self {
        let one_minus = Self::int(1).sub(&Self::tau());
        let mut out = Self::zero();
        for (&(t, cp), v) in &self.0 {
            out = out.add(&one_minus.pow(t as usize).mul(&Self::monomial(v.clone(), 0, cp)));
        }
        out
    }

    /// Substitutes a rational value for `tau`.
    pub fn eval_tau(&self, tau: &BigRational) -> Self {
        let mut out = Self::zero();
        for (&(t, cp), v) in &self.0 {
            let mut pw = BigRational::one();
            for _ in 0..t {
                pw *= tau;
            }
            out.add_term((0, cp), v * pw);
        }
        out
    }

    /// `int_0^1 (.) dtau`, using `int tau^j = 1/(j + 1)`.
    pub fn integrate_tau(&self) -> Self {
        let mut out = Self::zero();
        for (&(t, cp), v) in &self.0 {
            out.add_term((0, cp), v / q(t as i64 + 1));
        }
        out
    }

    /// The coefficient split by `c` power: `c^j -> polynomial in tau`.
    fn by_c_power(&self) -> BTreeMap<u32, Vec<(u32, BigRational)>> {
        let mut m: BTreeMap<u32, Vec<(u32, BigRational)>> = BTreeMap::new();
        for (&(t, cp), v) in &self.0 {
            m.entry(cp).or_default().push((t, v.clone()));
        }
        m
    }
}

/// Noncommutative polynomial: words with `Q[tau, c]` coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NCPoly {
    terms: BTreeMap<Word, Coeff>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Vec::new(), Coeff::int(1))
    }

    pub fn term(word: Word, coeff: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(word, coeff);
        p
    }

    /// Parses a word over `{X, P}`, e.g. `"PXP"`.
    pub fn word(s: &str) -> Option<Self> {
        let w: Option<Word> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'X' => Some(Letter::X),
                'P' => Some(Letter::P),
                _ => None,
            })
            .collect();
        w.map(|w| Self::term(w, Coeff::int(1)))
    }

    /// `X^m P^l`.
    pub fn normal_monomial(m: usize, l: usize) -> Self {
        Self::term(letters(m, l), Coeff::int(1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[Letter]) -> Coeff {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, word: Word, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(word.clone()).or_default();
        *e = e.add(&coeff);
        if e.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Coeff::int(-1)))
    }

    pub fn scale(&self, s: &Coeff) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.mul(s));
        }
        out
    }

    /// Concatenation product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1.mul(c2));
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|w| is_normal_word(w))
    }

    /// Formal adjoint: reversed words, conjugated coefficients, then normal order.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut r = w.clone();
            r.reverse();
            out.add_term(r, c.conj());
        }
        normal_order(&out)
    }
}

fn letters(m: usize, l: usize) -> Word {
    let mut w = vec![Letter::X; m];
    w.extend(std::iter::repeat_n(Letter::P, l));
    w
}

fn is_normal_word(w: &[Letter]) -> bool {
    !w.windows(2).any(|p| p[0] == Letter::P && p[1] == Letter::X)
}

/// Rewrites every word into `X^a P^b` form with `P X = X P - c`.
pub fn normal_order(p: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    let mut work: Vec<(Word, Coeff)> = p.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((w, c)) = work.pop() {
        match w.windows(2).position(|pr| pr[0] == Letter::P && pr[1] == Letter::X) {
            None => out.add_term(w, c),
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                let mut dropped = w[..i].to_vec();
                dropped.extend_from_slice(&w[i + 2..]);
                work.push((swapped, c.clone()));
                work.push((dropped, c.mul(&Coeff::c()).neg()));
            }
        }
    }
    out
}

fn power(letter: Letter, k: usize) -> NCPoly {
    NCPoly::term(vec![letter; k], Coeff::int(1))
}

/// `2^{-l} sum_k C(l, k) P^{l-k} X^m P^k`, normal ordered.
pub fn order_weyl(m: usize, l: usize) -> NCPoly {
    let mut s = NCPoly::zero();
    for k in 0..=l {
        let t = power(Letter::P, l - k).mul(&power(Letter::X, m)).mul(&power(Letter::P, k));
        s = s.add(&t.scale(&Coeff::rational(BigRational::from_integer(binom(l, k)))));
    }
    let norm = BigRational::new(BigInt::one(), BigInt::from(2).pow(l as u32));
    normal_order(&s.scale(&Coeff::rational(norm)))
}

/// `sum_k C(l, k) (1 - tau)^k tau^{l-k} P^k X^m P^{l-k}`, normal ordered, `tau` formal.
pub fn order_tau(m: usize, l: usize) -> NCPoly {
    let one_minus = Coeff::int(1).sub(&Coeff::tau());
    let mut s = NCPoly::zero();
    for k in 0..=l {
        let w = one_minus.pow(k).mul(&Coeff::tau().pow(l - k)).mul(&Coeff::rational(BigRational::from_integer(binom(l, k))));
        let t = power(Letter::P, k).mul(&power(Letter::X, m)).mul(&power(Letter::P, l - k));
        s = s.add(&t.scale(&w));
    }
    normal_order(&s)
}

/// `(l + 1)^{-1} sum_k P^{l-k} X^m P^k`, normal ordered.
pub fn order_bj(m: usize, l: usize) -> NCPoly {
    let mut s = NCPoly::zero();
    for k in 0..=l {
        s = s.add(&power(Letter::P, l - k).mul(&power(Letter::X, m)).mul(&power(Letter::P, k)));
    }
    normal_order(&s.scale(&Coeff::rational(BigRational::new(BigInt::one(), BigInt::from(l + 1)))))
}

/// Term-by-term `int_0^1 (.) dtau`.
pub fn average_tau(p: &NCPoly) -> NCPoly {
    p.map_coeffs(Coeff::integrate_tau)
}

/// Substitutes a rational `tau`.
pub fn at_tau(p: &NCPoly, tau: &BigRational) -> NCPoly {
    p.map_coeffs(|c| c.eval_tau(tau))
}

/// Substitutes `tau -> 1 - tau`.
pub fn reflect_tau(p: &NCPoly) -> NCPoly {
    p.map_coeffs(Coeff::reflect_tau)
}

/// `int_0^1 (1 - tau)^k tau^{l-k} dtau = k! (l-k)! / (l+1)!`, both sides exact.
pub fn beta_check(k: usize, l: usize) -> (BigRational, BigRational) {
    let integrand = Coeff::int(1).sub(&Coeff::tau()).pow(k).mul(&Coeff::tau().pow(l - k));
    let lhs = integrand.integrate_tau().0.get(&(0, 0)).cloned().unwrap_or_else(BigRational::zero);
    let fact = |n: usize| (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    (lhs, BigRational::new(fact(k) * fact(l - k), fact(l + 1)))
}

fn render_word(w: &[Letter]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let name = if w[i] == Letter::X { "X" } else { "P" };
        parts.push(if j - i == 1 { name.to_string() } else { format!("{name}^{}", j - i) });
        i = j;
    }
    parts.join(" ")
}

fn render_power(name: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

fn render_tau_poly(terms: &[(u32, BigRational)]) -> String {
    let mut s = String::new();
    for (i, (t, r)) in terms.iter().enumerate() {
        let mag = r.abs();
        let neg = r.is_negative();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let tp = render_power("tau", *t);
        match (mag.is_one(), tp) {
            (true, Some(tp)) => s.push_str(&tp),
            (_, None) => s.push_str(&mag.to_string()),
            (false, Some(tp)) => s.push_str(&format!("{mag} {tp}")),
        }
    }
    s
}

/// Renders e.g. `X^2 P - c X` or `X P^2 + (-2 + 2 tau) c P`. Terms run from longest word
/// to shortest, and by descending `X` degree within a length.
impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut words: Vec<&Word> = self.terms.keys().collect();
        words.sort_by(|a, b| {
            let xa = a.iter().filter(|l| **l == Letter::X).count();
            let xb = b.iter().filter(|l| **l == Letter::X).count();
            b.len().cmp(&a.len()).then(xb.cmp(&xa)).then(a.cmp(b))
        });
        let mut first = true;
        for w in words {
            for (cp, poly) in self.terms[w].by_c_power() {
                let (neg, body) = if poly.len() == 1 {
                    let (t, r) = &poly[0];
                    let mag = r.abs();
                    let mut factors: Vec<String> = Vec::new();
                    if !mag.is_one() {
                        factors.push(mag.to_string());
                    }
                    factors.extend(render_power("tau", *t));
                    (r.is_negative(), factors)
                } else {
                    (false, vec![format!("({})", render_tau_poly(&poly))])
                };
                let mut factors = body;
                factors.extend(render_power("c", cp));
                if !w.is_empty() {
                    factors.push(render_word(w));
                }
                if factors.is_empty() {
                    factors.push("1".into());
                }
                let sep = match (first, neg) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                write!(f, "{sep}{}", factors.join(" "))?;
                first = false;
            }
        }
        Ok(())
    }
}
