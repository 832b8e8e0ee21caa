//! Sparse Laurent polynomials in q^{1/N} and t over ℚ.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

/// Exponent pair (q-exponent, t-exponent), ordered lexicographically with q first.
pub type Mono = (Rational64, i64);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, BigRational>,
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    (a.0 + b.0, a.1 + b.1)
}

pub fn mono_div(a: &Mono, b: &Mono) -> Mono {
    (a.0 - b.0, a.1 - b.1)
}

pub const ONE_MONO: Mono = (Rational64::new_raw(0, 1), 0);

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(ONE_MONO, c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(m: Mono, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn q_pow(e: Rational64) -> Self {
        Self::monomial((e, 0), BigRational::one())
    }

    pub fn t_pow(e: i64) -> Self {
        Self::monomial((Rational64::zero(), e), BigRational::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&ONE_MONO).is_some_and(|c| c.is_one())
    }

    /// Some(c) when the polynomial is a constant c (including 0).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&ONE_MONO).cloned(),
            _ => None,
        }
    }

    /// Some((m, c)) for a single-term polynomial.
    pub fn as_monomial(&self) -> Option<(Mono, BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c.clone()))
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn trailing(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(*m, c.clone());
        }
        big
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some((m, c)) = o.as_monomial() {
            return self.mul_monomial(&m, &c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return o.mul_monomial(&m, &c);
        }
        let mut r = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        r
    }

    pub fn mul_monomial(&self, m: &Mono, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, v)| (mono_mul(k, m), v * c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        self.mul_monomial(&ONE_MONO, c)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Substitute q ↦ q^{-1}, t ↦ t^{-1} (when `t_too`), else only q.
    pub fn invert_exponents(&self, t_too: bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| ((-a, if t_too { -b } else { *b }), c.clone()))
                .collect(),
        }
    }

    pub fn q_range(&self) -> Option<(Rational64, Rational64)> {
        let lo = self.terms.keys().next()?.0;
        let hi = self.terms.keys().next_back()?.0;
        Some((lo, hi))
    }

    pub fn t_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().map(|m| m.1).min()?;
        let hi = self.terms.keys().map(|m| m.1).max()?;
        Some((lo, hi))
    }

    /// Terms with the given t-exponent, as a polynomial in q alone.
    pub fn t_slice(&self, tdeg: i64) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.1 == tdeg)
                .map(|((a, _), c)| ((*a, 0), c.clone()))
                .collect(),
        }
    }

    /// Terms with the given q-exponent, as a polynomial in t alone.
    pub fn q_slice(&self, qdeg: Rational64) -> Poly {
        Poly {
            terms: self
                .terms
                .range((qdeg, i64::MIN)..=(qdeg, i64::MAX))
                .map(|((_, b), c)| ((Rational64::zero(), *b), c.clone()))
                .collect(),
        }
    }

    /// Distinct q-exponents, ascending.
    pub fn q_exponents(&self) -> Vec<Rational64> {
        let mut v: Vec<Rational64> = self.terms.keys().map(|m| m.0).collect();
        v.dedup();
        v
    }

    /// Least common denominator of the q-exponents.
    pub fn q_denominator(&self) -> i64 {
        self.terms.keys().fold(1i64, |acc, m| acc.lcm(m.0.denom()))
    }

    /// Exact quotient self / d, or None when d does not divide self.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some((m, c)) = d.as_monomial() {
            let inv = c.recip();
            return Some(Poly {
                terms: self.terms.iter().map(|(k, v)| (mono_div(k, &m), v * &inv)).collect(),
            });
        }
        let (fq, ft) = (self.q_range()?, self.t_range()?);
        let (dq, dt) = (d.q_range()?, d.t_range()?);
        let qbox = (fq.0 - dq.0, fq.1 - dq.1);
        let tbox = (ft.0 - dt.0, ft.1 - dt.1);
        if qbox.0 > qbox.1 || tbox.0 > tbox.1 {
            return None;
        }
        let (dlm, dlc) = d.leading().map(|(m, c)| (*m, c.clone()))?;
        let dlc_inv = dlc.recip();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
            let m = mono_div(&rm, &dlm);
            if m.0 < qbox.0 || m.0 > qbox.1 || m.1 < tbox.0 || m.1 > tbox.1 {
                return None;
            }
            let c = rc * &dlc_inv;
            for (k, v) in &d.terms {
                rem.add_term(mono_mul(k, &m), -(v * &c));
            }
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Split off a unit: self = c · q^a t^b · P with P normalized
    /// (minimal q- and t-exponents zero, lex-lowest coefficient one).
    pub fn normalize(&self) -> (BigRational, Mono, Poly) {
        if self.is_zero() {
            return (BigRational::zero(), ONE_MONO, Poly::zero());
        }
        let (qlo, _) = self.q_range().unwrap();
        let (tlo, _) = self.t_range().unwrap();
        let shift = (qlo, tlo);
        let shifted: BTreeMap<Mono, BigRational> =
            self.terms.iter().map(|(k, v)| (mono_div(k, &shift), v.clone())).collect();
        let c = shifted.values().next().unwrap().clone();
        let inv = c.recip();
        let p = Poly { terms: shifted.into_iter().map(|(k, v)| (k, v * &inv)).collect() };
        (c, shift, p)
    }

    /// Substitute a rational value for t, leaving a polynomial in q.
    pub fn eval_t(&self, t: &BigRational) -> Poly {
        let mut r = Poly::zero();
        for ((a, b), c) in &self.terms {
            r.add_term((*a, 0), c * pow_rat(t, *b));
        }
        r
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

pub fn pow_rat(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// The normalized cyclotomic polynomial Φ_d(x) as integer coefficients (Φ_1 = 1 − x).
pub fn cyclotomic(d: u32) -> Vec<i64> {
    // x^d − 1 divided by Φ_e for proper divisors e
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d % e == 0 {
            let f = cyclotomic_monic(e);
            num = div_int_poly(&num, &f);
        }
    }
    if d == 1 {
        vec![1, -1]
    } else {
        num
    }
}

fn cyclotomic_monic(d: u32) -> Vec<i64> {
    let mut c = cyclotomic(d);
    if d == 1 {
        c = vec![-1, 1];
    }
    c
}

fn div_int_poly(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = *b.last().unwrap();
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db] / lead;
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[k + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

pub fn euler_phi(d: u32) -> u32 {
    (1..=d).filter(|k| k.gcd(&d) == 1).count() as u32
}

/// Φ_d evaluated at the monomial m0.
pub fn cyclotomic_at(d: u32, m0: &Mono) -> Poly {
    let coeffs = cyclotomic(d);
    Poly::from_terms(coeffs.iter().enumerate().map(|(k, &c)| {
        let k = k as i64;
        ((m0.0 * Rational64::from(k), m0.1 * k), BigRational::from_integer(BigInt::from(c)))
    }))
}

/// Write a nonzero exponent vector as g · m0 with m0 primitive and "positive"
/// (q-exponent > 0, or q-exponent 0 and t-exponent > 0); returns (m0, g) with g signed.
pub fn primitive_direction(m: &Mono) -> (Mono, i64) {
    let (p, r) = (*m.0.numer(), *m.0.denom());
    let g0 = p.gcd(&m.1);
    let mut m0: Mono = (Rational64::new(p / g0, r), m.1 / g0);
    let mut g = g0;
    if m0.0 < Rational64::zero() || (m0.0.is_zero() && m0.1 < 0) {
        m0 = (-m0.0, -m0.1);
        g = -g;
    }
    (m0, g)
}

fn write_mono(f: &mut fmt::Formatter<'_>, m: &Mono) -> fmt::Result {
    let mut parts = Vec::new();
    if !m.0.is_zero() {
        if m.0.is_one() {
            parts.push("q".to_string());
        } else if m.0.is_integer() {
            parts.push(format!("q^{}", m.0));
        } else {
            parts.push(format!("q^({})", m.0));
        }
    }
    if m.1 != 0 {
        if m.1 == 1 {
            parts.push("t".to_string());
        } else {
            parts.push(format!("t^{}", m.1));
        }
    }
    write!(f, "{}", parts.join("*"))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let unit = *m == ONE_MONO;
            if unit {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_mono(f, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn q() -> Poly {
        Poly::q_pow(Rational64::one())
    }
    fn t() -> Poly {
        Poly::t_pow(1)
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), vec![1, -1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn exact_division() {
        let one = Poly::one();
        let a = one.sub(&q().mul(&t()));
        let b = one.add(&t()).add(&q());
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        assert_eq!(b.div_exact(&a), None);
        let x = one.sub(&q().pow(6));
        assert!(x.div_exact(&cyclotomic_at(3, &(Rational64::one(), 0))).is_some());
        assert!(x.div_exact(&cyclotomic_at(4, &(Rational64::one(), 0))).is_none());
    }

    #[test]
    fn normalization() {
        let p = Poly::from_terms([((Rational64::new(1, 2), 3), r(2)), ((Rational64::new(3, 2), 4), r(-2))]);
        let (c, m, n) = p.normalize();
        assert_eq!(c, r(2));
        assert_eq!(m, (Rational64::new(1, 2), 3));
        assert_eq!(n, Poly::one().sub(&q().mul(&t())));
    }

    #[test]
    fn directions() {
        assert_eq!(primitive_direction(&(Rational64::from(-4), -2)), ((Rational64::from(2), 1), -2));
        assert_eq!(primitive_direction(&(Rational64::new(1, 2), 0)), ((Rational64::new(1, 2), 0), 1));
        assert_eq!(primitive_direction(&(Rational64::zero(), -3)), ((Rational64::zero(), 1), -3));
    }

    #[test]
    fn display() {
        let p = Poly::one().sub(&q().mul(&t()));
        assert_eq!(p.to_string(), "1-q*t");
        let p = Poly::from_terms([((Rational64::new(1, 2), 0), r(3))]);
        assert_eq!(p.to_string(), "3*q^(1/2)");
    }
}
