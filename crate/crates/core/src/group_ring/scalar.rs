//! Elements of ℚ(q^{1/2e}, t) with factored denominators.
//!
//! A scalar is `num / ∏ f_i^{k_i}` where each f_i is a normalized polynomial
//! (minimal exponents zero, lowest coefficient one). Denominators built from
//! binomials 1 − q^a t^b are split into cyclotomic pieces Φ_d(m0), which are
//! irreducible, so cancellation by trial division keeps the form reduced.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed};

use super::poly::{cyclotomic_at, euler_phi, mono_div, primitive_direction, Mono, Poly, ONE_MONO};

#[derive(Debug, Clone, Default)]
pub struct QTScalar {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl PartialEq for QTScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.sub(other).is_zero()
    }
}
impl Eq for QTScalar {}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Factor a normalized polynomial into cyclotomic pieces in monomials where possible,
/// returning those factors and the leftover normalized cofactor.
pub(crate) fn peel_cyclotomic(p: &Poly) -> (Vec<Poly>, Poly) {
    let mut rest = p.clone();
    let mut found = Vec::new();
    if rest.len() <= 1 {
        return (found, rest);
    }
    // binomial fast path: 1 − c·m with c = 1 factors completely
    let mut dirs: Vec<(Mono, i64)> = Vec::new();
    let monos: Vec<Mono> = rest.terms().map(|(m, _)| *m).collect();
    for a in &monos {
        for b in &monos {
            if a < b {
                let (m0, g) = primitive_direction(&mono_div(b, a));
                let g = g.abs();
                if let Some(e) = dirs.iter_mut().find(|(d, _)| *d == m0) {
                    e.1 = e.1.max(g);
                } else {
                    dirs.push((m0, g));
                }
            }
        }
    }
    dirs.sort();
    for (m0, span) in dirs {
        let max_d = (2 * span * span + 2).min(400) as u32;
        for d in 1..=max_d {
            if euler_phi(d) as i64 > span {
                continue;
            }
            let f = cyclotomic_at(d, &m0).normalize().2;
            while rest.len() > 1 {
                match rest.div_exact(&f) {
                    Some(qq) => {
                        found.push(f.clone());
                        rest = qq.normalize().2;
                    }
                    None => break,
                }
            }
        }
    }
    (found, rest)
}

impl QTScalar {
    pub fn zero() -> Self {
        QTScalar { num: Poly::zero(), den: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Poly::from_int(n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        QTScalar { num: p, den: BTreeMap::new() }
    }

    pub fn q_pow(e: Rational64) -> Self {
        Self::from_poly(Poly::q_pow(e))
    }

    pub fn t_pow(e: i64) -> Self {
        Self::from_poly(Poly::t_pow(e))
    }

    pub fn q() -> Self {
        Self::q_pow(Rational64::one())
    }

    pub fn t() -> Self {
        Self::t_pow(1)
    }

    /// c · q^a t^b
    pub fn monomial(a: Rational64, b: i64, c: BigRational) -> Self {
        Self::from_poly(Poly::monomial((a, b), c))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &BTreeMap<Poly, u32> {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        let mut d = Poly::one();
        for (f, k) in &self.den {
            d = d.mul(&f.pow(*k));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Build num / den from polynomials, factoring and cancelling.
    pub fn from_fraction(num: Poly, den: &Poly) -> Self {
        Self::from_poly(num).mul(&Self::from_poly(den.clone()).inv())
    }

    fn reduce_with(mut num: Poly, mut den: BTreeMap<Poly, u32>, candidates: &[Poly]) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        for f in candidates {
            while let Some(k) = den.get(f).copied() {
                match num.div_exact(f) {
                    Some(qq) => {
                        num = qq;
                        if k == 1 {
                            den.remove(f);
                        } else {
                            den.insert(f.clone(), k - 1);
                        }
                    }
                    None => break,
                }
            }
        }
        QTScalar { num, den }
    }

    pub fn add(&self, o: &QTScalar) -> QTScalar {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            let cands: Vec<Poly> = self.den.keys().cloned().collect();
            return Self::reduce_with(num, self.den.clone(), &cands);
        }
        let mut l = self.den.clone();
        for (f, k) in &o.den {
            let e = l.entry(f.clone()).or_insert(0);
            *e = (*e).max(*k);
        }
        let cofactor = |den: &BTreeMap<Poly, u32>| {
            let mut p = Poly::one();
            for (f, k) in &l {
                let have = den.get(f).copied().unwrap_or(0);
                if *k > have {
                    p = p.mul(&f.pow(k - have));
                }
            }
            p
        };
        let num = self.num.mul(&cofactor(&self.den)).add(&o.num.mul(&cofactor(&o.den)));
        let cands: Vec<Poly> = l.keys().cloned().collect();
        Self::reduce_with(num, l, &cands)
    }

    pub fn neg(&self) -> QTScalar {
        QTScalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &QTScalar) -> QTScalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QTScalar) -> QTScalar {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_empty() && o.den.is_empty() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        // cancel self.num against o.den and o.num against self.den
        let a = Self::reduce_with(self.num.clone(), o.den.clone(), &o.den.keys().cloned().collect::<Vec<_>>());
        let b = Self::reduce_with(o.num.clone(), self.den.clone(), &self.den.keys().cloned().collect::<Vec<_>>());
        let mut den = a.den;
        for (f, k) in b.den {
            *den.entry(f).or_insert(0) += k;
        }
        QTScalar { num: a.num.mul(&b.num), den }
    }

    pub fn scale(&self, c: &BigRational) -> QTScalar {
        QTScalar { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiply by c · q^a t^b (no reduction needed).
    pub fn mul_monomial(&self, m: &Mono, c: &BigRational) -> QTScalar {
        QTScalar { num: self.num.mul_monomial(m, c), den: self.den.clone() }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> QTScalar {
        assert!(!self.is_zero(), "inverse of zero");
        let (c, shift, p) = self.num.normalize();
        let (mut factors, rest) = peel_cyclotomic(&p);
        if !rest.is_one() {
            factors.push(rest);
        }
        let mut den = BTreeMap::new();
        for f in factors {
            *den.entry(f).or_insert(0) += 1;
        }
        // numerator: product of old denominator factors, over c·q^a t^b
        let mut num = Poly::one();
        for (f, k) in &self.den {
            num = num.mul(&f.pow(*k));
        }
        let num = num.mul_monomial(&(-shift.0, -shift.1), &c.recip());
        QTScalar { num, den }
    }

    pub fn div(&self, o: &QTScalar) -> QTScalar {
        self.mul(&o.inv())
    }

    pub fn pow(&self, k: u32) -> QTScalar {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// q ↦ q^{-1}, t ↦ t^{-1}.
    pub fn star(&self) -> QTScalar {
        self.invert_exponents(true)
    }

    /// q ↦ q^{-1} with t fixed.
    pub fn star_q(&self) -> QTScalar {
        self.invert_exponents(false)
    }

    fn invert_exponents(&self, t_too: bool) -> QTScalar {
        let mut num = self.num.invert_exponents(t_too);
        let mut den = BTreeMap::new();
        for (f, k) in &self.den {
            let g = f.invert_exponents(t_too);
            let (c, shift, n) = g.normalize();
            // 1/g = 1/(c m n) → numerator gets (c m)^{-k}
            let inv = pow_big(&c.recip(), *k);
            let m: Mono = (-shift.0 * Rational64::from(*k as i64), -shift.1 * *k as i64);
            num = num.mul_monomial(&m, &inv);
            *den.entry(n).or_insert(0) += *k;
        }
        QTScalar { num, den }
    }

    /// Constant-rational value if the scalar is a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Smallest common denominator of the q-exponents appearing anywhere.
    pub fn q_denominator(&self) -> i64 {
        use num_integer::Integer;
        self.den.keys().fold(self.num.q_denominator(), |a, f| a.lcm(&f.q_denominator()))
    }

    /// Substitute q ↦ q^k for an integer k > 0 (used to clear fractional exponents).
    pub fn q_rescale(&self, k: i64) -> QTScalar {
        let sc = |p: &Poly| Poly::from_terms(p.terms().map(|(m, c)| ((m.0 * Rational64::from(k), m.1), c.clone())));
        let num = sc(&self.num);
        let mut out = QTScalar::from_poly(num);
        for (f, e) in &self.den {
            let g = QTScalar::from_poly(sc(f)).inv().pow(*e);
            out = out.mul(&g);
        }
        out
    }

    /// Limit t → 0; None on a pole. The result has no t.
    pub fn limit_t_zero(&self) -> Option<QTScalar> {
        self.limit(false)
    }

    /// Limit t → ∞; None on a pole. The result has no t.
    pub fn limit_t_infinity(&self) -> Option<QTScalar> {
        self.limit(true)
    }

    fn limit(&self, infinity: bool) -> Option<QTScalar> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let pick = |p: &Poly| -> (i64, Poly) {
            let (lo, hi) = p.t_range().unwrap();
            let d = if infinity { hi } else { lo };
            (d, p.t_slice(d))
        };
        let (dn, pn) = pick(&self.num);
        let mut dd = 0i64;
        let mut lead_den = QTScalar::one();
        for (f, k) in &self.den {
            let (d, p) = pick(f);
            dd += d * *k as i64;
            lead_den = lead_den.mul(&QTScalar::from_poly(p).pow(*k));
        }
        // value ~ t^{dn − dd} · pn / lead_den
        let diff = dn - dd;
        let vanish = if infinity { diff < 0 } else { diff > 0 };
        let pole = if infinity { diff > 0 } else { diff < 0 };
        if pole {
            None
        } else if vanish {
            Some(Self::zero())
        } else {
            Some(QTScalar::from_poly(pn).div(&lead_den))
        }
    }

    /// Evaluate at a rational t, leaving a function of q. None if a denominator vanishes.
    pub fn eval_t(&self, t: &BigRational) -> Option<QTScalar> {
        let mut out = QTScalar::from_poly(self.num.eval_t(t));
        for (f, k) in &self.den {
            let v = f.eval_t(t);
            if v.is_zero() {
                return None;
            }
            out = out.div(&QTScalar::from_poly(v).pow(*k));
        }
        Some(out)
    }

    /// True when no t appears.
    pub fn is_t_free(&self) -> bool {
        let free = |p: &Poly| p.terms().all(|(m, _)| m.1 == 0);
        free(&self.num) && self.den.keys().all(free)
    }

    pub fn sign_negative(&self) -> bool {
        self.num.leading().is_some_and(|(_, c)| c.is_negative()) && self.num.len() == 1
    }
}

fn pow_big(x: &BigRational, k: u32) -> BigRational {
    num_traits::pow(x.clone(), k as usize)
}

impl From<i64> for QTScalar {
    fn from(n: i64) -> Self {
        QTScalar::from_int(n)
    }
}

impl fmt::Display for QTScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap_num = self.num.len() > 1 && !self.den.is_empty();
        if wrap_num {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.is_empty() {
            return Ok(());
        }
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(p, k)| if *k == 1 { format!("({p})") } else { format!("({p})^{k}") })
            .collect();
        if parts.len() == 1 {
            write!(f, "/{}", parts[0])
        } else {
            write!(f, "/({})", parts.join("*"))
        }
    }
}

impl QTScalar {
    /// Pretty form with the leading sign pulled out, for use inside sums.
    pub fn is_negative_monomial(&self) -> bool {
        self.den.is_empty() && self.sign_negative()
    }

    pub fn one_minus(m: Mono) -> QTScalar {
        QTScalar::from_poly(Poly::one().sub(&Poly::monomial(m, BigRational::one())))
    }

    pub fn rational(n: i64, d: i64) -> QTScalar {
        QTScalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn int(n: i64) -> QTScalar {
        QTScalar::from_rational(rat(n))
    }

    pub const UNIT: Mono = ONE_MONO;
}
