//! Truncated power series in q with coefficients in ℚ(t).
//!
//! Exponents are rationals and may be negative. A series either is exact (a
//! finite sum) or known through some order N, meaning every coefficient at
//! an exponent ≤ N is correct.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use super::poly::Poly;
use super::ratfn::RatFn;
use super::scalar::QTScalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedQSeries {
    terms: BTreeMap<Rational64, RatFn>,
    /// None for an exact (finite) series.
    order: Option<Rational64>,
}

fn min_order(a: Option<Rational64>, b: Option<Rational64>) -> Option<Rational64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl TruncatedQSeries {
    pub fn zero_exact() -> Self {
        TruncatedQSeries { terms: BTreeMap::new(), order: None }
    }

    pub fn zero(order: Rational64) -> Self {
        TruncatedQSeries { terms: BTreeMap::new(), order: Some(order) }
    }

    pub fn constant(c: RatFn) -> Self {
        let mut s = Self::zero_exact();
        s.add_term(Rational64::zero(), c);
        s
    }

    pub fn one() -> Self {
        Self::constant(RatFn::one())
    }

    pub fn monomial(e: Rational64, c: RatFn) -> Self {
        let mut s = Self::zero_exact();
        s.add_term(e, c);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rational64, RatFn)>, order: Option<Rational64>) -> Self {
        let mut s = TruncatedQSeries { terms: BTreeMap::new(), order };
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    fn add_term(&mut self, e: Rational64, c: RatFn) {
        if c.is_zero() || self.order.is_some_and(|n| e > n) {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn order(&self) -> Option<Rational64> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational64, &RatFn)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Rational64) -> RatFn {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational64> {
        self.terms.keys().next().copied()
    }

    /// True when all known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, n: Rational64) -> Self {
        let order = Some(self.order.map_or(n, |o| o.min(n)));
        TruncatedQSeries {
            terms: self.terms.range(..=order.unwrap()).map(|(e, c)| (*e, c.clone())).collect(),
            order,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = min_order(self.order, o.order);
        let mut r = TruncatedQSeries { terms: BTreeMap::new(), order };
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        TruncatedQSeries { terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(), order: self.order }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &RatFn) -> Self {
        if c.is_zero() {
            return TruncatedQSeries { terms: BTreeMap::new(), order: self.order };
        }
        TruncatedQSeries { terms: self.terms.iter().map(|(e, x)| (*e, x.mul(c))).collect(), order: self.order }
    }

    pub fn shift(&self, e: Rational64) -> Self {
        TruncatedQSeries {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
            order: self.order.map(|o| o + e),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let va = self.valuation();
        let vb = o.valuation();
        let order = match (va, vb) {
            (Some(va), Some(vb)) => min_order(self.order.map(|n| n + vb), o.order.map(|n| n + va)),
            _ => {
                if (self.is_zero() && self.is_exact()) || (o.is_zero() && o.is_exact()) {
                    return Self::zero_exact();
                }
                // a ∈ O(q^{na}), b of valuation vb (or in O(q^{nb})): known zero through na + vb
                let bound = |s: &Self, other: &Self| -> Option<Rational64> {
                    let n = s.order?;
                    Some(n + other.valuation().or(other.order)?)
                };
                let order = [bound(self, o), bound(o, self)].into_iter().flatten().min();
                return TruncatedQSeries { terms: BTreeMap::new(), order };
            }
        };
        let mut r = TruncatedQSeries { terms: BTreeMap::new(), order };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea + eb;
                if order.is_some_and(|n| e > n) {
                    // terms of o are sorted; the rest of this row is beyond the bound
                    break;
                }
                r.add_term(e, ca.mul(cb));
            }
        }
        r
    }

    fn unit(&self) -> Rational64 {
        let l = self.terms.keys().fold(1i64, |a, e| a.lcm(e.denom()));
        Rational64::new(1, l)
    }

    /// Multiplicative inverse through order `target` (or the best the input allows).
    pub fn inv(&self, target: Rational64) -> Result<Self> {
        let v = self.valuation().ok_or(Error::QPole)?;
        let h0 = self.terms[&v].clone();
        if h0.is_zero() {
            return Err(Error::QPole);
        }
        let h0_inv = h0.inv();
        let order = match self.order {
            Some(o) => target.min(o - v - v),
            None => target,
        };
        let u = self.unit();
        let span = order + v; // exponents of the normalized inverse run over 0..=span
        let mut g: Vec<RatFn> = vec![h0_inv.clone()];
        let mut k = 1i64;
        while Rational64::from(k) * u <= span {
            let mut acc = RatFn::zero();
            for (e, c) in self.terms.range(v + u..) {
                let j = ((e - v) / u).to_integer();
                if j > k {
                    break;
                }
                let gi = &g[(k - j) as usize];
                if !gi.is_zero() {
                    acc = acc.add(&c.mul(gi));
                }
            }
            g.push(acc.mul(&h0_inv).neg());
            k += 1;
        }
        Ok(TruncatedQSeries::from_terms(
            g.into_iter().enumerate().map(|(k, c)| (Rational64::from(k as i64) * u - v, c)),
            Some(order),
        ))
    }

    /// Substitute t = value in every coefficient.
    pub fn eval_t(&self, t: &BigRational) -> Option<BTreeMap<Rational64, BigRational>> {
        self.terms.iter().map(|(e, c)| c.eval(t).map(|v| (*e, v))).collect()
    }
}

fn poly_to_series(p: &Poly) -> TruncatedQSeries {
    let mut s = TruncatedQSeries::zero_exact();
    for e in p.q_exponents() {
        let slice = p.q_slice(e);
        let c = RatFn::from_laurent(slice.terms().map(|(m, c)| (m.1, c.clone())));
        s.add_term(e, c);
    }
    s
}

type FactorCache = Mutex<HashMap<(Poly, Rational64), TruncatedQSeries>>;

fn factor_cache() -> &'static FactorCache {
    static CACHE: OnceLock<FactorCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn inverse_factor(f: &Poly, target: Rational64) -> Result<TruncatedQSeries> {
    let key = (f.clone(), target);
    if let Some(s) = factor_cache().lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let s = poly_to_series(f).inv(target)?;
    factor_cache().lock().unwrap().insert(key, s.clone());
    Ok(s)
}

/// Expand a scalar as a q-series through order n.
pub fn q_expand(c: &QTScalar, n: Rational64) -> Result<TruncatedQSeries> {
    let num = poly_to_series(c.numerator());
    let Some(v) = num.valuation() else {
        return Ok(TruncatedQSeries::zero(n));
    };
    let mut out = num.truncate(n.max(v));
    let need = n - v;
    for (f, k) in c.denominator_factors() {
        let inv = inverse_factor(f, need)?;
        for _ in 0..*k {
            out = out.mul(&inv);
        }
    }
    Ok(out.truncate(n))
}

impl fmt::Display for TruncatedQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*q^{e}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(o) = self.order {
            write!(f, " [through q^{o}]")?;
        }
        Ok(())
    }
}
