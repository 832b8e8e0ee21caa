//! Laurent polynomials Σ c_μ X^μ over a coefficient ring.

use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::scalar::QTScalar;
use crate::error::{Error, Result};
use crate::root_system::{add, neg, Weight};
use crate::weyl_group::WeylElem;

pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for QTScalar {
    fn zero() -> Self {
        QTScalar::zero()
    }
    fn one() -> Self {
        QTScalar::one()
    }
    fn is_zero(&self) -> bool {
        QTScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        QTScalar::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        QTScalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        QTScalar::neg(self)
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<C: Coeff = QTScalar> {
    terms: BTreeMap<Weight, C>,
}

impl<C: Coeff> Default for LaurentPoly<C> {
    fn default() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(w: Weight, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn x(w: Weight) -> Self {
        Self::monomial(w, C::one())
    }

    pub fn constant(rank: usize, c: C) -> Self {
        Self::monomial(vec![0; rank], c)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Weight, C)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Weight, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Weight, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Weight, C> {
        self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Weight) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &o.terms {
                r.add_term(add(wa, wb), ca.mul(cb));
            }
        }
        r
    }

    pub fn scalar_mul(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x.mul(c))).collect() }
    }

    /// Multiply by the monomial X^w.
    pub fn shift(&self, w: &Weight) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (add(k, w), c.clone())).collect() }
    }

    /// X^μ ↦ X^{wμ}.
    pub fn weyl_act(&self, w: &WeylElem) -> Self {
        self.map_weights(|m| w.act(m))
    }

    pub fn map_weights(&self, f: impl Fn(&Weight) -> Weight) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (f(k), c.clone())))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Coeff>(&self, f: impl Fn(&Weight, &C) -> Result<D>) -> Result<LaurentPoly<D>> {
        let mut out = LaurentPoly::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(k, c)?);
        }
        Ok(out)
    }

    /// Coefficient of X^0.
    pub fn constant_term(&self, rank: usize) -> C {
        self.coeff(&vec![0; rank])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TMode {
    Zero,
    Infinity,
}

impl LaurentPoly<QTScalar> {
    pub fn one(rank: usize) -> Self {
        Self::constant(rank, QTScalar::one())
    }

    /// X^μ ↦ X^{-μ}, q ↦ q^{-1}, t ↦ t^{-1}.
    pub fn star(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (neg(k), c.star())))
    }

    /// X^μ ↦ X^{-μ}, q ↦ q^{-1}, t fixed.
    pub fn star_qx(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (neg(k), c.star_q())))
    }

    /// Multiply every coefficient by q^{f(μ)} and move X^μ to X^{g(μ)}.
    pub fn twist(&self, f: impl Fn(&Weight) -> (Weight, Rational64)) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| {
            let (w, e) = f(k);
            (w, c.mul_monomial(&(e, 0), &<BigRational as One>::one()))
        }))
    }

    /// Exact quotient by (q^s X^a − 1); `a` is a nonzero weight.
    pub fn divide_binomial(&self, a: &Weight, s: Rational64) -> Result<Self> {
        let p = a.iter().position(|&x| x != 0).expect("nonzero direction");
        let ap = a[p];
        // group monomials into lines base + kα
        let mut lines: BTreeMap<Weight, BTreeMap<i64, QTScalar>> = BTreeMap::new();
        for (mu, c) in &self.terms {
            let k = mu[p].div_euclid(ap.abs()) * ap.signum();
            let base: Weight = mu.iter().zip(a).map(|(m, x)| m - k * x).collect();
            // write c X^μ = (c q^{-ks}) (q^s X^a)^k X^base
            let ck = c.mul_monomial(&(-s * Rational64::from(k), 0), &<BigRational as One>::one());
            lines.entry(base).or_default().insert(k, ck);
        }
        let mut out = Self::zero();
        for (base, g) in lines {
            let kmin = *g.keys().next().unwrap();
            let kmax = *g.keys().next_back().unwrap();
            // g = (x − 1) h: g_k = h_{k−1} − h_k
            let mut prev = QTScalar::zero();
            for k in kmin..kmax {
                let gk = g.get(&k).cloned().unwrap_or_else(QTScalar::zero);
                let hk = prev.sub(&gk);
                if !hk.is_zero() {
                    let w: Weight = base.iter().zip(a).map(|(b, x)| b + k * x).collect();
                    out.add_term(w, hk.mul_monomial(&(s * Rational64::from(k), 0), &<BigRational as One>::one()));
                }
                prev = hk;
            }
            let top = g.get(&kmax).cloned().unwrap_or_else(QTScalar::zero);
            if prev != top {
                return Err(Error::NotDivisible { root: a.clone() });
            }
        }
        Ok(out)
    }

    /// Exact quotient by (X^a − 1).
    pub fn divide_exact(&self, a: &Weight) -> Result<Self> {
        self.divide_binomial(a, Rational64::zero())
    }

    /// Coefficientwise t-limit.
    pub fn specialize_t(&self, mode: TMode) -> Result<Self> {
        self.try_map_coeffs(|w, c| {
            let r = match mode {
                TMode::Zero => c.limit_t_zero(),
                TMode::Infinity => c.limit_t_infinity(),
            };
            r.ok_or_else(|| Error::PoleAtSpecialization {
                mode: format!("{mode:?}").to_lowercase(),
                weight: w.clone(),
            })
        })
    }

    /// All coefficients t-free.
    pub fn is_t_free(&self) -> bool {
        self.terms.values().all(|c| c.is_t_free())
    }
}
