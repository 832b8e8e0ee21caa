//! Univariate rational functions over ℚ, kept in lowest terms with a monic denominator.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Dense = Vec<BigRational>;

fn trim(p: &mut Dense) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn dense_add(a: &[BigRational], b: &[BigRational]) -> Dense {
    let mut r: Dense = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x + y,
                None => x,
            }
        })
        .collect();
    trim(&mut r);
    r
}

fn dense_mul(a: &[BigRational], b: &[BigRational]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

fn dense_scale(a: &[BigRational], c: &BigRational) -> Dense {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// (quotient, remainder)
fn dense_divrem(a: &[BigRational], b: &[BigRational]) -> (Dense, Dense) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    trim(&mut rem);
    trim(&mut q);
    (q, rem)
}

fn dense_gcd(a: &[BigRational], b: &[BigRational]) -> Dense {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = dense_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        x = dense_scale(&x, &l.recip());
    }
    x
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Dense,
    den: Dense,
}

impl Default for RatFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: Vec::new(), den: vec![BigRational::one()] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut num = vec![c];
        trim(&mut num);
        RatFn { num, den: vec![BigRational::one()] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// x^k for any integer k.
    pub fn var_pow(k: i64) -> Self {
        let mut v = vec![BigRational::zero(); k.unsigned_abs() as usize + 1];
        v[k.unsigned_abs() as usize] = BigRational::one();
        if k >= 0 {
            RatFn { num: v, den: vec![BigRational::one()] }
        } else {
            RatFn { num: vec![BigRational::one()], den: v }
        }
    }

    /// Σ c_k x^k from (exponent, coefficient) pairs, exponents possibly negative.
    pub fn from_laurent(terms: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        let terms: Vec<(i64, BigRational)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap().min(0);
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut num = vec![BigRational::zero(); (hi - lo) as usize + 1];
        for (k, c) in terms {
            num[(k - lo) as usize] += c;
        }
        trim(&mut num);
        let r = RatFn { num, den: vec![BigRational::one()] };
        if lo < 0 {
            r.mul(&Self::var_pow(lo))
        } else {
            r
        }
    }

    pub fn from_parts(num: Dense, den: Dense) -> Self {
        Self::reduced(num, den)
    }

    fn reduced(mut num: Dense, mut den: Dense) -> Self {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Self::zero();
        }
        if den.len() > 1 {
            let g = dense_gcd(&num, &den);
            if g.len() > 1 {
                num = dense_divrem(&num, &g).0;
                den = dense_divrem(&den, &g).0;
            }
        }
        let l = den.last().unwrap().recip();
        if !l.is_one() {
            num = dense_scale(&num, &l);
            den = dense_scale(&den, &l);
        }
        RatFn { num, den }
    }

    pub fn numer(&self) -> &[BigRational] {
        &self.num
    }

    pub fn denom(&self) -> &[BigRational] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.len() == 1 && self.num.len() == 1 && self.num[0].is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.den.len() == 1 && self.num.len() == 1 {
            Some(&self.num[0] / &self.den[0])
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.len() == 1 {
                let mut num = dense_add(&self.num, &o.num);
                trim(&mut num);
                return RatFn { num, den: self.den.clone() };
            }
            return Self::reduced(dense_add(&self.num, &o.num), self.den.clone());
        }
        if o.den.len() == 1 {
            let num = dense_add(&self.num, &dense_mul(&o.num, &self.den));
            return Self::reduced(num, self.den.clone());
        }
        if self.den.len() == 1 {
            return o.add(self);
        }
        let num = dense_add(&dense_mul(&self.num, &o.den), &dense_mul(&o.num, &self.den));
        Self::reduced(num, dense_mul(&self.den, &o.den))
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.len() == 1 && o.den.len() == 1 {
            return RatFn { num: dense_mul(&self.num, &o.num), den: self.den.clone() };
        }
        Self::reduced(dense_mul(&self.num, &o.num), dense_mul(&self.den, &o.den))
    }

    pub fn scale(&self, c: &BigRational) -> RatFn {
        if c.is_zero() {
            return Self::zero();
        }
        RatFn { num: dense_scale(&self.num, c), den: self.den.clone() }
    }

    pub fn inv(&self) -> RatFn {
        assert!(!self.is_zero(), "inverse of zero");
        Self::reduced(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFn) -> RatFn {
        self.mul(&o.inv())
    }

    /// Value at a rational point; None if the denominator vanishes there.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let ev = |p: &[BigRational]| p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
        let d = ev(&self.den);
        if d.is_zero() {
            None
        } else {
            Some(ev(&self.num) / d)
        }
    }

    /// Substitute x ↦ 1/x.
    pub fn invert_variable(&self) -> RatFn {
        let (dn, dd) = (self.num.len() as i64 - 1, self.den.len() as i64 - 1);
        let mut n: Dense = self.num.iter().rev().cloned().collect();
        let mut d: Dense = self.den.iter().rev().cloned().collect();
        // multiply through by x^max
        let m = dn.max(dd);
        n.splice(0..0, std::iter::repeat_n(BigRational::zero(), (m - dn).max(0) as usize));
        d.splice(0..0, std::iter::repeat_n(BigRational::zero(), (m - dd).max(0) as usize));
        if self.is_zero() {
            return Self::zero();
        }
        Self::reduced(n, d)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &[BigRational]| -> String {
            let mut s = String::new();
            for (k, c) in p.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                if s.is_empty() {
                    if neg {
                        s.push('-');
                    }
                } else {
                    s.push(if neg { '-' } else { '+' });
                }
                let a = c.abs();
                match k {
                    0 => s.push_str(&a.to_string()),
                    _ => {
                        if !a.is_one() {
                            s.push_str(&format!("{a}*"));
                        }
                        if k == 1 {
                            s.push('t');
                        } else {
                            s.push_str(&format!("t^{k}"));
                        }
                    }
                }
            }
            if s.is_empty() {
                "0".into()
            } else {
                s
            }
        };
        if self.den.len() == 1 && self.den[0].is_one() {
            write!(f, "{}", show(&self.num))
        } else {
            write!(f, "({})/({})", show(&self.num), show(&self.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> RatFn {
        RatFn::var_pow(1)
    }

    #[test]
    fn reduces() {
        let one = RatFn::one();
        let a = one.sub(&x().mul(&x())).div(&one.sub(&x()));
        assert_eq!(a, one.add(&x()));
        assert!(a.is_polynomial());
        assert_eq!(RatFn::var_pow(-2).mul(&x().mul(&x())), one);
        assert_eq!(one.sub(&x()).inv().eval(&BigRational::from_integer(3.into())), Some(BigRational::new((-1).into(), 2.into())));
        assert_eq!(x().add(&one).invert_variable(), one.add(&x()).div(&x()));
    }

    proptest! {
        #[test]
        fn field_laws(a in proptest::collection::vec(-3i64..4, 1..4), b in proptest::collection::vec(-3i64..4, 1..4), c in proptest::collection::vec(-3i64..4, 1..3)) {
            let mk = |v: &Vec<i64>, sh: i64| RatFn::from_laurent(v.iter().enumerate().map(|(k, &c)| (k as i64 - sh, BigRational::from_integer(c.into()))));
            let (p, q, mut r) = (mk(&a, 1), mk(&b, 0), mk(&c, 0));
            if !r.is_zero() { r = p.div(&r); }
            prop_assert_eq!(p.add(&q).mul(&r), p.mul(&r).add(&q.mul(&r)));
            prop_assert_eq!(p.add(&q).sub(&q), p.clone());
            if !q.is_zero() { prop_assert_eq!(p.div(&q).mul(&q), p.clone()); }
        }
    }
}
