//! The polynomial representation of the double affine Hecke algebra.
//!
//! T_i acts by t s_i + (t − 1)/(X^{α_i} − 1)(s_i − 1) with X^{α_0} = qX^{−θ};
//! π acts through its affine action; Y^ν is built from a reduced decomposition
//! of the translation t_ν.

use std::collections::HashMap;
use std::sync::Mutex;

use num_rational::{BigRational, Rational64};
use num_traits::One;
use rand::Rng;

use crate::affine_weyl::{reduced_translation, s_theta, ExtAffineElem, ReducedDecomp};
use crate::error::Result;
use crate::group_ring::{LaurentPoly, QTScalar};
use crate::root_system::{neg, Coweight, RootSystem, Weight};
use crate::weyl_group::{parabolic_elements, ParabolicJ, WeylElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    T(usize),
    TInv(usize),
    Pi(ExtAffineElem),
    PiInv(ExtAffineElem),
}

/// A product of atoms; the rightmost atom is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorWord(pub Vec<Atom>);

impl OperatorWord {
    pub fn inverse(&self) -> OperatorWord {
        OperatorWord(
            self.0
                .iter()
                .rev()
                .map(|a| match a {
                    Atom::T(i) => Atom::TInv(*i),
                    Atom::TInv(i) => Atom::T(*i),
                    Atom::Pi(p) => Atom::PiInv(p.clone()),
                    Atom::PiInv(p) => Atom::Pi(p.clone()),
                })
                .collect(),
        )
    }

    pub fn then(&self, other: &OperatorWord) -> OperatorWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        OperatorWord(v)
    }
}

pub struct Daha {
    pub rs: RootSystem,
    s_theta: WeylElem,
    neg_theta: Weight,
    simple: Vec<WeylElem>,
    alpha: Vec<Weight>,
    decomp: Mutex<HashMap<Coweight, ReducedDecomp>>,
}

impl Daha {
    pub fn new(rs: RootSystem) -> Self {
        let s_theta = s_theta(&rs);
        let neg_theta = neg(&rs.root_to_weight(&rs.highest_root));
        let simple = (0..rs.rank()).map(|i| WeylElem::simple(&rs, i)).collect();
        let alpha = (0..rs.rank()).map(|i| rs.simple_root_weight(i)).collect();
        Daha { rs, s_theta, neg_theta, simple, alpha, decomp: Mutex::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// s_i on polynomials, i ∈ {0..n}.
    pub fn reflect(&self, i: usize, f: &LaurentPoly) -> LaurentPoly {
        if i == 0 {
            let tc = self.rs.theta_coroot();
            f.twist(|mu| (self.s_theta.act(mu), self.rs.pair(mu, &tc)))
        } else {
            f.weyl_act(&self.simple[i - 1])
        }
    }

    pub fn apply_t(&self, i: usize, f: &LaurentPoly) -> Result<LaurentPoly> {
        let t = QTScalar::t();
        let sf = self.reflect(i, f);
        let diff = sf.sub(f);
        let quot = if i == 0 {
            diff.divide_binomial(&self.neg_theta, Rational64::one())?
        } else {
            diff.divide_exact(&self.alpha[i - 1])?
        };
        Ok(sf.scalar_mul(&t).add(&quot.scalar_mul(&t.sub(&QTScalar::one()))))
    }

    /// T_i^{-1} = t^{-1}T_i + t^{-1} − 1.
    pub fn apply_t_inv(&self, i: usize, f: &LaurentPoly) -> Result<LaurentPoly> {
        let ti = QTScalar::t().inv();
        let tf = self.apply_t(i, f)?;
        Ok(tf.scalar_mul(&ti).add(&f.scalar_mul(&ti.sub(&QTScalar::one()))))
    }

    pub fn apply_pi(&self, pi: &ExtAffineElem, f: &LaurentPoly) -> LaurentPoly {
        f.twist(|mu| pi.act_weight(&self.rs, mu))
    }

    pub fn apply_atom(&self, a: &Atom, f: &LaurentPoly) -> Result<LaurentPoly> {
        match a {
            Atom::T(i) => self.apply_t(*i, f),
            Atom::TInv(i) => self.apply_t_inv(*i, f),
            Atom::Pi(p) => Ok(self.apply_pi(p, f)),
            Atom::PiInv(p) => Ok(self.apply_pi(&p.inverse(&self.rs), f)),
        }
    }

    pub fn apply_word(&self, w: &OperatorWord, f: &LaurentPoly) -> Result<LaurentPoly> {
        let mut g = f.clone();
        for a in w.0.iter().rev() {
            g = self.apply_atom(a, &g)?;
        }
        Ok(g)
    }

    pub fn translation_decomp(&self, nu: &Coweight) -> ReducedDecomp {
        if let Some(d) = self.decomp.lock().unwrap().get(nu) {
            return d.clone();
        }
        let d = reduced_translation(&self.rs, nu);
        self.decomp.lock().unwrap().insert(nu.clone(), d.clone());
        d
    }

    /// Y^{ν} for dominant ν: π T_{i_1} … T_{i_l}.
    fn y_dominant_word(&self, nu: &Coweight) -> OperatorWord {
        let d = self.translation_decomp(nu);
        let mut atoms = Vec::with_capacity(d.word.len() + 1);
        if d.pi != ExtAffineElem::identity(&self.rs) {
            atoms.push(Atom::Pi(d.pi.clone()));
        }
        atoms.extend(d.word.iter().map(|&i| Atom::T(i)));
        OperatorWord(atoms)
    }

    /// Y^ν = Y^{ν_+} (Y^{ν_-})^{-1} with ν_± the coordinatewise positive and negative parts.
    pub fn y_word(&self, nu: &Coweight) -> OperatorWord {
        let plus: Coweight = nu.iter().map(|&x| x.max(0)).collect();
        let minus: Coweight = nu.iter().map(|&x| (-x).max(0)).collect();
        self.y_dominant_word(&plus).then(&self.y_dominant_word(&minus).inverse())
    }

    pub fn apply_y(&self, nu: &Coweight, f: &LaurentPoly) -> Result<LaurentPoly> {
        self.apply_word(&self.y_word(nu), f)
    }

    /// T_w for a finite Weyl group element, via its canonical reduced word.
    pub fn apply_tw(&self, w: &WeylElem, f: &LaurentPoly) -> Result<LaurentPoly> {
        let mut g = f.clone();
        for &i in w.word().iter().rev() {
            g = self.apply_t(i + 1, &g)?;
        }
        Ok(g)
    }

    /// All T_σ f for σ ∈ W_J, sharing prefixes.
    pub fn apply_tw_all(&self, j: &ParabolicJ, f: &LaurentPoly) -> Result<Vec<(WeylElem, LaurentPoly)>> {
        let elems = parabolic_elements(&self.rs, j);
        let mut done: HashMap<Weight, LaurentPoly> = HashMap::new();
        let mut out = Vec::with_capacity(elems.len());
        for w in elems {
            let g = match w.word().first() {
                None => f.clone(),
                Some(&i) => {
                    let rest = w.left_mul_simple(&self.rs, i);
                    self.apply_t(i + 1, &done[rest.rho_image()])?
                }
            };
            done.insert(w.rho_image().clone(), g.clone());
            out.push((w, g));
        }
        Ok(out)
    }

    /// P^J f = Σ_{σ∈W_J} T_σ f.
    pub fn symmetrize(&self, j: &ParabolicJ, f: &LaurentPoly) -> Result<LaurentPoly> {
        Ok(self
            .apply_tw_all(j, f)?
            .into_iter()
            .fold(LaurentPoly::zero(), |acc, (_, g)| acc.add(&g)))
    }

    /// Σ_{w∈W_J} Y^{wν} f.
    pub fn symmetric_y(&self, j: &ParabolicJ, nu: &Coweight, f: &LaurentPoly) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero();
        for w in parabolic_elements(&self.rs, j) {
            acc = acc.add(&self.apply_y(&w.act_coweight(&self.rs, nu), f)?);
        }
        Ok(acc)
    }

    pub fn is_symmetric(&self, j: &ParabolicJ, f: &LaurentPoly) -> bool {
        j.iter().all(|i| f.weyl_act(&self.simple[i]) == *f)
    }

    /// Number of braid factors m_ij for affine simple reflections i ≠ j.
    pub fn braid_order(&self, i: usize, j: usize) -> usize {
        let a = ExtAffineElem::simple(&self.rs, i).mul(&self.rs, &ExtAffineElem::simple(&self.rs, j));
        let id = ExtAffineElem::identity(&self.rs);
        let mut p = a.clone();
        for m in 1..=12 {
            if p == id {
                return m;
            }
            p = p.mul(&self.rs, &a);
        }
        0
    }
}

/// A random Laurent polynomial with small support and monomial coefficients c q^a t^b.
pub fn random_poly<R: Rng>(rng: &mut R, rank: usize, terms: usize, radius: i64) -> LaurentPoly {
    let mut f = LaurentPoly::zero();
    for _ in 0..terms {
        let w: Weight = (0..rank).map(|_| rng.gen_range(-radius..=radius)).collect();
        let c = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        let a = rng.gen_range(-1i64..=1);
        let b = rng.gen_range(-1i64..=1);
        f.add_term(w, QTScalar::monomial(Rational64::from(a), b, BigRational::from_integer(c.into())));
    }
    f
}

/// Outcome of one relation family on a batch of random polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: &'static str,
    pub trials: usize,
    pub failures: usize,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn unit_coweight(n: usize, i: usize) -> Coweight {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Length-zero elements π (the identity and those attached to minuscule coweights) with their diagram permutations.
pub fn length_zero_elements(rs: &RootSystem) -> Vec<(ExtAffineElem, Vec<usize>)> {
    let mut out = vec![(ExtAffineElem::identity(rs), (0..=rs.rank()).collect())];
    for i in 0..rs.rank() {
        let w = unit_coweight(rs.rank(), i);
        if RootSystem::pair_root(&rs.highest_root, &w) == 1 {
            let pi = reduced_translation(rs, &w).pi;
            if let Ok(p) = pi.diagram_permutation(rs) {
                out.push((pi, p));
            }
        }
    }
    out
}

/// Quadratic, braid, π-conjugation, Y-commutativity and exchange relations on `samples` random polynomials each.
pub fn check_relations(d: &Daha, samples: usize, seed: u64) -> Result<Vec<RelationCheck>> {
    use rand::SeedableRng;
    let n = d.rank();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let t = QTScalar::t();
    let mut out = Vec::new();
    let mut record = |relation, results: Vec<bool>| {
        out.push(RelationCheck { relation, trials: results.len(), failures: results.iter().filter(|ok| !**ok).count() });
    };

    let mut res = Vec::new();
    for k in 0..samples {
        let f = random_poly(&mut rng, n, 3, 2);
        let i = k % (n + 1);
        let tf = d.apply_t(i, &f)?;
        let lhs = d.apply_t(i, &tf)?;
        let rhs = tf.scalar_mul(&t.sub(&QTScalar::one())).add(&f.scalar_mul(&t));
        res.push(lhs == rhs);
    }
    record("quadratic", res);

    let pairs: Vec<(usize, usize, usize)> = (0..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, d.braid_order(i, j)))
        .filter(|p| p.2 > 0)
        .collect();
    let mut res = Vec::new();
    if !pairs.is_empty() {
        for k in 0..samples {
            let f = random_poly(&mut rng, n, 2, 1);
            let (i, j, m) = pairs[k % pairs.len()];
            let word = |a: usize, b: usize| OperatorWord((0..m).map(|s| Atom::T(if s % 2 == 0 { a } else { b })).collect());
            res.push(d.apply_word(&word(i, j), &f)? == d.apply_word(&word(j, i), &f)?);
        }
    }
    record("braid", res);

    let pis = length_zero_elements(&d.rs);
    let mut res = Vec::new();
    for k in 0..samples {
        let f = random_poly(&mut rng, n, 3, 2);
        let (pi, perm) = &pis[k % pis.len()];
        let i = (k / pis.len()) % (n + 1);
        let w = OperatorWord(vec![Atom::Pi(pi.clone()), Atom::T(i), Atom::PiInv(pi.clone())]);
        res.push(d.apply_word(&w, &f)? == d.apply_t(perm[i], &f)?);
    }
    record("pi-conjugation", res);

    let mut res = Vec::new();
    for _ in 0..samples {
        let f = random_poly(&mut rng, n, 2, 1);
        let eta: Coweight = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        let nu: Coweight = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        let sum: Coweight = eta.iter().zip(&nu).map(|(a, b)| a + b).collect();
        let a = d.apply_y(&eta, &d.apply_y(&nu, &f)?)?;
        let b = d.apply_y(&nu, &d.apply_y(&eta, &f)?)?;
        res.push(a == b && a == d.apply_y(&sum, &f)?);
    }
    record("y-commutativity", res);

    let mut res = Vec::new();
    for k in 0..samples {
        let f = random_poly(&mut rng, n, 2, 1);
        let i = k % n;
        let mut nu: Coweight = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        nu[i] = 1;
        let snu = d.rs.reflect_coweight(i, &nu);
        let lhs = d.apply_t_inv(i + 1, &d.apply_y(&nu, &d.apply_t_inv(i + 1, &f)?)?)?;
        res.push(lhs == d.apply_y(&snu, &f)?);
    }
    record("exchange", res);
    Ok(out)
}

/// Y^ν X^μ stays inside lower_set(μ), for every μ in lower_set(λ).
pub fn check_triangularity(d: &Daha, lambda: &Weight, nus: &[Coweight]) -> Result<bool> {
    use crate::weyl_group::lower_set;
    for mu in lower_set(&d.rs, lambda) {
        let allowed: std::collections::HashSet<Weight> = lower_set(&d.rs, &mu).into_iter().collect();
        for nu in nus {
            let y = d.apply_y(nu, &LaurentPoly::x(mu.clone()))?;
            if y.support().any(|w| !allowed.contains(w)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn daha(s: &str) -> Daha {
        Daha::new(RootSystem::from_name(s).unwrap())
    }

    #[test]
    fn a1_golden() {
        let d = daha("A1");
        let t = QTScalar::t();
        let one = LaurentPoly::one(1);
        assert_eq!(d.apply_t(1, &one).unwrap(), one.scalar_mul(&t));
        let x = |k: i64| LaurentPoly::x(vec![k]);
        // T X^ω = X^{-ω}; T X^{-ω} = t X^ω + (t − 1) X^{-ω}
        assert_eq!(d.apply_t(1, &x(1)).unwrap(), x(-1));
        let expect = x(1).scalar_mul(&t).add(&x(-1).scalar_mul(&t.sub(&QTScalar::one())));
        assert_eq!(d.apply_t(1, &x(-1)).unwrap(), expect);
        assert_eq!(d.apply_y(&vec![1], &one).unwrap(), one.scalar_mul(&t));
        assert_eq!(d.apply_y(&vec![0], &x(3)).unwrap(), x(3));
        let half = QTScalar::q_pow(Rational64::new(1, 2));
        assert_eq!(d.apply_y(&vec![1], &x(1)).unwrap(), x(1).scalar_mul(&half.inv()));
    }

    #[test]
    fn inverse_roundtrip() {
        let d = daha("A2");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let f = random_poly(&mut rng, 2, 4, 2);
            for i in 0..=2 {
                assert_eq!(d.apply_t(i, &d.apply_t_inv(i, &f).unwrap()).unwrap(), f);
                assert_eq!(d.apply_t_inv(i, &d.apply_t(i, &f).unwrap()).unwrap(), f);
            }
        }
        let one = LaurentPoly::one(2);
        assert_eq!(d.apply_t_inv(1, &one).unwrap().len(), 1);
        assert_eq!(d.apply_t_inv(1, &one).unwrap().scalar_mul(&QTScalar::t()), one);
    }

    #[test]
    fn symmetrizer_basics() {
        let d = daha("A2");
        let one = LaurentPoly::one(2);
        let full = ParabolicJ::full(&d.rs);
        let t = QTScalar::t();
        let poincare = [0u32, 1, 1, 2, 2, 3].iter().fold(QTScalar::zero(), |a, &k| a.add(&t.pow(k)));
        assert_eq!(d.symmetrize(&full, &one).unwrap(), one.scalar_mul(&poincare));
        let f = LaurentPoly::x(vec![1, -1]);
        assert_eq!(d.symmetrize(&ParabolicJ::empty(), &f).unwrap(), f);
        let a1 = daha("A1");
        let s = a1.symmetrize(&ParabolicJ::full(&a1.rs), &LaurentPoly::x(vec![1])).unwrap();
        assert!(a1.is_symmetric(&ParabolicJ::full(&a1.rs), &s));
    }

    #[test]
    fn braid_orders() {
        let d = daha("G2");
        assert_eq!(d.braid_order(1, 2), 6);
        assert_eq!(d.braid_order(0, 2), 3);
        assert_eq!(d.braid_order(0, 1), 2);
        let d = daha("A1");
        assert_eq!(d.braid_order(0, 1), 0);
    }

    #[test]
    fn relations_small() {
        for name in ["A1", "A2", "B2"] {
            for c in check_relations(&daha(name), 8, 3).unwrap() {
                assert!(c.passed(), "{name} {c:?}");
            }
        }
    }

    #[test]
    fn split_independence() {
        // Y^{ν+η}Y^{-η} = Y^ν for any η, so the coordinate split is one choice among many
        let d = daha("A2");
        let f = LaurentPoly::x(vec![1, -1]).add(&LaurentPoly::one(2));
        let nu = vec![1, -1];
        let shifted = vec![2, 0];
        let alt = d.apply_y(&shifted, &d.apply_y(&vec![-1, -1], &f).unwrap()).unwrap();
        assert_eq!(alt, d.apply_y(&nu, &f).unwrap());
    }

    #[test]
    fn triangular() {
        let d = daha("A2");
        let nus = vec![vec![1, 0], vec![0, 1]];
        assert!(check_triangularity(&d, &vec![1, -1], &nus).unwrap());
        assert!(check_triangularity(&d, &vec![-1, 2], &nus).unwrap());
    }

    #[test]
    fn diagram_automorphisms() {
        let rs = RootSystem::from_name("A2").unwrap();
        let pis = length_zero_elements(&rs);
        assert_eq!(pis.len(), 3);
        assert_eq!(pis[1].1, vec![1, 2, 0]);
        assert_eq!(length_zero_elements(&RootSystem::from_name("G2").unwrap()).len(), 1);
    }
}
