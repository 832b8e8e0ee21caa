//! Nonsymmetric and parasymmetric Macdonald polynomials.
//!
//! E_λ is the eigenvector of a single generic Y^ν on the span of X^μ, μ ⪯ λ;
//! the matrix there is triangular, so back-substitution suffices. E^J_λ is
//! obtained from E_{w_0^Jλ} by the two Hecke symmetrizers.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_rational::Rational64;
use rayon::prelude::*;

use crate::daha_ops::Daha;
use crate::error::{Error, Result};
use crate::group_ring::{LaurentPoly, QTScalar, TMode};
use crate::root_system::{add, Coweight, RootSystem, Weight};
use crate::weyl_group::{
    antidominant, cherednik_leq, cherednik_sort_key, coset_data, lower_set, parabolic_elements, parabolic_orbit,
    ParabolicJ,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Eigen,
    Symmetrizer,
    GramSchmidt,
}

#[derive(Debug, Clone)]
pub struct MacdonaldResult {
    pub lambda: Weight,
    pub j: ParabolicJ,
    pub poly: LaurentPoly,
    pub algorithm: Algorithm,
    /// q-order of a truncated result; None when exact.
    pub truncation: Option<Rational64>,
}

/// Exponents (q, t) of the Y^ν-eigenvalue on E_μ.
pub fn spectral(rs: &RootSystem, mu: &Weight, nu: &Coweight) -> (Rational64, i64) {
    let rho = rs.rho();
    let sigma = antidominant(rs, mu).sigma;
    let texp = rs.pair(&add(&rho, &sigma.act(&rho)), nu);
    debug_assert!(texp.is_integer());
    (-rs.pair(mu, nu), texp.to_integer())
}

pub fn spectral_value(rs: &RootSystem, mu: &Weight, nu: &Coweight) -> QTScalar {
    let (a, b) = spectral(rs, mu, nu);
    QTScalar::q_pow(a).mul(&QTScalar::t_pow(b))
}

/// Generic coweights tried in order: (1, c+1, (c+1)^2, …) for c = 0, 1, …
fn candidate_nu(rank: usize, c: i64) -> Coweight {
    (0..rank).map(|i| (c + 1).pow(i as u32)).collect()
}

/// Representative of the W_J-orbit that is antidominant for J.
pub fn j_antidominant(rs: &RootSystem, j: &ParabolicJ, mu: &Weight) -> Weight {
    let mut v = mu.clone();
    while let Some(i) = j.iter().find(|&i| v[i] > 0) {
        v = rs.reflect_weight(i, &v);
    }
    v
}

pub struct Engine {
    pub daha: Daha,
    cache: Mutex<HashMap<Weight, LaurentPoly>>,
}

impl Engine {
    pub fn new(rs: RootSystem) -> Self {
        Engine { daha: Daha::new(rs), cache: Mutex::new(HashMap::new()) }
    }

    pub fn rs(&self) -> &RootSystem {
        &self.daha.rs
    }

    /// m^J_λ: the multiplicity-free sum over W_Jλ.
    pub fn orbit_sum(&self, j: &ParabolicJ, lambda: &Weight) -> Result<LaurentPoly> {
        j.check_antidominant(lambda)?;
        Ok(LaurentPoly::from_terms(parabolic_orbit(self.rs(), j, lambda).into_iter().map(|w| (w, QTScalar::one()))))
    }

    /// The generic coweight used for λ: the first candidate with d_μ ≠ d_λ on lower_set(λ).
    pub fn generic_nu(&self, lambda: &Weight, span: &[Weight]) -> Result<Coweight> {
        let rs = self.rs();
        let bound = 10 * span.len().max(1) as i64;
        for c in 0..bound {
            let nu = candidate_nu(rs.rank(), c);
            let dl = spectral(rs, lambda, &nu);
            if span.iter().all(|mu| mu == lambda || spectral(rs, mu, &nu) != dl) {
                return Ok(nu);
            }
        }
        Err(Error::EigenvalueCollision(span.len()))
    }

    pub fn nonsym_e(&self, lambda: &Weight) -> Result<MacdonaldResult> {
        let poly = self.nonsym_poly(lambda)?;
        Ok(MacdonaldResult {
            lambda: lambda.clone(),
            j: ParabolicJ::empty(),
            poly,
            algorithm: Algorithm::Eigen,
            truncation: None,
        })
    }

    fn nonsym_poly(&self, lambda: &Weight) -> Result<LaurentPoly> {
        if let Some(p) = self.cache.lock().unwrap().get(lambda) {
            return Ok(p.clone());
        }
        let rs = self.rs();
        let span = lower_set(rs, lambda);
        let index: HashMap<&Weight, usize> = span.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let nu = self.generic_nu(lambda, &span)?;
        let columns: Vec<LaurentPoly> = span
            .par_iter()
            .map(|mu| self.daha.apply_y(&nu, &LaurentPoly::x(mu.clone())))
            .collect::<Result<_>>()?;
        for (k, col) in columns.iter().enumerate() {
            for w in col.support() {
                match index.get(w) {
                    Some(&i) if i <= k => {}
                    _ => return Err(Error::TriangularityViolation { from: span[k].clone(), to: w.clone() }),
                }
            }
            if col.coeff(&span[k]) != spectral_value(rs, &span[k], &nu) {
                return Err(Error::FormulaMismatch(span[k].clone()));
            }
        }
        let top = span.len() - 1;
        let d_lambda = columns[top].coeff(lambda);
        let mut c: Vec<QTScalar> = vec![QTScalar::zero(); span.len()];
        c[top] = QTScalar::one();
        for m in (0..top).rev() {
            let mut acc = QTScalar::zero();
            for k in (m + 1)..=top {
                if c[k].is_zero() {
                    continue;
                }
                let entry = columns[k].coeff(&span[m]);
                if !entry.is_zero() {
                    acc = acc.add(&entry.mul(&c[k]));
                }
            }
            if !acc.is_zero() {
                c[m] = acc.div(&d_lambda.sub(&columns[m].coeff(&span[m])));
            }
        }
        let poly = LaurentPoly::from_terms(span.into_iter().zip(c));
        self.cache.lock().unwrap().insert(lambda.clone(), poly.clone());
        Ok(poly)
    }

    /// R^J_λ(t) = Σ_{τ ∈ Stab_{W_J}(w_0^Jλ)} t^{l(τ)}.
    pub fn r_poly(&self, j: &ParabolicJ, lambda: &Weight) -> Result<QTScalar> {
        let cd = coset_data(self.rs(), j, lambda)?;
        Ok(cd
            .stabilizer
            .iter()
            .fold(QTScalar::zero(), |acc, tau| acc.add(&QTScalar::t_pow(tau.length() as i64))))
    }

    /// E^J_λ by both symmetrizer formulas, which must agree.
    pub fn parasym_e(&self, j: &ParabolicJ, lambda: &Weight) -> Result<MacdonaldResult> {
        let rs = self.rs();
        let cd = coset_data(rs, j, lambda)?;
        let top = cd.w0j.act(lambda);
        let e = self.nonsym_poly(&top)?;
        let images = self.daha.apply_tw_all(j, &e)?;
        let r = self.r_poly(j, lambda)?;
        let full = images.iter().fold(LaurentPoly::zero(), |acc, (_, g)| acc.add(g)).scalar_mul(&r.inv());
        let short = images
            .iter()
            .filter(|(w, _)| cd.reps.contains(w))
            .fold(LaurentPoly::zero(), |acc, (_, g)| acc.add(g));
        if full != short {
            return Err(Error::FormulaMismatch(lambda.clone()));
        }
        self.check_unitriangular(j, lambda, &full)?;
        Ok(MacdonaldResult {
            lambda: lambda.clone(),
            j: j.clone(),
            poly: full,
            algorithm: Algorithm::Symmetrizer,
            truncation: None,
        })
    }

    /// W_J-symmetry, support in {μ ⪯ λ}, and coefficient 1 on m^J_λ.
    pub fn check_unitriangular(&self, j: &ParabolicJ, lambda: &Weight, f: &LaurentPoly) -> Result<()> {
        let rs = self.rs();
        if !self.daha.is_symmetric(j, f) || f.coeff(lambda) != QTScalar::one() {
            return Err(Error::FormulaMismatch(lambda.clone()));
        }
        for w in f.support() {
            let rep = j_antidominant(rs, j, w);
            if !cherednik_leq(rs, &rep, lambda) {
                return Err(Error::TriangularityViolation { from: lambda.clone(), to: rep });
            }
        }
        Ok(())
    }

    /// Coefficients of f in the basis m^J_μ, keyed by J-antidominant μ.
    pub fn m_expansion(&self, j: &ParabolicJ, f: &LaurentPoly) -> BTreeMap<Weight, QTScalar> {
        f.terms()
            .filter(|(w, _)| j_antidominant(self.rs(), j, w) == **w)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }

    pub fn specialize_e(&self, result: &MacdonaldResult, mode: TMode) -> Result<LaurentPoly> {
        result.poly.specialize_t(mode)
    }

    /// Coefficients c_w with E^J_λ(X,q^{-1},∞) = Σ c_w E_{wλ}(X,q^{-1},∞), one per distinct wλ.
    pub fn decompose_tinf(&self, j: &ParabolicJ, lambda: &Weight) -> Result<Vec<(Weight, QTScalar)>> {
        let rs = self.rs();
        let target = self.parasym_e(j, lambda)?.poly.specialize_t(TMode::Infinity)?;
        let mut residual = target.map_coeffs(|c| c.star_q());
        let mut orbit = parabolic_orbit(rs, j, lambda);
        orbit.sort_by_cached_key(|w| std::cmp::Reverse(cherednik_sort_key(rs, w)));
        let mut out = Vec::with_capacity(orbit.len());
        for w in orbit {
            let g = self.nonsym_poly(&w)?.specialize_t(TMode::Infinity)?.map_coeffs(|c| c.star_q());
            let c = residual.coeff(&w);
            if !c.is_zero() {
                residual = residual.sub(&g.scalar_mul(&c));
            }
            out.push((w, c));
        }
        if !residual.is_zero() {
            return Err(Error::SingularSystem(format!("nonzero residual with {} terms", residual.len())));
        }
        Ok(out)
    }

    /// Y^ν E_λ = spectral(λ, ν) E_λ.
    pub fn check_eigen(&self, lambda: &Weight, nu: &Coweight) -> Result<bool> {
        let e = self.nonsym_poly(lambda)?;
        Ok(self.daha.apply_y(nu, &e)? == e.scalar_mul(&spectral_value(self.rs(), lambda, nu)))
    }

    /// The central element Σ_{w∈W_J} t^{⟨ρ, ν − wν⟩} Y^{wν} acts on E^J_λ by
    /// Σ_w t^{⟨ρ, ν − wν⟩} spectral(w_0^Jλ, wν).
    pub fn check_parasym_eigen(&self, j: &ParabolicJ, lambda: &Weight, nu: &Coweight) -> Result<bool> {
        let rs = self.rs();
        let f = self.parasym_e(j, lambda)?.poly;
        let top = coset_data(rs, j, lambda)?.w0j.act(lambda);
        let rho = rs.rho();
        let mut lhs = LaurentPoly::zero();
        let mut value = QTScalar::zero();
        for w in parabolic_elements(rs, j) {
            let wnu = w.act_coweight(rs, nu);
            let shift: Coweight = nu.iter().zip(&wnu).map(|(a, b)| a - b).collect();
            let tw = QTScalar::t_pow(rs.pair(&rho, &shift).to_integer());
            lhs = lhs.add(&self.daha.apply_y(&wnu, &f)?.scalar_mul(&tw));
            value = value.add(&tw.mul(&spectral_value(rs, &top, &wnu)));
        }
        Ok(lhs == f.scalar_mul(&value))
    }
}

/// True when c is t-free and ±q^a times a product of cyclotomic factors in q,
/// which is the same as a product of factors (1 − q^k)^{±1}.
pub fn is_q_product(c: &QTScalar) -> bool {
    use crate::group_ring::scalar::peel_cyclotomic;
    let cyclotomic = |p: &crate::group_ring::Poly| peel_cyclotomic(&p.normalize().2).1.is_one();
    !c.is_zero() && c.is_t_free() && cyclotomic(c.numerator()) && c.denominator_factors().keys().all(cyclotomic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn engine(s: &str) -> Engine {
        Engine::new(RootSystem::from_name(s).unwrap())
    }

    fn x(w: &[i64]) -> LaurentPoly {
        LaurentPoly::x(w.to_vec())
    }

    fn frac_1t_1qt() -> QTScalar {
        let t = QTScalar::t();
        QTScalar::one().sub(&t).div(&QTScalar::one().sub(&QTScalar::q().mul(&t)))
    }

    #[test]
    fn a1_small() {
        let e = engine("A1");
        assert_eq!(e.nonsym_e(&vec![0]).unwrap().poly, LaurentPoly::one(1));
        assert_eq!(e.nonsym_e(&vec![1]).unwrap().poly, x(&[1]));
        let em = e.nonsym_e(&vec![-1]).unwrap().poly;
        assert_eq!(em, x(&[-1]).add(&x(&[1]).scalar_mul(&frac_1t_1qt())));
    }

    #[test]
    fn eigen_and_triangular() {
        for (name, box_) in [("A1", 3), ("A2", 1), ("B2", 1), ("G2", 1)] {
            let e = engine(name);
            let n = e.rs().rank();
            let mut lams = vec![vec![]];
            for _ in 0..n {
                lams = lams
                    .into_iter()
                    .flat_map(|m: Vec<i64>| {
                        (-box_..=box_).map(move |v| {
                            let mut m = m.clone();
                            m.push(v);
                            m
                        })
                    })
                    .collect();
            }
            for lam in lams {
                for i in 0..n {
                    let mut nu = vec![0; n];
                    nu[i] = 1;
                    assert!(e.check_eigen(&lam, &nu).unwrap(), "{name} {lam:?} {nu:?}");
                }
                let p = e.nonsym_e(&lam).unwrap().poly;
                assert_eq!(p.coeff(&lam), QTScalar::one());
            }
        }
    }

    #[test]
    fn r_poly_values() {
        let e = engine("A2");
        let t = QTScalar::t();
        let full = ParabolicJ::full(e.rs());
        let expect = QTScalar::one().add(&t.scale(&BigRational::from_integer(2.into()))).add(&t.pow(2).scale(&BigRational::from_integer(2.into()))).add(&t.pow(3));
        assert_eq!(e.r_poly(&full, &vec![0, 0]).unwrap(), expect);
        let j1 = ParabolicJ::new(e.rs(), [0]).unwrap();
        assert_eq!(e.r_poly(&j1, &vec![0, 0]).unwrap(), QTScalar::one().add(&t));
        assert_eq!(e.r_poly(&j1, &vec![-1, 1]).unwrap(), QTScalar::one());
        assert!(matches!(e.r_poly(&j1, &vec![1, 0]), Err(Error::NotJAntidominant { .. })));
    }

    #[test]
    fn parasym_small() {
        let e = engine("A1");
        let full = ParabolicJ::full(e.rs());
        assert_eq!(e.parasym_e(&full, &vec![0]).unwrap().poly, LaurentPoly::one(1));
        let p = e.parasym_e(&full, &vec![-1]).unwrap().poly;
        assert_eq!(p, e.orbit_sum(&full, &vec![-1]).unwrap());
        assert_eq!(e.parasym_e(&ParabolicJ::empty(), &vec![-2]).unwrap().poly, e.nonsym_e(&vec![-2]).unwrap().poly);
        assert!(e.check_parasym_eigen(&full, &vec![-2], &vec![1]).unwrap());

        let e = engine("A2");
        for j in ParabolicJ::full(e.rs()).subsets() {
            for lam in [vec![-1, -1], vec![0, -1], vec![-2, 1], vec![0, 0]] {
                if j.is_antidominant(&lam) {
                    let r = e.parasym_e(&j, &lam).unwrap();
                    let t0 = e.specialize_e(&r, TMode::Zero).unwrap();
                    let n0 = e.nonsym_e(&lam).unwrap().poly.specialize_t(TMode::Zero).unwrap();
                    assert_eq!(t0, n0, "{j:?} {lam:?}");
                    assert!(e.check_parasym_eigen(&j, &lam, &vec![1, 0]).unwrap());
                }
            }
        }
    }

    #[test]
    fn orbit_sums() {
        let e = engine("A1");
        let full = ParabolicJ::full(e.rs());
        assert_eq!(e.orbit_sum(&full, &vec![-1]).unwrap(), x(&[-1]).add(&x(&[1])));
        assert_eq!(e.orbit_sum(&full, &vec![0]).unwrap(), LaurentPoly::one(1));
        assert_eq!(e.orbit_sum(&ParabolicJ::empty(), &vec![3]).unwrap(), x(&[3]));
    }

    #[test]
    fn tinf_decomposition() {
        let e = engine("A1");
        let full = ParabolicJ::full(e.rs());
        let d = e.decompose_tinf(&full, &vec![-1]).unwrap();
        assert_eq!(d[0], (vec![-1], QTScalar::one()));
        assert_eq!(d[1], (vec![1], QTScalar::one().sub(&QTScalar::q())));
        assert!(is_q_product(&d[1].1));
        let d = e.decompose_tinf(&ParabolicJ::empty(), &vec![2]).unwrap();
        assert_eq!(d, vec![(vec![2], QTScalar::one())]);
    }
}
