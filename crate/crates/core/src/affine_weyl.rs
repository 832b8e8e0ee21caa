//! The extended affine Weyl group W ⋉ P^∨.
//!
//! An element (ν, w) means t_ν w. It acts on P ⊕ ℚδ by
//! μ + kδ ↦ wμ + (k − ⟨wμ, ν⟩)δ, and on affine roots by the same rule.
//! With X^δ = q this gives s_0 X^μ = q^{⟨μ,θ^∨⟩} X^{s_θ μ}.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::root_system::{add, neg, Coweight, Root, RootSystem, Weight};
use crate::weyl_group::WeylElem;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineRoot {
    pub real: Root,
    pub k: i64,
}

impl AffineRoot {
    pub fn is_positive(&self) -> bool {
        self.k > 0 || (self.k == 0 && RootSystem::is_positive_root(&self.real))
    }

    pub fn negate(&self) -> AffineRoot {
        AffineRoot { real: neg(&self.real), k: -self.k }
    }
}

/// The affine simple root α_i, with α_0 = δ − θ.
pub fn simple_affine_root(rs: &RootSystem, i: usize) -> AffineRoot {
    if i == 0 {
        AffineRoot { real: neg(&rs.highest_root), k: 1 }
    } else {
        AffineRoot { real: rs.simple_root(i - 1), k: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtAffineElem {
    pub nu: Coweight,
    pub w: WeylElem,
}

/// The reflection s_θ.
pub fn s_theta(rs: &RootSystem) -> WeylElem {
    let rho = rs.rho();
    let c = rs.coroot_pair(&rs.highest_root, &rho);
    let theta = rs.root_to_weight(&rs.highest_root);
    let img: Weight = rho.iter().zip(&theta).map(|(r, t)| r - c * t).collect();
    WeylElem::from_rho_image(rs, img)
}

impl ExtAffineElem {
    pub fn identity(rs: &RootSystem) -> Self {
        ExtAffineElem { nu: rs.zero(), w: WeylElem::identity(rs) }
    }

    pub fn translation(rs: &RootSystem, nu: &Coweight) -> Self {
        ExtAffineElem { nu: nu.clone(), w: WeylElem::identity(rs) }
    }

    pub fn finite(rs: &RootSystem, w: WeylElem) -> Self {
        ExtAffineElem { nu: rs.zero(), w }
    }

    /// Affine simple reflection s_i, i ∈ {0, …, n}.
    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        if i == 0 {
            ExtAffineElem { nu: rs.theta_coroot(), w: s_theta(rs) }
        } else {
            ExtAffineElem::finite(rs, WeylElem::simple(rs, i - 1))
        }
    }

    /// (ν, w)(ν', w') = (ν + wν', ww')
    pub fn mul(&self, rs: &RootSystem, other: &ExtAffineElem) -> Self {
        ExtAffineElem {
            nu: add(&self.nu, &self.w.act_coweight(rs, &other.nu)),
            w: self.w.mul(rs, &other.w),
        }
    }

    pub fn inverse(&self, rs: &RootSystem) -> Self {
        let winv = self.w.inverse(rs);
        ExtAffineElem { nu: neg(&winv.act_coweight(rs, &self.nu)), w: winv }
    }

    pub fn act_affine(&self, rs: &RootSystem, r: &AffineRoot) -> AffineRoot {
        let g = self.w.act_root(rs, &r.real);
        let c = RootSystem::pair_root(&g, &self.nu);
        AffineRoot { real: g, k: r.k - c }
    }

    /// Action on μ + 0δ; returns the weight and the δ-coefficient (the q-exponent).
    pub fn act_weight(&self, rs: &RootSystem, mu: &Weight) -> (Weight, Rational64) {
        let wm = self.w.act(mu);
        let c = -rs.pair(&wm, &self.nu);
        (wm, c)
    }

    /// Number of positive affine roots sent to negative ones.
    pub fn length(&self, rs: &RootSystem) -> usize {
        let mut total = 0i64;
        for beta in rs.roots() {
            let g = self.w.act_root(rs, &beta);
            let c = RootSystem::pair_root(&g, &self.nu);
            let k_min = if RootSystem::is_positive_root(&beta) { 0 } else { 1 };
            let k_max = if RootSystem::is_positive_root(&g) { c - 1 } else { c };
            if k_max >= k_min {
                total += k_max - k_min + 1;
            }
        }
        total as usize
    }

    pub fn is_length_zero(&self, rs: &RootSystem) -> bool {
        (0..=rs.rank()).all(|i| self.act_affine(rs, &simple_affine_root(rs, i)).is_positive())
    }

    /// For a length-zero element, the index map i ↦ j with π(α_i) = α_j.
    pub fn diagram_permutation(&self, rs: &RootSystem) -> Result<Vec<usize>> {
        let simples: Vec<AffineRoot> = (0..=rs.rank()).map(|i| simple_affine_root(rs, i)).collect();
        simples
            .iter()
            .map(|a| {
                let img = self.act_affine(rs, a);
                simples
                    .iter()
                    .position(|b| *b == img)
                    .ok_or(Error::NotLengthZero(self.length(rs)))
            })
            .collect()
    }
}

/// x = π s_{i_1} … s_{i_l} with l(π) = 0 and l = l(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedDecomp {
    pub pi: ExtAffineElem,
    pub word: Vec<usize>,
}

/// Greedy decomposition: peel s_i off the right while x(α_i) < 0, least i first.
pub fn reduced_decomposition(rs: &RootSystem, x: &ExtAffineElem) -> ReducedDecomp {
    let mut cur = x.clone();
    let mut rev = Vec::new();
    loop {
        let found = (0..=rs.rank())
            .find(|&i| !cur.act_affine(rs, &simple_affine_root(rs, i)).is_positive());
        match found {
            Some(i) => {
                cur = cur.mul(rs, &ExtAffineElem::simple(rs, i));
                rev.push(i);
            }
            None => break,
        }
    }
    rev.reverse();
    ReducedDecomp { pi: cur, word: rev }
}

pub fn reduced_translation(rs: &RootSystem, nu: &Coweight) -> ReducedDecomp {
    reduced_decomposition(rs, &ExtAffineElem::translation(rs, nu))
}

impl ReducedDecomp {
    pub fn recompose(&self, rs: &RootSystem) -> ExtAffineElem {
        self.word
            .iter()
            .fold(self.pi.clone(), |acc, &i| acc.mul(rs, &ExtAffineElem::simple(rs, i)))
    }
}

/// π X^λ = q^c X^{w_π λ}; returns (w_π λ, c).
pub fn pi_on_weight(rs: &RootSystem, pi: &ExtAffineElem, lambda: &Weight) -> Result<(Weight, Rational64)> {
    let l = pi.length(rs);
    if l != 0 {
        return Err(Error::NotLengthZero(l));
    }
    Ok(pi.act_weight(rs, lambda))
}
