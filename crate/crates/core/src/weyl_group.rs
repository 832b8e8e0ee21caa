//! Finite Weyl groups: elements, actions, Bruhat order, parabolic subgroups,
//! and the Cherednik orders on weights.
//!
//! An element is identified by the image of ρ, which determines it uniquely.
//! Words are read left to right as products, so `[i, j]` is `s_i s_j` and acts
//! on a weight by applying `s_j` first.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::root_system::{sub, Root, RootSystem, Weight};

#[derive(Debug, Clone)]
pub struct WeylElem {
    word: Vec<usize>,
    rho_image: Weight,
    /// Column j is w(ω_j).
    matrix: Vec<Vec<i64>>,
}

impl PartialEq for WeylElem {
    fn eq(&self, other: &Self) -> bool {
        self.rho_image == other.rho_image
    }
}
impl Eq for WeylElem {}

impl std::hash::Hash for WeylElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rho_image.hash(state)
    }
}

impl PartialOrd for WeylElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Length first, then the canonical word; a total order for deterministic iteration.
impl Ord for WeylElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

fn apply_word(rs: &RootSystem, word: &[usize], w: &Weight) -> Weight {
    let mut v = w.clone();
    for &i in word.iter().rev() {
        v = rs.reflect_weight(i, &v);
    }
    v
}

impl WeylElem {
    pub fn identity(rs: &RootSystem) -> Self {
        Self::from_rho_image(rs, rs.rho())
    }

    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        Self::from_word(rs, &[i])
    }

    /// The element `s_{w[0]} s_{w[1]} ...`; the word need not be reduced.
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Self {
        Self::from_rho_image(rs, apply_word(rs, word, &rs.rho()))
    }

    /// Rebuild the element from wρ; recovers the lexicographically least reduced word.
    pub fn from_rho_image(rs: &RootSystem, rho_image: Weight) -> Self {
        let mut word = Vec::new();
        let mut v = rho_image.clone();
        while let Some(i) = v.iter().position(|&x| x < 0) {
            word.push(i);
            v = rs.reflect_weight(i, &v);
        }
        let n = rs.rank();
        let mut matrix = vec![vec![0i64; n]; n];
        for j in 0..n {
            let col = apply_word(rs, &word, &rs.fundamental_weight(j));
            for (k, x) in col.into_iter().enumerate() {
                matrix[k][j] = x;
            }
        }
        WeylElem { word, rho_image, matrix }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn rho_image(&self) -> &Weight {
        &self.rho_image
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn act(&self, w: &Weight) -> Weight {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn act_root(&self, rs: &RootSystem, r: &Root) -> Root {
        let mut v = r.clone();
        for &i in self.word.iter().rev() {
            v = rs.reflect_root(i, &v);
        }
        v
    }

    pub fn act_coweight(&self, rs: &RootSystem, nu: &[i64]) -> Vec<i64> {
        let mut v = nu.to_vec();
        for &i in self.word.iter().rev() {
            v = rs.reflect_coweight(i, &v);
        }
        v
    }

    pub fn mul(&self, rs: &RootSystem, other: &WeylElem) -> WeylElem {
        Self::from_rho_image(rs, self.act(&other.rho_image))
    }

    pub fn inverse(&self, rs: &RootSystem) -> WeylElem {
        let rev: Vec<usize> = self.word.iter().rev().copied().collect();
        Self::from_word(rs, &rev)
    }

    /// s_i w
    pub fn left_mul_simple(&self, rs: &RootSystem, i: usize) -> WeylElem {
        Self::from_rho_image(rs, rs.reflect_weight(i, &self.rho_image))
    }

    /// w s_i
    pub fn right_mul_simple(&self, rs: &RootSystem, i: usize) -> WeylElem {
        let mut word = self.word.clone();
        word.push(i);
        Self::from_word(rs, &word)
    }

    /// l(s_i w) < l(w)
    pub fn has_left_descent(&self, i: usize) -> bool {
        self.rho_image[i] < 0
    }

    /// l(w s_i) < l(w), i.e. w(α_i) < 0.
    pub fn has_right_descent(&self, rs: &RootSystem, i: usize) -> bool {
        let r = self.act_root(rs, &rs.simple_root(i));
        r.iter().all(|&x| x <= 0)
    }

    /// Bruhat order u ≤ self, by the lifting property.
    pub fn bruhat_geq(&self, rs: &RootSystem, u: &WeylElem) -> bool {
        let mut memo = HashMap::new();
        bruhat_rec(rs, u.rho_image.clone(), self.rho_image.clone(), &mut memo)
    }

    /// Bruhat order via subwords of the canonical reduced word.
    pub fn bruhat_geq_subword(&self, rs: &RootSystem, u: &WeylElem) -> bool {
        if u.length() > self.length() {
            return false;
        }
        let mut below: BTreeSet<Weight> = BTreeSet::from([rs.rho()]);
        for &s in &self.word {
            let extra: Vec<Weight> = below
                .iter()
                .map(|x| {
                    // x ↦ x s : (x s)ρ = x(s ρ)
                    let xe = WeylElem::from_rho_image(rs, x.clone());
                    xe.act(&rs.reflect_weight(s, &rs.rho()))
                })
                .collect();
            below.extend(extra);
        }
        below.contains(&u.rho_image)
    }
}

fn bruhat_rec(
    rs: &RootSystem,
    u: Weight,
    w: Weight,
    memo: &mut HashMap<(Weight, Weight), bool>,
) -> bool {
    if u == w {
        return true;
    }
    let Some(s) = w.iter().position(|&x| x < 0) else {
        // w = e and u ≠ e
        return false;
    };
    if let Some(&v) = memo.get(&(u.clone(), w.clone())) {
        return v;
    }
    let sw = rs.reflect_weight(s, &w);
    let u2 = if u[s] < 0 { rs.reflect_weight(s, &u) } else { u.clone() };
    let res = bruhat_rec(rs, u2, sw, memo);
    memo.insert((u, w), res);
    res
}

/// A subset J of the simple roots (0-based indices internally).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParabolicJ(pub BTreeSet<usize>);

impl ParabolicJ {
    pub fn empty() -> Self {
        ParabolicJ(BTreeSet::new())
    }

    pub fn full(rs: &RootSystem) -> Self {
        ParabolicJ((0..rs.rank()).collect())
    }

    pub fn new(rs: &RootSystem, idx: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = idx.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&i| i >= rs.rank()) {
            return Err(Error::Parse(format!("simple root index {} out of range", bad + 1)));
        }
        Ok(ParabolicJ(set))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &ParabolicJ) -> bool {
        self.0.is_subset(&other.0)
    }

    /// All subsets of this set.
    pub fn subsets(&self) -> Vec<ParabolicJ> {
        let v: Vec<usize> = self.iter().collect();
        (0..1u32 << v.len())
            .map(|mask| {
                ParabolicJ(
                    v.iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| i)
                        .collect(),
                )
            })
            .collect()
    }

    /// λ ∈ P_J^-: every J-coordinate is ≤ 0.
    pub fn is_antidominant(&self, w: &Weight) -> bool {
        self.iter().all(|i| w[i] <= 0)
    }

    pub fn check_antidominant(&self, w: &Weight) -> Result<()> {
        if self.is_antidominant(w) {
            Ok(())
        } else {
            Err(Error::NotJAntidominant { j: self.one_based(), weight: w.clone() })
        }
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Positive roots of the Levi root subsystem Φ_J.
    pub fn positive_roots(&self, rs: &RootSystem) -> Vec<Root> {
        rs.positive_roots
            .iter()
            .filter(|r| r.iter().enumerate().all(|(i, &c)| c == 0 || self.contains(i)))
            .cloned()
            .collect()
    }
}

/// Every element of the subgroup generated by `{s_i : i ∈ J}`, sorted by length.
pub fn parabolic_elements(rs: &RootSystem, j: &ParabolicJ) -> Vec<WeylElem> {
    let mut seen: BTreeSet<Weight> = BTreeSet::new();
    let mut out = Vec::new();
    let e = rs.rho();
    seen.insert(e.clone());
    let mut queue = VecDeque::from([e]);
    while let Some(v) = queue.pop_front() {
        for i in j.iter() {
            let u = rs.reflect_weight(i, &v);
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
        out.push(WeylElem::from_rho_image(rs, v));
    }
    out.sort();
    out
}

pub fn all_elements(rs: &RootSystem) -> Vec<WeylElem> {
    parabolic_elements(rs, &ParabolicJ::full(rs))
}

/// Longest element of W_J.
pub fn longest_element(rs: &RootSystem, j: &ParabolicJ) -> WeylElem {
    let mut w = WeylElem::identity(rs);
    loop {
        match j.iter().find(|&i| !w.has_right_descent(rs, i)) {
            Some(i) => w = w.right_mul_simple(rs, i),
            None => return w,
        }
    }
}

/// Minimal-length representatives of the left cosets W_J / W_K (K ⊆ J).
pub fn min_left_coset_reps(rs: &RootSystem, j: &ParabolicJ, k: &ParabolicJ) -> Vec<WeylElem> {
    parabolic_elements(rs, j)
        .into_iter()
        .filter(|s| k.iter().all(|i| !s.has_right_descent(rs, i)))
        .collect()
}

/// Minimal-length representatives of the right cosets W_K \ W_J (K ⊆ J).
pub fn min_right_coset_reps(rs: &RootSystem, j: &ParabolicJ, k: &ParabolicJ) -> Vec<WeylElem> {
    parabolic_elements(rs, j)
        .into_iter()
        .filter(|s| k.iter().all(|i| !s.has_left_descent(i)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntidominantData {
    pub anti: Weight,
    pub sigma: WeylElem,
}

/// λ_- and the shortest σ_λ with σ_λ(λ_-) = λ.
pub fn antidominant(rs: &RootSystem, lambda: &Weight) -> AntidominantData {
    let mut v = lambda.clone();
    let mut word = Vec::new();
    while let Some(i) = v.iter().position(|&x| x > 0) {
        word.push(i);
        v = rs.reflect_weight(i, &v);
    }
    AntidominantData { anti: v, sigma: WeylElem::from_word(rs, &word) }
}

/// The W-orbit of a weight, sorted lexicographically.
pub fn orbit(rs: &RootSystem, lambda: &Weight) -> Vec<Weight> {
    parabolic_orbit(rs, &ParabolicJ::full(rs), lambda)
}

/// The W_J-orbit of a weight, sorted lexicographically.
pub fn parabolic_orbit(rs: &RootSystem, j: &ParabolicJ, lambda: &Weight) -> Vec<Weight> {
    let mut seen: BTreeSet<Weight> = BTreeSet::from([lambda.clone()]);
    let mut queue = VecDeque::from([lambda.clone()]);
    while let Some(v) = queue.pop_front() {
        for i in j.iter() {
            let u = rs.reflect_weight(i, &v);
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    seen.into_iter().collect()
}

fn strictly_above(rs: &RootSystem, a: &Weight, b: &Weight) -> bool {
    a != b && rs.dominance_leq(b, a)
}

/// λ ⪯ μ in the Cherednik order.
pub fn cherednik_leq(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> bool {
    let (l, m) = (antidominant(rs, lambda).anti, antidominant(rs, mu).anti);
    strictly_above(rs, &l, &m) || (l == m && rs.dominance_leq(mu, lambda))
}

/// λ ⪯^∨ μ in the dual Cherednik order.
pub fn dual_cherednik_leq(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> bool {
    let (l, m) = (antidominant(rs, lambda).anti, antidominant(rs, mu).anti);
    strictly_above(rs, &l, &m) || (l == m && rs.dominance_leq(lambda, mu))
}

/// The same-orbit clause of the Cherednik order, phrased through Bruhat order on σ.
pub fn cherednik_leq_bruhat(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> bool {
    let (a, b) = (antidominant(rs, lambda), antidominant(rs, mu));
    strictly_above(rs, &a.anti, &b.anti) || (a.anti == b.anti && a.sigma.bruhat_geq(rs, &b.sigma))
}

/// Antidominant weights μ with μ − λ_- ∈ Q_+ ∖ {0}, for antidominant λ_-.
pub fn antidominant_above(rs: &RootSystem, anti: &Weight) -> Vec<Weight> {
    let n = rs.rank();
    let bound = rs.form(anti, anti);
    let caps: Vec<i64> = (0..n)
        .map(|i| {
            let w = rs.fundamental_weight(i);
            let nw = rs.form(&w, &w);
            let mut c = 0i64;
            while Rational64::from((c + 1) * (c + 1)) * nw <= bound {
                c += 1;
            }
            c
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        let mu: Weight = cur.iter().map(|c| -c).collect();
        if rs.form(&mu, &mu) <= bound && strictly_above(rs, &mu, anti) {
            out.push(mu);
        }
        // odometer over the box
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if cur[k] < caps[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

/// Sort key realizing a linear extension of ⪯ (smaller first).
pub fn cherednik_sort_key(rs: &RootSystem, nu: &Weight) -> (Rational64, usize, Weight) {
    let a = antidominant(rs, nu);
    (-rs.height(&a.anti), usize::MAX - a.sigma.length(), nu.clone())
}

/// {ν : ν ⪯ λ}, sorted along a fixed linear extension of ⪯ (smallest first, λ last).
pub fn lower_set(rs: &RootSystem, lambda: &Weight) -> Vec<Weight> {
    let a = antidominant(rs, lambda);
    let mut out: Vec<Weight> = Vec::new();
    for mu in antidominant_above(rs, &a.anti) {
        out.extend(orbit(rs, &mu));
    }
    out.extend(orbit(rs, &a.anti).into_iter().filter(|nu| rs.dominance_leq(lambda, nu)));
    out.sort_by_cached_key(|nu| cherednik_sort_key(rs, nu));
    out
}

#[derive(Debug, Clone)]
pub struct CosetData {
    pub w0j: WeylElem,
    /// Generators (0-based) of the stabilizer of w_0^J λ in W_J.
    pub stab_gens: ParabolicJ,
    pub stabilizer: Vec<WeylElem>,
    pub reps: Vec<WeylElem>,
}

pub fn coset_data(rs: &RootSystem, j: &ParabolicJ, lambda: &Weight) -> Result<CosetData> {
    j.check_antidominant(lambda)?;
    let w0j = longest_element(rs, j);
    let lp = w0j.act(lambda);
    let stab_gens = ParabolicJ(j.iter().filter(|&i| lp[i] == 0).collect());
    let stabilizer = parabolic_elements(rs, &stab_gens);
    let reps = min_left_coset_reps(rs, j, &stab_gens);
    Ok(CosetData { w0j, stab_gens, stabilizer, reps })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive check of the two length lemmas for K ⊆ J.
pub fn length_lemmas_check(rs: &RootSystem, j: &ParabolicJ, k: &ParabolicJ) -> LemmaReport {
    let mut rep = LemmaReport::default();
    let wj = parabolic_elements(rs, j);
    let wk = parabolic_elements(rs, k);
    let right = min_right_coset_reps(rs, j, k);
    let left = min_left_coset_reps(rs, j, k);
    let phi_j: Vec<Root> = j.positive_roots(rs);
    let phi_k: Vec<Root> = k.positive_roots(rs);

    // η minimal in W_K η iff Φ^K_+ ⊆ η(Φ^J_+)
    for eta in &wj {
        let image: BTreeSet<Root> = phi_j.iter().map(|r| eta.act_root(rs, r)).collect();
        let crit = phi_k.iter().all(|r| image.contains(r));
        let is_min = right.contains(eta);
        rep.checks += 1;
        if crit != is_min {
            rep.failures.push(format!("coset criterion fails for {:?}", eta.word()));
        }
    }
    for eta in &right {
        for tau in &wk {
            rep.checks += 1;
            let prod = tau.mul(rs, eta);
            if prod.length() != tau.length() + eta.length() {
                rep.failures.push(format!(
                    "l(τη) ≠ l(τ)+l(η) for τ={:?}, η={:?}",
                    tau.word(),
                    eta.word()
                ));
            }
        }
    }
    let w0k = longest_element(rs, k);
    let w0j = longest_element(rs, j);
    let base = w0k.mul(rs, &w0j);
    for sigma in &left {
        rep.checks += 1;
        let lhs = base.length();
        let rhs = sigma.mul(rs, &base).length() + sigma.length();
        if lhs != rhs {
            rep.failures.push(format!("subgroup lemma fails for σ={:?}", sigma.word()));
        }
    }
    rep
}

/// Cross-check: ν ≥ λ in dominance iff σ_ν ≥ σ_λ in Bruhat order, within one orbit.
pub fn dominance_bruhat_agree(rs: &RootSystem, nu: &Weight, lambda: &Weight) -> bool {
    let (a, b) = (antidominant(rs, nu), antidominant(rs, lambda));
    debug_assert_eq!(a.anti, b.anti);
    rs.dominance_leq(lambda, nu) == a.sigma.bruhat_geq(rs, &b.sigma)
}

/// Is the difference of two weights in the root lattice?
pub fn same_coset(rs: &RootSystem, a: &Weight, b: &Weight) -> bool {
    rs.weight_to_root(&sub(a, b)).is_some()
}
