//! Cyclic modules D_λ and U_λ over the parahoric current algebra
//! 𝒫_J = 𝔭_J ⊕ z𝔤[z] and their graded characters, for 𝔤 = sl2 and sl3.
//!
//! A module is presented as a quotient of F = U(𝒫_J) ⊗ ℂ_λ, induced from
//! 𝔥 ⊕ 𝔫_J^- (Cartan acting by λ, the degree-zero Levi lowering operators by
//! zero). F has a PBW basis of monomials in the remaining generators, and its
//! bigraded pieces are finite. Since U(𝒫_J) = U(𝓘')U(𝔥)U(𝔫_J^-) with
//! 𝓘' = 𝔫 ⊕ z𝔤[z], the submodule generated by a relation vector r·v is spanned
//! by u·g·r·v with u a monomial over 𝓘' and g a monomial over 𝔫_J^-. The
//! g-orbit of r·v is finite because the weights of F are bounded below in
//! each z-degree.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_ring::{q_expand, LaurentPoly, TMode};
use crate::macdonald_engine::Engine;
use crate::root_system::{add, sub, Root, RootSystem, Weight};
use crate::weyl_group::{antidominant, longest_element, ParabolicJ, WeylElem};

/// Longest word accepted by the straightener.
pub const GUARD: usize = 64;

type Mat = Vec<Vec<i64>>;

/// A basis element of 𝔤 = sl_{n+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisKind {
    /// Matrix unit E_ab (a ≠ b) with its root in simple-root coordinates.
    Root { a: usize, b: usize, root: Root },
    /// h_i = E_ii − E_{i+1,i+1}.
    Cartan(usize),
}

/// x ⊗ z^k for the basis element x of index `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub g: usize,
    pub k: u32,
}

/// Which lift of s_i to the group is used for σ̂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftSign {
    /// n_i = exp(e_i) exp(−f_i) exp(e_i).
    #[default]
    Tits,
    /// n_i^{-1}.
    Inverse,
}

/// Chevalley basis of sl2 or sl3 with integral structure constants, the
/// parahoric selector J, and the current-algebra truncation K.
#[derive(Debug, Clone)]
pub struct LieData {
    pub rs: RootSystem,
    pub j: ParabolicJ,
    pub k_max: u32,
    pub lift: LiftSign,
    size: usize,
    kinds: Vec<BasisKind>,
    heights: Vec<i64>,
    bracket: Vec<Vec<Vec<(i64, usize)>>>,
    root_index: HashMap<Root, usize>,
}

fn identity(m: usize) -> Mat {
    (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let m = a.len();
    (0..m)
        .map(|i| (0..m).map(|j| (0..m).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn unit(m: usize, a: usize, b: usize) -> Mat {
    let mut e = vec![vec![0; m]; m];
    e[a][b] = 1;
    e
}

impl LieData {
    pub fn new(rs: &RootSystem, j: ParabolicJ, k_max: u32) -> Result<Self> {
        if rs.ctype.series != 'A' || rs.rank() > 2 {
            return Err(Error::Unsupported(format!(
                "module characters are implemented for sl2 and sl3, not {}{}",
                rs.ctype.series, rs.ctype.rank
            )));
        }
        let n = rs.rank();
        let size = n + 1;
        let mut kinds = Vec::new();
        for a in 0..size {
            for b in 0..size {
                if a != b {
                    let root = (0..n)
                        .map(|m| {
                            if a < b && a <= m && m < b {
                                1
                            } else if b < a && b <= m && m < a {
                                -1
                            } else {
                                0
                            }
                        })
                        .collect();
                    kinds.push(BasisKind::Root { a, b, root });
                }
            }
        }
        kinds.extend((0..n).map(BasisKind::Cartan));
        let heights = kinds
            .iter()
            .map(|k| match k {
                BasisKind::Root { root, .. } => RootSystem::root_height(root),
                BasisKind::Cartan(_) => 0,
            })
            .collect();
        let root_index = kinds
            .iter()
            .enumerate()
            .filter_map(|(i, k)| match k {
                BasisKind::Root { root, .. } => Some((root.clone(), i)),
                BasisKind::Cartan(_) => None,
            })
            .collect();
        let mut ld = LieData {
            rs: rs.clone(),
            j,
            k_max,
            lift: LiftSign::Tits,
            size,
            kinds,
            heights,
            bracket: Vec::new(),
            root_index,
        };
        let dim = ld.kinds.len();
        let mats: Vec<Mat> = (0..dim).map(|i| ld.matrix(i)).collect();
        ld.bracket = (0..dim)
            .map(|x| {
                (0..dim)
                    .map(|y| ld.decompose(&mat_sub(&mat_mul(&mats[x], &mats[y]), &mat_mul(&mats[y], &mats[x]))))
                    .collect()
            })
            .collect();
        Ok(ld)
    }

    pub fn with_lift(mut self, lift: LiftSign) -> Self {
        self.lift = lift;
        self
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, g: usize) -> &BasisKind {
        &self.kinds[g]
    }

    pub fn root(&self, g: usize) -> Option<&Root> {
        match &self.kinds[g] {
            BasisKind::Root { root, .. } => Some(root),
            BasisKind::Cartan(_) => None,
        }
    }

    pub fn root_gen(&self, root: &Root, k: u32) -> Gen {
        Gen { g: self.root_index[root], k }
    }

    pub fn cartan_gen(&self, i: usize, k: u32) -> Gen {
        Gen { g: self.dim() - self.rs.rank() + i, k }
    }

    /// Weight of x ⊗ z^k in simple-root coordinates.
    pub fn gen_root(&self, x: Gen) -> Root {
        self.root(x.g).cloned().unwrap_or_else(|| vec![0; self.rs.rank()])
    }

    fn matrix(&self, g: usize) -> Mat {
        match &self.kinds[g] {
            BasisKind::Root { a, b, .. } => unit(self.size, *a, *b),
            BasisKind::Cartan(i) => mat_sub(&unit(self.size, *i, *i), &unit(self.size, i + 1, i + 1)),
        }
    }

    /// Coordinates of a traceless matrix in the basis.
    fn decompose(&self, m: &Mat) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        for (g, kind) in self.kinds.iter().enumerate() {
            if let BasisKind::Root { a, b, .. } = kind {
                if m[*a][*b] != 0 {
                    out.push((m[*a][*b], g));
                }
            }
        }
        let n = self.rs.rank();
        let mut partial = 0;
        for i in 0..n {
            partial += m[i][i];
            if partial != 0 {
                out.push((partial, self.dim() - n + i));
            }
        }
        debug_assert_eq!(partial + m[n][n], 0);
        out
    }

    /// [x, y] in the basis.
    pub fn bracket(&self, x: usize, y: usize) -> &[(i64, usize)] {
        &self.bracket[x][y]
    }

    pub fn bracket_gen(&self, x: Gen, y: Gen) -> impl Iterator<Item = (i64, Gen)> + '_ {
        let k = x.k + y.k;
        self.bracket[x.g][y.g].iter().map(move |&(c, g)| (c, Gen { g, k }))
    }

    pub fn in_levi(&self, root: &Root) -> bool {
        root.iter().enumerate().all(|(i, &c)| c == 0 || self.j.contains(i))
    }

    pub fn in_parahoric(&self, x: Gen) -> bool {
        x.k >= 1
            || match self.root(x.g) {
                None => true,
                Some(r) => RootSystem::is_positive_root(r) || self.in_levi(r),
            }
    }

    /// 0 for 𝓘' generators, 1 for degree-zero lowering operators, 2 for degree-zero Cartan.
    fn class(&self, x: Gen) -> u8 {
        if x.k > 0 {
            return 0;
        }
        match self.root(x.g) {
            None => 2,
            Some(r) if !RootSystem::is_positive_root(r) => 1,
            Some(_) => 0,
        }
    }

    /// PBW order: z-degree ascending, then height descending, then index,
    /// with degree-zero lowering operators and degree-zero Cartan elements last.
    pub fn key(&self, x: Gen) -> (u8, u32, i64, usize) {
        (self.class(x), x.k, -self.heights[x.g], x.g)
    }

    pub fn name(&self, x: Gen) -> String {
        let base = match &self.kinds[x.g] {
            BasisKind::Root { a, b, .. } => format!("E{}{}", a + 1, b + 1),
            BasisKind::Cartan(i) => format!("H{}", i + 1),
        };
        if x.k == 0 {
            base
        } else {
            format!("{base}z{}", x.k)
        }
    }

    fn simple_lift(&self, i: usize) -> Mat {
        let m = self.size;
        let id = identity(m);
        let plus = |a: &Mat, s: i64| -> Mat {
            a.iter().zip(&id).map(|(r, e)| r.iter().zip(e).map(|(x, y)| s * x + y).collect()).collect()
        };
        let e = plus(&unit(m, i, i + 1), 1);
        let f = plus(&unit(m, i + 1, i), -1);
        let n = mat_mul(&mat_mul(&e, &f), &e);
        match self.lift {
            LiftSign::Tits => n,
            LiftSign::Inverse => {
                let ei = plus(&unit(m, i, i + 1), -1);
                let fi = plus(&unit(m, i + 1, i), 1);
                mat_mul(&mat_mul(&ei, &fi), &ei)
            }
        }
    }

    /// Group element lifting σ and its inverse.
    fn group_lift(&self, sigma: &WeylElem) -> (Mat, Mat) {
        let mut g = identity(self.size);
        let mut ginv = identity(self.size);
        for &i in sigma.word() {
            let n = self.simple_lift(i);
            let ninv = inverse_monomial(&n);
            g = mat_mul(&g, &n);
            ginv = mat_mul(&ninv, &ginv);
        }
        (g, ginv)
    }

    /// Ad(σ̂) on 𝔤, extended z-linearly.
    pub fn finite_lift(&self, sigma: &WeylElem, g: usize) -> Vec<(i64, usize)> {
        let (n, ninv) = self.group_lift(sigma);
        self.decompose(&mat_mul(&mat_mul(&n, &self.matrix(g)), &ninv))
    }

    /// σ̂(x ⊗ z^k). A root vector e_α z^k goes to ±e_{σα} z^{k'}, where k' = k + 1
    /// if α > 0 > σα, k' = k − 1 if α < 0 < σα, and k' = k otherwise; this is
    /// the smallest shift keeping the image inside 𝓘. `None` when k' < 0.
    pub fn weyl_lift(&self, sigma: &WeylElem, x: Gen) -> Option<Vec<(i64, Gen)>> {
        let image = self.finite_lift(sigma, x.g);
        let Some(alpha) = self.root(x.g) else {
            return Some(image.into_iter().map(|(c, g)| (c, Gen { g, k: x.k })).collect());
        };
        let beta = sigma.act_root(&self.rs, alpha);
        let pa = RootSystem::is_positive_root(alpha);
        let pb = RootSystem::is_positive_root(&beta);
        let k = x.k as i64 + i64::from(pa && !pb) - i64::from(!pa && pb);
        if k < 0 {
            return None;
        }
        debug_assert!(image.len() == 1 && self.root(image[0].1) == Some(&beta));
        Some(image.into_iter().map(|(c, g)| (c, Gen { g, k: k as u32 })).collect())
    }
}

/// Inverse of a signed permutation matrix.
fn inverse_monomial(m: &Mat) -> Mat {
    let n = m.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[j][i] = m[i][j];
        }
    }
    out
}

/// Normal-form element: PBW monomial ↦ integer coefficient.
pub type Combo = BTreeMap<Vec<Gen>, BigInt>;

fn add_to(out: &mut Combo, m: Vec<Gen>, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(m).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        out.retain(|_, v| !v.is_zero());
    }
}

fn unit_combo(m: Vec<Gen>) -> Combo {
    let mut c = Combo::new();
    c.insert(m, BigInt::one());
    c
}

/// PBW straightening in U(𝔤[z]).
pub struct Straightener<'a> {
    ld: &'a LieData,
    memo: RefCell<HashMap<(Gen, Vec<Gen>), Combo>>,
}

impl<'a> Straightener<'a> {
    pub fn new(ld: &'a LieData) -> Self {
        Straightener { ld, memo: RefCell::new(HashMap::new()) }
    }

    /// x · m in normal form, for a sorted monomial m.
    pub fn insert(&self, x: Gen, m: &[Gen]) -> Result<Combo> {
        if m.len() + 1 > GUARD {
            return Err(Error::GuardExceeded(m.len() + 1));
        }
        if m.is_empty() || self.ld.key(x) <= self.ld.key(m[0]) {
            let mut w = Vec::with_capacity(m.len() + 1);
            w.push(x);
            w.extend_from_slice(m);
            return Ok(unit_combo(w));
        }
        let memo_key = (x, m.to_vec());
        if let Some(c) = self.memo.borrow().get(&memo_key) {
            return Ok(c.clone());
        }
        let (y, rest) = (m[0], &m[1..]);
        let mut out = Combo::new();
        for (mono, c) in self.insert(x, rest)? {
            for (mono2, c2) in self.insert(y, &mono)? {
                add_to(&mut out, mono2, &c * c2);
            }
        }
        for (c, z) in self.ld.bracket_gen(x, y) {
            for (mono, c2) in self.insert(z, rest)? {
                add_to(&mut out, mono, c2 * c);
            }
        }
        self.memo.borrow_mut().insert(memo_key, out.clone());
        Ok(out)
    }

    /// Rewrite a word into the PBW basis.
    pub fn straighten(&self, word: &[Gen]) -> Result<Combo> {
        if word.len() > GUARD {
            return Err(Error::GuardExceeded(word.len()));
        }
        let mut acc = unit_combo(Vec::new());
        for &x in word.iter().rev() {
            acc = self.left_mul(x, &acc)?;
        }
        Ok(acc)
    }

    pub fn left_mul(&self, x: Gen, v: &Combo) -> Result<Combo> {
        let mut out = Combo::new();
        for (m, c) in v {
            for (m2, c2) in self.insert(x, m)? {
                add_to(&mut out, m2, c * c2);
            }
        }
        Ok(out)
    }
}

/// Which family of cyclic modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    D,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelationKind {
    /// σ̂(e_α z^k) v = 0 for α < 0.
    Current,
    /// e_α v = 0 for α ∈ Φ_{J−}.
    Levi,
    /// σ̂(e_α)^m v = 0 for α > 0.
    Power,
    /// h z^k v = 0.
    Local,
}

/// coeff · word · v = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub word: Vec<Gen>,
    pub coeff: i64,
}

impl Relation {
    pub fn degree(&self) -> u32 {
        self.word.iter().map(|x| x.k).sum()
    }

    pub fn render(&self, ld: &LieData) -> String {
        let mut s = String::new();
        if self.coeff < 0 {
            s.push('-');
        }
        let mut i = 0;
        while i < self.word.len() {
            let x = self.word[i];
            let run = self.word[i..].iter().take_while(|&&y| y == x).count();
            if !s.is_empty() && s != "-" {
                s.push(' ');
            }
            s.push_str(&ld.name(x));
            if run > 1 {
                s.push_str(&format!("^{run}"));
            }
            i += run;
        }
        s.push_str(" v");
        s
    }
}

/// A cyclic 𝒫_J-module given by generators and relations.
#[derive(Debug, Clone)]
pub struct CyclicModuleSpec {
    pub family: Family,
    pub lambda: Weight,
    pub j: ParabolicJ,
    pub k_max: u32,
    pub relations: Vec<Relation>,
}

/// Defining relations of D_λ or U_λ, with current-algebra z-powers up to K.
///
/// In the U family a power relation can have exponent −⟨α^∨, λ_-⟩ = 0 (α in
/// the stabilizer of λ_-). It is read with exponent 1, the value the general
/// case takes on such roots.
pub fn relations_for(ld: &LieData, family: Family, lambda: &Weight) -> Result<CyclicModuleSpec> {
    let rs = &ld.rs;
    ld.j.check_antidominant(lambda)?;
    let ad = antidominant(rs, lambda);
    let sigma = &ad.sigma;
    let kk = ld.k_max;
    let mut relations = Vec::new();
    let lift_root = |alpha: &Root, k: u32| -> Option<(i64, Gen)> {
        let img = ld.weyl_lift(sigma, ld.root_gen(alpha, k))?;
        Some(img[0])
    };
    let negatives: Vec<Root> = rs.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    for alpha in &negatives {
        for k in 1..=kk {
            if let Some((c, x)) = lift_root(alpha, k) {
                if x.k <= kk {
                    relations.push(Relation { kind: RelationKind::Current, word: vec![x], coeff: c });
                }
            }
        }
    }
    for alpha in &negatives {
        if ld.in_levi(alpha) {
            relations.push(Relation { kind: RelationKind::Levi, word: vec![ld.root_gen(alpha, 0)], coeff: 1 });
        }
    }
    for alpha in &rs.positive_roots {
        let beta = sigma.act_root(rs, alpha);
        let pb = RootSystem::is_positive_root(&beta);
        let base = -rs.coroot_pair(alpha, &ad.anti);
        let plus_one = match family {
            Family::D => pb,
            Family::U => !pb || ld.in_levi(&beta),
        };
        let m = (base + i64::from(plus_one)).max(1) as usize;
        let (c, x) = lift_root(alpha, 0).expect("degree-zero lift of a positive root");
        let coeff = if m % 2 == 1 { c } else { c * c };
        relations.push(Relation { kind: RelationKind::Power, word: vec![x; m], coeff });
    }
    for i in 0..rs.rank() {
        for k in 1..=kk {
            relations.push(Relation { kind: RelationKind::Local, word: vec![ld.cartan_gen(i, k)], coeff: 1 });
        }
    }
    Ok(CyclicModuleSpec { family, lambda: lambda.clone(), j: ld.j.clone(), k_max: kk, relations })
}

/// The induced module F with its generator v of weight λ.
struct Induced<'a> {
    ld: &'a LieData,
    pbw: Straightener<'a>,
    lambda: Weight,
    memo: RefCell<HashMap<(Gen, Vec<Gen>), Combo>>,
}

impl<'a> Induced<'a> {
    fn new(ld: &'a LieData, lambda: &Weight) -> Self {
        Induced { ld, pbw: Straightener::new(ld), lambda: lambda.clone(), memo: RefCell::new(HashMap::new()) }
    }

    /// Push a U(𝒫_J) normal form onto v.
    fn evaluate(&self, c: Combo) -> Combo {
        let mut out = Combo::new();
        'terms: for (m, coef) in c {
            let split = m.iter().position(|&x| self.ld.class(x) != 0).unwrap_or(m.len());
            let mut scale = coef;
            for &x in &m[split..] {
                match self.ld.kind(x.g) {
                    BasisKind::Cartan(i) => scale *= self.lambda[*i],
                    BasisKind::Root { root, .. } => {
                        debug_assert!(self.ld.in_levi(root));
                        continue 'terms;
                    }
                }
            }
            add_to(&mut out, m[..split].to_vec(), scale);
        }
        out
    }

    fn act(&self, x: Gen, m: &[Gen]) -> Result<Combo> {
        let key = (x, m.to_vec());
        if let Some(c) = self.memo.borrow().get(&key) {
            return Ok(c.clone());
        }
        let c = self.evaluate(self.pbw.insert(x, m)?);
        self.memo.borrow_mut().insert(key, c.clone());
        Ok(c)
    }

    fn act_vec(&self, x: Gen, v: &Combo) -> Result<Combo> {
        let mut out = Combo::new();
        for (m, c) in v {
            for (m2, c2) in self.act(x, m)? {
                add_to(&mut out, m2, c * c2);
            }
        }
        Ok(out)
    }

    fn apply_word(&self, word: &[Gen], v: &Combo) -> Result<Combo> {
        let mut acc = v.clone();
        for &x in word.iter().rev() {
            acc = self.act_vec(x, &acc)?;
            if acc.is_empty() {
                break;
            }
        }
        Ok(acc)
    }
}

/// Fraction-free row echelon form over ℤ.
struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut r: Vec<BigInt>) {
        for (p, row) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let a = row[*p].clone();
            let b = r[*p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                *x = &*x * &a - &b * y;
            }
            let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in r.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            self.rows.push((p, r));
        }
    }
}

/// Enumerates PBW monomials over 𝓘' of a given bidegree.
struct MonomialTable<'a> {
    ld: &'a LieData,
    cache: HashMap<(u32, Root), Vec<Vec<Gen>>>,
}

impl<'a> MonomialTable<'a> {
    fn new(ld: &'a LieData) -> Self {
        MonomialTable { ld, cache: HashMap::new() }
    }

    fn get(&mut self, d: u32, beta: &Root) -> &[Vec<Gen>] {
        let key = (d, beta.clone());
        if !self.cache.contains_key(&key) {
            let v = self.build(d, beta);
            self.cache.insert(key.clone(), v);
        }
        &self.cache[&key]
    }

    fn build(&self, d: u32, beta: &Root) -> Vec<Vec<Gen>> {
        let ld = self.ld;
        let current: Vec<Gen> =
            (1..=d).flat_map(|k| (0..ld.dim()).map(move |g| Gen { g, k })).collect();
        let positive: Vec<Gen> = ld.rs.positive_roots.iter().map(|r| ld.root_gen(r, 0)).collect();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn zpart(
            gens: &[Gen],
            from: usize,
            left: u32,
            stack: &mut Vec<Gen>,
            emit: &mut dyn FnMut(&[Gen]),
        ) {
            if left == 0 {
                emit(stack);
                return;
            }
            for i in from..gens.len() {
                if gens[i].k <= left {
                    stack.push(gens[i]);
                    zpart(gens, i, left - gens[i].k, stack, emit);
                    stack.pop();
                }
            }
        }
        fn roots_summing(
            ld: &LieData,
            gens: &[Gen],
            from: usize,
            left: &Root,
            stack: &mut Vec<Gen>,
            emit: &mut dyn FnMut(&[Gen]),
        ) {
            if left.iter().all(|&c| c == 0) {
                emit(stack);
                return;
            }
            for i in from..gens.len() {
                let r = ld.gen_root(gens[i]);
                let rest = sub(left, &r);
                if rest.iter().all(|&c| c >= 0) {
                    stack.push(gens[i]);
                    roots_summing(ld, gens, i, &rest, stack, emit);
                    stack.pop();
                }
            }
        }
        zpart(&current, 0, d, &mut stack, &mut |z: &[Gen]| {
            let zw = z.iter().fold(vec![0; beta.len()], |acc, &x| add(&acc, &ld.gen_root(x)));
            let left = sub(beta, &zw);
            if left.iter().any(|&c| c < 0) {
                return;
            }
            let mut inner = Vec::new();
            roots_summing(ld, &positive, 0, &left, &mut inner, &mut |p: &[Gen]| {
                let mut m: Vec<Gen> = z.iter().chain(p).copied().collect();
                m.sort_by_key(|&x| ld.key(x));
                out.push(m);
            });
        });
        out
    }
}

/// Graded character Σ dim M_{k,μ} q^k X^μ over a finite window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCharacter {
    pub lambda: Weight,
    pub entries: BTreeMap<(u32, Weight), u64>,
    pub q_max: u32,
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterEntry {
    pub q: u32,
    pub weight: Weight,
    pub dim: u64,
}

impl GradedCharacter {
    pub fn dim(&self, q: u32, w: &Weight) -> u64 {
        self.entries.get(&(q, w.clone())).copied().unwrap_or(0)
    }

    pub fn export(&self) -> Vec<CharacterEntry> {
        self.entries
            .iter()
            .map(|((q, w), d)| CharacterEntry { q: *q, weight: w.clone(), dim: *d })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.export()).expect("character entries serialize")
    }

    /// Total dimension through q_max.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }
}

impl fmt::Display for GradedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|((q, w), d)| {
                let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                format!("{d}*q^{q}*X[{}]", ws.join(","))
            })
            .collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

fn l1(r: &Root) -> u32 {
    r.iter().map(|x| x.unsigned_abs() as u32).sum()
}

fn lattice_ball(n: usize, depth: u32) -> Vec<Root> {
    let d = depth as i64;
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Root| {
                (-d..=d).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.retain(|r| l1(r) <= depth);
    out
}

/// Dimensions of every bigraded piece (k, μ) with k ≤ q_max and
/// |μ − λ|_1 ≤ depth, the norm taken in simple-root coordinates.
pub fn character(ld: &LieData, spec: &CyclicModuleSpec, q_max: u32, depth: u32) -> Result<GradedCharacter> {
    if spec.k_max < q_max {
        return Err(Error::TruncationTooSmall { k: spec.k_max, need: q_max });
    }
    let rs = &ld.rs;
    let module = Induced::new(ld, &spec.lambda);
    let v = unit_combo(Vec::new());
    let lowering: Vec<Gen> = rs
        .positive_roots
        .iter()
        .filter(|r| ld.in_levi(r))
        .map(|r| ld.root_gen(&r.iter().map(|x| -x).collect(), 0))
        .collect();

    // Generators of the relation submodule: g·r·v with bidegree.
    let mut gens: Vec<(u32, Root, Combo)> = Vec::new();
    for r in &spec.relations {
        if r.degree() > q_max {
            continue;
        }
        let mut rv = module.apply_word(&r.word, &v)?;
        for c in rv.values_mut() {
            *c *= r.coeff;
        }
        if rv.is_empty() {
            continue;
        }
        let beta = r.word.iter().fold(vec![0; rs.rank()], |acc, &x| add(&acc, &ld.gen_root(x)));
        let mut frontier = vec![(rv, beta, lowering.len())];
        while let Some((w, b, allowed)) = frontier.pop() {
            for (i, &f) in lowering.iter().enumerate().take(allowed) {
                let fw = module.act_vec(f, &w)?;
                if !fw.is_empty() {
                    frontier.push((fw, add(&b, &ld.gen_root(f)), i + 1));
                }
            }
            gens.push((r.degree(), b, w));
        }
    }

    let mut table = MonomialTable::new(ld);
    let mut entries = BTreeMap::new();
    for d in 0..=q_max {
        for beta in lattice_ball(rs.rank(), depth) {
            let basis = table.get(d, &beta).to_vec();
            if basis.is_empty() {
                continue;
            }
            let index: HashMap<&Vec<Gen>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut ech = Echelon::new();
            'fill: for (dw, bw, w) in &gens {
                if *dw > d {
                    continue;
                }
                let need = sub(&beta, bw);
                let us = table.get(d - dw, &need).to_vec();
                for u in us {
                    let row = module.apply_word(&u, w)?;
                    if row.is_empty() {
                        continue;
                    }
                    let mut dense = vec![BigInt::zero(); basis.len()];
                    for (m, c) in row {
                        let Some(&i) = index.get(&m) else {
                            return Err(Error::SingularSystem(format!(
                                "relation image left the bidegree ({d}, {beta:?})"
                            )));
                        };
                        dense[i] = c;
                    }
                    ech.insert(dense);
                    if ech.rank() == basis.len() {
                        break 'fill;
                    }
                }
            }
            let dim = basis.len() - ech.rank();
            if dim > 0 {
                entries.insert((d, add(&spec.lambda, &rs.root_to_weight(&beta))), dim as u64);
            }
        }
    }
    Ok(GradedCharacter { lambda: spec.lambda.clone(), entries, q_max, depth })
}

/// One bidegree where the character and the polynomial disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub q: u32,
    pub weight: Weight,
    pub expected: i64,
    pub found: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterReport {
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
    /// Set when the polynomial is not a valid character through q_max.
    pub invalid: Option<String>,
}

/// Coefficients of p as nonnegative integers per (q-degree, weight), through q_max.
pub fn expand_character_poly(
    p: &LaurentPoly,
    q_max: u32,
) -> std::result::Result<BTreeMap<(u32, Weight), i64>, String> {
    let mut out = BTreeMap::new();
    for (w, c) in p.terms() {
        if !c.is_t_free() {
            return Err(format!("coefficient of X^{w:?} depends on t"));
        }
        let s = q_expand(c, Rational64::from(q_max as i64 + 1)).map_err(|e| e.to_string())?;
        for (e, r) in s.terms() {
            if *e > Rational64::from(q_max as i64) {
                continue;
            }
            let bad = || format!("coefficient of q^{e} X^{w:?} is not a nonnegative integer");
            if !e.is_integer() || *e < Rational64::from(0) {
                return Err(bad());
            }
            let v = r.as_constant().ok_or_else(bad)?;
            if !v.is_integer() || v.is_negative() {
                return Err(bad());
            }
            let v = v.to_integer().to_i64().ok_or_else(bad)?;
            if v != 0 {
                out.insert((e.to_integer() as u32, w.clone()), v);
            }
        }
    }
    Ok(out)
}

/// Per-bidegree comparison of a character with a polynomial in X and q.
pub fn compare_character(ch: &GradedCharacter, p: &LaurentPoly, q_max: u32) -> CharacterReport {
    let expected = match expand_character_poly(p, q_max) {
        Ok(e) => e,
        Err(msg) => return CharacterReport { passed: false, mismatches: Vec::new(), invalid: Some(msg) },
    };
    let mut keys: Vec<(u32, Weight)> = expected.keys().cloned().collect();
    keys.extend(ch.entries.keys().filter(|(q, _)| *q <= q_max).cloned());
    keys.sort();
    keys.dedup();
    let mismatches: Vec<Mismatch> = keys
        .into_iter()
        .filter_map(|(q, w)| {
            let e = expected.get(&(q, w.clone())).copied().unwrap_or(0);
            let f = ch.dim(q, &w);
            (e != f as i64).then_some(Mismatch { q, weight: w, expected: e, found: f })
        })
        .collect();
    CharacterReport { passed: mismatches.is_empty(), mismatches, invalid: None }
}

/// The polynomial whose expansion should be the character of the module with
/// generator weight μ: E^J_μ(X,q,0) for D_μ, and E^J_λ(X^{-1},q^{-1},∞) with
/// λ = −w_0^J μ for U_μ.
pub fn expected_character(engine: &Engine, family: Family, j: &ParabolicJ, mu: &Weight) -> Result<LaurentPoly> {
    let rs = engine.rs();
    j.check_antidominant(mu)?;
    match family {
        Family::D => engine.parasym_e(j, mu)?.poly.specialize_t(TMode::Zero),
        Family::U => {
            let lambda: Weight = longest_element(rs, j).act(mu).iter().map(|x| -x).collect();
            let p = engine.parasym_e(j, &lambda)?.poly.specialize_t(TMode::Infinity)?;
            Ok(p.map_weights(|w| w.iter().map(|x| -x).collect()).map_coeffs(|c| c.star_q()))
        }
    }
}

/// Full comparison for one module: builds the relations, computes the character
/// on a window one step wider than the support of the expected polynomial,
/// and compares.
pub fn check_module(engine: &Engine, ld: &LieData, family: Family, mu: &Weight, q_max: u32) -> Result<CharacterReport> {
    let rs = engine.rs();
    let p = expected_character(engine, family, &ld.j, mu)?;
    let mut depth = 0;
    for w in p.support() {
        let Some(r) = rs.weight_to_root(&sub(w, mu)) else {
            return Ok(CharacterReport {
                passed: false,
                mismatches: Vec::new(),
                invalid: Some(format!("X^{w:?} is not in the root-lattice coset of the generator")),
            });
        };
        depth = depth.max(l1(&r));
    }
    let spec = relations_for(ld, family, mu)?;
    let ch = character(ld, &spec, q_max, depth + 1)?;
    Ok(compare_character(&ch, &p, q_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl_group::all_elements;

    fn sl(n: usize, j: &[usize], k: u32) -> LieData {
        let rs = RootSystem::from_name(&format!("A{n}")).unwrap();
        let j = ParabolicJ::new(&rs, j.iter().copied()).unwrap();
        LieData::new(&rs, j, k).unwrap()
    }

    fn combo(ld: &LieData, terms: &[(i64, &[Gen])]) -> Combo {
        let mut c = Combo::new();
        for (k, w) in terms {
            let mut m = w.to_vec();
            m.sort_by_key(|&x| ld.key(x));
            add_to(&mut c, m, BigInt::from(*k));
        }
        c
    }

    #[test]
    fn jacobi_and_grading() {
        for n in [1, 2] {
            let ld = sl(n, &[], 2);
            let d = ld.dim();
            let br = |x: &[(i64, usize)], y: usize| -> BTreeMap<usize, i64> {
                let mut out = BTreeMap::new();
                for &(c, g) in x {
                    for &(c2, h) in ld.bracket(g, y) {
                        *out.entry(h).or_insert(0) += c * c2;
                    }
                }
                out.retain(|_, v| *v != 0);
                out
            };
            for a in 0..d {
                for b in 0..d {
                    let wa = ld.gen_root(Gen { g: a, k: 0 });
                    let wb = ld.gen_root(Gen { g: b, k: 0 });
                    for &(_, g) in ld.bracket(a, b) {
                        assert_eq!(ld.gen_root(Gen { g, k: 0 }), add(&wa, &wb));
                    }
                    for c in 0..d {
                        // [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
                        let mut total = br(ld.bracket(a, b), c);
                        for (h, v) in br(ld.bracket(b, c), a) {
                            *total.entry(h).or_insert(0) += v;
                        }
                        for (h, v) in br(ld.bracket(c, a), b) {
                            *total.entry(h).or_insert(0) += v;
                        }
                        total.retain(|_, v| *v != 0);
                        assert!(total.is_empty(), "Jacobi fails on {a},{b},{c}");
                    }
                }
            }
        }
    }

    #[test]
    fn parahoric_closed() {
        for j in [&[][..], &[0][..], &[1][..], &[0, 1][..]] {
            let ld = sl(2, j, 2);
            let gens: Vec<Gen> = (0..=1)
                .flat_map(|k| (0..ld.dim()).map(move |g| Gen { g, k }))
                .filter(|&x| ld.in_parahoric(x))
                .collect();
            for &x in &gens {
                for &y in &gens {
                    for (_, z) in ld.bracket_gen(x, y) {
                        assert!(ld.in_parahoric(z));
                    }
                }
            }
        }
    }

    #[test]
    fn sl2_straightening() {
        let ld = sl(1, &[0], 3);
        let p = Straightener::new(&ld);
        let e = ld.root_gen(&vec![1], 0);
        let f = ld.root_gen(&vec![-1], 0);
        let h = ld.cartan_gen(0, 0);
        assert_eq!(p.straighten(&[f, e]).unwrap(), combo(&ld, &[(1, &[e, f]), (-1, &[h])]));
        assert_eq!(p.straighten(&[h, e]).unwrap(), combo(&ld, &[(1, &[e, h]), (2, &[e])]));
        assert_eq!(p.straighten(&[e, f]).unwrap(), combo(&ld, &[(1, &[e, f])]));
        let fz = Gen { k: 1, ..f };
        let hz = Gen { k: 2, ..h };
        let out = p.straighten(&[hz, fz, e, e]).unwrap();
        for (m, _) in &out {
            let again = p.straighten(m).unwrap();
            assert_eq!(again.len(), 1);
            assert_eq!(again.keys().next(), Some(m));
            let deg: u32 = m.iter().map(|x| x.k).sum();
            let wt = m.iter().fold(vec![0], |a, &x| add(&a, &ld.gen_root(x)));
            assert_eq!((deg, wt), (3, vec![1]));
        }
        assert!(matches!(p.straighten(&vec![e; GUARD + 1]), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn tits_lift() {
        let ld = sl(1, &[], 1);
        let s = WeylElem::simple(&ld.rs, 0);
        let e = ld.root_gen(&vec![1], 0).g;
        let f = ld.root_gen(&vec![-1], 0).g;
        assert_eq!(ld.finite_lift(&s, e), vec![(-1, f)]);
        assert_eq!(ld.finite_lift(&s, f), vec![(-1, e)]);
        let id = WeylElem::identity(&ld.rs);
        assert_eq!(ld.finite_lift(&id, e), vec![(1, e)]);
        let inv = ld.clone().with_lift(LiftSign::Inverse);
        assert_eq!(inv.finite_lift(&s, e), vec![(-1, f)]);

        let ld = sl(2, &[], 1);
        for sigma in all_elements(&ld.rs) {
            for x in 0..ld.dim() {
                for y in 0..ld.dim() {
                    let lhs: BTreeMap<usize, i64> = ld
                        .bracket(x, y)
                        .iter()
                        .flat_map(|&(c, g)| ld.finite_lift(&sigma, g).into_iter().map(move |(c2, h)| (h, c * c2)))
                        .fold(BTreeMap::new(), |mut m, (h, c)| {
                            *m.entry(h).or_insert(0) += c;
                            m
                        });
                    let mut rhs = BTreeMap::new();
                    for (c1, a) in ld.finite_lift(&sigma, x) {
                        for (c2, b) in ld.finite_lift(&sigma, y) {
                            for &(c3, h) in ld.bracket(a, b) {
                                *rhs.entry(h).or_insert(0) += c1 * c2 * c3;
                            }
                        }
                    }
                    let clean = |m: BTreeMap<usize, i64>| -> BTreeMap<usize, i64> {
                        m.into_iter().filter(|(_, v)| *v != 0).collect()
                    };
                    assert_eq!(clean(lhs), clean(rhs));
                }
                if let Some(r) = ld.root(x) {
                    let img = ld.weyl_lift(&sigma, Gen { g: x, k: 1 }).unwrap();
                    assert_eq!(ld.root(img[0].1.g).unwrap(), &sigma.act_root(&ld.rs, r));
                }
            }
        }
    }

    #[test]
    fn relation_lists() {
        let ld = sl(1, &[], 2);
        let spec = relations_for(&ld, Family::D, &vec![-1]).unwrap();
        let text: Vec<String> = spec.relations.iter().map(|r| r.render(&ld)).collect();
        assert_eq!(text, ["E21z1 v", "E21z2 v", "E12^2 v", "H1z1 v", "H1z2 v"]);

        let spec = relations_for(&ld, Family::D, &vec![1]).unwrap();
        let text: Vec<String> = spec.relations.iter().map(|r| r.render(&ld)).collect();
        assert_eq!(text, ["-E12 v", "-E12z1 v", "-E21z1 v", "H1z1 v", "H1z2 v"]);

        let ld = sl(1, &[0], 1);
        let spec = relations_for(&ld, Family::D, &vec![0]).unwrap();
        let text: Vec<String> = spec.relations.iter().map(|r| r.render(&ld)).collect();
        assert_eq!(text, ["E21z1 v", "E21 v", "E12 v", "H1z1 v"]);
        assert!(matches!(relations_for(&ld, Family::D, &vec![1]), Err(Error::NotJAntidominant { .. })));
    }

    #[test]
    fn trivial_and_small_modules() {
        let ld = sl(1, &[], 3);
        let ch = character(&ld, &relations_for(&ld, Family::D, &vec![0]).unwrap(), 3, 3).unwrap();
        assert_eq!(ch.export(), vec![CharacterEntry { q: 0, weight: vec![0], dim: 1 }]);
        assert_eq!(ch.to_json(), r#"[{"q":0,"weight":[0],"dim":1}]"#);
        let one = LaurentPoly::one(1);
        assert!(compare_character(&ch, &one, 3).passed);
        let two = one.add(&LaurentPoly::x(vec![2]));
        let rep = compare_character(&ch, &two, 3);
        assert!(!rep.passed);
        assert_eq!(rep.mismatches, vec![Mismatch { q: 0, weight: vec![2], expected: 1, found: 0 }]);

        let ch = character(&ld, &relations_for(&ld, Family::D, &vec![-1]).unwrap(), 3, 3).unwrap();
        assert_eq!(ch.to_string(), "1*q^0*X[-1] + 1*q^0*X[1]");
        assert!(matches!(
            character(&ld, &relations_for(&ld, Family::D, &vec![-1]).unwrap(), 4, 1),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn sl2_parahoric_example() {
        let ld = sl(1, &[0], 3);
        let ch = character(&ld, &relations_for(&ld, Family::D, &vec![-2]).unwrap(), 3, 4).unwrap();
        assert_eq!(ch.to_string(), "1*q^0*X[-2] + 1*q^0*X[0] + 1*q^0*X[2] + 1*q^1*X[0]");
    }

    #[test]
    fn monotone_and_sign_independent() {
        for j in [&[][..], &[0][..]] {
            let ld = sl(1, j, 4);
            let inv = ld.clone().with_lift(LiftSign::Inverse);
            for lam in [-2, -1, 0, 1, 2] {
                let lam = vec![lam];
                if !ld.j.is_antidominant(&lam) {
                    continue;
                }
                for fam in [Family::D, Family::U] {
                    let small = character(&ld, &relations_for(&ld, fam, &lam).unwrap(), 2, 3).unwrap();
                    let big = character(&ld, &relations_for(&ld, fam, &lam).unwrap(), 4, 4).unwrap();
                    for ((q, w), d) in &small.entries {
                        assert_eq!(big.dim(*q, w), *d);
                    }
                    for ((q, w), d) in &big.entries {
                        if *q <= 2 && l1(&ld.rs.weight_to_root(&sub(w, &lam)).unwrap()) <= 3 {
                            assert_eq!(small.dim(*q, w), *d);
                        }
                    }
                    let other = character(&inv, &relations_for(&inv, fam, &lam).unwrap(), 4, 4).unwrap();
                    assert_eq!(big, other);
                    assert_eq!(big.dim(0, &lam), 1);
                }
            }
        }
    }

    #[test]
    fn degree_zero_symmetric() {
        let ld = sl(1, &[0], 3);
        for lam in [0, -1, -2] {
            let ch = character(&ld, &relations_for(&ld, Family::D, &vec![lam]).unwrap(), 3, 5).unwrap();
            for ((q, w), d) in &ch.entries {
                if *q == 0 {
                    assert_eq!(ch.dim(0, &vec![-w[0]]), *d);
                }
            }
        }
    }

    #[test]
    fn sl2_matches_specializations() {
        let rs = RootSystem::from_name("A1").unwrap();
        let engine = Engine::new(rs.clone());
        for j in [ParabolicJ::empty(), ParabolicJ::full(&rs)] {
            let ld = LieData::new(&rs, j.clone(), 4).unwrap();
            for lam in -2..=2 {
                let lam = vec![lam];
                if !j.is_antidominant(&lam) {
                    continue;
                }
                for fam in [Family::D, Family::U] {
                    let rep = check_module(&engine, &ld, fam, &lam, 4).unwrap();
                    assert!(rep.passed, "{fam:?} J={:?} λ={lam:?}: {rep:?}", j.one_based());
                }
            }
        }
    }

    #[test]
    fn sl3_matches_specializations() {
        let rs = RootSystem::from_name("A2").unwrap();
        let engine = Engine::new(rs.clone());
        let cases: [(&[usize], [i64; 2]); 5] =
            [(&[], [-1, 0]), (&[], [1, -1]), (&[0], [-1, 1]), (&[1], [0, -1]), (&[0, 1], [-1, 0])];
        for (j, lam) in cases {
            let ld = LieData::new(&rs, ParabolicJ::new(&rs, j.iter().copied()).unwrap(), 3).unwrap();
            for fam in [Family::D, Family::U] {
                let rep = check_module(&engine, &ld, fam, &lam.to_vec(), 3).unwrap();
                assert!(rep.passed, "{fam:?} J={j:?} λ={lam:?}: {rep:?}");
            }
        }
    }
}
