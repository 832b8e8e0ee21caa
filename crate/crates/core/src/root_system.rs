//! Finite root systems of types A–G.
//!
//! Weights and coweights are integer vectors in the fundamental (co)weight
//! basis; roots are integer vectors in the simple-root basis. The invariant
//! form is normalized so that long roots have squared length 2.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A weight in fundamental-weight coordinates (⟨λ, α_i^∨⟩)_i.
pub type Weight = Vec<i64>;
/// A coweight in fundamental-coweight coordinates (⟨α_i, ν⟩)_i.
pub type Coweight = Vec<i64>;
/// A root in simple-root coordinates.
pub type Root = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub series: char,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: char, rank: usize) -> Result<Self> {
        let series = series.to_ascii_uppercase();
        let ok = match series {
            'A' => rank >= 1,
            'B' => rank >= 2,
            'C' => rank >= 2,
            'D' => rank >= 3,
            'E' => (6..=8).contains(&rank),
            'F' => rank == 4,
            'G' => rank == 2,
            _ => false,
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(Error::InvalidType(format!("{series}{rank}")))
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars
            .next()
            .ok_or_else(|| Error::InvalidType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        CartanType::new(series, rank)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// Cartan matrix a_ij = ⟨α_i^∨, α_j⟩ in Bourbaki numbering.
fn cartan_matrix(ct: CartanType) -> Vec<Vec<i64>> {
    let n = ct.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match ct.series {
        'A' | 'B' | 'C' => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        'D' => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        'E' => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        'F' => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        'G' => link(0, 1),
        _ => unreachable!(),
    }
    match ct.series {
        'B' => a[n - 1][n - 2] = -2,
        'C' => a[n - 2][n - 1] = -2,
        'F' => a[2][1] = -2,
        'G' => a[0][1] = -3,
        _ => {}
    }
    a
}

/// Finite root-system data. Immutable after construction.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub ctype: CartanType,
    pub cartan: Vec<Vec<i64>>,
    /// (α_i, α_i)/2, with long roots normalized to 1.
    pub half_norms: Vec<Rational64>,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    pub positive_roots: Vec<Root>,
    pub highest_root: Root,
    pub e: i64,
    inv_cartan: Vec<Vec<Rational64>>,
}

impl RootSystem {
    pub fn new(ctype: CartanType) -> Self {
        let cartan = cartan_matrix(ctype);
        let n = ctype.rank;
        let half_norms = symmetrizer(&cartan);
        let inv_cartan = invert(&cartan);
        let positive_roots = enumerate_positive_roots(&cartan);
        let highest_root = positive_roots
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
            .expect("nonempty root system");
        let mut e = 1i64;
        for row in &inv_cartan {
            for x in row {
                e = e.lcm(x.denom());
            }
        }
        debug_assert_eq!(cartan.len(), n);
        RootSystem {
            ctype,
            cartan,
            half_norms,
            positive_roots,
            highest_root,
            e,
            inv_cartan,
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }

    pub fn rank(&self) -> usize {
        self.ctype.rank
    }

    pub fn zero(&self) -> Weight {
        vec![0; self.rank()]
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut w = self.zero();
        w[i] = 1;
        w
    }

    /// ρ = Σ ω_i (also ρ^∨ = Σ ω_i^∨ in coweight coordinates).
    pub fn rho(&self) -> Weight {
        vec![1; self.rank()]
    }

    /// All roots, positive first.
    pub fn roots(&self) -> Vec<Root> {
        let mut all = self.positive_roots.clone();
        all.extend(self.positive_roots.iter().map(|r| neg(r)));
        all
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut r = vec![0; self.rank()];
        r[i] = 1;
        r
    }

    /// Simple root α_i in weight coordinates (column i of the Cartan matrix).
    pub fn simple_root_weight(&self, i: usize) -> Weight {
        (0..self.rank()).map(|k| self.cartan[k][i]).collect()
    }

    /// Convert a root (simple-root coordinates) to weight coordinates.
    pub fn root_to_weight(&self, r: &Root) -> Weight {
        let n = self.rank();
        (0..n)
            .map(|k| (0..n).map(|j| self.cartan[k][j] * r[j]).sum())
            .collect()
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn weight_to_root_coords(&self, w: &Weight) -> Vec<Rational64> {
        let n = self.rank();
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| self.inv_cartan[j][k] * Rational64::from(w[k]))
                    .fold(Rational64::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Integral simple-root coordinates, if the weight lies in Q.
    pub fn weight_to_root(&self, w: &Weight) -> Option<Root> {
        self.weight_to_root_coords(w)
            .into_iter()
            .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
            .collect()
    }

    /// Height Σ_j m_j of a weight written in simple roots.
    pub fn height(&self, w: &Weight) -> Rational64 {
        self.weight_to_root_coords(w)
            .into_iter()
            .fold(Rational64::zero(), |a, b| a + b)
    }

    pub fn root_height(r: &Root) -> i64 {
        r.iter().sum()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.positive_roots.contains(r) || self.positive_roots.contains(&neg(r))
    }

    pub fn is_positive_root(r: &Root) -> bool {
        r.iter().all(|&x| x >= 0) && r.iter().any(|&x| x > 0)
    }

    /// ⟨λ, ν⟩ for a weight λ and a coweight ν.
    pub fn pair(&self, lambda: &Weight, nu: &Coweight) -> Rational64 {
        self.weight_to_root_coords(lambda)
            .into_iter()
            .zip(nu)
            .map(|(m, &v)| m * Rational64::from(v))
            .fold(Rational64::zero(), |a, b| a + b)
    }

    /// ⟨α, ν⟩ for a root α in simple-root coordinates.
    pub fn pair_root(r: &Root, nu: &Coweight) -> i64 {
        r.iter().zip(nu).map(|(a, b)| a * b).sum()
    }

    /// ⟨α^∨, λ⟩ for a root α and a weight λ.
    pub fn coroot_pair(&self, r: &Root, lambda: &Weight) -> i64 {
        let num: Rational64 = (0..self.rank())
            .map(|j| Rational64::from(r[j]) * self.half_norms[j] * Rational64::from(lambda[j]))
            .fold(Rational64::zero(), |a, b| a + b);
        let v = num / self.root_half_norm(r);
        debug_assert!(v.is_integer());
        v.to_integer()
    }

    /// The coroot α^∨ in fundamental-coweight coordinates.
    pub fn coroot(&self, r: &Root) -> Coweight {
        let hn = self.root_half_norm(r);
        (0..self.rank())
            .map(|k| {
                let v = self.form_roots(&self.simple_root(k), r) / hn;
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    }

    /// (α, β) for roots in simple-root coordinates.
    pub fn form_roots(&self, a: &Root, b: &Root) -> Rational64 {
        let n = self.rank();
        let mut s = Rational64::zero();
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] != 0 {
                    s += Rational64::from(a[i] * b[j] * self.cartan[i][j]) * self.half_norms[i];
                }
            }
        }
        s
    }

    /// (α, α)/2.
    pub fn root_half_norm(&self, r: &Root) -> Rational64 {
        self.form_roots(r, r) / Rational64::from(2)
    }

    /// Invariant form (λ, μ) on weights.
    pub fn form(&self, a: &Weight, b: &Weight) -> Rational64 {
        let ma = self.weight_to_root_coords(a);
        // (λ, α_j) = d_j ⟨α_j^∨, λ⟩ = d_j λ_j
        ma.iter()
            .enumerate()
            .map(|(j, m)| *m * self.half_norms[j] * Rational64::from(b[j]))
            .fold(Rational64::zero(), |x, y| x + y)
    }

    /// The coweight θ^∨.
    pub fn theta_coroot(&self) -> Coweight {
        self.coroot(&self.highest_root)
    }

    /// μ ≤ λ in dominance order: λ − μ ∈ Q_+. False across Q-cosets.
    pub fn dominance_leq(&self, mu: &Weight, lambda: &Weight) -> bool {
        match self.weight_to_root(&sub(lambda, mu)) {
            Some(r) => r.iter().all(|&x| x >= 0),
            None => false,
        }
    }

    pub fn is_dominant(w: &Weight) -> bool {
        w.iter().all(|&x| x >= 0)
    }

    pub fn is_antidominant(w: &Weight) -> bool {
        w.iter().all(|&x| x <= 0)
    }

    /// Reflection s_i on a weight.
    pub fn reflect_weight(&self, i: usize, w: &Weight) -> Weight {
        let c = w[i];
        if c == 0 {
            return w.clone();
        }
        (0..self.rank()).map(|k| w[k] - c * self.cartan[k][i]).collect()
    }

    /// Reflection s_i on a root in simple-root coordinates.
    pub fn reflect_root(&self, i: usize, r: &Root) -> Root {
        let c: i64 = (0..self.rank()).map(|j| self.cartan[i][j] * r[j]).sum();
        let mut out = r.clone();
        out[i] -= c;
        out
    }

    /// Reflection s_i on a coweight.
    pub fn reflect_coweight(&self, i: usize, nu: &Coweight) -> Coweight {
        let c = nu[i];
        if c == 0 {
            return nu.clone();
        }
        (0..self.rank()).map(|k| nu[k] - c * self.cartan[i][k]).collect()
    }

    /// ⟨ω_i, ω_j^∨⟩.
    pub fn fundamental_pairing(&self, i: usize, j: usize) -> Rational64 {
        self.inv_cartan[j][i]
    }

    /// The number of positive roots predicted for the type.
    pub fn expected_positive_count(&self) -> usize {
        let n = self.rank();
        match self.ctype.series {
            'A' => n * (n + 1) / 2,
            'B' | 'C' => n * n,
            'D' => n * (n - 1),
            'E' => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            'F' => 24,
            'G' => 6,
            _ => unreachable!(),
        }
    }
}

fn symmetrizer(a: &[Vec<i64>]) -> Vec<Rational64> {
    let n = a.len();
    let mut d: Vec<Option<Rational64>> = vec![None; n];
    d[0] = Some(Rational64::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                // d_i a_ij = d_j a_ji
                d[j] = Some(d[i].unwrap() * Rational64::new(a[i][j], a[j][i]));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Rational64> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let max = d.iter().copied().max().unwrap();
    d.into_iter().map(|x| x / max).collect()
}

fn invert(a: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .map(|row| row.iter().map(|&x| Rational64::from(x)).collect())
        .collect();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("invertible Cartan matrix");
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for j in 0..n {
                    let (mc, ic) = (m[col][j], inv[col][j]);
                    m[r][j] -= f * mc;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    inv
}

fn enumerate_positive_roots(a: &[Vec<i64>]) -> Vec<Root> {
    let n = a.len();
    let mut roots: BTreeSet<Root> = BTreeSet::new();
    let mut layer: Vec<Root> = (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect();
    while !layer.is_empty() {
        for r in &layer {
            roots.insert(r.clone());
        }
        let mut next = BTreeSet::new();
        for r in &layer {
            for i in 0..n {
                // α_i-string through r: r - pα_i, ..., r + qα_i with p - q = ⟨r, α_i^∨⟩
                let mut p = 0;
                let mut s = r.clone();
                loop {
                    s[i] -= 1;
                    if roots.contains(&s) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..n).map(|j| a[i][j] * r[j]).sum();
                let q = p - pairing;
                if q > 0 {
                    let mut up = r.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        layer = next.into_iter().collect();
    }
    let mut v: Vec<Root> = roots.into_iter().collect();
    v.sort_by(|x, y| RootSystem::root_height(x).cmp(&RootSystem::root_height(y)).then(x.cmp(y)));
    v
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

pub fn scale(c: i64, a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| c * x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::from_name(s).unwrap()
    }

    #[test]
    fn parse_types() {
        assert_eq!("a2".parse::<CartanType>().unwrap(), CartanType { series: 'A', rank: 2 });
        assert!("D2".parse::<CartanType>().is_err());
        assert!("E5".parse::<CartanType>().is_err());
        assert!("X3".parse::<CartanType>().is_err());
        assert!("G".parse::<CartanType>().is_err());
    }

    #[test]
    fn positive_root_counts() {
        for s in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2", "F4", "E6"] {
            let r = rs(s);
            assert_eq!(r.positive_roots.len(), r.expected_positive_count(), "{s}");
        }
    }

    #[test]
    fn a2_data() {
        let r = rs("A2");
        assert_eq!(r.positive_roots.len(), 3);
        assert_eq!(r.highest_root, vec![1, 1]);
        assert_eq!(r.e, 3);
        assert_eq!(r.fundamental_pairing(0, 0), Rational64::new(2, 3));
    }

    #[test]
    fn a1_constants() {
        let r = rs("A1");
        assert_eq!(r.e, 2);
        assert_eq!(r.pair(&vec![1], &vec![2]), Rational64::from(1));
        assert_eq!(r.pair(&vec![1], &vec![1]), Rational64::new(1, 2));
        assert_eq!(r.pair(&vec![0], &vec![5]), Rational64::zero());
    }

    #[test]
    fn theta_is_long_and_highest() {
        for s in ["A3", "B3", "C3", "D4", "G2", "F4"] {
            let r = rs(s);
            let th = r.highest_root.clone();
            assert_eq!(r.form_roots(&th, &th), Rational64::from(2), "{s}");
            for i in 0..r.rank() {
                let mut up = th.clone();
                up[i] += 1;
                assert!(!r.is_root(&up));
            }
        }
    }

    #[test]
    fn sum_of_positive_roots_is_two_rho() {
        for s in ["A2", "B2", "C3", "D4", "G2"] {
            let r = rs(s);
            let mut tot = r.zero();
            for a in &r.positive_roots {
                tot = add(&tot, &r.root_to_weight(a));
            }
            assert_eq!(tot, scale(2, &r.rho()), "{s}");
        }
    }

    #[test]
    fn duality_and_e() {
        for s in ["A1", "A2", "A3", "B2", "C3", "D4", "G2"] {
            let r = rs(s);
            for i in 0..r.rank() {
                let w = r.fundamental_weight(i);
                for j in 0..r.rank() {
                    let aj = r.simple_root(j);
                    let expect = if i == j { 1 } else { 0 };
                    assert_eq!(r.coroot_pair(&aj, &w), expect);
                    assert!((r.fundamental_pairing(i, j) * Rational64::from(r.e)).is_integer());
                    // ⟨α_i, α_j^∨⟩ = a_ji
                    let ai = r.simple_root_weight(i);
                    assert_eq!(ai[j], r.cartan[j][i]);
                }
            }
        }
    }

    #[test]
    fn dominance_examples() {
        let a1 = rs("A1");
        assert!(a1.dominance_leq(&vec![-1], &vec![1]));
        assert!(!a1.dominance_leq(&vec![0], &vec![1]));
        let a2 = rs("A2");
        assert!(a2.dominance_leq(&vec![0, 0], &a2.simple_root_weight(0)));
    }

    #[test]
    fn reflections_consistent() {
        let r = rs("B3");
        for i in 0..3 {
            for a in r.roots() {
                let w = r.root_to_weight(&a);
                let sw = r.reflect_weight(i, &w);
                assert_eq!(r.root_to_weight(&r.reflect_root(i, &a)), sw);
            }
        }
    }
}
