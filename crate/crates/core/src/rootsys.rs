//! Root-system data for the simple Lie algebras.
//!
//! Conventions (fixed for the whole crate):
//!
//! * Cartan matrix `C_ab = 2 (alpha_a, alpha_b) / (alpha_a, alpha_a)` with Bourbaki
//!   node numbering.
//! * The invariant form is `B = diag(d) C`, normalized so long roots have
//!   `(alpha, alpha) = 2`.
//! * Weights are stored in fundamental-weight coordinates; root coordinates are
//!   `C^{-1}` applied to them. For a weight `mu` and a root-basis vector `t`,
//!   `(mu, t) = sum_j mu_j d_j t_j`.
//!
//! Everything in this module is exact.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat, Rational, Real};
use crate::weight::Weight;

/// Default cap on the number of Weyl group elements an operation may enumerate.
pub const DEFAULT_WEYL_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    family: Family,
    rank: usize,
}

impl AlgebraSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let reason = match family {
            _ if rank == 0 => Some("rank must be positive"),
            Family::B | Family::C if rank < 2 => Some("B and C need rank >= 2"),
            Family::D if rank < 3 => Some("D needs rank >= 3"),
            Family::E if !(6..=8).contains(&rank) => Some("E needs rank 6, 7 or 8"),
            Family::F if rank != 4 => Some("F needs rank 4"),
            Family::G if rank != 2 => Some("G needs rank 2"),
            _ => None,
        };
        match reason {
            Some(reason) => Err(Error::InvalidAlgebra { family: family.letter(), rank, reason }),
            None => Ok(Self { family, rank }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl serde::Serialize for AlgebraSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for AlgebraSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::Parse("empty algebra name".into()))?;
        let family = match letter.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        let rank = chars
            .as_str()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("algebra rank in {s:?}: {e}")))?;
        AlgebraSpec::new(family, rank)
    }
}

/// An element of the Weyl group, as a reduced word plus its matrix on root coordinates.
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub parity: i8,
    pub action: Matrix<i64>,
}

impl WeylElement {
    /// Applies the element to a real root-basis vector.
    pub fn apply_root<T: Real>(&self, v: &[T]) -> Vec<T> {
        let n = v.len();
        (0..n)
            .map(|i| (0..n).map(|j| T::lit(self.action[(i, j)] as f64) * v[j]).sum())
            .collect()
    }
}

/// Result of moving a weight into the dominant chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reflected {
    pub dominant: Weight,
    pub parity: i8,
    pub singular: bool,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    spec: AlgebraSpec,
    cartan: Matrix<i64>,
    symmetrizer: Vec<Rational>,
    form: Matrix<Rational>,
    cartan_inverse: Matrix<Rational>,
    /// Gram matrix of the fundamental weights, `diag(d) C^{-1}`.
    weight_gram: Matrix<Rational>,
    positive_roots: Vec<Vec<i64>>,
    positive_roots_weight: Vec<Weight>,
    rho_root: Vec<Rational>,
    dim_g: usize,
    // Integer-scaled copies for hot loops: `scaled = scale * exact`.
    weight_gram_scaled: Matrix<i64>,
    weight_gram_scale: i64,
    symmetrizer_scaled: Vec<i64>,
    symmetrizer_scale: i64,
}

impl RootSystem {
    pub fn new(spec: AlgebraSpec) -> Self {
        let (cartan, symmetrizer) = cartan_data(spec);
        let r = spec.rank();
        let cart_q = cartan.map(|&c| rat(c, 1));
        let form = Matrix::from_fn(r, r, |a, b| symmetrizer[a] * cart_q[(a, b)]);
        let cartan_inverse = cart_q.inverse().expect("Cartan matrices are invertible");
        let weight_gram = Matrix::from_fn(r, r, |a, b| symmetrizer[a] * cartan_inverse[(a, b)]);
        let positive_roots = positive_roots_by_closure(&cartan);
        let positive_roots_weight = positive_roots
            .iter()
            .map(|alpha| Weight((0..r).map(|i| (0..r).map(|j| cartan[(i, j)] * alpha[j]).sum()).collect()))
            .collect();
        let mut rho_root = vec![Rational::zero(); r];
        for alpha in &positive_roots {
            for (acc, &c) in rho_root.iter_mut().zip(alpha) {
                *acc += rat(c, 2);
            }
        }
        let dim_g = r + 2 * positive_roots.len();

        let weight_gram_scale = (0..r)
            .flat_map(|a| (0..r).map(move |b| (a, b)))
            .fold(1i64, |l, (a, b)| l.lcm(weight_gram[(a, b)].denom()));
        let weight_gram_scaled = weight_gram.map(|q| (q * weight_gram_scale).to_integer());
        let symmetrizer_scale = symmetrizer.iter().fold(1i64, |l, q| l.lcm(q.denom()));
        let symmetrizer_scaled =
            symmetrizer.iter().map(|q| (q * symmetrizer_scale).to_integer()).collect();

        Self {
            spec,
            cartan,
            symmetrizer,
            form,
            cartan_inverse,
            weight_gram,
            positive_roots,
            positive_roots_weight,
            rho_root,
            dim_g,
            weight_gram_scaled,
            weight_gram_scale,
            symmetrizer_scaled,
            symmetrizer_scale,
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(Self::new(name.parse()?))
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn cartan(&self) -> &Matrix<i64> {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[Rational] {
        &self.symmetrizer
    }

    /// The symmetrized Cartan matrix `B`.
    pub fn form(&self) -> &Matrix<Rational> {
        &self.form
    }

    pub fn cartan_inverse(&self) -> &Matrix<Rational> {
        &self.cartan_inverse
    }

    pub fn weight_gram(&self) -> &Matrix<Rational> {
        &self.weight_gram
    }

    /// Positive roots in root coordinates, sorted by height then lexicographically.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Positive roots in fundamental-weight coordinates (same order as [`Self::positive_roots`]).
    pub fn positive_roots_weight(&self) -> &[Weight] {
        &self.positive_roots_weight
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn rho_weight(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    pub fn rho_root(&self) -> &[Rational] {
        &self.rho_root
    }

    /// Fundamental weight `omega_i` in root coordinates (column `i` of `C^{-1}`).
    pub fn fundamental_weight_root(&self, i: usize) -> Vec<Rational> {
        (0..self.rank()).map(|a| self.cartan_inverse[(a, i)]).collect()
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    /// Order of the Weyl group from the classification.
    pub fn weyl_group_order(&self) -> u128 {
        let r = self.rank() as u128;
        let fact = |n: u128| (1..=n).product::<u128>();
        match self.spec.family() {
            Family::A => fact(r + 1),
            Family::B | Family::C => (1u128 << r) * fact(r),
            Family::D => (1u128 << (r - 1)) * fact(r),
            Family::E => match r {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1_152,
            Family::G => 12,
        }
    }

    // ---- basis conversion ----

    pub fn weight_to_root(&self, w: &Weight) -> Vec<Rational> {
        let q: Vec<Rational> = w.coords().iter().map(|&c| rat(c, 1)).collect();
        self.cartan_inverse.mul_vec(&q)
    }

    pub fn root_to_weight_exact(&self, xi: &[Rational]) -> Vec<Rational> {
        self.cartan.map(|&c| rat(c, 1)).mul_vec(xi)
    }

    /// Converts exact root coordinates back to an integral weight, if integral.
    pub fn root_to_weight(&self, xi: &[Rational]) -> Option<Weight> {
        let w = self.root_to_weight_exact(xi);
        w.iter().all(|q| q.is_integer()).then(|| Weight(w.iter().map(|q| q.to_integer()).collect()))
    }

    pub fn weight_to_root_real<T: Real>(&self, w: &[T]) -> Vec<T> {
        let r = self.rank();
        (0..r)
            .map(|a| (0..r).map(|b| T::from_rational(&self.cartan_inverse[(a, b)]) * w[b]).sum())
            .collect()
    }

    pub fn root_to_weight_real<T: Real>(&self, xi: &[T]) -> Vec<T> {
        let r = self.rank();
        (0..r).map(|a| (0..r).map(|b| T::lit(self.cartan[(a, b)] as f64) * xi[b]).sum()).collect()
    }

    // ---- inner products ----

    pub fn form_real<T: Real>(&self) -> Matrix<T> {
        self.form.map(T::from_rational)
    }

    pub fn symmetrizer_real<T: Real>(&self) -> Vec<T> {
        self.symmetrizer.iter().map(T::from_rational).collect()
    }

    /// `(lambda, mu)` for two weights.
    pub fn inner_weights(&self, a: &Weight, b: &Weight) -> Rational {
        let qa: Vec<Rational> = a.coords().iter().map(|&c| rat(c, 1)).collect();
        let qb: Vec<Rational> = b.coords().iter().map(|&c| rat(c, 1)).collect();
        self.weight_gram.bilinear(&qa, &qb)
    }

    /// `scale * (a, b)` as an exact integer; see [`Self::weight_gram_scale`].
    pub fn inner_weights_scaled(&self, a: &[i64], b: &[i64]) -> i64 {
        let r = self.rank();
        let mut acc = 0i64;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            let row = self.weight_gram_scaled.row(i);
            acc += a[i] * (0..r).map(|j| row[j] * b[j]).sum::<i64>();
        }
        acc
    }

    pub fn weight_gram_scale(&self) -> i64 {
        self.weight_gram_scale
    }

    /// `scale * (mu, alpha)` for a weight `mu` and a root given in root coordinates.
    pub fn pair_weight_root_scaled(&self, mu: &[i64], alpha: &[i64]) -> i64 {
        mu.iter().zip(alpha).zip(&self.symmetrizer_scaled).map(|((m, a), d)| m * a * d).sum()
    }

    pub fn symmetrizer_scale(&self) -> i64 {
        self.symmetrizer_scale
    }

    /// Coefficients `c` with `(mu, t) = c . t` for root-basis `t`, i.e. `c_j = mu_j d_j`.
    pub fn pairing_coeffs<T: Real>(&self, mu: &Weight) -> Vec<T> {
        mu.coords()
            .iter()
            .zip(&self.symmetrizer)
            .map(|(&m, d)| T::lit(m as f64) * T::from_rational(d))
            .collect()
    }

    /// `(x, y)` for two root-basis real vectors.
    pub fn inner_root_real<T: Real>(&self, x: &[T], y: &[T]) -> T {
        self.form_real::<T>().bilinear(x, y)
    }

    /// `(x, alpha)` for every positive root, `x` in root coordinates.
    pub fn root_pairings_real<T: Real>(&self, x: &[T]) -> Vec<T> {
        let bx = self.form_real::<T>().mul_vec(x);
        self.positive_roots
            .iter()
            .map(|alpha| alpha.iter().zip(&bx).map(|(&a, &v)| T::lit(a as f64) * v).sum())
            .collect()
    }

    /// `(rho, alpha)` for every positive root.
    pub fn rho_pairings(&self) -> Vec<Rational> {
        let rho = self.rho_weight();
        self.positive_roots
            .iter()
            .map(|alpha| rat(self.pair_weight_root_scaled(rho.coords(), alpha), self.symmetrizer_scale))
            .collect()
    }

    /// Quadratic Casimir `(nu, nu + 2 rho)` in the normalization of `B`.
    pub fn casimir(&self, nu: &Weight) -> Rational {
        let two_rho = Weight(vec![2; self.rank()]);
        self.inner_weights(nu, &(nu + &two_rho))
    }

    /// True when `|(x, alpha)| > tol * |x|` for every positive root (Euclidean `|x|`).
    pub fn is_regular_real<T: Real>(&self, x: &[T]) -> bool {
        let scale = crate::linalg::norm(x);
        if scale == T::zero() {
            return false;
        }
        let tol = T::regularity_tolerance() * scale;
        self.root_pairings_real(x).iter().all(|p| p.abs() > tol)
    }

    // ---- Weyl group ----

    /// Simple reflection `s_i` in weight coordinates.
    pub fn reflect_weight(&self, w: &mut [i64], i: usize) {
        let c = w[i];
        if c == 0 {
            return;
        }
        for (j, wj) in w.iter_mut().enumerate() {
            *wj -= c * self.cartan[(j, i)];
        }
    }

    /// Moves `w` into the dominant chamber by simple reflections.
    ///
    /// `singular` is true iff the result lies on a wall; `parity` is the sign of
    /// the (reduced) reflecting word.
    pub fn dominant_reflect(&self, w: &Weight) -> Reflected {
        let mut v = w.0.clone();
        let mut parity = 1i8;
        while let Some(i) = v.iter().position(|&c| c < 0) {
            self.reflect_weight(&mut v, i);
            parity = -parity;
        }
        let singular = v.iter().any(|&c| c == 0);
        Reflected { dominant: Weight(v), parity, singular }
    }

    /// Dominant representative of a real root-basis vector, with the reflection parity.
    pub fn dominant_reflect_real<T: Real>(&self, xi: &[T]) -> (Vec<T>, i8) {
        let r = self.rank();
        let mut v = xi.to_vec();
        let mut parity = 1i8;
        let limit = 4 * self.num_positive_roots() + 8;
        for _ in 0..limit {
            let w = self.root_to_weight_real(&v);
            let Some(i) = (0..r).find(|&i| w[i] < T::zero()) else {
                break;
            };
            v[i] = v[i] - w[i];
            parity = -parity;
        }
        (v, parity)
    }

    /// Full Weyl group by breadth-first closure over simple reflections.
    pub fn enumerate_weyl_group(&self, cap: usize) -> Result<Vec<WeylElement>> {
        let order = self.weyl_group_order();
        if order > cap as u128 {
            return Err(Error::WeylGroupTooLarge {
                found: usize::try_from(order).unwrap_or(usize::MAX),
                cap,
            });
        }
        let r = self.rank();
        let reflections: Vec<Matrix<i64>> = (0..r)
            .map(|i| {
                Matrix::from_fn(r, r, |a, b| {
                    let id = i64::from(a == b);
                    if a == i {
                        id - self.cartan[(i, b)]
                    } else {
                        id
                    }
                })
            })
            .collect();
        let identity = WeylElement { word: vec![], parity: 1, action: Matrix::identity(r) };
        let rho = self.rho_weight().0;
        let mut seen: HashSet<Vec<i64>> = HashSet::from([rho.clone()]);
        let mut out = vec![identity];
        let mut queue = VecDeque::from([(0usize, rho)]);
        while let Some((idx, image)) = queue.pop_front() {
            for (i, s) in reflections.iter().enumerate() {
                let mut next = image.clone();
                self.reflect_weight(&mut next, i);
                if !seen.insert(next.clone()) {
                    continue;
                }
                if out.len() >= cap {
                    return Err(Error::WeylGroupTooLarge { found: out.len() + 1, cap });
                }
                let parent = &out[idx];
                let mut word = Vec::with_capacity(parent.word.len() + 1);
                word.push(i);
                word.extend_from_slice(&parent.word);
                let element =
                    WeylElement { word, parity: -parent.parity, action: s.mul(&parent.action) };
                out.push(element);
                queue.push_back((out.len() - 1, next));
            }
        }
        Ok(out)
    }

    /// The W-orbit of a weight (exact, by closure).
    pub fn orbit(&self, w: &Weight) -> Vec<Weight> {
        let mut seen: HashSet<Weight> = HashSet::from([w.clone()]);
        let mut out = vec![w.clone()];
        let mut k = 0;
        while k < out.len() {
            for i in 0..self.rank() {
                let mut v = out[k].0.clone();
                self.reflect_weight(&mut v, i);
                let v = Weight(v);
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
            k += 1;
        }
        out
    }
}

fn cartan_data(spec: AlgebraSpec) -> (Matrix<i64>, Vec<Rational>) {
    let r = spec.rank();
    let mut c = Matrix::from_fn(r, r, |i, j| if i == j { 2i64 } else { 0 });
    let link = |c: &mut Matrix<i64>, i: usize, j: usize, cij: i64, cji: i64| {
        c[(i, j)] = cij;
        c[(j, i)] = cji;
    };
    let one = Rational::one();
    let half = rat(1, 2);
    let mut d = vec![one; r];
    match spec.family() {
        Family::A => {
            for i in 0..r - 1 {
                link(&mut c, i, i + 1, -1, -1);
            }
        }
        Family::B => {
            for i in 0..r - 2 {
                link(&mut c, i, i + 1, -1, -1);
            }
            link(&mut c, r - 2, r - 1, -1, -2);
            d[r - 1] = half;
        }
        Family::C => {
            for i in 0..r - 2 {
                link(&mut c, i, i + 1, -1, -1);
            }
            link(&mut c, r - 2, r - 1, -2, -1);
            d = vec![half; r];
            d[r - 1] = one;
        }
        Family::D => {
            for i in 0..r - 2 {
                link(&mut c, i, i + 1, -1, -1);
            }
            link(&mut c, r - 3, r - 1, -1, -1);
        }
        Family::E => {
            let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
            for &(i, j) in edges.iter().filter(|&&(i, j)| i < r && j < r) {
                link(&mut c, i, j, -1, -1);
            }
        }
        Family::F => {
            link(&mut c, 0, 1, -1, -1);
            link(&mut c, 1, 2, -1, -2);
            link(&mut c, 2, 3, -1, -1);
            d = vec![one, one, half, half];
        }
        Family::G => {
            link(&mut c, 0, 1, -1, -3);
            d = vec![one, rat(1, 3)];
        }
    }
    (c, d)
}

/// Positive roots (root coordinates) by string closure from the simple roots.
fn positive_roots_by_closure(cartan: &Matrix<i64>) -> Vec<Vec<i64>> {
    let r = cartan.rows();
    let unit = |i: usize| (0..r).map(|j| i64::from(i == j)).collect::<Vec<i64>>();
    let mut known: HashSet<Vec<i64>> = (0..r).map(unit).collect();
    let mut level: Vec<Vec<i64>> = (0..r).map(unit).collect();
    let mut all = level.clone();
    while !level.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &level {
            for i in 0..r {
                if *beta == unit(i) {
                    continue;
                }
                // p = length of the alpha_i-string below beta.
                let mut p = 0i64;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let coroot_pairing: i64 = (0..r).map(|j| cartan[(i, j)] * beta[j]).sum();
                if p - coroot_pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !next.contains(&up) && !known.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        for v in &next {
            known.insert(v.clone());
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| b.cmp(a)));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(name: &str) -> RootSystem {
        RootSystem::from_name(name).unwrap()
    }

    #[test]
    fn rank_constraints() {
        assert!(AlgebraSpec::new(Family::B, 1).is_err());
        assert!(AlgebraSpec::new(Family::D, 2).is_err());
        assert!(AlgebraSpec::new(Family::E, 5).is_err());
        assert!(AlgebraSpec::new(Family::F, 3).is_err());
        assert!(AlgebraSpec::new(Family::G, 3).is_err());
        assert!("X2".parse::<AlgebraSpec>().is_err());
        assert_eq!("g2".parse::<AlgebraSpec>().unwrap().to_string(), "G2");
    }

    #[test]
    fn a1_data() {
        let a1 = rs("A1");
        assert_eq!(a1.form().to_rows(), vec![vec![rat(2, 1)]]);
        assert_eq!(a1.num_positive_roots(), 1);
        assert_eq!(a1.dim_g(), 3);
        assert_eq!(a1.rho_root(), &[rat(1, 2)]);
    }

    #[test]
    fn a2_and_g2_data() {
        let a2 = rs("A2");
        assert_eq!(a2.form().to_rows(), vec![vec![rat(2, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]);
        assert_eq!(a2.num_positive_roots(), 3);
        assert_eq!(a2.dim_g(), 8);
        let g2 = rs("G2");
        assert_eq!(g2.num_positive_roots(), 6);
        assert_eq!(g2.dim_g(), 14);
        assert_eq!(g2.form()[(1, 1)], rat(2, 3));
    }

    #[test]
    fn classical_root_counts_and_invariants() {
        let cases = [
            ("A1", 1), ("A3", 6), ("A5", 15), ("B2", 4), ("B3", 9), ("C3", 9), ("C4", 16),
            ("D4", 12), ("D5", 20), ("G2", 6), ("F4", 24), ("E6", 36), ("E7", 63), ("E8", 120),
        ];
        for (name, count) in cases {
            let rs = rs(name);
            assert_eq!(rs.num_positive_roots(), count, "{name}");
            assert_eq!(rs.dim_g(), rs.rank() + 2 * count);
            assert!(rs.form().is_symmetric(), "{name}");
            let det = rs.form().determinant();
            assert!(det > Rational::zero(), "{name}");
            // rho = half-sum of positive roots = sum of fundamental weights.
            let fund_sum: Vec<Rational> = (0..rs.rank())
                .map(|a| (0..rs.rank()).map(|i| rs.cartan_inverse()[(a, i)]).sum())
                .collect();
            assert_eq!(rs.rho_root(), fund_sum.as_slice(), "{name}");
            let simple = rs.positive_roots().iter().filter(|a| a.iter().sum::<i64>() == 1).count();
            assert_eq!(simple, rs.rank());
            assert!(rs.positive_roots().iter().all(|a| a.iter().all(|&c| c >= 0)));
        }
    }

    #[test]
    fn long_roots_have_length_two() {
        for name in ["B3", "C3", "F4", "G2"] {
            let rs = rs(name);
            let lens: Vec<Rational> = rs
                .positive_roots()
                .iter()
                .map(|a| {
                    let q: Vec<Rational> = a.iter().map(|&c| rat(c, 1)).collect();
                    rs.form().bilinear(&q, &q)
                })
                .collect();
            assert_eq!(lens.iter().max().unwrap(), &rat(2, 1), "{name}");
        }
    }

    #[test]
    fn basis_conversion() {
        let a2 = rs("A2");
        assert_eq!(a2.weight_to_root(&Weight::new([1, 0])), vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(a2.weight_to_root(&Weight::zero(2)), vec![rat(0, 1); 2]);
        assert_eq!(rs("A1").weight_to_root(&Weight::new([2])), vec![rat(1, 1)]);
        for name in ["B3", "G2", "F4"] {
            let rs = rs(name);
            let w = Weight((0..rs.rank() as i64).map(|i| 2 * i - 1).collect());
            assert_eq!(rs.root_to_weight(&rs.weight_to_root(&w)), Some(w));
        }
    }

    #[test]
    fn dominant_reflect_examples() {
        let a1 = rs("A1");
        let r = a1.dominant_reflect(&Weight::new([-3]));
        assert_eq!((r.dominant, r.parity, r.singular), (Weight::new([3]), -1, false));
        let r = a1.dominant_reflect(&Weight::new([0]));
        assert_eq!((r.dominant, r.parity, r.singular), (Weight::new([0]), 1, true));
        let a2 = rs("A2");
        let r = a2.dominant_reflect(&Weight::new([-1, 2]));
        assert_eq!((r.dominant, r.parity, r.singular), (Weight::new([1, 1]), -1, false));
    }

    #[test]
    fn weyl_group_sizes() {
        let a2 = rs("A2").enumerate_weyl_group(DEFAULT_WEYL_CAP).unwrap();
        assert_eq!(a2.len(), 6);
        assert_eq!(a2.iter().map(|w| w.parity as i32).sum::<i32>(), 0);
        assert_eq!(rs("B2").enumerate_weyl_group(DEFAULT_WEYL_CAP).unwrap().len(), 8);
        assert_eq!(rs("G2").enumerate_weyl_group(DEFAULT_WEYL_CAP).unwrap().len(), 12);
        assert_eq!(rs("F4").enumerate_weyl_group(DEFAULT_WEYL_CAP).unwrap().len(), 1152);
        match rs("E8").enumerate_weyl_group(DEFAULT_WEYL_CAP) {
            Err(Error::WeylGroupTooLarge { found, .. }) => assert_eq!(found, 696_729_600),
            other => panic!("expected cap error, got {other:?}"),
        }
        assert!(matches!(
            rs("A3").enumerate_weyl_group(10),
            Err(Error::WeylGroupTooLarge { .. })
        ));
    }

    #[test]
    fn weyl_elements_preserve_form_and_parity() {
        for name in ["A3", "B3", "C3", "G2", "D4"] {
            let rs = rs(name);
            let b = rs.form();
            for w in rs.enumerate_weyl_group(DEFAULT_WEYL_CAP).unwrap() {
                let a = w.action.map(|&c| rat(c, 1));
                assert_eq!(&a.transpose().mul(b).mul(&a), b, "{name} {:?}", w.word);
                let sign = if w.word.len() % 2 == 0 { 1 } else { -1 };
                assert_eq!(w.parity, sign);
                assert_eq!(w.action.map(|&c| rat(c, 1)).determinant(), rat(sign as i64, 1));
            }
        }
    }

    #[test]
    fn casimir_values() {
        assert_eq!(rs("A1").casimir(&Weight::new([1])), rat(3, 2));
        assert_eq!(rs("A2").casimir(&Weight::new([1, 0])), rat(8, 3));
        // Adjoint Casimir equals 2 h^vee with long roots of length 2.
        assert_eq!(rs("G2").casimir(&Weight::new([1, 0])), rat(8, 1));
        assert_eq!(rs("A2").casimir(&Weight::new([1, 1])), rat(6, 1));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn dominant_reflect_is_idempotent(a in -20i64..20, b in -20i64..20, c in -20i64..20) {
                for name in ["A3", "B3", "C3"] {
                    let rs = RootSystem::from_name(name).unwrap();
                    let w = Weight::new([a, b, c]);
                    let first = rs.dominant_reflect(&w);
                    prop_assert!(first.dominant.is_dominant());
                    let again = rs.dominant_reflect(&first.dominant);
                    prop_assert_eq!(again.parity, 1);
                    prop_assert_eq!(&again.dominant, &first.dominant);
                    // Same orbit: the squared length is W-invariant.
                    prop_assert_eq!(rs.inner_weights(&w, &w), rs.inner_weights(&first.dominant, &first.dominant));
                }
            }
        }
    }
}
