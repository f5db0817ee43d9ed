//! Irreducible crystallographic root data, their Weyl groups and the
//! coweight lattice.
//!
//! Root data are built from the standard (Bourbaki) simple-root coordinates
//! in a Euclidean ambient space with the dot product. Everything here is
//! exact: ambient vectors are rationals and Weyl group elements are stored as
//! integer matrices acting on coordinates in the fundamental-coweight basis.
//!
//! Coordinates convention: a [`Coweight`] `c` stands for `c_1 ω_1 + ⋯ + c_n ω_n`,
//! so `⟨λ, α_j⟩ = c_j` and `⟨λ, α⟩ = Σ_j a_j c_j` for a root `α = Σ_j a_j α_j`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::json::fraction_pair;
use crate::rational::{self, frac, int, Rational};
use crate::{Error, Result};

pub const MAX_RANK: usize = 8;

/// Largest rank whose Weyl group is enumerated without an explicit opt-in.
pub const DEFAULT_ENUMERATION_RANK: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub family: Family,
    pub rank: usize,
}

impl TypeLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => (1..=MAX_RANK).contains(&rank),
            Family::B | Family::C => (2..=MAX_RANK).contains(&rank),
            Family::D => (4..=MAX_RANK).contains(&rank),
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(TypeLabel { family, rank })
        } else {
            Err(Error::input(
                "type",
                format!("{family:?}{rank} is not a supported irreducible type"),
            ))
        }
    }

    /// Every supported label, in a fixed order.
    pub fn all() -> Vec<TypeLabel> {
        let mut out = Vec::new();
        for (family, ranks) in [
            (Family::A, 1..=MAX_RANK),
            (Family::B, 2..=MAX_RANK),
            (Family::C, 2..=MAX_RANK),
            (Family::D, 4..=MAX_RANK),
            (Family::E, 6..=8),
            (Family::F, 4..=4),
            (Family::G, 2..=2),
        ] {
            out.extend(ranks.map(|rank| TypeLabel { family, rank }));
        }
        out
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::input("type", format!("unknown type label {s:?}"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::input("type", format!("missing or malformed rank in {s:?}")))?;
        TypeLabel::new(family, rank)
    }
}

/// An integer vector in the fundamental-coweight basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coweight(pub Vec<i64>);

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Coweight(vec![0; rank])
    }

    /// `ρ = ω_1 + ⋯ + ω_n`.
    pub fn rho(rank: usize) -> Self {
        Coweight(vec![1; rank])
    }

    /// The fundamental coweight `ω_i`, with `i` counted from 1.
    pub fn omega(rank: usize, i: usize) -> Self {
        let mut c = vec![0; rank];
        c[i - 1] = 1;
        Coweight(c)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_strongly_dominant(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    /// `self ≤ other`, i.e. `other − self ∈ P⁺`.
    pub fn le(&self, other: &Coweight) -> bool {
        (other.clone() - self.clone()).is_dominant()
    }

    /// `self ≪ other`, i.e. `other − self ∈ P⁺⁺`.
    pub fn ll(&self, other: &Coweight) -> bool {
        (other.clone() - self.clone()).is_strongly_dominant()
    }

    /// Parses a comma separated coordinate list such as `2,2`.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let coords: std::result::Result<Vec<i64>, _> =
            s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        let coords = coords
            .map_err(|_| Error::input("lambda", format!("expected integers, got {s:?}")))?;
        if coords.len() != rank {
            return Err(Error::input(
                "lambda",
                format!("expected {rank} coordinates, got {}", coords.len()),
            ));
        }
        Ok(Coweight(coords))
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for Coweight {
    type Output = Coweight;
    fn add(self, rhs: Coweight) -> Coweight {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        Coweight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for Coweight {
    type Output = Coweight;
    fn sub(self, rhs: Coweight) -> Coweight {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        Coweight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<Coweight> for i64 {
    type Output = Coweight;
    fn mul(self, rhs: Coweight) -> Coweight {
        Coweight(rhs.0.iter().map(|c| self * c).collect())
    }
}

/// Square integer matrix acting on coweight coordinates (column vectors).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn is_negative_identity(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.get(r, c) == if r == c { -1 } else { 0 }))
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] += a * rhs.get(k, c);
                }
            }
        }
        IntMatrix { n, data }
    }
}

/// An element of the finite Weyl group `W_0`.
///
/// `word` is a reduced expression over generator indices `1..=n`; `matrix`
/// is the action on coweight coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub matrix: IntMatrix,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            word: Vec::new(),
            matrix: IntMatrix::identity(rank),
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, lambda: &Coweight) -> Coweight {
        Coweight(self.matrix.apply(&lambda.0))
    }

    /// Same group element, compared by action.
    pub fn same_as(&self, other: &WeylElement) -> bool {
        self.matrix == other.matrix
    }

    /// Number of positive roots `α` with `⟨wρ, α⟩ < 0`; equals `ℓ(w)`.
    pub fn inversion_count(&self, datum: &RootDatum) -> usize {
        let w_rho = self.apply(&Coweight::rho(datum.rank()));
        datum
            .positive_root_coeffs()
            .iter()
            .filter(|a| pair(a, &w_rho.0) < 0)
            .count()
    }

    /// The action on the ambient space, as the product of the orthogonal
    /// reflections spelled by `word`.
    pub fn ambient_matrix(&self, datum: &RootDatum) -> Vec<Vec<Rational>> {
        let d = datum.ambient_dim();
        let mut m: Vec<Vec<Rational>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { int(1) } else { int(0) }).collect())
            .collect();
        for &i in &self.word {
            m = rational::mat_mul(&m, &datum.ambient_reflection(i));
        }
        m
    }

    pub fn to_json(&self) -> Value {
        json!({ "word": self.word, "length": self.length() })
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.word.iter().map(|i| format!("s{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Which part of `W_0` a Poincaré series is summed over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetSelector {
    All,
    /// The stabilizer `W_{0λ} = { w : wλ = λ }`.
    Stabilizer(Coweight),
}

fn pair(root_coeffs: &[i64], coweight: &[i64]) -> i64 {
    root_coeffs.iter().zip(coweight).map(|(a, c)| a * c).sum()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// A finite irreducible crystallographic root system with simple roots,
/// positive roots, highest root, coroots and fundamental coweights.
#[derive(Debug, Clone)]
pub struct RootDatum {
    label: TypeLabel,
    ambient_dim: usize,
    simple_roots: Vec<Vec<Rational>>,
    /// `cartan[i][j] = ⟨α_i^∨, α_j⟩`; row `i` is `α_i^∨` in coweight coordinates.
    cartan: Vec<Vec<i64>>,
    positive_coeffs: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<Rational>>,
    marks: Vec<i64>,
    fundamental_coweights: Vec<Vec<Rational>>,
    coefficient_sums: Vec<i64>,
}

/// Ambient vectors from numerators over 2.
fn halves(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| frac(x, 2)).collect())
        .collect()
}

fn unit_diff(dim: usize, i: usize, j: usize) -> Vec<i64> {
    // 2(e_i − e_j) in half units
    let mut v = vec![0; dim];
    v[i] = 2;
    v[j] = -2;
    v
}

fn simple_roots_for(label: TypeLabel) -> (usize, Vec<Vec<Rational>>) {
    let n = label.rank;
    let rows: Vec<Vec<i64>> = match label.family {
        Family::A => (0..n).map(|i| unit_diff(n + 1, i, i + 1)).collect(),
        Family::B | Family::C | Family::D => {
            let mut r: Vec<Vec<i64>> = (0..n - 1).map(|i| unit_diff(n, i, i + 1)).collect();
            let mut last = vec![0; n];
            match label.family {
                Family::B => last[n - 1] = 2,
                Family::C => last[n - 1] = 4,
                _ => {
                    last[n - 2] = 2;
                    last[n - 1] = 2;
                }
            }
            r.push(last);
            r
        }
        Family::E => {
            let mut r = vec![
                vec![1, -1, -1, -1, -1, -1, -1, 1],
                vec![2, 2, 0, 0, 0, 0, 0, 0],
                unit_diff(8, 1, 0),
            ];
            for i in 1..6 {
                r.push(unit_diff(8, i + 1, i));
            }
            r.truncate(n);
            r
        }
        Family::F => vec![
            unit_diff(4, 1, 2),
            unit_diff(4, 2, 3),
            vec![0, 0, 0, 2],
            vec![1, -1, -1, -1],
        ],
        Family::G => vec![vec![2, -2, 0], vec![-4, 2, 2]],
    };
    let dim = rows[0].len();
    (dim, halves(&rows))
}

impl RootDatum {
    pub fn build(label: TypeLabel) -> Result<Self> {
        let label = TypeLabel::new(label.family, label.rank)?;
        let n = label.rank;
        let (ambient_dim, simple_roots) = simple_roots_for(label);

        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            let norm = dot(&simple_roots[i], &simple_roots[i]);
            for j in 0..n {
                let v = int(2) * dot(&simple_roots[i], &simple_roots[j]) / &norm;
                if !v.is_integer() {
                    return Err(Error::Consistency(format!(
                        "{label}: non-integral Cartan entry at ({i},{j})"
                    )));
                }
                cartan[i][j] = v.to_integer().to_i64().expect("small Cartan entry");
            }
        }

        // Close the simple roots under simple reflections (simple-root coordinates).
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[i][j]).sum();
                let mut image = beta.clone();
                image[i] -= pairing;
                if !seen.contains_key(&image) {
                    seen.insert(image.clone(), ());
                    queue.push_back(image);
                }
            }
        }
        let mut positive_coeffs: Vec<Vec<i64>> = seen
            .into_keys()
            .filter(|b| b.iter().all(|&x| x >= 0))
            .collect();
        positive_coeffs.sort_by(|a, b| {
            let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });

        let positive_roots: Vec<Vec<Rational>> = positive_coeffs
            .iter()
            .map(|a| {
                (0..ambient_dim)
                    .map(|k| {
                        (0..n).fold(Rational::zero(), |acc, j| {
                            acc + int(a[j]) * &simple_roots[j][k]
                        })
                    })
                    .collect()
            })
            .collect();

        let marks = positive_coeffs
            .last()
            .cloned()
            .ok_or_else(|| Error::Consistency("empty root system".into()))?;

        let gram: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| dot(&simple_roots[i], &simple_roots[j])).collect())
            .collect();
        let gram_inv = rational::invert(&gram)
            .ok_or_else(|| Error::Consistency(format!("{label}: singular Gram matrix")))?;
        let fundamental_coweights: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..ambient_dim)
                    .map(|k| {
                        (0..n).fold(Rational::zero(), |acc, j| {
                            acc + &gram_inv[i][j] * &simple_roots[j][k]
                        })
                    })
                    .collect()
            })
            .collect();

        let coefficient_sums = (0..n)
            .map(|j| positive_coeffs.iter().map(|a| a[j]).sum())
            .collect();

        let datum = RootDatum {
            label,
            ambient_dim,
            simple_roots,
            cartan,
            positive_coeffs,
            positive_roots,
            marks,
            fundamental_coweights,
            coefficient_sums,
        };
        datum.check_duality()?;
        Ok(datum)
    }

    pub fn from_label(s: &str) -> Result<Self> {
        Self::build(s.parse()?)
    }

    fn check_duality(&self) -> Result<()> {
        for (i, w) in self.fundamental_coweights.iter().enumerate() {
            for (j, a) in self.simple_roots.iter().enumerate() {
                let expect = if i == j { int(1) } else { int(0) };
                if dot(w, a) != expect {
                    return Err(Error::Consistency(format!(
                        "{}: <omega_{}, alpha_{}> != delta",
                        self.label,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn simple_roots(&self) -> &[Vec<Rational>] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Vec<Rational>] {
        &self.positive_roots
    }

    /// Positive roots in simple-root coordinates, ordered by height.
    pub fn positive_root_coeffs(&self) -> &[Vec<i64>] {
        &self.positive_coeffs
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn highest_root(&self) -> &[Rational] {
        self.positive_roots.last().expect("nonempty")
    }

    /// The marks `m_i` with `φ = Σ m_i α_i`.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    pub fn fundamental_coweights(&self) -> &[Vec<Rational>] {
        &self.fundamental_coweights
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_coeffs.len()
    }

    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        dot(a, b)
    }

    /// `α^∨ = 2α / ⟨α, α⟩`.
    pub fn coroot(&self, alpha: &[Rational]) -> Vec<Rational> {
        let scale = int(2) / dot(alpha, alpha);
        alpha.iter().map(|x| x * &scale).collect()
    }

    /// Orthogonal reflection in the hyperplane of `α_i` (1-based), on the ambient space.
    pub fn ambient_reflection(&self, i: usize) -> Vec<Vec<Rational>> {
        let alpha = &self.simple_roots[i - 1];
        let coroot = self.coroot(alpha);
        (0..self.ambient_dim)
            .map(|r| {
                (0..self.ambient_dim)
                    .map(|c| {
                        let id = if r == c { int(1) } else { int(0) };
                        // row r of x ↦ x − ⟨x, α⟩ α^∨ is e_r − α^∨_r α
                        id - &coroot[r] * &alpha[c]
                    })
                    .collect()
            })
            .collect()
    }

    /// Reflection `s_α(x) = x − ⟨x, α^∨⟩ α` applied to an ambient vector.
    pub fn reflect_ambient(&self, alpha: &[Rational], x: &[Rational]) -> Vec<Rational> {
        let k = dot(x, &self.coroot(alpha));
        x.iter().zip(alpha).map(|(xi, ai)| xi - &k * ai).collect()
    }

    /// Matrix of the simple reflection `s_i` (1-based) on coweight coordinates.
    pub fn simple_reflection(&self, i: usize) -> IntMatrix {
        let n = self.rank();
        let mut m = IntMatrix::identity(n);
        // c'_j = c_j − c_i · ⟨α_i^∨, α_j⟩
        for j in 0..n {
            m.data[j * n + (i - 1)] -= self.cartan[i - 1][j];
        }
        m
    }

    pub fn reflect(&self, i: usize, lambda: &Coweight) -> Coweight {
        let ci = lambda.0[i - 1];
        Coweight(
            lambda
                .0
                .iter()
                .enumerate()
                .map(|(j, c)| c - ci * self.cartan[i - 1][j])
                .collect(),
        )
    }

    pub fn element_from_word(&self, word: &[usize]) -> WeylElement {
        let matrix = word.iter().fold(IntMatrix::identity(self.rank()), |m, &i| {
            &m * &self.simple_reflection(i)
        });
        WeylElement {
            word: word.to_vec(),
            matrix,
        }
    }

    /// `⟨λ, α⟩` for a positive root given by its index in [`Self::positive_root_coeffs`].
    pub fn pair_with_root(&self, lambda: &Coweight, root_index: usize) -> i64 {
        pair(&self.positive_coeffs[root_index], &lambda.0)
    }

    /// Pairings `⟨v, α_j⟩` of an ambient vector with the simple roots.
    pub fn simple_pairings(&self, v: &[Rational]) -> Vec<Rational> {
        self.simple_roots.iter().map(|a| dot(v, a)).collect()
    }

    /// Converts an ambient vector of the coweight lattice to coweight coordinates.
    pub fn coweight_from_ambient(&self, v: &[Rational]) -> Result<Coweight> {
        if v.len() != self.ambient_dim {
            return Err(Error::input(
                "vector",
                format!("expected {} ambient coordinates, got {}", self.ambient_dim, v.len()),
            ));
        }
        for (idx, root) in self.positive_roots.iter().enumerate() {
            let p = dot(v, root);
            if !p.is_integer() {
                return Err(Error::input(
                    "vector",
                    format!(
                        "pairing with positive root #{} {:?} is {}, not an integer",
                        idx + 1,
                        self.positive_coeffs[idx],
                        rational::to_string(&p)
                    ),
                ));
            }
        }
        let coords = self
            .simple_pairings(v)
            .iter()
            .map(|p| p.to_integer().to_i64().expect("pairing fits in i64"))
            .collect();
        Ok(Coweight(coords))
    }

    pub fn coweight_to_ambient(&self, lambda: &Coweight) -> Vec<Rational> {
        (0..self.ambient_dim)
            .map(|k| {
                self.fundamental_coweights
                    .iter()
                    .zip(&lambda.0)
                    .fold(Rational::zero(), |acc, (w, &c)| acc + int(c) * &w[k])
            })
            .collect()
    }

    /// The simple coroot `α_i^∨` (1-based) in coweight coordinates.
    pub fn simple_coroot(&self, i: usize) -> Coweight {
        Coweight(self.cartan[i - 1].clone())
    }

    /// The unique dominant element of the `W_0`-orbit of `λ`, with a Weyl
    /// element `w` such that `wλ` is that element.
    pub fn dominant_rep_coweight(&self, lambda: &Coweight) -> (Coweight, WeylElement) {
        let mut current = lambda.clone();
        let mut applied: Vec<usize> = Vec::new();
        while let Some(i) = current.0.iter().position(|&c| c < 0) {
            current = self.reflect(i + 1, &current);
            applied.push(i + 1);
        }
        applied.reverse();
        (current, self.element_from_word(&applied))
    }

    /// [`Self::dominant_rep_coweight`] for an ambient vector.
    pub fn dominant_rep(&self, v: &[Rational]) -> Result<(Coweight, WeylElement)> {
        let lambda = self.coweight_from_ambient(v)?;
        Ok(self.dominant_rep_coweight(&lambda))
    }

    /// The longest element `w_0`, found by descending from `−ρ` to `ρ`.
    pub fn longest_element(&self) -> WeylElement {
        let minus_rho = Coweight(vec![-1; self.rank()]);
        self.dominant_rep_coweight(&minus_rho).1
    }

    /// Whether `w_0` acts as `−1`.
    pub fn is_minus_one_type(&self) -> bool {
        self.longest_element().matrix.is_negative_identity()
    }

    /// `λ* = −w_0 λ`.
    pub fn star_involution(&self, lambda: &Coweight) -> Coweight {
        -1 * self.longest_element().apply(lambda)
    }

    /// `h(λ) = Σ_{α ∈ Φ⁺} ⟨λ, α⟩` for dominant `λ`: the number of root
    /// hyperplanes, counted by parallelism class, separating `0` from `λ`.
    pub fn height_two_rho(&self, lambda: &Coweight) -> Result<u64> {
        self.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::input("lambda", format!("{lambda} is not dominant")));
        }
        Ok(self.hyperplane_count(lambda) as u64)
    }

    /// `Σ_{α ∈ Φ⁺} ⟨λ, α⟩` without the dominance check (additive in `λ`).
    pub fn hyperplane_count(&self, lambda: &Coweight) -> i64 {
        self.coefficient_sums
            .iter()
            .zip(&lambda.0)
            .map(|(s, c)| s * c)
            .sum()
    }

    pub(crate) fn check_rank(&self, lambda: &Coweight) -> Result<()> {
        if lambda.rank() != self.rank() {
            return Err(Error::input(
                "lambda",
                format!(
                    "expected {} coordinates for {}, got {}",
                    self.rank(),
                    self.label,
                    lambda.rank()
                ),
            ));
        }
        Ok(())
    }

    /// Coordinates of `λ` in the simple-coroot basis `α_1^∨, …, α_n^∨`.
    pub fn coroot_coordinates(&self, lambda: &Coweight) -> Vec<Rational> {
        let n = self.rank();
        // λ = Σ m_i α_i^∨ means c_j = Σ_i m_i cartan[i][j], i.e. c = Cᵀ m.
        let ct: Vec<Vec<Rational>> = (0..n)
            .map(|j| (0..n).map(|i| int(self.cartan[i][j])).collect())
            .collect();
        let inv = rational::invert(&ct).expect("Cartan matrix is invertible");
        (0..n)
            .map(|i| {
                (0..n).fold(Rational::zero(), |acc, j| acc + &inv[i][j] * int(lambda.0[j]))
            })
            .collect()
    }

    /// Whether `λ ∈ Q = Zα_1^∨ + ⋯ + Zα_n^∨`.
    pub fn in_coroot_lattice(&self, lambda: &Coweight) -> bool {
        self.coroot_coordinates(lambda).iter().all(|m| m.is_integer())
    }

    /// All of `W_0` by breadth-first search on the Cayley graph, in order of
    /// length. Ranks above [`DEFAULT_ENUMERATION_RANK`] need `allow_large`.
    pub fn enumerate_weyl(&self, allow_large: bool) -> Result<Vec<WeylElement>> {
        if self.rank() > DEFAULT_ENUMERATION_RANK && !allow_large {
            return Err(Error::Unsupported(format!(
                "enumerating the Weyl group of {} needs the large-enumeration opt-in",
                self.label
            )));
        }
        let n = self.rank();
        let rho = Coweight::rho(n);
        let gens: Vec<IntMatrix> = (1..=n).map(|i| self.simple_reflection(i)).collect();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut elements = vec![WeylElement::identity(n)];
        seen.insert(rho.0.clone(), 0);
        let mut head = 0;
        while head < elements.len() {
            for (g, gen) in gens.iter().enumerate() {
                let matrix = &elements[head].matrix * gen;
                let key = matrix.apply(&rho.0);
                if seen.contains_key(&key) {
                    continue;
                }
                let mut word = elements[head].word.clone();
                word.push(g + 1);
                seen.insert(key, elements.len());
                elements.push(WeylElement { word, matrix });
            }
            head += 1;
        }
        Ok(elements)
    }

    /// `Σ_{u ∈ U} q^{−ℓ(u)}` over the selected subset `U` of `W_0`.
    pub fn poincare_value(&self, selector: &SubsetSelector, q: u64) -> Result<Rational> {
        if q < 2 {
            return Err(Error::input("q", "thickness must be at least 2"));
        }
        let elements = self.enumerate_weyl(false)?;
        Ok(poincare_over(&elements, selector, q))
    }

    /// Coefficients of `Σ_w t^{ℓ(w)}`, index = length.
    pub fn poincare_polynomial(&self) -> Result<Vec<u64>> {
        let elements = self.enumerate_weyl(false)?;
        let max = elements.last().map_or(0, WeylElement::length);
        let mut coeffs = vec![0u64; max + 1];
        for w in &elements {
            coeffs[w.length()] += 1;
        }
        Ok(coeffs)
    }

    /// `|S_λ| = W_0(q^{-1}) / W_{0λ}(q^{-1}) · q^{h(λ)}`.
    pub fn sphere_size(&self, lambda: &Coweight, q: u64) -> Result<BigUint> {
        let h = self.height_two_rho(lambda)?;
        if q < 2 {
            return Err(Error::input("q", "thickness must be at least 2"));
        }
        let elements = self.enumerate_weyl(false)?;
        let full = poincare_over(&elements, &SubsetSelector::All, q);
        let stab = poincare_over(&elements, &SubsetSelector::Stabilizer(lambda.clone()), q);
        let value = full / stab * rational::qpow(q, h as i64);
        rational::to_biguint(&value).ok_or_else(|| {
            Error::Consistency(format!(
                "sphere size for {lambda} in {} at q={q} is {}, not a positive integer",
                self.label,
                rational::to_string(&value)
            ))
        })
    }

    pub fn to_json(&self) -> Value {
        let vecs = |vs: &[Vec<Rational>]| -> Value {
            Value::Array(
                vs.iter()
                    .map(|v| Value::Array(v.iter().map(fraction_pair).collect()))
                    .collect(),
            )
        };
        let coroots: Vec<Vec<Rational>> =
            self.positive_roots.iter().map(|a| self.coroot(a)).collect();
        json!({
            "type": self.label.to_string(),
            "rank": self.rank(),
            "ambient_dim": self.ambient_dim,
            "simple_roots": vecs(&self.simple_roots),
            "positive_roots": vecs(&self.positive_roots),
            "positive_roots_simple_coords": self.positive_coeffs,
            "positive_coroots": vecs(&coroots),
            "highest_root": Value::Array(self.highest_root().iter().map(fraction_pair).collect()),
            "marks": self.marks,
            "fundamental_coweights": vecs(&self.fundamental_coweights),
            "cartan_matrix": self.cartan,
        })
    }
}

fn poincare_over(elements: &[WeylElement], selector: &SubsetSelector, q: u64) -> Rational {
    let qinv = Rational::new(BigInt::one(), BigInt::from(q));
    elements
        .iter()
        .filter(|w| match selector {
            SubsetSelector::All => true,
            SubsetSelector::Stabilizer(l) => &w.apply(l) == l,
        })
        .fold(Rational::zero(), |acc, w| {
            acc + num_traits::pow(qinv.clone(), w.length())
        })
}

/// Residue class of `λ` in `P/Q ≅ Z/(n+1)` for type `A_n`: `Σ i·c_i mod (n+1)`.
pub fn type_a_class(lambda: &Coweight) -> i64 {
    let modulus = lambda.rank() as i64 + 1;
    lambda
        .0
        .iter()
        .enumerate()
        .map(|(i, c)| (i as i64 + 1) * c)
        .sum::<i64>()
        .mod_floor(&modulus)
}

/// Non-integral coordinates of `λ` in the coroot basis, for diagnostics.
pub fn non_integral_part(coords: &[Rational]) -> Vec<Rational> {
    coords
        .iter()
        .map(|m| {
            let f = m - m.floor();
            if f.is_negative() {
                f + int(1)
            } else {
                f
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(s: &str) -> RootDatum {
        RootDatum::from_label(s).unwrap()
    }

    fn amb(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(n, d)| frac(n, d)).collect()
    }

    #[test]
    fn c2_positive_roots_and_coweights() {
        let d = datum("C2");
        let coeffs: Vec<Vec<i64>> = d.positive_root_coeffs().to_vec();
        assert_eq!(coeffs, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1]]);
        assert_eq!(d.simple_roots()[0], amb(&[(1, 1), (-1, 1)]));
        assert_eq!(d.simple_roots()[1], amb(&[(0, 1), (2, 1)]));
        assert_eq!(d.fundamental_coweights()[0], amb(&[(1, 1), (0, 1)]));
        assert_eq!(d.fundamental_coweights()[1], amb(&[(1, 2), (1, 2)]));
        assert_eq!(d.marks(), &[2, 1]);
        // α_2^∨ = e_2
        assert_eq!(d.coroot(&d.simple_roots()[1]), amb(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn a1_is_tiny() {
        let d = datum("A1");
        assert_eq!(d.num_positive_roots(), 1);
        let half_alpha: Vec<Rational> = d.simple_roots()[0].iter().map(|x| x / int(2)).collect();
        assert_eq!(d.fundamental_coweights()[0], half_alpha);
        assert_eq!(d.marks(), &[1]);
    }

    #[test]
    fn root_counts_by_type() {
        let expected = [
            ("A2", 3),
            ("A4", 10),
            ("B3", 9),
            ("C4", 16),
            ("D4", 12),
            ("D5", 20),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("F4", 24),
            ("G2", 6),
        ];
        for (label, count) in expected {
            assert_eq!(datum(label).num_positive_roots(), count, "{label}");
        }
    }

    #[test]
    fn highest_root_marks() {
        assert_eq!(datum("E8").marks(), &[2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(datum("F4").marks(), &[2, 3, 4, 2]);
        assert_eq!(datum("G2").marks(), &[3, 2]);
        assert_eq!(datum("B3").marks(), &[1, 2, 2]);
    }

    #[test]
    fn bad_labels() {
        for s in ["", "X3", "A0", "A9", "B1", "D3", "E5", "F3", "G3", "C"] {
            assert!(s.parse::<TypeLabel>().is_err(), "{s}");
        }
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(datum("A1").enumerate_weyl(false).unwrap().len(), 2);
        assert_eq!(datum("A2").enumerate_weyl(false).unwrap().len(), 6);
        assert_eq!(datum("C2").enumerate_weyl(false).unwrap().len(), 8);
        assert_eq!(datum("G2").enumerate_weyl(false).unwrap().len(), 12);
        assert_eq!(datum("B3").enumerate_weyl(false).unwrap().len(), 48);
        assert_eq!(datum("F4").enumerate_weyl(false).unwrap().len(), 1152);
        assert!(datum("E7").enumerate_weyl(false).is_err());
    }

    #[test]
    fn c2_length_generating_function() {
        assert_eq!(datum("C2").poincare_polynomial().unwrap(), vec![1, 2, 2, 2, 1]);
        assert_eq!(datum("A2").poincare_polynomial().unwrap(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn stabilizer_values() {
        let d = datum("C2");
        let v = d
            .poincare_value(&SubsetSelector::Stabilizer(Coweight(vec![1, 0])), 3)
            .unwrap();
        assert_eq!(v, frac(4, 3));
        let full = d.poincare_value(&SubsetSelector::All, 2).unwrap();
        let zero = d
            .poincare_value(&SubsetSelector::Stabilizer(Coweight::zero(2)), 2)
            .unwrap();
        assert_eq!(full, zero);
        let reg = d
            .poincare_value(&SubsetSelector::Stabilizer(Coweight(vec![2, 1])), 2)
            .unwrap();
        assert_eq!(reg, int(1));
    }

    #[test]
    fn minus_one_type_examples() {
        assert!(datum("C2").is_minus_one_type());
        assert!(datum("A1").is_minus_one_type());
        assert!(!datum("A2").is_minus_one_type());
    }

    #[test]
    fn dominant_rep_figure_point() {
        let d = datum("C2");
        let (dom, w) = d.dominant_rep(&amb(&[(2, 1), (-4, 1)])).unwrap();
        assert_eq!(dom, Coweight(vec![2, 4]));
        let input = d.coweight_from_ambient(&amb(&[(2, 1), (-4, 1)])).unwrap();
        assert_eq!(w.apply(&input), dom);
    }

    #[test]
    fn dominant_rep_rejects_non_lattice() {
        let d = datum("C2");
        let err = d.dominant_rep(&amb(&[(1, 2), (0, 1)])).unwrap_err();
        assert!(matches!(err, Error::InvalidInput { .. }));
    }

    #[test]
    fn a2_orbit_of_omega1() {
        let d = datum("A2");
        let w1 = Coweight::omega(2, 1);
        let mut orbit: Vec<Coweight> = d
            .enumerate_weyl(false)
            .unwrap()
            .iter()
            .map(|w| w.apply(&w1))
            .collect();
        orbit.sort();
        orbit.dedup();
        assert_eq!(orbit.len(), 3);
        for v in &orbit {
            assert_eq!(d.dominant_rep_coweight(v).0, w1);
        }
    }

    #[test]
    fn star_examples() {
        let a2 = datum("A2");
        assert_eq!(a2.star_involution(&Coweight::omega(2, 1)), Coweight::omega(2, 2));
        let c2 = datum("C2");
        assert_eq!(c2.star_involution(&Coweight(vec![3, 5])), Coweight(vec![3, 5]));
    }

    #[test]
    fn height_examples() {
        let c2 = datum("C2");
        assert_eq!(c2.height_two_rho(&Coweight(vec![2, 2])).unwrap(), 14);
        assert_eq!(c2.height_two_rho(&Coweight::omega(2, 2)).unwrap(), 3);
        assert_eq!(datum("A1").height_two_rho(&Coweight(vec![7])).unwrap(), 7);
        assert!(c2.height_two_rho(&Coweight(vec![1, -1])).is_err());
    }

    #[test]
    fn sphere_examples() {
        let c2 = datum("C2");
        assert_eq!(c2.sphere_size(&Coweight::omega(2, 2), 2).unwrap(), BigUint::from(15u32));
        assert_eq!(c2.sphere_size(&Coweight::zero(2), 3).unwrap(), BigUint::one());
        let a1 = datum("A1");
        assert_eq!(a1.sphere_size(&Coweight(vec![5]), 2).unwrap(), BigUint::from(48u32));
        // projective plane: q² + q + 1 points
        let a2 = datum("A2");
        assert_eq!(a2.sphere_size(&Coweight::omega(2, 1), 3).unwrap(), BigUint::from(13u32));
    }

    #[test]
    fn coroot_lattice_examples() {
        let c2 = datum("C2");
        assert!(c2.in_coroot_lattice(&c2.simple_coroot(1)));
        assert!(!c2.in_coroot_lattice(&Coweight::omega(2, 2)));
        let a2 = datum("A2");
        assert!(!a2.in_coroot_lattice(&Coweight(vec![2, 0])));
        assert!(a2.in_coroot_lattice(&Coweight(vec![2, 2])));
        assert_eq!(type_a_class(&Coweight(vec![2, 0])), 2);
    }

    #[test]
    fn ambient_matrices_are_orthogonal() {
        for label in ["A2", "C2", "G2", "B3"] {
            let d = datum(label);
            for w in d.enumerate_weyl(false).unwrap() {
                let m = w.ambient_matrix(&d);
                for a in d.simple_roots() {
                    for b in d.simple_roots() {
                        let ma: Vec<Rational> =
                            m.iter().map(|row| dot(row, a)).collect();
                        let mb: Vec<Rational> =
                            m.iter().map(|row| dot(row, b)).collect();
                        assert_eq!(dot(&ma, &mb), dot(a, b), "{label} {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn json_export_has_exact_fractions() {
        let v = datum("C2").to_json();
        assert_eq!(v["fundamental_coweights"][1][0], json!(["1", "2"]));
        assert_eq!(v["positive_roots"].as_array().unwrap().len(), 4);
    }
}
