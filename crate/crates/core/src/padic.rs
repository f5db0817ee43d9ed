//! Cartan coordinates of invertible rational matrices at a prime `p`: the
//! valuations of the elementary divisors over the localization `Z_(p)`,
//! which label the double coset `K ϖ_λ K` of the matrix.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::building_calc::{validate_building_star_spec, BuildingStarSpec, SpecDiagnostics};
use crate::rational::{self, int, Rational};
use crate::root_system::{Coweight, Family, RootDatum};
use crate::{Error, Result};

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A square invertible rational matrix together with a prime.
#[derive(Debug, Clone, PartialEq)]
pub struct PAdicMatrix {
    entries: Vec<Vec<Rational>>,
    p: u64,
}

impl PAdicMatrix {
    pub fn new(entries: Vec<Vec<Rational>>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input("p", format!("{p} is not prime")));
        }
        let n = entries.len();
        if n == 0 || entries.iter().any(|row| row.len() != n) {
            return Err(Error::input("matrix", "must be a nonempty square array"));
        }
        if determinant(&entries).is_zero() {
            return Err(Error::input("matrix", "matrix is singular"));
        }
        Ok(PAdicMatrix { entries, p })
    }

    pub fn from_ints(rows: &[Vec<i64>], p: u64) -> Result<Self> {
        Self::new(
            rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            p,
        )
    }

    /// Parses rows of `"a"`, `"a/b"` or decimal strings.
    pub fn parse(rows: &[Vec<String>], p: u64) -> Result<Self> {
        let entries = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, s)| {
                        rational::parse(s).ok_or_else(|| {
                            Error::input("matrix", format!("entry ({}, {}) = {s:?} is not a rational", i + 1, j + 1))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries, p)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn det_valuation(&self) -> i64 {
        rational::valuation(&determinant(&self.entries), self.p)
    }

    pub fn inverse(&self) -> PAdicMatrix {
        PAdicMatrix {
            entries: rational::invert(&self.entries).expect("invertible by construction"),
            p: self.p,
        }
    }

    pub fn mul(&self, other: &PAdicMatrix) -> Result<PAdicMatrix> {
        if self.p != other.p || self.dim() != other.dim() {
            return Err(Error::input("matrix", "dimension or prime mismatch"));
        }
        Ok(PAdicMatrix {
            entries: rational::mat_mul(&self.entries, &other.entries),
            p: self.p,
        })
    }
}

/// Non-increasing elementary-divisor valuations `λ_1 ≥ ⋯ ≥ λ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CartanCoord(pub Vec<i64>);

impl CartanCoord {
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `(−λ_n, …, −λ_1)`.
    pub fn reversed_negation(&self) -> CartanCoord {
        CartanCoord(self.0.iter().rev().map(|x| -x).collect())
    }
}

/// Leibniz expansion; exact and fine for the small sizes used here.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Rational::zero();
    permutations(&mut perm, 0, &mut |p| {
        let mut sign = 1i64;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    sign = -sign;
                }
            }
        }
        let prod = (0..n).fold(int(sign), |acc, i| acc * &m[i][p[i]]);
        total += prod;
    });
    total
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

fn val(x: &Rational, p: u64) -> Option<i64> {
    (!x.is_zero()).then(|| rational::valuation(x, p))
}

/// Valuation-pivot elimination: at each step the entry of least valuation
/// in the remaining block is moved to the corner and used to clear its row
/// and column with `Z_(p)`-unimodular operations.
pub fn cartan_coordinates(m: &PAdicMatrix) -> CartanCoord {
    let p = m.p;
    let n = m.dim();
    let mut a = m.entries.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (pi, pj, v) = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| val(&a[i][j], p).map(|v| (i, j, v)))
            .min_by_key(|&(i, j, v)| (v, i, j))
            .expect("invertible matrices keep a nonzero block");
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
        for j in k + 1..n {
            a[k][j] = Rational::zero();
        }
        out.push(v);
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    CartanCoord(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with_last = subsets(n - 1, k - 1);
    for s in &mut with_last {
        s.push(n - 1);
    }
    let mut all = subsets(n - 1, k);
    all.extend(with_last);
    all
}

/// Gcd-of-minors oracle: the `k` smallest coordinates sum to the least
/// valuation of a nonzero `k × k` minor.
pub fn cartan_by_minors(m: &PAdicMatrix) -> CartanCoord {
    let n = m.dim();
    let mut cumulative = vec![0i64; n + 1];
    for k in 1..=n {
        let mut best: Option<i64> = None;
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let sub: Vec<Vec<Rational>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m.entries[i][j].clone()).collect())
                    .collect();
                if let Some(v) = val(&determinant(&sub), m.p) {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        cumulative[k] = best.expect("an invertible matrix has a nonzero k-minor");
    }
    let mut out: Vec<i64> = (1..=n).map(|k| cumulative[k] - cumulative[k - 1]).collect();
    out.reverse();
    CartanCoord(out)
}

/// `λ(g^{-1} h)`, the vector distance between `gK` and `hK`.
pub fn vector_distance_cosets(g: &PAdicMatrix, h: &PAdicMatrix) -> Result<CartanCoord> {
    Ok(cartan_coordinates(&g.inverse().mul(h)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryDiagnostics {
    pub coweights: Vec<Vec<i64>>,
    pub in_two_p: Vec<bool>,
    pub chain_ok: bool,
    pub minus_one_type: bool,
    pub hypotheses_hold: bool,
    pub diagnostics: Vec<String>,
    /// `λ(g_j) / 2` with unit multiplicities, when every `λ(g_j) ∈ 2P`.
    pub induced_spec: Option<Vec<Vec<i64>>>,
    pub spec_check: Option<SpecDiagnostics>,
}

/// The coweight of the split torus cocharacter with exponents `coord`.
/// Type `A_{n−1}` reads all `n` coordinates (the central part is dropped);
/// type `C_n` reads the first `n` of the `2n` coordinates.
pub fn coweight_of(datum: &RootDatum, coord: &CartanCoord) -> Result<Coweight> {
    let label = datum.label();
    let ambient: Vec<i64> = match label.family {
        Family::A => {
            if coord.0.len() != label.rank + 1 {
                return Err(Error::input(
                    "coords",
                    format!("{label} needs {} coordinates", label.rank + 1),
                ));
            }
            coord.0.clone()
        }
        Family::C => {
            let n = label.rank;
            if coord.0.len() != 2 * n {
                return Err(Error::input("coords", format!("{label} needs {} coordinates", 2 * n)));
            }
            let c = &coord.0;
            if (0..n).any(|i| c[i] != -c[2 * n - 1 - i]) {
                return Err(Error::input(
                    "coords",
                    "symplectic coordinates must have the form (λ, −λ reversed)",
                ));
            }
            c[..n].to_vec()
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "Cartan coordinates are only translated for types A and C, not {label}"
            )))
        }
    };
    let v: Vec<Rational> = if label.family == Family::A {
        // Bourbaki A_{n-1} lives in the sum-zero hyperplane of R^n.
        let mean = Rational::new(ambient.iter().sum::<i64>().into(), (ambient.len() as i64).into());
        ambient.iter().map(|&x| int(x) - &mean).collect()
    } else {
        ambient.iter().map(|&x| int(x)).collect()
    };
    datum.coweight_from_ambient(&v)
}

/// Checks `λ(g_j) ∈ 2P` and `Nρ ≪ λ(g_1) ≪ ⋯ ≪ λ(g_r)`.
pub fn corollary_hypothesis_check(datum: &RootDatum, coords: &[CartanCoord], big_n: i64) -> Result<CorollaryDiagnostics> {
    let coweights: Vec<Coweight> = coords
        .iter()
        .map(|c| coweight_of(datum, c))
        .collect::<Result<_>>()?;
    let mut diagnostics = vec![];
    let in_two_p: Vec<bool> = coweights.iter().map(|c| c.0.iter().all(|x| x % 2 == 0)).collect();
    for (j, ok) in in_two_p.iter().enumerate() {
        if !ok {
            diagnostics.push(format!("λ(g_{}) ∉ 2P", j + 1));
        }
    }
    let mut chain_ok = true;
    let mut prev = big_n * Coweight::rho(datum.rank());
    for (j, c) in coweights.iter().enumerate() {
        if !prev.ll(c) {
            chain_ok = false;
            diagnostics.push(format!("≪ fails at index {}", j + 1));
        }
        prev = c.clone();
    }
    let minus_one_type = datum.is_minus_one_type();
    if !minus_one_type {
        diagnostics.push(format!("datum {} is not of (−1)-type", datum.label()));
    }
    let all_even = in_two_p.iter().all(|&b| b);
    let (induced_spec, spec_check) = if all_even && !coweights.is_empty() {
        let halves: Vec<Coweight> = coweights
            .iter()
            .map(|c| Coweight(c.0.iter().map(|x| x / 2).collect()))
            .collect();
        let spec = BuildingStarSpec {
            r: vec![1; halves.len()],
            lambdas: halves.clone(),
        };
        (
            Some(halves.into_iter().map(|c| c.0).collect()),
            Some(validate_building_star_spec(datum, &spec)),
        )
    } else {
        (None, None)
    };
    Ok(CorollaryDiagnostics {
        coweights: coweights.into_iter().map(|c| c.0).collect(),
        hypotheses_hold: all_even && chain_ok && minus_one_type,
        in_two_p,
        chain_ok,
        minus_one_type,
        diagnostics,
        induced_spec,
        spec_check,
    })
}
