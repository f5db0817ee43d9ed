//! Bohr sets `A = { n : {nθ} < ε }`, the pruned binary tree `T_A` and the
//! set `X` of its member-level spheres.
//!
//! Fractional parts are computed in fixed point: `s = ⌊θ · 2^128⌋` is taken
//! from an integer square root, and `n·s mod 2^128` then lies within
//! `n · 2^{-128}` below the true `{nθ} · 2^128`. Any decision that this
//! error band can flip is reported as [`Decision::Uncertain`].

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::rational::{frac, Rational};
use crate::{Error, Result};

/// Largest horizon accepted by [`BohrSet::new`].
pub const MAX_HORIZON: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    Yes,
    No,
    Uncertain,
}

/// `θ = √d` for a non-square `d ≥ 2`, in 128-bit fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticIrrational {
    d: u64,
    frac_scaled: u128,
}

impl QuadraticIrrational {
    pub fn sqrt(d: u64) -> Result<Self> {
        if d < 2 || d.sqrt() * d.sqrt() == d {
            return Err(Error::input("theta", format!("√{d} is not irrational")));
        }
        let s: BigUint = (BigUint::from(d) << 256u32).sqrt();
        let low = s & ((BigUint::one() << 128u32) - 1u32);
        Ok(QuadraticIrrational {
            d,
            frac_scaled: low.to_u128().expect("masked to 128 bits"),
        })
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    /// `f` with `{nθ}·2^128 ∈ [f, f + n)`, or `None` if that interval wraps.
    fn frac_interval(&self, n: u64) -> Option<(u128, u128)> {
        let f = self.frac_scaled.wrapping_mul(n as u128);
        f.checked_add(n as u128).map(|hi| (f, hi))
    }

    /// `{nθ}` to about 53 bits, for display only.
    pub fn frac_f64(&self, n: u64) -> f64 {
        self.frac_scaled.wrapping_mul(n as u128) as f64 / 2f64.powi(128)
    }

    /// Certified `{nθ} < c` for `0 < c < 1`.
    pub fn frac_below(&self, n: u64, c: &Rational) -> Decision {
        if n == 0 {
            return Decision::Yes;
        }
        let cut = scaled_floor(c);
        match self.frac_interval(n) {
            Some((_, hi)) if hi <= cut => Decision::Yes,
            Some((lo, _)) if lo > cut => Decision::No,
            _ => Decision::Uncertain,
        }
    }

    /// Certified `‖mθ‖ < c` (distance to the nearest integer), `0 < c < 1/2`.
    pub fn near_integer(&self, m: i64, c: &Rational) -> Decision {
        let n = m.unsigned_abs();
        if n == 0 {
            return Decision::Yes;
        }
        let cut = scaled_floor(c);
        let top = u128::MAX - cut; // 2^128 − 1 − cut
        match self.frac_interval(n) {
            Some((lo, hi)) => {
                if hi <= cut || lo > top {
                    Decision::Yes
                } else if lo > cut && hi <= top {
                    Decision::No
                } else {
                    Decision::Uncertain
                }
            }
            None => Decision::Uncertain,
        }
    }
}

/// `⌊c · 2^128⌋` for `0 ≤ c < 1`.
fn scaled_floor(c: &Rational) -> u128 {
    let num = c.numer().to_biguint().expect("non-negative");
    let den = c.denom().to_biguint().expect("positive");
    ((num << 128u32) / den).to_u128().expect("c < 1")
}

#[derive(Debug, Clone)]
pub struct BohrSet {
    epsilon: Rational,
    theta: QuadraticIrrational,
    decisions: Vec<Decision>,
}

impl BohrSet {
    /// Membership of `0..=horizon`.
    pub fn new(epsilon: Rational, theta: QuadraticIrrational, horizon: u64) -> Result<Self> {
        if !(epsilon.is_positive() && epsilon < frac(1, 4)) {
            return Err(Error::input("epsilon", "need 0 < ε < 1/4"));
        }
        if !(1..=MAX_HORIZON).contains(&horizon) {
            return Err(Error::input("N", format!("need 1 ≤ N ≤ {MAX_HORIZON}")));
        }
        let decisions = (0..=horizon)
            .into_par_iter()
            .map(|n| theta.frac_below(n, &epsilon))
            .collect();
        Ok(BohrSet {
            epsilon,
            theta,
            decisions,
        })
    }

    pub fn sqrt2(epsilon: Rational, horizon: u64) -> Result<Self> {
        Self::new(epsilon, QuadraticIrrational::sqrt(2)?, horizon)
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn theta(&self) -> QuadraticIrrational {
        self.theta
    }

    pub fn horizon(&self) -> u64 {
        self.decisions.len() as u64 - 1
    }

    pub fn decision(&self, n: u64) -> Decision {
        self.decisions[n as usize]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.decisions.get(n as usize) == Some(&Decision::Yes)
    }

    pub fn uncertain_count(&self) -> usize {
        self.decisions.iter().filter(|&&d| d == Decision::Uncertain).count()
    }

    /// Certified members as an indicator; uncertain entries read as absent.
    pub fn indicator(&self) -> Vec<bool> {
        self.decisions.iter().map(|&d| d == Decision::Yes).collect()
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.decisions
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == Decision::Yes)
            .map(|(n, _)| n as u64)
    }

    /// Density over `0..=N` with uncertain entries dropped from numerator
    /// and denominator alike.
    pub fn density(&self) -> DensityEstimate {
        let known: Vec<Option<bool>> = self
            .decisions
            .iter()
            .map(|d| match d {
                Decision::Yes => Some(true),
                Decision::No => Some(false),
                Decision::Uncertain => None,
            })
            .collect();
        density_of(&known)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    #[serde(serialize_with = "crate::json::ratio")]
    pub estimate: Rational,
    /// `(w, density of the first w entries)` for `w = 2^j`.
    pub dyadic: Vec<(usize, f64)>,
}

fn density_of(known: &[Option<bool>]) -> DensityEstimate {
    let mut dyadic = vec![];
    let (mut hits, mut total) = (0usize, 0usize);
    let mut next = 1;
    for (i, k) in known.iter().enumerate() {
        if let Some(b) = k {
            total += 1;
            hits += *b as usize;
        }
        if i + 1 == next {
            if total > 0 {
                dyadic.push((next, hits as f64 / total as f64));
            }
            next *= 2;
        }
    }
    let estimate = if total == 0 {
        frac(0, 1)
    } else {
        frac(hits as i64, total as i64)
    };
    DensityEstimate { estimate, dyadic }
}

/// Density of a plain indicator.
pub fn natural_density(indicator: &[bool]) -> DensityEstimate {
    let known: Vec<Option<bool>> = indicator.iter().map(|&b| Some(b)).collect();
    density_of(&known)
}

/// `(A − A) + (A − A)` for `A ⊆ [0, N]`, indexed by `m + 2N` for
/// `m ∈ [−2N, 2N]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sumset {
    offset: i64,
    indicator: Vec<bool>,
}

impl Sumset {
    pub fn span(&self) -> i64 {
        self.offset
    }

    pub fn contains(&self, m: i64) -> bool {
        let i = m + self.offset;
        i >= 0 && (i as usize) < self.indicator.len() && self.indicator[i as usize]
    }

    /// Density on `[0, w]`.
    pub fn density_on(&self, w: i64) -> DensityEstimate {
        let w = w.min(self.offset);
        let ind: Vec<bool> = (0..=w).map(|m| self.contains(m)).collect();
        natural_density(&ind)
    }

    /// For each residue `m mod k`, the density of the sumset inside that
    /// class on `[0, w]`, times `k`.
    pub fn residue_profile(&self, k: i64, w: i64) -> Vec<f64> {
        let w = w.min(self.offset);
        (0..k)
            .map(|m| {
                let class: Vec<i64> = (0..=w).filter(|x| x % k == m).collect();
                let hits = class.iter().filter(|&&x| self.contains(x)).count();
                hits as f64 / class.len() as f64
            })
            .collect()
    }
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len() + b.len() - 1;
    let size = len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let lift = |xs: &[f64]| {
        let mut v: Vec<Complex<f64>> = xs.iter().map(|&x| Complex::new(x, 0.0)).collect();
        v.resize(size, Complex::new(0.0, 0.0));
        v
    };
    let mut fa = lift(a);
    let mut fb = lift(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    fa.truncate(len);
    fa.into_iter().map(|c| c.re / size as f64).collect()
}

/// `(A − A) + (A − A)` by one difference pass and one sum pass, each an FFT
/// convolution of 0/1 indicators rounded at `1/2`.
pub fn double_difference_sumset(indicator: &[bool]) -> Result<Sumset> {
    let n = indicator.len();
    if n == 0 {
        return Err(Error::input("window", "empty indicator"));
    }
    if n as u64 > MAX_HORIZON + 1 {
        return Err(Error::input("window", "indicator longer than the supported horizon"));
    }
    let a: Vec<f64> = indicator.iter().map(|&b| b as u8 as f64).collect();
    let rev: Vec<f64> = a.iter().rev().copied().collect();
    // d[i] counts pairs with difference i − (n − 1)
    let d: Vec<f64> = convolve(&a, &rev)
        .into_iter()
        .map(|x| if x > 0.5 { 1.0 } else { 0.0 })
        .collect();
    let s: Vec<bool> = convolve(&d, &d).into_iter().map(|x| x > 0.5).collect();
    Ok(Sumset {
        offset: 2 * (n as i64 - 1),
        indicator: s,
    })
}

/// Counts for `T_A`: a level-`n` vertex has two children iff `n ∈ A`.
#[derive(Debug, Clone)]
pub struct PrunedTree {
    branching: Vec<bool>,
    /// `prefix[n] = |A ∩ [0, n)|`.
    prefix: Vec<u64>,
    /// Branching levels in increasing order.
    branch_levels: Vec<u64>,
}

/// A vertex of `T_A`: its level and its child choices at each branching
/// level above it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrunedVertex {
    pub level: u64,
    pub choices: Vec<bool>,
}

impl PrunedTree {
    pub fn new(branching: Vec<bool>) -> Self {
        let mut prefix = Vec::with_capacity(branching.len() + 1);
        prefix.push(0);
        for &b in &branching {
            prefix.push(prefix.last().unwrap() + b as u64);
        }
        let branch_levels = branching
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
            .collect();
        PrunedTree {
            branching,
            prefix,
            branch_levels,
        }
    }

    pub fn from_bohr(a: &BohrSet) -> Self {
        Self::new(a.indicator())
    }

    /// Deepest level whose sphere is determined.
    pub fn horizon(&self) -> u64 {
        self.branching.len() as u64
    }

    pub fn log2_sphere_size(&self, n: u64) -> u64 {
        self.prefix[n as usize]
    }

    pub fn sphere_size(&self, n: u64) -> BigUint {
        BigUint::one() << self.log2_sphere_size(n)
    }

    /// `log_2 |S_n| / n`.
    pub fn dimension_estimate(&self, n: u64) -> f64 {
        self.log2_sphere_size(n) as f64 / n as f64
    }

    /// All level-`n` vertices, generated by expanding children level by level.
    pub fn sphere(&self, n: u64) -> Result<Vec<PrunedVertex>> {
        if n > self.horizon() || self.log2_sphere_size(n) > 20 {
            return Err(Error::input("n", format!("sphere S_{n} too large to list")));
        }
        let mut level = vec![PrunedVertex {
            level: 0,
            choices: vec![],
        }];
        for m in 0..n {
            let branch = self.branching[m as usize];
            level = level
                .into_iter()
                .flat_map(|v| {
                    let kids: Vec<Option<bool>> =
                        if branch { vec![Some(false), Some(true)] } else { vec![None] };
                    kids.into_iter().map(move |c| {
                        let mut choices = v.choices.clone();
                        choices.extend(c);
                        PrunedVertex {
                            level: m + 1,
                            choices,
                        }
                    })
                })
                .collect();
        }
        Ok(level)
    }

    /// A uniform random vertex at level `n`.
    pub fn random_vertex<R: Rng>(&self, n: u64, rng: &mut R) -> PrunedVertex {
        let k = self.log2_sphere_size(n) as usize;
        PrunedVertex {
            level: n,
            choices: (0..k).map(|_| rng.gen()).collect(),
        }
    }

    /// Level of the last common ancestor.
    pub fn meet_level(&self, x: &PrunedVertex, y: &PrunedVertex) -> u64 {
        match x.choices.iter().zip(&y.choices).position(|(a, b)| a != b) {
            Some(j) => self.branch_levels[j],
            None => x.level.min(y.level),
        }
    }

    pub fn distance(&self, x: &PrunedVertex, y: &PrunedVertex) -> u64 {
        let m = self.meet_level(x, y);
        (x.level - m) + (y.level - m)
    }

    /// Cesàro lower-density average `(1/(N+1)) Σ_{n ≤ N} |X ∩ S_n| / |S_n|`
    /// for `X` the union of the spheres at levels in `levels`.
    pub fn lower_density(&self, levels: &[bool], upto: u64) -> Rational {
        let hits = levels[..=upto as usize].iter().filter(|&&b| b).count();
        frac(hits as i64, upto as i64 + 1)
    }
}

/// Avoidance witnesses and distance checks for the counterexample.
#[derive(Debug, Clone, Serialize)]
pub struct AvoidanceReport {
    #[serde(serialize_with = "crate::json::ratio")]
    pub epsilon: Rational,
    #[serde(rename = "N")]
    pub horizon: u64,
    #[serde(rename = "density_A")]
    pub density_a: f64,
    pub density_sumset: f64,
    pub witnesses: Vec<Witness>,
    pub uncertain_count: usize,
    pub sampled_pairs: usize,
    pub sampled_failures: usize,
    pub exhaustive_level: u64,
    pub exhaustive_pairs: usize,
    pub exhaustive_failures: usize,
    /// `k` mapped to the per-residue relative sumset densities.
    pub uniformity: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub k: u64,
    /// `None` when no witness lies in the window.
    pub t: Option<u64>,
}

impl AvoidanceReport {
    pub fn all_found(&self) -> bool {
        self.witnesses.iter().all(|w| w.t.is_some())
    }

    pub fn distances_ok(&self) -> bool {
        self.sampled_failures == 0 && self.exhaustive_failures == 0
    }
}

/// The counterexample built once: `A`, `T_A` and the sumset.
pub struct Counterexample {
    pub a: BohrSet,
    pub tree: PrunedTree,
    pub sumset: Sumset,
}

impl Counterexample {
    pub fn build(epsilon: Rational, theta: QuadraticIrrational, horizon: u64) -> Result<Self> {
        let a = BohrSet::new(epsilon, theta, horizon)?;
        let tree = PrunedTree::from_bohr(&a);
        let sumset = double_difference_sumset(&a.indicator())?;
        Ok(Counterexample { a, tree, sumset })
    }

    /// Smallest `t ≥ K` with `kt` outside the computed sumset and certified
    /// `‖ktθ‖ ≥ 2ε`, so `kt` also avoids the sumset of the full set `A`.
    pub fn witness(&self, k: u64, big_k: u64) -> Option<u64> {
        let two_eps = self.a.epsilon() * frac(2, 1);
        let limit = self.sumset.span() as u64;
        (big_k..)
            .take_while(|t| k * t <= limit)
            .find(|&t| {
                let m = (k * t) as i64;
                !self.sumset.contains(m) && self.a.theta().near_integer(m, &two_eps) == Decision::No
            })
    }

    fn member_levels(&self, upto: u64) -> Vec<u64> {
        self.a.members().take_while(|&n| n <= upto).collect()
    }

    /// Random pairs of `X` vertices with a random shared prefix; returns the
    /// number of pairs whose distance falls outside the sumset.
    pub fn sample_pairs<R: Rng>(&self, pairs: usize, rng: &mut R) -> usize {
        let levels = self.member_levels(self.tree.horizon());
        (0..pairs)
            .filter(|_| {
                let a = levels[rng.gen_range(0..levels.len())];
                let b = levels[rng.gen_range(0..levels.len())];
                let x = self.tree.random_vertex(a, rng);
                let mut y = self.tree.random_vertex(b, rng);
                let shared = rng.gen_range(0..=x.choices.len().min(y.choices.len()));
                y.choices[..shared].copy_from_slice(&x.choices[..shared]);
                !self.sumset.contains(self.tree.distance(&x, &y) as i64)
            })
            .count()
    }

    /// Every pair of `X` vertices up to level `upto`; returns
    /// `(pairs, failures)`.
    pub fn exhaustive_pairs(&self, upto: u64) -> Result<(usize, usize)> {
        let upto = upto.min(self.tree.horizon());
        let mut xs = vec![];
        for n in self.member_levels(upto) {
            xs.extend(self.tree.sphere(n)?);
        }
        let tree = &self.tree;
        let sumset = &self.sumset;
        let failures = (0..xs.len())
            .into_par_iter()
            .map(|i| {
                xs[i + 1..]
                    .iter()
                    .filter(|y| !sumset.contains(tree.distance(&xs[i], y) as i64))
                    .count()
            })
            .sum();
        Ok((xs.len() * (xs.len() - 1) / 2, failures))
    }

    pub fn report<R: Rng>(
        &self,
        k_max: u64,
        big_k: u64,
        pairs: usize,
        exhaustive_level: u64,
        rng: &mut R,
    ) -> Result<AvoidanceReport> {
        if k_max == 0 || k_max * big_k > self.sumset.span() as u64 {
            return Err(Error::input(
                "K",
                format!("need k_max ≥ 1 and k_max·K within the sumset window {}", self.sumset.span()),
            ));
        }
        let n = self.a.horizon() as i64;
        let witnesses = (1..=k_max)
            .map(|k| Witness {
                k,
                t: self.witness(k, big_k),
            })
            .collect();
        let (exhaustive_pairs, exhaustive_failures) = self.exhaustive_pairs(exhaustive_level)?;
        let uniformity = (1..=4)
            .map(|k| (k.to_string(), self.sumset.residue_profile(k, n)))
            .collect();
        Ok(AvoidanceReport {
            epsilon: self.a.epsilon().clone(),
            horizon: self.a.horizon(),
            density_a: crate::rational::to_f64(&self.a.density().estimate),
            density_sumset: crate::rational::to_f64(&self.sumset.density_on(n).estimate),
            witnesses,
            uncertain_count: self.a.uncertain_count(),
            sampled_pairs: pairs,
            sampled_failures: self.sample_pairs(pairs, rng),
            exhaustive_level: exhaustive_level.min(self.tree.horizon()),
            exhaustive_pairs,
            exhaustive_failures,
            uniformity,
        })
    }
}

/// Run-length encoding `[(value, length), …]` of an indicator.
pub fn run_length(indicator: &[bool]) -> Vec<(bool, usize)> {
    let mut out: Vec<(bool, usize)> = vec![];
    for &b in indicator {
        match out.last_mut() {
            Some((v, len)) if *v == b => *len += 1,
            _ => out.push((b, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    /// `{n√2}` to about 200 bits, from `isqrt(2 n^2 · 4^200)`.
    fn frac_sqrt2_oracle(n: u64) -> Rational {
        let scale = BigInt::one() << 200u32;
        let r = (BigInt::from(2u64 * n * n) * &scale * &scale).sqrt();
        let whole = &r / &scale;
        Rational::new(r - whole * &scale, scale)
    }

    #[test]
    fn fixed_point_matches_oracle() {
        let th = QuadraticIrrational::sqrt(2).unwrap();
        for n in [1u64, 5, 12, 99, 1000, 123_457, 999_999] {
            let approx = th.frac_f64(n);
            let exact = crate::rational::to_f64(&frac_sqrt2_oracle(n));
            assert!((approx - exact).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn membership_examples() {
        let a = BohrSet::sqrt2(frac(1, 5), 100).unwrap();
        assert!(a.contains(0));
        assert!(a.contains(5));
        assert!(!a.contains(1));
        assert_eq!(a.uncertain_count(), 0);
        for n in 0..=100 {
            assert_eq!(a.contains(n), frac_sqrt2_oracle(n) < frac(1, 5), "n={n}");
        }
        assert!(BohrSet::sqrt2(frac(1, 4), 10).is_err());
        assert!(BohrSet::sqrt2(frac(0, 1), 10).is_err());
        assert!(QuadraticIrrational::sqrt(9).is_err());
    }

    #[test]
    fn membership_monotone_in_epsilon() {
        let small = BohrSet::sqrt2(frac(1, 10), 5000).unwrap();
        let big = BohrSet::sqrt2(frac(1, 5), 5000).unwrap();
        assert!(small.members().all(|n| big.contains(n)));
    }

    #[test]
    fn densities() {
        assert_eq!(natural_density(&[true; 17]).estimate, frac(1, 1));
        let even: Vec<bool> = (0..1000).map(|n| n % 2 == 0).collect();
        assert_eq!(natural_density(&even).estimate, frac(1, 2));
        let a = BohrSet::sqrt2(frac(1, 5), 100_000).unwrap();
        let d = crate::rational::to_f64(&a.density().estimate);
        assert!((d - 0.2).abs() < 0.01);
    }

    #[test]
    fn sumset_small_cases() {
        let s = double_difference_sumset(&[true]).unwrap();
        assert!(s.contains(0));
        assert!(!s.contains(1) && !s.contains(-1));
        let ind = [true, false, false, true, false, true];
        let members: Vec<i64> = vec![0, 3, 5];
        let mut direct = BTreeSet::new();
        for a in &members {
            for b in &members {
                for c in &members {
                    for d in &members {
                        direct.insert(a - b + c - d);
                    }
                }
            }
        }
        let s = double_difference_sumset(&ind).unwrap();
        for m in -10..=10 {
            assert_eq!(s.contains(m), direct.contains(&m), "m={m}");
        }
    }

    #[test]
    fn sumset_matches_band_away_from_edges() {
        let a = BohrSet::sqrt2(frac(1, 5), 20_000).unwrap();
        let s = double_difference_sumset(&a.indicator()).unwrap();
        let band = frac(2, 5);
        for m in -2000i64..=2000 {
            assert!(s.contains(m) == s.contains(-m));
            match a.theta().near_integer(m, &band) {
                Decision::Yes => assert!(s.contains(m), "m={m}"),
                Decision::No => assert!(!s.contains(m), "m={m}"),
                Decision::Uncertain => {}
            }
        }
        for m in a.members().take(200) {
            assert!(s.contains(m as i64));
        }
    }

    #[test]
    fn pruned_tree_counts_by_construction() {
        let a = BohrSet::sqrt2(frac(1, 5), 60).unwrap();
        let tree = PrunedTree::from_bohr(&a);
        let mut prev = BigUint::one();
        for n in 0..=60 {
            let listed = tree.sphere(n).unwrap();
            assert_eq!(BigUint::from(listed.len()), tree.sphere_size(n));
            if n > 0 {
                let factor = if a.contains(n - 1) { 2u32 } else { 1 };
                assert_eq!(tree.sphere_size(n), &prev * factor);
            }
            prev = tree.sphere_size(n);
        }
    }

    #[test]
    fn trivial_pruned_tree() {
        let mut ind = vec![false; 10];
        ind[0] = true;
        let tree = PrunedTree::new(ind.clone());
        assert_eq!(tree.sphere(1).unwrap().len(), 2);
        assert_eq!(tree.sphere(9).unwrap().len(), 2);
        let s = tree.sphere(7).unwrap();
        assert_eq!(tree.distance(&s[0], &s[1]), 14);
        assert_eq!(tree.lower_density(&ind, 9), frac(1, 10));
    }

    #[test]
    fn distances_by_parent_walk() {
        let a = BohrSet::sqrt2(frac(1, 5), 30).unwrap();
        let tree = PrunedTree::from_bohr(&a);
        let walk = |x: &PrunedVertex, y: &PrunedVertex| {
            // climb the deeper vertex until the prefixes agree
            let (mut x, mut y) = (x.clone(), y.clone());
            let mut d = 0;
            let up = |v: &mut PrunedVertex| {
                v.level -= 1;
                if tree.branching[v.level as usize] {
                    v.choices.pop();
                }
            };
            while x != y {
                if x.level >= y.level {
                    up(&mut x)
                } else {
                    up(&mut y)
                }
                d += 1;
            }
            d
        };
        let mut vs = vec![];
        for n in [5, 13, 22, 30] {
            vs.extend(tree.sphere(n).unwrap());
        }
        for x in vs.iter().step_by(3) {
            for y in vs.iter().step_by(5) {
                assert_eq!(tree.distance(x, y), walk(x, y));
            }
        }
    }

    #[test]
    fn avoidance_small() {
        let cx = Counterexample::build(frac(1, 5), QuadraticIrrational::sqrt(2).unwrap(), 20_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rep = cx.report(4, 100, 500, 30, &mut rng).unwrap();
        assert!(rep.all_found());
        assert!(rep.distances_ok());
        for w in &rep.witnesses {
            let t = w.t.unwrap();
            assert!(t >= 100);
            assert!(!cx.sumset.contains((w.k * t) as i64));
        }
        assert!(cx.report(4, 100_000, 10, 10, &mut rng).is_err());
    }

    #[test]
    fn run_length_encoding() {
        assert_eq!(run_length(&[true, true, false, true]), vec![(true, 2), (false, 1), (true, 1)]);
        assert!(run_length(&[]).is_empty());
    }
}
