//! Finite balls of the homogeneous tree `T_q` of degree `q + 1`.
//!
//! Vertices are coded by strings: the root `o` is the empty string, a level-1
//! vertex is one letter in `0..=q`, and every deeper letter is in `1..=q`.
//! Internally a vertex at level `n ≥ 1` is the integer whose mixed-radix
//! digits are its letters (first letter has weight `q^{n-1}`, later letters
//! contribute `letter − 1`), so numeric order within a level is lexicographic
//! code order and the level-`n` descendants of a vertex form a contiguous
//! index range.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rational::{self, frac, qpow, Rational};
use crate::{Error, Result};

/// Largest supported `q`; codes use one decimal digit per letter.
pub const MAX_Q: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub level: u32,
    pub index: u64,
}

impl Vertex {
    pub const ROOT: Vertex = Vertex { level: 0, index: 0 };

    pub fn is_root(&self) -> bool {
        self.level == 0
    }
}

/// The ball of radius `depth` about the root of `T_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeBall {
    q: u64,
    depth: u32,
}

impl TreeBall {
    pub fn new(q: u64, depth: u32) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::input("q", format!("q must be in 2..={MAX_Q}, got {q}")));
        }
        if depth < 1 {
            return Err(Error::input("depth", "depth must be at least 1"));
        }
        let fits = q
            .checked_pow(depth - 1)
            .and_then(|p| p.checked_mul(q + 1))
            .is_some_and(|s| s < 1 << 40);
        if !fits {
            return Err(Error::input("depth", format!("sphere S_{depth} too large for q={q}")));
        }
        Ok(TreeBall { q, depth })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `|S_n| = (q+1) q^{n-1}`, and `|S_0| = 1`.
    pub fn sphere_size(&self, n: u32) -> u64 {
        if n == 0 {
            1
        } else {
            (self.q + 1) * self.q.pow(n - 1)
        }
    }

    pub fn sphere(&self, n: u32) -> impl Iterator<Item = Vertex> {
        (0..self.sphere_size(n)).map(move |index| Vertex { level: n, index })
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.level <= self.depth && v.index < self.sphere_size(v.level)
    }

    fn check(&self, v: Vertex, field: &str) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::input(field, format!("{v:?} is not a vertex of the ball")))
        }
    }

    pub fn code(&self, v: Vertex) -> String {
        if v.level == 0 {
            return String::new();
        }
        let mut letters = Vec::with_capacity(v.level as usize);
        let mut idx = v.index;
        for _ in 1..v.level {
            letters.push((idx % self.q + 1) as u8);
            idx /= self.q;
        }
        letters.push(idx as u8);
        letters.iter().rev().map(|d| char::from(b'0' + d)).collect()
    }

    pub fn parse(&self, code: &str) -> Result<Vertex> {
        let bad = |why: String| Error::input("vertex", format!("{code:?}: {why}"));
        let mut index = 0u64;
        for (pos, ch) in code.chars().enumerate() {
            let d = ch.to_digit(10).ok_or_else(|| bad("not a digit string".into()))? as u64;
            if pos == 0 {
                if d > self.q {
                    return Err(bad(format!("first letter must be in 0..={}", self.q)));
                }
                index = d;
            } else {
                if d == 0 || d > self.q {
                    return Err(bad(format!("letters after the first must be in 1..={}", self.q)));
                }
                index = index * self.q + (d - 1);
            }
        }
        let level = code.chars().count() as u32;
        if level > self.depth {
            return Err(bad(format!("deeper than the ball depth {}", self.depth)));
        }
        Ok(Vertex { level, index })
    }

    /// The ancestor of `v` at level `m ≤ level(v)`.
    pub fn ancestor(&self, v: Vertex, m: u32) -> Vertex {
        debug_assert!(m <= v.level);
        if m == 0 {
            Vertex::ROOT
        } else {
            Vertex {
                level: m,
                index: v.index / self.q.pow(v.level - m),
            }
        }
    }

    /// Indices at level `n` of the descendants of `v` (`n ≥ level(v)`).
    pub fn descendant_range(&self, v: Vertex, n: u32) -> Range<u64> {
        if v.level == 0 {
            0..self.sphere_size(n)
        } else {
            let w = self.q.pow(n - v.level);
            v.index * w..(v.index + 1) * w
        }
    }

    /// Level of the last common ancestor of `x` and `y`.
    pub fn meet_level(&self, x: Vertex, y: Vertex) -> u32 {
        let mut m = x.level.min(y.level);
        while m > 0 && self.ancestor(x, m) != self.ancestor(y, m) {
            m -= 1;
        }
        m
    }

    pub fn distance(&self, x: Vertex, y: Vertex) -> u32 {
        let m = self.meet_level(x, y);
        (x.level - m) + (y.level - m)
    }

    pub fn distance_codes(&self, x: &str, y: &str) -> Result<u32> {
        Ok(self.distance(self.parse(x)?, self.parse(y)?))
    }

    /// `C(v, k)`: the descendants of `v` exactly `k` levels below it.
    pub fn children(&self, v: Vertex, k: u32) -> Result<Vec<Vertex>> {
        self.check(v, "vertex")?;
        let n = v.level + k;
        if n > self.depth {
            return Err(Error::input(
                "k",
                format!("level {n} exceeds the ball depth {}", self.depth),
            ));
        }
        Ok(self
            .descendant_range(v, n)
            .map(|index| Vertex { level: n, index })
            .collect())
    }

    /// `A_{n,t} = { C(v,t) : v ∈ S_{n−t} }`.
    pub fn atoms(&self, n: u32, t: u32) -> Result<AtomPartition> {
        if t > n || n > self.depth {
            return Err(Error::input(
                "t",
                format!("need 0 ≤ t ≤ n ≤ {}, got t={t}, n={n}", self.depth),
            ));
        }
        Ok(AtomPartition {
            ball: *self,
            n,
            t,
            projections: self.sphere(n - t).collect(),
        })
    }
}

/// The atoms of the σ-algebra generated by `A_{n,t}`, each represented by
/// its projection vertex `v ∈ S_{n−t}`.
#[derive(Debug, Clone)]
pub struct AtomPartition {
    ball: TreeBall,
    pub n: u32,
    pub t: u32,
    pub projections: Vec<Vertex>,
}

impl AtomPartition {
    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    /// `q^t`, or `|S_n|` for the single atom at the root when `t = n`.
    pub fn atom_size(&self, i: usize) -> u64 {
        let r = self.ball.descendant_range(self.projections[i], self.n);
        r.end - r.start
    }

    pub fn members(&self, i: usize) -> impl Iterator<Item = Vertex> {
        let n = self.n;
        self.ball
            .descendant_range(self.projections[i], n)
            .map(move |index| Vertex { level: n, index })
    }
}

/// A subset of the ball, stored per level as sorted vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    ball: TreeBall,
    levels: Vec<BTreeSet<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexSetJson {
    pub q: u64,
    pub depth: u32,
    pub levels: BTreeMap<String, Vec<String>>,
}

impl VertexSet {
    pub fn empty(ball: TreeBall) -> Self {
        VertexSet {
            ball,
            levels: vec![BTreeSet::new(); ball.depth as usize + 1],
        }
    }

    pub fn full(ball: TreeBall) -> Self {
        let mut s = Self::empty(ball);
        for n in 0..=ball.depth {
            s.levels[n as usize] = (0..ball.sphere_size(n)).collect();
        }
        s
    }

    pub fn full_sphere(ball: TreeBall, n: u32) -> Self {
        let mut s = Self::empty(ball);
        s.levels[n as usize] = (0..ball.sphere_size(n)).collect();
        s
    }

    /// All descendants of the root child with first letter `letter`.
    pub fn branch(ball: TreeBall, letter: u64) -> Self {
        let mut s = Self::empty(ball);
        let top = Vertex { level: 1, index: letter };
        for n in 1..=ball.depth {
            s.levels[n as usize] = ball.descendant_range(top, n).collect();
        }
        s
    }

    pub fn from_vertices(ball: TreeBall, vs: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut s = Self::empty(ball);
        for v in vs {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn ball(&self) -> TreeBall {
        self.ball
    }

    pub fn insert(&mut self, v: Vertex) -> Result<bool> {
        self.ball.check(v, "vertex")?;
        Ok(self.levels[v.level as usize].insert(v.index))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.levels
            .get(v.level as usize)
            .is_some_and(|l| l.contains(&v.index))
    }

    pub fn level(&self, n: u32) -> &BTreeSet<u64> {
        &self.levels[n as usize]
    }

    pub fn level_vertices(&self, n: u32) -> impl Iterator<Item = Vertex> + '_ {
        self.levels[n as usize]
            .iter()
            .map(move |&index| Vertex { level: n, index })
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..=self.ball.depth).flat_map(move |n| self.level_vertices(n))
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(BTreeSet::is_empty)
    }

    /// `|X ∩ S_n|` restricted to an index range.
    pub fn count_in(&self, n: u32, range: Range<u64>) -> usize {
        self.levels[n as usize].range(range).count()
    }

    fn any_in(&self, n: u32, range: Range<u64>) -> bool {
        self.levels[n as usize].range(range).next().is_some()
    }

    /// `|X ∩ C(v, k)|`.
    pub fn count_descendants(&self, v: Vertex, k: u32) -> usize {
        let n = v.level + k;
        if n > self.ball.depth {
            return 0;
        }
        self.count_in(n, self.ball.descendant_range(v, n))
    }

    pub fn to_json(&self) -> VertexSetJson {
        let mut levels = BTreeMap::new();
        for n in 0..=self.ball.depth {
            if !self.levels[n as usize].is_empty() {
                levels.insert(
                    n.to_string(),
                    self.level_vertices(n).map(|v| self.ball.code(v)).collect(),
                );
            }
        }
        VertexSetJson {
            q: self.ball.q,
            depth: self.ball.depth,
            levels,
        }
    }

    pub fn from_json(j: &VertexSetJson) -> Result<Self> {
        let ball = TreeBall::new(j.q, j.depth)?;
        let mut s = Self::empty(ball);
        for (key, codes) in &j.levels {
            let n: u32 = key
                .parse()
                .map_err(|_| Error::input("levels", format!("level key {key:?} is not an integer")))?;
            for code in codes {
                let v = ball.parse(code)?;
                if v.level != n {
                    return Err(Error::input(
                        "levels",
                        format!("code {code:?} has level {} but is listed under {n}", v.level),
                    ));
                }
                s.insert(v)?;
            }
        }
        Ok(s)
    }
}

/// Per-sphere densities `a_n = |X ∩ S_n| / |S_n|` and tail suprema
/// `b_n = max_{n ≤ m ≤ N} a_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    /// `b_{⌈N/2⌉}`: the supremum over the upper half of the window.
    pub estimate: Rational,
}

impl DensityReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,a_n,b_n\n");
        for (n, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            out.push_str(&format!(
                "{n},{},{}\n",
                rational::to_string(a),
                rational::to_string(b)
            ));
        }
        out
    }
}

pub fn upper_density(x: &VertexSet) -> DensityReport {
    let ball = x.ball;
    let a: Vec<Rational> = (0..=ball.depth)
        .map(|n| frac(x.level(n).len() as i64, ball.sphere_size(n) as i64))
        .collect();
    let mut b = a.clone();
    for n in (0..a.len() - 1).rev() {
        if b[n + 1] > b[n] {
            b[n] = b[n + 1].clone();
        }
    }
    let estimate = b[(ball.depth as usize).div_ceil(2)].clone();
    DensityReport { a, b, estimate }
}

/// A pair `x, y ∈ X ∩ S_n` with `d(x, y) = 2t`, searching only level `n`.
pub fn equidistant_pair_at_level(x: &VertexSet, t: u32, n: u32) -> Option<(Vertex, Vertex)> {
    let ball = x.ball;
    if t == 0 || t > n || n > ball.depth {
        return None;
    }
    let m = n - t;
    // Group by ancestor at level m; within a group look for two distinct
    // branches at level m + 1.
    let mut current: Option<(Vertex, Vertex)> = None; // (group, first member)
    for v in x.level_vertices(n) {
        let g = ball.ancestor(v, m);
        match current {
            Some((group, first)) if group == g => {
                if ball.ancestor(v, m + 1) != ball.ancestor(first, m + 1) {
                    return Some((first, v));
                }
            }
            _ => current = Some((g, v)),
        }
    }
    None
}

/// Lexicographically first witness over levels `t..=N`.
pub fn equidistant_pair_exists(x: &VertexSet, t: u32) -> Option<(Vertex, Vertex)> {
    (t.max(1)..=x.ball.depth).find_map(|n| equidistant_pair_at_level(x, t, n))
}

/// Distances `2t_1 < ⋯ < 2t_k` and multiplicities `r_1, …, r_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarSpec {
    t: Vec<u32>,
    r: Vec<usize>,
}

impl StarSpec {
    pub fn new(t: Vec<u32>, r: Vec<usize>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::input("t", "a star needs k ≥ 1"));
        }
        if t.len() != r.len() {
            return Err(Error::input(
                "r",
                format!("expected {} multiplicities, got {}", t.len(), r.len()),
            ));
        }
        if t[0] == 0 || t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("t", "must be strictly increasing positive integers"));
        }
        if r.contains(&0) {
            return Err(Error::input("r", "every multiplicity must be at least 1"));
        }
        Ok(StarSpec { t, r })
    }

    pub fn k(&self) -> usize {
        self.t.len()
    }

    pub fn t(&self) -> &[u32] {
        &self.t
    }

    pub fn r(&self) -> &[usize] {
        &self.r
    }

    /// `r = max r_i`.
    pub fn r_max(&self) -> usize {
        *self.r.iter().max().expect("k ≥ 1")
    }

    pub fn shifted(&self, s: u32) -> StarSpec {
        StarSpec {
            t: self.t.iter().map(|t| t + s).collect(),
            r: self.r.clone(),
        }
    }
}

/// A balanced star: centre `v_0` and arms `Y_1, …, Y_k` in one sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub level: u32,
    pub center: Vertex,
    pub arms: Vec<Vec<Vertex>>,
}

impl Star {
    /// Re-checks levels, arm sizes, centre distances and the cross-arm
    /// distances `d(x, y) = 2t_j` for `x ∈ Y_i`, `y ∈ Y_j`, `i < j`.
    pub fn verify(&self, ball: &TreeBall, x: &VertexSet, spec: &StarSpec) -> Result<()> {
        let fail = |m: String| Err(Error::Consistency(m));
        let mut all = vec![self.center];
        if self.arms.len() != spec.k() {
            return fail("wrong number of arms".into());
        }
        for (i, arm) in self.arms.iter().enumerate() {
            if arm.len() != spec.r[i] {
                return fail(format!("arm {} has {} vertices", i + 1, arm.len()));
            }
            for &y in arm {
                if ball.distance(self.center, y) != 2 * spec.t[i] {
                    return fail(format!("d(v0, {}) != {}", ball.code(y), 2 * spec.t[i]));
                }
            }
            all.extend(arm);
        }
        for v in &all {
            if v.level != self.level || !x.contains(*v) {
                return fail(format!("{} is not in X ∩ S_{}", ball.code(*v), self.level));
            }
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != all.len() {
            return fail("star vertices are not distinct".into());
        }
        for i in 0..self.arms.len() {
            for j in i + 1..self.arms.len() {
                for &a in &self.arms[i] {
                    for &b in &self.arms[j] {
                        if ball.distance(a, b) != 2 * spec.t[j] {
                            return fail(format!(
                                "d({}, {}) != {}",
                                ball.code(a),
                                ball.code(b),
                                2 * spec.t[j]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

struct LevelCounts {
    by_level: HashMap<u32, HashMap<u64, usize>>,
    total: usize,
}

impl LevelCounts {
    fn new(ball: &TreeBall, x: &VertexSet, n: u32, levels: &[u32]) -> Self {
        let mut by_level: HashMap<u32, HashMap<u64, usize>> = HashMap::new();
        for &m in levels {
            if m == 0 || by_level.contains_key(&m) {
                continue;
            }
            let mut counts = HashMap::new();
            for v in x.level_vertices(n) {
                *counts.entry(ball.ancestor(v, m).index).or_insert(0) += 1;
            }
            by_level.insert(m, counts);
        }
        LevelCounts {
            by_level,
            total: x.level(n).len(),
        }
    }

    /// `|X ∩ S_n ∩ C(w)|`.
    fn get(&self, w: Vertex) -> usize {
        if w.level == 0 {
            self.total
        } else {
            self.by_level[&w.level].get(&w.index).copied().unwrap_or(0)
        }
    }
}

/// Searches `X ∩ S_n` for a balanced star centred at each `v_0` in turn.
///
/// For a centre `v_0` the `i`-th arm must come from the descendants of the
/// ancestor `x_i` of `v_0` at level `n − t_i` that avoid the child of `x_i`
/// leading to `v_0`; such a star exists iff each of those branch complements
/// holds at least `r_i` points of `X`. This is the ancestor classification
/// from the density argument with exact counts in place of the one-child
/// type-A test.
pub fn find_star_at_level(x: &VertexSet, spec: &StarSpec, n: u32) -> Option<Star> {
    let ball = x.ball;
    let tk = *spec.t.last().expect("k ≥ 1");
    if n < tk || n > ball.depth {
        return None;
    }
    let needed = 1 + spec.r.iter().sum::<usize>();
    if x.level(n).len() < needed {
        return None;
    }
    let mut levels = Vec::new();
    for &t in &spec.t {
        levels.push(n - t);
        levels.push(n - t + 1);
    }
    let counts = LevelCounts::new(&ball, x, n, &levels);
    let centers: Vec<Vertex> = x.level_vertices(n).collect();
    let center = centers.par_iter().find_first(|&&v0| {
        spec.t.iter().zip(&spec.r).all(|(&t, &r)| {
            let anc = ball.ancestor(v0, n - t);
            let branch = ball.ancestor(v0, n - t + 1);
            counts.get(anc) - counts.get(branch) >= r
        })
    })?;
    let v0 = *center;
    let arms = spec
        .t
        .iter()
        .zip(&spec.r)
        .map(|(&t, &r)| {
            let anc = ball.ancestor(v0, n - t);
            let branch = ball.ancestor(v0, n - t + 1);
            let outer = ball.descendant_range(anc, n);
            let inner = ball.descendant_range(branch, n);
            let level = x.level(n);
            level
                .range(outer.start..inner.start)
                .chain(level.range(inner.end..outer.end))
                .take(r)
                .map(|&index| Vertex { level: n, index })
                .collect()
        })
        .collect();
    Some(Star {
        level: n,
        center: v0,
        arms,
    })
}

/// First balanced `(k, t, r)`-star in `X`, scanning levels upward and
/// centres in lexicographic order.
pub fn find_balanced_star(x: &VertexSet, spec: &StarSpec) -> Option<Star> {
    let tk = *spec.t.last().expect("k ≥ 1");
    (tk..=x.ball.depth).find_map(|n| find_star_at_level(x, spec, n))
}

/// Smallest `K` such that every shift `t + s` of `spec` with `t_1 + s ≥ K`
/// that fits in the ball admits a balanced star. `None` when even the
/// deepest shift fails.
pub fn observed_threshold(x: &VertexSet, spec: &StarSpec) -> Option<u32> {
    let tk = *spec.t.last().expect("k ≥ 1");
    if tk > x.ball.depth {
        return None;
    }
    let max_shift = x.ball.depth - tk;
    let mut threshold = None;
    for s in (0..=max_shift).rev() {
        if find_balanced_star(x, &spec.shifted(s)).is_some() {
            threshold = Some(spec.t[0] + s);
        } else {
            break;
        }
    }
    threshold
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VertexType {
    A,
    B,
}

/// Type A iff at least two children `y` of `x` have `|X ∩ C(y, s−1)| ≥ r`,
/// where `level(x) = n − s`.
pub fn classify_type_ab(x: &VertexSet, v: Vertex, s: u32, r: usize) -> Result<VertexType> {
    let ball = x.ball;
    ball.check(v, "vertex")?;
    if s == 0 || v.level + s > ball.depth {
        return Err(Error::input(
            "s",
            format!("need s ≥ 1 and level(x) + s ≤ {}", ball.depth),
        ));
    }
    let heavy = ball
        .children(v, 1)?
        .into_iter()
        .filter(|&y| x.count_descendants(y, s - 1) >= r)
        .count();
    Ok(if heavy >= 2 { VertexType::A } else { VertexType::B })
}

fn check_no_pair(x: &VertexSet, t1: u32, n: u32) -> Result<()> {
    if let Some((a, b)) = equidistant_pair_at_level(x, t1, n) {
        let ball = x.ball;
        return Err(Error::HypothesisFails(format!(
            "no 2t1-pairs assumed, but {} and {} in X ∩ S_{n} are at distance {}",
            ball.code(a),
            ball.code(b),
            2 * t1
        )));
    }
    Ok(())
}

fn occupied_projections(x: &VertexSet, n: u32, m: u32) -> BTreeSet<u64> {
    x.level_vertices(n)
        .map(|v| x.ball.ancestor(v, m).index)
        .collect()
}

/// Proportion of the atoms of `F_{n, t_1 − 1}` inside `C(v, t)` that meet `X`.
/// Requires that `X ∩ S_n` has no pair at distance `2t_1`.
pub fn verify_claim1(x: &VertexSet, t1: u32, v: Vertex, t: u32, n: u32) -> Result<Rational> {
    let ball = x.ball;
    if t1 == 0 || t < t1 || n <= t || n > ball.depth {
        return Err(Error::input(
            "t",
            format!("need n > t ≥ t1 ≥ 1 and n ≤ {}", ball.depth),
        ));
    }
    ball.check(v, "v")?;
    if v.level != n - t {
        return Err(Error::input("v", format!("v must lie in S_{}", n - t)));
    }
    check_no_pair(x, t1, n)?;
    let m = n - t1 + 1;
    let range = ball.descendant_range(v, m);
    let total = range.end - range.start;
    let occupied = occupied_projections(x, n, m).range(range).count();
    Ok(frac(occupied as i64, total as i64))
}

/// Claim-1 proportions over every `t ∈ [t_1, n)` and every `v ∈ S_{n−t}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim1Sweep {
    pub checked: usize,
    #[serde(serialize_with = "crate::json::ratio")]
    pub max_proportion: Rational,
    #[serde(serialize_with = "crate::json::ratio")]
    pub bound: Rational,
    /// Some proportion equals the bound `q^{-1}` exactly.
    pub attains_bound: bool,
    pub holds: bool,
}

pub fn claim1_sweep(x: &VertexSet, t1: u32, n: u32) -> Result<Claim1Sweep> {
    let ball = x.ball;
    if t1 == 0 || n <= t1 || n > ball.depth {
        return Err(Error::input("n", format!("need n > t1 ≥ 1 and n ≤ {}", ball.depth)));
    }
    check_no_pair(x, t1, n)?;
    let m = n - t1 + 1;
    let occupied = occupied_projections(x, n, m);
    let bound = frac(1, ball.q as i64);
    let mut checked = 0;
    let mut max_proportion = frac(0, 1);
    for t in t1..n {
        let atoms_per_v = ball.q.pow(t - t1 + 1);
        let mut per_v: HashMap<u64, u64> = HashMap::new();
        for &u in &occupied {
            let v = ball.ancestor(Vertex { level: m, index: u }, n - t);
            *per_v.entry(v.index).or_insert(0) += 1;
        }
        checked += ball.sphere_size(n - t) as usize;
        if let Some(&best) = per_v.values().max() {
            let p = frac(best as i64, atoms_per_v as i64);
            if p > max_proportion {
                max_proportion = p;
            }
        }
    }
    Ok(Claim1Sweep {
        checked,
        attains_bound: max_proportion == bound,
        holds: max_proportion <= bound,
        max_proportion,
        bound,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    Holds,
    Fails(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Report {
    pub n: u32,
    pub lhs: Rational,
    pub rhs: Rational,
    pub hypothesis: Hypothesis,
    /// `lhs < rhs`; only asserted when the hypothesis holds.
    pub bound_holds: bool,
}

impl Lemma2Report {
    pub fn pass(&self) -> Option<bool> {
        match self.hypothesis {
            Hypothesis::Holds => Some(self.bound_holds),
            Hypothesis::Fails(_) => None,
        }
    }
}

/// `q^{-ℓ} + r q^{1 − t_{1,1}}`.
pub fn lemma2_rhs(q: u64, ell: usize, r: usize, t11: u32) -> Rational {
    qpow(q, -(ell as i64)) + rational::int(r as i64) * qpow(q, 1 - t11 as i64)
}

/// Checks `|X ∩ S_n| / |S_n| < q^{-ℓ} + r q^{1 − t_{1,1}}` for star-free `X`.
///
/// `chains[j]` is `t_j`; all chains share `k` and `r`, and consecutive
/// chains must satisfy `t_{k,j} < t_{1,j+1}`.
pub fn verify_lemma2_bound(x: &VertexSet, chains: &[StarSpec], n: u32) -> Result<Lemma2Report> {
    let ball = x.ball;
    let first = chains
        .first()
        .ok_or_else(|| Error::input("chains", "need at least one chain"))?;
    for (j, c) in chains.iter().enumerate() {
        if c.k() != first.k() || c.r() != first.r() {
            return Err(Error::input(
                "chains",
                format!("chain {} differs from chain 1 in k or r", j + 1),
            ));
        }
    }
    for (j, w) in chains.windows(2).enumerate() {
        if w[0].t.last() >= w[1].t.first() {
            return Err(Error::input(
                "chains",
                format!("need t_(k,{}) < t_(1,{})", j + 1, j + 2),
            ));
        }
    }
    let tk_last = *chains.last().unwrap().t.last().unwrap();
    if n <= tk_last || n > ball.depth {
        return Err(Error::input(
            "n",
            format!("need t_(k,l) = {tk_last} < n ≤ {}", ball.depth),
        ));
    }
    let lhs = frac(x.level(n).len() as i64, ball.sphere_size(n) as i64);
    let rhs = lemma2_rhs(ball.q, chains.len(), first.r_max(), first.t[0]);
    let hypothesis = chains
        .iter()
        .enumerate()
        .find_map(|(j, c)| {
            find_balanced_star(x, c).map(|s| {
                Hypothesis::Fails(format!(
                    "X contains a balanced star for chain {} centred at {:?}",
                    j + 1,
                    ball.code(s.center)
                ))
            })
        })
        .unwrap_or(Hypothesis::Holds);
    Ok(Lemma2Report {
        n,
        bound_holds: lhs < rhs,
        lhs,
        rhs,
        hypothesis,
    })
}

/// A finite rooted tree on `0..=N` with positive edge weights; `parents[j-1]`
/// and `weights[j-1]` describe vertex `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedTree {
    pub parents: Vec<usize>,
    pub weights: Vec<u32>,
}

impl WeightedTree {
    pub fn new(parents: Vec<usize>, weights: Vec<u32>) -> Result<Self> {
        if parents.len() != weights.len() {
            return Err(Error::input("weights", "need one weight per non-root vertex"));
        }
        if weights.contains(&0) {
            return Err(Error::input("weights", "weights must be positive"));
        }
        let tree = WeightedTree { parents, weights };
        tree.depths()?;
        Ok(tree)
    }

    pub fn num_vertices(&self) -> usize {
        self.parents.len() + 1
    }

    /// `d_T(0, j)` for every vertex.
    pub fn depths(&self) -> Result<Vec<usize>> {
        let n = self.num_vertices();
        let mut depth: Vec<Option<usize>> = vec![None; n];
        depth[0] = Some(0);
        for start in 1..n {
            let mut path = vec![];
            let mut j = start;
            while depth[j].is_none() {
                if path.len() > n {
                    return Err(Error::input("parents", "parent links contain a cycle"));
                }
                path.push(j);
                let p = self.parents[j - 1];
                if p >= n {
                    return Err(Error::input("parents", format!("vertex {j} has parent {p} out of range")));
                }
                j = p;
            }
            let mut d = depth[j].unwrap();
            for &v in path.iter().rev() {
                d += 1;
                depth[v] = Some(d);
            }
        }
        Ok(depth.into_iter().map(Option::unwrap).collect())
    }

    /// `wt(j) < wt(k)` whenever `d_T(0, j) < d_T(0, k)`.
    pub fn is_well_ordered(&self) -> Result<bool> {
        let depth = self.depths()?;
        let n = self.num_vertices();
        for j in 1..n {
            for k in 1..n {
                if depth[j] < depth[k] && self.weights[j - 1] >= self.weights[k - 1] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Distinct weights ascending, with multiplicities.
    pub fn star_spec(&self) -> Result<StarSpec> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &w in &self.weights {
            *counts.entry(w).or_insert(0) += 1;
        }
        StarSpec::new(counts.keys().copied().collect(), counts.values().copied().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub star: Star,
    /// `v_0, …, v_N`.
    pub vertices: Vec<Vertex>,
}

impl Embedding {
    /// Every pair `i, j` with `d_T(0,i) < d_T(0,j)` and its realized distance,
    /// as `(i, j, required, actual)`.
    pub fn distance_checks(&self, ball: &TreeBall, tree: &WeightedTree) -> Vec<(usize, usize, u32, u32)> {
        let depth = tree.depths().expect("validated tree");
        let mut out = vec![];
        for i in 0..self.vertices.len() {
            for j in 1..self.vertices.len() {
                if depth[i] < depth[j] {
                    out.push((
                        i,
                        j,
                        2 * tree.weights[j - 1],
                        ball.distance(self.vertices[i], self.vertices[j]),
                    ));
                }
            }
        }
        out
    }
}

/// Places `T` into `X` with `d(v_i, v_j) = 2 wt(j)` whenever
/// `d_T(0,i) < d_T(0,j)`, all `v_j` on one sphere.
pub fn embed_weighted_tree(x: &VertexSet, tree: &WeightedTree) -> Result<Option<Embedding>> {
    if !tree.is_well_ordered()? {
        return Err(Error::input("weights", "weight function is not well ordered"));
    }
    let spec = tree.star_spec()?;
    let Some(star) = find_balanced_star(x, &spec) else {
        return Ok(None);
    };
    let mut next = vec![0usize; spec.k()];
    let mut vertices = vec![star.center];
    for &w in &tree.weights {
        let arm = spec.t.iter().position(|&t| t == w).expect("weight in spec");
        vertices.push(star.arms[arm][next[arm]]);
        next[arm] += 1;
    }
    Ok(Some(Embedding { star, vertices }))
}

/// `X^t = { x ∈ X : ∃ y ∈ X, d(x, y) = t }`.
pub fn derived_set(x: &VertexSet, t: u32) -> VertexSet {
    let ball = x.ball;
    if t == 0 {
        return x.clone();
    }
    let mut out = VertexSet::empty(ball);
    for v in x.iter() {
        // y meets v at level m: d = (level(v) − m) + (level(y) − m).
        let found = (0..=v.level).any(|m| {
            let up = v.level - m;
            if up > t {
                return false;
            }
            let down = t - up;
            let ly = m + down;
            if ly > ball.depth {
                return false;
            }
            let anc = ball.ancestor(v, m);
            let outer = ball.descendant_range(anc, ly);
            if up == 0 || down == 0 {
                return x.any_in(ly, outer);
            }
            let inner = ball.descendant_range(ball.ancestor(v, m + 1), ly);
            x.any_in(ly, outer.start..inner.start) || x.any_in(ly, inner.end..outer.end)
        });
        if found {
            out.levels[v.level as usize].insert(v.index);
        }
    }
    out
}

/// How the star-free generator treats the vertices of one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Restriction {
    /// Keep the points below exactly one child.
    SingleChild,
    /// Keep at most this many points in each subtree.
    Cap(usize),
}

/// Random subsets of one sphere `S_n` built top-down: at each designated
/// level every vertex is restricted as given; elsewhere each child survives
/// with probability `keep` (at least one child always survives).
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialConfig {
    pub n: u32,
    pub restrictions: BTreeMap<u32, Restriction>,
    pub keep: f64,
}

impl AdversarialConfig {
    /// Designated levels `n − t_{1,j}` for a family of chains: single-child
    /// when `single` is set, otherwise capped at `r_1`.
    pub fn for_chains(n: u32, chains: &[StarSpec], single: bool, keep: f64) -> Self {
        let restrictions = chains
            .iter()
            .map(|c| {
                let r = if single { Restriction::SingleChild } else { Restriction::Cap(c.r[0]) };
                (n - c.t[0], r)
            })
            .collect();
        AdversarialConfig { n, restrictions, keep }
    }

    pub fn generate<R: Rng>(&self, ball: TreeBall, rng: &mut R) -> Result<VertexSet> {
        let n = self.n;
        if n == 0 || n > ball.depth {
            return Err(Error::input("n", format!("need 1 ≤ n ≤ {}", ball.depth)));
        }
        let mut frontier = vec![Vertex::ROOT];
        for m in 0..n {
            let mut next = Vec::new();
            for w in frontier {
                let kids: Vec<Vertex> = ball
                    .descendant_range(w, m + 1)
                    .map(|index| Vertex { level: m + 1, index })
                    .collect();
                match self.restrictions.get(&m) {
                    Some(Restriction::SingleChild) => {
                        next.push(*kids.choose(rng).expect("nonempty"));
                    }
                    _ => {
                        let kept: Vec<Vertex> =
                            kids.iter().copied().filter(|_| rng.gen_bool(self.keep)).collect();
                        if kept.is_empty() {
                            next.push(*kids.choose(rng).expect("nonempty"));
                        } else {
                            next.extend(kept);
                        }
                    }
                }
            }
            frontier = next;
        }
        // Caps, deepest designated level first.
        for (&m, restriction) in self.restrictions.iter().rev() {
            if let Restriction::Cap(c) = *restriction {
                let mut groups: BTreeMap<u64, Vec<Vertex>> = BTreeMap::new();
                for v in frontier {
                    groups.entry(ball.ancestor(v, m).index).or_default().push(v);
                }
                frontier = groups
                    .into_values()
                    .flat_map(|mut g| {
                        g.shuffle(rng);
                        g.truncate(c);
                        g
                    })
                    .collect();
            }
        }
        VertexSet::from_vertices(ball, frontier)
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::VecDeque;

    fn ball(q: u64, n: u32) -> TreeBall {
        TreeBall::new(q, n).unwrap()
    }

    /// Explicit adjacency built from code strings only.
    fn bfs_distances(b: &TreeBall, from: &str) -> HashMap<String, u32> {
        let q = b.q();
        let neighbours = |c: &str| -> Vec<String> {
            let mut out = vec![];
            if !c.is_empty() {
                out.push(c[..c.len() - 1].to_string());
            }
            if c.len() < b.depth() as usize {
                let letters: Vec<u64> = if c.is_empty() { (0..=q).collect() } else { (1..=q).collect() };
                out.extend(letters.into_iter().map(|l| format!("{c}{l}")));
            }
            out
        };
        let mut dist = HashMap::new();
        dist.insert(from.to_string(), 0);
        let mut queue = VecDeque::from([from.to_string()]);
        while let Some(c) = queue.pop_front() {
            let d = dist[&c];
            for nb in neighbours(&c) {
                if !dist.contains_key(&nb) {
                    dist.insert(nb.clone(), d + 1);
                    queue.push_back(nb);
                }
            }
        }
        dist
    }

    #[test]
    fn codes_round_trip() {
        let b = ball(3, 5);
        for n in 0..=5 {
            for v in b.sphere(n) {
                assert_eq!(b.parse(&b.code(v)).unwrap(), v);
            }
        }
        assert!(b.parse("40").is_err());
        assert!(b.parse("10").is_err());
        assert!(b.parse("123123").is_err());
        assert!(b.parse("1a").is_err());
    }

    #[test]
    fn distance_basics() {
        let b = ball(2, 6);
        assert_eq!(b.distance_codes("", "").unwrap(), 0);
        assert_eq!(b.distance_codes("0", "1").unwrap(), 2);
        assert_eq!(b.distance_codes("0121", "0121").unwrap(), 0);
        assert_eq!(b.distance_codes("012", "0").unwrap(), 2);
        assert!(b.distance_codes("3", "0").is_err());
    }

    #[test]
    fn distance_matches_bfs() {
        let b = ball(2, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let random_vertex = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(0..=8);
            Vertex { level: n, index: rng.gen_range(0..b.sphere_size(n)) }
        };
        let mut cache: HashMap<String, HashMap<String, u32>> = HashMap::new();
        for _ in 0..1000 {
            let x = random_vertex(&mut rng);
            let y = random_vertex(&mut rng);
            let xc = b.code(x);
            let d = cache.entry(xc.clone()).or_insert_with(|| bfs_distances(&b, &xc));
            assert_eq!(b.distance(x, y), d[&b.code(y)], "{xc} {}", b.code(y));
        }
    }

    #[test]
    fn children_counts() {
        let b = ball(3, 6);
        let v = b.parse("12").unwrap();
        assert_eq!(b.children(v, 0).unwrap(), vec![v]);
        assert_eq!(b.children(Vertex::ROOT, 1).unwrap().len(), 4);
        assert_eq!(b.children(v, 4).unwrap().len(), 81);
        assert!(b.children(v, 5).is_err());
    }

    #[test]
    fn atom_partitions() {
        let b = ball(2, 8);
        let singletons = b.atoms(5, 0).unwrap();
        assert_eq!(singletons.len(), b.sphere_size(5) as usize);
        assert!((0..singletons.len()).all(|i| singletons.atom_size(i) == 1));
        let whole = b.atoms(4, 4).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole.atom_size(0), b.sphere_size(4));
        let a = b.atoms(6, 3).unwrap();
        assert_eq!(a.len(), 12);
        assert!((0..a.len()).all(|i| a.atom_size(i) == 8));
        assert!(b.atoms(3, 4).is_err());
    }

    #[test]
    fn atoms_partition_every_sphere() {
        let b = ball(3, 6);
        for n in 1..=6 {
            for t in 1..=n {
                let a = b.atoms(n, t).unwrap();
                let mut all: Vec<Vertex> = (0..a.len()).flat_map(|i| a.members(i)).collect();
                let total = all.len();
                all.sort();
                all.dedup();
                assert_eq!(all.len(), total);
                assert_eq!(total as u64, b.sphere_size(n));
            }
        }
    }

    #[test]
    fn density_examples() {
        let b = ball(3, 7);
        let all = upper_density(&VertexSet::full(b));
        assert!(all.a.iter().all(|a| *a == frac(1, 1)));
        let branch = upper_density(&VertexSet::branch(b, 2));
        assert!(branch.a[1..].iter().all(|a| *a == frac(1, 4)));
        assert_eq!(branch.estimate, frac(1, 4));
        let empty = upper_density(&VertexSet::empty(b));
        assert_eq!(empty.estimate, frac(0, 1));
        assert!(branch.to_csv().starts_with("n,a_n,b_n\n0,0,1/4\n1,1/4,1/4"));
    }

    #[test]
    fn equidistant_examples() {
        let b = ball(2, 6);
        let full = VertexSet::full_sphere(b, 5);
        for t in 1..=5 {
            let (x, y) = equidistant_pair_exists(&full, t).unwrap();
            assert_eq!(b.distance(x, y), 2 * t);
            assert_eq!(x.level, y.level);
        }
        // codes made of 1s only: one vertex per level
        let ones = VertexSet::from_vertices(
            b,
            (1..=6).map(|n| b.parse(&"1".repeat(n)).unwrap()),
        )
        .unwrap();
        for t in 1..=6 {
            assert!(equidistant_pair_exists(&ones, t).is_none());
        }
    }

    #[test]
    fn type_ab() {
        let b = ball(2, 6);
        let v = b.parse("01").unwrap();
        assert_eq!(classify_type_ab(&VertexSet::empty(b), v, 3, 1).unwrap(), VertexType::B);
        let mut x = VertexSet::empty(b);
        for y in b.children(v, 3).unwrap() {
            x.insert(y).unwrap();
        }
        assert_eq!(classify_type_ab(&x, v, 3, 4).unwrap(), VertexType::A);
        assert_eq!(classify_type_ab(&x, v, 3, 5).unwrap(), VertexType::B);
        assert!(classify_type_ab(&x, v, 5, 1).is_err());
    }

    #[test]
    fn claim1_half_construction() {
        let b = ball(2, 8);
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = AdversarialConfig {
            n,
            restrictions: BTreeMap::from([(n - 2, Restriction::SingleChild)]),
            keep: 1.0,
        };
        let x = cfg.generate(b, &mut rng).unwrap();
        // one child per level-6 vertex, subtree filled
        assert_eq!(x.level(n).len() as u64, b.sphere_size(n) / 2);
        let v = b.parse("0121").unwrap();
        assert_eq!(verify_claim1(&x, 2, v, 4, n).unwrap(), frac(1, 2));
        assert_eq!(verify_claim1(&VertexSet::empty(b), 2, v, 4, n).unwrap(), frac(0, 1));
        let full = VertexSet::full_sphere(b, n);
        assert!(matches!(
            verify_claim1(&full, 2, v, 4, n),
            Err(Error::HypothesisFails(_))
        ));
    }

    #[test]
    fn lemma2_guards() {
        let b = ball(2, 10);
        let c1 = StarSpec::new(vec![2], vec![1]).unwrap();
        let c2 = StarSpec::new(vec![4], vec![1]).unwrap();
        let rep = verify_lemma2_bound(&VertexSet::empty(b), &[c1.clone(), c2.clone()], 9).unwrap();
        assert_eq!(rep.pass(), Some(true));
        assert_eq!(rep.rhs, frac(1, 4) + frac(1, 2));
        let full = VertexSet::full_sphere(b, 9);
        let rep = verify_lemma2_bound(&full, &[c1.clone(), c2.clone()], 9).unwrap();
        assert!(matches!(rep.hypothesis, Hypothesis::Fails(_)));
        assert_eq!(rep.pass(), None);
        assert!(verify_lemma2_bound(&full, &[c2, c1], 9).is_err());
    }

    #[test]
    fn star_examples() {
        let b = ball(2, 5);
        let spec = StarSpec::new(vec![2, 3], vec![1, 1]).unwrap();
        let full = VertexSet::full_sphere(b, 5);
        let star = find_balanced_star(&full, &spec).unwrap();
        star.verify(&b, &full, &spec).unwrap();
        let single = VertexSet::from_vertices(b, [b.parse("01").unwrap()]).unwrap();
        assert!(find_balanced_star(&single, &spec).is_none());
        let greedy = StarSpec::new(vec![1], vec![100]).unwrap();
        assert!(find_balanced_star(&full, &greedy).is_none());
        assert!(StarSpec::new(vec![3, 2], vec![1, 1]).is_err());
        assert!(StarSpec::new(vec![1], vec![0]).is_err());
    }

    #[test]
    fn five_vertex_weighted_tree() {
        let b = ball(2, 12);
        let x = VertexSet::full_sphere(b, 12);
        let tree = WeightedTree::new(vec![0, 0, 1, 1], vec![2, 3, 5, 6]).unwrap();
        let emb = embed_weighted_tree(&x, &tree).unwrap().unwrap();
        let checks = emb.distance_checks(&b, &tree);
        assert_eq!(checks.len(), 8);
        assert!(checks.iter().all(|&(_, _, want, got)| want == got));
        let v = &emb.vertices;
        assert_eq!(b.distance(v[0], v[1]), 4);
        assert_eq!(b.distance(v[0], v[2]), 6);
        assert_eq!(b.distance(v[1], v[3]), 10);
        assert_eq!(b.distance(v[1], v[4]), 12);
        assert_eq!(b.distance(v[0], v[3]), 10);
        assert_eq!(b.distance(v[0], v[4]), 12);
    }

    #[test]
    fn weighted_tree_validation() {
        let bad = WeightedTree::new(vec![0, 0, 1], vec![3, 2, 2]).unwrap();
        assert!(!bad.is_well_ordered().unwrap());
        let x = VertexSet::full_sphere(ball(2, 8), 8);
        assert!(embed_weighted_tree(&x, &bad).is_err());
        assert!(WeightedTree::new(vec![2, 1], vec![1, 2]).is_err());
        let edge = WeightedTree::new(vec![0], vec![4]).unwrap();
        assert_eq!(edge.star_spec().unwrap(), StarSpec::new(vec![4], vec![1]).unwrap());
        let path = WeightedTree::new(vec![0, 1], vec![2, 3]).unwrap();
        let x12 = VertexSet::full_sphere(ball(2, 12), 12);
        let emb = embed_weighted_tree(&x12, &path).unwrap().unwrap();
        let b = ball(2, 12);
        assert_eq!(b.distance(emb.vertices[0], emb.vertices[1]), 4);
        assert_eq!(b.distance(emb.vertices[0], emb.vertices[2]), 6);
        assert_eq!(b.distance(emb.vertices[1], emb.vertices[2]), 6);
    }

    #[test]
    fn derived_set_examples() {
        let b = ball(2, 8);
        let x = VertexSet::from_vertices(b, [b.parse("011").unwrap(), b.parse("12").unwrap()]).unwrap();
        assert_eq!(derived_set(&x, 0), x);
        assert_eq!(b.distance_codes("011", "12").unwrap(), 5);
        assert_eq!(derived_set(&x, 5), x);
        assert!(derived_set(&x, 4).is_empty());
    }

    #[test]
    fn rank_one_double_distance() {
        let b = ball(2, 6);
        for z in (0..=6).flat_map(|n| b.sphere(n)) {
            for k1 in 1..=(6 - z.level) {
                let kids = b.children(z, 1).unwrap();
                for (i, &c1) in kids.iter().enumerate() {
                    for &c2 in &kids[i + 1..] {
                        for x1 in b.children(c1, k1 - 1).unwrap() {
                            for k2 in 1..=(6 - z.level) {
                                for x2 in b.children(c2, k2 - 1).unwrap().into_iter().take(3) {
                                    assert_eq!(
                                        b.distance(x1, x2),
                                        b.distance(x1, z) + b.distance(z, x2)
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let b = ball(3, 4);
        let x = VertexSet::from_vertices(b, [Vertex::ROOT, b.parse("31").unwrap()]).unwrap();
        let j = serde_json::to_string(&x.to_json()).unwrap();
        assert_eq!(j, r#"{"q":3,"depth":4,"levels":{"0":[""],"2":["31"]}}"#);
        let back: VertexSetJson = serde_json::from_str(&j).unwrap();
        assert_eq!(VertexSet::from_json(&back).unwrap(), x);
        let wrong = VertexSetJson {
            q: 3,
            depth: 4,
            levels: BTreeMap::from([("1".to_string(), vec!["31".to_string()])]),
        };
        assert!(VertexSet::from_json(&wrong).is_err());
    }

    #[test]
    fn full_spheres_realize_all_even_distances() {
        let b = ball(2, 9);
        let mut x = VertexSet::empty(b);
        for n in 4..=9 {
            for v in b.sphere(n) {
                x.insert(v).unwrap();
            }
        }
        for t in 1..=5 {
            assert!(equidistant_pair_exists(&x, t).is_some(), "t={t}");
        }
    }
}
