//! Flag complexes of two generalized polygons over the field with two
//! elements: the Fano plane (type `A2`) and the duad–syntheme quadrangle
//! `GQ(2,2)` (type `C2`). Chambers are incident point–line flags; `~_0`
//! changes the point (generator `s_1`) and `~_1` changes the line
//! (generator `s_2`).

use serde::Serialize;
use serde_json::{json, Value};

use crate::root_system::{RootDatum, WeylElement};
use crate::{Error, Result};

pub const THICKNESS_Q: u64 = 2;

#[derive(Debug, Clone)]
pub struct FlagComplex {
    name: &'static str,
    datum: RootDatum,
    points: Vec<String>,
    lines: Vec<String>,
    chambers: Vec<(usize, usize)>,
    /// `neighbours[i][c]`: chambers `i`-adjacent to `c`, excluding `c`.
    neighbours: [Vec<Vec<usize>>; 2],
    dist: Vec<Vec<usize>>,
    delta: Vec<Vec<WeylElement>>,
}

impl FlagComplex {
    fn from_incidence(
        name: &'static str,
        label: &str,
        points: Vec<String>,
        lines: Vec<String>,
        incident: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let datum = RootDatum::from_label(label)?;
        let mut chambers = vec![];
        for p in 0..points.len() {
            for l in 0..lines.len() {
                if incident(p, l) {
                    chambers.push((p, l));
                }
            }
        }
        let nc = chambers.len();
        let mut neighbours = [vec![vec![]; nc], vec![vec![]; nc]];
        for (a, &(pa, la)) in chambers.iter().enumerate() {
            for (b, &(pb, lb)) in chambers.iter().enumerate() {
                if a != b && la == lb {
                    neighbours[0][a].push(b);
                }
                if a != b && pa == pb {
                    neighbours[1][a].push(b);
                }
            }
        }
        let mut fc = FlagComplex {
            name,
            datum,
            points,
            lines,
            chambers,
            neighbours,
            dist: vec![],
            delta: vec![],
        };
        let mut dist = Vec::with_capacity(nc);
        let mut delta = Vec::with_capacity(nc);
        for c in 0..nc {
            let (d, w) = fc.gallery_bfs(c)?;
            dist.push(d);
            delta.push(w);
        }
        fc.dist = dist;
        fc.delta = delta;
        Ok(fc)
    }

    /// Typed-gallery BFS from `c`. Every minimal-gallery predecessor of a
    /// chamber must induce the same Weyl element, otherwise the gallery
    /// axioms fail and an error is returned.
    fn gallery_bfs(&self, c: usize) -> Result<(Vec<usize>, Vec<WeylElement>)> {
        let nc = self.chambers.len();
        let rank = self.datum.rank();
        let mut dist = vec![usize::MAX; nc];
        let mut delta: Vec<Option<WeylElement>> = vec![None; nc];
        dist[c] = 0;
        delta[c] = Some(WeylElement::identity(rank));
        let mut frontier = vec![c];
        let mut depth = 0;
        while !frontier.is_empty() {
            let mut next = vec![];
            for &a in &frontier {
                for i in 0..2 {
                    for &b in &self.neighbours[i][a] {
                        if dist[b] == usize::MAX {
                            dist[b] = depth + 1;
                            next.push(b);
                        }
                        if dist[b] != depth + 1 {
                            continue;
                        }
                        let from = delta[a].as_ref().expect("set at previous depth");
                        let mut word = from.word.clone();
                        word.push(i + 1);
                        let cand = WeylElement {
                            word,
                            matrix: &from.matrix * &self.datum.simple_reflection(i + 1),
                        };
                        match &delta[b] {
                            None => delta[b] = Some(cand),
                            Some(w) if w.same_as(&cand) => {}
                            Some(w) => {
                                return Err(Error::Consistency(format!(
                                    "{}: minimal galleries from chamber {c} to {b} spell {w} and {cand}",
                                    self.name
                                )))
                            }
                        }
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        if dist.contains(&usize::MAX) {
            return Err(Error::Consistency(format!("{}: chamber graph is disconnected", self.name)));
        }
        Ok((dist, delta.into_iter().map(Option::unwrap).collect()))
    }

    pub fn name(&self) -> &str {
        self.name
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn q(&self) -> u64 {
        THICKNESS_Q
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_chambers(&self) -> usize {
        self.chambers.len()
    }

    pub fn chamber(&self, c: usize) -> (usize, usize) {
        self.chambers[c]
    }

    /// Chambers `i`-adjacent to `c` (`i ∈ {0, 1}`), excluding `c`.
    pub fn neighbours(&self, i: usize, c: usize) -> &[usize] {
        &self.neighbours[i][c]
    }

    /// Chambers in each panel: `q + 1` when the complex is thick.
    pub fn panel_sizes(&self) -> Vec<usize> {
        (0..2)
            .flat_map(|i| self.neighbours[i].iter().map(|n| n.len() + 1))
            .collect()
    }

    pub fn dist(&self, c: usize, d: usize) -> usize {
        self.dist[c][d]
    }

    pub fn diameter(&self) -> usize {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn weyl_distance(&self, c: usize, d: usize) -> &WeylElement {
        &self.delta[c][d]
    }

    pub fn longest_length(&self) -> usize {
        self.datum.num_positive_roots()
    }

    pub fn is_opposite(&self, c: usize, d: usize) -> bool {
        self.dist[c][d] == self.longest_length()
    }

    pub fn opposite_count(&self, c: usize) -> usize {
        let w0 = self.datum.longest_element();
        (0..self.num_chambers())
            .filter(|&d| self.delta[c][d].same_as(&w0))
            .count()
    }

    /// `|{ c : dist(c_1, c) = dist(c_2, c) = ℓ(w_0) }|` for opposite `c_1, c_2`.
    pub fn double_opposite_count(&self, c1: usize, c2: usize) -> Result<usize> {
        if !self.is_opposite(c1, c2) {
            return Err(Error::input(
                "pair",
                format!("chambers {c1} and {c2} are not opposite"),
            ));
        }
        Ok((0..self.num_chambers())
            .filter(|&c| self.is_opposite(c1, c) && self.is_opposite(c2, c))
            .count())
    }

    /// Chambers of the `i`-panel of `c` at distance `ℓ(w_0) − 1` from `d`.
    pub fn projections(&self, i: usize, c: usize, d: usize) -> Vec<usize> {
        let target = self.longest_length() - 1;
        std::iter::once(c)
            .chain(self.neighbours[i][c].iter().copied())
            .filter(|&e| self.dist[d][e] == target)
            .collect()
    }

    /// All minimal galleries from `c` to `d`, as generator words.
    pub fn minimal_gallery_words(&self, c: usize, d: usize) -> Vec<Vec<usize>> {
        if c == d {
            return vec![vec![]];
        }
        let mut out = vec![];
        for i in 0..2 {
            for &b in &self.neighbours[i][c] {
                if self.dist[b][d] + 1 == self.dist[c][d] {
                    for mut rest in self.minimal_gallery_words(b, d) {
                        rest.insert(0, i + 1);
                        out.push(rest);
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "type": self.datum.label().to_string(),
            "q": THICKNESS_Q,
            "points": self.points,
            "lines": self.lines,
            "chambers": self.chambers.iter().map(|&(p, l)| vec![p, l]).collect::<Vec<_>>(),
        })
    }
}

/// Points are the nonzero vectors of `F_2^3`, lines the 2-dimensional
/// subspaces (given by their normal vectors).
pub fn build_fano() -> Result<FlagComplex> {
    let labels: Vec<String> = (1u8..8).map(|v| format!("{v:03b}")).collect();
    FlagComplex::from_incidence("fano", "A2", labels.clone(), labels, |p, l| {
        (((p + 1) & (l + 1)) as u8).count_ones() % 2 == 0
    })
}

/// Points are the 15 duads of `{1,…,6}`, lines the 15 synthemes.
pub fn build_gq22() -> Result<FlagComplex> {
    let mut duads = vec![];
    for a in 0..6usize {
        for b in a + 1..6 {
            duads.push((a, b));
        }
    }
    let mut synthemes: Vec<[(usize, usize); 3]> = vec![];
    for &(a, b) in &duads {
        if a != 0 {
            continue;
        }
        let rest: Vec<usize> = (1..6).filter(|&x| x != b).collect();
        for &(c, d, e, f) in &[
            (rest[0], rest[1], rest[2], rest[3]),
            (rest[0], rest[2], rest[1], rest[3]),
            (rest[0], rest[3], rest[1], rest[2]),
        ] {
            synthemes.push([(a, b), (c, d), (e, f)]);
        }
    }
    let duad_label = |&(a, b): &(usize, usize)| format!("{}{}", a + 1, b + 1);
    let points = duads.iter().map(duad_label).collect();
    let lines = synthemes
        .iter()
        .map(|s| s.iter().map(duad_label).collect::<Vec<_>>().join("|"))
        .collect();
    FlagComplex::from_incidence("gq22", "C2", points, lines, |p, l| {
        synthemes[l].contains(&duads[p])
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCount {
    pub c1: usize,
    pub c2: usize,
    pub count: usize,
}

/// Exhaustive opposition and projection counts for one complex.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseReport {
    pub complex: String,
    #[serde(rename = "type")]
    pub type_label: String,
    pub q: u64,
    pub chambers: usize,
    pub ell_w0: usize,
    pub diameter: usize,
    pub thickness_ok: bool,
    pub opposite_counts: Vec<usize>,
    pub expected_opposites: u64,
    pub opposite_pairs: usize,
    pub min_double_opposite: usize,
    pub max_double_opposite: usize,
    pub lower_bound: u64,
    pub projections_unique: bool,
    #[serde(skip)]
    pub per_pair: Vec<PairCount>,
}

impl NoiseReport {
    pub fn passes(&self) -> bool {
        self.thickness_ok
            && self.diameter == self.ell_w0
            && self
                .opposite_counts
                .iter()
                .all(|&c| c as u64 == self.expected_opposites)
            && self.min_double_opposite as u64 >= self.lower_bound
            && self.projections_unique
    }

    pub fn per_pair_csv(&self) -> String {
        let mut out = String::from("c1,c2,count\n");
        for p in &self.per_pair {
            out.push_str(&format!("{},{},{}\n", p.c1, p.c2, p.count));
        }
        out
    }
}

pub fn noise_check(fc: &FlagComplex) -> NoiseReport {
    let n = fc.num_chambers();
    let ell = fc.longest_length();
    let q = fc.q();
    let mut per_pair = vec![];
    let mut projections_unique = true;
    for c1 in 0..n {
        for c2 in 0..n {
            if !fc.is_opposite(c1, c2) {
                continue;
            }
            let count = fc.double_opposite_count(c1, c2).expect("opposite");
            per_pair.push(PairCount { c1, c2, count });
            projections_unique &= (0..2).all(|i| fc.projections(i, c1, c2).len() == 1);
        }
    }
    NoiseReport {
        complex: fc.name().to_string(),
        type_label: fc.datum().label().to_string(),
        q,
        chambers: n,
        ell_w0: ell,
        diameter: fc.diameter(),
        thickness_ok: fc.panel_sizes().iter().all(|&s| s as u64 == q + 1),
        opposite_counts: (0..n).map(|c| fc.opposite_count(c)).collect(),
        expected_opposites: q.pow(ell as u32),
        opposite_pairs: per_pair.len(),
        min_double_opposite: per_pair.iter().map(|p| p.count).min().unwrap_or(0),
        max_double_opposite: per_pair.iter().map(|p| p.count).max().unwrap_or(0),
        lower_bound: (q - 1).pow(ell as u32),
        projections_unique,
        per_pair,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes() {
        let f = build_fano().unwrap();
        assert_eq!((f.num_points(), f.num_lines(), f.num_chambers()), (7, 7, 21));
        assert_eq!(f.diameter(), 3);
        let g = build_gq22().unwrap();
        assert_eq!((g.num_points(), g.num_lines(), g.num_chambers()), (15, 15, 45));
        assert_eq!(g.diameter(), 4);
    }

    #[test]
    fn thickness() {
        for fc in [build_fano().unwrap(), build_gq22().unwrap()] {
            assert!(fc.panel_sizes().iter().all(|&s| s == 3));
            for c in 0..fc.num_chambers() {
                assert_eq!(fc.neighbours(0, c).len(), 2);
                assert_eq!(fc.neighbours(1, c).len(), 2);
            }
        }
    }

    #[test]
    fn weyl_distance_basics() {
        let f = build_fano().unwrap();
        for c in 0..21 {
            assert_eq!(f.weyl_distance(c, c).length(), 0);
            for i in 0..2 {
                for &d in f.neighbours(i, c) {
                    assert_eq!(f.weyl_distance(c, d).word, vec![i + 1]);
                }
            }
        }
        let w0 = f.datum().longest_element();
        for c in 0..21 {
            for d in 0..21 {
                let (pc, lc) = f.chamber(c);
                let (pd, ld) = f.chamber(d);
                let disjoint = pc != pd && lc != ld && {
                    // the point of neither flag lies on the other's line
                    let on = |p: usize, l: usize| (((p + 1) & (l + 1)) as u8).count_ones() % 2 == 0;
                    !on(pc, ld) && !on(pd, lc)
                };
                if disjoint {
                    assert!(f.weyl_distance(c, d).same_as(&w0));
                    assert_eq!(f.dist(c, d), 3);
                }
                let w = f.weyl_distance(c, d);
                assert_eq!(w.inversion_count(f.datum()), f.dist(c, d));
            }
        }
    }

    #[test]
    fn opposites() {
        let f = build_fano().unwrap();
        let g = build_gq22().unwrap();
        assert!((0..21).all(|c| f.opposite_count(c) == 8));
        assert!((0..45).all(|c| g.opposite_count(c) == 16));
        let id = WeylElement::identity(2);
        assert_eq!((0..45).filter(|&d| g.weyl_distance(3, d).same_as(&id)).count(), 1);
        assert!(f.double_opposite_count(0, 0).is_err());
    }

    #[test]
    fn noise_reports() {
        for fc in [build_fano().unwrap(), build_gq22().unwrap()] {
            let rep = noise_check(&fc);
            assert!(rep.passes(), "{}", fc.name());
            assert!(rep.min_double_opposite >= 1);
            assert_eq!(rep.opposite_pairs, fc.num_chambers() * rep.expected_opposites as usize);
        }
    }

    #[test]
    fn gallery_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for fc in [build_fano().unwrap(), build_gq22().unwrap()] {
            let n = fc.num_chambers();
            for _ in 0..200 {
                let c = rng.gen_range(0..n);
                let d = rng.gen_range(0..n);
                let words = fc.minimal_gallery_words(c, d);
                assert!(!words.is_empty());
                for w in words {
                    assert_eq!(w.len(), fc.dist(c, d));
                    assert!(fc.datum().element_from_word(&w).same_as(fc.weyl_distance(c, d)));
                }
            }
        }
    }

    #[test]
    fn json_export() {
        let g = build_gq22().unwrap();
        let j = g.to_json();
        assert_eq!(j["chambers"].as_array().unwrap().len(), 45);
        assert_eq!(j["type"], "C2");
    }
}
