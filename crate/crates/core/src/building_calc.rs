//! Counting formulas for thick affine buildings of uniform thickness `q`:
//! atom sizes, the noise constant `κ`, the star-free density bound, star
//! specifications over strongly dominant coweights and the coroot-lattice
//! witness for type `A_n`.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::rational::{self, int, qpow, Rational};
use crate::root_system::{type_a_class, Coweight, Family, RootDatum, TypeLabel};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl CrossCheck {
    fn new(name: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        CrossCheck {
            name: name.into(),
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

/// `|O(x)| = q^{ℓ(w_0)}` and `|C(x, c, λ)| = q^{h(λ) − ℓ(w_0)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomCounts {
    pub ell_w0: usize,
    pub h: u64,
    /// `ℓ(w_0)`: exponent of `q` in `|O(x)|`.
    pub opposite_exponent: u64,
    /// `h(λ) − ℓ(w_0)`: exponent of `q` in `|C(x, c, λ)|`.
    pub atom_exponent: u64,
    #[serde(rename = "O", serialize_with = "crate::json::big_uint")]
    pub opposite: BigUint,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub atom: BigUint,
    pub cross_checks: Vec<CrossCheck>,
}

fn check_strongly_dominant(datum: &RootDatum, lambda: &Coweight, field: &str) -> Result<()> {
    datum.check_rank(lambda)?;
    if !lambda.is_strongly_dominant() {
        return Err(Error::input(field, format!("{lambda} is not strongly dominant")));
    }
    Ok(())
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::input("q", "thickness q must be at least 2"));
    }
    Ok(())
}

fn big_pow(q: u64, e: u64) -> BigUint {
    Pow::pow(BigUint::from(q), e)
}

/// Atom sizes for `λ ∈ P^{++}`, cross-checked against sphere sizes with
/// `μ = ρ`.
pub fn atom_cardinalities(datum: &RootDatum, q: u64, lambda: &Coweight) -> Result<AtomCounts> {
    check_q(q)?;
    check_strongly_dominant(datum, lambda, "lambda")?;
    let ell = datum.num_positive_roots();
    let h = datum.height_two_rho(lambda)?;
    let rho = Coweight::rho(datum.rank());
    let mut cross_checks = vec![partition_check(datum, q, lambda, &rho)?];
    cross_checks.push(CrossCheck::new(
        "longest element length",
        datum.longest_element().length(),
        ell,
    ));
    cross_checks.push(CrossCheck::new(
        "h(λ) by coroot pairings",
        datum.hyperplane_count(lambda),
        h,
    ));
    Ok(AtomCounts {
        ell_w0: ell,
        h,
        opposite_exponent: ell as u64,
        atom_exponent: h - ell as u64,
        opposite: big_pow(q, ell as u64),
        atom: big_pow(q, h - ell as u64),
        cross_checks,
    })
}

/// `|A_{ν,λ}| · |C(x,c,λ)| = |S_ν|` for `ν = λ + μ`, with
/// `|A_{ν,λ}| = |S_μ| q^{ℓ(w_0)}`.
pub fn partition_check(datum: &RootDatum, q: u64, lambda: &Coweight, mu: &Coweight) -> Result<CrossCheck> {
    check_strongly_dominant(datum, lambda, "lambda")?;
    check_strongly_dominant(datum, mu, "mu")?;
    let ell = datum.num_positive_roots() as u64;
    let h = datum.height_two_rho(lambda)?;
    let atoms = datum.sphere_size(mu, q)? * big_pow(q, ell);
    let lhs = atoms * big_pow(q, h - ell);
    let nu = lambda.clone() + mu.clone();
    Ok(CrossCheck::new(
        format!("|A|·|C| = |S_ν| for λ={lambda}, μ={mu}"),
        lhs,
        datum.sphere_size(&nu, q)?,
    ))
}

/// `|S_λ| = |S_μ| q^{h(λ − μ)}` for `μ ∈ P^{++}` and `μ ≤ λ`.
pub fn sphere_ratio_check(datum: &RootDatum, q: u64, mu: &Coweight, lambda: &Coweight) -> Result<CrossCheck> {
    check_strongly_dominant(datum, mu, "mu")?;
    datum.check_rank(lambda)?;
    if !mu.le(lambda) {
        return Err(Error::input("lambda", format!("need μ ≤ λ, got μ={mu}, λ={lambda}")));
    }
    let diff = lambda.clone() - mu.clone();
    let rhs = datum.sphere_size(mu, q)? * big_pow(q, datum.height_two_rho(&diff)?);
    Ok(CrossCheck::new(
        format!("|S_λ| = |S_μ| q^h(λ−μ) for λ={lambda}, μ={mu}"),
        datum.sphere_size(lambda, q)?,
        rhs,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kappa {
    #[serde(serialize_with = "crate::json::ratio")]
    pub kappa: Rational,
    /// `κ q^{ℓ(w_0)} = (q − 1)^{ℓ(w_0)}`, the guaranteed double-opposite count.
    #[serde(serialize_with = "crate::json::big_uint")]
    pub lower_bound: BigUint,
    /// `(1 − κ) q^{ℓ(w_0)} = q^{ℓ(w_0)} − (q − 1)^{ℓ(w_0)}`, the type-A chamber threshold.
    #[serde(serialize_with = "crate::json::big_uint")]
    pub threshold: BigUint,
}

/// `κ = (1 − q^{-1})^{ℓ(w_0)}`.
pub fn kappa(datum: &RootDatum, q: u64) -> Result<Kappa> {
    check_q(q)?;
    kappa_nonuniform(datum, &vec![q; datum.rank()])
}

/// `κ` for a thickness `q_i` per generator: the product of `1 − q_i^{-1}`
/// along a reduced word for `w_0`.
pub fn kappa_nonuniform(datum: &RootDatum, qs: &[u64]) -> Result<Kappa> {
    if qs.len() != datum.rank() {
        return Err(Error::input(
            "q",
            format!("expected {} thickness values, got {}", datum.rank(), qs.len()),
        ));
    }
    if qs.iter().any(|&q| q < 2) {
        return Err(Error::input("q", "every thickness must be at least 2"));
    }
    let word = datum.longest_element().word;
    let mut kappa = int(1);
    let mut full = BigUint::one();
    let mut lower = BigUint::one();
    for &i in &word {
        let q = qs[i - 1];
        kappa *= int(1) - qpow(q, -1);
        full *= q;
        lower *= q - 1;
    }
    Ok(Kappa {
        kappa,
        threshold: &full - &lower,
        lower_bound: lower,
    })
}

/// `(1 − κ)^ℓ + r q^{ℓ(w_0) − h(λ_{1,1})}`.
pub fn density_bound_rhs(datum: &RootDatum, q: u64, ell: u32, r: u64, lambda11: &Coweight) -> Result<Rational> {
    check_q(q)?;
    check_strongly_dominant(datum, lambda11, "lambda")?;
    if ell < 1 {
        return Err(Error::input("ell", "need ℓ ≥ 1"));
    }
    if r < 1 {
        return Err(Error::input("r", "need r ≥ 1"));
    }
    let k = kappa(datum, q)?.kappa;
    let h = datum.height_two_rho(lambda11)? as i64;
    let lw0 = datum.num_positive_roots() as i64;
    Ok(rational::pow_i(&(int(1) - k), ell as i64) + int(r as i64) * qpow(q, lw0 - h))
}

/// `λ_1 ≪ ⋯ ≪ λ_k` in `P^+` with multiplicities `r_1, …, r_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildingStarSpec {
    pub lambdas: Vec<Coweight>,
    pub r: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecDiagnostics {
    pub valid: bool,
    pub minus_one_type: bool,
    /// `λ_i* = λ_i` for each `i`.
    pub self_dual: Vec<bool>,
    pub diagnostics: Vec<String>,
}

pub fn validate_building_star_spec(datum: &RootDatum, spec: &BuildingStarSpec) -> SpecDiagnostics {
    let mut diagnostics = vec![];
    let mut valid = true;
    if spec.lambdas.is_empty() {
        valid = false;
        diagnostics.push("need k ≥ 1".to_string());
    }
    if spec.lambdas.len() != spec.r.len() {
        valid = false;
        diagnostics.push(format!(
            "{} coweights but {} multiplicities",
            spec.lambdas.len(),
            spec.r.len()
        ));
    }
    let rank_ok = spec.lambdas.iter().all(|l| l.rank() == datum.rank());
    if !rank_ok {
        valid = false;
        diagnostics.push(format!("every λ_i needs {} coordinates", datum.rank()));
    }
    if rank_ok {
        let zero = Coweight::zero(datum.rank());
        let mut prev = &zero;
        for (i, l) in spec.lambdas.iter().enumerate() {
            if !prev.ll(l) {
                valid = false;
                diagnostics.push(format!("≪ fails at index {}", i + 1));
            }
            prev = l;
        }
    }
    for (i, &r) in spec.r.iter().enumerate() {
        if r < 1 {
            valid = false;
            diagnostics.push(format!("r_{} must be at least 1", i + 1));
        }
    }
    let minus_one_type = datum.is_minus_one_type();
    if !minus_one_type {
        diagnostics.push(format!(
            "datum {} is not of (−1)-type; balanced stars are not guaranteed",
            datum.label()
        ));
    }
    let self_dual = if rank_ok {
        spec.lambdas
            .iter()
            .map(|l| datum.star_involution(l) == *l)
            .collect()
    } else {
        vec![]
    };
    SpecDiagnostics {
        valid,
        minus_one_type,
        self_dual,
        diagnostics,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub two_lambda: Vec<i64>,
    pub in_coroot_lattice: bool,
    /// Class of `2λ` in `P/Q ≅ Z/(n+1)`.
    pub residue: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureWitness {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rows: Vec<WitnessRow>,
    pub all_outside: bool,
    /// `2ρ ∈ Q`, the control case.
    pub two_rho_in_q: bool,
}

/// `2(ω_1 + Nρ) ∉ Q` for `A_n`, `N = 0, …, N_max`.
pub fn conjecture_witness(n: usize, n_max: u64) -> Result<ConjectureWitness> {
    if n < 2 {
        return Err(Error::input("n", "need n ≥ 2"));
    }
    let datum = RootDatum::build(TypeLabel::new(Family::A, n)?)?;
    let rho = Coweight::rho(n);
    let rows: Vec<WitnessRow> = (0..=n_max)
        .map(|big_n| {
            let lambda = Coweight::omega(n, 1) + (big_n as i64) * rho.clone();
            let two = 2 * lambda;
            WitnessRow {
                big_n,
                in_coroot_lattice: datum.in_coroot_lattice(&two),
                residue: type_a_class(&two),
                two_lambda: two.0,
            }
        })
        .collect();
    Ok(ConjectureWitness {
        type_label: datum.label().to_string(),
        all_outside: rows.iter().all(|r| !r.in_coroot_lattice),
        two_rho_in_q: datum.in_coroot_lattice(&(2 * rho)),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::tree_lab;

    fn d(s: &str) -> RootDatum {
        RootDatum::from_label(s).unwrap()
    }

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    #[test]
    fn c2_figure_counts() {
        for q in [2u64, 3] {
            let a = atom_cardinalities(&d("C2"), q, &cw(&[2, 2])).unwrap();
            assert_eq!((a.ell_w0, a.h), (4, 14));
            assert_eq!((a.opposite_exponent, a.atom_exponent), (4, 10));
            assert_eq!(a.opposite, BigUint::from(q.pow(4)));
            assert_eq!(a.atom, BigUint::from(q.pow(10)));
            assert!(a.cross_checks.iter().all(|c| c.holds));
        }
    }

    #[test]
    fn rank_one_atoms_match_tree() {
        let b = tree_lab::TreeBall::new(3, 8).unwrap();
        for t in 1..=6u32 {
            let a = atom_cardinalities(&d("A1"), 3, &cw(&[t as i64])).unwrap();
            assert_eq!(a.opposite, BigUint::from(3u32));
            assert_eq!(a.atom, BigUint::from(3u64.pow(t - 1)));
            let y = b.parse("1").unwrap();
            assert_eq!(b.children(y, t - 1).unwrap().len() as u64, 3u64.pow(t - 1));
        }
        assert!(atom_cardinalities(&d("A1"), 2, &cw(&[0])).is_err());
        assert!(atom_cardinalities(&d("C2"), 2, &cw(&[1, 0])).is_err());
    }

    #[test]
    fn partition_totals() {
        let rho = Coweight::rho(2);
        let c = partition_check(&d("C2"), 2, &rho, &rho).unwrap();
        assert!(c.holds);
        assert_eq!(c.rhs, d("C2").sphere_size(&cw(&[2, 2]), 2).unwrap().to_string());
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(&d("A1"), 2).unwrap().kappa, frac(1, 2));
        let k = kappa(&d("C2"), 2).unwrap();
        assert_eq!(k.kappa, frac(1, 16));
        assert_eq!(k.lower_bound, BigUint::one());
        assert_eq!(k.threshold, BigUint::from(15u32));
        let k = kappa(&d("A2"), 3).unwrap();
        assert_eq!(k.kappa, frac(8, 27));
        assert_eq!(k.lower_bound, BigUint::from(8u32));
        let mixed = kappa_nonuniform(&d("C2"), &[2, 4]).unwrap();
        assert_eq!(mixed.kappa, frac(1, 2) * frac(1, 2) * frac(3, 4) * frac(3, 4));
        assert!(kappa_nonuniform(&d("C2"), &[2]).is_err());
    }

    #[test]
    fn bound_examples() {
        for q in [2u64, 3, 5] {
            for t in 1..6u32 {
                for ell in 1..4u32 {
                    let v = density_bound_rhs(&d("A1"), q, ell, 2, &cw(&[t as i64])).unwrap();
                    assert_eq!(v, tree_lab::lemma2_rhs(q, ell as usize, 2, t));
                }
            }
        }
        let v = density_bound_rhs(&d("C2"), 2, 4, 1, &cw(&[3, 3])).unwrap();
        assert_eq!(v, rational::pow_i(&frac(15, 16), 4) + qpow(2, 4 - 21));
        assert!(density_bound_rhs(&d("C2"), 2, 0, 1, &cw(&[1, 1])).is_err());
        assert!(density_bound_rhs(&d("C2"), 2, 1, 1, &cw(&[0, 1])).is_err());
    }

    #[test]
    fn bound_limit_in_ell() {
        let lam = cw(&[1, 1]);
        let tail = int(1) * qpow(2, 4 - 7);
        let v = density_bound_rhs(&d("C2"), 2, 400, 1, &lam).unwrap();
        let gap = v - &tail;
        assert!(gap > int(0) && gap < qpow(2, -10));
    }

    #[test]
    fn spec_validation() {
        let rho = Coweight::rho(2);
        let ok = validate_building_star_spec(
            &d("C2"),
            &BuildingStarSpec { lambdas: vec![rho.clone(), 3 * rho.clone()], r: vec![1, 1] },
        );
        assert!(ok.valid && ok.minus_one_type && ok.diagnostics.is_empty());
        assert_eq!(ok.self_dual, vec![true, true]);
        let bad = validate_building_star_spec(
            &d("C2"),
            &BuildingStarSpec { lambdas: vec![rho.clone(), rho.clone() + Coweight::omega(2, 1)], r: vec![1, 1] },
        );
        assert!(!bad.valid);
        assert_eq!(bad.diagnostics, vec!["≪ fails at index 2".to_string()]);
        let a2 = validate_building_star_spec(
            &d("A2"),
            &BuildingStarSpec { lambdas: vec![rho.clone(), cw(&[2, 3])], r: vec![1, 2] },
        );
        assert!(a2.valid && !a2.minus_one_type);
        assert_eq!(a2.self_dual, vec![true, false]);
        assert!(a2.diagnostics[0].contains("not of (−1)-type"));
    }

    #[test]
    fn witnesses() {
        let w = conjecture_witness(2, 0).unwrap();
        assert!(!w.rows[0].in_coroot_lattice);
        assert_eq!(w.rows[0].residue, 2);
        assert!(w.two_rho_in_q);
        let w3 = conjecture_witness(3, 20).unwrap();
        assert!(w3.all_outside);
        assert!(conjecture_witness(1, 3).is_err());
    }
}
