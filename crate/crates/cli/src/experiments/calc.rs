use building_ramsey::building_calc::{self, BuildingStarSpec, CrossCheck};
use building_ramsey::json::fraction_pair;
use building_ramsey::rational;
use building_ramsey::root_system::{Coweight, Family};
use building_ramsey::tree_lab;
use clap::{ArgMatches, Command};
use serde_json::json;

use super::{coweight, datum, list, opt, parse_or, raw, req, required};
use crate::{CliError, CliResult, Context, Experiment, Report};

fn check_rows(checks: &[CrossCheck]) -> Vec<Vec<String>> {
    checks
        .iter()
        .map(|c| vec![c.name.clone(), c.lhs.clone(), c.rhs.clone(), c.holds.to_string()])
        .collect()
}

pub struct Atoms;

impl Experiment for Atoms {
    fn name(&self) -> &'static str {
        "calc-atoms"
    }

    fn about(&self) -> &'static str {
        "|O(x)| = q^ℓ(w_0) and |C(x, c, λ)| = q^(h(λ) − ℓ(w_0)) for strongly dominant λ"
    }

    fn args(&self, cmd: Command) -> Command {
        cmd.arg(req("type", "Cartan type"))
            .arg(req("lambda", "Strongly dominant coweight, e.g. 2,2"))
            .arg(req("q", "Thickness"))
    }

    fn run(&self, m: &ArgMatches, _ctx: &Context) -> CliResult<Report> {
        let d = datum(m)?;
        let lambda = coweight(m, "lambda", &d)?;
        let q: u64 = required(m, "q")?;
        let a = building_calc::atom_cardinalities(&d, q, &lambda)?;
        let failed = a.cross_checks.iter().any(|c| !c.holds);
        let mut j = serde_json::to_value(&a).expect("serializable");
        j["type"] = json!(d.label().to_string());
        j["lambda"] = json!(lambda.0);
        j["q"] = json!(q);
        Ok(Report::new(j)
            .with_table(&["check", "lhs", "rhs", "holds"], check_rows(&a.cross_checks))
            .failed_if(failed))
    }
}

pub struct Bound;

impl Experiment for Bound {
    fn name(&self) -> &'static str {
        "calc-bound"
    }

    fn about(&self) -> &'static str {
        "Star-free density bound (1 − κ)^ℓ + r q^(ℓ(w_0) − h(λ_11)) with κ = (1 − 1/q)^ℓ(w_0)"
    }

    fn args(&self, cmd: Command) -> Command {
        cmd.arg(req("type", "Cartan type"))
            .arg(req("q", "Thickness"))
            .arg(req("lambda", "λ_11, strongly dominant"))
            .arg(opt("ell", "Number of chains ℓ (default 1)"))
            .arg(opt("r", "Largest multiplicity r (default 1)"))
            .arg(opt("qs", "Per-generator thickness q_1,...,q_n for a non-uniform κ"))
            .arg(opt("chain", "Star spec λ_1;λ_2;... to validate, each in the ω basis"))
    }

    fn run(&self, m: &ArgMatches, _ctx: &Context) -> CliResult<Report> {
        let d = datum(m)?;
        let q: u64 = required(m, "q")?;
        let lambda = coweight(m, "lambda", &d)?;
        let ell: u32 = parse_or(m, "ell", 1)?;
        let r: u64 = parse_or(m, "r", 1)?;
        let value = building_calc::density_bound_rhs(&d, q, ell, r, &lambda)?;
        let kappa = building_calc::kappa(&d, q)?;
        let mut checks = vec![];
        let label = d.label();
        if label.family == Family::A && label.rank == 1 {
            let tree = tree_lab::lemma2_rhs(q, ell as usize, r as usize, lambda.0[0] as u32);
            checks.push(CrossCheck {
                name: "tree bound q^-ℓ + r q^(1−t_11)".into(),
                lhs: rational::to_string(&value),
                rhs: rational::to_string(&tree),
                holds: value == tree,
            });
        }
        let full = rational::to_biguint(&rational::qpow(q, d.num_positive_roots() as i64)).expect("integer");
        let sum = &kappa.lower_bound + &kappa.threshold;
        checks.push(CrossCheck {
            name: "κ q^ℓ(w_0) + threshold = q^ℓ(w_0)".into(),
            lhs: sum.to_string(),
            rhs: full.to_string(),
            holds: sum == full,
        });
        let mut j = json!({
            "formula": "(1 - kappa)^ell + r * q^(ell(w0) - h(lambda_11))",
            "inputs": {
                "type": label.to_string(),
                "q": q,
                "ell": ell,
                "r": r,
                "lambda_11": lambda.0,
            },
            "value": rational::to_string(&value),
            "value_fraction": fraction_pair(&value),
            "value_f64": rational::to_f64(&value),
            "kappa": serde_json::to_value(&kappa).expect("serializable"),
        });
        if raw(m, "qs").is_some() {
            let qs: Vec<u64> = list(m, "qs")?;
            j["kappa_nonuniform"] =
                serde_json::to_value(building_calc::kappa_nonuniform(&d, &qs)?).expect("serializable");
        }
        if let Some(s) = raw(m, "chain") {
            let lambdas = s
                .split(';')
                .map(|c| Coweight::parse(c, d.rank()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| match e {
                    building_ramsey::Error::InvalidInput { reason, .. } => CliError::input("chain", reason),
                    other => other.into(),
                })?;
            let k = lambdas.len();
            let spec = BuildingStarSpec { lambdas, r: vec![r; k] };
            j["spec_check"] =
                serde_json::to_value(building_calc::validate_building_star_spec(&d, &spec)).expect("serializable");
        }
        let failed = checks.iter().any(|c| !c.holds);
        j["cross_checks"] = serde_json::to_value(&checks).expect("serializable");
        Ok(Report::new(j)
            .with_table(&["check", "lhs", "rhs", "holds"], check_rows(&checks))
            .failed_if(failed))
    }
}

pub struct ConjectureWitness;

impl Experiment for ConjectureWitness {
    fn name(&self) -> &'static str {
        "conjecture-witness"
    }

    fn about(&self) -> &'static str {
        "Check 2(ω_1 + Nρ) lies outside the coroot lattice of A_n"
    }

    fn args(&self, cmd: Command) -> Command {
        cmd.arg(req("n", "Rank n ≥ 2 of A_n"))
            .arg(opt("N-max", "Largest N (default 50)"))
    }

    fn run(&self, m: &ArgMatches, _ctx: &Context) -> CliResult<Report> {
        let n: usize = required(m, "n")?;
        let w = building_calc::conjecture_witness(n, parse_or(m, "N-max", 50)?)?;
        let rows = w
            .rows
            .iter()
            .map(|r| {
                let two: Vec<String> = r.two_lambda.iter().map(|x| x.to_string()).collect();
                vec![
                    r.big_n.to_string(),
                    two.join(" "),
                    r.in_coroot_lattice.to_string(),
                    r.residue.to_string(),
                ]
            })
            .collect();
        let failed = !w.all_outside;
        Ok(Report::new(serde_json::to_value(&w).expect("serializable"))
            .with_table(&["N", "two_lambda", "in_coroot_lattice", "residue"], rows)
            .failed_if(failed))
    }
}
