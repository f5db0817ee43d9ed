use building_ramsey::bohr_lab::{self, BohrSet, Counterexample, QuadraticIrrational};
use building_ramsey::rational::{self, frac, Rational};
use clap::{ArgMatches, Command};
use serde_json::json;

use super::{flag, opt, parse_or, ratio};
use crate::{CliResult, Context, Experiment};

fn common(cmd: Command) -> Command {
    cmd.arg(opt("epsilon", "ε in (0, 1/4), rational or decimal (default 1/10)"))
        .arg(opt("N", "Horizon N (default 100000)"))
        .arg(opt("theta", "Radicand d of θ = √d (default 2)"))
}

fn inputs(m: &ArgMatches) -> CliResult<(Rational, QuadraticIrrational, u64)> {
    let eps = ratio(m, "epsilon")?.unwrap_or_else(|| frac(1, 10));
    let theta = QuadraticIrrational::sqrt(parse_or(m, "theta", 2)?)?;
    Ok((eps, theta, parse_or(m, "N", 100_000)?))
}

pub struct Report;

impl Experiment for Report {
    fn name(&self) -> &'static str {
        "bohr-report"
    }

    fn about(&self) -> &'static str {
        "Bohr set A = {n : {nθ} < ε}, its sumset (A−A)+(A−A) and the pruned tree T_A"
    }

    fn args(&self, cmd: Command) -> Command {
        common(cmd).arg(flag("rle", "Include the run-length encoded indicator of A"))
    }

    fn run(&self, m: &ArgMatches, _ctx: &Context) -> CliResult<crate::Report> {
        let (eps, theta, n) = inputs(m)?;
        let a = BohrSet::new(eps.clone(), theta, n)?;
        let indicator = a.indicator();
        let sumset = bohr_lab::double_difference_sumset(&indicator)?;
        let tree = bohr_lab::PrunedTree::new(indicator.clone());
        let density_a = a.density();
        let density_sumset = sumset.density_on(n as i64);
        let mut j = json!({
            "epsilon": rational::to_string(&eps),
            "theta": format!("sqrt({})", theta.radicand()),
            "N": n,
            "density_A": rational::to_f64(&density_a.estimate),
            "density_A_exact": rational::to_string(&density_a.estimate),
            "density_A_dyadic": density_a.dyadic,
            "density_sumset": rational::to_f64(&density_sumset.estimate),
            "four_epsilon": rational::to_f64(&(eps * frac(4, 1))),
            "uncertain_count": a.uncertain_count(),
            "log2_sphere_size": tree.log2_sphere_size(n),
            "dimension_estimate": tree.dimension_estimate(n),
        });
        if m.get_flag("rle") {
            j["indicator_rle"] = json!(bohr_lab::run_length(&indicator));
        }
        let rows = density_a
            .dyadic
            .iter()
            .map(|(w, d)| vec![w.to_string(), d.to_string()])
            .collect();
        Ok(crate::Report::new(j).with_table(&["window", "density_A"], rows))
    }
}

pub struct Avoidance;

impl Experiment for Avoidance {
    fn name(&self) -> &'static str {
        "bohr-avoidance"
    }

    fn about(&self) -> &'static str {
        "Witnesses kt outside the sumset and distance checks on X ⊆ T_A"
    }

    fn args(&self, cmd: Command) -> Command {
        common(cmd)
            .arg(opt("k-max", "Check k = 1..k_max (default 4)"))
            .arg(opt("K", "Smallest t tried (default 1)"))
            .arg(opt("pairs", "Sampled vertex pairs (default 10000)"))
            .arg(opt("exhaustive-level", "All pairs up to this level (default 40)"))
    }

    fn run(&self, m: &ArgMatches, ctx: &Context) -> CliResult<crate::Report> {
        let (eps, theta, n) = inputs(m)?;
        let ce = Counterexample::build(eps, theta, n)?;
        let report = ce.report(
            parse_or(m, "k-max", 4)?,
            parse_or(m, "K", 1)?,
            parse_or(m, "pairs", 10_000)?,
            parse_or(m, "exhaustive-level", 40)?,
            &mut ctx.rng(),
        )?;
        let rows = report
            .witnesses
            .iter()
            .map(|w| {
                let t = w.t.map(|t| t.to_string()).unwrap_or_else(|| "not found".into());
                vec![w.k.to_string(), t]
            })
            .collect();
        let failed = !report.distances_ok();
        let mut j = serde_json::to_value(&report).expect("serializable");
        j["all_witnesses_found"] = json!(report.all_found());
        j["distances_ok"] = json!(!failed);
        Ok(crate::Report::new(j)
            .with_table(&["k", "t"], rows)
            .failed_if(failed))
    }
}
