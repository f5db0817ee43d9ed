use building_ramsey::spherical_lab::{self, FlagComplex};
use clap::{Arg, ArgMatches, Command};
use serde_json::json;

use super::{flag, raw};
use crate::{CliResult, Context, Experiment, Report};

pub struct NoiseCheck;

impl Experiment for NoiseCheck {
    fn name(&self) -> &'static str {
        "spherical-noise-check"
    }

    fn about(&self) -> &'static str {
        "Opposition and double-opposition counts in the thin-q spherical buildings of A2 and C2"
    }

    fn args(&self, cmd: Command) -> Command {
        cmd.arg(
            Arg::new("complex")
                .long("complex")
                .value_parser(["fano", "gq22", "both"])
                .default_value("both"),
        )
        .arg(flag("incidence", "Include point/line/chamber incidence lists"))
    }

    fn run(&self, m: &ArgMatches, _ctx: &Context) -> CliResult<Report> {
        let complexes: Vec<FlagComplex> = match raw(m, "complex").unwrap_or("both") {
            "fano" => vec![spherical_lab::build_fano()?],
            "gq22" => vec![spherical_lab::build_gq22()?],
            _ => vec![spherical_lab::build_fano()?, spherical_lab::build_gq22()?],
        };
        let mut reports = vec![];
        let mut rows = vec![];
        let mut failed = false;
        for fc in &complexes {
            let r = spherical_lab::noise_check(fc);
            failed |= !r.passes();
            rows.extend(r.per_pair.iter().map(|p| {
                vec![r.complex.clone(), p.c1.to_string(), p.c2.to_string(), p.count.to_string()]
            }));
            let mut j = serde_json::to_value(&r).expect("serializable");
            j["passes"] = json!(r.passes());
            if m.get_flag("incidence") {
                j["incidence"] = fc.to_json();
            }
            reports.push(j);
        }
        let j = json!({ "complexes": reports, "all_pass": !failed });
        Ok(Report::new(j)
            .with_table(&["complex", "c1", "c2", "count"], rows)
            .failed_if(failed))
    }
}
