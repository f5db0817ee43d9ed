use building_ramsey::json::big_uint_value;
use building_ramsey::root_system::DEFAULT_ENUMERATION_RANK;
use clap::{ArgMatches, Command};
use serde_json::json;

use super::{coweight, datum, flag, parse, req};
use crate::{CliResult, Context, Experiment, Report};

pub struct RootsysInfo;

impl Experiment for RootsysInfo {
    fn name(&self) -> &'static str {
        "rootsys-info"
    }

    fn about(&self) -> &'static str {
        "Root datum, w_0, (−1)-type and the Poincaré polynomial of W_0"
    }

    fn args(&self, cmd: Command) -> Command {
        cmd.arg(req("type", "Cartan type such as C2 or E7"))
            .arg(flag("allow-large", "Enumerate W_0 even above rank 6"))
    }

    fn run(&self, m: &ArgMatches, _ctx: &Context) -> CliResult<Report> {
        let d = datum(m)?;
        let w0 = d.longest_element();
        let poincare = if d.rank() <= DEFAULT_ENUMERATION_RANK || m.get_flag("allow-large") {
            json!(d.poincare_polynomial()?)
        } else {
            json!(null)
        };
        let mut j = d.to_json();
        let obj = j.as_object_mut().expect("datum json is an object");
        obj.insert("longest_element".into(), w0.to_json());
        obj.insert("minus_one_type".into(), json!(d.is_minus_one_type()));
        obj.insert("poincare_polynomial".into(), poincare);
        Ok(Report::new(j))
    }
}

pub struct SphereSize;

impl Experiment for SphereSize {
    fn name(&self) -> &'static str {
        "sphere-size"
    }

    fn about(&self) -> &'static str {
        "|S_λ| = W_0(q^-1)/W_0λ(q^-1) q^h(λ) for a dominant coweight λ"
    }

    fn args(&self, cmd: Command) -> Command {
        cmd.arg(req("type", "Cartan type"))
            .arg(req("lambda", "Dominant coweight in the ω basis, e.g. 2,2"))
            .arg(req("q", "Thickness"))
    }

    fn run(&self, m: &ArgMatches, _ctx: &Context) -> CliResult<Report> {
        let d = datum(m)?;
        let lambda = coweight(m, "lambda", &d)?;
        let q: u64 = parse(m, "q")?.expect("required");
        let size = d.sphere_size(&lambda, q)?;
        let h = d.height_two_rho(&lambda)?;
        let j = json!({
            "type": d.label().to_string(),
            "lambda": lambda.0,
            "q": q,
            "h": h,
            "size": big_uint_value(&size),
        });
        Ok(Report::new(j).with_table(
            &["type", "lambda", "q", "size"],
            vec![vec![d.label().to_string(), lambda.to_string(), q.to_string(), size.to_string()]],
        ))
    }
}
