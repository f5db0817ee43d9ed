use building_ramsey::padic::{self, CartanCoord, PAdicMatrix};
use building_ramsey::root_system::RootDatum;
use clap::{ArgMatches, Command};
use rand::Rng;
use serde_json::{json, Value};

use super::{opt, parse_or, raw, read_json, required};
use crate::{CliError, CliResult, Context, Experiment, Report};

/// Inline JSON, or `@path` to read it from a file.
fn matrix_rows(m: &ArgMatches, id: &str) -> CliResult<Option<Vec<Vec<String>>>> {
    let Some(s) = raw(m, id) else { return Ok(None) };
    let v: Value = match s.strip_prefix('@') {
        Some(path) => read_json(path, id)?,
        None => serde_json::from_str(s).map_err(|e| CliError::input(id, format!("malformed JSON: {e}")))?,
    };
    let bad = || CliError::input(id, "expected an array of arrays of integer or fraction strings");
    let rows = v.as_array().ok_or_else(bad)?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) if n.is_i64() => Ok(n.to_string()),
                    _ => Err(bad()),
                })
                .collect()
        })
        .collect::<CliResult<_>>()
        .map(Some)
}

fn random_rows<R: Rng>(rng: &mut R, n: usize, p: u64) -> Vec<Vec<String>> {
    loop {
        let rows: Vec<Vec<String>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-12i64..=12).to_string()).collect())
            .collect();
        if PAdicMatrix::parse(&rows, p).is_ok() {
            return rows;
        }
    }
}

fn coords(m: &ArgMatches) -> CliResult<Vec<CartanCoord>> {
    let s = raw(m, "coords").ok_or_else(|| CliError::input("coords", "missing"))?;
    s.split(';')
        .map(|c| {
            c.split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| CliError::input("coords", format!("cannot parse {x:?}")))
                })
                .collect::<CliResult<Vec<i64>>>()
                .map(CartanCoord)
        })
        .collect()
}

pub struct Cartan;

impl Experiment for Cartan {
    fn name(&self) -> &'static str {
        "padic-cartan"
    }

    fn about(&self) -> &'static str {
        "Cartan coordinates λ(g) of g ∈ GL_n(Q_p) by pivot elimination, checked against minors"
    }

    fn args(&self, cmd: Command) -> Command {
        cmd.arg(opt("matrix", "JSON rows of integer or fraction strings, or @file"))
            .arg(opt("random", "Seeded random integer matrix of this size instead of --matrix"))
            .arg(opt("p", "Prime p (default 2)"))
            .arg(opt("against", "Second matrix h; also reports the vector distance from gK to hK"))
            .arg(opt("corollary-type", "Check corollary hypotheses in type A_n or C_n for --coords"))
            .arg(opt("coords", "Cartan coordinates λ(g_1);λ(g_2);... comma separated"))
            .arg(opt("N", "N in Nρ ≪ λ(g_1) (default 1)"))
    }

    fn run(&self, m: &ArgMatches, ctx: &Context) -> CliResult<Report> {
        let p: u64 = parse_or(m, "p", 2)?;
        let rows = match (matrix_rows(m, "matrix")?, raw(m, "random")) {
            (Some(rows), None) => rows,
            (None, Some(_)) => {
                let n: usize = required(m, "random")?;
                if !(1..=8).contains(&n) {
                    return Err(CliError::input("random", "size must lie in 1..=8"));
                }
                random_rows(&mut ctx.rng(), n, p)
            }
            (Some(_), Some(_)) => return Err(CliError::input("matrix", "give --matrix or --random, not both")),
            (None, None) => return Err(CliError::input("matrix", "missing")),
        };
        let g = PAdicMatrix::parse(&rows, p)?;
        let lambda = padic::cartan_coordinates(&g);
        let oracle = padic::cartan_by_minors(&g);
        let agrees = lambda == oracle;
        let mut failed = !agrees;
        let mut j = json!({
            "p": p,
            "matrix": rows,
            "lambda": lambda.0,
            "det_valuation": g.det_valuation(),
            "oracle_lambda": oracle.0,
            "oracle_agrees": agrees,
        });
        if let Some(h_rows) = matrix_rows(m, "against")? {
            let h = PAdicMatrix::parse(&h_rows, p)?;
            let d = padic::vector_distance_cosets(&g, &h)?;
            let back = padic::vector_distance_cosets(&h, &g)?;
            let symmetric = back == d.reversed_negation();
            failed |= !symmetric;
            j["vector_distance"] = json!(d.0);
            j["reverse_distance"] = json!(back.0);
            j["distance_symmetric"] = json!(symmetric);
        }
        if let Some(t) = raw(m, "corollary-type") {
            let d = RootDatum::from_label(t)?;
            let diag = padic::corollary_hypothesis_check(&d, &coords(m)?, parse_or(m, "N", 1)?)?;
            j["corollary"] = serde_json::to_value(&diag).expect("serializable");
        }
        let rows = lambda
            .0
            .iter()
            .zip(&oracle.0)
            .enumerate()
            .map(|(i, (a, b))| vec![(i + 1).to_string(), a.to_string(), b.to_string()])
            .collect();
        Ok(Report::new(j)
            .with_table(&["i", "lambda", "oracle"], rows)
            .failed_if(failed))
    }
}
