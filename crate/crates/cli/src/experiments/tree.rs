use building_ramsey::json::fraction_pair;
use building_ramsey::rational::{self, Rational};
use building_ramsey::tree_lab::{
    self, AdversarialConfig, Hypothesis, Restriction, StarSpec, TreeBall, VertexSet, WeightedTree,
};
use building_ramsey::Error;
use clap::{ArgMatches, Command};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{list, opt, parse_or, raw, read_set, req, required};
use crate::{CliError, CliResult, Context, Experiment, Report};

fn ball_args(cmd: Command) -> Command {
    cmd.arg(opt("set", "Vertex set JSON file {q, depth, levels}"))
        .arg(opt("q", "Tree parameter q (default 2)"))
        .arg(opt("depth", "Ball radius (default 10)"))
}

fn ball(m: &ArgMatches) -> CliResult<TreeBall> {
    Ok(TreeBall::new(parse_or(m, "q", 2)?, parse_or(m, "depth", 10)?)?)
}

fn ratio_str(x: &Rational) -> Value {
    Value::String(rational::to_string(x))
}

fn codes(ball: &TreeBall, vs: &[tree_lab::Vertex]) -> Vec<String> {
    vs.iter().map(|&v| ball.code(v)).collect()
}

/// Each vertex at levels `1..=depth` kept independently with probability `p`.
fn random_set(ball: TreeBall, p: f64, rng: &mut ChaCha8Rng) -> VertexSet {
    let mut x = VertexSet::empty(ball);
    for n in 1..=ball.depth() {
        for v in ball.sphere(n) {
            if rng.gen_bool(p) {
                x.insert(v).expect("vertex of the ball");
            }
        }
    }
    x
}

fn star_spec(m: &ArgMatches) -> CliResult<StarSpec> {
    Ok(StarSpec::new(list(m, "t")?, list(m, "r")?)?)
}

/// Parses chains written `t11,t21,...;t12,t22,...`.
fn chains(m: &ArgMatches, r: &[usize]) -> CliResult<Vec<StarSpec>> {
    let s = raw(m, "chains").ok_or_else(|| CliError::input("chains", "missing"))?;
    s.split(';')
        .map(|chain| {
            let t: Vec<u32> = chain
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| CliError::input("chains", format!("cannot parse {x:?}")))
                })
                .collect::<CliResult<_>>()?;
            StarSpec::new(t, r.to_vec()).map_err(|e| match e {
                Error::InvalidInput { reason, .. } => CliError::input("chains", reason),
                other => other.into(),
            })
        })
        .collect()
}

pub struct StarSearch;

impl Experiment for StarSearch {
    fn name(&self) -> &'static str {
        "tree-star-search"
    }

    fn about(&self) -> &'static str {
        "Search a vertex set of T_q for a balanced (k, t, r)-star"
    }

    fn args(&self, cmd: Command) -> Command {
        ball_args(cmd)
            .arg(req("t", "Half-distances t_1 < ... < t_k, comma separated"))
            .arg(req("r", "Multiplicities r_1, ..., r_k"))
            .arg(opt("density", "Keep probability for a seeded random set when --set is absent (default 0.1)"))
    }

    fn run(&self, m: &ArgMatches, ctx: &Context) -> CliResult<Report> {
        let x = match raw(m, "set") {
            Some(path) => read_set(path)?,
            None => {
                let p: f64 = parse_or(m, "density", 0.1)?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::input("density", "must lie in [0, 1]"));
                }
                random_set(ball(m)?, p, &mut ctx.rng())
            }
        };
        let b = x.ball();
        let spec = star_spec(m)?;
        let star = tree_lab::find_balanced_star(&x, &spec);
        let density = tree_lab::upper_density(&x);
        let mut j = json!({
            "q": b.q(),
            "depth": b.depth(),
            "t": spec.t(),
            "r": spec.r(),
            "set_size": x.len(),
            "density_estimate": ratio_str(&density.estimate),
            "result": if star.is_some() { "found" } else { "not found" },
            "observed_K": tree_lab::observed_threshold(&x, &spec),
        });
        let mut failed = false;
        if let Some(s) = &star {
            failed = s.verify(&b, &x, &spec).is_err();
            j["star"] = json!({
                "level": s.level,
                "center": b.code(s.center),
                "arms": s.arms.iter().map(|a| codes(&b, a)).collect::<Vec<_>>(),
                "verified": !failed,
            });
        }
        let rows = match &star {
            Some(s) => s
                .arms
                .iter()
                .enumerate()
                .flat_map(|(i, arm)| {
                    arm.iter().map(move |&v| (i, v))
                })
                .map(|(i, v)| vec![(i + 1).to_string(), b.code(v), b.distance(s.center, v).to_string()])
                .collect(),
            None => vec![],
        };
        Ok(Report::new(j).with_table(&["arm", "vertex", "distance"], rows).failed_if(failed))
    }
}

pub struct VerifyClaim1;

impl Experiment for VerifyClaim1 {
    fn name(&self) -> &'static str {
        "tree-verify-claim1"
    }

    fn about(&self) -> &'static str {
        "Measure F_{n,t1-1} atom proportions inside every C(v,t) for sets without 2t1-pairs"
    }

    fn args(&self, cmd: Command) -> Command {
        ball_args(cmd)
            .arg(req("n", "Sphere level"))
            .arg(req("t1", "Forbidden half-distance t_1"))
            .arg(opt("instances", "Seeded adversarial sets when --set is absent (default 20)"))
    }

    fn run(&self, m: &ArgMatches, ctx: &Context) -> CliResult<Report> {
        let n: u32 = required(m, "n")?;
        let t1: u32 = required(m, "t1")?;
        let sets: Vec<VertexSet> = match raw(m, "set") {
            Some(path) => vec![read_set(path)?],
            None => {
                let b = ball(m)?;
                if n == 0 || n > b.depth() || t1 == 0 || t1 >= n {
                    return Err(CliError::input("n", format!("need 1 ≤ t1 < n ≤ {}", b.depth())));
                }
                let count: usize = parse_or(m, "instances", 20)?;
                let mut rng = ctx.rng();
                (0..count)
                    .map(|_| {
                        let cfg = AdversarialConfig {
                            n,
                            restrictions: [(n - t1, Restriction::SingleChild)].into(),
                            keep: rng.gen_range(0.3..=1.0),
                        };
                        cfg.generate(b, &mut rng)
                    })
                    .collect::<Result<_, _>>()?
            }
        };
        let mut rows = vec![];
        let mut results = vec![];
        let mut failed = false;
        for (i, x) in sets.iter().enumerate() {
            match tree_lab::claim1_sweep(x, t1, n) {
                Ok(s) => {
                    failed |= !s.holds;
                    rows.push(vec![
                        i.to_string(),
                        "holds".into(),
                        s.checked.to_string(),
                        rational::to_string(&s.max_proportion),
                        s.holds.to_string(),
                    ]);
                    results.push(serde_json::to_value(&s).expect("serializable"));
                }
                Err(Error::HypothesisFails(why)) => {
                    rows.push(vec![i.to_string(), "fails".into(), "0".into(), String::new(), String::new()]);
                    results.push(json!({ "hypothesis": "fails", "reason": why }));
                }
                Err(e) => return Err(e.into()),
            }
        }
        let j = json!({
            "n": n,
            "t1": t1,
            "instances": results,
            "all_hold": !failed,
        });
        Ok(Report::new(j)
            .with_table(&["instance", "hypothesis", "checked", "max_proportion", "holds"], rows)
            .failed_if(failed))
    }
}

pub struct VerifyLemma2;

impl Experiment for VerifyLemma2 {
    fn name(&self) -> &'static str {
        "tree-verify-lemma2"
    }

    fn about(&self) -> &'static str {
        "Check |X ∩ S_n|/|S_n| < q^-l + r q^(1-t11) on star-free sets"
    }

    fn args(&self, cmd: Command) -> Command {
        ball_args(cmd)
            .arg(req("n", "Sphere level"))
            .arg(req("chains", "Chains t_j separated by ';', entries by ',' e.g. 1,2;4,5"))
            .arg(req("r", "Shared multiplicities r_1, ..., r_k"))
            .arg(opt("instances", "Seeded adversarial sets when --set is absent (default 20)"))
    }

    fn run(&self, m: &ArgMatches, ctx: &Context) -> CliResult<Report> {
        let n: u32 = required(m, "n")?;
        let r: Vec<usize> = list(m, "r")?;
        let chains = chains(m, &r)?;
        let sets: Vec<VertexSet> = match raw(m, "set") {
            Some(path) => vec![read_set(path)?],
            None => {
                let b = ball(m)?;
                let last = *chains.last().expect("nonempty").t().last().expect("k ≥ 1");
                if n <= last || n > b.depth() {
                    return Err(CliError::input("n", format!("need {last} < n ≤ {}", b.depth())));
                }
                let count: usize = parse_or(m, "instances", 20)?;
                let mut rng = ctx.rng();
                (0..count)
                    .map(|_| {
                        let single = rng.gen_bool(0.5);
                        let keep = rng.gen_range(0.3..=1.0);
                        AdversarialConfig::for_chains(n, &chains, single, keep).generate(b, &mut rng)
                    })
                    .collect::<Result<_, _>>()?
            }
        };
        let mut rows = vec![];
        let mut out = vec![];
        let mut failed = false;
        for (i, x) in sets.iter().enumerate() {
            let rep = tree_lab::verify_lemma2_bound(x, &chains, n)?;
            failed |= rep.pass() == Some(false);
            let (hyp, reason) = match &rep.hypothesis {
                Hypothesis::Holds => ("holds", None),
                Hypothesis::Fails(w) => ("fails", Some(w.clone())),
            };
            rows.push(vec![
                i.to_string(),
                hyp.to_string(),
                rational::to_string(&rep.lhs),
                rational::to_string(&rep.rhs),
                rep.bound_holds.to_string(),
            ]);
            out.push(json!({
                "lhs": ratio_str(&rep.lhs),
                "lhs_fraction": fraction_pair(&rep.lhs),
                "rhs": ratio_str(&rep.rhs),
                "hypothesis": hyp,
                "reason": reason,
                "bound_holds": rep.bound_holds,
                "pass": rep.pass(),
            }));
        }
        let j = json!({
            "n": n,
            "ell": chains.len(),
            "chains": chains.iter().map(|c| c.t().to_vec()).collect::<Vec<_>>(),
            "r": r,
            "instances": out,
            "all_pass": !failed,
        });
        Ok(Report::new(j)
            .with_table(&["instance", "hypothesis", "lhs", "rhs", "bound_holds"], rows)
            .failed_if(failed))
    }
}

pub struct Embed;

impl Experiment for Embed {
    fn name(&self) -> &'static str {
        "tree-embed"
    }

    fn about(&self) -> &'static str {
        "Embed a well-ordered weighted tree into a vertex set with d(v_i, v_j) = 2 wt(j)"
    }

    fn args(&self, cmd: Command) -> Command {
        ball_args(cmd)
            .arg(req("parents", "Parent of each vertex 1..N, comma separated"))
            .arg(req("weights", "Weight of each vertex 1..N"))
    }

    fn run(&self, m: &ArgMatches, _ctx: &Context) -> CliResult<Report> {
        let tree = WeightedTree::new(list(m, "parents")?, list(m, "weights")?)?;
        let x = match raw(m, "set") {
            Some(path) => read_set(path)?,
            None => {
                let b = TreeBall::new(parse_or(m, "q", 2)?, parse_or(m, "depth", 12)?)?;
                VertexSet::full_sphere(b, b.depth())
            }
        };
        let b = x.ball();
        let Some(emb) = tree_lab::embed_weighted_tree(&x, &tree)? else {
            let j = json!({ "result": "not found", "parents": tree.parents, "weights": tree.weights });
            return Ok(Report::new(j));
        };
        let checks = emb.distance_checks(&b, &tree);
        let ok = checks.iter().all(|&(_, _, want, got)| want == got);
        let j = json!({
            "result": "found",
            "parents": tree.parents,
            "weights": tree.weights,
            "vertices": codes(&b, &emb.vertices),
            "level": emb.star.level,
            "checks": checks.iter().map(|&(i, j, want, got)| json!({"i": i, "j": j, "required": want, "actual": got})).collect::<Vec<_>>(),
            "all_verified": ok,
        });
        let rows = checks
            .iter()
            .map(|&(i, j, want, got)| vec![i.to_string(), j.to_string(), want.to_string(), got.to_string()])
            .collect();
        Ok(Report::new(j)
            .with_table(&["i", "j", "required", "actual"], rows)
            .failed_if(!ok))
    }
}
