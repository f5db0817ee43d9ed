use std::str::FromStr;

use building_ramsey::rational::{self, Rational};
use building_ramsey::root_system::{Coweight, RootDatum};
use building_ramsey::tree_lab::{VertexSet, VertexSetJson};
use clap::{Arg, ArgAction, ArgMatches};

use crate::{CliError, CliResult, Registry};

mod bohr;
mod calc;
mod padic;
mod rootsys;
mod spherical;
mod tree;

pub fn register_all(r: &mut Registry) {
    r.register(Box::new(rootsys::RootsysInfo));
    r.register(Box::new(rootsys::SphereSize));
    r.register(Box::new(tree::StarSearch));
    r.register(Box::new(tree::VerifyClaim1));
    r.register(Box::new(tree::VerifyLemma2));
    r.register(Box::new(tree::Embed));
    r.register(Box::new(bohr::Report));
    r.register(Box::new(bohr::Avoidance));
    r.register(Box::new(spherical::NoiseCheck));
    r.register(Box::new(calc::Atoms));
    r.register(Box::new(calc::Bound));
    r.register(Box::new(calc::ConjectureWitness));
    r.register(Box::new(padic::Cartan));
}

pub(crate) fn opt(id: &'static str, help: &'static str) -> Arg {
    Arg::new(id).long(id).help(help)
}

pub(crate) fn req(id: &'static str, help: &'static str) -> Arg {
    opt(id, help).required(true)
}

pub(crate) fn flag(id: &'static str, help: &'static str) -> Arg {
    Arg::new(id).long(id).help(help).action(ArgAction::SetTrue)
}

pub(crate) fn raw<'a>(m: &'a ArgMatches, id: &str) -> Option<&'a str> {
    m.get_one::<String>(id).map(String::as_str)
}

pub(crate) fn parse<T: FromStr>(m: &ArgMatches, id: &str) -> CliResult<Option<T>> {
    raw(m, id)
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::input(id, format!("cannot parse {s:?}")))
        })
        .transpose()
}

pub(crate) fn parse_or<T: FromStr>(m: &ArgMatches, id: &str, default: T) -> CliResult<T> {
    Ok(parse(m, id)?.unwrap_or(default))
}

pub(crate) fn required<T: FromStr>(m: &ArgMatches, id: &str) -> CliResult<T> {
    parse(m, id)?.ok_or_else(|| CliError::input(id, "missing"))
}

pub(crate) fn list<T: FromStr>(m: &ArgMatches, id: &str) -> CliResult<Vec<T>> {
    let s = raw(m, id).ok_or_else(|| CliError::input(id, "missing"))?;
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::input(id, format!("cannot parse {x:?} in {s:?}")))
        })
        .collect()
}

pub(crate) fn ratio(m: &ArgMatches, id: &str) -> CliResult<Option<Rational>> {
    raw(m, id)
        .map(|s| rational::parse(s).ok_or_else(|| CliError::input(id, format!("{s:?} is not a rational"))))
        .transpose()
}

pub(crate) fn datum(m: &ArgMatches) -> CliResult<RootDatum> {
    let s = raw(m, "type").ok_or_else(|| CliError::input("type", "missing"))?;
    Ok(RootDatum::from_label(s)?)
}

pub(crate) fn coweight(m: &ArgMatches, id: &str, d: &RootDatum) -> CliResult<Coweight> {
    let s = raw(m, id).ok_or_else(|| CliError::input(id, "missing"))?;
    Coweight::parse(s, d.rank()).map_err(|e| match e {
        building_ramsey::Error::InvalidInput { reason, .. } => CliError::input(id, reason),
        other => other.into(),
    })
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &str, field: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(field, format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(field, format!("malformed JSON in {path}: {e}")))
}

pub(crate) fn read_set(path: &str) -> CliResult<VertexSet> {
    let j: VertexSetJson = read_json(path, "set")?;
    Ok(VertexSet::from_json(&j)?)
}
