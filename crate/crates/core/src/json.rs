//! Canonical JSON documents for structures and everything built on them.
//!
//! Objects have sorted keys and tuple lists are sorted, so equal values
//! always serialize to identical text.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::density::{CliqueWitness, MinedGadget};
use crate::error::{Error, Result};
use crate::gadget::{make_gadget, Gadget, StarProduct};
use crate::graph::Graph;
use crate::labels::{LabelTable, Tag};
use crate::logic::{InterpretableSpec, LPath, PPFormula, Step, SymbolPart};
use crate::perm::PermWitness;
use crate::structure::{Signature, Structure, Tuple};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn structure_to_json(s: &Structure) -> Value {
    let signature: Vec<Value> = s.signature().symbols().iter().map(|x| json!({"name": x.name, "arity": x.arity})).collect();
    let relations: Map<String, Value> = s
        .signature()
        .symbols()
        .iter()
        .map(|x| (x.name.clone(), json!(s.tuples(&x.name).iter().collect::<Vec<_>>())))
        .collect();
    let mut out = json!({"signature": signature, "size": s.size(), "relations": relations});
    if let Some(labels) = s.labels() {
        out["labels"] = json!(labels);
    }
    out
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("`{what}` must be a natural number")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("`{what}` must be an array")))?
        .iter()
        .map(|x| as_usize(x, what))
        .collect()
}

pub fn structure_from_json(v: &Value) -> Result<Structure> {
    let symbols = field(v, "signature")?
        .as_array()
        .ok_or_else(|| parse_err("`signature` must be an array"))?
        .iter()
        .map(|s| {
            let name = field(s, "name")?.as_str().ok_or_else(|| parse_err("symbol name must be a string"))?;
            Ok((name.to_string(), as_usize(field(s, "arity")?, "arity")?))
        })
        .collect::<Result<Vec<_>>>()?;
    let signature = Signature::new(symbols)?;
    let size = as_usize(field(v, "size")?, "size")?;
    let mut relations: BTreeMap<String, BTreeSet<Tuple>> = BTreeMap::new();
    if let Some(rel) = v.get("relations") {
        let rel = rel.as_object().ok_or_else(|| parse_err("`relations` must be an object"))?;
        for (name, tuples) in rel {
            let tuples = tuples.as_array().ok_or_else(|| parse_err(format!("relation `{name}` must be an array")))?;
            let set = tuples.iter().map(|t| usize_list(t, "tuple")).collect::<Result<BTreeSet<_>>>()?;
            relations.insert(name.clone(), set);
        }
    }
    for s in signature.symbols() {
        relations.entry(s.name.clone()).or_default();
    }
    let labels = match v.get("labels") {
        None | Some(Value::Null) => None,
        Some(l) => Some(
            l.as_array()
                .ok_or_else(|| parse_err("`labels` must be an array"))?
                .iter()
                .map(|x| x.as_str().map(String::from).ok_or_else(|| parse_err("labels must be strings")))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let s = Structure::from_parts_unchecked(signature, size, relations, labels);
    let problems = s.validate();
    if problems.is_empty() {
        Ok(s)
    } else {
        Err(Error::InvalidStructure(problems))
    }
}

pub fn graph_from_json(v: &Value) -> Result<Graph> {
    Graph::try_from_structure(structure_from_json(v)?)
}

pub fn gadget_to_json(g: &Gadget) -> Value {
    let mut v = structure_to_json(g.carrier());
    v["alpha"] = json!(g.alpha());
    v["beta"] = json!(g.beta());
    v["A"] = json!(g.a());
    v["B"] = json!(g.b());
    v["P"] = json!(g.p());
    v
}

pub fn gadget_from_json(v: &Value) -> Result<Gadget> {
    let carrier = structure_from_json(v)?;
    let list = |k: &str| v.get(k).map_or(Ok(Vec::new()), |x| usize_list(x, k));
    make_gadget(
        carrier,
        as_usize(field(v, "alpha")?, "alpha")?,
        as_usize(field(v, "beta")?, "beta")?,
        list("A")?,
        list("B")?,
        list("P")?,
    )
}

/// A structure with one provenance tag per element.
pub fn tagged_to_json(s: &Structure, tags: &LabelTable) -> Value {
    let mut v = structure_to_json(s);
    v["tags"] = json!(tags.tags());
    v
}

pub fn star_to_json(s: &StarProduct) -> Value {
    tagged_to_json(&s.structure, &s.tags)
}

pub fn tags_from_json(v: &Value) -> Result<Vec<Tag>> {
    serde_json::from_value(field(v, "tags")?.clone()).map_err(|e| parse_err(e.to_string()))
}

pub fn pp_to_json(phi: &PPFormula) -> Value {
    let mut v = structure_to_json(phi.canonical());
    v["free"] = json!(phi.free());
    v
}

pub fn pp_from_json(v: &Value) -> Result<PPFormula> {
    PPFormula::new(structure_from_json(v)?, usize_list(field(v, "free")?, "free")?)
}

pub fn lpath_to_json(l: &LPath) -> Value {
    let mut v = structure_to_json(l.carrier());
    v["p"] = json!(l.p());
    v["steps"] = json!(l.steps().iter().map(|s| json!({"rel": s.rel, "tuple": s.tuple})).collect::<Vec<_>>());
    v
}

/// Reads a path; when `steps` is absent they are recovered from `p`.
pub fn lpath_from_json(v: &Value) -> Result<LPath> {
    let carrier = structure_from_json(v)?;
    let p = usize_list(field(v, "p")?, "p")?;
    let path = match v.get("steps") {
        Some(steps) => {
            let steps = steps
                .as_array()
                .ok_or_else(|| parse_err("`steps` must be an array"))?
                .iter()
                .map(|s| {
                    let rel = field(s, "rel")?.as_str().ok_or_else(|| parse_err("`rel` must be a string"))?;
                    Ok(Step { rel: rel.to_string(), tuple: usize_list(field(s, "tuple")?, "tuple")? })
                })
                .collect::<Result<Vec<_>>>()?;
            LPath::new(carrier, p, steps)
        }
        None => crate::logic::is_lpath(&carrier, &p),
    };
    path.ok_or_else(|| parse_err("not a path"))
}

pub fn perm_witness_to_json(w: &PermWitness) -> Value {
    let tuples: Vec<Value> =
        w.tuples.iter().map(|t| json!({"symbol": t.symbol, "tuple": t.tuple, "sigma": t.sigma})).collect();
    json!({"bijection": w.bijection, "tuples": tuples})
}

pub fn witness_to_json(w: &CliqueWitness) -> Value {
    let paths: Map<String, Value> = w.paths.iter().map(|(&(i, j), p)| (format!("{i}-{j}"), json!(p))).collect();
    json!({"natives": w.natives, "paths": paths})
}

pub fn mined_to_json(m: &MinedGadget, stages: &[String]) -> Value {
    let mut v = gadget_to_json(&m.gadget);
    v["verified_m"] = json!(m.verified_m);
    v["stages"] = json!(stages);
    v["p"] = json!(m.path.p());
    v["system"] = gadget_to_json(m.system.gadget());
    v
}

pub fn spec_to_json(s: &InterpretableSpec) -> Value {
    let parts: Vec<Value> = s
        .parts()
        .iter()
        .map(|p| json!({"name": p.name, "gadget": structure_to_json(&p.gadget), "homs": p.homs}))
        .collect();
    json!({"bullet": structure_to_json(s.bullet()), "parts": parts})
}

pub fn spec_from_json(v: &Value) -> Result<InterpretableSpec> {
    let bullet = structure_from_json(field(v, "bullet")?)?;
    let parts = field(v, "parts")?
        .as_array()
        .ok_or_else(|| parse_err("`parts` must be an array"))?
        .iter()
        .map(|p| {
            let name = field(p, "name")?.as_str().ok_or_else(|| parse_err("part name must be a string"))?;
            let homs = field(p, "homs")?
                .as_array()
                .ok_or_else(|| parse_err("`homs` must be an array"))?
                .iter()
                .map(|h| usize_list(h, "hom"))
                .collect::<Result<Vec<_>>>()?;
            Ok(SymbolPart { name: name.to_string(), gadget: structure_from_json(field(p, "gadget")?)?, homs })
        })
        .collect::<Result<Vec<_>>>()?;
    InterpretableSpec::new(bullet, parts)
}

/// Pretty-printed text with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{h_gadget, path_gadget, star};
    use crate::logic::{gra_spec, is_lpath};

    #[test]
    fn structure_format_is_canonical() {
        let g = Graph::from_edges(3, [(1, 2), (0, 1)]).unwrap().into_structure().with_labels(vec!["a".into(), "b".into(), "c".into()]);
        let text = serde_json::to_string(&structure_to_json(&g)).unwrap();
        assert_eq!(
            text,
            r#"{"labels":["a","b","c"],"relations":{"E":[[0,1],[1,2]]},"signature":[{"arity":2,"name":"E"}],"size":3}"#
        );
        let back = structure_from_json(&parse_text(&text).unwrap()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.labels(), g.labels());
    }

    #[test]
    fn invalid_documents_are_rejected() {
        let v = json!({"signature":[{"name":"E","arity":2}],"size":3,"relations":{"E":[[0,5]]}});
        match structure_from_json(&v) {
            Err(Error::InvalidStructure(m)) => assert!(m[0].starts_with("tuple entry out of range")),
            other => panic!("{other:?}"),
        }
        let v = json!({"signature":[{"name":"E","arity":2}],"size":3,"relations":{"F":[]}});
        assert!(matches!(structure_from_json(&v), Err(Error::InvalidStructure(_))));
        assert!(matches!(structure_from_json(&json!({"size": 1})), Err(Error::Parse(_))));
        assert!(parse_text("{").is_err());
    }

    #[test]
    fn round_trips() {
        let h = h_gadget();
        assert_eq!(gadget_from_json(&gadget_to_json(&h)).unwrap(), h);
        let s = star(&Graph::directed_path(3), &path_gadget(1));
        let v = star_to_json(&s);
        assert_eq!(tags_from_json(&v).unwrap(), s.tags.tags());
        assert_eq!(structure_from_json(&v).unwrap(), s.structure);
        let phi = PPFormula::new(Graph::directed_path(2).into_structure(), vec![0]).unwrap();
        assert_eq!(pp_from_json(&pp_to_json(&phi)).unwrap(), phi);
        let l = is_lpath(&Graph::directed_path(3), &[0, 1, 2]).unwrap();
        assert_eq!(lpath_from_json(&lpath_to_json(&l)).unwrap(), l);
        let spec = gra_spec();
        assert_eq!(spec_from_json(&spec_to_json(&spec)).unwrap(), spec);
        for v in [gadget_to_json(&h), star_to_json(&s), spec_to_json(&spec)] {
            assert_eq!(parse_text(&to_text(&v)).unwrap(), v);
        }
    }
}
