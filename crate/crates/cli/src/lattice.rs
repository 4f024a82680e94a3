//! Hasse diagrams of the submodule and fully invariant lattices.

use std::fmt::Write;

use modtheory::ModuleAnalysis;
use serde_json::{json, Value};

/// Covering pairs `(lower, upper)` among `ids`.
fn covers(a: &ModuleAnalysis, ids: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &x in ids {
        for &y in ids {
            if x == y || !a.subset(x, y) {
                continue;
            }
            let between = ids.iter().any(|&z| z != x && z != y && a.subset(x, z) && a.subset(z, y));
            if !between {
                out.push((x, y));
            }
        }
    }
    out
}

fn label(a: &ModuleAnalysis, id: usize) -> String {
    let s = a.sub(id);
    if id == a.zero() {
        return "0".into();
    }
    if id == a.top() {
        return "M".into();
    }
    let gens = s.generators(a.module());
    format!("<{}> |{}|", gens.iter().map(usize::to_string).collect::<Vec<_>>().join(","), s.len())
}

pub fn to_json(a: &ModuleAnalysis) -> modtheory::Result<Value> {
    let all: Vec<usize> = (0..a.lattice().len()).collect();
    let fi = a.fully_invariant_ids()?;
    Ok(json!({
        "submodules": all.iter().map(|&i| json!({"id": i, "elements": a.sub(i).elements(), "fully_invariant": fi.contains(&i)})).collect::<Vec<_>>(),
        "covers": covers(a, &all),
        "fully_invariant_covers": covers(a, &fi),
    }))
}

pub fn to_dot(a: &ModuleAnalysis) -> modtheory::Result<String> {
    let all: Vec<usize> = (0..a.lattice().len()).collect();
    let fi = a.fully_invariant_ids()?;
    let mut out = String::new();
    writeln!(out, "digraph lattices {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    for (cluster, ids, prefix) in [("submodules", &all, "s"), ("fully_invariant", &fi, "f")] {
        writeln!(out, "  subgraph cluster_{cluster} {{").unwrap();
        writeln!(out, "    label=\"{cluster}\";").unwrap();
        for &i in ids.iter() {
            let shape = if fi.contains(&i) { "doublecircle" } else { "circle" };
            writeln!(out, "    {prefix}{i} [label=\"{}\", shape={shape}];", label(a, i)).unwrap();
        }
        for (x, y) in covers(a, ids) {
            writeln!(out, "    {prefix}{x} -> {prefix}{y};").unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
