use std::fs;
use std::path::Path;
use std::process::ExitCode;

use polymeta::graph::Graph;
use polymeta::groups::{
    candidates_order_4p, coset_graph, cp_c4_faithful, cyclic, dicyclic_4p, dihedral, enumerate_groups_with,
    subgroups_of_order_with, GroupTable,
};
use polymeta::identities::IdentitySet;
use polymeta::meta::{has_coset_polymorphism_with, has_polymorphism_with, pmeta_abheap_maltsev, MetaVerdict};
use polymeta::reductions::{decompose_matching_bipartite_with, graph_to_structure, nae3sat_to_graph, NaeInstance};
use polymeta::structures::{hom_search, Structure};
use polymeta::{aip, Error, Limits};
use serde_json::{json, Value};

use crate::{Failure, Family, Output};

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input { file: path.into(), line: None, message: e.to_string() })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> polymeta::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::input(path, e))
}

fn structure(path: &Path) -> Result<Structure, Failure> {
    load(path, Structure::from_json)
}

/// A signature mismatch between two input files is an input error.
fn pair_error(instance: &Path, e: Error) -> Failure {
    match e {
        Error::SignatureMismatch(_) => Failure::input(instance, e),
        other => other.into(),
    }
}

fn answer(yes: bool) -> &'static str {
    if yes {
        "YES"
    } else {
        "NO"
    }
}

/// Prints the answer line and, if asked, the witness; or one JSON object.
fn report(yes: bool, witness: Option<Value>, output: Output) {
    if output.json {
        let mut object = json!({ "answer": if yes { "yes" } else { "no" } });
        if let Some(w) = witness {
            object["witness"] = w;
        }
        println!("{object}");
        return;
    }
    println!("{}", answer(yes));
    if output.witness {
        if let Some(w) = witness {
            println!("{w}");
        }
    }
}

fn report_meta(verdict: &MetaVerdict, output: Output) {
    if output.json {
        println!("{}", verdict.to_json());
        return;
    }
    println!("{}", answer(verdict.is_yes()));
    if output.witness {
        if let Some(w) = &verdict.witness {
            println!("{}", serde_json::to_string(w).expect("operation tables serialize"));
        }
    }
}

pub fn check_coset(path: &Path, output: Output, limits: &Limits) -> Outcome {
    let b = structure(path)?;
    let verdict = has_coset_polymorphism_with(&b, limits)?;
    eprintln!("search path: {:?}", verdict.path);
    report_meta(&verdict.to_meta(), output);
    Ok(ExitCode::SUCCESS)
}

pub fn check_poly(path: &Path, identities: &Path, output: Output, limits: &Limits) -> Outcome {
    let b = structure(path)?;
    let sigma = load(identities, IdentitySet::parse)?;
    let verdict = has_polymorphism_with(&b, &sigma, limits).map_err(|e| match e {
        Error::NonLinear => Failure::input(identities, e),
        other => other.into(),
    })?;
    report_meta(&verdict, output);
    Ok(ExitCode::SUCCESS)
}

pub fn pmeta_abheap(path: &Path, output: Output) -> Outcome {
    let b = structure(path)?;
    let verdict = pmeta_abheap_maltsev(&b)?;
    if verdict.promise_violation {
        eprintln!("promise violated: the structure has neither an abelian heap nor a usable Maltsev witness");
    }
    report_meta(&verdict, output);
    Ok(ExitCode::SUCCESS)
}

pub fn aip(instance: &Path, template: &Path, system: bool, json: bool) -> Outcome {
    let a = structure(instance)?;
    let b = structure(template)?;
    let yes = aip::aip_decide(&a, &b).map_err(|e| pair_error(instance, e))?;
    report(yes, None, Output { witness: false, json });
    if system {
        print!("{}", aip::encode_aip(&a, &b)?);
    }
    Ok(ExitCode::SUCCESS)
}

pub fn solve(instance: &Path, template: &Path, output: Output) -> Outcome {
    let a = structure(instance)?;
    let b = structure(template)?;
    let h = hom_search(&a, &b, None).map_err(|e| pair_error(instance, e))?;
    report(h.is_some(), h.map(|h| json!(h.map)), output);
    Ok(ExitCode::SUCCESS)
}

pub fn nae2graph(path: &Path) -> Outcome {
    let phi = load(path, NaeInstance::parse)?;
    print!("{}", nae3sat_to_graph(&phi).to_dimacs());
    Ok(ExitCode::SUCCESS)
}

pub fn graph2meta(path: &Path) -> Outcome {
    let g = load(path, Graph::from_dimacs)?;
    let reduced = graph_to_structure(&g);
    eprintln!(
        "p = {}, domain {}, gadget {}",
        reduced.p,
        reduced.structure.size(),
        if reduced.gadget_added { "added" } else { "not needed" }
    );
    println!("{}", reduced.structure.to_json());
    Ok(ExitCode::SUCCESS)
}

/// Witness vertices are 1-indexed like the graph file.
pub fn decompose(path: &Path, output: Output, limits: &Limits) -> Outcome {
    let g = load(path, Graph::from_dimacs)?;
    let dec = decompose_matching_bipartite_with(&g, limits)?;
    let witness = dec.as_ref().map(|d| {
        json!({
            "matching": d.matching.iter().map(|&(u, v)| [u + 1, v + 1]).collect::<Vec<_>>(),
            "coloring": d.coloring.iter().map(|&c| u8::from(c)).collect::<Vec<_>>(),
        })
    });
    report(dec.is_some(), witness, output);
    Ok(ExitCode::SUCCESS)
}

fn build_group(family: Family, params: &[usize], limits: &Limits) -> Result<GroupTable, Failure> {
    let usage = |expected: &str| Failure::Usage(format!("expected parameters: {expected}"));
    let invalid = |e: Error| Failure::Usage(e.to_string());
    let one = |expected: &str| match params {
        [x] => Ok(*x),
        _ => Err(usage(expected)),
    };
    Ok(match family {
        Family::Cyclic => cyclic(one("N")?).map_err(invalid)?,
        Family::Dihedral => dihedral(one("ORDER")?).map_err(invalid)?,
        Family::Dicyclic => dicyclic_4p(one("P")?).map_err(invalid)?,
        Family::CpC4 => cp_c4_faithful(one("P")?).map_err(invalid)?,
        Family::KleinCp => candidates_order_4p(one("P")?).map_err(invalid)?.swap_remove(0).1,
        Family::Enumerated => {
            let [n, i] = params else {
                return Err(usage("N I"));
            };
            let groups = enumerate_groups_with(*n, limits)?;
            let count = groups.len();
            groups
                .into_iter()
                .nth(*i)
                .ok_or_else(|| Failure::Usage(format!("there are {count} groups of order {n}, indexed from 0")))?
        }
    })
}

pub fn group(family: Family, params: &[usize], with_graph: bool, subgroups: Option<usize>, limits: &Limits) -> Outcome {
    let g = build_group(family, params, limits)?;
    if with_graph {
        print!("{}", coset_graph(&g).to_dimacs());
    } else if let Some(m) = subgroups {
        println!("{}", json!(subgroups_of_order_with(&g, m, limits)?));
    } else {
        println!("{}", g.to_json());
    }
    Ok(ExitCode::SUCCESS)
}

pub fn selftest() -> ExitCode {
    let mut all = true;
    for criterion in polymeta_acceptance::criteria() {
        let outcome = criterion.run();
        println!("{outcome}");
        all &= outcome.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
