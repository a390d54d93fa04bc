//! The `rootdatum` command line.
//!
//! Exit codes: 0 success, 1 domain or parse error, 2 inconclusive isomorphism
//! search, 3 precision or group-order bound exhausted.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::catalog::{self, CatalogKey};
use crate::classify::{
    fingerprint, identify_weyl_pair, invariant_degrees, is_isomorphic_with, krull_schmidt, steenrod_decide,
    structure_decomposition, F2Matrix, F2Module, IsoBudget, IsoVerdict, SteenrodMode,
};
use crate::error::{Error, Result};
use crate::exact_linear::{parse_scalar, FiniteAbelianPGroup, Matrix, Vector};
use crate::io::{read_datum, DatumFile};
use crate::root_datum::{parse_torus_list, RootDatum};

#[derive(Parser, Debug)]
#[command(name = "rootdatum", version, about = "Root data over the p-adic integers")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank, Weyl group, reflections, degrees, π₁, center and fingerprint.
    Info { target: String },
    /// Check the root datum axioms.
    Verify { target: String },
    /// Fundamental group L/L₀.
    Pi1 { target: String },
    /// Discrete center.
    Center { target: String },
    /// Quotient by a finite central subgroup, given as torus elements `a,b;c,d`.
    Quotient {
        target: String,
        #[arg(long)]
        by: String,
    },
    /// Cover attached to the subgroup of π₁ generated by lattice vectors `a,b;c,d`.
    Cover {
        target: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Universal cover.
    Ucover { target: String },
    /// Adjoint form.
    Adjoint { target: String },
    /// Irreducible factors and rank-one trivial pieces.
    Split { target: String },
    /// D ≅ (D̃ × T)/A.
    Structure { target: String },
    /// Isomorphism test with a verified witness.
    Iso {
        a: String,
        b: String,
        #[arg(long, default_value_t = IsoBudget::default().max_nodes)]
        max_nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decompositions of a polynomial algebra into realizable factors.
    Steenrod {
        /// Comma-separated generator degrees.
        #[arg(long)]
        degrees: String,
        /// Also use factors not known to be complete.
        #[arg(long)]
        extended: bool,
    },
    /// Name the factors of an 𝔽₂ Weyl pair.
    IdentifyWeyl {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List catalog keys.
    Catalog {
        #[arg(long)]
        max_rank: usize,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome { code, stdout: String::new(), stderr }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } | Error::OrderBoundExceeded { .. } => 3,
        _ => 1,
    }
}

/// Parses and executes one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome::fail(1, text),
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome::fail(exit_code(&e), format!("error: {e}\n")),
    }
}

/// A catalog key or the path of a datum file.
pub fn load_target(target: &str) -> Result<RootDatum> {
    if let Ok(key) = target.parse::<CatalogKey>() {
        return catalog::get(&key);
    }
    let path = std::path::Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{target}: {e}")))?;
        return read_datum(&text);
    }
    Err(Error::Parse(format!("'{target}' is neither a catalog key nor a datum file")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn factors(g: &FiniteAbelianPGroup) -> Vec<String> {
    g.invariant_factors().iter().map(|x| x.to_string()).collect()
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vectors().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn parse_vectors(s: &str, n: usize, d: &RootDatum) -> Result<Vec<Vector>> {
    let mut out = Vec::new();
    for part in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
        let v: Vector = part.split(',').map(|x| parse_scalar(x.trim(), d.extension())).collect::<Result<_>>()?;
        if v.len() != n {
            return Err(Error::Domain(format!("vector '{part}' has {} coordinates, expected {n}", v.len())));
        }
        out.push(v);
    }
    Ok(out)
}

fn datum_output(d: &RootDatum) -> String {
    let mut s = DatumFile::from_datum(d).to_json_string();
    s.push('\n');
    s
}

fn info_value(target: &str, d: &RootDatum) -> Result<Value> {
    let pi1 = d.fundamental_group()?;
    let center = d.center()?;
    let fp = fingerprint(d)?;
    Ok(json!({
        "target": target,
        "p": d.p(),
        "rank": d.rank(),
        "scalar_ring": d.extension().map(|e| e.ring_label()).unwrap_or_else(|| "p-local".into()),
        "weyl_order": d.weyl().order(),
        "reflections": d.reflections().len(),
        "reflection_classes": d.reflection_classes().len(),
        "degrees": invariant_degrees(d.weyl()),
        "pi1": factors(&pi1),
        "pi1_free_rank": pi1.free_rank,
        "center": factors(&center.group),
        "center_corank": center.corank(),
        "center_generators": center.generators.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "fingerprint": fp,
    }))
}

fn info_table(v: &Value) -> String {
    let mut s = String::new();
    let d = &v["degrees"];
    let list = |x: &Value| {
        let items: Vec<String> = x.as_array().expect("array").iter().map(|e| e.as_str().unwrap_or("?").to_string()).collect();
        if items.is_empty() {
            "0".to_string()
        } else {
            items.iter().map(|i| format!("Z/{i}")).collect::<Vec<_>>().join(" + ")
        }
    };
    let with_free = |g: String, k: &Value| match k.as_u64() {
        Some(0) | None => g,
        Some(r) if g == "0" => format!("free^{r}"),
        Some(r) => format!("{g} + free^{r}"),
    };
    let _ = writeln!(s, "target        {}", v["target"].as_str().unwrap_or_default());
    let _ = writeln!(s, "p             {}", v["p"]);
    let _ = writeln!(s, "rank          {}", v["rank"]);
    let _ = writeln!(s, "scalar ring   {}", v["scalar_ring"].as_str().unwrap_or_default());
    let _ = writeln!(s, "|W|           {}", v["weyl_order"]);
    let _ = writeln!(s, "reflections   {} in {} classes", v["reflections"], v["reflection_classes"]);
    let _ = writeln!(s, "degrees       {}", d);
    let _ = writeln!(s, "pi1           {}", with_free(list(&v["pi1"]), &v["pi1_free_rank"]));
    let _ = writeln!(s, "center        {}", with_free(list(&v["center"]), &v["center_corank"]));
    s
}

fn group_output(json: bool, name: &str, g: &FiniteAbelianPGroup, extra: Option<(&str, Value)>) -> String {
    if json {
        let mut v = json!({ name: factors(g), "free_rank": g.free_rank });
        if let Some((k, x)) = extra {
            v[k] = x;
        }
        pretty(&v)
    } else {
        format!("{g}\n")
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let json = cli.json;
    let out = match &cli.command {
        Command::Info { target } => {
            let d = load_target(target)?;
            let v = info_value(target, &d)?;
            if json {
                pretty(&v)
            } else {
                info_table(&v)
            }
        }
        Command::Verify { target } => {
            let d = load_target(target)?;
            let report = d.verify()?;
            let text = if json {
                let checks: Vec<Value> = report
                    .checks
                    .iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "witness": c.witness}))
                    .collect();
                pretty(&json!({"ok": report.ok(), "checks": checks}))
            } else {
                report.to_string()
            };
            if !report.ok() {
                return Ok(Outcome { code: 1, stdout: text, stderr: "error: the datum violates the axioms\n".into() });
            }
            text
        }
        Command::Pi1 { target } => group_output(json, "pi1", &load_target(target)?.fundamental_group()?, None),
        Command::Center { target } => {
            let c = load_target(target)?.center()?;
            let gens: Vec<String> = c.generators.iter().map(|t| t.to_string()).collect();
            if json {
                group_output(true, "center", &c.group, Some(("generators", json!(gens))))
            } else {
                let mut s = format!("{}\n", c.group);
                for g in gens {
                    let _ = writeln!(s, "  generator {g}");
                }
                s
            }
        }
        Command::Quotient { target, by } => {
            let d = load_target(target)?;
            let a = parse_torus_list(by, d.rank(), d.p())?;
            datum_output(&d.quotient(&a)?)
        }
        Command::Cover { target, subgroup } => {
            let d = load_target(target)?;
            let h = parse_vectors(subgroup, d.rank(), &d)?;
            datum_output(&d.cover(&h)?)
        }
        Command::Ucover { target } => datum_output(&load_target(target)?.universal_cover()?),
        Command::Adjoint { target } => datum_output(&load_target(target)?.adjoint()?),
        Command::Split { target } => {
            let d = load_target(target)?;
            let parts = d.split_irreducibles()?;
            let mut rows = Vec::new();
            for (f, inc) in &parts {
                let label = crate::classify::catalog_label(f)?;
                rows.push((label.map(|k| k.to_string()), f, inc));
            }
            if json {
                let items: Vec<Value> = rows
                    .iter()
                    .map(|(label, f, inc)| {
                        json!({
                            "label": label,
                            "rank": f.rank(),
                            "weyl_order": f.weyl().order(),
                            "inclusion": matrix_rows(inc),
                            "datum": DatumFile::from_datum(f),
                        })
                    })
                    .collect();
                pretty(&json!({ "factors": items }))
            } else {
                let mut s = String::new();
                for (label, f, _) in &rows {
                    let name = match label {
                        Some(l) => l.clone(),
                        None if f.weyl().order() == 1 => format!("T({})@{}", f.rank(), f.p()),
                        None => format!("unlabeled rank-{} factor", f.rank()),
                    };
                    let _ = writeln!(s, "{name:<16} rank {}  |W| = {}", f.rank(), f.weyl().order());
                }
                s
            }
        }
        Command::Structure { target } => {
            let d = load_target(target)?;
            let s = structure_decomposition(&d)?;
            let v = s.to_json(true);
            if json {
                pretty(&v)
            } else {
                let names: Vec<String> = s.factors.iter().map(|f| f.name()).collect();
                let mut out = String::new();
                let _ = writeln!(out, "factors       {}", if names.is_empty() { "none".into() } else { names.join(" × ") });
                let _ = writeln!(out, "torus rank    {}", s.m0);
                let _ = writeln!(out, "A             {}", s.a_structure);
                for t in &s.central_subgroup {
                    let _ = writeln!(out, "  generator   {t}");
                }
                let _ = writeln!(out, "witness       verified");
                out
            }
        }
        Command::Iso { a, b, max_nodes, seed } => {
            let da = load_target(a)?;
            let db = load_target(b)?;
            let budget = IsoBudget { max_nodes: *max_nodes, seed: *seed, ..IsoBudget::default() };
            let verdict = is_isomorphic_with(&da, &db, &budget)?;
            return Ok(iso_output(json, &verdict));
        }
        Command::Steenrod { degrees, extended } => {
            let ds: Vec<u32> = degrees
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad degree '{x}'"))))
                .collect::<Result<_>>()?;
            let mode = if *extended { SteenrodMode::Extended } else { SteenrodMode::Strict };
            let r = steenrod_decide(&ds, mode)?;
            if json {
                pretty(&serde_json::to_value(&r).expect("serializable"))
            } else {
                let mut s = serde_json::to_string(&r.decompositions).expect("serializable");
                s.push('\n');
                if r.conjectural_completeness {
                    s.push_str("(extended atom list: completeness is conjectural)\n");
                }
                s
            }
        }
        Command::IdentifyWeyl { file, seed } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let input: WeylPairFile =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let gens: Vec<F2Matrix> = input.generators.iter().map(|g| F2Matrix::from_strings(g)).collect::<Result<_>>()?;
            let m = F2Module::new(input.dim, gens)?;
            let ks = krull_schmidt(&m, *seed)?;
            let named = identify_weyl_pair(&m, &input.h6_trivial, *seed)?;
            if json {
                let summands: Vec<usize> = ks.summands.iter().map(|s| s.module.dim).collect();
                pretty(&json!({
                    "factors": named,
                    "summand_dims": summands,
                    "certified": ks.certified,
                }))
            } else {
                let names: Vec<&str> = named.iter().map(|f| f.name.as_str()).collect();
                format!("{}\n", names.join(" × "))
            }
        }
        Command::Catalog { max_rank, p } => {
            let keys: Vec<String> = catalog::list_entries(*max_rank, *p).iter().map(|k| k.to_string()).collect();
            if json {
                pretty(&json!(keys))
            } else {
                keys.iter().map(|k| format!("{k}\n")).collect()
            }
        }
    };
    Ok(Outcome::ok(out))
}

#[derive(serde::Deserialize)]
struct WeylPairFile {
    dim: usize,
    generators: Vec<Vec<String>>,
    #[serde(default)]
    h6_trivial: Vec<usize>,
}

fn iso_output(json: bool, v: &IsoVerdict) -> Outcome {
    match v {
        IsoVerdict::Isomorphic { witness, intertwiner_dim, stats } => {
            let text = if json {
                pretty(&json!({
                    "verdict": true,
                    "witness": matrix_rows(witness),
                    "witness_verified": true,
                    "intertwiner_dim": intertwiner_dim,
                    "nodes": stats.nodes,
                }))
            } else {
                let mut s = String::from("isomorphic: true\nwitness:\n");
                for r in matrix_rows(witness) {
                    let _ = writeln!(s, "  [{}]", r.join(", "));
                }
                s
            };
            Outcome::ok(text)
        }
        IsoVerdict::NotIsomorphic { field, reason, stats } => {
            let text = if json {
                pretty(&json!({
                    "verdict": false,
                    "differing_field": field,
                    "reason": reason,
                    "nodes": stats.nodes,
                }))
            } else {
                match field {
                    Some(f) => format!("isomorphic: false (fingerprints differ in {f})\n"),
                    None => format!("isomorphic: false ({reason})\n"),
                }
            };
            Outcome::ok(text)
        }
        IsoVerdict::Inconclusive { reason, stats } => {
            let text = if json {
                pretty(&json!({ "verdict": "inconclusive", "reason": reason, "nodes": stats.nodes }))
            } else {
                format!("isomorphic: inconclusive ({reason})\n")
            };
            Outcome { code: 2, stdout: text, stderr: format!("inconclusive: {reason}\n") }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Outcome {
        run(std::iter::once("rootdatum").chain(args.iter().copied()))
    }

    #[test]
    fn info_su4() {
        let o = call(&["info", "SU(4)@2", "--json"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["pi1"], json!([]));
        assert_eq!(v["center"], json!(["4"]));
        assert_eq!(v["weyl_order"], json!(24));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["info", "SU(1)@2"]).code, 1);
        assert_eq!(call(&["info", "nonsense"]).code, 1);
        assert_eq!(call(&["frobnicate"]).code, 1);
        assert_eq!(call(&["--help"]).code, 0);
        assert_eq!(call(&["iso", "SU(3)@2", "SU(3)@2", "--max-nodes", "0"]).code, 2);
        assert_eq!(exit_code(&Error::OrderBoundExceeded { bound: 1 }), 3);
        assert_eq!(exit_code(&Error::PrecisionExhausted { digits: 1 }), 3);
    }

    #[test]
    fn steenrod_compact() {
        assert_eq!(call(&["steenrod", "--degrees", "8,12,14,15"]).stdout, "[[\"DI4\"]]\n");
        assert_eq!(call(&["steenrod", "--degrees", "3"]).stdout, "[]\n");
    }
}
