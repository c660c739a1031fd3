//! Command-line front end: parse an arrangement file, build the matching,
//! and report combinatorial and homological invariants.
//!
//! Subcommands: `info`, `betti`, `matching`, `brieskorn`, `local-homology`.
//! Exit codes: 0 success, 1 usage error, 2 parse error, 3 verification
//! failure, 4 unsupported dimension.

use arrmorse::error::Error;
use arrmorse::faces::Geometry;
use arrmorse::laurent::LaurentPoly;
use arrmorse::matching::{assemble_matching, verify_matching, BasePoint, Matching};
use arrmorse::morse::{betti_numbers, brieskorn_counts, local_homology};
use arrmorse::rational::{fmt_rat, parse_rat, QVec};
use arrmorse::salvetti::CellComplex;
use std::process::ExitCode;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    JsonLines,
}

struct Config {
    command: String,
    input: String,
    point: Option<QVec>,
    audit: bool,
    seed_perturb: usize,
    specialize: Option<String>,
    format: Format,
}

const USAGE: &str = "usage: arrmorse <command> <file> [options]

commands:
  info            counts, Mobius table and the Poincare polynomial
  betti           Betti numbers from the critical cells
  matching        matched pairs, critical cells and the verification report
  brieskorn       per-flat critical counts with Mobius and recursive checks
  local-homology  twisted Morse boundary matrices (plane arrangements);
                  with --specialize t also the H1 invariant factors

options:
  --point q1 .. qn   rational base point (must be generic)
  --audit            enable the exhaustive double-characterization checks
  --seed-perturb K   attempts when searching for a generic point (default 64)
  --specialize t     specialize every t_i to t and report H1
  --format FMT       text (default) or json-lines";

fn parse_args(args: &[String]) -> Result<Config, String> {
    if args.len() < 2 {
        return Err(USAGE.to_string());
    }
    let command = args[0].clone();
    let input = args[1].clone();
    let mut cfg = Config {
        command,
        input,
        point: None,
        audit: false,
        seed_perturb: 64,
        specialize: None,
        format: Format::Text,
    };
    let mut i = 2;
    while i < args.len() {
        match args[i].as_str() {
            "--point" => {
                let mut coords = Vec::new();
                while i + 1 < args.len() && !args[i + 1].starts_with("--") {
                    i += 1;
                    let q = parse_rat(&args[i])
                        .ok_or_else(|| format!("malformed rational `{}`", args[i]))?;
                    coords.push(q);
                }
                if coords.is_empty() {
                    return Err("--point needs coordinates".into());
                }
                cfg.point = Some(coords);
            }
            "--audit" | "--verify" => cfg.audit = true,
            "--seed-perturb" => {
                i += 1;
                cfg.seed_perturb = args
                    .get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or("--seed-perturb needs a number")?;
            }
            "--specialize" => {
                i += 1;
                let v = args.get(i).ok_or("--specialize needs a value")?;
                if v != "t" {
                    return Err("only `--specialize t` is supported".into());
                }
                cfg.specialize = Some(v.clone());
            }
            "--format" => {
                i += 1;
                cfg.format = match args.get(i).map(|s| s.as_str()) {
                    Some("text") => Format::Text,
                    Some("json-lines") => Format::JsonLines,
                    _ => return Err("--format is `text` or `json-lines`".into()),
                };
            }
            other => return Err(format!("unknown option `{other}`\n\n{USAGE}")),
        }
        i += 1;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cfg = match parse_args(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(1);
        }
    };
    match run(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse { .. } => 2,
                Error::Verification(_) => 3,
                Error::UnsupportedDimension(_) => 4,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cfg: &Config) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(&cfg.input).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", cfg.input),
    })?;
    let arr = arrmorse::parse_arrangement(&text)?;
    let geom = Geometry::new(arr);

    if cfg.command == "info" {
        print_info(cfg, &geom);
        return Ok(ExitCode::SUCCESS);
    }

    let base = resolve_base_point(cfg, &geom)?;
    match cfg.command.as_str() {
        "betti" => {
            let b = betti_numbers(&geom, &base);
            emit_point(cfg, &base);
            match cfg.format {
                Format::Text => {
                    let parts: Vec<String> = b.iter().map(|v| v.to_string()).collect();
                    println!("b = {}", parts.join(" "));
                }
                Format::JsonLines => {
                    println!(
                        "{{\"record\":\"betti\",\"values\":[{}]}}",
                        b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        "matching" => {
            let complex = CellComplex::build(&geom);
            let matching = assemble_matching(&geom, &complex, &base)?;
            emit_point(cfg, &base);
            print_matching(cfg, &geom, &complex, &base, &matching)
        }
        "brieskorn" => {
            let rows = brieskorn_counts(&geom, &base)?;
            emit_point(cfg, &base);
            let mut all_ok = true;
            for r in &rows {
                let flat = &geom.flats.flats[r.flat];
                let label = support_label(flat.support.iter());
                all_ok &= r.passed;
                match cfg.format {
                    Format::Text => println!(
                        "flat {} codim {}: count {} |mu| {} betti {} {}",
                        label,
                        flat.codim,
                        r.count,
                        r.mobius_abs,
                        r.sub_betti,
                        if r.passed { "ok" } else { "FAIL" }
                    ),
                    Format::JsonLines => println!(
                        "{{\"record\":\"brieskorn\",\"flat\":\"{}\",\"codim\":{},\"count\":{},\"mobius\":{},\"betti\":{},\"ok\":{}}}",
                        label, flat.codim, r.count, r.mobius_abs, r.sub_betti, r.passed
                    ),
                }
            }
            if all_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::Verification("brieskorn counts disagree".into()))
            }
        }
        "local-homology" => {
            let complex = CellComplex::build(&geom);
            let matching = assemble_matching(&geom, &complex, &base)?;
            let lh = local_homology(&geom, &complex, &base, &matching)?;
            emit_point(cfg, &base);
            print_matrix(cfg, &geom, &complex, "d1", lh.morse.critical_at(1), lh.morse.critical_at(0), &lh.d1);
            print_matrix(cfg, &geom, &complex, "d2", lh.morse.critical_at(2), lh.morse.critical_at(1), &lh.d2);
            if cfg.specialize.is_some() {
                match cfg.format {
                    Format::Text => println!("H1 = {}", lh.invariants),
                    Format::JsonLines => {
                        let f: Vec<String> = lh
                            .invariants
                            .factors
                            .iter()
                            .map(|d| format!("\"{d}\""))
                            .collect();
                        println!(
                            "{{\"record\":\"h1\",\"factors\":[{}],\"free_rank\":{}}}",
                            f.join(","),
                            lh.invariants.free_rank
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        other => {
            eprintln!("unknown command `{other}`\n\n{USAGE}");
            Ok(ExitCode::from(1))
        }
    }
}

fn resolve_base_point(cfg: &Config, geom: &Geometry) -> Result<BasePoint, Error> {
    if let Some(p) = &cfg.point {
        if p.len() != geom.arr.dim {
            return Err(Error::Usage(format!(
                "--point has {} coordinates, arrangement lives in dimension {}",
                p.len(),
                geom.arr.dim
            )));
        }
        return BasePoint::new(geom, p);
    }
    let hint = geom
        .arr
        .basepoint_hint
        .clone()
        .unwrap_or_else(|| vec![arrmorse::rational::rat(0); geom.arr.dim]);
    let x0 = geom.find_generic_point(&hint, cfg.seed_perturb)?;
    BasePoint::new(geom, &x0)
}

fn emit_point(cfg: &Config, base: &BasePoint) {
    let coords: Vec<String> = base.x0.iter().map(fmt_rat).collect();
    match cfg.format {
        Format::Text => println!("basepoint: {}", coords.join(" ")),
        Format::JsonLines => println!(
            "{{\"record\":\"basepoint\",\"coords\":[{}]}}",
            coords.iter().map(|c| format!("\"{c}\"")).collect::<Vec<_>>().join(",")
        ),
    }
}

fn support_label<'a>(support: impl Iterator<Item = &'a usize>) -> String {
    let inner: Vec<String> = support.map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn print_info(cfg: &Config, geom: &Geometry) {
    let oracle = geom.flats.poincare_oracle();
    let poincare = poly_string(&oracle);
    match cfg.format {
        Format::Text => {
            println!("dimension: {}", geom.arr.dim);
            println!("hyperplanes: {}", geom.arr.size());
            println!("flats: {}", geom.flats.flats.len());
            println!("faces: {}", geom.faces.len());
            println!("chambers: {}", geom.chambers.len());
            for (flat, mu) in geom.flats.flats.iter().zip(&geom.flats.mobius) {
                println!(
                    "mobius {} codim {} = {}",
                    support_label(flat.support.iter()),
                    flat.codim,
                    mu
                );
            }
            println!("poincare: {poincare}");
        }
        Format::JsonLines => {
            println!(
                "{{\"record\":\"info\",\"dimension\":{},\"hyperplanes\":{},\"flats\":{},\"faces\":{},\"chambers\":{},\"poincare\":\"{}\"}}",
                geom.arr.dim,
                geom.arr.size(),
                geom.flats.flats.len(),
                geom.faces.len(),
                geom.chambers.len(),
                poincare
            );
            for (flat, mu) in geom.flats.flats.iter().zip(&geom.flats.mobius) {
                println!(
                    "{{\"record\":\"mobius\",\"flat\":\"{}\",\"codim\":{},\"value\":{}}}",
                    support_label(flat.support.iter()),
                    flat.codim,
                    mu
                );
            }
        }
    }
}

fn poly_string(coeffs: &[u64]) -> String {
    let mut parts = Vec::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let part = match k {
            0 => c.to_string(),
            1 => {
                if c == 1 {
                    "t".into()
                } else {
                    format!("{c}t")
                }
            }
            _ => {
                if c == 1 {
                    format!("t^{k}")
                } else {
                    format!("{c}t^{k}")
                }
            }
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn print_matching(
    cfg: &Config,
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    matching: &Matching,
) -> Result<ExitCode, Error> {
    let chamber_label = |c: usize| format!("C{}", geom.faces[c].sign_string());
    for &(u, l) in &matching.pairs {
        let (c, e) = matching.eta[u];
        match cfg.format {
            Format::Text => println!(
                "PAIR {} {} fiber=({},{})",
                complex.label(geom, u),
                complex.label(geom, l),
                chamber_label(c),
                chamber_label(e)
            ),
            Format::JsonLines => println!(
                "{{\"record\":\"pair\",\"upper\":\"{}\",\"lower\":\"{}\",\"fiber_c\":\"{}\",\"fiber_e\":\"{}\"}}",
                complex.label(geom, u),
                complex.label(geom, l),
                chamber_label(c),
                chamber_label(e)
            ),
        }
    }
    for &id in &matching.critical {
        let codim = complex.cells[id].dim;
        match cfg.format {
            Format::Text => {
                println!("CRITICAL {} codim={}", complex.label(geom, id), codim)
            }
            Format::JsonLines => println!(
                "{{\"record\":\"critical\",\"cell\":\"{}\",\"codim\":{}}}",
                complex.label(geom, id),
                codim
            ),
        }
    }
    let report = verify_matching(geom, complex, base, matching);
    for c in &report.checks {
        match cfg.format {
            Format::Text => println!(
                "check {}: {}{}",
                c.name,
                if c.passed { "ok" } else { "FAIL" },
                if c.details.is_empty() { String::new() } else { format!(" ({})", c.details) }
            ),
            Format::JsonLines => println!(
                "{{\"record\":\"check\",\"name\":\"{}\",\"passed\":{},\"details\":\"{}\"}}",
                c.name, c.passed, c.details
            ),
        }
    }
    if cfg.audit {
        base.audit_valid_order(geom)?;
        for cell in 0..complex.len() {
            let c = &complex.cells[cell];
            let by_def = arrmorse::matching::class_chamber(geom, base, c.chamber, c.face);
            let by_scan = arrmorse::matching::class_chamber_by_scan(geom, base, c.chamber, c.face);
            if by_def != by_scan {
                return Err(Error::Verification(
                    "class-chamber characterizations disagree".into(),
                ));
            }
        }
        match cfg.format {
            Format::Text => println!("audit: ok"),
            Format::JsonLines => println!("{{\"record\":\"audit\",\"passed\":true}}"),
        }
    }
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Error::Verification(report.to_string()))
    }
}

fn print_matrix(
    cfg: &Config,
    geom: &Geometry,
    complex: &CellComplex,
    name: &str,
    rows: &[usize],
    cols: &[usize],
    mat: &[Vec<LaurentPoly>],
) {
    let col_labels: Vec<String> = cols.iter().map(|&id| complex.label(geom, id)).collect();
    match cfg.format {
        Format::Text => {
            println!("{name} columns: [{}]", col_labels.join(", "));
            for (r, &id) in rows.iter().enumerate() {
                let entries: Vec<String> =
                    mat[r].iter().map(|p| p.to_string()).collect();
                println!("{name} row {}: [{}]", complex.label(geom, id), entries.join(", "));
            }
        }
        Format::JsonLines => {
            for (r, &id) in rows.iter().enumerate() {
                for (c, p) in mat[r].iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    println!(
                        "{{\"record\":\"entry\",\"matrix\":\"{}\",\"row\":\"{}\",\"col\":\"{}\",\"value\":\"{}\"}}",
                        name,
                        complex.label(geom, id),
                        col_labels[c],
                        p
                    );
                }
            }
        }
    }
}
