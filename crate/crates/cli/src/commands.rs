use std::fmt::Write as _;
use std::path::Path;

use crmap_core::degeneracy::{
    degeneracy_exact, degeneracy_float, degeneracy_locus_sample_with, image_dimension, parse_grid, random_points, tangential_degeneracy, LocusEntry,
    FLOAT_MEMBERSHIP_TOL,
};
use crmap_core::families::{dangelo, effective_degree, explicit_map, faran, lebl, to_heisenberg, whitney};
use crmap_core::hypersurface::{float_residual, CayleyDirection, ModelKind, Side};
use crmap_core::io::{read_map, write_map};
use crmap_core::{
    cayley, family_thm_i, family_thm_ii, mapping_residual, normalize, CRMap,
    Error, FamilyIIParams, FamilyIParams, Mode, Rational, Result, Scalar, SourcePoint,
};
use serde_json::{json, Value};

use crate::{Cli, Command, ModelArg, SideArg};

/// Residual terms listed in text output before truncating.
const MAX_LISTED_TERMS: usize = 20;

/// Samples for float-mode verification.
const FLOAT_SAMPLES: usize = 100;

pub struct Outcome {
    pub pass: bool,
    pub json: Value,
    pub text: String,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mode: Mode = cli.mode.into();
    match &cli.command {
        Command::Verify { input } => verify(&read_map(input)?, mode, cli.seed, cli.residual_tol),
        Command::Degeneracy {
            input,
            point,
            grid,
            tangential,
        } => degeneracy(&read_map(input)?, point, grid.as_deref(), *tangential, mode, cli.seed, cli.rank_tol),
        Command::Normalize { input, out } => normalize_cmd(&read_map(input)?, out.as_deref()),
        Command::Family {
            name,
            mu,
            lambda,
            a,
            s,
            t,
            n,
            k,
            out,
        } => {
            let args = FamilyArgs {
                mu: mu.as_deref(),
                lambda: lambda.as_deref(),
                a: a.as_deref(),
                s: s.as_deref(),
                t: t.as_deref(),
                n: *n,
                k: *k,
            };
            family(name, &args, out.as_deref())
        }
        Command::Cayley { input, to, side, out } => cayley_cmd(&read_map(input)?, *to, *side, out.as_deref()),
        Command::Degree { input } => degree(&read_map(input)?, cli.seed),
        Command::Span { input } => span(&read_map(input)?),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn verify(h: &CRMap, mode: Mode, seed: u64, tol: f64) -> Result<Outcome> {
    match mode {
        Mode::Exact => {
            let r = mapping_residual(h)?;
            let terms: Vec<String> = r
                .poly
                .terms()
                .rev()
                .map(|(m, c)| crmap_core::Poly::term(*m, c.clone()).to_string())
                .collect();
            let mut text = if r.is_zero {
                "VERIFIED exact".to_string()
            } else {
                format!("NOT VERIFIED exact: residual has {} terms", terms.len())
            };
            for t in terms.iter().take(MAX_LISTED_TERMS) {
                let _ = write!(text, "\n  {t}");
            }
            if terms.len() > MAX_LISTED_TERMS {
                let _ = write!(text, "\n  ... {} more", terms.len() - MAX_LISTED_TERMS);
            }
            Ok(Outcome {
                pass: r.is_zero,
                json: json!({ "verified": r.is_zero, "residual_terms": terms }),
                text,
            })
        }
        Mode::Float => {
            let worst = float_residual(h, FLOAT_SAMPLES, seed)?;
            let ok = worst < tol;
            Ok(Outcome {
                pass: ok,
                json: json!({ "verified": ok, "samples": FLOAT_SAMPLES, "max_relative_residual": worst, "tolerance": tol }),
                text: format!(
                    "{} float: max relative residual {worst:.16e} over {FLOAT_SAMPLES} points (tolerance {tol:e})",
                    if ok { "VERIFIED" } else { "NOT VERIFIED" }
                ),
            })
        }
    }
}

/// Sphere maps are analysed in Heisenberg coordinates.
fn heisenberg_form(h: &CRMap) -> Result<(CRMap, bool)> {
    if h.source == ModelKind::Heisenberg && h.target == ModelKind::Heisenberg {
        Ok((h.clone(), false))
    } else {
        Ok((to_heisenberg(h)?, true))
    }
}

fn parse_point(h: &CRMap, src: &str, seed: u64, index: usize) -> Result<[Scalar; 2]> {
    if src.trim() == "random" {
        return random_points(h, 1, seed.wrapping_add(index as u64))
            .pop()
            .ok_or_else(|| Error::PoleAtPoint("no random point avoids the poles".into()));
    }
    let parts: Vec<&str> = src.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("point {src:?} must be z,w")));
    }
    Ok([parts[0].trim().parse()?, parts[1].trim().parse()?])
}

fn degeneracy(
    h: &CRMap,
    points: &[String],
    grid: Option<&str>,
    tangential: bool,
    mode: Mode,
    seed: u64,
    rank_tol: f64,
) -> Result<Outcome> {
    let (h, transported) = heisenberg_form(h)?;
    let mut pts = Vec::new();
    for (k, p) in points.iter().enumerate() {
        pts.push(parse_point(&h, p, seed, k)?);
    }
    if let Some(g) = grid {
        pts.extend(parse_grid(g)?);
    }
    if pts.is_empty() {
        pts.push([Scalar::zero(), Scalar::zero()]);
    }
    let mut text = String::new();
    if transported {
        text.push_str("(map transported to Heisenberg coordinates)\n");
    }
    if tangential {
        let mut entries = Vec::new();
        let mut failures = 0;
        for q in &pts {
            match tangential_degeneracy(&h, q, seed) {
                Ok(r) => {
                    let _ = writeln!(
                        text,
                        "point ({}, {}): tdeg={} k={} generic ranks {:?}",
                        q[0], q[1], r.tdeg, r.k, r.generic_ranks
                    );
                    entries.push(json!({ "report": to_json(&r) }));
                }
                Err(e) => {
                    failures += 1;
                    let _ = writeln!(text, "point ({}, {}): {e}", q[0], q[1]);
                    entries.push(json!({ "point": to_json(q), "error": e.to_string() }));
                }
            }
        }
        if failures == pts.len() {
            return Err(Error::PoleOnSegre);
        }
        return Ok(Outcome {
            pass: true,
            json: json!({ "transported": transported, "tangential": entries }),
            text: text.trim_end().to_string(),
        });
    }
    let source: Vec<SourcePoint> = pts
        .iter()
        .map(|p| match mode {
            Mode::Exact => SourcePoint::Exact(p.clone()),
            Mode::Float => SourcePoint::Exact(p.clone()).to_float_point(),
        })
        .collect();
    let report = degeneracy_locus_sample_with(&h, &source, rank_tol);
    if let ([LocusEntry { error: Some(_), .. }], [p]) = (report.entries.as_slice(), pts.as_slice()) {
        // a lone point that fails is an error of the command, with its own kind
        return Err(match mode {
            Mode::Exact => degeneracy_exact(&h, p),
            Mode::Float => degeneracy_float(&h, &source[0], rank_tol, FLOAT_MEMBERSHIP_TOL),
        }
        .expect_err("failed before"));
    }
    for (e, p) in report.entries.iter().zip(&pts) {
        match (&e.report, &e.error) {
            (Some(r), _) => {
                let _ = write!(text, "point ({}, {}): s={} k0={} ranks {:?}", p[0], p[1], r.s, r.k0, r.ranks);
                if let Some(g) = &r.gap {
                    let _ = write!(
                        text,
                        " min kept sv {:.16e} max dropped sv {:.16e}",
                        g.min_kept, g.max_dropped
                    );
                }
                text.push('\n');
            }
            (None, err) => {
                let _ = writeln!(text, "point ({}, {}): {}", p[0], p[1], err.as_deref().unwrap_or("failed"));
            }
        }
    }
    if report.entries.len() > 1 {
        if let Some(g) = report.generic_s {
            let _ = writeln!(text, "generic s={g}, exceptional points {:?}", report.exceptional);
        }
    }
    if report.entries.iter().all(|e| e.report.is_none()) {
        return Err(Error::PoleAtPoint(
            report.entries[0].error.clone().unwrap_or_else(|| "every point failed".into()),
        ));
    }
    Ok(Outcome {
        pass: true,
        json: json!({ "transported": transported, "locus": to_json(&report) }),
        text: text.trim_end().to_string(),
    })
}

fn normalize_cmd(h: &CRMap, out: Option<&Path>) -> Result<Outcome> {
    let (h, transported) = heisenberg_form(h)?;
    let cert = normalize(&h)?;
    if let Some(path) = out {
        write_map(path, &cert.normalized)?;
    }
    let c = cert.conditions.as_vec();
    let labels = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii"];
    let mut text = String::new();
    for (l, v) in labels.iter().zip(&c) {
        let v = match v {
            Some(true) => "holds",
            Some(false) => "FAILS",
            None => "n/a",
        };
        let _ = writeln!(text, "({l}) {v}");
    }
    let _ = writeln!(text, "{} normalization steps", cert.steps.len());
    if cert.phase_step_skipped {
        text.push_str("phase step skipped (f1^(0,2) = 0)\n");
    }
    if out.is_none() {
        for (k, p) in cert.normalized.numerators().iter().enumerate() {
            let _ = writeln!(text, "P{} = {p}", k + 1);
        }
        let _ = writeln!(text, "delta = {}", cert.normalized.denominator());
    }
    Ok(Outcome {
        pass: cert.conditions.all(),
        json: json!({ "transported": transported, "certificate": to_json(&cert) }),
        text: text.trim_end().to_string(),
    })
}

struct FamilyArgs<'a> {
    mu: Option<&'a str>,
    lambda: Option<&'a str>,
    a: Option<&'a str>,
    s: Option<&'a str>,
    t: Option<&'a str>,
    n: Option<usize>,
    k: Option<usize>,
}

fn required<'a>(v: Option<&'a str>, flag: &str, family: &str) -> Result<&'a str> {
    v.ok_or_else(|| Error::Parse(format!("{family} needs --{flag}")))
}

fn rational(src: &str) -> Result<Rational> {
    src.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{src:?} is not a rational p/q")))
}

fn family(name: &str, args: &FamilyArgs, out: Option<&Path>) -> Result<Outcome> {
    let need_n = || args.n.ok_or_else(|| Error::Parse(format!("{name} needs --N")));
    let (h, params) = match name {
        "thm-i" => {
            let p = FamilyIParams::new(
                rational(required(args.mu, "mu", name)?)?,
                required(args.lambda, "lambda", name)?.parse()?,
                need_n()?,
            )?;
            (family_thm_i(&p)?, to_json(&p))
        }
        "thm-ii" => {
            let p = FamilyIIParams::new(
                rational(required(args.a, "a", name)?)?,
                required(args.lambda, "lambda", name)?.parse()?,
                need_n()?,
            )?;
            (family_thm_ii(&p)?, to_json(&p))
        }
        "lebl" => {
            let s = rational(required(args.s, "s", name)?)?;
            let t = rational(required(args.t, "t", name)?)?;
            let m = need_n()?;
            let params = json!({ "s": s.to_string(), "t": t.to_string(), "N": m });
            (lebl(&s, &t, m)?, params)
        }
        "dangelo" => {
            let s = rational(required(args.s, "s", name)?)?;
            let params = json!({ "s": s.to_string() });
            (dangelo(&s)?, params)
        }
        "whitney" => (whitney(), Value::Null),
        "faran" => {
            let k = args.k.ok_or_else(|| Error::Parse("faran needs --k 1..4".into()))?;
            (faran(k)?, json!({ "k": k }))
        }
        "linear" => {
            let n = need_n()?;
            (CRMap::linear_embedding(n)?, json!({ "N": n }))
        }
        other => {
            let default = if other.ends_with('n') { 5 } else { 4 };
            let n = args.n.unwrap_or(default);
            let h = explicit_map(other, n).map_err(|e| match e {
                Error::Parse(_) => Error::Parse(format!("unknown family {other:?}")),
                e => e,
            })?;
            (h, json!({ "N": n }))
        }
    };
    if let Some(path) = out {
        write_map(path, &h)?;
    }
    let text = match out {
        Some(path) => format!("wrote {name} (N = {}) to {}", h.target_dim(), path.display()),
        None => crmap_core::io::map_to_json(&h),
    };
    Ok(Outcome {
        pass: true,
        json: json!({ "params": params, "map": to_json(&crmap_core::MapFile::from(&h)) }),
        text,
    })
}

fn cayley_cmd(h: &CRMap, to: Option<ModelArg>, side: SideArg, out: Option<&Path>) -> Result<Outcome> {
    let to = to.unwrap_or(match h.source {
        ModelKind::Sphere => ModelArg::Heisenberg,
        ModelKind::Heisenberg => ModelArg::Sphere,
    });
    let direction = match to {
        ModelArg::Heisenberg => CayleyDirection::SphereToHeisenberg,
        ModelArg::Sphere => CayleyDirection::HeisenbergToSphere,
    };
    let side = match side {
        SideArg::Source => Side::Source,
        SideArg::Target => Side::Target,
        SideArg::Both => Side::Both,
    };
    let c = cayley(h, direction, side)?;
    if let Some(path) = out {
        write_map(path, &c)?;
    }
    let text = match out {
        Some(path) => format!("wrote {} -> {} map to {}", c.source, c.target, path.display()),
        None => crmap_core::io::map_to_json(&c),
    };
    Ok(Outcome {
        pass: true,
        json: json!({ "map": to_json(&crmap_core::MapFile::from(&c)) }),
        text,
    })
}

fn degree(h: &CRMap, seed: u64) -> Result<Outcome> {
    let d = effective_degree(h, seed);
    let mut text = d.degree.to_string();
    if d.reducible() {
        let _ = write!(
            text,
            " (as presented; common factor of degree {} on random lines, effective degree {})",
            d.common_factor_degree, d.effective
        );
    }
    Ok(Outcome {
        pass: true,
        json: json!({ "degree": d.degree, "common_factor_degree": d.common_factor_degree, "effective": d.effective, "reducible": d.reducible() }),
        text,
    })
}

fn span(h: &CRMap) -> Result<Outcome> {
    let dim = image_dimension(h);
    Ok(Outcome {
        pass: true,
        json: json!({ "image_dimension": dim }),
        text: dim.to_string(),
    })
}
