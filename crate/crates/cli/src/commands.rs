use std::collections::BTreeSet;
use std::fmt::Write;
use std::io::Read;

use serde_json::{json, Value as Json};

use prering::derivatives::{self, DiniKind, Grid, Scalar};
use prering::dsl;
use prering::error::{Error, Result};
use prering::exec::Execution;
use prering::expr::Side;
use prering::harness::{self, suite, MvtInstance};
use prering::measures::Measure;
use prering::piecewise::{PiecewiseFunc, Value};
use prering::prering::{Interval, SimpleSet};
use prering::rational::{self, Rational};
use prering::report::Report;
use prering::riesz::{self, Cover};

use crate::{Cli, Verb};

pub struct Outcome {
    pub json: Json,
    pub text: String,
    pub pass: bool,
}

fn func(arg: &str) -> Result<PiecewiseFunc> {
    if arg == "-" {
        let mut src = String::new();
        std::io::stdin()
            .read_to_string(&mut src)
            .map_err(|e| Error::InvalidArgument(format!("cannot read stdin: {e}")))?;
        return dsl::parse_piecewise(&src);
    }
    dsl::parse_piecewise(arg)
}

fn points(list: &str) -> Result<BTreeSet<Rational>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(rational::parse)
        .collect()
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Exact(q) => {
            json!({ "exact": q.0.iter().map(rational::format).collect::<Vec<_>>(), "approx": q.to_f64() })
        }
        Value::Approx(x) => json!({ "approx": x }),
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Exact(q) => q.to_string(),
        Value::Approx(x) if x.len() == 1 => format!("{:.12}", x[0]),
        Value::Approx(x) => format!("{x:.12?}"),
    }
}

fn report_text(r: &Report) -> String {
    let c = &r.conclusion;
    let side = |exact: &Option<String>, f: f64| match exact {
        Some(s) => format!("{s} ({f:.6})"),
        None => format!("{f:.12}"),
    };
    let mut s = format!(
        "{} [{}]: lhs {} rhs {} tol {:e} -> {}\n",
        r.theorem,
        r.instance,
        side(&c.lhs_exact, c.lhs),
        side(&c.rhs_exact, c.rhs),
        c.tol,
        if c.pass { "PASS" } else { "FAIL" }
    );
    if r.premise.n > 0 {
        let worst = r
            .premise
            .worst_margin
            .map_or("none".into(), |m| format!("{m:.3e}"));
        let _ = writeln!(
            s,
            "  premise: {} samples, worst margin {worst}",
            r.premise.n
        );
    }
    s
}

fn from_report(r: Report) -> Outcome {
    Outcome {
        text: report_text(&r),
        pass: r.passed(),
        json: serde_json::to_value(r.summary()).expect("serializable"),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.verb {
        Verb::Derive { f, x } => derive(&func(f)?, &rational::parse(x)?, cli.tol),
        Verb::Mvt {
            f,
            g,
            a,
            b,
            except,
            cartan,
        } => {
            let interval = Interval::closed(rational::parse(a)?, rational::parse(b)?)?;
            let inst = MvtInstance::new("cli", func(f)?, func(g)?, interval, points(except)?)?;
            let r = if *cartan {
                harness::check_cartan(&inst, cli.samples)?
            } else {
                harness::check_strong_mvt(&inst, cli.samples)?
            };
            Ok(from_report(r))
        }
        Verb::Ftc { f, t1, t2, except } => Ok(from_report(harness::check_ftc(
            &func(f)?,
            &rational::parse(t1)?,
            &rational::parse(t2)?,
            &points(except)?,
        )?)),
        Verb::Cantor { depth } => cantor(*depth),
        Verb::Riesz {
            cover,
            levels,
            x,
            terms,
        } => riesz_cmd(cover, *levels, &rational::parse(x)?, *terms, cli.samples),
        Verb::Measure { kind, set } => measure(kind, &set.parse()?),
        Verb::Integrate { f, t1, t2 } => {
            let (t1, t2) = (rational::parse(t1)?, rational::parse(t2)?);
            let v = harness::integrate_piecewise(&func(f)?, &t1, &t2)?;
            Ok(Outcome {
                text: format!("{}\n", value_text(&v)),
                json: json!({ "t1": rational::format(&t1), "t2": rational::format(&t2), "integral": value_json(&v) }),
                pass: true,
            })
        }
        Verb::Suite { size, sequential } => {
            let cfg = suite::SuiteConfig {
                seed: cli.seed,
                per_family: *size,
                samples: cli.samples,
                exec: if *sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
            };
            let out = suite::run_suite(&cfg);
            let mut text = String::new();
            for e in &out.entries {
                match &e.report {
                    Some(r) => {
                        let _ = write!(text, "{:<28} {}", e.id, report_text(r));
                    }
                    None => {
                        let _ = writeln!(
                            text,
                            "{:<28} {:?}: {}",
                            e.id,
                            e.status,
                            e.detail.as_deref().unwrap_or("")
                        );
                    }
                }
            }
            let _ = writeln!(
                text,
                "{} instances: {} pass, {} fail, {} premise failed, {} errors",
                out.entries.len(),
                out.count(suite::Status::Pass),
                out.count(suite::Status::Fail),
                out.count(suite::Status::PremiseFailed),
                out.count(suite::Status::Error)
            );
            Ok(Outcome {
                text,
                pass: out.pass,
                json: serde_json::to_value(&out).expect("serializable"),
            })
        }
    }
}

fn derive(f: &PiecewiseFunc, x: &Rational, tol: f64) -> Result<Outcome> {
    let exact = |side| match side {
        Side::Right => derivatives::exact_right_derivative(f, x),
        Side::Left => derivatives::exact_left_derivative(f, x),
    };
    let (right, left) = (exact(Side::Right).ok(), exact(Side::Left).ok());
    let xf = rational::to_f64(x);
    let mut estimates = Vec::new();
    if f.dim() == 1 {
        for kind in [
            DiniKind::UpperRight,
            DiniKind::LowerRight,
            DiniKind::UpperLeft,
            DiniKind::LowerLeft,
        ] {
            if let Ok(e) = derivatives::dini(&Scalar(f), xf, kind, Grid::default()) {
                estimates.push(e);
            }
        }
    }
    for side in [Side::Right, Side::Left] {
        if let Ok(e) = derivatives::lipschitz_one_sided(f, xf, side, Grid::default()) {
            estimates.push(e);
        }
    }
    // The estimator must agree with the exact right derivative's norm.
    let lip_right = estimates
        .iter()
        .find(|e| e.kind == DiniKind::LipRight)
        .map(|e| e.value);
    let pass = match (&right, lip_right) {
        (Some(v), Some(l)) => (v.norm_f64() - l).abs() <= tol,
        _ => true,
    };
    let mut text = format!("x = {}\n", rational::format(x));
    let opt = |v: &Option<Value>| v.as_ref().map_or("unavailable".into(), value_text);
    let _ = writeln!(text, "f'_r = {}", opt(&right));
    let _ = writeln!(text, "f'_l = {}", opt(&left));
    for e in &estimates {
        let flag = if e.capped {
            " (capped: possibly infinite)"
        } else {
            ""
        };
        let _ = writeln!(text, "{:<4} ~ {:.9}{flag}", e.kind.name(), e.value);
    }
    let _ = writeln!(text, "{}", if pass { "PASS" } else { "FAIL" });
    Ok(Outcome {
        json: json!({
            "x": rational::format(x),
            "right": right.as_ref().map(value_json),
            "left": left.as_ref().map(value_json),
            "estimates": estimates,
            "tol": tol,
            "pass": pass,
        }),
        text,
        pass,
    })
}

fn cantor(depth: u32) -> Result<Outcome> {
    let level = riesz::cantor_level(depth)?;
    let total = level.length();
    let set = level.set();
    let mut text = format!(
        "F_{depth}: {} intervals, total length {}\n",
        level.len(),
        rational::format(&total)
    );
    if level.len() <= 64 {
        let _ = writeln!(text, "{set}");
    }
    Ok(Outcome {
        json: json!({ "depth": depth, "parts": level.len(), "total": rational::format(&total), "set": set }),
        text,
        pass: true,
    })
}

fn riesz_cmd(
    cover: &str,
    levels: usize,
    x: &Rational,
    terms: Option<usize>,
    samples: usize,
) -> Result<Outcome> {
    let cover = if cover == "cantor-null" {
        riesz::cantor_null_cover(levels)?
    } else {
        let text = std::fs::read_to_string(cover)
            .map_err(|e| Error::InvalidArgument(format!("cannot read cover file {cover}: {e}")))?;
        Cover::parse(&text)?
    };
    let n = terms.or(cover.len()).ok_or_else(|| {
        Error::InvalidArgument("--terms is required for an infinite cover".into())
    })?;
    let (g, tail) = riesz::riesz_g(&cover, x, n);
    let mut text = format!(
        "{cover}\ng_{n}({}) = {} (tail <= {})\n",
        rational::format(x),
        rational::format(&g),
        rational::format(&tail)
    );
    let mut out = json!({
        "x": rational::format(x),
        "terms": n,
        "g": rational::format(&g),
        "tail_bound": rational::format(&tail),
    });
    let mut pass = true;
    match riesz::blowup_witness(&cover, x, n) {
        Ok(w) => {
            let r = riesz::verify_blowup(&cover, x, &w, samples.min(64))?;
            let _ = writeln!(
                text,
                "witness: k = {} intervals contain ({} +- {})",
                w.k,
                rational::format(x),
                rational::format(&w.delta)
            );
            text.push_str(&report_text(&r));
            pass = r.passed();
            out["witness"] = json!({ "k": w.k, "delta": rational::format(&w.delta), "n": w.n });
            out["report"] = serde_json::to_value(r.summary()).expect("serializable");
        }
        Err(Error::NotCovered(..)) => {
            let _ = writeln!(
                text,
                "no witness: x lies in none of the first {n} intervals"
            );
            out["witness"] = Json::Null;
        }
        Err(e) => return Err(e),
    }
    out["pass"] = pass.into();
    Ok(Outcome {
        json: out,
        text,
        pass,
    })
}

fn parse_measure(kind: &str) -> Result<Measure> {
    let (name, arg) = kind.split_once(':').unwrap_or((kind, ""));
    match name {
        "riemann" => Ok(Measure::Riemann),
        "dirac" => Ok(Measure::Dirac(rational::parse(arg)?)),
        "counting" if arg.contains('=') => Measure::counting(
            arg.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|pair| {
                    let (x, w) = pair.split_once('=').ok_or_else(|| {
                        Error::InvalidArgument(format!("expected x=w, got {pair:?}"))
                    })?;
                    Ok((rational::parse(x)?, rational::parse(w)?))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        // Otherwise a TSV file of `point<TAB>weight` lines.
        "counting" => {
            let text = std::fs::read_to_string(arg).map_err(|e| {
                Error::InvalidArgument(format!("cannot read counting file {arg}: {e}"))
            })?;
            Measure::counting(
                text.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(|line| {
                        let mut cols = line.split('\t');
                        match (cols.next(), cols.next(), cols.next()) {
                            (Some(x), Some(w), None) => {
                                Ok((rational::parse(x)?, rational::parse(w)?))
                            }
                            _ => Err(Error::InvalidArgument(format!(
                                "expected point<TAB>weight, got {line:?}"
                            ))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        "stieltjes" => Measure::stieltjes(func(arg)?, []),
        "distribution" => Measure::distribution(func(arg)?),
        _ => Err(Error::InvalidArgument(format!(
            "unknown measure {name:?}; expected riemann, dirac, counting, stieltjes or distribution"
        ))),
    }
}

fn measure(kind: &str, set: &SimpleSet) -> Result<Outcome> {
    let m = parse_measure(kind)?;
    let v = m.eval(set)?;
    Ok(Outcome {
        text: format!("{m}({set}) = {}\n", rational::format(&v)),
        json: json!({ "measure": m.to_string(), "set": set, "value": rational::format(&v) }),
        pass: true,
    })
}
