use std::fs;

use serde::Serialize;
use serde_json::{json, Value};

use delta_lab::acceptance::{run_criterion, AcceptanceReport, CRITERIA};
use delta_lab::appendix::{
    conic_det, diamond_scan, family_sum, gauss_sum_check, n_counts, s_p_f2, salie_identity_check, Cubic,
};
use delta_lab::arith::{factor, rem};
use delta_lab::counting::{
    count_gcd_strata, count_weighted_naive, hooley_st, rho_g, sigma_partial, sigma_partial_window, CountReport,
};
use delta_lab::densities::{
    lattice_limit_sum, predicted_constants, sigma_inf_leray, sigma_inf_slab, sigma_inf_slab_extrapolated,
    sigma_lattice, theta, Profile,
};
use delta_lab::dualgeom::{classify_dual_point, count_dual_points, dual_form, enumerate_dual_points, g_form};
use delta_lab::expsums::{
    brute_force_full, closed_form_prime, lemma_audit, naive_definition, prime_power, reduced_sum, Evaluator, LemmaId,
};
use delta_lab::{Error, Freq, WeightSpec};

use crate::{Cli, Cmd, CubicKind, DensityKind, ExpsumMethod, Format, ProfileKind, WeightArgs};

const WORKERS_ENV: &str = "DELTA_LAB_WORKERS";

struct Outcome {
    text: String,
    /// Acceptance failure to report with exit code 2.
    failure: Option<String>,
}

fn ok(text: String) -> Result<Outcome, Error> {
    Ok(Outcome { text, failure: None })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable output");
    s.push('\n');
    s
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn json_only(format: Format, cmd: &str) -> Result<(), Error> {
    if format == Format::Csv {
        return Err(invalid(format!("{cmd} has no CSV output; CSV is for count and series sweeps")));
    }
    Ok(())
}

fn weight(w: WeightArgs) -> Result<WeightSpec, Error> {
    let profile = match w.profile {
        ProfileKind::Bump => Profile::Bump,
        ProfileKind::Plateau => Profile::Plateau,
    };
    WeightSpec::new(w.delta0, w.scale, profile)
}

fn init_workers(flag: Option<usize>) -> Result<(), Error> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| invalid(format!("{WORKERS_ENV} must be a positive integer")))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(invalid("worker count must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Invariant(format!("worker pool: {e}")))?;
    }
    Ok(())
}

/// Dispatches and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let result = init_workers(cli.workers).and_then(|_| dispatch(&cli));
    match result {
        Ok(Outcome { text, failure }) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 1;
            }
            match failure {
                Some(msg) => {
                    eprintln!("acceptance failure: {msg}");
                    2
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Expsum { q, m, n, method } => {
            json_only(cli.format, "expsum")?;
            expsum(*q, &Freq::new(*m, *n), *method)
        }
        Cmd::Audit { lemma, box_h, qmax } => {
            json_only(cli.format, "audit")?;
            let id: LemmaId = lemma.parse()?;
            let r = lemma_audit(id, *box_h, *qmax)?;
            let failure = (r.violations > 0).then(|| format!("{id}: {} violations", r.violations));
            Ok(Outcome { text: to_json(&r), failure })
        }
        Cmd::Dual { height, list, m, n } => {
            json_only(cli.format, "dual")?;
            dual(*height, *list, *m, *n)
        }
        Cmd::Density { method, eps, samples, t, h, u, weight: w } => {
            json_only(cli.format, "density")?;
            density(*method, *eps, *samples, *t, *h, *u, weight(*w)?, cli.seed)
        }
        Cmd::Count { b, theta, naive, weight: w } => count(b, *theta, *naive, weight(*w)?, cli.format),
        Cmd::Series { x, lo } => {
            let fit = match lo {
                Some(lo) => sigma_partial_window(*lo, *x)?,
                None => sigma_partial(*x)?,
            };
            match cli.format {
                Format::Json => ok(to_json(&fit)),
                Format::Csv => {
                    let mut s = String::from("ln_t,sigma\n");
                    for (x, y) in fit.xs.iter().zip(&fit.ys) {
                        s.push_str(&format!("{x},{y}\n"));
                    }
                    ok(s)
                }
            }
        }
        Cmd::Hooley { t, d } => {
            json_only(cli.format, "hooley")?;
            ok(to_json(&hooley_st(*t, *d)?))
        }
        Cmd::Rho { p, d, eps } => {
            json_only(cli.format, "rho")?;
            let mut e = [0i8; 3];
            for (o, &v) in e.iter_mut().zip(eps) {
                *o = i8::try_from(v).map_err(|_| invalid("signs must be ±1"))?;
            }
            ok(to_json(&rho_g(*p, *d, e)?))
        }
        Cmd::Appendix { p, m, n, family } => {
            json_only(cli.format, "appendix")?;
            appendix(*p, *m, *n, family.as_deref())
        }
        Cmd::Diamond { cubic, c1, c2, pmin, pmax, box_h } => {
            json_only(cli.format, "diamond")?;
            let c = match cubic {
                CubicKind::F => Cubic::F,
                CubicKind::F2 => Cubic::F2,
                CubicKind::Family => Cubic::Family { c1: *c1, c2: *c2 },
            };
            ok(to_json(&diamond_scan(c, *pmin, *pmax, *box_h)?))
        }
        Cmd::Report { criteria, no_timings } => {
            json_only(cli.format, "report")?;
            report(criteria, *no_timings, cli.seed)
        }
    }
}

fn expsum(q: u64, f: &Freq, method: ExpsumMethod) -> Result<Outcome, Error> {
    let (value, tag) = match method {
        ExpsumMethod::Auto => {
            let (v, m) = Evaluator::new().s_q_with_method(q, f)?;
            (v, serde_json::to_value(m).expect("method tag"))
        }
        ExpsumMethod::Brute => (brute_force_full(q, f)?, json!("brute_force")),
        ExpsumMethod::Naive => (naive_definition(q, f)?, json!("naive_definition")),
        ExpsumMethod::Reduced => (reduced_sum(q, f)?, json!("reduced_sum")),
        ExpsumMethod::Closed => (closed_form_prime(q, f)?, json!("closed_form")),
        ExpsumMethod::PrimePower => {
            let fq = factor(q)?;
            let [(p, r)] = fq.factors() else {
                return Err(invalid(format!("{q} is not a prime power")));
            };
            (prime_power(*p, *r, f)?, json!("prime_power"))
        }
    };
    #[derive(Serialize)]
    struct Out {
        q: u64,
        value: String,
        method: Value,
    }
    ok(to_json(&Out { q, value: value.0.to_string(), method: tag }))
}

fn dual(height: Option<i64>, list: bool, m: Option<[i64; 3]>, n: Option<[i64; 3]>) -> Result<Outcome, Error> {
    match (height, m, n) {
        (Some(h), None, None) => {
            if list {
                let points: Vec<Value> = enumerate_dual_points(h)?
                    .into_iter()
                    .map(|(f, class)| json!({ "m": f.m, "n": f.n, "class": class }))
                    .collect();
                ok(to_json(&json!({ "height": h, "points": points })))
            } else {
                let c = count_dual_points(h)?;
                ok(to_json(&json!({ "counts": c, "total": c.total() })))
            }
        }
        (None, Some(m), Some(n)) => {
            let f = Freq::new(m, n);
            let class = classify_dual_point(&f)?;
            ok(to_json(&json!({ "m": m, "n": n, "d": dual_form(&f), "g": g_form(&f), "class": class })))
        }
        _ => Err(invalid("dual needs either --height or both --m and --n")),
    }
}

#[allow(clippy::too_many_arguments)]
fn density(
    method: DensityKind,
    eps: f64,
    samples: u64,
    t: Option<[i64; 3]>,
    h: u32,
    u: f64,
    w: WeightSpec,
    seed: u64,
) -> Result<Outcome, Error> {
    let need_t = || t.ok_or_else(|| invalid("this density method needs --t"));
    let text = match method {
        DensityKind::Leray => to_json(&sigma_inf_leray(&w)?),
        DensityKind::Slab => to_json(&sigma_inf_slab(&w, eps, samples, seed)?),
        DensityKind::Extrapolated => to_json(&sigma_inf_slab_extrapolated(&w, samples, seed)?),
        DensityKind::Lattice => to_json(&sigma_lattice(need_t()?, &w)?),
        DensityKind::LatticeLimit => to_json(&lattice_limit_sum(need_t()?, &w, h)?),
        DensityKind::Theta => to_json(&theta(&w, u)?),
        DensityKind::Constants => to_json(&predicted_constants(&w)?),
    };
    ok(text)
}

fn count(bs: &[u32], theta: f64, naive: bool, w: WeightSpec, format: Format) -> Result<Outcome, Error> {
    let reports: Vec<CountReport> = bs
        .iter()
        .map(|&b| if naive { count_weighted_naive(b, &w, theta) } else { count_gcd_strata(b, &w, theta) })
        .collect::<Result<_, _>>()?;
    match format {
        Format::Json if reports.len() == 1 => ok(to_json(&reports[0])),
        Format::Json => ok(to_json(&reports)),
        Format::Csv => {
            let mut s = format!("{}\n", CountReport::CSV_HEADER);
            for r in &reports {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            ok(s)
        }
    }
}

fn appendix(p: u64, m: Option<[i64; 3]>, n: Option<[i64; 3]>, family: Option<&[i64]>) -> Result<Outcome, Error> {
    let gauss_ok = gauss_sum_check(p)?;
    let (Some(m), Some(n)) = (m, n) else {
        if family.is_some() {
            return Err(invalid("--family needs --m and --n"));
        }
        return ok(to_json(&json!({ "p": p, "gauss_sum_closed_form": gauss_ok })));
    };
    let b = Freq::new(m, n);
    if let Some(c) = family {
        let value = family_sum(p, c[0], c[1], &b)?;
        return ok(to_json(&json!({ "p": p, "m": m, "n": n, "c1": c[0], "c2": c[1], "value": value })));
    }
    let out = json!({
        "p": p,
        "m": m,
        "n": n,
        "value": s_p_f2(p, &b)?,
        "n_counts": n_counts(p, &b)?,
        "conic_det_mod_p": rem(conic_det(&b), p),
        "salie": salie_identity_check(p, &b)?,
        "gauss_sum_closed_form": gauss_ok,
    });
    ok(to_json(&out))
}

fn report(criteria: &[u8], no_timings: bool, seed: u64) -> Result<Outcome, Error> {
    let ids: Vec<u8> = if criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criteria.to_vec() };
    let results = ids.iter().map(|&id| run_criterion(id, seed)).collect::<Result<Vec<_>, _>>()?;
    let mut r = AcceptanceReport { passed: results.iter().all(|c| c.passed), criteria: results };
    if no_timings {
        r = r.without_timings();
    }
    let failure = (!r.passed).then(|| {
        r.failing().iter().map(|c| format!("criterion {} ({})", c.id, c.name)).collect::<Vec<_>>().join(", ")
    });
    for c in &r.criteria {
        eprintln!("{}", c.summary_line());
    }
    Ok(Outcome { text: to_json(&r), failure })
}
