use std::fmt::Write as _;
use std::fs;
use std::time::Instant;

use clap::ValueEnum;
use hecke_core::amplifier::{self, EigenvalueTable};
use hecke_core::coset::{enumerate_cosets, explicit_table};
use hecke_core::hecke::{coprime_product, expected_intro_1, expected_intro_2, partition_exponents, theorem_a_degrees};
use hecke_core::json::{self, object};
use hecke_core::report::{Claim, Report};
use hecke_core::{Budget, CosetLabel, CosetType, HeckeAlgebra, HeckeElement, HeckeError, Side};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::out::Output;
use crate::poly::Poly;
use crate::{Cli, Command, Failure, SideArg, Suite, TypeArgs};

type Run = Result<Output, Failure>;

pub fn run(cli: &Cli) -> Run {
    let h = HeckeAlgebra::new(Budget(cli.budget));
    match &cli.command {
        Command::Degree { t, check } => degree(&h, t, *check),
        Command::Cosets { t, side, check } => cosets(&h, t, *side, *check),
        Command::Product { n, p, q, alpha1, alpha2, check } => product(&h, *n, *p, q.unwrap_or(*p), alpha1, alpha2, *check),
        Command::Hall { p, mu, nu, lambda } => hall(&h, *p, mu, nu, lambda.as_deref()),
        Command::Verify { suite, primes, cross } => verify(&h, *suite, primes, cross),
        Command::Fit { n, alpha, primes, check } => fit(&h, *n, alpha, primes, *check),
        Command::Amplifier { length, c0, table, write_c0 } => {
            amplifier_cmd(*length, cli.seed, c0.as_deref(), table.as_deref(), write_c0.as_deref())
        }
    }
}

fn coset_type(t: &TypeArgs) -> Result<CosetType, Failure> {
    Ok(CosetType::new(t.n, t.p, t.alpha.clone())?)
}

fn type_inputs(t: &CosetType) -> Value {
    json!({ "n": t.dim(), "p": t.prime(), "alpha": t.alpha() })
}

fn alpha_string(a: &[u32]) -> String {
    a.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Position in [`theorem_a_degrees`] of the type with exponents `alpha`,
/// up to a common shift.
fn known_index(n: usize, alpha: &[u32]) -> Option<usize> {
    let low = *alpha.iter().min()?;
    if n != 3 || alpha.len() != 3 {
        return None;
    }
    let shifted: Vec<u32> = alpha.iter().map(|a| a - low).collect();
    theorem_a_degrees(2).into_iter().position(|(a, _, _)| {
        let m = a[0];
        a.iter().map(|x| x - m).eq(shifted.iter().copied())
    })
}

/// Closed-form degree when `t` is one of the nine types with a known formula.
fn known_degree(t: &CosetType) -> Option<(&'static str, u64)> {
    let i = known_index(t.dim(), t.alpha())?;
    let (_, f, v) = theorem_a_degrees(t.prime())[i];
    Some((f, v))
}

fn degree(h: &HeckeAlgebra, args: &TypeArgs, check: bool) -> Run {
    let t = coset_type(args)?;
    let deg = h.degree(&t.label())?;
    let known = known_degree(&t);
    let matched = known.map(|(_, v)| v == deg);
    let mut text = format!("deg {t} = {deg}\n");
    if let Some((f, v)) = known {
        writeln!(text, "closed form {f} = {v}: {}", if v == deg { "match" } else { "MISMATCH" }).unwrap();
    }
    let (formula, expected) = match known {
        Some((f, v)) => (Value::String(f.into()), Value::String(v.to_string())),
        None => (Value::Null, Value::Null),
    };
    Ok(Output {
        text,
        json: object([
            ("command", json!("degree")),
            ("inputs", type_inputs(&t)),
            ("results", json!({
                "label": json::label_to_json(&t.label()),
                "degree": deg.to_string(),
                "formula": formula,
                "expected": expected,
                "match": matched,
            })),
        ]),
        header: vec!["n", "p", "alpha", "degree", "expected", "match"],
        rows: vec![vec![
            t.dim().to_string(),
            t.prime().to_string(),
            alpha_string(t.alpha()),
            deg.to_string(),
            known.map(|(_, v)| v.to_string()).unwrap_or_default(),
            matched.map(|m| m.to_string()).unwrap_or_default(),
        ]],
        ok: !check || matched != Some(false),
    })
}

fn cosets(h: &HeckeAlgebra, args: &TypeArgs, side: SideArg, check: bool) -> Run {
    let t = coset_type(args)?;
    let side = match side {
        SideArg::Right => Side::Right,
        SideArg::Left => Side::Left,
    };
    let set = enumerate_cosets(&t, side, h.budget())?;
    let table_match = if check {
        match explicit_table(&t, side) {
            Ok(table) => Some(table == set),
            Err(e @ HeckeError::UnsupportedTable(_)) => return Err(Failure::Usage(format!("--check: {e}"))),
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let mut text = format!("{} {side} cosets in Λ{t}Λ\n", set.len());
    for m in set.reps() {
        writeln!(text, "{m}").unwrap();
    }
    if let Some(ok) = table_match {
        writeln!(text, "explicit table: {}", if ok { "match" } else { "MISMATCH" }).unwrap();
    }
    let mut results = json::repset_to_json(&set);
    results["table_match"] = json!(table_match);
    let n = t.dim();
    let mut header = vec!["index"];
    const NAMES: [&str; 9] = ["m11", "m12", "m13", "m21", "m22", "m23", "m31", "m32", "m33"];
    const NAMES2: [&str; 4] = ["m11", "m12", "m21", "m22"];
    header.extend(if n == 3 { &NAMES[..] } else { &NAMES2[..] });
    let rows = set
        .reps()
        .iter()
        .enumerate()
        .map(|(i, m)| std::iter::once(i.to_string()).chain(m.entries().iter().map(BigInt::to_string)).collect())
        .collect();
    Ok(Output {
        text,
        json: object([
            ("command", json!("cosets")),
            ("inputs", json!({ "n": n, "p": t.prime(), "alpha": t.alpha(), "side": side.to_string() })),
            ("results", results),
        ]),
        header,
        rows,
        ok: table_match != Some(false),
    })
}

fn element_rows(e: &HeckeElement) -> Vec<Vec<String>> {
    e.terms()
        .map(|(l, c)| {
            let mut row = vec![json::rational_to_string(l.r())];
            row.push(l.s().iter().map(BigUint::to_string).collect::<Vec<_>>().join(","));
            row.push(l.to_string());
            row.push(json::rational_to_string(c));
            row
        })
        .collect()
}

fn element_text(e: &HeckeElement) -> String {
    let mut text = format!("{e}\n");
    for (l, c) in e.terms() {
        writeln!(text, "  {c}\t[{l}]").unwrap();
    }
    text
}

fn product(h: &HeckeAlgebra, n: usize, p: u64, q: u64, a1: &[u32], a2: &[u32], check: bool) -> Run {
    let t1 = CosetType::new(n, p, a1.to_vec())?;
    let t2 = CosetType::new(n, q, a2.to_vec())?;
    let (g1, g2) = (t1.label(), t2.label());
    let prod = h.multiply(&g1, &g2)?;
    let mut report = Report::new("product", format!("{t1} * {t2}"));
    if check {
        let audit = h.convolve_audited(&g1, &g2)?;
        report.push(Claim::new("enumerated product", &prod, &audit.product));
        report.push(Claim::check("formulas 1, 2, 3 agree", audit.formulas_agree(), "true", audit.formulas_agree()));
        report.push(Claim::check("degree sum", audit.degree_sum_holds(), "true", audit.degree_sum_holds()));
        if p != q {
            report.push(Claim::new("coprime law", coprime_product(&g1, &g2)?, &prod));
        } else if n == 3 {
            let pair = (t1.alpha(), t2.alpha());
            if matches!(pair, ([0, 0, 1], [0, 1, 1]) | ([0, 1, 1], [0, 0, 1])) {
                report.push(Claim::new("diag(1,1,p)*diag(1,p,p) identity", expected_intro_1(p)?, &prod));
            }
            if matches!(pair, ([0, 1, 2], [0, 1, 2])) {
                report.push(Claim::new("diag(1,p,p^2)^2 identity", expected_intro_2(p)?, &prod));
            }
        }
    }
    let mut text = element_text(&prod);
    for c in &report.claims {
        writeln!(text, "{c}").unwrap();
    }
    Ok(Output {
        text,
        json: object([
            ("command", json!("product")),
            ("inputs", json!({ "n": n, "p": p, "q": q, "alpha1": a1, "alpha2": a2 })),
            ("results", json!({ "product": json::element_to_json(&prod), "checks": json::report_to_json(&report) })),
        ]),
        header: vec!["r", "s", "label", "coeff"],
        rows: element_rows(&prod),
        ok: report.passed(),
    })
}

/// Weakly decreasing partition of a `p`-power label, or `None` if some
/// diagonal entry is not a power of `p`.
fn label_partition(l: &CosetLabel, p: u64) -> Option<Vec<u32>> {
    if !l.r().is_integer() {
        return None;
    }
    let r = l.r().to_integer().to_biguint()?;
    let mut diag = vec![r.clone()];
    diag.extend(l.s().iter().map(|s| &r * s));
    let pb = BigUint::from(p);
    let mut out = Vec::new();
    for mut d in diag {
        let mut e = 0;
        while (&d % &pb).is_zero() {
            d /= &pb;
            e += 1;
        }
        if !d.is_one() {
            return None;
        }
        out.push(e);
    }
    out.reverse();
    Some(out)
}

fn hall(h: &HeckeAlgebra, p: u64, mu: &[u32], nu: &[u32], lambda: Option<&[u32]>) -> Run {
    let n = mu.len().max(nu.len()).max(lambda.map_or(0, <[u32]>::len)).max(2);
    let coeffs: Vec<(Vec<u32>, BigUint)> = match lambda {
        Some(l) => vec![(l.to_vec(), h.hall_coefficient(mu, nu, l, p)?)],
        None => {
            let label = |part: &[u32]| -> Result<CosetLabel, Failure> {
                Ok(CosetType::new(n, p, partition_exponents(part, n)?)?.label())
            };
            let prod = h.multiply(&label(mu)?, &label(nu)?)?;
            let mut out = Vec::new();
            for (l, c) in prod.terms() {
                let part = label_partition(l, p).ok_or_else(|| HeckeError::Inconsistency(format!("{l} is not a {p}-power label")))?;
                out.push((part, c.to_integer().to_biguint().unwrap_or_default()));
            }
            out.sort();
            out
        }
    };
    let show = |v: &[u32]| format!("({})", alpha_string(v));
    let mut text = String::new();
    for (l, c) in &coeffs {
        writeln!(text, "g^{}_{{{},{}}}({p}) = {c}", show(l), show(mu), show(nu)).unwrap();
    }
    Ok(Output {
        text,
        json: object([
            ("command", json!("hall")),
            ("inputs", json!({ "p": p, "mu": mu, "nu": nu, "lambda": lambda })),
            ("results", Value::Array(coeffs.iter().map(|(l, c)| json!({ "lambda": l, "coefficient": c.to_string() })).collect())),
        ]),
        header: vec!["lambda", "coefficient"],
        rows: coeffs.iter().map(|(l, c)| vec![alpha_string(l), c.to_string()]).collect(),
        ok: true,
    })
}

fn verify(h: &HeckeAlgebra, suite: Suite, primes: &[u64], cross: &[(u64, u64)]) -> Run {
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let mut reports: Vec<(Report, u128)> = Vec::new();
    let mut timed = |f: &dyn Fn() -> hecke_core::Result<Report>| -> Result<(), Failure> {
        let start = Instant::now();
        let r = f()?;
        reports.push((r, start.elapsed().as_millis()));
        Ok(())
    };
    for &p in primes {
        if wants(Suite::TheoremA) {
            timed(&|| h.verify_theorem_a(p))?;
        }
        if wants(Suite::CorollaryB) {
            timed(&|| h.verify_corollary_b(p, p))?;
        }
        if wants(Suite::Appendix) {
            timed(&|| h.verify_appendix(p))?;
        }
        if wants(Suite::Hall) {
            timed(&|| h.verify_hall(p))?;
        }
    }
    if wants(Suite::CorollaryB) {
        for &(p, q) in cross {
            timed(&|| h.verify_corollary_b(p, q))?;
        }
    }
    let ok = reports.iter().all(|(r, _)| r.passed());
    let mut text = String::new();
    for (r, ms) in &reports {
        write!(text, "{r}").unwrap();
        writeln!(text, "  ({ms} ms)").unwrap();
    }
    writeln!(text, "{}", if ok { "all claims passed" } else { "SOME CLAIMS FAILED" }).unwrap();
    let rows = reports
        .iter()
        .flat_map(|(r, _)| {
            r.claims.iter().map(move |c| {
                vec![r.suite.clone(), r.params.clone(), c.name.clone(), c.expected.clone(), c.actual.clone(), c.pass.to_string()]
            })
        })
        .collect();
    Ok(Output {
        text,
        json: object([
            ("command", json!("verify")),
            ("inputs", json!({ "suite": suite.to_possible_value().map(|v| v.get_name().to_string()), "primes": primes, "cross": cross })),
            ("results", Value::Array(reports.iter().map(|(r, ms)| {
                let mut v = json::report_to_json(r);
                v["elapsed_ms"] = json!(ms.to_string());
                v
            }).collect())),
            ("pass", json!(ok)),
        ]),
        header: vec!["suite", "params", "claim", "expected", "actual", "pass"],
        rows,
        ok,
    })
}

fn fit(h: &HeckeAlgebra, n: usize, alpha: &[u32], primes: &[u64], check: bool) -> Run {
    if primes.is_empty() {
        return Err(Failure::Usage("--primes needs at least one prime".into()));
    }
    let mut points = Vec::new();
    for &p in primes {
        let t = CosetType::new(n, p, alpha.to_vec())?;
        let deg = h.degree(&t.label()).map_err(|e| match e {
            HeckeError::BudgetExceeded { what, required, budget } => {
                HeckeError::BudgetExceeded { what: format!("{what} at p={p}"), required, budget }
            }
            e => e,
        })?;
        points.push((p, BigRational::from_integer(deg.into())));
    }
    let poly = Poly::interpolate(&points);
    let mut report = Report::new("fit", format!("alpha={}", alpha_string(alpha)));
    let mut expected_poly = None;
    if check {
        let Some(i) = known_index(n, alpha) else {
            return Err(Failure::Usage(format!("--check: no closed form for exponents {}", alpha_string(alpha))));
        };
        // The closed forms are polynomials of degree at most 7 in p.
        let samples: Vec<(u64, BigRational)> =
            (2..10u64).map(|x| (x, BigRational::from_integer(theorem_a_degrees(x)[i].2.into()))).collect();
        let want = Poly::interpolate(&samples);
        if primes.len() <= want.degree() {
            return Err(Failure::Usage(format!(
                "--check needs more than {} primes for a degree {} closed form",
                want.degree(),
                want.degree()
            )));
        }
        report.push(Claim::new("interpolated degree polynomial", &want, &poly));
        expected_poly = Some(want);
    }
    let mut text = format!("deg diag(p^({})) = {poly}\n", alpha_string(alpha));
    for (p, v) in &points {
        writeln!(text, "  p={p}: {v}").unwrap();
    }
    if !poly.is_integral() {
        writeln!(text, "note: coefficients are not all integers").unwrap();
    }
    for c in &report.claims {
        writeln!(text, "{c}").unwrap();
    }
    let coeffs: Vec<String> = poly.0.iter().map(json::rational_to_string).collect();
    Ok(Output {
        text,
        json: object([
            ("command", json!("fit")),
            ("inputs", json!({ "n": n, "alpha": alpha, "primes": primes })),
            ("results", json!({
                "polynomial": poly.to_string(),
                "coefficients": coeffs,
                "integral": poly.is_integral(),
                "points": points.iter().map(|(p, v)| json!({ "p": p, "degree": json::rational_to_string(v) })).collect::<Vec<_>>(),
                "expected": expected_poly.map(|e| e.to_string()),
                "match": check.then(|| report.passed()),
            })),
        ]),
        header: vec!["power", "coefficient"],
        rows: coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.clone()]).collect(),
        ok: report.passed(),
    })
}

fn read_table(path: &std::path::Path) -> Result<EigenvalueTable, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    EigenvalueTable::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn amplifier_cmd(
    length: u64,
    seed: u64,
    c0_path: Option<&std::path::Path>,
    table_path: Option<&std::path::Path>,
    write_c0: Option<&std::path::Path>,
) -> Run {
    let surrogate = c0_path.is_none();
    let c0 = match c0_path {
        Some(p) => read_table(p)?,
        None => amplifier::gl2_surrogate(length, seed),
    };
    if let Some(path) = write_c0 {
        fs::write(path, c0.to_text()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let c = match table_path {
        Some(p) => read_table(p)?,
        None => c0.clone(),
    };
    let alpha = amplifier::build_alpha(length, &c0)?;
    let split = amplifier::split_bound_check(&alpha, &c)?;
    let pi = amplifier::prime_count(amplifier::isqrt(length));
    let surrogate_value = (surrogate && table_path.is_none()).then(|| (pi * pi) as f64);
    let mut text = format!(
        "L = {length}, {} primes and {} prime squares in the support\n",
        pi, pi
    );
    writeln!(text, "A = {}", split.amplitude).unwrap();
    writeln!(text, "2|prime part|^2 + 2|square part|^2 = {}", split.bound()).unwrap();
    writeln!(text, "splitting bound: {}", if split.holds() { "holds" } else { "VIOLATED" }).unwrap();
    if let Some(v) = surrogate_value {
        let ok = amplifier::close(split.amplitude, v);
        writeln!(text, "surrogate identity predicts pi(sqrt L)^2 = {v}: {}", if ok { "match" } else { "MISMATCH" }).unwrap();
    }
    let rows = alpha
        .alpha
        .iter()
        .map(|(&l, a)| {
            let cv = c.get(l).unwrap_or_default();
            vec![l.to_string(), a.re.to_string(), a.im.to_string(), cv.re.to_string(), cv.im.to_string()]
        })
        .collect();
    let alpha_json: Vec<Value> = alpha
        .alpha
        .iter()
        .map(|(&l, a)| json!({ "ell": l, "re": a.re, "im": a.im }))
        .collect();
    let surrogate_ok = surrogate_value.map(|v| amplifier::close(split.amplitude, v));
    Ok(Output {
        text,
        json: object([
            ("command", json!("amplifier")),
            ("inputs", json!({
                "length": length,
                "seed": seed,
                "c0": c0_path.map(|p| p.display().to_string()),
                "table": table_path.map(|p| p.display().to_string()),
            })),
            ("results", json!({
                "alpha": alpha_json,
                "amplitude": split.amplitude,
                "prime_part": split.prime_part,
                "square_part": split.square_part,
                "bound": split.bound(),
                "bound_holds": split.holds(),
                "prime_count": pi,
                "surrogate_expected": surrogate_value,
                "surrogate_match": surrogate_ok,
            })),
        ]),
        header: vec!["ell", "alpha_re", "alpha_im", "c_re", "c_im"],
        rows,
        ok: split.holds() && surrogate_ok != Some(false),
    })
}
