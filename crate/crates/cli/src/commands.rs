use std::collections::BTreeMap;
use std::fs;

use serde_json::{json, Value};

use curvtool_core::curvature::{
    bianchi_residuals, constant_curvature, is_ip, parse_tensor_file, r_phi, reflection, ricci, scalar_curvature,
    write_tensor_file,
};
use curvtool_core::linalg::{numeric_rank, random_orthogonal, rng_from_seed, sym_eigen, Mat};
use curvtool_core::metrics3::{
    area_form_check, conformal_flat_residual, h_evolution_check, lookup, milnor_ricci, phi_profile_check,
    ricci_report, second_bianchi_frame_check, trace_h_check, MetricChart, NamedMetric,
};
use curvtool_core::proof_kit::{
    cc0_probe, cubic_pencil_residuals, m_identity_residual, model_block, small_j, w_operator, Cc0Verdict,
    NormalFormFamily, NormalFormKind,
};
use curvtool_core::quotient_ring::{minor_divisibility_check, parse_elem, tbar_divide, tbar_valuation, LinearEntry};
use curvtool_core::search::{run_search, SearchConfig};
use curvtool_core::Error as CoreError;

use crate::args::{BasisKind, Builtin, IdentityArgs, MetricArgs, RingArgs, SearchArgs, TensorArgs};
use crate::error::{CliError, CliResult};

/// Everything a command hands back before the report is assembled.
pub struct Output {
    pub parameters: Value,
    pub files: Vec<Vec<u8>>,
    pub results: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
}

fn tolerances<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

fn parse_floats(text: &str, what: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Parse(format!("{what}: '{s}': {e}"))))
        .collect()
}

pub fn tensor(args: &TensorArgs, seed: u64) -> CliResult<Output> {
    let mut files = Vec::new();
    let (r, source) = match (&args.file, args.builtin) {
        (Some(path), _) => {
            let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let r = parse_tensor_file(&text).map_err(|e| match e {
                CoreError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
                other => other.into(),
            })?;
            files.push(bytes);
            (r, json!({"file": path.display().to_string()}))
        }
        (None, Some(Builtin::Constant)) => {
            let r = constant_curvature(args.dim, args.c)?;
            (r, json!({"builtin": "constant", "dim": args.dim, "c": args.c}))
        }
        (None, Some(Builtin::Rphi)) => {
            if args.minus > args.dim {
                return Err(CliError::Domain(format!("--minus {} exceeds --dim {}", args.minus, args.dim)));
            }
            let mut phi = reflection(args.dim, args.minus);
            if args.conjugate {
                let q = random_orthogonal(args.dim, &mut rng_from_seed(seed));
                phi = &(&q * &phi) * &q.transpose();
            }
            let r = r_phi(args.dim, args.c, &phi)?;
            let source = json!({
                "builtin": "rphi", "dim": args.dim, "c": args.c, "minus": args.minus, "conjugate": args.conjugate,
            });
            (r, source)
        }
        (None, None) => return Err(CliError::Parse("one of --file or --builtin is required".into())),
    };

    let rep = is_ip(&r, args.samples, args.tol, seed)?;
    let rho = ricci(&r);
    let ricci_eigenvalues = sym_eigen(&rho, 1e-12)?.eigenvalues;
    let results = json!({
        "dim": r.dim(),
        "zero_tensor": r.frobenius_norm() == 0.0,
        "verdict": rep.verdict,
        "structure": to_value(&rep.structure),
        "rank": rep.rank,
        "max_spread": rep.max_spread,
        "mismatch": to_value(&rep.mismatch),
        "bianchi": to_value(&bianchi_residuals(&r)),
        "ricci_eigenvalues": ricci_eigenvalues,
        "scalar_curvature": scalar_curvature(&r),
    });
    let mut flags = BTreeMap::new();
    if args.expect_ip {
        flags.insert("ip".into(), rep.verdict);
    }
    Ok(Output {
        parameters: json!({
            "command": "tensor", "source": source, "samples": args.samples, "tol": args.tol, "rng": seed,
            "expect_ip": args.expect_ip,
        }),
        files,
        results,
        tolerances: tolerances([("structure", args.tol)]),
        flags,
    })
}

const CHECKS: [&str; 7] = ["ricci", "bianchi", "h", "trace", "area", "phi", "cotton"];

fn parse_params(text: &str) -> CliResult<BTreeMap<String, f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Parse(format!("--params: expected key=value, got '{kv}'")))?;
            let v = v.trim().parse::<f64>().map_err(|e| CliError::Parse(format!("--params: '{kv}': {e}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

pub fn metric(args: &MetricArgs) -> CliResult<Output> {
    let params = parse_params(&args.params)?;
    let point: [f64; 3] = parse_floats(&args.point, "--point")?
        .try_into()
        .map_err(|v: Vec<f64>| CliError::Parse(format!("--point needs 3 coordinates, got {}", v.len())))?;
    let mut checks: Vec<&str> = Vec::new();
    for c in args.checks.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if !CHECKS.contains(&c) {
            return Err(CliError::Unknown { kind: "check", name: c.to_string() });
        }
        if !checks.contains(&c) {
            checks.push(c);
        }
    }
    let named = lookup(&args.name, &params)?;
    let parameters = json!({
        "command": "metric", "name": args.name, "params": to_value(&params), "point": point, "checks": checks,
        "fd_step": args.fd_step, "tol": args.tol, "rank_tol": args.rank_tol, "phi_tol": args.phi_tol,
        "cotton_tol": args.cotton_tol,
    });
    let tolerances = tolerances([
        ("fd_step", args.fd_step),
        ("identity", args.tol),
        ("rank", args.rank_tol),
        ("phi", args.phi_tol),
        ("cotton", args.cotton_tol),
    ]);
    let chart = match named {
        NamedMetric::Chart(c) => c,
        NamedMetric::Milnor(l) => {
            if let Some(c) = checks.iter().find(|&&c| c != "ricci") {
                return Err(CliError::Domain(format!("check {c} needs a diagonal chart; milnor supports ricci only")));
            }
            let rho = milnor_ricci(l[0], l[1], l[2]);
            return Ok(Output {
                parameters,
                files: Vec::new(),
                results: json!({"metric": {"milnor": l}, "ricci": {"eigenvalues": rho}}),
                tolerances,
                flags: BTreeMap::new(),
            });
        }
    };
    if !chart.in_domain(point) {
        return Err(CoreError::OutOfDomain(point).into());
    }

    let mut results = serde_json::Map::new();
    results.insert("metric".into(), to_value(&chart));
    let mut flags = BTreeMap::new();
    for c in &checks {
        let value = match *c {
            "ricci" => to_value(&ricci_report(&chart, point, args.rank_tol)?),
            "bianchi" => {
                let r = second_bianchi_frame_check(&chart, point, args.fd_step)?;
                flags.insert("bianchi".into(), r.iter().copied().fold(0.0, f64::max) <= args.tol);
                json!(r)
            }
            "h" => {
                let r = h_evolution_check(&chart, point, args.fd_step)?;
                flags.insert("h".into(), r <= args.tol);
                json!(r)
            }
            "trace" => {
                let r = trace_h_check(&chart, point, args.fd_step)?;
                flags.insert("trace".into(), r <= args.tol);
                json!(r)
            }
            "area" => {
                let r = area_form_check(&chart, point, args.fd_step)?;
                flags.insert("area".into(), r <= args.tol);
                json!(r)
            }
            "phi" => phi_value(&chart, point, args.phi_tol, &mut flags)?,
            "cotton" => {
                let r = conformal_flat_residual(&chart, point, args.fd_step)?;
                json!({"residual": r, "conformally_flat": r <= args.cotton_tol})
            }
            _ => unreachable!("checks are validated"),
        };
        results.insert((*c).to_string(), value);
    }
    Ok(Output { parameters, files: Vec::new(), results: Value::Object(results), tolerances, flags })
}

fn phi_value(chart: &MetricChart, p: [f64; 3], tol: f64, flags: &mut BTreeMap<String, bool>) -> CliResult<Value> {
    let xs: Vec<f64> = (-2..=2).map(|k| p[0] + 0.05 * f64::from(k)).collect();
    if let Some(&x) = xs.iter().find(|&&x| !chart.in_domain([x, p[1], p[2]])) {
        return Err(CoreError::OutOfDomain([x, p[1], p[2]]).into());
    }
    let profile = phi_profile_check(chart, &xs, [p[1], p[2]])?;
    flags.insert("phi".into(), profile.max_residual <= tol);
    Ok(json!({"abscissae": xs, "profile": to_value(&profile)}))
}

pub fn identity(args: &IdentityArgs, seed: u64) -> CliResult<Output> {
    let mut rng = rng_from_seed(seed);
    let scale_of = |i: usize| args.scale.unwrap_or([0.5, 1.0, 2.0][i % 3]);
    let kind_a = || NormalFormKind::A { alpha: args.alpha };
    let (results, tol, flag): (Value, f64, bool) = match args.name.as_str() {
        "w-rank1" => {
            let tol = args.tol.unwrap_or(1e-9);
            let (mut rank_one, mut worst) = (0, 0.0f64);
            for i in 0..args.trials {
                let s = scale_of(i);
                let f = NormalFormFamily::new(kind_a(), random_orthogonal(7, &mut rng), s)?;
                let w = w_operator(&f.member(), s, args.alpha)?;
                let top = sym_eigen(&w, 1e-12)?.eigenvalues.into_iter().fold(0.0, |m: f64, v| if v.abs() > m.abs() { v } else { m });
                let expected = args.alpha.powi(2) * s.powi(4);
                worst = worst.max((top - expected).abs() / expected.abs().max(f64::MIN_POSITIVE));
                if numeric_rank(&w, tol) == 1 {
                    rank_one += 1;
                }
            }
            let ok = rank_one == args.trials && worst <= 1e-8;
            (json!({"trials": args.trials, "rank_one": rank_one, "worst_relative_eigenvalue_error": worst}), tol, ok)
        }
        "m-identity" => {
            let tol = args.tol.unwrap_or(1e-8);
            let ts = parse_floats(&args.t, "--t")?;
            let mut worst = 0.0f64;
            for i in 0..args.trials {
                let s = scale_of(i);
                let f = NormalFormFamily::new(kind_a(), random_orthogonal(7, &mut rng), s)?;
                let b = f.kernel_unit().scaled(s);
                for &t in &ts {
                    worst = worst.max(m_identity_residual(&f.member(), s, &b, args.alpha, t)?);
                }
            }
            (json!({"trials": args.trials, "t": ts, "max_residual": worst}), tol, worst <= tol)
        }
        "cubic-pencil" => {
            let tol = args.tol.unwrap_or(1e-12);
            let z = args.z.unwrap_or_else(|| args.a.hypot(args.b));
            let k = NormalFormFamily::normal_form(NormalFormKind::B);
            let r = cubic_pencil_residuals(&k, &pencil_block(args.a, args.b), z)?;
            (json!({"z": z, "residuals": to_value(&r)}), tol, r.max() <= tol)
        }
        "cc0-probe" => {
            let tol = args.tol.unwrap_or(1e-9);
            let model = [model_block([1.0, 0.0, 0.0]), model_block([0.0, 1.0, 0.0]), model_block([0.0, 0.0, 1.0])];
            let mut fails = 0;
            let mut inconclusive = Vec::new();
            let mut first_witness = None;
            for i in 0..args.trials {
                let basis: Vec<Mat> = match args.basis {
                    BasisKind::Random => (0..4).map(|_| Mat::gaussian(4, 3, &mut rng)).collect(),
                    BasisKind::Model => model.iter().cloned().chain([Mat::gaussian(4, 3, &mut rng)]).collect(),
                };
                let verdict = cc0_probe(&basis, args.samples, tol, seed.wrapping_add(i as u64))?;
                match verdict {
                    Cc0Verdict::FailsProperty { .. } => {
                        fails += 1;
                        first_witness.get_or_insert(verdict);
                    }
                    Cc0Verdict::Inconclusive { .. } => inconclusive.push(i),
                }
            }
            let results = json!({
                "spaces": args.trials, "samples": args.samples, "fails_property": fails,
                "inconclusive": inconclusive, "first_witness": to_value(&first_witness),
            });
            (results, tol, fails == args.trials)
        }
        "minor-div" => {
            let text = args.matrix.as_deref().ok_or_else(|| CliError::Parse("minor-div needs --matrix".into()))?;
            let m = text
                .split(';')
                .map(|row| row.split(',').map(|e| LinearEntry::parse(e, args.vars)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let check = minor_divisibility_check(&m)?;
            let failure = check.first_failure.as_ref().map(|f| {
                json!({"rows": [f.rows.0, f.rows.1], "cols": [f.cols.0, f.cols.1],
                       "f": f.f.to_string(), "g": f.g.to_string(), "h": f.h.to_string()})
            });
            let results = json!({
                "vars": args.vars, "minors_checked": check.minors_checked, "divisible": check.ok, "first_failure": failure,
            });
            (results, 0.0, check.ok)
        }
        other => return Err(CliError::Unknown { kind: "identity", name: other.to_string() }),
    };
    Ok(Output {
        parameters: json!({
            "command": "identity", "name": args.name, "alpha": args.alpha, "trials": args.trials, "scale": args.scale,
            "t": args.t, "a": args.a, "b": args.b, "z": args.z, "samples": args.samples,
            "basis": format!("{:?}", args.basis).to_lowercase(), "matrix": args.matrix, "vars": args.vars, "tol": tol,
            "rng": seed,
        }),
        files: Vec::new(),
        results,
        tolerances: tolerances([("identity", tol)]),
        flags: [(args.name.clone(), flag)].into_iter().collect(),
    })
}

/// `L = [[aJ, bJ], [bJ, −aJ]]` in the leading 4×4 block.
fn pencil_block(a: f64, b: f64) -> Mat {
    let j = small_j();
    let mut m = Mat::zeros(7, 7);
    for r in 0..2 {
        for c in 0..2 {
            m[(r, c)] = a * j[(r, c)];
            m[(r, c + 2)] = b * j[(r, c)];
            m[(r + 2, c)] = b * j[(r, c)];
            m[(r + 2, c + 2)] = -a * j[(r, c)];
        }
    }
    m
}

pub fn ring(args: &RingArgs) -> CliResult<Output> {
    let e = parse_elem(&args.expr, args.vars)?;
    let valuation = |x: &_| match tbar_valuation(x, args.cap) {
        Ok(v) => Ok(Some(v)),
        Err(CoreError::ZeroElement) => Ok(None),
        Err(other) => Err(CliError::from(other)),
    };
    let v = valuation(&e)?;
    let mut results = json!({
        "element": e.to_string(),
        "parts": to_value(&e),
        "valuation": v,
        "tbar_quotient": tbar_divide(&e).map(|q| q.to_string()),
    });
    if let Some(rhs) = &args.times {
        let f = parse_elem(rhs, args.vars)?;
        let product = e.mul(&f);
        results["times"] = json!({
            "element": f.to_string(),
            "product": product.to_string(),
            "valuation": valuation(&f)?,
            "product_valuation": valuation(&product)?,
        });
    }
    let mut flags = BTreeMap::new();
    if let Some(k) = args.expect_valuation {
        flags.insert("valuation".into(), v == Some(k));
    }
    Ok(Output {
        parameters: json!({
            "command": "ring", "vars": args.vars, "expr": args.expr, "times": args.times, "cap": args.cap,
            "expect_valuation": args.expect_valuation,
        }),
        files: Vec::new(),
        results,
        tolerances: BTreeMap::new(),
        flags,
    })
}

pub fn search(args: &SearchArgs, seed: u64) -> CliResult<Output> {
    let cfg = SearchConfig {
        dim: args.dim,
        seeds: args.seeds,
        iterations: args.iters,
        plane_batch: args.batch,
        tol_residual: args.tol,
        rank_tol: args.rank_tol,
        verify_planes: args.verify_planes,
        anchored_fraction: args.anchored_fraction,
        rng_seed: seed,
        ..SearchConfig::default()
    };
    let outcome = run_search(&cfg)?;
    let candidates: Vec<Value> = outcome
        .candidates
        .iter()
        .map(|c| {
            let mut v = json!({
                "seed": c.seed, "start": to_value(&c.start), "residual": c.residual, "objective": c.objective,
                "iterations": c.iterations, "rank_census": to_value(&c.rank_census), "max_rank": c.max_rank,
                "structure": to_value(&c.structure), "bianchi": c.bianchi,
            });
            if outcome.census.counterexamples.contains(&c.seed) {
                v["tensor_file"] = json!(write_tensor_file(&c.tensor));
            }
            v
        })
        .collect();
    Ok(Output {
        parameters: json!({"command": "search", "config": to_value(&cfg)}),
        files: Vec::new(),
        results: json!({"candidates": candidates, "census": to_value(&outcome.census)}),
        tolerances: tolerances([("residual", cfg.tol_residual), ("rank", cfg.rank_tol)]),
        flags: [("no_counterexample".to_string(), outcome.census.counterexamples.is_empty())].into_iter().collect(),
    })
}
