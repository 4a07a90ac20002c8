use std::fs;
use std::time::Instant;

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use qboson::focksim::{
    engine_equivalence, evolve_unitary, ginibre_matrix, haar_unitary, sample_outcomes, substitution_oracle,
    tv_distance, empirical_distribution, ORACLE_MAX_MODES, ORACLE_MAX_PHOTONS,
};
use qboson::io::{fmt_f64, matrix_from_json, MatrixJson};
use qboson::permanent::{
    distribution_permanent, permanent, permanent_naive, permanent_ryser, permanent_ryser_parallel, q_permanent,
    Algorithm, NAIVE_CAP,
};
use qboson::qalgebra::{
    default_delta_grid, q_factorial, q_number, theorem1_check, BurbanStructure, QDeformation,
};
use qboson::spectra::{
    kerr_levels, kerr_ratio_from_ej_ec, qboson_levels, spectrum_compare, transmon_levels, KerrParams,
    TransmonParams,
};
use qboson::{CharacteristicF, ComplexMatrix, ModeUnitary, Occupation, OutcomeDistribution, Species};

use crate::args::{
    BenchArgs, FockArgs, PermArgs, QnumArgs, SpectraArgs, SpectrumKind, Theorem1Args, UnitaryArg, ValidateArgs,
};
use crate::output::Sink;
use crate::Invalid;

/// Result of a successful command: a one-line summary and its exit status.
pub struct Outcome {
    pub summary: Value,
    pub ok: bool,
}

impl Outcome {
    fn ok(summary: Value) -> Self {
        Self { summary, ok: true }
    }
}

fn require<T: Copy>(value: Option<T>, key: &str, context: &str) -> Result<T> {
    value.ok_or_else(|| Invalid(format!("`{key}` is required for {context}")).into())
}

fn csv_error(e: csv::Error) -> anyhow::Error {
    anyhow::Error::new(e).context("writing CSV")
}

pub fn spectra(args: &SpectraArgs, sink: &Sink) -> Result<Outcome> {
    if args.levels < 2 {
        return Err(Invalid("`levels` must be at least 2".into()).into());
    }
    let top = args.levels - 1;
    let path = sink.resolve(args.out.as_deref(), "spectra.csv");
    let mut summary = json!({ "command": "spectra", "model": model_name(args.model), "levels": args.levels });
    let artifacts = match args.model {
        SpectrumKind::Transmon => {
            let ej = require(args.ej, "ej", "the transmon model")?;
            let ec = require(args.ec, "ec", "the transmon model")?;
            let p = TransmonParams::new(ej, ec, args.ng)?;
            let table = transmon_levels(&p, top)?;
            summary["energies"] = json!(table.energies());
            summary["anharmonicity"] = json!(table.anharmonicity());
            summary["transmon_regime"] = json!(p.in_transmon_regime());
            summary["kerr_ratio_estimate"] = json!(kerr_ratio_from_ej_ec(ej, ec).ok());
            sink.emit(&path, |w| table.write_csv(w).map_err(csv_error), &table)?
        }
        SpectrumKind::Kerr => {
            let omega = require(args.omega, "omega", "the kerr model")?;
            let kerr = require(args.kerr, "kerr", "the kerr model")?;
            let p = KerrParams::new(omega, kerr)?;
            let table = kerr_levels(&p, top)?;
            summary["energies"] = json!(table.energies());
            summary["weakly_nonlinear"] = json!(p.is_weakly_nonlinear());
            sink.emit(&path, |w| table.write_csv(w).map_err(csv_error), &table)?
        }
        SpectrumKind::Qboson => {
            let omega = require(args.omega, "omega", "the qboson model")?;
            let q = require(args.q, "q", "the qboson model")?;
            let table = qboson_levels(omega, &QDeformation::arik_coon(q)?, top)?;
            summary["energies"] = json!(table.energies());
            sink.emit(&path, |w| table.write_csv(w).map_err(csv_error), &table)?
        }
        SpectrumKind::Compare => {
            let omega = require(args.omega, "omega", "the comparison")?;
            let kerr = require(args.kerr, "kerr", "the comparison")?;
            let table = spectrum_compare(omega, kerr, top)?;
            summary["q"] = json!(table.q);
            summary["max_gap"] = json!(table.rows.iter().map(|r| r.gap).fold(0.0, f64::max));
            sink.emit(&path, |w| table.write_csv(w).map_err(csv_error), &table)?
        }
    };
    summary["artifacts"] = json!(artifacts);
    Ok(Outcome::ok(summary))
}

fn model_name(kind: SpectrumKind) -> &'static str {
    match kind {
        SpectrumKind::Transmon => "transmon",
        SpectrumKind::Kerr => "kerr",
        SpectrumKind::Qboson => "qboson",
        SpectrumKind::Compare => "compare",
    }
}

#[derive(Serialize)]
struct QnumRow {
    n: u32,
    q_number: f64,
    q_factorial: f64,
    delta_abs: f64,
    delta_rel: Option<f64>,
}

pub fn qnum(args: &QnumArgs, sink: &Sink) -> Result<Outcome> {
    let d = if args.symmetric {
        QDeformation::symmetric(args.q)?
    } else {
        QDeformation::arik_coon(args.q)?
    };
    let rows = (0..=args.n_max)
        .map(|n| {
            let qn = q_number(n, &d);
            let delta_abs = f64::from(n) - qn;
            Ok(QnumRow {
                n,
                q_number: qn,
                q_factorial: q_factorial(n, &d)?,
                delta_abs,
                delta_rel: (n > 0).then(|| delta_abs / f64::from(n)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let path = sink.resolve(args.out.as_deref(), "qnum.csv");
    let artifacts = sink.emit(
        &path,
        |w| {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["n", "q_number", "q_factorial", "delta_abs", "delta_rel"])?;
            for r in &rows {
                out.write_record([
                    r.n.to_string(),
                    fmt_f64(r.q_number),
                    fmt_f64(r.q_factorial),
                    fmt_f64(r.delta_abs),
                    r.delta_rel.map(fmt_f64).unwrap_or_default(),
                ])?;
            }
            out.flush()?;
            Ok(())
        },
        &rows,
    )?;
    Ok(Outcome::ok(json!({
        "command": "qnum",
        "q": args.q,
        "flavor": if args.symmetric { "symmetric" } else { "arik-coon" },
        "n_max": args.n_max,
        "artifacts": artifacts,
    })))
}

pub fn theorem1(args: &Theorem1Args, sink: &Sink) -> Result<Outcome> {
    let structure = BurbanStructure {
        alpha: args.alpha,
        beta: args.beta,
        gamma: args.gamma,
        nu: args.nu,
        f0: args.f0,
    };
    let grid = args.deltas.clone().unwrap_or_else(default_delta_grid);
    let report = theorem1_check(&structure, &grid)?;
    let path = sink.resolve(args.out.as_deref(), "theorem1.csv");
    let artifacts = sink.emit(
        &path,
        |w| {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["delta", "gap0", "gap1", "gap2"])?;
            for r in &report.rows {
                out.write_record([fmt_f64(r.delta), fmt_f64(r.gap0), fmt_f64(r.gap1), fmt_f64(r.gap2)])?;
            }
            out.flush()?;
            Ok(())
        },
        &report,
    )?;
    Ok(Outcome::ok(json!({
        "command": "theorem1",
        "verdict": report.verdict,
        "pass": report.pass(),
        "slope": finite_or_null(report.slope),
        "intercept": finite_or_null(report.intercept),
        "gap0_vanishes": report.gap0_vanishes,
        "artifacts": artifacts,
    })))
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn read_matrix(arg: &UnitaryArg) -> Result<ComplexMatrix> {
    let rows: MatrixJson = match arg {
        UnitaryArg::Inline(rows) => rows.clone(),
        UnitaryArg::File(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| Invalid(format!("{}: {e}", path.display())))?
        }
    };
    Ok(matrix_from_json(&rows)?)
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn perm(args: &PermArgs, sink: &Sink) -> Result<Outcome> {
    let a = match (&args.matrix, args.random) {
        (Some(m), None) => read_matrix(m)?,
        (None, Some(n)) => {
            if n == 0 {
                return Err(Invalid("`random` must be at least 1".into()).into());
            }
            ginibre_matrix(n, args.seed)
        }
        _ => return Err(Invalid("give exactly one of `matrix` or `random`".into()).into()),
    };
    let algorithm = Algorithm::from(args.algorithm);
    let value = permanent(&a, algorithm)?;
    let q_value = args.q.map(|q| q_permanent(&a, q)).transpose()?;
    let n = a.nrows();
    let alg_name = match algorithm {
        Algorithm::Naive => "naive",
        Algorithm::Ryser => "ryser",
    };
    let mut rows = vec![json!({ "quantity": "permanent", "algorithm": alg_name, "n": n, "q": null, "value": complex_json(value) })];
    if let (Some(q), Some(v)) = (args.q, q_value) {
        rows.push(json!({ "quantity": "q_permanent", "algorithm": "inversions", "n": n, "q": q, "value": complex_json(v) }));
    }
    let path = sink.resolve(args.out.as_deref(), "perm.csv");
    let artifacts = sink.emit(
        &path,
        |w| {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["quantity", "algorithm", "n", "q", "value_re", "value_im"])?;
            out.write_record(["permanent", alg_name, &n.to_string(), "", &fmt_f64(value.re), &fmt_f64(value.im)])?;
            if let (Some(q), Some(v)) = (args.q, q_value) {
                out.write_record([
                    "q_permanent",
                    "inversions",
                    &n.to_string(),
                    &fmt_f64(q),
                    &fmt_f64(v.re),
                    &fmt_f64(v.im),
                ])?;
            }
            out.flush()?;
            Ok(())
        },
        &rows,
    )?;
    Ok(Outcome::ok(json!({
        "command": "perm",
        "n": n,
        "algorithm": alg_name,
        "value": complex_json(value),
        "q_value": q_value.map(complex_json),
        "artifacts": artifacts,
    })))
}

fn load_unitary(args: &FockArgs) -> Result<ModeUnitary> {
    let modes = args.modes.unwrap_or(args.input.modes());
    if modes != args.input.modes() {
        return Err(Invalid(format!(
            "`input_occupation` has {} entries but `modes` is {modes}",
            args.input.modes()
        ))
        .into());
    }
    let u = match (args.haar_seed, &args.unitary) {
        (Some(seed), None) => haar_unitary(modes, seed)?,
        (None, Some(arg)) => ModeUnitary::new(read_matrix(arg)?)?,
        _ => return Err(Invalid("give exactly one of `haar_seed` or `unitary`".into()).into()),
    };
    if u.dim() != modes {
        return Err(Invalid(format!("unitary is {0}x{0} but `modes` is {modes}", u.dim())).into());
    }
    Ok(u)
}

#[derive(Serialize)]
struct DistMirror<'a> {
    species: String,
    input: &'a Occupation,
    outcomes: Vec<OutcomeEntry<'a>>,
}

#[derive(Serialize)]
struct OutcomeEntry<'a> {
    occupation: &'a Occupation,
    probability: f64,
}

/// Mesh-engine distribution plus the cross-checks reported in summaries.
struct Computed {
    dist: OutcomeDistribution,
    summary: Value,
}

fn compute_distribution(args: &FockArgs) -> Result<Computed> {
    let u = load_unitary(args)?;
    let l = &args.input;
    let n = l.total();
    let f = CharacteristicF::for_photons(args.species, n)?;
    let state = evolve_unitary(&u, l, &f)?;
    let dist = state.probabilities()?;
    let mut summary = json!({
        "modes": u.dim(),
        "photons": n,
        "species": args.species.to_string(),
        "input": l.to_string(),
        "outcomes": dist.basis().len(),
        "norm": state.norm(),
        "total_probability": dist.total(),
    });
    if args.species == Species::Standard {
        summary["tv_vs_permanent"] = json!(tv_distance(&dist, &distribution_permanent(&u, l)?)?);
    }
    if n <= ORACLE_MAX_PHOTONS && u.dim() <= ORACLE_MAX_MODES {
        let oracle = substitution_oracle(&u, l, &f)?.probabilities()?;
        summary["tv_vs_substitution"] = json!(tv_distance(&dist, &oracle)?);
    }
    Ok(Computed { dist, summary })
}

pub fn dist(args: &FockArgs, sink: &Sink) -> Result<Outcome> {
    if args.shots.is_some() || args.seed.is_some() {
        return Err(Invalid("`shots` and `seed` apply to sample, not dist".into()).into());
    }
    let Computed { dist, mut summary } = compute_distribution(args)?;
    let mirror = DistMirror {
        species: args.species.to_string(),
        input: &args.input,
        outcomes: dist
            .iter()
            .map(|(occupation, probability)| OutcomeEntry { occupation, probability })
            .collect(),
    };
    let path = sink.resolve(args.out.as_deref(), "dist.csv");
    let artifacts = sink.emit(&path, |w| dist.write_csv(w).map_err(csv_error), &mirror)?;
    summary["command"] = json!("dist");
    summary["artifacts"] = json!(artifacts);
    Ok(Outcome::ok(summary))
}

pub const DEFAULT_SHOTS: usize = 1000;

pub fn sample(args: &FockArgs, sink: &Sink) -> Result<Outcome> {
    let shots = args.shots.unwrap_or(DEFAULT_SHOTS);
    let seed = args.seed.unwrap_or(0);
    let Computed { dist, mut summary } = compute_distribution(args)?;
    let samples = sample_outcomes(&dist, seed, shots);
    if !samples.is_empty() {
        let empirical = empirical_distribution(&dist, &samples)?;
        summary["tv_empirical"] = json!(tv_distance(&dist, &empirical)?);
    }
    let path = sink.resolve(args.out.as_deref(), "samples.txt");
    let artifacts = sink.emit(
        &path,
        |w| {
            for s in &samples {
                writeln!(w, "{s}")?;
            }
            Ok(())
        },
        &json!({ "seed": seed, "shots": shots, "samples": &samples }),
    )?;
    summary["command"] = json!("sample");
    summary["shots"] = json!(shots);
    summary["seed"] = json!(seed);
    summary["artifacts"] = json!(artifacts);
    Ok(Outcome::ok(summary))
}

pub fn validate(args: &ValidateArgs, sink: &Sink) -> Result<Outcome> {
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let report = engine_equivalence(&seeds, args.max_modes, args.max_photons)?;
    let path = sink.resolve(args.out.as_deref(), "validate.csv");
    let artifacts = sink.emit(
        &path,
        |w| {
            let mut out = csv::Writer::from_writer(w);
            out.write_record([
                "seed",
                "modes",
                "input",
                "tv_permanent_evolve",
                "tv_evolve_oracle",
                "tv_permanent_oracle",
            ])?;
            for c in &report.cases {
                out.write_record([
                    c.seed.to_string(),
                    c.modes.to_string(),
                    c.input.to_string(),
                    fmt_f64(c.tv_permanent_evolve),
                    fmt_f64(c.tv_evolve_oracle),
                    fmt_f64(c.tv_permanent_oracle),
                ])?;
            }
            out.flush()?;
            Ok(())
        },
        &report,
    )?;
    Ok(Outcome {
        summary: json!({
            "command": "validate",
            "cases": report.cases.len(),
            "max_tv": report.max_tv,
            "tolerance": report.tolerance,
            "pass": report.pass,
            "artifacts": artifacts,
        }),
        ok: report.pass,
    })
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    algorithm: &'static str,
    wall_time_ns: u128,
    value: [f64; 2],
}

/// Largest dimension timed with the naive kernel.
const BENCH_NAIVE_MAX: usize = 10;

pub fn bench(args: &BenchArgs, sink: &Sink) -> Result<Outcome> {
    if args.repeats == 0 {
        return Err(Invalid("`repeats` must be at least 1".into()).into());
    }
    let partitions = rayon::current_num_threads();
    let mut rows = Vec::new();
    for n in 1..=args.max_n {
        let a = ginibre_matrix(n, args.seed.wrapping_add(n as u64));
        let mut time = |name: &'static str, kernel: &dyn Fn() -> qboson::Result<Complex64>| -> Result<()> {
            let mut best = u128::MAX;
            let mut value = Complex64::new(0.0, 0.0);
            for _ in 0..args.repeats {
                let start = Instant::now();
                value = kernel()?;
                best = best.min(start.elapsed().as_nanos());
            }
            rows.push(BenchRow {
                n,
                algorithm: name,
                wall_time_ns: best,
                value: [value.re, value.im],
            });
            Ok(())
        };
        if n <= BENCH_NAIVE_MAX.min(NAIVE_CAP) {
            time("naive", &|| permanent_naive(&a))?;
        }
        time("ryser", &|| permanent_ryser(&a))?;
        time("ryser_parallel", &|| permanent_ryser_parallel(&a, partitions))?;
    }
    let path = sink.resolve(args.out.as_deref(), "bench.csv");
    let artifacts = sink.emit(
        &path,
        |w| {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["n", "algorithm", "wall_time_ns", "value_re", "value_im"])?;
            for r in &rows {
                out.write_record([
                    r.n.to_string(),
                    r.algorithm.to_string(),
                    r.wall_time_ns.to_string(),
                    fmt_f64(r.value[0]),
                    fmt_f64(r.value[1]),
                ])?;
            }
            out.flush()?;
            Ok(())
        },
        &rows,
    )?;
    Ok(Outcome::ok(json!({
        "command": "bench",
        "max_n": args.max_n,
        "threads": partitions,
        "artifacts": artifacts,
    })))
}
