use std::path::Path;

use cmv_core::alflows::{
    integrate_flow_with, trajectory_via_spectral, FlowOptions, Generator, HamiltonianSpec, Part,
};
use cmv_core::brackets::{run_suite, Suite, SuiteConfig};
use cmv_core::cmv::random_verblunsky;
use cmv_core::ensembles::{sample_model, EnsembleSpec, Family, ModelDraw, RngStream};
use cmv_core::io::matrix_to_rows;
use cmv_core::opuc::verblunsky_from_measure;
use cmv_core::par::{try_map_indexed, Execution};
use cmv_core::spectral::unitary_eigensystem;
use cmv_core::{build_cmv, SpectralMeasureCircle, VerblunskySet};
use serde_json::json;

use crate::output::{fmt_f64, read_json, write_json, write_rows};
use crate::{
    Cli, Command, Failure, FamilyArg, FlowArgs, HistogramArgs, MethodArg, PartArg, SampleArgs, SpectralArgs,
    SuiteArg, VerifyArgs, EXIT_VERIFY,
};

pub fn run(cli: Cli) -> Result<(), Failure> {
    let quiet = cli.quiet;
    match cli.command {
        Command::Sample(a) => sample(a, quiet),
        Command::Flow(a) => flow(a, quiet),
        Command::Spectral(a) => spectral(a),
        Command::Verify(a) => verify(a, quiet),
        Command::Histogram(a) => histogram(a, quiet),
    }
}

fn note(quiet: bool, msg: impl AsRef<str>) {
    if !quiet {
        eprintln!("{}", msg.as_ref());
    }
}

fn sample(args: SampleArgs, quiet: bool) -> Result<(), Failure> {
    let family = match args.family {
        FamilyArg::Circular => Family::Circular,
        FamilyArg::Jacobi => Family::Jacobi,
        FamilyArg::Hermite => Family::Hermite,
    };
    let spec = EnsembleSpec { family, n: args.n, beta: args.beta, a: args.a, b: args.b };
    spec.validate().map_err(Failure::usage)?;
    note(quiet, format!("sampling {} draws of {:?} n={} beta={}", args.count, family, args.n, args.beta));
    let draws = try_map_indexed(args.count, Execution::Parallel, |i| {
        let mut rng = RngStream::new(args.seed, i as u64).rng();
        let draw = sample_model(&spec, &mut rng)?;
        let eig = draw.eigenvalues()?;
        Ok::<_, cmv_core::Error>((draw, eig))
    })
    .map_err(Failure::domain)?;
    write_rows(
        args.out.as_deref(),
        None,
        draws.iter().map(|(_, eig)| eig.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>()),
    )?;
    if let Some(path) = args.coeffs_out.as_deref() {
        let list: Vec<serde_json::Value> = draws
            .iter()
            .map(|(draw, _)| match draw {
                ModelDraw::Circular(v) => json!(v),
                ModelDraw::Jacobi { coefficients, matrix } => json!({
                    "alpha": coefficients,
                    "b": matrix.diagonal(),
                    "a": matrix.off_diagonal(),
                }),
                ModelDraw::Hermite(j) => json!({ "b": j.diagonal(), "a": j.off_diagonal() }),
            })
            .collect();
        write_json(Some(path), &list)?;
    }
    Ok(())
}

fn flow(args: FlowArgs, quiet: bool) -> Result<(), Failure> {
    let v0: VerblunskySet = match (&args.init, args.random) {
        (Some(path), _) => read_json(path)?,
        (None, true) => {
            let n = args.n.filter(|&n| n > 0).ok_or_else(|| Failure::usage("--random needs --n >= 1"))?;
            let seed = args.seed.ok_or_else(|| Failure::usage("--random needs --seed"))?;
            random_verblunsky(n, 0.9, &mut RngStream::new(seed, 0).rng())
        }
        (None, false) => return Err(Failure::usage("give --init FILE or --random")),
    };
    let part = match args.part {
        PartArg::Re => Part::Re,
        PartArg::Im => Part::Im,
    };
    let g = Generator::new(args.m, part).map_err(Failure::usage)?;
    if !(args.dt > 0.0) || !(args.t >= 0.0) || !args.t.is_finite() {
        return Err(Failure::usage(format!("need dt > 0 and t >= 0, got dt = {}, t = {}", args.dt, args.t)));
    }
    if args.record_every == 0 {
        return Err(Failure::usage("--record-every must be positive"));
    }
    note(quiet, format!("flow {:?} K_{} to t = {} ({:?})", part, args.m, args.t, args.method));
    let opts = FlowOptions { record_every: args.record_every };
    let traj = match args.method {
        MethodArg::Rk4 => integrate_flow_with(&v0, g, args.t, args.dt, opts),
        MethodArg::Spectral => {
            let steps = (args.t / args.dt - 1e-9).ceil().max(0.0) as usize;
            let mut times: Vec<f64> = (0..=steps)
                .filter(|&s| s % args.record_every == 0 || s == steps)
                .map(|s| (s as f64 * args.dt).min(args.t))
                .collect();
            times.dedup();
            trajectory_via_spectral(&v0, &HamiltonianSpec::from_generator(g), &times)
        }
    }
    .map_err(Failure::domain)?;
    note(
        quiet,
        format!(
            "{} states, max eigenvalue drift {:.3e}, max unitarity residual {:.3e}",
            traj.states.len(),
            traj.max_eigenvalue_drift(),
            traj.max_unitarity_residual()
        ),
    );
    write_json(args.out.as_deref(), &traj)
}

fn spectral(args: SpectralArgs) -> Result<(), Failure> {
    let v: VerblunskySet = if let Some(path) = &args.coeffs {
        let v: VerblunskySet = read_json(path)?;
        let mu = unitary_eigensystem(&build_cmv(&v)).map_err(Failure::domain)?;
        write_json(args.out.as_deref(), &mu)?;
        v
    } else {
        let path = args.measure.as_deref().expect("clap enforces one input");
        let mu: SpectralMeasureCircle = read_json(path)?;
        let v = verblunsky_from_measure(&mu).map_err(Failure::domain)?;
        write_json(args.out.as_deref(), &v)?;
        v
    };
    if let Some(path) = args.matrix_out.as_deref() {
        write_json(Some(path), &matrix_to_rows(build_cmv(&v).entries()))?;
    }
    Ok(())
}

fn verify(args: VerifyArgs, quiet: bool) -> Result<(), Failure> {
    let suite = match args.suite {
        SuiteArg::Brackets => Suite::Brackets,
        SuiteArg::Jacobian => Suite::Jacobian,
        SuiteArg::Cotangent => Suite::Cotangent,
        SuiteArg::Canonical => Suite::Canonical,
    };
    let cfg = SuiteConfig { suite, n: args.n, trials: args.trials, seed: args.seed, exec: Execution::Parallel };
    let report = run_suite(&cfg).map_err(|e| match e {
        cmv_core::Error::InvalidParams(_) => Failure::usage(e),
        other => Failure::domain(other),
    })?;
    for id in &report.identities {
        note(
            quiet,
            format!(
                "{} {:<48} max residual {:.3e} (tolerance {:.0e})",
                if id.passed { "PASS" } else { "FAIL" },
                id.identity,
                id.max_residual,
                id.tolerance
            ),
        );
    }
    write_json(args.report.as_deref(), &report)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY, message: format!("suite {suite:?} failed") })
    }
}

/// Bin index for half-open bins `[lo, hi)`, the last one closed.
pub fn bin_index(x: f64, min: f64, max: f64, bins: usize) -> Option<usize> {
    if !(x >= min && x <= max) {
        return None;
    }
    if x == max {
        return Some(bins - 1);
    }
    let i = ((x - min) / (max - min) * bins as f64).floor() as usize;
    Some(i.min(bins - 1))
}

fn read_samples(path: &Path) -> Result<Vec<f64>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        for field in record.iter().filter(|f| !f.trim().is_empty()) {
            let x: f64 = field
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{}: not a number: '{field}'", path.display())))?;
            out.push(x);
        }
    }
    Ok(out)
}

fn histogram(args: HistogramArgs, quiet: bool) -> Result<(), Failure> {
    if args.bins == 0 {
        return Err(Failure::usage("--bins must be at least 1"));
    }
    if !(args.max > args.min) || !args.min.is_finite() || !args.max.is_finite() {
        return Err(Failure::usage("need finite --min < --max"));
    }
    let samples = read_samples(&args.input)?;
    if samples.is_empty() {
        return Err(Failure::usage(format!("{}: no samples", args.input.display())));
    }
    let mut counts = vec![0u64; args.bins];
    let mut outside = 0usize;
    for &x in &samples {
        match bin_index(x, args.min, args.max, args.bins) {
            Some(i) => counts[i] += 1,
            None => outside += 1,
        }
    }
    if outside > 0 {
        note(quiet, format!("{outside} samples outside [{}, {}] were skipped", args.min, args.max));
    }
    let width = (args.max - args.min) / args.bins as f64;
    write_rows(
        args.out.as_deref(),
        Some(&["lower", "upper", "count"]),
        counts.iter().enumerate().map(|(i, c)| {
            let lo = args.min + width * i as f64;
            let hi = if i + 1 == args.bins { args.max } else { args.min + width * (i + 1) as f64 };
            vec![fmt_f64(lo), fmt_f64(hi), c.to_string()]
        }),
    )
}
