use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use subshift::conjugacy::{swap_admissible, verify_conjugacy};
use subshift::escape::{escape_rate, lambda_sequence, local_rate};
use subshift::perturbation::{check_structure, decay_profile, sofic_perturb_set, EngineOptions, PerturbationResult};
use subshift::{Error, ErrorKind, Result};

mod job;

use job::JobSpec;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "subshift", version, about = "Entropy of subshifts with forbidden words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON record instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Root isolation tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Oracle horizon (at least 6).
    #[arg(long, global = true)]
    nmax: Option<usize>,
    /// Horizon for structural checks.
    #[arg(long, global = true)]
    horizon: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Ambient and perturbed entropy.
    Entropy { spec: PathBuf },
    /// Generating-function prefix against oracle counts.
    Series { spec: PathBuf },
    /// Entropy decay along a word family.
    Decay { spec: PathBuf },
    /// Swap conjugacy between X_u and X_w.
    Conjugacy { spec: PathBuf },
    /// Nonemptiness, irreducibility and synchronization at a horizon.
    Structure { spec: PathBuf },
    /// Escape rates into holes of the full shift.
    Escape { mode: EscapeMode, spec: PathBuf },
    /// Presentation of the perturbed shift.
    Present { spec: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum EscapeMode {
    Local,
    Rate,
    Sequence,
}

struct Output {
    record: Value,
    table: String,
    /// Set when a closed form disagrees with the oracle.
    disagreement: Option<String>,
}

impl Output {
    fn new(record: Value, table: String) -> Self {
        Self { record, table, disagreement: None }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut record = out.record;
                record["schema_version"] = json!(SCHEMA_VERSION);
                println!("{}", serde_json::to_string_pretty(&record).expect("records serialize"));
            } else {
                print!("{}", out.table);
            }
            match out.disagreement {
                Some(why) => {
                    eprintln!("error: oracle disagreement: {why}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Parse => 1,
                ErrorKind::Unsupported => 2,
                ErrorKind::Oracle => 3,
            })
        }
    }
}

fn options(cli: &Cli, job: &JobSpec) -> EngineOptions {
    let mut opts = EngineOptions::default();
    if let Some(tol) = cli.tol.or(job.tol) {
        opts.tol = tol;
    }
    if let Some(n) = cli.nmax.or(job.nmax) {
        opts.n_max = n;
    }
    opts.n_max = opts.horizon();
    opts
}

fn run(cli: &Cli) -> Result<Output> {
    let spec = match &cli.command {
        Command::Entropy { spec }
        | Command::Series { spec }
        | Command::Decay { spec }
        | Command::Conjugacy { spec }
        | Command::Structure { spec }
        | Command::Escape { spec, .. }
        | Command::Present { spec } => spec,
    };
    let job = job::load(spec)?;
    if let Some(tol) = cli.tol.or(job.tol) {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::Parse(format!("tolerance {tol} outside (0, 1)")));
        }
    }
    let opts = options(cli, &job);
    match &cli.command {
        Command::Entropy { .. } => entropy(&job, opts),
        Command::Series { .. } => series(&job, opts),
        Command::Decay { .. } => decay(&job, opts),
        Command::Conjugacy { .. } => conjugacy(&job, opts),
        Command::Structure { .. } => structure(&job, cli.horizon.or(job.horizon).unwrap_or(12)),
        Command::Escape { mode, .. } => escape(&job, *mode, opts),
        Command::Present { .. } => present(&job, opts),
    }
}

fn fmt_entropy(h: f64) -> String {
    if h.is_finite() {
        format!("{h:.10}")
    } else {
        "-inf".into()
    }
}

fn lambda_disagreement(r: &PerturbationResult) -> Option<String> {
    (!r.oracle.lambda_agrees)
        .then(|| format!("{} engine gives lambda {} but the oracle gives {}", r.engine, r.lambda, r.oracle.oracle_lambda))
}

fn entropy(job: &JobSpec, opts: EngineOptions) -> Result<Output> {
    let system = job.system()?;
    let k = job.forbidden()?;
    let r = system.perturb(&k, opts)?;
    let mut table = format!(
        "system          {system}\nforbidden       {}\nengine          {}\nambient lambda  {:.10}\nlambda          {:.10}\nentropy         {}\noracle lambda   {:.10}\noracle agrees   {}\n",
        k.words().iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" "),
        r.engine,
        r.ambient_lambda,
        r.lambda,
        fmt_entropy(r.entropy),
        r.oracle.oracle_lambda,
        r.oracle.lambda_agrees,
    );
    for note in &r.notes {
        table.push_str(&format!("note            {note}\n"));
    }
    let record = json!({
        "command": "entropy",
        "system": system.to_string(),
        "forbidden": k.words(),
        "result": r,
    });
    let mut out = Output::new(record, table);
    out.disagreement = lambda_disagreement(&r);
    Ok(out)
}

fn series(job: &JobSpec, opts: EngineOptions) -> Result<Output> {
    let system = job.system()?;
    let k = job.forbidden()?;
    let r = system.perturb(&k, opts)?;
    let coeffs: Option<Vec<String>> = r.series.as_ref().map(|s| s.coeffs.iter().map(|c| c.to_string()).collect());
    let mut table = format!("engine {}  normalization shift {:?}\n{:>4}  {:>12}  {:>12}\n", r.engine, r.normalization_shift, "n", "series", "oracle");
    for (n, count) in r.oracle.counts.iter().enumerate() {
        let c = coeffs.as_ref().and_then(|c| c.get(n).cloned()).unwrap_or_else(|| "-".into());
        table.push_str(&format!("{n:>4}  {c:>12}  {count:>12}\n"));
    }
    let record = json!({
        "command": "series",
        "system": system.to_string(),
        "forbidden": k.words(),
        "engine": r.engine,
        "normalization_shift": r.normalization_shift,
        "generating_function": r.generating_function,
        "series": coeffs,
        "counts": r.oracle.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "series_matches": r.oracle.series_matches,
        "lambda": r.lambda,
        "lambda_agrees": r.oracle.lambda_agrees,
    });
    let mut out = Output::new(record, table);
    out.disagreement = match r.oracle.series_matches {
        Some(false) => Some(format!("{} series differs from the oracle counts", r.engine)),
        _ => lambda_disagreement(&r),
    };
    Ok(out)
}

fn decay(job: &JobSpec, opts: EngineOptions) -> Result<Output> {
    let system = job.system()?;
    let family = job.family()?;
    let rows = decay_profile(&system, &family, job.range()?, opts)?;
    let mut table = format!("{:>4}  {:<20}  {:>14}  {:>14}  {:>14}  {:>14}\n", "n", "word", "lambda", "gap", "gap*lambda^n", "n(h-h_n)");
    for r in &rows {
        table.push_str(&format!(
            "{:>4}  {:<20}  {:>14.10}  {:>14.6e}  {:>14.8}  {:>14.8}\n",
            r.n,
            r.word.to_string(),
            r.lambda,
            r.gap,
            r.scaled_gap,
            r.scaled_entropy_gap
        ));
    }
    let record = json!({ "command": "decay", "system": system.to_string(), "family": family, "rows": rows });
    Ok(Output::new(record, table))
}

fn conjugacy(job: &JobSpec, opts: EngineOptions) -> Result<Output> {
    let g = job.system()?.presentation()?;
    let (u, w) = job.pair()?;
    let admissibility = swap_admissible(&g, &u, &w)?;
    if !admissibility.admissible {
        let table = format!("swap {u} <-> {w} not admissible\n{}\n", admissibility.reasons.join("\n"));
        let record = json!({ "command": "conjugacy", "u": u, "w": w, "admissibility": admissibility });
        return Ok(Output::new(record, table));
    }
    let report = verify_conjugacy(&g, &u, &w, opts.n_max, opts)?;
    let mut table = format!("swap {u} <-> {w} admissible\n{:>4}  {:>10}  {:>10}  {}\n", "j", "#L_j(X_u)", "#L_j(X_w)", "bijective");
    for l in &report.levels {
        table.push_str(&format!("{:>4}  {:>10}  {:>10}  {}\n", l.len, l.count_u, l.count_w, l.bijective));
    }
    table.push_str(&format!(
        "entropy X_u {}  X_w {}  agree {}\n",
        fmt_entropy(report.entropy_u),
        fmt_entropy(report.entropy_w),
        report.entropies_agree
    ));
    let record = json!({ "command": "conjugacy", "u": u, "w": w, "report": report });
    Ok(Output::new(record, table))
}

fn structure(job: &JobSpec, horizon: usize) -> Result<Output> {
    let g = job.system()?.presentation()?;
    let words = job.words()?;
    let candidate = job.candidate()?;
    let r = check_structure(&g, &words, horizon, candidate.as_ref());
    let mut table = format!(
        "horizon        {}\nnonempty       {}\nirreducible    {} (word lengths <= {})\n",
        r.horizon, r.nonempty, r.irreducible.verified, r.irreducible.max_len
    );
    if let Some((a, b)) = &r.irreducible.witness {
        table.push_str(&format!("witness        no connector from {a} to {b}\n"));
    }
    if let Some(c) = &r.certificate {
        table.push_str(&format!(
            "candidate {}    avoids K {}  in language {}  sync ambient {}  sync perturbed {}\n",
            c.word, c.avoids_forbidden, c.in_language, c.synchronizing_ambient, c.synchronizing_perturbed
        ));
    }
    Ok(Output::new(json!({ "command": "structure", "report": r }), table))
}

fn escape(job: &JobSpec, mode: EscapeMode, opts: EngineOptions) -> Result<Output> {
    match mode {
        EscapeMode::Local => {
            let r = local_rate(&job.holes()?)?;
            let rows: Vec<String> =
                r.alpha.iter().map(|row| row.iter().map(|q| format!("{q:>8}")).collect::<Vec<_>>().join(" ")).collect();
            let table = format!(
                "alpha\n{}\ndiagonally dominant  {}\nT                    {}\nlambda               {}\nrho                  {}\n",
                rows.join("\n"),
                r.diagonally_dominant,
                r.t,
                r.lambda,
                r.rho
            );
            Ok(Output::new(json!({ "command": "escape-local", "points": job.points, "result": r }), table))
        }
        EscapeMode::Rate => {
            let symbols = job.symbols()?;
            let words = job.words()?;
            let rho = escape_rate(symbols, &words, opts)?;
            let table = format!("escape rate  {}\n", fmt_entropy(rho));
            let record = json!({ "command": "escape-rate", "symbols": symbols, "words": words, "rate": rho });
            Ok(Output::new(record, table))
        }
        EscapeMode::Sequence => {
            let rows = lambda_sequence(&job.holes()?, job.range()?, opts.tol)?;
            let mut table = format!("{:>4}  {:>16}  {:>16}\n", "n", "lambda_n", "scaled gap");
            for r in &rows {
                table.push_str(&format!("{:>4}  {:>16.12}  {:>16.10}\n", r.n, r.lambda_n, r.scaled_gap));
            }
            Ok(Output::new(json!({ "command": "escape-sequence", "points": job.points, "rows": rows }), table))
        }
    }
}

fn present(job: &JobSpec, opts: EngineOptions) -> Result<Output> {
    let system = job.system()?;
    let k = job.forbidden()?;
    let s = sofic_perturb_set(&system.presentation()?, &k, opts)?;
    let p = &s.presentation;
    let mut table = format!("vertices {}  alphabet {}\n", p.vertices(), p.alphabet());
    for (from, to, label) in p.triples() {
        table.push_str(&format!("{from:>4} -> {to:<4} {label}\n"));
    }
    let record = json!({
        "command": "present",
        "system": system.to_string(),
        "forbidden": k.words(),
        "vertices": p.vertices(),
        "alphabet": p.alphabet(),
        "edges": p.triples(),
        "lambda": s.result.lambda,
    });
    let mut out = Output::new(record, table);
    out.disagreement = lambda_disagreement(&s.result);
    Ok(out)
}
