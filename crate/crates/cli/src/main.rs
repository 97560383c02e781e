use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use digitop_core::corpus::{builtin, BUILTIN_NAMES};
use digitop_core::{
    cold_sets_audit, digital_box, interval, is_freezing, is_reducible, is_rigid, is_s_cold, minimize_freezing,
    parse_image_document, product, render_2d, render_svg, serialize, verify_theorems, wedge, DigitalImage, Error,
    ImageDocument, Point, Report, SearchBudget, SuiteOptions, Verdict,
};

#[derive(Parser)]
#[command(name = "digitop", version, about = "Rigidity, reducibility and fixed point sets of finite digital images")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Node budget for each search.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_nodes: u64,
    /// State budget for map-space searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget_states: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Input {
    /// Image document path, or a built-in image name.
    #[arg(long)]
    input: String,
}

#[derive(Args)]
struct SetArg {
    /// Subset as a JSON array of points, e.g. `[[0],[2]]`.
    #[arg(long)]
    set: String,
}

#[derive(Subcommand)]
enum Command {
    /// Summary of an image.
    Info(Input),
    /// Decide rigidity or reducibility.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Freezing-set queries.
    #[command(subcommand)]
    Freezing(FreezingCmd),
    /// Cold-set queries.
    #[command(subcommand)]
    Cold(ColdCmd),
    /// Build an image and print its document.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Draw a planar image as a character grid, optionally writing SVG.
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the structural results over the generated corpus.
    VerifyTheorems {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest k for the rigid-image search over [0,k]^2.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(1..=4))]
        extent: i64,
        /// Subsets sampled per rigid image.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    Rigid(Input),
    Reducible(Input),
}

#[derive(Subcommand)]
enum FreezingCmd {
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        set: SetArg,
    },
    /// Shrink a freezing set (default: all points) to a minimal one.
    Minimize {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        set: Option<String>,
    },
    /// Every minimal freezing set and minimal cold set.
    Audit(Input),
}

#[derive(Subcommand)]
enum ColdCmd {
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        set: SetArg,
        #[arg(long)]
        s: usize,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// The interval [a, b].
    Interval {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A box from `lo:hi` axis ranges with c_u adjacency.
    Box {
        #[arg(long = "axis", required = true, value_parser = parse_axis)]
        axes: Vec<(i64, i64)>,
        #[arg(long, default_value_t = 1)]
        u: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normal product NP_u of the factors (u defaults to the factor count).
    Product {
        #[arg(long = "factor", required = true)]
        factors: Vec<String>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wedge of two images as placed.
    Wedge {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_axis(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn load(input: &str) -> CliResult<DigitalImage> {
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {input}: {e}")))?;
        return Ok(parse_image_document(&text)?);
    }
    builtin(input).ok_or_else(|| {
        CliError::Usage(format!(
            "{input:?} is neither a file nor a built-in image ({})",
            BUILTIN_NAMES.join(", ")
        ))
    })
}

fn parse_set(x: &DigitalImage, text: &str) -> CliResult<Vec<usize>> {
    let points: Vec<Point> =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("--set must be a JSON array of points: {e}")))?;
    points
        .iter()
        .map(|p| {
            x.index_of(p)
                .ok_or_else(|| CliError::Usage(format!("{p} is not a point of the image")))
        })
        .collect()
}

fn points_of(x: &DigitalImage, indices: &[usize]) -> Vec<Point> {
    indices.iter().map(|&i| x.point(i).clone()).collect()
}

fn image_summary(x: &DigitalImage) -> Value {
    let mut v = json!({
        "points": x.len(),
        "dimension": x.dimension(),
        "adjacency": x.adjacency().family_name(),
        "edges": x.edge_count(),
    });
    if x.dimension() == 2 {
        v["grid"] = json!(render_2d(x).expect("planar image"));
    }
    v
}

fn constructed(query: &str, x: &DigitalImage, out: Option<PathBuf>, budget: SearchBudget) -> CliResult<Report> {
    let text = serialize(x, None);
    if let Some(path) = &out {
        fs::write(path, &text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut details = image_summary(x);
    details["document"] = serde_json::to_value(ImageDocument::from_image(x, None)).expect("documents serialize");
    if let Some(path) = out {
        details["out"] = json!(path.display().to_string());
    }
    Ok(Report::new(query, budget).with_details(details))
}

fn run(cli: Cli) -> CliResult<Report> {
    let budget = SearchBudget::new(cli.global.budget_nodes, cli.global.budget_states)?;
    let report = match cli.command {
        Command::Info(i) => {
            let x = load(&i.input)?;
            let mut details = image_summary(&x);
            details["input"] = json!(i.input);
            details["connected"] = json!(x.is_connected());
            details["components"] = json!(x.components().len());
            details["boundary"] = json!(points_of(&x, &x.boundary()));
            details["simple_closed_curve"] = json!(x.is_simple_closed_curve());
            Report::new("info", budget).with_details(details)
        }
        Command::Check(CheckCmd::Rigid(i)) => {
            let x = load(&i.input)?;
            let out = is_rigid(&x, budget);
            Report::from_outcome("check rigid", budget, &out).with_details(json!({ "input": i.input }))
        }
        Command::Check(CheckCmd::Reducible(i)) => {
            let x = load(&i.input)?;
            let out = is_reducible(&x, budget);
            let missed: Vec<Point> = out
                .witness
                .as_ref()
                .map(|f| {
                    let image = f.image_set();
                    (0..x.len()).filter(|p| !image.contains(p)).map(|p| x.point(p).clone()).collect()
                })
                .unwrap_or_default();
            let mut details = json!({ "input": i.input });
            if !missed.is_empty() {
                details["missed_points"] = json!(missed);
            }
            Report::from_outcome("check reducible", budget, &out).with_details(details)
        }
        Command::Freezing(FreezingCmd::Verify { input, set }) => {
            let x = load(&input.input)?;
            let a = parse_set(&x, &set.set)?;
            let out = is_freezing(&x, &a, budget)?;
            Report::from_outcome("freezing verify", budget, &out)
                .with_details(json!({ "input": input.input, "set": points_of(&x, &a) }))
        }
        Command::Freezing(FreezingCmd::Minimize { input, set }) => {
            let x = load(&input.input)?;
            let a = match set {
                Some(s) => parse_set(&x, &s)?,
                None => (0..x.len()).collect(),
            };
            let report = Report::new("freezing minimize", budget);
            let details = json!({ "input": input.input, "set": points_of(&x, &a) });
            match minimize_freezing(&x, &a, budget) {
                Ok(m) => {
                    let mut details = details;
                    details["minimal_set"] = json!(points_of(&x, &m));
                    Report {
                        verdict: Some(Verdict::True),
                        ..report
                    }
                    .with_details(details)
                }
                Err(Error::NotFreezing) => Report {
                    verdict: Some(Verdict::False),
                    ..report
                }
                .with_details(details),
                Err(Error::BudgetExhausted(why)) => {
                    let mut details = details;
                    details["reason"] = json!(why);
                    let mut r = Report {
                        verdict: Some(Verdict::Unknown),
                        ..report
                    };
                    r.stats.budget_exhausted = true;
                    r.with_details(details)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Freezing(FreezingCmd::Audit(i)) => {
            let x = load(&i.input)?;
            let report = Report::new("freezing audit", budget);
            match cold_sets_audit(&x, budget) {
                Ok(audit) => {
                    let sets = |v: &[Vec<usize>]| v.iter().map(|s| points_of(&x, s)).collect::<Vec<_>>();
                    Report {
                        verdict: Some(Verdict::True),
                        ..report
                    }
                    .with_details(json!({
                        "input": i.input,
                        "minimal_freezing_sets": sets(&audit.minimal_freezing_sets),
                        "minimal_cold_sets": audit.minimal_cold_sets.as_deref().map(sets),
                        "freezing_set_count": audit.freezing_set_count,
                        "cold_set_count": audit.cold_set_count,
                        "notes": audit.notes,
                    }))
                }
                Err(Error::BudgetExhausted(why)) => {
                    let mut r = Report {
                        verdict: Some(Verdict::Unknown),
                        ..report
                    };
                    r.stats.budget_exhausted = true;
                    r.with_details(json!({ "input": i.input, "reason": why }))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Cold(ColdCmd::Verify { input, set, s }) => {
            let x = load(&input.input)?;
            let a = parse_set(&x, &set.set)?;
            let out = is_s_cold(&x, &a, s, budget)?;
            Report::from_outcome("cold verify", budget, &out)
                .with_details(json!({ "input": input.input, "set": points_of(&x, &a), "s": s }))
        }
        Command::Construct(c) => match c {
            ConstructCmd::Interval { a, b, out } => constructed("construct interval", &interval(a, b)?, out, budget)?,
            ConstructCmd::Box { axes, u, out } => constructed("construct box", &digital_box(&axes, u)?, out, budget)?,
            ConstructCmd::Product { factors, u, out } => {
                let images = factors.iter().map(|f| load(f)).collect::<CliResult<Vec<_>>>()?;
                let x = product(&images, u.unwrap_or(images.len()))?;
                constructed("construct product", &x, out, budget)?
            }
            ConstructCmd::Wedge { left, right, out } => {
                let w = wedge(&load(&left)?, &load(&right)?)?;
                let mut r = constructed("construct wedge", &w.image, out, budget)?;
                r.details["wedge_point"] = json!(w.image.point(w.wedge_point));
                r
            }
        },
        Command::Render { input, out } => {
            let x = load(&input.input)?;
            let mut details = json!({ "input": input.input, "grid": render_2d(&x)? });
            if let Some(path) = out {
                fs::write(&path, render_svg(&x)?)
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
                details["out"] = json!(path.display().to_string());
            }
            Report::new("render", budget).with_details(details)
        }
        Command::VerifyTheorems { seed, extent, samples } => {
            let suite = verify_theorems(SuiteOptions {
                seed,
                budget,
                discovery_extent: extent,
                sampled_subsets: samples,
            })?;
            let mut r = Report::new("verify-theorems", budget);
            r.verdict = Some(suite.verdict());
            r.stats.budget_exhausted = suite.verdict() == Verdict::Unknown;
            let mut details = serde_json::to_value(&suite).expect("suite serializes");
            let mut summary: Vec<String> = suite
                .discoveries
                .iter()
                .map(|d| match d.smallest_rigid_size {
                    Some(n) => format!(
                        "rigid search {} {}: {} smallest rigid images of {n} points",
                        d.region, d.adjacency, d.smallest_rigid_count
                    ),
                    None => format!("rigid search {} {}: no rigid image", d.region, d.adjacency),
                })
                .collect();
            summary.extend(suite.claims.iter().map(|c| c.summary()));
            details["summary"] = json!(summary);
            r.with_details(details)
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let format = cli.global.format;
    match run(cli) {
        Ok(report) => {
            match format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            if report.is_unknown() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
