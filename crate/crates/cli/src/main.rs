mod error;
mod job;
mod output;
mod plot;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sphtrop::horn::{enumerate_t, horn_check_with};
use sphtrop::matrix::fmt_valuations;
use sphtrop::par::{with_threads, Exec};
use sphtrop::rat::fmt_q;
use sphtrop::trop::{
    check_on_variety, in_valuation_cone, punctured_curve_classifier, sample_family_with, val_point_with, CurveTrop,
    Membership, Point, SampleConfig,
};
use sphtrop::{GroupSpace, HornQuery, TropPoint, VarietySpec};

use error::{CliError, CliResult};
use job::{core_error, Job};
use output::{points_csv, strings, Document, Format, Output, PointRecord, SampleMeta};

/// Spherical tropicalization over truncated Puiseux series.
#[derive(Parser, Debug)]
#[command(name = "sphtrop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Series precision: terms are known below t^P.
    #[arg(long, global = true, allow_hyphen_values = true)]
    precision: Option<String>,

    /// Exponent box for sampling, as lo..hi.
    #[arg(long = "box", global = true, allow_hyphen_values = true)]
    exponent_box: Option<String>,

    /// Random draws per sampling cell.
    #[arg(long, global = true)]
    draws: Option<String>,

    #[arg(long, global = true)]
    seed: Option<String>,

    /// Worker threads for the engine; 1 runs everything sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tropical point val(x) of a point.
    Val(JobArgs),
    /// Smith normal form g·M·h = D, cross-checked against the minor method.
    Snf(JobArgs),
    /// Whether a point satisfies ideal generators to working precision.
    Check(JobArgs),
    /// Tropical points attained by a parametrized family.
    Sample(JobArgs),
    /// Horn inequalities.
    #[command(subcommand)]
    Horn(HornCommand),
    /// Membership in the valuation cone.
    Cone(JobArgs),
    /// Tropicalization type of a curve in the punctured plane.
    Classify(JobArgs),
    /// SVG scatter plot of a 2-D point cloud saved as CSV.
    Plot {
        csv: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum HornCommand {
    /// List the index triples T_r^n.
    Enumerate { n: usize, r: usize },
    /// Test alpha, beta, gamma against Horn's inequalities.
    Check(JobArgs),
}

/// A job file and inline values for its keys. Inline values win.
#[derive(Args, Debug, Default)]
struct JobArgs {
    job: Option<PathBuf>,
    #[arg(long)]
    space: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    generators: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    family: Option<String>,
    #[arg(long)]
    params: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    coords: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
}

impl JobArgs {
    fn load(&self, cli: &Cli) -> CliResult<Job> {
        let mut job = match &self.job {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
                Job::parse(&path.display().to_string(), &text)?
            }
            None => Job::default(),
        };
        for (key, value) in [
            ("space", &self.space),
            ("point", &self.point),
            ("generators", &self.generators),
            ("family", &self.family),
            ("params", &self.params),
            ("coords", &self.coords),
            ("curve", &self.curve),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("precision", &cli.precision),
            ("box", &cli.exponent_box),
            ("draws", &cli.draws),
            ("seed", &cli.seed),
        ] {
            job.set_flag(key, value.as_deref());
        }
        Ok(job)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let rendered = match &cli.command {
        Command::Plot { csv } => {
            let text = fs::read_to_string(csv).map_err(|e| CliError::input(format!("cannot read {}: {e}", csv.display())))?;
            plot::render(&plot::read_csv(&csv.display().to_string(), &text)?)
        }
        command => {
            let out = with_threads(cli.threads, |exec| dispatch(cli, command, exec))?;
            out.render(cli.format)
                .ok_or_else(|| CliError::input("--format csv is only available for val and sample"))?
        }
    };
    match &cli.out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli, command: &Command, exec: Exec) -> CliResult<Output> {
    match command {
        Command::Val(a) => val(&a.load(cli)?, exec),
        Command::Snf(a) => snf(&a.load(cli)?, exec),
        Command::Check(a) => check(&a.load(cli)?),
        Command::Sample(a) => sample(&a.load(cli)?, exec),
        Command::Horn(HornCommand::Enumerate { n, r }) => horn_enumerate(*n, *r),
        Command::Horn(HornCommand::Check(a)) => horn(&a.load(cli)?, exec),
        Command::Cone(a) => cone(&a.load(cli)?),
        Command::Classify(a) => classify(&a.load(cli)?),
        Command::Plot { .. } => unreachable!("plot is handled before dispatch"),
    }
}

fn point_output(points: Vec<(TropPoint, Option<String>)>, space: &GroupSpace, generators: usize) -> (Vec<PointRecord>, String) {
    let csv = points_csv(space, &points.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>());
    let records = points.iter().map(|(p, w)| PointRecord::new(p, w.clone(), generators)).collect();
    (records, csv)
}

fn val(job: &Job, exec: Exec) -> CliResult<Output> {
    job.expect_mode("point")?;
    let space = job.space()?;
    let precision = job.precision()?;
    let point = job.point(&space, precision)?;
    let tp = val_point_with(&space, &point, exec).map_err(|e| core_error(e, precision))?;
    let text = format!("{tp}\n");
    let (points, csv) = point_output(vec![(tp, Some(point.to_literal()))], &space, 0);
    Ok(Output {
        document: Document::Val { points },
        text,
        csv: Some(csv),
    })
}

fn snf(job: &Job, exec: Exec) -> CliResult<Output> {
    job.expect_mode("point")?;
    let precision = job.precision()?;
    let rows = job.require("point")?.matrix()?.len();
    let space = job.space_or(GroupSpace::gl(rows.max(1)))?;
    if !space.kind.is_matrix_group() {
        return Err(CliError::input(format!("snf needs a matrix space, not {space}")));
    }
    let Point::Matrix(m) = job.point(&space, precision)? else {
        unreachable!("matrix spaces give matrix points")
    };
    let smith = m.smith_normal_form().map_err(|e| core_error(e, precision))?;
    let minors = m.invariant_factors_minors_with(exec).map_err(|e| core_error(e, precision))?;
    let alphas = smith.invariant_factors();
    let agree = alphas == minors;
    let reproduces = smith.reproduces(&m);
    let text = format!(
        "g = {}\nD = {}\nh = {}\ninvariant factors: ({})\nminor method: ({}) {}\n",
        smith.left.to_literal(),
        smith.diagonal.to_literal(),
        smith.right.to_literal(),
        fmt_valuations(alphas.alphas()),
        fmt_valuations(minors.alphas()),
        if agree && reproduces { "agrees" } else { "DISAGREES" },
    );
    Ok(Output {
        document: Document::Snf {
            space: space.to_string(),
            left: smith.left.to_literal(),
            diagonal: smith.diagonal.to_literal(),
            right: smith.right.to_literal(),
            invariant_factors: strings(alphas.alphas()),
            minor_method: strings(minors.alphas()),
            agree,
            reproduces,
        },
        text,
        csv: None,
    })
}

fn generators(job: &Job, space: &GroupSpace) -> CliResult<Vec<sphtrop::Expression>> {
    let f = job.require("generators")?;
    let gens = f.expressions()?;
    VarietySpec::ideal(*space, gens.clone()).map_err(|e| f.error(0, e))?;
    Ok(gens)
}

fn check(job: &Job) -> CliResult<Output> {
    job.expect_mode("ideal-check")?;
    let space = job.space()?;
    let precision = job.precision()?;
    let point = job.point(&space, precision)?;
    let gens = generators(job, &space)?;
    let verdict = check_on_variety(&gens, &point).map_err(|e| core_error(e, precision))?;
    let (name, generator, valuation, text) = match &verdict {
        Membership::OnVariety => (
            "on-variety",
            None,
            None,
            format!("on variety: all {} generators vanish to precision\n", gens.len()),
        ),
        Membership::Violated { generator, valuation } => (
            "violated",
            Some(gens[*generator].to_string()),
            Some(fmt_q(valuation)),
            format!(
                "violated: generator {} ({}) has valuation {}\n",
                generator + 1,
                gens[*generator],
                fmt_q(valuation)
            ),
        ),
        Membership::Inconclusive => ("inconclusive", None, None, "inconclusive at this precision\n".to_string()),
    };
    Ok(Output {
        document: Document::Check {
            space: space.to_string(),
            verdict: name,
            generator,
            valuation,
            generators_checked: gens.len(),
        },
        text,
        csv: None,
    })
}

fn sample(job: &Job, exec: Exec) -> CliResult<Output> {
    job.expect_mode("family-sweep")?;
    let space = job.space()?;
    let entries = job.family(&space)?;
    let family = job.require("family")?;
    let spec = VarietySpec::param(space, entries).map_err(|e| family.error(0, e))?;
    let ideal = match job.get("generators") {
        Some(_) => Some(generators(job, &space)?),
        None => None,
    };
    let checked = ideal.as_ref().map_or(0, Vec::len);
    let (lo, hi) = job.exponent_box()?;
    let config = SampleConfig {
        lo,
        hi,
        draws_per_cell: job.draws()?,
        seed: job.seed()?,
        precision: job.precision()?,
        ideal,
    };
    let report = sample_family_with(&spec, &config, exec).map_err(|e| core_error(e, config.precision))?;
    let meta = SampleMeta {
        space: space.to_string(),
        seed: config.seed,
        exponent_box: [lo, hi],
        draws: config.draws_per_cell,
        precision: fmt_q(&config.precision),
        cells: report.cells,
        instantiations: report.instantiations,
        skipped: report.skipped,
        ideal_violations: report.ideal_violations,
    };
    let mut text = format!(
        "# {} points on {space}: {} cells, {} instantiations, {} skipped, {} off the ideal, seed {}\n",
        report.samples.len(),
        report.cells,
        report.instantiations,
        report.skipped,
        report.ideal_violations,
        config.seed
    );
    for s in &report.samples {
        text.push_str(&format!("{}  at  {}\n", s.point, s.witness.to_literal()));
    }
    let attained = report
        .samples
        .into_iter()
        .map(|s| {
            let w = s.witness.to_literal();
            (s.point, Some(w))
        })
        .collect();
    let (points, csv) = point_output(attained, &space, checked);
    Ok(Output {
        document: Document::Sample { meta, points },
        text,
        csv: Some(csv),
    })
}

fn horn_enumerate(n: usize, r: usize) -> CliResult<Output> {
    if n == 0 || r == 0 || r > n {
        return Err(CliError::input(format!("need 1 <= r <= n, got n = {n}, r = {r}")));
    }
    if n > 12 {
        return Err(CliError::input("n above 12 is out of reach for enumeration"));
    }
    let triples: Vec<String> = enumerate_t(n, r).iter().map(ToString::to_string).collect();
    let text = triples.iter().map(|t| format!("{t}\n")).collect();
    Ok(Output {
        document: Document::HornEnumerate { n, r, triples },
        text,
        csv: None,
    })
}

fn horn(job: &Job, exec: Exec) -> CliResult<Output> {
    job.expect_mode("horn")?;
    let alpha = job.require("alpha")?.tuple()?;
    let beta = job.require("beta")?.tuple()?;
    let gamma = job.require("gamma")?.tuple()?;
    let query = HornQuery::new(alpha.clone(), beta.clone(), gamma.clone()).map_err(|e| core_error(e, sphtrop::rat::q(0)))?;
    let holds = horn_check_with(&query, exec);
    let violation = if holds {
        None
    } else if !query.satisfies_equality() {
        Some("trace".to_string())
    } else {
        query.first_violation().map(|t| t.to_string())
    };
    let text = match &violation {
        None => "holds\n".to_string(),
        Some(v) if v == "trace" => "fails: sum(alpha) + sum(beta) != sum(gamma)\n".to_string(),
        Some(v) => format!("fails: {v}\n"),
    };
    Ok(Output {
        document: Document::HornCheck {
            alpha: strings(&alpha),
            beta: strings(&beta),
            gamma: strings(&gamma),
            holds,
            violation,
        },
        text,
        csv: None,
    })
}

fn cone(job: &Job) -> CliResult<Output> {
    job.expect_mode("cone")?;
    let space = job.space()?;
    let f = job.require("coords")?;
    let coords = f.tuple()?;
    let member = in_valuation_cone(&space, &coords).map_err(|e| f.error(0, e))?;
    let tuple = sphtrop::rat::fmt_q_tuple(&coords);
    let text = if member {
        format!("{tuple} is in the valuation cone of {space}\n")
    } else {
        format!("{tuple} is not in the valuation cone of {space}\n")
    };
    Ok(Output {
        document: Document::Cone {
            space: space.to_string(),
            coords: strings(&coords),
            member,
        },
        text,
        csv: None,
    })
}

fn classify(job: &Job) -> CliResult<Output> {
    job.expect_mode("classify")?;
    let plane = GroupSpace::punctured_affine(2);
    let space = job.space_or(plane)?;
    if space != plane {
        return Err(CliError::input(format!("classify works on {plane}, not {space}")));
    }
    let f = job.require("curve")?;
    let curve = f.expression()?;
    let trop = punctured_curve_classifier(&curve).map_err(|e| f.error(0, e))?;
    let text = match trop {
        CurveTrop::RayMinus => "ray-minus: the curve misses the origin, trop is {v <= 0}\n",
        CurveTrop::FullCone => "full-cone: the curve passes through the origin, trop is everything\n",
    };
    Ok(Output {
        document: Document::Classify {
            curve: curve.to_string(),
            trop: trop.to_string(),
        },
        text: text.to_string(),
        csv: None,
    })
}
