//! `webcurv`: command-line front end over web definition files.
//!
//! Reports are JSON objects `{schema_version, command, input, result}`
//! written to stdout or `--out`. Exit codes: 0 success, 1 computation error,
//! 2 usage error, 3 when `table1` disagrees with the expected table.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use webcurv::analysis::{
    classify_singularity, convexity_report, discriminant_component_report, find_invariant_lines, inflection_divisor,
    radial_census, singular_points,
};
use webcurv::catalog::{by_name, CATALOG, TABLE1};
use webcurv::curvature::{flatness_check, with_thread_cap};
use webcurv::legendre::{legendre_affine, legendre_projective};
use webcurv::render::{render_svg, RenderOptions};
use webcurv::web::{
    dehomogenize, discriminant, discriminant_degree, homogenize, projective_discriminant, AffineWeb, Foliation,
};
use webcurv::webfile::{parse_plane, WebFile};
use webcurv::{Error, Ring};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "webcurv", version, about = "Planar webs, Legendre duality and curvature")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Input {
    /// Web definition file.
    #[arg(long)]
    web: Option<PathBuf>,
    /// Catalog entry instead of a file, e.g. F3, H5, pencil:1/3.
    #[arg(long, conflicts_with = "web")]
    catalog: Option<String>,
    /// Coefficient ring when the input does not declare one: rational, quadext:<D> or complex.
    #[arg(long)]
    ring: Option<String>,
    /// Affine chart (0, 1 or 2) in which to read a web; 2 is the chart of the file.
    #[arg(long)]
    chart: Option<usize>,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long, alias = "report")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Legendre transform of a web, written as a web definition file.
    Legendre {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Discriminant curve of a web.
    Discriminant {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Inflection divisor of a foliation.
    Inflection {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Invariant lines of a foliation.
    Lines {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Whether the inflection divisor is a product of invariant lines.
    Convexity {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Singular points of a foliation with their linear type.
    Singularities {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Radial singularities counted by order.
    Census {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Sampled curvature and a flat / not-flat verdict.
    Flatness {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Flat threshold relative to the normalization scale.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Discriminant components and their invariance.
    DeltaReport {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Catalog of explicit foliations.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Radial census of the table entries, diffed against the expected counts.
    Table1 {
        #[command(flatten)]
        output: Output,
    },
    /// SVG of the real zero set of a polynomial, or of a web's discriminant.
    Render {
        /// Polynomial in x and y.
        #[arg(long, conflicts_with_all = ["web", "catalog"])]
        poly: Option<String>,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Window as xmin,xmax,ymin,ymax.
        #[arg(long, default_value = "-2,2,-2,2")]
        window: String,
        /// Grid cells per side.
        #[arg(long, default_value_t = 400)]
        grid: usize,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Names and descriptions.
    List {
        #[command(flatten)]
        output: Output,
    },
    /// A catalog entry as a web definition file.
    Emit {
        name: String,
        #[command(flatten)]
        output: Output,
    },
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(anyhow::Error),
    Compute(anyhow::Error),
    Mismatch,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        let usage = e.chain().any(|c| {
            c.downcast_ref::<std::io::Error>().is_some()
                || matches!(
                    c.downcast_ref::<Error>(),
                    Some(Error::Usage(_) | Error::Parse { .. } | Error::UnknownSymbol(_) | Error::MixedExtensions(..))
                )
        });
        if usage {
            Failure::Usage(e)
        } else {
            Failure::Compute(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        anyhow::Error::from(e).into()
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Loaded {
    file: WebFile,
    source: String,
}

impl Input {
    fn ring(&self) -> Res<Ring> {
        Ok(match &self.ring {
            Some(r) => Ring::parse(r)?,
            None => Ring::Rational,
        })
    }

    fn load(&self) -> Res<Loaded> {
        let ring = self.ring()?;
        let (file, source) = match (&self.web, &self.catalog) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let file = WebFile::parse_with_ring(&text, ring).with_context(|| format!("in {}", path.display()))?;
                (file, path.display().to_string())
            }
            (None, Some(name)) => (WebFile::field(by_name(name)?), format!("catalog:{name}")),
            _ => return Err(Failure::Usage(anyhow!("give an input with --web FILE or --catalog NAME"))),
        };
        if self.ring.is_some() && file.ring != ring && self.catalog.is_some() {
            return Err(Failure::Usage(anyhow!("--ring {ring} does not match the catalog entry's ring {}", file.ring)));
        }
        Ok(Loaded { file, source })
    }

    fn web(&self) -> Res<(AffineWeb, Value)> {
        let l = self.load()?;
        let mut w = l.file.web()?;
        if let Some(c) = self.chart {
            w = dehomogenize(&homogenize(&w)?, c)?;
        }
        let desc = json!({ "source": l.source, "ring": w.ring().to_string(), "chart": self.chart.unwrap_or(2), "F": w.poly().to_string() });
        Ok((w, desc))
    }

    fn foliation(&self) -> Res<(Foliation, Value)> {
        if self.chart.is_some() {
            return Err(Failure::Usage(anyhow!("--chart applies to webs; foliations are analysed projectively")));
        }
        let l = self.load()?;
        let f = l
            .file
            .foliation()
            .cloned()
            .ok_or_else(|| Failure::Usage(anyhow!("{} defines a web, this command needs a vector field", l.source)))?;
        let desc = json!({ "source": l.source, "ring": f.ring().to_string(), "A": f.a().to_string(), "B": f.b().to_string(), "degree": f.degree() });
        Ok((f, desc))
    }
}

fn write_out(output: &Output, text: &str) -> Res<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn report<T: Serialize>(output: &Output, command: &str, input: Value, result: T) -> Res<()> {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": input,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc).map_err(anyhow::Error::from)?;
    text.push('\n');
    write_out(output, &text)
}

fn parse_window(s: &str) -> Res<[f64; 4]> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Usage(anyhow!("window must be four numbers xmin,xmax,ymin,ymax")))?;
    <[f64; 4]>::try_from(vals).map_err(|_| Failure::Usage(anyhow!("window must be four numbers xmin,xmax,ymin,ymax")))
}

fn run(cmd: Cmd) -> Res<()> {
    match cmd {
        Cmd::Legendre { input, output } => {
            let (w, _) = input.web()?;
            let g = match input.chart {
                None => legendre_affine(&w)?,
                Some(c) => dehomogenize(&legendre_projective(&homogenize(&w)?)?, c)?,
            };
            let note = format!("Legendre transform: a {}-web of degree {}", g.k(), g.d());
            write_out(&output, &WebFile::implicit(g).emit(Some(&note)))
        }
        Cmd::Discriminant { input, output } => {
            let (w, desc) = input.web()?;
            let delta = discriminant(&w, false)?;
            let reduced = discriminant(&w, true)?;
            let proj = projective_discriminant(&w)?;
            let result = json!({
                "k": w.k(),
                "d": w.d(),
                "expected_degree": discriminant_degree(w.k(), w.d()),
                "affine": delta.to_string(),
                "affine_degree": delta.total_degree(),
                "reduced": reduced.to_string(),
                "projective": proj.to_string(),
                "projective_degree": proj.total_degree(),
            });
            report(&output, "discriminant", desc, result)
        }
        Cmd::Inflection { input, output } => {
            let (f, desc) = input.foliation()?;
            let i = inflection_divisor(&f)?;
            let result = json!({ "degree": i.total_degree(), "expected_degree": 3 * f.degree(), "polynomial": i.to_string() });
            report(&output, "inflection", desc, result)
        }
        Cmd::Lines { input, output } => {
            let (f, desc) = input.foliation()?;
            let lines = find_invariant_lines(&f)?;
            let list: Vec<Value> = lines.iter().map(|l| json!({ "line": l.to_string(), "exact": l.is_exact() })).collect();
            report(&output, "lines", desc, json!({ "count": lines.len(), "bound": 3 * f.degree(), "lines": list }))
        }
        Cmd::Convexity { input, output } => {
            let (f, desc) = input.foliation()?;
            report(&output, "convexity", desc, convexity_report(&f)?)
        }
        Cmd::Singularities { input, output } => {
            let (f, desc) = input.foliation()?;
            let pts = singular_points(&f)?;
            let list: Vec<Value> = pts
                .iter()
                .map(|s| match classify_singularity(&f, s) {
                    Ok(r) => serde_json::to_value(r).unwrap_or(Value::Null),
                    Err(e) => json!({ "location": s, "error": e.to_string() }),
                })
                .collect();
            report(&output, "singularities", desc, json!({ "count": pts.len(), "points": list }))
        }
        Cmd::Census { input, output } => {
            let (f, desc) = input.foliation()?;
            report(&output, "census", desc, radial_census(&f)?)
        }
        Cmd::Flatness { input, output, samples, seed, threshold } => {
            let (w, desc) = input.web()?;
            if samples == 0 {
                return Err(Failure::Usage(anyhow!("--samples must be positive")));
            }
            report(&output, "flatness", desc, flatness_check(&w, samples, seed, threshold)?)
        }
        Cmd::DeltaReport { input, output } => {
            let (w, desc) = input.web()?;
            report(&output, "delta-report", desc, discriminant_component_report(&w)?)
        }
        Cmd::Catalog { action: CatalogCmd::List { output } } => {
            report(&output, "catalog list", Value::Null, CATALOG.to_vec())
        }
        Cmd::Catalog { action: CatalogCmd::Emit { name, output } } => {
            let f = by_name(&name)?;
            let info = CATALOG.iter().find(|c| c.name == name).map(|c| c.description).unwrap_or("catalog foliation");
            write_out(&output, &WebFile::field(f).emit(Some(&format!("{name}: {info}"))))
        }
        Cmd::Table1 { output } => {
            let mut rows = Vec::new();
            let mut diffs = Vec::new();
            for row in TABLE1.iter() {
                let f = by_name(row.name)?;
                let c = radial_census(&f)?;
                let ok = c.total == row.radial && f.degree() == row.degree;
                if !ok {
                    diffs.push(format!("{}: expected {} radial, computed {}", row.name, row.radial, c.total));
                }
                rows.push(json!({
                    "name": row.name,
                    "degree": f.degree(),
                    "expected_radial": row.radial,
                    "radial": c.total,
                    "counts": c.counts,
                    "weighted": c.weighted,
                    "bound": c.bound,
                    "match": ok,
                }));
            }
            let matched = diffs.is_empty();
            report(&output, "table1", Value::Null, json!({ "rows": rows, "diff": diffs, "match": matched }))?;
            if matched {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Cmd::Render { poly, input, output, window, grid } => {
            let opts = RenderOptions { window: parse_window(&window)?, grid };
            let f = match poly {
                Some(src) => parse_plane(&src, input.ring()?)?,
                None => discriminant(&input.web()?.0, true)?,
            };
            write_out(&output, &render_svg(&f, &opts)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match with_thread_cap(|| run(cli.cmd)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("webcurv: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("webcurv: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch) => {
            eprintln!("webcurv: table differs from the expected counts");
            ExitCode::from(3)
        }
    }
}
