use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use dlab_core::fixtures::{builtin, GraphFile, BUILTIN_NAMES};
use dlab_core::graph::{SimplicialGraph, VertexLabeling, VertexSet};
use dlab_core::kernels::{bb_report, kernel_distortion, theo1_hypothesis_check};
use dlab_core::macura::{fd_distortion, growth_table};
use dlab_core::metric::{
    divergence_estimate, dominated_by, fit_exponent, largest_exact_window, DivergenceSeries, MetricError,
};
use dlab_core::raag::RaagOracle;
use dlab_core::series::{parse_csv, to_csv, SeriesPoint};

use crate::{Command, Format, GraphSource, Output};

/// How a successful run ended.
pub enum Outcome {
    Complete,
    /// Output was written but some values are bounds because a budget ran out.
    Partial,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Complete => 0,
            Outcome::Partial => 2,
        }
    }

    fn partial_if(partial: bool) -> Self {
        if partial {
            Outcome::Partial
        } else {
            Outcome::Complete
        }
    }
}

struct Loaded {
    graph: SimplicialGraph,
    labeling: Option<VertexLabeling>,
    collection: Option<Vec<VertexSet>>,
}

impl Loaded {
    fn labeling(&self) -> Result<&VertexLabeling> {
        self.labeling.as_ref().ok_or_else(|| anyhow!("the graph has no `labels`; this command needs a labeling"))
    }
}

fn load(source: &GraphSource) -> Result<Loaded> {
    if let Some(name) = &source.builtin {
        let fx = builtin(name)
            .ok_or_else(|| anyhow!("unknown built-in graph `{name}`; known: {}", BUILTIN_NAMES.join(", ")))?;
        return Ok(Loaded { graph: fx.graph, labeling: Some(fx.labeling), collection: fx.collection });
    }
    let path = source.graph.as_ref().expect("clap enforces one source");
    let file = GraphFile::load(path)?;
    let (graph, labeling) = file.build().with_context(|| format!("invalid graph in {}", path.display()))?;
    Ok(Loaded { graph, labeling, collection: None })
}

fn emit(output: &Output, body: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, body).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: &Output, value: &T) -> Result<()> {
    if output.format == Some(Format::Csv) {
        bail!("this command only produces JSON");
    }
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    emit(output, &body)
}

fn emit_series<T: Serialize>(output: &Output, points: &[SeriesPoint], full: &T) -> Result<()> {
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(output, &to_csv(points)),
        Format::Json => emit_json(output, full),
    }
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::GraphCheck(args) => {
            let loaded = load(&args.source)?;
            emit_json(&args.output, &graph_report(&loaded)?)?;
            Ok(Outcome::Complete)
        }
        Command::BbCheck(args) => {
            let loaded = load(&args.source)?;
            let report = bb_report(&loaded.graph, loaded.labeling()?)?;
            emit_json(&args.output, &report)?;
            Ok(Outcome::Complete)
        }
        Command::Theo1Check(args) => {
            let loaded = load(&args.source)?;
            let collection = match &args.collection {
                Some(path) => read_collection(&loaded.graph, path)?,
                None => loaded
                    .collection
                    .clone()
                    .ok_or_else(|| anyhow!("no --collection given and the graph has no built-in collection"))?,
            };
            let report = theo1_hypothesis_check(&loaded.graph, loaded.labeling()?, &collection)?;
            emit_json(&args.output, &report)?;
            Ok(Outcome::Complete)
        }
        Command::Distortion(args) => {
            let loaded = load(&args.source)?;
            let labeling = loaded.labeling()?.clone();
            let graph = Arc::new(loaded.graph);
            let series = kernel_distortion(&graph, &labeling, args.rmax, args.budget, !args.search_only)?;
            emit_series(&args.output, &series.to_points(), &series)?;
            Ok(Outcome::partial_if(!series.all_exact()))
        }
        Command::Divergence(args) => {
            let loaded = load(&args.source)?;
            let graph = Arc::new(loaded.graph);
            let oracle = RaagOracle::standard(&graph);
            let radii: Vec<u32> = match args.r {
                Some(r) => vec![r],
                None => (args.rmin..=args.rmax).collect(),
            };
            let mut series = DivergenceSeries { rho: args.rho, estimates: Vec::new() };
            let mut partial = false;
            for r in radii {
                match divergence_estimate(&oracle, r, args.rho, args.horizon, args.budget) {
                    Ok(e) => series.estimates.push(e),
                    Err(e @ (MetricError::BudgetExceeded { .. } | MetricError::Horizon { .. })) => {
                        eprintln!("stopping at r = {r}: {e}");
                        partial = true;
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            emit_series(&args.output, &series.to_points(), &series)?;
            Ok(Outcome::partial_if(partial))
        }
        Command::MacuraGrowth(args) => {
            let table = growth_table(args.d, args.nmax)?;
            match args.output.format.unwrap_or(Format::Csv) {
                Format::Csv => emit(&args.output, &table.to_csv())?,
                Format::Json => emit_json(&args.output, &table)?,
            }
            Ok(Outcome::Complete)
        }
        Command::MacuraDistortion(args) => {
            let series = fd_distortion(args.d, args.rmax, args.budget)?;
            emit_series(&args.output, &series.to_points(), &series)?;
            Ok(Outcome::partial_if(!series.all_exact()))
        }
        Command::Fit(args) => {
            let points = read_series(&args.csv)?;
            let window = match args.window {
                Some(w) => w,
                None => largest_exact_window(&points)
                    .ok_or_else(|| anyhow!("{} has no exact positive points; pass --window", args.csv.display()))?,
            };
            let fit = fit_exponent(&points, window)?;
            match &args.against {
                None => emit_json(&args.output, &json!({ "fit": fit }))?,
                Some(path) => {
                    let other = read_series(path)?;
                    let other_fit = fit_exponent(&other, window)?;
                    let verdict = dominated_by(&fit, &other_fit, args.tolerance);
                    emit_json(
                        &args.output,
                        &json!({ "fit": fit, "against": other_fit, "tolerance": args.tolerance, "verdict": verdict }),
                    )?;
                }
            }
            Ok(Outcome::Complete)
        }
    }
}

fn read_series(path: &Path) -> Result<Vec<SeriesPoint>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_csv(&text).with_context(|| format!("malformed series in {}", path.display()))
}

fn read_collection(graph: &SimplicialGraph, path: &Path) -> Result<Vec<VertexSet>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let sets: Vec<Vec<String>> = serde_json::from_str(&text)
        .with_context(|| format!("{}: expected a JSON array of vertex-name arrays", path.display()))?;
    sets.iter().map(|s| graph.vertex_set(s).map_err(Into::into)).collect()
}

#[derive(Serialize)]
struct LabelReport {
    label: u32,
    vertices: Vec<String>,
    connected: bool,
    domination: dlab_core::graph::Domination,
}

fn graph_report(loaded: &Loaded) -> Result<serde_json::Value> {
    let g = &loaded.graph;
    let labels = match &loaded.labeling {
        None => None,
        Some(l) => {
            let mut rows = Vec::new();
            for i in 1..=l.dim() {
                let class = l.class(i);
                rows.push(LabelReport {
                    label: i,
                    vertices: g.set_names(class),
                    connected: g.is_connected_within(class),
                    domination: g.domination_class(class)?,
                });
            }
            Some(json!({ "classes": rows, "killed": g.set_names(l.killed()) }))
        }
    };
    Ok(json!({
        "vertices": g.names(),
        "edges": g.edges(),
        "connected": g.is_connected(),
        "diameter": g.diameter(),
        "join": g.is_join(),
        "labels": labels,
    }))
}
