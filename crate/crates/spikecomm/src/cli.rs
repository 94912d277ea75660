//! Command-line front end: `gen-graph`, `simulate`, `decode`, `calibrate`.
//!
//! All times are in milliseconds. Flags override values from `--config`.
//! Each command writes the fully resolved configuration next to its
//! outputs as `run_config.json`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use spikecomm_core::calibration::{self, CalibrationInputs, CalibrationReport};
use spikecomm_core::decode::{self, TimeWindow};
use spikecomm_core::graph::{degree_stats, generate_planted_partition};
use spikecomm_core::model::map_graph_to_network;
use spikecomm_core::simulator::Simulation;
use spikecomm_core::stimulus::{community_ordered_schedule, random_permutation_schedule};
use spikecomm_core::{DriveSchedule, LabeledGraph, Metric};

use crate::config::{read, RunConfig, ScheduleKind, CONFIG_FILE};
use crate::error::{Error, Result};
use crate::formats;

pub const EDGES_FILE: &str = "edges.csv";
pub const LABELS_FILE: &str = "labels.csv";
pub const GRAPH_JSON_FILE: &str = "graph.json";
pub const SPIKES_FILE: &str = "spikes.csv";
pub const SCHEDULE_FILE: &str = "schedule.csv";
pub const MEMBRANE_FILE: &str = "membrane.csv";
pub const MATRIX_FILE: &str = "matrix.csv";
pub const BIPOLAR_FILE: &str = "bipolar.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const ASSIGNMENTS_FILE: &str = "assignments.csv";

#[derive(Debug, Parser)]
#[command(name = "spikecomm", version, about = "Community detection with spiking neural networks")]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a planted-partition benchmark graph.
    GenGraph(GenGraphArgs),
    /// Map a graph to a spiking network, drive it and record spikes.
    Simulate(SimulateArgs),
    /// Turn recorded spikes into comparison matrices, bipolar states and
    /// separability curves.
    Decode(DecodeArgs),
    /// Print closed-form firing rates and bipolar thresholds.
    Calibrate(CalibrateArgs),
}

/// Comma-separated list; the empty string is the empty list.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().map_err(|_| format!("invalid list element {p:?}")))
            .collect::<std::result::Result<_, _>>()
            .map(List)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Plain,
    Weighted,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Plain => Metric::Plain,
            MetricArg::Weighted => Metric::Weighted,
        }
    }
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub communities: Option<usize>,
    /// Expected inter-community degree.
    #[arg(long)]
    pub z_out: Option<f64>,
    #[arg(long)]
    pub avg_degree: Option<f64>,
}

impl GraphArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.graph.n, self.n);
        set(&mut cfg.graph.communities, self.communities);
        set(&mut cfg.graph.z_out, self.z_out);
        set(&mut cfg.graph.avg_degree, self.avg_degree);
    }
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NeuronArgs {
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub v_th: Option<f64>,
    #[arg(long)]
    pub v_reset: Option<f64>,
    #[arg(long)]
    pub t_refract: Option<f64>,
    /// Synaptic weight magnitude, applied as +w / -w.
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    /// Active inter-spike interval used to derive the pulse amplitude.
    #[arg(long)]
    pub target_isi: Option<f64>,
    #[arg(long)]
    pub pulse_width: Option<f64>,
}

impl NeuronArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.neuron.tau, self.tau);
        set(&mut cfg.neuron.v_th, self.v_th);
        set(&mut cfg.neuron.v_reset, self.v_reset);
        set(&mut cfg.neuron.t_refract, self.t_refract);
        if let Some(w) = self.w {
            cfg.synapse = spikecomm_core::SynapseConfig::symmetric(w);
        }
        if let Some(isi) = self.target_isi {
            cfg.schedule.target_isi = isi;
            cfg.schedule.a_max = None;
        }
        if self.a_max.is_some() {
            cfg.schedule.a_max = self.a_max;
        }
        set(&mut cfg.schedule.width, self.pulse_width);
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Graph directory (edges.csv + labels.csv) or JSON bundle. A graph is
    /// generated from the graph flags when absent.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[command(flatten)]
    pub generate: GraphArgs,
    #[arg(long, value_enum)]
    pub schedule: Option<ScheduleKind>,
    /// Communities to drive in order, e.g. `0,1,3`.
    #[arg(long)]
    pub drive: Option<List<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub gap: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long)]
    pub floor: Option<f64>,
    /// Neurons whose membrane potential is recorded.
    #[arg(long)]
    pub record: Option<List<usize>>,
    #[command(flatten)]
    pub neuron: NeuronArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Directory written by `simulate`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub metric: Option<MetricArg>,
    /// Bin width for the comparison matrix (ms).
    #[arg(long)]
    pub bin_dt: Option<f64>,
    #[arg(long)]
    pub t_origin: Option<f64>,
    /// Also write bipolar states.
    #[arg(long)]
    pub bipolar: bool,
    #[arg(long)]
    pub f0: Option<f64>,
    /// `auto` for the driving epochs, or `start:end` pairs separated by commas.
    #[arg(long)]
    pub windows: Option<String>,
    /// Bin widths for the separability sweep.
    #[arg(long)]
    pub sweep: Option<List<f64>>,
    #[arg(long)]
    pub sources: Option<List<usize>>,
    /// One neuron per community for nearest-seed reconstruction.
    #[arg(long)]
    pub seeds: Option<List<usize>>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub neuron: NeuronArgs,
    #[arg(long)]
    pub community_order: Option<usize>,
    #[arg(long)]
    pub avg_degree: Option<f64>,
    #[arg(long)]
    pub neighbor_fraction: Option<f64>,
    /// Override the predicted active spike count.
    #[arg(long)]
    pub r1: Option<u32>,
    /// Override the predicted response spike count.
    #[arg(long)]
    pub r2: Option<u32>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| Error::Io { path, source })
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::InFile { path: path.into(), source: Box::new(e) })
}

fn prepare_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.into(), source })
}

pub fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::GenGraph(args) => gen_graph(&mut cfg, &args),
        Command::Simulate(args) => simulate(&mut cfg, &args),
        Command::Decode(args) => decode_cmd(&mut cfg, &args),
        Command::Calibrate(args) => calibrate(&mut cfg, &args, &mut std::io::stdout()),
    }
}

/// Loads a graph from a directory with `edges.csv` + `labels.csv`, or from a
/// JSON bundle.
pub fn load_graph(path: &Path) -> Result<LabeledGraph> {
    if path.is_dir() {
        let (edges, labels) = (path.join(EDGES_FILE), path.join(LABELS_FILE));
        let labels_text = read(&labels)?;
        in_file(&labels, formats::parse_labels(&labels_text))?;
        in_file(&edges, formats::parse_graph(&read(&edges)?, &labels_text))
    } else {
        in_file(path, formats::graph_from_json(&read(path)?))
    }
}

fn report_graph(g: &LabeledGraph) {
    let stats = degree_stats(g);
    info!(
        "graph: {} vertices, {} edges, {} communities, mean degree {:.3}",
        g.n(),
        g.edge_count(),
        g.num_communities(),
        stats.mean_degree
    );
    if let Some(w) = g.connectivity_warning() {
        warn!("{w}");
    }
}

pub fn gen_graph(cfg: &mut RunConfig, args: &GenGraphArgs) -> Result<()> {
    args.graph.apply(cfg);
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.output, args.out.clone());
    cfg.graph.input = None;

    let g = generate_planted_partition(&cfg.partition_spec())?;
    report_graph(&g);
    prepare_dir(&cfg.output)?;
    write(&cfg.output, EDGES_FILE, &formats::write_edges(&g))?;
    write(&cfg.output, LABELS_FILE, &formats::write_labels(&g))?;
    write(&cfg.output, GRAPH_JSON_FILE, &formats::graph_to_json(&g)?)?;
    write(&cfg.output, CONFIG_FILE, &cfg.to_json()?)
}

fn build_schedule(cfg: &RunConfig, g: &LabeledGraph) -> Result<DriveSchedule> {
    let timing = cfg.pulse_timing()?;
    Ok(match cfg.schedule.kind {
        ScheduleKind::CommunityOrdered => community_ordered_schedule(g, &cfg.schedule.drive, &timing)?,
        ScheduleKind::Random => random_permutation_schedule(g, cfg.schedule_seed(), &timing)?,
    })
}

pub fn simulate(cfg: &mut RunConfig, args: &SimulateArgs) -> Result<()> {
    args.generate.apply(cfg);
    if args.graph.is_some() {
        cfg.graph.input = args.graph.clone();
    }
    set(&mut cfg.schedule.kind, args.schedule);
    set(&mut cfg.schedule.drive, args.drive.clone().map(|l| l.0));
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.schedule.t_start, args.t_start);
    set(&mut cfg.schedule.gap, args.gap);
    set(&mut cfg.schedule.beta, args.beta);
    set(&mut cfg.simulation.dt, args.dt);
    if args.duration.is_some() {
        cfg.simulation.duration = args.duration;
    }
    if args.floor.is_some() {
        cfg.simulation.potential_floor = args.floor;
    }
    set(&mut cfg.record, args.record.clone().map(|l| l.0));
    args.neuron.apply(cfg);
    set(&mut cfg.output, args.out.clone());

    let g = match &cfg.graph.input {
        Some(path) => load_graph(path)?,
        None => generate_planted_partition(&cfg.partition_spec())?,
    };
    report_graph(&g);
    let net = map_graph_to_network(&g, cfg.neuron, cfg.synapse)?;
    let schedule = build_schedule(cfg, &g)?;
    cfg.schedule.a_max = Some(cfg.a_max()?);
    cfg.simulation.duration = Some(cfg.simulation.duration.unwrap_or(schedule.total_duration()));
    for w in cfg.simulation.warnings(&net) {
        warn!("{w}");
    }

    let sim = Simulation::new(&net, &schedule, cfg.simulation)?;
    let out = sim.run_recording(&cfg.record)?;
    info!("simulated {} ms: {} pulses, {} spikes", sim.duration(), schedule.pulses().len(), out.spikes.total_spikes());

    prepare_dir(&cfg.output)?;
    write(&cfg.output, SPIKES_FILE, &formats::write_spikes(&out.spikes)?)?;
    write(&cfg.output, SCHEDULE_FILE, &formats::write_schedule(&schedule)?)?;
    write(&cfg.output, LABELS_FILE, &formats::write_labels(&g))?;
    if !out.traces.is_empty() {
        write(&cfg.output, MEMBRANE_FILE, &formats::write_membrane(&out.traces)?)?;
    }
    write(&cfg.output, CONFIG_FILE, &cfg.to_json()?)
}

fn parse_windows(spec: &str) -> Result<Option<Vec<[f64; 2]>>> {
    if spec.trim() == "auto" {
        return Ok(None);
    }
    spec.split(',')
        .map(|pair| {
            let (a, b) =
                pair.split_once(':').ok_or_else(|| Error::Usage(format!("window {pair:?} is not start:end")))?;
            let parse =
                |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Usage(format!("invalid window bound {s:?}")));
            Ok([parse(a)?, parse(b)?])
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn calibration_inputs(cfg: &RunConfig) -> Result<CalibrationInputs> {
    Ok(CalibrationInputs {
        params: cfg.neuron,
        synapses: cfg.synapse,
        a_max: cfg.a_max()?,
        pulse_width: cfg.schedule.width,
        community_order: cfg.community_order(),
        avg_degree: cfg.graph.avg_degree,
        neighbor_fraction: cfg.decode.neighbor_fraction,
    })
}

pub fn decode_cmd(cfg: &mut RunConfig, args: &DecodeArgs) -> Result<()> {
    let input = args.input.clone().unwrap_or_else(|| cfg.output.clone());
    let sim_config = input.join(CONFIG_FILE);
    if sim_config.exists() {
        let decode = cfg.decode.clone();
        *cfg = RunConfig::load(&sim_config)?;
        if args.out.is_none() {
            cfg.output = input.clone();
        }
        if cfg.decode == Default::default() {
            cfg.decode = decode;
        }
    } else {
        cfg.output = input.clone();
    }
    let d = &mut cfg.decode;
    set(&mut d.metric, args.metric.map(Metric::from));
    set(&mut d.bin_width, args.bin_dt);
    set(&mut d.t_origin, args.t_origin);
    d.bipolar |= args.bipolar;
    if args.f0.is_some() {
        d.f0 = args.f0;
    }
    if let Some(w) = &args.windows {
        d.windows = parse_windows(w)?;
    }
    set(&mut d.sweep, args.sweep.clone().map(|l| l.0));
    set(&mut d.sources, args.sources.clone().map(|l| l.0));
    set(&mut d.seeds, args.seeds.clone().map(|l| l.0));
    set(&mut d.theta, args.theta);
    set(&mut cfg.output, args.out.clone());

    let labels_path = input.join(LABELS_FILE);
    let labels = if labels_path.exists() {
        Some(in_file(&labels_path, formats::parse_labels(&read(&labels_path)?))?)
    } else {
        None
    };
    let spikes_path = input.join(SPIKES_FILE);
    let spikes_text = read(&spikes_path)?;
    let n = match &labels {
        Some(l) => l.len(),
        None => in_file(&spikes_path, formats::spike_neuron_count(&spikes_text))?,
    };
    let duration = cfg
        .simulation
        .duration
        .ok_or_else(|| Error::Usage(format!("{} does not record the run duration", sim_config.display())))?;
    let spikes = in_file(&spikes_path, formats::parse_spikes(&spikes_text, n, duration))?;

    let d = cfg.decode.clone();
    prepare_dir(&cfg.output)?;

    let codes = decode::binarize(&spikes, d.bin_width, d.t_origin)?;
    if let Some(w) = codes.warning(duration) {
        warn!("{w}");
    }
    let matrix = decode::comparison_matrix(&codes, d.metric);
    write(&cfg.output, MATRIX_FILE, &formats::write_matrix(&matrix)?)?;

    let need_labels = || {
        labels
            .as_deref()
            .ok_or_else(|| Error::Usage(format!("{} is required for this analysis", labels_path.display())))
    };

    if d.bipolar {
        let windows: Vec<TimeWindow> = match &d.windows {
            Some(ws) => ws.iter().map(|&[a, b]| TimeWindow::new(a, b)).collect(),
            None => {
                let schedule_path = input.join(SCHEDULE_FILE);
                let schedule = in_file(&schedule_path, formats::parse_schedule(&read(&schedule_path)?, duration))?;
                schedule.community_epochs(need_labels()?).iter().map(|e| TimeWindow::new(e.start, e.end)).collect()
            }
        };
        let f0 = match d.f0 {
            Some(f0) => f0,
            None => calibration::calibrate(&calibration_inputs(cfg)?)?.f_min,
        };
        cfg.decode.f0 = Some(f0);
        let counts = decode::window_spike_counts(&spikes, &windows)?;
        let table = decode::bipolar_decode(&counts, f0)?;
        write(&cfg.output, BIPOLAR_FILE, &formats::write_bipolar(&table)?)?;
    }

    if !d.sweep.is_empty() {
        let labels = need_labels()?;
        let sources = if d.sources.is_empty() { first_of_each_community(labels) } else { d.sources.clone() };
        if let Ok(isi) = calibration::active_isi(&cfg.neuron, cfg.a_max()?) {
            for w in decode::sweep_warnings(&d.sweep, isi, cfg.schedule.width) {
                warn!("{w}");
            }
        }
        let sweep = decode::separability_sweep(&spikes, labels, &d.sweep, &sources, d.t_origin)?;
        for &w in &d.sweep {
            if let Some(m) = sweep.margin(w) {
                info!("bin width {w} ms: separability margin {m:.6}");
            }
        }
        write(&cfg.output, SWEEP_FILE, &formats::write_sweep(&sweep)?)?;
    }

    if !d.seeds.is_empty() {
        // Weighted scores scale with each seed's own activity, so seeds are
        // always compared on the plain metric.
        let plain = match d.metric {
            Metric::Plain => matrix,
            Metric::Weighted => decode::comparison_matrix(&codes, Metric::Plain),
        };
        let assignments = decode::reconstruct_from_seeds(&plain, &d.seeds, d.theta)?;
        write(&cfg.output, ASSIGNMENTS_FILE, &formats::write_assignments(&assignments)?)?;
    }

    write(&cfg.output, CONFIG_FILE, &cfg.to_json()?)
}

/// Lowest vertex id of every community, in community order.
pub fn first_of_each_community(labels: &[usize]) -> Vec<usize> {
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    (0..k).filter_map(|c| labels.iter().position(|&l| l == c)).collect()
}

/// Renders a report as `key=value` lines followed by a JSON document.
pub fn render_report(report: &CalibrationReport) -> Result<String> {
    let opt = |x: Option<f64>| x.map_or("none".to_string(), |v| v.to_string());
    let mut s = String::new();
    for (k, v) in [
        ("a_max", report.a_max.to_string()),
        ("charging_time", report.charging_time.to_string()),
        ("active_isi", report.active_isi.to_string()),
        ("response_isi", opt(report.response_isi)),
        ("alpha", report.alpha.to_string()),
        ("response_feasible", report.response_feasible.to_string()),
        ("r1", report.r1.to_string()),
        ("r2", report.r2.to_string()),
        ("f_min", report.f_min.to_string()),
        ("f_max", report.f_max.to_string()),
    ] {
        s.push_str(&format!("{k}={v}\n"));
    }
    s.push_str(&serde_json::to_string_pretty(report)?);
    s.push('\n');
    Ok(s)
}

pub fn calibrate(cfg: &mut RunConfig, args: &CalibrateArgs, out: &mut impl std::io::Write) -> Result<()> {
    args.neuron.apply(cfg);
    set(&mut cfg.graph.avg_degree, args.avg_degree);
    set(&mut cfg.decode.neighbor_fraction, args.neighbor_fraction);
    let mut inputs = calibration_inputs(cfg)?;
    set(&mut inputs.community_order, args.community_order);

    let mut report = calibration::calibrate(&inputs)?;
    if args.r1.is_some() || args.r2.is_some() {
        set(&mut report.r1, args.r1);
        set(&mut report.r2, args.r2);
        let t = calibration::bipolar_thresholds_with_fraction(
            report.r1,
            report.r2,
            inputs.community_order,
            inputs.avg_degree,
            inputs.neighbor_fraction,
        );
        report.f_min = t.f_min;
        report.f_max = t.f_max;
    }
    let t = calibration::FiringThresholds { f_min: report.f_min, f_max: report.f_max };
    if let Some(w) = t.warning() {
        warn!("{w}");
    }
    out.write_all(render_report(&report)?.as_bytes())
        .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_windows() {
        assert_eq!("0,1,3".parse::<List<usize>>().unwrap(), List(vec![0, 1, 3]));
        assert_eq!("".parse::<List<usize>>().unwrap(), List(vec![]));
        assert!("0,x".parse::<List<usize>>().is_err());
        assert_eq!(parse_windows("auto").unwrap(), None);
        assert_eq!(parse_windows("0:10, 10:20").unwrap(), Some(vec![[0.0, 10.0], [10.0, 20.0]]));
        assert!(parse_windows("0-10").is_err());
    }

    #[test]
    fn first_members() {
        assert_eq!(first_of_each_community(&[1, 0, 0, 2, 1]), vec![1, 0, 3]);
    }
}
