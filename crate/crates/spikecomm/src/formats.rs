//! Text formats: edge and label lists, graph JSON bundles, spike and
//! membrane CSVs, schedule exports and decode outputs.
//!
//! Edge lists hold one `u,v` pair per line with 0-based ids; label lists
//! one `vertex,community` pair per line. Neither has a header. Everything
//! else carries a header row.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use spikecomm_core::decode::{BipolarStateTable, ComparisonMatrix, SeparabilitySweep};
use spikecomm_core::simulator::{MembraneTrace, SpikeData};
use spikecomm_core::stimulus::DriveSchedule;
use spikecomm_core::LabeledGraph;

use crate::error::{Error, Result};

fn reader(text: &str, has_headers: bool) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(has_headers).trim(csv::Trim::All).flexible(true).from_reader(text.as_bytes())
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, k: usize, what: &str) -> Result<T> {
    let line = line_of(record);
    let raw = record.get(k).ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    raw.parse().map_err(|_| Error::parse(line, format!("invalid {what} {raw:?}")))
}

fn expect_width(record: &csv::StringRecord, width: usize) -> Result<()> {
    if record.len() != width {
        return Err(Error::parse(line_of(record), format!("expected {width} fields, found {}", record.len())));
    }
    Ok(())
}

/// Parses a label list. Every vertex in `0..n` must appear exactly once,
/// in any order; `n` is the number of lines.
pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    let mut pairs = Vec::new();
    for record in reader(text, false).records() {
        let record = record?;
        expect_width(&record, 2)?;
        let v: usize = field(&record, 0, "vertex")?;
        let c: usize = field(&record, 1, "community")?;
        pairs.push((line_of(&record), v, c));
    }
    let n = pairs.len();
    let mut labels = vec![None; n];
    for (line, v, c) in pairs {
        if v >= n {
            return Err(Error::parse(line, format!("vertex {v} out of range for {n} labels")));
        }
        if labels[v].replace(c).is_some() {
            return Err(Error::parse(line, format!("vertex {v} labelled twice")));
        }
    }
    Ok(labels.into_iter().map(|c| c.expect("every slot filled")).collect())
}

/// Parses an edge list against labels for `n = labels.len()` vertices.
pub fn parse_graph(edges: &str, labels: &str) -> Result<LabeledGraph> {
    let labels = parse_labels(labels)?;
    let n = labels.len();
    let mut seen = std::collections::HashSet::new();
    let mut list = Vec::new();
    for record in reader(edges, false).records() {
        let record = record?;
        expect_width(&record, 2)?;
        let line = line_of(&record);
        let u: usize = field(&record, 0, "vertex")?;
        let v: usize = field(&record, 1, "vertex")?;
        if u == v {
            return Err(Error::parse(line, format!("self-loop on vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::parse(line, format!("edge ({u}, {v}) has no label (only {n} vertices)")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line, format!("duplicate edge ({u}, {v})")));
        }
        list.push((u, v));
    }
    Ok(LabeledGraph::new(n, list, labels)?)
}

pub fn write_edges(g: &LabeledGraph) -> String {
    g.edges().iter().fold(String::new(), |mut s, (u, v)| {
        let _ = writeln!(s, "{u},{v}");
        s
    })
}

pub fn write_labels(g: &LabeledGraph) -> String {
    g.labels().iter().enumerate().fold(String::new(), |mut s, (v, c)| {
        let _ = writeln!(s, "{v},{c}");
        s
    })
}

/// Single-document graph bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphBundle {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub labels: Vec<usize>,
}

impl From<&LabeledGraph> for GraphBundle {
    fn from(g: &LabeledGraph) -> Self {
        Self { n: g.n(), edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(), labels: g.labels().to_vec() }
    }
}

pub fn graph_to_json(g: &LabeledGraph) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GraphBundle::from(g))?)
}

pub fn graph_from_json(text: &str) -> Result<LabeledGraph> {
    let b: GraphBundle = serde_json::from_str(text)?;
    Ok(LabeledGraph::new(b.n, b.edges.into_iter().map(|[u, v]| (u, v)), b.labels)?)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `neuron,time_ms`, sorted by time then neuron.
pub fn write_spikes(spikes: &SpikeData) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["neuron", "time_ms"])?;
    for (i, t) in spikes.events() {
        w.write_record([i.to_string(), t.to_string()])?;
    }
    finish(w)
}

/// Reads a spike CSV for `n` neurons recorded over `duration` ms.
pub fn parse_spikes(text: &str, n: usize, duration: f64) -> Result<SpikeData> {
    let mut trains = vec![Vec::new(); n];
    let mut rdr = reader(text, true);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["neuron", "time_ms"] {
        return Err(Error::parse(1, "expected header neuron,time_ms"));
    }
    for record in rdr.records() {
        let record = record?;
        expect_width(&record, 2)?;
        let line = line_of(&record);
        let i: usize = field(&record, 0, "neuron")?;
        let t: f64 = field(&record, 1, "spike time")?;
        if i >= n {
            return Err(Error::parse(line, format!("neuron {i} out of range for {n} neurons")));
        }
        if !(0.0..=duration).contains(&t) {
            return Err(Error::parse(line, format!("spike time {t} outside [0, {duration}]")));
        }
        trains[i].push(t);
    }
    for train in &mut trains {
        train.sort_by(f64::total_cmp);
    }
    Ok(SpikeData::new(trains, duration)?)
}

/// Largest neuron id mentioned in a spike CSV, plus one.
pub fn spike_neuron_count(text: &str) -> Result<usize> {
    let mut n = 0;
    for record in reader(text, true).records() {
        let id: usize = field(&record?, 0, "neuron")?;
        n = n.max(id + 1);
    }
    Ok(n)
}

pub fn write_membrane(traces: &[MembraneTrace]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["neuron", "time_ms", "potential_v"])?;
    for trace in traces {
        for &(t, v) in &trace.samples {
            w.write_record([trace.neuron.to_string(), t.to_string(), v.to_string()])?;
        }
    }
    finish(w)
}

pub fn write_schedule(schedule: &DriveSchedule) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["target", "t1_ms", "t2_ms", "a_max", "beta"])?;
    for p in schedule.pulses() {
        w.write_record([
            p.target.to_string(),
            p.t1.to_string(),
            p.t2.to_string(),
            p.a_max.to_string(),
            p.beta.to_string(),
        ])?;
    }
    finish(w)
}

/// Reads a schedule export back. The total duration is not part of the
/// file and must be supplied.
pub fn parse_schedule(text: &str, total_duration: f64) -> Result<DriveSchedule> {
    let mut pulses = Vec::new();
    for record in reader(text, true).records() {
        let record = record?;
        expect_width(&record, 5)?;
        pulses.push(spikecomm_core::SquarePulse {
            target: field(&record, 0, "target")?,
            t1: field(&record, 1, "t1_ms")?,
            t2: field(&record, 2, "t2_ms")?,
            a_max: field(&record, 3, "a_max")?,
            beta: field(&record, 4, "beta")?,
        });
    }
    Ok(DriveSchedule::new(pulses, total_duration)?)
}

/// Dense matrix with a header row and a leading column of neuron ids.
pub fn write_matrix(m: &ComparisonMatrix) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("neuron".to_string()).chain((0..m.n()).map(|j| j.to_string()));
    w.write_record(header)?;
    for i in 0..m.n() {
        let row = std::iter::once(i.to_string()).chain(m.row(i).iter().map(f64::to_string));
        w.write_record(row)?;
    }
    finish(w)
}

pub fn write_sweep(sweep: &SeparabilitySweep) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bin_width_ms", "source_community", "target_community", "mean", "std"])?;
    for e in &sweep.entries {
        w.write_record([
            e.bin_width.to_string(),
            e.source_community.to_string(),
            e.target_community.to_string(),
            e.mean.to_string(),
            e.std.to_string(),
        ])?;
    }
    finish(w)
}

pub fn write_bipolar(table: &BipolarStateTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["neuron", "window_index", "count", "state"])?;
    for (i, (counts, states)) in table.counts.iter().zip(&table.states).enumerate() {
        for (k, (c, s)) in counts.iter().zip(states).enumerate() {
            w.write_record([i.to_string(), k.to_string(), c.to_string(), s.to_string()])?;
        }
    }
    finish(w)
}

/// `neuron,predicted` where `predicted` is a seed index or empty.
pub fn write_assignments(assignments: &[Option<usize>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["neuron", "predicted"])?;
    for (i, a) in assignments.iter().enumerate() {
        w.write_record([i.to_string(), a.map(|k| k.to_string()).unwrap_or_default()])?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_from_text() {
        let g = parse_graph("0,1\n1,2", "0,0\n1,0\n2,1").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.labels(), &[0, 0, 1]);
    }

    #[test]
    fn errors_name_the_line() {
        let labels = "0,0\n1,0\n2,0\n3,0";
        let err = parse_graph("0,1\n3,3\n", labels).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("self-loop"));

        let err = parse_graph("0,1\n2,3\n1,0", labels).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let err = parse_graph("0,7", labels).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");

        let err = parse_graph("0,1", "0,0\n2,0").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let err = parse_graph("0,x", labels).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn missing_label_is_rejected() {
        // vertex 1 has no label line; 2 labels means only vertices 0 and 1 exist
        assert!(parse_graph("0,2", "0,0\n1,0").is_err());
        assert!(parse_labels("0,0\n0,1").is_err());
    }

    #[test]
    fn spikes_csv_round_trip() {
        let spikes = SpikeData::new(vec![vec![1.5, 3.0], vec![], vec![1.5]], 4.0).unwrap();
        let text = write_spikes(&spikes).unwrap();
        assert_eq!(text, "neuron,time_ms\n0,1.5\n2,1.5\n0,3\n");
        assert_eq!(parse_spikes(&text, 3, 4.0).unwrap(), spikes);
        assert!(parse_spikes(&text, 2, 4.0).is_err());
        assert!(parse_spikes("a,b\n", 3, 4.0).is_err());
    }
}
