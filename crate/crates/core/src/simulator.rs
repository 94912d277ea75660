//! Fixed-step integration of a [`SpikingNetwork`] under a [`DriveSchedule`].
//!
//! Each step of length `dt`, for every neuron that is not refractory:
//!
//! 1. relax toward the instantaneous drive with the exact exponential update
//!    `v <- V(t) + (v - V(t)) exp(-dt / tau)`;
//! 2. add the weights of every spike emitted during the previous step;
//! 3. fire if `v >= v_th`: record a spike at the end of the step, reset to
//!    `v_reset` and ignore all input for `t_refract`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::model::SpikingNetwork;
use crate::stimulus::DriveSchedule;
use crate::Warning;

/// Slack used when converting durations to whole step counts.
const STEP_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SimulationConfig {
    /// Step size (ms).
    pub dt: f64,
    /// Horizon (ms). `None` uses the schedule's total duration.
    pub duration: Option<f64>,
    /// Record every neuron's membrane potential when no explicit ids are
    /// requested.
    pub record_potentials: bool,
    /// Lower clamp applied after synaptic input.
    pub potential_floor: Option<f64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { dt: 0.1, duration: None, record_potentials: false, potential_floor: None }
    }
}

impl SimulationConfig {
    pub fn with_duration(duration: f64) -> Self {
        Self { duration: Some(duration), ..Self::default() }
    }

    pub fn validate(&self, net: &SpikingNetwork) -> Result<()> {
        let t_refract = net.params().t_refract;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid(format!("dt = {} must be positive", self.dt)));
        }
        if t_refract > 0.0 && self.dt > t_refract / 2.0 {
            return Err(invalid(format!("dt = {} ms exceeds half the refractory period ({} ms)", self.dt, t_refract)));
        }
        if let Some(d) = self.duration {
            if !(d.is_finite() && d >= 0.0) {
                return Err(invalid(format!("duration = {d} must be non-negative")));
            }
        }
        if let Some(f) = self.potential_floor {
            if !f.is_finite() {
                return Err(invalid("potential floor must be finite"));
            }
        }
        Ok(())
    }

    pub fn warnings(&self, net: &SpikingNetwork) -> Vec<Warning> {
        let tau = net.params().tau;
        let mut out = Vec::new();
        if self.dt > tau / 50.0 {
            out.push(Warning::CoarseTimeStep { dt: self.dt, tau });
        }
        out
    }
}

/// Per-neuron spike times (ms), each list strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeData {
    n: usize,
    trains: Vec<Vec<f64>>,
    duration: f64,
}

impl SpikeData {
    /// Validates ordering and range. Used when reading spikes back from disk.
    pub fn new(trains: Vec<Vec<f64>>, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(invalid(format!("duration = {duration} must be non-negative")));
        }
        for (i, train) in trains.iter().enumerate() {
            if train.iter().any(|&t| !(0.0..=duration).contains(&t)) {
                return Err(invalid(format!("neuron {i} has a spike outside [0, {duration}]")));
            }
            if train.windows(2).any(|w| w[1] <= w[0]) {
                return Err(invalid(format!("spike train of neuron {i} is not strictly increasing")));
            }
        }
        Ok(Self { n: trains.len(), trains, duration })
    }

    pub fn empty(n: usize, duration: f64) -> Self {
        Self { n, trains: vec![Vec::new(); n], duration }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn train(&self, neuron: usize) -> &[f64] {
        &self.trains[neuron]
    }

    pub fn trains(&self) -> &[Vec<f64>] {
        &self.trains
    }

    pub fn total_spikes(&self) -> usize {
        self.trains.iter().map(Vec::len).sum()
    }

    /// All `(neuron, time)` events sorted by time, then neuron.
    pub fn events(&self) -> Vec<(usize, f64)> {
        let mut events: Vec<(usize, f64)> =
            self.trains.iter().enumerate().flat_map(|(i, train)| train.iter().map(move |&t| (i, t))).collect();
        events.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        events
    }

    /// Smallest interval between consecutive spikes of any single neuron.
    pub fn min_isi(&self) -> Option<f64> {
        self.trains.iter().flat_map(|train| train.windows(2).map(|w| w[1] - w[0])).reduce(f64::min)
    }
}

/// Membrane potential of one neuron sampled once per step, starting at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MembraneTrace {
    pub neuron: usize,
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub spikes: SpikeData,
    pub traces: Vec<MembraneTrace>,
}

/// A prepared run. Construct with [`Simulation::new`], optionally override
/// the initial potentials, then [`run`](Simulation::run).
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    net: &'a SpikingNetwork,
    schedule: &'a DriveSchedule,
    cfg: SimulationConfig,
    initial: Vec<f64>,
}

impl<'a> Simulation<'a> {
    pub fn new(net: &'a SpikingNetwork, schedule: &'a DriveSchedule, cfg: SimulationConfig) -> Result<Self> {
        cfg.validate(net)?;
        if let Some(max) = schedule.max_target() {
            if max >= net.n() {
                return Err(invalid(format!("schedule drives neuron {max} but the network has {} neurons", net.n())));
            }
        }
        let initial = vec![net.params().v_rest; net.n()];
        Ok(Self { net, schedule, cfg, initial })
    }

    pub fn with_initial_potentials(mut self, v: Vec<f64>) -> Result<Self> {
        if v.len() != self.net.n() {
            return Err(Error::LengthMismatch { left: v.len(), right: self.net.n() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(invalid("initial potentials must be finite"));
        }
        self.initial = v;
        Ok(self)
    }

    pub fn duration(&self) -> f64 {
        self.cfg.duration.unwrap_or(self.schedule.total_duration())
    }

    pub fn run(&self) -> Result<SpikeData> {
        Ok(self.run_recording(&[])?.spikes)
    }

    /// Runs and samples the membrane potential of `record` (or of every
    /// neuron if `record` is empty and `record_potentials` is set).
    pub fn run_recording(&self, record: &[usize]) -> Result<SimulationOutput> {
        let n = self.net.n();
        if let Some(&bad) = record.iter().find(|&&i| i >= n) {
            return Err(invalid(format!("cannot record neuron {bad} of {n}")));
        }
        let record: Vec<usize> =
            if record.is_empty() && self.cfg.record_potentials { (0..n).collect() } else { record.to_vec() };

        let params = self.net.params();
        let dt = self.cfg.dt;
        let duration = self.duration();
        let steps = libm::floor(duration / dt + STEP_EPS) as u64;
        let refractory_steps = libm::round(params.t_refract / dt) as u64;
        let decay = libm::exp(-dt / params.tau);
        let time_of = step_clock(dt);

        let mut v = self.initial.clone();
        let mut refractory_until = vec![0u64; n];
        let mut trains = vec![Vec::new(); n];
        let mut traces: Vec<MembraneTrace> = record
            .iter()
            .map(|&i| {
                let mut samples = Vec::with_capacity(steps as usize + 1);
                samples.push((0.0, v[i]));
                MembraneTrace { neuron: i, samples }
            })
            .collect();

        let mut input = vec![0.0; n];
        let mut drive = vec![0.0; n];
        let mut driven: Vec<usize> = Vec::new();
        let mut fired: Vec<usize> = Vec::new();
        let mut fired_next: Vec<usize> = Vec::new();
        let pulses = self.schedule.pulses();
        let mut first_live = 0;

        for k in 0..steps {
            let t = time_of(k);

            input.iter_mut().for_each(|x| *x = 0.0);
            for &j in &fired {
                for (acc, w) in input.iter_mut().zip(self.net.outgoing(j)) {
                    *acc += w;
                }
            }

            for &i in &driven {
                drive[i] = 0.0;
            }
            driven.clear();
            while first_live < pulses.len() && pulses[first_live].support().1 <= t {
                first_live += 1;
            }
            for p in &pulses[first_live..] {
                let (lo, hi) = p.support();
                if lo > t {
                    break;
                }
                if t < hi {
                    if drive[p.target] == 0.0 {
                        driven.push(p.target);
                    }
                    drive[p.target] += params.r_membrane * p.value(t);
                }
            }

            fired_next.clear();
            let t_end = time_of(k + 1);
            for i in 0..n {
                if k < refractory_until[i] {
                    v[i] = params.v_reset;
                    continue;
                }
                let ext = drive[i];
                let mut vi = ext + (v[i] - ext) * decay + input[i];
                if let Some(floor) = self.cfg.potential_floor {
                    vi = vi.max(floor);
                }
                if !vi.is_finite() {
                    return Err(Error::NumericFault { neuron: i, time_ms: t_end });
                }
                if vi >= params.v_th {
                    trains[i].push(t_end);
                    vi = params.v_reset;
                    refractory_until[i] = k + 1 + refractory_steps;
                    fired_next.push(i);
                }
                v[i] = vi;
            }
            for trace in &mut traces {
                trace.samples.push((t_end, v[trace.neuron]));
            }
            core::mem::swap(&mut fired, &mut fired_next);
        }

        Ok(SimulationOutput { spikes: SpikeData { n, trains, duration }, traces })
    }
}

/// Time of step boundary `k`. When `dt` divides 1 ms evenly the division
/// form keeps times like 0.1 * 11901 printing as `1190.1`.
fn step_clock(dt: f64) -> impl Fn(u64) -> f64 {
    let per_ms = libm::round(1.0 / dt);
    let exact = per_ms >= 1.0 && (1.0 / dt - per_ms).abs() < 1e-9;
    move |k| if exact { k as f64 / per_ms } else { k as f64 * dt }
}

pub fn run_simulation(net: &SpikingNetwork, schedule: &DriveSchedule, cfg: &SimulationConfig) -> Result<SpikeData> {
    Simulation::new(net, schedule, *cfg)?.run()
}

pub fn record_membrane(
    net: &SpikingNetwork,
    schedule: &DriveSchedule,
    cfg: &SimulationConfig,
    neurons: &[usize],
) -> Result<Vec<MembraneTrace>> {
    Ok(Simulation::new(net, schedule, *cfg)?.run_recording(neurons)?.traces)
}
