mod common;

use proptest::prelude::*;
use spikecomm_core::decode::{
    binarize, bipolar_decode, comparison_matrix, window_spike_counts, Metric, SpikeCounts, TimeWindow,
};
use spikecomm_core::graph::{degree_stats, generate_planted_partition};
use spikecomm_core::model::map_graph_to_network;
use spikecomm_core::stimulus::{community_ordered_schedule, random_permutation_schedule};
use spikecomm_core::{
    DriveSchedule, LabeledGraph, NeuronParams, PartitionSpec, PulseTiming, SimulationConfig, SpikeData, SquarePulse,
    SynapseConfig,
};

fn timing() -> PulseTiming {
    PulseTiming { t_start: 50.0, width: 200.0, gap: 100.0, ..PulseTiming::default() }
}

/// A small random graph with community labels `v % k`.
fn small_graph() -> impl Strategy<Value = LabeledGraph> {
    (2usize..10, 1usize..4).prop_flat_map(|(n, k)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |edges| LabeledGraph::new(n, edges, (0..n).map(|v| v % k.min(n)).collect()).unwrap())
    })
}

fn spike_data(max_n: usize) -> impl Strategy<Value = SpikeData> {
    (1..=max_n, 1u32..=64, any::<u64>())
        .prop_map(|(n, d, seed)| common::random_spikes(&mut common::rng(seed), n, f64::from(d)))
}

fn simulate(g: &LabeledGraph, schedule: &DriveSchedule) -> SpikeData {
    let net = map_graph_to_network(g, NeuronParams::default(), SynapseConfig::default()).unwrap();
    spikecomm_core::simulator::run_simulation(&net, schedule, &SimulationConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn refractory_separation(g in small_graph(), seed in any::<u64>(), a_max in 0.5f64..30.0) {
        let schedule = random_permutation_schedule(&g, seed, &PulseTiming { a_max, ..timing() }).unwrap();
        let spikes = simulate(&g, &schedule);
        let params = NeuronParams::default();
        if let Some(isi) = spikes.min_isi() {
            prop_assert!(isi >= params.t_refract + 0.1 - 1e-9, "isi {isi}");
        }
    }

    #[test]
    fn relabeling_is_equivariant(g in small_graph(), seed in any::<u64>(), shift in 1usize..10) {
        let n = g.n();
        let perm: Vec<usize> = (0..n).map(|v| (v + shift) % n).collect();
        let h = LabeledGraph::new(
            n,
            g.edges().iter().map(|&(u, v)| (perm[u], perm[v])),
            (0..n).map(|v| g.label(perm.iter().position(|&p| p == v).unwrap())).collect(),
        )
        .unwrap();
        let s = random_permutation_schedule(&g, seed, &timing()).unwrap();
        let moved: Vec<SquarePulse> = s.pulses().iter().map(|p| SquarePulse { target: perm[p.target], ..*p }).collect();
        let t = DriveSchedule::new(moved, s.total_duration()).unwrap();
        let (a, b) = (simulate(&g, &s), simulate(&h, &t));
        for (v, &p) in perm.iter().enumerate() {
            prop_assert_eq!(a.train(v), b.train(p));
        }
    }

    #[test]
    fn simulation_is_deterministic(g in small_graph(), seed in any::<u64>()) {
        let s = random_permutation_schedule(&g, seed, &timing()).unwrap();
        prop_assert_eq!(&s, &random_permutation_schedule(&g, seed, &timing()).unwrap());
        prop_assert_eq!(simulate(&g, &s), simulate(&g, &s));
    }

    #[test]
    fn mapping_is_a_bijection(g in small_graph(), w in 0.1f64..2.0) {
        let syn = SynapseConfig::symmetric(w);
        let net = map_graph_to_network(&g, NeuronParams::default(), syn).unwrap();
        let n = g.n();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 0.0 } else if g.has_edge(i, j) { w } else { -w };
                prop_assert_eq!(net.weight(i, j), expected);
            }
        }
        let mut pairs = net.excitatory_pairs();
        pairs.sort_unstable();
        prop_assert_eq!(pairs, g.edges().to_vec());
        let summary = net.summary();
        prop_assert_eq!(summary.positive, 2 * g.edge_count());
        prop_assert_eq!(summary.negative, n * (n - 1) - 2 * g.edge_count());
    }

    #[test]
    fn degrees_satisfy_handshake(seed in any::<u64>(), z_out in 0.0f64..8.0) {
        let g = generate_planted_partition(&PartitionSpec { z_out, seed, ..PartitionSpec::default() }).unwrap();
        let total: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
        let stats = degree_stats(&g);
        prop_assert!((stats.mean_degree - total as f64 / g.n() as f64).abs() < 1e-12);
        let (intra, inter): (f64, f64) = stats.per_community.iter().fold((0.0, 0.0), |acc, c| (acc.0 + c.intra, acc.1 + c.inter));
        let k = stats.per_community.len() as f64;
        prop_assert!(((intra + inter) / k - stats.mean_degree).abs() < 1e-9);
    }

    #[test]
    fn generator_is_deterministic(seed in any::<u64>()) {
        let spec = PartitionSpec { seed, ..PartitionSpec::default() };
        prop_assert_eq!(generate_planted_partition(&spec).unwrap(), generate_planted_partition(&spec).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matrices_are_symmetric_and_bounded(spikes in spike_data(16), w in 1u32..16) {
        let codes = binarize(&spikes, f64::from(w) / 2.0, 0.0).unwrap();
        let len = codes.len() as f64;
        for metric in [Metric::Plain, Metric::Weighted] {
            let m = comparison_matrix(&codes, metric);
            prop_assert!(m.is_symmetric());
            let upper = if metric == Metric::Plain { 1.0 } else { len * len };
            prop_assert!(m.values().iter().all(|&x| (0.0..=upper).contains(&x)));
            for i in 0..m.n() {
                let active = codes.row(i).count_ones() > 0;
                let diag = m.get(i, i);
                match metric {
                    Metric::Plain => prop_assert_eq!(diag, if active { 1.0 } else { 0.0 }),
                    Metric::Weighted => prop_assert_eq!(diag, f64::from(codes.row(i).count_ones()).powi(2)),
                }
            }
        }
    }

    #[test]
    fn coarsening_is_bitwise_or(spikes in spike_data(16), w in 1u32..8, k in 1usize..6, origin in 0u32..8) {
        let w = f64::from(w) / 2.0;
        let origin = f64::from(origin) / 4.0;
        let fine = binarize(&spikes, w, origin).unwrap();
        let coarse = binarize(&spikes, w * k as f64, origin).unwrap();
        prop_assert_eq!(coarse.len(), fine.len().div_ceil(k));
        for i in 0..spikes.n() {
            let mut expected = vec![false; coarse.len()];
            for (j, b) in fine.row(i).to_bools().into_iter().enumerate() {
                expected[j / k] |= b;
            }
            prop_assert_eq!(coarse.row(i).to_bools(), expected);
        }
    }

    #[test]
    fn bipolar_states_are_monotone(spikes in spike_data(12), extra in spike_data(12), lo in 1u32..8, step in 0u32..8) {
        let d = spikes.duration();
        let windows = [TimeWindow::new(0.0, d / 2.0), TimeWindow::new(d / 2.0, d + 1.0)];
        let counts = window_spike_counts(&spikes, &windows).unwrap();
        let (f_lo, f_hi) = (f64::from(lo), f64::from(lo + step));
        let a = bipolar_decode(&counts, f_lo).unwrap();
        let b = bipolar_decode(&counts, f_hi).unwrap();
        for (ra, rb) in a.states.iter().zip(&b.states) {
            for (&sa, &sb) in ra.iter().zip(rb) {
                prop_assert!(sb <= sa);
            }
        }
        // More spikes never turn a +1 into a -1.
        let more = SpikeCounts {
            windows: windows.to_vec(),
            counts: counts.counts.iter().enumerate().map(|(i, row)| {
                row.iter().enumerate().map(|(j, &c)| c + (extra.trains().get(i).map_or(0, |t| t.len()) as u32) * j as u32).collect()
            }).collect(),
        };
        let c = bipolar_decode(&more, f_lo).unwrap();
        for (ra, rc) in a.states.iter().zip(&c.states) {
            for (&sa, &sc) in ra.iter().zip(rc) {
                prop_assert!(sc >= sa);
            }
        }
    }

    #[test]
    fn matrix_rows_permute_with_neurons(spikes in spike_data(16), shift in 0usize..16) {
        let n = spikes.n();
        let perm: Vec<usize> = (0..n).map(|v| (v + shift) % n).collect();
        let mut moved = vec![Vec::new(); n];
        for v in 0..n {
            moved[perm[v]] = spikes.train(v).to_vec();
        }
        let moved = SpikeData::new(moved, spikes.duration()).unwrap();
        let a = comparison_matrix(&binarize(&spikes, 2.0, 0.0).unwrap(), Metric::Weighted);
        let b = comparison_matrix(&binarize(&moved, 2.0, 0.0).unwrap(), Metric::Weighted);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(a.get(i, j), b.get(perm[i], perm[j]));
            }
        }
    }

    #[test]
    fn schedules_never_overlap(n in 1usize..40, seed in any::<u64>(), gap in 0.0f64..500.0, width in 1.0f64..300.0) {
        let g = LabeledGraph::new(n, [], (0..n).map(|v| v % 2.min(n)).collect()).unwrap();
        let t = PulseTiming { gap, width, ..PulseTiming::default() };
        for s in [
            random_permutation_schedule(&g, seed, &t).unwrap(),
            community_ordered_schedule(&g, &(0..g.num_communities()).collect::<Vec<_>>(), &t).unwrap(),
        ] {
            let mut targets: Vec<usize> = s.pulses().iter().map(|p| p.target).collect();
            targets.sort_unstable();
            prop_assert_eq!(targets, (0..n).collect::<Vec<_>>());
            for pair in s.pulses().windows(2) {
                prop_assert!(pair[1].t1 >= pair[0].t2);
                prop_assert!((pair[1].t1 - pair[0].t2 - gap).abs() < 1e-6);
            }
            prop_assert!(s.pulses().last().unwrap().t2 <= s.total_duration());
        }
    }
}

#[test]
fn inter_community_degree_grows_with_mixing() {
    let mean_inter = |z_out: f64| {
        let total: f64 = (0..20)
            .map(|seed| {
                let g = generate_planted_partition(&PartitionSpec { z_out, seed, ..PartitionSpec::default() }).unwrap();
                let stats = degree_stats(&g);
                stats.per_community.iter().map(|c| c.inter).sum::<f64>() / stats.per_community.len() as f64
            })
            .sum();
        total / 20.0
    };
    let levels: Vec<f64> = [0.0, 1.0, 2.0, 4.0, 6.0, 8.0].iter().map(|&z| mean_inter(z)).collect();
    assert_eq!(levels[0], 0.0);
    assert!(levels.windows(2).all(|w| w[1] > w[0]), "{levels:?}");
    for (z, m) in [0.0, 1.0, 2.0, 4.0, 6.0, 8.0].iter().zip(&levels) {
        assert!((m - z).abs() < 0.5, "z_out {z}: measured {m}");
    }
}

#[test]
fn pulse_integral_matches_plateau_area() {
    for (a_max, beta, width) in [(10.2, 1.0, 200.0), (1.0, 0.5, 50.0), (20.0, 4.0, 10.0), (5.0, 0.2, 400.0)] {
        let p = SquarePulse { target: 0, t1: 100.0, t2: 100.0 + width, a_max, beta };
        let (lo, hi) = p.support();
        let steps = 200_000;
        let h = (hi - lo) / steps as f64;
        let integral: f64 = (0..steps).map(|k| p.value(lo + (k as f64 + 0.5) * h)).sum::<f64>() * h;
        let area = 2.0 * a_max * width;
        assert!((integral - area).abs() < 0.01 * area, "{integral} vs {area}");
    }
}
