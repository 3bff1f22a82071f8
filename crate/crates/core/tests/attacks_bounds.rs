use std::collections::BTreeSet;

use dicka::attacks::{build_cc_attack, eve_postprocess, local_behavior_from_chi, GUESS_UNKNOWN};
use dicka::behaviors::{behavior_from_measurement, critical_noise, default_measurements, KEY_SETTING};
use dicka::bounds::{
    all_curves, default_grid, dual_bound_curve, dw_lower_proxy_curve, enumerate_partitions, intrinsic_bound_curve,
    path_partition_bound, relay_enumerate, relay_simulate, trivial_bound_curve, write_curves_csv, BoundCurve,
    CurveSettings,
};
use dicka::states::{noisy_ghz3, NoiseParameter};
use proptest::prelude::*;

fn nu(v: f64) -> NoiseParameter<f64> {
    NoiseParameter::new(v).unwrap()
}

fn nonincreasing(c: &BoundCurve, upto: f64) -> bool {
    let s: Vec<f64> = c.samples().iter().filter(|s| s.0 <= upto + 1e-12).map(|s| s.1).collect();
    s.windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

#[test]
fn mixing_identity_on_grid() {
    for v in default_grid() {
        let att = build_cc_attack(nu(v));
        let direct = behavior_from_measurement(&noisy_ghz3(nu(v)).state, &default_measurements()).unwrap();
        let d = direct.conditional(&KEY_SETTING).unwrap();
        let g = att.p_ghz.conditional(&[0, 0, 0]).unwrap();
        let l = local_behavior_from_chi(nu(v));
        let l = l.conditional(&[0, 0, 0]).unwrap();
        for a in 0..8 {
            let mixed = (1.0 - v).powi(3) * g[a] + (1.0 - (1.0 - v).powi(3)) * l[a];
            assert!((mixed - d[a]).abs() < 1e-10);
            assert!((att.joint.forget_eve().probs()[a] - d[a]).abs() < 1e-10);
        }
        let unknown = eve_postprocess(&att).eve_marginal()[GUESS_UNKNOWN];
        let not_all_equal: f64 = (1..7).map(|a| l[a]).sum();
        assert!((unknown - ((1.0 - v).powi(3) + att.local_weight * not_all_equal)).abs() < 1e-12);
    }
}

#[test]
fn figure_structure() {
    let grid = default_grid();
    let settings = CurveSettings::default();
    let fixed = all_curves(&grid, false, &settings).unwrap();
    let minimized = intrinsic_bound_curve(&grid, true).unwrap();
    for c in fixed.iter().chain([&minimized]) {
        assert!((c.samples()[0].1 - 1.0).abs() < 1e-8, "{}", c.name());
    }
    let (yellow, green, red, proxy) = (&fixed[0], &fixed[1], &fixed[2], &fixed[3]);
    assert!(nonincreasing(yellow, 0.12) && nonincreasing(red, 0.12));
    assert!(nonincreasing(proxy, 0.13));
    let crit = critical_noise::<f64>(3).unwrap();
    for i in 0..grid.len() {
        let (y, m) = (yellow.samples()[i].1, minimized.samples()[i].1);
        assert!(m <= y + 1e-9);
        assert!(proxy.samples()[i].1 <= y + 1e-12);
        if grid[i] <= crit {
            assert!(red.samples()[i].1 >= y);
        }
    }
    assert!(green.name().contains("minimize_off"));
    assert!(proxy.name().ends_with("PROXY"));
}

#[test]
fn curves_independent_of_worker_count() {
    let grid: Vec<f64> = default_grid().into_iter().step_by(5).collect();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let mut buf = Vec::new();
            write_curves_csv(&mut buf, &all_curves(&grid, true, &CurveSettings::default()).unwrap()).unwrap();
            buf
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn trivial_and_left_edges() {
    let t = trivial_bound_curve(&[0.0, 0.5, 0.9]).unwrap();
    assert_eq!(t.values().collect::<Vec<_>>(), vec![1.0, 0.5, 1.0 - 0.9]);
    assert!((dual_bound_curve(&[0.0], true).unwrap().samples()[0].1 - 1.0).abs() < 1e-12);
    assert!((dw_lower_proxy_curve(&[0.0]).unwrap().samples()[0].1 - 1.0).abs() < 1e-12);
}

/// Canonical block lists of every map from parties to labels.
fn brute_force_partitions(n: usize) -> BTreeSet<Vec<Vec<usize>>> {
    let mut out = BTreeSet::new();
    for code in 0..n.pow(n as u32) {
        let labels: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
        let mut blocks: Vec<Vec<usize>> = (0..n)
            .map(|l| (0..n).filter(|&i| labels[i] == l).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        blocks.sort();
        if (2..n).contains(&blocks.len()) {
            out.insert(blocks);
        }
    }
    out
}

#[test]
fn partitions_match_brute_force() {
    for n in 3..=5 {
        let mut found: Vec<Vec<Vec<usize>>> = enumerate_partitions(n).unwrap();
        found.iter_mut().for_each(|p| p.sort());
        let set: BTreeSet<_> = found.iter().cloned().collect();
        assert_eq!(set.len(), found.len());
        assert_eq!(set, brute_force_partitions(n));
    }
    assert_eq!(enumerate_partitions(3).unwrap().len(), 3);
    assert_eq!(enumerate_partitions(4).unwrap().len(), 13);
}

#[test]
fn path_bound_is_weakest_edge() {
    assert_eq!(path_partition_bound(&[0.6, 0.35]).unwrap(), 0.35);
    assert_eq!(path_partition_bound(&[0.2, 0.5, 0.9]).unwrap(), 0.2);
}

#[test]
fn relay_exact_statistics() {
    for len in 1..=3 {
        let e = relay_enumerate(3, len).unwrap();
        assert!(e.all_agree && e.transcript_uniform_given_r);
        assert_eq!(e.mutual_information, 0.0);
        assert_eq!(e.guessing_probability, 0.5f64.powi(len as i32));
    }
}

#[test]
fn relay_monte_carlo_independence() {
    // empirical I(transcript : r) with 1-bit keys over 10⁴ seeded runs
    let mut counts = [[0u32; 4]; 2];
    let runs = 10_000;
    for seed in 0..runs {
        let t = relay_simulate(3, 1, seed).unwrap();
        assert!(t.all_agree());
        let m = usize::from(t.broadcasts[0][0]) << 1 | usize::from(t.broadcasts[1][0]);
        counts[usize::from(t.r[0])][m] += 1;
    }
    let n = runs as f64;
    let pr: Vec<f64> = counts.iter().map(|row| row.iter().sum::<u32>() as f64 / n).collect();
    let pt: Vec<f64> = (0..4).map(|m| (counts[0][m] + counts[1][m]) as f64 / n).collect();
    let mut mi = 0.0;
    for r in 0..2 {
        for m in 0..4 {
            let p = counts[r][m] as f64 / n;
            if p > 0.0 {
                mi += p * (p / (pr[r] * pt[m])).log2();
            }
        }
    }
    assert!(mi.abs() < 0.01, "{mi}");
}

proptest! {
    #[test]
    fn relay_always_agrees(n in 3usize..8, len in 1usize..64, seed in any::<u64>()) {
        let t = relay_simulate(n, len, seed).unwrap();
        prop_assert!(t.all_agree());
        prop_assert_eq!(t.broadcasts.len(), n - 1);
    }
}
