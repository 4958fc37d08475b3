//! Structural invariants of the solver and the proof pipeline, checked on
//! random data and on the benchmark.

use proptest::prelude::*;
use rdlab::benchmark::BenchmarkSpec;
use rdlab::network::{builtin, ReactionNetwork};
use rdlab::proof::{self, ProofDiagnostics};
use rdlab::simulator::{DomainKind, SolverConfig};
use rdlab::{simulate, Field, Grid, Trajectory};

fn short_run(net: ReactionNetwork, values: &[Vec<f64>], diffusivities: Vec<f64>) -> Trajectory {
    let grid = Grid::line(1.0, values[0].len()).unwrap();
    let cfg = SolverConfig {
        initial_data: values.iter().map(|v| Field::new(grid.clone(), v.clone()).unwrap()).collect(),
        network: net,
        diffusivities,
        grid,
        t_end: 0.25,
        dt_init: 1.0 / 256.0,
        dt_min: 1e-9,
        dt_max: 1.0 / 256.0,
        snapshot_interval: 1.0 / 64.0,
        domain: DomainKind::Bounded,
    };
    simulate(cfg).unwrap()
}

fn state_strategy() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (
        prop::collection::vec(prop::collection::vec(0.01f64..3.0, 16), 4),
        prop::collection::vec(0.1f64..10.0, 4),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conserving_network_keeps_mass_and_positivity((u0, d) in state_strategy()) {
        let traj = short_run(builtin("four_species").unwrap(), &u0, d);
        prop_assert!(traj.min_value() >= 0.0);
        prop_assert!(traj.mass_drift_rel() <= 1e-10, "drift {}", traj.mass_drift_rel());
    }

    #[test]
    fn lossy_network_never_gains_mass((u0, d) in state_strategy()) {
        let traj = short_run(builtin("four_species_lossy").unwrap(), &u0, d);
        prop_assert!(traj.min_value() >= 0.0);
        for p in traj.diagnostics.windows(2) {
            prop_assert!(p[1].mass <= p[0].mass * (1.0 + 1e-12));
        }
    }

    #[test]
    fn dual_problem_starts_from_the_entropy((u0, d) in state_strategy()) {
        let traj = short_run(builtin("four_species").unwrap(), &u0, d);
        let diag = ProofDiagnostics::with_k(&traj, 8.0).unwrap();
        // z(0) = 0, so phi(0) is the summed entropy of the data and C1 is its sup.
        let mut sup: f64 = 0.0;
        for j in 0..16 {
            let s: f64 = u0.iter().map(|u| (1.0 + u[j]) * u[j].ln_1p()).sum();
            sup = sup.max(s);
            prop_assert!((diag.phi_fields[0].values()[j] - s).abs() <= 1e-10 * s.max(1.0));
        }
        prop_assert!((diag.c1 - sup).abs() <= 1e-12 * sup);
        for zs in &diag.z_fields {
            for z in zs {
                prop_assert!(z.min() >= -1e-12);
            }
        }
    }
}

fn off_equilibrium() -> Trajectory {
    let grid = Grid::line(1.0, 32).unwrap();
    let mut cfg = BenchmarkSpec::default().with_points(32).config();
    cfg.initial_data = [0.3, 0.01, 0.3, 5.0].iter().map(|&c| Field::constant(&grid, c)).collect();
    simulate(cfg).unwrap()
}

#[test]
fn drift_constant_is_necessary_away_from_equilibrium() {
    let net = builtin("four_species").unwrap();
    let traj = off_equilibrium();
    let k = proof::compute_k(&net);
    let critical = proof::critical_k(&traj, &net);
    assert!(critical > 0.0 && critical < k / 4.0, "critical K {critical}");
    let (v, _) = proof::entropy_variables(&traj, 0.0);
    let quarter = proof::k_sensitivity(&traj, &net, &v, 0.25).unwrap();
    assert!(quarter.at_k.holds() && quarter.at_scaled_k.holds());
    let zero = proof::k_sensitivity(&traj, &net, &v, 0.0).unwrap();
    assert!(zero.scaled_k_fails());
    assert!(zero.at_scaled_k.exceed_fraction > 0.5);
}

#[test]
fn benchmark_margins_hold_and_are_resolution_stable() {
    let net = builtin("four_species").unwrap();
    let coarse = simulate(BenchmarkSpec::default().with_points(64).config()).unwrap();
    let a = ProofDiagnostics::from_trajectory(&coarse, &net).unwrap();
    assert!(a.holds());
    let fine = simulate(BenchmarkSpec::default().with_points(128).config()).unwrap();
    let b = ProofDiagnostics::from_trajectory(&fine, &net).unwrap();
    assert!(b.holds());
    for ((_, ma), (_, mb)) in a.step2.margins().iter().zip(b.step2.margins().iter()) {
        assert!((ma.worst - mb.worst).abs() <= 1e-2 * ma.worst.abs() + 1e-9 * a.c1, "{} vs {}", ma.worst, mb.worst);
    }
}
