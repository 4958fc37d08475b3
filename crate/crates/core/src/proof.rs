//! Entropy variables, the auxiliary dual problem and the inequalities they
//! satisfy, evaluated along a simulated trajectory.
//!
//! The global existence argument runs in three steps:
//!
//! 1. With `v_i = (1 + u_i) log(1 + u_i)` and `w_i = v_i e^{-Kt}`,
//!    `K = m^{3/2} M`, the tilted entropies form a subsolution family:
//!    `sum_i (d/dt - d_i Delta) w_i <= 0`.
//! 2. With `d = 1 + max_i d_i`, the solutions `z_i` of
//!    `(d/dt - d Delta) z_i = w_i`, `z_i(0) = 0`, give
//!    `phi = sum_i (d/dt - d_i Delta) z_i`, which is a subsolution of the
//!    `d`-heat equation and hence `phi <= C1 = sup_x phi(x, 0)`. From this,
//!    `w_i + sum_j (d - d_j) Delta z_j <= C1` and `z_i <= d C1 T`.
//! 3. Interpolation turns these into `||w_i||_0 <= C[1 + ||w_i||_1^{2/3}]`,
//!    which closes a feedback loop on `||u||_0`.
//!
//! Every margin here is `lhs - rhs`, so a margin `<= 0` means the inequality
//! holds and a positive margin is the size of the violation.

use serde::{Deserialize, Serialize};

use crate::duhamel::duhamel_solve;
use crate::error::{Error, Result};
use crate::grid::Field;
use crate::network::ReactionNetwork;
use crate::simulator::Trajectory;
use crate::spectral::{c1_norm, laplacian};

/// Safety factor on the local truncation estimate of the subsolution
/// residual check. On scalar decay, where the exact residual is known,
/// [`calibrate_disc_constant`] measures about 1; this keeps a factor of 4.
pub const C_DISC: f64 = 4.0;

/// `[time][species]` fields.
pub type FieldSeries = Vec<Vec<Field>>;

/// `K = m^{3/2} M`.
pub fn compute_k(net: &ReactionNetwork) -> f64 {
    (net.species_count() as f64).powf(1.5) * net.growth_constant()
}

fn entropy(u: f64) -> f64 {
    (1.0 + u) * u.ln_1p()
}

/// `v_i = (1 + u_i) log(1 + u_i)` and `w_i = v_i e^{-K t}` at every snapshot.
pub fn entropy_variables(traj: &Trajectory, k: f64) -> (FieldSeries, FieldSeries) {
    let v: FieldSeries = traj
        .states
        .iter()
        .map(|s| s.iter().map(|f| f.map(entropy)).collect())
        .collect();
    let w = tilt(&v, &traj.times, k);
    (v, w)
}

fn tilt(v: &FieldSeries, times: &[f64], k: f64) -> FieldSeries {
    v.iter()
        .zip(times)
        .map(|(s, &t)| s.iter().map(|f| f.scale((-k * t).exp())).collect())
        .collect()
}

/// Worst value of a signed margin over space-time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    /// Largest `lhs - rhs` seen.
    pub worst: f64,
    pub time: f64,
    pub node: usize,
    /// Allowed slack; the inequality counts as satisfied if `worst <= tolerance`.
    pub tolerance: f64,
}

impl Margin {
    fn new(tolerance: f64) -> Self {
        Self {
            worst: f64::NEG_INFINITY,
            time: 0.0,
            node: 0,
            tolerance,
        }
    }

    fn offer(&mut self, value: f64, time: f64, node: usize) {
        if value > self.worst {
            self.worst = value;
            self.time = time;
            self.node = node;
        }
    }

    pub fn holds(&self) -> bool {
        self.worst <= self.tolerance
    }

    /// Positive part of the worst margin.
    pub fn violation(&self) -> f64 {
        self.worst.max(0.0)
    }
}

/// Result of the subsolution residual check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub k: f64,
    /// The discrete residual `sum_i (dw_i/dt - d_i Delta w_i)`; its
    /// `tolerance` is the local tolerance at the worst sample.
    pub residual: Margin,
    /// Residual minus local tolerance; the check passes iff this is `<= 0`.
    pub excess: Margin,
    /// Fraction of interior space-time samples with residual above tolerance.
    pub exceed_fraction: f64,
    pub samples: usize,
}

impl ResidualReport {
    pub fn holds(&self) -> bool {
        self.excess.holds()
    }
}

/// Three-point derivative weights at the middle of `t0 < t1 < t2`.
fn central_weights(t0: f64, t1: f64, t2: f64) -> [f64; 3] {
    let (a, b) = (t1 - t0, t2 - t1);
    [-b / (a * (a + b)), (b - a) / (a * b), a / (b * (a + b))]
}

/// `3! f[t0, t1, t2, t3]`, the third derivative estimate from four samples.
fn third_derivative(t: [f64; 4], y: [f64; 4]) -> f64 {
    let mut d = y;
    for order in 1..4 {
        for j in (order..4).rev() {
            d[j] = (d[j] - d[j - 1]) / (t[j] - t[j - order]);
        }
    }
    6.0 * d[3]
}

/// Per interior snapshot: the residual `sum_i (dw_i/dt - d_i Delta w_i)` and
/// the leading truncation error of that residual,
/// `sum_i (tau_- tau_+ |d^3 w_i / dt^3| / 6 + d_i h^2 |Delta^2 w_i| / 12)`,
/// with the time derivative taken from the four nearest snapshots.
fn subsolution_residual(
    w: &FieldSeries,
    times: &[f64],
    grid_h: f64,
    diffusivities: &[f64],
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let last = times.len() - 1;
    (1..last)
        .map(|n| {
            let c = central_weights(times[n - 1], times[n], times[n + 1]);
            let tau2 = (times[n] - times[n - 1]) * (times[n + 1] - times[n]);
            let window = if n + 2 <= last {
                Some(n - 1)
            } else if n >= 2 {
                Some(n - 2)
            } else {
                None
            };
            let len = w[n][0].values().len();
            let mut res = vec![0.0; len];
            let mut est = vec![0.0; len];
            for (i, &d) in diffusivities.iter().enumerate() {
                let lap = laplacian(&w[n][i], d);
                let bilap = laplacian(&lap, 1.0);
                let (a, b, e) = (w[n - 1][i].values(), w[n][i].values(), w[n + 1][i].values());
                for j in 0..len {
                    let dt = c[0] * a[j] + c[1] * b[j] + c[2] * e[j];
                    res[j] += dt - lap.values()[j];
                    let ttt = window.map_or(0.0, |s| {
                        let tt = [times[s], times[s + 1], times[s + 2], times[s + 3]];
                        let yy = [0, 1, 2, 3].map(|q| w[s + q][i].values()[j]);
                        third_derivative(tt, yy)
                    });
                    est[j] += tau2 * ttt.abs() / 6.0 + grid_h * grid_h * bilap.values()[j].abs() / 12.0;
                }
            }
            (res, est)
        })
        .collect()
}

/// Checks `sum_i (d/dt - d_i Delta) w_i <= 0` with centred time differences
/// and spectral Laplacians. Each sample is compared against `C_DISC` times
/// its local truncation estimate, so an unresolved initial layer is budgeted
/// where it occurs instead of through a global scale.
pub fn check_entropy_inequality_13(traj: &Trajectory, v: &FieldSeries, k: f64) -> Result<ResidualReport> {
    if traj.times.len() < 3 {
        return Err(Error::TooFewSnapshots {
            needed: 3,
            got: traj.times.len(),
        });
    }
    let w = tilt(v, &traj.times, k);
    let rows = subsolution_residual(&w, &traj.times, traj.grid.max_spacing(), &traj.diffusivities);
    let mut residual = Margin::new(0.0);
    let mut excess = Margin::new(0.0);
    let mut exceed = 0;
    let mut samples = 0;
    for (n, (res, est)) in rows.iter().enumerate() {
        let t = traj.times[n + 1];
        for (j, (&r, &e)) in res.iter().zip(est).enumerate() {
            let tol = C_DISC * e;
            if r > residual.worst {
                residual.tolerance = tol;
            }
            residual.offer(r, t, j);
            excess.offer(r - tol, t, j);
            samples += 1;
            if r > tol {
                exceed += 1;
            }
        }
    }
    Ok(ResidualReport {
        k,
        residual,
        excess,
        exceed_fraction: exceed as f64 / samples as f64,
        samples,
    })
}

/// Smallest drift constant the reaction term needs along the trajectory:
/// `max_{x,t} sum_i log(1 + u_i) f_i(u) / sum_i v_i`. The chain rule gives
/// `sum_i (d/dt - d_i Delta) v_i <= sum_i log(1 + u_i) f_i(u)`, so any `K`
/// above this value makes the tilted entropies a subsolution family.
pub fn critical_k(traj: &Trajectory, net: &ReactionNetwork) -> f64 {
    let m = traj.species_count();
    let mut u = vec![0.0; m];
    let mut f = vec![0.0; m];
    let mut worst = f64::NEG_INFINITY;
    for state in &traj.states {
        for j in 0..traj.grid.len() {
            for (ui, s) in u.iter_mut().zip(state) {
                *ui = s.values()[j].max(0.0);
            }
            net.eval_into(&u, &mut f);
            let drive: f64 = u.iter().zip(&f).map(|(ui, fi)| ui.ln_1p() * fi).sum();
            let total: f64 = u.iter().map(|&ui| entropy(ui)).sum();
            if total > 0.0 {
                worst = worst.max(drive / total);
            }
        }
    }
    worst
}

/// The residual check repeated with `K` scaled down.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KSensitivity {
    pub k: f64,
    pub k_critical: f64,
    pub factor: f64,
    pub at_k: ResidualReport,
    pub at_scaled_k: ResidualReport,
}

impl KSensitivity {
    /// True when the scaled constant breaks the inequality but `K` does not.
    pub fn scaled_k_fails(&self) -> bool {
        self.at_k.holds() && !self.at_scaled_k.holds()
    }
}

/// Runs the residual check with `K` and with `factor * K`.
pub fn k_sensitivity(
    traj: &Trajectory,
    net: &ReactionNetwork,
    v: &FieldSeries,
    factor: f64,
) -> Result<KSensitivity> {
    let k = compute_k(net);
    Ok(KSensitivity {
        k,
        k_critical: critical_k(traj, net),
        factor,
        at_k: check_entropy_inequality_13(traj, v, k)?,
        at_scaled_k: check_entropy_inequality_13(traj, v, factor * k)?,
    })
}

/// `z_i` solving `(d/dt - d_aux Delta) z_i = w_i`, `z_i(0) = 0`, on the
/// snapshot mesh (which must be uniform).
pub fn solve_auxiliary(times: &[f64], w: &FieldSeries, d_aux: f64) -> Result<FieldSeries> {
    if times.len() < 2 {
        return Err(Error::EmptyTimeMesh);
    }
    let tau = times[1] - times[0];
    if times.windows(2).any(|p| ((p[1] - p[0]) - tau).abs() > 1e-9 * tau) {
        return Err(Error::InvalidConfig("auxiliary problem needs uniform snapshots".into()));
    }
    let t_end = times[times.len() - 1];
    let m = w[0].len();
    let zero = Field::zeros(w[0][0].grid());
    let per_species = (0..m)
        .map(|i| {
            let source: Vec<Field> = w.iter().map(|s| s[i].clone()).collect();
            duhamel_solve(&zero, &source, d_aux, 0.0, t_end)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..times.len())
        .map(|n| per_species.iter().map(|z| z[n].clone()).collect())
        .collect())
}

/// `phi = sum_i (w_i + (d_aux - d_i) Delta z_i)` at every snapshot, and
/// `C1 = sup_x sum_i (1 + u_{0,i}) log(1 + u_{0,i})`.
///
/// Using `dz_i/dt = w_i + d_aux Delta z_i` avoids differencing `z` in time.
pub fn compute_phi_and_c1(
    z: &FieldSeries,
    w: &FieldSeries,
    diffusivities: &[f64],
    d_aux: f64,
    u0: &[Field],
) -> (Vec<Field>, f64) {
    let phi = z
        .iter()
        .zip(w)
        .map(|(zs, ws)| {
            let mut acc = Field::zeros(ws[0].grid());
            for ((zi, wi), &di) in zs.iter().zip(ws).zip(diffusivities) {
                acc = acc.axpy(1.0, wi).axpy(1.0, &laplacian(zi, d_aux - di));
            }
            acc
        })
        .collect();
    let c1 = initial_entropy_sup(u0);
    (phi, c1)
}

fn initial_entropy_sup(u0: &[Field]) -> f64 {
    let len = u0[0].values().len();
    (0..len)
        .map(|j| u0.iter().map(|f| entropy(f.values()[j])).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Margins of the dual-problem inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step2Report {
    /// `phi - C1`
    pub phi_bound: Margin,
    /// `w_i + sum_j (d - d_j) Delta z_j - C1`, worst over `i`
    pub w_bound: Margin,
    /// `z_i - d C1 T`
    pub z_upper: Margin,
    /// `-z_i`
    pub z_nonnegative: Margin,
}

impl Step2Report {
    pub fn holds(&self) -> bool {
        self.margins().iter().all(|(_, m)| m.holds())
    }

    pub fn margins(&self) -> [(&'static str, &Margin); 4] {
        [
            ("phi_bound", &self.phi_bound),
            ("w_bound", &self.w_bound),
            ("z_upper", &self.z_upper),
            ("z_nonnegative", &self.z_nonnegative),
        ]
    }
}

/// Feedback quantities of the last step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeedbackReport {
    /// `||w_i||_{0,T} / (1 + ||w_i||_{1,T}^{2/3})` per species.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// `||u||_{0,T}`
    pub sup_u: f64,
    /// `(1+U) log(1+U) / ((1+U) log(2+U)^{2/3})` with `U = ||u||_{0,T}`.
    pub closing_ratio: f64,
}

/// Every intermediate quantity plus the margins.
#[derive(Clone, Debug)]
pub struct ProofDiagnostics {
    pub k: f64,
    pub d_aux: f64,
    pub c1: f64,
    pub times: Vec<f64>,
    pub v_fields: FieldSeries,
    pub w_fields: FieldSeries,
    pub z_fields: FieldSeries,
    pub phi_fields: Vec<Field>,
    pub residual: ResidualReport,
    pub step2: Step2Report,
    pub feedback: FeedbackReport,
}

impl ProofDiagnostics {
    /// Builds everything from a completed trajectory.
    pub fn from_trajectory(traj: &Trajectory, net: &ReactionNetwork) -> Result<Self> {
        Self::with_k(traj, compute_k(net))
    }

    /// As [`Self::from_trajectory`] with an explicit drift constant.
    pub fn with_k(traj: &Trajectory, k: f64) -> Result<Self> {
        let d_aux = 1.0 + traj.diffusivities.iter().copied().fold(0.0, f64::max);
        let (v, w) = entropy_variables(traj, k);
        let residual = check_entropy_inequality_13(traj, &v, k)?;
        let z = solve_auxiliary(&traj.times, &w, d_aux)?;
        let (phi, c1) = compute_phi_and_c1(&z, &w, &traj.diffusivities, d_aux, &traj.states[0]);
        let mut diag = Self {
            k,
            d_aux,
            c1,
            times: traj.times.clone(),
            v_fields: v,
            w_fields: w,
            z_fields: z,
            phi_fields: phi,
            residual,
            step2: Step2Report {
                phi_bound: Margin::new(0.0),
                w_bound: Margin::new(0.0),
                z_upper: Margin::new(0.0),
                z_nonnegative: Margin::new(0.0),
            },
            feedback: FeedbackReport {
                ratios: Vec::new(),
                max_ratio: 0.0,
                sup_u: 0.0,
                closing_ratio: 0.0,
            },
        };
        diag.step2 = verify_step2(&diag);
        diag.feedback = verify_feedback_19(traj, &diag.w_fields);
        Ok(diag)
    }

    /// All residual and dual-problem margins within tolerance.
    pub fn holds(&self) -> bool {
        self.residual.holds() && self.step2.holds()
    }
}

/// Relative slack of the dual-problem checks: `tol = STEP2_TOL * C1`.
pub const STEP2_TOL: f64 = 1e-6;

/// Evaluates `phi <= C1`, `w_i + sum_j (d - d_j) Delta z_j <= C1`,
/// `z_i <= d C1 T` and `z_i >= 0` at every node and snapshot.
pub fn verify_step2(diag: &ProofDiagnostics) -> Step2Report {
    let tol = STEP2_TOL * diag.c1;
    let t_end = *diag.times.last().expect("non-empty mesh");
    let mut phi_bound = Margin::new(tol);
    let mut w_bound = Margin::new(tol);
    let mut z_upper = Margin::new(tol);
    let mut z_nonnegative = Margin::new(tol);
    let z_cap = diag.d_aux * diag.c1 * t_end;
    for (n, &t) in diag.times.iter().enumerate() {
        let phi = diag.phi_fields[n].values();
        let ws = &diag.w_fields[n];
        let zs = &diag.z_fields[n];
        for j in 0..phi.len() {
            phi_bound.offer(phi[j] - diag.c1, t, j);
            // sum_j (d - d_j) Delta z_j = phi - sum_j w_j
            let sum_w: f64 = ws.iter().map(|f| f.values()[j]).sum();
            let diffusion = phi[j] - sum_w;
            for (wi, zi) in ws.iter().zip(zs) {
                w_bound.offer(wi.values()[j] + diffusion - diag.c1, t, j);
                z_upper.offer(zi.values()[j] - z_cap, t, j);
                z_nonnegative.offer(-zi.values()[j], t, j);
            }
        }
    }
    Step2Report {
        phi_bound,
        w_bound,
        z_upper,
        z_nonnegative,
    }
}

/// Ratios of the feedback inequality, sup-in-time over the snapshots.
pub fn verify_feedback_19(traj: &Trajectory, w: &FieldSeries) -> FeedbackReport {
    let m = traj.species_count();
    let ratios: Vec<f64> = (0..m)
        .map(|i| {
            let (c0, c1) = w
                .iter()
                .map(|s| c1_norm(&s[i]))
                .fold((0.0f64, 0.0f64), |(a, b), (x, y)| (a.max(x), b.max(y)));
            c0 / (1.0 + c1.powf(2.0 / 3.0))
        })
        .collect();
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let u = traj.sup_norm();
    let closing_ratio = u.ln_1p() / (2.0 + u).ln().powf(2.0 / 3.0);
    FeedbackReport {
        ratios,
        max_ratio,
        sup_u: u,
        closing_ratio,
    }
}

/// Measures the differencing error of the residual check on scalar decay,
/// `u' = -u + u_xx`, `u_0 = 1 + cos(pi x) / 2` on `[0, 1]`, where the exact
/// residual is known in closed form. Returns the largest ratio of the actual
/// error to the local truncation estimate.
pub fn calibrate_disc_constant() -> Result<f64> {
    use crate::grid::Grid;
    use crate::network::builtin;
    use crate::simulator::{simulate, DomainKind, SolverConfig};
    use std::f64::consts::PI;

    let net = builtin("scalar_decay").expect("built-in");
    let k = compute_k(&net);
    let grid = Grid::line(1.0, 32)?;
    let exact_u = |x: f64, t: f64| (-t).exp() * (1.0 + 0.5 * (-PI * PI * t).exp() * (PI * x).cos());
    let cfg = SolverConfig {
        network: net,
        diffusivities: vec![1.0],
        initial_data: vec![Field::from_fn(&grid, |x| exact_u(x[0], 0.0))],
        grid: grid.clone(),
        t_end: 0.5,
        dt_init: 1.0 / 256.0,
        dt_min: 1e-9,
        dt_max: 1.0 / 256.0,
        snapshot_interval: 1.0 / 64.0,
        domain: DomainKind::Bounded,
    };
    let traj = simulate(cfg)?;
    let (_, w) = entropy_variables(&traj, k);
    let rows = subsolution_residual(&w, &traj.times, grid.max_spacing(), &traj.diffusivities);
    let mut ratio: f64 = 0.0;
    for (n, (res, est)) in rows.iter().enumerate() {
        let t = traj.times[n + 1];
        for (j, (&r, &e)) in res.iter().zip(est).enumerate() {
            let x = grid.node(j)[0];
            let u = exact_u(x, t);
            let ux = -(-t).exp() * 0.5 * (-PI * PI * t).exp() * PI * (PI * x).sin();
            let exact = (-k * t).exp() * (-(1.0 + u.ln_1p()) * u - ux * ux / (1.0 + u) - k * entropy(u));
            ratio = ratio.max((r - exact).abs() / e);
        }
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::network::{builtin, four_species, zero_field};
    use crate::simulator::{simulate, DomainKind, SolverConfig};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    fn constant_run(net: ReactionNetwork, u0: Vec<f64>, d: Vec<f64>, t_end: f64) -> Trajectory {
        let g = Grid::line(1.0, 8).unwrap();
        simulate(SolverConfig {
            network: net,
            diffusivities: d,
            initial_data: u0.iter().map(|&c| Field::constant(&g, c)).collect(),
            grid: g,
            t_end,
            dt_init: 1.0 / 128.0,
            dt_min: 1e-9,
            dt_max: 1.0 / 128.0,
            snapshot_interval: 1.0 / 64.0,
            domain: DomainKind::Bounded,
        })
        .unwrap()
    }

    #[test]
    fn k_values() {
        assert_eq!(compute_k(&four_species()), 8.0);
        let two = ReactionNetwork::new("t", vec!["a".into(), "b".into()], vec![vec![], vec![]], 3.0).unwrap();
        assert_abs_diff_eq!(compute_k(&two), 8.485281374238571, epsilon = 1e-12);
        assert_eq!(compute_k(&zero_field(3)), 0.0);
    }

    #[test]
    fn entropy_variable_values() {
        let traj = constant_run(zero_field(1), vec![E - 1.0], vec![1.0], 0.25);
        let k = 4.0;
        let (v, w) = entropy_variables(&traj, k);
        assert_abs_diff_eq!(v[0][0].values()[0], E, epsilon = 1e-14);
        // t = 1/K = 0.25 is the last snapshot
        assert_abs_diff_eq!(w.last().unwrap()[0].values()[3], 1.0, epsilon = 1e-14);
        assert_eq!(entropy(0.0), 0.0);
    }

    #[test]
    fn equilibrium_residual_is_pure_damping() {
        let traj = constant_run(four_species(), vec![1.0; 4], vec![1.0, 10.0, 0.1, 5.0], 0.25);
        let (v, _) = entropy_variables(&traj, 0.0);
        let r = check_entropy_inequality_13(&traj, &v, 8.0).unwrap();
        // -K sum_i v_i = -8 * 4 * 2 log 2 at t = 0; tilted by e^{-Kt} later
        let t = r.residual.time;
        let expected = -8.0 * 8.0 * 2f64.ln() * (-8.0 * t).exp();
        // centred difference of an exponential: relative error ~ (K tau)^2 / 6
        assert!((r.residual.worst - expected).abs() < 0.01 * expected.abs());
        assert!(r.residual.worst < 0.0 && r.holds());
        assert_eq!(r.exceed_fraction, 0.0);
    }

    #[test]
    fn residual_needs_three_snapshots() {
        let mut traj = constant_run(zero_field(1), vec![1.0], vec![1.0], 0.25);
        traj.times.truncate(2);
        traj.states.truncate(2);
        let (v, _) = entropy_variables(&traj, 1.0);
        assert!(matches!(
            check_entropy_inequality_13(&traj, &v, 1.0),
            Err(Error::TooFewSnapshots { .. })
        ));
    }

    #[test]
    fn auxiliary_closed_forms() {
        let g = Grid::line(1.0, 8).unwrap();
        let times: Vec<f64> = (0..65).map(|n| n as f64 / 64.0).collect();
        let zero: FieldSeries = times.iter().map(|_| vec![Field::zeros(&g)]).collect();
        let z = solve_auxiliary(&times, &zero, 2.0).unwrap();
        assert!(z.iter().all(|s| s[0].sup_norm() == 0.0));

        let c: FieldSeries = times.iter().map(|_| vec![Field::constant(&g, 3.0)]).collect();
        let z = solve_auxiliary(&times, &c, 2.0).unwrap();
        for (n, &t) in times.iter().enumerate() {
            assert!(z[n][0].max_abs_diff(&Field::constant(&g, 3.0 * t)) < 1e-12);
        }
    }

    #[test]
    fn c1_of_unit_data() {
        let g = Grid::line(1.0, 8).unwrap();
        let u0 = vec![Field::constant(&g, 1.0); 4];
        assert_abs_diff_eq!(initial_entropy_sup(&u0), 8.0 * 2f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn scalar_decay_diagnostics() {
        let net = builtin("scalar_decay").unwrap();
        let traj = constant_run(net.clone(), vec![1.0], vec![1.0], 1.0);
        let diag = ProofDiagnostics::from_trajectory(&traj, &net).unwrap();
        assert!(diag.holds(), "{:?} {:?}", diag.residual, diag.step2);
        assert_abs_diff_eq!(diag.c1, 2.0 * 2f64.ln(), epsilon = 1e-14);
        // constant data: phi = w since Delta z = 0
        for (p, w) in diag.phi_fields.iter().zip(&diag.w_fields) {
            assert!(p.max_abs_diff(&w[0]) < 1e-12);
        }
        // spatially constant: ||w||_1 == ||w||_0
        let w0 = diag.w_fields[0][0].sup_norm();
        assert_abs_diff_eq!(diag.feedback.ratios[0], w0 / (1.0 + w0.powf(2.0 / 3.0)), epsilon = 1e-12);
    }

    #[test]
    fn zero_trajectory_feedback_is_zero() {
        let g = Grid::line(1.0, 8).unwrap();
        let traj = Trajectory {
            network: "zero".into(),
            diffusivities: vec![1.0],
            grid: g.clone(),
            domain: DomainKind::Bounded,
            times: vec![0.0, 0.5, 1.0],
            states: vec![vec![Field::zeros(&g)]; 3],
            diagnostics: vec![crate::simulator::diagnostics(0.0, &[Field::zeros(&g)]); 3],
            accepted_steps: 0,
            rejected_steps: 0,
            completed: true,
        };
        let (_, w) = entropy_variables(&traj, 1.0);
        let f = verify_feedback_19(&traj, &w);
        assert_eq!(f.max_ratio, 0.0);
        assert_eq!(f.closing_ratio, 0.0);
    }

    #[test]
    fn critical_k_is_far_below_k_for_four_species() {
        let net = four_species();
        let d = vec![1.0, 10.0, 0.1, 5.0];
        let eq = constant_run(net.clone(), vec![1.0; 4], d.clone(), 0.1);
        assert_eq!(critical_k(&eq, &net), 0.0);
        // near the maximiser of sum log(1+u) f / sum v over the orthant
        let traj = constant_run(net.clone(), vec![5.0, 1e-3, 5.0, 80.0], d, 0.1);
        let kc = critical_k(&traj, &net);
        assert!(kc > 0.03 && kc < 0.06, "{kc}");
        assert!(kc < compute_k(&net) / 4.0);
    }

    #[test]
    fn calibration_is_within_constant() {
        let c = calibrate_disc_constant().unwrap();
        assert!(c > 0.0 && c <= C_DISC / 2.0, "calibrated {c}");
    }
}
