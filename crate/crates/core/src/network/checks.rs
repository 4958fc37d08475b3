//! Sampled verification of the structural conditions on `f`.
//!
//! Each condition is an inequality that must hold for every admissible state.
//! It is checked on a deterministic log-spaced lattice, a batch of uniform
//! random points, and a short hill climb started from the worst point found.
//! Margins are signed: nonnegative means the inequality holds at that point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ReactionNetwork;

/// Relative tolerance for the `<= 0` type inequalities.
const TOL: f64 = 1e-9;

/// Radii multipliers `10^j` used to probe the growth bound far outside the box.
const RADIAL_DECADES: i32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `u >= 0, u_i = 0 => f_i(u) >= 0`.
    QuasiPositivity,
    /// `sum_i f_i(u) <= 0` for `u > 0`.
    MassDissipation,
    /// `sum_i f_i(u) = 0` for `u >= 0`.
    MassConservation,
    /// `sum_i f_i(u) log u_i <= 0` for `u > 0`.
    EntropyDissipation,
    /// `|grad f_i(u)| <= M (1 + |u|)`.
    GradientGrowth,
    /// `|f_i(u)| <= M (1 + |u|^2)` and `df_i/du_j >= -M (1 + |u|)`.
    AltGrowth,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::QuasiPositivity => "quasi_positivity",
            Condition::MassDissipation => "mass_dissipation",
            Condition::MassConservation => "mass_conservation",
            Condition::EntropyDissipation => "entropy_dissipation",
            Condition::GradientGrowth => "gradient_growth",
            Condition::AltGrowth => "alt_growth_9prime",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Condition::QuasiPositivity => 0x51,
            Condition::MassDissipation => 0x52,
            Condition::MassConservation => 0x53,
            Condition::EntropyDissipation => 0x54,
            Condition::GradientGrowth => 0x55,
            Condition::AltGrowth => 0x56,
        }
    }

    fn domain(self) -> Domain {
        match self {
            Condition::QuasiPositivity => Domain::Pinned,
            Condition::MassDissipation | Condition::EntropyDissipation => Domain::Positive,
            _ => Domain::Nonneg,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Domain {
    Nonneg,
    Positive,
    /// `u >= 0` with one coordinate pinned to zero.
    Pinned,
    /// `u_i >= 1` for all `i`.
    AtLeastOne,
}

/// Sampling controls shared by all checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOptions {
    /// Total number of sample evaluations per condition.
    pub budget: usize,
    /// Upper corner of the sampled box `[0, u_max]^m`.
    pub u_max: f64,
    pub seed: u64,
    pub lattice_per_axis: usize,
    pub hill_steps: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 100_000,
            u_max: 100.0,
            seed: 0,
            lattice_per_axis: 8,
            hill_steps: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub condition: Condition,
    pub holds: bool,
    /// Margin at the witness point; strictly negative when violated.
    pub worst_margin: f64,
    /// The worst sampled state.
    pub witness: Vec<f64>,
    pub samples: usize,
    /// Fitted minimal `M` (gradient growth only).
    pub fitted_constant: Option<f64>,
    /// `(|u|, max_i |grad f_i| / (1 + |u|))` along the worst ray (gradient growth only).
    pub growth_sequence: Vec<(f64, f64)>,
}

/// A constant fitted by sampling, with no pass/fail threshold attached.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FittedConstant {
    pub value: f64,
    pub witness: Vec<f64>,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub network: String,
    pub species_count: usize,
    pub quasi_positivity: CheckResult,
    pub mass_dissipation: CheckResult,
    pub mass_conservation: CheckResult,
    pub entropy_dissipation: CheckResult,
    pub gradient_growth: CheckResult,
    pub alt_growth_9prime: CheckResult,
    /// Smallest `C` with `sum f_i (1 + log u_i) <= C sum u_i log(1 + u_i)` on `u >= 1`.
    pub entropy_alt_constant: FittedConstant,
}

impl StructureReport {
    /// Quasi-positivity, mass dissipation, entropy dissipation and gradient
    /// growth all hold, and the network is a system (`m >= 2`).
    pub fn theorem_conditions_hold(&self) -> bool {
        self.species_count >= 2
            && self.quasi_positivity.holds
            && self.mass_dissipation.holds
            && self.entropy_dissipation.holds
            && self.gradient_growth.holds
    }

    pub fn results(&self) -> [&CheckResult; 6] {
        [
            &self.quasi_positivity,
            &self.mass_dissipation,
            &self.mass_conservation,
            &self.entropy_dissipation,
            &self.gradient_growth,
            &self.alt_growth_9prime,
        ]
    }
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Signed margin of `cond` at `u`. Nonnegative means the condition holds at `u`.
///
/// For quasi-positivity only coordinates that are exactly zero are
/// constrained; a state with no zero coordinate has margin `+inf`.
pub fn pointwise_margin(net: &ReactionNetwork, cond: Condition, u: &[f64]) -> f64 {
    let m = net.species_count();
    let mut f = vec![0.0; m];
    net.eval_into(u, &mut f);
    match cond {
        Condition::QuasiPositivity => u
            .iter()
            .zip(&f)
            .filter(|(&x, _)| x == 0.0)
            .map(|(_, &fi)| fi)
            .fold(f64::INFINITY, f64::min),
        Condition::MassDissipation => -f.iter().sum::<f64>(),
        Condition::MassConservation => -f.iter().sum::<f64>().abs(),
        Condition::EntropyDissipation => -f.iter().zip(u).map(|(fi, x)| fi * x.ln()).sum::<f64>(),
        Condition::GradientGrowth => {
            net.growth_constant() - gradient_ratio(net, u)
        }
        Condition::AltGrowth => {
            let big_m = net.growth_constant();
            let n = euclid(u);
            let jac = net.jacobian_unchecked(u);
            let mut margin = f64::INFINITY;
            for (fi, row) in f.iter().zip(&jac) {
                margin = margin.min(big_m * (1.0 + n * n) - fi.abs());
                for &dij in row {
                    margin = margin.min(dij + big_m * (1.0 + n));
                }
            }
            margin
        }
    }
}

fn gradient_ratio(net: &ReactionNetwork, u: &[f64]) -> f64 {
    let jac = net.jacobian_unchecked(u);
    let g = jac.iter().map(|row| euclid(row)).fold(0.0, f64::max);
    g / (1.0 + euclid(u))
}

fn tolerance(net: &ReactionNetwork, cond: Condition, u: &[f64]) -> f64 {
    match cond {
        Condition::GradientGrowth => TOL * net.growth_constant(),
        _ => {
            let mut f = vec![0.0; net.species_count()];
            net.eval_into(u, &mut f);
            TOL * (1.0 + sup_abs(&f))
        }
    }
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|j| (a + (b - a) * j as f64 / (n - 1) as f64).exp())
        .collect()
}

fn axis_values(domain: Domain, u_max: f64, p: usize) -> Vec<f64> {
    match domain {
        Domain::Nonneg | Domain::Pinned => {
            let mut v = vec![0.0];
            v.extend(logspace(u_max * 1e-4, u_max, p.saturating_sub(1).max(1)));
            v
        }
        Domain::Positive => logspace(u_max * 1e-5, u_max, p),
        Domain::AtLeastOne => logspace(1.0, u_max.max(1.0), p),
    }
}

/// Cartesian product of `values` over `free` axes.
fn lattice(values: &[f64], free: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(free)];
    for _ in 0..free {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

struct Sampler<'a> {
    net: &'a ReactionNetwork,
    cond: Condition,
    domain: Domain,
    opts: &'a SearchOptions,
    rng: ChaCha8Rng,
    samples: usize,
    best: Option<(f64, Vec<f64>)>,
}

impl<'a> Sampler<'a> {
    fn new(net: &'a ReactionNetwork, cond: Condition, domain: Domain, opts: &'a SearchOptions) -> Self {
        Self {
            net,
            cond,
            domain,
            opts,
            rng: ChaCha8Rng::seed_from_u64(opts.seed ^ (cond.salt() << 32)),
            samples: 0,
            best: None,
        }
    }

    /// Score to minimise; negative means violated.
    fn score(&self, u: &[f64]) -> f64 {
        match self.domain {
            Domain::AtLeastOne => -alt_entropy_ratio(self.net, u),
            _ => pointwise_margin(self.net, self.cond, u) + tolerance(self.net, self.cond, u),
        }
    }

    fn visit(&mut self, u: Vec<f64>) {
        self.samples += 1;
        let s = self.score(&u);
        if s.is_nan() {
            return;
        }
        match &self.best {
            Some((b, _)) if *b <= s => {}
            _ => self.best = Some((s, u)),
        }
    }

    fn lower(&self) -> f64 {
        match self.domain {
            Domain::AtLeastOne => 1.0,
            Domain::Positive => f64::MIN_POSITIVE,
            _ => 0.0,
        }
    }

    fn random_point(&mut self) -> Vec<f64> {
        let m = self.net.species_count();
        let lo = self.lower();
        let hi = self.opts.u_max.max(lo);
        let mut u: Vec<f64> = (0..m)
            .map(|_| lo + (hi - lo) * (1.0 - self.rng.gen::<f64>()))
            .collect();
        if self.domain == Domain::Pinned {
            let i = self.rng.gen_range(0..m);
            u[i] = 0.0;
        }
        u
    }

    fn run(mut self) -> (f64, Vec<f64>, usize) {
        let m = self.net.species_count();
        let budget = self.opts.budget.max(1);
        let free = if self.domain == Domain::Pinned { m - 1 } else { m };
        let pins = if self.domain == Domain::Pinned { m } else { 1 };

        let mut p = self.opts.lattice_per_axis.max(2);
        while p > 2 && (p as f64).powi(free as i32) * pins as f64 > budget as f64 / 2.0 {
            p -= 1;
        }
        let values = axis_values(self.domain, self.opts.u_max, p);
        let grid = lattice(&values, free);
        for pin in 0..pins {
            for pt in &grid {
                let u = if self.domain == Domain::Pinned {
                    let mut u = pt.clone();
                    u.insert(pin, 0.0);
                    u
                } else {
                    pt.clone()
                };
                self.visit(u);
            }
        }

        let used = self.samples + self.opts.hill_steps;
        for _ in used..budget {
            let u = self.random_point();
            self.visit(u);
        }

        self.hill_climb();
        let (score, u) = self.best.clone().expect("at least one sample");
        (score, u, self.samples)
    }

    fn hill_climb(&mut self) {
        let Some((_, start)) = self.best.clone() else {
            return;
        };
        let lo = self.lower();
        let hi = self.opts.u_max.max(lo);
        let mut current = start;
        let pinned: Vec<bool> = current
            .iter()
            .map(|&x| self.domain == Domain::Pinned && x == 0.0)
            .collect();
        let mut current_score = self.score(&current);
        for _ in 0..self.opts.hill_steps {
            let mut cand = current.clone();
            for (x, &pin) in cand.iter_mut().zip(&pinned) {
                if pin {
                    continue;
                }
                let r: f64 = self.rng.gen::<f64>() * 2.0 - 1.0;
                *x = if *x > 0.0 {
                    *x * (0.25 * r).exp()
                } else if r > 0.0 {
                    hi * 1e-3 * r
                } else {
                    *x
                };
                *x = x.clamp(lo, hi);
            }
            self.samples += 1;
            let s = self.score(&cand);
            if s < current_score {
                current_score = s;
                current = cand.clone();
                if self.best.as_ref().map_or(true, |(b, _)| s < *b) {
                    self.best = Some((s, cand));
                }
            }
        }
    }
}

fn finish(
    net: &ReactionNetwork,
    cond: Condition,
    score: f64,
    witness: Vec<f64>,
    samples: usize,
) -> CheckResult {
    CheckResult {
        condition: cond,
        holds: score >= 0.0,
        worst_margin: pointwise_margin(net, cond, &witness),
        witness,
        samples,
        fitted_constant: None,
        growth_sequence: Vec::new(),
    }
}

fn simple_check(net: &ReactionNetwork, cond: Condition, opts: &SearchOptions) -> CheckResult {
    let (score, witness, samples) = Sampler::new(net, cond, cond.domain(), opts).run();
    finish(net, cond, score, witness, samples)
}

/// Quasi-positivity: `f_i(u) >= 0` wherever `u >= 0` and `u_i = 0`.
pub fn check_quasi_positivity(net: &ReactionNetwork, opts: &SearchOptions) -> CheckResult {
    simple_check(net, Condition::QuasiPositivity, opts)
}

/// Mass dissipation: `sum_i f_i(u) <= 0` for `u > 0`.
pub fn check_mass_dissipation(net: &ReactionNetwork, opts: &SearchOptions) -> CheckResult {
    simple_check(net, Condition::MassDissipation, opts)
}

/// Mass conservation: `sum_i f_i(u) = 0` for `u >= 0`.
pub fn check_mass_conservation(net: &ReactionNetwork, opts: &SearchOptions) -> CheckResult {
    simple_check(net, Condition::MassConservation, opts)
}

/// Entropy dissipation: `sum_i f_i(u) log u_i <= 0` for `u > 0`.
pub fn check_entropy_dissipation(net: &ReactionNetwork, opts: &SearchOptions) -> CheckResult {
    simple_check(net, Condition::EntropyDissipation, opts)
}

/// One-sided growth pair: value bound `M (1 + |u|^2)` and Jacobian lower bound `-M (1 + |u|)`.
pub fn check_9prime(net: &ReactionNetwork, opts: &SearchOptions) -> CheckResult {
    simple_check(net, Condition::AltGrowth, opts)
}

/// Gradient growth `|grad f_i(u)| <= M (1 + |u|)`, Euclidean norms.
///
/// Besides the box search, the ratio is followed along rays out to
/// `u_max * 10^10` so that bounds approached only at infinity are resolved.
/// The fitted minimal `M` is the largest ratio seen.
pub fn check_gradient_growth(net: &ReactionNetwork, opts: &SearchOptions) -> CheckResult {
    let cond = Condition::GradientGrowth;
    let (_, box_worst, mut samples) = Sampler::new(net, cond, cond.domain(), opts).run();
    let m = net.species_count();

    let mut dirs = Vec::with_capacity(m + 2);
    let n = euclid(&box_worst);
    if n > 0.0 {
        dirs.push(box_worst.iter().map(|x| x / n).collect::<Vec<_>>());
    }
    dirs.push(vec![1.0 / (m as f64).sqrt(); m]);
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        dirs.push(e);
    }

    let mut fitted = gradient_ratio(net, &box_worst);
    let mut witness = box_worst;
    let mut sequence = Vec::new();
    let mut seq_tail = f64::NEG_INFINITY;
    for dir in &dirs {
        let seq: Vec<(f64, f64)> = (0..=RADIAL_DECADES)
            .map(|j| {
                let r = opts.u_max * 10f64.powi(j);
                let u: Vec<f64> = dir.iter().map(|x| x * r).collect();
                (r, gradient_ratio(net, &u))
            })
            .collect();
        samples += seq.len();
        for &(r, ratio) in &seq {
            if ratio > fitted {
                fitted = ratio;
                witness = dir.iter().map(|x| x * r).collect();
            }
        }
        let tail = seq.last().map_or(f64::NEG_INFINITY, |s| s.1);
        if tail > seq_tail {
            seq_tail = tail;
            sequence = seq;
        }
    }

    let big_m = net.growth_constant();
    CheckResult {
        condition: cond,
        holds: fitted <= big_m * (1.0 + TOL),
        worst_margin: pointwise_margin(net, cond, &witness),
        witness,
        samples,
        fitted_constant: Some(fitted),
        growth_sequence: sequence,
    }
}

fn alt_entropy_ratio(net: &ReactionNetwork, u: &[f64]) -> f64 {
    let mut f = vec![0.0; net.species_count()];
    net.eval_into(u, &mut f);
    let num: f64 = f.iter().zip(u).map(|(fi, x)| fi * (1.0 + x.ln())).sum();
    let den: f64 = u.iter().map(|x| x * x.ln_1p()).sum();
    num / den
}

/// Fits the smallest `C` with `sum_i f_i(u)(1 + log u_i) <= C sum_i u_i log(1 + u_i)`
/// over sampled `u` with all `u_i >= 1`.
pub fn fit_entropy_alt_constant(net: &ReactionNetwork, opts: &SearchOptions) -> FittedConstant {
    let (score, witness, samples) =
        Sampler::new(net, Condition::EntropyDissipation, Domain::AtLeastOne, opts).run();
    FittedConstant {
        value: -score,
        witness,
        samples,
    }
}

/// Runs every check.
///
/// Conservation and dissipation are searched on different domains; a
/// dissipation counterexample is also a conservation counterexample, and the
/// report is reconciled so that `conservation holds => dissipation holds`.
pub fn structure_report(net: &ReactionNetwork, opts: &SearchOptions) -> StructureReport {
    let mass_dissipation = check_mass_dissipation(net, opts);
    let mut mass_conservation = check_mass_conservation(net, opts);
    if mass_conservation.holds && !mass_dissipation.holds {
        let w = mass_dissipation.witness.clone();
        mass_conservation.holds = false;
        mass_conservation.worst_margin = pointwise_margin(net, Condition::MassConservation, &w);
        mass_conservation.witness = w;
    }
    StructureReport {
        network: net.name().to_string(),
        species_count: net.species_count(),
        quasi_positivity: check_quasi_positivity(net, opts),
        mass_dissipation,
        mass_conservation,
        entropy_dissipation: check_entropy_dissipation(net, opts),
        gradient_growth: check_gradient_growth(net, opts),
        alt_growth_9prime: check_9prime(net, opts),
        entropy_alt_constant: fit_entropy_alt_constant(net, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{four_species, linear_decay, zero_field, Monomial};
    use approx::assert_abs_diff_eq;

    fn poly(rates: Vec<Vec<(f64, Vec<u32>)>>, m_const: f64) -> ReactionNetwork {
        let m = rates.len();
        let rates = rates
            .into_iter()
            .map(|r| r.into_iter().map(|(c, e)| Monomial::new(c, e)).collect())
            .collect();
        ReactionNetwork::new(
            "test",
            (1..=m).map(|i| format!("X{i}")).collect(),
            rates,
            m_const,
        )
        .unwrap()
    }

    fn quick() -> SearchOptions {
        SearchOptions {
            budget: 5_000,
            ..SearchOptions::default()
        }
    }

    fn assert_sound(net: &ReactionNetwork, r: &CheckResult) {
        if !r.holds {
            assert!(r.worst_margin < 0.0, "{r:?}");
            assert!(r.witness.iter().all(|&x| x >= 0.0));
            let again = pointwise_margin(net, r.condition, &r.witness);
            assert!((again - r.worst_margin).abs() <= 1e-12);
        }
    }

    #[test]
    fn quasi_positivity_examples() {
        assert!(check_quasi_positivity(&four_species(), &quick()).holds);

        let constant = poly(vec![vec![(-1.0, vec![0, 0])], vec![]], 1.0);
        let r = check_quasi_positivity(&constant, &quick());
        assert!(!r.holds);
        assert_eq!(r.witness[0], 0.0);
        assert_abs_diff_eq!(r.worst_margin, -1.0);
        assert_sound(&constant, &r);

        let swap = poly(vec![vec![(1.0, vec![0, 1])], vec![(1.0, vec![1, 0])]], 1.0);
        assert!(check_quasi_positivity(&swap, &quick()).holds);
    }

    #[test]
    fn mass_dissipation_examples() {
        assert!(check_mass_dissipation(&four_species(), &quick()).holds);

        let source = poly(
            vec![vec![(1.0, vec![1, 1])], vec![(1.0, vec![1, 1])]],
            1.0,
        );
        let r = check_mass_dissipation(&source, &quick());
        assert!(!r.holds);
        assert_sound(&source, &r);
        assert_abs_diff_eq!(
            pointwise_margin(&source, Condition::MassDissipation, &[1.0, 1.0]),
            -2.0
        );

        assert!(check_mass_dissipation(&linear_decay(2), &quick()).holds);
    }

    #[test]
    fn mass_conservation_examples() {
        assert!(check_mass_conservation(&four_species(), &quick()).holds);
        let decay = linear_decay(2);
        let r = check_mass_conservation(&decay, &quick());
        assert!(!r.holds);
        assert_sound(&decay, &r);
        assert_abs_diff_eq!(
            pointwise_margin(&decay, Condition::MassConservation, &[1.0, 1.0]),
            -2.0
        );
        let exchange = poly(
            vec![
                vec![(1.0, vec![0, 1]), (-1.0, vec![1, 0])],
                vec![(1.0, vec![1, 0]), (-1.0, vec![0, 1])],
            ],
            1.0,
        );
        assert!(check_mass_conservation(&exchange, &quick()).holds);
    }

    #[test]
    fn entropy_dissipation_examples() {
        let net = four_species();
        let v = -pointwise_margin(&net, Condition::EntropyDissipation, &[2.0, 1.0, 1.0, 1.0]);
        assert_abs_diff_eq!(v, -std::f64::consts::LN_2, epsilon = 1e-15);
        assert!(check_entropy_dissipation(&net, &quick()).holds);

        let growth = poly(vec![vec![(1.0, vec![1, 0])], vec![]], 1.0);
        let e = std::f64::consts::E;
        assert_abs_diff_eq!(
            pointwise_margin(&growth, Condition::EntropyDissipation, &[e, 1.0]),
            -e,
            epsilon = 1e-15
        );
        let r = check_entropy_dissipation(&growth, &quick());
        assert!(!r.holds);
        assert_sound(&growth, &r);
    }

    #[test]
    fn gradient_growth_examples() {
        let r = check_gradient_growth(&four_species(), &quick());
        assert!(r.holds);
        let fitted = r.fitted_constant.unwrap();
        assert!((fitted - 1.0).abs() < 1e-9, "fitted {fitted}");

        let cubic = poly(vec![vec![(1.0, vec![3, 0])], vec![]], 1.0);
        let r = check_gradient_growth(&cubic, &quick());
        assert!(!r.holds);
        assert_sound(&cubic, &r);
        let seq = &r.growth_sequence;
        assert!(seq.windows(2).all(|w| w[1].1 > w[0].1), "{seq:?}");

        let r = check_gradient_growth(&zero_field(3), &quick());
        assert!(r.holds);
        assert_eq!(r.fitted_constant, Some(0.0));
    }

    #[test]
    fn nine_prime_examples() {
        assert!(check_9prime(&four_species(), &quick()).holds);
        let bad = poly(vec![vec![(-1.0, vec![2, 1])], vec![]], 1.0);
        let r = check_9prime(&bad, &quick());
        assert!(!r.holds);
        assert_sound(&bad, &r);
        assert!(check_9prime(&linear_decay(2), &quick()).holds);
    }

    #[test]
    fn report_is_deterministic_and_consistent() {
        let net = crate::network::four_species_lossy();
        let a = structure_report(&net, &quick());
        let b = structure_report(&net, &quick());
        assert_eq!(a, b);
        assert!(a.mass_dissipation.holds);
        assert!(!a.mass_conservation.holds);
        assert!(a.quasi_positivity.holds);
        for r in a.results() {
            assert_sound(&net, r);
        }
    }

    #[test]
    fn alt_entropy_constant_is_fitted() {
        let c = fit_entropy_alt_constant(&four_species(), &quick());
        assert!(c.value.is_finite());
        assert!(c.witness.iter().all(|&x| x >= 1.0));
    }
}
