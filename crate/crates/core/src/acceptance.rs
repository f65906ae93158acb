//! Executable verification suite.
//!
//! Fifteen numbered criteria pin down the behavior the simulator is expected
//! to reproduce: dip and peak locations of the figure presets, orderings
//! between curves, closed-form oracles, solver cross-validation, and the
//! structural invariants of the master-equation machinery. Each criterion
//! produces a [`CriterionReport`] with a pass flag and a measured-value
//! summary, so a red criterion documents exactly what was observed.
//!
//! Reports are cached per process: the integration test target and the CLI
//! `verify` subcommand can both ask for overlapping subsets without paying
//! for the underlying sweeps twice.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytics::{cpb_eigenfrequencies, cpb_eigenfrequencies_numerical, upb_optimal_e_general};
use crate::fock::HilbertSpace;
use crate::liouvillian::{
    build_liouvillian, evolve, observables, steady_state, DensityMatrix, SolverOptions,
};
use crate::model::{build_collapse_channels, build_hamiltonian, SystemParams};
use crate::output::csv_string;
use crate::presets::figure_preset;
use crate::sweep::{
    evaluate_point, find_maximum, find_minimum, run_sweep, AxisSpec, Metric, Spacing, SweepConfig,
    SweepError, SweepParam, SweepResult,
};

/// Outcome of one numbered criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    /// 1-based criterion number, stable across releases.
    pub number: usize,
    /// Short kebab-case identifier for log lines.
    pub name: &'static str,
    pub pass: bool,
    /// Measured values and the thresholds they were held against.
    pub detail: String,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:2} {:28} {}  {}",
            self.number,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

/// Number of criteria in the suite.
pub const CRITERION_COUNT: usize = 15;

const NAMES: [&str; CRITERION_COUNT] = [
    "cpb-dip-location",
    "cpb-depth-monotonic",
    "brightness-alignment",
    "drive-washout",
    "upb-dip-in-g",
    "upb-optimum-in-e",
    "upb-optimum-in-f",
    "composite-dominance",
    "thermal-degradation",
    "two-photon-window",
    "eigenfrequency-closed-form",
    "linear-cavity-oracle",
    "thermal-oracle",
    "solver-cross-validation",
    "structural-invariants",
];

type Body = Result<(bool, String), SweepError>;

/// Runs criterion `number` (1-based), or returns `None` for numbers outside
/// `1..=CRITERION_COUNT`. Results are memoized for the process lifetime.
pub fn criterion(number: usize) -> Option<Arc<CriterionReport>> {
    if number == 0 || number > CRITERION_COUNT {
        return None;
    }
    static REPORTS: OnceLock<Mutex<HashMap<usize, Arc<CriterionReport>>>> = OnceLock::new();
    let cache = REPORTS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("criterion cache poisoned");
    Some(Arc::clone(cache.entry(number).or_insert_with(|| {
        let name = NAMES[number - 1];
        let body = match number {
            1 => cpb_dip_location(),
            2 => cpb_depth_monotonic(),
            3 => brightness_alignment(),
            4 => drive_washout(),
            5 => upb_dip_in_g(),
            6 => upb_optimum_in_e(),
            7 => upb_optimum_in_f(),
            8 => composite_dominance(),
            9 => thermal_degradation(),
            10 => two_photon_window(),
            11 => eigenfrequency_closed_form(),
            12 => linear_cavity_oracle(),
            13 => thermal_oracle(),
            14 => solver_cross_validation(),
            15 => structural_invariants(),
            _ => unreachable!("criterion numbers are checked above"),
        };
        let (pass, detail) = match body {
            Ok(outcome) => outcome,
            Err(err) => (false, format!("failed to evaluate: {err}")),
        };
        Arc::new(CriterionReport { number, name, pass, detail })
    })))
}

/// Runs the whole suite in order.
pub fn run_all() -> Vec<Arc<CriterionReport>> {
    (1..=CRITERION_COUNT).map(|n| criterion(n).expect("number in range")).collect()
}

/// Runs the requested criteria in the order given. Unknown numbers are
/// rejected before anything is computed.
pub fn run_subset(numbers: &[usize]) -> Result<Vec<Arc<CriterionReport>>, SweepError> {
    if let Some(&bad) = numbers.iter().find(|&&n| n == 0 || n > CRITERION_COUNT) {
        return Err(SweepError::InvalidConfig(format!(
            "criterion number {bad} is outside 1..={CRITERION_COUNT}"
        )));
    }
    Ok(numbers.iter().map(|&n| criterion(n).expect("validated above")).collect())
}

/// Finished sweeps of one preset, keyed by curve id.
type PresetRuns = Arc<Vec<(String, SweepResult)>>;

/// Runs every curve of a figure preset once per process and shares the
/// results between criteria (fig3 feeds criteria 1, 2, and 3).
fn preset_run(name: &str) -> Result<PresetRuns, SweepError> {
    static RUNS: OnceLock<Mutex<HashMap<String, PresetRuns>>> = OnceLock::new();
    let cache = RUNS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("preset cache poisoned");
    if let Some(found) = cache.get(name) {
        return Ok(Arc::clone(found));
    }
    let preset = figure_preset(name)?;
    let mut runs = Vec::with_capacity(preset.curves.len());
    for curve in &preset.curves {
        runs.push((curve.id.clone(), run_sweep(&curve.config)?));
    }
    let runs = Arc::new(runs);
    cache.insert(name.to_string(), Arc::clone(&runs));
    Ok(runs)
}

/// One grid step of a linear axis.
fn grid_step(axis: &AxisSpec) -> f64 {
    (axis.stop - axis.start).abs() / (axis.count - 1) as f64
}

/// Criterion 1: on every fig3 curve the g2 minimum sits at delta_a = 0 to
/// within one grid step.
fn cpb_dip_location() -> Body {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["fig3a", "fig3b", "fig3c"] {
        let runs = preset_run(name)?;
        let (_, result) = &runs[0];
        let step = grid_step(&result.config.axis1);
        let (_, dip) = find_minimum(result, Metric::G2)?;
        let ok = dip.axis1.abs() <= step + 1e-12;
        pass &= ok;
        parts.push(format!("{name}: dip at delta_a = {:+.3} (step {step:.3})", dip.axis1));
    }
    Ok((pass, parts.join("; ")))
}

/// Criterion 2: the dip deepens as the mixing strength grows, so the minimum
/// g2 values of fig3a, fig3b, fig3c are strictly decreasing.
fn cpb_depth_monotonic() -> Body {
    let mut dips = Vec::new();
    for name in ["fig3a", "fig3b", "fig3c"] {
        let runs = preset_run(name)?;
        let (_, dip) = find_minimum(&runs[0].1, Metric::G2)?;
        dips.push(dip.g2.expect("minimum carries the metric"));
    }
    let pass = dips.windows(2).all(|w| w[1] < w[0]);
    Ok((
        pass,
        format!("min g2 over g = 2, 4, 6: {:.3e}, {:.3e}, {:.3e}", dips[0], dips[1], dips[2]),
    ))
}

/// Criterion 3: on every fig3 curve the brightness maximum (mean photon
/// number) lands on the g2 minimum to within one grid index.
fn brightness_alignment() -> Body {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["fig3a", "fig3b", "fig3c"] {
        let runs = preset_run(name)?;
        let (_, result) = &runs[0];
        let (dip_idx, _) = find_minimum(result, Metric::G2)?;
        let (peak_idx, _) = find_maximum(result, Metric::MeanNA)?;
        let gap = dip_idx.abs_diff(peak_idx);
        pass &= gap <= 1;
        parts.push(format!("{name}: |argmax n_a - argmin g2| = {gap} grid steps"));
    }
    Ok((pass, parts.join("; ")))
}

/// Criterion 4: along the fig4a drive sweep, g2 is expected to rise
/// monotonically toward the Poissonian value, ending inside [0.9, 1.1] at
/// f_a = 2.
///
/// The interference path that produces the unconventional dips (criteria 5
/// through 7) also carves a deep dip into this curve near f_a = 0.2, and the
/// washed-out tail saturates near 0.68 rather than 1. Both legs are asserted
/// as stated and the criterion reports the measured curve honestly.
fn drive_washout() -> Body {
    let runs = preset_run("fig4a")?;
    let (_, result) = &runs[0];
    let series: Vec<(f64, f64)> = result
        .points
        .iter()
        .filter_map(|p| p.g2.map(|g2| (p.axis1, g2)))
        .collect();
    if series.len() < 2 {
        return Ok((false, "fewer than two converged points".into()));
    }
    let mut worst_drop = 0.0_f64;
    let mut worst_at = f64::NAN;
    for w in series.windows(2) {
        let drop = w[0].1 - w[1].1;
        if drop > worst_drop {
            worst_drop = drop;
            worst_at = w[1].0;
        }
    }
    let monotone = worst_drop <= 1e-12;
    let last = series.last().expect("nonempty");
    let in_band = (0.9..=1.1).contains(&last.1);
    let detail = format!(
        "nondecreasing: {monotone} (largest drop {worst_drop:.3e} into f_a = {worst_at:.3}); \
         g2(f_a = {:.2}) = {:.3} vs band [0.9, 1.1]",
        last.0, last.1
    );
    Ok((monotone && in_band, detail))
}

/// Criterion 5: the fig4b sweep over negative mixing strengths dips at
/// g = -0.48 +/- 0.04.
fn upb_dip_in_g() -> Body {
    let runs = preset_run("fig4b")?;
    let (_, dip) = find_minimum(&runs[0].1, Metric::G2)?;
    let pass = (dip.axis1 - (-0.48)).abs() <= 0.04;
    Ok((
        pass,
        format!(
            "dip at g = {:.3} (target -0.48 +/- 0.04), g2 = {:.3e}",
            dip.axis1,
            dip.g2.expect("minimum carries the metric")
        ),
    ))
}

/// Criterion 6: the fig5b sweep over the parametric amplitude dips at
/// e = -0.0066 to within one grid step, and the dip location matches the
/// closed-form interference optimum to 3%.
fn upb_optimum_in_e() -> Body {
    let runs = preset_run("fig5b")?;
    let (_, result) = &runs[0];
    let step = grid_step(&result.config.axis1);
    let (_, dip) = find_minimum(result, Metric::G2)?;
    let near_quoted = (dip.axis1 - (-0.0066)).abs() <= step + 1e-12;
    let optimum = upb_optimal_e_general(&result.config.base)
        .map_err(|err| SweepError::InvalidConfig(err.to_string()))?;
    let near_formula = (dip.axis1 - optimum.re).abs() <= 0.03 * optimum.norm();
    Ok((
        near_quoted && near_formula,
        format!(
            "dip at e = {:.5} (quoted -0.0066 +/- {step:.5}); closed form {:.5}{:+.5}i, \
             deviation {:.2}%",
            dip.axis1,
            optimum.re,
            optimum.im,
            100.0 * (dip.axis1 - optimum.re).abs() / optimum.norm()
        ),
    ))
}

/// Criterion 7: the fig5a sweep over the coherent drive dips at
/// |f_a| = 0.15 +/- 0.01, consistent with sqrt(|e| g / 2) = 0.1414.
fn upb_optimum_in_f() -> Body {
    let runs = preset_run("fig5a")?;
    let (_, result) = &runs[0];
    let (_, dip) = find_minimum(result, Metric::G2)?;
    let magnitude = dip.axis1.abs();
    let pass = (magnitude - 0.15).abs() <= 0.01;
    let formula = (result.config.base.e.norm() * result.config.base.g.abs() / 2.0).sqrt();
    Ok((
        pass,
        format!(
            "dip at |f_a| = {magnitude:.4} (target 0.15 +/- 0.01, closed form {formula:.4}), \
             g2 = {:.3e}",
            dip.g2.expect("minimum carries the metric")
        ),
    ))
}

/// Criterion 8: at the fig7b operating point (delta_a = 0), the
/// interference-tuned curve (e = -0.0066) beats the detuned one (e = 0.01).
fn composite_dominance() -> Body {
    let preset = figure_preset("fig7b")?;
    let mut at_zero = HashMap::new();
    for curve in &preset.curves {
        let mut params = curve.config.base;
        params.delta_a = 0.0;
        let (obs, _) = evaluate_point(&params, curve.config.truncation, &curve.config.solver)?;
        at_zero.insert(curve.id.clone(), obs.g2);
    }
    let tuned = at_zero["e_-0.0066"].ok_or(SweepError::NoUsablePoints)?;
    let detuned = at_zero["e_0.01"].ok_or(SweepError::NoUsablePoints)?;
    Ok((
        tuned < detuned,
        format!("g2 at delta_a = 0: tuned {tuned:.3e} vs detuned {detuned:.3e}"),
    ))
}

/// Criterion 9: across the fig8b curves (bath occupation 0, 0.01, 0.05) the
/// dip value of g2 rises strictly, and the mean photon number at the dip is
/// expected to fall.
///
/// The g2 leg holds. The brightness leg does not: thermal channels inject
/// photons, so the solved mean occupation rises with n_th. The expected-fall
/// assertion is kept as stated and reports the measured trend.
fn thermal_degradation() -> Body {
    let runs = preset_run("fig8b")?;
    let mut dips = Vec::new();
    for (id, result) in runs.iter() {
        let (_, dip) = find_minimum(result, Metric::G2)?;
        dips.push((
            id.clone(),
            dip.g2.expect("minimum carries the metric"),
            dip.mean_n_a.ok_or(SweepError::NoUsablePoints)?,
        ));
    }
    let g2_rises = dips.windows(2).all(|w| w[1].1 > w[0].1);
    let mean_falls = dips.windows(2).all(|w| w[1].2 < w[0].2);
    let summary: Vec<String> = dips
        .iter()
        .map(|(id, g2, mean)| format!("{id}: min g2 = {g2:.3e}, n_a = {mean:.3e}"))
        .collect();
    Ok((
        g2_rises && mean_falls,
        format!(
            "{}; g2 strictly rising: {g2_rises}; n_a falling as expected: {mean_falls}",
            summary.join("; ")
        ),
    ))
}

/// Criterion 10: the fig9a sweep (pair drive only) is expected to contain a
/// contiguous delta_a region with g2 >= 1 and g3 < 1.
///
/// With f_a = 0 the dynamics conserve photon-number parity in mode a up to
/// decay, which pins g3 orders of magnitude above 1 at these pumping levels;
/// no qualifying point exists. The scan is reported as measured.
fn two_photon_window() -> Body {
    let runs = preset_run("fig9a")?;
    let (_, result) = &runs[0];
    let mut qualifying = 0usize;
    let mut first = f64::NAN;
    let mut min_g3 = f64::INFINITY;
    let mut min_g3_at = f64::NAN;
    for point in &result.points {
        let (Some(g2), Some(g3)) = (point.g2, point.g3) else { continue };
        if g3 < min_g3 {
            min_g3 = g3;
            min_g3_at = point.axis1;
        }
        if g2 >= 1.0 && g3 < 1.0 {
            if qualifying == 0 {
                first = point.axis1;
            }
            qualifying += 1;
        }
    }
    let detail = if qualifying > 0 {
        format!("{qualifying} qualifying points, first at delta_a = {first:+.3}")
    } else {
        format!(
            "no point with g2 >= 1 and g3 < 1; smallest g3 = {min_g3:.3e} at \
             delta_a = {min_g3_at:+.3}"
        )
    };
    Ok((qualifying > 0, detail))
}

/// Criterion 11: the closed-form two-excitation eigenfrequencies agree with
/// the numerical 2x2 eigenvalues to 1e-12 over 100 random draws.
fn eigenfrequency_closed_form() -> Body {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let delta_a = rng.random_range(-5.0..5.0);
        let g = rng.random_range(-6.0..6.0);
        let closed = cpb_eigenfrequencies(delta_a, g);
        let numerical = cpb_eigenfrequencies_numerical(delta_a, g);
        for (c, n) in closed.iter().zip(&numerical) {
            worst = worst.max((c - n).abs());
        }
    }
    Ok((worst <= 1e-12, format!("largest deviation {worst:.2e} over 100 draws (limit 1e-12)")))
}

/// Criterion 12: with the nonlinearity and pair drive off, the cavity is
/// linear and the steady state is coherent: g2 = 1 +/- 1e-5 and
/// mean n_a = f_a^2 / (delta_a^2 + kappa^2/4) +/- 1e-6 for ten random weak
/// drives.
fn linear_cavity_oracle() -> Body {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst_g2 = 0.0_f64;
    let mut worst_mean = 0.0_f64;
    for _ in 0..10 {
        let params = SystemParams {
            delta_a: rng.random_range(-1.0..1.0),
            f_a: rng.random_range(0.01..0.1),
            ..Default::default()
        };
        let (obs, _) = evaluate_point(&params, [12, 1, 1], &SolverOptions::default())?;
        let expected = params.f_a.powi(2) / (params.delta_a.powi(2) + 0.25);
        worst_g2 = worst_g2.max((obs.g2.ok_or(SweepError::NoUsablePoints)? - 1.0).abs());
        worst_mean = worst_mean.max((obs.mean_n_a - expected).abs());
    }
    Ok((
        worst_g2 <= 1e-5 && worst_mean <= 1e-6,
        format!(
            "over 10 draws: |g2 - 1| <= {worst_g2:.2e} (limit 1e-5), \
             |n_a - closed form| <= {worst_mean:.2e} (limit 1e-6)"
        ),
    ))
}

/// Criterion 13: an undriven mode a attached to a bath with n_th = 0.1
/// thermalizes: g2 = 2 +/- 1e-3 and mean n_a = 0.1 +/- 1e-4 at mode-a
/// truncation 10.
fn thermal_oracle() -> Body {
    let params = SystemParams { n_th_a: 0.1, ..Default::default() };
    let (obs, _) = evaluate_point(&params, [10, 1, 1], &SolverOptions::default())?;
    let g2 = obs.g2.ok_or(SweepError::NoUsablePoints)?;
    Ok((
        (g2 - 2.0).abs() <= 1e-3 && (obs.mean_n_a - 0.1).abs() <= 1e-4,
        format!("g2 = {g2:.6} (target 2 +/- 1e-3), n_a = {:.6} (target 0.1 +/- 1e-4)", obs.mean_n_a),
    ))
}

/// Criterion 14: integrating the master equation to t = 100/kappa reproduces
/// the direct steady-state observables within 1e-4 at the fig3 operating
/// points.
fn solver_cross_validation() -> Body {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["fig3a", "fig3b", "fig3c"] {
        let preset = figure_preset(name)?;
        let config = &preset.curves[0].config;
        let mut params = config.base;
        params.delta_a = 0.0;
        let space = HilbertSpace::new(config.truncation)?;
        let h = build_hamiltonian(&params, space);
        let channels = build_collapse_channels(&params, space)?;
        let lv = build_liouvillian(&h, &channels)?;
        let stationary = steady_state(&lv, &config.solver)?;
        let evolved = evolve(&DensityMatrix::vacuum(space), &lv, 100.0, lv.suggest_dt())?;
        let a = observables(&stationary, &lv)?;
        let b = observables(&evolved, &lv)?;
        let gaps = [
            (a.mean_n_a - b.mean_n_a).abs(),
            (a.g2.ok_or(SweepError::NoUsablePoints)? - b.g2.ok_or(SweepError::NoUsablePoints)?)
                .abs(),
            (a.g3.ok_or(SweepError::NoUsablePoints)? - b.g3.ok_or(SweepError::NoUsablePoints)?)
                .abs(),
        ];
        let worst = gaps.into_iter().fold(0.0_f64, f64::max);
        pass &= worst <= 1e-4;
        parts.push(format!("{name}: largest observable gap {worst:.2e}"));
    }
    Ok((pass, format!("{} (limit 1e-4)", parts.join("; "))))
}

fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    SystemParams {
        delta_a: rng.random_range(-3.0..3.0),
        delta_b: rng.random_range(-3.0..3.0),
        delta_c: rng.random_range(-3.0..3.0),
        g: rng.random_range(-4.0..4.0),
        f_a: rng.random_range(0.0..0.3),
        e: Complex64::new(rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05)),
        kappa_a: rng.random_range(0.5..2.0),
        kappa_b: rng.random_range(0.5..2.0),
        kappa_c: rng.random_range(0.5..2.0),
        n_th_a: rng.random_range(0.0..0.2),
        n_th_b: rng.random_range(0.0..0.2),
        n_th_c: rng.random_range(0.0..0.2),
    }
}

/// Criterion 15: four property suites of 50 random instances each.
///
/// 1. The generator annihilates the trace functional: tr(L X) vanishes for
///    arbitrary X.
/// 2. The generator preserves Hermiticity: L X is Hermitian for Hermitian X.
/// 3. Steady states are physical: unit trace and positive semidefinite.
/// 4. Sweeps are deterministic: one and three workers produce byte-identical
///    CSV.
fn structural_invariants() -> Body {
    const INSTANCES: usize = 50;
    let dims_pool: [[usize; 3]; 3] = [[3, 2, 2], [4, 2, 3], [2, 3, 2]];

    let mut rng = ChaCha8Rng::seed_from_u64(1501);
    let mut trace_ok = 0usize;
    let mut hermit_ok = 0usize;
    for i in 0..INSTANCES {
        let space = HilbertSpace::new(dims_pool[i % dims_pool.len()])?;
        let d = space.total_dim();
        let params = random_params(&mut rng);
        let h = build_hamiltonian(&params, space);
        let channels = build_collapse_channels(&params, space)?;
        let lv = build_liouvillian(&h, &channels)?;

        let raw: Vec<Complex64> = (0..d * d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut image = vec![Complex64::ZERO; d * d];
        lv.apply_vec(&raw, &mut image);
        let scale = image.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let trace: Complex64 = (0..d).map(|i| image[i * d + i]).sum();
        if trace.norm() <= 1e-10 * scale {
            trace_ok += 1;
        }

        // Hermitian input: X + X† in column-stacked layout.
        let hermitian: Vec<Complex64> = (0..d * d)
            .map(|idx| {
                let (col, row) = (idx / d, idx % d);
                raw[col * d + row] + raw[row * d + col].conj()
            })
            .collect();
        lv.apply_vec(&hermitian, &mut image);
        let scale = image.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let defect = (0..d)
            .flat_map(|row| (0..d).map(move |col| (row, col)))
            .map(|(row, col)| (image[col * d + row] - image[row * d + col].conj()).norm())
            .fold(0.0_f64, f64::max);
        if defect <= 1e-10 * scale {
            hermit_ok += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1502);
    let mut positive_ok = 0usize;
    for i in 0..INSTANCES {
        let params = random_params(&mut rng);
        let space = HilbertSpace::new(dims_pool[i % dims_pool.len()])?;
        let h = build_hamiltonian(&params, space);
        let channels = build_collapse_channels(&params, space)?;
        let lv = build_liouvillian(&h, &channels)?;
        let rho = steady_state(&lv, &SolverOptions::default())?;
        if rho.min_eigenvalue() >= -1e-8 && (rho.trace() - Complex64::ONE).norm() <= 1e-9 {
            positive_ok += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1503);
    let axis_pool = [SweepParam::DeltaA, SweepParam::DeltaB, SweepParam::G, SweepParam::FA];
    let mut deterministic_ok = 0usize;
    for i in 0..INSTANCES {
        let mut config = SweepConfig::new(
            random_params(&mut rng),
            AxisSpec {
                param: axis_pool[i % axis_pool.len()],
                start: rng.random_range(-2.0..-0.1),
                stop: rng.random_range(0.1..2.0),
                count: 4,
                spacing: Spacing::Linear,
            },
        );
        config.truncation = [3, 2, 2];
        let serial = {
            config.parallel_workers = 1;
            csv_string(&run_sweep(&config)?)
        };
        let threaded = {
            config.parallel_workers = 3;
            csv_string(&run_sweep(&config)?)
        };
        if serial == threaded {
            deterministic_ok += 1;
        }
    }

    let pass = trace_ok == INSTANCES
        && hermit_ok == INSTANCES
        && positive_ok == INSTANCES
        && deterministic_ok == INSTANCES;
    Ok((
        pass,
        format!(
            "trace-null {trace_ok}/{INSTANCES}; hermiticity {hermit_ok}/{INSTANCES}; \
             positivity {positive_ok}/{INSTANCES}; determinism {deterministic_ok}/{INSTANCES}"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_rejects_out_of_range_numbers() {
        assert!(run_subset(&[0]).is_err());
        assert!(run_subset(&[CRITERION_COUNT + 1]).is_err());
        assert!(criterion(0).is_none());
        assert!(criterion(CRITERION_COUNT + 1).is_none());
    }

    #[test]
    fn reports_are_cached_and_stable() {
        // Criterion 11 is pure arithmetic, so this stays fast.
        let first = criterion(11).unwrap();
        let second = criterion(11).unwrap();
        assert!(Arc::ptr_eq(&first, &second));
        assert_eq!(first.number, 11);
        assert_eq!(first.name, "eigenfrequency-closed-form");
        assert!(first.pass, "{}", first.detail);
    }

    #[test]
    fn display_formats_one_line() {
        let report = CriterionReport {
            number: 3,
            name: "brightness-alignment",
            pass: true,
            detail: "ok".into(),
        };
        let line = report.to_string();
        assert!(line.contains("criterion  3"));
        assert!(line.contains("PASS"));
        assert!(!line.contains('\n'));
    }
}
