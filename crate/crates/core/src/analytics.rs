//! Closed-form companions to the numerical solver: the two-photon eigenladder
//! behind conventional blockade, the destructive-interference optimum behind
//! unconventional blockade, a truncated weak-drive amplitude model, and a
//! regime classifier built on both.

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use thiserror::Error;

use crate::model::SystemParams;

type C = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("the interference optimum requires a nonzero mixing strength g")]
    ZeroMixing,
    #[error("amplitude-model system is singular for these parameters")]
    SingularAmplitudeSystem,
    #[error("one-photon amplitude is too small to normalize a correlation")]
    VanishingAmplitude,
}

/// Eigenfrequencies of the two-excitation manifold {|2,0,0>, |0,1,1>} under
/// the matching condition Δ_b + Δ_c = 2Δ_a, sorted ascending:
/// ω± = 2Δ_a ± √2·g. Their splitting is what detunes the second drive photon
/// in the conventional blockade.
pub fn cpb_eigenfrequencies(delta_a: f64, g: f64) -> [f64; 2] {
    let split = 2f64.sqrt() * g.abs();
    [2.0 * delta_a - split, 2.0 * delta_a + split]
}

/// Same spectrum from an explicit diagonalization of the 2×2 manifold
/// Hamiltonian, as an independent route for cross-checking the closed form.
pub fn cpb_eigenfrequencies_numerical(delta_a: f64, g: f64) -> [f64; 2] {
    let m = Matrix2::new(2.0 * delta_a, 2f64.sqrt() * g, 2f64.sqrt() * g, 2.0 * delta_a);
    let eig = m.symmetric_eigenvalues();
    let mut out = [eig[0], eig[1]];
    out.sort_by(f64::total_cmp);
    out
}

/// Parametric amplitude that cancels the two-photon amplitude of mode a in
/// the fully symmetric case (matched detunings, equal decay rates):
/// E_opt = −2F_a²/g.
pub fn upb_optimal_e(f_a: f64, g: f64) -> Result<f64, AnalyticsError> {
    if g == 0.0 {
        return Err(AnalyticsError::ZeroMixing);
    }
    Ok(-2.0 * f_a * f_a / g)
}

/// General interference optimum without assuming matched detunings or equal
/// decay rates:
///
/// ```text
/// E_opt = −(Δ_b + Δ_c − i(κ_b+κ_c)/2) · F_a² / (g · (Δ_a − iκ_a/2))
/// ```
///
/// Reduces to [`upb_optimal_e`] when Δ_b + Δ_c = 2Δ_a and all κ are equal.
pub fn upb_optimal_e_general(params: &SystemParams) -> Result<C, AnalyticsError> {
    if params.g == 0.0 {
        return Err(AnalyticsError::ZeroMixing);
    }
    let bc = C::new(
        params.delta_b + params.delta_c,
        -(params.kappa_b + params.kappa_c) / 2.0,
    );
    let a = C::new(params.delta_a, -params.kappa_a / 2.0);
    Ok(-bc * params.f_a * params.f_a / (params.g * a))
}

/// Weak-drive steady-state amplitudes with the vacuum amplitude pinned to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeState {
    /// |1,0,0> amplitude.
    pub c100: C,
    /// |2,0,0> amplitude.
    pub c200: C,
    /// |0,1,1> amplitude.
    pub c011: C,
}

/// Solves the truncated steady-state amplitude equations (basis restricted to
/// vacuum plus |1,0,0>, |2,0,0>, |0,1,1>, with c000 = 1):
///
/// ```text
/// F_a            + (Δ_a − iκ_a/2)          c100 + √2 F_a c200            = 0
/// √2 F_a c100    + (2Δ_a − iκ_a)           c200 + √2 g   c011            = 0
/// E              + √2 g                    c200 + (Δ_b+Δ_c − i(κ_b+κ_c)/2) c011 = 0
/// ```
///
/// Dissipation enters only through the −iκ/2 shifts, so the parameters are
/// not otherwise validated; a singular system (possible only for vanishing
/// effective linewidths) is reported as an error.
pub fn amplitude_model(params: &SystemParams) -> Result<AmplitudeState, AnalyticsError> {
    let sqrt2 = C::new(2f64.sqrt(), 0.0);
    let da = C::new(params.delta_a, -params.kappa_a / 2.0);
    let dbc = C::new(
        params.delta_b + params.delta_c,
        -(params.kappa_b + params.kappa_c) / 2.0,
    );
    let f = C::new(params.f_a, 0.0);
    let g = C::new(params.g, 0.0);

    let m = Matrix3::new(
        da,
        sqrt2 * f,
        C::ZERO,
        sqrt2 * f,
        da * 2.0,
        sqrt2 * g,
        C::ZERO,
        sqrt2 * g,
        dbc,
    );
    let rhs = Vector3::new(-f, C::ZERO, -params.e);
    let lu = m.full_piv_lu();
    if !lu.is_invertible() {
        return Err(AnalyticsError::SingularAmplitudeSystem);
    }
    let sol = lu.solve(&rhs).ok_or(AnalyticsError::SingularAmplitudeSystem)?;
    Ok(AmplitudeState { c100: sol[0], c200: sol[1], c011: sol[2] })
}

/// Second-order correlation implied by the truncated amplitudes:
/// g⁽²⁾ ≈ 2|c200|²/|c100|⁴. Undefined when the one-photon amplitude
/// underflows the same 1e-12 occupation floor the exact correlation uses.
pub fn amplitude_model_g2(state: &AmplitudeState) -> Result<f64, AnalyticsError> {
    let n1 = state.c100.norm_sqr();
    if n1 < 1e-12 {
        return Err(AnalyticsError::VanishingAmplitude);
    }
    Ok(2.0 * state.c200.norm_sqr() / (n1 * n1))
}

/// Windows used by [`classify`] to decide whether a parameter point sits on
/// one of the two blockade mechanisms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyTolerances {
    /// |Δ_a| window (units of κ) for the conventional two-photon resonance.
    pub tol_delta: f64,
    /// Relative window around the interference optimum E_opt.
    pub tol_e_rel: f64,
    /// Absolute floor (units of κ) of the E window.
    pub tol_e_abs: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        Self { tol_delta: 0.01, tol_e_rel: 0.05, tol_e_abs: 1e-4 }
    }
}

/// Which engineered mechanism the drive geometry matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mechanism {
    /// On the two-photon resonance of the anharmonic ladder (Δ_a ≈ 0, g ≠ 0).
    Conventional,
    /// Parametric amplitude within the window around the interference optimum.
    Unconventional,
    /// Both conditions at once.
    Composite,
    /// Neither condition.
    None,
}

impl Mechanism {
    pub fn label(&self) -> &'static str {
        match self {
            Mechanism::Conventional => "cpb",
            Mechanism::Unconventional => "upb",
            Mechanism::Composite => "composite",
            Mechanism::None => "none",
        }
    }
}

/// Outcome of [`classify`]: the geometric mechanism plus the statistics-based
/// blockade character of the supplied correlations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockadeVerdict {
    pub mechanism: Mechanism,
    /// Sub-Poissonian single-photon blockade: g⁽²⁾ < 1 (strict).
    pub single_photon: bool,
    /// Two-photon blockade: g⁽²⁾ ≥ 1 together with g⁽³⁾ < 1.
    pub two_photon: bool,
}

impl BlockadeVerdict {
    /// Canonical text form, e.g. `cpb+spb`, `composite`, `none+2pb`.
    pub fn label(&self) -> String {
        let base = self.mechanism.label();
        if self.single_photon {
            format!("{base}+spb")
        } else if self.two_photon {
            format!("{base}+2pb")
        } else {
            base.to_string()
        }
    }
}

/// Classifies an operating point. The mechanism comes from the parameters
/// alone; the single-/two-photon character from the measured correlations
/// (both false when a correlation is undefined).
pub fn classify(
    params: &SystemParams,
    g2: Option<f64>,
    g3: Option<f64>,
    tol: &ClassifyTolerances,
) -> BlockadeVerdict {
    let conventional = params.delta_a.abs() <= tol.tol_delta && params.g != 0.0;
    let unconventional = match upb_optimal_e_general(params) {
        Ok(e_opt) if params.f_a != 0.0 => {
            let window = (tol.tol_e_rel * e_opt.norm()).max(tol.tol_e_abs);
            (params.e - e_opt).norm() <= window
        }
        _ => false,
    };
    let mechanism = match (conventional, unconventional) {
        (true, true) => Mechanism::Composite,
        (true, false) => Mechanism::Conventional,
        (false, true) => Mechanism::Unconventional,
        (false, false) => Mechanism::None,
    };
    let single_photon = g2.is_some_and(|v| v < 1.0);
    let two_photon = g2.is_some_and(|v| v >= 1.0) && g3.is_some_and(|v| v < 1.0);
    BlockadeVerdict { mechanism, single_photon, two_photon }
}
