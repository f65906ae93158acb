//! System parameters and the rotating-frame model: Hamiltonian and dissipation
//! channels of the three-mode four-wave-mixing cavity.
//!
//! The effective Hamiltonian (all rates in units of a reference decay rate κ):
//!
//! ```text
//! H = Δ_a a†a + Δ_b b†b + Δ_c c†c
//!   + g (a² b†c† + a†² b c)
//!   + F_a (a† + a)
//!   + (E b†c† + E* b c)
//! ```
//!
//! The g term exchanges a photon pair in mode a for one photon in each of
//! modes b and c. The parametric amplitude E drives b,c pair creation at the
//! combined frequency of the two auxiliary pumps, so it enters as b†c† + h.c.;
//! this is the only form consistent with the weak-drive amplitude equations
//! (E couples the vacuum to |0,1,1>) and with an undriven steady state that is
//! not vacuum when F_a = 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{annihilation, creation, number, FockOperator, HilbertSpace};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("decay rate kappa_{mode} must be positive, got {value}")]
    NonPositiveKappa { mode: char, value: f64 },
    #[error("thermal occupation n_th_{mode} must be non-negative, got {value}")]
    NegativeThermal { mode: char, value: f64 },
    #[error("parameter {field} must be finite")]
    NonFinite { field: &'static str },
    #[error("mode frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("temperature must be non-negative, got {0}")]
    NegativeTemperature(f64),
}

/// Physical parameters of the model, all in units of the reference κ.
///
/// `e` is stored as a complex amplitude (zero phase by default): the
/// interference-optimal value is negative for positive g and F_a, so sweeps
/// need the sign/phase degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SystemParams {
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta_c: f64,
    pub g: f64,
    pub f_a: f64,
    #[serde(with = "complex_amplitude")]
    pub e: Complex64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
    pub n_th_a: f64,
    pub n_th_b: f64,
    pub n_th_c: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            delta_a: 0.0,
            delta_b: 0.0,
            delta_c: 0.0,
            g: 0.0,
            f_a: 0.0,
            e: Complex64::ZERO,
            kappa_a: 1.0,
            kappa_b: 1.0,
            kappa_c: 1.0,
            n_th_a: 0.0,
            n_th_b: 0.0,
            n_th_c: 0.0,
        }
    }
}

impl SystemParams {
    /// Checks rate positivity, thermal non-negativity, and finiteness.
    pub fn validate(&self) -> Result<(), ModelError> {
        let fields: [(&'static str, f64); 12] = [
            ("delta_a", self.delta_a),
            ("delta_b", self.delta_b),
            ("delta_c", self.delta_c),
            ("g", self.g),
            ("f_a", self.f_a),
            ("e.re", self.e.re),
            ("e.im", self.e.im),
            ("kappa_a", self.kappa_a),
            ("kappa_b", self.kappa_b),
            ("kappa_c", self.kappa_c),
            ("n_th_a", self.n_th_a),
            ("n_th_b", self.n_th_b),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(ModelError::NonFinite { field: name });
            }
        }
        if !self.n_th_c.is_finite() {
            return Err(ModelError::NonFinite { field: "n_th_c" });
        }
        for (mode, kappa) in [('a', self.kappa_a), ('b', self.kappa_b), ('c', self.kappa_c)] {
            if kappa <= 0.0 {
                return Err(ModelError::NonPositiveKappa { mode, value: kappa });
            }
        }
        for (mode, n_th) in [('a', self.n_th_a), ('b', self.n_th_b), ('c', self.n_th_c)] {
            if n_th < 0.0 {
                return Err(ModelError::NegativeThermal { mode, value: n_th });
            }
        }
        Ok(())
    }

    /// |Δ_b + Δ_c − 2Δ_a|: residual of the rotating-frame matching condition.
    /// The condition is reported, never enforced; some reference parameter
    /// sets deliberately violate it.
    pub fn detuning_mismatch(&self) -> f64 {
        (self.delta_b + self.delta_c - 2.0 * self.delta_a).abs()
    }

    /// Whether the matching condition Δ_b + Δ_c = 2Δ_a holds within `tol`.
    pub fn detuning_condition_met(&self, tol: f64) -> bool {
        self.detuning_mismatch() <= tol
    }
}

/// One GKSL dissipation channel: rate · D[op].
#[derive(Debug, Clone)]
pub struct CollapseChannel {
    pub rate: f64,
    pub op: FockOperator,
}

/// Builds the rotating-frame Hamiltonian on `space`. Hermitian whenever `e`
/// is real (and for complex `e` as well, since the conjugate rides on bc).
pub fn build_hamiltonian(params: &SystemParams, space: HilbertSpace) -> FockOperator {
    let a = annihilation(space, 0).expect("mode 0 valid");
    let b = annihilation(space, 1).expect("mode 1 valid");
    let c = annihilation(space, 2).expect("mode 2 valid");
    let (adag, bdag, cdag) = (a.adjoint(), b.adjoint(), c.adjoint());

    let mut h = &(params.delta_a * &number(space, 0).unwrap())
        + &(params.delta_b * &number(space, 1).unwrap());
    h = &h + &(params.delta_c * &number(space, 2).unwrap());

    // Four-wave mixing: two a photons in, one b and one c photon out.
    let mix = &(&a * &a) * &(&bdag * &cdag);
    h = &h + &(params.g * &(&mix + &mix.adjoint()));

    // Coherent drive on mode a.
    h = &h + &(params.f_a * &(&adag + &a));

    // Non-degenerate parametric pair drive on modes b, c.
    let pair = &bdag * &cdag;
    h = &h + &(&(params.e * &pair) + &(params.e.conj() * &(&b * &c)));

    h
}

/// Builds the dissipation channels: for each mode a lowering channel with
/// rate κ(n̄+1) and, when n̄ > 0, a raising channel with rate κ·n̄. At most
/// six channels; zero-rate channels are omitted.
pub fn build_collapse_channels(
    params: &SystemParams,
    space: HilbertSpace,
) -> Result<Vec<CollapseChannel>, ModelError> {
    params.validate()?;
    let per_mode = [
        (0, params.kappa_a, params.n_th_a),
        (1, params.kappa_b, params.n_th_b),
        (2, params.kappa_c, params.n_th_c),
    ];
    let mut channels = Vec::with_capacity(6);
    for (mode, kappa, n_th) in per_mode {
        channels.push(CollapseChannel {
            rate: kappa * (n_th + 1.0),
            op: annihilation(space, mode).expect("mode valid"),
        });
        if n_th > 0.0 {
            channels.push(CollapseChannel {
                rate: kappa * n_th,
                op: creation(space, mode).expect("mode valid"),
            });
        }
    }
    Ok(channels)
}

/// Bose-Einstein occupation n̄ = 1/(exp(ħω/(k_B T)) − 1) for a mode at angular
/// frequency `omega` (rad/s) in a bath at `temperature` (K). Returns 0 at T=0.
pub fn bose_einstein_occupation(omega: f64, temperature: f64) -> Result<f64, ModelError> {
    if omega <= 0.0 {
        return Err(ModelError::NonPositiveFrequency(omega));
    }
    if temperature < 0.0 {
        return Err(ModelError::NegativeTemperature(temperature));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega / (K_B * temperature);
    Ok(1.0 / x.exp_m1())
}

/// Serialize `e` as [re, im]; accept a bare real number or a [re, im] pair.
mod complex_amplitude {
    use num_complex::Complex64;
    use serde::de::{self, SeqAccess, Visitor};
    use serde::{Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(value: &Complex64, ser: S) -> Result<S::Ok, S::Error> {
        [value.re, value.im].serialize(ser)
    }

    struct AmplitudeVisitor;

    impl<'de> Visitor<'de> for AmplitudeVisitor {
        type Value = Complex64;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a real number or a [re, im] pair")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Complex64, E> {
            Ok(Complex64::new(v, 0.0))
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Complex64, E> {
            Ok(Complex64::new(v as f64, 0.0))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Complex64, E> {
            Ok(Complex64::new(v as f64, 0.0))
        }

        fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Complex64, A::Error> {
            let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
            let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
            if seq.next_element::<f64>()?.is_some() {
                return Err(de::Error::invalid_length(3, &self));
            }
            Ok(Complex64::new(re, im))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Complex64, D::Error> {
        de.deserialize_any(AmplitudeVisitor)
    }
}
