use num_rational::Rational64;
use serde::Serialize;

use crate::error::Result;

use super::leray::sigma_inf_leray;
use super::quad::Kahan;
use super::weight::WeightSpec;

/// ζ(3) from Σ_{n<N} n⁻³ plus the Euler–Maclaurin tail through N⁻⁶ (error below N⁻⁸).
pub fn zeta3() -> f64 {
    const N: u32 = 1000;
    let mut k = Kahan::default();
    for n in (1..N).rev() {
        let x = n as f64;
        k.add(1.0 / (x * x * x));
    }
    let x = N as f64;
    let tail = 1.0 / (2.0 * x * x) + 1.0 / (2.0 * x.powi(3)) + 1.0 / (4.0 * x.powi(4)) - 1.0 / (12.0 * x.powi(6));
    k.add(tail);
    k.value()
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictedConstants {
    pub sigma_inf: f64,
    pub zeta3: f64,
    /// σ∞/ζ(3), the coefficient of B³ log B.
    pub leading: f64,
    /// σ∞/(6ζ(3)²).
    pub peyre: f64,
    #[serde(serialize_with = "ser_ratio")]
    pub alpha: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub beta: Rational64,
    pub tau_fin: f64,
    /// τ∞/σ∞.
    #[serde(serialize_with = "ser_ratio")]
    pub tau_inf_ratio: Rational64,
    /// Rational c with peyre = c·σ∞·ζ(3)⁻²; equals α·β·(τ∞/σ∞).
    #[serde(serialize_with = "ser_ratio")]
    pub peyre_rational: Rational64,
}

pub fn predicted_constants_from(sigma_inf: f64) -> PredictedConstants {
    let z = zeta3();
    let alpha = Rational64::new(1, 9);
    let beta = Rational64::from_integer(1);
    let tau_inf_ratio = Rational64::new(3, 2);
    let peyre_rational = alpha * beta * tau_inf_ratio;
    assert_eq!(peyre_rational, Rational64::new(1, 6));
    PredictedConstants {
        sigma_inf,
        zeta3: z,
        leading: sigma_inf / z,
        peyre: sigma_inf / (6.0 * z * z),
        alpha,
        beta,
        tau_fin: 1.0 / (z * z),
        tau_inf_ratio,
        peyre_rational,
    }
}

pub fn predicted_constants(w: &WeightSpec) -> Result<PredictedConstants> {
    Ok(predicted_constants_from(sigma_inf_leray(w)?.value))
}
