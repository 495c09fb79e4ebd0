//! Closed-form heat-balance-integral and ablation solutions.
//!
//! Two families live here. The HBI family assumes a finite thermal
//! penetration depth delta(t) and a quadratic profile inside it. The
//! ablation family works in the frame attached to the regressing surface
//! and yields exponential profiles `A exp(-(V_a/a_F) y) exp(+(V_a^2/a_F) t)`
//! that re-express exactly as attenuated waves travelling at V_a.
//!
//! The delta(t) closed form is implemented in its dimensionally consistent
//! reading,
//!
//!   delta^2(t) = 2 (a_F/V_a)^2 B_F (1 - exp(-3 (V_a^2/a_F) t)),
//!
//! which solves d(delta^2)/dt = 6 a_F B_F - 3 (V_a^2/a_F) delta^2, reduces
//! to Goodman's sqrt(6 a_F B_F t) for small t, and saturates at the
//! sqrt(2 B_F) a_F/V_a penetration scale. The expression as printed in the
//! source (exponent 3 V_a t, prefactor 2 a_F B_F / V_a) does not carry
//! consistent units; it is exposed as [`hbi_delta_verbatim`] for
//! documentation and never used by the predictors.

use crate::corephys::{CharacteristicScales, DimensionlessGroups, FluxBalance, FuelProperties};
use crate::error::{Error, Result};
use serde::Serialize;

/// Quadratic HBI temperature profile T(y) = beta0 + beta1 y + beta2 y^2
/// on 0 <= y <= delta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticProfile {
    /// Constant coefficient (K)
    pub beta0: f64,
    /// Linear coefficient (K/m)
    pub beta1: f64,
    /// Quadratic coefficient (K/m^2)
    pub beta2: f64,
    /// Current penetration depth (m)
    pub delta: f64,
    /// Net surface flux Phi (W/m^2)
    pub phi: f64,
    t_inf: f64,
    delta_t: f64,
    lambda_f: f64,
}

impl QuadraticProfile {
    /// Temperature at depth y (K). `y` must lie in [0, delta].
    pub fn temperature(&self, y: f64) -> Result<f64> {
        if y < 0.0 || y > self.delta {
            return Err(Error::Domain(format!(
                "y = {y} outside the profile support [0, {}]",
                self.delta
            )));
        }
        Ok(self.beta0 + self.beta1 * y + self.beta2 * y * y)
    }

    /// Dimensionless temperature Theta(y) = (T - T_inf)/(T_s - T_inf).
    pub fn theta(&self, y: f64) -> Result<f64> {
        Ok((self.temperature(y)? - self.t_inf) / self.delta_t)
    }

    /// dT/dy at depth y (K/m).
    pub fn gradient(&self, y: f64) -> f64 {
        self.beta1 + 2.0 * self.beta2 * y
    }

    /// Surface value Theta(0) = Phi delta / (2 lambda_F (T_s - T_inf)).
    pub fn surface_theta(&self) -> f64 {
        self.phi * self.delta / (2.0 * self.lambda_f * self.delta_t)
    }
}

/// Tag for the two ablation boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AblationVariant {
    /// Surface pinned at T_s: amplitude 1
    LinearBc,
    /// Stefan surface-flux condition: amplitude Phi a_F / (lambda_F (T_s - T_inf) V_a)
    StefanBc,
}

/// Parameters of an exponential ablation profile
/// Theta = amplitude * exp(-decay * y) * exp(+growth * t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AblationProfile {
    pub variant: AblationVariant,
    /// Dimensionless prefactor: 1 for the linear BC, the flux-based pulse
    /// magnitude for the Stefan BC
    pub amplitude: f64,
    /// Spatial decay rate V_a / a_F (1/m)
    pub decay: f64,
    /// Temporal growth rate V_a^2 / a_F (1/s)
    pub growth: f64,
    /// Initial factor D0 or P0; the surface condition fixes it at 1
    pub d0_or_p0: f64,
}

impl AblationProfile {
    pub fn theta(&self, y: f64, t: f64) -> f64 {
        self.amplitude * (-self.decay * y).exp() * (self.growth * t).exp()
    }
}

/// One evaluated profile point with its audit flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaSample {
    pub theta: f64,
    /// Theta exceeded the physical ceiling of 1; returned unclipped because
    /// the boilover algebra operates on the unclipped forms
    pub saturated: bool,
    /// Evaluation point below the current fuel layer y_F(t) = y0 - V_a t
    pub out_of_layer: bool,
}

/// Penetration-depth diagnostics for a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenetrationDepth {
    /// e-folding heat penetration depth a_F / V_a (m)
    pub y_p0: f64,
    a_f: f64,
    v_a: f64,
    b_f: f64,
}

impl PenetrationDepth {
    pub fn new(groups: &DimensionlessGroups, scales: &CharacteristicScales) -> Self {
        PenetrationDepth {
            y_p0: scales.y_p0,
            a_f: scales.a_f,
            v_a: scales.v_a,
            b_f: groups.b_f,
        }
    }

    /// HBI thermal penetration depth delta(t) (m).
    pub fn delta_hbi(&self, t: f64) -> Result<f64> {
        hbi_delta_raw(self.b_f, self.a_f, self.v_a, t)
    }

    /// Time-shifted heat penetration depth y_pt = a_F/V_a + V_a t (m).
    pub fn y_pt(&self, t: f64) -> f64 {
        self.y_p0 + self.v_a * t
    }

    /// Support width of the quadratic profile, Z = sqrt(6 a_F t) sqrt(B_F) (m).
    pub fn z(&self, t: f64) -> f64 {
        (6.0 * self.a_f * t).sqrt() * self.b_f.max(0.0).sqrt()
    }
}

fn hbi_delta_raw(b_f: f64, a_f: f64, v_a: f64, t: f64) -> Result<f64> {
    if !(b_f > 0.0) {
        return Err(Error::InvalidRegime(format!(
            "HBI penetration depth needs B_F > 0, got {b_f} (superheating flux deficit)"
        )));
    }
    let scale = a_f / v_a;
    let rate = 3.0 * v_a * v_a / a_f;
    // -expm1(-x) keeps the small-t limit sqrt(6 a_F B_F t) exact
    let delta_sq = 2.0 * scale * scale * b_f * (-(-rate * t).exp_m1());
    Ok(delta_sq.sqrt())
}

/// HBI thermal penetration depth delta(t) (m).
///
/// delta(0) = 0; delta saturates at sqrt(2 B_F) a_F/V_a as t grows.
pub fn hbi_delta(
    groups: &DimensionlessGroups,
    scales: &CharacteristicScales,
    t: f64,
) -> Result<f64> {
    hbi_delta_raw(groups.b_f, scales.a_f, scales.v_a, t)
}

/// The delta(t) expression exactly as printed: delta^2 = (2 a_F B_F / V_a)(1 - e^{-3 V_a t}).
/// Dimensionally inconsistent; kept for documentation and strict-paper output only.
pub fn hbi_delta_verbatim(
    groups: &DimensionlessGroups,
    scales: &CharacteristicScales,
    t: f64,
) -> Result<f64> {
    if !(groups.b_f > 0.0) {
        return Err(Error::InvalidRegime(format!(
            "HBI penetration depth needs B_F > 0, got {}",
            groups.b_f
        )));
    }
    let delta_sq =
        2.0 * scales.a_f * groups.b_f / scales.v_a * (-(-3.0 * scales.v_a * t).exp_m1());
    Ok(delta_sq.sqrt())
}

/// Builds the quadratic HBI profile at time `t` from the surface-flux
/// balance. The coefficients satisfy T(delta) = T_inf, dT/dy(delta) = 0,
/// and dT/dy(0) = -Phi/lambda_F.
pub fn hbi_quadratic_profile(
    flux: &FluxBalance,
    fuel: &FuelProperties,
    t_inf: f64,
    delta: f64,
) -> Result<QuadraticProfile> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!(
            "penetration depth must be positive, got {delta}"
        )));
    }
    let phi = flux.phi;
    let lambda = fuel.lambda_f;
    Ok(QuadraticProfile {
        beta0: t_inf + phi * delta / (2.0 * lambda),
        beta1: -phi / lambda,
        beta2: phi / (2.0 * lambda * delta),
        delta,
        phi,
        t_inf,
        delta_t: fuel.t_s - t_inf,
        lambda_f: lambda,
    })
}

/// Goodman-style penetration depth for constant surface flux treated as an
/// internal heat source: delta = sqrt(24 a_F t).
pub fn goodman_internal_generation_delta(fuel: &FuelProperties, t: f64) -> f64 {
    (24.0 * fuel.a_f * t).sqrt()
}

/// Time for the internal-generation penetration depth to reach depth `h`:
/// t_h = t0_h / 24 with t0_h = h^2 / a_F.
pub fn internal_generation_t_h(fuel: &FuelProperties, h: f64) -> f64 {
    h * h / fuel.a_f / 24.0
}

/// Time for the no-source HBI penetration depth to reach depth `h`:
/// t_h = t0_h / (6 B_F).
pub fn hbi_t_h(fuel: &FuelProperties, b_f: f64, h: f64) -> Result<f64> {
    if !(b_f > 0.0) {
        return Err(Error::InvalidRegime(format!(
            "penetration time needs B_F > 0, got {b_f}"
        )));
    }
    Ok(h * h / fuel.a_f / (6.0 * b_f))
}

/// The exponential ablation profile for a scenario-derived parameter set.
///
/// `phi` is the net surface flux (only used by the Stefan variant),
/// `delta_t` is T_s - T_inf.
pub fn ablation_parameters(
    variant: AblationVariant,
    fuel: &FuelProperties,
    phi: f64,
    delta_t: f64,
    v_a: f64,
) -> AblationProfile {
    let amplitude = match variant {
        AblationVariant::LinearBc => 1.0,
        // fixed by the flux condition -lambda_F dT/dy|0 = Phi at t = 0
        AblationVariant::StefanBc => phi / (fuel.lambda_f * delta_t) * (fuel.a_f / v_a),
    };
    AblationProfile {
        variant,
        amplitude,
        decay: v_a / fuel.a_f,
        growth: v_a * v_a / fuel.a_f,
        d0_or_p0: 1.0,
    }
}

/// Evaluates the ablation profile at (y, t) with saturation and
/// out-of-layer audit flags. `y_layer` is the current fuel depth
/// y_F(t) = y0 - V_a t in the attached frame.
pub fn ablation_theta(profile: &AblationProfile, y: f64, t: f64, y_layer: f64) -> ThetaSample {
    let theta = profile.theta(y, t);
    ThetaSample {
        theta,
        saturated: theta > 1.0,
        out_of_layer: y > y_layer,
    }
}

/// The same solution in traveling-wave form
/// Theta = A exp(-(V_a/a_F)(y - V_a t)); identical to the ablation profile
/// by pure algebra.
pub fn wave_pulse_theta(profile: &AblationProfile, y_lab: f64, t: f64) -> f64 {
    profile.amplitude * (-profile.decay * (y_lab - (profile.growth / profile.decay) * t)).exp()
}

/// Heat penetration depth of the nonlinear (Stefan-BC) profile,
/// y_p0 (1 + ln Y) with Y = N_p.
pub fn penetration_depth_nonlinear(
    groups: &DimensionlessGroups,
    scales: &CharacteristicScales,
) -> Result<f64> {
    if !(groups.n_p > 0.0) {
        return Err(Error::InvalidRegime(format!(
            "nonlinear penetration depth needs N_p > 0, got {}",
            groups.n_p
        )));
    }
    Ok(scales.y_p0 * (1.0 + groups.n_p.ln()))
}

/// One CSV row of a sampled profile.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileSample {
    pub y_m: f64,
    pub t_s: f64,
    pub theta: f64,
    pub variant: String,
    pub saturated: bool,
}

/// Renders profile samples with the export header `y_m,t_s,theta,variant,saturated`.
pub fn profile_csv(rows: &[ProfileSample]) -> String {
    let mut out = String::from("y_m,t_s,theta,variant,saturated\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.y_m, r.t_s, r.theta, r.variant, r.saturated
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corephys::{
        characteristic_scales, dimensionless_groups, flux_balance, FuelProperties, Scenario,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn test_fuel() -> FuelProperties {
        FuelProperties {
            name: "test_oil".into(),
            a_f: 1e-7,
            rho_f: 800.0,
            c_pf: 2000.0,
            lambda_f: 1e-7 * 800.0 * 2000.0,
            h_v: 3e5,
            mu: 200.0,
            t_s: 533.0,
        }
    }

    fn scenario() -> Scenario {
        Scenario::new(test_fuel(), 0.15, 0.01, 293.0, Some(1e-5), None, 5e3, Some(0.335)).unwrap()
    }

    #[test]
    fn delta_starts_at_zero() {
        assert_eq!(hbi_delta_raw(1.0, 1e-7, 1e-5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn delta_goodman_small_time_limit() {
        // 3 V_a^2 t / a_F <= 1e-4 must reproduce sqrt(6 a_F B_F t) to 0.01%
        let (a_f, v_a, b_f) = (1e-7, 1e-5, 0.8);
        let t = 1e-4 * a_f / (3.0 * v_a * v_a); // exactly at the threshold
        let d = hbi_delta_raw(b_f, a_f, v_a, t).unwrap();
        let goodman = (6.0 * a_f * b_f * t).sqrt();
        assert!(rel(d, goodman) < 1e-4);
    }

    #[test]
    fn delta_saturation_value() {
        // a_F = 1e-7, V_a = 1e-5, B_F = 1: delta(inf) = sqrt(2) * 0.01
        let d = hbi_delta_raw(1.0, 1e-7, 1e-5, 1e12).unwrap();
        assert!(rel(d, std::f64::consts::SQRT_2 * 0.01) < 1e-12);
    }

    #[test]
    fn delta_rejects_flux_deficit() {
        assert!(matches!(
            hbi_delta_raw(-0.2, 1e-7, 1e-5, 10.0),
            Err(Error::InvalidRegime(_))
        ));
    }

    #[test]
    fn delta_monotone_nondecreasing() {
        let (a_f, v_a, b_f) = (1e-7, 1e-5, 0.7);
        let mut prev = 0.0;
        for i in 0..200 {
            let t = i as f64 * 50.0;
            let d = hbi_delta_raw(b_f, a_f, v_a, t).unwrap();
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn delta_solves_its_ode() {
        // d(delta^2)/dt = 6 a_F B_F - 3 (V_a^2/a_F) delta^2, checked by
        // central differences at 100 random times
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (a_f, v_a) = (1e-7, 1e-5);
        let t_scale = a_f / (v_a * v_a); // 1000 s
        for _ in 0..100 {
            let b_f: f64 = rng.gen_range(0.1..1.0);
            let t: f64 = rng.gen_range(0.01..4.0) * t_scale;
            let h = t * 1e-6;
            let sq = |t: f64| hbi_delta_raw(b_f, a_f, v_a, t).unwrap().powi(2);
            let lhs = (sq(t + h) - sq(t - h)) / (2.0 * h);
            let rhs = 6.0 * a_f * b_f - 3.0 * (v_a * v_a / a_f) * sq(t);
            let scale = (6.0 * a_f * b_f).abs();
            assert!(
                (lhs - rhs).abs() / scale < 1e-6,
                "ODE residual too large at t = {t}: lhs {lhs}, rhs {rhs}"
            );
        }
    }

    #[test]
    fn quadratic_profile_boundary_conditions() {
        let s = scenario();
        let flux = flux_balance(&s).unwrap();
        for &delta in &[1e-4, 1e-3, 5e-3, 2e-2] {
            let p = hbi_quadratic_profile(&flux, &s.fuel, s.t_inf, delta).unwrap();
            let dt = s.delta_t();
            // T(delta) = T_inf
            assert!(rel(p.temperature(delta).unwrap() - s.t_inf + dt, dt) < 1e-10);
            // dT/dy(delta) = 0, scaled by the surface gradient
            assert!((p.gradient(delta) / p.gradient(0.0)).abs() < 1e-10);
            // dT/dy(0) = -Phi/lambda_F
            assert!(rel(p.gradient(0.0), -flux.phi / s.fuel.lambda_f) < 1e-10);
            // Theta(delta) = 0
            assert!(p.theta(delta).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn quadratic_profile_surface_value() {
        // Phi = 2.6e3, lambda = 0.12, T_s - T_inf = 240, delta = 5e-3
        let flux = FluxBalance {
            f_flux: 5e3,
            q_vap: 2.4e3,
            phi: 2.6e3,
            q_c: 2.6e3,
            flux_deficit: false,
        };
        let mut fuel = test_fuel();
        fuel.lambda_f = 0.12;
        fuel.a_f = 0.12 / (fuel.rho_f * fuel.c_pf);
        fuel.t_s = 293.0 + 240.0;
        let p = hbi_quadratic_profile(&flux, &fuel, 293.0, 5e-3).unwrap();
        assert!(rel(p.surface_theta(), 0.22569444444444448) < 1e-12);
        assert!(rel(p.theta(0.0).unwrap(), 0.22569444444444448) < 1e-12);
    }

    #[test]
    fn quadratic_profile_domain_error() {
        let s = scenario();
        let flux = flux_balance(&s).unwrap();
        let p = hbi_quadratic_profile(&flux, &s.fuel, s.t_inf, 5e-3).unwrap();
        assert!(matches!(p.theta(6e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn goodman_internal_generation() {
        let fuel = test_fuel();
        assert_eq!(goodman_internal_generation_delta(&fuel, 0.0), 0.0);
        // a_F = 1e-7, t = 100 -> sqrt(2.4e-4)
        assert!(rel(
            goodman_internal_generation_delta(&fuel, 100.0),
            0.015491933384829668
        ) < 1e-12);
        // ratio to the no-source Goodman sqrt(6 a t): sqrt(24/6) = 2 at B_F = 1
        let t = 100.0;
        let no_source = (6.0 * fuel.a_f * t).sqrt();
        assert!(rel(goodman_internal_generation_delta(&fuel, t) / no_source, 2.0) < 1e-12);
        // t_h hierarchy: t0_h/24 is 6/24 of t0_h/(6 B_F) at B_F = 1
        let h = 0.01;
        let t24 = internal_generation_t_h(&fuel, h);
        let t6 = hbi_t_h(&fuel, 1.0, h).unwrap();
        assert!(rel(t6 / t24, 4.0) < 1e-12);
    }

    #[test]
    fn ablation_linear_surface_start() {
        let s = scenario();
        let p = ablation_parameters(AblationVariant::LinearBc, &s.fuel, 0.0, s.delta_t(), 1e-5);
        // t = 0, y = 0: surface at T_s
        assert_eq!(p.theta(0.0, 0.0), 1.0);
        // t = 0, y = y_p0 = a_F/V_a: one e-folding
        let y_p0 = s.fuel.a_f / 1e-5;
        assert!(rel(p.theta(y_p0, 0.0), (-1.0f64).exp()) < 1e-12);
    }

    #[test]
    fn ablation_stefan_amplitude_is_pulse_magnitude() {
        // constructed so N0 = 2, N_DHS = 1.6 -> N_p = 1.25 with Phi = F
        let s = scenario();
        let dt = s.delta_t();
        let v_a = 1.6 * s.fuel.a_f / s.y0; // N_DHS = 1.6
        let f = 2.0 * s.fuel.lambda_f * dt / s.y0; // N0 = 2
        let p = ablation_parameters(AblationVariant::StefanBc, &s.fuel, f, dt, v_a);
        assert!(rel(p.amplitude, 1.25) < 1e-12);
    }

    #[test]
    fn ablation_stefan_flux_condition() {
        // -lambda_F dT/dy at (0, 0) equals Phi, by central finite difference
        let s = scenario();
        let flux = flux_balance(&s).unwrap();
        let dt = s.delta_t();
        let p = ablation_parameters(AblationVariant::StefanBc, &s.fuel, flux.phi, dt, 1e-5);
        let h = 1e-7;
        let grad_theta = (p.theta(h, 0.0) - p.theta(-h, 0.0)) / (2.0 * h);
        let q = -s.fuel.lambda_f * dt * grad_theta;
        assert!(rel(q, flux.phi) < 1e-6);
    }

    #[test]
    fn ablation_monotonicity() {
        let s = scenario();
        let p = ablation_parameters(AblationVariant::LinearBc, &s.fuel, 0.0, s.delta_t(), 1e-5);
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let y = i as f64 * 1e-3;
            let th = p.theta(y, 100.0);
            assert!(th < prev, "theta must strictly decrease in y");
            prev = th;
        }
        let mut prev = 0.0;
        for i in 0..50 {
            let t = i as f64 * 10.0;
            let th = p.theta(5e-3, t);
            assert!(th > prev || i == 0, "theta must strictly increase in t");
            prev = th;
        }
    }

    #[test]
    fn ablation_exponent_matches_fourier_form() {
        // at t = t_B0 the exponent equals N_DHS^2 Fo^e
        let s = scenario();
        let g = dimensionless_groups(&s).unwrap();
        let p = ablation_parameters(AblationVariant::LinearBc, &s.fuel, 0.0, s.delta_t(), 1e-5);
        let t_b0 = 700.0;
        let fo_e = g.fo(t_b0);
        assert!(rel(p.growth * t_b0, g.n_dhs * g.n_dhs * fo_e) < 1e-12);
    }

    #[test]
    fn ablation_flags() {
        let s = scenario();
        let flux = flux_balance(&s).unwrap();
        let p = ablation_parameters(AblationVariant::StefanBc, &s.fuel, flux.phi, s.delta_t(), 1e-5);
        // long time: unclipped theta > 1 carries the saturation flag
        let sample = ablation_theta(&p, 0.0, 5000.0, s.y0 - 1e-5 * 5000.0);
        assert!(sample.saturated && sample.theta > 1.0);
        // below the current layer depth: out-of-layer flag, no error
        let sample = ablation_theta(&p, 9e-3, 200.0, s.y0 - 1e-5 * 200.0);
        assert!(sample.out_of_layer);
        let sample = ablation_theta(&p, 5e-3, 200.0, s.y0 - 1e-5 * 200.0);
        assert!(!sample.out_of_layer);
    }

    #[test]
    fn wave_pulse_is_ablation_profile() {
        // pointwise identity over 1000 random (y, t) pairs
        let s = scenario();
        let flux = flux_balance(&s).unwrap();
        let dt = s.delta_t();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for variant in [AblationVariant::LinearBc, AblationVariant::StefanBc] {
            let p = ablation_parameters(variant, &s.fuel, flux.phi, dt, 1e-5);
            for _ in 0..1000 {
                let y: f64 = rng.gen_range(0.0..0.05);
                let t: f64 = rng.gen_range(0.0..2000.0);
                let a = p.theta(y, t);
                let w = wave_pulse_theta(&p, y, t);
                assert!(rel(w, a) < 1e-12, "wave form must equal ablation form");
            }
        }
    }

    #[test]
    fn wave_pulse_constant_on_characteristic() {
        let s = scenario();
        let p = ablation_parameters(AblationVariant::LinearBc, &s.fuel, 0.0, s.delta_t(), 1e-5);
        let v_a = 1e-5;
        for i in 0..20 {
            let t = i as f64 * 100.0;
            assert!(rel(wave_pulse_theta(&p, v_a * t, t), p.amplitude) < 1e-12);
        }
        // one e-folding behind the front: V_a = 1e-5, a_F = 1e-7, y - V_a t = 0.01
        assert!(rel(wave_pulse_theta(&p, 0.01, 0.0), (-1.0f64).exp()) < 1e-12);
    }

    #[test]
    fn steady_front_fixed_limit() {
        // at t = 0 the linear-BC profile is the steady closed form e^{-V_a y/a_F}
        let s = scenario();
        let p = ablation_parameters(AblationVariant::LinearBc, &s.fuel, 0.0, s.delta_t(), 1e-5);
        for i in 0..30 {
            let y = i as f64 * 1e-3;
            assert!(rel(p.theta(y, 0.0), (-1e-5 * y / s.fuel.a_f).exp()) < 1e-12);
        }
    }

    #[test]
    fn nonlinear_penetration_depth() {
        let s = scenario();
        let mut g = dimensionless_groups(&s).unwrap();
        let sc = characteristic_scales(&s).unwrap();
        g.n_p = 1.0;
        assert!(rel(penetration_depth_nonlinear(&g, &sc).unwrap(), sc.y_p0) < 1e-12);
        g.n_p = std::f64::consts::E;
        assert!(rel(penetration_depth_nonlinear(&g, &sc).unwrap(), 2.0 * sc.y_p0) < 1e-12);
        g.n_p = -0.5;
        assert!(matches!(
            penetration_depth_nonlinear(&g, &sc),
            Err(Error::InvalidRegime(_))
        ));
        // heating oil: y_p0 = 8 mm, N_p = 1.2 -> 9.46 mm
        let mut sc8 = sc;
        sc8.y_p0 = 8e-3;
        g.n_p = 1.2;
        assert!(rel(penetration_depth_nonlinear(&g, &sc8).unwrap(), 9.458572454351637e-3) < 1e-12);
    }

    #[test]
    fn verbatim_delta_exposed_but_distinct() {
        let s = scenario();
        let mut g = dimensionless_groups(&s).unwrap();
        g.b_f = 0.8;
        let sc = characteristic_scales(&s).unwrap();
        let v = hbi_delta_verbatim(&g, &sc, 100.0).unwrap();
        let repaired = hbi_delta(&g, &sc, 100.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!(v != repaired);
    }

    #[test]
    fn profile_csv_header() {
        let rows = vec![ProfileSample {
            y_m: 0.001,
            t_s: 10.0,
            theta: 0.5,
            variant: "ablation_linear".into(),
            saturated: false,
        }];
        let out = profile_csv(&rows);
        assert!(out.starts_with("y_m,t_s,theta,variant,saturated\n"));
        assert!(out.contains("0.001,10,0.5,ablation_linear,false"));
    }
}
