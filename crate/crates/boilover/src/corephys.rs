//! Fuel and scenario data model, flux bookkeeping, and the dimensionless
//! groups / characteristic scales that the closed-form solutions and
//! predictors are built from.
//!
//! All quantities are SI. Temperatures are Kelvin; unit suffixes are a
//! CLI-boundary concern only. Every type here is an immutable value record
//! and every operation is a pure function, so concurrent use needs no
//! coordination.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance for the lambda_F = a_F * rho_F * C_pF consistency
/// check on fuel records.
pub const FUEL_CONSISTENCY_TOL: f64 = 0.05;

/// Relative tolerance for redundant V_a vs m_dot inputs.
pub const VELOCITY_CONFLICT_TOL: f64 = 0.01;

/// Thermophysical constants of one fuel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuelProperties {
    pub name: String,
    /// Thermal diffusivity a_F (m^2/s)
    pub a_f: f64,
    /// Thermal conductivity lambda_F (W/(m K))
    pub lambda_f: f64,
    /// Density rho_F (kg/m^3)
    pub rho_f: f64,
    /// Specific heat C_pF (J/(kg K))
    pub c_pf: f64,
    /// Latent heat of vaporization H_v (J/kg)
    pub h_v: f64,
    /// Effective radiation absorption coefficient mu (1/m)
    pub mu: f64,
    /// Surface (vaporization) temperature T_s (K)
    pub t_s: f64,
}

impl FuelProperties {
    /// Validates positivity and the a_F = lambda_F/(rho_F C_pF) consistency
    /// of a fully-specified record. Records off by more than 5% are rejected.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("a_F", self.a_f),
            ("lambda_F", self.lambda_f),
            ("rho_F", self.rho_f),
            ("C_pF", self.c_pf),
            ("H_v", self.h_v),
            ("mu", self.mu),
            ("T_s", self.t_s),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Invalid(format!(
                    "fuel `{}`: {name} must be strictly positive, got {v}",
                    self.name
                )));
            }
        }
        let implied = self.lambda_f / (self.rho_f * self.c_pf);
        let rel = ((self.a_f - implied) / self.a_f).abs();
        if rel > FUEL_CONSISTENCY_TOL {
            return Err(Error::Invalid(format!(
                "fuel `{}`: a_F = {} disagrees with lambda_F/(rho_F*C_pF) = {:.6e} by {:.1}%",
                self.name,
                self.a_f,
                implied,
                rel * 100.0
            )));
        }
        Ok(())
    }
}

/// Flame-side environment for the heat-feedback correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlameEnvironment {
    /// Flame temperature T_f (K)
    pub t_f: f64,
    /// Fire-environment air temperature T_inf^f (K)
    pub t_inf_f: f64,
    /// Air density rho_inf (kg/m^3)
    pub rho_inf: f64,
    /// Flame-gas specific heat C_p (J/(kg K))
    pub c_p: f64,
    /// Extinction coefficient K (1/m)
    pub k_ext: f64,
    /// Gravitational acceleration g (m/s^2). Set to 1.0 to recover the
    /// correlation exactly as printed (see `flame_feedback`).
    pub g: f64,
}

impl FlameEnvironment {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_f > self.t_inf_f && self.t_inf_f > 0.0) {
            return Err(Error::Invalid(format!(
                "flame environment requires T_f > T_inf_f > 0, got T_f = {}, T_inf_f = {}",
                self.t_f, self.t_inf_f
            )));
        }
        if !(self.k_ext > 0.0) {
            return Err(Error::Invalid(format!(
                "extinction coefficient must be positive, got {}",
                self.k_ext
            )));
        }
        if !(self.g > 0.0) || !(self.rho_inf > 0.0) || !(self.c_p > 0.0) {
            return Err(Error::Invalid(
                "flame environment g, rho_inf, C_p must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for FlameEnvironment {
    /// Hydrocarbon pool-fire defaults: ~1100 K flame over ambient air.
    fn default() -> Self {
        FlameEnvironment {
            t_f: 1100.0,
            t_inf_f: 293.0,
            rho_inf: 1.2,
            c_p: 1005.0,
            k_ext: 2.6,
            g: 9.81,
        }
    }
}

/// One burn configuration: a fuel layer of initial depth `y0` on water,
/// in a pool of diameter `d`, receiving a net surface flux `f_flux`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub fuel: FuelProperties,
    /// Pool diameter D (m)
    pub d: f64,
    /// Initial fuel layer depth y0 (m)
    pub y0: f64,
    /// Initial/ambient layer temperature T_inf (K)
    pub t_inf: f64,
    /// Regression velocity V_a (m/s); derived from `m_dot` when absent
    pub v_a: Option<f64>,
    /// Mass burning rate per unit area (kg/(m^2 s)); derived from `v_a` when absent
    pub m_dot: Option<f64>,
    /// Net surface heat flux q_s = F (W/m^2)
    pub f_flux: f64,
    /// Dimensionless boilover-onset temperature Theta_B0
    pub theta_b0: Option<f64>,
    /// Residual fuel depth at evaluation y_F (m); defaults to y0
    pub y_f: f64,
}

impl Scenario {
    /// Builds a scenario with `y_f = y0` and validates it.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        fuel: FuelProperties,
        d: f64,
        y0: f64,
        t_inf: f64,
        v_a: Option<f64>,
        m_dot: Option<f64>,
        f_flux: f64,
        theta_b0: Option<f64>,
    ) -> Result<Self> {
        let s = Scenario {
            fuel,
            d,
            y0,
            t_inf,
            v_a,
            m_dot,
            f_flux,
            theta_b0,
            y_f: y0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.fuel.validate()?;
        if !(self.d > 0.0) {
            return Err(Error::Invalid(format!("pool diameter must be positive, got {}", self.d)));
        }
        if !(self.y0 > 0.0) {
            return Err(Error::Invalid(format!("fuel depth y0 must be positive, got {}", self.y0)));
        }
        if !(self.y_f > 0.0 && self.y_f <= self.y0) {
            return Err(Error::Invalid(format!(
                "residual depth must satisfy 0 < y_F <= y0, got y_F = {}, y0 = {}",
                self.y_f, self.y0
            )));
        }
        if !(self.fuel.t_s > self.t_inf) {
            return Err(Error::Invalid(format!(
                "surface temperature T_s = {} must exceed T_inf = {}",
                self.fuel.t_s, self.t_inf
            )));
        }
        if !(self.f_flux > 0.0) {
            return Err(Error::Invalid(format!("surface flux must be positive, got {}", self.f_flux)));
        }
        if let Some(th) = self.theta_b0 {
            if !(th > 0.0 && th < 1.0) {
                return Err(Error::Invalid(format!(
                    "theta_B0 must lie in (0, 1), got {th}"
                )));
            }
        }
        // regression velocity must be resolvable
        regression_velocity(self).map(|_| ())
    }

    /// T_s - T_inf, the driving temperature difference (K).
    pub fn delta_t(&self) -> f64 {
        self.fuel.t_s - self.t_inf
    }

    /// Dimensionless residual fuel depth delta_F = y_F / y0.
    pub fn delta_f(&self) -> f64 {
        self.y_f / self.y0
    }
}

/// Surface-flux bookkeeping: how the incident flux splits between the
/// vaporization sink and net conduction into the liquid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxBalance {
    /// Incident surface flux F (W/m^2)
    pub f_flux: f64,
    /// Vaporization sink rho_F * H_v * V_a (W/m^2)
    pub q_vap: f64,
    /// Net flux into the liquid Phi = F - rho_F H_v V_a (W/m^2)
    pub phi: f64,
    /// Conducted flux at the surface; equals Phi under the surface
    /// energy-balance sign convention used throughout
    pub q_c: f64,
    /// Set when Phi <= 0: the flux cannot heat the layer
    pub flux_deficit: bool,
}

/// Velocity of surface regression, from `v_a` directly or from
/// `m_dot / rho_F`.
///
/// When both are supplied they must agree within 1% or the call fails
/// with `Conflict`; the directly-supplied velocity wins.
pub fn regression_velocity(scenario: &Scenario) -> Result<f64> {
    let derived = scenario.m_dot.map(|m| m / scenario.fuel.rho_f);
    match (scenario.v_a, derived) {
        (Some(v), Some(d)) => {
            if ((v - d) / v).abs() > VELOCITY_CONFLICT_TOL {
                Err(Error::Conflict(format!(
                    "V_a = {v:.4e} m/s and m_dot/rho_F = {d:.4e} m/s disagree by more than 1%"
                )))
            } else {
                Ok(v)
            }
        }
        (Some(v), None) => {
            if v > 0.0 {
                Ok(v)
            } else {
                Err(Error::Invalid(format!("V_a must be positive, got {v}")))
            }
        }
        (None, Some(d)) => {
            if d > 0.0 {
                Ok(d)
            } else {
                Err(Error::Invalid(format!("m_dot/rho_F must be positive, got {d}")))
            }
        }
        (None, None) => Err(Error::MissingInput(
            "neither V_a nor m_dot supplied; one is required".into(),
        )),
    }
}

/// The radiative fraction chi of the correlation: ((1 - e^{-K D}) / sqrt(D))^0.61.
pub fn chi(k_ext: f64, d: f64) -> f64 {
    let absorbed = -(-k_ext * d).exp_m1(); // 1 - e^{-KD} without cancellation
    (absorbed / d.sqrt()).powf(0.61)
}

/// Net heat feedback from the flame to the pool surface (W/m^2):
///
/// q_s = (4 chi / pi) * rho_inf * C_p * sqrt(g * T_inf^f) * (T_f - T_inf^f) * sqrt(D)
///
/// The correlation as printed in its source omits g and does not resolve to
/// W/m^2; including sqrt(g) under the root restores the units. Setting
/// `env.g = 1.0` recovers the printed form (g*T_inf^f -> T_inf^f), which is
/// what strict-paper mode does at the CLI.
pub fn flame_feedback(env: &FlameEnvironment, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Invalid(format!("pool diameter must be positive, got {d}")));
    }
    let c = chi(env.k_ext, d);
    Ok(4.0 / std::f64::consts::PI
        * c
        * env.rho_inf
        * env.c_p
        * (env.g * env.t_inf_f).sqrt()
        * (env.t_f - env.t_inf_f)
        * d.sqrt())
}

/// Flame feedback with the chi factor pinned by the caller instead of
/// evaluated from the extinction correlation. The D^(1/2) scaling audits
/// use this: the closing scaling chain treats chi as constant.
pub fn flame_feedback_fixed_chi(env: &FlameEnvironment, chi: f64, d: f64) -> f64 {
    4.0 / std::f64::consts::PI
        * chi
        * env.rho_inf
        * env.c_p
        * (env.g * env.t_inf_f).sqrt()
        * (env.t_f - env.t_inf_f)
        * d.sqrt()
}

/// Splits the incident surface flux into the vaporization sink and the
/// net conducted flux Phi = F - rho_F H_v V_a.
///
/// Phi <= 0 is a flagged result, not an error: it means vaporization
/// consumes at least the whole incident flux.
pub fn flux_balance(scenario: &Scenario) -> Result<FluxBalance> {
    let v_a = regression_velocity(scenario)?;
    let q_vap = scenario.fuel.rho_f * scenario.fuel.h_v * v_a;
    let phi = scenario.f_flux - q_vap;
    Ok(FluxBalance {
        f_flux: scenario.f_flux,
        q_vap,
        phi,
        q_c: phi,
        flux_deficit: phi <= 0.0,
    })
}

/// Every dimensionless group used by the solutions and predictors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessGroups {
    /// Pseudo Peclet number N_DHS = y0 V_a / a_F
    pub n_dhs: f64,
    /// Stefan number Ste = C_pF (T_s - T_inf) / H_v
    pub ste: f64,
    /// Bouguer number Bu = mu y0 (optical thickness of the layer)
    pub bu: f64,
    /// Radiation-conduction parameter N0 = F y0 / (lambda_F (T_s - T_inf))
    pub n0: f64,
    /// Alias of N0 (identical definition, kept under its alternate name)
    pub b_sa: f64,
    /// H_p = F / (rho_F H_v V_a)
    pub h_p: f64,
    /// Flux number B_F = 1 - F/Phi, computed exactly from the flux balance
    pub b_f: f64,
    /// Pulse magnitude N_p = N0 / N_DHS
    pub n_p: f64,
    /// Dimensionless residual fuel depth delta_F = y_F / y0
    pub delta_f: f64,
    /// t0 = y0^2 / a_F, retained so Fourier numbers can be evaluated
    pub t0: f64,
}

impl DimensionlessGroups {
    /// Fourier number at time `t`: Fo = a_F t / y0^2.
    pub fn fo(&self, t: f64) -> f64 {
        t / self.t0
    }

    /// The flux number in the form the source prints it, B_F = 1 - 1/H_p.
    /// The printed chain is not algebraically exact; `b_f` holds the exact
    /// value 1 - F/Phi = 1/(1 - H_p). This accessor exists for reproduction
    /// against the printed expression only.
    pub fn b_f_paper(&self) -> f64 {
        1.0 - 1.0 / self.h_p
    }
}

/// Computes every dimensionless group for a scenario.
pub fn dimensionless_groups(scenario: &Scenario) -> Result<DimensionlessGroups> {
    let v_a = regression_velocity(scenario)?;
    let fuel = &scenario.fuel;
    let dt = scenario.delta_t();
    let n_dhs = scenario.y0 * v_a / fuel.a_f;
    let ste = fuel.c_pf * dt / fuel.h_v;
    let bu = fuel.mu * scenario.y0;
    let n0 = scenario.f_flux * scenario.y0 / (fuel.lambda_f * dt);
    let h_p = scenario.f_flux / (fuel.rho_f * fuel.h_v * v_a);
    let balance = flux_balance(scenario)?;
    let b_f = 1.0 - balance.f_flux / balance.phi;
    let groups = DimensionlessGroups {
        n_dhs,
        ste,
        bu,
        n0,
        b_sa: n0,
        h_p,
        b_f,
        n_p: n0 / n_dhs,
        delta_f: scenario.delta_f(),
        t0: scenario.y0 * scenario.y0 / fuel.a_f,
    };
    debug_assert!(
        (groups.h_p * groups.n_dhs - groups.b_sa * groups.ste).abs()
            <= 1e-12 * (groups.b_sa * groups.ste).abs(),
        "H_p N_DHS = B_SA Ste identity violated"
    );
    Ok(groups)
}

/// Characteristic time, length, and velocity scales of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicScales {
    /// Thermal diffusion time t0 = y0^2 / a_F (s)
    pub t0: f64,
    /// Complete-combustion time tau0 = y0 / V_a (s)
    pub tau0: f64,
    /// Diffusion time of the current depth, t0^h = y_F^2 / a_F (s)
    pub t0_h: f64,
    /// Flux length scale L0 = lambda_F (T_s - T_inf) / F (m)
    pub l0: f64,
    /// Hypothetical velocity U0 = y0 / t0 = a_F / y0 (m/s)
    pub u0: f64,
    /// Heat penetration depth y_p0 = a_F / V_a (m)
    pub y_p0: f64,
    /// Inputs retained for downstream closed forms
    pub a_f: f64,
    pub v_a: f64,
    pub y0: f64,
}

/// Computes the characteristic scales of a scenario.
pub fn characteristic_scales(scenario: &Scenario) -> Result<CharacteristicScales> {
    let v_a = regression_velocity(scenario)?;
    let a_f = scenario.fuel.a_f;
    let y0 = scenario.y0;
    let t0 = y0 * y0 / a_f;
    Ok(CharacteristicScales {
        t0,
        tau0: y0 / v_a,
        t0_h: scenario.y_f * scenario.y_f / a_f,
        l0: scenario.fuel.lambda_f * scenario.delta_t() / scenario.f_flux,
        u0: y0 / t0,
        y_p0: a_f / v_a,
        a_f,
        v_a,
        y0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn test_fuel() -> FuelProperties {
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

    fn test_scenario() -> Scenario {
        Scenario::new(
            test_fuel(),
            0.15,
            0.01,
            293.0,
            Some(1e-5),
            None,
            5e3,
            Some(0.335),
        )
        .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn regression_velocity_from_mass_rate() {
        // Table-2 style: m_dot such that m_dot / rho_F = 1.35e-5 m/s
        let mut s = test_scenario();
        s.v_a = None;
        s.m_dot = Some(1.35e-5 * 800.0);
        assert!(rel(regression_velocity(&s).unwrap(), 1.35e-5) < 1e-14);
    }

    #[test]
    fn regression_velocity_passthrough_and_hand_division() {
        let s = test_scenario();
        assert_eq!(regression_velocity(&s).unwrap(), 1e-5);

        let mut s = test_scenario();
        s.v_a = None;
        s.m_dot = Some(8e-3); // 8e-3 / 800 = 1e-5
        assert!(rel(regression_velocity(&s).unwrap(), 1e-5) < 1e-14);
    }

    #[test]
    fn regression_velocity_errors() {
        let mut s = test_scenario();
        s.v_a = None;
        s.m_dot = None;
        assert!(matches!(regression_velocity(&s), Err(Error::MissingInput(_))));

        let mut s = test_scenario();
        s.v_a = Some(1e-5);
        s.m_dot = Some(8.5e-3); // implies 1.0625e-5, 6% off
        assert!(matches!(regression_velocity(&s), Err(Error::Conflict(_))));

        // both supplied, consistent within 1%: the velocity wins
        let mut s = test_scenario();
        s.v_a = Some(1e-5);
        s.m_dot = Some(8.004e-3);
        assert_eq!(regression_velocity(&s).unwrap(), 1e-5);
    }

    #[test]
    fn chi_direct_evaluation() {
        // hand evaluation of ((1 - e^-0.15)/0.15^0.5)^0.61
        assert!(rel(chi(1.0, 0.15), 0.5359042201770569) < 1e-12);
    }

    #[test]
    fn chi_limits() {
        // K*D -> infinity: chi -> D^-0.305
        assert!(rel(chi(1e9, 0.15), 0.15f64.powf(-0.305)) < 1e-12);
        // K = 0: nothing absorbed, chi = 0
        assert_eq!(chi(0.0, 0.15), 0.0);
    }

    #[test]
    fn flame_feedback_zero_extinction() {
        let mut env = FlameEnvironment::default();
        env.k_ext = 0.0; // limit case, bypasses validate() deliberately
        assert_eq!(flame_feedback(&env, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn flame_feedback_monotone_in_diameter() {
        let env = FlameEnvironment::default();
        let mut prev = 0.0;
        for i in 1..=60 {
            // K*D >= 1 throughout: D from 1/K upward
            let d = (1.0 / env.k_ext) * (1.0 + i as f64 * 0.5);
            let f = flame_feedback(&env, d).unwrap();
            assert!(f > prev, "feedback must increase with D at K*D >= 1");
            prev = f;
        }
    }

    #[test]
    fn flame_feedback_strict_printed_form_differs_by_sqrt_g() {
        let env = FlameEnvironment::default();
        let mut printed = env.clone();
        printed.g = 1.0;
        let full = flame_feedback(&env, 0.5).unwrap();
        let bare = flame_feedback(&printed, 0.5).unwrap();
        assert!(rel(full, bare * 9.81f64.sqrt()) < 1e-12);
    }

    #[test]
    fn flux_balance_hand_arithmetic() {
        // 5000 - 800 * 3e5 * 1e-5 = 2600
        let b = flux_balance(&test_scenario()).unwrap();
        assert!(rel(b.phi, 2.6e3) < 1e-12);
        assert_eq!(b.q_c, b.phi);
        assert!(!b.flux_deficit);
        // H_p from the same inputs: 5000 / 2400
        let g = dimensionless_groups(&test_scenario()).unwrap();
        assert!(rel(g.h_p, 5000.0 / 2400.0) < 1e-12);
    }

    #[test]
    fn flux_balance_deficit_flag() {
        let mut s = test_scenario();
        s.f_flux = 800.0 * 3e5 * 1e-5; // exactly the vaporization sink
        let b = flux_balance(&s).unwrap();
        assert_eq!(b.phi, 0.0);
        assert!(b.flux_deficit);
    }

    #[test]
    fn groups_toluene_n_dhs() {
        // a_F = 1.03e-7, y0 = 10 mm, V_a = 1.35e-5 -> N_DHS = 1.31
        // (the source table prints 1.35; agreement within 5%)
        let fuel = FuelProperties {
            name: "toluene".into(),
            a_f: 1.03e-7,
            rho_f: 866.0,
            c_pf: 1700.0,
            lambda_f: 1.03e-7 * 866.0 * 1700.0,
            h_v: 331200.0,
            mu: 500.0,
            t_s: 383.0,
        };
        let s = Scenario::new(fuel, 0.048, 0.010, 293.0, Some(1.35e-5), None, 5e3, None).unwrap();
        let g = dimensionless_groups(&s).unwrap();
        assert!(rel(g.n_dhs, 1.3107) < 1e-3);
        assert!(rel(g.n_dhs, 1.35) < 0.05);
        // Ste round trip: the ratio implied by 0.462 at (293, 383) reproduces it
        let ratio = 0.462 / 90.0;
        let mut fuel2 = s.fuel.clone();
        fuel2.h_v = fuel2.c_pf / ratio;
        let s2 = Scenario::new(fuel2, 0.048, 0.010, 293.0, Some(1.35e-5), None, 5e3, None).unwrap();
        let g2 = dimensionless_groups(&s2).unwrap();
        assert!(rel(g2.ste, 0.462) < 1e-12);
    }

    #[test]
    fn groups_heating_oil_bouguer() {
        // mu = 262 1/m, y0 = 19 mm -> Bu = 4.978 (table prints 4.97)
        let mut s = test_scenario();
        s.fuel.mu = 262.0;
        s.y0 = 0.019;
        s.y_f = 0.019;
        let g = dimensionless_groups(&s).unwrap();
        assert!(rel(g.bu, 4.978) < 1e-12);
        assert!(rel(g.bu, 4.97) < 0.05);
    }

    #[test]
    fn group_identities() {
        // H_p N_DHS = B_SA Ste and N_p N_DHS = N0 across a parameter sweep
        for i in 0..50 {
            let mut s = test_scenario();
            s.y0 = 0.002 + 1e-3 * i as f64;
            s.y_f = s.y0;
            s.f_flux = 1e3 + 700.0 * i as f64;
            s.v_a = Some(5e-6 + 4e-7 * i as f64);
            let g = dimensionless_groups(&s).unwrap();
            assert!(rel(g.h_p * g.n_dhs, g.b_sa * g.ste) < 1e-12);
            assert!(rel(g.n_p * g.n_dhs, g.n0) < 1e-12);
            // exact B_F equals 1/(1 - H_p) whenever H_p != 1
            if (g.h_p - 1.0).abs() > 1e-9 {
                assert!(rel(g.b_f, 1.0 / (1.0 - g.h_p)) < 1e-12);
            }
        }
    }

    #[test]
    fn groups_are_pure() {
        let s = test_scenario();
        let a = dimensionless_groups(&s).unwrap();
        let b = dimensionless_groups(&s).unwrap();
        assert_eq!(a, b, "identical inputs must give bit-identical groups");
    }

    #[test]
    fn scales_heating_oil() {
        // y0 = 19 mm, V_a = 1e-5 -> tau0 = 1900 s
        let mut s = test_scenario();
        s.y0 = 0.019;
        s.y_f = 0.019;
        let sc = characteristic_scales(&s).unwrap();
        assert!(rel(sc.tau0, 1900.0) < 1e-12);

        // y0 = 10 mm, a_F = 1e-7 -> t0 = 1000 s
        let s = test_scenario();
        let sc = characteristic_scales(&s).unwrap();
        assert!(rel(sc.t0, 1000.0) < 1e-12);
        assert!(rel(sc.u0, sc.a_f / sc.y0) < 1e-12);

        // heating oil a_F = 0.877e-7, V_a = 1.096e-5 -> y_p0 = 8.0 mm
        let mut s = test_scenario();
        s.fuel.a_f = 0.877e-7;
        s.fuel.lambda_f = 0.877e-7 * s.fuel.rho_f * s.fuel.c_pf;
        s.v_a = Some(1.096e-5);
        let sc = characteristic_scales(&s).unwrap();
        assert!(rel(sc.y_p0, 8.0e-3) < 2e-3);
    }

    #[test]
    fn fuel_record_consistency_rejected() {
        let mut f = test_fuel();
        f.lambda_f *= 1.10; // 10% off the implied conductivity
        assert!(matches!(f.validate(), Err(Error::Invalid(_))));
        let mut f = test_fuel();
        f.mu = -1.0;
        assert!(f.validate().is_err());
    }

    #[test]
    fn scenario_validation() {
        let mut s = test_scenario();
        s.theta_b0 = Some(1.0);
        assert!(s.validate().is_err());
        let mut s = test_scenario();
        s.y_f = s.y0 * 1.5;
        assert!(s.validate().is_err());
        let mut s = test_scenario();
        s.t_inf = 600.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn fourier_evaluator() {
        let g = dimensionless_groups(&test_scenario()).unwrap();
        // t0 = 1000 s, so Fo(500) = 0.5
        assert!(rel(g.fo(500.0), 0.5) < 1e-12);
    }
}
