//! Boilover-onset predictors.
//!
//! Problem A inverts the exponential interface profile for the Fourier
//! number at onset; problem B is its algebraic inverse. The scaled variant
//! applies the small-exponent series steps. Two simplified closed forms
//! cover the limiting heating regimes: conduction-dominated thick layers
//! (valid for N_DHS > 1) and radiation-dominated thin layers. Regime
//! classification rests on the critical fuel depth y_crit = a_F / V_a with
//! a transition band (0.5, 2.5) * y_crit around it.

use crate::corephys::{
    dimensionless_groups, regression_velocity, CharacteristicScales, DimensionlessGroups,
    Scenario,
};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Onset temperature reported for the Garo experiments.
pub const THETA_B0_GARO: f64 = 0.335;
/// Onset temperature reported for the Koseki experiments.
pub const THETA_B0_KOSEKI: f64 = 0.432;
/// Average relative thickness of the residual fuel layer used by the
/// radiation closed form; 0.335/0.4 gives its ~0.84 prefactor.
pub const RESIDUAL_FUEL_FRACTION: f64 = 0.4;
/// Transition band around y_crit, in units of y_crit. The edges come from
/// the observed agreement limits of the two regime formulas; they are
/// configuration constants, not claims of precision.
pub const TRANSITION_BAND: (f64, f64) = (0.5, 2.5);
/// Series step of the scaled problem A degrades above this N_DHS * delta_F.
pub const SCALED_SERIES_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ProblemA,
    ProblemB,
    ScaledA,
    Conduction,
    RadiationExact,
    RadiationUnitPrefactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    ThinLayer,
    ThickLayer,
    Transition,
}

/// Prefactor convention for the radiation-regime estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiationMode {
    /// t_B0 = (Theta_B0 / residual fraction) (1/Bu) t0, the ~0.84 prefactor
    Exact084,
    /// t_B0 = t0 / Bu, prefactor taken as unity by convention
    Unity,
}

/// One predictor outcome. `Fo_e = t_B0 a_F / y0^2` and `U_T = y0 / t_B0`
/// hold whenever the fields are populated.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionResult {
    pub method: Method,
    #[serde(rename = "t_B0_s")]
    pub t_b0: Option<f64>,
    #[serde(rename = "Fo_e")]
    pub fo_e: Option<f64>,
    #[serde(rename = "theta_B0")]
    pub theta_b0: Option<f64>,
    pub regime: Regime,
    #[serde(rename = "U_T_m_per_s")]
    pub u_t: Option<f64>,
    pub warnings: Vec<String>,
}

impl PredictionResult {
    fn from_fo_e(
        method: Method,
        fo_e: f64,
        t0: f64,
        y0: f64,
        theta_b0: Option<f64>,
        regime: Regime,
        warnings: Vec<String>,
    ) -> Self {
        let t_b0 = fo_e * t0;
        PredictionResult {
            method,
            t_b0: Some(t_b0),
            fo_e: Some(fo_e),
            theta_b0,
            regime,
            u_t: if t_b0 > 0.0 { Some(y0 / t_b0) } else { None },
            warnings,
        }
    }
}

/// Regime classification report.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    /// Critical fuel depth a_F / V_a (m)
    pub y_crit: f64,
    pub n_dhs: f64,
    pub bu: f64,
    pub classification: Regime,
    /// (lower, upper) transition band edges in meters
    pub transition_band: (f64, f64),
}

// core algebra on plain numbers, shared by the operations and the sweeps

/// A_B0 = Theta_B0 / (N_p e^{-N_DHS delta_F}).
pub fn a_b0(theta_b0: f64, n_p: f64, n_dhs: f64, delta_f: f64) -> f64 {
    theta_b0 / (n_p * (-n_dhs * delta_f).exp())
}

/// Fo^e = ln(A_B0) / N_DHS^2.
pub fn fo_e_from_a_b0(a_b0: f64, n_dhs: f64) -> f64 {
    a_b0.ln() / (n_dhs * n_dhs)
}

/// B_B0 = N_p e^{-N_DHS delta_F}.
pub fn b_b0(n_p: f64, n_dhs: f64, delta_f: f64) -> f64 {
    n_p * (-n_dhs * delta_f).exp()
}

/// Theta_B0 = B_B0 e^{N_DHS^2 Fo^e}.
pub fn theta_b0_from_fo_e(fo_e: f64, n_p: f64, n_dhs: f64, delta_f: f64) -> f64 {
    b_b0(n_p, n_dhs, delta_f) * (n_dhs * n_dhs * fo_e).exp()
}

/// Scaled A_B0 = Theta_B0 H_p / (N0 delta_F).
pub fn scaled_a_b0(theta_b0: f64, h_p: f64, n0: f64, delta_f: f64) -> f64 {
    theta_b0 * h_p / (n0 * delta_f)
}

/// Scaled Fo^e with the ln(x) = x - 1 step applied: (A_B0 - 1) / N_DHS^2.
pub fn scaled_fo_e(a_b0: f64, n_dhs: f64) -> f64 {
    (a_b0 - 1.0) / (n_dhs * n_dhs)
}

/// Dimensional form of the scaling chain: t_B0 = (a_F / V_a^2) H_p.
/// With fixed fuel and burning rate this is proportional to the surface
/// flux, hence to D^(1/2) when chi is held constant.
pub fn d_scaling_t_b0(a_f: f64, v_a: f64, h_p: f64) -> f64 {
    a_f / (v_a * v_a) * h_p
}

/// Problem A: time to boilover from a known onset temperature.
pub fn predict_problem_a(
    scenario: &Scenario,
    groups: &DimensionlessGroups,
) -> Result<PredictionResult> {
    let theta = scenario
        .theta_b0
        .ok_or_else(|| Error::MissingInput("problem A requires theta_B0".into()))?;
    if !(groups.n_dhs > 0.0) || !(groups.n_p > 0.0) {
        return Err(Error::InvalidRegime(format!(
            "problem A needs N_DHS > 0 and N_p > 0, got {} and {}",
            groups.n_dhs, groups.n_p
        )));
    }
    let regime = classify_regime(scenario)?.classification;
    let a = a_b0(theta, groups.n_p, groups.n_dhs, groups.delta_f);
    if a < 1.0 {
        return Ok(PredictionResult {
            method: Method::ProblemA,
            t_b0: None,
            fo_e: None,
            theta_b0: Some(theta),
            regime,
            u_t: None,
            warnings: vec![format!(
                "nonpositive_log: A_B0 = {a:.4} <= 1, onset temperature already exceeded at t = 0"
            )],
        });
    }
    let fo_e = fo_e_from_a_b0(a, groups.n_dhs);
    Ok(PredictionResult::from_fo_e(
        Method::ProblemA,
        fo_e,
        groups.t0,
        scenario.y0,
        Some(theta),
        regime,
        Vec::new(),
    ))
}

/// Problem B: interface temperature at a known Fourier number; the exact
/// inverse of problem A.
pub fn predict_problem_b(
    scenario: &Scenario,
    groups: &DimensionlessGroups,
    fo_e: f64,
) -> Result<PredictionResult> {
    if fo_e < 0.0 {
        return Err(Error::Invalid(format!("Fo_e must be nonnegative, got {fo_e}")));
    }
    let theta = theta_b0_from_fo_e(fo_e, groups.n_p, groups.n_dhs, groups.delta_f);
    let regime = classify_regime(scenario)?.classification;
    Ok(PredictionResult::from_fo_e(
        Method::ProblemB,
        fo_e,
        groups.t0,
        scenario.y0,
        Some(theta),
        regime,
        Vec::new(),
    ))
}

/// Scaled problem A: series approximations of the exponent and the
/// logarithm applied, per the small-N_DHS scaling analysis.
pub fn scaled_problem_a(
    scenario: &Scenario,
    groups: &DimensionlessGroups,
) -> Result<PredictionResult> {
    let theta = scenario
        .theta_b0
        .ok_or_else(|| Error::MissingInput("scaled problem A requires theta_B0".into()))?;
    let mut warnings = Vec::new();
    let n_delta = groups.n_dhs * groups.delta_f;
    if n_delta > SCALED_SERIES_THRESHOLD {
        warnings.push(format!(
            "series_step: N_DHS * delta_F = {n_delta:.3} exceeds {SCALED_SERIES_THRESHOLD}, the series approximation degrades"
        ));
    }
    let regime = classify_regime(scenario)?.classification;
    let a = scaled_a_b0(theta, groups.h_p, groups.n0, groups.delta_f);
    if a < 1.0 {
        warnings.push(format!(
            "nonpositive_log: scaled A_B0 = {a:.4} <= 1, onset temperature already exceeded at t = 0"
        ));
        return Ok(PredictionResult {
            method: Method::ScaledA,
            t_b0: None,
            fo_e: None,
            theta_b0: Some(theta),
            regime,
            u_t: None,
            warnings,
        });
    }
    let fo_e = scaled_fo_e(a, groups.n_dhs);
    Ok(PredictionResult::from_fo_e(
        Method::ScaledA,
        fo_e,
        groups.t0,
        scenario.y0,
        Some(theta),
        regime,
        warnings,
    ))
}

/// Conduction-dominated estimate t_B0 = tau0 (1 - 1/N_DHS), valid for
/// N_DHS > 1. The Koseki wave follows as U_T = V_a N_DHS / (N_DHS - 1).
pub fn conduction_t_b0(
    groups: &DimensionlessGroups,
    scales: &CharacteristicScales,
) -> Result<PredictionResult> {
    let n = groups.n_dhs;
    if !(n > 1.0) {
        return Err(Error::InvalidRegime(format!(
            "conduction estimate requires N_DHS > 1, got {n:.3}"
        )));
    }
    let t_b0 = scales.tau0 * (1.0 - 1.0 / n);
    Ok(PredictionResult {
        method: Method::Conduction,
        t_b0: Some(t_b0),
        fo_e: Some(t_b0 / groups.t0),
        theta_b0: None,
        regime: Regime::ThickLayer,
        u_t: Some(scales.y0 / t_b0),
        warnings: Vec::new(),
    })
}

/// Radiation-dominated estimate. Unity mode gives t_B0 = t0 / Bu; the
/// exact mode carries the Theta_B0/residual-fraction prefactor (~0.84).
/// N_DHS < 1 is the recommended validity range; a warning marks runs
/// outside it.
pub fn radiation_t_b0(
    scenario: &Scenario,
    groups: &DimensionlessGroups,
    scales: &CharacteristicScales,
    mode: RadiationMode,
) -> Result<PredictionResult> {
    if !(groups.bu > 0.0) {
        return Err(Error::InvalidRegime(format!(
            "radiation estimate requires Bu > 0, got {}",
            groups.bu
        )));
    }
    let mut warnings = Vec::new();
    if groups.n_dhs >= 1.0 {
        warnings.push(format!(
            "regime: N_DHS = {:.3} >= 1, outside the radiation-dominated range",
            groups.n_dhs
        ));
    }
    let (method, t_b0, theta) = match mode {
        RadiationMode::Unity => (
            Method::RadiationUnitPrefactor,
            scales.t0 / groups.bu,
            None,
        ),
        RadiationMode::Exact084 => {
            let theta = scenario.theta_b0.unwrap_or(THETA_B0_GARO);
            (
                Method::RadiationExact,
                theta / RESIDUAL_FUEL_FRACTION * scales.t0 / groups.bu,
                Some(theta),
            )
        }
    };
    Ok(PredictionResult {
        method,
        t_b0: Some(t_b0),
        fo_e: Some(t_b0 / groups.t0),
        theta_b0: theta,
        regime: Regime::ThinLayer,
        u_t: Some(scales.y0 / t_b0),
        warnings,
    })
}

/// Classifies a scenario by the critical fuel depth y_crit = a_F / V_a.
pub fn classify_regime(scenario: &Scenario) -> Result<RegimeReport> {
    let v_a = regression_velocity(scenario)?;
    let y_crit = scenario.fuel.a_f / v_a;
    let groups = dimensionless_groups(scenario)?;
    let band = (TRANSITION_BAND.0 * y_crit, TRANSITION_BAND.1 * y_crit);
    let classification = if scenario.y0 > band.1 {
        Regime::ThickLayer
    } else if scenario.y0 < band.0 {
        Regime::ThinLayer
    } else {
        Regime::Transition
    };
    Ok(RegimeReport {
        y_crit,
        n_dhs: groups.n_dhs,
        bu: groups.bu,
        classification,
        transition_band: band,
    })
}

/// Classifies the regime and dispatches to the matching simplified
/// predictor; in the transition band both estimates are returned with a
/// band annotation. A problem-A result is attached whenever theta_B0 is
/// available. Sub-predictor regime errors become warnings.
pub fn predict_auto(scenario: &Scenario) -> Result<Vec<PredictionResult>> {
    let report = classify_regime(scenario)?;
    let groups = dimensionless_groups(scenario)?;
    let scales = crate::corephys::characteristic_scales(scenario)?;
    let mut results = Vec::new();
    let band_note = format!(
        "transition: y0 = {:.4} m inside the band ({:.4}, {:.4}) m around y_crit = {:.4} m",
        scenario.y0, report.transition_band.0, report.transition_band.1, report.y_crit
    );

    let push_conduction = |results: &mut Vec<PredictionResult>, annotate: bool| {
        match conduction_t_b0(&groups, &scales) {
            Ok(mut r) => {
                if annotate {
                    r.regime = Regime::Transition;
                    r.warnings.push(band_note.clone());
                }
                results.push(r);
            }
            Err(e) => results.push(PredictionResult {
                method: Method::Conduction,
                t_b0: None,
                fo_e: None,
                theta_b0: None,
                regime: report.classification,
                u_t: None,
                warnings: vec![format!("conduction estimate unavailable: {e}")],
            }),
        }
    };
    let push_radiation = |results: &mut Vec<PredictionResult>, annotate: bool| {
        match radiation_t_b0(scenario, &groups, &scales, RadiationMode::Unity) {
            Ok(mut r) => {
                if annotate {
                    r.regime = Regime::Transition;
                    r.warnings.push(band_note.clone());
                }
                results.push(r);
            }
            Err(e) => results.push(PredictionResult {
                method: Method::RadiationUnitPrefactor,
                t_b0: None,
                fo_e: None,
                theta_b0: None,
                regime: report.classification,
                u_t: None,
                warnings: vec![format!("radiation estimate unavailable: {e}")],
            }),
        }
    };

    match report.classification {
        Regime::ThickLayer => push_conduction(&mut results, false),
        Regime::ThinLayer => push_radiation(&mut results, false),
        Regime::Transition => {
            push_conduction(&mut results, true);
            push_radiation(&mut results, true);
        }
    }
    if scenario.theta_b0.is_some() {
        match predict_problem_a(scenario, &groups) {
            Ok(r) => results.push(r),
            Err(e) => results.push(PredictionResult {
                method: Method::ProblemA,
                t_b0: None,
                fo_e: None,
                theta_b0: scenario.theta_b0,
                regime: report.classification,
                u_t: None,
                warnings: vec![format!("problem A unavailable: {e}")],
            }),
        }
    }
    Ok(results)
}

/// Koseki wave velocity derived from a prediction, with the conduction
/// closed form and the D^(1/2) scaling-chain estimate attached as audit
/// annotations.
#[derive(Debug, Clone, Serialize)]
pub struct KosekiVelocity {
    /// U_T = y0 / t_B0 (m/s)
    pub u_t: f64,
    /// V_a N_DHS / (N_DHS - 1), present when N_DHS > 1
    pub conduction_form: Option<f64>,
    /// t_B0 from the dimensional scaling chain (a_F/V_a^2) H_p, which is
    /// proportional to D^(1/2) at constant chi
    pub d_scaling_t_b0: f64,
    pub notes: Vec<String>,
}

pub fn koseki_velocity(
    prediction: &PredictionResult,
    scenario: &Scenario,
) -> Result<KosekiVelocity> {
    let t_b0 = prediction
        .t_b0
        .ok_or_else(|| Error::MissingInput("prediction carries no t_B0".into()))?;
    let groups = dimensionless_groups(scenario)?;
    let v_a = regression_velocity(scenario)?;
    let conduction_form = if groups.n_dhs > 1.0 {
        Some(v_a * groups.n_dhs / (groups.n_dhs - 1.0))
    } else {
        None
    };
    let chain = d_scaling_t_b0(scenario.fuel.a_f, v_a, groups.h_p);
    let mut notes = vec![format!(
        "scaling chain t_B0 = (a_F/V_a^2) H_p = {chain:.1} s; proportional to D^(1/2) at constant chi"
    )];
    if conduction_form.is_none() {
        notes.push("conduction closed form needs N_DHS > 1".into());
    }
    Ok(KosekiVelocity {
        u_t: scenario.y0 / t_b0,
        conduction_form,
        d_scaling_t_b0: chain,
        notes,
    })
}

/// CSV row form of a prediction, used by sweeps and reports.
pub fn prediction_csv_header() -> &'static str {
    "method,t_B0_s,Fo_e,theta_B0,regime,U_T_m_per_s,warnings"
}

pub fn prediction_csv_row(r: &PredictionResult) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{}",
        serde_json::to_value(r.method).unwrap().as_str().unwrap(),
        opt(r.t_b0),
        opt(r.fo_e),
        opt(r.theta_b0),
        serde_json::to_value(r.regime).unwrap().as_str().unwrap(),
        opt(r.u_t),
        csv_quote(&r.warnings.join("; ")),
    )
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Ordered map form used by machine-readable sweep output.
pub fn prediction_fields(r: &PredictionResult) -> BTreeMap<String, serde_json::Value> {
    let mut m = BTreeMap::new();
    m.insert("method".into(), serde_json::to_value(r.method).unwrap());
    m.insert("t_B0_s".into(), serde_json::to_value(r.t_b0).unwrap());
    m.insert("Fo_e".into(), serde_json::to_value(r.fo_e).unwrap());
    m.insert("theta_B0".into(), serde_json::to_value(r.theta_b0).unwrap());
    m.insert("regime".into(), serde_json::to_value(r.regime).unwrap());
    m.insert("U_T_m_per_s".into(), serde_json::to_value(r.u_t).unwrap());
    m.insert("warnings".into(), serde_json::to_value(&r.warnings).unwrap());
    m
}
