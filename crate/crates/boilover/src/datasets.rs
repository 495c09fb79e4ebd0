//! Experiment-table ingestion and the predictor-vs-experiment comparison
//! harness.
//!
//! Dataset CSV schema (strict):
//!
//! ```text
//! source,fuel,D_m,y0_mm,tB0_s,UT_mm_per_s,Fo_e,Va_mm_per_s,N_DHS,Bu,Ste[,legibility]
//! ```
//!
//! Empty cells mark missing values. The optional trailing `legibility`
//! column (`ok`/`low`) flags rows whose printed source values are
//! internally inconsistent; `low` rows are retained in reports but
//! excluded from hard acceptance gates. Records store the file's raw
//! column values and convert to SI in accessors, so a loaded dataset
//! written back out reproduces its numeric fields bit-exactly.

use crate::corephys::FuelProperties;
use crate::error::{Error, Result};
use crate::predict::{self, Method, Regime};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

const DATASET_HEADER: [&str; 11] = [
    "source",
    "fuel",
    "D_m",
    "y0_mm",
    "tB0_s",
    "UT_mm_per_s",
    "Fo_e",
    "Va_mm_per_s",
    "N_DHS",
    "Bu",
    "Ste",
];

const FUEL_HEADER: [&str; 8] = [
    "name", "a_F", "lambda_F", "rho_F", "C_pF", "H_v", "mu", "T_s",
];

/// Tolerance of the V_a vs N_DHS cross-check; rows outside it are flagged
/// inconsistent but retained.
pub const VELOCITY_CONSISTENCY_TOL: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Legibility {
    Ok,
    Low,
}

/// One experiment row, in the file's units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub source: String,
    pub fuel_name: String,
    /// Pool diameter (m)
    pub d: f64,
    /// Initial depth as printed (mm)
    pub y0_mm: f64,
    /// Experimental time to boilover (s)
    pub t_b0_exp: Option<f64>,
    /// Koseki wave as printed (mm/s)
    pub ut_mm_per_s: Option<f64>,
    pub fo_e_exp: Option<f64>,
    /// Regression velocity as printed (mm/s)
    pub va_mm_per_s: Option<f64>,
    pub n_dhs: Option<f64>,
    pub bu: Option<f64>,
    pub ste: Option<f64>,
    pub legibility: Legibility,
    /// Velocity back-solved from N_DHS during resolution (m/s); never
    /// written back to the file
    pub va_resolved: Option<f64>,
    /// Set when the printed velocity and N_DHS disagree beyond 10%
    pub velocity_inconsistent: bool,
    pub notes: Vec<String>,
}

impl ExperimentRecord {
    /// Initial depth (m).
    pub fn y0(&self) -> f64 {
        self.y0_mm * 1e-3
    }

    /// Koseki wave velocity (m/s).
    pub fn u_t(&self) -> Option<f64> {
        self.ut_mm_per_s.map(|v| v * 1e-3)
    }

    /// Regression velocity (m/s): the file's value, or the back-solved one.
    pub fn v_a(&self) -> Option<f64> {
        self.va_mm_per_s.map(|v| v * 1e-3).or(self.va_resolved)
    }
}

/// Named fuel-property lookup.
#[derive(Debug, Clone, Default)]
pub struct FuelDatabase {
    fuels: BTreeMap<String, FuelProperties>,
}

impl FuelDatabase {
    pub fn get(&self, name: &str) -> Option<&FuelProperties> {
        self.fuels.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.fuels.keys().map(String::as_str)
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| Error::Schema {
                line: 1,
                message: e.to_string(),
            })?
            .iter()
            .map(str::to_string)
            .collect();
        if headers != FUEL_HEADER {
            return Err(Error::Schema {
                line: 1,
                message: format!(
                    "fuel database header must be `{}`, got `{}`",
                    FUEL_HEADER.join(","),
                    headers.join(",")
                ),
            });
        }
        let mut fuels = BTreeMap::new();
        for (idx, row) in reader.records().enumerate() {
            let line = idx + 2;
            let row = row.map_err(|e| Error::Schema {
                line,
                message: e.to_string(),
            })?;
            let num = |i: usize, name: &str| -> Result<f64> {
                row[i].parse::<f64>().map_err(|_| Error::Schema {
                    line,
                    message: format!("column {name}: cannot parse `{}` as a number", &row[i]),
                })
            };
            let fuel = FuelProperties {
                name: row[0].to_string(),
                a_f: num(1, "a_F")?,
                lambda_f: num(2, "lambda_F")?,
                rho_f: num(3, "rho_F")?,
                c_pf: num(4, "C_pF")?,
                h_v: num(5, "H_v")?,
                mu: num(6, "mu")?,
                t_s: num(7, "T_s")?,
            };
            fuel.validate()?;
            fuels.insert(fuel.name.clone(), fuel);
        }
        Ok(FuelDatabase { fuels })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_csv(&std::fs::read_to_string(path)?)
    }

    /// The fuels bundled with the crate.
    pub fn bundled() -> Self {
        Self::parse_csv(include_str!("../data/fuels.csv"))
            .expect("bundled fuel database must parse")
    }
}

/// Representative regression velocities (m/s) recovered from the bundled
/// experiments; used as defaults when a caller names a fuel but supplies
/// no burning rate.
pub fn representative_velocity(fuel_name: &str) -> Option<f64> {
    match fuel_name {
        "heating_oil" => Some(1.1e-5),
        "toluene" => Some(1.35e-5),
        "ethyl_benzene" => Some(1.5e-5),
        "n_decane" => Some(1.19e-5),
        "arabian_light" => Some(3.0e-5),
        _ => None,
    }
}

fn classify_header(headers: &[String]) -> Result<bool> {
    let expected: Vec<&str> = DATASET_HEADER.to_vec();
    let base: Vec<&str> = headers.iter().map(String::as_str).collect();
    if base == expected {
        return Ok(false);
    }
    if base.len() == expected.len() + 1
        && base[..expected.len()] == expected[..]
        && base[expected.len()] == "legibility"
    {
        return Ok(true);
    }
    // distinguish a wrong unit suffix on a known quantity from an unknown column
    for h in headers {
        let known = DATASET_HEADER.contains(&h.as_str()) || h == "legibility";
        if known {
            continue;
        }
        for quantity in ["D", "y0", "tB0", "UT", "Va"] {
            if h.starts_with(quantity) {
                return Err(Error::Unit(format!(
                    "column `{h}` carries an undeclared unit; expected `{}`",
                    DATASET_HEADER
                        .iter()
                        .find(|e| e.starts_with(quantity))
                        .unwrap()
                )));
            }
        }
        return Err(Error::Schema {
            line: 1,
            message: format!("unknown column `{h}`"),
        });
    }
    Err(Error::Schema {
        line: 1,
        message: format!(
            "dataset header must be `{}[,legibility]`, got `{}`",
            DATASET_HEADER.join(","),
            headers.join(",")
        ),
    })
}

/// Parses a dataset from CSV text. No fuel lookup happens here; run
/// [`resolve_records`] afterwards to back-solve velocities and set
/// consistency flags.
pub fn parse_experiments_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema {
            line: 1,
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    let has_legibility = classify_header(&headers)?;
    let mut records = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2;
        let row = row.map_err(|e| Error::Schema {
            line,
            message: e.to_string(),
        })?;
        let req = |i: usize, name: &str| -> Result<f64> {
            row[i].parse::<f64>().map_err(|_| Error::Schema {
                line,
                message: format!("column {name}: cannot parse `{}` as a number", &row[i]),
            })
        };
        let opt = |i: usize, name: &str| -> Result<Option<f64>> {
            if row[i].is_empty() {
                Ok(None)
            } else {
                req(i, name).map(Some)
            }
        };
        let legibility = if has_legibility {
            match &row[11] {
                "low" => Legibility::Low,
                "ok" | "" => Legibility::Ok,
                other => {
                    return Err(Error::Schema {
                        line,
                        message: format!("legibility must be ok or low, got `{other}`"),
                    })
                }
            }
        } else {
            Legibility::Ok
        };
        let rec = ExperimentRecord {
            source: row[0].to_string(),
            fuel_name: row[1].to_string(),
            d: req(2, "D_m")?,
            y0_mm: req(3, "y0_mm")?,
            t_b0_exp: opt(4, "tB0_s")?,
            ut_mm_per_s: opt(5, "UT_mm_per_s")?,
            fo_e_exp: opt(6, "Fo_e")?,
            va_mm_per_s: opt(7, "Va_mm_per_s")?,
            n_dhs: opt(8, "N_DHS")?,
            bu: opt(9, "Bu")?,
            ste: opt(10, "Ste")?,
            legibility,
            va_resolved: None,
            velocity_inconsistent: false,
            notes: Vec::new(),
        };
        if !(rec.d > 0.0) || !(rec.y0_mm > 0.0) {
            return Err(Error::Schema {
                line,
                message: "D_m and y0_mm must be positive".into(),
            });
        }
        if let Some(t) = rec.t_b0_exp {
            if !(t > 0.0) {
                return Err(Error::Schema {
                    line,
                    message: "tB0_s must be positive when present".into(),
                });
            }
        }
        records.push(rec);
    }
    Ok(records)
}

pub fn load_experiments(path: &Path) -> Result<Vec<ExperimentRecord>> {
    parse_experiments_csv(&std::fs::read_to_string(path)?)
}

/// Back-solves missing velocities from N_DHS (V_a = N_DHS a_F / y0) and
/// cross-checks supplied velocities against the printed N_DHS; rows off
/// by more than 10% are flagged inconsistent and kept.
pub fn resolve_records(records: &mut [ExperimentRecord], db: &FuelDatabase) {
    for rec in records.iter_mut() {
        let Some(fuel) = db.get(&rec.fuel_name) else {
            rec.notes.push(format!("fuel `{}` not in database", rec.fuel_name));
            continue;
        };
        match (rec.va_mm_per_s, rec.n_dhs) {
            (Some(va_mm), Some(n)) => {
                let recomputed = rec.y0() * va_mm * 1e-3 / fuel.a_f;
                let relerr = (recomputed - n).abs() / n;
                if relerr > VELOCITY_CONSISTENCY_TOL {
                    rec.velocity_inconsistent = true;
                    rec.notes.push(format!(
                        "velocity inconsistent with printed N_DHS: y0 V_a / a_F = {recomputed:.3} vs {n} ({:.0}%)",
                        relerr * 100.0
                    ));
                }
            }
            (None, Some(n)) => {
                let v = n * fuel.a_f / rec.y0();
                rec.va_resolved = Some(v);
                rec.notes
                    .push(format!("velocity back-solved from N_DHS: {v:.3e} m/s"));
            }
            _ => {}
        }
    }
}

/// Writes records back in the dataset schema (with the legibility column).
pub fn save_experiments_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(
        "source,fuel,D_m,y0_mm,tB0_s,UT_mm_per_s,Fo_e,Va_mm_per_s,N_DHS,Bu,Ste,legibility\n",
    );
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.source,
            r.fuel_name,
            r.d,
            r.y0_mm,
            opt(r.t_b0_exp),
            opt(r.ut_mm_per_s),
            opt(r.fo_e_exp),
            opt(r.va_mm_per_s),
            opt(r.n_dhs),
            opt(r.bu),
            opt(r.ste),
            match r.legibility {
                Legibility::Ok => "ok",
                Legibility::Low => "low",
            },
        ));
    }
    out
}

/// All bundled experiment tables, resolved against the bundled fuels.
pub fn bundled_experiments() -> Vec<ExperimentRecord> {
    let db = FuelDatabase::bundled();
    let mut all = Vec::new();
    for text in [
        include_str!("../data/garo_heating_oil.csv"),
        include_str!("../data/arai_thin_layer.csv"),
        include_str!("../data/koseki_crude.csv"),
    ] {
        let mut recs = parse_experiments_csv(text).expect("bundled dataset must parse");
        resolve_records(&mut recs, &db);
        all.extend(recs);
    }
    all
}

/// The transcription sidecar documenting every interpretive choice.
pub fn transcription_notes() -> &'static str {
    include_str!("../data/transcription_notes.md")
}

/// One record with its per-method predictions and experiment/prediction
/// ratios.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub source: String,
    pub fuel: String,
    #[serde(rename = "D_m")]
    pub d: f64,
    pub y0_mm: f64,
    #[serde(rename = "tB0_exp_s")]
    pub t_b0_exp: Option<f64>,
    pub regime: Option<Regime>,
    pub legibility: Legibility,
    /// method name -> predicted t_B0 (s)
    pub predictions: BTreeMap<String, f64>,
    /// method name -> t_B0_exp / t_B0_pred
    pub ratios: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

/// Per-method aggregate over a comparison run.
#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub n_predictions: usize,
    pub n_ratios: usize,
    pub median_ratio: Option<f64>,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    /// ratios inside the broad agreement band [0.7, 1.2]
    pub within_0_7_to_1_2: usize,
    /// ratios inside the strict band [0.9, 1.1]
    pub within_0_9_to_1_1: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub summaries: Vec<MethodSummary>,
}

fn method_name(m: Method) -> String {
    serde_json::to_value(m)
        .unwrap()
        .as_str()
        .unwrap()
        .to_string()
}

/// Runs the requested predictors over every record. Predictions use the
/// record's own printed N_DHS when present (the source's derived columns
/// are only reproducible that way; see the transcription notes), the
/// resolved velocity for tau0, and the fuel database for a_F and mu.
pub fn compare_report(
    records: &[ExperimentRecord],
    methods: &[Method],
    db: &FuelDatabase,
) -> ComparisonReport {
    let mut rows = Vec::new();
    for rec in records {
        let mut row = ComparisonRow {
            source: rec.source.clone(),
            fuel: rec.fuel_name.clone(),
            d: rec.d,
            y0_mm: rec.y0_mm,
            t_b0_exp: rec.t_b0_exp,
            regime: None,
            legibility: rec.legibility,
            predictions: BTreeMap::new(),
            ratios: BTreeMap::new(),
            notes: rec.notes.clone(),
        };
        let Some(fuel) = db.get(&rec.fuel_name) else {
            rows.push(row);
            continue;
        };
        let y0 = rec.y0();
        let t0 = y0 * y0 / fuel.a_f;
        let v_a = rec.v_a();
        if let Some(v) = v_a {
            let y_crit = fuel.a_f / v;
            row.regime = Some(if y0 > predict::TRANSITION_BAND.1 * y_crit {
                Regime::ThickLayer
            } else if y0 < predict::TRANSITION_BAND.0 * y_crit {
                Regime::ThinLayer
            } else {
                Regime::Transition
            });
        }
        for &method in methods {
            let pred = match method {
                Method::Conduction => match (v_a, rec.n_dhs) {
                    (Some(v), printed_n) => {
                        let n = printed_n.unwrap_or(y0 * v / fuel.a_f);
                        if n > 1.0 {
                            Some(y0 / v * (1.0 - 1.0 / n))
                        } else {
                            row.notes.push(format!(
                                "conduction estimate needs N_DHS > 1, got {n:.2}"
                            ));
                            None
                        }
                    }
                    (None, _) => {
                        row.notes.push("conduction estimate needs a velocity".into());
                        None
                    }
                },
                Method::RadiationUnitPrefactor => {
                    let bu = fuel.mu * y0;
                    Some(t0 / bu)
                }
                Method::RadiationExact => {
                    let bu = fuel.mu * y0;
                    Some(predict::THETA_B0_GARO / predict::RESIDUAL_FUEL_FRACTION * t0 / bu)
                }
                other => {
                    row.notes.push(format!(
                        "method {} needs scenario fields the dataset lacks",
                        method_name(other)
                    ));
                    None
                }
            };
            if let Some(t_pred) = pred {
                row.predictions.insert(method_name(method), t_pred);
                if let Some(t_exp) = rec.t_b0_exp {
                    if t_exp > 0.0 && t_pred > 0.0 {
                        row.ratios.insert(method_name(method), t_exp / t_pred);
                    }
                }
            }
        }
        rows.push(row);
    }

    let mut summaries = Vec::new();
    for &method in methods {
        let name = method_name(method);
        let mut ratios: Vec<f64> = rows
            .iter()
            .filter_map(|r| r.ratios.get(&name).copied())
            .collect();
        ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if ratios.is_empty() {
            None
        } else if ratios.len() % 2 == 1 {
            Some(ratios[ratios.len() / 2])
        } else {
            Some((ratios[ratios.len() / 2 - 1] + ratios[ratios.len() / 2]) / 2.0)
        };
        summaries.push(MethodSummary {
            method: name.clone(),
            n_predictions: rows.iter().filter(|r| r.predictions.contains_key(&name)).count(),
            n_ratios: ratios.len(),
            median_ratio: median,
            ratio_min: ratios.first().copied(),
            ratio_max: ratios.last().copied(),
            within_0_7_to_1_2: ratios.iter().filter(|r| (0.7..=1.2).contains(*r)).count(),
            within_0_9_to_1_1: ratios.iter().filter(|r| (0.9..=1.1).contains(*r)).count(),
        });
    }
    ComparisonReport { rows, summaries }
}

/// CSV rendering of a comparison report.
pub fn report_csv(report: &ComparisonReport, methods: &[Method]) -> String {
    let names: Vec<String> = methods.iter().map(|&m| method_name(m)).collect();
    let mut out = String::from("source,fuel,D_m,y0_mm,tB0_exp_s,regime,legibility");
    for n in &names {
        out.push_str(&format!(",tB0_{n}_s,ratio_{n}"));
    }
    out.push_str(",notes\n");
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}",
            r.source,
            r.fuel,
            r.d,
            r.y0_mm,
            fmt(r.t_b0_exp),
            r.regime
                .map(|g| serde_json::to_value(g).unwrap().as_str().unwrap().to_string())
                .unwrap_or_default(),
            match r.legibility {
                Legibility::Ok => "ok",
                Legibility::Low => "low",
            },
        ));
        for n in &names {
            out.push_str(&format!(
                ",{},{}",
                fmt(r.predictions.get(n).copied()),
                fmt(r.ratios.get(n).copied())
            ));
        }
        let notes = r.notes.join("; ");
        if notes.contains(',') || notes.contains('"') {
            out.push_str(&format!(",\"{}\"\n", notes.replace('"', "\"\"")));
        } else {
            out.push_str(&format!(",{notes}\n"));
        }
    }
    out
}
