//! Independent finite-difference reference solver for the front-fixed heat
//! equation with volumetric radiation absorption.
//!
//! In the frame attached to the regressing surface (y measured downward
//! from the surface into the liquid) the solver integrates
//!
//!   dTheta/dt = a_F d2Theta/dy2 + V_a dTheta/dy + S(y),
//!   S(y) = [mu F / (rho_F C_pF (T_s - T_inf))] e^{-mu y},
//!
//! whose steady no-source state under Dirichlet conditions is the closed
//! form e^{-V_a y / a_F}. The medium streams toward the surface at V_a, so
//! the inflow boundary is the deep end; truncating the half-line therefore
//! pins Theta = 0 at the bottom (`FarBc::FarFieldZero`). A finite
//! adiabatic-bottom mode is kept for sensitivity runs.
//!
//! Space: central diffusion plus direction-aware upwind advection (first-
//! or second-order biased stencils). Time: forward Euler under a CFL bound,
//! or a theta-weighted implicit scheme solved by banded LU with partial
//! pivoting and iterative refinement.

use crate::corephys::{flux_balance, regression_velocity, Scenario};
use crate::error::{Error, Result};
use serde::Serialize;

/// Time integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Explicit,
    /// theta in [0.5, 1]: 0.5 Crank-Nicolson, 1 backward Euler
    ImplicitTheta(f64),
}

/// Surface boundary condition selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BcMode {
    /// Prescribed flux with the full incident F conducted (no phase-change sink)
    FluxLinear,
    /// Prescribed flux Phi = F - rho_F H_v V_a (Stefan energy split)
    FluxStefan,
    /// Surface pinned at T_s: Theta(0) = 1
    DirichletTs,
}

/// Treatment of the truncated deep boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FarBc {
    /// Theta = 0 at the bottom: truncation of the semi-infinite domain
    FarFieldZero,
    /// Zero gradient at the bottom: finite insulated layer, for sensitivity runs
    AdiabaticBottom,
}

/// Spatial order of the upwind advection stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdvectionOrder {
    /// First-order upwind; monotone (discrete maximum principle at theta = 1)
    Upwind1,
    /// Second-order upwind-biased; used where observed order matters
    Upwind2,
}

/// Solver configuration.
#[derive(Debug, Clone, Serialize)]
pub struct FDConfig {
    /// Grid cells (n_cells + 1 nodes); at least 16
    pub n_cells: usize,
    /// Computational depth (m); defaults to max(y0, 6 a_F/V_a)
    pub domain_depth: Option<f64>,
    /// Explicit-stability fraction in (0, 1]
    pub dt_safety: f64,
    /// Time horizon (s)
    pub t_end: f64,
    pub scheme: Scheme,
    pub bc_mode: BcMode,
    /// Include the volumetric absorption source
    pub source_on: bool,
    pub far_bc: FarBc,
    pub advection: AdvectionOrder,
    /// Implicit step size (s); defaults to the explicit bound when absent
    pub dt: Option<f64>,
    /// Keep every k-th step in the history (the last step is always kept)
    pub save_every: usize,
}

impl Default for FDConfig {
    fn default() -> Self {
        FDConfig {
            n_cells: 256,
            domain_depth: None,
            dt_safety: 0.4,
            t_end: 100.0,
            scheme: Scheme::ImplicitTheta(1.0),
            bc_mode: BcMode::DirichletTs,
            source_on: false,
            far_bc: FarBc::FarFieldZero,
            advection: AdvectionOrder::Upwind2,
            dt: None,
            save_every: 1,
        }
    }
}

impl FDConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_cells < 16 {
            return Err(Error::Invalid(format!(
                "n_cells must be at least 16, got {}",
                self.n_cells
            )));
        }
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return Err(Error::Invalid(format!(
                "dt_safety must lie in (0, 1], got {}",
                self.dt_safety
            )));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::Invalid(format!("t_end must be positive, got {}", self.t_end)));
        }
        if let Scheme::ImplicitTheta(th) = self.scheme {
            if !(0.5..=1.0).contains(&th) {
                return Err(Error::Invalid(format!(
                    "implicit theta weight must lie in [0.5, 1], got {th}"
                )));
            }
        }
        if self.save_every == 0 {
            return Err(Error::Invalid("save_every must be at least 1".into()));
        }
        Ok(())
    }
}

/// Surface condition in dimensionless form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SurfaceBc {
    /// Theta(0) = 1
    Dirichlet,
    /// dTheta/dy(0) = -grad, with grad = Phi / (lambda_F (T_s - T_inf))
    FluxGradient(f64),
}

/// The dimensionless problem the kernel integrates. `fd_solve` builds one
/// from a scenario; tests may construct it directly (e.g. with v_a = 0).
#[derive(Debug, Clone, Serialize)]
pub struct FdProblem {
    pub a_f: f64,
    /// Regression velocity; the advection term is +v_a dTheta/dy
    pub v_a: f64,
    /// Initial layer depth, for the default domain and probe bookkeeping
    pub y0: f64,
    pub surface: SurfaceBc,
    /// Volumetric source: (mu, s0) with S(y) = s0 e^{-mu y}; None when off
    pub source: Option<(f64, f64)>,
}

/// Full solve history.
#[derive(Debug, Clone)]
pub struct FDSolution {
    /// Saved instants (s), including t = 0 and t_end
    pub times: Vec<f64>,
    /// Node depths (m)
    pub grid: Vec<f64>,
    /// theta[k][i]: profile at times[k]
    pub theta: Vec<Vec<f64>>,
    /// Per-step discrete energy-balance residuals (relative)
    pub energy_audit: Vec<f64>,
    /// Echo of the integrated problem and configuration
    pub problem: FdProblem,
    pub config: FDConfig,
}

impl FDSolution {
    /// Profile value at (depth, saved index), linear in depth.
    pub fn theta_at(&self, k: usize, y: f64) -> f64 {
        let grid = &self.grid;
        let prof = &self.theta[k];
        if y <= grid[0] {
            return prof[0];
        }
        if y >= *grid.last().unwrap() {
            return *prof.last().unwrap();
        }
        let dy = grid[1] - grid[0];
        let i = ((y - grid[0]) / dy).floor() as usize;
        let i = i.min(grid.len() - 2);
        let w = (y - grid[i]) / dy;
        prof[i] * (1.0 - w) + prof[i + 1] * w
    }

    /// Temperature history at a fixed probe depth.
    pub fn interface_theta(&self, y: f64) -> Vec<(f64, f64)> {
        (0..self.times.len())
            .map(|k| (self.times[k], self.theta_at(k, y)))
            .collect()
    }

    pub fn final_profile(&self) -> &[f64] {
        self.theta.last().unwrap()
    }

    /// CSV dump `t_s,y_m,theta` of the saved history.
    pub fn dump_csv(&self) -> String {
        let mut out = String::from("t_s,y_m,theta\n");
        for (k, t) in self.times.iter().enumerate() {
            for (i, y) in self.grid.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", t, y, self.theta[k][i]));
            }
        }
        out
    }

    /// JSON echo of problem + config, emitted alongside every dump.
    pub fn config_echo_json(&self) -> String {
        serde_json::json!({
            "problem": self.problem,
            "config": self.config,
        })
        .to_string()
    }
}

// Banded LU with partial pivoting. Row i holds columns i-KL ..= i+KL+KU
// (the extra KL columns absorb pivoting fill-in).
struct BandedLu {
    n: usize,
    kl: usize,
    width: usize,
    data: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLu {
    /// Factors a banded matrix given by `entry(i, j)` for |i - j| within the
    /// bands (kl below, ku above).
    fn factor(n: usize, kl: usize, ku: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let kuw = kl + ku; // working upper bandwidth after pivoting
        let width = kl + kuw + 1;
        let mut data = vec![0.0; n * width];
        let idx = |i: usize, j: usize| -> usize { i * width + (j + kl - i) };
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + ku).min(n - 1);
            for j in lo..=hi {
                data[idx(i, j)] = entry(i, j);
            }
        }
        let mut piv = vec![0usize; n];
        for k in 0..n {
            // pivot among rows k..k+kl
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = data[idx(k, k)].abs();
            for r in (k + 1)..=last {
                let v = data[idx(r, k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(Error::NonConvergence(format!(
                    "singular system at elimination step {k}"
                )));
            }
            piv[k] = p;
            if p != k {
                let hi = (k + kuw).min(n - 1);
                for j in k..=hi {
                    data.swap(idx(k, j), idx(p, j));
                }
            }
            let pivot = data[idx(k, k)];
            let hi = (k + kuw).min(n - 1);
            for r in (k + 1)..=last {
                let m = data[idx(r, k)] / pivot;
                data[idx(r, k)] = m;
                for j in (k + 1)..=hi {
                    data[idx(r, j)] -= m * data[idx(k, j)];
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            width,
            data,
            piv,
        })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let idx = |i: usize, j: usize| -> usize { i * self.width + (j + self.kl - i) };
        let n = self.n;
        let mut x = rhs.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let last = (k + self.kl).min(n - 1);
            for r in (k + 1)..=last {
                let m = self.data[idx(r, k)];
                x[r] -= m * x[k];
            }
        }
        let kuw = self.width - self.kl - 1;
        for k in (0..n).rev() {
            let hi = (k + kuw).min(n - 1);
            let mut s = x[k];
            for j in (k + 1)..=hi {
                s -= self.data[idx(k, j)] * x[j];
            }
            x[k] = s / self.data[idx(k, k)];
        }
        x
    }
}

/// Sparse row of the semi-discrete operator L: dTheta_i/dt = (L Theta)_i + b_i.
#[derive(Clone, Default)]
struct StencilRow {
    /// (column, coefficient) pairs
    cols: Vec<(usize, f64)>,
    /// Affine contribution (ghost-node constants, volumetric source)
    rhs: f64,
    /// Identity row: value pinned by a Dirichlet condition
    dirichlet: Option<f64>,
}

fn build_operator(problem: &FdProblem, config: &FDConfig, grid: &[f64]) -> Vec<StencilRow> {
    let n = grid.len();
    let dy = grid[1] - grid[0];
    let a = problem.a_f;
    let v = problem.v_a;
    let diff = a / (dy * dy);
    let mut rows = vec![StencilRow::default(); n];

    let source_at = |y: f64| -> f64 {
        match problem.source {
            Some((mu, s0)) => s0 * (-mu * y).exp(),
            None => 0.0,
        }
    };

    // advection term +v dTheta/dy; the transport velocity in the attached
    // frame is -v (toward the surface), so the upwind side is larger y for
    // v > 0 and smaller y for v < 0
    let advect = |row: &mut StencilRow, i: usize| {
        if v == 0.0 {
            return;
        }
        let c = v / dy;
        let forward = v > 0.0;
        match config.advection {
            AdvectionOrder::Upwind1 => {
                if forward {
                    row.cols.push((i, -c));
                    row.cols.push((i + 1, c));
                } else {
                    row.cols.push((i, c));
                    row.cols.push((i - 1, -c));
                }
            }
            AdvectionOrder::Upwind2 => {
                if forward {
                    if i + 2 < n {
                        row.cols.push((i, -1.5 * c));
                        row.cols.push((i + 1, 2.0 * c));
                        row.cols.push((i + 2, -0.5 * c));
                    } else {
                        row.cols.push((i, -c));
                        row.cols.push((i + 1, c));
                    }
                } else if i >= 2 {
                    row.cols.push((i, 1.5 * c));
                    row.cols.push((i - 1, -2.0 * c));
                    row.cols.push((i - 2, 0.5 * c));
                } else {
                    row.cols.push((i, c));
                    row.cols.push((i - 1, -c));
                }
            }
        }
    };

    // surface node
    match problem.surface {
        SurfaceBc::Dirichlet => rows[0].dirichlet = Some(1.0),
        SurfaceBc::FluxGradient(grad) => {
            // ghost Theta_{-1} = Theta_1 + 2 dy grad folds into the stencil
            let row = &mut rows[0];
            row.cols.push((0, -2.0 * diff));
            row.cols.push((1, 2.0 * diff));
            row.rhs += 2.0 * diff * dy * grad + source_at(grid[0]);
            if v > 0.0 {
                // upwind side is i+1 regardless of BC
                row.cols.push((0, -v / dy));
                row.cols.push((1, v / dy));
            } else if v < 0.0 {
                // backward difference through the ghost node
                let c = v / dy;
                row.cols.push((0, c));
                row.cols.push((1, -c));
                row.rhs += -c * 2.0 * dy * grad;
            }
        }
    }

    // interior nodes
    for i in 1..n - 1 {
        let row = &mut rows[i];
        row.cols.push((i - 1, diff));
        row.cols.push((i, -2.0 * diff));
        row.cols.push((i + 1, diff));
        row.rhs += source_at(grid[i]);
        advect(row, i);
    }

    // deep boundary
    match config.far_bc {
        FarBc::FarFieldZero => rows[n - 1].dirichlet = Some(0.0),
        FarBc::AdiabaticBottom => {
            // ghost Theta_{n} = Theta_{n-2}: zero gradient, zero advective slope
            let row = &mut rows[n - 1];
            row.cols.push((n - 2, 2.0 * diff));
            row.cols.push((n - 1, -2.0 * diff));
            row.rhs += source_at(grid[n - 1]);
        }
    }

    rows
}

fn apply_operator(rows: &[StencilRow], theta: &[f64], out: &mut [f64]) {
    for (i, row) in rows.iter().enumerate() {
        if row.dirichlet.is_some() {
            out[i] = 0.0;
            continue;
        }
        let mut s = row.rhs;
        for &(j, c) in &row.cols {
            s += c * theta[j];
        }
        out[i] = s;
    }
}

/// Integrates a problem and returns the full history.
pub fn fd_solve_problem(problem: &FdProblem, config: &FDConfig) -> Result<FDSolution> {
    config.validate()?;
    let n = config.n_cells + 1;
    let depth = match config.domain_depth {
        Some(d) => d,
        None => {
            if problem.v_a > 0.0 {
                problem.y0.max(6.0 * problem.a_f / problem.v_a)
            } else {
                problem.y0.max(6.0 * (problem.a_f * config.t_end).sqrt())
            }
        }
    };
    if !(depth > 0.0) {
        return Err(Error::Invalid(format!("domain depth must be positive, got {depth}")));
    }
    let dy = depth / config.n_cells as f64;
    let grid: Vec<f64> = (0..n).map(|i| i as f64 * dy).collect();

    let stability_dt = config.dt_safety * dy * dy / (2.0 * problem.a_f);
    let dt = match config.scheme {
        Scheme::Explicit => {
            let dt = config.dt.unwrap_or(stability_dt);
            if dt > stability_dt * (1.0 + 1e-12) {
                return Err(Error::Instability(format!(
                    "explicit dt = {dt:.3e} s exceeds the stability bound {stability_dt:.3e} s"
                )));
            }
            let adv_bound = if problem.v_a != 0.0 {
                dy / problem.v_a.abs()
            } else {
                f64::INFINITY
            };
            if dt > adv_bound {
                return Err(Error::Instability(format!(
                    "explicit dt = {dt:.3e} s exceeds the advective bound {adv_bound:.3e} s"
                )));
            }
            dt
        }
        Scheme::ImplicitTheta(_) => config.dt.unwrap_or(stability_dt),
    };
    let n_steps = (config.t_end / dt).ceil() as usize;
    let dt = config.t_end / n_steps as f64; // land exactly on t_end

    let rows = build_operator(problem, config, &grid);

    // initial condition: undisturbed layer, surface pinned when Dirichlet
    let mut theta = vec![0.0; n];
    for (i, row) in rows.iter().enumerate() {
        if let Some(v) = row.dirichlet {
            theta[i] = v;
        }
    }

    let lu = match config.scheme {
        Scheme::Explicit => None,
        Scheme::ImplicitTheta(th) => {
            // bandwidths: upwind2 reaches two nodes on the upwind side
            let (kl, ku) = match (config.advection, problem.v_a) {
                (AdvectionOrder::Upwind2, v) if v > 0.0 => (1, 2),
                (AdvectionOrder::Upwind2, v) if v < 0.0 => (2, 1),
                _ => (1, 1),
            };
            let entry = |i: usize, j: usize| -> f64 {
                let row = &rows[i];
                if row.dirichlet.is_some() {
                    return if i == j { 1.0 } else { 0.0 };
                }
                let mut c = if i == j { 1.0 } else { 0.0 };
                for &(col, v) in &row.cols {
                    if col == j {
                        c -= dt * th * v;
                    }
                }
                c
            };
            Some((BandedLu::factor(n, kl, ku, entry)?, th, kl, ku))
        }
    };

    let mut times = vec![0.0];
    let mut history = vec![theta.clone()];
    let mut energy_audit = Vec::with_capacity(n_steps);
    let mut l_old = vec![0.0; n];
    let mut l_new = vec![0.0; n];

    for step in 1..=n_steps {
        let t = step as f64 * dt;
        apply_operator(&rows, &theta, &mut l_old);
        let new_theta = match &lu {
            None => {
                let mut next = theta.clone();
                for i in 0..n {
                    if rows[i].dirichlet.is_none() {
                        next[i] = theta[i] + dt * l_old[i];
                    }
                }
                next
            }
            Some((lu, th, _, _)) => {
                // (I - dt th L) x = theta + dt (1-th) L theta + dt (affine parts)
                let mut rhs = vec![0.0; n];
                for i in 0..n {
                    if let Some(v) = rows[i].dirichlet {
                        rhs[i] = v;
                    } else {
                        // affine part enters fully implicit-weighted + explicit-weighted = once
                        rhs[i] = theta[i] + dt * (1.0 - th) * l_old[i] + dt * th * rows[i].rhs;
                    }
                }
                let mut x = lu.solve(&rhs);
                // iterative refinement: residual of (I - dt th L) x = rhs
                let scale = rhs.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
                let residual = |x: &[f64], resid: &mut [f64]| -> f64 {
                    let mut worst: f64 = 0.0;
                    for i in 0..n {
                        let ax = if rows[i].dirichlet.is_some() {
                            x[i]
                        } else {
                            let mut s = x[i];
                            for &(j, c) in &rows[i].cols {
                                s -= dt * th * c * x[j];
                            }
                            s
                        };
                        resid[i] = rhs[i] - ax;
                        worst = worst.max(resid[i].abs() / scale);
                    }
                    worst
                };
                let mut resid = vec![0.0; n];
                let mut worst = residual(&x, &mut resid);
                let mut iterations = 0;
                while worst > 1e-12 && iterations < 100 {
                    let dx = lu.solve(&resid);
                    for i in 0..n {
                        x[i] += dx[i];
                    }
                    worst = residual(&x, &mut resid);
                    iterations += 1;
                }
                if worst > 1e-10 {
                    return Err(Error::NonConvergence(format!(
                        "implicit solve residual {worst:.3e} exceeds 1e-10 after {iterations} refinement iterations"
                    )));
                }
                x
            }
        };

        // discrete energy balance: trapezoid change of the integral vs the
        // theta-blended operator plus affine parts, over evolving nodes
        let th_w = match config.scheme {
            Scheme::Explicit => 0.0,
            Scheme::ImplicitTheta(th) => th,
        };
        apply_operator(&rows, &new_theta, &mut l_new);
        let w = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut de = 0.0;
        let mut budget = 0.0;
        for i in 0..n {
            if rows[i].dirichlet.is_some() {
                continue;
            }
            de += w(i) * (new_theta[i] - theta[i]) * dy;
            budget += w(i) * dt * (th_w * l_new[i] + (1.0 - th_w) * l_old[i]) * dy;
        }
        let scale = de.abs().max(budget.abs()).max(1e-300);
        energy_audit.push((de - budget).abs() / scale);

        theta = new_theta;
        if !theta.iter().all(|v| v.is_finite()) {
            return Err(Error::Instability(format!(
                "non-finite temperature at t = {t:.3e} s"
            )));
        }
        if step % config.save_every == 0 || step == n_steps {
            times.push(t);
            history.push(theta.clone());
        }
    }

    Ok(FDSolution {
        times,
        grid,
        theta: history,
        energy_audit,
        problem: problem.clone(),
        config: config.clone(),
    })
}

/// Builds the dimensionless problem for a scenario and integrates it.
pub fn fd_solve(scenario: &Scenario, config: &FDConfig) -> Result<FDSolution> {
    scenario.validate()?;
    let v_a = regression_velocity(scenario)?;
    let fuel = &scenario.fuel;
    let dt_drive = scenario.delta_t();
    let surface = match config.bc_mode {
        BcMode::DirichletTs => SurfaceBc::Dirichlet,
        BcMode::FluxLinear => SurfaceBc::FluxGradient(scenario.f_flux / (fuel.lambda_f * dt_drive)),
        BcMode::FluxStefan => {
            let phi = flux_balance(scenario)?.phi;
            SurfaceBc::FluxGradient(phi / (fuel.lambda_f * dt_drive))
        }
    };
    let source = if config.source_on {
        let s0 = fuel.mu * scenario.f_flux / (fuel.rho_f * fuel.c_pf * dt_drive);
        Some((fuel.mu, s0))
    } else {
        None
    };
    let problem = FdProblem {
        a_f: fuel.a_f,
        v_a,
        y0: scenario.y0,
        surface,
        source,
    };
    fd_solve_problem(&problem, config)
}

/// Probe outcome of the numerical problem-A analogue.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeResult {
    /// First instant the interface reaches theta_B0, by linear interpolation
    pub t_boilover: Option<f64>,
    pub warnings: Vec<String>,
}

/// Scans the history for the first time the fuel/water interface
/// y_F(t) = y0 - V_a t reaches `threshold`.
pub fn probe_threshold(
    solution: &FDSolution,
    y0: f64,
    v_a: f64,
    tau0: f64,
    threshold: f64,
) -> ProbeResult {
    let mut warnings = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..solution.times.len() {
        let t = solution.times[k];
        if t >= tau0 {
            warnings.push(format!(
                "layer burns through at tau0 = {tau0:.1} s before reaching theta = {threshold}"
            ));
            return ProbeResult {
                t_boilover: None,
                warnings,
            };
        }
        let y_probe = (y0 - v_a * t).max(0.0);
        let th = solution.theta_at(k, y_probe);
        if th >= threshold {
            let t_star = match prev {
                None => t,
                Some((tp, thp)) => {
                    if th > thp {
                        tp + (t - tp) * (threshold - thp) / (th - thp)
                    } else {
                        t
                    }
                }
            };
            return ProbeResult {
                t_boilover: Some(t_star.max(0.0)),
                warnings,
            };
        }
        prev = Some((t, th));
    }
    warnings.push(format!(
        "theta = {threshold} not reached before t_end = {:.1} s",
        solution.times.last().copied().unwrap_or(0.0)
    ));
    ProbeResult {
        t_boilover: None,
        warnings,
    }
}

/// Numerical analogue of problem A: first time the interface temperature
/// reaches the scenario's theta_B0.
pub fn fd_probe_boilover(solution: &FDSolution, scenario: &Scenario) -> Result<ProbeResult> {
    let threshold = scenario
        .theta_b0
        .ok_or_else(|| Error::MissingInput("theta_B0 required for the boilover probe".into()))?;
    let v_a = regression_velocity(scenario)?;
    let tau0 = scenario.y0 / v_a;
    Ok(probe_threshold(solution, scenario.y0, v_a, tau0, threshold))
}

/// Steadiness diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct SteadyReport {
    /// L-inf distance between the final two saved profiles
    pub successive_linf: f64,
    /// L-inf distance from the final profile to a supplied analytic steady state
    pub analytic_linf: Option<f64>,
}

/// Compares the final saved profiles with each other and, when given, with
/// an analytic steady state.
pub fn fd_steady_check(
    solution: &FDSolution,
    analytic: Option<&dyn Fn(f64) -> f64>,
) -> SteadyReport {
    let m = solution.theta.len();
    let successive_linf = if m >= 2 {
        solution.theta[m - 1]
            .iter()
            .zip(&solution.theta[m - 2])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::NAN
    };
    let analytic_linf = analytic.map(|f| {
        solution
            .final_profile()
            .iter()
            .zip(&solution.grid)
            .map(|(th, y)| (th - f(*y)).abs())
            .fold(0.0, f64::max)
    });
    SteadyReport {
        successive_linf,
        analytic_linf,
    }
}

/// Depth at which the final profile decays to `frac` of its surface value.
pub fn penetration_depth(solution: &FDSolution, frac: f64) -> Option<f64> {
    let prof = solution.final_profile();
    let surface = prof[0];
    if surface == 0.0 {
        return None;
    }
    let target = surface.abs() * frac;
    for i in 1..prof.len() {
        if prof[i].abs() <= target {
            let (a, b) = (prof[i - 1].abs(), prof[i].abs());
            let w = if a > b { (a - target) / (a - b) } else { 1.0 };
            return Some(solution.grid[i - 1] + w * (solution.grid[i] - solution.grid[i - 1]));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn dirichlet_problem(v_a: f64) -> FdProblem {
        FdProblem {
            a_f: 1e-7,
            v_a,
            y0: 0.01,
            surface: SurfaceBc::Dirichlet,
            source: None,
        }
    }

    #[test]
    fn banded_lu_matches_dense_arithmetic() {
        // small asymmetric banded system with known solution
        let n = 8;
        let entry = |i: usize, j: usize| -> f64 {
            if i == j {
                4.0 + i as f64 * 0.1
            } else if j == i + 1 {
                -1.5
            } else if j == i + 2 {
                0.3
            } else if j + 1 == i {
                -0.8
            } else {
                0.0
            }
        };
        let lu = BandedLu::factor(n, 1, 2, entry).unwrap();
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() + 1.0).collect();
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                rhs[i] += entry(i, j) * x_true[j];
            }
        }
        let x = lu.solve(&rhs);
        for i in 0..n {
            assert!(rel(x[i], x_true[i]) < 1e-12);
        }
    }

    #[test]
    fn steady_dirichlet_matches_closed_form() {
        // long-time no-source solution must match e^{-V_a y / a_F}
        let problem = dirichlet_problem(1e-5);
        let scale = problem.a_f / problem.v_a; // 0.01 m
        let config = FDConfig {
            n_cells: 512,
            domain_depth: Some(9.0 * scale),
            t_end: 40.0 * problem.a_f / (problem.v_a * problem.v_a),
            scheme: Scheme::ImplicitTheta(1.0),
            dt: Some(0.01 * problem.a_f / (problem.v_a * problem.v_a)),
            save_every: 1000,
            ..FDConfig::default()
        };
        let sol = fd_solve_problem(&problem, &config).unwrap();
        let k = problem.v_a / problem.a_f;
        let report = fd_steady_check(&sol, Some(&|y: f64| (-k * y).exp()));
        assert!(
            report.analytic_linf.unwrap() < 1e-3,
            "L-inf to closed form was {}",
            report.analytic_linf.unwrap()
        );
        assert!(report.successive_linf < 1e-8);
    }

    #[test]
    fn zero_velocity_flux_bc_matches_sqrt_t_solution() {
        // classical semi-infinite constant-flux solution:
        // Theta(0, t) = 2 g0 sqrt(a t / pi)
        let g0 = 50.0; // Phi/(lambda dT) in 1/m
        let problem = FdProblem {
            a_f: 1e-7,
            v_a: 0.0,
            y0: 0.01,
            surface: SurfaceBc::FluxGradient(g0),
            source: None,
        };
        let t_end = 200.0;
        let config = FDConfig {
            n_cells: 512,
            domain_depth: Some(6.0 * (problem.a_f * t_end).sqrt()),
            t_end,
            scheme: Scheme::ImplicitTheta(0.5),
            dt: Some(t_end / 4000.0),
            save_every: 4000,
            ..FDConfig::default()
        };
        let sol = fd_solve_problem(&problem, &config).unwrap();
        let analytic = 2.0 * g0 * (problem.a_f * t_end / std::f64::consts::PI).sqrt();
        let surface = sol.final_profile()[0];
        assert!(
            rel(surface, analytic) < 0.02,
            "surface theta {surface} vs analytic {analytic}"
        );
    }

    #[test]
    fn spatial_convergence_order_at_least_1_8() {
        // Richardson estimate on nested grids for the steady Dirichlet
        // problem, theta = 0.5
        let problem = dirichlet_problem(1e-5);
        let scale = problem.a_f / problem.v_a;
        let run = |n_cells: usize| -> FDSolution {
            let config = FDConfig {
                n_cells,
                domain_depth: Some(9.0 * scale),
                t_end: 40.0 * problem.a_f / (problem.v_a * problem.v_a),
                scheme: Scheme::ImplicitTheta(0.5),
                dt: Some(0.01 * problem.a_f / (problem.v_a * problem.v_a)),
                save_every: 100_000,
                ..FDConfig::default()
            };
            fd_solve_problem(&problem, &config).unwrap()
        };
        let sols: Vec<FDSolution> = [64, 128, 256, 512].iter().map(|&n| run(n)).collect();
        // L-inf difference between nested grids at common nodes
        let diff = |coarse: &FDSolution, fine: &FDSolution| -> f64 {
            let r = (fine.grid.len() - 1) / (coarse.grid.len() - 1);
            coarse
                .final_profile()
                .iter()
                .enumerate()
                .map(|(i, v)| (v - fine.final_profile()[i * r]).abs())
                .fold(0.0, f64::max)
        };
        let d1 = diff(&sols[0], &sols[1]);
        let d2 = diff(&sols[1], &sols[2]);
        let d3 = diff(&sols[2], &sols[3]);
        let p1 = (d1 / d2).log2();
        let p2 = (d2 / d3).log2();
        println!("observed orders: {p1:.2}, {p2:.2}");
        assert!(p1 >= 1.8, "order {p1} below 1.8");
        assert!(p2 >= 1.8, "order {p2} below 1.8");
    }

    #[test]
    fn discrete_maximum_principle() {
        // no-source Dirichlet with monotone configuration: theta stays in [0, 1]
        let problem = dirichlet_problem(1e-5);
        let scale = problem.a_f / problem.v_a;
        let config = FDConfig {
            n_cells: 128,
            domain_depth: Some(6.0 * scale),
            t_end: 10.0 * problem.a_f / (problem.v_a * problem.v_a),
            scheme: Scheme::ImplicitTheta(1.0),
            advection: AdvectionOrder::Upwind1,
            dt: Some(0.05 * problem.a_f / (problem.v_a * problem.v_a)),
            save_every: 1,
            ..FDConfig::default()
        };
        let sol = fd_solve_problem(&problem, &config).unwrap();
        for prof in &sol.theta {
            for &v in prof {
                assert!(
                    (-1e-10..=1.0 + 1e-10).contains(&v),
                    "maximum principle violated: theta = {v}"
                );
            }
        }
    }

    #[test]
    fn energy_audit_below_tolerance() {
        let problem = FdProblem {
            a_f: 1e-7,
            v_a: 1e-5,
            y0: 0.01,
            surface: SurfaceBc::FluxGradient(30.0),
            source: Some((200.0, 1e-3)),
        };
        let config = FDConfig {
            n_cells: 128,
            t_end: 500.0,
            scheme: Scheme::ImplicitTheta(0.7),
            dt: Some(1.0),
            save_every: 100,
            ..FDConfig::default()
        };
        let sol = fd_solve_problem(&problem, &config).unwrap();
        let worst = sol.energy_audit.iter().cloned().fold(0.0, f64::max);
        assert!(worst < 1e-6, "worst per-step energy residual {worst}");
    }

    #[test]
    fn reversed_velocity_mirrors_steady_profile() {
        // with Dirichlet ends 1 and 0, Theta_{-V}(y) = 1 - Theta_{+V}(L - y)
        let t_end = 40.0 * 1e-7 / (1e-5 * 1e-5);
        let mk = |v: f64, surface_one: bool| -> FDSolution {
            let problem = FdProblem {
                a_f: 1e-7,
                v_a: v,
                y0: 0.01,
                surface: SurfaceBc::Dirichlet,
                source: None,
            };
            let mut config = FDConfig {
                n_cells: 128,
                domain_depth: Some(0.06),
                t_end,
                scheme: Scheme::ImplicitTheta(1.0),
                dt: Some(t_end / 2000.0),
                save_every: 100_000,
                ..FDConfig::default()
            };
            config.far_bc = FarBc::FarFieldZero;
            let _ = surface_one;
            fd_solve_problem(&problem, &config).unwrap()
        };
        let fwd = mk(1e-5, true);
        let back = mk(-1e-5, true);
        let n = fwd.grid.len();
        // the reversed problem has boundary values (1, 0) like the forward
        // one, so the mirror identity applies to the complementary profile
        for i in 0..n {
            let mirrored = 1.0 - fwd.final_profile()[n - 1 - i];
            let got = back.final_profile()[i];
            assert!(
                (got - mirrored).abs() < 1e-8,
                "mirror mismatch at node {i}: {got} vs {mirrored}"
            );
        }
    }

    #[test]
    fn explicit_cfl_violation_is_instability() {
        let problem = dirichlet_problem(1e-5);
        let config = FDConfig {
            n_cells: 64,
            domain_depth: Some(0.06),
            t_end: 100.0,
            scheme: Scheme::Explicit,
            dt: Some(1e9),
            ..FDConfig::default()
        };
        assert!(matches!(
            fd_solve_problem(&problem, &config),
            Err(Error::Instability(_))
        ));
    }

    #[test]
    fn explicit_and_implicit_agree() {
        let problem = dirichlet_problem(1e-5);
        let base = FDConfig {
            n_cells: 64,
            domain_depth: Some(0.06),
            t_end: 2000.0,
            save_every: 100_000,
            ..FDConfig::default()
        };
        let mut cfg_e = base.clone();
        cfg_e.scheme = Scheme::Explicit;
        let mut cfg_i = base.clone();
        cfg_i.scheme = Scheme::ImplicitTheta(0.5);
        cfg_i.dt = Some(1.0);
        let se = fd_solve_problem(&problem, &cfg_e).unwrap();
        let si = fd_solve_problem(&problem, &cfg_i).unwrap();
        let linf = se
            .final_profile()
            .iter()
            .zip(si.final_profile())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(linf < 1e-3, "explicit vs implicit L-inf {linf}");
    }

    #[test]
    fn config_validation() {
        let mut c = FDConfig::default();
        c.n_cells = 8;
        assert!(c.validate().is_err());
        let mut c = FDConfig::default();
        c.dt_safety = 1.5;
        assert!(c.validate().is_err());
        let mut c = FDConfig::default();
        c.scheme = Scheme::ImplicitTheta(0.3);
        assert!(c.validate().is_err());
    }

    #[test]
    fn probe_trivial_thresholds() {
        let problem = dirichlet_problem(1e-5);
        let config = FDConfig {
            n_cells: 64,
            domain_depth: Some(0.06),
            t_end: 100.0,
            scheme: Scheme::ImplicitTheta(1.0),
            dt: Some(1.0),
            ..FDConfig::default()
        };
        let sol = fd_solve_problem(&problem, &config).unwrap();
        // threshold 0 is met immediately
        let r = probe_threshold(&sol, 0.01, 1e-5, 1000.0, 0.0);
        assert_eq!(r.t_boilover, Some(0.0));
        // threshold above a bounded solution: none, with a warning
        let r = probe_threshold(&sol, 0.01, 1e-5, 1.0e9, 1.0 + 1e-6);
        assert!(r.t_boilover.is_none());
        assert!(!r.warnings.is_empty());
        // burn-through cut: tau0 tiny
        let r = probe_threshold(&sol, 0.01, 1e-5, 0.5, 0.9);
        assert!(r.t_boilover.is_none());
        assert!(r.warnings[0].contains("burns through"));
    }

    #[test]
    fn steady_source_profile_monotone_for_large_bu() {
        // opaque layer: source concentrated at the surface, profile must
        // decrease monotonically in depth once steady
        let problem = FdProblem {
            a_f: 1e-7,
            v_a: 1e-5,
            y0: 0.01,
            surface: SurfaceBc::FluxGradient(0.0),
            source: Some((2000.0, 0.05)),
        };
        let config = FDConfig {
            n_cells: 256,
            domain_depth: Some(0.06),
            t_end: 50_000.0,
            scheme: Scheme::ImplicitTheta(1.0),
            dt: Some(50.0),
            save_every: 100_000,
            ..FDConfig::default()
        };
        let sol = fd_solve_problem(&problem, &config).unwrap();
        let prof = sol.final_profile();
        for i in 1..prof.len() {
            assert!(
                prof[i] <= prof[i - 1] + 1e-12,
                "profile not monotone at node {i}"
            );
        }
    }

    #[test]
    fn dump_csv_and_echo() {
        let problem = dirichlet_problem(1e-5);
        let config = FDConfig {
            n_cells: 16,
            domain_depth: Some(0.06),
            t_end: 10.0,
            scheme: Scheme::ImplicitTheta(1.0),
            dt: Some(5.0),
            ..FDConfig::default()
        };
        let sol = fd_solve_problem(&problem, &config).unwrap();
        let csv = sol.dump_csv();
        assert!(csv.starts_with("t_s,y_m,theta\n"));
        let echo: serde_json::Value = serde_json::from_str(&sol.config_echo_json()).unwrap();
        assert_eq!(echo["config"]["n_cells"], 16);
        assert_eq!(echo["problem"]["a_f"], 1e-7);
    }
}
