//! Configurable verification suites and studies behind the command-line tool.
//!
//! Every driver returns a report holding the measured values and a list of
//! pass/fail [`Check`]s; the binary maps configuration errors to exit code 2
//! and failed checks to exit code 1.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{directions, make_circle, Curve, Density, Diffeo, Grid, TrigCurve};
use crate::operators::{assemble, eval_potential, jump_residuals, pairing, Kind, Potential};
use crate::perforated::{
    assemble_block, assemble_direct, expected_slope, truncation_study, Corner, ErrorNorm,
    PerforatedConfig, TruncationRow,
};
use crate::shape::{calderon, shape_fd_study, FdReport};

/// Default seed of the random test densities.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// One measured quantity against its tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub subject: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(name: &str, subject: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            subject: subject.to_string(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    /// Passes when `|value − target| ≤ tolerance`; `value` is stored as is.
    pub fn near(name: &str, subject: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            subject: subject.to_string(),
            value,
            tolerance,
            passed: (value - target).abs() <= tolerance,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn checks_csv(seed: Option<u64>, checks: &[Check]) -> String {
    let mut s = String::new();
    if let Some(seed) = seed {
        writeln!(s, "# seed = {seed}").unwrap();
    }
    writeln!(s, "check,subject,value,tolerance,status").unwrap();
    for c in checks {
        writeln!(
            s,
            "{},{},{},{},{}",
            c.name,
            c.subject,
            fmt_f(c.value),
            fmt_f(c.tolerance),
            c.status()
        )
        .unwrap();
    }
    s
}

/// Named curve in a configuration file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedCurve {
    pub name: String,
    pub curve: TrigCurve,
}

fn curve_from(table: &TrigCurve, what: &str) -> Result<Curve> {
    Curve::new(table.clone()).map_err(|e| Error::Config(format!("{what}: {e}")))
}

/// Random trigonometric polynomial of the given degree with coefficients
/// uniform in `[−1, 1]`, sampled at the grid nodes.
pub fn random_density(grid: &Grid, rng: &mut impl Rng, degree: usize) -> Density {
    let a: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
    Density::from_fn(grid, |t, _| {
        (0..=degree)
            .map(|m| a[m] * (m as f64 * t).cos() + b[m] * (m as f64 * t).sin())
            .sum()
    })
}

/// Degree of the random densities used by the jump and adjointness checks.
pub const RANDOM_DENSITY_DEGREE: usize = 4;

// ---------------------------------------------------------------- verify

/// Configuration of `verify`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub geometries: Vec<NamedCurve>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

pub const JUMP_TOL: f64 = 1e-5;
pub const ADJOINT_TOL: f64 = 1e-9;
pub const GAUSS_TOL: f64 = 1e-8;
pub const SPECTRUM_TOL: f64 = 1e-10;
pub const W_SPECTRUM_TOL: f64 = 1e-8;

/// Report of `verify`.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_csv(&self) -> String {
        checks_csv(Some(self.seed), &self.checks)
    }
}

/// Spectral checks on the unit circle with `n` nodes: `V cos kθ = cos kθ/(2k)`,
/// `K[1] = K′[1] = −½`, `W cos kθ = (k/2) cos kθ`, `k = 1..8`.
pub fn circle_spectrum_checks(n: usize) -> Result<Vec<Check>> {
    let grid = Grid::new(&make_circle(1.0, [0.0, 0.0])?, n)?;
    let subject = format!("unit circle N={n}");
    let v = assemble(Kind::V, &grid);
    let k = assemble(Kind::K, &grid);
    let kp = assemble(Kind::Kprime, &grid);
    let w = assemble(Kind::W, &grid);
    let mut v_err: f64 = 0.0;
    let mut w_err: f64 = 0.0;
    for m in 1..=8 {
        let u = Density::from_fn(&grid, |t, _| (m as f64 * t).cos());
        let vu = v.apply(&u)?;
        let wu = w.apply(&u)?;
        for j in 0..n {
            v_err = v_err.max((vu.values()[j] - u.values()[j] / (2.0 * m as f64)).abs());
            w_err = w_err.max((wu.values()[j] - u.values()[j] * m as f64 / 2.0).abs());
        }
    }
    let one = Density::constant(&grid, 1.0);
    let k_err = k
        .apply(&one)?
        .values()
        .iter()
        .fold(0.0f64, |a, x| a.max((x + 0.5).abs()));
    let kp_err = kp
        .apply(&one)?
        .values()
        .iter()
        .fold(0.0f64, |a, x| a.max((x + 0.5).abs()));
    Ok(vec![
        Check::at_most("V_eigenvalues", &subject, v_err, SPECTRUM_TOL),
        Check::at_most("K_constant", &subject, k_err, SPECTRUM_TOL),
        Check::at_most("Kprime_constant", &subject, kp_err, SPECTRUM_TOL),
        Check::at_most("W_eigenvalues", &subject, w_err, W_SPECTRUM_TOL),
    ])
}

/// Interior probe: the interior point farthest from the nodes among the node
/// mean and points between it and the nodes.
fn interior_probe(grid: &Grid) -> [f64; 2] {
    let pts = grid.points();
    let n = pts.len() as f64;
    let mean = [
        pts.iter().map(|p| p[0]).sum::<f64>() / n,
        pts.iter().map(|p| p[1]).sum::<f64>() / n,
    ];
    let mut best = mean;
    let mut best_d = if grid.curve().contains(mean) {
        grid.node_distance(mean)
    } else {
        -1.0
    };
    for p in pts.iter().step_by((pts.len() / 16).max(1)) {
        for f in [0.25, 0.5, 0.75] {
            let q = [
                mean[0] + f * (p[0] - mean[0]),
                mean[1] + f * (p[1] - mean[1]),
            ];
            if grid.curve().contains(q) {
                let d = grid.node_distance(q);
                if d > best_d {
                    best = q;
                    best_d = d;
                }
            }
        }
    }
    best
}

fn exterior_probe(grid: &Grid) -> [f64; 2] {
    let r = grid
        .points()
        .iter()
        .map(|p| p[0].hypot(p[1]))
        .fold(0.0, f64::max);
    [3.0 * r + 1.0, 0.5]
}

/// Checks on one curve: jump relations, adjointness of `K`, `K′`, and Gauss's
/// identity for the double layer.
pub fn curve_checks(name: &str, curve: &Curve, n: usize, seed: u64) -> Result<Vec<Check>> {
    let grid = Grid::new(curve, n)?;
    let subject = format!("{name} N={n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = random_density(&grid, &mut rng, RANDOM_DENSITY_DEGREE);
    let mu = random_density(&grid, &mut rng, RANDOM_DENSITY_DEGREE);

    let mut checks = Vec::new();
    let r = jump_residuals(&grid, &psi, &mu)?;
    for (label, v) in ["jump_D_int", "jump_D_ext", "jump_dS_int", "jump_dS_ext"]
        .iter()
        .zip(r)
    {
        checks.push(Check::at_most(label, &subject, v, JUMP_TOL));
    }

    let kpsi = assemble(Kind::K, &grid).apply(&psi)?;
    let kpmu = assemble(Kind::Kprime, &grid).apply(&mu)?;
    let lhs = pairing(&grid, &kpsi, &mu)?;
    let rhs = pairing(&grid, &psi, &kpmu)?;
    let scale = pairing(&grid, &psi, &psi)?.sqrt() * pairing(&grid, &mu, &mu)?.sqrt();
    checks.push(Check::at_most(
        "adjointness",
        &subject,
        (lhs - rhs).abs() / scale,
        ADJOINT_TOL,
    ));

    // a probe inside the near field of a coarse grid counts as a failed check
    let one = Density::constant(&grid, 1.0);
    let gauss = |x: [f64; 2], expected: f64| match eval_potential(Potential::Double, &grid, &one, x)
    {
        Ok(v) => Ok((v - expected).abs()),
        Err(Error::TooClose { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    };
    checks.push(Check::at_most(
        "gauss_interior",
        &subject,
        gauss(interior_probe(&grid), -1.0)?,
        GAUSS_TOL,
    ));
    checks.push(Check::at_most(
        "gauss_exterior",
        &subject,
        gauss(exterior_probe(&grid), 0.0)?,
        GAUSS_TOL,
    ));
    Ok(checks)
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.geometries.is_empty() {
        return Err(Error::Config("`geometries` must not be empty".into()));
    }
    let curves = cfg
        .geometries
        .iter()
        .map(|g| curve_from(&g.curve, &g.name).map(|c| (g.name.clone(), c)))
        .collect::<Result<Vec<_>>>()?;
    // validates N before any numerics
    Grid::new(&curves[0].1, cfg.n)?;
    let mut checks = circle_spectrum_checks(cfg.n)?;
    for (name, curve) in &curves {
        checks.extend(curve_checks(name, curve, cfg.n, cfg.seed)?);
    }
    Ok(VerifyReport {
        seed: cfg.seed,
        checks,
    })
}

/// Verify presets: `circle`, `ellipse`, and `standard` (both).
pub fn verify_preset(name: &str) -> Result<VerifyConfig> {
    let circle = NamedCurve {
        name: "circle".into(),
        curve: TrigCurve::circle(1.0, [0.0, 0.0]),
    };
    let ellipse = NamedCurve {
        name: "ellipse".into(),
        curve: TrigCurve::ellipse(2.0, 1.0),
    };
    let geometries = match name {
        "circle" => vec![circle],
        "ellipse" => vec![ellipse],
        "standard" => vec![circle, ellipse],
        other => return Err(Error::Config(format!("unknown verify preset `{other}`"))),
    };
    Ok(VerifyConfig {
        geometries,
        n: 128,
        seed: DEFAULT_SEED,
    })
}

// ----------------------------------------------------------- shape study

/// Configuration of `shape-study`: the family `t ↦ phi + t·direction`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeStudyConfig {
    pub kind: Kind,
    pub phi: TrigCurve,
    pub direction: TrigCurve,
    pub t_list: Vec<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    /// Node counts of the Calderón residual sweep.
    #[serde(default = "default_calderon_sweep")]
    pub calderon_n: Vec<usize>,
}

fn default_calderon_sweep() -> Vec<usize> {
    vec![64, 128, 256]
}

pub const FD_ORDER_TOL: f64 = 0.2;
pub const TAYLOR_ORDER_TOL: f64 = 0.3;
pub const CALDERON_TOL: f64 = 1e-5;
/// Families whose operators vary by less than this are reported as invariant.
pub const INVARIANCE_TOL: f64 = 1e-12;
/// Residuals below this level count as converged when checking that the
/// Calderón residual decreases under refinement.
pub const CALDERON_FLOOR: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ShapeReport {
    pub fd: FdReport,
    /// `(N, ‖C² − C‖_∞, ‖(I − C)² − (I − C)‖_∞)`
    pub calderon: Vec<(usize, f64, f64)>,
    pub checks: Vec<Check>,
}

impl ShapeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Columns `t, diff_norm, slope_estimate`; the slope column repeats the
    /// fitted order (empty when the differences vanish).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,diff_norm,slope_estimate\n");
        let slope = self.fd.fd_slope.map(fmt_f).unwrap_or_default();
        for (t, d) in self.fd.t.iter().zip(&self.fd.diff_norms) {
            writeln!(s, "{},{},{}", fmt_f(*t), fmt_f(*d), slope).unwrap();
        }
        s
    }

    pub fn calderon_csv(&self) -> String {
        let mut s = String::from("N,residual,complement_residual\n");
        for (n, r, c) in &self.calderon {
            writeln!(s, "{n},{},{}", fmt_f(*r), fmt_f(*c)).unwrap();
        }
        s
    }

    pub fn checks_csv(&self) -> String {
        checks_csv(None, &self.checks)
    }
}

/// Whether each residual is below the previous one or both are at the
/// rounding floor.
pub fn decreasing_to_floor(values: &[f64], floor: f64) -> bool {
    values
        .windows(2)
        .all(|w| w[1] < w[0] || (w[0] <= floor && w[1] <= floor))
}

fn sorted_strict(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1]) || v.windows(2).all(|w| w[0] > w[1])
}

pub fn run_shape_study(cfg: &ShapeStudyConfig) -> Result<ShapeReport> {
    if cfg.t_list.is_empty() || !sorted_strict(&cfg.t_list) {
        return Err(Error::Config("`t_list` must be nonempty and sorted".into()));
    }
    let phi = Diffeo::from_map(cfg.phi.clone());
    crate::geometry::apply_diffeo(&phi)?;
    cfg.direction.check_shape()?;
    let fd = shape_fd_study(cfg.kind, &phi, &cfg.direction, &cfg.t_list, cfg.n)?;

    let calderon_rows: Vec<(usize, f64, f64)> = cfg
        .calderon_n
        .par_iter()
        .map(|&n| {
            let c = calderon(&phi, n)?;
            Ok((n, c.idempotency_residual(), c.complement_residual()))
        })
        .collect::<Result<_>>()?;

    let subject = format!("{} N={}", cfg.kind, cfg.n);
    let mut checks = Vec::new();
    if fd.max_variation <= INVARIANCE_TOL {
        // the family leaves the operator unchanged; difference orders are undefined
        checks.push(Check::at_most(
            "invariant_family",
            &subject,
            fd.max_variation,
            INVARIANCE_TOL,
        ));
    } else {
        if let Some(s) = fd.fd_slope {
            checks.push(Check::near("fd_order", &subject, s, 2.0, FD_ORDER_TOL));
        }
        if let Some(Some(s)) = fd.taylor_slopes.last() {
            checks.push(Check::near(
                "taylor_order",
                &subject,
                *s,
                4.0,
                TAYLOR_ORDER_TOL,
            ));
        }
    }
    if let Some(&(n, r, c)) = calderon_rows.last() {
        let subject = format!("N={n}");
        checks.push(Check::at_most(
            "calderon_idempotency",
            &subject,
            r,
            CALDERON_TOL,
        ));
        checks.push(Check::at_most(
            "calderon_complement",
            &subject,
            c,
            CALDERON_TOL,
        ));
        let res: Vec<f64> = calderon_rows.iter().map(|r| r.1).collect();
        let mono = decreasing_to_floor(&res, CALDERON_FLOOR);
        checks.push(Check {
            name: "calderon_refinement".into(),
            subject: "sweep".into(),
            value: if mono { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: mono,
        });
    }
    Ok(ShapeReport {
        fd,
        calderon: calderon_rows,
        checks,
    })
}

/// Shape presets `<geometry>-<family>[-<kind>]` with geometry in
/// {circle, ellipse, kite}, family in {dilation, cos2, stretch}, kind in
/// {V, K, Kprime, W} (default V).
pub fn shape_preset(name: &str) -> Result<ShapeStudyConfig> {
    let parts: Vec<&str> = name.split('-').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(Error::Config(format!("unknown shape preset `{name}`")));
    }
    let reference = match parts[0] {
        "circle" => make_circle(1.0, [0.0, 0.0])?,
        "ellipse" => Curve::ellipse(2.0, 1.0)?,
        "kite" => Curve::kite(),
        other => return Err(Error::Config(format!("unknown shape geometry `{other}`"))),
    };
    let direction = match parts[1] {
        "dilation" => directions::dilation(&reference),
        "cos2" => directions::radial_cos(&reference, 2),
        "stretch" => directions::stretch_x(&reference),
        other => return Err(Error::Config(format!("unknown shape family `{other}`"))),
    };
    let kind = match parts.get(2) {
        Some(k) => Kind::parse(k)?,
        None => Kind::V,
    };
    Ok(ShapeStudyConfig {
        kind,
        phi: reference.table().clone(),
        direction,
        t_list: vec![1e-2, 5e-3, 2.5e-3],
        n: 64,
        calderon_n: default_calderon_sweep(),
    })
}

// ----------------------------------------------------- perforation study

/// Configuration of `perforation-study`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerforationStudyConfig {
    pub outer: TrigCurve,
    pub inner: TrigCurve,
    #[serde(rename = "N_outer")]
    pub n_outer: usize,
    #[serde(rename = "N_inner")]
    pub n_inner: usize,
    #[serde(rename = "K_list")]
    pub k_list: Vec<usize>,
    pub epsilon_list: Vec<f64>,
    #[serde(default = "all_kinds")]
    pub kinds: Vec<Kind>,
    #[serde(default = "all_corners")]
    pub corners: Vec<Corner>,
    #[serde(default)]
    pub error_norm: ErrorNorm,
    /// Centrally symmetric geometry: expected orders follow the parity rule.
    #[serde(default)]
    pub symmetric: bool,
}

fn all_kinds() -> Vec<Kind> {
    Kind::ALL.to_vec()
}

fn all_corners() -> Vec<Corner> {
    Corner::ALL.to_vec()
}

pub const SLOPE_TOL: f64 = 0.2;
pub const EQUIVALENCE_TOL: f64 = 1e-11;

#[derive(Clone, Debug)]
pub struct PerforationReport {
    pub rows: Vec<TruncationRow>,
    /// `(kind, ε, largest entrywise block/direct difference)`
    pub equivalence: Vec<(Kind, f64, f64)>,
    pub checks: Vec<Check>,
    pub eps_bound: f64,
}

impl PerforationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Columns `kind, corner, K, epsilon, error, fitted_slope`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,corner,K,epsilon,error,fitted_slope\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                r.kind,
                r.corner,
                r.order,
                fmt_f(r.eps),
                fmt_f(r.error),
                r.fitted_slope.map(fmt_f).unwrap_or_default()
            )
            .unwrap();
        }
        s
    }

    pub fn equivalence_csv(&self) -> String {
        let mut s = String::from("kind,epsilon,max_abs_diff\n");
        for (k, e, d) in &self.equivalence {
            writeln!(s, "{k},{},{}", fmt_f(*e), fmt_f(*d)).unwrap();
        }
        s
    }

    pub fn checks_csv(&self) -> String {
        checks_csv(None, &self.checks)
    }
}

pub fn run_perforation_study(cfg: &PerforationStudyConfig) -> Result<PerforationReport> {
    if cfg.k_list.is_empty() || !cfg.k_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Config(
            "`K_list` must be nonempty and increasing".into(),
        ));
    }
    if cfg.epsilon_list.is_empty() || !sorted_strict(&cfg.epsilon_list) {
        return Err(Error::Config(
            "`epsilon_list` must be nonempty and sorted".into(),
        ));
    }
    if cfg.kinds.is_empty() || cfg.corners.is_empty() {
        return Err(Error::Config(
            "`kinds` and `corners` must not be empty".into(),
        ));
    }
    let outer = curve_from(&cfg.outer, "outer")?;
    let inner = curve_from(&cfg.inner, "inner")?;
    let first = cfg.epsilon_list[0];
    let base = PerforatedConfig::new(&outer, &inner, cfg.n_outer, cfg.n_inner, first)?;
    for &e in &cfg.epsilon_list {
        base.check_eps(e)?;
    }

    let mut jobs = Vec::new();
    for &kind in &cfg.kinds {
        for &corner in &cfg.corners {
            jobs.push((kind, corner));
        }
    }
    let studies: Vec<Vec<TruncationRow>> = jobs
        .par_iter()
        .map(|&(kind, corner)| {
            truncation_study(
                kind,
                corner,
                &cfg.k_list,
                &cfg.epsilon_list,
                &base,
                &cfg.error_norm,
            )
        })
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for ((kind, corner), study) in jobs.iter().zip(studies) {
        for &order in &cfg.k_list {
            let slope = study
                .iter()
                .find(|r| r.order == order)
                .and_then(|r| r.fitted_slope)
                .unwrap_or(f64::NAN);
            let expected = expected_slope(*kind, *corner, order, cfg.symmetric) as f64;
            checks.push(Check::near(
                "series_order",
                &format!("{kind} {corner} K={order} expected {expected}"),
                slope,
                expected,
                SLOPE_TOL,
            ));
        }
        rows.extend(study);
    }

    let mut eq_jobs = Vec::new();
    for &kind in &cfg.kinds {
        for &e in &cfg.epsilon_list {
            eq_jobs.push((kind, e));
            eq_jobs.push((kind, -e));
        }
    }
    let equivalence: Vec<(Kind, f64, f64)> = eq_jobs
        .par_iter()
        .map(|&(kind, e)| {
            let c = base.with_eps(e)?;
            let b = assemble_block(kind, &c)?;
            let d = assemble_direct(kind, &c)?;
            let diff = b
                .max_abs_diff(&d)
                .iter()
                .flatten()
                .fold(0.0f64, |a, &x| a.max(x));
            Ok((kind, e, diff))
        })
        .collect::<Result<_>>()?;
    for (kind, e, d) in &equivalence {
        checks.push(Check::at_most(
            "block_direct",
            &format!("{kind} eps={e}"),
            *d,
            EQUIVALENCE_TOL,
        ));
    }
    Ok(PerforationReport {
        rows,
        equivalence,
        checks,
        eps_bound: base.eps_bound(),
    })
}

/// Default ε list of the studies.
pub const DEFAULT_EPSILONS: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Perforation presets `concentric`, `generic`, `kite`.
pub fn perforation_preset(name: &str) -> Result<PerforationStudyConfig> {
    let (outer, inner, norm, symmetric) = match name {
        "concentric" => (
            TrigCurve::circle(2.0, [0.0, 0.0]),
            TrigCurve::circle(1.0, [0.0, 0.0]),
            ErrorNorm::EvenDensity,
            true,
        ),
        "generic" => (
            TrigCurve::ellipse(2.0, 1.0),
            TrigCurve::circle(0.5, [0.2, 0.0]),
            ErrorNorm::Matrix,
            false,
        ),
        "kite" => (
            TrigCurve::kite(),
            TrigCurve::circle(0.5, [0.1, 0.05]),
            ErrorNorm::Matrix,
            false,
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown perforation preset `{other}`"
            )))
        }
    };
    Ok(PerforationStudyConfig {
        outer,
        inner,
        n_outer: 128,
        n_inner: 64,
        k_list: vec![0, 1, 2, 3],
        epsilon_list: DEFAULT_EPSILONS.to_vec(),
        kinds: all_kinds(),
        corners: all_corners(),
        error_norm: norm,
        symmetric,
    })
}

/// Parse a JSON configuration file.
pub fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
