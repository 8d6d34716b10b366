//! Nyström matrices of `V`, `K`, `K′`, `W` on one curve, smooth cross
//! operators between disjoint curves, and off-boundary potentials.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Density, Grid};
use crate::kernel::{g2, grad_g2};
use crate::spectral::{diff_matrix, log_weights, resample_matrix, TrigInterpolant};

/// The four boundary operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    V,
    K,
    #[serde(rename = "Kprime")]
    Kprime,
    W,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::V, Kind::K, Kind::Kprime, Kind::W];

    pub fn name(self) -> &'static str {
        match self {
            Kind::V => "V",
            Kind::K => "K",
            Kind::Kprime => "Kprime",
            Kind::W => "W",
        }
    }

    pub fn parse(s: &str) -> Result<Kind> {
        match s {
            "V" => Ok(Kind::V),
            "K" => Ok(Kind::K),
            "Kprime" | "K'" => Ok(Kind::Kprime),
            "W" => Ok(Kind::W),
            other => Err(Error::Config(format!("unknown operator kind `{other}`"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a [`BoundaryOp`] discretizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpTag {
    /// Self-interaction operator on one curve.
    Layer(Kind),
    /// Smooth kernel between disjoint node sets.
    Cross(Kind),
    /// Power-series coefficient or truncation.
    Series(Kind),
    Composite,
}

/// Dense operator from densities on a source node set (columns) to values on
/// a target node set (rows).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryOp {
    pub tag: OpTag,
    pub matrix: DMatrix<f64>,
}

impl BoundaryOp {
    pub fn new(tag: OpTag, matrix: DMatrix<f64>) -> Self {
        BoundaryOp { tag, matrix }
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply(&self, density: &Density) -> Result<Density> {
        if density.len() != self.cols() {
            return Err(Error::GridMismatch {
                expected: self.cols(),
                got: density.len(),
            });
        }
        let v = DVector::from_column_slice(density.values());
        Ok(Density::new((&self.matrix * v).as_slice().to_vec()))
    }

    /// Induced ∞-norm (largest absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        matrix_norm_inf(&self.matrix)
    }

    /// Row-major CSV with 17 significant digits.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| format!("{:.16e}", self.matrix[(i, j)]))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// 2×2 array of operators between two node sets `(a, b)`: block `[r][c]`
/// maps densities on set `c` to values on set `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOp {
    pub blocks: [[BoundaryOp; 2]; 2],
}

impl BlockOp {
    pub fn new(blocks: [[BoundaryOp; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = &blocks;
        let consistent = a.rows() == b.rows()
            && c.rows() == d.rows()
            && a.cols() == c.cols()
            && b.cols() == d.cols();
        if !consistent {
            return Err(Error::Config(format!(
                "inconsistent block shapes {}x{}, {}x{}, {}x{}, {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols(),
                d.rows(),
                d.cols()
            )));
        }
        Ok(BlockOp { blocks })
    }

    pub fn block(&self, r: usize, c: usize) -> &BoundaryOp {
        &self.blocks[r][c]
    }

    /// Sizes of the two node sets.
    pub fn sizes(&self) -> (usize, usize) {
        (self.blocks[0][0].rows(), self.blocks[1][1].rows())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let (n0, n1) = self.sizes();
        let mut m = DMatrix::zeros(n0 + n1, n0 + n1);
        for r in 0..2 {
            for c in 0..2 {
                let (r0, c0) = (r * n0, c * n0);
                m.view_mut((r0, c0), self.blocks[r][c].matrix.shape())
                    .copy_from(&self.blocks[r][c].matrix);
            }
        }
        m
    }

    pub fn apply(&self, first: &Density, second: &Density) -> Result<(Density, Density)> {
        let add = |x: Density, y: Density| {
            Density::new(
                x.values()
                    .iter()
                    .zip(y.values())
                    .map(|(a, b)| a + b)
                    .collect(),
            )
        };
        let top = add(
            self.blocks[0][0].apply(first)?,
            self.blocks[0][1].apply(second)?,
        );
        let bottom = add(
            self.blocks[1][0].apply(first)?,
            self.blocks[1][1].apply(second)?,
        );
        Ok((top, bottom))
    }

    /// Largest entrywise difference per block.
    pub fn max_abs_diff(&self, other: &BlockOp) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = (&self.blocks[r][c].matrix - &other.blocks[r][c].matrix).amax();
            }
        }
        out
    }
}

/// Largest absolute row sum.
pub fn matrix_norm_inf(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Quadrature nodes with unit normals and arclength weights; the common
/// currency of the cross-kernel assemblies.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet {
    pub points: Vec<[f64; 2]>,
    pub normals: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl NodeSet {
    pub fn from_grid(grid: &Grid) -> Self {
        NodeSet {
            points: grid.points().to_vec(),
            normals: grid.normals().to_vec(),
            weights: grid.arc_weights(),
        }
    }

    /// Nodes `scale·p_j` with normals multiplied by `normal_sign` and weights
    /// by `|scale|`.
    pub fn scaled(grid: &Grid, scale: f64, normal_sign: f64) -> Self {
        NodeSet {
            points: grid
                .points()
                .iter()
                .map(|p| [scale * p[0], scale * p[1]])
                .collect(),
            normals: grid
                .normals()
                .iter()
                .map(|n| [normal_sign * n[0], normal_sign * n[1]])
                .collect(),
            weights: grid.arc_weights().iter().map(|w| w * scale.abs()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn min_distance(&self, other: &NodeSet) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.points {
            for q in &other.points {
                best = best.min((p[0] - q[0]).hypot(p[1] - q[1]));
            }
        }
        best
    }
}

/// Fill a `rows × cols` matrix column by column in parallel.
pub(crate) fn par_matrix(
    rows: usize,
    cols: usize,
    entry: impl Fn(usize, usize) -> f64 + Sync,
) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols);
    m.as_mut_slice()
        .par_chunks_mut(rows.max(1))
        .enumerate()
        .for_each(|(j, col)| {
            for (i, v) in col.iter_mut().enumerate() {
                *v = entry(i, j);
            }
        });
    m
}

#[inline]
fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `ν_xᵀ ∇²G_2(d) ν_y`
#[inline]
fn hessian_g2_form(d: [f64; 2], nx: [f64; 2], ny: [f64; 2]) -> f64 {
    let r2 = dot(d, d);
    -(dot(nx, ny) / r2 - 2.0 * dot(d, nx) * dot(d, ny) / (r2 * r2)) / (2.0 * PI)
}

/// Pointwise cross kernel `k(x, y)` (without the quadrature weight).
#[inline]
pub(crate) fn cross_kernel(
    kind: Kind,
    x: [f64; 2],
    nx: [f64; 2],
    y: [f64; 2],
    ny: [f64; 2],
) -> f64 {
    let d = sub(x, y);
    match kind {
        Kind::V => g2(d),
        Kind::K => -dot(ny, grad_g2(d)),
        Kind::Kprime => dot(nx, grad_g2(d)),
        Kind::W => hessian_g2_form(d, nx, ny),
    }
}

/// Trapezoid Nyström matrix of the smooth kernel of `kind` between node sets
/// that are assumed disjoint.
pub fn cross_nodes(kind: Kind, target: &NodeSet, source: &NodeSet) -> DMatrix<f64> {
    par_matrix(target.len(), source.len(), |i, j| {
        cross_kernel(
            kind,
            target.points[i],
            target.normals[i],
            source.points[j],
            source.normals[j],
        ) * source.weights[j]
    })
}

/// Cross operator of `kind` from densities on `source` to values on `target`.
pub fn assemble_cross(kind: Kind, target: &Grid, source: &Grid) -> Result<BoundaryOp> {
    let t = NodeSet::from_grid(target);
    let s = NodeSet::from_grid(source);
    let dist = t.min_distance(&s);
    let crossing = crate::geometry::polylines_intersect(
        &target.curve().polyline(1024),
        &source.curve().polyline(1024),
    );
    if crossing || !(dist > 0.0) {
        return Err(Error::Intersecting(dist));
    }
    Ok(BoundaryOp::new(
        OpTag::Cross(kind),
        cross_nodes(kind, &t, &s),
    ))
}

/// Single layer `V` by logarithmic product quadrature.
pub fn assemble_v(grid: &Grid) -> BoundaryOp {
    BoundaryOp::new(OpTag::Layer(Kind::V), single_layer_matrix(grid))
}

fn single_layer_matrix(grid: &Grid) -> DMatrix<f64> {
    let n = grid.len();
    let r = log_weights(n);
    let w = grid.weight();
    let pts = grid.points();
    let sp = grid.speeds();
    let c = 1.0 / (4.0 * PI);
    par_matrix(n, n, |i, j| {
        let smooth = if i == j {
            -c * (sp[i] * sp[i]).ln()
        } else {
            let d = sub(pts[i], pts[j]);
            let half = 0.5 * (grid.param(i) - grid.param(j));
            let s = half.sin();
            -c * (dot(d, d) / (4.0 * s * s)).ln()
        };
        let k = (i + n - j) % n;
        sp[j] * (-c * r[k] + w * smooth)
    })
}

/// Double layer trace `K`.
pub fn assemble_k(grid: &Grid) -> BoundaryOp {
    let pts = grid.points();
    let nu = grid.normals();
    let sp = grid.speeds();
    let kap = grid.curvatures();
    let w = grid.weight();
    let m = par_matrix(grid.len(), grid.len(), |i, j| {
        if i == j {
            -kap[i] / (4.0 * PI) * w * sp[i]
        } else {
            cross_kernel(Kind::K, pts[i], nu[i], pts[j], nu[j]) * w * sp[j]
        }
    });
    BoundaryOp::new(OpTag::Layer(Kind::K), m)
}

/// Adjoint double layer `K′`.
pub fn assemble_kprime(grid: &Grid) -> BoundaryOp {
    let pts = grid.points();
    let nu = grid.normals();
    let sp = grid.speeds();
    let kap = grid.curvatures();
    let w = grid.weight();
    let m = par_matrix(grid.len(), grid.len(), |i, j| {
        if i == j {
            -kap[i] / (4.0 * PI) * w * sp[i]
        } else {
            cross_kernel(Kind::Kprime, pts[i], nu[i], pts[j], nu[j]) * w * sp[j]
        }
    });
    BoundaryOp::new(OpTag::Layer(Kind::Kprime), m)
}

/// Arclength differentiation `diag(1/speed)·D_t`.
fn arclength_diff(grid: &Grid) -> DMatrix<f64> {
    let mut d = diff_matrix(grid.len());
    for (i, s) in grid.speeds().iter().enumerate() {
        d.row_mut(i).scale_mut(1.0 / s);
    }
    d
}

/// Hypersingular operator `W = −∂_s V ∂_s`, evaluated on a grid with twice as
/// many nodes so the Nyquist mode of the input is differentiated exactly.
pub fn assemble_w(grid: &Grid) -> BoundaryOp {
    let n = grid.len();
    let fine = Grid::new(grid.curve(), 2 * n).expect("doubling an admissible grid");
    let ds = arclength_diff(&fine);
    let v = single_layer_matrix(&fine);
    let up = resample_matrix(n, 2 * n);
    let right = &ds * up;
    let left = DMatrix::from_fn(n, 2 * n, |i, j| ds[(2 * i, j)]);
    let m = -(left * v * right);
    BoundaryOp::new(OpTag::Layer(Kind::W), m)
}

/// Self-interaction operator of the given kind.
pub fn assemble(kind: Kind, grid: &Grid) -> BoundaryOp {
    match kind {
        Kind::V => assemble_v(grid),
        Kind::K => assemble_k(grid),
        Kind::Kprime => assemble_kprime(grid),
        Kind::W => assemble_w(grid),
    }
}

/// Discrete `L²(∂Ω)` pairing `Σ a_j b_j speed_j 2π/N`.
pub fn pairing(grid: &Grid, a: &Density, b: &Density) -> Result<f64> {
    grid.check_density(a)?;
    grid.check_density(b)?;
    Ok(a.values()
        .iter()
        .zip(b.values())
        .zip(grid.arc_weights())
        .map(|((x, y), w)| x * y * w)
        .sum())
}

/// Layer potential type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Potential {
    /// Single layer `S[μ](x) = ∫ G(x − y) μ(y) dσ_y`.
    Single,
    /// Double layer `D[ψ](x) = −∫ ν(y)·∇G(x − y) ψ(y) dσ_y`.
    Double,
}

/// Minimum distance in grid spacings for trapezoidal potential evaluation.
pub const NEAR_FIELD_SPACINGS: f64 = 5.0;

/// Value and gradient of a potential at `x` by the trapezoid rule.
fn potential_with_gradient(
    kind: Potential,
    nodes: &NodeSet,
    density: &[f64],
    x: [f64; 2],
) -> (f64, [f64; 2]) {
    let mut val = 0.0;
    let mut grad = [0.0; 2];
    for j in 0..nodes.len() {
        let d = sub(x, nodes.points[j]);
        let r2 = dot(d, d);
        let c = density[j] * nodes.weights[j];
        match kind {
            Potential::Single => {
                val += c * g2(d);
                let g = grad_g2(d);
                grad[0] += c * g[0];
                grad[1] += c * g[1];
            }
            Potential::Double => {
                let ny = nodes.normals[j];
                // −ν·∇G = ν·d / (2π r²)
                let nd = dot(ny, d);
                val += c * nd / (2.0 * PI * r2);
                for (k, g) in grad.iter_mut().enumerate() {
                    *g += c * (ny[k] / r2 - 2.0 * nd * d[k] / (r2 * r2)) / (2.0 * PI);
                }
            }
        }
    }
    (val, grad)
}

/// Potential value at an off-boundary point.
pub fn eval_potential(kind: Potential, grid: &Grid, density: &Density, x: [f64; 2]) -> Result<f64> {
    grid.check_density(density)?;
    let required = NEAR_FIELD_SPACINGS * grid.spacing();
    let distance = grid.node_distance(x);
    if distance < required {
        return Err(Error::TooClose { distance, required });
    }
    let nodes = NodeSet::from_grid(grid);
    Ok(potential_with_gradient(kind, &nodes, density.values(), x).0)
}

/// Gradient of a potential at an off-boundary point.
pub fn eval_potential_gradient(
    kind: Potential,
    grid: &Grid,
    density: &Density,
    x: [f64; 2],
) -> Result<[f64; 2]> {
    grid.check_density(density)?;
    let required = NEAR_FIELD_SPACINGS * grid.spacing();
    let distance = grid.node_distance(x);
    if distance < required {
        return Err(Error::TooClose { distance, required });
    }
    let nodes = NodeSet::from_grid(grid);
    Ok(potential_with_gradient(kind, &nodes, density.values(), x).1)
}

/// Offsets along the normal used for the one-sided traces.
pub const TRACE_OFFSETS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Limit `h → 0` from values at `h, h/2, h/4`, cancelling the `h` and `h²` terms.
pub fn richardson(f_h: f64, f_h2: f64, f_h4: f64) -> f64 {
    (8.0 * f_h4 - 6.0 * f_h2 + f_h) / 3.0
}

/// Node count of the refined grid used to evaluate potentials at the trace
/// offsets: a multiple of `grid.len()` whose spacing admits the smallest offset.
fn trace_grid_size(grid: &Grid) -> usize {
    let hmin = TRACE_OFFSETS[2];
    let max_speed = grid.speeds().iter().cloned().fold(0.0, f64::max);
    let mut m = grid.len();
    while NEAR_FIELD_SPACINGS * max_speed * 2.0 * PI / m as f64 > hmin && m < (1 << 16) {
        m *= 2;
    }
    m
}

/// Residuals of the four jump relations, in the max norm over nodes:
/// `D^int − (−½ψ + Kψ)`, `D^ext − (½ψ + Kψ)`,
/// `∂_ν S^int − (½μ + K′μ)`, `∂_ν S^ext − (−½μ + K′μ)`.
///
/// One-sided traces are extrapolated from the points `x ∓ hν` with
/// `h ∈ TRACE_OFFSETS`; the densities are interpolated to a finer grid for
/// the off-boundary evaluation.
pub fn jump_residuals(grid: &Grid, psi: &Density, mu: &Density) -> Result<[f64; 4]> {
    grid.check_density(psi)?;
    grid.check_density(mu)?;
    let n = grid.len();
    let m = trace_grid_size(grid);
    let fine = Grid::new(grid.curve(), m)?;
    let nodes = NodeSet::from_grid(&fine);
    let psi_f = TrigInterpolant::from_samples(psi.values()).sample(m);
    let mu_f = TrigInterpolant::from_samples(mu.values()).sample(m);

    let kpsi = assemble_k(grid).apply(psi)?;
    let kpmu = assemble_kprime(grid).apply(mu)?;

    let rows: Vec<[f64; 4]> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = grid.points()[i];
            let nu = grid.normals()[i];
            let trace = |side: f64, kind: Potential, dens: &[f64]| {
                let vals: Vec<f64> = TRACE_OFFSETS
                    .iter()
                    .map(|&h| {
                        let p = [x[0] + side * h * nu[0], x[1] + side * h * nu[1]];
                        let (v, g) = potential_with_gradient(kind, &nodes, dens, p);
                        match kind {
                            Potential::Double => v,
                            Potential::Single => dot(g, nu),
                        }
                    })
                    .collect();
                richardson(vals[0], vals[1], vals[2])
            };
            let (p, q) = (psi.values()[i], mu.values()[i]);
            [
                (trace(-1.0, Potential::Double, &psi_f) - (-0.5 * p + kpsi.values()[i])).abs(),
                (trace(1.0, Potential::Double, &psi_f) - (0.5 * p + kpsi.values()[i])).abs(),
                (trace(-1.0, Potential::Single, &mu_f) - (0.5 * q + kpmu.values()[i])).abs(),
                (trace(1.0, Potential::Single, &mu_f) - (-0.5 * q + kpmu.values()[i])).abs(),
            ]
        })
        .collect();
    let mut out = [0.0f64; 4];
    for r in rows {
        for k in 0..4 {
            out[k] = out[k].max(r[k]);
        }
    }
    Ok(out)
}
