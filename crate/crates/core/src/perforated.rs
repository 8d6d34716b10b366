//! Operators on the perforated domain `Ω(ε) = Ω^o ∖ εΩ̄^i`.
//!
//! Densities on the hole boundary `∂(εΩ^i)` are pulled back to `∂Ω^i` through
//! `x = εt`, so every operator becomes a 2×2 block over the fixed node sets of
//! `∂Ω^o` and `∂Ω^i`. [`assemble_block`] builds the blocks from single-curve
//! operators and the ε-dependent analytic cross parts; [`assemble_direct`]
//! assembles the same operator straight on the two-component boundary. The
//! analytic parts are power series in ε whose coefficients [`series_coeff`]
//! builds in low-rank form from kernel derivatives and boundary moments.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::loglog_slope;
use crate::geometry::{epsilon_max, scale_curve, Curve, Density, Grid};
use crate::kernel::{enumerate_multiindices, planar_table, MultiIndex, K_MAX};
use crate::operators::{
    assemble, cross_nodes, matrix_norm_inf, BlockOp, BoundaryOp, Kind, NodeSet, OpTag,
};

/// Off-diagonal corner of a block operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    /// Outer targets, inner sources.
    #[serde(rename = "oi")]
    OuterInner,
    /// Inner targets, outer sources.
    #[serde(rename = "io")]
    InnerOuter,
}

impl Corner {
    pub const ALL: [Corner; 2] = [Corner::OuterInner, Corner::InnerOuter];

    pub fn name(self) -> &'static str {
        match self {
            Corner::OuterInner => "oi",
            Corner::InnerOuter => "io",
        }
    }

    pub fn parse(s: &str) -> Result<Corner> {
        match s {
            "oi" => Ok(Corner::OuterInner),
            "io" => Ok(Corner::InnerOuter),
            other => Err(Error::Config(format!("unknown corner `{other}`"))),
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outer and inner reference curves with their grids and the admissible
/// range of ε.
#[derive(Clone, Debug)]
pub struct PerforatedConfig {
    outer: Grid,
    inner: Grid,
    eps_bound: f64,
    pub eps: f64,
}

impl PerforatedConfig {
    /// Validates the geometry; `eps` must satisfy `0 < |eps| < epsilon_max`.
    pub fn new(
        outer: &Curve,
        inner: &Curve,
        n_outer: usize,
        n_inner: usize,
        eps: f64,
    ) -> Result<Self> {
        let eps_bound = epsilon_max(outer, inner)?;
        let cfg = PerforatedConfig {
            outer: Grid::new(outer, n_outer)?,
            inner: Grid::new(inner, n_inner)?,
            eps_bound,
            eps,
        };
        cfg.check_eps(eps)?;
        Ok(cfg)
    }

    pub fn outer(&self) -> &Grid {
        &self.outer
    }

    pub fn inner(&self) -> &Grid {
        &self.inner
    }

    /// `epsilon_max(Ω^o, Ω^i)`
    pub fn eps_bound(&self) -> f64 {
        self.eps_bound
    }

    pub fn check_eps(&self, eps: f64) -> Result<()> {
        if eps == 0.0 || !eps.is_finite() || eps.abs() >= self.eps_bound {
            return Err(Error::EpsilonOutOfRange {
                eps,
                bound: self.eps_bound,
            });
        }
        Ok(())
    }

    /// The same geometry at another ε.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        self.check_eps(eps)?;
        Ok(PerforatedConfig {
            eps,
            ..self.clone()
        })
    }
}

/// Inner nodes `ε·s_j` with reference normals and weights.
fn inner_at(grid: &Grid, eps: f64) -> NodeSet {
    NodeSet {
        points: grid
            .points()
            .iter()
            .map(|p| [eps * p[0], eps * p[1]])
            .collect(),
        normals: grid.normals().to_vec(),
        weights: grid.arc_weights(),
    }
}

/// The ε-evaluated analytic part of an off-diagonal block, before the
/// elementary factors `|ε|`, `ε`, `sgn ε`, `|ε|^{-1}` are applied.
pub fn analytic_part(kind: Kind, corner: Corner, cfg: &PerforatedConfig) -> BoundaryOp {
    let eps = cfg.eps;
    let outer = NodeSet::from_grid(&cfg.outer);
    let inner = inner_at(&cfg.inner, eps);
    let m = match corner {
        Corner::OuterInner => {
            let m = cross_nodes(kind, &outer, &inner);
            match kind {
                Kind::V | Kind::Kprime => m,
                Kind::K | Kind::W => -m,
            }
        }
        Corner::InnerOuter => {
            let m = cross_nodes(kind, &inner, &outer);
            match kind {
                Kind::V | Kind::K => m,
                Kind::Kprime => -m,
                Kind::W => m * (-eps),
            }
        }
    };
    BoundaryOp::new(OpTag::Cross(kind), m)
}

/// Block representation of the operator of `kind` on `∂Ω(ε)`.
pub fn assemble_block(kind: Kind, cfg: &PerforatedConfig) -> Result<BlockOp> {
    let eps = cfg.eps;
    cfg.check_eps(eps)?;
    let a = eps.abs();
    let sgn = eps.signum();
    let oo = assemble(kind, &cfg.outer);
    let ii = assemble(kind, &cfg.inner);
    let oi = analytic_part(kind, Corner::OuterInner, cfg).matrix;
    let io = analytic_part(kind, Corner::InnerOuter, cfg).matrix;
    let (oi, io, ii) = match kind {
        Kind::V => {
            let w = cfg.inner.arc_weights();
            let n = cfg.inner.len();
            let log_term = a * a.ln() / (2.0 * PI);
            let int = DMatrix::from_fn(n, n, |_, j| w[j]);
            (oi * a, io, ii.matrix * a - int * log_term)
        }
        Kind::K => (oi * eps, io, -ii.matrix),
        Kind::Kprime => (oi * a, io * sgn, -ii.matrix),
        Kind::W => (oi * eps, io / a, ii.matrix / a),
    };
    BlockOp::new([
        [oo, BoundaryOp::new(OpTag::Composite, oi)],
        [
            BoundaryOp::new(OpTag::Composite, io),
            BoundaryOp::new(OpTag::Composite, ii),
        ],
    ])
}

/// The operator of `kind` assembled directly on `∂Ω^o ∪ ∂(εΩ^i)` with the
/// outward normal of `Ω(ε)` (pointing into the hole on the inner part), then
/// read on the reference nodes through `x = εt`.
pub fn assemble_direct(kind: Kind, cfg: &PerforatedConfig) -> Result<BlockOp> {
    let eps = cfg.eps;
    cfg.check_eps(eps)?;
    let hole = Grid::new(&scale_curve(cfg.inner.curve(), eps)?, cfg.inner.len())?;
    // outward for Ω(ε) is inward for the hole
    let hole_nodes = NodeSet::scaled(&hole, 1.0, -1.0);
    let outer_nodes = NodeSet::from_grid(&cfg.outer);

    let oo = assemble(kind, &cfg.outer);
    let hole_op = assemble(kind, &hole).matrix;
    // a reversed normal flips the sign of K and K′ and leaves V, W unchanged
    let ii = match kind {
        Kind::K | Kind::Kprime => -hole_op,
        Kind::V | Kind::W => hole_op,
    };
    let oi = cross_nodes(kind, &outer_nodes, &hole_nodes);
    let io = cross_nodes(kind, &hole_nodes, &outer_nodes);
    BlockOp::new([
        [oo, BoundaryOp::new(OpTag::Cross(kind), oi)],
        [
            BoundaryOp::new(OpTag::Cross(kind), io),
            BoundaryOp::new(OpTag::Layer(kind), ii),
        ],
    ])
}

/// `k`-th power-series coefficient of an analytic part, stored as a sum of
/// outer products `Σ u vᵀ` (target vector `u`, source functional `v`).
#[derive(Clone, Debug)]
pub struct SeriesCoeff {
    pub kind: Kind,
    pub corner: Corner,
    pub k: usize,
    pub terms: Vec<(DVector<f64>, DVector<f64>)>,
}

impl SeriesCoeff {
    pub fn rows(&self) -> usize {
        self.terms.first().map_or(0, |t| t.0.len())
    }

    pub fn to_matrix(&self, rows: usize, cols: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(rows, cols);
        for (u, v) in &self.terms {
            m.ger(1.0, u, v, 1.0);
        }
        m
    }

    pub fn to_op(&self, cfg: &PerforatedConfig) -> BoundaryOp {
        let (rows, cols) = corner_shape(self.corner, cfg);
        BoundaryOp::new(OpTag::Series(self.kind), self.to_matrix(rows, cols))
    }

    /// Apply without forming the dense matrix.
    pub fn apply(&self, density: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows()];
        for (u, v) in &self.terms {
            let c: f64 = v.iter().zip(density).map(|(a, b)| a * b).sum();
            for (o, x) in out.iter_mut().zip(u.iter()) {
                *o += c * x;
            }
        }
        out
    }
}

fn corner_shape(corner: Corner, cfg: &PerforatedConfig) -> (usize, usize) {
    match corner {
        Corner::OuterInner => (cfg.outer.len(), cfg.inner.len()),
        Corner::InnerOuter => (cfg.inner.len(), cfg.outer.len()),
    }
}

/// Coefficient of `ε^k` in the expansion of [`analytic_part`]. Only kernel
/// derivatives `D^β G` with `|β| = k` (and their first or second partials)
/// and moments of order `k` enter.
pub fn series_coeff(
    kind: Kind,
    corner: Corner,
    k: usize,
    cfg: &PerforatedConfig,
) -> Result<SeriesCoeff> {
    if k > K_MAX {
        return Err(Error::OrderTooHigh {
            order: k,
            max: K_MAX,
        });
    }
    let table = planar_table();
    let outer = &cfg.outer;
    let inner = &cfg.inner;
    let wo = outer.arc_weights();
    let wi = inner.arc_weights();
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };

    let d = |beta: &MultiIndex, x: &[f64; 2]| {
        table
            .get(beta)
            .map(|g| g.eval_unchecked(x, x[0] * x[0] + x[1] * x[1]))
    };
    let at_outer = |f: &dyn Fn(usize) -> Result<f64>| -> Result<DVector<f64>> {
        let vals = (0..outer.len()).map(f).collect::<Result<Vec<f64>>>()?;
        Ok(DVector::from_vec(vals))
    };
    let at_inner = |f: &dyn Fn(usize) -> f64| DVector::from_fn(inner.len(), |j, _| f(j));

    let mut terms = Vec::new();
    for beta in enumerate_multiindices(2, k) {
        let c = sign / beta.factorial();
        let mono = |j: usize| beta.monomial(&inner.points()[j]);
        let xs = outer.points();
        let no = outer.normals();
        let ni = inner.normals();
        // ν_o(y)·∇D^βG(y)
        let normal_grad = |a: usize| -> Result<f64> {
            Ok(no[a][0] * d(&beta.raised(0), &xs[a])? + no[a][1] * d(&beta.raised(1), &xs[a])?)
        };
        match (kind, corner) {
            (Kind::V, Corner::OuterInner) => {
                terms.push((
                    at_outer(&|a| Ok(c * d(&beta, &xs[a])?))?,
                    at_inner(&|j| mono(j) * wi[j]),
                ));
            }
            (Kind::V, Corner::InnerOuter) => {
                terms.push((
                    at_inner(&|j| c * mono(j)),
                    at_outer(&|a| Ok(d(&beta, &xs[a])? * wo[a]))?,
                ));
            }
            (Kind::K, Corner::OuterInner) => {
                for l in 0..2 {
                    terms.push((
                        at_outer(&|a| Ok(c * d(&beta.raised(l), &xs[a])?))?,
                        at_inner(&|j| ni[j][l] * mono(j) * wi[j]),
                    ));
                }
            }
            (Kind::K, Corner::InnerOuter) => {
                terms.push((
                    at_inner(&|j| c * mono(j)),
                    at_outer(&|a| Ok(normal_grad(a)? * wo[a]))?,
                ));
            }
            (Kind::Kprime, Corner::OuterInner) => {
                terms.push((
                    at_outer(&|a| Ok(c * normal_grad(a)?))?,
                    at_inner(&|j| mono(j) * wi[j]),
                ));
            }
            (Kind::Kprime, Corner::InnerOuter) => {
                for l in 0..2 {
                    terms.push((
                        at_inner(&|j| c * mono(j) * ni[j][l]),
                        at_outer(&|a| Ok(d(&beta.raised(l), &xs[a])? * wo[a]))?,
                    ));
                }
            }
            (Kind::W, Corner::OuterInner) => {
                for l in 0..2 {
                    let bl = beta.raised(l);
                    terms.push((
                        at_outer(&|a| {
                            let h = no[a][0] * d(&bl.raised(0), &xs[a])?
                                + no[a][1] * d(&bl.raised(1), &xs[a])?;
                            Ok(-c * h)
                        })?,
                        at_inner(&|j| ni[j][l] * mono(j) * wi[j]),
                    ));
                }
            }
            (Kind::W, Corner::InnerOuter) => {
                if k == 0 {
                    continue;
                }
                terms.push((
                    at_inner(&|j| c * crate::geometry::normal_poly_derivative(inner, &beta, j)),
                    at_outer(&|a| Ok(normal_grad(a)? * wo[a]))?,
                ));
            }
        }
    }
    if terms.is_empty() {
        let (rows, cols) = corner_shape(corner, cfg);
        terms.push((DVector::zeros(rows), DVector::zeros(cols)));
    }
    Ok(SeriesCoeff {
        kind,
        corner,
        k,
        terms,
    })
}

/// `Σ_{k ≤ K} ε^k · series_coeff(k)`; `ε = 0` is allowed.
pub fn series_truncate(
    kind: Kind,
    corner: Corner,
    order: usize,
    eps: f64,
    cfg: &PerforatedConfig,
) -> Result<BoundaryOp> {
    let (rows, cols) = corner_shape(corner, cfg);
    let mut m = DMatrix::zeros(rows, cols);
    for k in 0..=order {
        let coeff = series_coeff(kind, corner, k, cfg)?;
        let scale = if k == 0 { 1.0 } else { eps.powi(k as i32) };
        m += coeff.to_matrix(rows, cols) * scale;
    }
    Ok(BoundaryOp::new(OpTag::Series(kind), m))
}

/// How truncation errors are measured.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorNorm {
    /// Induced ∞-norm of the matrix difference.
    #[default]
    Matrix,
    /// Max norm of the difference applied to [`even_test_density`].
    EvenDensity,
}

/// `Σ_{j=0}^{5} cos(2jt + 0.3j)`, invariant under `t ↦ t + π`; on centrally
/// symmetric curves parametrized so that `p(t + π) = −p(t)` it is even under
/// `s ↦ −s`.
pub fn even_test_density(grid: &Grid) -> Density {
    Density::from_fn(grid, |t, _| {
        (0..=5)
            .map(|j| (2.0 * j as f64 * t + 0.3 * j as f64).cos())
            .sum()
    })
}

/// One `(K, ε)` cell of a truncation study.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationRow {
    pub kind: Kind,
    pub corner: Corner,
    pub order: usize,
    pub eps: f64,
    pub error: f64,
    /// Least-squares slope of `log error` against `log ε` for this `K`.
    pub fitted_slope: Option<f64>,
}

/// Remainder `E(K, ε)` of the truncated series against the ε-evaluated
/// analytic part, with the fitted order per `K`.
pub fn truncation_study(
    kind: Kind,
    corner: Corner,
    orders: &[usize],
    eps_list: &[f64],
    cfg: &PerforatedConfig,
    norm: &ErrorNorm,
) -> Result<Vec<TruncationRow>> {
    for &e in eps_list {
        cfg.check_eps(e)?;
    }
    if let Some(&k) = orders.iter().find(|&&k| k > K_MAX) {
        return Err(Error::OrderTooHigh {
            order: k,
            max: K_MAX,
        });
    }
    let max_order = orders.iter().copied().max().unwrap_or(0);
    let (rows, cols) = corner_shape(corner, cfg);
    let coeffs: Vec<DMatrix<f64>> = (0..=max_order)
        .map(|k| series_coeff(kind, corner, k, cfg).map(|c| c.to_matrix(rows, cols)))
        .collect::<Result<_>>()?;
    let density = match corner {
        Corner::OuterInner => even_test_density(&cfg.inner),
        Corner::InnerOuter => even_test_density(&cfg.outer),
    };
    let theta = DVector::from_column_slice(density.values());

    let exact: Vec<DMatrix<f64>> = eps_list
        .par_iter()
        .map(|&e| {
            cfg.with_eps(e)
                .map(|c| analytic_part(kind, corner, &c).matrix)
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for &order in orders {
        let errors: Vec<f64> = eps_list
            .iter()
            .zip(&exact)
            .map(|(&e, ex)| {
                let mut diff = ex.clone();
                for (k, c) in coeffs.iter().enumerate().take(order + 1) {
                    diff -= c * e.powi(k as i32);
                }
                match norm {
                    ErrorNorm::Matrix => matrix_norm_inf(&diff),
                    ErrorNorm::EvenDensity => (&diff * &theta).amax(),
                }
            })
            .collect();
        let abs_eps: Vec<f64> = eps_list.iter().map(|e| e.abs()).collect();
        let slope = loglog_slope(&abs_eps, &errors);
        for (&e, &error) in eps_list.iter().zip(&errors) {
            out.push(TruncationRow {
                kind,
                corner,
                order,
                eps: e,
                error,
                fitted_slope: slope,
            });
        }
    }
    Ok(out)
}

/// Coefficient indices that can be nonzero on a centrally symmetric
/// geometry applied to a density even under `s ↦ −s`.
pub fn parity_allows(kind: Kind, corner: Corner, k: usize) -> bool {
    let odd_only = matches!(
        (kind, corner),
        (Kind::K, Corner::OuterInner)
            | (Kind::W, Corner::OuterInner)
            | (Kind::Kprime, Corner::InnerOuter)
    );
    (k % 2 == 1) == odd_only
}

/// Expected remainder order after truncating at `order`: the index of the
/// first coefficient beyond `order` that can be nonzero.
pub fn expected_slope(kind: Kind, corner: Corner, order: usize, symmetric: bool) -> usize {
    if !symmetric {
        return order + 1;
    }
    (order + 1..)
        .find(|&k| parity_allows(kind, corner, k))
        .unwrap()
}
