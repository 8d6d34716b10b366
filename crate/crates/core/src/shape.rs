//! Operators pulled back to a fixed reference grid, the Calderón projector,
//! and finite-difference evidence of smooth dependence on the boundary.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::{fornberg_weights, loglog_slope};
use crate::geometry::{apply_diffeo, Density, Diffeo, Grid, TrigCurve};
use crate::operators::{assemble, matrix_norm_inf, BlockOp, BoundaryOp, Kind, OpTag};

/// An operator on `φ(∂Ω)` read through the node indices of the reference grid.
#[derive(Clone, Debug)]
pub struct PulledBackOp {
    pub kind: Kind,
    pub phi: Diffeo,
    pub op: BoundaryOp,
}

/// Assemble `kind` on the image curve at the image nodes `φ(p_ref(t_j))`.
pub fn pullback(kind: Kind, phi: &Diffeo, n: usize) -> Result<PulledBackOp> {
    let grid = Grid::new(&apply_diffeo(phi)?, n)?;
    Ok(PulledBackOp {
        kind,
        phi: phi.clone(),
        op: assemble(kind, &grid),
    })
}

/// `C_φ = [[½I − K_φ, V_φ], [W_φ, ½I + K′_φ]]` acting on Cauchy data `(ψ, μ)`.
#[derive(Clone, Debug)]
pub struct CalderonOp {
    pub block: BlockOp,
}

impl CalderonOp {
    pub fn dense(&self) -> DMatrix<f64> {
        self.block.to_dense()
    }

    pub fn apply(&self, psi: &Density, mu: &Density) -> Result<(Density, Density)> {
        self.block.apply(psi, mu)
    }

    /// `‖C² − C‖_∞`
    pub fn idempotency_residual(&self) -> f64 {
        let c = self.dense();
        matrix_norm_inf(&(&c * &c - &c))
    }

    /// `‖(I − C)² − (I − C)‖_∞`
    pub fn complement_residual(&self) -> f64 {
        let c = self.dense();
        let q = DMatrix::identity(c.nrows(), c.ncols()) - c;
        matrix_norm_inf(&(&q * &q - &q))
    }
}

pub fn calderon(phi: &Diffeo, n: usize) -> Result<CalderonOp> {
    let grid = Grid::new(&apply_diffeo(phi)?, n)?;
    let half = DMatrix::<f64>::identity(n, n) * 0.5;
    let k = assemble(Kind::K, &grid).matrix;
    let kp = assemble(Kind::Kprime, &grid).matrix;
    let block = BlockOp::new([
        [
            BoundaryOp::new(OpTag::Composite, &half - k),
            assemble(Kind::V, &grid),
        ],
        [
            assemble(Kind::W, &grid),
            BoundaryOp::new(OpTag::Composite, &half + kp),
        ],
    ])?;
    Ok(CalderonOp { block })
}

/// Step of the stencil used for the Taylor derivatives.
pub const TAYLOR_STEP: f64 = 0.02;
/// Stencil half-width (11 points).
pub const TAYLOR_HALF_WIDTH: i32 = 5;
/// Highest Taylor order checked.
pub const TAYLOR_ORDER: usize = 3;

/// Result of a finite-difference study along `φ + t·h`.
#[derive(Clone, Debug)]
pub struct FdReport {
    pub kind: Kind,
    pub n: usize,
    /// Step sizes actually used, decreasing.
    pub t: Vec<f64>,
    /// `‖D_t − D_{t_ref}‖_∞` with `D_t` the central difference.
    pub diff_norms: Vec<f64>,
    pub t_ref: f64,
    /// Fitted order of the central difference (expected 2).
    pub fd_slope: Option<f64>,
    /// `taylor_remainders[m - 1][i] = ‖Op(φ + t_i h) − Σ_{j≤m} t_i^j/j! Δ^j‖_∞`.
    pub taylor_remainders: Vec<Vec<f64>>,
    /// Fitted order per Taylor order `m` (expected `m + 1`).
    pub taylor_slopes: Vec<Option<f64>>,
    /// Requested steps for which `φ ± t·h` was not a valid diffeomorphism.
    pub dropped: Vec<f64>,
    /// Largest `‖Op(φ + t h) − Op(φ)‖_∞` over the steps used.
    pub max_variation: f64,
}

fn op_matrix(kind: Kind, phi: &Diffeo, dir: &TrigCurve, t: f64, n: usize) -> Result<DMatrix<f64>> {
    Ok(pullback(kind, &phi.perturbed(t, dir), n)?.op.matrix)
}

/// Finite-difference and Taylor-remainder orders of `t ↦ Op(φ + t·h)`.
pub fn shape_fd_study(
    kind: Kind,
    phi: &Diffeo,
    direction: &TrigCurve,
    t_list: &[f64],
    n: usize,
) -> Result<FdReport> {
    if t_list.is_empty() || t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Config("t_list must hold positive step sizes".into()));
    }
    let base = op_matrix(kind, phi, direction, 0.0, n)?;

    let mut steps: Vec<f64> = t_list.to_vec();
    steps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut dropped = Vec::new();
    let mut pairs = Vec::new();
    for &t in &steps {
        match (
            op_matrix(kind, phi, direction, t, n),
            op_matrix(kind, phi, direction, -t, n),
        ) {
            (Ok(p), Ok(m)) => pairs.push((t, p, m)),
            (Err(Error::InvalidDiffeo(_)), _) | (_, Err(Error::InvalidDiffeo(_))) => {
                dropped.push(t)
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    if pairs.is_empty() {
        return Err(Error::InvalidDiffeo(
            "no step in t_list keeps φ ± t·h a valid diffeomorphism".into(),
        ));
    }

    let t_min = pairs.last().unwrap().0;
    let t_ref = t_min / 16.0;
    let d_ref = (op_matrix(kind, phi, direction, t_ref, n)?
        - op_matrix(kind, phi, direction, -t_ref, n)?)
        / (2.0 * t_ref);

    let t: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let diff_norms: Vec<f64> = pairs
        .iter()
        .map(|(t, p, m)| matrix_norm_inf(&((p - m) / (2.0 * t) - &d_ref)))
        .collect();
    let max_variation = pairs
        .iter()
        .map(|(_, p, _)| matrix_norm_inf(&(p - &base)))
        .fold(0.0, f64::max);

    // derivatives Δ^m at t = 0 from an 11-point stencil
    let offsets: Vec<f64> = (-TAYLOR_HALF_WIDTH..=TAYLOR_HALF_WIDTH)
        .map(|k| TAYLOR_STEP * k as f64)
        .collect();
    let weights = fornberg_weights(0.0, &offsets, TAYLOR_ORDER);
    let samples: Vec<DMatrix<f64>> = offsets
        .par_iter()
        .map(|&s| op_matrix(kind, phi, direction, s, n))
        .collect::<Result<_>>()?;
    let derivs: Vec<DMatrix<f64>> = (1..=TAYLOR_ORDER)
        .map(|m| {
            let mut d = DMatrix::zeros(base.nrows(), base.ncols());
            for (w, s) in weights[m].iter().zip(&samples) {
                d += s * *w;
            }
            d
        })
        .collect();

    let mut taylor_remainders = vec![Vec::new(); TAYLOR_ORDER];
    for (t, p, _) in &pairs {
        let mut approx = base.clone();
        let mut fact = 1.0;
        for m in 1..=TAYLOR_ORDER {
            fact *= m as f64;
            approx += &derivs[m - 1] * (t.powi(m as i32) / fact);
            taylor_remainders[m - 1].push(matrix_norm_inf(&(p - &approx)));
        }
    }
    let taylor_slopes = taylor_remainders
        .iter()
        .map(|r| loglog_slope(&t, r))
        .collect();

    Ok(FdReport {
        kind,
        n,
        fd_slope: loglog_slope(&t, &diff_norms),
        t,
        diff_norms,
        t_ref,
        taylor_remainders,
        taylor_slopes,
        dropped,
        max_variation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{directions, make_circle, Curve};

    #[test]
    fn identity_pullback_is_plain_assembly() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        let g = Grid::new(&c, 32).unwrap();
        for kind in Kind::ALL {
            let p = pullback(kind, &Diffeo::identity(&c), 32).unwrap();
            assert_eq!(p.op.matrix, assemble(kind, &g).matrix);
        }
    }

    #[test]
    fn dilated_circle() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        let phi = Diffeo::dilation(&c, 2.0);
        let v = pullback(Kind::V, &phi, 32).unwrap().op;
        let k = pullback(Kind::K, &phi, 32).unwrap().op;
        let one = Density::new(vec![1.0; 32]);
        for x in v.apply(&one).unwrap().values() {
            assert!((x + 2.0 * 2f64.ln()).abs() < 1e-13);
        }
        for x in k.apply(&one).unwrap().values() {
            assert!((x + 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn calderon_fixed_points_on_circle() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        let cal = calderon(&Diffeo::identity(&c), 64).unwrap();
        let g = Grid::new(&c, 64).unwrap();
        let one = Density::constant(&g, 1.0);
        let zero = Density::constant(&g, 0.0);
        let (a, b) = cal.apply(&one, &zero).unwrap();
        assert!(a.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(b.max_abs() < 1e-12);
        let cos = Density::from_fn(&g, |t, _| t.cos());
        let (a, b) = cal.apply(&cos, &cos).unwrap();
        for j in 0..64 {
            assert!((a.values()[j] - cos.values()[j]).abs() < 1e-12);
            assert!((b.values()[j] - cos.values()[j]).abs() < 1e-12);
        }
        assert!(cal.idempotency_residual() < 1e-10);
    }

    #[test]
    fn zero_direction_gives_zero_differences() {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let rep = shape_fd_study(
            Kind::V,
            &Diffeo::identity(&c),
            &TrigCurve::zero(1),
            &[1e-2, 5e-3],
            16,
        )
        .unwrap();
        assert!(rep.diff_norms.iter().all(|d| *d == 0.0));
        assert!(rep.fd_slope.is_none());
    }

    #[test]
    fn radial_family_orders() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        let h = directions::radial_cos(&c, 2);
        let rep = shape_fd_study(
            Kind::V,
            &Diffeo::identity(&c),
            &h,
            &[1e-2, 5e-3, 2.5e-3],
            32,
        )
        .unwrap();
        let s = rep.fd_slope.unwrap();
        assert!((s - 2.0).abs() < 0.2, "{rep:?}");
        let s = rep.taylor_slopes[2].unwrap();
        assert!((s - 4.0).abs() < 0.3, "{rep:?}");
    }
}
