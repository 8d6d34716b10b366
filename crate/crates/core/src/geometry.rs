//! Closed planar curves given by trigonometric polynomials, quadrature grids on
//! them, and the boundary moments that enter the small-hole expansions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::MultiIndex;

/// Scalar trigonometric polynomial `Σ a_m cos(mt) + b_m sin(mt)`.
#[derive(Clone, Debug, PartialEq)]
struct TrigPoly {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPoly {
    fn degree(&self) -> usize {
        self.cos.len().saturating_sub(1)
    }

    /// `order`-th derivative at `t`.
    fn eval(&self, t: f64, order: u32) -> f64 {
        let mut acc = 0.0;
        for (m, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let mf = m as f64;
            let (s, c) = (mf * t).sin_cos();
            let f = mf.powi(order as i32);
            // d^order/dt^order cycles cos → −sin → −cos → sin
            let (vc, vs) = match order % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            acc += f * (a * vc + b * vs);
        }
        acc
    }

    fn resized(&self, degree: usize) -> TrigPoly {
        let mut cos = self.cos.clone();
        let mut sin = self.sin.clone();
        cos.resize(degree + 1, 0.0);
        sin.resize(degree + 1, 0.0);
        TrigPoly { cos, sin }
    }

    fn product(&self, other: &TrigPoly) -> TrigPoly {
        let deg = self.degree() + other.degree();
        let mut out = TrigPoly {
            cos: vec![0.0; deg + 1],
            sin: vec![0.0; deg + 1],
        };
        for (m, (a1, b1)) in self.cos.iter().zip(&self.sin).enumerate() {
            for (k, (a2, b2)) in other.cos.iter().zip(&other.sin).enumerate() {
                let sum = m + k;
                let diff = m.abs_diff(k);
                // cos·cos, sin·sin, sin·cos product-to-sum identities
                out.cos[sum] += 0.5 * (a1 * a2 - b1 * b2);
                out.cos[diff] += 0.5 * (a1 * a2 + b1 * b2);
                out.sin[sum] += 0.5 * (b1 * a2 + a1 * b2);
                let sd = if m >= k {
                    0.5 * (b1 * a2 - a1 * b2)
                } else {
                    0.5 * (a1 * b2 - b1 * a2)
                };
                out.sin[diff] += sd;
            }
        }
        out.sin[0] = 0.0;
        out
    }
}

/// Coefficient table of a vector trigonometric polynomial
/// `t ↦ (x(t), y(t))`; the JSON form of curves, diffeomorphisms and
/// perturbation directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigCurve {
    pub degree: usize,
    pub cos_x: Vec<f64>,
    pub sin_x: Vec<f64>,
    pub cos_y: Vec<f64>,
    pub sin_y: Vec<f64>,
}

impl TrigCurve {
    fn from_parts(x: TrigPoly, y: TrigPoly) -> Self {
        let degree = x.degree().max(y.degree());
        let (x, y) = (x.resized(degree), y.resized(degree));
        TrigCurve {
            degree,
            cos_x: x.cos,
            sin_x: x.sin,
            cos_y: y.cos,
            sin_y: y.sin,
        }
    }

    fn parts(&self) -> (TrigPoly, TrigPoly) {
        (
            TrigPoly {
                cos: self.cos_x.clone(),
                sin: self.sin_x.clone(),
            },
            TrigPoly {
                cos: self.cos_y.clone(),
                sin: self.sin_y.clone(),
            },
        )
    }

    /// The zero field of the given degree.
    pub fn zero(degree: usize) -> Self {
        let z = vec![0.0; degree + 1];
        TrigCurve {
            degree,
            cos_x: z.clone(),
            sin_x: z.clone(),
            cos_y: z.clone(),
            sin_y: z,
        }
    }

    /// Circle `center + radius·(cos t, sin t)`.
    pub fn circle(radius: f64, center: [f64; 2]) -> Self {
        let mut c = TrigCurve::zero(1);
        c.cos_x[0] = center[0];
        c.cos_y[0] = center[1];
        c.cos_x[1] = radius;
        c.sin_y[1] = radius;
        c
    }

    /// Axis-aligned ellipse `(a cos t, b sin t)`.
    pub fn ellipse(a: f64, b: f64) -> Self {
        let mut c = TrigCurve::zero(1);
        c.cos_x[1] = a;
        c.sin_y[1] = b;
        c
    }

    /// Kite `(cos t + 0.65 cos 2t − 0.65, 1.5 sin t)`.
    pub fn kite() -> Self {
        let mut c = TrigCurve::zero(2);
        c.cos_x[0] = -0.65;
        c.cos_x[1] = 1.0;
        c.cos_x[2] = 0.65;
        c.sin_y[1] = 1.5;
        c
    }

    pub fn check_shape(&self) -> Result<()> {
        let n = self.degree + 1;
        let lens = [
            self.cos_x.len(),
            self.sin_x.len(),
            self.cos_y.len(),
            self.sin_y.len(),
        ];
        if lens.iter().any(|&l| l != n) {
            return Err(Error::InvalidCurve(format!(
                "coefficient arrays must have degree + 1 = {n} entries, got {lens:?}"
            )));
        }
        let all = self
            .cos_x
            .iter()
            .chain(&self.sin_x)
            .chain(&self.cos_y)
            .chain(&self.sin_y);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// Point (`order = 0`) or `order`-th parameter derivative at `t`.
    pub fn eval(&self, t: f64, order: u32) -> [f64; 2] {
        let (x, y) = self.parts();
        [x.eval(t, order), y.eval(t, order)]
    }

    /// `self + t·other`
    pub fn axpy(&self, t: f64, other: &TrigCurve) -> TrigCurve {
        let degree = self.degree.max(other.degree);
        let pad = |v: &Vec<f64>| {
            let mut v = v.clone();
            v.resize(degree + 1, 0.0);
            v
        };
        let comb = |a: &Vec<f64>, b: &Vec<f64>| {
            pad(a)
                .iter()
                .zip(pad(b))
                .map(|(x, y)| x + t * y)
                .collect::<Vec<_>>()
        };
        TrigCurve {
            degree,
            cos_x: comb(&self.cos_x, &other.cos_x),
            sin_x: comb(&self.sin_x, &other.sin_x),
            cos_y: comb(&self.cos_y, &other.cos_y),
            sin_y: comb(&self.sin_y, &other.sin_y),
        }
    }

    pub fn scaled(&self, s: f64) -> TrigCurve {
        TrigCurve::zero(self.degree).axpy(s, self)
    }

    /// Pointwise product with the scalar polynomial `a_0 + Σ a_m cos(mt)`.
    pub fn times_cosine_series(&self, coeffs: &[f64]) -> TrigCurve {
        let f = TrigPoly {
            cos: coeffs.to_vec(),
            sin: vec![0.0; coeffs.len()],
        };
        let (x, y) = self.parts();
        TrigCurve::from_parts(x.product(&f), y.product(&f))
    }

    /// The field `(x(t), 0)`.
    pub fn x_component(&self) -> TrigCurve {
        let mut c = self.clone();
        c.cos_y.iter_mut().for_each(|v| *v = 0.0);
        c.sin_y.iter_mut().for_each(|v| *v = 0.0);
        c
    }
}

/// Orientation of a parametrized closed curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }
}

fn samples(table: &TrigCurve, m: usize) -> Vec<[f64; 2]> {
    (0..m)
        .map(|j| table.eval(2.0 * PI * j as f64 / m as f64, 0))
        .collect()
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    };
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn polylines_cross(a: &[[f64; 2]], b: &[[f64; 2]], same: bool) -> bool {
    let (na, nb) = (a.len(), b.len());
    for i in 0..na {
        let (p1, p2) = (a[i], a[(i + 1) % na]);
        for j in 0..nb {
            if same {
                // skip the segment itself and its neighbours
                let d = (i as isize - j as isize).rem_euclid(na as isize) as usize;
                if d <= 1 || d + 1 >= na {
                    continue;
                }
            }
            if segments_cross(p1, p2, b[j], b[(j + 1) % nb]) {
                return true;
            }
        }
    }
    false
}

/// Whether two distinct closed polylines have crossing segments.
pub(crate) fn polylines_intersect(a: &[[f64; 2]], b: &[[f64; 2]]) -> bool {
    polylines_cross(a, b, false)
}

/// Winding number of a closed polyline around `z`.
fn winding_number(poly: &[[f64; 2]], z: [f64; 2]) -> f64 {
    let n = poly.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = [poly[i][0] - z[0], poly[i][1] - z[1]];
        let b = [poly[(i + 1) % n][0] - z[0], poly[(i + 1) % n][1] - z[1]];
        total += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    total / (2.0 * PI)
}

/// A validated Jordan curve: injective, regular, trigonometric-polynomial
/// parametrization. Normals are oriented outward for either orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    table: TrigCurve,
    orientation: Orientation,
}

impl Curve {
    pub fn new(table: TrigCurve) -> Result<Self> {
        table.check_shape()?;
        if table.degree == 0 {
            return Err(Error::InvalidCurve("degree 0 curve is a point".into()));
        }
        let m = (16 * table.degree).max(256);
        let pts = samples(&table, m);

        let min_speed = (0..m)
            .map(|j| {
                let d = table.eval(2.0 * PI * j as f64 / m as f64, 1);
                d[0].hypot(d[1])
            })
            .fold(f64::INFINITY, f64::min);
        if !(min_speed > 0.0) || min_speed < 1e-10 {
            return Err(Error::InvalidCurve(format!(
                "parametrization is not regular (min speed {min_speed:.3e})"
            )));
        }

        // separation ratio |p(t_i) − p(t_j)| / |t_i − t_j|_circ
        let h = 2.0 * PI / m as f64;
        for i in 0..m {
            for j in (i + 1)..m {
                let k = j - i;
                let dt = h * k.min(m - k) as f64;
                let dist = (pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]);
                if dist / dt < 1e-6 {
                    return Err(Error::InvalidCurve(format!(
                        "curve is not injective near t = {:.4} and t = {:.4}",
                        i as f64 * h,
                        j as f64 * h
                    )));
                }
            }
        }
        if polylines_cross(&pts, &pts, true) {
            return Err(Error::InvalidCurve("curve self-intersects".into()));
        }

        let area = signed_area_of(&table);
        if area.abs() < 1e-14 {
            return Err(Error::InvalidCurve("curve encloses no area".into()));
        }
        let orientation = if area > 0.0 {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        };
        Ok(Curve { table, orientation })
    }

    /// Circle of the given radius, counterclockwise.
    pub fn circle(radius: f64, center: [f64; 2]) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidCurve(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Curve::new(TrigCurve::circle(radius, center))
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Curve::new(TrigCurve::ellipse(a, b))
    }

    pub fn kite() -> Self {
        Curve::new(TrigCurve::kite()).expect("kite preset is a valid curve")
    }

    pub fn table(&self) -> &TrigCurve {
        &self.table
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        self.table.eval(t, 0)
    }

    /// Signed area (positive for counterclockwise curves).
    pub fn signed_area(&self) -> f64 {
        signed_area_of(&self.table)
    }

    /// Area of the bounded component.
    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Closed polyline through `m` equispaced parameter samples.
    pub fn polyline(&self, m: usize) -> Vec<[f64; 2]> {
        samples(&self.table, m)
    }

    /// Whether `z` lies in the bounded component.
    pub fn contains(&self, z: [f64; 2]) -> bool {
        let m = (32 * self.table.degree).max(1024);
        winding_number(&self.polyline(m), z).abs() > 0.5
    }
}

fn signed_area_of(table: &TrigCurve) -> f64 {
    // ½∮(x y' − y x') dt, exact with more than 2·degree nodes
    let m = 4 * table.degree + 8;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|j| {
            let t = j as f64 * h;
            let p = table.eval(t, 0);
            let d = table.eval(t, 1);
            0.5 * (p[0] * d[1] - p[1] * d[0])
        })
        .sum::<f64>()
        * h
}

/// `make_circle`
pub fn make_circle(radius: f64, center: [f64; 2]) -> Result<Curve> {
    Curve::circle(radius, center)
}

/// Geometric data at one quadrature node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub point: [f64; 2],
    pub tangent: [f64; 2],
    pub normal: [f64; 2],
    pub speed: f64,
    pub curvature: f64,
}

/// `N` equispaced parameter nodes on a curve with cached frames and
/// trapezoidal weights `2π/N`.
#[derive(Clone, Debug)]
pub struct Grid {
    curve: Curve,
    n: usize,
    points: Vec<[f64; 2]>,
    tangents: Vec<[f64; 2]>,
    normals: Vec<[f64; 2]>,
    speeds: Vec<f64>,
    curvatures: Vec<f64>,
}

impl Grid {
    pub fn new(curve: &Curve, n: usize) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "node count must be even and at least 8, got {n}"
            )));
        }
        let sign = curve.orientation.sign();
        let mut points = Vec::with_capacity(n);
        let mut tangents = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        let mut speeds = Vec::with_capacity(n);
        let mut curvatures = Vec::with_capacity(n);
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let p = curve.table.eval(t, 0);
            let d1 = curve.table.eval(t, 1);
            let d2 = curve.table.eval(t, 2);
            let speed = d1[0].hypot(d1[1]);
            points.push(p);
            tangents.push(d1);
            normals.push([sign * d1[1] / speed, -sign * d1[0] / speed]);
            speeds.push(speed);
            curvatures.push(sign * (d1[0] * d2[1] - d1[1] * d2[0]) / speed.powi(3));
        }
        Ok(Grid {
            curve: curve.clone(),
            n,
            points,
            tangents,
            normals,
            speeds,
            curvatures,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Parameter of node `j`.
    pub fn param(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }

    /// Trapezoidal weight `2π/N`.
    pub fn weight(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Parameter derivatives `p'(t_j)`.
    pub fn tangents(&self) -> &[[f64; 2]] {
        &self.tangents
    }

    pub fn normals(&self) -> &[[f64; 2]] {
        &self.normals
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn curvatures(&self) -> &[f64] {
        &self.curvatures
    }

    /// Arclength quadrature weights `speed_j · 2π/N`.
    pub fn arc_weights(&self) -> Vec<f64> {
        let w = self.weight();
        self.speeds.iter().map(|s| s * w).collect()
    }

    /// Largest arclength distance between neighbouring nodes (upper bound).
    pub fn spacing(&self) -> f64 {
        self.speeds.iter().cloned().fold(0.0, f64::max) * self.weight()
    }

    pub fn frame(&self, j: usize) -> Frame {
        Frame {
            point: self.points[j],
            tangent: self.tangents[j],
            normal: self.normals[j],
            speed: self.speeds[j],
            curvature: self.curvatures[j],
        }
    }

    /// Distance from `x` to the nearest node.
    pub fn node_distance(&self, x: [f64; 2]) -> f64 {
        self.points
            .iter()
            .map(|p| (p[0] - x[0]).hypot(p[1] - x[1]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn check_density(&self, density: &Density) -> Result<()> {
        if density.len() != self.n {
            return Err(Error::GridMismatch {
                expected: self.n,
                got: density.len(),
            });
        }
        Ok(())
    }
}

/// `frame(grid, j)`
pub fn frame(grid: &Grid, j: usize) -> Frame {
    grid.frame(j)
}

/// Node values of a boundary density.
#[derive(Clone, Debug, PartialEq)]
pub struct Density(Vec<f64>);

impl Density {
    pub fn new(values: Vec<f64>) -> Self {
        Density(values)
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Density(vec![c; grid.len()])
    }

    /// Density from a function of the parameter and the node point.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, [f64; 2]) -> f64) -> Self {
        Density(
            (0..grid.len())
                .map(|j| f(grid.param(j), grid.points()[j]))
                .collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl From<Vec<f64>> for Density {
    fn from(v: Vec<f64>) -> Self {
        Density(v)
    }
}

/// Trapezoidal `∫ s^β θ(s) dσ_s`.
pub fn moment(grid: &Grid, beta: &MultiIndex, theta: &Density) -> Result<f64> {
    grid.check_density(theta)?;
    let w = grid.weight();
    Ok((0..grid.len())
        .map(|j| beta.monomial(&grid.points[j]) * theta.0[j] * grid.speeds[j] * w)
        .sum())
}

/// Trapezoidal `∫ ν(s) s^β θ(s) dσ_s`.
pub fn normal_moment(grid: &Grid, beta: &MultiIndex, theta: &Density) -> Result<[f64; 2]> {
    grid.check_density(theta)?;
    let w = grid.weight();
    let mut acc = [0.0; 2];
    for j in 0..grid.len() {
        let c = beta.monomial(&grid.points[j]) * theta.0[j] * grid.speeds[j] * w;
        acc[0] += c * grid.normals[j][0];
        acc[1] += c * grid.normals[j][1];
    }
    Ok(acc)
}

/// `ν(t_j) · ∇(t^β)` at node `j`.
pub fn normal_poly_derivative(grid: &Grid, beta: &MultiIndex, j: usize) -> f64 {
    let g = beta.monomial_gradient(&grid.points[j]);
    g[0] * grid.normals[j][0] + g[1] * grid.normals[j][1]
}

/// Image curve `ε·p(t)`. Point reflection (ε < 0) keeps the orientation.
pub fn scale_curve(curve: &Curve, eps: f64) -> Result<Curve> {
    if eps == 0.0 || !eps.is_finite() {
        return Err(Error::InvalidCurve(format!(
            "scale factor must be finite and nonzero, got {eps}"
        )));
    }
    Ok(Curve {
        table: curve.table.scaled(eps),
        orientation: curve.orientation,
    })
}

/// A boundary diffeomorphism `φ`, stored through the composite `φ ∘ p_ref`
/// on the reference parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Diffeo {
    map: TrigCurve,
}

impl Diffeo {
    pub fn from_map(map: TrigCurve) -> Self {
        Diffeo { map }
    }

    pub fn identity(reference: &Curve) -> Self {
        Diffeo {
            map: reference.table.clone(),
        }
    }

    /// `x ↦ factor·x`
    pub fn dilation(reference: &Curve, factor: f64) -> Self {
        Diffeo {
            map: reference.table.scaled(factor),
        }
    }

    /// `p(t) ↦ (1 + amplitude·cos(m t))·p(t)`
    pub fn radial(reference: &Curve, amplitude: f64, m: usize) -> Self {
        let mut c = vec![0.0; m + 1];
        c[0] = 1.0;
        c[m] += amplitude;
        Diffeo {
            map: reference.table.times_cosine_series(&c),
        }
    }

    pub fn map(&self) -> &TrigCurve {
        &self.map
    }

    /// `φ + t·h`
    pub fn perturbed(&self, t: f64, direction: &TrigCurve) -> Self {
        Diffeo {
            map: self.map.axpy(t, direction),
        }
    }
}

/// Image curve `φ(∂Ω)`; fails when `φ` is not injective or not regular.
pub fn apply_diffeo(phi: &Diffeo) -> Result<Curve> {
    Curve::new(phi.map.clone()).map_err(|e| match e {
        Error::InvalidCurve(msg) => Error::InvalidDiffeo(msg),
        other => other,
    })
}

/// Perturbation directions used by the shape studies.
pub mod directions {
    use super::{Curve, TrigCurve};

    /// `h = p_ref` (isotropic dilation about the origin).
    pub fn dilation(reference: &Curve) -> TrigCurve {
        reference.table().clone()
    }

    /// `h = cos(m t)·p_ref(t)`
    pub fn radial_cos(reference: &Curve, m: usize) -> TrigCurve {
        let mut c = vec![0.0; m + 1];
        c[m] = 1.0;
        reference.table().times_cosine_series(&c)
    }

    /// `h = (x_ref(t), 0)` (stretch along the first axis).
    pub fn stretch_x(reference: &Curve) -> TrigCurve {
        reference.table().x_component()
    }
}

fn ray_hit(poly: &[[f64; 2]], dir: [f64; 2]) -> Option<f64> {
    // first intersection of {λ·dir, λ > 0} with the polyline
    let n = poly.len();
    let mut best: Option<f64> = None;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = [b[0] - a[0], b[1] - a[1]];
        let det = dir[0] * (-e[1]) - dir[1] * (-e[0]);
        if det.abs() < 1e-300 {
            continue;
        }
        // λ·dir = a + μ·e
        let lambda = (a[0] * (-e[1]) - a[1] * (-e[0])) / det;
        let mu = (dir[0] * a[1] - dir[1] * a[0]) / det;
        if lambda > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&mu) {
            best = Some(best.map_or(lambda, |l: f64| l.min(lambda)));
        }
    }
    best
}

/// Number of boundary samples used by [`epsilon_max`].
pub const EPSILON_MAX_SAMPLES: usize = 4096;

/// Estimate of `sup{θ : εΩ̄^i ⊆ Ω^o for all |ε| < θ}` from polygonal samples
/// of both boundaries. Requires the origin inside both curves.
pub fn epsilon_max(outer: &Curve, inner: &Curve) -> Result<f64> {
    if !outer.contains([0.0, 0.0]) || !inner.contains([0.0, 0.0]) {
        return Err(Error::InvalidCurve(
            "the origin must lie inside both the outer and the inner curve".into(),
        ));
    }
    let outer_poly = outer.polyline(EPSILON_MAX_SAMPLES);
    let mut bound = f64::INFINITY;
    for s in inner.polyline(EPSILON_MAX_SAMPLES) {
        let r = s[0].hypot(s[1]);
        let u = [s[0] / r, s[1] / r];
        let forward = ray_hit(&outer_poly, u);
        let backward = ray_hit(&outer_poly, [-u[0], -u[1]]);
        match (forward, backward) {
            (Some(f), Some(b)) => bound = bound.min(f.min(b) / r),
            _ => {
                return Err(Error::InvalidCurve(
                    "ray from the origin misses the outer curve".into(),
                ))
            }
        }
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_frames() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        let g = Grid::new(&c, 16).unwrap();
        let f = g.frame(0);
        assert!((f.point[0] - 1.0).abs() < 1e-15 && f.point[1].abs() < 1e-15);
        assert!((f.normal[0] - 1.0).abs() < 1e-15);
        assert!((f.speed - 1.0).abs() < 1e-15);
        assert!((f.curvature - 1.0).abs() < 1e-14);
        for &k in g.curvatures() {
            assert!((k - 1.0).abs() < 1e-14);
        }
        let c2 = make_circle(2.0, [0.0, 0.0]).unwrap();
        let f2 = Grid::new(&c2, 16).unwrap().frame(3);
        assert!((f2.speed - 2.0).abs() < 1e-14);
        assert!((f2.curvature - 0.5).abs() < 1e-14);
        assert!((c2.signed_area() - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn shifted_circle_distance() {
        let c = make_circle(1.0, [5.0, 0.0]).unwrap();
        let g = Grid::new(&c, 64).unwrap();
        let d = g.node_distance([0.0, 0.0]);
        assert!((d - 4.0).abs() < 1e-14);
    }

    #[test]
    fn ellipse_frame_at_zero() {
        let e = Curve::ellipse(2.0, 1.0).unwrap();
        let f = Grid::new(&e, 32).unwrap().frame(0);
        assert!((f.normal[0] - 1.0).abs() < 1e-15 && f.normal[1].abs() < 1e-15);
        // ab / (a² sin² + b² cos²)^{3/2} at t = 0
        assert!((f.curvature - 2.0).abs() < 1e-14);
    }

    #[test]
    fn clockwise_curves_keep_outward_normals() {
        let mut t = TrigCurve::circle(1.0, [0.0, 0.0]);
        t.sin_y[1] = -1.0;
        let c = Curve::new(t).unwrap();
        assert_eq!(c.orientation(), Orientation::Clockwise);
        let g = Grid::new(&c, 16).unwrap();
        for j in 0..16 {
            let p = g.points()[j];
            let n = g.normals()[j];
            assert!((p[0] - n[0]).abs() < 1e-14 && (p[1] - n[1]).abs() < 1e-14);
            assert!((g.curvatures()[j] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_circle(0.0, [0.0, 0.0]).is_err());
        assert!(make_circle(-1.0, [0.0, 0.0]).is_err());
        // figure eight (sin t, sin 2t) self-intersects at the origin
        let mut t = TrigCurve::zero(2);
        t.sin_x[1] = 1.0;
        t.sin_y[2] = 1.0;
        assert!(Curve::new(t).is_err());
        // doubly traversed circle
        let mut t = TrigCurve::zero(2);
        t.cos_x[2] = 1.0;
        t.sin_y[2] = 1.0;
        assert!(Curve::new(t).is_err());
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        assert!(Grid::new(&c, 6).is_err());
        assert!(Grid::new(&c, 33).is_err());
        let mut bad = TrigCurve::circle(1.0, [0.0, 0.0]);
        bad.cos_x.push(0.0);
        assert!(Curve::new(bad).is_err());
    }

    #[test]
    fn moments_on_unit_circle() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        let g = Grid::new(&c, 64).unwrap();
        let one = Density::constant(&g, 1.0);
        let m0 = moment(&g, &MultiIndex::new(vec![0, 0]), &one).unwrap();
        assert!((m0 - 2.0 * PI).abs() < 1e-13);
        let m1 = moment(&g, &MultiIndex::new(vec![1, 0]), &one).unwrap();
        assert!(m1.abs() < 1e-13);
        let m2 = moment(&g, &MultiIndex::new(vec![2, 0]), &one).unwrap();
        assert!((m2 - PI).abs() < 1e-13);

        let n0 = normal_moment(&g, &MultiIndex::new(vec![0, 0]), &one).unwrap();
        assert!(n0[0].abs() < 1e-13 && n0[1].abs() < 1e-13);
        let n1 = normal_moment(&g, &MultiIndex::new(vec![1, 0]), &one).unwrap();
        assert!((n1[0] - PI).abs() < 1e-13 && n1[1].abs() < 1e-13);
        let n2 = normal_moment(&g, &MultiIndex::new(vec![0, 1]), &one).unwrap();
        assert!(n2[0].abs() < 1e-13 && (n2[1] - PI).abs() < 1e-13);

        let short = Density::new(vec![1.0; 10]);
        assert!(matches!(
            moment(&g, &MultiIndex::zero(2), &short),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn normal_derivative_of_monomials() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        let g = Grid::new(&c, 32).unwrap();
        for j in 0..32 {
            assert_eq!(normal_poly_derivative(&g, &MultiIndex::zero(2), j), 0.0);
            let t = g.param(j);
            let v = normal_poly_derivative(&g, &MultiIndex::new(vec![2, 0]), j);
            assert!((v - 2.0 * t.cos().powi(2)).abs() < 1e-14);
        }
        assert!((normal_poly_derivative(&g, &MultiIndex::new(vec![1, 0]), 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaling() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        let half = scale_curve(&c, 0.5).unwrap();
        let g = Grid::new(&half, 32).unwrap();
        for p in g.points() {
            assert!((p[0].hypot(p[1]) - 0.5).abs() < 1e-15);
        }
        let refl = scale_curve(&c, -1.0).unwrap();
        assert_eq!(refl.orientation(), Orientation::CounterClockwise);
        assert!((refl.point(0.0)[0] + 1.0).abs() < 1e-15);
        let k = Curve::kite();
        let perim = |c: &Curve| Grid::new(c, 128).unwrap().arc_weights().iter().sum::<f64>();
        let ratio = perim(&scale_curve(&k, -0.3).unwrap()) / perim(&k);
        assert!((ratio - 0.3).abs() < 1e-14);
        assert!(scale_curve(&c, 0.0).is_err());
    }

    #[test]
    fn diffeomorphisms() {
        let c = make_circle(1.0, [0.0, 0.0]).unwrap();
        assert_eq!(apply_diffeo(&Diffeo::identity(&c)).unwrap(), c);
        let d = apply_diffeo(&Diffeo::dilation(&c, 2.0)).unwrap();
        assert!((d.area() - 4.0 * PI).abs() < 1e-13);
        let r = apply_diffeo(&Diffeo::radial(&c, 0.1, 3)).unwrap();
        assert!(r.area() > PI * 0.81 && r.area() < PI * 1.21);
        // (1 + cos 3t)·p has zero speed where the radius vanishes
        assert!(matches!(
            apply_diffeo(&Diffeo::radial(&c, 1.0, 3)),
            Err(Error::InvalidDiffeo(_))
        ));
    }

    #[test]
    fn radial_product_matches_pointwise() {
        let k = Curve::kite();
        let phi = Diffeo::radial(&k, 0.2, 3);
        for j in 0..20 {
            let t = 0.3 * j as f64;
            let p = k.point(t);
            let q = phi.map().eval(t, 0);
            let f = 1.0 + 0.2 * (3.0 * t).cos();
            assert!((q[0] - f * p[0]).abs() < 1e-14 && (q[1] - f * p[1]).abs() < 1e-14);
        }
        let h = directions::radial_cos(&k, 2);
        let t = 0.7;
        let p = k.point(t);
        let v = h.eval(t, 0);
        assert!((v[0] - (2.0 * t).cos() * p[0]).abs() < 1e-14);
        assert!((v[1] - (2.0 * t).cos() * p[1]).abs() < 1e-14);
    }

    #[test]
    fn epsilon_bounds() {
        let c2 = make_circle(2.0, [0.0, 0.0]).unwrap();
        let c1 = make_circle(1.0, [0.0, 0.0]).unwrap();
        let e = epsilon_max(&c2, &c1).unwrap();
        assert!(e <= 2.0 && e > 2.0 - 1e-3);
        let e = epsilon_max(&c1, &c1).unwrap();
        assert!(e <= 1.0 && e > 1.0 - 1e-3);
        let ell = Curve::ellipse(2.0, 1.0).unwrap();
        let e = epsilon_max(&ell, &c1).unwrap();
        assert!(e <= 1.0 && e > 1.0 - 1e-3);
        let off = make_circle(1.0, [5.0, 0.0]).unwrap();
        assert!(epsilon_max(&c2, &off).is_err());
    }
}
