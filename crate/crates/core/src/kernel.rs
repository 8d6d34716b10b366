//! Fundamental solution of `-Δ` and its partial derivatives.
//!
//! Every derivative `D^β G_n` with `β ≠ 0` (and `G_3` itself) is stored in the
//! rational form `c · P_β(x) / |x|^q`, where `P_β` is a polynomial with integer
//! coefficients and `c` is the dimension constant (`-1/(2π)` in the plane,
//! `1/(4π)` in space). The forms are produced by the recursion
//!
//! ```text
//! ∂_j [P / |x|^q] = (∂_j P · |x|² − q · P · x_j) / |x|^(q+2)
//! ```
//!
//! so no floating-point error accumulates while building high orders.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest series order used by the perforation studies.
pub const K_MAX: usize = 8;

/// Multi-index `β ∈ ℕ^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// Unit index `e_j` in dimension `n`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|β|`
    pub fn order(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    /// `β!` as a float; exact for every order used here.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&b| (1..=b).map(f64::from).product::<f64>())
            .product()
    }

    /// `β + e_j`
    pub fn raised(&self, j: usize) -> Self {
        let mut e = self.0.clone();
        e[j] += 1;
        MultiIndex(e)
    }

    /// `β - e_j`, or `None` when `β_j = 0`.
    pub fn lowered(&self, j: usize) -> Option<Self> {
        if self.0[j] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[j] -= 1;
        Some(MultiIndex(e))
    }

    /// Monomial `x^β`.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&b, &xi)| xi.powi(b as i32))
            .product()
    }

    /// Gradient of the monomial `x^β`.
    pub fn monomial_gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| match self.lowered(j) {
                Some(lower) => f64::from(self.0[j]) * lower.monomial(x),
                None => 0.0,
            })
            .collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// All `β ∈ ℕ^n` with `|β| = k`, in lexicographic order.
pub fn enumerate_multiindices(n: usize, k: usize) -> Vec<MultiIndex> {
    fn fill(pos: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos + 1 == current.len() {
            current[pos] = left;
            out.push(MultiIndex(current.clone()));
            return;
        }
        for b in 0..=left {
            current[pos] = b;
            fill(pos + 1, left - b, current, out);
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    fill(0, k as u32, &mut vec![0; n], &mut out);
    out
}

fn dimension_constant(n: usize) -> Result<f64> {
    match n {
        2 => Ok(-1.0 / (2.0 * PI)),
        3 => Ok(1.0 / (4.0 * PI)),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `G_n(x)`: `-(1/2π) log|x|` for `n = 2`, `|x|^{-1}/(4π)` for `n = 3`.
pub fn eval_g(n: usize, x: &[f64]) -> Result<f64> {
    if x.len() != n {
        return Err(Error::UnsupportedDimension(x.len()));
    }
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::Singular);
    }
    match n {
        2 => Ok(-r.ln() / (2.0 * PI)),
        3 => Ok(1.0 / (4.0 * PI * r)),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// Polynomial with integer coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl IntPoly {
    fn constant(n: usize, c: i128) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; n], c);
        IntPoly { n, terms }
    }

    fn variable(n: usize, j: usize) -> Self {
        let mut terms = BTreeMap::new();
        let mut e = vec![0; n];
        e[j] = 1;
        terms.insert(e, 1);
        IntPoly { n, terms }
    }

    fn add_term(&mut self, exps: Vec<u32>, c: i128) {
        if c == 0 {
            return;
        }
        let sum = {
            let entry = self.terms.entry(exps.clone()).or_insert(0);
            *entry += c;
            *entry
        };
        if sum == 0 {
            self.terms.remove(&exps);
        }
    }

    /// `∂_j P · |x|² − q · P · x_j`
    fn derivative_step(&self, j: usize, q: u32) -> IntPoly {
        let mut out = IntPoly {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (exps, &c) in &self.terms {
            if exps[j] > 0 {
                let dc = c * i128::from(exps[j]);
                for i in 0..self.n {
                    let mut e = exps.clone();
                    e[j] -= 1;
                    e[i] += 2;
                    out.add_term(e, dc);
                }
            }
            let mut e = exps.clone();
            e[j] += 1;
            out.add_term(e, -i128::from(q) * c);
        }
        out
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(exps, &c)| {
                let mono: f64 = exps
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(e as i32))
                    .product();
                c as f64 * mono
            })
            .sum()
    }

    /// `Σ |c_α x^α|`, the scale against which rounding in `eval` is measured.
    fn eval_abs(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(exps, &c)| {
                let mono: f64 = exps
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.abs().powi(e as i32))
                    .product();
                (c as f64).abs() * mono
            })
            .sum()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Form {
    /// `-(1/2π) log|x|`
    Log,
    /// `constant · P(x) / |x|^q`
    Rational { poly: IntPoly, q: u32 },
}

/// Closed form of `D^β G_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelDerivative {
    dim: usize,
    index: MultiIndex,
    constant: f64,
    form: Form,
}

impl KernelDerivative {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> &MultiIndex {
        &self.index
    }

    pub fn is_log(&self) -> bool {
        matches!(self.form, Form::Log)
    }

    /// Exponent `q` of the denominator `|x|^q`; `None` for the logarithm.
    pub fn denominator_exponent(&self) -> Option<u32> {
        match &self.form {
            Form::Log => None,
            Form::Rational { q, .. } => Some(*q),
        }
    }

    /// Numerator coefficients as `(exponents, integer coefficient)` pairs.
    pub fn numerator_terms(&self) -> Vec<(Vec<u32>, i128)> {
        match &self.form {
            Form::Log => Vec::new(),
            Form::Rational { poly, .. } => {
                poly.terms.iter().map(|(k, &v)| (k.clone(), v)).collect()
            }
        }
    }

    /// The identically-zero derivative never occurs for the Laplace kernel,
    /// but the check keeps the recursion honest.
    pub fn is_zero(&self) -> bool {
        match &self.form {
            Form::Log => false,
            Form::Rational { poly, .. } => poly.is_zero(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::UnsupportedDimension(x.len()));
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 == 0.0 {
            return Err(Error::Singular);
        }
        Ok(self.eval_unchecked(x, r2))
    }

    /// Evaluation without the dimension and origin checks; `r2 = |x|²`.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], r2: f64) -> f64 {
        match &self.form {
            Form::Log => -0.25 / PI * r2.ln(),
            Form::Rational { poly, q } => {
                let denom = if q % 2 == 0 {
                    r2.powi((*q / 2) as i32)
                } else {
                    r2.sqrt().powi(*q as i32)
                };
                self.constant * poly.eval(x) / denom
            }
        }
    }

    /// Value with every numerator term taken in absolute value. Near zeros of
    /// the numerator the value itself is only accurate relative to this.
    pub fn magnitude(&self, x: &[f64]) -> Result<f64> {
        let v = self.eval(x)?;
        Ok(match &self.form {
            Form::Log => v.abs(),
            Form::Rational { poly, q } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                self.constant.abs() * poly.eval_abs(x) / r2.sqrt().powi(*q as i32)
            }
        })
    }

    /// `∂_j` of this derivative, by the rational recursion.
    fn differentiate(&self, j: usize) -> KernelDerivative {
        let index = self.index.raised(j);
        let form = match &self.form {
            // ∂_j log|x| = x_j / |x|^2
            Form::Log => Form::Rational {
                poly: IntPoly::variable(self.dim, j),
                q: 2,
            },
            Form::Rational { poly, q } => Form::Rational {
                poly: poly.derivative_step(j, *q),
                q: q + 2,
            },
        };
        KernelDerivative {
            dim: self.dim,
            index,
            constant: self.constant,
            form,
        }
    }
}

fn base_form(n: usize) -> Result<KernelDerivative> {
    let constant = dimension_constant(n)?;
    let form = match n {
        2 => Form::Log,
        _ => Form::Rational {
            poly: IntPoly::constant(n, 1),
            q: 1,
        },
    };
    Ok(KernelDerivative {
        dim: n,
        index: MultiIndex::zero(n),
        constant,
        form,
    })
}

/// Exact closed form of `D^β G_n`.
pub fn deriv_g(n: usize, beta: &MultiIndex) -> Result<KernelDerivative> {
    if beta.dim() != n {
        return Err(Error::UnsupportedDimension(beta.dim()));
    }
    let mut d = base_form(n)?;
    for (j, &b) in beta.entries().iter().enumerate() {
        for _ in 0..b {
            d = d.differentiate(j);
        }
    }
    d.index = beta.clone();
    Ok(d)
}

/// Eagerly built table of every `D^β G_n` with `|β| ≤ max_order`.
///
/// Built once; afterwards all reads are `&self` and the table can be shared
/// across threads.
#[derive(Debug, Clone)]
pub struct KernelTable {
    dim: usize,
    max_order: usize,
    by_order: Vec<Vec<KernelDerivative>>,
}

impl KernelTable {
    pub fn new(n: usize, max_order: usize) -> Result<Self> {
        let base = base_form(n)?;
        let mut by_order: Vec<Vec<KernelDerivative>> = vec![vec![base]];
        for k in 1..=max_order {
            let prev = &by_order[k - 1];
            let level: Vec<KernelDerivative> = enumerate_multiindices(n, k)
                .into_iter()
                .map(|beta| {
                    // differentiate along the first non-zero direction
                    let j = beta.entries().iter().position(|&b| b > 0).unwrap();
                    let parent = beta.lowered(j).unwrap();
                    let pos = prev
                        .binary_search_by(|d| d.index.cmp(&parent))
                        .expect("parent index enumerated at previous order");
                    let mut d = prev[pos].differentiate(j);
                    d.index = beta;
                    d
                })
                .collect();
            by_order.push(level);
        }
        Ok(KernelTable {
            dim: n,
            max_order,
            by_order,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn get(&self, beta: &MultiIndex) -> Result<&KernelDerivative> {
        let k = beta.order();
        if k > self.max_order {
            return Err(Error::OrderTooHigh {
                order: k,
                max: self.max_order,
            });
        }
        let level = &self.by_order[k];
        level
            .binary_search_by(|d| d.index.cmp(beta))
            .map(|pos| &level[pos])
            .map_err(|_| Error::UnsupportedDimension(beta.dim()))
    }

    /// All stored derivatives of order `k`, in lexicographic order.
    pub fn level(&self, k: usize) -> Result<&[KernelDerivative]> {
        self.by_order
            .get(k)
            .map(Vec::as_slice)
            .ok_or(Error::OrderTooHigh {
                order: k,
                max: self.max_order,
            })
    }

    /// `D^β G_n(x)`.
    pub fn eval(&self, beta: &MultiIndex, x: &[f64]) -> Result<f64> {
        self.get(beta)?.eval(x)
    }

    /// `∇ D^β G_n(x)`.
    pub fn gradient(&self, beta: &MultiIndex, x: &[f64]) -> Result<Vec<f64>> {
        (0..self.dim)
            .map(|j| self.eval(&beta.raised(j), x))
            .collect()
    }

    /// Hessian of `D^β G_n` at `x`, row-major.
    pub fn hessian(&self, beta: &MultiIndex, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim;
        let mut h = vec![0.0; n * n];
        for j in 0..n {
            for l in j..n {
                let v = self.eval(&beta.raised(j).raised(l), x)?;
                h[j * n + l] = v;
                h[l * n + j] = v;
            }
        }
        Ok(h)
    }
}

/// Shared planar table, built on first use up to `K_MAX + 2` (the hypersingular
/// series coefficients need two extra derivatives).
pub fn planar_table() -> &'static KernelTable {
    static TABLE: OnceLock<KernelTable> = OnceLock::new();
    TABLE.get_or_init(|| KernelTable::new(2, K_MAX + 2).expect("planar kernel table"))
}

/// Gradient of `G_2` in closed form.
#[inline]
pub fn grad_g2(d: [f64; 2]) -> [f64; 2] {
    let r2 = d[0] * d[0] + d[1] * d[1];
    let c = -1.0 / (2.0 * PI * r2);
    [c * d[0], c * d[1]]
}

/// `G_2` in closed form.
#[inline]
pub fn g2(d: [f64; 2]) -> f64 {
    let r2 = d[0] * d[0] + d[1] * d[1];
    -0.25 / PI * r2.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_values() {
        assert_eq!(eval_g(2, &[1.0, 0.0]).unwrap(), 0.0);
        let v = eval_g(3, &[0.0, 1.0, 0.0]).unwrap();
        assert!((v - 1.0 / (4.0 * PI)).abs() < 1e-16);
        let e = std::f64::consts::E;
        assert!((eval_g(2, &[e, 0.0]).unwrap() + 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((eval_g(3, &[0.6, 0.0, 0.8]).unwrap() - 0.079577).abs() < 1e-6);
    }

    #[test]
    fn origin_is_singular() {
        assert!(matches!(eval_g(2, &[0.0, 0.0]), Err(Error::Singular)));
        let d = deriv_g(2, &MultiIndex::new(vec![1, 1])).unwrap();
        assert!(matches!(d.eval(&[0.0, 0.0]), Err(Error::Singular)));
    }

    #[test]
    fn bad_dimension() {
        assert!(matches!(
            eval_g(4, &[1.0, 0.0, 0.0, 0.0]),
            Err(Error::UnsupportedDimension(4))
        ));
        assert!(deriv_g(4, &MultiIndex::zero(4)).is_err());
    }

    #[test]
    fn first_derivatives() {
        let d = deriv_g(2, &MultiIndex::new(vec![1, 0])).unwrap();
        assert!((d.eval(&[1.0, 0.0]).unwrap() + 1.0 / (2.0 * PI)).abs() < 1e-15);
        let d = deriv_g(3, &MultiIndex::new(vec![1, 0, 0])).unwrap();
        assert!((d.eval(&[1.0, 0.0, 0.0]).unwrap() + 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn first_derivative_matches_finite_difference() {
        let h = 1e-5;
        let x = [0.7, -0.4];
        let fd = (eval_g(2, &[x[0] + h, x[1]]).unwrap() - eval_g(2, &[x[0] - h, x[1]]).unwrap())
            / (2.0 * h);
        let d = deriv_g(2, &MultiIndex::new(vec![1, 0])).unwrap();
        assert!((d.eval(&x).unwrap() - fd).abs() < 1e-9);
    }

    #[test]
    fn second_derivative_numerator() {
        // ∂_1² log|x| = (x_2² − x_1²)/|x|⁴
        let d = deriv_g(2, &MultiIndex::new(vec![2, 0])).unwrap();
        assert_eq!(d.denominator_exponent(), Some(4));
        let terms = d.numerator_terms();
        assert_eq!(terms, vec![(vec![0, 2], 1), (vec![2, 0], -1)]);
    }

    #[test]
    fn laplacian_vanishes() {
        for x in [[0.3, 1.7], [-2.0, 0.5], [1.0, 0.0]] {
            let a = deriv_g(2, &MultiIndex::new(vec![2, 0]))
                .unwrap()
                .eval(&x)
                .unwrap();
            let b = deriv_g(2, &MultiIndex::new(vec![0, 2]))
                .unwrap()
                .eval(&x)
                .unwrap();
            assert!((a + b).abs() < 1e-15);
        }
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_multiindices(2, 0), vec![MultiIndex::zero(2)]);
        assert_eq!(
            enumerate_multiindices(2, 2),
            vec![
                MultiIndex::new(vec![0, 2]),
                MultiIndex::new(vec![1, 1]),
                MultiIndex::new(vec![2, 0])
            ]
        );
        assert_eq!(enumerate_multiindices(3, 1).len(), 3);
        assert_eq!(enumerate_multiindices(3, 4).len(), 15);
    }

    #[test]
    fn multiindex_basics() {
        let b = MultiIndex::new(vec![3, 2]);
        assert_eq!(b.order(), 5);
        assert_eq!(b.factorial(), 12.0);
        assert_eq!(MultiIndex::zero(3).factorial(), 1.0);
        assert_eq!(b.monomial(&[2.0, 3.0]), 72.0);
        assert_eq!(b.monomial_gradient(&[1.0, 1.0]), vec![3.0, 2.0]);
        assert_eq!(b.to_string(), "(3,2)");
    }

    #[test]
    fn table_matches_direct_construction() {
        let table = KernelTable::new(3, 4).unwrap();
        for k in 0..=4 {
            for beta in enumerate_multiindices(3, k) {
                let direct = deriv_g(3, &beta).unwrap();
                assert_eq!(table.get(&beta).unwrap(), &direct);
            }
        }
        assert!(matches!(
            table.get(&MultiIndex::new(vec![5, 0, 0])),
            Err(Error::OrderTooHigh { .. })
        ));
    }

    #[test]
    fn closed_forms_agree_with_table() {
        let t = planar_table();
        let x = [0.4, -1.3];
        let g = grad_g2(x);
        assert!((t.eval(&MultiIndex::unit(2, 0), &x).unwrap() - g[0]).abs() < 1e-16);
        assert!((t.eval(&MultiIndex::unit(2, 1), &x).unwrap() - g[1]).abs() < 1e-16);
        assert!((t.eval(&MultiIndex::zero(2), &x).unwrap() - g2(x)).abs() < 1e-16);
    }
}
