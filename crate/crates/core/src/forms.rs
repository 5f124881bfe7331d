//! Degree-1 forms `ω = A1 dξ¹ + A2 dξ²` sampled on tensor grids.
//!
//! The commutator `K = ∂A2/∂ξ¹ - ∂A1/∂ξ²` is evaluated with second-order
//! three-point differences. Boundary nodes use one-sided stencils; they are
//! kept in the field (needed for area integrals) but excluded from
//! `max_abs` and from closedness verdicts.

use ndarray::{s, Array2};

use crate::error::{Error, Result};
use crate::stencil;

/// Tensor grid of two strictly increasing coordinate axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    xi1: Vec<f64>,
    xi2: Vec<f64>,
}

impl Grid2D {
    pub fn new(xi1: Vec<f64>, xi2: Vec<f64>) -> Result<Self> {
        for (name, axis) in [("xi1", &xi1), ("xi2", &xi2)] {
            if axis.len() < 3 {
                return Err(Error::InvalidGrid(format!(
                    "{name} needs at least 3 points, got {}",
                    axis.len()
                )));
            }
            if axis.iter().any(|x| !x.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidGrid(format!("{name} is not strictly increasing")));
            }
        }
        Ok(Self { xi1, xi2 })
    }

    /// Uniform grid from `(lo, hi, points)` per axis.
    pub fn uniform(axis1: (f64, f64, usize), axis2: (f64, f64, usize)) -> Result<Self> {
        Self::new(linspace(axis1), linspace(axis2))
    }

    pub fn xi1(&self) -> &[f64] {
        &self.xi1
    }

    pub fn xi2(&self) -> &[f64] {
        &self.xi2
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.xi1.len(), self.xi2.len())
    }

    /// Grid with the two axes swapped.
    pub fn transposed(&self) -> Self {
        Self {
            xi1: self.xi2.clone(),
            xi2: self.xi1.clone(),
        }
    }

    /// Area of the bounding rectangle.
    pub fn area(&self) -> f64 {
        let (a, b) = (&self.xi1, &self.xi2);
        (a[a.len() - 1] - a[0]) * (b[b.len() - 1] - b[0])
    }
}

fn linspace((lo, hi, n): (f64, f64, usize)) -> Vec<f64> {
    let last = n.saturating_sub(1).max(1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / last })
        .collect()
}

/// Coefficient fields of `A1 dξ¹ + A2 dξ²`, indexed `[i1, i2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm2D {
    a1: Array2<f64>,
    a2: Array2<f64>,
}

impl OneForm2D {
    pub fn new(a1: Array2<f64>, a2: Array2<f64>) -> Result<Self> {
        if a1.dim() != a2.dim() {
            return Err(Error::DimensionMismatch {
                expected: a1.dim(),
                found: a2.dim(),
            });
        }
        Ok(Self { a1, a2 })
    }

    /// Samples `f(ξ¹, ξ²) -> (A1, A2)` at every grid node.
    pub fn from_fn(grid: &Grid2D, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let shape = grid.shape();
        let mut a1 = Array2::zeros(shape);
        let mut a2 = Array2::zeros(shape);
        for (i, &x) in grid.xi1.iter().enumerate() {
            for (j, &y) in grid.xi2.iter().enumerate() {
                let (c1, c2) = f(x, y);
                a1[[i, j]] = c1;
                a2[[i, j]] = c2;
            }
        }
        Self { a1, a2 }
    }

    pub fn a1(&self) -> &Array2<f64> {
        &self.a1
    }

    pub fn a2(&self) -> &Array2<f64> {
        &self.a2
    }

    pub fn shape(&self) -> (usize, usize) {
        self.a1.dim()
    }

    /// The same form written in swapped coordinates `(ξ², ξ¹)`.
    pub fn transposed(&self) -> Self {
        Self {
            a1: self.a2.t().to_owned(),
            a2: self.a1.t().to_owned(),
        }
    }

    fn check(&self, grid: &Grid2D) -> Result<()> {
        if self.shape() != grid.shape() {
            return Err(Error::DimensionMismatch {
                expected: grid.shape(),
                found: self.shape(),
            });
        }
        Ok(())
    }
}

/// Nodal commutator field with its interior maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorField {
    k: Array2<f64>,
    max_abs: f64,
    argmax: (usize, usize),
}

impl CommutatorField {
    /// Full nodal field; boundary rows and columns use one-sided stencils.
    pub fn values(&self) -> &Array2<f64> {
        &self.k
    }

    /// Interior nodes only, `[1..n1-1, 1..n2-1]`.
    pub fn interior(&self) -> Array2<f64> {
        let (n1, n2) = self.k.dim();
        self.k.slice(s![1..n1 - 1, 1..n2 - 1]).to_owned()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.k[[i, j]]
    }

    /// Largest `|K|` over interior nodes.
    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    /// Grid indices where `max_abs` is attained.
    pub fn argmax(&self) -> (usize, usize) {
        self.argmax
    }
}

/// `K = ∂A2/∂ξ¹ - ∂A1/∂ξ²`.
pub fn commutator(form: &OneForm2D, grid: &Grid2D) -> Result<CommutatorField> {
    form.check(grid)?;
    let d1_a2 = stencil::partial(form.a2.view(), &grid.xi1, 0);
    let d2_a1 = stencil::partial(form.a1.view(), &grid.xi2, 1);
    let k = d1_a2 - d2_a1;
    let (n1, n2) = k.dim();
    let mut max_abs = 0.0;
    let mut argmax = (1, 1);
    for i in 1..n1 - 1 {
        for j in 1..n2 - 1 {
            let v = k[[i, j]].abs();
            // NaN propagates into the maximum.
            if v > max_abs || v.is_nan() {
                max_abs = v;
                argmax = (i, j);
            }
        }
    }
    Ok(CommutatorField { k, max_abs, argmax })
}

/// Closedness verdict: `max |K| <= tol` over interior nodes.
pub fn is_closed(form: &OneForm2D, grid: &Grid2D, tol: f64) -> Result<(bool, f64)> {
    let k = commutator(form, grid)?;
    Ok((k.max_abs() <= tol, k.max_abs()))
}

/// A polyline of grid vertices `(i1, i2)`; consecutive vertices are
/// neighbours along exactly one axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPath {
    vertices: Vec<(usize, usize)>,
}

impl GridPath {
    pub fn new(vertices: Vec<(usize, usize)>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least 2 vertices".into()));
        }
        for (k, w) in vertices.windows(2).enumerate() {
            let di = w[0].0.abs_diff(w[1].0);
            let dj = w[0].1.abs_diff(w[1].1);
            if di + dj != 1 {
                return Err(Error::InvalidPath(format!(
                    "vertices {k} {:?} and {} {:?} are not adjacent",
                    w[0],
                    k + 1,
                    w[1]
                )));
            }
        }
        Ok(Self { vertices })
    }

    /// Straight segment between two vertices sharing one index.
    pub fn segment(from: (usize, usize), to: (usize, usize)) -> Result<Self> {
        let mut v = vec![from];
        v.extend(walk(from, to)?);
        Self::new(v)
    }

    /// Counterclockwise boundary of the index rectangle spanned by `lo` and `hi`.
    pub fn rectangle(lo: (usize, usize), hi: (usize, usize)) -> Result<Self> {
        if hi.0 <= lo.0 || hi.1 <= lo.1 {
            return Err(Error::InvalidPath(format!(
                "rectangle corners {lo:?}, {hi:?} are degenerate"
            )));
        }
        let mut v = vec![lo];
        for corner in [(hi.0, lo.1), hi, (lo.0, hi.1), lo] {
            let from = *v.last().unwrap();
            v.extend(walk(from, corner)?);
        }
        Self::new(v)
    }

    /// Concatenates straight segments through the given corner vertices.
    pub fn through(corners: &[(usize, usize)]) -> Result<Self> {
        let first = *corners
            .first()
            .ok_or_else(|| Error::InvalidPath("no corners".into()))?;
        let mut v = vec![first];
        for &c in &corners[1..] {
            let from = *v.last().unwrap();
            v.extend(walk(from, c)?);
        }
        Self::new(v)
    }

    pub fn vertices(&self) -> &[(usize, usize)] {
        &self.vertices
    }

    pub fn is_loop(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    /// Reversed traversal.
    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self { vertices: v }
    }

    /// `Some((lo, hi, orientation))` when the path is exactly the boundary of
    /// an index rectangle; orientation is `+1` counterclockwise.
    fn as_rectangle(&self) -> Option<((usize, usize), (usize, usize), f64)> {
        if !self.is_loop() {
            return None;
        }
        let v = &self.vertices;
        let lo = (v.iter().map(|p| p.0).min()?, v.iter().map(|p| p.1).min()?);
        let hi = (v.iter().map(|p| p.0).max()?, v.iter().map(|p| p.1).max()?);
        if hi.0 == lo.0 || hi.1 == lo.1 {
            return None;
        }
        let perimeter = 2 * ((hi.0 - lo.0) + (hi.1 - lo.1));
        if v.len() != perimeter + 1 {
            return None;
        }
        let on_boundary = |p: &(usize, usize)| p.0 == lo.0 || p.0 == hi.0 || p.1 == lo.1 || p.1 == hi.1;
        let mut seen = std::collections::HashSet::new();
        if !v[..perimeter].iter().all(|p| on_boundary(p) && seen.insert(*p)) {
            return None;
        }
        // Shoelace in index space gives the orientation.
        let twice_area: i64 = v
            .windows(2)
            .map(|w| w[0].0 as i64 * w[1].1 as i64 - w[1].0 as i64 * w[0].1 as i64)
            .sum();
        Some((lo, hi, twice_area.signum() as f64))
    }
}

fn walk(from: (usize, usize), to: (usize, usize)) -> Result<Vec<(usize, usize)>> {
    if from.0 != to.0 && from.1 != to.1 {
        return Err(Error::InvalidPath(format!("{from:?} -> {to:?} is not axis-aligned")));
    }
    let step = |a: usize, b: usize| -> Vec<usize> {
        if b >= a {
            (a + 1..=b).collect()
        } else {
            (b..a).rev().collect()
        }
    };
    Ok(if from.0 != to.0 {
        step(from.0, to.0).into_iter().map(|i| (i, from.1)).collect()
    } else {
        step(from.1, to.1).into_iter().map(|j| (from.0, j)).collect()
    })
}

/// Trapezoidal line integral of the form along a grid path.
pub fn path_integral(form: &OneForm2D, grid: &Grid2D, path: &GridPath) -> Result<f64> {
    form.check(grid)?;
    let (n1, n2) = grid.shape();
    if let Some(&bad) = path.vertices.iter().find(|v| v.0 >= n1 || v.1 >= n2) {
        return Err(Error::InvalidPath(format!("vertex {bad:?} lies outside the {n1}x{n2} grid")));
    }
    Ok(path
        .vertices
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            if a.0 != b.0 {
                let d = grid.xi1[b.0] - grid.xi1[a.0];
                0.5 * (form.a1[[a.0, a.1]] + form.a1[[b.0, b.1]]) * d
            } else {
                let d = grid.xi2[b.1] - grid.xi2[a.1];
                0.5 * (form.a2[[a.0, a.1]] + form.a2[[b.0, b.1]]) * d
            }
        })
        .sum())
}

/// Both sides of Green's theorem on a rectangular loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesBalance {
    pub loop_integral: f64,
    pub area_integral: f64,
}

impl StokesBalance {
    pub fn defect(&self) -> f64 {
        (self.loop_integral - self.area_integral).abs()
    }
}

/// Loop integral against the trapezoidal area integral of the nodal
/// commutator over the enclosed rectangle (signed by orientation).
pub fn stokes_balance(form: &OneForm2D, grid: &Grid2D, loop_path: &GridPath) -> Result<StokesBalance> {
    let (lo, hi, orientation) = loop_path
        .as_rectangle()
        .ok_or_else(|| Error::InvalidPath("stokes check needs a closed rectangular loop".into()))?;
    let loop_integral = path_integral(form, grid, loop_path)?;
    let k = commutator(form, grid)?;
    let mut area = 0.0;
    for i in lo.0..hi.0 {
        for j in lo.1..hi.1 {
            let cell = grid.xi1[i + 1] - grid.xi1[i];
            let cell = cell * (grid.xi2[j + 1] - grid.xi2[j]);
            let mean = 0.25 * (k.k[[i, j]] + k.k[[i + 1, j]] + k.k[[i, j + 1]] + k.k[[i + 1, j + 1]]);
            area += mean * cell;
        }
    }
    Ok(StokesBalance {
        loop_integral,
        area_integral: orientation * area,
    })
}

/// `|∮ω - ∬K|` for a rectangular loop.
pub fn stokes_defect(form: &OneForm2D, grid: &Grid2D, loop_path: &GridPath) -> Result<f64> {
    Ok(stokes_balance(form, grid, loop_path)?.defect())
}

/// Result of integrating a form to a potential.
#[derive(Debug, Clone, PartialEq)]
pub enum Reconstruction {
    /// `ψ` with `ψ(origin) = 0`, integrated `ξ¹`-first; `path_defect` is the
    /// largest difference against `ξ²`-first integration.
    Potential { psi: Array2<f64>, path_defect: f64 },
    /// The form is not closed within tolerance; the commutator is the obstruction.
    Obstructed(CommutatorField),
}

impl Reconstruction {
    pub fn potential(&self) -> Option<&Array2<f64>> {
        match self {
            Self::Potential { psi, .. } => Some(psi),
            Self::Obstructed(_) => None,
        }
    }
}

/// Potential of a closed form, or the obstruction when it is not closed.
///
/// The form is accepted when its interior commutator is within `tol` and
/// the two axis-first integrations agree within `10 tol · area`.
pub fn potential_reconstruct(form: &OneForm2D, grid: &Grid2D, tol: f64) -> Result<Reconstruction> {
    let k = commutator(form, grid)?;
    if k.max_abs() > tol {
        return Ok(Reconstruction::Obstructed(k));
    }
    let (n1, n2) = grid.shape();
    let step1 = |i: usize, j: usize| 0.5 * (form.a1[[i, j]] + form.a1[[i + 1, j]]) * (grid.xi1[i + 1] - grid.xi1[i]);
    let step2 = |i: usize, j: usize| 0.5 * (form.a2[[i, j]] + form.a2[[i, j + 1]]) * (grid.xi2[j + 1] - grid.xi2[j]);

    // ξ¹ along the bottom edge, then ξ² up each column.
    let mut first1 = Array2::<f64>::zeros((n1, n2));
    for i in 1..n1 {
        first1[[i, 0]] = first1[[i - 1, 0]] + step1(i - 1, 0);
    }
    for i in 0..n1 {
        for j in 1..n2 {
            first1[[i, j]] = first1[[i, j - 1]] + step2(i, j - 1);
        }
    }
    // ξ² along the left edge, then ξ¹ along each row.
    let mut first2 = Array2::<f64>::zeros((n1, n2));
    for j in 1..n2 {
        first2[[0, j]] = first2[[0, j - 1]] + step2(0, j - 1);
    }
    for j in 0..n2 {
        for i in 1..n1 {
            first2[[i, j]] = first2[[i - 1, j]] + step1(i - 1, j);
        }
    }
    let path_defect = first1
        .iter()
        .zip(first2.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if path_defect > 10.0 * tol * grid.area() {
        return Ok(Reconstruction::Obstructed(k));
    }
    Ok(Reconstruction::Potential {
        psi: first1,
        path_defect,
    })
}

/// Numerical differential `dψ` of a scalar field.
pub fn differential(psi: &Array2<f64>, grid: &Grid2D) -> Result<OneForm2D> {
    if psi.dim() != grid.shape() {
        return Err(Error::DimensionMismatch {
            expected: grid.shape(),
            found: psi.dim(),
        });
    }
    OneForm2D::new(
        stencil::partial(psi.view(), &grid.xi1, 0),
        stencil::partial(psi.view(), &grid.xi2, 1),
    )
}
