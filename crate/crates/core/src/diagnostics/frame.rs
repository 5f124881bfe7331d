use ndarray::Array2;

use super::{a1_viscous, a_nu, FlowFields};
use crate::error::Result;
use crate::forms::{commutator, CommutatorField, Grid2D, OneForm2D};
use crate::stencil;

/// Particle trajectories traced through the recorded fields.
///
/// `ξ¹` is time along a trajectory and `ξ²` the particle label (its position
/// at the first recorded time). Positions are advanced between recorded
/// times with a predictor-corrector step on interpolated velocity; they are
/// clamped to the sampled interval unless the axis is periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct AccompanyingFrame {
    labels: Vec<f64>,
    times: Vec<f64>,
    positions: Array2<f64>,
    jacobian: Array2<f64>,
}

impl AccompanyingFrame {
    pub fn trace(fields: &FlowFields) -> Result<Self> {
        let (nt, nx) = fields.shape();
        let labels = fields.x.clone();
        let (lo, hi) = (labels[0], labels[nx - 1]);
        let clamp = |x: f64| if fields.is_periodic() { x } else { x.clamp(lo, hi) };
        let mut positions = Array2::zeros((nt, nx));
        positions.row_mut(0).assign(&ndarray::ArrayView1::from(&labels));
        for n in 1..nt {
            let dt = fields.times[n] - fields.times[n - 1];
            let prev = fields.u.row(n - 1).to_vec();
            let next = fields.u.row(n).to_vec();
            for j in 0..nx {
                let x0 = positions[[n - 1, j]];
                let u0 = fields.interp_x(&prev, x0);
                let guess = clamp(x0 + dt * u0);
                let u1 = fields.interp_x(&next, guess);
                positions[[n, j]] = clamp(x0 + 0.5 * dt * (u0 + u1));
            }
        }
        let jacobian = stencil::partial(positions.view(), &labels, 1);
        Ok(Self {
            labels,
            times: fields.times.clone(),
            positions,
            jacobian,
        })
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Particle positions indexed `[time, label]`; unwrapped on periodic axes.
    pub fn positions(&self) -> &Array2<f64> {
        &self.positions
    }

    /// `∂x/∂ξ²` at fixed time.
    pub fn jacobian(&self) -> &Array2<f64> {
        &self.jacobian
    }

    pub fn grid(&self) -> Result<Grid2D> {
        Grid2D::new(self.times.clone(), self.labels.clone())
    }

    /// Samples an Eulerian `[time, x]` field at the particle positions.
    pub fn sample(&self, fields: &FlowFields, f: &Array2<f64>) -> Array2<f64> {
        let mut out = Array2::zeros(self.positions.dim());
        for (n, row) in f.rows().into_iter().enumerate() {
            let row = row.to_vec();
            for j in 0..self.labels.len() {
                out[[n, j]] = fields.interp_x(&row, self.positions[[n, j]]);
            }
        }
        out
    }
}

/// `ω = A1 dξ¹ + A_ν dξ²` in the accompanying frame.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionaryForm {
    grid: Grid2D,
    a1: Array2<f64>,
    anu: Array2<f64>,
    frame: Option<AccompanyingFrame>,
}

impl EvolutionaryForm {
    /// Form given directly by its frame components.
    pub fn new(grid: Grid2D, a1: Array2<f64>, anu: Array2<f64>) -> Result<Self> {
        OneForm2D::new(a1.clone(), anu.clone())?;
        let form = Self {
            grid,
            a1,
            anu,
            frame: None,
        };
        form.as_one_form()?;
        Ok(form)
    }

    /// Traces the frame and samples `A1` and `A_ν ∂x/∂ξ²` along it.
    pub fn from_fields(fields: &FlowFields) -> Result<Self> {
        let frame = AccompanyingFrame::trace(fields)?;
        let a1 = frame.sample(fields, &a1_viscous(fields).a1);
        let anu = &frame.sample(fields, &a_nu(fields)) * frame.jacobian();
        Ok(Self {
            grid: frame.grid()?,
            a1,
            anu,
            frame: Some(frame),
        })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn a1(&self) -> &Array2<f64> {
        &self.a1
    }

    pub fn anu(&self) -> &Array2<f64> {
        &self.anu
    }

    pub fn frame(&self) -> Option<&AccompanyingFrame> {
        self.frame.as_ref()
    }

    pub fn as_one_form(&self) -> Result<OneForm2D> {
        let form = OneForm2D::new(self.a1.clone(), self.anu.clone())?;
        commutator(&form, &self.grid)?;
        Ok(form)
    }
}

/// `K = ∂A_ν/∂ξ¹ - ∂A1/∂ξ²`.
pub fn evolutionary_commutator(form: &EvolutionaryForm) -> Result<CommutatorField> {
    commutator(&OneForm2D::new(form.a1.clone(), form.anu.clone())?, &form.grid)
}
