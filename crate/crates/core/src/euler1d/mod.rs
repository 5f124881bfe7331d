//! One-dimensional unsteady ideal-gas Euler equations.
//!
//! [`exact_riemann`] solves the Riemann problem to full precision and serves
//! both as the interface flux kernel of the first-order Godunov scheme and as
//! the reference solution for validation. [`run`] advances a scenario,
//! recording slices at requested times and tracing particle trajectories.

mod riemann;
mod solver;

pub use riemann::{exact_riemann, RiemannFan, WaveKind};
pub use solver::{
    conserved_totals, entropy_along_trajectory, entropy_field, l1_density_error, run, shock_flags, stable_dt, step,
    EntropyJump, EntropySeries, RunConfig, Solution1D, Trajectory, TrajectoryPoint, CFL_LIMIT,
};

use crate::error::{ensure_positive, Result};
use crate::thermo::GasParams;

/// Primitive state: density, velocity, pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl PrimState {
    /// Validated constructor (`rho > 0`, `p > 0`).
    pub fn new(rho: f64, u: f64, p: f64) -> Result<Self> {
        ensure_positive("density", rho)?;
        ensure_positive("pressure", p)?;
        if !u.is_finite() {
            return Err(crate::Error::Domain {
                what: "velocity",
                requirement: "finite",
                value: u,
            });
        }
        Ok(Self { rho, u, p })
    }

    pub fn sound_speed(&self, params: &GasParams) -> f64 {
        (params.gamma() * self.p / self.rho).sqrt()
    }

    /// Gas-dynamic entropy `p/ρ^γ`.
    pub fn entropy(&self, params: &GasParams) -> f64 {
        self.p / self.rho.powf(params.gamma())
    }

    /// Temperature `p/(ρR)`.
    pub fn temperature(&self, params: &GasParams) -> f64 {
        self.p / (self.rho * params.r())
    }

    pub fn to_cons(&self, params: &GasParams) -> ConsState {
        ConsState {
            rho: self.rho,
            mom: self.rho * self.u,
            energy: self.p / (params.gamma() - 1.0) + 0.5 * self.rho * self.u * self.u,
        }
    }

    /// Physical flux `(ρu, ρu² + p, u(E + p))`.
    pub fn flux(&self, params: &GasParams) -> [f64; 3] {
        let energy = self.p / (params.gamma() - 1.0) + 0.5 * self.rho * self.u * self.u;
        [
            self.rho * self.u,
            self.rho * self.u * self.u + self.p,
            self.u * (energy + self.p),
        ]
    }
}

/// Conserved state: density, momentum density, total energy density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsState {
    pub rho: f64,
    pub mom: f64,
    pub energy: f64,
}

impl ConsState {
    /// Primitive state; `None` when density or internal energy is not positive.
    pub fn to_prim(&self, params: &GasParams) -> Option<PrimState> {
        if !(self.rho > 0.0) {
            return None;
        }
        let u = self.mom / self.rho;
        let p = (params.gamma() - 1.0) * (self.energy - 0.5 * self.mom * u);
        (p > 0.0 && p.is_finite() && u.is_finite()).then_some(PrimState { rho: self.rho, u, p })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Zero-gradient outflow.
    Transmissive,
    Periodic,
}

/// Uniform cell-centred mesh on `[x_lo, x_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub x_lo: f64,
    pub x_hi: f64,
    pub cells: usize,
    pub boundary: Boundary,
}

impl Mesh {
    pub fn new(x_lo: f64, x_hi: f64, cells: usize, boundary: Boundary) -> Result<Self> {
        if !(x_hi > x_lo) || cells < 3 {
            return Err(crate::Error::InvalidGrid(format!(
                "mesh [{x_lo}, {x_hi}] with {cells} cells"
            )));
        }
        Ok(Self {
            x_lo,
            x_hi,
            cells,
            boundary,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_lo + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.center(i)).collect()
    }

    pub fn length(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    /// Wraps a position into the domain (periodic meshes only).
    pub fn wrap(&self, x: f64) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.x_lo + (x - self.x_lo).rem_euclid(self.length()),
            Boundary::Transmissive => x,
        }
    }

    /// Index of the cell containing `x`, clamped.
    pub fn cell_of(&self, x: f64) -> usize {
        let k = ((self.wrap(x) - self.x_lo) / self.dx()).floor();
        (k.max(0.0) as usize).min(self.cells - 1)
    }

    /// Linear interpolation of cell-centred values at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let n = self.cells;
        let s = (self.wrap(x) - self.x_lo) / self.dx() - 0.5;
        match self.boundary {
            Boundary::Periodic => {
                let k = s.floor();
                let w = s - k;
                let i0 = (k as i64).rem_euclid(n as i64) as usize;
                let i1 = (i0 + 1) % n;
                values[i0] * (1.0 - w) + values[i1] * w
            }
            Boundary::Transmissive => {
                if s <= 0.0 {
                    values[0]
                } else if s >= (n - 1) as f64 {
                    values[n - 1]
                } else {
                    let k = s.floor() as usize;
                    let w = s - k as f64;
                    values[k] * (1.0 - w) + values[k + 1] * w
                }
            }
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self.boundary {
            Boundary::Periodic => x.is_finite(),
            Boundary::Transmissive => x >= self.x_lo && x <= self.x_hi,
        }
    }
}
