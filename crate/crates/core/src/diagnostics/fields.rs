use ndarray::Array2;

use crate::error::{Error, Result};
use crate::euler1d::{Boundary, Solution1D};
use crate::stencil;
use crate::thermo::GasParams;

/// Body force per unit mass with an optional declared potential `Φ`
/// (`F = ∂Φ/∂x` for a potential force).
#[derive(Debug, Clone, PartialEq)]
pub struct BodyForce {
    pub force: Array2<f64>,
    pub potential: Option<Array2<f64>>,
}

/// Flow fields on a `(t, x)` grid; arrays are indexed `[time, position]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowFields {
    pub(crate) params: GasParams,
    pub(crate) times: Vec<f64>,
    pub(crate) x: Vec<f64>,
    pub(crate) rho: Array2<f64>,
    pub(crate) u: Array2<f64>,
    pub(crate) p: Array2<f64>,
    /// Length of the period when the x-axis is periodic and uniform.
    pub(crate) period: Option<f64>,
    pub(crate) force: Option<BodyForce>,
    pub(crate) heat_flux: Option<Array2<f64>>,
    pub(crate) viscous_stress: Option<Array2<f64>>,
    pub(crate) convective: Option<Array2<f64>>,
    pub(crate) excluded_subdomains: bool,
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.len() < 3 || axis.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!(
            "{name} needs at least 3 strictly increasing values"
        )));
    }
    Ok(())
}

impl FlowFields {
    /// Fields from sampled `ρ`, `u`, `p`; requires at least three times.
    pub fn new(
        params: GasParams,
        times: Vec<f64>,
        x: Vec<f64>,
        rho: Array2<f64>,
        u: Array2<f64>,
        p: Array2<f64>,
    ) -> Result<Self> {
        check_axis("times", &times)?;
        check_axis("x", &x)?;
        let shape = (times.len(), x.len());
        for f in [&rho, &u, &p] {
            if f.dim() != shape {
                return Err(Error::DimensionMismatch {
                    expected: shape,
                    found: f.dim(),
                });
            }
        }
        if let Some(bad) = rho.iter().chain(p.iter()).find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Domain {
                what: "density and pressure",
                requirement: "positive",
                value: *bad,
            });
        }
        Ok(Self {
            params,
            times,
            x,
            rho,
            u,
            p,
            period: None,
            force: None,
            heat_flux: None,
            viscous_stress: None,
            convective: None,
            excluded_subdomains: false,
        })
    }

    /// Samples analytic `(ρ, u, p)` on the grid.
    pub fn from_fn(
        params: GasParams,
        times: Vec<f64>,
        x: Vec<f64>,
        f: impl Fn(f64, f64) -> (f64, f64, f64),
    ) -> Result<Self> {
        let shape = (times.len(), x.len());
        let mut rho = Array2::zeros(shape);
        let mut u = Array2::zeros(shape);
        let mut p = Array2::zeros(shape);
        for (n, &t) in times.iter().enumerate() {
            for (i, &xi) in x.iter().enumerate() {
                let (r, v, q) = f(t, xi);
                rho[[n, i]] = r;
                u[[n, i]] = v;
                p[[n, i]] = q;
            }
        }
        Self::new(params, times, x, rho, u, p)
    }

    /// Recorded slices of a solver run.
    pub fn from_solution(sol: &Solution1D) -> Result<Self> {
        let shape = (sol.times.len(), sol.mesh.cells);
        let mut rho = Array2::zeros(shape);
        let mut u = Array2::zeros(shape);
        let mut p = Array2::zeros(shape);
        for (n, slice) in sol.slices.iter().enumerate() {
            for (i, w) in slice.iter().enumerate() {
                rho[[n, i]] = w.rho;
                u[[n, i]] = w.u;
                p[[n, i]] = w.p;
            }
        }
        let mut fields = Self::new(sol.params, sol.times.clone(), sol.x(), rho, u, p)?;
        if sol.mesh.boundary == Boundary::Periodic {
            fields.period = Some(sol.mesh.length());
        }
        Ok(fields)
    }

    fn check_shape(&self, f: &Array2<f64>) -> Result<()> {
        if f.dim() != self.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape(),
                found: f.dim(),
            });
        }
        Ok(())
    }

    /// Treats the x-axis as periodic with the given period (uniform spacing).
    pub fn with_period(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }

    pub fn with_force(mut self, force: BodyForce) -> Result<Self> {
        self.check_shape(&force.force)?;
        if let Some(phi) = &force.potential {
            self.check_shape(phi)?;
        }
        self.force = Some(force);
        Ok(self)
    }

    pub fn with_heat_flux(mut self, q: Array2<f64>) -> Result<Self> {
        self.check_shape(&q)?;
        self.heat_flux = Some(q);
        Ok(self)
    }

    pub fn with_viscous_stress(mut self, tau: Array2<f64>) -> Result<Self> {
        self.check_shape(&tau)?;
        self.viscous_stress = Some(tau);
        Ok(self)
    }

    /// Newtonian stress `τ = μ ∂u/∂x`.
    pub fn with_newtonian_viscosity(self, mu: f64) -> Self {
        let tau = self.d_dx(&self.u) * mu;
        Self {
            viscous_stress: Some(tau),
            ..self
        }
    }

    /// Fourier heat flux `q = -κ ∂T/∂x`.
    pub fn with_fourier_conduction(self, kappa: f64) -> Self {
        let q = self.d_dx(&self.temperature()) * -kappa;
        Self {
            heat_flux: Some(q),
            ..self
        }
    }

    /// Quasi-1D `U × rot U` column; identically zero in strict 1D flow.
    pub fn with_convective(mut self, term: Array2<f64>) -> Result<Self> {
        self.check_shape(&term)?;
        self.convective = Some(term);
        Ok(self)
    }

    /// Declares excluded subdomains (the flow domain is not simply connected).
    pub fn with_excluded_subdomains(mut self, excluded: bool) -> Self {
        self.excluded_subdomains = excluded;
        self
    }

    pub fn params(&self) -> &GasParams {
        &self.params
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn rho(&self) -> &Array2<f64> {
        &self.rho
    }

    pub fn u(&self) -> &Array2<f64> {
        &self.u
    }

    pub fn p(&self) -> &Array2<f64> {
        &self.p
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.times.len(), self.x.len())
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    /// `T = p/(ρR)`.
    pub fn temperature(&self) -> Array2<f64> {
        &self.p / &(&self.rho * self.params.r())
    }

    pub(crate) fn d_dx(&self, f: &Array2<f64>) -> Array2<f64> {
        match self.period {
            Some(_) => stencil::partial_periodic_axis1(f.view(), self.x[1] - self.x[0]),
            None => stencil::partial(f.view(), &self.x, 1),
        }
    }

    pub(crate) fn d_dt(&self, f: &Array2<f64>) -> Array2<f64> {
        stencil::partial(f.view(), &self.times, 0)
    }

    /// Linear interpolation of row values at position `x`.
    pub(crate) fn interp_x(&self, row: &[f64], x: f64) -> f64 {
        match self.period {
            Some(period) => {
                let n = self.x.len();
                let dx = self.x[1] - self.x[0];
                let s = (x - self.x[0]).rem_euclid(period) / dx;
                let k = s.floor();
                let w = s - k;
                let i0 = (k as usize) % n;
                row[i0] * (1.0 - w) + row[(i0 + 1) % n] * w
            }
            None => stencil::interp_clamped(&self.x, row, x),
        }
    }
}
