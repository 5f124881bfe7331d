use ndarray::{Array2, Zip};

use super::FlowFields;

/// Entropy production along trajectories from transport terms:
/// `A1 = heat + viscous` with
/// `heat = (1/ρ) ∂(-q/T)/∂x - (q/(ρT)) ∂T/∂x` and `viscous = (τ/ρ) ∂u/∂x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViscousHeatTerms {
    pub a1: Array2<f64>,
    pub heat: Array2<f64>,
    pub viscous: Array2<f64>,
    /// No heat flux was supplied; it was taken as zero.
    pub missing_heat_flux: bool,
    /// No viscous stress was supplied; it was taken as zero.
    pub missing_viscous_stress: bool,
}

pub fn a1_viscous(fields: &FlowFields) -> ViscousHeatTerms {
    let shape = fields.shape();
    let temp = fields.temperature();
    let heat = match &fields.heat_flux {
        Some(q) => {
            let q_over_t = q / &temp;
            let div = fields.d_dx(&q_over_t.mapv(|v| -v));
            let grad_t = fields.d_dx(&temp);
            let mut out = Array2::zeros(shape);
            Zip::from(&mut out)
                .and(&div)
                .and(&q_over_t)
                .and(&grad_t)
                .and(&fields.rho)
                .for_each(|o, &d, &qt, &gt, &r| *o = (d - qt * gt) / r);
            out
        }
        None => Array2::zeros(shape),
    };
    let viscous = match &fields.viscous_stress {
        Some(tau) => {
            let du = fields.d_dx(&fields.u);
            let mut out = Array2::zeros(shape);
            Zip::from(&mut out)
                .and(tau)
                .and(&du)
                .and(&fields.rho)
                .for_each(|o, &t, &d, &r| *o = t * d / r);
            out
        }
        None => Array2::zeros(shape),
    };
    ViscousHeatTerms {
        a1: &heat + &viscous,
        heat,
        viscous,
        missing_heat_flux: fields.heat_flux.is_none(),
        missing_viscous_stress: fields.viscous_stress.is_none(),
    }
}

/// Terms of the momentum balance written for the entropy gradient, plus the
/// transport terms of `A1`.
///
/// `h0_gradient` is `∂(h₀ - Φ)/∂x` and `nonpotential` is `F - ∂Φ/∂x`
/// (the whole force when no potential is declared), so that
/// `T·A_ν = h0_gradient + convective - nonpotential + nonstationary`.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceBreakdown {
    pub nonstationary: Array2<f64>,
    pub nonpotential: Array2<f64>,
    pub convective: Array2<f64>,
    pub h0_gradient: Array2<f64>,
    pub viscous: Array2<f64>,
    pub heat: Array2<f64>,
    /// Temperature used to divide the momentum terms.
    pub temperature: Array2<f64>,
}

fn linf(f: &Array2<f64>) -> f64 {
    f.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

impl SourceBreakdown {
    /// `(h0_gradient + convective - nonpotential + nonstationary)/T`.
    pub fn a_nu(&self) -> Array2<f64> {
        let mut out = Array2::zeros(self.temperature.raw_dim());
        Zip::from(&mut out)
            .and(&self.h0_gradient)
            .and(&self.convective)
            .and(&self.nonpotential)
            .and(&self.nonstationary)
            .and(&self.temperature)
            .for_each(|o, &h, &c, &f, &n, &t| *o = (h + c - f + n) / t);
        out
    }

    pub fn a1(&self) -> Array2<f64> {
        &self.heat + &self.viscous
    }

    pub fn max_nonstationary(&self) -> f64 {
        linf(&self.nonstationary)
    }

    pub fn max_nonpotential(&self) -> f64 {
        linf(&self.nonpotential)
    }

    pub fn max_convective(&self) -> f64 {
        linf(&self.convective)
    }

    pub fn max_transport(&self) -> f64 {
        linf(&self.viscous).max(linf(&self.heat))
    }

    /// Every field multiplied by `k` (temperature untouched).
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            nonstationary: &self.nonstationary * k,
            nonpotential: &self.nonpotential * k,
            convective: &self.convective * k,
            h0_gradient: &self.h0_gradient * k,
            viscous: &self.viscous * k,
            heat: &self.heat * k,
            temperature: self.temperature.clone(),
        }
    }
}

pub fn source_breakdown(fields: &FlowFields) -> SourceBreakdown {
    let shape = fields.shape();
    let g = fields.params.gamma();
    let temperature = fields.temperature();
    let mut h0 = Array2::zeros(shape);
    Zip::from(&mut h0)
        .and(&fields.u)
        .and(&fields.p)
        .and(&fields.rho)
        .for_each(|h, &u, &p, &r| *h = 0.5 * u * u + g / (g - 1.0) * p / r);

    let (h0_gradient, nonpotential) = match &fields.force {
        Some(force) => match &force.potential {
            Some(phi) => (fields.d_dx(&(&h0 - phi)), &force.force - &fields.d_dx(phi)),
            None => (fields.d_dx(&h0), force.force.clone()),
        },
        None => (fields.d_dx(&h0), Array2::zeros(shape)),
    };
    let transport = a1_viscous(fields);
    SourceBreakdown {
        nonstationary: fields.d_dt(&fields.u),
        nonpotential,
        convective: fields.convective.clone().unwrap_or_else(|| Array2::zeros(shape)),
        h0_gradient,
        viscous: transport.viscous,
        heat: transport.heat,
        temperature,
    }
}

/// Coefficient of the form across trajectories, sampled on the `(t, x)` grid.
pub fn a_nu(fields: &FlowFields) -> Array2<f64> {
    source_breakdown(fields).a_nu()
}
