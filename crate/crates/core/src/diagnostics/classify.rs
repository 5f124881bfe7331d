use ndarray::Array2;

use super::{evolutionary_commutator, source_breakdown, EvolutionaryForm, FlowFields, SourceBreakdown};
use crate::error::Result;
use crate::euler1d::{run, Mesh, PrimState, RunConfig};
use crate::thermo::GasParams;

/// Which external action keeps the evolutionary form from closing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstabilityClass {
    Stable,
    /// Nonstationary action dominates in an ideal gas.
    ShockType,
    /// Convective or nonpotential action dominates in an ideal gas.
    ConvectiveVortex,
    /// Viscous or heat-flux entropy production along trajectories.
    TurbulentPulsation,
}

impl InstabilityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Stable => "Stable",
            Self::ShockType => "ShockType",
            Self::ConvectiveVortex => "ConvectiveVortex",
            Self::TurbulentPulsation => "TurbulentPulsation",
        }
    }
}

impl std::fmt::Display for InstabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn linf_over_t(field: &Array2<f64>, temperature: &Array2<f64>) -> f64 {
    field
        .iter()
        .zip(temperature.iter())
        .map(|(v, t)| (v / t).abs())
        .fold(0.0, f64::max)
}

fn linf(field: &Array2<f64>) -> f64 {
    field.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Decision table on the source terms. A term is significant when its
/// largest magnitude (momentum terms divided by `T`) exceeds `tol`.
pub fn classify(breakdown: &SourceBreakdown, a1: &Array2<f64>, tol: f64) -> InstabilityClass {
    if linf(a1) > tol {
        return InstabilityClass::TurbulentPulsation;
    }
    let t = &breakdown.temperature;
    let nonstationary = linf_over_t(&breakdown.nonstationary, t);
    let convective = linf_over_t(&breakdown.convective, t);
    let nonpotential = linf_over_t(&breakdown.nonpotential, t);
    if nonstationary <= tol && convective <= tol && nonpotential <= tol {
        InstabilityClass::Stable
    } else if nonstationary >= convective.max(nonpotential) {
        InstabilityClass::ShockType
    } else {
        InstabilityClass::ConvectiveVortex
    }
}

/// Outcome of the stable-flow test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeReport {
    pub stationary: bool,
    pub potential_force: bool,
    pub simply_connected: bool,
    pub max_nonstationary: f64,
    pub max_nonpotential: f64,
    pub holds: bool,
}

/// Stationary flow, potential force and no excluded subdomains.
pub fn lagrange_check(fields: &FlowFields, tol: f64) -> LagrangeReport {
    let b = source_breakdown(fields);
    let max_nonstationary = linf(&b.nonstationary);
    let max_nonpotential = linf(&b.nonpotential);
    let stationary = max_nonstationary <= tol;
    let potential_force = max_nonpotential <= tol;
    let simply_connected = !fields.excluded_subdomains;
    LagrangeReport {
        stationary,
        potential_force,
        simply_connected,
        max_nonstationary,
        max_nonpotential,
        holds: stationary && potential_force && simply_connected,
    }
}

/// Finite-difference noise measured on a uniform flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseFloor {
    pub value: f64,
}

impl NoiseFloor {
    pub const MINIMUM: f64 = 1e-12;
    pub const SIGNIFICANCE: f64 = 10.0;

    /// Largest source or commutator magnitude of a reference flow.
    pub fn from_fields(reference: &FlowFields) -> Result<Self> {
        let b = source_breakdown(reference);
        let k = evolutionary_commutator(&EvolutionaryForm::from_fields(reference)?)?.max_abs();
        let t = &b.temperature;
        let measured = [
            linf_over_t(&b.nonstationary, t),
            linf_over_t(&b.nonpotential, t),
            linf_over_t(&b.convective, t),
            linf(&b.a1()),
            k,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        Ok(Self {
            value: measured.max(Self::MINIMUM),
        })
    }

    /// Calibration on a solver run of uniform gas over the given mesh and
    /// output times.
    pub fn calibrate(mesh: &Mesh, params: GasParams, cfl: f64, output_times: &[f64]) -> Result<Self> {
        let state = PrimState::new(1.0, 0.0, 1.0)?;
        let config = RunConfig {
            mesh: *mesh,
            params,
            initial: vec![state; mesh.cells],
            cfl,
            t_end: *output_times.last().unwrap_or(&1.0),
            output_times: output_times.to_vec(),
            seeds: Vec::new(),
        };
        Self::from_fields(&FlowFields::from_solution(&run(&config)?)?)
    }

    /// Magnitude above which a source or commutator counts as significant.
    pub fn threshold(&self) -> f64 {
        Self::SIGNIFICANCE * self.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{a1_viscous, BodyForce};
    use proptest::prelude::*;

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    fn fields(f: impl Fn(f64, f64) -> (f64, f64, f64)) -> FlowFields {
        FlowFields::from_fn(GasParams::default(), axis(0.0, 1.0, 6), axis(0.0, 1.0, 21), f).unwrap()
    }

    const TOL: f64 = 1e-9;

    #[test]
    fn uniform_flow_is_stable() {
        let f = fields(|_, _| (1.0, 0.2, 1.0));
        let b = source_breakdown(&f);
        assert_eq!(classify(&b, &a1_viscous(&f).a1, TOL), InstabilityClass::Stable);
        let report = lagrange_check(&f, TOL);
        assert!(report.holds);
        let k = evolutionary_commutator(&EvolutionaryForm::from_fields(&f).unwrap()).unwrap();
        assert!(k.max_abs() <= TOL);
    }

    #[test]
    fn accelerating_flow_is_shock_type() {
        let f = fields(|t, _| (1.0, 0.5 * t, 1.0));
        let b = source_breakdown(&f);
        assert_eq!(classify(&b, &a1_viscous(&f).a1, TOL), InstabilityClass::ShockType);
        assert!(!lagrange_check(&f, TOL).stationary);
    }

    #[test]
    fn nonpotential_force_is_convective() {
        let f = fields(|_, _| (1.0, 0.0, 1.0));
        let force = Array2::from_shape_fn(f.shape(), |(_, i)| 0.1 * (i as f64).sin());
        let f = f.with_force(BodyForce { force, potential: None }).unwrap();
        let b = source_breakdown(&f);
        assert_eq!(classify(&b, &a1_viscous(&f).a1, TOL), InstabilityClass::ConvectiveVortex);
        let report = lagrange_check(&f, TOL);
        assert!(report.stationary && !report.potential_force && !report.holds);
    }

    #[test]
    fn declared_potential_force_passes() {
        let f = fields(|_, _| (1.0, 0.0, 1.0));
        let x = f.x().to_vec();
        let phi = Array2::from_shape_fn(f.shape(), |(_, i)| 0.3 * x[i]);
        let force = Array2::from_elem(f.shape(), 0.3);
        let f = f.with_force(BodyForce { force, potential: Some(phi) }).unwrap();
        assert!(lagrange_check(&f, TOL).potential_force);
    }

    #[test]
    fn excluded_subdomains_break_the_condition() {
        let f = fields(|_, _| (1.0, 0.0, 1.0)).with_excluded_subdomains(true);
        let report = lagrange_check(&f, TOL);
        assert!(!report.simply_connected && !report.holds);
    }

    #[test]
    fn viscous_shear_is_pulsation() {
        let f = fields(|_, x| (1.0, x * x, 1.0));
        let tau = Array2::from_shape_fn(f.shape(), |(_, i)| 0.02 * f.x()[i]);
        let f = f.with_viscous_stress(tau).unwrap();
        let b = source_breakdown(&f);
        let a1 = a1_viscous(&f).a1;
        assert!(a1.iter().all(|v| *v >= 0.0));
        assert_eq!(classify(&b, &a1, TOL), InstabilityClass::TurbulentPulsation);
    }

    #[test]
    fn calibrated_floor_is_tiny() {
        let mesh = Mesh::new(0.0, 1.0, 32, crate::euler1d::Boundary::Transmissive).unwrap();
        let floor = NoiseFloor::calibrate(&mesh, GasParams::default(), 0.8, &[0.0, 0.05, 0.1, 0.15]).unwrap();
        assert!(floor.value >= NoiseFloor::MINIMUM && floor.value < 1e-10);
        assert_eq!(floor.threshold(), 10.0 * floor.value);
    }

    proptest! {
        #[test]
        fn classification_ignores_common_scale(
            k in 1e-3f64..1e3,
            ns in 0.0f64..1.0,
            np in 0.0f64..1.0,
            cv in 0.0f64..1.0,
            a in 0.0f64..1.0,
        ) {
            let f = fields(|_, _| (1.0, 0.0, 1.0));
            let mut b = source_breakdown(&f);
            b.nonstationary.fill(ns);
            b.nonpotential.fill(np);
            b.convective.fill(cv);
            b.viscous.fill(a);
            let tol = 0.3;
            let base = classify(&b, &b.a1(), tol);
            let scaled = b.scaled(k);
            prop_assert_eq!(classify(&scaled, &scaled.a1(), tol * k), base);
        }
    }
}
