//! Ideal-gas thermodynamics.
//!
//! The heat form `dE + p dV = c_v dT + (RT/V) dV` is not closed: its
//! commutator in `(T, V)` is `R/V`. Dividing by `T` gives
//! `(c_v/T) dT + (R/V) dV = dS`, a closed form whose potential is the
//! state entropy `S = c_v ln T + R ln V` (normalised so that `S(1, 1) = 0`).
//! Process paths carry the externally supplied increments `δQ`, `δW`, `δG`
//! and are checked against the first-law balance and the Clausius inequality.

use crate::error::{ensure_positive, Error, Result};
use crate::forms::{self, Grid2D, OneForm2D};

/// Ratio of specific heats and specific gas constant of an ideal gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    gamma: f64,
    r: f64,
}

impl GasParams {
    pub fn new(gamma: f64, r: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::Domain {
                what: "gamma",
                requirement: "greater than 1",
                value: gamma,
            });
        }
        ensure_positive("R", r)?;
        Ok(Self { gamma, r })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Specific heat at constant volume, `R/(γ-1)`.
    pub fn cv(&self) -> f64 {
        self.r / (self.gamma - 1.0)
    }

    /// Specific heat at constant pressure, `γR/(γ-1)`.
    pub fn cp(&self) -> f64 {
        self.gamma * self.cv()
    }
}

impl Default for GasParams {
    /// Diatomic gas in reduced units: `γ = 1.4`, `R = 1`.
    fn default() -> Self {
        Self { gamma: 1.4, r: 1.0 }
    }
}

/// A point in thermodynamic state space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    /// Temperature.
    pub t: f64,
    /// Specific volume.
    pub v: f64,
    /// Pressure, `RT/V`.
    pub p: f64,
    /// Specific internal energy, `c_v T`.
    pub e: f64,
    /// State entropy, `c_v ln T + R ln V`.
    pub s: f64,
}

/// Ideal-gas state from specific volume and temperature.
pub fn eos(v: f64, t: f64, params: &GasParams) -> Result<ThermoState> {
    ensure_positive("specific volume", v)?;
    ensure_positive("temperature", t)?;
    let r = params.r();
    let cv = params.cv();
    Ok(ThermoState {
        t,
        v,
        p: r * t / v,
        e: cv * t,
        s: cv * t.ln() + r * v.ln(),
    })
}

/// Ideal-gas state from density and temperature.
pub fn eos_from_density(rho: f64, t: f64, params: &GasParams) -> Result<ThermoState> {
    eos(1.0 / ensure_positive("density", rho)?, t, params)
}

/// A discretised process: `n` states joined by `n - 1` steps, each step
/// carrying the heat influx `dq`, the non-compression mechanical action `dw`
/// and any other energetic action `dg`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoPath {
    states: Vec<ThermoState>,
    dq: Vec<f64>,
    dw: Vec<f64>,
    dg: Vec<f64>,
    cyclic: bool,
}

impl ThermoPath {
    pub fn new(states: Vec<ThermoState>, dq: Vec<f64>, dw: Vec<f64>, dg: Vec<f64>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a path needs at least 2 states, got {}",
                states.len()
            )));
        }
        let steps = states.len() - 1;
        for (name, inc) in [("dQ", &dq), ("dW", &dw), ("dG", &dg)] {
            if inc.len() != steps {
                return Err(Error::InvalidInput(format!(
                    "{name} has {} increments for {steps} steps",
                    inc.len()
                )));
            }
        }
        for st in &states {
            ensure_positive("temperature", st.t)?;
            ensure_positive("specific volume", st.v)?;
        }
        Ok(Self {
            states,
            dq,
            dw,
            dg,
            cyclic: false,
        })
    }

    /// Marks the path as a cycle after checking that it closes within `tol`
    /// (relative, in `T` and `V`).
    pub fn into_cycle(mut self, tol: f64) -> Result<Self> {
        let (a, b) = (self.states[0], self.states[self.states.len() - 1]);
        let gap = ((a.t - b.t) / a.t).abs().max(((a.v - b.v) / a.v).abs());
        if gap > tol {
            return Err(Error::InvalidInput(format!(
                "cycle does not close: relative gap {gap:e} > {tol:e}"
            )));
        }
        self.cyclic = true;
        Ok(self)
    }

    pub fn states(&self) -> &[ThermoState] {
        &self.states
    }

    pub fn heat(&self) -> &[f64] {
        &self.dq
    }

    pub fn work(&self) -> &[f64] {
        &self.dw
    }

    pub fn other(&self) -> &[f64] {
        &self.dg
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn steps(&self) -> usize {
        self.dq.len()
    }

    /// Largest relative step size `max(|ΔT|/T̄, |ΔV|/V̄)`.
    pub fn max_step(&self) -> f64 {
        self.states
            .windows(2)
            .map(|w| {
                let dt = (w[1].t - w[0].t).abs() / (0.5 * (w[1].t + w[0].t));
                let dv = (w[1].v - w[0].v).abs() / (0.5 * (w[1].v + w[0].v));
                dt.max(dv)
            })
            .fold(0.0, f64::max)
    }

    /// Reversible isothermal leg from `v0` to `v1` at temperature `t`, each
    /// step receiving the exact heat `RT ln(V_{k+1}/V_k)`.
    pub fn isothermal(params: &GasParams, t: f64, v0: f64, v1: f64, steps: usize) -> Result<Self> {
        let states = geometric(v0, v1, steps)?
            .into_iter()
            .map(|v| eos(v, t, params))
            .collect::<Result<Vec<_>>>()?;
        let dq = states
            .windows(2)
            .map(|w| params.r() * t * (w[1].v / w[0].v).ln())
            .collect();
        Self::new(states, dq, vec![0.0; steps], vec![0.0; steps])
    }

    /// Reversible adiabatic leg from `(v0, t0)` to `v1` along `T V^(γ-1) = const`.
    pub fn adiabatic(params: &GasParams, t0: f64, v0: f64, v1: f64, steps: usize) -> Result<Self> {
        ensure_positive("temperature", t0)?;
        let k = params.gamma() - 1.0;
        let states = geometric(v0, v1, steps)?
            .into_iter()
            .map(|v| eos(v, t0 * (v0 / v).powf(k), params))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states, vec![0.0; steps], vec![0.0; steps], vec![0.0; steps])
    }

    /// Carnot cycle between `t_hot` and `t_cold`: isothermal expansion
    /// `v1 -> v2` at `t_hot`, adiabatic expansion, isothermal compression at
    /// `t_cold`, adiabatic compression. `steps` is split evenly over the four
    /// legs (rounded up to a multiple of four).
    pub fn carnot(params: &GasParams, t_hot: f64, t_cold: f64, v1: f64, v2: f64, steps: usize) -> Result<Self> {
        Self::carnot_with_friction(params, t_hot, t_cold, v1, v2, steps, 0.0)
    }

    /// Carnot cycle in which `friction` of the hot-leg heat is delivered as
    /// mechanical action instead: `δQ` is reduced and `δW` raised by the same
    /// total, spread uniformly over the hot isothermal leg.
    pub fn carnot_with_friction(
        params: &GasParams,
        t_hot: f64,
        t_cold: f64,
        v1: f64,
        v2: f64,
        steps: usize,
        friction: f64,
    ) -> Result<Self> {
        ensure_positive("t_hot", t_hot)?;
        ensure_positive("t_cold", t_cold)?;
        if t_cold >= t_hot {
            return Err(Error::InvalidInput(format!(
                "t_cold = {t_cold} must be below t_hot = {t_hot}"
            )));
        }
        if v2 <= v1 {
            return Err(Error::InvalidInput(format!("v2 = {v2} must exceed v1 = {v1}")));
        }
        let leg = steps.div_ceil(4).max(1);
        let expansion = (t_hot / t_cold).powf(1.0 / (params.gamma() - 1.0));
        let (v3, v4) = (v2 * expansion, v1 * expansion);

        let mut hot = Self::isothermal(params, t_hot, v1, v2, leg)?;
        let per_step = friction / leg as f64;
        for (q, w) in hot.dq.iter_mut().zip(hot.dw.iter_mut()) {
            *q -= per_step;
            *w += per_step;
        }
        let legs = [
            hot,
            Self::adiabatic(params, t_hot, v2, v3, leg)?,
            Self::isothermal(params, t_cold, v3, v4, leg)?,
            Self::adiabatic(params, t_cold, v4, v1, leg)?,
        ];
        let mut cycle = Self::concat(&legs)?;
        // Land exactly on the starting state.
        let last = cycle.states.len() - 1;
        cycle.states[last] = cycle.states[0];
        cycle.into_cycle(1e-12)
    }

    /// Joins consecutive legs; each leg must start where the previous ended.
    pub fn concat(legs: &[ThermoPath]) -> Result<Self> {
        let first = legs
            .first()
            .ok_or_else(|| Error::InvalidInput("no legs to join".into()))?;
        let mut states = first.states.clone();
        let (mut dq, mut dw, mut dg) = (first.dq.clone(), first.dw.clone(), first.dg.clone());
        for leg in &legs[1..] {
            let (end, start) = (states[states.len() - 1], leg.states[0]);
            if ((end.t - start.t) / end.t).abs() > 1e-10 || ((end.v - start.v) / end.v).abs() > 1e-10 {
                return Err(Error::InvalidInput("legs are not contiguous".into()));
            }
            states.extend_from_slice(&leg.states[1..]);
            dq.extend_from_slice(&leg.dq);
            dw.extend_from_slice(&leg.dw);
            dg.extend_from_slice(&leg.dg);
        }
        Self::new(states, dq, dw, dg)
    }

    /// Multiplies every energy on the path (`δQ`, `δW`, `δG`, `E`, `S`, `p`)
    /// by `factor`, which is the same as rescaling `R` at fixed `T`, `V`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        ensure_positive("rescale factor", factor)?;
        let scale = |xs: &[f64]| xs.iter().map(|x| x * factor).collect::<Vec<_>>();
        let states = self
            .states
            .iter()
            .map(|s| ThermoState {
                p: s.p * factor,
                e: s.e * factor,
                s: s.s * factor,
                ..*s
            })
            .collect();
        Ok(Self {
            states,
            dq: scale(&self.dq),
            dw: scale(&self.dw),
            dg: scale(&self.dg),
            cyclic: self.cyclic,
        })
    }
}

fn geometric(v0: f64, v1: f64, steps: usize) -> Result<Vec<f64>> {
    ensure_positive("v0", v0)?;
    ensure_positive("v1", v1)?;
    if steps == 0 {
        return Err(Error::InvalidInput("a leg needs at least one step".into()));
    }
    let ratio = v1 / v0;
    let mut vs: Vec<f64> = (0..=steps)
        .map(|k| v0 * ratio.powf(k as f64 / steps as f64))
        .collect();
    vs[steps] = v1;
    Ok(vs)
}

/// Accumulated first-law residual `Σ (ΔE + p̄ ΔV - δQ - δG - δW)` with the
/// step-midpoint pressure `p̄`.
pub fn first_law_residual(path: &ThermoPath) -> f64 {
    path.states
        .windows(2)
        .zip(path.dq.iter().zip(path.dw.iter().zip(&path.dg)))
        .map(|(w, (dq, (dw, dg)))| {
            let p_mid = 0.5 * (w[0].p + w[1].p);
            (w[1].e - w[0].e) + p_mid * (w[1].v - w[0].v) - dq - dg - dw
        })
        .sum()
}

/// Analytic commutator of the heat form `c_v dT + (RT/V) dV` in `(T, V)`:
/// `∂(RT/V)/∂T - ∂c_v/∂V = R/V`.
pub fn heat_form_commutator(params: &GasParams, _t: f64, v: f64) -> f64 {
    params.r() / v
}

/// Rectangle `[t_min, t_max] × [v_min, v_max]` in the `(T, V)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRegion {
    pub t_min: f64,
    pub t_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl StateRegion {
    pub fn new(t_min: f64, t_max: f64, v_min: f64, v_max: f64) -> Result<Self> {
        ensure_positive("t_min", t_min)?;
        ensure_positive("v_min", v_min)?;
        if !(t_max > t_min && v_max > v_min) {
            return Err(Error::InvalidInput("region bounds must be increasing".into()));
        }
        Ok(Self {
            t_min,
            t_max,
            v_min,
            v_max,
        })
    }

    /// Uniform `n × n` grid with `ξ¹ = T`, `ξ² = V`.
    pub fn grid(&self, n: usize) -> Result<Grid2D> {
        Grid2D::uniform((self.t_min, self.t_max, n), (self.v_min, self.v_max, n))
    }
}

/// The heat form `c_v dT + (RT/V) dV`, optionally divided by `T`.
pub fn heat_form(params: &GasParams, grid: &Grid2D, divide_by_t: bool) -> OneForm2D {
    let (r, cv) = (params.r(), params.cv());
    if divide_by_t {
        OneForm2D::from_fn(grid, |t, v| (cv / t, r / v))
    } else {
        OneForm2D::from_fn(grid, |t, v| (cv, r * t / v))
    }
}

/// Finite-difference commutator of the heat form on an `n × n` grid.
pub fn heat_form_commutator_field(
    params: &GasParams,
    region: &StateRegion,
    n: usize,
    divide_by_t: bool,
) -> Result<forms::CommutatorField> {
    let grid = region.grid(n)?;
    forms::commutator(&heat_form(params, &grid, divide_by_t), &grid)
}

/// Largest interior commutator of `(dE + p dV)/T` on an `n × n` grid over
/// `region`; zero up to roundoff since `1/T` is an integrating factor.
pub fn integrating_factor_check(params: &GasParams, region: &StateRegion, n: usize) -> Result<f64> {
    Ok(heat_form_commutator_field(params, region, n, true)?.max_abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClausiusClass {
    /// `ΔS = ∫δQ/T` within tolerance.
    Reversible,
    /// `ΔS > ∫δQ/T`: other actions besides heat influx are present.
    IrreversibleConsistent,
    /// `ΔS < ∫δQ/T`.
    ViolatesSecondLaw,
}

impl ClausiusClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Reversible => "reversible",
            Self::IrreversibleConsistent => "irreversible-consistent",
            Self::ViolatesSecondLaw => "violates-second-law",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClausiusReport {
    pub delta_s: f64,
    pub heat_integral: f64,
    pub tolerance: f64,
    pub class: ClausiusClass,
}

/// Default classification tolerance: `max(1e-10, 10 h² scale)` with `h` the
/// largest relative step and `scale` the magnitude `Σ|δQ|/T̄ + |ΔS|`.
pub fn default_clausius_tolerance(path: &ThermoPath) -> f64 {
    let scale: f64 = path
        .states
        .windows(2)
        .zip(&path.dq)
        .map(|(w, q)| q.abs() / (0.5 * (w[0].t + w[1].t)))
        .sum::<f64>()
        + (path.states[path.states.len() - 1].s - path.states[0].s).abs();
    let h = path.max_step();
    (10.0 * h * h * scale).max(1e-10)
}

/// Entropy change, discretised `∫ δQ/T` (midpoint temperature) and the
/// second-law classification.
pub fn clausius(path: &ThermoPath, tol: Option<f64>) -> Result<ClausiusReport> {
    for st in &path.states {
        ensure_positive("temperature", st.t)?;
    }
    let delta_s = path.states[path.states.len() - 1].s - path.states[0].s;
    let heat_integral: f64 = path
        .states
        .windows(2)
        .zip(&path.dq)
        .map(|(w, q)| q / (0.5 * (w[0].t + w[1].t)))
        .sum();
    let tolerance = tol.unwrap_or_else(|| default_clausius_tolerance(path));
    let gap = delta_s - heat_integral;
    let class = if gap.abs() <= tolerance {
        ClausiusClass::Reversible
    } else if gap > tolerance {
        ClausiusClass::IrreversibleConsistent
    } else {
        ClausiusClass::ViolatesSecondLaw
    };
    Ok(ClausiusReport {
        delta_s,
        heat_integral,
        tolerance,
        class,
    })
}

/// Gas-dynamic entropy `s = p/ρ^γ`.
pub fn gasdyn_entropy(p: f64, rho: f64, params: &GasParams) -> Result<f64> {
    ensure_positive("pressure", p)?;
    ensure_positive("density", rho)?;
    Ok(p / rho.powf(params.gamma()))
}

/// Sound speed `a = sqrt(γ p/ρ)`.
pub fn sound_speed(p: f64, rho: f64, params: &GasParams) -> Result<f64> {
    ensure_positive("pressure", p)?;
    ensure_positive("density", rho)?;
    Ok((params.gamma() * p / rho).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn air() -> GasParams {
        GasParams::default()
    }

    #[test]
    fn gas_params_validate() {
        assert!(GasParams::new(1.0, 1.0).is_err());
        assert!(GasParams::new(1.4, 0.0).is_err());
        let g = GasParams::new(5.0 / 3.0, 2.0).unwrap();
        assert_eq!(g.cv(), 2.0 / (5.0 / 3.0 - 1.0));
    }

    #[test]
    fn eos_examples() {
        let s = eos(1.0, 1.0, &air()).unwrap();
        assert_eq!((s.p, s.s), (1.0, 0.0));
        assert!((s.e - 2.5).abs() < 1e-15);

        let s = eos(2.0, 1.0, &air()).unwrap();
        assert_eq!(s.p, 0.5);
        assert!((s.s - std::f64::consts::LN_2).abs() < 1e-15);

        let s = eos(1.0, 2.0, &air()).unwrap();
        assert_eq!(s.p, 2.0);
        assert!((s.e - 5.0).abs() < 1e-14);

        assert!(matches!(eos(0.0, 1.0, &air()), Err(Error::Domain { .. })));
        assert!(eos(1.0, -1.0, &air()).is_err());
        assert_eq!(eos_from_density(0.5, 1.0, &air()).unwrap().v, 2.0);
    }

    #[test]
    fn first_law_on_isotherm_converges() {
        let residual = |n| first_law_residual(&ThermoPath::isothermal(&air(), 1.0, 1.0, 2.0, n).unwrap());
        let (r1, r2) = (residual(100), residual(200));
        assert!(r1.abs() < 1e-4);
        assert!((r1 / r2 - 4.0).abs() < 0.1, "{r1} {r2}");
        let total: f64 = ThermoPath::isothermal(&air(), 1.0, 1.0, 2.0, 200).unwrap().heat().iter().sum();
        assert!((total - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn first_law_on_adiabat_and_bookkeeping() {
        let path = ThermoPath::adiabatic(&air(), 2.0, 1.0, 3.0, 400).unwrap();
        let base = first_law_residual(&path);
        assert!(base.abs() < 1e-5);
        let mut dq = path.heat().to_vec();
        dq[17] += 0.1;
        let injected = ThermoPath::new(
            path.states().to_vec(),
            dq,
            path.work().to_vec(),
            path.other().to_vec(),
        )
        .unwrap();
        assert!((first_law_residual(&injected) - base + 0.1).abs() < 1e-14);
    }

    #[test]
    fn heat_form_commutator_examples() {
        let p = |r| GasParams::new(1.4, r).unwrap();
        assert_eq!(heat_form_commutator(&p(1.0), 3.0, 2.0), 0.5);
        assert_eq!(heat_form_commutator(&p(1.0), 0.2, 1.0), 1.0);
        assert_eq!(heat_form_commutator(&p(2.0), 1.0, 4.0), 0.5);
    }

    #[test]
    fn integrating_factor_closes_the_heat_form() {
        let region = StateRegion::new(1.0, 2.0, 1.0, 2.0).unwrap();
        let coarse = integrating_factor_check(&air(), &region, 33).unwrap();
        let fine = integrating_factor_check(&air(), &region, 65).unwrap();
        assert!(coarse < 1e-12 && fine < 1e-12);
        assert!(fine <= (coarse / 4.0).max(1e-12));

        let undivided = heat_form_commutator_field(&air(), &region, 33, false).unwrap();
        let v_min_interior = 1.0 + 1.0 / 32.0;
        assert!((undivided.max_abs() - 1.0 / v_min_interior).abs() < 1e-10);
    }

    #[test]
    fn clausius_examples() {
        let carnot = ThermoPath::carnot(&air(), 2.0, 1.0, 1.0, 2.0, 4000).unwrap();
        let rep = clausius(&carnot, None).unwrap();
        assert_eq!(rep.class, ClausiusClass::Reversible);
        assert_eq!(rep.delta_s, 0.0);
        assert!(rep.heat_integral.abs() < 1e-12);

        let iso = ThermoPath::isothermal(&air(), 1.0, 1.0, 2.0, 100).unwrap();
        let rep = clausius(&iso, None).unwrap();
        assert!((rep.delta_s - 2f64.ln()).abs() < 1e-14);
        assert!((rep.heat_integral - 2f64.ln()).abs() < 1e-14);
        assert_eq!(rep.class, ClausiusClass::Reversible);

        // Friction: 0.2 of the action arrives as work instead of heat.
        let mut dq = iso.heat().to_vec();
        let mut dw = iso.work().to_vec();
        for (q, w) in dq.iter_mut().zip(dw.iter_mut()) {
            *q -= 0.2 / 100.0;
            *w += 0.2 / 100.0;
        }
        let rubbed = ThermoPath::new(iso.states().to_vec(), dq, dw, iso.other().to_vec()).unwrap();
        let rep = clausius(&rubbed, None).unwrap();
        assert_eq!(rep.class, ClausiusClass::IrreversibleConsistent);
        assert!((rep.delta_s - rep.heat_integral - 0.2).abs() < 1e-12);

        // Heat in excess of the entropy change cannot be reversible.
        let dq: Vec<f64> = iso.heat().iter().map(|q| q + 0.01).collect();
        let bad = ThermoPath::new(iso.states().to_vec(), dq, iso.work().to_vec(), iso.other().to_vec()).unwrap();
        assert_eq!(clausius(&bad, None).unwrap().class, ClausiusClass::ViolatesSecondLaw);
    }

    #[test]
    fn path_validation() {
        let s = eos(1.0, 1.0, &air()).unwrap();
        assert!(ThermoPath::new(vec![s], vec![], vec![], vec![]).is_err());
        assert!(ThermoPath::new(vec![s, s], vec![0.0, 0.0], vec![0.0], vec![0.0]).is_err());
        let open = ThermoPath::isothermal(&air(), 1.0, 1.0, 2.0, 4).unwrap();
        assert!(open.into_cycle(1e-6).is_err());
    }

    #[test]
    fn gasdyn_entropy_and_sound_speed_examples() {
        let g = air();
        assert_eq!(gasdyn_entropy(1.0, 1.0, &g).unwrap(), 1.0);
        assert_eq!(gasdyn_entropy(2.0, 1.0, &g).unwrap(), 2.0);
        // 0.125^1.4 = exp(1.4 ln 0.125)
        let expected = 0.1 / (1.4 * 0.125f64.ln()).exp();
        assert!((gasdyn_entropy(0.1, 0.125, &g).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.8379).abs() < 1e-4);
        assert!(gasdyn_entropy(-1.0, 1.0, &g).is_err());

        assert!((sound_speed(1.0, 1.0, &g).unwrap() - 1.183_216).abs() < 1e-6);
        assert!((sound_speed(1.0, 1.4, &g).unwrap() - 1.0).abs() < 1e-15);
        assert!((sound_speed(4.0, 1.0, &g).unwrap() - 2.366_432).abs() < 1e-6);
        assert!(sound_speed(1.0, 0.0, &g).is_err());
    }

    proptest! {
        #[test]
        fn eos_satisfies_ideal_gas_law(v in 1e-3..1e3f64, t in 1e-3..1e3f64, r in 0.1..10.0f64) {
            let g = GasParams::new(1.4, r).unwrap();
            let s = eos(v, t, &g).unwrap();
            prop_assert!((s.p * s.v - r * t).abs() <= 4.0 * f64::EPSILON * r * t);
        }

        #[test]
        fn entropy_is_constant_on_exact_adiabats(s0 in 0.1..10.0f64, rho in prop::collection::vec(0.05..20.0f64, 8)) {
            let g = air();
            for r in rho {
                let p = s0 * r.powf(1.4);
                let s = gasdyn_entropy(p, r, &g).unwrap();
                prop_assert!((s - s0).abs() <= 1e-13 * s0);
            }
        }

        #[test]
        fn clausius_class_is_scale_invariant(factor in 1e-2..1e2f64, friction in 0.0..0.5f64) {
            let path = ThermoPath::carnot_with_friction(&air(), 2.0, 1.0, 1.0, 2.0, 400, friction).unwrap();
            let a = clausius(&path, None).unwrap().class;
            let b = clausius(&path.rescaled(factor).unwrap(), None).unwrap().class;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn reversible_cycles_have_small_heat_integral(
            t_hot in 1.5..4.0f64, v2 in 1.5..4.0f64, steps in 40usize..400
        ) {
            let path = ThermoPath::carnot(&air(), t_hot, 1.0, 1.0, v2, steps).unwrap();
            let h = path.max_step();
            let rep = clausius(&path, None).unwrap();
            prop_assert!(rep.heat_integral.abs() <= 10.0 * h * h + 1e-12);
            prop_assert_eq!(rep.class, ClausiusClass::Reversible);
        }
    }
}
