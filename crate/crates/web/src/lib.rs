//! Browser bindings for three demo operations: Riemann profiles, simple-wave
//! steepening and heat-form commutator maps.

use evoflow::characteristics::{shock_formation, PeriodicProfile};
use evoflow::diagnostics::{transition_detector, DetectorConfig};
use evoflow::euler1d::{exact_riemann, run, Boundary, Mesh, PrimState, RunConfig};
use evoflow::thermo::{heat_form_commutator_field, StateRegion};
use evoflow::GasParams;
use wasm_bindgen::prelude::*;

/// Godunov and exact Riemann profiles at one time.
#[wasm_bindgen]
pub struct RiemannProfile {
    x: Vec<f64>,
    rho: Vec<f64>,
    u: Vec<f64>,
    p: Vec<f64>,
    rho_exact: Vec<f64>,
    u_exact: Vec<f64>,
    p_exact: Vec<f64>,
    l1_rho: f64,
    pstar: f64,
    ustar: f64,
}

#[wasm_bindgen]
impl RiemannProfile {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn rho(&self) -> Vec<f64> {
        self.rho.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn p(&self) -> Vec<f64> {
        self.p.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn rho_exact(&self) -> Vec<f64> {
        self.rho_exact.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn u_exact(&self) -> Vec<f64> {
        self.u_exact.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn p_exact(&self) -> Vec<f64> {
        self.p_exact.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn l1_rho(&self) -> f64 {
        self.l1_rho
    }
    #[wasm_bindgen(getter)]
    pub fn pstar(&self) -> f64 {
        self.pstar
    }
    #[wasm_bindgen(getter)]
    pub fn ustar(&self) -> f64 {
        self.ustar
    }
}

/// Simple-wave velocity snapshots, breaking time and detector events.
#[wasm_bindgen]
pub struct SteepeningRun {
    x: Vec<f64>,
    times: Vec<f64>,
    /// Velocity snapshots, one row of `x.len()` values per time.
    u: Vec<f64>,
    t_star: f64,
    event_t: Vec<f64>,
    event_x: Vec<f64>,
}

#[wasm_bindgen]
impl SteepeningRun {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn t_star(&self) -> f64 {
        self.t_star
    }
    #[wasm_bindgen(getter)]
    pub fn event_t(&self) -> Vec<f64> {
        self.event_t.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn event_x(&self) -> Vec<f64> {
        self.event_x.clone()
    }
}

/// Row-major `n × n` commutator of the heat form over a `(T, V)` rectangle.
#[wasm_bindgen]
pub struct CommutatorMap {
    n: usize,
    values: Vec<f64>,
    max_abs: f64,
}

#[wasm_bindgen]
impl CommutatorMap {
    #[wasm_bindgen(getter)]
    pub fn n(&self) -> usize {
        self.n
    }
    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }
}

fn js(e: evoflow::Error) -> JsError {
    JsError::new(&e.to_string())
}

pub fn riemann_profile_impl(
    left: (f64, f64, f64),
    right: (f64, f64, f64),
    gamma: f64,
    cells: usize,
    t_end: f64,
) -> evoflow::Result<RiemannProfile> {
    let params = GasParams::new(gamma, 1.0)?;
    let l = PrimState::new(left.0, left.1, left.2)?;
    let r = PrimState::new(right.0, right.1, right.2)?;
    let fan = exact_riemann(l, r, &params)?;
    let mesh = Mesh::new(0.0, 1.0, cells, Boundary::Transmissive)?;
    let sol = run(&RunConfig {
        mesh,
        params,
        initial: mesh.centers().iter().map(|&x| if x < 0.5 { l } else { r }).collect(),
        cfl: 0.8,
        t_end,
        output_times: vec![t_end],
        seeds: Vec::new(),
    })?;
    let x = mesh.centers();
    let exact: Vec<PrimState> = x.iter().map(|&xi| fan.sample((xi - 0.5) / t_end)).collect();
    let last = sol.final_slice();
    let l1_rho = last.iter().zip(&exact).map(|(a, b)| (a.rho - b.rho).abs() * mesh.dx()).sum();
    Ok(RiemannProfile {
        x,
        rho: last.iter().map(|w| w.rho).collect(),
        u: last.iter().map(|w| w.u).collect(),
        p: last.iter().map(|w| w.p).collect(),
        rho_exact: exact.iter().map(|w| w.rho).collect(),
        u_exact: exact.iter().map(|w| w.u).collect(),
        p_exact: exact.iter().map(|w| w.p).collect(),
        l1_rho,
        pstar: fan.pstar,
        ustar: fan.ustar,
    })
}

/// Shock tube on `[0, 1]` with the diaphragm at `x = 0.5` and `R = 1`.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn riemann_profile(
    rho_l: f64,
    u_l: f64,
    p_l: f64,
    rho_r: f64,
    u_r: f64,
    p_r: f64,
    gamma: f64,
    cells: usize,
    t_end: f64,
) -> Result<RiemannProfile, JsError> {
    riemann_profile_impl((rho_l, u_l, p_l), (rho_r, u_r, p_r), gamma, cells, t_end).map_err(js)
}

pub fn steepening_impl(eps: f64, cells: usize, t_end: f64, snapshots: usize) -> evoflow::Result<SteepeningRun> {
    let params = GasParams::default();
    let g = params.gamma();
    let background = PrimState::new(1.0, 0.0, 1.0)?;
    let a0 = background.sound_speed(&params);
    let u0 = |x: f64| -eps * (2.0 * std::f64::consts::PI * x).sin();
    let t_star = shock_formation(&PeriodicProfile::from_fn(0.0, 1.0, 512, u0), &params, &background)?
        .map(|f| f.t_star)
        .unwrap_or(f64::INFINITY);
    let mesh = Mesh::new(0.0, 1.0, cells, Boundary::Periodic)?;
    let initial = mesh
        .centers()
        .into_iter()
        .map(|x| {
            let u = u0(x);
            let a = a0 + 0.5 * (g - 1.0) * u;
            let rho = (a * a / g).powf(1.0 / (g - 1.0));
            PrimState::new(rho, u, rho.powf(g))
        })
        .collect::<evoflow::Result<Vec<_>>>()?;
    let recorded = 200;
    let sol = run(&RunConfig {
        mesh,
        params,
        initial,
        cfl: 0.8,
        t_end,
        output_times: (0..=recorded).map(|k| t_end * k as f64 / recorded as f64).collect(),
        seeds: Vec::new(),
    })?;
    let events = transition_detector(&sol, &DetectorConfig::default())?;
    let snapshots = snapshots.clamp(2, recorded + 1);
    let rows: Vec<usize> = (0..snapshots).map(|k| k * (sol.times.len() - 1) / (snapshots - 1)).collect();
    Ok(SteepeningRun {
        x: mesh.centers(),
        times: rows.iter().map(|&n| sol.times[n]).collect(),
        u: rows.iter().flat_map(|&n| sol.slices[n].iter().map(|w| w.u)).collect(),
        t_star,
        event_t: events.iter().map(|e| e.t).collect(),
        event_x: events.iter().map(|e| e.x).collect(),
    })
}

/// Periodic simple wave `u₀ = -ε sin 2πx` over gas with `ρ = p = 1`.
#[wasm_bindgen]
pub fn steepening(eps: f64, cells: usize, t_end: f64, snapshots: usize) -> Result<SteepeningRun, JsError> {
    steepening_impl(eps, cells, t_end, snapshots).map_err(js)
}

pub fn heat_commutator_impl(
    gamma: f64,
    t_range: (f64, f64),
    v_range: (f64, f64),
    n: usize,
    divide_by_t: bool,
) -> evoflow::Result<CommutatorMap> {
    let params = GasParams::new(gamma, 1.0)?;
    let region = StateRegion::new(t_range.0, t_range.1, v_range.0, v_range.1)?;
    let k = heat_form_commutator_field(&params, &region, n, divide_by_t)?;
    Ok(CommutatorMap {
        n,
        values: k.values().iter().copied().collect(),
        max_abs: k.max_abs(),
    })
}

/// Commutator of `δQ` (or `δQ/T`) with `T` along rows and `V` along columns.
#[wasm_bindgen]
pub fn heat_commutator(
    gamma: f64,
    t_min: f64,
    t_max: f64,
    v_min: f64,
    v_max: f64,
    n: usize,
    divide_by_t: bool,
) -> Result<CommutatorMap, JsError> {
    heat_commutator_impl(gamma, (t_min, t_max), (v_min, v_max), n, divide_by_t).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sod_profile_tracks_the_exact_fan() {
        let p = riemann_profile_impl((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 1.4, 200, 0.2).unwrap();
        assert_eq!(p.x().len(), 200);
        assert!(p.l1_rho() < 2e-2, "{}", p.l1_rho());
        assert!((p.pstar() - 0.30313).abs() < 1e-5);
        assert!(riemann_profile_impl((1.0, -10.0, 1.0), (1.0, 10.0, 1.0), 1.4, 50, 0.1).is_err());
    }

    #[test]
    fn steepening_reports_breaking_and_events() {
        let s = steepening_impl(0.3, 200, 0.6, 4).unwrap();
        assert!((s.t_star() - 0.44210).abs() < 1e-4);
        assert_eq!(s.times().len(), 4);
        assert_eq!(s.u().len(), 4 * 200);
        assert!(s.event_t().iter().all(|&t| t > 0.3 * s.t_star()));
    }

    #[test]
    fn integrating_factor_closes_the_heat_form() {
        let open = heat_commutator_impl(1.4, (1.0, 2.0), (1.0, 2.0), 21, false).unwrap();
        let closed = heat_commutator_impl(1.4, (1.0, 2.0), (1.0, 2.0), 21, true).unwrap();
        assert_eq!(open.values().len(), 21 * 21);
        // K = R/V on the open form.
        assert!((open.max_abs() - 1.0 / 1.05).abs() < 1e-2);
        assert!(closed.max_abs() < 1e-12);
    }
}
