//! Characteristics and jumps of normal derivatives.
//!
//! Across a surface `x = ct` moving through smooth flow the functions stay
//! continuous but their normal derivatives may jump. Writing the Euler
//! equations in `(ρ, u, s)` with `p = sρ^γ` and substituting the kinematic
//! compatibility relation `[∂f/∂t] = -c [∂f/∂x]` gives a homogeneous system
//! `M (Δρ, Δu, Δs) = 0`:
//!
//! ```text
//!     | u-c    ρ      0      |
//! M = | a²/ρ   u-c    p/(sρ) |
//!     | 0      0      u-c    |
//! ```
//!
//! with `det M = (u-c)((u-c)² - a²)`. Nontrivial jumps exist only on
//! trajectories (`c = u`) and sound characteristics (`c = u ± a`). On a
//! trajectory the velocity derivative is continuous and
//! `[∂a] = [∂s] a/(2γs)`; on a sound characteristic the entropy derivative
//! is continuous and `[∂u] = ±[∂a] 2/(γ-1)`.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::euler1d::PrimState;
use crate::stencil;
use crate::thermo::GasParams;

/// Relative determinant threshold, scaled by `(|u| + a)³`.
pub const DET_TOLERANCE: f64 = 1e-9;

/// Speeds of the three characteristic families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharSpeeds {
    /// `u + a`
    pub plus: f64,
    /// `u`, the particle trajectory.
    pub zero: f64,
    /// `u - a`
    pub minus: f64,
}

pub fn char_speeds(state: &PrimState, params: &GasParams) -> CharSpeeds {
    let a = state.sound_speed(params);
    CharSpeeds {
        plus: state.u + a,
        zero: state.u,
        minus: state.u - a,
    }
}

/// The break system at one state for a surface moving with speed `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyMatrix {
    matrix: Matrix3<f64>,
    state: PrimState,
    speed: f64,
    gamma: f64,
}

impl ConsistencyMatrix {
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Determinant by cofactor expansion of the assembled matrix.
    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Closed form `(u-c)((u-c)² - a²)`.
    pub fn determinant_closed_form(&self) -> f64 {
        let w = self.state.u - self.speed;
        let a2 = self.gamma * self.state.p / self.state.rho;
        w * (w * w - a2)
    }

    /// `(|u| + a)³`, the scale of the determinant.
    pub fn scale(&self) -> f64 {
        let a = (self.gamma * self.state.p / self.state.rho).sqrt();
        (self.state.u.abs() + a).powi(3)
    }
}

pub fn consistency_matrix(state: &PrimState, c: f64, params: &GasParams) -> ConsistencyMatrix {
    let PrimState { rho, u, p } = *state;
    let a2 = params.gamma() * p / rho;
    let s = state.entropy(params);
    let w = u - c;
    #[rustfmt::skip]
    let matrix = Matrix3::new(
        w,        rho, 0.0,
        a2 / rho, w,   p / (s * rho),
        0.0,      0.0, w,
    );
    ConsistencyMatrix {
        matrix,
        state: *state,
        speed: c,
        gamma: params.gamma(),
    }
}

/// Unit jump vector `(Δρ, Δu, Δs)` with the implied sound-speed jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakVector {
    pub d_rho: f64,
    pub d_u: f64,
    pub d_s: f64,
    /// From `2a Δa = γ(γ-1) s ρ^(γ-2) Δρ + γ ρ^(γ-1) Δs`.
    pub d_a: f64,
}

impl BreakVector {
    /// `Δa / Δs`
    pub fn a_over_s(&self) -> f64 {
        self.d_a / self.d_s
    }

    /// `Δu / Δa`
    pub fn u_over_a(&self) -> f64 {
        self.d_u / self.d_a
    }

    /// `Δρ / Δs`
    pub fn rho_over_s(&self) -> f64 {
        self.d_rho / self.d_s
    }

    /// `Δρ / Δu`
    pub fn rho_over_u(&self) -> f64 {
        self.d_rho / self.d_u
    }

    /// Same direction with every jump multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            d_rho: k * self.d_rho,
            d_u: k * self.d_u,
            d_s: k * self.d_s,
            d_a: k * self.d_a,
        }
    }
}

/// Sound-speed jump implied by density and entropy jumps through `a² = γsρ^(γ-1)`.
pub fn sound_speed_jump(state: &PrimState, params: &GasParams, d_rho: f64, d_s: f64) -> f64 {
    let g = params.gamma();
    let rho = state.rho;
    let s = state.entropy(params);
    let a = state.sound_speed(params);
    (g * s * (g - 1.0) * rho.powf(g - 2.0) * d_rho + g * rho.powf(g - 1.0) * d_s) / (2.0 * a)
}

/// Nontrivial solution of the break system.
///
/// Fails with [`Error::NoBreakSurface`] unless
/// `|det M| <= tol · (|u| + a)³`. The null vector is the largest cross
/// product of two rows, normalised to unit length with its largest
/// component positive.
pub fn break_nullspace(m: &ConsistencyMatrix, params: &GasParams, tol: f64) -> Result<BreakVector> {
    let det = m.determinant();
    let bound = tol * m.scale();
    if det.abs() > bound {
        return Err(Error::NoBreakSurface {
            speed: m.speed,
            det,
            bound,
        });
    }
    let rows: [Vector3<f64>; 3] = [0, 1, 2].map(|k| m.matrix.row(k).transpose());
    let null = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| rows[i].cross(&rows[j]))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("three row pairs");
    let norm = null.norm();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("break system has rank below 2".into()));
    }
    let lead = null.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap();
    let v = null / (norm * lead.signum());
    Ok(BreakVector {
        d_rho: v[0],
        d_u: v[1],
        d_s: v[2],
        d_a: sound_speed_jump(&m.state, params, v[0], v[2]),
    })
}

/// `[∂a]/[∂s] = a/(2γs)` across a particle trajectory.
pub fn trajectory_break_relation(state: &PrimState, params: &GasParams) -> f64 {
    state.sound_speed(params) / (2.0 * params.gamma() * state.entropy(params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `C+`, speed `u + a`.
    Plus,
    /// `C-`, speed `u - a`.
    Minus,
}

/// `[∂u]/[∂a] = ±2/(γ-1)` across a sound characteristic of the given family.
pub fn characteristic_break_relation(params: &GasParams, family: Family) -> f64 {
    let r = 2.0 / (params.gamma() - 1.0);
    match family {
        Family::Plus => r,
        Family::Minus => -r,
    }
}

/// First crossing of `C+` characteristics of a right-running simple wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockFormation {
    pub t_star: f64,
    pub x_star: f64,
}

/// Periodic velocity profile on a uniform grid `x_k = x0 + k·dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicProfile {
    pub x0: f64,
    pub length: f64,
    pub values: Vec<f64>,
}

impl PeriodicProfile {
    pub fn from_fn(x0: f64, length: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let dx = length / n as f64;
        Self {
            x0,
            length,
            values: (0..n).map(|k| f(x0 + k as f64 * dx)).collect(),
        }
    }

    pub fn dx(&self) -> f64 {
        self.length / self.values.len() as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx()
    }
}

/// Sound speed of the right-running simple wave through `background`:
/// the `C-` Riemann invariant `u - 2a/(γ-1)` is uniform.
pub fn simple_wave_sound_speed(u: f64, background: &PrimState, params: &GasParams) -> f64 {
    background.sound_speed(params) + 0.5 * (params.gamma() - 1.0) * (u - background.u)
}

/// Breaking time of a right-running simple wave with initial velocity
/// `initial_u`, `t* = -1 / [((γ+1)/2) min u₀']`.
///
/// The slope is a Richardson combination of the centred differences over
/// one and two cells; where the two differ by more than 5% of the profile's
/// slope scale the profile is under-resolved and an error is returned.
/// Returns `None` for nowhere-compressive data.
pub fn shock_formation(
    initial_u: &PeriodicProfile,
    params: &GasParams,
    background: &PrimState,
) -> Result<Option<ShockFormation>> {
    let n = initial_u.values.len();
    if n < 8 {
        return Err(Error::NotSmooth(format!("{n} samples are too few to estimate slopes")));
    }
    let v = &initial_u.values;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NotSmooth("profile contains non-finite values".into()));
    }
    let dx = initial_u.dx();
    let d1 = stencil::derivative_periodic(v, dx);
    let d2: Vec<f64> = (0..n)
        .map(|i| (v[(i + 2) % n] - v[(i + n - 2) % n]) / (4.0 * dx))
        .collect();
    let scale = d1.iter().map(|d| d.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(None);
    }
    if let Some(k) = (0..n).find(|&k| (d1[k] - d2[k]).abs() > 0.05 * scale) {
        return Err(Error::NotSmooth(format!(
            "slope estimates disagree at x = {} ({} vs {})",
            initial_u.x(k),
            d1[k],
            d2[k]
        )));
    }
    let slope: Vec<f64> = d1.iter().zip(&d2).map(|(a, b)| (4.0 * a - b) / 3.0).collect();
    let (k_min, min_slope) = slope
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty profile");
    if min_slope >= 0.0 {
        return Ok(None);
    }
    let t_star = -1.0 / (0.5 * (params.gamma() + 1.0) * min_slope);
    let x = initial_u.x(k_min);
    let u0 = v[k_min];
    let speed = u0 + simple_wave_sound_speed(u0, background, params);
    let x_star = initial_u.x0 + (x + speed * t_star - initial_u.x0).rem_euclid(initial_u.length);
    Ok(Some(ShockFormation { t_star, x_star }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn air() -> GasParams {
        GasParams::default()
    }

    fn st(rho: f64, u: f64, p: f64) -> PrimState {
        PrimState::new(rho, u, p).unwrap()
    }

    #[test]
    fn char_speed_examples() {
        let c = char_speeds(&st(1.0, 0.0, 1.0), &air());
        assert!((c.plus - 1.18322).abs() < 1e-5 && c.zero == 0.0 && c.plus == -c.minus);
        let c = char_speeds(&st(1.4, 1.0, 1.0), &air());
        assert!((c.plus - 2.0).abs() < 1e-15 && c.zero == 1.0 && c.minus.abs() < 1e-15);
    }

    #[test]
    fn consistency_matrix_at_rest() {
        let m = consistency_matrix(&st(1.0, 0.0, 1.0), 0.0, &air());
        let expected = Matrix3::new(0.0, 1.0, 0.0, 1.4, 0.0, 1.0, 0.0, 0.0, 0.0);
        assert!((m.matrix() - expected).abs().max() < 1e-15);

        let a = 1.4f64.sqrt();
        let m = consistency_matrix(&st(1.0, 0.0, 1.0), 0.5 * a, &air());
        assert!((m.determinant() - 0.375 * a.powi(3)).abs() < 1e-12);
        assert!((m.determinant() - 0.62118).abs() < 1e-5);
    }

    #[test]
    fn nullspace_examples() {
        let s = st(1.0, 0.0, 1.0);
        let g = air();
        let traj = break_nullspace(&consistency_matrix(&s, 0.0, &g), &g, DET_TOLERANCE).unwrap();
        assert_eq!(traj.d_u, 0.0);
        assert!((traj.rho_over_s() + 1.0 / 1.4).abs() < 1e-14);
        let unit = traj.d_rho.powi(2) + traj.d_u.powi(2) + traj.d_s.powi(2);
        assert!((unit - 1.0).abs() < 1e-14);

        let a = s.sound_speed(&g);
        let plus = break_nullspace(&consistency_matrix(&s, a, &g), &g, DET_TOLERANCE).unwrap();
        assert!(plus.d_s.abs() < 1e-14);
        assert!((plus.rho_over_u() - 0.84515).abs() < 1e-5);
        assert!((plus.u_over_a() - 5.0).abs() < 1e-12);

        let off = break_nullspace(&consistency_matrix(&s, 0.5 * a, &g), &g, DET_TOLERANCE);
        assert!(matches!(off, Err(Error::NoBreakSurface { .. })));
    }

    #[test]
    fn break_relation_examples() {
        let g = air();
        let s = st(1.0, 0.0, 1.0);
        let ratio = trajectory_break_relation(&s, &g);
        assert!((ratio - 0.42258).abs() < 1e-5);
        let null = break_nullspace(&consistency_matrix(&s, s.u, &g), &g, DET_TOLERANCE).unwrap();
        assert!((null.a_over_s() - ratio).abs() < 1e-10);
        let squeezed = st(1.0, 0.0, 4.0);
        assert!((trajectory_break_relation(&squeezed, &g) - 0.5 * ratio).abs() < 1e-14);

        assert!((characteristic_break_relation(&g, Family::Plus) - 5.0).abs() < 1e-14);
        assert!((characteristic_break_relation(&g, Family::Minus) + 5.0).abs() < 1e-14);
        let mono = GasParams::new(5.0 / 3.0, 1.0).unwrap();
        assert!((characteristic_break_relation(&mono, Family::Plus) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn shock_formation_examples() {
        let g = air();
        let bg = st(1.0, 0.0, 1.0);
        let eps = 0.1;
        let profile = PeriodicProfile::from_fn(0.0, 1.0, 512, |x| -eps * (2.0 * std::f64::consts::PI * x).sin());
        let f = shock_formation(&profile, &g, &bg).unwrap().unwrap();
        let expected = 1.0 / (2.4 * std::f64::consts::PI * eps);
        assert!((f.t_star - expected).abs() < 1e-6 * expected);
        assert!((f.t_star - 1.3263).abs() < 1e-4);
        // Steepest point x = 0 moves at a0 (u0 = 0 there).
        let x_expected = (bg.sound_speed(&g) * expected).rem_euclid(1.0);
        assert!((f.x_star - x_expected).abs() < 1e-6);

        let flat = PeriodicProfile::from_fn(0.0, 1.0, 64, |_| 0.0);
        assert_eq!(shock_formation(&flat, &g, &bg).unwrap(), None);

        let step = PeriodicProfile::from_fn(0.0, 1.0, 64, |x| if x < 0.5 { 0.1 } else { 0.0 });
        assert!(matches!(shock_formation(&step, &g, &bg), Err(Error::NotSmooth(_))));
    }

    proptest! {
        #[test]
        fn determinant_identity(rho in 0.1..10.0f64, u in -5.0..5.0f64, p in 0.1..10.0f64, c in -8.0..8.0f64) {
            let m = consistency_matrix(&st(rho, u, p), c, &air());
            let (det, closed) = (m.determinant(), m.determinant_closed_form());
            prop_assert!((det - closed).abs() <= 1e-12 * closed.abs().max(m.scale()));
        }

        #[test]
        fn ratios_do_not_depend_on_null_vector_scale(rho in 0.1..10.0f64, u in -5.0..5.0f64, p in 0.1..10.0f64, k in -50.0..50.0f64) {
            prop_assume!(k.abs() > 1e-3);
            let g = air();
            let s = st(rho, u, p);
            let v = break_nullspace(&consistency_matrix(&s, u, &g), &g, DET_TOLERANCE).unwrap();
            let w = v.scaled(k);
            prop_assert!((v.a_over_s() - w.a_over_s()).abs() <= 1e-12 * v.a_over_s().abs());
            prop_assert!((v.rho_over_s() - w.rho_over_s()).abs() <= 1e-12 * v.rho_over_s().abs());
        }
    }
}
