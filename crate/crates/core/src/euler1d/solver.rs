use super::{exact_riemann, Boundary, ConsState, Mesh, PrimState, RiemannFan};
use crate::error::{Error, Result};
use crate::thermo::GasParams;

/// Largest Courant number accepted by [`step`].
pub const CFL_LIMIT: f64 = 0.9;

/// Relative pressure jump between neighbouring cells above which an
/// interface is a shock candidate.
const SHOCK_PRESSURE_JUMP: f64 = 0.05;

/// Cells on either side of a particle that count as "near" a flagged shock.
const SHOCK_NEIGHBOURHOOD: usize = 2;

fn max_signal_speed(slice: &[PrimState], params: &GasParams) -> f64 {
    slice
        .iter()
        .map(|w| w.u.abs() + w.sound_speed(params))
        .fold(0.0, f64::max)
}

/// Time step giving Courant number `cfl` on `slice`.
pub fn stable_dt(slice: &[PrimState], mesh: &Mesh, params: &GasParams, cfl: f64) -> f64 {
    cfl * mesh.dx() / max_signal_speed(slice, params)
}

fn godunov_flux(left: PrimState, right: PrimState, params: &GasParams) -> Result<[f64; 3]> {
    Ok(exact_riemann(left, right, params)?.sample(0.0).flux(params))
}

/// Interface fluxes `F_{i-1/2}` for `i = 0..=n`.
fn interface_fluxes(slice: &[PrimState], mesh: &Mesh, params: &GasParams) -> Result<Vec<[f64; 3]>> {
    let n = slice.len();
    (0..=n)
        .map(|i| {
            let (l, r) = match mesh.boundary {
                Boundary::Periodic => (slice[(i + n - 1) % n], slice[i % n]),
                Boundary::Transmissive => (slice[i.saturating_sub(1)], slice[i.min(n - 1)]),
            };
            godunov_flux(l, r, params)
        })
        .collect()
}

fn advance(cons: &mut [ConsState], prims: &[PrimState], mesh: &Mesh, dt: f64, params: &GasParams) -> Result<()> {
    let fluxes = interface_fluxes(prims, mesh, params)?;
    let ratio = dt / mesh.dx();
    for (i, u) in cons.iter_mut().enumerate() {
        let (fl, fr) = (fluxes[i], fluxes[i + 1]);
        u.rho -= ratio * (fr[0] - fl[0]);
        u.mom -= ratio * (fr[1] - fl[1]);
        u.energy -= ratio * (fr[2] - fl[2]);
    }
    Ok(())
}

fn check_cfl(slice: &[PrimState], mesh: &Mesh, dt: f64, params: &GasParams) -> Result<()> {
    let cfl = dt * max_signal_speed(slice, params) / mesh.dx();
    if !(dt > 0.0) || cfl > CFL_LIMIT * (1.0 + 1e-12) {
        return Err(Error::CflViolation { cfl, limit: CFL_LIMIT });
    }
    Ok(())
}

fn to_prims(cons: &[ConsState], params: &GasParams, time: f64) -> Result<Vec<PrimState>> {
    cons.iter()
        .enumerate()
        .map(|(cell, u)| u.to_prim(params).ok_or(Error::PositivityLoss { cell, time }))
        .collect()
}

/// One conservative Godunov update with exact-Riemann interface fluxes.
pub fn step(slice: &[PrimState], mesh: &Mesh, dt: f64, params: &GasParams) -> Result<Vec<PrimState>> {
    if slice.len() != mesh.cells {
        return Err(Error::InvalidInput(format!(
            "slice has {} cells, mesh has {}",
            slice.len(),
            mesh.cells
        )));
    }
    check_cfl(slice, mesh, dt, params)?;
    let mut cons: Vec<ConsState> = slice.iter().map(|w| w.to_cons(params)).collect();
    advance(&mut cons, slice, mesh, dt, params)?;
    to_prims(&cons, params, dt)
}

/// Sums of mass, momentum and energy over the slice (times `dx`).
pub fn conserved_totals(slice: &[PrimState], mesh: &Mesh, params: &GasParams) -> [f64; 3] {
    slice.iter().fold([0.0; 3], |acc, w| {
        let u = w.to_cons(params);
        [
            acc[0] + u.rho * mesh.dx(),
            acc[1] + u.mom * mesh.dx(),
            acc[2] + u.energy * mesh.dx(),
        ]
    })
}

/// Cells adjacent to a shock candidate: the relative pressure jump across the
/// interface exceeds 5% and characteristics of one acoustic family converge.
pub fn shock_flags(slice: &[PrimState], mesh: &Mesh, params: &GasParams) -> Vec<bool> {
    let n = slice.len();
    let mut flags = vec![false; n];
    let interfaces = match mesh.boundary {
        Boundary::Periodic => n,
        Boundary::Transmissive => n - 1,
    };
    for i in 0..interfaces {
        let j = (i + 1) % n;
        let (l, r) = (slice[i], slice[j]);
        let jump = (r.p - l.p).abs() / l.p.min(r.p);
        let (al, ar) = (l.sound_speed(params), r.sound_speed(params));
        let converging = l.u + al > r.u + ar || l.u - al > r.u - ar;
        if jump > SHOCK_PRESSURE_JUMP && converging {
            flags[i] = true;
            flags[j] = true;
        }
    }
    flags
}

/// Gas-dynamic entropy `p/ρ^γ` of every cell.
pub fn entropy_field(slice: &[PrimState], params: &GasParams) -> Vec<f64> {
    slice.iter().map(|w| w.entropy(params)).collect()
}

/// Cell-averaged L1 density error against the exact Riemann solution with
/// the discontinuity initially at `x0`.
pub fn l1_density_error(slice: &[PrimState], mesh: &Mesh, fan: &RiemannFan, x0: f64, t: f64) -> f64 {
    slice
        .iter()
        .enumerate()
        .map(|(i, w)| (w.rho - fan.sample((mesh.center(i) - x0) / t).rho).abs() * mesh.dx())
        .sum()
}

/// Scenario to advance with [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mesh: Mesh,
    pub params: GasParams,
    pub initial: Vec<PrimState>,
    pub cfl: f64,
    pub t_end: f64,
    /// Times at which slices are recorded; `0` and `t_end` are always added.
    pub output_times: Vec<f64>,
    /// Initial positions of traced particles.
    pub seeds: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub x: f64,
    pub state: PrimState,
    /// Within two cells of a flagged shock.
    pub near_shock: bool,
}

/// A particle path `x(t)` with the flow state sampled along it every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub seed: f64,
    pub points: Vec<TrajectoryPoint>,
    /// The particle left a transmissive domain; the path is truncated.
    pub exited: bool,
}

/// Slices at the recorded times and traced trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution1D {
    pub mesh: Mesh,
    pub params: GasParams,
    pub times: Vec<f64>,
    pub slices: Vec<Vec<PrimState>>,
    pub trajectories: Vec<Trajectory>,
    /// Largest Courant number actually used.
    pub max_cfl: f64,
    pub steps: usize,
}

impl Solution1D {
    pub fn x(&self) -> Vec<f64> {
        self.mesh.centers()
    }

    pub fn final_slice(&self) -> &[PrimState] {
        &self.slices[self.slices.len() - 1]
    }

    pub fn trajectory(&self, seed: f64) -> Option<&Trajectory> {
        self.trajectories
            .iter()
            .find(|tr| (tr.seed - seed).abs() <= 1e-12 * (1.0 + seed.abs()))
    }
}

fn sample_state(mesh: &Mesh, rho: &[f64], u: &[f64], p: &[f64], x: f64) -> PrimState {
    PrimState {
        rho: mesh.interpolate(rho, x),
        u: mesh.interpolate(u, x),
        p: mesh.interpolate(p, x),
    }
}

fn columns(slice: &[PrimState]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    (
        slice.iter().map(|w| w.rho).collect(),
        slice.iter().map(|w| w.u).collect(),
        slice.iter().map(|w| w.p).collect(),
    )
}

fn near_flag(mesh: &Mesh, flags: &[bool], x: f64) -> bool {
    let n = mesh.cells as i64;
    let c = mesh.cell_of(x) as i64;
    let r = SHOCK_NEIGHBOURHOOD as i64;
    (c - r..=c + r).any(|k| match mesh.boundary {
        Boundary::Periodic => flags[k.rem_euclid(n) as usize],
        Boundary::Transmissive => (0..n).contains(&k) && flags[k as usize],
    })
}

/// Advances the scenario to `t_end`.
///
/// The time step is the CFL step clipped to land on every output time.
/// Trajectories follow `dx/dt = u` with the midpoint rule, the velocity being
/// interpolated linearly in space and averaged between time levels.
pub fn run(config: &RunConfig) -> Result<Solution1D> {
    let RunConfig {
        mesh,
        params,
        cfl,
        t_end,
        ..
    } = *config;
    if config.initial.len() != mesh.cells {
        return Err(Error::InvalidInput(format!(
            "initial data has {} cells, mesh has {}",
            config.initial.len(),
            mesh.cells
        )));
    }
    if !(cfl > 0.0 && cfl <= CFL_LIMIT) {
        return Err(Error::CflViolation { cfl, limit: CFL_LIMIT });
    }
    if !(t_end > 0.0) {
        return Err(Error::InvalidInput(format!("t_end = {t_end} must be positive")));
    }
    for w in &config.initial {
        PrimState::new(w.rho, w.u, w.p)?;
    }
    let mut outputs: Vec<f64> = config
        .output_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t < t_end)
        .chain([t_end])
        .collect();
    outputs.sort_by(f64::total_cmp);
    outputs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * t_end);

    let mut prims = config.initial.clone();
    let mut cons: Vec<ConsState> = prims.iter().map(|w| w.to_cons(&params)).collect();
    let mut times = vec![0.0];
    let mut slices = vec![prims.clone()];

    let (rho, u, p) = columns(&prims);
    let flags = shock_flags(&prims, &mesh, &params);
    let mut trajectories: Vec<Trajectory> = config
        .seeds
        .iter()
        .map(|&seed| {
            let x = mesh.wrap(seed);
            Trajectory {
                seed,
                points: vec![TrajectoryPoint {
                    t: 0.0,
                    x,
                    state: sample_state(&mesh, &rho, &u, &p, x),
                    near_shock: near_flag(&mesh, &flags, x),
                }],
                exited: !mesh.contains(seed),
            }
        })
        .collect();

    let mut t = 0.0;
    let mut max_cfl: f64 = 0.0;
    let mut steps = 0;
    let mut next_output = 0;
    while next_output < outputs.len() {
        let target = outputs[next_output];
        let mut dt = stable_dt(&prims, &mesh, &params, cfl);
        let lands = t + dt >= target * (1.0 - 1e-14);
        if lands {
            dt = target - t;
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidInput(format!("nonpositive time step at t = {t}")));
        }
        check_cfl(&prims, &mesh, dt, &params)?;
        max_cfl = max_cfl.max(dt * max_signal_speed(&prims, &params) / mesh.dx());

        let u_old: Vec<f64> = prims.iter().map(|w| w.u).collect();
        advance(&mut cons, &prims, &mesh, dt, &params)?;
        let t_new = if lands { target } else { t + dt };
        prims = to_prims(&cons, &params, t_new)?;
        steps += 1;

        let (rho, u, p) = columns(&prims);
        let flags = shock_flags(&prims, &mesh, &params);
        for tr in trajectories.iter_mut().filter(|tr| !tr.exited) {
            let x0 = tr.points[tr.points.len() - 1].x;
            let half = x0 + 0.5 * dt * mesh.interpolate(&u_old, x0);
            let u_mid = 0.5 * (mesh.interpolate(&u_old, half) + mesh.interpolate(&u, half));
            let x1 = x0 + dt * u_mid;
            if !mesh.contains(x1) {
                tr.exited = true;
                continue;
            }
            let x1 = mesh.wrap(x1);
            tr.points.push(TrajectoryPoint {
                t: t_new,
                x: x1,
                state: sample_state(&mesh, &rho, &u, &p, x1),
                near_shock: near_flag(&mesh, &flags, x1),
            });
        }

        t = t_new;
        if lands {
            times.push(t);
            slices.push(prims.clone());
            next_output += 1;
        }
    }

    Ok(Solution1D {
        mesh,
        params,
        times,
        slices,
        trajectories,
        max_cfl,
        steps,
    })
}

/// Entropy values around a shock crossing along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyJump {
    pub t_enter: f64,
    pub t_exit: f64,
    pub s_before: f64,
    pub s_after: f64,
}

/// Gas-dynamic entropy sampled along one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySeries {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub jumps: Vec<EntropyJump>,
    /// The trajectory left the domain before the final time.
    pub truncated: bool,
}

impl EntropySeries {
    /// `max |s(t) - s(0)|`.
    pub fn max_drift(&self) -> f64 {
        self.s.iter().map(|s| (s - self.s[0]).abs()).fold(0.0, f64::max)
    }
}

const MERGE_GAP: usize = 4;

/// Entropy history of the particle seeded at `seed`. Passages through the
/// neighbourhood of a flagged shock are reported as jumps.
pub fn entropy_along_trajectory(solution: &Solution1D, seed: f64) -> Result<EntropySeries> {
    let tr = solution
        .trajectory(seed)
        .ok_or_else(|| Error::InvalidInput(format!("no trajectory was traced from x = {seed}")))?;
    let params = &solution.params;
    let t: Vec<f64> = tr.points.iter().map(|p| p.t).collect();
    let s: Vec<f64> = tr.points.iter().map(|p| p.state.entropy(params)).collect();

    let mut jumps: Vec<EntropyJump> = Vec::new();
    let mut last_exit: Option<usize> = None;
    let mut k = 0;
    while k < tr.points.len() {
        if !tr.points[k].near_shock {
            k += 1;
            continue;
        }
        let start = k;
        while k < tr.points.len() && tr.points[k].near_shock {
            k += 1;
        }
        if start == 0 || k == tr.points.len() {
            continue;
        }
        // The flag flickers while a smeared shock sweeps past; close gaps.
        let merge = last_exit.is_some_and(|e| start - e <= MERGE_GAP);
        last_exit = Some(k);
        if merge {
            if let Some(prev) = jumps.last_mut() {
                prev.t_exit = t[k];
                prev.s_after = s[k];
                continue;
            }
        }
        {
            jumps.push(EntropyJump {
                t_enter: t[start],
                t_exit: t[k],
                s_before: s[start - 1],
                s_after: s[k],
            });
        }
    }
    Ok(EntropySeries {
        t,
        s,
        jumps,
        truncated: tr.exited,
    })
}
