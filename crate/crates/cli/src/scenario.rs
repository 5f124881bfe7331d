use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use evoflow::characteristics::{shock_formation, trajectory_break_relation, PeriodicProfile};
use evoflow::diagnostics::{
    classify, evolutionary_commutator, source_breakdown, transition_detector, DetectorConfig, EvolutionaryForm,
    FlowFields, NoiseFloor, TransitionEvent,
};
use evoflow::euler1d::{
    conserved_totals, entropy_along_trajectory, exact_riemann, l1_density_error, run, Boundary, Mesh, PrimState,
    RunConfig, Solution1D,
};
use evoflow::thermo::{clausius, first_law_residual, ClausiusClass, ThermoPath};
use evoflow::GasParams;
use thiserror::Error;

use crate::config::{ScenarioConfig, ScenarioName};

/// Recorded times used by the diagnostics, on top of the requested outputs.
const DIAGNOSTIC_SLICES: usize = 300;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("scenario {scenario}: {source}")]
    Numerical {
        scenario: ScenarioName,
        #[source]
        source: evoflow::Error,
    },
    #[error("scenario {scenario}: cannot write {}: {source}", path.display())]
    Io {
        scenario: ScenarioName,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// One acceptance check of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Summary of a run. `to_text` writes the fields in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario: ScenarioName,
    pub cells: usize,
    pub steps: usize,
    pub max_cfl: f64,
    /// Final minus initial totals of mass, momentum and energy.
    pub conservation: Option<[f64; 3]>,
    /// Error norms against oracles and scenario measurements.
    pub metrics: Vec<(&'static str, f64)>,
    pub class: String,
    pub events: usize,
    pub checks: Vec<Check>,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario = {}", self.scenario);
        let _ = writeln!(s, "cells = {}", self.cells);
        let _ = writeln!(s, "steps = {}", self.steps);
        let _ = writeln!(s, "max_cfl = {}", num(self.max_cfl));
        match self.conservation {
            Some([m, p, e]) => {
                let _ = writeln!(s, "mass_defect = {}", num(m));
                let _ = writeln!(s, "momentum_defect = {}", num(p));
                let _ = writeln!(s, "energy_defect = {}", num(e));
            }
            None => {
                for key in ["mass_defect", "momentum_defect", "energy_defect"] {
                    let _ = writeln!(s, "{key} = n/a");
                }
            }
        }
        for (key, v) in &self.metrics {
            let _ = writeln!(s, "{key} = {}", num(*v));
        }
        let _ = writeln!(s, "class = {}", self.class);
        let _ = writeln!(s, "events = {}", self.events);
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "check {} = {verdict} ({})", c.name, c.detail);
        }
        let _ = writeln!(s, "wall_time_s = {:.3}", self.wall_time.as_secs_f64());
        s
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

/// Header lines of the output files.
pub const SLICES_HEADER: &str = "t,x,rho,u,p,s,a";
pub const DIAGNOSTICS_HEADER: &str = "t,x,A1,Anu,K,src_nonstat,src_force,src_visc,src_heat,class";
pub const EVENTS_HEADER: &str = "t,x,window,K_before,K_after";

struct Diagnosed {
    solution: Solution1D,
    class: String,
    events: Vec<TransitionEvent>,
    max_k: f64,
    floor: NoiseFloor,
    a1_range: (f64, f64),
    slices_csv: String,
    diagnostics_csv: String,
}

struct Flow<'a> {
    config: &'a ScenarioConfig,
    params: GasParams,
    mesh: Mesh,
}

impl Flow<'_> {
    fn numerical(&self, source: evoflow::Error) -> RunError {
        RunError::Numerical {
            scenario: self.config.name,
            source,
        }
    }

    fn recorded_times(&self) -> Vec<f64> {
        let t_end = self.config.t_end;
        let mut times: Vec<f64> = (0..=DIAGNOSTIC_SLICES)
            .map(|k| t_end * k as f64 / DIAGNOSTIC_SLICES as f64)
            .chain(self.config.outputs.iter().copied())
            .collect();
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * t_end);
        times
    }

    fn solve(&self, mesh: Mesh, initial: impl Fn(f64) -> PrimState, times: Vec<f64>, seeds: Vec<f64>) -> Result<Solution1D, RunError> {
        run(&RunConfig {
            mesh,
            params: self.params,
            initial: mesh.centers().into_iter().map(initial).collect(),
            cfl: self.config.cfl,
            t_end: self.config.t_end,
            output_times: times,
            seeds,
        })
        .map_err(|e| self.numerical(e))
    }

    /// Solver run followed by the full diagnostics pipeline.
    fn diagnose(
        &self,
        initial: impl Fn(f64) -> PrimState,
        seeds: Vec<f64>,
        transport: impl Fn(FlowFields) -> FlowFields,
    ) -> Result<Diagnosed, RunError> {
        let times = self.recorded_times();
        let solution = self.solve(self.mesh, initial, times.clone(), seeds)?;
        let err = |e| self.numerical(e);
        let fields = transport(FlowFields::from_solution(&solution).map_err(err)?);
        let form = EvolutionaryForm::from_fields(&fields).map_err(err)?;
        let k = evolutionary_commutator(&form).map_err(err)?;
        let breakdown = source_breakdown(&fields);
        let a1 = breakdown.a1();
        let floor = NoiseFloor::calibrate(&self.mesh, self.params, self.config.cfl, &times).map_err(err)?;
        let class = classify(&breakdown, &a1, floor.threshold()).to_string();
        let events = transition_detector(&solution, &DetectorConfig::default()).map_err(err)?;

        let rows: Vec<usize> = self
            .config
            .outputs
            .iter()
            .map(|&t| {
                solution
                    .times
                    .iter()
                    .position(|&s| (s - t).abs() <= 1e-12 * self.config.t_end)
                    .expect("output times are recorded")
            })
            .collect();

        let mut slices_csv = format!("{SLICES_HEADER}\n");
        for &n in &rows {
            let t = solution.times[n];
            for (i, w) in solution.slices[n].iter().enumerate() {
                let _ = writeln!(
                    slices_csv,
                    "{},{},{},{},{},{},{}",
                    num(t),
                    num(self.mesh.center(i)),
                    num(w.rho),
                    num(w.u),
                    num(w.p),
                    num(w.entropy(&self.params)),
                    num(w.sound_speed(&self.params))
                );
            }
        }

        let frame = form.frame().expect("form traced from fields");
        let sampled = [
            &breakdown.nonstationary,
            &breakdown.nonpotential,
            &breakdown.viscous,
            &breakdown.heat,
        ]
        .map(|f| frame.sample(&fields, f));
        let mut diagnostics_csv = format!("{DIAGNOSTICS_HEADER}\n");
        for &n in &rows {
            for j in 0..frame.labels().len() {
                let _ = writeln!(
                    diagnostics_csv,
                    "{},{},{},{},{},{},{},{},{},{class}",
                    num(solution.times[n]),
                    num(self.mesh.wrap(frame.positions()[[n, j]])),
                    num(form.a1()[[n, j]]),
                    num(form.anu()[[n, j]]),
                    num(k.values()[[n, j]]),
                    num(sampled[0][[n, j]]),
                    num(sampled[1][[n, j]]),
                    num(sampled[2][[n, j]]),
                    num(sampled[3][[n, j]]),
                );
            }
        }

        Ok(Diagnosed {
            solution,
            class,
            events,
            max_k: k.max_abs(),
            floor,
            a1_range: (
                a1.iter().copied().fold(f64::INFINITY, f64::min),
                a1.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ),
            slices_csv,
            diagnostics_csv,
        })
    }

    fn report(&self, d: &Diagnosed, metrics: Vec<(&'static str, f64)>, checks: Vec<Check>) -> RunReport {
        let first = conserved_totals(&d.solution.slices[0], &self.mesh, &self.params);
        let last = conserved_totals(d.solution.final_slice(), &self.mesh, &self.params);
        RunReport {
            scenario: self.config.name,
            cells: self.mesh.cells,
            steps: d.solution.steps,
            max_cfl: d.solution.max_cfl,
            conservation: Some([last[0] - first[0], last[1] - first[1], last[2] - first[2]]),
            metrics,
            class: d.class.clone(),
            events: d.events.len(),
            checks,
            wall_time: Duration::ZERO,
        }
    }
}

fn state(rho: f64, u: f64, p: f64) -> Result<PrimState, evoflow::Error> {
    PrimState::new(rho, u, p)
}

fn events_csv(events: &[TransitionEvent]) -> String {
    let mut s = format!("{EVENTS_HEADER}\n");
    for e in events {
        let _ = writeln!(s, "{},{},{},{},{}", num(e.t), num(e.x), e.window, num(e.k_before), num(e.k_after));
    }
    s
}

fn write(scenario: ScenarioName, path: PathBuf, contents: &str) -> Result<(), RunError> {
    fs::write(&path, contents).map_err(|source| RunError::Io { scenario, path, source })
}

/// Runs the scenario and writes `slices.csv`, `diagnostics.csv`,
/// `events.csv` and `report.txt` into `out_dir` (created if missing).
/// The thermodynamic `carnot` scenario also writes `cycle.csv`; its flow
/// files hold only the header.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let name = config.name;
    fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
        scenario: name,
        path: out_dir.to_path_buf(),
        source,
    })?;
    let numerical = |source| RunError::Numerical { scenario: name, source };
    let params = GasParams::new(config.gamma, config.r).map_err(numerical)?;

    if name == ScenarioName::Carnot {
        let (report, cycle) = carnot(config, &params).map_err(numerical)?;
        write(name, out_dir.join("cycle.csv"), &cycle)?;
        write(name, out_dir.join("slices.csv"), &format!("{SLICES_HEADER}\n"))?;
        write(name, out_dir.join("diagnostics.csv"), &format!("{DIAGNOSTICS_HEADER}\n"))?;
        write(name, out_dir.join("events.csv"), &format!("{EVENTS_HEADER}\n"))?;
        return finish(report, start, out_dir);
    }

    let boundary = match name {
        ScenarioName::SimpleWave | ScenarioName::IsentropicAdvection => Boundary::Periodic,
        _ => Boundary::Transmissive,
    };
    let flow = Flow {
        config,
        params,
        mesh: Mesh::new(0.0, 1.0, config.n, boundary).map_err(numerical)?,
    };
    let (d, report) = match name {
        ScenarioName::Sod => sod(&flow)?,
        ScenarioName::SimpleWave => simple_wave(&flow)?,
        ScenarioName::IsentropicAdvection => isentropic_advection(&flow)?,
        ScenarioName::Uniform => uniform(&flow)?,
        ScenarioName::Impulsive => impulsive(&flow)?,
        ScenarioName::ShearLayer => shear_layer(&flow)?,
        ScenarioName::EntropyContact => entropy_contact(&flow)?,
        ScenarioName::Carnot => unreachable!("handled above"),
    };
    write(name, out_dir.join("slices.csv"), &d.slices_csv)?;
    write(name, out_dir.join("diagnostics.csv"), &d.diagnostics_csv)?;
    write(name, out_dir.join("events.csv"), &events_csv(&d.events))?;
    finish(report, start, out_dir)
}

fn finish(mut report: RunReport, start: Instant, out_dir: &Path) -> Result<RunReport, RunError> {
    report.wall_time = start.elapsed();
    write(report.scenario, out_dir.join("report.txt"), &report.to_text())?;
    Ok(report)
}

type Outcome = Result<(Diagnosed, RunReport), RunError>;

fn sod(flow: &Flow) -> Outcome {
    let c = flow.config;
    let err = |e| flow.numerical(e);
    let left = state(c.extra("rho_l", 1.0), c.extra("u_l", 0.0), c.extra("p_l", 1.0)).map_err(err)?;
    let right = state(c.extra("rho_r", 0.125), c.extra("u_r", 0.0), c.extra("p_r", 0.1)).map_err(err)?;
    let x0 = c.extra("x0", 0.5);
    let fan = exact_riemann(left, right, &flow.params).map_err(err)?;
    let d = flow.diagnose(|x| if x < x0 { left } else { right }, Vec::new(), |f| f)?;
    let l1 = l1_density_error(d.solution.final_slice(), &flow.mesh, &fan, x0, c.t_end);
    let checks = vec![check("L1_rho", l1 <= 2e-2, format!("{l1:.3e} <= 2e-2"))];
    let report = flow.report(&d, vec![("L1_rho", l1), ("p_star", fan.pstar), ("u_star", fan.ustar)], checks);
    Ok((d, report))
}

fn simple_wave(flow: &Flow) -> Outcome {
    let c = flow.config;
    let gp = flow.params;
    let eps = c.extra("eps", 0.1);
    let err = |e| flow.numerical(e);
    let background = state(1.0, 0.0, 1.0).map_err(err)?;
    let a0 = background.sound_speed(&gp);
    let u0 = |x: f64| -eps * (2.0 * std::f64::consts::PI * x).sin();
    let profile = PeriodicProfile::from_fn(0.0, 1.0, 512, u0);
    let predicted = shock_formation(&profile, &gp, &background)
        .map_err(err)?
        .map(|f| f.t_star)
        .unwrap_or(f64::INFINITY);
    let analytic = 1.0 / ((gp.gamma() + 1.0) * std::f64::consts::PI * eps.abs());
    let d = flow.diagnose(
        |x| {
            let u = u0(x);
            let a = a0 + 0.5 * (gp.gamma() - 1.0) * u;
            let rho = (a * a / gp.gamma()).powf(1.0 / (gp.gamma() - 1.0));
            PrimState {
                rho,
                u,
                p: rho.powf(gp.gamma()),
            }
        },
        Vec::new(),
        |f| f,
    )?;
    let first = d.events.first().map(|e| e.t).unwrap_or(f64::INFINITY);
    let predicted_err = (predicted - analytic).abs() / analytic;
    let event_err = (first - predicted).abs() / predicted;
    let checks = vec![
        check("t_star", predicted_err <= 0.02, format!("{predicted:.5} vs {analytic:.5}")),
        check(
            "first_event",
            event_err <= 0.15,
            format!("first event at {first:.4}, {:.1}% from t*", 100.0 * event_err),
        ),
    ];
    let report = flow.report(
        &d,
        vec![
            ("t_star_analytic", analytic),
            ("t_star_predicted", predicted),
            ("first_event_t", first),
            ("first_event_rel_error", event_err),
        ],
        checks,
    );
    Ok((d, report))
}

fn isentropic_advection(flow: &Flow) -> Outcome {
    let c = flow.config;
    let amp = c.extra("amplitude", 0.2);
    let initial = |x: f64| PrimState {
        rho: 1.0 + amp * (2.0 * std::f64::consts::PI * x).sin(),
        u: 1.0,
        p: 1.0,
    };
    let seeds: Vec<f64> = (0..16).map(|k| (k as f64 + 0.5) / 16.0).collect();
    let drift = |sol: &Solution1D| -> Result<f64, RunError> {
        seeds.iter().try_fold(0.0f64, |m, &s| {
            let series = entropy_along_trajectory(sol, s).map_err(|e| flow.numerical(e))?;
            Ok(m.max(series.max_drift()))
        })
    };
    let d = flow.diagnose(initial, seeds.clone(), |f| f)?;
    let coarse = drift(&d.solution)?;
    let fine_mesh = Mesh::new(0.0, 1.0, 2 * c.n, Boundary::Periodic).map_err(|e| flow.numerical(e))?;
    let fine = drift(&flow.solve(fine_mesh, initial, vec![c.t_end], seeds.clone())?)?;
    let ratio = coarse / fine;
    let totals = conserved_totals(&d.solution.slices[0], &flow.mesh, &flow.params);
    let report = flow.report(&d, vec![("max_drift", coarse), ("max_drift_2N", fine), ("drift_ratio", ratio)], Vec::new());
    let defect = report
        .conservation
        .expect("flow run")
        .iter()
        .zip(totals)
        .map(|(d, t)| d.abs() / t.abs().max(1.0))
        .fold(0.0, f64::max);
    let checks = vec![
        check("drift_ratio", (1.6..=2.4).contains(&ratio), format!("{ratio:.3} in [1.6, 2.4]")),
        check("conservation", defect <= 1e-12, format!("relative defect {defect:.1e} <= 1e-12")),
    ];
    Ok((d, RunReport { checks, ..report }))
}

fn uniform(flow: &Flow) -> Outcome {
    let c = flow.config;
    let w = state(c.extra("rho", 1.0), c.extra("u", 0.0), c.extra("p", 1.0)).map_err(|e| flow.numerical(e))?;
    let d = flow.diagnose(|_| w, Vec::new(), |f| f)?;
    let checks = vec![
        check("stable", d.class == "Stable", d.class.clone()),
        check("no_events", d.events.is_empty(), format!("{} events", d.events.len())),
        check(
            "closed",
            d.max_k <= d.floor.value,
            format!("max|K| {:.1e} <= floor {:.1e}", d.max_k, d.floor.value),
        ),
    ];
    let report = flow.report(&d, vec![("max_abs_K", d.max_k), ("noise_floor", d.floor.value)], checks);
    Ok((d, report))
}

fn impulsive(flow: &Flow) -> Outcome {
    let u = flow.config.extra("U", 0.5);
    let d = flow.diagnose(
        |x| PrimState {
            rho: 1.0,
            u: if x < 0.5 { u } else { 0.0 },
            p: 1.0,
        },
        Vec::new(),
        |f| f,
    )?;
    let checks = vec![
        check("shock_type", d.class == "ShockType", d.class.clone()),
        check(
            "not_closed",
            d.max_k >= d.floor.threshold(),
            format!("max|K| {:.2e} >= {:.1e}", d.max_k, d.floor.threshold()),
        ),
    ];
    let report = flow.report(&d, vec![("max_abs_K", d.max_k), ("noise_floor", d.floor.value)], checks);
    Ok((d, report))
}

fn shear_layer(flow: &Flow) -> Outcome {
    let c = flow.config;
    let (du, width, mu) = (c.extra("du", 0.2), c.extra("width", 0.05), c.extra("mu", 1e-3));
    let d = flow.diagnose(
        |x| PrimState {
            rho: 1.0,
            u: du * ((x - 0.5) / width).tanh(),
            p: 1.0,
        },
        Vec::new(),
        |f| f.with_newtonian_viscosity(mu),
    )?;
    let (lo, hi) = d.a1_range;
    let checks = vec![
        check("A1_positive", hi > 0.0 && lo >= 0.0, format!("A1 in [{lo:.2e}, {hi:.2e}]")),
        check("turbulent_pulsation", d.class == "TurbulentPulsation", d.class.clone()),
    ];
    let report = flow.report(&d, vec![("A1_min", lo), ("A1_max", hi), ("max_abs_K", d.max_k)], checks);
    Ok((d, report))
}

// Second-order one-sided derivative at the face left of `cells[0]` when
// `dir = 1`, right of it when `dir = -1`.
fn one_sided(values: &[f64], first: usize, dir: isize, h: f64) -> f64 {
    let at = |k: isize| values[(first as isize + dir * k) as usize];
    dir as f64 * (-2.0 * at(0) + 3.0 * at(1) - at(2)) / h
}

fn entropy_contact(flow: &Flow) -> Outcome {
    let c = flow.config;
    let gp = flow.params;
    let slope = c.extra("slope", 0.5);
    let p = 1.0;
    let s_of = |x: f64| 1.0 + slope * (x - 0.5).max(0.0);
    let d = flow.diagnose(
        |x| PrimState {
            rho: (p / s_of(x)).powf(1.0 / gp.gamma()),
            u: 0.0,
            p,
        },
        Vec::new(),
        |f| f,
    )?;
    let slice = d.solution.final_slice();
    let h = flow.mesh.dx();
    let face = flow.mesh.cell_of(0.5 + 0.25 * h);
    let s: Vec<f64> = slice.iter().map(|w| w.entropy(&gp)).collect();
    let a: Vec<f64> = slice.iter().map(|w| w.sound_speed(&gp)).collect();
    let jump = |v: &[f64]| one_sided(v, face, 1, h) - one_sided(v, face - 1, -1, h);
    let measured = jump(&a) / jump(&s);
    let contact = state((p / s_of(0.5)).powf(1.0 / gp.gamma()), 0.0, p).map_err(|e| flow.numerical(e))?;
    let predicted = trajectory_break_relation(&contact, &gp);
    let rel = (measured - predicted).abs() / predicted.abs();
    let max_u = slice.iter().map(|w| w.u.abs()).fold(0.0, f64::max);
    let checks = vec![
        check("break_ratio", rel <= 1e-3, format!("{measured:.6} vs a/(2γs) = {predicted:.6}")),
        check("at_rest", max_u == 0.0, format!("max|u| = {max_u:.1e}")),
    ];
    let report = flow.report(
        &d,
        vec![
            ("break_ratio_measured", measured),
            ("break_ratio_predicted", predicted),
            ("break_ratio_rel_error", rel),
            ("max_abs_u", max_u),
        ],
        checks,
    );
    Ok((d, report))
}

fn carnot(config: &ScenarioConfig, params: &GasParams) -> Result<(RunReport, String), evoflow::Error> {
    let friction = config.extra("friction", 0.0);
    let t_hot = config.extra("T_h", 2.0);
    let path = ThermoPath::carnot_with_friction(
        params,
        t_hot,
        config.extra("T_c", 1.0),
        config.extra("V1", 1.0),
        config.extra("V2", 2.0),
        config.extra("steps", 4000.0) as usize,
        friction,
    )?;
    let r = clausius(&path, None)?;
    let gap = r.delta_s - r.heat_integral;
    let mut cycle = String::from("step,T,V,p,S,dQ,dW\n");
    for (k, st) in path.states().iter().enumerate() {
        let (dq, dw) = if k == 0 { (0.0, 0.0) } else { (path.heat()[k - 1], path.work()[k - 1]) };
        let _ = writeln!(cycle, "{k},{},{},{},{},{},{}", num(st.t), num(st.v), num(st.p), num(st.s), num(dq), num(dw));
    }
    let checks = if friction == 0.0 {
        vec![check(
            "reversible",
            r.class == ClausiusClass::Reversible,
            format!("∮δQ/T = {:.2e}, tolerance {:.1e}", r.heat_integral, r.tolerance),
        )]
    } else {
        let expected = friction / t_hot;
        vec![
            check(
                "irreversible",
                r.class == ClausiusClass::IrreversibleConsistent,
                r.class.as_str().to_string(),
            ),
            check(
                "entropy_gap",
                (gap - expected).abs() <= r.tolerance,
                format!("{gap:.6e} vs friction/T_h = {expected:.6e}"),
            ),
        ]
    };
    let report = RunReport {
        scenario: config.name,
        cells: 0,
        steps: path.steps(),
        max_cfl: 0.0,
        conservation: None,
        metrics: vec![
            ("delta_S", r.delta_s),
            ("heat_integral", r.heat_integral),
            ("entropy_gap", gap),
            ("tolerance", r.tolerance),
            ("first_law_residual", first_law_residual(&path)),
        ],
        class: r.class.as_str().to_string(),
        events: 0,
        checks,
        wall_time: Duration::ZERO,
    };
    Ok((report, cycle))
}
