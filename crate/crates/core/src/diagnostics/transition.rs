use super::{evolutionary_commutator, EvolutionaryForm, FlowFields};
use crate::error::{Error, Result};
use crate::euler1d::{shock_flags, Solution1D};

/// Settings of the commutator-collapse detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Particle labels per window.
    pub window: usize,
    /// Collapse level as a fraction of the window's largest `|K|` so far.
    pub relative_tol: f64,
    /// Lower bound of the collapse level.
    pub absolute_tol: f64,
    /// Cells between a window edge and a flagged shock cell.
    pub shock_radius: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            window: 8,
            relative_tol: 0.5,
            absolute_tol: 1e-8,
            shock_radius: 3,
        }
    }
}

/// A window whose commutator dropped below the collapse level while a shock
/// sat at one of its edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionEvent {
    pub t: f64,
    /// Position of the window edge next to the shock.
    pub x: f64,
    pub window: usize,
    pub k_before: f64,
    pub k_after: f64,
}

/// Scans label windows of the accompanying frame for commutator collapse
/// co-located with a shock flag. Events are ordered by time, then position.
pub fn transition_detector(solution: &Solution1D, config: &DetectorConfig) -> Result<Vec<TransitionEvent>> {
    if solution.times.len() < 4 {
        return Err(Error::InvalidInput("at least four recorded times are needed".into()));
    }
    if config.window == 0 {
        return Err(Error::InvalidInput("window must hold at least one label".into()));
    }
    let fields = FlowFields::from_solution(solution)?;
    let form = EvolutionaryForm::from_fields(&fields)?;
    let k = evolutionary_commutator(&form)?;
    let frame = form.frame().expect("frame traced from fields");
    let positions = frame.positions();
    let (nt, nl) = positions.dim();
    let kv = k.values();
    let mesh = &solution.mesh;
    let windows = nl.div_ceil(config.window);
    let flags: Vec<Vec<bool>> = solution
        .slices
        .iter()
        .map(|s| shock_flags(s, mesh, &solution.params))
        .collect();

    let window_max = |n: usize, w: usize| {
        let hi = ((w + 1) * config.window).min(nl);
        (w * config.window..hi).map(|j| kv[[n, j]].abs()).fold(0.0, f64::max)
    };
    let shock_near = |n: usize, x: f64| {
        let c = mesh.cell_of(mesh.wrap(x)) as isize;
        let r = config.shock_radius as isize;
        let cells = mesh.cells as isize;
        (c - r..=c + r).any(|i| match mesh.boundary {
            crate::euler1d::Boundary::Periodic => flags[n][i.rem_euclid(cells) as usize],
            crate::euler1d::Boundary::Transmissive => i >= 0 && i < cells && flags[n][i as usize],
        })
    };

    let mut events = Vec::new();
    for w in 0..windows {
        let edges = [w * config.window, ((w + 1) * config.window).min(nl) - 1];
        // First and last recorded times carry one-sided differences.
        let mut before = window_max(1, w);
        let mut peak = before;
        for n in 2..nt - 1 {
            let after = window_max(n, w);
            let tol = (config.relative_tol * peak).max(config.absolute_tol);
            peak = peak.max(after);
            if before > tol && after <= tol {
                let hit = edges.iter().map(|&j| positions[[n, j]]).find(|&x| shock_near(n, x));
                if let Some(x) = hit {
                    events.push(TransitionEvent {
                        t: solution.times[n],
                        x: mesh.wrap(x),
                        window: w,
                        k_before: before,
                        k_after: after,
                    });
                }
            }
            before = after;
        }
    }
    events.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.x.total_cmp(&b.x)));
    Ok(events)
}
