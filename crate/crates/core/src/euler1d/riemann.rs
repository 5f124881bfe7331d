//! Exact Riemann solver for the ideal-gas Euler equations.
//!
//! The star pressure is the root of `f_L(p) + f_R(p) + u_R - u_L = 0`, where
//! `f_K` is the shock (Rankine-Hugoniot) branch for `p > p_K` and the
//! rarefaction (isentropic) branch otherwise. `f` is monotone increasing and
//! concave, so Newton iteration kept inside a sign bracket converges from
//! any start.

use super::PrimState;
use crate::error::{Error, Result};
use crate::thermo::GasParams;

const REL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Shock,
    Rarefaction,
    /// Star pressure equals the side pressure: no acoustic wave on this side.
    Absent,
}

/// Solved Riemann problem; [`RiemannFan::sample`] gives the self-similar
/// solution at any `x/t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannFan {
    pub left: PrimState,
    pub right: PrimState,
    pub pstar: f64,
    pub ustar: f64,
    pub left_wave: WaveKind,
    pub right_wave: WaveKind,
    gamma: f64,
}

/// `f_K(p)` and its derivative for one side.
fn side_function(p: f64, side: &PrimState, gamma: f64) -> (f64, f64) {
    let a = (gamma * side.p / side.rho).sqrt();
    if p > side.p {
        let ak = 2.0 / ((gamma + 1.0) * side.rho);
        let bk = (gamma - 1.0) / (gamma + 1.0) * side.p;
        let root = (ak / (p + bk)).sqrt();
        let f = (p - side.p) * root;
        (f, root * (1.0 - 0.5 * (p - side.p) / (bk + p)))
    } else {
        let ratio = p / side.p;
        let e = (gamma - 1.0) / (2.0 * gamma);
        let f = 2.0 * a / (gamma - 1.0) * (ratio.powf(e) - 1.0);
        (f, ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (side.rho * a))
    }
}

fn wave_kind(pstar: f64, side_p: f64) -> WaveKind {
    if (pstar - side_p).abs() <= REL_TOL * side_p {
        WaveKind::Absent
    } else if pstar > side_p {
        WaveKind::Shock
    } else {
        WaveKind::Rarefaction
    }
}

pub fn exact_riemann(left: PrimState, right: PrimState, params: &GasParams) -> Result<RiemannFan> {
    let g = params.gamma();
    let (al, ar) = (left.sound_speed(params), right.sound_speed(params));
    let du = right.u - left.u;
    let critical = 2.0 * (al + ar) / (g - 1.0);
    if critical <= du {
        return Err(Error::Vacuum { critical, du });
    }
    if du == 0.0 && left.p == right.p {
        // Isolated contact.
        return Ok(RiemannFan {
            left,
            right,
            pstar: left.p,
            ustar: left.u,
            left_wave: wave_kind(left.p, left.p),
            right_wave: wave_kind(right.p, right.p),
            gamma: g,
        });
    }
    let f = |p: f64| {
        let (fl, dl) = side_function(p, &left, g);
        let (fr, dr) = side_function(p, &right, g);
        (fl + fr + du, dl + dr)
    };

    // Bracket: f(0+) < 0 by the vacuum check; grow the upper end until f > 0.
    let mut lo = 0.0;
    let mut hi = left.p.max(right.p);
    while f(hi).0 < 0.0 {
        lo = hi;
        hi *= 2.0;
    }

    // Primitive-variable linearisation as the starting guess.
    let pv = 0.5 * (left.p + right.p) - 0.125 * du * (left.rho + right.rho) * (al + ar);
    let mut p = if pv > lo && pv < hi { pv } else { 0.5 * (lo + hi) };
    for _ in 0..MAX_ITER {
        let (fp, dfp) = f(p);
        if fp == 0.0 {
            break;
        }
        if fp < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let mut next = p - fp / dfp;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let change = 2.0 * (next - p).abs() / (next + p);
        p = next;
        if change < REL_TOL {
            break;
        }
    }

    let (fl, _) = side_function(p, &left, g);
    let (fr, _) = side_function(p, &right, g);
    Ok(RiemannFan {
        left,
        right,
        pstar: p,
        ustar: 0.5 * (left.u + right.u) + 0.5 * (fr - fl),
        left_wave: wave_kind(p, left.p),
        right_wave: wave_kind(p, right.p),
        gamma: g,
    })
}

impl RiemannFan {
    fn gm(&self) -> (f64, f64, f64) {
        let g = self.gamma;
        (g, (g - 1.0) / (g + 1.0), (g - 1.0) / (2.0 * g))
    }

    /// Density in the star region adjacent to the left state.
    pub fn rho_star_left(&self) -> f64 {
        star_density(self.pstar, &self.left, self.gamma)
    }

    /// Density in the star region adjacent to the right state.
    pub fn rho_star_right(&self) -> f64 {
        star_density(self.pstar, &self.right, self.gamma)
    }

    /// Speed of the right-facing shock, if there is one.
    pub fn right_shock_speed(&self) -> Option<f64> {
        (self.right_wave == WaveKind::Shock).then(|| {
            let (g, _, _) = self.gm();
            let ar = (g * self.right.p / self.right.rho).sqrt();
            self.right.u + ar * ((g + 1.0) / (2.0 * g) * self.pstar / self.right.p + (g - 1.0) / (2.0 * g)).sqrt()
        })
    }

    /// Speed of the left-facing shock, if there is one.
    pub fn left_shock_speed(&self) -> Option<f64> {
        (self.left_wave == WaveKind::Shock).then(|| {
            let (g, _, _) = self.gm();
            let al = (g * self.left.p / self.left.rho).sqrt();
            self.left.u - al * ((g + 1.0) / (2.0 * g) * self.pstar / self.left.p + (g - 1.0) / (2.0 * g)).sqrt()
        })
    }

    /// Self-similar solution at `xi = x/t`.
    pub fn sample(&self, xi: f64) -> PrimState {
        let (g, g6, g7) = self.gm();
        let (l, r) = (self.left, self.right);
        if xi <= self.ustar {
            let al = (g * l.p / l.rho).sqrt();
            if self.pstar > l.p {
                let ratio = self.pstar / l.p;
                let sl = l.u - al * ((g + 1.0) / (2.0 * g) * ratio + g7).sqrt();
                if xi <= sl {
                    l
                } else {
                    PrimState {
                        rho: self.rho_star_left(),
                        u: self.ustar,
                        p: self.pstar,
                    }
                }
            } else {
                let head = l.u - al;
                let astar = al * (self.pstar / l.p).powf(g7);
                let tail = self.ustar - astar;
                if xi <= head {
                    l
                } else if xi >= tail {
                    PrimState {
                        rho: self.rho_star_left(),
                        u: self.ustar,
                        p: self.pstar,
                    }
                } else {
                    let c = 2.0 / (g + 1.0) + g6 / al * (l.u - xi);
                    PrimState {
                        rho: l.rho * c.powf(2.0 / (g - 1.0)),
                        u: 2.0 / (g + 1.0) * (al + (g - 1.0) / 2.0 * l.u + xi),
                        p: l.p * c.powf(1.0 / g7),
                    }
                }
            }
        } else {
            let ar = (g * r.p / r.rho).sqrt();
            if self.pstar > r.p {
                let ratio = self.pstar / r.p;
                let sr = r.u + ar * ((g + 1.0) / (2.0 * g) * ratio + g7).sqrt();
                if xi >= sr {
                    r
                } else {
                    PrimState {
                        rho: self.rho_star_right(),
                        u: self.ustar,
                        p: self.pstar,
                    }
                }
            } else {
                let head = r.u + ar;
                let astar = ar * (self.pstar / r.p).powf(g7);
                let tail = self.ustar + astar;
                if xi >= head {
                    r
                } else if xi <= tail {
                    PrimState {
                        rho: self.rho_star_right(),
                        u: self.ustar,
                        p: self.pstar,
                    }
                } else {
                    let c = 2.0 / (g + 1.0) - g6 / ar * (r.u - xi);
                    PrimState {
                        rho: r.rho * c.powf(2.0 / (g - 1.0)),
                        u: 2.0 / (g + 1.0) * (-ar + (g - 1.0) / 2.0 * r.u + xi),
                        p: r.p * c.powf(1.0 / g7),
                    }
                }
            }
        }
    }
}

fn star_density(pstar: f64, side: &PrimState, g: f64) -> f64 {
    let g6 = (g - 1.0) / (g + 1.0);
    let ratio = pstar / side.p;
    if pstar > side.p {
        side.rho * (ratio + g6) / (g6 * ratio + 1.0)
    } else {
        side.rho * ratio.powf(1.0 / g)
    }
}
