//! Evolutionary-form diagnostics of 1D flow fields.
//!
//! Entropy obeys `∂s/∂ξ¹ = A1` along particle trajectories and
//! `∂s/∂ξ² = A_ν` across them, i.e. `ds = ω` with `ω = A1 dξ¹ + A_ν dξ²`.
//! For an ideal gas `A1 = 0`; viscous stress and heat flux make it nonzero.
//! `A_ν` collects the momentum-balance terms
//! `(∂h₀/∂x + U×rotU - F + ∂u/∂t)/T`. When `ω` is not closed its commutator
//! `K = ∂A_ν/∂ξ¹ - ∂A1/∂ξ²` measures the internal force driving the flow
//! away from local equilibrium; which term feeds `K` identifies the kind of
//! instability.

mod classify;
mod fields;
mod frame;
mod sources;
mod transition;

pub use classify::{classify, lagrange_check, InstabilityClass, LagrangeReport, NoiseFloor};
pub use fields::{BodyForce, FlowFields};
pub use frame::{evolutionary_commutator, AccompanyingFrame, EvolutionaryForm};
pub use sources::{a1_viscous, a_nu, source_breakdown, ViscousHeatTerms, SourceBreakdown};
pub use transition::{transition_detector, DetectorConfig, TransitionEvent};
