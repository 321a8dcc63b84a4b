//! Spectral computations on the torus and the line.

pub mod counterexample;
pub mod dominance;
pub mod gn;
pub mod multiplier;
pub mod norms;
pub mod oscillatory;
pub mod roots;
pub mod system;
pub mod trigpoly;

pub use counterexample::{counterexample_run, CounterexampleConfig, CounterexampleReport, Decay, JuniorModels};
pub use dominance::dominance_constant;
pub use gn::{gn_check, GridFn};
pub use multiplier::{multiplier_tail, multiplier_tails};
pub use norms::{embedding_ratio, l1_norm, sobolev_norm};
pub use oscillatory::{oscillatory_probe, oscillatory_sweep};
pub use roots::{halfplane_root_count, halfplane_root_count_brute};
pub use system::{annihilation_residual, solve_system, EmbeddingProblem};
pub use trigpoly::{apply_operator, proper_part, TrigPoly};
