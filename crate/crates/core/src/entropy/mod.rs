//! Invariants, trajectories and algebraic entropy.

pub mod fekete;
pub mod invariant;
pub mod lattice_side;
pub mod norm;
pub mod ring_change;
pub mod supremum;
pub mod trajectory;

pub use fekete::{check_subadditive, fekete_gaps, fekete_limit, has_affine_tail, FEKETE_TOLERANCE};
pub use lattice_side::{entropy_lattice_side, entropy_lattice_side_flow, lattice_entropy_at, lattice_entropy_untabulated};
pub use ring_change::{phi_t_eval, restrict_morphism, restrict_scalars, restrict_submodule, ring_change_report, RingChangeReport};
pub use supremum::{
    candidates, endomorphism_supply, entropy_of_endo, entropy_of_flow_preradical, entropy_of_module, entropy_of_preradical,
    entropy_relative, submodules_of, Candidates, EntropyOutcome,
};
pub use trajectory::{entropy_at, trajectory, trajectory_profile, TrajectoryProfile, TrajectoryVerdict};
