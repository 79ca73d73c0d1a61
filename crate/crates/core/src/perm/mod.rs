//! Permutations, stabilizer chains and the group-theoretic closures built on them.

pub mod chain;
pub mod group;
pub mod permutation;

pub use chain::StabChain;
pub use group::{closure_order, PermutationGroup, MAX_DEGREE};
pub use permutation::Permutation;
