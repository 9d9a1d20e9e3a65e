//! Restricted self-sumsets `A +^ A = {a + a' : a != a'}` in `Z_n` and the minimax value
//! `Φ̂_k(n)`: the least possible size of the largest class sumset over all `k`-colorings of `Z_n`.
//!
//! * [`arith`]: `p(n)`, `q(n, k)`, `f(t)`, subgroups and cosets.
//! * [`residue`] and [`sumset`]: bitset sets, the sumset kernel, structure classification.
//! * [`coloring`]: block and coset constructions and their evaluation.
//! * [`value`]: closed-form bounds and exact regimes.
//! * [`oracle`]: exhaustive branch-and-bound search.
//! * [`stability`]: heaviest-coset and internal-sums bounds, concentration threshold.
//! * [`verify`]: exhaustive verification suites.

pub mod arith;
pub mod certificate;
pub mod coloring;
pub mod error;
pub mod oracle;
pub mod residue;
pub mod stability;
pub mod sumset;
pub mod value;
pub mod verify;

pub use arith::{
    coset_sumset_size, largest_divisor_at_most, least_prime_divisor, quotient_stats,
    subgroup_of_size, GroupParams, QuotientStats, SubgroupContext,
};
pub use coloring::{best_construction, block_partition, coset_partition, evaluate, Coloring, Evaluation};
pub use error::{Error, Result};
pub use oracle::{brute_force_phi, enumerate_optimal, feasible, SearchConfig};
pub use residue::ResidueSet;
pub use stability::{
    alpha_star, combined_bound, cross_coset_bound, internal_sums_bound, threshold_check,
    StabilityReport,
};
pub use sumset::{affine_canonical_form, classify, lift_and_check_window, restricted_sumset, StructureTag};
pub use value::{phi_exact, phi_lower_bound, phi_upper_bound, PhiResult, Regime};
