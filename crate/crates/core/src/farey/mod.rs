//! Exact Farey–Brocot combinatorics.
//!
//! Continued fractions use the convention `[a_1, …, a_n] = 1/(a_1 + 1/(a_2 + …))`,
//! so every expansion has value in `(0, 1]`.
//!
//! Two indexings coexist for a fraction with expansion `[a_1 … a_n]`:
//! it first appears as a breakpoint of the Farey partition at level
//! `Σ a_j − 1` ([`ContinuedFraction::creation_level`]), and it belongs to
//! row `Σ a_j` of the restricted tree ([`ContinuedFraction::tree_row`]).

pub mod cf;
pub mod fraction;
pub mod partition;
pub mod word;

pub use cf::{
    besicovitch_q, cf_from_fraction, cumulants, fraction_from_cf, ContinuedFraction,
    PeriodicContinuedFraction,
};
pub use fraction::{mediant, Fraction};
pub use partition::{
    build_partition, build_partition_with_cap, intervals, subtrees, FareyInterval, FareyIntervals,
    FareyPartition, DEFAULT_LEVEL_CAP,
};
pub use word::{lr_word, Letter, Word};
