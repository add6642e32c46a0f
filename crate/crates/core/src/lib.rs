//! Farey–Brocot combinatorics and the multifractal machinery around the
//! universal dimension of the critical circle-map staircase.
//!
//! The crate is split by subject:
//!
//! * [`farey`] – exact rationals, continued fractions, Farey–Brocot
//!   partitions and L/R words.
//! * [`euclid`] – spectra of self-similar measures with equal lengths or
//!   equal probabilities, the τ(q) solver and spectrum inversion.
//! * [`fb`] – the spectrum of the Farey–Brocot measure, its information
//!   point and the E_k dimensions.
//! * [`stats`] – the restricted Farey tree, its coefficient census and the
//!   statistical contractor log A.
//! * [`circle`] – mode locking of the critical sine circle map, gap covers
//!   and dimension estimates.
//! * [`hyperbolic`] – unimodular matrices acting on intervals and geodesic
//!   cutting sequences.

pub mod circle;
pub mod error;
pub mod euclid;
pub mod farey;
pub mod fb;
pub mod hyperbolic;
pub mod stats;

pub use error::{Error, Result};
