//! Desk-scale laboratory for ordinal-decreasing recursions.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: exact rationals and their text encodings.
//! * [`ordinal`]: notations below `φ_ω(0)` with natural and ordinary arithmetic,
//!   finite Veblen functions and the height bound for the generalized recursion.
//! * [`odf`]: descriptors for positive ordinal-decreasing building blocks.
//! * [`engine`]: the exact, memoized evaluator for the recursion
//!   `M(x) = g_1(-M(x - g_2(-M(x - ... g_k(-M(x - s(x)))))))`.
//! * [`partition`]: the slope-1 climb that cuts a domain into intervals `[p_α, p_{α+1})`.
//! * [`badseq`]: longest bad chains on finite grids and the finite shadows of the
//!   composition, split and sum bounds.
//! * [`plot`]: CSV and SVG rendering of sampled series.

pub mod badseq;
pub mod engine;
pub mod numerics;
pub mod odf;
pub mod ordinal;
pub mod partition;
pub mod plot;

pub use engine::{AlgoConfig, Budget, EvalError, EvalStats, Evaluator};
pub use numerics::{FormatMode, Rational};
pub use odf::FuncDesc;
pub use ordinal::{Ordinal, Principal};
