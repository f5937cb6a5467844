//! Inference of minimal DPO graph transformation rule sets from explicit
//! transition systems.
//!
//! Given a snapshot of behavior — input graphs plus element-mapped
//! transitions — this crate constructs the maximum rule of every transition,
//! searches their common subrules for candidate rules, and solves a set
//! cover problem over the candidates to produce a smallest generating rule
//! set, either exactly (no transitions beyond the input) or lossily with a
//! weighted trade-off against spurious transitions. The size of the minimal
//! exact set is the model complexity `K(S)`.
//!
//! Entry points:
//! - [`graph`], [`label`], [`morphism`], [`canon`]: the labeled-graph
//!   substrate with embedding search and canonical forms.
//! - [`rule`], [`rewrite`]: spans, direct derivations, the subrule order.
//! - [`transition`]: input transition systems and generation semantics.
//! - [`inference`]: candidate pools via maximal common subrules.
//! - [`cover`]: the cover problem, exact branch-and-bound solver, LP export.
//! - [`workbench`]: generators for the bundled experiment systems, the
//!   end-to-end pipeline and file formats.

pub mod bits;
pub mod canon;
pub mod cover;
pub mod error;
pub mod formats;
pub mod grammar;
pub mod graph;
pub mod label;
pub mod morphism;
pub mod inference;
pub mod pipeline;
pub mod rewrite;
pub mod rule;
pub mod tictactoe;
pub mod transition;

pub use error::{Error, Result};
