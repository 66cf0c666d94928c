//! A workbench for interpretability logics between IL⁻ and IL.
//!
//! * [`syntax`] — formulas, parsing, printing and adequate sets;
//! * [`kernel`] — axiom schemes, the logic registry and a Hilbert-style
//!   proof checker with a library of derivations;
//! * [`veltman`] and [`genveltman`] — the two relational semantics;
//! * [`correspondence`] — frame conditions and their audits;
//! * [`decide`] — countermodel search, maximal consistent sets, canonical
//!   models and the decision procedure built on them;
//! * [`random`] — seeded random frames, models and formulas;
//! * [`data`] — the shipped example models and registry dump.

pub mod bitset;
pub mod correspondence;
pub mod data;
pub mod decide;
pub mod genveltman;
pub mod kernel;
pub mod random;
pub mod semantics;
pub mod syntax;
pub mod veltman;
