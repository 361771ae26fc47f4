//! Workbench for finite many-valued logics: partial non-deterministic
//! matrices, analytic multiple-conclusion proof search, finite algebra
//! computations and interpolant construction for the six-valued
//! perfect-paradefinite logics and their implicative expansions.

pub mod algebra;
pub mod axiomatizer;
pub mod calculus;
pub mod formula;
pub mod interpolation;
pub mod registry;
pub mod semantics;
