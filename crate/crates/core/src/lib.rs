//! Positivity tools on intervals: positive and negative definite kernels,
//! Laplace transforms of positive measures, Lévy–Khintchine synthesis and
//! analysis, and reflection positivity checks.
//!
//! Every decision is taken on finite grids. A `PASS` means no violation was
//! found at the grid and tolerance used.

// `!(x > 0.0)` style tests are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod diffcalc;
pub mod error;
pub mod func;
pub mod grid;
pub mod json;
pub mod kernelcheck;
pub mod levykhin;
pub mod linalg;
pub mod measure;
pub(crate) mod quad;
pub mod reflection;

pub use error::{Error, Result};
pub use func::{Domain, FuncHandle};
pub use grid::GridKind;
pub use kernelcheck::{KernelGram, KernelKind, PositivityVerdict, Verdict};

pub use levykhin::{BernsteinRep, LKIncreasingRep, LKIntervalRep};
pub use measure::{LaplaceValue, Measure};
pub use reflection::{GridOptions, ReflectionReport};

