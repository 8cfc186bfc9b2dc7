//! Geometry and measure theory in the Engel group.
//!
//! The Engel group is the step-3 Carnot group on `R^4` with bracket
//! relations `[X1, X2] = X3`, `[X1, X3] = X4` and coordinate degree
//! weights `(1, 1, 2, 3)`. This crate provides exact rational arithmetic
//! for its Lie algebra and group law, polynomial left-invariant frames and
//! exterior calculus, certified box-type quasi-distances, surface charts
//! with frame tangent 2-vectors and pointwise degree, adapted graded
//! frames, quadrature for Riemannian and intrinsic measures, and the
//! density machinery on top: spherical factors, Federer densities,
//! blow-up exponent fits and divergence probes.
//!
//! Algebraic identities are checked over [`scalar::Rational`] and are
//! exact; quantitative estimates run over `f64` and carry explicit error
//! estimates. All values are immutable after construction and every
//! operation is pure, so everything can be shared across threads freely;
//! samplers and quadratures take explicit seeds and accumulate in fixed
//! order, making results reproducible bit for bit for a given spec.

pub mod adapted;
pub mod algebra;
pub mod density;
pub mod diag;
pub mod error;
pub mod frame;
pub mod metric;
pub mod poly;
pub mod quad;
pub mod scalar;
pub mod simplex;
pub mod surface;
