//! B-spline Galerkin discretization of two- and three-body bound-state
//! eigenproblems with a soft derivative-jump penalty on the stiffness.

pub mod assembly;
pub mod eigen;
pub mod experiments;
pub mod mesh;
pub mod problem;
pub mod quadrature;
pub mod sparse;
pub mod spline;

pub use assembly::{assemble_1d, assemble_2d, AssemblyError, Operators1D, Operators2D, SoftnessConfig};
pub use eigen::{eigen_error, solve_smallest, EigenError, EigenResult, SolverOptions};
pub use mesh::{graded_mesh, uniform_mesh, GradedMeshSpec, Mesh1D};
pub use problem::{Dimension, PotentialShape, ProblemSpec};
pub use quadrature::gauss_rule;
pub use spline::SplineSpace;
