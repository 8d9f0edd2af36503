//! Exact rational linear algebra and linear programming.

pub mod elimination;
pub mod lp;
pub mod matrix;
pub mod modular;

pub use elimination::{determinant, kernel_basis, rank, rank_nullity, solve};
pub use lp::{
    lp_feasible, lp_maximize, nonnegative_solution, polytope_dimension, positive_support, Feasibility, NonnegativeSolve,
    Optimum, PolytopeQuery,
};
pub use matrix::RatMatrix;
