//! Poisson structures on products of flag configuration spaces, evaluated
//! exactly in charts through first and second order jets.

pub mod chart;
pub mod lie;

pub use chart::{flags, neg, pos, Chart, Factor, SubChart, Tail};
pub mod eval;
pub mod field;
pub mod maps;

pub use eval::{
    bivector_rank, brackets, evaluate, evaluate_at, is_coisotropic, is_poisson_map, jacobi_check,
    jacobi_components, multiplicativity_check, pi_st, pi_st_brackets, poisson_map_defect, restrict, Bivector,
    PoissonMap, Restricted,
};
pub use field::{Field, Flow, Push, Side};
