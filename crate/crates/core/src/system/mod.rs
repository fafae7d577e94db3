//! Global sparse assembly, Dirichlet enforcement, and linear solvers.

pub mod assemble;
pub mod solve;
pub mod sparse;

pub use assemble::{
    apply_dirichlet, assemble, assemble_from, element_system, element_systems, MaterialMap,
};
pub use solve::{solve_cg, solve_dense};
pub use sparse::SparseSym;

use alloc::vec::Vec;
use core::fmt;

use crate::geometry::GeometryError;
use crate::mesh::DirichletSet;

/// Assembled global system. `fixed` holds the Dirichlet nodes; after
/// `apply_dirichlet` their rows and columns are reduced to identity and the
/// right-hand side carries the prescribed values.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: SparseSym,
    pub rhs: Vec<f64>,
    pub fixed: DirichletSet,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Euclidean norm of b - Ax at exit.
    pub final_residual: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SystemError {
    MissingMaterial { id: usize },
    DuplicateMaterial { id: usize },
    Material { id: usize, source: GeometryError },
    Geometry { element: usize, source: GeometryError },
    FixedNodeOutOfRange { node: usize },
    EmptyDirichlet,
    Singular,
    TooLargeForDense { n: usize },
    Breakdown { iteration: usize, what: &'static str },
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::MissingMaterial { id } => {
                write!(f, "material id {id} is referenced but not defined")
            }
            SystemError::DuplicateMaterial { id } => {
                write!(f, "material id {id} is defined more than once")
            }
            SystemError::Material { id, source } => {
                write!(f, "material {id}: {source}")
            }
            SystemError::Geometry { element, source } => {
                write!(f, "element {element}: {source}")
            }
            SystemError::FixedNodeOutOfRange { node } => {
                write!(f, "dirichlet node {node} is out of range")
            }
            SystemError::EmptyDirichlet => {
                write!(f, "no dirichlet nodes: the system is singular")
            }
            SystemError::Singular => write!(f, "matrix is singular"),
            SystemError::TooLargeForDense { n } => {
                write!(f, "dense solve refused for n = {n} > 500")
            }
            SystemError::Breakdown { iteration, what } => {
                write!(f, "conjugate gradient breakdown at iteration {iteration}: {what}")
            }
        }
    }
}

impl core::error::Error for SystemError {}
