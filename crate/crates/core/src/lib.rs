//! Solver kernels for the 2D anisotropic, heterogeneous Poisson equation
//! -div(K grad u) = q on triangle meshes with Dirichlet boundaries.
//!
//! Two element-local discretizations are built from the same circumcentric
//! dual data: a discrete-exterior-calculus (DEC) form and linear finite
//! elements (FEML). Their 3x3 stiffness matrices coincide; the load vectors
//! differ (signed dual cell areas versus thirds of the triangle area), which
//! is the basis of the cross-validation tests in this workspace.
//!
//! Modules follow the pipeline: [`mesh`] (representation, file format,
//! generators, refinement), [`geometry`] (circumcentric dual quantities,
//! anisotropy tensors), [`local_ops`] (per-element operators and systems),
//! [`system`] (sparse assembly, Dirichlet elimination, solvers), and
//! [`postprocess`] (fluxes, sampling, norms, exports).
//!
//! The crate is no_std-compatible: build with `--no-default-features
//! --features libm` (alloc is still required).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("dec2d-core needs the `std` feature or the `libm` feature");

pub mod geometry;
pub mod local_ops;
pub mod mesh;
pub mod postprocess;
pub mod system;

mod math;

pub use geometry::{AnisotropyTensor, GeometryError, TriangleGeometry, Vec2};
pub use local_ops::{AnisoCoeffs, LocalSystem, Mat3, Method};
pub use mesh::{DirichletSet, MaterialSpec, MeshError, Point2, TriMesh, Triangle};
pub use system::{LinearSystem, SolveStats, SparseSym, SystemError};
