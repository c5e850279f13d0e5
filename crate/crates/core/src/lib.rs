//! Exact commutativity degree of finite-dimensional Lie algebras over `F_q`.
//!
//! * [`field`]: arithmetic in `F_q`, prime fields and small extensions.
//! * [`linalg`]: rank, kernels and echelonized subspaces over `F_q`.
//! * [`algebra`]: structure-constant Lie algebras, their invariants, and the
//!   standard constructions (abelian, Heisenberg, affine, `L43`, `L55`,
//!   direct sums, central products).
//! * [`degree`]: `d(L)` by three independent enumerations, the closed forms,
//!   and asymptotic degrees of families.
//! * [`classify`]: recognition of `dim L^2 = 1` algebras, theorem checks and
//!   exhaustive enumeration of small algebras.
//!
//! ```
//! use commdeg::{algebra, degree, field::FieldSpec};
//!
//! let f2 = FieldSpec::of_order(2).unwrap();
//! let h1 = algebra::heisenberg(&f2, 1).unwrap();
//! let report = degree::degree_rank_sum(&h1, &Default::default()).unwrap();
//! assert_eq!(report.degree.to_string(), "5/8");
//! ```

pub mod algebra;
pub mod classify;
pub mod degree;
pub mod field;
pub mod linalg;
pub mod par;
pub mod rational;

pub use algebra::{LieAlgebra, StructureReport};
pub use degree::{DegreeConfig, DegreeReport, Method};
pub use field::{FieldElement, FieldSpec};
pub use par::Workers;
pub use rational::ExactRational;
