//! Exact arithmetic for type-A rational Cherednik algebras realized inside
//! `D(h^reg) # S_n`.

pub mod bimod;
pub mod cherednik;
pub mod error;
pub mod expr;
pub mod field;
pub mod isotypic;
pub mod locfrac;
pub mod perm;
pub mod poly;
pub mod rank;
pub mod scalar;
pub mod skew;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{parse, parse_function, parse_operator, render, Atom, Expr};
pub use field::Field;
pub use locfrac::LocFrac;
pub use perm::Perm;
pub use poly::{Family, Monomial, Poly};
pub use scalar::{IntPoly, RatFunc};
pub use skew::{OpKey, SkewOperator, SymbolElement, SymbolPoly};
pub use cherednik::{
    calogero_moser, idempotent, is_good, laplacian, phi_twist, radial_rhs, theta_spher,
    CherednikContext,
};
pub use perm::Character;
pub use rank::{exact_rank, Echelon};
pub use isotypic::{
    a_power_basis, isotypic_basis, molien_dimension, APowers, DimensionTable, IsotypicBasis,
};
pub use bimod::{
    compare_with_target, gr_comparison, gr_dimension_table, gr_span, p_spanning_set,
    q_spanning_set, spherical_generators, BoundMode, GrComparison, GrOptions, GrRow, GrStatus, Side,
};
pub use verify::{run_suite, CheckReport, CheckStatus, Param, SuiteOptions, SUITES};

/// Scalars of the generic parameter `c`.
pub type Scalar = RatFunc;
/// Operators with coefficients in `Q(c)`.
pub type Operator = SkewOperator<RatFunc>;
/// Operators at a fixed rational parameter.
pub type RationalOperator = SkewOperator<num_rational::BigRational>;
/// Localized functions over `Q(c)`.
pub type Function = LocFrac<RatFunc>;
