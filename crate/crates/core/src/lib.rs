//! Closed-form first derivatives of theta constants at rational characteristics.
//!
//! The derivative `θ′[c](0,τ)` is expressed as a finite sum of monomials in
//! theta constants, obtained by following `c ↦ 3c` to a periodic core, solving
//! a cyclic linear system there and back-substituting along the tail.

pub mod characteristic;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod expr;
pub mod golden;
pub mod orbit;
pub mod scalar;
pub mod solver;
pub mod verify;

pub use characteristic::{
    parse_rational, ratio, Branch, Characteristic, Phase, Rational, RealCharacteristic,
    ReducedCharacteristic,
};
pub use engine::{theta_zero_location, SeriesParams, SeriesValue, TauPoint, ThetaEngine};
pub use error::{EngineError, OrbitError, ParseError, SolverError};
pub use expr::{ExprError, FactorForm, ThetaExpression, ThetaMonomial};
pub use orbit::{
    char_chain, element_orbits, orbit_of, partition, CharacteristicChain, EndpointKind, Orbit,
    OrbitKind,
};
pub use scalar::Real;
pub use solver::{
    build_system, fundamental_identity, solve_chain, solve_closed_form, DerivSystem,
    DerivationCache, FundamentalIdentity, SolverOptions,
};
pub use verify::{
    check_expression, check_fundamental, cross_check_quoted_identities, default_taus,
    fd_derivative, relation_suite, ResidualReport, SuiteTolerances,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type Engine64 = ThetaEngine<f64>;
pub type Engine32 = ThetaEngine<f32>;
pub type Tau64 = TauPoint<f64>;
pub type Tau32 = TauPoint<f32>;
pub type RealCharacteristic64 = RealCharacteristic<f64>;
