//! Cohomology of pointwise trivial cocycles on finite groups.
//!
//! The crate works with finite groups given by multiplication tables,
//! circle-valued cochains stored as root-of-unity exponents, central
//! extensions, torsor bundles over finite base spaces and finite-dimensional
//! twisted group algebras.

pub mod catalog;
pub mod grp;
pub mod zmod;
pub mod coh;
pub mod ext;
pub mod bundle;
pub mod alg;
pub mod cli;
