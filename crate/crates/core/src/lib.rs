//! Strong-secrecy leakage bounds for broadcast channels with confidential
//! messages, at brute-force-checkable scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`probability`]: finite distributions, stochastic matrices, products
//!   and compositions, JSON (de)serialisation.
//! * [`information`]: entropy, mutual information, conditional mutual
//!   information along a `U -> V -> X -> (Y, Z)` chain, channel capacity.
//! * [`gallager`]: the exponential moment functionals `psi` and `phi`
//!   behind every leakage bound here, plus the concave maximisation of
//!   `phi` over input distributions.
//! * [`hashing`]: two-universal families of surjective binary linear maps,
//!   with exhaustive verification at small sizes.
//! * [`bounds`]: the computable leakage bounds. Privacy amplification
//!   against a fixed observation channel, channel resolvability,
//!   random-coding leakage with its exponent, and per-codebook bounds.
//! * [`region`]: certification of achievable rate triples `(R_1, R_e,
//!   R_0)` and inner-bound sweeps over auxiliary chains.
//! * [`oracle`]: brute-force ground truth. Exact leakage of small hash
//!   and code constructions, and the soundness sweep that checks every
//!   bound against it.
//!
//! All rates and information quantities are in nats unless a function name
//! says otherwise. Conversion to bits is a display concern.

#![deny(missing_docs)]
#![forbid(unsafe_code)]

pub mod bounds;
mod error;
pub mod gallager;
pub mod hashing;
pub mod information;
pub mod numeric;
pub mod oracle;
pub mod probability;
pub mod region;

pub use error::{Error, Result};
pub use gallager::Rho;
pub use probability::{Channel, Distribution, JointDistribution, MarkovChainSpec};
