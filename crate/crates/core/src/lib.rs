//! Two-bridge links, lens-space correction terms and the identities
//! relating their Jones polynomials and Khovanov gradings to Heegaard Floer
//! data of the branched double cover, plus left-orderability obstructions
//! for group presentations.

pub mod exactmath;
pub mod jones;
pub mod lensfloer;
pub mod orderability;
pub mod rho;
pub mod twobridge;

pub use exactmath::{GaussInt, GaussLaurent, Rational};
pub use jones::{ConventionRecord, GradingSet};
pub use lensfloer::LensSpace;
pub use twobridge::TwoBridge;
