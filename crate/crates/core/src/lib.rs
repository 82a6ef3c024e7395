//! Second-order representations of `C([0,1])`, `L^p` and `W^{m,p}` as
//! instrumented query oracles, validated against an exact symbolic oracle.

pub mod dyadic;
pub mod entropy;
pub mod error;
pub mod moduli;
pub mod name;
pub mod operators;
pub mod reps;
pub mod step;
pub mod symbolic;

pub use dyadic::{BitString, Dyadic, DyBox};
pub use error::{Error, Result};
