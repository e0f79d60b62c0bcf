//! Exact rewriting engine for the qupit stabiliser ZX-calculus.

pub mod cyclo;
pub mod diagram;
pub mod error;
pub mod graphstate;
pub mod interp;
pub mod linalg;
pub mod modp;
pub mod normalize;
pub mod relsem;
pub mod rules;
pub mod zomega;

pub use cyclo::{Cyclo, CycloMatrix};
pub use diagram::{Colour, Diagram, Edge, EdgeKind, Phase, VertexKind};
pub use error::{Error, Result};
pub use modp::{Prime, Zp};
