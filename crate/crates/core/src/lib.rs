pub mod admittance;
pub mod charpoly;
pub mod cli;
pub mod designer;
pub mod error;
pub mod graph;
pub mod json;
pub mod linalg;
pub mod momentum;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod scattering;

pub use error::{Error, Result};
pub use graph::{Adjacency, Edge, Mode, Subgraph, WeightedGraph};
pub use poly::Poly;
pub use ratfunc::{LaurentExpansion, RationalFunction, RfOp};
pub use scalar::{Field, Quad, Scalar};
