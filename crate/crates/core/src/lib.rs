pub mod acceptance;
pub mod bounds;
pub mod boxes;
pub mod error;
pub mod excl;
pub mod graph;
pub mod kscolor;
pub mod numkernel;
pub mod quantum;
pub mod scenarios;

pub use error::{Error, Result};
pub use graph::{Graph, GraphFamilySpec, GraphJson};
