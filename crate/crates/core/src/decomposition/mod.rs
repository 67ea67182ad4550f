//! Tree decompositions: the PACE `.td` format, greedy construction, and the
//! nice form consumed by the dynamic programs.

mod heuristic;
mod nice;
mod td;

pub use heuristic::{heuristic_decompose, Strategy};
pub use nice::{nicify, NiceDecomposition, NiceNode, NodeKind};
pub use td::{parse_td, TreeDecomposition};
