//! Balanced bi-trees and forward-connected vertex orderings of strongly
//! connected digraphs.
//!
//! The pipeline runs [`left_dfs`] → [`separator`] → [`bitree`] → [`ordering`]:
//! a left-maximal DFS tree yields a balanced cycle separator, the separator
//! yields a bi-tree whose two sides each span a sixth of the vertices, and
//! any ordering extending the bi-tree has a quadratic number of forward
//! couples. [`ordering::schedule_from_ordering`] turns such an ordering into
//! an arc schedule with at least as many temporally connected couples.

pub mod bitree;
pub mod connectivity;
pub mod digraph;
pub mod error;
pub mod instances;
pub mod left_dfs;
pub mod oracles;
pub mod ordering;
pub mod requests;
pub mod separator;

pub use digraph::{Digraph, Vertex};
pub use error::{Error, Result};
