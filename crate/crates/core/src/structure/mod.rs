//! Hanging path systems, rooted trees and their doubles, and the shape
//! classifier for expansion terms.

mod classify;
mod double_tree;
mod hps;
mod tree;

pub use classify::{classify_term, ComponentClass, TermClass, TermTag};
pub use double_tree::{double_tree, double_tree_hps, DoubleTree};
pub use hps::{find_hanging_path_system, HangingPathSystem, HPS_NODE_CAP};
pub use tree::{rooted_trees, tree_stats, RootedTree};
