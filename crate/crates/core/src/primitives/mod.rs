//! Distributed building blocks shared by the algorithms.

pub mod aggregate;
pub mod bfs;
pub mod broadcast;
pub mod paths;
pub mod rename;
pub mod selector;

pub use aggregate::{all_reduce, convergecast, downcast, EdgeWord, NodeWord, Ranked, Word};
pub use bfs::{bfs_forest, bfs_tree, truncated_bfs, BfsTree};
pub use broadcast::broadcast;
pub use paths::{collect_root_paths, Hop, PathMsg, RootPath};
pub use rename::{rename_edges, Renaming};
pub use selector::{Mask, Selector, SubgraphSelector};
