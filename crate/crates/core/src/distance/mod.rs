//! Word-length distance on Z ⋉ Σ: constructive upper-bound words, the
//! displacement lower bound, covering numbers and an exact BFS oracle.

mod bfs;
mod bounds;
mod cover;
mod words;

pub use bfs::{bfs_ball, bfs_distance, BfsLimits, BfsOutcome, NODE_BUDGET_ENV};
pub use bounds::{lower_bound, upper_bound, DistanceBounds};
pub use cover::{covering_number, covering_path, CoverPath};
pub use words::{
    cycle_word, is_generator_simple_path, transposition_word, transposition_word_along,
    upper_bound_word,
};
