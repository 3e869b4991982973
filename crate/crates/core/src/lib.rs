//! Subtree statistics of finite trees.
//!
//! * [`tree`]: the tree type, edge-list I/O, path segments.
//! * [`families`]: paths, stars, combs, brooms, Bethe trees, caterpillars and
//!   seeded random trees.
//! * [`subtree`]: exact and log-domain rerooting DP for per-vertex counts,
//!   cores, entropy, density and the containment probabilities `p` and `q`.
//! * [`brute`]: exhaustive enumeration used as an independent oracle.
//! * [`profile`]: radius-`r` ball profiles and the `m`-good test.
//! * [`limits`]: closed forms and certified limit constants per family.
//! * [`verify`]: the invariant suite behind `subtrees verify`.
//! * [`experiment`]: convergence tables.

pub mod brute;
pub mod error;
pub mod experiment;
pub mod families;
pub mod limits;
pub mod par;
pub mod profile;
pub mod subtree;
pub mod tree;
pub mod verify;

pub use error::{CapExceeded, ParamError, TreeError};
pub use par::Exec;
pub use subtree::{analyze, analyze_log, analyze_rooted, BigRatio, LogBase, LogStats, SubtreeStats};
pub use tree::{PathSegment, Tree};
