//! Edge classification into `R` (neighbourhood pair dense) and `Q` (most
//! inner edges in `R`), the bad-edge matching check, and empirical checks of
//! the `R`-to-`Q` transfer.

mod classify;
mod matching;
mod transfer;

pub use classify::{classify_edges, ClassRecord, EdgeClassParams, EdgeClassifier};
pub use matching::{bad_edge_matching, Matching, MatchingReport};
pub use transfer::{
    check_linear_transfer, check_neighbourhood_transfer, Hypothesis, TransferParams, TransferReport,
};
