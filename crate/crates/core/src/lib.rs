pub mod bitset;
pub mod cli;
pub mod embed;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod props;
pub mod quality;
pub mod ramsey;
pub mod random;
pub mod regularity;
pub mod report;
