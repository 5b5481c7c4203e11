//! Colourings, the arrow relation and the size-Ramsey witness calculator.

mod arrows;
mod colouring;
mod iso;
mod witness;

pub use arrows::{
    arrows_exhaustive, verify_escape, ArrowsOptions, ArrowsOutcome, ArrowsReport, ARROWS_EDGE_LIMIT,
};
pub use colouring::{
    colour_class, colour_edges, majority_subgraph, monochromatic_c4_count, Colour, Colouring,
    Strategy,
};
pub use iso::{is_embedding, parse_pattern, subgraph_contains, PATTERN_LIMIT};
pub use witness::{
    default_density_constant, loglog_slope, size_ramsey_witness, SizeRamseyWitness, WITNESS_N_LIMIT,
};
