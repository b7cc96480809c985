//! Graphlets, automorphism orbits, and per-node subgraph counting.

mod atlas;
mod count;

pub use atlas::{Graphlet, GraphletAtlas, MAX_GRAPHLET_SIZE};
pub use count::{ego_graphlet_counts, orbit_counts, OrbitCountTable};
