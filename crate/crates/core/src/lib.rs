//! Link-rewiring strategies for scale-free networks, with the centrality and
//! meso-structure metrics needed to evaluate them and a traffic model that
//! turns structure into capacity numbers.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`graph`] builds or loads an undirected simple graph;
//! 2. [`centrality`] and [`meso`] score it;
//! 3. [`rewiring`] restructures a fraction of its links under one of four
//!    strategies (DPA, DEC, DKBC, CKDBC);
//! 4. [`traffic`] allocates per-node capacity, predicts load analytically and
//!    simulates packet flow;
//! 5. [`experiment`] sweeps the whole thing over seeds and parameter grids
//!    and writes CSV/SVG artifacts.

pub mod centrality;
pub mod error;
pub mod graph;
pub mod meso;
pub mod rewiring;
pub mod traffic;

pub use centrality::{
    assortativity, betweenness, closeness, eigenvector_centrality, pair_correlation,
    scale_correlation, CentralityBundle, PairScores,
};
pub use error::{Error, Result};
pub use graph::{
    degree_distribution, generate_ba, load_edge_list, log_log_tail_slope, parse_edge_list,
    DegreeDistribution, Graph, LoadReport,
};
pub use meso::{
    core_periphery_coefficient, kcore_closeness, kcore_degree, pattern_correlation,
    rich_club_profile, CoreBasis, CorePartition, RichClubProfile,
};
pub use rewiring::{rewire, Rejection, RewireConfig, RewireReport, Strategy};
pub use traffic::{
    allocate_capacity, analytic_load, critical_rate, expected_inflow, node_utilization,
    packet_simulate, GenerationMode, LoadTrace, RoutingTable, SimTrace, TrafficParams,
    UtilizationProfile,
};
