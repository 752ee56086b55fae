//! δ-core subsampling of finite metric spaces via strong collapses, with the
//! surrounding persistent-homology pipeline: Vietoris-Rips filtrations,
//! ℤ/2 persistence, flag-complex cores, farthest-point sampling, and
//! bottleneck / 1-Wasserstein distances between diagrams.

pub mod cli;
pub mod complexes;
pub mod diagram_distance;
pub mod error;
pub mod generate;
pub mod homology;
pub mod io;
pub mod metric_space;
pub mod subsampling;

pub use complexes::{
    core_reduction_table, flag_core, simplex_count, vr_filtration, Filtration, FlagGraph, ReductionRow, Simplex,
    SimplexCount,
};
pub use diagram_distance::{bottleneck_distance, wasserstein1_distance};
pub use error::{Error, Result};
pub use homology::{betti_numbers, persistent_homology, vr_persistence, Interval, PersistenceDiagram};
pub use metric_space::{delta_from_percentile, neighborhoods, pairwise_distance, Metric, NeighborGraph, PointCloud};
pub use subsampling::{
    delta_core, delta_equivalent, fps_subsample, is_dominated, ActiveSet, CoreResult, Equivalence, Removal,
};
