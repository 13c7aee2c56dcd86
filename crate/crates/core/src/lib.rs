//! γ-balanced independent sets in sparse random bipartite graphs.
//!
//! A subset `I ⊆ L ∪ R` of a bipartite graph is *γ-balanced* when
//! `| |I ∩ L| − γ|I| | < 1`. This crate samples `G^bip_{n,d}`, computes exact
//! optima on small instances, runs local and degree-1 polynomial algorithms,
//! probes stability along interpolation paths and evaluates the first-moment
//! phase diagram.
//!
//! ```
//! use bipbis::{max_gamma_balanced_is, sample_bipartite_graph, RandomSeed};
//!
//! let g = sample_bipartite_graph(10, 3.0, RandomSeed::new(7, 0)).unwrap();
//! let best = max_gamma_balanced_is(&g, 0.5).unwrap();
//! assert!(best.witness.is_independent(&g));
//! ```

pub mod analysis;
pub mod balance;
pub mod error;
pub mod exact;
pub mod graph;
pub mod local;
pub mod lowdeg;
pub mod ogp;
pub mod rng;
pub mod stats;
pub mod subset;

pub use analysis::{
    algorithmic_threshold, classify_phase, d_min, existence_threshold, first_moment_exponent, predicted_easy_point,
    ExponentReport, Phase, PhasePoint, Sign,
};
pub use balance::{is_balanced_counts, trim_counts};
pub use error::{Error, Result};
pub use exact::{
    is_gamma_balanced, max_gamma_balanced_is, max_joint_intersection, pareto_profile, BalancedSolution, ExactSolver,
    ParetoProfile, ProfileEntry,
};
pub use graph::{
    edge_index, edge_index_roundtrip, neighborhood, sample_bipartite_graph, BipartiteGraph, EdgeCoordinate,
    Neighborhood, Side, VertexId,
};
pub use local::{
    alpha_value, apply_local_pair, apply_with_labels, concentration_probe, estimate_gw_expectation, gamma_trim,
    one_local_pair, run_local_trial, Ball, GaltonWatsonTree, LocalFunctionPair, VertexLabels,
};
pub use lowdeg::{
    check_optimization, degree1_polynomial, lowdeg_targets, norm_second_moment, round_polynomial, ConstantPolynomial,
    Degree1Polynomial, Eta, GraphPolynomial, OptimizationReport, OptimizationTarget, PolynomialOutput, RoundingOutcome,
};
pub use ogp::{
    balance_inequality_probe, build_interpolation_path, check_forbidden_structure, detect_c_bad_edges,
    greedy_overlap_sequence, stability_trial, ForbiddenStructureParams, ForbiddenVerdict, InterpolationPath,
    LocalAlgorithmFunction, StabilityConfig, StabilityReport,
};
pub use rng::RandomSeed;
pub use stats::{wilson_interval, MeanEstimate};
pub use subset::VertexSubset;
