//! Path covers of trees and sparse graphs, L(2,1)-labelings of their
//! complements, and uniqueness of island sequences.
//!
//! ```
//! use treecover::{tree_path_cover, Graph};
//!
//! let t = Graph::spider(&[1, 1, 2]);
//! assert_eq!(tree_path_cover(&t).unwrap().count, 2);
//! ```

pub mod error;
pub mod generate;
pub mod graph;
pub mod island;
pub mod labeling;
pub mod oracle;
pub mod path_cover;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Graph, GraphStats, Shape, Vine};
pub use island::{
    certify_family_membership, duis, make_labeled_generalized_star, make_labeled_path,
    random_family_tree, ConstructionScript, DuisVerdict, FamilyBudget, LabeledTree, Mark,
};
pub use labeling::{
    islands_of, labeling_from_cover, lambda_rho_of_complement, lambda_rho_of_complement_with,
    lambda_rho_of_expansion_complement, validate_l21, ComplementInvariants, ComplementLambda,
    CoverSource, IslandSequence, L21Violation, Labeling,
};
pub use oracle::{
    enumerate_trees, oracle_lambda, oracle_min_cover, oracle_path_cover, oracle_rho, prufer_decode,
    prufer_encode, random_tree, sequence_set, OracleBudget, OracleCover, SequenceSet,
};
pub use path_cover::{
    expand_tree, expansion_path_cover, is_2_sparse, is_general_2_sparse, leaf_bounds,
    light_neighbor_formula, three_light_formula, tree_path_cover, PathCovering, PathSequence,
    TreeCover,
};
