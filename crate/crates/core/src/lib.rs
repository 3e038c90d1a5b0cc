//! Multidegrees of the iterated Kapranov embedding of the moduli space of
//! stable genus-0 curves, computed three ways: lazy tournaments on
//! trivalent trees, column-restricted parking functions, and the asymmetric
//! string-equation recursion.

pub mod composition;
pub mod error;
pub mod kapranov;
pub mod label;
pub mod multidegree;
pub mod parking;
pub mod tournament;
pub mod trees;
pub mod verify;

pub use composition::{weak_compositions, Composition};
pub use error::{Error, Result};
pub use kapranov::{
    boundary_factor_coords, embed_boundary, embed_interior, verify_hyperplanes, EmbeddingCoordinates,
    ExtendedRational, FactorCoordinates, InteriorConfiguration,
};
pub use label::Label;
pub use multidegree::{ktilde, multidegree, rightmost_zero};
pub use parking::{cpf_set, dominance, is_column_restricted, r_map, tau, tau_inverse, ParkingFunction};
pub use tournament::{classify, pi_lazy, pi_lazy_inverse, run_tournament, tour_set, Round, TournamentTranscript};
pub use verify::{verify, Suite, VerifyReport};
pub use trees::{star_tree, BranchView, EdgeId, LabeledTree};
