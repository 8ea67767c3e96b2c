//! The random path model on the extended torus.

pub mod enumerate;
pub mod web;

pub use enumerate::{for_each_web, WebStats};
pub use web::{h_copy, h_from_v, mu_weight, ColouredWeb, End, Path, PathKind, PathWeb};
pub mod checks;
pub use checks::{
    central_quantity, chessboard_check, key_inequality_check, polynomial_expansion_check, verify_lemma_components,
    Aggregate,
};
pub mod rp;
pub use rp::{mu_invariance_check, reflection_positivity_check, RpForm};
