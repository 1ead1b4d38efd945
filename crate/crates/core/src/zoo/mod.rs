//! Named example theories and the bases of graded 1-theories with several outputs.

mod base;
mod basic;
mod bgraded;
mod monoidal;
mod properad;
mod zc;

pub use base::{bord1_skeleton, cocorr_fin_skeleton, is_tail, BaseError, BaseMorphism, BasePresentation, Component, End, Glued, Restriction};
pub use basic::{
    assoc_operad, category_theory, commutative_operad, discrete_category, init_operad, order_label, parse_order,
    terminal_theory, walking_arrow, Assoc, CategoryTheory, Commutative, Discrete, Terminal, Truth,
};
pub use bgraded::{
    bgraded_validate, compose_labelled, field_theories, identity_labelled, materialize_bgraded, terminal_bgraded,
    BGradedError, BGradedOneTheory, BGradedSource, CompositeKey, FieldTheory, Labelled, Typed,
};
pub use monoidal::{cyclic_group, monoidal_theory, MonoidalCategory, MonoidalError, MonoidalTheory};
pub use properad::{properad_adapter, properad_from_graded, AssocProperad, ColouredProperad, ProperadGraph};
pub use zc::{hochschild_classes, zc_build, CircleValue};
