//! Finite, bounded presentations of higher theories.
//!
//! The crate is layered: [`ordcomb`] supplies ordinals, maps and nerves; [`arity`] builds
//! the recursive arity shapes and their decompositions; [`theory`] stores, composes and
//! validates presentations; [`constructions`] and [`graded`] transform them; [`zoo`]
//! collects named examples and the bordism-style bases.

pub mod arity;
pub mod ordcomb;
pub mod theory;

pub mod zoo;
pub mod constructions;
pub mod graded;
