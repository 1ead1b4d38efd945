//! Set-enriched and finite-category-enriched `n`-theories.
//!
//! A theory answers two questions: which labelled cells sit over an elemental arity and
//! a type, and what a composite along an elemental `(n+1)`-arity is. [`Theory`] is that
//! interface; [`TheoryPresentation`] is the bounded table form. Everything else in this
//! module (general cells, general composites, validation, morphisms) is derived from the
//! two questions through the plans of [`crate::arity`].

mod category;
mod engine;
mod endo;
mod morphism;
mod presentation;
mod validate;

use std::sync::Arc;

use thiserror::Error;

use crate::arity::{ArityError, ArityRef};
use crate::ordcomb::Variance;

pub use category::{enumerate_categories, CategoryArrow, FinCategory};
pub use endo::endo_planar;
pub use engine::{
    cells_at, check_type, compose_general, compose_into, elemental_arities, for_each_fill, mul,
    mul_values, output_cell,
};
pub(crate) use morphism::map_values_with;
pub use morphism::{
    enumerate_morphisms, enumerate_morphisms_with, validate_morphism, CellRef, MorphismOptions,
    TheoryMorphism,
};
pub use presentation::{materialize, CellKey, TheoryPresentation};
pub use validate::{validate_theory, ValidationReport, Violation};

pub type Label = Arc<str>;
/// The components of a general cell, in decomposition order.
pub type Value = Vec<Label>;

/// The label of the unique cell in a trivial stratum and of terminal cells.
pub const POINT: &str = "*";
/// The label of identity arrows in discrete hom categories.
pub const ID: &str = "id";

pub fn label(s: &str) -> Label {
    Arc::from(s)
}

pub fn point() -> Label {
    label(POINT)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("arity {key} exceeds the presentation bound {bound}")]
    BoundExceeded { key: String, bound: usize },
    #[error("missing composition entry for arity {key} at {witness}")]
    MissingComposition { key: String, witness: String },
    #[error("no unit declared for arity {key}")]
    MissingUnit { key: String },
    #[error("ill-typed data: {0}")]
    IllTyped(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(usize),
    #[error("undetermined entry {0}")]
    Pending(usize),
    #[error(transparent)]
    Arity(#[from] ArityError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Enrichment {
    Sets,
    FiniteCategories,
}

impl Enrichment {
    pub fn as_str(self) -> &'static str {
        match self {
            Enrichment::Sets => "sets",
            Enrichment::FiniteCategories => "finite-categories",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sets" => Some(Enrichment::Sets),
            "finite-categories" => Some(Enrichment::FiniteCategories),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Header {
    pub dim: usize,
    pub variance: Variance,
    pub colour_depth: usize,
    pub bound: usize,
    pub enrichment: Enrichment,
}

impl Header {
    /// Cells of dimension `d` are the single point.
    pub fn is_trivial(&self, d: usize) -> bool {
        d + self.colour_depth < self.dim
    }

    pub fn check_bound(&self, a: &ArityRef) -> Result<(), TheoryError> {
        if a.arity.max_index() > self.bound {
            return Err(TheoryError::BoundExceeded { key: a.key.clone(), bound: self.bound });
        }
        Ok(())
    }
}

/// A (possibly lazily computed) theory.
pub trait Theory: Send + Sync {
    fn header(&self) -> Header;

    /// Labels of elemental cells over `a` (of dimension at most `n`) and type `ty`, one
    /// value per position of `a`. Never asked about trivial dimensions.
    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError>;

    /// The composite along the elemental `(n+1)`-arity `a`. `fill` holds the values of all
    /// positions of `a` except the final output position.
    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError>;

    /// The hom category over a top cell; `None` means discrete.
    fn category(&self, _a: &ArityRef, _ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        Ok(None)
    }

    /// The composition functor applied to arrows; `fill` holds type values and arrow
    /// labels at the input positions.
    fn compose_arrows(&self, _a: &ArityRef, _fill: &[Value]) -> Result<Label, TheoryError> {
        Ok(label(ID))
    }
}

impl<T: Theory + ?Sized> Theory for Arc<T> {
    fn header(&self) -> Header {
        (**self).header()
    }
    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        (**self).cells(a, ty)
    }
    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        (**self).compose(a, fill)
    }
    fn category(&self, a: &ArityRef, ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        (**self).category(a, ty)
    }
    fn compose_arrows(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        (**self).compose_arrows(a, fill)
    }
}

impl<T: Theory + ?Sized> Theory for &T {
    fn header(&self) -> Header {
        (**self).header()
    }
    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        (**self).cells(a, ty)
    }
    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        (**self).compose(a, fill)
    }
    fn category(&self, a: &ArityRef, ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        (**self).category(a, ty)
    }
    fn compose_arrows(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        (**self).compose_arrows(a, fill)
    }
}

/// Renders values compactly for reports: positions separated by `;`, components by `,`.
pub fn show_values(values: &[Value]) -> String {
    values
        .iter()
        .map(|v| v.iter().map(|l| l.as_ref()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}
