//! Theorization, delooping and the detheorized theory of a colour system.

mod compare;
mod deloop;
mod detheorize;
mod lax;
mod theta;

pub use compare::{compare_presentations, deloop_compare};
pub use detheorize::{detheorize, ColourSystem};
pub use deloop::{deloop, flatten, Deloop, Flattening};
pub use lax::{enumerate_lax_functors, LaxFunctor};
pub use theta::{theta, theta_checked, theta_iter, Theta};
