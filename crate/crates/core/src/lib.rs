//! Exact spectral bounds for generalized Johnson graphs.
//!
//! The graph G(n,k,L) has the k-subsets of an n-element ground set as
//! vertices, with edges exactly between pairs whose intersection size is
//! *not* in L. Everything here works over arbitrary-precision rationals:
//! the association-scheme linear program for the Lovasz and
//! Schrijver/Delsarte bounds, closed forms and leading-order constants for
//! their growth in n, and small explicit graphs with a ground-truth
//! independence number to check the bounds against.

pub mod asympt;
pub mod combinat;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod scheme;

pub use combinat::LSpec;
pub use error::{Error, Result};
pub use rational::{Int, Rational};
