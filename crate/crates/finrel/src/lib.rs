//! Bounded relational semantics over finiteness-space webs.
//!
//! The library implements a desk-scale model of typed λ-calculi with
//! products, lifted sums, and lazy recursive algebraic datatypes in the
//! co-Kleisli category of the finite-multiset exponential over sets and
//! relations, together with decision procedures for finitarity of
//! symbolically described subsets.
//!
//! Everything is computed on bounded slices: webs are enumerated up to a
//! structural size bound, multirelations are materialized as their bounded
//! slices, and infinite multirelations (iterators, fixpoint approximants)
//! are represented by generators that pair a membership test with a
//! size-bounded enumerator.
//!
//! Start from the runnable examples (`cargo run --example tree_example`),
//! or from the `finrel` binary for the batch command-line surface.

pub mod point;
pub mod web;

pub mod rel;

pub mod datatypes;

pub mod finstruct;

pub mod orders;

pub mod semantics;

pub mod frontend;

pub mod cli;

pub use point::{Multiset, Name, Point};
pub use web::{Signature, SortDecl, WebExpr};
