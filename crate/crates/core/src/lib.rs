//! Exact computations with basic algebras presented by quivers with relations
//! over small finite fields.
//!
//! The crate builds a finite-dimensional algebra `Λ = kQ/I` from a small text
//! presentation (see [`presentations`]), completes the relation ideal into a
//! confluent rewriting system on path monomials ([`rewriting`]), and then works
//! with finite-dimensional left `Λ`-modules given as matrix representations of
//! the quiver ([`repmod`]).  On top of that sit homological operations — Hom
//! spaces, projective covers, syzygies, Ext groups, stable Hom and
//! `Ω²`-periodicity ([`homology`]) — an exhaustive classifier for modules with
//! endomorphism ring `k` ([`classifier`]), and a truncated-lift deformation
//! engine with a symbolic deformation-ring classifier ([`deformation`]).
//!
//! Everything is exact: scalars live in `GF(p^e)` (see [`linalg`]) and no
//! tolerances appear anywhere.  All values are immutable after construction
//! and all operations are pure functions, so everything can be shared freely
//! across threads.
//!
//! The crate is `no_std` (with `alloc`); IO, JSON and the command line live in
//! the companion `blockforge` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod classifier;
pub mod deformation;
pub mod homology;
pub mod linalg;
pub mod presentations;
pub mod repmod;
pub mod rewriting;
