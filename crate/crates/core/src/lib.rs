//! Core algorithms for tracking solar events (active regions and coronal
//! holes) across SDO-style image sequences.
//!
//! The crate is `no_std`-compatible (`--no-default-features`; `alloc` is
//! required) and holds everything that does not touch the filesystem or
//! network:
//!
//! - [`geometry`] — axis-aligned box arithmetic, polygon rasterization, and
//!   the maximal inscribed box used for chain-code labels.
//! - [`metrics`] — per-frame overlap metrics (IoU, IoGT, ATB) and the
//!   sequence aggregates (F-score, AF1, OTA).
//! - [`solarcoord`] — helioprojective-Cartesian ↔ pixel conversion and
//!   solar-limb containment tests.
//! - [`image`] — the grayscale pixel buffer shared by every module.
//! - [`dataset`] — event records, track grouping, timestamp sampling,
//!   annotation encoding, and label construction.
//! - [`synthgen`] — deterministic synthetic solar-disk sequences with dense
//!   ground truth.
//! - [`trackers`] — the tracker contract plus static and
//!   cross-correlation baselines.
//! - [`regnet`] — the two-branch convolutional regression tracker, its
//!   offline training loop, and its checkpoint format.
//!
//! File formats, the ingest clients, and the experiment harness live in the
//! companion `heliotrack` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dataset;
pub mod geometry;
pub mod image;
mod math;
pub mod metrics;
pub mod regnet;
pub mod rng;
pub mod solarcoord;
pub mod synthgen;
pub mod trackers;

pub use geometry::BBox;
pub use image::Image;
