// SPDX-License-Identifier: MIT OR Apache-2.0

pub mod ensemble;
pub mod error;
pub mod io;
pub mod knn;
pub mod metrics;
pub mod profile;
pub mod report;
pub mod segmentation;
pub mod series;
pub mod suss;
pub mod synth;
pub mod validation;
