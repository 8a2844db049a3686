// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! File formats, randomized bound-check campaigns and the `fsqd` command
//! line on top of [`fsqd_core`].

pub mod campaign;
pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod report;

pub use error::FormatError;
