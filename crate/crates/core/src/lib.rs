// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

pub mod entanglement;
pub mod error;
pub mod env;
pub mod linalg;
pub mod lindblad;
pub mod steady;
pub mod sweep;

pub use error::{Error, Result};
