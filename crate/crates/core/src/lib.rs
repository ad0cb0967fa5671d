// Copyright 2026 The nvsense Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

pub mod commands;
pub mod config;
pub mod constants;
pub mod diamond;
pub mod electrolyte;
pub mod error;
pub mod numeric;
pub mod pipeline;
pub mod nv_spin;
pub mod stochastic_oracle;

#[cfg(test)]
mod properties;

pub use error::{Error, Result};
