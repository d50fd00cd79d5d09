// SPDX-License-Identifier: Apache-2.0

pub mod cli;
pub mod corpus;
pub mod dual;
pub mod error;
pub mod extbound;
pub mod gen;
pub mod io;
pub mod metric;
pub mod moduli;
pub mod report;
pub mod sequences;
pub mod suite;
pub mod transfer;

pub use error::{Error, Result};
