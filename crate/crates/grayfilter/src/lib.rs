//! File formats, threaded execution, pipelines and the command-line front
//! end for [`grayfilter_core`].

pub mod bench;
pub mod cli;
mod error;
pub mod fsio;
pub mod pgm;
pub mod pipeline;
pub mod text;
pub mod threads;

pub use crate::error::{Error, Result};
pub use crate::pgm::{read_pgm, write_pgm, PgmError, PgmFormat};
pub use crate::pipeline::{run_pipeline, Op, PipelineSpec};
pub use crate::text::{histogram_csv, parse_kernel, parse_lut, TextError};
pub use crate::threads::Threaded;
