//! Output formats: density graymaps and CSV tables.

mod csv;
mod pgm;

use std::path::PathBuf;

use thiserror::Error;

pub use self::csv::{
    cost_table_csv, format_g, numeric_csv, runrecord_csv, write_cost_table_csv, write_runrecord_csv, write_text,
    COST_HEADER, RUNRECORD_HEADER,
};
pub use pgm::{
    decode_pgm, density_pixels, encode_pgm, gray_level, read_pgm, write_density_pgm, Graymap, PgmFormat,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
}
