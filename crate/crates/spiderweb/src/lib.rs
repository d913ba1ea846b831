//! File formats, parallel rasters, the standard verification matrices and
//! the command-line front end for `spiderweb-core`.

pub mod cli;
pub mod formats;
pub mod function_file;
pub mod raster;
pub mod suites;

pub use function_file::FunctionFile;
