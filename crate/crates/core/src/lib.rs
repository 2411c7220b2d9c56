pub mod cli;
pub mod error;
pub mod exact;
pub mod fuchsian;
pub mod hyperfun;
pub mod ladder;
pub mod liealg;
pub mod oracle;
pub mod radial;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
