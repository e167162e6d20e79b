//! File formats, reports and the `tetrarotor` command line on top of
//! [`tetrarotor_core`].

pub mod cli;
pub mod config;
pub mod io;
pub mod report;
pub mod svg;

pub use tetrarotor_core;
