pub mod lattice;
pub mod tiling;
pub mod skeleton;
pub mod analysis;
pub mod generators;
pub mod tlr;
pub mod walk;
pub mod io;
pub mod render;
pub mod cli;
