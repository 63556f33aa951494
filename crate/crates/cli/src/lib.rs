//! Text formats shared by the `ainfty` binary and its tests.

pub mod format;
