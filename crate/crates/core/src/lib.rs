pub mod error;
pub mod gamma;
pub mod handle;
pub mod hypfun;
pub mod params;
pub mod qseries;
pub mod quad;
pub mod repr;
pub mod verify;
