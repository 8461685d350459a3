pub mod bundles;
pub mod catalog;
pub mod cli;
pub mod constructible;
pub mod error;
pub mod par;
pub mod ring;
pub mod specialize;
pub mod verify;
