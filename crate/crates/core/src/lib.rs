pub mod bsl;
pub mod catalog;
pub mod cubic;
pub mod engine;
pub mod format;
pub mod genre;
pub mod grid;
pub mod orientation;
pub mod outcome;
pub mod transform;
