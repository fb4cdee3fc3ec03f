pub mod grid;
pub mod overlap;
pub mod validate;
pub mod zeros;
