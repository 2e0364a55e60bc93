pub mod burnside;
pub mod cli;
pub mod coeff;
pub mod complex;
pub mod group;
pub mod linalg;
pub mod theory;
pub mod verify;
