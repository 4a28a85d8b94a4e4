//! Reeb graphs of PL Morse functions on triangulated surfaces and the
//! homotopy types of their stabilizers and orbits.

pub mod analysis;
pub mod corpus;
pub mod graphaut;
pub mod homology;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod orbitcalc;
pub mod plmorse;
pub mod reeb;
pub mod report;
pub mod surface;
pub mod value;
