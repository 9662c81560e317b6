//! Maurer–Cartan higher products for truncated free commutative differential
//! graded algebras over ℚ.

pub mod acceptance;
pub mod cdga;
pub mod cli;
pub mod dgla;
pub mod fibrations;
pub mod files;
pub mod linalg;
pub mod models;
pub mod parse;
pub mod products;
pub mod sampling;
pub mod tensor;
