//! Numerical building blocks: quadrature, special functions, polynomial roots
//! and compensated summation.

pub mod poly;
pub mod quad;
pub mod special;
pub mod sum;
