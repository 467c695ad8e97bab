//! Exact monodromy of GKZ hypergeometric systems attached to toric
//! Calabi-Yau complete intersections, and the cohomological actions of the
//! Fourier-Mukai kernels they are matched with.
//!
//! All arithmetic is over arbitrary-precision rationals. Cohomology classes
//! are stored with the factor `2πi` absorbed, so exponentials of classes are
//! finite rational sums.

pub mod chowring;
pub mod exactlat;
pub mod fmkernel;
pub mod gkzseries;
pub mod mirrorlab;
pub mod monodromy;
pub mod poly;
pub mod series;
pub mod triangulate;
