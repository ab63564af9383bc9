//! Exact construction and verification of Hopf categories built from
//! comonoidal functors and families of adapted cocommutative comonoids.

#![allow(clippy::needless_range_loop)]

pub mod backend;
pub mod coalg;
pub mod cofunctor;
pub mod deform;
pub mod error;
pub mod group;
pub mod hopfcat;
pub mod instance;
pub mod liebialg;
pub mod matrix;
pub mod morphism;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod verdict;

pub use error::{Error, Result};
pub use scalar::{HSeries, Rational, Scalar};

pub type QMatrix = matrix::Matrix<Rational>;
pub type HMatrix<const K: usize> = matrix::Matrix<HSeries<K>>;
pub type QMorphism = morphism::Morphism<Rational>;
pub type HMorphism<const K: usize> = morphism::Morphism<HSeries<K>>;
pub type QComonoid = coalg::Comonoid<Rational>;
pub type QHopfCategory = hopfcat::HopfCategoryData<Rational>;
