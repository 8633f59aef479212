//! Presentation towers of periodic groups and the machinery to audit them:
//! free-group words over stratified alphabets, the alphabet-tripling
//! construction and its iterated tower, replayable derivation certificates
//! for power relations, exact finite models of the auxiliary groups at
//! exponents 2 and 3, Britton reduction over those models, and rank-0
//! van Kampen diagrams.

pub mod acceptance;
pub mod coset;
pub mod derivation;
pub mod diagrams;
pub mod finite_models;
pub mod hnn;
pub mod perm;
pub mod presentation;
pub mod words;
