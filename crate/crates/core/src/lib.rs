//! Corpus analytics for second-person morphosyntactic variation in
//! Brazilian Portuguese: token-pattern extraction over annotated
//! transcripts, per-speaker usage profiles, and the statistics used to
//! relate them to dialect groupings (rank correlation, association tests,
//! k-medoids clustering, PCA).

pub mod clustering;
pub mod corpus;
pub mod matcher;
pub mod multivariate;
pub mod profiles;
pub mod stats;
pub mod synth;
pub mod variables;
