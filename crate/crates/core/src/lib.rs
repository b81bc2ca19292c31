//! Numerical machinery for quasi-homogeneous, mixed-norm function spaces on
//! periodic grids: anisotropic distances and dilations, dyadic
//! Littlewood-Paley decompositions driven by an FFT kernel, mixed Lebesgue
//! and Lizorkin-Triebel/Besov quasi-norms, directional and Peetre-type
//! maximal functions, trace and extension operators, and the borderline
//! counterexample family used to probe trace admissibility.
//!
//! The crate is `no_std` + `alloc`; it performs no IO. File formats, random
//! ensembles and the command line live in the companion `anilab-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod aniso;
pub mod counterexample;
pub mod error;
pub mod fft;
pub mod grid;
pub mod lp;
pub mod maximal;
pub mod norms;
pub mod trace;

pub use aniso::{aniso_dilate, aniso_distance, AnisoBall, AnisoBox, AnisotropyVector, Convention};
pub use error::{CoreError, Result};
pub use grid::{Grid, GridField, SpectralBox, SupportCert};

/// Complex sample type used throughout.
pub type C64 = num_complex::Complex64;
