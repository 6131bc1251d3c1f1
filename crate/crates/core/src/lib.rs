//! Musical systems built on Cayley graphs of `Z_n`.
//!
//! A system `(Z_n, s)` with `n = p·q`, `gcd(p, q) = 1`, uses the generators
//! `p` and `q` to define chords (walks on the oriented Cayley graph), a
//! generalized circle of fifths (the orbit of `p + q`), major and minor
//! scales, and consonant/dissonant dichotomies found by exhaustive search
//! over affine isometric involutions of the unoriented graph. Notes are
//! tuned in equal temperament `f0 · s^(k/n)` and can be rendered to WAV.

pub mod audio;
pub mod cayley;
pub mod counterpoint;
pub mod error;
pub mod modular;
pub mod system;

pub use cayley::{is_isometry_by_generators, CayleyGraph, GeneratorSet, Orientation, Path};
pub use counterpoint::{Dichotomy, KPrime, SearchReport};
pub use error::{Error, Result};
pub use modular::{affine_maps, automorphisms, units, AffineMap, Automorphism, ModElement, ModRing};
pub use system::{Chord, ChordQuality, CircleOfFifths, MusicalSystem, NamedChord, Quality, Scale};
