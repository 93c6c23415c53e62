//! Classification of real group orbits on real loci of symmetric spaces.
//!
//! The orbits of `G(R)` on `X(R)` are in bijection with the orbits of a
//! finite group acting on the torsion points `T1 ∩ H` of a split torus by
//! *twisted* conjugation `s ↦ n s n⁻¹ · c(n)`. This crate models that action
//! in additive coordinates over products of cyclic groups and enumerates its
//! orbits exactly.
//!
//! * [`abelian`]: finite abelian groups `∏ Z/mᵢ`, subgroups, 2-torsion,
//!   squares and quotients.
//! * [`action`]: monomial affine ("twisted") generators and the orbit engine.
//! * [`families`]: the built-in `SL_n / SO_{p,q}` family, the untwisted
//!   comparison actions and the JSON spec-file loader.
//! * [`slice`]: square roots, the slice action on 4-torsion points and
//!   quadratic form signatures.
//! * [`cli`]: the command-line front end and report layer.

pub mod abelian;
pub mod action;
pub mod cli;
mod codes;
mod error;
pub mod families;
pub mod slice;

pub use abelian::{GroupElement, Quotient, SubgroupSpec, TorsionGroup, DEFAULT_LIMIT};
pub use action::{
    Engine, Orbit, OrbitOptions, OrbitSet, TwistedAction, TwistedGenerator, ValidationReport,
};
pub use error::{Error, Result};
pub use families::{FamilyKind, FamilySpec, Mode};
pub use slice::{SignaturePair, Slice, SlicePoint};
