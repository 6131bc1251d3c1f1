//! Residue arithmetic in `Z_n`, the unit group `U(n)`, automorphisms
//! `x ↦ h·x` and affine maps `x ↦ h·x + w`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The ring `Z_n` for a fixed modulus `n ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct ModRing {
    n: u32,
}

impl ModRing {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::ModulusTooSmall(n));
        }
        Ok(Self { n })
    }

    pub fn modulus(self) -> u32 {
        self.n
    }

    /// Reduces any integer into `[0, n)`.
    pub fn reduce(self, value: i64) -> u32 {
        value.rem_euclid(i64::from(self.n)) as u32
    }

    pub fn element(self, value: i64) -> ModElement {
        ModElement {
            ring: self,
            value: self.reduce(value),
        }
    }

    pub fn zero(self) -> ModElement {
        self.element(0)
    }

    pub fn elements(self) -> impl Iterator<Item = ModElement> {
        (0..self.n).map(move |value| ModElement { ring: self, value })
    }

    pub(crate) fn add_raw(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.n)) as u32
    }

    pub(crate) fn mul_raw(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.n)) as u32
    }

    pub(crate) fn neg_raw(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    pub fn is_unit(self, h: u32) -> bool {
        gcd(u64::from(h % self.n), u64::from(self.n)) == 1
    }

    fn check(self, other: ModRing) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl TryFrom<u32> for ModRing {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        ModRing::new(n)
    }
}

impl From<ModRing> for u32 {
    fn from(ring: ModRing) -> u32 {
        ring.n
    }
}

impl fmt::Display for ModRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.n)
    }
}

/// A residue class, always stored canonically in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModElement {
    ring: ModRing,
    value: u32,
}

#[allow(clippy::should_implement_trait)]
impl ModElement {
    pub fn ring(self) -> ModRing {
        self.ring
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn add(self, other: ModElement) -> Result<ModElement> {
        self.ring.check(other.ring)?;
        Ok(self.with(self.ring.add_raw(self.value, other.value)))
    }

    /// `a ⊖ b`, i.e. `a ⊕ (n − b)`.
    pub fn sub(self, other: ModElement) -> Result<ModElement> {
        self.ring.check(other.ring)?;
        Ok(self.with(self.ring.add_raw(self.value, self.ring.neg_raw(other.value))))
    }

    pub fn mul(self, other: ModElement) -> Result<ModElement> {
        self.ring.check(other.ring)?;
        Ok(self.with(self.ring.mul_raw(self.value, other.value)))
    }

    pub fn neg(self) -> ModElement {
        self.with(self.ring.neg_raw(self.value))
    }

    fn with(self, value: u32) -> ModElement {
        ModElement {
            ring: self.ring,
            value,
        }
    }
}

impl fmt::Display for ModElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `U(n) = { k : gcd(k, n) = 1 }`, ascending.
pub fn units(ring: ModRing) -> Vec<u32> {
    (1..ring.n).filter(|&k| ring.is_unit(k)).collect()
}

/// The multiplication map `x ↦ h·x` for a unit `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    ring: ModRing,
    multiplier: u32,
}

impl Automorphism {
    pub fn new(ring: ModRing, h: i64) -> Result<Self> {
        let multiplier = ring.reduce(h);
        if !ring.is_unit(multiplier) {
            return Err(Error::NotAUnit {
                h: multiplier,
                n: ring.n,
            });
        }
        Ok(Self { ring, multiplier })
    }

    /// `x ↦ (n − 1)·x`, i.e. negation.
    pub fn negation(ring: ModRing) -> Self {
        Self {
            ring,
            multiplier: ring.n - 1,
        }
    }

    pub fn identity(ring: ModRing) -> Self {
        Self { ring, multiplier: 1 }
    }

    pub fn ring(self) -> ModRing {
        self.ring
    }

    pub fn multiplier(self) -> u32 {
        self.multiplier
    }

    pub fn apply_raw(self, x: u32) -> u32 {
        self.ring.mul_raw(self.multiplier, x)
    }

    pub fn apply(self, x: ModElement) -> Result<ModElement> {
        self.ring.check(x.ring)?;
        Ok(x.with(self.apply_raw(x.value)))
    }

    pub fn as_affine(self) -> AffineMap {
        AffineMap {
            ring: self.ring,
            multiplier: self.multiplier,
            offset: 0,
        }
    }
}

/// One automorphism per unit, ordered by multiplier.
pub fn automorphisms(ring: ModRing) -> Vec<Automorphism> {
    units(ring)
        .into_iter()
        .map(|multiplier| Automorphism { ring, multiplier })
        .collect()
}

/// `x ↦ h·x ⊕ w` with `h ∈ U(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    ring: ModRing,
    multiplier: u32,
    offset: u32,
}

impl AffineMap {
    pub fn new(ring: ModRing, h: i64, w: i64) -> Result<Self> {
        let auto = Automorphism::new(ring, h)?;
        Ok(Self {
            ring,
            multiplier: auto.multiplier,
            offset: ring.reduce(w),
        })
    }

    pub fn identity(ring: ModRing) -> Self {
        Automorphism::identity(ring).as_affine()
    }

    pub fn translation(ring: ModRing, w: i64) -> Self {
        Self {
            ring,
            multiplier: 1,
            offset: ring.reduce(w),
        }
    }

    pub fn ring(self) -> ModRing {
        self.ring
    }

    pub fn multiplier(self) -> u32 {
        self.multiplier
    }

    pub fn offset(self) -> u32 {
        self.offset
    }

    pub fn linear_part(self) -> Automorphism {
        Automorphism {
            ring: self.ring,
            multiplier: self.multiplier,
        }
    }

    pub fn apply_raw(self, x: u32) -> u32 {
        self.ring
            .add_raw(self.ring.mul_raw(self.multiplier, x), self.offset)
    }

    pub fn apply(self, x: ModElement) -> Result<ModElement> {
        self.ring.check(x.ring)?;
        Ok(x.with(self.apply_raw(x.value)))
    }

    /// `self ∘ inner`: multiplier `h₁h₂`, offset `h₁w₂ + w₁`.
    pub fn compose(self, inner: AffineMap) -> Result<AffineMap> {
        self.ring.check(inner.ring)?;
        let r = self.ring;
        Ok(AffineMap {
            ring: r,
            multiplier: r.mul_raw(self.multiplier, inner.multiplier),
            offset: r.add_raw(r.mul_raw(self.multiplier, inner.offset), self.offset),
        })
    }

    pub fn is_identity(self) -> bool {
        self.multiplier == 1 % self.ring.n && self.offset == 0
    }

    /// `T² = Id` iff `h² ≡ 1` and `(h + 1)·w ≡ 0 (mod n)`.
    pub fn is_involution(self) -> bool {
        let r = self.ring;
        r.mul_raw(self.multiplier, self.multiplier) == 1
            && r.mul_raw(r.add_raw(self.multiplier, 1), self.offset) == 0
    }

    pub fn fixed_points(self) -> Vec<u32> {
        (0..self.ring.n).filter(|&x| self.apply_raw(x) == x).collect()
    }

    pub fn image<'a>(self, set: impl IntoIterator<Item = &'a u32>) -> Vec<u32> {
        let mut out: Vec<u32> = set.into_iter().map(|&x| self.apply_raw(x)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x+{} (mod {})", self.multiplier, self.offset, self.ring.n)
    }
}

/// Every affine map over the ring, ordered by `(multiplier, offset)`.
pub fn affine_maps(ring: ModRing) -> impl Iterator<Item = AffineMap> {
    units(ring).into_iter().flat_map(move |multiplier| {
        (0..ring.n).map(move |offset| AffineMap {
            ring,
            multiplier,
            offset,
        })
    })
}
