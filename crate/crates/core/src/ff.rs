//! Arithmetic in prime fields `F_p` with `p <= 255`.
//!
//! Elements are plain `u8` residues in canonical form `0..p`. The modulus
//! lives in a [`PrimeField`] context which also owns the table of inverses,
//! so every operation is a couple of integer instructions and a lookup.

use thiserror::Error;

/// A canonical residue. Always strictly below the modulus of the field it
/// was produced by.
pub type Residue = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not a prime in 2..=255")]
    NotPrime(u32),
    #[error("attempted to invert zero")]
    ZeroInversion,
}

/// The prime field `F_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u8,
    inverses: Box<[u8]>,
}

impl std::fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p > 255 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let mut inverses = vec![0u8; p as usize];
        for a in 1..p {
            // p is tiny, so a linear search per element is fine.
            let b = (1..p).find(|b| a * b % p == 1).expect("prime modulus");
            inverses[a as usize] = b as u8;
        }
        Ok(PrimeField {
            p: p as u8,
            inverses: inverses.into_boxed_slice(),
        })
    }

    #[inline]
    pub fn modulus(&self) -> u8 {
        self.p
    }

    /// Reduces an arbitrary integer into canonical form.
    #[inline]
    pub fn reduce(&self, v: i64) -> Residue {
        v.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a as u16 + b as u16;
        let p = self.p as u16;
        (if s >= p { s - p } else { s }) as u8
    }

    #[inline]
    pub fn neg(&self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn inv(&self, a: Residue) -> Result<Residue, FieldError> {
        if a == 0 {
            Err(FieldError::ZeroInversion)
        } else {
            Ok(self.inverses[a as usize])
        }
    }

    #[inline]
    pub fn div(&self, a: Residue, b: Residue) -> Result<Residue, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(&self, e: usize) -> Residue {
        if e.is_multiple_of(2) {
            1
        } else {
            self.neg(1)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Residue> {
        0..self.p
    }
}
