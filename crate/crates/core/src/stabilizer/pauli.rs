use std::fmt;

use crate::graph_state::{Axis, Sign};

/// Pauli operator `i^phase · Π_j X_j^{x_j} Z_j^{z_j}`.
///
/// With this ordering `Y = i·X·Z`, so a Hermitian string carries
/// `phase ≡ #Y (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub(crate) x: Vec<bool>,
    pub(crate) z: Vec<bool>,
    pub(crate) phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            x: vec![false; n],
            z: vec![false; n],
            phase: 0,
        }
    }

    /// Hermitian single-qubit Pauli `±σ_axis` on qubit `q`.
    pub fn single(n: usize, q: usize, axis: Axis, sign: Sign) -> Self {
        let mut p = Self::identity(n);
        match axis {
            Axis::X => p.x[q] = true,
            Axis::Z => p.z[q] = true,
            Axis::Y => {
                p.x[q] = true;
                p.z[q] = true;
                p.phase = 1;
            }
        }
        if sign == Sign::Minus {
            p.phase = (p.phase + 2) % 4;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    /// Power of `i` in front of the `X^x Z^z` product.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    fn y_count(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(&x, &z)| x && z).count()
    }

    /// Sign as a Hermitian operator, `None` when the string is anti-Hermitian.
    pub fn hermitian_sign(&self) -> Option<Sign> {
        match (self.phase as usize + 4 - self.y_count() % 4) % 4 {
            0 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let mut parity = false;
        for j in 0..self.len() {
            parity ^= (self.x[j] & other.z[j]) ^ (self.z[j] & other.x[j]);
        }
        !parity
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut phase = self.phase as u32 + other.phase as u32;
        let mut x = Vec::with_capacity(self.len());
        let mut z = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            // Z^a X^b = (-1)^{ab} X^b Z^a
            if self.z[j] && other.x[j] {
                phase += 2;
            }
            x.push(self.x[j] ^ other.x[j]);
            z.push(self.z[j] ^ other.z[j]);
        }
        Self {
            x,
            z,
            phase: (phase % 4) as u8,
        }
    }

    /// True when `self` and `other` agree up to phase.
    pub fn same_support(&self, other: &Self) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Single-qubit factor on `q`, ignoring phase.
    pub fn axis_at(&self, q: usize) -> Option<Axis> {
        match (self.x[q], self.z[q]) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (true, true) => Some(Axis::Y),
            (false, true) => Some(Axis::Z),
        }
    }

    pub(crate) fn remove_qubit(&mut self, q: usize) {
        debug_assert!(!self.x[q] && !self.z[q]);
        self.x.remove(q);
        self.z.remove(q);
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.hermitian_sign() {
            Some(Sign::Plus) => "+",
            Some(Sign::Minus) => "-",
            None if (self.phase as usize + 4 - self.y_count() % 4) % 4 == 1 => "+i",
            None => "-i",
        };
        f.write_str(sign)?;
        for j in 0..self.len() {
            f.write_str(match self.axis_at(j) {
                None => "I",
                Some(Axis::X) => "X",
                Some(Axis::Y) => "Y",
                Some(Axis::Z) => "Z",
            })?;
        }
        Ok(())
    }
}
