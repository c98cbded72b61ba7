//! The 24-element single-qubit Clifford group, modulo global phase.
//!
//! An element is fixed by the signed Paulis it sends `X` and `Z` to. The
//! canonical index is `4 * ix + iz` where
//!
//! ```text
//! ix : image of X   0:+X  1:-X  2:+Y  3:-Y  4:+Z  5:-Z
//! iz : image of Z   the two axes other than image-of-X, taken in the
//!                   order Z, Y, X, each with + then -
//! ```
//!
//! so index 0 is the identity (X→+X, Z→+Z) and the Hadamard (X→+Z, Z→+X)
//! is index 18.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::pauli::PauliString;
use crate::graph_state::{Axis, Sign};

const X_IMAGES: [(Axis, Sign); 6] = [
    (Axis::X, Sign::Plus),
    (Axis::X, Sign::Minus),
    (Axis::Y, Sign::Plus),
    (Axis::Y, Sign::Minus),
    (Axis::Z, Sign::Plus),
    (Axis::Z, Sign::Minus),
];

const Z_AXIS_ORDER: [Axis; 3] = [Axis::Z, Axis::Y, Axis::X];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocalClifford(u8);

impl LocalClifford {
    pub const IDENTITY: LocalClifford = LocalClifford(0);
    /// X ↔ Z.
    pub const HADAMARD: LocalClifford = LocalClifford(18);

    pub fn all() -> impl Iterator<Item = LocalClifford> {
        (0..24).map(LocalClifford)
    }

    pub fn from_index(index: u8) -> Option<Self> {
        (index < 24).then_some(LocalClifford(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Element with the given images of X and Z; `None` if they commute.
    pub fn from_images(x: (Axis, Sign), z: (Axis, Sign)) -> Option<Self> {
        let ix = X_IMAGES.iter().position(|&p| p == x)?;
        let iz = Z_AXIS_ORDER
            .iter()
            .filter(|&&a| a != x.0)
            .position(|&a| a == z.0)?;
        let iz = 2 * iz + usize::from(z.1 == Sign::Minus);
        Some(LocalClifford((4 * ix + iz) as u8))
    }

    pub fn image_of_x(self) -> (Axis, Sign) {
        X_IMAGES[self.0 as usize / 4]
    }

    pub fn image_of_z(self) -> (Axis, Sign) {
        let x_axis = self.image_of_x().0;
        let iz = self.0 as usize % 4;
        let axis = Z_AXIS_ORDER
            .iter()
            .copied()
            .filter(|&a| a != x_axis)
            .nth(iz / 2)
            .unwrap();
        let sign = if iz.is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
        (axis, sign)
    }

    /// Phase S: X → Y, Z → Z.
    pub fn phase() -> Self {
        Self::from_images((Axis::Y, Sign::Plus), (Axis::Z, Sign::Plus)).unwrap()
    }

    /// S†: X → −Y, Z → Z. Sends Y to X.
    pub fn phase_dagger() -> Self {
        Self::from_images((Axis::Y, Sign::Minus), (Axis::Z, Sign::Plus)).unwrap()
    }

    pub fn pauli(axis: Axis) -> Self {
        let flip = |a: Axis| if a == axis { Sign::Plus } else { Sign::Minus };
        Self::from_images((Axis::X, flip(Axis::X)), (Axis::Z, flip(Axis::Z))).unwrap()
    }

    /// Conjugates qubit `q` of `p`: `p ↦ C p C†`.
    pub fn conjugate(self, p: &mut PauliString, q: usize) {
        let (x, z) = (p.x[q], p.z[q]);
        let n = p.len();
        let img = |(axis, sign)| PauliString::single(n, q, axis, sign);
        let mut factor = PauliString::identity(n);
        if x {
            factor = factor.mul(&img(self.image_of_x()));
        }
        if z {
            factor = factor.mul(&img(self.image_of_z()));
        }
        p.x[q] = factor.x[q];
        p.z[q] = factor.z[q];
        p.phase = (p.phase + factor.phase) % 4;
    }

    /// Image of a single-qubit Hermitian Pauli.
    fn apply(self, (axis, sign): (Axis, Sign)) -> (Axis, Sign) {
        let mut p = PauliString::single(1, 0, axis, sign);
        self.conjugate(&mut p, 0);
        let axis = p.axis_at(0).expect("Clifford maps Paulis to Paulis");
        (axis, p.hermitian_sign().expect("Hermitian image"))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(self, first: LocalClifford) -> LocalClifford {
        let x = self.apply(first.image_of_x());
        let z = self.apply(first.image_of_z());
        LocalClifford::from_images(x, z).expect("composition of Cliffords")
    }

    pub fn inverse(self) -> LocalClifford {
        LocalClifford::all()
            .find(|c| c.after(self) == LocalClifford::IDENTITY)
            .expect("group element has an inverse")
    }
}

impl fmt::Display for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |(a, s): (Axis, Sign)| {
            format!("{}{:?}", if s == Sign::Plus { '+' } else { '-' }, a)
        };
        write!(
            f,
            "C{}[X→{}, Z→{}]",
            self.0,
            show(self.image_of_x()),
            show(self.image_of_z())
        )
    }
}
