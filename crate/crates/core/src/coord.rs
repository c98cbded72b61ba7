use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest lattice extent, in rows and in columns.
pub const MAX_LATTICE_DIM: u32 = 121;

/// Zero-based `[row, column]` position on the qubit lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub row: u32,
    pub col: u32,
}

impl Coord {
    pub const fn new(row: u32, col: u32) -> Self {
        Self { row, col }
    }

    pub fn in_bounds(self) -> bool {
        self.row < MAX_LATTICE_DIM && self.col < MAX_LATTICE_DIM
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.row, self.col)
    }
}

impl From<(u32, u32)> for Coord {
    fn from((row, col): (u32, u32)) -> Self {
        Self { row, col }
    }
}
