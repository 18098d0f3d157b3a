//! Published column-weight-4 exponent matrices, stored as the 3 x (n-1)
//! lower-right blocks of normalized 4 x n matrices (first row and column zero).

use std::fmt;
use std::str::FromStr;

use crate::matrix::ExponentMatrix;
use crate::profile::ProfileName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    G6N5,
    G6N6,
    G6N7,
    G8N5,
    G8N6,
    G8N7,
}

const G6N5: [&[u32]; 3] = [&[1, 3, 7, 11], &[4, 12, 2, 5], &[10, 4, 5, 6]];
const G6N6: [&[u32]; 3] = [&[4, 7, 8, 15, 17], &[9, 11, 6, 10, 14], &[13, 14, 2, 5, 3]];
const G6N7: [&[u32]; 3] = [
    &[2, 3, 4, 9, 14, 17],
    &[10, 6, 15, 18, 19, 16],
    &[13, 18, 10, 12, 16, 1],
];
const G8N5: [&[u32]; 3] = [&[1, 4, 11, 29], &[2, 8, 17, 22], &[14, 35, 33, 9]];
const G8N6: [&[u32]; 3] = [&[1, 13, 16, 33, 39], &[2, 7, 11, 21, 29], &[4, 58, 22, 56, 14]];
const G8N7: [&[u32]; 3] = [
    &[1, 4, 13, 30, 40, 45],
    &[2, 8, 22, 33, 56, 75],
    &[14, 48, 67, 85, 25, 83],
];

impl Fixture {
    pub const ALL: [Fixture; 6] = [
        Fixture::G6N5,
        Fixture::G6N6,
        Fixture::G6N7,
        Fixture::G8N5,
        Fixture::G8N6,
        Fixture::G8N7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::G6N5 => "table1-g6-n5",
            Fixture::G6N6 => "table1-g6-n6",
            Fixture::G6N7 => "table1-g6-n7",
            Fixture::G8N5 => "table1-g8-n5",
            Fixture::G8N6 => "table1-g8-n6",
            Fixture::G8N7 => "table1-g8-n7",
        }
    }

    pub fn lift(self) -> u32 {
        match self {
            Fixture::G6N5 => 13,
            Fixture::G6N6 => 18,
            Fixture::G6N7 => 21,
            Fixture::G8N5 => 41,
            Fixture::G8N6 => 63,
            Fixture::G8N7 => 91,
        }
    }

    /// Girth the fixture is published with.
    pub fn girth(self) -> usize {
        match self {
            Fixture::G6N5 | Fixture::G6N6 | Fixture::G6N7 => 6,
            _ => 8,
        }
    }

    pub fn profile(self) -> ProfileName {
        if self.girth() == 6 {
            ProfileName::Girth6EtsFree
        } else {
            ProfileName::Girth8EtsFree
        }
    }

    pub fn block(self) -> [&'static [u32]; 3] {
        match self {
            Fixture::G6N5 => G6N5,
            Fixture::G6N6 => G6N6,
            Fixture::G6N7 => G6N7,
            Fixture::G8N5 => G8N5,
            Fixture::G8N6 => G8N6,
            Fixture::G8N7 => G8N7,
        }
    }

    /// The full normalized 4 x n matrix.
    pub fn matrix(self) -> ExponentMatrix {
        ExponentMatrix::normalized_from_block(self.lift(), &self.block()).expect("fixture entries are in range")
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown fixture '{s}'"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_normalized_4_by_n() {
        for (f, n) in Fixture::ALL.into_iter().zip([5, 6, 7, 5, 6, 7]) {
            let b = f.matrix();
            assert_eq!((b.rows(), b.cols(), b.lift()), (4, n, f.lift()));
            assert!(b.is_normalized());
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
        }
    }
}
