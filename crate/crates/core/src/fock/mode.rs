use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of the bipartition a mode belongs to. Ancillas model environment
/// modes introduced by loss and are traced out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    Ancilla,
}

impl Party {
    fn letter(self) -> char {
        match self {
            Party::A => 'a',
            Party::B => 'b',
            Party::Ancilla => 'e',
        }
    }
}

/// A mode is identified by its party and copy index (1-based). The position of
/// a mode inside a tensor is a property of the state, not of the label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeLabel {
    pub party: Party,
    pub copy: u32,
}

impl ModeLabel {
    pub const fn new(party: Party, copy: u32) -> Self {
        Self { party, copy }
    }
    pub const fn a(copy: u32) -> Self {
        Self::new(Party::A, copy)
    }
    pub const fn b(copy: u32) -> Self {
        Self::new(Party::B, copy)
    }
    pub const fn ancilla(k: u32) -> Self {
        Self::new(Party::Ancilla, k)
    }
    pub fn with_copy(self, copy: u32) -> Self {
        Self { copy, ..self }
    }
    pub fn is_ancilla(self) -> bool {
        self.party == Party::Ancilla
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.party.letter(), self.copy)
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    /// Accepts `a`, `b2`, `e3`; a missing copy index means copy 1.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let party = match chars.next() {
            Some('a') => Party::A,
            Some('b') => Party::B,
            Some('e') => Party::Ancilla,
            _ => return Err(Error::InvalidArgument(format!("bad mode label '{s}'"))),
        };
        let rest = chars.as_str();
        let copy = if rest.is_empty() {
            1
        } else {
            rest.parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("bad mode label '{s}'")))?
        };
        if copy == 0 {
            return Err(Error::InvalidArgument(format!("copy index must be >= 1 in '{s}'")));
        }
        Ok(Self { party, copy })
    }
}
