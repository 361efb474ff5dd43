//! Bell-state labels and their 2-bit classical codes.
//!
//! The four Bell states carry the codes
//!
//! | label  | state                      | code |
//! |--------|----------------------------|------|
//! | `Φ+`   | (\|00⟩ + \|11⟩)/√2         | 00   |
//! | `Φ−`   | (\|00⟩ − \|11⟩)/√2         | 01   |
//! | `Ψ+`   | (\|01⟩ + \|10⟩)/√2         | 10   |
//! | `Ψ−`   | (\|01⟩ − \|10⟩)/√2         | 11   |
//!
//! The high bit of the code is the bit-flip (Ψ) component and the low bit the
//! phase (minus) component. Under entanglement swapping the labels combine by
//! XOR of their codes, which makes the set a Klein four-group under
//! [`BellLabel::compose`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of the four maximally entangled two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    /// All labels in code order (`00`, `01`, `10`, `11`).
    pub const ALL: [BellLabel; 4] = [BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiPlus, BellLabel::PsiMinus];

    /// The 2-bit classical code, in `0..4`.
    pub const fn code(self) -> u8 {
        match self {
            BellLabel::PhiPlus => 0b00,
            BellLabel::PhiMinus => 0b01,
            BellLabel::PsiPlus => 0b10,
            BellLabel::PsiMinus => 0b11,
        }
    }

    /// Inverse of [`BellLabel::code`]. Only the low two bits are read.
    pub const fn from_code(code: u8) -> BellLabel {
        match code & 0b11 {
            0b00 => BellLabel::PhiPlus,
            0b01 => BellLabel::PhiMinus,
            0b10 => BellLabel::PsiPlus,
            _ => BellLabel::PsiMinus,
        }
    }

    /// Index into distributions ordered like [`BellLabel::ALL`].
    pub const fn index(self) -> usize {
        self.code() as usize
    }

    /// Group operation of the swapping algebra: XOR of the codes.
    ///
    /// With a pair in state `self` on (C1, A2) and `Φ+` on (B1, B2), a Bell
    /// measurement of (C1, B2) yielding `other` leaves (B1, A2) in
    /// `self.compose(other)`.
    pub const fn compose(self, other: BellLabel) -> BellLabel {
        BellLabel::from_code(self.code() ^ other.code())
    }

    /// Whether the two qubits are anti-correlated in the Z basis.
    pub const fn flips_z(self) -> bool {
        self.code() & 0b10 != 0
    }

    /// Whether the two qubits are anti-correlated in the X basis.
    pub const fn flips_x(self) -> bool {
        self.code() & 0b01 != 0
    }

    pub const fn symbol(self) -> &'static str {
        match self {
            BellLabel::PhiPlus => "Φ+",
            BellLabel::PhiMinus => "Φ-",
            BellLabel::PsiPlus => "Ψ+",
            BellLabel::PsiMinus => "Ψ-",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    /// Computational basis {|0⟩, |1⟩}.
    Z,
    /// Hadamard basis {|+⟩, |−⟩}; bit 0 is |+⟩ and bit 1 is |−⟩.
    X,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::Z, Basis::X];

    pub fn other(self) -> Basis {
        match self {
            Basis::Z => Basis::X,
            Basis::X => Basis::Z,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Z => f.write_str("Z"),
            Basis::X => f.write_str("X"),
        }
    }
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" | "z" => Ok(Basis::Z),
            "X" | "x" => Ok(Basis::X),
            other => Err(format!("unknown basis `{other}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn label() -> impl Strategy<Value = BellLabel> {
        (0u8..4).prop_map(BellLabel::from_code)
    }

    #[test]
    fn codes_match_prerequisite_table() {
        assert_eq!(BellLabel::PhiPlus.code(), 0b00);
        assert_eq!(BellLabel::PhiMinus.code(), 0b01);
        assert_eq!(BellLabel::PsiPlus.code(), 0b10);
        assert_eq!(BellLabel::PsiMinus.code(), 0b11);
        for l in BellLabel::ALL {
            assert_eq!(BellLabel::from_code(l.code()), l);
        }
    }

    #[test]
    fn worked_deduction_entry() {
        assert_eq!(BellLabel::PhiMinus.compose(BellLabel::PsiPlus), BellLabel::PsiMinus);
        for q in BellLabel::ALL {
            assert_eq!(BellLabel::PhiPlus.compose(q), q);
            assert_eq!(q.compose(q), BellLabel::PhiPlus);
        }
    }

    proptest! {
        #[test]
        fn compose_is_klein_four(a in label(), b in label(), c in label()) {
            prop_assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
            prop_assert_eq!(a.compose(b), b.compose(a));
            prop_assert_eq!(a.compose(BellLabel::PhiPlus), a);
            prop_assert_eq!(a.compose(a), BellLabel::PhiPlus);
        }
    }
}
