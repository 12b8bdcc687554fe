//! Mode labels for the interferometer.
//!
//! Each optical arm carries two modes, one per sign of the orbital
//! angular momentum (OAM) index. The signal/idler arms feed the
//! interferometer; the a/b arms leave it. The OAM magnitude `l` is
//! carried as metadata on the label so that superpositions over
//! several `l` sectors can coexist in one expression.

use std::fmt;

/// Which physical arm a mode lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arm {
    Signal,
    Idler,
    OutA,
    OutB,
}

impl Arm {
    /// Input arms feed the interferometer, output arms leave it.
    pub fn is_input(self) -> bool {
        matches!(self, Arm::Signal | Arm::Idler)
    }
}

/// Sign of the OAM mode index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OamSign {
    PlusL,
    MinusL,
}

impl OamSign {
    pub fn flipped(self) -> Self {
        match self {
            OamSign::PlusL => OamSign::MinusL,
            OamSign::MinusL => OamSign::PlusL,
        }
    }

    /// Signed unit contribution to the total OAM of a term.
    pub fn unit(self) -> i64 {
        match self {
            OamSign::PlusL => 1,
            OamSign::MinusL => -1,
        }
    }
}

/// A single bosonic mode: arm, OAM sign, and OAM magnitude index.
///
/// `l` is exact integer metadata; it enters the dynamics only through
/// Dove-prism phases `2lθ`. The fixed-`l` schemes of the two- and
/// four-photon measurements use a single `l` throughout, giving the
/// eight-mode universe (4 arms × 2 signs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    pub arm: Arm,
    pub sign: OamSign,
    pub l: u32,
}

impl ModeId {
    pub fn new(arm: Arm, sign: OamSign, l: u32) -> Self {
        ModeId { arm, sign, l }
    }

    pub fn is_input(&self) -> bool {
        self.arm.is_input()
    }

    /// Total OAM carried by one photon in this mode, in units of ħ.
    pub fn oam(&self) -> i64 {
        self.sign.unit() * self.l as i64
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arm = match self.arm {
            Arm::Signal => "s",
            Arm::Idler => "i",
            Arm::OutA => "a",
            Arm::OutB => "b",
        };
        let sign = match self.sign {
            OamSign::PlusL => "+",
            OamSign::MinusL => "-",
        };
        write!(f, "{arm}{sign}{}", self.l)
    }
}

/// The four input modes (s±, i±) at a given `l`, in the paper's column order.
pub fn input_basis(l: u32) -> [ModeId; 4] {
    [
        ModeId::new(Arm::Signal, OamSign::PlusL, l),
        ModeId::new(Arm::Signal, OamSign::MinusL, l),
        ModeId::new(Arm::Idler, OamSign::PlusL, l),
        ModeId::new(Arm::Idler, OamSign::MinusL, l),
    ]
}

/// The four output modes (a±, b±) at a given `l`, in the paper's column order.
pub fn output_basis(l: u32) -> [ModeId; 4] {
    [
        ModeId::new(Arm::OutA, OamSign::PlusL, l),
        ModeId::new(Arm::OutA, OamSign::MinusL, l),
        ModeId::new(Arm::OutB, OamSign::PlusL, l),
        ModeId::new(Arm::OutB, OamSign::MinusL, l),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_distinct_modes_at_fixed_l() {
        let mut all: Vec<ModeId> = input_basis(1).into_iter().collect();
        all.extend(output_basis(1));
        for (i, m) in all.iter().enumerate() {
            for n in &all[i + 1..] {
                assert_ne!(m, n);
            }
        }
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn oam_sign_bookkeeping() {
        let m = ModeId::new(Arm::Signal, OamSign::MinusL, 3);
        assert_eq!(m.oam(), -3);
        assert_eq!(m.sign.flipped(), OamSign::PlusL);
        assert!(m.is_input());
        assert!(!ModeId::new(Arm::OutB, OamSign::PlusL, 3).is_input());
    }
}
