//! Kodaira symbols and the residue-characteristic-zero classification table.

use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    I0,
    I(u32),
    II,
    III,
    IV,
    I0Star,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, KodairaType::I(_))
    }

    pub fn is_additive(self) -> bool {
        !matches!(self, KodairaType::I0 | KodairaType::I(_))
    }

    /// Tame conductor exponent.
    pub fn epsilon(self) -> u32 {
        match self {
            KodairaType::I0 => 0,
            KodairaType::I(_) => 1,
            _ => 2,
        }
    }

    /// `(toric, unipotent)` ranks of the identity component of the special
    /// fiber of the Neron model.
    pub fn ranks(self) -> (u32, u32) {
        match self {
            KodairaType::I0 => (0, 0),
            KodairaType::I(_) => (1, 0),
            _ => (0, 1),
        }
    }

    /// Number of irreducible components of the special fiber of the minimal
    /// regular model.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I0 | KodairaType::II => 1,
            KodairaType::I(m) => m,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::I0Star => 5,
            KodairaType::IStar(m) => 5 + m,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I0"),
            KodairaType::I(m) => write!(f, "I{m}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::I0Star => write!(f, "I0*"),
            KodairaType::IStar(m) => write!(f, "I{m}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Valuations of `c4, c6, Delta` at a place; `None` marks an identically
/// zero invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Valuations {
    pub c4: Option<i64>,
    pub c6: Option<i64>,
    pub delta: i64,
}

impl Valuations {
    /// The exponent `k` of the minimal integral rescaling `c4 -> c4 / u^{4k}`,
    /// `c6 -> c6 / u^{6k}`, `Delta -> Delta / u^{12k}`.
    pub fn minimal_shift(&self) -> i64 {
        let k4 = self.c4.map(|v| v.div_euclid(4));
        let k6 = self.c6.map(|v| v.div_euclid(6));
        match (k4, k6) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => self.delta.div_euclid(12),
        }
    }

    pub fn minimal(&self) -> Valuations {
        let k = self.minimal_shift();
        Valuations {
            c4: self.c4.map(|v| v - 4 * k),
            c6: self.c6.map(|v| v - 6 * k),
            delta: self.delta - 12 * k,
        }
    }
}

/// Classify a minimal integral model by its valuations. Returns `None` when
/// the triple is inconsistent with any Kodaira type.
pub fn classify(v: &Valuations) -> Option<KodairaType> {
    let d = v.delta;
    if d < 0 || v.c4.is_some_and(|x| x < 0) || v.c6.is_some_and(|x| x < 0) {
        return None;
    }
    if d == 0 {
        return Some(KodairaType::I0);
    }
    if v.c4 == Some(0) {
        return Some(KodairaType::I(d as u32));
    }
    if v.c4 == Some(2) && v.c6 == Some(3) && d > 6 {
        return Some(KodairaType::IStar((d - 6) as u32));
    }
    Some(match d {
        2 => KodairaType::II,
        3 => KodairaType::III,
        4 => KodairaType::IV,
        6 => KodairaType::I0Star,
        8 => KodairaType::IVStar,
        9 => KodairaType::IIIStar,
        10 => KodairaType::IIStar,
        _ => return None,
    })
}
