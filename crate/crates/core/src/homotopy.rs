//! Symbolic homotopy types: finite products of `SO(3)`, `S2` and circles.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// `SO(3)^so3 × (S2)^s2 × (S1)^circles`, kept in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct HomotopyType {
    pub so3: u32,
    pub s2: u32,
    pub circles: u32,
}

impl HomotopyType {
    pub const POINT: HomotopyType = HomotopyType { so3: 0, s2: 0, circles: 0 };
    pub const S1: HomotopyType = HomotopyType { so3: 0, s2: 0, circles: 1 };
    pub const S2: HomotopyType = HomotopyType { so3: 0, s2: 1, circles: 0 };
    pub const SO3: HomotopyType = HomotopyType { so3: 1, s2: 0, circles: 0 };
    pub const T2: HomotopyType = HomotopyType { so3: 0, s2: 0, circles: 2 };

    pub fn torus(n: u32) -> Self {
        HomotopyType { circles: n, ..Self::POINT }
    }

    pub fn is_point(&self) -> bool {
        *self == Self::POINT
    }
}

impl Mul for HomotopyType {
    type Output = HomotopyType;

    fn mul(self, o: HomotopyType) -> HomotopyType {
        HomotopyType { so3: self.so3 + o.so3, s2: self.s2 + o.s2, circles: self.circles + o.circles }
    }
}

fn atom(name: &str, n: u32) -> Option<String> {
    match n {
        0 => None,
        1 => Some(name.to_string()),
        n => Some(format!("({name})^{n}")),
    }
}

impl fmt::Display for HomotopyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            [atom("SO(3)", self.so3), atom("S2", self.s2), atom("S1", self.circles)].into_iter().flatten().collect();
        if parts.is_empty() { f.write_str("point") } else { f.write_str(&parts.join(" x ")) }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unrecognised homotopy type {0:?}")]
pub struct ParseHomotopyError(pub String);

impl FromStr for HomotopyType {
    type Err = ParseHomotopyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseHomotopyError(s.to_string());
        let s = s.trim();
        if s == "point" {
            return Ok(Self::POINT);
        }
        let mut out = Self::POINT;
        for part in s.split(" x ") {
            let (name, n) = match part.strip_prefix('(').and_then(|p| p.split_once(")^")) {
                Some((name, n)) => (name, n.parse::<u32>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let slot = match name {
                "SO(3)" => &mut out.so3,
                "S2" => &mut out.s2,
                "S1" => &mut out.circles,
                _ => return Err(bad()),
            };
            *slot += n;
        }
        Ok(out)
    }
}

impl Serialize for HomotopyType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HomotopyType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_forms() {
        assert_eq!(HomotopyType::POINT.to_string(), "point");
        assert_eq!(HomotopyType::S2.to_string(), "S2");
        assert_eq!(HomotopyType::torus(3).to_string(), "(S1)^3");
        assert_eq!((HomotopyType::SO3 * HomotopyType::torus(2)).to_string(), "SO(3) x (S1)^2");
        assert_eq!(HomotopyType::T2 * HomotopyType::S1, HomotopyType::torus(3));
    }

    proptest! {
        #[test]
        fn display_parses_back(so3 in 0u32..3, s2 in 0u32..3, circles in 0u32..9) {
            let h = HomotopyType { so3, s2, circles };
            prop_assert_eq!(h.to_string().parse::<HomotopyType>().unwrap(), h);
        }
    }
}
