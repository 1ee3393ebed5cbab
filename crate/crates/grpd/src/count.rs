//! Counting in ℕ ∪ {ω}.
//!
//! Census totals, out-degrees and orbit cardinalities are either exact
//! natural numbers or countably infinite. [`Count`] keeps the two cases in
//! one type with ω-absorbing addition and the obvious total order
//! (every finite value < ω). JSON renders a finite count as a number and ω
//! as the string `"omega"`.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::de::{self, Deserializer, Unexpected, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// An exact natural number or countable infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Count {
    /// An exact finite count.
    Finite(u64),
    /// Countably infinite.
    Omega,
}

impl Count {
    /// Zero, the additive identity.
    pub const ZERO: Count = Count::Finite(0);

    /// One.
    pub const ONE: Count = Count::Finite(1);

    /// True when the count is exactly zero.
    pub fn is_zero(self) -> bool {
        self == Count::ZERO
    }

    /// True when the count is ω.
    pub fn is_omega(self) -> bool {
        self == Count::Omega
    }

    /// The finite value, if there is one.
    pub fn finite(self) -> Option<u64> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Omega => None,
        }
    }

    /// Saturating conversion for loop bounds: ω maps to `u64::MAX`.
    pub fn saturating(self) -> u64 {
        match self {
            Count::Finite(n) => n,
            Count::Omega => u64::MAX,
        }
    }
}

impl PartialOrd for Count {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Count {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Count::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Omega) => std::cmp::Ordering::Less,
            (Omega, Finite(_)) => std::cmp::Ordering::Greater,
            (Omega, Omega) => std::cmp::Ordering::Equal,
        }
    }
}

impl Add for Count {
    type Output = Count;

    /// ω-absorbing addition; finite + finite saturates into ω on `u64`
    /// overflow (a count that large is indistinguishable from infinite for
    /// every consumer in this crate).
    fn add(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(a), Count::Finite(b)) => match a.checked_add(b) {
                Some(s) => Count::Finite(s),
                None => Count::Omega,
            },
            _ => Count::Omega,
        }
    }
}

impl Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Count {
        iter.fold(Count::ZERO, Add::add)
    }
}

impl From<u64> for Count {
    fn from(n: u64) -> Count {
        Count::Finite(n)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Omega => write!(f, "omega"),
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => serializer.serialize_u64(*n),
            Count::Omega => serializer.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CountVisitor;

        impl<'de> Visitor<'de> for CountVisitor {
            type Value = Count;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or the string \"omega\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Count, E> {
                Ok(Count::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Count, E> {
                u64::try_from(v)
                    .map(Count::Finite)
                    .map_err(|_| E::invalid_value(Unexpected::Signed(v), &self))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Count, E> {
                if v == "omega" {
                    Ok(Count::Omega)
                } else {
                    Err(E::invalid_value(Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(CountVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_absorbs_addition() {
        assert_eq!(Count::Omega + Count::Finite(3), Count::Omega);
        assert_eq!(Count::Finite(3) + Count::Omega, Count::Omega);
        assert_eq!(Count::Finite(2) + Count::Finite(5), Count::Finite(7));
    }

    #[test]
    fn overflow_saturates_to_omega() {
        assert_eq!(Count::Finite(u64::MAX) + Count::ONE, Count::Omega);
    }

    #[test]
    fn order_puts_omega_on_top() {
        assert!(Count::Finite(u64::MAX) < Count::Omega);
        assert!(Count::Finite(0) < Count::Finite(1));
    }

    #[test]
    fn sum_of_counts() {
        let s: Count = [Count::Finite(1), Count::Finite(2), Count::Finite(3)]
            .into_iter()
            .sum();
        assert_eq!(s, Count::Finite(6));
        let s: Count = [Count::Finite(1), Count::Omega].into_iter().sum();
        assert_eq!(s, Count::Omega);
    }

    #[test]
    fn json_round_trip() {
        assert_eq!(serde_json::to_string(&Count::Finite(4)).unwrap(), "4");
        assert_eq!(serde_json::to_string(&Count::Omega).unwrap(), "\"omega\"");
        assert_eq!(
            serde_json::from_str::<Count>("\"omega\"").unwrap(),
            Count::Omega
        );
        assert_eq!(serde_json::from_str::<Count>("17").unwrap(), Count::Finite(17));
        assert!(serde_json::from_str::<Count>("\"infinity\"").is_err());
        assert!(serde_json::from_str::<Count>("-2").is_err());
    }
}
