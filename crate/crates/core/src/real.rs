use core::cmp::Ordering;
use core::fmt;

/// A real number extended with both infinities.
///
/// Serializes finite values as JSON numbers and the infinities as the strings
/// `"+inf"` / `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    /// Maps `f64` infinities to the sentinels. NaN is not representable and
    /// maps to `None`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if x.is_nan() {
            None
        } else if x == f64::INFINITY {
            Some(Self::PosInfinity)
        } else if x == f64::NEG_INFINITY {
            Some(Self::NegInfinity)
        } else {
            Some(Self::Finite(x))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Self::NegInfinity => f64::NEG_INFINITY,
            Self::Finite(x) => x,
            Self::PosInfinity => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInfinity => f.write_str("-inf"),
            Self::Finite(x) => write!(f, "{x}"),
            Self::PosInfinity => f.write_str("+inf"),
        }
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::ExtendedReal;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    impl serde::Serialize for ExtendedReal {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match self {
                Self::NegInfinity => s.serialize_str("-inf"),
                Self::Finite(x) => s.serialize_f64(*x),
                Self::PosInfinity => s.serialize_str("+inf"),
            }
        }
    }

    struct ExtendedVisitor;

    impl Visitor<'_> for ExtendedVisitor {
        type Value = ExtendedReal;

        fn expecting(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
            f.write_str("a number, \"+inf\" or \"-inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtendedReal, E> {
            ExtendedReal::from_f64(v).ok_or_else(|| E::custom("NaN is not an extended real"))
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtendedReal, E> {
            Ok(ExtendedReal::Finite(v as f64))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtendedReal, E> {
            Ok(ExtendedReal::Finite(v as f64))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtendedReal, E> {
            match v {
                "+inf" | "inf" => Ok(ExtendedReal::PosInfinity),
                "-inf" => Ok(ExtendedReal::NegInfinity),
                other => Err(E::custom(alloc::format!("unexpected string `{other}`"))),
            }
        }
    }

    impl<'de> serde::Deserialize<'de> for ExtendedReal {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            d.deserialize_any(ExtendedVisitor)
        }
    }
}
