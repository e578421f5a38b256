use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A frequency vector (m, n) ∈ ℤ³ × ℤ³.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Freq {
    pub m: [i64; 3],
    pub n: [i64; 3],
}

impl Freq {
    pub const ZERO: Freq = Freq { m: [0; 3], n: [0; 3] };

    pub fn new(m: [i64; 3], n: [i64; 3]) -> Self {
        Freq { m, n }
    }

    pub fn is_zero(&self) -> bool {
        self.m == [0; 3] && self.n == [0; 3]
    }

    /// Sup norm of the six coordinates.
    pub fn height(&self) -> u64 {
        self.m.iter().chain(&self.n).map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// Simultaneous permutation of the three (m_i, n_i) pairs.
    pub fn permuted(&self, perm: [usize; 3]) -> Freq {
        Freq {
            m: [self.m[perm[0]], self.m[perm[1]], self.m[perm[2]]],
            n: [self.n[perm[0]], self.n[perm[1]], self.n[perm[2]]],
        }
    }

    pub fn as_array(&self) -> [i64; 6] {
        [self.m[0], self.m[1], self.m[2], self.n[0], self.n[1], self.n[2]]
    }

    pub fn from_array(v: [i64; 6]) -> Self {
        Freq { m: [v[0], v[1], v[2]], n: [v[3], v[4], v[5]] }
    }

    /// Every frequency with all coordinates in [-h, h], in lexicographic order.
    pub fn boxed(h: i64) -> impl Iterator<Item = Freq> {
        let side = (2 * h + 1) as u64;
        (0..side.pow(6)).map(move |mut idx| {
            let mut v = [0i64; 6];
            for slot in v.iter_mut().rev() {
                *slot = (idx % side) as i64 - h;
                idx /= side;
            }
            Freq::from_array(v)
        })
    }
}

impl fmt::Display for Freq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m=({},{},{}) n=({},{},{})",
            self.m[0], self.m[1], self.m[2], self.n[0], self.n[1], self.n[2]
        )
    }
}

/// Exact value of an exponential sum. Serialized as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpSumValue(pub BigInt);

impl ExpSumValue {
    pub fn from_i128(v: i128) -> Self {
        ExpSumValue(BigInt::from(v))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == BigInt::from(0)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<BigInt> for ExpSumValue {
    fn from(v: BigInt) -> Self {
        ExpSumValue(v)
    }
}

impl From<i64> for ExpSumValue {
    fn from(v: i64) -> Self {
        ExpSumValue(BigInt::from(v))
    }
}

impl fmt::Display for ExpSumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for ExpSumValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ExpSumValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigInt>().map(ExpSumValue).map_err(serde::de::Error::custom)
    }
}
