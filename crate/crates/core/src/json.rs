//! Serde helpers shared by the report types.

/// Writes a `BigUint` as a JSON number when it fits in `u64`, otherwise as
/// a decimal string. Reads either form back.
pub mod big_number {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(u) => s.serialize_u64(u),
            None => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(u64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(u) => Ok(BigUint::from(u)),
            Repr::Str(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

/// Exact rationals as `"p/q"` strings (or `"p"` when integral).
pub mod rational {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn to_string(v: &BigRational) -> String {
        if v.is_integer() {
            v.numer().to_string()
        } else {
            format!("{}/{}", v.numer(), v.denom())
        }
    }

    pub fn parse(s: &str) -> Option<BigRational> {
        match s.split_once('/') {
            None => s.trim().parse::<BigInt>().ok().map(BigRational::from_integer),
            Some((n, d)) => {
                let d: BigInt = d.trim().parse().ok()?;
                if d == BigInt::from(0) {
                    return None;
                }
                Some(BigRational::new(n.trim().parse().ok()?, d))
            }
        }
    }

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| de::Error::custom(format!("not a rational: {s}")))
    }
}
