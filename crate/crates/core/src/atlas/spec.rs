use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::prime_power;
use crate::error::{ParseError, Result};

/// Matrix families, named by the group they realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SL,
    PSL,
    GL,
    PGL,
    Sp,
    PSp,
    SU,
    PSU,
    GU,
    PGU,
    OmegaPlus,
    OmegaMinus,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::SL,
        Family::PSL,
        Family::GL,
        Family::PGL,
        Family::Sp,
        Family::PSp,
        Family::SU,
        Family::PSU,
        Family::GU,
        Family::PGU,
        Family::OmegaPlus,
        Family::OmegaMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SL => "SL",
            Family::PSL => "PSL",
            Family::GL => "GL",
            Family::PGL => "PGL",
            Family::Sp => "Sp",
            Family::PSp => "PSp",
            Family::SU => "SU",
            Family::PSU => "PSU",
            Family::GU => "GU",
            Family::PGU => "PGU",
            Family::OmegaPlus => "OmegaPlus",
            Family::OmegaMinus => "OmegaMinus",
        }
    }

    pub fn is_projective(self) -> bool {
        matches!(self, Family::PSL | Family::PGL | Family::PSp | Family::PSU | Family::PGU)
    }

    /// The matrix group whose image a projective family is.
    pub fn linear(self) -> Family {
        match self {
            Family::PSL => Family::SL,
            Family::PGL => Family::GL,
            Family::PSp => Family::Sp,
            Family::PSU => Family::SU,
            Family::PGU => Family::GU,
            f => f,
        }
    }

    pub fn is_unitary(self) -> bool {
        matches!(self.linear(), Family::SU | Family::GU)
    }
}

/// A named group in the supported atlas. Serializes as its canonical
/// spec string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Alt { n: usize },
    Sym { n: usize },
    Cyclic { n: usize },
    Classical { family: Family, n: usize, q: u32 },
    Wreath { inner: Box<GroupSpec>, t: usize },
    Direct { factors: Vec<GroupSpec> },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Alt { n } => write!(f, "Alt({n})"),
            GroupSpec::Sym { n } => write!(f, "Sym({n})"),
            GroupSpec::Cyclic { n } => write!(f, "Cyclic({n})"),
            GroupSpec::Classical { family, n, q } => write!(f, "{}({n},{q})", family.name()),
            GroupSpec::Wreath { inner, t } => write!(f, "Wreath({inner},{t})"),
            GroupSpec::Direct { factors } => {
                write!(f, "Direct(")?;
                for (i, g) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_group_spec(&s).map_err(serde::de::Error::custom)
    }
}

impl FromStr for GroupSpec {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group_spec(s)
    }
}

/// Parses the group-spec grammar:
///
/// ```text
/// spec   := name "(" args ")"
/// name   := Alt | Sym | Cyclic | Wreath | Direct | <matrix family>
/// ```
///
/// Family names are case-insensitive and whitespace is ignored. Offsets in
/// errors are 0-based character positions in the input.
pub fn parse_group_spec(s: &str) -> Result<GroupSpec> {
    let mut p = Parser {
        chars: s.chars().collect(),
        pos: 0,
    };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("end of input").into());
    }
    Ok(spec)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn found(&self) -> String {
        match self.chars.get(self.pos) {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        }
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.pos,
            expected: expected.into(),
            found: self.found(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("'{c}'")))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut out = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_alphabetic() || c == '_' || c == '-' || c == '+' {
                out.push(c);
                self.pos += 1;
            } else if c.is_whitespace() {
                // whitespace inside a name is ignored
                self.pos += 1;
            } else {
                break;
            }
        }
        if out.is_empty() {
            self.pos = start;
            return Err(self.err("group family name"));
        }
        Ok((out, start))
    }

    fn number(&mut self) -> Result<(u64, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(d) = self.chars.get(self.pos).and_then(|c| c.to_digit(10)) {
            v = v.checked_mul(10).and_then(|v| v.checked_add(d as u64)).ok_or_else(|| ParseError {
                position: start,
                expected: "a number that fits in 64 bits".into(),
                found: "overflow".into(),
            })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("integer"));
        }
        Ok((v, start))
    }

    fn small(&mut self, lo: u64, hi: u64, what: &str) -> Result<usize, ParseError> {
        let (v, at) = self.number()?;
        if v < lo || v > hi {
            return Err(ParseError {
                position: at,
                expected: format!("{what} in {lo}..={hi}"),
                found: v.to_string(),
            });
        }
        Ok(v as usize)
    }

    fn field_size(&mut self) -> Result<u32, ParseError> {
        let (q, at) = self.number()?;
        if prime_power(q).is_none() {
            return Err(ParseError {
                position: at,
                expected: "a prime power field size".into(),
                found: q.to_string(),
            });
        }
        if q > crate::algebra::field::MAX_FIELD_ORDER as u64 {
            return Err(ParseError {
                position: at,
                expected: format!("field size at most {}", crate::algebra::field::MAX_FIELD_ORDER),
                found: q.to_string(),
            });
        }
        Ok(q as u32)
    }

    fn spec(&mut self) -> Result<GroupSpec, ParseError> {
        let (name, at) = self.ident()?;
        let key: String = name.to_ascii_lowercase().replace('_', "");
        self.expect('(')?;
        let spec = match key.as_str() {
            "alt" | "a" | "alternating" => GroupSpec::Alt {
                n: self.small(1, 12, "degree")?,
            },
            "sym" | "s" | "symmetric" => GroupSpec::Sym {
                n: self.small(1, 12, "degree")?,
            },
            "cyclic" | "c" => GroupSpec::Cyclic {
                n: self.small(1, 1000, "order")?,
            },
            "wreath" => {
                let inner = self.spec()?;
                self.expect(',')?;
                let t = self.small(2, 4, "top degree")?;
                GroupSpec::Wreath {
                    inner: Box::new(inner),
                    t,
                }
            }
            "direct" => {
                let mut factors = vec![self.spec()?];
                loop {
                    self.skip_ws();
                    if self.chars.get(self.pos) == Some(&',') {
                        self.pos += 1;
                        factors.push(self.spec()?);
                    } else {
                        break;
                    }
                }
                GroupSpec::Direct { factors }
            }
            other => {
                let family = match other {
                    "sl" => Family::SL,
                    "psl" | "l" => Family::PSL,
                    "gl" => Family::GL,
                    "pgl" => Family::PGL,
                    "sp" => Family::Sp,
                    "psp" => Family::PSp,
                    "su" => Family::SU,
                    "psu" | "u" => Family::PSU,
                    "gu" => Family::GU,
                    "pgu" => Family::PGU,
                    "omegaplus" | "omega+" | "o+" => Family::OmegaPlus,
                    "omegaminus" | "omega-" | "o-" => Family::OmegaMinus,
                    _ => {
                        return Err(ParseError {
                            position: at,
                            expected: "a known group family".into(),
                            found: name,
                        })
                    }
                };
                let n = self.small(1, 8, "dimension")?;
                self.expect(',')?;
                let q = self.field_size()?;
                GroupSpec::Classical { family, n, q }
            }
        };
        self.expect(')')?;
        Ok(spec)
    }
}
