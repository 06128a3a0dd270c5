//! The six Cartan families of irreducible bounded symmetric domains and their
//! numerical invariants (rank, multiplicities, dimension, genus).
//!
//! Low-parameter members that coincide with other families (`II(2..4)`,
//! `III(1)`, `IV(1..4)`) are rejected by the constructors, so the catalog holds
//! each irreducible domain exactly once.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DomainFamily {
    /// `m × n` matrices with `I - z z* > 0`, `1 ≤ m ≤ n`.
    TypeI { m: u32, n: u32 },
    /// Skew-symmetric `n × n` matrices, `n ≥ 5`.
    TypeII(u32),
    /// Symmetric `n × n` matrices, `n ≥ 2`.
    TypeIII(u32),
    /// The Lie ball in `C^n`, `n ≥ 5`.
    TypeIV(u32),
    /// Exceptional domain of dimension 16.
    TypeV,
    /// Exceptional domain of dimension 27.
    TypeVI,
}

impl DomainFamily {
    /// The unit ball `B^d`, i.e. `TypeI(1, d)`.
    pub fn ball(d: u32) -> Self {
        Self::TypeI { m: 1, n: d }
    }

    pub fn is_ball(&self) -> bool {
        matches!(self, Self::TypeI { m: 1, .. })
    }

    /// Checks the family's parameter constraint.
    pub fn check(&self) -> Result<()> {
        let fail = |constraint| {
            Err(Error::InvalidDomain {
                family: self.to_string(),
                constraint,
            })
        };
        match *self {
            Self::TypeI { m, .. } if m < 1 => fail("m≥1"),
            Self::TypeI { m, n } if m > n => fail("m≤n"),
            Self::TypeII(n) if n < 5 => fail("n≥5"),
            Self::TypeIII(n) if n < 2 => fail("n≥2"),
            Self::TypeIV(n) if n < 5 => fail("n≥5"),
            _ => Ok(()),
        }
    }

    /// Position in the Cartan list, `0` for type I through `5` for type VI.
    pub fn type_index(&self) -> usize {
        match self {
            Self::TypeI { .. } => 0,
            Self::TypeII(_) => 1,
            Self::TypeIII(_) => 2,
            Self::TypeIV(_) => 3,
            Self::TypeV => 4,
            Self::TypeVI => 5,
        }
    }
}

impl fmt::Display for DomainFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TypeI { m: 1, n } => write!(f, "B({n})"),
            Self::TypeI { m, n } => write!(f, "I({m},{n})"),
            Self::TypeII(n) => write!(f, "II({n})"),
            Self::TypeIII(n) => write!(f, "III({n})"),
            Self::TypeIV(n) => write!(f, "IV({n})"),
            Self::TypeV => f.write_str("V"),
            Self::TypeVI => f.write_str("VI"),
        }
    }
}

/// Rank `r`, multiplicities `a`, `b`, complex dimension `d` and genus `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomainInvariants {
    pub family: DomainFamily,
    pub r: u32,
    pub a: u32,
    pub b: u32,
    pub d: u32,
    pub p: u32,
}

impl DomainInvariants {
    /// Looks up the invariants of `family`, rejecting out-of-range parameters.
    pub fn new(family: DomainFamily) -> Result<Self> {
        family.check()?;
        let (r, a, b, d, p) = match family {
            DomainFamily::TypeI { m, n } => (m, 2, n - m, m * n, m + n),
            DomainFamily::TypeII(n) if n % 2 == 0 => {
                let h = n / 2;
                (h, 4, 0, n * (n - 1) / 2, 2 * (2 * h - 1))
            }
            DomainFamily::TypeII(n) => {
                let h = (n - 1) / 2;
                (h, 4, 2, n * (n - 1) / 2, 4 * h)
            }
            DomainFamily::TypeIII(n) => (n, 1, 0, n * (n + 1) / 2, n + 1),
            DomainFamily::TypeIV(n) => (2, n - 2, 0, n, n),
            DomainFamily::TypeV => (2, 6, 4, 16, 12),
            DomainFamily::TypeVI => (3, 8, 0, 27, 18),
        };
        Ok(Self {
            family,
            r,
            a,
            b,
            d,
            p,
        })
    }

    pub fn ball(d: u32) -> Self {
        Self::new(DomainFamily::ball(d)).expect("balls of positive dimension are valid")
    }

    /// `d = r(r-1)a/2 + rb + r` and `p = (r-1)a + b + 2`.
    pub fn is_consistent(&self) -> bool {
        let (r, a, b) = (self.r as u64, self.a as u64, self.b as u64);
        r >= 1
            && self.d as u64 == r * (r - 1) * a / 2 + r * b + r
            && self.p as u64 == (r - 1) * a + b + 2
    }
}

impl fmt::Display for DomainInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.family.fmt(f)
    }
}

/// True iff both dimension/genus relations hold.
pub fn validate_invariants(inv: &DomainInvariants) -> bool {
    inv.is_consistent()
}

/// Every irreducible domain of dimension at most `d_max`, ordered by family then parameters.
pub fn enumerate_catalog(d_max: u32) -> Vec<DomainInvariants> {
    let mut out = Vec::new();
    let mut push = |family| {
        let inv = DomainInvariants::new(family).expect("catalog scan respects constraints");
        debug_assert!(inv.is_consistent());
        if inv.d <= d_max {
            out.push(inv);
        }
    };
    for m in 1..=d_max {
        for n in m..=d_max {
            if m * n <= d_max {
                push(DomainFamily::TypeI { m, n });
            }
        }
    }
    let mut n = 5;
    while n * (n - 1) / 2 <= d_max {
        push(DomainFamily::TypeII(n));
        n += 1;
    }
    let mut n = 2;
    while n * (n + 1) / 2 <= d_max {
        push(DomainFamily::TypeIII(n));
        n += 1;
    }
    for n in 5..=d_max {
        push(DomainFamily::TypeIV(n));
    }
    push(DomainFamily::TypeV);
    push(DomainFamily::TypeVI);
    out
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    source: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(source: &'a str) -> Self {
        let chars = source
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i, c.to_ascii_uppercase()))
            .collect();
        Self {
            chars,
            pos: 0,
            source,
        }
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or(self.source.len(), |&(i, _)| i)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn word(&mut self) -> String {
        let mut w = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_alphabetic) {
            w.push(c);
            self.pos += 1;
        }
        w
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            self.pos = start;
            return self.error("expected a nonnegative integer");
        }
        match digits.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.error("integer out of range")
            }
        }
    }

    fn args(&mut self, count: usize) -> Result<Vec<u32>> {
        self.expect('(')?;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            if i > 0 {
                self.expect(',')?;
            }
            out.push(self.number()?);
        }
        self.expect(')')?;
        Ok(out)
    }
}

fn parse_family(cursor: &mut Cursor<'_>) -> Result<DomainFamily> {
    let start = cursor.pos;
    let family = match cursor.word().as_str() {
        "B" => DomainFamily::ball(cursor.args(1)?[0]),
        "I" => {
            let v = cursor.args(2)?;
            DomainFamily::TypeI { m: v[0], n: v[1] }
        }
        "II" => DomainFamily::TypeII(cursor.args(1)?[0]),
        "III" => DomainFamily::TypeIII(cursor.args(1)?[0]),
        "IV" => DomainFamily::TypeIV(cursor.args(1)?[0]),
        "V" => DomainFamily::TypeV,
        "VI" => DomainFamily::TypeVI,
        other => {
            cursor.pos = start;
            return cursor.error(format!(
                "unknown domain type `{other}` (expected I, II, III, IV, V, VI or B)"
            ));
        }
    };
    Ok(family)
}

/// Parses `I(m,n) | II(n) | III(n) | IV(n) | V | VI | B(d)`; case-insensitive,
/// whitespace ignored. Parameter constraints are checked after parsing.
pub fn parse_domain(source: &str) -> Result<DomainInvariants> {
    let mut cursor = Cursor::new(source);
    let family = parse_family(&mut cursor)?;
    if cursor.peek().is_some() {
        return cursor.error("unexpected trailing input");
    }
    DomainInvariants::new(family)
}

/// Parses a comma-separated list of domain specs, e.g. `IV(5),B(1),B(1)`.
pub fn parse_domain_list(source: &str) -> Result<Vec<DomainInvariants>> {
    let mut cursor = Cursor::new(source);
    let mut out = Vec::new();
    loop {
        let family = parse_family(&mut cursor)?;
        out.push(DomainInvariants::new(family)?);
        match cursor.peek() {
            None => break,
            Some(',') => cursor.pos += 1,
            Some(_) => return cursor.error("expected `,` between domains"),
        }
    }
    Ok(out)
}

impl FromStr for DomainInvariants {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_domain(s)
    }
}
