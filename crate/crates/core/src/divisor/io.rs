//! Text and JSON encodings of symmetric divisors.
//!
//! Text: `n=12 basis=ca c=4/11 a=0,1,2,4` or `n=12 basis=b b=4/11,12/11,...`.
//! JSON: `{"basis":"ca","n":12,"c":"4/11","a":["0","1","2","4"]}` or
//! `{"basis":"b","n":12,"b":[...]}`. Formatting is canonical, so
//! `format(parse(s)) == s` for every canonically formatted `s`.

use serde::{Deserialize, Serialize};

use super::{to_b_basis, to_ca_basis, SymDivisorB, SymDivisorCA};
use crate::rational::{format_rational, parse_rational, Q};
use crate::{Error, Result};

/// A divisor in whichever basis it was written in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymDivisor {
    B(SymDivisorB),
    CA(SymDivisorCA),
}

impl SymDivisor {
    pub fn n(&self) -> usize {
        match self {
            SymDivisor::B(d) => d.n(),
            SymDivisor::CA(d) => d.n(),
        }
    }

    pub fn to_ca(&self) -> SymDivisorCA {
        match self {
            SymDivisor::B(d) => to_ca_basis(d),
            SymDivisor::CA(d) => d.clone(),
        }
    }

    pub fn to_b(&self) -> SymDivisorB {
        match self {
            SymDivisor::B(d) => d.clone(),
            SymDivisor::CA(d) => to_b_basis(d),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            SymDivisor::B(d) => format!("n={} basis=b b={}", d.n(), join(d.coeffs())),
            SymDivisor::CA(d) => {
                format!("n={} basis=ca c={} a={}", d.n(), format_rational(d.c()), join(d.a()))
            }
        }
    }

    pub fn parse_text(s: &str) -> Result<Self> {
        let mut fields = s.split_whitespace();
        let mut next = |key: &str| -> Result<&str> {
            let tok = fields.next().ok_or_else(|| Error::Parse(format!("missing field {key}")))?;
            tok.strip_prefix(key)
                .and_then(|t| t.strip_prefix('='))
                .ok_or_else(|| Error::Parse(format!("expected {key}=..., found {tok:?}")))
        };
        let n: usize = next("n")?.parse().map_err(|_| Error::Parse("n is not a non-negative integer".into()))?;
        let basis = next("basis")?;
        let d = match basis {
            "b" => SymDivisor::B(SymDivisorB::new(n, split_list(next("b")?)?)?),
            "ca" => {
                let c = parse_rational(next("c")?)?;
                let a = split_list(next("a")?)?;
                SymDivisor::CA(SymDivisorCA::new(n, c, a)?)
            }
            other => return Err(Error::Parse(format!("unknown basis {other:?}"))),
        };
        if let Some(extra) = fields.next() {
            return Err(Error::Parse(format!("trailing field {extra:?}")));
        }
        Ok(d)
    }

    pub fn to_json_value(&self) -> DivisorJson {
        match self {
            SymDivisor::B(d) => DivisorJson::B { n: d.n(), b: strings(d.coeffs()) },
            SymDivisor::CA(d) => DivisorJson::Ca { n: d.n(), c: format_rational(d.c()), a: strings(d.a()) },
        }
    }

    pub fn from_json_value(v: &DivisorJson) -> Result<Self> {
        match v {
            DivisorJson::B { n, b } => Ok(SymDivisor::B(SymDivisorB::new(*n, parse_all(b)?)?)),
            DivisorJson::Ca { n, c, a } => Ok(SymDivisor::CA(SymDivisorCA::new(*n, parse_rational(c)?, parse_all(a)?)?)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("divisor JSON is always serializable")
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        let v: DivisorJson = serde_json::from_str(s)?;
        Self::from_json_value(&v)
    }

    /// Accepts either encoding, deciding by the first non-blank character.
    pub fn parse_any(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Self::parse_json(s)
        } else {
            Self::parse_text(s.trim())
        }
    }
}

impl From<SymDivisorCA> for SymDivisor {
    fn from(d: SymDivisorCA) -> Self {
        SymDivisor::CA(d)
    }
}

impl From<SymDivisorB> for SymDivisor {
    fn from(d: SymDivisorB) -> Self {
        SymDivisor::B(d)
    }
}

/// Wire form of a divisor; rationals are strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "basis", deny_unknown_fields)]
pub enum DivisorJson {
    #[serde(rename = "ca")]
    Ca { n: usize, c: String, a: Vec<String> },
    #[serde(rename = "b")]
    B { n: usize, b: Vec<String> },
}

fn join(v: &[Q]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn parse_all(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn split_list(s: &str) -> Result<Vec<Q>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn canonical_text() {
        let s = "n=12 basis=ca c=4/11 a=0,1,2,4";
        let d = SymDivisor::parse_text(s).unwrap();
        assert_eq!(d.to_text(), s);
        let b = SymDivisor::B(d.to_b());
        assert_eq!(b.to_text(), "n=12 basis=b b=4/11,12/11,13/11,18/11,16/11");
        assert_eq!(SymDivisor::parse_text(&b.to_text()).unwrap(), b);
        assert_eq!(SymDivisor::parse_text("n=5 basis=ca c=1/2 a=").unwrap().to_text(), "n=5 basis=ca c=1/2 a=");
    }

    #[test]
    fn canonical_json() {
        let d = SymDivisor::CA(SymDivisorCA::new(12, frac(4, 11), vec![int(0), int(1), int(2), int(4)]).unwrap());
        let j = d.to_json();
        assert_eq!(j, r#"{"basis":"ca","n":12,"c":"4/11","a":["0","1","2","4"]}"#);
        assert_eq!(SymDivisor::parse_json(&j).unwrap(), d);
        assert_eq!(SymDivisor::parse_any(&j).unwrap(), d);
    }

    #[test]
    fn rejects_malformed() {
        for s in [
            "",
            "n=12",
            "n=12 basis=ca c=4/11",
            "n=12 basis=ca c=4/11 a=0,1,2",
            "n=12 basis=xy c=1 a=0,0,0,0",
            "n=3 basis=b b=",
            "n=12 basis=ca c=4/11 a=0,1,2,4 extra",
            "n=12 basis=ca c=4/0 a=0,1,2,4",
            "basis=ca n=12 c=1 a=0,0,0,0",
        ] {
            assert!(SymDivisor::parse_text(s).is_err(), "accepted {s:?}");
        }
        for s in [r#"{"basis":"ca","n":12,"c":"1","a":[]}"#, r#"{"basis":"ca","n":5,"c":"1","a":[],"x":1}"#, r#"{"n":5}"#] {
            assert!(SymDivisor::parse_json(s).is_err(), "accepted {s}");
        }
    }

    fn arb_q() -> impl Strategy<Value = Q> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| frac(p, q))
    }

    fn arb_divisor() -> impl Strategy<Value = SymDivisor> {
        (4usize..=20, any::<bool>()).prop_flat_map(|(n, ca)| {
            let len = if ca { n / 2 - 2 } else { n / 2 - 1 };
            (arb_q(), proptest::collection::vec(arb_q(), len)).prop_map(move |(c, v)| {
                if ca {
                    SymDivisor::CA(SymDivisorCA::new(n, c, v).unwrap())
                } else {
                    SymDivisor::B(SymDivisorB::new(n, v).unwrap())
                }
            })
        })
    }

    proptest! {
        #[test]
        fn text_and_json_roundtrip(d in arb_divisor()) {
            let t = d.to_text();
            let back = SymDivisor::parse_text(&t).unwrap();
            prop_assert_eq!(&back, &d);
            prop_assert_eq!(back.to_text(), t);
            let j = d.to_json();
            let back = SymDivisor::parse_json(&j).unwrap();
            prop_assert_eq!(&back, &d);
            prop_assert_eq!(back.to_json(), j);
        }

        #[test]
        fn parsers_never_panic(s in "\\PC{0,60}") {
            let _ = SymDivisor::parse_text(&s);
            let _ = SymDivisor::parse_json(&s);
        }
    }
}
