use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field specification file: `{"m": 3, "base_poly": "b", "ext_poly": ["1","1","0","1"]}`.
///
/// Polynomials are hex bitmasks; `ext_poly` lists the cubic's coefficients
/// from the constant term up. Missing polynomials default to the built-in
/// choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_poly: Option<[String; 4]>,
}

fn parse_hex(s: &str) -> Result<u32> {
    let digits = s.trim();
    let digits = digits.strip_prefix("0x").or_else(|| digits.strip_prefix("0X")).unwrap_or(digits);
    u32::from_str_radix(digits, 16).map_err(|_| Error::FieldSpec(format!("bad hex value {s:?}")))
}

impl FieldSpec {
    pub fn from_polys(m: u32, base_poly: u32, ext_poly: [u16; 4]) -> Self {
        FieldSpec {
            m,
            base_poly: Some(format!("{base_poly:x}")),
            ext_poly: Some(ext_poly.map(|c| format!("{c:x}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::FieldSpec(e.to_string()))
    }

    pub fn base_poly(&self) -> Result<Option<u32>> {
        self.base_poly.as_deref().map(parse_hex).transpose()
    }

    pub fn ext_poly(&self) -> Result<Option<[u16; 4]>> {
        let Some(coeffs) = &self.ext_poly else {
            return Ok(None);
        };
        let mut out = [0u16; 4];
        for (o, c) in out.iter_mut().zip(coeffs) {
            let v = parse_hex(c)?;
            *o = u16::try_from(v).map_err(|_| Error::FieldSpec(format!("coefficient {c:?} too large")))?;
        }
        Ok(Some(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    #[test]
    fn spec_round_trip() {
        let f = FieldTower::new(3).unwrap();
        let json = serde_json::to_string(&f.spec()).unwrap();
        assert!(json.starts_with(r#"{"m":3,"base_poly":"b","ext_poly":["#));
        let g = FieldTower::from_spec(&FieldSpec::from_json(&json).unwrap()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn defaults_and_errors() {
        let s = FieldSpec::from_json(r#"{"m": 2}"#).unwrap();
        assert_eq!(FieldTower::from_spec(&s).unwrap(), FieldTower::new(2).unwrap());
        let bad = FieldSpec::from_json(r#"{"m": 2, "base_poly": "5"}"#).unwrap();
        assert_eq!(FieldTower::from_spec(&bad).unwrap_err(), Error::ReducibleBase(5));
        let reducible_cubic =
            FieldSpec::from_json(r#"{"m": 1, "base_poly": "2", "ext_poly": ["1","1","1","1"]}"#).unwrap();
        assert_eq!(FieldTower::from_spec(&reducible_cubic).unwrap_err(), Error::ReducibleExtension);
        assert!(FieldSpec::from_json("{").is_err());
    }
}
