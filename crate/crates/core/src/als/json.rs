use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Als, LinearPencil};
use crate::error::{Error, Result};
use crate::qlinalg::{format_rational, parse_rational, MatQ};

/// Wire format; every number is a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlsJson {
    pub letters: Vec<String>,
    pub dim: usize,
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub pencil: BTreeMap<String, MatQ>,
}

impl AlsJson {
    pub fn from_als(f: &Als, letters: &[String]) -> Result<Self> {
        if letters.len() != f.d() {
            return Err(Error::DimensionMismatch(format!(
                "{} letter names for an alphabet of size {}",
                letters.len(),
                f.d()
            )));
        }
        let mut pencil = BTreeMap::new();
        pencil.insert("1".to_string(), f.a(0).clone());
        for (i, l) in letters.iter().enumerate() {
            pencil.insert(l.clone(), f.a(i + 1).clone());
        }
        Ok(AlsJson {
            letters: letters.to_vec(),
            dim: f.dim(),
            u: f.u.entries().iter().map(format_rational).collect(),
            v: f.v.entries().iter().map(format_rational).collect(),
            pencil,
        })
    }

    pub fn to_als(&self) -> Result<Als> {
        let n = self.dim;
        let d = self.letters.len();
        let bad = |m: String| Error::Json(m);
        if self.u.len() != n || self.v.len() != n {
            return Err(bad("u and v must have dim entries".into()));
        }
        let mut p = LinearPencil::zeros(n, d);
        for (key, m) in &self.pencil {
            let idx = if key == "1" {
                0
            } else {
                1 + self
                    .letters
                    .iter()
                    .position(|l| l == key)
                    .ok_or_else(|| bad(format!("pencil key {key:?} is not a declared letter")))?
            };
            if m.rows() != n || m.cols() != n {
                if !(n == 0 && m.rows() == 0) {
                    return Err(bad(format!("pencil matrix {key:?} is not {n}x{n}")));
                }
                continue;
            }
            p.coeffs[idx] = m.clone();
        }
        let u: Vec<_> = self.u.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        let v: Vec<_> = self.v.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        let f = Als::new(p, MatQ::from_vec(n, 1, v)?)?;
        if f.u.entries() != u.as_slice() {
            return Err(Error::NotAdmissible("u must be e_1".into()));
        }
        Ok(f)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_str;

    #[test]
    fn roundtrip() {
        let letters: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let f = eval_str("(1 - x*y)^-1 + 1/2*z", &["x", "y", "z"]).unwrap();
        let j = AlsJson::from_als(&f, &letters).unwrap();
        let text = j.to_string_pretty();
        let back = AlsJson::parse(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.to_als().unwrap(), f);
        assert!(text.contains("/2\""));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(AlsJson::parse("{").is_err());
        let j = AlsJson {
            letters: vec!["x".into()],
            dim: 1,
            u: vec!["0".into()],
            v: vec!["1".into()],
            pencil: BTreeMap::from([("1".to_string(), MatQ::identity(1))]),
        };
        assert!(matches!(j.to_als(), Err(Error::NotAdmissible(_))));
    }
}
