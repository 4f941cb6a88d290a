//! Seed JSON: `{"n": 2, "B": [[0,2],[-2,0]], "cluster": ["x1", "x2"]}`.
//!
//! `n` is required and must match the size of `B`; `cluster` is optional and
//! defaults to the initial variables. Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use super::{ClusterError, ClusterVariable, ExchangeMatrix, Seed};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSpec {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<Vec<String>>,
}

impl SeedSpec {
    pub fn into_seed(self) -> Result<Seed, ClusterError> {
        let n = self.n;
        if n == 0 {
            return Err(ClusterError::InvalidSeed("\"n\" must be at least 1".into()));
        }
        if self.b.len() != n {
            return Err(ClusterError::InvalidSeed(format!(
                "\"B\" has {} rows but \"n\" is {n}",
                self.b.len()
            )));
        }
        let matrix = ExchangeMatrix::from_rows(&self.b)?;
        match self.cluster {
            None => Ok(Seed::initial(matrix)),
            Some(entries) => {
                if entries.len() != n {
                    return Err(ClusterError::InvalidSeed(format!(
                        "\"cluster\" has {} entries but \"n\" is {n}",
                        entries.len()
                    )));
                }
                let cluster = entries
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        ClusterVariable::parse(s, n).map_err(|e| {
                            ClusterError::InvalidSeed(format!("\"cluster\" entry {}: {e}", i + 1))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Seed::new(cluster, matrix)
            }
        }
    }
}

impl Seed {
    pub fn from_json(text: &str) -> Result<Self, ClusterError> {
        let spec: SeedSpec =
            serde_json::from_str(text).map_err(|e| ClusterError::InvalidSeed(format!("malformed seed JSON: {e}")))?;
        spec.into_seed()
    }

    pub fn to_spec(&self) -> SeedSpec {
        SeedSpec {
            n: self.rank(),
            b: self.matrix().rows(),
            cluster: Some(self.cluster_strings()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("seed serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_cluster_by_default() {
        let s = Seed::from_json(r#"{"n": 2, "B": [[0,2],[-2,0]]}"#).unwrap();
        assert_eq!(s, Seed::annulus());
        assert_eq!(s.to_json(), r#"{"n":2,"B":[[0,2],[-2,0]],"cluster":["x1","x2"]}"#);
    }

    #[test]
    fn round_trip_after_mutation() {
        let s = Seed::markov().mutate(2).unwrap();
        assert_eq!(Seed::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn validation_messages() {
        let err = |t: &str| Seed::from_json(t).unwrap_err().to_string();
        assert!(err(r#"{"n": 3, "B": [[0,2],[-2,0]]}"#).contains("2 rows"));
        assert!(err(r#"{"n": 2, "B": [[0,2],[2,0]]}"#).starts_with("NotSkewSymmetric"));
        assert!(err(r#"{"n": 2, "B": [[0,2],[-2]]}"#).contains("row 2 has 1 entries"));
        assert!(err(r#"{"n": 2, "B": [[0,2],[-2,0]], "extra": 1}"#).contains("unknown field"));
        assert!(err(r#"{"n": 2, "B": [[0,2],[-2,0]], "cluster": ["x1"]}"#).contains("1 entries"));
        assert!(err(r#"{"n": 2, "B": [[0,2],[-2,0]], "cluster": ["x1", "x5"]}"#).contains("entry 2"));
        assert!(err(r#"{"B": [[0]]}"#).contains("missing field `n`"));
    }
}
