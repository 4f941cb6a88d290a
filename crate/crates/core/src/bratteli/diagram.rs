use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::BratteliError;
use crate::matrix::IntMatrix;

/// A leveled graph; vertex `i` at level `m` is written `(m, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliDiagram {
    levels: Vec<usize>,
    /// `edges[m]` maps `(i, j)` to the multiplicity of `(m, i) -> (m + 1, j)`.
    edges: Vec<BTreeMap<(usize, usize), u64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    from: [usize; 2],
    to: [usize; 2],
    mult: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramJson {
    levels: Vec<usize>,
    edges: Vec<EdgeJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StationaryJson {
    matrix: Vec<Vec<i64>>,
    repeat: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = BratteliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(Self::Dot),
            "json" => Ok(Self::Json),
            other => Err(BratteliError::UnknownFormat(other.to_string())),
        }
    }
}

impl BratteliDiagram {
    pub fn new(levels: Vec<usize>, edges: Vec<BTreeMap<(usize, usize), u64>>) -> Result<Self, BratteliError> {
        let invalid = |msg: String| Err(BratteliError::InvalidDiagram(msg));
        if levels.is_empty() {
            return invalid("a diagram needs at least one level".into());
        }
        if let Some(m) = levels.iter().position(|&s| s == 0) {
            return invalid(format!("level {m} has no vertices"));
        }
        if edges.len() + 1 != levels.len() {
            return invalid(format!(
                "{} levels need {} edge groups, got {}",
                levels.len(),
                levels.len() - 1,
                edges.len()
            ));
        }
        for (m, group) in edges.iter().enumerate() {
            for (&(i, j), &mult) in group {
                if i >= levels[m] || j >= levels[m + 1] {
                    return invalid(format!("edge ({m},{i}) -> ({},{j}) names a missing vertex", m + 1));
                }
                if mult == 0 {
                    return invalid(format!("edge ({m},{i}) -> ({},{j}) has multiplicity 0", m + 1));
                }
            }
            for j in 0..levels[m + 1] {
                if !group.keys().any(|&(_, t)| t == j) {
                    return invalid(format!("vertex ({},{j}) has no incoming edge", m + 1));
                }
            }
        }
        Ok(Self { levels, edges })
    }

    /// Diagram whose step `m -> m+1` has incidence matrix `matrices[m]`
    /// (rows index level `m+1`, columns level `m`).
    pub fn from_incidence(matrices: &[IntMatrix]) -> Result<Self, BratteliError> {
        let Some(first) = matrices.first() else {
            return Err(BratteliError::InvalidDiagram("no incidence matrices".into()));
        };
        let mut levels = vec![first.cols()];
        let mut edges = Vec::new();
        for (m, a) in matrices.iter().enumerate() {
            if a.cols() != levels[m] {
                return Err(BratteliError::InvalidDiagram(format!(
                    "matrix {m} has {} columns but level {m} has {} vertices",
                    a.cols(),
                    levels[m]
                )));
            }
            let mut group = BTreeMap::new();
            for r in 0..a.rows() {
                for s in 0..a.cols() {
                    let v = a.get(r, s);
                    if v < 0 {
                        return Err(BratteliError::InvalidDiagram(format!("matrix {m} has a negative entry")));
                    }
                    if v > 0 {
                        group.insert((s, r), v as u64);
                    }
                }
            }
            levels.push(a.rows());
            edges.push(group);
        }
        Self::new(levels, edges)
    }

    /// `repeat` copies of a square matrix.
    pub fn stationary(matrix: &IntMatrix, repeat: usize) -> Result<Self, BratteliError> {
        if repeat > 1 && !matrix.is_square() {
            return Err(BratteliError::InvalidDiagram("a repeated matrix must be square".into()));
        }
        Self::from_incidence(&vec![matrix.clone(); repeat.max(1)])
    }

    /// The Pascal (GICAR) diagram with levels `0..=depth`.
    pub fn pascal(depth: usize) -> Self {
        let matrices: Vec<IntMatrix> = (0..depth)
            .map(|m| {
                let mut a = IntMatrix::zeros(m + 2, m + 1);
                for k in 0..=m {
                    a.set(k, k, 1);
                    a.set(k + 1, k, 1);
                }
                a
            })
            .collect();
        if matrices.is_empty() {
            return Self {
                levels: vec![1],
                edges: Vec::new(),
            };
        }
        Self::from_incidence(&matrices).expect("pascal diagram is valid")
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn multiplicity(&self, level: usize, from: usize, to: usize) -> u64 {
        self.edges
            .get(level)
            .and_then(|g| g.get(&(from, to)))
            .copied()
            .unwrap_or(0)
    }

    pub fn edges(&self, level: usize) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.edges[level].iter().map(|(&k, &v)| (k, v))
    }

    pub fn incidence_matrix(&self, level: usize) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.levels[level + 1], self.levels[level]);
        for (&(s, r), &mult) in &self.edges[level] {
            a.set(r, s, mult as i64);
        }
        a
    }

    /// Incidence matrices of every step, rows indexing the upper level.
    pub fn incidence_matrices(&self) -> Vec<IntMatrix> {
        (0..self.depth()).map(|m| self.incidence_matrix(m)).collect()
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Dot => self.to_dot(),
            ExportFormat::Json => self.to_json(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bratteli {\n");
        for (m, &size) in self.levels.iter().enumerate() {
            out.push_str("  { rank=same;");
            for i in 0..size {
                let _ = write!(out, " L{m}_{i};");
            }
            out.push_str(" }\n");
        }
        for (m, group) in self.edges.iter().enumerate() {
            for (&(i, j), &mult) in group {
                let _ = write!(out, "  L{m}_{i} -> L{}_{j}", m + 1);
                if mult > 1 {
                    let _ = write!(out, " [label=\"{mult}\"]");
                }
                out.push_str(";\n");
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(m, g)| {
                g.iter().map(move |(&(i, j), &mult)| EdgeJson {
                    from: [m, i],
                    to: [m + 1, j],
                    mult,
                })
            })
            .collect();
        serde_json::to_string(&DiagramJson {
            levels: self.levels.clone(),
            edges,
        })
        .expect("diagram serializes")
    }

    /// Accepts the export schema or `{"matrix": [[...]], "repeat": N}`.
    pub fn from_json(text: &str) -> Result<Self, BratteliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| BratteliError::InvalidDiagram(format!("malformed JSON: {e}")))?;
        if value.get("matrix").is_some() {
            let s: StationaryJson = serde_json::from_value(value)
                .map_err(|e| BratteliError::InvalidDiagram(format!("stationary diagram: {e}")))?;
            let a = IntMatrix::from_rows(&s.matrix)
                .ok_or_else(|| BratteliError::InvalidDiagram("\"matrix\" must be a non-empty rectangular array".into()))?;
            return Self::stationary(&a, s.repeat);
        }
        let d: DiagramJson =
            serde_json::from_value(value).map_err(|e| BratteliError::InvalidDiagram(format!("diagram: {e}")))?;
        let mut edges = vec![BTreeMap::new(); d.levels.len().saturating_sub(1)];
        for e in d.edges {
            let m = e.from[0];
            if e.to[0] != m + 1 || m >= edges.len() {
                return Err(BratteliError::InvalidDiagram(format!(
                    "edge {:?} -> {:?} must join consecutive existing levels",
                    e.from, e.to
                )));
            }
            if edges[m].insert((e.from[1], e.to[1]), e.mult).is_some() {
                return Err(BratteliError::InvalidDiagram(format!("duplicate edge {:?} -> {:?}", e.from, e.to)));
            }
        }
        Self::new(d.levels, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_shapes() {
        let p = BratteliDiagram::pascal(3);
        assert_eq!(p.levels(), &[1, 2, 3, 4]);
        assert_eq!(p.incidence_matrix(0).to_rows(), vec![vec![1], vec![1]]);
        assert_eq!(p.incidence_matrix(1).to_rows(), vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert_eq!(BratteliDiagram::pascal(0).levels(), &[1]);
    }

    #[test]
    fn dot_format() {
        let path = BratteliDiagram::stationary(&IntMatrix::identity(1), 1).unwrap();
        let dot = path.to_dot();
        assert_eq!(dot, "digraph bratteli {\n  { rank=same; L0_0; }\n  { rank=same; L1_0; }\n  L0_0 -> L1_0;\n}\n");
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 1);

        let two = BratteliDiagram::stationary(&IntMatrix::from_rows(&[vec![2]]).unwrap(), 1).unwrap();
        assert!(two.to_dot().contains("L0_0 -> L1_0 [label=\"2\"];"));

        let single = BratteliDiagram::pascal(0).to_dot();
        assert_eq!(single, "digraph bratteli {\n  { rank=same; L0_0; }\n}\n");
    }

    #[test]
    fn json_round_trip() {
        let p = BratteliDiagram::pascal(2);
        let text = p.to_json();
        assert!(text.starts_with(r#"{"levels":[1,2,3],"edges":[{"from":[0,0],"to":[1,0],"mult":1}"#));
        assert_eq!(BratteliDiagram::from_json(&text).unwrap(), p);
    }

    #[test]
    fn stationary_json_input() {
        let d = BratteliDiagram::from_json(r#"{"matrix": [[1,1],[1,0]], "repeat": 3}"#).unwrap();
        assert_eq!(d.levels(), &[2, 2, 2, 2]);
        assert_eq!(d.multiplicity(2, 0, 1), 1);
        assert_eq!(d.multiplicity(2, 1, 1), 0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(BratteliDiagram::from_json(r#"{"levels":[1,1],"edges":[]}"#).is_err());
        assert!(BratteliDiagram::from_json(r#"{"levels":[1,1],"edges":[{"from":[0,0],"to":[2,0],"mult":1}]}"#).is_err());
        assert!(BratteliDiagram::from_json(r#"{"matrix":[[1,1]],"repeat":2}"#).is_err());
        assert!("svg".parse::<ExportFormat>().is_err());
    }
}
