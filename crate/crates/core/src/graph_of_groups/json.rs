use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::graph::{Edge, GraphOfGroups, Letter, Vertex};
use super::lattice::{IntMatrix, Lattice};
use super::normal_form::NormalForm;
use super::GroupError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexSpec {
    pub id: String,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub minus: Vec<Vec<i64>>,
    pub plus: Vec<Vec<i64>>,
    #[serde(default)]
    pub tree: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    pub base: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SyllableSpec {
    pub z: Vec<String>,
    pub edge: String,
    pub sign: i8,
}

/// A normal form as a list of syllables plus a tail, integers as decimal
/// strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WordSpec {
    pub syllables: Vec<SyllableSpec>,
    pub tail: Vec<String>,
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn parse_ints(v: &[String]) -> Result<Vec<BigInt>, GroupError> {
    v.iter()
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| GroupError::InvalidInput(format!("not an integer: {s:?}")))
        })
        .collect()
}

impl GraphOfGroups {
    pub fn from_spec(spec: &GraphSpec) -> Result<Self, GroupError> {
        let vertices: Vec<Vertex> = spec
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id.clone(),
                rank: v.rank,
            })
            .collect();
        let find = |id: &str| {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| GroupError::InvalidInput(format!("unknown vertex {id:?}")))
        };
        let edges = spec
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    id: e.id.clone(),
                    from: find(&e.from)?,
                    to: find(&e.to)?,
                    minus: Lattice::new(IntMatrix::from_rows(&e.minus)?)?,
                    plus: Lattice::new(IntMatrix::from_rows(&e.plus)?)?,
                    tree: e.tree,
                })
            })
            .collect::<Result<Vec<_>, GroupError>>()?;
        let base = find(&spec.base)?;
        GraphOfGroups::new(vertices, edges, base)
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let spec: GraphSpec = serde_json::from_str(text).map_err(|e| {
            GroupError::InvalidInput(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self
                .vertices()
                .iter()
                .map(|v| VertexSpec {
                    id: v.id.clone(),
                    rank: v.rank,
                })
                .collect(),
            edges: self
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    from: self.vertices()[e.from].id.clone(),
                    to: self.vertices()[e.to].id.clone(),
                    minus: e.minus.matrix().rows_i64(),
                    plus: e.plus.matrix().rows_i64(),
                    tree: e.tree,
                })
                .collect(),
            base: self.vertices()[self.base()].id.clone(),
        }
    }

    pub fn word_to_spec(&self, w: &NormalForm) -> WordSpec {
        WordSpec {
            syllables: w
                .syllables()
                .iter()
                .map(|s| SyllableSpec {
                    z: strings(&s.residue),
                    edge: self.edges()[s.letter.edge].id.clone(),
                    sign: s.letter.sign(),
                })
                .collect(),
            tail: strings(w.tail()),
        }
    }

    /// Reads a syllable list and reduces it; the input need not be reduced.
    pub fn word_from_spec(&self, spec: &WordSpec) -> Result<NormalForm, GroupError> {
        let mut r = self.reducer_at_base();
        let mut at = self.base();
        for s in &spec.syllables {
            let edge = self
                .edge_index(&s.edge)
                .ok_or_else(|| GroupError::InvalidInput(format!("unknown edge {:?}", s.edge)))?;
            let letter = match s.sign {
                1 => Letter::new(edge, false),
                -1 => Letter::new(edge, true),
                x => return Err(GroupError::InvalidInput(format!("sign must be ±1, got {x}"))),
            };
            if self.source(letter) != at {
                return Err(GroupError::InvalidInput(format!(
                    "syllable on edge {:?} does not continue the path",
                    s.edge
                )));
            }
            let z = parse_ints(&s.z)?;
            if z.len() != self.rank() {
                return Err(GroupError::InvalidInput("vector has wrong length".into()));
            }
            r.add_tail(&z);
            r.push_letter(letter);
            at = self.target(letter);
        }
        let tail = parse_ints(&spec.tail)?;
        if tail.len() != self.rank() {
            return Err(GroupError::InvalidInput("tail has wrong length".into()));
        }
        r.add_tail(&tail);
        Ok(r.finish())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BS12: &str = r#"{"vertices":[{"id":"v","rank":1}],
        "edges":[{"id":"e","from":"v","to":"v","minus":[[1]],"plus":[[2]],"tree":false}],
        "base":"v"}"#;

    #[test]
    fn parse_roundtrip() {
        let g = GraphOfGroups::from_json(BS12).unwrap();
        assert_eq!(g.tree_degree(0), BigInt::from(3));
        let again = GraphOfGroups::from_spec(&g.to_spec()).unwrap();
        assert_eq!(again.to_spec(), g.to_spec());
        let w = g.parse_word("t^2 a^-1 t^-1 a").unwrap();
        let spec = g.word_to_spec(&w);
        assert_eq!(g.word_from_spec(&spec).unwrap(), w);
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = GraphOfGroups::from_json("{\"vertices\": [}").unwrap_err();
        assert!(err.to_string().contains("line 1"));
        let singular = BS12.replace("[[1]]", "[[0]]");
        assert!(matches!(
            GraphOfGroups::from_json(&singular),
            Err(GroupError::SingularMonomorphism(_))
        ));
    }
}
