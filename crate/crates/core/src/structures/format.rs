use serde::{Deserialize, Serialize};

use super::{Relation, Structure};
use crate::{Error, Result};

/// On-disk form: `{"domain": n, "relations": [{"name", "arity", "tuples"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub domain: usize,
    pub relations: Vec<RelationFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub name: String,
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
}

impl From<&Structure> for StructureFile {
    fn from(s: &Structure) -> Self {
        StructureFile {
            domain: s.size,
            relations: s
                .relations
                .iter()
                .map(|r| RelationFile {
                    name: r.name.clone(),
                    arity: r.arity,
                    tuples: r.tuples.clone(),
                })
                .collect(),
        }
    }
}

impl Structure {
    /// Parses and validates the JSON structure format.
    pub fn from_json(text: &str) -> Result<Structure> {
        let file: StructureFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let relations = file
            .relations
            .into_iter()
            .map(|r| Relation::new(r.name, r.arity, r.tuples))
            .collect();
        let s = Structure::new(file.domain, relations);
        s.validate().map_err(|v| {
            let joined: Vec<String> = v.iter().map(ToString::to_string).collect();
            Error::InvalidStructure(joined.join("; "))
        })?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StructureFile::from(self)).expect("structure serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&StructureFile::from(self)).expect("structure serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = Structure::new(
            3,
            vec![
                Relation::new("R", 2, vec![vec![0, 1], vec![2, 2]]),
                Relation::new("U", 1, vec![]),
            ],
        );
        assert_eq!(Structure::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(Structure::from_json(&s.to_json_pretty()).unwrap(), s);
    }

    #[test]
    fn rejects_invalid() {
        let err = Structure::from_json(r#"{"domain":2,"relations":[{"name":"R","arity":2,"tuples":[[0,2]]}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("out of domain"));
        let err = Structure::from_json("{\n\"domain\": 2,\n\"relations\": [}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }
}
