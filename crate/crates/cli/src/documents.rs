//! JSON documents read and written by the command line.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use topoforge::assignment::SetAssignment;
use topoforge::category::ContinuousMap;
use topoforge::{FiniteSpace, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub n: usize,
    pub opens: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// For power-set spaces: the subset of the ground set each point stands for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground: Option<Vec<Vec<usize>>>,
}

fn points(universe: usize, field: &str, list: &[usize]) -> Result<PointSet> {
    if let Some(p) = list.iter().find(|&&p| p >= universe) {
        bail!("{field}: point {p} is outside 0..{universe}");
    }
    PointSet::from_points(universe, list.iter().copied()).map_err(|e| anyhow!("{field}: {e}"))
}

impl SpaceDocument {
    pub fn from_space(space: &FiniteSpace) -> Self {
        SpaceDocument {
            n: space.n(),
            opens: space.opens().iter().map(|u| u.to_vec()).collect(),
            labels: None,
            ground: None,
        }
    }

    pub fn to_space(&self) -> Result<FiniteSpace> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                bail!("labels: expected {} entries, found {}", self.n, labels.len());
            }
        }
        let opens = self
            .opens
            .iter()
            .enumerate()
            .map(|(i, u)| points(self.n, &format!("opens[{i}]"), u))
            .collect::<Result<Vec<_>>>()?;
        FiniteSpace::from_opens(self.n, opens).map_err(|e| anyhow!("opens: {e}"))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn read_space(path: &Path) -> Result<FiniteSpace> {
    let doc: SpaceDocument = read_json(path)?;
    doc.to_space().map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn list_block(key: &str, lists: &[Vec<usize>]) -> Result<String> {
    let rows = lists.iter().map(serde_json::to_string).collect::<Result<Vec<_>, _>>()?;
    Ok(format!("  \"{key}\": [\n    {}\n  ]", rows.join(",\n    ")))
}

impl SpaceDocument {
    /// Pretty JSON with one open (and one ground subset) per line.
    pub fn to_text(&self) -> Result<String> {
        let mut fields = vec![format!("  \"n\": {}", self.n), list_block("opens", &self.opens)?];
        if let Some(labels) = &self.labels {
            fields.push(format!("  \"labels\": {}", serde_json::to_string(labels)?));
        }
        if let Some(ground) = &self.ground {
            fields.push(list_block("ground", ground)?);
        }
        Ok(format!("{{\n{}\n}}\n", fields.join(",\n")))
    }
}

pub fn write_space(path: &Path, doc: &SpaceDocument) -> Result<()> {
    fs::write(path, doc.to_text()?).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Domain {
    Size(usize),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDocument {
    pub domain: Domain,
    pub sets: Vec<Vec<usize>>,
}

impl AssignmentDocument {
    pub fn to_assignment(&self, space: &FiniteSpace) -> Result<SetAssignment> {
        let sets = self
            .sets
            .iter()
            .enumerate()
            .map(|(i, s)| points(space.n(), &format!("sets[{i}]"), s))
            .collect::<Result<Vec<_>>>()?;
        match &self.domain {
            Domain::Named(name) if name == "points" => {
                if sets.len() != space.n() {
                    bail!("sets: domain \"points\" needs {} sets, found {}", space.n(), sets.len());
                }
                Ok(SetAssignment::on_points(space, sets)?)
            }
            Domain::Named(name) => bail!("domain: expected a number or \"points\", found \"{name}\""),
            Domain::Size(m) => {
                if sets.len() != *m {
                    bail!("sets: domain {m} needs {m} sets, found {}", sets.len());
                }
                Ok(SetAssignment::new(space, sets)?)
            }
        }
    }

    /// Neighborhood form: one set per point, each containing its point.
    pub fn to_neighborhood(&self, space: &FiniteSpace) -> Result<SetAssignment> {
        let a = self.to_assignment(space)?;
        if !a.indexed_by_points() && a.domain_size() != space.n() {
            bail!("sets: a neighborhood assignment needs one set per point");
        }
        if let Some(x) = (0..space.n()).find(|&x| !a.set(x).contains(x)) {
            bail!("sets[{x}]: point {x} is not in its own set N({x}) = {}", a.set(x));
        }
        Ok(SetAssignment::neighborhood(space, a.sets().to_vec())?)
    }
}

pub fn read_assignment(path: &Path) -> Result<AssignmentDocument> {
    read_json(path)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub from: PathBuf,
    pub to: PathBuf,
    pub values: Vec<usize>,
}

/// Reads a map document; its space paths are resolved against the document's directory.
pub fn read_map(path: &Path) -> Result<ContinuousMap> {
    let doc: MapDocument = read_json(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let from = read_space(&base.join(&doc.from))?;
    let to = read_space(&base.join(&doc.to))?;
    ContinuousMap::new(from, to, doc.values).map_err(|e| anyhow!("{}: values: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_round_trip() {
        let s = FiniteSpace::sierpinski();
        let doc = SpaceDocument::from_space(&s);
        assert_eq!(doc.opens, vec![vec![], vec![0], vec![0, 1]]);
        assert_eq!(doc.to_space().unwrap(), s);
        let text = serde_json::to_string(&doc).unwrap();
        let back: SpaceDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(SpaceDocument::from_space(&back.to_space().unwrap()), doc);
    }

    #[test]
    fn text_form_parses_back() {
        let mut doc = SpaceDocument::from_space(&FiniteSpace::sierpinski());
        doc.labels = Some(vec!["a".into(), "b".into()]);
        doc.ground = Some(vec![vec![], vec![0]]);
        let text = doc.to_text().unwrap();
        assert!(text.contains("\n    [0,1]\n"), "{text}");
        let back: SpaceDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn unsorted_opens_round_trip_to_canonical_order() {
        let doc = SpaceDocument { n: 2, opens: vec![vec![1, 0], vec![], vec![0]], labels: None, ground: None };
        let canonical = SpaceDocument::from_space(&doc.to_space().unwrap());
        assert_eq!(canonical.opens, vec![vec![], vec![0], vec![0, 1]]);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let doc = SpaceDocument { n: 2, opens: vec![vec![], vec![0, 5]], labels: None, ground: None };
        assert_eq!(doc.to_space().unwrap_err().to_string(), "opens[1]: point 5 is outside 0..2");
        let doc = SpaceDocument { n: 2, opens: vec![vec![], vec![0], vec![1]], labels: None, ground: None };
        let msg = doc.to_space().unwrap_err().to_string();
        assert!(msg.contains("opens not closed under union"), "{msg}");
        let doc = SpaceDocument { n: 1, opens: vec![vec![], vec![0]], labels: Some(vec![]), ground: None };
        assert!(doc.to_space().unwrap_err().to_string().starts_with("labels:"));
    }

    #[test]
    fn assignment_domains() {
        let s = FiniteSpace::sierpinski();
        let doc: AssignmentDocument = serde_json::from_str(r#"{"domain":"points","sets":[[0],[0,1]]}"#).unwrap();
        assert!(doc.to_neighborhood(&s).unwrap().is_neighborhood());
        let doc: AssignmentDocument = serde_json::from_str(r#"{"domain":2,"sets":[[0],[0,1]]}"#).unwrap();
        assert!(!doc.to_assignment(&s).unwrap().indexed_by_points());
        let doc: AssignmentDocument = serde_json::from_str(r#"{"domain":"points","sets":[[0],[0]]}"#).unwrap();
        assert!(doc.to_neighborhood(&s).unwrap_err().to_string().contains("point 1"));
        let doc: AssignmentDocument = serde_json::from_str(r#"{"domain":"pts","sets":[]}"#).unwrap();
        assert!(doc.to_assignment(&s).is_err());
    }
}
