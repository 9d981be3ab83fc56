//! Shipped tables and the optional atlas numbering file.

use std::collections::HashMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{canonical_form, CanonicalForm, GeneralGraph};
use crate::mlist::MultiplicityList;

const RESIDUALS: &str = include_str!("../data/six_vertex_residuals.tsv");
const SKEW_TABLE: &str = include_str!("../data/skew_five_vertex_lists.tsv");
const SKEW_EXCEPTIONS: &str = include_str!("../data/skew_exceptions.tsv");

/// Location of the atlas numbering file in the source tree.
pub const DEFAULT_ATLAS_PATH: &str =
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/atlas_connected.g6");

fn data_rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(k, l)| (k + 1, l.split('\t').collect()))
}

fn bad(line: usize, reason: impl Into<String>) -> Error {
    Error::Data {
        line,
        reason: reason.into(),
    }
}

fn parse_graph(line: usize, g6: &str) -> Result<GeneralGraph> {
    GeneralGraph::from_graph6(g6).map_err(|e| bad(line, e.to_string()))
}

fn parse_lists(line: usize, field: &str) -> Result<Vec<MultiplicityList>> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e: Error| bad(line, e.to_string())))
        .collect()
}

/// Atlas identifiers for small connected graphs, keyed by canonical form.
#[derive(Clone, Debug, Default)]
pub struct Atlas {
    by_form: HashMap<CanonicalForm, u32>,
    by_id: HashMap<u32, GeneralGraph>,
}

impl Atlas {
    pub fn parse(text: &str) -> Result<Self> {
        let mut atlas = Atlas::default();
        for (line, fields) in data_rows(text) {
            let [id, g6] = fields[..] else {
                return Err(bad(line, "expected `id<TAB>graph6`"));
            };
            let id: u32 = id
                .trim()
                .parse()
                .map_err(|_| bad(line, format!("bad atlas id `{id}`")))?;
            let g = parse_graph(line, g6.trim())?;
            atlas.by_form.insert(canonical_form(&g), id);
            atlas.by_id.insert(id, g);
        }
        Ok(atlas)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| bad(0, format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    /// The file shipped in the source tree, if it is still there.
    pub fn installed() -> Option<Self> {
        Self::load(DEFAULT_ATLAS_PATH).ok()
    }

    pub fn id_of(&self, g: &GeneralGraph) -> Option<u32> {
        self.id_of_form(&canonical_form(g))
    }

    pub fn id_of_form(&self, form: &CanonicalForm) -> Option<u32> {
        self.by_form.get(form).copied()
    }

    pub fn graph(&self, id: u32) -> Option<&GeneralGraph> {
        self.by_id.get(&id)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }
}

/// A six-vertex list that the forcing pipeline cannot rule out but which is
/// known to be infeasible for another reason.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualAnnotation {
    pub atlas_id: u32,
    pub graph6: String,
    #[serde(skip)]
    pub form: CanonicalForm,
    /// Lists exactly as printed.
    pub verbatim: String,
    /// Parsed lists, or `None` when the printed notation is not a plain list.
    pub lists: Option<Vec<MultiplicityList>>,
    pub reason: String,
}

pub fn residual_annotations() -> Vec<ResidualAnnotation> {
    data_rows(RESIDUALS)
        .map(|(line, f)| {
            let g = parse_graph(line, f[1]).expect("shipped residual table is valid");
            let lists: Option<Vec<MultiplicityList>> = f[2]
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<MultiplicityList>()
                        .ok()
                        .filter(|l| l.total() == 6)
                })
                .collect();
            ResidualAnnotation {
                atlas_id: f[0].parse().expect("shipped residual table is valid"),
                graph6: f[1].to_string(),
                form: canonical_form(&g),
                verbatim: f[2].to_string(),
                lists,
                reason: f[3].to_string(),
            }
        })
        .collect()
}

/// One row of the five-vertex skew table.
#[derive(Clone, Debug, Serialize)]
pub struct SkewTableRow {
    pub atlas_id: u32,
    pub graph6: String,
    #[serde(skip)]
    pub form: CanonicalForm,
    pub feasible: Vec<MultiplicityList>,
    /// Lists printed struck through: infeasible, not ruled out by forcing alone.
    pub struck: Vec<MultiplicityList>,
}

pub fn skew_five_vertex_table() -> Vec<SkewTableRow> {
    data_rows(SKEW_TABLE)
        .map(|(line, f)| {
            let g = parse_graph(line, f[1]).expect("shipped skew table is valid");
            SkewTableRow {
                atlas_id: f[0].parse().expect("shipped skew table is valid"),
                graph6: f[1].to_string(),
                form: canonical_form(&g),
                feasible: parse_lists(line, f[2]).expect("shipped skew table is valid"),
                struck: parse_lists(line, f.get(3).copied().unwrap_or(""))
                    .expect("shipped skew table is valid"),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SkewException {
    pub graph6: String,
    #[serde(skip)]
    pub form: CanonicalForm,
    pub list: MultiplicityList,
    pub citation: String,
}

/// Lists known to be infeasible by arguments outside the forcing pipeline.
#[derive(Clone, Debug, Default)]
pub struct ExceptionData {
    entries: Vec<SkewException>,
}

impl ExceptionData {
    /// Lines `graph6<TAB>list<TAB>citation`; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (line, f) in data_rows(text) {
            let [g6, list, citation] = f[..] else {
                return Err(bad(line, "expected `graph6<TAB>list<TAB>citation`"));
            };
            let g = parse_graph(line, g6)?;
            entries.push(SkewException {
                graph6: g6.to_string(),
                form: canonical_form(&g),
                list: list.parse().map_err(|e: Error| bad(line, e.to_string()))?,
                citation: citation.to_string(),
            });
        }
        Ok(ExceptionData { entries })
    }

    pub fn shipped() -> Self {
        Self::parse(SKEW_EXCEPTIONS).expect("shipped exception data is valid")
    }

    pub fn lookup(&self, form: &CanonicalForm, list: &MultiplicityList) -> Option<&SkewException> {
        self.entries
            .iter()
            .find(|e| &e.form == form && &e.list == list)
    }

    pub fn entries(&self) -> &[SkewException] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_tables_parse() {
        let res = residual_annotations();
        assert_eq!(res.len(), 13);
        assert!(res
            .iter()
            .all(|r| GeneralGraph::from_graph6(&r.graph6).unwrap().n() == 6));
        let unparsed: Vec<u32> = res
            .iter()
            .filter(|r| r.lists.is_none())
            .map(|r| r.atlas_id)
            .collect();
        assert_eq!(unparsed, vec![105]);
        let skew = skew_five_vertex_table();
        assert_eq!(skew.len(), 21);
        assert_eq!(ExceptionData::shipped().entries().len(), 1);
    }

    #[test]
    fn atlas_round_trip() {
        let atlas = Atlas::parse("# comment\n3\tA_\n7\tBw\n").unwrap();
        assert_eq!(atlas.id_of(&GeneralGraph::complete(3).unwrap()), Some(7));
        assert_eq!(atlas.graph(3).unwrap().edge_count(), 1);
        assert!(Atlas::parse("x\tA_\n").is_err());
    }

    #[test]
    fn installed_atlas_covers_small_graphs() {
        if let Some(atlas) = Atlas::installed() {
            assert_eq!(atlas.len(), 1 + 1 + 2 + 6 + 21 + 112);
        }
    }
}
