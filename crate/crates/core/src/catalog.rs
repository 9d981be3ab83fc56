//! Named graphs with their figure labels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GeneralGraph;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(serialize_with = "as_graph6")]
    pub graph: GeneralGraph,
    pub atlas_id: Option<u32>,
    pub provenance: String,
    /// Display label of each vertex, by vertex index.
    pub labels: Vec<String>,
    pub note: Option<String>,
}

fn as_graph6<S: serde::Serializer>(g: &GeneralGraph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_graph6())
}

impl CatalogEntry {
    /// Vertex index carrying a figure label.
    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Vertex indices for a list of figure labels; panics on unknown labels.
    pub fn vertices(&self, labels: &[&str]) -> Vec<usize> {
        labels
            .iter()
            .map(|l| {
                self.vertex(l)
                    .unwrap_or_else(|| panic!("`{}` has no vertex `{l}`", self.name))
            })
            .collect()
    }
}

/// Stable names accepted by [`lookup`], excluding the parametrised families
/// `p<n>`, `c<n>`, `k<n>`, `star<n>`, `gl<n>` and `gl<n>e`.
pub const NAMES: &[&str] = &[
    "bftree", "bowtie", "diffdrop", "g30", "g43", "g45", "k23", "k23e", "g46", "g170", "g179",
    "g125", "g138", "w6", "g187",
];

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn from_labelled(labels: &[&str], edges: &[(&str, &str)]) -> Result<(GeneralGraph, Vec<String>)> {
    let idx = |l: &str| {
        labels
            .iter()
            .position(|x| *x == l)
            .expect("edge label listed")
    };
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    Ok((
        GeneralGraph::from_edges(labels.len(), &pairs)?,
        labels.iter().map(|s| s.to_string()).collect(),
    ))
}

fn one_based(n: usize, edges: &[(usize, usize)]) -> Result<(GeneralGraph, Vec<String>)> {
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    Ok((GeneralGraph::from_edges(n, &pairs)?, numbered(n)))
}

const K23_EDGES: [(&str, &str); 6] = [
    ("x1", "y1"),
    ("x1", "y2"),
    ("x1", "y3"),
    ("x2", "y1"),
    ("x2", "y2"),
    ("x2", "y3"),
];

fn entry(
    name: &str,
    (graph, labels): (GeneralGraph, Vec<String>),
    atlas_id: Option<u32>,
    provenance: &str,
) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        graph,
        atlas_id,
        provenance: provenance.to_string(),
        labels,
        note: None,
    }
}

fn parse_suffix(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

/// Path `p1 .. pl` attached at `p1` to `y1` of K2,3, optionally with `x1 x2`.
fn path_k23(len: usize, with_e: bool) -> Result<(GeneralGraph, Vec<String>)> {
    let mut labels: Vec<String> = ["x1", "x2", "y1", "y2", "y3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    labels.extend((1..=len).map(|i| format!("p{i}")));
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut edges: Vec<(&str, &str)> = K23_EDGES.to_vec();
    if with_e {
        edges.push(("x1", "x2"));
    }
    if len > 0 {
        edges.push(("y1", refs[5]));
    }
    for k in 6..refs.len() {
        edges.push((refs[k - 1], refs[k]));
    }
    from_labelled(&refs, &edges)
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let key = name.trim_start_matches('@').to_ascii_lowercase();
    let unknown = || Error::UnknownCatalogName(name.to_string());
    let e = match key.as_str() {
        "bftree" => entry(
            "bftree",
            one_based(
                16,
                &[
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (6, 7),
                    (7, 8),
                    (8, 9),
                    (9, 10),
                    (11, 12),
                    (12, 13),
                    (13, 14),
                    (14, 15),
                    (3, 16),
                    (16, 13),
                    (16, 8),
                ],
            )?,
            None,
            "16-vertex tree with three branches of two pendant paths, labels 1..16",
        ),
        "bowtie" => entry(
            "bowtie",
            from_labelled(
                &["vc", "v1", "v2", "v3", "v4"],
                &[
                    ("vc", "v1"),
                    ("vc", "v2"),
                    ("v1", "v2"),
                    ("vc", "v3"),
                    ("vc", "v4"),
                    ("v3", "v4"),
                ],
            )?,
            Some(42),
            "bow-tie: triangles vc-v1-v2 and vc-v3-v4",
        ),
        "diffdrop" => entry(
            "diffdrop",
            one_based(
                8,
                &[
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (6, 7),
                    (7, 8),
                    (2, 7),
                    (7, 4),
                    (3, 7),
                ],
            )?,
            None,
            "8-vertex graph with Z = 2 whose lazy square has forcing number 5",
        ),
        "g30" => entry(
            "g30",
            from_labelled(
                &["0", "1", "2", "3", "4"],
                &[("0", "1"), ("1", "2"), ("2", "3"), ("2", "4")],
            )?,
            Some(30),
            "atlas G30 (chair), figure labels 0..4",
        ),
        "g43" | "g45" => {
            let mut e = entry(
                &key,
                from_labelled(
                    &["0", "1", "2", "3", "4"],
                    &[
                        ("0", "1"),
                        ("1", "3"),
                        ("3", "2"),
                        ("2", "0"),
                        ("2", "4"),
                        ("4", "3"),
                    ],
                )?,
                Some(43),
                "house graph drawn with its odd-walk multigraph, figure labels 0..4",
            );
            e.note = Some(
                "the figure caption names this graph G43 while the accompanying text calls it G45; \
                 both names resolve to the drawn graph (the house, atlas G43)"
                    .into(),
            );
            e
        }
        "k23" => entry(
            "k23",
            from_labelled(&["x1", "x2", "y1", "y2", "y3"], &K23_EDGES)?,
            Some(44),
            "K2,3 with parts X = {x1, x2}, Y = {y1, y2, y3}",
        ),
        "k23e" | "g46" => {
            let mut edges = K23_EDGES.to_vec();
            edges.push(("x1", "x2"));
            entry(
                &key,
                from_labelled(&["x1", "x2", "y1", "y2", "y3"], &edges)?,
                Some(46),
                "K2,3 plus the edge x1 x2",
            )
        }
        "g170" | "g179" => {
            let mut edges = K23_EDGES.to_vec();
            edges.extend([("z", "x1"), ("z", "x2"), ("z", "y3")]);
            if key == "g179" {
                edges.push(("x1", "x2"));
            }
            let id = if key == "g170" { 170 } else { 179 };
            entry(
                &key,
                from_labelled(&["x1", "x2", "y1", "y2", "y3", "z"], &edges)?,
                Some(id),
                "K2,3 (plus x1 x2 for G179) with z joined to x1, x2, y3",
            )
        }
        "g125" => entry(
            "g125",
            path_k23(1, false)?,
            Some(125),
            "K2,3 with a pendant vertex p1 at y1",
        ),
        "g138" => entry(
            "g138",
            path_k23(1, true)?,
            Some(138),
            "K2,3 plus x1 x2 with a pendant vertex p1 at y1",
        ),
        "w6" | "g187" => {
            let labels = ["c", "w1", "w2", "w3", "w4", "w5"];
            let mut edges: Vec<(&str, &str)> = labels[1..].iter().map(|&w| ("c", w)).collect();
            edges.extend([
                ("w1", "w2"),
                ("w2", "w3"),
                ("w3", "w4"),
                ("w4", "w5"),
                ("w5", "w1"),
            ]);
            entry(
                &key,
                from_labelled(&labels, &edges)?,
                Some(187),
                "wheel: centre c on the cycle w1..w5",
            )
        }
        _ => {
            if let Some(len) = key.strip_suffix('e').and_then(|k| parse_suffix(k, "gl")) {
                entry(
                    &key,
                    path_k23(len, true)?,
                    None,
                    "K2,3 plus x1 x2 with a path p1..pl hung from y1",
                )
            } else if let Some(len) = parse_suffix(&key, "gl") {
                entry(
                    &key,
                    path_k23(len, false)?,
                    None,
                    "K2,3 with a path p1..pl hung from y1",
                )
            } else if let Some(n) = parse_suffix(&key, "star") {
                if n < 2 {
                    return Err(unknown());
                }
                let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, n - 1)).collect();
                let mut labels = numbered(n - 1);
                labels.push("c".into());
                entry(
                    &key,
                    (GeneralGraph::from_edges(n, &edges)?, labels),
                    None,
                    "star K1,n-1 with the centre last",
                )
            } else if let Some(n) = parse_suffix(&key, "p") {
                entry(
                    &key,
                    (GeneralGraph::path(n)?, numbered(n)),
                    None,
                    "path 1-2-..-n",
                )
            } else if let Some(n) = parse_suffix(&key, "c") {
                if n < 3 {
                    return Err(unknown());
                }
                entry(
                    &key,
                    (GeneralGraph::cycle(n)?, numbered(n)),
                    None,
                    "cycle 1-2-..-n-1",
                )
            } else if let Some(n) = parse_suffix(&key, "k") {
                entry(
                    &key,
                    (GeneralGraph::complete(n)?, numbered(n)),
                    None,
                    "complete graph",
                )
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(e)
}
