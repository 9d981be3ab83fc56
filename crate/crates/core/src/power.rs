use std::fmt;

use serde::Serialize;

use crate::config::PartialConfiguration;
use crate::error::{Error, Result};
use crate::graph::{GeneralGraph, PairClass};

/// How walks are counted: lazy walks up to a radius, or plain walks with
/// lengths in a set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum WalkSpec {
    Lazy { radius: usize },
    Lengths(Vec<usize>),
}

impl fmt::Display for WalkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkSpec::Lazy { radius } => write!(f, "r={radius}"),
            WalkSpec::Lengths(ls) => {
                let parts: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                write!(f, "L={{{}}}", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct PowerMultigraph {
    pub result: GeneralGraph,
    pub source: GeneralGraph,
    pub spec: WalkSpec,
    /// Row-major walk counts, saturated at 2.
    counts: Vec<u8>,
}

impl PowerMultigraph {
    pub fn count(&self, i: usize, j: usize) -> u8 {
        self.counts[i * self.result.n() + j]
    }

    /// Configuration with single-walk pairs decided present, zero-walk pairs
    /// decided absent and the rest undecided.
    pub fn envelope(&self) -> PartialConfiguration {
        PartialConfiguration::from_graph(&self.result)
    }
}

type Counts = Vec<u8>;

fn sat_mul(a: &Counts, b: &Counts, n: usize) -> Counts {
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                let y = b[k * n + j];
                if y != 0 {
                    let cell = &mut out[i * n + j];
                    *cell = (*cell + (x * y).min(2)).min(2);
                }
            }
        }
    }
    out
}

fn sat_add(a: &mut Counts, b: &Counts) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = (*x + y).min(2);
    }
}

fn adjacency(g: &GeneralGraph) -> Counts {
    let n = g.n();
    let mut a = vec![0u8; n * n];
    for (i, j) in g.edges() {
        a[i * n + j] = 1;
        a[j * n + i] = 1;
    }
    a
}

fn identity(n: usize) -> Counts {
    let mut id = vec![0u8; n * n];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    id
}

fn build(g: &GeneralGraph, spec: WalkSpec, counts: Counts) -> PowerMultigraph {
    let n = g.n();
    let mut result = GeneralGraph::empty(n).expect("n validated by source graph");
    for i in 0..n {
        for j in i + 1..n {
            result
                .set_pair(i, j, PairClass::from_count(counts[i * n + j]))
                .expect("vertex in range");
        }
    }
    PowerMultigraph {
        result,
        source: g.clone(),
        spec,
        counts,
    }
}

/// Multigraph counting lazy walks of length at most `r`.
pub fn gamma_lazy(g: &GeneralGraph, r: usize) -> Result<PowerMultigraph> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let n = g.n();
    if r < 1 || r > n {
        return Err(Error::OutOfRange {
            what: "r",
            value: r,
            range: format!("1..={n}"),
        });
    }
    let mut step = adjacency(g);
    sat_add(&mut step, &identity(n));
    let mut power = identity(n);
    let mut total = identity(n);
    for _ in 0..r {
        power = sat_mul(&power, &step, n);
        sat_add(&mut total, &power);
    }
    Ok(build(g, WalkSpec::Lazy { radius: r }, total))
}

/// Multigraph counting plain walks whose length lies in `lengths`.
pub fn gamma_walks(g: &GeneralGraph, lengths: &[usize]) -> Result<PowerMultigraph> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let n = g.n();
    let mut ls: Vec<usize> = lengths.to_vec();
    ls.sort_unstable();
    ls.dedup();
    let Some(&max) = ls.last() else {
        return Err(Error::OutOfRange {
            what: "number of walk lengths",
            value: 0,
            range: "at least 1".into(),
        });
    };
    if max > 2 * n {
        return Err(Error::OutOfRange {
            what: "walk length",
            value: max,
            range: format!("0..={}", 2 * n),
        });
    }
    let a = adjacency(g);
    let mut power = identity(n);
    let mut total = vec![0u8; n * n];
    for k in 0..=max {
        if k > 0 {
            power = sat_mul(&power, &a, n);
        }
        if ls.binary_search(&k).is_ok() {
            sat_add(&mut total, &power);
        }
    }
    Ok(build(g, WalkSpec::Lengths(ls), total))
}

/// Distances and shortest-path counts (saturated at 2) from `source`.
fn geodesic_counts(g: &GeneralGraph, source: usize) -> (Vec<Option<usize>>, Vec<u8>) {
    let dist = g.distances_from(source);
    let n = g.n();
    let mut order: Vec<usize> = (0..n).filter(|&v| dist[v].is_some()).collect();
    order.sort_by_key(|&v| dist[v]);
    let mut count = vec![0u8; n];
    count[source] = 1;
    for &v in &order {
        for w in g.neighbors(v).iter() {
            if dist[w] == dist[v].map(|d| d + 1) {
                count[w] = (count[w] + count[v]).min(2);
            }
        }
    }
    (dist, count)
}

/// Pairs `(i, j)`, `i < j`, at distance exactly `r` joined by a single shortest path.
pub fn unique_geodesic_pairs(g: &GeneralGraph, r: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..g.n() {
        let (dist, count) = geodesic_counts(g, i);
        for j in i + 1..g.n() {
            if dist[j] == Some(r) && count[j] == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Number of vertices on a longest unique shortest path.
pub fn longest_unique_geodesic(g: &GeneralGraph) -> usize {
    let mut best = 1;
    for i in 0..g.n() {
        let (dist, count) = geodesic_counts(g, i);
        for j in 0..g.n() {
            if let Some(d) = dist[j] {
                if count[j] == 1 {
                    best = best.max(d + 1);
                }
            }
        }
    }
    best
}
