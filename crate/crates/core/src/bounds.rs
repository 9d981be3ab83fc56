use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::config::PartialConfiguration;
use crate::error::{Error, Result};
use crate::forcing::{
    max_over_completions, min_forcing_number, ForcingRule, Mode, ParameterResult, SearchOptions,
};
use crate::graph::{canonical_form, CanonicalForm, GeneralGraph, LoopState, PairClass};
use crate::power::{gamma_lazy, gamma_walks};

/// Names of the forcing parameters a bound table can hold.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamKey {
    Z,
    ZPlus,
    ZMinus,
    /// Loop-aware rule with every loop present.
    ZLoop,
    /// Loop-aware rule maximised over loop choices.
    ZHat,
    Zr(usize),
    ZPlusR(usize),
    /// Skew rule on the plain-walk multigraph with these lengths.
    ZMinusL(Vec<usize>),
    /// Standard rule on the plain-walk multigraph with these lengths.
    ZL(Vec<usize>),
}

impl fmt::Display for ParamKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ls: &[usize]| {
            ls.iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            ParamKey::Z => write!(f, "Z"),
            ParamKey::ZPlus => write!(f, "Z+"),
            ParamKey::ZMinus => write!(f, "Z-"),
            ParamKey::ZLoop => write!(f, "Zloop"),
            ParamKey::ZHat => write!(f, "Zhat"),
            ParamKey::Zr(r) => write!(f, "Zr:{r}"),
            ParamKey::ZPlusR(r) => write!(f, "Z+r:{r}"),
            ParamKey::ZMinusL(ls) => write!(f, "Z-L:{}", join(ls)),
            ParamKey::ZL(ls) => write!(f, "ZL:{}", join(ls)),
        }
    }
}

/// Odd lengths `1, 3, .., r`.
pub fn odd_lengths(r: usize) -> Vec<usize> {
    (1..=r).step_by(2).collect()
}

/// Maximum forcing number over completions of the lazy-walk multigraph of
/// radius `r` (standard or PSD rule), or of the odd-walk multigraph with
/// lengths `1, 3, .., r` (skew rule, `r` odd).
pub fn z_power(
    g: &GeneralGraph,
    r: usize,
    rule: ForcingRule,
    opts: &SearchOptions,
) -> Result<ParameterResult> {
    match rule {
        ForcingRule::Standard | ForcingRule::Psd => {
            let p = gamma_lazy(g, r)?;
            max_over_completions(&p.envelope(), rule, None, opts)
        }
        ForcingRule::Skew => {
            if r.is_multiple_of(2) {
                return Err(Error::OutOfRange {
                    what: "skew power radius",
                    value: r,
                    range: "odd values".into(),
                });
            }
            z_walks(g, &odd_lengths(r), rule, opts)
        }
        ForcingRule::LoopAware => Err(Error::UnsupportedRule(
            "power parameters use the standard, psd or skew rule".into(),
        )),
    }
}

/// Maximum forcing number over completions of the plain-walk multigraph.
pub fn z_walks(
    g: &GeneralGraph,
    lengths: &[usize],
    rule: ForcingRule,
    opts: &SearchOptions,
) -> Result<ParameterResult> {
    let p = gamma_walks(g, lengths)?;
    max_over_completions(&p.envelope(), rule, None, opts)
}

fn compute(g: &GeneralGraph, key: &ParamKey, opts: &SearchOptions) -> Result<ParameterResult> {
    let plain = PartialConfiguration::from_graph(g);
    match key {
        ParamKey::Z => min_forcing_number(&plain, ForcingRule::Standard),
        ParamKey::ZPlus => min_forcing_number(&plain, ForcingRule::Psd),
        ParamKey::ZMinus => min_forcing_number(&plain, ForcingRule::Skew),
        ParamKey::ZLoop => min_forcing_number(
            &plain.with_all_loops(LoopState::Present),
            ForcingRule::LoopAware,
        ),
        ParamKey::ZHat => {
            let o = SearchOptions {
                include_loops: true,
                ..*opts
            };
            max_over_completions(
                &plain.with_all_loops(LoopState::Free),
                ForcingRule::LoopAware,
                None,
                &o,
            )
        }
        ParamKey::Zr(r) => z_power(g, *r, ForcingRule::Standard, opts),
        ParamKey::ZPlusR(r) => z_power(g, *r, ForcingRule::Psd, opts),
        ParamKey::ZMinusL(ls) => z_walks(g, ls, ForcingRule::Skew, opts),
        ParamKey::ZL(ls) => z_walks(g, ls, ForcingRule::Standard, opts),
    }
}

/// Parameter values of one simple graph, computed on demand and memoised.
#[derive(Clone, Debug)]
pub struct Bounds {
    graph: GeneralGraph,
    opts: SearchOptions,
    entries: BTreeMap<ParamKey, ParameterResult>,
}

impl Bounds {
    pub fn new(graph: &GeneralGraph, opts: SearchOptions) -> Result<Self> {
        if !graph.is_simple() {
            return Err(Error::NotSimple);
        }
        Ok(Bounds {
            graph: graph.clone(),
            opts,
            entries: BTreeMap::new(),
        })
    }

    pub fn graph(&self) -> &GeneralGraph {
        &self.graph
    }

    pub fn options(&self) -> &SearchOptions {
        &self.opts
    }

    pub fn get(&mut self, key: &ParamKey) -> Result<ParameterResult> {
        if let Some(r) = self.entries.get(key) {
            return Ok(r.clone());
        }
        let r = compute(&self.graph, key, &self.opts)?;
        self.entries.insert(key.clone(), r.clone());
        Ok(r)
    }

    pub fn value(&mut self, key: &ParamKey) -> Result<usize> {
        Ok(self.get(key)?.value)
    }

    pub fn table(&self) -> BoundTable {
        BoundTable {
            graph: self.graph.to_graph6(),
            key: canonical_form(&self.graph),
            entries: self.entries.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundTable {
    pub graph: String,
    pub key: CanonicalForm,
    pub entries: BTreeMap<ParamKey, ParameterResult>,
}

#[derive(Serialize)]
struct BoundTableJson<'a> {
    graph: &'a str,
    params: BTreeMap<String, usize>,
    mode: BTreeMap<String, Mode>,
    witness: BTreeMap<String, Vec<usize>>,
}

impl Serialize for BoundTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let name = |k: &ParamKey| k.to_string();
        BoundTableJson {
            graph: &self.graph,
            params: self
                .entries
                .iter()
                .map(|(k, v)| (name(k), v.value))
                .collect(),
            mode: self
                .entries
                .iter()
                .map(|(k, v)| (name(k), v.mode))
                .collect(),
            witness: self
                .entries
                .iter()
                .filter_map(|(k, v)| v.witness.map(|w| (name(k), w.to_vec())))
                .collect(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeLevelProfile {
    /// Sizes of the levels; level `j` (1-based) is at distance `j - 1` from the nearest leaf.
    pub levels: Vec<usize>,
    /// Level of each vertex, 1-based.
    pub level_of: Vec<usize>,
}

pub fn tree_level_profile(t: &GeneralGraph) -> Result<TreeLevelProfile> {
    if !t.is_simple() || !t.is_tree() {
        return Err(Error::NotATree);
    }
    let n = t.n();
    let mut level_of = vec![0usize; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (v, level) in level_of.iter_mut().enumerate() {
        if t.degree(v) <= 1 {
            *level = 1;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for w in t.neighbors(v).iter() {
            if level_of[w] == 0 {
                level_of[w] = level_of[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let depth = level_of.iter().copied().max().unwrap_or(0);
    let mut levels = vec![0usize; depth];
    for &l in &level_of {
        levels[l - 1] += 1;
    }
    Ok(TreeLevelProfile { levels, level_of })
}

/// Upper bound on the radius-`k` power parameter of a tree: the sizes of the
/// first `k` levels, minus one.
pub fn tree_level_bound(t: &GeneralGraph, k: usize) -> Result<usize> {
    let p = tree_level_profile(t)?;
    if k == 0 || k > p.levels.len() {
        return Err(Error::OutOfRange {
            what: "level",
            value: k,
            range: format!("1..={}", p.levels.len()),
        });
    }
    Ok(p.levels[..k].iter().sum::<usize>() - 1)
}

/// Least `r` for which the radius-`r` power parameter equals `n`: the first
/// radius whose lazy-walk multigraph has no single-walk pair (so the empty
/// graph is a completion).
pub fn q_lower_bound_rhat(g: &GeneralGraph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    for r in 1..=g.n() {
        if gamma_lazy(g, r)?
            .result
            .pairs_of_class(PairClass::One)
            .is_empty()
        {
            return Ok(r);
        }
    }
    Ok(g.n())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QFormulaBound {
    pub k: usize,
    /// `k n - k^2 Z(G)`, possibly negative.
    pub numerator: i64,
    /// Upper bound used for the PSD power parameter of radius `k`.
    pub denominator: usize,
    pub denominator_mode: Mode,
    /// Ceiling of the ratio, at least 1.
    pub value: usize,
}

/// Lower bound on the number of distinct eigenvalues from the forcing number
/// and the PSD power parameter of even radius `k`.
pub fn q_lower_bound_formula(
    g: &GeneralGraph,
    k: usize,
    opts: &SearchOptions,
) -> Result<QFormulaBound> {
    let diam = g.diameter().ok_or(Error::NotConnected)?;
    if k % 2 == 1 || k < 2 || k > diam {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            range: format!("even values in 2..={diam}"),
        });
    }
    let z = min_forcing_number(&PartialConfiguration::from_graph(g), ForcingRule::Standard)?.value;
    let zp = z_power(g, k, ForcingRule::Psd, opts)?;
    let numerator = (k * g.n()) as i64 - (k * k * z) as i64;
    let den = zp.value as i64;
    let ceil = if numerator <= 0 {
        0
    } else {
        (numerator + den - 1) / den
    };
    Ok(QFormulaBound {
        k,
        numerator,
        denominator: zp.value,
        denominator_mode: zp.mode,
        value: ceil.max(1) as usize,
    })
}
