use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{PairState, PartialConfiguration, PredicateMask, DEFAULT_EXHAUST_THRESHOLD};
use crate::error::{Error, Result};
use crate::graph::{low_bits, LoopState, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ForcingRule {
    /// Classical rule; loop states are ignored, which is the same as treating
    /// every loop as undecided.
    Standard,
    /// Closed-neighbourhood rule at present loops, open at absent loops,
    /// classical at undecided loops.
    LoopAware,
    /// Positive semidefinite rule, one white component at a time.
    Psd,
    /// Open-neighbourhood rule everywhere (all loops absent).
    Skew,
}

impl fmt::Display for ForcingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForcingRule::Standard => "standard",
            ForcingRule::LoopAware => "loop-aware",
            ForcingRule::Psd => "psd",
            ForcingRule::Skew => "skew",
        })
    }
}

impl FromStr for ForcingRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "z" => Ok(ForcingRule::Standard),
            "loop-aware" | "loop" | "looped" => Ok(ForcingRule::LoopAware),
            "psd" | "z+" => Ok(ForcingRule::Psd),
            "skew" | "z-" => Ok(ForcingRule::Skew),
            other => Err(format!(
                "unknown rule `{other}` (expected standard, loop-aware, psd or skew)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    EnvelopeUpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParameterResult {
    pub value: usize,
    pub mode: Mode,
    pub witness: Option<VertexSet>,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Largest number of undecided pairs enumerated exactly.
    pub exhaust_threshold: usize,
    /// Also enumerate undecided loops (only meaningful for the loop-aware rule).
    pub include_loops: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            exhaust_threshold: DEFAULT_EXHAUST_THRESHOLD,
            include_loops: false,
        }
    }
}

/// Bitmask form of a configuration under a fixed rule.
#[derive(Clone, Debug)]
pub(crate) struct Envelope {
    n: usize,
    full: u64,
    /// Present or undecided pairs.
    reach: Vec<u64>,
    /// Decided-present pairs.
    present: Vec<u64>,
    loops: Vec<LoopState>,
    psd: bool,
}

impl Envelope {
    pub(crate) fn new(config: &PartialConfiguration, rule: ForcingRule) -> Result<Self> {
        let n = config.n();
        let mut reach = vec![0u64; n];
        let mut present = vec![0u64; n];
        for u in 0..n {
            for v in 0..n {
                match config.pair_state(u, v) {
                    PairState::PresentDecided => {
                        reach[u] |= 1 << v;
                        present[u] |= 1 << v;
                    }
                    PairState::Free => reach[u] |= 1 << v,
                    PairState::AbsentDecided => {}
                }
            }
        }
        let loops = match rule {
            ForcingRule::Standard => vec![LoopState::Free; n],
            ForcingRule::Skew => vec![LoopState::Absent; n],
            ForcingRule::LoopAware => (0..n).map(|v| config.loop_state(v)).collect(),
            ForcingRule::Psd => {
                if let Some(v) = (0..n).find(|&v| config.loop_state(v) == LoopState::Absent) {
                    return Err(Error::UnsupportedRule(format!(
                        "psd forcing is undefined with an absent loop (vertex {v})"
                    )));
                }
                vec![LoopState::Free; n]
            }
        };
        Ok(Envelope {
            n,
            full: low_bits(n),
            reach,
            present,
            loops,
            psd: rule == ForcingRule::Psd,
        })
    }

    /// Decide pairs by `mask` (bit k: pair k present) and loops by `loop_mask`.
    fn completed(
        &self,
        pairs: &[(usize, usize)],
        mask: u64,
        loops: &[usize],
        loop_mask: u64,
    ) -> Envelope {
        let mut e = self.clone();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                e.present[i] |= 1 << j;
                e.present[j] |= 1 << i;
            } else {
                e.reach[i] &= !(1 << j);
                e.reach[j] &= !(1 << i);
            }
        }
        for (k, &v) in loops.iter().enumerate() {
            e.loops[v] = if loop_mask >> k & 1 == 1 {
                LoopState::Present
            } else {
                LoopState::Absent
            };
        }
        e
    }

    pub(crate) fn closure(&self, blue: u64) -> u64 {
        if self.psd {
            self.psd_closure(blue)
        } else {
            self.local_closure(blue)
        }
    }

    fn local_closure(&self, mut blue: u64) -> u64 {
        loop {
            let before = blue;
            for u in 0..self.n {
                let bit = 1u64 << u;
                let (white, own_ok) = match self.loops[u] {
                    LoopState::Free => (self.reach[u] & !blue, blue & bit != 0),
                    LoopState::Absent => (self.reach[u] & !blue, true),
                    LoopState::Present => ((self.reach[u] | bit) & !blue, true),
                };
                if own_ok
                    && white.is_power_of_two()
                    && (white == bit || self.present[u] & white != 0)
                {
                    blue |= white;
                }
            }
            if blue == before || blue == self.full {
                return blue;
            }
        }
    }

    fn psd_closure(&self, mut blue: u64) -> u64 {
        loop {
            let before = blue;
            let comps = self.white_components(blue);
            for u in VertexSet::from_bits(before).iter() {
                for &comp in &comps {
                    let w = self.reach[u] & comp;
                    if w.is_power_of_two() && self.present[u] & w != 0 {
                        blue |= w;
                    }
                }
            }
            if blue == before || blue == self.full {
                return blue;
            }
        }
    }

    fn white_components(&self, blue: u64) -> Vec<u64> {
        let mut rest = self.full & !blue;
        let mut comps = Vec::new();
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            while frontier != 0 {
                let mut next = 0;
                for v in VertexSet::from_bits(frontier).iter() {
                    next |= self.reach[v];
                }
                next &= rest & !comp;
                comp |= next;
                frontier = next;
            }
            rest &= !comp;
            comps.push(comp);
        }
        comps
    }

    pub(crate) fn forces(&self, blue: u64) -> bool {
        self.closure(blue) == self.full
    }

    /// Lexicographically least forcing set of size `k`, if any.
    fn forcing_set_of_size(&self, k: usize) -> Option<u64> {
        let n = self.n;
        if k > n {
            return None;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mask = idx.iter().fold(0u64, |m, &i| m | 1 << i);
            if self.forces(mask) {
                return Some(mask);
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if idx[i] < n - k + i {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Minimum forcing number and lexicographically least witness, searching
    /// sizes from `start`.
    fn minimum_from(&self, start: usize) -> (usize, u64) {
        for k in start..=self.n {
            if let Some(w) = self.forcing_set_of_size(k) {
                return (k, w);
            }
        }
        (self.n, self.full)
    }
}

/// Blue set together with the configuration and rule it evolves under.
#[derive(Clone, Debug)]
pub struct ColorState<'a> {
    pub blue: VertexSet,
    pub config: &'a PartialConfiguration,
    pub rule: ForcingRule,
}

impl ColorState<'_> {
    pub fn closure(&self) -> Result<VertexSet> {
        closure(self.config, self.rule, self.blue)
    }
}

pub fn closure(
    config: &PartialConfiguration,
    rule: ForcingRule,
    blue: VertexSet,
) -> Result<VertexSet> {
    let env = Envelope::new(config, rule)?;
    Ok(VertexSet::from_bits(env.closure(blue.bits() & env.full)))
}

/// Whether `blue` colours every vertex.
pub fn is_forcing_set(
    config: &PartialConfiguration,
    rule: ForcingRule,
    blue: VertexSet,
) -> Result<bool> {
    Ok(closure(config, rule, blue)?.len() == config.n())
}

/// Single forces `(u, v)` available from `blue` (`u == v` for a self-force).
/// Not defined for the PSD rule, whose forces depend on components.
pub fn available_forces(
    config: &PartialConfiguration,
    rule: ForcingRule,
    blue: VertexSet,
) -> Result<Vec<(usize, usize)>> {
    if rule == ForcingRule::Psd {
        return Err(Error::UnsupportedRule(
            "single forces are listed for local rules only".into(),
        ));
    }
    let env = Envelope::new(config, rule)?;
    let blue = blue.bits();
    let mut out = Vec::new();
    for u in 0..env.n {
        let bit = 1u64 << u;
        let (white, own_ok) = match env.loops[u] {
            LoopState::Free => (env.reach[u] & !blue, blue & bit != 0),
            LoopState::Absent => (env.reach[u] & !blue, true),
            LoopState::Present => ((env.reach[u] | bit) & !blue, true),
        };
        if own_ok && white.is_power_of_two() && (white == bit || env.present[u] & white != 0) {
            out.push((u, white.trailing_zeros() as usize));
        }
    }
    Ok(out)
}

/// Exact minimum forcing number of this configuration. On a configuration
/// with undecided pairs the value bounds every completion from above.
pub fn min_forcing_number(
    config: &PartialConfiguration,
    rule: ForcingRule,
) -> Result<ParameterResult> {
    let env = Envelope::new(config, rule)?;
    let (value, witness) = env.minimum_from(0);
    Ok(ParameterResult {
        value,
        mode: Mode::Exact,
        witness: Some(VertexSet::from_bits(witness)),
    })
}

/// Largest number of subsets a single above-threshold completion probe may test.
const PROBE_SUBSET_LIMIT: u64 = 1 << 20;

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k as u64).fold(1u64, |acc, i| acc.saturating_mul(n as u64 - i) / (i + 1))
}

/// Maximum of the minimum forcing number over completions of the undecided
/// pairs (and loops, if requested). `predicate` restricts to completions
/// with at least one of the listed pairs present.
pub fn max_over_completions(
    config: &PartialConfiguration,
    rule: ForcingRule,
    predicate: Option<&[(usize, usize)]>,
    opts: &SearchOptions,
) -> Result<ParameterResult> {
    let base = Envelope::new(config, rule)?;
    let pairs = config.free_pairs();
    let loops = if opts.include_loops && rule == ForcingRule::LoopAware {
        config.free_loops()
    } else {
        Vec::new()
    };
    let pred = match predicate {
        None => PredicateMask::Always,
        Some(p) => config.predicate_mask(&pairs, p)?,
    };

    // Envelope bound: valid for every qualifying completion.
    let (upper, upper_witness) = match pred {
        PredicateMask::Always => {
            let (v, w) = base.minimum_from(0);
            (v, Some(w))
        }
        PredicateMask::AnyOf(m) => {
            let mut best = 0;
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if m >> k & 1 == 1 {
                    let env = Envelope::new(&config.decide_pair(i, j, true)?, rule)?;
                    best = best.max(env.minimum_from(0).0);
                }
            }
            (best, None)
        }
    };
    if pairs.len() > opts.exhaust_threshold || pairs.len() + loops.len() > 40 {
        // a single completion reaching the envelope value settles it
        let np = pairs.len();
        let affordable = upper > 0 && binomial(config.n(), upper - 1) <= PROBE_SUBSET_LIMIT;
        for pair_mask in [0, low_bits(np)] {
            if !affordable || !pred.admits(pair_mask) {
                continue;
            }
            let env = base.completed(&pairs, pair_mask, &[], 0);
            if env.forcing_set_of_size(upper - 1).is_none() {
                let w = env.forcing_set_of_size(upper).unwrap_or(env.full);
                return Ok(ParameterResult {
                    value: upper,
                    mode: Mode::Exact,
                    witness: Some(VertexSet::from_bits(w)),
                });
            }
        }
        return Ok(ParameterResult {
            value: upper,
            mode: Mode::EnvelopeUpperBound,
            witness: upper_witness.map(VertexSet::from_bits),
        });
    }

    let np = pairs.len();
    let total_bits = np + loops.len();
    let top = low_bits(total_bits);
    let order = std::iter::once(top)
        .chain((top != 0).then_some(0))
        .chain((1..top).rev());
    let mut best = 0usize;
    let mut best_env: Option<Envelope> = None;
    let mut cache: Vec<u64> = Vec::new();
    for choice in order {
        let pair_mask = choice & low_bits(np);
        if !pred.admits(pair_mask) {
            continue;
        }
        let env = base.completed(&pairs, pair_mask, &loops, choice >> np);
        if best_env.is_some() {
            if let Some(pos) = cache.iter().position(|&s| env.forces(s)) {
                cache[..=pos].rotate_right(1);
                continue;
            }
            if let Some(w) = env.forcing_set_of_size(best) {
                cache.insert(0, w);
                cache.truncate(64);
                continue;
            }
        }
        let (k, w) = env.minimum_from(if best_env.is_some() { best + 1 } else { 0 });
        best = k;
        cache.insert(0, w);
        cache.truncate(64);
        best_env = Some(env);
        if best >= upper {
            break;
        }
    }
    let env = best_env.ok_or(Error::NoQualifyingCompletion)?;
    let (value, witness) = env.minimum_from(best);
    debug_assert_eq!(value, best);
    Ok(ParameterResult {
        value,
        mode: Mode::Exact,
        witness: Some(VertexSet::from_bits(witness)),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseBound {
    /// Decision for each split pair, in the order given.
    pub decisions: Vec<((usize, usize), bool)>,
    pub rule: ForcingRule,
    pub result: ParameterResult,
}

impl CaseBound {
    pub fn present_count(&self) -> usize {
        self.decisions.iter().filter(|d| d.1).count()
    }
}

/// Envelope bounds for every decision of `split` (other pairs left
/// undecided), with the rule chosen per case from the decision vector.
pub fn case_split_bounds(
    config: &PartialConfiguration,
    split: &[(usize, usize)],
    rule_for_case: impl Fn(&[bool]) -> ForcingRule,
) -> Result<Vec<CaseBound>> {
    if split.len() > 12 {
        return Err(Error::OutOfRange {
            what: "split size",
            value: split.len(),
            range: "0..=12".into(),
        });
    }
    for &(i, j) in split {
        if i >= config.n() || j >= config.n() {
            return Err(Error::VertexOutOfRange {
                vertex: i.max(j),
                n: config.n(),
            });
        }
        if config.pair_state(i, j) != PairState::Free {
            return Err(Error::PairNotFree(i.min(j), i.max(j)));
        }
    }
    let mut out = Vec::with_capacity(1 << split.len());
    for mask in 0u32..(1 << split.len()) {
        let decisions: Vec<bool> = (0..split.len()).map(|k| mask >> k & 1 == 1).collect();
        let mut case = config.clone();
        for (&(i, j), &d) in split.iter().zip(&decisions) {
            case = case.decide_pair(i, j, d)?;
        }
        let rule = rule_for_case(&decisions);
        let mut result = min_forcing_number(&case, rule)?;
        if !case.free_pairs().is_empty() {
            result.mode = Mode::EnvelopeUpperBound;
        }
        out.push(CaseBound {
            decisions: split.iter().copied().zip(decisions).collect(),
            rule,
            result,
        });
    }
    Ok(out)
}
