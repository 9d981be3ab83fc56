use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GeneralGraph, LoopState, PairClass};

pub const DEFAULT_EXHAUST_THRESHOLD: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PairState {
    AbsentDecided,
    PresentDecided,
    Free,
}

/// A graph whose pairs and loops are partly decided. Forcing on it is a
/// bound valid for every completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialConfiguration {
    base: GeneralGraph,
    pairs: Vec<PairState>,
    loops: Vec<LoopState>,
}

impl PartialConfiguration {
    /// Single edges are decided present, non-edges absent, multiedges free.
    pub fn from_graph(base: &GeneralGraph) -> Self {
        let n = base.n();
        let mut pairs = vec![PairState::AbsentDecided; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    pairs[i * n + j] = match base.pair(i, j) {
                        PairClass::None => PairState::AbsentDecided,
                        PairClass::One => PairState::PresentDecided,
                        PairClass::Many => PairState::Free,
                    };
                }
            }
        }
        let loops = (0..n).map(|v| base.loop_state(v)).collect();
        PartialConfiguration {
            base: base.clone(),
            pairs,
            loops,
        }
    }

    pub fn base(&self) -> &GeneralGraph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn pair_state(&self, i: usize, j: usize) -> PairState {
        if i == j {
            return PairState::AbsentDecided;
        }
        self.pairs[i * self.n() + j]
    }

    pub fn loop_state(&self, v: usize) -> LoopState {
        self.loops[v]
    }

    /// Decide a free pair.
    pub fn decide_pair(&self, i: usize, j: usize, present: bool) -> Result<Self> {
        let n = self.n();
        if i >= n || j >= n || i == j {
            return Err(Error::VertexOutOfRange {
                vertex: i.max(j),
                n,
            });
        }
        if self.pair_state(i, j) != PairState::Free {
            return Err(Error::PairNotFree(i.min(j), i.max(j)));
        }
        let mut out = self.clone();
        out.set_pair_unchecked(i, j, present);
        Ok(out)
    }

    pub fn decide_loop(&self, v: usize, present: bool) -> Result<Self> {
        if self.loops[v] != LoopState::Free {
            return Err(Error::LoopNotFree(v));
        }
        let mut out = self.clone();
        out.loops[v] = if present {
            LoopState::Present
        } else {
            LoopState::Absent
        };
        Ok(out)
    }

    pub(crate) fn set_pair_unchecked(&mut self, i: usize, j: usize, present: bool) {
        let n = self.n();
        let s = if present {
            PairState::PresentDecided
        } else {
            PairState::AbsentDecided
        };
        self.pairs[i * n + j] = s;
        self.pairs[j * n + i] = s;
    }

    pub(crate) fn set_loop_unchecked(&mut self, v: usize, present: bool) {
        self.loops[v] = if present {
            LoopState::Present
        } else {
            LoopState::Absent
        };
    }

    /// Same pairs with every loop set to `state`, whatever it was.
    pub fn with_all_loops(&self, state: LoopState) -> Self {
        let mut out = self.clone();
        out.loops.iter_mut().for_each(|l| *l = state);
        out
    }

    pub fn free_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.pair_state(i, j) == PairState::Free {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn free_loops(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| self.loops[v] == LoopState::Free)
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.free_pairs().is_empty() && self.free_loops().is_empty()
    }

    /// The graph with decided-present pairs as single edges, free pairs as
    /// multiedges and the current loop states.
    pub fn to_graph(&self) -> GeneralGraph {
        let n = self.n();
        let mut g = GeneralGraph::empty(n).expect("n already validated");
        for i in 0..n {
            g.set_loop(i, self.loops[i]).expect("vertex in range");
            for j in i + 1..n {
                let class = match self.pair_state(i, j) {
                    PairState::AbsentDecided => PairClass::None,
                    PairState::PresentDecided => PairClass::One,
                    PairState::Free => PairClass::Many,
                };
                g.set_pair(i, j, class).expect("vertex in range");
            }
        }
        g
    }

    /// Every completion of the free pairs (and of the free loops when
    /// `include_loops`), optionally only those with some pair of `predicate`
    /// present.
    pub fn completions(
        &self,
        include_loops: bool,
        predicate: Option<&[(usize, usize)]>,
        threshold: usize,
    ) -> Result<Completions> {
        let pairs = self.free_pairs();
        let loops = if include_loops {
            self.free_loops()
        } else {
            Vec::new()
        };
        if pairs.len() > threshold {
            return Err(Error::ThresholdExceeded {
                free: pairs.len(),
                threshold,
            });
        }
        if pairs.len() + loops.len() > 40 {
            return Err(Error::ThresholdExceeded {
                free: pairs.len() + loops.len(),
                threshold: 40,
            });
        }
        let predicate = match predicate {
            None => PredicateMask::Always,
            Some(p) => self.predicate_mask(&pairs, p)?,
        };
        Ok(Completions {
            config: self.clone(),
            pairs,
            loops,
            predicate,
            next: 0,
        })
    }

    /// Resolve a "some pair of P is present" condition against the free pairs.
    pub(crate) fn predicate_mask(
        &self,
        free: &[(usize, usize)],
        predicate: &[(usize, usize)],
    ) -> Result<PredicateMask> {
        let mut mask = 0u64;
        for &(a, b) in predicate {
            match self.pair_state(a, b) {
                PairState::PresentDecided => return Ok(PredicateMask::Always),
                PairState::AbsentDecided => {}
                PairState::Free => {
                    let key = (a.min(b), a.max(b));
                    let k = free
                        .iter()
                        .position(|&p| p == key)
                        .expect("free pair listed");
                    mask |= 1u64 << k;
                }
            }
        }
        if mask == 0 {
            Err(Error::NoQualifyingCompletion)
        } else {
            Ok(PredicateMask::AnyOf(mask))
        }
    }

    /// Apply a choice bitmask over `pairs` (bit k set means pair k present).
    pub(crate) fn with_choice(&self, pairs: &[(usize, usize)], mask: u64) -> Self {
        let mut out = self.clone();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            out.set_pair_unchecked(i, j, mask >> k & 1 == 1);
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum PredicateMask {
    Always,
    AnyOf(u64),
}

impl PredicateMask {
    pub(crate) fn admits(self, mask: u64) -> bool {
        match self {
            PredicateMask::Always => true,
            PredicateMask::AnyOf(m) => mask & m != 0,
        }
    }
}

/// Iterator over completed graphs: pairs decided as single edges or
/// non-edges, chosen loops decided.
pub struct Completions {
    config: PartialConfiguration,
    pairs: Vec<(usize, usize)>,
    loops: Vec<usize>,
    predicate: PredicateMask,
    next: u64,
}

impl Completions {
    pub fn total_choices(&self) -> u64 {
        1u64 << (self.pairs.len() + self.loops.len())
    }
}

impl Iterator for Completions {
    type Item = GeneralGraph;

    fn next(&mut self) -> Option<GeneralGraph> {
        let np = self.pairs.len();
        while self.next < self.total_choices() {
            let choice = self.next;
            self.next += 1;
            let pair_mask = choice & crate::graph::low_bits(np);
            if !self.predicate.admits(pair_mask) {
                continue;
            }
            let mut c = self.config.with_choice(&self.pairs, pair_mask);
            for (k, &v) in self.loops.iter().enumerate() {
                c.set_loop_unchecked(v, choice >> (np + k) & 1 == 1);
            }
            return Some(c.to_graph());
        }
        None
    }
}
