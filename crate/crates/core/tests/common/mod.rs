//! Brute-force reference implementations used to cross-check the library.
//! Everything here works on plain bitmask graphs and enumerates completions
//! directly, sharing no code with the crate beyond reading pair classes.

#![allow(dead_code)]

use proptest::prelude::*;
use zpower_core::{ForcingRule, GeneralGraph, LoopState, PairClass};

/// A fully decided looped graph.
#[derive(Clone, Debug)]
pub struct Simple {
    pub n: usize,
    pub adj: Vec<u64>,
    pub loops: u64,
}

impl Simple {
    fn full(&self) -> u64 {
        (1u64 << self.n) - 1
    }
}

/// Every completion of a multigraph: single edges kept, multiedges either
/// way. Undecided loops are enumerated only when `with_loops`; otherwise
/// they count as absent.
pub fn completions(g: &GeneralGraph, with_loops: bool) -> Vec<Simple> {
    let n = g.n();
    let mut base = vec![0u64; n];
    let mut free = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            match g.pair(i, j) {
                PairClass::One => {
                    base[i] |= 1 << j;
                    base[j] |= 1 << i;
                }
                PairClass::Many => free.push((i, j)),
                PairClass::None => {}
            }
        }
    }
    let mut loop_base = 0u64;
    let mut free_loops = Vec::new();
    for v in 0..n {
        match g.loop_state(v) {
            LoopState::Present => loop_base |= 1 << v,
            LoopState::Free if with_loops => free_loops.push(v),
            _ => {}
        }
    }
    assert!(
        free.len() + free_loops.len() <= 24,
        "too many completions to enumerate"
    );
    let mut out = Vec::new();
    for mask in 0u64..1 << free.len() {
        let mut adj = base.clone();
        for (k, &(i, j)) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        for lm in 0u64..1 << free_loops.len() {
            let mut loops = loop_base;
            for (k, &v) in free_loops.iter().enumerate() {
                if lm >> k & 1 == 1 {
                    loops |= 1 << v;
                }
            }
            out.push(Simple {
                n,
                adj: adj.clone(),
                loops,
            });
        }
    }
    out
}

fn one_white(white: u64) -> Option<usize> {
    (white.count_ones() == 1).then(|| white.trailing_zeros() as usize)
}

/// Final blue set under repeated application of `rule`.
pub fn closure(s: &Simple, rule: ForcingRule, mut blue: u64) -> u64 {
    loop {
        let before = blue;
        match rule {
            ForcingRule::Psd => {
                let white = s.full() & !blue;
                for comp in components(s, white) {
                    for u in 0..s.n {
                        if blue >> u & 1 == 1 {
                            if let Some(w) = one_white(s.adj[u] & comp) {
                                blue |= 1 << w;
                            }
                        }
                    }
                }
            }
            _ => {
                for u in 0..s.n {
                    let is_blue = blue >> u & 1 == 1;
                    let (allowed, nbhd) = match rule {
                        ForcingRule::Standard => (is_blue, s.adj[u]),
                        ForcingRule::Skew => (true, s.adj[u]),
                        ForcingRule::LoopAware if s.loops >> u & 1 == 1 => {
                            (true, s.adj[u] | 1 << u)
                        }
                        ForcingRule::LoopAware => (true, s.adj[u]),
                        ForcingRule::Psd => unreachable!(),
                    };
                    if allowed {
                        if let Some(w) = one_white(nbhd & !blue) {
                            blue |= 1 << w;
                        }
                    }
                }
            }
        }
        if blue == before {
            return blue;
        }
    }
}

fn components(s: &Simple, within: u64) -> Vec<u64> {
    let mut left = within;
    let mut out = Vec::new();
    while left != 0 {
        let mut comp = left & left.wrapping_neg();
        loop {
            let grown = comp
                | (0..s.n)
                    .filter(|&v| comp >> v & 1 == 1)
                    .fold(0, |acc, v| acc | s.adj[v])
                    & within;
            if grown == comp {
                break;
            }
            comp = grown;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Whether some `k`-set forces everything.
pub fn has_forcing_set_of_size(s: &Simple, rule: ForcingRule, k: usize) -> bool {
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let blue = combo.iter().fold(0u64, |m, &v| m | 1 << v);
        if closure(s, rule, blue) == s.full() {
            return true;
        }
        if !next_combination(&mut combo, s.n) {
            return false;
        }
    }
}

/// Minimum forcing number, by increasing subset size.
pub fn min_forcing(s: &Simple, rule: ForcingRule) -> usize {
    (0..=s.n)
        .find(|&k| has_forcing_set_of_size(s, rule, k))
        .unwrap()
}

/// Largest minimum forcing number over all completions.
pub fn max_min_forcing(g: &GeneralGraph, rule: ForcingRule) -> usize {
    completions(g, rule == ForcingRule::LoopAware)
        .iter()
        .map(|s| min_forcing(s, rule))
        .max()
        .unwrap()
}

/// Plain adjacency as a simple graph.
pub fn simple_of(g: &GeneralGraph) -> Simple {
    let n = g.n();
    let mut adj = vec![0u64; n];
    for (i, j) in g.edges() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    Simple { n, adj, loops: 0 }
}

fn walk_counts(g: &GeneralGraph, step: &[Vec<u32>], lengths: &[usize]) -> Vec<Vec<u32>> {
    let n = g.n();
    let mul = |a: &[Vec<u32>], b: &[Vec<u32>]| -> Vec<Vec<u32>> {
        // counts saturate at 2: only 0, 1 and "several" matter
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<u32>().min(2))
                    .collect()
            })
            .collect()
    };
    let mut total = vec![vec![0u32; n]; n];
    let mut power: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    let top = lengths.iter().copied().max().unwrap_or(0);
    for len in 1..=top {
        power = mul(&power, step);
        if lengths.contains(&len) {
            for i in 0..n {
                for j in 0..n {
                    total[i][j] = (total[i][j] + power[i][j]).min(2);
                }
            }
        }
    }
    total
}

fn from_counts(counts: &[Vec<u32>]) -> GeneralGraph {
    let n = counts.len();
    let mut h = GeneralGraph::empty(n).unwrap();
    for (i, row) in counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate().skip(i + 1) {
            h.set_pair(i, j, PairClass::from_count(c as u8)).unwrap();
        }
        let l = match row[i] {
            0 => LoopState::Absent,
            1 => LoopState::Present,
            _ => LoopState::Free,
        };
        h.set_loop(i, l).unwrap();
    }
    h
}

/// Multigraph of lazy walks of length exactly `r` (a stay counts as a step).
pub fn lazy_power(g: &GeneralGraph, r: usize) -> GeneralGraph {
    let n = g.n();
    let step: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| u32::from(i == j || g.adjacent(i, j)))
                .collect()
        })
        .collect();
    // the constant term of a polynomial leaves every diagonal entry open
    from_counts(&walk_counts(g, &step, &[r])).with_all_loops(LoopState::Free)
}

/// Multigraph of plain walks whose length lies in `lengths`.
pub fn walk_power(g: &GeneralGraph, lengths: &[usize]) -> GeneralGraph {
    let n = g.n();
    let step: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(g.adjacent(i, j))).collect())
        .collect();
    from_counts(&walk_counts(g, &step, lengths))
}

/// Connected simple graph on `n` vertices: a random spanning tree plus extra
/// edges.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = GeneralGraph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
            (Just(n), parents, any::<u64>())
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(k, &p)| (p, k + 1))
                .collect();
            let mut bit = 0;
            for i in 0..n {
                for j in i + 1..n {
                    // roughly one extra edge in three
                    if extra >> bit & 1 == 1 && extra >> ((bit + 37) % 64) & 1 == 1 {
                        edges.push((i, j));
                    }
                    bit += 1;
                }
            }
            GeneralGraph::from_edges(n, &edges).unwrap()
        })
}

/// Arbitrary multigraph with random pair classes and loop states.
pub fn multigraph(max_n: usize) -> impl Strategy<Value = GeneralGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = proptest::collection::vec(0u8..3, n * (n - 1) / 2);
        let loops = proptest::collection::vec(0u8..3, n);
        (Just(n), pairs, loops).prop_map(|(n, pairs, loops)| {
            let mut g = GeneralGraph::empty(n).unwrap();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    g.set_pair(i, j, PairClass::from_count(pairs[k])).unwrap();
                    k += 1;
                }
            }
            for (v, &l) in loops.iter().enumerate() {
                let state = [LoopState::Absent, LoopState::Present, LoopState::Free][l as usize];
                g.set_loop(v, state).unwrap();
            }
            g
        })
    })
}
