use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 32;

/// Edge multiplicity between two distinct vertices, capped at "many".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairClass {
    None,
    One,
    Many,
}

impl PairClass {
    pub fn from_count(count: u8) -> Self {
        match count {
            0 => PairClass::None,
            1 => PairClass::One,
            _ => PairClass::Many,
        }
    }

    fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LoopState {
    Absent,
    Present,
    Free,
}

impl LoopState {
    fn code(self) -> u8 {
        self as u8
    }
}

/// A set of vertices of a graph with at most 64 vertices, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const fn empty() -> Self {
        VertexSet(0)
    }

    pub fn full(n: usize) -> Self {
        VertexSet(low_bits(n))
    }

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Graph on up to 32 vertices where each pair is absent, a single edge or a
/// multiedge, and each loop is absent, present or undecided.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GeneralGraph {
    n: usize,
    pairs: Vec<PairClass>,
    loops: Vec<LoopState>,
}

impl GeneralGraph {
    /// Edgeless graph with all loops undecided.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::VertexCount(n));
        }
        Ok(GeneralGraph {
            n,
            pairs: vec![PairClass::None; n * n],
            loops: vec![LoopState::Free; n],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j) in edges {
            g.set_pair(i, j, PairClass::One)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for i in 0..n {
            for j in i + 1..n {
                g.set_pair(i, j, PairClass::One)?;
            }
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, &edges)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn set_pair(&mut self, i: usize, j: usize, class: PairClass) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::OutOfRange {
                what: "pair endpoint",
                value: i,
                range: "distinct endpoints".into(),
            });
        }
        self.pairs[i * self.n + j] = class;
        self.pairs[j * self.n + i] = class;
        Ok(())
    }

    pub fn set_loop(&mut self, v: usize, state: LoopState) -> Result<()> {
        self.check_vertex(v)?;
        self.loops[v] = state;
        Ok(())
    }

    pub fn with_all_loops(&self, state: LoopState) -> Self {
        let mut g = self.clone();
        g.loops.iter_mut().for_each(|l| *l = state);
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair(&self, i: usize, j: usize) -> PairClass {
        if i == j {
            return PairClass::None;
        }
        self.pairs[i * self.n + j]
    }

    pub fn loop_state(&self, v: usize) -> LoopState {
        self.loops[v]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.pair(i, j) != PairClass::None
    }

    /// Unordered pairs `(i, j)` with `i < j` and the given class.
    pub fn pairs_of_class(&self, class: PairClass) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.pair(i, j) == class {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Edges of the underlying simple graph.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        (0..self.n).filter(|&w| self.adjacent(v, w)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn is_simple(&self) -> bool {
        self.pairs.iter().all(|&c| c != PairClass::Many)
            && self.loops.iter().all(|&l| l == LoopState::Free)
    }

    pub fn is_looped(&self) -> bool {
        self.loops.iter().all(|&l| l != LoopState::Free)
    }

    /// Same pairs with multiedges flattened to single edges and loops undecided.
    pub fn underlying(&self) -> Self {
        let mut g = self.with_all_loops(LoopState::Free);
        for c in g.pairs.iter_mut() {
            if *c == PairClass::Many {
                *c = PairClass::One;
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = VertexSet::singleton(0);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v).iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.len() == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.n
    }

    /// Breadth-first distances from `source`; unreachable vertices get `None`.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for w in self.neighbors(v).iter() {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.n {
            for d in self.distances_from(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Relabel so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut g = GeneralGraph {
            n,
            pairs: vec![PairClass::None; n * n],
            loops: vec![LoopState::Free; n],
        };
        for i in 0..n {
            g.loops[perm[i]] = self.loops[i];
            for j in 0..n {
                g.pairs[perm[i] * n + perm[j]] = self.pairs[i * n + j];
            }
        }
        g
    }

    /// Subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let mut g = Self::empty(vertices.len())?;
        for (a, &u) in vertices.iter().enumerate() {
            g.loops[a] = self.loops[u];
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                g.set_pair(a, b, self.pair(u, v))?;
            }
        }
        Ok(g)
    }

    /// graph6 encoding of the underlying simple graph.
    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = vec![(n as u8) + 63];
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.adjacent(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are printable ASCII")
    }

    pub fn from_graph6(text: &str) -> Result<Self> {
        let trimmed = text.trim_end_matches(['\n', '\r']);
        let (skip, body) = match trimmed.strip_prefix(">>graph6<<") {
            Some(rest) => (10, rest),
            None => (0, trimmed),
        };
        let bytes = body.as_bytes();
        let err = |offset: usize, reason: &str| Error::Graph6 {
            offset: offset + skip,
            reason: reason.to_string(),
        };
        if bytes.is_empty() {
            return Err(err(0, "empty input"));
        }
        if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
            return Err(err(pos, "byte outside the range 63..=126"));
        }
        if bytes[0] == 126 {
            return Err(err(0, "vertex counts above 62 are not supported"));
        }
        let n = (bytes[0] - 63) as usize;
        if n == 0 {
            return Err(err(0, "graph has no vertices"));
        }
        if n > MAX_VERTICES {
            return Err(err(
                0,
                &format!("{n} vertices exceeds the limit of {MAX_VERTICES}"),
            ));
        }
        let nbits = pair_count(n);
        let nbytes = nbits.div_ceil(6);
        if bytes.len() != 1 + nbytes {
            let offset = bytes.len().min(1 + nbytes);
            return Err(err(
                offset,
                &format!(
                    "expected {} bytes for {n} vertices, found {}",
                    1 + nbytes,
                    bytes.len()
                ),
            ));
        }
        let bit = |k: usize| (bytes[1 + k / 6] - 63) >> (5 - k % 6) & 1 == 1;
        for k in nbits..nbytes * 6 {
            if bit(k) {
                return Err(err(1 + k / 6, "nonzero padding bits"));
            }
        }
        let mut g = Self::empty(n)?;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bit(k) {
                    g.set_pair(i, j, PairClass::One)?;
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// Parse the plain-text edge-list format.
    ///
    /// First non-comment line is the vertex count, then `i j` edges (0-based),
    /// `multi i j` multiedges, `loop i` present loops and `free-loop i`
    /// undecided loops. When any loop line is given, unlisted loops are absent;
    /// otherwise every loop stays undecided.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (first, header) = lines.next().ok_or(Error::EdgeList {
            line: 1,
            reason: "missing vertex count".into(),
        })?;
        let bad = |line: usize, reason: String| Error::EdgeList { line, reason };
        let n: usize = header
            .parse()
            .map_err(|_| bad(first, format!("expected vertex count, found `{header}`")))?;
        let mut g = Self::empty(n).map_err(|e| bad(first, e.to_string()))?;
        let mut loop_lines = Vec::new();
        for (line, content) in lines {
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let parse = |s: &str| -> Result<usize> {
                let v: usize = s
                    .parse()
                    .map_err(|_| bad(line, format!("expected vertex index, found `{s}`")))?;
                if v >= n {
                    return Err(bad(line, format!("vertex {v} out of range for n = {n}")));
                }
                Ok(v)
            };
            match tokens.as_slice() {
                ["loop", v] => loop_lines.push((parse(v)?, LoopState::Present)),
                ["free-loop", v] => loop_lines.push((parse(v)?, LoopState::Free)),
                ["multi", a, b] | [a, b] => {
                    let (i, j) = (parse(a)?, parse(b)?);
                    if i == j {
                        return Err(bad(line, "use `loop i` for loops".into()));
                    }
                    let class = if tokens.len() == 3 {
                        PairClass::Many
                    } else {
                        PairClass::One
                    };
                    g.set_pair(i, j, class)?;
                }
                _ => return Err(bad(line, format!("unrecognised line `{content}`"))),
            }
        }
        if !loop_lines.is_empty() {
            g = g.with_all_loops(LoopState::Absent);
            for (v, state) in loop_lines {
                g.set_loop(v, state)?;
            }
        }
        Ok(g)
    }

    /// Text matrix of pair classes: `N`, `1`, `M` off the diagonal and the
    /// loop state (`0`, `L`, `?`) on it.
    pub fn class_matrix(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<&str> = (0..self.n)
                .map(|j| {
                    if i == j {
                        match self.loops[i] {
                            LoopState::Absent => "0",
                            LoopState::Present => "L",
                            LoopState::Free => "?",
                        }
                    } else {
                        match self.pair(i, j) {
                            PairClass::None => "N",
                            PairClass::One => "1",
                            PairClass::Many => "M",
                        }
                    }
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for GeneralGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneralGraph(n={}, ", self.n)?;
        let many = self.pairs_of_class(PairClass::Many);
        let one = self.pairs_of_class(PairClass::One);
        write!(f, "one={one:?}")?;
        if !many.is_empty() {
            write!(f, ", many={many:?}")?;
        }
        if !self.loops.iter().all(|&l| l == LoopState::Free) {
            write!(f, ", loops={:?}", self.loops)?;
        }
        write!(f, ")")
    }
}

/// Isomorphism-invariant key: the lexicographically least encoding of
/// (n, loop states, upper-triangle pair classes) over all relabellings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b}")).collect()
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

fn encode(g: &GeneralGraph, lab: &[usize]) -> Vec<u8> {
    let n = g.n;
    let mut inv = vec![0; n];
    for (v, &k) in lab.iter().enumerate() {
        inv[k] = v;
    }
    let mut out = Vec::with_capacity(1 + n + pair_count(n));
    out.push(n as u8);
    out.extend(inv.iter().map(|&v| g.loops[v].code()));
    for i in 0..n {
        for j in i + 1..n {
            out.push(g.pair(inv[i], inv[j]).code());
        }
    }
    out
}

/// Iterated colour refinement; `colors` hold ranks and stay label-independent.
fn refine(g: &GeneralGraph, colors: &mut [u32]) {
    let n = g.n;
    let mut classes = count_classes(colors);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u8)> = (0..n)
                    .filter(|&w| w != v && g.pair(v, w) != PairClass::None)
                    .map(|w| (colors[w], g.pair(v, w).code()))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut rank = 0u32;
        let mut next = vec![0u32; n];
        for (k, &v) in order.iter().enumerate() {
            if k > 0 && sigs[v] != sigs[order[k - 1]] {
                rank += 1;
            }
            next[v] = rank;
        }
        let new_classes = rank as usize + 1;
        colors.copy_from_slice(&next);
        if new_classes == classes {
            return;
        }
        classes = new_classes;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c: Vec<u32> = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Search<'a> {
    g: &'a GeneralGraph,
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, mut colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = self.g.n;
        refine(self.g, &mut colors);
        if count_classes(&colors) == n {
            let lab: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let enc = encode(self.g, &lab);
            match &self.best {
                Some((best, best_lab)) if *best == enc => {
                    let mut inv = vec![0; n];
                    for (v, &k) in best_lab.iter().enumerate() {
                        inv[k] = v;
                    }
                    let auto: Vec<usize> = lab.iter().map(|&k| inv[k]).collect();
                    self.automorphisms.push(auto);
                }
                Some((best, _)) if *best < enc => {}
                _ => self.best = Some((enc, lab)),
            }
            return;
        }
        let target = {
            let mut counts = vec![0usize; n];
            for &c in &colors {
                counts[c as usize] += 1;
            }
            counts.iter().position(|&k| k > 1).unwrap() as u32
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored.iter().any(|&u| self.same_orbit(prefix, u, v)) {
                continue;
            }
            let child: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| {
                    if c > target || (c == target && w != v) {
                        c + 1
                    } else {
                        c
                    }
                })
                .collect();
            prefix.push(v);
            self.visit(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Whether `u` and `v` lie in one orbit of the automorphisms found so far
    /// that fix every vertex of `prefix`.
    fn same_orbit(&self, prefix: &[usize], u: usize, v: usize) -> bool {
        let n = self.g.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in &self.automorphisms {
            if prefix.iter().any(|&p| a[p] != p) {
                continue;
            }
            for (x, &ax) in a.iter().enumerate().take(n) {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, ax));
                parent[rx] = ry;
            }
        }
        find(&mut parent, u) == find(&mut parent, v)
    }
}

/// Canonical form together with a labelling `lab` (old vertex `v` goes to
/// `lab[v]`) that produces it.
pub fn canonical_labeling(g: &GeneralGraph) -> (CanonicalForm, Vec<usize>) {
    let colors: Vec<u32> = (0..g.n).map(|v| g.loops[v].code() as u32).collect();
    let mut ranks = colors.clone();
    let mut distinct = colors.clone();
    distinct.sort_unstable();
    distinct.dedup();
    for (r, c) in ranks.iter_mut().zip(&colors) {
        *r = distinct.binary_search(c).unwrap() as u32;
    }
    let mut search = Search {
        g,
        best: None,
        automorphisms: Vec::new(),
    };
    search.visit(ranks, &mut Vec::new());
    let (enc, lab) = search.best.expect("search visits at least one leaf");
    (CanonicalForm(enc), lab)
}

pub fn canonical_form(g: &GeneralGraph) -> CanonicalForm {
    canonical_labeling(g).0
}

/// The canonically relabelled copy of `g`.
pub fn canonical_graph(g: &GeneralGraph) -> GeneralGraph {
    let (_, lab) = canonical_labeling(g);
    g.permuted(&lab)
}

/// A map `m` with `b.pair(m[i], m[j]) == a.pair(i, j)` and matching loops, if
/// the two graphs are isomorphic.
pub fn find_isomorphism(a: &GeneralGraph, b: &GeneralGraph) -> Option<Vec<usize>> {
    if a.n != b.n {
        return None;
    }
    let (fa, la) = canonical_labeling(a);
    let (fb, lb) = canonical_labeling(b);
    if fa != fb {
        return None;
    }
    let mut inv_b = vec![0; b.n];
    for (v, &k) in lb.iter().enumerate() {
        inv_b[k] = v;
    }
    Some(la.iter().map(|&k| inv_b[k]).collect())
}

/// One representative per isomorphism class of connected simple graphs on
/// `n` vertices, sorted by canonical form.
pub fn enumerate_connected(n: usize) -> Result<Vec<GeneralGraph>> {
    if !(1..=7).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            range: "1..=7".into(),
        });
    }
    let mut level: BTreeMap<CanonicalForm, GeneralGraph> = BTreeMap::new();
    let k1 = GeneralGraph::empty(1)?;
    level.insert(canonical_form(&k1), k1);
    for m in 2..=n {
        let mut next = BTreeMap::new();
        for g in level.values() {
            for mask in 0u32..(1 << (m - 1)) {
                let mut h = GeneralGraph::empty(m)?;
                for (i, j) in g.edges() {
                    h.set_pair(i, j, PairClass::One)?;
                }
                for v in 0..m - 1 {
                    if mask >> v & 1 == 1 {
                        h.set_pair(v, m - 1, PairClass::One)?;
                    }
                }
                let (form, lab) = canonical_labeling(&h);
                next.entry(form).or_insert_with(|| h.permuted(&lab));
            }
        }
        level = next;
    }
    Ok(level.into_values().filter(|g| g.is_connected()).collect())
}
