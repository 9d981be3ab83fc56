use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Ordered eigenvalue multiplicities `(m1, .., mq)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityList(Vec<usize>);

impl MultiplicityList {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidList(format!(
                "{parts:?}: parts must be positive and nonempty"
            )));
        }
        Ok(MultiplicityList(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// Sum of the `t` largest parts.
    pub fn largest_sum(&self, t: usize) -> usize {
        let mut p = self.0.clone();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p.iter().take(t).sum()
    }

    /// Largest sum of `t` consecutive parts (`None` if `t > q`).
    pub fn max_window_sum(&self, t: usize) -> Option<usize> {
        if t == 0 || t > self.q() {
            return None;
        }
        self.0.windows(t).map(|w| w.iter().sum()).max()
    }

    /// Sum over 1-based indices.
    pub fn sum_at(&self, indices: &[usize]) -> usize {
        indices.iter().map(|&i| self.0[i - 1]).sum()
    }

    /// Text form `1,3,1`.
    pub fn joined(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Debug for MultiplicityList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.joined())
    }
}

impl fmt::Display for MultiplicityList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.joined())
    }
}

impl FromStr for MultiplicityList {
    type Err = Error;

    /// Accepts `1,3,1`, `(1,3,1)`, `[1, 3, 1]` or digit strings like `131`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
        let parts: std::result::Result<Vec<usize>, _> = if body.contains(',') {
            body.split(',').map(|p| p.trim().parse::<usize>()).collect()
        } else {
            body.chars()
                .map(|c| c.to_string().parse::<usize>())
                .collect()
        };
        let parts = parts.map_err(|_| Error::InvalidList(format!("cannot parse `{s}`")))?;
        MultiplicityList::new(parts)
    }
}

impl Serialize for MultiplicityList {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

fn compositions_with_parts(
    n: usize,
    q: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<MultiplicityList>,
) {
    if q == 0 {
        if n == 0 {
            out.push(MultiplicityList(prefix.clone()));
        }
        return;
    }
    if n < q {
        return;
    }
    for first in 1..=n - (q - 1) {
        prefix.push(first);
        compositions_with_parts(n - first, q - 1, prefix, out);
        prefix.pop();
    }
}

/// Compositions of `n` with between `q_min` and `q_max` parts, by number of
/// parts and then lexicographically.
pub fn candidate_lists(n: usize, q_min: usize, q_max: usize) -> Result<Vec<MultiplicityList>> {
    if q_min < 1 || q_min > q_max || q_max > n {
        return Err(Error::OutOfRange {
            what: "q range",
            value: q_max,
            range: format!("1 <= q_min <= q_max <= {n}"),
        });
    }
    let mut out = Vec::new();
    for q in q_min..=q_max {
        compositions_with_parts(n, q, &mut Vec::new(), &mut out);
    }
    Ok(out)
}

/// Maximal runs of consecutive indices in a set of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentStructure {
    pub indices: Vec<usize>,
    /// `(first, last, touches_boundary)` per run.
    pub segments: Vec<(usize, usize, bool)>,
    pub e_value: usize,
}

impl SegmentStructure {
    pub fn new(q: usize, indices: &[usize]) -> Result<Self> {
        let mut s: Vec<usize> = indices.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() || s[0] < 1 || *s.last().unwrap() > q {
            return Err(Error::OutOfRange {
                what: "index set size",
                value: s.len(),
                range: format!("nonempty subset of 1..={q}"),
            });
        }
        let mut segments = Vec::new();
        let mut start = s[0];
        for w in s.windows(2) {
            if w[1] != w[0] + 1 {
                segments.push((start, w[0]));
                start = w[1];
            }
        }
        segments.push((start, *s.last().unwrap()));
        let segments: Vec<(usize, usize, bool)> = segments
            .into_iter()
            .map(|(a, b)| (a, b, a == 1 || b == q))
            .collect();
        let e_value = segments
            .iter()
            .map(|&(a, b, boundary)| {
                let len = b - a + 1;
                if boundary {
                    len
                } else {
                    len + len % 2
                }
            })
            .sum();
        Ok(SegmentStructure {
            indices: s,
            segments,
            e_value,
        })
    }
}

/// Degree of the cheapest nonnegative polynomial vanishing exactly on the
/// chosen eigenvalues: runs touching either end count their length, inner
/// runs round up to even.
pub fn evenly_consecutive_order(q: usize, indices: &[usize]) -> Result<usize> {
    Ok(SegmentStructure::new(q, indices)?.e_value)
}

/// Palindromic compositions of `n`, by number of parts and then
/// lexicographically.
pub fn palindromic_lists(n: usize) -> Vec<MultiplicityList> {
    let mut out: Vec<MultiplicityList> = (1..=n)
        .flat_map(|q| {
            let mut v = Vec::new();
            compositions_with_parts(n, q, &mut Vec::new(), &mut v);
            v
        })
        .filter(|l| l.is_palindromic())
        .collect();
    out.sort_by(|a, b| a.q().cmp(&b.q()).then_with(|| a.cmp(b)));
    out
}
