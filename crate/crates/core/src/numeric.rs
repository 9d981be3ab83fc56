//! Dense real matrices: Jacobi eigenvalues, nullity, multiplicity lists and
//! random pattern matrices for oracle checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{find_isomorphism, GeneralGraph, PairClass};
use crate::mlist::MultiplicityList;

const SYMMETRY_TOL: f64 = 1e-12;
const PATTERN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::MatrixShape("square and nonempty"));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::MatrixShape("finite"));
        }
        Ok(DenseMatrix {
            n,
            entries: rows.concat(),
        })
    }

    /// 0/1 adjacency matrix of the underlying simple graph.
    pub fn adjacency(g: &GeneralGraph) -> Self {
        let mut m = Self::zeros(g.n());
        for (i, j) in g.edges() {
            m.set(i, j, 1.0);
            m.set(j, i, 1.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.entries[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Self {
        DenseMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    pub fn is_skew(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..=i).all(|j| (self.get(i, j) + self.get(j, i)).abs() <= tol))
    }

    /// Simple graph of the off-diagonal nonzero pattern.
    pub fn pattern(&self) -> GeneralGraph {
        let mut g = GeneralGraph::empty(self.n).expect("matrix order is a valid vertex count");
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.get(i, j).abs() > PATTERN_TOL || self.get(j, i).abs() > PATTERN_TOL {
                    g.set_pair(i, j, PairClass::One).expect("indices in range");
                }
            }
        }
        g
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns of the
/// second matrix) by cyclic Jacobi rotations.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    if !a.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::MatrixShape("symmetric"));
    }
    let n = a.n;
    let mut m = a.clone();
    let mut q = DenseMatrix::identity(n);
    let target = 1e-12 * (1.0 + a.frobenius());
    let off = |m: &DenseMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m.get(i, j) * m.get(i, j);
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for r in p + 1..n {
                let apr = m.get(p, r);
                if apr == 0.0 {
                    continue;
                }
                let theta = (m.get(r, r) - m.get(p, p)) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkr = m.get(k, r);
                    m.set(k, p, c * mkp - s * mkr);
                    m.set(k, r, s * mkp + c * mkr);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mrk = m.get(r, k);
                    m.set(p, k, c * mpk - s * mrk);
                    m.set(r, k, s * mpk + c * mrk);
                }
                for k in 0..n {
                    let qkp = q.get(k, p);
                    let qkr = q.get(k, r);
                    q.set(k, p, c * qkp - s * qkr);
                    q.set(k, r, s * qkp + c * qkr);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).total_cmp(&m.get(j, j)));
    let values = order.iter().map(|&i| m.get(i, i)).collect();
    let mut vectors = DenseMatrix::zeros(n);
    for (col, &i) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, col, q.get(k, i));
        }
    }
    Ok((values, vectors))
}

/// Distinct eigenvalues with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub groups: Vec<(f64, usize)>,
    pub tolerance: f64,
}

impl Spectrum {
    pub fn distinct(&self) -> usize {
        self.groups.len()
    }

    pub fn multiplicities(&self) -> MultiplicityList {
        MultiplicityList::new(self.groups.iter().map(|g| g.1).collect()).expect("nonempty spectrum")
    }
}

fn group(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut groups: Vec<(f64, usize, f64)> = Vec::new();
    for &v in values {
        match groups.last_mut() {
            Some((sum, k, last)) if v - *last <= tol => {
                *sum += v;
                *k += 1;
                *last = v;
            }
            _ => groups.push((v, 1, v)),
        }
    }
    groups
        .into_iter()
        .map(|(s, k, _)| (s / k as f64, k))
        .collect()
}

pub fn default_group_tolerance(values: &[f64]) -> f64 {
    1e-8 * (1.0 + values.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

pub fn symmetric_spectrum(a: &DenseMatrix, tol_group: Option<f64>) -> Result<Spectrum> {
    let (values, _) = symmetric_eigen(a)?;
    let tolerance = tol_group.unwrap_or_else(|| default_group_tolerance(&values));
    Ok(Spectrum {
        groups: group(&values, tolerance),
        tolerance,
    })
}

pub fn default_rank_tolerance(a: &DenseMatrix) -> f64 {
    1e-9 * (1.0 + a.max_abs())
}

/// `n - rank` by Gaussian elimination with partial pivoting.
pub fn nullity(a: &DenseMatrix, tol_rank: Option<f64>) -> usize {
    let tol = tol_rank.unwrap_or_else(|| default_rank_tolerance(a));
    let n = a.n;
    let mut m = a.rows();
    let mut rank = 0;
    for col in 0..n {
        if rank == n {
            break;
        }
        let pivot = (rank..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("rows remain");
        if m[pivot][col].abs() <= tol {
            continue;
        }
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (x, &p) in row[col..n].iter_mut().zip(&pivot_row[col..n]) {
                    *x -= f * p;
                }
            }
        }
        rank += 1;
    }
    n - rank
}

/// Multiplicities of the distinct eigenvalues of a real symmetric matrix.
pub fn symmetric_multiplicity_list(
    a: &DenseMatrix,
    tol_group: Option<f64>,
) -> Result<MultiplicityList> {
    Ok(symmetric_spectrum(a, tol_group)?.multiplicities())
}

/// Ordered list of a skew-symmetric matrix along the imaginary axis, from the
/// spectrum of `-A*A` (the squared singular values) and the nullity of `A`.
pub fn skew_multiplicity_list(
    a: &DenseMatrix,
    tol_group: Option<f64>,
    tol_rank: Option<f64>,
) -> Result<MultiplicityList> {
    if !a.is_skew(SYMMETRY_TOL) {
        return Err(Error::MatrixShape("skew-symmetric"));
    }
    let b = a.mul(a).scaled(-1.0);
    // -A*A is symmetric only up to rounding
    let mut b_sym = b.clone();
    for i in 0..b.n {
        for j in 0..b.n {
            b_sym.set(i, j, 0.5 * (b.get(i, j) + b.get(j, i)));
        }
    }
    let spec = symmetric_spectrum(&b_sym, tol_group)?;
    let zero = nullity(a, tol_rank);
    let mut found_zero = 0;
    let mut halves = Vec::new();
    for &(v, k) in &spec.groups {
        if v.abs() <= spec.tolerance {
            found_zero += k;
        } else if k % 2 == 1 {
            return Err(Error::OddMultiplicity(k));
        } else {
            halves.push(k / 2);
        }
    }
    if found_zero != zero {
        return Err(Error::ZeroGroupMismatch {
            found: found_zero,
            nullity: zero,
        });
    }
    let mut parts: Vec<usize> = halves.iter().rev().copied().collect();
    if zero > 0 {
        parts.push(zero);
    }
    parts.extend(halves.iter().copied());
    MultiplicityList::new(parts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternMatch {
    Identical,
    /// Same graph up to relabelling (the printed labelling differs).
    Isomorphic,
    Different,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizationVerdict {
    pub pattern: PatternMatch,
    pub extracted: Option<MultiplicityList>,
    pub claim: MultiplicityList,
    pub error: Option<String>,
}

impl RealizationVerdict {
    pub fn list_matches(&self) -> bool {
        self.extracted.as_ref() == Some(&self.claim)
    }

    pub fn passed(&self) -> bool {
        self.pattern != PatternMatch::Different && self.list_matches()
    }
}

/// Checks the off-diagonal pattern against `g` and the extracted list
/// against `claim`.
pub fn verify_realization(
    a: &DenseMatrix,
    g: &GeneralGraph,
    claim: &MultiplicityList,
    skew: bool,
) -> RealizationVerdict {
    let p = a.pattern();
    let pattern = if p.n() != g.n() {
        PatternMatch::Different
    } else if p == g.underlying() {
        PatternMatch::Identical
    } else if find_isomorphism(&p, &g.underlying()).is_some() {
        PatternMatch::Isomorphic
    } else {
        PatternMatch::Different
    };
    let list = if skew {
        skew_multiplicity_list(a, None, None)
    } else {
        symmetric_multiplicity_list(a, None)
    };
    let (extracted, error) = match list {
        Ok(l) => (Some(l), None),
        Err(e) => (None, Some(e.to_string())),
    };
    RealizationVerdict {
        pattern,
        extracted,
        claim: claim.clone(),
        error,
    }
}

/// Input record for a realization check.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct RealizationJob {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
    #[serde(default)]
    pub skew: bool,
    /// graph6 string or `@name` from the catalog.
    pub graph: String,
    pub claim: Vec<usize>,
}

impl RealizationJob {
    pub fn matrix(&self) -> Result<DenseMatrix> {
        let m = DenseMatrix::from_rows(&self.entries)?;
        if m.n() != self.n {
            return Err(Error::MatrixShape("of the declared order"));
        }
        Ok(m)
    }

    pub fn graph(&self) -> Result<GeneralGraph> {
        if self.graph.starts_with('@') {
            Ok(crate::catalog::lookup(&self.graph)?.graph)
        } else {
            GeneralGraph::from_graph6(&self.graph)
        }
    }

    pub fn run(&self) -> Result<RealizationVerdict> {
        let claim = MultiplicityList::new(self.claim.clone())?;
        Ok(verify_realization(
            &self.matrix()?,
            &self.graph()?,
            &claim,
            self.skew,
        ))
    }
}

fn edge_weight(rng: &mut ChaCha8Rng) -> f64 {
    let mag = rng.gen_range(0.1..=2.0);
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

/// Random matrix with off-diagonal pattern `g`: edge entries of magnitude in
/// `[0.1, 2]` with random sign; diagonal uniform in `[-2, 2]`, or zero when
/// skew.
pub fn random_pattern_matrix(g: &GeneralGraph, skew: bool, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        if !skew {
            m.set(i, i, rng.gen_range(-2.0..=2.0));
        }
        for j in i + 1..n {
            if g.adjacent(i, j) {
                let w = edge_weight(&mut rng);
                m.set(i, j, w);
                m.set(j, i, if skew { -w } else { w });
            }
        }
    }
    m
}

/// Like [`random_pattern_matrix`] with entries from `{±1, ±2}` (diagonal
/// from `{-1, 0, 1}`), which produces repeated eigenvalues far more often.
pub fn random_integer_pattern_matrix(g: &GeneralGraph, skew: bool, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        if !skew {
            m.set(i, i, rng.gen_range(-1..=1) as f64);
        }
        for j in i + 1..n {
            if g.adjacent(i, j) {
                let w = [-2.0, -1.0, 1.0, 2.0][rng.gen_range(0..4)];
                m.set(i, j, w);
                m.set(j, i, if skew { -w } else { w });
            }
        }
    }
    m
}

/// Root of `f` in `[lo, hi]` by bisection; the endpoints must bracket a sign
/// change.
pub fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    if flo == 0.0 {
        return Ok(lo);
    }
    if flo.signum() == f(hi).signum() {
        return Err(Error::OutOfRange {
            what: "bisection bracket",
            value: 0,
            range: format!("f({lo}) and f({hi}) must differ in sign"),
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
