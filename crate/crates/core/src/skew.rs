//! Elimination of ordered multiplicity lists for real skew-symmetric matrices.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::bounds::{odd_lengths, Bounds, ParamKey};
use crate::data::{Atlas, ExceptionData};
use crate::error::{Error, Result};
use crate::forcing::{max_over_completions, ForcingRule, Mode, ParameterResult, SearchOptions};
use crate::graph::{
    canonical_form, canonical_labeling, enumerate_connected, CanonicalForm, GeneralGraph,
};
use crate::mlist::{palindromic_lists, MultiplicityList};
use crate::power::gamma_walks;
use crate::symmetric::report;
use crate::verdict::{
    Certificate, Constraint, ConstraintVerdict, FeasibilityReport, VerdictStatus,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewCandidate {
    pub list: MultiplicityList,
    /// 1-based index of the zero eigenvalue when the list has odd length.
    pub center_index: Option<usize>,
}

impl SkewCandidate {
    pub fn new(list: MultiplicityList) -> Result<Self> {
        if !list.is_palindromic() {
            return Err(Error::InvalidList(format!("{list} is not palindromic")));
        }
        let q = list.q();
        Ok(SkewCandidate {
            center_index: (q % 2 == 1).then_some(q.div_ceil(2)),
            list,
        })
    }
}

pub fn skew_candidates(n: usize) -> Vec<SkewCandidate> {
    palindromic_lists(n)
        .into_iter()
        .map(|l| SkewCandidate::new(l).expect("palindromic by construction"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct SkewOptions {
    /// Sizes of the symmetric index sets around the centre (odd values).
    pub odd_sizes: Vec<usize>,
    pub bowtie: bool,
    pub matching: bool,
    pub search: SearchOptions,
}

impl Default for SkewOptions {
    fn default() -> Self {
        SkewOptions {
            odd_sizes: vec![1, 3, 5],
            bowtie: true,
            matching: true,
            search: SearchOptions::default(),
        }
    }
}

/// An induced bow-tie: triangles `c v1 v2` and `c v3 v4`, where every walk of
/// length three from `v1` to `v3` and from `v2` to `v4` stays inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bowtie {
    pub center: usize,
    pub v: [usize; 4],
}

impl Bowtie {
    pub fn pairs(&self) -> [(usize, usize); 2] {
        [(self.v[0], self.v[2]), (self.v[1], self.v[3])]
    }

    pub fn vertices(&self) -> [usize; 5] {
        [self.center, self.v[0], self.v[1], self.v[2], self.v[3]]
    }
}

fn walks3(g: &GeneralGraph, a: usize, b: usize) -> usize {
    let mut count = 0;
    for x in g.neighbors(a).iter() {
        for y in g.neighbors(b).iter() {
            if g.adjacent(x, y) {
                count += 1;
            }
        }
    }
    count
}

/// First qualifying bow-tie in canonical vertex order, in the input's
/// numbering. Both ways of pairing the two triangles are tried.
pub fn detect_bowtie(g: &GeneralGraph) -> Option<Bowtie> {
    let (_, lab) = canonical_labeling(g);
    let mut orig = vec![0; g.n()];
    for (v, &k) in lab.iter().enumerate() {
        orig[k] = v;
    }
    let h = g.permuted(&lab);
    let n = h.n();
    for c in 0..n {
        let nb = h.neighbors(c).to_vec();
        let edges: Vec<(usize, usize)> = nb
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| nb[i + 1..].iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| h.adjacent(a, b))
            .collect();
        for (i, &(a1, a2)) in edges.iter().enumerate() {
            for &(b1, b2) in &edges[i + 1..] {
                let wings = [a1, a2, b1, b2];
                if wings[2..].iter().any(|w| wings[..2].contains(w)) {
                    continue;
                }
                let crossing = [(a1, b1), (a1, b2), (a2, b1), (a2, b2)];
                if crossing.iter().any(|&(x, y)| h.adjacent(x, y)) {
                    continue;
                }
                for v in [[a1, a2, b1, b2], [a1, a2, b2, b1]] {
                    if walks3(&h, v[0], v[2]) == 2 && walks3(&h, v[1], v[3]) == 2 {
                        return Some(Bowtie {
                            center: orig[c],
                            v: v.map(|x| orig[x]),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Largest skew forcing number over completions of the odd-walk multigraph
/// with lengths 1 and 3 in which one of the two crossing pairs is present.
pub fn bowtie_restricted_bound(
    g: &GeneralGraph,
    b: &Bowtie,
    opts: &SearchOptions,
) -> Result<ParameterResult> {
    let env = gamma_walks(g, &[1, 3])?.envelope();
    max_over_completions(&env, ForcingRule::Skew, Some(&b.pairs()), opts)
}

/// Size of a maximum matching.
pub fn matching_number(g: &GeneralGraph) -> usize {
    fn go(g: &GeneralGraph, mask: u64, memo: &mut HashMap<u64, usize>) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&m) = memo.get(&mask) {
            return m;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << v);
        let mut best = go(g, rest, memo);
        for u in g.neighbors(v).iter() {
            if rest >> u & 1 == 1 {
                best = best.max(1 + go(g, rest & !(1u64 << u), memo));
            }
        }
        memo.insert(mask, best);
        best
    }
    let all = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    go(g, all, &mut HashMap::new())
}

/// Symmetric index sets of size `s` containing the centre `c` of a list of
/// length `2c - 1`.
fn symmetric_sets(c: usize, s: usize) -> Vec<Vec<usize>> {
    let k = (s - 1) / 2;
    let q = 2 * c - 1;
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (1..=k).collect();
    if k >= c {
        return out;
    }
    loop {
        let mut set: Vec<usize> = pick.iter().flat_map(|&i| [i, q + 1 - i]).collect();
        set.push(c);
        set.sort_unstable();
        out.push(set);
        let mut i = k;
        while i > 0 && pick[i - 1] == c - 1 - k + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    out
}

pub struct SkewPruner {
    bounds: Bounds,
    opts: SkewOptions,
    form: CanonicalForm,
    bowtie: Option<Option<(Bowtie, ParameterResult)>>,
    matching: Option<usize>,
    exceptions: ExceptionData,
}

impl SkewPruner {
    pub fn new(g: &GeneralGraph, opts: SkewOptions, exceptions: ExceptionData) -> Result<Self> {
        if let Some(&s) = opts.odd_sizes.iter().find(|&&s| s % 2 == 0) {
            return Err(Error::OutOfRange {
                what: "symmetric set size",
                value: s,
                range: "odd values".into(),
            });
        }
        Ok(SkewPruner {
            bounds: Bounds::new(g, opts.search)?,
            form: canonical_form(g),
            opts,
            bowtie: None,
            matching: None,
            exceptions,
        })
    }

    pub fn graph(&self) -> &GeneralGraph {
        self.bounds.graph()
    }

    fn bowtie(&mut self) -> Result<Option<(Bowtie, ParameterResult)>> {
        if self.bowtie.is_none() {
            let found = match detect_bowtie(self.graph()) {
                Some(b) => Some((
                    b,
                    bowtie_restricted_bound(self.graph(), &b, &self.opts.search)?,
                )),
                None => None,
            };
            self.bowtie = Some(found);
        }
        Ok(self.bowtie.clone().flatten())
    }

    fn cert(
        &mut self,
        constraint: Constraint,
        lhs: usize,
        key: &ParamKey,
        detail: &str,
    ) -> Result<Option<Certificate>> {
        let r = self.bounds.get(key)?;
        Ok((lhs > r.value).then(|| Certificate {
            constraint,
            lhs,
            rhs: r.value,
            parameter: key.to_string(),
            rhs_mode: r.mode,
            detail: detail.to_string(),
        }))
    }

    /// First violated generic constraint, if any.
    pub fn check(&mut self, cand: &SkewCandidate) -> Result<Option<Certificate>> {
        let list = &cand.list;
        let n = self.graph().n();
        if list.total() != n {
            return Err(Error::InvalidList(format!("{list} does not sum to {n}")));
        }
        let q = list.q();
        let m = list.parts();
        let off_centre = (1..=q).filter(|&k| Some(k) != cand.center_index);

        for k in off_centre.clone() {
            let c = Constraint::NonCentre { index: k };
            if let Some(c) = self.cert(
                c,
                m[k - 1],
                &ParamKey::ZLoop,
                "nonzero eigenvalue above the looped forcing number",
            )? {
                return Ok(Some(c));
            }
        }
        if q >= 2 {
            for k in [1, q] {
                let c = Constraint::Boundary { index: k };
                if let Some(c) = self.cert(
                    c,
                    m[k - 1],
                    &ParamKey::ZPlus,
                    "extreme eigenvalue above the PSD forcing number",
                )? {
                    return Ok(Some(c));
                }
            }
        }
        if let Some(c) = cand.center_index {
            let k = Constraint::Centre { index: c };
            if let Some(k) = self.cert(
                k,
                m[c - 1],
                &ParamKey::ZMinus,
                "zero eigenvalue above the skew forcing number",
            )? {
                return Ok(Some(k));
            }
        }
        for k in off_centre.filter(|&k| k <= q + 1 - k) {
            let c = Constraint::MirrorSum {
                indices: [k, q + 1 - k],
            };
            let lhs = m[k - 1] + m[q - k];
            let detail = "conjugate pair above the forcing number of the length-2 walk multigraph";
            if let Some(c) = self.cert(c, lhs, &ParamKey::ZL(vec![2]), detail)? {
                return Ok(Some(c));
            }
        }
        if let Some(c) = cand.center_index {
            for s in self.opts.odd_sizes.clone() {
                if s > q {
                    continue;
                }
                for set in symmetric_sets(c, s) {
                    let lhs = list.sum_at(&set);
                    let key = ParamKey::ZMinusL(odd_lengths(s));
                    let detail = format!("symmetric set {set:?} above the skew odd-walk bound");
                    if let Some(c) =
                        self.cert(Constraint::OddWalk { indices: set }, lhs, &key, &detail)?
                    {
                        return Ok(Some(c));
                    }
                }
            }
            if self.opts.bowtie && q >= 3 {
                if let Some((b, bound)) = self.bowtie()? {
                    for set in symmetric_sets(c, 3) {
                        let lhs = list.sum_at(&set);
                        if lhs > bound.value {
                            return Ok(Some(Certificate {
                                constraint: Constraint::Bowtie {
                                    indices: set,
                                    vertices: b.vertices(),
                                },
                                lhs,
                                rhs: bound.value,
                                parameter: "Z-L:1,3 with a crossing pair present".into(),
                                rhs_mode: bound.mode,
                                detail: format!(
                                    "bow-tie at {:?}: walk counts of length 3 between {:?} and {:?} come only from the bow-tie, so one of them survives",
                                    b.vertices(),
                                    b.pairs()[0],
                                    b.pairs()[1]
                                ),
                            }));
                        }
                    }
                }
            }
        }
        if self.opts.matching {
            let mm = *self
                .matching
                .get_or_insert_with(|| matching_number(self.bounds.graph()));
            let lhs = n - cand.center_index.map_or(0, |c| m[c - 1]);
            if lhs > 2 * mm {
                return Ok(Some(Certificate {
                    constraint: Constraint::Matching,
                    lhs,
                    rhs: 2 * mm,
                    parameter: "2 m'".into(),
                    rhs_mode: Mode::Exact,
                    detail: format!("rank {lhs} exceeds twice the matching number {mm}"),
                }));
            }
        }
        Ok(None)
    }

    pub fn verdict(&mut self, cand: SkewCandidate) -> Result<ConstraintVerdict> {
        let status = match self.check(&cand)? {
            Some(certificate) => VerdictStatus::Eliminated { certificate },
            None => match self.exceptions.lookup(&self.form, &cand.list) {
                Some(e) => VerdictStatus::KnownExceptionInfeasible {
                    source: e.citation.clone(),
                },
                None => VerdictStatus::Surviving,
            },
        };
        Ok(ConstraintVerdict {
            list: cand.list,
            status,
        })
    }

    pub fn prune(&mut self) -> Result<Vec<ConstraintVerdict>> {
        skew_candidates(self.graph().n())
            .into_iter()
            .map(|c| self.verdict(c))
            .collect()
    }
}

pub fn skew_prune(g: &GeneralGraph, opts: &SkewOptions) -> Result<Vec<ConstraintVerdict>> {
    SkewPruner::new(g, opts.clone(), ExceptionData::shipped())?.prune()
}

/// Recomputes both sides of a generic skew certificate.
pub fn verify_skew_certificate(
    g: &GeneralGraph,
    list: &MultiplicityList,
    cert: &Certificate,
    search: &SearchOptions,
) -> Result<bool> {
    let mut b = Bounds::new(g, *search)?;
    let m = list.parts();
    let (lhs, rhs) = match &cert.constraint {
        Constraint::NonCentre { index } => (m[index - 1], b.value(&ParamKey::ZLoop)?),
        Constraint::Boundary { index } => (m[index - 1], b.value(&ParamKey::ZPlus)?),
        Constraint::Centre { index } => (m[index - 1], b.value(&ParamKey::ZMinus)?),
        Constraint::MirrorSum { indices } => {
            (list.sum_at(indices), b.value(&ParamKey::ZL(vec![2]))?)
        }
        Constraint::OddWalk { indices } => (
            list.sum_at(indices),
            b.value(&ParamKey::ZMinusL(odd_lengths(indices.len())))?,
        ),
        Constraint::Bowtie { indices, vertices } => {
            let bt = Bowtie {
                center: vertices[0],
                v: [vertices[1], vertices[2], vertices[3], vertices[4]],
            };
            (
                list.sum_at(indices),
                bowtie_restricted_bound(g, &bt, search)?.value,
            )
        }
        Constraint::Matching => {
            let q = list.q();
            let centre = if q % 2 == 1 { m[q / 2] } else { 0 };
            (g.n() - centre, 2 * matching_number(g))
        }
        _ => return Ok(false),
    };
    Ok(lhs == cert.lhs && rhs == cert.rhs && lhs > rhs)
}

pub fn skew_report(
    g: &GeneralGraph,
    opts: &SkewOptions,
    exceptions: &ExceptionData,
    atlas: Option<&Atlas>,
) -> Result<FeasibilityReport> {
    let mut p = SkewPruner::new(g, opts.clone(), exceptions.clone())?;
    let verdicts = p.prune()?;
    Ok(report(
        g,
        canonical_form(g),
        atlas,
        p.bounds.table(),
        verdicts,
        None,
    ))
}

pub fn skew_survey(
    n: usize,
    opts: &SkewOptions,
    atlas: Option<&Atlas>,
) -> Result<BTreeMap<CanonicalForm, FeasibilityReport>> {
    let exceptions = ExceptionData::shipped();
    let reports: Vec<FeasibilityReport> = enumerate_connected(n)?
        .par_iter()
        .map(|g| skew_report(g, opts, &exceptions, atlas))
        .collect::<Result<_>>()?;
    Ok(reports.into_iter().map(|r| (r.key.clone(), r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;
    use crate::data::skew_five_vertex_table;

    fn ml(p: &[usize]) -> MultiplicityList {
        MultiplicityList::new(p.to_vec()).unwrap()
    }

    fn survivors(g: &GeneralGraph) -> Vec<MultiplicityList> {
        skew_prune(g, &SkewOptions::default())
            .unwrap()
            .into_iter()
            .filter(|v| v.is_surviving())
            .map(|v| v.list)
            .collect()
    }

    #[test]
    fn candidates() {
        let lists: Vec<MultiplicityList> = skew_candidates(4).into_iter().map(|c| c.list).collect();
        assert_eq!(
            lists,
            vec![ml(&[4]), ml(&[2, 2]), ml(&[1, 2, 1]), ml(&[1, 1, 1, 1])]
        );
        assert_eq!(skew_candidates(5)[1].center_index, Some(2));
        assert_eq!(skew_candidates(2)[1].center_index, None);
        assert!(SkewCandidate::new(ml(&[1, 2])).is_err());
    }

    #[test]
    fn matchings() {
        assert_eq!(matching_number(&lookup("star5").unwrap().graph), 1);
        assert_eq!(matching_number(&GeneralGraph::path(4).unwrap()), 2);
        assert_eq!(matching_number(&GeneralGraph::cycle(5).unwrap()), 2);
        assert_eq!(matching_number(&lookup("bftree").unwrap().graph), 7);
    }

    #[test]
    fn bowtie_detection() {
        let b = lookup("bowtie").unwrap();
        let found = detect_bowtie(&b.graph).unwrap();
        assert_eq!(found.center, b.vertex("vc").unwrap());
        assert!(detect_bowtie(&GeneralGraph::complete(5).unwrap()).is_none());
        assert!(detect_bowtie(&GeneralGraph::cycle(5).unwrap()).is_none());
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            survivors(&GeneralGraph::complete(2).unwrap()),
            vec![ml(&[1, 1])]
        );
        assert_eq!(
            survivors(&GeneralGraph::path(3).unwrap()),
            vec![ml(&[1, 1, 1])]
        );
        assert_eq!(
            survivors(&lookup("g30").unwrap().graph),
            vec![ml(&[1, 1, 1, 1, 1])]
        );
        assert_eq!(
            survivors(&lookup("bowtie").unwrap().graph),
            vec![ml(&[1, 1, 1, 1, 1])]
        );
        assert_eq!(
            survivors(&lookup("star5").unwrap().graph),
            vec![ml(&[1, 3, 1])]
        );
    }

    #[test]
    fn bowtie_rule_is_what_removes_bowtie_lists() {
        let g = lookup("bowtie").unwrap().graph;
        let opts = SkewOptions {
            bowtie: false,
            ..SkewOptions::default()
        };
        let weak: Vec<MultiplicityList> = skew_prune(&g, &opts)
            .unwrap()
            .into_iter()
            .filter(|v| v.is_surviving())
            .map(|v| v.list)
            .collect();
        assert!(weak.contains(&ml(&[1, 3, 1])) || weak.contains(&ml(&[2, 1, 2])));
    }

    #[test]
    fn k23e_exception() {
        let v = skew_prune(&lookup("k23e").unwrap().graph, &SkewOptions::default()).unwrap();
        let s = |l: &[usize]| v.iter().find(|x| x.list == ml(l)).unwrap().status_name();
        assert_eq!(s(&[1, 3, 1]), "surviving");
        assert_eq!(s(&[2, 1, 2]), "exception");
        assert_eq!(s(&[1, 1, 1, 1, 1]), "surviving");
    }

    #[test]
    fn five_vertex_table() {
        let s = skew_survey(5, &SkewOptions::default(), None).unwrap();
        assert_eq!(s.len(), 21);
        for row in skew_five_vertex_table() {
            let r = &s[&row.form];
            let got: Vec<MultiplicityList> = r.survivors().into_iter().cloned().collect();
            let mut want = row.feasible.clone();
            // C4 with a pendant vertex realizes (2,1,2) (see the numeric tests)
            if row.graph6 == "DbW" {
                want.insert(0, ml(&[2, 1, 2]));
            }
            assert_eq!(got, want, "G{}", row.atlas_id);
            for v in &r.verdicts {
                if let Some(c) = v.certificate() {
                    let g = GeneralGraph::from_graph6(&r.graph6).unwrap();
                    assert!(
                        verify_skew_certificate(&g, &v.list, c, &SearchOptions::default()).unwrap()
                    );
                }
            }
        }
    }
}
