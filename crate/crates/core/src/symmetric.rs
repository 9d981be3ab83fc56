//! Elimination of ordered multiplicity lists for real symmetric matrices.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::bounds::{BoundTable, Bounds, ParamKey};
use crate::catalog;
use crate::data::{residual_annotations, Atlas};
use crate::error::{Error, Result};
use crate::forcing::{
    case_split_bounds, max_over_completions, CaseBound, ForcingRule, Mode, ParameterResult,
    SearchOptions,
};
use crate::graph::{
    canonical_form, canonical_labeling, enumerate_connected, find_isomorphism, CanonicalForm,
    GeneralGraph, VertexSet,
};
use crate::mlist::{candidate_lists, evenly_consecutive_order, MultiplicityList};
use crate::power::gamma_lazy;
pub use crate::verdict::{
    Certificate, Constraint, ConstraintVerdict, FeasibilityReport, Pattern, VerdictStatus,
};

#[derive(Clone, Copy, Debug)]
pub struct PruneOptions {
    /// Largest radius for the largest-parts rule.
    pub rmax_main: usize,
    /// Largest evenly consecutive order for the PSD rule.
    pub rmax_zp: usize,
    /// Check every index set whose order is at most `n` instead.
    pub full_zp_sweep: bool,
    pub enable_partition: bool,
    pub enable_k23: bool,
    pub search: SearchOptions,
}

impl Default for PruneOptions {
    fn default() -> Self {
        PruneOptions {
            rmax_main: 3,
            rmax_zp: 2,
            full_zp_sweep: false,
            enable_partition: true,
            enable_k23: true,
            search: SearchOptions::default(),
        }
    }
}

/// An induced K2,3 (possibly with the edge `x1 x2`) whose `Y` pairs have no
/// common neighbours outside `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct K23 {
    pub x: [usize; 2],
    pub y: [usize; 3],
}

impl K23 {
    pub fn y_pairs(&self) -> [(usize, usize); 3] {
        let y = self.y;
        [(y[0], y[1]), (y[0], y[2]), (y[1], y[2])]
    }
}

/// First qualifying K2,3 in canonical vertex order, reported in the input's
/// vertex numbering with both parts sorted.
pub fn detect_k23(g: &GeneralGraph) -> Option<K23> {
    let (_, lab) = canonical_labeling(g);
    let mut orig = vec![0; g.n()];
    for (v, &k) in lab.iter().enumerate() {
        orig[k] = v;
    }
    let h = g.permuted(&lab);
    let n = h.n();
    for a in 0..n {
        for b in a + 1..n {
            let ab = 1u64 << a | 1u64 << b;
            let common = VertexSet::from_bits(h.neighbors(a).bits() & h.neighbors(b).bits() & !ab);
            let cands = common.to_vec();
            let good = |u: usize, w: usize| {
                !h.adjacent(u, w) && h.neighbors(u).bits() & h.neighbors(w).bits() == ab
            };
            for (i, &p) in cands.iter().enumerate() {
                for (j, &q) in cands.iter().enumerate().skip(i + 1) {
                    if !good(p, q) {
                        continue;
                    }
                    for &r in &cands[j + 1..] {
                        if good(p, r) && good(q, r) {
                            let mut x = [orig[a], orig[b]];
                            let mut y = [orig[p], orig[q], orig[r]];
                            x.sort_unstable();
                            y.sort_unstable();
                            return Some(K23 { x, y });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Largest forcing number over completions of the radius-2 lazy-walk
/// multigraph in which some pair inside `Y` is present.
pub fn k23_restricted_bound(
    g: &GeneralGraph,
    k: &K23,
    opts: &SearchOptions,
) -> Result<ParameterResult> {
    let env = gamma_lazy(g, 2)?.envelope();
    max_over_completions(&env, ForcingRule::Standard, Some(&k.y_pairs()), opts)
}

/// Case split certifying that in every completion at least one claim holds.
#[derive(Clone, Debug)]
pub struct Disjunction {
    pub graph_key: CanonicalForm,
    pub radius: usize,
    pub split: Vec<(usize, usize)>,
    pub claims: Vec<(Pattern, usize)>,
    /// Per case, the bound that certified it.
    pub cases: Vec<CaseBound>,
}

fn rule_for(p: Pattern) -> ForcingRule {
    match p {
        Pattern::AnyParts(_) => ForcingRule::Standard,
        Pattern::ConsecutiveParts(_) => ForcingRule::Psd,
    }
}

fn pattern_size(p: Pattern) -> usize {
    match p {
        Pattern::AnyParts(t) | Pattern::ConsecutiveParts(t) => t,
    }
}

impl Disjunction {
    /// Decide every pair of `split` in the radius-`radius` lazy-walk
    /// multigraph; each case must be closed by some claim: a standard forcing
    /// set of size at most `b` for "any `radius` parts <= b", or a PSD one for
    /// "any `radius` consecutive parts <= b".
    pub fn certify(
        g: &GeneralGraph,
        radius: usize,
        split: &[(usize, usize)],
        claims: &[(Pattern, usize)],
    ) -> Result<Self> {
        if claims.is_empty() {
            return Err(Error::UnverifiedCertificate(
                "a disjunction needs at least one claim".into(),
            ));
        }
        if let Some(&(p, _)) = claims.iter().find(|(p, _)| pattern_size(*p) != radius) {
            return Err(Error::UnverifiedCertificate(format!(
                "claim {p:?} does not match radius {radius}"
            )));
        }
        let env = gamma_lazy(g, radius)?.envelope();
        let mut per_claim = Vec::with_capacity(claims.len());
        for &(p, _) in claims {
            per_claim.push(case_split_bounds(&env, split, |_| rule_for(p))?);
        }
        let mut cases = Vec::new();
        for k in 0..1usize << split.len() {
            let hit = claims
                .iter()
                .zip(&per_claim)
                .find(|((_, b), bounds)| bounds[k].result.value <= *b)
                .map(|(_, bounds)| bounds[k].clone());
            match hit {
                Some(c) => cases.push(c),
                None => {
                    let decisions: Vec<bool> = (0..split.len()).map(|i| k >> i & 1 == 1).collect();
                    return Err(Error::UnverifiedCertificate(format!(
                        "case {decisions:?} is not closed by any claim"
                    )));
                }
            }
        }
        Ok(Disjunction {
            graph_key: canonical_form(g),
            radius,
            split: split.to_vec(),
            claims: claims.to_vec(),
            cases,
        })
    }

    /// True when the list breaks every claim.
    pub fn eliminates(&self, list: &MultiplicityList) -> bool {
        self.claims.iter().all(|&(p, b)| p.violated(list, b))
    }

    fn constraint(&self) -> Constraint {
        Constraint::Disjunction {
            radius: self.radius,
            split: self.split.clone(),
            claims: self.claims.clone(),
        }
    }
}

/// Split pairs (figure labels) and claims for the 16-vertex tree.
const BFTREE_SPLIT: [(&str, &str); 3] = [("1", "5"), ("6", "10"), ("11", "15")];
const BFTREE_CLAIMS: [(Pattern, usize); 2] = [
    (Pattern::AnyParts(5), 13),
    (Pattern::ConsecutiveParts(5), 11),
];

/// The certified disjunction for graphs isomorphic to the catalog tree.
pub fn bftree_disjunction(g: &GeneralGraph) -> Result<Option<Disjunction>> {
    if g.n() != 16 {
        return Ok(None);
    }
    let t = catalog::lookup("bftree")?;
    let Some(map) = find_isomorphism(&t.graph, g) else {
        return Ok(None);
    };
    let split: Vec<(usize, usize)> = BFTREE_SPLIT
        .iter()
        .map(|&(a, b)| {
            let v = t.vertices(&[a, b]);
            (map[v[0]], map[v[1]])
        })
        .collect();
    Disjunction::certify(g, 5, &split, &BFTREE_CLAIMS).map(Some)
}

fn index_sets(q: usize, opts: &PruneOptions, n: usize) -> Vec<(Vec<usize>, usize)> {
    let limit = if opts.full_zp_sweep { n } else { opts.rmax_zp };
    let max_size = if opts.full_zp_sweep { q } else { limit.min(q) };
    let mut out = Vec::new();
    for size in 1..=max_size {
        let mut s: Vec<usize> = (1..=size).collect();
        loop {
            let e = evenly_consecutive_order(q, &s).expect("indices in range");
            if e <= limit {
                out.push((s.clone(), e));
            }
            // next combination
            let mut i = size;
            while i > 0 && s[i - 1] == q - size + i {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            s[i - 1] += 1;
            for k in i..size {
                s[k] = s[k - 1] + 1;
            }
        }
    }
    out
}

/// Runs the pipeline for one graph, caching parameter values across lists.
pub struct SymmetricPruner {
    bounds: Bounds,
    opts: PruneOptions,
    k23: Option<Option<(K23, ParameterResult)>>,
    disjunctions: Vec<Disjunction>,
    sets: HashMap<usize, Vec<(Vec<usize>, usize)>>,
}

impl SymmetricPruner {
    pub fn new(g: &GeneralGraph, opts: PruneOptions) -> Result<Self> {
        Ok(SymmetricPruner {
            bounds: Bounds::new(g, opts.search)?,
            opts,
            k23: None,
            disjunctions: Vec::new(),
            sets: HashMap::new(),
        })
    }

    /// Pruner with the tree disjunction registered when it applies.
    pub fn with_known_disjunctions(g: &GeneralGraph, opts: PruneOptions) -> Result<Self> {
        let mut p = Self::new(g, opts)?;
        if let Some(d) = bftree_disjunction(g)? {
            p.register_disjunction(d)?;
        }
        Ok(p)
    }

    pub fn graph(&self) -> &GeneralGraph {
        self.bounds.graph()
    }

    /// Adds a certified disjunction; returns its index.
    pub fn register_disjunction(&mut self, d: Disjunction) -> Result<usize> {
        if d.graph_key != canonical_form(self.graph()) {
            return Err(Error::UnverifiedCertificate(
                "disjunction was certified for another graph".into(),
            ));
        }
        self.disjunctions.push(d);
        Ok(self.disjunctions.len() - 1)
    }

    pub fn table(&self) -> BoundTable {
        self.bounds.table()
    }

    fn k23(&mut self) -> Result<Option<(K23, ParameterResult)>> {
        if self.k23.is_none() {
            let found = match detect_k23(self.graph()) {
                Some(k) => Some((
                    k,
                    k23_restricted_bound(self.graph(), &k, &self.opts.search)?,
                )),
                None => None,
            };
            self.k23 = Some(found);
        }
        Ok(self.k23.clone().flatten())
    }

    fn cert(
        &mut self,
        constraint: Constraint,
        lhs: usize,
        key: &ParamKey,
        detail: String,
    ) -> Result<Option<Certificate>> {
        let r = self.bounds.get(key)?;
        Ok((lhs > r.value).then(|| Certificate {
            constraint,
            lhs,
            rhs: r.value,
            parameter: key.to_string(),
            rhs_mode: r.mode,
            detail,
        }))
    }

    /// First violated constraint, if any.
    pub fn check(&mut self, list: &MultiplicityList) -> Result<Option<Certificate>> {
        let n = self.graph().n();
        if list.total() != n {
            return Err(Error::InvalidList(format!("{list} does not sum to {n}")));
        }
        let q = list.q();
        let rmax = self.opts.rmax_main.min(n);

        for r in 1..=rmax.min(q) {
            let lhs = list.largest_sum(r);
            let detail =
                format!("sum of the {r} largest parts exceeds the radius-{r} power parameter");
            if let Some(c) = self.cert(
                Constraint::LargestParts { r },
                lhs,
                &ParamKey::Zr(r),
                detail,
            )? {
                return Ok(Some(c));
            }
        }

        if self.opts.enable_partition && rmax >= 1 {
            let zr: Vec<usize> = (1..=rmax)
                .map(|r| self.bounds.value(&ParamKey::Zr(r)))
                .collect::<Result<_>>()?;
            let modes: Vec<Mode> = (1..=rmax)
                .map(|r| self.bounds.get(&ParamKey::Zr(r)).map(|p| p.mode))
                .collect::<Result<_>>()?;
            // best[r]: least sum of parameters over partitions of r into radii <= rmax
            let mut best = vec![(0usize, Vec::<usize>::new()); q + 1];
            for r in 1..=q {
                let mut cand: Option<(usize, Vec<usize>)> = None;
                for p in 1..=rmax.min(r) {
                    let v = zr[p - 1] + best[r - p].0;
                    if cand.as_ref().is_none_or(|c| v < c.0) {
                        let mut radii = best[r - p].1.clone();
                        radii.push(p);
                        cand = Some((v, radii));
                    }
                }
                best[r] = cand.expect("at least one radius");
                let lhs = list.largest_sum(r);
                if lhs > best[r].0 {
                    let mut radii = best[r].1.clone();
                    radii.sort_unstable_by(|a, b| b.cmp(a));
                    let exact = radii.iter().all(|&p| modes[p - 1] == Mode::Exact);
                    return Ok(Some(Certificate {
                        parameter: radii.iter().map(|p| format!("Zr:{p}")).collect::<Vec<_>>().join("+"),
                        detail: format!("sum of the {r} largest parts exceeds the power parameters summed over radii {radii:?}"),
                        constraint: Constraint::Partition { radii },
                        lhs,
                        rhs: best[r].0,
                        rhs_mode: if exact { Mode::Exact } else { Mode::EnvelopeUpperBound },
                    }));
                }
            }
        }

        let sets = self
            .sets
            .entry(q)
            .or_insert_with(|| index_sets(q, &self.opts, n))
            .clone();
        for (s, e) in sets {
            let lhs = list.sum_at(&s);
            let detail = format!("parts {s:?} have evenly consecutive order {e}");
            let c = Constraint::EvenlyConsecutive {
                indices: s,
                order: e,
            };
            if let Some(c) = self.cert(c, lhs, &ParamKey::ZPlusR(e), detail)? {
                return Ok(Some(c));
            }
        }

        if self.opts.enable_k23 && q >= 2 {
            if let Some((k, bound)) = self.k23()? {
                let mut idx: Vec<usize> = (1..=q).collect();
                idx.sort_by(|&a, &b| {
                    list.parts()[b - 1]
                        .cmp(&list.parts()[a - 1])
                        .then(a.cmp(&b))
                });
                let mut positions = [idx[0], idx[1]];
                positions.sort_unstable();
                let lhs = list.sum_at(&positions);
                if lhs > bound.value {
                    return Ok(Some(Certificate {
                        constraint: Constraint::K23 {
                            positions,
                            x: k.x,
                            y: k.y,
                        },
                        lhs,
                        rhs: bound.value,
                        parameter: "Zr:2 with a Y pair present".into(),
                        rhs_mode: bound.mode,
                        detail: format!(
                            "two parts exceed the K2,3 bound with X = {:?}, Y = {:?}",
                            k.x, k.y
                        ),
                    }));
                }
            }
        }

        for d in &self.disjunctions {
            if d.eliminates(list) {
                let (p, b) = d.claims[0];
                let summary: Vec<String> = d
                    .claims
                    .iter()
                    .map(|&(p, b)| format!("{p:?}: {} > {b}", p.worst_sum(list).unwrap_or(0)))
                    .collect();
                return Ok(Some(Certificate {
                    constraint: d.constraint(),
                    lhs: p.worst_sum(list).unwrap_or(0),
                    rhs: b,
                    parameter: format!("case split of radius {}", d.radius),
                    rhs_mode: Mode::Exact,
                    detail: format!("every alternative fails ({})", summary.join("; ")),
                }));
            }
        }
        Ok(None)
    }

    pub fn verdict(&mut self, list: MultiplicityList) -> Result<ConstraintVerdict> {
        let status = match self.check(&list)? {
            Some(certificate) => VerdictStatus::Eliminated { certificate },
            None => VerdictStatus::Surviving,
        };
        Ok(ConstraintVerdict { list, status })
    }

    /// Verdicts for every composition of `n`, in candidate order.
    pub fn prune(&mut self) -> Result<Vec<ConstraintVerdict>> {
        let n = self.graph().n();
        candidate_lists(n, 1, n)?
            .into_iter()
            .map(|l| self.verdict(l))
            .collect()
    }
}

/// Verdicts for every composition of `n` (with known disjunctions registered).
pub fn prune(g: &GeneralGraph, opts: &PruneOptions) -> Result<Vec<ConstraintVerdict>> {
    SymmetricPruner::with_known_disjunctions(g, *opts)?.prune()
}

/// Recomputes both sides of a certificate from scratch.
pub fn verify_certificate(
    g: &GeneralGraph,
    list: &MultiplicityList,
    cert: &Certificate,
    search: &SearchOptions,
) -> Result<bool> {
    let mut b = Bounds::new(g, *search)?;
    let (lhs, rhs) = match &cert.constraint {
        Constraint::LargestParts { r } => (list.largest_sum(*r), b.value(&ParamKey::Zr(*r))?),
        Constraint::Partition { radii } => {
            let rhs = radii
                .iter()
                .map(|&p| b.value(&ParamKey::Zr(p)))
                .sum::<Result<usize>>()?;
            (list.largest_sum(radii.iter().sum()), rhs)
        }
        Constraint::EvenlyConsecutive { indices, order } => {
            if evenly_consecutive_order(list.q(), indices)? != *order {
                return Ok(false);
            }
            (list.sum_at(indices), b.value(&ParamKey::ZPlusR(*order))?)
        }
        Constraint::K23 { positions, x, y } => {
            let k = K23 { x: *x, y: *y };
            let ok = y.iter().all(|&v| x.iter().all(|&u| g.adjacent(u, v)));
            if !ok {
                return Ok(false);
            }
            let largest = list.largest_sum(2);
            if list.sum_at(positions) != largest {
                return Ok(false);
            }
            (largest, k23_restricted_bound(g, &k, search)?.value)
        }
        Constraint::Disjunction {
            radius,
            split,
            claims,
        } => {
            let d = Disjunction::certify(g, *radius, split, claims)?;
            return Ok(d.eliminates(list) && cert.lhs == claims[0].0.worst_sum(list).unwrap_or(0));
        }
        _ => return Ok(false),
    };
    Ok(lhs == cert.lhs && rhs == cert.rhs && lhs > rhs)
}

fn annotation_for(form: &CanonicalForm) -> Option<String> {
    residual_annotations()
        .into_iter()
        .find(|a| &a.form == form)
        .map(|a| format!("{}: {}", a.verbatim, a.reason))
}

pub(crate) fn report(
    g: &GeneralGraph,
    key: CanonicalForm,
    atlas: Option<&Atlas>,
    table: BoundTable,
    verdicts: Vec<ConstraintVerdict>,
    annotation: Option<String>,
) -> FeasibilityReport {
    FeasibilityReport {
        graph6: g.to_graph6(),
        atlas_id: atlas.and_then(|a| a.id_of_form(&key)),
        key,
        params: table,
        verdicts,
        annotation,
    }
}

pub fn feasibility_report(
    g: &GeneralGraph,
    opts: &PruneOptions,
    atlas: Option<&Atlas>,
) -> Result<FeasibilityReport> {
    let mut p = SymmetricPruner::with_known_disjunctions(g, *opts)?;
    let verdicts = p.prune()?;
    let key = canonical_form(g);
    let annotation = annotation_for(&key);
    Ok(report(g, key, atlas, p.table(), verdicts, annotation))
}

/// Reports for every connected graph on `n` vertices, keyed by canonical form.
pub fn survey(
    n: usize,
    opts: &PruneOptions,
    atlas: Option<&Atlas>,
) -> Result<BTreeMap<CanonicalForm, FeasibilityReport>> {
    let graphs = enumerate_connected(n)?;
    let reports: Vec<FeasibilityReport> = graphs
        .par_iter()
        .map(|g| feasibility_report(g, opts, atlas))
        .collect::<Result<_>>()?;
    Ok(reports.into_iter().map(|r| (r.key.clone(), r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    fn ml(p: &[usize]) -> MultiplicityList {
        MultiplicityList::new(p.to_vec()).unwrap()
    }

    fn survivors(g: &GeneralGraph, opts: &PruneOptions) -> Vec<MultiplicityList> {
        prune(g, opts)
            .unwrap()
            .into_iter()
            .filter(|v| v.is_surviving())
            .map(|v| v.list)
            .collect()
    }

    #[test]
    fn path_keeps_only_simple_spectrum() {
        let p4 = GeneralGraph::path(4).unwrap();
        assert_eq!(
            survivors(&p4, &PruneOptions::default()),
            vec![ml(&[1, 1, 1, 1])]
        );
        let k2 = GeneralGraph::complete(2).unwrap();
        assert_eq!(survivors(&k2, &PruneOptions::default()), vec![ml(&[1, 1])]);
    }

    #[test]
    fn k23_detection() {
        let k = lookup("k23").unwrap();
        let found = detect_k23(&k.graph).unwrap();
        assert_eq!(found.x.to_vec(), k.vertices(&["x1", "x2"]));
        assert_eq!(found.y.to_vec(), k.vertices(&["y1", "y2", "y3"]));
        let gl = lookup("gl3").unwrap();
        assert_eq!(
            detect_k23(&gl.graph).unwrap().y.to_vec(),
            gl.vertices(&["y1", "y2", "y3"])
        );
        assert!(detect_k23(&GeneralGraph::path(6).unwrap()).is_none());
        assert!(detect_k23(&GeneralGraph::complete(5).unwrap()).is_none());
    }

    #[test]
    fn k23_rule_on_pendant_graphs() {
        for name in ["g125", "g138"] {
            let g = lookup(name).unwrap().graph;
            let v = prune(&g, &PruneOptions::default()).unwrap();
            for l in [ml(&[1, 3, 2]), ml(&[2, 3, 1])] {
                let c = v
                    .iter()
                    .find(|x| x.list == l)
                    .unwrap()
                    .certificate()
                    .unwrap();
                assert_eq!(c.constraint.rule_id(), "k23", "{name} {l}");
                assert_eq!(c.rhs, 4);
            }
        }
    }

    #[test]
    fn k23_graphs_need_three_eigenvalues() {
        for name in ["k23", "k23e", "g170", "g179"] {
            let g = lookup(name).unwrap().graph;
            let r = feasibility_report(&g, &PruneOptions::default(), None).unwrap();
            assert_eq!(r.q_lower_bound(), Some(3), "{name}");
        }
    }

    #[test]
    fn wheel_keeps_three_three() {
        let w = lookup("w6").unwrap().graph;
        assert!(survivors(&w, &PruneOptions::default()).contains(&ml(&[3, 3])));
    }

    #[test]
    fn vacuous_disjunction_never_eliminates() {
        let g = GeneralGraph::path(4).unwrap();
        let d = Disjunction::certify(&g, 1, &[], &[(Pattern::AnyParts(1), 4)]).unwrap();
        let mut p = SymmetricPruner::new(&g, PruneOptions::default()).unwrap();
        p.register_disjunction(d.clone()).unwrap();
        for l in candidate_lists(4, 1, 4).unwrap() {
            assert!(!d.eliminates(&l));
        }
        let other = Disjunction::certify(
            &GeneralGraph::cycle(4).unwrap(),
            1,
            &[],
            &[(Pattern::AnyParts(1), 4)],
        )
        .unwrap();
        assert!(p.register_disjunction(other).is_err());
        assert!(Disjunction::certify(&g, 1, &[], &[(Pattern::AnyParts(1), 0)]).is_err());
    }

    #[test]
    fn certificates_reverify_on_five_vertices() {
        let opts = PruneOptions::default();
        for g in enumerate_connected(5).unwrap() {
            for v in prune(&g, &opts).unwrap() {
                if let Some(c) = v.certificate() {
                    assert!(
                        verify_certificate(&g, &v.list, c, &opts.search).unwrap(),
                        "{} {}",
                        g.to_graph6(),
                        v.list
                    );
                }
            }
        }
    }

    #[test]
    fn index_set_orders() {
        let opts = PruneOptions::default();
        let sets = index_sets(4, &opts, 4);
        assert!(sets.contains(&(vec![1], 1)));
        assert!(sets.contains(&(vec![2], 2)));
        assert!(sets.contains(&(vec![1, 4], 2)));
        assert!(sets.contains(&(vec![2, 3], 2)));
        assert!(!sets.iter().any(|(s, _)| s == &vec![1, 3]));
    }
}
