//! End-to-end acceptance checks, one [PASS]/[FAIL] line per criterion.
//!
//! A criterion may be expected to fail when the reference value it compares
//! against is itself inconsistent; such criteria still assert the value this
//! crate computes, and the run only fails if an outcome changes.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use proptest::test_runner::{Config, TestCaseError, TestRunner};

use zpower_core::appendix::appendix_realizations;
use zpower_core::bounds::{Bounds, ParamKey};
use zpower_core::catalog::lookup;
use zpower_core::data::{residual_annotations, skew_five_vertex_table, Atlas};
use zpower_core::mlist::{candidate_lists, evenly_consecutive_order, MultiplicityList};
use zpower_core::numeric::{
    random_integer_pattern_matrix, random_pattern_matrix, skew_multiplicity_list,
    symmetric_multiplicity_list, symmetric_spectrum, verify_realization, DenseMatrix,
};
use zpower_core::skew::{skew_prune, skew_survey, SkewOptions};
use zpower_core::symmetric::{
    bftree_disjunction, detect_k23, feasibility_report, k23_restricted_bound, prune, survey,
    verify_certificate, PruneOptions, SymmetricPruner,
};
use zpower_core::verdict::VerdictStatus;
use zpower_core::{
    case_split_bounds, closure, gamma_lazy, is_forcing_set, ForcingRule, GeneralGraph, Mode,
    PartialConfiguration, SearchOptions, VertexSet,
};

struct Check {
    pass: bool,
    detail: String,
}

impl Check {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Check {
            pass,
            detail: detail.into(),
        }
    }
}

fn ml(parts: &[usize]) -> MultiplicityList {
    MultiplicityList::new(parts.to_vec()).unwrap()
}

fn search() -> SearchOptions {
    SearchOptions::default()
}

fn value(b: &mut Bounds, key: ParamKey) -> (usize, Mode) {
    let r = b.get(&key).unwrap();
    (r.value, r.mode)
}

fn paths() -> Check {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 2..=8 {
        let g = GeneralGraph::path(n).unwrap();
        let mut b = Bounds::new(&g, search()).unwrap();
        for r in 1..=n {
            for key in [ParamKey::Zr(r), ParamKey::ZPlusR(r)] {
                let got = value(&mut b, key.clone());
                checked += 1;
                if got != (r, Mode::Exact) {
                    bad.push(format!("P{n} {key} = {got:?}"));
                }
            }
            if n <= 6 {
                let h = common::lazy_power(&g, r);
                for rule in [ForcingRule::Standard, ForcingRule::Psd] {
                    let brute = common::max_min_forcing(&h, rule);
                    if brute != r {
                        bad.push(format!("P{n} r={r} {rule} brute force {brute}"));
                    }
                }
            }
        }
    }
    Check::new(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checked} values, Z(r) = Z+(r) = r exactly; brute force agrees up to n = 6")
        } else {
            bad.join("; ")
        },
    )
}

fn star() -> Check {
    let g = lookup("star5").unwrap().graph;
    let mut b = Bounds::new(&g, search()).unwrap();
    let got = value(&mut b, ParamKey::Zr(2));
    let brute = common::max_min_forcing(&common::lazy_power(&g, 2), ForcingRule::Standard);
    assert_eq!(got.0, brute);
    Check::new(
        got == (4, Mode::Exact),
        format!("Z(2) = {} ({:?})", got.0, got.1),
    )
}

fn diffdrop() -> Check {
    let g = lookup("diffdrop").unwrap().graph;
    let mut b = Bounds::new(&g, search()).unwrap();
    let z = value(&mut b, ParamKey::Z);
    let z2 = value(&mut b, ParamKey::Zr(2));
    assert_eq!(
        z.0,
        common::min_forcing(&common::simple_of(&g), ForcingRule::Standard)
    );
    assert_eq!(
        z2.0,
        common::max_min_forcing(&common::lazy_power(&g, 2), ForcingRule::Standard)
    );
    Check::new(
        z == (2, Mode::Exact) && z2 == (5, Mode::Exact),
        format!("Z = {}, Z(2) = {}", z.0, z2.0),
    )
}

fn bftree_basics() -> Check {
    let t = lookup("bftree").unwrap();
    let mut b = Bounds::new(&t.graph, search()).unwrap();
    let zp = value(&mut b, ParamKey::ZPlus);
    let z = value(&mut b, ParamKey::Z);
    let s = common::simple_of(&t.graph);
    assert_eq!(zp.0, common::min_forcing(&s, ForcingRule::Psd));
    assert_eq!(z.0, common::min_forcing(&s, ForcingRule::Standard));

    let witness = VertexSet::from_iter(t.vertices(&["1", "2", "6", "7", "11", "12", "16"]));
    let env = gamma_lazy(&t.graph, 2).unwrap().envelope();
    let on_envelope = is_forcing_set(&env, ForcingRule::Standard, witness).unwrap();
    let h = common::lazy_power(&t.graph, 2);
    let every = common::completions(&h, false)
        .iter()
        .all(|c| common::closure(c, ForcingRule::Standard, witness.bits()) == (1 << 16) - 1);
    assert!(
        !on_envelope || every,
        "envelope certificate must hold on each completion"
    );
    let z2 = value(&mut b, ParamKey::Zr(2));
    Check::new(
        zp == (1, Mode::Exact) && z == (4, Mode::Exact) && on_envelope && z2.0 <= 7,
        format!(
            "Z+ = {}, Z = {}, witness forces the envelope: {on_envelope}, Z(2) = {} ({:?})",
            zp.0, z.0, z2.0, z2.1
        ),
    )
}

fn bftree_case_split() -> Check {
    let t = lookup("bftree").unwrap();
    let v = |l: &str| t.vertex(l).unwrap();
    let split = [(v("1"), v("5")), (v("6"), v("10")), (v("11"), v("15"))];
    let env = gamma_lazy(&t.graph, 5).unwrap().envelope();
    let present_rule = |d: &[bool]| {
        if d.iter().filter(|&&p| p).count() >= 2 {
            ForcingRule::Standard
        } else {
            ForcingRule::Psd
        }
    };
    let cases = case_split_bounds(&env, &split, present_rule).unwrap();
    let mut ok = cases.len() == 8;
    let mut notes = Vec::new();
    for c in &cases {
        let mut config: PartialConfiguration = env.clone();
        for &((a, b), present) in &c.decisions {
            config = config.decide_pair(a, b, present).unwrap();
        }
        // the explicit sets: drop the far leaves, and for the PSD cases also
        // the near leaves of two branches whose pair is absent
        let absent: Vec<usize> = c
            .decisions
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.1)
            .map(|(k, _)| k)
            .collect();
        let mut removed = vec![v("5"), v("10"), v("15")];
        if c.rule == ForcingRule::Psd {
            let near = [v("1"), v("6"), v("11")];
            removed.extend(absent.iter().take(2).map(|&k| near[k]));
        }
        let set = VertexSet::from_iter((0..16).filter(|x| !removed.contains(x)));
        let forces = is_forcing_set(&config, c.rule, set).unwrap();
        let bound = if c.rule == ForcingRule::Standard {
            13
        } else {
            11
        };
        ok &= forces && set.len() == bound && c.result.value <= bound;
        notes.push(format!(
            "{}:{} {}",
            c.present_count(),
            c.rule,
            c.result.value
        ));
    }
    let d = bftree_disjunction(&t.graph)
        .unwrap()
        .expect("bftree is recognised");
    ok &= d.cases.len() == 8;
    Check::new(
        ok,
        format!("8 cases (present:rule bound) {}", notes.join(", ")),
    )
}

fn bftree_q() -> Check {
    let t = lookup("bftree").unwrap();
    let mut p =
        SymmetricPruner::with_known_disjunctions(&t.graph, PruneOptions::default()).unwrap();
    let lists = candidate_lists(16, 7, 7).unwrap();
    let mut by_rule: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut survivors = Vec::new();
    for l in &lists {
        match p.check(l).unwrap() {
            Some(c) => *by_rule.entry(c.constraint.rule_id()).or_default() += 1,
            None => survivors.push(l.clone()),
        }
    }
    let mut a = DenseMatrix::adjacency(&t.graph);
    a.set(t.vertex("16").unwrap(), t.vertex("16").unwrap(), 1.0);
    let distinct = symmetric_spectrum(&a, None).unwrap().distinct();
    Check::new(
        survivors.is_empty() && lists.len() == 5005 && distinct == 8,
        format!("{} lists, survivors {}, by rule {by_rule:?}; modified adjacency has {distinct} distinct eigenvalues", lists.len(), survivors.len()),
    )
}

fn k23_family() -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["k23", "k23e"] {
        let g = lookup(name).unwrap().graph;
        let k = detect_k23(&g).expect("contains K2,3");
        let bound = k23_restricted_bound(&g, &k, &search()).unwrap();
        let verdicts = prune(&g, &PruneOptions::default()).unwrap();
        let heavy_survivor = verdicts.iter().any(|v| {
            let p = v.list.parts();
            v.is_surviving() && (0..p.len()).any(|i| (i + 1..p.len()).any(|j| p[i] + p[j] >= 5))
        });
        let r = feasibility_report(&g, &PruneOptions::default(), None).unwrap();
        ok &= bound.value == 4
            && bound.mode == Mode::Exact
            && !heavy_survivor
            && r.q_lower_bound() == Some(3);
        notes.push(format!(
            "{name}: bound {}, q >= {:?}",
            bound.value,
            r.q_lower_bound()
        ));
    }
    for name in ["g170", "g179"] {
        let r = feasibility_report(&lookup(name).unwrap().graph, &PruneOptions::default(), None)
            .unwrap();
        ok &= r.q_lower_bound() == Some(3);
        notes.push(format!("{name}: q >= {:?}", r.q_lower_bound()));
    }
    Check::new(ok, notes.join(", "))
}

fn k23_pendant() -> Check {
    let mut ok = true;
    for name in ["g125", "g138"] {
        let g = lookup(name).unwrap().graph;
        let v = prune(&g, &PruneOptions::default()).unwrap();
        for l in [ml(&[1, 3, 2]), ml(&[2, 3, 1])] {
            let rule = v
                .iter()
                .find(|x| x.list == l)
                .and_then(|x| x.certificate())
                .map(|c| c.constraint.rule_id());
            ok &= rule == Some("k23");
        }
    }
    Check::new(
        ok,
        "(1,3,2) and (2,3,1) eliminated by the K2,3 rule on both graphs",
    )
}

fn six_vertex_survey() -> Check {
    let opts = PruneOptions::default();
    let atlas = Atlas::installed();
    let reports = survey(6, &opts, atlas.as_ref()).unwrap();
    let mut bad_certs = 0;
    for r in reports.values() {
        let g = GeneralGraph::from_graph6(&r.graph6).unwrap();
        for v in &r.verdicts {
            if let Some(c) = v.certificate() {
                if !verify_certificate(&g, &v.list, c, &opts.search).unwrap() {
                    bad_certs += 1;
                }
            }
        }
    }
    let w6 = lookup("w6").unwrap().graph;
    let w6_keeps = reports[&zpower_core::canonical_form(&w6)]
        .survivors()
        .contains(&&ml(&[3, 3]));

    let annotations = residual_annotations();
    let annotated = reports.values().filter(|r| r.annotation.is_some()).count();
    let mut matched = 0;
    for a in &annotations {
        let r = &reports[&a.form];
        let lists_survive = a
            .lists
            .as_ref()
            .is_none_or(|ls| ls.iter().all(|l| r.survivors().contains(&l)));
        let id_ok = atlas.is_none() || r.atlas_id == Some(a.atlas_id);
        if lists_survive && id_ok && r.annotation.is_some() {
            matched += 1;
        }
    }
    let mode = if atlas.is_some() {
        "atlas installed"
    } else {
        "count level"
    };
    Check::new(
        reports.len() == 112 && bad_certs == 0 && w6_keeps && annotated == 13 && matched == 13,
        format!(
            "{} graphs, {bad_certs} bad certificates, W6 keeps (3,3): {w6_keeps}, {matched}/13 annotated graphs matched ({mode})",
            reports.len()
        ),
    )
}

/// Exact realization of (2,1,2) on C4 with a pendant vertex: 25A is an
/// integer matrix with (25A)^3 = -625 (25A) and rank 4.
fn pendant_square_realization() -> DenseMatrix {
    let mut a = DenseMatrix::zeros(5);
    for (i, j, w) in [
        (0, 1, 20.0),
        (1, 3, -12.0),
        (1, 4, 9.0),
        (2, 3, 15.0),
        (2, 4, 20.0),
    ] {
        a.set(i, j, w / 25.0);
        a.set(j, i, -w / 25.0);
    }
    a
}

fn integer_cube_check() -> bool {
    let mut b = [[0i64; 5]; 5];
    for (i, j, w) in [(0, 1, 20), (1, 3, -12), (1, 4, 9), (2, 3, 15), (2, 4, 20)] {
        b[i][j] = w;
        b[j][i] = -w;
    }
    let mul = |x: &[[i64; 5]; 5], y: &[[i64; 5]; 5]| {
        let mut z = [[0i64; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                z[i][j] = (0..5).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        z
    };
    let cube = mul(&mul(&b, &b), &b);
    (0..5).all(|i| (0..5).all(|j| cube[i][j] == -625 * b[i][j]))
}

fn skew_five() -> Check {
    let reports = skew_survey(5, &SkewOptions::default(), None).unwrap();
    let mut mismatches = Vec::new();
    let mut star_by_matching = false;
    let mut g46_by_exception = false;
    for row in skew_five_vertex_table() {
        let r = &reports[&row.form];
        let got: Vec<MultiplicityList> = r.survivors().into_iter().cloned().collect();
        if got != row.feasible {
            mismatches.push((
                row.atlas_id,
                row.graph6.clone(),
                got.clone(),
                row.feasible.clone(),
            ));
        }
        for v in &r.verdicts {
            if row.atlas_id == 29 && v.list == ml(&[1, 1, 1, 1, 1]) {
                star_by_matching =
                    v.certificate().map(|c| c.constraint.rule_id()) == Some("matching");
            }
            if row.atlas_id == 46 && v.list == ml(&[2, 1, 2]) {
                g46_by_exception =
                    matches!(v.status, VerdictStatus::KnownExceptionInfeasible { .. });
            }
        }
    }
    assert_eq!(reports.len(), 21);
    assert!(star_by_matching && g46_by_exception);

    // the single disagreement: the printed row omits a list that has an
    // exact realization
    assert_eq!(mismatches.len(), 1, "{mismatches:?}");
    let (id, g6, got, want) = &mismatches[0];
    assert_eq!(g6, "DbW");
    let mut expected = want.clone();
    expected.insert(0, ml(&[2, 1, 2]));
    assert_eq!(got, &expected);
    let g = GeneralGraph::from_graph6(g6).unwrap();
    let a = pendant_square_realization();
    assert!(integer_cube_check());
    assert!(verify_realization(&a, &g, &ml(&[2, 1, 2]), true).passed());

    Check::new(
        mismatches.is_empty(),
        format!(
            "20/21 rows match; G{id} also keeps (2,1,2), which the matrix with 25A = [[0,20,0,0,0],[-20,0,0,-12,9],[0,0,0,15,20],[0,12,-15,0,0],[0,-9,-20,0,0]] realizes exactly (A^3 = -A); star removed by matching, G46 (2,1,2) by exception data"
        ),
    )
}

fn appendix() -> Check {
    let all = appendix_realizations();
    let failures: Vec<String> = all
        .iter()
        .filter(|e| !e.verify().passed())
        .map(|e| e.name())
        .collect();
    assert_eq!(all.len(), 14);
    assert_eq!(failures, ["G44 (2,1,2)"]);
    let g44 = all.iter().find(|e| e.name() == "G44 (2,1,2)").unwrap();
    assert_eq!(g44.verify().extracted, Some(ml(&[1, 1, 1, 1, 1])));
    // making the two rows of the off-diagonal block orthogonal fixes it
    let mut fixed = g44.matrix.clone();
    let h = 0.5f64.sqrt();
    fixed.set(1, 3, h);
    fixed.set(3, 1, -h);
    assert!(verify_realization(&fixed, &g44.graph(), &g44.claim, true).passed());
    Check::new(
        failures.is_empty(),
        "13/14 pass; G44 (2,1,2) extracts (1,1,1,1,1) because its block rows are not orthogonal (with entry (1,3) = 1/sqrt 2 it passes)".to_string(),
    )
}

fn skew_examples() -> Check {
    let g30 = lookup("g30").unwrap().graph;
    let house = lookup("g45").unwrap().graph;
    let mut b30 = Bounds::new(&g30, search()).unwrap();
    let z30 = value(&mut b30, ParamKey::ZMinusL(vec![1, 3]));
    let survivors: Vec<MultiplicityList> = skew_prune(&g30, &SkewOptions::default())
        .unwrap()
        .into_iter()
        .filter(|v| v.is_surviving())
        .map(|v| v.list)
        .collect();
    let mut bh = Bounds::new(&house, search()).unwrap();
    let zh = value(&mut bh, ParamKey::ZMinusL(vec![1, 3]));
    let brute = common::max_min_forcing(&common::walk_power(&house, &[1, 3]), ForcingRule::Skew);
    assert_eq!(zh.0, brute);
    assert_eq!(zh.0, 3);
    let g30_ok = z30.0 <= 4 && survivors == vec![ml(&[1, 1, 1, 1, 1])];
    assert!(g30_ok);
    Check::new(
        g30_ok && zh.0 == 4,
        format!(
            "G30: {} and survivors {survivors:?}; house: {} (brute force over all completions agrees), printed value 4",
            z30.0, zh.0
        ),
    )
}

/// Runs `cases` random trials and returns how many were executed.
fn run_suite<S: proptest::strategy::Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<usize, String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let count = AtomicUsize::new(0);
    runner
        .run(&strategy, |v| {
            count.fetch_add(1, Ordering::Relaxed);
            test(v)
        })
        .map_err(|e| e.to_string())?;
    Ok(count.into_inner())
}

fn envelope_soundness(g: GeneralGraph, rule: ForcingRule, blue: u64) -> Result<(), TestCaseError> {
    let n = g.n();
    let g = if rule == ForcingRule::Psd {
        g.with_all_loops(zpower_core::LoopState::Free)
    } else {
        g
    };
    let config = PartialConfiguration::from_graph(&g);
    let blue = VertexSet::from_bits(blue & ((1 << n) - 1));
    let env = closure(&config, rule, blue).unwrap().bits();
    for c in common::completions(&g, rule == ForcingRule::LoopAware) {
        let got = common::closure(&c, rule, blue.bits());
        proptest::prop_assert_eq!(env & !got, 0, "{} {:?} {:?}", rule, g.class_matrix(), c);
    }
    Ok(())
}

fn symmetric_soundness(g: GeneralGraph, seed: u64, integer: bool) -> Result<(), TestCaseError> {
    let a = if integer {
        random_integer_pattern_matrix(&g, false, seed)
    } else {
        random_pattern_matrix(&g, false, seed)
    };
    let list = symmetric_multiplicity_list(&a, None).unwrap();
    let mut p = SymmetricPruner::new(&g, PruneOptions::default()).unwrap();
    let cert = p.check(&list).unwrap();
    proptest::prop_assert!(
        cert.is_none(),
        "{} realized {} but {:?}",
        g.to_graph6(),
        list,
        cert
    );

    // sums of the r largest parts, and of any index set
    let mut b = Bounds::new(&g, search()).unwrap();
    let mut sorted = list.parts().to_vec();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    for r in 1..=list.q() {
        let bound = b.value(&ParamKey::Zr(r)).unwrap();
        proptest::prop_assert!(sorted[..r].iter().sum::<usize>() <= bound);
    }
    let q = list.q();
    for mask in 1u32..1 << q {
        let s: Vec<usize> = (1..=q).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let e = evenly_consecutive_order(q, &s).unwrap();
        let bound = b.value(&ParamKey::ZPlusR(e)).unwrap();
        proptest::prop_assert!(list.sum_at(&s) <= bound, "{} {:?} e={}", list, s, e);
    }
    Ok(())
}

fn skew_soundness(g: GeneralGraph, seed: u64, integer: bool) -> Result<(), TestCaseError> {
    let a = if integer {
        random_integer_pattern_matrix(&g, true, seed)
    } else {
        random_pattern_matrix(&g, true, seed)
    };
    let list = skew_multiplicity_list(&a, None, None).unwrap();
    proptest::prop_assert!(list.is_palindromic(), "{}", list);
    let v = skew_prune(&g, &SkewOptions::default()).unwrap();
    let verdict = v
        .iter()
        .find(|x| x.list == list)
        .expect("palindromic lists are candidates");
    proptest::prop_assert!(
        verdict.is_surviving(),
        "{} realized {} but {:?}",
        g.to_graph6(),
        list,
        verdict.status
    );
    Ok(())
}

fn property_suites() -> Check {
    use proptest::prelude::*;
    let rules = prop_oneof![
        Just(ForcingRule::Standard),
        Just(ForcingRule::Psd),
        Just(ForcingRule::Skew),
        Just(ForcingRule::LoopAware)
    ];
    let results = [
        (
            "envelope soundness",
            run_suite(
                1000,
                (common::multigraph(6), rules, any::<u64>()),
                |(g, r, b)| envelope_soundness(g, r, b),
            ),
        ),
        (
            "symmetric oracle and multiplicity inequalities",
            run_suite(
                1000,
                (common::connected_graph(6), any::<u64>(), any::<bool>()),
                |(g, s, i)| symmetric_soundness(g, s, i),
            ),
        ),
        (
            "skew oracle and palindromes",
            run_suite(
                1000,
                (common::connected_graph(6), any::<u64>(), any::<bool>()),
                |(g, s, i)| skew_soundness(g, s, i),
            ),
        ),
    ];
    let mut ok = true;
    let notes: Vec<String> = results
        .iter()
        .map(|(name, r)| match r {
            Ok(count) => {
                ok &= *count >= 1000;
                format!("{name}: {count} trials")
            }
            Err(e) => {
                ok = false;
                format!("{name}: {e}")
            }
        })
        .collect();
    Check::new(ok, notes.join(", "))
}

type Criterion = (u32, &'static str, fn() -> Check, bool);

fn main() -> ExitCode {
    // (number, title, check, expected outcome)
    let criteria: [Criterion; 13] = [
        (1, "path power parameters", paths, true),
        (2, "star lazy square", star, true),
        (3, "Z drops from 5 to 2", diffdrop, true),
        (4, "tree basics and square witness", bftree_basics, true),
        (5, "tree radius-5 case split", bftree_case_split, true),
        (6, "tree needs eight eigenvalues", bftree_q, true),
        (7, "K2,3 family q >= 3", k23_family, true),
        (8, "K2,3 with pendant", k23_pendant, true),
        (9, "six-vertex survey", six_vertex_survey, true),
        (10, "five-vertex skew table", skew_five, false),
        (11, "printed skew realizations", appendix, false),
        (12, "skew odd-walk examples", skew_examples, false),
        (13, "property suites", property_suites, true),
    ];
    let mut unexpected = 0;
    for (id, title, check, expected) in criteria {
        let start = Instant::now();
        let c = check();
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {id:>2} {title} ({:.2?}): {}",
            start.elapsed(),
            c.detail
        );
        if c.pass != expected {
            unexpected += 1;
            println!(
                "       outcome changed: expected {}",
                if expected { "PASS" } else { "FAIL" }
            );
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
