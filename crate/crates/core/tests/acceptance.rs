//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line and asserting its own wall-clock budget. Every check
//! is exact; a nonzero residual anywhere fails the criterion.
//!
//! The tests share a mutex so each timing reflects the criterion alone
//! rather than scheduler contention.

use dq_core::dq::DqParams;
use dq_core::graph::module_graph;
use dq_core::hc::{ActGen, ActionContext, Tableau};
use dq_core::rat::{rat_int, Rat};
use dq_core::verify::{self, SuiteReport, DEFAULT_PBW_COUNT, DEFAULT_PBW_SEED};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use std::sync::Mutex;
use std::time::{Duration, Instant};

static GATE: Mutex<()> = Mutex::new(());

fn assert_all_pass(context: &str, report: &SuiteReport) {
    if let Some(check) = report.failures().next() {
        panic!(
            "criterion {context}: {}::{} FAIL ({})",
            report.suite,
            check.name,
            check.residual.as_deref().unwrap_or("no residual recorded"),
        );
    }
}

fn finish(n: u32, label: &str, started: Instant, budget_secs: u64) {
    let elapsed = started.elapsed();
    let budget = Duration::from_secs(budget_secs);
    println!("criterion {n} ({label}): PASS in {elapsed:.2?} (budget {budget_secs}s)");
    assert!(
        elapsed < budget,
        "criterion {n} ({label}) exceeded its budget: {elapsed:.2?} >= {budget_secs}s"
    );
}

#[test]
fn criterion_1_defining_relations_map_to_zero() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    for q in verify::battery() {
        let report = verify::relation_suite(&q).unwrap();
        assert_all_pass("1", &report);
    }
    finish(1, "relation suite over the battery", started, 10);
}

#[test]
fn criterion_2_gwa_relations_and_psi_transport() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    for q in verify::battery() {
        let report = verify::gwa_suite(&q).unwrap();
        assert_all_pass("2", &report);
    }
    finish(2, "GWA relations and the shift-operator model", started, 5);
}

#[test]
fn criterion_3_nil_hecke_identities() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    let report = verify::nil_hecke_suite();
    assert_all_pass("3", &report);
    // the suite must contain the corrected alternating-word check: the
    // two length-4 alternating words are distinct, not equal
    assert!(
        report
            .checks
            .iter()
            .any(|c| c.name == "alternating_words_satisfy_no_braid_relation" && c.pass),
        "criterion 3: the alternating-word separation check is missing"
    );
    finish(3, "nil-Hecke operator identities", started, 2);
}

#[test]
fn criterion_4_flag_order_identities() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    for q in verify::battery() {
        let report = verify::flag_suite(&q).unwrap();
        assert_all_pass("4", &report);
    }
    finish(4, "flag-order identities and polynomial preservation", started, 10);
}

#[test]
fn criterion_5_invariance_and_even_preservation() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    for q in verify::battery() {
        let report = verify::invariance_suite(&q).unwrap();
        assert_all_pass("5", &report);
    }
    finish(5, "flip invariance and even-polynomial preservation", started, 10);
}

#[test]
fn criterion_6_oracle_matches_closed_forms() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    for q in verify::battery() {
        let report = verify::oracle_suite(&q).unwrap();
        assert_all_pass("6", &report);
        // the suite pins the two singular structure constants; make their
        // presence part of the gate rather than trusting the suite shape
        for pinned in [
            "apex_action_matches_pinned_structure_constants",
            "back_edge_coefficient_is_q_at_minus_half",
        ] {
            assert!(
                report.checks.iter().any(|c| c.name == pinned && c.pass),
                "criterion 6: missing pinned check {pinned} for q = {q}"
            );
        }
    }
    finish(6, "structure-constant oracle equivalence", started, 20);
}

#[test]
fn criterion_7_pbw_normal_forms_are_consistent() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    let q: dq_core::Polynomial = "0,0,0,0,1".parse().unwrap();
    let report = verify::pbw_suite(&q, DEFAULT_PBW_SEED, DEFAULT_PBW_COUNT).unwrap();
    assert_eq!(
        report.checks.len(),
        DEFAULT_PBW_COUNT,
        "criterion 7: expected one check per sampled word"
    );
    assert_all_pass("7", &report);
    finish(7, "PBW rewriting consistency on 50 random words", started, 30);
}

#[test]
fn criterion_8_graph_reproduction() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();

    // integral orbit for the factored quartic: absent edges are exactly
    // those whose labels vanish at the positive roots 1 and 2
    let q4: dq_core::Polynomial = "4,0,-5,0,1".parse().unwrap();
    let params = DqParams::new(q4).unwrap();
    let graph = module_graph(&params, &rat_int(0), 8, true).unwrap();
    let name = |i: usize| graph.vertices[i].to_string();
    let present: BTreeSet<(String, String)> = graph
        .edges
        .iter()
        .map(|e| (name(e.src), name(e.dst)))
        .collect();
    let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
    let expected_absent = [
        pair("T0(1)", "T0(2)"),
        pair("T0(2)", "T0(3)"),
        pair("T1(1)", "T1(2)"),
        pair("T1(2)", "T1(3)"),
        pair("T0(1)", "T0(0)"),
        pair("T0(2)", "T0(1)"),
        pair("T1(2)", "T1(1)"),
    ];
    for missing in &expected_absent {
        assert!(
            !present.contains(missing),
            "criterion 8: edge {missing:?} should vanish at a root of q"
        );
    }
    // the structural slot count for this window is 54; exactly the seven
    // root-vanishing slots are omitted and nothing else
    assert_eq!(graph.edges.len(), 54 - expected_absent.len());

    // every structural slot either realizes its edge or vanishes; check
    // label-zero against reachability slot by slot
    let mut ctx = ActionContext::new(&params);
    let mut checked = 0usize;
    for src in 0..graph.vertices.len() {
        for dst in 0..graph.vertices.len() {
            if src == dst {
                continue;
            }
            let (s, d) = (&graph.vertices[src], &graph.vertices[dst]);
            let adjacent = (s.point() - d.point()).abs() <= rat_int(1);
            if !adjacent {
                continue;
            }
            let has_edge = present.contains(&(s.to_string(), d.to_string()));
            let reaches = ctx.reaches(s, d).unwrap();
            assert_eq!(
                has_edge, reaches,
                "criterion 8: slot {s} -> {d} disagrees with reachability"
            );
            checked += 1;
        }
    }
    assert!(checked > 40, "criterion 8: slot sweep did not cover the window");

    // the apex slot carries the one honest deviation from the printed
    // labels: q'(0) = 0 here, yet the transition is realized (the label
    // stores the witness coefficient instead)
    let apex = graph
        .edges
        .iter()
        .find(|e| name(e.src) == "T0(0)" && name(e.dst) == "T0(1)")
        .expect("criterion 8: apex edge T0(0) -> T0(1) must be realized");
    assert_eq!(apex.symbolic, "q'(0)");
    assert!(params.q().derivative().eval(&rat_int(0)).is_zero());
    assert_eq!(apex.label, rat_int(-16));

    // all edges that are present carry nonzero labels
    for e in &graph.edges {
        assert!(
            !e.label.is_zero(),
            "criterion 8: stored edge {} -> {} has a zero label",
            name(e.src),
            name(e.dst)
        );
    }

    // generic orbit with one orbit root: the closure of the seed is the
    // left ray, truncated at the window boundary
    let q_root: dq_core::Polynomial = "-2/3,2,0,-1/3,1".parse().unwrap();
    let params = DqParams::new(q_root).unwrap();
    let lam0 = Rat::new(1.into(), 3.into());
    let graph = module_graph(&params, &lam0, 4, false).unwrap();
    let ray: BTreeSet<String> = ["T0(11/3)", "T0(8/3)", "T0(5/3)", "T0(2/3)", "T0(1/3)"]
        .into_iter()
        .map(String::from)
        .collect();
    let closure_names: Vec<BTreeSet<String>> = graph
        .closures
        .iter()
        .map(|c| {
            c.vertices
                .iter()
                .map(|&i| graph.vertices[i].to_string())
                .collect()
        })
        .collect();
    let hit = graph
        .closures
        .iter()
        .zip(&closure_names)
        .find(|(_, names)| **names == ray)
        .map(|(c, _)| c)
        .unwrap_or_else(|| {
            panic!("criterion 8: left-ray closure missing, found {closure_names:?}")
        });
    assert!(hit.truncated, "criterion 8: the left ray must be marked truncated");

    finish(8, "module graph and left-ray closure", started, 10);
}

#[test]
fn criterion_9_star_structure() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    for q in verify::battery() {
        let report = verify::star_suite(&q).unwrap();
        assert_all_pass("9", &report);
    }
    finish(9, "star anti-automorphism and its transport", started, 5);
}

#[test]
fn closed_form_action_sanity() {
    // a spot check independent of the suite plumbing: the half-sum acts
    // on T0(1/3) for the monomial quartic by the frozen structure constants
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let params = DqParams::new("0,0,0,0,1".parse().unwrap()).unwrap();
    let lam = Rat::new(1.into(), 3.into());
    let got = dq_core::hc::act_closed_form(ActGen::HalfVPlusW, &Tableau::t0(lam), &params);
    let mut expected = dq_core::hc::Distribution::zero();
    expected.add_term(0, Rat::new(4.into(), 3.into()), Rat::new(1.into(), 54.into()));
    expected.add_term(0, Rat::new(2.into(), 3.into()), Rat::new((-1).into(), 54.into()));
    assert_eq!(got, expected);
}
