mod common;

use boxprune::bmc::{
    compare_runs, explore, replay, resolve_inputs, verify_incremental, ComparisonStatus, HarnessError, NondetPolicy,
    Outcome, VerdictClass,
};
use boxprune::contractor::DEFAULT_EPS;
use boxprune::instrument::{instrument, InstrumentationPlan, SkipReason};
use boxprune::pipeline::{analyze, audit_pruning, instrument_program};
use boxprune::program::{parse_program, Assume, BinOp, BodyStmt, Expr, ProgramIR};

fn program(name: &str) -> ProgramIR {
    parse_program(&common::read_program(name)).unwrap()
}

fn policy() -> NondetPolicy {
    NondetPolicy::default()
}

#[test]
fn exploration_is_deterministic() {
    let p = program("shifted_pair.c");
    let run = || {
        let mut v = verify_incremental(&p, 50, &policy()).unwrap();
        v.stats.wall_time = Default::default();
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn low_bound_on_afnp_is_inconclusive() {
    let v = verify_incremental(&program("afnp2014.c"), 10, &policy()).unwrap();
    assert_eq!(v.class, VerdictClass::Unknown);
    assert_eq!(v.k_reached, 10);
    assert!(!v.completion);
}

#[test]
fn raising_the_bound_only_adds_behaviour() {
    let p = program("race.c");
    let mut last = 0;
    let mut bug_seen = false;
    for k in 0..6 {
        let (outcome, stats) = explore(&p, k, &policy()).unwrap();
        assert!(stats.states_visited >= last, "k = {k}");
        last = stats.states_visited;
        let bug = matches!(outcome, Outcome::Bug(_));
        assert!(bug || !bug_seen, "bug disappeared at k = {k}");
        bug_seen |= bug;
    }
    assert!(bug_seen);
}

#[test]
fn immediate_assertion_failure() {
    let p = parse_program("int main() {\n    int x = 3;\n    assert(x < 2);\n    return 0;\n}\n").unwrap();
    let v = verify_incremental(&p, 5, &policy()).unwrap();
    assert_eq!(v.class, VerdictClass::Unsafe);
    let cex = v.counterexample.unwrap();
    assert_eq!((cex.iterations, cex.failed_assert), (0, 0));
    assert_eq!(v.k_reached, 0);
}

#[test]
fn counterexamples_replay() {
    for name in ["unsigned_pair.c", "shifted_pair.c", "race.c", "nonmono.c", "afnp_gap.c"] {
        let p = program(name);
        let side = common::corpus().into_iter().find(|(n, ..)| n == name).unwrap().2;
        let v = verify_incremental(&p, 1000, &side.policy(&policy())).unwrap();
        let cex = v.counterexample.unwrap_or_else(|| panic!("{name} has no counterexample"));
        let r = replay(&p, &cex).unwrap();
        assert!(r.violated, "{name}");
        assert!(!r.trace.is_empty());
        assert_eq!(r.trace.last().unwrap().pc, format!("assert #{}", cex.failed_assert));
    }
}

#[test]
fn shortest_bug_is_reported() {
    let v = verify_incremental(&program("afnp_gap.c"), 1000, &policy()).unwrap();
    let (outcome, _) = explore(&program("afnp_gap.c"), 1000, &policy()).unwrap();
    let Outcome::Bug(full) = outcome else { panic!("expected a bug") };
    assert_eq!(full.iterations, v.counterexample.unwrap().iterations);
}

#[test]
fn harness_errors() {
    let wide = parse_program("int x = nondet_int();\nassert(x >= 0);\n").unwrap();
    assert!(matches!(resolve_inputs(&wide, &policy()), Err(HarnessError::Config(_))));
    let narrowed = policy().with_range("x", -3, 3);
    assert_eq!(resolve_inputs(&wide, &narrowed).unwrap().get("x"), Some((-3, 3)));
    assert_eq!(verify_incremental(&wide, 0, &narrowed).unwrap().class, VerdictClass::Unsafe);

    let overflow = parse_program(
        "int main() {\n int x = 2147483000;\n while (x > 0 && nondet_int()) {\n  x = x + 1000;\n }\n assert(x > 0);\n return 0;\n}\n",
    )
    .unwrap();
    match verify_incremental(&overflow, 5, &policy()) {
        Err(HarnessError::Overflow { var, line }) => {
            assert_eq!(var, "x");
            assert_eq!(line, Some(4));
        }
        other => panic!("expected overflow, got {other:?}"),
    }

    let empty = parse_program("int x = nondet_int();\nassume(x > 3 && x < 1);\nassert(x >= 0);\n").unwrap();
    assert_eq!(resolve_inputs(&empty, &policy()), Err(HarnessError::EmptyDomain));
}

#[test]
fn skipped_plans_leave_the_program_alone() {
    for name in ["unsigned_pair.c", "nonmono.c", "not_equal.c", "race.c"] {
        let p = program(name);
        let (q, a) = instrument_program(&p, DEFAULT_EPS).unwrap();
        assert!(!a.plan.applied, "{name}");
        assert_eq!(q, p, "{name}");
    }
    let p = program("shifted_pair.c");
    assert_eq!(instrument(&p, &InstrumentationPlan::not_applied(SkipReason::NoPruning)), p);
}

#[test]
fn skip_reasons() {
    let reason = |name: &str| analyze(&program(name), DEFAULT_EPS).unwrap().plan.reason;
    assert_eq!(reason("unsigned_pair.c"), Some(SkipReason::NoPruning));
    assert_eq!(reason("nonmono.c"), Some(SkipReason::UnsafePlacement));
    assert_eq!(reason("not_equal.c"), Some(SkipReason::UnsupportedOperator));
    assert_eq!(reason("afnp2014.c"), None);

    let opaque = parse_program(
        "int main() {\n int x = 1, y = 0;\n while (y < 10 && nondet_int()) {\n  x = x * 2;\n  y = y + 1;\n }\n assert(x >= y);\n return 0;\n}\n",
    )
    .unwrap();
    assert_eq!(analyze(&opaque, DEFAULT_EPS).unwrap().plan.reason, Some(SkipReason::OpaqueUpdate));

    let doomed = parse_program("unsigned int x = nondet_uint();\nassume(x <= 5);\nassert(x > 9);\n").unwrap();
    assert_eq!(analyze(&doomed, DEFAULT_EPS).unwrap().plan.reason, Some(SkipReason::WholeDomainViolates));
}

#[test]
fn applied_plans_only_cut_proven_states() {
    for name in ["afnp2014.c", "count_up.c", "countdown.c", "shifted_pair.c", "strict_gap.c"] {
        let p = program(name);
        let (q, a) = instrument_program(&p, DEFAULT_EPS).unwrap();
        assert!(a.plan.applied, "{name}");
        let inputs = resolve_inputs(&p, &policy()).unwrap();
        let audit = audit_pruning(&q, a.partition.as_ref().unwrap(), 1000, &inputs).unwrap();
        assert!(audit.pruned > 0, "{name}");
        assert_eq!(audit.unsound, 0, "{name}: {:?}", audit.first_unsound);
    }
}

/// An inserted assumption that hides the bug must show up as a divergence.
#[test]
fn divergence_is_detected_when_a_bug_is_hidden() {
    let p = program("race.c");
    let mut q = p.clone();
    let hide = Expr::binary(BinOp::Le, Expr::var("y"), Expr::Int(0));
    q.lp.as_mut().unwrap().body.push(BodyStmt::Assume(Assume::synthetic(hide)));
    let cmp = compare_runs(&p, &q, 1000, &policy()).unwrap();
    assert_eq!(cmp.original.class, VerdictClass::Unsafe);
    assert_eq!(cmp.instrumented.class, VerdictClass::Safe);
    assert_eq!(cmp.status, ComparisonStatus::VerdictDivergence);
}

#[test]
fn comparison_rejects_different_declarations() {
    let p = program("race.c");
    let q = program("shifted_pair.c");
    assert!(matches!(compare_runs(&p, &q, 10, &policy()), Err(HarnessError::Config(_))));
}
