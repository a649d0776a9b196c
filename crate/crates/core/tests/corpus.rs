mod common;

use boxprune::bmc::{compare_runs, replay, ComparisonStatus, NondetPolicy, VerdictClass};
use boxprune::contractor::DEFAULT_EPS;
use boxprune::pipeline::instrument_program;
use boxprune::program::parse_program;

#[test]
fn instrumentation_preserves_verdicts_on_corpus() {
    let corpus = common::corpus();
    assert!(corpus.len() >= 10);
    for (name, src, side) in corpus {
        let p = parse_program(&src).unwrap();
        let (q, a) = instrument_program(&p, DEFAULT_EPS).unwrap();
        let cmp = compare_runs(&p, &q, 1000, &side.policy(&NondetPolicy::default())).unwrap();
        println!(
            "{name}: plan applied={} reason={:?} inserts={:?} verdict={:?}/{:?} states {} -> {}",
            a.plan.applied,
            a.plan.reason,
            a.plan.insertions.iter().map(|i| &i.text).collect::<Vec<_>>(),
            cmp.original.class,
            cmp.instrumented.class,
            cmp.original.stats.states_visited,
            cmp.instrumented.stats.states_visited,
        );
        assert_eq!(cmp.status, ComparisonStatus::Agree, "{name}");
        assert_eq!(cmp.original.class, side.expected, "{name}");
        assert!(cmp.instrumented.stats.states_visited <= cmp.original.stats.states_visited, "{name}");
        if let Some(cex) = &cmp.original.counterexample {
            assert!(replay(&p, cex).unwrap().violated, "{name}");
        }
        if cmp.original.class == VerdictClass::Safe {
            assert!(cmp.original.completion);
        }
    }
}
