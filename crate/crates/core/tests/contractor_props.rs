use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use boxprune::contractor::{fixpoint, hc4_revise, inner_contract, outer_contract, partition, ContractorKind, DEFAULT_EPS};
use boxprune::expr::{complement, forward_eval, parse_constraint, ConstraintExpr, Node, Relation, SymbolTable};
use boxprune::interval::{ArithOp, UnaryFn};
use boxprune::{IntBox, Interval};

fn node() -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![
        3 => (0usize..2).prop_map(Node::var),
        1 => (-4i32..=4).prop_map(|c| Node::constant(c.into())),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Node::binary(ArithOp::Add, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Node::binary(ArithOp::Sub, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Node::binary(ArithOp::Mul, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Node::binary(ArithOp::Div, l, r)),
            inner.clone().prop_map(|e| Node::unary(UnaryFn::Neg, e)),
            inner.prop_map(|e| Node::unary(UnaryFn::Sqr, e)),
        ]
    })
}

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![Just(Relation::Le0), Just(Relation::Ge0), Just(Relation::Lt0), Just(Relation::Gt0)]
}

fn constraint() -> impl Strategy<Value = ConstraintExpr> {
    (node(), relation()).prop_map(|(n, r)| ConstraintExpr::new(n, r))
}

fn int_box() -> impl Strategy<Value = IntBox> {
    ((-6i32..6, 0i32..10), (-6i32..6, 0i32..10)).prop_map(|((x, w), (y, h))| {
        IntBox::new([
            ("x", Interval::new(x.into(), (x + w).into())),
            ("y", Interval::new(y.into(), (y + h).into())),
        ])
    })
}

fn exact(n: &Node, p: [i64; 2]) -> Option<BigRational> {
    Some(match n {
        Node::Const { value, .. } => BigRational::from_float(*value)?,
        Node::Var(i) => BigRational::from_integer(BigInt::from(p[*i])),
        Node::Binary(op, l, r) => {
            let (a, b) = (exact(l, p)?, exact(r, p)?);
            match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div if b.is_zero() => return None,
                ArithOp::Div => a / b,
            }
        }
        Node::Unary(UnaryFn::Neg, e) => -exact(e, p)?,
        Node::Unary(UnaryFn::Sqr, e) => {
            let v = exact(e, p)?;
            &v * &v
        }
        Node::Unary(UnaryFn::Sqrt, _) => return None,
    })
}

fn holds(c: &ConstraintExpr, p: [i64; 2]) -> Option<bool> {
    let v = exact(&c.root, p)?;
    Some(match c.relation {
        Relation::Le0 => !v.is_positive(),
        Relation::Lt0 => v.is_negative(),
        Relation::Ge0 => !v.is_negative(),
        Relation::Gt0 => v.is_positive(),
        Relation::Eq0 => v.is_zero(),
    })
}

fn in_interval(iv: Interval, v: &BigRational) -> bool {
    let lo_ok = iv.lo() == f64::NEG_INFINITY || (iv.lo().is_finite() && BigRational::from_float(iv.lo()).unwrap() <= *v);
    let hi_ok = iv.hi() == f64::INFINITY || (iv.hi().is_finite() && *v <= BigRational::from_float(iv.hi()).unwrap());
    lo_ok && hi_ok
}

fn points(b: &IntBox) -> Vec<[i64; 2]> {
    let (x, y) = (b.at(0), b.at(1));
    let mut out = Vec::new();
    for i in x.lo() as i64..=x.hi() as i64 {
        for j in y.lo() as i64..=y.hi() as i64 {
            out.push([i, j]);
        }
    }
    out
}

fn has(b: &IntBox, p: [i64; 2]) -> bool {
    b.contains_point(&[p[0] as f64, p[1] as f64])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn forward_evaluation_encloses_values(c in constraint(), b in int_box()) {
        let (range, _) = forward_eval(&c, &b);
        for p in points(&b) {
            if let Some(v) = exact(&c.root, p) {
                prop_assert!(in_interval(range, &v), "{:?} at {:?} outside {}", c, p, range);
            }
        }
    }

    #[test]
    fn revise_keeps_points_reaching_the_target(c in constraint(), b in int_box(), lo in -5i32..5, w in 0i32..6) {
        let target = Interval::new(lo.into(), (lo + w).into());
        let out = hc4_revise(&b, &c, target);
        prop_assert!(out.is_subset(&b));
        for p in points(&b) {
            if let Some(v) = exact(&c.root, p) {
                if in_interval(target, &v) {
                    prop_assert!(has(&out, p), "{:?} lost {:?} (value {})", c, p, v);
                }
            }
        }
    }

    #[test]
    fn contractors_are_contracting_and_correct(cs in prop::collection::vec(constraint(), 1..3), b in int_box()) {
        let outer = outer_contract(&b, &cs);
        let inner = inner_contract(&b, &cs).unwrap();
        let (outer_fp, rep) = fixpoint(ContractorKind::Outer, &b, &cs, &[true, true], DEFAULT_EPS).unwrap();
        let (inner_fp, _) = fixpoint(ContractorKind::Inner, &b, &cs, &[true, true], DEFAULT_EPS).unwrap();
        prop_assert!(outer.is_subset(&b) && inner.is_subset(&b));
        prop_assert!(outer_fp.is_subset(&outer) || outer_fp.is_empty());
        prop_assert!(rep.sweeps >= 1);
        for p in points(&b) {
            let Some(sat) = cs.iter().map(|c| holds(c, p)).collect::<Option<Vec<_>>>() else { continue };
            let all = sat.iter().all(|&s| s);
            if all {
                prop_assert!(has(&outer, p) && has(&outer_fp, p));
            } else {
                prop_assert!(has(&inner, p) && has(&inner_fp, p));
            }
        }
    }

    #[test]
    fn partition_regions_are_disjoint_and_labelled(cs in prop::collection::vec(constraint(), 1..3), b in int_box()) {
        let part = partition(&b, &cs, &[true, true], DEFAULT_EPS).unwrap();
        for p in points(&b) {
            let pf = [p[0] as f64, p[1] as f64];
            let (o, i, u) = (part.s_out.contains_point(&pf), part.s_in.contains_point(&pf), part.s_boundary.contains_point(&pf));
            prop_assert_eq!(o as u8 + i as u8 + u as u8, 1, "{:?}", p);
            let Some(sat) = cs.iter().map(|c| holds(c, p)).collect::<Option<Vec<_>>>() else { continue };
            let all = sat.iter().all(|&s| s);
            prop_assert!(!(o && all), "violating region holds solution {:?}", p);
            prop_assert!(!(i && !all), "satisfying region holds violation {:?}", p);
        }
        if let Some(h) = part.keep_hull() {
            prop_assert!(h.is_subset(&b));
        }
    }

    #[test]
    fn complement_flips_truth(c in constraint(), b in int_box()) {
        let n = complement(&c).unwrap();
        for p in points(&b) {
            if let (Some(a), Some(z)) = (holds(&c, p), holds(&n, p)) {
                // strict relations are closed over, so both may hold on the zero set
                prop_assert!(a || z);
            }
        }
    }

    #[test]
    fn printing_then_parsing_preserves_meaning(c in constraint(), b in int_box()) {
        let names = vec!["x".to_string(), "y".to_string()];
        let text = c.display(&names).to_string();
        let back = parse_constraint(&text, &SymbolTable::new(names.iter().cloned()));
        let back = match back {
            Ok(back) => back,
            Err(e) => return Err(TestCaseError::fail(format!("`{text}`: {e}"))),
        };
        for p in points(&b) {
            prop_assert_eq!(holds(&c, p), holds(&back, p), "`{}` at {:?}", text, p);
        }
    }
}

#[test]
fn equality_has_no_complement() {
    let s = SymbolTable::new(["x", "y"]);
    let c = parse_constraint("x == y", &s).unwrap();
    assert_eq!(c.relation, Relation::Eq0);
    assert_eq!(complement(&c).unwrap_err().unsupported_operator(), Some("=="));
    let b = IntBox::new([("x", Interval::new(0.0, 5.0)), ("y", Interval::new(3.0, 9.0))]);
    let out = outer_contract(&b, std::slice::from_ref(&c));
    assert_eq!(out, IntBox::new([("x", Interval::new(3.0, 5.0)), ("y", Interval::new(3.0, 5.0))]));
    assert!(partition(&b, &[c], &[true, true], DEFAULT_EPS).is_err());
}
