use proptest::prelude::*;

use tabnl_core::eval::{compute_metrics, Instance, Label, LabelSpace};
use tabnl_core::natlog::{execute_proof, Verdict};
use tabnl_core::number::{parse_number, Decimal};
use tabnl_core::numerals::{
    compare, parse_quantity, project, relate, Evidence, HaloMode, HaloPolicy, MonotoneEnv, NatOp, NumSet, Polarity,
};
use tabnl_core::probe::{build_probe, generate_variations, probe_numeral};
use tabnl_core::tables::{extract_numbers, parse_table, CellValue, TableRecord};

use NatOp::*;

const OPS: [NatOp; 7] = [Equiv, Forward, Reverse, Negation, Alternation, Cover, Independence];

fn op() -> impl Strategy<Value = NatOp> {
    prop::sample::select(OPS.to_vec())
}

fn exact(v: i64) -> Evidence {
    Evidence::Quantity(parse_quantity(&v.to_string()).unwrap())
}

fn down() -> MonotoneEnv {
    MonotoneEnv { polarity: Polarity::Downward, ..MonotoneEnv::default() }
}

proptest! {
    #[test]
    fn grouped_numbers_round_trip(v in 0i64..10_000_000_000, places in 0u32..3) {
        let d = Decimal::from_ratio(v, 10i64.pow(places));
        for grouped in [true, false] {
            let text = d.render_fixed(places, grouped);
            let tok = parse_number(&text).unwrap();
            prop_assert_eq!(&tok.value, &d);
            prop_assert_eq!(tok.decimals, places);
        }
    }

    #[test]
    fn table_numbers_are_extracted(values in prop::collection::vec(0i64..5_000_000, 1..12)) {
        let cells: Vec<String> = values.iter().map(|v| Decimal::from_int(*v).render(0)).collect();
        let table = parse_table(&[vec!["Value".to_string()], cells.clone()], "", 1).unwrap();
        let inventory = extract_numbers(std::slice::from_ref(&table));
        for (v, cell) in values.iter().zip(&table.rows[1]) {
            prop_assert!(inventory.contains(&Decimal::from_int(*v)));
            prop_assert_eq!(&cell.value, &CellValue::Number(Decimal::from_int(*v)));
        }
    }

    #[test]
    fn exact_numerals_match_only_themselves(a in 0i64..100_000, b in 0i64..100_000) {
        let claim = parse_quantity(&b.to_string()).unwrap();
        let got = compare(&exact(a), &claim, &MonotoneEnv::upward(), &HaloPolicy::default()).unwrap();
        prop_assert_eq!(got, if a == b { Equiv } else { Alternation });
    }

    #[test]
    fn relations_invert_under_swap(a in 0i64..1000, w in 0i64..100, b in 0i64..1000, u in 0i64..100) {
        let x = NumSet::closed(Decimal::from_int(a), Decimal::from_int(a + w));
        let y = NumSet::closed(Decimal::from_int(b), Decimal::from_int(b + u));
        let (xy, yx) = (relate(&x, &y), relate(&y, &x));
        match xy {
            Forward => prop_assert_eq!(yx, Reverse),
            Reverse => prop_assert_eq!(yx, Forward),
            other => prop_assert_eq!(yx, other),
        }
    }

    #[test]
    fn upward_projection_is_identity(o in op()) {
        prop_assert_eq!(project(&MonotoneEnv::upward(), o), o);
    }

    #[test]
    fn downward_projection_is_an_involution(o in prop::sample::select(vec![Equiv, Forward, Reverse, Negation, Independence])) {
        prop_assert_eq!(project(&down(), project(&down(), o)), o);
    }

    #[test]
    fn wider_halo_keeps_entailment(e in 1i64..10_000, c in 1i64..10_000, eps in 0i64..50, extra in 0i64..50) {
        let claim = parse_quantity(&c.to_string()).unwrap();
        let narrow = HaloPolicy::with_mode(HaloMode::Relative { epsilon: Decimal::from_ratio(eps, 100) });
        let wide = HaloPolicy::with_mode(HaloMode::Relative { epsilon: Decimal::from_ratio(eps + extra, 100) });
        let before = compare(&exact(e), &claim, &MonotoneEnv::upward(), &narrow).unwrap();
        let after = compare(&exact(e), &claim, &MonotoneEnv::upward(), &wide).unwrap();
        if before == Forward {
            prop_assert_eq!(after, Forward);
        }
        if after == Alternation {
            prop_assert_eq!(before, Alternation);
        }
    }

    #[test]
    fn unknown_state_absorbs(prefix in prop::collection::vec(op(), 0..5), suffix in prop::collection::vec(op(), 0..5)) {
        let (v, _) = execute_proof(&prefix);
        if v == Verdict::Nei {
            let all = [prefix.clone(), suffix].concat();
            prop_assert_eq!(execute_proof(&all).0, Verdict::Nei);
        }
        let padded: Vec<NatOp> = prefix.iter().flat_map(|o| [Equiv, *o]).collect();
        prop_assert_eq!(execute_proof(&padded).0, v);
    }

    #[test]
    fn entailing_chains_are_supported(ops in prop::collection::vec(prop::sample::select(vec![Equiv, Forward]), 0..8)) {
        prop_assert_eq!(execute_proof(&ops).0, Verdict::Supported);
    }

    #[test]
    fn variations_only_touch_the_numeral(
        value in 1i64..50_000_000,
        cents in prop::option::of(0i64..100),
        percent in any::<bool>(),
        leading in any::<bool>(),
    ) {
        let mut number = Decimal::from_int(value).render(0);
        if let Some(c) = cents {
            number = format!("{number}.{c:02}");
        }
        if percent {
            number.push('%');
        }
        let claim = if leading { format!("{number} was the figure in 1998.") } else { format!("In 1998 the figure was {number} overall.") };
        let tok = probe_numeral(&claim).unwrap();
        let (head, tail) = (&claim[..tok.start], &claim[tok.end..]);
        let variations = generate_variations(&claim, &tok).unwrap();
        prop_assert_eq!(variations.len(), 17);
        for v in variations {
            prop_assert!(v.claim.starts_with(head) && v.claim.ends_with(tail), "{}", v.claim);
            prop_assert_eq!(&v.claim[head.len()..v.claim.len() - tail.len()], v.mutated_span.as_str());
            let q = parse_quantity(&v.mutated_span).unwrap();
            prop_assert_eq!(q.value, v.value.round_to(2), "{}", v.mutated_span);
            prop_assert_eq!(q.percent, percent);
        }
    }

    #[test]
    fn probe_size_is_eighteen_per_base(n in 0usize..30, refuted in 0usize..5) {
        let mut instances: Vec<Instance> = (0..n)
            .map(|i| Instance::new(format!("s{i}"), format!("It scored {} points.", i + 1), Some(Label::Supported), Vec::<TableRecord>::new()))
            .collect();
        instances.extend((0..refuted).map(|i| Instance::new(format!("r{i}"), "It scored 5 points.", Some(Label::Refuted), Vec::new())));
        prop_assert_eq!(build_probe(&instances).len(), 18 * n);
    }

    #[test]
    fn metric_bounds_and_two_way(pairs in prop::collection::vec((0u8..3, 0u8..3), 1..80)) {
        let verdicts: Vec<Verdict> = pairs.iter().map(|(p, _)| Verdict::ALL[usize::from(*p)]).collect();
        let golds: Vec<Label> = pairs.iter().map(|(_, g)| Label::from(Verdict::ALL[usize::from(*g)])).collect();
        for space in [LabelSpace::ThreeWay, LabelSpace::TwoWay] {
            let m = compute_metrics(&verdicts, &golds, space).unwrap();
            for f in [m.accuracy.unwrap(), m.macro_f1.unwrap()] {
                prop_assert!((0.0..=1.0).contains(&f));
            }
        }
        for v in &verdicts {
            let projected = LabelSpace::TwoWay.project(Label::from(*v));
            prop_assert_eq!(projected == Label::Supported, *v == Verdict::Supported);
        }
        let mut rv = verdicts.clone();
        let mut rg = golds.clone();
        rv.reverse();
        rg.reverse();
        prop_assert_eq!(
            compute_metrics(&verdicts, &golds, LabelSpace::ThreeWay).unwrap(),
            compute_metrics(&rv, &rg, LabelSpace::ThreeWay).unwrap()
        );
    }
}
