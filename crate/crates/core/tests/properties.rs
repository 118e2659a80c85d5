use proptest::prelude::*;

use convexdist::label::{certainly_le, enforce_less};
use convexdist::{level_of, Configuration, DistanceLabel, Engine, LabelSet, Span};

const K: u8 = 4;

fn label_set(k: u8) -> impl Strategy<Value = LabelSet> {
    (1u32..(1 << (k + 1))).prop_map(move |m| {
        let finite = m & ((1 << k) - 1);
        let inf = if m >> k != 0 {
            LabelSet::INF
        } else {
            LabelSet::EMPTY
        };
        LabelSet::from_bits(finite as u16).union(inf)
    })
}

fn configuration() -> impl Strategy<Value = Configuration> {
    (-3i32..2, 1usize..4, -1i32..3, 1usize..4).prop_flat_map(|(tlo, tw, blo, bw)| {
        let top = Span::new(tlo, tlo + tw as i32 - 1);
        let bottom = Span::new(blo, blo + bw as i32 - 1);
        prop::collection::vec(label_set(K), tw * bw)
            .prop_map(move |cells| Configuration::from_cells(K, top, bottom, cells))
    })
}

/// Concrete stand-ins for labels: finite `x` has length `100 - x`, and each
/// `inf` gets its own value below every finite one.
fn concrete(l: DistanceLabel, inf_value: i32) -> i32 {
    match l {
        DistanceLabel::Finite(x) => 100 - x as i32,
        DistanceLabel::Inf => inf_value,
    }
}

proptest! {
    #[test]
    fn shrink_is_intersection(s in label_set(K), keep in label_set(K)) {
        match s.shrink(keep) {
            Ok(r) => {
                prop_assert!(r.is_subset(s) && r.is_subset(keep) && !r.is_empty());
                prop_assert_eq!(r, s.intersect(keep));
            }
            Err(_) => prop_assert!(s.intersect(keep).is_empty()),
        }
    }

    #[test]
    fn certainly_le_holds_for_every_pair(x in label_set(K), y in label_set(K), a in 0i32..50, b in 0i32..50) {
        if certainly_le(x, y) {
            for lx in x.iter() {
                for ly in y.iter() {
                    prop_assert!(concrete(lx, a) <= concrete(ly, b));
                }
            }
        }
    }

    #[test]
    fn enforce_less_keeps_every_consistent_pair(s in label_set(K), l in label_set(K), a in 0i32..50, b in 0i32..50) {
        let result = enforce_less(s, l);
        for ls in s.iter() {
            for ll in l.iter() {
                if concrete(ls, a) < concrete(ll, b) {
                    let (s2, l2) = result.expect("a consistent pair exists");
                    prop_assert!(s2.contains(ls) && l2.contains(ll));
                }
            }
        }
        if let Ok((s2, l2)) = result {
            prop_assert!(s2.is_subset(s) && l2.is_subset(l));
        }
    }

    #[test]
    fn label_set_text_round_trip(s in label_set(15)) {
        prop_assert_eq!(s.to_string().parse::<LabelSet>().unwrap(), s);
    }

    #[test]
    fn grid_round_trip(mut c in configuration(), marks in prop::collection::vec((0usize..9, 0usize..9), 0..4)) {
        let (top, bottom) = (c.top(), c.bottom());
        for (a, b) in marks {
            let i = top.lo + (a % top.width()) as i32;
            let j = bottom.lo + (b % bottom.width()) as i32;
            c.mark(i, j);
        }
        let back = Configuration::from_grid(K, &c.to_grid()).unwrap();
        prop_assert_eq!(back.to_grid(), c.to_grid());
        for ((i, j), s) in c.cells() {
            prop_assert_eq!(back.get(i, j), s);
            prop_assert_eq!(back.is_marked(i, j), c.is_marked(i, j));
        }
    }

    #[test]
    fn level_is_difference(i in -100i32..100, j in -100i32..100) {
        prop_assert_eq!(level_of(i, j), j - i);
        prop_assert_eq!(level_of(i + 7, j + 7), level_of(i, j));
    }

    #[test]
    fn propagation_is_monotone_bounded_and_idempotent(c in configuration()) {
        let engine = Engine::default();
        let cells = c.top().width() * c.bottom().width();
        if let Ok((out, rounds)) = engine.propagate_traced(c.clone(), None) {
            for ((i, j), s) in c.cells() {
                prop_assert!(out.get(i, j).is_subset(s));
                prop_assert!(!out.get(i, j).is_empty());
            }
            prop_assert!(rounds <= (K as usize + 1) * cells);
            prop_assert_eq!(engine.propagate(out.clone()), Ok(out));
        }
    }

    #[test]
    fn propagation_respects_subsets(c in configuration(), seed in any::<u64>()) {
        // the rules only ever get stronger on narrower input
        let engine = Engine::default();
        let mut narrow = c.clone();
        let mut bits = seed;
        for ((i, j), s) in c.cells() {
            let keep = LabelSet::from_bits((bits & 0xffff) as u16 | 0x8000);
            bits = bits.rotate_left(7);
            if let Ok(r) = s.shrink(keep) {
                narrow.set(i, j, r);
            }
        }
        if let Ok(out) = engine.propagate(narrow.clone()) {
            let wide = engine.propagate(c.clone());
            prop_assert!(wide.is_ok(), "a narrower configuration survived a refuted one");
            let wide = wide.unwrap();
            for ((i, j), s) in out.cells() {
                prop_assert!(s.is_subset(wide.get(i, j)));
            }
        }
    }
}

#[test]
fn count_targets_filters_by_level() {
    let mut c = Configuration::new(3, Span::new(-1, 2), Span::new(0, 3));
    c.mark(0, 1);
    c.mark(1, 2);
    c.mark(0, 2);
    assert_eq!(c.count_targets(1), 2);
    assert_eq!(c.count_targets(2), 3);
    assert_eq!(c.count_targets(0), 0);
}
