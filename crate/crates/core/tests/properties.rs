use std::collections::BTreeMap;

use proptest::prelude::*;
use skyshift_core::clusters::{build_automaton, m_level_dp, m_level_enum, minimal_cluster};
use skyshift_core::equivalence::{partition, Relation, Universe};
use skyshift_core::skyline::{
    apply_shift, enumerate_shifts, is_valid_shift, shift_class, RigidShift,
};
use skyshift_core::words::{embeddings, eta, generate_by_sum, is_rearrangement, Word};
use skyshift_core::{strong_wilf_equivalent, TriPoly};

fn words_up_to_sum(s: u32) -> Vec<Word> {
    (1..=s).flat_map(|k| generate_by_sum(k).unwrap()).collect()
}

/// Every word of length `len` over `1..=max`.
fn words_over(max: u32, len: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (1..=max).map(move |l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(|v| Word::new(v).unwrap()).collect()
}

fn arb_word(max_len: usize, max_letter: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=max_letter, 1..=max_len).prop_map(|v| Word::new(v).unwrap())
}

#[test]
fn eta_counts_embeddings_exhaustively() {
    let patterns: Vec<Word> = (1..=3).flat_map(|n| words_over(2, n)).collect();
    for len in 0..=12 {
        for host in words_over(2, len) {
            for u in &patterns {
                let e = embeddings(u, &host);
                assert_eq!(eta(u, &host), e.positions.len());
                for &i in &e.positions {
                    assert!((0..u.len()).all(|t| u.letters()[t] <= host.letters()[i - 1 + t]));
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn eta_monotone_in_host(u in arb_word(3, 4), w in arb_word(8, 4), at in 0usize..8) {
        let at = at % w.len();
        let mut bumped = w.letters().to_vec();
        bumped[at] += 1;
        prop_assert!(eta(&u, &Word::new(bumped).unwrap()) >= eta(&u, &w));
    }

    #[test]
    fn eta_reversal_symmetric(u in arb_word(4, 4), w in arb_word(10, 4)) {
        prop_assert_eq!(eta(&u, &w), eta(&u.reversed(), &w.reversed()));
    }

    #[test]
    fn strong_wilf_implies_rearrangement(u in arb_word(4, 3), v in arb_word(4, 3)) {
        if strong_wilf_equivalent(&u, &v).equivalent {
            prop_assert!(is_rearrangement(&u, &v));
        }
    }

    #[test]
    fn dp_matches_enumeration_on_larger_words(u in arb_word(7, 6), m in 1usize..=4) {
        prop_assume!(u.len() >= 5);
        let cap = (m as u64 * u.weight()) as u32;
        prop_assert_eq!(m_level_dp(&build_automaton(&u), m, cap), m_level_enum(&u, m, cap));
    }
}

#[test]
fn shifts_conserve_length_sum_and_letters() {
    for u in words_up_to_sum(10) {
        let len = u.len() as i64;
        for h in 1..=u.max_letter() {
            for k in (1 - len..len).filter(|&k| k != 0) {
                let s = RigidShift::new(h, k).unwrap();
                let Ok(v) = apply_shift(&u, s) else { continue };
                assert_eq!(v.len(), u.len());
                assert_eq!(v.weight(), u.weight());
                assert!(is_rearrangement(&u, &v), "{u} {s} -> {v}");
                // the move is undone by the opposite offset
                assert!(is_valid_shift(&v, s.inverse()));
                assert_eq!(apply_shift(&v, s.inverse()).unwrap(), u);
                // a column left below the cut receives nothing
                for n in 1..=len {
                    if u.at(n).min(h) < h {
                        assert_eq!(u.at(n - k).saturating_sub(h), 0);
                    }
                }
            }
        }
    }
}

#[test]
fn shift_classes_are_consistent() {
    for u in words_up_to_sum(8) {
        let class = shift_class(&u);
        assert!(class.contains(&u));
        assert_eq!(class.representative, class.members[0]);
        for v in &class.members {
            assert!(is_rearrangement(&u, v));
            assert_eq!(&shift_class(v), &class);
        }
        for (_, v) in enumerate_shifts(&u) {
            assert!(class.contains(&v));
        }
        assert!(class.contains(&u.reversed()));
    }
}

fn offset_vectors(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![1usize]];
    for _ in 1..m {
        out = out
            .into_iter()
            .flat_map(|o| {
                (1..n).map(move |g| {
                    let mut q = o.clone();
                    q.push(o[o.len() - 1] + g);
                    q
                })
            })
            .collect();
    }
    out
}

#[test]
fn minimal_clusters_are_minimal() {
    for u in words_up_to_sum(7).into_iter().filter(|u| u.len() >= 2) {
        for m in 1..=3 {
            for offs in offset_vectors(u.len(), m) {
                let c = minimal_cluster(&u, &offs).unwrap();
                for n in 0..c.word.len() {
                    let mut lowered = c.word.letters().to_vec();
                    lowered[n] -= 1;
                    let broken = offs
                        .iter()
                        .any(|&i| (0..u.len()).any(|t| lowered[i - 1 + t] < u.letters()[t]));
                    assert!(broken, "{u} {offs:?} column {}", n + 1);
                }
            }
        }
    }
}

#[test]
fn shifted_clusters_are_shifted_patterns() {
    for u in words_up_to_sum(9).into_iter().filter(|u| u.len() >= 2) {
        for (s, v) in enumerate_shifts(&u) {
            for m in 1..=4 {
                for offs in offset_vectors(u.len(), m) {
                    let cu = minimal_cluster(&u, &offs).unwrap().word;
                    let cv = minimal_cluster(&v, &offs).unwrap().word;
                    assert_eq!(apply_shift(&cu, s).as_ref(), Ok(&cv), "{u} {s} {offs:?}");
                }
            }
        }
    }
}

#[test]
fn reversal_preserves_cluster_statistics() {
    let stats = |u: &Word, m: usize| {
        let mut counts: BTreeMap<(usize, u64), usize> = BTreeMap::new();
        for offs in offset_vectors(u.len(), m) {
            let c = minimal_cluster(u, &offs).unwrap().word;
            *counts.entry((c.len(), c.weight())).or_default() += 1;
        }
        counts
    };
    for u in words_up_to_sum(10)
        .into_iter()
        .filter(|u| (2..=5).contains(&u.len()))
    {
        for m in 1..=4 {
            assert_eq!(stats(&u, m), stats(&u.reversed(), m), "{u} m={m}");
        }
    }
}

fn assert_refines(universe: &Universe) {
    let shift = partition(universe, Relation::Shift).unwrap();
    let swe = partition(universe, Relation::StrongWilf).unwrap();
    let swe_of = swe.class_index();
    for class in &shift.classes {
        let target = swe_of[&class[0]];
        assert!(
            class.iter().all(|w| swe_of[w] == target),
            "{}: {class:?}",
            universe.description
        );
    }
    assert!(swe.class_count <= shift.class_count);
    for class in &swe.classes {
        assert!(class.iter().all(|w| is_rearrangement(w, &class[0])));
    }
}

#[test]
fn shift_classes_refine_strong_wilf_classes() {
    for n in 1..=6 {
        assert_refines(&Universe::permutations(n).unwrap());
    }
    for s in 1..=12 {
        assert_refines(&Universe::by_sum(s).unwrap());
    }
}

#[test]
fn partition_ignores_worker_count() {
    let universe = Universe::permutations(6).unwrap();
    let run = |jobs| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .unwrap();
        pool.install(|| {
            let swe = partition(&universe, Relation::StrongWilf).unwrap();
            let shift = partition(&universe, Relation::Shift).unwrap();
            serde_json::to_string(&(swe, shift)).unwrap()
        })
    };
    let single = run(1);
    assert_eq!(single, run(3));
    assert_eq!(single, run(8));
}

#[test]
fn series_pipeline_on_a_few_patterns() {
    for s in ["21", "3122", "132", "2222", "141"] {
        let u: Word = s.parse().unwrap();
        let a = skyshift_core::series_a(&u, 10, 10).unwrap();
        assert_eq!(a, skyshift_core::brute_force_a(&u, 10).unwrap(), "{s}");
        // F_u counts avoiders: z = 0
        let f: TriPoly = a.at_z_zero();
        assert!(!f.is_zero());
    }
}
