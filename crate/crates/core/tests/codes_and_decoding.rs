use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use tdcodes::bounds::{
    partition_bound, partition_sphere_data, sp_bound_closed_form, sp_bound_partition_sum,
    sp_bound_roots, PartitionKind,
};
use tdcodes::channel::duplication_ball;
use tdcodes::codes::{
    checksum_class_sizes, enumerate_code, smallest_valid_prime, CodeSpec, Construction,
    DEFAULT_BUDGET,
};
use tdcodes::decoder::decode;
use tdcodes::word::{tandem_duplicate, Word};

fn as_rational(n: usize) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Every word reachable by at most t duplications, tagged with one
/// duplication sequence that produced it.
fn all_patterns(x: &Word, t: usize, l: usize) -> Vec<Word> {
    let mut out = vec![x.clone()];
    let mut frontier = vec![x.clone()];
    for _ in 0..t {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..=w.len() - l {
                next.push(tandem_duplicate(w, i, l).unwrap());
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn c1_decodes_every_single_duplication() {
    let spec = CodeSpec::optimal(2, 8, 1, 2, Construction::C1, DEFAULT_BUDGET).unwrap();
    for c in enumerate_code(&spec, DEFAULT_BUDGET).unwrap() {
        for v in all_patterns(&c, 1, 2) {
            assert_eq!(decode(&v, &spec).unwrap(), c, "received {v}");
        }
    }
}

#[test]
fn c1_decodes_two_duplications_of_length_one() {
    let spec = CodeSpec::optimal(2, 7, 2, 1, Construction::C1, DEFAULT_BUDGET).unwrap();
    for c in enumerate_code(&spec, DEFAULT_BUDGET).unwrap() {
        for v in all_patterns(&c, 2, 1) {
            assert_eq!(decode(&v, &spec).unwrap(), c, "received {v}");
        }
    }
}

#[test]
fn c2_decodes_every_single_duplication() {
    let spec = CodeSpec::optimal(2, 8, 1, 2, Construction::C2, DEFAULT_BUDGET).unwrap();
    for c in enumerate_code(&spec, DEFAULT_BUDGET).unwrap() {
        for v in all_patterns(&c, 1, 2) {
            assert_eq!(decode(&v, &spec).unwrap(), c, "received {v}");
        }
    }
}

#[test]
fn c2_decodes_two_duplications_of_length_three() {
    let spec = CodeSpec::optimal(2, 8, 2, 3, Construction::C2, DEFAULT_BUDGET).unwrap();
    for c in enumerate_code(&spec, DEFAULT_BUDGET).unwrap() {
        for v in all_patterns(&c, 2, 3) {
            assert_eq!(decode(&v, &spec).unwrap(), c, "received {v}");
        }
    }
}

#[test]
fn c2_balls_are_pairwise_disjoint() {
    let spec = CodeSpec::optimal(2, 8, 1, 2, Construction::C2, DEFAULT_BUDGET).unwrap();
    let mut seen = BTreeSet::new();
    for c in enumerate_code(&spec, DEFAULT_BUDGET).unwrap() {
        for v in duplication_ball(&c, 1, 2).unwrap().members {
            assert!(seen.insert(v.clone()), "{v} lies in two balls");
        }
    }
}

#[test]
fn decoder_fails_exactly_outside_the_balls() {
    for (p, n, t, l, construction) in [
        (2u8, 6, 1, 1, Construction::C1),
        (2, 6, 2, 2, Construction::C2),
        (3, 4, 1, 1, Construction::C1),
        (2, 5, 2, 1, Construction::C2),
    ] {
        let spec = CodeSpec::optimal(p, n, t, l, construction, DEFAULT_BUDGET).unwrap();
        let mut owner = BTreeMap::new();
        for c in enumerate_code(&spec, DEFAULT_BUDGET).unwrap() {
            for v in duplication_ball(&c, t, l).unwrap().members {
                owner.insert(v, c.clone());
            }
        }
        for k in 0..=t + 1 {
            for v in Word::all(p, n + k * l).unwrap() {
                match (decode(&v, &spec), owner.get(&v)) {
                    (Ok(c), Some(expected)) => assert_eq!(&c, expected),
                    (Err(_), None) => {}
                    (got, want) => {
                        panic!("{construction} {v}: decoded {got:?}, ball owner {want:?}")
                    }
                }
            }
        }
    }
}

#[test]
fn pigeonhole_bound_on_residue_classes() {
    for (p, n, t, l) in [(2u8, 10, 1, 1), (2, 9, 2, 2), (3, 7, 1, 2), (2, 12, 3, 1)] {
        for r in 0..=n {
            let xi = smallest_valid_prime(t, r);
            let sizes = checksum_class_sizes(p, n, t, l, r, xi, DEFAULT_BUDGET).unwrap();
            let total: BigUint = sizes.iter().sum();
            let best = sizes.iter().max().unwrap();
            assert!(best * num_traits::pow(BigUint::from(xi), t) >= total);
        }
    }
}

#[test]
fn enumerated_codes_respect_every_upper_bound() {
    for construction in [Construction::C1, Construction::C2] {
        for (p, n, t, l) in [(2u8, 8, 1, 1), (2, 9, 2, 3), (3, 6, 1, 2), (2, 9, 1, 2)] {
            let spec = CodeSpec::optimal(p, n, t, l, construction, DEFAULT_BUDGET).unwrap();
            let size = as_rational(enumerate_code(&spec, DEFAULT_BUDGET).unwrap().len());
            for bound in [
                sp_bound_roots(p as u32, n, t, l).unwrap(),
                sp_bound_partition_sum(p as u32, n, t, l).unwrap(),
                sp_bound_closed_form(p as u32, n, t, l).unwrap(),
            ] {
                assert!(
                    size <= bound.cardinality,
                    "{construction} {:?}",
                    bound.formula
                );
            }
        }
    }
}

/// Largest set of words of Z_p^n with pairwise disjoint balls, by branch and bound.
fn largest_code(p: u8, n: usize, t: usize, l: usize) -> usize {
    let words: Vec<Word> = Word::all(p, n).unwrap().collect();
    let balls: Vec<BTreeSet<Word>> = words
        .iter()
        .map(|w| duplication_ball(w, t, l).unwrap().members)
        .collect();
    let m = words.len();
    let conflicts: Vec<Vec<bool>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| i != j && !balls[i].is_disjoint(&balls[j]))
                .collect()
        })
        .collect();

    fn search(candidates: Vec<usize>, chosen: usize, best: &mut usize, conflicts: &[Vec<bool>]) {
        if chosen + candidates.len() <= *best {
            return;
        }
        let Some((&v, rest)) = candidates.split_first() else {
            *best = (*best).max(chosen);
            return;
        };
        let compatible: Vec<usize> = rest.iter().copied().filter(|&u| !conflicts[v][u]).collect();
        search(compatible, chosen + 1, best, conflicts);
        search(rest.to_vec(), chosen, best, conflicts);
    }

    let mut best = 0;
    search((0..m).collect(), 0, &mut best, &conflicts);
    best
}

#[test]
fn partition_bound_dominates_best_code() {
    let (p, n, t, l) = (2u8, 5, 1, 1);
    let best = largest_code(p, n, t, l);
    let data = partition_sphere_data(p, n, t, l, PartitionKind::DerivativeWeight, 1 << 20).unwrap();
    let bound = partition_bound(&data).unwrap();
    assert!(as_rational(best) <= bound, "best code {best}");
    assert!(bound <= sp_bound_partition_sum(2, n, t, l).unwrap().cardinality);

    let spec = CodeSpec::optimal(p, n, t, l, Construction::C1, DEFAULT_BUDGET).unwrap();
    assert!(enumerate_code(&spec, DEFAULT_BUDGET).unwrap().len() <= best);
}
