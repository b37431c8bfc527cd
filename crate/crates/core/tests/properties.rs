use std::collections::{BTreeMap, BTreeSet};

use mws_core::code::{support, weighted_weight, EnumGuard, LinearCode};
use mws_core::constructions::{embed_f, field, generalized_repetition};
use mws_core::matrix::{parse_matrix, write_matrix};
use mws_core::search::{random_code, trial_rng};
use mws_core::{build_field, FieldElement};
use num_bigint::BigUint;
use proptest::prelude::*;

const QS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn guard() -> EnumGuard {
    EnumGuard::default()
}

fn random_plain(q: u64, k: usize, n: usize, seed: u64) -> LinearCode {
    random_code(&field(q).unwrap(), k, n, &mut trial_rng(seed, n, 0)).unwrap()
}

prop_compose! {
    fn code_params()(qi in 0..QS.len(), k in 1usize..=3, extra in 0usize..=6, seed in any::<u64>())
        -> (u64, usize, usize, u64) {
        let q = QS[qi];
        let k = if q >= 7 { k.min(2) } else { k };
        (q, k, k + extra, seed)
    }
}

/// Weight counts from all q^k messages, without projective reduction.
fn brute_counts(code: &LinearCode) -> BTreeMap<BigUint, u128> {
    let f = code.field();
    let (q, k) = (u64::from(code.q()), code.dimension());
    let mut out = BTreeMap::new();
    for idx in 1..q.pow(k as u32) {
        let mut m = Vec::with_capacity(k);
        let mut r = idx;
        for _ in 0..k {
            m.push(f.element(r % q).unwrap());
            r /= q;
        }
        let w = weighted_weight(&code.codeword(&m).unwrap(), code.multiplicities()).unwrap();
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

/// Supports of all nonzero codewords, grouped by the line they span.
fn brute_qm(code: &LinearCode) -> bool {
    let f = code.field();
    let (q, k) = (u64::from(code.q()), code.dimension());
    let mut by_support: BTreeMap<Vec<usize>, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for idx in 1..q.pow(k as u32) {
        let mut m = Vec::with_capacity(k);
        let mut r = idx;
        for _ in 0..k {
            m.push(f.element(r % q).unwrap());
            r /= q;
        }
        // normalise the message so that its first nonzero entry is one
        let lead = *m.iter().find(|x| !x.is_zero()).unwrap();
        let inv = f.inv(lead).unwrap();
        let line: Vec<u32> = m.iter().map(|&x| f.mul(x, inv).index()).collect();
        let s = support(&code.codeword(&m).unwrap());
        by_support.entry(s).or_default().insert(line);
    }
    by_support.values().all(|lines| lines.len() == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_matches_brute_force((q, k, n, seed) in code_params()) {
        let c = random_plain(q, k, n, seed);
        let s = c.weight_spectrum(&guard()).unwrap();
        prop_assert_eq!(s.total(), u128::from(q).pow(k as u32) - 1);
        for v in s.counts.values() {
            prop_assert_eq!(v % u128::from(q - 1), 0);
        }
        prop_assert_eq!(&s.counts, &brute_counts(&c));
    }

    #[test]
    fn criterion_sum_characterises_mws((q, k, n, seed) in code_params()) {
        let c = random_plain(q, k, n, seed);
        let s = c.weight_spectrum(&guard()).unwrap();
        prop_assert_eq!(s.is_mws(), s.is_mws_by_sum());
        prop_assert_eq!(s.is_mws(), s.distinct_weights() as u128 == c.projective_count());
    }

    #[test]
    fn qm_predicates_are_consistent((q, k, n, seed) in code_params()) {
        let c = random_plain(q, k, n, seed);
        let g = guard();
        let qm = c.is_qm(&g).unwrap();
        prop_assert_eq!(qm, brute_qm(&c));
        if c.is_mws(&g).unwrap() {
            prop_assert!(qm);
        }
        let dn = c.qm_sufficient_dn(&g).unwrap();
        let dd = c.qm_sufficient_dd(&g).unwrap();
        if dn {
            prop_assert!(dd);
        }
        if dd {
            prop_assert!(qm);
        }
    }

    #[test]
    fn embedding_turns_exactly_qm_codes_into_mws((q, k, n, seed) in code_params()) {
        let c = random_plain(q, k, n, seed);
        let g = guard();
        let e = embed_f(&c).unwrap();
        prop_assert_eq!(e.effective_length(), &((BigUint::from(1u32) << n) - 1u32));
        prop_assert_eq!(e.is_mws(&g).unwrap(), c.is_qm(&g).unwrap());
        prop_assert_eq!(&e.weight_spectrum(&g).unwrap().counts, &brute_counts(&e));
    }

    #[test]
    fn uniform_repetition_scales_weights((q, k, n, seed) in code_params(), r in 1u32..50) {
        let c = random_plain(q, k, n, seed);
        let g = guard();
        let rep = generalized_repetition(&c, vec![BigUint::from(r); n]).unwrap();
        let scaled: BTreeMap<BigUint, u128> = c.weight_spectrum(&g).unwrap().counts
            .into_iter().map(|(w, a)| (w * r, a)).collect();
        prop_assert_eq!(rep.weight_spectrum(&g).unwrap().counts, scaled);
        prop_assert_eq!(rep.is_qm(&g).unwrap(), c.is_qm(&g).unwrap());
    }

    #[test]
    fn column_permutation_preserves_spectrum((q, k, n, seed) in code_params(), shift in 0usize..16) {
        let c = random_plain(q, k, n, seed);
        let g = guard();
        let rows: Vec<Vec<u64>> = c.index_rows().into_iter().map(|row| {
            let mut r: Vec<u64> = row.into_iter().map(u64::from).collect();
            r.rotate_left(shift % n);
            r.reverse();
            r
        }).collect();
        let p = LinearCode::from_indices(c.field().clone(), &rows).unwrap();
        prop_assert_eq!(p.weight_spectrum(&g).unwrap(), c.weight_spectrum(&g).unwrap());
        prop_assert_eq!(p.is_qm(&g).unwrap(), c.is_qm(&g).unwrap());
    }

    #[test]
    fn matrix_files_round_trip((q, k, n, seed) in code_params(), mults in proptest::collection::vec(1u64..1_000_000, 0..=9)) {
        let mut c = random_plain(q, k, n, seed);
        if mults.len() >= n {
            c = c.with_multiplicities(mults[..n].iter().map(|&m| BigUint::from(m)).collect()).unwrap();
        }
        let back = parse_matrix(&write_matrix(&c)).unwrap();
        let g = guard();
        prop_assert_eq!(back.index_rows(), c.index_rows());
        prop_assert_eq!(back.multiplicities(), c.multiplicities());
        prop_assert_eq!(back.weight_spectrum(&g).unwrap(), c.weight_spectrum(&g).unwrap());
        prop_assert_eq!(back.is_qm(&g).unwrap(), c.is_qm(&g).unwrap());
    }

    #[test]
    fn large_field_axioms(qi in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let q = [1u64 << 17, 65537, 177147, 1 << 20, 4_294_967_291, 1 << 31][qi];
        let f = build_field(q).unwrap();
        let el = |x: u64| f.element(x % q).unwrap();
        let (a, b, c) = (el(a), el(b), el(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.pow(a, q - 1), FieldElement::ONE);
        }
    }
}
