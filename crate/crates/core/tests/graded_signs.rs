use ghostcalc_core::ghost_ring::GhostRing;
use ghostcalc_core::graded::*;
use ghostcalc_core::rational::q;
use proptest::prelude::*;

/// Sign of a permutation by counting transpositions in a selection sort.
fn parity_by_swaps(p: &[usize]) -> i8 {
    let mut v = p.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        let j = (i..v.len()).min_by_key(|&j| v[j]).unwrap();
        if j != i {
            v.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// Koszul sign by bubble-sorting graded letters into the permuted order.
fn koszul_by_bubbles(p: &[usize], degrees: &[i64]) -> i8 {
    // letters are labelled by their final position; target is the identity order
    let mut word: Vec<usize> = p.to_vec();
    let mut sign = 1;
    loop {
        let mut swapped = false;
        for i in 0..word.len().saturating_sub(1) {
            if word[i] > word[i + 1] {
                if (degrees[word[i]] * degrees[word[i + 1]]) % 2 != 0 {
                    sign = -sign;
                }
                word.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            return sign;
        }
    }
}

#[test]
fn parity_matches_transposition_count_exhaustively() {
    for n in 0..=6 {
        for p in all_permutations(n).unwrap() {
            assert_eq!(p.parity(), parity_by_swaps(p.images()), "{:?}", p);
        }
    }
}

#[test]
fn koszul_matches_bubble_sort_exhaustively() {
    for n in 1..=5 {
        for mask in 0..(1u32 << n) {
            let degrees: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
            for p in all_permutations(n).unwrap() {
                assert_eq!(p.koszul(&degrees).unwrap(), koszul_by_bubbles(p.images(), &degrees));
            }
        }
    }
}

#[test]
fn parity_is_multiplicative_exhaustively() {
    let perms = all_permutations(5).unwrap();
    for s in &perms {
        for t in &perms {
            assert_eq!(s.compose(t).parity(), s.parity() * t.parity());
        }
    }
}

#[test]
fn oversized_permutation_groups_are_refused() {
    assert!(all_permutations(9).is_err());
    assert_eq!(all_permutations(0).unwrap().len(), 1);
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn koszul_cocycle(
        (s, t, degrees) in (1usize..7).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n), proptest::collection::vec(0i64..3, n)))
    ) {
        // moving the letters by t and then by s collects both sign contributions
        let first = t.koszul(&degrees).unwrap();
        let moved = t.apply(&degrees);
        let second = s.koszul(&moved).unwrap();
        prop_assert_eq!(t.compose(&s).koszul(&degrees).unwrap(), first * second);
    }

    #[test]
    fn inverse_composes_to_identity(p in (0usize..8).prop_flat_map(perm_strategy)) {
        prop_assert_eq!(p.compose(&p.inverse()), Permutation::identity(p.len()));
        prop_assert_eq!(p.inverse().parity(), p.parity());
    }

    /// Graded antisymmetrization is a projector up to `n!`.
    #[test]
    fn antisymmetrization_is_idempotent_up_to_factorial(
        n in 1usize..4,
        degree_of in proptest::collection::vec(0i64..2, 3),
        entries in proptest::collection::vec((proptest::collection::vec(0usize..3, 3), -3i64..4), 1..4),
    ) {
        let mut f = IndexedFamily::new(n);
        for (t, v) in entries {
            f.set(t[..n].to_vec(), q(v));
        }
        let nf: i64 = (1..=n as i64).product();
        for op in [antisymmetrize, symmetrize] {
            let once = op(&f, &degree_of).unwrap();
            let twice = op(&once, &degree_of).unwrap();
            prop_assert_eq!(twice, once.scaled(&q(nf)));
        }
    }

    /// The ghost word sign is `(-1)^σ e(σ)` in internal degrees under the primary
    /// convention and `e(σ)` in ghost degrees under the standard one.
    #[test]
    fn word_sign_matches_koszul_form(
        vdegs in proptest::collection::vec(0u32..3, 1..5),
        seed in any::<u64>(),
    ) {
        let basis = GradedBasis::new(vdegs.iter().enumerate().map(|(i, &d)| (format!("g{i}"), d))).unwrap();
        let n = vdegs.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = Permutation::new(order.clone()).unwrap();
        for conv in [Convention::Primary, Convention::StandardKoszul] {
            let ring = GhostRing::new(basis.clone(), conv);
            // the word is a permutation of the distinct letters 0..n
            let word = p.apply(&(0..n).collect::<Vec<_>>());
            let expected = match conv {
                Convention::Primary => p.parity() * p.koszul(&basis.vdegs()).unwrap(),
                Convention::StandardKoszul => p.koszul(&basis.gdegs()).unwrap(),
            };
            prop_assert_eq!(ring.word_sign(&word), expected);
        }
    }
}
