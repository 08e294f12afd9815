use ghostcalc_core::cochain::*;
use ghostcalc_core::ghost_ring::{GhostRing, Limits};
use ghostcalc_core::linf::{BracketFamily, RepresentationFamily, SumMode};
use ghostcalc_core::named::{self, Instance};
use ghostcalc_core::random;
use ghostcalc_core::rational::{q, Vector, Q};
use ghostcalc_core::Error;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn random_cochain<R: Rng>(rng: &mut R, ring: &Arc<GhostRing>, arity: usize, module_dim: usize, skew: bool) -> Cochain {
    let mut c = Cochain::zero(ring, arity, module_dim, skew);
    for t in Cochain::domain(ring, arity, skew).unwrap() {
        if rng.gen_bool(0.6) {
            let v = Vector((0..module_dim).map(|_| q(rng.gen_range(-3..=3))).collect());
            c.set(&t, v).unwrap();
        }
    }
    c
}

fn module_dim(inst: &Instance) -> usize {
    inst.representation.as_ref().map_or(1, |r| r.module_dim())
}

#[test]
fn ce_examples() {
    let sl2 = named::sl2_defining().unwrap();
    let rep = sl2.representation.as_ref().unwrap();
    let ring = sl2.ring();
    let mut v = Cochain::zero(ring, 0, 2, true);
    v.set(&[], Vector(vec![q(1), q(2)])).unwrap();
    let dv = ce_differential(&v, Some(rep), &sl2.brackets).unwrap();
    for x in 0..3 {
        assert_eq!(dv.eval(&[x]), rep.eval(&[x]).apply(&Vector(vec![q(1), q(2)])));
    }

    let trivial = named::sl2().unwrap();
    let mut dual_h = Cochain::zero(trivial.ring(), 1, 1, true);
    dual_h.set(&[2], Vector(vec![q(1)])).unwrap();
    let d = ce_differential(&dual_h, None, &trivial.brackets).unwrap();
    assert_eq!(d.eval(&[0, 1]), Vector(vec![q(-1)]));
    assert_eq!(d.eval(&[1, 0]), Vector(vec![q(1)]));

    // (Sω)(X, Y) = -ω([X, Y]) for every pair
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let omega = random_cochain(&mut rng, trivial.ring(), 1, 1, true);
    let d = ce_differential(&omega, None, &trivial.brackets).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            let expected = omega.eval_inserted(&[], &trivial.brackets.eval(&[x, y]), &[]).scaled(&q(-1));
            assert_eq!(d.eval(&[x, y]), expected);
        }
    }
}

#[test]
fn ce_refuses_graded_input() {
    let mixed = named::string_sl2().unwrap();
    let omega = Cochain::zero(mixed.ring(), 1, 1, true);
    assert!(matches!(ce_differential(&omega, None, &mixed.brackets), Err(Error::GradedInput)));
}

/// The classical differential and `S_2` differ by one global sign per arity; it is `+1`.
#[test]
fn ce_and_binary_component_reconcile_with_factor_one() {
    for inst in [named::sl2().unwrap(), named::heisenberg3().unwrap(), named::sl2_defining().unwrap()] {
        let rep = inst.representation.as_ref();
        for n in 0..=3 {
            let mut factor: Option<Q> = None;
            for omega in Cochain::basis(inst.ring(), n, module_dim(&inst), true).unwrap() {
                let ce = ce_differential(&omega, rep, &inst.brackets).unwrap();
                let s2 = cl_differential_component(2, &omega, rep, &inst.brackets, SumMode::Unshuffle).unwrap();
                for (t, v) in ce.values() {
                    let w = s2.eval(t);
                    for (a, b) in v.0.iter().zip(&w.0) {
                        if a.is_zero() {
                            assert!(b.is_zero());
                            continue;
                        }
                        let r = b / a;
                        assert_eq!(factor.get_or_insert(r.clone()), &r);
                    }
                }
                assert_eq!(ce.values().len(), s2.values().len());
            }
            if let Some(f) = factor {
                assert_eq!(f, q(1), "{} arity {n}", inst.name);
            }
        }
    }
}

#[test]
fn unary_component_vanishes_without_unary_data() {
    let inst = named::sl2().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let omega = random_cochain(&mut rng, inst.ring(), 2, 1, true);
    assert!(cl_differential_component(1, &omega, None, &inst.brackets, SumMode::Unshuffle).unwrap().is_zero());
}

#[test]
fn ghost_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for round in 0..30 {
        let conv = if round % 2 == 0 { ghostcalc_core::graded::Convention::Primary } else { ghostcalc_core::graded::Convention::StandardKoszul };
        let ring = random::ring(&mut rng, 3, round % 3 != 0, conv);
        let n = round % 4;
        let omega = random_cochain(&mut rng, &ring, n, 2, true);
        let g = to_ghost(&omega).unwrap();
        assert_eq!(g, to_ghost_full(&omega).unwrap());
        assert_eq!(from_ghost(&g, n).unwrap(), omega);
        if !omega.is_zero() {
            assert!(matches!(from_ghost(&g, n + 1), Err(Error::LengthMismatch { .. })));
        }
    }
    let ring = random::ring(&mut rng, 3, false, Default::default());
    let zero = Cochain::zero(&ring, 2, 1, true);
    assert!(to_ghost(&zero).unwrap().is_zero());
    let mut dual = Cochain::zero(&ring, 1, 1, true);
    dual.set(&[1], Vector(vec![q(1)])).unwrap();
    assert_eq!(to_ghost(&dual).unwrap().terms.len(), 1);
}

#[test]
fn correspondence_holds_on_every_instance() {
    for inst in named::corpus().unwrap() {
        let rep = inst.representation.as_ref();
        for n in 0..=3 {
            for omega in Cochain::basis(inst.ring(), n, module_dim(&inst), true).unwrap() {
                for k in 1..=3 {
                    assert!(correspondence_check(&omega, k, rep, &inst.brackets).unwrap(), "{} k={k} {:?}", inst.name, omega);
                }
            }
        }
    }
}

/// The correspondence is an identity of operators; the structure equations are not needed.
#[test]
fn correspondence_and_sum_modes_on_random_graded_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..15 {
        let ring = random::ring(&mut rng, 3, true, ghostcalc_core::graded::Convention::StandardKoszul);
        let fam = random::brackets(&mut rng, &ring, &[1, 2, 3], 0.5, 2).unwrap();
        let rep = random::representation(&mut rng, &ring, 2, &[1, 2], 0.5, 2).unwrap();
        for n in 0..=2 {
            let omega = random_cochain(&mut rng, &ring, n, 2, true);
            for k in 1..=3 {
                assert!(correspondence_check(&omega, k, Some(&rep), &fam).unwrap());
                assert_eq!(
                    cl_differential_component(k, &omega, Some(&rep), &fam, SumMode::Unshuffle).unwrap(),
                    cl_differential_component(k, &omega, Some(&rep), &fam, SumMode::FullSymmetric).unwrap()
                );
            }
        }
    }
}

fn assert_square_zero(omega: &Cochain, rep: Option<&RepresentationFamily>, fam: &BracketFamily) {
    let once = total_differential(&single(omega.clone()), rep, fam).unwrap();
    let twice = total_differential(&once, rep, fam).unwrap();
    assert!(twice.is_empty(), "d² ω ≠ 0 for {omega:?}: {twice:?}");
}

#[test]
fn total_differential_squares_to_zero_on_lie_data() {
    for inst in [named::sl2().unwrap(), named::sl2_defining().unwrap(), named::heisenberg3().unwrap()] {
        for n in 0..=4 {
            for omega in Cochain::basis(inst.ring(), n, module_dim(&inst), true).unwrap() {
                assert_square_zero(&omega, inst.representation.as_ref(), &inst.brackets);
            }
        }
    }
}

#[test]
fn total_differential_squares_to_zero_with_unary_binary_and_ternary_brackets() {
    let inst = named::string_sl2().unwrap();
    let ring = GhostRing::with_limits(
        inst.ring().basis().clone(),
        inst.ring().convention(),
        Limits { max_arity: 8, exponent_cap: 8 },
    );
    let fam = inst.brackets.rebased(&ring).unwrap();
    for k in 1..=3 {
        assert!(!fam.component(k).is_empty());
    }
    for n in 0..=4 {
        for omega in Cochain::basis(&ring, n, 1, true).unwrap() {
            assert_square_zero(&omega, None, &fam);
        }
    }
}

#[test]
fn bar_differential_examples() {
    let dual = named::dual_numbers().unwrap();
    let ring = dual.ring();
    let mut b = Cochain::zero(ring, 0, 2, false);
    b.set(&[], Vector(vec![q(2), q(3)])).unwrap();
    let db = hochschild_differential(&b, &dual.brackets).unwrap();
    // a·b for a = 1 and a = ε
    assert_eq!(db.eval(&[0]), Vector(vec![q(2), q(3)]));
    assert_eq!(db.eval(&[1]), Vector(vec![q(0), q(2)]));

    let mut id = Cochain::zero(ring, 1, 2, false);
    id.set(&[0], Vector::unit(2, 0)).unwrap();
    id.set(&[1], Vector::unit(2, 1)).unwrap();
    assert!(hochschild_differential(&id, &dual.brackets).unwrap().is_zero());
    // the same through the ordered k = 2 component
    let (ga, warnings) = ga_differential_component(2, &id, dual.representation.as_ref(), &dual.brackets).unwrap();
    assert!(warnings.is_empty());
    assert!(ga.is_zero());

    let bad = named::non_associative().unwrap();
    let omega = Cochain::zero(bad.ring(), 1, 2, false);
    assert!(matches!(hochschild_differential(&omega, &bad.brackets), Err(Error::NotAssociative(_))));
    let (_, warnings) = ga_differential_component(2, &omega, bad.representation.as_ref(), &bad.brackets).unwrap();
    assert_eq!(warnings.len(), 1);
}

#[test]
fn bar_differential_squares_to_zero_and_matches_ordered_component() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for inst in [named::dual_numbers().unwrap(), named::upper_triangular_2x2().unwrap()] {
        let d = inst.ring().dim();
        let rep = inst.representation.as_ref();
        for n in 0..=4 {
            let samples: Vec<Cochain> = if n <= 2 {
                Cochain::basis(inst.ring(), n, d, false).unwrap()
            } else {
                (0..4).map(|_| random_cochain(&mut rng, inst.ring(), n, d, false)).collect()
            };
            for omega in samples.iter().chain([random_cochain(&mut rng, inst.ring(), n, d, false)].iter()) {
                let once = hochschild_differential(omega, &inst.brackets).unwrap();
                let via_ga = ga_differential_component(2, omega, rep, &inst.brackets).unwrap().0;
                assert_eq!(once, via_ga);
                if n < 4 {
                    assert!(hochschild_differential(&once, &inst.brackets).unwrap().is_zero());
                }
                assert_square_zero(omega, rep, &inst.brackets);
            }
        }
    }
}

#[test]
fn cohomology_golden_values() {
    let abelian = named::abelian(4).unwrap();
    assert_eq!(cohomology_dims(&abelian.brackets, None, 4).unwrap(), vec![1, 4, 6, 4, 1]);
    let sl2 = named::sl2().unwrap();
    assert_eq!(cohomology_dims(&sl2.brackets, None, 3).unwrap(), vec![1, 0, 0, 1]);
    let h3 = named::heisenberg3().unwrap();
    assert_eq!(cohomology_dims(&h3.brackets, None, 3).unwrap()[1], 2);
}

#[test]
fn euler_characteristic_is_preserved() {
    for inst in [named::sl2().unwrap(), named::heisenberg3().unwrap(), named::sl2_adjoint().unwrap(), named::abelian(4).unwrap()] {
        let top = inst.ring().dim();
        let table = cohomology_table(&inst.brackets, inst.representation.as_ref(), top).unwrap();
        let chi = |f: &dyn Fn(&CohomologyRow) -> usize| -> i64 {
            table.iter().map(|r| if r.degree % 2 == 0 { f(r) as i64 } else { -(f(r) as i64) }).sum()
        };
        assert_eq!(chi(&|r| r.cochain_dim), chi(&|r| r.cohomology_dim), "{}", inst.name);
    }
}

#[test]
fn cohomology_refuses_broken_or_inhomogeneous_input() {
    let bad = named::sl2_corrupted().unwrap();
    match cohomology_dims(&bad.brackets, None, 3) {
        Err(CohomologyError::NotNilpotent(w)) => assert!(!w.is_empty()),
        other => panic!("expected a witness, got {other:?}"),
    }
    let mixed = named::mixed_primary().unwrap();
    assert!(matches!(
        cohomology_dims(&mixed.brackets, mixed.representation.as_ref(), 2),
        Err(CohomologyError::Other(Error::InhomogeneousDifferential(_)))
    ));
}

#[test]
fn arity_overflow_is_refused() {
    let inst = named::sl2().unwrap();
    let omega = Cochain::zero(inst.ring(), 6, 1, true);
    assert!(matches!(
        cl_differential_component(2, &omega, None, &inst.brackets, SumMode::Unshuffle),
        Err(Error::ArityOverflow { arity: 7, max: 6 })
    ));
}
