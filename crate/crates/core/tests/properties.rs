//! Property tests for the algebraic invariants: group laws in K and in the
//! extended Weyl group, length = inversion count, and exact Fourier
//! round trips.

use std::sync::Arc;

use proptest::prelude::*;

use lgk_core::cyclo::Cyc;
use lgk_core::endofourier::{fourier_forward, fourier_invert, FinAbGroup, PacketTable};
use lgk_core::rootdatum::{BasedRootDatum, Isogeny, TypeLetter};
use lgk_core::tits::ExtWeylElem;
use lgk_core::torus::{CoeffGroup, KElem, TorusPoint};
use lgk_core::weyl::WeylElem;

fn group() -> Arc<CoeffGroup> {
    CoeffGroup::standard()
}

fn datum(ix: u8) -> Arc<BasedRootDatum> {
    match ix % 4 {
        0 => BasedRootDatum::build(TypeLetter::A, 2, Isogeny::SimplyConnected).unwrap(),
        1 => BasedRootDatum::build(TypeLetter::B, 2, Isogeny::Adjoint).unwrap(),
        2 => BasedRootDatum::build(TypeLetter::A, 3, Isogeny::SimplyConnected).unwrap(),
        _ => BasedRootDatum::build(TypeLetter::G, 2, Isogeny::SimplyConnected).unwrap(),
    }
}

fn k_elem(g: &Arc<CoeffGroup>, zeta: i64, a: i64, c1: i64) -> KElem {
    KElem::zeta_pow(g, zeta)
        .mul(&KElem::symbol(g, "a").unwrap().pow(a))
        .mul(&KElem::symbol(g, "c1").unwrap().pow(c1))
}

proptest! {
    #[test]
    fn k_is_an_abelian_group(
        z1 in 0i64..24, a1 in -3i64..4, c1 in -3i64..4,
        z2 in 0i64..24, a2 in -3i64..4, c2 in -3i64..4,
        z3 in 0i64..24, a3 in -3i64..4, c3 in -3i64..4,
    ) {
        let g = group();
        let x = k_elem(&g, z1, a1, c1);
        let y = k_elem(&g, z2, a2, c2);
        let z = k_elem(&g, z3, a3, c3);
        prop_assert_eq!(x.mul(&y.mul(&z)), x.mul(&y).mul(&z));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert!(x.mul(&x.inv()).is_one());
        prop_assert_eq!(x.mul(&KElem::one(&g)), x);
    }

    #[test]
    fn length_equals_inversion_count(ix in 0u8..4, word in prop::collection::vec(0usize..4, 0..10)) {
        let d = datum(ix);
        let word: Vec<usize> = word.into_iter().map(|i| i % d.rank).collect();
        let w = WeylElem::from_word(&d, &word);
        prop_assert_eq!(w.length(), w.inversion_set().len());
        // the canonical word reproduces the element
        prop_assert_eq!(WeylElem::from_word(&d, &w.word), w);
    }

    #[test]
    fn extended_weyl_group_laws(
        ix in 0u8..3,
        w1 in prop::collection::vec(0usize..4, 0..6),
        w2 in prop::collection::vec(0usize..4, 0..6),
        w3 in prop::collection::vec(0usize..4, 0..6),
        z in 0i64..24,
    ) {
        let d = datum(ix);
        let g = group();
        let mk = |word: &[usize], zeta: i64| {
            let word: Vec<usize> = word.iter().map(|&i| i % d.rank).collect();
            let t = TorusPoint::eval_cocharacter(&d, &d.coroots[0], &KElem::zeta_pow(&g, zeta));
            ExtWeylElem { torus: t, weyl: WeylElem::from_word(&d, &word) }
        };
        let a = mk(&w1, z);
        let b = mk(&w2, 7);
        let c = mk(&w3, 11);
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let id = ExtWeylElem::identity(&d, &g);
        prop_assert_eq!(a.mul(&a.inv()), id.clone());
        prop_assert_eq!(a.inv().mul(&a), id);
    }

    #[test]
    fn fourier_round_trip(
        pick in 0usize..6,
        entries in prop::collection::vec((-9i64..10, 1i64..5), 16),
    ) {
        let factors: Vec<u64> = match pick {
            0 => vec![2],
            1 => vec![3],
            2 => vec![4],
            3 => vec![2, 2],
            4 => vec![2, 4],
            _ => vec![8],
        };
        let group = FinAbGroup::new(factors).unwrap();
        let table = PacketTable::new(group.clone(), None, None).unwrap();
        let n = group.order() as usize;
        let v: Vec<Cyc> = (0..n)
            .map(|i| Cyc::from_ratio(&table.field, entries[i].0, entries[i].1))
            .collect();
        let theta = fourier_invert(&table, &v).unwrap();
        let back = fourier_forward(&table, &theta).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn torus_weyl_action_is_linear(
        ix in 0u8..4,
        word in prop::collection::vec(0usize..4, 0..6),
        e1 in -3i64..4,
        e2 in -3i64..4,
    ) {
        let d = datum(ix);
        let g = group();
        let word: Vec<usize> = word.into_iter().map(|i| i % d.rank).collect();
        let w = WeylElem::from_word(&d, &word);
        let x = KElem::symbol(&g, "a").unwrap();
        let mut mu = vec![0i64; d.dim];
        mu[0] = e1;
        if d.dim > 1 {
            mu[1] = e2;
        }
        let t = TorusPoint::eval_cocharacter(&d, &mu, &x);
        let moved = t.weyl_apply(&w);
        let mu_moved = w.act_cochar(&mu);
        prop_assert_eq!(moved, TorusPoint::eval_cocharacter(&d, &mu_moved, &x));
    }
}
