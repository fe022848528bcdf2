mod common;

use amalgrade_core::module::kernel_generators;
use amalgrade_core::{ext_grade, height, koszul_grade, krull_dim, Dimension, FPModule, Field, GradeValue, Polynomial, Ring, RingMap};
use common::*;
use proptest::prelude::*;

const Q: Field = Field::Rationals;

fn base_rings() -> Vec<Ring> {
    vec![
        ring(&["x", "y"], &[]),
        ring(&["x", "y", "z"], &[]),
        ring(&["x", "y"], &["x*y"]),
        ring(&["x", "y", "z"], &["x*z - y^2"]),
        ring(&["X", "Y", "Z"], &["(X - Y)*Y", "(X - Y)*Z"]),
    ]
}

fn module_of(r: &Ring, kind: u8, gens: &[Polynomial]) -> FPModule {
    match kind {
        0 => FPModule::free(r, 1).unwrap(),
        1 => FPModule::cyclic(&r.ideal(gens.to_vec()).unwrap()).unwrap(),
        2 => FPModule::from_ideal(&r.ideal(gens.to_vec()).unwrap()).unwrap(),
        _ => FPModule::free(r, 1).unwrap().direct_sum(&FPModule::cyclic(&r.ideal(gens.to_vec()).unwrap()).unwrap()).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn map_kernel_is_sound(imgs in prop::collection::vec(poly(Q, 2, 3, 2), 3)) {
        let src = ring(&["a", "b", "c"], &[]);
        let tgt = ring(&["x", "y"], &[]);
        let phi = RingMap::new(src.clone(), tgt.clone(), imgs).unwrap();
        let k = phi.kernel().unwrap();
        for g in k.generators() {
            prop_assert!(tgt.is_zero_element(&phi.apply(g).unwrap()));
        }
        // contraction of the zero ideal is the kernel
        prop_assert!(phi.contract(&tgt.zero_ideal()).unwrap().same_ideal(&k).unwrap());
    }

    #[test]
    fn contraction_is_sound(imgs in prop::collection::vec(poly(Q, 2, 2, 2), 2), q in monomial_gens(Q, 2, 2, 2)) {
        let src = ring(&["a", "b"], &[]);
        let tgt = ring(&["x", "y"], &[]);
        let phi = RingMap::new(src.clone(), tgt.clone(), imgs).unwrap();
        let q = tgt.ideal(q).unwrap();
        let c = phi.contract(&q).unwrap();
        for g in c.generators() {
            prop_assert!(q.contains(&phi.apply(g).unwrap()).unwrap());
        }
        // an extended contraction sits inside q
        prop_assert!(q.contains_ideal(&phi.extend(&c).unwrap()).unwrap());
    }

    #[test]
    fn syzygies_compose_to_zero(gens in prop::collection::vec(poly(Q, 3, 2, 3), 1..=3)) {
        let r = ring(&["x", "y", "z"], &[]);
        let m = FPModule::free(&r, 1).unwrap();
        let cols: Vec<Vec<Polynomial>> = gens.iter().map(|g| vec![g.clone()]).collect();
        for s in kernel_generators(&cols, &m).unwrap() {
            let sum = s.iter().zip(&gens).fold(r.zero(), |acc, (a, g)| &acc + &(a * g));
            prop_assert!(r.is_zero_element(&sum));
        }
    }

    #[test]
    fn grade_ignores_redundant_generators(ri in 0usize..5, gens in monomial_gens(Q, 3, 2, 3), h in poly(Q, 3, 1, 2), kind in 0u8..3, mg in monomial_gens(Q, 3, 2, 2)) {
        let r = &base_rings()[ri];
        let n = r.nvars();
        let gens: Vec<Polynomial> = gens.iter().map(|g| g.remap(n, &(0..3).map(|i| i % n).collect::<Vec<_>>())).collect();
        let mg: Vec<Polynomial> = mg.iter().map(|g| g.remap(n, &(0..3).map(|i| i % n).collect::<Vec<_>>())).collect();
        let h = h.remap(n, &(0..3).map(|i| i % n).collect::<Vec<_>>());
        let m = module_of(r, kind, &mg);
        let a = r.ideal(gens.clone()).unwrap();
        let mut more = gens.clone();
        more.push(&(&gens[0] * &h) + gens.last().unwrap());
        more.push(gens[0].clone());
        let b = r.ideal(more).unwrap();
        prop_assert_eq!(koszul_grade(&a, &m).unwrap(), koszul_grade(&b, &m).unwrap());
    }

    #[test]
    fn koszul_agrees_with_ext(ri in 0usize..5, gens in monomial_gens(Q, 3, 2, 3), kind in 0u8..4, mg in monomial_gens(Q, 3, 2, 2)) {
        let r = &base_rings()[ri];
        let n = r.nvars();
        let fold = |v: &[Polynomial]| v.iter().map(|g| g.remap(n, &(0..3).map(|i| i % n).collect::<Vec<_>>())).collect::<Vec<_>>();
        let a = r.ideal(fold(&gens)).unwrap();
        let m = module_of(r, kind, &fold(&mg));
        prop_assume!(!a.is_unit() && !m.is_zero());
        let kg = koszul_grade(&a, &m).unwrap();
        prop_assert_eq!(kg, ext_grade(&a, &m).unwrap());
    }

    #[test]
    fn grade_of_direct_sum_is_min(gens in monomial_gens(Q, 2, 2, 3), g1 in monomial_gens(Q, 2, 2, 2), g2 in monomial_gens(Q, 2, 2, 2)) {
        let r = ring(&["x", "y"], &[]);
        let a = r.ideal(gens).unwrap();
        let m = FPModule::cyclic(&r.ideal(g1).unwrap()).unwrap();
        let n = FPModule::from_ideal(&r.ideal(g2).unwrap()).unwrap();
        let s = m.direct_sum(&n).unwrap();
        prop_assert_eq!(koszul_grade(&a, &s).unwrap(), koszul_grade(&a, &m).unwrap().min(koszul_grade(&a, &n).unwrap()));
    }

    #[test]
    fn grade_bounded_by_height_and_dimension(ri in 0usize..5, gens in monomial_gens(Q, 3, 3, 3)) {
        let r = &base_rings()[ri];
        let n = r.nvars();
        let gens: Vec<Polynomial> = gens.iter().map(|g| g.remap(n, &(0..3).map(|i| i % n).collect::<Vec<_>>())).collect();
        let a = r.ideal(gens).unwrap();
        let k = koszul_grade(&a, &FPModule::free(r, 1).unwrap()).unwrap();
        let h = height(&a).unwrap();
        prop_assert!(k <= h, "kgr {} > ht {}", k, h);
        let m = r.graded_maximal().unwrap();
        let km = koszul_grade(&m, &FPModule::free(r, 1).unwrap()).unwrap();
        let Dimension::Finite(d) = krull_dim(r) else { panic!("nonzero ring") };
        prop_assert!(km <= GradeValue::Finite(d));
    }
}
