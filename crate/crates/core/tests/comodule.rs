use std::sync::Arc;

use proptest::prelude::*;
use semikernel::comodule::{
    adjunction_check, alpha_check, biend_check, check_comodule, cofree, colinear_maps, graded_comodule, hom_equality_check, round_trip_check,
    two_coactions_counterexample, MeasuringPairing, Semicomodule,
};
use semikernel::coring::{gallery, grouplike_data, polynomial_data, PolyVariant, Semicoring};
use semikernel::finite::enumerate_modules;
use semikernel::linear::linear_maps;
use semikernel::module::{Elem, Module};
use semikernel::{Budget, Semiring};

fn grouplike() -> Arc<Semicoring> {
    Arc::new(grouplike_data(&Semiring::bool(), &["x", "y"]).unwrap().build().unwrap())
}

/// Elements to probe: the whole carrier when finite, otherwise generators, their sums and multiples.
fn probe_elements(m: &Module) -> Vec<Elem> {
    if let Ok(e) = m.to_finite(Budget::DEFAULT) {
        return e.elems;
    }
    let gens: Vec<Elem> = m.generators().into_iter().map(|(c, g)| m.unit(c, g)).collect();
    let mut out = gens.clone();
    for a in &gens {
        out.push(m.nat_mul(3, a));
        for b in &gens {
            out.push(m.add(a, b));
        }
    }
    out
}

/// m = Σ mᵢ·ε(cᵢ) over a decomposition of ρ(m) into pure tensors.
fn assert_splitting(m: &Semicomodule, elems: &[Elem]) {
    for x in elems {
        let parts = m.mc.decompose(&m.coaction.apply(x));
        let back = m.carrier.sum(&parts.iter().map(|(mi, ci)| m.carrier.act(mi, m.coring.eps(ci))).collect::<Vec<_>>());
        assert_eq!(&back, x, "{} at {}", m.name, m.carrier.label(x));
    }
}

fn bool_parts() -> Vec<Module> {
    let b = Semiring::bool();
    vec![Module::base_module(&b).unwrap(), Module::free(&b, 2).unwrap(), Module::zero_module(&b)]
}

#[test]
fn coaction_is_split_by_the_counit() {
    for c in gallery().unwrap() {
        let c = Arc::new(c);
        let reg = Semicomodule::regular(&c);
        assert_splitting(&reg, &probe_elements(&reg.carrier));
    }
    let g = grouplike();
    let graded = graded_comodule(&g, &[(bool_parts()[0].clone(), 0), (bool_parts()[1].clone(), 1)]).unwrap();
    assert!(check_comodule(&graded).unwrap().passed());
    assert_splitting(&graded, &probe_elements(&graded.carrier));
    let cof = cofree(&bool_parts()[1], &g).unwrap();
    assert!(check_comodule(&cof).unwrap().passed());
    assert_splitting(&cof, &probe_elements(&cof.carrier));
    let two = two_coactions_counterexample(4, Budget::DEFAULT).unwrap();
    for m in [&two.rho1, &two.rho2] {
        assert_splitting(m, &probe_elements(&m.carrier));
    }
    let q = &two.qmodz.carrier;
    let rationals: Vec<Elem> = ["1/2", "1/3", "5/6", "3/8"].iter().map(|t| q.parse(t).unwrap()).collect();
    assert_splitting(&two.qmodz, &rationals);
}

#[test]
fn two_coactions_on_z4() {
    let two = two_coactions_counterexample(4, Budget::DEFAULT).unwrap();
    assert!(two.report.passed(), "{}", two.report);
    let z = &two.rho1.carrier;
    let one = z.unit(0, 0);
    let r1 = two.rho1.coaction.apply(&one);
    let r2 = two.rho2.coaction.apply(&one);
    // CYCLIC(4) ⊗ (NAT ⊕ CYCLIC(4)) has one CYCLIC(4) summand per summand of the coring.
    let t = two.rho1.mc.result();
    assert_eq!(t.comps().len(), 2);
    assert!(!r1.0[0].is_zero() && r1.0[1].is_zero());
    assert!(!r2.0[0].is_zero() && !r2.0[1].is_zero());
    assert_eq!(r1.0[0], r2.0[0]);
    assert!(two.flatness.mono_flat_on_family.is_fail());
}

#[test]
fn colinear_maps_are_exactly_the_algebra_maps() {
    let g = grouplike();
    let p = MeasuringPairing::from_dual(&g, Budget::DEFAULT).unwrap();
    let parts = bool_parts();
    let comodules: Vec<Semicomodule> = vec![
        Semicomodule::regular(&g),
        graded_comodule(&g, &[(parts[0].clone(), 0)]).unwrap(),
        graded_comodule(&g, &[(parts[0].clone(), 1)]).unwrap(),
        graded_comodule(&g, &[(parts[0].clone(), 0), (parts[0].clone(), 1)]).unwrap(),
    ];
    for m in &comodules {
        for n in &comodules {
            let r = hom_equality_check(&p, m, n, Budget::DEFAULT).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
    // Degree-0 and degree-1 copies of BOOL have no nonzero colinear map between them.
    let maps = colinear_maps(&comodules[1], &comodules[2], Budget::DEFAULT).unwrap();
    assert_eq!(maps.len(), 1);
    assert_eq!(linear_maps(&comodules[1].carrier, &comodules[2].carrier, Budget::DEFAULT).unwrap().len(), 2);
}

#[test]
fn duals_are_endomorphism_semirings() {
    let z2 = Semiring::zmod(2);
    let cs = [
        grouplike(),
        Arc::new(polynomial_data(&z2, 2, PolyVariant::Binomial).unwrap().build().unwrap()),
        Arc::new(gallery().unwrap().into_iter().find(|c| c.name.starts_with("coext(BOOL")).unwrap()),
    ];
    for c in &cs {
        let r = biend_check(c, Budget::DEFAULT).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn cofree_adjunction() {
    let g = grouplike();
    let parts = bool_parts();
    let ys = [Semicomodule::regular(&g), graded_comodule(&g, &[(parts[0].clone(), 1)]).unwrap()];
    for y in &ys {
        for x in &parts[..2] {
            let r = adjunction_check(y, x, Budget::DEFAULT).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}

#[test]
fn alpha_holds_for_a_free_carrier() {
    let g = grouplike();
    let p = MeasuringPairing::from_dual(&g, Budget::DEFAULT).unwrap().as_pairing().unwrap();
    for m in enumerate_modules(&Semiring::bool(), 3).unwrap() {
        let (m, _) = Module::from_finite(&m).unwrap();
        let r = alpha_check(&p, &m, Budget::DEFAULT).unwrap();
        assert!(r.holds(), "{}", m.name());
    }
}

fn graded_parts() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0usize..2, 0usize..2), 1..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn graded_comodules_round_trip(parts in graded_parts()) {
        let g = grouplike();
        let p = MeasuringPairing::from_dual(&g, Budget::DEFAULT).unwrap();
        let mods = bool_parts();
        let spec: Vec<(Module, usize)> = parts.iter().map(|&(m, d)| (mods[m].clone(), d)).collect();
        let m = graded_comodule(&g, &spec).unwrap();
        prop_assert!(check_comodule(&m).unwrap().passed());
        assert_splitting(&m, &probe_elements(&m.carrier));
        let r = round_trip_check(&p, &m, Budget::DEFAULT).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }
}
