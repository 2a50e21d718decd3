use semikernel::coring::{
    check_morphism, check_semicoring, coideal_check, counterexample, dual_semiring, gallery, gallery_free_data, grouplike_data, polynomial_data,
    quotient_semicoring, sweedler, trivial_coextension, word_data, DualSide, FreeCoringData, PolyVariant, Semicoring,
};
use semikernel::finite::{all_subs, Sub};
use semikernel::linear::LinearMap;
use semikernel::module::{Elem, Module};
use semikernel::{Budget, Semiring, SemiringMorphism};

/// Coassociativity and the counit laws on structure constants, written out independently.
fn laws_hold(d: &FreeCoringData) -> bool {
    let s = &d.base;
    let n = d.basis.len();
    let c = &d.delta;
    let sum = |v: Vec<u64>| v.into_iter().fold(s.zero(), |a, b| s.add(a, b));
    let kron = |i: usize, j: usize| if i == j { s.one() } else { s.zero() };
    (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|k| {
                (0..n).all(|l| {
                    // (Δ⊗C)Δ and (C⊗Δ)Δ, coefficient of e_j⊗e_k⊗e_l in Δ²(e_i).
                    sum((0..n).map(|m| s.mul(c[i][m][l], c[m][j][k])).collect()) == sum((0..n).map(|m| s.mul(c[i][j][m], c[m][k][l])).collect())
                })
            }) && sum((0..n).map(|k| s.mul(d.eps[k], c[i][k][j])).collect()) == kron(i, j)
                && sum((0..n).map(|k| s.mul(c[i][j][k], d.eps[k])).collect()) == kron(i, j)
        })
    })
}

fn passes(d: &FreeCoringData) -> bool {
    d.build().and_then(|c| check_semicoring(&c)).map(|r| r.passed()).unwrap_or(false)
}

fn basis(c: &Semicoring, name: &str) -> Elem {
    let i = c.basis.as_ref().unwrap().iter().position(|b| b == name).unwrap();
    c.carrier.unit(i, 0)
}

#[test]
fn gallery_corings_pass() {
    let g = gallery().unwrap();
    assert_eq!(g.len(), 10);
    for c in &g {
        let r = check_semicoring(c).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn checker_agrees_with_structure_constants_on_every_mutation() {
    let mut rejected = 0;
    for d in gallery_free_data().unwrap().into_iter().filter(|d| d.basis.len() <= 4) {
        assert!(laws_hold(&d));
        for (tag, m) in d.single_mutations() {
            let want = laws_hold(&m);
            assert_eq!(passes(&m), want, "{tag}");
            rejected += usize::from(!want);
        }
    }
    assert!(rejected >= 20);
}

#[test]
fn small_corings_pass() {
    for d in [
        grouplike_data(&Semiring::zmod(3), &["x", "y"]).unwrap(),
        grouplike_data(&Semiring::bool(), &[]).unwrap(),
        polynomial_data(&Semiring::zmod(3), 2, PolyVariant::Binomial).unwrap(),
        word_data(1, 2).unwrap(),
        word_data(1, 3).unwrap(),
    ] {
        assert!(laws_hold(&d), "{}", d.name);
        assert!(passes(&d), "{}", d.name);
    }
    let c = trivial_coextension(&Module::base_module(&Semiring::zmod(2)).unwrap()).unwrap();
    assert!(check_semicoring(&c).unwrap().passed());
}

#[test]
fn grouplike_comultiplication_of_a_sum() {
    let c = grouplike_data(&Semiring::bool(), &["x", "y"]).unwrap().build().unwrap();
    let (x, y) = (basis(&c, "x"), basis(&c, "y"));
    let xy = c.carrier.add(&x, &y);
    let want = c.cc.result().add(&c.cc.pure(&x, &x), &c.cc.pure(&y, &y));
    assert_eq!(c.comult.apply(&xy), want);
    assert_eq!(c.eps(&xy), 1);
}

#[test]
fn sweedler_counit_multiplies() {
    let c = sweedler(&SemiringMorphism::identity(&Semiring::bool()), Budget::DEFAULT).unwrap();
    let one = c.carrier.generators()[0];
    assert_eq!(c.eps(&c.carrier.unit(one.0, one.1)), 1);
}

#[test]
fn binomial_counit_reads_the_constant_term() {
    let s = Semiring::zmod(2);
    let c = polynomial_data(&s, 3, PolyVariant::Binomial).unwrap().build().unwrap();
    let (one, x) = (basis(&c, "x^0"), basis(&c, "x^1"));
    for s0 in 0..2 {
        for s1 in 0..2 {
            let p = c.carrier.add(&c.carrier.act(&one, s0), &c.carrier.act(&x, s1));
            assert_eq!(c.eps(&p), s0);
        }
    }
}

#[test]
fn binomial_middle_term_vanishes_in_characteristic_two() {
    let c = polynomial_data(&Semiring::zmod(2), 3, PolyVariant::Binomial).unwrap().build().unwrap();
    let (one, x2) = (basis(&c, "x^0"), basis(&c, "x^2"));
    let t = c.cc.result();
    assert_eq!(c.comult.apply(&x2), t.add(&c.cc.pure(&one, &x2), &c.cc.pure(&x2, &one)));
    let c3 = polynomial_data(&Semiring::zmod(3), 2, PolyVariant::Binomial).unwrap().build().unwrap();
    let (one, x, x2) = (basis(&c3, "x^0"), basis(&c3, "x^1"), basis(&c3, "x^2"));
    let t3 = c3.cc.result();
    let want = t3.sum(&[c3.cc.pure(&one, &x2), t3.nat_mul(2, &c3.cc.pure(&x, &x)), c3.cc.pure(&x2, &one)]);
    assert_eq!(c3.comult.apply(&x2), want);
}

#[test]
fn deconcatenation_of_xy() {
    let c = word_data(2, 2).unwrap().build().unwrap();
    let (one, x, y, xy) = (basis(&c, "1"), basis(&c, "x"), basis(&c, "y"), basis(&c, "xy"));
    let t = c.cc.result();
    let want = t.sum(&[c.cc.pure(&one, &xy), c.cc.pure(&x, &y), c.cc.pure(&xy, &one)]);
    assert_eq!(c.comult.apply(&xy), want);
    assert_eq!(c.eps(&xy), 0);
    assert_eq!(c.eps(&one), 1);
}

#[test]
fn counterexample_keeps_the_torsion_summand() {
    let c = counterexample(4).unwrap();
    let (e, g) = (c.carrier.unit(0, 0), c.carrier.unit(1, 0));
    let t = c.cc.result();
    let three = t.sum(&[c.cc.pure(&e, &g), c.cc.pure(&g, &e)]);
    let torsion = c.cc.pure(&g, &g);
    assert!(!t.is_zero(&torsion));
    assert_eq!(c.comult.apply(&g), t.add(&three, &torsion));
    assert_ne!(c.comult.apply(&g), three);
    assert_eq!(c.eps(&e), 1);
    assert_eq!(c.eps(&g), 0);
}

#[test]
fn coideals_are_exactly_the_kernels_of_quotient_morphisms() {
    let mut seen = [0usize; 2];
    for c in gallery().unwrap() {
        let Ok(carrier) = c.carrier.to_finite(Budget::DEFAULT) else { continue };
        if carrier.elems.len() > 8 {
            continue;
        }
        for k in all_subs(&carrier.table).into_iter().filter(Sub::is_subtractive) {
            let report = coideal_check(&c, &carrier, &k, Budget::DEFAULT).unwrap();
            let is_coideal = report.is_coideal.unwrap();
            let quotient_works = quotient_semicoring(&c, &carrier, &k)
                .and_then(|(q, pi)| Ok(check_semicoring(&q)?.passed() && check_morphism(&pi, &c, &q)?.passed()))
                .unwrap_or(false);
            assert_eq!(is_coideal, quotient_works, "{} with K of size {}", c.name, k.len());
            seen[is_coideal as usize] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn coideal_examples() {
    let m = Module::base_module(&Semiring::bool()).unwrap();
    let c = trivial_coextension(&m).unwrap();
    let carrier = c.carrier.to_finite(Budget::DEFAULT).unwrap();
    let zero = Sub::zero(&carrier.table);
    assert_eq!(coideal_check(&c, &carrier, &zero, Budget::DEFAULT).unwrap().is_coideal, Some(true));
    let whole = Sub::whole(&carrier.table);
    assert_eq!(coideal_check(&c, &carrier, &whole, Budget::DEFAULT).unwrap().is_coideal, Some(false));
    // K = 0⊕M.
    let in_m: Vec<usize> = (0..carrier.elems.len()).filter(|&i| carrier.elems[i].0[0].is_zero()).collect();
    let k = Sub::from_elements(&carrier.table, &in_m).unwrap();
    assert_eq!(coideal_check(&c, &carrier, &k, Budget::DEFAULT).unwrap().is_coideal, Some(true));
    let (q, pi) = quotient_semicoring(&c, &carrier, &k).unwrap();
    assert_eq!(q.carrier.to_finite(Budget::DEFAULT).unwrap().elems.len(), 2);
    assert!(check_morphism(&pi, &c, &q).unwrap().passed());
}

#[test]
fn identity_and_counit_are_morphisms() {
    for c in gallery().unwrap() {
        assert!(check_morphism(&LinearMap::identity(&c.carrier), &c, &c).unwrap().passed(), "{}", c.name);
        let trivial = trivial_coextension(&Module::zero_module(c.base())).unwrap();
        let a = Module::base_module(c.base()).unwrap();
        let eps = LinearMap::from_fn(&c.carrier, &trivial.carrier, |x| {
            Ok(trivial.carrier.embed(0, a.from_scalar(c.eps(x)).unwrap().0[0].clone()))
        })
        .unwrap();
        assert!(check_morphism(&eps, &c, &trivial).unwrap().passed(), "{}", c.name);
    }
}

#[test]
fn cocommutative_duals_have_one_convolution() {
    let z2 = Semiring::zmod(2);
    for d in [
        grouplike_data(&Semiring::bool(), &["x", "y"]).unwrap(),
        polynomial_data(&z2, 3, PolyVariant::GrouplikePowers).unwrap(),
        polynomial_data(&z2, 3, PolyVariant::Binomial).unwrap(),
    ] {
        let c = d.build().unwrap();
        let l = dual_semiring(&c, DualSide::Left, Budget::DEFAULT).unwrap();
        let r = dual_semiring(&c, DualSide::Right, Budget::DEFAULT).unwrap();
        assert_eq!(l.tables.mul, r.tables.mul, "{}", c.name);
        let t = &l.tables;
        let n = t.elements.len();
        for a in 0..n {
            assert_eq!(t.mul[a][t.one], a);
            assert_eq!(t.mul[t.one][a], a);
            for b in 0..n {
                for e in 0..n {
                    assert_eq!(t.mul[t.mul[a][b]][e], t.mul[a][t.mul[b][e]]);
                    assert_eq!(t.mul[a][t.add[b][e]], t.add[t.mul[a][b]][t.mul[a][e]]);
                }
            }
        }
    }
}

#[test]
fn word_duals_above_the_cap_are_refused() {
    let c = word_data(2, 2).unwrap().build().unwrap();
    assert!(dual_semiring(&c, DualSide::Left, Budget::DEFAULT).is_err());
    let small = word_data(1, 2).unwrap().build().unwrap();
    assert_eq!(dual_semiring(&small, DualSide::Left, Budget::DEFAULT).unwrap().tables.elements.len(), 8);
}
