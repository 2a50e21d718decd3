use proptest::prelude::*;
use semikernel::semiring::{check_nat_axioms, check_semiring_axioms, find_semiring_isomorphism, structural_predicates, SemiringTables};
use semikernel::{Builtin, Semiring, SemiringMorphism};

/// Brute-force semiring axioms on raw tables.
fn axioms_hold(t: &SemiringTables) -> bool {
    let n = t.elements.len();
    let (a, m, z, o) = (&t.add, &t.mul, t.zero, t.one);
    let r = 0..n;
    r.clone().all(|x| {
        a[x][z] == x
            && a[z][x] == x
            && m[x][o] == x
            && m[o][x] == x
            && m[x][z] == z
            && m[z][x] == z
            && r.clone().all(|y| {
                a[x][y] == a[y][x]
                    && r.clone().all(|w| {
                        a[a[x][y]][w] == a[x][a[y][w]]
                            && m[m[x][y]][w] == m[x][m[y][w]]
                            && m[x][a[y][w]] == a[m[x][y]][m[x][w]]
                            && m[a[x][y]][w] == a[m[x][w]][m[y][w]]
                    })
            })
    }) && z != o
}

fn builtins() -> Vec<Builtin> {
    let mut v = vec![Builtin::Bool];
    v.extend((2..=7).map(Builtin::Zmod));
    v.extend((1..=8).map(Builtin::NatCap));
    v.extend((1..=5).map(Builtin::TropCap));
    v.extend((2..=12).map(Builtin::Ideals));
    v
}

#[test]
fn finite_builtins_satisfy_the_axioms() {
    for b in builtins() {
        let s = Semiring::builtin(b).unwrap();
        let t = s.tables().unwrap();
        assert!(axioms_hold(t), "{b}");
        let r = check_semiring_axioms(t).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn nat_passes_ten_thousand_samples() {
    let r = check_nat_axioms(10_000, 7);
    assert!(r.passed(), "{r}");
    assert!(r.sampled);
}

#[test]
fn natcap_operations_saturate() {
    for k in 1..=8u64 {
        let s = Semiring::builtin(Builtin::NatCap(k)).unwrap();
        for a in 0..=k {
            for b in 0..=k {
                assert_eq!(s.add(a, b), (a + b).min(k));
                assert_eq!(s.mul(a, b), (a * b).min(k));
            }
        }
    }
}

#[test]
fn natcap_one_is_bool() {
    let a = Semiring::builtin(Builtin::NatCap(1)).unwrap();
    assert!(find_semiring_isomorphism(a.tables().unwrap(), Semiring::bool().tables().unwrap()).is_some());
}

#[test]
fn ideals_of_z4_form_a_chain() {
    let s = Semiring::builtin(Builtin::Ideals(4)).unwrap();
    assert_eq!(s.size(), Some(3));
    let els = s.elements().unwrap();
    // In a chain the sum of two ideals is one of them.
    for &a in &els {
        for &b in &els {
            let c = s.add(a, b);
            assert!(c == a || c == b);
        }
    }
}

#[test]
fn ideals_count_divisors() {
    for n in 2..=30u64 {
        let divisors = (1..=n).filter(|d| n % d == 0).count();
        assert_eq!(Semiring::builtin(Builtin::Ideals(n)).unwrap().size(), Some(divisors), "n = {n}");
    }
}

#[test]
fn predicates_of_bool_and_zmod() {
    let p = structural_predicates(&Semiring::bool());
    assert!(p.commutative.holds);
    assert!(!p.cancellative.holds);
    assert!(p.additively_idempotent.holds);
    for n in 2..=7 {
        let p = structural_predicates(&Semiring::zmod(n));
        assert!(p.commutative.holds);
        assert!(p.cancellative.holds);
        assert!(!p.additively_idempotent.holds, "ZMOD({n})");
    }
}

#[test]
fn reduction_maps_are_morphisms() {
    for n in 2..=12u64 {
        for m in 2..=n {
            let map: Vec<u64> = (0..n).map(|i| i % m).collect();
            let f = SemiringMorphism::new(Semiring::zmod(n), Semiring::zmod(m), map);
            assert_eq!(f.is_ok() && f.unwrap().check().passed(), n % m == 0, "ℤ/{n} → ℤ/{m}");
        }
    }
}

fn perturbed_tables() -> impl Strategy<Value = SemiringTables> {
    let bases = builtins().into_iter().filter(|b| Semiring::builtin(*b).unwrap().size().unwrap() <= 5).collect::<Vec<_>>();
    (prop::sample::select(bases), any::<bool>(), any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<prop::sample::Index>())
        .prop_map(|(b, in_add, i, j, v)| {
            let mut t = Semiring::builtin(b).unwrap().tables().unwrap().clone();
            let n = t.elements.len();
            let table = if in_add { &mut t.add } else { &mut t.mul };
            table[i.index(n)][j.index(n)] = v.index(n);
            t
        })
}

proptest! {
    #[test]
    fn axiom_check_agrees_with_brute_force(t in perturbed_tables()) {
        let verdict = check_semiring_axioms(&t).map(|r| r.passed()).unwrap_or(false);
        prop_assert_eq!(verdict, axioms_hold(&t));
    }

    #[test]
    fn nat_arithmetic_is_integer_arithmetic(a in 0u64..1 << 20, b in 0u64..1 << 20, k in 0u64..1000) {
        let s = Semiring::Nat;
        prop_assert_eq!(s.add(a, b), a + b);
        prop_assert_eq!(s.mul(a, b), a * b);
        prop_assert_eq!(s.nat_mul(k, a), k * a);
    }

    #[test]
    fn zmod_nat_multiples(n in 2u64..12, k in 0u64..200, a in 0u64..12) {
        let s = Semiring::zmod(n);
        let a = a % n;
        prop_assert_eq!(s.nat_mul(k, a), k * a % n);
        prop_assert_eq!(s.from_nat(k), k % n);
    }
}
