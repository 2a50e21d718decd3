//! Acceptance criteria, one line each. Runs without the libtest harness so the lines always print.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use semikernel::comodule::{
    check_comodule, colinear_maps, comodule_coequalizer, comodule_equalizer, graded_comodule, is_colinear, rat_of_dual_check,
    rat_property_suite, round_trip_check, cofree, two_coactions_counterexample, MeasuringPairing, Semicomodule,
};
use semikernel::coring::{check_semicoring, dual_semiring, gallery, grouplike_data, mutation_corpus, DualSide, Semicoring};
use semikernel::finite::{
    all_subs, enumerate_modules, exactness_check, hom_enumerate, quotient_by_sub, saturation_tensor,
    short_sequence, ExactMode, FiniteModule, FiniteTensor, TableMap,
};
use semikernel::linear::LinearMap;
use semikernel::module::{Elem, Module};
use semikernel::probes::{bou_check, flatness_probe, unit_laws};
use semikernel::semiring::{find_semiring_isomorphism, SemiringTables};
use semikernel::tensor::{tensor, tensor_of_maps, Strategy, TensorProduct};
use semikernel::{Budget, Error, Outcome, Semiring};
use semikernel_cli::run::MUTATIONS_PER_CORING;

const B: Budget = Budget::DEFAULT;

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: semikernel::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn modules(base: &Semiring, max: usize) -> Result<Vec<Arc<FiniteModule>>, String> {
    Ok(ok(enumerate_modules(base, max), "enumerate_modules")?.into_iter().map(Arc::new).collect())
}

// 1

fn gallery_soundness() -> Verdict {
    let g = ok(gallery(), "gallery")?;
    ensure!(g.len() == 10, "gallery has {} corings", g.len());
    for c in &g {
        let r = ok(check_semicoring(c), &c.name)?;
        ensure!(r.passed(), "{} fails: {r}", c.name);
    }
    let corpus = ok(mutation_corpus(MUTATIONS_PER_CORING), "mutation corpus")?;
    ensure!(corpus.len() >= 20, "only {} mutations", corpus.len());
    for (tag, d) in &corpus {
        let c = ok(d.build(), tag)?;
        let r = ok(check_semicoring(&c), tag)?;
        let f = r.first_failure().ok_or_else(|| format!("mutation {tag} passes"))?;
        ensure!(f.witness.as_deref().map_or(false, |w| !w.is_empty()), "mutation {tag} fails without witness");
    }
    Ok(format!("{} corings pass, {} mutations rejected with witnesses", g.len(), corpus.len()))
}

// 2

/// The map saturation → other sending m⊗n to m⊗n, checked linear, bijective and compatible with pure tensors.
fn witness_iso(sat: &FiniteTensor, a: &[Elem], b: &[Elem], other: &TensorProduct) -> Result<(), String> {
    let en = ok(other.to_finite(B), "enumerate")?;
    let r = other.result();
    let images: Vec<usize> = sat
        .decompositions
        .iter()
        .map(|d| {
            let parts: Vec<Elem> = d.iter().map(|&(i, j)| other.pure(&a[i], &b[j])).collect();
            en.index_of(&r.sum(&parts))
        })
        .collect();
    let phi = TableMap::new(sat.result.clone(), en.table.clone(), images).map_err(|e| format!("comparison map: {e}"))?;
    ensure!(phi.is_bijective(), "comparison map {:?} is not bijective", phi.images());
    for i in 0..a.len() {
        for j in 0..b.len() {
            let want = en.index_of(&other.pure(&a[i], &b[j]));
            ensure!(phi.apply(sat.pure(i, j)) == want, "φ({}⊗{}) misplaced", sat.left.label(i), sat.right.label(j));
        }
    }
    Ok(())
}

fn atom_instances() -> Result<Vec<Module>, String> {
    let m = |r: semikernel::Result<Module>| ok(r, "atom");
    let nat_atoms: Vec<Module> = (2..=6).map(|n| m(Module::cyclic(n))).collect::<Result<_, _>>()?;
    let mut out = nat_atoms.clone();
    out.push(Module::bool_atom());
    let c = |n| m(Module::cyclic(n));
    for parts in [
        vec![c(2)?, c(2)?],
        vec![c(2)?, c(3)?],
        vec![Module::bool_atom(), c(2)?],
        vec![Module::bool_atom(), c(3)?],
        vec![Module::bool_atom(), Module::bool_atom()],
    ] {
        out.push(m(Module::direct_sum(&parts))?);
    }
    for base in [Semiring::bool(), Semiring::zmod(2), Semiring::zmod(3), Semiring::zmod(4), Semiring::zmod(5), Semiring::zmod(6)] {
        out.push(m(Module::free(&base, 1))?);
    }
    out.push(m(Module::free(&Semiring::bool(), 2))?);
    out.push(m(Module::free(&Semiring::zmod(2), 2))?);
    Ok(out)
}

fn rules_vs_saturation() -> Result<usize, String> {
    let atoms = atom_instances()?;
    let mut pairs = 0;
    for x in &atoms {
        for y in &atoms {
            if x.base() != y.base() {
                continue;
            }
            let (xe, ye) = (ok(x.to_finite(B), "enumerate")?, ok(y.to_finite(B), "enumerate")?);
            ensure!(xe.elems.len() <= 6 && ye.elems.len() <= 6, "instance above size 6");
            let sat = ok(saturation_tensor(&xe.table, &ye.table, B), "saturation")?;
            for strategy in [Strategy::Rules, Strategy::Completion] {
                let t = ok(TensorProduct::new(x, y, strategy, B), "tensor")?;
                witness_iso(&sat, &xe.elems, &ye.elems, &t).map_err(|w| format!("{} ⊗ {} ({strategy:?}): {w}", x.name(), y.name()))?;
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

/// Balanced bilinear maps M × N → T, as |M|·|N| tables, by backtracking over m ↦ b(m, −) ∈ Hom(N, T).
fn bilinear_maps(m: &FiniteModule, n: &FiniteModule, t: &Arc<FiniteModule>, hom_nt: &[TableMap]) -> BTreeSet<Vec<usize>> {
    let scalars = m.base().elements().unwrap_or_default();
    let (sm, sn) = (m.size(), n.size());
    let zero_hom = hom_nt.iter().position(|h| h.images().iter().all(|&v| v == 0)).expect("zero map");
    let consistent = |assign: &[usize]| -> bool {
        let k = assign.len();
        let h = |x: usize| hom_nt[assign[x]].images();
        for a in 0..k {
            for b in 0..k {
                let c = m.add(a, b);
                if c < k && (0..sn).any(|y| h(c)[y] != t.add(h(a)[y], h(b)[y])) {
                    return false;
                }
            }
            for &s in &scalars {
                let c = m.act(a, s);
                if c < k && (0..sn).any(|y| h(c)[y] != h(a)[n.lact(s, y)]) {
                    return false;
                }
            }
        }
        true
    };
    let mut out = BTreeSet::new();
    let mut assign = vec![zero_hom];
    fn rec(
        assign: &mut Vec<usize>,
        sm: usize,
        choices: usize,
        consistent: &dyn Fn(&[usize]) -> bool,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if !consistent(assign) {
            return;
        }
        if assign.len() == sm {
            emit(assign);
            return;
        }
        for h in 0..choices {
            assign.push(h);
            rec(assign, sm, choices, consistent, emit);
            assign.pop();
        }
    }
    let mut emit = |a: &[usize]| {
        out.insert(a.iter().flat_map(|&h| hom_nt[h].images().to_vec()).collect());
    };
    rec(&mut assign, sm, hom_nt.len(), &consistent, &mut emit);
    out
}

fn saturation_consistency() -> Result<usize, String> {
    let mut pairs = 0;
    for base in [Semiring::bool(), Semiring::zmod(2), Semiring::zmod(3)] {
        let ms = modules(&base, 4)?;
        let scalars = base.elements().unwrap_or_default();
        for m in &ms {
            for n in &ms {
                let t = ok(saturation_tensor(m, n, B), "saturation")?;
                let again = ok(saturation_tensor(m, n, B), "saturation")?;
                ensure!(t.result == again.result && t.pure == again.pure, "{} ⊗ {} is not deterministic", m.name(), n.name());
                let r = &t.result;
                for a in m.elements() {
                    for y in n.elements() {
                        ensure!(t.pure(0, y) == 0 && t.pure(a, 0) == 0, "0⊗n or m⊗0 is not zero");
                        for b in m.elements() {
                            ensure!(t.pure(m.add(a, b), y) == r.add(t.pure(a, y), t.pure(b, y)), "not additive on the left");
                        }
                        for z in n.elements() {
                            ensure!(t.pure(a, n.add(y, z)) == r.add(t.pure(a, y), t.pure(a, z)), "not additive on the right");
                        }
                        for &s in &scalars {
                            ensure!(t.pure(m.act(a, s), y) == t.pure(a, n.lact(s, y)), "not balanced");
                        }
                    }
                }
                for (e, d) in t.decompositions.iter().enumerate() {
                    ensure!(r.sum(d.iter().map(|&(a, y)| t.pure(a, y))) == e, "decomposition of {} is wrong", r.label(e));
                }
                // Universal property against every target of the range.
                for target in &ms {
                    let hom_nt = ok(hom_enumerate(n, target, B), "hom")?.maps;
                    let bil = bilinear_maps(m, n, target, &hom_nt);
                    let homs = ok(hom_enumerate(r, target, B), "hom")?.maps;
                    let via: BTreeSet<Vec<usize>> =
                        homs.iter().map(|h| m.elements().flat_map(|a| n.elements().map(move |y| (a, y))).map(|(a, y)| h.apply(t.pure(a, y))).collect()).collect();
                    ensure!(
                        via.len() == homs.len() && via == bil,
                        "{} ⊗ {} → {}: {} homs, {} bilinear maps",
                        m.name(),
                        n.name(),
                        target.name(),
                        homs.len(),
                        bil.len()
                    );
                }
                // M⊗N ≅ N⊗M through m⊗n ↦ n⊗m.
                let sw = ok(saturation_tensor(n, m, B), "saturation")?;
                let images = t.decompositions.iter().map(|d| sw.result.sum(d.iter().map(|&(a, y)| sw.pure(y, a)))).collect();
                let swap = TableMap::new(t.result.clone(), sw.result.clone(), images).map_err(|e| format!("swap: {e}"))?;
                ensure!(swap.is_bijective(), "swap {} ⊗ {} is not bijective", m.name(), n.name());
                pairs += 1;
            }
        }
    }
    Ok(pairs)
}

fn tensor_oracle() -> Verdict {
    let atoms = rules_vs_saturation()?;
    let tables = saturation_consistency()?;
    Ok(format!("{atoms} atom pairs witnessed isomorphic (rules and completion), {tables} table pairs self-consistent"))
}

// 3

fn unit_law_modules() -> Result<Vec<Module>, String> {
    let mut out: Vec<Module> = ok(gallery(), "gallery")?.into_iter().map(|c| c.carrier).collect();
    out.extend([Module::nat(), Module::bool_atom(), Module::qmodz(), ok(Module::cyclic(4), "atom")?]);
    for base in [Semiring::bool(), Semiring::zmod(2), Semiring::zmod(3)] {
        out.push(ok(Module::free(&base, 2), "free")?);
    }
    Ok(out)
}

fn unit_laws_hold() -> Verdict {
    let ms = unit_law_modules()?;
    let mut boxed = 0;
    for m in &ms {
        let r = ok(unit_laws(m, B), m.name())?;
        ensure!(r.passed(), "{}: {r}", m.name());
        ensure!(r.check("M⊗S ≅ M").is_some() && r.check("S⊗M ≅ M").is_some(), "{}: unitors not checked", m.name());
        if m.is_finite() && !m.has_q() {
            ensure!(r.check("M⊠S ≅ c(M)").is_some(), "{}: ⊠ not checked", m.name());
            boxed += 1;
        }
    }
    Ok(format!("{} modules, {boxed} with M⊠S ≅ c(M)", ms.len()))
}

// 4

/// Is the induced Coker f → Z, [y] ↦ g(y), a well-defined bijection?
fn coker_iso(f: &TableMap, g: &TableMap) -> bool {
    let y = f.target();
    let img: Vec<usize> = f.images().to_vec();
    let related = |a: usize, b: usize| img.iter().any(|&u| img.iter().any(|&v| y.add(a, u) == y.add(b, v)));
    let surjective = g.target().elements().all(|z| g.images().contains(&z));
    surjective && y.elements().all(|a| y.elements().all(|b| related(a, b) == (g.apply(a) == g.apply(b))))
}

fn exactness_taxonomy() -> Verdict {
    let (mut seqs, mut maps, mut pairs) = (0, 0, 0);
    for base in [Semiring::bool(), Semiring::zmod(2)] {
        let ms = modules(&base, 4)?;
        let zero = Arc::new(FiniteModule::zero_module(&base));
        for m in &ms {
            for l in all_subs(m) {
                let (_, incl) = l.closure().as_module();
                let (_, pi) = quotient_by_sub(&l);
                let r = ok(exactness_check(&short_sequence(&incl, &pi), ExactMode::Exact), "exactness")?;
                ensure!(r.holds, "0 → L̄ → {} → {}/L → 0 with L = {:?}: {:?}", m.name(), m.name(), l.elements(), r.joints);
                seqs += 1;
            }
        }
        let homs: Vec<Vec<Vec<TableMap>>> = ms
            .iter()
            .map(|x| ms.iter().map(|y| hom_enumerate(x, y, B).map(|h| h.maps)).collect::<semikernel::Result<Vec<_>>>())
            .collect::<semikernel::Result<_>>()
            .map_err(|e| e.to_string())?;
        for (i, x) in ms.iter().enumerate() {
            for (j, y) in ms.iter().enumerate() {
                for f in &homs[i][j] {
                    let injective = x.elements().all(|a| x.elements().all(|b| a == b || f.apply(a) != f.apply(b)));
                    let mono = ok(exactness_check(&[TableMap::zero(&zero, x), f.clone()], ExactMode::Exact), "exactness")?.holds;
                    ensure!(mono == injective, "0 → X → Y: exact = {mono}, injective = {injective}");
                    let surjective = y.elements().all(|b| f.images().contains(&b));
                    let epi = ok(exactness_check(&[f.clone(), TableMap::zero(y, &zero)], ExactMode::Exact), "exactness")?.holds;
                    ensure!(epi == surjective, "Y → Z → 0: exact = {epi}, surjective = {surjective}");
                    maps += 1;
                    for (k, _) in ms.iter().enumerate() {
                        for g in &homs[j][k] {
                            let exact = ok(exactness_check(&short_sequence(f, g), ExactMode::Exact), "exactness")?.holds;
                            let ker: BTreeSet<usize> = y.elements().filter(|&b| g.apply(b) == 0).collect();
                            let image: BTreeSet<usize> = f.images().iter().copied().collect();
                            let oracle = injective && image == ker && coker_iso(f, g);
                            ensure!(exact == oracle, "0 → X → Y → Z → 0 with f = {:?}, g = {:?}: exact = {exact}, isomorphisms = {oracle}", f.images(), g.images());
                            pairs += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{seqs} sequences 0 → L̄ → M → M/L → 0 exact, {maps} maps checked for injectivity and surjectivity, {pairs} short sequences checked for exactness"))
}

// 5

fn bou_formula() -> Verdict {
    let mut n = 0;
    for base in [Semiring::bool(), Semiring::zmod(2), Semiring::zmod(3), Semiring::Nat] {
        let ms = modules(&base, 4)?;
        for l in &ms {
            for nn in &ms {
                for k in all_subs(l) {
                    for m in all_subs(nn) {
                        let r = ok(bou_check(&k, &m, B), "bou_check")?;
                        ensure!(r.kernel_formula.holds, "{} ⊗ {}: {}", l.name(), nn.name(), r.kernel_formula.witness.unwrap_or_default());
                        ensure!(r.surjective && r.k_uniform, "{} ⊗ {}: π_K⊗π_M not a uniform surjection", l.name(), nn.name());
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{n} instances over BOOL, ZMOD(2), ZMOD(3), NAT"))
}

// 6

fn pointwise_bool2() -> SemiringTables {
    let or = |a: usize, b: usize| a | b;
    let and = |a: usize, b: usize| a & b;
    SemiringTables {
        name: "BOOL^{x,y}".into(),
        elements: ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect(),
        add: (0..4).map(|a| (0..4).map(|b| or(a, b)).collect()).collect(),
        mul: (0..4).map(|a| (0..4).map(|b| and(a, b)).collect()).collect(),
        zero: 0,
        one: 3,
    }
}

fn is_iso(a: &SemiringTables, b: &SemiringTables, map: &[usize]) -> bool {
    let n = a.elements.len();
    let bij = map.iter().copied().collect::<BTreeSet<_>>().len() == n && n == b.elements.len();
    bij && map[a.zero] == b.zero
        && map[a.one] == b.one
        && (0..n).all(|x| (0..n).all(|y| map[a.add[x][y]] == b.add[map[x]][map[y]] && map[a.mul[x][y]] == b.mul[map[x]][map[y]]))
}

fn dual_semirings() -> Verdict {
    let mut done = 0;
    let (mut capped, mut infinite) = (0, 0);
    for c in ok(gallery(), "gallery")? {
        for side in [DualSide::Left, DualSide::Right, DualSide::Two] {
            let d = match dual_semiring(&c, side, B) {
                Ok(d) => d,
                Err(Error::Unsupported(_)) if !c.base().is_finite() => {
                    infinite += 1;
                    continue;
                }
                Err(Error::Unsupported(_)) => {
                    capped += 1;
                    continue;
                }
                Err(e) => return Err(format!("{}: {e}", c.name)),
            };
            ensure!(d.report.passed(), "{} {side:?}: {}", c.name, d.report);
            let t = &d.tables;
            let n = t.elements.len();
            for a in 0..n {
                ensure!(t.mul[t.one][a] == a && t.mul[a][t.one] == a, "{} {side:?}: ε is not a unit", c.name);
                for b in 0..n {
                    for e in 0..n {
                        ensure!(t.mul[t.mul[a][b]][e] == t.mul[a][t.mul[b][e]], "{} {side:?}: ⋆ not associative", c.name);
                    }
                }
            }
            done += 1;
        }
    }
    // *grouplike(BOOL, {x,y}) through f ↦ (f(x), f(y)).
    let c = ok(ok(grouplike_data(&Semiring::bool(), &["x", "y"]), "grouplike")?.build(), "grouplike")?;
    let d = ok(dual_semiring(&c, DualSide::Left, B), "dual")?;
    let pw = pointwise_bool2();
    let (x, y) = (c.carrier.unit(0, 0), c.carrier.unit(1, 0));
    let bit = |f: &LinearMap, e: &Elem| f.scalar_value(e).map_or(0, |s| s as usize);
    let eval: Vec<usize> = d.functionals.iter().map(|f| bit(f, &x) * 2 + bit(f, &y)).collect();
    ensure!(is_iso(&d.tables, &pw, &eval), "evaluation at x, y is not an isomorphism: {eval:?}");
    let found = find_semiring_isomorphism(&d.tables, &pw).ok_or("no isomorphism found")?;
    ensure!(is_iso(&d.tables, &pw, &found), "reported isomorphism {found:?} does not check");
    Ok(format!("{done} duals pass; *grouplike ≅ BOOL^2 via {eval:?}; {capped} above the 64-functional cap, {infinite} over an infinite base"))
}

// 7

fn counterexample_n4() -> Verdict {
    let t = ok(two_coactions_counterexample(4, B), "counterexample")?;
    ensure!(t.report.passed(), "{}", t.report);
    ensure!(t.rho1.coaction.differs_from(&t.rho2.coaction).is_some(), "ρ₁ = ρ₂");
    for rho in [&t.rho1, &t.rho2] {
        ensure!(ok(check_comodule(rho), "check")?.passed(), "{} is not a comodule", rho.name);
        ensure!(ok(is_colinear(&t.iota, rho, &t.qmodz), "colinear")?, "ι not colinear for {}", rho.name);
    }
    let Outcome::Fail(w) = &t.flatness.mono_flat_on_family else {
        return Err(format!("mono-flat probe returned {:?}", t.flatness.mono_flat_on_family));
    };
    // Independently: (0,1̄)⊗1̄ is non-zero in C⊗ℤ/4 and dies in C⊗ℚ/ℤ.
    let c = &t.coring.carrier;
    let z4 = t.iota.source().clone();
    let tx = ok(tensor(c, &z4), "tensor")?;
    let ty = ok(tensor(c, &Module::qmodz()), "tensor")?;
    let cf = ok(tensor_of_maps(&LinearMap::identity(c), &t.iota, &tx, &ty), "C⊗ι")?;
    let g = tx.pure(&c.unit(1, 0), &z4.unit(0, 0));
    ensure!(!tx.result().is_zero(&g), "(0,1̄)⊗1̄ vanishes in C⊗ℤ/4");
    ensure!(ty.result().is_zero(&cf.apply(&g)), "(0,1̄)⊗1̄ survives in C⊗ℚ/ℤ");
    Ok(format!("ρ₁ ≠ ρ₂, both comodules, ι colinear for both; probe fails: {w}"))
}

// 8

fn grouplike() -> Result<Arc<Semicoring>, String> {
    Ok(Arc::new(ok(ok(grouplike_data(&Semiring::bool(), &["x", "y"]), "grouplike")?.build(), "grouplike")?))
}

fn grouplike_comodules(c: &Arc<Semicoring>) -> Result<Vec<Semicomodule>, String> {
    let b = ok(Module::free(&Semiring::bool(), 1), "free")?;
    let chain = modules(&Semiring::bool(), 3)?.into_iter().find(|m| m.size() == 3).ok_or("no 3-chain")?;
    let (ch, _) = ok(Module::from_finite(&chain), "chain")?;
    let ch = ch.with_name("Ch");
    let mut out = vec![Semicomodule::regular(c)];
    for parts in [
        vec![(b.clone(), 0)],
        vec![(b.clone(), 1)],
        vec![(ch.clone(), 0)],
        vec![(ch.clone(), 1)],
        vec![(b.clone(), 0), (b.clone(), 1)],
        vec![(ch.clone(), 0), (b.clone(), 1)],
    ] {
        out.push(ok(graded_comodule(c, &parts), "graded")?);
    }
    out.push(ok(cofree(&b, c), "cofree")?);
    Ok(out)
}

fn rational_suite() -> Verdict {
    let c = grouplike()?;
    let p = ok(MeasuringPairing::from_dual(&c, B), "pairing")?;
    let family = modules(&p.algebra, 4)?;
    let r = ok(rat_property_suite(&p, &family, B), "suite")?;
    ensure!(r.passed() && r.checks.len() == 5, "{r}");
    let d = ok(rat_of_dual_check(&p, B), "Rat(𝒜*)")?;
    ensure!(d.passed(), "{d}");
    let ms = grouplike_comodules(&c)?;
    for m in &ms {
        let rt = ok(round_trip_check(&p, m, B), &m.name)?;
        ensure!(rt.passed(), "{}: {rt}", m.name);
    }
    Ok(format!("{} 𝒜-modules of size ≤ 4, Rat(𝒜*) ≅ C, {} round trips", family.len(), ms.len()))
}

// 9

fn certificate(c: &Semicoring) -> Result<semikernel::probes::FlatnessReport, String> {
    let ms = modules(c.base(), 3)?;
    let presented = ms.iter().map(|m| Module::from_finite(m)).collect::<semikernel::Result<Vec<_>>>().map_err(|e| e.to_string())?;
    let mut family = Vec::new();
    for (x, (xm, xe)) in ms.iter().zip(&presented) {
        for (y, (ym, ye)) in ms.iter().zip(&presented) {
            for f in ok(hom_enumerate(x, y, B), "hom")?.maps.into_iter().filter(|f| f.is_injective()) {
                family.push(ok(LinearMap::from_table(xm, xe, ym, ye, &f), "family")?);
            }
        }
    }
    ok(flatness_probe(&c.carrier, &family, B), "flatness")
}

fn coext_comodules(c: &Arc<Semicoring>) -> Result<Vec<Semicomodule>, String> {
    let e = c.carrier.unit(0, 0);
    let mut out = vec![Semicomodule::regular(c)];
    for rank in [1, 2] {
        let x = ok(Module::free(c.base(), rank), "free")?;
        out.push(ok(Semicomodule::from_fn(format!("{}·e", x.name()), c, x, |t, m| Ok(t.pure(m, &e))), "trivial")?);
    }
    Ok(out)
}

fn limits() -> Verdict {
    let g = grouplike()?;
    let coext = Arc::new(
        ok(gallery(), "gallery")?.into_iter().find(|c| c.name == "coext(ZMOD(2), ZMOD(2))").ok_or("coext(ZMOD(2)) missing")?,
    );
    let (mut pairs, mut coeq_factored, mut eq_factored) = (0, 0, 0);
    for (c, list) in [(g.clone(), grouplike_comodules(&g)?), (coext.clone(), coext_comodules(&coext)?)] {
        let cert = certificate(&c)?;
        ensure!(cert.mono_flat_on_family.is_pass(), "{} not certified flat: {:?}", c.name, cert.mono_flat_on_family);
        let small: Vec<Semicomodule> = list.iter().filter(|m| m.carrier.enumerate(B).map_or(false, |e| e.len() <= 4)).cloned().collect();
        for m in &small {
            for n in &small {
                let maps = ok(colinear_maps(m, n, B), "colinear maps")?;
                for f in &maps {
                    for h in &maps {
                        let q = ok(comodule_coequalizer(f, h, m, n, &small, B), "coequalizer")?;
                        ensure!(q.report.passed(), "coequalizer of {f}, {h}: {}", q.report);
                        let e = ok(comodule_equalizer(f, h, m, n, &cert, &small, B), "equalizer")?;
                        ensure!(e.report.passed(), "equalizer of {f}, {h}: {}", e.report);
                        coeq_factored += q.factored;
                        eq_factored += e.factored;
                        pairs += 1;
                    }
                }
            }
        }
    }
    ensure!(pairs >= 50, "only {pairs} colinear pairs");
    let t = ok(two_coactions_counterexample(4, B), "counterexample")?;
    let id = LinearMap::identity(&t.rho1.carrier);
    match comodule_equalizer(&id, &id, &t.rho1, &t.rho1, &t.flatness, &[], B) {
        Err(Error::Refused(_)) => {}
        other => return Err(format!("equalizer over counterexample(4) not refused: {:?}", other.map(|e| e.report))),
    }
    Ok(format!("{pairs} colinear pairs, {coeq_factored} + {eq_factored} candidate maps factored; counterexample(4) refused"))
}

// 10

fn semik(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_semik")).args(args).env_remove("SEMIK_BUDGET").output().map_err(|e| e.to_string())
}

fn without_timing(o: &std::process::Output) -> String {
    String::from_utf8_lossy(&o.stdout).lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n")
}

fn cli() -> Verdict {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let g1 = semik(&["gallery", "--format", "jsonl"])?;
    ensure!(g1.status.code() == Some(0), "gallery exited {:?}", g1.status.code());
    let g2 = semik(&["gallery", "--format", "jsonl"])?;
    ensure!(without_timing(&g1) == without_timing(&g2), "gallery report differs between runs");
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixtures.join("mutations")).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    ensure!(files.len() >= 20, "only {} mutation fixtures", files.len());
    for f in &files {
        let o = semik(&["report", f.to_str().unwrap(), "--format", "jsonl"])?;
        ensure!(o.status.code() == Some(1), "{} exited {:?}", f.display(), o.status.code());
        let first = String::from_utf8_lossy(&o.stdout).lines().next().unwrap_or_default().to_string();
        let rec: serde_json::Value = serde_json::from_str(&first).map_err(|e| format!("{}: {e}", f.display()))?;
        let witnessed = rec["checks"].as_array().map_or(false, |cs| cs.iter().any(|c| c["passed"] == false && c["witness"].is_string()));
        ensure!(witnessed, "{}: no witness in {first}", f.display());
    }
    let tensor_doc = fixtures.join("tensor.json");
    let starved = semik(&["tensor", tensor_doc.to_str().unwrap(), "Chain", "V", "--budget", "2"])?;
    ensure!(starved.status.code() == Some(2), "starved tensor exited {:?}", starved.status.code());
    for doc in ["tour.json", "tensor.json"] {
        let p = fixtures.join(doc);
        let a = semik(&["report", p.to_str().unwrap()])?;
        let b = semik(&["report", p.to_str().unwrap()])?;
        ensure!(a.status.code() == Some(0), "{doc} exited {:?}", a.status.code());
        ensure!(without_timing(&a) == without_timing(&b), "{doc} report differs between runs");
    }
    Ok(format!("gallery 0, {} mutation fixtures 1 with witnesses, starved tensor 2, reports byte-stable", files.len()))
}

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Verdict,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, title: "gallery soundness", limit: secs(60), run: gallery_soundness },
        Criterion { id: 2, title: "tensor oracle equivalence", limit: secs(120), run: tensor_oracle },
        Criterion { id: 3, title: "unit laws", limit: None, run: unit_laws_hold },
        Criterion { id: 4, title: "exactness taxonomy", limit: secs(120), run: exactness_taxonomy },
        Criterion { id: 5, title: "tensor kernel formula", limit: None, run: bou_formula },
        Criterion { id: 6, title: "dual semirings", limit: None, run: dual_semirings },
        Criterion { id: 7, title: "counterexample n = 4", limit: secs(10), run: counterexample_n4 },
        Criterion { id: 8, title: "rational parts", limit: secs(300), run: rational_suite },
        Criterion { id: 9, title: "coequalizers and equalizers", limit: None, run: limits },
        Criterion { id: 10, title: "cli", limit: None, run: cli },
    ];
    let only: Vec<u8> = std::env::var("ACCEPTANCE_ONLY")
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let took = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.1?}, limit {l:?}")),
            (r, _) => r,
        };
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {l:?}"));
        match result {
            Ok(detail) => println!("criterion {:>2} {}: PASS ({took:.1?}{limit}) {detail}", c.id, c.title),
            Err(w) => {
                failed += 1;
                println!("criterion {:>2} {}: FAIL ({took:.1?}{limit}) {w}", c.id, c.title);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
