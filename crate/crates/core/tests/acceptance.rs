//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line to the
//! real stdout (visible without `--nocapture`); the test fails if any
//! criterion fails. Expected values come from the models in `oracles`.

mod oracles;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use oracles::{Classical, Elt, Mat, Model, Root, Vector};
use tits_daha::tits::{
    big_length, enhanced_length, length_recursion_check, length_t, mul_simple_left, mul_simple_right,
    small_length, CoverBounds, Direction, ReflectionSet, Side,
};
use tits_daha::weyl::dominantize;
use tits_daha::{Coweight, Error, HeckeAlgebra, LaurentPoly, RootDatum, TitsElt, WeylElt};

/// Height of the longest inversion any element in these boxes can have.
const INV_HEIGHT: i64 = 64;

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Option<Duration>,
    start: Instant,
    checked: usize,
    failures: Vec<String>,
    failed: usize,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u8, title: &'static str, limit_secs: Option<u64>) -> Self {
        Criterion {
            id,
            title,
            limit: limit_secs.map(Duration::from_secs),
            start: Instant::now(),
            checked: 0,
            failures: Vec::new(),
            failed: 0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> bool {
        let elapsed = self.start.elapsed();
        let in_time = self.limit.is_none_or(|l| elapsed < l);
        let pass = self.failed == 0 && in_time && self.checked > 0;
        let limit = self.limit.map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
        let mut line = format!(
            "criterion {} {}: {} | {} checks, {} failed | {:.1}s{limit}",
            self.id,
            if pass { "PASS" } else { "FAIL" },
            self.title,
            self.checked,
            self.failed,
            elapsed.as_secs_f64(),
        );
        for n in &self.notes {
            line.push_str(&format!(" | {n}"));
        }
        for f in &self.failures {
            line.push_str(&format!("\n    counterexample: {f}"));
        }
        let mut out = std::io::stdout().lock();
        writeln!(out, "{line}").unwrap();
        out.flush().unwrap();
        pass
    }
}

fn to_lib(d: &RootDatum, x: &Elt) -> TitsElt {
    let w = WeylElt::from_word(d, &x.w.word).unwrap();
    TitsElt::new(d, Coweight(x.mu.clone()), w).unwrap()
}

fn key_of(m: &Model, x: &TitsElt) -> (Vector, Mat) {
    (x.mu().coords().to_vec(), m.weyl_of_word(x.w().word()).m)
}

fn lex_up(a: (i64, i64), b: (i64, i64)) -> bool {
    b > a
}

fn signed_roots(m: &Model, h: i64) -> Vec<Root> {
    let pos = m.positive_roots(h);
    pos.iter().cloned().chain(pos.iter().map(Root::negate)).collect()
}

/// Positive double affine roots `β∨ + nπ` with `|ht β∨| ≤ h`, `|n| ≤ n_max`.
fn double_affine_roots(m: &Model, h: i64, n_max: i64) -> Vec<(Root, i64)> {
    let mut out = Vec::new();
    for r in signed_roots(m, h) {
        let positive = m.sign(&r.f) > 0;
        for n in 0..=n_max {
            if positive || n > 0 {
                out.push((r.clone(), n));
            }
        }
    }
    out
}

fn poly_of(c: &LaurentPoly) -> BTreeMap<i32, i64> {
    c.terms().map(|(e, k)| (e, i64::try_from(k).unwrap())).collect()
}

/// `Σ c_e q0^e` for a polynomial, `None` if some exponent is negative.
fn evaluate(c: &LaurentPoly, q0: u32) -> Option<BigInt> {
    let mut v = BigInt::zero();
    for (e, k) in c.terms() {
        v += k * BigInt::from(q0).pow(u32::try_from(e).ok()?);
    }
    Some(v)
}

fn order_equivalence(m: &Model, d: &RootDatum, xs: &[Elt]) -> bool {
    let mut cr = Criterion::new(1, "A1~ covers: positivity order agrees with length order", Some(120));
    let bounds = CoverBounds { height: 6, n: 3 };
    let refl = ReflectionSet::new(d, bounds).unwrap();
    let daroots = double_affine_roots(m, bounds.height, bounds.n);
    let mut edges = 0usize;
    for x in xs {
        let lx = m.length(x, INV_HEIGHT);
        let mut expected = BTreeSet::new();
        for (r, n) in &daroots {
            let y = m.mul_reflection(x, r, *n);
            if !m.in_tits_cone(&y.mu) {
                continue;
            }
            let ly = m.length(&y, INV_HEIGHT);
            let up = lex_up(lx, ly);
            let positive = m.image_positive(x, r, *n);
            edges += 1;
            cr.check(ly != lx && up == positive, || {
                format!("π^{:?}·{:?} via ({:?}, {n}): length up {up}, image positive {positive}", x.mu, x.w.word, r.coeffs)
            });
            expected.insert((y.key(), r.coeffs.clone(), *n, up));
        }
        let lib = to_lib(d, x);
        let found: BTreeSet<_> = refl
            .covers(d, &lib)
            .into_iter()
            .map(|c| {
                cr.check(c.agree, || format!("{} via {}: library reports disagreement", lib.render(d), c.root));
                (key_of(m, &c.target), c.root.root.coords().to_vec(), c.root.n, c.direction == Direction::Up)
            })
            .collect();
        cr.check(found == expected, || format!("{}: library cover set differs from the model", lib.render(d)));
    }
    cr.check(edges >= 1000, || format!("only {edges} edges"));
    cr.note(format!("{} elements, {edges} edges", xs.len()));
    cr.finish()
}

fn length_recursion(m: &Model, d: &RootDatum, xs: &[Elt]) -> bool {
    let mut cr = Criterion::new(2, "A1~ length recursion on both sides", Some(60));
    for x in xs {
        let lx = m.length(x, INV_HEIGHT);
        let lib = to_lib(d, x);
        let el = enhanced_length(d, &lib);
        cr.check((el.big, el.small) == lx, || format!("{}: length {el} vs model {lx:?}", lib.render(d)));
        for i in 0..m.nodes() {
            let wa = m.act_root(&x.w, &m.alpha_vee[i]);
            let p = m.pair(&x.mu, &wa);
            let right = if p != 0 { p.signum() } else { m.sign(&wa) };
            let winv_a = m.act_root_inverse(&x.w, &m.alpha_vee[i]);
            let p = -m.pair(&x.mu, &m.alpha_vee[i]);
            let left = if p != 0 { p.signum() } else { m.sign(&winv_a) };

            let xr = Elt { mu: x.mu.clone(), w: m.compose(&x.w, &m.simple(i)) };
            let sl = m.simple(i);
            let xl = Elt { mu: m.act(&sl, &x.mu), w: m.compose(&sl, &x.w) };
            for (side, y, pred, lib_y) in [
                (Side::Right, xr, right, mul_simple_right(d, &lib, i)),
                (Side::Left, xl, left, mul_simple_left(d, i, &lib)),
            ] {
                let ly = m.length(&y, INV_HEIGHT);
                cr.check(ly == (lx.0, lx.1 + pred), || {
                    format!("π^{:?}·{:?}, s{i} {side:?}: model {lx:?} -> {ly:?}, predicted {pred:+}", x.mu, x.w.word)
                });
                cr.check(length_recursion_check(d, &lib, i, side) == pred, || {
                    format!("{} s{i} {side:?}: library dichotomy differs", lib.render(d))
                });
                let el = enhanced_length(d, &lib_y);
                cr.check(key_of(m, &lib_y) == y.key() && (el.big, el.small) == ly, || {
                    format!("{} s{i} {side:?}: library gives {} of length {el}", lib.render(d), lib_y.render(d))
                });
            }
        }
    }
    cr.finish()
}

fn orbit_maximum(m: &Model, d: &RootDatum, mus: &[Vector]) -> bool {
    let mut cr = Criterion::new(3, "A1~ big length is the maximum over the orbit", None);
    let ws = m.weyl_ball(6);
    for mu in mus {
        let best = ws.iter().map(|w| 2 * m.pair(&m.act(w, mu), &m.rho_vee)).max().unwrap();
        cr.check(m.big(mu) == best, || format!("{mu:?}: model dominantization {} vs max {best}", m.big(mu)));
        let cw = Coweight(mu.clone());
        cr.check(big_length(d, &cw).unwrap() == best, || format!("{mu:?}: library big length differs from {best}"));
        let (lam, u) = dominantize(d, &cw).unwrap();
        let witness = m.act(&m.weyl_of_word(u.word()), mu);
        cr.check(
            witness == lam.coords() && m.is_dominant(&witness) && 2 * m.pair(&witness, &m.rho_vee) == best,
            || format!("{mu:?}: witness {:?} does not attain {best}", u.word()),
        );
    }
    cr.note(format!("{} coweights, {} Weyl elements", mus.len(), ws.len()));
    cr.finish()
}

fn inversion_count_sign(m: &Model, d: &RootDatum, mus: &[Vector]) -> bool {
    let mut cr = Criterion::new(4, "A1~ signed inversion count of s_β has the sign of ⟨μ,β∨⟩", None);
    let roots = m.positive_roots(6);
    let lib_roots = d.positive_real_roots_up_to(6);
    cr.check(lib_roots.len() == roots.len(), || format!("library has {} roots of height <= 6", lib_roots.len()));
    for beta in &roots {
        let s = m.reflection(beta);
        let inv = m.inversions(&s, INV_HEIGHT);
        cr.check(inv.len() % 2 == 1, || format!("|Inv(s_β)| = {} for β∨ = {:?}", inv.len(), beta.coeffs));
        let Some(lib_beta) = lib_roots.iter().find(|r| r.coords() == beta.coeffs.as_slice()) else {
            cr.check(false, || format!("β∨ = {:?} missing from the library", beta.coeffs));
            continue;
        };
        let lib_s = WeylElt::reflection(d, lib_beta).unwrap();
        let lib_inv: BTreeSet<Vec<i64>> = lib_s.inversion_set(d).iter().map(|r| r.coords().to_vec()).collect();
        let model_inv: BTreeSet<Vec<i64>> = inv.iter().map(|r| r.coeffs.clone()).collect();
        cr.check(lib_inv == model_inv, || format!("β∨ = {:?}: library inversion set differs", beta.coeffs));
        for mu in mus {
            let signed: i64 = inv.iter().map(|g| if m.pair(mu, &g.f) >= 0 { 1 } else { -1 }).sum();
            let pairing = m.pair(mu, &beta.f);
            cr.check((signed > 0) == (pairing >= 0), || {
                format!("μ = {mu:?}, β∨ = {:?}: signed count {signed}, pairing {pairing}", beta.coeffs)
            });
            let lib = small_length(d, &Coweight(mu.clone()), &lib_s.inverse(d));
            cr.check(lib == signed, || format!("μ = {mu:?}, β∨ = {:?}: library count {lib}", beta.coeffs));
        }
    }
    cr.note(format!("{} roots, {} coweights", roots.len(), mus.len()));
    cr.finish()
}

fn finite_oracle() -> bool {
    let mut cr = Criterion::new(5, "A1, A2 structure constants equal the classical Iwahori-Hecke product", Some(300));
    for (name, m) in [("A1", oracles::a1()), ("A2", oracles::a2())] {
        let d = RootDatum::preset(name).unwrap();
        let h = HeckeAlgebra::new(&d);
        let cl = Classical::new(&m);
        let xs = cl.ball(4);
        let lib: Vec<TitsElt> = xs.iter().map(|x| to_lib(&d, x)).collect();
        for (x, lx) in xs.iter().zip(&lib) {
            for (y, ly) in xs.iter().zip(&lib) {
                let want: BTreeMap<_, _> = cl.product(x, y).into_iter().map(|(k, (_, c))| (k, c)).collect();
                let got: BTreeMap<_, _> = h
                    .structure_constants(lx, ly)
                    .unwrap()
                    .iter()
                    .map(|(z, c)| (key_of(&m, z), poly_of(c)))
                    .collect();
                cr.check(got == want, || format!("{name}: T[{}]·T[{}]", lx.render(&d), ly.render(&d)));
            }
        }
        cr.note(format!("{name}: {} elements, {} pairs", xs.len(), xs.len() * xs.len()));
    }
    cr.finish()
}

fn polynomiality(d: &RootDatum, xs: &[TitsElt]) -> bool {
    let mut cr = Criterion::new(6, "A1~ structure constants lie in Z[q], nonnegative at q = 2..5", Some(600));
    let h = HeckeAlgebra::new(d);
    let mut terms = 0usize;
    let mut diagnostics = 0usize;
    for x in xs {
        for y in xs {
            match h.structure_constants(x, y) {
                Ok(table) => {
                    cr.check(!table.is_empty(), || format!("T[{}]·T[{}] = 0", x.render(d), y.render(d)));
                    for (z, c) in &table {
                        terms += 1;
                        let ok = (2..=5).all(|q0| evaluate(c, q0).is_some_and(|v| !v.is_negative()));
                        cr.check(ok && !c.is_zero(), || {
                            format!("a^{}_{{{},{}}} = {c}", z.render(d), x.render(d), y.render(d))
                        });
                    }
                }
                Err(e) => {
                    diagnostics += 1;
                    cr.check(false, || format!("T[{}]·T[{}]: {e}", x.render(d), y.render(d)));
                }
            }
        }
    }
    cr.note(format!("{} elements, {} pairs, {terms} coefficients, {diagnostics} diagnostics", xs.len(), xs.len() * xs.len()));
    cr.finish()
}

fn dominant_translation_products(m: &Model, d: &RootDatum, mus: &[Vector]) -> bool {
    let mut cr = Criterion::new(7, "A1~ T_{π^λ}T_{w⁻¹} is one term and conjugation moves λ to w(λ)", None);
    let h = HeckeAlgebra::new(d);
    let ws = m.weyl_ball(3);
    let mut count = 0;
    for lam in mus.iter().filter(|l| m.is_dominant(l)) {
        count += 1;
        let x = TitsElt::translation(d, Coweight(lam.clone())).unwrap();
        let bx = h.coset_element(&x).unwrap();
        for w in &ws {
            let inv_word: Vec<usize> = w.word.iter().rev().copied().collect();
            let winv = m.weyl_of_word(&inv_word);
            let y = TitsElt::from_weyl(d, WeylElt::from_word(d, &inv_word).unwrap());
            let table = h.structure_constants(&x, &y).unwrap();
            let single = table.len() == 1
                && table.iter().all(|(z, c)| c.is_one() && key_of(m, z) == (lam.clone(), winv.m.clone()));
            cr.check(single, || format!("λ = {lam:?}, w⁻¹ = {inv_word:?}: {} terms", table.len()));

            let mut conj = bx.clone();
            for &j in &inv_word {
                conj = h.mul_gen(&conj, j, Side::Right, false).unwrap();
            }
            for &j in &inv_word {
                conj = h.mul_gen(&conj, j, Side::Left, true).unwrap();
            }
            let coset = h.to_coset(&conj).unwrap();
            let target = (m.act(w, lam), m.identity().m);
            let ok = coset.len() == 1 && coset.terms().all(|(z, c)| c.is_one() && key_of(m, z) == target);
            cr.check(ok, || format!("λ = {lam:?}, w = {:?}: conjugate is {}", w.word, coset.render(d)));
        }
    }
    cr.note(format!("{count} dominant λ, {} w", ws.len()));
    cr.finish()
}

fn round_trip(d: &RootDatum, boxes: &[(&str, Vec<TitsElt>)]) -> bool {
    let mut cr = Criterion::new(8, "A1~ to_coset(coset_element(x)) = T_x without elimination diagnostics", None);
    let h = HeckeAlgebra::new(d);
    let mut diagnostics = 0;
    for (name, xs) in boxes {
        for x in xs {
            let back = h.coset_element(x).and_then(|b| h.to_coset(&b));
            if matches!(back, Err(Error::Elimination(_))) {
                diagnostics += 1;
            }
            let ok = matches!(&back, Ok(b) if b.len() == 1 && b.coeff(x).is_one());
            cr.check(ok, || match &back {
                Ok(b) => format!("{}: {}", x.render(d), b.render(d)),
                Err(e) => format!("{}: {e}", x.render(d)),
            });
        }
        cr.note(format!("{name}: {} elements", xs.len()));
    }
    cr.note(format!("{diagnostics} diagnostics"));
    cr.finish()
}

fn t_grading() -> bool {
    let mut cr = Criterion::new(9, "A1 ℓ_t increases along up-covers for t = 1, 1/2, 1/4 and ℓ_1 = ℓ_cox", None);
    let m = oracles::a1();
    let d = RootDatum::preset("A1").unwrap();
    let cl = Classical::new(&m);
    let xs = cl.ball(6);
    let ts = [(4, Ratio::from_integer(1)), (2, Ratio::new(1, 2)), (1, Ratio::new(1, 4))];
    let bounds = CoverBounds { height: 6, n: 10 };
    let refl = ReflectionSet::new(&d, bounds).unwrap();
    let daroots = double_affine_roots(&m, bounds.height, bounds.n);
    let mut up_covers = 0;
    for x in &xs {
        let lib = to_lib(&d, x);
        let (big, small) = m.length(x, INV_HEIGHT);
        let cox = cl.length(x);
        cr.check(big + small == cox, || format!("π^{:?}·{:?}: model ℓ_1 {} vs ℓ_cox {cox}", x.mu, x.w.word, big + small));
        cr.check(length_t(&d, &lib, Ratio::from_integer(1)).unwrap() == Ratio::from_integer(cox), || {
            format!("{}: library ℓ_1 differs from ℓ_cox = {cox}", lib.render(&d))
        });
        for (r, n) in &daroots {
            let y = m.mul_reflection(x, r, *n);
            let (ybig, ysmall) = m.length(&y, INV_HEIGHT);
            if (ybig, ysmall) <= (big, small) {
                continue;
            }
            up_covers += 1;
            for (k, _) in &ts {
                cr.check(4 * ybig + k * ysmall > 4 * big + k * small, || {
                    format!("π^{:?}·{:?} via ({:?}, {n}), t = {k}/4", x.mu, x.w.word, r.coeffs)
                });
            }
        }
        for c in refl.covers(&d, &lib).into_iter().filter(|c| c.direction == Direction::Up) {
            for (_, t) in &ts {
                let grows = length_t(&d, &c.target, *t).unwrap() > length_t(&d, &lib, *t).unwrap();
                cr.check(grows, || format!("{} via {}: library ℓ_{t} does not grow", lib.render(&d), c.root));
            }
        }
    }
    cr.note(format!("{} elements, {up_covers} up-covers, |n| <= {}", xs.len(), bounds.n));
    cr.finish()
}

#[test]
fn acceptance_criteria() {
    let m = oracles::a1_affine();
    let d = RootDatum::preset("A1~").unwrap();
    // Criteria 1-4, 7, 8: levels {1, 2}, coordinates in [-3, 3], ℓ_cox(w) ≤ 3.
    let xs = m.elements(3, &[1, 2], 3);
    let mus = m.coweights(3, &[1, 2]);
    // Criterion 6: levels {0, 1}, coordinates in [-2, 2], ℓ_cox(w) ≤ 2.
    let small_box: Vec<TitsElt> = m.elements(2, &[0, 1], 2).iter().map(|x| to_lib(&d, x)).collect();
    let lib_xs: Vec<TitsElt> = xs.iter().map(|x| to_lib(&d, x)).collect();

    let results = [
        order_equivalence(&m, &d, &xs),
        length_recursion(&m, &d, &xs),
        orbit_maximum(&m, &d, &mus),
        inversion_count_sign(&m, &d, &mus),
        finite_oracle(),
        polynomiality(&d, &small_box),
        dominant_translation_products(&m, &d, &mus),
        round_trip(&d, &[("levels 1-2 box", lib_xs), ("levels 0-1 box", small_box.clone())]),
        t_grading(),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(k, _)| k + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
