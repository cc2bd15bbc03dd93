//! Bounded exhaustive checks of the length, order and Hecke identities.
//!
//! Each suite enumerates a box of elements and reports how many instances
//! were checked, with the first few counterexamples on failure.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{FiniteOracle, HeckeAlgebra};
use crate::root_data::{Coweight, RootDatum};
use crate::tits::{
    big_length, elements_in_box, enhanced_length, length_recursion_check, length_t, mul_simple_left,
    mul_simple_right, small_length, CoverBounds, Direction, ReflectionSet, Side, TitsElt,
};
use crate::weyl::{dominantize, elements_up_to_length, WeylElt};

/// Counterexamples kept per report.
const MAX_COUNTEREXAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Im,
    Orders,
    Lengths,
    Oracle,
    Polynomiality,
    Roundtrip,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Im, Suite::Orders, Suite::Lengths, Suite::Oracle, Suite::Polynomiality, Suite::Roundtrip];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Im => "im",
            Suite::Orders => "orders",
            Suite::Lengths => "lengths",
            Suite::Oracle => "oracle",
            Suite::Polynomiality => "polynomiality",
            Suite::Roundtrip => "roundtrip",
        }
    }

    /// Default element box for the suite on the given datum.
    pub fn default_box(self, d: &RootDatum) -> ElementBox {
        let product_suite = matches!(self, Suite::Im | Suite::Polynomiality | Suite::Oracle);
        ElementBox {
            coord: if product_suite { 1 } else { 3 },
            levels: match (d.is_affine(), product_suite) {
                (false, _) => Vec::new(),
                (true, true) => vec![0, 1],
                (true, false) => vec![1, 2],
            },
            max_len: if product_suite { 2 } else { 3 },
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// Elements `π^μ w` with `|μ_k| ≤ coord`, `level(μ) ∈ levels` (affine only)
/// and `ℓ_cox(w) ≤ max_len`. On finite data the oracle suite reads
/// `max_len` as the Coxeter length in `W_aff`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementBox {
    pub coord: i64,
    pub levels: Vec<i64>,
    pub max_len: usize,
}

impl ElementBox {
    pub fn elements(&self, d: &RootDatum) -> Vec<TitsElt> {
        elements_in_box(d, -self.coord, self.coord, self.max_len, |m| self.admits(d, m))
    }

    fn admits(&self, d: &RootDatum, mu: &Coweight) -> bool {
        !d.is_affine() || d.level(mu).is_ok_and(|l| self.levels.contains(&l))
    }

    /// The coweights of the box.
    pub fn coweights(&self, d: &RootDatum) -> Vec<Coweight> {
        crate::tits::coweights_in_box(d.rank_p(), -self.coord, self.coord)
            .into_iter()
            .filter(|m| d.in_tits_cone(m) && self.admits(d, m))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub datum: String,
    pub cover_bounds: CoverBounds,
    pub element_box: ElementBox,
    pub passed: bool,
    pub checked: usize,
    pub failures: usize,
    pub counterexamples: Vec<String>,
}

impl Report {
    fn new(suite: Suite, d: &RootDatum, cover: CoverBounds, element_box: ElementBox) -> Self {
        Report {
            suite,
            datum: d.name().to_string(),
            cover_bounds: cover,
            element_box,
            passed: true,
            checked: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(describe());
            }
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "# datum {} | suite {} | height <= {}, n <= {} | coords in [-{c}, {c}], levels {:?}, max length {}\n",
            self.datum,
            self.suite,
            self.cover_bounds.height,
            self.cover_bounds.n,
            self.element_box.levels,
            self.element_box.max_len,
            c = self.element_box.coord,
        );
        out.push_str(&format!(
            "{}: {} ({} checked, {} failed)\n",
            self.suite,
            if self.passed { "pass" } else { "fail" },
            self.checked,
            self.failures
        ));
        for c in &self.counterexamples {
            out.push_str(&format!("  counterexample: {c}\n"));
        }
        out
    }
}

pub fn run(d: &RootDatum, suite: Suite, cover: CoverBounds, element_box: Option<ElementBox>) -> Result<Report> {
    let bx = element_box.unwrap_or_else(|| suite.default_box(d));
    let mut r = Report::new(suite, d, cover, bx.clone());
    match suite {
        Suite::Orders => orders(d, cover, &bx, &mut r)?,
        Suite::Lengths => lengths(d, cover, &bx, &mut r)?,
        Suite::Im => im(d, &bx, &mut r)?,
        Suite::Oracle => oracle(d, &bx, &mut r)?,
        Suite::Polynomiality => polynomiality(d, &bx, &mut r)?,
        Suite::Roundtrip => roundtrip(d, &bx, &mut r)?,
    }
    Ok(r)
}

fn orders(d: &RootDatum, cover: CoverBounds, bx: &ElementBox, r: &mut Report) -> Result<()> {
    let refl = ReflectionSet::new(d, cover)?;
    let ts = [Ratio::from_integer(1), Ratio::new(1, 2), Ratio::new(1, 4)];
    for x in bx.elements(d) {
        for c in refl.covers(d, &x) {
            r.check(c.agree && c.length_from != c.length_to, || {
                format!("{} via {}: orders disagree or length unchanged", x.render(d), c.root)
            });
            if d.is_affine() {
                r.check(c.target.level(d)? == x.level(d)?, || format!("{} via {}: level changed", x.render(d), c.root));
            } else if c.direction == Direction::Up {
                for &t in &ts {
                    r.check(length_t(d, &c.target, t)? > length_t(d, &x, t)?, || {
                        format!("{} via {}: ℓ_{t} does not increase", x.render(d), c.root)
                    });
                }
            }
        }
    }
    Ok(())
}

fn lengths(d: &RootDatum, cover: CoverBounds, bx: &ElementBox, r: &mut Report) -> Result<()> {
    for x in bx.elements(d) {
        let l = enhanced_length(d, &x);
        for i in 0..d.num_nodes() {
            for side in [Side::Right, Side::Left] {
                let y = match side {
                    Side::Right => mul_simple_right(d, &x, i),
                    Side::Left => mul_simple_left(d, i, &x),
                };
                let want = l.shift_small(length_recursion_check(d, &x, i, side));
                r.check(enhanced_length(d, &y) == want, || {
                    format!("{} times s{} on the {side:?}: length recursion fails", x.render(d), d.label(i))
                });
            }
        }
    }
    // Maximum over the orbit, attained at the dominantization witness.
    let ws = elements_up_to_length(d, 6);
    for mu in bx.coweights(d) {
        let big = big_length(d, &mu)?;
        let best = ws.iter().map(|w| 2 * d.pair_weight(&w.act_coweight(&mu), d.rho_vee())).max().unwrap_or(0);
        let (lam, _) = dominantize(d, &mu)?;
        r.check(big == best && big == 2 * d.pair_weight(&lam, d.rho_vee()), || format!("π^{mu}: orbit maximum"));
    }
    // Big length along root strings: strictly smaller inside the segment
    // from μ to s_β(μ), strictly larger outside it.
    let roots = d.positive_real_roots_up_to(cover.height);
    for mu in bx.coweights(d) {
        let big = big_length(d, &mu)?;
        for beta in &roots {
            let p = d.pair_root_coords(&mu, beta.coords());
            if p == 0 {
                continue;
            }
            let cor = d.coroot_of(beta)?;
            let reach = p.abs() + 2;
            for k in -reach..=reach {
                let nu = mu.add_scaled(-k, &cor);
                if !d.in_tits_cone(&nu) {
                    continue;
                }
                let t = Ratio::new(k, p);
                let got = big_length(d, &nu)?.cmp(&big);
                let want = if t == Ratio::from_integer(0) || t == Ratio::from_integer(1) {
                    std::cmp::Ordering::Equal
                } else if t > Ratio::from_integer(0) && t < Ratio::from_integer(1) {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
                r.check(got == want, || format!("μ = {mu}, β∨ = {beta}, k = {k}: big length {got:?}, t = {t}"));
            }
        }
    }
    // Signed inversion count over Inv(s_β).
    for beta in d.positive_real_roots_up_to(cover.height) {
        let s = WeylElt::reflection(d, &beta)?;
        let odd = s.len() % 2 == 1;
        for mu in bx.coweights(d) {
            let signed = small_length(d, &mu, &s.inverse(d));
            let pairing = d.pair_root_coords(&mu, beta.coords());
            r.check(odd && (signed > 0) == (pairing >= 0), || format!("μ = {mu}, β∨ = {beta}: signed inversion count or parity of Inv(s_β)"));
        }
    }
    if !d.is_affine() {
        let oracle = FiniteOracle::new(d, 2 * bx.max_len)?;
        for x in oracle.elements(2 * bx.max_len) {
            let l1 = length_t(d, &x, Ratio::from_integer(1))?;
            r.check(l1 == Ratio::from_integer(oracle.coxeter_length(&x)? as i64), || {
                format!("{}: ℓ_1 differs from the Coxeter length", x.render(d))
            });
        }
    }
    Ok(())
}

fn im(d: &RootDatum, bx: &ElementBox, r: &mut Report) -> Result<()> {
    let h = HeckeAlgebra::new(d);
    for x in bx.elements(d) {
        for i in 0..d.num_nodes() {
            let s = TitsElt::simple(d, i);
            let right = h.im_multiply_gen(&x, i, Side::Right).into_map() == h.structure_constants(&x, &s)?;
            r.check(right, || format!("T[{}]·T{}: generalized IM relation", x.render(d), d.label(i)));
            let left = h.im_multiply_gen(&x, i, Side::Left).into_map() == h.structure_constants(&s, &x)?;
            r.check(left, || format!("T{}·T[{}]: left IM relation", d.label(i), x.render(d)));
        }
    }
    Ok(())
}

fn oracle(d: &RootDatum, bx: &ElementBox, r: &mut Report) -> Result<()> {
    let h = HeckeAlgebra::new(d);
    let oracle = FiniteOracle::new(d, 2 * bx.max_len)?;
    let xs = oracle.elements(bx.max_len);
    for x in &xs {
        for y in &xs {
            let ok = h.structure_constants(x, y)? == oracle.product(x, y)?;
            r.check(ok, || format!("T[{}]·T[{}]: differs from the classical product", x.render(d), y.render(d)));
        }
    }
    Ok(())
}

/// A nonnegative integer at each prime power in `2..=5`.
pub fn is_counting_polynomial(c: &crate::laurent::LaurentPoly) -> bool {
    c.is_polynomial()
        && (2..=5).all(|q0| {
            c.eval_int(q0)
                .is_ok_and(|v| v.is_integer() && !v.to_integer().is_negative())
        })
}

fn polynomiality(d: &RootDatum, bx: &ElementBox, r: &mut Report) -> Result<()> {
    let h = HeckeAlgebra::new(d);
    let xs = bx.elements(d);
    for x in &xs {
        for y in &xs {
            let table = h.structure_constants(x, y)?;
            for (z, c) in &table {
                r.check(is_counting_polynomial(c) && !c.is_zero(), || {
                    format!("a^{}_{{{},{}}} = {c}", z.render(d), x.render(d), y.render(d))
                });
            }
        }
    }
    Ok(())
}

fn roundtrip(d: &RootDatum, bx: &ElementBox, r: &mut Report) -> Result<()> {
    let h = HeckeAlgebra::new(d);
    for x in bx.elements(d) {
        let back = h.to_coset(&h.coset_element(&x)?);
        let ok = matches!(&back, Ok(b) if b.len() == 1 && b.coeff(&x).is_one());
        r.check(ok, || match &back {
            Err(e) => format!("{}: {e}", x.render(d)),
            Ok(b) => format!("{}: round trip gave {}", x.render(d), b.render(d)),
        });
    }
    Ok(())
}
