//! The Tits DAHA at `v = q^{-1/2}`: Bernstein basis `Θ_μ T_w`, the double
//! coset basis `T_x`, conversion between them, and structure constants.
//!
//! Relations used:
//! - `(T_i + 1)(T_i - q) = 0`;
//! - `T_i Θ_μ = Θ_{s_i μ} T_i + (q - 1)(Θ_μ - Θ_{s_i μ}) / (1 - Θ_{-α_i})`;
//! - `T_{π^λ} = q^{⟨λ, ρ∨⟩} Θ_λ` for dominant `λ`;
//! - the Iwahori-Matsumoto dichotomies for `T_x T_i^{±1}` and `T_i^{±1} T_x`.

mod oracle;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::root_data::{Coweight, RootDatum};
use crate::tits::{enhanced_length, length_recursion_check, mul_simple_left, mul_simple_right, EnhLength, Side, TitsElt};
use crate::weyl::WeylElt;

pub use oracle::FiniteOracle;

/// Cap on elimination steps in [`HeckeAlgebra::to_coset`].
pub const ELIMINATION_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Index `(μ, w)` stands for `Θ_μ T_w`.
    Bernstein,
    /// Index `x` stands for `T_x`.
    Coset,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Bernstein => "bernstein",
            Basis::Coset => "coset",
        })
    }
}

/// A finite combination of basis elements with Laurent polynomial
/// coefficients. Both bases are indexed by pairs `(μ, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElt {
    basis: Basis,
    terms: BTreeMap<TitsElt, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero(basis: Basis) -> Self {
        HeckeElt { basis, terms: BTreeMap::new() }
    }

    pub fn basis_element(basis: Basis, x: TitsElt) -> Self {
        Self::term(basis, x, LaurentPoly::one())
    }

    pub fn term(basis: Basis, x: TitsElt, c: LaurentPoly) -> Self {
        let mut out = Self::zero(basis);
        out.add_term(x, &c);
        out
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TitsElt, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x: &TitsElt) -> LaurentPoly {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn into_map(self) -> BTreeMap<TitsElt, LaurentPoly> {
        self.terms
    }

    pub fn add_term(&mut self, x: TitsElt, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    fn add_scaled(&mut self, other: &HeckeElt, c: &LaurentPoly) {
        for (x, a) in &other.terms {
            self.add_term(x.clone(), &(a * c));
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> HeckeElt {
        let mut out = HeckeElt::zero(self.basis);
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &HeckeElt) -> Result<HeckeElt> {
        self.same_basis(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::one());
        Ok(out)
    }

    pub fn sub(&self, other: &HeckeElt) -> Result<HeckeElt> {
        self.same_basis(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-LaurentPoly::one());
        Ok(out)
    }

    fn same_basis(&self, other: &HeckeElt) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::Unsupported(format!("mixing {} and {} bases", self.basis, other.basis)));
        }
        Ok(())
    }

    fn expect_basis(&self, basis: Basis) -> Result<()> {
        if self.basis != basis {
            return Err(Error::Unsupported(format!("expected the {basis} basis, got {}", self.basis)));
        }
        Ok(())
    }

    pub fn to_json(&self, d: &RootDatum) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(x, c)| {
                serde_json::json!({
                    "mu": x.mu().coords(),
                    "word": x.w().word_string(d),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        serde_json::json!({ "basis": self.basis, "terms": terms })
    }

    pub fn from_json(d: &RootDatum, text: &str) -> Result<HeckeElt> {
        #[derive(Deserialize)]
        struct Term {
            mu: Vec<i64>,
            word: String,
            coeff: String,
        }
        #[derive(Deserialize)]
        struct Raw {
            basis: Basis,
            terms: Vec<Term>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = HeckeElt::zero(raw.basis);
        for t in raw.terms {
            let x = TitsElt::new(d, Coweight(t.mu), WeylElt::parse(d, &t.word)?)?;
            out.add_term(x, &t.coeff.parse()?);
        }
        Ok(out)
    }

    /// `Σ c·Θ_μ T_w` or `Σ c·T_x`, in index order.
    pub fn render(&self, d: &RootDatum) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(x, c)| {
                let idx = match self.basis {
                    Basis::Coset => format!("T[{}]", x.render(d)),
                    Basis::Bernstein => format!("Θ{}·T[{}]", x.mu(), x.w().word_string(d)),
                };
                format!("({c})·{idx}")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Hecke algebra operations over one root datum, with a memo of
/// [`HeckeAlgebra::coset_element`].
pub struct HeckeAlgebra<'d> {
    d: &'d RootDatum,
    cache: RwLock<HashMap<TitsElt, HeckeElt>>,
}

fn q_pow(k: i64) -> LaurentPoly {
    LaurentPoly::monomial(1, k as i32)
}

fn q_inv() -> LaurentPoly {
    q_pow(-1)
}

fn q_inv_minus_one() -> LaurentPoly {
    LaurentPoly::from_terms([(-1, 0), (1, -1)])
}

impl<'d> HeckeAlgebra<'d> {
    pub fn new(d: &'d RootDatum) -> Self {
        HeckeAlgebra { d, cache: RwLock::new(HashMap::new()) }
    }

    pub fn datum(&self) -> &'d RootDatum {
        self.d
    }

    fn bern(&self, mu: Coweight, w: WeylElt) -> TitsElt {
        TitsElt::new(self.d, mu, w).expect("Bernstein indices stay in the Tits cone")
    }

    /// `Θ_μ`
    pub fn theta(&self, mu: &Coweight) -> Result<HeckeElt> {
        let x = TitsElt::translation(self.d, mu.clone())?;
        Ok(HeckeElt::basis_element(Basis::Bernstein, x))
    }

    /// `T_w` for `w ∈ W`, in the Bernstein basis.
    pub fn t_weyl(&self, w: &WeylElt) -> HeckeElt {
        HeckeElt::basis_element(Basis::Bernstein, TitsElt::from_weyl(self.d, w.clone()))
    }

    /// `h·T_i` on the finite Hecke part: `T_w T_i = T_{w s_i}` when the
    /// length goes up, else `q T_{w s_i} + (q - 1) T_w`. Translation parts
    /// ride along on the left.
    pub fn hw_mul_gen(&self, h: &HeckeElt, i: usize, side: Side) -> Result<HeckeElt> {
        h.expect_basis(Basis::Bernstein)?;
        Ok(match side {
            Side::Right => self.right_gen(h, i),
            Side::Left => {
                if h.terms.keys().any(|x| !x.mu().is_zero()) {
                    return Err(Error::Unsupported("left multiplication expects a translation-free element".into()));
                }
                self.left_gen(i, h)
            }
        })
    }

    fn right_gen(&self, h: &HeckeElt, i: usize) -> HeckeElt {
        let mut out = HeckeElt::zero(Basis::Bernstein);
        for (x, c) in &h.terms {
            let ws = x.w().mul_simple_right(self.d, i);
            let xs = self.bern(x.mu().clone(), ws);
            if x.w().sends_simple_positive(i) {
                out.add_term(xs, c);
            } else {
                out.add_term(xs, &(c * &LaurentPoly::q()));
                out.add_term(x.clone(), &(c * &LaurentPoly::q_minus_one()));
            }
        }
        out
    }

    fn right_gen_inv(&self, h: &HeckeElt, i: usize) -> HeckeElt {
        let mut out = self.right_gen(h, i).scale(&q_inv());
        out.add_scaled(h, &q_inv_minus_one());
        out
    }

    /// `T_i Θ_μ` as `Σ c Θ_ν T_{u}` with `u ∈ {e, s_i}`.
    pub fn straighten(&self, i: usize, mu: &Coweight) -> Result<HeckeElt> {
        let d = self.d;
        let id = WeylElt::identity(d);
        let si = WeylElt::simple(d, i);
        let m = d.pair_simple(mu, i);
        let mut out = HeckeElt::zero(Basis::Bernstein);
        out.add_term(TitsElt::new(d, d.reflect_simple(i, mu), si)?, &LaurentPoly::one());
        let alpha = d.simple_coroot(i);
        if m >= 0 {
            for k in 0..m {
                out.add_term(TitsElt::new(d, mu.add_scaled(-k, alpha), id.clone())?, &LaurentPoly::q_minus_one());
            }
        } else {
            for k in 1..=-m {
                out.add_term(TitsElt::new(d, mu.add_scaled(k, alpha), id.clone())?, &-LaurentPoly::q_minus_one());
            }
        }
        Ok(out)
    }

    /// `T_i · h` for a Bernstein element.
    fn left_gen(&self, i: usize, h: &HeckeElt) -> HeckeElt {
        let d = self.d;
        let mut out = HeckeElt::zero(Basis::Bernstein);
        for (x, c) in &h.terms {
            let st = self.straighten(i, x.mu()).expect("straightening stays in the Tits cone");
            for (y, a) in &st.terms {
                let coef = c * a;
                if y.w().is_identity() {
                    out.add_term(self.bern(y.mu().clone(), x.w().clone()), &coef);
                } else if x.w().sends_simple_positive_inverse(d, i) {
                    out.add_term(self.bern(y.mu().clone(), x.w().mul_simple_left(d, i)), &coef);
                } else {
                    let siw = x.w().mul_simple_left(d, i);
                    out.add_term(self.bern(y.mu().clone(), siw), &(&coef * &LaurentPoly::q()));
                    out.add_term(self.bern(y.mu().clone(), x.w().clone()), &(&coef * &LaurentPoly::q_minus_one()));
                }
            }
        }
        out
    }

    fn left_gen_inv(&self, i: usize, h: &HeckeElt) -> HeckeElt {
        let mut out = self.left_gen(i, h).scale(&q_inv());
        out.add_scaled(h, &q_inv_minus_one());
        out
    }

    /// `T_w · h`
    fn left_weyl(&self, w: &WeylElt, h: &HeckeElt) -> HeckeElt {
        w.word().iter().rev().fold(h.clone(), |acc, &i| self.left_gen(i, &acc))
    }

    /// `T_w⁻¹ · h`
    fn left_weyl_inv(&self, w: &WeylElt, h: &HeckeElt) -> HeckeElt {
        w.word().iter().fold(h.clone(), |acc, &i| self.left_gen_inv(i, &acc))
    }

    /// `h · T_w`
    fn right_weyl(&self, h: &HeckeElt, w: &WeylElt) -> HeckeElt {
        w.word().iter().fold(h.clone(), |acc, &i| self.right_gen(&acc, i))
    }

    /// Product in the Bernstein basis: `T_w` is pushed through `b` letter by
    /// letter, then `Θ_μ` multiplies on the left.
    pub fn bernstein_mul(&self, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
        a.expect_basis(Basis::Bernstein)?;
        b.expect_basis(Basis::Bernstein)?;
        let mut pushed: HashMap<&WeylElt, HeckeElt> = HashMap::new();
        let mut out = HeckeElt::zero(Basis::Bernstein);
        for (x, c) in &a.terms {
            let tb = pushed.entry(x.w()).or_insert_with(|| self.left_weyl(x.w(), b));
            for (y, e) in &tb.terms {
                out.add_term(self.bern(x.mu().add(y.mu()), y.w().clone()), &(c * e));
            }
        }
        Ok(out)
    }

    /// `T_{π^μ}` with `μ = u⁻¹(λ)`, `λ` dominant: `T_u⁻¹ q^{⟨λ,ρ∨⟩} Θ_λ T_u`.
    fn coset_translation(&self, mu: &Coweight, u: &WeylElt) -> Result<HeckeElt> {
        let d = self.d;
        let lam = u.act_coweight(mu);
        if !d.is_dominant(&lam) {
            return Err(Error::OutOfRange(format!("{} does not dominantize {mu}", u.word_string(d))));
        }
        let base = self.theta(&lam)?.scale(&q_pow(d.pair_weight(&lam, d.rho_vee())));
        Ok(self.left_weyl_inv(u, &self.right_weyl(&base, u)))
    }

    /// `T_x` in the Bernstein basis, from a chosen dominantizing `u` and a
    /// reduced word of the Weyl part.
    pub fn coset_element_with(&self, x: &TitsElt, u: &WeylElt, word: &[usize]) -> Result<HeckeElt> {
        let d = self.d;
        if WeylElt::from_word(d, word)? != *x.w() || word.len() != x.w().len() {
            return Err(Error::OutOfRange(format!("{word:?} is not a reduced word of the Weyl part")));
        }
        let mut h = self.coset_translation(x.mu(), u)?;
        let mut cur = TitsElt::translation(d, x.mu().clone())?;
        for &i in word {
            h = if length_recursion_check(d, &cur, i, Side::Right) > 0 {
                self.right_gen(&h, i)
            } else {
                self.right_gen_inv(&h, i)
            };
            cur = mul_simple_right(d, &cur, i);
        }
        Ok(h)
    }

    /// `T_x` in the Bernstein basis (memoized). Built recursively:
    /// `T_{π^μ} = T_i⁻¹ T_{π^{s_i μ}} T_i` for the first `i` with
    /// `⟨μ, α_i∨⟩ < 0`, and `T_{x s_j} = T_x T_j^{±1}` along the Weyl part.
    pub fn coset_element(&self, x: &TitsElt) -> Result<HeckeElt> {
        if let Some(h) = self.cache.read().expect("cache lock").get(x) {
            return Ok(h.clone());
        }
        let d = self.d;
        let h = if let Some((&j, rest)) = x.w().word().split_last() {
            let prefix = TitsElt::new(d, x.mu().clone(), WeylElt::from_word(d, rest)?)?;
            let base = self.coset_element(&prefix)?;
            if length_recursion_check(d, &prefix, j, Side::Right) > 0 {
                self.right_gen(&base, j)
            } else {
                self.right_gen_inv(&base, j)
            }
        } else if let Some(i) = (0..d.num_nodes()).find(|&i| d.pair_simple(x.mu(), i) < 0) {
            let inner = TitsElt::translation(d, d.reflect_simple(i, x.mu()))?;
            let mid = self.right_gen(&self.coset_element(&inner)?, i);
            self.left_gen_inv(i, &mid)
        } else {
            let mu = x.mu();
            self.theta(mu)?.scale(&q_pow(d.pair_weight(mu, d.rho_vee())))
        };
        self.cache.write().expect("cache lock").entry(x.clone()).or_insert_with(|| h.clone());
        Ok(h)
    }

    /// Coset element to Bernstein expansion, summed linearly.
    pub fn to_bernstein(&self, h: &HeckeElt) -> Result<HeckeElt> {
        h.expect_basis(Basis::Coset)?;
        let mut out = HeckeElt::zero(Basis::Bernstein);
        for (x, c) in &h.terms {
            out.add_scaled(&self.coset_element(x)?, c);
        }
        Ok(out)
    }

    /// Greedy triangular elimination. The largest remaining Bernstein index
    /// `(μ, w)` under `(ℓ(π^μ w), index)` is cancelled with a multiple of
    /// `T_{π^μ w}`, whose coefficient there must be a unit `±q^k`.
    pub fn to_coset(&self, h: &HeckeElt) -> Result<HeckeElt> {
        h.expect_basis(Basis::Bernstein)?;
        let d = self.d;
        let mut lengths: HashMap<TitsElt, EnhLength> = HashMap::new();
        let mut key = |x: &TitsElt| -> (EnhLength, TitsElt) {
            let l = *lengths.entry(x.clone()).or_insert_with(|| enhanced_length(d, x));
            (l, x.clone())
        };
        let mut rest: BTreeMap<(EnhLength, TitsElt), LaurentPoly> = BTreeMap::new();
        for (x, c) in &h.terms {
            rest.insert(key(x), c.clone());
        }
        let mut out = HeckeElt::zero(Basis::Coset);
        let mut steps = 0;
        while let Some((top, c)) = rest.last_key_value().map(|(k, v)| (k.clone(), v.clone())) {
            steps += 1;
            if steps > ELIMINATION_CAP {
                return Err(Error::Elimination(format!("step cap reached at {}", top.1.render(d))));
            }
            let x = &top.1;
            let ce = self.coset_element(x)?;
            let lead = ce.coeff(x);
            let Some((sign, k)) = lead.as_unit() else {
                return Err(Error::Elimination(format!(
                    "coefficient of Θ{}·T[{}] in T[{}] is {lead}, not a unit",
                    x.mu(),
                    x.w().word_string(d),
                    x.render(d)
                )));
            };
            let factor = c.mul_unit(sign, -k);
            out.add_term(x.clone(), &factor);
            for (y, a) in &ce.terms {
                let ky = key(y);
                let slot = rest.entry(ky.clone()).or_default();
                *slot -= &(a * &factor);
                if slot.is_zero() {
                    rest.remove(&ky);
                }
            }
            if rest.contains_key(&top) {
                return Err(Error::Elimination(format!("term {} did not cancel", x.render(d))));
            }
            if let Some((bad, _)) = rest.range(top.clone()..).next() {
                return Err(Error::Elimination(format!(
                    "eliminating {} produced larger term {} of length {}",
                    x.render(d),
                    bad.1.render(d),
                    bad.0
                )));
            }
        }
        Ok(out)
    }

    /// `T_x T_y = Σ a^z_{x,y} T_z`.
    pub fn structure_constants(&self, x: &TitsElt, y: &TitsElt) -> Result<BTreeMap<TitsElt, LaurentPoly>> {
        let prod = self.bernstein_mul(&self.coset_element(x)?, &self.coset_element(y)?)?;
        Ok(self.to_coset(&prod)?.into_map())
    }

    /// Product of two coset-basis elements.
    pub fn coset_mul(&self, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
        a.expect_basis(Basis::Coset)?;
        b.expect_basis(Basis::Coset)?;
        let prod = self.bernstein_mul(&self.to_bernstein(a)?, &self.to_bernstein(b)?)?;
        self.to_coset(&prod)
    }

    /// `T_x T_i` (right) or `T_i T_x` (left) directly from the
    /// Iwahori-Matsumoto dichotomy.
    pub fn im_multiply_gen(&self, x: &TitsElt, i: usize, side: Side) -> HeckeElt {
        let d = self.d;
        let moved = match side {
            Side::Right => mul_simple_right(d, x, i),
            Side::Left => mul_simple_left(d, i, x),
        };
        let mut out = HeckeElt::zero(Basis::Coset);
        if length_recursion_check(d, x, i, side) > 0 {
            out.add_term(moved, &LaurentPoly::one());
        } else {
            out.add_term(moved, &LaurentPoly::q());
            out.add_term(x.clone(), &LaurentPoly::q_minus_one());
        }
        out
    }

    /// Left or right multiplication of a Bernstein element by `T_i^{±1}`.
    pub fn mul_gen(&self, h: &HeckeElt, i: usize, side: Side, inverse: bool) -> Result<HeckeElt> {
        h.expect_basis(Basis::Bernstein)?;
        Ok(match (side, inverse) {
            (Side::Right, false) => self.right_gen(h, i),
            (Side::Right, true) => self.right_gen_inv(h, i),
            (Side::Left, false) => self.left_gen(i, h),
            (Side::Left, true) => self.left_gen_inv(i, h),
        })
    }
}

/// CSV rows `x,y,z,polynomial` for a table of structure constants.
pub fn structure_constants_csv<'a>(
    d: &RootDatum,
    rows: impl IntoIterator<Item = (&'a TitsElt, &'a TitsElt, &'a BTreeMap<TitsElt, LaurentPoly>)>,
) -> String {
    let mut out = String::from("x,y,z,polynomial\n");
    for (x, y, table) in rows {
        for (z, c) in table {
            out.push_str(&format!("{},{},{},{}\n", csv_field(&x.render(d)), csv_field(&y.render(d)), csv_field(&z.render(d)), csv_field(&c.to_string())));
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
