//! The semigroup `W ⋉ 𝒯`, its enhanced length, double affine roots and
//! reflections, and the two reflection-generated orders.
//!
//! An element `π^μ w` multiplies by `(π^μ w)(π^ν v) = π^{μ + w(ν)} (wv)`.
//! Lengths take values in `Z ⊕ Zε`, ordered lexicographically.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_data::{Coweight, RootDatum, RootSign, RootVector};
use crate::weyl::{dominantize, WeylElt};

/// `π^μ w` with `μ` in the Tits cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TitsElt {
    mu: Coweight,
    w: WeylElt,
}

impl TitsElt {
    pub fn new(d: &RootDatum, mu: Coweight, w: WeylElt) -> Result<Self> {
        if mu.dim() != d.rank_p() {
            return Err(Error::DimensionMismatch { expected: d.rank_p(), found: mu.dim() });
        }
        if !d.in_tits_cone(&mu) {
            return Err(Error::NotInTitsCone(mu.0));
        }
        Ok(TitsElt { mu, w })
    }

    pub fn identity(d: &RootDatum) -> Self {
        TitsElt { mu: Coweight::zero(d.rank_p()), w: WeylElt::identity(d) }
    }

    pub fn translation(d: &RootDatum, mu: Coweight) -> Result<Self> {
        Self::new(d, mu, WeylElt::identity(d))
    }

    pub fn from_weyl(d: &RootDatum, w: WeylElt) -> Self {
        TitsElt { mu: Coweight::zero(d.rank_p()), w }
    }

    pub fn simple(d: &RootDatum, i: usize) -> Self {
        Self::from_weyl(d, WeylElt::simple(d, i))
    }

    pub fn mu(&self) -> &Coweight {
        &self.mu
    }

    pub fn w(&self) -> &WeylElt {
        &self.w
    }

    pub fn into_parts(self) -> (Coweight, WeylElt) {
        (self.mu, self.w)
    }

    pub fn level(&self, d: &RootDatum) -> Result<i64> {
        d.level(&self.mu)
    }

    /// Parses `pi[2,0,1]*s0*s1`, `pi[…]`, `s0*s1` or `e`.
    pub fn parse(d: &RootDatum, text: &str) -> Result<Self> {
        let text = text.trim();
        let (mu, rest) = if let Some(body) = text.strip_prefix("pi[") {
            let close = body
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unterminated coweight in `{text}`")))?;
            let coords = body[..close]
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("bad coweight in `{text}`: {e}")))?;
            let rest = body[close + 1..].trim();
            let rest = match rest.strip_prefix('*') {
                Some(r) => r,
                None if rest.is_empty() => "",
                None => return Err(Error::Parse(format!("expected `*` after coweight in `{text}`"))),
            };
            (Coweight(coords), rest)
        } else {
            (Coweight::zero(d.rank_p()), text)
        };
        let w = WeylElt::parse(d, rest)?;
        Self::new(d, mu, w)
    }

    pub fn render(&self, d: &RootDatum) -> String {
        match (self.mu.is_zero(), self.w.is_identity()) {
            (true, _) => self.w.word_string(d),
            (false, true) => format!("pi{}", self.mu),
            (false, false) => format!("pi{}*{}", self.mu, self.w.word_string(d)),
        }
    }
}

/// `(π^μ w)(π^ν v) = π^{μ + w(ν)} (wv)`
pub fn multiply(d: &RootDatum, x: &TitsElt, y: &TitsElt) -> TitsElt {
    TitsElt { mu: x.mu.add(&x.w.act_coweight(&y.mu)), w: x.w.compose(d, &y.w) }
}

/// `x s_i`
pub fn mul_simple_right(d: &RootDatum, x: &TitsElt, i: usize) -> TitsElt {
    TitsElt { mu: x.mu.clone(), w: x.w.mul_simple_right(d, i) }
}

/// `s_i x`
pub fn mul_simple_left(d: &RootDatum, i: usize, x: &TitsElt) -> TitsElt {
    TitsElt { mu: d.reflect_simple(i, &x.mu), w: x.w.mul_simple_left(d, i) }
}

/// `big + small·ε`, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EnhLength {
    pub big: i64,
    pub small: i64,
}

impl EnhLength {
    pub fn new(big: i64, small: i64) -> Self {
        EnhLength { big, small }
    }

    pub fn shift_small(self, by: i64) -> Self {
        EnhLength { big: self.big, small: self.small + by }
    }
}

impl fmt::Display for EnhLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.small < 0 {
            write!(f, "{} - {}ε", self.big, -self.small)
        } else {
            write!(f, "{} + {}ε", self.big, self.small)
        }
    }
}

/// `ℓ(π^μ) = 2⟨λ, ρ∨⟩` with `λ` the dominant representative of `W μ`.
pub fn big_length(d: &RootDatum, mu: &Coweight) -> Result<i64> {
    let (lam, _) = dominantize(d, mu)?;
    Ok(2 * d.pair_weight(&lam, d.rho_vee()))
}

/// Signed count over `β∨ ∈ Inv(w⁻¹)`: `+1` when `⟨μ, β∨⟩ ≥ 0`, `-1` otherwise.
pub fn small_length(d: &RootDatum, mu: &Coweight, w: &WeylElt) -> i64 {
    w.inverse(d)
        .inversion_set(d)
        .iter()
        .map(|b| if d.pair_root_coords(mu, b.coords()) >= 0 { 1 } else { -1 })
        .sum()
}

pub fn enhanced_length(d: &RootDatum, x: &TitsElt) -> EnhLength {
    let big = big_length(d, &x.mu).expect("Tits elements have coweights in the Tits cone");
    EnhLength { big, small: small_length(d, &x.mu, &x.w) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The `ε`-increment of `ℓ` under `x ↦ x s_i` (right) or `x ↦ s_i x` (left),
/// as predicted by the Iwahori-Matsumoto dichotomy. Right: the sign of
/// `⟨μ, w(α_i∨)⟩`. Left: the sign of `-⟨μ, α_i∨⟩`, since
/// `s_i π^{s_i λ} = π^λ s_i` is the longer one for dominant `λ`. Ties are
/// broken by the sign of `w(α_i∨)` (right) or `w⁻¹(α_i∨)` (left).
pub fn length_recursion_check(d: &RootDatum, x: &TitsElt, i: usize, side: Side) -> i64 {
    let (m, tie_positive) = match side {
        Side::Right => {
            let root = x.w.image_of_simple_root(i);
            (d.pair_root_coords(&x.mu, &root), root.iter().sum::<i64>() > 0)
        }
        Side::Left => (-d.pair_simple(&x.mu, i), x.w.sends_simple_positive_inverse(d, i)),
    };
    match m.cmp(&0) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal if tie_positive => 1,
        Ordering::Equal => -1,
    }
}

/// `ℓ_t = big + t·small` for `t ∈ (0, 1]`.
pub fn length_t(d: &RootDatum, x: &TitsElt, t: Ratio<i64>) -> Result<Ratio<i64>> {
    if t <= Ratio::from_integer(0) || t > Ratio::from_integer(1) {
        return Err(Error::OutOfRange(format!("t = {t} is outside (0, 1]")));
    }
    let l = enhanced_length(d, x);
    Ok(Ratio::from_integer(l.big) + t * Ratio::from_integer(l.small))
}

/// `β∨ + nπ` with `β∨` a real root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoubleAffineRoot {
    pub root: RootVector,
    pub n: i64,
}

impl DoubleAffineRoot {
    pub fn new(root: RootVector, n: i64) -> Self {
        DoubleAffineRoot { root, n }
    }

    /// Positive iff `β∨ > 0, n ≥ 0` or `β∨ < 0, n > 0`.
    pub fn is_positive(&self) -> bool {
        match self.root.sign() {
            Ok(RootSign::Positive) => self.n >= 0,
            Ok(RootSign::Negative) => self.n > 0,
            Err(_) => false,
        }
    }
}

impl fmt::Display for DoubleAffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}π", self.root, self.n)
    }
}

/// An element `π^μ w` of `W ⋉ P`; the translation may leave the Tits cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffinePair {
    pub mu: Coweight,
    pub w: WeylElt,
}

/// `s_{β∨+nπ} = π^{nβ} s_β`, where `β` is the coroot of the (signed) root
/// `β∨`. For `β∨ < 0` this is `π^{-n|β|} s_β`.
pub fn reflection_of(d: &RootDatum, r: &DoubleAffineRoot) -> Result<AffinePair> {
    if !r.is_positive() {
        return Err(Error::OutOfRange(format!("{r} is not a positive double affine root")));
    }
    let coroot = d.coroot_of(&r.root)?;
    Ok(AffinePair { mu: coroot.scale(r.n), w: WeylElt::reflection(d, &r.root)? })
}

/// `π^μ w (γ∨ + nπ) = w(γ∨) + (n + ⟨μ, w(γ∨)⟩)π`
pub fn act_on_daroot(d: &RootDatum, mu: &Coweight, w: &WeylElt, r: &DoubleAffineRoot) -> DoubleAffineRoot {
    let image = w.act_root_vector(&r.root);
    let n = r.n + d.pair_root_coords(mu, image.coords());
    DoubleAffineRoot { root: image, n }
}

/// `x · (π^ν u)`, if it lands in `W ⋉ 𝒯`.
pub fn apply_pair(d: &RootDatum, x: &TitsElt, s: &AffinePair) -> Option<TitsElt> {
    let mu = x.mu.add(&x.w.act_coweight(&s.mu));
    d.in_tits_cone(&mu).then(|| TitsElt { mu, w: x.w.compose(d, &s.w) })
}

/// Bounds for reflection enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverBounds {
    /// Maximal height of `|β∨|`.
    pub height: i64,
    /// Maximal `n`.
    pub n: i64,
}

impl Default for CoverBounds {
    fn default() -> Self {
        CoverBounds { height: 6, n: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub root: DoubleAffineRoot,
    pub target: TitsElt,
    /// Direction under the length order.
    pub direction: Direction,
    /// Direction under the positivity order: up iff `x(r) > 0`.
    pub positivity_direction: Direction,
    pub agree: bool,
    pub length_from: EnhLength,
    pub length_to: EnhLength,
}

/// Precomputed positive double affine roots and their reflections within bounds.
pub struct ReflectionSet {
    bounds: CoverBounds,
    items: Vec<(DoubleAffineRoot, AffinePair)>,
}

impl ReflectionSet {
    pub fn new(d: &RootDatum, bounds: CoverBounds) -> Result<Self> {
        if bounds.height < 1 || bounds.n < 1 {
            return Err(Error::OutOfRange("cover bounds must be at least 1".into()));
        }
        let mut items = Vec::new();
        for root in d.positive_real_roots_up_to(bounds.height) {
            for n in 0..=bounds.n {
                let r = DoubleAffineRoot::new(root.clone(), n);
                let s = reflection_of(d, &r)?;
                items.push((r, s));
            }
            let neg = root.negate();
            for n in 1..=bounds.n {
                let r = DoubleAffineRoot::new(neg.clone(), n);
                let s = reflection_of(d, &r)?;
                items.push((r, s));
            }
        }
        Ok(ReflectionSet { bounds, items })
    }

    pub fn bounds(&self) -> CoverBounds {
        self.bounds
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(DoubleAffineRoot, AffinePair)> {
        self.items.iter()
    }

    /// Every `x s_r` in `W ⋉ 𝒯` for the reflections in the set, with both
    /// order directions and whether they agree.
    pub fn covers(&self, d: &RootDatum, x: &TitsElt) -> Vec<Cover> {
        let from = enhanced_length(d, x);
        let mut out = Vec::new();
        for (r, s) in &self.items {
            let Some(target) = apply_pair(d, x, s) else { continue };
            let to = enhanced_length(d, &target);
            let direction = if to > from { Direction::Up } else { Direction::Down };
            let positivity_direction =
                if act_on_daroot(d, &x.mu, &x.w, r).is_positive() { Direction::Up } else { Direction::Down };
            out.push(Cover {
                root: r.clone(),
                target,
                direction,
                positivity_direction,
                agree: direction == positivity_direction,
                length_from: from,
                length_to: to,
            });
        }
        out
    }
}

pub fn covers(d: &RootDatum, x: &TitsElt, bounds: CoverBounds) -> Result<Vec<Cover>> {
    Ok(ReflectionSet::new(d, bounds)?.covers(d, x))
}

/// Search budget for bounded order comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub cover: CoverBounds,
    /// Intermediate coweights must have all coordinates in `[-box, box]`
    /// (widened to contain the endpoints).
    pub coweight_box: i64,
    /// Cap on visited elements.
    pub max_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { cover: CoverBounds::default(), coweight_box: 4, max_nodes: 20_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoReason {
    LevelMismatch,
    LengthGrading,
    ExhaustedBounds,
}

impl fmt::Display for NoReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoReason::LevelMismatch => "level mismatch",
            NoReason::LengthGrading => "length grading",
            NoReason::ExhaustedBounds => "no chain within bounds",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// A chain of up-covers from the smaller to the larger element.
    Yes(Vec<TitsElt>),
    NoWithinBounds(NoReason),
}

fn box_radius(budget: &SearchBudget, ends: &[&TitsElt]) -> i64 {
    ends.iter()
        .flat_map(|x| x.mu.coords().iter().map(|c| c.abs()))
        .fold(budget.coweight_box, i64::max)
}

fn in_box(x: &TitsElt, radius: i64) -> bool {
    x.mu.coords().iter().all(|c| c.abs() <= radius)
}

fn same_level(d: &RootDatum, a: &TitsElt, b: &TitsElt) -> bool {
    !d.is_affine() || a.level(d).ok() == b.level(d).ok()
}

/// Bounded search for `y ≤ x`: a chain of length-increasing reflection
/// covers from `y` to `x` whose lengths stay in `[ℓ(y), ℓ(x)]` and whose
/// coweights stay in the box.
pub fn less_or_equal(d: &RootDatum, y: &TitsElt, x: &TitsElt, budget: SearchBudget) -> Result<Comparison> {
    if !same_level(d, y, x) {
        return Ok(Comparison::NoWithinBounds(NoReason::LevelMismatch));
    }
    if y == x {
        return Ok(Comparison::Yes(vec![y.clone()]));
    }
    let (ly, lx) = (enhanced_length(d, y), enhanced_length(d, x));
    if lx <= ly {
        return Ok(Comparison::NoWithinBounds(NoReason::LengthGrading));
    }
    let refl = ReflectionSet::new(d, budget.cover)?;
    let radius = box_radius(&budget, &[x, y]);
    let mut parent: HashMap<TitsElt, TitsElt> = HashMap::new();
    let mut queue = VecDeque::from([y.clone()]);
    let mut seen = HashSet::from([y.clone()]);
    while let Some(z) = queue.pop_front() {
        for c in refl.covers(d, &z) {
            if c.direction != Direction::Up || c.length_to > lx || !in_box(&c.target, radius) {
                continue;
            }
            if !seen.insert(c.target.clone()) {
                continue;
            }
            parent.insert(c.target.clone(), z.clone());
            if c.target == *x {
                let mut chain = vec![x.clone()];
                while let Some(p) = parent.get(chain.last().unwrap()) {
                    chain.push(p.clone());
                }
                chain.reverse();
                return Ok(Comparison::Yes(chain));
            }
            if seen.len() >= budget.max_nodes {
                return Ok(Comparison::NoWithinBounds(NoReason::ExhaustedBounds));
            }
            queue.push_back(c.target);
        }
    }
    Ok(Comparison::NoWithinBounds(NoReason::ExhaustedBounds))
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub root: DoubleAffineRoot,
    pub agree: bool,
}

/// Nodes and labelled reflection edges, with the bounds that produced them.
#[derive(Clone, Debug)]
pub struct CoverGraph {
    pub nodes: Vec<TitsElt>,
    pub edges: Vec<GraphEdge>,
    pub bounds: CoverBounds,
}

impl CoverGraph {
    /// `x` and all of its covers (both directions).
    pub fn of_covers(d: &RootDatum, x: &TitsElt, bounds: CoverBounds) -> Result<Self> {
        let mut nodes = vec![x.clone()];
        let mut index: HashMap<TitsElt, usize> = HashMap::from([(x.clone(), 0)]);
        let mut edges = Vec::new();
        for c in covers(d, x, bounds)? {
            let k = *index.entry(c.target.clone()).or_insert_with(|| {
                nodes.push(c.target.clone());
                nodes.len() - 1
            });
            let (from, to) = match c.direction {
                Direction::Up => (0, k),
                Direction::Down => (k, 0),
            };
            edges.push(GraphEdge { from, to, root: c.root, agree: c.agree });
        }
        Ok(CoverGraph { nodes, edges, bounds })
    }

    /// Elements between `y` and `x` reachable by bounded up-cover chains.
    pub fn interval(d: &RootDatum, y: &TitsElt, x: &TitsElt, budget: SearchBudget) -> Result<Option<Self>> {
        if !same_level(d, y, x) {
            return Ok(None);
        }
        let lx = enhanced_length(d, x);
        let refl = ReflectionSet::new(d, budget.cover)?;
        let radius = box_radius(&budget, &[x, y]);
        // Forward closure from y below ℓ(x).
        let mut order = vec![y.clone()];
        let mut seen = HashSet::from([y.clone()]);
        let mut raw_edges: Vec<(TitsElt, TitsElt, DoubleAffineRoot, bool)> = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let z = order[head].clone();
            head += 1;
            if z == *x {
                continue;
            }
            for c in refl.covers(d, &z) {
                if c.direction != Direction::Up || c.length_to > lx || !in_box(&c.target, radius) {
                    continue;
                }
                raw_edges.push((z.clone(), c.target.clone(), c.root, c.agree));
                if seen.len() < budget.max_nodes && seen.insert(c.target.clone()) {
                    order.push(c.target);
                }
            }
        }
        if !seen.contains(x) {
            return Ok(Some(CoverGraph { nodes: Vec::new(), edges: Vec::new(), bounds: budget.cover }));
        }
        // Keep the nodes that reach x.
        let mut reaches: HashSet<TitsElt> = HashSet::from([x.clone()]);
        loop {
            let before = reaches.len();
            for (a, b, _, _) in &raw_edges {
                if reaches.contains(b) {
                    reaches.insert(a.clone());
                }
            }
            if reaches.len() == before {
                break;
            }
        }
        let nodes: Vec<TitsElt> = order.into_iter().filter(|z| reaches.contains(z)).collect();
        let index: HashMap<&TitsElt, usize> = nodes.iter().enumerate().map(|(k, z)| (z, k)).collect();
        let mut edges = Vec::new();
        let mut dedup = BTreeSet::new();
        for (a, b, r, agree) in raw_edges {
            if let (Some(&from), Some(&to)) = (index.get(&a), index.get(&b)) {
                if dedup.insert((from, to)) {
                    edges.push(GraphEdge { from, to, root: r, agree });
                }
            }
        }
        Ok(Some(CoverGraph { nodes, edges, bounds: budget.cover }))
    }

    pub fn to_json(&self, d: &RootDatum) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .map(|x| {
                let l = enhanced_length(d, x);
                serde_json::json!({
                    "mu": x.mu.coords(),
                    "word": x.w.word_string(d),
                    "length": { "big": l.big, "small": l.small },
                })
            })
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "from": e.from,
                    "to": e.to,
                    "root": { "beta": e.root.root.coords(), "n": e.root.n },
                    "agree": e.agree,
                })
            })
            .collect();
        serde_json::json!({
            "bounds": { "height": self.bounds.height, "n": self.bounds.n },
            "nodes": nodes,
            "edges": edges,
        })
    }

    pub fn to_dot(&self, d: &RootDatum) -> String {
        let mut out = String::from("digraph covers {\n");
        out.push_str(&format!(
            "  graph [label=\"height <= {}, n <= {}\"];\n",
            self.bounds.height, self.bounds.n
        ));
        for (k, x) in self.nodes.iter().enumerate() {
            out.push_str(&format!(
                "  n{k} [label=\"{}\\n{}\"];\n",
                x.render(d),
                enhanced_length(d, x)
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\", agree={}];\n",
                e.from, e.to, e.root, e.agree
            ));
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for DoubleAffineRoot {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DoubleAffineRoot", 2)?;
        st.serialize_field("beta", self.root.coords())?;
        st.serialize_field("n", &self.n)?;
        st.end()
    }
}

/// All `π^μ w` with `μ` in the Tits cone, every coordinate of `μ` in
/// `[lo, hi]`, `μ` passing `keep`, and `ℓ_cox(w) ≤ max_len`.
pub fn elements_in_box(
    d: &RootDatum,
    lo: i64,
    hi: i64,
    max_len: usize,
    keep: impl Fn(&Coweight) -> bool,
) -> Vec<TitsElt> {
    let ws = crate::weyl::elements_up_to_length(d, max_len);
    let mut out = Vec::new();
    for mu in coweights_in_box(d.rank_p(), lo, hi) {
        if !d.in_tits_cone(&mu) || !keep(&mu) {
            continue;
        }
        for w in &ws {
            out.push(TitsElt { mu: mu.clone(), w: w.clone() });
        }
    }
    out
}

pub fn coweights_in_box(dim: usize, lo: i64, hi: i64) -> Vec<Coweight> {
    let mut out = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (lo..=hi).map(move |c| {
                    let mut v = v.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Coweight).collect()
}
