//! Weyl group elements as exact integer matrices.
//!
//! A [`WeylElt`] carries its action on `P` (the faithful representation that
//! defines identity), its action on simple-root coordinates, and a cached
//! reduced word. The cached word depends on how the element was built;
//! rendering always uses the canonical word (right descents peeled smallest
//! index first), so equal elements render the same way.
//! Words are read left to right as products, so `[i, j]` is
//! `s_i s_j` and acts by applying `s_j` first.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::root_data::{root_sign, Coweight, RootDatum, RootSign, RootVector, Witness};

/// Cap on descent peeling and dominantization loops.
pub const ITERATION_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct WeylElt {
    dim: usize,
    nodes: usize,
    /// Row-major action on `P`.
    p: Vec<i64>,
    /// Row-major action on simple-root coordinates.
    r: Vec<i64>,
    word: Vec<usize>,
}

impl PartialEq for WeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}
impl Eq for WeylElt {}
impl Hash for WeylElt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state)
    }
}
impl PartialOrd for WeylElt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for WeylElt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p.cmp(&other.p)
    }
}

fn identity_matrix(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for k in 0..n {
        m[k * n + k] = 1;
    }
    m
}

impl WeylElt {
    pub fn identity(d: &RootDatum) -> Self {
        let (dim, nodes) = (d.rank_p(), d.num_nodes());
        WeylElt { dim, nodes, p: identity_matrix(dim), r: identity_matrix(nodes), word: Vec::new() }
    }

    pub fn simple(d: &RootDatum, i: usize) -> Self {
        Self::identity(d).mul_simple_right(d, i)
    }

    /// Product of the simple reflections in `word`. The stored word is
    /// recomputed, so non-reduced input is fine.
    pub fn from_word(d: &RootDatum, word: &[usize]) -> Result<Self> {
        if let Some(&bad) = word.iter().find(|&&i| i >= d.num_nodes()) {
            return Err(Error::OutOfRange(format!("node index {bad}")));
        }
        Ok(word.iter().fold(Self::identity(d), |w, &i| w.mul_simple_right(d, i)))
    }

    /// Parses `"s1*s0*s1"` (or `"e"` / `""` for the identity) using node labels.
    pub fn parse(d: &RootDatum, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(Self::identity(d));
        }
        let mut word = Vec::new();
        for tok in text.split('*') {
            let tok = tok.trim();
            let label = tok
                .strip_prefix('s')
                .ok_or_else(|| Error::Parse(format!("expected `s<label>`, got `{tok}`")))?;
            word.push(d.node_index(label)?);
        }
        Self::from_word(d, &word)
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Cached `ℓ_cox`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word_string(&self, d: &RootDatum) -> String {
        render_word(d, &self.canonical_word(d))
    }

    /// The reduced word obtained by peeling right descents, smallest index first.
    pub fn canonical_word(&self, d: &RootDatum) -> Vec<usize> {
        self.peel_word(d).expect("genuine group elements terminate")
    }

    /// Matrix of the action on `P`, as rows.
    pub fn matrix_p(&self) -> Vec<Vec<i64>> {
        self.p.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn act_coweight(&self, mu: &Coweight) -> Coweight {
        let n = self.dim;
        Coweight((0..n).map(|a| (0..n).map(|b| self.p[a * n + b] * mu.0[b]).sum()).collect())
    }

    /// Action on a root in simple-root coordinates.
    pub fn act_root(&self, root: &[i64]) -> Vec<i64> {
        let k = self.nodes;
        (0..k).map(|a| (0..k).map(|b| self.r[a * k + b] * root[b]).sum()).collect()
    }

    /// Action on a root, extending the witness word.
    pub fn act_root_vector(&self, root: &RootVector) -> RootVector {
        let coords = self.act_root(root.coords());
        let witness = root.witness().map(|w| {
            let mut word = self.word.clone();
            word.extend_from_slice(&w.word);
            Witness { word, node: w.node }
        });
        RootVector::new(coords, witness)
    }

    /// `w(α_i∨)` in simple-root coordinates: column `i` of the root matrix.
    pub fn image_of_simple_root(&self, i: usize) -> Vec<i64> {
        let k = self.nodes;
        (0..k).map(|a| self.r[a * k + i]).collect()
    }

    /// `ℓ(w s_i) > ℓ(w)`, i.e. `w(α_i∨) > 0`.
    pub fn sends_simple_positive(&self, i: usize) -> bool {
        let k = self.nodes;
        // Real roots have uniform sign; the column sum decides.
        (0..k).map(|a| self.r[a * k + i]).sum::<i64>() > 0
    }

    #[allow(clippy::needless_range_loop)]
    fn right_multiply_matrices(&mut self, d: &RootDatum, i: usize) {
        let n = self.dim;
        let alpha = d.simple_coroot(i).coords();
        let alpha_v = d.simple_root_weight(i);
        // P: M ← M (I − α_i ⊗ α_i∨)
        let m_alpha: Vec<i64> = (0..n).map(|a| (0..n).map(|c| self.p[a * n + c] * alpha[c]).sum()).collect();
        for a in 0..n {
            for b in 0..n {
                self.p[a * n + b] -= m_alpha[a] * alpha_v[b];
            }
        }
        // Root coordinates: column b ← col b − col i · A[i][b]
        let k = self.nodes;
        let col_i: Vec<i64> = (0..k).map(|a| self.r[a * k + i]).collect();
        for b in 0..k {
            let c = d.cartan(i, b);
            if c != 0 {
                for a in 0..k {
                    self.r[a * k + b] -= col_i[a] * c;
                }
            }
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn left_multiply_matrices(&mut self, d: &RootDatum, i: usize) {
        let n = self.dim;
        let alpha = d.simple_coroot(i).coords();
        let alpha_v = d.simple_root_weight(i);
        // P: M ← (I − α_i ⊗ α_i∨) M
        let row: Vec<i64> = (0..n).map(|b| (0..n).map(|c| alpha_v[c] * self.p[c * n + b]).sum()).collect();
        for a in 0..n {
            for b in 0..n {
                self.p[a * n + b] -= alpha[a] * row[b];
            }
        }
        // Root coordinates: row i ← row i − Σ_c A[i][c] row c
        let k = self.nodes;
        let sub: Vec<i64> = (0..k).map(|b| (0..k).map(|c| d.cartan(i, c) * self.r[c * k + b]).sum()).collect();
        for b in 0..k {
            self.r[i * k + b] -= sub[b];
        }
    }

    /// `w s_i`
    pub fn mul_simple_right(&self, d: &RootDatum, i: usize) -> Self {
        let up = self.sends_simple_positive(i);
        let mut out = self.clone();
        out.right_multiply_matrices(d, i);
        if up {
            out.word.push(i);
        } else {
            out.word = out.canonical_word(d);
        }
        out
    }

    /// `s_i w`
    pub fn mul_simple_left(&self, d: &RootDatum, i: usize) -> Self {
        let up = self.sends_simple_positive_inverse(d, i);
        let mut out = self.clone();
        out.left_multiply_matrices(d, i);
        if up {
            out.word.insert(0, i);
        } else {
            out.word = out.canonical_word(d);
        }
        out
    }

    /// `w⁻¹(α_i∨) > 0`, i.e. `ℓ(s_i w) > ℓ(w)`.
    pub fn sends_simple_positive_inverse(&self, d: &RootDatum, i: usize) -> bool {
        // w⁻¹ = s_{ik}…s_{i1}, so s_{i1} acts first.
        let mut root = vec![0; self.nodes];
        root[i] = 1;
        for &j in &self.word {
            root = d.reflect_root(j, &root);
        }
        root.iter().sum::<i64>() > 0
    }

    /// Reduced word by peeling right descents, smallest index first.
    fn peel_word(&self, d: &RootDatum) -> Result<Vec<usize>> {
        let mut cur = self.clone();
        let mut rev = Vec::new();
        while let Some(i) = (0..self.nodes).find(|&i| !cur.sends_simple_positive(i)) {
            cur.right_multiply_matrices(d, i);
            rev.push(i);
            if rev.len() > ITERATION_CAP {
                return Err(Error::IterationCap("descent peeling did not reach the identity".into()));
            }
        }
        rev.reverse();
        Ok(rev)
    }

    /// `ℓ_cox(w)`, recomputed from the matrix by descent peeling.
    pub fn coxeter_length(&self, d: &RootDatum) -> Result<usize> {
        Ok(self.peel_word(d)?.len())
    }

    pub fn compose(&self, d: &RootDatum, other: &WeylElt) -> WeylElt {
        other.word.iter().fold(self.clone(), |w, &i| w.mul_simple_right(d, i))
    }

    pub fn inverse(&self, d: &RootDatum) -> WeylElt {
        let rev: Vec<usize> = self.word.iter().rev().copied().collect();
        Self::from_word(d, &rev).expect("indices come from a valid word")
    }

    /// `{β∨ > 0 : w(β∨) < 0}`, from the reduced word: for `w = s_{i1}…s_{ik}`
    /// the roots are `s_{ik}…s_{i(m+1)}(α_{im}∨)`.
    pub fn inversion_set(&self, d: &RootDatum) -> Vec<RootVector> {
        let k = self.word.len();
        (0..k)
            .map(|m| {
                let tail = &self.word[m + 1..];
                let mut coords = d.simple_root(self.word[m]).coords().to_vec();
                for &j in tail {
                    coords = d.reflect_root(j, &coords);
                }
                let witness_word: Vec<usize> = tail.iter().rev().copied().collect();
                RootVector::new(coords, Some(Witness { word: witness_word, node: self.word[m] }))
            })
            .collect()
    }

    /// The reflection `s_β = u s_i u⁻¹` for a witnessed root `β∨ = u(α_i∨)`.
    pub fn reflection(d: &RootDatum, root: &RootVector) -> Result<WeylElt> {
        let wit = root.witness().ok_or_else(|| Error::NotARoot(root.coords().to_vec()))?;
        let mut word = wit.word.clone();
        word.push(wit.node);
        word.extend(wit.word.iter().rev());
        Self::from_word(d, &word)
    }
}

pub fn render_word(d: &RootDatum, word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|&i| format!("s{}", d.label(i))).collect::<Vec<_>>().join("*")
}

/// Applies simple reflections, smallest index first, until `μ` is dominant.
/// Returns `(λ, w)` with `λ = w(μ)`; `w` has minimal length among such
/// elements.
pub fn dominantize(d: &RootDatum, mu: &Coweight) -> Result<(Coweight, WeylElt)> {
    if !d.in_tits_cone(mu) {
        return Err(Error::NotInTitsCone(mu.0.clone()));
    }
    let mut cur = mu.clone();
    let mut w = WeylElt::identity(d);
    for _ in 0..ITERATION_CAP {
        match (0..d.num_nodes()).find(|&i| d.pair_simple(&cur, i) < 0) {
            None => return Ok((cur, w)),
            Some(i) => {
                cur = d.reflect_simple(i, &cur);
                w = w.mul_simple_left(d, i);
            }
        }
    }
    Err(Error::NotInTitsCone(mu.0.clone()))
}

/// All elements of length at most `max_len`, in breadth-first order
/// (by length, then discovery order through smallest generators).
pub fn elements_up_to_length(d: &RootDatum, max_len: usize) -> Vec<WeylElt> {
    let id = WeylElt::identity(d);
    let mut seen = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        if w.len() == max_len {
            continue;
        }
        for i in 0..d.num_nodes() {
            if !w.sends_simple_positive(i) {
                continue;
            }
            let next = w.mul_simple_right(d, i);
            if seen.insert(next.clone()) {
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

/// Sign of `w(β∨)` for a root in simple-root coordinates.
pub fn image_sign(w: &WeylElt, root: &[i64]) -> Result<RootSign> {
    root_sign(&w.act_root(root))
}
