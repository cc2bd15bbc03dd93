//! Kac-Moody root data.
//!
//! Coordinates follow the convention that coroots `α_i` live in the coweight
//! lattice `P` and roots `α_i∨` live in its dual `P∨`. A coweight is an
//! integer vector in a fixed basis of `P`; a root is stored by its
//! coordinates in the basis of simple roots, which the datum converts to a
//! functional on `P` when pairing.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of the coweight lattice `P`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coweight(pub Vec<i64>);

impl Coweight {
    pub fn zero(dim: usize) -> Self {
        Coweight(vec![0; dim])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Coweight {
        Coweight(self.0.iter().map(|a| a * k).collect())
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: i64, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Word `w` and node `i` with `root = w(α_i∨)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub word: Vec<usize>,
    pub node: usize,
}

/// A root, in simple-root coordinates. Identity is the coordinate vector;
/// the witness is carried along but ignored by comparisons.
#[derive(Clone, Debug)]
pub struct RootVector {
    coords: Vec<i64>,
    witness: Option<Witness>,
}

impl PartialEq for RootVector {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}
impl Eq for RootVector {}
impl std::hash::Hash for RootVector {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state)
    }
}
impl PartialOrd for RootVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for RootVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.height(), &self.coords).cmp(&(other.height(), &other.coords))
    }
}

impl RootVector {
    pub fn new(coords: Vec<i64>, witness: Option<Witness>) -> Self {
        Self { coords, witness }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    /// Sum of simple-root coordinates.
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn sign(&self) -> Result<RootSign> {
        root_sign(&self.coords)
    }

    pub fn is_positive(&self) -> bool {
        matches!(self.sign(), Ok(RootSign::Positive))
    }

    /// `-β∨`, witnessed by `s_i` appended to the old witness word.
    pub fn negate(&self) -> RootVector {
        RootVector {
            coords: self.coords.iter().map(|c| -c).collect(),
            witness: self.witness.as_ref().map(|w| {
                let mut word = w.word.clone();
                word.push(w.node);
                Witness { word, node: w.node }
            }),
        }
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Coweight(self.coords.clone()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSign {
    Positive,
    Negative,
}

/// Sign of a real root from its simple-root coordinates. Real roots have
/// coordinates of uniform sign; anything else is rejected.
pub fn root_sign(coords: &[i64]) -> Result<RootSign> {
    let pos = coords.iter().any(|&c| c > 0);
    let neg = coords.iter().any(|&c| c < 0);
    match (pos, neg) {
        (true, false) => Ok(RootSign::Positive),
        (false, true) => Ok(RootSign::Negative),
        _ => Err(Error::NotARoot(coords.to_vec())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Finite,
    #[serde(alias = "untwisted-affine")]
    Affine,
}

/// On-disk description of a root datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumConfig {
    pub cartan: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    pub simple_roots: Vec<Vec<i64>>,
    pub rho_vee: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_vee: Option<Vec<i64>>,
    pub kind: Kind,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    name: String,
    config: DatumConfig,
    /// `α_i∨` as functionals on `P`, one row per node.
    simple_roots: Vec<Vec<i64>>,
    /// `α_i` as coweights.
    simple_coroots: Vec<Coweight>,
}

pub const PRESETS: [&str; 4] = ["A1", "A2", "A1~", "A2~"];

impl RootDatum {
    pub fn from_config(name: impl Into<String>, config: DatumConfig) -> Result<Self> {
        validate(&config)?;
        Ok(RootDatum {
            name: name.into(),
            simple_roots: config.simple_roots.clone(),
            simple_coroots: config.simple_coroots.iter().cloned().map(Coweight).collect(),
            config,
        })
    }

    pub fn from_json(name: impl Into<String>, json: &str) -> Result<Self> {
        let cfg: DatumConfig =
            serde_json::from_str(json).map_err(|e| Error::InvalidDatum(e.to_string()))?;
        Self::from_config(name, cfg)
    }

    /// Built-in data. Finite types are simply connected (`P = Q`). Affine
    /// types use the basis `(α_1, …, α_r, Λ_0, δ)` of `P`, so the level is the
    /// `Λ_0` coordinate.
    pub fn preset(name: &str) -> Result<Self> {
        let v = |rows: &[&[i64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let cfg = match name {
            "A1" => DatumConfig {
                cartan: v(&[&[2]]),
                simple_coroots: v(&[&[1]]),
                simple_roots: v(&[&[2]]),
                rho_vee: vec![1],
                delta: None,
                delta_vee: None,
                kind: Kind::Finite,
                labels: s(&["1"]),
            },
            "A2" => DatumConfig {
                cartan: v(&[&[2, -1], &[-1, 2]]),
                simple_coroots: v(&[&[1, 0], &[0, 1]]),
                simple_roots: v(&[&[2, -1], &[-1, 2]]),
                rho_vee: vec![1, 1],
                delta: None,
                delta_vee: None,
                kind: Kind::Finite,
                labels: s(&["1", "2"]),
            },
            "A1~" => DatumConfig {
                cartan: v(&[&[2, -2], &[-2, 2]]),
                simple_coroots: v(&[&[-1, 0, 1], &[1, 0, 0]]),
                simple_roots: v(&[&[-2, 1, 0], &[2, 0, 0]]),
                rho_vee: vec![1, 0, 2],
                delta: Some(vec![0, 0, 1]),
                delta_vee: Some(vec![0, 1, 0]),
                kind: Kind::Affine,
                labels: s(&["0", "1"]),
            },
            "A2~" => DatumConfig {
                cartan: v(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]),
                simple_coroots: v(&[&[-1, -1, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]),
                simple_roots: v(&[&[-1, -1, 1, 0], &[2, -1, 0, 0], &[-1, 2, 0, 0]]),
                rho_vee: vec![1, 1, 0, 3],
                delta: Some(vec![0, 0, 0, 1]),
                delta_vee: Some(vec![0, 0, 1, 0]),
                kind: Kind::Affine,
                labels: s(&["0", "1", "2"]),
            },
            other => return Err(Error::InvalidDatum(format!("unknown preset `{other}`"))),
        };
        Self::from_config(name, cfg)
    }

    /// Same datum with a different choice of `ρ∨`.
    pub fn with_rho_vee(&self, rho_vee: Vec<i64>) -> Result<Self> {
        let mut cfg = self.config.clone();
        cfg.rho_vee = rho_vee;
        Self::from_config(self.name.clone(), cfg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn config(&self) -> &DatumConfig {
        &self.config
    }

    pub fn kind(&self) -> Kind {
        self.config.kind
    }

    pub fn is_affine(&self) -> bool {
        self.config.kind == Kind::Affine
    }

    /// Rank of the coweight lattice `P`.
    pub fn rank_p(&self) -> usize {
        self.config.rho_vee.len()
    }

    /// Number of nodes `|I|`.
    pub fn num_nodes(&self) -> usize {
        self.config.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.config.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.config.labels[i]
    }

    pub fn node_index(&self, label: &str) -> Result<usize> {
        self.config
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.config.cartan[i][j]
    }

    pub fn simple_coroot(&self, i: usize) -> &Coweight {
        &self.simple_coroots[i]
    }

    /// `α_i∨` as a functional on `P`.
    pub fn simple_root_weight(&self, i: usize) -> &[i64] {
        &self.simple_roots[i]
    }

    pub fn simple_root(&self, i: usize) -> RootVector {
        let mut coords = vec![0; self.num_nodes()];
        coords[i] = 1;
        RootVector::new(coords, Some(Witness { word: Vec::new(), node: i }))
    }

    pub fn rho_vee(&self) -> &[i64] {
        &self.config.rho_vee
    }

    pub fn delta(&self) -> Option<Coweight> {
        self.config.delta.clone().map(Coweight)
    }

    pub fn delta_vee(&self) -> Option<&[i64]> {
        self.config.delta_vee.as_deref()
    }

    fn check_dim(&self, mu: &Coweight) -> Result<()> {
        if mu.dim() != self.rank_p() {
            return Err(Error::DimensionMismatch { expected: self.rank_p(), found: mu.dim() });
        }
        Ok(())
    }

    /// Pairing of a coweight with a functional on `P`.
    pub fn pair_weight(&self, mu: &Coweight, weight: &[i64]) -> i64 {
        mu.0.iter().zip(weight).map(|(a, b)| a * b).sum()
    }

    /// `⟨μ, α_i∨⟩`
    pub fn pair_simple(&self, mu: &Coweight, i: usize) -> i64 {
        self.pair_weight(mu, &self.simple_roots[i])
    }

    /// `⟨μ, β∨⟩` for a root given in simple-root coordinates.
    pub fn pair_root_coords(&self, mu: &Coweight, root: &[i64]) -> i64 {
        root.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| c * self.pair_simple(mu, j))
            .sum()
    }

    pub fn pairing(&self, mu: &Coweight, beta: &RootVector) -> Result<i64> {
        self.check_dim(mu)?;
        if beta.coords().len() != self.num_nodes() {
            return Err(Error::DimensionMismatch {
                expected: self.num_nodes(),
                found: beta.coords().len(),
            });
        }
        Ok(self.pair_root_coords(mu, beta.coords()))
    }

    /// The root as a functional on `P`.
    pub fn root_weight(&self, root: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.rank_p()];
        for (j, &c) in root.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(&self.simple_roots[j]) {
                *o += c * a;
            }
        }
        out
    }

    pub fn is_dominant(&self, mu: &Coweight) -> bool {
        (0..self.num_nodes()).all(|i| self.pair_simple(mu, i) >= 0)
    }

    pub fn level(&self, mu: &Coweight) -> Result<i64> {
        let dv = self
            .delta_vee()
            .ok_or_else(|| Error::Unsupported("level of a finite-type coweight".into()))?;
        self.check_dim(mu)?;
        Ok(self.pair_weight(mu, dv))
    }

    /// If `μ = rδ`, returns `r`.
    pub fn delta_multiple(&self, mu: &Coweight) -> Option<i64> {
        let delta = self.config.delta.as_ref()?;
        let pivot = delta.iter().position(|&d| d != 0)?;
        if mu.0[pivot] % delta[pivot] != 0 {
            return None;
        }
        let r = mu.0[pivot] / delta[pivot];
        (mu.0.iter().zip(delta).all(|(m, d)| *m == r * d)).then_some(r)
    }

    /// Finite type: everything. Affine type: positive level, or an integer
    /// multiple of `δ` at level zero.
    pub fn in_tits_cone(&self, mu: &Coweight) -> bool {
        if mu.dim() != self.rank_p() {
            return false;
        }
        match self.kind() {
            Kind::Finite => true,
            Kind::Affine => {
                let level = self.level(mu).expect("affine datum has δ∨");
                level > 0 || (level == 0 && self.delta_multiple(mu).is_some())
            }
        }
    }

    /// `s_i(μ) = μ − ⟨μ, α_i∨⟩ α_i`
    pub fn reflect_simple(&self, i: usize, mu: &Coweight) -> Coweight {
        let m = self.pair_simple(mu, i);
        if m == 0 {
            return mu.clone();
        }
        mu.add_scaled(-m, &self.simple_coroots[i])
    }

    /// `s_i(β∨) = β∨ − ⟨α_i, β∨⟩ α_i∨` in simple-root coordinates.
    pub fn reflect_root(&self, i: usize, root: &[i64]) -> Vec<i64> {
        let mut out = root.to_vec();
        let m: i64 = root.iter().enumerate().map(|(j, &c)| self.cartan(i, j) * c).sum();
        out[i] -= m;
        out
    }

    /// Applies the word (rightmost letter first) to a coweight.
    pub fn apply_word_coweight(&self, word: &[usize], mu: &Coweight) -> Coweight {
        word.iter().rev().fold(mu.clone(), |acc, &i| self.reflect_simple(i, &acc))
    }

    /// The coroot `β = w(α_i)` attached to a witnessed real root `β∨ = w(α_i∨)`.
    pub fn coroot_of(&self, root: &RootVector) -> Result<Coweight> {
        let wit = root
            .witness()
            .ok_or_else(|| Error::NotARoot(root.coords().to_vec()))?;
        Ok(self.apply_word_coweight(&wit.word, &self.simple_coroots[wit.node]))
    }

    /// All positive real roots of height at most `bound`, by breadth-first
    /// closure of the simple roots under simple reflections. Sorted by
    /// height, then coordinates.
    pub fn positive_real_roots_up_to(&self, bound: i64) -> Vec<RootVector> {
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for i in 0..self.num_nodes() {
            let r = self.simple_root(i);
            if r.height() <= bound && seen.insert(r.coords().to_vec()) {
                queue.push_back(r);
            }
        }
        while let Some(root) = queue.pop_front() {
            for j in 0..self.num_nodes() {
                let next = self.reflect_root(j, root.coords());
                let h: i64 = next.iter().sum();
                if h <= root.height() || h > bound || seen.contains(&next) {
                    continue;
                }
                let wit = root.witness().expect("generated roots carry witnesses");
                let mut word = Vec::with_capacity(wit.word.len() + 1);
                word.push(j);
                word.extend_from_slice(&wit.word);
                seen.insert(next.clone());
                queue.push_back(RootVector::new(next, Some(Witness { word, node: wit.node })));
            }
            out.push(root);
        }
        out.sort();
        out
    }

    /// Highest root of a finite-type datum.
    pub fn highest_root(&self) -> Result<RootVector> {
        if self.is_affine() {
            return Err(Error::Unsupported("highest root of an affine datum".into()));
        }
        // Heights in finite type never exceed the sum of the Cartan entries' magnitudes.
        let bound: i64 = self.config.cartan.iter().flatten().map(|a| a.abs()).sum::<i64>() * 4;
        let roots = self.positive_real_roots_up_to(bound.max(1));
        Ok(roots.into_iter().max().expect("at least one simple root"))
    }
}

fn validate(cfg: &DatumConfig) -> Result<()> {
    let n = cfg.labels.len();
    let err = |m: String| Err(Error::InvalidDatum(m));
    if n == 0 {
        return err("empty index set".into());
    }
    let mut uniq = HashSet::new();
    if !cfg.labels.iter().all(|l| uniq.insert(l)) {
        return err("duplicate node labels".into());
    }
    if cfg.cartan.len() != n || cfg.cartan.iter().any(|r| r.len() != n) {
        return err(format!("Cartan matrix must be {n}x{n}"));
    }
    for i in 0..n {
        if cfg.cartan[i][i] != 2 {
            return err(format!("A[{i}][{i}] must be 2"));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if cfg.cartan[i][j] > 0 {
                return err(format!("A[{i}][{j}] must be non-positive"));
            }
            if (cfg.cartan[i][j] == 0) != (cfg.cartan[j][i] == 0) {
                return err(format!("A[{i}][{j}] and A[{j}][{i}] must vanish together"));
            }
        }
    }
    let p = cfg.rho_vee.len();
    if cfg.simple_coroots.len() != n || cfg.simple_roots.len() != n {
        return err(format!("need {n} simple coroots and {n} simple roots"));
    }
    if cfg.simple_coroots.iter().chain(&cfg.simple_roots).any(|v| v.len() != p) {
        return err(format!("all vectors must have rank(P) = {p} entries"));
    }
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    for i in 0..n {
        for j in 0..n {
            let got = dot(&cfg.simple_coroots[i], &cfg.simple_roots[j]);
            if got != cfg.cartan[i][j] {
                return err(format!(
                    "<alpha_{i}, alpha_{j}^vee> = {got} but A[{i}][{j}] = {}",
                    cfg.cartan[i][j]
                ));
            }
        }
        if dot(&cfg.simple_coroots[i], &cfg.rho_vee) != 1 {
            return err(format!("<alpha_{i}, rho^vee> must be 1"));
        }
    }
    if integer_rank(&cfg.simple_roots) != n {
        return err("simple roots must be linearly independent".into());
    }
    if integer_rank(&cfg.simple_coroots) != n {
        return err("simple coroots must be linearly independent".into());
    }
    match cfg.kind {
        Kind::Finite => {
            if cfg.delta.is_some() || cfg.delta_vee.is_some() {
                return err("finite-type datum must not carry delta".into());
            }
        }
        Kind::Affine => {
            let (Some(d), Some(dv)) = (&cfg.delta, &cfg.delta_vee) else {
                return err("affine datum needs delta and delta_vee".into());
            };
            if d.len() != p || dv.len() != p {
                return err("delta and delta_vee must have rank(P) entries".into());
            }
            if d.iter().all(|&x| x == 0) || dv.iter().all(|&x| x == 0) {
                return err("delta and delta_vee must be nonzero".into());
            }
            for i in 0..n {
                if dot(d, &cfg.simple_roots[i]) != 0 {
                    return err(format!("<delta, alpha_{i}^vee> must vanish"));
                }
                if dot(&cfg.simple_coroots[i], dv) != 0 {
                    return err(format!("<alpha_{i}, delta^vee> must vanish"));
                }
            }
            if dot(d, dv) != 0 {
                return err("<delta, delta^vee> must vanish".into());
            }
        }
    }
    Ok(())
}

/// Rank over `Q` by fraction-free elimination.
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = *x * a - y * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a } else { gcd(b, a % b) }
}
