//! Self-contained models of the small root data used as oracles by the
//! acceptance suite. They work on raw integer vectors and matrices and
//! never call into the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub type Vector = Vec<i64>;
pub type Mat = Vec<Vec<i64>>;

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity(n: usize) -> Mat {
    (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect()
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
}

fn apply(m: &Mat, v: &[i64]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Row vector times matrix.
fn apply_row(f: &[i64], m: &Mat) -> Vector {
    (0..m.len()).map(|c| (0..m.len()).map(|k| f[k] * m[k][c]).sum()).collect()
}

/// `μ ↦ μ - ⟨μ, f⟩ b`.
fn reflection_matrix(f: &[i64], b: &[i64]) -> Mat {
    let n = f.len();
    (0..n).map(|r| (0..n).map(|c| i64::from(r == c) - b[r] * f[c]).collect()).collect()
}

/// A simply laced root datum given by coroots `α_i ∈ P` and roots
/// `α_i∨ : P → Z`.
#[derive(Clone, Debug)]
pub struct Model {
    pub alpha: Vec<Vector>,
    pub alpha_vee: Vec<Vector>,
    pub rho_vee: Vector,
    /// `δ∨`, affine data only.
    pub level: Option<Vector>,
    pub delta: Option<Vector>,
    /// Pairs to the same positive number with every `α_i∨`.
    pub height: Vector,
    /// Word of `s_θ` and the coroot `θ`, finite data only.
    pub theta: Option<(Vec<usize>, Vector)>,
}

/// A Weyl group element by its matrix on `P`, its inverse, and some word.
#[derive(Clone, Debug)]
pub struct Weyl {
    pub m: Mat,
    pub minv: Mat,
    pub word: Vec<usize>,
}

/// `π^μ w`.
#[derive(Clone, Debug)]
pub struct Elt {
    pub mu: Vector,
    pub w: Weyl,
}

impl Elt {
    pub fn key(&self) -> (Vector, Mat) {
        (self.mu.clone(), self.w.m.clone())
    }
}

/// A real root `β∨` with its coroot `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    /// Coefficients in the simple roots.
    pub coeffs: Vector,
    pub f: Vector,
    pub coroot: Vector,
}

impl Root {
    pub fn negate(&self) -> Root {
        let neg = |v: &Vector| v.iter().map(|x| -x).collect();
        Root { coeffs: neg(&self.coeffs), f: neg(&self.f), coroot: neg(&self.coroot) }
    }
}

pub fn a1() -> Model {
    Model {
        alpha: vec![vec![1]],
        alpha_vee: vec![vec![2]],
        rho_vee: vec![1],
        level: None,
        delta: None,
        height: vec![1],
        theta: Some((vec![0], vec![1])),
    }
}

pub fn a2() -> Model {
    Model {
        alpha: vec![vec![1, 0], vec![0, 1]],
        alpha_vee: vec![vec![2, -1], vec![-1, 2]],
        rho_vee: vec![1, 1],
        level: None,
        delta: None,
        height: vec![1, 1],
        theta: Some((vec![0, 1, 0], vec![1, 1])),
    }
}

/// Basis `(α_1, Λ_0, δ)`; nodes ordered `0, 1`.
pub fn a1_affine() -> Model {
    Model {
        alpha: vec![vec![-1, 0, 1], vec![1, 0, 0]],
        alpha_vee: vec![vec![-2, 1, 0], vec![2, 0, 0]],
        rho_vee: vec![1, 0, 2],
        level: Some(vec![0, 1, 0]),
        delta: Some(vec![0, 0, 1]),
        height: vec![1, 4, 0],
        theta: None,
    }
}

impl Model {
    pub fn dim(&self) -> usize {
        self.rho_vee.len()
    }

    pub fn nodes(&self) -> usize {
        self.alpha.len()
    }

    pub fn pair(&self, mu: &[i64], f: &[i64]) -> i64 {
        dot(mu, f)
    }

    pub fn sign(&self, f: &[i64]) -> i64 {
        dot(&self.height, f).signum()
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        dot(&self.alpha_vee[i], &self.alpha[j])
    }

    pub fn level_of(&self, mu: &[i64]) -> i64 {
        self.level.as_ref().map_or(0, |l| dot(l, mu))
    }

    pub fn in_tits_cone(&self, mu: &[i64]) -> bool {
        let Some(delta) = &self.delta else { return true };
        let l = self.level_of(mu);
        if l != 0 {
            return l > 0;
        }
        // Level zero: multiples of δ only.
        let k = delta.iter().zip(mu).find(|(d, _)| **d != 0).map(|(d, m)| m / d).unwrap_or(0);
        delta.iter().zip(mu).all(|(d, m)| d * k == *m)
    }

    pub fn is_dominant(&self, mu: &[i64]) -> bool {
        self.alpha_vee.iter().all(|f| dot(mu, f) >= 0)
    }

    pub fn identity(&self) -> Weyl {
        Weyl { m: identity(self.dim()), minv: identity(self.dim()), word: Vec::new() }
    }

    pub fn simple(&self, i: usize) -> Weyl {
        let m = reflection_matrix(&self.alpha_vee[i], &self.alpha[i]);
        Weyl { minv: m.clone(), m, word: vec![i] }
    }

    pub fn compose(&self, a: &Weyl, b: &Weyl) -> Weyl {
        Weyl {
            m: matmul(&a.m, &b.m),
            minv: matmul(&b.minv, &a.minv),
            word: a.word.iter().chain(&b.word).copied().collect(),
        }
    }

    pub fn weyl_of_word(&self, word: &[usize]) -> Weyl {
        word.iter().fold(self.identity(), |w, &i| self.compose(&w, &self.simple(i)))
    }

    pub fn act(&self, w: &Weyl, mu: &[i64]) -> Vector {
        apply(&w.m, mu)
    }

    /// `w(β∨) = β∨ ∘ w⁻¹`.
    pub fn act_root(&self, w: &Weyl, f: &[i64]) -> Vector {
        apply_row(f, &w.minv)
    }

    pub fn act_root_inverse(&self, w: &Weyl, f: &[i64]) -> Vector {
        apply_row(f, &w.m)
    }

    /// The reflection `s_β`, carrying no word.
    pub fn reflection(&self, r: &Root) -> Weyl {
        let m = reflection_matrix(&r.f, &r.coroot);
        Weyl { minv: m.clone(), m, word: Vec::new() }
    }

    /// Positive real roots of height at most `h`, by coefficient vectors of
    /// norm 2.
    pub fn positive_roots(&self, h: i64) -> Vec<Root> {
        let n = self.nodes();
        let mut out = Vec::new();
        let mut c = vec![0i64; n];
        loop {
            let total: i64 = c.iter().sum();
            let norm: i64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| c[i] * c[j] * self.cartan(i, j)).sum();
            if total > 0 && norm == 2 {
                let mut f = vec![0; self.dim()];
                let mut b = vec![0; self.dim()];
                for (ci, (fv, bv)) in c.iter().zip(self.alpha_vee.iter().zip(&self.alpha)) {
                    for k in 0..self.dim() {
                        f[k] += ci * fv[k];
                        b[k] += ci * bv[k];
                    }
                }
                out.push(Root { coeffs: c.clone(), f, coroot: b });
            }
            // Odometer over coefficient vectors with sum ≤ h.
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                c[k] += 1;
                if c.iter().sum::<i64>() <= h {
                    break;
                }
                c[k] = 0;
                k += 1;
            }
        }
    }

    pub fn dominantize(&self, mu: &[i64]) -> Vector {
        let mut lam = mu.to_vec();
        'outer: loop {
            for i in 0..self.nodes() {
                let p = dot(&lam, &self.alpha_vee[i]);
                if p < 0 {
                    for (x, a) in lam.iter_mut().zip(&self.alpha[i]) {
                        *x -= p * a;
                    }
                    continue 'outer;
                }
            }
            return lam;
        }
    }

    pub fn big(&self, mu: &[i64]) -> i64 {
        2 * dot(&self.dominantize(mu), &self.rho_vee)
    }

    /// `Inv(v) = {γ∨ > 0 : v(γ∨) < 0}` among roots of height at most `h`.
    pub fn inversions(&self, v: &Weyl, h: i64) -> Vec<Root> {
        self.positive_roots(h).into_iter().filter(|g| self.sign(&self.act_root(v, &g.f)) < 0).collect()
    }

    pub fn small(&self, mu: &[i64], w: &Weyl, h: i64) -> i64 {
        // Inv(w⁻¹): γ∨ with w⁻¹(γ∨) < 0.
        self.positive_roots(h)
            .iter()
            .filter(|g| self.sign(&self.act_root_inverse(w, &g.f)) < 0)
            .map(|g| if dot(mu, &g.f) >= 0 { 1 } else { -1 })
            .sum()
    }

    pub fn length(&self, x: &Elt, h: i64) -> (i64, i64) {
        (self.big(&x.mu), self.small(&x.mu, &x.w, h))
    }

    pub fn mul(&self, x: &Elt, y: &Elt) -> Elt {
        let mut mu = self.act(&x.w, &y.mu);
        for (a, b) in mu.iter_mut().zip(&x.mu) {
            *a += b;
        }
        Elt { mu, w: self.compose(&x.w, &y.w) }
    }

    /// `x·s_{β∨+nπ} = π^{μ + n w(β)} w s_β`.
    pub fn mul_reflection(&self, x: &Elt, r: &Root, n: i64) -> Elt {
        let shift = self.act(&x.w, &r.coroot);
        let mu = x.mu.iter().zip(&shift).map(|(a, b)| a + n * b).collect();
        Elt { mu, w: self.compose(&x.w, &self.reflection(r)) }
    }

    /// `π^μ w (γ∨ + nπ) = w(γ∨) + (n + ⟨μ, w(γ∨)⟩) π`, and whether it is positive.
    pub fn image_positive(&self, x: &Elt, r: &Root, n: i64) -> bool {
        let g = self.act_root(&x.w, &r.f);
        let m = n + dot(&x.mu, &g);
        let s = self.sign(&g);
        (s > 0 && m >= 0) || (s < 0 && m > 0)
    }

    /// Weyl group elements of length at most `max_len`, one word each.
    pub fn weyl_ball(&self, max_len: usize) -> Vec<Weyl> {
        let mut out = vec![self.identity()];
        let mut seen = vec![out[0].m.clone()];
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for i in 0..self.nodes() {
                    let v = self.compose(w, &self.simple(i));
                    if !seen.contains(&v.m) {
                        seen.push(v.m.clone());
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Coweights with all coordinates in `[-c, c]`, in the Tits cone, at an
    /// allowed level (ignored on finite data).
    pub fn coweights(&self, c: i64, levels: &[i64]) -> Vec<Vector> {
        let mut out: Vec<Vector> = vec![Vec::new()];
        for _ in 0..self.dim() {
            out = out.into_iter().flat_map(|v| (-c..=c).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out.retain(|mu| self.in_tits_cone(mu) && (self.level.is_none() || levels.contains(&self.level_of(mu))));
        out
    }

    pub fn elements(&self, c: i64, levels: &[i64], max_len: usize) -> Vec<Elt> {
        let ws = self.weyl_ball(max_len);
        self.coweights(c, levels)
            .into_iter()
            .flat_map(|mu| ws.iter().map(move |w| Elt { mu: mu.clone(), w: w.clone() }))
            .collect()
    }
}

/// Laurent polynomials as exponent → coefficient.
pub type Poly = BTreeMap<i32, i64>;

fn poly_add(into: &mut Poly, p: &Poly, scale_exp: i32, scale_coeff: i64) {
    for (e, c) in p {
        *into.entry(e + scale_exp).or_default() += c * scale_coeff;
    }
    into.retain(|_, c| *c != 0);
}

/// The classical Iwahori-Hecke algebra of `W_aff = W ⋉ Q` for finite data,
/// with lengths from the Iwahori-Matsumoto formula
/// `ℓ(π^μ w) = Σ_{β∨>0} |⟨μ, β∨⟩ + [w⁻¹(β∨) < 0]|`.
pub struct Classical<'m> {
    pub m: &'m Model,
    gens: Vec<Elt>,
    roots: Vec<Root>,
}

impl<'m> Classical<'m> {
    pub fn new(m: &'m Model) -> Self {
        let (theta_word, theta) = m.theta.clone().expect("finite datum");
        let mut gens: Vec<Elt> =
            (0..m.nodes()).map(|i| Elt { mu: vec![0; m.dim()], w: m.simple(i) }).collect();
        gens.push(Elt { mu: theta.iter().map(|x| -x).collect(), w: m.weyl_of_word(&theta_word) });
        let roots = m.positive_roots(64);
        Classical { m, gens, roots }
    }

    pub fn length(&self, x: &Elt) -> i64 {
        self.roots
            .iter()
            .map(|b| {
                let flip = i64::from(self.m.sign(&self.m.act_root_inverse(&x.w, &b.f)) < 0);
                (dot(&x.mu, &b.f) + flip).abs()
            })
            .sum()
    }

    /// Elements of length at most `max_len`.
    pub fn ball(&self, max_len: usize) -> Vec<Elt> {
        let id = Elt { mu: vec![0; self.m.dim()], w: self.m.identity() };
        let mut out = vec![id.clone()];
        let mut keys = vec![id.key()];
        let mut frontier = vec![id];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for x in &frontier {
                for g in &self.gens {
                    let y = self.m.mul(x, g);
                    if !keys.contains(&y.key()) {
                        keys.push(y.key());
                        next.push(y);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.retain(|x| self.length(x) <= max_len as i64);
        out
    }

    /// Generator indices of a reduced word, found by peeling right descents.
    pub fn reduced_word(&self, x: &Elt) -> Vec<usize> {
        let mut cur = x.clone();
        let mut word = Vec::new();
        while self.length(&cur) > 0 {
            let (g, y) = self
                .gens
                .iter()
                .enumerate()
                .map(|(g, s)| (g, self.m.mul(&cur, s)))
                .find(|(_, y)| self.length(y) < self.length(&cur))
                .expect("every nontrivial element has a descent");
            word.push(g);
            cur = y;
        }
        word.reverse();
        word
    }

    /// `T_x T_y`, keyed by `(μ, matrix)`.
    pub fn product(&self, x: &Elt, y: &Elt) -> BTreeMap<(Vector, Mat), (Elt, Poly)> {
        let mut cur: BTreeMap<(Vector, Mat), (Elt, Poly)> = BTreeMap::new();
        cur.insert(x.key(), (x.clone(), Poly::from([(0, 1)])));
        for g in self.reduced_word(y) {
            let s = &self.gens[g];
            let mut next: BTreeMap<(Vector, Mat), (Elt, Poly)> = BTreeMap::new();
            for (z, c) in cur.into_values() {
                let zs = self.m.mul(&z, s);
                let up = self.length(&zs) > self.length(&z);
                let slot = next.entry(zs.key()).or_insert_with(|| (zs.clone(), Poly::new()));
                if up {
                    poly_add(&mut slot.1, &c, 0, 1);
                } else {
                    poly_add(&mut slot.1, &c, 1, 1);
                    let stay = next.entry(z.key()).or_insert_with(|| (z.clone(), Poly::new()));
                    poly_add(&mut stay.1, &c, 1, 1);
                    poly_add(&mut stay.1, &c, 0, -1);
                }
            }
            next.retain(|_, (_, c)| !c.is_empty());
            cur = next;
        }
        cur
    }
}
