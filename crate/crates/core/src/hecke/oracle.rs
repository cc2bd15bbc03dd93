//! Classical Iwahori-Hecke algebra of `W_aff = W ⋉ Q` for finite,
//! simply connected data, with generators `s_i` and `s_0 = π^{-θ} s_θ`.
//! Products use only Coxeter lengths read off a breadth-first ball.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::root_data::RootDatum;
use crate::tits::{multiply, TitsElt};
use crate::weyl::WeylElt;

pub struct FiniteOracle<'d> {
    d: &'d RootDatum,
    gens: Vec<TitsElt>,
    /// Reduced words in generator indices; the affine generator is last.
    ball: HashMap<TitsElt, Vec<usize>>,
    order: Vec<TitsElt>,
    radius: usize,
}

impl<'d> FiniteOracle<'d> {
    /// Enumerates every element of Coxeter length at most `radius`.
    pub fn new(d: &'d RootDatum, radius: usize) -> Result<Self> {
        if d.is_affine() {
            return Err(Error::Unsupported("the classical oracle needs a finite-type datum".into()));
        }
        let mut gens: Vec<TitsElt> = (0..d.num_nodes()).map(|i| TitsElt::simple(d, i)).collect();
        let theta = d.highest_root()?;
        let s_theta = WeylElt::reflection(d, &theta)?;
        gens.push(TitsElt::new(d, d.coroot_of(&theta)?.scale(-1), s_theta)?);

        let id = TitsElt::identity(d);
        let mut ball = HashMap::from([(id.clone(), Vec::new())]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let word = ball[&x].clone();
            if word.len() == radius {
                continue;
            }
            for (g, s) in gens.iter().enumerate() {
                let y = multiply(d, &x, s);
                if !ball.contains_key(&y) {
                    let mut w = word.clone();
                    w.push(g);
                    ball.insert(y.clone(), w);
                    order.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(FiniteOracle { d, gens, ball, order, radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Generators, the affine one last.
    pub fn generators(&self) -> &[TitsElt] {
        &self.gens
    }

    /// Elements of length at most `max_len`, by length.
    pub fn elements(&self, max_len: usize) -> Vec<TitsElt> {
        self.order.iter().filter(|x| self.ball[*x].len() <= max_len).cloned().collect()
    }

    pub fn coxeter_length(&self, x: &TitsElt) -> Result<usize> {
        self.ball
            .get(x)
            .map(Vec::len)
            .ok_or_else(|| Error::OutOfRange(format!("{} lies outside the enumerated ball", x.render(self.d))))
    }

    pub fn reduced_word(&self, x: &TitsElt) -> Result<&[usize]> {
        self.ball
            .get(x)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::OutOfRange(format!("{} lies outside the enumerated ball", x.render(self.d))))
    }

    /// `T_x T_y` by the Iwahori-Matsumoto rules along a reduced word of `y`.
    pub fn product(&self, x: &TitsElt, y: &TitsElt) -> Result<BTreeMap<TitsElt, LaurentPoly>> {
        let mut cur = BTreeMap::from([(x.clone(), LaurentPoly::one())]);
        for &g in self.reduced_word(y)? {
            let s = &self.gens[g];
            let mut next: BTreeMap<TitsElt, LaurentPoly> = BTreeMap::new();
            for (z, c) in cur {
                let zs = multiply(self.d, &z, s);
                if self.coxeter_length(&zs)? > self.coxeter_length(&z)? {
                    *next.entry(zs).or_default() += &c;
                } else {
                    *next.entry(zs).or_default() += &(&c * &LaurentPoly::q());
                    *next.entry(z).or_default() += &(&c * &LaurentPoly::q_minus_one());
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        Ok(cur)
    }
}
