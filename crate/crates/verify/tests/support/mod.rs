//! Shared helpers for the integration tests.
//!
//! The oracle below is a direct transcription of the normally ordered product of
//! derivative fields, summed over every admissible tuple of mode indices.
//! It shares no code with the core mode search.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mplus_core::fock::{untwisted, FockVector, Sector};
use mplus_core::rational::{binomial, binomial_int, q, Q};
use num_traits::{One, Zero};

/// Sorted creation modes `(generator, n)` for `h_gen(-n)`.
pub type Mono = Vec<(usize, u32)>;
pub type State = BTreeMap<Mono, Q>;

pub fn weight_of(m: &Mono) -> u32 {
    m.iter().map(|p| p.1).sum()
}

fn add(s: &mut State, m: Mono, c: Q) {
    let e = s.entry(m.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        s.remove(&m);
    }
}

/// `h_a(i)` on a state; `h_a(0)` is zero in the vacuum module.
fn apply(a: usize, i: i64, s: &State) -> State {
    let mut out = State::new();
    for (m, c) in s {
        if i < 0 {
            let mut n = m.clone();
            n.push((a, (-i) as u32));
            n.sort();
            add(&mut out, n, c.clone());
        } else if i > 0 {
            let k = m.iter().filter(|p| **p == (a, i as u32)).count();
            if k > 0 {
                let mut n = m.clone();
                let pos = n.iter().position(|p| *p == (a, i as u32)).unwrap();
                n.remove(pos);
                add(&mut out, n, c * q(i * k as i64));
            }
        }
    }
    out
}

fn state_weight(s: &State) -> u32 {
    s.keys().map(weight_of).max().unwrap_or(0)
}

/// `u_j v` for a monomial `u`, by brute force over index tuples.
pub fn component(u: &Mono, j: i64, v: &State) -> State {
    let k = u.len();
    let mut out = State::new();
    if v.is_empty() {
        return out;
    }
    if k == 0 {
        // Y(1, z) = id
        if j == -1 {
            return v.clone();
        }
        return out;
    }
    let wv = state_weight(v) as i64;
    let wout = wv + weight_of(u) as i64 - j - 1;
    if wout < 0 {
        return out;
    }
    // sum (i_r + n_r) = j + 1
    let target: i64 = j + 1 - u.iter().map(|p| p.1 as i64).sum::<i64>();
    let lo = -wout;
    let hi = wv;
    let mut idx = vec![lo; k];
    loop {
        if idx.iter().sum::<i64>() == target && idx.iter().all(|&i| i != 0) {
            let mut coeff = Q::one();
            for (r, &i) in idx.iter().enumerate() {
                coeff *= binomial_int(-i - 1, u[r].1 - 1);
            }
            if !coeff.is_zero() {
                // normal order: annihilators act first, then creators
                let mut s = v.clone();
                for (r, &i) in idx.iter().enumerate() {
                    if i > 0 {
                        s = apply(u[r].0, i, &s);
                    }
                }
                for (r, &i) in idx.iter().enumerate() {
                    if i < 0 {
                        s = apply(u[r].0, i, &s);
                    }
                }
                for (m, c) in s {
                    add(&mut out, m, c * &coeff);
                }
            }
        }
        // next tuple
        let mut r = 0;
        loop {
            if r == k {
                return out;
            }
            if idx[r] < hi {
                idx[r] += 1;
                break;
            }
            idx[r] = lo;
            r += 1;
        }
    }
}

/// `sum_i C(wt u, i) u_{i + shift} v`.
fn residue(u: &Mono, v: &State, shift: i64) -> State {
    let wt = weight_of(u) as i64;
    let mut out = State::new();
    for i in 0..=wt {
        let c = binomial(&q(wt), i as u32);
        for (m, x) in component(u, i + shift, v) {
            add(&mut out, m, x * &c);
        }
    }
    out
}

pub fn star(u: &Mono, v: &Mono) -> State {
    residue(u, &single(v), -1)
}

pub fn circ(u: &Mono, v: &Mono, n: i64) -> State {
    residue(u, &single(v), -n - 2)
}

pub fn single(m: &Mono) -> State {
    let mut s = State::new();
    s.insert(m.clone(), Q::one());
    s
}

pub fn to_core(s: &State) -> FockVector<Q> {
    let mut v = FockVector::zero(Sector::Untwisted);
    for (m, c) in s {
        v.add_term(untwisted(m), c.clone());
    }
    v
}

pub fn mono_to_core(m: &Mono) -> FockVector<Q> {
    FockVector::from_monomial(Sector::Untwisted, untwisted(m))
}

/// All monomials of weight exactly `w` in `ell` generators.
pub fn monomials(ell: usize, w: u32) -> Vec<Mono> {
    fn go(ell: usize, rem: u32, min: (usize, u32), cur: &mut Mono, out: &mut Vec<Mono>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for a in 1..=ell {
            for n in 1..=rem {
                if (a, n) < min {
                    continue;
                }
                cur.push((a, n));
                go(ell, rem - n, (a, n), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(ell, w, (0, 0), &mut Vec::new(), &mut out);
    out
}
