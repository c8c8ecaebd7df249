//! Mode components of vertex operators on the Fock space.
//!
//! For `v = h_{a_1}(-n_1)...h_{a_r}(-n_r) 1` the field is the normally ordered
//! product of `d^{(n_i - 1)} h_{a_i}(z)`, so the component `v_j` (coefficient of
//! `z^{-j-1}`) is a sum over mode tuples `(k_1, ..., k_r)` with
//! `sum (k_i + n_i) = j + 1` and weight `prod C(-k_i - 1, n_i - 1)`.
//!
//! The same engine serves the twisted sector, where the `k_i` run over
//! `1/2 + Z`; see [`crate::twisted`].

use crate::error::{Error, Result};
use crate::fock::{FockMonomial, FockVector, Mode, Sector};
use crate::rational::{binomial, frac, Q};
use crate::scalar::Scalar;

/// `d_{k,n} = C(-k-1, n-1)` with `k = twice_k / 2`.
pub fn d_coeff(twice_k: i64, n: u32) -> Q {
    binomial(&(frac(-twice_k, 2) - Q::from_integer(1.into())), n - 1)
}

struct Factor {
    gen: u16,
    /// `n_i >= 1`
    n: u32,
}

/// Adds `coeff * (source)_j target` into `out`, where `source` is a monomial of
/// `H` and `target` lives in `sector`. `j2` is twice the component index.
pub(crate) fn component_into<C: Scalar>(
    source: &FockMonomial,
    j2: i64,
    target: &FockMonomial,
    sector: Sector,
    hw: Option<&[C]>,
    coeff: &C,
    out: &mut FockVector<C>,
) {
    let factors: Vec<Factor> = source
        .modes()
        .iter()
        .map(|m| Factor { gen: m.gen, n: (-m.twice / 2) as u32 })
        .collect();
    let n_sum: i64 = factors.iter().map(|f| f.n as i64).sum();
    // twice the required sum of the k_i
    let k_sum2 = j2 + 2 - 2 * n_sum;
    let mut st = Search {
        factors: &factors,
        target: target.modes(),
        used: vec![false; target.len()],
        sector,
        hw,
        choice: vec![Choice::Create; factors.len()],
        out,
        coeff,
    };
    st.walk(0, k_sum2, Q::from_integer(1.into()), None);
}

#[derive(Clone, Copy)]
enum Choice {
    Create,
    Annihilate,
    Zero,
}

struct Search<'a, C: Scalar> {
    factors: &'a [Factor],
    target: &'a [Mode],
    used: Vec<bool>,
    sector: Sector,
    hw: Option<&'a [C]>,
    choice: Vec<Choice>,
    out: &'a mut FockVector<C>,
    coeff: &'a C,
}

impl<C: Scalar> Search<'_, C> {
    /// Assigns each factor to an annihilation of a target position, a zero
    /// mode, or a creation; `rest2` is twice the k-sum still to be produced.
    fn walk(&mut self, i: usize, rest2: i64, acc: Q, lam: Option<C>) {
        if i == self.factors.len() {
            self.distribute(rest2, acc, lam);
            return;
        }
        let f = &self.factors[i];
        // creation
        self.choice[i] = Choice::Create;
        self.walk(i + 1, rest2, acc.clone(), lam.clone());
        // annihilation against an unused target position of the same generator;
        // equal neighbouring modes are matched once with multiplicity weight
        let mut p = 0;
        while p < self.target.len() {
            let tm = self.target[p];
            if tm.gen != f.gen || self.used[p] {
                p += 1;
                continue;
            }
            let mut mult = 0i64;
            let mut first = None;
            let mut q = p;
            while q < self.target.len() && self.target[q] == tm {
                if !self.used[q] {
                    mult += 1;
                    first.get_or_insert(q);
                }
                q += 1;
            }
            if let Some(pos) = first {
                let k2 = -tm.twice as i64;
                let factor = d_coeff(k2, f.n) * frac(k2 * mult, 2);
                self.used[pos] = true;
                self.choice[i] = Choice::Annihilate;
                self.walk(i + 1, rest2 - k2, &acc * factor, lam.clone());
                self.used[pos] = false;
            }
            p = q;
        }
        // zero mode
        if self.sector == Sector::Untwisted {
            if let Some(hw) = self.hw {
                let l = &hw[f.gen as usize - 1];
                if !l.is_zero() {
                    self.choice[i] = Choice::Zero;
                    let sign = if f.n % 2 == 1 { 1 } else { -1 };
                    let next = match &lam {
                        Some(x) => x.mul(l),
                        None => l.clone(),
                    };
                    self.walk(i + 1, rest2, &acc * Q::from_integer(sign.into()), Some(next));
                }
            }
        }
        self.choice[i] = Choice::Create;
    }

    fn distribute(&mut self, rest2: i64, acc: Q, lam: Option<C>) {
        let creators: Vec<usize> = (0..self.factors.len())
            .filter(|&i| matches!(self.choice[i], Choice::Create))
            .collect();
        // twice the k-sum forced to each creator's largest allowed index
        let top: Vec<i64> = creators
            .iter()
            .map(|&i| match self.sector {
                Sector::Untwisted => -2 * self.factors[i].n as i64,
                Sector::Twisted => -1,
            })
            .collect();
        let slack2 = top.iter().sum::<i64>() - rest2;
        if slack2 < 0 || slack2 % 2 != 0 {
            return;
        }
        if creators.is_empty() && slack2 != 0 {
            return;
        }
        let mut remaining: Vec<Mode> = self
            .target
            .iter()
            .zip(&self.used)
            .filter(|(_, u)| !**u)
            .map(|(m, _)| *m)
            .collect();
        let base_len = remaining.len();
        let mut extra = vec![0i64; creators.len()];
        let base = match lam {
            Some(l) => self.coeff.mul(&l),
            None => self.coeff.clone(),
        };
        compositions(slack2 / 2, &mut extra, 0, &mut |extra| {
            let mut c = acc.clone();
            remaining.truncate(base_len);
            for (slot, &i) in creators.iter().enumerate() {
                let k2 = top[slot] - 2 * extra[slot];
                c *= d_coeff(k2, self.factors[i].n);
                remaining.push(Mode { gen: self.factors[i].gen, twice: k2 as i32 });
            }
            let m = FockMonomial::from_modes(remaining.clone());
            self.out.add_term(m, base.scale(&c));
        });
    }
}

fn compositions(total: i64, parts: &mut [i64], i: usize, f: &mut dyn FnMut(&[i64])) {
    if parts.is_empty() {
        if total == 0 {
            f(parts);
        }
        return;
    }
    if i == parts.len() - 1 {
        parts[i] = total;
        f(parts);
        return;
    }
    for x in 0..=total {
        parts[i] = x;
        compositions(total - x, parts, i + 1, f);
    }
}

fn check_untwisted_source(v: &FockVector<Q>) -> Result<()> {
    if v.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch("vertex operators are indexed by states of H".into()));
    }
    Ok(())
}

/// The component `v_m` of `Y(v, z)` applied to an untwisted `target`.
pub fn mode_operator<C: Scalar>(
    v: &FockVector<Q>,
    m: i64,
    target: &FockVector<C>,
    hw: Option<&[C]>,
) -> Result<FockVector<C>> {
    check_untwisted_source(v)?;
    if target.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch("untwisted operator on a twisted vector".into()));
    }
    let mut out = FockVector::zero(Sector::Untwisted);
    for (s, cs) in v.terms() {
        for (t, ct) in target.terms() {
            component_into(s, 2 * m, t, Sector::Untwisted, hw, &ct.scale(cs), &mut out);
        }
    }
    Ok(out)
}

/// `omega_a = 1/2 h_a(-1)^2 1`.
pub fn omega(a: usize) -> FockVector<Q> {
    let h = Mode { gen: a as u16, twice: -2 };
    FockVector::from_term(Sector::Untwisted, FockMonomial::from_modes(vec![h, h]), frac(1, 2))
}

/// `L_a(n)`, the component `(omega_a)_{n+1}`.
pub fn virasoro<C: Scalar>(a: usize, n: i64, v: &FockVector<C>, hw: Option<&[C]>) -> Result<FockVector<C>> {
    mode_operator(&omega(a), n + 1, v, hw)
}

/// `L(n) = sum_a L_a(n)` for a rank `ell`.
pub fn virasoro_total<C: Scalar>(ell: usize, n: i64, v: &FockVector<C>, hw: Option<&[C]>) -> Result<FockVector<C>> {
    let mut out = FockVector::zero(v.sector());
    for a in 1..=ell {
        out.add_assign(&virasoro(a, n, v, hw)?);
    }
    Ok(out)
}

/// `o(v) = v_{wt v - 1}`, extended linearly over homogeneous components.
pub fn zero_mode<C: Scalar>(v: &FockVector<Q>, target: &FockVector<C>, hw: Option<&[C]>) -> Result<FockVector<C>> {
    check_untwisted_source(v)?;
    let mut out = FockVector::zero(target.sector());
    for (w2, comp) in v.homogeneous_components() {
        out.add_assign(&mode_operator(&comp, w2 as i64 / 2 - 1, target, hw)?);
    }
    Ok(out)
}
