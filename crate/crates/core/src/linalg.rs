//! Sparse exact linear algebra over the rationals.
//!
//! Large spanning sets are first filtered modulo a 61-bit prime to find an
//! independent subset; the exact echelon form is then built from that subset
//! alone. Rows independent modulo `p` are independent over `Q`. A row can be
//! dropped only when it is dependent on the kept rows modulo `p`; if that
//! dependence does not hold over `Q`, the span is smaller than it should be,
//! which can turn a proof into "unknown" but never the other way.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{denom_lcm, make_primitive, Q};

/// `2^61 - 1`.
pub const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

pub fn to_modp(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = x.mod_floor(&p);
    r.to_u64().expect("reduced residue fits in u64")
}

/// A sparse integer row, entries sorted by column with no zeros.
pub type IntRow = Vec<(usize, BigInt)>;

/// Clears denominators of a sparse rational row and makes it primitive.
pub fn integer_row(row: &BTreeMap<usize, Q>) -> IntRow {
    let l = denom_lcm(row.values());
    let mut vals: Vec<BigInt> = row
        .values()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect();
    make_primitive(&mut vals);
    row.keys().copied().zip(vals).collect()
}

/// Reduced row echelon form over `F_p` with dense rows; used only to decide
/// which rows are independent.
pub struct ModpRref {
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivot_row: Vec<Option<usize>>,
    pivot_cols: Vec<usize>,
}

impl ModpRref {
    pub fn new(ncols: usize) -> Self {
        ModpRref { ncols, rows: Vec::new(), pivot_row: vec![None; ncols], pivot_cols: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts the row if it is independent of the current span.
    pub fn try_insert(&mut self, row: &IntRow) -> bool {
        let mut dense = vec![0u64; self.ncols];
        for (c, v) in row {
            dense[*c] = to_modp(v);
        }
        // only pivot columns touched by the original row need clearing; RREF
        // rows have zeros at every other pivot column
        for (c, _) in row {
            if let Some(r) = self.pivot_row[*c] {
                let f = dense[*c];
                if f != 0 {
                    let prow = &self.rows[r];
                    for (d, pv) in dense.iter_mut().zip(prow) {
                        if *pv != 0 {
                            *d = (*d + PRIME - mulmod(f, *pv)) % PRIME;
                        }
                    }
                }
            }
        }
        let Some(lead) = dense.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = invmod(dense[lead]);
        for d in dense.iter_mut() {
            if *d != 0 {
                *d = mulmod(*d, inv);
            }
        }
        // clear the new pivot column from existing rows
        for r in self.rows.iter_mut() {
            let f = r[lead];
            if f != 0 {
                for (x, nv) in r.iter_mut().zip(&dense) {
                    if *nv != 0 {
                        *x = (*x + PRIME - mulmod(f, *nv)) % PRIME;
                    }
                }
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.pivot_cols.push(lead);
        self.rows.push(dense);
        true
    }
}

/// An exact row echelon form with integer primitive rows.
///
/// Pivots (first nonzero column of each row) are distinct. Rows are not fully
/// reduced; the normal form of a vector is still unique because it is zero at
/// every pivot column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<EchelonRow>,
    #[serde(skip)]
    pivot_index: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EchelonRow {
    #[serde(with = "int_row_serde")]
    pub entries: IntRow,
    /// Combination of source rows producing this row, when tracked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combo: Option<BTreeMap<usize, Q>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivot_index: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[EchelonRow] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_index.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_index.contains_key(&col)
    }

    /// Rebuilds the pivot lookup after deserialization.
    pub fn reindex(&mut self) {
        self.pivot_index = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.entries[0].0, i))
            .collect();
    }

    /// Inserts a row, reducing its leading entry until it lands on a free
    /// column. Returns false if the row reduces to zero. `source` records the
    /// row's origin when certificates are tracked.
    pub fn insert(&mut self, row: IntRow, source: Option<usize>) -> bool {
        let mut row = row;
        let mut combo = source.map(|s| {
            let mut m = BTreeMap::new();
            m.insert(s, Q::one());
            m
        });
        loop {
            let Some((lead, lv)) = row.first().cloned() else {
                return false;
            };
            let Some(&pi) = self.pivot_index.get(&lead) else {
                break;
            };
            let prow = &self.rows[pi];
            let pv = &prow.entries[0].1;
            let g = lv.gcd(pv);
            let a = pv / &g;
            let b = &lv / &g;
            // row <- a*row - b*prow
            row = combine(&row, &a, &prow.entries, &b);
            let content = primitive_in_place(&mut row);
            if let (Some(c), Some(pc)) = (combo.as_mut(), prow.combo.as_ref()) {
                let aq = Q::from_integer(a.clone());
                let bq = Q::from_integer(b.clone());
                for v in c.values_mut() {
                    *v *= &aq;
                }
                for (k, v) in pc {
                    let e = c.entry(*k).or_insert_with(Q::zero);
                    *e -= v * &bq;
                }
                c.retain(|_, v| !v.is_zero());
                let cq = Q::from_integer(content);
                for v in c.values_mut() {
                    *v /= &cq;
                }
            }
        }
        let lead = row[0].0;
        self.pivot_index.insert(lead, self.rows.len());
        self.rows.push(EchelonRow { entries: row, combo });
        true
    }

    /// Renames the source indices recorded in row combinations.
    pub fn map_sources(&mut self, f: impl Fn(usize) -> usize) {
        for r in self.rows.iter_mut() {
            if let Some(c) = r.combo.take() {
                r.combo = Some(c.into_iter().map(|(k, v)| (f(k), v)).collect());
            }
        }
    }

    /// Normal form of a rational vector: zero at every pivot column.
    pub fn reduce(&self, x: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        self.reduce_with(x, None)
    }

    fn reduce_with(&self, x: &BTreeMap<usize, Q>, mut used: Option<&mut BTreeMap<usize, Q>>) -> BTreeMap<usize, Q> {
        let mut x = x.clone();
        let mut cursor = 0usize;
        loop {
            let next = x
                .range(cursor..)
                .find(|(c, _)| self.pivot_index.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, val)) = next else {
                break;
            };
            let r = &self.rows[self.pivot_index[&col]];
            let f = val / Q::from_integer(r.entries[0].1.clone());
            for (c, v) in &r.entries {
                let e = x.entry(*c).or_insert_with(Q::zero);
                *e -= &f * Q::from_integer(v.clone());
                if e.is_zero() {
                    x.remove(c);
                }
            }
            if let Some(u) = used.as_deref_mut() {
                if let Some(combo) = &r.combo {
                    for (k, v) in combo {
                        let e = u.entry(*k).or_insert_with(Q::zero);
                        *e += v * &f;
                    }
                }
            }
            cursor = col + 1;
        }
        x
    }

    /// For `x` in the row space, the combination of source rows equal to it.
    /// Requires rows inserted with tracked sources.
    pub fn certificate(&self, x: &BTreeMap<usize, Q>) -> Option<BTreeMap<usize, Q>> {
        let mut used = BTreeMap::new();
        let nf = self.reduce_with(x, Some(&mut used));
        if !nf.is_empty() {
            return None;
        }
        used.retain(|_, v| !v.is_zero());
        Some(used)
    }
}

fn combine(x: &IntRow, a: &BigInt, y: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ci = x.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = y.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, a * &x[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(b * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, a * &x[i - 1].1 - b * &y[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Divides out the content (keeping the sign) and returns it.
fn primitive_in_place(row: &mut IntRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return g;
        }
    }
    if g.is_zero() {
        return BigInt::one();
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
    }
    g
}

/// Builds an exact echelon of the span of `rows`, using the modular filter to
/// skip dependent rows. Returns the echelon and the indices of the rows kept.
pub fn echelonize(ncols: usize, rows: &[IntRow], track: bool) -> (Echelon, Vec<usize>) {
    let mut modp = ModpRref::new(ncols);
    let mut kept = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if modp.rank() == ncols {
            break;
        }
        if !r.is_empty() && modp.try_insert(r) {
            kept.push(i);
        }
    }
    let mut e = Echelon::new(ncols);
    for &i in &kept {
        let ok = e.insert(rows[i].clone(), track.then_some(i));
        debug_assert!(ok, "row independent mod p must be independent over Q");
    }
    (e, kept)
}

/// Rank of a list of rational rows.
pub fn rank_of(rows: &[BTreeMap<usize, Q>], ncols: usize) -> usize {
    let int_rows: Vec<IntRow> = rows.iter().map(integer_row).collect();
    echelonize(ncols, &int_rows, false).0.rank()
}

/// Solves `target = sum_i x_i rows[i]` exactly. Returns `None` when the target
/// is outside the span; the solution is unique when the rows are independent.
pub fn solve(rows: &[BTreeMap<usize, Q>], target: &BTreeMap<usize, Q>, ncols: usize) -> Option<Vec<Q>> {
    let mut e = Echelon::new(ncols);
    for (i, r) in rows.iter().enumerate() {
        e.insert(integer_row(r), Some(i));
    }
    // rescale: integer_row divided row i by a content factor; track it
    let scales: Vec<Q> = rows
        .iter()
        .map(|r| {
            let ir = integer_row(r);
            match (r.iter().next(), ir.first()) {
                (Some((_, q0)), Some((_, i0))) => Q::from_integer(i0.clone()) / q0,
                _ => Q::one(),
            }
        })
        .collect();
    let cert = e.certificate(target)?;
    let mut x = vec![Q::zero(); rows.len()];
    for (i, v) in cert {
        x[i] = v * &scales[i];
    }
    Some(x)
}

mod int_row_serde {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(row: &[(usize, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(usize, String)> = row.iter().map(|(c, x)| (*c, x.to_string())).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(usize, BigInt)>, D::Error> {
        let v: Vec<(usize, String)> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|(c, x)| x.parse().map(|b| (c, b)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Absolute value of the largest entry, in bits; a growth diagnostic.
pub fn max_bits(e: &Echelon) -> u64 {
    e.rows
        .iter()
        .flat_map(|r| r.entries.iter())
        .map(|(_, v)| v.abs().bits())
        .max()
        .unwrap_or(0)
}
