//! Exact combinatorics and linear algebra of the irreducible O(4)
//! representations (τ_λ, V_λ) realized on the generators u_l, plus the
//! inducing data of the three parabolic families with their derived
//! invariants (minimal K-type, Capelli eigenvalues, genericity guard).
//!
//! All linear algebra here is exact: coefficients are Gaussian rationals.

use crate::gamma::C64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error("not a valid highest weight: {0:?}")]
    InvalidWeight(HighestWeight),
    #[error("invalid inducing datum: {0}")]
    InvalidDatum(String),
    #[error("index {0:?} does not lie in S_lambda for {1:?}")]
    InvalidIndex(GeneratorIndex, HighestWeight),
    #[error("relation matrix inconsistent with the selected basis")]
    InconsistentRelations,
}

pub type Result<T> = std::result::Result<T, RepError>;

/// Highest weight λ = (λ1, λ2, λ3) with λ1 >= λ2 >= 0 and λ2 λ3 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HighestWeight {
    pub lam1: i32,
    pub lam2: i32,
    pub lam3: i32,
}

impl HighestWeight {
    pub fn new(lam1: i32, lam2: i32, lam3: i32) -> Result<Self> {
        let w = HighestWeight { lam1, lam2, lam3 };
        if lam1 >= lam2 && lam2 >= 0 && (lam3 == 0 || lam3 == 1) && lam2 * lam3 == 0 {
            Ok(w)
        } else {
            Err(RepError::InvalidWeight(w))
        }
    }

    /// dim V_λ = 2(λ1-λ2+1)(λ1+λ2+1) for λ2 > 0, (λ1+1)^2 for λ2 = 0.
    pub fn dim(&self) -> usize {
        if self.lam2 > 0 {
            2 * (self.lam1 - self.lam2 + 1) as usize * (self.lam1 + self.lam2 + 1) as usize
        } else {
            ((self.lam1 + 1) * (self.lam1 + 1)) as usize
        }
    }
}

/// Index l = (l1,l2,l3,l4, l12,l13,l14,l23,l24,l34) of a generator u_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorIndex(pub [i16; 10]);

/// Position of the pair slot {i,j} (1-based, i != j) in the index tuple.
pub fn pair_slot(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    match (i, j) {
        (1, 2) => 4,
        (1, 3) => 5,
        (1, 4) => 6,
        (2, 3) => 7,
        (2, 4) => 8,
        (3, 4) => 9,
        _ => panic!("bad pair ({i},{j})"),
    }
}

impl GeneratorIndex {
    pub const ZERO: GeneratorIndex = GeneratorIndex([0; 10]);

    pub fn e(i: usize) -> Self {
        assert!((1..=4).contains(&i));
        let mut v = [0i16; 10];
        v[i - 1] = 1;
        GeneratorIndex(v)
    }

    pub fn e_pair(i: usize, j: usize) -> Self {
        let mut v = [0i16; 10];
        v[pair_slot(i, j)] = 1;
        GeneratorIndex(v)
    }

    pub fn slot(&self, k: usize) -> i16 {
        self.0[k]
    }

    /// l_i for 1 <= i <= 4.
    pub fn single(&self, i: usize) -> i16 {
        self.0[i - 1]
    }

    /// l_{ij} (order-insensitive).
    pub fn pair(&self, i: usize, j: usize) -> i16 {
        self.0[pair_slot(i, j)]
    }

    pub fn add(&self, other: &GeneratorIndex) -> GeneratorIndex {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        GeneratorIndex(v)
    }

    /// Componentwise sum of signed steps; `None` when a coordinate would
    /// go negative (then u_l = 0 by convention).
    pub fn try_shift(&self, deltas: &[(usize, i16)]) -> Option<GeneratorIndex> {
        let mut v = self.0;
        for &(slot, d) in deltas {
            v[slot] += d;
            if v[slot] < 0 {
                return None;
            }
        }
        Some(GeneratorIndex(v))
    }

    pub fn first_block_sum(&self) -> i32 {
        self.0[..4].iter().map(|&x| x as i32).sum()
    }

    pub fn second_block_sum(&self) -> i32 {
        self.0[4..].iter().map(|&x| x as i32).sum()
    }

    pub fn in_s_lambda(&self, lam: &HighestWeight) -> bool {
        self.0.iter().all(|&x| x >= 0)
            && self.first_block_sum() == lam.lam1 - lam.lam2
            && self.second_block_sum() == lam.lam2
    }

    /// Index reversal used by the contragredient:
    /// (l4,l3,l2,l1, l34,l24,l23,l14,l13,l12).
    pub fn reversed(&self) -> GeneratorIndex {
        let l = &self.0;
        GeneratorIndex([l[3], l[2], l[1], l[0], l[9], l[8], l[7], l[6], l[5], l[4]])
    }
}

/// Gaussian rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QQi {
    pub re: BigRational,
    pub im: BigRational,
}

impl QQi {
    pub fn zero() -> Self {
        QQi { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        QQi { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        QQi { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn i_times(n: i64) -> Self {
        QQi { re: BigRational::zero(), im: BigRational::from_integer(BigInt::from(n)) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &QQi) -> QQi {
        QQi { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn neg(&self) -> QQi {
        QQi { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, other: &QQi) -> QQi {
        QQi {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn scale_rat(&self, r: &BigRational) -> QQi {
        QQi { re: &self.re * r, im: &self.im * r }
    }

    pub fn to_c64(&self) -> C64 {
        fn f(r: &BigRational) -> f64 {
            let n = r.numer();
            let d = r.denom();
            // small values in practice; fall back via string only if huge
            n.to_string().parse::<f64>().unwrap() / d.to_string().parse::<f64>().unwrap()
        }
        C64::new(f(&self.re), f(&self.im))
    }
}

/// Finite formal linear combination of generators with exact coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeneratorCombo {
    pub terms: BTreeMap<GeneratorIndex, QQi>,
}

impl GeneratorCombo {
    pub fn zero() -> Self {
        GeneratorCombo::default()
    }

    pub fn single(l: GeneratorIndex) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(l, QQi::one());
        GeneratorCombo { terms }
    }

    pub fn add_term(&mut self, l: GeneratorIndex, coeff: QQi) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(l).or_insert_with(QQi::zero);
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.terms.remove(&l);
        }
    }

    pub fn add_combo(&mut self, other: &GeneratorCombo, scale: &QQi) {
        for (l, c) in &other.terms {
            self.add_term(*l, c.mul(scale));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// All of S_λ in lexicographic order of the 10-tuples.
pub fn enumerate_s(lam: &HighestWeight) -> Result<Vec<GeneratorIndex>> {
    HighestWeight::new(lam.lam1, lam.lam2, lam.lam3)?;
    let first = lam.lam1 - lam.lam2;
    let second = lam.lam2;
    let mut out = Vec::new();
    let firsts = compositions(first, 4);
    let seconds = compositions(second, 6);
    for f in &firsts {
        for s in &seconds {
            let mut v = [0i16; 10];
            for (k, &x) in f.iter().enumerate() {
                v[k] = x as i16;
            }
            for (k, &x) in s.iter().enumerate() {
                v[4 + k] = x as i16;
            }
            out.push(GeneratorIndex(v));
        }
    }
    out.sort();
    Ok(out)
}

fn compositions(total: i32, parts: usize) -> Vec<Vec<i32>> {
    fn rec(total: i32, parts: usize, prefix: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=total {
            prefix.push(x);
            rec(total - x, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Membership in the selected basis subset S°_λ.
pub fn in_basis(lam: &HighestWeight, l: &GeneratorIndex) -> bool {
    let (l3, l4) = (l.single(3), l.single(4));
    let (l12, l13, l14) = (l.pair(1, 2), l.pair(1, 3), l.pair(1, 4));
    let (l23, l24, l34) = (l.pair(2, 3), l.pair(2, 4), l.pair(3, 4));
    let _ = l13;
    if lam.lam2 == 0 {
        l4 <= 1
    } else {
        (l3 > 0 && l4 == 0 && l12 == 0 && l34 == 0 && l14 + l23 + l24 <= 1)
            || (l3 == 0 && l4 == 0 && l24 == 0 && l12 > 0 && l14 + l23 + l34 <= 1)
            || (l3 == 0 && l4 == 0 && l12 == 0 && l14 + l23 + l24 + l34 <= 1)
    }
}

/// The basis index set S°_λ in lexicographic order.
pub fn basis_s_circ(lam: &HighestWeight) -> Result<Vec<GeneratorIndex>> {
    Ok(enumerate_s(lam)?.into_iter().filter(|l| in_basis(lam, l)).collect())
}

/// All relation rows over S_λ, with integer coefficients.
pub fn relation_rows(lam: &HighestWeight) -> Result<Vec<BTreeMap<GeneratorIndex, i64>>> {
    HighestWeight::new(lam.lam1, lam.lam2, lam.lam3)?;
    let mut rows = Vec::new();
    let mut push = |terms: Vec<(GeneratorIndex, i64)>| {
        let mut row: BTreeMap<GeneratorIndex, i64> = BTreeMap::new();
        for (l, c) in terms {
            *row.entry(l).or_insert(0) += c;
        }
        row.retain(|_, c| *c != 0);
        if !row.is_empty() {
            rows.push(row);
        }
    };

    // (i): Σ_i u_{l + 2 e_i} = 0 for l in S_{λ - (2,0,0)}
    if lam.lam1 - lam.lam2 >= 2 {
        let base = HighestWeight { lam1: lam.lam1 - 2, lam2: lam.lam2, lam3: lam.lam3 };
        for l in enumerate_s(&base)? {
            push((1..=4).map(|i| (l.try_shift(&[(i - 1, 2)]).unwrap(), 1)).collect());
        }
    }

    // (ii): for l in S_{λ - (2,1,0)}
    if lam.lam1 > lam.lam2 && lam.lam2 > 0 {
        let base = HighestWeight { lam1: lam.lam1 - 2, lam2: lam.lam2 - 1, lam3: lam.lam3 };
        for l in enumerate_s(&base)? {
            for i in 1..=4usize {
                let mut terms = Vec::new();
                for j in 1..=4usize {
                    if j == i {
                        continue;
                    }
                    let sgn = if j > i { 1 } else { -1 };
                    terms.push((
                        l.try_shift(&[(j - 1, 1), (pair_slot(i, j), 1)]).unwrap(),
                        sgn,
                    ));
                }
                push(terms);
            }
            for i in 1..=2usize {
                for j in (i + 1)..=3usize {
                    for k in (j + 1)..=4usize {
                        push(vec![
                            (l.try_shift(&[(i - 1, 1), (pair_slot(j, k), 1)]).unwrap(), 1),
                            (l.try_shift(&[(j - 1, 1), (pair_slot(i, k), 1)]).unwrap(), -1),
                            (l.try_shift(&[(k - 1, 1), (pair_slot(i, j), 1)]).unwrap(), 1),
                        ]);
                    }
                }
            }
        }
    }

    // (iii): for l in S_{λ - (2,2,0)}
    if lam.lam2 >= 2 {
        let base = HighestWeight { lam1: lam.lam1 - 2, lam2: lam.lam2 - 2, lam3: lam.lam3 };
        for l in enumerate_s(&base)? {
            for i in 1..=4usize {
                for j in i..=4usize {
                    let mut terms = Vec::new();
                    for k in 1..=4usize {
                        if k == i || k == j {
                            continue;
                        }
                        let sgn = ((k as i64 - i as i64) * (k as i64 - j as i64)).signum();
                        terms.push((
                            l.try_shift(&[(pair_slot(i, k), 1), (pair_slot(j, k), 1)]).unwrap(),
                            sgn,
                        ));
                    }
                    push(terms);
                }
            }
            push(vec![
                (l.try_shift(&[(pair_slot(1, 2), 1), (pair_slot(3, 4), 1)]).unwrap(), 1),
                (l.try_shift(&[(pair_slot(1, 3), 1), (pair_slot(2, 4), 1)]).unwrap(), -1),
                (l.try_shift(&[(pair_slot(1, 4), 1), (pair_slot(2, 3), 1)]).unwrap(), 1),
            ]);
        }
    }

    Ok(rows)
}

/// Dense exact relation matrix, rows = relations, columns = enumerate_s.
pub fn relation_matrix(lam: &HighestWeight) -> Result<Vec<Vec<BigRational>>> {
    let cols = enumerate_s(lam)?;
    let col_of: HashMap<GeneratorIndex, usize> =
        cols.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let rows = relation_rows(lam)?;
    let mut m = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = vec![BigRational::zero(); cols.len()];
        for (l, c) in row {
            r[col_of[&l]] = BigRational::from_integer(BigInt::from(c));
        }
        m.push(r);
    }
    Ok(m)
}

/// Exact rank by Gaussian elimination.
pub fn matrix_rank(m: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = m.to_vec();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for r in (row + 1)..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..cols {
                let delta = &factor * &m[row][c];
                m[r][c] = &m[r][c] - delta;
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

/// Rewrite table: each non-basis generator expressed over S°_λ.
pub struct ReductionTable {
    pub lam: HighestWeight,
    pub rewrite: HashMap<GeneratorIndex, Vec<(GeneratorIndex, BigRational)>>,
}

static REDUCTION_CACHE: Lazy<Mutex<HashMap<HighestWeight, Arc<ReductionTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Builds (or fetches) the exact rewrite table for λ.
///
/// Columns are ordered non-basis-first (each in lexicographic order), so
/// Gaussian elimination pivots exactly on the non-basis columns; a pivot
/// landing in a basis column would contradict Prop-2.4-style counting and
/// raises [`RepError::InconsistentRelations`].
pub fn reduction_table(lam: &HighestWeight) -> Result<Arc<ReductionTable>> {
    if let Some(t) = REDUCTION_CACHE.lock().unwrap().get(lam) {
        return Ok(t.clone());
    }
    let all = enumerate_s(lam)?;
    let (non_basis, basis): (Vec<GeneratorIndex>, Vec<GeneratorIndex>) =
        all.into_iter().partition(|l| !in_basis(lam, l));
    let order: Vec<GeneratorIndex> =
        non_basis.iter().chain(basis.iter()).copied().collect();
    let col_of: HashMap<GeneratorIndex, usize> =
        order.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let raw = relation_rows(lam)?;
    let mut m: Vec<Vec<BigRational>> = raw
        .into_iter()
        .map(|row| {
            let mut r = vec![BigRational::zero(); order.len()];
            for (l, c) in row {
                r[col_of[&l]] = BigRational::from_integer(BigInt::from(c));
            }
            r
        })
        .collect();

    // reduced row echelon form with the fixed column order
    let rows = m.len();
    let cols = order.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for c in col..cols {
            m[row][c] = &m[row][c] / &pivot;
        }
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..cols {
                let delta = &factor * &m[row][c];
                m[r][c] = &m[r][c] - delta;
            }
        }
        pivots.push((row, col));
        row += 1;
    }

    // every non-basis column must be a pivot, and no basis column may be
    let n_non_basis = non_basis.len();
    if pivots.len() != n_non_basis || pivots.iter().any(|&(_, c)| c >= n_non_basis) {
        return Err(RepError::InconsistentRelations);
    }

    let mut rewrite = HashMap::new();
    for (r, c) in pivots {
        let mut expr = Vec::new();
        for (k, idx) in order.iter().enumerate().skip(n_non_basis) {
            if !m[r][k].is_zero() {
                expr.push((*idx, -m[r][k].clone()));
            }
        }
        rewrite.insert(order[c], expr);
    }
    let table = Arc::new(ReductionTable { lam: *lam, rewrite });
    REDUCTION_CACHE.lock().unwrap().insert(*lam, table.clone());
    Ok(table)
}

/// The unique representative of `v` modulo the relation module, supported
/// on S°_λ.
pub fn reduce_to_basis(lam: &HighestWeight, v: &GeneratorCombo) -> Result<GeneratorCombo> {
    let table = reduction_table(lam)?;
    let mut out = GeneratorCombo::zero();
    for (l, coeff) in &v.terms {
        if !l.in_s_lambda(lam) {
            return Err(RepError::InvalidIndex(*l, *lam));
        }
        if in_basis(lam, l) {
            out.add_term(*l, coeff.clone());
        } else {
            let expr = table
                .rewrite
                .get(l)
                .ok_or(RepError::InconsistentRelations)?;
            for (b, r) in expr {
                out.add_term(*b, coeff.scale_rat(r));
            }
        }
    }
    Ok(out)
}

/// τ_λ(diag(ε1..ε4)) u_l: a signed multiple of u_l.
pub fn act_torus(lam: &HighestWeight, eps: [i8; 4], l: &GeneratorIndex) -> GeneratorCombo {
    let exps = [
        l.single(1) + l.pair(1, 2) + l.pair(1, 3) + l.pair(1, 4) + lam.lam3 as i16,
        l.single(2) + l.pair(1, 2) + l.pair(2, 3) + l.pair(2, 4) + lam.lam3 as i16,
        l.single(3) + l.pair(1, 3) + l.pair(2, 3) + l.pair(3, 4) + lam.lam3 as i16,
        l.single(4) + l.pair(1, 4) + l.pair(2, 4) + l.pair(3, 4) + lam.lam3 as i16,
    ];
    let mut sign = 1i64;
    for (e, x) in eps.iter().zip(exps.iter()) {
        if *e < 0 && x % 2 != 0 {
            sign = -sign;
        }
    }
    let mut combo = GeneratorCombo::zero();
    combo.add_term(*l, QQi::from_int(sign));
    combo
}

/// τ_λ(E^k_{i,j}) u_l (for i < j), reduced to the basis.
pub fn act_so4(lam: &HighestWeight, i: usize, j: usize, l: &GeneratorIndex) -> Result<GeneratorCombo> {
    assert!(i < j && (1..=4).contains(&i) && (1..=4).contains(&j));
    let mut combo = GeneratorCombo::zero();
    let li = l.single(i) as i64;
    let lj = l.single(j) as i64;
    if lj != 0 {
        if let Some(t) = l.try_shift(&[(j - 1, -1), (i - 1, 1)]) {
            combo.add_term(t, QQi::from_int(lj));
        }
    }
    if li != 0 {
        if let Some(t) = l.try_shift(&[(i - 1, -1), (j - 1, 1)]) {
            combo.add_term(t, QQi::from_int(-li));
        }
    }
    for k in 1..=4usize {
        if k == i || k == j {
            continue;
        }
        let sgn = ((k as i64 - i as i64) * (k as i64 - j as i64)).signum();
        let lkj = l.pair(k, j) as i64;
        let lki = l.pair(k, i) as i64;
        if lkj != 0 {
            if let Some(t) = l.try_shift(&[(pair_slot(k, j), -1), (pair_slot(k, i), 1)]) {
                combo.add_term(t, QQi::from_int(sgn * lkj));
            }
        }
        if lki != 0 {
            if let Some(t) = l.try_shift(&[(pair_slot(k, i), -1), (pair_slot(k, j), 1)]) {
                combo.add_term(t, QQi::from_int(-sgn * lki));
            }
        }
    }
    reduce_to_basis(lam, &combo)
}

/// Linear extension of [`act_so4`] to combinations.
pub fn act_so4_combo(
    lam: &HighestWeight,
    i: usize,
    j: usize,
    v: &GeneratorCombo,
) -> Result<GeneratorCombo> {
    let mut out = GeneratorCombo::zero();
    for (l, c) in &v.terms {
        let image = act_so4(lam, i, j, l)?;
        out.add_combo(&image, c);
    }
    Ok(out)
}

/// The three parabolic families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    P1111,
    P211,
    P22,
}

/// Sub-case of the P1111 family, determined by the sign pattern δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case1 {
    I,
    II,
    III,
    IV,
}

/// Inducing datum σ: family plus the (ν, κ, δ) parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducingDatum {
    pub family: Family,
    pub nu: Vec<C64>,
    pub kappa: Vec<i32>,
    pub delta: Vec<u8>,
}

impl InducingDatum {
    pub fn p1111(nu: [C64; 4], delta: [u8; 4]) -> Result<Self> {
        if delta.iter().any(|&d| d > 1) || delta.windows(2).any(|w| w[0] < w[1]) {
            return Err(RepError::InvalidDatum(
                "P1111 requires δ1 >= δ2 >= δ3 >= δ4 in {0,1}".into(),
            ));
        }
        Ok(InducingDatum {
            family: Family::P1111,
            nu: nu.to_vec(),
            kappa: vec![],
            delta: delta.to_vec(),
        })
    }

    pub fn p211(nu: [C64; 3], kappa1: i32, delta: [u8; 2]) -> Result<Self> {
        if kappa1 < 2 {
            return Err(RepError::InvalidDatum("P211 requires κ1 >= 2".into()));
        }
        if delta.iter().any(|&d| d > 1) || delta[0] < delta[1] {
            return Err(RepError::InvalidDatum("P211 requires δ2 >= δ3 in {0,1}".into()));
        }
        Ok(InducingDatum {
            family: Family::P211,
            nu: nu.to_vec(),
            kappa: vec![kappa1],
            delta: delta.to_vec(),
        })
    }

    pub fn p22(nu: [C64; 2], kappa: [i32; 2]) -> Result<Self> {
        if kappa[0] < kappa[1] || kappa[1] < 2 {
            return Err(RepError::InvalidDatum("P22 requires κ1 >= κ2 >= 2".into()));
        }
        Ok(InducingDatum {
            family: Family::P22,
            nu: nu.to_vec(),
            kappa: kappa.to_vec(),
            delta: vec![],
        })
    }

    pub fn case1(&self) -> Option<Case1> {
        if self.family != Family::P1111 {
            return None;
        }
        Some(match (self.delta[0], self.delta[1], self.delta[2], self.delta[3]) {
            (0, 0, 0, 0) | (1, 1, 1, 1) => Case1::I,
            (1, 0, 0, 0) => Case1::II,
            (1, 1, 0, 0) => Case1::III,
            (1, 1, 1, 0) => Case1::IV,
            _ => unreachable!("validated descending"),
        })
    }

    /// (κ1, κ2) through the common dictionary:
    /// case 1: (δ1-δ4, δ2-δ3); case 2: (κ1, δ2-δ3); case 3: (κ1, κ2).
    pub fn kappa12(&self) -> (i32, i32) {
        match self.family {
            Family::P1111 => (
                (self.delta[0] - self.delta[3]) as i32,
                (self.delta[1] - self.delta[2]) as i32,
            ),
            Family::P211 => (self.kappa[0], (self.delta[0] - self.delta[1]) as i32),
            Family::P22 => (self.kappa[0], self.kappa[1]),
        }
    }

    /// δ-parities used by the L/ε-factor tables (δ_i ≡ κ_i mod 2 where a
    /// discrete series sits in slot i).
    pub fn delta_parities(&self) -> [u8; 4] {
        match self.family {
            Family::P1111 => [self.delta[0], self.delta[1], self.delta[2], self.delta[3]],
            Family::P211 => [(self.kappa[0] % 2) as u8, self.delta[0], self.delta[1], 0],
            Family::P22 => [(self.kappa[0] % 2) as u8, (self.kappa[1] % 2) as u8, 0, 0],
        }
    }

    pub fn nu1_prime(&self) -> C64 {
        match self.family {
            Family::P1111 => match self.case1().unwrap() {
                Case1::IV => self.nu[3],
                _ => self.nu[0],
            },
            _ => self.nu[0],
        }
    }

    /// Minimal K-type τ_(κ1, κ2, δ3).
    pub fn minimal_k_type(&self) -> HighestWeight {
        let (k1, k2) = self.kappa12();
        let d3 = match self.family {
            Family::P1111 => self.delta[2] as i32,
            Family::P211 => self.delta[1] as i32,
            Family::P22 => 0,
        };
        HighestWeight { lam1: k1, lam2: k2, lam3: d3 }
    }

    /// The 4-tuple whose elementary symmetric polynomials are γ1..γ4.
    pub fn spectral_tuple(&self) -> [C64; 4] {
        match self.family {
            Family::P1111 => [self.nu[0], self.nu[1], self.nu[2], self.nu[3]],
            Family::P211 => {
                let h = (self.kappa[0] - 1) as f64 / 2.0;
                [self.nu[0] + h, self.nu[0] - h, self.nu[1], self.nu[2]]
            }
            Family::P22 => {
                let h1 = (self.kappa[0] - 1) as f64 / 2.0;
                let h2 = (self.kappa[1] - 1) as f64 / 2.0;
                [self.nu[0] + h1, self.nu[0] - h1, self.nu[1] + h2, self.nu[1] - h2]
            }
        }
    }

    /// Capelli eigenvalues γ_i = s_i(spectral tuple).
    pub fn capelli_eigenvalues(&self) -> [C64; 4] {
        elementary_symmetric(self.spectral_tuple())
    }

    pub fn gamma1(&self) -> C64 {
        let t = self.spectral_tuple();
        t[0] + t[1] + t[2] + t[3]
    }

    /// Parity b of the Schwartz-function index in the zeta integrals.
    pub fn b_parity(&self) -> u8 {
        match self.family {
            Family::P1111 => {
                (self.delta.iter().map(|&d| d as u32).sum::<u32>() % 2) as u8
            }
            Family::P211 => {
                ((self.kappa[0] as u32 + self.delta[0] as u32 + self.delta[1] as u32) % 2) as u8
            }
            Family::P22 => ((self.kappa[0] + self.kappa[1]) % 2) as u8,
        }
    }

    /// Genericity guard Ω0: pairwise ν-differences off (1/2)Z, plus
    /// ν1+ν2 != ν3+ν4 in the P1111 case. Tolerance 1e-9.
    pub fn omega0_guard(&self) -> bool {
        const TOL: f64 = 1e-9;
        let in_half_z = |x: C64| -> bool {
            if x.im.abs() > TOL {
                return false;
            }
            let twice = 2.0 * x.re;
            (twice - twice.round()).abs() <= TOL
        };
        let n = self.nu.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if in_half_z(self.nu[i] - self.nu[j]) {
                    return false;
                }
            }
        }
        if self.family == Family::P1111 {
            let d = (self.nu[0] + self.nu[1]) - (self.nu[2] + self.nu[3]);
            if d.norm() <= TOL {
                return false;
            }
        }
        true
    }

    /// σ with ν replaced by -ν (the contragredient datum).
    pub fn contragredient(&self) -> InducingDatum {
        InducingDatum {
            family: self.family,
            nu: self.nu.iter().map(|v| -v).collect(),
            kappa: self.kappa.clone(),
            delta: self.delta.clone(),
        }
    }
}

pub fn elementary_symmetric(a: [C64; 4]) -> [C64; 4] {
    let e1 = a[0] + a[1] + a[2] + a[3];
    let e2 = a[0] * a[1]
        + a[0] * a[2]
        + a[0] * a[3]
        + a[1] * a[2]
        + a[1] * a[3]
        + a[2] * a[3];
    let e3 = a[0] * a[1] * a[2] + a[0] * a[1] * a[3] + a[0] * a[2] * a[3] + a[1] * a[2] * a[3];
    let e4 = a[0] * a[1] * a[2] * a[3];
    [e1, e2, e3, e4]
}
