//! Coefficient tables `A(n; q)` of the multi-parameter character
//! `chi(x; q) = sum_n A(n; q) x^n` of a level-k module.
//!
//! A table only ever holds the coefficient series; the substitution
//! `x_j -> x_j q^(a_ji)` of the character recurrence is applied as the
//! coefficient relation
//!
//! ```text
//! A(n; q) = A(n - c_i k e_i; q) q^(-c_i k + sum_m a_mi n_m),   c_i = 2/<a_i, a_i>.
//! ```
//!
//! Tables come in three flavours:
//! - closed form (simply-laced, level 1): `A(n) = A(0) q^(1/2 n C n^t)`. Only
//!   `A(0)` is held; entries are produced on demand, so even `E8` tables
//!   with tens of millions of supported points stay small.
//! - propagated from `k^l` seed series by the recurrence.
//! - user supplied, e.g. read from JSON.
//!
//! The first two determine `A(n)` for every `n` in `Z^l`. A user table is only
//! trusted on the bounding box of its listed points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::IdentityReport;
use crate::lattice::{root_lattice_form, QuadraticLattice};
use crate::lie::{LieType, RootSystemData};
use crate::qseries::{Mismatch, ProductSpec, QSeries};

#[derive(Clone, Debug)]
enum Storage {
    Theta { base: QSeries, overrides: BTreeMap<Vec<i64>, QSeries> },
    Explicit(BTreeMap<Vec<i64>, QSeries>),
}

/// Where entries are guaranteed, and a lower bound for the exponents of
/// entries that are not stored.
#[derive(Clone, Debug)]
enum Region {
    /// All of `Z^l`; `A(n)` has no terms below `1/2 n C n^t`.
    Quadratic,
    /// All of `Z^l`; `A(n)` has no terms below `E(n) + lows[n mod k]`.
    Cosets { level: i64, lows: BTreeMap<Vec<i64>, i64> },
    /// Only the box `lo..=hi`; entries outside it are unknown.
    Box { lo: Vec<i64>, hi: Vec<i64> },
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    data: RootSystemData,
    level: i64,
    order: i64,
    mu: Rational64,
    storage: Storage,
    region: Region,
}

/// A shifted, order-capped window onto a stored series.
#[derive(Clone, Copy)]
struct EntryView<'a> {
    series: Option<&'a QSeries>,
    shift: i64,
    order: i64,
}

impl<'a> EntryView<'a> {
    fn zero(order: i64) -> Self {
        EntryView { series: None, shift: 0, order }
    }

    fn times_q_pow(self, e: i64) -> Self {
        EntryView { shift: self.shift + e, order: self.order + e, ..self }
    }

    fn low(&self) -> i64 {
        self.series.map_or(self.order + 1, |s| s.low() + self.shift)
    }

    fn coeff(&self, e: i64) -> &'a BigInt {
        static ZERO: BigInt = BigInt::ZERO;
        match self.series {
            Some(s) => s.coeff_unchecked(e - self.shift),
            None => &ZERO,
        }
    }

    fn first_difference(&self, other: &EntryView<'_>, up_to: i64) -> Option<Mismatch> {
        if let (Some(a), Some(b)) = (self.series, other.series) {
            if std::ptr::eq(a, b) && self.shift == other.shift {
                return None;
            }
        }
        let start = self.low().min(other.low());
        (start..=up_to).find_map(|e| {
            let (a, b) = (self.coeff(e), other.coeff(e));
            (a != b).then(|| Mismatch { exponent: e, lhs: a.clone(), rhs: b.clone() })
        })
    }

    fn materialize(&self) -> QSeries {
        match self.series {
            Some(s) => s.shift(self.shift).truncate(self.order),
            None => QSeries::zero(self.order),
        }
    }
}

/// Source point and exponent of one recurrence step in direction `i`:
/// `A(n) = A(source) q^exponent`.
pub fn recurrence_factor(data: &RootSystemData, level: i64, n: &[i64], i: usize) -> Result<(Vec<i64>, i64)> {
    data.check_dim(n.len())?;
    if i >= data.rank() {
        return Err(Error::InvalidArgument(format!("direction {i} out of range for rank {}", data.rank())));
    }
    let mut source = n.to_vec();
    let e = recurrence_step(data, level, n, i, &mut source);
    Ok((source, e))
}

fn recurrence_step(data: &RootSystemData, level: i64, n: &[i64], i: usize, source: &mut [i64]) -> i64 {
    let step = data.coweight_factor()[i] * level;
    source.copy_from_slice(n);
    source[i] -= step;
    let column: i64 = data.cartan().iter().zip(n).map(|(row, &nm)| row[i] * nm).sum();
    column - step
}

/// Exponent accumulated while walking `n` into the seed box `{0..k-1}^l`
/// with single recurrence steps, one coordinate at a time in
/// `coordinate_order`. Returns the residue reached and the exponent `E` with
/// `A(n) = A(residue) q^E`.
pub fn propagation_exponent(
    data: &RootSystemData,
    level: i64,
    n: &[i64],
    coordinate_order: &[usize],
) -> Result<(Vec<i64>, i64)> {
    data.check_dim(n.len())?;
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    let mut cur = n.to_vec();
    let mut next = n.to_vec();
    let mut total = 0i64;
    for &i in coordinate_order {
        let step = data.coweight_factor()[i] * level;
        while cur[i] >= step {
            total += recurrence_step(data, level, &cur, i, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        while cur[i] < 0 {
            // A(m - step e_i) = A(m) q^(-e(m)) with m = cur + step e_i.
            cur[i] += step;
            total -= recurrence_step(data, level, &cur, i, &mut next);
        }
    }
    Ok((cur, total))
}

impl CharacterTable {
    pub fn lie_type(&self) -> LieType {
        self.data.lie_type()
    }

    pub fn root_data(&self) -> &RootSystemData {
        &self.data
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    /// Every entry is known through this order.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Lowest conformal weight.
    pub fn mu(&self) -> Rational64 {
        self.mu
    }

    pub fn set_mu(&mut self, mu: Rational64) {
        self.mu = mu;
    }

    /// Short description of which points are stored and which are guaranteed.
    pub fn support_policy(&self) -> String {
        match &self.region {
            Region::Quadratic => format!("all n with 1/2 nCn^t <= {}; every other entry vanishes through that order", self.order),
            Region::Cosets { level, .. } => format!(
                "all n whose propagated exponent from the level-{level} seed box is <= {}; every other entry vanishes through that order",
                self.order
            ),
            Region::Box { lo, hi } => format!("explicit entries; guaranteed on the box {lo:?}..={hi:?}"),
        }
    }

    fn guaranteed(&self, n: &[i64]) -> bool {
        match &self.region {
            Region::Box { lo, hi } => n.iter().zip(lo.iter().zip(hi)).all(|(x, (a, b))| a <= x && x <= b),
            _ => true,
        }
    }

    fn view(&self, n: &[i64]) -> Option<EntryView<'_>> {
        if !self.guaranteed(n) {
            return None;
        }
        Some(match &self.storage {
            Storage::Theta { base, overrides } => {
                if let Some(s) = (!overrides.is_empty()).then(|| overrides.get(n)).flatten() {
                    EntryView { series: Some(s), shift: 0, order: self.order }
                } else {
                    EntryView { series: Some(base), shift: self.data.quadratic_form_int(n), order: self.order }
                }
            }
            Storage::Explicit(map) => match map.get(n) {
                Some(s) => EntryView { series: Some(s), shift: 0, order: self.order },
                None => EntryView::zero(self.order),
            },
        })
    }

    fn theta_view(&self, n: &[i64], q: i64) -> Option<EntryView<'_>> {
        match &self.storage {
            Storage::Theta { base, overrides } => Some(match overrides.get(n) {
                Some(s) => EntryView { series: Some(s), shift: 0, order: self.order },
                None => EntryView { series: Some(base), shift: q, order: self.order },
            }),
            Storage::Explicit(_) => self.view(n),
        }
    }

    /// `A(n; q)` through the table order. Absent points inside the guaranteed
    /// region give the zero series.
    pub fn entry(&self, n: &[i64]) -> Result<QSeries> {
        self.data.check_dim(n.len())?;
        self.view(n)
            .map(|v| v.materialize())
            .ok_or_else(|| Error::OutsideRegion(n.to_vec()))
    }

    /// Whether `n` belongs to the stored support.
    pub fn is_stored(&self, n: &[i64]) -> bool {
        match &self.storage {
            Storage::Theta { overrides, .. } => {
                overrides.contains_key(n) || self.data.quadratic_form_int(n) <= self.order
            }
            Storage::Explicit(map) => map.contains_key(n),
        }
    }

    /// Replaces the entry at `n`. The series must be known through the table order.
    pub fn set_entry(&mut self, n: &[i64], series: QSeries) -> Result<()> {
        self.data.check_dim(n.len())?;
        if series.order() < self.order {
            return Err(Error::InsufficientOrder { have: series.order(), need: self.order });
        }
        let series = series.truncate(self.order);
        if let Region::Box { lo, hi } = &mut self.region {
            for (k, &x) in n.iter().enumerate() {
                lo[k] = lo[k].min(x);
                hi[k] = hi[k].max(x);
            }
        }
        match &mut self.storage {
            Storage::Theta { overrides, .. } => {
                overrides.insert(n.to_vec(), series);
            }
            Storage::Explicit(map) => {
                map.insert(n.to_vec(), series);
            }
        }
        Ok(())
    }

    /// Visits the stored support in lexicographic order.
    fn for_each_stored<'s, F: FnMut(&[i64], EntryView<'s>)>(&'s self, mut visit: F) {
        match &self.storage {
            Storage::Theta { base, overrides } => {
                let form = root_lattice_form(&self.data, None).expect("validated root data");
                let scale = form.scale();
                let mut extra = overrides.iter().filter(|(n, _)| self.data.quadratic_form_int(n) > self.order).peekable();
                form.for_each_within(self.order, |n, num| {
                    while let Some((m, s)) = extra.next_if(|(m, _)| m.as_slice() < n) {
                        visit(m, EntryView { series: Some(s), shift: 0, order: self.order });
                    }
                    let series = overrides.get(n);
                    let view = match series {
                        Some(s) => EntryView { series: Some(s), shift: 0, order: self.order },
                        None => EntryView { series: Some(base), shift: num / scale, order: self.order },
                    };
                    visit(n, view);
                });
                for (m, s) in extra {
                    visit(m, EntryView { series: Some(s), shift: 0, order: self.order });
                }
            }
            Storage::Explicit(map) => {
                for (n, s) in map {
                    visit(n, EntryView { series: Some(s), shift: 0, order: self.order });
                }
            }
        }
    }

    /// Stored points in lexicographic order.
    pub fn stored_points(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.for_each_stored(|n, _| out.push(n.to_vec()));
        out
    }

    /// Number of stored points.
    pub fn len(&self) -> usize {
        let mut count = 0;
        self.for_each_stored(|_, _| count += 1);
        count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All stored entries, materialized, in lexicographic order of `n`.
    pub fn entries(&self) -> Vec<(Vec<i64>, QSeries)> {
        let mut out = Vec::new();
        self.for_each_stored(|n, v| out.push((n.to_vec(), v.materialize())));
        out
    }

    /// Lower bound on the exponents of `A(n)` for points the table determines.
    fn exponent_floor(&self, n: &[i64]) -> i64 {
        if let Some(v) = (self.is_stored(n)).then(|| self.view(n)).flatten() {
            return v.low().min(self.order + 1);
        }
        match &self.region {
            Region::Quadratic => self.data.quadratic_form_int(n),
            Region::Cosets { level, lows } => {
                let order: Vec<usize> = (0..self.data.rank()).collect();
                let (r, e) = propagation_exponent(&self.data, *level, n, &order).expect("validated dimensions");
                e + lows[&r]
            }
            Region::Box { .. } => i64::MAX / 4,
        }
    }

    /// Homogeneous character `q^(-mu) sum_n A(n; q)`.
    pub fn homogeneous_character(&self) -> Result<QSeries> {
        let mu = integral(self.mu)?;
        let mut acc = DenseAccumulator::new(self.order);
        self.for_each_stored(|_, v| acc.add_view(&v, 1, 0));
        Ok(acc.finish(self.order).shift(-mu))
    }

    /// Principal character `q^(-h mu) chi(q^-1, ..., q^-1; q^h)`, `h = ht(theta) + 1`.
    ///
    /// The result is truncated at the order actually certified: each entry
    /// contributes through `h N - sum n_i`, and entries outside the stored
    /// support can only start at `h * floor(n) - sum n_i`.
    pub fn principal_character(&self) -> Result<QSeries> {
        let h = self.data.coxeter_h();
        let shift = integral(self.mu * h)?;
        let mut certified = i64::MAX;
        self.for_each_stored(|n, _| {
            certified = certified.min(h * self.order - n.iter().sum::<i64>());
        });
        if certified == i64::MAX {
            certified = h * self.order;
        }
        // Entries outside the stored support only start above the table order.
        let floor_cap = |n: &[i64], cap: &mut i64| {
            if !self.is_stored(n) {
                let start = h * self.exponent_floor(n).max(self.order + 1) - n.iter().sum::<i64>();
                *cap = (*cap).min(start - 1);
            }
        };
        match &self.region {
            Region::Quadratic => {
                let ones = vec![-1; self.data.rank()];
                let form = root_lattice_form(&self.data, Some(&ones))?;
                let bound = certified + 1;
                let mut cap = certified;
                form.for_each_within(bound, |n, _| floor_cap(n, &mut cap));
                certified = cap;
            }
            Region::Cosets { level, lows } => {
                // E(n) >= (nCn - max_r rCr) / 2k, so h E(n) - sum n stays above
                // (h/2k) nCn - sum n - h max_r rCr / 2k.
                let max_r = lows.keys().map(|r| 2 * self.data.quadratic_form_int(r)).max().unwrap_or(0);
                let min_low = lows.values().copied().min().unwrap_or(0);
                let k = *level;
                let form = QuadraticLattice::new(
                    self.data.cartan().iter().map(|r| r.iter().map(|x| x * h).collect()).collect(),
                    vec![-k; self.data.rank()],
                    k,
                )?;
                let slack = (h * max_r + 2 * k - 1) / (2 * k) - h * min_low;
                let mut cap = certified;
                form.for_each_within(certified + 1 + slack, |n, _| floor_cap(n, &mut cap));
                certified = cap;
            }
            // Absent points inside the box are zero; nothing beyond it is known.
            Region::Box { .. } => {}
        }
        let mut acc = DenseAccumulator::new(certified);
        self.for_each_stored(|n, v| acc.add_view(&v, h, -n.iter().sum::<i64>()));
        Ok(acc.finish(certified).shift(-shift))
    }

    /// Checks `A(n) = q^e A(n - c_i k e_i)` through order `up_to` for every
    /// stored `n` and direction `i` whose source lies in the guaranteed
    /// region. Stops at the first failure.
    pub fn verify_recurrence(&self, up_to: i64) -> Result<RecurrenceReport> {
        if up_to > self.order {
            return Err(Error::InsufficientOrder { have: self.order, need: up_to });
        }
        let rank = self.data.rank();
        let mut source = vec![0i64; rank];
        let mut pairs = 0u64;
        let mut failure: Option<RecurrenceFailure> = None;
        let theta = matches!(self.storage, Storage::Theta { .. });
        self.for_each_stored(|n, lhs| {
            if failure.is_some() {
                return;
            }
            let q_n = theta.then(|| self.data.quadratic_form_int(n));
            for i in 0..rank {
                let e = recurrence_step(&self.data, self.level, n, i, &mut source);
                // level 1, simply laced: Q(n - e_i) = Q(n) - (Cn)_i + 1 = Q(n) - e
                let src = match q_n {
                    Some(q) => self.theta_view(&source, q - e),
                    None => self.view(&source),
                };
                let Some(src) = src else { continue };
                let rhs = src.times_q_pow(e);
                let limit = up_to.min(lhs.order).min(rhs.order);
                pairs += 1;
                if let Some(m) = lhs.first_difference(&rhs, limit) {
                    failure = Some(RecurrenceFailure {
                        point: n.to_vec(),
                        direction: i,
                        source: source.clone(),
                        exponent_shift: e,
                        mismatch: m,
                    });
                    return;
                }
            }
        });
        if pairs == 0 {
            return Err(Error::InsufficientSupport);
        }
        let report = match &failure {
            None => IdentityReport::success(up_to, format!("{pairs} recurrence pairs checked")),
            Some(f) => IdentityReport::failure(
                up_to,
                &f.mismatch,
                format!(
                    "A{:?} != q^{} A{:?} (direction {}) after {pairs} pairs",
                    f.point,
                    f.exponent_shift,
                    f.source,
                    f.direction + 1
                ),
            ),
        };
        Ok(RecurrenceReport { report, pairs_checked: pairs, failure })
    }

    /// Point-by-point comparison of the stored supports and entries of two
    /// tables; returns the first point where they differ.
    pub fn first_entry_difference(&self, other: &CharacterTable) -> Option<Vec<i64>> {
        let a = self.entries();
        let b = other.entries();
        for pair in a.iter().zip(&b) {
            if pair.0 != pair.1 {
                return Some(pair.0 .0.clone().min(pair.1 .0.clone()));
            }
        }
        match a.len().cmp(&b.len()) {
            std::cmp::Ordering::Less => Some(b[a.len()].0.clone()),
            std::cmp::Ordering::Greater => Some(a[b.len()].0.clone()),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// A user-supplied table, guaranteed on the bounding box of `entries`.
    pub fn from_entries(
        lie_type: LieType,
        level: i64,
        order: i64,
        mu: Rational64,
        entries: impl IntoIterator<Item = (Vec<i64>, QSeries)>,
    ) -> Result<Self> {
        if level < 1 {
            return Err(Error::InvalidLevel(level));
        }
        let data = RootSystemData::new(lie_type);
        let rank = data.rank();
        let mut table = CharacterTable {
            data,
            level,
            order,
            mu,
            storage: Storage::Explicit(BTreeMap::new()),
            region: Region::Box { lo: vec![i64::MAX; rank], hi: vec![i64::MIN; rank] },
        };
        for (n, s) in entries {
            table.set_entry(&n, s)?;
        }
        Ok(table)
    }
}

fn for_each_in_box(lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut n = lo.to_vec();
    loop {
        visit(&n);
        let Some(k) = (0..n.len()).rev().find(|&k| n[k] < hi[k]) else { break };
        n[k] += 1;
        n[k + 1..].copy_from_slice(&lo[k + 1..]);
    }
}

fn integral(r: Rational64) -> Result<i64> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::NonIntegralMu(r.to_string()))
    }
}

/// Dense power-series accumulator for sums of shifted, rescaled entries.
struct DenseAccumulator {
    low: i64,
    coeffs: Vec<BigInt>,
    order: i64,
}

impl DenseAccumulator {
    fn new(order: i64) -> Self {
        DenseAccumulator { low: i64::MAX, coeffs: Vec::new(), order }
    }

    /// Adds `v(q^scale) q^shift`, dropping terms above the accumulator order.
    fn add_view(&mut self, v: &EntryView<'_>, scale: i64, shift: i64) {
        let Some(s) = v.series else { return };
        let top = v.order.min(self.order_for(scale, shift));
        for (e, c) in s.terms() {
            let e = e + v.shift;
            if e > top {
                break;
            }
            let target = e * scale + shift;
            if target > self.order {
                break;
            }
            self.add_at(target, c);
        }
    }

    fn order_for(&self, scale: i64, shift: i64) -> i64 {
        (self.order - shift).div_euclid(scale)
    }

    fn add_at(&mut self, e: i64, c: &BigInt) {
        if self.coeffs.is_empty() {
            self.low = e;
        }
        if e < self.low {
            let pad = (self.low - e) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(BigInt::zero(), pad));
            self.low = e;
        }
        let idx = (e - self.low) as usize;
        if idx >= self.coeffs.len() {
            self.coeffs.resize(idx + 1, BigInt::zero());
        }
        self.coeffs[idx] += c;
    }

    fn finish(self, order: i64) -> QSeries {
        if self.coeffs.is_empty() {
            return QSeries::zero(order);
        }
        QSeries::new(self.low, self.coeffs, order)
    }
}

/// Where a recurrence check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceFailure {
    pub point: Vec<i64>,
    /// Zero-based direction index.
    pub direction: usize,
    pub source: Vec<i64>,
    pub exponent_shift: i64,
    pub mismatch: Mismatch,
}

#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub report: IdentityReport,
    pub pairs_checked: u64,
    pub failure: Option<RecurrenceFailure>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// `prod_j (1 - q^j)^(-l)` through `order`.
fn heisenberg_vacuum(rank: usize, order: i64) -> Result<QSeries> {
    ProductSpec::from_triples(&[(1, 0, -(rank as i64))])?.expand(order)
}

/// Level-1 table from `A(n; q) = q^(1/2 nCn^t) prod_j (1 - q^j)^(-l)`.
pub fn closed_form_level1(lie_type: LieType, order: i64) -> Result<CharacterTable> {
    if !lie_type.is_simply_laced() {
        return Err(Error::NotSimplyLaced(lie_type));
    }
    if order < 0 {
        return Err(Error::NegativeOrder(order));
    }
    let data = RootSystemData::new(lie_type);
    let base = heisenberg_vacuum(data.rank(), order)?;
    Ok(CharacterTable {
        data,
        level: 1,
        order,
        mu: Rational64::zero(),
        storage: Storage::Theta { base, overrides: BTreeMap::new() },
        region: Region::Quadratic,
    })
}

/// Extends `k^l` seed series on `{0..k-1}^l` to every `n` by the simply-laced
/// recurrence `A(n) = A(n - k e_i) q^(-k + sum_j a_ji n_j)` and its inverse.
///
/// A point is stored when its propagated exponent plus the lowest exponent
/// of its seed is at most `order`. Entries are truncated at `order`, or
/// lower when a seed is not known far enough; the table order is the
/// smallest stored entry order.
pub fn propagate_from_initial(
    lie_type: LieType,
    level: i64,
    seeds: &BTreeMap<Vec<i64>, QSeries>,
    order: i64,
) -> Result<CharacterTable> {
    if !lie_type.is_simply_laced() {
        return Err(Error::NotSimplyLaced(lie_type));
    }
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    if order < 0 {
        return Err(Error::NegativeOrder(order));
    }
    let data = RootSystemData::new(lie_type);
    let rank = data.rank();
    for r in seeds.keys() {
        if r.len() != rank || r.iter().any(|&x| !(0..level).contains(&x)) {
            return Err(Error::UnexpectedSeed(r.clone()));
        }
    }
    let mut lows = BTreeMap::new();
    let mut missing = None;
    for_each_in_box(&vec![0; rank], &vec![level - 1; rank], |r| {
        match seeds.get(r) {
            Some(s) => {
                lows.insert(r.to_vec(), s.leading_exponent().unwrap_or(s.order() + 1));
            }
            None if missing.is_none() => missing = Some(r.to_vec()),
            None => {}
        }
    });
    if let Some(r) = missing {
        return Err(Error::MissingSeed(r));
    }

    // Candidates: E(n) = (nCn - rCr) / 2k, so E(n) + low <= N forces
    // 1/2 nCn <= k (N - min_low) + max_r 1/2 rCr.
    let min_low = lows.values().copied().min().expect("nonempty seed box");
    let max_r = lows.keys().map(|r| data.quadratic_form_int(r)).max().unwrap_or(0);
    let bound = level * (order - min_low) + max_r;
    let form = root_lattice_form(&data, None)?;
    let coordinate_order: Vec<usize> = (0..rank).collect();
    let mut entries = BTreeMap::new();
    let mut table_order = order;
    form.for_each_within(bound, |n, _| {
        let (r, e) = propagation_exponent(&data, level, n, &coordinate_order).expect("dimensions checked");
        if e + lows[&r] <= order {
            let entry = seeds[&r].shift(e).truncate(order);
            table_order = table_order.min(entry.order());
            entries.insert(n.to_vec(), entry);
        }
    });
    for s in entries.values_mut() {
        *s = s.truncate(table_order);
    }
    Ok(CharacterTable {
        data,
        level,
        order: table_order,
        mu: Rational64::zero(),
        storage: Storage::Explicit(entries),
        region: Region::Cosets { level, lows },
    })
}

/// Smallest closed-form table order whose principal specialization is
/// certified through `target`.
pub fn level1_order_for_principal(lie_type: LieType, target: i64) -> Result<i64> {
    if !lie_type.is_simply_laced() {
        return Err(Error::NotSimplyLaced(lie_type));
    }
    if target < 0 {
        return Err(Error::NegativeOrder(target));
    }
    let data = RootSystemData::new(lie_type);
    let h = data.coxeter_h();
    let form = root_lattice_form(&data, None)?;
    let ones = vec![-1; data.rank()];
    let shifted = root_lattice_form(&data, Some(&ones))?;
    let mut n = target / h;
    loop {
        let mut cert = i64::MAX;
        form.for_each_within(n, |p, _| cert = cert.min(h * n - p.iter().sum::<i64>()));
        shifted.for_each_within(cert + 1, |p, num| {
            if num / shifted.scale() + p.iter().sum::<i64>() > h * n {
                // outside the support: Q(p) > n
                cert = cert.min(num / shifted.scale() - 1);
            }
        });
        if cert >= target {
            return Ok(n);
        }
        n += 1;
    }
}

/// Serialized table: `{"type", "level", "order", "mu", "entries": [{"n", "series"}]}`.
#[derive(Serialize, Deserialize)]
pub struct TableJson {
    #[serde(rename = "type")]
    pub lie_type: String,
    pub level: i64,
    pub order: i64,
    pub mu: String,
    pub entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
pub struct EntryJson {
    pub n: Vec<i64>,
    pub series: QSeries,
}

impl CharacterTable {
    pub fn to_json_value(&self) -> TableJson {
        TableJson {
            lie_type: self.lie_type().to_string(),
            level: self.level,
            order: self.order,
            mu: self.mu.to_string(),
            entries: self.entries().into_iter().map(|(n, series)| EntryJson { n, series }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("table serializes")
    }

    pub fn from_json_value(json: TableJson) -> Result<Self> {
        let lie_type: LieType = json.lie_type.parse()?;
        let mu: Rational64 = json
            .mu
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("mu {:?}: {e}", json.mu)))?;
        let mut seen = std::collections::BTreeSet::new();
        for e in &json.entries {
            if !seen.insert(e.n.clone()) {
                return Err(Error::Parse(format!("duplicate entry {:?}", e.n)));
            }
        }
        Self::from_entries(lie_type, json.level, json.order, mu, json.entries.into_iter().map(|e| (e.n, e.series)))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_value(serde_json::from_str(s)?)
    }
}
