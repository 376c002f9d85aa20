//! Cartan data for the finite-dimensional simple Lie algebras.
//!
//! Nodes follow the Bourbaki numbering, except for `G2`, where node 1 is the
//! long root and node 2 the short root. Root norms are normalized so that
//! long roots have `<a, a> = 2`, and `a_ij = 2 <a_i, a_j> / <a_i, a_i>`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    fn rank_ok(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

/// A simple type such as `A2` or `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieType {
    family: Family,
    rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if !family.rank_ok(rank) {
            return Err(Error::InvalidRank { family: family.letter(), rank });
        }
        Ok(LieType { family, rank })
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::UnknownType(s.to_string()))?;
        let rank = chars
            .as_str()
            .parse::<usize>()
            .map_err(|_| Error::UnknownType(s.to_string()))?;
        LieType::new(family, rank)
    }
}

/// Everything the character recurrences consume for one simple type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystemData {
    lie_type: LieType,
    cartan: Vec<Vec<i64>>,
    norm_squared: Vec<Rational64>,
    coweight_factor: Vec<i64>,
    marks: Vec<i64>,
    height_theta: i64,
    coxeter_h: i64,
    simply_laced: bool,
}

impl RootSystemData {
    pub fn new(lie_type: LieType) -> Self {
        let l = lie_type.rank;
        let two = Rational64::from_integer(2);
        let one = Rational64::one();
        let third = Rational64::new(2, 3);
        // Each bond is (i, j, a_ij, a_ji), zero-based.
        let chain = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1, -1, -1)).collect::<Vec<_>>();
        let (norms, bonds, marks): (Vec<Rational64>, Vec<(usize, usize, i64, i64)>, Vec<i64>) =
            match lie_type.family {
                Family::A => (vec![two; l], chain(l), vec![1; l]),
                Family::B => {
                    let mut norms = vec![two; l];
                    norms[l - 1] = one;
                    let mut bonds = chain(l - 1);
                    bonds.push((l - 2, l - 1, -1, -2));
                    let mut marks = vec![2; l];
                    marks[0] = 1;
                    (norms, bonds, marks)
                }
                Family::C => {
                    let mut norms = vec![one; l];
                    norms[l - 1] = two;
                    let mut bonds = chain(l - 1);
                    bonds.push((l - 2, l - 1, -2, -1));
                    let mut marks = vec![2; l];
                    marks[l - 1] = 1;
                    (norms, bonds, marks)
                }
                Family::D => {
                    let mut bonds = chain(l - 1);
                    bonds.push((l - 3, l - 1, -1, -1));
                    let mut marks = vec![2; l];
                    marks[0] = 1;
                    marks[l - 2] = 1;
                    marks[l - 1] = 1;
                    (vec![two; l], bonds, marks)
                }
                Family::E => {
                    // 1-3-4-5-6(-7-8) with 2 attached to 4
                    let mut bonds = vec![(0, 2, -1, -1), (1, 3, -1, -1)];
                    bonds.extend((2..l - 1).map(|i| (i, i + 1, -1, -1)));
                    let marks = match l {
                        6 => vec![1, 2, 2, 3, 2, 1],
                        7 => vec![2, 2, 3, 4, 3, 2, 1],
                        _ => vec![2, 3, 4, 6, 5, 4, 3, 2],
                    };
                    (vec![two; l], bonds, marks)
                }
                Family::F => (
                    vec![two, two, one, one],
                    vec![(0, 1, -1, -1), (1, 2, -1, -2), (2, 3, -1, -1)],
                    vec![2, 3, 4, 2],
                ),
                Family::G => (vec![two, third], vec![(0, 1, -1, -3)], vec![2, 3]),
            };

        let mut cartan = vec![vec![0i64; l]; l];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j, aij, aji) in &bonds {
            cartan[i][j] = aij;
            cartan[j][i] = aji;
        }
        let coweight_factor = norms
            .iter()
            .map(|n| {
                let f = two / n;
                assert!(f.is_integer(), "2/<a,a> must be integral");
                f.to_integer()
            })
            .collect();
        let height_theta = marks.iter().sum();
        RootSystemData {
            lie_type,
            cartan,
            norm_squared: norms,
            coweight_factor,
            marks,
            height_theta,
            coxeter_h: height_theta + 1,
            simply_laced: lie_type.is_simply_laced(),
        }
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    /// Cartan matrix `C = (a_ij)` with `a_ij = alpha_j(H_i)`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn norm_squared(&self) -> &[Rational64] {
        &self.norm_squared
    }

    /// `2 / <alpha_i, alpha_i>`, which equals `<H_i, H^(i)>`.
    pub fn coweight_factor(&self) -> &[i64] {
        &self.coweight_factor
    }

    /// Coefficients of the highest root in the simple roots.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    pub fn height_theta(&self) -> i64 {
        self.height_theta
    }

    /// `ht(theta) + 1`, the exponent scale of the principal grading.
    pub fn coxeter_h(&self) -> i64 {
        self.coxeter_h
    }

    pub fn is_simply_laced(&self) -> bool {
        self.simply_laced
    }

    /// The pairing `<H_i, H^(j)> = delta_ij * 2 / <alpha_i, alpha_i>`.
    pub fn coroot_coweight_pairing(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.coweight_factor[i]
        } else {
            0
        }
    }

    /// Gram matrix `<alpha_i, alpha_j>` of the simple roots.
    pub fn symmetrized(&self) -> Vec<Vec<Rational64>> {
        let half = Rational64::new(1, 2);
        (0..self.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| self.norm_squared[i] * half * self.cartan[i][j])
                    .collect()
            })
            .collect()
    }

    /// The Gram matrix scaled to integers: returns `(S, den)` with
    /// `<alpha_i, alpha_j> = S_ij / den`.
    pub fn symmetrized_integer(&self) -> (Vec<Vec<i64>>, i64) {
        let gram = self.symmetrized();
        let den = gram.iter().flatten().fold(1i64, |acc, r| acc.lcm(r.denom()));
        let s = gram
            .iter()
            .map(|row| row.iter().map(|r| (r * den).to_integer()).collect())
            .collect();
        (s, den)
    }

    /// `1/2 n B n^t` where `B` is the Gram matrix (equal to the Cartan matrix
    /// for simply-laced types).
    pub fn quadratic_form(&self, n: &[i64]) -> Result<Rational64> {
        self.check_dim(n.len())?;
        let gram = self.symmetrized();
        let mut acc = Rational64::zero();
        for (i, row) in gram.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                acc += *b * (n[i] * n[j]);
            }
        }
        Ok(acc / 2)
    }

    /// `1/2 n C n^t` for simply-laced types, in integers.
    pub(crate) fn quadratic_form_int(&self, n: &[i64]) -> i64 {
        debug_assert!(self.simply_laced);
        let mut acc = 0i64;
        for (i, row) in self.cartan.iter().enumerate() {
            let ni = n[i];
            if ni == 0 {
                continue;
            }
            let dot: i64 = row.iter().zip(n).map(|(a, x)| a * x).sum();
            acc += ni * dot;
        }
        acc / 2
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got });
        }
        Ok(())
    }

    /// Internal consistency of the tabulated data: Cartan sign pattern,
    /// symmetrizability, positive definiteness, integral coweight factors and
    /// a dominant highest root of norm 2.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let l = self.rank();
        let c = &self.cartan;
        for i in 0..l {
            if c[i][i] != 2 {
                return Err(format!("a_{i}{i} = {}", c[i][i]));
            }
            for j in 0..l {
                if i != j && (c[i][j] > 0 || (c[i][j] == 0) != (c[j][i] == 0)) {
                    return Err(format!("bad off-diagonal pair at ({i},{j})"));
                }
            }
        }
        let half = Rational64::new(1, 2);
        for i in 0..l {
            for j in 0..l {
                let dij = self.norm_squared[i] * half * c[i][j];
                let dji = self.norm_squared[j] * half * c[j][i];
                if dij != dji {
                    return Err(format!("D*C not symmetric at ({i},{j})"));
                }
            }
        }
        for (k, m) in leading_principal_minors(c).into_iter().enumerate() {
            if m <= 0 {
                return Err(format!("leading minor {} is {m}", k + 1));
            }
        }
        for i in 0..l {
            let f = self.coweight_factor[i];
            if !(1..=3).contains(&f) || Rational64::from_integer(2) / self.norm_squared[i] != Rational64::from_integer(f) {
                return Err(format!("coweight factor {f} at node {i}"));
            }
        }
        if self.coweight_factor.iter().all(|&f| f == 1) != self.simply_laced {
            return Err("simply-laced flag disagrees with root lengths".into());
        }
        let gram = self.symmetrized();
        let mut theta_norm = Rational64::zero();
        for i in 0..l {
            let pairing: Rational64 = (0..l).map(|j| gram[i][j] * self.marks[j]).sum();
            if pairing < Rational64::zero() {
                return Err(format!("highest root not dominant at node {i}"));
            }
            theta_norm += pairing * self.marks[i];
        }
        if theta_norm != Rational64::from_integer(2) {
            return Err(format!("highest root has norm {theta_norm}"));
        }
        if self.height_theta != self.marks.iter().sum::<i64>() || self.coxeter_h != self.height_theta + 1 {
            return Err("height bookkeeping".into());
        }
        Ok(())
    }
}

/// Leading principal minors of an integer matrix, by fraction-free
/// (Bareiss) elimination. Stops early at a vanishing pivot.
pub fn leading_principal_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 0..n {
        let pivot = a[k][k];
        minors.push(pivot);
        if pivot == 0 {
            minors.resize(n, 0);
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = pivot;
    }
    minors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(s: &str) -> RootSystemData {
        RootSystemData::new(s.parse().unwrap())
    }

    /// Cartan entries from explicit root vectors: `a_ij = 2 (r_i . r_j) / (r_i . r_i)`,
    /// with the Gram matrix rescaled so the longest root has norm 2.
    fn cartan_from_vectors(roots: &[Vec<Rational64>]) -> (Vec<Vec<i64>>, Vec<Rational64>) {
        let dot = |a: &[Rational64], b: &[Rational64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<Rational64>();
        let longest = roots.iter().map(|r| dot(r, r)).max().unwrap();
        let norms = roots.iter().map(|r| dot(r, r) * 2 / longest).collect();
        let c = roots
            .iter()
            .map(|ri| roots.iter().map(|rj| (dot(ri, rj) * 2 / dot(ri, ri)).to_integer()).collect())
            .collect();
        (c, norms)
    }

    fn v(xs: &[i64]) -> Vec<Rational64> {
        xs.iter().map(|&x| Rational64::from_integer(x)).collect()
    }

    #[test]
    fn a2_matches_vector_realization() {
        let d = data("A2");
        let (c, norms) = cartan_from_vectors(&[v(&[1, -1, 0]), v(&[0, 1, -1])]);
        assert_eq!(d.cartan(), c.as_slice());
        assert_eq!(d.norm_squared(), norms.as_slice());
        assert!(d.is_simply_laced());
        assert_eq!((d.height_theta(), d.coxeter_h()), (2, 3));
        assert_eq!(leading_principal_minors(d.cartan()), vec![2, 3]);
    }

    #[test]
    fn g2_matches_vector_realization() {
        let d = data("G2");
        // long root first, short second, in the plane x + y + z = 0
        let (c, norms) = cartan_from_vectors(&[v(&[-2, 1, 1]), v(&[1, -1, 0])]);
        assert_eq!(d.cartan(), c.as_slice());
        assert_eq!(d.norm_squared(), &[Rational64::from_integer(2), Rational64::new(2, 3)]);
        assert_eq!(norms, d.norm_squared());
        assert_eq!(d.coweight_factor(), &[1, 3]);
        assert_eq!(d.coxeter_h(), 6);
        assert!(!d.is_simply_laced());
        // D*C symmetric
        let s = d.symmetrized();
        assert_eq!(s[0][1], s[1][0]);
    }

    #[test]
    fn rank_bounds() {
        assert_eq!("D2".parse::<LieType>(), Err(Error::InvalidRank { family: 'D', rank: 2 }));
        assert!("A0".parse::<LieType>().is_err());
        assert!("B1".parse::<LieType>().is_err());
        assert!("E5".parse::<LieType>().is_err());
        assert!("E9".parse::<LieType>().is_err());
        assert!("F3".parse::<LieType>().is_err());
        assert!("G3".parse::<LieType>().is_err());
        assert!(matches!("X3".parse::<LieType>(), Err(Error::UnknownType(_))));
        assert!(matches!("A".parse::<LieType>(), Err(Error::UnknownType(_))));
        assert_eq!("e8".parse::<LieType>().unwrap().to_string(), "E8");
    }

    fn all_types() -> Vec<LieType> {
        let mut out = Vec::new();
        for r in 1..=8 {
            for f in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
                if let Ok(t) = LieType::new(f, r) {
                    out.push(t);
                }
            }
        }
        out
    }

    #[test]
    fn every_table_passes_self_check() {
        for t in all_types() {
            let d = RootSystemData::new(t);
            d.validate().unwrap_or_else(|e| panic!("{t}: {e}"));
        }
    }

    #[test]
    fn coxeter_numbers() {
        for t in all_types() {
            let l = t.rank() as i64;
            let expected = match t.family() {
                Family::A => l + 1,
                Family::B | Family::C => 2 * l,
                Family::D => 2 * l - 2,
                Family::E => [12, 18, 30][t.rank() - 6],
                Family::F => 12,
                Family::G => 6,
            };
            assert_eq!(RootSystemData::new(t).coxeter_h(), expected, "{t}");
        }
    }

    #[test]
    fn determinants() {
        let det = |s: &str| *leading_principal_minors(data(s).cartan()).last().unwrap();
        assert_eq!(det("A4"), 5);
        assert_eq!(det("B3"), 2);
        assert_eq!(det("C3"), 2);
        assert_eq!(det("D5"), 4);
        assert_eq!(det("E6"), 3);
        assert_eq!(det("E7"), 2);
        assert_eq!(det("E8"), 1);
        assert_eq!(det("F4"), 1);
        assert_eq!(det("G2"), 1);
    }

    #[test]
    fn quadratic_form_examples() {
        assert_eq!(data("A1").quadratic_form(&[3]).unwrap(), Rational64::from_integer(9));
        assert_eq!(data("E7").quadratic_form(&[0; 7]).unwrap(), Rational64::zero());
        assert_eq!(data("A2").quadratic_form(&[1, 1]).unwrap(), Rational64::one());
        assert_eq!(
            data("A2").quadratic_form(&[1]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
        // B2: 1/2 (2 x^2 - 2xy + y^2)
        assert_eq!(data("B2").quadratic_form(&[1, 1]).unwrap(), Rational64::new(1, 2));
    }

    #[test]
    fn quadratic_form_positive_on_small_box() {
        for t in all_types().into_iter().filter(|t| t.rank() <= 3) {
            let d = RootSystemData::new(t);
            let l = d.rank();
            let mut n = vec![-5i64; l];
            loop {
                let q = d.quadratic_form(&n).unwrap();
                assert_eq!(q > Rational64::zero(), n.iter().any(|&x| x != 0), "{t} {n:?}");
                if d.is_simply_laced() {
                    assert_eq!(Rational64::from_integer(d.quadratic_form_int(&n)), q);
                }
                let Some(k) = n.iter().position(|&x| x < 5) else { break };
                n[k] += 1;
                n[..k].iter_mut().for_each(|x| *x = -5);
            }
        }
    }

    #[test]
    fn pairing_is_diagonal() {
        let d = data("C3");
        assert_eq!(d.coroot_coweight_pairing(0, 0), 2);
        assert_eq!(d.coroot_coweight_pairing(2, 2), 1);
        assert_eq!(d.coroot_coweight_pairing(0, 1), 0);
    }

    #[test]
    fn integer_gram() {
        let (s, den) = data("C2").symmetrized_integer();
        assert_eq!(den, 1);
        assert_eq!(s, vec![vec![1, -1], vec![-1, 2]]);
        let (s, den) = data("G2").symmetrized_integer();
        assert_eq!(den, 3);
        assert_eq!(s, vec![vec![6, -3], vec![-3, 2]]);
    }
}
