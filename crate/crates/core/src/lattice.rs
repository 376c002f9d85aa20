//! Enumeration of integer points under a positive definite quadratic form
//! with a linear term.
//!
//! The form is `f(n) = (n A n^t + 2 b.n) / (2 den)` with `A` a symmetric
//! integer matrix. Points are visited in lexicographic order by a
//! Fincke-Pohst style depth-first search: completing the square around
//! `t = -A^{-1} b` and decomposing `A` exactly gives nested per-coordinate
//! bounds. Those bounds are evaluated in floating point with an outward
//! margin, and every leaf is re-tested in exact integer arithmetic.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lie::{leading_principal_minors, RootSystemData};

type Q128 = Ratio<i128>;

#[derive(Clone, Debug)]
pub struct QuadraticLattice {
    dim: usize,
    matrix: Vec<i64>,
    linear: Vec<i64>,
    den: i64,
    // Decomposition n A n^t = sum_i d_i (n_i + sum_{j<i} l_ij n_j)^2, in f64.
    diag: Vec<f64>,
    lower: Vec<f64>,
    center: Vec<f64>,
    // t A t^t for the exact center t.
    offset: f64,
}

impl QuadraticLattice {
    /// Builds the form from an integer symmetric matrix, an integer linear
    /// term and a positive denominator.
    pub fn new(matrix: Vec<Vec<i64>>, linear: Vec<i64>, den: i64) -> Result<Self> {
        let dim = matrix.len();
        if matrix.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("quadratic form matrix must be square".into()));
        }
        if linear.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: linear.len() });
        }
        if den < 1 {
            return Err(Error::InvalidArgument("denominator must be positive".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidArgument("quadratic form matrix must be symmetric".into()));
                }
            }
        }
        if leading_principal_minors(&matrix).iter().any(|&m| m <= 0) {
            return Err(Error::NotPositiveDefinite);
        }

        // Eliminate from the last coordinate down so that term i only involves
        // n_0..n_i; the outermost search loop then runs over n_0.
        let mut work: Vec<Vec<Q128>> = matrix
            .iter()
            .map(|r| r.iter().map(|&x| Q128::from_integer(x as i128)).collect())
            .collect();
        let mut diag = vec![Q128::zero(); dim];
        let mut lower = vec![Q128::zero(); dim * dim];
        for i in (0..dim).rev() {
            let d = work[i][i];
            debug_assert!(d > Q128::zero());
            diag[i] = d;
            for j in 0..i {
                lower[i * dim + j] = work[i][j] / d;
            }
            for j in 0..i {
                for k in 0..i {
                    let upd = work[j][i] * work[i][k] / d;
                    work[j][k] -= upd;
                }
            }
        }

        let t = solve_center(&matrix, &linear);
        let mut offset = Q128::zero();
        for i in 0..dim {
            for j in 0..dim {
                offset += t[i] * t[j] * matrix[i][j] as i128;
            }
        }

        let to_f = |q: &Q128| q.to_f64().expect("finite rational");
        Ok(QuadraticLattice {
            dim,
            matrix: matrix.into_iter().flatten().collect(),
            linear,
            den,
            diag: diag.iter().map(to_f).collect(),
            lower: lower.iter().map(to_f).collect(),
            center: t.iter().map(to_f).collect(),
            offset: to_f(&offset),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n A n^t + 2 b.n`, i.e. `2 den f(n)`.
    pub fn numerator(&self, n: &[i64]) -> i64 {
        let d = self.dim;
        let mut acc = 0i64;
        for i in 0..d {
            let ni = n[i];
            if ni == 0 {
                continue;
            }
            let row = &self.matrix[i * d..(i + 1) * d];
            let dot: i64 = row.iter().zip(n).map(|(a, x)| a * x).sum();
            acc += ni * (dot + 2 * self.linear[i]);
        }
        acc
    }

    /// Denominator of `f`: `f(n) = numerator(n) / scale()`.
    pub fn scale(&self) -> i64 {
        2 * self.den
    }

    /// Calls `visit(n, numerator(n))` for every `n` with `f(n) <= bound`, in
    /// lexicographic order.
    pub fn for_each_within<F: FnMut(&[i64], i64)>(&self, bound: i64, mut visit: F) {
        if self.dim == 0 {
            if bound >= 0 {
                visit(&[], 0);
            }
            return;
        }
        let limit_exact = bound.checked_mul(self.scale()).expect("bound overflow");
        let limit = limit_exact as f64 + self.offset;
        let margin = 1e-9 * (1.0 + limit.abs());
        if limit < -margin {
            return;
        }
        let mut point = vec![0i64; self.dim];
        self.descend(0, &mut point, 0.0, limit, margin, limit_exact, &mut visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<F: FnMut(&[i64], i64)>(
        &self,
        i: usize,
        point: &mut [i64],
        partial: f64,
        limit: f64,
        margin: f64,
        limit_exact: i64,
        visit: &mut F,
    ) {
        let d = self.dim;
        let mut c = self.center[i];
        for j in 0..i {
            c -= self.lower[i * d + j] * (point[j] as f64 - self.center[j]);
        }
        let room = (limit - partial).max(0.0) + margin;
        let w = (room / self.diag[i]).sqrt();
        let lo = (c - w - 1e-9).ceil() as i64;
        let hi = (c + w + 1e-9).floor() as i64;
        for v in lo..=hi {
            point[i] = v;
            let x = v as f64 - c;
            let next = partial + self.diag[i] * x * x;
            if next > limit + margin {
                continue;
            }
            if i + 1 == d {
                let num = self.numerator(point);
                if num <= limit_exact {
                    visit(point, num);
                }
            } else {
                self.descend(i + 1, point, next, limit, margin, limit_exact, visit);
            }
        }
    }

    /// All points with `f(n) <= bound`, lexicographically sorted.
    pub fn points_within(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.for_each_within(bound, |n, _| out.push(n.to_vec()));
        out
    }
}

/// Exact solution of `A t = -b`.
fn solve_center(matrix: &[Vec<i64>], linear: &[i64]) -> Vec<Q128> {
    let n = matrix.len();
    let mut aug: Vec<Vec<Q128>> = matrix
        .iter()
        .zip(linear)
        .map(|(row, &b)| {
            row.iter()
                .map(|&x| Q128::from_integer(x as i128))
                .chain(std::iter::once(Q128::from_integer(-(b as i128))))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero()).expect("nonsingular");
        aug.swap(col, piv);
        let p = aug[col][col];
        for k in col..=n {
            aug[col][k] /= p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col];
                for k in col..=n {
                    let sub = f * aug[col][k];
                    aug[r][k] -= sub;
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n]).collect()
}

/// The form `1/2 n B n^t` of the root data, or `(h/2) n B n^t + s.n` with
/// `h = ht(theta) + 1` when a linear shift `s` is given.
pub fn root_lattice_form(data: &RootSystemData, shift: Option<&[i64]>) -> Result<QuadraticLattice> {
    let (gram, den) = data.symmetrized_integer();
    match shift {
        None => QuadraticLattice::new(gram, vec![0; data.rank()], den),
        Some(s) => {
            data.check_dim(s.len())?;
            let h = data.coxeter_h();
            let a = gram.iter().map(|r| r.iter().map(|x| x * h).collect()).collect();
            QuadraticLattice::new(a, s.iter().map(|x| x * den).collect(), den)
        }
    }
}

/// Every `n` in `Z^l` whose exponent is at most `max_exponent`: the exponent
/// is `1/2 n B n^t`, or `(h/2) n B n^t + s.n` when `linear_shift` is given.
/// Lexicographic order, no duplicates.
pub fn enumerate_lattice(
    data: &RootSystemData,
    max_exponent: i64,
    linear_shift: Option<&[i64]>,
) -> Result<Vec<Vec<i64>>> {
    if max_exponent < 0 {
        return Err(Error::NegativeOrder(max_exponent));
    }
    Ok(root_lattice_form(data, linear_shift)?.points_within(max_exponent))
}
