//! Product and multisum sides of the Macdonald identities for `A_l` and
//! `D_l`, Gauss's identity, and coefficientwise comparison.
//!
//! The multisum side of a simply-laced level-1 principal character is
//!
//! ```text
//! prod_j (1 - q^(hj))^(-l) * sum_n q^((h/2) nCn^t - sum n_i),   h = ht(theta) + 1,
//! ```
//!
//! and the product identities equate a product with the bare theta sum,
//! i.e. with the prefactor moved to the product side.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{root_lattice_form, QuadraticLattice};
use crate::lie::{Family, LieType, RootSystemData};
use crate::qseries::{Mismatch, ProductSpec, QSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub order_checked: i64,
    pub equal: bool,
    pub first_mismatch_exponent: Option<i64>,
    #[serde(with = "opt_bigint")]
    pub lhs_coefficient: Option<BigInt>,
    #[serde(with = "opt_bigint")]
    pub rhs_coefficient: Option<BigInt>,
    pub timing_note: String,
    pub description: String,
}

mod opt_bigint {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(c) => s.serialize_some(&c.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(D::Error::custom))
            .transpose()
    }
}

impl IdentityReport {
    pub fn success(order: i64, timing_note: impl Into<String>) -> Self {
        IdentityReport {
            order_checked: order,
            equal: true,
            first_mismatch_exponent: None,
            lhs_coefficient: None,
            rhs_coefficient: None,
            timing_note: timing_note.into(),
            description: String::new(),
        }
    }

    pub fn failure(order: i64, mismatch: &Mismatch, timing_note: impl Into<String>) -> Self {
        IdentityReport {
            order_checked: order,
            equal: false,
            first_mismatch_exponent: Some(mismatch.exponent),
            lhs_coefficient: Some(mismatch.lhs.clone()),
            rhs_coefficient: Some(mismatch.rhs.clone()),
            timing_note: timing_note.into(),
            description: String::new(),
        }
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.description.is_empty() {
            out.push_str(&self.description);
            out.push('\n');
        }
        match self.first_mismatch_exponent {
            None => out.push_str(&format!("equal through q^{}\n", self.order_checked)),
            Some(e) => out.push_str(&format!(
                "MISMATCH at q^{e}: lhs {} rhs {} (checked through q^{})\n",
                self.lhs_coefficient.as_ref().map_or("?".into(), |c| c.to_string()),
                self.rhs_coefficient.as_ref().map_or("?".into(), |c| c.to_string()),
                self.order_checked
            )),
        }
        if !self.timing_note.is_empty() {
            out.push_str(&self.timing_note);
            out.push('\n');
        }
        out
    }
}

/// Compares two series through the lower of their orders.
pub fn compare_series(lhs: &QSeries, rhs: &QSeries) -> IdentityReport {
    let order = lhs.order().min(rhs.order());
    let note = format!("{} coefficients compared", (order + 1).max(0));
    match lhs.first_difference(rhs, order) {
        None => IdentityReport::success(order, note),
        Some(m) => IdentityReport::failure(order, &m, note),
    }
}

/// Adds `q^e` for every point of `form` with value at most `order`; the
/// value is `numerator / scale` and must be an integer.
fn sum_over_form(form: &QuadraticLattice, order: i64) -> Result<QSeries> {
    let scale = form.scale();
    let mut counts: Vec<u64> = Vec::new();
    let mut low = i64::MAX;
    let mut bad = None;
    let mut points = Vec::new();
    form.for_each_within(order, |n, num| {
        if num % scale != 0 {
            bad.get_or_insert_with(|| n.to_vec());
            return;
        }
        points.push(num / scale);
    });
    if let Some(n) = bad {
        return Err(Error::NonIntegralExponent(n));
    }
    if points.is_empty() {
        return Ok(QSeries::zero(order));
    }
    for &e in &points {
        low = low.min(e);
    }
    counts.resize((order - low + 1) as usize, 0);
    for e in points {
        counts[(e - low) as usize] += 1;
    }
    Ok(QSeries::new(low, counts.into_iter().map(BigInt::from).collect(), order))
}

/// `sum_n q^((scale/2) nMn^t + shift.n)` through `order`. `M` need not be
/// symmetric; its symmetric part must be positive definite.
pub fn theta_sum(matrix: &[Vec<i64>], scale: i64, shift: &[i64], order: i64) -> Result<QSeries> {
    let dim = matrix.len();
    if matrix.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidArgument("theta matrix must be square".into()));
    }
    if shift.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: shift.len() });
    }
    if order < 0 {
        return Err(Error::NegativeOrder(order));
    }
    // (scale/2) nMn + s.n = (n A n + 2 b.n) / 4 with A = scale (M + M^t), b = 2s.
    let a = (0..dim)
        .map(|i| (0..dim).map(|j| scale * (matrix[i][j] + matrix[j][i])).collect())
        .collect();
    let form = QuadraticLattice::new(a, shift.iter().map(|s| 2 * s).collect(), 2)?;
    sum_over_form(&form, order)
}

fn require_simply_laced(t: LieType) -> Result<RootSystemData> {
    if !t.is_simply_laced() {
        return Err(Error::NotSimplyLaced(t));
    }
    Ok(RootSystemData::new(t))
}

/// The bare theta sum `sum_n q^((h/2) nCn^t - sum n_i)` through `order`.
pub fn bare_theta_sum(t: LieType, order: i64) -> Result<QSeries> {
    let data = require_simply_laced(t)?;
    if order < 0 {
        return Err(Error::NegativeOrder(order));
    }
    let form = root_lattice_form(&data, Some(&vec![-1; data.rank()]))?;
    sum_over_form(&form, order)
}

/// `prod_j (1 - q^(hj))^(-l)`, the prefactor of the multisum side.
pub fn multisum_prefactor(t: LieType) -> Result<ProductSpec> {
    let data = require_simply_laced(t)?;
    ProductSpec::from_triples(&[(data.coxeter_h(), 0, -(data.rank() as i64))])
}

/// The full multisum side: prefactor times bare theta sum.
pub fn multisum_side(t: LieType, order: i64) -> Result<QSeries> {
    let theta = bare_theta_sum(t, order)?;
    let prefactor = multisum_prefactor(t)?.expand(order)?;
    Ok(&prefactor * &theta)
}

/// `prod_j (1 - q^((l+1)j))^(l+1) / (1 - q^j)`.
pub fn macdonald_product_a(rank: usize) -> Result<ProductSpec> {
    LieType::new(Family::A, rank)?;
    let l = rank as i64;
    ProductSpec::from_triples(&[(l + 1, 0, l + 1), (1, 0, -1)])
}

/// `prod_j (1 - q^(2(l-1)j))^l / ((1 - q^(2j-1)) (1 - q^((l-1)(2j-1))))`.
pub fn macdonald_product_d(rank: usize) -> Result<ProductSpec> {
    LieType::new(Family::D, rank)?;
    let l = rank as i64;
    ProductSpec::from_triples(&[(2 * (l - 1), 0, l), (2, -1, -1), (2 * (l - 1), -(l - 1), -1)])
}

/// Product form of the whole principally specialized level-1 character,
/// for the families with a product side: the Macdonald product divided by
/// the multisum prefactor.
pub fn level1_principal_product(t: LieType) -> Result<ProductSpec> {
    let l = t.rank() as i64;
    match t.family() {
        Family::A => ProductSpec::from_triples(&[(l + 1, 0, 1), (1, 0, -1)]),
        Family::D => ProductSpec::from_triples(&[(2, -1, -1), (2 * (l - 1), -(l - 1), -1)]),
        _ if !t.is_simply_laced() => Err(Error::NotSimplyLaced(t)),
        _ => Err(Error::InvalidArgument(format!("no builtin product side for {t}"))),
    }
}

/// The product side paired with the bare theta sum of `t`.
pub fn macdonald_product(t: LieType) -> Result<ProductSpec> {
    match t.family() {
        Family::A => macdonald_product_a(t.rank()),
        Family::D => macdonald_product_d(t.rank()),
        _ if !t.is_simply_laced() => Err(Error::NotSimplyLaced(t)),
        _ => Err(Error::InvalidArgument(format!("no builtin product side for {t}"))),
    }
}

fn describe_product(p: &ProductSpec) -> String {
    serde_json::to_string(p).expect("product serializes")
}

/// Compares the expansion of `lhs` with the bare theta sum of `t`.
pub fn verify_identity(lhs: &ProductSpec, t: LieType, order: i64) -> Result<IdentityReport> {
    if order < 0 {
        return Err(Error::NegativeOrder(order));
    }
    let rhs = bare_theta_sum(t, order)?;
    let left = lhs.expand(order)?;
    Ok(compare_series(&left, &rhs).with_description(format!(
        "product {} vs sum_n q^((h/2) nCn - sum n) for {t}",
        describe_product(lhs)
    )))
}

/// Compares the expansion of `lhs` with the full multisum side of `t`.
pub fn verify_level1_identity(lhs: &ProductSpec, t: LieType, order: i64) -> Result<IdentityReport> {
    if order < 0 {
        return Err(Error::NegativeOrder(order));
    }
    let rhs = multisum_side(t, order)?;
    let left = lhs.expand(order)?;
    Ok(compare_series(&left, &rhs).with_description(format!(
        "product {} vs prod (1-q^(hj))^(-l) sum_n q^((h/2) nCn - sum n) for {t}",
        describe_product(lhs)
    )))
}

/// Compares the expansion of `lhs` with `sum_n q^((scale/2) nMn + shift.n)`.
pub fn verify_user_identity(
    lhs: &ProductSpec,
    matrix: &[Vec<i64>],
    scale: i64,
    shift: &[i64],
    order: i64,
) -> Result<IdentityReport> {
    let rhs = theta_sum(matrix, scale, shift, order)?;
    let left = lhs.expand(order)?;
    Ok(compare_series(&left, &rhs).with_description(format!(
        "product {} vs theta sum matrix {matrix:?} scale {scale} shift {shift:?}",
        describe_product(lhs)
    )))
}

/// Identity job: `{"lhs": [...], "rhs": {...}, "order": N}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityJob {
    pub lhs: ProductSpec,
    pub rhs: IdentityRhs,
    pub order: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdentityRhs {
    Builtin {
        builtin: String,
        #[serde(rename = "type")]
        lie_type: String,
    },
    Theta { theta: ThetaSpec },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaSpec {
    pub matrix: Vec<Vec<i64>>,
    pub scale: i64,
    pub shift: Vec<i64>,
}

impl IdentityJob {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn run(&self) -> Result<IdentityReport> {
        match &self.rhs {
            IdentityRhs::Builtin { builtin, lie_type } => {
                let t: LieType = lie_type.parse()?;
                match builtin.as_str() {
                    "A" | "D" => {
                        let expected = if builtin == "A" { Family::A } else { Family::D };
                        if t.family() != expected {
                            return Err(Error::InvalidArgument(format!("builtin {builtin} needs a type {builtin}l, got {t}")));
                        }
                        verify_identity(&self.lhs, t, self.order)
                    }
                    "level1" => verify_level1_identity(&self.lhs, t, self.order),
                    other => Err(Error::InvalidArgument(format!("unknown builtin {other:?}"))),
                }
            }
            IdentityRhs::Theta { theta } => {
                verify_user_identity(&self.lhs, &theta.matrix, theta.scale, &theta.shift, self.order)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> LieType {
        s.parse().unwrap()
    }

    fn odd_part_partitions(n: usize) -> Vec<i64> {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for part in (1..=n).step_by(2) {
            for m in part..=n {
                p[m] += p[m - part];
            }
        }
        p
    }

    /// Brute-force theta sum over the box `|n_i| <= r`.
    fn box_theta(m: &[Vec<i64>], scale: i64, shift: &[i64], r: i64, order: i64) -> QSeries {
        let dim = m.len();
        let mut counts = vec![0i64; (order + 1) as usize];
        let mut n = vec![-r; dim];
        loop {
            let quad: i64 = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| n[i] * m[i][j] * n[j]).sum();
            let e = scale * quad / 2 + shift.iter().zip(&n).map(|(a, b)| a * b).sum::<i64>();
            if e <= order {
                counts[e as usize] += 1;
            }
            let Some(k) = (0..dim).rev().find(|&k| n[k] < r) else { break };
            n[k] += 1;
            n[k + 1..].iter_mut().for_each(|x| *x = -r);
        }
        QSeries::from_coeffs(counts, order)
    }

    #[test]
    fn multisum_side_a1() {
        let s = multisum_side(t("A1"), 5).unwrap();
        assert_eq!(s, QSeries::from_coeffs(odd_part_partitions(5), 5));
    }

    #[test]
    fn multisum_side_constant_term() {
        for ty in ["A1", "A3", "D4", "D5", "E6"] {
            let s = multisum_side(t(ty), 3).unwrap();
            assert_eq!(s.coeff(0), Some(&BigInt::from(1)), "{ty}");
        }
        assert_eq!(multisum_side(t("B3"), 3).unwrap_err(), Error::NotSimplyLaced(t("B3")));
    }

    #[test]
    fn multisum_side_a2_box_oracle() {
        let c = vec![vec![2, -1], vec![-1, 2]];
        let theta = box_theta(&c, 3, &[-1, -1], 3, 4);
        let pref = ProductSpec::from_triples(&[(3, 0, -2)]).unwrap().expand(4).unwrap();
        assert_eq!(multisum_side(t("A2"), 4).unwrap(), &pref * &theta);
    }

    #[test]
    fn bare_theta_matches_box_scan() {
        for (ty, r) in [("A1", 12), ("A2", 6), ("A3", 4), ("D4", 3)] {
            let data = RootSystemData::new(t(ty));
            let h = data.coxeter_h();
            let shift = vec![-1; data.rank()];
            let oracle = box_theta(data.cartan(), h, &shift, r, 12);
            assert_eq!(bare_theta_sum(t(ty), 12).unwrap(), oracle, "{ty}");
        }
    }

    #[test]
    fn product_specs() {
        assert_eq!(macdonald_product_a(1).unwrap().triples(), vec![(2, 0, 2), (1, 0, -1)]);
        assert_eq!(macdonald_product_a(2).unwrap().triples(), vec![(3, 0, 3), (1, 0, -1)]);
        assert_eq!(macdonald_product_a(4).unwrap().triples(), vec![(5, 0, 5), (1, 0, -1)]);
        assert_eq!(macdonald_product_d(3).unwrap().triples(), vec![(4, 0, 3), (2, -1, -1), (4, -2, -1)]);
        assert_eq!(macdonald_product_d(4).unwrap().triples(), vec![(6, 0, 4), (2, -1, -1), (6, -3, -1)]);
        assert!(matches!(macdonald_product_d(2), Err(Error::InvalidRank { .. })));
        assert!(macdonald_product_a(0).is_err());
    }

    #[test]
    fn identity_examples() {
        let a1 = verify_identity(&macdonald_product_a(1).unwrap(), t("A1"), 50).unwrap();
        assert!(a1.equal);
        assert_eq!(a1.order_checked, 50);
        assert!(verify_identity(&macdonald_product_a(2).unwrap(), t("A2"), 50).unwrap().equal);
        let bad = ProductSpec::from_triples(&[(2, 0, 3), (1, 0, -1)]).unwrap();
        let rep = verify_identity(&bad, t("A1"), 10).unwrap();
        assert!(!rep.equal);
        // lhs = (1 + q + q^3 + ...)(1 - q^2) first differs at q^2
        assert_eq!(rep.first_mismatch_exponent, Some(2));
        assert_eq!(rep.lhs_coefficient, Some(BigInt::from(-1)));
        assert_eq!(rep.rhs_coefficient, Some(BigInt::from(0)));
    }

    #[test]
    fn user_identity_examples() {
        let gauss = ProductSpec::from_triples(&[(2, 0, 2), (1, 0, -1)]).unwrap();
        assert!(verify_user_identity(&gauss, &[vec![2]], 2, &[-1], 30).unwrap().equal);
        let empty = ProductSpec::new(vec![]).unwrap();
        let rep = verify_user_identity(&empty, &[vec![2]], 2, &[0], 0).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.order_checked, 0);
        assert_eq!(verify_user_identity(&gauss, &[vec![-2]], 2, &[0], 5).unwrap_err(), Error::NotPositiveDefinite);
        assert!(matches!(theta_sum(&[vec![1]], 1, &[0], 4), Err(Error::NonIntegralExponent(_))));
    }

    #[test]
    fn non_symmetric_matrix_uses_symmetric_part() {
        let lower = vec![vec![2, 0], vec![-2, 2]];
        let sym = vec![vec![2, -1], vec![-1, 2]];
        assert_eq!(theta_sum(&lower, 1, &[0, 0], 10).unwrap(), theta_sum(&sym, 1, &[0, 0], 10).unwrap());
    }

    #[test]
    fn level1_products_match_multisum() {
        for ty in ["A1", "A2", "A4", "D3", "D4", "D6"] {
            let p = level1_principal_product(t(ty)).unwrap();
            assert!(verify_level1_identity(&p, t(ty), 40).unwrap().equal, "{ty}");
        }
        assert!(level1_principal_product(t("E6")).is_err());
    }

    #[test]
    fn two_rhs_forms_are_consistent() {
        for ty in ["A2", "D4"] {
            let prod = macdonald_product(t(ty)).unwrap().expand(30).unwrap();
            let pref = multisum_prefactor(t(ty)).unwrap().expand(30).unwrap();
            assert_eq!(&pref * &prod, multisum_side(t(ty), 30).unwrap());
        }
    }

    #[test]
    fn job_json() {
        let job = IdentityJob::from_json(r#"{"lhs":[{"a":3,"b":0,"e":3},{"a":1,"b":0,"e":-1}],"rhs":{"builtin":"A","type":"A2"},"order":30}"#).unwrap();
        assert!(job.run().unwrap().equal);
        let job = IdentityJob::from_json(r#"{"lhs":[{"a":2,"b":0,"e":2},{"a":1,"b":0,"e":-1}],"rhs":{"theta":{"matrix":[[2]],"scale":2,"shift":[-1]}},"order":20}"#).unwrap();
        assert!(job.run().unwrap().equal);
        let job = IdentityJob::from_json(r#"{"lhs":[],"rhs":{"builtin":"D","type":"A2"},"order":3}"#).unwrap();
        assert!(job.run().is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let bad = ProductSpec::from_triples(&[(2, 0, 3), (1, 0, -1)]).unwrap();
        let rep = verify_identity(&bad, t("A1"), 10).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"lhs_coefficient\":\"-1\""));
        let back: IdentityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
        assert!(rep.to_text().contains("MISMATCH at q^2"));
    }
}
