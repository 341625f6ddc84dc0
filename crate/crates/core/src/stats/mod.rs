//! Agreement-analysis statistics: rank-sum test, effect size, quartile
//! comparison, and the per-metric group comparison report.

use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{count, real, Real};

/// Two-sided significance level used in every report.
pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Exact permutation testing is used while the pooled sample is at most
/// this large; the normal approximation with tie and continuity
/// corrections takes over above it.
pub const EXACT_LIMIT: usize = 20;

pub fn is_significant<F: Real>(p: F) -> bool {
    p < real(SIGNIFICANCE_LEVEL)
}

/// Rank-sum test outcome for the first sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwuResult<F> {
    /// U statistic of the first sample, from midranks.
    pub u: F,
    /// Continuity- and tie-corrected normal deviate.
    pub z: F,
    /// Two-sided p value.
    pub p: F,
    /// Whether `p` came from the exact permutation distribution.
    pub exact: bool,
}

/// Mann-Whitney U test with midranks. Exact permutation p for pooled
/// samples up to [`EXACT_LIMIT`], normal approximation with continuity
/// correction beyond. U_A + U_B = n_A * n_B holds by construction.
pub fn mann_whitney_u<F: Real>(a: &[F], b: &[F]) -> Result<MwuResult<F>> {
    if a.is_empty() {
        return Err(Error::EmptySample { which: "a" });
    }
    if b.is_empty() {
        return Err(Error::EmptySample { which: "b" });
    }
    let n_a = a.len();
    let n_b = b.len();
    let n = n_a + n_b;

    // doubled midranks keep everything in integers so tied ranks stay exact
    let mut pooled: Vec<(F, usize)> = a
        .iter()
        .copied()
        .map(|v| (v, 0usize))
        .chain(b.iter().copied().map(|v| (v, 1usize)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("samples must not contain NaN"));

    let mut doubled_ranks = vec![0i64; n];
    let mut tie_sizes: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        let doubled_midrank = (i + j + 2) as i64;
        for item in doubled_ranks.iter_mut().take(j + 1).skip(i) {
            *item = doubled_midrank;
        }
        tie_sizes.push(j - i + 1);
        i = j + 1;
    }

    let doubled_rank_sum_a: i64 = pooled
        .iter()
        .zip(&doubled_ranks)
        .filter(|((_, side), _)| *side == 0)
        .map(|(_, r)| *r)
        .sum();
    // 2*U_A = 2*R_A - n_a*(n_a+1)
    let doubled_u = doubled_rank_sum_a - (n_a as i64) * (n_a as i64 + 1);
    let u = F::from_i64(doubled_u).expect("doubled U fits scalar") / real(2.0);

    let z = normal_z(doubled_u, n_a, n_b, &tie_sizes);
    let p = if n <= EXACT_LIMIT {
        exact_two_sided_p(&doubled_ranks, n_a, doubled_u)
    } else {
        two_sided_p_from_z(z)
    };
    Ok(MwuResult {
        u,
        z,
        p,
        exact: n <= EXACT_LIMIT,
    })
}

/// Exact two-sided p: the share of equally-likely labelings whose U
/// deviates from the mean at least as much as the observed U. Computed in
/// doubled-rank integers, so the comparison is exact.
fn exact_two_sided_p<F: Real>(doubled_ranks: &[i64], n_a: usize, observed_doubled_u: i64) -> F {
    let n = doubled_ranks.len();
    // 2*mu = n_a*n_b, and 2*U = rank sum - n_a*(n_a+1)
    let doubled_mu = (n_a as i64) * ((n - n_a) as i64);
    let observed_dev = (observed_doubled_u - doubled_mu).abs();
    let offset = (n_a as i64) * (n_a as i64 + 1);

    let mut extreme = 0u64;
    let mut total = 0u64;
    enumerate_subset_sums(doubled_ranks, 0, n_a, 0, &mut |rank_sum| {
        total += 1;
        if (rank_sum - offset - doubled_mu).abs() >= observed_dev {
            extreme += 1;
        }
    });
    F::from_u64(extreme).expect("count") / F::from_u64(total).expect("count")
}

/// Visit the rank sum of every `remaining`-element subset of
/// `ranks[next..]`, added to `sum`.
fn enumerate_subset_sums(
    ranks: &[i64],
    next: usize,
    remaining: usize,
    sum: i64,
    visit: &mut impl FnMut(i64),
) {
    if remaining == 0 {
        visit(sum);
        return;
    }
    if ranks.len() - next < remaining {
        return;
    }
    enumerate_subset_sums(ranks, next + 1, remaining - 1, sum + ranks[next], visit);
    enumerate_subset_sums(ranks, next + 1, remaining, sum, visit);
}

/// Tie-corrected, continuity-corrected normal deviate of the U statistic.
fn normal_z<F: Real>(doubled_u: i64, n_a: usize, n_b: usize, tie_sizes: &[usize]) -> F {
    let n = n_a + n_b;
    let n_a_f = count::<F>(n_a);
    let n_b_f = count::<F>(n_b);
    let n_f = count::<F>(n);
    let tie_term: F = tie_sizes
        .iter()
        .map(|&t| {
            let t = count::<F>(t);
            t * t * t - t
        })
        .sum();
    let variance = n_a_f * n_b_f / real(12.0)
        * ((n_f + F::one()) - tie_term / (n_f * (n_f - F::one())));
    if variance <= F::zero() {
        return F::zero();
    }
    let u = F::from_i64(doubled_u).expect("doubled U") / real(2.0);
    let mu = n_a_f * n_b_f / real(2.0);
    let deviation = (u - mu).abs() - real(0.5);
    if deviation <= F::zero() {
        return F::zero();
    }
    let z = deviation / variance.sqrt();
    if u < mu {
        -z
    } else {
        z
    }
}

fn two_sided_p_from_z<F: Real>(z: F) -> F {
    if z == F::zero() {
        return F::one();
    }
    let p = real::<F>(2.0) * (F::one() - standard_normal_cdf(z.abs()));
    p.clamp(F::zero(), F::one())
}

/// Standard normal CDF via a Chebyshev fit of erfc; fractional error
/// below 1.2e-7 everywhere.
pub fn standard_normal_cdf<F: Real>(z: F) -> F {
    let half = real::<F>(0.5);
    half * erfc(-z / real::<F>(std::f64::consts::SQRT_2))
}

fn erfc<F: Real>(x: F) -> F {
    let z = x.abs();
    let t = F::one() / (F::one() + z / real::<F>(2.0));
    let poly = real::<F>(-1.26551223)
        + t * (real::<F>(1.00002368)
            + t * (real::<F>(0.37409196)
                + t * (real::<F>(0.09678418)
                    + t * (real::<F>(-0.18628806)
                        + t * (real::<F>(0.27886807)
                            + t * (real::<F>(-1.13520398)
                                + t * (real::<F>(1.48851587)
                                    + t * (real::<F>(-0.82215223)
                                        + t * real::<F>(0.17087277)))))))));
    let ans = t * (-z * z + poly).exp();
    if x >= F::zero() {
        ans
    } else {
        real::<F>(2.0) - ans
    }
}

/// Effect-size magnitude labels with the standard thresholds
/// 0.147 / 0.33 / 0.474.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Magnitude {
    Negligible,
    Small,
    Medium,
    Large,
}

impl Magnitude {
    pub fn from_delta<F: Real>(d: F) -> Magnitude {
        let a = d.abs();
        if a < real(0.147) {
            Magnitude::Negligible
        } else if a < real(0.33) {
            Magnitude::Small
        } else if a < real(0.474) {
            Magnitude::Medium
        } else {
            Magnitude::Large
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Magnitude::Negligible => "Negligible",
            Magnitude::Small => "Small",
            Magnitude::Medium => "Medium",
            Magnitude::Large => "Large",
        }
    }
}

impl std::fmt::Display for Magnitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Cliff's delta outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliffsDelta<F> {
    /// (#(a>b) - #(a<b)) / (n_a * n_b), in [-1, 1].
    pub d: F,
    pub magnitude: Magnitude,
}

/// All-pairs dominance effect size.
pub fn cliffs_delta<F: Real>(a: &[F], b: &[F]) -> Result<CliffsDelta<F>> {
    if a.is_empty() {
        return Err(Error::EmptySample { which: "a" });
    }
    if b.is_empty() {
        return Err(Error::EmptySample { which: "b" });
    }
    let mut greater: i64 = 0;
    let mut less: i64 = 0;
    for x in a {
        for y in b {
            match x.partial_cmp(y).expect("samples must not contain NaN") {
                std::cmp::Ordering::Greater => greater += 1,
                std::cmp::Ordering::Less => less += 1,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    let pairs = (a.len() * b.len()) as i64;
    let d = F::from_i64(greater - less).expect("pair count") / F::from_i64(pairs).expect("pairs");
    Ok(CliffsDelta {
        d,
        magnitude: Magnitude::from_delta(d),
    })
}

/// Pooled quartile boundaries (q1, q2, q3) with midpoint interpolation at
/// exact cut positions.
pub fn quartile_boundaries<F: Real>(sorted: &[F]) -> (F, F, F) {
    let q = |k: usize| -> F {
        let m = sorted.len();
        let r = k * m;
        if r.is_multiple_of(4) {
            let hi = r / 4;
            (sorted[hi - 1] + sorted[hi]) / real(2.0)
        } else {
            sorted[r / 4]
        }
    };
    (q(1), q(2), q(3))
}

/// Median with midpoint interpolation; input need not be sorted but must
/// be non-empty.
pub fn median<F: Real>(values: &[F]) -> F {
    let mut sorted = values.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("values must not contain NaN"));
    let m = sorted.len();
    if m.is_multiple_of(2) {
        (sorted[m / 2 - 1] + sorted[m / 2]) / real(2.0)
    } else {
        sorted[m / 2]
    }
}

/// Per-band outcome of the quartile comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuartileOutcome<F> {
    Compared {
        p: F,
        d: F,
        magnitude: Magnitude,
        n_a: usize,
        n_b: usize,
    },
    /// One side of the band was empty.
    NotComparable { n_a: usize, n_b: usize },
}

/// Split the pooled values at the pooled quartiles and run the rank-sum
/// test and effect size within each band. A band with an empty side is
/// reported as not comparable rather than failing the whole analysis.
pub fn quartile_compare<F: Real>(a: &[F], b: &[F]) -> Result<[QuartileOutcome<F>; 4]> {
    let pooled_len = a.len() + b.len();
    if pooled_len < 8 {
        return Err(Error::PooledTooSmall {
            got: pooled_len,
            min: 8,
        });
    }
    let mut pooled: Vec<F> = a.iter().chain(b.iter()).copied().collect();
    pooled.sort_by(|x, y| x.partial_cmp(y).expect("values must not contain NaN"));
    let (q1, q2, q3) = quartile_boundaries(&pooled);

    let band = |v: F| -> usize {
        if v <= q1 {
            0
        } else if v <= q2 {
            1
        } else if v <= q3 {
            2
        } else {
            3
        }
    };

    let mut outcomes = Vec::with_capacity(4);
    for k in 0..4 {
        let band_a: Vec<F> = a.iter().copied().filter(|v| band(*v) == k).collect();
        let band_b: Vec<F> = b.iter().copied().filter(|v| band(*v) == k).collect();
        if band_a.is_empty() || band_b.is_empty() {
            outcomes.push(QuartileOutcome::NotComparable {
                n_a: band_a.len(),
                n_b: band_b.len(),
            });
            continue;
        }
        let test = mann_whitney_u(&band_a, &band_b)?;
        let effect = cliffs_delta(&band_a, &band_b)?;
        outcomes.push(QuartileOutcome::Compared {
            p: test.p,
            d: effect.d,
            magnitude: effect.magnitude,
            n_a: band_a.len(),
            n_b: band_b.len(),
        });
    }
    Ok(outcomes.try_into().expect("exactly four bands"))
}

/// Full comparison of one metric between the promoted group (A) and the
/// discouraged group (B).
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonResult<F> {
    pub metric_name: String,
    pub n_a: usize,
    pub n_b: usize,
    pub median_a: F,
    pub median_b: F,
    pub u: F,
    pub z: F,
    pub p: F,
    pub cliffs_d: F,
    pub magnitude: Magnitude,
    pub quartiles: [QuartileOutcome<F>; 4],
    /// Rows excluded because the metric was not applicable.
    pub dropped_na: usize,
}

impl<F: Real> ComparisonResult<F> {
    pub fn significant(&self) -> bool {
        is_significant(self.p)
    }
}

/// Compare one metric between the two labeled groups, dropping rows where
/// the metric is not applicable. Group A is Promoted, group B Discouraged.
pub fn compare_groups<F: Real>(
    rows: &[(QualityLabel, Option<F>)],
    metric_name: &str,
) -> Result<ComparisonResult<F>> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut dropped = 0usize;
    for (label, value) in rows {
        match value {
            Some(v) => match label {
                QualityLabel::Promoted => a.push(*v),
                QualityLabel::Discouraged => b.push(*v),
            },
            None => dropped += 1,
        }
    }
    if a.len() < 2 {
        return Err(Error::InsufficientClass {
            label: QualityLabel::Promoted,
            got: a.len(),
            min: 2,
        });
    }
    if b.len() < 2 {
        return Err(Error::InsufficientClass {
            label: QualityLabel::Discouraged,
            got: b.len(),
            min: 2,
        });
    }
    let test = mann_whitney_u(&a, &b)?;
    let effect = cliffs_delta(&a, &b)?;
    let quartiles = quartile_compare(&a, &b)?;
    Ok(ComparisonResult {
        metric_name: metric_name.to_string(),
        n_a: a.len(),
        n_b: b.len(),
        median_a: median(&a),
        median_b: median(&b),
        u: test.u,
        z: test.z,
        p: test.p,
        cliffs_d: effect.d,
        magnitude: effect.magnitude,
        quartiles,
        dropped_na: dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_samples_have_zero_u_and_exact_p() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.u, 0.0);
        assert!(r.exact);
        assert_eq!(r.p, 0.1);
    }

    #[test]
    fn identical_samples_have_half_u_and_p_one() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.u, 4.5);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn u_values_of_both_sides_sum_to_the_pair_count() {
        let a = [3.0, 1.0, 4.0];
        let b = [1.0, 5.0, 9.0];
        let ua = mann_whitney_u(&a, &b).unwrap().u;
        let ub = mann_whitney_u(&b, &a).unwrap().u;
        assert_eq!(ua + ub, 9.0);
    }

    #[test]
    fn p_is_symmetric_under_swap() {
        let a = [1.0, 2.0, 2.0, 7.0];
        let b = [2.0, 3.0, 5.0];
        let pab = mann_whitney_u(&a, &b).unwrap().p;
        let pba = mann_whitney_u(&b, &a).unwrap().p;
        assert_eq!(pab, pba);
    }

    #[test]
    fn empty_samples_error() {
        assert!(mann_whitney_u::<f64>(&[], &[1.0]).is_err());
        assert!(mann_whitney_u::<f64>(&[1.0], &[]).is_err());
    }

    #[test]
    fn large_samples_use_the_normal_approximation() {
        let a: Vec<f64> = (0..15).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..15).map(|i| i as f64 + 3.0).collect();
        let r = mann_whitney_u(&a, &b).unwrap();
        assert!(!r.exact);
        assert!(r.p > 0.0 && r.p < 1.0);
    }

    #[test]
    fn all_tied_large_sample_is_a_p_of_one() {
        let a = vec![2.0f64; 15];
        let b = vec![2.0f64; 15];
        let r = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.z, 0.0);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn dominant_sample_has_delta_one_large() {
        let e = cliffs_delta(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.d, 1.0);
        assert_eq!(e.magnitude, Magnitude::Large);
    }

    #[test]
    fn equal_samples_have_zero_delta() {
        let e = cliffs_delta(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!(e.d, 0.0);
        assert_eq!(e.magnitude, Magnitude::Negligible);
    }

    #[test]
    fn straddling_pair_cancels() {
        let e = cliffs_delta(&[1.0, 3.0], &[2.0]).unwrap();
        assert_eq!(e.d, 0.0);
    }

    #[test]
    fn delta_is_antisymmetric_exactly() {
        let a = [1.0, 2.0, 2.5, 9.0];
        let b = [2.0, 3.0];
        let ab = cliffs_delta(&a, &b).unwrap().d;
        let ba = cliffs_delta(&b, &a).unwrap().d;
        assert_eq!(ab, -ba);
    }

    #[test]
    fn magnitude_thresholds() {
        assert_eq!(Magnitude::from_delta(0.0), Magnitude::Negligible);
        assert_eq!(Magnitude::from_delta(0.146), Magnitude::Negligible);
        assert_eq!(Magnitude::from_delta(-0.2), Magnitude::Small);
        assert_eq!(Magnitude::from_delta(0.4), Magnitude::Medium);
        assert_eq!(Magnitude::from_delta(-0.5), Magnitude::Large);
    }

    #[test]
    fn identical_distributions_compare_flat_across_quartiles() {
        let a: Vec<f64> = (0..20).map(|i| (i % 10) as f64).collect();
        let b = a.clone();
        let outcomes = quartile_compare(&a, &b).unwrap();
        for outcome in outcomes {
            match outcome {
                QuartileOutcome::Compared { d, .. } => assert_eq!(d, 0.0),
                QuartileOutcome::NotComparable { .. } => panic!("both sides present"),
            }
        }
    }

    #[test]
    fn disjoint_groups_leave_bands_one_sided() {
        let a: Vec<f64> = (100..110).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let outcomes = quartile_compare(&a, &b).unwrap();
        assert!(matches!(
            outcomes[3],
            QuartileOutcome::NotComparable { n_b: 0, .. }
        ));
        assert!(matches!(
            outcomes[0],
            QuartileOutcome::NotComparable { n_a: 0, .. }
        ));
    }

    #[test]
    fn pooled_sample_must_reach_eight() {
        assert!(quartile_compare(&[1.0, 2.0], &[3.0]).is_err());
    }

    #[test]
    fn median_interpolates_midpoints() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn compare_groups_drops_na_and_reports_counts() {
        use QualityLabel::*;
        let mut rows: Vec<(QualityLabel, Option<f64>)> = Vec::new();
        for i in 0..10 {
            rows.push((Promoted, Some(10.0 + i as f64)));
            rows.push((Discouraged, Some(i as f64)));
        }
        rows.push((Promoted, None));
        rows.push((Discouraged, None));
        let r = compare_groups(&rows, "tcr").unwrap();
        assert_eq!(r.n_a, 10);
        assert_eq!(r.n_b, 10);
        assert_eq!(r.dropped_na, 2);
        assert_eq!(r.cliffs_d, 1.0);
        assert!(r.significant());
    }

    #[test]
    fn constant_metric_is_flat_and_insignificant() {
        use QualityLabel::*;
        let rows: Vec<(QualityLabel, Option<f64>)> = (0..20)
            .map(|i| {
                let label = if i % 2 == 0 { Promoted } else { Discouraged };
                (label, Some(7.0))
            })
            .collect();
        let r = compare_groups(&rows, "constant").unwrap();
        assert_eq!(r.cliffs_d, 0.0);
        assert_eq!(r.p, 1.0);
        assert!(!r.significant());
    }

    #[test]
    fn too_few_applicable_rows_is_an_error() {
        use QualityLabel::*;
        let rows = vec![
            (Promoted, Some(1.0)),
            (Promoted, Some(2.0)),
            (Discouraged, Some(1.0)),
            (Discouraged, None),
        ];
        assert!(matches!(
            compare_groups(&rows, "m"),
            Err(Error::InsufficientClass {
                label: Discouraged,
                ..
            })
        ));
    }

    #[test]
    fn normal_cdf_reference_points() {
        // the erfc fit is good to about 1.2e-7
        let cdf = |z: f64| standard_normal_cdf(z);
        assert!((cdf(0.0) - 0.5).abs() < 1e-6);
        assert!((cdf(1.959963985) - 0.975).abs() < 1e-6);
        assert!((cdf(-1.0) - 0.15865525393145707).abs() < 1e-6);
    }
}
