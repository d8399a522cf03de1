// Copyright 2026 The qconfound Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Statistics kit: Wilson score intervals, Welch's t-test, paired t-test,
//! Pearson correlation, and R².
//!
//! Everything is self-contained. Student-t tail probabilities go through the
//! regularized incomplete beta function evaluated with Lentz's continued
//! fraction (tolerance 1e-10, at most 300 iterations); the normal CDF used
//! by the pooled two-proportion cross-check goes through the regularized
//! incomplete gamma function. Sample standard deviations use the `n − 1`
//! denominator throughout.
//!
//! Degenerate-variance conventions (so deterministic classical scenarios
//! never need an error branch): when every relevant variance is zero, equal
//! means give `p = 1.0` and differing means give `p = 0.0`.

use alloc::format;

use crate::{fmath, Error, Result};

/// Normal quantile for 95% two-sided intervals, fixed for bit-stable output.
pub const Z_95: f64 = 1.959964;

const BETA_CF_TOL: f64 = 1e-10;
const BETA_CF_MAX_ITER: usize = 300;
const FPMIN: f64 = 1e-300;

/// Outcome of a hypothesis test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
    pub two_sided: bool,
}

/// Arithmetic mean. Panics on empty input.
#[must_use]
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance (n − 1 denominator). Zero for n < 2.
#[must_use]
pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64
}

#[must_use]
pub fn sample_std(values: &[f64]) -> f64 {
    fmath::sqrt(sample_variance(values))
}

/// Standard error of the mean.
#[must_use]
pub fn standard_error(values: &[f64]) -> f64 {
    sample_std(values) / fmath::sqrt(values.len() as f64)
}

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// ln Γ(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
#[must_use]
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection formula; the argument passed back is ≥ 0.5.
        let pi = core::f64::consts::PI;
        return fmath::ln(pi / fmath::sin(pi * x)) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * fmath::ln(2.0 * core::f64::consts::PI) + (x + 0.5) * fmath::ln(t) - t + fmath::ln(acc)
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if fmath::abs(d) < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m_f = m as f64;
        let m2 = 2.0 * m_f;
        let aa = m_f * (b - m_f) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if fmath::abs(d) < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if fmath::abs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m_f) * (qab + m_f) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if fmath::abs(d) < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if fmath::abs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if fmath::abs(delta - 1.0) < BETA_CF_TOL {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b).
#[must_use]
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front =
        ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * fmath::ln(x) + b * fmath::ln(1.0 - x);
    let front = fmath::exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

/// Regularized lower incomplete gamma function P(a, x).
#[must_use]
pub fn regularized_incomplete_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let ln_front = -x + a * fmath::ln(x) - ln_gamma(a);
    if x < a + 1.0 {
        // Series representation.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..500 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if fmath::abs(term) < fmath::abs(sum) * 1e-15 {
                break;
            }
        }
        sum * fmath::exp(ln_front)
    } else {
        // Continued fraction for Q(a, x), again via Lentz.
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if fmath::abs(d) < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if fmath::abs(c) < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if fmath::abs(delta - 1.0) < 1e-15 {
                break;
            }
        }
        1.0 - h * fmath::exp(ln_front)
    }
}

/// CDF of Student's t distribution with `df` degrees of freedom.
#[must_use]
pub fn student_t_cdf(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 0.5;
    }
    let x = df / (df + t * t);
    let tail = regularized_incomplete_beta(df / 2.0, 0.5, x);
    if t > 0.0 {
        1.0 - tail / 2.0
    } else {
        tail / 2.0
    }
}

/// Two-sided p-value for a t statistic.
#[must_use]
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}

/// Quantile of Student's t distribution, by bisection on the CDF.
#[must_use]
pub fn student_t_quantile(p: f64, df: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile requires p in (0, 1)");
    if p == 0.5 {
        return 0.0;
    }
    if p < 0.5 {
        return -student_t_quantile(1.0 - p, df);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while student_t_cdf(hi, df) < p && hi < 1e12 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if student_t_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Standard normal CDF via the regularized incomplete gamma function.
#[must_use]
pub fn normal_cdf(z: f64) -> f64 {
    // erfc(y) = Q(1/2, y²) for y ≥ 0.
    let erfc = |y: f64| 1.0 - regularized_incomplete_gamma(0.5, y * y);
    if z >= 0.0 {
        1.0 - 0.5 * erfc(z / core::f64::consts::SQRT_2)
    } else {
        0.5 * erfc(-z / core::f64::consts::SQRT_2)
    }
}

/// Standard normal quantile, by bisection.
#[must_use]
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile requires p in (0, 1)");
    let mut lo = -40.0;
    let mut hi = 40.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// Estimators and tests
// ---------------------------------------------------------------------------

/// Wilson score interval for `successes` out of `n` Bernoulli trials.
///
/// The 95% level uses the fixed quantile [`Z_95`]; other confidence levels
/// derive their quantile from [`normal_quantile`].
pub fn wilson_interval(successes: u64, n: u64, confidence: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Argument("wilson interval requires n ≥ 1".into()));
    }
    if successes > n {
        return Err(Error::Argument(format!(
            "successes {successes} exceed trials {n}"
        )));
    }
    if confidence <= 0.0 || confidence >= 1.0 {
        return Err(Error::Argument(format!(
            "confidence {confidence} outside (0, 1)"
        )));
    }
    let z = if fmath::abs(confidence - 0.95) < 1e-12 {
        Z_95
    } else {
        normal_quantile(0.5 + confidence / 2.0)
    };
    let n_f = n as f64;
    let p_hat = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (p_hat + z2 / (2.0 * n_f)) / denom;
    let half = z * fmath::sqrt(p_hat * (1.0 - p_hat) / n_f + z2 / (4.0 * n_f * n_f)) / denom;
    // At the boundaries the corresponding endpoint is exactly 0 or 1
    // algebraically; pin it so rounding cannot pull it inward.
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    Ok((lo, hi))
}

/// Two-sided Welch's t-test for independent samples.
pub fn welch_t_test(sample1: &[f64], sample2: &[f64]) -> Result<TestResult> {
    if sample1.len() < 2 || sample2.len() < 2 {
        return Err(Error::Argument(
            "welch test requires at least 2 observations per sample".into(),
        ));
    }
    let (n1, n2) = (sample1.len() as f64, sample2.len() as f64);
    let (m1, m2) = (mean(sample1), mean(sample2));
    let (v1, v2) = (sample_variance(sample1), sample_variance(sample2));
    if v1 == 0.0 && v2 == 0.0 {
        return Ok(degenerate_result(m1 - m2, n1 + n2 - 2.0));
    }
    let se2 = v1 / n1 + v2 / n2;
    let t = (m1 - m2) / fmath::sqrt(se2);
    let df =
        se2 * se2 / ((v1 / n1) * (v1 / n1) / (n1 - 1.0) + (v2 / n2) * (v2 / n2) / (n2 - 1.0));
    Ok(TestResult {
        statistic: t,
        degrees_of_freedom: df,
        p_value: student_t_two_sided_p(t, df),
        two_sided: true,
    })
}

/// Two-sided paired t-test on precomputed differences.
pub fn paired_t_test(diffs: &[f64]) -> Result<TestResult> {
    if diffs.len() < 2 {
        return Err(Error::Argument(
            "paired test requires at least 2 differences".into(),
        ));
    }
    let n = diffs.len() as f64;
    let m = mean(diffs);
    let sd = sample_std(diffs);
    if sd == 0.0 {
        return Ok(degenerate_result(m, n - 1.0));
    }
    let t = m / (sd / fmath::sqrt(n));
    Ok(TestResult {
        statistic: t,
        degrees_of_freedom: n - 1.0,
        p_value: student_t_two_sided_p(t, n - 1.0),
        two_sided: true,
    })
}

fn degenerate_result(mean_diff: f64, df: f64) -> TestResult {
    let (statistic, p_value) = if mean_diff == 0.0 {
        (0.0, 1.0)
    } else if mean_diff > 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        (f64::NEG_INFINITY, 0.0)
    };
    TestResult {
        statistic,
        degrees_of_freedom: df,
        p_value,
        two_sided: true,
    }
}

/// Pooled two-proportion z-test (cross-check variant of the no-signaling
/// comparison). Returns `(z, two-sided p)`.
pub fn two_proportion_z_test(
    successes1: u64,
    n1: u64,
    successes2: u64,
    n2: u64,
) -> Result<(f64, f64)> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Argument("proportion test requires n ≥ 1".into()));
    }
    let (p1, p2) = (successes1 as f64 / n1 as f64, successes2 as f64 / n2 as f64);
    let pooled = (successes1 + successes2) as f64 / (n1 + n2) as f64;
    let se = fmath::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64));
    if se == 0.0 {
        return Ok(if p1 == p2 {
            (0.0, 1.0)
        } else {
            (f64::INFINITY, 0.0)
        });
    }
    let z = (p1 - p2) / se;
    let p = 2.0 * (1.0 - normal_cdf(fmath::abs(z)));
    Ok((z, p.clamp(0.0, 1.0)))
}

/// Pearson correlation coefficient. Errors when either input is constant.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Argument(
            "pearson r requires two equal-length samples of size ≥ 2".into(),
        ));
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Argument(
            "pearson r is undefined for constant input".into(),
        ));
    }
    Ok((sxy / fmath::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Coefficient of determination `1 − SS_res/SS_tot`. May be negative for
/// predictions worse than the mean.
pub fn r_squared(y_obs: &[f64], y_pred: &[f64]) -> Result<f64> {
    if y_obs.len() != y_pred.len() || y_obs.len() < 2 {
        return Err(Error::Argument(
            "r² requires two equal-length samples of size ≥ 2".into(),
        ));
    }
    let m = mean(y_obs);
    let ss_tot: f64 = y_obs.iter().map(|y| (y - m) * (y - m)).sum();
    if ss_tot == 0.0 {
        return Err(Error::Argument(
            "r² is undefined for constant observations".into(),
        ));
    }
    let ss_res: f64 = y_obs
        .iter()
        .zip(y_pred)
        .map(|(y, f)| (y - f) * (y - f))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Argument(
            "linear fit requires two equal-length samples of size ≥ 2".into(),
        ));
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::Argument("linear fit requires non-constant x".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Mean and a t-based 95% confidence interval over trial values.
#[must_use]
pub fn mean_ci95(values: &[f64]) -> (f64, f64, f64) {
    let m = mean(values);
    if values.len() < 2 {
        return (m, m, m);
    }
    let se = standard_error(values);
    if se == 0.0 {
        return (m, m, m);
    }
    let t = student_t_quantile(0.975, (values.len() - 1) as f64);
    (m, m - t * se, m + t * se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wilson_zero_successes() {
        let (lo, hi) = wilson_interval(0, 100, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.0370).abs() < 1e-4, "hi = {hi}");
    }

    #[test]
    fn wilson_is_symmetric_at_half() {
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        assert_relative_eq!((lo + hi) / 2.0, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn wilson_saturated() {
        let (lo, hi) = wilson_interval(100_000, 100_000, 0.95).unwrap();
        assert_eq!(hi, 1.0);
        assert!(lo > 0.9999);
    }

    #[test]
    fn wilson_rejects_bad_arguments() {
        assert!(wilson_interval(0, 0, 0.95).is_err());
        assert!(wilson_interval(5, 4, 0.95).is_err());
    }

    #[test]
    fn wilson_contains_p_hat_and_stays_in_unit_interval() {
        for n in [1u64, 3, 10, 57, 1000] {
            for s in [0, n / 3, n / 2, n] {
                let (lo, hi) = wilson_interval(s, n, 0.95).unwrap();
                let p_hat = s as f64 / n as f64;
                assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
                assert!(lo <= p_hat + 1e-12 && p_hat <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn wilson_coverage_near_nominal() {
        // 10,000 simulated binomials at p = 0.5, n = 100.
        use rand::Rng;
        let mut rng = crate::rng::stream(2024, &[]);
        let mut covered = 0u32;
        let total = 10_000;
        for _ in 0..total {
            let successes = (0..100).filter(|_| rng.gen::<f64>() < 0.5).count() as u64;
            let (lo, hi) = wilson_interval(successes, 100, 0.95).unwrap();
            if lo <= 0.5 && 0.5 <= hi {
                covered += 1;
            }
        }
        let coverage = covered as f64 / total as f64;
        assert!((0.93..=0.97).contains(&coverage), "coverage {coverage}");
    }

    #[test]
    fn welch_identical_samples() {
        let s = [1.0, 2.0, 3.0, 4.0];
        let r = welch_t_test(&s, &s).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn welch_separated_samples() {
        let a = [0.0, 1e-3, -1e-3, 0.0, 0.0];
        let b = [1.0, 1.0 + 1e-3, 1.0 - 1e-3, 1.0, 1.0];
        let r = welch_t_test(&a, &b).unwrap();
        assert!(r.p_value < 1e-6, "p = {}", r.p_value);
    }

    #[test]
    fn welch_reduces_to_pooled_t_for_equal_sizes_and_variances() {
        let a: Vec<f64> = (0..30).map(|i| i as f64 * 0.1).collect();
        let b: Vec<f64> = a.iter().map(|v| v + 0.35).collect();
        let r = welch_t_test(&a, &b).unwrap();
        // Pooled two-sample t with equal n: t = (m1−m2)/(sp·√(2/n)), df = 2n−2.
        let sp2 = (sample_variance(&a) + sample_variance(&b)) / 2.0;
        let t_pooled = (mean(&a) - mean(&b)) / (sp2 * 2.0 / 30.0).sqrt();
        assert_relative_eq!(r.statistic, t_pooled, epsilon = 1e-9);
        assert_relative_eq!(r.degrees_of_freedom, 58.0, epsilon = 1e-9);
    }

    #[test]
    fn welch_is_antisymmetric() {
        let a = [0.1, 0.5, 0.9, 0.2];
        let b = [0.4, 0.45, 0.55, 0.6, 0.5];
        let r1 = welch_t_test(&a, &b).unwrap();
        let r2 = welch_t_test(&b, &a).unwrap();
        assert_relative_eq!(r1.statistic, -r2.statistic, epsilon = 1e-12);
        assert_relative_eq!(r1.p_value, r2.p_value, epsilon = 1e-12);
    }

    #[test]
    fn welch_degenerate_conventions() {
        let same = welch_t_test(&[2.0, 2.0, 2.0], &[2.0, 2.0]).unwrap();
        assert_eq!(same.p_value, 1.0);
        let diff = welch_t_test(&[2.0, 2.0, 2.0], &[3.0, 3.0]).unwrap();
        assert_eq!(diff.p_value, 0.0);
    }

    #[test]
    fn paired_all_zero_diffs() {
        let r = paired_t_test(&[0.0; 8]).unwrap();
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn paired_large_effect() {
        // 100 differences of 0.113 ± 0.01 give |t| ≈ 113.
        let diffs: Vec<f64> = (0..100)
            .map(|i| 0.113 + if i % 2 == 0 { 0.01 } else { -0.01 })
            .collect();
        let r = paired_t_test(&diffs).unwrap();
        assert!(r.statistic > 100.0);
        assert!(r.p_value < 1e-9);
    }

    #[test]
    fn paired_zero_mean() {
        let r = paired_t_test(&[-1.0, 1.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn t_cdf_at_zero_is_half() {
        for df in [1.0, 2.0, 7.5, 30.0, 200.0] {
            assert!((student_t_cdf(0.0, df) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn t_cdf_is_monotone() {
        for df in [1.0, 4.0, 25.0] {
            let mut last = 0.0;
            for k in -40..=40 {
                let c = student_t_cdf(k as f64 * 0.25, df);
                assert!(c >= last);
                last = c;
            }
        }
    }

    #[test]
    fn t_cdf_matches_closed_forms() {
        // df = 1: CDF = 1/2 + atan(t)/π; df = 2: CDF = 1/2 + t/(2√(2+t²)).
        // The continued fraction targets 1e-10, so compare a bit above it.
        for t in [-3.0f64, -0.7, 0.3, 1.8, 6.0] {
            let c1 = 0.5 + t.atan() / core::f64::consts::PI;
            assert_relative_eq!(student_t_cdf(t, 1.0), c1, epsilon = 1e-9);
            let c2 = 0.5 + t / (2.0 * (2.0 + t * t).sqrt());
            assert_relative_eq!(student_t_cdf(t, 2.0), c2, epsilon = 1e-9);
        }
    }

    /// Independent quadrature oracle: integrates the t density with adaptive
    /// Simpson's rule; the normalization constant comes from the parity
    /// recursion c(ν+2) = c(ν)·((ν+1)/ν)·√(ν/(ν+2)), not from Γ.
    fn t_cdf_oracle(t: f64, df: u32) -> f64 {
        fn density_const(df: u32) -> f64 {
            let mut nu = if df % 2 == 1 { 1 } else { 2 };
            let mut c = if df % 2 == 1 {
                1.0 / core::f64::consts::PI
            } else {
                1.0 / (2.0 * 2.0f64.sqrt())
            };
            while nu < df {
                let v = nu as f64;
                c *= (v + 1.0) / v * (v / (v + 2.0)).sqrt();
                nu += 2;
            }
            c
        }
        fn density(x: f64, df: u32, c: f64) -> f64 {
            let v = df as f64;
            c * (1.0 + x * x / v).powf(-(v + 1.0) / 2.0)
        }
        #[allow(clippy::too_many_arguments)]
        fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64, df: u32, c: f64, eps: f64) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = density(lm, df, c);
            let frm = density(rm, df, c);
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (left + right - whole).abs() < 15.0 * eps {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson(a, m, fa, flm, fm, df, c, eps / 2.0)
                    + simpson(m, b, fm, frm, fb, df, c, eps / 2.0)
            }
        }
        let c = density_const(df);
        let (a, b) = (0.0, t.abs());
        let integral = if b == 0.0 {
            0.0
        } else {
            simpson(
                a,
                b,
                density(a, df, c),
                density(0.5 * (a + b), df, c),
                density(b, df, c),
                df,
                c,
                1e-13,
            )
        };
        if t >= 0.0 {
            0.5 + integral
        } else {
            0.5 - integral
        }
    }

    #[test]
    fn t_cdf_matches_quadrature_oracle_at_reference_points() {
        let ts = [0.5, 1.5, 2.5, 4.0];
        let dfs = [1u32, 2, 5, 10, 30];
        let mut checked = 0;
        for &t in &ts {
            for &df in &dfs {
                let got = student_t_cdf(t, df as f64);
                let want = t_cdf_oracle(t, df);
                assert!(
                    (got - want).abs() < 1e-8,
                    "t = {t}, df = {df}: {got} vs {want}"
                );
                checked += 1;
            }
        }
        assert_eq!(checked, 20);
    }

    #[test]
    fn t_quantile_inverts_cdf() {
        for df in [1.0, 5.0, 29.0] {
            for p in [0.6, 0.9, 0.975, 0.999] {
                let q = student_t_quantile(p, df);
                assert!((student_t_cdf(q, df) - p).abs() < 1e-9);
            }
        }
        assert_relative_eq!(student_t_quantile(0.975, 1.0), 12.706, epsilon = 1e-3);
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert_relative_eq!(normal_cdf(0.0), 0.5, epsilon = 1e-12);
        assert!((normal_cdf(Z_95) - 0.975).abs() < 1e-7);
        assert!((normal_cdf(-1.0) - 0.158_655_253_9).abs() < 1e-8);
        assert!((normal_quantile(0.975) - 1.959_963_985).abs() < 1e-6);
    }

    #[test]
    fn pearson_perfect_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert_relative_eq!(pearson_r(&x, &y).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pearson_affine_invariance() {
        let x = [0.3, 1.7, 2.2, 4.8, 5.1, 6.0];
        let y = [1.0, 0.4, 2.9, 3.2, 2.8, 5.5];
        let base = pearson_r(&x, &y).unwrap();
        for (a, b) in [(2.5, 1.0), (-3.0, 0.2), (0.001, -9.0)] {
            let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let got = pearson_r(&xs, &y).unwrap();
            assert_relative_eq!(got, base * a.signum(), epsilon = 1e-12);
        }
    }

    #[test]
    fn pearson_rejects_constant_input() {
        assert!(pearson_r(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn r_squared_reference_values() {
        let y = [1.0, 2.0, 4.0, 8.0];
        assert_relative_eq!(r_squared(&y, &y).unwrap(), 1.0, epsilon = 1e-12);
        let mean_pred = [3.75; 4];
        assert!((r_squared(&y, &mean_pred).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn two_proportion_test_behaves() {
        let (_, p_same) = two_proportion_z_test(500, 1000, 500, 1000).unwrap();
        assert!(p_same > 0.99);
        let (_, p_diff) = two_proportion_z_test(500, 1000, 650, 1000).unwrap();
        assert!(p_diff < 1e-9);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.25).collect();
        let y: Vec<f64> = x.iter().map(|v| -1.5 * v + 0.75).collect();
        let (slope, intercept) = linear_fit(&x, &y).unwrap();
        assert_relative_eq!(slope, -1.5, epsilon = 1e-12);
        assert_relative_eq!(intercept, 0.75, epsilon = 1e-12);
    }
}
