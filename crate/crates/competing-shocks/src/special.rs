//! Special functions backing the failure-law series: the modified Bessel
//! function of the first kind, its two-index relative `M_{n,k}`, and the
//! partial and tail exponential sums `E_k`, `Ebar_k`.
//!
//! Every series here has nonnegative terms whose ratios decay factorially,
//! so all of them are summed forward in ascending order with a running
//! next-term / partial-sum termination test. Factorials only ever enter
//! through the term recurrences; no factorial of a large argument is formed.

use crate::{Error, Real, Result};

/// Truncation control for the infinite series in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBudget<S> {
    /// Summation stops once the latest term drops below `rel_tol` times the
    /// partial sum. Must be positive.
    pub rel_tol: S,
    /// Hard cap on the number of summed terms. Must be at least 1.
    pub max_terms: u32,
}

impl<S: Real> SeriesBudget<S> {
    pub fn new(rel_tol: S, max_terms: u32) -> Result<Self> {
        if !(rel_tol > S::zero()) || !rel_tol.is_finite() {
            return Err(Error::invalid("rel_tol", "must be a positive finite real"));
        }
        if max_terms == 0 {
            return Err(Error::invalid("max_terms", "must be at least 1"));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl<S: Real> Default for SeriesBudget<S> {
    fn default() -> Self {
        Self {
            rel_tol: S::of_f64(1e-14),
            max_terms: 10_000,
        }
    }
}

fn check_nonneg<S: Real>(x: S, context: &'static str) -> Result<()> {
    if x < S::zero() || x.is_nan() {
        return Err(Error::domain(context, format!("argument {x} must be >= 0")));
    }
    Ok(())
}

/// Modified Bessel function of the first kind,
/// `I_n(x) = sum_r (x/2)^{2r+n} / (r! (r+n)!)`, for `n >= 0`, `x >= 0`.
pub fn bessel_i<S: Real>(n: u32, x: S, budget: &SeriesBudget<S>) -> Result<S> {
    check_nonneg(x, "bessel_i")?;
    let half = x / S::of_f64(2.0);
    let mut term = S::one();
    for j in 1..=n {
        term = term * half / S::of_u64(u64::from(j));
    }
    if term == S::zero() {
        // x = 0 with n >= 1: every term carries a power of x.
        return Ok(S::zero());
    }
    let q = half * half;
    let mut sum = term;
    for r in 0..u64::from(budget.max_terms) {
        term = term * q / (S::of_u64(r + 1) * S::of_u64(r + 1 + u64::from(n)));
        sum += term;
        if term <= budget.rel_tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::non_convergence(
        "bessel_i",
        sum.lossy_f64(),
        u64::from(budget.max_terms),
    ))
}

/// Two-index modified Bessel function
/// `M_{n,k}(x) = sum_r x^{3r+n+k} / (r! (r+n)! (r+k)!)`, for `n, k >= 0`,
/// `x >= 0`.
pub fn two_index_bessel_m<S: Real>(n: u32, k: u32, x: S, budget: &SeriesBudget<S>) -> Result<S> {
    check_nonneg(x, "two_index_bessel_m")?;
    let mut term = S::one();
    for j in 1..=n {
        term = term * x / S::of_u64(u64::from(j));
    }
    for j in 1..=k {
        term = term * x / S::of_u64(u64::from(j));
    }
    if term == S::zero() {
        return Ok(S::zero());
    }
    let cube = x * x * x;
    let mut sum = term;
    for r in 0..u64::from(budget.max_terms) {
        term = term * cube
            / (S::of_u64(r + 1)
                * S::of_u64(r + 1 + u64::from(n))
                * S::of_u64(r + 1 + u64::from(k)));
        sum += term;
        if term <= budget.rel_tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::non_convergence(
        "two_index_bessel_m",
        sum.lossy_f64(),
        u64::from(budget.max_terms),
    ))
}

/// Partial exponential sum `E_k(x) = sum_{j=0}^{k-1} x^j / j!`, with
/// `E_0(x) = 0`. Exact finite sum; defined for every real `x`.
pub fn partial_exp_sum<S: Real>(k: u64, x: S) -> S {
    if k == 0 {
        return S::zero();
    }
    let mut sum = S::one();
    let mut term = S::one();
    for j in 1..k {
        term = term * x / S::of_u64(j);
        sum += term;
        // Once past |x| the terms shrink monotonically; stop when they no
        // longer move the sum.
        if term.abs() <= S::epsilon() * sum.abs() && S::of_u64(j) > x.abs() {
            break;
        }
    }
    sum
}

/// Fraction of `e^x` below which the difference `e^x - E_k(x)` is considered
/// cancellation-dominated and the tail is summed directly instead.
const TAIL_CANCELLATION_GUARD: f64 = 1e-4;

/// Tail exponential sum `Ebar_k(x) = sum_{j>=k} x^j / j!`, for `x >= 0`,
/// with `Ebar_0(x) = e^x`.
///
/// Computed as `e^x - E_k(x)` while that difference carries enough of `e^x`
/// to be well conditioned, and by direct tail summation once `k` runs far
/// past `x` and the difference would cancel.
pub fn tail_exp_sum<S: Real>(k: u64, x: S) -> S {
    debug_assert!(x >= S::zero(), "tail_exp_sum requires x >= 0");
    let ex = x.exp();
    if k == 0 {
        return ex;
    }
    let diff = ex - partial_exp_sum(k, x);
    if diff >= S::of_f64(TAIL_CANCELLATION_GUARD) * ex {
        return diff;
    }
    // Leading term x^k / k!.
    let mut term = S::one();
    for j in 1..=k {
        term = term * x / S::of_u64(j);
        if term == S::zero() {
            return S::zero();
        }
    }
    let mut sum = term;
    let mut j = k + 1;
    while term > S::epsilon() * sum {
        term = term * x / S::of_u64(j);
        sum += term;
        j += 1;
    }
    sum
}

/// Descending factorial `(m)_s = m (m-1) ... (m-s+1)`, with `(m)_0 = 1` and
/// value 0 whenever `s > m` (the product crosses zero).
///
/// Panics if the product overflows `u64`.
pub fn descending_factorial(m: u64, s: u64) -> u64 {
    if s > m {
        return 0;
    }
    let mut acc: u128 = 1;
    for j in 0..s {
        acc = acc
            .checked_mul(u128::from(m - j))
            .expect("descending factorial overflows");
    }
    u64::try_from(acc).expect("descending factorial exceeds u64")
}

/// `(m)_s` in the scalar type, for moment formulas where the integer value
/// would overflow.
pub(crate) fn descending_factorial_real<S: Real>(m: u64, s: u32) -> S {
    let s = u64::from(s);
    if s > m {
        return S::zero();
    }
    let mut acc = S::one();
    for j in 0..s {
        acc = acc * S::of_u64(m - j);
    }
    acc
}

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS: [f64; 9] = [
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

/// Natural log of the gamma function for `x >= 0.5` (Lanczos approximation,
/// relative error around 1e-13 in `f64`).
pub fn ln_gamma<S: Real>(x: S) -> S {
    debug_assert!(x >= S::of_f64(0.5), "ln_gamma is implemented for x >= 0.5");
    let g = S::of_f64(7.0);
    let half = S::of_f64(0.5);
    let z = x - S::one();
    let mut a = S::of_f64(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += S::of_f64(c) / (z + S::of_u64(i as u64));
    }
    let t = z + g + half;
    half * (S::of_f64(2.0) * S::PI()).ln() + (z + half) * t.ln() - t + a.ln()
}

/// Poisson pmf `e^{-mu} mu^x / x!` evaluated in log space.
pub(crate) fn poisson_pmf<S: Real>(x: u64, mu: S) -> S {
    if mu == S::zero() {
        return if x == 0 { S::one() } else { S::zero() };
    }
    let xs = S::of_u64(x);
    (xs * mu.ln() - mu - ln_gamma(xs + S::one())).exp()
}

/// Standard normal CDF via the Abramowitz-Stegun 26.2.17 rational
/// approximation; absolute error below 7.5e-8.
pub fn normal_cdf<S: Real>(z: S) -> S {
    if z.is_nan() {
        return z;
    }
    let za = z.abs();
    let t = S::one() / (S::one() + S::of_f64(0.231_641_9) * za);
    let poly = t
        * (S::of_f64(0.319_381_530)
            + t * (S::of_f64(-0.356_563_782)
                + t * (S::of_f64(1.781_477_937)
                    + t * (S::of_f64(-1.821_255_978) + t * S::of_f64(1.330_274_429)))));
    let pdf = (-(za * za) / S::of_f64(2.0)).exp() / (S::of_f64(2.0) * S::PI()).sqrt();
    let tail = pdf * poly;
    if z >= S::zero() {
        S::one() - tail
    } else {
        tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> SeriesBudget<f64> {
        SeriesBudget::default()
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    // Independent oracle: sums I_n(x) directly from its definition without
    // the term recurrence used by the implementation.
    fn bessel_series_oracle(n: u32, x: f64, terms: u32) -> f64 {
        let mut sum = 0.0;
        for r in 0..terms {
            let mut t = 1.0;
            for j in 1..=(2 * r + n) {
                t *= (x / 2.0) / f64::from(j);
            }
            // t now holds (x/2)^{2r+n} / (2r+n)!; rescale to 1/(r!(r+n)!).
            let mut scale = 1.0;
            for j in 1..=r {
                scale *= f64::from(2 * r + n - j + 1) / f64::from(j);
            }
            // scale = C(2r+n, r); t * scale = (x/2)^{2r+n} / (r!(r+n)!)
            sum += t * scale;
        }
        sum
    }

    #[test]
    fn bessel_examples() {
        let b = budget();
        assert_eq!(bessel_i(0, 0.0, &b).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0, &b).unwrap(), 0.0);
        let oracle = bessel_series_oracle(1, 2.0, 40);
        assert!(rel_close(bessel_i(1, 2.0, &b).unwrap(), oracle, 1e-14));
        assert!(rel_close(bessel_i(1, 2.0, &b).unwrap(), 1.5906368546, 1e-9));
    }

    #[test]
    fn bessel_matches_direct_series_on_grid() {
        let b = budget();
        for n in [0u32, 1, 2, 5, 9] {
            for x in [0.1f64, 0.7, 2.0, 6.5, 13.0] {
                let got = bessel_i(n, x, &b).unwrap();
                let want = bessel_series_oracle(n, x, 80);
                assert!(rel_close(got, want, 1e-12), "I_{n}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn bessel_monotone_in_x() {
        let b = budget();
        for n in [0u32, 1, 3, 7] {
            let mut prev = bessel_i(n, 0.0, &b).unwrap();
            for i in 1..=40 {
                let x = 0.5 * f64::from(i);
                let cur = bessel_i(n, x, &b).unwrap();
                assert!(cur >= prev, "I_{n} not nondecreasing at x={x}");
                prev = cur;
            }
        }
    }

    #[test]
    fn bessel_budget_exhaustion_carries_partial() {
        let tight = SeriesBudget::new(1e-30, 2).unwrap();
        match bessel_i(0, 5.0, &tight) {
            Err(Error::NonConvergence { partial, .. }) => assert!(partial > 1.0),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn two_index_bessel_examples() {
        let b = budget();
        assert_eq!(two_index_bessel_m(0, 0, 0.0, &b).unwrap(), 1.0);
        assert_eq!(two_index_bessel_m(1, 0, 0.0, &b).unwrap(), 0.0);
        // Hand oracle: sum_{r=0..6} 1 / (r! r! (r+1)!).
        let mut oracle = 0.0;
        for r in 0u32..=6 {
            let fact = |m: u32| (1..=m).map(f64::from).product::<f64>();
            oracle += 1.0 / (fact(r) * fact(r) * fact(r + 1));
        }
        assert!(rel_close(
            two_index_bessel_m(0, 1, 1.0, &b).unwrap(),
            oracle,
            1e-12
        ));
        assert!(rel_close(
            two_index_bessel_m(0, 1, 1.0, &b).unwrap(),
            1.5428386,
            1e-7
        ));
    }

    #[test]
    fn partial_exp_sum_examples() {
        assert_eq!(partial_exp_sum::<f64>(0, 5.0), 0.0);
        assert_eq!(partial_exp_sum::<f64>(1, 7.3), 1.0);
        assert_eq!(partial_exp_sum::<f64>(3, 1.0), 2.5);
    }

    #[test]
    fn tail_exp_sum_examples() {
        assert!(rel_close(tail_exp_sum::<f64>(0, 1.0), 1f64.exp(), 1e-15));
        assert_eq!(tail_exp_sum::<f64>(2, 0.0), 0.0);
        assert!(rel_close(tail_exp_sum::<f64>(1, 1.0), 1f64.exp() - 1.0, 1e-14));
    }

    #[test]
    fn exp_sum_identity_grid() {
        // E_k(x) + Ebar_k(x) = e^x, relative to e^x.
        for k in 0..=50u64 {
            for i in 0..=40 {
                let x = 0.5 * f64::from(i);
                let lhs = partial_exp_sum(k, x) + tail_exp_sum(k, x);
                let rhs = x.exp();
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * rhs,
                    "identity fails at k={k}, x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn tail_exp_sum_cancellation_regime() {
        // k far past x: the difference route would return garbage or zero.
        let v = tail_exp_sum::<f64>(40, 2.0);
        // Oracle: leading term * (1 + x/(k+1) + ...) bounded crudely.
        let mut lead = 1.0;
        for j in 1..=40u64 {
            lead *= 2.0 / j as f64;
        }
        assert!(v >= lead && v <= lead * 1.2, "v={v}, lead={lead}");
    }

    #[test]
    fn tail_exp_sum_monotone_in_x() {
        for k in [0u64, 1, 3, 10, 25] {
            let mut prev = tail_exp_sum(k, 0.0);
            for i in 1..=40 {
                let x = 0.5 * f64::from(i);
                let cur = tail_exp_sum(k, x);
                assert!(cur >= prev, "Ebar_{k} not nondecreasing at x={x}");
                prev = cur;
            }
        }
    }

    #[test]
    fn descending_factorial_examples() {
        assert_eq!(descending_factorial(5, 0), 1);
        assert_eq!(descending_factorial(5, 2), 20);
        assert_eq!(descending_factorial(3, 4), 0);
        assert_eq!(descending_factorial_real::<f64>(5, 2), 20.0);
        assert_eq!(descending_factorial_real::<f64>(3, 4), 0.0);
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..=25u64 {
            fact *= n as f64;
            let got = ln_gamma((n + 1) as f64);
            assert!(
                (got - fact.ln()).abs() <= 1e-12 * fact.ln().abs().max(1.0),
                "ln_gamma({}) = {got}, want {}",
                n + 1,
                fact.ln()
            );
        }
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((normal_cdf(0.0f64) - 0.5).abs() < 1e-9);
        assert!((normal_cdf(1.0f64) - 0.841344746).abs() < 2e-7);
        assert!((normal_cdf(-1.0f64) - 0.158655254).abs() < 2e-7);
        assert!((normal_cdf(3.0f64) - 0.998650102).abs() < 2e-7);
        assert!(normal_cdf(8.0f64) > 0.9999999);
        assert!(normal_cdf(-8.0f64) < 1e-7);
    }

    #[test]
    fn works_in_f32() {
        let b = SeriesBudget::<f32>::new(1e-6, 1000).unwrap();
        let v = bessel_i(1, 2.0f32, &b).unwrap();
        assert!((v - 1.590_636_9).abs() < 1e-4);
        assert_eq!(partial_exp_sum::<f32>(3, 1.0), 2.5);
    }

    // Extension of M_{n,k} to integer indices through the vanishing-factorial
    // convention; negative indices shift onto nonnegative ones. Used by the
    // generating-identity check.
    fn m_ext(n: i64, m: i64, x: f64, b: &SeriesBudget<f64>) -> f64 {
        let shift = (-n).max(-m).max(0);
        let mut offs = [shift, n + shift, m + shift];
        offs.sort_unstable();
        assert_eq!(offs[0], 0);
        two_index_bessel_m(offs[1] as u32, offs[2] as u32, x, b).unwrap()
    }

    #[test]
    fn generating_identity() {
        // sum over all integer pairs (n, m) of alpha^n beta^m M_{n,m}(x)
        // equals exp(x (alpha + beta + 1/(alpha beta))).
        let b = budget();
        for &x in &[0.5f64, 1.0, 2.0] {
            for &alpha in &[0.5f64, 1.0] {
                for &beta in &[0.5f64, 1.0] {
                    let window = 40i64;
                    let mut sum = 0.0;
                    for n in -window..=window {
                        for m in -window..=window {
                            sum += alpha.powi(n as i32) * beta.powi(m as i32) * m_ext(n, m, x, &b);
                        }
                    }
                    let want = (x * (alpha + beta + 1.0 / (alpha * beta))).exp();
                    assert!(
                        rel_close(sum, want, 1e-10),
                        "identity at x={x}, a={alpha}, b={beta}: {sum} vs {want}"
                    );
                }
            }
        }
    }
}
