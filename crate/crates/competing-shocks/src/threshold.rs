//! The law of the random failure threshold `M`, supported on `{1, 2, ...}`.
//!
//! Four standard families are provided together with a deterministic point
//! mass and user-supplied finite pmf tables:
//!
//! | family             | pmf `p_k`                        |
//! |--------------------|----------------------------------|
//! | geometric          | `p (1-p)^{k-1}`                  |
//! | shifted Poisson    | `eta^{k-1} e^{-eta} / (k-1)!`    |
//! | harmonic           | `1 / (k (k+1))`                  |
//! | second-order NB    | `k p^2 (1-p)^{k-1}`              |
//!
//! The harmonic family has infinite mean; every moment-like quantity built
//! on it reports [`MomentValue::Divergent`] instead of failing.

use crate::special::{
    descending_factorial_real, ln_gamma, poisson_pmf, tail_exp_sum, SeriesBudget,
};
use crate::{powu, Error, MomentValue, Real, Result};

/// Hard cap on truncation-index searches.
pub const TRUNCATION_INDEX_CAP: u64 = 1_000_000_000;

/// A user-supplied pmf table over `k >= 1`.
///
/// Entries are kept sorted by `k`; the probabilities must be nonnegative and
/// sum to 1 within [`CustomPmf::NORMALIZATION_TOL`] (relative to the scalar
/// epsilon when that is coarser, so an `f32` table remains constructible).
#[derive(Debug, Clone, PartialEq)]
pub struct CustomPmf<S> {
    entries: Vec<(u64, S)>,
}

impl<S: Real> CustomPmf<S> {
    pub const NORMALIZATION_TOL: f64 = 1e-12;

    pub fn new(mut entries: Vec<(u64, S)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("pmf table", "must not be empty"));
        }
        entries.sort_by_key(|&(k, _)| k);
        for window in entries.windows(2) {
            if window[0].0 == window[1].0 {
                return Err(Error::invalid(
                    "pmf table",
                    format!("duplicate support point k={}", window[0].0),
                ));
            }
        }
        if entries[0].0 < 1 {
            return Err(Error::invalid("pmf table", "support must start at k >= 1"));
        }
        let mut sum = S::zero();
        for &(k, p) in &entries {
            if !(p >= S::zero()) || !p.is_finite() {
                return Err(Error::invalid(
                    "pmf table",
                    format!("p_{k} = {p} is not a nonnegative finite real"),
                ));
            }
            sum += p;
        }
        let tol = S::of_f64(Self::NORMALIZATION_TOL).max(S::epsilon() * S::of_f64(64.0));
        if (sum - S::one()).abs() > tol {
            return Err(Error::invalid(
                "pmf table",
                format!("probabilities sum to {sum}, not 1"),
            ));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(u64, S)] {
        &self.entries
    }

    pub fn max_k(&self) -> u64 {
        self.entries.last().map(|&(k, _)| k).unwrap_or(0)
    }

    fn pmf(&self, k: u64) -> S {
        match self.entries.binary_search_by_key(&k, |&(kk, _)| kk) {
            Ok(i) => self.entries[i].1,
            Err(_) => S::zero(),
        }
    }

    /// `P(M > k)` as a right-to-left suffix sum, so that
    /// `survival(k-1) - survival(k)` reproduces `pmf(k)` exactly.
    fn survival(&self, k: u64) -> S {
        let mut acc = S::zero();
        for &(kk, p) in self.entries.iter().rev() {
            if kk > k {
                acc += p;
            } else {
                break;
            }
        }
        acc
    }
}

/// Law of the random threshold `M`.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdDistribution<S> {
    Geometric { p: S },
    ShiftedPoisson { eta: S },
    Harmonic,
    NegBinomial2 { p: S },
    Deterministic { k0: u64 },
    Custom(CustomPmf<S>),
}

impl<S: Real> ThresholdDistribution<S> {
    pub fn geometric(p: S) -> Result<Self> {
        if !(p > S::zero() && p <= S::one()) {
            return Err(Error::invalid("p", "must lie in (0, 1]"));
        }
        Ok(Self::Geometric { p })
    }

    pub fn shifted_poisson(eta: S) -> Result<Self> {
        if !(eta > S::zero()) || !eta.is_finite() {
            return Err(Error::invalid("eta", "must be a positive finite real"));
        }
        Ok(Self::ShiftedPoisson { eta })
    }

    pub fn harmonic() -> Self {
        Self::Harmonic
    }

    pub fn neg_binomial2(p: S) -> Result<Self> {
        if !(p > S::zero() && p <= S::one()) {
            return Err(Error::invalid("p", "must lie in (0, 1]"));
        }
        Ok(Self::NegBinomial2 { p })
    }

    pub fn deterministic(k0: u64) -> Result<Self> {
        if k0 < 1 {
            return Err(Error::invalid("k0", "must be at least 1"));
        }
        Ok(Self::Deterministic { k0 })
    }

    pub fn custom(entries: Vec<(u64, S)>) -> Result<Self> {
        Ok(Self::Custom(CustomPmf::new(entries)?))
    }

    /// `p_k = P(M = k)` for `k >= 1`.
    pub fn pmf(&self, k: u64) -> Result<S> {
        if k < 1 {
            return Err(Error::domain("pmf", "the threshold is supported on k >= 1"));
        }
        Ok(match self {
            Self::Geometric { p } => *p * powu(S::one() - *p, k - 1),
            Self::ShiftedPoisson { eta } => poisson_pmf(k - 1, *eta),
            Self::Harmonic => {
                let kk = S::of_u64(k);
                (kk * (kk + S::one())).recip()
            }
            Self::NegBinomial2 { p } => S::of_u64(k) * *p * *p * powu(S::one() - *p, k - 1),
            Self::Deterministic { k0 } => {
                if k == *k0 {
                    S::one()
                } else {
                    S::zero()
                }
            }
            Self::Custom(table) => table.pmf(k),
        })
    }

    /// `Pbar_k = P(M > k)` for `k >= 0`, with `Pbar_0 = 1`. Closed forms are
    /// used where available.
    pub fn survival(&self, k: u64) -> S {
        match self {
            Self::Geometric { p } => powu(S::one() - *p, k),
            // M - 1 is Poisson(eta), so P(M > k) = P(Poisson(eta) >= k).
            Self::ShiftedPoisson { eta } => (-*eta).exp() * tail_exp_sum(k, *eta),
            Self::Harmonic => S::of_u64(k + 1).recip(),
            Self::NegBinomial2 { p } => {
                powu(S::one() - *p, k) * (S::one() + S::of_u64(k) * *p)
            }
            Self::Deterministic { k0 } => {
                if k < *k0 {
                    S::one()
                } else {
                    S::zero()
                }
            }
            Self::Custom(table) => table.survival(k),
        }
    }

    /// Largest support point, when the support is finite.
    pub fn support_max(&self) -> Option<u64> {
        match self {
            Self::Deterministic { k0 } => Some(*k0),
            Self::Custom(table) => Some(table.max_k()),
            _ => None,
        }
    }

    /// Factorial moment `E[(M+s-1)_s]` for `s >= 1`.
    ///
    /// The harmonic family is divergent for every `s`; the geometric family
    /// uses the closed form `s! / p^s`; the remaining infinite families are
    /// summed under the budget.
    pub fn factorial_moment(&self, s: u32, budget: &SeriesBudget<S>) -> Result<MomentValue<S>> {
        if s < 1 {
            return Err(Error::domain("factorial_moment", "requires s >= 1"));
        }
        match self {
            Self::Harmonic => Ok(MomentValue::Divergent),
            Self::Geometric { p } => {
                let mut v = S::one();
                for j in 1..=u64::from(s) {
                    v = v * S::of_u64(j);
                }
                Ok(MomentValue::Finite(v / powu(*p, u64::from(s))))
            }
            Self::Deterministic { k0 } => Ok(MomentValue::Finite(descending_factorial_real(
                k0 + u64::from(s) - 1,
                s,
            ))),
            Self::Custom(table) => {
                let mut acc = S::zero();
                for &(k, p) in table.entries() {
                    acc += p * descending_factorial_real(k + u64::from(s) - 1, s);
                }
                Ok(MomentValue::Finite(acc))
            }
            Self::ShiftedPoisson { .. } | Self::NegBinomial2 { .. } => {
                let mut sum = S::zero();
                let mut prev = S::infinity();
                for k in 1..=u64::from(budget.max_terms) {
                    let term = self.pmf(k)? * descending_factorial_real(k + u64::from(s) - 1, s);
                    sum += term;
                    if term <= budget.rel_tol * sum && term < prev {
                        return Ok(MomentValue::Finite(sum));
                    }
                    prev = term;
                }
                Err(Error::non_convergence(
                    "factorial_moment",
                    sum.lossy_f64(),
                    u64::from(budget.max_terms),
                ))
            }
        }
    }

    /// Smallest `K` with `P(M > K) < eps`. Errors out above
    /// [`TRUNCATION_INDEX_CAP`].
    pub fn truncation_index(&self, eps: S) -> Result<u64> {
        if !(eps > S::zero() && eps < S::one()) {
            return Err(Error::domain("truncation_index", "eps must lie in (0, 1)"));
        }
        // The survival function is nonincreasing, so an exponential search
        // followed by bisection works uniformly across families.
        if self.survival(0) < eps {
            return Ok(0);
        }
        let mut hi = 1u64;
        while self.survival(hi) >= eps {
            if hi >= TRUNCATION_INDEX_CAP {
                return Err(Error::TruncationCapExceeded {
                    cap: TRUNCATION_INDEX_CAP,
                    eps: eps.lossy_f64(),
                });
            }
            hi = (hi * 2).min(TRUNCATION_INDEX_CAP);
        }
        let mut lo = hi / 2; // survival(lo) >= eps
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.survival(mid) < eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Short family label for reports.
    pub fn label(&self) -> String {
        match self {
            Self::Geometric { p } => format!("geometric(p={p})"),
            Self::ShiftedPoisson { eta } => format!("poisson1(eta={eta})"),
            Self::Harmonic => "harmonic".to_string(),
            Self::NegBinomial2 { p } => format!("negbinom2(p={p})"),
            Self::Deterministic { k0 } => format!("det(k={k0})"),
            Self::Custom(t) => format!("pmf({} points)", t.entries().len()),
        }
    }
}

/// Multinomial-free log weight used by callers that need `ln Gamma` around
/// integer support points.
pub(crate) fn ln_factorial<S: Real>(n: u64) -> S {
    ln_gamma(S::of_u64(n) + S::one())
}
