//! Pearson chi-square helpers for the sampling acceptance tests.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use sup_core::reduction::Distribution;
use sup_core::syntax::{canonicalize, Term};

/// Pearson statistic of observed counts against an expected distribution
/// (total mass 1). Observed outcomes outside the expected support yield
/// infinity.
pub fn chi_square(observed: &[(Term, u64)], expected: &Distribution) -> f64 {
    let n: u64 = observed.iter().map(|(_, c)| c).sum();
    let observed: Vec<(Term, u64)> =
        observed.iter().map(|(t, c)| (canonicalize(t), *c)).collect();
    for (t, count) in &observed {
        if *count > 0 && expected.probability(t) == 0.0 {
            return f64::INFINITY;
        }
    }
    let mut stat = 0.0;
    for (t, p) in expected.iter() {
        if p == 0.0 {
            continue;
        }
        let e = n as f64 * p;
        let o = observed
            .iter()
            .find(|(obs, _)| obs == t)
            .map(|(_, c)| *c as f64)
            .unwrap_or(0.0);
        stat += (o - e) * (o - e) / e;
    }
    stat
}

/// Upper-tail p-value of a chi-square statistic with `dof` degrees of
/// freedom. Zero degrees of freedom means a single possible outcome, where
/// any statistic of zero is certain.
pub fn chi_square_p_value(stat: f64, dof: usize) -> f64 {
    if dof == 0 {
        return if stat == 0.0 { 1.0 } else { 0.0 };
    }
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    1.0 - dist.cdf(stat)
}
