//! Exact small-sample tests: hypergeometric tail, Fisher's exact test, and
//! multiple-testing adjustment.
//!
//! Binomial coefficients are evaluated in log space through `lgamma` and only
//! exponentiated term by term, so nothing overflows for corpus-sized counts.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::Error;

/// Relative slack when comparing point probabilities in the two-sided test.
pub const FISHER_RELATIVE_TOLERANCE: f64 = 1e-7;

pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)`; callers guarantee `k <= n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    if k == 0 || k == n {
        return 0.0;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `P(X >= hits)` for `X ~ Hypergeometric(population, successes, draws)`:
/// the chance that `draws` items taken without replacement from `population`
/// items, `successes` of them marked, include at least `hits` marked ones.
pub fn hypergeometric_upper_tail(hits: u64, successes: u64, draws: u64, population: u64) -> Result<f64, Error> {
    if hits > draws || draws > population || successes > population {
        return Err(Error::Domain(format!(
            "hypergeometric tail needs k <= n <= N and K <= N (k={hits}, K={successes}, n={draws}, N={population})"
        )));
    }
    let lowest = (draws + successes).saturating_sub(population);
    let highest = draws.min(successes);
    if hits <= lowest {
        return Ok(1.0);
    }
    if hits > highest {
        return Ok(0.0);
    }
    let ln_total = ln_choose(population, draws);
    let tail: f64 = (hits..=highest)
        .map(|i| libm::exp(ln_choose(successes, i) + ln_choose(population - successes, draws - i) - ln_total))
        .sum();
    Ok(tail.clamp(0.0, 1.0))
}

/// Two-sided Fisher exact test on the table `[[a, b], [c, d]]`.
///
/// Sums the probabilities of every table with the same margins that is no more
/// likely than the observed one (within a relative slack of
/// [`FISHER_RELATIVE_TOLERANCE`]). The result is bit-for-bit invariant under
/// swapping rows, swapping columns, and transposing.
pub fn fisher_two_sided(a: u64, b: u64, c: u64, d: u64) -> f64 {
    let [a, b, c, d] = canonical_table([a, b, c, d]);
    let row1 = a + b;
    let row2 = c + d;
    let col1 = a + c;
    let total = row1 + row2;

    let ln_total = ln_choose(total, col1);
    let ln_point = |x: u64| ln_choose(row1, x) + ln_choose(row2, col1 - x) - ln_total;
    let cutoff = ln_point(a) + libm::log1p(FISHER_RELATIVE_TOLERANCE);

    let lowest = col1.saturating_sub(row2);
    let highest = row1.min(col1);
    let p: f64 = (lowest..=highest)
        .map(ln_point)
        .filter(|&lp| lp <= cutoff)
        .map(libm::exp)
        .sum();
    p.clamp(0.0, 1.0)
}

/// Smallest of the eight tables reachable by row swap, column swap and
/// transposition; all of them share the same two-sided p-value.
fn canonical_table([a, b, c, d]: [u64; 4]) -> [u64; 4] {
    [
        [a, b, c, d],
        [c, d, a, b],
        [b, a, d, c],
        [d, c, b, a],
        [a, c, b, d],
        [b, d, a, c],
        [c, a, d, b],
        [d, b, c, a],
    ]
    .into_iter()
    .min()
    .unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Correction {
    #[default]
    BenjaminiHochberg,
    Bonferroni,
}

impl Correction {
    pub fn adjust(self, pvalues: &[f64]) -> Result<Vec<f64>, Error> {
        match self {
            Correction::BenjaminiHochberg => bh_adjust(pvalues),
            Correction::Bonferroni => bonferroni_adjust(pvalues),
        }
    }
}

fn check_probabilities(pvalues: &[f64]) -> Result<(), Error> {
    match pvalues.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        Some(bad) => Err(Error::Domain(format!("p-value {bad} is outside [0, 1]"))),
        None => Ok(()),
    }
}

/// Benjamini-Hochberg step-up adjustment, returned in input order:
/// `q_(i) = min_{j >= i} p_(j) * (m / j)`, capped at 1.
pub fn bh_adjust(pvalues: &[f64]) -> Result<Vec<f64>, Error> {
    check_probabilities(pvalues)?;
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| pvalues[i].total_cmp(&pvalues[j]));

    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (rank0, &i) in order.iter().enumerate().rev() {
        let scaled = pvalues[i] * (m as f64 / (rank0 + 1) as f64);
        running = running.min(scaled);
        adjusted[i] = running;
    }
    Ok(adjusted)
}

pub fn bonferroni_adjust(pvalues: &[f64]) -> Result<Vec<f64>, Error> {
    check_probabilities(pvalues)?;
    let m = pvalues.len() as f64;
    Ok(pvalues.iter().map(|p| (p * m).min(1.0)).collect())
}
