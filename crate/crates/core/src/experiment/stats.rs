/// Arithmetic mean; `NaN` for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation with the `n - 1` denominator; zero for fewer
/// than two values.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// One-sided exact sign test: `P(X >= wins)` for `X ~ Binomial(wins + losses, 1/2)`.
/// Ties are dropped before calling.
pub fn sign_test_p(wins: usize, losses: usize) -> f64 {
    let n = wins + losses;
    if n == 0 {
        return 1.0;
    }
    // log C(n, k) accumulated from ln k! terms.
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    (wins..=n)
        .map(|k| (ln_fact[n] - ln_fact[k] - ln_fact[n - k] - n as f64 * 2f64.ln()).exp())
        .sum::<f64>()
        .min(1.0)
}
