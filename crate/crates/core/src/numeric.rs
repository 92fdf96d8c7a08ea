//! Log-domain accumulation helpers.
//!
//! Norm growth in this crate spans hundreds of orders of magnitude, so sums
//! of squares are never materialized: everything is accumulated as
//! log-sum-exp. Summation is Neumaier-compensated so that results do not
//! depend on evaluation order beyond a final rounding.

/// `ln(exp(a) + exp(b))` without intermediate overflow.
///
/// `-inf` acts as the identity element; `NaN` propagates.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let diff = a - b;
    if diff == 0.0 {
        a + std::f64::consts::LN_2
    } else if diff > 0.0 {
        a + (-diff).exp().ln_1p()
    } else if diff < 0.0 {
        b + diff.exp().ln_1p()
    } else {
        // diff is NaN
        diff
    }
}

/// `ln(sum_i exp(terms[i]))` with a compensated inner sum.
///
/// Returns `-inf` for an empty slice (the empty sum).
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let mut max = f64::NEG_INFINITY;
    for &t in terms {
        if t > max {
            max = t;
        }
    }
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    // Neumaier-compensated sum of the shifted exponentials.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &t in terms {
        let term = (t - max).exp();
        let next = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - next) + term;
        } else {
            comp += (term - next) + sum;
        }
        sum = next;
    }
    max + (sum + comp).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn logaddexp_identity_element() {
        assert_eq!(logaddexp(f64::NEG_INFINITY, 2.0), 2.0);
        assert_eq!(logaddexp(2.0, f64::NEG_INFINITY), 2.0);
        assert_eq!(
            logaddexp(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn log_sum_exp_empty_is_neg_inf() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn log_sum_exp_survives_huge_terms() {
        // exp(1000) overflows f64; the log-domain sum must not.
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn logaddexp_matches_direct(x in -20f64..20.0, y in -20f64..20.0) {
            let direct = (x.exp() + y.exp()).ln();
            prop_assert!((logaddexp(x, y) - direct).abs() < 1e-10);
            prop_assert_eq!(logaddexp(x, y), logaddexp(y, x));
        }

        #[test]
        fn log_sum_exp_order_independent(mut xs in proptest::collection::vec(-700f64..700.0, 1..64)) {
            let fwd = log_sum_exp(&xs);
            xs.reverse();
            let rev = log_sum_exp(&xs);
            prop_assert!((fwd - rev).abs() <= 1e-12 * fwd.abs().max(1.0));
        }
    }
}
