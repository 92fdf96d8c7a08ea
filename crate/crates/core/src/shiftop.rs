//! The bilateral weighted shift, its inverse, adjoint and adjoint-inverse,
//! raised to integer powers and acting exactly on sparse vectors.
//!
//! Every member of the family maps `b_n` to a scaled `b_{n+d}` where the
//! displacement `d` and the log-scale are read off the weight sequence:
//!
//! | member          | displacement | log-scale at `n`              |
//! |-----------------|--------------|-------------------------------|
//! | shift           | `+N`         | `ln u_{n+N} - ln u_n`         |
//! | inverse         | `-N`         | `ln u_{n-N} - ln u_n`         |
//! | adjoint         | `-N`         | `ln u_n - ln u_{n-N}`         |
//! | adjoint-inverse | `+N`         | `ln u_n - ln u_{n+N}`         |
//!
//! Negative powers are folded into the table: the shift at `-N` is the
//! inverse at `N`, the adjoint-inverse at `-N` is the adjoint at `N`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::fockspace::SparseVector;
use crate::numeric::log_sum_exp;
use crate::weights::WeightSequence;

/// One of the four operators generated by a weighted shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyMember {
    Shift,
    Inverse,
    Adjoint,
    AdjointInverse,
}

impl FamilyMember {
    /// `T -> T*`.
    pub fn adjoint(self) -> Self {
        match self {
            Self::Shift => Self::Adjoint,
            Self::Adjoint => Self::Shift,
            Self::Inverse => Self::AdjointInverse,
            Self::AdjointInverse => Self::Inverse,
        }
    }

    /// `T -> T^{-1}`.
    pub fn inverse(self) -> Self {
        match self {
            Self::Shift => Self::Inverse,
            Self::Inverse => Self::Shift,
            Self::Adjoint => Self::AdjointInverse,
            Self::AdjointInverse => Self::Adjoint,
        }
    }

    /// `T -> T^{*-1}`.
    pub fn adjoint_inverse(self) -> Self {
        self.adjoint().inverse()
    }

    /// Sign of the index displacement per unit power.
    fn index_sign(self) -> i64 {
        match self {
            Self::Shift | Self::AdjointInverse => 1,
            Self::Inverse | Self::Adjoint => -1,
        }
    }

    /// Sign applied to the weight log-ratio.
    fn scale_sign(self) -> f64 {
        match self {
            Self::Shift | Self::Inverse => 1.0,
            Self::Adjoint | Self::AdjointInverse => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Shift => "shift",
            Self::Inverse => "inverse",
            Self::Adjoint => "adjoint",
            Self::AdjointInverse => "adjoint-inverse",
        }
    }
}

impl std::fmt::Display for FamilyMember {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Index displacement and signed log-scale of `member^power` at base index `n`.
fn action(seq: &WeightSequence, member: FamilyMember, power: i64, n: i64) -> Result<(i64, f64)> {
    let d = member.index_sign() * power;
    let raw = seq.log_ratio(n, d)?;
    Ok((n + d, member.scale_sign() * raw))
}

/// Applies `member^power` to `v`, producing exact scaled coefficients.
///
/// Fails with [`Error::WeightOverflowInCoefficient`] as soon as one output
/// coefficient leaves the representable double range in either direction;
/// the log-domain pathway ([`log_norm_power`]) has no such restriction.
pub fn apply_power(
    seq: &WeightSequence,
    member: FamilyMember,
    power: i64,
    v: &SparseVector,
) -> Result<SparseVector> {
    let max_ln = f64::MAX.ln();
    let min_ln = f64::MIN_POSITIVE.ln();
    let mut out = SparseVector::zero();
    for (n, c) in v.iter() {
        let (target, log_scale) = action(seq, member, power, n)?;
        let log_mag = c.abs().ln() + log_scale;
        if log_mag > max_ln || (log_mag < min_ln && log_mag != f64::NEG_INFINITY) {
            return Err(Error::WeightOverflowInCoefficient {
                index: target,
                log_magnitude: log_mag,
            });
        }
        out.set_coeff(target, c * log_scale.exp());
    }
    Ok(out)
}

/// `ln || member^power v ||`, accumulated by log-sum-exp over the support.
///
/// Raw scaled coefficients are never materialized, so arbitrarily large
/// growth factors are handled exactly in the log domain.
pub fn log_norm_power(
    seq: &WeightSequence,
    member: FamilyMember,
    power: i64,
    v: &SparseVector,
) -> Result<f64> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut terms = Vec::with_capacity(v.support_len());
    for (n, c) in v.iter() {
        let (_, log_scale) = action(seq, member, power, n)?;
        terms.push(2.0 * (c.abs().ln() + log_scale));
    }
    Ok(0.5 * log_sum_exp(&terms))
}

/// Window-restricted estimate of `ln || member^power ||` together with the
/// base index attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorNormBound {
    /// `sup` over the window of the signed log-ratio.
    pub log_norm: f64,
    /// Smallest base index attaining the sup (deterministic certificates).
    pub achieved_at: i64,
    /// The window of base indices that was scanned.
    pub window: RangeInclusive<i64>,
}

/// `sup_{n in window} ln || member^power b_n ||`.
///
/// This is a lower bound of the true operator norm over the integers; the
/// per-family windows from [`default_window`] are chosen so that the sup is
/// actually attained for the valley and hybrid families.
pub fn operator_log_norm_detail(
    seq: &WeightSequence,
    member: FamilyMember,
    power: i64,
    window: RangeInclusive<i64>,
) -> Result<OperatorNormBound> {
    if power < 1 {
        return Err(Error::InvalidParameter(format!(
            "operator norm estimate requires power >= 1, got {power}"
        )));
    }
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_at = *window.start();
    for n in window.clone() {
        let (_, log_scale) = action(seq, member, power, n)?;
        if log_scale > best {
            best = log_scale;
            best_at = n;
        }
    }
    Ok(OperatorNormBound {
        log_norm: best,
        achieved_at: best_at,
        window,
    })
}

/// As [`operator_log_norm_detail`], returning only the sup.
pub fn operator_log_norm(
    seq: &WeightSequence,
    member: FamilyMember,
    power: i64,
    window: RangeInclusive<i64>,
) -> Result<f64> {
    operator_log_norm_detail(seq, member, power, window).map(|b| b.log_norm)
}

/// Single-coefficient lower bound: `ln |(b_n, v)| + ln || member^power b_n ||`.
///
/// One term of the sum of squares, hence never above [`log_norm_power`] on
/// the same arguments.
pub fn coefficient_lower_bound(
    seq: &WeightSequence,
    member: FamilyMember,
    power: i64,
    v: &SparseVector,
    n: i64,
) -> Result<f64> {
    let c = v.coeff(n);
    if c == 0.0 {
        return Err(Error::IndexNotInSupport(n));
    }
    let (_, log_scale) = action(seq, member, power, n)?;
    Ok(c.abs().ln() + log_scale)
}

/// Window policy for operator-norm style estimates.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowPolicy {
    /// The per-family window documented at [`default_window`].
    FamilyDefault,
    /// An explicit window of base indices.
    Explicit(RangeInclusive<i64>),
}

impl WindowPolicy {
    pub fn resolve(
        &self,
        seq: &WeightSequence,
        member: FamilyMember,
        power: i64,
    ) -> Result<RangeInclusive<i64>> {
        match self {
            Self::Explicit(w) => Ok(w.clone()),
            Self::FamilyDefault => default_window(seq, member, power),
        }
    }
}

/// The window of base indices on which `sup_n ln || member^power b_n ||` is
/// searched when no explicit window is given.
///
/// - geometric valley: the log-ratio is a difference of `|.|` terms whose
///   maximizers localize next to the origin; `[-2N, 0]` (shift, adjoint)
///   resp. `[0, 2N]` (inverse, adjoint-inverse) attain the sup.
/// - hybrid decay/harmonic: the three-way case split of the ratio puts every
///   maximizer inside `[-N, N]`; the sup is attained.
/// - oscillatory: no finite window is known to attain the sup; `[-4N, 4N]`
///   is scanned and the result is only a certified lower bound.
/// - tabulated: all base indices for which both endpoints are in range.
pub fn default_window(
    seq: &WeightSequence,
    member: FamilyMember,
    power: i64,
) -> Result<RangeInclusive<i64>> {
    if power < 1 {
        return Err(Error::InvalidParameter(format!(
            "window policy requires power >= 1, got {power}"
        )));
    }
    let n = power;
    let window = match seq {
        WeightSequence::GeometricValley { .. } => match member {
            FamilyMember::Shift | FamilyMember::Adjoint => -2 * n..=0,
            FamilyMember::Inverse | FamilyMember::AdjointInverse => 0..=2 * n,
        },
        WeightSequence::HybridDecayHarmonic => -n..=n,
        WeightSequence::KreinOscillatory { .. } => -4 * n..=4 * n,
        WeightSequence::Tabulated(t) => {
            let d = member.index_sign() * power;
            let (lo, hi) = (*t.range().start(), *t.range().end());
            let start = lo.max(lo - d);
            let end = hi.min(hi - d);
            if start > end {
                return Err(Error::EmptyWindow);
            }
            start..=end
        }
    };
    Ok(window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::harmonic_test_vector;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn krein1() -> WeightSequence {
        WeightSequence::krein_oscillatory(1.0).unwrap()
    }

    fn valley1() -> WeightSequence {
        WeightSequence::geometric_valley(1.0).unwrap()
    }

    fn hybrid() -> WeightSequence {
        WeightSequence::hybrid_decay_harmonic()
    }

    #[test]
    fn member_algebra_table() {
        use FamilyMember::*;
        assert_eq!(AdjointInverse.adjoint_inverse(), Shift);
        assert_eq!(Shift.adjoint_inverse(), AdjointInverse);
        for m in [Shift, Inverse, Adjoint, AdjointInverse] {
            assert_eq!(m.adjoint().adjoint(), m);
            assert_eq!(m.inverse().inverse(), m);
            assert_eq!(m.adjoint().inverse(), m.inverse().adjoint());
        }
    }

    #[test]
    fn shift_moves_basis_vector_with_weight_ratio() {
        // Valley, c=1: V b_0 = (1/2) b_1.
        let out = apply_power(&valley1(), FamilyMember::Shift, 1, &SparseVector::basis(0)).unwrap();
        assert_eq!(out.support_len(), 1);
        assert_relative_eq!(out.coeff(1), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn zero_power_is_identity() {
        let v = SparseVector::from_entries([(-3, 0.25), (0, 1.0), (7, -2.0)]);
        for member in [
            FamilyMember::Shift,
            FamilyMember::Inverse,
            FamilyMember::Adjoint,
            FamilyMember::AdjointInverse,
        ] {
            let out = apply_power(&krein1(), member, 0, &v).unwrap();
            assert_eq!(out, v);
        }
    }

    #[test]
    fn adjoint_inverse_scales_by_reciprocal_ratio() {
        // Hybrid: W^{*-1} b_0 = (w_0 / w_1) b_1 = 2 b_1.
        let out = apply_power(
            &hybrid(),
            FamilyMember::AdjointInverse,
            1,
            &SparseVector::basis(0),
        )
        .unwrap();
        assert_relative_eq!(out.coeff(1), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn negative_power_equals_inverse_member() {
        let v = SparseVector::from_entries([(2, 1.5), (-4, -0.5)]);
        let a = apply_power(&hybrid(), FamilyMember::Shift, -7, &v).unwrap();
        let b = apply_power(&hybrid(), FamilyMember::Inverse, 7, &v).unwrap();
        assert_eq!(a, b);
        let c = apply_power(&hybrid(), FamilyMember::AdjointInverse, -7, &v).unwrap();
        let d = apply_power(&hybrid(), FamilyMember::Adjoint, 7, &v).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn overflow_is_reported_not_saturated() {
        // ln u_8191 = 8191 ln 3 ~ 9000: the raw coefficient would be inf.
        let err = apply_power(
            &krein1(),
            FamilyMember::Shift,
            8191,
            &SparseVector::basis(0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::WeightOverflowInCoefficient { .. }));
        // The log-domain norm of the same action is finite and exact.
        let ln = log_norm_power(
            &krein1(),
            FamilyMember::Shift,
            8191,
            &SparseVector::basis(0),
        )
        .unwrap();
        assert_relative_eq!(ln, 8191.0 * 3.0f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn underflow_is_reported_too() {
        // ln u_2047 = -2047 ln 3 ~ -2249: the raw coefficient would flush to 0.
        let err = apply_power(
            &krein1(),
            FamilyMember::Shift,
            2047,
            &SparseVector::basis(0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::WeightOverflowInCoefficient { .. }));
    }

    #[test]
    fn log_norm_power_examples() {
        // Valley: || V^2 b_{-1} || = (2c)^{|-1| - |1|} = 1.
        assert_eq!(
            log_norm_power(&valley1(), FamilyMember::Shift, 2, &SparseVector::basis(-1)).unwrap(),
            0.0
        );
        // Unit vector, zero power.
        assert_eq!(
            log_norm_power(&krein1(), FamilyMember::Adjoint, 0, &SparseVector::basis(3)).unwrap(),
            0.0
        );
        // Valley: || V (b_0 + b_1)/sqrt(2) ||^2 = (1/4 + 1/4)/2^0... = 1/4.
        let f = SparseVector::from_entries([(0, 1.0), (1, 1.0)]).scale(1.0 / 2.0f64.sqrt());
        let ln = log_norm_power(&valley1(), FamilyMember::Shift, 1, &f).unwrap();
        assert_relative_eq!(ln, (0.5f64).ln(), max_relative = 1e-12);
    }

    #[test]
    fn log_norm_power_rejects_zero_vector() {
        assert_eq!(
            log_norm_power(&valley1(), FamilyMember::Shift, 1, &SparseVector::zero()).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn operator_log_norm_hybrid_identities() {
        // || W^{*-5} || = 6, attained at n = 0.
        let b =
            operator_log_norm_detail(&hybrid(), FamilyMember::AdjointInverse, 5, -10..=10).unwrap();
        assert_relative_eq!(b.log_norm, 6.0f64.ln(), max_relative = 1e-12);
        assert_eq!(b.achieved_at, 0);
        // || W^3 || = 2^3, attained on the left ray.
        let b = operator_log_norm(&hybrid(), FamilyMember::Shift, 3, -10..=0).unwrap();
        assert_relative_eq!(b, 3.0 * LN_2, max_relative = 1e-12);
        // Valley: || V^4 || = (2c)^4 on n <= -N.
        let b = operator_log_norm(&valley1(), FamilyMember::Shift, 4, -8..=0).unwrap();
        assert_relative_eq!(b, 4.0 * LN_2, max_relative = 1e-12);
    }

    #[test]
    fn operator_log_norm_argmax_breaks_ties_to_smallest_index() {
        // Valley shift: every n <= -N attains the sup; smallest in window wins.
        let b = operator_log_norm_detail(&valley1(), FamilyMember::Shift, 4, -8..=0).unwrap();
        assert_eq!(b.achieved_at, -8);
    }

    #[test]
    fn default_windows_attain_documented_sups() {
        for n in [1i64, 3, 10, 64] {
            for member in [
                FamilyMember::Shift,
                FamilyMember::Inverse,
                FamilyMember::Adjoint,
                FamilyMember::AdjointInverse,
            ] {
                let w = default_window(&valley1(), member, n).unwrap();
                let sup = operator_log_norm(&valley1(), member, n, w).unwrap();
                assert_relative_eq!(sup, n as f64 * LN_2, max_relative = 1e-12);
            }
            // Hybrid: shift/adjoint reach 2^N, inverse/adjoint-inverse reach N+1.
            for member in [FamilyMember::Shift, FamilyMember::Adjoint] {
                let w = default_window(&hybrid(), member, n).unwrap();
                let sup = operator_log_norm(&hybrid(), member, n, w).unwrap();
                assert_relative_eq!(sup, n as f64 * LN_2, max_relative = 1e-12);
            }
            for member in [FamilyMember::Inverse, FamilyMember::AdjointInverse] {
                let w = default_window(&hybrid(), member, n).unwrap();
                let sup = operator_log_norm(&hybrid(), member, n, w).unwrap();
                assert_relative_eq!(sup, (n as f64 + 1.0).ln(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn coefficient_lower_bound_examples() {
        // Singleton support: equality with the norm.
        let b2 = SparseVector::basis(2);
        let lb = coefficient_lower_bound(&valley1(), FamilyMember::Shift, 3, &b2, 2).unwrap();
        let ln = log_norm_power(&valley1(), FamilyMember::Shift, 3, &b2).unwrap();
        assert_relative_eq!(lb, ln, max_relative = 1e-12);
        // Harmonic vector, interior index.
        let f = harmonic_test_vector(10);
        let lb = coefficient_lower_bound(&valley1(), FamilyMember::Shift, 5, &f, 7).unwrap();
        let expected = (1.0f64 / 7.0).ln() + (7.0 - 12.0) * LN_2;
        assert_relative_eq!(lb, expected, max_relative = 1e-12);
        // Index off the support is an error.
        assert_eq!(
            coefficient_lower_bound(&valley1(), FamilyMember::Shift, 5, &f, 0).unwrap_err(),
            Error::IndexNotInSupport(0)
        );
    }

    #[test]
    fn diagonality_of_conjugated_power() {
        // ln || T^N b_n || equals the signed log-ratio at n.
        let seq = krein1();
        for n in [-9i64, -1, 0, 4, 17] {
            for pow in [1i64, 2, 13] {
                let ln = log_norm_power(&seq, FamilyMember::Shift, pow, &SparseVector::basis(n))
                    .unwrap();
                assert_relative_eq!(ln, seq.log_ratio(n, pow).unwrap(), epsilon = 1e-12);
            }
        }
    }

    fn arb_vector() -> impl Strategy<Value = SparseVector> {
        proptest::collection::vec((-32i64..=32, -2.0f64..2.0), 1..8).prop_map(|mut xs| {
            // Keep coefficients away from zero so supports stay stable.
            for (_, c) in xs.iter_mut() {
                if c.abs() < 0.25 {
                    *c = 0.25 * if *c < 0.0 { -1.0 } else { 1.0 };
                }
            }
            SparseVector::from_entries(xs)
        })
    }

    fn all_members() -> [FamilyMember; 4] {
        [
            FamilyMember::Shift,
            FamilyMember::Inverse,
            FamilyMember::Adjoint,
            FamilyMember::AdjointInverse,
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn semigroup_law_on_coefficients(
            v in arb_vector(),
            n1 in -32i64..=32,
            n2 in -32i64..=32,
            member_ix in 0usize..4,
        ) {
            let seq = hybrid();
            let member = all_members()[member_ix];
            let two_steps =
                apply_power(&seq, member, n1, &apply_power(&seq, member, n2, &v).unwrap()).unwrap();
            let one_step = apply_power(&seq, member, n1 + n2, &v).unwrap();
            for (n, c) in one_step.iter() {
                let d = two_steps.coeff(n);
                prop_assert!((c - d).abs() <= 1e-12 * c.abs().max(1.0));
            }
        }

        #[test]
        fn inversion_roundtrip(v in arb_vector(), n in 1i64..=32) {
            let seq = valley1();
            let forward = apply_power(&seq, FamilyMember::Shift, n, &v).unwrap();
            let back = apply_power(&seq, FamilyMember::Inverse, n, &forward).unwrap();
            for (ix, c) in v.iter() {
                prop_assert!((back.coeff(ix) - c).abs() <= 1e-12 * c.abs());
            }
        }

        #[test]
        fn norm_consistency_with_exact_coefficients(v in arb_vector(), n in 1i64..=16) {
            let seq = hybrid();
            let direct = apply_power(&seq, FamilyMember::Shift, n, &v).unwrap().norm();
            let logged = log_norm_power(&seq, FamilyMember::Shift, n, &v).unwrap();
            prop_assert!((logged.exp() - direct).abs() <= 1e-9 * direct);
        }

        #[test]
        fn adjoint_identity(x in arb_vector(), y in arb_vector(), n in 1i64..=16) {
            let seq = krein1();
            let lhs = apply_power(&seq, FamilyMember::Shift, n, &x).unwrap().inner(&y);
            let rhs = x.inner(&apply_power(&seq, FamilyMember::Adjoint, n, &y).unwrap());
            prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(rhs.abs()).max(1.0));
        }

        #[test]
        fn coefficient_bound_below_norm(v in arb_vector(), n in 1i64..=24) {
            let seq = krein1();
            let ln = log_norm_power(&seq, FamilyMember::Shift, n, &v).unwrap();
            for ix in v.support() {
                let lb = coefficient_lower_bound(&seq, FamilyMember::Shift, n, &v, ix).unwrap();
                prop_assert!(lb <= ln + 1e-12 * ln.abs().max(1.0));
            }
        }
    }
}
