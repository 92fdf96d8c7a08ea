//! The Hamiltonian lift of a weighted shift: `U (+) U^{*-1}` acting on the
//! doubled space, together with the indefinite and symplectic Gram forms it
//! preserves.
//!
//! Conventions: the fundamental symmetry swaps the components,
//! `J: x (+) y -> y (+) x`, and the symplectic structure is
//! `x (+) y -> y (+) (-x)` (so that it squares to minus the identity and is
//! skew-adjoint). The alternative sign convention `-y (+) x` differs only by
//! an overall sign of the symplectic form, never in any invariance check.

use crate::error::Result;
use crate::fockspace::HatVector;
use crate::numeric::log_sum_exp;
use crate::shiftop::{apply_power, FamilyMember};
use crate::weights::WeightSequence;

/// The two Gram forms preserved by the lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramForm {
    /// `[a, b] = (a_top, b_bottom) + (a_bottom, b_top)` — indefinite, from `J`.
    JForm,
    /// `[a, b] = (a_top, b_bottom) - (a_bottom, b_top)` — antisymmetric.
    SymplecticForm,
}

/// `J (x (+) y) = y (+) x`. An involution: applying it twice is the identity.
pub fn j_map(h: &HatVector) -> HatVector {
    HatVector::new(h.bottom.clone(), h.top.clone())
}

/// The symplectic structure `x (+) y -> y (+) (-x)`; squares to negation.
pub fn symplectic_map(h: &HatVector) -> HatVector {
    HatVector::new(h.bottom.clone(), h.top.scale(-1.0))
}

/// Evaluates a Gram form on a pair of hat vectors.
pub fn gram(form: GramForm, a: &HatVector, b: &HatVector) -> f64 {
    let cross_top = a.top.inner(&b.bottom);
    let cross_bottom = a.bottom.inner(&b.top);
    match form {
        GramForm::JForm => cross_top + cross_bottom,
        GramForm::SymplecticForm => cross_top - cross_bottom,
    }
}

/// Applies the lift to the `power`: the top component evolves by the shift,
/// the bottom by the adjoint-inverse, so negative powers give the inverse
/// lift automatically.
pub fn hat_apply(seq: &WeightSequence, power: i64, h: &HatVector) -> Result<HatVector> {
    Ok(HatVector::new(
        apply_power(seq, FamilyMember::Shift, power, &h.top)?,
        apply_power(seq, FamilyMember::AdjointInverse, power, &h.bottom)?,
    ))
}

/// `ln || hat U^power h ||` over both components in one log-sum-exp pass.
///
/// Components with empty support contribute nothing; a fully zero hat vector
/// is rejected the same way `log_norm_power` rejects a zero vector.
pub fn hat_log_norm_power(seq: &WeightSequence, power: i64, h: &HatVector) -> Result<f64> {
    if h.is_zero() {
        return Err(crate::error::Error::ZeroVector);
    }
    let mut terms = Vec::with_capacity(h.top.support_len() + h.bottom.support_len());
    // Top scales by the weight ratio, bottom by its reciprocal.
    for (component, sign) in [(&h.top, 1.0), (&h.bottom, -1.0)] {
        for (n, c) in component.iter() {
            let raw = seq.log_ratio(n, power)?;
            terms.push(2.0 * (c.abs().ln() + sign * raw));
        }
    }
    Ok(0.5 * log_sum_exp(&terms))
}

/// Max absolute deviation of both Gram forms under evolution by the lift:
/// `max over pairs, forms of | gram(U^N a, U^N b) - gram(a, b) |`.
pub fn check_form_invariance(
    seq: &WeightSequence,
    power: i64,
    samples: &[(HatVector, HatVector)],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for (a, b) in samples {
        let ea = hat_apply(seq, power, a)?;
        let eb = hat_apply(seq, power, b)?;
        for form in [GramForm::JForm, GramForm::SymplecticForm] {
            let before = gram(form, a, b);
            let after = gram(form, &ea, &eb);
            worst = worst.max((after - before).abs());
        }
    }
    Ok(worst)
}
