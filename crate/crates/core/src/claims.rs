//! One operation per quantitative claim, each returning a structured
//! pass/fail report with the measured values embedded.
//!
//! Reports are deterministic: identical parameters produce bit-identical
//! reports, including the seeded test-vector panels.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockspace::{harmonic_test_vector, HatVector, SparseVector};
use crate::hamilton::{gram, GramForm};
use crate::shiftop::{log_norm_power, operator_log_norm, FamilyMember, WindowPolicy};
use crate::spectral::{
    hat_membership, membership, spectral_radius_estimate, Decision, MembershipSet, TimeDirection,
};
use crate::weights::WeightSequence;

/// Seed of the default deterministic test-vector panel.
pub const DEFAULT_PANEL_SEED: u64 = 42;

/// Default refutation threshold: `ln 10^6`.
pub fn default_threshold() -> f64 {
    1e6f64.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
}

/// Structured outcome of one claim verification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub pass: bool,
    pub measured: Vec<Measurement>,
    pub tolerance: f64,
    pub parameters: BTreeMap<String, String>,
}

impl ClaimReport {
    fn new(claim_id: &str, tolerance: f64) -> Self {
        Self {
            claim_id: claim_id.into(),
            pass: true,
            measured: Vec::new(),
            tolerance,
            parameters: BTreeMap::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    fn record(&mut self, label: impl Into<String>, value: f64) {
        self.measured.push(Measurement {
            label: label.into(),
            value,
        });
    }

    /// Records a sub-check; any failure flips the report and is kept visible
    /// as a zero/one measurement so there are no silent passes.
    fn check(&mut self, label: &str, ok: bool) {
        if !ok {
            self.pass = false;
        }
        self.record(format!("check[{label}]"), if ok { 1.0 } else { 0.0 });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable fixed-width table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "claim {:<8} {}  (tolerance {:e})\n",
            self.claim_id,
            if self.pass { "PASS" } else { "FAIL" },
            self.tolerance
        ));
        for (k, v) in &self.parameters {
            out.push_str(&format!("  param    {k} = {v}\n"));
        }
        for m in &self.measured {
            out.push_str(&format!("  measured {:<44} = {:.12e}\n", m.label, m.value));
        }
        out
    }
}

fn relative_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}

/// Oscillatory family: one-step boundedness and the dyadic peak/valley
/// subsequences `n_k = 2^{1+4k}-1`, `m_k = 2^{3+4k}-1`.
pub fn verify_l2_1(c: f64, k_max: u32, window: RangeInclusive<i64>) -> Result<ClaimReport> {
    if !(1..=14).contains(&k_max) {
        return Err(Error::InvalidParameter(format!(
            "k_max must be in 1..=14 (index fits i64), got {k_max}"
        )));
    }
    let seq = WeightSequence::krein_oscillatory(c)?;
    let mut report = ClaimReport::new("L2-1", 1e-9);
    report.param("c", c);
    report.param("k_max", k_max);
    report.param("window", format!("{}..={}", window.start(), window.end()));

    let ln_base = (c + 2.0).ln();
    let alpha = 1.0 + PI / (2.0 * LN_2);
    let cap = alpha * ln_base;
    let bound = seq.one_step_ratio_bound(window)?;
    report.record("one_step_ratio_bound", bound);
    report.record("mean_value_cap", cap);
    report.check("one_step_ratio_bound <= cap", bound <= cap);

    for k in 1..=k_max {
        let n_k = 2i64.pow(1 + 4 * k) - 1;
        let m_k = 2i64.pow(3 + 4 * k) - 1;
        let peak = seq.log_weight(n_k)?;
        let valley = seq.log_weight(m_k)?;
        let peak_want = n_k as f64 * ln_base;
        let valley_want = -(m_k as f64) * ln_base;
        report.record(format!("log_weight({n_k})"), peak);
        report.record(format!("expected({n_k})"), peak_want);
        report.record(format!("log_weight({m_k})"), valley);
        report.record(format!("expected({m_k})"), valley_want);
        report.check(
            &format!("peak k={k}"),
            relative_close(peak, peak_want, 1e-9),
        );
        report.check(
            &format!("valley k={k}"),
            relative_close(valley, valley_want, 1e-9),
        );
    }
    Ok(report)
}

/// Valley family: the closed-form power norms and the spectral radius `2c`.
pub fn verify_r3_1(c: f64, n_max: i64, pow_max: i64) -> Result<ClaimReport> {
    if n_max < 0 || pow_max < 1 {
        return Err(Error::InvalidParameter(
            "verify R3-1 needs n_max >= 0 and pow_max >= 1".into(),
        ));
    }
    let seq = WeightSequence::geometric_valley(c)?;
    let mut report = ClaimReport::new("R3-1", 1e-12);
    report.param("c", c);
    report.param("n_max", n_max);
    report.param("pow_max", pow_max);

    let beta = (2.0 * c).ln();
    let mut violations = 0u64;
    let mut worst = 0.0f64;
    for n in -n_max..=n_max {
        let b_n = SparseVector::basis(n);
        for pow in 0..=pow_max {
            let got = log_norm_power(&seq, FamilyMember::Shift, pow, &b_n)?;
            let want = (n.abs() - (n + pow).abs()) as f64 * beta;
            let dev = (got - want).abs();
            worst = worst.max(dev);
            if dev > 1e-12 {
                violations += 1;
            }
        }
    }
    report.record("norm_identity_max_deviation", worst);
    report.record("norm_identity_violations", violations as f64);
    report.check("norm identity over grid", violations == 0);

    for (label, member) in [
        ("r(V)", FamilyMember::Shift),
        ("r(V^-1)", FamilyMember::Inverse),
    ] {
        let r = spectral_radius_estimate(&seq, member, pow_max, &WindowPolicy::FamilyDefault)?;
        report.record(label, r);
        report.check(label, relative_close(r, 2.0 * c, 1e-9));
    }
    Ok(report)
}

/// Valley family on the truncated harmonic vector: two-sided rapid growth.
///
/// The infinite-support bound `||V^N f||^2 >= (2c)^{2N}/(N+1)` becomes, after
/// truncating `f` at `|n| <= M`, the telescoped bound
/// `||V^N f||^2 >= (2c)^{2N} (1/(N+1) - 1/(M+1))`, which recovers the
/// original as `M -> inf`. The forward/backward symmetry is exact.
pub fn verify_r3_2(c: f64, m: u32, n_max: i64) -> Result<ClaimReport> {
    if m < 2 || n_max < 1 || n_max > m as i64 / 2 {
        return Err(Error::InvalidParameter(format!(
            "verify R3-2 needs 1 <= n_max <= M/2, got M={m}, n_max={n_max}"
        )));
    }
    let seq = WeightSequence::geometric_valley(c)?;
    let f = harmonic_test_vector(m);
    let mut report = ClaimReport::new("R3-2", 1e-12);
    report.param("c", c);
    report.param("M", m);
    report.param("n_max", n_max);

    let two_beta = 2.0 * (2.0 * c).ln();
    let mut bound_violations = 0u64;
    let mut min_margin = f64::INFINITY;
    let mut max_symmetry_gap = 0.0f64;
    for pow in 1..=n_max {
        let fwd = log_norm_power(&seq, FamilyMember::Shift, pow, &f)?;
        let bwd = log_norm_power(&seq, FamilyMember::Inverse, pow, &f)?;
        max_symmetry_gap = max_symmetry_gap.max((fwd - bwd).abs());
        let tail_mass = 1.0 / (pow as f64 + 1.0) - 1.0 / (m as f64 + 1.0);
        let bound_log = pow as f64 * two_beta + tail_mass.ln();
        let margin = 2.0 * fwd - bound_log;
        min_margin = min_margin.min(margin);
        if margin < 0.0 {
            bound_violations += 1;
        }
    }
    report.record("min_log_margin_over_bound", min_margin);
    report.record("bound_violations", bound_violations as f64);
    report.record("max_symmetry_gap", max_symmetry_gap);
    report.check("truncation-corrected growth bound", bound_violations == 0);
    report.check("forward/backward symmetry", max_symmetry_gap <= 1e-12);
    Ok(report)
}

/// Hybrid family: exact operator-norm laws, spectral radii, and the
/// membership split (every basis vector decays under the shift, nothing but
/// zero stays bounded under the adjoint-inverse).
pub fn verify_l3_2(n_max: i64, window: Option<RangeInclusive<i64>>) -> Result<ClaimReport> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    let seq = WeightSequence::hybrid_decay_harmonic();
    let mut report = ClaimReport::new("L3-2", 1e-12);
    report.param("n_max", n_max);
    report.param(
        "window",
        window
            .as_ref()
            .map(|w| format!("{}..={}", w.start(), w.end()))
            .unwrap_or_else(|| "family-default".into()),
    );

    let mut worst_shift = 0.0f64;
    let mut worst_adjinv = 0.0f64;
    for pow in 1..=n_max {
        let w_shift = match &window {
            Some(w) => w.clone(),
            None => crate::shiftop::default_window(&seq, FamilyMember::Shift, pow)?,
        };
        let w_adjinv = match &window {
            Some(w) => w.clone(),
            None => crate::shiftop::default_window(&seq, FamilyMember::AdjointInverse, pow)?,
        };
        let shift_norm = operator_log_norm(&seq, FamilyMember::Shift, pow, w_shift)?;
        let adjinv_norm = operator_log_norm(&seq, FamilyMember::AdjointInverse, pow, w_adjinv)?;
        worst_shift = worst_shift.max((shift_norm - pow as f64 * LN_2).abs());
        worst_adjinv = worst_adjinv.max((adjinv_norm - (pow as f64 + 1.0).ln()).abs());
    }
    report.record("max |ln||W^N|| - N ln 2|", worst_shift);
    report.record("max |ln||W*^-N|| - ln(N+1)|", worst_adjinv);
    report.check("shift norm law", worst_shift <= 1e-12);
    report.check("adjoint-inverse norm law", worst_adjinv <= 1e-12);

    let r_shift = spectral_radius_estimate(
        &seq,
        FamilyMember::Shift,
        n_max,
        &WindowPolicy::FamilyDefault,
    )?;
    let r_adjinv = spectral_radius_estimate(
        &seq,
        FamilyMember::AdjointInverse,
        n_max,
        &WindowPolicy::FamilyDefault,
    )?;
    let r_adjinv_want = ((n_max as f64 + 1.0).ln() / n_max as f64).exp();
    report.record("r(W) estimate", r_shift);
    report.record("r(W*^-1) estimate", r_adjinv);
    report.record("r(W*^-1) expected", r_adjinv_want);
    report.check("r(W) = 2", relative_close(r_shift, 2.0, 1e-9));
    report.check(
        "r(W*^-1) matches (N+1)^(1/N)",
        (r_adjinv - r_adjinv_want).abs() <= 1e-6,
    );

    // Membership split at horizon 512. The basis vectors b_n with n <= -1
    // climb to 2^{|n|} before their harmonic decay, so the S0 smallness
    // threshold is shifted by the worst transient 2^{16} (and the S
    // refutation threshold symmetrically).
    let horizon = 512;
    let transient_threshold = -(17.0 * LN_2);
    let mut s0_all = true;
    for n in -16..=16 {
        let verdict = membership(
            &seq,
            FamilyMember::Shift,
            &SparseVector::basis(n),
            MembershipSet::S0,
            horizon,
            transient_threshold,
        )?;
        s0_all &= verdict.is_consistent();
    }
    report.check("b_n in S0(W) for |n| <= 16", s0_all);

    let s_verdict = membership(
        &seq,
        FamilyMember::AdjointInverse,
        &SparseVector::basis(0),
        MembershipSet::S,
        horizon,
        10.0f64.ln(),
    )?;
    report.check(
        "b_0 not in S(W*^-1)",
        s_verdict.decision == Decision::RefutedAtHorizon,
    );
    report.param("membership_horizon", horizon);
    report.param("s0_threshold", transient_threshold);
    Ok(report)
}

/// Structure of the hybrid lift: stability evidence lives entirely in the
/// top component, and both coordinate half-spaces are J-neutral.
pub fn verify_th3_2_structure(horizon: i64) -> Result<ClaimReport> {
    if horizon < 4 {
        return Err(Error::InvalidParameter("horizon must be >= 4".into()));
    }
    let seq = WeightSequence::hybrid_decay_harmonic();
    let mut report = ClaimReport::new("Th3-2", 1e-12);
    report.param("horizon", horizon);

    // Thresholds absorb the 2^{16} geometric transient of b_{+-16}.
    let s0_threshold = -(17.0 * LN_2);
    let s_threshold = -(17.0 * LN_2);
    report.param("s0_threshold", s0_threshold);
    report.param("s_threshold", s_threshold);

    let mut top_consistent = true;
    let mut bottom_refuted = true;
    for n in -16..=16 {
        let top = hat_membership(
            &seq,
            TimeDirection::Forward,
            &HatVector::top_only(SparseVector::basis(n)),
            MembershipSet::S0,
            horizon,
            s0_threshold,
        )?;
        top_consistent &= top.is_consistent();
        let bottom = hat_membership(
            &seq,
            TimeDirection::Forward,
            &HatVector::bottom_only(SparseVector::basis(n)),
            MembershipSet::S,
            horizon,
            s_threshold,
        )?;
        bottom_refuted &= bottom.decision == Decision::RefutedAtHorizon;
    }
    report.check("b_n (+) 0 consistent with S0", top_consistent);
    report.check("0 (+) b_n refutes S", bottom_refuted);

    // Componentwise splitting: a nonzero bottom component alone refutes S0
    // membership of the pair, mirroring S_x(T1 (+) T2) = S_x(T1) (+) S_x(T2).
    let mut splitting_ok = true;
    for (n, m) in [(0i64, 0i64), (3, -2), (-5, 7)] {
        let pair = HatVector::new(SparseVector::basis(n), SparseVector::basis(m));
        let hat = hat_membership(
            &seq,
            TimeDirection::Forward,
            &pair,
            MembershipSet::S0,
            horizon,
            s0_threshold,
        )?;
        let top = membership(
            &seq,
            FamilyMember::Shift,
            &SparseVector::basis(n),
            MembershipSet::S0,
            horizon,
            s0_threshold,
        )?;
        let bottom = membership(
            &seq,
            FamilyMember::AdjointInverse,
            &SparseVector::basis(m),
            MembershipSet::S0,
            horizon,
            s0_threshold,
        )?;
        let componentwise = top.is_consistent() && bottom.is_consistent();
        splitting_ok &= hat.is_consistent() == componentwise;
        splitting_ok &= !hat.is_consistent(); // the bottom must spoil it
    }
    report.check("componentwise S0 splitting", splitting_ok);

    // J-neutrality of both coordinate half-spaces, exactly.
    let mut neutral = true;
    for n in -4..=4 {
        for m in -4..=4 {
            let top_pair = gram(
                GramForm::JForm,
                &HatVector::top_only(SparseVector::basis(n)),
                &HatVector::top_only(SparseVector::basis(m)),
            );
            let bottom_pair = gram(
                GramForm::JForm,
                &HatVector::bottom_only(SparseVector::basis(n)),
                &HatVector::bottom_only(SparseVector::basis(m)),
            );
            neutral &= top_pair == 0.0 && bottom_pair == 0.0;
        }
    }
    report.check("J-neutrality of coordinate half-spaces", neutral);
    Ok(report)
}

/// Oscillatory lift: no nonzero vector grows slower than `(c+1)^N` in either
/// time direction — per-vector refutation certificates over a seeded panel.
pub fn verify_th2_1_growth(c: f64, horizon: i64) -> Result<ClaimReport> {
    if horizon < 1 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let seq = WeightSequence::krein_oscillatory(c)?;
    let a = c + 1.0;
    let threshold = default_threshold();
    let panel = seeded_hat_panel(DEFAULT_PANEL_SEED);

    let mut report = ClaimReport::new("Th2-1", 0.0);
    report.param("c", c);
    report.param("horizon", horizon);
    report.param("a", a);
    report.param("threshold", threshold);
    report.param("panel_seed", DEFAULT_PANEL_SEED);
    report.record("panel_size", panel.len() as f64);

    let mut all_refuted = true;
    let mut min_peak_excess = f64::INFINITY;
    let ln_a = a.ln();
    for (label, hat) in &panel {
        for direction in [TimeDirection::Forward, TimeDirection::Backward] {
            let verdict = hat_membership(
                &seq,
                direction,
                hat,
                MembershipSet::SPlus { a },
                horizon,
                threshold,
            )?;
            let refuted = verdict.decision == Decision::RefutedAtHorizon;
            if !refuted {
                report.check(&format!("{label} {}", direction.name()), false);
            }
            all_refuted &= refuted;
            if let Some(s) = verdict.certificate.first() {
                min_peak_excess = min_peak_excess.min(s.log_norm - s.step as f64 * ln_a);
            }
        }
    }
    report.record("min_peak_excess_over_panel", min_peak_excess);
    report.check(
        "S+(a) refuted for every panel vector, both directions",
        all_refuted,
    );
    Ok(report)
}

/// The deterministic hat-vector panel: coordinate basis vectors, harmonic
/// truncations and seeded random sparse pairs, all nonzero.
pub fn seeded_hat_panel(seed: u64) -> Vec<(String, HatVector)> {
    let mut panel: Vec<(String, HatVector)> = Vec::new();
    for n in [0i64, 1, -5] {
        panel.push((
            format!("b_{n} (+) 0"),
            HatVector::top_only(SparseVector::basis(n)),
        ));
        panel.push((
            format!("0 (+) b_{n}"),
            HatVector::bottom_only(SparseVector::basis(n)),
        ));
    }
    panel.push((
        "b_3 (+) b_3".into(),
        HatVector::new(SparseVector::basis(3), SparseVector::basis(3)),
    ));
    panel.push((
        "b_-2 (+) b_4".into(),
        HatVector::new(SparseVector::basis(-2), SparseVector::basis(4)),
    ));
    for m in [8u32, 32] {
        panel.push((
            format!("h({m}) (+) 0"),
            HatVector::top_only(harmonic_test_vector(m)),
        ));
        panel.push((
            format!("0 (+) h({m})"),
            HatVector::bottom_only(harmonic_test_vector(m)),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_component = |rng: &mut ChaCha8Rng, max_terms: usize| {
        let terms = rng.gen_range(0..=max_terms);
        SparseVector::from_entries((0..terms).map(|_| {
            let n = rng.gen_range(-32i64..=32);
            let magnitude = rng.gen_range(0.25..2.0);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (n, sign * magnitude)
        }))
    };
    let mut k = 0;
    while k < 12 {
        let top = random_component(&mut rng, 4);
        let bottom = random_component(&mut rng, 4);
        let hat = HatVector::new(top, bottom);
        if hat.is_zero() {
            continue;
        }
        panel.push((format!("random[{k}]"), hat));
        k += 1;
    }
    panel
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l2_1_passes_at_reference_parameters() {
        let r = verify_l2_1(1.0, 2, -10_000..=10_000).unwrap();
        assert!(r.pass, "{}", r.render_table());
        // The first peak measurement is 31 ln 3.
        let peak = r
            .measured
            .iter()
            .find(|m| m.label == "log_weight(31)")
            .unwrap();
        assert!((peak.value - 31.0 * 3.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn l2_1_other_base() {
        let r = verify_l2_1(0.5, 1, -1000..=1000).unwrap();
        assert!(r.pass, "{}", r.render_table());
        let peak = r
            .measured
            .iter()
            .find(|m| m.label == "expected(31)")
            .unwrap();
        assert!((peak.value - 31.0 * 2.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn l2_1_rejects_bad_kmax() {
        assert!(verify_l2_1(1.0, 0, -10..=10).is_err());
        assert!(verify_l2_1(1.0, 15, -10..=10).is_err());
    }

    #[test]
    fn r3_1_passes_for_both_c() {
        for c in [1.0, 2.0] {
            let r = verify_r3_1(c, 64, 64).unwrap();
            assert!(r.pass, "{}", r.render_table());
        }
    }

    #[test]
    fn r3_2_passes_at_moderate_size() {
        let r = verify_r3_2(1.0, 512, 256).unwrap();
        assert!(r.pass, "{}", r.render_table());
    }

    #[test]
    fn r3_2_rejects_deep_truncation() {
        assert!(verify_r3_2(1.0, 512, 400).is_err());
    }

    #[test]
    fn l3_2_passes() {
        let r = verify_l3_2(200, None).unwrap();
        assert!(r.pass, "{}", r.render_table());
    }

    #[test]
    fn th3_2_passes() {
        let r = verify_th3_2_structure(512).unwrap();
        assert!(r.pass, "{}", r.render_table());
    }

    #[test]
    fn th2_1_passes() {
        let r = verify_th2_1_growth(1.0, 511).unwrap();
        assert!(r.pass, "{}", r.render_table());
        let size = r.measured.iter().find(|m| m.label == "panel_size").unwrap();
        assert!(size.value >= 20.0);
    }

    #[test]
    fn reports_are_reproducible() {
        let a = verify_th2_1_growth(1.0, 128).unwrap();
        let b = verify_th2_1_growth(1.0, 128).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let a = verify_l2_1(1.0, 2, -500..=500).unwrap();
        let b = verify_l2_1(1.0, 2, -500..=500).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn panel_is_deterministic_and_large_enough() {
        let a = seeded_hat_panel(DEFAULT_PANEL_SEED);
        let b = seeded_hat_panel(DEFAULT_PANEL_SEED);
        assert_eq!(a.len(), b.len());
        assert!(a.len() >= 20);
        for ((la, ha), (lb, hb)) in a.iter().zip(&b) {
            assert_eq!(la, lb);
            assert_eq!(ha, hb);
        }
        assert!(a.iter().all(|(_, h)| !h.is_zero()));
    }
}
