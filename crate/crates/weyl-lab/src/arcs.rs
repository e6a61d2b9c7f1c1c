//! Diophantine geometry of the dyadic decomposition: Dirichlet
//! approximation, major/minor classification, arc enumeration, and
//! disjointness audits.
//!
//! At dyadic level `j` every frequency `theta` has a Dirichlet witness
//! `a/q` with `q <= Q = 2^{(beta - beta1) j}` and
//! `|theta - a/q| <= 1/(q Q)`. The frequency is *major* when the witness
//! denominator is small, `q <= (1/10) 2^{beta0 j}`, and *minor*
//! otherwise. The parameter tuple `(beta, beta0, beta1)` must satisfy
//!
//! ```text
//! beta0 <= beta - beta1,  beta0 <= 1,  beta - beta1 >= k - 1,
//! lambda > beta0,         lambda > 1/2,
//! ```
//!
//! which is exactly the constraint set under which the major-arc
//! contribution is summable; construction enforces it (with an explicit
//! override for exploration).
//!
//! Witness arithmetic is exact: the floating-point `theta` is treated as
//! the dyadic rational it is, its continued-fraction convergents are
//! computed in integer arithmetic, and interval comparisons in the
//! disjointness audits reduce to integer inequalities, so no boundary is
//! ever misclassified by roundoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsums::ReducedFraction;

/// Decomposition parameters `(k, beta, beta0, beta1, lambda)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ArcParameters {
    pub k: u32,
    pub beta: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub lambda: f64,
}

impl ArcParameters {
    /// Validated constructor enforcing the summability constraints; set
    /// `override_constraints` to explore outside them.
    pub fn new(
        k: u32,
        beta: f64,
        beta0: f64,
        beta1: f64,
        lambda: f64,
        override_constraints: bool,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("arc parameters need k >= 1"));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::invalid("lambda must lie in (0, 1)"));
        }
        if !(beta0 > 0.0) || !beta.is_finite() || !(beta1 >= 0.0) {
            return Err(Error::invalid("beta parameters must be positive and finite"));
        }
        let p = ArcParameters {
            k,
            beta,
            beta0,
            beta1,
            lambda,
        };
        if !override_constraints {
            if let Some(why) = p.constraint_violation() {
                return Err(Error::invalid(format!(
                    "arc parameters violate the summability constraints: {why}"
                )));
            }
        }
        Ok(p)
    }

    /// First violated constraint, if any.
    pub fn constraint_violation(&self) -> Option<String> {
        let ArcParameters {
            k,
            beta,
            beta0,
            beta1,
            lambda,
        } = *self;
        if beta0 > beta - beta1 {
            return Some(format!("beta0 = {beta0} > beta - beta1 = {}", beta - beta1));
        }
        if beta0 > 1.0 {
            return Some(format!("beta0 = {beta0} > 1"));
        }
        if beta - beta1 < (k as f64) - 1.0 {
            return Some(format!(
                "beta - beta1 = {} < k - 1 = {}",
                beta - beta1,
                k - 1
            ));
        }
        if lambda <= beta0 {
            return Some(format!("lambda = {lambda} <= beta0 = {beta0}"));
        }
        if lambda <= 0.5 {
            return Some(format!("lambda = {lambda} <= 1/2"));
        }
        None
    }

    /// Default preset: `beta = k`, `beta1 = 1`, and `beta0` a hair below
    /// `min(1, lambda)` (the largest admissible major-arc exponent).
    pub fn standard(k: u32, lambda: f64) -> Result<Self> {
        let beta0 = lambda.min(1.0) - 1e-6;
        Self::new(k, k as f64, beta0, 1.0, lambda, false)
    }

    /// The historical preset `beta = k`, `beta1 = 1`, `beta0 = 1/2`.
    pub fn stein_wainger(k: u32, lambda: f64) -> Result<Self> {
        Self::new(k, k as f64, 0.5, 1.0, lambda, false)
    }

    /// Dirichlet level `Q = max(1, floor(2^{(beta - beta1) j}))`, clamped
    /// to 2^53 (beyond which double-precision frequencies cannot resolve
    /// distinct rationals anyway).
    pub fn dirichlet_level(&self, j: u32) -> u64 {
        let exact = f64::powf(2.0, (self.beta - self.beta1) * j as f64);
        if exact >= (1u64 << 53) as f64 {
            1 << 53
        } else {
            (exact.floor() as u64).max(1)
        }
    }

    /// Major-arc denominator cap `(1/10) 2^{beta0 j}`.
    pub fn major_q_cap(&self, j: u32) -> f64 {
        0.1 * f64::powf(2.0, self.beta0 * j as f64)
    }

    /// Radius of the arc centered at `a/q` for level `j`:
    /// `1 / (q * 2^{(beta - beta1) j})`.
    pub fn arc_radius(&self, q: u64, j: u32) -> f64 {
        1.0 / (q as f64 * f64::powf(2.0, (self.beta - self.beta1) * j as f64))
    }
}

/// A Dirichlet witness: reduced fraction and its circle distance to the
/// approximated frequency.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DirichletWitness {
    pub frac: ReducedFraction,
    /// `min(|theta - a/q|, 1 - |theta - a/q|)` — distance on the circle.
    pub distance: f64,
}

/// Exact dyadic-rational view of an `f64` in `[0, 1]` as `num / 2^shift`.
fn dyadic_parts(theta: f64) -> Option<(u128, u32)> {
    if theta == 0.0 {
        return Some((0, 0));
    }
    if theta == 1.0 {
        return Some((1, 0));
    }
    let bits = theta.to_bits();
    let exp_raw = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp_raw == 0 {
        (mant, -1074i64)
    } else {
        (mant | (1u64 << 52), exp_raw - 1075)
    };
    // theta = m * 2^e with e < 0 here; shift = -e.
    let shift = (-e) as u32;
    if shift > 127 {
        // Subnormal-scale theta: indistinguishable from zero for any
        // practical Dirichlet level.
        return None;
    }
    Some((m as u128, shift))
}

/// Best rational approximation by continued-fraction convergents:
/// returns reduced `a/q` with `1 <= q <= level` and
/// `|theta - a/q| < 1/(q * level)` (Dirichlet's guarantee), computed
/// exactly on the dyadic rational `theta`. The representative of the
/// integers is `1/1` (a witness `0/1` wraps to it; distances are taken on
/// the circle, which makes the two equivalent).
pub fn dirichlet_approx(theta: f64, level: u64) -> Result<DirichletWitness> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::invalid("frequency must lie in [0, 1]"));
    }
    if level == 0 {
        return Err(Error::invalid("Dirichlet level must be >= 1"));
    }
    let (mut p, shift) = match dyadic_parts(theta) {
        Some((p, shift)) => (p, shift),
        None => {
            // Effectively zero.
            return Ok(DirichletWitness {
                frac: ReducedFraction::new(1, 1)?,
                distance: theta,
            });
        }
    };
    let mut q: u128 = 1u128 << shift;

    // Continued-fraction convergents h/k of p/q; keep the last with
    // k <= level. If the next denominator k' would exceed the level,
    // Dirichlet's bound |theta - h/k| < 1/(k k') < 1/(k * level) holds.
    // Seeds are the standard (-2)/(-1) terms; partial quotients of a
    // dyadic rational can be enormous, so the recurrence is checked.
    let (mut h_prev, mut k_prev): (u128, u128) = (0, 1);
    let (mut h_cur, mut k_cur): (u128, u128) = (1, 0);
    while q != 0 {
        let a = p / q;
        let r = p % q;
        let k_next = match a.checked_mul(k_cur).and_then(|v| v.checked_add(k_prev)) {
            Some(v) if v <= level as u128 => v,
            _ => break,
        };
        let h_next = a * h_cur + h_prev;
        h_prev = h_cur;
        k_prev = k_cur;
        h_cur = h_next;
        k_cur = k_next;
        p = q;
        q = r;
    }
    let (mut a_num, q_den) = (h_cur as u64, k_cur as u64);
    // Normalize the integer witness 0/1 to the 1/1 representative.
    if a_num == 0 {
        a_num = q_den;
    }
    let frac = ReducedFraction::new(a_num, q_den)?;
    let lin = (theta - h_cur as f64 / k_cur as f64).abs();
    // Circle distance: values and centers both lie in [0, 1]; fold
    // anything past half a turn (covers the 0/1 -> 1/1 wrap).
    let distance = if lin > 0.5 { 1.0 - lin } else { lin };
    Ok(DirichletWitness { frac, distance })
}

/// Major/minor classification of a frequency at level `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcClass {
    Major,
    Minor,
}

/// Classification record: the witness always satisfies the Dirichlet
/// inequality; `radius_ok` confirms the witness also lies within the arc
/// radius (automatic for major classifications, recorded for audits).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ArcDecision {
    pub theta: f64,
    pub j: u32,
    pub class: ArcClass,
    pub witness: DirichletWitness,
    /// Dirichlet level used for the witness.
    pub level: u64,
    /// Denominator cap `(1/10) 2^{beta0 j}` for the major test.
    pub q_cap: f64,
    /// Whether the witness lies inside the arc radius `1/(q 2^{(b-b1)j})`.
    pub radius_ok: bool,
}

/// Classify `theta` at level `j`: major iff the Dirichlet witness
/// denominator satisfies `q <= (1/10) 2^{beta0 j}`.
pub fn classify(theta: f64, j: u32, params: &ArcParameters) -> Result<ArcDecision> {
    let level = params.dirichlet_level(j);
    let witness = dirichlet_approx(theta, level)?;
    let q_cap = params.major_q_cap(j);
    let q = witness.frac.denom();
    let class = if (q as f64) <= q_cap {
        ArcClass::Major
    } else {
        ArcClass::Minor
    };
    let radius_ok = witness.distance <= params.arc_radius(q, j) + f64::EPSILON;
    Ok(ArcDecision {
        theta,
        j,
        class,
        witness,
        level,
        q_cap,
        radius_ok,
    })
}

/// One enumerated arc interval: center `a/q`, half-width `radius`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcInterval {
    pub frac: ReducedFraction,
    pub center: f64,
    pub radius: f64,
}

/// Cap on the number of fractions a single enumeration may produce.
pub const ARC_ENUM_BUDGET: u64 = 1 << 21;

/// Enumerate every arc interval at level `j`, ordered by center
/// (Farey order): all reduced `a/q` with `q <= (1/10) 2^{beta0 j}`,
/// radius `1/(q 2^{(beta-beta1) j})`.
pub fn enumerate_major_arcs(j: u32, params: &ArcParameters) -> Result<Vec<ArcInterval>> {
    let cap = params.major_q_cap(j).floor();
    if cap < 1.0 {
        return Ok(Vec::new());
    }
    let q_max = cap as u64;
    // Sum of totients ~ (3/pi^2) q_max^2 fractions.
    let approx_count = (q_max as u128) * (q_max as u128);
    if approx_count > ARC_ENUM_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            what: "arc enumeration",
            required: approx_count,
            limit: ARC_ENUM_BUDGET as u128,
        });
    }
    let mut arcs = Vec::new();
    for q in 1..=q_max {
        for a in 1..=q {
            if num_integer::gcd(a, q) != 1 {
                continue;
            }
            let frac = ReducedFraction::new(a, q)?;
            arcs.push(ArcInterval {
                frac,
                center: frac.value(),
                radius: params.arc_radius(q, j),
            });
        }
    }
    // Farey order by exact cross-multiplication; equal centers cannot
    // occur for distinct reduced fractions.
    arcs.sort_by(|x, y| {
        let lhs = x.frac.numer() as u128 * y.frac.denom() as u128;
        let rhs = y.frac.numer() as u128 * x.frac.denom() as u128;
        lhs.cmp(&rhs)
    });
    Ok(arcs)
}

/// Result of the narrow-interval disjointness audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DisjointnessAudit {
    pub q_max: u64,
    pub pass: bool,
    /// First overlapping pair found, if any.
    pub counterexample: Option<(ReducedFraction, ReducedFraction)>,
    /// Number of same-band pairs checked.
    pub pairs_checked: u64,
}

/// Verify that the narrow intervals `{ |theta - a/q| <= 1/(10 q^2) }`
/// are pairwise disjoint within each dyadic denominator band
/// `2^s <= q < 2^{s+1}` (the stated hypothesis `q1 <= q2 <= 2 q1`), for
/// all `q <= q_max`. Interval comparisons are exact: centers `a1/q1`,
/// `a2/q2` overlap iff `10 d q1 q2 <= q1^2 + q2^2` with
/// `d = |a1 q2 - a2 q1|`.
pub fn mstar_disjointness_audit(q_max: u64) -> Result<DisjointnessAudit> {
    if q_max < 2 {
        return Err(Error::invalid("disjointness audit needs q_max >= 2"));
    }
    if q_max > 1 << 12 {
        return Err(Error::BudgetExceeded {
            what: "disjointness audit denominators",
            required: q_max as u128,
            limit: 1 << 12,
        });
    }
    let mut pairs_checked = 0u64;
    let mut counterexample = None;

    let overlap = |f1: &ReducedFraction, f2: &ReducedFraction, wrap: bool| -> bool {
        let (a1, q1) = (f1.numer() as u128, f1.denom() as u128);
        let (a2, q2) = (f2.numer() as u128, f2.denom() as u128);
        // Optionally compare f1 + 1 against f2 (seam of the circle).
        let a1 = if wrap { a1 + q1 } else { a1 };
        let d = (a1 * q2).abs_diff(a2 * q1);
        10 * d * q1 * q2 <= q1 * q1 + q2 * q2
    };

    let mut s = 0u32;
    while (1u64 << s) <= q_max {
        let lo = 1u64 << s;
        let hi = ((1u64 << (s + 1)) - 1).min(q_max);
        let mut fracs: Vec<ReducedFraction> = Vec::new();
        for q in lo..=hi {
            for a in 1..=q {
                if num_integer::gcd(a, q) == 1 {
                    fracs.push(ReducedFraction::new(a, q)?);
                }
            }
        }
        fracs.sort_by(|x, y| {
            (x.numer() as u128 * y.denom() as u128).cmp(&(y.numer() as u128 * x.denom() as u128))
        });
        // On a line (or circle), if any two intervals overlap then two
        // adjacent-by-center intervals overlap, so adjacent checks are
        // exhaustive for the pass/fail verdict.
        for w in fracs.windows(2) {
            pairs_checked += 1;
            if overlap(&w[0], &w[1], false) && counterexample.is_none() {
                counterexample = Some((w[0], w[1]));
            }
        }
        if fracs.len() > 1 {
            // Seam: last center versus first center + 1.
            pairs_checked += 1;
            let first = fracs[0];
            let last = *fracs.last().unwrap();
            if overlap(&first, &last, true) && counterexample.is_none() {
                counterexample = Some((last, first));
            }
        }
        s += 1;
    }
    Ok(DisjointnessAudit {
        q_max,
        pass: counterexample.is_none(),
        counterexample,
        pairs_checked,
    })
}
