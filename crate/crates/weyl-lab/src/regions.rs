//! The `(1/p, 1/q)` boundedness region for discrete fractional
//! integration along k-th powers, together with the lambda thresholds
//! above which each proof route applies.
//!
//! The conjectured region for `ell^p -> ell^q` boundedness of
//! `f |-> sum_m f(n - m^k) m^{-lambda}` is cut out by a scaling line
//! of slope `(1 - lambda)/k` plus endpoint conditions forced by the
//! impulse and power-family witnesses (`signal` module). Each rigorous
//! route proves the bound on a sub-region: the circle method above a
//! lambda gate balancing major-arc mass against minor-arc savings, a
//! small-even-moment route with a steeper slope, a Hua/Hoelder
//! interpolation route, and a conditional route assuming the classical
//! Hypothesis K* moment bound. Gates that are exact rationals are kept
//! as `ExactValue` so tests can pin them with zero tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsums::sigma_report;

/// An exact rational constant, reduced, with its float image alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub num: i64,
    pub den: i64,
    pub value: f64,
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl ExactValue {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("exact value needs a nonzero denominator"));
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd_i64(num, den).max(1);
        let num = sign * num / g;
        let den = sign * den / g;
        Ok(ExactValue {
            num,
            den,
            value: num as f64 / den as f64,
        })
    }
}

impl std::fmt::Display for ExactValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn check_degree(k: u32) -> Result<()> {
    if !(2..=62).contains(&k) {
        return Err(Error::invalid("degree k must lie in 2..=62"));
    }
    Ok(())
}

/// `s` with `2^s <= k < 2^{s+1}`.
pub fn hua_split(k: u32) -> Result<u32> {
    check_degree(k)?;
    Ok(31 - k.leading_zeros())
}

/// Diagonal exponent `delta_k = (k + 2^s s) / (2^s k)` from iterated
/// squaring (Hua) plus trivial estimates: `int |S_X|^{2^s delta_k ...}`
/// scales like the diagonal up to epsilon. `delta_3 = 5/6`,
/// `delta_4 = 3/4`.
pub fn diagonal_exponent(k: u32) -> Result<ExactValue> {
    let s = hua_split(k)?;
    let pow = 1i64 << s;
    ExactValue::new(k as i64 + pow * s as i64, pow * k as i64)
}

/// The even moment `2 - delta_k` that Hypothesis K* would control:
/// `7/6` for cubes, `5/4` for fourth powers.
pub fn kstar_moment(k: u32) -> Result<ExactValue> {
    let d = diagonal_exponent(k)?;
    ExactValue::new(2 * d.den - d.num, d.den)
}

/// Lambda gate of the Hua/Hoelder route:
/// `1 - (k + 2^s s) / (2^{s+1} k)`. Cubes: `7/12`; fourth powers: `5/8`.
pub fn hua_gate(k: u32) -> Result<ExactValue> {
    let s = hua_split(k)?;
    let pow = 1i64 << (s + 1);
    let num = pow * k as i64 - k as i64 - (pow / 2) * s as i64;
    ExactValue::new(num, pow * k as i64)
}

/// Slope divisor of the Hua/Hoelder route: `k / 2^s + s`, so the route
/// proves boundedness for `1/q < 1/p - (1 - lambda) / (k/2^s + s)`.
/// Cubes: `5/2`, giving slope `2 (1 - lambda) / 5`.
pub fn hua_slope_divisor(k: u32) -> Result<ExactValue> {
    let s = hua_split(k)?;
    let pow = 1i64 << s;
    ExactValue::new(k as i64 + pow * s as i64, pow)
}

/// Crossover `lambda_k^* = (k - 1) / (2k - 1)`: below it, no
/// `p < q` improving bounds are possible at all; above it the improving
/// range opens up.
pub fn crossover_lambda(k: u32) -> Result<ExactValue> {
    check_degree(k)?;
    ExactValue::new(k as i64 - 1, 2 * k as i64 - 1)
}

/// First circle-method gate `lambda_k^{(1)} = 2^{k-1} / (2^{k-1} + 1)`,
/// the balance point of the Weyl-differencing saving
/// `sigma = beta_0 / 2^{k-1}` against the major-arc requirement
/// `lambda > beta_0`. Smallest of the three gates for `k <= 10`.
pub fn lambda_gate_one(k: u32) -> Result<ExactValue> {
    check_degree(k)?;
    let pow = 1i64 << (k - 1);
    ExactValue::new(pow, pow + 1)
}

/// Second circle-method gate
/// `lambda_k^{(2)} = 1 - (1 - (k-1)^{-2}) / (4 (k-1)^2 log(k-1) + 1)`,
/// from the Vinogradov-style mean-value saving. Smallest gate for
/// `11 <= k <= 13`. Vacuously `1` at `k = 2`.
pub fn lambda_gate_two(k: u32) -> Result<f64> {
    check_degree(k)?;
    let km1 = (k - 1) as f64;
    Ok(1.0 - (1.0 - km1.powi(-2)) / (4.0 * km1 * km1 * km1.ln() + 1.0))
}

/// Third circle-method gate, from the refined two-parameter minor-arc
/// saving: `1 - min(1/k, sigma^{(3)}_k)`. The published form of this
/// gate is asymptotic (`1 - 1/((3/2 + o(1)) k^2 log k)`) with no
/// explicit constant, so the value returned here is a numeric guide
/// computed from the same saving, not a proved constant; callers must
/// treat it as flagged asymptotic. `None` when the refined saving is
/// unavailable.
pub fn lambda_gate_three_asymptotic(k: u32) -> Result<Option<f64>> {
    check_degree(k)?;
    let report = sigma_report(k, 1.0)?;
    Ok(report
        .sigma3
        .map(|s3| 1.0 - s3.min(1.0 / k as f64)))
}

/// Gate of the unconditional circle-method route: the smaller of the
/// two gates with explicit constants. The asymptotic third gate is
/// reported in the catalogue but never used for predicates.
pub fn circle_method_gate(k: u32) -> Result<f64> {
    Ok(lambda_gate_one(k)?.value.min(lambda_gate_two(k)?))
}

/// Exact values of `G~(k)`, the least `s` with
/// `int |S_X|^s << X^{s - k + eps}`, where known.
pub fn g_tilde_exact(k: u32) -> Option<u64> {
    match k {
        3 => Some(8),
        4 => Some(16),
        5 => Some(32),
        6 => Some(56),
        7 => Some(112),
        8 => Some(224),
        9 => Some(393),
        _ => None,
    }
}

/// Asymptotic size `k^2 (log k + log log k)` of `G~(k)`; a guide for
/// `k >= 10` where no exact table entry exists. `None` at `k = 2`
/// (the iterated logarithm is negative there and the quantity is
/// classical and small anyway).
pub fn g_tilde_asymptotic(k: u32) -> Option<f64> {
    if k < 3 {
        return None;
    }
    let kf = k as f64;
    Some(kf * kf * (kf.ln() + kf.ln().ln()))
}

/// Gate of the conditional route: `1 - k / (2 G~(k))`, for `k` with an
/// exact `G~` entry. Cubes: `13/16`.
pub fn kstar_gate(k: u32) -> Result<Option<ExactValue>> {
    check_degree(k)?;
    match g_tilde_exact(k) {
        Some(g) => Ok(Some(ExactValue::new(
            2 * g as i64 - k as i64,
            2 * g as i64,
        )?)),
        None => Ok(None),
    }
}

/// Number of even moments with diagonal-dominated growth used by the
/// small-moment route: `max(2, floor(log k / (4 log log k)))` for
/// `k >= 16`, else `2`. The floor/threshold convention here is a
/// house choice (the source estimate is asymptotic); every `k`
/// representable as `u32` lands on `2`.
pub fn small_moment_cap(k: u32) -> Result<u32> {
    check_degree(k)?;
    if k < 16 {
        return Ok(2);
    }
    let kf = k as f64;
    Ok((kf.ln() / (4.0 * kf.ln().ln())).floor().max(2.0) as u32)
}

/// Which statement about the boundedness region is being tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    /// The full conjectured region (scaling line non-strict, endpoint
    /// conditions strict).
    Conjecture,
    /// Unconditional circle-method route above `min` of the two
    /// explicit lambda gates.
    CircleMethod,
    /// Small even moments route: `lambda > 1/2` and a steeper slope
    /// `(1 - lambda) / s_k`.
    SmallEvenMoments,
    /// Hua/Hoelder route: gate `hua_gate(k)` and slope divisor
    /// `k/2^s + s`.
    HuaHoelder,
    /// Conditional route assuming Hypothesis K*: gate `1 - k/(2 G~)`
    /// and the conjectured slope, strict.
    HypothesisKStar,
}

impl Statement {
    pub const ALL: [Statement; 5] = [
        Statement::Conjecture,
        Statement::CircleMethod,
        Statement::SmallEvenMoments,
        Statement::HuaHoelder,
        Statement::HypothesisKStar,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Statement::Conjecture => "conjecture",
            Statement::CircleMethod => "circle-method",
            Statement::SmallEvenMoments => "small-even-moments",
            Statement::HuaHoelder => "hua-hoelder",
            Statement::HypothesisKStar => "hypothesis-k-star",
        }
    }

    /// True for routes that assume an unproved hypothesis.
    pub fn conditional(self) -> bool {
        matches!(self, Statement::HypothesisKStar)
    }
}

impl std::str::FromStr for Statement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Statement::ALL
            .into_iter()
            .find(|st| st.label() == s)
            .ok_or_else(|| Error::invalid("unknown statement name"))
    }
}

/// A point of the exponent diagram: degree, smoothing order, and the
/// reciprocals `1/p`, `1/q`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionQuery {
    pub k: u32,
    pub lambda: f64,
    pub inv_p: f64,
    pub inv_q: f64,
}

impl RegionQuery {
    pub fn new(k: u32, lambda: f64, inv_p: f64, inv_q: f64) -> Result<Self> {
        check_degree(k)?;
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::invalid("lambda must lie in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&inv_p) || !(0.0..=1.0).contains(&inv_q) {
            return Err(Error::invalid("1/p and 1/q must lie in [0, 1]"));
        }
        if inv_q > inv_p {
            return Err(Error::invalid(
                "need 1/q <= 1/p: mass can only spread out, never concentrate",
            ));
        }
        Ok(RegionQuery {
            k,
            lambda,
            inv_p,
            inv_q,
        })
    }
}

/// One inequality of a region statement, with its signed slack
/// (`margin > 0` means strictly satisfied; `margin = 0` sits on the
/// boundary, which satisfies only non-strict conditions).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionCheck {
    pub label: String,
    pub strict: bool,
    pub margin: f64,
    pub satisfied: bool,
}

fn cond(label: impl Into<String>, strict: bool, margin: f64) -> ConditionCheck {
    ConditionCheck {
        label: label.into(),
        strict,
        margin,
        satisfied: if strict { margin > 0.0 } else { margin >= 0.0 },
    }
}

/// Verdict of one statement at one query point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionReport {
    pub statement: Statement,
    pub query: RegionQuery,
    pub holds: bool,
    /// True when the verdict assumes an unproved hypothesis.
    pub conditional: bool,
    pub conditions: Vec<ConditionCheck>,
}

/// Evaluate a region statement at a query point. Every statement
/// imposes the endpoint conditions `1/q < lambda` and
/// `1/p > 1 - lambda` (strict); the scaling-line and gate conditions
/// vary by route.
pub fn region_predicate(statement: Statement, query: &RegionQuery) -> Result<RegionReport> {
    let RegionQuery {
        k,
        lambda,
        inv_p,
        inv_q,
    } = *query;
    check_degree(k)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::invalid("lambda must lie in (0, 1)"));
    }
    if !(0.0..=1.0).contains(&inv_p) || !(0.0..=1.0).contains(&inv_q) {
        return Err(Error::invalid("1/p and 1/q must lie in [0, 1]"));
    }
    if inv_q > inv_p {
        return Err(Error::invalid("need 1/q <= 1/p"));
    }
    let kf = k as f64;
    let mut conditions = Vec::new();

    match statement {
        Statement::Conjecture => {
            conditions.push(cond(
                "1/q <= 1/p - (1-lambda)/k",
                false,
                inv_p - (1.0 - lambda) / kf - inv_q,
            ));
        }
        Statement::CircleMethod => {
            let gate = circle_method_gate(k)?;
            conditions.push(cond(
                format!("lambda > circle gate {}", crate::util::g15(gate)),
                true,
                lambda - gate,
            ));
            conditions.push(cond(
                "1/q <= 1/p - (1-lambda)/k",
                false,
                inv_p - (1.0 - lambda) / kf - inv_q,
            ));
        }
        Statement::SmallEvenMoments => {
            let s_cap = small_moment_cap(k)? as f64;
            conditions.push(cond("lambda > 1/2", true, lambda - 0.5));
            conditions.push(cond(
                format!("1/q < 1/p - (1-lambda)/{s_cap}"),
                true,
                inv_p - (1.0 - lambda) / s_cap - inv_q,
            ));
        }
        Statement::HuaHoelder => {
            let gate = hua_gate(k)?;
            let divisor = hua_slope_divisor(k)?;
            conditions.push(cond(
                format!("lambda > {gate}"),
                true,
                lambda - gate.value,
            ));
            conditions.push(cond(
                format!("1/q < 1/p - (1-lambda)/({divisor})"),
                true,
                inv_p - (1.0 - lambda) / divisor.value - inv_q,
            ));
        }
        Statement::HypothesisKStar => {
            let gate = kstar_gate(k)?.ok_or_else(|| {
                Error::invalid(
                    "no exact moment table entry for this degree; \
                     the conditional route only evaluates for 3 <= k <= 9",
                )
            })?;
            conditions.push(cond(
                format!("lambda > {gate}"),
                true,
                lambda - gate.value,
            ));
            conditions.push(cond(
                "1/q < 1/p - (1-lambda)/k",
                true,
                inv_p - (1.0 - lambda) / kf - inv_q,
            ));
        }
    }

    conditions.push(cond("1/q < lambda", true, lambda - inv_q));
    conditions.push(cond("1/p > 1 - lambda", true, inv_p - (1.0 - lambda)));

    let holds = conditions.iter().all(|c| c.satisfied);
    Ok(RegionReport {
        statement,
        query: *query,
        holds,
        conditional: statement.conditional(),
        conditions,
    })
}

/// All lambda thresholds for one degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThresholdRow {
    pub k: u32,
    /// Gate of the Weyl-differencing branch (exact).
    pub lambda_one: ExactValue,
    /// Gate of the mean-value branch (closed form, float).
    pub lambda_two: f64,
    /// Numeric guide for the refined branch; asymptotic, no explicit
    /// constant is claimed.
    pub lambda_three: Option<f64>,
    /// Marker: `lambda_three` is an asymptotic guide only.
    pub lambda_three_asymptotic: bool,
    /// `min(lambda_one, lambda_two)`: the unconditional gate.
    pub circle_gate: f64,
    /// `(k-1)/(2k-1)`: below this no improving bounds exist.
    pub crossover: ExactValue,
    /// Hua split `s` with `2^s <= k < 2^{s+1}`.
    pub hua_split: u32,
    /// Diagonal exponent `delta_k`.
    pub diagonal_exponent: ExactValue,
    /// Even moment `2 - delta_k` controlled under Hypothesis K*.
    pub kstar_moment: ExactValue,
    /// Gate of the Hua/Hoelder route.
    pub hua_gate: ExactValue,
    /// Slope divisor `k/2^s + s` of the Hua/Hoelder route.
    pub hua_slope_divisor: ExactValue,
    /// Moment count of the small-moment route.
    pub small_moment_cap: u32,
    /// Marker: the cap's floor convention is a house choice.
    pub small_moment_cap_heuristic: bool,
    /// Exact `G~(k)` where tabulated.
    pub g_tilde: Option<u64>,
    /// Asymptotic size of `G~(k)`.
    pub g_tilde_asymptotic: Option<f64>,
    /// Gate `1 - k/(2 G~(k))` of the conditional route, where exact.
    pub kstar_gate: Option<ExactValue>,
}

/// Largest degree the catalogue will tabulate in one call (the refined
/// gate's search window grows like `k^3 log k`).
pub const CATALOGUE_MAX_DEGREE: u32 = 40;

/// Tabulate every threshold for `2 <= k <= k_max`.
pub fn threshold_catalogue(k_max: u32) -> Result<Vec<ThresholdRow>> {
    if k_max < 2 {
        return Err(Error::invalid("catalogue needs k_max >= 2"));
    }
    if k_max > CATALOGUE_MAX_DEGREE {
        return Err(Error::BudgetExceeded {
            what: "catalogue degree",
            required: k_max as u128,
            limit: CATALOGUE_MAX_DEGREE as u128,
        });
    }
    (2..=k_max)
        .map(|k| {
            Ok(ThresholdRow {
                k,
                lambda_one: lambda_gate_one(k)?,
                lambda_two: lambda_gate_two(k)?,
                lambda_three: lambda_gate_three_asymptotic(k)?,
                lambda_three_asymptotic: true,
                circle_gate: circle_method_gate(k)?,
                crossover: crossover_lambda(k)?,
                hua_split: hua_split(k)?,
                diagonal_exponent: diagonal_exponent(k)?,
                kstar_moment: kstar_moment(k)?,
                hua_gate: hua_gate(k)?,
                hua_slope_divisor: hua_slope_divisor(k)?,
                small_moment_cap: small_moment_cap(k)?,
                small_moment_cap_heuristic: true,
                g_tilde: g_tilde_exact(k),
                g_tilde_asymptotic: g_tilde_asymptotic(k),
                kstar_gate: kstar_gate(k)?,
            })
        })
        .collect()
}

/// One grid point of a region sweep: which statements hold there.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub inv_p: f64,
    pub inv_q: f64,
    pub lambda: f64,
    pub conjecture: bool,
    pub circle_method: bool,
    pub small_even_moments: bool,
    pub hua_hoelder: bool,
    /// `None` when the conditional route has no exact gate for `k`.
    pub hypothesis_k_star: Option<bool>,
}

/// Sweep the exponent square `[0, 1]^2` on a `grid x grid` lattice of
/// points `i / (grid - 1)` and record which statements hold at each.
/// Points with `1/q > 1/p` lie outside every region (mass cannot
/// concentrate) and get all-false rows, keeping the map plot-ready.
pub fn region_sweep(k: u32, lambda: f64, grid: u32) -> Result<Vec<SweepRow>> {
    check_degree(k)?;
    if !(2..=513).contains(&grid) {
        return Err(Error::invalid("sweep needs a grid of 2..=513 points per axis"));
    }
    let kstar_available = g_tilde_exact(k).is_some();
    let coord = |i: u32| i as f64 / (grid - 1) as f64;
    let mut rows = Vec::with_capacity((grid * grid) as usize);
    for ip in 0..grid {
        for iq in 0..grid {
            let (inv_p, inv_q) = (coord(ip), coord(iq));
            if inv_q > inv_p {
                rows.push(SweepRow {
                    inv_p,
                    inv_q,
                    lambda,
                    conjecture: false,
                    circle_method: false,
                    small_even_moments: false,
                    hua_hoelder: false,
                    hypothesis_k_star: if kstar_available { Some(false) } else { None },
                });
                continue;
            }
            let query = RegionQuery::new(k, lambda, inv_p, inv_q)?;
            rows.push(SweepRow {
                inv_p,
                inv_q,
                lambda,
                conjecture: region_predicate(Statement::Conjecture, &query)?.holds,
                circle_method: region_predicate(Statement::CircleMethod, &query)?.holds,
                small_even_moments: region_predicate(Statement::SmallEvenMoments, &query)?
                    .holds,
                hua_hoelder: region_predicate(Statement::HuaHoelder, &query)?.holds,
                hypothesis_k_star: if kstar_available {
                    Some(region_predicate(Statement::HypothesisKStar, &query)?.holds)
                } else {
                    None
                },
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ev(num: i64, den: i64) -> ExactValue {
        ExactValue::new(num, den).unwrap()
    }

    #[test]
    fn exact_value_reduces_and_prints() {
        assert_eq!(ev(4, 8), ev(1, 2));
        assert_eq!(ev(-3, -6), ev(1, 2));
        assert_eq!(ev(3, -6).num, -1);
        assert_eq!(ev(3, -6).den, 2);
        assert_eq!(ev(7, 12).to_string(), "7/12");
        assert_eq!(ev(5, 5).to_string(), "1");
        assert_abs_diff_eq!(ev(4, 5).value, 0.8, epsilon = 0.0);
        assert!(ExactValue::new(1, 0).is_err());
    }

    #[test]
    fn cubic_constants_are_exact() {
        assert_eq!(lambda_gate_one(3).unwrap(), ev(4, 5));
        assert_eq!(crossover_lambda(3).unwrap(), ev(2, 5));
        assert_eq!(hua_split(3).unwrap(), 1);
        assert_eq!(diagonal_exponent(3).unwrap(), ev(5, 6));
        assert_eq!(kstar_moment(3).unwrap(), ev(7, 6));
        assert_eq!(hua_gate(3).unwrap(), ev(7, 12));
        assert_eq!(hua_slope_divisor(3).unwrap(), ev(5, 2));
        assert_eq!(kstar_gate(3).unwrap(), Some(ev(13, 16)));
        assert_eq!(g_tilde_exact(3), Some(8));
    }

    #[test]
    fn quartic_and_quadratic_constants_are_exact() {
        assert_eq!(lambda_gate_one(2).unwrap(), ev(2, 3));
        assert_eq!(crossover_lambda(2).unwrap(), ev(1, 3));
        assert_eq!(diagonal_exponent(2).unwrap(), ev(1, 1));
        assert_eq!(hua_gate(2).unwrap(), ev(1, 2));
        assert_eq!(kstar_gate(2).unwrap(), None);
        assert_eq!(g_tilde_asymptotic(2), None);

        assert_eq!(lambda_gate_one(4).unwrap(), ev(8, 9));
        assert_eq!(hua_split(4).unwrap(), 2);
        assert_eq!(diagonal_exponent(4).unwrap(), ev(3, 4));
        assert_eq!(kstar_moment(4).unwrap(), ev(5, 4));
        assert_eq!(hua_gate(4).unwrap(), ev(5, 8));
        assert_eq!(hua_slope_divisor(4).unwrap(), ev(3, 1));
        assert_eq!(kstar_gate(4).unwrap(), Some(ev(7, 8)));
        assert_eq!(g_tilde_exact(9), Some(393));
        assert_eq!(g_tilde_exact(10), None);
    }

    #[test]
    fn gates_are_monotone_and_ordered() {
        // lambda_one increases with k.
        for k in 2..=20 {
            assert!(lambda_gate_one(k + 1).unwrap().value > lambda_gate_one(k).unwrap().value);
        }
        // Conditional gates increase along the exact table.
        let gates: Vec<f64> = (3..=9)
            .map(|k| kstar_gate(k).unwrap().unwrap().value)
            .collect();
        for w in gates.windows(2) {
            assert!(w[1] > w[0]);
        }
        // Crossover sits below every proof gate.
        for k in 2..=9 {
            let cross = crossover_lambda(k).unwrap().value;
            assert!(cross < hua_gate(k).unwrap().value);
            assert!(cross < circle_method_gate(k).unwrap());
        }
    }

    #[test]
    fn circle_gate_branch_pattern_matches_published_ranges() {
        // The differencing branch wins up to k = 10, the mean-value
        // branch from k = 11 onward (among the two explicit gates).
        let rows = threshold_catalogue(13).unwrap();
        for row in &rows {
            let expect = if row.k <= 10 {
                row.lambda_one.value
            } else {
                row.lambda_two
            };
            assert_abs_diff_eq!(row.circle_gate, expect, epsilon = 0.0);
            assert!(row.circle_gate < 1.0);
        }
    }

    #[test]
    fn refined_gate_is_marked_and_eventually_smallest() {
        let rows = threshold_catalogue(14).unwrap();
        for row in &rows {
            assert!(row.lambda_three_asymptotic);
            let l3 = row.lambda_three.expect("refined gate available");
            assert!(l3 > 0.9 && l3 < 1.0, "k={}: {l3}", row.k);
        }
        // In the regime where the published comparison puts the
        // refined branch ahead, our numeric guide agrees.
        let last = rows.last().unwrap();
        assert_eq!(last.k, 14);
        assert!(last.lambda_three.unwrap() < last.lambda_two);
        assert!(last.lambda_three.unwrap() < last.lambda_one.value);
    }

    #[test]
    fn catalogue_shape_and_bounds() {
        assert!(threshold_catalogue(1).is_err());
        assert!(threshold_catalogue(CATALOGUE_MAX_DEGREE + 1).is_err());
        let rows = threshold_catalogue(9).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0].k, 2);
        assert_eq!(rows[7].k, 9);
        for row in &rows {
            assert_eq!(row.small_moment_cap, 2);
            assert!(row.small_moment_cap_heuristic);
            assert_eq!(row.g_tilde.is_some(), (3..=9).contains(&row.k));
            assert_eq!(row.kstar_gate.is_some(), row.g_tilde.is_some());
        }
        let json = serde_json::to_value(&rows[1]).unwrap();
        assert_eq!(json["k"], 3);
        assert_eq!(json["lambdaOne"]["num"], 4);
        assert_eq!(json["lambdaOne"]["den"], 5);
        assert_eq!(json["huaGate"]["num"], 7);
        assert_eq!(json["gTilde"], 8);
        assert_eq!(json["lambdaThreeAsymptotic"], true);
    }

    #[test]
    fn circle_method_predicate_matches_cubic_gate() {
        let q = RegionQuery::new(3, 0.85, 0.9, 0.8).unwrap();
        let rep = region_predicate(Statement::CircleMethod, &q).unwrap();
        assert!(rep.holds);
        assert!(!rep.conditional);
        // Below the 4/5 gate the same exponents fail, and the gate
        // condition is the one reported unsatisfied.
        let q = RegionQuery::new(3, 0.79, 0.9, 0.7).unwrap();
        let rep = region_predicate(Statement::CircleMethod, &q).unwrap();
        assert!(!rep.holds);
        assert!(!rep.conditions[0].satisfied);
        assert!(rep.conditions[1..].iter().all(|c| c.satisfied));
    }

    #[test]
    fn scaling_line_closure_differs_by_route() {
        // Exactly on the scaling line (all quantities dyadic):
        // 1/q = 1/p - (1-lambda)/k with k=2, lambda=3/4.
        let q = RegionQuery::new(2, 0.75, 0.625, 0.5).unwrap();
        let circle = region_predicate(Statement::CircleMethod, &q).unwrap();
        assert!(circle.holds);
        let line = circle
            .conditions
            .iter()
            .find(|c| c.label.starts_with("1/q"))
            .unwrap();
        assert_eq!(line.margin, 0.0);
        // The small-moment route has the same slope divisor here
        // (s_cap = k = 2) but requires strict inequality: fails.
        let small = region_predicate(Statement::SmallEvenMoments, &q).unwrap();
        assert!(!small.holds);
    }

    #[test]
    fn hua_route_uses_steeper_slope() {
        // k=3, lambda=0.9: slope divisor 5/2, so need
        // 1/q < 1/p - 0.04.
        let inside = RegionQuery::new(3, 0.9, 0.8, 0.75).unwrap();
        assert!(region_predicate(Statement::HuaHoelder, &inside).unwrap().holds);
        let outside = RegionQuery::new(3, 0.9, 0.8, 0.765).unwrap();
        assert!(!region_predicate(Statement::HuaHoelder, &outside).unwrap().holds);
        // Below the 7/12 gate nothing holds.
        let low = RegionQuery::new(3, 0.58, 0.8, 0.5).unwrap();
        assert!(!region_predicate(Statement::HuaHoelder, &low).unwrap().holds);
    }

    #[test]
    fn conditional_route_is_flagged_and_gated() {
        let q = RegionQuery::new(3, 0.82, 0.9, 0.8).unwrap();
        let rep = region_predicate(Statement::HypothesisKStar, &q).unwrap();
        assert!(rep.holds);
        assert!(rep.conditional);
        // Just below 13/16 the gate trips.
        let q = RegionQuery::new(3, 0.8120, 0.9, 0.8).unwrap();
        assert!(!region_predicate(Statement::HypothesisKStar, &q).unwrap().holds);
        // Degrees without an exact moment table entry are an error.
        let q = RegionQuery::new(10, 0.9, 0.9, 0.8).unwrap();
        assert!(region_predicate(Statement::HypothesisKStar, &q).is_err());
    }

    #[test]
    fn endpoint_conditions_are_strict() {
        // 1/q = lambda exactly: fails every statement.
        let q = RegionQuery::new(3, 0.75, 1.0, 0.75).unwrap();
        for st in Statement::ALL {
            let rep = region_predicate(st, &q).unwrap();
            assert!(!rep.holds, "{st:?} should fail at 1/q = lambda");
        }
        // 1/p = 1 - lambda exactly: fails too.
        let q = RegionQuery::new(3, 0.75, 0.25, 0.0).unwrap();
        for st in Statement::ALL {
            assert!(!region_predicate(st, &q).unwrap().holds);
        }
    }

    #[test]
    fn every_route_lands_inside_the_conjecture_region() {
        // Deterministic sweep: whenever a proof route holds — with its
        // scaling-line condition tightened to strict, so closed-line
        // routes don't ride the boundary — the conjectured region
        // holds too. The slope divisors of all routes are at most k,
        // so positive slack on a route's line forces positive slack on
        // the conjectured line.
        for &k in &[2u32, 3, 4, 5, 9] {
            for il in 1..10 {
                let lambda = 0.5 + 0.05 * il as f64;
                for ip in 0..=16 {
                    let inv_p = ip as f64 / 16.0;
                    for iq in 0..=ip {
                        let inv_q = iq as f64 / 16.0;
                        let q = RegionQuery::new(k, lambda, inv_p, inv_q).unwrap();
                        let conj = region_predicate(Statement::Conjecture, &q).unwrap();
                        for st in [
                            Statement::CircleMethod,
                            Statement::SmallEvenMoments,
                            Statement::HuaHoelder,
                            Statement::HypothesisKStar,
                        ] {
                            if st == Statement::HypothesisKStar && g_tilde_exact(k).is_none() {
                                continue;
                            }
                            let rep = region_predicate(st, &q).unwrap();
                            let line_strict = rep
                                .conditions
                                .iter()
                                .find(|c| c.label.contains("1/p -"))
                                .map(|c| c.margin > 0.0)
                                .unwrap_or(false);
                            if rep.holds && line_strict {
                                assert!(
                                    conj.holds,
                                    "{st:?} holds strictly but the conjecture fails at \
                                     k={k} lambda={lambda} 1/p={inv_p} 1/q={inv_q}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn query_validation_rejects_bad_inputs() {
        assert!(RegionQuery::new(3, 0.9, 0.5, 0.6).is_err()); // 1/q > 1/p
        assert!(RegionQuery::new(3, 1.0, 0.9, 0.5).is_err());
        assert!(RegionQuery::new(3, 0.0, 0.9, 0.5).is_err());
        assert!(RegionQuery::new(3, 0.9, 1.5, 0.5).is_err());
        assert!(RegionQuery::new(1, 0.9, 0.9, 0.5).is_err());
        assert!(RegionQuery::new(63, 0.9, 0.9, 0.5).is_err());
    }

    #[test]
    fn sweep_covers_the_full_square_grid() {
        let rows = region_sweep(3, 0.85, 9).unwrap();
        assert_eq!(rows.len(), 81);
        // Points above the diagonal are outside every region.
        assert!(rows
            .iter()
            .filter(|r| r.inv_q > r.inv_p)
            .all(|r| !r.conjecture && !r.circle_method));
        assert!(rows.iter().any(|r| r.circle_method));
        assert!(rows.iter().all(|r| !r.circle_method || r.conjecture));
        assert!(rows.iter().all(|r| r.hypothesis_k_star.is_some()));
        // Grid coordinates hit the corners exactly.
        assert_eq!(rows[0].inv_p, 0.0);
        assert_eq!(rows.last().unwrap().inv_p, 1.0);
        assert_eq!(rows.last().unwrap().inv_q, 1.0);
        // k = 10 has no exact conditional gate: column is null.
        let rows = region_sweep(10, 0.999, 4).unwrap();
        assert!(rows.iter().all(|r| r.hypothesis_k_star.is_none()));
        let json = serde_json::to_value(&rows[0]).unwrap();
        assert_eq!(json["hypothesisKStar"], serde_json::Value::Null);
        assert!(json.get("invP").is_some());
        assert!(json.get("invQ").is_some());
    }

    #[test]
    fn statement_names_round_trip() {
        for st in Statement::ALL {
            let parsed: Statement = st.label().parse().unwrap();
            assert_eq!(parsed, st);
            let json = serde_json::to_string(&st).unwrap();
            assert_eq!(json, format!("\"{}\"", st.label()));
        }
        assert!("maximal-function".parse::<Statement>().is_err());
    }
}
