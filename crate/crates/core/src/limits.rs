//! Closed forms and limit constants for the standard families.
//!
//! The canopy constants come from series over `m_0 = 1`,
//! `m_{k+1} = (1 + m_k)^2`. They are evaluated in `f64` through the
//! reciprocals `1/m_{k+1} = (u / (1 + u))^2` with `u = 1/m_k`, so nothing
//! overflows, and truncated where an explicit tail bound drops below the
//! target. Since `m_k >= 2^(2^(k-1))`, a handful of terms suffice.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::ParamError;
use crate::families::{self, Caterpillar};
use crate::subtree::{analyze, BigRatio};

/// A named constant with a certified error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyLimit {
    pub name: String,
    pub value: f64,
    /// Bound on `|value - true limit|`; zero when `exact` is set.
    pub error_bound: f64,
    pub exact: Option<Ratio<i64>>,
}

impl FamilyLimit {
    fn rational(name: impl Into<String>, num: i64, den: i64) -> Self {
        let r = Ratio::new(num, den);
        FamilyLimit { name: name.into(), value: num as f64 / den as f64, error_bound: 0.0, exact: Some(r) }
    }

    fn approx(name: impl Into<String>, value: f64, error_bound: f64) -> Self {
        FamilyLimit { name: name.into(), value, error_bound, exact: None }
    }
}

/// Allowance for accumulated rounding in a short `f64` series.
const ROUNDING: f64 = 1e-15;

/// `m_0, ..., m_{count-1}`.
pub fn canopy_m_sequence(count: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(count);
    let mut m = BigUint::one();
    for _ in 0..count {
        let next = (&m + 1u32).pow(2);
        out.push(std::mem::replace(&mut m, next));
    }
    out
}

/// `1/m_k` for `k < count`, computed without forming `m_k`.
fn inverse_m(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut u = 1.0f64;
    for _ in 0..count {
        out.push(u);
        let s = u / (1.0 + u);
        u = s * s;
    }
    out
}

/// `ln b = sum_k 2^-k ln(1 + 1/m_k)` over `k <= depth`, with the tail bound
/// `sum_{k > depth} 2^-k / m_k <= 2^-depth / m_{depth+1}`.
fn canopy_ln_b(depth: usize) -> (f64, f64) {
    let inv = inverse_m(depth + 2);
    let mut sum = 0.0;
    for k in (0..=depth).rev() {
        sum += inv[k].ln_1p() / (1u64 << k) as f64;
    }
    let tail = inv[depth + 1] / (1u64 << depth) as f64;
    (sum, tail)
}

const CANOPY_DEPTH: usize = 6;

/// `b` with its series cut after `depth + 1` terms.
pub fn canopy_b_with_depth(depth: usize) -> FamilyLimit {
    let (ln_b, tail) = canopy_ln_b(depth);
    let b = ln_b.exp();
    // exp is 3-Lipschitz near ln b, plus rounding in the sum and in exp.
    FamilyLimit::approx("canopy b", b, 3.0 * (tail + ROUNDING) + ROUNDING)
}

pub fn canopy_b() -> FamilyLimit {
    canopy_b_with_depth(CANOPY_DEPTH)
}

/// Limit of the subtree entropy of the Bethe trees, `(ln b) / 2`.
pub fn canopy_entropy_limit() -> FamilyLimit {
    let (ln_b, tail) = canopy_ln_b(CANOPY_DEPTH);
    FamilyLimit::approx("canopy entropy", ln_b / 2.0, (tail + ROUNDING) / 2.0)
}

/// `sum_{k=0}^{K} 2^{-k-1} prod_{i>=k} m_i / (m_i + 1)`, together with the
/// bound on what the terms beyond `K` and the truncated products can add.
pub fn canopy_density_partial(k_max: usize) -> (f64, f64) {
    // ln(1 + 1/m_i) <= 1/m_i, and the reciprocals underflow to 0 within a
    // few terms; the product tail beyond `i` is then below 1e-300.
    let depth = k_max.max(CANOPY_DEPTH) + 2;
    let inv = inverse_m(depth + 1);
    let mut ln_tail = vec![0.0f64; depth + 1];
    for i in (0..depth).rev() {
        ln_tail[i] = ln_tail[i + 1] - inv[i].ln_1p();
    }
    let product_cut = inv[depth];
    let mut sum = 0.0;
    for k in (0..=k_max).rev() {
        sum += ln_tail[k].exp() / 2f64.powi(k as i32 + 1);
    }
    let k_tail = 2f64.powi(-(k_max as i32) - 1);
    (sum, k_tail + product_cut + ROUNDING)
}

const DENSITY_TERMS: usize = 52;

/// Limit of the subtree density of the Bethe trees, `E(q)` on the canopy
/// tree.
pub fn canopy_density_limit() -> FamilyLimit {
    let (value, bound) = canopy_density_partial(DENSITY_TERMS);
    FamilyLimit::approx("canopy density", value, bound)
}

/// Exact `N` and `R` of a Bethe tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetheForms {
    pub n: BigUint,
    pub r: BigUint,
    /// `r_0..r_{n-1}`: total size of the subtrees of a height-`k` complete
    /// binary tree that contain its root.
    pub rooted_sizes: Vec<BigUint>,
}

/// Closed forms for `N` and `R` of `bethe(n)`. Level `d >= 1` has
/// `3 * 2^(d-1)` vertices, each heading a complete binary tree of height
/// `n - d`; a subtree not containing the centre is counted at its top vertex.
pub fn bethe_closed_forms(n: usize) -> Result<BetheForms, ParamError> {
    if n < 1 {
        return Err(ParamError::BelowMinimum { name: "n", value: n as i64, min: 1 });
    }
    let m = canopy_m_sequence(n);
    let mut r = vec![BigUint::one()];
    for k in 1..n {
        let s = &m[k - 1] + 1u32;
        let next = BigUint::from(2u32) * &r[k - 1] * &s + &s * &s;
        r.push(next);
    }
    let top = &m[n - 1] + 1u32;
    let mut count = top.pow(3);
    let mut size = BigUint::from(3u32) * &r[n - 1] * &top * &top + top.pow(3);
    for k in 0..n {
        let copies = BigUint::from(3u32) << (n - k - 1);
        count += &copies * &m[k];
        size += &copies * &r[k];
    }
    Ok(BetheForms { n: count, r: size, rooted_sizes: r })
}

/// Subtree entropy (base `e`, base 2) and density limits of the combs.
pub fn comb_limits() -> [FamilyLimit; 3] {
    let ln2 = std::f64::consts::LN_2;
    [
        FamilyLimit::approx("comb entropy_e", ln2 / 2.0, f64::EPSILON),
        FamilyLimit::rational("comb entropy_2", 1, 2),
        FamilyLimit::rational("comb density", 3, 4),
    ]
}

fn to_biguint(x: BigInt) -> BigUint {
    x.to_biguint().expect("closed form is nonnegative")
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

/// `N(C_n) = 2^{n+2} - n - 4` and `R(C_n) = 3(n-2) 2^{n+1} + 4(n+3)`.
pub fn comb_closed_forms(n: usize) -> Result<(BigUint, BigUint), ParamError> {
    if n < 1 {
        return Err(ParamError::BelowMinimum { name: "n", value: n as i64, min: 1 });
    }
    let ni = BigInt::from(n);
    let count = pow2(n + 2) - &ni - 4;
    let size = BigInt::from(3) * (&ni - 2) * pow2(n + 1) + 4 * (&ni + 3);
    Ok((to_biguint(count), to_biguint(size)))
}

/// Density limit of double brooms whose `lambda` leaves per end grow like
/// `x log2(p)` in the handle length `p`.
pub fn double_broom_density_limit(x: f64) -> Result<f64, ParamError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(ParamError::Invalid(format!("x must be positive and finite, got {x}")));
    }
    Ok((x * x + 6.0 * x + 6.0) / (3.0 * x * x + 12.0 * x + 6.0))
}

/// `N` and `R` of `comb_star(n, m)`.
pub fn comb_star_closed_forms(n: usize, m: usize) -> Result<(BigUint, BigUint), ParamError> {
    if n < 1 {
        return Err(ParamError::BelowMinimum { name: "n", value: n as i64, min: 1 });
    }
    if m < 1 {
        return Err(ParamError::BelowMinimum { name: "m", value: m as i64, min: 1 });
    }
    let (ni, mi) = (BigInt::from(n), BigInt::from(m));
    let count = BigInt::from(3) * pow2(n + m) + BigInt::from(3) * pow2(n + 1) - pow2(m) + &mi - &ni - 5;
    let size = pow2(m + n - 1) * (BigInt::from(9) * &ni + BigInt::from(3) * &mi + 2)
        + (BigInt::from(9) * &ni - 13) * pow2(n)
        - pow2(m - 1) * (&mi - 4)
        + (BigInt::from(4) * &ni + &mi + 14);
    Ok((to_biguint(count), to_biguint(size)))
}

/// Base-2 entropy and density limits of `comb_star(n, m)` as `m / n -> x`.
pub fn comb_star_limits(x: f64) -> Result<(f64, f64), ParamError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(ParamError::Invalid(format!("x must be positive and finite, got {x}")));
    }
    Ok(((1.0 + x) / (2.0 + x), (3.0 + x) / (4.0 + 2.0 * x)))
}

/// A caterpillar aimed at containment probability `q` for its first spine
/// vertex, with predicted limits.
#[derive(Debug, Clone)]
pub struct CaterpillarTarget {
    pub caterpillar: Caterpillar,
    /// Exponents `c_1 < c_2 < ...` with `2/q - 2 ~ sum 2^{-c_i}`.
    pub exponents: Vec<usize>,
    pub gaps: Vec<usize>,
    pub predicted_p_u: f64,
    pub predicted_p_w: f64,
}

/// Builds the caterpillar whose gaps follow the binary expansion of
/// `x = 2/q - 2` (first `terms` ones), ending in `end_leaves` leaves.
pub fn caterpillar_for_target(q: f64, terms: usize, end_leaves: usize) -> Result<CaterpillarTarget, ParamError> {
    if !(q > 2.0 / 3.0 && q < 1.0) {
        return Err(ParamError::Invalid(format!("q must lie in (2/3, 1), got {q}")));
    }
    if terms < 1 {
        return Err(ParamError::BelowMinimum { name: "t", value: terms as i64, min: 1 });
    }
    let mut x = 2.0 / q - 2.0;
    let mut exponents = Vec::new();
    let mut c = 0usize;
    while exponents.len() < terms && x > 0.0 && c < 1000 {
        c += 1;
        let bit = 0.5f64.powi(c as i32);
        if x >= bit {
            x -= bit;
            exponents.push(c);
        }
    }
    let gaps: Vec<usize> =
        exponents.iter().enumerate().map(|(i, &c)| if i == 0 { c } else { c - exponents[i - 1] }).collect();
    let s: f64 = exponents.iter().map(|&c| 0.5f64.powi(c as i32)).sum();
    let predicted_p_u = 2.0 / (2.0 + s);
    let caterpillar = families::caterpillar(&gaps, end_leaves)?;
    Ok(CaterpillarTarget { caterpillar, exponents, gaps, predicted_p_u, predicted_p_w: predicted_p_u / 2.0 })
}

/// One handle vertex of a broom.
#[derive(Debug, Clone, PartialEq)]
pub struct BroomPoint {
    /// Distance from the junction.
    pub distance: usize,
    pub exact: BigRatio,
    /// `(p - d) / p`, the value as the number of leaves grows.
    pub predicted: f64,
}

/// Exact `p(T, v)` along the handle of `broom(p, k)`.
pub fn broom_p_profile(p: usize, k: usize) -> Result<Vec<BroomPoint>, ParamError> {
    let t = families::broom(p, k)?;
    let s = analyze(&t);
    Ok((0..p).map(|d| BroomPoint { distance: d, exact: s.p_prob(d), predicted: (p - d) as f64 / p as f64 }).collect())
}

/// Converts an exact ratio to `f64` through its leading bits.
pub fn ratio_to_f64(r: &BigRatio) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let shift = (r.numer().bits() as i64 - r.denom().bits() as i64) - 60;
    let (num, den) = if shift >= 0 {
        (r.numer().clone(), r.denom() << shift as u64)
    } else {
        (r.numer() << (-shift) as u64, r.denom().clone())
    };
    let q = (num / den).to_f64().unwrap();
    q * 2f64.powi(shift as i32)
}

/// Rows printed by `subtrees limits`.
pub fn limit_table() -> Vec<FamilyLimit> {
    let mut rows = vec![canopy_b(), canopy_entropy_limit(), canopy_density_limit()];
    rows.extend(comb_limits());
    for x in [0.5, 1.0, 2.0] {
        let (h, d) = comb_star_limits(x).unwrap();
        rows.push(FamilyLimit::approx(format!("comb-star entropy_2 x={x}"), h, f64::EPSILON));
        rows.push(FamilyLimit::approx(format!("comb-star density x={x}"), d, f64::EPSILON));
    }
    for x in [0.5, 1.0, 2.0] {
        let d = double_broom_density_limit(x).unwrap();
        rows.push(FamilyLimit::approx(format!("double-broom density x={x}"), d, f64::EPSILON));
    }
    rows
}
