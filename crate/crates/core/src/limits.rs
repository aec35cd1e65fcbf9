//! Closed-form and series evaluations of the limiting quantities.
//!
//! * counts of good reduced common edge graphs for a given class key,
//! * the termwise limit `e^-6 / (sum k)! * prod C(c-r-1, k-r-1) 2^(k-c)`
//!   of `t_n / n^3` for a fixed good class,
//! * the summed limits `e^3`, `1`, `e^-3` (full sum, `k_AC = 0`,
//!   `k_AB = k_AC = 0`),
//! * the exact upper bound for `T_n(reduced graph, c)`,
//! * succession-free permutation counts (no `|a_i - a_{i+1}| = 1`) by
//!   inclusion-exclusion over glued blocks, with limit `e^-2`,
//! * moments `e^{k(k-1)/2}` and the associated tail bounds,
//! * moment integrals of distributions built from 1-periodic measures
//!   through a Gaussian factor, which reproduce `e^{k(k-1)/2}` for every
//!   integer `k`.
//!
//! Combinatorial arithmetic is exact (big integers); floats appear at the
//! evaluation boundary.

use crate::ceg::CegStats;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use crate::oracle::{factorial_big, factorial_u64};

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    for i in 0..k {
        num *= n - i;
        num /= i + 1; // divides exactly: prefix products are binomials
    }
    num
}

/// Ways to place `c` indistinguishable balls into `l` bins, each bin
/// nonempty: `C(c-1, l-1)`, with `1` when `l = c = 0` and `0` when `l = 0`
/// but `c > 0`.
pub fn occupied_compositions(c: u64, l: u64) -> BigUint {
    if l == 0 {
        return if c == 0 { BigUint::one() } else { BigUint::zero() };
    }
    if c < l {
        return BigUint::zero();
    }
    binomial_big(c - 1, l - 1)
}

fn multinomial3(a: u64, b: u64, c: u64) -> BigUint {
    let mut r = factorial_big(a + b + c);
    r /= factorial_big(a);
    r /= factorial_big(b);
    r /= factorial_big(c);
    r
}

/// Class key of a good reduced common edge graph: per pair label, the
/// number of edges `k` and the number of those traversed oppositely `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodClassKey {
    pub k_ab: u32,
    pub k_ac: u32,
    pub k_bc: u32,
    pub r_ab: u32,
    pub r_ac: u32,
    pub r_bc: u32,
}

impl GoodClassKey {
    pub fn new(k: (u32, u32, u32), r: (u32, u32, u32)) -> Result<GoodClassKey> {
        let key = GoodClassKey {
            k_ab: k.0,
            k_ac: k.1,
            k_bc: k.2,
            r_ab: r.0,
            r_ac: r.1,
            r_bc: r.2,
        };
        for (r, k) in [
            (key.r_ab, key.k_ab),
            (key.r_ac, key.k_ac),
            (key.r_bc, key.k_bc),
        ] {
            if r > k {
                return Err(Error::invalid(format!("r = {r} exceeds k = {k}")));
            }
        }
        Ok(key)
    }

    fn pairs(&self) -> [(u32, u32); 3] {
        [
            (self.k_ab, self.r_ab),
            (self.k_ac, self.r_ac),
            (self.k_bc, self.r_bc),
        ]
    }

    pub fn k_total(&self) -> u32 {
        self.k_ab + self.k_ac + self.k_bc
    }
}

/// Number of good reduced common edge graphs with the given key:
/// a multinomial interleaving of the label blocks times the choices of
/// opposite-direction edges per label.
pub fn good_rceg_count(key: &GoodClassKey) -> BigUint {
    let mut count = multinomial3(key.k_ab as u64, key.k_ac as u64, key.k_bc as u64);
    for (k, r) in key.pairs() {
        count *= binomial_big(k as u64, r as u64);
    }
    count
}

/// The limit of `t_n(G, c) / n^3` for a fixed good reduced graph in the
/// class `key` with shared-edge totals `c = (c_AB, c_AC, c_BC)`:
/// `e^-6 / (sum k)! * prod_a C(c_a - r_a - 1, k_a - r_a - 1) 2^(k_a - c_a)`.
/// Opposite-direction segments have length exactly one, so the binomial
/// places the remaining edges into the same-direction segments.
pub fn termwise_limit(key: &GoodClassKey, c: (u32, u32, u32)) -> f64 {
    let cs = [c.0, c.1, c.2];
    let mut value = (-6.0f64).exp() / factorial_u64(key.k_total() as u64) as f64;
    for ((k, r), c) in key.pairs().into_iter().zip(cs) {
        if c < r {
            return 0.0;
        }
        let comps = occupied_compositions((c - r) as u64, (k - r) as u64)
            .to_f64()
            .expect("small binomial");
        value *= comps * 2f64.powi(k as i32 - c as i32);
    }
    value
}

/// Which labels are forced empty in the summed limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumRestriction {
    /// Full sum over good classes: converges to `e^3`.
    None,
    /// `k_AC = 0`: converges to `1`.
    AcZero,
    /// `k_AB = k_AC = 0`: converges to `e^-3`.
    AbAcZero,
}

/// `e^-6` times the product over unrestricted labels of
/// `sum_{k <= k_max} 3^k / k!`.
pub fn sum_good_limits(restriction: SumRestriction, k_max: u32) -> f64 {
    let series: f64 = {
        let mut term = 1.0f64;
        let mut acc = 1.0f64;
        for k in 1..=k_max {
            term *= 3.0 / k as f64;
            acc += term;
        }
        acc
    };
    let free = match restriction {
        SumRestriction::None => 3,
        SumRestriction::AcZero => 2,
        SumRestriction::AbAcZero => 1,
    };
    (-6.0f64).exp() * series.powi(free)
}

fn sub_nonneg(label: &str, a: i64, b: i64) -> Result<u64> {
    let d = a - b;
    if d < 0 {
        return Err(Error::invalid(format!(
            "{label} is negative ({a} - {b} = {d})"
        )));
    }
    Ok(d as u64)
}

/// The exact combinatorial upper bound on the number of edge-ordered
/// triples `T_n` for a reduced graph with the given statistics and shared
/// totals `c = (c_AB, c_AC, c_BC, c_ABC)`:
/// segment length choices, the A/B edge-list trinomial, component anchor
/// choices, the C insertion binomial, and the three vertex-sequence
/// factorials.
pub fn trip_upper_bound(stats: &CegStats, c: [u32; 4], n: u32) -> Result<BigUint> {
    let [c_ab, c_ac, c_bc, c_abc] = c.map(|x| x as i64);
    let n_i = n as i64;
    let d1 = sub_nonneg("n - 1 - c_AB - c_ABC", n_i - 1, c_ab + c_abc)?;
    let d2 = sub_nonneg("n - 1 - c_AC - c_BC - c_ABC", n_i - 1, c_ac + c_bc + c_abc)?;
    let f1 = sub_nonneg(
        "n - c_AB - c_ABC - k1 - k4",
        n_i,
        c_ab + c_abc + stats.k1 as i64 + stats.k4 as i64,
    )?;
    let f2 = sub_nonneg(
        "n - c_AC - c_BC - c_ABC - k2",
        n_i,
        c_ac + c_bc + c_abc + stats.k2 as i64,
    )?;
    let mut bound = occupied_compositions(c_ab as u64, stats.l_ab as u64);
    bound *= occupied_compositions(c_ac as u64, stats.l_ac as u64);
    bound *= occupied_compositions(c_bc as u64, stats.l_bc as u64);
    bound *= occupied_compositions(c_abc as u64, stats.l_abc as u64);
    bound *= multinomial3(d1, d1, stats.k1 as u64);
    bound *= binomial_big(2 * d1, stats.k3 as u64);
    bound *= binomial_big(d1 + 2 * d2 + stats.k2 as u64, d2);
    bound *= factorial_big(n as u64);
    bound *= factorial_big(f1);
    bound *= factorial_big(f2);
    Ok(bound)
}

/// [`trip_upper_bound`] divided by `(3n - 3 - c_AB - c_AC - c_BC - 2c_ABC)!`,
/// the normalization that turns `T_n` into `t_n`.
pub fn trip_upper_bound_normalized(stats: &CegStats, c: [u32; 4], n: u32) -> Result<BigRational> {
    let bound = trip_upper_bound(stats, c, n)?;
    let union = sub_nonneg(
        "|A u B u C|",
        3 * n as i64 - 3,
        (c[0] + c[1] + c[2] + 2 * c[3]) as i64,
    )?;
    Ok(BigRational::new(
        BigInt::from(bound),
        BigInt::from(factorial_big(union)),
    ))
}

/// Number of permutations of `1..=n` with `|a_i - a_{i+1}| > 1` for all
/// consecutive positions. Inclusion-exclusion over the required adjacent
/// consecutive-value pairs: choosing `j` of the `n-1` pairs in `p` maximal
/// runs glues values into blocks, each arrangeable in two directions, and
/// there are `C(j-1, p-1) C(n-j, p)` such choices.
pub fn kaplansky_count(n: u32) -> BigUint {
    let n = n as u64;
    if n == 0 {
        return BigUint::one();
    }
    let mut total = BigInt::from(factorial_big(n));
    for j in 1..n {
        let mut inner = BigUint::zero();
        for p in 1..=j {
            inner += binomial_big(j - 1, p - 1)
                * binomial_big(n - j, p)
                * BigUint::from(2u32).pow(p as u32);
        }
        let term = BigInt::from(factorial_big(n - j) * inner);
        if j % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    assert!(!total.is_negative(), "inclusion-exclusion went negative");
    total.to_biguint().expect("nonnegative")
}

/// `kaplansky_count(n) / n!`, the probability that a uniform permutation
/// has no two consecutive values adjacent. Tends to `e^-2`.
pub fn kaplansky_ratio(n: u32) -> f64 {
    BigRational::new(
        BigInt::from(kaplansky_count(n)),
        BigInt::from(factorial_big(n as u64)),
    )
    .to_f64()
    .expect("ratio in [0, 1]")
}

/// `e^{k(k-1)/2}`, the `k`-th moment shared by every limit point of `X/n`;
/// valid for negative `k` as well.
pub fn lognormal_moment(k: i32) -> f64 {
    ((k as f64) * (k as f64 - 1.0) / 2.0).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailSide {
    Lower,
    Upper,
}

/// Tail bound constants: `P(X/n <= 1/M) <= e^{k(k+1)/2} / M^k` and
/// `P(X/n > M) <= e^{k(k-1)/2} / M^k` in the limit.
pub fn tail_bound(k: u32, m: f64, side: TailSide) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("tail bounds need k >= 1"));
    }
    if !(m > 0.0) {
        return Err(Error::invalid(format!("tail bounds need M > 0, got {m}")));
    }
    let kf = k as f64;
    let num = match side {
        TailSide::Lower => (kf * (kf + 1.0) / 2.0).exp(),
        TailSide::Upper => (kf * (kf - 1.0) / 2.0).exp(),
    };
    Ok(num / m.powi(k as i32))
}

/// Families of 1-periodic positive measures used to witness the moment
/// identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PeriodicMeasureKind {
    /// Point masses at `offset + i/L + Z` with weight `weights[i]`.
    LatticeMasses,
    /// 1-periodic density, constant `weights[i]` on
    /// `[offset + i/L, offset + (i+1)/L)`.
    PiecewiseConstantDensity,
}

/// A 1-periodic positive measure, truncated to `window` periods on each
/// side when integrated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicMeasureSpec {
    pub kind: PeriodicMeasureKind,
    pub offset: f64,
    pub weights: Vec<f64>,
    pub window: u32,
}

impl PeriodicMeasureSpec {
    pub fn lattice(offset: f64, weights: Vec<f64>) -> PeriodicMeasureSpec {
        PeriodicMeasureSpec {
            kind: PeriodicMeasureKind::LatticeMasses,
            offset,
            weights,
            window: 12,
        }
    }

    pub fn density(offset: f64, weights: Vec<f64>) -> PeriodicMeasureSpec {
        PeriodicMeasureSpec {
            kind: PeriodicMeasureKind::PiecewiseConstantDensity,
            offset,
            weights,
            window: 12,
        }
    }

    fn validate(&self, k: i32) -> Result<()> {
        if !(0.0..1.0).contains(&self.offset) {
            return Err(Error::invalid(format!(
                "offset must lie in [0, 1), got {}",
                self.offset
            )));
        }
        if self.weights.is_empty() || self.weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::invalid("weights must be nonnegative"));
        }
        if self.weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::invalid("measure has zero total mass"));
        }
        // the integrand e^{kt - (t + 1/2)^2 / 2} peaks at t = k - 1/2; the
        // window must leave < 1e-12 of the mass outside
        let peak = k as f64 - 0.5;
        if (self.window as f64) < peak.abs() + 8.0 {
            return Err(Error::invalid(format!(
                "window {} too small for k = {k}; needs >= |k - 1/2| + 8",
                self.window
            )));
        }
        Ok(())
    }
}

fn gaussian_factor(t: f64, k: i32) -> f64 {
    (k as f64 * t - (t + 0.5) * (t + 0.5) / 2.0).exp()
}

fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, steps: usize, f: F) -> f64 {
    // composite Simpson with an even number of subintervals
    let steps = steps + steps % 2;
    let h = (b - a) / steps as f64;
    let mut acc = f(a) + f(b);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

fn periodic_integral(spec: &PeriodicMeasureSpec, k: i32) -> f64 {
    let w = spec.window as i64;
    let l = spec.weights.len();
    let mut total = 0.0f64;
    for j in -w..=w {
        for (i, &wt) in spec.weights.iter().enumerate() {
            if wt == 0.0 {
                continue;
            }
            match spec.kind {
                PeriodicMeasureKind::LatticeMasses => {
                    let t = spec.offset + i as f64 / l as f64 + j as f64;
                    total += wt * gaussian_factor(t, k);
                }
                PeriodicMeasureKind::PiecewiseConstantDensity => {
                    let a = spec.offset + j as f64 + i as f64 / l as f64;
                    let b = spec.offset + j as f64 + (i + 1) as f64 / l as f64;
                    total += wt * simpson(a, b, 256, |t| gaussian_factor(t, k));
                }
            }
        }
    }
    total
}

/// `int e^{kt} e^{-(t+1/2)^2/2} d nu / int e^{-(t+1/2)^2/2} d nu` over the
/// truncation window. Equals `e^{k(k-1)/2}` for every 1-periodic spec and
/// integer `k`, to truncation accuracy.
pub fn periodic_measure_moment(spec: &PeriodicMeasureSpec, k: i32) -> Result<f64> {
    spec.validate(k)?;
    spec.validate(0)?;
    let den = periodic_integral(spec, 0);
    if den <= 0.0 {
        return Err(Error::invalid("measure has zero mass in the window"));
    }
    Ok(periodic_integral(spec, k) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::nth_permutation;

    const E: f64 = std::f64::consts::E;

    #[test]
    fn binomials_and_compositions() {
        assert_eq!(binomial_big(10, 3), BigUint::from(120u32));
        assert_eq!(binomial_big(3, 5), BigUint::zero());
        assert_eq!(occupied_compositions(0, 0), BigUint::one());
        assert_eq!(occupied_compositions(3, 0), BigUint::zero());
        assert_eq!(occupied_compositions(2, 3), BigUint::zero());
        assert_eq!(occupied_compositions(5, 2), BigUint::from(4u32));
    }

    #[test]
    fn good_counts() {
        let key = |k: (u32, u32, u32), r: (u32, u32, u32)| GoodClassKey::new(k, r).unwrap();
        assert_eq!(
            good_rceg_count(&key((0, 0, 0), (0, 0, 0))),
            BigUint::one()
        );
        assert_eq!(
            good_rceg_count(&key((1, 1, 1), (0, 0, 0))),
            BigUint::from(6u32)
        );
        assert_eq!(
            good_rceg_count(&key((2, 0, 0), (1, 0, 0))),
            BigUint::from(2u32)
        );
        assert!(GoodClassKey::new((1, 0, 0), (2, 0, 0)).is_err());
    }

    #[test]
    fn termwise_examples() {
        let empty = GoodClassKey::new((0, 0, 0), (0, 0, 0)).unwrap();
        let e6 = (-6.0f64).exp();
        assert!((termwise_limit(&empty, (0, 0, 0)) - e6).abs() < 1e-15);
        // an extra shared edge with no segment to hold it contributes zero
        assert_eq!(termwise_limit(&empty, (1, 0, 0)), 0.0);
        let single = GoodClassKey::new((1, 0, 0), (0, 0, 0)).unwrap();
        assert!((termwise_limit(&single, (1, 0, 0)) - e6).abs() < 1e-15);
        assert!((termwise_limit(&single, (2, 0, 0)) - e6 / 2.0).abs() < 1e-15);
        // an opposite-direction edge forces a run of length one
        let flip = GoodClassKey::new((1, 0, 0), (1, 0, 0)).unwrap();
        assert!((termwise_limit(&flip, (1, 0, 0)) - e6).abs() < 1e-15);
        assert_eq!(termwise_limit(&flip, (2, 0, 0)), 0.0);
    }

    #[test]
    fn summed_limits_converge() {
        assert!((sum_good_limits(SumRestriction::None, 30) - E.powi(3)).abs() < 1e-9);
        assert!((sum_good_limits(SumRestriction::AcZero, 30) - 1.0).abs() < 1e-9);
        assert!((sum_good_limits(SumRestriction::AbAcZero, 30) - E.powi(-3)).abs() < 1e-9);
    }

    #[test]
    fn two_routes_to_e3_agree_termwise() {
        // Sum over all class keys with k_total = j of
        //   good_rceg_count * (closed-form sum over c of termwise_limit)
        // against e^-6 9^j / j!. The inner sum over c_a telescopes to
        // 2^{k_a - r_a} per label.
        for j in 0..=8u32 {
            let mut route1 = 0.0f64;
            for k_ab in 0..=j {
                for k_ac in 0..=(j - k_ab) {
                    let k_bc = j - k_ab - k_ac;
                    for r_ab in 0..=k_ab {
                        for r_ac in 0..=k_ac {
                            for r_bc in 0..=k_bc {
                                let key = GoodClassKey::new(
                                    (k_ab, k_ac, k_bc),
                                    (r_ab, r_ac, r_bc),
                                )
                                .unwrap();
                                let closed = 2f64.powi((k_ab - r_ab) as i32)
                                    * 2f64.powi((k_ac - r_ac) as i32)
                                    * 2f64.powi((k_bc - r_bc) as i32)
                                    * (-6.0f64).exp()
                                    / factorial_u64(j as u64) as f64;
                                route1 += good_rceg_count(&key).to_f64().unwrap() * closed;
                            }
                        }
                    }
                }
            }
            let route2 = (-6.0f64).exp() * 9f64.powi(j as i32)
                / factorial_u64(j as u64) as f64;
            assert!(
                (route1 - route2).abs() < 1e-12 * route2.max(1.0),
                "degree {j}: {route1} vs {route2}"
            );
        }
    }

    #[test]
    fn termwise_inner_sum_matches_closed_form() {
        // sum over c of the binomial factor equals 2^{k - r} per label
        for k in 0..4u32 {
            for r in 0..=k {
                let key = GoodClassKey::new((k, 0, 0), (r, 0, 0)).unwrap();
                let mut acc = 0.0;
                for c in 0..200u32 {
                    acc += termwise_limit(&key, (c, 0, 0));
                }
                let expect = (-6.0f64).exp() / factorial_u64(k as u64) as f64
                    * 2f64.powi((k - r) as i32);
                assert!((acc - expect).abs() < 1e-12, "k={k} r={r}");
            }
        }
    }

    #[test]
    fn trip_bound_empty_class() {
        // empty reduced graph, all shared counts zero:
        // C(2n-2, n-1) * C(3n-3, n-1) * n!^3
        let stats = CegStats {
            good: true,
            ..CegStats::default()
        };
        let n = 5u32;
        let bound = trip_upper_bound(&stats, [0, 0, 0, 0], n).unwrap();
        let expect = binomial_big(8, 4)
            * binomial_big(12, 4)
            * factorial_big(5).pow(3);
        assert_eq!(bound, expect);
    }

    #[test]
    fn trip_bound_vanishes_when_segments_underfull() {
        let stats = CegStats {
            l_ab: 2,
            k1: 2,
            ..CegStats::default()
        };
        // 0 < c_AB < l_AB
        let bound = trip_upper_bound(&stats, [1, 0, 0, 0], 6).unwrap();
        assert_eq!(bound, BigUint::zero());
    }

    #[test]
    fn trip_bound_rejects_negative_intermediates() {
        let stats = CegStats::default();
        assert!(trip_upper_bound(&stats, [4, 0, 0, 0], 4).is_err());
    }

    #[test]
    fn succession_free_counts_match_brute_force() {
        let brute = |n: u32| -> u64 {
            let mut count = 0;
            for idx in 0..factorial_u64(n as u64) {
                let p = nth_permutation(n as usize, idx);
                if p
                    .windows(2)
                    .all(|w| (w[0] as i64 - w[1] as i64).abs() > 1)
                {
                    count += 1;
                }
            }
            count
        };
        let expect = [1u64, 0, 0, 2, 14, 90, 646, 5242];
        for n in 1..=8u32 {
            let exact = kaplansky_count(n);
            assert_eq!(exact, BigUint::from(brute(n)), "n = {n}");
            assert_eq!(exact, BigUint::from(expect[n as usize - 1]));
        }
    }

    #[test]
    fn succession_free_ratio_approaches_e_minus_2() {
        let target = E.powi(-2);
        assert!((kaplansky_ratio(20) - target).abs() < 0.01);
        // monotone in the tested range
        let mut prev = kaplansky_ratio(8);
        for n in 9..=20 {
            let r = kaplansky_ratio(n);
            assert!(r >= prev, "ratio dipped at n = {n}");
            prev = r;
        }
        assert!(prev < target);
    }

    #[test]
    fn lognormal_moments_and_tails() {
        assert_eq!(lognormal_moment(0), 1.0);
        assert_eq!(lognormal_moment(1), 1.0);
        assert!((lognormal_moment(2) - E).abs() < 1e-15);
        assert!((lognormal_moment(-1) - E).abs() < 1e-15);
        assert!((tail_bound(1, 10.0, TailSide::Lower).unwrap() - E / 10.0).abs() < 1e-15);
        assert!((tail_bound(1, 10.0, TailSide::Upper).unwrap() - 0.1).abs() < 1e-15);
        assert!(tail_bound(1, 0.0, TailSide::Lower).is_err());
        assert!(tail_bound(0, 1.0, TailSide::Upper).is_err());
    }

    #[test]
    fn periodic_moments_reproduce_lognormal_moments() {
        let specs = [
            PeriodicMeasureSpec::lattice(0.0, vec![1.0]),
            PeriodicMeasureSpec::lattice(0.37, vec![1.0]),
            PeriodicMeasureSpec::density(0.0, vec![1.0]),
            PeriodicMeasureSpec::lattice(0.5, vec![0.2, 1.3, 0.5]),
            PeriodicMeasureSpec::density(0.25, vec![2.0, 0.1]),
        ];
        for spec in &specs {
            for k in -2..=4i32 {
                let got = periodic_measure_moment(spec, k).unwrap();
                let want = lognormal_moment(k);
                assert!(
                    (got - want).abs() < 1e-6 * want.max(1.0),
                    "{spec:?} k={k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn periodic_moment_invariances() {
        let base = periodic_measure_moment(&PeriodicMeasureSpec::lattice(0.0, vec![1.0]), 3)
            .unwrap();
        for offset in [0.1, 0.37, 0.81] {
            let m =
                periodic_measure_moment(&PeriodicMeasureSpec::lattice(offset, vec![1.0]), 3)
                    .unwrap();
            assert!((m - base).abs() < 1e-6);
        }
        let scaled =
            periodic_measure_moment(&PeriodicMeasureSpec::lattice(0.0, vec![42.0]), 3).unwrap();
        assert!((scaled - base).abs() < 1e-9);
    }

    #[test]
    fn periodic_spec_validation() {
        assert!(
            periodic_measure_moment(&PeriodicMeasureSpec::lattice(0.0, vec![0.0]), 1).is_err()
        );
        assert!(
            periodic_measure_moment(&PeriodicMeasureSpec::lattice(1.5, vec![1.0]), 1).is_err()
        );
        let mut narrow = PeriodicMeasureSpec::lattice(0.0, vec![1.0]);
        narrow.window = 6;
        assert!(periodic_measure_moment(&narrow, 4).is_err());
    }
}
