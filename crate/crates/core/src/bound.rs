//! Prime factorization of the lattice side and the Dyson–Falk upper bound
//! on the period of the discrete cat map.
//!
//! Dyson and Falk (Amer. Math. Monthly 99 (1992) 603–614) bound the period
//! m_n for n > 1 by a number m* read off the prime factorization of n.
//! Writing n = (∏ p^α)(∏ q^β)·5^γ·2^δ with p ≡ ±1 (mod 5) and
//! q ≡ ±2 (mod 5), every prime factor contributes one term to
//!
//! > 2m* = lcm[ (p−1)p^(α−1), 2(q+1)q^(β−1), 2·10·5^(γ−1), 3·2^ε ]
//!
//! with ε = max(δ−1, 1), and m_n ≤ m*. Worked through for n = 300 = 2²·3·5²
//! the terms are 100 (from 5²), 8 (from 3), and 6 (from 2²), so
//! 2m* = lcm(100, 8, 6) = 600 and m* = 300. A worked example of this bound
//! sometimes circulates with the factor-3 term dropped, quoting
//! "lcm(100, 6) = 600"; in fact lcm(100, 6) = 300, and the full term set is
//! required to reach 600 — each prime factor of n has a corresponding term.
//!
//! Every generated term is even (p is odd so p−1 is even, and the other
//! three classes carry an explicit factor of 2), so the lcm is always even
//! and m* is exact; the odd case is still handled by rounding up and
//! flagging the report.

use num_integer::{gcd, lcm};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{self, Modulus};

/// Prime-power decomposition of `n`, primes in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` pairs; the product of `prime^exponent` is `n`.
    pub factors: Vec<(u64, u32)>,
}

/// Classification of a prime for the bound formula.
///
/// Residue classes are mod 5: `ResidueOne` covers p ≡ ±1 and `ResidueTwo`
/// covers p ≡ ±2; the primes 2 and 5 are their own classes. The four
/// classes partition the primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeClass {
    Two,
    Five,
    ResidueOne,
    ResidueTwo,
}

impl std::fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            PrimeClass::Two => "two",
            PrimeClass::Five => "five",
            PrimeClass::ResidueOne => "+-1 mod 5",
            PrimeClass::ResidueTwo => "+-2 mod 5",
        };
        f.write_str(label)
    }
}

/// One prime-power factor's contribution to the bound lcm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTerm {
    pub prime: u64,
    pub exponent: u32,
    pub class: PrimeClass,
    pub value: u64,
}

/// Exact period, bound, and per-factor provenance for one lattice side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub n: u64,
    /// Exact period m_n of the canonical map.
    pub period: u64,
    /// Dyson–Falk bound m*; `period <= bound` always.
    pub bound: u64,
    /// The combined term lcm, i.e. 2m*.
    pub lcm: u64,
    pub terms: Vec<BoundTerm>,
    /// `period / bound` as a reduced fraction `(numerator, denominator)`.
    pub ratio: (u64, u64),
    /// True when the term lcm was odd and the bound was rounded up; cannot
    /// occur for terms produced by [`bound_terms`], which are all even.
    pub rounded_bound: bool,
}

/// Trial-division primality test; adequate at desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Complete prime-power decomposition by trial division.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::Domain(format!("cannot factor n = {n}; need n >= 2")));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d <= rest / d {
        if rest.is_multiple_of(d) {
            let mut exponent = 0u32;
            while rest.is_multiple_of(d) {
                rest /= d;
                exponent += 1;
            }
            factors.push((d, exponent));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

fn class_of(prime: u64) -> PrimeClass {
    match prime {
        2 => PrimeClass::Two,
        5 => PrimeClass::Five,
        p if p % 5 == 1 || p % 5 == 4 => PrimeClass::ResidueOne,
        _ => PrimeClass::ResidueTwo,
    }
}

/// Classifies a prime for the bound formula.
pub fn classify_prime(prime: u64) -> Result<PrimeClass> {
    if !is_prime(prime) {
        return Err(Error::Domain(format!("{prime} is not prime")));
    }
    Ok(class_of(prime))
}

/// One bound term per prime-power factor:
///
/// - p ≡ ±1 (mod 5): `(p−1)·p^(α−1)`
/// - q ≡ ±2 (mod 5): `2(q+1)·q^(β−1)`
/// - 5: `2·10·5^(γ−1)`
/// - 2: `3·2^ε` with ε = max(δ−1, 1)
pub fn bound_terms(factorization: &Factorization) -> Result<Vec<BoundTerm>> {
    factorization
        .factors
        .iter()
        .map(|&(prime, exponent)| {
            let class = class_of(prime);
            let p = prime as u128;
            let value: u128 = match class {
                PrimeClass::ResidueOne => (p - 1) * p.pow(exponent - 1),
                PrimeClass::ResidueTwo => 2 * (p + 1) * p.pow(exponent - 1),
                PrimeClass::Five => 2 * 10 * 5u128.pow(exponent - 1),
                PrimeClass::Two => 3 * 2u128.pow((exponent - 1).max(1)),
            };
            let value = u64::try_from(value).map_err(|_| {
                Error::Domain(format!("bound term for {prime}^{exponent} exceeds u64"))
            })?;
            Ok(BoundTerm {
                prime,
                exponent,
                class,
                value,
            })
        })
        .collect()
}

fn bound_parts(n: u64) -> Result<(Vec<BoundTerm>, u64, u64, bool)> {
    let factorization = factorize(n)?;
    let terms = bound_terms(&factorization)?;
    // The product of all terms fits u128 (at most 15 factors, each term
    // below 4n), so the running lcm cannot overflow.
    let combined: u128 = terms
        .iter()
        .fold(1u128, |acc, term| lcm(acc, term.value as u128));
    let rounded = combined % 2 == 1;
    let m_star = u64::try_from(combined.div_ceil(2))
        .map_err(|_| Error::Domain(format!("bound for n = {n} exceeds u64")))?;
    let combined = u64::try_from(combined)
        .map_err(|_| Error::Domain(format!("term lcm for n = {n} exceeds u64")))?;
    Ok((terms, combined, m_star, rounded))
}

/// The Dyson–Falk bound m* = lcm(terms) / 2 for n ≥ 2.
pub fn dyson_falk_bound(n: u64) -> Result<u64> {
    let (_, _, m_star, _) = bound_parts(n)?;
    Ok(m_star)
}

/// Joins the exact period with the bound and its per-factor terms.
pub fn period_report(n: u64) -> Result<PeriodReport> {
    let (terms, combined, m_star, rounded) = bound_parts(n)?;
    let period = map::exact_period(Modulus::new(n)?)?;
    let g = gcd(period, m_star);
    Ok(PeriodReport {
        n,
        period,
        bound: m_star,
        lcm: combined,
        terms,
        ratio: (period / g, m_star / g),
        rounded_bound: rounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_prime_small_values() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn factorize_known_values() {
        assert_eq!(
            factorize(300).unwrap().factors,
            vec![(2, 2), (3, 1), (5, 2)]
        );
        assert_eq!(factorize(161).unwrap().factors, vec![(7, 1), (23, 1)]);
        assert_eq!(factorize(2).unwrap().factors, vec![(2, 1)]);
    }

    #[test]
    fn factorize_rejects_small_inputs() {
        assert!(factorize(0).is_err());
        assert!(factorize(1).is_err());
    }

    #[test]
    fn factorization_reconstructs_n() {
        for n in 2..=2000u64 {
            let f = factorize(n).unwrap();
            let product: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(product, n);
            for &(p, _) in &f.factors {
                assert!(is_prime(p), "{p} reported as a factor of {n}");
            }
        }
    }

    #[test]
    fn classify_prime_examples() {
        assert_eq!(classify_prime(31).unwrap(), PrimeClass::ResidueOne);
        assert_eq!(classify_prime(7).unwrap(), PrimeClass::ResidueTwo);
        assert_eq!(classify_prime(23).unwrap(), PrimeClass::ResidueTwo);
        assert_eq!(classify_prime(5).unwrap(), PrimeClass::Five);
        assert_eq!(classify_prime(2).unwrap(), PrimeClass::Two);
        assert_eq!(classify_prime(11).unwrap(), PrimeClass::ResidueOne);
    }

    #[test]
    fn classify_prime_rejects_composites() {
        assert!(classify_prime(1).is_err());
        assert!(classify_prime(6).is_err());
        assert!(classify_prime(161).is_err());
    }

    #[test]
    fn bound_terms_worked_values() {
        // 5² contributes 2·10·5 = 100.
        let f = factorize(25).unwrap();
        assert_eq!(bound_terms(&f).unwrap()[0].value, 100);
        // 2² contributes 3·2^ε with ε = max(2−1, 1) = 1.
        let f = factorize(4).unwrap();
        assert_eq!(bound_terms(&f).unwrap()[0].value, 6);
        // 3 contributes 2·(3+1)·3⁰ = 8.
        let f = factorize(3).unwrap();
        let terms = bound_terms(&f).unwrap();
        assert_eq!(terms[0].class, PrimeClass::ResidueTwo);
        assert_eq!(terms[0].value, 8);
    }

    #[test]
    fn bound_terms_epsilon_edge_cases() {
        // δ = 1 gives ε = max(0, 1) = 1, hence term 6.
        let f = factorize(2).unwrap();
        assert_eq!(bound_terms(&f).unwrap()[0].value, 6);
        // δ = 3 gives ε = 2, hence term 12.
        let f = factorize(8).unwrap();
        assert_eq!(bound_terms(&f).unwrap()[0].value, 12);
        // γ = 1 gives the five-term 20.
        let f = factorize(5).unwrap();
        assert_eq!(bound_terms(&f).unwrap()[0].value, 20);
    }

    #[test]
    fn one_term_per_distinct_prime() {
        for n in 2..=500u64 {
            let f = factorize(n).unwrap();
            let terms = bound_terms(&f).unwrap();
            assert_eq!(terms.len(), f.factors.len());
        }
    }

    #[test]
    fn bound_known_values() {
        assert_eq!(dyson_falk_bound(300).unwrap(), 300);
        assert_eq!(dyson_falk_bound(150).unwrap(), 300);
        // 161 = 7·23: terms 16 and 48, lcm 48, m* = 24.
        assert_eq!(dyson_falk_bound(161).unwrap(), 24);
        // 124 = 2²·31: terms 6 and 30, lcm 30, m* = 15.
        assert_eq!(dyson_falk_bound(124).unwrap(), 15);
        assert_eq!(dyson_falk_bound(2).unwrap(), 3);
    }

    #[test]
    fn bound_rejects_small_inputs() {
        assert!(dyson_falk_bound(0).is_err());
        assert!(dyson_falk_bound(1).is_err());
    }

    #[test]
    fn term_lcm_is_always_even() {
        for n in 2..=500u64 {
            let f = factorize(n).unwrap();
            let combined = bound_terms(&f)
                .unwrap()
                .iter()
                .fold(1u64, |acc, t| lcm(acc, t.value));
            assert_eq!(combined % 2, 0, "n = {n}");
        }
    }

    #[test]
    fn report_for_161_is_tight() {
        let report = period_report(161).unwrap();
        assert_eq!(report.period, 24);
        assert_eq!(report.bound, 24);
        assert_eq!(report.ratio, (1, 1));
        assert!(!report.rounded_bound);
    }

    #[test]
    fn report_for_300_lists_all_terms() {
        let report = period_report(300).unwrap();
        assert_eq!(report.bound, 300);
        assert_eq!(report.lcm, 600);
        let values: Vec<u64> = report.terms.iter().map(|t| t.value).collect();
        assert_eq!(values, vec![6, 8, 100]);
        assert_eq!(report.period, 300);
    }

    #[test]
    fn report_for_2_by_brute_force() {
        let report = period_report(2).unwrap();
        assert_eq!(report.period, 3);
        assert_eq!(report.bound, 3);
        assert_eq!(report.lcm, 6);
    }

    #[test]
    fn report_round_trips_through_json() {
        let report = period_report(300).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: PeriodReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }
}
