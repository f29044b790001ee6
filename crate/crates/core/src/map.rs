//! The discrete cat map as exact modular integer dynamics.
//!
//! Points live on the n×n torus lattice and the map is multiplication by a
//! unimodular 2×2 integer matrix with coordinates reduced mod n. The
//! canonical matrix is `[1 1; 1 2]`, giving `(x, y) -> (x + y, x + 2y)`.
//! Because the determinant is 1, the induced map is a bijection of the
//! lattice for every n, and some power of the matrix is the identity mod n;
//! the least such power is the exact period m_n.

use num_integer::lcm;

use crate::bound;
use crate::error::{Error, Result};

/// Side length of the square lattice; coordinates are taken mod `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Modulus> {
        if n == 0 {
            return Err(Error::Domain("lattice side must be at least 1".into()));
        }
        Ok(Modulus(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// A lattice point with `0 <= x, y < n`; `x` is the column and `y` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: u64,
    pub y: u64,
}

impl LatticePoint {
    pub fn new(x: u64, y: u64) -> LatticePoint {
        LatticePoint { x, y }
    }

    /// Validates the coordinates against the lattice side.
    pub fn checked(x: u64, y: u64, modulus: Modulus) -> Result<LatticePoint> {
        let n = modulus.get();
        if x >= n || y >= n {
            return Err(Error::Domain(format!(
                "point ({x}, {y}) is outside the {n}x{n} lattice"
            )));
        }
        Ok(LatticePoint { x, y })
    }
}

/// A 2×2 integer matrix `[a b; c d]` with determinant 1.
///
/// Determinant 1 makes the induced map mod any n a bijection. Arbitrary
/// unimodular matrices may be applied and inverted; orbit and period
/// operations always use [`CatMatrix::CANONICAL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl CatMatrix {
    /// The map `(x, y) -> (x + y, x + 2y)`.
    pub const CANONICAL: CatMatrix = CatMatrix {
        a: 1,
        b: 1,
        c: 1,
        d: 2,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<CatMatrix> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::Domain(format!(
                "matrix [{a} {b}; {c} {d}] has determinant {det}, expected 1"
            )));
        }
        Ok(CatMatrix { a, b, c, d })
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    /// The inverse `[d -b; -c a]`; exact because the determinant is 1.
    pub fn inverse(&self) -> CatMatrix {
        CatMatrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

fn reduce(v: i64, n: u64) -> u64 {
    (v as i128).rem_euclid(n as i128) as u64
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

/// Applies the map: `((a·x + b·y) mod n, (c·x + d·y) mod n)`.
///
/// The input point must be valid for `modulus`.
pub fn apply_point(p: LatticePoint, m: &CatMatrix, modulus: Modulus) -> LatticePoint {
    let n = modulus.get();
    let (a, b, c, d) = (
        reduce(m.a, n),
        reduce(m.b, n),
        reduce(m.c, n),
        reduce(m.d, n),
    );
    LatticePoint {
        x: add_mod(mul_mod(a, p.x, n), mul_mod(b, p.y, n), n),
        y: add_mod(mul_mod(c, p.x, n), mul_mod(d, p.y, n), n),
    }
}

/// Returns the unique `q` with `apply_point(q, m, modulus) == p`.
///
/// For the canonical matrix this is `((2x − y) mod n, (y − x) mod n)`.
pub fn invert_point(p: LatticePoint, m: &CatMatrix, modulus: Modulus) -> LatticePoint {
    apply_point(p, &m.inverse(), modulus)
}

/// A 2×2 matrix with entries already reduced mod n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Mat2 {
    /// The identity reduced mod n (all zeros when n = 1).
    pub fn identity(modulus: Modulus) -> Mat2 {
        let n = modulus.get();
        Mat2 {
            a: 1 % n,
            b: 0,
            c: 0,
            d: 1 % n,
        }
    }

    pub fn from_matrix(m: &CatMatrix, modulus: Modulus) -> Mat2 {
        let n = modulus.get();
        Mat2 {
            a: reduce(m.a, n),
            b: reduce(m.b, n),
            c: reduce(m.c, n),
            d: reduce(m.d, n),
        }
    }

    pub fn mul(self, rhs: Mat2, modulus: Modulus) -> Mat2 {
        let n = modulus.get();
        Mat2 {
            a: add_mod(mul_mod(self.a, rhs.a, n), mul_mod(self.b, rhs.c, n), n),
            b: add_mod(mul_mod(self.a, rhs.b, n), mul_mod(self.b, rhs.d, n), n),
            c: add_mod(mul_mod(self.c, rhs.a, n), mul_mod(self.d, rhs.c, n), n),
            d: add_mod(mul_mod(self.c, rhs.b, n), mul_mod(self.d, rhs.d, n), n),
        }
    }

    pub fn apply(self, p: LatticePoint, modulus: Modulus) -> LatticePoint {
        let n = modulus.get();
        LatticePoint {
            x: add_mod(mul_mod(self.a, p.x, n), mul_mod(self.b, p.y, n), n),
            y: add_mod(mul_mod(self.c, p.x, n), mul_mod(self.d, p.y, n), n),
        }
    }

    pub fn is_identity(self, modulus: Modulus) -> bool {
        self == Mat2::identity(modulus)
    }
}

/// Computes `m^k` with entries reduced mod n by square-and-multiply.
///
/// `k = 0` yields the identity.
pub fn matrix_pow_mod(m: &CatMatrix, k: u64, modulus: Modulus) -> Mat2 {
    let mut result = Mat2::identity(modulus);
    let mut base = Mat2::from_matrix(m, modulus);
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = result.mul(base, modulus);
        }
        base = base.mul(base, modulus);
        k >>= 1;
    }
    result
}

/// The orbit of a point under the canonical map: `start, f(start), ...`
/// up to (and not including) the first return to `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub start: LatticePoint,
    pub points: Vec<LatticePoint>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Lazily yields the orbit of `start` under the canonical map.
///
/// Stepping never allocates, so lattices up to n = 4096 and beyond can be
/// traversed point by point.
pub fn orbit_iter(start: LatticePoint, modulus: Modulus) -> OrbitIter {
    let n = modulus.get();
    let start = LatticePoint::new(start.x % n, start.y % n);
    OrbitIter {
        modulus,
        start,
        next: Some(start),
    }
}

pub struct OrbitIter {
    modulus: Modulus,
    start: LatticePoint,
    next: Option<LatticePoint>,
}

impl Iterator for OrbitIter {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let p = self.next?;
        let succ = apply_point(p, &CatMatrix::CANONICAL, self.modulus);
        self.next = if succ == self.start { None } else { Some(succ) };
        Some(p)
    }
}

/// Materializes the orbit of `start`; the map sends the last point back to
/// `start`.
pub fn orbit_of(start: LatticePoint, modulus: Modulus) -> Orbit {
    let mut iter = orbit_iter(start, modulus);
    let start = iter.start;
    Orbit {
        start,
        points: iter.by_ref().collect(),
    }
}

/// Orbit length without materializing the points.
pub fn orbit_length(start: LatticePoint, modulus: Modulus) -> u64 {
    orbit_iter(start, modulus).count() as u64
}

/// The exact period m_n: the least m ≥ 1 with `CANONICAL^m ≡ I (mod n)`.
///
/// The search is capped at the Dyson–Falk bound m*, which the period never
/// exceeds; running past the cap therefore reports an internal bug rather
/// than looping forever.
pub fn exact_period(modulus: Modulus) -> Result<u64> {
    let n = modulus.get();
    if n == 1 {
        return Ok(1);
    }
    let cap = bound::dyson_falk_bound(n)?;
    let base = Mat2::from_matrix(&CatMatrix::CANONICAL, modulus);
    let mut power = base;
    for k in 1..=cap {
        if power.is_identity(modulus) {
            return Ok(k);
        }
        power = power.mul(base, modulus);
    }
    Err(Error::Invariant(format!(
        "no power of the canonical matrix up to the bound {cap} is the identity mod {n}"
    )))
}

/// The exact period computed per prime-power factor of n and recombined
/// with an lcm; agrees with [`exact_period`] on every input and is much
/// faster for highly composite n.
pub fn exact_period_factored(modulus: Modulus) -> Result<u64> {
    let n = modulus.get();
    if n == 1 {
        return Ok(1);
    }
    let factorization = bound::factorize(n)?;
    let mut period = 1u64;
    for &(prime, exponent) in &factorization.factors {
        let prime_power = prime.pow(exponent);
        let m = exact_period(Modulus::new(prime_power)?)?;
        // Each per-factor period divides m_n, so the lcm stays within u64.
        period = lcm(period, m);
    }
    Ok(period)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn modulus_rejects_zero() {
        assert!(Modulus::new(0).is_err());
    }

    #[test]
    fn checked_point_rejects_out_of_range() {
        assert!(LatticePoint::checked(5, 0, modulus(5)).is_err());
        assert!(LatticePoint::checked(0, 7, modulus(5)).is_err());
        assert!(LatticePoint::checked(4, 4, modulus(5)).is_ok());
    }

    #[test]
    fn cat_matrix_requires_determinant_one() {
        assert!(CatMatrix::new(1, 1, 1, 2).is_ok());
        assert!(CatMatrix::new(2, 0, 0, 2).is_err());
        assert!(CatMatrix::new(1, 0, 0, -1).is_err());
    }

    #[test]
    fn apply_point_examples() {
        let m5 = modulus(5);
        let m = CatMatrix::CANONICAL;
        assert_eq!(
            apply_point(LatticePoint::new(0, 0), &m, m5),
            LatticePoint::new(0, 0)
        );
        assert_eq!(
            apply_point(LatticePoint::new(1, 0), &m, m5),
            LatticePoint::new(1, 1)
        );
        // 3+4 = 7 ≡ 2, 3+8 = 11 ≡ 1 (mod 5)
        assert_eq!(
            apply_point(LatticePoint::new(3, 4), &m, m5),
            LatticePoint::new(2, 1)
        );
    }

    #[test]
    fn invert_point_examples() {
        let m5 = modulus(5);
        let m = CatMatrix::CANONICAL;
        assert_eq!(
            invert_point(LatticePoint::new(0, 0), &m, m5),
            LatticePoint::new(0, 0)
        );
        assert_eq!(
            invert_point(LatticePoint::new(2, 1), &m, m5),
            LatticePoint::new(3, 4)
        );
    }

    #[test]
    fn invert_undoes_apply_exhaustively_mod_7() {
        let m7 = modulus(7);
        let m = CatMatrix::CANONICAL;
        for x in 0..7 {
            for y in 0..7 {
                let p = LatticePoint::new(x, y);
                assert_eq!(invert_point(apply_point(p, &m, m7), &m, m7), p);
            }
        }
    }

    #[test]
    fn negative_entries_reduce_correctly() {
        let m5 = modulus(5);
        let inv = CatMatrix::CANONICAL.inverse();
        // (2x − y, −x + y) at (1, 0) is (2, −1) ≡ (2, 4) mod 5.
        assert_eq!(
            apply_point(LatticePoint::new(1, 0), &inv, m5),
            LatticePoint::new(2, 4)
        );
    }

    #[test]
    fn matrix_pow_zero_is_identity() {
        for n in [1, 2, 5, 161] {
            let m = modulus(n);
            assert!(matrix_pow_mod(&CatMatrix::CANONICAL, 0, m).is_identity(m));
        }
    }

    #[test]
    fn matrix_pow_three_mod_two_is_identity() {
        let m2 = modulus(2);
        assert!(matrix_pow_mod(&CatMatrix::CANONICAL, 3, m2).is_identity(m2));
        assert!(!matrix_pow_mod(&CatMatrix::CANONICAL, 1, m2).is_identity(m2));
        assert!(!matrix_pow_mod(&CatMatrix::CANONICAL, 2, m2).is_identity(m2));
    }

    #[test]
    fn matrix_pow_24_mod_161_is_identity() {
        let m = modulus(161);
        assert!(matrix_pow_mod(&CatMatrix::CANONICAL, 24, m).is_identity(m));
    }

    #[test]
    fn matrix_pow_matches_repeated_multiplication() {
        let m = modulus(30);
        let base = Mat2::from_matrix(&CatMatrix::CANONICAL, m);
        let mut running = Mat2::identity(m);
        for k in 0..40 {
            assert_eq!(matrix_pow_mod(&CatMatrix::CANONICAL, k, m), running);
            running = running.mul(base, m);
        }
    }

    #[test]
    fn origin_orbit_has_length_one() {
        for n in [1, 2, 10, 161] {
            let orbit = orbit_of(LatticePoint::new(0, 0), modulus(n));
            assert_eq!(orbit.len(), 1);
            assert_eq!(orbit.points, vec![LatticePoint::new(0, 0)]);
        }
    }

    #[test]
    fn orbit_lengths_divide_period_mod_10() {
        let m = modulus(10);
        let period = exact_period(m).unwrap();
        for x in 0..10 {
            for y in 0..10 {
                let len = orbit_length(LatticePoint::new(x, y), m);
                assert_eq!(period % len, 0, "orbit of ({x}, {y}) has length {len}");
            }
        }
    }

    #[test]
    fn lcm_of_orbit_lengths_is_period_for_small_n() {
        for n in 2..=30u64 {
            let m = modulus(n);
            let mut all = 1u64;
            for x in 0..n {
                for y in 0..n {
                    all = lcm(all, orbit_length(LatticePoint::new(x, y), m));
                }
            }
            assert_eq!(all, exact_period(m).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn orbit_length_matches_materialized_orbit() {
        let m = modulus(17);
        for x in 0..17 {
            let p = LatticePoint::new(x, (x * 3) % 17);
            assert_eq!(orbit_length(p, m) as usize, orbit_of(p, m).len());
        }
    }

    #[test]
    fn orbit_points_are_distinct_and_close_up() {
        let m = modulus(12);
        for start in [LatticePoint::new(1, 0), LatticePoint::new(3, 7)] {
            let orbit = orbit_of(start, m);
            let unique: std::collections::HashSet<_> = orbit.points.iter().collect();
            assert_eq!(unique.len(), orbit.len());
            let last = *orbit.points.last().unwrap();
            assert_eq!(apply_point(last, &CatMatrix::CANONICAL, m), orbit.start);
        }
    }

    #[test]
    fn exact_period_known_values() {
        assert_eq!(exact_period(modulus(1)).unwrap(), 1);
        assert_eq!(exact_period(modulus(2)).unwrap(), 3);
        assert_eq!(exact_period(modulus(161)).unwrap(), 24);
        assert_eq!(exact_period(modulus(124)).unwrap(), 15);
    }

    #[test]
    fn exact_period_small_values_by_brute_force() {
        // Independent route: multiply the matrix out step by step with no
        // bound cap and no early identity shortcut.
        for n in 2..=60u64 {
            let m = modulus(n);
            let base = Mat2::from_matrix(&CatMatrix::CANONICAL, m);
            let mut power = base;
            let mut naive = None;
            for k in 1..=20_000u64 {
                if power.is_identity(m) {
                    naive = Some(k);
                    break;
                }
                power = power.mul(base, m);
            }
            assert_eq!(exact_period(m).unwrap(), naive.unwrap(), "n = {n}");
        }
    }

    #[test]
    fn factored_period_agrees_on_samples() {
        for n in [2, 6, 30, 124, 150, 161, 300] {
            let m = modulus(n);
            assert_eq!(
                exact_period_factored(m).unwrap(),
                exact_period(m).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn factored_period_on_prime_is_direct() {
        for n in [7, 23, 31, 101] {
            let m = modulus(n);
            assert_eq!(exact_period_factored(m).unwrap(), exact_period(m).unwrap());
        }
    }
}
