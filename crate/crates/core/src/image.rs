//! Configurations of cell values on the lattice, bulk iteration under the
//! cat map, exact recurrence via permutation cycles, and a smearing metric.
//!
//! A configuration assigns one 8-bit grayscale value to each of the n²
//! lattice points (binary images are the {0, 255} subset). Iterating a
//! configuration permutes the values, so the multiset of cell values never
//! changes, and the configuration returns to itself after the exact period
//! m_n — usually sooner, because repeated values shorten the recurrence of
//! individual cycles.

use std::collections::BTreeMap;

use num_integer::lcm;

use crate::bound;
use crate::error::{Error, Result};
use crate::map::{self, CatMatrix, LatticePoint, Modulus};

/// An n×n grid of 8-bit cell values, row-major with `x` the column and `y`
/// the row; index of `(x, y)` is `y·n + x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    modulus: Modulus,
    cells: Vec<u8>,
}

fn grid_len(modulus: Modulus) -> Result<usize> {
    let n = modulus.get();
    n.checked_mul(n)
        .and_then(|len| usize::try_from(len).ok())
        .ok_or_else(|| Error::Domain(format!("lattice {n}x{n} is too large to materialize")))
}

impl Configuration {
    /// Wraps `cells` as an n×n grid; `cells.len()` must be n².
    pub fn new(modulus: Modulus, cells: Vec<u8>) -> Result<Configuration> {
        let expected = grid_len(modulus)?;
        if cells.len() != expected {
            return Err(Error::Domain(format!(
                "expected {expected} cells for a {n}x{n} grid, got {got}",
                n = modulus.get(),
                got = cells.len()
            )));
        }
        Ok(Configuration { modulus, cells })
    }

    pub fn constant(modulus: Modulus, value: u8) -> Result<Configuration> {
        Ok(Configuration {
            modulus,
            cells: vec![value; grid_len(modulus)?],
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The lattice side n.
    pub fn side(&self) -> u64 {
        self.modulus.get()
    }

    pub fn get(&self, p: LatticePoint) -> u8 {
        self.cells[(p.y * self.side() + p.x) as usize]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }
}

/// Applies the canonical map `k` times in one pass: the value at point `p`
/// moves to `map^k(p)`.
pub fn iterate_configuration(c: &Configuration, k: u64) -> Configuration {
    let modulus = c.modulus();
    let n = modulus.get();
    let transform = map::matrix_pow_mod(&CatMatrix::CANONICAL, k, modulus);
    let mut out = vec![0u8; c.cells.len()];
    for y in 0..n {
        for x in 0..n {
            let target = transform.apply(LatticePoint::new(x, y), modulus);
            out[(target.y * n + target.x) as usize] = c.cells[(y * n + x) as usize];
        }
    }
    Configuration {
        modulus,
        cells: out,
    }
}

/// The partition of the lattice into cat-map cycles.
///
/// Cycles are listed in first-encountered order (row-major scan of the
/// lattice); each cycle's points are in map order starting from its
/// first-encountered point. The lcm of the cycle lengths equals the exact
/// period m_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<LatticePoint>>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<LatticePoint>] {
        &self.cycles
    }

    /// Multiset of cycle lengths as `length -> count`.
    pub fn cycle_lengths(&self) -> BTreeMap<u64, u64> {
        let mut lengths = BTreeMap::new();
        for cycle in &self.cycles {
            *lengths.entry(cycle.len() as u64).or_insert(0) += 1;
        }
        lengths
    }

    pub fn total_points(&self) -> u64 {
        self.cycles.iter().map(|c| c.len() as u64).sum()
    }
}

/// Partitions all n² points into cycles of the canonical map.
pub fn cycle_decomposition(modulus: Modulus) -> Result<CycleDecomposition> {
    let len = grid_len(modulus)?;
    let n = modulus.get();
    let mut visited = vec![false; len];
    let mut cycles = Vec::new();
    for i in 0..len {
        if visited[i] {
            continue;
        }
        let start = LatticePoint::new(i as u64 % n, i as u64 / n);
        let mut cycle = Vec::new();
        let mut p = start;
        loop {
            visited[(p.y * n + p.x) as usize] = true;
            cycle.push(p);
            p = map::apply_point(p, &CatMatrix::CANONICAL, modulus);
            if p == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    Ok(CycleDecomposition { cycles })
}

/// Cycles of one `(cycle_length, value_period)` shape in a recurrence
/// report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleRecurrence {
    pub cycle_length: u64,
    /// Smallest divisor d of the cycle length such that the cell values
    /// along the cycle repeat with period d.
    pub value_period: u64,
    pub count: u64,
}

/// Exact recurrence of a configuration, with the period and bound for
/// context; `recurrence` divides `period`, which never exceeds `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub n: u64,
    /// Least m ≥ 1 with `iterate_configuration(c, m) == c`.
    pub recurrence: u64,
    /// Exact period m_n of the map itself.
    pub period: u64,
    /// Dyson–Falk bound m*; `None` for n = 1, where the bound is undefined.
    pub bound: Option<u64>,
    /// Per-cycle summary sorted by `(cycle_length, value_period)`.
    pub cycles: Vec<CycleRecurrence>,
}

fn minimal_cyclic_period(values: &[u8]) -> u64 {
    let len = values.len();
    for d in 1..=len {
        if !len.is_multiple_of(d) {
            continue;
        }
        if (0..len).all(|i| values[i] == values[(i + d) % len]) {
            return d as u64;
        }
    }
    unreachable!("d = len is always a cyclic period");
}

/// Least iteration count after which the configuration reappears, computed
/// from the cycle structure rather than by re-iterating the grid: each
/// cycle recurs at the minimal period of its value sequence, and the whole
/// configuration recurs at the lcm of those periods.
pub fn configuration_recurrence(c: &Configuration) -> Result<RecurrenceReport> {
    let modulus = c.modulus();
    let n = modulus.get();
    let decomposition = cycle_decomposition(modulus)?;
    let mut recurrence = 1u64;
    let mut summary: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for cycle in decomposition.cycles() {
        let values: Vec<u8> = cycle.iter().map(|&p| c.get(p)).collect();
        let value_period = minimal_cyclic_period(&values);
        recurrence = lcm(recurrence, value_period);
        *summary
            .entry((cycle.len() as u64, value_period))
            .or_insert(0) += 1;
    }
    let period = map::exact_period(modulus)?;
    let bound = if n >= 2 {
        Some(bound::dyson_falk_bound(n)?)
    } else {
        None
    };
    Ok(RecurrenceReport {
        n,
        recurrence,
        period,
        bound,
        cycles: summary
            .into_iter()
            .map(|((cycle_length, value_period), count)| CycleRecurrence {
                cycle_length,
                value_period,
                count,
            })
            .collect(),
    })
}

/// Mean toroidal L1 distance between the images of initially adjacent
/// pixel pairs after `step` iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub step: u64,
    pub mean_distance: f64,
}

/// Toroidal L1 distance: `min(|dx|, n−|dx|) + min(|dy|, n−|dy|)`.
pub fn toroidal_l1(a: LatticePoint, b: LatticePoint, modulus: Modulus) -> u64 {
    let n = modulus.get();
    let dx = a.x.abs_diff(b.x);
    let dy = a.y.abs_diff(b.y);
    dx.min(n - dx) + dy.min(n - dy)
}

/// How far apart initially adjacent pixels drift over `0..=k_max` steps.
///
/// Every horizontally adjacent pair `(p, p + (1, 0))` is tracked for
/// n ≤ 256; above that, pair starts are subsampled with a uniform stride
/// over the row-major scan so at most 256² pairs are tracked. The result
/// is deterministic either way.
pub fn dispersion_curve(modulus: Modulus, k_max: u64) -> Result<Vec<DispersionSample>> {
    let n = modulus.get();
    if n < 2 {
        return Err(Error::Domain(format!(
            "dispersion needs a lattice side of at least 2, got {n}"
        )));
    }
    let len = grid_len(modulus)?;
    const MAX_PAIRS: usize = 256 * 256;
    let stride = len.div_ceil(MAX_PAIRS);
    let mut pairs: Vec<(LatticePoint, LatticePoint)> = (0..len)
        .step_by(stride)
        .map(|i| {
            let p = LatticePoint::new(i as u64 % n, i as u64 / n);
            let q = LatticePoint::new((p.x + 1) % n, p.y);
            (p, q)
        })
        .collect();
    let mut samples = Vec::with_capacity(k_max as usize + 1);
    for step in 0..=k_max {
        let total: u128 = pairs
            .iter()
            .map(|&(p, q)| toroidal_l1(p, q, modulus) as u128)
            .sum();
        samples.push(DispersionSample {
            step,
            mean_distance: total as f64 / pairs.len() as f64,
        });
        if step < k_max {
            for (p, q) in &mut pairs {
                *p = map::apply_point(*p, &CatMatrix::CANONICAL, modulus);
                *q = map::apply_point(*q, &CatMatrix::CANONICAL, modulus);
            }
        }
    }
    Ok(samples)
}
