//! The finite matching calculus over explicit match graphs.
//!
//! A match graph is a finite set of qualia (opaque identifiers) with a
//! symmetric, non-transitive matching relation M, following the
//! constructional system of Goodman's *The Structure of Appearance*. The
//! derived notions implemented here:
//!
//! - **manor** — a quale together with everything that matches it;
//! - **M-path** — a chain of pairwise-matching qualia (the ancestral of M);
//! - **clan** — a set that cannot be split into two mutually non-matching
//!   parts, i.e. a connected set under M;
//! - **category** — a most comprehensive clan: a connected component;
//! - **realm** — a union of selected categories (no extra structure).
//!
//! Matching is deliberately never treated as transitive; only the ancestral
//! is computed, and only where a definition calls for it. Linear span
//! arrays materialize the rule "i matches j iff |i − j| ≤ s" as explicit
//! pairs: the rule itself is input data, not part of the calculus.
//!
//! Set-valued results preserve the input order of the qualia list, so all
//! outputs are deterministic.

use std::collections::{HashMap, HashSet};

use serde::Deserialize;

use crate::error::{Error, Result};

/// A finite set of qualia with a symmetric match relation.
///
/// Self-pairs are not stored: every quale counts as matching itself in
/// manor and M-path semantics, which keeps the data free of redundancy.
#[derive(Debug, Clone)]
pub struct MatchGraph {
    qualia: Vec<String>,
    index: HashMap<String, usize>,
    pairs: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl MatchGraph {
    /// Builds a graph from an ordered quale list and unordered match pairs.
    ///
    /// Rejects duplicate qualia, pairs naming unknown qualia, self-pairs,
    /// and duplicate pairs (in either orientation).
    pub fn new<S: AsRef<str>>(qualia: Vec<String>, matches: &[(S, S)]) -> Result<MatchGraph> {
        let mut index = HashMap::with_capacity(qualia.len());
        for (i, q) in qualia.iter().enumerate() {
            if index.insert(q.clone(), i).is_some() {
                return Err(Error::Format(format!("duplicate quale \"{q}\"")));
            }
        }
        let mut adjacency = vec![Vec::new(); qualia.len()];
        let mut pairs = Vec::with_capacity(matches.len());
        let mut seen = HashSet::with_capacity(matches.len());
        for (a, b) in matches {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::UnknownQuale(a.to_string()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::UnknownQuale(b.to_string()))?;
            if ia == ib {
                return Err(Error::Format(format!("self-pair (\"{a}\", \"{b}\")")));
            }
            let key = (ia.min(ib), ia.max(ib));
            if !seen.insert(key) {
                return Err(Error::Format(format!(
                    "duplicate match pair (\"{a}\", \"{b}\")"
                )));
            }
            adjacency[ia].push(ib);
            adjacency[ib].push(ia);
            pairs.push(key);
        }
        for neighbors in &mut adjacency {
            neighbors.sort_unstable();
        }
        Ok(MatchGraph {
            qualia,
            index,
            pairs,
            adjacency,
        })
    }

    /// Reads the match-graph document format: a JSON object with exactly
    /// two keys, `"qualia"` (a list of identifier strings) and `"matches"`
    /// (a list of two-element identifier lists).
    pub fn from_json(text: &str) -> Result<MatchGraph> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Document {
            qualia: Vec<String>,
            matches: Vec<(String, String)>,
        }
        let doc: Document =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("match graph: {e}")))?;
        MatchGraph::new(doc.qualia, &doc.matches)
    }

    pub fn qualia(&self) -> &[String] {
        &self.qualia
    }

    pub fn len(&self) -> usize {
        self.qualia.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qualia.is_empty()
    }

    pub fn contains(&self, q: &str) -> bool {
        self.index.contains_key(q)
    }

    pub fn match_count(&self) -> usize {
        self.pairs.len()
    }

    fn index_of(&self, q: &str) -> Result<usize> {
        self.index
            .get(q)
            .copied()
            .ok_or_else(|| Error::UnknownQuale(q.to_string()))
    }

    fn names(&self, indices: impl IntoIterator<Item = usize>) -> Vec<String> {
        indices
            .into_iter()
            .map(|i| self.qualia[i].clone())
            .collect()
    }
}

/// A quale and everything that matches it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manor {
    pub center: String,
    /// The center plus its matches, in input order.
    pub members: Vec<String>,
}

/// The manor of `q`: `{q} ∪ {p : p matches q}`.
pub fn manor_of(g: &MatchGraph, q: &str) -> Result<Manor> {
    let center = g.index_of(q)?;
    let mut ids: Vec<usize> = g.adjacency[center].clone();
    ids.push(center);
    ids.sort_unstable();
    Ok(Manor {
        center: q.to_string(),
        members: g.names(ids),
    })
}

/// Whether the ancestral of M joins `a` and `b`; `a == b` counts (a
/// zero-length path).
pub fn is_m_path(g: &MatchGraph, a: &str, b: &str) -> Result<bool> {
    let ia = g.index_of(a)?;
    let ib = g.index_of(b)?;
    let mut components = UnionFind::new(g.len());
    for &(x, y) in &g.pairs {
        components.union(x, y);
    }
    Ok(components.find(ia) == components.find(ib))
}

/// Disjoint clans covering all qualia.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClanPartition {
    /// Maximal clans in first-seen order; members in input order.
    pub clans: Vec<Vec<String>>,
}

/// Partitions the qualia into maximal clans — the connected components of
/// the match relation. A single quale with no matches is its own clan.
pub fn clan_partition(g: &MatchGraph) -> ClanPartition {
    let mut components = UnionFind::new(g.len());
    for &(a, b) in &g.pairs {
        components.union(a, b);
    }
    let mut clan_of_root: HashMap<usize, usize> = HashMap::new();
    let mut clans: Vec<Vec<usize>> = Vec::new();
    for i in 0..g.len() {
        let root = components.find(i);
        let slot = *clan_of_root.entry(root).or_insert_with(|| {
            clans.push(Vec::new());
            clans.len() - 1
        });
        clans[slot].push(i);
    }
    ClanPartition {
        clans: clans.into_iter().map(|ids| g.names(ids)).collect(),
    }
}

/// The quale-categories: most comprehensive clans, i.e. exactly the
/// connected components. Each category contains every quale matching any
/// of its members; a realm is nothing more than a union of categories.
pub fn categories(g: &MatchGraph) -> Vec<Vec<String>> {
    clan_partition(g).clans
}

/// Qualia labeled `"1"..="count"` where i matches j iff `|i − j| <= span`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearSpanArray {
    pub count: u64,
    pub span: u64,
}

/// Materializes the span rule as explicit match pairs.
pub fn expand_linear_span(arr: &LinearSpanArray) -> MatchGraph {
    let qualia: Vec<String> = (1..=arr.count).map(|i| i.to_string()).collect();
    let mut matches = Vec::new();
    for i in 1..=arr.count {
        let upper = i.saturating_add(arr.span).min(arr.count);
        for j in i + 1..=upper {
            matches.push((i.to_string(), j.to_string()));
        }
    }
    MatchGraph::new(qualia, &matches).expect("span pairs are distinct and in range")
}

/// Regular network shapes with closed-form maximum manor sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkKind {
    SquareCell,
    TriangularCell,
    CubicalCell,
}

/// Closed-form maximum manor size for a network with matching distance n:
/// square `1 + 2n(n+1)`, triangular `1 + 3n(n+1)`, cubical
/// `1 + 2n + 2n(n+1)(2n+1)/3` (the division is exact).
pub fn max_manor_size(kind: NetworkKind, n: u64) -> Result<u64> {
    let n = n as u128;
    let value = match kind {
        NetworkKind::SquareCell => Some(1 + 2 * n * (n + 1)),
        NetworkKind::TriangularCell => Some(1 + 3 * n * (n + 1)),
        NetworkKind::CubicalCell => 2u128
            .checked_mul(n)
            .and_then(|t| t.checked_mul(n + 1))
            .and_then(|t| t.checked_mul(2 * n + 1))
            .map(|t| {
                debug_assert_eq!(t % 3, 0);
                1 + 2 * n + t / 3
            }),
    };
    value
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| Error::Domain(format!("maximum manor size overflows for n = {n}")))
}

/// Counts lattice cells within matching distance n of a central cell by
/// breadth-first expansion: the square lattice with 4-neighbor adjacency,
/// the triangular point lattice with 6-neighbor adjacency (axial hex
/// coordinates), and the cubic lattice with 6-neighbor adjacency.
///
/// Independent oracle for [`max_manor_size`]; capped at n = 20.
pub fn brute_force_max_manor(kind: NetworkKind, n: u64) -> Result<u64> {
    if n > 20 {
        return Err(Error::Domain(format!(
            "brute-force manor count is capped at n = 20, got {n}"
        )));
    }
    let neighbors: &[(i64, i64, i64)] = match kind {
        NetworkKind::SquareCell => &[(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)],
        NetworkKind::TriangularCell => &[
            (1, 0, 0),
            (-1, 0, 0),
            (0, 1, 0),
            (0, -1, 0),
            (1, -1, 0),
            (-1, 1, 0),
        ],
        NetworkKind::CubicalCell => &[
            (1, 0, 0),
            (-1, 0, 0),
            (0, 1, 0),
            (0, -1, 0),
            (0, 0, 1),
            (0, 0, -1),
        ],
    };
    let mut visited: HashSet<(i64, i64, i64)> = HashSet::new();
    visited.insert((0, 0, 0));
    let mut frontier = vec![(0i64, 0i64, 0i64)];
    for _ in 0..n {
        let mut next = Vec::new();
        for cell in frontier {
            for d in neighbors {
                let candidate = (cell.0 + d.0, cell.1 + d.1, cell.2 + d.2);
                if visited.insert(candidate) {
                    next.push(candidate);
                }
            }
        }
        frontier = next;
    }
    Ok(visited.len() as u64)
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}
