//! Strategy profiles, the undirected graphs they induce, and unweighted
//! shortest-path distances.
//!
//! Node sets are `u64` bitsets, so every graph here has at most
//! [`MAX_PLAYERS`](crate::MAX_PLAYERS) nodes. Breadth-first search runs
//! level by level on whole bitsets.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::MAX_PLAYERS;

/// Index of a player in `0..n`.
pub type PlayerId = usize;

/// A set of players stored as a bitset.
///
/// Ordering is lexicographic on the ascending element sequence, so
/// `{} < {0} < {0, 1} < {0, 2} < {1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PlayerSet(u64);

impl PlayerSet {
    pub const EMPTY: PlayerSet = PlayerSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        PlayerSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, 1, .., n-1}`.
    pub fn all(n: usize) -> Self {
        PlayerSet(full_mask(n))
    }

    pub fn singleton(i: PlayerId) -> Self {
        PlayerSet(1u64 << i)
    }

    pub fn contains(self, i: PlayerId) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn with(self, i: PlayerId) -> Self {
        PlayerSet(self.0 | (1u64 << i))
    }

    pub fn without(self, i: PlayerId) -> Self {
        PlayerSet(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Largest element plus one, or 0 for the empty set.
    pub fn bound(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Bits {
        Bits(self.0)
    }

    pub fn to_vec(self) -> Vec<PlayerId> {
        self.iter().collect()
    }
}

impl Ord for PlayerSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // First position where the sorted sequences differ.
        let low = diff & diff.wrapping_neg();
        let above = !(low | (low - 1));
        if self.0 & low != 0 {
            // Self has `low`; other continues with something larger or ends.
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for PlayerSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::BitAnd for PlayerSet {
    type Output = PlayerSet;

    fn bitand(self, rhs: PlayerSet) -> PlayerSet {
        PlayerSet::from_bits(self.bits() & rhs.bits())
    }
}

impl std::ops::Not for PlayerSet {
    type Output = PlayerSet;

    fn not(self) -> PlayerSet {
        PlayerSet::from_bits(!self.bits())
    }
}

impl FromIterator<PlayerId> for PlayerSet {
    fn from_iter<T: IntoIterator<Item = PlayerId>>(iter: T) -> Self {
        iter.into_iter().fold(PlayerSet::EMPTY, PlayerSet::with)
    }
}

impl IntoIterator for PlayerSet {
    type Item = PlayerId;
    type IntoIter = Bits;

    fn into_iter(self) -> Bits {
        self.iter()
    }
}

impl fmt::Debug for PlayerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PlayerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for PlayerSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for PlayerSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = items.iter().find(|&&i| i >= MAX_PLAYERS) {
            return Err(serde::de::Error::custom(format!(
                "player index {bad} exceeds the supported maximum {}",
                MAX_PLAYERS - 1
            )));
        }
        Ok(items.into_iter().collect())
    }
}

/// Ascending iterator over the bits of a `u64`.
#[derive(Clone, Debug)]
pub struct Bits(u64);

impl Iterator for Bits {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Bits {}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Spreads the `n - 1` low bits of `k` over positions `0..n`, skipping `skip`.
pub(crate) fn spread_around(k: u64, skip: usize) -> u64 {
    let low = (1u64 << skip) - 1;
    (k & low) | ((k & !low) << 1)
}

/// The purchase sets of all players.
///
/// A player never buys an edge to itself and only names players in `0..n`.
/// Mutual purchases (`j` in `s_i` and `i` in `s_j`) are allowed: the graph
/// has one edge, but both buyers pay.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile {
    purchases: Vec<PlayerSet>,
}

impl StrategyProfile {
    /// Builds a profile from index lists. Rejects self-links, out-of-range
    /// indices and repeated indices within one list.
    pub fn new(purchases: Vec<Vec<PlayerId>>) -> Result<Self> {
        let n = purchases.len();
        check_player_count(n)?;
        let mut sets = Vec::with_capacity(n);
        for (i, list) in purchases.iter().enumerate() {
            let mut set = PlayerSet::EMPTY;
            for (k, &j) in list.iter().enumerate() {
                if j >= n {
                    return Err(Error::invalid(format!(
                        "profile[{i}][{k}]: index {j} out of range for n = {n}"
                    )));
                }
                if j == i {
                    return Err(Error::invalid(format!(
                        "profile[{i}][{k}]: player {i} cannot buy an edge to itself"
                    )));
                }
                if set.contains(j) {
                    return Err(Error::invalid(format!(
                        "profile[{i}][{k}]: duplicate purchase of {j}"
                    )));
                }
                set = set.with(j);
            }
            sets.push(set);
        }
        Ok(StrategyProfile { purchases: sets })
    }

    pub fn from_sets(purchases: Vec<PlayerSet>) -> Result<Self> {
        let n = purchases.len();
        check_player_count(n)?;
        let allowed = full_mask(n);
        for (i, s) in purchases.iter().enumerate() {
            if s.contains(i) {
                return Err(Error::invalid(format!(
                    "profile[{i}]: player {i} cannot buy an edge to itself"
                )));
            }
            if s.bits() & !allowed != 0 {
                return Err(Error::invalid(format!(
                    "profile[{i}]: index {} out of range for n = {n}",
                    s.bound() - 1
                )));
            }
        }
        Ok(StrategyProfile { purchases })
    }

    /// Nobody buys anything.
    pub fn empty(n: usize) -> Self {
        StrategyProfile {
            purchases: vec![PlayerSet::EMPTY; n],
        }
    }

    pub(crate) fn from_sets_unchecked(purchases: Vec<PlayerSet>) -> Self {
        StrategyProfile { purchases }
    }

    pub fn n(&self) -> usize {
        self.purchases.len()
    }

    pub fn purchases(&self, i: PlayerId) -> PlayerSet {
        self.purchases[i]
    }

    pub fn sets(&self) -> &[PlayerSet] {
        &self.purchases
    }

    /// Total number of purchases, counting mutual purchases twice.
    pub fn total_purchases(&self) -> usize {
        self.purchases.iter().map(|s| s.len()).sum()
    }

    /// The same profile with player `i` switched to `strategy`.
    pub fn with_strategy(&self, i: PlayerId, strategy: PlayerSet) -> Result<Self> {
        let n = self.n();
        if i >= n {
            return Err(Error::invalid(format!("player {i} out of range for n = {n}")));
        }
        let mut purchases = self.purchases.clone();
        purchases[i] = strategy;
        Self::from_sets(purchases)
    }

    pub fn to_lists(&self) -> Vec<Vec<PlayerId>> {
        self.purchases.iter().map(|s| s.to_vec()).collect()
    }

    /// Number of edges bought by both endpoints.
    pub fn duplicate_purchases(&self) -> usize {
        self.purchases
            .iter()
            .enumerate()
            .map(|(i, s)| s.iter().filter(|&j| j > i && self.purchases[j].contains(i)).count())
            .sum()
    }

    pub fn induced_graph(&self) -> UndirectedGraph {
        induced_graph(self)
    }

    pub(crate) fn adjacency(&self) -> Vec<u64> {
        let mut adj: Vec<u64> = self.purchases.iter().map(|s| s.bits()).collect();
        for (i, s) in self.purchases.iter().enumerate() {
            for j in s.iter() {
                adj[j] |= 1u64 << i;
            }
        }
        adj
    }
}

impl fmt::Debug for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.purchases.iter()).finish()
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.purchases.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for StrategyProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.purchases.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StrategyProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lists = Vec::<Vec<usize>>::deserialize(d)?;
        StrategyProfile::new(lists).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_player_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("a game needs at least one player"));
    }
    if n > MAX_PLAYERS {
        return Err(Error::invalid(format!(
            "{n} players exceeds the supported maximum of {MAX_PLAYERS}"
        )));
    }
    Ok(())
}

/// Simple undirected graph on `0..n`, stored as adjacency bitsets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UndirectedGraph {
    adjacency: Vec<u64>,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        UndirectedGraph {
            adjacency: vec![0; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let all = full_mask(n);
        UndirectedGraph {
            adjacency: (0..n).map(|v| all & !(1u64 << v)).collect(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(PlayerId, PlayerId)]) -> Result<Self> {
        if n > MAX_PLAYERS {
            return Err(Error::invalid(format!(
                "{n} nodes exceeds the supported maximum of {MAX_PLAYERS}"
            )));
        }
        let mut adjacency = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            adjacency[u] |= 1u64 << v;
            adjacency[v] |= 1u64 << u;
        }
        Ok(UndirectedGraph { adjacency })
    }

    /// Graph whose edge set is given by the bits of `mask`, one bit per pair
    /// in the order `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut adjacency = vec![0u64; n];
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask & (1u64 << bit) != 0 {
                    adjacency[u] |= 1u64 << v;
                    adjacency[v] |= 1u64 << u;
                }
                bit += 1;
            }
        }
        UndirectedGraph { adjacency }
    }

    pub(crate) fn from_adjacency(adjacency: Vec<u64>) -> Self {
        UndirectedGraph { adjacency }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, u: PlayerId, v: PlayerId) -> bool {
        u < self.n() && self.adjacency[u] & (1u64 << v) != 0
    }

    pub fn neighbors(&self, v: PlayerId) -> PlayerSet {
        PlayerSet(self.adjacency[v])
    }

    pub fn degree(&self, v: PlayerId) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (PlayerId, PlayerId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, &a)| Bits(a & !full_mask(u + 1)).map(move |v| (u, v)))
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.n() && self.is_connected()
    }

    /// A tree with one node adjacent to all others. Graphs on one or two
    /// nodes count when connected.
    pub fn is_star(&self) -> bool {
        let n = self.n();
        self.is_tree() && (n <= 2 || (0..n).any(|v| self.degree(v) == n - 1))
    }

    /// Nodes `0..j` form a clique, nodes `j..n` are pairwise non-adjacent, and
    /// every node in `j..n` is adjacent to all of `0..j` (`require_all`) or to
    /// at least one of them.
    pub fn is_clique_with_periphery(&self, j: usize, require_all: bool) -> bool {
        let n = self.n();
        if j > n {
            return false;
        }
        let core = full_mask(j);
        let periphery = full_mask(n) & !core;
        for v in 0..n {
            let a = self.adjacency[v];
            if v < j {
                if a & core != core & !(1u64 << v) {
                    return false;
                }
            } else {
                if a & periphery != 0 {
                    return false;
                }
                let ok = if require_all { a & core == core } else { a & core != 0 };
                if !ok && j > 0 {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn adjacency(&self) -> &[u64] {
        &self.adjacency
    }
}

impl fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UndirectedGraph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Edge `{i, j}` is present iff `j` is in `s_i` or `i` is in `s_j`.
pub fn induced_graph(profile: &StrategyProfile) -> UndirectedGraph {
    UndirectedGraph::from_adjacency(profile.adjacency())
}

/// Hop count between two nodes, or [`Distance::UNREACHABLE`].
///
/// Addition saturates: anything plus `UNREACHABLE` is `UNREACHABLE`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distance(u32);

impl Distance {
    pub const ZERO: Distance = Distance(0);
    pub const UNREACHABLE: Distance = Distance(u32::MAX);

    pub fn new(hops: u32) -> Self {
        assert!(hops != u32::MAX, "hop count collides with the unreachable sentinel");
        Distance(hops)
    }

    pub fn get(self) -> Option<u32> {
        self.is_reachable().then_some(self.0)
    }

    pub fn is_reachable(self) -> bool {
        self.0 != u32::MAX
    }
}

impl Add for Distance {
    type Output = Distance;

    fn add(self, rhs: Distance) -> Distance {
        if !self.is_reachable() || !rhs.is_reachable() {
            Distance::UNREACHABLE
        } else {
            Distance(self.0.saturating_add(rhs.0).min(u32::MAX - 1))
        }
    }
}

impl fmt::Debug for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("unreachable"),
        }
    }
}

/// All-pairs hop distances, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    cells: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: PlayerId, j: PlayerId) -> Distance {
        self.cells[i * self.n + j]
    }

    pub fn row(&self, i: PlayerId) -> &[Distance] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    /// Sum of row `i`, or `None` if some node is unreachable from `i`.
    pub fn row_sum(&self, i: PlayerId) -> Option<u64> {
        self.row(i).iter().map(|d| d.get().map(u64::from)).sum()
    }

    /// Sum over all ordered pairs, or `None` if the graph is disconnected.
    pub fn total(&self) -> Option<u64> {
        (0..self.n).map(|i| self.row_sum(i)).sum()
    }
}

impl fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.n).map(|i| self.row(i)))
            .finish()
    }
}

/// Breadth-first search from every source.
pub fn all_pairs_distances(graph: &UndirectedGraph) -> DistanceMatrix {
    let n = graph.n();
    let mut cells = vec![Distance::UNREACHABLE; n * n];
    for src in 0..n {
        let row = &mut cells[src * n..(src + 1) * n];
        row[src] = Distance::ZERO;
        let mut visited = 1u64 << src;
        let mut frontier = visited;
        let mut depth = 0;
        while frontier != 0 {
            depth += 1;
            let mut next = 0u64;
            for v in Bits(frontier) {
                next |= graph.adjacency[v];
            }
            next &= !visited;
            for v in Bits(next) {
                row[v] = Distance(depth);
            }
            visited |= next;
            frontier = next;
        }
    }
    DistanceMatrix { n, cells }
}

/// True iff every pair of nodes is mutually reachable. Zero or one node is
/// connected.
pub fn is_connected(graph: &UndirectedGraph) -> bool {
    let n = graph.n();
    if n <= 1 {
        return true;
    }
    let all = full_mask(n);
    let mut visited = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        for v in Bits(frontier) {
            next |= graph.adjacency[v];
        }
        next &= !visited;
        visited |= next;
        frontier = next;
    }
    visited == all
}

/// Sum of hop distances from `src` when its neighbourhood is `first_hop`
/// and every other node keeps its `adjacency` row. Edges back into `src` are
/// irrelevant because `src` is visited first, which lets callers swap in a
/// candidate purchase set for `src` without rebuilding the graph.
/// Returns `None` if some node stays unreachable.
#[inline]
pub(crate) fn distance_sum_via(adjacency: &[u64], src: usize, first_hop: u64) -> Option<u64> {
    let all = full_mask(adjacency.len());
    let mut visited = (1u64 << src) | first_hop;
    let mut frontier = first_hop & !(1u64 << src);
    let mut sum = u64::from(frontier.count_ones());
    let mut depth = 1u64;
    while frontier != 0 {
        depth += 1;
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            next |= adjacency[f.trailing_zeros() as usize];
            f &= f - 1;
        }
        next &= !visited;
        visited |= next;
        sum += depth * u64::from(next.count_ones());
        frontier = next;
    }
    (visited == all).then_some(sum)
}

#[inline]
pub(crate) fn distance_sum_from(adjacency: &[u64], src: usize) -> Option<u64> {
    distance_sum_via(adjacency, src, adjacency[src])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> UndirectedGraph {
        UndirectedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn induced_graph_of_empty_profile_has_no_edges() {
        let g = induced_graph(&StrategyProfile::empty(3));
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn mutual_purchase_is_one_edge() {
        let p = StrategyProfile::new(vec![vec![1], vec![0], vec![]]).unwrap();
        let g = induced_graph(&p);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(p.duplicate_purchases(), 1);
        assert_eq!(p.total_purchases(), 2);
    }

    #[test]
    fn union_of_purchases_on_three_nodes() {
        let p = StrategyProfile::new(vec![vec![1, 2], vec![2], vec![]]).unwrap();
        let g = induced_graph(&p);
        // Union by hand: s_0 gives {0,1},{0,2}; s_1 gives {1,2}.
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(g.is_complete());
    }

    #[test]
    fn profile_validation() {
        assert!(StrategyProfile::new(vec![vec![0], vec![]]).is_err());
        assert!(StrategyProfile::new(vec![vec![2], vec![]]).is_err());
        assert!(StrategyProfile::new(vec![vec![1, 1], vec![]]).is_err());
        assert!(StrategyProfile::new(vec![]).is_err());
        assert!(StrategyProfile::from_sets(vec![PlayerSet::singleton(0), PlayerSet::EMPTY]).is_err());
        assert!(StrategyProfile::from_sets(vec![PlayerSet::singleton(3), PlayerSet::EMPTY]).is_err());
    }

    #[test]
    fn path_distances() {
        let d = all_pairs_distances(&path3());
        assert_eq!(d.get(0, 2).get(), Some(2));
        assert_eq!(d.get(0, 1).get(), Some(1));
        assert_eq!(d.row_sum(0), Some(3));
        assert_eq!(d.total(), Some(8));
    }

    #[test]
    fn disconnected_pair_is_unreachable() {
        let d = all_pairs_distances(&UndirectedGraph::empty(2));
        assert_eq!(d.get(0, 1), Distance::UNREACHABLE);
        assert_eq!(d.row_sum(0), None);
        assert_eq!(d.total(), None);
    }

    #[test]
    fn clique_distances_are_one() {
        let d = all_pairs_distances(&UndirectedGraph::complete(4));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(d.get(i, j).get(), Some(u32::from(i != j)));
            }
        }
    }

    #[test]
    fn unreachable_saturates() {
        assert_eq!(Distance::new(3) + Distance::UNREACHABLE, Distance::UNREACHABLE);
        assert_eq!(Distance::UNREACHABLE + Distance::ZERO, Distance::UNREACHABLE);
        assert_eq!(Distance::new(3) + Distance::new(4), Distance::new(7));
        assert!(Distance::new(1_000_000) < Distance::UNREACHABLE);
    }

    #[test]
    fn connectivity() {
        let star = UndirectedGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(is_connected(&star));
        assert!(star.is_star());
        assert!(!is_connected(&UndirectedGraph::empty(2)));
        assert!(is_connected(&UndirectedGraph::empty(1)));
        assert!(UndirectedGraph::empty(1).is_star());
        assert!(!path3().is_complete());
        assert!(path3().is_star());
        let path4 = UndirectedGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(path4.is_tree() && !path4.is_star());
    }

    #[test]
    fn clique_with_periphery_predicate() {
        // Clique {0,1}; 2 and 3 adjacent to both.
        let g = UndirectedGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(g.is_clique_with_periphery(2, true));
        assert!(!g.is_clique_with_periphery(1, true));
        let h = UndirectedGraph::from_edges(4, &[(0, 1), (0, 2), (1, 3)]).unwrap();
        assert!(!h.is_clique_with_periphery(2, true));
        assert!(h.is_clique_with_periphery(2, false));
        assert!(UndirectedGraph::complete(4).is_clique_with_periphery(4, true));
    }

    #[test]
    fn player_set_order_is_lexicographic() {
        let s = |v: &[usize]| v.iter().copied().collect::<PlayerSet>();
        let mut sets = vec![s(&[1]), s(&[0, 2]), s(&[]), s(&[0, 1]), s(&[0]), s(&[2]), s(&[0, 1, 2])];
        sets.sort();
        assert_eq!(
            sets,
            vec![s(&[]), s(&[0]), s(&[0, 1]), s(&[0, 1, 2]), s(&[0, 2]), s(&[1]), s(&[2])]
        );
    }

    #[test]
    fn spread_skips_position() {
        assert_eq!(spread_around(0b11, 0), 0b110);
        assert_eq!(spread_around(0b11, 1), 0b101);
        assert_eq!(spread_around(0b11, 2), 0b011);
    }

    #[test]
    fn pair_mask_order() {
        let g = UndirectedGraph::from_pair_mask(3, 0b100);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    fn arb_graph() -> impl Strategy<Value = UndirectedGraph> {
        (1usize..=7).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), 0u64..(1u64 << pairs)).prop_map(|(n, m)| UndirectedGraph::from_pair_mask(n, m))
        })
    }

    fn arb_profile() -> impl Strategy<Value = StrategyProfile> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(0u64..(1u64 << n), n).prop_map(move |raw| {
                let sets = raw
                    .into_iter()
                    .enumerate()
                    .map(|(i, b)| PlayerSet::from_bits(b).without(i))
                    .collect();
                StrategyProfile::from_sets(sets).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn induced_graph_is_symmetric_and_loop_free(p in arb_profile()) {
            let g = induced_graph(&p);
            for u in 0..p.n() {
                prop_assert!(!g.has_edge(u, u));
                for v in 0..p.n() {
                    prop_assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
                    prop_assert_eq!(
                        g.has_edge(u, v),
                        p.purchases(u).contains(v) || p.purchases(v).contains(u)
                    );
                }
            }
        }

        #[test]
        fn distance_matrix_invariants(g in arb_graph()) {
            let d = all_pairs_distances(&g);
            let n = g.n();
            for i in 0..n {
                prop_assert_eq!(d.get(i, i), Distance::ZERO);
                for j in 0..n {
                    prop_assert_eq!(d.get(i, j), d.get(j, i));
                    prop_assert_eq!(d.get(i, j).get() == Some(1), g.has_edge(i, j));
                    for k in 0..n {
                        let via = d.get(i, k) + d.get(k, j);
                        if via.is_reachable() {
                            prop_assert!(d.get(i, j) <= via);
                        }
                    }
                }
            }
            prop_assert_eq!(d.total().is_some(), is_connected(&g));
            for i in 0..n {
                prop_assert_eq!(d.row_sum(i), distance_sum_from(g.adjacency(), i));
            }
        }

        #[test]
        fn player_set_round_trips_through_vec(bits in any::<u64>()) {
            let s = PlayerSet::from_bits(bits);
            prop_assert_eq!(s.to_vec().into_iter().collect::<PlayerSet>(), s);
            prop_assert_eq!(s.len(), s.iter().count());
        }

        #[test]
        fn player_set_order_matches_sorted_vectors(a in 0u64..256, b in 0u64..256) {
            let (x, y) = (PlayerSet::from_bits(a), PlayerSet::from_bits(b));
            prop_assert_eq!(x.cmp(&y), x.to_vec().cmp(&y.to_vec()));
        }
    }
}
