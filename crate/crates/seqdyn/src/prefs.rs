//! Preference relations over outcomes: classification (acyclic, strict
//! weak order, strict linear order), the two forbidden patterns, and
//! layer partitions.
//!
//! Relations are raw sets of ordered pairs `(a, b)` meaning `a ≺ b`.
//! Nothing is assumed: irreflexivity, transitivity and the rest are
//! classified, not enforced.

use serde::Serialize;
use thiserror::Error;

use crate::game::{OutcomeIdx, PlayerIdx};

/// Bound on exhaustive layer / linear-extension searches. Ordered set
/// partitions grow like the Fubini numbers (545 835 at eight outcomes).
pub const ORACLE_MAX_OUTCOMES: usize = 8;

#[derive(Debug, Error)]
pub enum PrefsError {
    #[error("preferences of player index {player} are not a strict weak order")]
    NotStrictWeakOrder { player: PlayerIdx },
    #[error("operation supports at most {max} outcomes, got {got}")]
    TooManyOutcomes { max: usize, got: usize },
    #[error("operation needs exactly two players, got {got}")]
    NotTwoPlayers { got: usize },
}

/// A binary relation over outcomes `0..n`, `lt(a, b)` meaning `a ≺ b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreferenceRelation {
    n: usize,
    lt: Vec<bool>,
}

impl PreferenceRelation {
    pub fn empty(n: usize) -> Self {
        PreferenceRelation { n, lt: vec![false; n * n] }
    }

    pub fn from_pairs(n: usize, pairs: &[(OutcomeIdx, OutcomeIdx)]) -> Self {
        let mut rel = Self::empty(n);
        for &(a, b) in pairs {
            rel.insert(a, b);
        }
        rel
    }

    /// Expand indifference classes (least preferred first) into a strict
    /// weak order: `a ≺ b` iff `a`'s class precedes `b`'s.
    pub fn from_ranking(n: usize, classes: &[Vec<OutcomeIdx>]) -> Self {
        let mut rel = Self::empty(n);
        for (lo, low_class) in classes.iter().enumerate() {
            for high_class in &classes[lo + 1..] {
                for &a in low_class {
                    for &b in high_class {
                        rel.insert(a, b);
                    }
                }
            }
        }
        rel
    }

    /// Strict linear order given as a sequence, least preferred first.
    pub fn from_order(order: &[OutcomeIdx]) -> Self {
        let n = order.len();
        let mut rel = Self::empty(n);
        for (i, &a) in order.iter().enumerate() {
            for &b in &order[i + 1..] {
                rel.insert(a, b);
            }
        }
        rel
    }

    pub fn insert(&mut self, a: OutcomeIdx, b: OutcomeIdx) {
        assert!(a < self.n && b < self.n, "outcome index out of range");
        self.lt[a * self.n + b] = true;
    }

    pub fn n_outcomes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lt(&self, a: OutcomeIdx, b: OutcomeIdx) -> bool {
        self.lt[a * self.n + b]
    }

    /// Incomparability: distinct and ordered in neither direction.
    #[inline]
    pub fn sim(&self, a: OutcomeIdx, b: OutcomeIdx) -> bool {
        a != b && !self.lt(a, b) && !self.lt(b, a)
    }

    /// All pairs `(a, b)` with `a ≺ b`, sorted.
    pub fn pairs(&self) -> Vec<(OutcomeIdx, OutcomeIdx)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// No directed cycle in the pair digraph (a reflexive pair counts as
    /// a cycle of length one).
    pub fn is_acyclic(&self) -> bool {
        // Iterative three-colour depth-first search.
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut colour = vec![WHITE; self.n];
        for start in 0..self.n {
            if colour[start] != WHITE {
                continue;
            }
            colour[start] = GREY;
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            while let Some(&(v, next)) = stack.last() {
                if next >= self.n {
                    colour[v] = BLACK;
                    stack.pop();
                    continue;
                }
                stack.last_mut().unwrap().1 += 1;
                if !self.lt(v, next) {
                    continue;
                }
                match colour[next] {
                    GREY => return false,
                    WHITE => {
                        colour[next] = GREY;
                        stack.push((next, 0));
                    }
                    _ => {}
                }
            }
        }
        true
    }

    /// Irreflexive, transitive, and with transitive incomparability.
    pub fn is_strict_weak_order(&self) -> bool {
        for a in 0..self.n {
            if self.lt(a, a) {
                return false;
            }
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.lt(a, b) {
                    continue;
                }
                for c in 0..self.n {
                    if self.lt(b, c) && !self.lt(a, c) {
                        return false;
                    }
                }
            }
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.sim(a, b) {
                    continue;
                }
                for c in 0..self.n {
                    if c != a && self.sim(b, c) && !self.sim(a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// A strict weak order with no incomparable pair.
    pub fn is_strict_linear_order(&self) -> bool {
        if !self.is_strict_weak_order() {
            return false;
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.sim(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// All strict linear extensions, each as an order (least preferred
    /// first), enumerated lexicographically. Empty when the relation is
    /// cyclic. Guarded at [`ORACLE_MAX_OUTCOMES`].
    pub fn linear_extensions(&self) -> Result<Vec<Vec<OutcomeIdx>>, PrefsError> {
        if self.n > ORACLE_MAX_OUTCOMES {
            return Err(PrefsError::TooManyOutcomes { max: ORACLE_MAX_OUTCOMES, got: self.n });
        }
        let mut out = Vec::new();
        let mut remaining: Vec<bool> = vec![true; self.n];
        let mut order = Vec::with_capacity(self.n);
        self.extend_order(&mut remaining, &mut order, &mut out);
        Ok(out)
    }

    fn extend_order(&self, remaining: &mut Vec<bool>, order: &mut Vec<OutcomeIdx>, out: &mut Vec<Vec<OutcomeIdx>>) {
        if order.len() == self.n {
            out.push(order.clone());
            return;
        }
        for cand in 0..self.n {
            if !remaining[cand] {
                continue;
            }
            // Minimal among the remaining elements: nothing left below it.
            if (0..self.n).any(|other| remaining[other] && self.lt(other, cand)) {
                continue;
            }
            remaining[cand] = false;
            order.push(cand);
            self.extend_order(remaining, order, out);
            order.pop();
            remaining[cand] = true;
        }
    }
}

// ---------------------------------------------------------------------------
// Forbidden patterns
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct MainPatternWitness {
    pub x: OutcomeIdx,
    pub y: OutcomeIdx,
    pub z: OutcomeIdx,
    pub i: PlayerIdx,
    pub j: PlayerIdx,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct SecondaryPatternWitness {
    pub w: OutcomeIdx,
    pub x: OutcomeIdx,
    pub y: OutcomeIdx,
    pub z: OutcomeIdx,
    pub i: PlayerIdx,
    pub j: PlayerIdx,
}

/// First occurrence of `x ≺_i y ≺_i z` with `y ≺_j z ≺_j x`, scanning
/// distinct outcome triples lexicographically, then player pairs. The
/// quantification includes `i = j`, which is unsatisfiable for orders.
pub fn main_pattern_witness(rels: &[PreferenceRelation]) -> Option<MainPatternWitness> {
    let n = rels.first().map_or(0, |r| r.n_outcomes());
    for x in 0..n {
        for y in 0..n {
            if y == x {
                continue;
            }
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                for (i, ri) in rels.iter().enumerate() {
                    if !(ri.lt(x, y) && ri.lt(y, z)) {
                        continue;
                    }
                    for (j, rj) in rels.iter().enumerate() {
                        if rj.lt(y, z) && rj.lt(z, x) {
                            return Some(MainPatternWitness { x, y, z, i, j });
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn out_of_main_pattern(rels: &[PreferenceRelation]) -> bool {
    main_pattern_witness(rels).is_none()
}

/// First occurrence of `w ≺_i x ≺_i y ≺_i z` with `x ∼_j z ≺_j w ∼_j y`.
pub fn secondary_pattern_witness(rels: &[PreferenceRelation]) -> Option<SecondaryPatternWitness> {
    let n = rels.first().map_or(0, |r| r.n_outcomes());
    for w in 0..n {
        for x in 0..n {
            if x == w {
                continue;
            }
            for y in 0..n {
                if y == w || y == x {
                    continue;
                }
                for z in 0..n {
                    if z == w || z == x || z == y {
                        continue;
                    }
                    for (i, ri) in rels.iter().enumerate() {
                        if !(ri.lt(w, x) && ri.lt(x, y) && ri.lt(y, z)) {
                            continue;
                        }
                        for (j, rj) in rels.iter().enumerate() {
                            if rj.sim(x, z) && rj.lt(z, w) && rj.lt(x, w) && rj.sim(w, y) && rj.lt(z, y) && rj.lt(x, y) {
                                return Some(SecondaryPatternWitness { w, x, y, z, i, j });
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn out_of_secondary_pattern(rels: &[PreferenceRelation]) -> bool {
    secondary_pattern_witness(rels).is_none()
}

/// Out of both the main and the secondary pattern.
pub fn out_of_pattern(rels: &[PreferenceRelation]) -> bool {
    out_of_main_pattern(rels) && out_of_secondary_pattern(rels)
}

// ---------------------------------------------------------------------------
// Layering
// ---------------------------------------------------------------------------

/// An ordered partition of the outcomes, least preferred layer first.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LayerPartition {
    pub layers: Vec<Vec<OutcomeIdx>>,
}

/// Both layering conditions against a candidate ordered partition:
/// (1) for layers λ < μ, no player puts anything of μ strictly below
///     anything of λ;
/// (2) within a layer, no two players agree on one pair while disagreeing
///     on another (quantified with repetitions allowed).
pub fn satisfies_layering(n: usize, rels: &[PreferenceRelation], layers: &[Vec<OutcomeIdx>]) -> bool {
    let mut seen = vec![false; n];
    for layer in layers {
        for &o in layer {
            if o >= n || seen[o] {
                return false;
            }
            seen[o] = true;
        }
        if layer.is_empty() {
            return false;
        }
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    for (lo, lower) in layers.iter().enumerate() {
        for upper in &layers[lo + 1..] {
            for rel in rels {
                for &x in lower {
                    for &y in upper {
                        if rel.lt(y, x) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    for layer in layers {
        if !layer_agreement_ok(rels, layer) {
            return false;
        }
    }
    true
}

/// Condition (2) for a single layer. A violating quadruple exists iff
/// some player pair both agrees on some pair and disagrees on another,
/// since its four variables form two independent pairs.
fn layer_agreement_ok(rels: &[PreferenceRelation], layer: &[OutcomeIdx]) -> bool {
    for (i, ri) in rels.iter().enumerate() {
        for (j, rj) in rels.iter().enumerate() {
            if j < i {
                continue;
            }
            let mut agree = false;
            let mut disagree = false;
            for &a in layer {
                for &b in layer {
                    if ri.lt(a, b) && rj.lt(a, b) {
                        agree = true;
                    }
                    if ri.lt(a, b) && rj.lt(b, a) {
                        disagree = true;
                    }
                }
            }
            if agree && disagree {
                return false;
            }
        }
    }
    true
}

/// Constructive layering for strict weak orders.
///
/// Builds the finest partition forced by the relations, then checks it:
///   (a) outcomes ordered oppositely by two players must share a layer;
///   (b) a strict preference across blocks forces their relative order,
///       so strongly connected blocks must merge;
///   (c) the condensed blocks are ordered topologically, ties broken by
///       smallest member;
///   (d) the result is verified against both layering conditions.
/// Failure at the finest partition rules out every coarsening, because a
/// violating quadruple stays inside a layer when layers grow.
pub fn layer_partition(n: usize, rels: &[PreferenceRelation]) -> Result<Option<LayerPartition>, PrefsError> {
    for (i, rel) in rels.iter().enumerate() {
        if !rel.is_strict_weak_order() {
            return Err(PrefsError::NotStrictWeakOrder { player: i });
        }
    }
    if n == 0 {
        return Ok(Some(LayerPartition { layers: Vec::new() }));
    }

    // (a) union conflicted pairs
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        for y in x + 1..n {
            let forward = rels.iter().any(|r| r.lt(x, y));
            let backward = rels.iter().any(|r| r.lt(y, x));
            if forward && backward {
                uf.union(x, y);
            }
        }
    }
    let mut blocks = uf.blocks();

    // (b) + merge strongly connected blocks until the block digraph is acyclic
    loop {
        let m = blocks.len();
        let mut adj = vec![Vec::new(); m];
        let mut block_of = vec![0usize; n];
        for (b, members) in blocks.iter().enumerate() {
            for &o in members {
                block_of[o] = b;
            }
        }
        for rel in rels {
            for x in 0..n {
                for y in 0..n {
                    if rel.lt(x, y) && block_of[x] != block_of[y] {
                        adj[block_of[x]].push(block_of[y]);
                    }
                }
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let comp = crate::scc::strongly_connected_components(m, &adj);
        let n_comps = comp.iter().max().map_or(0, |&c| c + 1);
        if n_comps == m {
            // Acyclic: order components topologically, smallest member first
            // among the currently available ones.
            let mut merged: Vec<Vec<OutcomeIdx>> = blocks;
            let mut indeg = vec![0usize; m];
            for (a, outs) in adj.iter().enumerate() {
                for &b in outs {
                    let _ = a;
                    indeg[b] += 1;
                }
            }
            let mut placed = vec![false; m];
            let mut layers = Vec::with_capacity(m);
            for _ in 0..m {
                let next = (0..m)
                    .filter(|&b| !placed[b] && indeg[b] == 0)
                    .min_by_key(|&b| merged[b].iter().min().copied())
                    .expect("acyclic block digraph always has a source");
                placed[next] = true;
                for &b in &adj[next] {
                    indeg[b] -= 1;
                }
                merged[next].sort_unstable();
                layers.push(std::mem::take(&mut merged[next]));
            }
            let partition = LayerPartition { layers };
            if satisfies_layering(n, rels, &partition.layers) {
                return Ok(Some(partition));
            }
            return Ok(None);
        }
        let mut next_blocks: Vec<Vec<OutcomeIdx>> = vec![Vec::new(); n_comps];
        for (b, members) in blocks.iter().enumerate() {
            next_blocks[comp[b]].extend(members.iter().copied());
        }
        blocks = next_blocks;
    }
}

/// Exhaustive layering decision: enumerates every ordered set partition
/// of the outcomes and tests the two conditions directly. Independent of
/// [`layer_partition`]; intended as its oracle.
pub fn is_layerable_oracle(n: usize, rels: &[PreferenceRelation]) -> Result<bool, PrefsError> {
    if n > ORACLE_MAX_OUTCOMES {
        return Err(PrefsError::TooManyOutcomes { max: ORACLE_MAX_OUTCOMES, got: n });
    }
    if n == 0 {
        return Ok(true);
    }
    let full: u32 = (1u32 << n) - 1;
    let mut prefix: Vec<u32> = Vec::new();
    Ok(oracle_search(n, rels, full, &mut prefix))
}

fn oracle_search(n: usize, rels: &[PreferenceRelation], remaining: u32, prefix: &mut Vec<u32>) -> bool {
    if remaining == 0 {
        return true;
    }
    // Enumerate nonempty subsets of the remaining outcomes as the next
    // (higher) layer.
    let mut sub = remaining;
    loop {
        if oracle_block_ok(n, rels, prefix, sub) {
            prefix.push(sub);
            if oracle_search(n, rels, remaining & !sub, prefix) {
                prefix.pop();
                return true;
            }
            prefix.pop();
        }
        if sub == 0 {
            return false;
        }
        sub = (sub - 1) & remaining;
        if sub == 0 {
            return false;
        }
    }
}

/// Incremental check used by the oracle: the new (upper) block must not
/// be put below any existing block by any player, and must itself pass
/// the agree/disagree test.
fn oracle_block_ok(n: usize, rels: &[PreferenceRelation], prefix: &[u32], block: u32) -> bool {
    let members = |mask: u32| (0..n).filter(move |&o| mask & (1 << o) != 0);
    for rel in rels {
        for &lower in prefix {
            for x in members(lower) {
                for y in members(block) {
                    if rel.lt(y, x) {
                        return false;
                    }
                }
            }
        }
    }
    for (i, ri) in rels.iter().enumerate() {
        for rj in &rels[i..] {
            let mut agree = false;
            let mut disagree = false;
            for a in members(block) {
                for b in members(block) {
                    if ri.lt(a, b) && rj.lt(a, b) {
                        agree = true;
                    }
                    if ri.lt(a, b) && rj.lt(b, a) {
                        disagree = true;
                    }
                }
            }
            if agree && disagree {
                return false;
            }
        }
    }
    true
}

/// For two strict weak orders: search for strict linear extensions whose
/// pair can be layered. Extensions are enumerated lexicographically and
/// each candidate pair is verified through [`layer_partition`], so the
/// first hit is deterministic. Returns `None` when no extension pair can
/// be layered.
pub fn layerable_linear_extension(
    rels: &[PreferenceRelation],
) -> Result<Option<(PreferenceRelation, PreferenceRelation)>, PrefsError> {
    if rels.len() != 2 {
        return Err(PrefsError::NotTwoPlayers { got: rels.len() });
    }
    for (i, rel) in rels.iter().enumerate() {
        if !rel.is_strict_weak_order() {
            return Err(PrefsError::NotStrictWeakOrder { player: i });
        }
    }
    let n = rels[0].n_outcomes();
    if n > ORACLE_MAX_OUTCOMES {
        return Err(PrefsError::TooManyOutcomes { max: ORACLE_MAX_OUTCOMES, got: n });
    }
    let exts0 = rels[0].linear_extensions()?;
    let exts1 = rels[1].linear_extensions()?;
    for e0 in &exts0 {
        let r0 = PreferenceRelation::from_order(e0);
        for e1 in &exts1 {
            let r1 = PreferenceRelation::from_order(e1);
            let pair = [r0.clone(), r1.clone()];
            let layered = layer_partition(n, &pair).expect("linear extensions are strict weak orders");
            if layered.is_some() {
                return Ok(Some((r0, r1)));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as root for determinism.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes as sorted member lists, ordered by smallest member.
    fn blocks(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
        for x in 0..n {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> PreferenceRelation {
        PreferenceRelation::from_pairs(n, pairs)
    }

    // x=0, y=1, z=2 throughout; label order matches the sorted outcome
    // order used by games over {x, y, z}.
    const X: usize = 0;
    const Y: usize = 1;
    const Z: usize = 2;

    #[test]
    fn acyclicity() {
        // y ≺ x ≺ z with y ≺ z
        assert!(rel(3, &[(Y, X), (X, Z), (Y, Z)]).is_acyclic());
        assert!(rel(3, &[]).is_acyclic());
        // x ≺ y ≺ z ≺ y
        assert!(!rel(3, &[(X, Y), (Y, Z), (Z, Y)]).is_acyclic());
        // reflexive pair is a cycle of length one
        assert!(!rel(2, &[(0, 0)]).is_acyclic());
    }

    #[test]
    fn strict_weak_orders() {
        // x ∼ z ≺ w ∼ y over {w, x, y, z} (w=0, x=1, y=2, z=3)
        let fig5_left_p2 = rel(4, &[(1, 0), (1, 2), (3, 0), (3, 2)]);
        assert!(fig5_left_p2.is_strict_weak_order());
        assert!(!fig5_left_p2.is_strict_linear_order());

        // empty relation: everything incomparable
        assert!(rel(3, &[]).is_strict_weak_order());

        // missing transitive pair
        assert!(!rel(3, &[(X, Y), (Y, Z)]).is_strict_weak_order());

        // chain without transitive incomparability: q ≺ n alone, with m
        // incomparable to both, breaks ∼-transitivity
        assert!(!rel(3, &[(0, 2)]).is_strict_weak_order());
    }

    #[test]
    fn strict_linear_orders() {
        let fig1_p1 = rel(3, &[(Y, X), (X, Z), (Y, Z)]);
        assert!(fig1_p1.is_strict_linear_order());
        assert!(rel(1, &[]).is_strict_linear_order());
        let fig5_left_p2 = rel(4, &[(1, 0), (1, 2), (3, 0), (3, 2)]);
        assert!(!fig5_left_p2.is_strict_linear_order());
    }

    #[test]
    fn main_pattern_on_fig1() {
        // player 1: y ≺ x ≺ z; player 2: x ≺ z ≺ y
        let rels = [
            rel(3, &[(Y, X), (X, Z), (Y, Z)]),
            rel(3, &[(X, Z), (Z, Y), (X, Y)]),
        ];
        let w = main_pattern_witness(&rels).expect("pattern present");
        // First lexicographic witness: the chain y ≺1 x ≺1 z against
        // x ≺2 z ≺2 y.
        assert_eq!((w.x, w.y, w.z, w.i, w.j), (Y, X, Z, 0, 1));
        // Witness soundness.
        assert!(rels[w.i].lt(w.x, w.y) && rels[w.i].lt(w.y, w.z));
        assert!(rels[w.j].lt(w.y, w.z) && rels[w.j].lt(w.z, w.x));
        assert!(!out_of_main_pattern(&rels));
        assert!(!out_of_pattern(&rels));
    }

    #[test]
    fn main_pattern_trivial_cases() {
        assert!(out_of_main_pattern(&[rel(1, &[])]));
        assert!(out_of_pattern(&[] as &[PreferenceRelation]));
    }

    #[test]
    fn three_player_counterexample_is_out_of_pattern_but_not_layerable() {
        // y ≺1 x ∼1 z; z ≺2 x ≺2 y; x ≺3 z ≺3 y
        let rels = [
            rel(3, &[(Y, X), (Y, Z)]),
            rel(3, &[(Z, X), (X, Y), (Z, Y)]),
            rel(3, &[(X, Z), (Z, Y), (X, Y)]),
        ];
        assert!(out_of_main_pattern(&rels));
        assert!(out_of_pattern(&rels));
        assert_eq!(layer_partition(3, &rels).unwrap(), None);
        assert!(!is_layerable_oracle(3, &rels).unwrap());
    }

    #[test]
    fn swo_variant_counterexample_from_pattern_note() {
        // x ≺1 y ≺1 z; y ≺2 z ∼2 x; y ∼3 z ≺3 x
        let rels = [
            rel(3, &[(X, Y), (Y, Z), (X, Z)]),
            rel(3, &[(Y, Z), (Y, X)]),
            rel(3, &[(Y, X), (Z, X)]),
        ];
        for r in &rels {
            assert!(r.is_strict_weak_order());
        }
        assert!(out_of_pattern(&rels));
        assert_eq!(layer_partition(3, &rels).unwrap(), None);
        assert!(!is_layerable_oracle(3, &rels).unwrap());
    }

    #[test]
    fn secondary_pattern_on_fig5_left() {
        // w=0, x=1, y=2, z=3
        let rels = [
            rel(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            rel(4, &[(1, 0), (1, 2), (3, 0), (3, 2)]),
        ];
        let w = secondary_pattern_witness(&rels).expect("pattern present");
        assert_eq!((w.w, w.x, w.y, w.z, w.i, w.j), (0, 1, 2, 3, 0, 1));
        assert!(!out_of_secondary_pattern(&rels));
        // fewer than four outcomes can never hold the secondary pattern
        assert!(out_of_secondary_pattern(&[rel(3, &[(X, Y), (Y, Z), (X, Z)])]));
    }

    #[test]
    fn fig5_right_is_out_of_pattern() {
        // w=0, x=1, y=2, z=3
        // x ≺1 w ≺1 z ∼1 y; w ∼2 y ≺2 z ∼2 x; x ∼3 w ≺3 z ≺3 y
        let rels = [
            PreferenceRelation::from_ranking(4, &[vec![1], vec![0], vec![2, 3]]),
            PreferenceRelation::from_ranking(4, &[vec![0, 2], vec![1, 3]]),
            PreferenceRelation::from_ranking(4, &[vec![0, 1], vec![3], vec![2]]),
        ];
        for r in &rels {
            assert!(r.is_strict_weak_order());
        }
        assert!(out_of_pattern(&rels));
    }

    #[test]
    fn table2_layers() {
        // outcomes sorted: u=0, v=1, w=2, x=3, y=4, z=5
        let (u, v, w, x, y, z) = (0, 1, 2, 3, 4, 5);
        let rels = [
            PreferenceRelation::from_order(&[z, y, x, w, v, u]),
            PreferenceRelation::from_order(&[y, z, x, w, v, u]),
            PreferenceRelation::from_order(&[y, z, x, u, v, w]),
            PreferenceRelation::from_order(&[z, y, x, w, v, u]),
        ];
        let got = layer_partition(6, &rels).unwrap().expect("layerable");
        assert_eq!(got.layers, vec![vec![y, z], vec![x], vec![u, v, w]]);
        assert!(is_layerable_oracle(6, &rels).unwrap());
        assert!(out_of_pattern(&rels));
        assert!(out_of_secondary_pattern(&rels));
    }

    #[test]
    fn single_slo_layers_into_singletons() {
        let r = PreferenceRelation::from_order(&[2, 0, 1]);
        let got = layer_partition(3, &[r]).unwrap().expect("layerable");
        assert_eq!(got.layers, vec![vec![2], vec![0], vec![1]]);
        assert!(is_layerable_oracle(3, &[PreferenceRelation::from_order(&[2, 0, 1])]).unwrap());
    }

    #[test]
    fn layer_partition_rejects_non_swo() {
        let cyclic = rel(3, &[(X, Y), (Y, Z), (Z, X)]);
        assert!(matches!(
            layer_partition(3, &[cyclic]),
            Err(PrefsError::NotStrictWeakOrder { player: 0 })
        ));
    }

    #[test]
    fn oracle_guards_outcome_count() {
        let r = PreferenceRelation::empty(9);
        assert!(matches!(
            is_layerable_oracle(9, &[r]),
            Err(PrefsError::TooManyOutcomes { .. })
        ));
        assert!(is_layerable_oracle(1, &[PreferenceRelation::empty(1)]).unwrap());
    }

    #[test]
    fn linear_extension_search() {
        // identical strict linear orders come back unchanged
        let slo = PreferenceRelation::from_order(&[0, 1, 2]);
        let got = layerable_linear_extension(&[slo.clone(), slo.clone()]).unwrap().expect("layerable");
        assert_eq!(got.0, slo);
        assert_eq!(got.1, slo);

        // x ∼1 y with x ≺2 y extends to x ≺ y on both sides
        let r1 = rel(2, &[]);
        let r2 = rel(2, &[(0, 1)]);
        let (e1, e2) = layerable_linear_extension(&[r1, r2]).unwrap().expect("layerable");
        assert!(e1.lt(0, 1));
        assert!(e2.lt(0, 1));

        // the secondary pattern blocks every extension pair
        let fig5 = [
            rel(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            rel(4, &[(1, 0), (1, 2), (3, 0), (3, 2)]),
        ];
        assert_eq!(layerable_linear_extension(&fig5).unwrap(), None);

        assert!(matches!(
            layerable_linear_extension(&[rel(2, &[])]),
            Err(PrefsError::NotTwoPlayers { got: 1 })
        ));
    }

    #[test]
    fn extensions_are_lexicographic() {
        let r = rel(3, &[(2, 0)]); // only constraint: 2 before 0
        let exts = r.linear_extensions().unwrap();
        assert_eq!(exts, vec![vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]);
    }
}
