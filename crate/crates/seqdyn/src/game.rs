//! Finite sequential games played on trees.
//!
//! A game is a finite prefix-closed set of action sequences (the nodes),
//! an owner for every internal node, an outcome label for every leaf and
//! one preference relation per player. Strategy profiles assign a legal
//! action to every internal node, regardless of who owns it.
//!
//! All values are immutable after construction; every operation is a pure
//! function, so games and profiles can be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::prefs::PreferenceRelation;

pub type PlayerIdx = usize;
pub type OutcomeIdx = usize;
pub type ActionIdx = usize;

/// Default bound on materialised strategy-profile sets.
pub const DEFAULT_PROFILE_CAP: u64 = 1_000_000;

/// Environment variable consulted by the CLI to override the profile cap.
pub const PROFILE_CAP_ENV: &str = "SEQDYN_PROFILE_CAP";

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid game document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("node {path:?}: a tree node needs either an \"outcome\" or a \"player\" with \"moves\"")]
    MalformedNode { path: String },
    #[error("node {path:?}: \"moves\" must contain at least one action")]
    EmptyMoves { path: String },
    #[error("node {path:?}: illegal action label {label:?}")]
    IllegalActionLabel { path: String, label: String },
    #[error("node {path:?}: more than 255 actions are not supported")]
    TooManyActions { path: String },
    #[error("empty player id")]
    EmptyPlayerId,
    #[error("empty outcome label at node {path:?}")]
    EmptyOutcomeLabel { path: String },
    #[error("preferences for player {player:?} mention unknown outcome {outcome:?}")]
    UnknownOutcome { player: String, outcome: String },
    #[error("ranking for player {player:?} lists outcome {outcome:?} twice")]
    DuplicateRankedOutcome { player: String, outcome: String },
    #[error("ranking for player {player:?} does not mention outcome {outcome:?}")]
    MissingRankedOutcome { player: String, outcome: String },
    #[error("game has {count} strategy profiles, exceeding the cap of {cap}")]
    ProfileCapExceeded { count: u128, cap: u64 },
    #[error("no node with path {path:?}")]
    NodeNotFound { path: String },
    #[error("node {path:?} is terminal")]
    TerminalNode { path: String },
    #[error("cannot parse profile {text:?}: {reason}")]
    BadProfile { text: String, reason: String },
}

/// Handle to a node of a specific [`Game`]. Node identity is the action
/// path from the root; handles index the game's node arena directly.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub(crate) usize);

#[derive(Clone, Debug)]
enum NodeKind {
    Internal {
        owner: PlayerIdx,
        /// Children sorted by action label.
        moves: Vec<(ActionIdx, NodeId)>,
    },
    Leaf {
        outcome: OutcomeIdx,
    },
}

#[derive(Clone, Debug)]
struct NodeData {
    /// Action labels from the root; empty for the root itself.
    path: Vec<ActionIdx>,
    kind: NodeKind,
}

/// A finite sequential game.
#[derive(Clone, Debug)]
pub struct Game {
    players: Vec<String>,
    actions: Vec<String>,
    outcomes: Vec<String>,
    /// Nodes sorted by (depth, lexicographic path); index 0 is the root,
    /// so every child has a strictly larger index than its parent.
    nodes: Vec<NodeData>,
    /// Internal nodes in arena order; the rank of a node in this list is
    /// its digit position in a [`StrategyProfile`].
    internal: Vec<NodeId>,
    /// Arena index -> internal rank (usize::MAX for leaves).
    rank_of: Vec<usize>,
    prefs: Vec<PreferenceRelation>,
}

/// Total choice of a legal action at every internal node, stored as one
/// digit per internal rank (an index into that node's sorted move list).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StrategyProfile {
    digits: Vec<u8>,
}

impl StrategyProfile {
    pub(crate) fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub(crate) fn digits_mut(&mut self) -> &mut [u8] {
        &mut self.digits
    }

    pub(crate) fn from_digits(digits: Vec<u8>) -> Self {
        StrategyProfile { digits }
    }
}

/// Where two profiles differ: the nodes and the players owning them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProfileDiff {
    pub nodes: Vec<NodeId>,
    pub players: BTreeSet<PlayerIdx>,
}

impl ProfileDiff {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

// ---------------------------------------------------------------------------
// JSON document model
// ---------------------------------------------------------------------------

/// Tree node of the JSON game schema: either `{"outcome": L}` or
/// `{"player": P, "moves": {A: subtree, ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub player: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moves: Option<BTreeMap<String, TreeDoc>>,
}

/// Preference entry of the JSON game schema: raw `pairs` (each `[a, b]`
/// meaning a is worse than b) or a `ranking` of indifference classes
/// listed from least to most preferred.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrefDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameDoc {
    pub tree: TreeDoc,
    #[serde(default)]
    pub preferences: BTreeMap<String, PrefDoc>,
}

impl TreeDoc {
    pub fn leaf(outcome: &str) -> TreeDoc {
        TreeDoc { outcome: Some(outcome.to_string()), player: None, moves: None }
    }

    pub fn node(player: &str, moves: Vec<(&str, TreeDoc)>) -> TreeDoc {
        TreeDoc {
            outcome: None,
            player: Some(player.to_string()),
            moves: Some(moves.into_iter().map(|(a, t)| (a.to_string(), t)).collect()),
        }
    }
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

struct RawNode {
    path: Vec<String>,
    owner: Option<String>,
    outcome: Option<String>,
    children: Vec<(String, usize)>,
}

fn flatten_doc(doc: &TreeDoc, path: &mut Vec<String>, out: &mut Vec<RawNode>) -> Result<usize, GameError> {
    let path_str = || path.join(".");
    match (&doc.outcome, &doc.player, &doc.moves) {
        (Some(o), None, None) => {
            if o.is_empty() {
                return Err(GameError::EmptyOutcomeLabel { path: path_str() });
            }
            out.push(RawNode { path: path.clone(), owner: None, outcome: Some(o.clone()), children: Vec::new() });
            Ok(out.len() - 1)
        }
        (None, Some(p), Some(moves)) => {
            if p.is_empty() {
                return Err(GameError::EmptyPlayerId);
            }
            if moves.is_empty() {
                return Err(GameError::EmptyMoves { path: path_str() });
            }
            if moves.len() > 255 {
                return Err(GameError::TooManyActions { path: path_str() });
            }
            out.push(RawNode { path: path.clone(), owner: Some(p.clone()), outcome: None, children: Vec::new() });
            let idx = out.len() - 1;
            let mut children = Vec::new();
            for (action, sub) in moves {
                if action.is_empty() {
                    return Err(GameError::IllegalActionLabel { path: path_str(), label: action.clone() });
                }
                path.push(action.clone());
                let child = flatten_doc(sub, path, out)?;
                path.pop();
                children.push((action.clone(), child));
            }
            out[idx].children = children;
            Ok(idx)
        }
        _ => Err(GameError::MalformedNode { path: path_str() }),
    }
}

impl Game {
    pub fn from_json(text: &str) -> Result<Game, GameError> {
        let doc: GameDoc = serde_json::from_str(text)?;
        Game::from_doc(&doc)
    }

    pub fn from_doc(doc: &GameDoc) -> Result<Game, GameError> {
        let mut raw = Vec::new();
        flatten_doc(&doc.tree, &mut Vec::new(), &mut raw)?;

        let mut players: BTreeSet<String> = raw.iter().filter_map(|n| n.owner.clone()).collect();
        for p in doc.preferences.keys() {
            if p.is_empty() {
                return Err(GameError::EmptyPlayerId);
            }
            players.insert(p.clone());
        }
        let players: Vec<String> = players.into_iter().collect();

        let outcomes: BTreeSet<String> = raw.iter().filter_map(|n| n.outcome.clone()).collect();
        let outcomes: Vec<String> = outcomes.into_iter().collect();

        let actions: BTreeSet<String> = raw.iter().flat_map(|n| n.children.iter().map(|(a, _)| a.clone())).collect();
        let actions: Vec<String> = actions.into_iter().collect();

        let player_idx = |id: &str| players.binary_search_by(|x| x.as_str().cmp(id)).unwrap();
        let outcome_idx = |label: &str| outcomes.binary_search_by(|x| x.as_str().cmp(label)).unwrap();
        let action_idx = |label: &str| actions.binary_search_by(|x| x.as_str().cmp(label)).unwrap();

        // Arena order: (depth, lexicographic path). Raw nodes came out of a
        // depth-first walk with children already sorted per node, so a stable
        // sort by depth alone would also do; sort by the full key for clarity.
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| {
            (raw[a].path.len(), &raw[a].path).cmp(&(raw[b].path.len(), &raw[b].path))
        });
        let mut arena_of = vec![0usize; raw.len()];
        for (arena, &r) in order.iter().enumerate() {
            arena_of[r] = arena;
        }

        let mut nodes = Vec::with_capacity(raw.len());
        for &r in &order {
            let n = &raw[r];
            let path: Vec<ActionIdx> = n.path.iter().map(|a| action_idx(a)).collect();
            let kind = if let Some(o) = &n.outcome {
                NodeKind::Leaf { outcome: outcome_idx(o) }
            } else {
                let mut moves: Vec<(ActionIdx, NodeId)> = n
                    .children
                    .iter()
                    .map(|(a, c)| (action_idx(a), NodeId(arena_of[*c])))
                    .collect();
                moves.sort_by_key(|&(a, _)| a);
                NodeKind::Internal { owner: player_idx(n.owner.as_ref().unwrap()), moves }
            };
            nodes.push(NodeData { path, kind });
        }

        let mut internal = Vec::new();
        let mut rank_of = vec![usize::MAX; nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            if matches!(n.kind, NodeKind::Internal { .. }) {
                rank_of[i] = internal.len();
                internal.push(NodeId(i));
            }
        }

        let mut prefs = vec![PreferenceRelation::empty(outcomes.len()); players.len()];
        for (player, pd) in &doc.preferences {
            let pi = player_idx(player);
            let resolve = |label: &String| -> Result<OutcomeIdx, GameError> {
                outcomes
                    .binary_search_by(|x| x.cmp(label))
                    .map_err(|_| GameError::UnknownOutcome { player: player.clone(), outcome: label.clone() })
            };
            match (&pd.pairs, &pd.ranking) {
                (Some(pairs), None) => {
                    let mut rel = PreferenceRelation::empty(outcomes.len());
                    for (a, b) in pairs {
                        rel.insert(resolve(a)?, resolve(b)?);
                    }
                    prefs[pi] = rel;
                }
                (None, Some(classes)) => {
                    let mut seen = BTreeSet::new();
                    let mut idx_classes = Vec::new();
                    for class in classes {
                        let mut ic = Vec::new();
                        for label in class {
                            let o = resolve(label)?;
                            if !seen.insert(o) {
                                return Err(GameError::DuplicateRankedOutcome {
                                    player: player.clone(),
                                    outcome: label.clone(),
                                });
                            }
                            ic.push(o);
                        }
                        idx_classes.push(ic);
                    }
                    if let Some(missing) = (0..outcomes.len()).find(|o| !seen.contains(o)) {
                        return Err(GameError::MissingRankedOutcome {
                            player: player.clone(),
                            outcome: outcomes[missing].clone(),
                        });
                    }
                    prefs[pi] = PreferenceRelation::from_ranking(outcomes.len(), &idx_classes);
                }
                _ => {
                    return Err(GameError::Parse(serde_json::Error::io(std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("preferences for player {player:?} need exactly one of \"pairs\" or \"ranking\""),
                    ))))
                }
            }
        }

        Ok(Game { players, actions, outcomes, nodes, internal, rank_of, prefs })
    }

    /// Inverse of [`Game::from_doc`]; preferences are emitted in `pairs`
    /// form, which is lossless for raw relations.
    pub fn to_doc(&self) -> GameDoc {
        fn subtree(g: &Game, h: NodeId) -> TreeDoc {
            match &g.nodes[h.0].kind {
                NodeKind::Leaf { outcome } => TreeDoc::leaf(&g.outcomes[*outcome]),
                NodeKind::Internal { owner, moves } => TreeDoc {
                    outcome: None,
                    player: Some(g.players[*owner].clone()),
                    moves: Some(
                        moves
                            .iter()
                            .map(|&(a, c)| (g.actions[a].clone(), subtree(g, c)))
                            .collect(),
                    ),
                },
            }
        }
        let preferences = self
            .players
            .iter()
            .enumerate()
            .map(|(pi, id)| {
                let pairs = self.prefs[pi]
                    .pairs()
                    .into_iter()
                    .map(|(a, b)| (self.outcomes[a].clone(), self.outcomes[b].clone()))
                    .collect();
                (id.clone(), PrefDoc { pairs: Some(pairs), ranking: None })
            })
            .collect();
        GameDoc { tree: subtree(self, NodeId(0)), preferences }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self.to_doc())
    }
}

// ---------------------------------------------------------------------------
// Accessors
// ---------------------------------------------------------------------------

impl Game {
    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn prefs(&self) -> &[PreferenceRelation] {
        &self.prefs
    }

    pub fn pref(&self, player: PlayerIdx) -> &PreferenceRelation {
        &self.prefs[player]
    }

    pub fn player_index(&self, id: &str) -> Option<PlayerIdx> {
        self.players.binary_search_by(|x| x.as_str().cmp(id)).ok()
    }

    pub fn outcome_index(&self, label: &str) -> Option<OutcomeIdx> {
        self.outcomes.binary_search_by(|x| x.as_str().cmp(label)).ok()
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    /// Internal (nonterminal) nodes, sorted by (depth, lexicographic path).
    pub fn internal_nodes(&self) -> &[NodeId] {
        &self.internal
    }

    pub fn is_terminal(&self, h: NodeId) -> bool {
        matches!(self.nodes[h.0].kind, NodeKind::Leaf { .. })
    }

    pub fn owner(&self, h: NodeId) -> Option<PlayerIdx> {
        match &self.nodes[h.0].kind {
            NodeKind::Internal { owner, .. } => Some(*owner),
            NodeKind::Leaf { .. } => None,
        }
    }

    pub fn leaf_outcome(&self, h: NodeId) -> Option<OutcomeIdx> {
        match &self.nodes[h.0].kind {
            NodeKind::Leaf { outcome } => Some(*outcome),
            NodeKind::Internal { .. } => None,
        }
    }

    /// Children of an internal node, sorted by action label.
    pub fn moves(&self, h: NodeId) -> &[(ActionIdx, NodeId)] {
        match &self.nodes[h.0].kind {
            NodeKind::Internal { moves, .. } => moves,
            NodeKind::Leaf { .. } => &[],
        }
    }

    pub fn depth(&self, h: NodeId) -> usize {
        self.nodes[h.0].path.len()
    }

    pub fn node_path(&self, h: NodeId) -> &[ActionIdx] {
        &self.nodes[h.0].path
    }

    /// Rank of an internal node among all internal nodes (its digit
    /// position in a profile), or `None` for leaves.
    pub fn internal_rank(&self, h: NodeId) -> Option<usize> {
        let r = self.rank_of[h.0];
        (r != usize::MAX).then_some(r)
    }

    /// Display form of a node path: action labels joined without a
    /// separator when every action label is a single character (the paper
    /// convention), with `.` otherwise. The root is `ε`.
    pub fn node_path_string(&self, h: NodeId) -> String {
        let path = &self.nodes[h.0].path;
        if path.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.actions.iter().all(|a| a.chars().count() == 1) { "" } else { "." };
        path.iter().map(|&a| self.actions[a].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Resolve a node by its action-label path (empty slice = root).
    pub fn node_by_path<S: AsRef<str>>(&self, path: &[S]) -> Option<NodeId> {
        let mut cur = NodeId(0);
        for label in path {
            let a = self.actions.binary_search_by(|x| x.as_str().cmp(label.as_ref())).ok()?;
            let moves = self.moves(cur);
            let &(_, child) = moves.iter().find(|&&(ma, _)| ma == a)?;
            cur = child;
        }
        Some(cur)
    }

    /// Resolve a node from its display string: `ε` (or the empty string)
    /// for the root, otherwise single-character actions concatenated or
    /// `.`-separated labels.
    pub fn node_by_path_string(&self, text: &str) -> Option<NodeId> {
        if text.is_empty() || text == "ε" {
            return Some(NodeId(0));
        }
        if text.contains('.') {
            let parts: Vec<&str> = text.split('.').collect();
            self.node_by_path(&parts)
        } else {
            let parts: Vec<String> = text.chars().map(|c| c.to_string()).collect();
            self.node_by_path(&parts)
        }
    }
}

// ---------------------------------------------------------------------------
// Strategy profiles
// ---------------------------------------------------------------------------

impl Game {
    /// Number of strategy profiles: the product of branching factors over
    /// all internal nodes.
    pub fn profile_count(&self) -> u128 {
        self.internal
            .iter()
            .map(|&h| self.moves(h).len() as u128)
            .fold(1u128, |acc, c| acc.saturating_mul(c))
    }

    pub fn check_profile_cap(&self, cap: u64) -> Result<usize, GameError> {
        let count = self.profile_count();
        if count > cap as u128 {
            return Err(GameError::ProfileCapExceeded { count, cap });
        }
        Ok(count as usize)
    }

    /// Every strategy profile exactly once, in mixed-radix order over the
    /// internal nodes sorted by (depth, lexicographic path) with actions
    /// sorted lexicographically. The first node is the most significant
    /// digit, so single-character games enumerate as ll, lr, rl, rr.
    pub fn profiles(&self) -> Result<Vec<StrategyProfile>, GameError> {
        self.profiles_capped(DEFAULT_PROFILE_CAP)
    }

    pub fn profiles_capped(&self, cap: u64) -> Result<Vec<StrategyProfile>, GameError> {
        let count = self.check_profile_cap(cap)?;
        let mut out = Vec::with_capacity(count);
        let radix: Vec<u8> = self.internal.iter().map(|&h| self.moves(h).len() as u8).collect();
        let mut digits = vec![0u8; radix.len()];
        loop {
            out.push(StrategyProfile { digits: digits.clone() });
            // Increment from the least significant (last) digit.
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < radix[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// Position of a profile in enumeration order.
    pub fn profile_index(&self, s: &StrategyProfile) -> usize {
        let mut idx = 0usize;
        for (rank, &h) in self.internal.iter().enumerate() {
            idx = idx * self.moves(h).len() + s.digits[rank] as usize;
        }
        idx
    }

    /// Action chosen by `s` at internal node `h`.
    pub fn choice(&self, s: &StrategyProfile, h: NodeId) -> ActionIdx {
        let rank = self.rank_of[h.0];
        debug_assert!(rank != usize::MAX, "choice of a terminal node");
        self.moves(h)[s.digits[rank] as usize].0
    }

    /// Child reached from `h` under `s`.
    pub fn chosen_child(&self, s: &StrategyProfile, h: NodeId) -> NodeId {
        let rank = self.rank_of[h.0];
        debug_assert!(rank != usize::MAX, "choice of a terminal node");
        self.moves(h)[s.digits[rank] as usize].1
    }

    /// Outcome of the terminal node reached from the root under `s`.
    pub fn outcome_of(&self, s: &StrategyProfile) -> OutcomeIdx {
        self.outcome_from(s, NodeId(0))
    }

    /// Outcome reached from `h` when all players follow `s` below it.
    pub fn outcome_from(&self, s: &StrategyProfile, h: NodeId) -> OutcomeIdx {
        let mut cur = h;
        loop {
            match &self.nodes[cur.0].kind {
                NodeKind::Leaf { outcome } => return *outcome,
                NodeKind::Internal { .. } => cur = self.chosen_child(s, cur),
            }
        }
    }

    /// Outcome reached from every node under `s`, indexed by arena order.
    /// One bottom-up pass; children always follow their parent in the
    /// arena, so a reverse scan sees children first.
    pub fn outcome_table(&self, s: &StrategyProfile) -> Vec<OutcomeIdx> {
        let mut table = vec![0; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            table[i] = match &self.nodes[i].kind {
                NodeKind::Leaf { outcome } => *outcome,
                NodeKind::Internal { .. } => table[self.chosen_child(s, NodeId(i)).0],
            };
        }
        table
    }

    /// Marks every node on the play induced by `s` from the root.
    pub fn play_nodes(&self, s: &StrategyProfile) -> Vec<bool> {
        let mut on_play = vec![false; self.nodes.len()];
        let mut cur = NodeId(0);
        loop {
            on_play[cur.0] = true;
            match &self.nodes[cur.0].kind {
                NodeKind::Leaf { .. } => return on_play,
                NodeKind::Internal { .. } => cur = self.chosen_child(s, cur),
            }
        }
    }

    /// Whether `h` lies along the play induced by `s`: every proper prefix
    /// of `h` chooses the next action of `h`'s path under `s`.
    pub fn lies_along(&self, s: &StrategyProfile, h: NodeId) -> bool {
        let path = &self.nodes[h.0].path;
        let mut cur = NodeId(0);
        for &a in path {
            if self.choice(s, cur) != a {
                return false;
            }
            cur = self.moves(cur).iter().find(|&&(ma, _)| ma == a).unwrap().1;
        }
        true
    }

    /// Nodes where `s` and `t` choose differently, and their owners.
    pub fn diff(&self, s: &StrategyProfile, t: &StrategyProfile) -> ProfileDiff {
        let mut nodes = Vec::new();
        let mut players = BTreeSet::new();
        for (rank, &h) in self.internal.iter().enumerate() {
            if s.digits[rank] != t.digits[rank] {
                nodes.push(h);
                players.insert(self.owner(h).unwrap());
            }
        }
        ProfileDiff { nodes, players }
    }
}

// ---------------------------------------------------------------------------
// Subgames
// ---------------------------------------------------------------------------

impl Game {
    /// The subgame rooted at `h`: same players, outcomes and preferences,
    /// nodes re-rooted so paths are relative to `h`.
    pub fn subgame(&self, h: NodeId) -> Result<Game, GameError> {
        if self.is_terminal(h) {
            return Err(GameError::TerminalNode { path: self.node_path_string(h) });
        }
        let members = self.subtree_nodes(h);
        let mut arena_of = vec![usize::MAX; self.nodes.len()];
        for (new, &old) in members.iter().enumerate() {
            arena_of[old.0] = new;
        }
        let base_depth = self.depth(h);
        let nodes: Vec<NodeData> = members
            .iter()
            .map(|&old| {
                let n = &self.nodes[old.0];
                let kind = match &n.kind {
                    NodeKind::Leaf { outcome } => NodeKind::Leaf { outcome: *outcome },
                    NodeKind::Internal { owner, moves } => NodeKind::Internal {
                        owner: *owner,
                        moves: moves.iter().map(|&(a, c)| (a, NodeId(arena_of[c.0]))).collect(),
                    },
                };
                NodeData { path: n.path[base_depth..].to_vec(), kind }
            })
            .collect();
        let mut internal = Vec::new();
        let mut rank_of = vec![usize::MAX; nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            if matches!(n.kind, NodeKind::Internal { .. }) {
                rank_of[i] = internal.len();
                internal.push(NodeId(i));
            }
        }
        Ok(Game {
            players: self.players.clone(),
            actions: self.actions.clone(),
            outcomes: self.outcomes.clone(),
            nodes,
            internal,
            rank_of,
            prefs: self.prefs.clone(),
        })
    }

    /// The substrategy profile of `s` from `h`, valid for `subgame(h)`.
    pub fn substrategy(&self, s: &StrategyProfile, h: NodeId) -> Result<StrategyProfile, GameError> {
        if self.is_terminal(h) {
            return Err(GameError::TerminalNode { path: self.node_path_string(h) });
        }
        // Subtree nodes keep their relative (depth, lex) order when
        // re-rooted, so filtering digits in arena order is enough.
        let digits = self
            .subtree_nodes(h)
            .into_iter()
            .filter(|&n| !self.is_terminal(n))
            .map(|n| s.digits[self.rank_of[n.0]])
            .collect();
        Ok(StrategyProfile { digits })
    }

    /// Nodes of the subtree rooted at `h`, in arena (depth, lex) order.
    fn subtree_nodes(&self, h: NodeId) -> Vec<NodeId> {
        let base = &self.nodes[h.0].path;
        (h.0..self.nodes.len())
            .map(NodeId)
            .filter(|&n| self.nodes[n.0].path.len() >= base.len() && self.nodes[n.0].path[..base.len()] == base[..])
            .collect()
    }

    /// Whether `h` is an ancestor of `d` (including `h == d`).
    pub fn is_ancestor(&self, h: NodeId, d: NodeId) -> bool {
        let hp = &self.nodes[h.0].path;
        let dp = &self.nodes[d.0].path;
        hp.len() <= dp.len() && dp[..hp.len()] == hp[..]
    }
}

// ---------------------------------------------------------------------------
// Profile names
// ---------------------------------------------------------------------------

impl Game {
    /// Compact name: chosen action labels concatenated over internal nodes
    /// in sorted order ("rr", "rl", ... in the single-character case).
    pub fn profile_name(&self, s: &StrategyProfile) -> String {
        self.internal
            .iter()
            .map(|&h| self.actions[self.choice(s, h)].as_str())
            .collect()
    }

    /// Explicit `node=action` form, unambiguous for multi-character labels.
    pub fn profile_name_long(&self, s: &StrategyProfile) -> String {
        self.internal
            .iter()
            .map(|&h| format!("{}={}", self.node_path_string(h), self.actions[self.choice(s, h)]))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse a profile from either the compact form (one single-character
    /// action per internal node) or the `node=action,...` form.
    pub fn parse_profile(&self, text: &str) -> Result<StrategyProfile, GameError> {
        let bad = |reason: &str| GameError::BadProfile { text: text.to_string(), reason: reason.to_string() };
        if text.contains('=') {
            let mut digits: Vec<Option<u8>> = vec![None; self.internal.len()];
            for part in text.split(',') {
                let (node_s, action_s) = part.split_once('=').ok_or_else(|| bad("expected node=action"))?;
                let h = self
                    .node_by_path_string(node_s.trim())
                    .ok_or_else(|| bad(&format!("unknown node {node_s:?}")))?;
                let rank = self.internal_rank(h).ok_or_else(|| bad(&format!("node {node_s:?} is terminal")))?;
                let digit = self
                    .moves(h)
                    .iter()
                    .position(|&(a, _)| self.actions[a] == action_s.trim())
                    .ok_or_else(|| bad(&format!("illegal action {action_s:?} at node {node_s:?}")))?;
                digits[rank] = Some(digit as u8);
            }
            let digits: Option<Vec<u8>> = digits.into_iter().collect();
            digits.map(|d| StrategyProfile { digits: d }).ok_or_else(|| bad("profile does not cover every internal node"))
        } else {
            if self.actions.iter().any(|a| a.chars().count() != 1) {
                return Err(bad("game has multi-character actions; use the node=action form"));
            }
            let chars: Vec<char> = text.chars().collect();
            if chars.len() != self.internal.len() {
                return Err(bad(&format!("expected {} actions, got {}", self.internal.len(), chars.len())));
            }
            let mut digits = Vec::with_capacity(chars.len());
            for (rank, &h) in self.internal.iter().enumerate() {
                let label = chars[rank].to_string();
                let digit = self
                    .moves(h)
                    .iter()
                    .position(|&(a, _)| self.actions[a] == label)
                    .ok_or_else(|| bad(&format!("illegal action {:?} at node {}", label, self.node_path_string(h))))?;
                digits.push(digit as u8);
            }
            Ok(StrategyProfile { digits })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig1_shape() {
        let g = fixtures::fig1();
        assert_eq!(g.players(), ["1", "2"]);
        assert_eq!(g.outcomes(), ["x", "y", "z"]);
        assert_eq!(g.internal_nodes().len(), 2);
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.profile_count(), 4);
    }

    #[test]
    fn single_leaf_game() {
        let g = Game::from_json(r#"{"tree": {"outcome": "x"}, "preferences": {}}"#).unwrap();
        assert_eq!(g.internal_nodes().len(), 0);
        let profiles = g.profiles().unwrap();
        assert_eq!(profiles.len(), 1);
        assert_eq!(g.outcomes()[g.outcome_of(&profiles[0])], "x");
    }

    #[test]
    fn fig5_left_has_eight_profiles() {
        let g = fixtures::fig5_left();
        assert_eq!(g.internal_nodes().len(), 3);
        assert_eq!(g.profiles().unwrap().len(), 8);
    }

    #[test]
    fn enumeration_order_and_names() {
        let g = fixtures::fig1();
        let names: Vec<String> = g.profiles().unwrap().iter().map(|s| g.profile_name(s)).collect();
        assert_eq!(names, ["ll", "lr", "rl", "rr"]);
        for (i, s) in g.profiles().unwrap().iter().enumerate() {
            assert_eq!(g.profile_index(s), i);
        }
    }

    #[test]
    fn outcome_of_examples() {
        let g = fixtures::fig1();
        let rl = g.parse_profile("rl").unwrap();
        assert_eq!(g.outcomes()[g.outcome_of(&rl)], "y");
        let ll = g.parse_profile("ll").unwrap();
        assert_eq!(g.outcomes()[g.outcome_of(&ll)], "x");
    }

    #[test]
    fn subgame_and_substrategy() {
        let g = fixtures::fig1();
        let r = g.node_by_path(&["r"]).unwrap();
        let sub = g.subgame(r).unwrap();
        assert_eq!(sub.internal_nodes().len(), 1);
        assert_eq!(sub.owner(sub.root()), sub.player_index("2"));
        assert_eq!(sub.outcomes(), g.outcomes());

        let rl = g.parse_profile("rl").unwrap();
        let sub_s = g.substrategy(&rl, r).unwrap();
        assert_eq!(sub.profile_name(&sub_s), "l");
        assert_eq!(sub.outcomes()[sub.outcome_of(&sub_s)], "y");

        // Root cases are the identity.
        let root_sub = g.subgame(g.root()).unwrap();
        assert_eq!(root_sub.profile_count(), g.profile_count());
        assert_eq!(g.substrategy(&rl, g.root()).unwrap(), rl);

        let leaf = g.node_by_path(&["l"]).unwrap();
        assert!(matches!(g.subgame(leaf), Err(GameError::TerminalNode { .. })));
    }

    #[test]
    fn fig5_left_substrategy_example() {
        let g = fixtures::fig5_left();
        let s = g.parse_profile("rrl").unwrap();
        let rr = g.node_by_path(&["r", "r"]).unwrap();
        let sub = g.subgame(rr).unwrap();
        let sub_s = g.substrategy(&s, rr).unwrap();
        assert_eq!(sub.profile_name(&sub_s), "l");
        assert_eq!(sub.outcomes()[sub.outcome_of(&sub_s)], "z");
    }

    #[test]
    fn lies_along_examples() {
        let g = fixtures::fig1();
        let r = g.node_by_path(&["r"]).unwrap();
        let rr = g.parse_profile("rr").unwrap();
        let lr = g.parse_profile("lr").unwrap();
        assert!(g.lies_along(&rr, r));
        assert!(!g.lies_along(&lr, r));
        assert!(g.lies_along(&lr, g.root()));
    }

    #[test]
    fn diff_examples() {
        let g = fixtures::fig1();
        let ll = g.parse_profile("ll").unwrap();
        let rr = g.parse_profile("rr").unwrap();
        let rl = g.parse_profile("rl").unwrap();

        let d = g.diff(&ll, &rr);
        assert_eq!(d.nodes.len(), 2);
        assert_eq!(d.players.len(), 2);

        assert!(g.diff(&ll, &ll).is_empty());
        assert_eq!(g.diff(&rr, &ll), d);

        let d2 = g.diff(&rr, &rl);
        assert_eq!(d2.nodes, vec![g.node_by_path(&["r"]).unwrap()]);
        assert_eq!(d2.players.iter().copied().collect::<Vec<_>>(), vec![g.player_index("2").unwrap()]);
    }

    #[test]
    fn profile_cap() {
        let g = fixtures::fig5_left();
        assert!(matches!(
            g.profiles_capped(7),
            Err(GameError::ProfileCapExceeded { count: 8, cap: 7 })
        ));
    }

    #[test]
    fn outcome_table_matches_walks() {
        let g = fixtures::fig5_left();
        for s in g.profiles().unwrap() {
            let table = g.outcome_table(&s);
            for h in g.node_ids() {
                assert_eq!(table[h.0], g.outcome_from(&s, h));
            }
        }
    }

    #[test]
    fn long_profile_names_round_trip() {
        let g = fixtures::fig5_left();
        for s in g.profiles().unwrap() {
            let long = g.profile_name_long(&s);
            assert_eq!(g.parse_profile(&long).unwrap(), s);
            assert_eq!(g.parse_profile(&g.profile_name(&s)).unwrap(), s);
        }
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(
            Game::from_json(r#"{"tree": {"player": "1", "moves": {}}}"#),
            Err(GameError::EmptyMoves { .. })
        ));
        assert!(matches!(
            Game::from_json(r#"{"tree": {"player": "1"}}"#),
            Err(GameError::MalformedNode { .. })
        ));
        assert!(matches!(
            Game::from_json(r#"{"tree": {"player": "1", "moves": {"": {"outcome": "x"}}}}"#),
            Err(GameError::IllegalActionLabel { .. })
        ));
        assert!(matches!(
            Game::from_json(
                r#"{"tree": {"outcome": "x"}, "preferences": {"1": {"pairs": [["x", "q"]]}}}"#
            ),
            Err(GameError::UnknownOutcome { .. })
        ));
        assert!(matches!(
            Game::from_json(
                r#"{"tree": {"player": "1", "moves": {"l": {"outcome": "x"}, "r": {"outcome": "y"}}},
                    "preferences": {"1": {"ranking": [["x"]]}}}"#
            ),
            Err(GameError::MissingRankedOutcome { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        for g in [fixtures::fig1(), fixtures::fig5_left(), fixtures::fig5_right(), fixtures::fig4_right()] {
            let text = g.to_json().to_string();
            let back = Game::from_json(&text).unwrap();
            assert_eq!(back.players(), g.players());
            assert_eq!(back.outcomes(), g.outcomes());
            assert_eq!(back.profile_count(), g.profile_count());
            for (a, b) in back.prefs().iter().zip(g.prefs()) {
                assert_eq!(a, b);
            }
        }
    }
}
