//! Graph and tree data model: digraphs, level profiles, rooted trees, and
//! trees carrying back arcs (2-cycles or longer cycles grafted onto tree
//! paths).
//!
//! Vertex ids are dense integers `0..n` with the root recorded explicitly;
//! trees built from profiles are laid out breadth-first from the root. All
//! values are immutable after construction.

mod census;
mod generate;
mod io;
pub(crate) mod paths;
mod validate;

pub use census::{level_census, QCensus};
pub use generate::{
    build_tree, generate_family, random_bidirectional_tree, random_cyclical_tree, random_digraph,
    random_profile, random_tree, Family, LinkingPolicy,
};
pub use io::{digraph_to_dot, GraphDoc};
pub use validate::{validate, validate_with_limit, StructureKind, StructureReport};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default vertex-count cap for operations that discover tree/back-arc
/// decompositions by enumerating simple paths (worst-case exponential).
pub const DISCOVERY_LIMIT: usize = 64;

// ---------------------------------------------------------------------------
// Digraph
// ---------------------------------------------------------------------------

/// A finite directed graph without self-loops, over vertex ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<u32>>,
    arc_count: usize,
}

impl Digraph {
    /// Builds a digraph from an arc list, rejecting self-loops, out-of-range
    /// endpoints, and duplicate arcs.
    pub fn new(n: usize, arcs: &[(u32, u32)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut out = vec![Vec::new(); n];
        for &(u, v) in arcs {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::ArcOutOfRange(u, v, n));
            }
            out[u as usize].push(v);
        }
        let mut arc_count = 0;
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateArc(u as u32, w[0]));
            }
            arc_count += list.len();
        }
        Ok(Self { out, arc_count })
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn out_degree(&self, v: u32) -> usize {
        self.out[v as usize].len()
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn has_arc(&self, u: u32, v: u32) -> bool {
        self.out[u as usize].binary_search(&v).is_ok()
    }

    /// All arcs in ascending `(u, v)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u as u32, v)))
    }

    /// In-neighbor lists (reverse adjacency), each sorted ascending.
    pub fn in_neighbors(&self) -> Vec<Vec<u32>> {
        let mut rev = vec![Vec::new(); self.out.len()];
        for (u, v) in self.arcs() {
            rev[v as usize].push(u);
        }
        rev
    }
}

// ---------------------------------------------------------------------------
// LevelProfile
// ---------------------------------------------------------------------------

/// A rooted tree abstracted to its per-level vertex counts `1 n1 ... nh`.
///
/// The root PageRank of any tree depends only on this profile, so most
/// closed forms and the optimizer work on profiles instead of trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelProfile {
    counts: Vec<u64>,
}

impl LevelProfile {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if counts[0] != 1 {
            return Err(Error::FirstLevelNotOne(counts[0]));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::ZeroCount);
        }
        Ok(Self { counts })
    }

    /// The single-vertex profile `[1]`.
    pub fn root_only() -> Self {
        Self { counts: vec![1] }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Height `h`; the profile has `h + 1` levels.
    pub fn height(&self) -> usize {
        self.counts.len() - 1
    }

    /// Total number of vertices `N`.
    pub fn order(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl FromStr for LevelProfile {
    type Err = Error;

    /// Parses the whitespace-separated form `"1 n1 ... nh"`.
    fn from_str(text: &str) -> Result<Self> {
        let mut counts = Vec::new();
        for tok in text.split_whitespace() {
            let c: u64 = tok
                .parse()
                .map_err(|_| Error::MalformedCount(tok.to_string()))?;
            counts.push(c);
        }
        Self::new(counts)
    }
}

impl fmt::Display for LevelProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses the profile string form; first token must be 1.
pub fn parse_profile(text: &str) -> Result<LevelProfile> {
    text.parse()
}

// ---------------------------------------------------------------------------
// RootedTree
// ---------------------------------------------------------------------------

/// A rooted tree: every non-root vertex has exactly one out-arc, pointing
/// toward the root along its unique root path.
#[derive(Debug, Clone)]
pub struct RootedTree {
    graph: Digraph,
    root: u32,
    level_of: Vec<u32>,
}

impl RootedTree {
    /// Validates that `graph` is a rooted tree with root `root`.
    pub fn new(graph: Digraph, root: u32) -> Result<Self> {
        let n = graph.vertex_count();
        if root as usize >= n {
            return Err(Error::VertexOutOfRange(root, n));
        }
        if graph.out_degree(root) != 0 {
            return Err(Error::InvalidStructure(format!(
                "root {root} has out-degree {}",
                graph.out_degree(root)
            )));
        }
        for v in 0..n as u32 {
            if v != root && graph.out_degree(v) != 1 {
                return Err(Error::InvalidStructure(format!(
                    "vertex {v} has out-degree {} (expected 1)",
                    graph.out_degree(v)
                )));
            }
        }
        let level_of = tree_levels(&graph, root)?;
        Ok(Self {
            graph,
            root,
            level_of,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn level_of(&self, v: u32) -> usize {
        self.level_of[v as usize] as usize
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        if v == self.root {
            None
        } else {
            Some(self.graph.out_neighbors(v)[0])
        }
    }

    pub fn height(&self) -> usize {
        self.level_of.iter().copied().max().unwrap_or(0) as usize
    }

    /// Level census of the tree.
    pub fn profile(&self) -> LevelProfile {
        let mut counts = vec![0u64; self.height() + 1];
        for &l in &self.level_of {
            counts[l as usize] += 1;
        }
        LevelProfile::new(counts).expect("tree levels always form a valid profile")
    }

    /// Vertices of the subtree rooted at `v` (including `v`), ascending.
    pub fn subtree(&self, v: u32) -> Vec<u32> {
        let children = self.graph.in_neighbors();
        let mut acc = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            acc.push(x);
            stack.extend_from_slice(&children[x as usize]);
        }
        acc.sort_unstable();
        acc
    }
}

/// Computes levels by following parent chains; fails on cycles or
/// disconnection.
fn tree_levels(graph: &Digraph, root: u32) -> Result<Vec<u32>> {
    let n = graph.vertex_count();
    let mut level = vec![u32::MAX; n];
    level[root as usize] = 0;
    for start in 0..n as u32 {
        if level[start as usize] != u32::MAX {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        loop {
            let next = graph.out_neighbors(cur)[0];
            if level[next as usize] != u32::MAX {
                let base = level[next as usize];
                for (i, &v) in chain.iter().rev().enumerate() {
                    level[v as usize] = base + 1 + i as u32;
                }
                break;
            }
            if chain.contains(&next) {
                return Err(Error::InvalidStructure(format!(
                    "cycle through vertex {next}; no path to root"
                )));
            }
            chain.push(next);
            cur = next;
        }
    }
    Ok(level)
}

// ---------------------------------------------------------------------------
// Cyclical and bidirectional trees
// ---------------------------------------------------------------------------

/// A back arc `closing -> origin` paired with the tree path
/// `origin -> ... -> closing`; together they form a cycle of length
/// `cycle_len >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackArc {
    /// Tail of the back arc; the vertex whose out-degree the arc raises.
    pub closing: u32,
    /// Head of the back arc; deepest vertex of the cycle.
    pub origin: u32,
    /// Number of arcs on the cycle (tree path length + 1).
    pub cycle_len: usize,
}

/// A rooted tree plus back arcs, each closing a cycle along a tree path.
///
/// Core invariants (enforced on construction): the tree arcs form a
/// `RootedTree`; every back arc `(u, v)` has a tree path `v -> ... -> u`;
/// each vertex closes at most one back arc, so out-degrees stay within
/// {1, 2} off the root and {0, 1} at the root.
///
/// Whether the structure is *non-interfering* (every cycle's interior is
/// out-degree 1, which makes the walk-sum closed forms exact) is recorded
/// as a derived property rather than an invariant: interfering structures
/// are still representable and analyzable through the oracles.
#[derive(Debug, Clone)]
pub struct CyclicalTree {
    graph: Digraph,
    root: u32,
    level_of: Vec<u32>,
    back_arcs: Vec<BackArc>,
    /// cycle index per vertex (index into `back_arcs`), u32::MAX if none.
    cycle_of: Vec<u32>,
    non_interfering: bool,
}

impl CyclicalTree {
    /// Builds the structure from an explicit partition: `parents[v]` for all
    /// non-root `v`, plus back arcs given as `(closing, origin)` pairs.
    pub fn from_parts(
        n: usize,
        root: u32,
        parents: &[(u32, u32)],
        back_arcs: &[(u32, u32)],
    ) -> Result<Self> {
        let mut arcs: Vec<(u32, u32)> = parents.to_vec();
        arcs.extend_from_slice(back_arcs);
        let graph = Digraph::new(n, &arcs)?;
        Self::from_graph_with_partition(graph, root, back_arcs)
    }

    /// Builds the structure from a full digraph and the back-arc subset; the
    /// remaining arcs must form a rooted tree.
    pub fn from_graph_with_partition(
        graph: Digraph,
        root: u32,
        back_arcs: &[(u32, u32)],
    ) -> Result<Self> {
        let n = graph.vertex_count();
        if root as usize >= n {
            return Err(Error::VertexOutOfRange(root, n));
        }
        let back_set: std::collections::BTreeSet<(u32, u32)> = back_arcs.iter().copied().collect();
        for &(u, v) in back_arcs {
            if !graph.has_arc(u, v) {
                return Err(Error::InvalidStructure(format!(
                    "back arc ({u},{v}) is not an arc of the graph"
                )));
            }
        }
        let tree_arcs: Vec<(u32, u32)> = graph
            .arcs()
            .filter(|arc| !back_set.contains(arc))
            .collect();
        let tree_graph = Digraph::new(n, &tree_arcs)?;
        let tree = RootedTree::new(tree_graph, root)?;

        let mut closers = vec![false; n];
        let mut resolved = Vec::with_capacity(back_set.len());
        for &(u, v) in &back_set {
            if closers[u as usize] {
                return Err(Error::ClosesBackArc(u));
            }
            closers[u as usize] = true;
            // the cycle is the tree path origin -> ... -> closing
            let (lu, lv) = (tree.level_of(u), tree.level_of(v));
            if lv <= lu || !is_ancestor(&tree, u, v) {
                return Err(Error::NoTreePath(v, u));
            }
            resolved.push(BackArc {
                closing: u,
                origin: v,
                cycle_len: lv - lu + 1,
            });
        }

        let mut cycle_of = vec![u32::MAX; n];
        let mut non_interfering = true;
        for (i, ba) in resolved.iter().enumerate() {
            let mut x = ba.origin;
            loop {
                if cycle_of[x as usize] != u32::MAX {
                    non_interfering = false;
                } else {
                    cycle_of[x as usize] = i as u32;
                }
                // interior vertices (everything but the closing one) must
                // keep out-degree 1 for the loop factors to be exact
                if x != ba.closing && graph.out_degree(x) != 1 {
                    non_interfering = false;
                }
                if x == ba.closing {
                    break;
                }
                x = tree.parent(x).expect("cycle path ends at closing vertex");
            }
        }

        let level_of = (0..n as u32).map(|v| tree.level_of(v) as u32).collect();
        Ok(Self {
            graph,
            root,
            level_of,
            back_arcs: resolved,
            cycle_of,
            non_interfering,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn level_of(&self, v: u32) -> usize {
        self.level_of[v as usize] as usize
    }

    pub fn height(&self) -> usize {
        self.level_of.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn back_arcs(&self) -> &[BackArc] {
        &self.back_arcs
    }

    pub fn tree_arcs(&self) -> Vec<(u32, u32)> {
        let back: std::collections::BTreeSet<(u32, u32)> = self
            .back_arcs
            .iter()
            .map(|b| (b.closing, b.origin))
            .collect();
        self.graph.arcs().filter(|a| !back.contains(a)).collect()
    }

    /// Parent along the tree arcs.
    pub fn parent(&self, v: u32) -> Option<u32> {
        if v == self.root {
            return None;
        }
        let back: Option<u32> = self
            .back_arcs
            .iter()
            .find(|b| b.closing == v)
            .map(|b| b.origin);
        self.graph
            .out_neighbors(v)
            .iter()
            .copied()
            .find(|&w| Some(w) != back)
    }

    /// Index into `back_arcs` of the cycle containing `v`, if any. Only
    /// meaningful for non-interfering structures, where cycles are disjoint.
    pub fn cycle_of(&self, v: u32) -> Option<usize> {
        let c = self.cycle_of[v as usize];
        (c != u32::MAX).then_some(c as usize)
    }

    /// True when every cycle interior is out-degree 1; the closed forms
    /// require this.
    pub fn non_interfering(&self) -> bool {
        self.non_interfering
    }

    pub fn root_out_degree(&self) -> usize {
        self.graph.out_degree(self.root)
    }

    /// The cycle closed at the root, when `od(root) = 1`.
    pub fn root_cycle(&self) -> Option<&BackArc> {
        self.back_arcs.iter().find(|b| b.closing == self.root)
    }

    /// Level census as a profile (back arcs do not affect levels).
    pub fn profile(&self) -> LevelProfile {
        let mut counts = vec![0u64; self.height() + 1];
        for &l in &self.level_of {
            counts[l as usize] += 1;
        }
        LevelProfile::new(counts).expect("levels form a valid profile")
    }
}

fn is_ancestor(tree: &RootedTree, anc: u32, v: u32) -> bool {
    let mut x = v;
    loop {
        if x == anc {
            return true;
        }
        match tree.parent(x) {
            Some(p) => x = p,
            None => return false,
        }
    }
}

/// A cyclical tree whose cycles are all 2-cycles (`origin -> closing` tree
/// arc doubled by a `closing -> origin` back arc).
#[derive(Debug, Clone)]
pub struct BidirectionalTree {
    inner: CyclicalTree,
}

impl BidirectionalTree {
    pub fn from_parts(
        n: usize,
        root: u32,
        parents: &[(u32, u32)],
        back_arcs: &[(u32, u32)],
    ) -> Result<Self> {
        Self::from_cyclical(CyclicalTree::from_parts(n, root, parents, back_arcs)?)
    }

    /// A pure rooted tree is a bidirectional tree with no back arcs.
    pub fn from_tree(tree: &RootedTree) -> Self {
        let ct = CyclicalTree::from_graph_with_partition(tree.graph().clone(), tree.root(), &[])
            .expect("a rooted tree is a trivially valid cyclical tree");
        Self { inner: ct }
    }

    pub fn from_cyclical(inner: CyclicalTree) -> Result<Self> {
        if let Some(b) = inner.back_arcs().iter().find(|b| b.cycle_len != 2) {
            return Err(Error::InvalidStructure(format!(
                "back arc ({},{}) closes a {}-cycle; bidirectional trees only carry 2-cycles",
                b.closing, b.origin, b.cycle_len
            )));
        }
        Ok(Self { inner })
    }

    pub fn as_cyclical(&self) -> &CyclicalTree {
        &self.inner
    }

    pub fn into_cyclical(self) -> CyclicalTree {
        self.inner
    }

    pub fn graph(&self) -> &Digraph {
        self.inner.graph()
    }

    pub fn root(&self) -> u32 {
        self.inner.root()
    }

    pub fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    pub fn level_of(&self, v: u32) -> usize {
        self.inner.level_of(v)
    }

    pub fn back_arcs(&self) -> &[BackArc] {
        self.inner.back_arcs()
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        self.inner.parent(v)
    }

    pub fn non_interfering(&self) -> bool {
        self.inner.non_interfering()
    }

    pub fn profile(&self) -> LevelProfile {
        self.inner.profile()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digraph_rejects_self_loop() {
        assert!(matches!(
            Digraph::new(2, &[(0, 0)]),
            Err(Error::SelfLoop(0))
        ));
    }

    #[test]
    fn digraph_rejects_duplicate_and_range() {
        assert!(matches!(
            Digraph::new(2, &[(0, 1), (0, 1)]),
            Err(Error::DuplicateArc(0, 1))
        ));
        assert!(matches!(
            Digraph::new(2, &[(0, 2)]),
            Err(Error::ArcOutOfRange(0, 2, 2))
        ));
    }

    #[test]
    fn profile_parsing() {
        let p = parse_profile("1").unwrap();
        assert_eq!(p.height(), 0);
        assert_eq!(p.order(), 1);

        let p = parse_profile("1 3 2").unwrap();
        assert_eq!(p.counts(), &[1, 3, 2]);
        assert_eq!(p.height(), 2);
        assert_eq!(p.order(), 6);

        assert!(matches!(
            parse_profile("2 3"),
            Err(Error::FirstLevelNotOne(2))
        ));
        assert!(matches!(parse_profile(""), Err(Error::EmptyProfile)));
        assert!(matches!(parse_profile("1 x"), Err(Error::MalformedCount(_))));
        assert!(matches!(parse_profile("1 0"), Err(Error::ZeroCount)));
    }

    #[test]
    fn profile_display_round_trip() {
        let p = parse_profile("1 4 2 7").unwrap();
        assert_eq!(parse_profile(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn rooted_tree_accepts_path() {
        // v -> u -> r
        let g = Digraph::new(3, &[(2, 1), (1, 0)]).unwrap();
        let t = RootedTree::new(g, 0).unwrap();
        assert_eq!(t.level_of(0), 0);
        assert_eq!(t.level_of(1), 1);
        assert_eq!(t.level_of(2), 2);
        assert_eq!(t.profile().counts(), &[1, 1, 1]);
    }

    #[test]
    fn rooted_tree_rejects_cycle() {
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(RootedTree::new(g, 0).is_err());
    }

    #[test]
    fn cyclical_from_parts_resolves_cycle_lengths() {
        // chain r<-w<-u<-v with back arc w->v: cycle v->u->w of length 3
        let ct = CyclicalTree::from_parts(4, 0, &[(1, 0), (2, 1), (3, 2)], &[(1, 3)]).unwrap();
        assert_eq!(ct.back_arcs().len(), 1);
        assert_eq!(ct.back_arcs()[0].cycle_len, 3);
        assert!(ct.non_interfering());
        assert_eq!(ct.cycle_of(3), Some(0));
        assert_eq!(ct.cycle_of(0), None);
    }

    #[test]
    fn cyclical_rejects_second_closure_at_same_vertex() {
        // u=1 has children 2 and 3 and tries to close a back arc to both
        let err = CyclicalTree::from_parts(4, 0, &[(1, 0), (2, 1), (3, 1)], &[(1, 2), (1, 3)]);
        assert!(matches!(err, Err(Error::ClosesBackArc(1))));
    }

    #[test]
    fn cyclical_detects_interference() {
        // chain r<-u<-v<-w, back arcs u->v and v->w: v sits interior to the
        // u-cycle with out-degree 2
        let ct =
            CyclicalTree::from_parts(4, 0, &[(1, 0), (2, 1), (3, 2)], &[(1, 2), (2, 3)]).unwrap();
        assert!(!ct.non_interfering());
    }

    #[test]
    fn bidirectional_requires_two_cycles() {
        let ct = CyclicalTree::from_parts(3, 0, &[(1, 0), (2, 1)], &[(0, 2)]).unwrap();
        assert_eq!(ct.back_arcs()[0].cycle_len, 3);
        assert!(BidirectionalTree::from_cyclical(ct).is_err());

        let bt = BidirectionalTree::from_parts(2, 0, &[(1, 0)], &[(0, 1)]).unwrap();
        assert_eq!(bt.back_arcs()[0].cycle_len, 2);
        assert_eq!(bt.as_cyclical().root_out_degree(), 1);
    }

    #[test]
    fn parent_skips_back_arc_at_closing_vertex() {
        // r<-u<-v, back arc u->v: u's out-neighbors are {r, v}; parent is r
        let ct = CyclicalTree::from_parts(3, 0, &[(1, 0), (2, 1)], &[(1, 2)]).unwrap();
        assert_eq!(ct.parent(1), Some(0));
        assert_eq!(ct.parent(2), Some(1));
        assert_eq!(ct.parent(0), None);
    }

    #[test]
    fn subtree_collects_descendants() {
        // r=0; children 1,2; 1's child 3
        let g = Digraph::new(4, &[(1, 0), (2, 0), (3, 1)]).unwrap();
        let t = RootedTree::new(g, 0).unwrap();
        assert_eq!(t.subtree(1), vec![1, 3]);
        assert_eq!(t.subtree(0), vec![0, 1, 2, 3]);
    }
}
