//! The set of search trees: two rooted trees grown from the start and goal
//! configurations plus any number of local trees.
//!
//! All nodes live in one arena and one spatial index. Local trees merge by
//! absorption (parent pointers of the smaller side are reversed along the
//! path to the joining edge). The start and goal trees never absorb each
//! other; an edge between them is stored as a *bridge*, and the best
//! solution is the cheapest bridge.

mod dump;
mod index;

use std::collections::{BTreeSet, VecDeque};

use crate::cspace::{Config, Scene, SpaceSpec};

pub use dump::{DumpError, DumpNode, DumpTree, ForestDump};
pub use index::MAX_HASHED_DIM;
use index::SpatialIndex;

/// Strict-improvement margin for reparenting.
const REWIRE_MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeId(pub usize);

impl TreeId {
    pub const INIT: TreeId = TreeId(0);
    pub const TARGET: TreeId = TreeId(1);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeKind {
    Init,
    Target,
    Local,
}

impl TreeKind {
    pub fn is_rooted(self) -> bool {
        !matches!(self, TreeKind::Local)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TreeKind::Init => "init",
            TreeKind::Target => "target",
            TreeKind::Local => "local",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    config: Config,
    parent: Option<NodeId>,
    /// Cost to the root; `None` while the node sits in a local tree.
    cost: Option<f64>,
    tree: TreeId,
    children: Vec<NodeId>,
}

impl Node {
    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn cost(&self) -> Option<f64> {
        self.cost
    }

    pub fn tree(&self) -> TreeId {
        self.tree
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }
}

#[derive(Clone, Debug)]
pub struct Tree {
    kind: TreeKind,
    root: NodeId,
    nodes: Vec<NodeId>,
    absorbed_into: Option<TreeId>,
}

impl Tree {
    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The tree that swallowed this one, if any.
    pub fn absorbed_into(&self) -> Option<TreeId> {
        self.absorbed_into
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ForestError {
    #[error("node {0:?} does not exist")]
    NoSuchNode(NodeId),
    #[error("tree {0:?} does not exist or was absorbed")]
    NoSuchTree(TreeId),
    #[error("parent {parent:?} is not in tree {tree:?}")]
    ParentNotInTree { parent: NodeId, tree: TreeId },
    #[error("configuration has {got} coordinates, space has {want}")]
    DimensionMismatch { got: usize, want: usize },
}

/// An edge between the start tree and the goal tree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bridge {
    pub init: NodeId,
    pub target: NodeId,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MergeReport {
    /// `(absorbed, into)` pairs in the order they happened.
    pub absorbed: Vec<(TreeId, TreeId)>,
    /// Nodes that moved from a local tree into a rooted one.
    pub newly_rooted: Vec<NodeId>,
    pub bridges_added: usize,
    /// Foreign neighbours whose connecting motion collided.
    pub blocked: usize,
}

impl MergeReport {
    pub fn merged(&self) -> bool {
        !self.absorbed.is_empty() || self.bridges_added > 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub path: Vec<Config>,
    pub cost: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RewireReport {
    pub reparented: usize,
    pub cost_changed: bool,
}

#[derive(Clone, Debug)]
pub struct Forest {
    space: SpaceSpec,
    nodes: Vec<Node>,
    trees: Vec<Tree>,
    index: SpatialIndex,
    bridges: Vec<Bridge>,
    bridge_set: BTreeSet<(NodeId, NodeId)>,
    /// Indices into `bridges` per node.
    node_bridges: Vec<Vec<usize>>,
    best: Option<(f64, usize)>,
}

impl Forest {
    /// A forest with the start and goal trees. `bucket_edge` sizes the
    /// spatial hash and should match the join radius.
    pub fn new(space: &SpaceSpec, q_init: Config, q_target: Config, bucket_edge: f64) -> Result<Self, ForestError> {
        let mut forest = Forest {
            space: space.clone(),
            nodes: Vec::new(),
            trees: Vec::new(),
            index: SpatialIndex::new(space, bucket_edge),
            bridges: Vec::new(),
            bridge_set: BTreeSet::new(),
            node_bridges: Vec::new(),
            best: None,
        };
        forest.new_tree(TreeKind::Init, q_init, Some(0.0))?;
        forest.new_tree(TreeKind::Target, q_target, Some(0.0))?;
        Ok(forest)
    }

    fn check_dim(&self, q: &Config) -> Result<(), ForestError> {
        if q.dim() != self.space.dim() {
            return Err(ForestError::DimensionMismatch {
                got: q.dim(),
                want: self.space.dim(),
            });
        }
        Ok(())
    }

    fn new_tree(&mut self, kind: TreeKind, q: Config, cost: Option<f64>) -> Result<TreeId, ForestError> {
        self.check_dim(&q)?;
        let tid = TreeId(self.trees.len());
        let nid = self.push_node(q, None, cost, tid);
        self.trees.push(Tree {
            kind,
            root: nid,
            nodes: vec![nid],
            absorbed_into: None,
        });
        Ok(tid)
    }

    fn push_node(&mut self, q: Config, parent: Option<NodeId>, cost: Option<f64>, tree: TreeId) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.index.insert(id, &q);
        self.node_bridges.push(Vec::new());
        self.nodes.push(Node {
            config: q,
            parent,
            cost,
            tree,
            children: Vec::new(),
        });
        id
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn config(&self, id: NodeId) -> &Config {
        &self.nodes[id.0].config
    }

    pub fn tree(&self, id: TreeId) -> &Tree {
        &self.trees[id.0]
    }

    pub fn tree_of(&self, id: NodeId) -> TreeId {
        self.nodes[id.0].tree
    }

    pub fn kind_of(&self, id: NodeId) -> TreeKind {
        self.trees[self.nodes[id.0].tree.0].kind
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    /// Every tree ever created, including absorbed (now empty) ones.
    pub fn trees(&self) -> impl Iterator<Item = (TreeId, &Tree)> {
        self.trees.iter().enumerate().map(|(i, t)| (TreeId(i), t))
    }

    /// Trees that still own nodes.
    pub fn live_trees(&self) -> impl Iterator<Item = (TreeId, &Tree)> {
        self.trees().filter(|(_, t)| t.absorbed_into.is_none())
    }

    pub fn local_trees_created(&self) -> usize {
        self.trees.len() - 2
    }

    pub fn bridges(&self) -> &[Bridge] {
        &self.bridges
    }

    /// Parent-child edges, child first.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().filter_map(|(id, n)| n.parent.map(|p| (id, p)))
    }

    pub fn best_cost(&self) -> Option<f64> {
        self.best.map(|b| b.0)
    }

    /// Nearest node of `tree`, ties to the smaller id.
    ///
    /// # Panics
    /// If the tree has no nodes.
    pub fn nearest(&self, q: &Config, tree: TreeId) -> NodeId {
        let t = &self.trees[tree.0];
        assert!(!t.nodes.is_empty(), "nearest on empty tree {tree:?}");
        self.index
            .nearest(q, |id| &self.nodes[id.0].config, |id| self.nodes[id.0].tree == tree, &t.nodes)
            .expect("nonempty tree has a nearest node")
    }

    /// All nodes of any tree with `distance <= radius`, in no particular order.
    pub fn near_within(&self, q: &Config, radius: f64) -> Vec<NodeId> {
        self.index.within(q, radius, |id| &self.nodes[id.0].config)
    }

    fn live_tree(&self, tree: TreeId) -> Result<&Tree, ForestError> {
        match self.trees.get(tree.0) {
            Some(t) if t.absorbed_into.is_none() => Ok(t),
            _ => Err(ForestError::NoSuchTree(tree)),
        }
    }

    /// Adds `q` as a child of `parent`. Collision checking is the caller's job.
    pub fn insert(&mut self, tree: TreeId, parent: NodeId, q: Config) -> Result<NodeId, ForestError> {
        self.check_dim(&q)?;
        self.live_tree(tree)?;
        let p = self.nodes.get(parent.0).ok_or(ForestError::NoSuchNode(parent))?;
        if p.tree != tree {
            return Err(ForestError::ParentNotInTree { parent, tree });
        }
        let cost = p.cost.map(|c| c + self.space.distance(&p.config, &q));
        let id = self.push_node(q, Some(parent), cost, tree);
        self.nodes[parent.0].children.push(id);
        self.trees[tree.0].nodes.push(id);
        Ok(id)
    }

    /// Starts a new single-node local tree at `q`.
    pub fn add_local_tree(&mut self, q: Config) -> Result<(TreeId, NodeId), ForestError> {
        let tid = self.new_tree(TreeKind::Local, q, None)?;
        Ok((tid, self.trees[tid.0].root))
    }

    /// Walks parent pointers from `id` up to its root.
    pub fn path_to_root(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = vec![id];
        let mut at = id;
        while let Some(p) = self.nodes[at.0].parent {
            out.push(p);
            at = p;
        }
        out
    }

    fn is_ancestor(&self, ancestor: NodeId, of: NodeId) -> bool {
        let mut at = Some(of);
        while let Some(n) = at {
            if n == ancestor {
                return true;
            }
            at = self.nodes[n.0].parent;
        }
        false
    }

    fn detach(&mut self, child: NodeId) {
        if let Some(p) = self.nodes[child.0].parent.take() {
            let kids = &mut self.nodes[p.0].children;
            if let Some(pos) = kids.iter().position(|&c| c == child) {
                kids.swap_remove(pos);
            }
        }
    }

    fn attach(&mut self, child: NodeId, parent: NodeId) {
        self.nodes[child.0].parent = Some(parent);
        self.nodes[parent.0].children.push(child);
    }

    /// Recomputes costs below `from` (whose own cost must be set). Costs
    /// only ever fall, so the best bridge can only change to one touching
    /// this subtree.
    fn propagate_costs(&mut self, from: NodeId) {
        let mut stack = vec![from];
        while let Some(n) = stack.pop() {
            for &i in &self.node_bridges[n.0] {
                let c = self.bridge_cost(&self.bridges[i]);
                if self.best.is_none_or(|(bc, _)| c < bc) {
                    self.best = Some((c, i));
                }
            }
            let base = self.nodes[n.0].cost.expect("propagating from a costed node");
            for i in 0..self.nodes[n.0].children.len() {
                let c = self.nodes[n.0].children[i];
                let d = self.space.distance(&self.nodes[n.0].config, &self.nodes[c.0].config);
                self.nodes[c.0].cost = Some(base + d);
                stack.push(c);
            }
        }
    }

    fn reparent(&mut self, child: NodeId, parent: NodeId) {
        self.detach(child);
        self.attach(child, parent);
        let d = self.space.distance(&self.nodes[parent.0].config, &self.nodes[child.0].config);
        let base = self.nodes[parent.0].cost.expect("reparenting onto a costed node");
        self.nodes[child.0].cost = Some(base + d);
        self.propagate_costs(child);
    }

    /// RRT*-style local optimisation around `node` within `radius`, on the
    /// node's own tree (which must be rooted). First picks the cheapest
    /// collision-free parent, then reparents neighbours through `node` on
    /// strict improvement.
    pub fn rewire(&mut self, node: NodeId, radius: f64, scene: &Scene) -> RewireReport {
        let mut report = RewireReport::default();
        let tree = self.nodes[node.0].tree;
        if !self.trees[tree.0].kind.is_rooted() || self.nodes[node.0].parent.is_none() {
            // Roots are already optimal; local trees have no costs.
            if self.trees[tree.0].kind.is_rooted() {
                self.rewire_neighbours(node, radius, scene, &mut report);
            }
            return report;
        }
        let q = self.nodes[node.0].config.clone();
        let mut near: Vec<(f64, NodeId)> = self
            .near_within(&q, radius)
            .into_iter()
            .filter(|&n| n != node && self.nodes[n.0].tree == tree)
            .map(|n| {
                let c = self.nodes[n.0].cost.expect("rooted node has a cost");
                (c + self.space.distance(&self.nodes[n.0].config, &q), n)
            })
            .collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let current = self.nodes[node.0].cost.expect("rooted node has a cost");
        for &(via, cand) in &near {
            if via >= current - REWIRE_MARGIN {
                break;
            }
            if Some(cand) == self.nodes[node.0].parent {
                break;
            }
            if self.is_ancestor(node, cand) {
                continue;
            }
            if scene.motion_valid(&self.nodes[cand.0].config, &q) {
                self.reparent(node, cand);
                report.reparented += 1;
                report.cost_changed = true;
                break;
            }
        }
        self.rewire_neighbours(node, radius, scene, &mut report);
        report
    }

    fn rewire_neighbours(&mut self, node: NodeId, radius: f64, scene: &Scene, report: &mut RewireReport) {
        let tree = self.nodes[node.0].tree;
        let q = self.nodes[node.0].config.clone();
        let mut near: Vec<NodeId> = self
            .near_within(&q, radius)
            .into_iter()
            .filter(|&n| n != node && self.nodes[n.0].tree == tree)
            .collect();
        near.sort();
        for n in near {
            let here = self.nodes[node.0].cost.expect("rooted node has a cost");
            let d = self.space.distance(&q, &self.nodes[n.0].config);
            let theirs = self.nodes[n.0].cost.expect("rooted node has a cost");
            if here + d >= theirs - REWIRE_MARGIN {
                continue;
            }
            if self.nodes[n.0].parent.is_none() || self.is_ancestor(n, node) {
                continue;
            }
            if scene.motion_valid(&q, &self.nodes[n.0].config) {
                self.reparent(n, node);
                report.reparented += 1;
                report.cost_changed = true;
            }
        }
    }

    fn bridge_cost(&self, b: &Bridge) -> f64 {
        let a = &self.nodes[b.init.0];
        let t = &self.nodes[b.target.0];
        a.cost.expect("init node cost") + self.space.distance(&a.config, &t.config) + t.cost.expect("target node cost")
    }

    fn add_bridge(&mut self, a: NodeId, b: NodeId) -> bool {
        let (init, target) = if self.nodes[a.0].tree == TreeId::INIT { (a, b) } else { (b, a) };
        debug_assert_eq!(self.nodes[init.0].tree, TreeId::INIT);
        debug_assert_eq!(self.nodes[target.0].tree, TreeId::TARGET);
        if !self.bridge_set.insert((init, target)) {
            return false;
        }
        self.bridges.push(Bridge { init, target });
        let i = self.bridges.len() - 1;
        self.node_bridges[init.0].push(i);
        self.node_bridges[target.0].push(i);
        let c = self.bridge_cost(&Bridge { init, target });
        if self.best.is_none_or(|(bc, _)| c < bc) {
            self.best = Some((c, self.bridges.len() - 1));
        }
        true
    }

    /// Connects `node` to every foreign tree that has a node within `radius`
    /// reachable by a collision-free motion. Trees are tried nearest first.
    pub fn try_merge(&mut self, node: NodeId, radius: f64, scene: &Scene) -> MergeReport {
        let mut report = MergeReport::default();
        let q = self.nodes[node.0].config.clone();
        let mut near: Vec<(f64, NodeId)> = self
            .near_within(&q, radius)
            .into_iter()
            .filter(|&n| n != node)
            .map(|n| (self.space.distance(&q, &self.nodes[n.0].config), n))
            .collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, other) in near {
            let mine = self.nodes[node.0].tree;
            let theirs = self.nodes[other.0].tree;
            if mine == theirs {
                continue;
            }
            let both_rooted = self.trees[mine.0].kind.is_rooted() && self.trees[theirs.0].kind.is_rooted();
            if both_rooted && self.bridge_set.contains(&ordered_bridge(mine, node, other)) {
                continue;
            }
            if !scene.motion_valid(&q, &self.nodes[other.0].config) {
                report.blocked += 1;
                continue;
            }
            if both_rooted {
                if self.add_bridge(node, other) {
                    report.bridges_added += 1;
                }
            } else {
                self.absorb_pair(node, other, &mut report);
            }
        }
        report
    }

    /// Joins the trees of `a` and `b` through the edge `a`-`b`.
    fn absorb_pair(&mut self, a: NodeId, b: NodeId, report: &mut MergeReport) {
        let ta = self.nodes[a.0].tree;
        let tb = self.nodes[b.0].tree;
        let (ka, kb) = (self.trees[ta.0].kind, self.trees[tb.0].kind);
        let a_wins = match (ka.is_rooted(), kb.is_rooted()) {
            (true, false) => true,
            (false, true) => false,
            _ => {
                let (la, lb) = (self.trees[ta.0].len(), self.trees[tb.0].len());
                la > lb || (la == lb && ta < tb)
            }
        };
        let (keep, keep_node, lose, lose_node) = if a_wins { (ta, a, tb, b) } else { (tb, b, ta, a) };
        self.reroot(lose_node);
        self.attach(lose_node, keep_node);
        let moved = std::mem::take(&mut self.trees[lose.0].nodes);
        for &n in &moved {
            self.nodes[n.0].tree = keep;
        }
        self.trees[keep.0].nodes.extend_from_slice(&moved);
        self.trees[lose.0].absorbed_into = Some(keep);
        if self.trees[keep.0].kind.is_rooted() {
            let d = self.space.distance(&self.nodes[keep_node.0].config, &self.nodes[lose_node.0].config);
            let base = self.nodes[keep_node.0].cost.expect("rooted node has a cost");
            self.nodes[lose_node.0].cost = Some(base + d);
            self.propagate_costs(lose_node);
            // Breadth-first from the joining node, so callers rewiring in
            // this order see parents before children.
            let mut queue = VecDeque::from([lose_node]);
            while let Some(n) = queue.pop_front() {
                report.newly_rooted.push(n);
                queue.extend(self.nodes[n.0].children.iter().copied());
            }
        }
        report.absorbed.push((lose, keep));
    }

    /// Makes `new_root` the root of its tree by reversing parent pointers.
    fn reroot(&mut self, new_root: NodeId) {
        let path = self.path_to_root(new_root);
        for w in path.windows(2).rev() {
            let (child, parent) = (w[0], w[1]);
            self.detach(child);
            self.attach(parent, child);
        }
        let tree = self.nodes[new_root.0].tree;
        self.trees[tree.0].root = new_root;
    }

    /// Start-to-goal path through the cheapest bridge.
    pub fn extract_solution(&self) -> Option<Solution> {
        let (cost, i) = self.best?;
        let b = self.bridges[i];
        let mut ids = self.path_to_root(b.init);
        ids.reverse();
        ids.extend(self.path_to_root(b.target));
        Some(Solution {
            path: ids.iter().map(|&n| self.nodes[n.0].config.clone()).collect(),
            cost,
        })
    }

    /// Structural self-check: tree membership, acyclicity, child lists and
    /// cost consistency within `tol`.
    pub fn check_invariants(&self, tol: f64) -> Result<(), String> {
        for (tid, t) in self.trees() {
            if t.absorbed_into.is_some() {
                if !t.nodes.is_empty() {
                    return Err(format!("absorbed tree {tid:?} still owns nodes"));
                }
                continue;
            }
            if self.nodes[t.root.0].parent.is_some() {
                return Err(format!("root of {tid:?} has a parent"));
            }
            for &n in &t.nodes {
                if self.nodes[n.0].tree != tid {
                    return Err(format!("{n:?} listed in {tid:?} but labelled {:?}", self.nodes[n.0].tree));
                }
            }
        }
        let mut listed = 0;
        for (_, t) in self.live_trees() {
            listed += t.nodes.len();
        }
        if listed != self.nodes.len() {
            return Err(format!("{listed} nodes listed in trees, {} exist", self.nodes.len()));
        }
        for (id, n) in self.nodes() {
            let steps = self.path_to_root_checked(id)?;
            let root = *steps.last().unwrap();
            if self.trees[n.tree.0].root != root {
                return Err(format!("{id:?} reaches {root:?}, not its tree root"));
            }
            if let Some(p) = n.parent {
                if self.nodes[p.0].tree != n.tree {
                    return Err(format!("edge {id:?}->{p:?} crosses trees"));
                }
                if !self.nodes[p.0].children.contains(&id) {
                    return Err(format!("{p:?} does not list child {id:?}"));
                }
            }
            for &c in &n.children {
                if self.nodes[c.0].parent != Some(id) {
                    return Err(format!("{c:?} listed under {id:?} but has another parent"));
                }
            }
            let rooted = self.trees[n.tree.0].kind.is_rooted();
            match (rooted, n.cost) {
                (false, None) => {}
                (false, Some(_)) => return Err(format!("local node {id:?} has a cost")),
                (true, None) => return Err(format!("rooted node {id:?} has no cost")),
                (true, Some(c)) => {
                    let want: f64 = steps
                        .windows(2)
                        .map(|w| self.space.distance(&self.nodes[w[0].0].config, &self.nodes[w[1].0].config))
                        .sum();
                    if (c - want).abs() > tol {
                        return Err(format!("{id:?} cost {c} but path length {want}"));
                    }
                }
            }
        }
        for b in &self.bridges {
            if self.nodes[b.init.0].tree != TreeId::INIT || self.nodes[b.target.0].tree != TreeId::TARGET {
                return Err(format!("bridge {b:?} does not join start and goal trees"));
            }
        }
        let cheapest = self.bridges.iter().map(|b| self.bridge_cost(b)).min_by(f64::total_cmp);
        match (cheapest, self.best) {
            (None, None) => {}
            (Some(want), Some((got, _))) if (want - got).abs() <= tol => {}
            (want, got) => return Err(format!("best bridge cost {got:?} but cheapest is {want:?}")),
        }
        Ok(())
    }

    fn path_to_root_checked(&self, id: NodeId) -> Result<Vec<NodeId>, String> {
        let mut out = vec![id];
        let mut at = id;
        while let Some(p) = self.nodes[at.0].parent {
            if out.len() > self.nodes.len() {
                return Err(format!("cycle above {id:?}"));
            }
            out.push(p);
            at = p;
        }
        Ok(out)
    }

    /// Snapshot for rendering. `samplers` are local-sampler positions.
    pub fn dump(&self, samplers: &[Config]) -> ForestDump {
        ForestDump {
            trees: self
                .trees()
                .map(|(id, t)| DumpTree {
                    id: id.0,
                    kind: t.kind,
                    root: t.root.0,
                    absorbed_into: t.absorbed_into.map(|a| a.0),
                })
                .collect(),
            nodes: self
                .nodes()
                .map(|(id, n)| DumpNode {
                    id: id.0,
                    tree: n.tree.0,
                    parent: n.parent.map(|p| p.0),
                    cost: n.cost,
                    coords: n.config.coords().to_vec(),
                })
                .collect(),
            bridges: self.bridges.iter().map(|b| (b.init.0, b.target.0)).collect(),
            best: self.best.map(|(c, i)| (self.bridges[i].init.0, self.bridges[i].target.0, c)),
            samplers: samplers.iter().map(|c| c.coords().to_vec()).collect(),
            path: self
                .extract_solution()
                .map(|s| s.path.into_iter().map(Config::into_inner).collect())
                .unwrap_or_default(),
        }
    }
}

fn ordered_bridge(mine: TreeId, node: NodeId, other: NodeId) -> (NodeId, NodeId) {
    if mine == TreeId::INIT {
        (node, other)
    } else {
        (other, node)
    }
}

