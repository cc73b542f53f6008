//! Monotone threshold access trees.
//!
//! A tree node is a threshold gate over its ordered children; a leaf names an
//! attribute. A node's evaluation point within its parent is its 1-based
//! child index, so sharing a secret assigns each node `x` the value
//! `q_parent(index(x))` of the parent's random polynomial, and reconstruction
//! interpolates chosen children at zero, gate by gate, bottom-up.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::groups::{GroupContext, Scalar};

/// Attribute `j` of authority `k`, globally unique as the pair `(k, j)`.
/// Both indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributeId {
    pub authority: u32,
    pub attribute: u32,
}

impl AttributeId {
    pub fn new(authority: u32, attribute: u32) -> AttributeId {
        AttributeId {
            authority,
            attribute,
        }
    }
}

impl core::fmt::Display for AttributeId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:{}", self.authority, self.attribute)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AccessError {
    #[error("threshold must satisfy 0 < k <= number of children")]
    InvalidThreshold,
    #[error("gate must have at least one child")]
    EmptyGate,
    #[error("attribute {0} appears at more than one leaf")]
    DuplicateLeafAttribute(AttributeId),
    #[error("attribute set does not satisfy the tree")]
    Unsatisfied,
    #[error("interpolation points must have distinct abscissae")]
    DuplicatePoints,
    #[error("evaluation point is not a member of the index set")]
    PointNotInSet,
    #[error("no interpolation points supplied")]
    NoPoints,
    #[error("no share recorded for leaf attribute {0}")]
    MissingLeafShare(AttributeId),
    #[error("malformed preorder tree encoding")]
    MalformedPreorder,
}

/// Index of a node within its tree's arena.
pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
struct TreeNode {
    /// Threshold `k` of the gate; always 1 for leaves.
    threshold: u32,
    children: Vec<NodeId>,
    attribute: Option<AttributeId>,
}

/// An ordered threshold-gate tree whose leaves carry attribute identifiers.
///
/// Invariants enforced at construction: every gate has `0 < k <= num`
/// children, leaves have threshold 1 and no children, and no attribute
/// appears at two leaves. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessTree {
    nodes: Vec<TreeNode>,
    root: NodeId,
}

impl AccessTree {
    pub fn leaf(attribute: AttributeId) -> AccessTree {
        AccessTree {
            nodes: vec![TreeNode {
                threshold: 1,
                children: Vec::new(),
                attribute: Some(attribute),
            }],
            root: 0,
        }
    }

    /// A `k`-of-`children.len()` gate over the given subtrees, ordered as
    /// passed (child indices are positional, 1-based).
    pub fn threshold(k: u32, children: Vec<AccessTree>) -> Result<AccessTree, AccessError> {
        if children.is_empty() {
            return Err(AccessError::EmptyGate);
        }
        if k == 0 || k as usize > children.len() {
            return Err(AccessError::InvalidThreshold);
        }
        let mut nodes = Vec::new();
        let mut child_roots = Vec::new();
        for child in children {
            let offset = nodes.len() + 1; // +1 for the root slot prepended below
            child_roots.push(child.root + offset);
            for mut node in child.nodes {
                for c in &mut node.children {
                    *c += offset;
                }
                nodes.push(node);
            }
        }
        let mut all = vec![TreeNode {
            threshold: k,
            children: child_roots,
            attribute: None,
        }];
        all.extend(nodes);
        let tree = AccessTree { nodes: all, root: 0 };
        let mut seen = BTreeSet::new();
        for (_, attr) in tree.leaves() {
            if !seen.insert(attr) {
                return Err(AccessError::DuplicateLeafAttribute(attr));
            }
        }
        Ok(tree)
    }

    /// AND gate: all children required.
    pub fn all_of(children: Vec<AccessTree>) -> Result<AccessTree, AccessError> {
        let k = children.len() as u32;
        AccessTree::threshold(k, children)
    }

    /// OR gate: any child suffices.
    pub fn any_of(children: Vec<AccessTree>) -> Result<AccessTree, AccessError> {
        AccessTree::threshold(1, children)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn threshold_of(&self, node: NodeId) -> u32 {
        self.nodes[node].threshold
    }

    pub fn children_of(&self, node: NodeId) -> &[NodeId] {
        &self.nodes[node].children
    }

    pub fn attribute_of(&self, node: NodeId) -> Option<AttributeId> {
        self.nodes[node].attribute
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        self.nodes[node].children.is_empty()
    }

    /// All `(node, attribute)` leaf pairs in preorder.
    pub fn leaves(&self) -> Vec<(NodeId, AttributeId)> {
        let mut out = Vec::new();
        self.collect_leaves(self.root, &mut out);
        out
    }

    fn collect_leaves(&self, node: NodeId, out: &mut Vec<(NodeId, AttributeId)>) {
        match self.nodes[node].attribute {
            Some(attr) => out.push((node, attr)),
            None => {
                for &c in &self.nodes[node].children {
                    self.collect_leaves(c, out);
                }
            }
        }
    }

    pub fn leaf_attributes(&self) -> BTreeSet<AttributeId> {
        self.leaves().into_iter().map(|(_, a)| a).collect()
    }

    /// Recursive threshold evaluation: a gate is satisfied iff at least `k`
    /// of its children are, a leaf iff its attribute is present.
    pub fn satisfies(&self, attrs: &BTreeSet<AttributeId>) -> bool {
        self.node_satisfies(self.root, attrs)
    }

    fn node_satisfies(&self, node: NodeId, attrs: &BTreeSet<AttributeId>) -> bool {
        let n = &self.nodes[node];
        match n.attribute {
            Some(attr) => attrs.contains(&attr),
            None => {
                let hits = n
                    .children
                    .iter()
                    .filter(|&&c| self.node_satisfies(c, attrs))
                    .count();
                hits >= n.threshold as usize
            }
        }
    }

    /// Picks, for every gate on a satisfied path, the lowest-indexed `k`
    /// satisfied children. Deterministic for fixed inputs.
    pub fn select_satisfying(
        &self,
        attrs: &BTreeSet<AttributeId>,
    ) -> Result<DecryptionPlan, AccessError> {
        if !self.satisfies(attrs) {
            return Err(AccessError::Unsatisfied);
        }
        let mut plan = DecryptionPlan {
            chosen_children: BTreeMap::new(),
            leaves: Vec::new(),
        };
        self.select_node(self.root, attrs, &mut plan);
        Ok(plan)
    }

    fn select_node(&self, node: NodeId, attrs: &BTreeSet<AttributeId>, plan: &mut DecryptionPlan) {
        let n = &self.nodes[node];
        match n.attribute {
            Some(attr) => plan.leaves.push((node, attr)),
            None => {
                let chosen: Vec<NodeId> = n
                    .children
                    .iter()
                    .copied()
                    .filter(|&c| self.node_satisfies(c, attrs))
                    .take(n.threshold as usize)
                    .collect();
                debug_assert_eq!(chosen.len(), n.threshold as usize);
                for &c in &chosen {
                    self.select_node(c, attrs, plan);
                }
                plan.chosen_children.insert(node, chosen);
            }
        }
    }

    /// 1-based index of `child` within `parent`'s child list.
    pub fn child_index(&self, parent: NodeId, child: NodeId) -> u32 {
        let pos = self.nodes[parent]
            .children
            .iter()
            .position(|&c| c == child)
            .expect("child of parent");
        pos as u32 + 1
    }

    /// Flattens the tree to preorder `(threshold, child_count, leaf)` records
    /// for the canonical binary encoding.
    pub fn to_preorder(&self) -> Vec<PreorderRecord> {
        let mut out = Vec::new();
        self.preorder_node(self.root, &mut out);
        out
    }

    fn preorder_node(&self, node: NodeId, out: &mut Vec<PreorderRecord>) {
        let n = &self.nodes[node];
        out.push(PreorderRecord {
            threshold: n.threshold,
            child_count: n.children.len() as u32,
            attribute: n.attribute,
        });
        for &c in &n.children {
            self.preorder_node(c, out);
        }
    }

    /// Rebuilds a tree from preorder records, re-validating every invariant.
    pub fn from_preorder(records: &[PreorderRecord]) -> Result<AccessTree, AccessError> {
        let mut pos = 0;
        let tree = Self::parse_preorder(records, &mut pos)?;
        if pos != records.len() {
            return Err(AccessError::MalformedPreorder);
        }
        Ok(tree)
    }

    fn parse_preorder(
        records: &[PreorderRecord],
        pos: &mut usize,
    ) -> Result<AccessTree, AccessError> {
        let rec = records.get(*pos).ok_or(AccessError::MalformedPreorder)?;
        *pos += 1;
        if rec.child_count == 0 {
            let attr = rec.attribute.ok_or(AccessError::MalformedPreorder)?;
            if rec.threshold != 1 {
                return Err(AccessError::MalformedPreorder);
            }
            Ok(AccessTree::leaf(attr))
        } else {
            if rec.attribute.is_some() {
                return Err(AccessError::MalformedPreorder);
            }
            let mut children = Vec::new();
            for _ in 0..rec.child_count {
                children.push(Self::parse_preorder(records, pos)?);
            }
            AccessTree::threshold(rec.threshold, children)
        }
    }
}

/// One node of the canonical preorder flattening.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreorderRecord {
    pub threshold: u32,
    pub child_count: u32,
    pub attribute: Option<AttributeId>,
}

/// For each satisfied gate, the chosen child subset of size `k`; plus the
/// chosen leaves. Produced by [`AccessTree::select_satisfying`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecryptionPlan {
    chosen_children: BTreeMap<NodeId, Vec<NodeId>>,
    leaves: Vec<(NodeId, AttributeId)>,
}

impl DecryptionPlan {
    pub fn chosen_children(&self, node: NodeId) -> &[NodeId] {
        &self.chosen_children[&node]
    }

    pub fn leaves(&self) -> &[(NodeId, AttributeId)] {
        &self.leaves
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.chosen_children.contains_key(&node) || self.leaves.iter().any(|&(n, _)| n == node)
    }
}

/// Shares per leaf attribute: the values `q_leaf(0)`.
pub type LeafShareMap = BTreeMap<AttributeId, Scalar>;

/// Splits `secret` over the tree: each node gets a random polynomial of
/// degree `threshold - 1` whose constant term is the value assigned to it
/// (the secret at the root, `q_parent(index)` elsewhere); returns the leaf
/// values.
pub fn share_secret<R: RngCore + ?Sized>(
    ctx: &GroupContext,
    tree: &AccessTree,
    secret: &Scalar,
    rng: &mut R,
) -> LeafShareMap {
    let mut shares = BTreeMap::new();
    share_node(ctx, tree, tree.root(), secret, rng, &mut shares);
    shares
}

fn share_node<R: RngCore + ?Sized>(
    ctx: &GroupContext,
    tree: &AccessTree,
    node: NodeId,
    value: &Scalar,
    rng: &mut R,
    shares: &mut LeafShareMap,
) {
    if let Some(attr) = tree.attribute_of(node) {
        shares.insert(attr, *value);
        return;
    }
    // Degree threshold-1 polynomial with constant term `value`; remaining
    // coefficients uniform so that fewer than `threshold` shares keep every
    // candidate secret equally possible.
    let degree = tree.threshold_of(node) as usize - 1;
    let mut coeffs = Vec::with_capacity(degree + 1);
    coeffs.push(*value);
    for _ in 0..degree {
        coeffs.push(ctx.rand_scalar(rng));
    }
    for &child in tree.children_of(node) {
        let x = ctx.scalar_from_u64(tree.child_index(node, child) as u64);
        let y = eval_poly(&coeffs, &x);
        share_node(ctx, tree, child, &y, rng, shares);
    }
}

fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = *coeffs.last().expect("nonempty poly");
    for c in coeffs.iter().rev().skip(1) {
        acc = &(&acc * x) + c;
    }
    acc
}

fn one_like(template: &Scalar) -> Scalar {
    let zero = template - template;
    match zero {
        Scalar::Curve(_) => Scalar::curve_from_u64(1),
        Scalar::Transparent { modulus, .. } => Scalar::transparent(1, modulus),
    }
}

/// Lagrange coefficient `Δ_{x_i,S}(x) = ∏_{x_j ∈ S, x_j ≠ x_i} (x−x_j)/(x_i−x_j)`.
pub fn lagrange_coeff(x_i: &Scalar, set: &[Scalar], x: &Scalar) -> Result<Scalar, AccessError> {
    for (a, sa) in set.iter().enumerate() {
        for sb in set.iter().skip(a + 1) {
            if sa == sb {
                return Err(AccessError::DuplicatePoints);
            }
        }
    }
    if !set.contains(x_i) {
        return Err(AccessError::PointNotInSet);
    }
    let mut acc = one_like(x_i);
    for x_j in set {
        if x_j == x_i {
            continue;
        }
        let num = x - x_j;
        let den = (x_i - x_j).inv().expect("distinct points");
        acc = &acc * &(&num * &den);
    }
    Ok(acc)
}

/// Value at zero of the unique polynomial through the given points.
pub fn interpolate_at_zero(points: &[(Scalar, Scalar)]) -> Result<Scalar, AccessError> {
    if points.is_empty() {
        return Err(AccessError::NoPoints);
    }
    let xs: Vec<Scalar> = points.iter().map(|(x, _)| *x).collect();
    let zero = &xs[0] - &xs[0];
    let mut acc = zero;
    for (x_i, y_i) in points {
        let w = lagrange_coeff(x_i, &xs, &zero)?;
        acc = &acc + &(y_i * &w);
    }
    Ok(acc)
}

/// Reruns the plan's gate-by-gate interpolation over scalar shares,
/// recovering the root secret. This is the exponent-level mirror of
/// ciphertext decryption and doubles as the sharing round-trip oracle.
pub fn reconstruct_from_plan(
    ctx: &GroupContext,
    tree: &AccessTree,
    plan: &DecryptionPlan,
    shares: &LeafShareMap,
) -> Result<Scalar, AccessError> {
    reconstruct_node(ctx, tree, tree.root(), plan, shares)
}

fn reconstruct_node(
    ctx: &GroupContext,
    tree: &AccessTree,
    node: NodeId,
    plan: &DecryptionPlan,
    shares: &LeafShareMap,
) -> Result<Scalar, AccessError> {
    if let Some(attr) = tree.attribute_of(node) {
        return shares
            .get(&attr)
            .copied()
            .ok_or(AccessError::MissingLeafShare(attr));
    }
    let chosen = plan.chosen_children(node);
    let xs: Vec<Scalar> = chosen
        .iter()
        .map(|&c| ctx.scalar_from_u64(tree.child_index(node, c) as u64))
        .collect();
    let zero = ctx.scalar_zero();
    let mut acc = zero;
    for (&child, x_i) in chosen.iter().zip(&xs) {
        let value = reconstruct_node(ctx, tree, child, plan, shares)?;
        let w = lagrange_coeff(x_i, &xs, &zero)?;
        acc = &acc + &(&value * &w);
    }
    Ok(acc)
}

/// Exhaustively enumerates tree shapes for one authority: every gate fan-out
/// and threshold combination with at most `max_leaves` leaves and gate depth
/// at most `max_depth`. Leaf `i` (preorder) carries attribute `(authority, i)`.
/// Intended for oracle-style tests; the output grows quickly with the bounds.
pub fn enumerate_trees(authority: u32, max_leaves: u32, max_depth: u32) -> Vec<AccessTree> {
    let mut out = Vec::new();
    for leaves in 1..=max_leaves {
        out.extend(shapes(leaves, max_depth).into_iter().map(|shape| {
            let mut next = 1;
            build_shape(&shape, authority, &mut next)
        }));
    }
    out
}

enum Shape {
    Leaf,
    Gate(u32, Vec<Shape>),
}

fn shapes(leaves: u32, depth: u32) -> Vec<Shape> {
    let mut out = Vec::new();
    if leaves == 1 {
        out.push(Shape::Leaf);
    }
    if depth == 0 || leaves < 2 {
        return out;
    }
    for parts in compositions(leaves) {
        let child_options: Vec<Vec<Shape>> = parts.iter().map(|&p| shapes(p, depth - 1)).collect();
        for combo in cartesian(&child_options) {
            for threshold in 1..=parts.len() as u32 {
                out.push(Shape::Gate(
                    threshold,
                    combo.iter().map(|s| clone_shape(s)).collect(),
                ));
            }
        }
    }
    out
}

fn clone_shape(s: &Shape) -> Shape {
    match s {
        Shape::Leaf => Shape::Leaf,
        Shape::Gate(k, c) => Shape::Gate(*k, c.iter().map(clone_shape).collect()),
    }
}

/// Ordered ways to write `n` as a sum of at least two positive parts.
fn compositions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if prefix.len() >= 2 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in 1..=n {
            prefix.push(first);
            rec(n - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

fn cartesian<'a>(options: &'a [Vec<Shape>]) -> Vec<Vec<&'a Shape>> {
    let mut acc: Vec<Vec<&Shape>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::new();
        for prefix in &acc {
            for o in opts {
                let mut row = prefix.clone();
                row.push(o);
                next.push(row);
            }
        }
        acc = next;
    }
    acc
}

fn build_shape(shape: &Shape, authority: u32, next_attr: &mut u32) -> AccessTree {
    match shape {
        Shape::Leaf => {
            let attr = AttributeId::new(authority, *next_attr);
            *next_attr += 1;
            AccessTree::leaf(attr)
        }
        Shape::Gate(k, children) => {
            let built = children
                .iter()
                .map(|c| build_shape(c, authority, next_attr))
                .collect();
            AccessTree::threshold(*k, built).expect("enumerated shapes are valid")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{BackendConfig, GlobalParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn ctx(p: u64) -> GroupContext {
        GroupContext::new(GlobalParams::generate(BackendConfig::Transparent { modulus: p }).unwrap())
    }

    fn attr(j: u32) -> AttributeId {
        AttributeId::new(1, j)
    }

    fn attrs(js: &[u32]) -> BTreeSet<AttributeId> {
        js.iter().map(|&j| attr(j)).collect()
    }

    #[test]
    fn leaf_tree_satisfaction() {
        let t = AccessTree::leaf(attr(1));
        assert!(t.satisfies(&attrs(&[1])));
        assert!(!t.satisfies(&attrs(&[2])));
        assert!(!t.satisfies(&BTreeSet::new()));
    }

    #[test]
    fn two_of_three_needs_two() {
        let t = AccessTree::threshold(
            2,
            vec![
                AccessTree::leaf(attr(1)),
                AccessTree::leaf(attr(2)),
                AccessTree::leaf(attr(3)),
            ],
        )
        .unwrap();
        assert!(!t.satisfies(&attrs(&[2])));
        assert!(t.satisfies(&attrs(&[1, 3])));
    }

    #[test]
    fn depth_two_example() {
        // root = 2-of-2 over (1-of-2 gate on {1,2}) and leaf 3
        let inner = AccessTree::any_of(vec![AccessTree::leaf(attr(1)), AccessTree::leaf(attr(2))])
            .unwrap();
        let t = AccessTree::all_of(vec![inner, AccessTree::leaf(attr(3))]).unwrap();
        assert!(t.satisfies(&attrs(&[2, 3])));
        assert!(t.satisfies(&attrs(&[1, 3])));
        assert!(!t.satisfies(&attrs(&[1, 2])));
        assert!(!t.satisfies(&attrs(&[3])));
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert_eq!(
            AccessTree::threshold(1, vec![]).unwrap_err(),
            AccessError::EmptyGate
        );
        assert_eq!(
            AccessTree::threshold(0, vec![AccessTree::leaf(attr(1))]).unwrap_err(),
            AccessError::InvalidThreshold
        );
        assert_eq!(
            AccessTree::threshold(3, vec![AccessTree::leaf(attr(1)), AccessTree::leaf(attr(2))])
                .unwrap_err(),
            AccessError::InvalidThreshold
        );
        assert_eq!(
            AccessTree::all_of(vec![AccessTree::leaf(attr(1)), AccessTree::leaf(attr(1))])
                .unwrap_err(),
            AccessError::DuplicateLeafAttribute(attr(1))
        );
    }

    #[test]
    fn plan_for_single_leaf() {
        let t = AccessTree::leaf(attr(1));
        let plan = t.select_satisfying(&attrs(&[1])).unwrap();
        assert_eq!(plan.leaves(), &[(0, attr(1))]);
    }

    #[test]
    fn plan_tie_breaks_on_lowest_index() {
        let t = AccessTree::any_of(vec![
            AccessTree::leaf(attr(1)),
            AccessTree::leaf(attr(2)),
            AccessTree::leaf(attr(3)),
        ])
        .unwrap();
        let plan = t.select_satisfying(&attrs(&[2, 3])).unwrap();
        // leaf 2 is the lower-indexed matching child
        assert_eq!(plan.leaves().len(), 1);
        assert_eq!(plan.leaves()[0].1, attr(2));
        assert_eq!(t.select_satisfying(&attrs(&[2, 3])).unwrap(), plan);
    }

    #[test]
    fn plan_unsatisfied_errors() {
        let t = AccessTree::all_of(vec![AccessTree::leaf(attr(1)), AccessTree::leaf(attr(2))])
            .unwrap();
        assert_eq!(
            t.select_satisfying(&attrs(&[1])).unwrap_err(),
            AccessError::Unsatisfied
        );
    }

    #[test]
    fn sharing_single_leaf_is_the_secret() {
        let c = ctx(101);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let t = AccessTree::leaf(attr(1));
        let secret = c.scalar_from_u64(42);
        let shares = share_secret(&c, &t, &secret, &mut rng);
        assert_eq!(shares.len(), 1);
        assert_eq!(shares[&attr(1)], secret);
    }

    #[test]
    fn two_of_two_interpolates_back() {
        let c = ctx(101);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let t = AccessTree::all_of(vec![AccessTree::leaf(attr(1)), AccessTree::leaf(attr(2))])
            .unwrap();
        let secret = c.scalar_from_u64(77);
        let shares = share_secret(&c, &t, &secret, &mut rng);
        let points = [
            (c.scalar_from_u64(1), shares[&attr(1)]),
            (c.scalar_from_u64(2), shares[&attr(2)]),
        ];
        assert_eq!(interpolate_at_zero(&points).unwrap(), secret);
    }

    #[test]
    fn n_of_n_lagrange_sum_and_secrecy() {
        let p = 11;
        let c = ctx(p);
        let n = 4u32;
        let t = AccessTree::all_of((1..=n).map(|j| AccessTree::leaf(attr(j))).collect()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let secret = c.scalar_from_u64(6);
        let shares = share_secret(&c, &t, &secret, &mut rng);

        let xs: Vec<Scalar> = (1..=n as u64).map(|i| c.scalar_from_u64(i)).collect();
        let mut sum = c.scalar_zero();
        for j in 1..=n {
            let w = lagrange_coeff(&xs[j as usize - 1], &xs, &c.scalar_zero()).unwrap();
            sum = &sum + &(&shares[&attr(j)] * &w);
        }
        assert_eq!(sum, secret);

        // Any n-1 shares are consistent with every candidate secret: for each
        // candidate there is exactly one completing share for the last leaf.
        for candidate in 0..p {
            let cand = c.scalar_from_u64(candidate);
            let mut pts = vec![(c.scalar_zero(), cand)];
            for j in 1..n {
                pts.push((c.scalar_from_u64(j as u64), shares[&attr(j)]));
            }
            // Interpolate the unique degree-(n-1) polynomial through the
            // candidate secret and the first n-1 shares, complete the last
            // share from it, then confirm reconstruction yields the candidate.
            let completion = eval_at(&pts, &c.scalar_from_u64(n as u64));
            let mut full = pts[1..].to_vec();
            full.push((c.scalar_from_u64(n as u64), completion));
            assert_eq!(interpolate_at_zero(&full).unwrap(), cand);
        }
    }

    /// Lagrange evaluation of the interpolating polynomial at arbitrary x.
    fn eval_at(points: &[(Scalar, Scalar)], x: &Scalar) -> Scalar {
        let xs: Vec<Scalar> = points.iter().map(|(a, _)| *a).collect();
        let mut acc = &xs[0] - &xs[0];
        for (x_i, y_i) in points {
            let w = lagrange_coeff(x_i, &xs, x).unwrap();
            acc = &acc + &(y_i * &w);
        }
        acc
    }

    #[test]
    fn lagrange_examples() {
        let c = ctx(101);
        // singleton: empty product
        let one = lagrange_coeff(
            &c.scalar_from_u64(5),
            &[c.scalar_from_u64(5)],
            &c.scalar_from_u64(33),
        )
        .unwrap();
        assert_eq!(one, c.scalar_one());
        // S = {1,2}, x_i = 1, x = 0 -> (0-2)/(1-2) = 2
        let w = lagrange_coeff(
            &c.scalar_from_u64(1),
            &[c.scalar_from_u64(1), c.scalar_from_u64(2)],
            &c.scalar_zero(),
        )
        .unwrap();
        assert_eq!(w, c.scalar_from_u64(2));
    }

    #[test]
    fn lagrange_rejects_bad_sets() {
        let c = ctx(101);
        let dup = [c.scalar_from_u64(1), c.scalar_from_u64(1)];
        assert_eq!(
            lagrange_coeff(&c.scalar_from_u64(1), &dup, &c.scalar_zero()).unwrap_err(),
            AccessError::DuplicatePoints
        );
        let set = [c.scalar_from_u64(1), c.scalar_from_u64(2)];
        assert_eq!(
            lagrange_coeff(&c.scalar_from_u64(3), &set, &c.scalar_zero()).unwrap_err(),
            AccessError::PointNotInSet
        );
    }

    #[test]
    fn lagrange_weighted_sum_recovers_constant_term() {
        // sum over S of Δ_i(0)·q(x_i) = q(0) for random polynomials
        let c = ctx(1009);
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for size in 1..=5usize {
            let coeffs: Vec<Scalar> = (0..size).map(|_| c.rand_scalar(&mut rng)).collect();
            let xs: Vec<Scalar> = (1..=size as u64).map(|i| c.scalar_from_u64(i)).collect();
            let mut sum = c.scalar_zero();
            for x_i in &xs {
                let w = lagrange_coeff(x_i, &xs, &c.scalar_zero()).unwrap();
                sum = &sum + &(&eval_poly(&coeffs, x_i) * &w);
            }
            assert_eq!(sum, coeffs[0]);
        }
    }

    #[test]
    fn interpolate_examples() {
        let c = ctx(101);
        assert_eq!(
            interpolate_at_zero(&[(c.scalar_from_u64(1), c.scalar_from_u64(9))]).unwrap(),
            c.scalar_from_u64(9)
        );
        // line through (1,3),(2,5) is y = 2x + 1
        assert_eq!(
            interpolate_at_zero(&[
                (c.scalar_from_u64(1), c.scalar_from_u64(3)),
                (c.scalar_from_u64(2), c.scalar_from_u64(5)),
            ])
            .unwrap(),
            c.scalar_one()
        );
        assert_eq!(interpolate_at_zero(&[]).unwrap_err(), AccessError::NoPoints);
    }

    #[test]
    fn exhaustive_small_trees_reconstruct_exactly() {
        // Every tree shape up to 5 leaves and depth 2, every attribute
        // subset: plan exists iff satisfied, and the plan's interpolation
        // over fresh shares reproduces the secret.
        let c = ctx(1009);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let trees = enumerate_trees(1, 5, 2);
        assert!(trees.len() > 100, "enumerator too small: {}", trees.len());
        for tree in &trees {
            let leaves = tree.leaf_attributes();
            let universe: Vec<AttributeId> = leaves.iter().copied().collect();
            let secret = c.rand_scalar(&mut rng);
            let shares = share_secret(&c, tree, &secret, &mut rng);
            assert_eq!(shares.len(), universe.len());
            for mask in 0u32..(1 << universe.len()) {
                let subset: BTreeSet<AttributeId> = universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, a)| *a)
                    .collect();
                match tree.select_satisfying(&subset) {
                    Ok(plan) => {
                        assert!(tree.satisfies(&subset));
                        for (_, a) in plan.leaves() {
                            assert!(subset.contains(a));
                        }
                        let got = reconstruct_from_plan(&c, tree, &plan, &shares).unwrap();
                        assert_eq!(got, secret);
                    }
                    Err(AccessError::Unsatisfied) => assert!(!tree.satisfies(&subset)),
                    Err(other) => panic!("unexpected error {other:?}"),
                }
            }
        }
    }

    #[test]
    fn sharing_polynomials_have_bounded_degree() {
        // Fit the children evaluations of each gate: the first `threshold`
        // points must predict the rest (degree <= threshold-1). Checked via
        // a wide gate where over-degree polynomials would be caught.
        let c = ctx(1009);
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let t = AccessTree::threshold(
            2,
            (1..=5).map(|j| AccessTree::leaf(attr(j))).collect(),
        )
        .unwrap();
        let secret = c.scalar_from_u64(321);
        for _ in 0..20 {
            let shares = share_secret(&c, &t, &secret, &mut rng);
            // Interpolate from leaves {1,2}; every other leaf must lie on the line.
            let base = [
                (c.scalar_from_u64(1), shares[&attr(1)]),
                (c.scalar_from_u64(2), shares[&attr(2)]),
            ];
            assert_eq!(interpolate_at_zero(&base).unwrap(), secret);
            for j in 3..=5u32 {
                assert_eq!(eval_at(&base, &c.scalar_from_u64(j as u64)), shares[&attr(j)]);
            }
        }
    }

    #[test]
    fn sharing_degree_is_usually_exact() {
        // With uniform coefficients the top coefficient vanishes with
        // probability 1/p; at p = 1009 a run of 100 all-degenerate sharings
        // is effectively impossible.
        let c = ctx(1009);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let t = AccessTree::all_of((1..=3).map(|j| AccessTree::leaf(attr(j))).collect()).unwrap();
        let secret = c.scalar_from_u64(5);
        let mut exact = 0;
        for _ in 0..100 {
            let shares = share_secret(&c, &t, &secret, &mut rng);
            // Degree-2 check: second finite difference nonzero.
            let y1 = shares[&attr(1)];
            let y2 = shares[&attr(2)];
            let y3 = shares[&attr(3)];
            let second_diff = &(&(&y3 - &y2) - &y2) + &y1;
            if !second_diff.is_zero() {
                exact += 1;
            }
        }
        assert!(exact >= 90, "only {exact}/100 sharings had exact degree");
    }

    #[test]
    fn preorder_round_trip() {
        let inner = AccessTree::any_of(vec![AccessTree::leaf(attr(1)), AccessTree::leaf(attr(2))])
            .unwrap();
        let t = AccessTree::threshold(2, vec![inner, AccessTree::leaf(attr(3)), AccessTree::leaf(attr(4))])
            .unwrap();
        let records = t.to_preorder();
        let back = AccessTree::from_preorder(&records).unwrap();
        assert_eq!(t, back);
        assert_eq!(back.to_preorder(), records);

        assert!(AccessTree::from_preorder(&records[..2]).is_err());
        let mut extra = records.clone();
        extra.push(PreorderRecord {
            threshold: 1,
            child_count: 0,
            attribute: Some(attr(9)),
        });
        assert_eq!(
            AccessTree::from_preorder(&extra).unwrap_err(),
            AccessError::MalformedPreorder
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_tree(depth: u32) -> impl Strategy<Value = AccessTree> {
            // Attributes are path-encoded (base-4 digits of the route from
            // the root), so distinct leaves never collide.
            fn build(depth: u32, path: u32) -> BoxedStrategy<AccessTree> {
                if depth == 0 {
                    return Just(AccessTree::leaf(AttributeId::new(1, path))).boxed();
                }
                prop_oneof![
                    2 => Just(AccessTree::leaf(AttributeId::new(1, path))),
                    3 => (2usize..4)
                        .prop_flat_map(move |n| {
                            let children: Vec<BoxedStrategy<AccessTree>> = (0..n)
                                .map(|i| build(depth - 1, path * 4 + i as u32 + 1))
                                .collect();
                            (children, 1..=n).prop_map(|(c, k)| {
                                AccessTree::threshold(k as u32, c).unwrap()
                            })
                        }),
                ]
                .boxed()
            }
            build(depth, 1)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn satisfaction_is_monotone(tree in arb_tree(2), seed in any::<u64>()) {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let universe: Vec<AttributeId> = tree.leaf_attributes().into_iter().collect();
                let mut small = BTreeSet::new();
                let mut big = BTreeSet::new();
                for a in &universe {
                    let r = rng.next_u32();
                    if r % 3 == 0 {
                        small.insert(*a);
                    }
                    if r % 3 != 2 {
                        big.insert(*a);
                    }
                }
                big.extend(small.iter().copied());
                if tree.satisfies(&small) {
                    prop_assert!(tree.satisfies(&big));
                }
            }

            #[test]
            fn share_then_reconstruct(tree in arb_tree(2), seed in any::<u64>()) {
                let c = ctx(1009);
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let secret = c.rand_scalar(&mut rng);
                let shares = share_secret(&c, &tree, &secret, &mut rng);
                let all = tree.leaf_attributes();
                let plan = tree.select_satisfying(&all).unwrap();
                prop_assert_eq!(reconstruct_from_plan(&c, &tree, &plan, &shares).unwrap(), secret);
            }
        }
    }
}
