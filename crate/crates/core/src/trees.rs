//! Binary rooted trees and the tree expansion of `Q_[m]`.
//!
//! Trees are kept up to root-preserving isomorphism through a canonical
//! parenthesized encoding: a leaf is `()`, an inner vertex is `(` followed
//! by the encodings of its children in sorted order and `)`. Two trees are
//! isomorphic exactly when their encodings agree.
//!
//! With `Q_◦ = P` and `Q_{B+(T1,T2)} = ⟨∇Q_T1, ∇Q_T2⟩`,
//!
//! ```text
//! Q_[m] = Σ_{l(T) = m} Q_T / β(T),    β(T) = α(T) · T̂!
//! ```
//!
//! where `α` counts automorphisms, `T̂` deletes the leaves and `!` is the
//! tree factorial `T! = |T| · Π T_i!` over the root's subtrees.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;

use crate::coefficients::GaussianRational;
use crate::error::{Error, Result};
use crate::series::{FormalMap, Order, TruncatedSeries};

#[derive(Debug)]
enum Shape {
    Leaf,
    Node(BinaryTree, BinaryTree),
}

#[derive(Debug)]
struct BinaryNode {
    shape: Shape,
    leaves: usize,
    encoding: String,
}

/// A binary rooted tree in canonical form. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct BinaryTree(Arc<BinaryNode>);

impl BinaryTree {
    pub fn leaf() -> Self {
        Self(Arc::new(BinaryNode {
            shape: Shape::Leaf,
            leaves: 1,
            encoding: "()".to_owned(),
        }))
    }

    /// `B+(a, b)`: a new root with children `a` and `b`.
    pub fn join(a: &BinaryTree, b: &BinaryTree) -> Self {
        let (l, r) = if a <= b { (a, b) } else { (b, a) };
        let encoding = format!("({}{})", l.encoding(), r.encoding());
        Self(Arc::new(BinaryNode {
            leaves: l.leaves() + r.leaves(),
            shape: Shape::Node(l.clone(), r.clone()),
            encoding,
        }))
    }

    /// `C`-style comb with `m` leaves: `B+(◦, B+(◦, …))`.
    pub fn comb(m: usize) -> Self {
        assert!(m >= 1, "a tree has at least one leaf");
        let mut t = Self::leaf();
        for _ in 1..m {
            t = Self::join(&Self::leaf(), &t);
        }
        t
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.0.shape, Shape::Leaf)
    }

    /// The two subtrees of the root, in canonical order.
    pub fn children(&self) -> Option<(&BinaryTree, &BinaryTree)> {
        match &self.0.shape {
            Shape::Leaf => None,
            Shape::Node(l, r) => Some((l, r)),
        }
    }

    /// `l(T)`.
    pub fn leaves(&self) -> usize {
        self.0.leaves
    }

    /// `|T| = 2·l(T) - 1`.
    pub fn vertices(&self) -> usize {
        2 * self.0.leaves - 1
    }

    pub fn encoding(&self) -> &str {
        &self.0.encoding
    }

    /// `α(T)`, the order of the automorphism group.
    pub fn automorphism_count(&self) -> BigUint {
        match self.children() {
            None => BigUint::one(),
            Some((l, r)) => {
                let base = l.automorphism_count() * r.automorphism_count();
                if l == r {
                    base * 2u32
                } else {
                    base
                }
            }
        }
    }

    /// `T!` with `T` viewed as a general rooted tree.
    pub fn factorial(&self) -> BigUint {
        match self.children() {
            None => BigUint::one(),
            Some((l, r)) => BigUint::from(self.vertices()) * l.factorial() * r.factorial(),
        }
    }

    /// `T̂`, or `None` for the empty tree obtained from a single leaf.
    pub fn prune_leaves(&self) -> Option<GeneralTree> {
        let (l, r) = self.children()?;
        Some(GeneralTree::new(
            [l, r].into_iter().filter_map(BinaryTree::prune_leaves).collect(),
        ))
    }

    /// `T̂!`, with `∅! = 1`.
    pub fn pruned_factorial(&self) -> BigUint {
        self.prune_leaves().map_or_else(BigUint::one, |t| t.factorial())
    }

    /// `β(T) = α(T) · T̂!`.
    pub fn beta(&self) -> BigUint {
        self.automorphism_count() * self.pruned_factorial()
    }

    /// `β(T)` through the recursion on the root's subtrees:
    /// `β(B+(T1,T2)) = c·(l(T)-1)·β(T1)·β(T2)` with `c = 2` when `T1 ≅ T2`.
    pub fn beta_recursive(&self) -> BigUint {
        match self.children() {
            None => BigUint::one(),
            Some((l, r)) => {
                let c: u32 = if l == r { 2 } else { 1 };
                BigUint::from(c) * BigUint::from(self.leaves() - 1) * l.beta_recursive() * r.beta_recursive()
            }
        }
    }
}

impl PartialEq for BinaryTree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.encoding() == other.encoding()
    }
}

impl Eq for BinaryTree {}

impl Hash for BinaryTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.encoding().hash(state);
    }
}

impl Ord for BinaryTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.encoding().cmp(other.encoding())
    }
}

impl PartialOrd for BinaryTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encoding())
    }
}

impl TryFrom<&GeneralTree> for BinaryTree {
    type Error = Error;

    fn try_from(t: &GeneralTree) -> Result<Self> {
        match t.children() {
            [] => Ok(BinaryTree::leaf()),
            [a, b] => Ok(BinaryTree::join(&a.try_into()?, &b.try_into()?)),
            other => Err(Error::MalformedTree(format!(
                "vertex with {} children in {}",
                other.len(),
                t.encoding()
            ))),
        }
    }
}

/// Parses any parenthesized ordered tree and returns its canonical form.
impl FromStr for BinaryTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BinaryTree::try_from(&s.parse::<GeneralTree>()?)
    }
}

/// A rooted tree with arbitrary child counts, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralTree {
    children: Vec<GeneralTree>,
    vertices: usize,
    encoding: String,
}

impl GeneralTree {
    pub fn new(mut children: Vec<GeneralTree>) -> Self {
        children.sort_by(|a, b| a.encoding.cmp(&b.encoding));
        let mut encoding = String::from("(");
        for c in &children {
            encoding.push_str(&c.encoding);
        }
        encoding.push(')');
        Self {
            vertices: 1 + children.iter().map(|c| c.vertices).sum::<usize>(),
            children,
            encoding,
        }
    }

    pub fn leaf() -> Self {
        Self::new(Vec::new())
    }

    /// The path `C_m` with `m` vertices, `m >= 1`.
    pub fn chain(m: usize) -> Self {
        assert!(m >= 1, "a chain has at least one vertex");
        let mut t = Self::leaf();
        for _ in 1..m {
            t = Self::new(vec![t]);
        }
        t
    }

    pub fn children(&self) -> &[GeneralTree] {
        &self.children
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn encoding(&self) -> &str {
        &self.encoding
    }

    /// `T! = |T| · Π T_i!`.
    pub fn factorial(&self) -> BigUint {
        self.children
            .iter()
            .fold(BigUint::from(self.vertices), |acc, c| acc * c.factorial())
    }
}

impl fmt::Display for GeneralTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding)
    }
}

impl FromStr for GeneralTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = |why: &str| Error::MalformedTree(format!("{why} in {s:?}"));
        let mut stack: Vec<Vec<GeneralTree>> = Vec::new();
        let mut root = None;
        for ch in s.chars().filter(|c| !c.is_whitespace()) {
            if root.is_some() {
                return Err(malformed("trailing input"));
            }
            match ch {
                '(' => stack.push(Vec::new()),
                ')' => {
                    let children = stack.pop().ok_or_else(|| malformed("unbalanced ')'"))?;
                    let t = GeneralTree::new(children);
                    match stack.last_mut() {
                        Some(parent) => parent.push(t),
                        None => root = Some(t),
                    }
                }
                _ => return Err(malformed("unexpected character")),
            }
        }
        if !stack.is_empty() {
            return Err(malformed("unbalanced '('"));
        }
        root.ok_or_else(|| malformed("empty input"))
    }
}

/// All binary trees with `1..=m` leaves, grouped by leaf count; entry
/// `k - 1` holds the trees with `k` leaves sorted by encoding.
pub fn enumerate_up_to(m: usize) -> Vec<Vec<BinaryTree>> {
    let mut levels: Vec<Vec<BinaryTree>> = Vec::with_capacity(m);
    for k in 1..=m {
        if k == 1 {
            levels.push(vec![BinaryTree::leaf()]);
            continue;
        }
        let mut level = Vec::new();
        for a in 1..=k / 2 {
            let (left, right) = (&levels[a - 1], &levels[k - a - 1]);
            for (i, x) in left.iter().enumerate() {
                let start = if a == k - a { i } else { 0 };
                for y in &right[start..] {
                    level.push(BinaryTree::join(x, y));
                }
            }
        }
        level.sort();
        levels.push(level);
    }
    levels
}

/// The binary trees with exactly `m >= 1` leaves, sorted by encoding.
pub fn enumerate(m: usize) -> Vec<BinaryTree> {
    assert!(m >= 1, "a tree has at least one leaf");
    enumerate_up_to(m).pop().unwrap_or_default()
}

/// `Q_T` and `∇Q_T` for one potential, memoized by canonical encoding.
pub struct TreePotentials {
    p: TruncatedSeries,
    memo: HashMap<String, (TruncatedSeries, FormalMap)>,
}

impl TreePotentials {
    pub fn new(p: &TruncatedSeries) -> Result<Self> {
        match p.order() {
            Order::Finite(o) if o < 2 => {
                return Err(Error::OrderTooLow { required: 2, found: o })
            }
            _ => {}
        }
        let grad = p.gradient()?;
        let mut memo = HashMap::new();
        memo.insert(BinaryTree::leaf().encoding().to_owned(), (p.clone(), grad));
        Ok(Self { p: p.clone(), memo })
    }

    pub fn potential(&self) -> &TruncatedSeries {
        &self.p
    }

    fn entry(&mut self, t: &BinaryTree) -> Result<&(TruncatedSeries, FormalMap)> {
        if !self.memo.contains_key(t.encoding()) {
            let (l, r) = t.children().expect("leaf is seeded");
            let (l, r) = (l.clone(), r.clone());
            self.entry(&l)?;
            self.entry(&r)?;
            let value = self.compute(&self.memo[l.encoding()].1, &self.memo[r.encoding()].1)?;
            self.memo.insert(t.encoding().to_owned(), value);
        }
        Ok(&self.memo[t.encoding()])
    }

    fn compute(&self, gl: &FormalMap, gr: &FormalMap) -> Result<(TruncatedSeries, FormalMap)> {
        let q = gl.inner_product(gr)?.truncate_to(self.p.trunc());
        let g = q.gradient()?;
        Ok((q, g))
    }

    /// `Q_T`.
    pub fn q_of_tree(&mut self, t: &BinaryTree) -> Result<TruncatedSeries> {
        Ok(self.entry(t)?.0.clone())
    }

    /// Fills the memo for every tree in `level`, whose subtrees must already
    /// be present. Trees in one level are independent and run in parallel.
    fn fill_level(&mut self, level: &[BinaryTree]) -> Result<()> {
        let values = level
            .par_iter()
            .map(|t| {
                let (l, r) = t.children().expect("level above leaves");
                self.compute(&self.memo[l.encoding()].1, &self.memo[r.encoding()].1)
            })
            .collect::<Result<Vec<_>>>()?;
        for (t, v) in level.iter().zip(values) {
            self.memo.insert(t.encoding().to_owned(), v);
        }
        Ok(())
    }

    /// `Σ_{l(T) = k} Q_T / β(T)` for `k = 1..=m`.
    pub fn expansion_up_to(&mut self, m: usize) -> Result<Vec<TruncatedSeries>> {
        let levels = enumerate_up_to(m);
        let mut out = Vec::with_capacity(m);
        for level in &levels {
            if level.iter().any(|t| !self.memo.contains_key(t.encoding())) {
                self.fill_level(level)?;
            }
            let mut acc = TruncatedSeries::zero(self.p.nvars(), self.p.trunc());
            for t in level {
                let weight = GaussianRational::from(BigInt::from(t.beta()))
                    .inverse()
                    .expect("beta is positive");
                acc = acc.add(&self.memo[t.encoding()].0.scale(&weight))?;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// `Q_T` for a single tree and potential.
pub fn q_of_tree(t: &BinaryTree, p: &TruncatedSeries) -> Result<TruncatedSeries> {
    TreePotentials::new(p)?.q_of_tree(t)
}

/// `Σ_{l(T) = m} Q_T / β(T)`.
pub fn tree_expansion_q(p: &TruncatedSeries, m: usize) -> Result<TruncatedSeries> {
    assert!(m >= 1, "a tree has at least one leaf");
    Ok(TreePotentials::new(p)?
        .expansion_up_to(m)?
        .pop()
        .expect("m >= 1"))
}
