//! Mutation trees and their quotient by ℓ-equivalence.
//!
//! Two seeds on the same level are ℓ-equivalent when a cyclic rotation of
//! one cluster gives the other. In [`EquivalenceMode::Literal`] the exchange
//! matrices must also be equal as given; in [`EquivalenceMode::Permuted`] the
//! matrix is conjugated by the same rotation. Both modes reproduce the A(1,1)
//! and Markov diagrams; `Literal` is the default.

mod diagram;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::cluster::{ClusterError, Seed};

pub use diagram::{BratteliDiagram, ExportFormat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BratteliError {
    #[error("BudgetExceeded: a depth-{depth} tree has {nodes} nodes, budget is {budget}")]
    BudgetExceeded { depth: usize, nodes: u128, budget: usize },
    #[error("RankMismatch: seeds of rank {left} and {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("InconsistentQuotient: at level {level}, nodes {first} and {second} are equivalent but their children fall into different classes")]
    InconsistentQuotient { level: usize, first: usize, second: usize },
    #[error("UnknownFormat: '{0}' (expected dot or json)")]
    UnknownFormat(String),
    #[error("InvalidDiagram: {0}")]
    InvalidDiagram(String),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EquivalenceMode {
    #[default]
    Literal,
    Permuted,
}

impl FromStr for EquivalenceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "literal" => Ok(Self::Literal),
            "permuted" => Ok(Self::Permuted),
            other => Err(format!("unknown equivalence mode '{other}' (expected literal or permuted)")),
        }
    }
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Literal => "literal",
            Self::Permuted => "permuted",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub seed: Seed,
    pub level: usize,
    pub parent: Option<usize>,
    /// Child ids, indexed by mutation direction.
    pub children: Vec<usize>,
}

/// The complete `n`-ary tree of seeds; node ids are assigned in BFS order
/// with children in direction order.
#[derive(Clone, Debug)]
pub struct MutationTree {
    nodes: Vec<TreeNode>,
    level_starts: Vec<usize>,
}

pub const DEFAULT_TREE_BUDGET: usize = 2_000_000;

pub fn tree_size(rank: usize, depth: usize) -> u128 {
    (0..=depth as u32).map(|l| (rank as u128).saturating_pow(l)).sum()
}

/// Builds the mutation tree to `depth`. Each level is mutated in parallel;
/// ids do not depend on the thread count.
pub fn build_mutation_tree(seed: &Seed, depth: usize, budget: usize) -> Result<MutationTree, BratteliError> {
    let n = seed.rank();
    let nodes_needed = tree_size(n, depth);
    if nodes_needed > budget as u128 {
        return Err(BratteliError::BudgetExceeded {
            depth,
            nodes: nodes_needed,
            budget,
        });
    }
    let mut nodes = vec![TreeNode {
        seed: seed.clone(),
        level: 0,
        parent: None,
        children: Vec::new(),
    }];
    let mut level_starts = vec![0];
    for level in 1..=depth {
        let start = level_starts[level - 1];
        let end = nodes.len();
        let children: Vec<Vec<Seed>> = nodes[start..end]
            .par_iter()
            .map(|node| (0..n).map(|k| node.seed.mutate(k)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        level_starts.push(end);
        for (offset, kids) in children.into_iter().enumerate() {
            let parent = start + offset;
            for s in kids {
                let id = nodes.len();
                nodes.push(TreeNode {
                    seed: s,
                    level,
                    parent: Some(parent),
                    children: Vec::new(),
                });
                nodes[parent].children.push(id);
            }
        }
    }
    Ok(MutationTree { nodes, level_starts })
}

impl MutationTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.level_starts.len() - 1
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn level(&self, m: usize) -> std::ops::Range<usize> {
        let start = self.level_starts[m];
        let end = self.level_starts.get(m + 1).copied().unwrap_or(self.nodes.len());
        start..end
    }
}

/// Whether some rotation `σ` carries `a.cluster` onto `b.cluster` (entry `i`
/// of `b` is entry `i + σ` of `a`) with matching matrices for `mode`.
pub fn seeds_l_equivalent(a: &Seed, b: &Seed, mode: EquivalenceMode) -> Result<bool, BratteliError> {
    let n = a.rank();
    if n != b.rank() {
        return Err(BratteliError::RankMismatch { left: n, right: b.rank() });
    }
    Ok((0..n).any(|r| {
        let rotated = a.rotate(r);
        rotated.cluster() == b.cluster()
            && match mode {
                EquivalenceMode::Literal => a.matrix() == b.matrix(),
                EquivalenceMode::Permuted => rotated.matrix() == b.matrix(),
            }
    }))
}

type ClassKey = (Vec<String>, Vec<Vec<i64>>);

/// Key that is equal for two seeds exactly when they are ℓ-equivalent:
/// the lexicographically least rotation of the serialized cluster.
fn class_key(seed: &Seed, mode: EquivalenceMode) -> ClassKey {
    let n = seed.rank();
    let strings = seed.cluster_strings();
    let rotations = (0..n).map(|r| (0..n).map(|i| strings[(i + r) % n].clone()).collect::<Vec<_>>());
    match mode {
        EquivalenceMode::Literal => (rotations.min().expect("rank >= 1"), seed.matrix().rows()),
        EquivalenceMode::Permuted => rotations
            .enumerate()
            .map(|(r, c)| (c, seed.matrix().rotate(r).rows()))
            .min()
            .expect("rank >= 1"),
    }
}

/// A quotient diagram together with the tree nodes in each vertex class.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub diagram: BratteliDiagram,
    /// `classes[m][i]` lists the tree nodes (in BFS order) of vertex `(m, i)`.
    pub classes: Vec<Vec<Vec<usize>>>,
    pub mode: EquivalenceMode,
}

/// Quotients the tree level by level.
///
/// The edge multiplicity `U -> V` is the number of children of the first
/// member of `U` that land in `V`; every other member of `U` is checked to
/// give the same counts. Vertices on each level are ordered by the mean
/// position of their parents (weighted by multiplicity), ties broken by
/// first appearance in the tree.
pub fn quotient_to_bratteli(tree: &MutationTree, mode: EquivalenceMode) -> Result<Quotient, BratteliError> {
    let depth = tree.depth();
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<Vec<usize>>> = Vec::with_capacity(depth + 1);
    let mut edges: Vec<BTreeMap<(usize, usize), u64>> = Vec::with_capacity(depth);

    for m in 0..=depth {
        // group by key, in order of first appearance
        let mut by_key: HashMap<ClassKey, usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for id in tree.level(m) {
            let key = class_key(&tree.node(id).seed, mode);
            let g = *by_key.entry(key).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(id);
        }
        for members in &groups {
            let rep = &tree.node(members[0]).seed;
            for &other in &members[1..] {
                debug_assert!(seeds_l_equivalent(rep, &tree.node(other).seed, mode).unwrap_or(false));
            }
        }

        if m == 0 {
            for (g, members) in groups.iter().enumerate() {
                for &id in members {
                    class_of.insert(id, g);
                }
            }
            classes.push(groups);
            continue;
        }

        let group_of: HashMap<usize, usize> = groups
            .iter()
            .enumerate()
            .flat_map(|(g, ms)| ms.iter().map(move |&id| (id, g)))
            .collect();

        // child-group counts per parent class, audited across members
        let parents = &classes[m - 1];
        let mut counts: Vec<BTreeMap<usize, u64>> = Vec::with_capacity(parents.len());
        for members in parents {
            let count_for = |id: usize| {
                let mut c = BTreeMap::new();
                for &child in &tree.node(id).children {
                    *c.entry(group_of[&child]).or_insert(0u64) += 1;
                }
                c
            };
            let first = count_for(members[0]);
            for &other in &members[1..] {
                if count_for(other) != first {
                    return Err(BratteliError::InconsistentQuotient {
                        level: m - 1,
                        first: members[0],
                        second: other,
                    });
                }
            }
            counts.push(first);
        }

        // order groups by the barycenter of their parents
        let mut weight: Vec<(i64, i64)> = vec![(0, 0); groups.len()];
        for (u, c) in counts.iter().enumerate() {
            for (&g, &mult) in c {
                weight[g].0 += u as i64 * mult as i64;
                weight[g].1 += mult as i64;
            }
        }
        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by_key(|&g| (Ratio::new(weight[g].0, weight[g].1.max(1)), g));
        let mut position = vec![0; groups.len()];
        for (pos, &g) in order.iter().enumerate() {
            position[g] = pos;
        }

        let mut group_edges = BTreeMap::new();
        for (u, c) in counts.iter().enumerate() {
            for (&g, &mult) in c {
                group_edges.insert((u, position[g]), mult);
            }
        }
        edges.push(group_edges);
        let ordered: Vec<Vec<usize>> = order.iter().map(|&g| groups[g].clone()).collect();
        for (pos, members) in ordered.iter().enumerate() {
            for &id in members {
                class_of.insert(id, pos);
            }
        }
        classes.push(ordered);
    }

    let levels = classes.iter().map(Vec::len).collect();
    let diagram = BratteliDiagram::new(levels, edges)?;
    Ok(Quotient { diagram, classes, mode })
}

/// Tree plus quotient in one call.
pub fn bratteli_diagram(seed: &Seed, depth: usize, mode: EquivalenceMode) -> Result<Quotient, BratteliError> {
    let tree = build_mutation_tree(seed, depth, DEFAULT_TREE_BUDGET)?;
    quotient_to_bratteli(&tree, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{ClusterVariable, ExchangeMatrix};

    fn lp(s: &str, n: usize) -> ClusterVariable {
        ClusterVariable::parse(s, n).unwrap()
    }

    #[test]
    fn tree_sizes() {
        assert_eq!(build_mutation_tree(&Seed::annulus(), 2, 100).unwrap().len(), 7);
        assert_eq!(build_mutation_tree(&Seed::markov(), 2, 100).unwrap().len(), 13);
        assert_eq!(build_mutation_tree(&Seed::markov(), 0, 100).unwrap().len(), 1);
        assert!(matches!(
            build_mutation_tree(&Seed::markov(), 10, 1000),
            Err(BratteliError::BudgetExceeded { .. })
        ));
        let t = build_mutation_tree(&Seed::annulus(), 3, 100).unwrap();
        assert_eq!(t.level(3), 7..15);
        assert_eq!(t.node(1).children, vec![3, 4]);
    }

    #[test]
    fn l_equivalence_examples() {
        let b = ExchangeMatrix::rank2(2);
        let s = |c: &[&str], b: &ExchangeMatrix| {
            Seed::new(c.iter().map(|x| lp(x, c.len())).collect(), b.clone()).unwrap()
        };
        let lit = EquivalenceMode::Literal;
        assert!(seeds_l_equivalent(&s(&["x1", "x2"], &b), &s(&["x2", "x1"], &b), lit).unwrap());
        let m = Seed::markov().matrix().clone();
        assert!(seeds_l_equivalent(&s(&["x1", "x2", "x3"], &m), &s(&["x2", "x3", "x1"], &m), lit).unwrap());
        let minus = ExchangeMatrix::rank2(-2);
        assert!(!seeds_l_equivalent(&s(&["x1", "x2"], &b), &s(&["x2", "x1"], &minus), lit).unwrap());
        // conjugating [[0,2],[-2,0]] by the swap gives [[0,-2],[2,0]]
        assert!(seeds_l_equivalent(&s(&["x1", "x2"], &b), &s(&["x2", "x1"], &minus), EquivalenceMode::Permuted).unwrap());
        assert!(seeds_l_equivalent(&Seed::annulus(), &Seed::markov(), lit).is_err());
    }

    #[test]
    fn class_key_agrees_with_equivalence() {
        let tree = build_mutation_tree(&Seed::markov(), 3, 1000).unwrap();
        for mode in [EquivalenceMode::Literal, EquivalenceMode::Permuted] {
            for m in 0..=3 {
                for a in tree.level(m) {
                    for b in tree.level(m) {
                        let (sa, sb) = (&tree.node(a).seed, &tree.node(b).seed);
                        assert_eq!(
                            class_key(sa, mode) == class_key(sb, mode),
                            seeds_l_equivalent(sa, sb, mode).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn annulus_is_pascal_in_both_modes() {
        for mode in [EquivalenceMode::Literal, EquivalenceMode::Permuted] {
            let q = bratteli_diagram(&Seed::annulus(), 5, mode).unwrap();
            assert_eq!(q.diagram.levels(), &[1, 2, 3, 4, 5, 6]);
            assert_eq!(q.diagram, BratteliDiagram::pascal(5));
        }
    }

    #[test]
    fn markov_levels() {
        for mode in [EquivalenceMode::Literal, EquivalenceMode::Permuted] {
            let q = bratteli_diagram(&Seed::markov(), 2, mode).unwrap();
            assert_eq!(q.diagram.levels(), &[1, 3, 7], "{mode}");
        }
    }

    #[test]
    fn rank_one_is_a_path() {
        let q = bratteli_diagram(&Seed::initial(ExchangeMatrix::zero(1)), 4, EquivalenceMode::Literal).unwrap();
        assert_eq!(q.diagram.levels(), &[1, 1, 1, 1, 1]);
        for a in q.diagram.incidence_matrices() {
            assert_eq!(a.to_rows(), vec![vec![1]]);
        }
    }

    #[test]
    fn quotient_is_a_graph_morphism() {
        let tree = build_mutation_tree(&Seed::markov(), 3, 1000).unwrap();
        let q = quotient_to_bratteli(&tree, EquivalenceMode::Literal).unwrap();
        for m in 0..3 {
            let tree_edges: usize = tree.level(m).map(|id| tree.node(id).children.len()).sum();
            let weighted: u64 = q
                .diagram
                .edges(m)
                .map(|((u, _), mult)| q.classes[m][u].len() as u64 * mult)
                .sum();
            assert_eq!(tree_edges as u64, weighted);
        }
    }

    #[test]
    fn exports_are_deterministic() {
        let a = bratteli_diagram(&Seed::annulus(), 2, EquivalenceMode::Literal).unwrap();
        let b = bratteli_diagram(&Seed::annulus(), 2, EquivalenceMode::Literal).unwrap();
        assert_eq!(a.diagram.to_json(), b.diagram.to_json());
        assert!(a.diagram.to_json().contains(r#""levels":[1,2,3]"#));
        assert_eq!(a.diagram.to_dot(), b.diagram.to_dot());
    }
}
