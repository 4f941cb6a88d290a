use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::BigRational;
use rayon::prelude::*;

use super::{numeric_mutate, ClusterError, ClusterVariable, ExchangeMatrix, Seed};

/// Outcome of [`check_positivity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    Holds,
    Violated(ClusterVariable),
}

impl Positivity {
    pub fn holds(&self) -> bool {
        matches!(self, Positivity::Holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteType {
    Finite(usize),
    ExceededBudget,
}

/// All cluster variables in seeds reachable by at most `depth` mutations.
///
/// Seeds are deduplicated by exact equality. Each level is expanded in
/// parallel and merged in (parent, direction) order, so the result does not
/// depend on the thread count. `node_cap` bounds the number of distinct seeds.
pub fn enumerate_cluster_variables(
    seed: &Seed,
    depth: usize,
    node_cap: usize,
) -> Result<BTreeSet<ClusterVariable>, ClusterError> {
    let n = seed.rank();
    let mut seen: HashSet<Seed> = HashSet::new();
    let mut vars: BTreeSet<ClusterVariable> = seed.cluster().iter().cloned().collect();
    seen.insert(seed.clone());
    let mut frontier = vec![seed.clone()];
    for _ in 0..depth {
        let children: Vec<Vec<Seed>> = frontier
            .par_iter()
            .map(|s| (0..n).map(|k| s.mutate(k)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let mut next = Vec::new();
        for child in children.into_iter().flatten() {
            if seen.contains(&child) {
                continue;
            }
            vars.extend(child.cluster().iter().cloned());
            seen.insert(child.clone());
            if seen.len() > node_cap {
                return Err(ClusterError::BudgetExceeded { cap: node_cap });
            }
            next.push(child);
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(vars)
}

/// Checks that every variable has nonnegative coefficients; returns the first
/// offender (in iteration order) otherwise.
pub fn check_positivity<'a, I>(vars: I) -> Positivity
where
    I: IntoIterator<Item = &'a ClusterVariable>,
{
    vars.into_iter()
        .find(|v| !v.is_nonneg())
        .map_or(Positivity::Holds, |v| Positivity::Violated(v.clone()))
}

struct Node {
    parent: Option<(usize, usize)>,
    matrix: ExchangeMatrix,
    values: Vec<BigRational>,
}

/// Seeds are tracked through their value at a fixed generic positive point;
/// the exchange relation is subtraction-free, so evaluation never hits zero.
/// Symbolic seeds are only rebuilt when two fingerprints collide.
struct Explorer {
    root: Seed,
    nodes: Vec<Node>,
    symbolic: HashMap<usize, Seed>,
}

impl Explorer {
    fn symbolic(&mut self, index: usize) -> Result<Seed, ClusterError> {
        let mut path = Vec::new();
        let mut cur = index;
        let mut base = loop {
            if let Some(s) = self.symbolic.get(&cur) {
                break s.clone();
            }
            match self.nodes[cur].parent {
                Some((p, k)) => {
                    path.push((cur, k));
                    cur = p;
                }
                None => break self.root.clone(),
            }
        };
        for &(node, k) in path.iter().rev() {
            base = base.mutate(k)?;
            self.symbolic.insert(node, base.clone());
        }
        Ok(base)
    }
}

fn fingerprint_point(n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|i| BigRational::new((2 * i as i64 + 3).into(), (i as i64 + 2).into()))
        .collect()
}

/// Breadth-first search over seeds reachable from `seed`.
///
/// Returns `Finite(m)` with the number of distinct cluster variables when the
/// search closes up, or `ExceededBudget` once more than `budget` distinct
/// seeds have been found. Mutating back along the edge a seed was reached by
/// is skipped, since mutation is an involution.
pub fn is_finite_type(seed: &Seed, budget: usize) -> Result<FiniteType, ClusterError> {
    let n = seed.rank();
    let root_values = seed.evaluate(&fingerprint_point(n))?;
    let mut ex = Explorer {
        root: seed.clone(),
        nodes: vec![Node {
            parent: None,
            matrix: seed.matrix().clone(),
            values: root_values.clone(),
        }],
        symbolic: HashMap::new(),
    };
    ex.symbolic.insert(0, seed.clone());
    let mut index: HashMap<(Vec<BigRational>, ExchangeMatrix), Vec<usize>> = HashMap::new();
    index.insert((root_values, seed.matrix().clone()), vec![0]);

    let mut head = 0;
    while head < ex.nodes.len() {
        let i = head;
        head += 1;
        let came_by = ex.nodes[i].parent.map(|(_, k)| k);
        for k in 0..n {
            if Some(k) == came_by {
                continue;
            }
            let values = numeric_mutate(&ex.nodes[i].values, &ex.nodes[i].matrix, k)?;
            let matrix = ex.nodes[i].matrix.mutate(k)?;
            let key = (values, matrix);
            if let Some(candidates) = index.get(&key).cloned() {
                let child = ex.symbolic(i)?.mutate(k)?;
                let mut duplicate = false;
                for j in candidates {
                    if ex.symbolic(j)? == child {
                        duplicate = true;
                        break;
                    }
                }
                if duplicate {
                    continue;
                }
            }
            let id = ex.nodes.len();
            ex.nodes.push(Node {
                parent: Some((i, k)),
                matrix: key.1.clone(),
                values: key.0.clone(),
            });
            index.entry(key).or_default().push(id);
            if ex.nodes.len() > budget {
                return Ok(FiniteType::ExceededBudget);
            }
        }
    }

    let mut vars = BTreeSet::new();
    for i in 0..ex.nodes.len() {
        vars.extend(ex.symbolic(i)?.cluster().iter().cloned());
    }
    Ok(FiniteType::Finite(vars.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> ClusterVariable {
        ClusterVariable::parse(s, 2).unwrap()
    }

    #[test]
    fn annulus_depth_two() {
        let vars = enumerate_cluster_variables(&Seed::annulus(), 2, 1000).unwrap();
        assert!(vars.contains(&lp("x1")));
        assert!(vars.contains(&lp("x1^-1 + x1^-1*x2^2")));
        assert!(vars.contains(&lp("x2^-1 + x1^2*x2^-1")));
        let x4 = lp("x1^-2*x2^-1*x1^2 + x1^-2*x2^-1 + 2*x1^-2*x2 + x1^-2*x2^3");
        assert!(vars.contains(&x4));
        assert_eq!(vars.len(), 6);
    }

    #[test]
    fn depth_zero_is_initial_cluster() {
        let vars = enumerate_cluster_variables(&Seed::markov(), 0, 10).unwrap();
        assert_eq!(vars.len(), 3);
    }

    #[test]
    fn a2_has_five_variables() {
        let vars = enumerate_cluster_variables(&Seed::a2(), 6, 10_000).unwrap();
        assert_eq!(vars.len(), 5);
    }

    #[test]
    fn node_cap_is_enforced() {
        assert_eq!(
            enumerate_cluster_variables(&Seed::markov(), 6, 20),
            Err(ClusterError::BudgetExceeded { cap: 20 })
        );
    }

    #[test]
    fn positivity_examples() {
        let a11 = enumerate_cluster_variables(&Seed::annulus(), 6, 10_000).unwrap();
        assert!(check_positivity(&a11).holds());
        let markov = enumerate_cluster_variables(&Seed::markov(), 4, 10_000).unwrap();
        assert!(check_positivity(&markov).holds());
        let bad = [lp("x1 - x2")];
        assert_eq!(check_positivity(&bad), Positivity::Violated(lp("x1 - x2")));
    }

    #[test]
    fn finite_type_examples() {
        assert_eq!(is_finite_type(&Seed::a2(), 10_000).unwrap(), FiniteType::Finite(5));
        assert_eq!(
            is_finite_type(&Seed::initial(ExchangeMatrix::zero(1)), 10).unwrap(),
            FiniteType::Finite(2)
        );
        assert_eq!(is_finite_type(&Seed::annulus(), 1000).unwrap(), FiniteType::ExceededBudget);
        assert_eq!(is_finite_type(&Seed::markov(), 500).unwrap(), FiniteType::ExceededBudget);
    }

    #[test]
    fn a3_is_finite_with_nine_variables() {
        let b = ExchangeMatrix::from_rows(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        assert_eq!(is_finite_type(&Seed::initial(b), 10_000).unwrap(), FiniteType::Finite(9));
    }
}
