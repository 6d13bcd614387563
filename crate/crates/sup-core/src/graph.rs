//! Full one-step reduction graphs, used to test termination empirically.

use std::collections::HashMap;

use crate::reduction::{apply_rule, find_redexes, Config, ReduceError, RuleId, Strategy};
use crate::syntax::{canonicalize, Term};

/// One labeled reduction step between alpha-classes of terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub rule: RuleId,
    pub to: usize,
}

/// The reachable one-step reduction graph of a term. Nodes are canonical
/// forms, node 0 is the root.
#[derive(Debug, Clone)]
pub struct ReductionGraph {
    pub terms: Vec<Term>,
    pub edges: Vec<Edge>,
    succs: Vec<Vec<usize>>,
}

/// Explore the full reduction graph under the any-redex strategy (the
/// strategy field of `cfg` is ignored), optionally with ultra-reduction
/// edges. Fails with `GraphBudgetExceeded` past `max_nodes` nodes.
pub fn reduction_graph(
    t: &Term,
    cfg: &Config,
    max_nodes: usize,
) -> Result<ReductionGraph, ReduceError> {
    let cfg = Config { strategy: Strategy::AnyRedex, ..*cfg };
    let root = canonicalize(t);
    let mut index: HashMap<Term, usize> = HashMap::new();
    let mut terms = vec![root.clone()];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new()];
    let mut edges = Vec::new();
    let mut seen_edges = std::collections::HashSet::new();
    index.insert(root, 0);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let term = terms[i].clone();
        for redex in find_redexes(&term, &cfg) {
            let reduct = canonicalize(&apply_rule(&term, &redex, &cfg));
            let j = match index.get(&reduct) {
                Some(&j) => j,
                None => {
                    let j = terms.len();
                    if j >= max_nodes {
                        return Err(ReduceError::GraphBudgetExceeded);
                    }
                    index.insert(reduct.clone(), j);
                    terms.push(reduct);
                    succs.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            let edge = Edge { from: i, rule: redex.rule, to: j };
            if seen_edges.insert(edge) {
                succs[i].push(j);
                edges.push(edge);
            }
        }
    }
    Ok(ReductionGraph { terms, edges, succs })
}

impl ReductionGraph {
    pub fn node_count(&self) -> usize {
        self.terms.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nodes with no outgoing edge, i.e. the reachable normal forms.
    pub fn normal_forms(&self) -> impl Iterator<Item = &Term> {
        self.succs
            .iter()
            .enumerate()
            .filter(|(_, out)| out.is_empty())
            .map(|(i, _)| &self.terms[i])
    }

    pub fn is_acyclic(&self) -> bool {
        self.topo_order().is_some()
    }

    /// Length in edges of the longest reduction sequence from any node,
    /// or `None` when the graph has a cycle.
    pub fn longest_path(&self) -> Option<usize> {
        let order = self.topo_order()?;
        let mut depth = vec![0usize; self.terms.len()];
        for &i in order.iter().rev() {
            depth[i] = self.succs[i].iter().map(|&j| depth[j] + 1).max().unwrap_or(0);
        }
        depth.into_iter().max()
    }

    fn topo_order(&self) -> Option<Vec<usize>> {
        let n = self.terms.len();
        let mut indegree = vec![0usize; n];
        for out in &self.succs {
            for &j in out {
                indegree[j] += 1;
            }
        }
        let mut ready: Vec<usize> =
            (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop() {
            order.push(i);
            for &j in &self.succs[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}
