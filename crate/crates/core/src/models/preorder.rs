use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::ModelError;

/// The reflexive-transitive closure of a set of generator pairs over a field
/// of states.
///
/// States are indices into the owning model. The closure is stored through
/// its strongly connected components: `x ⪰ y` iff the class of `x` reaches
/// the class of `y`. Total preorders with many states but few levels (the
/// output of the preferential translation) therefore stay small.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    universe: usize,
    field: FixedBitSet,
    class_of: Vec<Option<usize>>,
    /// `reach[c]` holds every class `d` with members of `c` ⪰ members of `d`.
    reach: Vec<FixedBitSet>,
    members: Vec<Vec<usize>>,
}

impl Preorder {
    /// Smallest preorder on `field` containing every generator `(x, y)`,
    /// read as `x ⪰ y`.
    pub fn closure(
        universe: usize,
        field: &FixedBitSet,
        generators: &[(usize, usize)],
    ) -> Result<Preorder, ModelError> {
        let mut graph: DiGraph<usize, ()> = DiGraph::new();
        let mut node = vec![None; universe];
        for x in field.ones() {
            if x >= universe {
                return Err(ModelError::StateOutOfRange(x));
            }
            node[x] = Some(graph.add_node(x));
        }
        for &(x, y) in generators {
            match (node.get(x).copied().flatten(), node.get(y).copied().flatten()) {
                (Some(a), Some(b)) => {
                    graph.add_edge(a, b, ());
                }
                _ => return Err(ModelError::PairOutsideField(x, y)),
            }
        }
        // Tarjan emits components sinks-first, so successors are done before
        // any component that reaches them.
        let sccs = tarjan_scc(&graph);
        let mut class_of = vec![None; universe];
        let mut class_of_node = vec![0usize; graph.node_count()];
        let mut members = Vec::with_capacity(sccs.len());
        for (c, scc) in sccs.iter().enumerate() {
            let mut m: Vec<usize> = scc.iter().map(|&n| graph[n]).collect();
            m.sort_unstable();
            for &n in scc {
                class_of_node[n.index()] = c;
                class_of[graph[n]] = Some(c);
            }
            members.push(m);
        }
        let mut reach: Vec<FixedBitSet> = Vec::with_capacity(sccs.len());
        for (c, scc) in sccs.iter().enumerate() {
            let mut r = FixedBitSet::with_capacity(sccs.len());
            r.insert(c);
            for &n in scc {
                for succ in graph.neighbors(n) {
                    let d = class_of_node[succ.index()];
                    if d != c {
                        r.union_with(&reach[d]);
                    }
                }
            }
            reach.push(r);
        }
        let mut field = field.clone();
        field.grow(universe);
        Ok(Preorder {
            universe,
            field,
            class_of,
            reach,
            members,
        })
    }

    /// Number of states in the owning model (not just the field).
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn field(&self) -> &FixedBitSet {
        &self.field
    }

    pub fn in_field(&self, x: usize) -> bool {
        self.class_of.get(x).is_some_and(Option::is_some)
    }

    /// `x ⪰ y`. False whenever either state lies outside the field.
    pub fn geq(&self, x: usize, y: usize) -> bool {
        match (
            self.class_of.get(x).copied().flatten(),
            self.class_of.get(y).copied().flatten(),
        ) {
            (Some(cx), Some(cy)) => self.reach[cx].contains(cy),
            _ => false,
        }
    }

    /// Number of equivalence classes (`x ⪰ y ⪰ x`).
    pub fn class_count(&self) -> usize {
        self.members.len()
    }

    /// Every related pair `(x, y)` with `x ⪰ y`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.field.ones() {
            let cx = self.class_of[x].unwrap();
            for d in self.reach[cx].ones() {
                out.extend(self.members[d].iter().map(|&y| (x, y)));
            }
        }
        out.sort_unstable();
        out
    }

    /// Every two field states are comparable.
    pub fn is_total(&self) -> bool {
        let n = self.members.len();
        (0..n).all(|c| (0..n).all(|d| self.reach[c].contains(d) || self.reach[d].contains(c)))
    }

    /// States `a` of the field with `a ⪰ x`.
    pub fn above(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let cx = self.class_of.get(x).copied().flatten();
        self.members
            .iter()
            .enumerate()
            .filter(move |(c, _)| cx.is_some_and(|cx| self.reach[*c].contains(cx)))
            .flat_map(|(_, m)| m.iter().copied())
    }
}

/// Violations of reflexivity or transitivity in an explicit relation over
/// `field`. Empty iff the relation is a preorder on `field`.
pub fn preorder_violations(field: &FixedBitSet, pairs: &[(usize, usize)]) -> Vec<String> {
    use std::collections::BTreeSet;
    let rel: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    let mut out = Vec::new();
    for x in field.ones() {
        if !rel.contains(&(x, x)) {
            out.push(format!("reflexivity fails at {x}"));
        }
    }
    for &(a, b) in &rel {
        for &(b2, c) in rel.range((b, 0)..=(b, usize::MAX)) {
            debug_assert_eq!(b, b2);
            if !rel.contains(&(a, c)) {
                out.push(format!("transitivity fails at ({a},{b}),({b2},{c})"));
            }
        }
    }
    out
}
