//! Inflationary maps between sets of states.
//!
//! An injection `f: B → A` is inflationary when `f(b) ⪰ b` for every `b`.
//! Existence reduces to bipartite matching on the dominance edges
//! `{(b, a) : a ⪰ b}`: a matching that saturates `B` is such an injection.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::models::Preorder;

/// Largest domain [`brute_force_injection`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("state {0} is not in the field of the preorder")]
    OutsideField(usize),
    #[error("brute-force search over {size} states exceeds the limit of {limit}")]
    Capacity { size: usize, limit: usize },
}

/// A map given as `(b, f(b))` pairs sorted by `b`.
pub type Injection = Vec<(usize, usize)>;

const NIL: usize = usize::MAX;
const INF: u32 = u32::MAX;

/// Maximum bipartite matching. `adj[u]` lists the right vertices adjacent to
/// left vertex `u`; the result gives each left vertex its partner, if any.
pub fn hopcroft_karp(right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![INF; left];
    let mut it = vec![0usize; left];
    let mut queue = VecDeque::new();
    let mut stack = Vec::new();

    loop {
        queue.clear();
        for u in 0..left {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }

        it.iter_mut().for_each(|i| *i = 0);
        for start in 0..left {
            if match_l[start] != NIL {
                continue;
            }
            stack.clear();
            stack.push(start);
            while let Some(&u) = stack.last() {
                if it[u] == adj[u].len() {
                    dist[u] = INF;
                    stack.pop();
                    continue;
                }
                let v = adj[u][it[u]];
                let w = match_r[v];
                if w == NIL {
                    for &x in &stack {
                        let v = adj[x][it[x]];
                        match_l[x] = v;
                        match_r[v] = x;
                    }
                    break;
                } else if dist[w] != INF && dist[w] == dist[u] + 1 {
                    stack.push(w);
                } else {
                    it[u] += 1;
                }
            }
        }
    }
    match_l
        .into_iter()
        .map(|v| (v != NIL).then_some(v))
        .collect()
}

fn check_field(order: &Preorder, set: &FixedBitSet) -> Result<Vec<usize>, MatchingError> {
    set.ones()
        .map(|x| {
            if order.in_field(x) {
                Ok(x)
            } else {
                Err(MatchingError::OutsideField(x))
            }
        })
        .collect()
}

/// An inflationary injection from `from` into `to`, if one exists.
///
/// ```
/// use fixedbitset::FixedBitSet;
/// use qualprob::models::Preorder;
/// use qualprob::semantics::inflationary_injection;
///
/// // 0 ⪰ 1 and 0 ⪰ 2: either of 1, 2 maps to 0, but not both at once.
/// let mut field = FixedBitSet::with_capacity(3);
/// field.insert_range(..);
/// let order = Preorder::closure(3, &field, &[(0, 1), (0, 2)]).unwrap();
/// let set = |xs: &[usize]| {
///     let mut s = FixedBitSet::with_capacity(3);
///     xs.iter().for_each(|&x| s.insert(x));
///     s
/// };
/// assert_eq!(inflationary_injection(&order, &set(&[1]), &set(&[0])).unwrap(), Some(vec![(1, 0)]));
/// assert_eq!(inflationary_injection(&order, &set(&[1, 2]), &set(&[0])).unwrap(), None);
/// ```
pub fn inflationary_injection(
    order: &Preorder,
    from: &FixedBitSet,
    to: &FixedBitSet,
) -> Result<Option<Injection>, MatchingError> {
    let domain = check_field(order, from)?;
    let range = check_field(order, to)?;
    if domain.len() > range.len() {
        return Ok(None);
    }
    let mut slot = vec![NIL; order.universe()];
    for (j, &a) in range.iter().enumerate() {
        slot[a] = j;
    }
    let adj: Vec<Vec<usize>> = domain
        .iter()
        .map(|&b| {
            order
                .above(b)
                .filter_map(|a| (slot[a] != NIL).then_some(slot[a]))
                .collect()
        })
        .collect();
    let matching = hopcroft_karp(range.len(), &adj);
    if matching.iter().any(Option::is_none) {
        return Ok(None);
    }
    Ok(Some(
        domain
            .iter()
            .zip(matching)
            .map(|(&b, j)| (b, range[j.unwrap()]))
            .collect(),
    ))
}

/// Whether every state of `from` is dominated by some state of `to`, i.e.
/// an inflationary function (not necessarily injective) exists.
pub fn inflationary_function(
    order: &Preorder,
    from: &FixedBitSet,
    to: &FixedBitSet,
) -> Result<bool, MatchingError> {
    let domain = check_field(order, from)?;
    let range = check_field(order, to)?;
    Ok(domain
        .iter()
        .all(|&b| range.iter().any(|&a| order.geq(a, b))))
}

/// Exhaustive search over injective assignments, for cross-checking
/// [`inflationary_injection`]. Domains above [`BRUTE_FORCE_LIMIT`] are refused.
pub fn brute_force_injection(
    order: &Preorder,
    from: &FixedBitSet,
    to: &FixedBitSet,
) -> Result<Option<Injection>, MatchingError> {
    let domain = check_field(order, from)?;
    let range = check_field(order, to)?;
    if domain.len() > BRUTE_FORCE_LIMIT {
        return Err(MatchingError::Capacity {
            size: domain.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    fn assign(
        order: &Preorder,
        domain: &[usize],
        range: &[usize],
        used: &mut [bool],
        acc: &mut Injection,
    ) -> bool {
        let Some(&b) = domain.get(acc.len()) else {
            return true;
        };
        for (j, &a) in range.iter().enumerate() {
            if !used[j] && order.geq(a, b) {
                used[j] = true;
                acc.push((b, a));
                if assign(order, domain, range, used, acc) {
                    return true;
                }
                acc.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut used = vec![false; range.len()];
    let mut acc = Vec::with_capacity(domain.len());
    Ok(assign(order, &domain, &range, &mut used, &mut acc).then_some(acc))
}

/// Checks that `map` is an inflationary injection from `from` into `to`.
pub fn is_inflationary_injection(
    order: &Preorder,
    from: &FixedBitSet,
    to: &FixedBitSet,
    map: &[(usize, usize)],
) -> bool {
    let mut seen_dom = FixedBitSet::with_capacity(order.universe());
    let mut seen_img = FixedBitSet::with_capacity(order.universe());
    for &(b, a) in map {
        if !from.contains(b) || !to.contains(a) || !order.geq(a, b) {
            return false;
        }
        if seen_dom.put(b) || seen_img.put(a) {
            return false;
        }
    }
    seen_dom.count_ones(..) == from.count_ones(..)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        xs.iter().for_each(|&x| s.insert(x));
        s
    }

    fn full(n: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert_range(..);
        s
    }

    #[test]
    fn hopcroft_karp_small() {
        // classic: three left, three right, perfect matching needs augmenting
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let m = hopcroft_karp(3, &adj);
        assert!(m.iter().all(Option::is_some));
        let mut rights: Vec<_> = m.iter().map(|x| x.unwrap()).collect();
        rights.sort();
        assert_eq!(rights, vec![0, 1, 2]);

        let adj = vec![vec![0], vec![0]];
        let m = hopcroft_karp(1, &adj);
        assert_eq!(m.iter().filter(|x| x.is_some()).count(), 1);
    }

    #[test]
    fn empty_domain_injects() {
        let order = Preorder::closure(2, &full(2), &[]).unwrap();
        assert_eq!(
            inflationary_injection(&order, &set(2, &[]), &set(2, &[1])).unwrap(),
            Some(vec![])
        );
        assert_eq!(
            inflationary_injection(&order, &set(2, &[]), &set(2, &[])).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn identity_on_equal_sets() {
        let order = Preorder::closure(3, &full(3), &[]).unwrap();
        let s = set(3, &[0, 2]);
        assert_eq!(
            inflationary_injection(&order, &s, &s).unwrap(),
            Some(vec![(0, 0), (2, 2)])
        );
    }

    #[test]
    fn pigeonhole() {
        let order = Preorder::closure(3, &full(3), &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(
            inflationary_injection(&order, &set(3, &[0, 1]), &set(3, &[2])).unwrap(),
            None
        );
    }

    #[test]
    fn function_examples() {
        let order = Preorder::closure(3, &full(3), &[(0, 1), (0, 2)]).unwrap();
        assert!(inflationary_function(&order, &set(3, &[1, 2]), &set(3, &[0])).unwrap());
        assert!(!inflationary_function(&order, &set(3, &[1]), &set(3, &[])).unwrap());
        assert!(inflationary_function(&order, &set(3, &[]), &set(3, &[])).unwrap());
    }

    #[test]
    fn brute_force_singletons() {
        let order = Preorder::closure(2, &full(2), &[(0, 1)]).unwrap();
        assert_eq!(
            brute_force_injection(&order, &set(2, &[0]), &set(2, &[1])).unwrap(),
            None
        );
        assert_eq!(
            brute_force_injection(&order, &set(2, &[1]), &set(2, &[0])).unwrap(),
            Some(vec![(1, 0)])
        );
        let big = Preorder::closure(9, &full(9), &[]).unwrap();
        assert!(matches!(
            brute_force_injection(&big, &full(9), &full(9)),
            Err(MatchingError::Capacity { size: 9, limit: 8 })
        ));
    }

    #[test]
    fn outside_field_rejected() {
        let order = Preorder::closure(2, &set(2, &[0]), &[]).unwrap();
        assert_eq!(
            inflationary_injection(&order, &set(2, &[1]), &set(2, &[0])),
            Err(MatchingError::OutsideField(1))
        );
        assert_eq!(
            inflationary_function(&order, &set(2, &[0]), &set(2, &[1])),
            Err(MatchingError::OutsideField(1))
        );
    }

    #[test]
    fn witness_checker() {
        let order = Preorder::closure(3, &full(3), &[(0, 1), (0, 2)]).unwrap();
        let (b, a) = (set(3, &[1]), set(3, &[0]));
        assert!(is_inflationary_injection(&order, &b, &a, &[(1, 0)]));
        assert!(!is_inflationary_injection(&order, &a, &b, &[(0, 1)]));
        assert!(!is_inflationary_injection(&order, &b, &a, &[]));
    }
}
