use std::fmt;
use std::sync::Arc;

use super::IncidenceError;
use crate::numtheory::divisors;

/// Largest supported poset; subsets are stored as `u128` bit masks.
pub const MAX_POSET_SIZE: usize = 128;

/// A finite poset on `u64` labels with a dense order relation.
///
/// Elements are addressed by label in the public API. Internally each
/// element has an index, and indices are numbered along a linear extension
/// so that `x < y` implies `index(x) < index(y)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<u64>,
    /// Row `i` has bit `j` set iff `i <= j`.
    up: Vec<u128>,
}

impl FinitePoset {
    /// Builds a poset from labels and an order predicate, checking the
    /// partial-order axioms.
    pub fn new<F>(labels: Vec<u64>, leq: F) -> Result<Self, IncidenceError>
    where
        F: Fn(u64, u64) -> bool,
    {
        let n = labels.len();
        if n > MAX_POSET_SIZE {
            return Err(IncidenceError::TooLarge(n));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(IncidenceError::InvalidPoset(format!("duplicate element {a}")));
            }
        }
        let rel: Vec<Vec<bool>> = labels
            .iter()
            .map(|&a| labels.iter().map(|&b| leq(a, b)).collect())
            .collect();
        for i in 0..n {
            if !rel[i][i] {
                return Err(IncidenceError::InvalidPoset(format!(
                    "relation is not reflexive at {}",
                    labels[i]
                )));
            }
            for j in 0..n {
                if i != j && rel[i][j] && rel[j][i] {
                    return Err(IncidenceError::InvalidPoset(format!(
                        "relation is not antisymmetric on {} and {}",
                        labels[i], labels[j]
                    )));
                }
                for k in 0..n {
                    if rel[i][j] && rel[j][k] && !rel[i][k] {
                        return Err(IncidenceError::InvalidPoset(format!(
                            "relation is not transitive on {}, {}, {}",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        // Down-set sizes give a linear extension.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| ((0..n).filter(|&j| rel[j][i]).count(), i));
        let labels_sorted: Vec<u64> = order.iter().map(|&i| labels[i]).collect();
        let up = order
            .iter()
            .map(|&i| {
                order
                    .iter()
                    .enumerate()
                    .filter(|&(_, &j)| rel[i][j])
                    .fold(0u128, |m, (pos, _)| m | (1u128 << pos))
            })
            .collect();
        Ok(FinitePoset {
            labels: labels_sorted,
            up,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in index order.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, idx: usize) -> u64 {
        self.labels[idx]
    }

    pub fn index(&self, label: u64) -> Result<usize, IncidenceError> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(IncidenceError::UnknownElement(label))
    }

    pub fn contains(&self, label: u64) -> bool {
        self.labels.contains(&label)
    }

    pub(crate) fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    pub(crate) fn lt_idx(&self, i: usize, j: usize) -> bool {
        i != j && self.leq_idx(i, j)
    }

    pub fn leq(&self, x: u64, y: u64) -> Result<bool, IncidenceError> {
        Ok(self.leq_idx(self.index(x)?, self.index(y)?))
    }

    /// Mask of the interval `[i, j]` by index.
    pub(crate) fn interval_mask(&self, i: usize, j: usize) -> u128 {
        let mut m = 0u128;
        for k in 0..self.len() {
            if self.leq_idx(i, k) && self.leq_idx(k, j) {
                m |= 1 << k;
            }
        }
        m
    }

    /// The interval `[x, y]` in index order; empty when `x` is not below `y`.
    pub fn interval(&self, x: u64, y: u64) -> Result<Vec<u64>, IncidenceError> {
        let m = self.interval_mask(self.index(x)?, self.index(y)?);
        Ok(self.mask_labels(m))
    }

    pub(crate) fn mask_labels(&self, m: u128) -> Vec<u64> {
        (0..self.len())
            .filter(|&k| m >> k & 1 == 1)
            .map(|k| self.labels[k])
            .collect()
    }

    pub(crate) fn full_mask(&self) -> u128 {
        if self.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.len()) - 1
        }
    }

    /// All proper chains from `x` to `y` with `k + 1` elements.
    pub fn chains(&self, x: u64, y: u64, k: usize) -> Result<Vec<Chain>, IncidenceError> {
        let (i, j) = (self.index(x)?, self.index(y)?);
        let mut out = Vec::new();
        let mut cur = vec![i];
        self.walk_chains(j, self.full_mask(), Some(k), &mut cur, &mut |c| {
            out.push(Chain(c.iter().map(|&t| self.labels[t]).collect()))
        });
        Ok(out)
    }

    /// All proper chains from `x` to `y`, of any length.
    pub fn all_chains(&self, x: u64, y: u64) -> Result<Vec<Chain>, IncidenceError> {
        let (i, j) = (self.index(x)?, self.index(y)?);
        let mut out = Vec::new();
        let mut cur = vec![i];
        self.walk_chains(j, self.full_mask(), None, &mut cur, &mut |c| {
            out.push(Chain(c.iter().map(|&t| self.labels[t]).collect()))
        });
        Ok(out)
    }

    /// Depth-first walk over chains that start with `cur`, end at `end`, and
    /// use only elements of `allowed`. With `steps = Some(k)` only chains
    /// with exactly `k` steps are reported.
    pub(crate) fn walk_chains<F: FnMut(&[usize])>(
        &self,
        end: usize,
        allowed: u128,
        steps: Option<usize>,
        cur: &mut Vec<usize>,
        visit: &mut F,
    ) {
        let last = *cur.last().expect("chain has a start");
        let taken = cur.len() - 1;
        if last == end {
            if steps.is_none_or(|k| k == taken) {
                visit(cur);
            }
            return;
        }
        if steps.is_some_and(|k| taken >= k) || !self.leq_idx(last, end) {
            return;
        }
        for z in last + 1..=end {
            if allowed >> z & 1 == 1 && self.lt_idx(last, z) && self.leq_idx(z, end) {
                cur.push(z);
                self.walk_chains(end, allowed, steps, cur, visit);
                cur.pop();
            }
        }
    }

    /// Number of chains with `m + 1` elements refining `chain`, by direct
    /// enumeration of chains between its endpoints.
    pub fn count_refinements(&self, chain: &Chain, m: usize) -> Result<u64, IncidenceError> {
        self.check_chain(chain)?;
        let (x, y) = (chain.first(), chain.last());
        Ok(self
            .chains(x, y, m)?
            .iter()
            .filter(|c| chain.0.iter().all(|e| c.0.contains(e)))
            .count() as u64)
    }

    /// The same count as a sum over compositions `m_1 + ... + m_k = m` of
    /// products of chain counts on consecutive steps.
    pub fn count_refinements_by_steps(&self, chain: &Chain, m: usize) -> Result<u64, IncidenceError> {
        self.check_chain(chain)?;
        // dist[s] = number of refinements of the prefix with s steps.
        let mut dist = vec![0u64; m + 1];
        dist[0] = 1;
        for pair in chain.0.windows(2) {
            let counts: Vec<u64> = (0..=m)
                .map(|s| self.chains(pair[0], pair[1], s).map(|c| c.len() as u64))
                .collect::<Result<_, _>>()?;
            let mut next = vec![0u64; m + 1];
            for (a, &da) in dist.iter().enumerate() {
                for (b, &cb) in counts.iter().enumerate().take(m + 1 - a) {
                    next[a + b] += da * cb;
                }
            }
            dist = next;
        }
        Ok(dist[m])
    }

    fn check_chain(&self, chain: &Chain) -> Result<(), IncidenceError> {
        for w in chain.0.windows(2) {
            let (a, b) = (self.index(w[0])?, self.index(w[1])?);
            if !self.lt_idx(a, b) {
                return Err(IncidenceError::NotAChain);
            }
        }
        if let Some(&e) = chain.0.first() {
            self.index(e)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinitePoset{:?}", self.labels)
    }
}

/// A strictly increasing sequence of poset elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain(Vec<u64>);

impl Chain {
    pub fn new(poset: &FinitePoset, elements: Vec<u64>) -> Result<Self, IncidenceError> {
        if elements.is_empty() {
            return Err(IncidenceError::NotAChain);
        }
        let c = Chain(elements);
        poset.check_chain(&c)?;
        Ok(c)
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn first(&self) -> u64 {
        self.0[0]
    }

    pub fn last(&self) -> u64 {
        *self.0.last().unwrap()
    }

    /// Number of steps, one less than the number of elements.
    pub fn steps(&self) -> usize {
        self.0.len() - 1
    }
}

/// The divisors of `n` ordered by divisibility.
#[derive(Clone, Debug)]
pub struct DivisorPoset {
    n: u64,
    poset: Arc<FinitePoset>,
}

impl DivisorPoset {
    pub fn new(n: u64) -> Result<Self, IncidenceError> {
        if n == 0 {
            return Err(IncidenceError::InvalidPoset("n must be positive".into()));
        }
        let poset = FinitePoset::new(divisors(n), |a, b| b % a == 0)?;
        Ok(DivisorPoset {
            n,
            poset: Arc::new(poset),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }
}

impl std::ops::Deref for DivisorPoset {
    type Target = FinitePoset;
    fn deref(&self) -> &FinitePoset {
        &self.poset
    }
}

/// A subset of a poset's elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElementSet(pub(crate) u128);

impl ElementSet {
    pub fn from_labels(poset: &FinitePoset, labels: &[u64]) -> Result<Self, IncidenceError> {
        let mut m = 0u128;
        for &l in labels {
            m |= 1 << poset.index(l)?;
        }
        Ok(ElementSet(m))
    }

    pub fn all(poset: &FinitePoset) -> Self {
        ElementSet(poset.full_mask())
    }

    pub fn contains(&self, poset: &FinitePoset, label: u64) -> bool {
        poset.index(label).is_ok_and(|i| self.0 >> i & 1 == 1)
    }

    pub(crate) fn has(&self, idx: usize) -> bool {
        self.0 >> idx & 1 == 1
    }

    pub fn with(&self, poset: &FinitePoset, label: u64) -> Result<Self, IncidenceError> {
        Ok(ElementSet(self.0 | 1 << poset.index(label)?))
    }

    pub(crate) fn with_idx(&self, idx: usize) -> Self {
        ElementSet(self.0 | 1 << idx)
    }

    pub fn labels(&self, poset: &FinitePoset) -> Vec<u64> {
        poset.mask_labels(self.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_intervals() {
        let p = DivisorPoset::new(12).unwrap();
        assert_eq!(p.interval(1, 12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert!(p.interval(2, 3).unwrap().is_empty());
        assert_eq!(p.interval(4, 4).unwrap(), vec![4]);
        assert_eq!(p.interval(5, 6), Err(IncidenceError::UnknownElement(5)));
    }

    #[test]
    fn axioms_are_checked() {
        assert!(FinitePoset::new(vec![1, 2], |a, b| a != b).is_err());
        assert!(FinitePoset::new(vec![1, 2], |_, _| true).is_err());
        // 1 <= 2, 2 <= 3 but not 1 <= 3
        let bad = FinitePoset::new(vec![1, 2, 3], |a, b| a == b || b == a + 1);
        assert!(matches!(bad, Err(IncidenceError::InvalidPoset(_))));
    }

    #[test]
    fn chain_enumeration() {
        let p4 = DivisorPoset::new(4).unwrap();
        assert_eq!(p4.chains(1, 4, 1).unwrap(), vec![Chain(vec![1, 4])]);
        assert_eq!(p4.chains(1, 4, 2).unwrap(), vec![Chain(vec![1, 2, 4])]);
        assert_eq!(p4.chains(2, 2, 0).unwrap(), vec![Chain(vec![2])]);
        assert!(p4.chains(1, 2, 0).unwrap().is_empty());
        let p12 = DivisorPoset::new(12).unwrap();
        let mids: Vec<u64> = p12.chains(1, 12, 2).unwrap().iter().map(|c| c.elements()[1]).collect();
        assert_eq!(mids, vec![2, 3, 4, 6]);
    }

    #[test]
    fn refinement_counts() {
        let p = DivisorPoset::new(12).unwrap();
        let c = Chain::new(&p, vec![1, 12]).unwrap();
        assert_eq!(p.count_refinements(&c, 2).unwrap(), 4);
        assert_eq!(p.count_refinements(&c, 3).unwrap(), 3);
        assert_eq!(p.count_refinements_by_steps(&c, 3).unwrap(), 3);
        let c = Chain::new(&p, vec![1, 2, 12]).unwrap();
        assert_eq!(p.count_refinements(&c, 2).unwrap(), 1);
        assert_eq!(p.count_refinements(&c, 3).unwrap(), 2);
        assert!(Chain::new(&p, vec![2, 3]).is_err());
    }
}
