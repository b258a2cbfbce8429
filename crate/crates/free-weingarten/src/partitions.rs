//! Non-crossing set partitions: enumeration, canonicalization, and the lattice
//! join. These are the diagram bases indexing every Gram matrix in the crate.
//!
//! Three flavors are enumerated, distinguished by the admitted block sizes:
//! pairings only (`O`), even blocks (`H`), and arbitrary blocks (`S`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which block sizes a diagram family admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Pairings: every block has size exactly 2.
    O,
    /// Even blocks: every block has even size.
    H,
    /// All partitions.
    S,
}

impl Flavor {
    pub fn admits_block_size(self, size: usize) -> bool {
        match self {
            Flavor::O => size == 2,
            Flavor::H => size % 2 == 0,
            Flavor::S => size >= 1,
        }
    }

    /// Parity constraint: for O and H every maximal run of unassigned points
    /// must have even length, which prunes the enumeration without dead ends.
    fn needs_even_segments(self) -> bool {
        matches!(self, Flavor::O | Flavor::H)
    }

    pub const ALL: [Flavor; 3] = [Flavor::O, Flavor::H, Flavor::S];
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::O => write!(f, "o"),
            Flavor::H => write!(f, "h"),
            Flavor::S => write!(f, "s"),
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "o" => Ok(Flavor::O),
            "h" => Ok(Flavor::H),
            "s" => Ok(Flavor::S),
            other => Err(Error::OutOfRange(format!("unknown flavor {other:?}"))),
        }
    }
}

/// Canonical partition of `{1..k}`: blocks are disjoint, nonempty, cover the
/// ground set, each sorted ascending, and listed by ascending minimum. Two
/// equal partitions are structurally equal.
///
/// Serializes as an array of arrays of 1-based integers, e.g. `[[1,2],[3,4]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds and canonicalizes, validating the partition axioms.
    pub fn new(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidPartition {
            k,
            reason: reason.to_string(),
        };
        if k == 0 {
            return Err(invalid("ground set must be nonempty"));
        }
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        let mut seen = vec![false; k + 1];
        let mut covered = 0usize;
        for b in &blocks {
            if b.is_empty() {
                return Err(invalid("empty block"));
            }
            for &x in b {
                if x == 0 || x > k {
                    return Err(invalid("point outside 1..k"));
                }
                if seen[x] {
                    return Err(invalid("point appears twice"));
                }
                seen[x] = true;
                covered += 1;
            }
        }
        if covered != k {
            return Err(invalid("blocks do not cover 1..k"));
        }
        Ok(Self { k, blocks })
    }

    /// The discrete partition: every point its own block.
    pub fn singletons(k: usize) -> Self {
        Self::new(k, (1..=k).map(|x| vec![x]).collect()).expect("valid")
    }

    /// The indiscrete partition: a single block.
    pub fn one_block(k: usize) -> Self {
        Self::new(k, vec![(1..=k).collect()]).expect("valid")
    }

    pub fn points(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block id of each point, indexed `0..k` for points `1..=k`.
    pub fn block_ids(&self) -> Vec<usize> {
        let mut ids = vec![0usize; self.k];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                ids[x - 1] = b;
            }
        }
        ids
    }

    /// True when no two blocks interleave: there is no `a < b < c < d` with
    /// `a, c` in one block and `b, d` in another.
    pub fn is_noncrossing(&self) -> bool {
        let ids = self.block_ids();
        for x in 0..self.blocks.len() {
            for y in x + 1..self.blocks.len() {
                // Collapse the merged occurrence sequence of the two blocks to
                // its run pattern; four or more runs means an interleave.
                let mut runs = 0u32;
                let mut last = usize::MAX;
                for &id in &ids {
                    if id == x || id == y {
                        if id != last {
                            runs += 1;
                            last = id;
                        }
                        if runs >= 4 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Finest common coarsening of two partitions of the same ground set.
    /// The result need not be non-crossing.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::SizeMismatch {
                left: self.k,
                right: other.k,
            });
        }
        let mut uf = UnionFind::new(self.k);
        for part in [self, other] {
            for block in &part.blocks {
                for w in block.windows(2) {
                    uf.union(w[0] - 1, w[1] - 1);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..self.k {
            groups.entry(uf.find(x)).or_default().push(x + 1);
        }
        Self::new(self.k, groups.into_values().collect())
    }

    /// Number of blocks of the join; the Gram exponent.
    pub fn join_block_count(&self, other: &Self) -> Result<usize> {
        Ok(self.join(other)?.block_count())
    }

    /// Coupling of a partition with a multi-index (entries `1..=n`, length
    /// `k`): 1 exactly when the index is constant on every block.
    pub fn couples(&self, index: &[usize]) -> Result<bool> {
        if index.len() != self.k {
            return Err(Error::IndexLengthMismatch {
                expected: self.k,
                got: index.len(),
            });
        }
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&x| index[x - 1] == index[b[0] - 1])))
    }

    /// `couples` as the 0/1 weight used in Gram sums.
    pub fn delta(&self, index: &[usize]) -> Result<u8> {
        self.couples(index).map(u8::from)
    }
}

impl From<SetPartition> for Vec<Vec<usize>> {
    fn from(p: SetPartition) -> Self {
        p.blocks
    }
}

impl TryFrom<Vec<Vec<usize>>> for SetPartition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let k = blocks.iter().flatten().copied().max().unwrap_or(0);
        SetPartition::new(k, blocks)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// Every non-crossing partition of `{1..k}` admitted by the flavor, in the
/// canonical order: block count descending, then lexicographic on the
/// canonical block lists. This order is stable across runs and puts the
/// finest diagrams first (pairings before coarser blocks).
pub fn enumerate_nc(k: usize, flavor: Flavor) -> Vec<SetPartition> {
    let mut out = Vec::new();
    visit_nc(k, flavor, &mut |blocks| {
        out.push(SetPartition {
            k,
            blocks: blocks.to_vec(),
        });
    });
    out.sort_by(|a, b| {
        b.block_count()
            .cmp(&a.block_count())
            .then_with(|| a.blocks.cmp(&b.blocks))
    });
    out
}

/// Number of admitted non-crossing partitions, without materializing them.
pub fn count_nc(k: usize, flavor: Flavor) -> u64 {
    let mut n = 0u64;
    visit_nc(k, flavor, &mut |_| n += 1);
    n
}

/// Histogram of block counts over the admitted non-crossing partitions:
/// entry `b` counts partitions with exactly `b` blocks.
pub fn block_count_histogram(k: usize, flavor: Flavor) -> Vec<u64> {
    let mut hist = vec![0u64; k + 1];
    visit_nc(k, flavor, &mut |blocks| hist[blocks.len()] += 1);
    hist
}

/// Recursive first-block placement over non-crossing intervals: the block of
/// the smallest open point is chosen, splitting the remainder into
/// independent gaps. Visits each admitted partition exactly once, in no
/// particular order. Blocks passed to the visitor are canonically sorted.
fn visit_nc(k: usize, flavor: Flavor, visit: &mut impl FnMut(&[Vec<usize>])) {
    if k == 0 {
        return;
    }
    if flavor.needs_even_segments() && k % 2 != 0 {
        return;
    }
    let mut segments = vec![(1usize, k)]; // (start, length), contiguous runs
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    recurse(&mut segments, &mut blocks, flavor, visit);
}

fn recurse(
    segments: &mut Vec<(usize, usize)>,
    blocks: &mut Vec<Vec<usize>>,
    flavor: Flavor,
    visit: &mut impl FnMut(&[Vec<usize>]),
) {
    let Some((start, len)) = segments.pop() else {
        let mut canonical = blocks.clone();
        canonical.sort();
        visit(&canonical);
        return;
    };
    // The current block must contain `start`; remaining members are chosen
    // left to right, every intermediate gap staying flavor-admissible.
    let mut members = vec![start];
    extend_block(start, len, &mut members, segments, blocks, flavor, visit);
    segments.push((start, len));
}

#[allow(clippy::too_many_arguments)]
fn extend_block(
    start: usize,
    len: usize,
    members: &mut Vec<usize>,
    segments: &mut Vec<(usize, usize)>,
    blocks: &mut Vec<Vec<usize>>,
    flavor: Flavor,
    visit: &mut impl FnMut(&[Vec<usize>]),
) {
    let end = start + len - 1;
    let last = *members.last().expect("block has a first member");

    // Close the block here if the size and the trailing gap are admissible.
    let trailing = end - last;
    if flavor.admits_block_size(members.len())
        && (!flavor.needs_even_segments() || trailing % 2 == 0)
    {
        let gaps: Vec<(usize, usize)> = gap_list(members, end);
        let depth = segments.len();
        segments.extend(gaps);
        blocks.push(members.clone());
        recurse(segments, blocks, flavor, visit);
        blocks.pop();
        segments.truncate(depth);
    }

    // Or grow it by one more point, keeping the skipped gap admissible.
    if matches!(flavor, Flavor::O) && members.len() >= 2 {
        return; // pairings cannot grow past two points
    }
    for next in last + 1..=end {
        if flavor.needs_even_segments() && (next - last - 1) % 2 != 0 {
            continue;
        }
        members.push(next);
        extend_block(start, len, members, segments, blocks, flavor, visit);
        members.pop();
    }
}

/// Gaps strictly between consecutive members plus the tail after the last,
/// as (start, length) runs, skipping empties.
fn gap_list(members: &[usize], end: usize) -> Vec<(usize, usize)> {
    let mut gaps = Vec::new();
    for w in members.windows(2) {
        if w[1] > w[0] + 1 {
            gaps.push((w[0] + 1, w[1] - w[0] - 1));
        }
    }
    let last = *members.last().expect("nonempty");
    if end > last {
        gaps.push((last + 1, end - last));
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(blocks: &[&[usize]]) -> SetPartition {
        let k = blocks.iter().flat_map(|b| b.iter()).copied().max().unwrap();
        SetPartition::new(k, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn construction_validates_and_canonicalizes() {
        let a = SetPartition::new(4, vec![vec![4, 3], vec![2, 1]]).unwrap();
        assert_eq!(a, p(&[&[1, 2], &[3, 4]]));
        assert!(SetPartition::new(4, vec![vec![1, 2], vec![2, 3], vec![4]]).is_err());
        assert!(SetPartition::new(4, vec![vec![1, 2]]).is_err());
        assert!(SetPartition::new(4, vec![vec![1, 2], vec![3, 4], vec![]]).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2, 5]]).is_err());
    }

    #[test]
    fn crossing_detection() {
        assert!(p(&[&[1, 2], &[3, 4]]).is_noncrossing());
        assert!(!p(&[&[1, 3], &[2, 4]]).is_noncrossing());
        // drawn as non-crossing in the diagram tables
        assert!(p(&[&[1, 2, 5], &[3, 4], &[6]]).is_noncrossing());
        assert!(p(&[&[1, 4], &[2, 3]]).is_noncrossing());
        assert!(!p(&[&[1, 3, 5], &[2, 4, 6]]).is_noncrossing());
    }

    #[test]
    fn join_examples() {
        let a = p(&[&[1, 2], &[3, 4]]);
        let b = p(&[&[1, 4], &[2, 3]]);
        assert_eq!(a.join(&b).unwrap(), p(&[&[1, 2, 3, 4]]));
        assert_eq!(a.join(&a).unwrap(), a);
        assert_eq!(SetPartition::singletons(4).join(&a).unwrap(), a);
        assert!(a.join(&SetPartition::singletons(3)).is_err());
    }

    #[test]
    fn block_counts() {
        assert_eq!(p(&[&[1, 2, 3, 4]]).block_count(), 1);
        assert_eq!(SetPartition::singletons(5).block_count(), 5);
        assert_eq!(p(&[&[1, 2, 5], &[3, 4], &[6]]).block_count(), 3);
    }

    #[test]
    fn coupling_examples() {
        let a = p(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.delta(&[5, 5, 2, 2]).unwrap(), 1);
        assert_eq!(p(&[&[1, 2, 3, 4]]).delta(&[1, 2, 1, 1]).unwrap(), 0);
        assert!(a.delta(&[1, 2]).is_err());
    }

    #[test]
    fn coupling_sum_is_power_of_join_blocks() {
        // sum over {1,2}^2 of delta(one-block) * delta(singletons) = 2^{|join|}
        let one = SetPartition::one_block(2);
        let sing = SetPartition::singletons(2);
        let mut total = 0u32;
        for a in 1..=2usize {
            for b in 1..=2usize {
                total +=
                    u32::from(one.delta(&[a, b]).unwrap()) * u32::from(sing.delta(&[a, b]).unwrap());
            }
        }
        assert_eq!(total, 2);
        assert_eq!(one.join_block_count(&sing).unwrap(), 1);
    }

    #[test]
    fn enumeration_small_tables() {
        assert_eq!(enumerate_nc(4, Flavor::S).len(), 14);
        assert_eq!(enumerate_nc(1, Flavor::H), Vec::<SetPartition>::new());
        assert_eq!(enumerate_nc(6, Flavor::H).len(), 12);
        assert_eq!(
            enumerate_nc(4, Flavor::O),
            vec![p(&[&[1, 2], &[3, 4]]), p(&[&[1, 4], &[2, 3]])]
        );
        // canonical order reproduces the printed two-then-one-block basis
        assert_eq!(
            enumerate_nc(4, Flavor::H),
            vec![
                p(&[&[1, 2], &[3, 4]]),
                p(&[&[1, 4], &[2, 3]]),
                p(&[&[1, 2, 3, 4]]),
            ]
        );
    }

    #[test]
    fn enumeration_is_deterministic_and_duplicate_free() {
        for flavor in Flavor::ALL {
            for k in 1..=8 {
                let a = enumerate_nc(k, flavor);
                let b = enumerate_nc(k, flavor);
                assert_eq!(a, b);
                let mut set: std::collections::HashSet<_> = Default::default();
                for q in &a {
                    assert!(q.is_noncrossing());
                    assert!(q.blocks().iter().all(|b| flavor.admits_block_size(b.len())));
                    assert!(set.insert(q.clone()), "duplicate {q}");
                }
                assert_eq!(count_nc(k, flavor), a.len() as u64);
            }
        }
    }

    fn catalan(k: u64) -> u64 {
        // binom(2k, k) / (k + 1), small k only
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k as u128 {
            num *= 2 * k as u128 - i;
            den *= i + 1;
        }
        (num / den / (k as u128 + 1)) as u64
    }

    fn fuss_catalan(k: u64) -> u64 {
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k as u128 {
            num *= 3 * k as u128 - i;
            den *= i + 1;
        }
        (num / den / (2 * k as u128 + 1)) as u64
    }

    #[test]
    fn counts_match_catalan_families() {
        for k in 1..=12u64 {
            assert_eq!(count_nc(k as usize, Flavor::S), catalan(k), "NC_s({k})");
        }
        for k in 1..=9u64 {
            assert_eq!(count_nc(2 * k as usize, Flavor::O), catalan(k), "NC_o({})", 2 * k);
            assert_eq!(
                count_nc(2 * k as usize, Flavor::H),
                fuss_catalan(k),
                "NC_h({})",
                2 * k
            );
        }
        // spot table values
        assert_eq!(count_nc(1, Flavor::S), 1);
        assert_eq!(count_nc(2, Flavor::S), 2);
        assert_eq!(count_nc(3, Flavor::S), 5);
        assert_eq!(count_nc(4, Flavor::H), 3);
    }

    #[test]
    fn histogram_matches_enumeration() {
        for flavor in Flavor::ALL {
            let hist = block_count_histogram(6, flavor);
            let parts = enumerate_nc(6, flavor);
            for (b, &count) in hist.iter().enumerate() {
                let direct = parts.iter().filter(|p| p.block_count() == b).count() as u64;
                assert_eq!(count, direct);
            }
        }
    }

    #[test]
    fn serde_wire_format() {
        let a = p(&[&[1, 2], &[3, 4]]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[1,2],[3,4]]");
        let back: SetPartition = serde_json::from_str("[[3,4],[2,1]]").unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<SetPartition>("[[1,3]]").is_err());
    }

    /// Arbitrary (possibly crossing) partition from a random block assignment.
    fn arb_partition(k: usize) -> impl Strategy<Value = SetPartition> {
        proptest::collection::vec(0..k, k).prop_map(move |ids| {
            let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
            for (x, id) in ids.iter().enumerate() {
                blocks.entry(*id).or_default().push(x + 1);
            }
            SetPartition::new(k, blocks.into_values().collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn join_laws(a in arb_partition(7), b in arb_partition(7), c in arb_partition(7)) {
            let ab = a.join(&b).unwrap();
            prop_assert_eq!(&ab, &b.join(&a).unwrap());
            prop_assert_eq!(ab.join(&c).unwrap(), a.join(&b.join(&c).unwrap()).unwrap());
            prop_assert_eq!(a.join(&a).unwrap(), a.clone());
            prop_assert!(ab.block_count() <= a.block_count().min(b.block_count()));
            prop_assert_eq!(SetPartition::singletons(7).join(&a).unwrap(), a.clone());
        }

        // The coupling identity behind every Gram entry:
        // sum over all indices of delta_p * delta_q = n^{|p join q|}.
        #[test]
        fn coupling_identity_brute_force(
            seed_a in 0usize..14, seed_b in 0usize..14, n in 1usize..=4,
        ) {
            let parts = enumerate_nc(4, Flavor::S);
            let (a, b) = (&parts[seed_a], &parts[seed_b]);
            let mut total = 0u64;
            let mut index = vec![1usize; 4];
            loop {
                total += u64::from(a.delta(&index).unwrap()) * u64::from(b.delta(&index).unwrap());
                // odometer over {1..n}^4
                let mut pos = 0;
                loop {
                    if pos == 4 { break; }
                    index[pos] += 1;
                    if index[pos] <= n { break; }
                    index[pos] = 1;
                    pos += 1;
                }
                if pos == 4 { break; }
            }
            let expected = (n as u64).pow(a.join_block_count(b).unwrap() as u32);
            prop_assert_eq!(total, expected);
        }
    }
}
