//! Ground-truth integration over the classical signed-permutation group by
//! exhaustive enumeration (small ranks) and seeded Monte Carlo (large ranks).
//!
//! Nothing here touches the partition Gram machinery: these are the classical
//! reference laws the free-side limits are compared against.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::Rational;
use crate::laws::AtomicMeasure;
use crate::{Error, Result};

/// Name recorded in every sampling report; chunk `c` of a run draws from this
/// generator seeded with the report seed on stream `c`.
pub const RNG_ALGORITHM: &str = "chacha8(seed, stream=chunk)";

/// Largest rank enumerated exhaustively; the group then has 2^6 * 6! = 46080
/// elements.
pub const ENUMERATION_LIMIT: usize = 6;

/// Samples drawn per independently seeded chunk.
const CHUNK: u64 = 1 << 14;

/// A signed permutation: a bijection of `{1..n}` together with one sign per
/// point. The sign is attached to the source point, matching the coordinate
/// convention below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    /// 0-based images: point `j+1` maps to `perm[j] + 1`.
    perm: Vec<usize>,
    /// `+1` or `-1` per source point.
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &image in &perm {
            if image >= n || seen[image] {
                return Err(Error::OutOfRange("not a bijection".into()));
            }
            seen[image] = true;
        }
        if signs.len() != n || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::OutOfRange("signs must be +/-1 per point".into()));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// Matrix coordinate `u_ij` (1-based): `sign(j)` when the permutation
    /// carries `j` to `i`, else 0.
    pub fn coordinate(&self, i: usize, j: usize) -> i8 {
        if self.perm[j - 1] == i - 1 {
            self.signs[j - 1]
        } else {
            0
        }
    }

    /// `u_11 + ... + u_ss`: signed count of fixed points among the first `s`.
    pub fn truncated_character(&self, s: usize) -> i64 {
        (0..s)
            .filter(|&j| self.perm[j] == j)
            .map(|j| i64::from(self.signs[j]))
            .sum()
    }
}

/// Exact distribution of a truncated character over the uniform group law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterLaw {
    pub n: usize,
    pub s: usize,
    /// Weight per atom; exact rationals summing to 1.
    pub weights: BTreeMap<i64, Rational>,
}

impl CharacterLaw {
    pub fn weight(&self, k: i64) -> Rational {
        self.weights
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Rational::from_integer(0.into()))
    }

    /// Double-precision view for comparisons with sampled or limiting laws.
    pub fn to_atomic(&self) -> AtomicMeasure {
        let atoms = self
            .weights
            .iter()
            .map(|(&k, w)| {
                let num: f64 = w.numer().to_string().parse().expect("small");
                let den: f64 = w.denom().to_string().parse().expect("small");
                (k, num / den)
            })
            .collect();
        AtomicMeasure::from_weights(atoms, self.s as i64, 0)
    }
}

/// Exact law of `u_11 + ... + u_ss` over the full signed-permutation group,
/// by exhaustive enumeration of all `2^n n!` elements.
pub fn exact_character_law(n: usize, s: usize) -> Result<CharacterLaw> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLargeForEnumeration {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    if s > n || n == 0 {
        return Err(Error::OutOfRange(format!("need 0 <= s <= n, got s={s}, n={n}")));
    }
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut signs = vec![1i8; n];
    enumerate_group(&mut perm, 0, &mut signs, s, &mut counts);
    let group_order = BigInt::from(1u64 << n) * (1..=n as u64).product::<u64>();
    let weights = counts
        .into_iter()
        .map(|(k, c)| (k, Rational::new(BigInt::from(c), group_order.clone())))
        .collect();
    Ok(CharacterLaw { n, s, weights })
}

fn enumerate_group(
    perm: &mut Vec<usize>,
    fixed: usize,
    signs: &mut Vec<i8>,
    s: usize,
    counts: &mut BTreeMap<i64, u64>,
) {
    let n = perm.len();
    if fixed == n {
        enumerate_signs(perm, signs, 0, s, counts);
        return;
    }
    for i in fixed..n {
        perm.swap(fixed, i);
        enumerate_group(perm, fixed + 1, signs, s, counts);
        perm.swap(fixed, i);
    }
}

fn enumerate_signs(
    perm: &[usize],
    signs: &mut Vec<i8>,
    pos: usize,
    s: usize,
    counts: &mut BTreeMap<i64, u64>,
) {
    if pos == signs.len() {
        let character: i64 = (0..s)
            .filter(|&j| perm[j] == j)
            .map(|j| i64::from(signs[j]))
            .sum();
        *counts.entry(character).or_insert(0) += 1;
        return;
    }
    for sign in [1i8, -1] {
        signs[pos] = sign;
        enumerate_signs(perm, signs, pos + 1, s, counts);
    }
    signs[pos] = 1;
}

fn sample_one(rng: &mut ChaCha8Rng, n: usize) -> SignedPermutation {
    let mut perm: Vec<usize> = (0..n).collect();
    // unbiased top-down shuffle
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let signs = (0..n)
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect();
    SignedPermutation { perm, signs }
}

/// Deterministic stream of i.i.d. uniform signed permutations: an unbiased
/// shuffle plus independent fair signs, from the documented generator.
pub fn sample_hn(n: usize, seed: u64, count: u64) -> impl Iterator<Item = SignedPermutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    (0..count).map(move |_| sample_one(&mut rng, n))
}

fn thread_count(jobs: usize) -> usize {
    let configured = std::env::var("WEINGARTEN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0);
    let available = std::thread::available_parallelism().map_or(1, usize::from);
    configured.unwrap_or(available).min(jobs.max(1))
}

/// Tallies `total` samples over independently seeded fixed-size chunks,
/// mapping each sample to a histogram bin. Chunk `c` uses stream `c` of the
/// generator, so the merged counts are identical for any worker count.
fn chunked_histogram(
    seed: u64,
    total: u64,
    bins: usize,
    per_sample: impl Fn(&mut ChaCha8Rng) -> usize + Sync,
) -> Vec<u64> {
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(CHUNK))
        .map(|c| (c, CHUNK.min(total - c * CHUNK)))
        .collect();
    let workers = thread_count(chunks.len());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut partials: Vec<Vec<u64>> = vec![Vec::new(); chunks.len()];
    let partial_slots: Vec<std::sync::Mutex<&mut Vec<u64>>> =
        partials.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let slot = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&(chunk, size)) = chunks.get(slot) else {
                    break;
                };
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(chunk);
                let mut hist = vec![0u64; bins];
                for _ in 0..size {
                    hist[per_sample(&mut rng)] += 1;
                }
                **partial_slots[slot].lock().unwrap() = hist;
            });
        }
    });
    let mut merged = vec![0u64; bins];
    for hist in partials {
        for (m, v) in merged.iter_mut().zip(hist) {
            *m += v;
        }
    }
    merged
}

/// Monte Carlo estimate of the truncated-character law.
#[derive(Debug, Clone)]
pub struct SampleReport {
    pub n: usize,
    pub s: usize,
    pub seed: u64,
    pub samples: u64,
    pub rng: &'static str,
    /// Empirical probability per character value.
    pub law: BTreeMap<i64, f64>,
    pub second_moment: f64,
}

/// Samples the truncated character `N` times and tallies its empirical law.
pub fn character_sample_report(n: usize, s: usize, seed: u64, samples: u64) -> Result<SampleReport> {
    if s > n || n == 0 {
        return Err(Error::OutOfRange(format!("need 0 <= s <= n, got s={s}, n={n}")));
    }
    let bins = 2 * s + 1;
    let hist = chunked_histogram(seed, samples, bins, |rng| {
        (sample_one(rng, n).truncated_character(s) + s as i64) as usize
    });
    let mut law = BTreeMap::new();
    let mut second = 0.0;
    for (bin, &count) in hist.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let value = bin as i64 - s as i64;
        let p = count as f64 / samples as f64;
        law.insert(value, p);
        second += (value as f64) * (value as f64) * p;
    }
    Ok(SampleReport {
        n,
        s,
        seed,
        samples,
        rng: RNG_ALGORITHM,
        law,
        second_moment: second,
    })
}

/// Fixed-point statistics of uniform permutations against the Poisson limit.
#[derive(Debug, Clone)]
pub struct PoissonReport {
    pub n: usize,
    pub s: usize,
    pub seed: u64,
    pub samples: u64,
    pub rng: &'static str,
    /// Empirical probability of `m` fixed points among the first `s`.
    pub empirical: Vec<f64>,
    /// Poisson pmf at the rate `s/n`, over the same support.
    pub reference: Vec<f64>,
    pub total_variation: f64,
    pub probability_none: f64,
}

/// Empirical law of the number of fixed points among the first `s` positions
/// of a uniform permutation, compared to the Poisson law with rate `s/n`.
pub fn poisson_fixedpoint_check(n: usize, s: usize, seed: u64, samples: u64) -> Result<PoissonReport> {
    if s > n || n == 0 {
        return Err(Error::OutOfRange(format!("need 0 <= s <= n, got s={s}, n={n}")));
    }
    let bins = s + 1;
    let hist = chunked_histogram(seed, samples, bins, |rng| {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        (0..s).filter(|&j| perm[j] == j).count()
    });
    let empirical: Vec<f64> = hist.iter().map(|&c| c as f64 / samples as f64).collect();
    let rate = s as f64 / n as f64;
    let mut reference = Vec::with_capacity(bins);
    let mut pmf = (-rate).exp();
    for m in 0..bins {
        reference.push(pmf);
        pmf *= rate / (m as f64 + 1.0);
    }
    let mut tv = empirical
        .iter()
        .zip(&reference)
        .map(|(e, r)| (e - r).abs())
        .sum::<f64>();
    // tail of the reference pmf beyond the observable support
    tv += f64::max(0.0, 1.0 - reference.iter().sum::<f64>());
    tv /= 2.0;
    let probability_none = empirical.first().copied().unwrap_or(0.0);
    Ok(PoissonReport {
        n,
        s,
        seed,
        samples,
        rng: RNG_ALGORITHM,
        empirical,
        reference,
        total_variation: tv,
        probability_none,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    #[test]
    fn coordinates_of_identity_and_reflection() {
        let id = SignedPermutation::identity(4);
        for i in 1..=4 {
            for j in 1..=4 {
                assert_eq!(id.coordinate(i, j), i8::from(i == j));
            }
        }
        // reflection of the first segment
        let tau = SignedPermutation::new(vec![0, 1, 2], vec![-1, 1, 1]).unwrap();
        assert_eq!(tau.coordinate(1, 1), -1);
        assert_eq!(tau.truncated_character(3), 1);
    }

    #[test]
    fn rows_are_unit_vectors() {
        for g in sample_hn(6, 9, 50) {
            for i in 1..=6 {
                let row: i32 = (1..=6).map(|j| i32::from(g.coordinate(i, j)).pow(2)).sum();
                let col: i32 = (1..=6).map(|j| i32::from(g.coordinate(j, i)).pow(2)).sum();
                assert_eq!(row, 1);
                assert_eq!(col, 1);
            }
        }
    }

    #[test]
    fn validation_rejects_bad_elements() {
        assert!(SignedPermutation::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(SignedPermutation::new(vec![0, 2], vec![1, 1]).is_err());
        assert!(SignedPermutation::new(vec![0, 1], vec![1, 2]).is_err());
    }

    #[test]
    fn exact_law_smallest_ranks() {
        // rank 1: the two-element group gives (1/2, 1/2) on +/-1
        let law = exact_character_law(1, 1).unwrap();
        assert_eq!(law.weight(1), ratio(1, 2));
        assert_eq!(law.weight(-1), ratio(1, 2));
        assert_eq!(law.weight(0), rat(0));

        // rank 2, s = 1: half the elements move the first point
        let law = exact_character_law(2, 1).unwrap();
        assert_eq!(law.weight(0), ratio(1, 2));
        assert_eq!(law.weight(1), ratio(1, 4));
        assert_eq!(law.weight(-1), ratio(1, 4));

        assert!(exact_character_law(7, 1).is_err());
    }

    #[test]
    fn exact_law_is_symmetric_with_unit_mass() {
        let law = exact_character_law(5, 5).unwrap();
        let total: Rational = law.weights.values().cloned().sum();
        assert_eq!(total, rat(1));
        for (&k, w) in &law.weights {
            assert_eq!(*w, law.weight(-k), "atom {k}");
        }
        let mean: Rational = law.weights.iter().map(|(&k, w)| rat(k) * w).sum();
        assert_eq!(mean, rat(0));
    }

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<_> = sample_hn(8, 42, 20).collect();
        let b: Vec<_> = sample_hn(8, 42, 20).collect();
        assert_eq!(a, b);
        let c: Vec<_> = sample_hn(8, 43, 20).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn reports_are_thread_count_invariant() {
        let baseline = {
            std::env::set_var("WEINGARTEN_THREADS", "1");
            character_sample_report(6, 3, 7, 40_000).unwrap()
        };
        let parallel = {
            std::env::set_var("WEINGARTEN_THREADS", "4");
            character_sample_report(6, 3, 7, 40_000).unwrap()
        };
        std::env::remove_var("WEINGARTEN_THREADS");
        assert_eq!(baseline.law, parallel.law);
    }

    #[test]
    fn monte_carlo_tracks_exact_law() {
        let n = 4;
        let s = 2;
        let samples = 100_000u64;
        let exact = exact_character_law(n, s).unwrap().to_atomic();
        let report = character_sample_report(n, s, 2024, samples).unwrap();
        for (&k, &p_hat) in &report.law {
            let p = exact.weight(k);
            let sigma = (p * (1.0 - p) / samples as f64).sqrt();
            assert!(
                (p_hat - p).abs() <= 4.0 * sigma.max(1e-9),
                "atom {k}: {p_hat} vs {p}"
            );
        }
    }

    #[test]
    fn sign_symmetry_in_samples() {
        let report = character_sample_report(10, 10, 3, 200_000).unwrap();
        let mean: f64 = report.law.iter().map(|(&k, p)| k as f64 * p).sum();
        assert!(mean.abs() < 4.0 / (report.samples as f64).sqrt() * 3.2);
    }

    #[test]
    fn poisson_limit_at_full_truncation() {
        let report = poisson_fixedpoint_check(200, 200, 11, 200_000).unwrap();
        assert!((report.probability_none - (-1.0f64).exp()).abs() < 0.01);
        assert!(report.total_variation < 0.02);
        // degenerate truncation: no positions, no fixed points
        let empty = poisson_fixedpoint_check(50, 0, 11, 1000).unwrap();
        assert_eq!(empty.probability_none, 1.0);
    }
}
