//! Gram and Weingarten matrices over non-crossing partition bases, monomial
//! integration, truncated-character moments, and their large-n limits.
//!
//! The Gram matrix couples two basis diagrams through the block count of
//! their join; its exact inverse drives every integral here. Inverses are
//! memoized per `(k, n, flavor)` because moment sweeps reuse them heavily.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::exactalg::{Rational, RationalMatrix, RationalPolynomial};
use crate::partitions::{block_count_histogram, enumerate_nc, Flavor, SetPartition};
use crate::{Error, Result};

/// A partition basis together with its Gram matrix at a concrete dimension,
/// and optionally the exact Weingarten inverse.
#[derive(Debug, Clone)]
pub struct GramPair {
    pub k: usize,
    pub n: i64,
    pub flavor: Flavor,
    pub basis: Vec<SetPartition>,
    pub gram: RationalMatrix,
    pub weingarten: Option<RationalMatrix>,
}

/// Join block-count exponents for a basis: entry `(p, q)` is `|p v q|`.
/// Cached per `(k, flavor)`; this is the n-independent part of every Gram
/// matrix.
#[derive(Debug)]
pub struct JoinExponents {
    pub basis: Vec<SetPartition>,
    pub exponents: Vec<Vec<u32>>,
}

fn join_cache() -> &'static Mutex<HashMap<(usize, Flavor), Arc<JoinExponents>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Flavor), Arc<JoinExponents>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn weingarten_cache() -> &'static Mutex<HashMap<(usize, i64, Flavor), Arc<GramPair>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, i64, Flavor), Arc<GramPair>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Basis and join exponents for `(k, flavor)`, memoized.
pub fn join_exponents(k: usize, flavor: Flavor) -> Arc<JoinExponents> {
    if let Some(hit) = join_cache().lock().unwrap().get(&(k, flavor)) {
        return Arc::clone(hit);
    }
    let basis = enumerate_nc(k, flavor);
    let m = basis.len();
    let mut exponents = vec![vec![0u32; m]; m];
    for i in 0..m {
        exponents[i][i] = basis[i].block_count() as u32;
        for j in i + 1..m {
            let e = basis[i].join_block_count(&basis[j]).expect("equal sizes") as u32;
            exponents[i][j] = e;
            exponents[j][i] = e;
        }
    }
    let value = Arc::new(JoinExponents { basis, exponents });
    // Concurrent builders may race; either of the identical values may land.
    Arc::clone(
        join_cache()
            .lock()
            .unwrap()
            .entry((k, flavor))
            .or_insert(value),
    )
}

fn check_dimension(n: i64, allow_small_n: bool) -> Result<()> {
    if n < 4 && !allow_small_n {
        return Err(Error::SmallDimension { n });
    }
    if n < 0 {
        return Err(Error::OutOfRange(format!("negative dimension n={n}")));
    }
    Ok(())
}

fn power_matrix(exponents: &[Vec<u32>], base: i64) -> RationalMatrix {
    let m = exponents.len();
    RationalMatrix::from_fn(m, m, |i, j| {
        Rational::from_integer(BigInt::from(base).pow(exponents[i][j]))
    })
}

/// Gram matrix of the flavor's non-crossing basis at dimension `n`:
/// entry `(p, q)` is `n^{|p v q|}`. Empty basis yields the 0x0 matrix.
pub fn gram_matrix(k: usize, n: i64, flavor: Flavor) -> Result<GramPair> {
    gram_matrix_with(k, n, flavor, false)
}

/// As [`gram_matrix`], with an explicit override for `n < 4`. Under the
/// override nothing is assumed about invertibility; inversion will report
/// singularity rather than silently misbehave.
pub fn gram_matrix_with(k: usize, n: i64, flavor: Flavor, allow_small_n: bool) -> Result<GramPair> {
    check_dimension(n, allow_small_n)?;
    let je = join_exponents(k, flavor);
    Ok(GramPair {
        k,
        n,
        flavor,
        basis: je.basis.clone(),
        gram: power_matrix(&je.exponents, n),
        weingarten: None,
    })
}

/// Gram pair with the exact Weingarten inverse, memoized per `(k, n, flavor)`.
/// The product `gram * weingarten` is verified to be the identity exactly
/// before the pair enters the cache.
pub fn weingarten_matrix(k: usize, n: i64, flavor: Flavor) -> Result<Arc<GramPair>> {
    weingarten_matrix_with(k, n, flavor, false)
}

pub fn weingarten_matrix_with(
    k: usize,
    n: i64,
    flavor: Flavor,
    allow_small_n: bool,
) -> Result<Arc<GramPair>> {
    check_dimension(n, allow_small_n)?;
    if let Some(hit) = weingarten_cache().lock().unwrap().get(&(k, n, flavor)) {
        return Ok(Arc::clone(hit));
    }
    let mut pair = gram_matrix_with(k, n, flavor, allow_small_n)?;
    let inverse = pair.gram.inverse().map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::SingularGram { k, n, flavor },
        other => other,
    })?;
    debug_assert!(pair.gram.mul(&inverse).expect("square").is_identity());
    pair.weingarten = Some(inverse);
    let value = Arc::new(pair);
    Ok(Arc::clone(
        weingarten_cache()
            .lock()
            .unwrap()
            .entry((k, n, flavor))
            .or_insert(value),
    ))
}

fn validate_index(index: &[usize], n: i64) -> Result<()> {
    for &v in index {
        if v == 0 || v as i64 > n {
            return Err(Error::IndexOutOfRange { value: v, n: n as usize });
        }
    }
    Ok(())
}

/// Haar-state integral of the matrix-coordinate monomial with row indices `i`
/// and column indices `j` (1-based, entries in `1..=n`), for the flavor's
/// free quantum group: a double sum of Weingarten entries over couplings.
pub fn integrate_monomial(i: &[usize], j: &[usize], n: i64, flavor: Flavor) -> Result<Rational> {
    if i.len() != j.len() {
        return Err(Error::IndexLengthMismatch {
            expected: i.len(),
            got: j.len(),
        });
    }
    let k = i.len();
    let pair = weingarten_matrix(k, n, flavor)?;
    validate_index(i, n)?;
    validate_index(j, n)?;
    let w = pair.weingarten.as_ref().expect("populated");
    let mut total = Rational::from_integer(0.into());
    for (pi, p) in pair.basis.iter().enumerate() {
        if !p.couples(i)? {
            continue;
        }
        for (qi, q) in pair.basis.iter().enumerate() {
            if !q.couples(j)? {
                continue;
            }
            total += w[(pi, qi)].clone();
        }
    }
    Ok(total)
}

/// Exact moment of the truncated character: the trace formula
/// `Tr(G_{kn}^{-1} G_{ks})`. Empty basis (odd order for flavors O, H) and
/// `s = 0` both give 0.
pub fn character_moment(k: usize, n: i64, s: i64, flavor: Flavor) -> Result<Rational> {
    if s < 0 || s > n {
        return Err(Error::TruncationOutOfRange { s, n });
    }
    let pair = weingarten_matrix(k, n, flavor)?;
    if pair.basis.is_empty() {
        return Ok(Rational::from_integer(0.into()));
    }
    let je = join_exponents(k, flavor);
    let gram_s = power_matrix(&je.exponents, s);
    pair.weingarten
        .as_ref()
        .expect("populated")
        .trace_product(&gram_s)
}

/// Large-n limit of the truncated-character moment at truncation ratio `t`:
/// the polynomial `sum over the basis of t^{block count}`, plus its value at
/// the given `t`.
pub fn asymptotic_moment(k: usize, t: &Rational, flavor: Flavor) -> (RationalPolynomial, Rational) {
    let hist = block_count_histogram(k, flavor);
    let coeffs: Vec<Rational> = hist
        .iter()
        .map(|&c| Rational::from_integer(BigInt::from(c)))
        .collect();
    let poly = RationalPolynomial::from_coeffs(coeffs);
    let value = poly.eval(t);
    (poly, value)
}

/// A 1-based inclusive index range `lo..=hi` inside `{1..n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

fn validate_intervals(intervals: &[Interval], n: i64) -> Result<()> {
    let mut taken = vec![false; n as usize + 1];
    for iv in intervals {
        if iv.lo == 0 || iv.hi < iv.lo || iv.hi as i64 > n {
            return Err(Error::BadIntervals { n });
        }
        for x in iv.lo..=iv.hi {
            if taken[x] {
                return Err(Error::BadIntervals { n });
            }
            taken[x] = true;
        }
    }
    Ok(())
}

/// Exact mixed moment of truncated characters over disjoint diagonal
/// intervals: position `m` of the monomial ranges over interval
/// `intervals[pattern[m]]`. Summing the monomial integrals over all diagonal
/// multi-indices collapses to a product over join blocks: a block contributes
/// the interval length when its positions share one label, else 0.
pub fn mixed_character_moment(
    pattern: &[usize],
    intervals: &[Interval],
    n: i64,
    flavor: Flavor,
) -> Result<Rational> {
    validate_intervals(intervals, n)?;
    for &label in pattern {
        if label >= intervals.len() {
            return Err(Error::UnknownIntervalLabel {
                label,
                count: intervals.len(),
            });
        }
    }
    let k = pattern.len();
    let pair = weingarten_matrix(k, n, flavor)?;
    let w = match pair.weingarten.as_ref() {
        Some(w) if !pair.basis.is_empty() => w,
        _ => return Ok(Rational::from_integer(0.into())),
    };
    let m = pair.basis.len();
    let mut total = Rational::from_integer(0.into());
    for pi in 0..m {
        for qi in 0..m {
            let join = pair.basis[pi].join(&pair.basis[qi])?;
            let mut coupling = BigInt::from(1);
            for block in join.blocks() {
                let label = pattern[block[0] - 1];
                if block.iter().any(|&x| pattern[x - 1] != label) {
                    coupling = BigInt::from(0);
                    break;
                }
                coupling *= BigInt::from(intervals[label].len());
            }
            if coupling != BigInt::from(0) {
                total += w[(pi, qi)].clone() * Rational::from_integer(coupling);
            }
        }
    }
    Ok(total)
}

/// Reference route for [`mixed_character_moment`]: the raw sum of monomial
/// integrals over every admissible diagonal multi-index. Exponential in `k`;
/// used to cross-validate the product formula.
pub fn mixed_character_moment_by_enumeration(
    pattern: &[usize],
    intervals: &[Interval],
    n: i64,
    flavor: Flavor,
) -> Result<Rational> {
    validate_intervals(intervals, n)?;
    let k = pattern.len();
    let mut total = Rational::from_integer(0.into());
    let mut index: Vec<usize> = pattern
        .iter()
        .map(|&c| {
            intervals
                .get(c)
                .map(|iv| iv.lo)
                .ok_or(Error::UnknownIntervalLabel {
                    label: c,
                    count: intervals.len(),
                })
        })
        .collect::<Result<_>>()?;
    loop {
        total += integrate_monomial(&index, &index, n, flavor)?;
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(total);
            }
            index[pos] += 1;
            if index[pos] <= intervals[pattern[pos]].hi {
                break;
            }
            index[pos] = intervals[pattern[pos]].lo;
            pos += 1;
        }
    }
}
