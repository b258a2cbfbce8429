//! Spectral facts about the hypercube graph, verified in exact integer
//! arithmetic: the sign-character eigenvectors of the adjacency matrix, their
//! binomial multiplicities, and the collapse of the distance-matrix algebra
//! onto powers of the adjacency matrix.

use std::collections::BTreeMap;

use crate::exactalg::{Rational, RationalMatrix};
use crate::{Error, Result};

/// The graph on all 0/1 words of length `n`, with edges between words at
/// Hamming distance 1. Vertices are encoded as the integers `0..2^n`.
#[derive(Debug, Clone, Copy)]
pub struct CubeGraph {
    n: usize,
}

impl CubeGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::OutOfRange(format!("cube dimension {n} out of 1..=16")));
        }
        Ok(Self { n })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        (u ^ v).is_power_of_two()
    }

    /// Hamming distance between two vertices.
    pub fn distance(&self, u: usize, v: usize) -> u32 {
        (u ^ v).count_ones()
    }

    /// Adjacency action on a vertex-indexed vector: sums over neighbors.
    fn apply_adjacency(&self, v: &[i64]) -> Vec<i64> {
        let size = self.vertex_count();
        let mut out = vec![0i64; size];
        for (p, slot) in out.iter_mut().enumerate() {
            for bit in 0..self.n {
                *slot += v[p ^ (1 << bit)];
            }
        }
        out
    }

    /// 0/1 adjacency matrix of the distance-`l` class: entry `(u, v)` is 1
    /// exactly when the Hamming distance is `l`.
    fn distance_matrix(&self, l: u32) -> Vec<i64> {
        let size = self.vertex_count();
        let mut m = vec![0i64; size * size];
        for u in 0..size {
            for v in 0..size {
                if self.distance(u, v) == l {
                    m[u * size + v] = 1;
                }
            }
        }
        m
    }
}

/// Outcome of the exact eigenvector sweep.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub n: usize,
    /// Eigenvalue -> multiplicity, over all `2^n` sign characters.
    pub multiplicities: BTreeMap<i64, u64>,
    /// Number of eigenvector identities that held exactly.
    pub verified: u64,
    pub all_verified: bool,
}

/// Checks `A v = lambda v` exactly for every sign-character vector
/// `v_i[j] = (-1)^{|i & j|}` with eigenvalue `n - 2 |i|`, and tallies the
/// eigenvalue multiplicities.
pub fn spectrum_check(n: usize) -> Result<SpectrumReport> {
    if n > 10 {
        return Err(Error::OutOfRange(format!(
            "spectrum sweep is 2^n * 2^n work; n={n} exceeds 10"
        )));
    }
    let cube = CubeGraph::new(n)?;
    let size = cube.vertex_count();
    let mut multiplicities: BTreeMap<i64, u64> = BTreeMap::new();
    let mut verified = 0u64;
    let mut vector = vec![0i64; size];
    for character in 0..size {
        for (j, slot) in vector.iter_mut().enumerate() {
            *slot = if (character & j).count_ones() % 2 == 0 {
                1
            } else {
                -1
            };
        }
        let eigenvalue = n as i64 - 2 * character.count_ones() as i64;
        let image = cube.apply_adjacency(&vector);
        if image.iter().zip(&vector).all(|(&a, &v)| a == eigenvalue * v) {
            verified += 1;
        }
        *multiplicities.entry(eigenvalue).or_insert(0) += 1;
    }
    Ok(SpectrumReport {
        n,
        multiplicities,
        verified,
        all_verified: verified == size as u64,
    })
}

/// Outcome of the distance-algebra collapse check.
#[derive(Debug, Clone)]
pub struct DistanceAlgebraReport {
    pub n: usize,
    /// `walk_coefficients[m][l]` expands the m-th adjacency power over the
    /// distance classes: the number of length-`m` walks between vertices at
    /// distance `l`.
    pub walk_coefficients: Vec<Vec<i64>>,
    /// Each power was constant on every distance class.
    pub class_constant: bool,
    /// Coefficients vanish above the triangular cut `l > m`.
    pub triangular: bool,
    pub coefficients_nonnegative: bool,
    /// Distance classes commute pairwise.
    pub pairwise_commute: bool,
    /// Powers of the adjacency matrix and the distance classes span the same
    /// rational space.
    pub spans_equal: bool,
}

/// Expands the powers `A^m`, `m <= n`, of the cube adjacency matrix over the
/// distance-class basis and verifies the algebra generated by the distance
/// matrix equals the one generated by adjacency alone.
pub fn distance_algebra_check(n: usize) -> Result<DistanceAlgebraReport> {
    if !(2..=6).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "distance algebra check runs dense 2^n matrices; n={n} outside 2..=6"
        )));
    }
    let cube = CubeGraph::new(n)?;
    let size = cube.vertex_count();
    let classes: Vec<Vec<i64>> = (0..=n as u32).map(|l| cube.distance_matrix(l)).collect();

    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; size * size];
        for i in 0..size {
            for k in 0..size {
                let x = a[i * size + k];
                if x == 0 {
                    continue;
                }
                for j in 0..size {
                    out[i * size + j] += x * b[k * size + j];
                }
            }
        }
        out
    };

    // representative vertex pair per distance: (0, mask with l low bits)
    let class_rep = |l: usize| -> usize { (1usize << l) - 1 };

    let mut walk_coefficients = Vec::with_capacity(n + 1);
    let mut class_constant = true;
    let mut power = classes[0].clone(); // A^0 = identity
    for m in 0..=n {
        if m > 0 {
            power = mul(&power, &classes[1]);
        }
        let mut row = Vec::with_capacity(n + 1);
        for l in 0..=n {
            let coefficient = power[class_rep(l)];
            // the expansion is valid only if the power is constant per class
            for u in 0..size {
                for v in 0..size {
                    if cube.distance(u, v) == l as u32 && power[u * size + v] != coefficient {
                        class_constant = false;
                    }
                }
            }
            row.push(coefficient);
        }
        walk_coefficients.push(row);
    }

    let triangular = walk_coefficients
        .iter()
        .enumerate()
        .all(|(m, row)| row.iter().enumerate().all(|(l, &c)| l <= m || c == 0));
    let coefficients_nonnegative = walk_coefficients
        .iter()
        .flatten()
        .all(|&c| c >= 0);

    let pairwise_commute = (0..=n).all(|a| {
        (a + 1..=n).all(|b| mul(&classes[a], &classes[b]) == mul(&classes[b], &classes[a]))
    });

    // The distance classes are disjointly supported, hence independent; the
    // two spans coincide exactly when the coefficient matrix is invertible.
    let coefficient_matrix = RationalMatrix::from_fn(n + 1, n + 1, |m, l| {
        Rational::from_integer(walk_coefficients[m][l].into())
    });
    let spans_equal = class_constant && coefficient_matrix.inverse().is_ok();

    Ok(DistanceAlgebraReport {
        n,
        walk_coefficients,
        class_constant,
        triangular,
        coefficients_nonnegative,
        pairwise_commute,
        spans_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_cube_spectrum() {
        let report = spectrum_check(1).unwrap();
        assert!(report.all_verified);
        assert_eq!(report.multiplicities, [(1, 1), (-1, 1)].into());
    }

    #[test]
    fn three_cube_spectrum() {
        let report = spectrum_check(3).unwrap();
        assert!(report.all_verified);
        assert_eq!(
            report.multiplicities,
            [(3, 1), (1, 3), (-1, 3), (-3, 1)].into()
        );
    }

    #[test]
    fn multiplicities_are_binomial() {
        for n in 1..=7usize {
            let report = spectrum_check(n).unwrap();
            assert!(report.all_verified);
            let mut total = 0u64;
            for j in 0..=n {
                let eig = n as i64 - 2 * j as i64;
                let binom: u64 = (0..j).fold(1, |acc, i| acc * (n - i) as u64 / (i + 1) as u64);
                assert_eq!(report.multiplicities[&eig], binom, "n={n} j={j}");
                total += binom;
            }
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn square_distance_expansion() {
        let report = distance_algebra_check(2).unwrap();
        // A^2 = 2 I + 2 d_2 on the square
        assert_eq!(report.walk_coefficients[2], vec![2, 0, 2]);
        assert!(report.class_constant);
        assert!(report.spans_equal);
    }

    #[test]
    fn three_cube_walk_coefficients() {
        let report = distance_algebra_check(3).unwrap();
        // two common neighbors at distance 2
        assert_eq!(report.walk_coefficients[2][2], 2);
        // bipartite parity: odd powers only reach odd distances
        assert_eq!(report.walk_coefficients[3][0], 0);
        assert_eq!(report.walk_coefficients[3][2], 0);
        assert!(report.triangular);
    }

    #[test]
    fn algebra_collapses_up_to_six() {
        for n in 2..=6usize {
            let report = distance_algebra_check(n).unwrap();
            assert!(report.class_constant, "n={n}");
            assert!(report.triangular, "n={n}");
            assert!(report.coefficients_nonnegative, "n={n}");
            assert!(report.pairwise_commute, "n={n}");
            assert!(report.spans_equal, "n={n}");
            // diagonal walk counts are the factorials
            for m in 0..=n {
                let factorial: i64 = (1..=m as i64).product();
                assert_eq!(report.walk_coefficients[m][m], factorial);
            }
        }
    }

    #[test]
    fn out_of_range_dimensions_rejected() {
        assert!(spectrum_check(11).is_err());
        assert!(distance_algebra_check(1).is_err());
        assert!(distance_algebra_check(7).is_err());
    }
}
