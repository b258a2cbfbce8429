use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::exactalg::{FormalSeries, Rational, RationalPolynomial};
use crate::{Error, Result};

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `binom(3k, k) / (2k + 1)`: the number of even-block non-crossing diagrams
/// on `2k` points.
pub fn fuss_catalan(k: u64) -> BigInt {
    if k == 0 {
        return BigInt::from(1);
    }
    let (q, r) = binomial(3 * k, k).div_rem(&BigInt::from(2 * k + 1));
    debug_assert!(r.is_zero());
    q
}

/// `F(k, b) = (1/b) binom(k-1, b-1) binom(2k, b-1)`: the number of even-block
/// non-crossing diagrams on `2k` points with exactly `b` blocks.
pub fn fuss_narayana(k: u64, b: u64) -> Result<BigInt> {
    if k == 0 || b == 0 || b > k {
        return Err(Error::OutOfRange(format!(
            "block count {b} out of range 1..={k}"
        )));
    }
    let (q, r) = (binomial(k - 1, b - 1) * binomial(2 * k, b - 1)).div_rem(&BigInt::from(b));
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Moment of the free Bessel law as an exact polynomial in `t`: zero at odd
/// orders, `sum_b F(k, b) t^b` at order `2k`.
pub fn free_bessel_moment(order: usize) -> RationalPolynomial {
    if order % 2 != 0 {
        return RationalPolynomial::zero();
    }
    let k = (order / 2) as u64;
    let mut coeffs = vec![Rational::zero(); k as usize + 1];
    for b in 1..=k {
        coeffs[b as usize] = Rational::from_integer(fuss_narayana(k, b).expect("in range"));
    }
    RationalPolynomial::from_coeffs(coeffs)
}

/// Moments indexed `1..=order`, each an exact polynomial in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    values: Vec<RationalPolynomial>,
}

/// Free cumulants indexed `1..=order`, each an exact polynomial in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulantSequence {
    values: Vec<RationalPolynomial>,
}

macro_rules! sequence_impl {
    ($name:ident) => {
        impl $name {
            pub fn from_values(values: Vec<RationalPolynomial>) -> Self {
                Self { values }
            }

            pub fn order(&self) -> usize {
                self.values.len()
            }

            /// 1-based accessor; zero past the stored order.
            pub fn get(&self, order: usize) -> RationalPolynomial {
                assert!(order >= 1, "orders are 1-based");
                self.values
                    .get(order - 1)
                    .cloned()
                    .unwrap_or_else(RationalPolynomial::zero)
            }

            pub fn values(&self) -> &[RationalPolynomial] {
                &self.values
            }

            pub fn zero(order: usize) -> Self {
                Self {
                    values: vec![RationalPolynomial::zero(); order],
                }
            }

            /// Specializes every entry at a concrete `t`.
            pub fn eval(&self, t: &Rational) -> Self {
                Self {
                    values: self
                        .values
                        .iter()
                        .map(|p| RationalPolynomial::constant(p.eval(t)))
                        .collect(),
                }
            }

            /// Coefficient lists in the `"p/q"` wire form, one per order.
            pub fn wire_values(&self) -> Vec<Vec<String>> {
                self.values.iter().map(|p| p.wire_coeffs()).collect()
            }
        }
    };
}
sequence_impl!(MomentSequence);
sequence_impl!(CumulantSequence);

impl MomentSequence {
    /// Free Bessel moments through the given order, symbolic in `t`.
    pub fn free_bessel(order: usize) -> Self {
        Self::from_values((1..=order).map(free_bessel_moment).collect())
    }

    /// Standard semicircle moments: Catalan numbers at even orders.
    pub fn semicircle(order: usize) -> Self {
        Self::from_values(
            (1..=order)
                .map(|m| {
                    if m % 2 != 0 {
                        return RationalPolynomial::zero();
                    }
                    let j = (m / 2) as u64;
                    let (q, r) = binomial(2 * j, j).div_rem(&BigInt::from(j + 1));
                    debug_assert!(r.is_zero());
                    RationalPolynomial::constant(Rational::from_integer(q))
                })
                .collect(),
        )
    }
}

impl CumulantSequence {
    /// The free Bessel cumulant profile: `t` at even orders, zero at odd.
    pub fn free_bessel(order: usize) -> Self {
        Self::from_values(
            (1..=order)
                .map(|m| {
                    if m % 2 == 0 {
                        RationalPolynomial::variable()
                    } else {
                        RationalPolynomial::zero()
                    }
                })
                .collect(),
        )
    }
}

/// Generating series `1 + sum m_k z^k` of a moment sequence, at the given
/// truncation order.
fn moment_series(m: &MomentSequence, order: usize) -> FormalSeries {
    let mut f = FormalSeries::one(order);
    for k in 1..=order.min(m.order()) {
        f.set_coeff(k, m.get(k));
    }
    f
}

/// Free cumulants from moments via the non-crossing recursion: the block of
/// the first point splits the rest into independent gaps, giving
/// `m_k = sum_s kappa_s [z^{k-s}] M(z)^s` with `M` the moment series.
pub fn moments_to_free_cumulants(m: &MomentSequence) -> CumulantSequence {
    let order = m.order();
    let series = moment_series(m, order);
    // powers[s] = M^{s+1}, truncated
    let mut powers = Vec::with_capacity(order);
    let mut acc = series.clone();
    for _ in 0..order {
        powers.push(acc.clone());
        acc = acc.mul(&series);
    }
    let mut cumulants: Vec<RationalPolynomial> = Vec::with_capacity(order);
    for k in 1..=order {
        let mut value = m.get(k);
        for (s, kappa) in cumulants.iter().enumerate().map(|(i, c)| (i + 1, c)) {
            value = &value - &(kappa * &powers[s - 1].coeff(k - s));
        }
        cumulants.push(value);
    }
    CumulantSequence::from_values(cumulants)
}

/// Moments from free cumulants: the same recursion run forward. Round-trips
/// exactly with [`moments_to_free_cumulants`].
pub fn free_cumulants_to_moments(c: &CumulantSequence) -> MomentSequence {
    let order = c.order();
    let mut moments: Vec<RationalPolynomial> = Vec::with_capacity(order);
    for k in 1..=order {
        let partial = moment_series(&MomentSequence::from_values(moments.clone()), order);
        let mut power = partial.clone();
        let mut value = RationalPolynomial::zero();
        for s in 1..=k {
            // power = partial^s here; only degrees < k are read, which are
            // already final.
            value = &value + &(&c.get(s) * &power.coeff(k - s));
            if s < k {
                power = power.mul(&partial);
            }
        }
        moments.push(value);
    }
    MomentSequence::from_values(moments)
}

/// The R-transform of a moment sequence, through `z^{order-1}` (cumulants
/// through the given order). The Cauchy-transform pipeline is run entirely on
/// ordinary truncated series: with `phi(z) = z f(z)` (so `phi(1/xi) = G(xi)`),
/// the compositional inverse `kappa = phi^{-1}` satisfies `K(z) = 1/kappa(z)`,
/// and `R(z) = (z/kappa(z) - 1)/z`.
pub fn r_transform(m: &MomentSequence, order: usize) -> Result<FormalSeries> {
    if order == 0 {
        return Ok(FormalSeries::zero(0));
    }
    let work = order + 1;
    let f = moment_series(m, work - 1).truncate(work);
    let phi = f.shift_up(1);
    let kappa = phi.compose_inverse()?;
    let z_over_kappa = kappa.shift_down(1)?.reciprocal()?;
    let zr = z_over_kappa.sub(&FormalSeries::one(order));
    zr.shift_down(1)
}

/// Self-check report for the free Bessel generating series.
#[derive(Debug, Clone)]
pub struct GeneratingReport {
    pub order: usize,
    /// `g - 1 - z g^3 - (t-1) z g^2` vanishes through the order.
    pub cubic_residual_zero: bool,
    /// `f - 1 - (z f)^2 (f + t - 1)` vanishes for `f(z) = g(z^2)`, through
    /// twice the order.
    pub substituted_residual_zero: bool,
}

/// Builds the block-counting generating series `g = sum_k P_k z^k` of the
/// free Bessel law from its gap recursion (`P_0 = 1`; removing the first
/// block's last two legs splits a diagram into three independent pieces),
/// and verifies the cubic functional equation it must satisfy.
pub fn free_bessel_generating(order: usize) -> (FormalSeries, GeneratingReport) {
    let t = RationalPolynomial::variable();
    let t_minus_1 = &t - &RationalPolynomial::one();
    let mut p: Vec<RationalPolynomial> = vec![RationalPolynomial::one()];
    for k in 0..order {
        let mut next = RationalPolynomial::zero();
        for x0 in 0..=k {
            for x1 in 0..=k - x0 {
                let x2 = k - x0 - x1;
                next = &next + &(&(&p[x0] * &p[x1]) * &p[x2]);
            }
        }
        let mut correction = RationalPolynomial::zero();
        for x1 in 0..=k {
            correction = &correction + &(&p[x1] * &p[k - x1]);
        }
        next = &next + &(&t_minus_1 * &correction);
        p.push(next);
    }
    let g = FormalSeries::from_coeffs(order, p);

    // residual of g - 1 - z g^3 - (t-1) z g^2
    let g2 = g.mul(&g);
    let g3 = g2.mul(&g);
    let residual = g
        .sub(&FormalSeries::one(order))
        .sub(&g3.shift_up(1))
        .sub(&g2.scale_poly(&t_minus_1).shift_up(1));

    // residual of f - 1 - (z f)^2 (f + t - 1) for f(z) = g(z^2)
    let doubled = 2 * order;
    let mut f = FormalSeries::zero(doubled);
    for k in 0..=order {
        f.set_coeff(2 * k, g.coeff(k));
    }
    let zf = f.shift_up(1);
    let zf2 = zf.mul(&zf);
    let mut f_plus = f.clone();
    f_plus.set_coeff(0, &f.coeff(0) + &t_minus_1);
    let residual_f = f.sub(&FormalSeries::one(doubled)).sub(&zf2.mul(&f_plus));

    let report = GeneratingReport {
        order,
        cubic_residual_zero: residual.is_zero(),
        substituted_residual_zero: residual_f.is_zero(),
    };
    (g, report)
}

/// Moments of the free convolution: cumulants add.
pub fn free_convolve(a: &CumulantSequence, b: &CumulantSequence) -> Result<MomentSequence> {
    if a.order() != b.order() {
        return Err(Error::SizeMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    let summed = CumulantSequence::from_values(
        (1..=a.order()).map(|k| &a.get(k) + &b.get(k)).collect(),
    );
    Ok(free_cumulants_to_moments(&summed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};
    use crate::partitions::{block_count_histogram, count_nc, Flavor};

    fn poly(cs: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_coeffs(cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn fuss_narayana_values() {
        assert_eq!(fuss_narayana(1, 1).unwrap(), BigInt::from(1));
        assert_eq!(fuss_narayana(2, 2).unwrap(), BigInt::from(2));
        assert_eq!(fuss_narayana(3, 2).unwrap(), BigInt::from(6));
        assert!(fuss_narayana(3, 4).is_err());
        assert!(fuss_narayana(3, 0).is_err());
    }

    #[test]
    fn fuss_narayana_counts_match_enumeration() {
        for k in 1..=6u64 {
            let hist = block_count_histogram(2 * k as usize, Flavor::H);
            for b in 1..=k {
                assert_eq!(
                    fuss_narayana(k, b).unwrap(),
                    BigInt::from(hist[b as usize]),
                    "F({k},{b})"
                );
            }
            let total: BigInt = (1..=k).map(|b| fuss_narayana(k, b).unwrap()).sum();
            assert_eq!(total, fuss_catalan(k));
            assert_eq!(fuss_catalan(k), BigInt::from(count_nc(2 * k as usize, Flavor::H)));
        }
    }

    #[test]
    fn free_bessel_moments() {
        assert_eq!(free_bessel_moment(2), poly(&[0, 1]));
        assert_eq!(free_bessel_moment(3), RationalPolynomial::zero());
        assert_eq!(free_bessel_moment(4), poly(&[0, 1, 2]));
        assert_eq!(free_bessel_moment(6), poly(&[0, 1, 6, 5]));
    }

    #[test]
    fn bessel_cumulants_are_flat() {
        let moments = MomentSequence::free_bessel(16);
        let cumulants = moments_to_free_cumulants(&moments);
        assert_eq!(cumulants, CumulantSequence::free_bessel(16));
    }

    #[test]
    fn zero_and_semicircle_cumulants() {
        let zero = moments_to_free_cumulants(&MomentSequence::zero(10));
        assert_eq!(zero, CumulantSequence::zero(10));

        // semicircle oracle: even moments are the non-crossing pairing counts
        let sc = MomentSequence::semicircle(12);
        for m in 1..=12usize {
            assert_eq!(
                sc.get(m),
                RationalPolynomial::constant(rat(count_nc(m, Flavor::O) as i64))
            );
        }
        let cumulants = moments_to_free_cumulants(&sc);
        for m in 1..=12usize {
            let expect = if m == 2 {
                RationalPolynomial::one()
            } else {
                RationalPolynomial::zero()
            };
            assert_eq!(cumulants.get(m), expect, "kappa_{m}");
        }
    }

    #[test]
    fn moment_cumulant_round_trip() {
        let moments = MomentSequence::free_bessel(12);
        let back = free_cumulants_to_moments(&moments_to_free_cumulants(&moments));
        assert_eq!(back, moments);
    }

    #[test]
    fn r_transform_of_free_bessel() {
        let r = r_transform(&MomentSequence::free_bessel(16), 16).unwrap();
        for j in 0..=15usize {
            let expect = if j % 2 == 1 {
                RationalPolynomial::variable()
            } else {
                RationalPolynomial::zero()
            };
            assert_eq!(r.coeff(j), expect, "coefficient of z^{j}");
        }
    }

    #[test]
    fn r_transform_degenerate_and_cross_check() {
        let r = r_transform(&MomentSequence::zero(8), 8).unwrap();
        assert!(r.is_zero());

        // coefficient of z^{k-1} in R equals kappa_k, independently computed
        let moments = MomentSequence::semicircle(10);
        let r = r_transform(&moments, 10).unwrap();
        let kappa = moments_to_free_cumulants(&moments);
        for k in 1..=10usize {
            assert_eq!(r.coeff(k - 1), kappa.get(k), "kappa_{k}");
        }
    }

    #[test]
    fn generating_series_and_residuals() {
        let (g, report) = free_bessel_generating(12);
        assert_eq!(g.coeff(0), RationalPolynomial::one());
        assert_eq!(g.coeff(1), poly(&[0, 1]));
        assert_eq!(g.coeff(2), poly(&[0, 1, 2]));
        assert_eq!(g.coeff(3), poly(&[0, 1, 6, 5]));
        assert!(report.cubic_residual_zero);
        assert!(report.substituted_residual_zero);
        // block-count coefficients match the closed form
        for k in 1..=12usize {
            assert_eq!(g.coeff(k), free_bessel_moment(2 * k), "P_{k}");
        }
    }

    #[test]
    fn free_convolution_semigroup_in_one_variable() {
        let order = 12;
        let c = CumulantSequence::free_bessel(order);
        let doubled = free_convolve(&c, &c).unwrap();
        // moments of the doubled-time law: substitute t -> 2t
        let expect = MomentSequence::from_values(
            (1..=order)
                .map(|m| free_bessel_moment(m).scale_variable(&rat(2)))
                .collect(),
        );
        assert_eq!(doubled, expect);

        let zero = CumulantSequence::zero(order);
        assert_eq!(
            free_convolve(&c, &zero).unwrap(),
            free_cumulants_to_moments(&c)
        );
        assert!(free_convolve(&c, &CumulantSequence::zero(3)).is_err());
    }

    #[test]
    fn semicircle_doubles_variance_under_free_convolution() {
        let sc = moments_to_free_cumulants(&MomentSequence::semicircle(12));
        let doubled = free_convolve(&sc, &sc).unwrap();
        for j in 1..=6usize {
            // order-2j moment scales by 2^j
            let expect = MomentSequence::semicircle(12).get(2 * j).scale(&rat(1 << j));
            assert_eq!(doubled.get(2 * j), expect);
            assert!(doubled.get(2 * j - 1).is_zero());
        }
    }

    #[test]
    fn specialization_at_rational_time() {
        let moments = MomentSequence::free_bessel(6).eval(&ratio(1, 2));
        assert_eq!(moments.get(2), RationalPolynomial::constant(ratio(1, 2)));
        assert_eq!(moments.get(4), RationalPolynomial::constant(rat(1)));
    }
}
