use std::collections::BTreeMap;

/// Truncated series for the Bessel function of the first kind in the
/// normalization used throughout: `f_k(x) = sum_p x^{k+2p} / ((k+p)! p!)`.
/// Terms are nonnegative for `x >= 0`, so the value is monotone in `pmax`.
pub fn bessel_first_kind(k: u32, x: f64, pmax: u32) -> f64 {
    // term_0 = x^k / k!, term_{p+1} = term_p * x^2 / ((k+p+1)(p+1))
    let mut term = 1.0f64;
    for i in 1..=k {
        term *= x / i as f64;
    }
    let mut total = term;
    for p in 0..pmax {
        term *= x * x / ((k + p + 1) as f64 * (p + 1) as f64);
        total += term;
    }
    total
}

/// Finitely supported measure on the integer lattice with nonnegative
/// double-precision weights. Truncation metadata records how the measure was
/// cut off; `mass_deficit` is the mass lost to truncation.
#[derive(Debug, Clone)]
pub struct AtomicMeasure {
    atoms: BTreeMap<i64, f64>,
    kmax: i64,
    pmax: u32,
    mass_deficit: f64,
}

impl AtomicMeasure {
    pub fn from_weights(atoms: BTreeMap<i64, f64>, kmax: i64, pmax: u32) -> Self {
        debug_assert!(atoms.values().all(|&w| w >= 0.0));
        let total: f64 = atoms.values().sum();
        Self {
            atoms,
            kmax,
            pmax,
            mass_deficit: 1.0 - total,
        }
    }

    /// Point mass at `k`.
    pub fn dirac(k: i64) -> Self {
        Self::from_weights([(k, 1.0)].into(), k.abs(), 0)
    }

    pub fn weight(&self, k: i64) -> f64 {
        self.atoms.get(&k).copied().unwrap_or(0.0)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.atoms.iter().map(|(&k, &w)| (k, w))
    }

    pub fn support_bound(&self) -> i64 {
        self.kmax
    }

    pub fn series_depth(&self) -> u32 {
        self.pmax
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.values().sum()
    }

    pub fn mass_deficit(&self) -> f64 {
        self.mass_deficit
    }

    /// Raw moment `sum_k k^r w_k`.
    pub fn moment(&self, r: u32) -> f64 {
        self.atoms
            .iter()
            .map(|(&k, &w)| (k as f64).powi(r as i32) * w)
            .sum()
    }

    /// Largest absolute weight difference over the union of supports.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        let mut keys: Vec<i64> = self.atoms.keys().copied().collect();
        keys.extend(other.atoms.keys());
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|k| (self.weight(k) - other.weight(k)).abs())
            .fold(0.0, f64::max)
    }

    /// True when the weight at `-k` equals the weight at `k` up to `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.atoms
            .iter()
            .all(|(&k, &w)| (w - self.weight(-k)).abs() <= tol)
    }
}

/// The integer-lattice Bessel law at time `t`: weight `e^{-t} f_{|k|}(t/2)`
/// at each `k` with `|k| <= kmax`, each series summed to depth `pmax`. The
/// lost mass shows up as the measure's reported deficit.
pub fn classical_bessel(t: f64, kmax: i64, pmax: u32) -> AtomicMeasure {
    let scale = (-t).exp();
    let mut atoms = BTreeMap::new();
    for k in -kmax..=kmax {
        atoms.insert(k, scale * bessel_first_kind(k.unsigned_abs() as u32, t / 2.0, pmax));
    }
    AtomicMeasure::from_weights(atoms, kmax, pmax)
}

/// Discrete convolution; the support is the sumset.
pub fn convolve(a: &AtomicMeasure, b: &AtomicMeasure) -> AtomicMeasure {
    let mut atoms: BTreeMap<i64, f64> = BTreeMap::new();
    for (ka, wa) in a.atoms() {
        if wa == 0.0 {
            continue;
        }
        for (kb, wb) in b.atoms() {
            *atoms.entry(ka + kb).or_insert(0.0) += wa * wb;
        }
    }
    let kmax = a.support_bound() + b.support_bound();
    let pmax = a.series_depth().min(b.series_depth());
    AtomicMeasure::from_weights(atoms, kmax, pmax)
}

/// Two-sided transform `sum_k w_k e^{ky}` (real exponent).
pub fn fourier(m: &AtomicMeasure, y: f64) -> f64 {
    m.atoms().map(|(k, w)| w * (k as f64 * y).exp()).sum()
}
