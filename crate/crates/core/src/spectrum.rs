//! Exact Slater spectrum by layered dynamic programming over subsets.
//!
//! For a subset `I'` the polynomial `G(u; I') = sum over orders of I' of u^C(order)`
//! satisfies `G(u; I') = sum_{e in I'} u^{d_e(I')} G(u; I' \ e)`, where
//! `d_e(I')` is the number of wins of `e` against the rest of `I'`. Only two
//! consecutive layers (subsets of size `k - 1` and `k`) are ever resident.

use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::ResultMatrix;
use crate::subset::{k_subsets, removal_ranks, Binomials, CrossTable};
use crate::Limits;

/// Counts of orders by inconsistency index: `a[t]` orders disagree with
/// exactly `t` of the `T` observed comparisons.
#[derive(Clone, PartialEq, Eq)]
pub struct SlaterSpectrum {
    objects: Option<usize>,
    coefficients: Vec<BigUint>,
    s_hat: u64,
}

impl SlaterSpectrum {
    /// Spectrum of an `m`-object matrix. Checks mass (`sum = m!`) and symmetry.
    pub fn from_counts(m: usize, coefficients: Vec<BigUint>) -> Result<Self> {
        let spectrum = Self::from_coefficients(coefficients)?;
        let mass: BigUint = spectrum.coefficients.iter().sum();
        if mass != factorial(m) {
            return Err(Error::invalid(format!(
                "spectrum mass {} differs from {}!",
                mass, m
            )));
        }
        Ok(SlaterSpectrum {
            objects: Some(m),
            ..spectrum
        })
    }

    /// A symmetric, non-zero coefficient sequence without an associated object count.
    pub fn from_coefficients(coefficients: Vec<BigUint>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("spectrum needs at least one coefficient"));
        }
        let n = coefficients.len();
        for t in 0..n / 2 {
            if coefficients[t] != coefficients[n - 1 - t] {
                return Err(Error::invalid(format!(
                    "spectrum is not symmetric: a[{}] = {} but a[{}] = {}",
                    t,
                    coefficients[t],
                    n - 1 - t,
                    coefficients[n - 1 - t]
                )));
            }
        }
        let s_hat = coefficients
            .iter()
            .position(|a| !a.is_zero())
            .ok_or_else(|| Error::invalid("spectrum has no non-zero coefficient"))?
            as u64;
        Ok(SlaterSpectrum {
            objects: None,
            coefficients,
            s_hat,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_u64(coefficients: &[u64]) -> Result<Self> {
        Self::from_coefficients(coefficients.iter().map(|&a| BigUint::from(a)).collect())
    }

    /// The two-term spectrum keeping only `a[s_hat]` and `a[T - s_hat]`.
    pub fn degenerate(s_hat: u64, total: u64, a_s: BigUint) -> Result<Self> {
        if 2 * s_hat > total {
            return Err(Error::invalid(format!(
                "Slater index {} exceeds half of {} comparisons",
                s_hat, total
            )));
        }
        if a_s.is_zero() {
            return Err(Error::invalid("a[s_hat] must be positive"));
        }
        let mut coefficients = vec![BigUint::zero(); total as usize + 1];
        coefficients[s_hat as usize] = a_s.clone();
        coefficients[(total - s_hat) as usize] = a_s;
        Self::from_coefficients(coefficients)
    }

    /// Same spectrum truncated to its two end coefficients.
    pub fn to_degenerate(&self) -> SlaterSpectrum {
        Self::degenerate(self.s_hat, self.total(), self.a_s_hat().clone())
            .expect("a valid spectrum has a valid degenerate form")
    }

    /// Total comparisons `T`.
    pub fn total(&self) -> u64 {
        self.coefficients.len() as u64 - 1
    }

    /// Slater index: smallest `t` with `a[t] > 0`.
    pub fn s_hat(&self) -> u64 {
        self.s_hat
    }

    /// Number of optimal orders, `a[s_hat]`.
    pub fn a_s_hat(&self) -> &BigUint {
        &self.coefficients[self.s_hat as usize]
    }

    pub fn objects(&self) -> Option<usize> {
        self.objects
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coefficients
    }

    pub fn coefficient(&self, t: u64) -> &BigUint {
        &self.coefficients[t as usize]
    }

    /// Inclusive index range `[s_hat, T - s_hat]` outside which all coefficients vanish.
    pub fn support(&self) -> std::ops::RangeInclusive<u64> {
        self.s_hat..=self.total() - self.s_hat
    }

    pub fn mass(&self) -> BigUint {
        self.coefficients.iter().sum()
    }

    /// Comma-separated decimal coefficients, e.g. `"0,3,6,6,6,3,0"`.
    pub fn to_decimal_string(&self) -> String {
        self.coefficients
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the output of [`to_decimal_string`](Self::to_decimal_string).
    pub fn parse_decimal(s: &str) -> Result<Self> {
        let coefficients = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<BigUint>()
                    .map_err(|_| Error::invalid(format!("bad coefficient '{}'", x)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coefficients(coefficients)
    }

    /// `(ln a_t, t)` for every non-zero coefficient in the support.
    pub fn log_terms(&self) -> Vec<(f64, u64)> {
        self.support()
            .filter_map(|t| {
                let a = &self.coefficients[t as usize];
                (!a.is_zero()).then(|| (ln_biguint(a), t))
            })
            .collect()
    }
}

impl fmt::Debug for SlaterSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SlaterSpectrum[{}]", self.to_decimal_string())
    }
}

pub fn factorial(m: usize) -> BigUint {
    (1..=m as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Natural log of a big integer from its top 64 bits and bit length.
pub fn ln_biguint(a: &BigUint) -> f64 {
    let bits = a.bits();
    if bits <= 64 {
        return (a.to_u64().expect("fits in 64 bits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (a >> shift).to_u64().expect("top 64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Coefficient storage used inside the recursion. Chosen per `M` so that
/// `M!` always fits; results are widened to [`BigUint`] at the end.
pub(crate) trait Coefficient:
    Clone + Send + Sync + Zero + One + for<'a> AddAssign<&'a Self>
{
    const BYTES: usize;
    fn into_big(self) -> BigUint;
}

impl Coefficient for u64 {
    const BYTES: usize = 8;
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Coefficient for u128 {
    const BYTES: usize = 16;
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Coefficient for BigUint {
    const BYTES: usize = 32;
    fn into_big(self) -> BigUint {
        self
    }
}

/// Largest `M` whose `M!` fits in `u64` / `u128`.
const U64_FACTORIAL_MAX: usize = 20;
const U128_FACTORIAL_MAX: usize = 34;

/// Spectrum of one subset, stored as `coeffs[i]` = coefficient of `u^(low + i)`.
/// Both ends of `coeffs` are non-zero.
#[derive(Clone, Debug)]
pub(crate) struct SubsetPoly<C> {
    low: u64,
    coeffs: Vec<C>,
}

impl<C: Coefficient> SubsetPoly<C> {
    fn unit() -> Self {
        SubsetPoly {
            low: 0,
            coeffs: vec![C::one()],
        }
    }

    fn degree(&self) -> u64 {
        self.low + self.coeffs.len() as u64 - 1
    }
}

/// Applies `G(u; I') = sum_e u^{d_e(I')} G(u; I' \ e)` for one subset.
fn combine<C: Coefficient>(
    mask: u64,
    prev: &[SubsetPoly<C>],
    table: &CrossTable,
    binom: &Binomials,
    scratch: &mut Vec<(usize, usize)>,
) -> SubsetPoly<C> {
    removal_ranks(mask, binom, scratch);
    let mut low = u64::MAX;
    let mut high = 0;
    for &(e, r) in scratch.iter() {
        let d = table.get(e, mask);
        let parent = &prev[r];
        low = low.min(d + parent.low);
        high = high.max(d + parent.degree());
    }
    let mut coeffs = vec![C::zero(); (high - low + 1) as usize];
    for &(e, r) in scratch.iter() {
        let d = table.get(e, mask);
        let parent = &prev[r];
        let start = (d + parent.low - low) as usize;
        for (slot, c) in coeffs[start..].iter_mut().zip(&parent.coeffs) {
            *slot += c;
        }
    }
    SubsetPoly { low, coeffs }
}

/// Builds the layer of `k`-subsets from the completed `(k-1)`-layer. Each
/// entry reads only `prev` and writes its own slot.
fn next_layer<C: Coefficient>(
    m: usize,
    k: usize,
    prev: &[SubsetPoly<C>],
    table: &CrossTable,
    binom: &Binomials,
) -> Vec<SubsetPoly<C>> {
    let masks = k_subsets(m, k);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        masks
            .par_iter()
            .map_init(Vec::new, |scratch, &mask| {
                combine(mask, prev, table, binom, scratch)
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut scratch = Vec::new();
        masks
            .iter()
            .map(|&mask| combine(mask, prev, table, binom, &mut scratch))
            .collect()
    }
}

fn run_recursion<C: Coefficient>(w: &ResultMatrix) -> Vec<BigUint> {
    let m = w.len();
    let table = CrossTable::new(w);
    let binom = Binomials::new(m);
    let mut layer: Vec<SubsetPoly<C>> = vec![SubsetPoly::unit(); m];
    for k in 2..=m {
        layer = next_layer(m, k, &layer, &table, &binom);
    }
    let top = layer
        .pop()
        .expect("the full set is the only subset of size M");
    debug_assert!(layer.is_empty());
    let mut out = vec![BigUint::zero(); w.total() as usize + 1];
    for (i, c) in top.coeffs.into_iter().enumerate() {
        out[top.low as usize + i] = c.into_big();
    }
    out
}

/// Rough peak memory of the two resident layers, in bytes.
pub fn estimate_spectrum_memory(w: &ResultMatrix) -> u128 {
    let m = w.len() as u128;
    if m < 2 {
        return 64;
    }
    let binom = Binomials::new(w.len());
    let half = w.len() / 2;
    let entries = binom.get(w.len(), half) as u128 + binom.get(w.len(), half + 1) as u128;
    let k = (half + 1) as u128;
    let width = w.total() as u128 * k * (k - 1) / (m * (m - 1)) + 1;
    let bytes = if w.len() <= U64_FACTORIAL_MAX {
        u64::BYTES
    } else if w.len() <= U128_FACTORIAL_MAX {
        u128::BYTES
    } else {
        BigUint::BYTES
    } as u128;
    entries * (width * bytes + 32)
}

pub(crate) fn format_bytes(bytes: u128) -> String {
    const UNITS: [&str; 5] = ["B", "KiB", "MiB", "GiB", "TiB"];
    let mut value = bytes as f64;
    let mut unit = 0;
    while value >= 1024.0 && unit + 1 < UNITS.len() {
        value /= 1024.0;
        unit += 1;
    }
    format!("{:.1} {}", value, UNITS[unit])
}

/// Exact Slater spectrum of `w` with default [`Limits`].
pub fn slater_spectrum(w: &ResultMatrix) -> Result<SlaterSpectrum> {
    slater_spectrum_with(w, &Limits::default())
}

pub fn slater_spectrum_with(w: &ResultMatrix, limits: &Limits) -> Result<SlaterSpectrum> {
    w.check_bitmask_capacity()?;
    let m = w.len();
    if m > limits.spectrum_max_objects {
        return Err(Error::ResourceLimit(format!(
            "spectrum of {} objects exceeds the configured limit of {} (estimated memory {})",
            m,
            limits.spectrum_max_objects,
            format_bytes(estimate_spectrum_memory(w))
        )));
    }
    let coefficients = if m <= U64_FACTORIAL_MAX {
        run_recursion::<u64>(w)
    } else if m <= U128_FACTORIAL_MAX {
        run_recursion::<u128>(w)
    } else {
        run_recursion::<BigUint>(w)
    };
    SlaterSpectrum::from_counts(m, coefficients)
        .map_err(|e| Error::Internal(format!("recursion produced an invalid spectrum: {}", e)))
}

/// Spectrum polynomial of one subset of objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSpectrum {
    /// Member objects as a bitmask.
    pub members: u64,
    /// Smallest consistency index reached by an order of the subset.
    pub low: u64,
    /// Coefficients of `u^low, u^(low+1), ...`.
    pub coefficients: Vec<BigUint>,
}

impl SubsetSpectrum {
    /// Maximal consistency index over orders of the subset.
    pub fn degree(&self) -> u64 {
        self.low + self.coefficients.len() as u64 - 1
    }

    pub fn size(&self) -> usize {
        self.members.count_ones() as usize
    }

    /// Coefficient of `u^t`.
    pub fn coefficient(&self, t: u64) -> BigUint {
        if t < self.low {
            return BigUint::zero();
        }
        self.coefficients
            .get((t - self.low) as usize)
            .cloned()
            .unwrap_or_default()
    }
}

/// Largest `M` for which [`subset_spectra`] keeps every layer.
pub const SUBSET_SPECTRA_MAX_OBJECTS: usize = 12;

/// Every subset's spectrum polynomial, layer by layer (singletons first).
pub fn subset_spectra(w: &ResultMatrix) -> Result<Vec<Vec<SubsetSpectrum>>> {
    let m = w.len();
    if m > SUBSET_SPECTRA_MAX_OBJECTS {
        return Err(Error::ResourceLimit(format!(
            "keeping all subset layers is limited to {} objects, got {}",
            SUBSET_SPECTRA_MAX_OBJECTS, m
        )));
    }
    let table = CrossTable::new(w);
    let binom = Binomials::new(m);
    let mut layers = Vec::with_capacity(m);
    let mut layer: Vec<SubsetPoly<u64>> = vec![SubsetPoly::unit(); m];
    let export = |k: usize, layer: &[SubsetPoly<u64>]| -> Vec<SubsetSpectrum> {
        k_subsets(m, k)
            .into_iter()
            .zip(layer)
            .map(|(members, poly)| SubsetSpectrum {
                members,
                low: poly.low,
                coefficients: poly.coeffs.iter().map(|&c| BigUint::from(c)).collect(),
            })
            .collect()
    };
    layers.push(export(1, &layer));
    for k in 2..=m {
        layer = next_layer(m, k, &layer, &table, &binom);
        layers.push(export(k, &layer));
    }
    Ok(layers)
}
