//! Coupling stencils on periodic lattices.
//!
//! A [`CouplingSpec`] holds the finite-range, translation-invariant potential
//! `V_k = V_{-k}` of a harmonic lattice on a `d`-dimensional torus together with
//! its circulant spectrum. Construction fails unless every eigenvalue is
//! strictly positive, so a spec always describes a normalizable ground state.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::{Error, Result, Tolerances};

/// One coupling coefficient `V_k` at lag vector `k`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Term {
    pub lag: Vec<i64>,
    pub value: f64,
}

impl Term {
    pub fn new(lag: impl Into<Vec<i64>>, value: f64) -> Self {
        Self { lag: lag.into(), value }
    }
}

/// Periodic lattice geometry. Sites and modes are numbered row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Torus {
    extents: Vec<usize>,
}

impl Torus {
    pub fn new(extents: Vec<usize>) -> Result<Self> {
        if extents.is_empty() {
            return Err(Error::InvalidSpec("dimension must be at least 1"));
        }
        if extents.contains(&0) {
            return Err(Error::InvalidSpec("extents must be positive"));
        }
        Ok(Self { extents })
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn dimension(&self) -> usize {
        self.extents.len()
    }

    pub fn sites(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.extents.len()];
        for (axis, &n) in self.extents.iter().enumerate().rev() {
            out[axis] = index % n;
            index /= n;
        }
        out
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.extents).fold(0, |acc, (&c, &n)| acc * n + c % n)
    }

    /// Flat index of the lag `a - b`, wrapped onto the torus.
    pub fn lag_index(&self, a: &[usize], b: &[usize]) -> usize {
        let mut acc = 0;
        for ((&x, &y), &n) in a.iter().zip(b).zip(&self.extents) {
            acc = acc * n + (x + n - y % n) % n;
        }
        acc
    }

    /// Flat index of a signed lag vector, wrapped onto the torus.
    pub fn signed_lag_index(&self, lag: &[i64]) -> usize {
        lag.iter().zip(&self.extents).fold(0, |acc, (&k, &n)| acc * n + k.rem_euclid(n as i64) as usize)
    }

    /// Canonical representative of a lag: components in `(-N/2, N/2]`.
    pub fn canonical_lag(&self, lag: &[i64]) -> Vec<i64> {
        lag.iter()
            .zip(&self.extents)
            .map(|(&k, &n)| {
                let n = n as i64;
                let r = k.rem_euclid(n);
                if 2 * r > n {
                    r - n
                } else {
                    r
                }
            })
            .collect()
    }
}

/// Validated finite-range coupling on a torus, with its circulant spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSpec {
    torus: Torus,
    terms: Vec<Term>,
    range: usize,
    eigenvalues: Vec<f64>,
}

impl CouplingSpec {
    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn dimension(&self) -> usize {
        self.torus.dimension()
    }

    pub fn extents(&self) -> &[usize] {
        self.torus.extents()
    }

    pub fn sites(&self) -> usize {
        self.torus.sites()
    }

    /// All nonzero coefficients, both members of each mirror pair included,
    /// sorted by lag.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Smallest `R` with `V_k = 0` whenever some `|k_i| >= R`.
    pub fn range(&self) -> usize {
        self.range
    }

    /// Circulant eigenvalues `λ_j`, row-major over the mode grid.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::MAX, f64::min)
    }

    /// Coefficient at a lag (any representative), zero outside the stencil.
    pub fn coefficient(&self, lag: &[i64]) -> f64 {
        let lag = self.torus.canonical_lag(lag);
        self.terms.iter().find(|t| t.lag == lag).map_or(0.0, |t| t.value)
    }

    /// 1D coefficients `V_0, V_1, .., V_{R-1}`.
    pub fn half_row(&self) -> Result<Vec<f64>> {
        if self.dimension() != 1 {
            return Err(Error::NotOneDimensional);
        }
        Ok((0..self.range as i64).map(|k| self.coefficient(&[k])).collect())
    }

    /// First row of the circulant matrix `V`, indexed by flat lag.
    pub fn coupling_row(&self) -> Vec<f64> {
        let mut row = vec![0.0; self.sites()];
        for t in &self.terms {
            row[self.torus.signed_lag_index(&t.lag)] += t.value;
        }
        row
    }

    /// Same stencil on a torus of different size.
    pub fn resized(&self, extents: Vec<usize>) -> Result<Self> {
        build_coupling_with(extents, self.terms.clone(), &Tolerances::default())
    }
}

/// Validates and completes a coupling stencil with default tolerances.
pub fn build_coupling(extents: Vec<usize>, coefficients: Vec<Term>) -> Result<CouplingSpec> {
    build_coupling_with(extents, coefficients, &Tolerances::default())
}

/// Validates a coupling stencil.
///
/// Missing mirror lags are filled in from their partner. A mirror pair given
/// with different values is rejected, as is a stencil whose circulant spectrum
/// is not strictly positive.
pub fn build_coupling_with(extents: Vec<usize>, coefficients: Vec<Term>, tol: &Tolerances) -> Result<CouplingSpec> {
    let torus = Torus::new(extents)?;
    let d = torus.dimension();

    let mut terms: Vec<Term> = Vec::with_capacity(coefficients.len() * 2);
    for t in coefficients {
        if t.lag.len() != d {
            return Err(Error::InvalidSpec("lag length does not match dimension"));
        }
        if !t.value.is_finite() {
            return Err(Error::InvalidSpec("coefficient is not finite"));
        }
        let lag = torus.canonical_lag(&t.lag);
        if terms.iter().any(|u| u.lag == lag) {
            return Err(Error::InvalidSpec("lag listed twice"));
        }
        terms.push(Term { lag, value: t.value });
    }

    let scale = terms.iter().map(|t| t.value.abs()).fold(0.0, f64::max);
    let n_given = terms.len();
    for i in 0..n_given {
        let mirror = torus.canonical_lag(&terms[i].lag.iter().map(|k| -k).collect::<Vec<_>>());
        match terms.iter().position(|u| u.lag == mirror) {
            Some(j) => {
                let (a, b) = (terms[i].value, terms[j].value);
                if (a - b).abs() > 1e-12 * scale {
                    return Err(Error::NotSymmetric { lag: terms[i].lag.clone(), value: a, mirror: b });
                }
            }
            None => {
                let value = terms[i].value;
                terms.push(Term { lag: mirror, value });
            }
        }
    }
    terms.retain(|t| t.value != 0.0);
    terms.sort_by(|a, b| a.lag.cmp(&b.lag));

    let range = terms.iter().flat_map(|t| t.lag.iter().map(|k| k.unsigned_abs() as usize)).max().map_or(1, |m| m + 1);
    let min_extent = *torus.extents().iter().min().expect("nonempty");
    if 2 * range - 1 > min_extent {
        return Err(Error::RangeTooLarge { range, extent: min_extent });
    }

    let eigenvalues = circulant_spectrum(&torus, &terms);
    let max = eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let (argmin, min) =
        eigenvalues.iter().cloned().enumerate().fold((0, f64::MAX), |acc, (j, v)| if v < acc.1 { (j, v) } else { acc });
    if !(max > 0.0) || min <= tol.positivity * max {
        return Err(Error::NotPositive { mode: torus.coords(argmin), value: min });
    }

    Ok(CouplingSpec { torus, terms, range, eigenvalues })
}

/// `λ_j = Σ_k V_k cos(2π j·k / N)` for every mode `j`.
fn circulant_spectrum(torus: &Torus, terms: &[Term]) -> Vec<f64> {
    let extents = torus.extents();
    (0..torus.sites())
        .map(|j| {
            let modes = torus.coords(j);
            terms
                .iter()
                .map(|t| {
                    // Reduce each phase to an exact integer fraction before scaling by 2π.
                    let phase: f64 = t
                        .lag
                        .iter()
                        .zip(&modes)
                        .zip(extents)
                        .map(|((&k, &m), &n)| {
                            let r = (k * m as i64).rem_euclid(n as i64);
                            r as f64 / n as f64
                        })
                        .sum();
                    t.value * (2.0 * PI * phase).cos()
                })
                .sum()
        })
        .collect()
}

/// Parameters of the nearest/next-nearest neighbour chain
/// `H = ½ Σ pᵢ² + ½ Σ (−2η qᵢ + q_{i+1} + q_{i−1})²`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EtaChainParams {
    pub eta: f64,
    pub n: usize,
}

/// `[V_0, V_1, V_2]` of the η chain. Its symbol is `λ(θ) = (2η − 2 cos θ)²`.
pub fn eta_chain_coefficients(eta: f64) -> [f64; 3] {
    [4.0 * eta * eta + 2.0, -4.0 * eta, 1.0]
}

pub fn build_eta_chain(params: EtaChainParams) -> Result<CouplingSpec> {
    build_eta_chain_with(params, &Tolerances::default())
}

pub fn build_eta_chain_with(params: EtaChainParams, tol: &Tolerances) -> Result<CouplingSpec> {
    if !(params.eta > 0.0) || !params.eta.is_finite() {
        return Err(Error::InvalidSpec("eta must be positive"));
    }
    if params.n < 5 {
        return Err(Error::InvalidSpec("eta chain needs at least 5 sites"));
    }
    let [v0, v1, v2] = eta_chain_coefficients(params.eta);
    build_coupling_with(vec![params.n], vec![Term::new([0], v0), Term::new([1], v1), Term::new([2], v2)], tol)
}

/// Product coupling `V_{(k_1,..,k_d)} = Π_i V^{(i)}_{k_i}` from 1D chains.
///
/// The symbol factorizes, `λ(θ_1,..,θ_d) = Π_i λ_i(θ_i)`.
pub fn build_separable(chains: &[&CouplingSpec]) -> Result<CouplingSpec> {
    if chains.is_empty() {
        return Err(Error::InvalidSpec("need at least one factor"));
    }
    let mut extents = Vec::new();
    let mut terms = vec![Term { lag: Vec::new(), value: 1.0 }];
    for chain in chains {
        if chain.dimension() != 1 {
            return Err(Error::NotOneDimensional);
        }
        extents.push(chain.extents()[0]);
        terms = terms
            .iter()
            .flat_map(|t| {
                chain.terms().iter().map(move |u| {
                    let mut lag = t.lag.clone();
                    lag.push(u.lag[0]);
                    Term { lag, value: t.value * u.value }
                })
            })
            .collect();
    }
    build_coupling(extents, terms)
}

/// Dense block-circulant `V` with `V[i][j] = V_{i−j}` (lags wrapped).
pub fn dense_potential(spec: &CouplingSpec) -> Result<DMatrix<f64>> {
    dense_potential_with(spec, Tolerances::default().dense_cap)
}

pub fn dense_potential_with(spec: &CouplingSpec, cap: usize) -> Result<DMatrix<f64>> {
    let n = spec.sites();
    if n > cap {
        return Err(Error::TooLarge { sites: n, cap });
    }
    let row = spec.coupling_row();
    Ok(circulant_matrix(spec.torus(), &row))
}

/// Dense matrix `M[i][j] = row[lag(i − j)]` on a torus.
pub(crate) fn circulant_matrix(torus: &Torus, row: &[f64]) -> DMatrix<f64> {
    let n = torus.sites();
    let coords: Vec<Vec<usize>> = (0..n).map(|i| torus.coords(i)).collect();
    DMatrix::from_fn(n, n, |i, j| row[torus.lag_index(&coords[i], &coords[j])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn chain(n: usize, half: &[f64]) -> Result<CouplingSpec> {
        build_coupling(vec![n], half.iter().enumerate().map(|(k, &v)| Term::new([k as i64], v)).collect())
    }

    /// Assembles ½ Σᵢ (−2η qᵢ + q_{i+1} + q_{i−1})² term by term into a dense quadratic form.
    fn eta_quadratic_form(eta: f64, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut a = vec![0.0; n];
            a[i] += -2.0 * eta;
            a[(i + 1) % n] += 1.0;
            a[(i + n - 1) % n] += 1.0;
            for p in 0..n {
                for q in 0..n {
                    m[(p, q)] += a[p] * a[q];
                }
            }
        }
        m
    }

    #[test]
    fn identity_coupling() {
        let spec = chain(8, &[1.0]).unwrap();
        assert!(spec.eigenvalues().iter().all(|&l| (l - 1.0).abs() < 1e-15));
        assert_eq!(spec.range(), 1);
    }

    #[test]
    fn negative_sum_is_not_positive() {
        let err = chain(8, &[2.0, -1.5]).unwrap_err();
        match err {
            Error::NotPositive { mode, value } => {
                assert_eq!(mode, vec![0]);
                assert_abs_diff_eq!(value, -1.0, epsilon = 1e-12);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn eta_expansion_matches_term_by_term_assembly() {
        for &(eta, n) in &[(1.2, 64usize), (0.0, 64), (0.6, 17), (1.6, 9)] {
            let form = eta_quadratic_form(eta, n);
            let [v0, v1, v2] = eta_chain_coefficients(eta);
            assert_abs_diff_eq!(form[(0, 0)], v0, epsilon = 1e-12);
            assert_abs_diff_eq!(form[(0, 1)], v1, epsilon = 1e-12);
            assert_abs_diff_eq!(form[(0, 2)], v2, epsilon = 1e-12);
            assert_abs_diff_eq!(form[(0, 3)], 0.0, epsilon = 1e-12);
        }
        assert_eq!(eta_chain_coefficients(0.0), [2.0, 0.0, 1.0]);
        let [v0, v1, v2] = eta_chain_coefficients(1.2);
        assert_abs_diff_eq!(v0, 7.76, epsilon = 1e-12);
        assert_abs_diff_eq!(v1, -4.8, epsilon = 1e-12);
        assert_eq!(v2, 1.0);

        let spec = build_eta_chain(EtaChainParams { eta: 1.2, n: 64 }).unwrap();
        let dense = dense_potential(&spec).unwrap();
        let form = eta_quadratic_form(1.2, 64);
        assert!((dense - form).abs().max() < 1e-12);
        assert_eq!(chain(64, &[7.76, -4.8, 1.0]).unwrap().terms(), spec.terms());
    }

    #[test]
    fn eta_one_has_zero_mode() {
        for n in [5, 12, 64, 101] {
            assert!(matches!(build_eta_chain(EtaChainParams { eta: 1.0, n }), Err(Error::NotPositive { .. })));
        }
    }

    #[test]
    fn eta_zero_is_rejected() {
        assert!(matches!(build_eta_chain(EtaChainParams { eta: 0.0, n: 64 }), Err(Error::InvalidSpec(_))));
        // Even taken literally the coupling is gapless at θ = π/2 on a 64-site ring.
        assert!(matches!(chain(64, &[2.0, 0.0, 1.0]), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn eta_spectrum_matches_symbol() {
        for &eta in &[0.3, 0.6, 1.2, 1.7] {
            let n = 61;
            let spec = build_eta_chain(EtaChainParams { eta, n }).unwrap();
            for (j, &l) in spec.eigenvalues().iter().enumerate() {
                let th = 2.0 * PI * j as f64 / n as f64;
                let expected = (2.0 * eta - 2.0 * th.cos()).powi(2);
                assert!((l - expected).abs() < 1e-12, "{eta} {j}");
            }
        }
    }

    #[test]
    fn symmetry_completion_and_mismatch() {
        let spec = build_coupling(vec![10], vec![Term::new([0], 3.0), Term::new([-1], -1.0)]).unwrap();
        assert_eq!(spec.coefficient(&[1]), -1.0);
        assert_eq!(spec.coefficient(&[9]), -1.0);
        assert_eq!(spec.terms().len(), 3);

        let err = build_coupling(vec![10], vec![Term::new([0], 3.0), Term::new([1], -1.0), Term::new([-1], -0.5)])
            .unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
    }

    #[test]
    fn wrapped_lags_are_canonicalized() {
        let spec = build_coupling(vec![10], vec![Term::new([0], 3.0), Term::new([9], -1.0)]).unwrap();
        assert_eq!(spec.terms().iter().map(|t| t.lag[0]).collect::<Vec<_>>(), vec![-1, 0, 1]);
    }

    #[test]
    fn range_must_fit() {
        let err = chain(4, &[7.76, -4.8, 1.0]).unwrap_err();
        assert_eq!(err, Error::RangeTooLarge { range: 3, extent: 4 });
        assert!(chain(5, &[7.76, -4.8, 1.0]).is_ok());
    }

    #[test]
    fn dense_ring_rows() {
        let spec = chain(4, &[2.5, -1.0]).unwrap();
        let m = dense_potential(&spec).unwrap();
        let expected = [2.5, -1.0, 0.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m[(i, j)], expected[(j + 4 - i) % 4]);
            }
        }
    }

    #[test]
    fn dense_eigenvalues_match_spectrum() {
        let spec = chain(37, &[5.0, -1.3, 0.4, 0.2]).unwrap();
        let mut dense: Vec<f64> = dense_potential(&spec).unwrap().symmetric_eigenvalues().iter().cloned().collect();
        let mut circ = spec.eigenvalues().to_vec();
        dense.sort_by(f64::total_cmp);
        circ.sort_by(f64::total_cmp);
        for (a, b) in dense.iter().zip(&circ) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn dense_2d_row_sums() {
        let spec =
            build_coupling(vec![3, 3], vec![Term::new([0, 0], 5.0), Term::new([1, 0], -1.0), Term::new([0, 1], -1.0)])
                .unwrap();
        let m = dense_potential(&spec).unwrap();
        assert_eq!(m.nrows(), 9);
        for i in 0..9 {
            assert_abs_diff_eq!(m.row(i).sum(), 1.0, epsilon = 1e-14);
        }
        assert!((&m - m.transpose()).abs().max() == 0.0);
    }

    #[test]
    fn dense_cap() {
        let spec = chain(100, &[1.0]).unwrap();
        assert_eq!(dense_potential_with(&spec, 64).unwrap_err(), Error::TooLarge { sites: 100, cap: 64 });
    }

    #[test]
    fn dense_commutes_with_shift() {
        let spec = build_eta_chain(EtaChainParams { eta: 0.7, n: 23 }).unwrap();
        let v = dense_potential(&spec).unwrap();
        let n = 23;
        let shift = DMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { 1.0 } else { 0.0 });
        let comm = &v * &shift - &shift * &v;
        assert!(comm.abs().max() < 1e-12);
    }

    #[test]
    fn separable_symbol_factorizes() {
        let a = build_eta_chain(EtaChainParams { eta: 1.2, n: 8 }).unwrap();
        let b = build_eta_chain(EtaChainParams { eta: 1.5, n: 6 }).unwrap();
        let s = build_separable(&[&a, &b]).unwrap();
        assert_eq!(s.extents(), &[8, 6]);
        for j in 0..48 {
            let (j1, j2) = (j / 6, j % 6);
            let expected = a.eigenvalues()[j1] * b.eigenvalues()[j2];
            assert!((s.eigenvalues()[j] - expected).abs() < 1e-10 * expected.max(1.0));
        }
    }
}
