//! Ground-state entanglement of a block against the rest of the lattice.
//!
//! With `A`, `D` the inner blocks of `V^{−1/2}` and `V^{1/2}`, the eigenvalues
//! `μ_i ≥ 1` of `A·D` give the entropy `S = Σ f(√μ_i)`. Three cheaper
//! quantities bracket it: `½ ln det(A·D)` (equal to the position-space mutual
//! information) from below and the log-negativity estimate from above.

use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::kernel::{inner_blocks, kernel_row_decay, outer_blocks, CirculantKernel, Partition};
use crate::linalg::log_det_spd;
use crate::scaling::fit_line;
use crate::spectral::{classify, szego_coefficients, szego_lower_bound};
use crate::{Error, Result, Tolerances};

/// `f(x) = ((x+1)/2) ln((x+1)/2) − ((x−1)/2) ln((x−1)/2)`, the entropy of one
/// mode with symplectic eigenvalue `x ≥ 1`.
pub fn mode_entropy(x: f64) -> f64 {
    let e = x - 1.0;
    if e > 1e-8 {
        ((x + 1.0) / 2.0).ln() + e / 2.0 * ((x + 1.0) / e).ln()
    } else if e > 0.0 {
        // u = (x−1)/2: (1+u) ln(1+u) − u ln u ≈ u − u ln u + u²/2
        let u = e / 2.0;
        u - u * u.ln() + u * u / 2.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyResult {
    /// Eigenvalues of `A·D`, descending, each at least 1.
    pub mu_spectrum: Vec<f64>,
    pub entropy: f64,
}

pub fn entropy(kernel: &CirculantKernel, partition: &Partition) -> Result<EntropyResult> {
    entropy_with(kernel, partition, &Tolerances::default())
}

/// Entropy of the inner block.
///
/// `A·D` is similar to the symmetric `Lᵀ D L` with `A = L Lᵀ`, so its spectrum
/// is computed with a symmetric eigensolver and comes out real.
pub fn entropy_with(kernel: &CirculantKernel, partition: &Partition, tol: &Tolerances) -> Result<EntropyResult> {
    let (a, d) = inner_blocks(kernel, partition)?;
    let mu = symplectic_spectrum(a, &d)?;
    entropy_from_mu(mu, tol.mu_floor)
}

fn symplectic_spectrum(a: DMatrix<f64>, d: &DMatrix<f64>) -> Result<Vec<f64>> {
    let l = a.cholesky().ok_or(Error::NotPositiveDefinite)?.unpack();
    let m = l.transpose() * d * &l;
    let m = (&m + m.transpose()) * 0.5;
    Ok(m.symmetric_eigenvalues().iter().cloned().collect())
}

/// Symplectic eigenvalues this close above 1 are round-off of an unentangled
/// mode; each would otherwise add about `1e-11` nats.
const MU_ROUND_OFF: f64 = 1e-12;

pub(crate) fn entropy_from_mu(mut mu: Vec<f64>, floor: f64) -> Result<EntropyResult> {
    for m in mu.iter_mut() {
        if *m < 1.0 - floor || !m.is_finite() {
            return Err(Error::SpectrumBelowOne { value: *m });
        }
        if *m < 1.0 + MU_ROUND_OFF {
            *m = 1.0;
        }
    }
    mu.sort_by(|a, b| b.total_cmp(a));
    let entropy = mu.iter().map(|m| mode_entropy(m.sqrt())).sum();
    Ok(EntropyResult { mu_spectrum: mu, entropy })
}

/// Both closed forms of the position/momentum mutual information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInformation {
    /// `½ ln(det A · det C / det V^{−1/2})`
    pub positions: f64,
    /// `½ ln(det D · det F / det V^{1/2})`
    pub momenta: f64,
}

pub fn mutual_information_forms(kernel: &CirculantKernel, partition: &Partition) -> Result<MutualInformation> {
    let (a, d) = inner_blocks(kernel, partition)?;
    let (c, f) = outer_blocks(kernel, partition)?;
    let log_det_sqrt = kernel.log_det_sqrt();
    let positions = 0.5 * (log_det_spd(a)? + log_det_spd(c)? + log_det_sqrt);
    let momenta = 0.5 * (log_det_spd(d)? + log_det_spd(f)? - log_det_sqrt);
    Ok(MutualInformation { positions, momenta })
}

pub fn mutual_information(kernel: &CirculantKernel, partition: &Partition) -> Result<f64> {
    mutual_information_with(kernel, partition, &Tolerances::default())
}

/// Shannon mutual information between the inner and outer position variables.
///
/// Fails with [`Error::IdentityMismatch`] when the momentum-space form does
/// not agree within `tol.identity`.
pub fn mutual_information_with(kernel: &CirculantKernel, partition: &Partition, tol: &Tolerances) -> Result<f64> {
    let mi = mutual_information_forms(kernel, partition)?;
    if !((mi.positions - mi.momenta).abs() <= tol.identity) {
        return Err(Error::IdentityMismatch { primal: mi.positions, dual: mi.momenta });
    }
    Ok(mi.positions)
}

/// `4 λ_max^{1/2} Σ_{i∈inner} Σ_{j∈outer} |V^{−1/2}_{ij}|`.
pub fn negativity_upper_bound(kernel: &CirculantKernel, partition: &Partition) -> Result<f64> {
    let torus = kernel.torus();
    let (inner, outer) = partition.split(torus)?;
    let row = kernel.inv_sqrt_row();
    let mut sum = 0.0;
    for i in &inner {
        for j in &outer {
            sum += row[torus.lag_index(i, j)].abs();
        }
    }
    Ok(4.0 * kernel.spec().lambda_max().sqrt() * sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DecayClass {
    Exponential,
    PowerLaw,
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationEstimate {
    /// Correlation length in sites; infinite unless the decay is exponential.
    pub xi: f64,
    pub decay_class: DecayClass,
    /// Inclusive lag range of the fit.
    pub fit_window: (usize, usize),
    /// RMS residual of the winning fit.
    pub fit_residual: f64,
    /// `(K, α)` of the envelope `|V^{−1/2}_l| ≈ K e^{−α l}` when exponential.
    pub envelope: Option<(f64, f64)>,
}

/// Correlation length from the decay of `|V^{−1/2}_l|`.
///
/// Fits `ln|V^{−1/2}_l|` against `l` and against `ln l` over `[N/16, N/4]`.
/// Lags whose magnitude is below `1e−13 |V^{−1/2}_0|` are round-off and are
/// dropped; when that leaves the window too short it is slid toward smaller
/// lags so that at least 16 lags end at the last resolvable one. The decay is
/// exponential when the linear fit's residual is at most half the log-log
/// fit's and its slope is negative.
pub fn correlation_length(kernel: &CirculantKernel) -> Result<CorrelationEstimate> {
    let decay = kernel_row_decay(kernel)?;
    let n = kernel.spec().sites();
    let floor = 1e-13 * kernel.inv_sqrt_row()[0].abs();

    if decay.iter().all(|&(_, m)| m < floor) {
        return Ok(CorrelationEstimate {
            xi: 0.0,
            decay_class: DecayClass::Zero,
            fit_window: (1, decay.len()),
            fit_residual: 0.0,
            envelope: None,
        });
    }
    if n < 64 {
        return Err(Error::InsufficientDecayData { usable: 0 });
    }

    let hi = decay.iter().filter(|&&(l, m)| l <= n / 4 && m > floor).map(|&(l, _)| l).max().unwrap_or(0);
    let lo = core::cmp::max(1, core::cmp::min(n / 16, hi.saturating_sub(15)));
    let (lags, logs): (Vec<f64>, Vec<f64>) =
        decay.iter().filter(|&&(l, m)| l >= lo && l <= hi && m > floor).map(|&(l, m)| (l as f64, m.ln())).unzip();
    if lags.len() < 8 {
        return Err(Error::InsufficientDecayData { usable: lags.len() });
    }

    let linear = fit_line(&lags, &logs)?;
    let log_lags: Vec<f64> = lags.iter().map(|l| l.ln()).collect();
    let power = fit_line(&log_lags, &logs)?;

    if linear.rms_residual <= 0.5 * power.rms_residual && linear.slope < 0.0 {
        Ok(CorrelationEstimate {
            xi: -1.0 / linear.slope,
            decay_class: DecayClass::Exponential,
            fit_window: (lo, hi),
            fit_residual: linear.rms_residual,
            envelope: Some((linear.intercept.exp(), -linear.slope)),
        })
    } else {
        Ok(CorrelationEstimate {
            xi: f64::INFINITY,
            decay_class: DecayClass::PowerLaw,
            fit_window: (lo, hi),
            fit_residual: power.rms_residual,
            envelope: None,
        })
    }
}

/// Everything known about one bipartition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntanglementReport {
    pub extents: Vec<usize>,
    pub block: Vec<usize>,
    pub mu_spectrum: Vec<f64>,
    pub entropy: f64,
    pub mutual_information: f64,
    /// `½ ln det(A·D)`
    pub det_lower_bound: f64,
    pub negativity_upper_bound: f64,
    /// `Σ k c_k²` for gapped 1D chains.
    pub szego_lower_bound: Option<f64>,
}

/// Szegő order used by [`report`].
pub const REPORT_SZEGO_ORDER: usize = 64;

pub fn report(kernel: &CirculantKernel, partition: &Partition) -> Result<EntanglementReport> {
    report_with(kernel, partition, &Tolerances::default())
}

pub fn report_with(kernel: &CirculantKernel, partition: &Partition, tol: &Tolerances) -> Result<EntanglementReport> {
    let s = entropy_with(kernel, partition, tol)?;
    let mi = mutual_information_with(kernel, partition, tol)?;
    let upper = negativity_upper_bound(kernel, partition)?;
    let det_lower_bound = 0.5 * s.mu_spectrum.iter().map(|m| m.ln()).sum::<f64>();
    let szego = if kernel.spec().dimension() == 1 && classify(kernel.spec())?.is_regular() {
        Some(szego_lower_bound(&szego_coefficients(kernel.spec(), REPORT_SZEGO_ORDER)?))
    } else {
        None
    };
    Ok(EntanglementReport {
        extents: kernel.spec().extents().to_vec(),
        block: partition.block.clone(),
        mu_spectrum: s.mu_spectrum,
        entropy: s.entropy,
        mutual_information: mi,
        det_lower_bound,
        negativity_upper_bound: upper,
        szego_lower_bound: szego,
    })
}

/// Entropy and mutual information from dense matrix functions only: the
/// spectrum of `A·D` from a symmetric eigensolver on `A^{1/2} D A^{1/2}` and the
/// determinants from LU factors. Used to cross-check the circulant path.
pub mod oracle {
    use super::*;
    use crate::kernel::oracle::DenseKernel;
    use crate::lattice::CouplingSpec;

    fn log_abs_det(m: DMatrix<f64>) -> f64 {
        let lu = m.lu();
        let u = lu.u();
        (0..u.nrows()).map(|i| u[(i, i)].abs().ln()).sum()
    }

    /// `(S, I)` for one partition.
    pub fn dense_entropy_and_information(spec: &CouplingSpec, partition: &Partition) -> Result<(f64, f64)> {
        let dense = DenseKernel::new(spec)?;
        let blocks = dense.blocks(spec.torus(), partition)?;
        // A·D is similar to A^{1/2} D A^{1/2}, which is symmetric.
        let eig = blocks.a.clone().symmetric_eigen();
        let root = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.sqrt()))
            * eig.eigenvectors.transpose();
        let product = &root * &blocks.d * &root;
        let product = (&product + product.transpose()) * 0.5;
        let mu: Vec<f64> = product.symmetric_eigenvalues().iter().copied().collect();
        let s = entropy_from_mu(mu, Tolerances::default().mu_floor)?.entropy;
        let log_det_inv_sqrt = -0.5 * dense.eigenvalues.iter().map(|l| l.ln()).sum::<f64>();
        let i = 0.5 * (log_abs_det(blocks.a) + log_abs_det(blocks.c) - log_det_inv_sqrt);
        Ok((s, i))
    }
}
