//! Size sweeps and the scaling laws fitted to them.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Euclid;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::entanglement::{mutual_information, report, EntanglementReport};
use crate::kernel::{build_kernel, inner_blocks, CirculantKernel, Partition};
use crate::lattice::CouplingSpec;
use crate::linalg::log_det_spd;
use crate::spectral::{classify, szego_coefficients, szego_lower_bound, SpectralClassification};
use crate::{entropy, Error, Result};

/// Ordinary least squares `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; NaN with fewer than three points.
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub rms_residual: f64,
    pub max_residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(Error::TooFewPoints { needed: 2, got: n.min(ys.len()) });
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::TooFewPoints { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (slope * x + intercept)).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy > 0.0 { (1.0 - ssr / syy).clamp(0.0, 1.0) } else { 1.0 };
    let slope_stderr = if n > 2 { (ssr / (nf - 2.0) / sxx).sqrt() } else { f64::NAN };
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr,
        r_squared,
        rms_residual: (ssr / nf).sqrt(),
        max_residual: residuals.iter().fold(0.0, |m, r| m.max(r.abs())),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FitModel {
    /// `y = a ln x + b`
    LogGrowth,
    /// `y → y_∞`; `b` holds `y_∞`, `a` the residual linear drift.
    Saturation,
    /// `y = a x + b`
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingFit {
    pub model: FitModel,
    pub a: f64,
    pub b: f64,
    pub a_stderr: f64,
    pub r_squared: f64,
    pub max_residual: f64,
    pub x_range: (f64, f64),
}

fn x_range(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

pub fn fit_log_growth(xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    let logs: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let f = fit_line(&logs, ys)?;
    Ok(ScalingFit {
        model: FitModel::LogGrowth,
        a: f.slope,
        b: f.intercept,
        a_stderr: f.slope_stderr,
        r_squared: f.r_squared,
        max_residual: f.max_residual,
        x_range: x_range(xs),
    })
}

pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    let f = fit_line(xs, ys)?;
    Ok(ScalingFit {
        model: FitModel::Linear,
        a: f.slope,
        b: f.intercept,
        a_stderr: f.slope_stderr,
        r_squared: f.r_squared,
        max_residual: f.max_residual,
        x_range: x_range(xs),
    })
}

/// Saturation: `y_∞` is the value at the largest `x`, `max_residual` the
/// largest distance from it, `r_squared` the share of variance left unexplained
/// by a linear drift (1 for a flat sequence).
pub fn fit_saturation(xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    let f = fit_line(xs, ys)?;
    let (last, _) = xs
        .iter()
        .zip(ys)
        .fold((f64::NAN, f64::NEG_INFINITY), |(y0, x0), (&x, &y)| if x > x0 { (y, x) } else { (y0, x0) });
    Ok(ScalingFit {
        model: FitModel::Saturation,
        a: f.slope,
        b: last,
        a_stderr: f.slope_stderr,
        r_squared: 1.0 - f.r_squared,
        max_residual: ys.iter().fold(0.0, |m, y| m.max((y - last).abs())),
        x_range: x_range(xs),
    })
}

/// Conformal chord length `(N/π) sin(π N₁/N)` of a block on a ring. Reduces
/// to `N₁` for `N₁ ≪ N` and is the natural argument of logarithmic growth on
/// a finite periodic chain.
pub fn chord_length(n: usize, n1: usize) -> f64 {
    n as f64 / PI * (PI * n1 as f64 / n as f64).sin()
}

/// `S` against `ln` of the chord length at fixed ring size `n`.
pub fn block_log_fit(n: usize, n1s: &[usize], entropies: &[f64]) -> Result<ScalingFit> {
    let xs: Vec<f64> = n1s.iter().map(|&b| chord_length(n, b)).collect();
    fit_log_growth(&xs, entropies)
}

/// Block size of the half/half split: `(N−1)/2` for odd `N`, `N/2` for even.
pub fn half_block(n: usize) -> usize {
    if n % 2 == 1 {
        (n - 1) / 2
    } else {
        n / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PartitionRule {
    /// `sizes` are ring sizes; block is [`half_block`].
    HalfHalf,
    /// `sizes` are block sizes on a ring of fixed size.
    FixedRing(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub n1: usize,
    pub report: EntanglementReport,
}

#[derive(Debug, Clone, Default)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    /// Sizes dropped because no valid lattice exists there, with the reason.
    pub skipped: Vec<(usize, Error)>,
}

/// Entanglement reports over a size sweep, handed to `emit` as they complete.
///
/// A size whose lattice is not positive definite (a mode sitting exactly on a
/// zero of `λ`) is skipped and recorded; other errors abort the sweep.
pub fn entropy_sweep<B, E>(builder: B, sizes: &[usize], rule: PartitionRule, mut emit: E) -> Result<Sweep>
where
    B: Fn(usize) -> Result<CouplingSpec>,
    E: FnMut(&SweepPoint),
{
    let mut sweep = Sweep::default();
    match rule {
        PartitionRule::HalfHalf => {
            for &n in sizes {
                match sweep_point(&builder, n, half_block(n)) {
                    Ok(p) => {
                        emit(&p);
                        sweep.points.push(p);
                    }
                    Err(e @ Error::NotPositive { .. }) => sweep.skipped.push((n, e)),
                    Err(e) => return Err(e),
                }
            }
        }
        PartitionRule::FixedRing(n) => {
            let kernel = build_kernel(&builder(n)?)?;
            for &n1 in sizes {
                let p = SweepPoint { n, n1, report: report(&kernel, &Partition::interval(n1))? };
                emit(&p);
                sweep.points.push(p);
            }
        }
    }
    Ok(sweep)
}

/// One half/half or fixed-ring point, built from scratch.
pub fn sweep_point<B>(builder: &B, n: usize, n1: usize) -> Result<SweepPoint>
where
    B: Fn(usize) -> Result<CouplingSpec>,
{
    let kernel = build_kernel(&builder(n)?)?;
    Ok(SweepPoint { n, n1, report: report(&kernel, &Partition::interval(n1))? })
}

/// Distance of the closest root to the mode grid `2πj/N`, in grid spacings
/// (0 = a mode sits on a root, ½ = every root is midway between modes).
pub fn grid_detuning(n: usize, classification: &SpectralClassification) -> f64 {
    classification
        .roots
        .iter()
        .map(|r| {
            let phase = Euclid::rem_euclid(&(r.angle * n as f64 / (2.0 * PI)), &1.0);
            phase.min(1.0 - phase)
        })
        .fold(0.5, f64::min)
}

/// Odd ring size within `n ± max(4, n/16)`, clipped to `[lo, hi]`, whose mode
/// grid stays farthest from the zeros of `λ`.
///
/// A mode close to a zero of `λ` is an almost-free oscillator and adds a
/// bounded but large, `N`-dependent offset to the half/half information;
/// comparing sizes at the same, maximal detuning keeps that offset from
/// masquerading as growth.
pub fn off_resonant_size(n: usize, lo: usize, hi: usize, classification: &SpectralClassification) -> usize {
    let w = core::cmp::max(4, n / 16);
    let start = core::cmp::max(n.saturating_sub(w), lo);
    let end = core::cmp::min(n + w, hi);
    (start..=end)
        .filter(|m| m % 2 == 1)
        .max_by(|&a, &b| {
            let da = grid_detuning(a, classification);
            let db = grid_detuning(b, classification);
            da.total_cmp(&db).then_with(|| b.abs_diff(n).cmp(&a.abs_diff(n))).then_with(|| b.cmp(&a))
        })
        .unwrap_or(n | 1)
}

#[derive(Debug, Clone)]
pub struct WidomSlope {
    /// `I` against `ln N`.
    pub fit: ScalingFit,
    /// `Σ_r m_r²/4` from the spectral classification.
    pub expected: f64,
    /// Ring sizes actually used (odd, off-resonant), with `I` at each.
    pub sizes: Vec<usize>,
    pub informations: Vec<f64>,
    pub skipped: Vec<(usize, Error)>,
}

/// Fits the half/half mutual information `I(N)` against `ln N`.
///
/// `sizes` are nominal ring sizes: at least six, spanning a factor of eight or
/// more. Each is replaced by the nearby odd, off-resonant size of
/// [`off_resonant_size`].
pub fn widom_slope<B>(builder: B, sizes: &[usize]) -> Result<WidomSlope>
where
    B: Fn(usize) -> Result<CouplingSpec>,
{
    if sizes.len() < 6 {
        return Err(Error::TooFewPoints { needed: 6, got: sizes.len() });
    }
    let lo = *sizes.iter().min().unwrap();
    let hi = *sizes.iter().max().unwrap();
    if hi < 8 * lo {
        return Err(Error::InvalidSpec("sizes must span at least a factor of 8"));
    }

    let mut classification = None;
    let mut out = WidomSlope {
        fit: ScalingFit {
            model: FitModel::LogGrowth,
            a: f64::NAN,
            b: f64::NAN,
            a_stderr: f64::NAN,
            r_squared: 0.0,
            max_residual: f64::NAN,
            x_range: (lo as f64, hi as f64),
        },
        expected: f64::NAN,
        sizes: Vec::new(),
        informations: Vec::new(),
        skipped: Vec::new(),
    };
    for &nominal in sizes {
        if classification.is_none() {
            match builder(nominal | 1) {
                Ok(spec) => classification = Some(classify(&spec)?),
                Err(e @ Error::NotPositive { .. }) => {
                    out.skipped.push((nominal | 1, e));
                    continue;
                }
                Err(e) => return Err(e),
            }
        }
        let n = off_resonant_size(nominal, lo, hi, classification.as_ref().unwrap());
        let spec = match builder(n) {
            Ok(s) => s,
            Err(e @ Error::NotPositive { .. }) => {
                out.skipped.push((n, e));
                continue;
            }
            Err(e) => return Err(e),
        };
        let kernel = build_kernel(&spec)?;
        out.informations.push(mutual_information(&kernel, &Partition::interval(half_block(n)))?);
        out.sizes.push(n);
    }
    let xs: Vec<f64> = out.sizes.iter().map(|&n| n as f64).collect();
    out.fit = fit_log_growth(&xs, &out.informations)?;
    out.expected = classification.map_or(f64::NAN, |c| c.widom_coefficient);
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct DeterminantCheck {
    pub block_sizes: Vec<usize>,
    /// `ln det D(N₁) − c₀ N₁`
    pub excess: Vec<f64>,
    /// `Σ k c_k²` (gapped) or `Σ m_r²/4` (gapless).
    pub expected: f64,
    pub fit: ScalingFit,
}

fn determinant_excess(kernel: &CirculantKernel, c0: f64, n1: usize) -> Result<f64> {
    let (_, d) = inner_blocks(kernel, &Partition::interval(n1))?;
    Ok(log_det_spd(d)? - c0 * n1 as f64)
}

/// Strong Szegő limit: `ln det D(N₁) − c₀ N₁ → Σ_{k≥1} k c_k²` for a gapped chain.
pub fn szego_det_check(spec: &CouplingSpec, block_sizes: &[usize]) -> Result<DeterminantCheck> {
    if !classify(spec)?.is_regular() {
        return Err(Error::InvalidSpec("strong Szegő check needs a regular symbol"));
    }
    let coeffs = szego_coefficients(spec, 256)?;
    let kernel = build_kernel(spec)?;
    let excess =
        block_sizes.iter().map(|&n1| determinant_excess(&kernel, coeffs.c0(), n1)).collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = block_sizes.iter().map(|&n| n as f64).collect();
    Ok(DeterminantCheck {
        block_sizes: block_sizes.to_vec(),
        fit: fit_saturation(&xs, &excess)?,
        excess,
        expected: szego_lower_bound(&coeffs),
    })
}

/// Fisher–Hartwig growth: `ln det D(N₁) − c₀ N₁ ≈ (Σ m_r²/4) ln N₁ + const`
/// for a gapless chain; a gapped chain gives slope 0. The ring must be at
/// least eight times the largest block.
pub fn widom_det_check(spec: &CouplingSpec, block_sizes: &[usize]) -> Result<DeterminantCheck> {
    let classification = classify(spec)?;
    let largest = block_sizes.iter().copied().max().unwrap_or(0);
    if spec.sites() < 8 * largest {
        return Err(Error::BadPartition("ring must hold at least eight times the largest block"));
    }
    let c0 = szego_coefficients(spec, 0)?.c0();
    let kernel = build_kernel(spec)?;
    let excess = block_sizes.iter().map(|&n1| determinant_excess(&kernel, c0, n1)).collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = block_sizes.iter().map(|&n| n as f64).collect();
    Ok(DeterminantCheck {
        block_sizes: block_sizes.to_vec(),
        fit: fit_log_growth(&xs, &excess)?,
        excess,
        expected: classification.widom_coefficient,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AreaLawRow {
    pub n: usize,
    pub entropy: f64,
    /// `S / 4n`, entropy per boundary site of an `n × n` square.
    pub per_boundary_site: f64,
}

/// Entropy of `n × n` squares in a 2D torus.
pub fn area_law_2d(spec: &CouplingSpec, sides: &[usize]) -> Result<Vec<AreaLawRow>> {
    if spec.dimension() != 2 {
        return Err(Error::InvalidSpec("area-law sweep needs a two-dimensional lattice"));
    }
    let smallest = spec.extents().iter().copied().min().unwrap();
    if sides.iter().any(|&n| 4 * n > smallest) {
        return Err(Error::BadPartition("torus must be at least four times the square side"));
    }
    let kernel = build_kernel(spec)?;
    sides
        .iter()
        .map(|&n| {
            let s = entropy(&kernel, &Partition::hyperrectangle(alloc::vec![n, n]))?.entropy;
            Ok(AreaLawRow { n, entropy: s, per_boundary_site: s / (4 * n) as f64 })
        })
        .collect()
}
