//! The spectral function `λ(θ) = Σ_k V_k e^{ik·θ}` and what it decides.
//!
//! Zeros of `λ` on the unit circle close the gap of the lattice. In one
//! dimension they are found as unit-modulus roots of the Laurent polynomial
//! `z^{R−1} λ(z)`, and `λ` factors as
//! `λ(θ) = λ₀(θ) Π_r (2 − 2 cos(θ − α_r))^{m_r}` with a strictly positive
//! regular part `λ₀`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use num_traits::Euclid;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::lattice::CouplingSpec;
use crate::scaling::fit_line;
use crate::{Error, Result, Tolerances};

const TAU: f64 = 2.0 * PI;

/// `λ(θ)` at a point of the Brillouin zone (one angle per lattice axis).
pub fn spectral_eval(spec: &CouplingSpec, theta: &[f64]) -> f64 {
    spec.terms()
        .iter()
        .map(|t| {
            let phase: f64 = t.lag.iter().zip(theta).map(|(&k, &th)| k as f64 * th).sum();
            t.value * phase.cos()
        })
        .sum()
}

/// `d^p λ / dθ^p` of a 1D symbol, differentiated term by term.
fn symbol_derivative(half: &[f64], theta: f64, order: u32) -> f64 {
    half.iter()
        .enumerate()
        .skip(if order == 0 { 0 } else { 1 })
        .map(|(k, &v)| {
            let kf = k as f64;
            let weight = if k == 0 { 1.0 } else { 2.0 };
            let x = kf * theta;
            let trig = match order % 4 {
                0 => x.cos(),
                1 => -x.sin(),
                2 => -x.cos(),
                _ => x.sin(),
            };
            weight * v * kf.powi(order as i32) * trig
        })
        .sum()
}

/// Scale of the `order`-th derivative, `Σ_k |V_k| |k|^order`.
fn derivative_scale(half: &[f64], order: u32) -> f64 {
    half.iter()
        .enumerate()
        .map(|(k, &v)| {
            let weight = if k == 0 { 1.0 } else { 2.0 };
            weight * v.abs() * (k as f64).powi(order as i32)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SpectralKind {
    Regular,
    Singular,
}

/// A zero of `λ` at `e^{iα}`; `λ` vanishes there to order `2·multiplicity`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnitCircleRoot {
    pub angle: f64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralClassification {
    pub kind: SpectralKind,
    pub roots: Vec<UnitCircleRoot>,
    /// `Σ_r m_r² / 4`; the exponent of the logarithmic entanglement growth.
    pub widom_coefficient: f64,
}

impl SpectralClassification {
    fn from_roots(roots: Vec<UnitCircleRoot>) -> Self {
        let kind = if roots.is_empty() { SpectralKind::Regular } else { SpectralKind::Singular };
        let widom_coefficient = roots.iter().fold(0.0, |acc, r| acc + (r.multiplicity as f64).powi(2) / 4.0);
        Self { kind, roots, widom_coefficient }
    }

    pub fn is_regular(&self) -> bool {
        self.kind == SpectralKind::Regular
    }
}

/// Coefficients of `z^{R−1} λ(z)`, lowest power first.
fn laurent_coefficients(half: &[f64]) -> Vec<f64> {
    let r = half.len() - 1;
    (0..=2 * r).map(|m| half[m.abs_diff(r)]).collect()
}

fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let companion = DMatrix::from_fn(degree, degree, |i, j| {
        if j == degree - 1 {
            -coeffs[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion.complex_eigenvalues().iter().cloned().collect()
}

fn wrap_angle(a: f64) -> f64 {
    let w = Euclid::rem_euclid(&a, &TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = Euclid::rem_euclid(&(a - b), &TAU);
    d.min(TAU - d)
}

/// Classifies a 1D coupling as regular (gapped) or singular (gapless).
pub fn classify(spec: &CouplingSpec) -> Result<SpectralClassification> {
    classify_with(spec, &Tolerances::default())
}

pub fn classify_with(spec: &CouplingSpec, tol: &Tolerances) -> Result<SpectralClassification> {
    let half = spec.half_row()?;
    if half.len() == 1 {
        return Ok(SpectralClassification::from_roots(Vec::new()));
    }

    let mut candidates: Vec<f64> = polynomial_roots(&laurent_coefficients(&half))
        .into_iter()
        .filter(|z| (z.re.hypot(z.im) - 1.0).abs() < tol.root_cluster)
        .map(|z| wrap_angle(z.im.atan2(z.re)))
        .collect();
    candidates.sort_by(f64::total_cmp);

    // Group candidates into clusters of nearby angles, across the 0/2π seam too.
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for &a in &candidates {
        match clusters.last_mut() {
            Some(c) if a - c[c.len() - 1] < tol.root_cluster => c.push(a),
            _ => clusters.push(vec![a]),
        }
    }
    if clusters.len() > 1 {
        let first = clusters[0][0];
        let last = *clusters[clusters.len() - 1].last().unwrap();
        if first + TAU - last < tol.root_cluster {
            let tail = clusters.pop().unwrap();
            clusters[0].extend(tail.into_iter().map(|a| a - TAU));
        }
    }
    for w in 0..clusters.len() {
        if clusters.len() < 2 {
            break;
        }
        let a = clusters[w].last().unwrap();
        let b = clusters[(w + 1) % clusters.len()][0];
        if circular_gap(*a, b) < 10.0 * tol.root_cluster {
            return Err(Error::IllConditionedRoots { angle: *a });
        }
    }

    let grid_max =
        (0..1024).map(|i| symbol_derivative(&half, TAU * i as f64 / 1024.0, 0)).fold(spec.lambda_max(), f64::max);

    let mut roots = Vec::new();
    for cluster in clusters {
        let (s, c) = cluster.iter().fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
        let mut angle = s.atan2(c);
        let hint = cluster.len() as u32;

        // Newton on the derivative one below the expected order: it has a simple zero there.
        for _ in 0..50 {
            let g = symbol_derivative(&half, angle, hint - 1);
            let dg = symbol_derivative(&half, angle, hint);
            if dg == 0.0 || !dg.is_finite() {
                break;
            }
            let step = g / dg;
            if step.abs() > tol.root_cluster {
                break;
            }
            angle -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let angle = wrap_angle(angle);

        if symbol_derivative(&half, angle, 0) >= tol.root_value * grid_max {
            continue;
        }

        let order = (1..=2 * half.len() as u32)
            .find(|&q| symbol_derivative(&half, angle, q).abs() > 1e-6 * derivative_scale(&half, q))
            .ok_or(Error::IllConditionedRoots { angle })?;
        if order % 2 != 0 {
            return Err(Error::IllConditionedRoots { angle });
        }
        roots.push(UnitCircleRoot { angle, multiplicity: order / 2 });
    }
    roots.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    Ok(SpectralClassification::from_roots(roots))
}

/// Regular part `λ₀(θ)` of a 1D symbol.
///
/// The root factors are divided out of the Laurent polynomial before
/// evaluation, so the value at `θ = α_r` is the continuous limit.
pub fn regular_part_eval(spec: &CouplingSpec, classification: &SpectralClassification, theta: f64) -> Result<f64> {
    Ok(RegularPart::new(spec, classification)?.eval(theta))
}

/// `λ₀` with the deflated polynomial cached for repeated evaluation.
#[derive(Debug, Clone)]
pub struct RegularPart {
    poly: Vec<Complex<f64>>,
    shift: usize,
    roots: Vec<UnitCircleRoot>,
}

impl RegularPart {
    pub fn new(spec: &CouplingSpec, classification: &SpectralClassification) -> Result<Self> {
        let half = spec.half_row()?;
        let mut poly: Vec<Complex<f64>> =
            laurent_coefficients(&half).into_iter().map(|c| Complex::new(c, 0.0)).collect();
        for root in &classification.roots {
            let w = cis(root.angle);
            for _ in 0..2 * root.multiplicity {
                poly = deflate(&poly, w);
            }
        }
        Ok(Self { poly, shift: half.len() - 1, roots: classification.roots.clone() })
    }

    // z^{R−1} λ = Q(z) Π (z − w_r)^{2m_r} and (2 − 2cos(θ − α)) = −w̄ z̄ (z − w)²,
    // so λ₀ = Q(z) z^{−(R−1)} Π (−w_r z)^{m_r}.
    pub fn eval(&self, theta: f64) -> f64 {
        let z = cis(theta);
        let mut value = self.poly.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c);
        value *= cis(-(self.shift as f64) * theta);
        for root in &self.roots {
            let factor = -cis(root.angle) * z;
            value *= factor.powu(root.multiplicity);
        }
        value.re
    }
}

/// Synthetic division by `(z − w)`, remainder dropped.
fn cis(theta: f64) -> Complex<f64> {
    Complex::new(theta.cos(), theta.sin())
}

fn deflate(poly: &[Complex<f64>], w: Complex<f64>) -> Vec<Complex<f64>> {
    let n = poly.len() - 1;
    let mut out = vec![Complex::new(0.0, 0.0); n];
    let mut carry = poly[n];
    for i in (0..n).rev() {
        out[i] = carry;
        carry = poly[i] + carry * w;
    }
    out
}

/// Fourier coefficients `c_k` of `ln λ^{1/2}(θ)`, `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SzegoCoefficients {
    pub coefficients: Vec<f64>,
    pub order: usize,
    /// Estimate of `Σ_{k>K} k c_k²` from a geometric envelope fit.
    pub tail_estimate: f64,
    /// Set when the symbol has unit-circle zeros; the coefficients then decay
    /// only like `1/k` and the Szegő limit does not exist.
    pub singular: bool,
}

impl SzegoCoefficients {
    pub fn c0(&self) -> f64 {
        self.coefficients[0]
    }

    /// Envelope `|c_k| ≈ C ρ^k` fitted over `k ∈ [K/4, K]`, skipping
    /// coefficients lost in round-off. Returns `(C, ρ, R²)`.
    pub fn decay_envelope(&self) -> Option<(f64, f64, f64)> {
        let k_max = self.order;
        let floor = 1e-14 * self.coefficients.iter().skip(1).fold(0.0, |m: f64, c| m.max(c.abs()));
        let (xs, ys): (Vec<f64>, Vec<f64>) = (core::cmp::max(1, k_max / 4)..=k_max)
            .filter(|&k| self.coefficients[k].abs() > floor)
            .map(|k| (k as f64, self.coefficients[k].abs().ln()))
            .unzip();
        let fit = fit_line(&xs, &ys).ok()?;
        Some((fit.intercept.exp(), fit.slope.exp(), fit.r_squared))
    }
}

/// Fourier coefficients of `ln λ^{1/2}` on a 1D symbol.
///
/// The smooth part is integrated with the trapezoidal rule on `M = max(4096, 32 K)`
/// midpoints. For a singular symbol only `½ ln λ₀` goes through the quadrature;
/// each root factor contributes `½ m_r ln(2 − 2cos(θ − α_r))`, whose
/// coefficients are `−m_r cos(k α_r) / (2k)` for `k ≥ 1` and zero for `k = 0`.
pub fn szego_coefficients(spec: &CouplingSpec, order: usize) -> Result<SzegoCoefficients> {
    let half = spec.half_row()?;
    let classification = classify(spec)?;
    let singular = !classification.is_regular();
    let regular = RegularPart::new(spec, &classification)?;
    let m = core::cmp::max(4096, 32 * order);

    // θ_i = π(2i + 1)/M; cos(k θ_i) looked up by the exact index k(2i + 1) mod 2M.
    let cos_table: Vec<f64> = (0..2 * m).map(|i| (PI * i as f64 / m as f64).cos()).collect();
    let log_root: Vec<f64> = (0..m)
        .map(|i| {
            let theta = PI * (2 * i + 1) as f64 / m as f64;
            let value = if singular { regular.eval(theta) } else { symbol_derivative(&half, theta, 0) };
            0.5 * value.ln()
        })
        .collect();
    let coefficients: Vec<f64> = (0..=order)
        .map(|k| {
            let sum: f64 = log_root.iter().enumerate().map(|(i, g)| g * cos_table[(k * (2 * i + 1)) % (2 * m)]).sum();
            let smooth = sum / m as f64;
            let roots: f64 = if k == 0 {
                0.0
            } else {
                classification
                    .roots
                    .iter()
                    .map(|r| -(r.multiplicity as f64) * (k as f64 * r.angle).cos() / (2.0 * k as f64))
                    .sum()
            };
            smooth + roots
        })
        .collect();

    let mut out = SzegoCoefficients { coefficients, order, tail_estimate: 0.0, singular };
    out.tail_estimate = match out.decay_envelope() {
        _ if order == 0 => 0.0,
        None => 0.0,
        Some((_, rho, _)) if rho >= 1.0 => f64::INFINITY,
        Some((c, rho, _)) => {
            let q = rho * rho;
            let k = order as f64;
            c * c * q.powf(k + 1.0) * ((k + 1.0) - k * q) / ((1.0 - q) * (1.0 - q))
        }
    };
    Ok(out)
}

/// `Σ_{k=1}^{K} k c_k²`, the constant in the strong Szegő limit and a lower
/// bound on the half-chain entropy of a gapped chain.
pub fn szego_lower_bound(coeffs: &SzegoCoefficients) -> f64 {
    coeffs.coefficients.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c * c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_coupling, build_eta_chain, EtaChainParams, Term};

    fn eta(eta: f64, n: usize) -> CouplingSpec {
        build_eta_chain(EtaChainParams { eta, n }).unwrap()
    }

    fn constant(v0: f64) -> CouplingSpec {
        build_coupling(alloc::vec![32], alloc::vec![Term::new([0], v0)]).unwrap()
    }

    fn r_of(eta: f64) -> f64 {
        eta - (eta * eta - 1.0).sqrt()
    }

    #[test]
    fn eval_eta_chain() {
        let s = eta(1.2, 64);
        assert!((spectral_eval(&s, &[0.0]) - 0.16).abs() < 1e-12);
        let expected = [5.76, 19.36, 5.76, 0.16];
        for (j, e) in expected.iter().enumerate() {
            let th = PI / 2.0 * (j + 1) as f64;
            assert!((spectral_eval(&s, &[th]) - e).abs() < 1e-12);
        }
        let c = constant(3.5);
        for th in [0.0, 1.0, 2.5, 6.0] {
            assert_eq!(spectral_eval(&c, &[th]), 3.5);
        }
    }

    #[test]
    fn four_site_grid_matches_aliased_dense_matrix() {
        // On four sites lags ±2 alias onto the same entry, whose weight is V_2 + V_{-2}.
        let m = DMatrix::from_fn(4, 4, |i, j| [7.76, -4.8, 2.0, -4.8][(j + 4 - i) % 4]);
        let mut dense: Vec<f64> = m.symmetric_eigenvalues().iter().cloned().collect();
        dense.sort_by(f64::total_cmp);
        let s = eta(1.2, 64);
        let mut sym: Vec<f64> = (1..=4).map(|j| spectral_eval(&s, &[PI / 2.0 * j as f64])).collect();
        sym.sort_by(f64::total_cmp);
        for (a, b) in dense.iter().zip(&sym) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let half = [5.0, -1.3, 0.4, 0.2];
        let h = 1e-4;
        for &th in &[0.3, 1.7, 4.0] {
            for q in 1..4 {
                let fd =
                    (symbol_derivative(&half, th + h, q - 1) - symbol_derivative(&half, th - h, q - 1)) / (2.0 * h);
                assert!((fd - symbol_derivative(&half, th, q)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify(&eta(1.2, 64)).unwrap();
        assert_eq!(c.kind, SpectralKind::Regular);
        assert!(c.roots.is_empty());
        assert!(c.widom_coefficient.to_bits() == 0);

        let c = classify(&eta(0.6, 64)).unwrap();
        assert_eq!(c.kind, SpectralKind::Singular);
        assert_eq!(c.roots.len(), 2);
        let t0 = 0.6f64.acos();
        assert!((c.roots[0].angle - t0).abs() < 1e-9);
        assert!((c.roots[1].angle - (TAU - t0)).abs() < 1e-9);
        assert!(c.roots.iter().all(|r| r.multiplicity == 1));
        assert_eq!(c.widom_coefficient, 0.5);

        assert!(classify(&constant(2.0)).unwrap().is_regular());
    }

    #[test]
    fn classify_eta_grid() {
        for i in 1..=20 {
            if i == 10 {
                continue;
            }
            let e = i as f64 / 10.0;
            let c = classify(&eta(e, 67)).unwrap();
            assert_eq!(c.kind == SpectralKind::Singular, e < 1.0, "eta {e}");
            if e < 1.0 {
                assert_eq!(c.widom_coefficient, 0.5);
            }
        }
    }

    #[test]
    fn classify_double_zero() {
        // λ(θ) = (2 − 2 cos θ)², a fourth-order zero at θ = 0 (m = 2).
        let s = build_coupling(
            alloc::vec![33],
            alloc::vec![Term::new([0], 6.0), Term::new([1], -4.0), Term::new([2], 1.0)],
        );
        // θ = 0 is always on the grid, so the finite lattice is rejected.
        assert!(matches!(s, Err(Error::NotPositive { .. })));
        // (2 − 2cos θ)² + shift: regular.
        let s = build_coupling(
            alloc::vec![33],
            alloc::vec![Term::new([0], 6.001), Term::new([1], -4.0), Term::new([2], 1.0)],
        )
        .unwrap();
        assert!(classify(&s).unwrap().is_regular());
    }

    #[test]
    fn classify_multiplicity_two_off_grid() {
        // λ(θ) = (2 − 2cos(θ − a))² (2 − 2cos(θ + a))², with a off the 41-site grid.
        let a = 1.0f64;
        // (2η − 2cos θ)^4 with η = cos a: square the η-chain stencil.
        let e = a.cos();
        // Two-sided stencil of the η chain, lags −2..=2, convolved with itself.
        let base = [1.0, -4.0 * e, 4.0 * e * e + 2.0, -4.0 * e, 1.0];
        let mut full = [0.0; 9];
        for (i, x) in base.iter().enumerate() {
            for (j, y) in base.iter().enumerate() {
                full[i + j] += x * y;
            }
        }
        let half = &full[4..];
        let terms = half.iter().enumerate().map(|(k, &v)| Term::new([k as i64], v)).collect();
        let s = build_coupling(alloc::vec![41], terms).unwrap();
        for th in [0.2, 1.3, 2.9] {
            let expected = (2.0 * e - 2.0 * th.cos()).powi(4);
            assert!((spectral_eval(&s, &[th]) - expected).abs() < 1e-10);
        }
        let c = classify(&s).unwrap();
        assert_eq!(c.roots.len(), 2);
        assert!(c.roots.iter().all(|r| r.multiplicity == 2));
        assert!((c.roots[0].angle - a).abs() < 1e-6);
        assert_eq!(c.widom_coefficient, 2.0);
    }

    #[test]
    fn regular_part() {
        let s = eta(1.2, 64);
        let c = classify(&s).unwrap();
        for th in [0.0, 0.7, 3.0] {
            let v = regular_part_eval(&s, &c, th).unwrap();
            assert!((v - spectral_eval(&s, &[th])).abs() < 1e-12);
        }

        // For η < 1 the whole symbol is singular factors: λ₀ ≡ 1.
        let s = eta(0.6, 64);
        let c = classify(&s).unwrap();
        let t0 = 0.6f64.acos();
        for th in [0.0, t0, 1.5, TAU - t0, 5.0] {
            assert!((regular_part_eval(&s, &c, th).unwrap() - 1.0).abs() < 1e-8, "{th}");
        }
    }

    #[test]
    fn regular_part_reconstructs_symbol() {
        let specs = [
            eta(0.3, 64),
            eta(0.85, 64),
            eta(1.4, 64),
            build_coupling(
                alloc::vec![64],
                alloc::vec![Term::new([0], 5.0), Term::new([1], -1.3), Term::new([3], 0.2)],
            )
            .unwrap(),
        ];
        for s in &specs {
            let c = classify(s).unwrap();
            for i in 0..1024 {
                let th = TAU * i as f64 / 1024.0;
                let l0 = regular_part_eval(s, &c, th).unwrap();
                assert!(l0 > 0.0);
                let prod: f64 =
                    c.roots.iter().map(|r| (2.0 - 2.0 * (th - r.angle).cos()).powi(r.multiplicity as i32)).product();
                let lam = spectral_eval(s, &[th]);
                assert!((l0 * prod - lam).abs() <= 1e-8 * lam.abs().max(1e-8 * s.lambda_max()), "{th}");
            }
        }
    }

    #[test]
    fn szego_constant_symbol() {
        let c = szego_coefficients(&constant(4.0), 16).unwrap();
        assert!((c.c0() - 2.0f64.ln()).abs() < 1e-13);
        assert!(c.coefficients[1..].iter().all(|x| x.abs() < 1e-15));
        assert!(szego_lower_bound(&c) < 1e-25);
    }

    #[test]
    fn szego_eta_closed_form() {
        let e = 1.2;
        let r = r_of(e);
        let c = szego_coefficients(&eta(e, 64), 60).unwrap();
        assert!(!c.singular);
        assert!((c.c0() - (e + (e * e - 1.0).sqrt()).ln()).abs() < 1e-10);
        assert!((c.c0() - 0.62236).abs() < 1e-5);
        for k in 1..=60 {
            assert!((c.coefficients[k] + r.powi(k as i32) / k as f64).abs() < 1e-10, "{k}");
        }
        let closed = -(1.0 - r * r).ln();
        assert!((szego_lower_bound(&c) - closed).abs() < 1e-10);
    }

    #[test]
    fn szego_bound_monotone_in_order() {
        let s = eta(1.1, 64);
        let mut last = 0.0;
        for k in [1, 2, 4, 8, 16, 32, 64] {
            let b = szego_lower_bound(&szego_coefficients(&s, k).unwrap());
            assert!(b >= last);
            last = b;
        }
    }

    #[test]
    fn szego_envelope_is_geometric() {
        for e in [1.2, 1.5, 2.0] {
            let c = szego_coefficients(&eta(e, 64), 24).unwrap();
            let (_, rho, r2) = c.decay_envelope().unwrap();
            assert!(rho < 1.0);
            assert!(r2 > 0.99, "{e} {r2}");
            assert!((rho - r_of(e)).abs() < 0.05);
            assert!(c.tail_estimate >= 0.0 && c.tail_estimate < 1e-6);
        }
    }

    #[test]
    fn szego_flags_singular() {
        let c = szego_coefficients(&eta(0.6, 64), 8).unwrap();
        assert!(c.singular);
    }

    #[test]
    fn szego_singular_closed_form() {
        // |2η − 2cos θ| = |1 − e^{i(θ−θ₀)}|·|1 − e^{i(θ+θ₀)}| with η = cos θ₀
        for e in [0.2f64, 0.6, 0.9] {
            let t0 = e.acos();
            let c = szego_coefficients(&eta(e, 64), 40).unwrap();
            assert!(c.c0().abs() < 1e-10);
            for k in 1..=40 {
                let exact = -(k as f64 * t0).cos() / k as f64;
                assert!((c.coefficients[k] - exact).abs() < 1e-10, "{e} {k}");
            }
        }
    }

    #[test]
    fn classify_needs_1d() {
        let s = build_coupling(alloc::vec![5, 5], alloc::vec![Term::new([0, 0], 1.0)]).unwrap();
        assert_eq!(classify(&s).unwrap_err(), Error::NotOneDimensional);
    }
}
