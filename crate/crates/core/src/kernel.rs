//! Circulant functional calculus: `V^{1/2}`, `V^{−1/2}` and their partition blocks.
//!
//! On a periodic lattice `V` is diagonalized by the discrete Fourier transform,
//! so `(V^{±1/2})_k = (1/N) Σ_j λ_j^{±1/2} e^{−2πi j·k/N}` holds exactly at
//! finite `N`. The first rows are all that is stored; every block is read off
//! them by lag.

use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::dft;
use crate::lattice::{CouplingSpec, Torus};
use crate::linalg::circulant_block;
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantKernel {
    spec: CouplingSpec,
    sqrt_row: Vec<f64>,
    inv_sqrt_row: Vec<f64>,
}

impl CirculantKernel {
    pub fn spec(&self) -> &CouplingSpec {
        &self.spec
    }

    pub fn torus(&self) -> &Torus {
        self.spec.torus()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spec.eigenvalues()
    }

    /// First row of `V^{1/2}`, indexed by flat lag.
    pub fn sqrt_row(&self) -> &[f64] {
        &self.sqrt_row
    }

    /// First row of `V^{−1/2}`; in 1D, `inv_sqrt_row[l] ∝ ⟨q_i q_{i+l}⟩`.
    pub fn inv_sqrt_row(&self) -> &[f64] {
        &self.inv_sqrt_row
    }

    /// `ln det V^{1/2} = ½ Σ_j ln λ_j`.
    pub fn log_det_sqrt(&self) -> f64 {
        0.5 * self.eigenvalues().iter().map(|l| l.ln()).sum::<f64>()
    }
}

pub fn build_kernel(spec: &CouplingSpec) -> Result<CirculantKernel> {
    build_kernel_with(spec, &Tolerances::default())
}

pub fn build_kernel_with(spec: &CouplingSpec, tol: &Tolerances) -> Result<CirculantKernel> {
    if spec.lambda_min() <= 0.0 {
        return Err(Error::NotPositive { mode: Vec::new(), value: spec.lambda_min() });
    }
    let roots: Vec<f64> = spec.eigenvalues().iter().map(|l| l.sqrt()).collect();
    let inv: Vec<f64> = roots.iter().map(|r| 1.0 / r).collect();
    let (sqrt_row, im_a) = dft::inverse_real(&roots, spec.torus());
    let (inv_sqrt_row, im_b) = dft::inverse_real(&inv, spec.torus());

    let scale_a = sqrt_row.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let scale_b = inv_sqrt_row.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let residue = (im_a / scale_a).max(im_b / scale_b);
    if residue > tol.imaginary {
        return Err(Error::ImaginaryResidue(residue));
    }
    Ok(CirculantKernel { spec: spec.clone(), sqrt_row, inv_sqrt_row })
}

/// `|V^{−1/2}_l|` for `l = 1..=⌊(N−1)/2⌋`; beyond half the ring the periodic
/// image is closer.
pub fn kernel_row_decay(kernel: &CirculantKernel) -> Result<Vec<(usize, f64)>> {
    if kernel.spec.dimension() != 1 {
        return Err(Error::NotOneDimensional);
    }
    let n = kernel.spec.sites();
    Ok((1..=(n - 1) / 2).map(|l| (l, kernel.inv_sqrt_row[l].abs())).collect())
}

/// Circular convolution of two lag rows on a torus.
pub fn circular_convolve(torus: &Torus, a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = torus.sites();
    let zero = alloc::vec![0; torus.dimension()];
    (0..n)
        .map(|k| {
            let kc = torus.coords(k);
            (0..n)
                .map(|j| {
                    let jc = torus.coords(j);
                    // b evaluated at lag k − j
                    a[torus.lag_index(&jc, &zero)] * b[torus.lag_index(&kc, &jc)]
                })
                .sum()
        })
        .collect()
}

/// Inner region of a bipartition: the hyperrectangle `[0, n_1) × … × [0, n_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Partition {
    pub block: Vec<usize>,
}

impl Partition {
    /// Contiguous block of `n1` sites on a chain.
    pub fn interval(n1: usize) -> Self {
        Self { block: alloc::vec![n1] }
    }

    pub fn hyperrectangle(block: Vec<usize>) -> Self {
        Self { block }
    }

    pub fn inner_size(&self) -> usize {
        self.block.iter().product()
    }

    /// Inner and outer site coordinates, each in row-major order.
    pub fn split(&self, torus: &Torus) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
        if self.block.len() != torus.dimension() {
            return Err(Error::BadPartition("block dimension does not match lattice"));
        }
        if self.block.iter().zip(torus.extents()).any(|(&b, &n)| b > n) {
            return Err(Error::BadPartition("block exceeds lattice"));
        }
        let (inner, outer): (Vec<_>, Vec<_>) =
            (0..torus.sites()).map(|i| torus.coords(i)).partition(|c| c.iter().zip(&self.block).all(|(x, b)| x < b));
        if inner.is_empty() {
            return Err(Error::BadPartition("inner block is empty"));
        }
        if outer.is_empty() {
            return Err(Error::BadPartition("inner block covers the whole lattice"));
        }
        Ok((inner, outer))
    }

    /// Inner site coordinates only.
    pub fn inner_sites(&self, torus: &Torus) -> Result<Vec<Vec<usize>>> {
        if self.block.len() != torus.dimension() {
            return Err(Error::BadPartition("block dimension does not match lattice"));
        }
        let inner = self.inner_size();
        if inner == 0 {
            return Err(Error::BadPartition("inner block is empty"));
        }
        if self.block.iter().zip(torus.extents()).any(|(&b, &n)| b > n) || inner >= torus.sites() {
            return Err(Error::BadPartition("inner block covers the whole lattice"));
        }
        let sub = Torus::new(self.block.clone())?;
        Ok((0..inner).map(|i| sub.coords(i)).collect())
    }
}

/// `V^{−1/2} = [[A, B], [Bᵀ, C]]` and `V^{1/2} = [[D, E], [Eᵀ, F]]`, inner sites first.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionBlocks {
    pub partition: Partition,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub e: DMatrix<f64>,
    pub f: DMatrix<f64>,
}

pub fn extract_blocks(kernel: &CirculantKernel, partition: &Partition) -> Result<PartitionBlocks> {
    let torus = kernel.torus();
    let (inner, outer) = partition.split(torus)?;
    let inv = &kernel.inv_sqrt_row;
    let sq = &kernel.sqrt_row;
    Ok(PartitionBlocks {
        partition: partition.clone(),
        a: circulant_block(torus, inv, &inner, &inner),
        b: circulant_block(torus, inv, &inner, &outer),
        c: circulant_block(torus, inv, &outer, &outer),
        d: circulant_block(torus, sq, &inner, &inner),
        e: circulant_block(torus, sq, &inner, &outer),
        f: circulant_block(torus, sq, &outer, &outer),
    })
}

/// Only the inner blocks `(A, D)`, which is all the entropy needs.
pub fn inner_blocks(kernel: &CirculantKernel, partition: &Partition) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let torus = kernel.torus();
    let inner = partition.inner_sites(torus)?;
    Ok((
        circulant_block(torus, &kernel.inv_sqrt_row, &inner, &inner),
        circulant_block(torus, &kernel.sqrt_row, &inner, &inner),
    ))
}

/// Outer blocks `(C, F)`.
pub(crate) fn outer_blocks(kernel: &CirculantKernel, partition: &Partition) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let torus = kernel.torus();
    let (_, outer) = partition.split(torus)?;
    Ok((
        circulant_block(torus, &kernel.inv_sqrt_row, &outer, &outer),
        circulant_block(torus, &kernel.sqrt_row, &outer, &outer),
    ))
}

/// Dense reference path: `V^{±1/2}` from a symmetric eigendecomposition of
/// the full matrix, `f(V) = U f(Λ) Uᵀ`. Shares nothing with the Fourier route
/// besides the dense potential itself.
pub mod oracle {
    use super::*;
    use crate::lattice::dense_potential_with;

    #[derive(Debug, Clone)]
    pub struct DenseKernel {
        pub sqrt: DMatrix<f64>,
        pub inv_sqrt: DMatrix<f64>,
        pub eigenvalues: Vec<f64>,
    }

    impl DenseKernel {
        pub fn new(spec: &CouplingSpec) -> Result<Self> {
            Self::with_cap(spec, Tolerances::default().dense_cap)
        }

        pub fn with_cap(spec: &CouplingSpec, cap: usize) -> Result<Self> {
            let v = dense_potential_with(spec, cap)?;
            let eig = v.symmetric_eigen();
            let vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
            if vals.iter().any(|&l| l <= 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            let u = &eig.eigenvectors;
            let apply = |g: &dyn Fn(f64) -> f64| {
                let mut scaled = u.clone();
                for (j, &l) in vals.iter().enumerate() {
                    let s = g(l);
                    scaled.column_mut(j).scale_mut(s);
                }
                &scaled * u.transpose()
            };
            Ok(Self { sqrt: apply(&|l| l.sqrt()), inv_sqrt: apply(&|l| 1.0 / l.sqrt()), eigenvalues: vals })
        }

        /// `(A, B, C, D, E, F)` from the dense matrices, same site order as
        /// [`extract_blocks`](super::extract_blocks).
        pub fn blocks(&self, torus: &Torus, partition: &Partition) -> Result<PartitionBlocks> {
            let (inner, outer) = partition.split(torus)?;
            let ii: Vec<usize> = inner.iter().map(|c| torus.index(c)).collect();
            let oo: Vec<usize> = outer.iter().map(|c| torus.index(c)).collect();
            let pick =
                |m: &DMatrix<f64>, r: &[usize], c: &[usize]| DMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])]);
            Ok(PartitionBlocks {
                partition: partition.clone(),
                a: pick(&self.inv_sqrt, &ii, &ii),
                b: pick(&self.inv_sqrt, &ii, &oo),
                c: pick(&self.inv_sqrt, &oo, &oo),
                d: pick(&self.sqrt, &ii, &ii),
                e: pick(&self.sqrt, &ii, &oo),
                f: pick(&self.sqrt, &oo, &oo),
            })
        }
    }
}
