//! Parallel sweep driver. Points are computed concurrently and merged in the
//! order of the requested sizes, so output does not depend on thread count.

use std::env;

use harm_ent_core::scaling::{half_block, sweep_point, PartitionRule, Sweep, SweepPoint};
use harm_ent_core::{build_kernel, report, CouplingSpec, Error, Partition, Result};
use rayon::prelude::*;

pub const THREADS_VAR: &str = "HARM_ENT_THREADS";

/// Thread cap from `HARM_ENT_THREADS`; `None` when unset, empty, zero or unparsable.
pub fn thread_cap() -> Option<usize> {
    env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` on a pool honouring [`thread_cap`].
pub fn in_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Same contract as [`harm_ent_core::scaling::entropy_sweep`]: resonant ring
/// sizes are skipped and recorded, any other failure aborts with the error of
/// the first failing size.
pub fn sweep<B>(builder: &B, sizes: &[usize], rule: PartitionRule) -> Result<Sweep>
where
    B: Fn(usize) -> Result<CouplingSpec> + Sync,
{
    let results: Vec<(usize, Result<SweepPoint>)> = in_pool(|| match rule {
        PartitionRule::HalfHalf => sizes.par_iter().map(|&n| (n, sweep_point(builder, n, half_block(n)))).collect(),
        PartitionRule::FixedRing(n) => match builder(n).and_then(|s| build_kernel(&s)) {
            Ok(kernel) => sizes
                .par_iter()
                .map(|&n1| (n1, report(&kernel, &Partition::interval(n1)).map(|report| SweepPoint { n, n1, report })))
                .collect(),
            Err(e) => vec![(n, Err(e))],
        },
    });
    let mut out = Sweep::default();
    for (size, r) in results {
        match r {
            Ok(p) => out.points.push(p),
            Err(e @ Error::NotPositive { .. }) if rule == PartitionRule::HalfHalf => out.skipped.push((size, e)),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use harm_ent_core::scaling::entropy_sweep;
    use harm_ent_core::{build_eta_chain, EtaChainParams};

    fn eta(e: f64) -> impl Fn(usize) -> Result<CouplingSpec> + Sync {
        move |n| build_eta_chain(EtaChainParams { eta: e, n })
    }

    #[test]
    fn matches_sequential_sweep() {
        let sizes = [23, 24, 25, 31, 47];
        let par = sweep(&eta(0.5), &sizes, PartitionRule::HalfHalf).unwrap();
        let seq = entropy_sweep(eta(0.5), &sizes, PartitionRule::HalfHalf, |_| {}).unwrap();
        assert_eq!(par.points, seq.points);
        assert_eq!(par.skipped, seq.skipped);

        let blocks = [3, 9, 17, 30];
        let par = sweep(&eta(1.3), &blocks, PartitionRule::FixedRing(64)).unwrap();
        let seq = entropy_sweep(eta(1.3), &blocks, PartitionRule::FixedRing(64), |_| {}).unwrap();
        assert_eq!(par.points, seq.points);
    }

    #[test]
    fn resonant_ring_is_an_error_for_block_sweeps() {
        assert!(sweep(&eta(0.5), &[3, 4], PartitionRule::FixedRing(24)).is_err());
    }
}
