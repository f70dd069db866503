//! CSV layouts. Every file starts with a provenance comment
//! `# harm-ent <version> config=<hash>` followed by a header row.

use std::fmt::Write as _;

use harm_ent_core::scaling::SweepPoint;
use harm_ent_core::{CirculantKernel, CorrelationEstimate, DecayClass, EntanglementReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const REPORT_HEADER: &str = "N,N1,S,I,lower,upper,xi,decay_class";
pub const KERNEL_HEADER: &str = "lag,sqrt_value,inv_sqrt_value";
pub const SWEEP_HEADER: &str = "sweep_id,N,N1,eta_or_spec_hash,S,I,lower,upper";

pub fn provenance(config_hash: &str) -> String {
    format!("# harm-ent {VERSION} config={config_hash}\n")
}

/// Shortest round-trip representation, scientific outside `[1e-5, 1e16)`;
/// `nan`, `inf`, `-inf` for the rest.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

pub fn decay_name(class: DecayClass) -> &'static str {
    match class {
        DecayClass::Exponential => "Exponential",
        DecayClass::PowerLaw => "PowerLaw",
        DecayClass::Zero => "Zero",
    }
}

/// Row of the one-line report CSV. `N` and `N1` are site counts of the whole
/// torus and of the block. `xi` and `decay_class` are empty without a
/// correlation estimate.
pub fn report_row(report: &EntanglementReport, correlation: Option<&CorrelationEstimate>) -> String {
    let sites: usize = report.extents.iter().product();
    let block: usize = report.block.iter().product();
    let (xi, class) = match correlation {
        Some(c) => (num(c.xi), decay_name(c.decay_class).to_string()),
        None => (String::new(), String::new()),
    };
    format!(
        "{sites},{block},{},{},{},{},{xi},{class}",
        num(report.entropy),
        num(report.mutual_information),
        num(report.det_lower_bound),
        num(report.negativity_upper_bound),
    )
}

pub fn report_csv(config_hash: &str, report: &EntanglementReport, correlation: Option<&CorrelationEstimate>) -> String {
    format!("{}{REPORT_HEADER}\n{}\n", provenance(config_hash), report_row(report, correlation))
}

/// One row per site of the torus. Lags of multi-dimensional tori are written
/// as `;`-joined coordinates.
pub fn kernel_csv(config_hash: &str, kernel: &CirculantKernel) -> String {
    let torus = kernel.torus();
    let mut out = provenance(config_hash);
    out.push_str(KERNEL_HEADER);
    out.push('\n');
    for (i, (s, v)) in kernel.sqrt_row().iter().zip(kernel.inv_sqrt_row()).enumerate() {
        let lag = torus.coords(i).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";");
        writeln!(out, "{lag},{},{}", num(*s), num(*v)).unwrap();
    }
    out
}

pub fn sweep_rows(out: &mut String, sweep_id: &str, tag: &str, points: &[SweepPoint]) {
    for p in points {
        let r = &p.report;
        writeln!(
            out,
            "{sweep_id},{},{},{tag},{},{},{},{}",
            p.n,
            p.n1,
            num(r.entropy),
            num(r.mutual_information),
            num(r.det_lower_bound),
            num(r.negativity_upper_bound)
        )
        .unwrap();
    }
}

pub fn sweep_csv(config_hash: &str, tag: &str, points: &[SweepPoint]) -> String {
    let mut out = provenance(config_hash);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    sweep_rows(&mut out, config_hash, tag, points);
    out
}
