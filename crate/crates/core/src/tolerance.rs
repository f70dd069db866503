/// Numerical thresholds shared by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    /// Reject a coupling when `min λ_j <= positivity * max λ_j`.
    pub positivity: f64,
    /// Companion-matrix roots closer than this to the unit circle are root candidates,
    /// and candidates closer than this in angle belong to one cluster.
    pub root_cluster: f64,
    /// A candidate is a true zero when `λ(α) < root_value * max λ`.
    pub root_value: f64,
    /// Symplectic eigenvalues in `[1 - mu_floor, 1)` are clamped to 1; below is an error.
    pub mu_floor: f64,
    /// Allowed disagreement between the position and momentum forms of the mutual information.
    pub identity: f64,
    /// Largest imaginary residue accepted from the kernel transform.
    pub imaginary: f64,
    /// Largest site count for which dense matrices are built.
    pub dense_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            positivity: 1e-12,
            root_cluster: 1e-3,
            root_value: 1e-8,
            mu_floor: 1e-9,
            identity: 1e-6,
            imaginary: 1e-10,
            dense_cap: 4096,
        }
    }
}

impl Tolerances {
    /// Sets a field by name; returns `false` for an unknown name.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        match name {
            "positivity" => self.positivity = value,
            "root_cluster" => self.root_cluster = value,
            "root_value" => self.root_value = value,
            "mu_floor" => self.mu_floor = value,
            "identity" => self.identity = value,
            "imaginary" => self.imaginary = value,
            "dense_cap" => self.dense_cap = value as usize,
            _ => return false,
        }
        true
    }
}
