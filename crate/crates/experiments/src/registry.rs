//! Registered experiments and their default parameters.

use crate::config::ExperimentId;

pub struct RegistryEntry {
    pub id: ExperimentId,
    pub summary: &'static str,
    /// Flat TOML layered beneath every user config for this experiment.
    pub defaults: &'static str,
}

pub static REGISTRY: [RegistryEntry; 9] = [
    RegistryEntry {
        id: ExperimentId::Fig1Truncation,
        summary: "truncated expectation values, Schmidt weights and truncation-error scans of a quenched Gibbs purification",
        defaults: r#"
sizes = [12]
beta = 0.1
theta = 0.5
times = [0.0, 3.0, 6.0, 9.0, 12.0, 18.0, 24.0, 36.0, 48.0]
k = [1, 2, 4]
operators = ["Z0", "zstring"]
beta_scan = [0.5, 0.25, 0.125, 0.0625]
theta_scan = [0.5, 0.25, 0.125, 0.0625]
scan_theta = 0.5
scan_beta = 0.8
theta_scan_k = 4
time_power = 1.0
"#,
    },
    RegistryEntry {
        id: ExperimentId::Fig2HaarHierarchy,
        summary: "Renyi entropies of the nested top Schmidt states, Haar brickwork circuits",
        defaults: r#"
ensemble = "haar"
sizes = [10, 12, 14, 16]
samples = 10
epsilon = [0.4, 0.25, 0.1]
depth_ratio = [2.0]
levels = 3
"#,
    },
    RegistryEntry {
        id: ExperimentId::Fig3GibbsRenyi,
        summary: "saturated Renyi entropies of a quenched Gibbs purification and of its top Schmidt state",
        defaults: r#"
sizes = [8, 10, 12]
beta = 1.0
theta = 0.5
time_power = 2.0
levels = 2
"#,
    },
    RegistryEntry {
        id: ExperimentId::Fig4CliffordT,
        summary: "hierarchy Renyi entropies for Clifford+T brickwork circuits",
        defaults: r#"
ensemble = "clifford_t"
sizes = [10, 12, 14, 16]
samples = 30
epsilon = [0.1]
p_t = 0.5
depth_ratio = [2.0]
plateau = true
levels = 2
"#,
    },
    RegistryEntry {
        id: ExperimentId::Fig5U1,
        summary: "hierarchy Renyi entropies for U(1)-symmetric brickwork circuits",
        defaults: r#"
ensemble = "u1"
sizes = [10, 12, 14, 16]
samples = 10
epsilon = [0.4]
depth_ratio = [2.0]
plateau = true
levels = 2
"#,
    },
    RegistryEntry {
        id: ExperimentId::Fig6Timedep,
        summary: "time dependence of half-chain Renyi entropies (circuit or Gibbs quench)",
        defaults: r#"
model = "circuit"
ensemble = "haar"
sizes = [18]
epsilon = [0.4]
times = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 24.0, 28.0, 32.0, 36.0]
beta = 1.0
theta = 0.5
levels = 1
"#,
    },
    RegistryEntry {
        id: ExperimentId::Fig7VolumeCoeff,
        summary: "volume-law coefficient of S_1 against small beta and small theta",
        defaults: r#"
sizes = [8, 10, 12]
beta_scan = [0.25, 0.125, 0.0625, 0.03125]
theta_scan = [0.25, 0.125, 0.0625, 0.03125]
scan_theta = 1.0
scan_beta = 0.8
time_power = 2.0
"#,
    },
    RegistryEntry {
        id: ExperimentId::Fig8BthetaCollapse,
        summary: "truncation error against beta*theta over a small-parameter grid",
        defaults: r#"
sizes = [12]
beta_scan = [0.25, 0.125, 0.0625, 0.03125, 0.015625]
theta_scan = [0.25, 0.125, 0.0625, 0.03125, 0.015625]
k = [1, 2, 3, 4]
time_power = 1.0
"#,
    },
    RegistryEntry {
        id: ExperimentId::BoundsSuite,
        summary: "random instances of the Renyi, overlap and concentration inequalities",
        defaults: r#"
ensemble = "haar"
sizes = [8, 10, 12]
samples = 200
epsilon = [0.1, 0.25, 0.4]
depth_ratio = [0.0, 1.0, 2.0]
families = ["renyi", "overlap", "lemma"]
"#,
    },
];

pub fn entry(id: ExperimentId) -> &'static RegistryEntry {
    REGISTRY.iter().find(|e| e.id == id).expect("every id is registered")
}

/// One line per experiment: id, summary and default parameters.
pub fn listing() -> String {
    let mut out = String::new();
    for e in &REGISTRY {
        out.push_str(&format!("{:<22} {}\n", e.id.as_str(), e.summary));
        let params: Vec<String> = e
            .defaults
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.replace(" = ", "="))
            .collect();
        out.push_str(&format!("{:<22} {}\n", "", params.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_covers_every_id_once() {
        for id in ExperimentId::ALL {
            assert_eq!(REGISTRY.iter().filter(|e| e.id == id).count(), 1);
        }
        let listing = listing();
        assert!(listing.contains("fig8_btheta_collapse"));
        assert!(listing.contains("sizes=[10, 12, 14, 16]"));
    }
}
