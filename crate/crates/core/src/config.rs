use serde::{Deserialize, Serialize};

/// Size limits for the exhaustive searches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    pub ring_order: usize,
    pub module_order: usize,
    /// Maximum number of submodules in one lattice.
    pub lattice: usize,
    /// Maximum number of homomorphisms materialized by one search.
    pub homs: usize,
    /// Maximum number of backtracking nodes visited by one search.
    pub search_nodes: usize,
    /// Maximum order of the cogenerator power used while building hulls.
    pub hull_ambient: usize,
    /// Power of M searched when certifying membership in sigma[M].
    pub sigma_depth: usize,
    /// Depth of the bounded M-singular submodule search.
    pub singular_depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            ring_order: 256,
            module_order: 1024,
            lattice: 20_000,
            homs: 16_384,
            search_nodes: 1 << 22,
            hull_ambient: 1 << 16,
            sigma_depth: 3,
            singular_depth: 2,
        }
    }
}

impl Caps {
    /// Parses `key=value` pairs separated by commas, e.g. `lattice=5000,homs=100000`.
    pub fn parse_overrides(mut self, spec: &str) -> Result<Self, String> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("cap `{key}` needs a non-negative integer"))?;
            let slot = match key.trim() {
                "ring_order" => &mut self.ring_order,
                "module_order" => &mut self.module_order,
                "lattice" => &mut self.lattice,
                "homs" => &mut self.homs,
                "search_nodes" => &mut self.search_nodes,
                "hull_ambient" => &mut self.hull_ambient,
                "sigma_depth" => &mut self.sigma_depth,
                "singular_depth" => &mut self.singular_depth,
                other => return Err(format!("unknown cap `{other}`")),
            };
            *slot = value;
        }
        Ok(self)
    }

    /// Defaults overridden by the `MODTHEORY_CAPS` environment variable.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var("MODTHEORY_CAPS") {
            Ok(spec) => Self::default().parse_overrides(&spec),
            Err(_) => Ok(Self::default()),
        }
    }
}

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled, and runs
    /// sequentially otherwise.
    #[default]
    Parallel,
}

/// Deliberate defects used to self-test the verification harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// `product(K, L)` returns zero whenever `K != L`.
    CorruptProduct,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Config {
    pub caps: Caps,
    pub execution: Execution,
    pub fault: Option<Fault>,
}

impl Config {
    pub fn sequential() -> Self {
        Self { execution: Execution::Sequential, ..Self::default() }
    }

    pub fn with_caps(caps: Caps) -> Self {
        Self { caps, ..Self::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let caps = Caps::default().parse_overrides("lattice=12, homs = 99").unwrap();
        assert_eq!(caps.lattice, 12);
        assert_eq!(caps.homs, 99);
        assert_eq!(caps.ring_order, 256);
        assert!(Caps::default().parse_overrides("bogus=1").is_err());
        assert!(Caps::default().parse_overrides("lattice").is_err());
    }
}
