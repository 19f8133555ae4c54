use crate::{Error, Result};

/// Size bounds for the exponential procedures.
///
/// The defaults are the documented ones; `POLYMETA_LIMITS` may override any
/// subset of them as a comma-separated `key=value` list, e.g.
/// `POLYMETA_LIMITS=coset_search=10,decompose=40`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum domain size of a materialized power structure.
    pub power_elements: usize,
    /// Maximum number of elements of an indicator structure.
    pub indicator_elements: usize,
    /// Maximum group order for subgroup enumeration.
    pub subgroup_order: usize,
    /// Maximum order for enumerating all groups up to isomorphism.
    pub group_enumeration_order: usize,
    /// Maximum domain size for the general coset-polymorphism search.
    pub coset_search_order: usize,
    /// Maximum vertex count for the exact matching+bipartite solver.
    pub decompose_vertices: usize,
    /// Maximum variable count for brute-force NAE-3SAT.
    pub nae_variables: usize,
    /// Maximum product of operation-table counts for the three-element
    /// model search.
    pub model_search_tables: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            power_elements: 1_000_000,
            indicator_elements: 1_000_000,
            subgroup_order: 48,
            group_enumeration_order: 12,
            coset_search_order: 12,
            decompose_vertices: 64,
            nae_variables: 24,
            model_search_tables: 10_000_000,
        }
    }
}

impl Limits {
    pub const ENV_VAR: &'static str = "POLYMETA_LIMITS";

    /// Defaults overridden by `POLYMETA_LIMITS`, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(overrides) => Self::default().with_overrides(&overrides),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_overrides(mut self, overrides: &str) -> Result<Self> {
        for item in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(1, format!("expected key=value, got {item:?}")))?;
            let value: u128 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(1, format!("bad number in {item:?}")))?;
            let small = || usize::try_from(value).unwrap_or(usize::MAX);
            match key.trim() {
                "power" => self.power_elements = small(),
                "indicator" => self.indicator_elements = small(),
                "subgroup_order" => self.subgroup_order = small(),
                "group_enumeration" => self.group_enumeration_order = small(),
                "coset_search" => self.coset_search_order = small(),
                "decompose" => self.decompose_vertices = small(),
                "nae" => self.nae_variables = small(),
                "model_tables" => self.model_search_tables = value,
                other => return Err(Error::parse(1, format!("unknown limit {other:?}"))),
            }
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let l = Limits::default()
            .with_overrides("coset_search=10, decompose=40")
            .unwrap();
        assert_eq!(l.coset_search_order, 10);
        assert_eq!(l.decompose_vertices, 40);
        assert_eq!(l.power_elements, 1_000_000);
        assert!(Limits::default().with_overrides("bogus=1").is_err());
        assert!(Limits::default().with_overrides("power").is_err());
    }
}
