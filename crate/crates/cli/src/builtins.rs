//! Scenarios bundled with the binary.

use crate::scenario::{parse_scenarios, ScenarioConfig};

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".json")))),*]
    };
}

const SOURCES: &[(&str, &str)] = bundled![
    "pauli_phi1",
    "pauli_basis_state",
    "gellmann_psi1",
    "gellmann_real_family",
    "gellmann_proportional_family",
    "gellmann_complex_family",
    "gellmann_unconstrained_family",
    "pauli_search_product",
    "pauli_search_bound",
    "gellmann_search_gap",
    "box_standard_eigenpairs",
    "box_standard_domain_pathology",
    "box_symmetric_eigenpairs",
    "box_symmetric_domain_shift",
    "box_symmetric_canonical_undefined",
    "xm_bound_eigenfunction",
    "xm_bound_cos_ground",
    "pt_two_level_unbroken",
    "pt_two_level_broken",
    "pt_hermitian_limit",
    "pt_random_unbroken",
    "pt_non_universality",
];

/// Every bundled scenario, in listing order.
pub fn builtin_scenarios() -> Vec<ScenarioConfig> {
    SOURCES
        .iter()
        .flat_map(|(name, text)| {
            parse_scenarios(text).unwrap_or_else(|e| panic!("bundled scenario {name} is invalid: {e}"))
        })
        .collect()
}

pub fn builtin(id: &str) -> Option<ScenarioConfig> {
    builtin_scenarios().into_iter().find(|c| c.scenario_id == id)
}

/// `(scenario_id, description)` for every bundled scenario.
pub fn list_builtin_scenarios() -> Vec<(String, String)> {
    builtin_scenarios()
        .into_iter()
        .map(|c| (c.scenario_id, c.description))
        .collect()
}
