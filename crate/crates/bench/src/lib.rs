//! Fixtures shared by the benchmarks.

use condscreen_core::simgen::{generate, Scenario, ScenarioSpec};
use condscreen_core::DataSet;

/// One replication of `scenario` at the given size, seeded so every run sees
/// the same data.
pub fn fixture(scenario: Scenario, n: usize, p: usize) -> DataSet {
    let spec = ScenarioSpec::new(scenario, n, p, 0.5, 7).expect("valid fixture");
    generate(&spec).expect("fixture generates").data
}
