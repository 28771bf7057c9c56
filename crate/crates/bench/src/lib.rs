//! Shared fixtures for the criterion benchmarks.

use trafo_ensemble::rng::seeded;
use trafo_ensemble::synth::{random_panel, PanelShape};
use trafo_ensemble::MemberPanel;

/// Seeded panel of mixed-link cumulative models with exact outcomes.
pub fn fixture_panel(members: usize, classes: usize, instances: usize, seed: u64) -> MemberPanel {
    random_panel(
        &mut seeded(seed),
        PanelShape {
            members,
            classes,
            instances,
            censored_fraction: 0.0,
        },
    )
}
