//! Scenario-driven experiment runner behind the `gaussent` binary.

pub mod output;
pub mod run;
pub mod scenario;
pub mod verify;

pub use output::{write_all, write_csv};
pub use run::{run, ResultRow, RunOptions, RunOutput};
pub use scenario::{Method, Scenario};
pub use verify::{verify, VerifyReport};

use crate::{Error, Result};

/// Shipped scenario files, by name.
pub const PRESETS: [(&str, &str); 5] = [
    ("fig2", include_str!("../../presets/fig2.json")),
    ("fig4", include_str!("../../presets/fig4.json")),
    ("fig5", include_str!("../../presets/fig5.json")),
    ("fig6", include_str!("../../presets/fig6.json")),
    ("lmg", include_str!("../../presets/lmg.json")),
];

pub fn preset(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            let names: Vec<_> = PRESETS.iter().map(|(n, _)| *n).collect();
            Error::Config(format!(
                "unknown preset {name}; available: {}",
                names.join(", ")
            ))
        })
}
