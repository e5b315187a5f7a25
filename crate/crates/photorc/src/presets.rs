//! Shipped configuration presets.

use crate::config::{self, ConfigError, Settings};

const PRESETS: &[(&str, &str)] = &[
    ("r1", include_str!("../presets/r1.conf")),
    ("r2", include_str!("../presets/r2.conf")),
    ("b2b", include_str!("../presets/b2b.conf")),
    ("fig4a", include_str!("../presets/fig4a.conf")),
    ("fig4a-desk", include_str!("../presets/fig4a-desk.conf")),
    ("fig4b", include_str!("../presets/fig4b.conf")),
    ("fig4b-desk", include_str!("../presets/fig4b-desk.conf")),
    ("fig6", include_str!("../presets/fig6.conf")),
    ("fig6-desk", include_str!("../presets/fig6-desk.conf")),
    ("fig7a", include_str!("../presets/fig7a.conf")),
    ("fig7a-desk", include_str!("../presets/fig7a-desk.conf")),
    ("fig7b", include_str!("../presets/fig7b.conf")),
    ("fig7b-desk", include_str!("../presets/fig7b-desk.conf")),
    ("fig8", include_str!("../presets/fig8.conf")),
    ("fig8-desk", include_str!("../presets/fig8-desk.conf")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Loads preset `name`. With `desk`, a `-desk` variant is preferred when
/// one exists; otherwise the experiment is reduced with
/// `ExperimentConfig::desk_scale`.
pub fn load(name: &str, desk: bool) -> Result<Settings, ConfigError> {
    let desk_name = format!("{name}-desk");
    let (text, scaled) = match (desk, text(&desk_name), text(name)) {
        (true, Some(t), _) => (t, true),
        (_, _, Some(t)) => (t, false),
        _ => {
            return Err(ConfigError {
                line: None,
                key: "--preset".into(),
                reason: format!(
                    "unknown preset `{name}`; available: {}",
                    names().collect::<Vec<_>>().join(", ")
                ),
            })
        }
    };
    let mut s = config::parse(text, Settings::default())?;
    if desk && !scaled {
        s.experiment = s.experiment.desk_scale();
    }
    Ok(s)
}
