use super::config::RunConfig;
use crate::{Error, Result};

/// Bundled figure-reproduction configs as `(name, JSON text)`.
pub const RECIPES: &[(&str, &str)] = &[
    ("fig2a", include_str!("../../recipes/fig2a.json")),
    ("fig2b", include_str!("../../recipes/fig2b.json")),
    ("fig2c", include_str!("../../recipes/fig2c.json")),
    ("fig2d", include_str!("../../recipes/fig2d.json")),
    ("fig3a", include_str!("../../recipes/fig3a.json")),
    ("fig3d", include_str!("../../recipes/fig3d.json")),
    ("fig3e", include_str!("../../recipes/fig3e.json")),
    ("fig3f", include_str!("../../recipes/fig3f.json")),
    ("fig3g", include_str!("../../recipes/fig3g.json")),
    ("fig4a", include_str!("../../recipes/fig4a.json")),
    ("fig4b", include_str!("../../recipes/fig4b.json")),
    ("fig4c", include_str!("../../recipes/fig4c.json")),
];

pub fn figure_recipes() -> Vec<&'static str> {
    RECIPES.iter().map(|(name, _)| *name).collect()
}

pub fn recipe_text(name: &str) -> Result<&'static str> {
    RECIPES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            Error::invalid(
                "recipe",
                format!(
                    "unknown recipe {name:?}; available: {}",
                    figure_recipes().join(", ")
                ),
            )
        })
}

pub fn recipe(name: &str) -> Result<RunConfig> {
    RunConfig::from_json(recipe_text(name)?)
}
