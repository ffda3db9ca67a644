//! Annotated scenario templates, one per kind.

use super::Kind;

const TEMPLATES: [(Kind, &str); 9] = [
    (Kind::Classify, include_str!("../../../../scenarios/classify.toml")),
    (Kind::Growth, include_str!("../../../../scenarios/growth.toml")),
    (Kind::BettiRank, include_str!("../../../../scenarios/betti_rank.toml")),
    (Kind::Orbit, include_str!("../../../../scenarios/orbit.toml")),
    (Kind::Density, include_str!("../../../../scenarios/density.toml")),
    (Kind::Volume, include_str!("../../../../scenarios/volume.toml")),
    (Kind::Conjugacy, include_str!("../../../../scenarios/conjugacy.toml")),
    (Kind::GroupOrbit, include_str!("../../../../scenarios/group_orbit.toml")),
    (Kind::Projectivity, include_str!("../../../../scenarios/projectivity.toml")),
];

/// Template for one kind, or all templates separated by blank lines.
pub fn schema(kind: Option<Kind>) -> String {
    TEMPLATES
        .iter()
        .filter(|(k, _)| kind.map_or(true, |want| *k == want))
        .map(|(_, t)| *t)
        .collect::<Vec<_>>()
        .join("\n")
}
