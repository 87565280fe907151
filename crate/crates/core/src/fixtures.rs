//! Bundled datasets. Sources are listed in `data/PROVENANCE.md`.

const GLASS_FIBRE: &str = include_str!("../data/glass_fibre.txt");
const ATHLETE_HEIGHTS: &str = include_str!("../data/athlete_heights.txt");

/// Names accepted by [`fixture`].
pub const NAMES: [&str; 2] = ["glass_fibre", "athlete_heights"];

fn parse(text: &str) -> Vec<f64> {
    text.split_whitespace()
        .map(|t| t.parse().expect("bundled fixture is numeric"))
        .collect()
}

/// Breaking strengths of 63 glass fibres of length 1.5 cm.
pub fn glass_fibre() -> Vec<f64> {
    parse(GLASS_FIBRE)
}

/// Heights in centimetres of 100 female athletes.
pub fn athlete_heights() -> Vec<f64> {
    parse(ATHLETE_HEIGHTS)
}

/// Look up a bundled dataset by name.
pub fn fixture(name: &str) -> Option<Vec<f64>> {
    match name {
        "glass_fibre" => Some(glass_fibre()),
        "athlete_heights" => Some(athlete_heights()),
        _ => None,
    }
}
