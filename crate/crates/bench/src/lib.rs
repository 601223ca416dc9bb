//! Shared fixtures for the pipeline benchmarks.

use svgkit::model::SvgDocument;
use svgkit::parse_svg;

/// A corpus icon parsed into a document, by name.
pub fn icon_doc(name: &str) -> SvgDocument {
    let icon = svgkit::corpus::ICONS
        .iter()
        .find(|i| i.name == name)
        .unwrap_or_else(|| panic!("no corpus icon named {name}"));
    parse_svg(icon.svg).expect("corpus icons parse")
}
