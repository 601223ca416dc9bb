//! Built-in acceptance corpus: 16 flat-color 224x224 icons.
//!
//! The source files live in `corpus/` at the repository root and are
//! embedded here so tests and benchmarks can use them without touching the
//! filesystem. Every icon starts with an explicit white background rect and
//! uses only flat fills whose channels are multiples of 8.

pub struct CorpusIcon {
    pub name: &'static str,
    pub svg: &'static str,
}

macro_rules! icon {
    ($name:literal) => {
        CorpusIcon {
            name: $name,
            svg: include_str!(concat!("../../../corpus/", $name, ".svg")),
        }
    };
}

pub const ICONS: [CorpusIcon; 16] = [
    icon!("badge"),
    icon!("bullseye"),
    icon!("checker"),
    icon!("diamond"),
    icon!("disk"),
    icon!("dot_grid"),
    icon!("halves"),
    icon!("house"),
    icon!("moon"),
    icon!("nested_squares"),
    icon!("plus"),
    icon!("quadrants"),
    icon!("ring"),
    icon!("square"),
    icon!("stripes"),
    icon!("twin_rings"),
];
