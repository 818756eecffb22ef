//! Example files compiled into the binary, and input resolution.

use std::path::Path;

use anyhow::{bail, Context, Result};

pub const FILES: &[(&str, &str)] = &[
    ("chain2.vcat", include_str!("../corpus/chain2.vcat")),
    ("chain3.vcat", include_str!("../corpus/chain3.vcat")),
    ("chain2_dists.vcat", include_str!("../corpus/chain2_dists.vcat")),
    ("d_chain2.vcat", include_str!("../corpus/d_chain2.vcat")),
    ("d_discrete_pair.vcat", include_str!("../corpus/d_discrete_pair.vcat")),
    ("luk.quantale", include_str!("../corpus/luk.quantale")),
    ("m3.vcat", include_str!("../corpus/m3.vcat")),
    ("n5.vcat", include_str!("../corpus/n5.vcat")),
    ("one_top.vcat", include_str!("../corpus/one_top.vcat")),
    ("v_heyting3.vcat", include_str!("../corpus/v_heyting3.vcat")),
    ("v_lukasiewicz3.vcat", include_str!("../corpus/v_lukasiewicz3.vcat")),
    ("v_two.vcat", include_str!("../corpus/v_two.vcat")),
    ("vtimesv_r422.vcat", include_str!("../corpus/vtimesv_r422.vcat")),
    ("vtimesv_sugihara3.vcat", include_str!("../corpus/vtimesv_sugihara3.vcat")),
];

/// A shipped file by name, with or without its extension.
pub fn lookup(name: &str) -> Option<&'static str> {
    FILES
        .iter()
        .find(|(f, _)| *f == name || f.split('.').next() == Some(name))
        .map(|(_, src)| *src)
}

/// Contents of `arg`: a file on disk, else a shipped example of that name.
pub fn read(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.exists() {
        return std::fs::read_to_string(path).with_context(|| format!("reading {arg}"));
    }
    let base = path.file_name().and_then(|s| s.to_str()).unwrap_or(arg);
    match lookup(base) {
        Some(src) => Ok(src.to_string()),
        None => bail!("no such file or shipped example: {arg}"),
    }
}
