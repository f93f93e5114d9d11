//! The bundled corpus of groups, maps and windows, and the selftest manifest.
//!
//! Names are paths relative to the `corpus/` directory of this crate, for
//! example `maps/dyadic_fold.json`. The CLI reads them through `corpus:` paths.

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, Window};
use crate::maps::Homeo;

macro_rules! bundle {
    ($($name:literal,)*) => {
        /// Every bundled file as `(name, contents)`, sorted by name.
        pub const FILES: &[(&str, &str)] =
            &[$(($name, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/", $name)))),*];
    };
}

bundle! {
    "groups/dyadic.json",
    "groups/even.json",
    "groups/integers.json",
    "groups/rationals.json",
    "maps/dyadic_fold.json",
    "maps/identity_z.json",
    "maps/madic2_successor.json",
    "maps/minus_one_z.json",
    "maps/negation_dyadic.json",
    "maps/negation_rationals.json",
    "maps/negation_z.json",
    "maps/parity_successor.json",
    "maps/reflect_about_one_z.json",
    "maps/reflect_half_z.json",
    "maps/scale_two_dyadic.json",
    "maps/scrambled_negation_z.json",
    "maps/shift_five_z.json",
    "maps/shift_one_z.json",
    "maps/shift_three_z.json",
    "maps/shift_two_z.json",
    "maps/swap_zero_one_z.json",
    "maps/three_piece_dyadic.json",
    "selftest.json",
    "windows/dyadic_k2_1.json",
    "windows/dyadic_k4_2.json",
    "windows/dyadic_k5_4.json",
    "windows/rationals_d2_1.json",
    "windows/rationals_d4_1.json",
    "windows/z_0_3.json",
    "windows/z_10.json",
    "windows/z_1024.json",
    "windows/z_12.json",
    "windows/z_20.json",
    "windows/z_5.json",
    "windows/z_50.json",
}

pub fn get(name: &str) -> Option<&'static str> {
    FILES.binary_search_by_key(&name, |(n, _)| n).ok().map(|i| FILES[i].1)
}

pub fn parse<T: DeserializeOwned>(name: &str) -> Result<T> {
    let text = get(name).ok_or_else(|| {
        Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("no corpus file {name}")))
    })?;
    Ok(serde_json::from_str(text)?)
}

/// `maps/<name>.json`.
pub fn map(name: &str) -> Result<Homeo> {
    parse(&format!("maps/{name}.json"))
}

/// `groups/<name>.json`.
pub fn group(name: &str) -> Result<GroupDescriptor> {
    parse(&format!("groups/{name}.json"))
}

/// `windows/<name>.json`.
pub fn window(name: &str) -> Result<Window> {
    parse(&format!("windows/{name}.json"))
}
