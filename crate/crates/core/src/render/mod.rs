//! Static output: one SVG composite per canvas and a small HTML site.
//!
//! Images are referenced by IRI and never fetched. All coordinates are in
//! canvas units with the origin at the top-left; [`RenderOptions::scale`]
//! only changes the size the root `<svg>` asks to be displayed at.

mod html;
mod svg;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

pub use html::render_manifest_html;
pub use svg::render_canvas_svg;

use crate::model::Iri;
use crate::resolve::{round_half_up, Layer, PathPolicy, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("canvas {0} is linearized but has no render plan")]
    MissingPlan(Iri),
    #[error("invalid render options: {0}")]
    InvalidOptions(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    scale: Q,
    include_layers: BTreeSet<Layer>,
    path_policy: PathPolicy,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: Q::one(),
            include_layers: [Layer::Image, Layer::Text, Layer::Commentary].into(),
            path_policy: PathPolicy::FirstPath,
        }
    }
}

impl RenderOptions {
    /// Fails unless `scale` is positive and at least one layer is included.
    pub fn new(scale: Q, include_layers: BTreeSet<Layer>, path_policy: PathPolicy) -> Result<Self, RenderError> {
        if scale <= Q::zero() {
            return Err(RenderError::InvalidOptions(format!("scale {scale} is not positive")));
        }
        if include_layers.is_empty() {
            return Err(RenderError::InvalidOptions("no layers included".into()));
        }
        Ok(RenderOptions { scale, include_layers, path_policy })
    }

    pub fn scale(&self) -> Q {
        self.scale
    }

    pub fn include_layers(&self) -> &BTreeSet<Layer> {
        &self.include_layers
    }

    pub fn path_policy(&self) -> PathPolicy {
        self.path_policy
    }

    pub fn with_path_policy(mut self, policy: PathPolicy) -> Self {
        self.path_policy = policy;
        self
    }

    pub fn includes(&self, layer: Layer) -> bool {
        self.include_layers.contains(&layer)
    }
}

/// Rational as a short decimal: integers print bare, anything else with at
/// most four decimals, rounded half-up.
pub(crate) fn num(v: Q) -> String {
    if v.is_integer() {
        return v.to_integer().to_string();
    }
    let scaled = round_half_up(v * Q::from_integer(10_000));
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    let frac = format!("{:04}", abs % 10_000);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{}", abs / 10_000)
    } else {
        format!("{sign}{}.{frac}", abs / 10_000)
    }
}

pub(crate) fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_formatting() {
        assert_eq!(num(Q::from_integer(-3)), "-3");
        assert_eq!(num(Q::new(1, 2)), "0.5");
        assert_eq!(num(Q::new(2, 3)), "0.6667");
        assert_eq!(num(Q::new(-1, 4)), "-0.25");
        assert_eq!(num(Q::new(1, 100_000)), "0");
    }

    #[test]
    fn options_are_checked() {
        assert!(RenderOptions::new(Q::zero(), [Layer::Image].into(), PathPolicy::FirstPath).is_err());
        assert!(RenderOptions::new(Q::one(), BTreeSet::new(), PathPolicy::FirstPath).is_err());
        assert!(RenderOptions::new(Q::new(1, 2), [Layer::Text].into(), PathPolicy::FirstPath).is_ok());
    }

    #[test]
    fn escaping() {
        assert_eq!(escape_xml(r#"a<b & "c"'"#), "a&lt;b &amp; &quot;c&quot;&apos;");
    }
}
