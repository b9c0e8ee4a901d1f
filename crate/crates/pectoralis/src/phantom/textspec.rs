//! PhantomSpec as a flat key-value text file (the `phantom` subcommand's
//! input format).
//!
//! ```text
//! width = 256
//! height = 256
//! orientation = left
//! edge = curved
//! c0 = 100
//! c1 = -0.3
//! c2 = -0.002
//! pectoral_level = 200
//! breast_level = 120
//! background_level = 10
//! noise_sigma = 6.5
//! seed = 42
//! blob = 40, 150, 9, 170     # cx, cy, radius, intensity; repeatable
//! ```
//!
//! Every key is optional and falls back to the default spec; unknown
//! keys are errors.

use super::{invalid, Blob, PectoralEdge, PhantomError, PhantomSpec, Texture};
use crate::kv::{KvError, KvFile};

const KEYS: &[&str] = &[
    "width",
    "height",
    "orientation",
    "edge",
    "angle_deg",
    "c0",
    "c1",
    "c2",
    "pectoral_level",
    "breast_level",
    "background_level",
    "texture",
    "noise_sigma",
    "seed",
    "blob",
];

/// Parse and validate a spec file.
pub fn parse_spec(text: &str) -> Result<PhantomSpec, PhantomError> {
    let kv = KvFile::parse(text)?;
    kv.check_known(KEYS)?;

    let mut spec = PhantomSpec::default();
    if let Some(v) = kv.get_parsed("width", "integer")? {
        spec.width = v;
    }
    if let Some(v) = kv.get_parsed("height", "integer")? {
        spec.height = v;
    }
    if let Some(v) = kv.get("orientation") {
        spec.orientation = v.parse().map_err(|_| KvError::BadValue {
            key: "orientation".into(),
            value: v.into(),
            expected: "left or right",
        })?;
    }
    if let Some(v) = kv.get_parsed("pectoral_level", "integer")? {
        spec.pectoral_level = v;
    }
    if let Some(v) = kv.get_parsed("breast_level", "integer")? {
        spec.breast_level = v;
    }
    if let Some(v) = kv.get_parsed("background_level", "integer")? {
        spec.background_level = v;
    }
    if let Some(v) = kv.get("texture") {
        spec.texture = match v {
            "plain" => Texture::Plain,
            "fibrous" => Texture::Fibrous,
            other => {
                return Err(KvError::BadValue {
                    key: "texture".into(),
                    value: other.into(),
                    expected: "plain or fibrous",
                }
                .into())
            }
        };
    }
    if let Some(v) = kv.get_parsed("noise_sigma", "number")? {
        spec.noise_sigma = v;
    }
    if let Some(v) = kv.get_parsed("seed", "integer")? {
        spec.seed = v;
    }

    let kind = kv.get("edge").unwrap_or("straight");
    spec.edge = match kind {
        "straight" => {
            for key in ["c0", "c1", "c2"] {
                if kv.get(key).is_some() {
                    return Err(invalid(format!("`{key}` only applies to a curved edge")));
                }
            }
            PectoralEdge::Straight {
                angle_deg: kv.get_parsed("angle_deg", "number")?.unwrap_or(60.0),
            }
        }
        "curved" => {
            if kv.get("angle_deg").is_some() {
                return Err(invalid("`angle_deg` only applies to a straight edge"));
            }
            PectoralEdge::Curved {
                c0: kv.require_parsed("c0", "number")?,
                c1: kv.require_parsed("c1", "number")?,
                c2: kv.require_parsed("c2", "number")?,
            }
        }
        other => {
            return Err(KvError::BadValue {
                key: "edge".into(),
                value: other.into(),
                expected: "straight or curved",
            }
            .into())
        }
    };

    for raw in kv.get_all("blob") {
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        let parsed: Option<Blob> = match fields.as_slice() {
            [cx, cy, r, level] => (|| {
                Some(Blob {
                    cx: cx.parse().ok()?,
                    cy: cy.parse().ok()?,
                    radius: r.parse().ok()?,
                    intensity: level.parse().ok()?,
                })
            })(),
            _ => None,
        };
        let blob = parsed.ok_or_else(|| KvError::BadValue {
            key: "blob".into(),
            value: raw.into(),
            expected: "cx, cy, radius, intensity",
        })?;
        spec.blobs.push(blob);
    }

    spec.validate()?;
    Ok(spec)
}

/// Render a spec back to the text format. `parse_spec` inverts this
/// exactly (floats print in shortest round-trip form).
pub fn format_spec(spec: &PhantomSpec) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let _ = writeln!(s, "width = {}", spec.width);
    let _ = writeln!(s, "height = {}", spec.height);
    let _ = writeln!(s, "orientation = {}", spec.orientation);
    match spec.edge {
        PectoralEdge::Straight { angle_deg } => {
            let _ = writeln!(s, "edge = straight");
            let _ = writeln!(s, "angle_deg = {angle_deg}");
        }
        PectoralEdge::Curved { c0, c1, c2 } => {
            let _ = writeln!(s, "edge = curved");
            let _ = writeln!(s, "c0 = {c0}");
            let _ = writeln!(s, "c1 = {c1}");
            let _ = writeln!(s, "c2 = {c2}");
        }
    }
    let _ = writeln!(s, "pectoral_level = {}", spec.pectoral_level);
    let _ = writeln!(s, "breast_level = {}", spec.breast_level);
    let _ = writeln!(s, "background_level = {}", spec.background_level);
    let texture = match spec.texture {
        Texture::Plain => "plain",
        Texture::Fibrous => "fibrous",
    };
    let _ = writeln!(s, "texture = {texture}");
    let _ = writeln!(s, "noise_sigma = {}", spec.noise_sigma);
    let _ = writeln!(s, "seed = {}", spec.seed);
    for b in &spec.blobs {
        let _ = writeln!(s, "blob = {}, {}, {}, {}", b.cx, b.cy, b.radius, b.intensity);
    }
    s
}
