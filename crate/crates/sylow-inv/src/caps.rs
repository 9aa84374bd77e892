//! Resource caps for the exact kernels.
//!
//! All caps can be overridden through the `SYLOW_INV_CAPS` environment
//! variable, a comma-separated `key=value` list, e.g.
//! `SYLOW_INV_CAPS=enum=16384,orbit=8192`. Recognized keys: `card`, `exp`,
//! `enum`, `orbit`, `dim`, `span`.

use std::sync::OnceLock;

#[derive(Debug, Clone)]
pub struct Caps {
    /// Largest constructible field cardinality p^s.
    pub cardinality: u64,
    /// Largest monomial exponent.
    pub exponent: u64,
    /// Largest group order that `enumerate_group` will expand.
    pub enumeration: u64,
    /// Largest orbit walked when forming orbit products.
    pub orbit: u64,
    /// Largest monomial-basis dimension for the invariant-space oracle.
    pub dimension: u64,
    /// Largest subspace cardinality expanded by brute-force products.
    pub span: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            cardinality: 1 << 16,
            exponent: 1 << 20,
            enumeration: 1 << 13,
            orbit: 1 << 12,
            dimension: 4096,
            span: 4096,
        }
    }
}

static CAPS: OnceLock<Caps> = OnceLock::new();

/// Process-wide caps, read once from the environment.
pub fn caps() -> &'static Caps {
    CAPS.get_or_init(|| {
        let mut c = Caps::default();
        if let Ok(spec) = std::env::var("SYLOW_INV_CAPS") {
            for part in spec.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let Some((key, val)) = part.split_once('=') else {
                    continue;
                };
                let Ok(v) = val.trim().parse::<u64>() else {
                    continue;
                };
                match key.trim() {
                    "card" => c.cardinality = v,
                    "exp" => c.exponent = v,
                    "enum" => c.enumeration = v,
                    "orbit" => c.orbit = v,
                    "dim" => c.dimension = v,
                    "span" => c.span = v,
                    _ => {}
                }
            }
        }
        c
    })
}
