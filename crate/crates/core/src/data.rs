//! The example files shipped under `data/`, embedded at build time.

/// The four-world generalized model separating `J2+` from
/// `IL⁻(J2, J4+, J5)`.
pub const J2PLUS_SEPARATION: &str = include_str!("../data/j2plus_separation.json");

/// The four-world generalized model separating `J4+` from
/// `IL⁻(J1, J4, J5)`.
pub const J4PLUS_SEPARATION: &str = include_str!("../data/j4plus_separation.json");

/// The registry as written by [`crate::kernel::registry_dump`].
pub const REGISTRY: &str = include_str!("../data/registry.json");
