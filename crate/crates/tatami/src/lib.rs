//! Exact enumeration and exhaustive generation of monomer-dimer tatami
//! tilings of square grids: tilings by 1x1 and 1x2 tiles in which no four
//! tiles meet at a point.
//!
//! The crate has three layers:
//!
//! * closed-form counts ([`counting`]) checked against a brute-force
//!   enumerator ([`oracle`]);
//! * the structure of tilings with fewer monomers than the grid side — one
//!   bidimer or vortex plus independently flippable diagonals
//!   ([`features`]);
//! * the maximum-monomer layer ([`maxmono`]): a ternary flip representation
//!   over the trivial running bond, a partition into classes generated by
//!   subset enumeration, and a Gray code whose step is a single diagonal
//!   flip.
//!
//! ```
//! use tatami::counting::count_tilings;
//! use tatami::oracle;
//!
//! let by_monomers = oracle::count_by_monomers(4);
//! assert_eq!(by_monomers[&2], 32);
//! assert_eq!(count_tilings(4, 2), 32u32.into());
//! ```

pub mod counting;
pub mod features;
pub mod maxmono;
pub mod oracle;
pub mod render;
pub mod tiling;

pub use features::{Diagonal, Feature, FeatureKind};
pub use tiling::{Tile, TileKind, Tiling};
