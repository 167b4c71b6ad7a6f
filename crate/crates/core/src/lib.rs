//! Two-supplier Cournot electricity market under level-k bounded rationality.
//!
//! One supplier (`S`) maximizes its own profit, the other (`B`) is a
//! benevolent social planner maximizing social welfare and is limited by the
//! capacity `f` of the line connecting it to the rest of the network. Both
//! reason at a finite depth: a level-k supplier best responds to an opponent
//! it believes to be level-(k-1).
//!
//! The crate provides
//! - the market primitives ([`market`]) and best responses ([`best_response`]),
//! - level-k behavior in closed form and by iteration ([`level_k`]),
//! - welfare and price-of-rationality analysis ([`welfare`]),
//! - planner strategies under different information ([`strategies`]),
//! - cooperation-level utility design ([`design`]),
//! - brute-force grid oracles used to cross-check all of the above ([`oracles`]),
//! - a config-driven experiment harness ([`experiments`]).

pub mod best_response;
pub mod design;
pub mod error;
pub mod experiments;
pub mod level_k;
pub mod market;
pub mod oracles;
pub mod strategies;
pub mod welfare;

pub use design::CooperationLevel;
pub use error::{Error, Result};
pub use level_k::{Firm, LevelSpec, RelativeLevel};
pub use market::{MarketParams, StrategyProfile};
pub use strategies::RationalityDistribution;
pub use welfare::PorRegion;
