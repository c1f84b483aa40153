//! Generating pairs, stabilizer chains and the strong symmetric genus of the
//! hyperoctahedral groups `B_n = Z_2 ≀ Σ_n`.

pub mod construct;
pub mod genus;
pub mod group_order;
pub mod lifting;
pub mod perm;
pub mod search;
pub mod signed;
