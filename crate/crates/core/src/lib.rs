//! Finite (n+1)-valued Wajsberg algebras and their presentation as Boolean
//! algebras equipped with a divisor-indexed family of filters.

pub mod boolalg;
pub mod chain;
pub mod cli;
pub mod duality;
pub mod pairs;
pub mod stone;
pub mod suite;
pub mod wajsberg;
