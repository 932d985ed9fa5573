pub mod error;
pub mod grouprings;
pub mod modp_linalg;
pub mod params;
pub mod galmodules;
pub mod artin_schreier;
pub mod milnor_symbols;
pub mod condition_star;
pub mod cli;
