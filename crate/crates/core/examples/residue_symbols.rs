//! Milnor symbols `{x, y_1, ..., y_(m-1)}` mod `p^s`: residues, the norm/residue
//! square, and norm membership with certificates.
//!
//! ```bash
//! cargo run --example residue_symbols
//! ```

use milnor_galois::artin_schreier::{FactoredElement, FpPoly, Side};
use milnor_galois::milnor_symbols::{
    check_norm_residue_diagram, norm_membership_km, norm_symbols, random_computable_symbol, KmMembership, MilnorClass,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), milnor_galois::error::Error> {
    let x = FactoredElement::from_poly(Side::F, &FpPoly::parse(2, "t^2 + t + 1")?)?;
    let c = MilnorClass::alpha(&x, 3, 2)?;
    println!("{c} ↦ {} ↦ {}", c.residue_top()?, c.residue_top()?.residue_top()?);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sym = random_computable_symbol(3, 2, 1, &mut rng)?;
    println!("N({sym}) = {}, square commutes: {}", norm_symbols(&sym)?, check_norm_residue_diagram(&sym)?);

    for poly in ["t", "t + 1"] {
        let x = FactoredElement::from_poly(Side::F, &FpPoly::parse(2, poly)?)?;
        let c = MilnorClass::alpha(&x, 2, 1)?;
        match norm_membership_km(&c, 1)? {
            KmMembership::Member { certificate } => println!("{c} is the norm of {certificate}"),
            KmMembership::NonMember { endpoint, .. } => println!("{c} is not a norm: {endpoint:?}"),
            KmMembership::Unknown { reason } => println!("{c}: unknown ({reason})"),
        }
    }
    Ok(())
}
