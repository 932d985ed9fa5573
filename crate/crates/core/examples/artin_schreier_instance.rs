//! The extension `E = F(θ)`, `θ^p - θ = t`, over `F = F_p(t)`: split and inert
//! primes up to a degree bound and the resulting decomposition of `K_1/p^s`.
//!
//! ```bash
//! cargo run --example artin_schreier_instance
//! ```

use milnor_galois::artin_schreier::{
    build_k1_module, enumerate_orbits, include_f_to_e, norm_e_to_f, FactoredElement, FpPoly, InstanceReport, Side,
};
use milnor_galois::params::PrimeParams;

fn main() -> Result<(), milnor_galois::error::Error> {
    let f = FpPoly::parse(3, "t^4 + 2*t^2 + 1")?;
    println!("factor over F_3: {:?}", f.factor()?.factors.iter().map(|(g, e)| (g.display("t"), *e)).collect::<Vec<_>>());

    let theta = FactoredElement::from_poly(Side::E, &FpPoly::x(2))?;
    let n = norm_e_to_f(&theta)?;
    println!("N(θ) = {n}, ι(N(θ)) = {}", include_f_to_e(&n)?);

    let inst = enumerate_orbits(PrimeParams::new(2, 2, 1)?, 3)?;
    let module = build_k1_module(&inst, 2)?;
    let report = InstanceReport::new(&inst, &module);
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
