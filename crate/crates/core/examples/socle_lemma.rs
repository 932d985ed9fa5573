//! Every nonzero ideal of `Z/p^s[Z/p^i]` contains the socle `p^(s-1)(τ-1)^(p^i-1)`.
//!
//! ```bash
//! cargo run --example socle_lemma
//! ```

use milnor_galois::grouprings::GroupRing;
use milnor_galois::params::PrimeParams;

fn main() -> Result<(), milnor_galois::error::Error> {
    let ring = GroupRing::new(PrimeParams::new(3, 2, 1)?, 1)?;
    let socle = ring.socle()?;
    println!("socle of Z/9[Z/3] in τ-basis: {:?}", socle.to_tau_basis());

    let b = ring.element(vec![3, 6, 0])?;
    let w = b.socle_witness()?;
    println!("b = {:?}, scaled by p^{}, multiplier γ = {:?}", b.coeffs(), w.scale_exponent, w.multiplier.coeffs());
    assert_eq!(w.multiplier.mul(&b)?, socle);

    // exhaustive: every nonzero element reaches the socle
    let total = ring.cardinality().unwrap();
    for idx in 1..total {
        let b = ring.element_from_index(idx);
        assert_eq!(b.socle_multiplier()?.mul(&b)?, socle);
    }
    println!("checked {} nonzero elements", total - 1);

    // p^(s-1)(τ-1)^(p^i) = 0
    let killed = ring.tau_minus_one().pow(3).scale(3);
    println!("3·(τ-1)^3 = 0: {}", killed.is_zero());
    Ok(())
}
