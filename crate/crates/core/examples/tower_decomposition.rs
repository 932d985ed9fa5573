//! Decompose a tower `M/p^t` into free `Z/p^t[G/G_i]` summands and check the
//! certificates lift compatibly.
//!
//! ```bash
//! cargo run --example tower_decomposition
//! ```

use milnor_galois::galmodules::{decompose_tower, tower_compatibility_check, GModulePresentation};
use milnor_galois::modp_linalg::MatrixModPS;
use milnor_galois::params::PrimeParams;

fn main() -> Result<(), milnor_galois::error::Error> {
    // R[G]^2 ⊕ R over Z/4, G = Z/2
    let params = PrimeParams::new(2, 2, 1)?;
    let m = GModulePresentation::regular_representation(params, 2)?.direct_sum(&GModulePresentation::trivial(params, 1)?)?;
    let result = decompose_tower(&m.tower()?)?;
    println!("Jordan type mod p: {:?}", result.jordan_type);
    for (t, r) in result.stage_reports.iter().enumerate() {
        println!("stage {}: ranks {:?}, verified {}", t + 1, r.ranks, r.verified);
    }
    println!("certificates compatible: {}", tower_compatibility_check(2, &result.certificates));

    // a single Jordan block of size 2 for p = 3 is not of the expected shape
    let params = PrimeParams::new(3, 1, 1)?;
    let bad = GModulePresentation::new(params, MatrixModPS::new(3, 1, 2, 2, vec![1, 1, 0, 1])?)?;
    let report = decompose_tower(&[bad])?.report;
    println!("Jordan block of size 2, p = 3: {:?}", report.failure_reason);
    Ok(())
}
