//! Valuation argument ruling out the norm equations behind the lifting
//! condition, on explicit inputs and by seeded fuzzing.
//!
//! ```bash
//! cargo run --example condition_star
//! ```

use milnor_galois::condition_star::{check_equation_impossible, fuzz_condition_star, CoeffTower, FactoredMultivar, FuzzBounds, MultiPoly};

fn main() -> Result<(), milnor_galois::error::Error> {
    let tower = CoeffTower::new(2, 2, 5)?;
    println!("D = F_5[z]/({:?}), degree {}", tower.modulus(), tower.degree());

    // γ = 1/x_1 against the target exponent pattern c = (1, 0)
    let x1 = MultiPoly::monomial(tower.d_one(), vec![0, 1, 0]);
    let gamma = FactoredMultivar { unit: tower.d_one(), numerator: vec![], denominator: vec![(x1, 1)] };
    let r = check_equation_impossible(&tower, 1, &[1, 0], &gamma)?;
    println!("{}", serde_json::to_string_pretty(&r).unwrap());

    let report = fuzz_condition_star(&tower, 200, &FuzzBounds::default(), 42)?;
    println!("fuzz: {}/{} mismatches, cases {:?}", report.mismatches, report.trials, report.case_counts);
    Ok(())
}
