//! Smith form and linear solving over `Z/p^s`.
//!
//! ```bash
//! cargo run --example smith_solve
//! ```

use milnor_galois::modp_linalg::{MatrixModPS, Solution};

fn main() -> Result<(), milnor_galois::error::Error> {
    // over Z/8
    let a = MatrixModPS::new(2, 3, 3, 3, vec![2, 4, 6, 1, 3, 5, 4, 0, 4])?;
    let smith = a.smith_form();
    println!("Smith exponents: {:?}", smith.exponents);
    let d = smith.u.mul(&a)?.mul(&smith.v)?;
    assert_eq!(d, a.smith_diagonal(&smith.exponents));
    println!("U·A·V = {:?}", d.entries());

    let b = a.mul_vec(&[1, 2, 3])?;
    match a.solve(&b)? {
        Solution::Solved { particular, kernel } => {
            assert_eq!(a.mul_vec(&particular)?, b);
            println!("A x = {b:?}: x = {particular:?}, kernel generators {kernel:?}");
        }
        Solution::NoSolution => unreachable!(),
    }
    println!("A x = [1, 0, 0] solvable: {}", a.solve(&[1, 0, 0])? != Solution::NoSolution);
    println!("rank mod 2: {}", a.rank_mod_p());
    Ok(())
}
