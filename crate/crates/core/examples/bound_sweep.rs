//! Delsarte bounds over a range of degrees, solved in parallel.

use codebound::dgs::bound_table;

fn main() {
    let degrees: Vec<usize> = (1..=12).collect();
    for row in bound_table(4, 0.5, &degrees, 1000).unwrap() {
        match row.bound_real {
            Some(b) => println!("m={:>2}: {b:.6}", row.degree),
            None => println!("m={:>2}: no certificate", row.degree),
        }
    }
}
