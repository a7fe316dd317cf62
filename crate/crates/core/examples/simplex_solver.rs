//! Solve a small linear program and read off its shadow prices.

use codebound::linprog::{solve_lp, LinearProgram, Relation};

fn main() {
    // minimize -x - y  subject to  x + 2y <= 4,  3x + y <= 6,  x, y >= 0
    let mut lp = LinearProgram::new(vec![-1.0, -1.0]);
    lp.constrain(vec![1.0, 2.0], Relation::Le, 4.0);
    lp.constrain(vec![3.0, 1.0], Relation::Le, 6.0);

    let sol = solve_lp(&lp).unwrap();
    println!("status    {:?}", sol.status);
    println!("x         {:?}", sol.x);
    println!("objective {}", sol.objective_value);
    println!("duals     {:?}", sol.duals);
    println!("pivots    {}", sol.iterations);
}
