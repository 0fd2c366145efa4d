//! The q-calculus primitives: q-numbers, q-factorials, q-shifted powers,
//! the Jackson q-derivative and q-integral.
//!
//! ```text
//! cargo run --example q_calculus
//! ```

use qspline::qcalc::{
    jackson_integral, q_bracket, q_diff_quotient, q_factorial, q_power_expand, q_shifted_power,
};
use qspline::{Polynomial, QParam};

fn main() -> qspline::Result<()> {
    let q = QParam::new(0.5)?;
    println!("q = {}", q.get());
    for n in 0..=4 {
        println!("  [{n}]_q = {:<10} [{n}]_q! = {}", q_bracket(n, q), q_factorial(n, q));
    }

    // (x - 1)^3_q = (x - 1)(x - q)(x - q^2)
    let p = q_power_expand(1.0, 3, q);
    println!("(x - 1)^3_q = {p}");
    println!("  at x = 2: product {} / expanded {}", q_shifted_power(2.0, 1.0, 3, q), p.eval(2.0));
    // D_q (x - c)^n_q = [n]_q (x - c)^(n-1)_q
    println!("  D_q: {}", p.q_derivative(q));
    println!("  [3]_q (x - 1)^2_q: {}", q_power_expand(1.0, 2, q).scale(q_bracket(3, q)));

    // the difference quotient of x^4 agrees with the formal derivative
    let x4 = Polynomial::monomial(4);
    let quotient = q_diff_quotient(|x| x.powi(4), 1.3, q)?;
    println!("(f(qx) - f(x)) / ((q - 1) x) for x^4 at 1.3: {quotient}");
    println!("  formal D_q x^4 at 1.3:                   {}", x4.q_derivative(q).eval(1.3));

    // Jackson integral of x^2 on [0, 1.5] vs the q-antiderivative x^3 / [3]_q
    let series = jackson_integral(|t| t * t, 1.5, q, 1e-14)?;
    let exact = Polynomial::monomial(2).q_antiderivative(q).eval(1.5);
    println!("Jackson integral of t^2 on [0, 1.5]: {series} (antiderivative {exact})");
    Ok(())
}
