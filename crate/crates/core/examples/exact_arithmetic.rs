//! Parsing, normalizing and evaluating the exact number types.

use delpezzo::exactmath::{parse_factored, parse_poly, parse_ratfn, poly_gcd};

fn main() {
    let a = parse_poly("3n-2").unwrap();
    let b = parse_poly("6n-5").unwrap();
    println!("gcd({a}, {b}) = {}", poly_gcd(&a, &b));

    let lhs = parse_factored("3n/((3n-2)(6n-5))").unwrap();
    println!("factored: {lhs}");
    println!("normalized: {}", lhs.value());
    println!("at n = 3: {}", lhs.eval_i64(3).unwrap());

    let r = parse_ratfn("(2n^2-n)/(4n^2-1)").unwrap();
    println!("(2n^2-n)/(4n^2-1) reduces to {r}");
    match parse_ratfn("1/(n-n)") {
        Ok(x) => println!("unexpected: {x}"),
        Err(e) => println!("rejected: {e}"),
    }
}
