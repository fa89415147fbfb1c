//! Intersection numbers on the surface and the two-component split of H_x.

use delpezzo::catalog::reference_catalog;
use delpezzo::geometry::Coord;
use delpezzo::intersection::{anticanonical_square, hx_decomposition, section_product, HxDecomposition};

fn main() {
    let cat = reference_catalog();
    let f1 = cat.family(1).unwrap();
    println!("No. 1: K^2 = {}", anticanonical_square(f1));
    println!("No. 1: H_x.K = {}", section_product(f1, f1.weight(Coord::X), &f1.index));

    let f22 = cat.family(22).unwrap();
    if let HxDecomposition::Reducible(d) = hx_decomposition(f22).unwrap() {
        println!("No. 22: H_x = L + R with L = {{x = {} = 0}}", d.line[1]);
        println!("  L.K = {}", d.l_dot_k);
        println!("  R.K = {}", d.r_dot_k);
        println!("  L.R = {}", d.l_dot_r);
        println!("  L^2 = {}", d.l_sq);
        println!("  R^2 = {}", d.r_sq);
    }
}
