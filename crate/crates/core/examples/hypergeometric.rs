//! Gauss 2F1 across the plane: series, connection formulas, logarithmic cases
//! and the limit at z = 1.

use num_complex::Complex64 as C;
use sphere_twobody::hyperfun::{gauss_2f1_diag, gauss_connection, gauss_series, limit_near_one, GaussParams};

fn main() -> sphere_twobody::Result<()> {
    let z = C::new(0.45, 0.3);
    let p = GaussParams::new(C::new(0.3, 0.1), C::new(1.2, 0.0), C::new(2.1, -0.4), z);
    println!("series {} / connection {}", gauss_series(&p)?, gauss_connection(&p)?);

    for (a, b, g, z) in
        [(0.5, 0.5, 1.0, C::new(0.99, 0.0)), (1.0, 1.0, 2.0, C::new(-3.0, 0.5)), (0.25, 0.75, 1.0, C::new(0.7, 0.9)), (-3.0, 2.0, 0.5, C::new(-4.0, 0.0))]
    {
        let v = gauss_2f1_diag(&GaussParams::real(a, b, g, z))?;
        println!("2F1({a}, {b}; {g}; {z}) = {} [{:?}]", v.value, v.region);
    }

    let half = C::new(0.5, 0.0);
    println!("limit near 1 for (1, 1; 1/2): {} (π/2 = {})", limit_near_one(C::new(1.0, 0.0), C::new(1.0, 0.0), half)?, std::f64::consts::FRAC_PI_2);
    Ok(())
}
