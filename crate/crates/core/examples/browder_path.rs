//! The Browder path z_t = t u + (1 - t) T z_t for a quarter-turn rotation.
//! Fix(T) = {0}, so z_t -> 0 as t -> 0; here ||z_t|| = t / sqrt(1 + (1-t)^2).

use halpern::{browder_path, norm, ConvexSet, Operator, Point};

fn main() -> halpern::Result<()> {
    let domain = ConvexSet::ball(Point::zeros(2), 2.0)?;
    let rot = Operator::rotation(std::f64::consts::FRAC_PI_2, domain)?;
    let u = Point::new(vec![1.0, 0.0])?;

    let ts = [0.5, 0.1, 0.01, 0.001];
    println!(
        "{:>8} {:>22} {:>22} {:>8}",
        "t", "||z_t||", "closed form", "inner"
    );
    for bp in browder_path(&rot, &u, &ts, 1e-12)? {
        let exact = bp.t / (1.0 + (1.0 - bp.t).powi(2)).sqrt();
        println!(
            "{:>8} {:>22.15e} {:>22.15e} {:>8}",
            bp.t,
            norm(&bp.z),
            exact,
            bp.inner_steps
        );
    }
    Ok(())
}
