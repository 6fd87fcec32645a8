//! Halpern's scheme for T = I with alpha_n = 1/(n+1) telescopes:
//! x_n - u = (x_1 - u) / n. Compared with the theta and segmented variants.

use halpern::{
    distance, halpern_classic, halpern_segmented, halpern_theta, ConvexSet, Operator, Point,
    Schedule, SolverConfig,
};

fn main() -> halpern::Result<()> {
    let op = Operator::identity(ConvexSet::whole_space(4)?);
    let u = Point::new(vec![1.0, 0.0, -1.0, 0.5])?;
    let x1 = Point::new(vec![-1.0, 2.0, 0.0, 0.0])?;
    let cfg = SolverConfig::new(u.clone(), x1.clone(), Schedule::harmonic(1.0, 1.0)?)
        .max_iters(999)
        .trace_stride(100);

    let trace = halpern_classic(&op, &cfg)?;
    let d1 = distance(&x1, &u)?;
    for row in &trace.rows {
        let d = distance(&row.x, &u)?;
        println!(
            "n = {:4}  ||x_n - u|| = {d:.6e}  ||x_1 - u||/n = {:.6e}",
            row.n,
            d1 / row.n as f64
        );
    }

    // n^(-theta) is 1 at n = 1, so x_2 = u and the identity keeps it there
    let theta = halpern_theta(&op, 0.5, &cfg)?;
    println!(
        "theta = 0.5 final distance {:.3e}",
        distance(theta.final_point(), &u)?
    );
    let seg = halpern_segmented(&op, 0.3, &cfg)?;
    println!(
        "segmented final distance  {:.3e}",
        distance(seg.final_point(), &u)?
    );
    Ok(())
}
