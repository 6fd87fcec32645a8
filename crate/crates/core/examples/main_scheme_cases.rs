//! The two-operator anchored scheme on two overlapping boxes in R^5.
//! The choice of beta decides which fixed set the iterates settle in.

use halpern::{
    distance, main_scheme, predicted_limit, Case, ConvexSet, Operator, Point, Schedule,
    SolverConfig,
};

fn main() -> halpern::Result<()> {
    let space = ConvexSet::whole_space(5)?;
    let t = Operator::projection(ConvexSet::cube(5, 0.0, 1.0)?, space.clone())?;
    let s = Operator::projection(ConvexSet::cube(5, 0.5, 1.5)?, space)?;
    let u = Point::filled(5, 2.0);
    let x1 = Point::filled(5, -1.0);

    let runs = [
        (Case::I, Schedule::one_minus_inverse_power(2.0)?),
        (Case::Ii, Schedule::inverse_power(2.0)?),
        (Case::Iii, Schedule::constant(0.5)?),
    ];
    for (case, beta) in runs {
        let cfg = SolverConfig::new(u.clone(), x1.clone(), Schedule::harmonic(1.0, 1.0)?)
            .beta(beta)
            .max_iters(20_000)
            .trace_stride(20_000);
        let trace = main_scheme(&t, &s, &cfg, case)?;
        let last = trace.last();
        let target = predicted_limit(case, &t, &s, &u);
        let target = target.point().expect("box fixed sets are known");
        println!(
            "case {case:?}: x_N[0] = {:.6}, target[0] = {:.3}, dist = {:.3e}, residual_T = {:.3e}, residual_S = {:.3e}",
            last.x[0],
            target[0],
            distance(&last.x, target)?,
            last.residual_t,
            last.residual_s.unwrap_or(f64::NAN),
        );
    }

    // a summable beta does not satisfy case iii
    let cfg =
        SolverConfig::new(u, x1, Schedule::harmonic(1.0, 1.0)?).beta(Schedule::inverse_power(2.0)?);
    if let Err(e) = main_scheme(&t, &s, &cfg, Case::Iii) {
        println!("rejected before running: {e}");
    }
    Ok(())
}
