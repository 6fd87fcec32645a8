//! The recursion a_{n+1} <= (1 - alpha_n) a_n + alpha_n sigma_n + gamma_n on
//! a real Halpern trace, and the index sequence m_k on an oscillating
//! sequence.

use halpern::lemmas::{mainge_indices, xu_check, ScalarSeq, TraceColumn};
use halpern::{halpern_classic, inner, ConvexSet, Operator, Point, Schedule, SolverConfig};

fn main() -> halpern::Result<()> {
    // projection onto the unit ball with the anchor outside: the limit is p = u/||u||
    let space = ConvexSet::whole_space(2)?;
    let op = Operator::projection(ConvexSet::ball(Point::zeros(2), 1.0)?, space)?;
    let u = Point::new(vec![3.0, 4.0])?;
    let p = Point::new(vec![0.6, 0.8])?;
    let x1 = Point::new(vec![-1.0, 0.0])?;
    let cfg = SolverConfig::new(u.clone(), x1, Schedule::harmonic(1.0, 1.0)?).max_iters(5000);
    let mut trace = halpern_classic(&op, &cfg)?;
    trace.attach_target(&p);

    // a_n = ||x_n - p||^2, sigma_n = 2 <u - p, x_{n+1} - p>, gamma_n = 0
    let a = ScalarSeq::from_trace(&trace, TraceColumn::DistToTargetSquared)?;
    let n = a.len() - 1;
    let alpha = ScalarSeq::from_trace(&trace, TraceColumn::Alpha)?.values()[..n].to_vec();
    let u_minus_p = Point::new(vec![u[0] - p[0], u[1] - p[1]])?;
    let sigma = trace.rows[1..]
        .iter()
        .map(|row| {
            let d = Point::new(vec![row.x[0] - p[0], row.x[1] - p[1]])?;
            Ok(2.0 * inner(&u_minus_p, &d)?)
        })
        .collect::<halpern::Result<Vec<f64>>>()?;
    let r = xu_check(
        &a,
        &ScalarSeq::new("alpha", alpha)?,
        &ScalarSeq::new("sigma", sigma.clone())?,
        &ScalarSeq::new("gamma", vec![0.0; n])?,
    )?;
    println!(
        "recursion holds: {}, worst n = {}, worst violation {:.3e}",
        r.recursion_holds, r.worst_index, r.worst_violation
    );
    println!(
        "sigma_N = {:.3e}, tail max of a = {:.3e}",
        sigma[n - 1],
        r.tail_max_of_a
    );

    let gamma: Vec<f64> = (1..=30)
        .map(|n| ((n as f64) * 0.9).sin() / n as f64)
        .collect();
    let gamma = ScalarSeq::new("gamma", gamma)?;
    for (j, m) in mainge_indices(&gamma, 20).iter().enumerate() {
        let k = 20 + j;
        match m {
            Some(m) => println!(
                "k = {k:2}: m_k = {m:2}, gamma_k = {:+.4}, gamma_(m_k+1) = {:+.4}",
                gamma.get(k),
                gamma.get(m + 1)
            ),
            None => println!("k = {k:2}: undefined"),
        }
    }
    Ok(())
}
