//! Sampling certificates for projections and their averaged maps, and a
//! map that fails them.

use halpern::{averaged, Certifier, ConvexSet, Matrix, Operator, Point};

fn main() -> halpern::Result<()> {
    let domain = ConvexSet::ball(Point::zeros(3), 3.0)?;
    let sets = [
        ConvexSet::ball(Point::zeros(3), 1.0)?,
        ConvexSet::cube(3, -0.5, 1.0)?,
        ConvexSet::halfspace(Point::new(vec![1.0, -2.0, 0.5])?, 0.25)?,
    ];
    let c = Certifier::new(10_000, 42)?;
    for set in sets {
        let name = set.name();
        let op = Operator::projection(set, domain.clone())?;
        let ns = c.nonspreading(&op)?;
        let reports = [
            c.nonexpansive(&op)?,
            c.quasi_nonexpansive(&op)?,
            c.inverse_strongly_monotone(&op)?,
            c.i_minus_s(&op)?,
            ns.definition,
            ns.characterization,
        ];
        for r in reports {
            println!(
                "{name:9} {:32} max rel. violation {:+.2e}  {}",
                r.inequality.as_str(),
                r.max_relative_violation,
                if r.passed() { "pass" } else { "FAIL" }
            );
        }
        for delta in [0.1, 0.5, 0.9] {
            let q = c.quasi_firmly(&averaged(op.clone(), delta)?)?;
            let k = c.firmly_coefficient(&averaged(op.clone(), delta)?)?;
            println!(
                "{name:9} averaged delta = {delta}: quasi-firmly {}, firmly coefficient ~ {:.3}",
                if q.passed() { "pass" } else { "FAIL" },
                k.estimated_coefficient.unwrap_or(f64::NAN)
            );
        }
    }

    let ball = ConvexSet::ball(Point::zeros(2), 1.0)?;
    let doubling = Operator::affine(Matrix::scaled_identity(2, 2.0), Point::zeros(2), ball)?;
    let r = c.nonexpansive(&doubling)?;
    let (x, y) = &r.worst_pair;
    println!(
        "x -> 2x on the unit ball: nonexpansive {} (violation {:.3} at x = {x}, y = {y})",
        if r.passed() { "pass" } else { "FAIL" },
        r.max_violation
    );
    Ok(())
}
