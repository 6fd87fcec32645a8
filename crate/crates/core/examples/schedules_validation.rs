//! Schedule families, their symbolic tags, and which case hypotheses a pair
//! of schedules meets.

use halpern::{validate_anchor, validate_case, Case, Schedule};

fn main() -> halpern::Result<()> {
    let schedules = [
        Schedule::power(0.7)?,
        Schedule::harmonic(1.0, 1.0)?,
        Schedule::constant(0.5)?,
        Schedule::one_minus_inverse_power(2.0)?,
        Schedule::inverse_power(2.0)?,
        Schedule::custom(vec![0.9, 0.5, 0.25])?,
    ];
    for s in &schedules {
        let tags: Vec<String> = s.tags().iter().map(ToString::to_string).collect();
        let first: Vec<String> = (1..=4).map(|n| format!("{:.4}", s.value_at(n))).collect();
        println!("{s:?}\n  first values {first:?}\n  tags {tags:?}");
        match validate_anchor(s) {
            Ok(()) => println!("  usable as alpha"),
            Err(r) => println!("  not usable as alpha: {r}"),
        }
    }

    let alpha = Schedule::harmonic(1.0, 1.0)?;
    for beta in &schedules[2..] {
        for case in [Case::I, Case::Ii, Case::Iii] {
            let verdict = match validate_case(&alpha, beta, case) {
                Ok(()) => "ok".to_string(),
                Err(r) => r.to_string(),
            };
            println!("beta {beta:?}, case {case:?}: {verdict}");
        }
    }
    Ok(())
}
