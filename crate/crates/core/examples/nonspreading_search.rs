//! Random search for a nonspreading map of an interval that is not
//! nonexpansive.

use halpern::operators::{search_nonspreading_not_nonexpansive, OperatorKind, SearchConfig};

fn main() -> halpern::Result<()> {
    let cfg = SearchConfig {
        seed: 1,
        ..SearchConfig::default()
    };
    match search_nonspreading_not_nonexpansive(&cfg)? {
        Some(found) => {
            println!("found after {} candidates", found.candidates_tried);
            if let OperatorKind::PiecewiseAffine {
                offset,
                below,
                above,
                ..
            } = found.operator.kind()
            {
                println!("  switch at x = {offset:.4}");
                for (side, piece) in [("below", below), ("above", above)] {
                    println!(
                        "  {side}: x -> {:.4} x + {:.4}",
                        piece.matrix.get(0, 0),
                        piece.shift[0]
                    );
                }
            }
            println!(
                "  nonspreading max violation {:.2e} over {} pairs",
                found.nonspreading.definition.max_violation,
                found.nonspreading.definition.samples_tested
            );
            let (x, y) = &found.nonexpansive.worst_pair;
            println!(
                "  nonexpansive violated by {:.4} at x = {x}, y = {y}",
                found.nonexpansive.max_violation
            );
        }
        None => println!("no candidate survived in {} tries", cfg.candidates),
    }
    Ok(())
}
