use crate::error::{invalid, Error, Result};
use crate::operators::SelfMap;
use crate::space::Point;

/// Path parameters at or below this are rejected: the inner contraction
/// factor `1 - t` makes the solve length grow like `1 / t`.
pub const MIN_PATH_T: f64 = 1e-4;

const MAX_INNER_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BrowderPoint {
    pub t: f64,
    pub z: Point,
    pub inner_steps: usize,
}

/// Solves `z_t = t u + (1 - t) T z_t` for each `t` by fixed-point iteration
/// of the contraction `x -> t u + (1 - t) T x`.
///
/// `t_values` must be strictly decreasing in `(MIN_PATH_T, 1)`. Each solve
/// warm-starts from the previous `z` (the first from `u`) and stops once
/// successive iterates are within `inner_tol * t`.
pub fn browder_path<M: SelfMap + ?Sized>(
    op: &M,
    u: &Point,
    t_values: &[f64],
    inner_tol: f64,
) -> Result<Vec<BrowderPoint>> {
    u.ensure_dim(op.dim())?;
    if !(inner_tol > 0.0) {
        return Err(invalid("inner_tol", "must be > 0"));
    }
    if t_values.is_empty() {
        return Err(invalid("t_values", "must not be empty"));
    }
    for (i, &t) in t_values.iter().enumerate() {
        if !(t > MIN_PATH_T && t < 1.0) {
            return Err(invalid(
                "t_values",
                format!("{t} is outside ({MIN_PATH_T}, 1)"),
            ));
        }
        if i > 0 && !(t < t_values[i - 1]) {
            return Err(invalid("t_values", "must be strictly decreasing"));
        }
    }

    let mut z = u.clone();
    let mut path = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let tol = inner_tol * t;
        let mut steps = 0;
        loop {
            let next = u.lincomb(t, &op.apply_unchecked(&z), 1.0 - t);
            steps += 1;
            let moved = next.dist(&z);
            z = next;
            if moved <= tol {
                break;
            }
            if steps >= MAX_INNER_STEPS {
                return Err(Error::InnerLoopExhausted { t, steps });
            }
        }
        path.push(BrowderPoint {
            t,
            z: z.clone(),
            inner_steps: steps,
        });
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Operator;
    use crate::sets::ConvexSet;
    use std::f64::consts::FRAC_PI_2;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_path_is_the_anchor() {
        let id = Operator::identity(ConvexSet::cube(2, -2.0, 2.0).unwrap());
        let u = p(&[0.5, -1.0]);
        for pt in browder_path(&id, &u, &[0.5, 0.1, 0.01], 1e-12).unwrap() {
            assert!(pt.z.dist(&u) <= 1e-12);
        }
    }

    #[test]
    fn projection_with_anchor_inside() {
        let op = Operator::projection(
            ConvexSet::cube(3, 0.0, 1.0).unwrap(),
            ConvexSet::cube(3, -2.0, 2.0).unwrap(),
        )
        .unwrap();
        let u = p(&[0.2, 0.9, 0.5]);
        for pt in browder_path(&op, &u, &[0.1, 0.01, 0.001], 1e-10).unwrap() {
            assert_eq!(pt.z, u);
        }
    }

    #[test]
    fn rotation_matches_linear_solve() {
        let rot =
            Operator::rotation(FRAC_PI_2, ConvexSet::ball(Point::zeros(2), 2.0).unwrap()).unwrap();
        let u = p(&[1.0, 0.0]);
        let path = browder_path(&rot, &u, &[0.1], 1e-10).unwrap();
        // (I - (1-t)R) z = t u with R the quarter turn:
        // z = t/(1 + s^2) (1, s), s = 1 - t
        let t = 0.1;
        let s = 1.0 - t;
        let exact = p(&[t / (1.0 + s * s), t * s / (1.0 + s * s)]);
        assert!(path[0].z.dist(&exact) <= 1e-9);
    }

    #[test]
    fn rejects_bad_t_values() {
        let id = Operator::identity(ConvexSet::cube(1, -1.0, 1.0).unwrap());
        let u = p(&[0.0]);
        assert!(browder_path(&id, &u, &[], 1e-10).is_err());
        assert!(browder_path(&id, &u, &[1.0], 1e-10).is_err());
        assert!(browder_path(&id, &u, &[1e-4], 1e-10).is_err());
        assert!(browder_path(&id, &u, &[1e-5], 1e-10).is_err());
        assert!(browder_path(&id, &u, &[0.01, 0.1], 1e-10).is_err());
        assert!(browder_path(&id, &u, &[0.1, 0.1], 1e-10).is_err());
        assert!(browder_path(&id, &u, &[0.1], 0.0).is_err());
    }
}
