use crate::error::Error;
use crate::operators::SelfMap;
use crate::schedules::Case;
use crate::space::Point;

/// The strong limit a case of the two-operator scheme is expected to reach.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictedLimit {
    Known(Point),
    Unknown(String),
}

impl PredictedLimit {
    pub fn point(&self) -> Option<&Point> {
        match self {
            PredictedLimit::Known(p) => Some(p),
            PredictedLimit::Unknown(_) => None,
        }
    }
}

/// `P_Fix(T) u` (case i), `P_Fix(S) u` (case ii) or `P_{Fix(T) ∩ Fix(S)} u`
/// (case iii), when the fixed-point sets are known and representable.
pub fn predicted_limit<A, B>(case: Case, t: &A, s: &B, u: &Point) -> PredictedLimit
where
    A: SelfMap + ?Sized,
    B: SelfMap + ?Sized,
{
    let fix = match case {
        Case::I => match t.known_fix() {
            Some(f) => f.clone(),
            None => return PredictedLimit::Unknown("T has no known fixed set".into()),
        },
        Case::Ii => match s.known_fix() {
            Some(f) => f.clone(),
            None => return PredictedLimit::Unknown("S has no known fixed set".into()),
        },
        Case::Iii => match (t.known_fix(), s.known_fix()) {
            (Some(ft), Some(fs)) => match ft.intersect(fs) {
                Ok(Some(set)) => set,
                Ok(None) => {
                    return PredictedLimit::Unknown(format!(
                        "intersection of {} and {} is not representable",
                        ft.name(),
                        fs.name()
                    ))
                }
                Err(Error::EmptyIntersection) => {
                    return PredictedLimit::Unknown("fixed sets do not intersect".into())
                }
                Err(e) => return PredictedLimit::Unknown(e.to_string()),
            },
            _ => return PredictedLimit::Unknown("T or S has no known fixed set".into()),
        },
    };
    match fix.project(u) {
        Ok(p) => PredictedLimit::Known(p),
        Err(e) => PredictedLimit::Unknown(e.to_string()),
    }
}
