use std::io::{self, Write};

use crate::space::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxItersReached,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxItersReached => "max_iters_reached",
        }
    }
}

/// One recorded iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub x: Point,
    /// `||x_n - T x_n||`
    pub residual_t: f64,
    /// `||x_n - S x_n||`, for two-operator schemes
    pub residual_s: Option<f64>,
    pub dist_to_target: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
}

/// Recorded iterates of a run. Rows are strictly increasing in `n`; the
/// first and last iterates are always present.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub rows: Vec<TraceRow>,
    pub status: Status,
}

impl IterationTrace {
    pub fn last(&self) -> &TraceRow {
        self.rows.last().expect("trace has at least one row")
    }

    pub fn first(&self) -> &TraceRow {
        &self.rows[0]
    }

    pub fn final_point(&self) -> &Point {
        &self.last().x
    }

    pub fn dim(&self) -> usize {
        self.first().x.dim()
    }

    /// Fills `dist_to_target` on every row.
    pub fn attach_target(&mut self, target: &Point) {
        for row in &mut self.rows {
            row.dist_to_target = Some(row.x.dist(target));
        }
    }

    /// CSV with header `n,alpha_n,beta_n,residual_T,residual_S,dist_to_target,x_0..`.
    /// Floats carry 17 significant digits; absent values are empty fields.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "n,alpha_n,beta_n,residual_T,residual_S,dist_to_target")?;
        for i in 0..self.dim() {
            write!(w, ",x_{i}")?;
        }
        writeln!(w)?;
        for row in &self.rows {
            write!(
                w,
                "{},{},{},{},{},{}",
                row.n,
                fmt_f64(row.alpha),
                fmt_f64(row.beta),
                fmt_f64(row.residual_t),
                row.residual_s.map(fmt_f64).unwrap_or_default(),
                row.dist_to_target.map(fmt_f64).unwrap_or_default(),
            )?;
            for c in row.x.coords() {
                write!(w, ",{}", fmt_f64(*c))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Collects rows at a fixed stride.
pub(crate) struct Recorder {
    stride: usize,
    rows: Vec<TraceRow>,
}

impl Recorder {
    pub(crate) fn new(stride: usize) -> Self {
        Recorder {
            stride: stride.max(1),
            rows: Vec::new(),
        }
    }

    /// Rows at n = 1, 1 + stride, ... are kept; the final row is pushed
    /// through [`Recorder::finish`].
    pub(crate) fn offer(&mut self, row: impl FnOnce() -> TraceRow, n: usize) {
        if (n - 1).is_multiple_of(self.stride) {
            self.rows.push(row());
        }
    }

    pub(crate) fn finish(mut self, last: TraceRow, status: Status) -> IterationTrace {
        if self.rows.last().map(|r| r.n) == Some(last.n) {
            self.rows.pop();
        }
        self.rows.push(last);
        IterationTrace {
            rows: self.rows,
            status,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        let v = 1.0 / 3.0;
        assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn csv_layout() {
        let trace = IterationTrace {
            rows: vec![TraceRow {
                n: 1,
                x: Point::new(vec![1.0, -2.0]).unwrap(),
                residual_t: 0.5,
                residual_s: None,
                dist_to_target: Some(0.25),
                alpha: 0.5,
                beta: 1.0,
            }],
            status: Status::MaxItersReached,
        };
        let csv = trace.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,alpha_n,beta_n,residual_T,residual_S,dist_to_target,x_0,x_1"
        );
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 8);
        assert_eq!(fields[0], "1");
        assert_eq!(fields[4], "");
        assert_eq!(fields[7].parse::<f64>().unwrap(), -2.0);
    }
}
