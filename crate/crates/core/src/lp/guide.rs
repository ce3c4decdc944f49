//! Floating-point guidance for the exact solver.
//!
//! HiGHS solves the full LP in doubles. Its output is only used to choose
//! which rows seed the exact LP and to propose a candidate profile; the
//! exact solver and an exact scan of every row decide the result.

use highs::{HighsModelStatus, RowProblem, Sense};
use num_traits::{ToPrimitive, Zero};

use super::rows::InequalityRow;
use crate::Rational;

/// Duals below this magnitude are treated as zero.
const DUAL_TOLERANCE: f64 = 1e-9;
/// Largest denominator tried when rationalizing a primal value.
const MAX_DENOMINATOR: i128 = 1 << 20;

pub(super) struct FloatGuide {
    /// Indices into the row list with a nonzero dual.
    pub support: Vec<usize>,
    /// Primal value of `h_A`, indexed by subset bits (`h_∅ = 0`).
    pub values: Vec<f64>,
}

/// Solves `max R` over `rows` with HiGHS; `None` unless it reports an optimum.
pub(super) fn float_guide(n: usize, rows: &[InequalityRow]) -> Option<FloatGuide> {
    let mut pb = RowProblem::default();
    let rate = pb.add_column(1.0, 0.0..);
    let vars: Vec<_> = (0..1usize << n).map(|b| (b != 0).then(|| pb.add_column(0.0, 0.0..))).collect();
    let mut kept = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let mut coeffs: Vec<(highs::Col, f64)> = row
            .terms
            .iter()
            .filter(|(s, _)| !s.is_empty())
            .map(|(s, c)| (vars[s.bits() as usize].unwrap(), c.to_f64().unwrap_or(0.0)))
            .collect();
        if !row.rate.is_zero() {
            coeffs.push((rate, row.rate.to_f64()?));
        }
        if coeffs.is_empty() || row.equality {
            continue;
        }
        pb.add_row(-row.constant.to_f64()?.., coeffs);
        kept.push(k);
    }
    let mut model = pb.optimise(Sense::Maximise);
    model.make_quiet();
    let solved = model.try_solve().ok()?;
    if solved.status() != HighsModelStatus::Optimal {
        return None;
    }
    let sol = solved.get_solution();
    let support = sol
        .dual_rows()
        .iter()
        .zip(&kept)
        .filter(|(d, _)| d.abs() > DUAL_TOLERANCE)
        .map(|(_, &k)| k)
        .collect();
    let cols = sol.columns();
    let values = (0..1usize << n).map(|b| if b == 0 { 0.0 } else { cols[b] }).collect();
    Some(FloatGuide { support, values })
}

/// Closest fraction with denominator at most [`MAX_DENOMINATOR`], by
/// continued fractions.
pub(super) fn rationalize(x: f64) -> Rational {
    let neg = x < 0.0;
    let mut rest = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > MAX_DENOMINATOR {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a as f64;
        if frac < 1e-12 || (p1 as f64 / q1 as f64 - x.abs()).abs() < 1e-12 {
            break;
        }
        rest = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::zero();
    }
    let r = Rational::new(p1, q1);
    if neg {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.4000000000000044), ratio(2, 5));
        assert_eq!(rationalize(11.0 / 28.0), ratio(11, 28));
        assert_eq!(rationalize(-5.0 / 13.0), ratio(-5, 13));
        assert_eq!(rationalize(0.0), ratio(0, 1));
        assert_eq!(rationalize(3.0), ratio(3, 1));
    }
}
