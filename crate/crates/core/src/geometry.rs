//! Newton polytope of the family, its weight function and the Hodge polygon.
//!
//! The polytope is the triangle with vertices `(-1,-1)`, `(n,0)`, `(0,1)`.
//! Its weight function is
//!
//! ```text
//! w(a, b) = a/n + b + (2n+1)/n * max(0, -a, -b)
//! ```
//!
//! and the Hodge numbers come from counting lattice points by weight level
//! `k/n` and taking a second alternating difference in steps of `n`.

use num_traits::Zero;
use serde::Serialize;

use crate::polygon::PolygonData;
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub const fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }
}

impl std::ops::Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a + o.a, self.b + o.b)
    }
}

/// All lattice points of weight exactly `k/n`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightLevel {
    pub n: u32,
    pub k: u32,
    pub points: Vec<LatticePoint>,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HodgeData {
    pub n: u32,
    /// `w[k]` = number of lattice points of weight `k/n`, `0 ≤ k ≤ 2n`.
    pub w: Vec<u64>,
    /// Hodge numbers `h[k]`, `0 ≤ k ≤ 2n`.
    pub h: Vec<i64>,
    pub polygon: PolygonData,
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("family degree n must be at least 2, got {n}")));
    }
    Ok(())
}

/// `n` times the weight, an integer.
fn scaled_weight(n: i64, pt: LatticePoint) -> i64 {
    let m = 0.max(-pt.a).max(-pt.b);
    pt.a + n * pt.b + (2 * n + 1) * m
}

pub fn weight(n: u32, pt: LatticePoint) -> Rational {
    Rational::new(scaled_weight(n as i64, pt).into(), (n as i64).into())
}

/// Scans the box containing the dilation `(k/n)·Δ` and keeps the points of
/// weight exactly `k/n`. Points are returned sorted.
pub fn enumerate_weight_level(n: u32, k: u32) -> Result<WeightLevel> {
    check_n(n)?;
    let (ni, ki) = (n as i64, k as i64);
    let c = (ki + ni - 1) / ni;
    let mut points = Vec::new();
    for a in (-c - 1)..=ki {
        for b in (-c - 1)..=(c + 1) {
            let pt = LatticePoint::new(a, b);
            if scaled_weight(ni, pt) == ki {
                points.push(pt);
            }
        }
    }
    points.sort();
    let count = points.len();
    Ok(WeightLevel { n, k, points, count })
}

/// Lattice-point counts by level, Hodge numbers and the Hodge polygon built
/// as the lower hull of the cumulative points.
pub fn hodge_numbers(n: u32) -> Result<HodgeData> {
    check_n(n)?;
    let top = 2 * n;
    let w: Vec<u64> = (0..=top)
        .map(|k| enumerate_weight_level(n, k).map(|lvl| lvl.count as u64))
        .collect::<Result<_>>()?;
    let binom2 = [1i64, 2, 1];
    let h: Vec<i64> = (0..=top as usize)
        .map(|k| {
            (0..=2usize)
                .filter_map(|i| k.checked_sub(i * n as usize).map(|j| (i, j)))
                .map(|(i, j)| if i % 2 == 0 { 1 } else { -1 } * binom2[i] * w[j] as i64)
                .sum()
        })
        .collect();

    let total: i64 = h.iter().sum();
    if total != 2 * n as i64 + 1 || h.iter().any(|&x| x < 0) {
        return Err(Error::Inconsistent(format!(
            "Hodge numbers {h:?} for n = {n} do not sum to 2n+1 = {} or are negative",
            2 * n + 1
        )));
    }

    let mut points = vec![(0i64, Rational::zero())];
    let (mut x, mut y) = (0i64, 0i64);
    for (k, &hk) in h.iter().enumerate() {
        x += hk;
        y += k as i64 * hk;
        points.push((x, Rational::new(y.into(), (n as i64).into())));
    }
    let polygon = PolygonData::lower_hull(&points).expect("non-empty point set");
    Ok(HodgeData { n, w, h, polygon })
}

/// The Hodge polygon, cross-checked against the closed form with unit
/// segments of slopes `0, 1/n, …, 2n/n`.
pub fn hodge_polygon(n: u32) -> Result<PolygonData> {
    let data = hodge_numbers(n)?;
    let closed = hodge_closed_form(n);
    if data.polygon != closed {
        return Err(Error::Inconsistent(format!(
            "Hodge polygon for n = {n} differs from the closed form"
        )));
    }
    Ok(data.polygon)
}

pub fn hodge_closed_form(n: u32) -> PolygonData {
    PolygonData::from_slopes(
        (0..=2 * n as i64)
            .map(|i| Rational::new(i.into(), (n as i64).into()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        let mut out: Vec<_> = v.iter().map(|&(a, b)| LatticePoint::new(a, b)).collect();
        out.sort();
        out
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight(3, LatticePoint::new(0, 0)), rat(0, 1));
        assert_eq!(weight(3, LatticePoint::new(-1, -1)), rat(1, 1));
        assert_eq!(weight(3, LatticePoint::new(-1, 0)), rat(2, 1));
        assert_eq!(weight(5, LatticePoint::new(2, 0)), rat(2, 5));
    }

    #[test]
    fn polytope_vertices_have_weight_one() {
        for n in 2..8 {
            for v in [(-1, -1), (n as i64, 0), (0, 1)] {
                assert_eq!(weight(n, LatticePoint::new(v.0, v.1)), rat(1, 1));
            }
        }
    }

    #[test]
    fn weight_levels_for_cubic() {
        let l2 = enumerate_weight_level(3, 2).unwrap();
        assert_eq!(l2.points, pts(&[(2, 0)]));
        let l4 = enumerate_weight_level(3, 4).unwrap();
        assert_eq!(l4.points, pts(&[(1, 1), (4, 0), (0, -1)]));
        let l6 = enumerate_weight_level(3, 6).unwrap();
        assert_eq!(
            l6.points,
            pts(&[(3, 1), (6, 0), (0, 2), (-1, 0), (-2, -2), (2, -1)])
        );
        assert_eq!(l6.count, 6);
    }

    #[test]
    fn hodge_numbers_small() {
        let h3 = hodge_numbers(3).unwrap();
        assert_eq!(h3.w, vec![1, 1, 1, 3, 3, 3, 6]);
        assert_eq!(h3.h, vec![1; 7]);
        let h2 = hodge_numbers(2).unwrap();
        assert_eq!(h2.h, vec![1; 5]);
    }

    #[test]
    fn hodge_polygon_slopes() {
        let p3 = hodge_polygon(3).unwrap();
        let want: Vec<_> = [0, 1, 2, 3, 4, 5, 6].iter().map(|&i| rat(i, 3)).collect();
        assert_eq!(p3.slopes(), want.as_slice());
        let p2 = hodge_polygon(2).unwrap();
        assert_eq!(p2.endpoint(), (5, rat(5, 1)));
    }

    #[test]
    fn rejects_degree_one() {
        assert!(hodge_numbers(1).is_err());
        assert!(enumerate_weight_level(0, 3).is_err());
    }
}
