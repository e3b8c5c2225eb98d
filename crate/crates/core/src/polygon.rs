//! Piecewise-linear polygons with integer break abscissae.

use num_traits::{Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::json::rational_value;
use crate::Rational;

/// A Newton or Hodge polygon.
///
/// `vertices` start at `(0, 0)` and have strictly increasing `x`; interior
/// vertices where the slope does not change are dropped. `slopes` holds one
/// entry per unit of horizontal length, so two polygons are equal exactly when
/// their slope lists are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonData {
    vertices: Vec<(i64, Rational)>,
    slopes: Vec<Rational>,
}

impl PolygonData {
    /// The chain obtained by laying unit segments with the given slopes end to
    /// end, in the given order (the list is not sorted).
    pub fn from_slopes(slopes: Vec<Rational>) -> Self {
        let mut vertices = vec![(0i64, Rational::zero())];
        let mut y = Rational::zero();
        for (i, s) in slopes.iter().enumerate() {
            y += s;
            let x = i as i64 + 1;
            let extend = i > 0 && slopes[i - 1] == *s;
            if extend {
                *vertices.last_mut().unwrap() = (x, y.clone());
            } else {
                vertices.push((x, y.clone()));
            }
        }
        PolygonData { vertices, slopes }
    }

    /// Lower convex hull of a point set. The points must include `(0, 0)` and
    /// have non-negative integer abscissae; duplicates in `x` keep the lowest
    /// `y`. Returns `None` for an empty set.
    pub fn lower_hull(points: &[(i64, Rational)]) -> Option<Self> {
        let mut pts: Vec<(i64, Rational)> = points.to_vec();
        pts.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        pts.dedup_by(|later, earlier| later.0 == earlier.0);
        if pts.is_empty() {
            return None;
        }
        let mut hull: Vec<(i64, Rational)> = Vec::with_capacity(pts.len());
        for pt in pts {
            while hull.len() >= 2 {
                let (x1, y1) = &hull[hull.len() - 2];
                let (x2, y2) = &hull[hull.len() - 1];
                // Drop the middle point unless it lies strictly below the chord.
                let lhs = (y2 - y1) * Rational::from_integer((pt.0 - x1).into());
                let rhs = (&pt.1 - y1) * Rational::from_integer((x2 - x1).into());
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let mut slopes = Vec::new();
        for w in hull.windows(2) {
            let dx = w[1].0 - w[0].0;
            let s = (&w[1].1 - &w[0].1) / Rational::from_integer(dx.into());
            slopes.extend(std::iter::repeat(s).take(dx as usize));
        }
        let origin = hull[0].clone();
        let mut poly = PolygonData::from_slopes(slopes);
        if origin != (0, Rational::zero()) {
            // Shift so that a hull not anchored at the origin still reports
            // its true vertices.
            for v in &mut poly.vertices {
                v.0 += origin.0;
                v.1 += &origin.1;
            }
        }
        Some(poly)
    }

    pub fn vertices(&self) -> &[(i64, Rational)] {
        &self.vertices
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn endpoint(&self) -> (i64, Rational) {
        self.vertices.last().cloned().expect("polygon has an origin vertex")
    }

    /// Height of the polygon at integer abscissa `x` (0 ≤ x ≤ len).
    pub fn y_at(&self, x: usize) -> Rational {
        self.slopes[..x].iter().fold(Rational::zero(), |acc, s| acc + s)
    }

    /// Slopes are nondecreasing.
    pub fn is_convex(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] <= w[1])
    }

    /// Same horizontal length and same endpoint, and `self` is never below
    /// `other` at any integer abscissa (both are linear between integers).
    pub fn lies_on_or_above(&self, other: &PolygonData) -> bool {
        if self.len() != other.len() || self.endpoint() != other.endpoint() {
            return false;
        }
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for (s, t) in self.slopes.iter().zip(&other.slopes) {
            a += s;
            b += t;
            if a < b {
                return false;
            }
        }
        true
    }

    /// Per-slope differences `self - other`; `None` if the lengths differ.
    pub fn slope_deviations(&self, other: &PolygonData) -> Option<Vec<Rational>> {
        (self.len() == other.len())
            .then(|| self.slopes.iter().zip(&other.slopes).map(|(a, b)| a - b).collect())
    }

    /// `max_i |self_i - other_i|`, zero for empty polygons.
    pub fn max_slope_deviation(&self, other: &PolygonData) -> Option<Rational> {
        self.slope_deviations(other)
            .map(|d| d.into_iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero))
    }

    pub fn csv_header() -> &'static str {
        "index,slope_num,slope_den,vertex_x,vertex_y_num,vertex_y_den"
    }

    /// Rows of the CSV export: `index, slope_num, slope_den, vertex_x,
    /// vertex_y_num, vertex_y_den`, one per unit segment, with the vertex at
    /// the segment's right end.
    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows = vec![Self::csv_header().to_string()];
        let mut y = Rational::zero();
        for (i, s) in self.slopes.iter().enumerate() {
            y += s;
            rows.push(format!(
                "{},{},{},{},{},{}",
                i,
                s.numer(),
                s.denom(),
                i + 1,
                y.numer(),
                y.denom()
            ));
        }
        rows
    }
}

impl Serialize for PolygonData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|(x, y)| serde_json::json!([x, rational_value(y)]))
            .collect();
        let slopes: Vec<serde_json::Value> = self.slopes.iter().map(rational_value).collect();
        let mut st = s.serialize_struct("PolygonData", 2)?;
        st.serialize_field("vertices", &vertices)?;
        st.serialize_field("slopes", &slopes)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn collinear_vertices_are_merged() {
        let p = PolygonData::from_slopes(vec![rat(0, 1), rat(1, 2), rat(1, 2), rat(1, 1)]);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.vertices()[2], (3, rat(1, 1)));
        assert_eq!(p.endpoint(), (4, rat(2, 1)));
    }

    #[test]
    fn hull_drops_points_above() {
        let pts = vec![(0, rat(0, 1)), (1, rat(5, 1)), (2, rat(1, 1)), (3, rat(3, 1))];
        let p = PolygonData::lower_hull(&pts).unwrap();
        assert_eq!(p.slopes(), &[rat(1, 2), rat(1, 2), rat(2, 1)]);
    }

    #[test]
    fn hull_skips_missing_abscissae() {
        let pts = vec![(0, rat(0, 1)), (2, rat(1, 1)), (3, rat(3, 1))];
        let p = PolygonData::lower_hull(&pts).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.y_at(1), rat(1, 2));
    }

    #[test]
    fn above_comparison() {
        let hp = PolygonData::from_slopes(vec![rat(0, 1), rat(1, 1), rat(2, 1)]);
        let np = PolygonData::from_slopes(vec![rat(1, 2), rat(1, 2), rat(2, 1)]);
        assert!(np.lies_on_or_above(&hp));
        assert!(!hp.lies_on_or_above(&np));
        let shorter = PolygonData::from_slopes(vec![rat(0, 1), rat(1, 1)]);
        assert!(!shorter.lies_on_or_above(&hp));
    }

    #[test]
    fn csv_has_header_and_one_row_per_segment() {
        let p = PolygonData::from_slopes(vec![rat(0, 1), rat(1, 3)]);
        let rows = p.csv_rows();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2], "1,1,3,2,1,3");
    }
}
