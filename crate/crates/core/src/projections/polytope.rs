use super::dykstra::Intersection;
use super::piece::ConvexPiece;
use super::{check_dim, ProjectionError};
use crate::problem::FeasibleSet;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Bounded polytope `{x : H x <= b}` with its vertex list.
#[derive(Debug, Clone)]
pub struct Polytope<T> {
    vertices: Vec<Vector<T>>,
    halfspaces: Intersection<T>,
}

impl<T: Scalar> Polytope<T> {
    /// Builds a polytope from its halfspace rows and the matching vertices.
    pub fn new(rows: Vec<(Vector<T>, T)>, vertices: Vec<Vector<T>>) -> Result<Self, ProjectionError> {
        if vertices.is_empty() {
            return Err(ProjectionError::InvalidSet("polytope without vertices".into()));
        }
        let d = vertices[0].dim();
        for v in &vertices {
            check_dim(d, v.dim())?;
        }
        let pieces = rows
            .into_iter()
            .map(|(a, b)| ConvexPiece::halfspace(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        let halfspaces = Intersection::new(pieces)?;
        let tol = T::member_tol();
        if vertices.iter().any(|v| halfspaces.max_violation(v) > tol) {
            return Err(ProjectionError::InvalidSet("vertex violates a facet".into()));
        }
        Ok(Self { vertices, halfspaces })
    }

    /// Convex polygon from vertices in counter-clockwise order.
    pub fn from_ccw_polygon(vertices: Vec<Vector<T>>) -> Result<Self, ProjectionError> {
        let k = vertices.len();
        if k < 3 || vertices.iter().any(|v| v.dim() != 2) {
            return Err(ProjectionError::InvalidSet("polygon needs at least three 2-d vertices".into()));
        }
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            let p = &vertices[i];
            let q = &vertices[(i + 1) % k];
            let normal = Vector::new(vec![q[1] - p[1], p[0] - q[0]]);
            let offset = normal.dot(p);
            for (j, w) in vertices.iter().enumerate() {
                if j != i && j != (i + 1) % k && !(normal.dot(w) < offset) {
                    return Err(ProjectionError::InvalidSet("polygon is not strictly convex and counter-clockwise".into()));
                }
            }
            rows.push((normal, offset));
        }
        Self::new(rows, vertices)
    }

    pub fn vertices(&self) -> &[Vector<T>] {
        &self.vertices
    }

    pub fn facets(&self) -> &Intersection<T> {
        &self.halfspaces
    }
}

impl<T: Scalar> FeasibleSet<T> for Polytope<T> {
    fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    fn contains_tol(&self, x: &Vector<T>, tol: T) -> bool {
        self.halfspaces.contains_tol(x, tol)
    }

    fn project(&self, x: &Vector<T>) -> Result<Vector<T>, ProjectionError> {
        self.halfspaces.project(x)
    }

    /// Minimizing vertex; the lowest index wins ties.
    fn lmo(&self, c: &Vector<T>) -> Option<Vector<T>> {
        let mut best = 0;
        let mut best_val = c.dot(&self.vertices[0]);
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            let val = c.dot(v);
            if val < best_val {
                best = i;
                best_val = val;
            }
        }
        Some(self.vertices[best].clone())
    }

    fn diameter(&self) -> Option<T> {
        let mut d = T::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(b));
            }
        }
        Some(d)
    }

    fn bounding_box(&self) -> Option<(Vector<T>, Vector<T>)> {
        let d = FeasibleSet::dim(self);
        let mut lo = Vector::filled(d, T::infinity());
        let mut hi = Vector::filled(d, T::neg_infinity());
        for v in &self.vertices {
            for i in 0..d {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        Some((lo, hi))
    }
}
