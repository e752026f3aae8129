use crate::scalar::Scalar;
use crate::vector::Vector;

/// Projection onto the probability simplex by sort-and-threshold.
pub fn project_simplex<T: Scalar>(x: &Vector<T>) -> Vector<T> {
    let d = x.dim();
    assert!(d >= 1, "simplex projection needs d >= 1");
    let slack = T::epsilon() * T::c(4.0) * T::from_count(d);
    if x.iter().all(|&v| v >= T::zero()) && (x.sum() - T::one()).abs() <= slack {
        return x.clone();
    }
    let mut u: Vec<T> = x.as_slice().to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cum = T::zero();
    let mut theta = T::zero();
    for (j, &uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - T::one()) / T::from_count(j + 1);
        if uj - t > T::zero() {
            theta = t;
        }
    }
    let mut p: Vector<T> = x.iter().map(|&xi| (xi - theta).max(T::zero())).collect();
    // Remove the rounding drift in the sum by spreading it over the support.
    let s = p.sum();
    if s > T::zero() && s != T::one() {
        let k = T::from_count(p.iter().filter(|&&v| v > T::zero()).count());
        let shift = (s - T::one()) / k;
        for v in p.as_mut_slice() {
            if *v > shift {
                *v -= shift;
            }
        }
    }
    p
}

/// Vertex of the simplex minimizing `c^T p` (lowest index on ties).
pub fn simplex_lmo<T: Scalar>(c: &Vector<T>) -> Vector<T> {
    let mut best = 0;
    for i in 1..c.dim() {
        if c[i] < c[best] {
            best = i;
        }
    }
    Vector::unit(c.dim(), best)
}
