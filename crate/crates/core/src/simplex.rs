//! Exact coordinates on the totally reducible triangle: normalized lifts of
//! unordered root multisets, the monodromy of the symmetric-product bundle,
//! and the piecewise linear circles traced by partially reducible families.

use num::rational::Rational64;
use num::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::Root;
use crate::strata::{PointClass, TorusKnot, TrCensus};

pub type Rat = Rational64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplexError {
    #[error("product of the input roots is not 1")]
    ProductNotOne,
    #[error("circle datum alpha = 1 makes the eigenvalue triple degenerate")]
    DegenerateCircle,
}

/// Normalized lift (s_1, ..., s_r) of an unordered multiset on the circle:
/// sorted, wrapping at most once (s_r <= s_1 + 1), summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lift(pub Vec<Rat>);

impl Lift {
    pub fn is_valid(&self) -> bool {
        let s = &self.0;
        if s.len() < 2 {
            return false;
        }
        s.windows(2).all(|w| w[0] <= w[1])
            && *s.last().unwrap() <= s[0] + Rat::one()
            && s.iter().sum::<Rat>().is_zero()
    }

    /// Exponentiates back to the root multiset e^{2 pi i s_i}.
    pub fn to_roots(&self) -> Vec<Root> {
        self.0
            .iter()
            .map(|s| Root::new(*s.denom(), *s.numer()))
            .collect()
    }
}

/// A point of the simplex Delta_{r-1}: u_i >= 0, sum u_i = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimplexPoint {
    pub u: Vec<Rat>,
}

impl SimplexPoint {
    pub fn is_valid(&self) -> bool {
        self.u.iter().all(|x| !x.is_negative()) && self.u.iter().sum::<Rat>().is_one()
    }

    /// The lift with s_1 = -sum (r-i)/r * u_i, inverting the u coordinates.
    pub fn to_lift(&self) -> Lift {
        let r = self.u.len() as i64;
        let mut s1 = Rat::zero();
        for (i, ui) in self.u.iter().enumerate().take(self.u.len() - 1) {
            s1 -= Rat::new(r - 1 - i as i64, r) * ui;
        }
        let mut s = vec![s1];
        for ui in self.u.iter().take(self.u.len() - 1) {
            let prev = *s.last().unwrap();
            s.push(prev + ui);
        }
        Lift(s)
    }
}

/// Maps a multiset of roots with product 1 to its point in the simplex.
///
/// The unique valid normalization is found by scanning all r cyclic
/// rotations of the sorted fractional exponents and applying the forced
/// integer shift; exactly one rotation admits an integer shift.
pub fn to_simplex(roots: &[Root]) -> Result<SimplexPoint, SimplexError> {
    let lift = normalized_lift(roots)?;
    let s = &lift.0;
    let r = s.len();
    let mut u: Vec<Rat> = s.windows(2).map(|w| w[1] - w[0]).collect();
    u.push(s[0] + Rat::one() - s[r - 1]);
    let point = SimplexPoint { u };
    debug_assert!(point.is_valid());
    Ok(point)
}

/// The normalized lift itself (the set-A representative of the multiset).
pub fn normalized_lift(roots: &[Root]) -> Result<Lift, SimplexError> {
    assert!(roots.len() >= 2, "need at least two points on the circle");
    let r = roots.len();
    let mut f: Vec<Rat> = roots
        .iter()
        .map(|x| Rat::new(x.exp(), x.order()))
        .collect();
    let total: Rat = f.iter().sum();
    if !total.is_integer() {
        return Err(SimplexError::ProductNotOne);
    }
    f.sort();
    let mut found: Option<Lift> = None;
    for c in 0..r {
        // rotation starting at index c; entries that wrap gain +1
        let mut s: Vec<Rat> = (0..r)
            .map(|i| {
                let j = (c + i) % r;
                if c + i >= r {
                    f[j] + Rat::one()
                } else {
                    f[j]
                }
            })
            .collect();
        let sum: Rat = s.iter().sum();
        debug_assert!(sum.is_integer());
        if sum.numer() % (r as i64) != 0 {
            continue;
        }
        let shift = Rat::new(sum.numer() / (r as i64), 1);
        for x in &mut s {
            *x -= shift;
        }
        let lift = Lift(s);
        debug_assert!(lift.is_valid());
        assert!(found.is_none(), "normalization is not unique");
        found = Some(lift);
    }
    Ok(found.expect("exactly one rotation admits an integer shift"))
}

/// Monodromy of the simplex bundle over the circle: the cyclic shift
/// (u_1, ..., u_r) -> (u_r, u_1, ..., u_{r-1}), orientable iff r is odd.
pub fn monodromy(r: usize) -> (Vec<usize>, bool) {
    assert!(r >= 2);
    let perm = (0..r).map(|i| (i + 1) % r).collect();
    (perm, r % 2 == 1)
}

/// The closed piecewise linear path traced in the triangle by the family
/// {t, t*alpha, t^-2*alpha^-1} as t runs over mu_{3mn}.
#[derive(Debug, Clone, Serialize)]
pub struct CirclePath {
    /// alpha = e^{2 pi i k / mn}
    pub k: i64,
    /// path vertices at the 3mn rational parameters, in parameter order
    pub vertices: Vec<SimplexPoint>,
    /// parameters where two of the three entries coincide (side contacts)
    pub boundary_hits: Vec<SimplexPoint>,
}

impl CirclePath {
    pub fn is_closed(&self) -> bool {
        // vertices are cyclic: the segment list implicitly joins last to first
        !self.vertices.is_empty()
    }

    /// Consecutive vertex pairs, including the wrap-around segment.
    pub fn segments(&self) -> impl Iterator<Item = (&SimplexPoint, &SimplexPoint)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }
}

fn circle_triple(knot: &TorusKnot, k: i64, j: i64) -> [Root; 3] {
    let mn = knot.mn();
    let t = Root::new(3 * mn, j);
    let alpha = Root::new(mn, k).embed(3 * mn);
    let a = t.mul(&alpha).expect("same order");
    let b = t.pow(-2).mul(&alpha.inv()).expect("same order");
    [t, a, b]
}

pub fn circle_path(knot: &TorusKnot, k: i64) -> Result<CirclePath, SimplexError> {
    let mn = knot.mn();
    let k = k.rem_euclid(mn);
    if k == 0 {
        return Err(SimplexError::DegenerateCircle);
    }
    let mut vertices = Vec::with_capacity((3 * mn) as usize);
    let mut boundary_hits = Vec::new();
    for j in 0..(3 * mn) {
        let triple = circle_triple(knot, k, j);
        let point = to_simplex(&triple).expect("triple has product 1");
        if triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2] {
            boundary_hits.push(point.clone());
        }
        vertices.push(point);
    }
    assert_eq!(boundary_hits.len(), 6, "expected 6 side contacts");
    Ok(CirclePath { k, vertices, boundary_hits })
}

/// Each of the 3mn rational points of the circle together with its class
/// under the eigenvalue coincidence pattern of (t^m, ...) and (t^n, ...),
/// in parameter order.
pub fn circle_points(
    knot: &TorusKnot,
    k: i64,
) -> Result<Vec<(SimplexPoint, PointClass)>, SimplexError> {
    let mn = knot.mn();
    let k = k.rem_euclid(mn);
    if k == 0 {
        return Err(SimplexError::DegenerateCircle);
    }
    let mut out = Vec::with_capacity((3 * mn) as usize);
    for j in 0..(3 * mn) {
        let triple = circle_triple(knot, k, j);
        let lambda: Vec<Root> = triple.iter().map(|t| t.pow(knot.m())).collect();
        let nu: Vec<Root> = triple.iter().map(|t| t.pow(knot.n())).collect();
        let mut hits = 0;
        for (i, l) in [(0, 1), (0, 2), (1, 2)] {
            hits += (lambda[i] == lambda[l]) as u32;
            hits += (nu[i] == nu[l]) as u32;
        }
        let class = match hits {
            0 => PointClass::Irr3aPoint,
            1 => PointClass::Irr3bPoint,
            _ => PointClass::ReduciblePoint,
        };
        out.push((to_simplex(&triple).expect("triple has product 1"), class));
    }
    Ok(out)
}

/// Classifies each of the 3mn rational points of the circle by the
/// eigenvalue coincidence pattern of (t^m, ...) and (t^n, ...).
pub fn circle_point_census(knot: &TorusKnot, k: i64) -> Result<TrCensus, SimplexError> {
    let mut census = TrCensus { irr3a: 0, irr3b: 0, reducible: 0 };
    for (_, class) in circle_points(knot, k)? {
        match class {
            PointClass::Irr3aPoint => census.irr3a += 1,
            PointClass::Irr3bPoint => census.irr3b += 1,
            PointClass::ReduciblePoint => census.reducible += 1,
        }
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot(n: i64, m: i64) -> TorusKnot {
        TorusKnot::new(n, m).unwrap()
    }

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn simplex_of_trivial_triple() {
        let p = to_simplex(&[Root::one(), Root::one(), Root::one()]).unwrap();
        assert_eq!(p.u, vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn simplex_of_cube_roots() {
        let p = to_simplex(&[Root::one(), Root::new(3, 1), Root::new(3, 2)]).unwrap();
        assert_eq!(p.u, vec![rat(1, 3), rat(1, 3), rat(1, 3)]);
        let lift = normalized_lift(&[Root::one(), Root::new(3, 1), Root::new(3, 2)]).unwrap();
        assert_eq!(lift.0, vec![rat(-1, 3), rat(0, 1), rat(1, 3)]);
    }

    #[test]
    fn simplex_with_multiplicity() {
        // {z6, z6, z6^4}: fractional exponents {1/6, 1/6, 4/6}; only the
        // rotation starting at 4/6 sums to a multiple of 3. Values frozen
        // from the exhaustive reference scan.
        let p = to_simplex(&[Root::new(6, 1), Root::new(6, 1), Root::new(6, 4)]).unwrap();
        let lift = normalized_lift(&[Root::new(6, 1), Root::new(6, 1), Root::new(6, 4)]).unwrap();
        assert!(lift.is_valid());
        assert!(p.is_valid());
        assert_eq!(lift.0, vec![rat(-1, 3), rat(1, 6), rat(1, 6)]);
        assert_eq!(p.u, vec![rat(1, 2), rat(0, 1), rat(1, 2)]);
    }

    #[test]
    fn product_not_one_is_rejected() {
        assert_eq!(
            to_simplex(&[Root::one(), Root::new(3, 1)]),
            Err(SimplexError::ProductNotOne)
        );
    }

    #[test]
    fn permutation_invariance() {
        let a = [Root::new(5, 1), Root::new(5, 2), Root::new(10, 4), Root::new(1, 0)];
        // product: 1/5 + 2/5 + 2/5 = 1
        let p1 = to_simplex(&a).unwrap();
        let b = [a[2], a[0], a[3], a[1]];
        let p2 = to_simplex(&b).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn round_trip_through_lift() {
        let input = [Root::new(15, 2), Root::new(15, 4), Root::new(15, 9)];
        let p = to_simplex(&input).unwrap();
        let lift = p.to_lift();
        assert!(lift.is_valid());
        let mut back = lift.to_roots();
        let mut expect = input.to_vec();
        back.sort();
        expect.sort();
        assert_eq!(back, expect);
    }

    #[test]
    fn monodromy_orientability() {
        for r in 2..=10 {
            let (perm, orientable) = monodromy(r);
            assert_eq!(orientable, r % 2 == 1);
            // cyclic shift of full length
            let mut seen = vec![false; r];
            let mut i = 0;
            for _ in 0..r {
                seen[i] = true;
                i = perm[i];
            }
            assert!(seen.into_iter().all(|x| x));
        }
    }

    #[test]
    fn circle_path_shape() {
        let k = knot(3, 5);
        let path = circle_path(&k, 1).unwrap();
        assert_eq!(path.vertices.len(), 45);
        assert_eq!(path.boundary_hits.len(), 6);
        assert!(path.is_closed());
        // starting point at t = 1 has u1 = u2 = k/mn
        assert_eq!(path.vertices[0].u[0], rat(1, 15));
        assert_eq!(path.vertices[0].u[1], rat(1, 15));
    }

    #[test]
    fn degenerate_circle() {
        assert_eq!(
            circle_path(&knot(3, 5), 0).err(),
            Some(SimplexError::DegenerateCircle)
        );
        assert!(circle_point_census(&knot(3, 5), 15).is_err());
    }

    #[test]
    fn circle_census_values() {
        let k = knot(3, 5);
        for kk in 1..15 {
            if kk % 3 == 0 || kk % 5 == 0 {
                continue;
            }
            let c = circle_point_census(&k, kk).unwrap();
            assert_eq!(c.irr3a, 9);
            assert_eq!(c.irr3b, 24);
            assert_eq!(c.reducible, 12);
        }
    }

    #[test]
    fn denominator_bound() {
        let k = knot(3, 5);
        let path = circle_path(&k, 2).unwrap();
        for v in &path.vertices {
            for x in &v.u {
                assert_eq!((3 * k.mn() * 3) % x.denom(), 0);
            }
        }
    }
}
