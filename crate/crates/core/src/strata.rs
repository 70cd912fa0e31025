//! Enumeration and counting of the components of every stratum of the
//! SU(3) (and U(2)) character variety of a torus knot group.

use num::integer::gcd;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::Root;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrataError {
    #[error("invalid torus knot ({n},{m}): need n,m >= 2 and gcd(n,m) = 1")]
    InvalidKnot { n: i64, m: i64 },
    #[error("torus knot ({n},{m}) too large for exact arithmetic")]
    TooLarge { n: i64, m: i64 },
    #[error("sweep over (Z/{mn})^2 exceeds the configured bound {bound}")]
    SweepTooLarge { mn: i64, bound: i64 },
}

/// A torus knot datum (n, m) with n, m >= 2 coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorusKnot {
    n: i64,
    m: i64,
}

impl TorusKnot {
    pub fn new(n: i64, m: i64) -> Result<Self, StrataError> {
        if n < 2 || m < 2 || gcd(n, m) != 1 {
            return Err(StrataError::InvalidKnot { n, m });
        }
        // keep 3*n*m*r comfortably inside i64 range for r = 3
        if 9i64.checked_mul(n).and_then(|x| x.checked_mul(m)).map_or(true, |x| x > 1 << 31) {
            return Err(StrataError::TooLarge { n, m });
        }
        Ok(TorusKnot { n, m })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn mn(&self) -> i64 {
        self.n * self.m
    }

    /// The knot with the roles of n and m exchanged.
    pub fn swapped(&self) -> TorusKnot {
        TorusKnot { n: self.m, m: self.n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StratumClass {
    /// Totally reducible representations, partition (1,1,1).
    Tr,
    /// Partition (2,1), cylinder components.
    PartialCylinder,
    /// Partition (2,1), Moebius band components (one eigenvalue ratio -1).
    PartialMobius,
    /// Irreducible, all eigenvalues of A and of B distinct.
    Irr3a,
    /// Irreducible, repeated eigenvalue on A.
    Irr3bA,
    /// Irreducible, repeated eigenvalue on B.
    Irr3bB,
}

impl StratumClass {
    pub const ALL: [StratumClass; 6] = [
        StratumClass::Tr,
        StratumClass::PartialCylinder,
        StratumClass::PartialMobius,
        StratumClass::Irr3a,
        StratumClass::Irr3bA,
        StratumClass::Irr3bB,
    ];
}

/// Topology tag of a single stratum component, used for Euler bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Topology {
    Triangle2D,
    OpenCylinder,
    OpenMobius,
    OrthantBlock3a,
    OpenTriangle3b,
}

/// Exact eigenvalue labels of one component, in canonical (sorted) form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum EigenData {
    TotallyReducible,
    /// Eigenvalue ratios (eps in mu_n^+, ups in mu_m^+) of the 2-dimensional
    /// irreducible summand, after quotienting the inversion symmetry.
    Partial { eps: Root, ups: Root },
    /// Unordered eigenvalue triples for A and B, sharing a common
    /// cube-root-of-unity value of A^n = B^m.
    Irr3a { lambda: [Root; 3], nu: [Root; 3] },
    /// Repeated eigenvalue lambda of A (in mu_{3n} - mu_3; the A-triple is
    /// {lambda, lambda, lambda^-2}) plus the unordered nu-triple of B.
    Irr3bA { lambda: Root, nu: [Root; 3] },
    /// Mirror case: repeated eigenvalue of B plus the lambda-triple of A.
    Irr3bB { nu: Root, lambda: [Root; 3] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub class: StratumClass,
    pub data: EigenData,
    pub topology: Topology,
}

/// Closed-form component count for a class, per the published formulas.
///
/// When m is even the cylinder/Moebius formulas are applied with the roles
/// of n and m swapped.
pub fn count_components(knot: &TorusKnot, class: StratumClass) -> i64 {
    let (n, m) = (knot.n(), knot.m());
    // orient so that p is the possibly-even factor
    let (p, q) = if m % 2 == 0 { (m, n) } else { (n, m) };
    match class {
        StratumClass::Tr => 1,
        StratumClass::PartialCylinder => ((p - 1) / 2) * ((q - 1) / 2),
        StratumClass::PartialMobius => {
            if p % 2 == 0 {
                (q - 1) / 2
            } else {
                0
            }
        }
        StratumClass::Irr3a => (n - 1) * (n - 2) * (m - 1) * (m - 2) / 12,
        StratumClass::Irr3bA => (n - 1) * (m - 1) * (m - 2) / 2,
        StratumClass::Irr3bB => (n - 1) * (n - 2) * (m - 1) / 2,
    }
}

/// All distinct unordered triples of roots in mu_{3q} with x^q = zeta_3^c
/// and product 1, each sorted ascending.
fn distinct_triples(q: i64, c: i64) -> Vec<[Root; 3]> {
    debug_assert!((0..3).contains(&c));
    let mut out = Vec::new();
    // solutions of x^q = zeta_3^c are zeta_{3q}^{c+3j}, j = 0..q
    for j1 in 0..q {
        for j2 in (j1 + 1)..q {
            for j3 in (j2 + 1)..q {
                if (c + j1 + j2 + j3) % q == 0 {
                    out.push([
                        Root::new(3 * q, c + 3 * j1),
                        Root::new(3 * q, c + 3 * j2),
                        Root::new(3 * q, c + 3 * j3),
                    ]);
                }
            }
        }
    }
    out
}

/// Explicit list of canonical eigenvalue data for a class.
pub fn enumerate_components(knot: &TorusKnot, class: StratumClass) -> Vec<Component> {
    let (n, m) = (knot.n(), knot.m());
    let mut out = Vec::new();
    match class {
        StratumClass::Tr => {
            out.push(Component {
                class,
                data: EigenData::TotallyReducible,
                topology: Topology::Triangle2D,
            });
        }
        StratumClass::PartialCylinder | StratumClass::PartialMobius => {
            // mu_n^+ has exponents 1..=floor(n/2); the exponent n/2 (n even)
            // is the ratio -1 producing a Moebius band
            for e in 1..=(n / 2) {
                for f in 1..=(m / 2) {
                    let mobius = (n % 2 == 0 && e == n / 2) || (m % 2 == 0 && f == m / 2);
                    let (want, topology) = if mobius {
                        (StratumClass::PartialMobius, Topology::OpenMobius)
                    } else {
                        (StratumClass::PartialCylinder, Topology::OpenCylinder)
                    };
                    if want == class {
                        out.push(Component {
                            class,
                            data: EigenData::Partial {
                                eps: Root::new(n, e),
                                ups: Root::new(m, f),
                            },
                            topology,
                        });
                    }
                }
            }
        }
        StratumClass::Irr3a => {
            for c in 0..3 {
                let lams = distinct_triples(n, c);
                let nus = distinct_triples(m, c);
                for lam in &lams {
                    for nu in &nus {
                        out.push(Component {
                            class,
                            data: EigenData::Irr3a { lambda: *lam, nu: *nu },
                            topology: Topology::OrthantBlock3a,
                        });
                    }
                }
            }
        }
        StratumClass::Irr3bA => {
            // repeated eigenvalue lambda in mu_{3n} - mu_3; exponent j with
            // j !≡ 0 (mod n); the common value of A^n = B^m is zeta_3^{j mod 3}
            for j in 0..(3 * n) {
                if j % n == 0 {
                    continue;
                }
                let lambda = Root::new(3 * n, j);
                for nu in distinct_triples(m, j % 3) {
                    out.push(Component {
                        class,
                        data: EigenData::Irr3bA { lambda, nu },
                        topology: Topology::OpenTriangle3b,
                    });
                }
            }
        }
        StratumClass::Irr3bB => {
            for j in 0..(3 * m) {
                if j % m == 0 {
                    continue;
                }
                let nu = Root::new(3 * m, j);
                for lambda in distinct_triples(n, j % 3) {
                    out.push(Component {
                        class,
                        data: EigenData::Irr3bB { nu, lambda },
                        topology: Topology::OpenTriangle3b,
                    });
                }
            }
        }
    }
    out
}

/// Classification of a rational point of the totally reducible triangle,
/// written in coordinates (u1, u2) = (k/mn, k'/mn).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    Irr3aPoint,
    Irr3bPoint,
    ReduciblePoint,
}

/// Counts how many of the six congruences
/// k = 0, k' = 0, k + k' = 0  (mod m) and (mod n)
/// hold; none puts the point in the closure of a (3a) stratum, exactly one
/// in a (3b) stratum, two or more make it reducible.
pub fn classify_pair(k: i64, kp: i64, knot: &TorusKnot) -> PointClass {
    let mn = knot.mn();
    let (k, kp) = (k.rem_euclid(mn), kp.rem_euclid(mn));
    let mut hits = 0;
    for q in [knot.m(), knot.n()] {
        hits += (k % q == 0) as u32;
        hits += (kp % q == 0) as u32;
        hits += ((k + kp) % q == 0) as u32;
    }
    match hits {
        0 => PointClass::Irr3aPoint,
        1 => PointClass::Irr3bPoint,
        _ => PointClass::ReduciblePoint,
    }
}

/// Closed-form count of totally reducible points lying in closures of the
/// given irreducible class.
pub fn count_tr_intersections(knot: &TorusKnot, class: StratumClass) -> i64 {
    let (n, m) = (knot.n(), knot.m());
    match class {
        StratumClass::Irr3a => (n - 1) * (n - 2) * (m - 1) * (m - 2) / 2,
        StratumClass::Irr3bA | StratumClass::Irr3bB => 3 * (n - 1) * (m - 1) * (n + m - 4) / 2,
        _ => panic!("count_tr_intersections applies to irreducible classes only"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrCensus {
    pub irr3a: i64,
    pub irr3b: i64,
    pub reducible: i64,
}

/// Brute-force census of all unordered pairs {k, k'} in Z/mn, k != k',
/// representing the rational point with u1 = k/mn, u2 = (k'-k)/mn.
///
/// This is the independent oracle for [`count_tr_intersections`].
pub fn brute_tr_census(knot: &TorusKnot, max_mn: i64) -> Result<TrCensus, StrataError> {
    let mn = knot.mn();
    if mn > max_mn {
        return Err(StrataError::SweepTooLarge { mn, bound: max_mn });
    }
    let (n, m) = (knot.n(), knot.m());
    let hit: Vec<u32> = (0..mn)
        .map(|r| ((r % m == 0) as u32) + ((r % n == 0) as u32))
        .collect();
    let mut census = TrCensus { irr3a: 0, irr3b: 0, reducible: 0 };
    // unordered pair {k, k'} with k' > k maps to (a, b) = (k, k'-k),
    // so a >= 0, b >= 1, a + b <= mn - 1
    for a in 0..mn {
        for b in 1..(mn - a) {
            match hit[a as usize] + hit[b as usize] + hit[(a + b) as usize] {
                0 => census.irr3a += 1,
                1 => census.irr3b += 1,
                _ => census.reducible += 1,
            }
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

    #[test]
    fn rejects_degenerate_knots() {
        assert!(TorusKnot::new(1, 5).is_err());
        assert!(TorusKnot::new(3, 1).is_err());
        assert!(TorusKnot::new(4, 6).is_err());
        assert!(TorusKnot::new(2, 2).is_err());
    }

    #[test]
    fn counts_match_paper_values() {
        assert_eq!(count_components(&knot(3, 5), StratumClass::Irr3a), 2);
        assert_eq!(count_components(&knot(2, 5), StratumClass::Irr3a), 0);
        assert_eq!(count_components(&knot(3, 5), StratumClass::Irr3bA), 12);
        assert_eq!(count_components(&knot(3, 5), StratumClass::Irr3bB), 4);
        assert_eq!(count_components(&knot(2, 5), StratumClass::PartialMobius), 2);
        assert_eq!(count_components(&knot(2, 5), StratumClass::PartialCylinder), 0);
    }

    #[test]
    fn irr3b_total_matches_unified_formula() {
        for (n, m) in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5), (5, 6), (5, 7)] {
            let k = knot(n, m);
            let total = count_components(&k, StratumClass::Irr3bA)
                + count_components(&k, StratumClass::Irr3bB);
            assert_eq!(total, (n - 1) * (m - 1) * (n + m - 4) / 2);
        }
    }

    #[test]
    fn enumeration_agrees_with_counts() {
        for (n, m) in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5), (4, 9), (5, 6)] {
            let k = knot(n, m);
            for class in StratumClass::ALL {
                assert_eq!(
                    enumerate_components(&k, class).len() as i64,
                    count_components(&k, class),
                    "({n},{m}) {class:?}"
                );
            }
        }
    }

    #[test]
    fn smallest_irr3ba_is_unique() {
        let comps = enumerate_components(&knot(2, 3), StratumClass::Irr3bA);
        assert_eq!(comps.len(), 1);
    }

    #[test]
    fn m_even_swaps_partial_roles() {
        // (3,4): m even, 1 cylinder and 1 Moebius band
        let k = knot(3, 4);
        assert_eq!(count_components(&k, StratumClass::PartialCylinder), 1);
        assert_eq!(count_components(&k, StratumClass::PartialMobius), 1);
    }

    #[test]
    fn su2_sanity_trefoil() {
        let k = knot(2, 3);
        assert_eq!(count_components(&k, StratumClass::PartialMobius), 1);
        assert_eq!(count_components(&k, StratumClass::PartialCylinder), 0);
    }

    #[test]
    fn swap_symmetry() {
        for (n, m) in [(2, 3), (3, 4), (3, 5), (4, 5), (5, 6)] {
            let k = knot(n, m);
            let s = k.swapped();
            assert_eq!(
                count_components(&k, StratumClass::Irr3a),
                count_components(&s, StratumClass::Irr3a)
            );
            assert_eq!(
                count_components(&k, StratumClass::Irr3bA),
                count_components(&s, StratumClass::Irr3bB)
            );
            assert_eq!(
                count_components(&k, StratumClass::PartialCylinder),
                count_components(&s, StratumClass::PartialCylinder)
            );
            assert_eq!(
                count_components(&k, StratumClass::PartialMobius),
                count_components(&s, StratumClass::PartialMobius)
            );
        }
    }

    #[test]
    fn classify_pair_examples() {
        let k = knot(3, 5);
        assert_eq!(classify_pair(0, 0, &k), PointClass::ReduciblePoint);
        // (5,1): 5 = 0 mod 5 and 5+1 = 6 = 0 mod 3, two congruences
        assert_eq!(classify_pair(5, 1, &k), PointClass::ReduciblePoint);
        // (1,2): 1 + 2 = 3 = 0 mod 3, exactly one congruence
        assert_eq!(classify_pair(1, 2, &k), PointClass::Irr3bPoint);
        assert_eq!(classify_pair(1, 1, &k), PointClass::Irr3aPoint);
    }

    #[test]
    fn census_examples() {
        let c = brute_tr_census(&knot(3, 5), 900).unwrap();
        assert_eq!(c.irr3a, 12);
        assert_eq!(c.irr3b, 48);
        let c = brute_tr_census(&knot(2, 3), 900).unwrap();
        assert_eq!(c.irr3a, 0);
        assert_eq!(c.irr3b, 3);
        let c = brute_tr_census(&knot(2, 5), 900).unwrap();
        assert_eq!(c.irr3a, 0);
        assert_eq!(c.irr3b, 18);
    }

    #[test]
    fn census_covers_all_pairs() {
        let k = knot(3, 4);
        let mn = k.mn();
        let c = brute_tr_census(&k, 900).unwrap();
        assert_eq!(c.irr3a + c.irr3b + c.reducible, mn * (mn - 1) / 2);
    }

    #[test]
    fn sweep_bound_is_enforced() {
        assert!(matches!(
            brute_tr_census(&knot(31, 32), 900),
            Err(StrataError::SweepTooLarge { .. })
        ));
    }

    #[test]
    fn orbit_divisibility() {
        for (n, m) in [(3, 5), (4, 5), (5, 7), (5, 8)] {
            let k = knot(n, m);
            assert_eq!(
                6 * count_components(&k, StratumClass::Irr3a),
                count_tr_intersections(&k, StratumClass::Irr3a)
            );
        }
    }
}
