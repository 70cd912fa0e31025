//! Exact arithmetic on roots of unity represented as exponent residues.

use std::cmp::Ordering;
use std::fmt;

use num::integer::gcd;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclotomicError {
    /// The common order of two roots does not fit in the checked integer width.
    #[error("order overflow combining roots of orders {0} and {1}")]
    Overflow(i64, i64),
    /// No single parameter t can produce both eigenvalues: lambda^n != nu^m.
    #[error("incompatible eigenvalue pair: lambda^{n} != nu^{m}")]
    IncompatiblePair { n: i64, m: i64 },
}

/// A root of unity e^{2*pi*i*exp/order}, stored exactly as a residue.
///
/// The order is part of the datum (the ambient group mu_N) and is never
/// normalized downward, but equality and ordering compare the underlying
/// point on the circle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Root {
    order: i64,
    exp: i64,
}

impl Root {
    /// Creates e^{2*pi*i*exp/order}; `exp` may be any integer and is reduced
    /// into [0, order).
    pub fn new(order: i64, exp: i64) -> Self {
        assert!(order >= 1, "root order must be positive");
        Root {
            order,
            exp: exp.rem_euclid(order),
        }
    }

    pub fn one() -> Self {
        Root { order: 1, exp: 0 }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }

    /// The same point expressed in the group of `new_order`-th roots.
    /// `new_order` must be a multiple of the current order.
    pub fn embed(&self, new_order: i64) -> Self {
        debug_assert_eq!(new_order % self.order, 0);
        Root {
            order: new_order,
            exp: self.exp * (new_order / self.order),
        }
    }

    /// Reduced form with gcd(exp, order) divided out. Used for hashing only;
    /// public representation keeps the ambient order.
    fn reduced(&self) -> (i64, i64) {
        let d = gcd(self.exp, self.order);
        if d == 0 {
            (1, 0)
        } else {
            (self.order / d, self.exp / d)
        }
    }

    pub fn mul(&self, other: &Root) -> Result<Root, CyclotomicError> {
        let l = checked_lcm(self.order, other.order)
            .ok_or(CyclotomicError::Overflow(self.order, other.order))?;
        let a = self.exp * (l / self.order);
        let b = other.exp * (l / other.order);
        Ok(Root::new(l, (a + b).rem_euclid(l)))
    }

    pub fn inv(&self) -> Root {
        Root::new(self.order, -self.exp)
    }

    /// self^e for any integer e (negative exponents invert).
    pub fn pow(&self, e: i64) -> Root {
        // reduce e mod order first so exp * e cannot overflow for orders
        // within the configured bound
        let e = e.rem_euclid(self.order);
        Root::new(self.order, mul_mod(self.exp, e, self.order))
    }

    /// Ratio self/other embedded in the common order.
    pub fn div(&self, other: &Root) -> Result<Root, CyclotomicError> {
        self.mul(&other.inv())
    }

    /// Fractional angle exp/order as an exact pair.
    pub fn angle(&self) -> (i64, i64) {
        (self.exp, self.order)
    }
}

impl PartialEq for Root {
    fn eq(&self, other: &Self) -> bool {
        // exp/order in [0,1): cross-multiplied comparison is exact
        (self.exp as i128) * (other.order as i128) == (other.exp as i128) * (self.order as i128)
    }
}

impl Eq for Root {}

impl std::hash::Hash for Root {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.reduced().hash(state);
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Root {
    /// Orders by angle in [0,1); consistent with equality.
    fn cmp(&self, other: &Self) -> Ordering {
        let a = (self.exp as i128) * (other.order as i128);
        let b = (other.exp as i128) * (self.order as i128);
        a.cmp(&b)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}^{}", self.order, self.exp)
    }
}

fn checked_lcm(a: i64, b: i64) -> Option<i64> {
    let g = gcd(a, b);
    (a / g).checked_mul(b)
}

fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    (((a as i128) * (b as i128)) % (m as i128)) as i64
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// The unique t on the circle with t^m = lambda and t^n = nu.
///
/// Requires gcd(n, m) = 1 and lambda^n = nu^m; the latter is exactly the
/// condition for the pair to arise from a single one-dimensional
/// representation line.
pub fn canonical_t(n: i64, m: i64, lambda: &Root, nu: &Root) -> Result<Root, CyclotomicError> {
    debug_assert_eq!(gcd(n, m), 1);
    if lambda.pow(n) != nu.pow(m) {
        return Err(CyclotomicError::IncompatiblePair { n, m });
    }
    let (g, a, b) = extended_gcd(m, n);
    debug_assert_eq!(g, 1);
    // a*m + b*n = 1, so t = lambda^a * nu^b satisfies t^m = lambda, t^n = nu
    let t = lambda.pow(a).mul(&nu.pow(b))?;
    debug_assert_eq!(t.pow(m), *lambda);
    debug_assert_eq!(t.pow(n), *nu);
    Ok(t)
}

/// All N-th roots of unity, in exponent order.
pub fn mu(order: i64) -> impl Iterator<Item = Root> {
    (0..order).map(move |k| Root::new(order, k))
}
