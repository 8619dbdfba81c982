//! The maximal torus T² of G2, the Weyl group D12, the restricted characters
//! Φ1/Φ2, the Jacobian-squared and K densities, and the (Φ1, Φ2) preimage
//! solver.
//!
//! Points of T² are pairs of rational angles (θ1, θ2) taken mod 1, so the
//! supports of all spectral measures in this crate are finite sets with
//! decidable membership. The Weyl group D12 (dihedral of order 12) acts
//! through the integer matrices generated by
//!
//! ```text
//! T2 = [[0, -1], [-1, 0]]      (order 2)
//! T6 = [[0,  1], [-1, 1]]      (order 6)
//! ```
//!
//! sending (θ1, θ2) to (a11·θ1 + a12·θ2, a21·θ1 + a22·θ2) mod 1.
//!
//! The two restricted characters are
//!
//! ```text
//! Φ1(θ1, θ2) = 1 + 2cos2πθ1 + 2cos2πθ2 + 2cos2π(θ1−θ2)              ∈ [−2, 7]
//! Φ2(θ1, θ2) = Φ1 + 1 + 2cos2π(θ1+θ2) + 2cos2π(2θ1−θ2) + 2cos2π(θ1−2θ2) ∈ [−2, 14]
//! ```
//!
//! Both are D12-invariant, as are the two density functions:
//! [`j2`] is the normalized squared Jacobian of (Φ1, Φ2) and [`kdens`] the
//! companion density K normalized so that K(0, 1/4) = 16.
//!
//! On x = Φ1, y = Φ2 the squared Jacobian satisfies the exact polynomial
//! identity 4·j2 = P1(x, y) · P2′(x, y) with
//!
//! ```text
//! P1  = 4x³ − x² − 2x − 10xy − y² − 10y + 7
//! P2′ = 4y + 7 − 2x − x²
//! ```
//!
//! (the previously published form of the second factor carries the opposite
//! sign, which fails already at (x, y) = (0, 0); see the regression tests).
//! The domain D — the image of the fundamental domain of T²/D12 under
//! (Φ1, Φ2) — is exactly {P1 ≥ 0 and P2′ ≥ 0}, which is what
//! [`domain_contains`] decides.

use crate::cyclotomic::Cyclotomic;
use num::rational::Rational64;
use num::Signed;
use std::collections::BTreeSet;

/// Errors from torus-level operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TorusError {
    /// `domain_contains` requires exact real inputs.
    #[error("domain test requires real values, got a non-real cyclotomic")]
    NonRealInput,
    /// A real sign decision was numerically ambiguous (|value| < 1e−9 but not
    /// exactly zero); reported honestly instead of guessed.
    #[error("sign of a nonzero real value is numerically ambiguous")]
    AmbiguousSign,
    /// The preimage solver found no branch pair closing the roundtrip.
    #[error("no (l, l') branch closes the preimage roundtrip at ({x}, {y}); the point is outside D or numerically degenerate")]
    NoPreimage { x: f64, y: f64 },
}

/// A point of the maximal torus, stored as reduced rational angles in [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusPoint {
    theta1: Rational64,
    theta2: Rational64,
}

fn frac_mod1(r: Rational64) -> Rational64 {
    let f = r - r.floor();
    debug_assert!(!f.is_negative() && f < Rational64::from_integer(1));
    f
}

impl TorusPoint {
    /// Builds a torus point, reducing both angles mod 1 to the canonical
    /// representative in [0, 1).
    pub fn new(theta1: Rational64, theta2: Rational64) -> Self {
        TorusPoint {
            theta1: frac_mod1(theta1),
            theta2: frac_mod1(theta2),
        }
    }

    /// Convenience constructor from integer fractions.
    pub fn from_fracs(n1: i64, d1: i64, n2: i64, d2: i64) -> Self {
        Self::new(Rational64::new(n1, d1), Rational64::new(n2, d2))
    }

    pub fn theta1(&self) -> Rational64 {
        self.theta1
    }

    pub fn theta2(&self) -> Rational64 {
        self.theta2
    }
}

impl std::fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.theta1, self.theta2)
    }
}

/// An element of the Weyl group D12 as a 2×2 integer matrix acting on angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylElement {
    m: [[i64; 2]; 2],
}

impl WeylElement {
    pub const fn identity() -> Self {
        WeylElement {
            m: [[1, 0], [0, 1]],
        }
    }

    /// The order-2 generator T2.
    pub const fn t2() -> Self {
        WeylElement {
            m: [[0, -1], [-1, 0]],
        }
    }

    /// The order-6 generator T6.
    pub const fn t6() -> Self {
        WeylElement {
            m: [[0, 1], [-1, 1]],
        }
    }

    /// The coordinate swap (θ1, θ2) ↦ (θ2, θ1); equals −T2.
    pub const fn swap() -> Self {
        WeylElement {
            m: [[0, 1], [1, 0]],
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.m
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let a = self.m;
        let b = other.m;
        let mut m = [[0i64; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        WeylElement { m }
    }

    /// Applies the matrix action to a torus point (angles mod 1).
    pub fn apply(&self, p: &TorusPoint) -> TorusPoint {
        let a = self.m;
        let t1 = Rational64::from_integer(a[0][0]) * p.theta1
            + Rational64::from_integer(a[0][1]) * p.theta2;
        let t2 = Rational64::from_integer(a[1][0]) * p.theta1
            + Rational64::from_integer(a[1][1]) * p.theta2;
        TorusPoint::new(t1, t2)
    }

    /// The 12 elements of D12 in a fixed order: T6^a then T2·T6^a, a = 0..5.
    pub fn d12() -> Vec<WeylElement> {
        let mut out = Vec::with_capacity(12);
        let mut rot = WeylElement::identity();
        for _ in 0..6 {
            out.push(rot);
            rot = rot.compose(&WeylElement::t6());
        }
        let mut rot = WeylElement::identity();
        for _ in 0..6 {
            out.push(WeylElement::t2().compose(&rot));
            rot = rot.compose(&WeylElement::t6());
        }
        out
    }

    /// The order-6 subgroup S3 = {(T6²)^a · T2^b}, in the fixed order
    /// a = 0, 1, 2 crossed with b = 0, 1.
    ///
    /// D12 contains two dihedral subgroups of order 6 (one containing T2,
    /// one containing the coordinate swap −T2). The discrete joint measures
    /// built from S3 orbits of points involving cube roots of unity are
    /// D12-stable multisets only for the T2 realization, so that is the one
    /// used throughout.
    pub fn s3() -> Vec<WeylElement> {
        let r = WeylElement::t6().compose(&WeylElement::t6());
        let mut out = Vec::with_capacity(6);
        let mut rot = WeylElement::identity();
        for _ in 0..3 {
            out.push(rot);
            out.push(rot.compose(&WeylElement::t2()));
            rot = rot.compose(&r);
        }
        out
    }
}

/// The D12 orbit of a point, as a sorted set (size divides 12).
pub fn d12_orbit(p: &TorusPoint) -> BTreeSet<TorusPoint> {
    WeylElement::d12().iter().map(|g| g.apply(p)).collect()
}

/// The lexicographically least representative of the D12 orbit of `p`.
pub fn orbit_representative(p: &TorusPoint) -> TorusPoint {
    *d12_orbit(p).iter().next().expect("orbit is nonempty")
}

/// Exact value of the 7-dimensional restricted character Φ1 at `p`.
pub fn phi1(p: &TorusPoint) -> Cyclotomic {
    let t1 = p.theta1;
    let t2 = p.theta2;
    let mut acc = Cyclotomic::one();
    for angle in [t1, t2, t1 - t2] {
        acc = &acc + &Cyclotomic::two_cos(angle);
    }
    acc
}

/// Exact value of the 14-dimensional restricted character Φ2 at `p`.
pub fn phi2(p: &TorusPoint) -> Cyclotomic {
    let t1 = p.theta1;
    let t2 = p.theta2;
    let mut acc = &phi1(p) + &Cyclotomic::one();
    let two = Rational64::from_integer(2);
    for angle in [t1 + t2, two * t1 - t2, t1 - two * t2] {
        acc = &acc + &Cyclotomic::two_cos(angle);
    }
    acc
}

/// Exact value of the normalized squared Jacobian j2 = J²/64π⁴ at `p`.
///
/// With c = cos2π(2θ1+θ2) + cos2π(θ1−3θ2) + cos2π(3θ1−2θ2) − cos2π(θ1+2θ2)
/// − cos2π(3θ1−θ2) − cos2π(2θ1−3θ2), this is exactly c². It is nonnegative,
/// D12-invariant, and vanishes precisely on the boundaries of the images of
/// the fundamental domain.
pub fn j2(p: &TorusPoint) -> Cyclotomic {
    let t1 = p.theta1;
    let t2 = p.theta2;
    let r = Rational64::from_integer;
    let plus = [r(2) * t1 + t2, t1 - r(3) * t2, r(3) * t1 - r(2) * t2];
    let minus = [t1 + r(2) * t2, r(3) * t1 - t2, r(2) * t1 - r(3) * t2];
    let mut double_c = Cyclotomic::zero();
    for a in plus {
        double_c = &double_c + &Cyclotomic::two_cos(a);
    }
    for a in minus {
        double_c = &double_c - &Cyclotomic::two_cos(a);
    }
    // double_c = 2c, so j2 = c² = (2c)²/4.
    let sq = &double_c * &double_c;
    &sq * &Cyclotomic::from_ratio(1, 4)
}

/// Exact value of the density K at `p`, normalized so that K(0, 1/4) = 16.
///
/// With s = sin2π(θ1+θ2) − sin2π(2θ1−θ2) − sin2π(2θ2−θ1), this is exactly
/// 4s², computed π-free as −(2i·s)² from differences of roots of unity. It is
/// nonnegative and D12-invariant, vanishing on the boundaries of S3
/// fundamental domains.
pub fn kdens(p: &TorusPoint) -> Cyclotomic {
    let t1 = p.theta1;
    let t2 = p.theta2;
    let r = Rational64::from_integer;
    // 2i·sin(2πa) = ζ(a) − ζ(−a)
    let zsin = |a: Rational64| -> Cyclotomic {
        let z = Cyclotomic::root_at(a);
        let zc = z.conjugate();
        &z - &zc
    };
    let w = &(&zsin(t1 + t2) - &zsin(r(2) * t1 - t2)) - &zsin(r(2) * t2 - t1);
    // w = 2i·s  ⟹  K = 4s² = −w².
    (&w * &w).neg()
}

fn real_sign_or_err(v: &Cyclotomic) -> Result<i8, TorusError> {
    if !v.is_real() {
        return Err(TorusError::NonRealInput);
    }
    v.real_sign().ok_or(TorusError::AmbiguousSign)
}

/// The first factor P1 of the exact identity 4·j2 = P1·P2′ on (x, y) = (Φ1, Φ2).
pub fn domain_poly_p1(x: &Cyclotomic, y: &Cyclotomic) -> Cyclotomic {
    let c = Cyclotomic::from_integer;
    let x2 = x.pow(2);
    let x3 = x.pow(3);
    let y2 = y.pow(2);
    let xy = x * y;
    // 4x³ − x² − 2x − 10xy − y² − 10y + 7
    let mut acc = &x3 * &c(4);
    acc = &acc - &x2;
    acc = &acc - &(x * &c(2));
    acc = &acc - &(&xy * &c(10));
    acc = &acc - &y2;
    acc = &acc - &(y * &c(10));
    &acc + &c(7)
}

/// The sign-corrected second factor P2′ = 4y + 7 − 2x − x².
pub fn domain_poly_p2(x: &Cyclotomic, y: &Cyclotomic) -> Cyclotomic {
    let c = Cyclotomic::from_integer;
    let mut acc = y * &c(4);
    acc = &acc + &c(7);
    acc = &acc - &(x * &c(2));
    &acc - &x.pow(2)
}

/// Decides (x, y) ∈ D by the polynomial criterion P1 ≥ 0 ∧ P2′ ≥ 0.
///
/// Inputs must be real; a numerically ambiguous sign (value within 1e−9 of
/// zero yet not exactly zero) is reported rather than guessed.
pub fn domain_contains(x: &Cyclotomic, y: &Cyclotomic) -> Result<bool, TorusError> {
    if !x.is_real() || !y.is_real() {
        return Err(TorusError::NonRealInput);
    }
    let p1 = real_sign_or_err(&domain_poly_p1(x, y))?;
    let p2 = real_sign_or_err(&domain_poly_p2(x, y))?;
    Ok(p1 >= 0 && p2 >= 0)
}

/// Floating-point Φ1.
pub fn phi1_float(t1: f64, t2: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    1.0 + 2.0 * (tau * t1).cos() + 2.0 * (tau * t2).cos() + 2.0 * (tau * (t1 - t2)).cos()
}

/// Floating-point Φ2.
pub fn phi2_float(t1: f64, t2: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    phi1_float(t1, t2)
        + 1.0
        + 2.0 * (tau * (t1 + t2)).cos()
        + 2.0 * (tau * (2.0 * t1 - t2)).cos()
        + 2.0 * (tau * (t1 - 2.0 * t2)).cos()
}

/// Roots of the monic cubic u³ + a·u² + b·u + c with all-real spectrum,
/// via the trigonometric resolution (stable for the three-real-root case that
/// occurs throughout D). Returned in descending order.
fn cubic_roots(a: f64, b: f64, c: f64) -> [f64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let depressed = if p >= -1e-13 {
        // Triple (or near-triple) root regime.
        let r = (-q).cbrt();
        [r, r, r]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut rs = [0.0; 3];
        for (k, slot) in rs.iter_mut().enumerate() {
            *slot = m * (theta - 2.0 * std::f64::consts::PI * (k as f64) / 3.0).cos();
        }
        rs
    };
    // Undo the depression shift.
    let mut roots = depressed.map(|v| v - shift);
    let descending = |x: &f64, y: &f64| y.partial_cmp(x).expect("finite roots");
    roots.sort_by(descending);

    // Near a vanishing discriminant the trigonometric resolution only
    // reaches ~√ε accuracy, so nearly coincident roots are recomputed from
    // the derivative (where they are simple) and the exact root-sum
    // relation; this restores full precision on the Weyl walls.
    let threshold = 1e-6 * (1.0 + roots[0].abs() + roots[2].abs());
    let gap_high = roots[0] - roots[1];
    let gap_low = roots[1] - roots[2];
    if gap_high < threshold && gap_low < threshold {
        let r = -a / 3.0;
        return [r, r, r];
    }
    let derivative_root_near = |target: f64| {
        let disc = (a * a - 3.0 * b).max(0.0).sqrt();
        let r1 = (-a + disc) / 3.0;
        let r2 = (-a - disc) / 3.0;
        if (r1 - target).abs() <= (r2 - target).abs() {
            r1
        } else {
            r2
        }
    };
    if gap_high < threshold || gap_low < threshold {
        let pair_mean = if gap_high < threshold {
            (roots[0] + roots[1]) / 2.0
        } else {
            (roots[1] + roots[2]) / 2.0
        };
        let double = derivative_root_near(pair_mean);
        let mut rs = [double, double, -a - 2.0 * double];
        rs.sort_by(descending);
        return rs;
    }

    // Well-separated roots: Newton-polish each on the original cubic.
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let f = ((*r + a) * *r + b) * *r + c;
            let df = (3.0 * *r + 2.0 * a) * *r + b;
            if df.abs() > 1e-12 {
                *r -= f / df;
            }
        }
    }
    roots.sort_by(descending);
    roots
}

/// 2×2 Newton refinement of (θ1, θ2) toward (Φ1, Φ2) = (x, y).
fn newton_polish(mut t1: f64, mut t2: f64, x: f64, y: f64) -> (f64, f64) {
    let tau = 2.0 * std::f64::consts::PI;
    for _ in 0..25 {
        let f1 = phi1_float(t1, t2) - x;
        let f2 = phi2_float(t1, t2) - y;
        if f1.abs() + f2.abs() < 1e-13 {
            break;
        }
        let s = |a: f64| (tau * a).sin();
        // Partial derivatives of Φ1 and Φ2 (each 2π·(−2)·sin term).
        let j11 = -2.0 * tau * (s(t1) + s(t1 - t2));
        let j12 = -2.0 * tau * (s(t2) - s(t1 - t2));
        let j21 = j11 - 2.0 * tau * (s(t1 + t2) + 2.0 * s(2.0 * t1 - t2) + s(t1 - 2.0 * t2));
        let j22 = j12 - 2.0 * tau * (s(t1 + t2) - s(2.0 * t1 - t2) - 2.0 * s(t1 - 2.0 * t2));
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-14 {
            break;
        }
        let d1 = (f1 * j22 - f2 * j12) / det;
        let d2 = (f2 * j11 - f1 * j21) / det;
        let (n1, n2) = (t1 - d1, t2 - d2);
        let g1 = phi1_float(n1, n2) - x;
        let g2 = phi2_float(n1, n2) - y;
        if g1.abs() + g2.abs() >= f1.abs() + f2.abs() {
            break;
        }
        t1 = n1;
        t2 = n2;
    }
    (t1.rem_euclid(1.0), t2.rem_euclid(1.0))
}

/// Floating-point preimage of (x, y) ∈ D under (Φ1, Φ2).
///
/// The multiset {2cos2πθ1, 2cos2πθ2, 2cos2π(θ1−θ2)} consists of the roots of
/// the cubic u³ − (x−1)u² + (y−2)u − ((x−1)² − 2y), so the solver extracts
/// the three real roots, converts them to candidate angles, and tries the
/// nine (l, l′) branch pairs (each with both relative orientations of θ2) in
/// a fixed lexicographic order, returning the first candidate whose roundtrip
/// through (Φ1, Φ2) closes within 1e−9.
pub fn torus_preimage(x: f64, y: f64) -> Result<(f64, f64), TorusError> {
    let e1 = x - 1.0;
    let e2 = y - 2.0;
    let e3 = (x - 1.0) * (x - 1.0) - 2.0 * y;
    let roots = cubic_roots(-e1, e2, -e3);
    let tau = 2.0 * std::f64::consts::PI;
    // Snap eigenvalue sums that are ±2 up to rounding onto the exact wall
    // angle: acos amplifies an O(ε) error near ±1 to O(√ε), which the other
    // cosine terms then feel at first order.
    let angle = |u: f64| {
        if u >= 2.0 - 1e-12 {
            0.0
        } else if u <= -2.0 + 1e-12 {
            0.5
        } else {
            (u / 2.0).acos() / tau
        }
    };
    let mut best: Option<(f64, f64, f64)> = None;
    for l in 0..3 {
        for lp in 0..3 {
            for sign in [1.0, -1.0] {
                let t1 = angle(roots[l]);
                let t2 = (sign * angle(roots[lp])).rem_euclid(1.0);
                let r = (phi1_float(t1, t2) - x).abs() + (phi2_float(t1, t2) - y).abs();
                if r < 1e-9 {
                    return Ok((t1, t2));
                }
                if best.map(|(_, _, br)| r < br).unwrap_or(true) {
                    best = Some((t1, t2, r));
                }
            }
        }
    }
    // No branch closed directly; polish the best candidate before giving up.
    if let Some((t1, t2, _)) = best {
        let (p1, p2) = newton_polish(t1, t2, x, y);
        let r = (phi1_float(p1, p2) - x).abs() + (phi2_float(p1, p2) - y).abs();
        if r < 1e-9 {
            return Ok((p1, p2));
        }
    }
    Err(TorusError::NoPreimage { x, y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Rational64;

    fn pt(n1: i64, d1: i64, n2: i64, d2: i64) -> TorusPoint {
        TorusPoint::from_fracs(n1, d1, n2, d2)
    }

    #[test]
    fn weyl_generators_have_documented_orders() {
        let t2 = WeylElement::t2();
        let t6 = WeylElement::t6();
        assert_eq!(t2.compose(&t2), WeylElement::identity());
        let mut acc = WeylElement::identity();
        for _ in 0..3 {
            acc = acc.compose(&t6);
        }
        assert_eq!(acc.matrix(), [[-1, 0], [0, -1]]);
        for _ in 0..3 {
            acc = acc.compose(&t6);
        }
        assert_eq!(acc, WeylElement::identity());
        // Closure: composing any two of the 12 stays among the 12.
        let d12 = WeylElement::d12();
        assert_eq!(d12.len(), 12);
        let set: std::collections::BTreeSet<_> = d12.iter().copied().collect();
        assert_eq!(set.len(), 12);
        for a in &d12 {
            for b in &d12 {
                assert!(set.contains(&a.compose(b)));
            }
        }
        let s3 = WeylElement::s3();
        assert_eq!(s3.len(), 6);
        let s3set: std::collections::BTreeSet<_> = s3.iter().copied().collect();
        for a in &s3 {
            for b in &s3 {
                assert!(s3set.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn orbit_sizes_match_catalog_points() {
        assert_eq!(d12_orbit(&pt(0, 1, 0, 1)).len(), 1);
        assert_eq!(d12_orbit(&pt(1, 3, 2, 3)).len(), 2);
        let orbit = d12_orbit(&pt(1, 7, 3, 7));
        assert_eq!(orbit.len(), 12);
        assert!(orbit.contains(&pt(5, 7, 1, 7)));
        // Any diagonal point has orbit size ≤ 6.
        for k in 1..8 {
            let p = TorusPoint::new(Rational64::new(k, 9), Rational64::new(k, 9));
            assert!(d12_orbit(&p).len() <= 6);
        }
    }

    #[test]
    fn phi_golden_values() {
        assert_eq!(phi1(&pt(0, 1, 0, 1)), Cyclotomic::from_integer(7));
        assert_eq!(phi2(&pt(0, 1, 0, 1)), Cyclotomic::from_integer(14));
        assert_eq!(phi1(&pt(1, 3, 2, 3)), Cyclotomic::from_integer(-2));
        assert_eq!(phi2(&pt(0, 1, 1, 2)), Cyclotomic::from_integer(-2));
        // Φ1(1/13, 4/13) = (1+√13)/2: pinned by (2v−1)² = 13 and positivity.
        let v = phi1(&pt(1, 13, 4, 13));
        let two_v_minus_1 = &(&v + &v) - &Cyclotomic::one();
        assert_eq!(two_v_minus_1.pow(2), Cyclotomic::from_integer(13));
        assert!(v.to_float().re > 0.0);
        // Φ2(1/9, 4/9) = p + q + 1 with p = 2cos(4π/9), q = 2cos(8π/9).
        let expected = &(&Cyclotomic::two_cos(Rational64::new(2, 9))
            + &Cyclotomic::two_cos(Rational64::new(4, 9)))
            + &Cyclotomic::one();
        assert_eq!(phi2(&pt(1, 9, 4, 9)), expected);
    }

    #[test]
    fn density_golden_values() {
        assert_eq!(j2(&pt(0, 1, 0, 1)), Cyclotomic::zero());
        assert_eq!(j2(&pt(1, 7, 3, 7)), Cyclotomic::from_ratio(49, 4));
        assert_eq!(j2(&pt(1, 12, 5, 12)), Cyclotomic::from_integer(12));
        assert_eq!(kdens(&pt(0, 1, 1, 4)), Cyclotomic::from_integer(16));
        assert_eq!(kdens(&pt(0, 1, 0, 1)), Cyclotomic::zero());
        assert_eq!(kdens(&pt(1, 4, 1, 2)), Cyclotomic::zero());
    }

    #[test]
    fn invariance_under_d12() {
        let samples = [
            pt(1, 7, 3, 7),
            pt(1, 9, 4, 9),
            pt(1, 8, 3, 8),
            pt(2, 13, 7, 13),
        ];
        for p in samples {
            let (f1, f2, jj, kk) = (phi1(&p), phi2(&p), j2(&p), kdens(&p));
            for g in WeylElement::d12() {
                let q = g.apply(&p);
                assert_eq!(phi1(&q), f1);
                assert_eq!(phi2(&q), f2);
                assert_eq!(j2(&q), jj);
                assert_eq!(kdens(&q), kk);
            }
        }
    }

    #[test]
    fn domain_membership_golden_values() {
        let c = Cyclotomic::from_integer;
        assert!(domain_contains(&c(0), &c(0)).unwrap());
        assert!(domain_contains(&c(7), &c(14)).unwrap());
        assert!(!domain_contains(&c(7), &c(-14)).unwrap());
        // The polynomial identity 4·j2 = P1·P2′ at a sample of points.
        for p in [
            pt(1, 7, 3, 7),
            pt(1, 9, 2, 9),
            pt(1, 5, 3, 5),
            pt(3, 11, 9, 11),
        ] {
            let x = phi1(&p);
            let y = phi2(&p);
            let lhs = &j2(&p) * &c(4);
            let rhs = &domain_poly_p1(&x, &y) * &domain_poly_p2(&x, &y);
            assert_eq!(lhs, rhs);
        }
        // The printed sign of the second factor fails at (x, y) = (0, 0),
        // which is the image of the torus point (1/7, 3/7) where j2 = 49/4.
        let p = pt(1, 7, 3, 7);
        let x = phi1(&p);
        let y = phi2(&p);
        assert!(x.is_zero() && y.is_zero());
        let printed_second = domain_poly_p2(&x, &y).neg();
        let printed = &domain_poly_p1(&x, &y) * &printed_second;
        assert_ne!(&j2(&p) * &c(4), printed);
        assert_eq!(printed, c(-49));
    }

    #[test]
    fn preimage_golden_and_roundtrip() {
        let (t1, t2) = torus_preimage(7.0, 14.0).unwrap();
        assert!((phi1_float(t1, t2) - 7.0).abs() < 1e-9);
        assert!((t1.min(1.0 - t1)).abs() < 1e-6 && (t2.min(1.0 - t2)).abs() < 1e-6);
        // (−2, 5) lands in the orbit of (1/3, 2/3).
        let (t1, t2) = torus_preimage(-2.0, 5.0).unwrap();
        let orbit = d12_orbit(&pt(1, 3, 2, 3));
        let close = orbit.iter().any(|q| {
            let q1 = (*q.theta1().numer() as f64) / (*q.theta1().denom() as f64);
            let q2 = (*q.theta2().numer() as f64) / (*q.theta2().denom() as f64);
            (q1 - t1).abs() < 1e-6 && (q2 - t2).abs() < 1e-6
        });
        assert!(close, "({t1}, {t2}) not in the expected orbit");
        // Dense roundtrip over rational points.
        for a in 1..12 {
            for b in 1..12 {
                let p = TorusPoint::new(Rational64::new(a, 12), Rational64::new(b, 13));
                let x = phi1(&p).to_float().re;
                let y = phi2(&p).to_float().re;
                let (s1, s2) = torus_preimage(x, y).unwrap();
                assert!(
                    (phi1_float(s1, s2) - x).abs() < 1e-9 && (phi2_float(s1, s2) - y).abs() < 1e-9
                );
            }
        }
    }

    #[test]
    fn eigenvalue_multiset_sums_reproduce_phi() {
        // The E-set {1, t1, t1⁻¹, t2, t2⁻¹, t1t2⁻¹, t1⁻¹t2} sums to Φ1 and its
        // 14-element extension sums to Φ2.
        let samples = [pt(1, 8, 3, 8), pt(1, 13, 4, 13), pt(1, 9, 1, 3)];
        for p in samples {
            let t1 = p.theta1();
            let t2 = p.theta2();
            let z = Cyclotomic::root_at;
            let mut e7 = Cyclotomic::one();
            for a in [t1, -t1, t2, -t2, t1 - t2, t2 - t1] {
                e7 = &e7 + &z(a);
            }
            assert_eq!(e7, phi1(&p));
            let mut e14 = &e7 + &Cyclotomic::one();
            let two = Rational64::from_integer(2);
            for a in [
                t1 + t2,
                -t1 - t2,
                two * t1 - t2,
                t2 - two * t1,
                t1 - two * t2,
                two * t2 - t1,
            ] {
                e14 = &e14 + &z(a);
            }
            assert_eq!(e14, phi2(&p));
        }
    }
}
