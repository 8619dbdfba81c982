//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! A [`Cyclotomic`] stores a finite Q-linear combination of roots of unity
//! ζ_N^k in a *canonical basis*, so that equality of values is equality of
//! representations. The basis is the standard tensor basis over the
//! prime-power factorization N = ∏ pᵢ^νᵢ: writing every exponent through the
//! Chinese remainder theorem as a tuple of "digits" cᵢ modulo qᵢ = pᵢ^νᵢ, the
//! basis consists of those ζ_N^k whose digits all satisfy cᵢ < φ(qᵢ).
//! Out-of-range digits are rewritten with the relation
//! Σ_{j=0}^{p-1} ζ_q^{j·q/p} = 0 (the computer-algebra convention), which in a
//! single step lands inside the basis.
//!
//! After every operation the conductor is *minimized*: a value lying in a
//! smaller cyclotomic field is re-expressed there, rationals end up at
//! conductor 1, and conductors are never ≡ 2 (mod 4). Consequently `==`,
//! `Ord` and `Hash` all agree with mathematical equality.
//!
//! Conductors are capped at [`CONDUCTOR_CAP`]; operations that would exceed
//! the cap report [`CycError::ConductorTooLarge`] instead of degrading.
//!
//! The module also provides the shared text grammar for cyclotomic literals:
//! `E(n)` denotes e^{2πi/n}, terms look like `-1/2*E(7)^3`, sums chain with
//! `+`/`-`, and `conj(<expr>)` takes complex conjugates. See
//! [`parse_cyclotomic`].

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Largest conductor any operation is allowed to produce.
pub const CONDUCTOR_CAP: u64 = 100_000;

/// Errors produced by cyclotomic arithmetic and parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    /// Division by the zero element of the field.
    #[error("division by zero")]
    DivisionByZero,
    /// An operation would need a cyclotomic field Q(ζ_N) with N above the cap.
    #[error("conductor {0} exceeds the supported cap {CONDUCTOR_CAP}")]
    ConductorTooLarge(u64),
    /// A cyclotomic literal failed to parse; `pos` is a byte offset.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An exact element of a cyclotomic field, in canonical form.
///
/// Invariants maintained by every constructor and operation:
/// - `coeffs` maps basis exponents (see module docs) to nonzero rationals;
/// - the conductor is minimal for the value, is never ≡ 2 (mod 4), and is 1
///   exactly when the value is rational (the zero element has an empty map).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: BTreeMap<u64, BigRational>,
}

/// Prime-power factorization data for one conductor, with the CRT helpers
/// used for digit extraction and recombination.
struct BasisInfo {
    n: u64,
    /// (p, ν, q = p^ν, e = n/q, f = e⁻¹ mod q, φ(q))
    factors: Vec<(u64, u32, u64, u64, u64, u64)>,
}

fn gcd(a: u64, b: u64) -> u64 {
    num::integer::gcd(a, b)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // Extended Euclid; gcd(a, m) = 1 is guaranteed by the callers.
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

impl BasisInfo {
    fn new(n: u64) -> Self {
        debug_assert!(n >= 1);
        let mut factors = Vec::new();
        let mut rest = n;
        let mut p = 2u64;
        while p * p <= rest {
            if rest.is_multiple_of(p) {
                let mut nu = 0u32;
                let mut q = 1u64;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    nu += 1;
                    q *= p;
                }
                factors.push((p, nu, q));
            }
            p += 1;
        }
        if rest > 1 {
            factors.push((rest, 1, rest));
        }
        let factors = factors
            .into_iter()
            .map(|(p, nu, q)| {
                let e = n / q;
                let f = mod_inverse(e % q, q);
                let phi = q - q / p;
                (p, nu, q, e, f, phi)
            })
            .collect();
        BasisInfo { n, factors }
    }

    fn digits(&self, j: u64) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&(_, _, q, _, f, _)| (j % q) * f % q)
            .collect()
    }

    fn recombine(&self, digits: &[u64]) -> u64 {
        let mut j: u128 = 0;
        for (d, &(_, _, _, e, _, _)) in digits.iter().zip(&self.factors) {
            j += *d as u128 * e as u128;
        }
        (j % self.n as u128) as u64
    }

    /// Rewrites ζ_n^j as a signed sum of canonical-basis exponents.
    fn reduce_exponent(&self, j: u64) -> Vec<(u64, i64)> {
        let mut terms: Vec<(Vec<u64>, i64)> = vec![(self.digits(j), 1)];
        for (i, &(p, nu, _, _, _, phi)) in self.factors.iter().enumerate() {
            let pv = phi / (p - 1); // p^(ν-1)
            let _ = nu;
            let mut next = Vec::with_capacity(terms.len());
            for (digs, sign) in terms {
                let c = digs[i];
                if c < phi {
                    next.push((digs, sign));
                } else {
                    let r = c - phi; // r < p^(ν-1)
                    for t in 0..(p - 1) {
                        let mut d2 = digs.clone();
                        d2[i] = r + t * pv;
                        next.push((d2, -sign));
                    }
                }
            }
            terms = next;
        }
        terms
            .into_iter()
            .map(|(digs, sign)| (self.recombine(&digs), sign))
            .collect()
    }
}

fn rat_zero() -> BigRational {
    BigRational::zero()
}

fn add_coeff(map: &mut BTreeMap<u64, BigRational>, exponent: u64, c: BigRational) {
    let entry = map.entry(exponent).or_insert_with(rat_zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&exponent);
    }
}

impl Cyclotomic {
    /// The zero element (conductor 1, empty coefficient map).
    pub fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit element 1.
    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(v: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !v.is_zero() {
            coeffs.insert(0, v);
        }
        Cyclotomic {
            conductor: 1,
            coeffs,
        }
    }

    /// Builds the rational value `num/den` (`den` ≠ 0).
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "denominator must be nonzero");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The exact primitive value e^{2πi·num/den}.
    ///
    /// `num` is reduced modulo `den`; the result's conductor divides `den`
    /// (after removing the factor shared with `num` and folding conductors
    /// ≡ 2 mod 4 via ζ_{2m} = −ζ_m^{(m+1)/2}).
    pub fn root_of_unity(num: i64, den: i64) -> Result<Self, CycError> {
        assert!(den >= 1, "den must be positive");
        let den_u = den as u64;
        let num_u = num.rem_euclid(den) as u64;
        let g = gcd(num_u, den_u).max(1);
        let mut k = num_u / g;
        let mut n = den_u / g;
        let mut negate = false;
        if n % 4 == 2 {
            // ζ_{2m}^k = (−1)^k ζ_m^{k(m+1)/2}; k is odd here since gcd(k, 2m) = 1.
            let m = n / 2;
            debug_assert!(k % 2 == 1);
            negate = true;
            k = (k % m) * m.div_ceil(2) % m;
            n = m;
        }
        if n > CONDUCTOR_CAP {
            return Err(CycError::ConductorTooLarge(n));
        }
        let info = BasisInfo::new(n);
        let mut coeffs = BTreeMap::new();
        for (e, s) in info.reduce_exponent(k) {
            let s = if negate { -s } else { s };
            add_coeff(&mut coeffs, e, BigRational::from_integer(BigInt::from(s)));
        }
        let mut out = Cyclotomic {
            conductor: n,
            coeffs,
        };
        out.minimize();
        Ok(out)
    }

    /// e^{2πi·r} for a rational angle `r` (a convenience wrapper).
    pub fn root_at(r: num::rational::Rational64) -> Self {
        Self::root_of_unity(*r.numer(), *r.denom()).expect("rational angle within conductor cap")
    }

    /// The exact value 2·cos(2π·r).
    pub fn two_cos(r: num::rational::Rational64) -> Self {
        let z = Self::root_at(r);
        let zc = z.conjugate();
        &z + &zc
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1
            && self.coeffs.len() == 1
            && self.coeffs.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Re-expresses the coefficients at a conductor `n` that is a multiple of
    /// the current one. The exponent map k ↦ k·(n/m) sends canonical basis to
    /// canonical basis, so no rewriting is needed.
    fn promoted_coeffs(&self, n: u64) -> BTreeMap<u64, BigRational> {
        if n == self.conductor {
            return self.coeffs.clone();
        }
        debug_assert!(n.is_multiple_of(self.conductor));
        let scale = n / self.conductor;
        self.coeffs
            .iter()
            .map(|(&k, c)| (k * scale % n, c.clone()))
            .collect()
    }

    /// Minimizes the conductor in place. Assumes `coeffs` is already in the
    /// canonical basis with no zero entries.
    fn minimize(&mut self) {
        if self.coeffs.is_empty() {
            self.conductor = 1;
            return;
        }
        'outer: loop {
            if self.conductor == 1 {
                return;
            }
            let info = BasisInfo::new(self.conductor);
            let digit_table: Vec<(u64, Vec<u64>)> =
                self.coeffs.keys().map(|&j| (j, info.digits(j))).collect();
            for (i, &(p, nu, q, _, _, _)) in info.factors.iter().enumerate() {
                let drop_whole = nu == 1 || (p == 2 && nu == 2);
                if drop_whole {
                    // Q(ζ_{n/q}) membership: the digit at this factor is 0
                    // everywhere (1 spans the rational line of the factor).
                    if digit_table.iter().all(|(_, d)| d[i] == 0) {
                        let new_n = self.conductor / q;
                        let new_info = BasisInfo::new(new_n);
                        let mut coeffs = BTreeMap::new();
                        for ((j, digs), c) in digit_table.iter().zip(self.coeffs.values()) {
                            let _ = j;
                            let mut nd: Vec<u64> = Vec::with_capacity(digs.len() - 1);
                            for (t, &d) in digs.iter().enumerate() {
                                if t != i {
                                    nd.push(d);
                                }
                            }
                            coeffs.insert(new_info.recombine(&nd), c.clone());
                        }
                        self.conductor = new_n;
                        self.coeffs = coeffs;
                        continue 'outer;
                    }
                } else {
                    // Q(ζ_{n/p}) membership: every digit divisible by p.
                    if digit_table.iter().all(|(_, d)| d[i] % p == 0) {
                        let new_n = self.conductor / p;
                        let new_info = BasisInfo::new(new_n);
                        let mut coeffs = BTreeMap::new();
                        for ((j, digs), c) in digit_table.iter().zip(self.coeffs.values()) {
                            let _ = j;
                            let mut nd = digs.clone();
                            nd[i] /= p;
                            coeffs.insert(new_info.recombine(&nd), c.clone());
                        }
                        self.conductor = new_n;
                        self.coeffs = coeffs;
                        continue 'outer;
                    }
                }
            }
            return;
        }
    }

    fn merge_conductor(&self, other: &Self) -> Result<u64, CycError> {
        let l = num::integer::lcm(self.conductor, other.conductor);
        if l > CONDUCTOR_CAP {
            return Err(CycError::ConductorTooLarge(l));
        }
        Ok(l)
    }

    /// Exact sum; errors only if the merged conductor exceeds the cap.
    pub fn checked_add(&self, other: &Self) -> Result<Self, CycError> {
        let n = self.merge_conductor(other)?;
        let mut coeffs = self.promoted_coeffs(n);
        for (k, c) in other.promoted_coeffs(n) {
            add_coeff(&mut coeffs, k, c);
        }
        let mut out = Cyclotomic {
            conductor: n,
            coeffs,
        };
        out.minimize();
        Ok(out)
    }

    /// Exact difference; errors only if the merged conductor exceeds the cap.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycError> {
        self.checked_add(&other.neg())
    }

    /// Exact product; errors only if the merged conductor exceeds the cap.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycError> {
        let n = self.merge_conductor(other)?;
        let a = self.promoted_coeffs(n);
        let b = other.promoted_coeffs(n);
        let info = BasisInfo::new(n);
        let mut reduction_cache: BTreeMap<u64, Vec<(u64, i64)>> = BTreeMap::new();
        let mut coeffs = BTreeMap::new();
        for (&ka, ca) in &a {
            for (&kb, cb) in &b {
                let k = (ka + kb) % n;
                let reduced = reduction_cache
                    .entry(k)
                    .or_insert_with(|| info.reduce_exponent(k));
                let prod = ca * cb;
                for &(e, s) in reduced.iter() {
                    let signed = if s >= 0 { prod.clone() } else { -prod.clone() };
                    add_coeff(&mut coeffs, e, signed);
                }
            }
        }
        let mut out = Cyclotomic {
            conductor: n,
            coeffs,
        };
        out.minimize();
        Ok(out)
    }

    /// Exact quotient; reports division by zero distinctly.
    pub fn checked_div(&self, other: &Self) -> Result<Self, CycError> {
        self.checked_mul(&other.inverse()?)
    }

    /// Multiplicative inverse, computed from the product of the nontrivial
    /// Galois conjugates divided by the (rational) field norm.
    pub fn inverse(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if self.conductor == 1 {
            let c = self.coeffs.get(&0).expect("nonzero rational");
            return Ok(Self::from_rational(c.recip()));
        }
        if self.coeffs.len() == 1 {
            // Monomial fast path: (c·ζ^k)⁻¹ = c⁻¹·ζ^{n−k}.
            let (&k, c) = self.coeffs.iter().next().expect("single term");
            let root = Self::root_of_unity(-(k as i64), self.conductor as i64)?;
            return root.checked_mul(&Self::from_rational(c.recip()));
        }
        let n = self.conductor;
        let mut prod = Self::one();
        for t in 2..n {
            if gcd(t, n) == 1 {
                prod = prod.checked_mul(&self.galois(t))?;
            }
        }
        let norm = self.checked_mul(&prod)?;
        let norm_rat = norm
            .as_rational()
            .expect("product of all Galois conjugates is rational");
        if norm_rat.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        prod.checked_mul(&Self::from_rational(norm_rat.recip()))
    }

    /// The Galois automorphism ζ_n ↦ ζ_n^t for t coprime to the conductor.
    pub fn galois(&self, t: u64) -> Self {
        let n = self.conductor;
        debug_assert_eq!(gcd(t % n, n), 1, "galois exponent must be coprime");
        let info = BasisInfo::new(n);
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            let kt = (k as u128 * t as u128 % n as u128) as u64;
            for (e, s) in info.reduce_exponent(kt) {
                let signed = if s >= 0 { c.clone() } else { -c.clone() };
                add_coeff(&mut coeffs, e, signed);
            }
        }
        let mut out = Cyclotomic {
            conductor: n,
            coeffs,
        };
        out.minimize();
        out
    }

    /// Complex conjugate (exact): ζ_N^k ↦ ζ_N^{N−k}.
    pub fn conjugate(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        self.galois(self.conductor - 1)
    }

    /// Additive negation.
    pub fn neg(&self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }

    /// Nonnegative integer power by repeated multiplication (the conductor
    /// never grows, so this cannot hit the cap).
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc
                .checked_mul(self)
                .expect("power stays in the same field");
        }
        acc
    }

    /// Floating-point approximation; within 1e−12 of the exact value for
    /// conductor ≤ 10⁴ at the coefficient sizes used by this crate.
    pub fn to_float(&self) -> Complex64 {
        let n = self.conductor as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, c) in &self.coeffs {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / n;
            let cf = rational_to_f64(c);
            acc += Complex64::new(cf * angle.cos(), cf * angle.sin());
        }
        acc
    }

    /// True iff the value equals its complex conjugate.
    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    /// The exact rational value when the conductor is 1, absent otherwise.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.conductor != 1 {
            return None;
        }
        Some(self.coeffs.get(&0).cloned().unwrap_or_else(rat_zero))
    }

    /// Honest sign of a real value: `Some(0)` for the exact zero, `Some(±1)`
    /// when the floating image is decisively signed, `None` when the value is
    /// nonzero but numerically indistinguishable from zero (|·| < 1e−9).
    pub fn real_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        let f = self.to_float().re;
        if f > 1e-9 {
            Some(1)
        } else if f < -1e-9 {
            Some(-1)
        } else {
            None
        }
    }
}

fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let num = c.numer().to_f64().unwrap_or(f64::NAN);
        let den = c.denom().to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

impl std::ops::Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs)
            .expect("conductor cap exceeded in add")
    }
}

impl std::ops::Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_sub(rhs)
            .expect("conductor cap exceeded in sub")
    }
}

impl std::ops::Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs)
            .expect("conductor cap exceeded in mul")
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::neg(self)
    }
}

impl fmt::Display for Cyclotomic {
    /// Canonical rendering in the literal grammar this crate parses:
    /// conductor-1 values print as plain rationals, everything else as a sum
    /// of `c*E(n)^k` terms in increasing exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let mut first = true;
        for (&k, c) in &self.coeffs {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let base = if k == 0 {
                "1".to_string()
            } else if k == 1 {
                format!("E({})", self.conductor)
            } else {
                format!("E({})^{}", self.conductor, k)
            };
            if abs.is_one() {
                write!(f, "{base}")?;
            } else if k == 0 {
                write!(f, "{}", format_rational(&abs))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), base)?;
            }
        }
        Ok(())
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ----------------------------------------------------------------------------
// Literal parser
// ----------------------------------------------------------------------------

/// Parses the shared cyclotomic literal grammar.
///
/// Grammar (whitespace insignificant):
/// ```text
/// expr    := ['+'|'-'] term (('+'|'-') term)*
/// term    := factor ('*' factor)*
/// factor  := primary ['^' ['-'] integer]
/// primary := integer ['/' integer] | 'E' '(' integer ')' | 'conj' '(' expr ')' | '(' expr ')'
/// ```
pub fn parse_cyclotomic(input: &str) -> Result<Cyclotomic, CycError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let v = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> CycError {
        CycError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), CycError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn parse_integer(&mut self) -> Result<i64, CycError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digits are utf8")
            .parse::<i64>()
            .map_err(|_| self.error("integer out of range"))
    }

    fn parse_expr(&mut self) -> Result<Cyclotomic, CycError> {
        self.skip_ws();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            let _ = self.eat(b'+');
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                let t = self.parse_term()?;
                acc = acc.checked_add(&t).map_err(|e| self.wrap(e))?;
            } else if self.eat(b'-') {
                let t = self.parse_term()?;
                acc = acc.checked_sub(&t).map_err(|e| self.wrap(e))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Cyclotomic, CycError> {
        let mut acc = self.parse_factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let t = self.parse_factor()?;
                acc = acc.checked_mul(&t).map_err(|e| self.wrap(e))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Cyclotomic, CycError> {
        let base = self.parse_primary()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let negative = self.eat(b'-');
            let k = self.parse_integer()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent out of range"))?;
            let powed = base.pow(k);
            if negative {
                return powed.inverse().map_err(|e| self.wrap(e));
            }
            return Ok(powed);
        }
        Ok(base)
    }

    fn parse_primary(&mut self) -> Result<Cyclotomic, CycError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.parse_expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'E') => {
                self.pos += 1;
                self.skip_ws();
                self.expect(b'(')?;
                self.skip_ws();
                let n = self.parse_integer()?;
                if n < 1 {
                    return Err(self.error("E(n) requires n ≥ 1"));
                }
                self.skip_ws();
                self.expect(b')')?;
                Cyclotomic::root_of_unity(1, n).map_err(|e| self.wrap(e))
            }
            Some(b'c') => {
                for b in b"conj" {
                    if !self.eat(*b) {
                        return Err(self.error("expected 'conj'"));
                    }
                }
                self.skip_ws();
                self.expect(b'(')?;
                let v = self.parse_expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(v.conjugate())
            }
            Some(d) if d.is_ascii_digit() => {
                let num = self.parse_integer()?;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    // Lookahead: only treat '/' as a fraction bar when a digit
                    // follows (the grammar has no other use of '/').
                    if self
                        .bytes
                        .get(self.pos + 1)
                        .map(|b| b.is_ascii_digit())
                        .unwrap_or(false)
                    {
                        self.pos += 1;
                        let den = self.parse_integer()?;
                        if den == 0 {
                            return Err(self.error("zero denominator"));
                        }
                        return Ok(Cyclotomic::from_ratio(num, den));
                    }
                }
                Ok(Cyclotomic::from_integer(num))
            }
            _ => Err(self.error("expected a number, E(n), conj(...), or '('")),
        }
    }

    fn wrap(&self, e: CycError) -> CycError {
        match e {
            CycError::Parse { .. } => e,
            other => CycError::Parse {
                pos: self.pos,
                msg: other.to_string(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Rational64;

    fn zeta(num: i64, den: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(num, den).expect("small conductor")
    }

    #[test]
    fn identity_and_full_sum_of_seventh_roots() {
        assert!(zeta(0, 1).is_one());
        let mut sum = Cyclotomic::zero();
        for k in 0..7 {
            sum = &sum + &zeta(k, 7);
        }
        assert!(sum.is_zero());
        assert_eq!(sum.conductor(), 1);
    }

    #[test]
    fn w_from_seventh_roots_squares_to_minus_one_minus_w() {
        // w = ζ7 + ζ7² + ζ7⁴ = (−1+i√7)/2 satisfies w² + w + 2 = 0 and has
        // |w|² = 2; both pin the quadratic Gauss sum exactly.
        let w = &(&zeta(1, 7) + &zeta(2, 7)) + &zeta(4, 7);
        let wbar = w.conjugate();
        let prod = &w * &wbar;
        assert_eq!(prod, Cyclotomic::from_integer(2));
        let sq = &(&w * &w) + &(&w + &Cyclotomic::from_integer(2));
        assert!(sq.is_zero());
        let float = w.to_float();
        assert!((float.re + 0.5).abs() < 1e-12);
        assert!((float.im - 7f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(!w.is_real());
        assert!(w.as_rational().is_none());
    }

    #[test]
    fn canonicalization_identities() {
        // ζ6 = −ζ3² and ζ4² = −1 as representation equalities.
        let z6 = zeta(1, 6);
        let z3sq = zeta(1, 3).pow(2);
        assert_eq!(z6, z3sq.neg());
        assert_eq!(z6.conductor(), 3);
        let z4sq = zeta(1, 4).pow(2);
        assert_eq!(z4sq, Cyclotomic::from_integer(-1));
        assert_eq!(zeta(1, 3).pow(3), Cyclotomic::one());
    }

    #[test]
    fn conductor_minimization_drops_to_true_field() {
        // ζ5 + ζ5⁴ is irrational (conductor 5), but ζ5+ζ5²+ζ5³+ζ5⁴ = −1.
        let a = &zeta(1, 5) + &zeta(4, 5);
        assert_eq!(a.conductor(), 5);
        let b = &(&zeta(1, 5) + &zeta(2, 5)) + &(&zeta(3, 5) + &zeta(4, 5));
        assert_eq!(b, Cyclotomic::from_integer(-1));
        // A 12th-root combination lying in Q(ζ3): ζ12⁴ = ζ3.
        let c = zeta(1, 12).pow(4);
        assert_eq!(c.conductor(), 3);
        assert_eq!(c, zeta(1, 3));
    }

    #[test]
    fn division_and_inverse() {
        let w = &(&zeta(1, 7) + &zeta(2, 7)) + &zeta(4, 7);
        let q = w.checked_div(&w).expect("nonzero");
        assert!(q.is_one());
        let inv = w.inverse().expect("nonzero");
        assert!(w.checked_mul(&inv).unwrap().is_one());
        // w·w̄ = 2 means w⁻¹ = w̄/2.
        let expected = w
            .conjugate()
            .checked_mul(&Cyclotomic::from_ratio(1, 2))
            .unwrap();
        assert_eq!(inv, expected);
        assert_eq!(
            Cyclotomic::zero().inverse().unwrap_err(),
            CycError::DivisionByZero
        );
    }

    #[test]
    fn conductor_cap_is_reported() {
        let err = Cyclotomic::root_of_unity(1, 100_001).unwrap_err();
        assert!(matches!(err, CycError::ConductorTooLarge(100_001)));
        // Merging two fields may also exceed the cap.
        let a = zeta(1, 99991); // prime, below cap
        let b = zeta(1, 3);
        assert!(matches!(
            a.checked_mul(&b),
            Err(CycError::ConductorTooLarge(_))
        ));
    }

    #[test]
    fn two_cos_is_real_and_matches_float() {
        let c = Cyclotomic::two_cos(Rational64::new(1, 8));
        assert!(c.is_real());
        let f = c.to_float();
        assert!((f.re - 2.0 * (std::f64::consts::PI / 4.0).cos()).abs() < 1e-12);
        assert!(f.im.abs() < 1e-14);
        assert_eq!(c.real_sign(), Some(1));
    }

    #[test]
    fn parser_accepts_the_documented_grammar() {
        let w = parse_cyclotomic("E(7)+E(7)^2+E(7)^4").unwrap();
        let direct = &(&zeta(1, 7) + &zeta(2, 7)) + &zeta(4, 7);
        assert_eq!(w, direct);
        let half = parse_cyclotomic("-1/2*E(1)").unwrap();
        assert_eq!(half, Cyclotomic::from_ratio(-1, 2));
        let conj = parse_cyclotomic("conj(E(7)+E(7)^2+E(7)^4)").unwrap();
        assert_eq!(conj, direct.conjugate());
        let nested = parse_cyclotomic(" ( 1 + E(4) ) * ( 1 - E(4) ) ").unwrap();
        assert_eq!(nested, Cyclotomic::from_integer(2));
        let neg_pow = parse_cyclotomic("E(5)^-1").unwrap();
        assert_eq!(neg_pow, zeta(4, 5));
        assert!(parse_cyclotomic("E(7)+").is_err());
        assert!(parse_cyclotomic("E()").is_err());
        assert!(parse_cyclotomic("conj(1").is_err());
    }

    #[test]
    fn display_roundtrips_through_parser() {
        let samples = vec![
            Cyclotomic::zero(),
            Cyclotomic::from_ratio(-3, 4),
            &(&zeta(1, 7) + &zeta(2, 7)) + &zeta(4, 7),
            Cyclotomic::two_cos(Rational64::new(1, 13)),
            zeta(5, 8),
        ];
        for v in samples {
            let s = v.to_string();
            let back = parse_cyclotomic(&s).expect("display output parses");
            assert_eq!(back, v, "roundtrip failed for {s}");
        }
    }
}
