//! Character-table data model, text-format parser, and validation.
//!
//! A character table here is the complete spectral datum of a finite group Γ
//! with trivial center: its conjugacy classes (with sizes, element orders and
//! power maps C ↦ class of g^p) and its irreducible characters with exact
//! cyclotomic values. Two families of identities tie the data together and
//! are enforced by [`CharacterTable::validate`]:
//!
//! - **Row orthogonality.** For irreducible characters χ_i, χ_j,
//!   Σ_C |C|·χ_i(C)·conj(χ_j(C)) = δ_ij·|Γ| exactly. Equivalently the matrix
//!   S with entries √|C|·χ_λ(C)/√|Γ| is unitary; the same matrix
//!   simultaneously diagonalizes all the McKay graphs built downstream.
//! - **Column orthogonality.** Σ_λ χ_λ(C)·conj(χ_λ(C′)) = δ_{CC′}·|Γ|/|C|,
//!   a formal consequence of row orthogonality that serves as an independent
//!   cross-check on transcription errors.
//!
//! Power maps matter because eigenvalue reconstruction needs them: an element
//! g of order n acts in any representation with eigenvalues that are n-th
//! roots of unity, and the eigenvalues of g^p are the p-th powers of those of
//! g. Recording the class of g^p for every prime p dividing any element
//! order pins the multisets down far more tightly than character values
//! alone. For primes p coprime to n the value χ(g^p) is the Galois conjugate
//! σ_p(χ(g)), so these entries are redundant in principle but kept explicit
//! in the data files so that validation and reconstruction never need to
//! choose a Galois embedding.
//!
//! The on-disk format is line-oriented UTF-8:
//!
//! ```text
//! group "PSL(2,7)"
//! order 168
//! class C1 size=1 order=1 pow2=C1 pow3=C1 pow7=C1
//! irrep Sigma1 degree=1 values=[1, 1, 1, 1, 1, 1]
//! ```
//!
//! Comments run from `#` to end of line. Field order within a line is fixed.
//! Character values use the cyclotomic literal grammar of
//! [`crate::cyclotomic::parse_cyclotomic`].

use std::collections::BTreeMap;
use std::fmt;

use crate::cyclotomic::{parse_cyclotomic, CycError, Cyclotomic};

/// Errors from parsing a character-table file or from exact arithmetic on
/// its values. Validation findings are *not* errors — see
/// [`CharacterTable::validate`], which returns them as data.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    /// Structural problem in the input text, with 1-based position.
    #[error("line {line}, column {column}: {message}")]
    Parse {
        /// 1-based line number.
        line: usize,
        /// 1-based column of the offending token.
        column: usize,
        /// Human-readable description.
        message: String,
    },
    /// A class-function vector did not match the table's class count.
    #[error("class-function length mismatch: expected {expected} values, got {got}")]
    LengthMismatch {
        /// Number of conjugacy classes in the table.
        expected: usize,
        /// Length of the offending vector.
        got: usize,
    },
    /// Exact arithmetic failed (conductor overflow or division by zero).
    #[error("cyclotomic arithmetic: {0}")]
    Arithmetic(#[from] CycError),
}

/// One conjugacy class: its label, size, common element order, and the
/// resolved power map p ↦ index of the class of g^p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClass {
    /// Class label as written in the source file (e.g. `C7A`).
    pub name: String,
    /// Number of elements |C|.
    pub size: u64,
    /// Order of every element of the class.
    pub element_order: u64,
    /// For each recorded prime p, the index (into the table's class list) of
    /// the class containing g^p for g in this class.
    pub power_map: BTreeMap<u64, usize>,
}

/// One irreducible character: label, degree, and one exact value per class,
/// in the table's class order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irrep {
    /// Character label as written in the source file (e.g. `Sigma7`).
    pub name: String,
    /// Degree χ(1).
    pub degree: u64,
    /// Exact character values, one per conjugacy class.
    pub values: Vec<Cyclotomic>,
}

/// A complete character table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    /// Display name of the group.
    pub group_name: String,
    /// Group order |Γ|.
    pub order: u64,
    /// Conjugacy classes in file order.
    pub classes: Vec<ConjClass>,
    /// Irreducible characters in file order.
    pub irreps: Vec<Irrep>,
}

/// Parses a character table from its text form.
///
/// The parser enforces structure only: presence of the `group` and `order`
/// headers, one-line-per-record grammar, unique class and irrep names, value
/// rows of the right length, and power-map targets that resolve to declared
/// classes. Mathematical consistency (orthogonality, degree sums, …) is the
/// job of [`CharacterTable::validate`], so that a defective table can be
/// loaded and then *reported on* rather than rejected opaquely.
pub fn parse_table(text: &str) -> Result<CharacterTable, TableError> {
    let mut group_name: Option<String> = None;
    let mut order: Option<u64> = None;
    // Class records carry unresolved power-map targets until all classes are
    // known; (prime, target name, line, column) tuples wait in `pending`.
    let mut classes: Vec<ConjClass> = Vec::new();
    let mut pending: Vec<Vec<(u64, String, usize, usize)>> = Vec::new();
    let mut irreps: Vec<Irrep> = Vec::new();
    let mut irrep_lines: Vec<usize> = Vec::new();

    let err = |line: usize, column: usize, message: String| TableError::Parse {
        line,
        column,
        message,
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col_of = |sub: &str| column_of(raw, sub);
        let mut words = trimmed.split_whitespace();
        let keyword = words.next().unwrap();
        match keyword {
            "group" => {
                let rest = trimmed["group".len()..].trim();
                if !(rest.len() >= 2 && rest.starts_with('"') && rest.ends_with('"')) {
                    return Err(err(
                        line_no,
                        col_of(rest),
                        "group name must be double-quoted".into(),
                    ));
                }
                if group_name.is_some() {
                    return Err(err(line_no, 1, "duplicate group line".into()));
                }
                group_name = Some(rest[1..rest.len() - 1].to_string());
            }
            "order" => {
                let rest = trimmed["order".len()..].trim();
                let value: u64 = rest.parse().map_err(|_| {
                    err(
                        line_no,
                        col_of(rest),
                        format!("invalid group order `{rest}`"),
                    )
                })?;
                if order.is_some() {
                    return Err(err(line_no, 1, "duplicate order line".into()));
                }
                order = Some(value);
            }
            "class" => {
                let name = words
                    .next()
                    .ok_or_else(|| err(line_no, 1, "class line missing name".into()))?;
                if classes.iter().any(|c| c.name == name) {
                    return Err(err(
                        line_no,
                        col_of(name),
                        format!("duplicate class name `{name}`"),
                    ));
                }
                let mut size: Option<u64> = None;
                let mut element_order: Option<u64> = None;
                let mut pows: Vec<(u64, String, usize, usize)> = Vec::new();
                for field in words {
                    let column = col_of(field);
                    let (key, value) = field.split_once('=').ok_or_else(|| {
                        err(
                            line_no,
                            column,
                            format!("expected key=value, got `{field}`"),
                        )
                    })?;
                    match key {
                        "size" => {
                            size = Some(value.parse().map_err(|_| {
                                err(line_no, column, format!("invalid size `{value}`"))
                            })?);
                        }
                        "order" => {
                            element_order = Some(value.parse().map_err(|_| {
                                err(line_no, column, format!("invalid order `{value}`"))
                            })?);
                        }
                        _ if key.starts_with("pow") => {
                            let p: u64 = key[3..].parse().map_err(|_| {
                                err(line_no, column, format!("invalid power key `{key}`"))
                            })?;
                            if !is_prime(p) {
                                return Err(err(
                                    line_no,
                                    column,
                                    format!("power-map exponent {p} is not prime"),
                                ));
                            }
                            pows.push((p, value.to_string(), line_no, column));
                        }
                        _ => {
                            return Err(err(
                                line_no,
                                column,
                                format!("unknown class field `{key}`"),
                            ));
                        }
                    }
                }
                let size =
                    size.ok_or_else(|| err(line_no, 1, format!("class {name} missing size=")))?;
                let element_order = element_order
                    .ok_or_else(|| err(line_no, 1, format!("class {name} missing order=")))?;
                classes.push(ConjClass {
                    name: name.to_string(),
                    size,
                    element_order,
                    power_map: BTreeMap::new(),
                });
                pending.push(pows);
            }
            "irrep" => {
                let name = words
                    .next()
                    .ok_or_else(|| err(line_no, 1, "irrep line missing name".into()))?;
                if irreps.iter().any(|r| r.name == name) {
                    return Err(err(
                        line_no,
                        col_of(name),
                        format!("duplicate irrep name `{name}`"),
                    ));
                }
                let degree_field = words
                    .next()
                    .ok_or_else(|| err(line_no, 1, format!("irrep {name} missing degree=")))?;
                let degree: u64 = degree_field
                    .strip_prefix("degree=")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| {
                        err(
                            line_no,
                            col_of(degree_field),
                            format!("expected degree=<int>, got `{degree_field}`"),
                        )
                    })?;
                let open = line
                    .find("values=[")
                    .ok_or_else(|| err(line_no, 1, format!("irrep {name} missing values=[…]")))?;
                let close = line
                    .rfind(']')
                    .ok_or_else(|| err(line_no, open + 1, "unterminated values list".into()))?;
                let body_start = open + "values=[".len();
                if close < body_start {
                    return Err(err(line_no, open + 1, "unterminated values list".into()));
                }
                let body = &line[body_start..close];
                let mut values = Vec::new();
                for (piece, offset) in split_top_level(body) {
                    let column = body_start + offset + 1;
                    let value = parse_cyclotomic(piece).map_err(|e| {
                        err(
                            line_no,
                            column,
                            format!("irrep {name}, value {}: {e}", values.len() + 1),
                        )
                    })?;
                    values.push(value);
                }
                irreps.push(Irrep {
                    name: name.to_string(),
                    degree,
                    values,
                });
                irrep_lines.push(line_no);
            }
            other => {
                return Err(err(
                    line_no,
                    col_of(other),
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    let group_name = group_name.ok_or_else(|| err(1, 1, "missing `group \"…\"` line".into()))?;
    let order = order.ok_or_else(|| err(1, 1, "missing `order` line".into()))?;
    if classes.is_empty() {
        return Err(err(1, 1, "no class lines".into()));
    }

    // Resolve power-map targets now that the full class list exists.
    let index: BTreeMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.as_str(), i))
        .collect();
    let resolved: Vec<BTreeMap<u64, usize>> = pending
        .iter()
        .map(|pows| {
            let mut map = BTreeMap::new();
            for (p, target, line, column) in pows {
                let target_idx = *index.get(target.as_str()).ok_or_else(|| {
                    err(
                        *line,
                        *column,
                        format!("power-map target `{target}` is not a declared class"),
                    )
                })?;
                map.insert(*p, target_idx);
            }
            Ok::<_, TableError>(map)
        })
        .collect::<Result<_, _>>()?;
    for (class, map) in classes.iter_mut().zip(resolved) {
        class.power_map = map;
    }

    for (irrep, line) in irreps.iter().zip(&irrep_lines) {
        if irrep.values.len() != classes.len() {
            return Err(err(
                *line,
                1,
                format!(
                    "irrep {} has {} values but the table has {} classes",
                    irrep.name,
                    irrep.values.len(),
                    classes.len()
                ),
            ));
        }
    }

    Ok(CharacterTable {
        group_name,
        order,
        classes,
        irreps,
    })
}

/// Removes a trailing `#` comment, respecting double quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// 1-based column of the first occurrence of `needle` in `haystack`.
fn column_of(haystack: &str, needle: &str) -> usize {
    haystack.find(needle).map_or(1, |i| i + 1)
}

/// Splits a bracket body on commas at parenthesis depth zero, returning each
/// piece together with its byte offset into the body.
fn split_top_level(body: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push((&body[start..i], start));
                start = i + 1;
            }
            _ => {}
        }
    }
    if !body[start..].trim().is_empty() || !out.is_empty() {
        out.push((&body[start..], start));
    }
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CharacterTable {
    /// Parses a table from text; alias for [`parse_table`].
    pub fn parse(text: &str) -> Result<Self, TableError> {
        parse_table(text)
    }

    /// Index of the identity class (size 1, element order 1), if present.
    pub fn identity_index(&self) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.size == 1 && c.element_order == 1)
    }

    /// Index of the class with the given name.
    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Index of the irrep with the given name.
    pub fn irrep_index(&self, name: &str) -> Option<usize> {
        self.irreps.iter().position(|r| r.name == name)
    }

    /// The irrep with the given name.
    pub fn irrep(&self, name: &str) -> Option<&Irrep> {
        self.irreps.iter().find(|r| r.name == name)
    }

    /// Exact Hermitian inner product of two class functions:
    /// Σ_C |C|·chi(C)·conj(psi(C)) / |Γ|.
    ///
    /// This is ⟨χ,ψ⟩; for irreducible characters it is δ_ij. Errors only on
    /// length mismatch or arithmetic overflow.
    pub fn inner_product(
        &self,
        chi: &[Cyclotomic],
        psi: &[Cyclotomic],
    ) -> Result<Cyclotomic, TableError> {
        for v in [chi, psi] {
            if v.len() != self.classes.len() {
                return Err(TableError::LengthMismatch {
                    expected: self.classes.len(),
                    got: v.len(),
                });
            }
        }
        let mut acc = Cyclotomic::zero();
        for (class, (a, b)) in self.classes.iter().zip(chi.iter().zip(psi)) {
            let size = Cyclotomic::from_integer(class.size as i64);
            let term = size.checked_mul(&a.checked_mul(&b.conjugate())?)?;
            acc = acc.checked_add(&term)?;
        }
        Ok(acc.checked_div(&Cyclotomic::from_integer(self.order as i64))?)
    }

    /// Checks every table invariant and returns the violations found.
    ///
    /// An empty report means the table is internally consistent. Violations
    /// are data, not errors: a defective table (wrong degree, perturbed
    /// value, bad power map) parses fine and is diagnosed here, each finding
    /// on its own line in a deterministic order.
    pub fn validate(&self) -> Vec<String> {
        let mut report = Vec::new();

        // -- identity class ---------------------------------------------------
        let identity = self.identity_index();
        if identity.is_none() {
            report.push("no identity class (size 1, element order 1)".to_string());
        }

        // -- class sizes ------------------------------------------------------
        let size_sum: u64 = self.classes.iter().map(|c| c.size).sum();
        if size_sum != self.order {
            report.push(format!(
                "class sizes sum to {size_sum}, expected group order {}",
                self.order
            ));
        }

        // -- degree sum -------------------------------------------------------
        let degree_sum: u64 = self.irreps.iter().map(|r| r.degree * r.degree).sum();
        if degree_sum != self.order {
            report.push(format!(
                "sum of squared degrees is {degree_sum}, expected group order {}",
                self.order
            ));
        }

        // -- identity column & value bounds ------------------------------------
        if let Some(e) = identity {
            for irrep in &self.irreps {
                let expected = Cyclotomic::from_integer(irrep.degree as i64);
                if irrep.values[e] != expected {
                    report.push(format!(
                        "irrep {}: value at identity is {}, expected degree {}",
                        irrep.name, irrep.values[e], irrep.degree
                    ));
                }
            }
        }
        for irrep in &self.irreps {
            for (class, value) in self.classes.iter().zip(&irrep.values) {
                // |χ(C)| ≤ degree is a triangle inequality on eigenvalue
                // sums; a float check with slack is enough to catch
                // transcription errors without exact absolute values.
                let abs = value.to_float().norm();
                if abs > irrep.degree as f64 + 1e-9 {
                    report.push(format!(
                        "irrep {}: |χ({})| = {abs:.6} exceeds degree {}",
                        irrep.name, class.name, irrep.degree
                    ));
                }
            }
        }

        // -- row orthogonality (exact) -----------------------------------------
        for i in 0..self.irreps.len() {
            for j in i..self.irreps.len() {
                let got = match self.inner_product(&self.irreps[i].values, &self.irreps[j].values) {
                    Ok(v) => v,
                    Err(e) => {
                        report.push(format!(
                            "row orthogonality ({}, {}): {e}",
                            self.irreps[i].name, self.irreps[j].name
                        ));
                        continue;
                    }
                };
                let expected = if i == j {
                    Cyclotomic::one()
                } else {
                    Cyclotomic::zero()
                };
                if got != expected {
                    report.push(format!(
                        "row orthogonality violated: ⟨{}, {}⟩ = {got}, expected {expected}",
                        self.irreps[i].name, self.irreps[j].name
                    ));
                }
            }
        }

        // -- column orthogonality (cross-check) ----------------------------------
        'columns: for i in 0..self.classes.len() {
            for j in i..self.classes.len() {
                let mut acc = Cyclotomic::zero();
                for irrep in &self.irreps {
                    let term = irrep.values[i].checked_mul(&irrep.values[j].conjugate());
                    match term.and_then(|t| acc.checked_add(&t)) {
                        Ok(v) => acc = v,
                        Err(e) => {
                            report.push(format!("column orthogonality: {e}"));
                            break 'columns;
                        }
                    }
                }
                let expected = if i == j {
                    Cyclotomic::from_ratio(self.order as i64, self.classes[i].size as i64)
                } else {
                    Cyclotomic::zero()
                };
                if acc != expected {
                    report.push(format!(
                        "column orthogonality violated at ({}, {}): got {acc}, expected {expected}",
                        self.classes[i].name, self.classes[j].name
                    ));
                }
            }
        }

        // -- power maps ---------------------------------------------------------
        let mut exponent_primes: Vec<u64> = Vec::new();
        for class in &self.classes {
            let mut n = class.element_order;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    if !exponent_primes.contains(&p) {
                        exponent_primes.push(p);
                    }
                    while n % p == 0 {
                        n /= p;
                    }
                }
                p += 1;
            }
            if n > 1 && !exponent_primes.contains(&n) {
                exponent_primes.push(n);
            }
        }
        exponent_primes.sort_unstable();

        for (ci, class) in self.classes.iter().enumerate() {
            for &p in &exponent_primes {
                match class.power_map.get(&p) {
                    None => report.push(format!(
                        "class {}: missing pow{p} entry (prime divides the group exponent)",
                        class.name
                    )),
                    Some(&t) => {
                        let target = &self.classes[t];
                        // g has order n, so g^p has order n / gcd(n, p).
                        let n = class.element_order;
                        let want = n / num::integer::gcd(n, p);
                        if target.element_order != want {
                            report.push(format!(
                                "class {} (order {n}): pow{p} target {} has order {}, expected {want}",
                                class.name, target.name, target.element_order
                            ));
                        }
                        if Some(ci) == self.identity_index() && t != ci {
                            report.push(format!(
                                "identity class pow{p} must map to itself, maps to {}",
                                target.name
                            ));
                        }
                    }
                }
            }
            // Power-map closure: dividing out one prime at a time from the
            // element order must walk the class to the identity.
            let mut at = ci;
            let mut remaining = class.element_order;
            while remaining > 1 {
                let p = exponent_primes
                    .iter()
                    .copied()
                    .find(|p| remaining % p == 0)
                    .unwrap_or(remaining);
                match self.classes[at].power_map.get(&p) {
                    Some(&t) => at = t,
                    None => break,
                }
                remaining /= p;
            }
            if remaining == 1 && Some(at) != identity {
                report.push(format!(
                    "class {}: power-map closure ends at {}, not the identity class",
                    class.name, self.classes[at].name
                ));
            }
        }

        report
    }

    /// Renders the table in canonical text form.
    ///
    /// Parsing the output reproduces the table exactly, and rendering is
    /// idempotent on parsed input, so this is the canonical form for
    /// byte-for-byte comparisons.
    pub fn to_text(&self) -> String {
        use fmt::Write;
        let mut out = String::new();
        writeln!(out, "group \"{}\"", self.group_name).unwrap();
        writeln!(out, "order {}", self.order).unwrap();
        for class in &self.classes {
            write!(
                out,
                "class {} size={} order={}",
                class.name, class.size, class.element_order
            )
            .unwrap();
            for (p, target) in &class.power_map {
                write!(out, " pow{p}={}", self.classes[*target].name).unwrap();
            }
            writeln!(out).unwrap();
        }
        for irrep in &self.irreps {
            let values: Vec<String> = irrep.values.iter().map(|v| v.to_string()).collect();
            writeln!(
                out,
                "irrep {} degree={} values=[{}]",
                irrep.name,
                irrep.degree,
                values.join(", ")
            )
            .unwrap();
        }
        out
    }
}

impl fmt::Display for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
