//! Tensor products, McKay graphs, exact eigenvalue reconstruction, and the
//! pipeline that recovers the embeddings of a finite group into the compact
//! exceptional Lie group G2 from its character table alone.
//!
//! # From characters to embeddings
//!
//! An embedding of a finite group Γ into G2 is determined up to conjugacy by
//! the restriction γ1 of the seven-dimensional fundamental representation.
//! Every element of G2 is conjugate into the maximal torus, where the
//! fundamental representation has eigenvalue multiset
//!
//! ```text
//! E(t1, t2) = { 1, t1, t1⁻¹, t2, t2⁻¹, t1·t2⁻¹, t1⁻¹·t2 }
//! ```
//!
//! at the torus point (t1, t2).  A seven-dimensional character of Γ is
//! therefore admissible only when the eigenvalue multiset of every conjugacy
//! class has this shape; matching classes against E(t1, t2) recovers a torus
//! point per class, well defined up to the Weyl group D12.
//!
//! The other fundamental representation of G2 — the fourteen-dimensional
//! adjoint — restricts to a character γ2 determined by the same torus
//! points: its value on a class matching (t1, t2) is Φ2(t1, t2), the adjoint
//! trace at that point.  Since Λ²(γ1) = γ1 + γ2 inside γ1⊗γ1, the candidate
//! survives only if the virtual character γ1² − 1 − γ1 contains a genuine
//! fourteen-dimensional sub-character taking exactly those values.  Both
//! admissibility tests together single out the true embeddings: a candidate
//! passes them if and only if the character is afforded by a homomorphism
//! into G2, and two candidates with equal γ1 characters are conjugate.
//!
//! # Eigenvalue reconstruction
//!
//! The eigenvalues of γ(g), for g of order n, are n-th roots of unity with
//! multiplicities summing to deg γ and with Σ eigenvalues = χ(g).  The
//! character value alone can leave the multiset ambiguous (rational linear
//! relations among roots of unity have nontrivial kernel for composite n);
//! what resolves it is compatibility with the power maps: the eigenvalues of
//! γ(g^p) are the p-th powers of the eigenvalues of γ(g).  The search below
//! visits classes in order of increasing element order, enumerates
//! multiplicity vectors exactly, and enforces every power-map constraint
//! whose two endpoints are both assigned, in both directions.  All surviving
//! assignments are returned; for the groups treated here the power maps pin
//! the assignment uniquely.
//!
//! # McKay graphs
//!
//! The McKay graph of a character ρ has one vertex per irreducible character
//! λ and an edge λ → μ of multiplicity ⟨ρ·χ_λ, χ_μ⟩.  Weighting vertices by
//! degrees gives a Perron–Frobenius eigenvector: Σ_μ a_{λμ}·deg μ =
//! deg ρ · deg λ.  The graph is connected precisely when ρ is faithful
//! enough to generate every irreducible constituent under tensor powers;
//! pullbacks along proper quotients leave it disconnected.

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;
use num::rational::Rational64;
use num::ToPrimitive;
use thiserror::Error;

use crate::chartable::{CharacterTable, TableError};
use crate::cyclotomic::{CycError, Cyclotomic};
use crate::torus::{self, TorusPoint};

/// Errors from tensor decomposition, eigenvalue reconstruction, or the
/// embedding pipeline.
#[derive(Debug, Error)]
pub enum RepError {
    /// Exact arithmetic failed (conductor overflow or division by zero).
    #[error(transparent)]
    Arithmetic(#[from] CycError),

    /// A table-level operation failed (for example a length mismatch).
    #[error(transparent)]
    Table(#[from] TableError),

    /// A tensor product decomposed with a multiplicity that is not a
    /// nonnegative integer, so the input is not a genuine character.
    #[error("multiplicity of {irrep} is {value}, not a nonnegative integer")]
    BadMultiplicity { irrep: String, value: String },

    /// No eigenvalue assignment satisfies the character values and the
    /// power maps simultaneously; the table data are inconsistent.
    #[error("no consistent eigenvalue assignment exists for {irrep}")]
    NoConsistentAssignment { irrep: String },

    /// An eigenvalue multiset handed to the torus matcher does not have
    /// exactly seven elements.
    #[error("eigenvalue multiset must have exactly 7 elements, got {0}")]
    MalformedMultiset(usize),

    /// The table has no trivial character (all values 1).
    #[error("the table has no trivial character")]
    MissingTrivial,

    /// The table has no identity class.
    #[error("the table has no identity class")]
    MissingIdentity,

    /// An irrep index or name does not exist in the table.
    #[error("no irreducible character {0} in the table")]
    UnknownIrrep(String),
}

/// Decomposes the pointwise product of two characters into irreducible
/// multiplicities, in table order.
///
/// Errors with [`RepError::BadMultiplicity`] when any inner product fails to
/// be a nonnegative integer, which signals that the inputs are not genuine
/// characters of the group.
pub fn decompose_product(
    table: &CharacterTable,
    a: &[Cyclotomic],
    b: &[Cyclotomic],
) -> Result<Vec<u64>, RepError> {
    let nc = table.classes.len();
    if a.len() != nc || b.len() != nc {
        return Err(TableError::LengthMismatch {
            expected: nc,
            got: a.len().min(b.len()),
        }
        .into());
    }
    let mut prod = Vec::with_capacity(nc);
    for (x, y) in a.iter().zip(b.iter()) {
        prod.push(x.checked_mul(y)?);
    }
    let mut out = Vec::with_capacity(table.irreps.len());
    for ir in &table.irreps {
        let ip = table.inner_product(&prod, &ir.values)?;
        let bad = || RepError::BadMultiplicity {
            irrep: ir.name.clone(),
            value: ip.to_string(),
        };
        let r = ip.as_rational().ok_or_else(bad)?;
        if !r.is_integer() {
            return Err(bad());
        }
        let m = r.to_integer().to_u64().ok_or_else(bad)?;
        out.push(m);
    }
    Ok(out)
}

/// Index of the trivial character (degree 1, all values 1).
pub fn trivial_index(table: &CharacterTable) -> Option<usize> {
    table
        .irreps
        .iter()
        .position(|r| r.degree == 1 && r.values.iter().all(|v| v.is_one()))
}

/// The character vector of a sum of irreducibles given by multiplicities in
/// table order.
pub fn character_of_multiset(
    table: &CharacterTable,
    mults: &[u64],
) -> Result<Vec<Cyclotomic>, RepError> {
    let nc = table.classes.len();
    let mut chi = vec![Cyclotomic::zero(); nc];
    for (i, &m) in mults.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let scale = Cyclotomic::from_integer(m as i64);
        for (slot, value) in chi.iter_mut().zip(table.irreps[i].values.iter()) {
            let term = value.checked_mul(&scale)?;
            *slot = slot.checked_add(&term)?;
        }
    }
    Ok(chi)
}

/// McKay graph of a character ρ: one vertex per irreducible character λ,
/// with a directed edge λ → μ of multiplicity ⟨ρ·χ_λ, χ_μ⟩.
#[derive(Debug, Clone)]
pub struct McKayGraph {
    /// Vertex labels: the irreducible character names in table order.
    pub vertices: Vec<String>,
    /// Vertex degrees, parallel to `vertices`.
    pub degrees: Vec<u64>,
    /// `adjacency[l][m]` is the multiplicity of irrep m in ρ ⊗ irrep l.
    pub adjacency: Vec<Vec<u64>>,
    /// The character ρ the graph was built from.
    pub generator: Vec<Cyclotomic>,
    /// deg ρ, the Perron–Frobenius eigenvalue of the adjacency matrix.
    pub generator_degree: u64,
    /// Index of the trivial character, the distinguished vertex.
    pub trivial: usize,
}

/// Builds the McKay graph of the character `generator` (values in class
/// order) on the given table.
pub fn mckay_graph(
    table: &CharacterTable,
    generator: &[Cyclotomic],
) -> Result<McKayGraph, RepError> {
    let trivial = trivial_index(table).ok_or(RepError::MissingTrivial)?;
    let id = table.identity_index().ok_or(RepError::MissingIdentity)?;
    let gen_at_one = &generator[id];
    let degree_err = || RepError::BadMultiplicity {
        irrep: "the generator at the identity".into(),
        value: gen_at_one.to_string(),
    };
    let generator_degree = gen_at_one
        .as_rational()
        .filter(|r| r.is_integer())
        .and_then(|r| r.to_integer().to_u64())
        .ok_or_else(degree_err)?;
    let mut adjacency = Vec::with_capacity(table.irreps.len());
    for ir in &table.irreps {
        adjacency.push(decompose_product(table, generator, &ir.values)?);
    }
    Ok(McKayGraph {
        vertices: table.irreps.iter().map(|r| r.name.clone()).collect(),
        degrees: table.irreps.iter().map(|r| r.degree).collect(),
        adjacency,
        generator: generator.to_vec(),
        generator_degree,
        trivial,
    })
}

impl McKayGraph {
    /// True when the degree vector is the Perron–Frobenius eigenvector:
    /// Σ_μ a_{λμ}·deg μ = deg ρ · deg λ for every vertex λ.
    pub fn degree_balanced(&self) -> bool {
        self.adjacency.iter().enumerate().all(|(l, row)| {
            let weighted: u64 = row.iter().zip(&self.degrees).map(|(a, d)| a * d).sum();
            weighted == self.generator_degree * self.degrees[l]
        })
    }

    /// True when every vertex is reachable from the trivial character along
    /// edges in either direction.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        seen[self.trivial] = true;
        queue.push_back(self.trivial);
        while let Some(v) = queue.pop_front() {
            for (w, visited) in seen.iter_mut().enumerate() {
                if !*visited && (self.adjacency[v][w] > 0 || self.adjacency[w][v] > 0) {
                    *visited = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Renders the graph in DOT format: one node per irreducible character
    /// labeled `name (degree)`, one directed edge per nonzero entry of the
    /// adjacency matrix, with an explicit label only for multiplicities
    /// above 1.  Node and edge order follow the table, so the output is
    /// byte-for-byte stable.
    pub fn to_dot(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\\\""));
        let mut out = String::from("digraph mckay {\n  rankdir=LR;\n");
        for (name, degree) in self.vertices.iter().zip(&self.degrees) {
            out.push_str(&format!(
                "  {} [label=\"{} ({})\"];\n",
                quote(name),
                name.replace('"', "\\\""),
                degree
            ));
        }
        for (l, row) in self.adjacency.iter().enumerate() {
            for (m, &mult) in row.iter().enumerate() {
                if mult == 0 {
                    continue;
                }
                if mult == 1 {
                    out.push_str(&format!(
                        "  {} -> {};\n",
                        quote(&self.vertices[l]),
                        quote(&self.vertices[m])
                    ));
                } else {
                    out.push_str(&format!(
                        "  {} -> {} [label=\"{}\"];\n",
                        quote(&self.vertices[l]),
                        quote(&self.vertices[m]),
                        mult
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A multiset of roots of unity, stored as sorted exponents in [0, 1):
/// the exponent r stands for e^{2πi·r}.
pub type RootMultiset = Vec<Rational64>;

fn frac(r: Rational64) -> Rational64 {
    r - r.floor()
}

fn power_multiset(ms: &[Rational64], p: u64) -> RootMultiset {
    let scale = Rational64::from_integer(p as i64);
    let mut out: Vec<Rational64> = ms.iter().map(|r| frac(*r * scale)).collect();
    out.sort();
    out
}

/// Enumerates every multiset of n-th roots of unity of the given size whose
/// exact sum equals `target`.
fn class_root_multisets(
    size: u64,
    n: u64,
    target: &Cyclotomic,
) -> Result<Vec<RootMultiset>, CycError> {
    struct Enumerator<'a> {
        roots: Vec<Cyclotomic>,
        roots_f: Vec<Complex64>,
        target: &'a Cyclotomic,
        target_f: Complex64,
        n: i64,
        counts: Vec<u64>,
        out: Vec<RootMultiset>,
    }
    impl Enumerator<'_> {
        fn run(
            &mut self,
            k: usize,
            remaining: u64,
            sum: &Cyclotomic,
            sum_f: Complex64,
        ) -> Result<(), CycError> {
            if (self.target_f - sum_f).norm() > remaining as f64 + 1e-6 {
                return Ok(());
            }
            if k + 1 == self.roots.len() {
                self.counts[k] = remaining;
                let mut total = sum.clone();
                for _ in 0..remaining {
                    total = total.checked_add(&self.roots[k])?;
                }
                if total == *self.target {
                    let mut ms = Vec::with_capacity(self.counts.iter().sum::<u64>() as usize);
                    for (i, &c) in self.counts.iter().enumerate() {
                        for _ in 0..c {
                            ms.push(Rational64::new(i as i64, self.n));
                        }
                    }
                    self.out.push(ms);
                }
                self.counts[k] = 0;
                return Ok(());
            }
            let mut s = sum.clone();
            let mut sf = sum_f;
            for c in 0..=remaining {
                if c > 0 {
                    s = s.checked_add(&self.roots[k])?;
                    sf += self.roots_f[k];
                }
                self.counts[k] = c;
                self.run(k + 1, remaining - c, &s, sf)?;
            }
            self.counts[k] = 0;
            Ok(())
        }
    }
    let roots: Vec<Cyclotomic> = (0..n)
        .map(|k| Cyclotomic::root_at(Rational64::new(k as i64, n as i64)))
        .collect();
    let roots_f: Vec<Complex64> = roots.iter().map(|r| r.to_float()).collect();
    let mut e = Enumerator {
        roots,
        roots_f,
        target,
        target_f: target.to_float(),
        n: n as i64,
        counts: vec![0; n as usize],
        out: Vec::new(),
    };
    e.run(0, size, &Cyclotomic::zero(), Complex64::new(0.0, 0.0))?;
    Ok(e.out)
}

/// Reconstructs the eigenvalue multisets of one irreducible character on
/// every conjugacy class, exactly.
///
/// Returns all assignments consistent with the character values and with
/// every power map, as branches: `result[b][c]` is the sorted exponent
/// multiset of branch b at class c (class indices in table order).  Errors
/// with [`RepError::NoConsistentAssignment`] when no assignment exists,
/// which signals inconsistent table data.
pub fn reconstruct_eigenvalues(
    table: &CharacterTable,
    irrep_index: usize,
) -> Result<Vec<Vec<RootMultiset>>, RepError> {
    let irrep = table
        .irreps
        .get(irrep_index)
        .ok_or_else(|| RepError::UnknownIrrep(format!("#{irrep_index}")))?;
    let nc = table.classes.len();
    let mut visit: Vec<usize> = (0..nc).collect();
    visit.sort_by_key(|&i| (table.classes[i].element_order, i));

    let mut per_class = Vec::with_capacity(nc);
    for ci in 0..nc {
        let n = table.classes[ci].element_order;
        per_class.push(class_root_multisets(irrep.degree, n, &irrep.values[ci])?);
    }

    fn dfs(
        table: &CharacterTable,
        visit: &[usize],
        per_class: &[Vec<RootMultiset>],
        pos: usize,
        assigned: &mut Vec<Option<RootMultiset>>,
        branches: &mut Vec<Vec<RootMultiset>>,
    ) {
        if pos == visit.len() {
            branches.push(
                assigned
                    .iter()
                    .map(|m| m.clone().expect("every class assigned"))
                    .collect(),
            );
            return;
        }
        let ci = visit[pos];
        'candidates: for m in &per_class[ci] {
            for (&p, &t) in &table.classes[ci].power_map {
                let pm = power_multiset(m, p);
                if t == ci {
                    if pm != *m {
                        continue 'candidates;
                    }
                } else if let Some(mt) = &assigned[t] {
                    if pm != *mt {
                        continue 'candidates;
                    }
                }
            }
            for (dj, slot) in assigned.iter().enumerate() {
                if let Some(md) = slot {
                    for (&p, &t) in &table.classes[dj].power_map {
                        if t == ci && power_multiset(md, p) != *m {
                            continue 'candidates;
                        }
                    }
                }
            }
            assigned[ci] = Some(m.clone());
            dfs(table, visit, per_class, pos + 1, assigned, branches);
            assigned[ci] = None;
        }
    }

    let mut assigned: Vec<Option<RootMultiset>> = vec![None; nc];
    let mut branches = Vec::new();
    dfs(table, &visit, &per_class, 0, &mut assigned, &mut branches);
    if branches.is_empty() {
        return Err(RepError::NoConsistentAssignment {
            irrep: irrep.name.clone(),
        });
    }
    Ok(branches)
}

/// The exponent multiset of E(t1, t2) at the torus point with angles (a, b).
fn exponent_set(a: Rational64, b: Rational64) -> RootMultiset {
    let mut v = vec![
        Rational64::from_integer(0),
        frac(a),
        frac(-a),
        frac(b),
        frac(-b),
        frac(a - b),
        frac(b - a),
    ];
    v.sort();
    v
}

/// Matches a seven-element eigenvalue multiset against the torus eigenvalue
/// pattern E(t1, t2).
///
/// Returns the lexicographically least D12-orbit representative of a
/// matching torus point, or `None` when no point matches.  All matching
/// points lie on a single Weyl orbit, so the representative is canonical.
/// Errors when the multiset does not have exactly seven elements.
pub fn match_g2_eigenvalue_set(x: &[Rational64]) -> Result<Option<TorusPoint>, RepError> {
    if x.len() != 7 {
        return Err(RepError::MalformedMultiset(x.len()));
    }
    let mut xs: RootMultiset = x.iter().map(|r| frac(*r)).collect();
    xs.sort();
    let mut best: Option<TorusPoint> = None;
    for &a in &xs {
        for &b in &xs {
            if exponent_set(a, b) == xs {
                let rep = torus::orbit_representative(&TorusPoint::new(a, b));
                best = Some(match best {
                    None => rep,
                    Some(cur) => cur.min(rep),
                });
            }
        }
    }
    Ok(best)
}

/// An embedding of the group into G2, described by the restrictions of the
/// two fundamental representations and the torus point recovered at every
/// conjugacy class.
#[derive(Debug, Clone)]
pub struct Embedding {
    /// Name of the seven-dimensional restriction, constituents joined by `+`.
    pub rho1_name: String,
    /// Irreducible constituent names of the seven-dimensional restriction.
    pub rho1_constituents: Vec<String>,
    /// Character values of the seven-dimensional restriction, in class order.
    pub rho1_values: Vec<Cyclotomic>,
    /// Name of the fourteen-dimensional restriction.
    pub rho2_name: String,
    /// Irreducible constituent names of the fourteen-dimensional restriction,
    /// repeated according to multiplicity.
    pub rho2_constituents: Vec<String>,
    /// Character values of the fourteen-dimensional restriction.
    pub rho2_values: Vec<Cyclotomic>,
    /// Canonical torus point (lex-least D12 representative) per class.
    pub class_points: Vec<TorusPoint>,
}

impl Embedding {
    /// The pair (x, y) = (χ_ρ1(C), χ_ρ2(C)) at the class with the given
    /// index; always a point of the joint spectral domain.
    pub fn xy(&self, class: usize) -> (Cyclotomic, Cyclotomic) {
        (
            self.rho1_values[class].clone(),
            self.rho2_values[class].clone(),
        )
    }
}

/// Why a seven-dimensional candidate character fails to embed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// Some character value lies outside [−2, 7], the trace range of the
    /// seven-dimensional representation of G2.
    ValueOutOfRange { class: String, value: String },
    /// The candidate is not a constituent of its own Kronecker square.
    NotInKroneckerSquare,
    /// The eigenvalue multiset at the named class matches no E(t1, t2).
    NoEigenvalueMatch { class: String },
    /// No fourteen-dimensional sub-character of γ1² − 1 − γ1 takes the value
    /// Φ2(t1, t2) at every class.
    NoFourteenDimMatch,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::ValueOutOfRange { class, value } => {
                write!(
                    f,
                    "character value {value} at class {class} lies outside [-2, 7]"
                )
            }
            Rejection::NotInKroneckerSquare => {
                write!(f, "not a constituent of its own Kronecker square")
            }
            Rejection::NoEigenvalueMatch { class } => {
                write!(
                    f,
                    "eigenvalues at class {class} match no torus pattern E(t1, t2)"
                )
            }
            Rejection::NoFourteenDimMatch => {
                write!(
                    f,
                    "no 14-dimensional sub-character matches the adjoint trace at every class"
                )
            }
        }
    }
}

/// Outcome of assessing one candidate character.
///
/// The two character-level filters — the trace range and the Kronecker
/// square — are independent, and a candidate can fail both; every failing
/// filter is reported.  The eigenvalue and adjoint-partner tests only run
/// once the character-level filters pass, so they appear alone.
#[derive(Debug, Clone)]
pub enum CandidateOutcome {
    /// The candidate embeds; the full embedding data follow.
    Accepted(Box<Embedding>),
    /// The candidate fails, with every decisive reason in pipeline order.
    Rejected(Vec<Rejection>),
}

/// One candidate seven-dimensional character and its assessment.
#[derive(Debug, Clone)]
pub struct CandidateReport {
    /// Candidate name, irreducible constituents joined by `+`.
    pub rho1_name: String,
    /// Indices of the irreducible constituents, in table order.
    pub constituents: Vec<usize>,
    /// Assessment result.
    pub outcome: CandidateOutcome,
}

/// Enumerates every multiplicity-free real seven-dimensional character of
/// the table (complex constituents entering only as conjugate pairs) and
/// assesses each against the torus eigenvalue patterns of G2.
///
/// Reports appear in lexicographic order of their constituent index
/// vectors, which puts composite candidates involving early irreps first.
pub fn candidate_survey(table: &CharacterTable) -> Result<Vec<CandidateReport>, RepError> {
    let trivial = trivial_index(table).ok_or(RepError::MissingTrivial)?;
    let nr = table.irreps.len();

    // Building blocks: real irreps of degree ≤ 7, and conjugate pairs of
    // complex irreps of joint degree ≤ 7.  A real seven-dimensional
    // character contains complex constituents only in conjugate pairs.
    let mut items: Vec<Vec<usize>> = Vec::new();
    let mut paired = vec![false; nr];
    for i in 0..nr {
        let ir = &table.irreps[i];
        if ir.values.iter().all(|v| v.is_real()) {
            if ir.degree <= 7 {
                items.push(vec![i]);
            }
        } else if !paired[i] {
            for j in i + 1..nr {
                let is_pair = !paired[j]
                    && table.irreps[j].degree == ir.degree
                    && table.irreps[j]
                        .values
                        .iter()
                        .zip(&ir.values)
                        .all(|(vj, vi)| *vj == vi.conjugate());
                if is_pair {
                    paired[i] = true;
                    paired[j] = true;
                    if 2 * ir.degree <= 7 {
                        items.push(vec![i, j]);
                    }
                    break;
                }
            }
        }
    }

    // Multiplicity-free selections with total degree exactly 7.
    fn select(
        table: &CharacterTable,
        items: &[Vec<usize>],
        idx: usize,
        remaining: u64,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining == 0 {
            let mut c = chosen.clone();
            c.sort();
            out.push(c);
            return;
        }
        if idx == items.len() {
            return;
        }
        let d: u64 = items[idx].iter().map(|&i| table.irreps[i].degree).sum();
        if d <= remaining {
            chosen.extend(&items[idx]);
            select(table, items, idx + 1, remaining - d, chosen, out);
            for _ in &items[idx] {
                chosen.pop();
            }
        }
        select(table, items, idx + 1, remaining, chosen, out);
    }
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    select(table, &items, 0, 7, &mut Vec::new(), &mut candidates);
    candidates.sort();

    let mut eigen_cache: BTreeMap<usize, Vec<Vec<RootMultiset>>> = BTreeMap::new();
    let mut reports = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let name = cand
            .iter()
            .map(|&i| table.irreps[i].name.as_str())
            .collect::<Vec<_>>()
            .join("+");
        let outcome = assess_candidate(table, trivial, &cand, &mut eigen_cache)?;
        reports.push(CandidateReport {
            rho1_name: name,
            constituents: cand,
            outcome,
        });
    }
    Ok(reports)
}

/// Runs the admissibility pipeline on one candidate.
fn assess_candidate(
    table: &CharacterTable,
    trivial: usize,
    constituents: &[usize],
    eigen_cache: &mut BTreeMap<usize, Vec<Vec<RootMultiset>>>,
) -> Result<CandidateOutcome, RepError> {
    let nc = table.classes.len();
    let rejected = |r: Rejection| Ok(CandidateOutcome::Rejected(vec![r]));

    let mut chi = vec![Cyclotomic::zero(); nc];
    for &i in constituents {
        for (slot, value) in chi.iter_mut().zip(table.irreps[i].values.iter()) {
            *slot = slot.checked_add(value)?;
        }
    }

    // Character-level filters; both run so a candidate failing both is
    // reported with both reasons.
    let mut reasons = Vec::new();

    // Trace range of the seven-dimensional representation: [−2, 7].
    let two = Cyclotomic::from_integer(2);
    let seven = Cyclotomic::from_integer(7);
    for (c, value) in chi.iter().enumerate() {
        let above = value.checked_add(&two)?;
        let below = seven.checked_sub(value)?;
        let nonneg = |s: Option<i8>| matches!(s, Some(0) | Some(1));
        if !nonneg(above.real_sign()) || !nonneg(below.real_sign()) {
            reasons.push(Rejection::ValueOutOfRange {
                class: table.classes[c].name.clone(),
                value: value.to_string(),
            });
            break;
        }
    }

    // γ1 must appear in its own Kronecker square: γ1² = 1 + γ1 + γ2 + rest.
    let square = decompose_product(table, &chi, &chi)?;
    if constituents.iter().any(|&i| square[i] == 0) {
        reasons.push(Rejection::NotInKroneckerSquare);
    }

    if !reasons.is_empty() {
        return Ok(CandidateOutcome::Rejected(reasons));
    }

    // Eigenvalue branches per constituent, combined across constituents.
    let mut combined: Vec<Vec<RootMultiset>> = vec![vec![Vec::new(); nc]];
    for &i in constituents {
        if let std::collections::btree_map::Entry::Vacant(e) = eigen_cache.entry(i) {
            let branches = reconstruct_eigenvalues(table, i)?;
            e.insert(branches);
        }
        let branches = &eigen_cache[&i];
        let mut next = Vec::with_capacity(combined.len() * branches.len());
        for base in &combined {
            for branch in branches {
                let mut merged = Vec::with_capacity(nc);
                for c in 0..nc {
                    let mut ms = base[c].clone();
                    ms.extend(branch[c].iter().copied());
                    ms.sort();
                    merged.push(ms);
                }
                next.push(merged);
            }
        }
        combined = next;
    }

    // Match every class against E(t1, t2); a candidate survives when some
    // branch matches everywhere and admits the fourteen-dimensional partner.
    let mut deepest_failure: Option<usize> = None;
    let mut matched_but_no_partner = false;
    for branch in &combined {
        let mut points = Vec::with_capacity(nc);
        let mut failed_at: Option<usize> = None;
        for (c, multiset) in branch.iter().enumerate() {
            match match_g2_eigenvalue_set(multiset)? {
                Some(p) => points.push(p),
                None => {
                    failed_at = Some(c);
                    break;
                }
            }
        }
        if let Some(c) = failed_at {
            deepest_failure = Some(deepest_failure.map_or(c, |d| d.max(c)));
            continue;
        }

        // γ2 = the fourteen-dimensional sub-character of γ1² − 1 − γ1 whose
        // values equal the adjoint trace Φ2 at the recovered torus points.
        let mut pool = square.clone();
        pool[trivial] -= 1;
        for &i in constituents {
            pool[i] -= 1;
        }
        let phi2: Vec<Cyclotomic> = points.iter().map(torus::phi2).collect();
        if let Some(mults) = find_fourteen_dim(table, &pool, &phi2)? {
            let mut rho2_constituents = Vec::new();
            for (i, &m) in mults.iter().enumerate() {
                for _ in 0..m {
                    rho2_constituents.push(table.irreps[i].name.clone());
                }
            }
            let embedding = Embedding {
                rho1_name: constituents
                    .iter()
                    .map(|&i| table.irreps[i].name.as_str())
                    .collect::<Vec<_>>()
                    .join("+"),
                rho1_constituents: constituents
                    .iter()
                    .map(|&i| table.irreps[i].name.clone())
                    .collect(),
                rho1_values: chi,
                rho2_name: rho2_constituents.join("+"),
                rho2_constituents,
                rho2_values: character_of_multiset(table, &mults)?,
                class_points: points,
            };
            return Ok(CandidateOutcome::Accepted(Box::new(embedding)));
        }
        matched_but_no_partner = true;
    }

    if matched_but_no_partner {
        return rejected(Rejection::NoFourteenDimMatch);
    }
    let c = deepest_failure.expect("some class failed when no branch matched");
    rejected(Rejection::NoEigenvalueMatch {
        class: table.classes[c].name.clone(),
    })
}

/// Finds multiplicities (bounded by `pool`) of a fourteen-dimensional
/// character whose values equal `target` on every class.
fn find_fourteen_dim(
    table: &CharacterTable,
    pool: &[u64],
    target: &[Cyclotomic],
) -> Result<Option<Vec<u64>>, RepError> {
    fn search(
        table: &CharacterTable,
        pool: &[u64],
        target: &[Cyclotomic],
        idx: usize,
        remaining: u64,
        counts: &mut Vec<u64>,
    ) -> Result<Option<Vec<u64>>, RepError> {
        if remaining == 0 {
            let chi = character_of_multiset(table, counts)?;
            if chi == target {
                return Ok(Some(counts.clone()));
            }
            return Ok(None);
        }
        if idx == pool.len() {
            return Ok(None);
        }
        let d = table.irreps[idx].degree;
        let max = pool[idx].min(remaining / d);
        for m in (0..=max).rev() {
            counts[idx] = m;
            if let Some(found) = search(table, pool, target, idx + 1, remaining - m * d, counts)? {
                counts[idx] = 0;
                return Ok(Some(found));
            }
        }
        counts[idx] = 0;
        Ok(None)
    }
    let mut counts = vec![0u64; table.irreps.len()];
    search(table, pool, target, 0, 14, &mut counts)
}

/// Finds every embedding of the group into G2: assesses all candidate
/// characters and returns the accepted ones, sorted by constituent count
/// and then by name.
///
/// Distinct surviving characters correspond to non-conjugate embeddings;
/// an empty result means the group does not embed.
pub fn find_embeddings(table: &CharacterTable) -> Result<Vec<Embedding>, RepError> {
    let mut out: Vec<Embedding> = candidate_survey(table)?
        .into_iter()
        .filter_map(|r| match r.outcome {
            CandidateOutcome::Accepted(e) => Some(*e),
            CandidateOutcome::Rejected(_) => None,
        })
        .collect();
    out.sort_by(|a, b| {
        (a.rho1_constituents.len(), &a.rho1_name).cmp(&(b.rho1_constituents.len(), &b.rho1_name))
    });
    Ok(out)
}
