//! Finite double-coset models.
//!
//! A model has three finite sets `X_K`, `X_K'` and `X_J` with projections
//! `pi: X_J -> X_K`, `pip: X_J -> X_K'`, a positive integer weight on every
//! point, and integer operator matrices registered per level. Functions are
//! column vectors; an operator `M` acts by `f -> M f`. The pairing on each
//! level is `<f, g> = sum f(x) g(x) / w(x)`.

pub mod document;
pub mod random;
pub mod toy;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{quotient_invariants, IntMatrix, Lattice, Mat, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    K,
    Kp,
    J,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::K => "K",
            Level::Kp => "Kp",
            Level::J => "J",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        match s {
            "K" => Some(Level::K),
            "Kp" | "K'" => Some(Level::Kp),
            "J" => Some(Level::J),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the two maximal levels over `J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    K,
    Kp,
}

impl Side {
    pub fn level(self) -> Level {
        match self {
            Side::K => Level::K,
            Side::Kp => Level::Kp,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::K => Side::Kp,
            Side::Kp => Side::K,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub level: Level,
    pub matrix: IntMatrix,
    /// Name of the operator adjoint to this one under the pairing.
    pub adjoint: String,
    pub central_at_j: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    /// `J` plays the role of an Iwahori subgroup with Weyl group of order 2.
    #[serde(default)]
    pub rank_one: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_q: Option<u64>,
    /// Require every weight to be 1.
    #[serde(default)]
    pub torsion_free: bool,
}

/// An integer-valued eigensystem at level `K` shipped with a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCharacter {
    pub values: BTreeMap<String, BigInt>,
    pub witness: Vec<BigInt>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("the set X_{0} is empty")]
    EmptySet(Level),
    #[error("label {label:?} appears twice in X_{level}")]
    DuplicateLabel { level: Level, label: String },
    #[error("{context}: unknown label {label:?}")]
    UnknownLabel { context: String, label: String },
    #[error("{map} has no image for {label:?}")]
    MissingImage { map: &'static str, label: String },
    #[error("weight of {label:?} in X_{level} is missing")]
    MissingWeight { level: Level, label: String },
    #[error("weight of {label:?} in X_{level} is {value}, not positive")]
    NonPositiveWeight { level: Level, label: String, value: BigInt },
    #[error("operator {name}: expected {expected}x{expected}, got {rows}x{cols}")]
    OperatorShape { name: String, expected: usize, rows: usize, cols: usize },
    #[error("operator {name}: adjoint {adjoint:?} is not registered")]
    UnknownAdjoint { name: String, adjoint: String },
    #[error("operator {name} and its adjoint {adjoint} live at different levels")]
    AdjointLevel { name: String, adjoint: String },
    #[error("unknown level {0:?}")]
    UnknownLevel(String),
    #[error("character {name}: {reason}")]
    BadCharacter { name: String, reason: String },
    #[error("schema version {0} is not supported")]
    UnsupportedSchema(u32),
    #[error("invalid integer {0:?}")]
    BadInteger(String),
    #[error("malformed document: {0}")]
    Json(String),
}

/// Everything needed to build a model, with maps given by index.
#[derive(Clone, Debug, Default)]
pub struct ModelParts {
    pub x_k: Vec<String>,
    pub x_kp: Vec<String>,
    pub x_j: Vec<String>,
    pub pi: Vec<usize>,
    pub pip: Vec<usize>,
    pub w_k: Vec<BigInt>,
    pub w_kp: Vec<BigInt>,
    pub w_j: Vec<BigInt>,
    pub operators: BTreeMap<String, Operator>,
    pub metadata: Metadata,
    pub characters: BTreeMap<String, NamedCharacter>,
}

/// A structurally well-formed model. Whether it satisfies the mass formula,
/// adjointness and centrality is decided by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetModel {
    x_k: Vec<String>,
    x_kp: Vec<String>,
    x_j: Vec<String>,
    pi: Vec<usize>,
    pip: Vec<usize>,
    w_k: Vec<BigInt>,
    w_kp: Vec<BigInt>,
    w_j: Vec<BigInt>,
    operators: BTreeMap<String, Operator>,
    metadata: Metadata,
    characters: BTreeMap<String, NamedCharacter>,
}

fn check_labels(level: Level, labels: &[String]) -> Result<(), ModelError> {
    if labels.is_empty() {
        return Err(ModelError::EmptySet(level));
    }
    let mut seen = std::collections::BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(ModelError::DuplicateLabel { level, label: l.clone() });
        }
    }
    Ok(())
}

fn check_weights(level: Level, labels: &[String], w: &[BigInt]) -> Result<(), ModelError> {
    for (i, l) in labels.iter().enumerate() {
        let Some(v) = w.get(i) else {
            return Err(ModelError::MissingWeight { level, label: l.clone() });
        };
        if !v.is_positive() {
            return Err(ModelError::NonPositiveWeight { level, label: l.clone(), value: v.clone() });
        }
    }
    Ok(())
}

impl DoubleCosetModel {
    pub fn new(p: ModelParts) -> Result<Self, ModelError> {
        check_labels(Level::K, &p.x_k)?;
        check_labels(Level::Kp, &p.x_kp)?;
        check_labels(Level::J, &p.x_j)?;
        check_weights(Level::K, &p.x_k, &p.w_k)?;
        check_weights(Level::Kp, &p.x_kp, &p.w_kp)?;
        check_weights(Level::J, &p.x_j, &p.w_j)?;
        for (map, img, target) in [("pi", &p.pi, &p.x_k), ("pip", &p.pip, &p.x_kp)] {
            if img.len() != p.x_j.len() {
                let label = p.x_j[img.len().min(p.x_j.len() - 1)].clone();
                return Err(ModelError::MissingImage { map, label });
            }
            if let Some(bad) = img.iter().find(|&&i| i >= target.len()) {
                return Err(ModelError::UnknownLabel { context: map.to_string(), label: format!("#{bad}") });
            }
        }
        let size = |l: Level| match l {
            Level::K => p.x_k.len(),
            Level::Kp => p.x_kp.len(),
            Level::J => p.x_j.len(),
        };
        for (name, op) in &p.operators {
            let n = size(op.level);
            if op.matrix.nrows() != n || op.matrix.ncols() != n {
                return Err(ModelError::OperatorShape {
                    name: name.clone(),
                    expected: n,
                    rows: op.matrix.nrows(),
                    cols: op.matrix.ncols(),
                });
            }
            let Some(adj) = p.operators.get(&op.adjoint) else {
                return Err(ModelError::UnknownAdjoint { name: name.clone(), adjoint: op.adjoint.clone() });
            };
            if adj.level != op.level {
                return Err(ModelError::AdjointLevel { name: name.clone(), adjoint: op.adjoint.clone() });
            }
        }
        for (name, c) in &p.characters {
            let bad = |reason: String| ModelError::BadCharacter { name: name.clone(), reason };
            if c.witness.len() != p.x_k.len() {
                return Err(bad(format!("witness has length {}, X_K has {}", c.witness.len(), p.x_k.len())));
            }
            for op in c.values.keys() {
                match p.operators.get(op) {
                    Some(o) if o.level == Level::K => {}
                    _ => return Err(bad(format!("{op} is not a K-level operator"))),
                }
            }
        }
        Ok(DoubleCosetModel {
            x_k: p.x_k,
            x_kp: p.x_kp,
            x_j: p.x_j,
            pi: p.pi,
            pip: p.pip,
            w_k: p.w_k,
            w_kp: p.w_kp,
            w_j: p.w_j,
            operators: p.operators,
            metadata: p.metadata,
            characters: p.characters,
        })
    }

    pub fn into_parts(self) -> ModelParts {
        ModelParts {
            x_k: self.x_k,
            x_kp: self.x_kp,
            x_j: self.x_j,
            pi: self.pi,
            pip: self.pip,
            w_k: self.w_k,
            w_kp: self.w_kp,
            w_j: self.w_j,
            operators: self.operators,
            metadata: self.metadata,
            characters: self.characters,
        }
    }

    pub fn labels(&self, level: Level) -> &[String] {
        match level {
            Level::K => &self.x_k,
            Level::Kp => &self.x_kp,
            Level::J => &self.x_j,
        }
    }

    pub fn size(&self, level: Level) -> usize {
        self.labels(level).len()
    }

    pub fn weights(&self, level: Level) -> &[BigInt] {
        match level {
            Level::K => &self.w_k,
            Level::Kp => &self.w_kp,
            Level::J => &self.w_j,
        }
    }

    /// The projection `X_J -> X_K` or `X_J -> X_K'`, by index.
    pub fn projection(&self, side: Side) -> &[usize] {
        match side {
            Side::K => &self.pi,
            Side::Kp => &self.pip,
        }
    }

    pub fn operators(&self) -> &BTreeMap<String, Operator> {
        &self.operators
    }

    pub fn operator(&self, name: &str) -> Option<&Operator> {
        self.operators.get(name)
    }

    /// Registered operators at one level, sorted by name.
    pub fn operators_at(&self, level: Level) -> Vec<(String, IntMatrix)> {
        self.operators
            .iter()
            .filter(|(_, o)| o.level == level)
            .map(|(n, o)| (n.clone(), o.matrix.clone()))
            .collect()
    }

    /// Operators flagged central at `J`, sorted by name.
    pub fn central_operators(&self) -> Vec<(String, IntMatrix)> {
        self.operators
            .iter()
            .filter(|(_, o)| o.central_at_j)
            .map(|(n, o)| (n.clone(), o.matrix.clone()))
            .collect()
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn characters(&self) -> &BTreeMap<String, NamedCharacter> {
        &self.characters
    }

    /// Fiber sums `w(x) * sum_{pi(y) = x} 1 / w_J(y)`, one per point of the side.
    pub fn fiber_masses(&self, side: Side) -> Vec<BigRational> {
        let w_side = self.weights(side.level());
        let mut sums = vec![BigRational::zero(); w_side.len()];
        for (y, &x) in self.projection(side).iter().enumerate() {
            sums[x] += BigRational::new(BigInt::one(), self.w_j[y].clone());
        }
        sums.into_iter().zip(w_side).map(|(s, w)| s * BigRational::from_integer(w.clone())).collect()
    }

    /// Pullback `iota`: an `n_J x n_side` 0/1 matrix.
    pub fn pullback(&self, side: Side) -> IntMatrix {
        let proj = self.projection(side);
        let n = self.size(side.level());
        Mat::from_fn(proj.len(), n, |y, x| if proj[y] == x { BigInt::one() } else { BigInt::zero() })
    }

    /// Adjoint of the pullback: `(iota^v g)(x) = w(x) sum_{pi(y) = x} g(y) / w_J(y)`.
    pub fn pushforward(&self, side: Side) -> RatMatrix {
        let proj = self.projection(side);
        let w_side = self.weights(side.level());
        Mat::from_fn(w_side.len(), proj.len(), |x, y| {
            if proj[y] == x {
                BigRational::new(w_side[x].clone(), self.w_j[y].clone())
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn gram_matrix(&self, level: Level) -> WeightedPairing {
        let entries: Vec<BigRational> =
            self.weights(level).iter().map(|w| BigRational::new(BigInt::one(), w.clone())).collect();
        WeightedPairing { level, gram: RatMatrix::diag(&entries) }
    }

    /// Adjoint of `m` under the pairing at `level`: `M^v[y][x] = w(y) M[x][y] / w(x)`.
    pub fn adjoint_matrix(&self, level: Level, m: &IntMatrix) -> RatMatrix {
        let w = self.weights(level);
        Mat::from_fn(m.ncols(), m.nrows(), |y, x| {
            BigRational::new(&w[y] * m.get(x, y), w[x].clone())
        })
    }

    /// Union-find classes of `X_J` under "same image in `X_K` or in `X_K'`",
    /// with breadth-first radii from the smallest member of each class.
    pub fn class_partition(&self) -> ClassPartition {
        let n = self.x_j.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mut fibers: Vec<Vec<Vec<usize>>> = Vec::new();
        for side in [Side::K, Side::Kp] {
            let mut f = vec![Vec::new(); self.size(side.level())];
            for (y, &x) in self.projection(side).iter().enumerate() {
                f[x].push(y);
            }
            for fiber in &f {
                for w in fiber.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
            fibers.push(f);
        }
        let mut class_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
        for y in 0..n {
            let r = find(&mut parent, y);
            let next = representatives.len();
            let c = *by_root.entry(r).or_insert(next);
            if c == next {
                representatives.push(y);
            }
            class_of[y] = c;
        }
        let mut radius = vec![usize::MAX; n];
        for &rep in &representatives {
            radius[rep] = 0;
            let mut queue = VecDeque::from([rep]);
            while let Some(y) = queue.pop_front() {
                for (s, side) in [Side::K, Side::Kp].into_iter().enumerate() {
                    let x = self.projection(side)[y];
                    for &z in &fibers[s][x] {
                        if radius[z] == usize::MAX {
                            radius[z] = radius[y] + 1;
                            queue.push_back(z);
                        }
                    }
                }
            }
        }
        ClassPartition { class_of, representatives, radius }
    }
}

/// The diagonal pairing matrix `diag(1 / w)` at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPairing {
    pub level: Level,
    pub gram: RatMatrix,
}

impl WeightedPairing {
    pub fn pair(&self, f: &[BigRational], g: &[BigRational]) -> BigRational {
        f.iter().zip(g).enumerate().map(|(i, (a, b))| a * b * self.gram.get(i, i)).sum()
    }
}

/// Minimal `A` with `A <L, L> in Z` and minimal `B` with `B L^dual in L`,
/// where `L` is the standard integral lattice of functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilatorData {
    #[serde(with = "crate::serde_int")]
    pub a_min: BigInt,
    #[serde(with = "crate::serde_int")]
    pub b_min: BigInt,
}

/// Classes of `X_J` together with a radius function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    /// Class index of each point; classes are numbered by first appearance.
    pub class_of: Vec<usize>,
    /// Smallest member of each class.
    pub representatives: Vec<usize>,
    /// Length of a shortest fiber chain to the representative.
    pub radius: Vec<usize>,
}

impl ClassPartition {
    pub fn num_classes(&self) -> usize {
        self.representatives.len()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (y, &c) in self.class_of.iter().enumerate() {
            out[c].push(y);
        }
        out
    }

    /// Induced class index on `X_K` or `X_K'`.
    pub fn on_side(&self, model: &DoubleCosetModel, side: Side) -> Vec<usize> {
        let mut out = vec![usize::MAX; model.size(side.level())];
        for (y, &x) in model.projection(side).iter().enumerate() {
            out[x] = self.class_of[y];
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Invariant {
    Surjectivity,
    MassFormula,
    Adjointness,
    Centrality,
    TorsionFree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationFailure {
    pub invariant: Invariant,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
    #[serde(with = "crate::serde_int::option")]
    pub index_k: Option<BigInt>,
    #[serde(with = "crate::serde_int::option")]
    pub index_kp: Option<BigInt>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, inv: Invariant) -> bool {
        self.failures.iter().any(|f| f.invariant == inv)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepted() {
            return write!(
                f,
                "accepted, [K:J] = {}, [K':J] = {}",
                self.index_k.as_ref().map_or("?".into(), |v| v.to_string()),
                self.index_kp.as_ref().map_or("?".into(), |v| v.to_string())
            );
        }
        write!(f, "rejected:")?;
        for x in &self.failures {
            write!(f, " [{:?}] {};", x.invariant, x.witness)?;
        }
        Ok(())
    }
}

fn mass_index(model: &DoubleCosetModel, side: Side, failures: &mut Vec<ValidationFailure>) -> Option<BigInt> {
    let labels = model.labels(side.level());
    let mut surjective = true;
    let counts = {
        let mut c = vec![0usize; labels.len()];
        for &x in model.projection(side) {
            c[x] += 1;
        }
        c
    };
    for (x, &c) in counts.iter().enumerate() {
        if c == 0 {
            surjective = false;
            failures.push(ValidationFailure {
                invariant: Invariant::Surjectivity,
                witness: format!("{} has no preimage under {}", labels[x], if side == Side::K { "pi" } else { "pip" }),
            });
        }
    }
    if !surjective {
        return None;
    }
    let masses = model.fiber_masses(side);
    let first = &masses[0];
    for (x, m) in masses.iter().enumerate() {
        if !m.is_integer() || m != first {
            failures.push(ValidationFailure {
                invariant: Invariant::MassFormula,
                witness: format!(
                    "at {} in X_{}: w * sum 1/w_J = {} (first point gives {})",
                    labels[x],
                    side.level(),
                    m,
                    first
                ),
            });
            return None;
        }
    }
    Some(first.to_integer())
}

/// Check every structural invariant and record a witness for each failure.
pub fn validate(model: &DoubleCosetModel) -> ValidationReport {
    let mut failures = Vec::new();
    let index_k = mass_index(model, Side::K, &mut failures);
    let index_kp = mass_index(model, Side::Kp, &mut failures);

    for (name, op) in model.operators() {
        let adj = &model.operators()[&op.adjoint];
        let expected = model.adjoint_matrix(op.level, &op.matrix);
        let actual = adj.matrix.to_rational();
        if expected != actual {
            let (i, j) = (0..expected.nrows())
                .flat_map(|i| (0..expected.ncols()).map(move |j| (i, j)))
                .find(|&(i, j)| expected.get(i, j) != actual.get(i, j))
                .unwrap();
            failures.push(ValidationFailure {
                invariant: Invariant::Adjointness,
                witness: format!(
                    "<{name} f, g> != <f, {} g>: entry ({i}, {j}) should be {} but is {}",
                    op.adjoint,
                    expected.get(i, j),
                    actual.get(i, j)
                ),
            });
        }
    }

    let central = model.central_operators();
    for (name, _) in &central {
        if model.operators()[name].level != Level::J {
            failures.push(ValidationFailure {
                invariant: Invariant::Centrality,
                witness: format!("{name} is flagged central but lives at level {}", model.operators()[name].level),
            });
        }
    }
    if !failures.iter().any(|f| f.invariant == Invariant::Centrality) {
        for i in 0..central.len() {
            for j in i + 1..central.len() {
                if !central[i].1.commutes_with(&central[j].1) {
                    failures.push(ValidationFailure {
                        invariant: Invariant::Centrality,
                        witness: format!("{} and {} do not commute", central[i].0, central[j].0),
                    });
                }
            }
        }
        for side in [Side::K, Side::Kp] {
            let p = &model.pullback(side).to_rational() * &model.pushforward(side);
            for (name, m) in &central {
                if !m.to_rational().commutes_with(&p) {
                    failures.push(ValidationFailure {
                        invariant: Invariant::Centrality,
                        witness: format!("{name} does not commute with the averaging projector for {}", side.level()),
                    });
                }
            }
        }
    }

    if model.metadata().torsion_free {
        for level in [Level::K, Level::Kp, Level::J] {
            if let Some(i) = model.weights(level).iter().position(|w| !w.is_one()) {
                failures.push(ValidationFailure {
                    invariant: Invariant::TorsionFree,
                    witness: format!("{} in X_{level} has weight {}", model.labels(level)[i], model.weights(level)[i]),
                });
            }
        }
    }

    ValidationReport { failures, index_k, index_kp }
}

/// A model that passed [`validate`], with its indices `[K:J]` and `[K':J]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedModel {
    model: DoubleCosetModel,
    index_k: BigInt,
    index_kp: BigInt,
}

impl Deref for ValidatedModel {
    type Target = DoubleCosetModel;
    fn deref(&self) -> &DoubleCosetModel {
        &self.model
    }
}

impl ValidatedModel {
    pub fn new(model: DoubleCosetModel) -> Result<Self, ValidationReport> {
        let report = validate(&model);
        match (report.accepted(), &report.index_k, &report.index_kp) {
            (true, Some(a), Some(b)) => Ok(ValidatedModel { index_k: a.clone(), index_kp: b.clone(), model }),
            _ => Err(report),
        }
    }

    pub fn model(&self) -> &DoubleCosetModel {
        &self.model
    }

    pub fn into_model(self) -> DoubleCosetModel {
        self.model
    }

    /// `[K:J]` or `[K':J]`.
    pub fn index(&self, side: Side) -> &BigInt {
        match side {
            Side::K => &self.index_k,
            Side::Kp => &self.index_kp,
        }
    }

    pub fn annihilators(&self, level: Level) -> AnnihilatorData {
        let gram = self.gram_matrix(level).gram;
        let a_min = gram.common_denominator();
        // dual lattice L^v is spanned by the columns of gram^{-1} = diag(w)
        let n = self.size(level);
        let dual: Vec<Vec<BigInt>> = self
            .weights(level)
            .iter()
            .enumerate()
            .map(|(i, w)| (0..n).map(|j| if i == j { w.clone() } else { BigInt::zero() }).collect())
            .collect();
        let lattice = Lattice::standard(n);
        let dual = Lattice::from_generators(n, &dual);
        let b_min = quotient_invariants(&lattice, &lattice.sum(&dual)).expect("L is inside L + L^v").exponent();
        AnnihilatorData { a_min, b_min }
    }

    /// `e = [K:J]^{-1} iota iota^v` on functions on `X_J`.
    pub fn averaging_projector(&self, side: Side) -> RatMatrix {
        let p = &self.pullback(side).to_rational() * &self.pushforward(side);
        p.scale(&BigRational::new(BigInt::one(), self.index(side).clone()))
    }

    /// The operator `e_K * phi` on `X_K` induced by a central `J`-level
    /// operator `phi`, i.e. the unique `M` with `phi iota = iota M`.
    pub fn star_k(&self, phi: &IntMatrix) -> IntMatrix {
        self.star(Side::K, phi)
    }

    pub fn star(&self, side: Side, phi: &IntMatrix) -> IntMatrix {
        let proj = self.projection(side);
        let n = self.size(side.level());
        let mut first = vec![usize::MAX; n];
        for (y, &x) in proj.iter().enumerate() {
            if first[x] == usize::MAX {
                first[x] = y;
            }
        }
        let mut m = IntMatrix::zeros(n, n);
        for (x, &yx) in first.iter().enumerate() {
            for (y, &xp) in proj.iter().enumerate() {
                let v = m.get(x, xp) + phi.get(yx, y);
                m.set(x, xp, v);
            }
        }
        m
    }

    /// `e_{K,K'} = iota^v iota' iota'^v iota` on `X_K`; equal to
    /// `[K:J][K':J] e_K * e_K' * e_K`.
    pub fn e_kkp(&self) -> RatMatrix {
        let i = self.pullback(Side::K).to_rational();
        let iv = self.pushforward(Side::K);
        let ip = self.pullback(Side::Kp).to_rational();
        let ipv = self.pushforward(Side::Kp);
        &(&(&iv * &ip) * &ipv) * &i
    }

    /// The `J`-level operator `[K':J] P + [K:J] P' - P P' - P' P` with
    /// `P = iota iota^v`; it commutes with both projectors, vanishes on new
    /// forms and induces `[K:J][K':J] - e_{K,K'}` on `X_K`.
    pub fn zeta(&self) -> RatMatrix {
        let p = &self.pullback(Side::K).to_rational() * &self.pushforward(Side::K);
        let pp = &self.pullback(Side::Kp).to_rational() * &self.pushforward(Side::Kp);
        let a = BigRational::from_integer(self.index_k.clone());
        let b = BigRational::from_integer(self.index_kp.clone());
        let sum = &p.scale(&b) + &pp.scale(&a);
        let cross = &(&p * &pp) + &(&pp * &p);
        &sum - &cross
    }

    /// `lcm` of the `J`-weights; clears the denominators of `iota^v`.
    pub fn weight_lcm(&self, level: Level) -> BigInt {
        self.weights(level).iter().fold(BigInt::one(), |acc, w| acc.lcm(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tiny(wj: [i64; 2]) -> DoubleCosetModel {
        DoubleCosetModel::new(ModelParts {
            x_k: vec!["a".into()],
            x_kp: vec!["b".into()],
            x_j: vec!["1".into(), "2".into()],
            pi: vec![0, 0],
            pip: vec![0, 0],
            w_k: vec![BigInt::one()],
            w_kp: vec![BigInt::one()],
            w_j: wj.iter().map(|&w| BigInt::from(w)).collect(),
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn tiny_model_indices() {
        let v = ValidatedModel::new(tiny([1, 1])).unwrap();
        assert_eq!(v.index(Side::K), &BigInt::from(2));
        assert_eq!(v.index(Side::Kp), &BigInt::from(2));
        let r = validate(&tiny([1, 2]));
        assert!(r.failed(Invariant::MassFormula));
    }

    #[test]
    fn chain_radius() {
        let m = DoubleCosetModel::new(ModelParts {
            x_k: vec!["a".into(), "b".into()],
            x_kp: vec!["c".into(), "d".into()],
            x_j: vec!["1".into(), "2".into(), "3".into()],
            pi: vec![0, 0, 1],
            pip: vec![0, 1, 1],
            w_k: vec![BigInt::one(); 2],
            w_kp: vec![BigInt::one(); 2],
            w_j: vec![BigInt::one(); 3],
            ..Default::default()
        })
        .unwrap();
        let c = m.class_partition();
        assert_eq!(c.num_classes(), 1);
        assert_eq!(c.radius, vec![0, 1, 2]);
    }
}
