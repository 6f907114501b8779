//! Concrete models built from finite groups and from small multigraphs.
//!
//! For a finite group `G` with subgroups `D`, `H_K`, `H_K'` and
//! `H_J = H_K ∩ H_K'`, the sets `X_H = D \ G / H` carry weights
//! `|D ∩ g H g^-1|`, and right convolution by a conjugacy-class sum gives a
//! Hecke operator on every level. This reproduces the pairing and index
//! structure of a definite group at one place in a form small enough to
//! enumerate.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use super::{DoubleCosetModel, Level, Metadata, ModelError, ModelParts, Operator, Side, ValidatedModel};
use crate::exactalg::{IntMatrix, Mat};
use crate::perm::{Perm, PermGroup};

#[derive(Debug, Error)]
pub enum ToyError {
    #[error("subgroups act on {0} points but the ambient group on {1}")]
    DegreeMismatch(usize, usize),
    #[error("cycle type {0:?} does not fit in S_{1}")]
    BadCycleType(Vec<usize>, usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("generated model failed validation: {0}")]
    Invalid(String),
}

/// Input for [`group_model`].
#[derive(Clone, Debug)]
pub struct GroupModelSpec {
    pub n: usize,
    pub delta: PermGroup,
    pub h_k: PermGroup,
    pub h_kp: PermGroup,
    /// Nontrivial cycle lengths of each class to register, e.g. `[2]` for
    /// transpositions.
    pub classes: Vec<Vec<usize>>,
    /// Also register the central operator `zeta@J` when it is integral.
    pub with_zeta: bool,
    pub provenance: String,
}

/// Left cosets `gH` of one subgroup, with a lookup from every group element.
struct CosetSpace {
    reps: Vec<Perm>,
    index_of: HashMap<Perm, usize>,
}

impl CosetSpace {
    fn new(gamma: &PermGroup, h: &PermGroup) -> Self {
        let mut reps = Vec::new();
        let mut index_of = HashMap::with_capacity(gamma.order());
        for g in gamma.elements() {
            if index_of.contains_key(g) {
                continue;
            }
            let idx = reps.len();
            reps.push(*g);
            for x in h.elements() {
                index_of.insert(g.compose(x), idx);
            }
        }
        CosetSpace { reps, index_of }
    }
}

/// `D`-orbits on a coset space: the double cosets `D g H`.
struct DoubleCosets {
    /// Representative group element of each double coset.
    reps: Vec<Perm>,
    /// Double coset of each left coset.
    of_coset: Vec<usize>,
    weights: Vec<BigInt>,
}

impl DoubleCosets {
    fn new(delta: &PermGroup, cs: &CosetSpace) -> Self {
        let mut of_coset = vec![usize::MAX; cs.reps.len()];
        let mut reps = Vec::new();
        let mut weights = Vec::new();
        for (c, g) in cs.reps.iter().enumerate() {
            if of_coset[c] != usize::MAX {
                continue;
            }
            let x = reps.len();
            let mut size = 0usize;
            for d in delta.elements() {
                let e = cs.index_of[&d.compose(g)];
                if of_coset[e] == usize::MAX {
                    of_coset[e] = x;
                    size += 1;
                }
            }
            reps.push(*g);
            weights.push(BigInt::from(delta.order() / size));
        }
        DoubleCosets { reps, of_coset, weights }
    }

    fn locate(&self, cs: &CosetSpace, g: &Perm) -> usize {
        self.of_coset[cs.index_of[g]]
    }
}

fn one_line(p: &Perm) -> String {
    (0..p.degree()).map(|i| char::from(b'1' + p.apply(i) as u8)).collect()
}

fn class_name(cycles: &[usize]) -> String {
    let parts: Vec<String> = cycles.iter().map(|c| c.to_string()).collect();
    format!("c{}", parts.join(""))
}

/// Right convolution by a class sum: `M[x][x'] = #{c in C : D g_x c H = x'}`.
fn class_operator(dc: &DoubleCosets, cs: &CosetSpace, class: &[Perm]) -> IntMatrix {
    let n = dc.reps.len();
    let mut m = IntMatrix::zeros(n, n);
    for (x, g) in dc.reps.iter().enumerate() {
        for c in class {
            let xp = dc.locate(cs, &g.compose(c));
            let v = m.get(x, xp) + BigInt::one();
            m.set(x, xp, v);
        }
    }
    m
}

/// Build `D \ G / H` for `H` in `{H_K, H_K', H_J}` with `G = S_n`.
pub fn group_model(spec: &GroupModelSpec) -> Result<DoubleCosetModel, ToyError> {
    let n = spec.n;
    for g in [&spec.delta, &spec.h_k, &spec.h_kp] {
        if g.degree() != n {
            return Err(ToyError::DegreeMismatch(g.degree(), n));
        }
    }
    let gamma = PermGroup::symmetric(n);
    let h_j = spec.h_k.intersect(&spec.h_kp);
    let spaces: Vec<CosetSpace> = [&spec.h_k, &spec.h_kp, &h_j].iter().map(|h| CosetSpace::new(&gamma, h)).collect();
    let dcs: Vec<DoubleCosets> = spaces.iter().map(|cs| DoubleCosets::new(&spec.delta, cs)).collect();
    let labels = |i: usize| -> Vec<String> { dcs[i].reps.iter().map(one_line).collect() };
    let proj = |target: usize| -> Vec<usize> { dcs[2].reps.iter().map(|g| dcs[target].locate(&spaces[target], g)).collect() };

    let by_type = gamma.classes_by_cycle_type();
    let mut operators = BTreeMap::new();
    for cycles in &spec.classes {
        let mut full = cycles.clone();
        let used: usize = full.iter().sum();
        if used > n || cycles.iter().any(|&c| c < 2) {
            return Err(ToyError::BadCycleType(cycles.clone(), n));
        }
        full.extend(std::iter::repeat_n(1, n - used));
        full.sort_unstable_by(|a, b| b.cmp(a));
        let class = &by_type[&full];
        let base = class_name(cycles);
        for (i, level) in [Level::K, Level::Kp, Level::J].into_iter().enumerate() {
            let name = format!("{base}@{}", level.as_str());
            let matrix = class_operator(&dcs[i], &spaces[i], class);
            // the class of c^-1 equals the class of c, so each operator is its own adjoint
            operators.insert(
                name.clone(),
                Operator { level, matrix, adjoint: name, central_at_j: level == Level::J },
            );
        }
    }

    let metadata = Metadata { provenance: Some(spec.provenance.clone()), ..Default::default() };
    let parts = ModelParts {
        x_k: labels(0),
        x_kp: labels(1),
        x_j: labels(2),
        pi: proj(0),
        pip: proj(1),
        w_k: dcs[0].weights.clone(),
        w_kp: dcs[1].weights.clone(),
        w_j: dcs[2].weights.clone(),
        operators,
        metadata,
        characters: BTreeMap::new(),
    };
    let model = DoubleCosetModel::new(parts)?;
    if spec.with_zeta {
        return with_zeta(model);
    }
    Ok(model)
}

/// Register `zeta@J` (see [`ValidatedModel::zeta`]) when it is integral.
pub fn with_zeta(model: DoubleCosetModel) -> Result<DoubleCosetModel, ToyError> {
    let v = ValidatedModel::new(model).map_err(|r| ToyError::Invalid(r.to_string()))?;
    let z = v.zeta();
    let Some(matrix) = z.to_integer() else {
        return Ok(v.into_model());
    };
    let mut parts = v.into_model().into_parts();
    parts
        .operators
        .insert("zeta@J".into(), Operator { level: Level::J, matrix, adjoint: "zeta@J".into(), central_at_j: true });
    Ok(DoubleCosetModel::new(parts)?)
}

/// `D = 1`, `H_K` the stabilizer of the last point and `H_K'` the
/// stabilizer of the one before it, so `[K:J] = [K':J] = n - 1`.
pub fn flag_model(n: usize) -> GroupModelSpec {
    GroupModelSpec {
        n,
        delta: PermGroup::trivial(n),
        h_k: PermGroup::pointwise_stabilizer(n, &[n - 1]),
        h_kp: PermGroup::pointwise_stabilizer(n, &[n - 2]),
        classes: vec![vec![2], vec![3]],
        with_zeta: true,
        provenance: format!("S_{n} on points, K = Stab({n}), K' = Stab({})", n - 1),
    }
}

/// The rank-one model of a quaternionic Brandt pair at a prime `q`:
/// two points on each side joined by `x` and `q + 1 - x` edges.
///
/// The `K`-level operator `T` has the eigenvector `(1, -1)` with eigenvalue
/// `a = 2x - q - 1`, and `delta^v delta = [[q+1, T], [T^v, q+1]]`.
pub fn ribet_model(q: u64, x: u64) -> Result<DoubleCosetModel, ToyError> {
    assert!(x <= q + 1, "edge count exceeds q + 1");
    let (qq, xx) = (BigInt::from(q), BigInt::from(x));
    let y = &qq + BigInt::one() - &xx;
    let mut x_j = Vec::new();
    let mut pi = Vec::new();
    let mut pip = Vec::new();
    let blocks = [(0usize, 0usize, x), (0, 1, q + 1 - x), (1, 0, q + 1 - x), (1, 1, x)];
    for (a, b, count) in blocks {
        for e in 0..count {
            x_j.push(format!("a{}b{}e{e}", a + 1, b + 1));
            pi.push(a);
            pip.push(b);
        }
    }
    let t = Mat::from_rows(vec![vec![xx.clone(), y.clone()], vec![y, xx]]);
    let mut operators = BTreeMap::new();
    operators.insert("T".to_string(), Operator { level: Level::K, matrix: t, adjoint: "T".into(), central_at_j: false });
    let nj = x_j.len();
    let parts = ModelParts {
        x_k: vec!["a1".into(), "a2".into()],
        x_kp: vec!["b1".into(), "b2".into()],
        x_j,
        pi,
        pip,
        w_k: vec![BigInt::one(); 2],
        w_kp: vec![BigInt::one(); 2],
        w_j: vec![BigInt::one(); nj],
        operators,
        metadata: Metadata {
            provenance: Some(format!("rank-one block model, q = {q}, x = {x}")),
            rank_one: true,
            prime_q: Some(q),
            torsion_free: true,
        },
        characters: BTreeMap::from([(
            "f".to_string(),
            super::NamedCharacter {
                values: BTreeMap::from([("T".to_string(), BigInt::from(2 * x as i64 - q as i64 - 1))]),
                witness: vec![BigInt::one(), -BigInt::one()],
            },
        )]),
    };
    with_zeta(DoubleCosetModel::new(parts)?)
}

/// The smallest accepted model: `X_K = {a}`, `X_K' = {b}`, `X_J = {1, 2}`.
pub fn tiny_model() -> DoubleCosetModel {
    let parts = ModelParts {
        x_k: vec!["a".into()],
        x_kp: vec!["b".into()],
        x_j: vec!["1".into(), "2".into()],
        pi: vec![0, 0],
        pip: vec![0, 0],
        w_k: vec![BigInt::one()],
        w_kp: vec![BigInt::one()],
        w_j: vec![BigInt::one(); 2],
        metadata: Metadata { provenance: Some("two points over singletons".into()), ..Default::default() },
        ..Default::default()
    };
    DoubleCosetModel::new(parts).expect("tiny model is well formed")
}

/// Disjoint union of two models: every set, map and operator is the
/// direct sum. Operators present in only one summand are extended by zero.
pub fn disjoint_union(a: &DoubleCosetModel, b: &DoubleCosetModel) -> Result<DoubleCosetModel, ModelError> {
    let tag = |v: &[String], t: &str| -> Vec<String> { v.iter().map(|l| format!("{t}{l}")).collect() };
    let cat = |u: &[BigInt], v: &[BigInt]| -> Vec<BigInt> { u.iter().chain(v).cloned().collect() };
    let shift = |u: &[usize], v: &[usize], off: usize| -> Vec<usize> {
        u.iter().copied().chain(v.iter().map(|&i| i + off)).collect()
    };
    let mut operators = BTreeMap::new();
    let names: std::collections::BTreeSet<&String> = a.operators().keys().chain(b.operators().keys()).collect();
    for name in names {
        let (oa, ob) = (a.operator(name), b.operator(name));
        let level = oa.or(ob).unwrap().level;
        let (na, nb) = (a.size(level), b.size(level));
        let mut m = IntMatrix::zeros(na + nb, na + nb);
        if let Some(o) = oa {
            for i in 0..na {
                for j in 0..na {
                    m.set(i, j, o.matrix.get(i, j).clone());
                }
            }
        }
        if let Some(o) = ob {
            for i in 0..nb {
                for j in 0..nb {
                    m.set(na + i, na + j, o.matrix.get(i, j).clone());
                }
            }
        }
        let src = oa.or(ob).unwrap();
        operators.insert(
            name.clone(),
            Operator { level, matrix: m, adjoint: src.adjoint.clone(), central_at_j: src.central_at_j },
        );
    }
    DoubleCosetModel::new(ModelParts {
        x_k: [tag(a.labels(Level::K), "L."), tag(b.labels(Level::K), "R.")].concat(),
        x_kp: [tag(a.labels(Level::Kp), "L."), tag(b.labels(Level::Kp), "R.")].concat(),
        x_j: [tag(a.labels(Level::J), "L."), tag(b.labels(Level::J), "R.")].concat(),
        pi: shift(a.projection(Side::K), b.projection(Side::K), a.size(Level::K)),
        pip: shift(a.projection(Side::Kp), b.projection(Side::Kp), a.size(Level::Kp)),
        w_k: cat(a.weights(Level::K), b.weights(Level::K)),
        w_kp: cat(a.weights(Level::Kp), b.weights(Level::Kp)),
        w_j: cat(a.weights(Level::J), b.weights(Level::J)),
        operators,
        metadata: Metadata { provenance: Some("disjoint union".into()), ..Default::default() },
        characters: BTreeMap::new(),
    })
}

/// Point-stabilizer subgroup, 1-based, for hand-written literals.
pub fn stab(n: usize, points: &[usize]) -> PermGroup {
    let fixed: Vec<usize> = points.iter().map(|p| p - 1).collect();
    PermGroup::pointwise_stabilizer(n, &fixed)
}

/// Subgroup generated by permutations in cycle notation, 1-based.
pub fn generated(n: usize, gens: &[&[&[usize]]]) -> PermGroup {
    let perms: Vec<Perm> = gens.iter().map(|c| Perm::from_cycles(n, c).expect("valid cycles")).collect();
    PermGroup::generate(n, &perms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosetmodel::{validate, Side};

    #[test]
    fn flag_model_is_valid() {
        let m = group_model(&flag_model(4)).unwrap();
        assert_eq!(m.size(Level::K), 4);
        assert_eq!(m.size(Level::J), 12);
        let v = ValidatedModel::new(m).unwrap();
        assert_eq!(v.index(Side::K), &BigInt::from(3));
        assert!(v.operator("zeta@J").is_some());
    }

    #[test]
    fn weighted_group_model() {
        let spec = GroupModelSpec {
            delta: generated(5, &[&[&[1, 2]], &[&[3, 4, 5]]]),
            ..flag_model(5)
        };
        let m = group_model(&spec).unwrap();
        let r = validate(&m);
        assert!(r.accepted(), "{r}");
        assert!(m.weights(Level::J).iter().any(|w| !w.is_one()));
    }

    #[test]
    fn ribet_block() {
        let v = ValidatedModel::new(ribet_model(5, 2).unwrap()).unwrap();
        assert_eq!(v.index(Side::K), &BigInt::from(6));
        assert_eq!(v.index(Side::Kp), &BigInt::from(6));
    }
}
