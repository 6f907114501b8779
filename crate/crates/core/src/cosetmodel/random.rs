//! Seeded random valid models for property checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use super::toy::{group_model, GroupModelSpec};
use super::{DoubleCosetModel, Metadata, ModelParts};
use crate::perm::{Perm, PermGroup};

/// A biregular bipartite multigraph with unit weights: `X_J` are the
/// edges, every `K`-vertex has degree `a` and every `K'`-vertex degree `b`.
pub fn random_biregular<R: Rng>(rng: &mut R, max_j: usize) -> DoubleCosetModel {
    loop {
        let a = rng.gen_range(1..=6usize);
        let b = rng.gen_range(1..=6usize);
        let n_k = rng.gen_range(1..=8usize);
        let edges = n_k * a;
        if edges > max_j || edges % b != 0 {
            continue;
        }
        let n_kp = edges / b;
        let mut sigma: Vec<usize> = (0..edges).collect();
        sigma.shuffle(rng);
        let parts = ModelParts {
            x_k: (0..n_k).map(|i| format!("k{i}")).collect(),
            x_kp: (0..n_kp).map(|i| format!("p{i}")).collect(),
            x_j: (0..edges).map(|i| format!("j{i}")).collect(),
            pi: (0..edges).map(|y| y / a).collect(),
            pip: (0..edges).map(|y| sigma[y] / b).collect(),
            w_k: vec![BigInt::one(); n_k],
            w_kp: vec![BigInt::one(); n_kp],
            w_j: vec![BigInt::one(); edges],
            operators: BTreeMap::new(),
            metadata: Metadata { provenance: Some(format!("random biregular ({a}, {b})")), ..Default::default() },
            characters: BTreeMap::new(),
        };
        return DoubleCosetModel::new(parts).expect("well formed by construction");
    }
}

fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::from_images(&v).unwrap()
}

fn random_subgroup<R: Rng>(rng: &mut R, n: usize) -> PermGroup {
    match rng.gen_range(0..3) {
        0 => {
            let k = rng.gen_range(1..=2);
            let mut pts: Vec<usize> = (0..n).collect();
            pts.shuffle(rng);
            PermGroup::pointwise_stabilizer(n, &pts[..k])
        }
        1 => {
            let split = rng.gen_range(1..n);
            PermGroup::young(n, &[split, n - split])
        }
        _ => {
            let g = random_perm(rng, n);
            let stab = PermGroup::pointwise_stabilizer(n, &[rng.gen_range(0..n)]);
            // a conjugate of a point stabilizer
            let gens: Vec<Perm> = stab.elements().iter().map(|h| g.compose(h).compose(&g.inverse())).collect();
            PermGroup::generate(n, &gens)
        }
    }
}

/// `D \ S_n / H` models with random `D` (so weights are nontrivial) and
/// random `H_K`, `H_K'`.
pub fn random_group_model<R: Rng>(rng: &mut R, max_j: usize) -> DoubleCosetModel {
    loop {
        let n = rng.gen_range(3..=5usize);
        let ngens = rng.gen_range(0..=2);
        let gens: Vec<Perm> = (0..ngens).map(|_| random_perm(rng, n)).collect();
        let spec = GroupModelSpec {
            n,
            delta: PermGroup::generate(n, &gens),
            h_k: random_subgroup(rng, n),
            h_kp: random_subgroup(rng, n),
            classes: vec![vec![2]],
            with_zeta: false,
            provenance: format!("random subgroup model on S_{n}"),
        };
        let m = group_model(&spec).expect("valid spec");
        if m.size(super::Level::J) <= max_j {
            return m;
        }
    }
}

/// Either kind, chosen uniformly.
pub fn random_valid_model<R: Rng>(rng: &mut R, max_j: usize) -> DoubleCosetModel {
    if rng.gen_bool(0.5) {
        random_biregular(rng, max_j)
    } else {
        random_group_model(rng, max_j)
    }
}
