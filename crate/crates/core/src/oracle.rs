//! Independent re-check of a congruence certificate with plain `u64`
//! arithmetic modulo a prime.
//!
//! Nothing here goes through the exact-algebra layer: operators are reduced
//! entrywise, `e_K * phi` is rebuilt from the projection maps, and the
//! characters of the central operators on all of `F_ell^{X_J}` are found by
//! splitting eigenspaces one operator at a time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cosetmodel::{DoubleCosetModel, Level, Side};
use crate::levelraise::{star_name, CertificateStatus, CongruenceCertificate};

/// `x mod p` in `[0, p)`.
pub fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

type ModMat = Vec<Vec<u64>>;

fn reduce(rows: &[Vec<BigInt>], p: u64) -> ModMat {
    rows.iter().map(|r| r.iter().map(|x| residue(x, p)).collect()).collect()
}

fn mat_vec(a: &ModMat, v: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(0u64, |acc, (x, y)| ((acc as u128 + *x as u128 * *y as u128) % p as u128) as u64))
        .collect()
}

fn inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Basis of the null space of `a` (rows of length `n`).
fn null_space(mut a: ModMat, n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, k);
        let s = inv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = ((*x as u128 * s as u128) % p as u128) as u64;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    let sub = ((f as u128 * a[r][j] as u128) % p as u128) as u64;
                    a[i][j] = (a[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Characters of commuting operators restricted to the span of `basis`,
/// as value tuples. Each eigenspace is cut down one operator at a time.
fn characters_on(ops: &[ModMat], basis: Vec<Vec<u64>>, p: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if basis.is_empty() {
        return;
    }
    let Some((op, rest)) = ops.split_first() else {
        out.push(prefix.clone());
        return;
    };
    let images: Vec<Vec<u64>> = basis.iter().map(|b| mat_vec(op, b, p)).collect();
    let n = op.len();
    for lambda in 0..p {
        // combinations c with sum c_i (op - lambda) b_i = 0
        let rows: ModMat = (0..n)
            .map(|r| {
                basis.iter().zip(&images).map(|(b, im)| (im[r] + p - ((lambda as u128 * b[r] as u128) % p as u128) as u64) % p).collect()
            })
            .collect();
        let coeffs = null_space(rows, basis.len(), p);
        if coeffs.is_empty() {
            continue;
        }
        let sub: Vec<Vec<u64>> = coeffs
            .iter()
            .map(|c| {
                (0..n)
                    .map(|r| {
                        c.iter().zip(&basis).fold(0u64, |acc, (ci, b)| {
                            ((acc as u128 + *ci as u128 * b[r] as u128) % p as u128) as u64
                        })
                    })
                    .collect()
            })
            .collect();
        prefix.push(lambda);
        characters_on(rest, sub, p, prefix, out);
        prefix.pop();
    }
}

/// Every character of `ops` on `F_p^n`.
pub fn all_characters(ops: &[ModMat], n: usize, p: u64) -> Vec<Vec<u64>> {
    let basis: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
    let mut out = Vec::new();
    characters_on(ops, basis, p, &mut Vec::new(), &mut out);
    out
}

/// `M[x][x'] = sum over y above x' of phi[y_x][y]`, with `y_x` the first
/// point above `x`.
fn star_mod(model: &DoubleCosetModel, side: Side, phi: &ModMat, p: u64) -> ModMat {
    let proj = model.projection(side);
    let n = model.size(side.level());
    let mut first = vec![usize::MAX; n];
    for (y, &x) in proj.iter().enumerate().rev() {
        first[x] = y;
    }
    let mut m = vec![vec![0u64; n]; n];
    for (x, row) in m.iter_mut().enumerate() {
        for (y, &xp) in proj.iter().enumerate() {
            row[xp] = (row[xp] + phi[first[x]][y]) % p;
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub checks: Vec<(String, bool)>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect()
    }
}

fn parse_prime_elem(s: &str, p: u64) -> Option<u64> {
    s.trim().parse::<u64>().ok().filter(|&v| v < p)
}

/// Re-derive the claims of a prime-field certificate for `model`.
pub fn check_certificate(model: &DoubleCosetModel, cert: &CongruenceCertificate) -> OracleReport {
    let p = cert.ell;
    let mut checks = Vec::new();
    let mut check = |name: &str, ok: bool| checks.push((name.to_string(), ok));
    if cert.residue_degree != 1 || cert.witness_character.field.degree != 1 {
        check("prime residue field", false);
        return OracleReport { checks };
    }
    check("model hash", crate::cosetmodel::document::model_hash(model) == cert.model_hash);

    let central: Vec<(String, ModMat)> =
        model.central_operators().into_iter().map(|(n, m)| (n, reduce(&m.to_rows(), p))).collect();
    let targets: Option<Vec<u64>> = central
        .iter()
        .map(|(n, _)| cert.witness_character.values.get(n).and_then(|s| parse_prime_elem(s, p)))
        .collect();
    let Some(targets) = targets else {
        check("target values present", false);
        return OracleReport { checks };
    };

    // targets agree with eta on e_K * phi, read off the X_K witness
    let w_k: Vec<u64> = cert.eta_witness.iter().map(|x| residue(&x.0, p)).collect();
    let pivot = w_k.iter().position(|&x| x != 0);
    let mut eta_ok = pivot.is_some();
    for ((name, phi), t) in central.iter().zip(&targets) {
        let star = star_mod(model, Side::K, phi, p);
        let image = mat_vec(&star, &w_k, p);
        let expect: Vec<u64> = w_k.iter().map(|x| ((*x as u128 * *t as u128) % p as u128) as u64).collect();
        eta_ok &= image == expect;
        if let Some(v) = cert.eta.get(&star_name(name)) {
            eta_ok &= residue(&v.0, p) == *t;
        }
    }
    check("targets are eta on e_K * phi", eta_ok);

    // m
    let e_kkp = cert.eta.get("e_KK'").map(|v| v.0.clone()).unwrap_or_else(|| cert.eta_e_kkp.clone());
    let m = &e_kkp - model_index(model, Side::K) * model_index(model, Side::Kp);
    check("m recomputed", m == cert.m && e_kkp == cert.eta_e_kkp);
    let mut vm = 0;
    let mut r = m.clone();
    while !r.is_zero() && (&r % p).is_zero() {
        r /= p;
        vm += 1;
    }
    check("v(m) recomputed", !m.is_zero() && vm == cert.v_m);

    // the congruent character occurs on all of F_p^{X_J}
    let mats: Vec<ModMat> = central.iter().map(|(_, m)| m.clone()).collect();
    let chars = all_characters(&mats, model.size(Level::J), p);
    let occurs = chars.contains(&targets);
    match cert.status {
        CertificateStatus::Found => {
            check("target character occurs on X_J", occurs);
            let witness: Option<Vec<u64>> = cert
                .witness_character
                .witness
                .as_ref()
                .and_then(|w| w.iter().map(|s| parse_prime_elem(s, p)).collect());
            let Some(v) = witness else {
                check("witness present", false);
                return OracleReport { checks };
            };
            check("witness nonzero", v.iter().any(|&x| x != 0));
            let eigen = mats.iter().zip(&targets).all(|(a, t)| {
                mat_vec(a, &v, p) == v.iter().map(|x| ((*x as u128 * *t as u128) % p as u128) as u64).collect::<Vec<_>>()
            });
            check("witness is a joint eigenvector", eigen);
            check("witness is orthogonal to the old space", orthogonal_to_old(model, &v, p));
        }
        CertificateStatus::NotFound => check("status recorded", true),
    }
    OracleReport { checks }
}

fn model_index(model: &DoubleCosetModel, side: Side) -> BigInt {
    // w_K(x) * sum over the fiber of 1/w_J(y), at the first point
    let wk = &model.weights(side.level())[0];
    let wj = model.weights(Level::J);
    let mut num = BigInt::zero();
    let mut den = BigInt::from(1);
    for (y, &x) in model.projection(side).iter().enumerate() {
        if x == 0 {
            num = &num * &wj[y] + &den;
            den *= &wj[y];
        }
    }
    wk * num / den
}

/// `sum over y above x of v(y) / w_J(y) = 0` for every `x` on both sides,
/// scaled by the `lcm` of the weights.
fn orthogonal_to_old(model: &DoubleCosetModel, v: &[u64], p: u64) -> bool {
    let wj = model.weights(Level::J);
    let l = wj.iter().fold(BigInt::from(1), |a, b| a.lcm(b));
    let scale: Vec<u64> = wj.iter().map(|w| residue(&(&l / w), p)).collect();
    [Side::K, Side::Kp].into_iter().all(|side| {
        let mut sums = vec![0u64; model.size(side.level())];
        for (y, &x) in model.projection(side).iter().enumerate() {
            sums[x] = ((sums[x] as u128 + scale[y] as u128 * v[y] as u128) % p as u128) as u64;
        }
        sums.iter().all(|&s| s == 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_of_diagonal() {
        let a = vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1]];
        let b = vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let mut c = all_characters(&[a, b], 3, 3);
        c.sort();
        assert_eq!(c, vec![vec![1, 0], vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn nilpotent_has_one_character() {
        let a = vec![vec![0, 1], vec![0, 0]];
        assert_eq!(all_characters(&[a], 2, 5), vec![vec![0]]);
    }
}
