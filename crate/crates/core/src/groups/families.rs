//! Cyclic, product, dihedral and order-`4p` families.

use super::{is_isomorphic, Family, GroupTable};
use crate::{Error, Result};

pub fn cyclic(n: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::InvalidGroup("cyclic group of order 0".into()));
    }
    let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    Ok(GroupTable::assemble(n, mul, 0))
}

/// `G × H`; the pair `(g, h)` has index `g·|H| + h`.
pub fn direct_product(g: &GroupTable, h: &GroupTable) -> GroupTable {
    let (a, b) = (g.order(), h.order());
    let n = a * b;
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            mul.push(g.mul(x / b, y / b) * b + h.mul(x % b, y % b));
        }
    }
    GroupTable::assemble(n, mul, g.identity() * b + h.identity())
}

/// `G ⋊_φ H` with `(g1, h1)·(g2, h2) = (g1·φ(h1)(g2), h1·h2)`.
///
/// `phi[h]` is the permutation of `G` by which `h` acts. It must be an
/// automorphism for every `h`, and `φ` must be a homomorphism. The pair
/// `(g, h)` has index `g·|H| + h`.
pub fn semidirect(g: &GroupTable, h: &GroupTable, phi: &[Vec<usize>]) -> Result<GroupTable> {
    let (a, b) = (g.order(), h.order());
    if phi.len() != b {
        return Err(Error::InvalidGroup(format!(
            "action lists {} maps for a group of order {b}",
            phi.len()
        )));
    }
    for (hi, f) in phi.iter().enumerate() {
        let mut seen = vec![false; a];
        if f.len() != a || f.iter().any(|&x| x >= a || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::InvalidGroup(format!("φ({hi}) is not a permutation")));
        }
        for x in 0..a {
            for y in 0..a {
                if f[g.mul(x, y)] != g.mul(f[x], f[y]) {
                    return Err(Error::InvalidGroup(format!("φ({hi}) is not an automorphism")));
                }
            }
        }
    }
    for h1 in 0..b {
        for h2 in 0..b {
            let composed = &phi[h.mul(h1, h2)];
            if (0..a).any(|x| composed[x] != phi[h1][phi[h2][x]]) {
                return Err(Error::InvalidGroup(format!(
                    "φ is not a homomorphism at ({h1},{h2})"
                )));
            }
        }
    }
    let n = a * b;
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let (g1, h1) = (x / b, x % b);
        for y in 0..n {
            let (g2, h2) = (y / b, y % b);
            mul.push(g.mul(g1, phi[h1][g2]) * b + h.mul(h1, h2));
        }
    }
    Ok(GroupTable::assemble(n, mul, g.identity() * b + h.identity()))
}

/// Index of `s^k d^l` in `dihedral(order)`.
pub fn dihedral_index(order: usize, k: usize, l: usize) -> usize {
    let n = order / 2;
    (k % 2) * n + l % n
}

/// The dihedral group of the given (even) order `2n`, presented by
/// `d^n = s^2 = 1, ds = sd^{-1}`.
///
/// Element `k·n + l` is the normal form `s^k d^l`. Products follow
/// `s^{k1} d^{l1} · s^{k2} d^{l2} = s^{k1+k2} d^{(-1)^{k2} l1 + l2}`.
pub fn dihedral(order: usize) -> Result<GroupTable> {
    if order == 0 || order % 2 == 1 {
        return Err(Error::InvalidGroup(format!(
            "dihedral groups have positive even order, got {order}"
        )));
    }
    let n = order / 2;
    let mut mul = Vec::with_capacity(order * order);
    for x in 0..order {
        let (k1, l1) = (x / n, x % n);
        for y in 0..order {
            let (k2, l2) = (y / n, y % n);
            let l1 = if k2 == 1 { (n - l1) % n } else { l1 };
            mul.push(((k1 + k2) % 2) * n + (l1 + l2) % n);
        }
    }
    Ok(GroupTable::assemble(order, mul, 0).with_family(Family::Dihedral { order }))
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn check_p(p: usize) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not a prime at least 5")));
    }
    Ok(())
}

fn scaling_action(p: usize, k: usize) -> Vec<Vec<usize>> {
    let mut phi = Vec::with_capacity(4);
    let mut factor = 1;
    for _ in 0..4 {
        phi.push((0..p).map(|x| x * factor % p).collect());
        factor = factor * k % p;
    }
    phi
}

/// `C_p ⋊ C_4` where the generator of `C_4` inverts `C_p`.
pub fn dicyclic_4p(p: usize) -> Result<GroupTable> {
    check_p(p)?;
    semidirect(&cyclic(p)?, &cyclic(4)?, &scaling_action(p, p - 1))
}

fn multiplicative_order(k: usize, p: usize) -> usize {
    let mut x = k % p;
    let mut ord = 1;
    while x != 1 {
        x = x * k % p;
        ord += 1;
    }
    ord
}

/// `C_p ⋊ C_4` where the generator of `C_4` acts by `x ↦ x^k`, `k` the least
/// residue of multiplicative order 4 modulo `p`.
pub fn cp_c4_faithful(p: usize) -> Result<GroupTable> {
    check_p(p)?;
    if p % 4 != 1 {
        return Err(Error::Precondition(format!("{p} is not 1 mod 4")));
    }
    let k = (2..p)
        .find(|&k| multiplicative_order(k, p) == 4)
        .expect("a unit of order 4 exists when p ≡ 1 mod 4");
    cp_c4_faithful_with(p, k)
}

/// As [`cp_c4_faithful`] with an explicit `k` of multiplicative order 4.
pub fn cp_c4_faithful_with(p: usize, k: usize) -> Result<GroupTable> {
    check_p(p)?;
    if k % p == 0 || multiplicative_order(k, p) != 4 {
        return Err(Error::Precondition(format!("{k} does not have order 4 modulo {p}")));
    }
    semidirect(&cyclic(p)?, &cyclic(4)?, &scaling_action(p, k))
}

/// The constructed groups of order `4p` with their labels.
pub fn candidates_order_4p(p: usize) -> Result<Vec<(&'static str, GroupTable)>> {
    check_p(p)?;
    let c2 = cyclic(2)?;
    let mut out = vec![
        (
            "C_2xC_2xC_p",
            direct_product(&direct_product(&c2, &c2), &cyclic(p)?),
        ),
        ("C_4p", cyclic(4 * p)?),
        ("D_4p", dihedral(4 * p)?),
        ("Dic_4p", dicyclic_4p(p)?),
    ];
    if p % 4 == 1 {
        out.push(("C_p:C_4", cp_c4_faithful(p)?));
    }
    Ok(out)
}

/// Which constructed candidate of order `4p` the group is isomorphic to.
pub fn classify_order_4p(g: &GroupTable) -> Result<&'static str> {
    let n = g.order();
    if n % 4 != 0 || check_p(n / 4).is_err() {
        return Err(Error::Precondition(format!(
            "order {n} is not 4p for a prime p at least 5"
        )));
    }
    candidates_order_4p(n / 4)?
        .into_iter()
        .find(|(_, c)| is_isomorphic(g, c))
        .map(|(label, _)| label)
        .ok_or_else(|| Error::InvalidGroup("matches none of the order-4p candidates".into()))
}
