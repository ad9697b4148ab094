//! Small named groups used throughout the tests and example workspaces.

use crate::grp::{make_abelian, FiniteGroup};

pub fn cyclic(n: u64) -> FiniteGroup {
    if n == 1 {
        FiniteGroup::trivial()
    } else {
        make_abelian(&[n]).expect("n >= 2")
    }
}

/// Dihedral group of order `2n`: index `k` is `r^k`, index `n + k` is `s r^k`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let order = 2 * n;
    let mut mul = vec![0usize; order * order];
    for x in 0..order {
        let (xs, xa) = (x >= n, x % n);
        for y in 0..order {
            let (ys, yb) = (y >= n, y % n);
            let (s, k) = match (xs, ys) {
                (false, false) => (false, xa + yb),
                (false, true) => (true, yb + n - xa),
                (true, false) => (true, xa + yb),
                (true, true) => (false, yb + n - xa),
            };
            mul[x * order + y] = if s { n + k % n } else { k % n };
        }
    }
    let labels = (0..order)
        .map(|x| if x < n { format!("r{x}") } else { format!("sr{}", x - n) })
        .collect();
    FiniteGroup::from_trusted_table(order, mul).with_labels(labels)
}

/// Heisenberg group over `Z_p`: `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`,
/// indexed by `c p^2 + a p + b`.
pub fn heisenberg(p: usize) -> FiniteGroup {
    assert!(p >= 2);
    let order = p * p * p;
    let split = |x: usize| (x / p % p, x % p, x / (p * p));
    let mut mul = vec![0usize; order * order];
    for x in 0..order {
        let (a, b, c) = split(x);
        for y in 0..order {
            let (a2, b2, c2) = split(y);
            let (na, nb, nc) = ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
            mul[x * order + y] = nc * p * p + na * p + nb;
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (a, b, c) = split(x);
            format!("({a},{b},{c})")
        })
        .collect();
    FiniteGroup::from_trusted_table(order, mul).with_labels(labels)
}

/// Symmetric group on three letters, permutations in lexicographic order.
pub fn symmetric3() -> FiniteGroup {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let mut mul = vec![0usize; 36];
    for (i, s) in perms.iter().enumerate() {
        for (j, t) in perms.iter().enumerate() {
            mul[i * 6 + j] = index([s[t[0]], s[t[1]], s[t[2]]]);
        }
    }
    let labels = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
    FiniteGroup::from_trusted_table(6, mul).with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_groups_are_groups() {
        for g in [cyclic(1), cyclic(5), dihedral(3), dihedral(4), heisenberg(3), symmetric3()] {
            g.validate().unwrap();
        }
        assert_eq!(dihedral(4).center().len(), 2);
        assert_eq!(heisenberg(3).exponent(), 3);
        assert_eq!(heisenberg(2).exponent(), 4);
        assert!(!symmetric3().is_abelian());
    }
}
