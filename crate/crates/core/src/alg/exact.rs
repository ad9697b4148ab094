//! Exact arithmetic in `Z[zeta_K]` and the fiber decomposition of `C[E]`
//! for a central extension `E`.

use super::{crossed_product, group_algebra, lcm, lift, AlgError, FiberedAlgebra, MonomialMap, MonomialStarAlgebra};
use crate::ext::CentralExtension;
use crate::grp;

/// `Z[x]/(x^K - 1)` with equality tested modulo the `K`-th cyclotomic polynomial.
#[derive(Clone, Debug)]
pub(crate) struct CyclotomicRing {
    k: usize,
    phi: Vec<i64>,
}

/// Exact quotient of `a` by the monic polynomial `b`.
fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Coefficients of the `k`-th cyclotomic polynomial, constant term first.
pub(crate) fn cyclotomic_polynomial(k: usize) -> Vec<i64> {
    let mut p = vec![0i64; k + 1];
    p[0] = -1;
    p[k] = 1;
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

impl CyclotomicRing {
    pub(crate) fn new(k: usize) -> Self {
        CyclotomicRing { k, phi: cyclotomic_polynomial(k) }
    }

    pub(crate) fn zero(&self) -> Vec<i64> {
        vec![0; self.k]
    }

    /// `c zeta^e`.
    pub(crate) fn monomial(&self, c: i64, e: u64) -> Vec<i64> {
        let mut v = self.zero();
        v[e as usize % self.k] = c;
        v
    }

    pub(crate) fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.iter().enumerate().filter(|(_, &y)| y != 0) {
                out[(i + j) % self.k] += x * y;
            }
        }
        out
    }

    /// Complex conjugation `zeta^e -> zeta^-e`.
    pub(crate) fn conj(&self, a: &[i64]) -> Vec<i64> {
        (0..self.k).map(|i| a[(self.k - i) % self.k]).collect()
    }

    pub(crate) fn is_zero(&self, a: &[i64]) -> bool {
        let mut r = a.to_vec();
        let d = self.phi.len() - 1;
        for i in (d..r.len()).rev() {
            let c = r[i];
            if c != 0 {
                for (j, &p) in self.phi.iter().enumerate() {
                    r[i - d + j] -= c * p;
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }
}

/// Elements of a monomial algebra with coefficients in `Z[zeta_K]`.
#[derive(Clone, Debug)]
pub(crate) struct ExactAlgebra<'a> {
    pub(crate) ring: CyclotomicRing,
    pub(crate) algebra: &'a MonomialStarAlgebra,
}

pub(crate) type Element = Vec<Vec<i64>>;

impl<'a> ExactAlgebra<'a> {
    pub(crate) fn new(algebra: &'a MonomialStarAlgebra, k: u64) -> Result<Self, AlgError> {
        if !k.is_multiple_of(algebra.modulus()) {
            return Err(AlgError::Incompatible("scalar field is too small for the algebra".into()));
        }
        Ok(ExactAlgebra { ring: CyclotomicRing::new(k as usize), algebra })
    }

    fn k(&self) -> u64 {
        self.ring.k as u64
    }

    pub(crate) fn zero(&self) -> Element {
        vec![self.ring.zero(); self.algebra.dim()]
    }

    /// `c zeta^e delta_a`.
    pub(crate) fn basis(&self, a: usize, c: i64, e: u64) -> Element {
        let mut x = self.zero();
        x[a] = self.ring.monomial(c, e);
        x
    }

    pub(crate) fn add(&self, x: &Element, y: &Element) -> Element {
        x.iter().zip(y).map(|(a, b)| a.iter().zip(b).map(|(p, q)| p + q).collect()).collect()
    }

    pub(crate) fn scale(&self, x: &Element, c: &[i64]) -> Element {
        x.iter().map(|a| self.ring.mul(a, c)).collect()
    }

    pub(crate) fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = self.zero();
        let m = self.algebra.modulus();
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| v.iter().any(|&c| c != 0)) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| v.iter().any(|&c| c != 0)) {
                if let Some((c, e)) = self.algebra.product(a, b) {
                    let coeff = self.ring.mul(&self.ring.mul(xa, yb), &self.ring.monomial(1, lift(e, m, self.k())));
                    for (o, v) in out[c].iter_mut().zip(coeff) {
                        *o += v;
                    }
                }
            }
        }
        out
    }

    pub(crate) fn star(&self, x: &Element) -> Element {
        let mut out = self.zero();
        let m = self.algebra.modulus();
        for (a, xa) in x.iter().enumerate() {
            let (s, j) = self.algebra.star(a);
            let coeff = self.ring.mul(&self.ring.conj(xa), &self.ring.monomial(1, lift(j, m, self.k())));
            for (o, v) in out[s].iter_mut().zip(coeff) {
                *o += v;
            }
        }
        out
    }

    pub(crate) fn apply(&self, map: &MonomialMap, x: &Element) -> Element {
        let mut out = self.zero();
        for (a, xa) in x.iter().enumerate() {
            let (t, e) = map.apply(a);
            let coeff = self.ring.mul(xa, &self.ring.monomial(1, lift(e, map.modulus, self.k())));
            for (o, v) in out[t].iter_mut().zip(coeff) {
                *o += v;
            }
        }
        out
    }

    pub(crate) fn equal(&self, x: &Element, y: &Element) -> bool {
        x.iter().zip(y).all(|(a, b)| self.ring.is_zero(&a.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>()))
    }

    pub(crate) fn is_zero(&self, x: &Element) -> bool {
        x.iter().all(|a| self.ring.is_zero(a))
    }
}

/// `C[E]` decomposed along the central idempotents `p_chi`, `chi` in `N^`.
#[derive(Clone, Debug)]
pub struct ExtensionAlgebra {
    pub extension: CentralExtension,
    /// `C[E]` with basis `E`.
    pub algebra: MonomialStarAlgebra,
    /// Fiber `chi` is `C[G, chi o eta]`, with the dual action of `G_ab^`.
    pub fibered: FiberedAlgebra,
    /// The dual action of `G_ab^` on `C[E]` through `E -> G -> G_ab`.
    pub dual_action: Vec<MonomialMap>,
}

impl ExtensionAlgebra {
    /// For `x = iota(n) c(s)`: `delta_x p_chi` corresponds to `zeta^{<chi,n>} delta_s`.
    /// Returns `(s, <chi, n>)` with the exponent modulo `exp(N)`.
    pub fn fiber_map(&self, chi: usize, x: usize) -> (usize, u64) {
        let n = self.extension.kernel();
        let (ni, s) = self.extension.split(x);
        (s, n.pairing(&n.coords(chi), &n.coords(ni)))
    }
}

/// Builds `C[E]`, the idempotents `p_chi = |N|^-1 sum_n conj(chi(n)) delta_iota(n)`,
/// and verifies exactly that they are central, orthogonal, self-adjoint and
/// sum to one, and that `delta_{c(s) iota(n)} p_chi -> chi(n) delta_s` is a
/// `*`-isomorphism of each corner onto `C[G, chi o eta]` intertwining the dual
/// actions.
pub fn group_algebra_of_extension(ext: &CentralExtension) -> Result<ExtensionAlgebra, AlgError> {
    let e = ext.total();
    let g = ext.base();
    let n = ext.kernel();
    let ab = grp::abelianization(g);
    let lam = &ab.structure;
    let algebra = group_algebra(e);
    let k = lcm(n.exponent(), lam.exponent())?;
    let ring = ExactAlgebra::new(&algebra, k)?;
    let nn = n.order() as i64;
    let to_k_n = |v: u64| lift(v, n.exponent(), k);
    let eta = ext.cocycle();
    let fail = |m: String| Err(AlgError::Structure(m));

    let q: Vec<Vec<u64>> = e.elements().map(|x| lam.coords(ab.hom.apply(ext.projection().apply(x)))).collect();
    let dual: Vec<MonomialMap> = (0..lam.order())
        .map(|gamma| {
            let gc = lam.coords(gamma);
            MonomialMap {
                target: e.elements().collect(),
                exponent: q.iter().map(|qx| (lam.exponent() - lam.pairing(&gc, qx)) % lam.exponent()).collect(),
                modulus: lam.exponent(),
            }
        })
        .collect();
    for act in &dual {
        act.check_star_iso(&algebra, &algebra)?;
    }

    // |N| p_chi
    let p: Vec<Element> = (0..n.order())
        .map(|chi| {
            let c = n.coords(chi);
            let mut x = ring.zero();
            for ni in 0..n.order() {
                let v = n.pairing(&c, &n.coords(ni));
                x[ext.iota().apply(ni)] = ring.ring.monomial(1, (k - to_k_n(v)) % k);
            }
            x
        })
        .collect();
    let mut sum = ring.zero();
    for (chi, pc) in p.iter().enumerate() {
        if !ring.equal(&ring.star(pc), pc) {
            return fail(format!("p_{chi} is not self-adjoint"));
        }
        for x in e.elements() {
            let d = ring.basis(x, 1, 0);
            if !ring.equal(&ring.mul(&d, pc), &ring.mul(pc, &d)) {
                return fail(format!("p_{chi} does not commute with element {x}"));
            }
        }
        for (chi2, pc2) in p.iter().enumerate() {
            let prod = ring.mul(pc, pc2);
            let expect = if chi == chi2 { ring.scale(pc, &ring.ring.monomial(nn, 0)) } else { ring.zero() };
            if !ring.equal(&prod, &expect) {
                return fail(format!("p_{chi} p_{chi2} has the wrong value"));
            }
        }
        for act in &dual {
            if !ring.equal(&ring.apply(act, pc), pc) {
                return fail(format!("p_{chi} is not fixed by the dual action"));
            }
        }
        sum = ring.add(&sum, pc);
    }
    if !ring.equal(&sum, &ring.basis(0, nn, 0)) {
        return fail("the idempotents do not sum to one".into());
    }

    // corners: b_s = delta_c(s) |N| p_chi
    let c = ext.section();
    for (chi, pc) in p.iter().enumerate() {
        let cc = n.coords(chi);
        let b: Vec<Element> = g.elements().map(|s| ring.mul(&ring.basis(c[s], 1, 0), pc)).collect();
        for (s, bs) in b.iter().enumerate() {
            if ring.is_zero(bs) {
                return fail(format!("corner {chi} element {s} vanishes"));
            }
            for t in g.elements() {
                let w = to_k_n(n.pairing(&cc, &eta.get(s, t)));
                let expect = ring.scale(&b[g.mul(s, t)], &ring.ring.monomial(nn, w));
                if !ring.equal(&ring.mul(bs, &b[t]), &expect) {
                    return fail(format!("corner {chi}: product of {s} and {t} differs from the twisted product"));
                }
            }
            let si = g.inv(s);
            let w = to_k_n(n.pairing(&cc, &eta.get(s, si)));
            if !ring.equal(&ring.star(bs), &ring.scale(&b[si], &ring.ring.monomial(1, (k - w) % k))) {
                return fail(format!("corner {chi}: involution differs at {s}"));
            }
            let gc_s = lam.coords(ab.hom.apply(s));
            for (gamma, act) in dual.iter().enumerate() {
                let w = lift(lam.pairing(&lam.coords(gamma), &gc_s), lam.exponent(), k);
                if !ring.equal(&ring.apply(act, bs), &ring.scale(bs, &ring.ring.monomial(1, (k - w) % k))) {
                    return fail(format!("corner {chi}: dual action differs at {s}"));
                }
            }
        }
        for x in e.elements() {
            let (ni, s) = ext.split(x);
            let w = to_k_n(n.pairing(&cc, &n.coords(ni)));
            let lhs = ring.mul(&ring.basis(x, 1, 0), pc);
            if !ring.equal(&lhs, &ring.scale(&b[s], &ring.ring.monomial(1, w))) {
                return fail(format!("corner {chi}: element {x} is not mapped to its twisted basis element"));
            }
        }
    }
    if n.order() * g.order() != e.order() {
        return fail("dimension ledger |E| = |N| |G| fails".into());
    }

    let fibered = crossed_product(&eta.over_dual())?.algebra;
    Ok(ExtensionAlgebra { extension: ext.clone(), algebra, fibered, dual_action: dual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ext::{extension_from_cocycle, GroupCocycle};
    use crate::grp::{make_abelian, AbelianGroup, GroupHom};

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        // 1 + zeta + zeta^2 = 0 for K = 3
        let r = CyclotomicRing::new(3);
        assert!(r.is_zero(&[1, 1, 1]));
        assert!(!r.is_zero(&[1, 1, 0]));
    }

    #[test]
    fn z4_over_z2() {
        let z4 = catalog::cyclic(4);
        let z2 = catalog::cyclic(2);
        let n = AbelianGroup::new(&[2]).unwrap();
        let iota = GroupHom::new(n.to_group(), z4.clone(), vec![0, 2]).unwrap();
        let p = GroupHom::new(z4.clone(), z2, vec![0, 1, 0, 1]).unwrap();
        let ext = CentralExtension::with_canonical_section(n, p.target().clone(), z4, iota, p).unwrap();
        let ea = group_algebra_of_extension(&ext).unwrap();
        assert_eq!(ea.fibered.base_size(), 2);
        assert_eq!(ea.fibered.fiber(1).twisting().unwrap().get2(0, 1, 1), 1);
        assert_eq!(ea.fiber_map(1, 3), (1, 1));
    }

    #[test]
    fn heisenberg_corners() {
        let g = make_abelian(&[3, 3]).unwrap();
        let ab = g.abelian_structure().unwrap().clone();
        let n = AbelianGroup::new(&[3]).unwrap();
        let eta = GroupCocycle::from_fn(&g, &n, |s, t| vec![ab.coords(s)[0] * ab.coords(t)[1] % 3]);
        let ext = extension_from_cocycle(&eta).unwrap();
        let ea = group_algebra_of_extension(&ext).unwrap();
        assert_eq!(ea.algebra.dim(), 27);
        assert_eq!(ea.fibered.dim(), 27);
    }
}
