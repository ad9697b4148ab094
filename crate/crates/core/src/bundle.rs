//! The torsor bundle `Z_u = {(f, x) : df = u(x)}` over a finite base.
//!
//! Each fiber is the full solution set of `df = u(x)` over `Z_{M |G|}`, a
//! free transitive `G_ab^`-set. Points are stored at index `x * |F| + gamma`
//! as `f_x + gamma` for a fixed solution `f_x`.

use std::collections::HashMap;

use thiserror::Error;

use crate::coh::{self, Cochain, CohError};
use crate::ext::{self, CentralExtension, ExtError};
use crate::grp::{self, AbelianGroup, Abelianization, FiniteGroup};
use crate::zmod;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error(transparent)]
    Coh(#[from] CohError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error("cocycle is not trivial at base points {0:?}")]
    NotPointwiseTrivial(Vec<usize>),
    #[error("bundles have different groups or bases")]
    Incompatible,
    #[error("bundle check failed: {0}")]
    Invalid(String),
}

fn lift_pt(e: CohError) -> BundleError {
    match e {
        CohError::NotPointwiseTrivial(xs) => BundleError::NotPointwiseTrivial(xs),
        other => other.into(),
    }
}

/// Canonical key of a circle-valued function: exponents rescaled to modulus `l`.
fn key(values: &[u64], m: u64, l: u64) -> Vec<u64> {
    values.iter().map(|&v| v * (l / m)).collect()
}

#[derive(Clone, Debug)]
pub struct TorsorBundle {
    cocycle: Cochain,
    modulus: u64,
    abelianization: Abelianization,
    /// `gamma o q` as exponents modulo `M'`, per character index.
    characters: Vec<Vec<u64>>,
    points: Vec<Vec<u64>>,
}

/// Builds `Z_u` from a pointwise trivial cocycle `u` over `X`.
pub fn build_zu(u: &Cochain) -> Result<TorsorBundle, BundleError> {
    let witness = coh::pointwise_trivial(u).map_err(lift_pt)?;
    let g = u.group();
    let m = witness.modulus();
    let ab = grp::abelianization(g);
    let fiber = ab.structure.clone();
    let scale = m / fiber.exponent();
    let characters: Vec<Vec<u64>> = (0..fiber.order())
        .map(|gamma| {
            let gc = fiber.coords(gamma);
            g.elements().map(|s| fiber.pairing(&gc, &fiber.coords(ab.hom.apply(s))) * scale).collect()
        })
        .collect();
    let mut points = Vec::with_capacity(u.base_size() * fiber.order());
    for x in 0..u.base_size() {
        let fx = witness.values_at(x);
        for chi in &characters {
            points.push(fx.iter().zip(chi).map(|(&a, &b)| (a + b) % m).collect());
        }
    }
    let bundle = TorsorBundle { cocycle: u.clone(), modulus: m, abelianization: ab, characters, points };
    bundle.verify()?;
    Ok(bundle)
}

impl TorsorBundle {
    pub fn group(&self) -> &FiniteGroup {
        self.cocycle.group()
    }

    pub fn cocycle(&self) -> &Cochain {
        &self.cocycle
    }

    /// `M' = M |G|`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base_size(&self) -> usize {
        self.cocycle.base_size()
    }

    /// The acting group `G_ab^`.
    pub fn fiber_group(&self) -> &AbelianGroup {
        &self.abelianization.structure
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.abelianization
    }

    pub fn fiber_size(&self) -> usize {
        self.characters.len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The cochain `f` of point `i`.
    pub fn point(&self, i: usize) -> &[u64] {
        &self.points[i]
    }

    pub fn project(&self, i: usize) -> usize {
        i / self.fiber_size()
    }

    pub fn index(&self, x: usize, gamma: usize) -> usize {
        x * self.fiber_size() + gamma
    }

    /// `gamma . (f, x) = (f + gamma, x)`.
    pub fn act(&self, gamma: usize, i: usize) -> usize {
        let fs = self.fiber_size();
        let ab = self.fiber_group();
        let (x, cur) = (i / fs, i % fs);
        x * fs + ab.index_of(&ab.add(&ab.coords(cur), &ab.coords(gamma)))
    }

    /// `gamma o q` as an exponent cochain modulo `M'`.
    pub fn character_cochain(&self, gamma: usize) -> &[u64] {
        &self.characters[gamma]
    }

    /// Looks up the point with the given cochain over `x` (any modulus).
    pub fn find(&self, x: usize, f: &[u64], modulus: u64) -> Option<usize> {
        let l = zmod::lcm(modulus, self.modulus)?;
        let target = key(f, modulus, l);
        (0..self.fiber_size())
            .map(|gamma| self.index(x, gamma))
            .find(|&i| key(&self.points[i], self.modulus, l) == target)
    }

    /// Re-checks the defining equations, freeness, transitivity and completeness.
    pub fn verify(&self) -> Result<(), BundleError> {
        let g = self.group();
        let n = g.order();
        let m = self.modulus;
        let u = self.cocycle.rescale(m)?;
        for (i, f) in self.points.iter().enumerate() {
            let x = self.project(i);
            for s in 0..n {
                for t in 0..n {
                    let df = (f[s] + f[t] + m - f[g.mul(s, t)]) % m;
                    if df != u.get2(x, s, t) {
                        return Err(BundleError::Invalid(format!("point {i} violates df = u(x) at ({s},{t})")));
                    }
                }
            }
        }
        let fs = self.fiber_size();
        for x in 0..self.base_size() {
            let mut seen = HashMap::new();
            for gamma in 0..fs {
                if let Some(prev) = seen.insert(&self.points[x * fs + gamma], gamma) {
                    return Err(BundleError::Invalid(format!("characters {prev} and {gamma} act equally over {x}")));
                }
            }
        }
        // the fiber is the whole solution set: |Hom(G, Z_M')| = |G_ab^|
        let homs = coh::homomorphism_count(g, m);
        if homs != fs as u128 {
            return Err(BundleError::Invalid(format!("fiber has {fs} points but {homs} solutions exist")));
        }
        Ok(())
    }
}

/// `Z_u * Z_v` with its verified identification with `Z_{uv}`.
#[derive(Clone, Debug)]
pub struct BundleProduct {
    pub product: TorsorBundle,
    /// Class `[f_x + gamma, f'_x]` (index `x * |F| + gamma`) to its point of `Z_{uv}`.
    pub map: Vec<usize>,
}

pub fn bundle_product(zu: &TorsorBundle, zv: &TorsorBundle) -> Result<BundleProduct, BundleError> {
    if zu.group() != zv.group() || zu.base_size() != zv.base_size() {
        return Err(BundleError::Incompatible);
    }
    let product = build_zu(&zu.cocycle.multiply(&zv.cocycle)?)?;
    let l = zmod::lcm(zu.modulus, zv.modulus).ok_or(CohError::ModulusOverflow(zu.modulus as u128 * zv.modulus as u128))?;
    let fs = zu.fiber_size();
    let sum = |a: usize, b: usize| -> Vec<u64> {
        key(&zu.points[a], zu.modulus, l)
            .iter()
            .zip(key(&zv.points[b], zv.modulus, l))
            .map(|(&p, q)| (p + q) % l)
            .collect()
    };
    let mut map = Vec::with_capacity(zu.len());
    for x in 0..zu.base_size() {
        for gamma in 0..fs {
            let f = sum(zu.index(x, gamma), zv.index(x, 0));
            map.push(product.find(x, &f, l).ok_or_else(|| BundleError::Invalid("sum is not a point of Z_uv".into()))?);
        }
    }
    // well defined on antidiagonal classes, bijective, equivariant
    let ab = zu.fiber_group();
    for x in 0..zu.base_size() {
        for g1 in 0..fs {
            for g2 in 0..fs {
                let class = ab.index_of(&ab.add(&ab.coords(g1), &ab.coords(g2)));
                let f = sum(zu.index(x, g1), zv.index(x, g2));
                if product.find(x, &f, l) != Some(map[x * fs + class]) {
                    return Err(BundleError::Invalid("product map is not constant on classes".into()));
                }
            }
        }
    }
    let mut hit = vec![false; product.len()];
    for &p in &map {
        hit[p] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(BundleError::Invalid("product map is not bijective".into()));
    }
    for i in 0..map.len() {
        for gamma in 0..fs {
            if map[zu.act(gamma, i)] != product.act(gamma, map[i]) {
                return Err(BundleError::Invalid("product map is not equivariant".into()));
            }
        }
    }
    Ok(BundleProduct { product, map })
}

/// A section of `Z_u` and the global coboundary witness it defines.
#[derive(Clone, Debug)]
pub struct Trivialization {
    pub section: Vec<usize>,
    /// `g` with `dg = u` at every base point.
    pub witness: Cochain,
}

pub fn trivialization(zu: &TorsorBundle) -> Result<Trivialization, BundleError> {
    let section: Vec<usize> = (0..zu.base_size()).map(|x| zu.index(x, 0)).collect();
    trivialization_from_section(zu, section)
}

/// Converts any section into a coboundary witness.
pub fn trivialization_from_section(zu: &TorsorBundle, section: Vec<usize>) -> Result<Trivialization, BundleError> {
    if section.len() != zu.base_size() || section.iter().enumerate().any(|(x, &i)| i >= zu.len() || zu.project(i) != x) {
        return Err(BundleError::Invalid("not a section".into()));
    }
    let values: Vec<u64> = section.iter().flat_map(|&i| zu.points[i].clone()).collect();
    let witness = Cochain::from_values(zu.group(), 1, zu.base_size(), zu.modulus, values)?;
    if !witness.coboundary()?.same_values(&zu.cocycle) {
        return Err(BundleError::Invalid("section does not trivialize u".into()));
    }
    Ok(Trivialization { section, witness })
}

/// The section of `Z_u` through the values of a witness `g` with `dg = u`.
pub fn section_from_witness(zu: &TorsorBundle, g: &Cochain) -> Result<Vec<usize>, BundleError> {
    if g.base_size() != zu.base_size() || g.degree() != 1 {
        return Err(BundleError::Incompatible);
    }
    (0..zu.base_size())
        .map(|x| {
            zu.find(x, g.values_at(x), g.modulus())
                .ok_or_else(|| BundleError::Invalid(format!("witness value at {x} is not a point")))
        })
        .collect()
}

/// `(f, x) -> (g(x) + f, x)` from `Z_u` to `Z_v`, when `v = dg + u`.
///
/// Without a witness one is searched for; `None` means `u` and `v` are not
/// cohomologous.
pub fn equivariant_bundle_iso(
    b1: &TorsorBundle,
    b2: &TorsorBundle,
    witness: Option<&Cochain>,
) -> Result<Option<Vec<usize>>, BundleError> {
    if b1.group() != b2.group() || b1.base_size() != b2.base_size() {
        return Err(BundleError::Incompatible);
    }
    let diff = b2.cocycle.divide(&b1.cocycle)?;
    let g = match witness {
        Some(g) => g.clone(),
        None => match coh::is_coboundary_circle(&diff)? {
            Some(g) => g,
            None => return Ok(None),
        },
    };
    if !g.coboundary()?.same_values(&diff) {
        return Err(BundleError::Invalid("witness does not satisfy v = dg + u".into()));
    }
    let l = zmod::lcm(g.modulus(), b1.modulus).ok_or(CohError::ModulusOverflow(g.modulus() as u128 * b1.modulus as u128))?;
    let mut map = Vec::with_capacity(b1.len());
    for i in 0..b1.len() {
        let x = b1.project(i);
        let f: Vec<u64> = key(g.values_at(x), g.modulus(), l)
            .iter()
            .zip(key(&b1.points[i], b1.modulus, l))
            .map(|(&a, b)| (a + b) % l)
            .collect();
        map.push(b2.find(x, &f, l).ok_or_else(|| BundleError::Invalid("shifted point missing".into()))?);
    }
    for (i, &j) in map.iter().enumerate() {
        for gamma in 0..b1.fiber_size() {
            if map[b1.act(gamma, i)] != b2.act(gamma, j) {
                return Err(BundleError::Invalid("shift map is not equivariant".into()));
            }
        }
    }
    Ok(Some(map))
}

/// `Psi: Z_eta -> E_ab^` for a pointwise trivial extension.
#[derive(Clone, Debug)]
pub struct PsiIso {
    /// `Z_eta` over `X = N^`.
    pub bundle: TorsorBundle,
    pub e_ab: Abelianization,
    /// Point index to character of `E_ab` (index in `e_ab.structure`).
    pub map: Vec<usize>,
    pub inverse: Vec<usize>,
}

/// `Psi(f, chi)(c(s) iota(n)) = f(s) + <chi, n>`, with every property checked.
pub fn psi_iso(ext: &CentralExtension) -> Result<PsiIso, BundleError> {
    let eta = ext.cocycle().over_dual();
    let bundle = build_zu(&eta)?;
    let e = ext.total();
    let n = ext.kernel();
    let e_ab = grp::abelianization(e);
    let lam = &e_ab.structure;
    let mp = bundle.modulus;
    let k = zmod::lcm(mp, lam.exponent()).ok_or(CohError::ModulusOverflow(mp as u128 * lam.exponent() as u128))?;
    let k = zmod::lcm(k, n.exponent()).ok_or(CohError::ModulusOverflow(k as u128))?;
    let split: Vec<(usize, usize)> = e.elements().map(|x| ext.split(x)).collect();
    // characters of E_ab as functions on E with modulus K
    let mut table: HashMap<Vec<u64>, usize> = HashMap::new();
    for l in 0..lam.order() {
        let lc = lam.coords(l);
        let f: Vec<u64> = e
            .elements()
            .map(|x| lam.pairing(&lc, &lam.coords(e_ab.hom.apply(x))) * (k / lam.exponent()))
            .collect();
        table.insert(f, l);
    }
    let mut map = Vec::with_capacity(bundle.len());
    for i in 0..bundle.len() {
        let chi = n.coords(bundle.project(i));
        let f = bundle.point(i);
        let psi: Vec<u64> = split
            .iter()
            .map(|&(ni, s)| (f[s] * (k / mp) + n.pairing(&chi, &n.coords(ni)) * (k / n.exponent())) % k)
            .collect();
        for x in e.elements() {
            for y in e.elements() {
                if psi[e.mul(x, y)] != (psi[x] + psi[y]) % k {
                    return Err(BundleError::Invalid(format!("Psi of point {i} is not a character")));
                }
            }
        }
        let l = *table.get(&psi).ok_or_else(|| BundleError::Invalid("Psi misses E_ab^".into()))?;
        map.push(l);
    }
    let mut inverse = vec![usize::MAX; lam.order()];
    for (i, &l) in map.iter().enumerate() {
        if inverse[l] != usize::MAX {
            return Err(BundleError::Invalid("Psi is not injective".into()));
        }
        inverse[l] = i;
    }
    if inverse.contains(&usize::MAX) {
        return Err(BundleError::Invalid("Psi is not surjective".into()));
    }
    // equivariance: gamma acts on E_ab^ through p
    let g_ab = bundle.abelianization().clone();
    let to_gab = ext.projection().then(&g_ab.hom);
    let inflate_chars = grp::dual_hom(&e_ab_to(&e_ab, &to_gab)).map_err(ExtError::from)?;
    let gamma_on_eab: Vec<usize> = (0..g_ab.structure.order()).map(|gamma| inflate_chars.apply(gamma)).collect();
    for i in 0..bundle.len() {
        for gamma in 0..bundle.fiber_size() {
            let lhs = map[bundle.act(gamma, i)];
            let rhs = lam.index_of(&lam.add(&lam.coords(map[i]), &lam.coords(gamma_on_eab[gamma])));
            if lhs != rhs {
                return Err(BundleError::Invalid("Psi is not equivariant".into()));
            }
        }
    }
    // restriction to N recovers the base point
    let res = grp::dual_hom(&ext.iota().then(&e_ab.hom)).map_err(ExtError::from)?;
    for (i, &l) in map.iter().enumerate() {
        if res.apply(l) != bundle.project(i) {
            return Err(BundleError::Invalid("Psi(f, chi) does not restrict to chi".into()));
        }
    }
    Ok(PsiIso { bundle, e_ab, map, inverse })
}

/// `E_ab -> G_ab` induced by a homomorphism `E -> G_ab`.
fn e_ab_to(e_ab: &Abelianization, f: &grp::GroupHom) -> grp::GroupHom {
    let images = (0..e_ab.group.order()).map(|y| f.apply(e_ab.section[y])).collect();
    grp::GroupHom::new_trusted(e_ab.group.clone(), f.target().clone(), images)
}

/// `Psi` for an extension that must be pointwise trivial.
pub fn psi_iso_checked(ext: &CentralExtension) -> Result<PsiIso, BundleError> {
    let check = ext::is_pointwise_trivial_extension(ext)?;
    if !check.pointwise_trivial {
        let failing = check.extensions.iter().enumerate().filter(|(_, e)| e.is_none()).map(|(i, _)| i).collect();
        return Err(BundleError::NotPointwiseTrivial(failing));
    }
    psi_iso(ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{make_abelian, GroupHom};

    #[test]
    fn order_two_fiber() {
        let g = make_abelian(&[2]).unwrap();
        let u = Cochain::from_values(&g, 2, 1, 2, vec![0, 0, 0, 1]).unwrap();
        let zu = build_zu(&u).unwrap();
        assert_eq!(zu.len(), 2);
        let mut vals: Vec<u64> = (0..2).map(|i| zu.point(i)[1]).collect();
        vals.sort();
        assert_eq!(vals, vec![1, 3]);
    }

    #[test]
    fn trivial_cocycle_gives_trivial_bundle() {
        let g = make_abelian(&[2, 2]).unwrap();
        let u = Cochain::zero(&g, 2, 3, 2).unwrap();
        let zu = build_zu(&u).unwrap();
        assert_eq!(zu.len(), 12);
        let t = trivialization(&zu).unwrap();
        assert!(t.witness.is_zero());
    }

    #[test]
    fn product_with_inverse_is_trivial() {
        let g = make_abelian(&[4]).unwrap();
        let u = Cochain::from_fn(&g, 2, 2, 4, |x, a| ((a[0] + a[1]) / 4 * (x + 1)) as i64).unwrap();
        let zu = build_zu(&u).unwrap();
        let zinv = build_zu(&u.invert()).unwrap();
        let prod = bundle_product(&zu, &zinv).unwrap();
        assert!(prod.product.cocycle().is_zero());
    }

    #[test]
    fn psi_for_z4_over_z2() {
        let z4 = make_abelian(&[4]).unwrap();
        let z2 = make_abelian(&[2]).unwrap();
        let iota = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let p = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let ext = CentralExtension::new(AbelianGroup::new(&[2]).unwrap(), z2, z4, iota, p, vec![0, 1]).unwrap();
        let psi = psi_iso_checked(&ext).unwrap();
        assert_eq!(psi.bundle.len(), 4);
        assert_eq!(psi.e_ab.structure.order(), 4);
    }
}
