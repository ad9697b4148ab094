//! Artin-Wedderburn block structure: exact block counts, seeded numerical
//! block sizes and the permutation action of automorphisms on blocks.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AlgError, FiberedAlgebra, MonomialMap, MonomialStarAlgebra};
use crate::grp::AbelianGroup;

type C64 = Complex<f64>;

const ATTEMPTS: usize = 3;

/// Seed and eigenvalue clustering tolerance for the numerical path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericSettings {
    pub seed: u64,
    pub tol: f64,
}

impl Default for NumericSettings {
    fn default() -> Self {
        NumericSettings { seed: 0, tol: 1e-8 }
    }
}

impl NumericSettings {
    /// Derived settings for an independent sub-computation.
    pub fn derive(&self, stream: u64) -> NumericSettings {
        let mixed = self.seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        NumericSettings { seed: mixed, tol: self.tol }
    }
}

/// Sorted matrix block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockProfile(Vec<usize>);

impl BlockProfile {
    pub fn new(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable();
        BlockProfile(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn count(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(|d| d * d).sum()
    }
}

/// Blocks of one algebra: sizes and central projections in the monomial basis.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub sizes: Vec<usize>,
    pub projections: Vec<Vec<C64>>,
    pub exact_count: usize,
    /// Random elements tried before the numerical and exact counts agreed.
    pub attempts: usize,
}

impl BlockDecomposition {
    pub fn profile(&self) -> BlockProfile {
        BlockProfile::new(self.sizes.clone())
    }

    /// The permutation of blocks induced by a monomial automorphism.
    pub fn permutation(&self, map: &MonomialMap) -> Result<Vec<usize>, AlgError> {
        let mut perm = Vec::with_capacity(self.projections.len());
        for p in &self.projections {
            let mut image = vec![C64::new(0.0, 0.0); p.len()];
            for (a, &c) in p.iter().enumerate() {
                let (t, e) = map.apply(a);
                image[t] += c * root(e, map.modulus);
            }
            let dist: Vec<f64> = self
                .projections
                .iter()
                .map(|q| q.iter().zip(&image).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt())
                .collect();
            let best = (0..dist.len()).min_by(|&i, &j| dist[i].total_cmp(&dist[j])).expect("at least one block");
            if dist[best] > 1e-6 || dist.iter().enumerate().any(|(i, &d)| i != best && d < 1e-3) {
                return Err(AlgError::Structure("automorphism does not permute the central projections".into()));
            }
            perm.push(best);
        }
        let mut seen = vec![false; perm.len()];
        if perm.iter().any(|&b| std::mem::replace(&mut seen[b], true)) {
            return Err(AlgError::Structure("induced block map is not a permutation".into()));
        }
        Ok(perm)
    }
}

fn root(e: u64, m: u64) -> C64 {
    let theta = 2.0 * std::f64::consts::PI * ((e % m) as f64) / (m as f64);
    C64::new(theta.cos(), theta.sin())
}

/// Left-regular image of `sum_a c_a delta_a`.
fn left_regular(a: &MonomialStarAlgebra, coeffs: &[C64]) -> DMatrix<C64> {
    let d = a.dim();
    let m = a.modulus();
    let mut out = DMatrix::zeros(d, d);
    for (x, &c) in coeffs.iter().enumerate() {
        for b in 0..d {
            if let Some((t, e)) = a.product(x, b) {
                out[(t, b)] += c * root(e, m);
            }
        }
    }
    out
}

/// Groups sorted eigenvalues whose consecutive gaps are below `tol * scale`.
fn clusters(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for i in order {
        if values[i] - prev > tol * scale || out.is_empty() {
            out.push(Vec::new());
        }
        out.last_mut().unwrap().push(i);
        prev = values[i];
    }
    out
}

fn exact_sqrt(m: usize) -> Option<usize> {
    let r = (m as f64).sqrt().round() as usize;
    (r * r == m).then_some(r)
}

/// One numerical attempt; `None` when the random element was too degenerate.
fn attempt(a: &MonomialStarAlgebra, rng: &mut ChaCha8Rng, tol: f64) -> Option<(Vec<usize>, Vec<Vec<C64>>)> {
    let d = a.dim();
    let m = a.modulus();
    let coeffs: Vec<C64> = (0..d).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let l = left_regular(a, &coeffs);
    let mut h = &l + l.adjoint();
    let norm = h.norm();
    if norm == 0.0 {
        return None;
    }
    h /= C64::new(norm, 0.0);
    // z = sum_a |S(a)|^-1 delta_a h delta_a^*, a central element
    let sizes: Vec<usize> = a.summands().iter().map(|s| s.len()).collect();
    let mut z = DMatrix::<C64>::zeros(d, d);
    for x in 0..d {
        let w = 1.0 / sizes[a.summand_of(x)] as f64;
        let cols: Vec<Option<(usize, C64)>> = (0..d).map(|b| a.product(x, b).map(|(t, e)| (t, root(e, m)))).collect();
        for (b, cb) in cols.iter().enumerate() {
            let Some((tb, zb)) = cb else { continue };
            for (b2, cb2) in cols.iter().enumerate() {
                let Some((tb2, zb2)) = cb2 else { continue };
                z[(*tb, *tb2)] += zb * h[(b, b2)] * zb2.conj() * w;
            }
        }
    }
    let eig = z.clone().symmetric_eigen();
    let groups = clusters(eig.eigenvalues.as_slice(), tol);
    let mut unit = vec![C64::new(0.0, 0.0); d];
    for &(u, k) in a.units() {
        unit[u] = root(k, m);
    }
    let mut sizes = Vec::with_capacity(groups.len());
    let mut projections = Vec::with_capacity(groups.len());
    for group in groups {
        let size = exact_sqrt(group.len())?;
        let q = DMatrix::from_columns(&group.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
        // h restricted to a block is (d x d Hermitian) (x) 1_d: d eigenvalues, each d times
        let hr = q.adjoint() * &h * &q;
        let inner = clusters(hr.symmetric_eigen().eigenvalues.as_slice(), tol);
        if inner.len() != size || inner.iter().any(|c| c.len() != size) {
            return None;
        }
        let u = nalgebra::DVector::from_vec(unit.clone());
        let p = &q * (q.adjoint() * u);
        projections.push(p.iter().copied().collect());
        sizes.push(size);
    }
    Some((sizes, projections))
}

/// Blocks of `a`, cross-checking the numerical sizes against the exact
/// regular-class count.
pub fn block_decomposition(a: &MonomialStarAlgebra, settings: &NumericSettings) -> Result<BlockDecomposition, AlgError> {
    let exact = a.regular_class_count();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut last = Vec::new();
    for attempts in 1..=ATTEMPTS {
        if let Some((sizes, projections)) = attempt(a, &mut rng, settings.tol) {
            let dim: usize = sizes.iter().map(|s| s * s).sum();
            if sizes.len() == exact && dim == a.dim() {
                return Ok(BlockDecomposition { sizes, projections, exact_count: exact, attempts });
            }
            last = sizes;
        }
    }
    last.sort_unstable();
    Err(AlgError::ProfileInconsistent { exact, numerical: last, attempts: ATTEMPTS })
}

pub fn block_profile(a: &MonomialStarAlgebra, settings: &NumericSettings) -> Result<BlockProfile, AlgError> {
    Ok(block_decomposition(a, settings)?.profile())
}

/// An orbit of blocks under the acting group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Orbit {
    pub block_size: usize,
    pub stabilizer: Vec<usize>,
    pub blocks: Vec<usize>,
}

/// Blocks of one fiber with the induced permutation action.
#[derive(Clone, Debug)]
pub struct FiberBlocks {
    pub sizes: Vec<usize>,
    pub exact_count: usize,
    /// `action[gamma][block]`.
    pub action: Vec<Vec<usize>>,
}

impl FiberBlocks {
    pub fn profile(&self) -> BlockProfile {
        BlockProfile::new(self.sizes.clone())
    }

    pub fn orbits(&self) -> Vec<Orbit> {
        let mut seen = vec![false; self.sizes.len()];
        let mut out = Vec::new();
        for b in 0..self.sizes.len() {
            if seen[b] {
                continue;
            }
            let mut blocks: Vec<usize> = self.action.iter().map(|p| p[b]).collect();
            blocks.sort_unstable();
            blocks.dedup();
            for &c in &blocks {
                seen[c] = true;
            }
            let stabilizer = (0..self.action.len()).filter(|&g| self.action[g][b] == b).collect();
            out.push(Orbit { block_size: self.sizes[b], stabilizer, blocks });
        }
        out
    }

    /// Orbit types `(block size, stabilizer)` with multiplicities, sorted.
    pub fn orbit_types(&self) -> Vec<(usize, Vec<usize>, usize)> {
        let mut types: Vec<(usize, Vec<usize>)> = self.orbits().into_iter().map(|o| (o.block_size, o.stabilizer)).collect();
        types.sort();
        let mut out: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        for (s, st) in types {
            match out.last_mut() {
                Some(last) if last.0 == s && last.1 == st => last.2 += 1,
                _ => out.push((s, st, 1)),
            }
        }
        out
    }
}

/// The block space of a fibered algebra as a set over the base with the
/// induced action.
#[derive(Clone, Debug)]
pub struct BlockSpace {
    pub acting: AbelianGroup,
    pub fibers: Vec<FiberBlocks>,
}

pub fn block_space(a: &FiberedAlgebra, settings: &NumericSettings) -> Result<BlockSpace, AlgError> {
    let mut fibers = Vec::with_capacity(a.base_size());
    for x in 0..a.base_size() {
        let dec = block_decomposition(a.fiber(x), &settings.derive(x as u64))?;
        let action = a.action(x).iter().map(|act| dec.permutation(act)).collect::<Result<Vec<_>, _>>()?;
        let lam = a.acting_group();
        for g1 in 0..lam.order() {
            for g2 in 0..lam.order() {
                let sum = lam.index_of(&lam.add(&lam.coords(g1), &lam.coords(g2)));
                if (0..dec.sizes.len()).any(|b| action[g1][action[g2][b]] != action[sum][b]) {
                    return Err(AlgError::Structure(format!("block action at {x} is not a group action")));
                }
            }
        }
        fibers.push(FiberBlocks { sizes: dec.sizes.clone(), exact_count: dec.exact_count, action });
    }
    Ok(BlockSpace { acting: a.acting_group().clone(), fibers })
}

/// An equivariant bijection `left -> right` of block sets, matching orbits
/// by stabilizer (and by block size when `preserve_sizes`).
pub fn equivariant_block_bijection(left: &FiberBlocks, right: &FiberBlocks, preserve_sizes: bool) -> Option<Vec<usize>> {
    if left.sizes.len() != right.sizes.len() || left.action.len() != right.action.len() {
        return None;
    }
    let key = |o: &Orbit| (if preserve_sizes { o.block_size } else { 0 }, o.stabilizer.clone());
    let mut available = right.orbits();
    let mut map = vec![usize::MAX; left.sizes.len()];
    for orbit in left.orbits() {
        let pos = available.iter().position(|o| key(o) == key(&orbit))?;
        let other = available.remove(pos);
        let (b, b2) = (orbit.blocks[0], other.blocks[0]);
        for g in 0..left.action.len() {
            map[left.action[g][b]] = right.action[g][b2];
        }
    }
    let equivariant = (0..left.action.len()).all(|g| (0..map.len()).all(|b| map[left.action[g][b]] == right.action[g][map[b]]));
    let mut seen = vec![false; map.len()];
    let injective = map.iter().all(|&t| t < seen.len() && !std::mem::replace(&mut seen[t], true));
    (equivariant && injective).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::{crossed_product, group_algebra, twisted_group_algebra};
    use crate::catalog;
    use crate::coh::Cochain;
    use crate::grp::make_abelian;

    fn profile(a: &MonomialStarAlgebra) -> Vec<usize> {
        block_profile(a, &NumericSettings::default()).unwrap().sizes().to_vec()
    }

    #[test]
    fn known_profiles() {
        assert_eq!(profile(&group_algebra(&catalog::cyclic(5))), vec![1; 5]);
        assert_eq!(profile(&group_algebra(&catalog::dihedral(4))), vec![1, 1, 1, 1, 2]);
        assert_eq!(profile(&group_algebra(&catalog::symmetric3())), vec![1, 1, 2]);
        let g = make_abelian(&[2, 2]).unwrap();
        let ab = g.abelian_structure().unwrap().clone();
        let omega = Cochain::from_fn(&g, 2, 1, 2, |_, a| (ab.coords(a[0])[0] * ab.coords(a[1])[1]) as i64).unwrap();
        assert_eq!(profile(&twisted_group_algebra(&omega).unwrap()), vec![2]);
        assert_eq!(profile(&group_algebra(&catalog::heisenberg(3))), [vec![1; 9], vec![3; 2]].concat());
    }

    #[test]
    fn dual_action_on_d4_blocks() {
        let d4 = catalog::dihedral(4);
        let u = Cochain::zero(&d4, 2, 1, 1).unwrap();
        let cp = crossed_product(&u).unwrap();
        let space = block_space(&cp.algebra, &NumericSettings::default()).unwrap();
        // G_ab^ = Z_2^2 permutes the four characters freely and fixes the 2-block
        let types = space.fibers[0].orbit_types();
        assert_eq!(types.len(), 2);
        assert_eq!(types[0], (1, vec![0], 1));
        assert_eq!(types[1], (2, vec![0, 1, 2, 3], 1));
        let bij = equivariant_block_bijection(&space.fibers[0], &space.fibers[0], true).unwrap();
        assert_eq!(bij.len(), 5);
    }

    #[test]
    fn settings_derive_differently() {
        let s = NumericSettings::default();
        assert_ne!(s.derive(0).seed, s.derive(1).seed);
    }
}
