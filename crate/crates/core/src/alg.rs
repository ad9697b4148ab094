//! Finite-dimensional twisted group algebras and central crossed products.
//!
//! Every algebra here has a basis of monomials `delta_a` with
//! `delta_a delta_b = zeta^{e(a,b)} delta_{c(a,b)}` (or zero), `zeta = exp(2 pi i / M)`.
//! Fibered algebras over a finite base are lists of such algebras together
//! with a monomial action of an abelian group on each fiber.

mod blocks;
mod exact;
mod verify;

use serde::Serialize;
use thiserror::Error;

use crate::bundle::{BundleError, TorsorBundle};
use crate::coh::{Cochain, CohError};
use crate::ext::ExtError;
use crate::grp::{self, AbelianGroup, Abelianization, FiniteGroup, GroupError};
use crate::zmod;

pub use blocks::{
    block_decomposition, block_profile, block_space, equivariant_block_bijection, BlockDecomposition,
    BlockProfile, BlockSpace, FiberBlocks, NumericSettings, Orbit,
};
pub use exact::{group_algebra_of_extension, ExtensionAlgebra};
pub use verify::{
    characters, verify_lem_pointwise, verify_prop_decom, verify_prop_decom1, verify_structure_theorem,
    Character, FiberComparison, LemPointwiseReport, Mismatch, PropDecomReport, StructureCase, StructureInput,
    StructureReport,
};

/// Product-table sentinel for `delta_a delta_b = 0`.
pub const ZERO: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coh(#[from] CohError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("structure constants: {0}")]
    Structure(String),
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("numerical profile {numerical:?} disagrees with the exact block count {exact} after {attempts} attempts")]
    ProfileInconsistent { exact: usize, numerical: Vec<usize>, attempts: usize },
    #[error("not a *-isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("not equivariant: {0}")]
    NotEquivariant(String),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("mismatch at base point {x} ({which}): left {left:?}, right {right:?}")]
    MismatchAt { x: usize, which: String, left: Vec<usize>, right: Vec<usize> },
}

fn lcm(a: u64, b: u64) -> Result<u64, AlgError> {
    zmod::lcm(a, b).ok_or(AlgError::Coh(CohError::ModulusOverflow(a as u128 * b as u128)))
}

/// `e` modulo `from`, re-expressed modulo `to` (`from | to`).
fn lift(e: u64, from: u64, to: u64) -> u64 {
    (e % from) * (to / from) % to
}

/// An algebra with a monomial basis and a monomial involution.
#[derive(Clone, Debug)]
pub struct MonomialStarAlgebra {
    labels: Vec<String>,
    modulus: u64,
    target: Vec<usize>,
    exponent: Vec<u64>,
    star_target: Vec<usize>,
    star_exponent: Vec<u64>,
    /// Summand index of each basis element.
    component: Vec<usize>,
    /// Unit of each summand as `zeta^k delta_a`.
    units: Vec<(usize, u64)>,
    /// Set when the basis is the group of a single twisted group algebra.
    twisting: Option<Cochain>,
}

impl MonomialStarAlgebra {
    /// Builds and exhaustively validates an algebra from its tables.
    pub fn new(
        labels: Vec<String>,
        modulus: u64,
        target: Vec<usize>,
        exponent: Vec<u64>,
        star_target: Vec<usize>,
        star_exponent: Vec<u64>,
    ) -> Result<Self, AlgError> {
        let d = labels.len();
        if modulus == 0 || target.len() != d * d || exponent.len() != d * d || star_target.len() != d || star_exponent.len() != d {
            return Err(AlgError::Structure("table sizes do not match the basis".into()));
        }
        if target.iter().any(|&t| t != ZERO && t >= d) || star_target.iter().any(|&t| t >= d) {
            return Err(AlgError::Structure("table entry out of range".into()));
        }
        let exponent: Vec<u64> = exponent.into_iter().map(|e| e % modulus).collect();
        let star_exponent: Vec<u64> = star_exponent.into_iter().map(|e| e % modulus).collect();
        let (component, units) = summands(d, modulus, &target, &exponent)?;
        let a = MonomialStarAlgebra {
            labels,
            modulus,
            target,
            exponent,
            star_target,
            star_exponent,
            component,
            units,
            twisting: None,
        };
        a.validate()?;
        Ok(a)
    }

    /// Builds an algebra whose basis elements are unitaries in their summand,
    /// taking `delta_a^* = delta_a^{-1}`.
    pub fn from_unitary_tables(
        labels: Vec<String>,
        modulus: u64,
        target: Vec<usize>,
        exponent: Vec<u64>,
    ) -> Result<Self, AlgError> {
        let d = labels.len();
        if modulus == 0 || target.len() != d * d || exponent.len() != d * d {
            return Err(AlgError::Structure("table sizes do not match the basis".into()));
        }
        let exponent: Vec<u64> = exponent.into_iter().map(|e| e % modulus).collect();
        let (component, units) = summands(d, modulus, &target, &exponent)?;
        let mut star_target = vec![0; d];
        let mut star_exponent = vec![0; d];
        for a in 0..d {
            let (u, c) = units[component[a]];
            let b = (0..d)
                .find(|&b| target[a * d + b] == u)
                .ok_or_else(|| AlgError::Structure(format!("basis element {a} is not invertible")))?;
            star_target[a] = b;
            star_exponent[a] = (c + modulus - exponent[a * d + b]) % modulus;
        }
        MonomialStarAlgebra::new(labels, modulus, target, exponent, star_target, star_exponent)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `delta_a delta_b` as `(c, e)` meaning `zeta^e delta_c`, or `None` for zero.
    pub fn product(&self, a: usize, b: usize) -> Option<(usize, u64)> {
        let i = a * self.dim() + b;
        (self.target[i] != ZERO).then(|| (self.target[i], self.exponent[i]))
    }

    /// `delta_a^* = zeta^e delta_c` as `(c, e)`.
    pub fn star(&self, a: usize) -> (usize, u64) {
        (self.star_target[a], self.star_exponent[a])
    }

    pub fn summand_count(&self) -> usize {
        self.units.len()
    }

    pub fn summand_of(&self, a: usize) -> usize {
        self.component[a]
    }

    /// Basis elements of each summand.
    pub fn summands(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.units.len()];
        for (a, &c) in self.component.iter().enumerate() {
            out[c].push(a);
        }
        out
    }

    /// Unit of each summand as `(a, k)` meaning `zeta^k delta_a`.
    pub fn units(&self) -> &[(usize, u64)] {
        &self.units
    }

    /// The cocycle `omega` when this is `C[G, omega]` with basis `G`.
    pub fn twisting(&self) -> Option<&Cochain> {
        self.twisting.as_ref()
    }

    /// Associativity, involution and unitarity of the basis, exhaustively.
    pub fn validate(&self) -> Result<(), AlgError> {
        let d = self.dim();
        let m = self.modulus;
        for a in 0..d {
            for b in 0..d {
                let ab = self.product(a, b);
                for c in 0..d {
                    let left = ab.and_then(|(x, e1)| self.product(x, c).map(|(y, e2)| (y, (e1 + e2) % m)));
                    let right = self.product(b, c).and_then(|(x, e1)| self.product(a, x).map(|(y, e2)| (y, (e1 + e2) % m)));
                    if left != right {
                        return Err(AlgError::Structure(format!(
                            "(d{a} d{b}) d{c} differs from d{a} (d{b} d{c})"
                        )));
                    }
                }
                // (ab)* = b* a*
                let lhs = ab.map(|(c, e)| {
                    let (s, j) = self.star(c);
                    (s, (j + m - e) % m)
                });
                let (sb, jb) = self.star(b);
                let (sa, ja) = self.star(a);
                let rhs = self.product(sb, sa).map(|(c, e)| (c, (e + ja + jb) % m));
                if lhs != rhs {
                    return Err(AlgError::Structure(format!("(d{a} d{b})* differs from d{b}* d{a}*")));
                }
            }
            let (s, j) = self.star(a);
            let (s2, j2) = self.star(s);
            if s2 != a || !(j2 + m - j).is_multiple_of(m) {
                return Err(AlgError::Structure(format!("d{a}** differs from d{a}")));
            }
            let (u, c) = self.units[self.component[a]];
            match self.product(a, s) {
                Some((t, e)) if t == u && (e + j) % m == c => {}
                _ => return Err(AlgError::Structure(format!("d{a} is not unitary"))),
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|a| (0..a).all(|b| self.product(a, b) == self.product(b, a)))
    }

    /// Number of conjugacy classes of regular elements summed over summands:
    /// `a` is regular when `delta_a` commutes with every `delta_b` whose
    /// underlying group element commutes with `a`.
    pub fn regular_class_count(&self) -> usize {
        let d = self.dim();
        let mut seen = vec![false; d];
        let mut count = 0;
        for a in 0..d {
            if seen[a] {
                continue;
            }
            let class = self.conjugacy_class(a);
            for &c in &class {
                seen[c] = true;
            }
            if self.is_regular(a) {
                count += 1;
            }
        }
        count
    }

    fn conjugacy_class(&self, a: usize) -> Vec<usize> {
        let comp = self.component[a];
        let mut class: Vec<usize> = (0..self.dim())
            .filter(|&b| self.component[b] == comp)
            .filter_map(|b| {
                let (x, _) = self.product(b, a)?;
                let (y, _) = self.product(x, self.star(b).0)?;
                Some(y)
            })
            .collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    fn is_regular(&self, a: usize) -> bool {
        (0..self.dim()).filter(|&b| self.component[b] == self.component[a]).all(|b| {
            let (ab, ba) = (self.product(a, b), self.product(b, a));
            match (ab, ba) {
                (Some((x, e1)), Some((y, e2))) if x == y => e1 == e2,
                _ => true,
            }
        })
    }

    /// The same algebra with exponents re-expressed modulo a multiple of `M`.
    pub fn rescale(&self, modulus: u64) -> Result<Self, AlgError> {
        if modulus == 0 || !modulus.is_multiple_of(self.modulus) {
            return Err(AlgError::Incompatible(format!("{} does not divide {modulus}", self.modulus)));
        }
        let f = |e: &u64| lift(*e, self.modulus, modulus);
        let mut out = self.clone();
        out.modulus = modulus;
        out.exponent = self.exponent.iter().map(f).collect();
        out.star_exponent = self.star_exponent.iter().map(f).collect();
        out.units = self.units.iter().map(|&(a, k)| (a, f(&k))).collect();
        if let Some(t) = &self.twisting {
            out.twisting = Some(t.rescale(modulus)?);
        }
        Ok(out)
    }

    /// Exact equality of structure tables (after bringing both to a common modulus).
    pub fn same_structure(&self, other: &MonomialStarAlgebra) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let Ok(l) = lcm(self.modulus, other.modulus) else { return false };
        let (a, b) = (self.rescale(l).unwrap(), other.rescale(l).unwrap());
        a.target == b.target && a.exponent == b.exponent && a.star_target == b.star_target && a.star_exponent == b.star_exponent
    }
}

/// Connected summands (basis elements with nonzero products) and their units.
fn summands(d: usize, m: u64, target: &[usize], exponent: &[u64]) -> Result<(Vec<usize>, Vec<(usize, u64)>), AlgError> {
    let mut component = vec![usize::MAX; d];
    let mut count = 0;
    for start in 0..d {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = count;
        while let Some(a) = stack.pop() {
            for b in 0..d {
                if component[b] == usize::MAX && (target[a * d + b] != ZERO || target[b * d + a] != ZERO) {
                    component[b] = count;
                    stack.push(b);
                }
            }
        }
        count += 1;
    }
    let mut units = Vec::with_capacity(count);
    for c in 0..count {
        let members: Vec<usize> = (0..d).filter(|&a| component[a] == c).collect();
        let unit = members.iter().copied().find(|&u| {
            members.iter().all(|&b| target[u * d + b] == b && target[b * d + u] == b)
        });
        let u = unit.ok_or_else(|| AlgError::Structure(format!("summand {c} has no unit monomial")))?;
        // zeta^k delta_u is the unit when delta_u delta_u = zeta^{-k} delta_u
        let k = (m - exponent[u * d + u]) % m;
        if members.iter().any(|&b| !(exponent[u * d + b] + k).is_multiple_of(m) || !(exponent[b * d + u] + k).is_multiple_of(m)) {
            return Err(AlgError::Structure(format!("summand {c} has no unit monomial")));
        }
        units.push((u, k));
    }
    Ok((component, units))
}

/// `C[G, omega]`: `delta_s delta_t = zeta^{omega(s,t)} delta_{st}` and
/// `delta_s^* = zeta^{-omega(s, s^-1)} delta_{s^-1}`.
pub fn twisted_group_algebra(omega: &Cochain) -> Result<MonomialStarAlgebra, AlgError> {
    if omega.degree() != 2 || omega.base_size() != 1 {
        return Err(AlgError::Incompatible("expected a single 2-cochain".into()));
    }
    if !omega.is_cocycle() {
        return Err(AlgError::Coh(CohError::NotACocycle));
    }
    let g = omega.group();
    let n = g.order();
    let m = omega.modulus();
    let mut target = Vec::with_capacity(n * n);
    let mut exponent = Vec::with_capacity(n * n);
    for s in g.elements() {
        for t in g.elements() {
            target.push(g.mul(s, t));
            exponent.push(omega.get2(0, s, t));
        }
    }
    let star_target: Vec<usize> = g.elements().map(|s| g.inv(s)).collect();
    let star_exponent = g.elements().map(|s| (m - omega.get2(0, s, g.inv(s))) % m).collect();
    let labels = g.elements().map(|s| g.label(s)).collect();
    let mut a = MonomialStarAlgebra::new(labels, m, target, exponent, star_target, star_exponent)?;
    a.twisting = Some(omega.clone());
    Ok(a)
}

pub fn group_algebra(g: &FiniteGroup) -> MonomialStarAlgebra {
    twisted_group_algebra(&Cochain::zero(g, 2, 1, 1).unwrap()).expect("untwisted group algebra")
}

/// Direct sum; basis element `a` of part `i` gets label `i:label`.
pub fn direct_sum(parts: &[MonomialStarAlgebra]) -> Result<MonomialStarAlgebra, AlgError> {
    let mut m = 1;
    for p in parts {
        m = lcm(m, p.modulus)?;
    }
    let d: usize = parts.iter().map(|p| p.dim()).sum();
    let mut labels = Vec::with_capacity(d);
    let mut target = vec![ZERO; d * d];
    let mut exponent = vec![0; d * d];
    let mut star_target = Vec::with_capacity(d);
    let mut star_exponent = Vec::with_capacity(d);
    let mut offset = 0;
    for (i, p) in parts.iter().enumerate() {
        let p = p.rescale(m)?;
        let k = p.dim();
        for a in 0..k {
            labels.push(format!("{i}:{}", p.labels[a]));
            for b in 0..k {
                if let Some((c, e)) = p.product(a, b) {
                    target[(offset + a) * d + offset + b] = offset + c;
                    exponent[(offset + a) * d + offset + b] = e;
                }
            }
            let (s, j) = p.star(a);
            star_target.push(offset + s);
            star_exponent.push(j);
        }
        offset += k;
    }
    MonomialStarAlgebra::new(labels, m, target, exponent, star_target, star_exponent)
}

/// Tensor product; `delta_a (x) delta_b` has index `a * dim(B) + b`.
pub fn tensor_product(a: &MonomialStarAlgebra, b: &MonomialStarAlgebra) -> Result<MonomialStarAlgebra, AlgError> {
    let m = lcm(a.modulus, b.modulus)?;
    let (a, b) = (a.rescale(m)?, b.rescale(m)?);
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    let mut labels = Vec::with_capacity(d);
    let mut target = vec![ZERO; d * d];
    let mut exponent = vec![0; d * d];
    let mut star_target = Vec::with_capacity(d);
    let mut star_exponent = Vec::with_capacity(d);
    for x in 0..d {
        let (xa, xb) = (x / db, x % db);
        labels.push(format!("{}*{}", a.labels[xa], b.labels[xb]));
        for y in 0..d {
            let (ya, yb) = (y / db, y % db);
            if let (Some((ca, ea)), Some((cb, eb))) = (a.product(xa, ya), b.product(xb, yb)) {
                target[x * d + y] = ca * db + cb;
                exponent[x * d + y] = (ea + eb) % m;
            }
        }
        let ((sa, ja), (sb, jb)) = (a.star(xa), b.star(xb));
        star_target.push(sa * db + sb);
        star_exponent.push((ja + jb) % m);
    }
    MonomialStarAlgebra::new(labels, m, target, exponent, star_target, star_exponent)
}

/// A linear map sending `delta_a` to `zeta^{k(a)} delta_{pi(a)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub target: Vec<usize>,
    pub exponent: Vec<u64>,
    pub modulus: u64,
}

impl MonomialMap {
    pub fn identity(d: usize) -> Self {
        MonomialMap { target: (0..d).collect(), exponent: vec![0; d], modulus: 1 }
    }

    /// `(pi(a), k(a))`.
    pub fn apply(&self, a: usize) -> (usize, u64) {
        (self.target[a], self.exponent[a])
    }

    /// `self` after `first`.
    pub fn after(&self, first: &MonomialMap) -> Result<MonomialMap, AlgError> {
        let m = lcm(self.modulus, first.modulus)?;
        let (target, exponent) = first
            .target
            .iter()
            .zip(&first.exponent)
            .map(|(&b, &e)| (self.target[b], (lift(e, first.modulus, m) + lift(self.exponent[b], self.modulus, m)) % m))
            .unzip();
        Ok(MonomialMap { target, exponent, modulus: m })
    }

    /// Exact equality as linear maps.
    pub fn same_as(&self, other: &MonomialMap) -> bool {
        let Ok(m) = lcm(self.modulus, other.modulus) else { return false };
        self.target == other.target
            && self
                .exponent
                .iter()
                .zip(&other.exponent)
                .all(|(&a, &b)| lift(a, self.modulus, m) == lift(b, other.modulus, m))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.target.iter().all(|&t| t < seen.len() && !std::mem::replace(&mut seen[t], true))
    }

    /// Checks multiplicativity and `*`-compatibility from `from` to `to`.
    pub fn check_star_hom(&self, from: &MonomialStarAlgebra, to: &MonomialStarAlgebra) -> Result<(), AlgError> {
        if self.target.len() != from.dim() || self.target.iter().any(|&t| t >= to.dim()) {
            return Err(AlgError::NotIsomorphism("map does not fit the algebras".into()));
        }
        let m = lcm(lcm(self.modulus, from.modulus)?, to.modulus)?;
        let k = |a: usize| lift(self.exponent[a], self.modulus, m);
        let ef = |e: u64| lift(e, from.modulus, m);
        let et = |e: u64| lift(e, to.modulus, m);
        let d = from.dim();
        for a in 0..d {
            for b in 0..d {
                let lhs = from.product(a, b).map(|(c, e)| (self.target[c], (ef(e) + k(c)) % m));
                let rhs = to
                    .product(self.target[a], self.target[b])
                    .map(|(c, e)| (c, (et(e) + k(a) + k(b)) % m));
                if lhs != rhs {
                    return Err(AlgError::NotIsomorphism(format!(
                        "products of {} and {} are not preserved",
                        from.labels[a], from.labels[b]
                    )));
                }
            }
            let (s, j) = from.star(a);
            let lhs = (self.target[s], (ef(j) + k(s)) % m);
            let (s2, j2) = to.star(self.target[a]);
            let rhs = (s2, (et(j2) + m - k(a)) % m);
            if lhs != rhs {
                return Err(AlgError::NotIsomorphism(format!("involution is not preserved at {}", from.labels[a])));
            }
        }
        Ok(())
    }

    /// [`check_star_hom`](Self::check_star_hom) plus bijectivity.
    pub fn check_star_iso(&self, from: &MonomialStarAlgebra, to: &MonomialStarAlgebra) -> Result<(), AlgError> {
        if from.dim() != to.dim() || !self.is_bijective() {
            return Err(AlgError::NotIsomorphism("map is not bijective on the bases".into()));
        }
        self.check_star_hom(from, to)
    }
}

/// `map o left_gamma = right_gamma o map` for every `gamma`.
pub fn check_intertwines(map: &MonomialMap, left: &[MonomialMap], right: &[MonomialMap]) -> Result<(), AlgError> {
    if left.len() != right.len() {
        return Err(AlgError::NotEquivariant("acting groups differ".into()));
    }
    for (gamma, (l, r)) in left.iter().zip(right).enumerate() {
        if !map.after(l)?.same_as(&r.after(map)?) {
            return Err(AlgError::NotEquivariant(format!("at group element {gamma}")));
        }
    }
    Ok(())
}

/// The dual action `gamma . delta_s = conj(gamma(s)) delta_s` of `G_ab^` on any
/// algebra with basis `G`, indexed by `gamma` in `ab.structure`.
pub fn dual_action(g: &FiniteGroup, ab: &Abelianization) -> Vec<MonomialMap> {
    let lam = &ab.structure;
    let m = lam.exponent();
    let q: Vec<Vec<u64>> = g.elements().map(|s| lam.coords(ab.hom.apply(s))).collect();
    (0..lam.order())
        .map(|gamma| {
            let gc = lam.coords(gamma);
            MonomialMap {
                target: g.elements().collect(),
                exponent: q.iter().map(|qs| (m - lam.pairing(&gc, qs)) % m).collect(),
                modulus: m,
            }
        })
        .collect()
}

/// Fibers `A_x` over a finite base with an abelian group acting fiberwise.
#[derive(Clone, Debug)]
pub struct FiberedAlgebra {
    fibers: Vec<MonomialStarAlgebra>,
    acting: AbelianGroup,
    /// `actions[x][gamma]`.
    actions: Vec<Vec<MonomialMap>>,
}

impl FiberedAlgebra {
    /// Validates that each `gamma` acts by `*`-automorphisms and that the
    /// assignment is a group action.
    pub fn new(
        fibers: Vec<MonomialStarAlgebra>,
        acting: AbelianGroup,
        actions: Vec<Vec<MonomialMap>>,
    ) -> Result<Self, AlgError> {
        if actions.len() != fibers.len() || actions.iter().any(|a| a.len() != acting.order()) {
            return Err(AlgError::Incompatible("action data does not match the base and group".into()));
        }
        for (x, (fiber, acts)) in fibers.iter().zip(&actions).enumerate() {
            if !acts[0].same_as(&MonomialMap::identity(fiber.dim())) {
                return Err(AlgError::Structure(format!("identity acts nontrivially at {x}")));
            }
            for (gamma, act) in acts.iter().enumerate() {
                act.check_star_iso(fiber, fiber)
                    .map_err(|e| AlgError::Structure(format!("action of {gamma} at {x}: {e}")))?;
            }
            for g1 in 0..acting.order() {
                for g2 in 0..acting.order() {
                    let sum = acting.index_of(&acting.add(&acting.coords(g1), &acting.coords(g2)));
                    if !acts[g1].after(&acts[g2])?.same_as(&acts[sum]) {
                        return Err(AlgError::Structure(format!("not a group action at {x}")));
                    }
                }
            }
        }
        Ok(FiberedAlgebra { fibers, acting, actions })
    }

    pub fn base_size(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber(&self, x: usize) -> &MonomialStarAlgebra {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[MonomialStarAlgebra] {
        &self.fibers
    }

    pub fn acting_group(&self) -> &AbelianGroup {
        &self.acting
    }

    pub fn action(&self, x: usize) -> &[MonomialMap] {
        &self.actions[x]
    }

    pub fn dim(&self) -> usize {
        self.fibers.iter().map(|f| f.dim()).sum()
    }

    /// The whole algebra as a direct sum over the base.
    pub fn total(&self) -> Result<MonomialStarAlgebra, AlgError> {
        direct_sum(&self.fibers)
    }
}

/// `C_0(X) x_{id,u} G = sum_x C[G, u(x)]` with basis `(x, s)` at `x |G| + s`.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub algebra: FiberedAlgebra,
    pub cocycle: Cochain,
    pub abelianization: Abelianization,
}

pub fn crossed_product(u: &Cochain) -> Result<CrossedProduct, AlgError> {
    if u.degree() != 2 {
        return Err(AlgError::Incompatible("expected a 2-cocycle".into()));
    }
    let g = u.group();
    let ab = grp::abelianization(g);
    let dual = dual_action(g, &ab);
    let mut fibers = Vec::with_capacity(u.base_size());
    for x in 0..u.base_size() {
        fibers.push(twisted_group_algebra(&u.evaluate_at(x)?)?);
    }
    let actions = vec![dual; u.base_size()];
    let algebra = FiberedAlgebra::new(fibers, ab.structure.clone(), actions)?;
    Ok(CrossedProduct { algebra, cocycle: u.clone(), abelianization: ab })
}

impl CrossedProduct {
    /// `i_A(psi) = sum_x psi(x) 1_x` as monomial terms `(basis index, zeta^k)`,
    /// for `psi = zeta^{psi_x}` given by exponents modulo `modulus`.
    pub fn i_a(&self, psi: &[u64], modulus: u64) -> Result<Vec<(usize, u64, u64)>, AlgError> {
        if psi.len() != self.algebra.base_size() {
            return Err(AlgError::Incompatible("function has the wrong length".into()));
        }
        let n = self.cocycle.group().order();
        let mut out = Vec::with_capacity(psi.len());
        for (x, &p) in psi.iter().enumerate() {
            let f = self.algebra.fiber(x);
            let l = lcm(modulus, f.modulus)?;
            let (a, k) = f.units[0];
            out.push((x * n + a, (lift(p, modulus, l) + lift(k, f.modulus, l)) % l, l));
        }
        Ok(out)
    }

    /// `i_G(s) = sum_x delta_(x, s)`.
    pub fn i_g(&self, s: usize) -> Vec<usize> {
        let n = self.cocycle.group().order();
        (0..self.algebra.base_size()).map(|x| x * n + s).collect()
    }
}

/// The fibered algebra `phi^*(A)` over `X` for `phi: X -> Y`.
pub fn pull_back_algebra(phi: &[usize], a: &FiberedAlgebra) -> Result<FiberedAlgebra, AlgError> {
    if phi.iter().any(|&y| y >= a.base_size()) {
        return Err(AlgError::Incompatible("map leaves the base".into()));
    }
    Ok(FiberedAlgebra {
        fibers: phi.iter().map(|&y| a.fibers[y].clone()).collect(),
        acting: a.acting.clone(),
        actions: phi.iter().map(|&y| a.actions[y].clone()).collect(),
    })
}

/// A constant fibered algebra `X x A`.
pub fn constant_algebra(base_size: usize, a: &MonomialStarAlgebra, acting: &AbelianGroup, action: &[MonomialMap]) -> Result<FiberedAlgebra, AlgError> {
    FiberedAlgebra::new(vec![a.clone(); base_size], acting.clone(), vec![action.to_vec(); base_size])
}

/// `Z * A`, realized fiberwise through the base points `z_x` of `Z`.
#[derive(Clone, Debug)]
pub struct FiberedProduct {
    /// Fiber `x` is `{F : Z_x -> A_x, F(gamma^-1 z) = alpha_gamma(F(z))}` in the
    /// basis `F_{x,a}` with `F_{x,a}(z_x) = delta_a`.
    pub algebra: FiberedAlgebra,
    /// The point `z_x` of each fiber; evaluation there is the fiber isomorphism.
    pub section: Vec<usize>,
}

/// `Z * A`: functions on the bundle satisfying the equivariance constraint,
/// with the translation action `(gamma . F)(z) = F(gamma^-1 z)`.
pub fn fibered_product_algebra(z: &TorsorBundle, a: &FiberedAlgebra) -> Result<FiberedProduct, AlgError> {
    if z.base_size() != a.base_size() {
        return Err(AlgError::Incompatible("bundle and algebra have different bases".into()));
    }
    let lam = z.fiber_group();
    if lam != &a.acting {
        return Err(AlgError::Incompatible("bundle and algebra have different acting groups".into()));
    }
    let section: Vec<usize> = (0..z.base_size()).map(|x| z.index(x, 0)).collect();
    let neg = |gamma: usize| lam.index_of(&lam.neg(&lam.coords(gamma)));
    for x in 0..z.base_size() {
        let fiber = &a.fibers[x];
        let acts = &a.actions[x];
        // F_{x,a} at the point gamma . z_x is alpha_{-gamma}(delta_a)
        let mut value_at = vec![None; z.len()];
        for gamma in 0..lam.order() {
            value_at[z.act(gamma, section[x])] = Some(&acts[neg(gamma)]);
        }
        let values: Vec<&MonomialMap> = (0..lam.order())
            .map(|gamma| value_at[z.index(x, gamma)].ok_or_else(|| AlgError::Incompatible("bundle fiber is not a single orbit".into())))
            .collect::<Result<_, _>>()?;
        // pointwise products stay inside the span of the F_{x,a}
        for v in &values {
            v.check_star_hom(fiber, fiber)?;
        }
        // translating F_{x,a} by gamma gives alpha_gamma(delta_a) read in the F basis
        for (g1, act) in acts.iter().enumerate() {
            for pt in 0..lam.order() {
                let moved = z.act(neg(g1), z.index(x, pt));
                let lhs = value_at[moved].expect("orbit point");
                let rhs = values[pt].after(act)?;
                if !lhs.same_as(&rhs) {
                    return Err(AlgError::NotEquivariant(format!(
                        "translation by {g1} leaves the fiber algebra at {x}"
                    )));
                }
            }
        }
    }
    let algebra = FiberedAlgebra::new(a.fibers.clone(), a.acting.clone(), a.actions.clone())?;
    Ok(FiberedProduct { algebra, section })
}

/// `Z x_{G_ab^} A` for a single algebra `A` with a `G_ab^`-action.
pub fn induced_algebra(z: &TorsorBundle, a: &MonomialStarAlgebra, action: &[MonomialMap]) -> Result<FiberedProduct, AlgError> {
    let constant = constant_algebra(z.base_size(), a, z.fiber_group(), action)?;
    fibered_product_algebra(z, &constant)
}

/// Serializable summary of a fibered algebra.
#[derive(Clone, Debug, Serialize)]
pub struct FiberSummary {
    pub x: usize,
    pub dim: usize,
    pub commutative: bool,
    pub block_count: usize,
    pub profile: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::grp::make_abelian;

    fn klein_generator() -> Cochain {
        let g = make_abelian(&[2, 2]).unwrap();
        let ab = g.abelian_structure().unwrap().clone();
        Cochain::from_fn(&g, 2, 1, 2, |_, a| (ab.coords(a[0])[0] * ab.coords(a[1])[1]) as i64).unwrap()
    }

    #[test]
    fn klein_generators_anticommute() {
        let a = twisted_group_algebra(&klein_generator()).unwrap();
        // (1,0) has index 2, (0,1) index 1
        let (c1, e1) = a.product(2, 1).unwrap();
        let (c2, e2) = a.product(1, 2).unwrap();
        assert_eq!(c1, c2);
        assert_eq!((e1 + 1) % 2, e2);
        assert!(!a.is_commutative());
    }

    #[test]
    fn regular_counts() {
        assert_eq!(group_algebra(&catalog::dihedral(4)).regular_class_count(), 5);
        assert_eq!(twisted_group_algebra(&klein_generator()).unwrap().regular_class_count(), 1);
        assert_eq!(group_algebra(&catalog::cyclic(5)).regular_class_count(), 5);
    }

    #[test]
    fn unitary_tables_recover_the_involution() {
        let a = twisted_group_algebra(&klein_generator()).unwrap();
        let d = a.dim();
        let b = MonomialStarAlgebra::from_unitary_tables(
            a.labels().to_vec(),
            a.modulus(),
            a.target.clone(),
            a.exponent.clone(),
        )
        .unwrap();
        assert!(a.same_structure(&b));
        assert_eq!(d, 4);
    }

    #[test]
    fn broken_associativity_is_rejected() {
        let a = twisted_group_algebra(&klein_generator()).unwrap();
        let mut exponent = a.exponent.clone();
        exponent[2 * 4 + 1] ^= 1;
        exponent[4 + 2] ^= 1;
        exponent[3 * 4 + 3] ^= 1;
        let r = MonomialStarAlgebra::new(a.labels.clone(), 2, a.target.clone(), exponent, a.star_target.clone(), a.star_exponent.clone());
        assert!(matches!(r, Err(AlgError::Structure(_))));
    }

    #[test]
    fn direct_sum_has_one_unit_per_summand() {
        let c2 = group_algebra(&catalog::cyclic(2));
        let s = direct_sum(&[c2.clone(), twisted_group_algebra(&klein_generator()).unwrap()]).unwrap();
        assert_eq!(s.dim(), 6);
        assert_eq!(s.summand_count(), 2);
        assert_eq!(s.product(0, 2), None);
        assert_eq!(s.regular_class_count(), 3);
    }

    #[test]
    fn cohomologous_shift_is_an_isomorphism() {
        let omega = klein_generator().rescale(4).unwrap();
        let g = omega.group().clone();
        let b = [0i64, 1, 3, 2];
        let db = Cochain::from_fn(&g, 1, 1, 4, |_, a| b[a[0]]).unwrap().coboundary().unwrap();
        let shifted = omega.multiply(&db).unwrap();
        let (a1, a2) = (twisted_group_algebra(&omega).unwrap(), twisted_group_algebra(&shifted).unwrap());
        let map = MonomialMap { target: (0..4).collect(), exponent: b.iter().map(|&v| v as u64).collect(), modulus: 4 };
        map.check_star_iso(&a1, &a2).unwrap();
        assert_eq!(a1.regular_class_count(), a2.regular_class_count());
    }

    #[test]
    fn crossed_product_embeddings_are_covariant() {
        let g = make_abelian(&[2]).unwrap();
        let u = Cochain::from_values(&g, 2, 2, 2, vec![0, 0, 0, 1, 0, 0, 0, 0]).unwrap();
        let cp = crossed_product(&u).unwrap();
        let total = cp.algebra.total().unwrap();
        // i_G(s) i_G(t) = i_A(u(s,t)) i_G(st) term by term
        for s in 0..2 {
            for t in 0..2 {
                let lhs: Vec<(usize, u64)> = cp
                    .i_g(s)
                    .into_iter()
                    .zip(cp.i_g(t))
                    .map(|(a, b)| total.product(a, b).unwrap())
                    .collect();
                let psi: Vec<u64> = (0..2).map(|x| u.get2(x, s, t)).collect();
                let rhs: Vec<(usize, u64)> = cp
                    .i_a(&psi, 2)
                    .unwrap()
                    .into_iter()
                    .zip(cp.i_g(g.mul(s, t)))
                    .map(|((a, k, _), b)| {
                        let (c, e) = total.product(a, b).unwrap();
                        (c, (e + k) % 2)
                    })
                    .collect();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn pull_back_reindexes_fibers() {
        let g = make_abelian(&[2]).unwrap();
        let u = Cochain::from_values(&g, 2, 2, 2, vec![0, 0, 0, 1, 0, 0, 0, 0]).unwrap();
        let cp = crossed_product(&u).unwrap();
        let pb = pull_back_algebra(&[1, 0, 1], &cp.algebra).unwrap();
        assert_eq!(pb.base_size(), 3);
        assert!(pb.fiber(0).same_structure(cp.algebra.fiber(1)));
        assert!(pb.fiber(1).same_structure(cp.algebra.fiber(0)));
        assert!(pb.fiber(2).same_structure(cp.algebra.fiber(1)));
        assert!(pull_back_algebra(&[2], &cp.algebra).is_err());
    }
}
