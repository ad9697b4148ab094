//! Finite groups as dense multiplication tables.
//!
//! Elements are indices `0..n` with the identity always at index 0. Abelian
//! groups built by [`make_abelian`] additionally carry their cyclic
//! decomposition, which fixes a mixed-radix element ordering (first
//! coordinate most significant).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::zmod::{self, AbelianQuotient};

/// Default upper bound on group orders accepted from user input.
pub const DEFAULT_MAX_ORDER: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid invariant factor {0}: every factor must be at least 2")]
    InvalidInvariant(u64),
    #[error("multiplication table is empty")]
    EmptyTable,
    #[error("table row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("map is not a homomorphism: h({a}*{b}) != h({a})*h({b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("map has {len} images for a group of order {expected}")]
    WrongLength { len: usize, expected: usize },
    #[error("image {0} is out of range for the target group")]
    ImageOutOfRange(usize),
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal: conjugating {element} by {by} leaves it")]
    NotNormal { element: usize, by: usize },
    #[error("group has no abelian structure")]
    NotAbelian,
    #[error("coordinate vector does not match the group's factors")]
    BadCoordinates,
    #[error("group order {order} exceeds the limit {max}")]
    OrderTooLarge { order: usize, max: usize },
}

/// A finite abelian group `Z_{d_1} + ... + Z_{d_r}`.
///
/// The factors need not form a divisibility chain; [`invariant_factors`]
/// returns the canonical form.
///
/// [`invariant_factors`]: AbelianGroup::invariant_factors
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(factors: &[u64]) -> Result<Self, GroupError> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(GroupError::InvalidInvariant(d));
        }
        Ok(AbelianGroup { factors: factors.to_vec() })
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    pub fn exponent(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &d| acc / zmod::gcd(acc, d) * d)
    }

    /// Canonical invariant factors `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<u64> {
        AbelianQuotient::new(&self.factors, &[]).invariants
    }

    pub fn is_isomorphic(&self, other: &AbelianGroup) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    pub fn index_of(&self, coords: &[u64]) -> usize {
        debug_assert_eq!(coords.len(), self.factors.len());
        coords
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + (c % d) as usize)
    }

    pub fn coords(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        out
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.factors).map(|((&x, &y), &d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(&x, &d)| (d - x % d) % d).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| ((x as u128 * k as u128) % d as u128) as u64)
            .collect()
    }

    /// Unit vector of the `i`-th factor.
    pub fn generator(&self, i: usize) -> Vec<u64> {
        (0..self.rank()).map(|j| (i == j) as u64).collect()
    }

    /// The character group; as an abstract group it has the same factors.
    pub fn dual(&self) -> AbelianGroup {
        self.clone()
    }

    /// `<chi, a> = sum_i chi_i a_i (exp / d_i)` in `Z_exp`.
    pub fn pairing(&self, chi: &[u64], a: &[u64]) -> u64 {
        let exp = self.exponent();
        let mut acc = 0u128;
        for ((&c, &x), &d) in chi.iter().zip(a).zip(&self.factors) {
            acc += (c % d) as u128 * (x % d) as u128 * (exp / d) as u128;
        }
        (acc % exp as u128) as u64
    }

    pub fn to_group(&self) -> FiniteGroup {
        let n = self.order();
        let mut mul = vec![0usize; n * n];
        let coords: Vec<Vec<u64>> = (0..n).map(|i| self.coords(i)).collect();
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = self.index_of(&self.add(&coords[a], &coords[b]));
            }
        }
        FiniteGroup::from_parts(n, mul, None, Some(self.clone()))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Debug)]
struct GroupData {
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
    abelian: Option<AbelianGroup>,
}

/// A validated finite group. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct FiniteGroup(Arc<GroupData>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.n == other.0.n && self.0.mul == other.0.mul)
    }
}

impl Eq for FiniteGroup {}

/// The group `Z_{d_1} + ... + Z_{d_r}` in mixed-radix element order.
pub fn make_abelian(factors: &[u64]) -> Result<FiniteGroup, GroupError> {
    Ok(AbelianGroup::new(factors)?.to_group())
}

/// Validates a multiplication table. The identity is moved to index 0.
pub fn make_table(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    make_table_relabeled(table, None).map(|(g, _)| g)
}

/// Like [`make_table`], also returning the relabeling `old index -> new index`
/// and attaching optional element labels.
pub fn make_table_relabeled(
    table: &[Vec<usize>],
    labels: Option<Vec<String>>,
) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(GroupError::EmptyTable);
    }
    for (row, r) in table.iter().enumerate() {
        if r.len() != n {
            return Err(GroupError::NotSquare { row, len: r.len(), expected: n });
        }
        if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(GroupError::EntryOutOfRange { row, col, value });
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or(GroupError::NoIdentity)?;
    for a in 0..n {
        if !(0..n).any(|b| table[a][b] == e && table[b][a] == e) {
            return Err(GroupError::NoInverse(a));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = table[a][b];
            for c in 0..n {
                if table[ab][c] != table[a][table[b][c]] {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
    }
    // swap e and 0
    let relabel: Vec<usize> = (0..n).map(|i| if i == e { 0 } else if i == 0 { e } else { i }).collect();
    let mut mul = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[relabel[a] * n + relabel[b]] = relabel[table[a][b]];
        }
    }
    let labels = labels.map(|mut l| {
        l.swap(0, e);
        l
    });
    Ok((FiniteGroup::from_parts(n, mul, labels, None), relabel))
}

impl FiniteGroup {
    fn from_parts(n: usize, mul: Vec<usize>, labels: Option<Vec<String>>, abelian: Option<AbelianGroup>) -> Self {
        let mut inv = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        FiniteGroup(Arc::new(GroupData { n, mul, inv, labels, abelian }))
    }

    /// Builds a group from a table known to be valid with identity 0.
    pub(crate) fn from_trusted_table(n: usize, mul: Vec<usize>) -> Self {
        debug_assert_eq!(mul.len(), n * n);
        Self::from_parts(n, mul, None, None)
    }

    pub fn trivial() -> Self {
        AbelianGroup::trivial().to_group()
    }

    pub fn order(&self) -> usize {
        self.0.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul[a * self.0.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.n
    }

    pub fn label(&self, a: usize) -> String {
        match (&self.0.labels, &self.0.abelian) {
            (Some(l), _) => l[a].clone(),
            (None, Some(ab)) => format!("{:?}", ab.coords(a)),
            _ => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    /// The cyclic decomposition, when the group was built from one.
    pub fn abelian_structure(&self) -> Option<&AbelianGroup> {
        self.0.abelian.as_ref()
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order());
        FiniteGroup(Arc::new(GroupData {
            n: self.0.n,
            mul: self.0.mul.clone(),
            inv: self.0.inv.clone(),
            labels: Some(labels),
            abelian: self.0.abelian.clone(),
        }))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.0.n;
        (0..n).map(|a| self.0.mul[a * n..(a + 1) * n].to_vec()).collect()
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        self.elements().fold(1u64, |acc, a| {
            let o = self.element_order(a);
            acc / zmod::gcd(acc, o) * o
        })
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| (a + 1..self.order()).all(|b| self.commute(a, b)))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements().filter(|&z| self.elements().all(|g| self.commute(z, g))).collect()
    }

    /// Exhaustive check of the group axioms (identity 0, inverses, associativity).
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.order();
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(GroupError::NoIdentity);
            }
            let i = self.inv(a);
            if self.mul(a, i) != 0 || self.mul(i, a) != 0 {
                return Err(GroupError::NoInverse(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_order(&self, max: usize) -> Result<(), GroupError> {
        if self.order() > max {
            Err(GroupError::OrderTooLarge { order: self.order(), max })
        } else {
            Ok(())
        }
    }

    /// Sorted element set of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        self.elements().filter(|&x| seen[x]).collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &x in set {
            if x >= self.order() {
                return false;
            }
            member[x] = true;
        }
        member[0] && set.iter().all(|&a| set.iter().all(|&b| member[self.mul(a, self.inv(b))]))
    }

    /// First `(element, conjugator)` leaving `set`, if any.
    fn normality_witness(&self, set: &[usize]) -> Option<(usize, usize)> {
        let mut member = vec![false; self.order()];
        for &x in set {
            member[x] = true;
        }
        for &h in set {
            for g in self.elements() {
                if !member[self.mul(self.mul(g, h), self.inv(g))] {
                    return Some((h, g));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        self.is_subgroup(set) && self.normality_witness(set).is_none()
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let comms: BTreeSet<usize> = self
            .elements()
            .flat_map(|a| self.elements().map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        let comms: Vec<usize> = comms.into_iter().collect();
        self.generated_subgroup(&comms)
    }

    /// A generating set chosen greedily in index order.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut member = vec![false; self.order()];
        member[0] = true;
        for g in self.elements() {
            if !member[g] {
                gens.push(g);
                for x in self.generated_subgroup(&gens) {
                    member[x] = true;
                }
            }
        }
        gens
    }
}

/// A homomorphism given by its image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        if images.len() != source.order() {
            return Err(GroupError::WrongLength { len: images.len(), expected: source.order() });
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= target.order()) {
            return Err(GroupError::ImageOutOfRange(bad));
        }
        for a in source.elements() {
            for b in source.elements() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(GroupError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub(crate) fn new_trusted(source: FiniteGroup, target: FiniteGroup, images: Vec<usize>) -> Self {
        debug_assert_eq!(images.len(), source.order());
        GroupHom { source, target, images }
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), images: g.elements().collect() }
    }

    pub fn trivial(source: &FiniteGroup, target: &FiniteGroup) -> Self {
        GroupHom { source: source.clone(), target: target.clone(), images: vec![0; source.order()] }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(self.target.order(), other.source.order());
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source.elements().filter(|&a| self.images[a] == 0).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.images.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.order()
    }
}

/// `G x H` with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub group: FiniteGroup,
    pub proj_left: GroupHom,
    pub proj_right: GroupHom,
    pub incl_left: GroupHom,
    pub incl_right: GroupHom,
}

/// Componentwise product; element `(g, h)` has index `|H| * g + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> DirectProduct {
    let (ng, nh) = (g.order(), h.order());
    let n = ng * nh;
    let mut mul = vec![0usize; n * n];
    for a in 0..n {
        let (ag, ah) = (a / nh, a % nh);
        for b in 0..n {
            let (bg, bh) = (b / nh, b % nh);
            mul[a * n + b] = g.mul(ag, bg) * nh + h.mul(ah, bh);
        }
    }
    let abelian = match (g.abelian_structure(), h.abelian_structure()) {
        (Some(a), Some(b)) => {
            let mut f = a.factors().to_vec();
            f.extend_from_slice(b.factors());
            Some(AbelianGroup { factors: f })
        }
        _ => None,
    };
    let labels = match (g.labels(), h.labels()) {
        (None, None) => None,
        _ => Some(
            (0..n)
                .map(|a| format!("({},{})", g.label(a / nh), h.label(a % nh)))
                .collect(),
        ),
    };
    let group = FiniteGroup::from_parts(n, mul, labels, abelian);
    DirectProduct {
        proj_left: GroupHom::new_trusted(group.clone(), g.clone(), (0..n).map(|a| a / nh).collect()),
        proj_right: GroupHom::new_trusted(group.clone(), h.clone(), (0..n).map(|a| a % nh).collect()),
        incl_left: GroupHom::new_trusted(g.clone(), group.clone(), (0..ng).map(|a| a * nh).collect()),
        incl_right: GroupHom::new_trusted(h.clone(), group.clone(), (0..nh).collect()),
        group,
    }
}

/// A quotient group together with its coset data.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub hom: GroupHom,
    /// Least-index representative of each coset, in coset order.
    pub representatives: Vec<usize>,
}

/// `G / K` for a normal subgroup `K`; cosets are ordered by their least element.
pub fn quotient(g: &FiniteGroup, kernel: &[usize]) -> Result<Quotient, GroupError> {
    if !g.is_subgroup(kernel) {
        return Err(GroupError::NotSubgroup);
    }
    if let Some((element, by)) = g.normality_witness(kernel) {
        return Err(GroupError::NotNormal { element, by });
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for a in g.elements() {
        if coset[a] == usize::MAX {
            let idx = reps.len();
            reps.push(a);
            for &k in kernel {
                coset[g.mul(a, k)] = idx;
            }
        }
    }
    let m = reps.len();
    let mut mul = vec![0usize; m * m];
    for i in 0..m {
        for j in 0..m {
            mul[i * m + j] = coset[g.mul(reps[i], reps[j])];
        }
    }
    let group = FiniteGroup::from_trusted_table(m, mul);
    Ok(Quotient { hom: GroupHom::new_trusted(g.clone(), group.clone(), coset), group, representatives: reps })
}

/// `G_ab` in invariant-factor form.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub structure: AbelianGroup,
    /// `G_ab` as a group (built from `structure`).
    pub group: FiniteGroup,
    pub hom: GroupHom,
    /// Least-index preimage of each element of `G_ab`.
    pub section: Vec<usize>,
}

pub fn abelianization(g: &FiniteGroup) -> Abelianization {
    // abelian groups already in invariant-factor form map identically
    if let Some(ab) = g.abelian_structure() {
        let chain = ab.factors().windows(2).all(|w| w[1] % w[0] == 0);
        if chain {
            return Abelianization {
                structure: ab.clone(),
                group: g.clone(),
                hom: GroupHom::identity(g),
                section: g.elements().collect(),
            };
        }
    }
    let k = g.commutator_subgroup();
    let q = quotient(g, &k).expect("commutator subgroup is normal");
    let qg = &q.group;
    // coefficient vectors of every element of the quotient w.r.t. greedy generators
    let gens = qg.greedy_generators();
    let mut coeff: HashMap<usize, Vec<i64>> = HashMap::new();
    coeff.insert(0, vec![0; gens.len()]);
    let mut relations = Vec::new();
    for (j, &gen) in gens.iter().enumerate() {
        // smallest m with gen^m already covered
        let mut m = 1i64;
        let mut power = gen;
        while !coeff.contains_key(&power) {
            power = qg.mul(power, gen);
            m += 1;
        }
        let mut rel: Vec<i64> = coeff[&power].iter().map(|&c| -c).collect();
        rel[j] += m;
        relations.push(rel);
        let existing: Vec<(usize, Vec<i64>)> = coeff.iter().map(|(&k, v)| (k, v.clone())).collect();
        let mut step = gen;
        for t in 1..m {
            for (x, v) in &existing {
                let mut w = v.clone();
                w[j] = t;
                coeff.insert(qg.mul(*x, step), w);
            }
            step = qg.mul(step, gen);
        }
    }
    let pres = AbelianQuotient::new(&vec![0u64; gens.len()], &relations);
    let structure = AbelianGroup { factors: pres.invariants.clone() };
    let group = structure.to_group();
    let q_to_ab: Vec<usize> = qg
        .elements()
        .map(|x| structure.index_of(&pres.coordinates(&coeff[&x])))
        .collect();
    let images: Vec<usize> = g.elements().map(|a| q_to_ab[q.hom.apply(a)]).collect();
    let mut section = vec![usize::MAX; group.order()];
    for a in g.elements().rev() {
        section[images[a]] = a;
    }
    Abelianization { structure, hom: GroupHom::new_trusted(g.clone(), group.clone(), images), group, section }
}

/// The dual of a homomorphism between abelian groups, `B^ -> A^`, with both
/// duals realized on the same factors as `B` and `A`.
pub fn dual_hom(psi: &GroupHom) -> Result<GroupHom, GroupError> {
    let a = psi.source().abelian_structure().ok_or(GroupError::NotAbelian)?;
    let b = psi.target().abelian_structure().ok_or(GroupError::NotAbelian)?;
    let exp_b = b.exponent();
    let images_of_gens: Vec<Vec<u64>> =
        (0..a.rank()).map(|i| b.coords(psi.apply(a.index_of(&a.generator(i))))).collect();
    let a_hat = a.dual().to_group();
    let b_hat = b.dual().to_group();
    let images = (0..b.order())
        .map(|chi| {
            let chi = b.coords(chi);
            let coords: Vec<u64> = (0..a.rank())
                .map(|i| {
                    let v = b.pairing(&chi, &images_of_gens[i]);
                    let d = a.factors()[i];
                    (((v as u128 * d as u128) / exp_b as u128) % d as u128) as u64
                })
                .collect();
            a.index_of(&coords)
        })
        .collect();
    Ok(GroupHom::new_trusted(b_hat, a_hat, images))
}

/// `{(a, b) : f(a) = g(b)}` inside `A x B`, ordered by product index.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub group: FiniteGroup,
    /// Product index `|B| * a + b` of each element.
    pub pairs: Vec<(usize, usize)>,
    pub proj_left: GroupHom,
    pub proj_right: GroupHom,
}

pub fn fiber_product(f: &GroupHom, g: &GroupHom) -> FiberProduct {
    let (a, b) = (f.source(), g.source());
    let mut pairs = Vec::new();
    for x in a.elements() {
        for y in b.elements() {
            if f.apply(x) == g.apply(y) {
                pairs.push((x, y));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n = pairs.len();
    let mut mul = vec![0usize; n * n];
    for (i, &(x1, y1)) in pairs.iter().enumerate() {
        for (j, &(x2, y2)) in pairs.iter().enumerate() {
            mul[i * n + j] = index[&(a.mul(x1, x2), b.mul(y1, y2))];
        }
    }
    let group = FiniteGroup::from_trusted_table(n, mul);
    FiberProduct {
        proj_left: GroupHom::new_trusted(group.clone(), a.clone(), pairs.iter().map(|p| p.0).collect()),
        proj_right: GroupHom::new_trusted(group.clone(), b.clone(), pairs.iter().map(|p| p.1).collect()),
        group,
        pairs,
    }
}
