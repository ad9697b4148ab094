//! Central extensions `1 -> N -> E -> G -> 1` and their cocycles.
//!
//! `N` is finite abelian and `N`-valued cocycles are kept as one
//! `Z_{d_i}`-valued cochain per cyclic factor of `N`. Elements of extensions
//! built from a cocycle are pairs `(n, s)` stored at index `|G| * n + s`.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::coh::{self, Cochain, CohError, H2Circle, H2Mod};
use crate::grp::{self, AbelianGroup, Abelianization, FiniteGroup, GroupError, GroupHom};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coh(#[from] CohError),
    #[error("not a normalized 2-cocycle")]
    NotACocycle,
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("transgression is not bijective: {0}")]
    TransgressionNotBijective(String),
    #[error("no class found for base point {0}")]
    NoClassFound(usize),
    #[error("cocycle is not trivial at base points {0:?}")]
    NotPointwiseTrivial(Vec<usize>),
    #[error("diagonal image of Z is not a central subgroup of the fiber product")]
    DeltaNotSubgroup,
    #[error("objects live over different groups")]
    GroupMismatch,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// A 2-cochain `G x G -> N`, one component per cyclic factor of `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCocycle {
    group: FiniteGroup,
    n: AbelianGroup,
    parts: Vec<Cochain>,
}

impl GroupCocycle {
    pub fn new(group: &FiniteGroup, n: &AbelianGroup, parts: Vec<Cochain>) -> Result<Self, ExtError> {
        if parts.len() != n.rank() {
            return Err(ExtError::InvalidExtension(format!(
                "expected {} cocycle components, got {}",
                n.rank(),
                parts.len()
            )));
        }
        let mut out = Vec::with_capacity(parts.len());
        for (part, &d) in parts.into_iter().zip(n.factors()) {
            if part.group() != group {
                return Err(ExtError::GroupMismatch);
            }
            if part.degree() != 2 || part.base_size() != 1 {
                return Err(ExtError::InvalidExtension("components must be single-point 2-cochains".into()));
            }
            out.push(part.rescale(d)?);
        }
        Ok(GroupCocycle { group: group.clone(), n: n.clone(), parts: out })
    }

    pub fn zero(group: &FiniteGroup, n: &AbelianGroup) -> Self {
        let parts = n.factors().iter().map(|&d| Cochain::zero(group, 2, 1, d).unwrap()).collect();
        GroupCocycle { group: group.clone(), n: n.clone(), parts }
    }

    /// Builds a cochain from coordinate vectors `eta(s, t)`.
    pub fn from_fn(group: &FiniteGroup, n: &AbelianGroup, f: impl Fn(usize, usize) -> Vec<u64>) -> Self {
        let size = group.order();
        let table: Vec<Vec<u64>> = (0..size * size).map(|i| f(i / size, i % size)).collect();
        let parts = n
            .factors()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                Cochain::from_fn(group, 2, 1, d, |_, a| (table[a[0] * size + a[1]][i] % d) as i64).unwrap()
            })
            .collect();
        GroupCocycle { group: group.clone(), n: n.clone(), parts }
    }

    /// `(db)(s, t) = b(s) + b(t) - b(st)` for `b: G -> N` given by coordinates.
    pub fn coboundary_of(group: &FiniteGroup, n: &AbelianGroup, b: &[Vec<u64>]) -> Self {
        GroupCocycle::from_fn(group, n, |s, t| {
            let sum = n.add(&b[s], &b[t]);
            n.add(&sum, &n.neg(&b[group.mul(s, t)]))
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn coefficients(&self) -> &AbelianGroup {
        &self.n
    }

    pub fn parts(&self) -> &[Cochain] {
        &self.parts
    }

    pub fn get(&self, s: usize, t: usize) -> Vec<u64> {
        self.parts.iter().map(|p| p.get2(0, s, t)).collect()
    }

    pub fn get_index(&self, s: usize, t: usize) -> usize {
        self.n.index_of(&self.get(s, t))
    }

    pub fn is_cocycle(&self) -> bool {
        self.parts.iter().all(Cochain::is_cocycle)
    }

    pub fn add(&self, other: &GroupCocycle) -> Result<GroupCocycle, ExtError> {
        if self.group != other.group || self.n != other.n {
            return Err(ExtError::GroupMismatch);
        }
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| a.multiply(b)).collect::<Result<_, _>>()?;
        Ok(GroupCocycle { parts, ..self.clone() })
    }

    pub fn neg(&self) -> GroupCocycle {
        GroupCocycle { parts: self.parts.iter().map(Cochain::invert).collect(), ..self.clone() }
    }

    /// `chi o eta` with values in `Z_exp(N)`.
    pub fn pair(&self, chi: &[u64]) -> Cochain {
        let m = self.n.exponent();
        Cochain::from_fn(&self.group, 2, 1, m, |_, a| self.n.pairing(chi, &self.get(a[0], a[1])) as i64).unwrap()
    }

    /// The family `chi o eta` indexed by `chi` in `N^` (base point = index of `chi`).
    pub fn over_dual(&self) -> Cochain {
        let m = self.n.exponent();
        let size = self.group.order();
        let table: Vec<Vec<u64>> = (0..size * size).map(|i| self.get(i / size, i % size)).collect();
        Cochain::from_fn(&self.group, 2, self.n.order(), m, |x, a| {
            self.n.pairing(&self.n.coords(x), &table[a[0] * size + a[1]]) as i64
        })
        .unwrap()
    }

    pub fn inflate(&self, q: &GroupHom) -> Result<GroupCocycle, ExtError> {
        let parts = self.parts.iter().map(|p| p.inflate(q)).collect::<Result<_, _>>()?;
        Ok(GroupCocycle { group: q.source().clone(), n: self.n.clone(), parts })
    }

    pub fn is_symmetric(&self) -> bool {
        self.parts.iter().all(Cochain::is_symmetric)
    }
}

/// `psi_*(mu)(s, t) = psi(mu(s, t))` for `psi: Z -> N`.
pub fn pushforward_cocycle(psi: &GroupHom, mu: &GroupCocycle) -> Result<GroupCocycle, ExtError> {
    let z = psi.source().abelian_structure().ok_or(GroupError::NotAbelian)?;
    let n = psi.target().abelian_structure().ok_or(GroupError::NotAbelian)?;
    if z != mu.coefficients() {
        return Err(ExtError::GroupMismatch);
    }
    Ok(GroupCocycle::from_fn(&mu.group, n, |s, t| n.coords(psi.apply(mu.get_index(s, t)))))
}

/// A central extension with a chosen section `c: G -> E`, `c(e) = e`.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    n: AbelianGroup,
    n_group: FiniteGroup,
    g: FiniteGroup,
    e: FiniteGroup,
    iota: GroupHom,
    p: GroupHom,
    section: Vec<usize>,
    iota_inv: Vec<Option<usize>>,
}

impl CentralExtension {
    /// Validates all extension axioms exhaustively.
    pub fn new(
        n: AbelianGroup,
        g: FiniteGroup,
        e: FiniteGroup,
        iota: GroupHom,
        p: GroupHom,
        section: Vec<usize>,
    ) -> Result<Self, ExtError> {
        let bad = |m: &str| Err(ExtError::InvalidExtension(m.to_string()));
        if iota.source().order() != n.order() || *iota.target() != e {
            return bad("iota must map N into E");
        }
        if *p.source() != e || *p.target() != g {
            return bad("p must map E onto G");
        }
        let n_group = n.to_group();
        let iota = GroupHom::new(n_group.clone(), e.clone(), iota.images().to_vec())?;
        let p = GroupHom::new(e.clone(), g.clone(), p.images().to_vec())?;
        if !iota.is_injective() {
            return bad("iota is not injective");
        }
        if !p.is_surjective() {
            return bad("p is not surjective");
        }
        let image = iota.image();
        if image != p.kernel() {
            return bad("image of iota differs from the kernel of p");
        }
        if let Some(&z) = image.iter().find(|&&z| e.elements().any(|x| !e.commute(z, x))) {
            return Err(ExtError::InvalidExtension(format!("iota image element {z} is not central")));
        }
        if section.len() != g.order() {
            return bad("section has the wrong length");
        }
        if section[0] != 0 {
            return bad("section must send the identity to the identity");
        }
        if let Some(s) = g.elements().find(|&s| section[s] >= e.order() || p.apply(section[s]) != s) {
            return Err(ExtError::InvalidExtension(format!("section is not a lift at {s}")));
        }
        let mut iota_inv = vec![None; e.order()];
        for a in 0..n.order() {
            iota_inv[iota.apply(a)] = Some(a);
        }
        Ok(CentralExtension { n, n_group, g, e, iota, p, section, iota_inv })
    }

    /// Uses the least-index element of each fiber as the section.
    pub fn with_canonical_section(
        n: AbelianGroup,
        g: FiniteGroup,
        e: FiniteGroup,
        iota: GroupHom,
        p: GroupHom,
    ) -> Result<Self, ExtError> {
        let mut section = vec![usize::MAX; g.order()];
        for x in e.elements().rev() {
            if p.apply(x) < g.order() {
                section[p.apply(x)] = x;
            }
        }
        if section.contains(&usize::MAX) {
            return Err(ExtError::InvalidExtension("p is not surjective".into()));
        }
        CentralExtension::new(n, g, e, iota, p, section)
    }

    pub fn kernel(&self) -> &AbelianGroup {
        &self.n
    }

    pub fn kernel_group(&self) -> &FiniteGroup {
        &self.n_group
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn total(&self) -> &FiniteGroup {
        &self.e
    }

    pub fn iota(&self) -> &GroupHom {
        &self.iota
    }

    pub fn projection(&self) -> &GroupHom {
        &self.p
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    /// `iota^{-1}` on the image of `iota`.
    pub fn iota_inverse(&self, x: usize) -> Option<usize> {
        self.iota_inv[x]
    }

    /// Writes `x = iota(n) c(s)`, returning `(n, s)`.
    pub fn split(&self, x: usize) -> (usize, usize) {
        let s = self.p.apply(x);
        let n = self.iota_inv[self.e.mul(x, self.e.inv(self.section[s]))].expect("fiber element");
        (n, s)
    }

    /// `eta(s, t) = iota^{-1}(c(s) c(t) c(st)^{-1})`.
    pub fn cocycle(&self) -> GroupCocycle {
        let (e, c) = (&self.e, &self.section);
        GroupCocycle::from_fn(&self.g, &self.n, |s, t| {
            let x = e.mul(e.mul(c[s], c[t]), e.inv(c[self.g.mul(s, t)]));
            self.n.coords(self.iota_inv[x].expect("c(s)c(t)c(st)^-1 lies in N"))
        })
    }

    /// Replaces the section, keeping everything else.
    pub fn with_section(&self, section: Vec<usize>) -> Result<Self, ExtError> {
        CentralExtension::new(self.n.clone(), self.g.clone(), self.e.clone(), self.iota.clone(), self.p.clone(), section)
    }
}

/// `E = N x G` with `(n, s)(m, t) = (n + m + eta(s, t), st)` and `c(s) = (0, s)`.
pub fn extension_from_cocycle(eta: &GroupCocycle) -> Result<CentralExtension, ExtError> {
    if !eta.is_cocycle() {
        return Err(ExtError::NotACocycle);
    }
    let (g, n) = (&eta.group, &eta.n);
    let (gs, ns) = (g.order(), n.order());
    let size = gs * ns;
    let coords: Vec<Vec<u64>> = (0..ns).map(|i| n.coords(i)).collect();
    let eta_idx: Vec<Vec<u64>> = (0..gs * gs).map(|i| eta.get(i / gs, i % gs)).collect();
    let mut mul = vec![0usize; size * size];
    for a in 0..size {
        let (an, as_) = (a / gs, a % gs);
        for b in 0..size {
            let (bn, bs) = (b / gs, b % gs);
            let sum = n.add(&n.add(&coords[an], &coords[bn]), &eta_idx[as_ * gs + bs]);
            mul[a * size + b] = n.index_of(&sum) * gs + g.mul(as_, bs);
        }
    }
    let e = FiniteGroup::from_trusted_table(size, mul);
    let iota = GroupHom::new_trusted(n.to_group(), e.clone(), (0..ns).map(|i| i * gs).collect());
    let p = GroupHom::new_trusted(e.clone(), g.clone(), (0..size).map(|x| x % gs).collect());
    CentralExtension::new(n.clone(), g.clone(), e, iota, p, (0..gs).collect())
}

/// The isomorphism `E_eta -> E_{eta + db}`, `(n, s) -> (n - b(s), s)`, as an
/// index table between the two cocycle-built extensions.
pub fn coboundary_equivalence(eta: &GroupCocycle, b: &[Vec<u64>]) -> Result<(CentralExtension, Vec<usize>), ExtError> {
    let shifted = eta.add(&GroupCocycle::coboundary_of(&eta.group, &eta.n, b))?;
    let target = extension_from_cocycle(&shifted)?;
    let gs = eta.group.order();
    let n = &eta.n;
    let map = (0..gs * n.order())
        .map(|x| {
            let (ni, s) = (x / gs, x % gs);
            n.index_of(&n.add(&n.coords(ni), &n.neg(&b[s]))) * gs + s
        })
        .collect();
    Ok((target, map))
}

/// Coordinates in `H^2(G, T)` of the transgression of `chi`.
pub fn transgression(ext: &CentralExtension, h2: &H2Circle, chi: &[u64]) -> Result<Vec<u64>, ExtError> {
    if h2.group() != ext.base() {
        return Err(ExtError::GroupMismatch);
    }
    Ok(h2.class_of(&ext.cocycle().pair(chi))?)
}

/// Result of the pointwise-triviality test of an extension.
#[derive(Clone, Debug)]
pub struct PointwiseTrivialCheck {
    pub pointwise_trivial: bool,
    /// For each `chi` in `N^` (by index) a character of `E_ab` extending it.
    pub extensions: Vec<Option<usize>>,
    pub abelianization: Abelianization,
    /// Restriction `E_ab^ -> N^`.
    pub restriction: GroupHom,
}

/// Every character of `N` extends to `E`, cross-checked against pointwise
/// triviality of the family `chi o eta` over `N^`.
pub fn is_pointwise_trivial_extension(ext: &CentralExtension) -> Result<PointwiseTrivialCheck, ExtError> {
    let ab = grp::abelianization(ext.total());
    let n_to_ab = ext.iota().then(&ab.hom);
    let restriction = grp::dual_hom(&n_to_ab)?;
    let mut extensions = vec![None; ext.kernel().order()];
    for lambda in 0..ab.group.order() {
        let chi = restriction.apply(lambda);
        if extensions[chi].is_none() {
            extensions[chi] = Some(lambda);
        }
    }
    let pointwise_trivial = extensions.iter().all(Option::is_some);
    let solver = coh::pointwise_trivial(&ext.cocycle().over_dual());
    let agrees = match (&solver, pointwise_trivial) {
        (Ok(_), true) => true,
        (Err(CohError::NotPointwiseTrivial(_)), false) => true,
        (Err(e), _) if !matches!(e, CohError::NotPointwiseTrivial(_)) => return Err(e.clone().into()),
        _ => false,
    };
    if !agrees {
        return Err(ExtError::Internal("character extension and cocycle solver disagree".into()));
    }
    Ok(PointwiseTrivialCheck { pointwise_trivial, extensions, abelianization: ab, restriction })
}

/// A central extension of `G` by `Z` whose transgression `Z^ -> H^2(G, T)`
/// is bijective.
#[derive(Clone, Debug)]
pub struct RepresentationGroup {
    pub ext: CentralExtension,
    pub mu: GroupCocycle,
    pub h2: H2Circle,
    /// `tg(chi)` coordinates for each `chi` in `Z^` by index.
    pub tg_table: Vec<Vec<u64>>,
    lookup: HashMap<Vec<u64>, usize>,
}

impl RepresentationGroup {
    /// Verifies that `ext` is a representation group of its base.
    pub fn from_extension(ext: CentralExtension) -> Result<Self, ExtError> {
        let h2 = coh::h2_circle(ext.base())?;
        Self::with_h2(ext, h2)
    }

    fn with_h2(ext: CentralExtension, h2: H2Circle) -> Result<Self, ExtError> {
        let z = ext.kernel().clone();
        let mu = ext.cocycle();
        let mut tg_table = Vec::with_capacity(z.order());
        let mut lookup = HashMap::new();
        for chi in 0..z.order() {
            let c = h2.class_of(&mu.pair(&z.coords(chi)))?;
            if let Some(prev) = lookup.insert(c.clone(), chi) {
                return Err(ExtError::TransgressionNotBijective(format!(
                    "characters {prev} and {chi} have the same class"
                )));
            }
            tg_table.push(c);
        }
        if h2.order() != z.order() as u128 {
            return Err(ExtError::TransgressionNotBijective(format!(
                "|Z^| = {} but |H^2(G,T)| = {}",
                z.order(),
                h2.order()
            )));
        }
        // homomorphism check
        let inv = h2.invariants();
        for a in 0..z.order() {
            for b in 0..z.order() {
                let sum = z.index_of(&z.add(&z.coords(a), &z.coords(b)));
                let expect: Vec<u64> =
                    tg_table[a].iter().zip(&tg_table[b]).zip(inv).map(|((x, y), d)| (x + y) % d).collect();
                if tg_table[sum] != expect {
                    return Err(ExtError::TransgressionNotBijective("not a homomorphism".into()));
                }
            }
        }
        Ok(RepresentationGroup { ext, mu, h2, tg_table, lookup })
    }

    pub fn base(&self) -> &FiniteGroup {
        self.ext.base()
    }

    pub fn z(&self) -> &AbelianGroup {
        self.ext.kernel()
    }

    /// `tg^{-1}` on class coordinates.
    pub fn character_of_class(&self, coords: &[u64]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }
}

/// `Z = sum_{i<j} Z_{gcd(d_i, d_j)}` with `mu(a, b)_{ij} = a_i b_j`.
pub fn representation_group_abelian(g: &FiniteGroup) -> Result<RepresentationGroup, ExtError> {
    let ab = g.abelian_structure().ok_or(GroupError::NotAbelian)?.clone();
    let d = ab.factors();
    let mut pairs = Vec::new();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let m = crate::zmod::gcd(d[i], d[j]);
            if m > 1 {
                pairs.push((i, j, m));
            }
        }
    }
    let z = AbelianGroup::new(&pairs.iter().map(|p| p.2).collect::<Vec<_>>())?;
    let mu = GroupCocycle::from_fn(g, &z, |s, t| {
        let (a, b) = (ab.coords(s), ab.coords(t));
        pairs.iter().map(|&(i, j, m)| a[i] * b[j] % m).collect()
    });
    let ext = extension_from_cocycle(&mu)?;
    RepresentationGroup::from_extension(ext)
}

/// `phi: X -> Z^` with `u(x)` cohomologous to `phi(x) o mu`.
pub fn classify_cocycle(u: &Cochain, r: &RepresentationGroup) -> Result<Vec<usize>, ExtError> {
    if u.group() != r.base() {
        return Err(ExtError::GroupMismatch);
    }
    let mut phi = Vec::with_capacity(u.base_size());
    for x in 0..u.base_size() {
        let ux = u.evaluate_at(x)?;
        let coords = r.h2.class_of(&ux)?;
        let chi = r.character_of_class(&coords).ok_or(ExtError::NoClassFound(x))?;
        let diff = ux.divide(&r.mu.pair(&r.z().coords(chi)))?;
        if coh::is_coboundary_circle(&diff)?.is_none() {
            return Err(ExtError::NoClassFound(x));
        }
        phi.push(chi);
    }
    Ok(phi)
}

/// `u_phi(s, t)(x) = <phi(x), mu(s, t)>`.
pub fn build_u_phi(phi: &[usize], r: &RepresentationGroup) -> Cochain {
    let z = r.z();
    let g = r.base();
    Cochain::from_fn(g, 2, phi.len(), z.exponent(), |x, a| {
        z.pairing(&z.coords(phi[x]), &r.mu.get(a[0], a[1])) as i64
    })
    .unwrap()
}

/// Output of [`lift_to_abelianization`].
#[derive(Clone, Debug)]
pub struct Lift {
    /// Cocycle on `G_ab` over `X`.
    pub u_tilde: Cochain,
    /// `dg = -w + inf(u_tilde)`.
    pub g: Cochain,
    pub abelianization: Abelianization,
}

/// Moves a pointwise trivial cocycle on `G` to one on `G_ab`.
pub fn lift_to_abelianization(w: &Cochain) -> Result<Lift, ExtError> {
    let f = coh::pointwise_trivial(w).map_err(|e| match e {
        CohError::NotPointwiseTrivial(xs) => ExtError::NotPointwiseTrivial(xs),
        other => other.into(),
    })?;
    let g = w.group();
    let ab = grp::abelianization(g);
    let c = &ab.section;
    let m = f.modulus();
    let u_tilde = Cochain::from_fn(&ab.group, 2, w.base_size(), m, |x, a| {
        let (s, t) = (a[0], a[1]);
        f.get1(x, c[s]) as i64 + f.get1(x, c[t]) as i64 - f.get1(x, c[ab.group.mul(s, t)]) as i64
    })?;
    let gw = Cochain::from_fn(g, 1, w.base_size(), m, |x, a| {
        -(f.get1(x, a[0]) as i64) + f.get1(x, c[ab.hom.apply(a[0])]) as i64
    })?;
    let lhs = gw.coboundary()?;
    let rhs = u_tilde.inflate(&ab.hom)?.divide(w)?;
    if !lhs.same_values(&rhs) {
        return Err(ExtError::Internal("lifting identity dg = -w + inf(u~) failed".into()));
    }
    Ok(Lift { u_tilde, g: gw, abelianization: ab })
}

/// `u = dg + inf(v) + u_phi`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub phi: Vec<usize>,
    pub v: Cochain,
    pub g: Cochain,
    pub abelianization: Abelianization,
}

pub fn decompose(u: &Cochain, r: &RepresentationGroup) -> Result<Decomposition, ExtError> {
    let phi = classify_cocycle(u, r)?;
    let u_phi = build_u_phi(&phi, r);
    let w = u.divide(&u_phi)?;
    let lift = lift_to_abelianization(&w)?;
    let g = lift.g.invert();
    let rebuilt = g.coboundary()?.multiply(&lift.u_tilde.inflate(&lift.abelianization.hom)?)?.multiply(&u_phi)?;
    if !rebuilt.same_values(u) {
        return Err(ExtError::Internal("reconstruction u = dg + inf v + u_phi failed".into()));
    }
    Ok(Decomposition { phi, v: lift.u_tilde, g, abelianization: lift.abelianization })
}

/// Pulls an extension of `G_ab` back along `q: G -> G_ab`.
pub fn inflate_extension(m: &CentralExtension, q: &GroupHom) -> Result<CentralExtension, ExtError> {
    if m.base() != q.target() {
        return Err(ExtError::GroupMismatch);
    }
    let fp = grp::fiber_product(m.projection(), q);
    let index: HashMap<(usize, usize), usize> = fp.pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let g = q.source();
    let iota = (0..m.kernel().order()).map(|n| index[&(m.iota().apply(n), 0)]).collect();
    let section = g.elements().map(|s| index[&(m.section()[q.apply(s)], s)]).collect();
    CentralExtension::new(
        m.kernel().clone(),
        g.clone(),
        fp.group.clone(),
        GroupHom::new_trusted(m.kernel_group().clone(), fp.group.clone(), iota),
        fp.proj_right.clone(),
        section,
    )
}

/// `L' = {(l, h) : p(l) = q(h)} / Delta(Z)` and its structure maps.
#[derive(Clone, Debug)]
pub struct PrimeExtension {
    pub ext: CentralExtension,
    /// `phi = tg_R^{-1} o tg_L : N^ -> Z^`.
    pub phi: GroupHom,
    /// Dual `phi^ : Z -> N`.
    pub phi_hat: GroupHom,
}

pub fn prime_extension(l: &CentralExtension, r: &RepresentationGroup) -> Result<PrimeExtension, ExtError> {
    if l.base() != r.base() {
        return Err(ExtError::GroupMismatch);
    }
    let (n, z) = (l.kernel(), r.z());
    let phi_images = (0..n.order())
        .map(|chi| {
            let c = transgression(l, &r.h2, &n.coords(chi))?;
            r.character_of_class(&c).ok_or(ExtError::NoClassFound(chi))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let phi = GroupHom::new(n.dual().to_group(), z.dual().to_group(), phi_images)?;
    let phi_hat = grp::dual_hom(&phi)?;
    let h = &r.ext;
    let fp = grp::fiber_product(l.projection(), h.projection());
    let index: HashMap<(usize, usize), usize> = fp.pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut delta: Vec<usize> = (0..z.order())
        .map(|zi| index.get(&(l.iota().apply(phi_hat.apply(zi)), h.iota().apply(zi))).copied())
        .collect::<Option<Vec<_>>>()
        .ok_or(ExtError::DeltaNotSubgroup)?;
    delta.sort_unstable();
    if !fp.group.is_subgroup(&delta) || delta.iter().any(|&d| fp.group.elements().any(|x| !fp.group.commute(d, x))) {
        return Err(ExtError::DeltaNotSubgroup);
    }
    let quot = grp::quotient(&fp.group, &delta)?;
    let lp = quot.group.clone();
    let iota = (0..n.order()).map(|ni| quot.hom.apply(index[&(l.iota().apply(ni), 0)])).collect();
    let p = quot.representatives.iter().map(|&rep| l.projection().apply(fp.pairs[rep].0)).collect();
    let section = l
        .base()
        .elements()
        .map(|s| quot.hom.apply(index[&(l.section()[s], h.section()[s])]))
        .collect();
    let ext = CentralExtension::new(
        n.clone(),
        l.base().clone(),
        lp.clone(),
        GroupHom::new_trusted(n.to_group(), lp.clone(), iota),
        GroupHom::new_trusted(lp, l.base().clone(), p),
        section,
    )?;
    // cocycle of the product section is eta - phi^_* mu
    let expected = l.cocycle().add(&pushforward_cocycle(&phi_hat, &r.mu)?.neg())?;
    if ext.cocycle() != expected {
        return Err(ExtError::Internal("cocycle of L' differs from eta - phi^_*(mu)".into()));
    }
    if !is_pointwise_trivial_extension(&ext)?.pointwise_trivial {
        return Err(ExtError::Internal("L' is not pointwise trivial".into()));
    }
    Ok(PrimeExtension { ext, phi, phi_hat })
}

/// `H^2(G, N)` for `N = sum Z_{d_i}`, one `H^2(G, Z_{d_i})` per factor.
#[derive(Clone, Debug)]
pub struct H2WithCoefficients {
    pub n: AbelianGroup,
    pub factors: Vec<H2Mod>,
}

impl H2WithCoefficients {
    pub fn new(g: &FiniteGroup, n: &AbelianGroup) -> Result<Self, ExtError> {
        let factors = n.factors().iter().map(|&d| coh::h2_mod(g, d)).collect::<Result<_, _>>()?;
        Ok(H2WithCoefficients { n: n.clone(), factors })
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(H2Mod::order).product()
    }

    pub fn class_of(&self, eta: &GroupCocycle) -> Result<Vec<u64>, ExtError> {
        let mut out = Vec::new();
        for (h, part) in self.factors.iter().zip(eta.parts()) {
            out.extend(h.decompose_class(part)?);
        }
        Ok(out)
    }

    /// One representative per class.
    pub fn representatives(&self, g: &FiniteGroup) -> Vec<GroupCocycle> {
        let invs: Vec<u64> = self.factors.iter().flat_map(|h| h.invariants().to_vec()).collect();
        let total: u128 = invs.iter().map(|&d| d as u128).product();
        let mut out = Vec::new();
        for code in 0..total {
            let mut rest = code;
            let mut coords = Vec::with_capacity(invs.len());
            for &d in invs.iter().rev() {
                coords.push((rest % d as u128) as u64);
                rest /= d as u128;
            }
            coords.reverse();
            let mut offset = 0;
            let parts = self
                .factors
                .iter()
                .map(|h| {
                    let k = h.invariants().len();
                    let c = h.cocycle_from_coords(&coords[offset..offset + k]);
                    offset += k;
                    c
                })
                .collect();
            out.push(GroupCocycle::new(g, &self.n, parts).expect("factor moduli match"));
        }
        out
    }
}

/// Verified data for `H^2_ab(G_ab, N) x Hom(Z, N) = H^2(G, N)`.
#[derive(Clone, Debug)]
pub struct H2GroupDecomposition {
    pub h2_order: u128,
    pub h2_ab_order: u128,
    pub hom_count: u128,
    /// `((abelian class index, hom index), H^2(G, N) coordinates)`.
    pub forward: Vec<((usize, usize), Vec<u64>)>,
    pub bijective: bool,
    pub roundtrips_ok: bool,
}

/// All homomorphisms between two abelian groups, by generator images.
pub fn all_homs(source: &FiniteGroup, target: &FiniteGroup) -> Result<Vec<GroupHom>, ExtError> {
    let a = source.abelian_structure().ok_or(GroupError::NotAbelian)?;
    let b = target.abelian_structure().ok_or(GroupError::NotAbelian)?;
    let choices: Vec<Vec<usize>> = a
        .factors()
        .iter()
        .map(|&d| (0..b.order()).filter(|&y| d % target.element_order(y) == 0).collect())
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let gens: Vec<Vec<u64>> = pick.iter().zip(&choices).map(|(&i, c)| b.coords(c[i])).collect();
        let images = (0..a.order())
            .map(|x| {
                let cx = a.coords(x);
                let mut acc = vec![0u64; b.rank()];
                for (k, &c) in cx.iter().enumerate() {
                    acc = b.add(&acc, &b.scale(&gens[k], c));
                }
                b.index_of(&acc)
            })
            .collect();
        out.push(GroupHom::new_trusted(source.clone(), target.clone(), images));
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(out);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

pub fn decompose_h2_group(
    g: &FiniteGroup,
    n: &AbelianGroup,
    r: &RepresentationGroup,
) -> Result<H2GroupDecomposition, ExtError> {
    if r.base() != g {
        return Err(ExtError::GroupMismatch);
    }
    let ab = grp::abelianization(g);
    let h2 = H2WithCoefficients::new(g, n)?;
    let h2_ab_all = H2WithCoefficients::new(&ab.group, n)?;
    // classes of abelian extensions of G_ab
    let mut ab_classes = Vec::new();
    for rep in h2_ab_all.representatives(&ab.group) {
        if extension_from_cocycle(&rep)?.total().is_abelian() {
            ab_classes.push(rep);
        }
    }
    let n_group = n.to_group();
    let homs = all_homs(r.ext.kernel_group(), &n_group)?;
    let mut forward = Vec::new();
    let mut seen: BTreeMap<Vec<u64>, (usize, usize)> = BTreeMap::new();
    let mut bijective = true;
    for (ai, eta_t) in ab_classes.iter().enumerate() {
        let inf = eta_t.inflate(&ab.hom)?;
        for (hi, psi) in homs.iter().enumerate() {
            let total = inf.add(&pushforward_cocycle(psi, &r.mu)?)?;
            let c = h2.class_of(&total)?;
            if seen.insert(c.clone(), (ai, hi)).is_some() {
                bijective = false;
            }
            forward.push(((ai, hi), c));
        }
    }
    let count = ab_classes.len() as u128 * homs.len() as u128;
    bijective &= count == h2.order();

    // inverse: split off the transgression part, then pass to L'_ab
    let mut roundtrips_ok = true;
    for eta in h2.representatives(g) {
        let l = extension_from_cocycle(&eta)?;
        let phi_images = (0..n.order())
            .map(|chi| {
                let c = transgression(&l, &r.h2, &n.coords(chi))?;
                r.character_of_class(&c).ok_or(ExtError::NoClassFound(chi))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let phi = GroupHom::new(n.dual().to_group(), r.z().dual().to_group(), phi_images)?;
        let psi = grp::dual_hom(&phi)?;
        let rest = eta.add(&pushforward_cocycle(&psi, &r.mu)?.neg())?;
        let lp = extension_from_cocycle(&rest)?;
        let eta_t = abelian_part(&lp, &ab)?;
        let rebuilt = eta_t.inflate(&ab.hom)?.add(&pushforward_cocycle(&psi, &r.mu)?)?;
        let ok_class = h2.class_of(&rebuilt)? == h2.class_of(&eta)?;
        let hi = homs.iter().position(|h| h.images() == psi.images());
        let ai_class = h2_ab_all.class_of(&eta_t)?;
        let ai = ab_classes.iter().position(|c| h2_ab_all.class_of(c).is_ok_and(|cc| cc == ai_class));
        let ok_index = match (ai, hi) {
            (Some(ai), Some(hi)) => seen.get(&h2.class_of(&eta)?) == Some(&(ai, hi)),
            _ => false,
        };
        roundtrips_ok &= ok_class && ok_index;
    }
    Ok(H2GroupDecomposition {
        h2_order: h2.order(),
        h2_ab_order: ab_classes.len() as u128,
        hom_count: homs.len() as u128,
        forward,
        bijective,
        roundtrips_ok,
    })
}

/// For a pointwise trivial `L`, the cocycle of `1 -> N -> L_ab -> G_ab -> 1`.
fn abelian_part(l: &CentralExtension, g_ab: &Abelianization) -> Result<GroupCocycle, ExtError> {
    let lab = grp::abelianization(l.total());
    let n_to_lab = l.iota().then(&lab.hom);
    if !n_to_lab.is_injective() {
        return Err(ExtError::NotPointwiseTrivial(Vec::new()));
    }
    // L_ab -> G_ab induced by p
    let images: Vec<usize> = (0..lab.group.order())
        .map(|y| g_ab.hom.apply(l.projection().apply(lab.section[y])))
        .collect();
    let p = GroupHom::new(lab.group.clone(), g_ab.group.clone(), images)?;
    let ext = CentralExtension::with_canonical_section(l.kernel().clone(), g_ab.group.clone(), lab.group.clone(), n_to_lab, p)?;
    Ok(ext.cocycle())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::coh::bilinear_cocycle;
    use crate::grp::make_abelian;

    fn klein_eta() -> GroupCocycle {
        let g = make_abelian(&[2, 2]).unwrap();
        let w = bilinear_cocycle(&g, 0, 1).unwrap();
        GroupCocycle::new(&g, &AbelianGroup::new(&[2]).unwrap(), vec![w]).unwrap()
    }

    #[test]
    fn klein_extension_is_dihedral() {
        let ext = extension_from_cocycle(&klein_eta()).unwrap();
        let e = ext.total();
        e.validate().unwrap();
        assert_eq!(e.order(), 8);
        assert_eq!(e.center().len(), 2);
        assert_eq!(e.exponent(), 4);
        assert_eq!(ext.cocycle(), klein_eta());
    }

    #[test]
    fn z4_over_z2() {
        let z4 = make_abelian(&[4]).unwrap();
        let z2 = make_abelian(&[2]).unwrap();
        let iota = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let p = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let ext = CentralExtension::new(AbelianGroup::new(&[2]).unwrap(), z2, z4, iota, p, vec![0, 1]).unwrap();
        assert_eq!(ext.cocycle().get(1, 1), vec![1]);
        let check = is_pointwise_trivial_extension(&ext).unwrap();
        assert!(check.pointwise_trivial);
    }

    #[test]
    fn dihedral_over_klein_is_not_pointwise_trivial() {
        let ext = extension_from_cocycle(&klein_eta()).unwrap();
        let check = is_pointwise_trivial_extension(&ext).unwrap();
        assert!(!check.pointwise_trivial);
        assert_eq!(check.extensions, vec![Some(0), None]);
    }

    #[test]
    fn representation_groups() {
        for factors in [vec![5], vec![2, 2], vec![3, 3], vec![2, 4], vec![6, 4]] {
            let g = make_abelian(&factors).unwrap();
            let r = representation_group_abelian(&g).unwrap();
            assert_eq!(r.tg_table.len() as u128, r.h2.order());
        }
        let r = representation_group_abelian(&make_abelian(&[2, 4]).unwrap()).unwrap();
        assert_eq!(r.ext.total().order(), 16);
    }

    #[test]
    fn coboundary_equivalence_respects_structure() {
        let eta = klein_eta();
        let b = vec![vec![0], vec![1], vec![0], vec![1]];
        let source = extension_from_cocycle(&eta).unwrap();
        let (target, map) = coboundary_equivalence(&eta, &b).unwrap();
        let (e1, e2) = (source.total(), target.total());
        for x in e1.elements() {
            for y in e1.elements() {
                assert_eq!(map[e1.mul(x, y)], e2.mul(map[x], map[y]));
            }
            assert_eq!(target.projection().apply(map[x]), source.projection().apply(x));
        }
        for n in 0..2 {
            assert_eq!(map[source.iota().apply(n)], target.iota().apply(n));
        }
    }

    #[test]
    fn prime_extension_of_heisenberg() {
        let g = make_abelian(&[3, 3]).unwrap();
        let r = representation_group_abelian(&g).unwrap();
        let lp = prime_extension(&r.ext, &r).unwrap();
        assert_eq!(lp.ext.total().order(), 27);
        assert!(lp.ext.total().is_abelian());
        assert!(is_pointwise_trivial_extension(&lp.ext).unwrap().pointwise_trivial);
    }

    #[test]
    fn h2_group_decomposition_klein() {
        let g = make_abelian(&[2, 2]).unwrap();
        let r = representation_group_abelian(&g).unwrap();
        let d = decompose_h2_group(&g, &AbelianGroup::new(&[2]).unwrap(), &r).unwrap();
        // Ext(Z_2^2, Z_2) = Z_2^2 and Hom(Z_2, Z_2) = Z_2
        assert_eq!(d.h2_order, 8);
        assert_eq!((d.h2_ab_order, d.hom_count), (4, 2));
        assert!(d.bijective && d.roundtrips_ok);
    }

    #[test]
    fn inflated_extension_over_d4() {
        let d4 = catalog::dihedral(4);
        let ab = grp::abelianization(&d4);
        // Z_4 x Z_2 over Z_2 x Z_2: abelian extension with a carry in the first factor
        let eta = GroupCocycle::from_fn(&ab.group, &AbelianGroup::new(&[2]).unwrap(), |s, t| {
            let (a, b) = (ab.structure.coords(s), ab.structure.coords(t));
            vec![(a[0] + b[0]) / 2]
        });
        let m = extension_from_cocycle(&eta).unwrap();
        let inf = inflate_extension(&m, &ab.hom).unwrap();
        assert_eq!(inf.total().order(), 16);
        inf.total().validate().unwrap();
        assert_eq!(inf.cocycle(), eta.inflate(&ab.hom).unwrap());
    }
}
