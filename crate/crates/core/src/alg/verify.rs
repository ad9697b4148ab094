//! Finite-scale checks of the decomposition and structure results for
//! central twisted crossed products.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    block_space, check_intertwines, crossed_product, dual_action, equivariant_block_bijection, fibered_product_algebra,
    group_algebra, group_algebra_of_extension, induced_algebra, lcm, lift, pull_back_algebra, tensor_product,
    twisted_group_algebra, AlgError, FiberedAlgebra, MonomialMap, MonomialStarAlgebra, NumericSettings,
};
use crate::bundle::{self, build_zu};
use crate::coh::{Cochain, CohError};
use crate::ext::{self, CentralExtension, RepresentationGroup};
use crate::grp::{self, Abelianization, FiniteGroup, GroupError};

/// A one-dimensional `*`-representation `delta_s -> zeta_M^{f(s)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Character {
    pub exponents: Vec<u64>,
    pub modulus: u64,
}

/// All characters of a commutative `C[G, omega]`, found by solving `df = omega`
/// exactly and re-checked against the structure constants.
pub fn characters(a: &MonomialStarAlgebra) -> Result<Vec<Character>, AlgError> {
    if !a.is_commutative() {
        return Err(AlgError::NotCommutative);
    }
    let omega = a.twisting().ok_or_else(|| AlgError::Incompatible("algebra is not a twisted group algebra".into()))?;
    let zu = build_zu(omega)?;
    let m = zu.modulus();
    let am = a.modulus();
    let mut out = Vec::with_capacity(zu.len());
    for i in 0..zu.len() {
        let f = zu.point(i).to_vec();
        for s in 0..a.dim() {
            for t in 0..a.dim() {
                let (c, e) = a.product(s, t).expect("twisted group algebras have no zero products");
                if (f[s] + f[t]) % m != (lift(e, am, m) + f[c]) % m {
                    return Err(AlgError::Structure(format!("solution {i} is not multiplicative")));
                }
            }
            let (c, j) = a.star(s);
            if (lift(j, am, m) + f[c]) % m != (m - f[s]) % m {
                return Err(AlgError::Structure(format!("solution {i} does not respect the involution")));
            }
        }
        out.push(Character { exponents: f, modulus: m });
    }
    if out.len() != a.dim() {
        return Err(AlgError::Structure(format!("found {} characters for dimension {}", out.len(), a.dim())));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemPointwiseReport {
    pub base_size: usize,
    pub group_order: usize,
    pub symmetric: bool,
    pub commutative: bool,
    pub characters_per_fiber: Vec<usize>,
    pub bijective: bool,
    pub equivariant: bool,
    pub pass: bool,
}

/// For abelian `G` and pointwise trivial `v`: the crossed product is
/// commutative and its characters, with the dual action, are the bundle `Z_v`
/// under `(f, x) -> eps_x x f`.
pub fn verify_lem_pointwise(v: &Cochain) -> Result<LemPointwiseReport, AlgError> {
    let g = v.group();
    if !g.is_abelian() {
        return Err(GroupError::NotAbelian.into());
    }
    let mut report = LemPointwiseReport {
        base_size: v.base_size(),
        group_order: g.order(),
        symmetric: v.is_symmetric(),
        commutative: false,
        characters_per_fiber: Vec::new(),
        bijective: false,
        equivariant: false,
        pass: false,
    };
    let cp = crossed_product(v)?;
    report.commutative = cp.algebra.fibers().iter().all(|f| f.is_commutative());
    if !report.symmetric || !report.commutative {
        return Ok(report);
    }
    let zu = build_zu(v)?;
    let lam = cp.algebra.acting_group().clone();
    let neg = |gamma: usize| lam.index_of(&lam.neg(&lam.coords(gamma)));
    let (mut bijective, mut equivariant) = (true, true);
    for x in 0..v.base_size() {
        let chars = characters(cp.algebra.fiber(x))?;
        report.characters_per_fiber.push(chars.len());
        let points: Vec<Option<usize>> = chars.iter().map(|c| zu.find(x, &c.exponents, c.modulus)).collect();
        let mut hit: Vec<usize> = points.iter().flatten().copied().collect();
        hit.sort_unstable();
        hit.dedup();
        bijective &= points.iter().all(Option::is_some) && hit.len() == zu.fiber_size() && chars.len() == zu.fiber_size();
        // (gamma . chi)(a) = chi(alpha_{gamma^-1}(a))
        for (c, p) in chars.iter().zip(&points) {
            let Some(p) = *p else { continue };
            for gamma in 0..lam.order() {
                let act = &cp.algebra.action(x)[neg(gamma)];
                let l = lcm(c.modulus, act.modulus)?;
                let moved: Vec<u64> = (0..c.exponents.len())
                    .map(|s| {
                        let (t, k) = act.apply(s);
                        (lift(k, act.modulus, l) + lift(c.exponents[t], c.modulus, l)) % l
                    })
                    .collect();
                equivariant &= zu.find(x, &moved, l) == Some(zu.act(gamma, p));
            }
        }
    }
    report.bijective = bijective;
    report.equivariant = equivariant;
    report.pass = report.symmetric && report.commutative && bijective && equivariant;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct PropDecomReport {
    pub base_size: usize,
    pub dim: usize,
    /// The iterated algebra is associative with a `*`-structure.
    pub structure_valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_trivial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_trivial: Option<bool>,
    pub isomorphism: bool,
    pub equivariant: bool,
    pub pass: bool,
}

/// `(lambda, nu, gamma)` with `gamma o q_{LxN} = lambda o q_L + nu o q_N`.
fn product_characters(
    ab_l: &Abelianization,
    ab_n: &Abelianization,
    dp: &grp::DirectProduct,
    ab_dp: &Abelianization,
) -> Result<Vec<(usize, usize, usize)>, AlgError> {
    let (sl, sn, sd) = (&ab_l.structure, &ab_n.structure, &ab_dp.structure);
    let m = lcm(lcm(sl.exponent(), sn.exponent())?, sd.exponent())?;
    let values = |gamma: usize| -> Vec<u64> {
        let gc = sd.coords(gamma);
        dp.group.elements().map(|s| lift(sd.pairing(&gc, &sd.coords(ab_dp.hom.apply(s))), sd.exponent(), m)).collect()
    };
    let table: BTreeMap<Vec<u64>, usize> = (0..sd.order()).map(|g| (values(g), g)).collect();
    let mut out = Vec::with_capacity(sl.order() * sn.order());
    for lam in 0..sl.order() {
        for nu in 0..sn.order() {
            let (lc, nc) = (sl.coords(lam), sn.coords(nu));
            let f: Vec<u64> = dp
                .group
                .elements()
                .map(|s| {
                    let (a, b) = (dp.proj_left.apply(s), dp.proj_right.apply(s));
                    let x = lift(sl.pairing(&lc, &sl.coords(ab_l.hom.apply(a))), sl.exponent(), m);
                    let y = lift(sn.pairing(&nc, &sn.coords(ab_n.hom.apply(b))), sn.exponent(), m);
                    (x + y) % m
                })
                .collect();
            let gamma = *table
                .get(&f)
                .ok_or_else(|| AlgError::Incompatible("product character is not a character of the product".into()))?;
            out.push((lam, nu, gamma));
        }
    }
    Ok(out)
}

/// `(C(X) x_u N) x_{beta,w} L` against `C(X) x_u (L x N)` through
/// `Phi(delta_(x,(l,n))) = conj(u((e,n),(l,e))(x)) delta_(x,n) delta_l`.
pub fn verify_prop_decom(l: &FiniteGroup, n: &FiniteGroup, u: &Cochain) -> Result<PropDecomReport, AlgError> {
    let dp = grp::direct_product(l, n);
    if u.group() != &dp.group || u.degree() != 2 {
        return Err(AlgError::Incompatible("cocycle must live on L x N".into()));
    }
    if !u.is_cocycle() {
        return Err(CohError::NotACocycle.into());
    }
    if !u.is_normalized() {
        return Err(AlgError::Incompatible("cocycle must be normalized".into()));
    }
    let (nl, nn, nx) = (l.order(), n.order(), u.base_size());
    let ng = nl * nn;
    let m = u.modulus();
    let le = |a: usize| nn * a;
    let en = |b: usize| b;
    let uu = |x: usize, s: usize, t: usize| u.get2(x, s, t);
    let beta = |x: usize, a: usize, b: usize| (uu(x, le(a), en(b)) + m - uu(x, en(b), le(a))) % m;
    let w = |x: usize, a: usize, h: usize| uu(x, le(a), le(h));
    let idx = |x: usize, b: usize, a: usize| x * ng + b * nl + a;
    let d = nx * ng;
    let mut labels = vec![String::new(); d];
    let mut target = vec![super::ZERO; d * d];
    let mut exponent = vec![0u64; d * d];
    for x in 0..nx {
        for b in 0..nn {
            for a in 0..nl {
                let i = idx(x, b, a);
                labels[i] = format!("{x}:{}.{}", n.label(b), l.label(a));
                for b2 in 0..nn {
                    for h in 0..nl {
                        let j = idx(x, b2, h);
                        target[i * d + j] = idx(x, n.mul(b, b2), l.mul(a, h));
                        exponent[i * d + j] = (beta(x, a, b2) + uu(x, en(b), en(b2)) + w(x, a, h)) % m;
                    }
                }
            }
        }
    }
    let mut report = PropDecomReport {
        base_size: nx,
        dim: d,
        structure_valid: false,
        beta_trivial: Some((0..nx).all(|x| (0..nl).all(|a| (0..nn).all(|b| beta(x, a, b) == 0)))),
        w_trivial: Some((0..nx).all(|x| (0..nl).all(|a| (0..nl).all(|h| w(x, a, h) == 0)))),
        isomorphism: false,
        equivariant: false,
        pass: false,
    };
    let right = match MonomialStarAlgebra::from_unitary_tables(labels, m, target, exponent) {
        Ok(r) => r,
        Err(AlgError::Structure(_)) => return Ok(report),
        Err(e) => return Err(e),
    };
    report.structure_valid = true;
    let cp = crossed_product(u)?;
    let left = cp.algebra.total()?;
    let phi = MonomialMap {
        target: (0..d).map(|i| idx(i / ng, (i % ng) % nn, (i % ng) / nn)).collect(),
        exponent: (0..d).map(|i| (m - uu(i / ng, en((i % ng) % nn), le((i % ng) / nn))) % m).collect(),
        modulus: m,
    };
    report.isomorphism = phi.check_star_iso(&left, &right).is_ok();

    let (ab_l, ab_n, ab_dp) = (grp::abelianization(l), grp::abelianization(n), grp::abelianization(&dp.group));
    let dual_dp = dual_action(&dp.group, &ab_dp);
    let dual_l = dual_action(l, &ab_l);
    let dual_n = dual_action(n, &ab_n);
    let pairs = product_characters(&ab_l, &ab_n, &dp, &ab_dp)?;
    let mut left_acts = Vec::with_capacity(pairs.len());
    let mut right_acts = Vec::with_capacity(pairs.len());
    for &(lam, nu, gamma) in &pairs {
        let g = &dual_dp[gamma];
        left_acts.push(MonomialMap {
            target: (0..d).collect(),
            exponent: (0..d).map(|i| g.exponent[i % ng]).collect(),
            modulus: g.modulus,
        });
        // nu acts on C(X) x N, lambda on the outer L-variable
        let (al, an) = (&dual_l[lam], &dual_n[nu]);
        let mm = lcm(al.modulus, an.modulus)?;
        right_acts.push(MonomialMap {
            target: (0..d).collect(),
            exponent: (0..d)
                .map(|i| {
                    let r = i % ng;
                    let (b, a) = (r / nl, r % nl);
                    (lift(al.exponent[a], al.modulus, mm) + lift(an.exponent[b], an.modulus, mm)) % mm
                })
                .collect(),
            modulus: mm,
        });
    }
    report.equivariant = report.isomorphism && check_intertwines(&phi, &left_acts, &right_acts).is_ok();
    report.pass = report.structure_valid && report.isomorphism && report.equivariant;
    Ok(report)
}

/// `C[L x N, u(x) v(x)] = C[L, u(x)] (x) C[N, v(x)]` fiberwise through the
/// Kronecker basis map, with `L_ab^ x N_ab^`-equivariance.
pub fn verify_prop_decom1(l: &FiniteGroup, n: &FiniteGroup, u: &Cochain, v: &Cochain) -> Result<PropDecomReport, AlgError> {
    if u.group() != l || v.group() != n || u.degree() != 2 || v.degree() != 2 {
        return Err(AlgError::Incompatible("cocycles must live on L and N".into()));
    }
    if u.base_size() != v.base_size() {
        return Err(AlgError::Incompatible("cocycles have different bases".into()));
    }
    let dp = grp::direct_product(l, n);
    let m = lcm(u.modulus(), v.modulus())?;
    let (u, v) = (u.rescale(m)?, v.rescale(m)?);
    let nn = n.order();
    let uv = Cochain::from_fn(&dp.group, 2, u.base_size(), m, |x, s| {
        let (a1, b1, a2, b2) = (s[0] / nn, s[0] % nn, s[1] / nn, s[1] % nn);
        (u.get2(x, a1, a2) + v.get2(x, b1, b2)) as i64
    })?;
    let left = crossed_product(&uv)?;
    let (ab_l, ab_n, ab_dp) = (grp::abelianization(l), grp::abelianization(n), grp::abelianization(&dp.group));
    let dual_dp = dual_action(&dp.group, &ab_dp);
    let (dual_l, dual_n) = (dual_action(l, &ab_l), dual_action(n, &ab_n));
    let pairs = product_characters(&ab_l, &ab_n, &dp, &ab_dp)?;
    let ng = dp.group.order();
    let mut report = PropDecomReport {
        base_size: u.base_size(),
        dim: u.base_size() * ng,
        structure_valid: true,
        beta_trivial: None,
        w_trivial: None,
        isomorphism: true,
        equivariant: true,
        pass: false,
    };
    for x in 0..u.base_size() {
        let right = match (|| tensor_product(&twisted_group_algebra(&u.evaluate_at(x)?)?, &twisted_group_algebra(&v.evaluate_at(x)?)?))() {
            Ok(r) => r,
            Err(AlgError::Structure(_)) => {
                report.structure_valid = false;
                continue;
            }
            Err(e) => return Err(e),
        };
        let kron = MonomialMap { target: (0..ng).collect(), exponent: vec![0; ng], modulus: 1 };
        if kron.check_star_iso(left.algebra.fiber(x), &right).is_err() {
            report.isomorphism = false;
            continue;
        }
        let mut la = Vec::with_capacity(pairs.len());
        let mut ra = Vec::with_capacity(pairs.len());
        for &(lam, nu, gamma) in &pairs {
            la.push(dual_dp[gamma].clone());
            let (al, an) = (&dual_l[lam], &dual_n[nu]);
            let mm = lcm(al.modulus, an.modulus)?;
            ra.push(MonomialMap {
                target: (0..ng).collect(),
                exponent: (0..ng)
                    .map(|s| (lift(al.exponent[s / nn], al.modulus, mm) + lift(an.exponent[s % nn], an.modulus, mm)) % mm)
                    .collect(),
                modulus: mm,
            });
        }
        report.equivariant &= check_intertwines(&kron, &la, &ra).is_ok();
    }
    report.pass = report.structure_valid && report.isomorphism && report.equivariant;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureCase {
    ThmPt,
    ThmGeneral,
    CorPtGroup,
    ThmGroupex,
}

impl StructureCase {
    pub fn name(&self) -> &'static str {
        match self {
            StructureCase::ThmPt => "thm-pt",
            StructureCase::ThmGeneral => "thm-general",
            StructureCase::CorPtGroup => "cor-pt-group",
            StructureCase::ThmGroupex => "thm-groupex",
        }
    }
}

/// Inputs of the four structure comparisons.
#[derive(Clone, Debug)]
pub enum StructureInput {
    /// `u` with constant class; `omega` defaults to `u` at the first base point.
    ThmPt { u: Cochain, omega: Option<Cochain> },
    ThmGeneral { u: Cochain, rep: RepresentationGroup },
    /// A pointwise trivial extension.
    CorPtGroup { ext: CentralExtension },
    ThmGroupex { ext: CentralExtension, rep: RepresentationGroup },
}

impl StructureInput {
    pub fn case(&self) -> StructureCase {
        match self {
            StructureInput::ThmPt { .. } => StructureCase::ThmPt,
            StructureInput::ThmGeneral { .. } => StructureCase::ThmGeneral,
            StructureInput::CorPtGroup { .. } => StructureCase::CorPtGroup,
            StructureInput::ThmGroupex { .. } => StructureCase::ThmGroupex,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberComparison {
    pub x: usize,
    pub left_profile: Vec<usize>,
    pub right_profile: Vec<usize>,
    pub left_count: usize,
    pub right_count: usize,
    pub count_match: bool,
    pub profile_match: bool,
    pub equivariant_bijection: bool,
    /// `(block size, stabilizer, multiplicity)` for the left side.
    pub orbit_types: Vec<(usize, Vec<usize>, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub x: usize,
    pub which: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub case: StructureCase,
    pub base_size: usize,
    pub acting_order: usize,
    /// Whether equal profiles (isomorphism) are required rather than flagged.
    pub profile_asserted: bool,
    pub preconditions: BTreeMap<String, bool>,
    pub fibers: Vec<FiberComparison>,
    pub mismatches: Vec<Mismatch>,
    /// Profile differences where only Morita-level invariants are claimed.
    pub flags: Vec<Mismatch>,
    pub pass: bool,
}

impl StructureReport {
    /// The first mismatch as an error.
    pub fn check(&self) -> Result<(), AlgError> {
        match self.mismatches.first() {
            None => Ok(()),
            Some(m) => Err(AlgError::MismatchAt { x: m.x, which: m.which.clone(), left: m.left.clone(), right: m.right.clone() }),
        }
    }
}

struct Sides {
    left: FiberedAlgebra,
    right: FiberedAlgebra,
    preconditions: BTreeMap<String, bool>,
}

fn build_sides(input: &StructureInput) -> Result<Sides, AlgError> {
    let mut pre = BTreeMap::new();
    match input {
        StructureInput::ThmPt { u, omega } => {
            let omega = match omega {
                Some(o) => o.clone(),
                None => u.evaluate_at(0)?,
            };
            if omega.group() != u.group() || omega.base_size() != 1 {
                return Err(AlgError::Incompatible("omega must be a single cocycle on the same group".into()));
            }
            let v = u.divide(&omega.constant_over(u.base_size())?)?;
            let zv = build_zu(&v)?;
            pre.insert("v_pointwise_trivial".into(), true);
            let g = u.group();
            let ab = grp::abelianization(g);
            let left = crossed_product(u)?.algebra;
            let right = induced_algebra(&zv, &twisted_group_algebra(&omega)?, &dual_action(g, &ab))?.algebra;
            Ok(Sides { left, right, preconditions: pre })
        }
        StructureInput::ThmGeneral { u, rep } => {
            let phi = ext::classify_cocycle(u, rep)?;
            let v = u.divide(&ext::build_u_phi(&phi, rep))?;
            let zv = build_zu(&v)?;
            pre.insert("v_pointwise_trivial".into(), true);
            let h = group_algebra_of_extension(&rep.ext)?;
            let left = crossed_product(u)?.algebra;
            let right = fibered_product_algebra(&zv, &pull_back_algebra(&phi, &h.fibered)?)?.algebra;
            Ok(Sides { left, right, preconditions: pre })
        }
        StructureInput::CorPtGroup { ext } => {
            let psi = bundle::psi_iso_checked(ext)?;
            pre.insert("extension_pointwise_trivial".into(), true);
            pre.insert("psi_equivariant_bundle_iso".into(), true);
            let g = ext.base();
            let ab = grp::abelianization(g);
            let left = group_algebra_of_extension(ext)?.fibered;
            let right = induced_algebra(&psi.bundle, &group_algebra(g), &dual_action(g, &ab))?.algebra;
            Ok(Sides { left, right, preconditions: pre })
        }
        StructureInput::ThmGroupex { ext, rep } => {
            let prime = ext::prime_extension(ext, rep)?;
            pre.insert("prime_pointwise_trivial".into(), true);
            pre.insert("prime_section_cocycle".into(), true);
            let psi = bundle::psi_iso(&prime.ext)?;
            pre.insert("psi_equivariant_bundle_iso".into(), true);
            let phi: Vec<usize> = (0..ext.kernel().order()).map(|chi| prime.phi.apply(chi)).collect();
            let h = group_algebra_of_extension(&rep.ext)?;
            let left = group_algebra_of_extension(ext)?.fibered;
            let right = fibered_product_algebra(&psi.bundle, &pull_back_algebra(&phi, &h.fibered)?)?.algebra;
            Ok(Sides { left, right, preconditions: pre })
        }
    }
}

/// Builds both sides of a structure result as fibered algebras and compares
/// them at every base point: block counts, block profiles (required only
/// when isomorphism is claimed) and an equivariant bijection of block spaces.
pub fn verify_structure_theorem(input: &StructureInput, settings: &NumericSettings) -> Result<StructureReport, AlgError> {
    let case = input.case();
    let sides = build_sides(input)?;
    let (left, right) = (&sides.left, &sides.right);
    if left.base_size() != right.base_size() || left.acting_group() != right.acting_group() {
        return Err(AlgError::Incompatible("the two sides live over different bases or groups".into()));
    }
    let profile_asserted = case == StructureCase::CorPtGroup;
    let ls = block_space(left, &settings.derive(1 << 32))?;
    let rs = block_space(right, &settings.derive(2 << 32))?;
    let mut fibers = Vec::with_capacity(left.base_size());
    let mut mismatches = Vec::new();
    let mut flags = Vec::new();
    for x in 0..left.base_size() {
        let (lf, rf) = (&ls.fibers[x], &rs.fibers[x]);
        let (lp, rp) = (lf.profile(), rf.profile());
        let count_match = lf.exact_count == rf.exact_count && lp.count() == rp.count();
        let profile_match = lp == rp;
        let bijection = equivariant_block_bijection(lf, rf, profile_asserted).is_some();
        let mk = |which: &str| Mismatch { x, which: which.into(), left: lp.sizes().to_vec(), right: rp.sizes().to_vec() };
        if !count_match {
            mismatches.push(mk("block_count"));
        }
        if !profile_match {
            if profile_asserted {
                mismatches.push(mk("block_profile"));
            } else {
                flags.push(mk("block_profile"));
            }
        }
        if !bijection {
            mismatches.push(mk("equivariant_block_bijection"));
        }
        fibers.push(FiberComparison {
            x,
            left_profile: lp.sizes().to_vec(),
            right_profile: rp.sizes().to_vec(),
            left_count: lf.exact_count,
            right_count: rf.exact_count,
            count_match,
            profile_match,
            equivariant_bijection: bijection,
            orbit_types: lf.orbit_types(),
        });
    }
    let pass = mismatches.is_empty() && sides.preconditions.values().all(|&b| b);
    Ok(StructureReport {
        case,
        base_size: left.base_size(),
        acting_order: left.acting_group().order(),
        profile_asserted,
        preconditions: sides.preconditions,
        fibers,
        mismatches,
        flags,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ext::{extension_from_cocycle, representation_group_abelian, GroupCocycle};
    use crate::grp::{make_abelian, AbelianGroup};

    #[test]
    fn characters_of_twisted_z2() {
        let g = make_abelian(&[2]).unwrap();
        let u = Cochain::from_values(&g, 2, 1, 2, vec![0, 0, 0, 1]).unwrap();
        let chars = characters(&twisted_group_algebra(&u).unwrap()).unwrap();
        assert_eq!(chars.len(), 2);
        for c in &chars {
            // f(1) has order 4: values +-i
            assert_eq!((2 * c.exponents[1]) % c.modulus, c.modulus / 2);
        }
    }

    #[test]
    fn lem_pointwise_on_z4() {
        let g = make_abelian(&[4]).unwrap();
        let f = [0i64, 1, 3, 2];
        let v = Cochain::from_fn(&g, 2, 3, 4, |x, a| (x as i64) * (f[a[0]] + f[a[1]] - f[g.mul(a[0], a[1])])).unwrap();
        let r = verify_lem_pointwise(&v).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.characters_per_fiber, vec![4, 4, 4]);
    }

    #[test]
    fn prop_decom_trivial_and_random() {
        let (l, n) = (catalog::cyclic(2), catalog::cyclic(2));
        let dp = grp::direct_product(&l, &n);
        let u = Cochain::zero(&dp.group, 2, 2, 2).unwrap();
        let r = verify_prop_decom(&l, &n, &u).unwrap();
        assert!(r.pass && r.beta_trivial == Some(true) && r.w_trivial == Some(true));
        let ab = dp.group.abelian_structure().unwrap().clone();
        let u = Cochain::from_fn(&dp.group, 2, 2, 2, |x, a| {
            let (s, t) = (ab.coords(a[0]), ab.coords(a[1]));
            ((x as u64 + 1) * s[0] * t[1] + x as u64 * s[1] * t[0]) as i64
        })
        .unwrap();
        let r = verify_prop_decom(&l, &n, &u).unwrap();
        assert!(r.pass, "{r:?}");
        let r1 = verify_prop_decom1(&l, &n, &Cochain::zero(&l, 2, 2, 1).unwrap(), &Cochain::zero(&n, 2, 2, 1).unwrap()).unwrap();
        assert!(r1.pass);
    }

    #[test]
    fn thm_pt_trivial() {
        let g = catalog::dihedral(4);
        let u = Cochain::zero(&g, 2, 2, 2).unwrap();
        let r = verify_structure_theorem(&StructureInput::ThmPt { u, omega: None }, &NumericSettings::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.fibers[0].left_profile, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn cor_pt_group_z4() {
        let n = AbelianGroup::new(&[2]).unwrap();
        let g = catalog::cyclic(2);
        let eta = GroupCocycle::from_fn(&g, &n, |s, t| vec![((s + t) / 2) as u64]);
        let ext = extension_from_cocycle(&eta).unwrap();
        let r = verify_structure_theorem(&StructureInput::CorPtGroup { ext }, &NumericSettings::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.fibers.len(), 2);
        assert!(r.fibers.iter().all(|f| f.left_profile == vec![1, 1]));
    }

    #[test]
    fn thm_groupex_heisenberg() {
        let g = make_abelian(&[3, 3]).unwrap();
        let rep = representation_group_abelian(&g).unwrap();
        let ext = rep.ext.clone();
        let r = verify_structure_theorem(&StructureInput::ThmGroupex { ext, rep }, &NumericSettings::default()).unwrap();
        assert!(r.pass, "{r:?}");
        // N = Z_3: the trivial character gives C[Z_3^2], the other two give {3}
        assert_eq!(r.fibers.len(), 3);
        assert_eq!(r.fibers.iter().filter(|f| f.left_profile == vec![3]).count(), 2);
    }

    #[test]
    fn thm_general_mixed_classes() {
        let g = make_abelian(&[2, 2]).unwrap();
        let rep = representation_group_abelian(&g).unwrap();
        let ab = g.abelian_structure().unwrap().clone();
        let u = Cochain::from_fn(&g, 2, 3, 2, |x, a| (if x == 1 { ab.coords(a[0])[0] * ab.coords(a[1])[1] } else { 0 }) as i64).unwrap();
        let r = verify_structure_theorem(&StructureInput::ThmGeneral { u, rep }, &NumericSettings::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.fibers[1].left_profile, vec![2]);
        assert_eq!(r.fibers[0].left_profile, vec![1, 1, 1, 1]);
    }
}
