//! Acceptance criteria, one line each. Runs without the libtest harness so
//! that every line is printed; exits non-zero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use cohbundle::alg::{
    block_decomposition, block_space, group_algebra, group_algebra_of_extension, twisted_group_algebra,
    verify_lem_pointwise, verify_prop_decom, verify_prop_decom1, verify_structure_theorem, MonomialStarAlgebra,
    NumericSettings, StructureInput,
};
use cohbundle::bundle::psi_iso_checked;
use cohbundle::catalog::{dihedral, heisenberg, symmetric3};
use cohbundle::coh::{h2_circle, h2_mod, Cochain};
use cohbundle::ext::{
    build_u_phi, decompose, extension_from_cocycle, lift_to_abelianization, prime_extension,
    representation_group_abelian, transgression, CentralExtension, GroupCocycle, RepresentationGroup,
};
use cohbundle::grp::{abelianization, direct_product, make_abelian, AbelianGroup, FiniteGroup};
use cohbundle::zmod::gcd;

/// Clustering tolerance used by every numerical check below.
const TOL: f64 = 1e-8;

type Outcome = Result<String, String>;

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn raw_values(len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), len)
}

fn abelian(f: &[u64]) -> FiniteGroup {
    make_abelian(f).unwrap()
}

/// `df` over every base point, for `f` given by raw values with `f(e) = 0`.
fn coboundary_of(g: &FiniteGroup, base: usize, m: u64, raw: &[u64]) -> Cochain {
    let n = g.order();
    let f = Cochain::from_fn(g, 1, base, m, |x, a| if a[0] == 0 { 0 } else { (raw[x * n + a[0]] % m) as i64 }).unwrap();
    f.coboundary().unwrap()
}

fn stack(parts: Vec<Cochain>) -> Cochain {
    Cochain::stack(&parts).unwrap()
}

/// `eta(s, t) = s_0 t_1` on `Z_p x Z_p` with values in `Z_p`.
fn heisenberg_extension(p: u64, extra: usize) -> CentralExtension {
    let g = abelian(&[p, p]);
    let ab = g.abelian_structure().unwrap().clone();
    let mut factors = vec![p];
    factors.extend(std::iter::repeat_n(p, extra));
    let n = AbelianGroup::new(&factors).unwrap();
    let eta = GroupCocycle::from_fn(&g, &n, |s, t| {
        let mut v = vec![ab.coords(s)[0] * ab.coords(t)[1] % p];
        v.extend(std::iter::repeat_n(0, extra));
        v
    });
    extension_from_cocycle(&eta).unwrap()
}

fn cyclic_extension(n: u64, g: u64, carry: bool) -> CentralExtension {
    let base = abelian(&[g]);
    let nn = AbelianGroup::new(&[n]).unwrap();
    let eta = GroupCocycle::from_fn(&base, &nn, |s, t| vec![u64::from(carry && s + t >= g as usize)]);
    extension_from_cocycle(&eta).unwrap()
}

// ---------------------------------------------------------------------------
// 1

fn coboundary_squares_to_zero() -> Outcome {
    let groups = [abelian(&[6]), dihedral(4), abelian(&[2, 4])];
    let moduli = [2u64, 3, 4, 6, 12];
    let strategy = (0..groups.len(), 0usize..=1, 1usize..=3, 0..moduli.len(), raw_values(3 * 8));
    let mut r = runner(1000);
    r.run(&strategy, |(gi, degree, base, mi, raw)| {
        let g = &groups[gi];
        let m = moduli[mi];
        let len = base * g.order().pow(degree as u32);
        let c = Cochain::from_values(g, degree, base, m, raw[..len].iter().map(|v| v % m).collect()).unwrap();
        prop_assert!(c.coboundary().unwrap().coboundary().unwrap().is_zero());
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok("1000 cochains of degree 0 and 1 on Z6, D4, Z2xZ4".into())
}

// ---------------------------------------------------------------------------
// 2

/// Multiset of element orders of `Z_{d_1} x ... x Z_{d_k}`.
fn order_distribution(invariants: &[u64]) -> BTreeMap<u64, u64> {
    let a = AbelianGroup::new(if invariants.is_empty() { &[1] } else { invariants }).unwrap();
    let mut out = BTreeMap::new();
    for x in 0..a.order() {
        let ord = a.coords(x).iter().zip(a.factors()).fold(1u64, |acc, (&c, &d)| {
            let o = d / gcd(c, d);
            acc / gcd(acc, o) * o
        });
        *out.entry(ord).or_insert(0) += 1;
    }
    out
}

/// Normalized 2-cocycles modulo normalized coboundaries, by exhaustion.
/// Returns the order distribution of the quotient.
fn brute_force_h2(g: &FiniteGroup, m: u64) -> BTreeMap<u64, u64> {
    let n = g.order();
    let free: Vec<(usize, usize)> = (1..n).flat_map(|s| (1..n).map(move |t| (s, t))).collect();
    let full = |vals: &[u64]| {
        let mut u = vec![0u64; n * n];
        for (&(s, t), &v) in free.iter().zip(vals) {
            u[s * n + t] = v;
        }
        u
    };
    let is_cocycle = |u: &[u64]| {
        (0..n).all(|s| {
            (0..n).all(|t| {
                (0..n).all(|r| {
                    let lhs = u[t * n + r] + u[s * n + g.mul(t, r)];
                    let rhs = u[g.mul(s, t) * n + r] + u[s * n + t];
                    lhs % m == rhs % m
                })
            })
        })
    };
    let mut boundaries = HashSet::new();
    let mut f = vec![0u64; n];
    loop {
        let b: Vec<u64> = (0..n * n).map(|i| (f[i / n] + f[i % n] + m - f[g.mul(i / n, i % n)]) % m).collect();
        boundaries.insert(b);
        let mut i = 1;
        while i < n {
            f[i] += 1;
            if f[i] < m {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let mut dist = BTreeMap::new();
    let mut vals = vec![0u64; free.len()];
    loop {
        let u = full(&vals);
        if is_cocycle(&u) {
            let mut k = 1u64;
            while !boundaries.contains(&u.iter().map(|&v| v * k % m).collect::<Vec<_>>()) {
                k += 1;
            }
            *dist.entry(k).or_insert(0u64) += 1;
        }
        let mut i = 0;
        while i < vals.len() {
            vals[i] += 1;
            if vals[i] < m {
                break;
            }
            vals[i] = 0;
            i += 1;
        }
        if i == vals.len() {
            break;
        }
    }
    // each class is counted |B| times
    let nb = boundaries.len() as u64;
    dist.values_mut().for_each(|c| *c /= nb);
    dist
}

/// Invariant factor lists `d_1 | d_2 | ...` of all abelian groups of order at most `max`.
fn abelian_groups_up_to(max: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, order: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let last = prefix.last().copied().unwrap_or(1);
        let mut d = if prefix.is_empty() { 2 } else { last };
        while order * d <= max {
            if d % last == 0 {
                prefix.push(d);
                extend(prefix, order * d, max, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max, &mut out);
    out.retain(|f| !f.is_empty());
    out
}

fn h2_matches_oracles() -> Outcome {
    let cases: [(&[u64], u64); 4] = [(&[2], 2), (&[3], 3), (&[2, 2], 2), (&[2, 2], 4)];
    let mut detail = Vec::new();
    for (f, m) in cases {
        let g = abelian(f);
        let h = h2_mod(&g, m).map_err(|e| e.to_string())?;
        let expected = brute_force_h2(&g, m);
        let got = order_distribution(h.invariants());
        if got != expected {
            return Err(format!("H2(Z{f:?}, Z{m}): invariants {:?} vs brute force {expected:?}", h.invariants()));
        }
        detail.push(format!("{f:?}/{m}:{}", h.order()));
    }
    let groups = abelian_groups_up_to(36);
    for f in &groups {
        let expected: u128 =
            (0..f.len()).flat_map(|i| (i + 1..f.len()).map(move |j| (i, j))).map(|(i, j)| gcd(f[i], f[j]) as u128).product();
        let got = h2_circle(&abelian(f)).map_err(|e| e.to_string())?.order();
        if got != expected {
            return Err(format!("|H2({f:?}, T)| = {got}, expected {expected}"));
        }
    }
    Ok(format!("brute force {}; {} abelian groups of order <= 36", detail.join(" "), groups.len()))
}

// ---------------------------------------------------------------------------
// 3

fn transgression_bijective() -> Outcome {
    let mut detail = Vec::new();
    for f in [&[2u64, 2][..], &[3, 3], &[2, 4], &[6, 4]] {
        let g = abelian(f);
        let r = representation_group_abelian(&g).map_err(|e| e.to_string())?;
        let z = r.z().clone();
        let mut seen = HashSet::new();
        for chi in 0..z.order() {
            let tg = transgression(&r.ext, &r.h2, &z.coords(chi)).map_err(|e| e.to_string())?;
            if tg != r.tg_table[chi] {
                return Err(format!("{f:?}: stored transgression differs at {chi}"));
            }
            seen.insert(tg);
        }
        if seen.len() != z.order() || seen.len() as u128 != r.h2.order() {
            return Err(format!("{f:?}: {} images for |Z^| = {}, |H2| = {}", seen.len(), z.order(), r.h2.order()));
        }
        detail.push(format!("{f:?}->|E|={}", r.ext.total().order()));
    }
    Ok(detail.join(" "))
}

// ---------------------------------------------------------------------------
// 4

fn pointwise_lemma() -> Outcome {
    let groups: Vec<FiniteGroup> =
        [&[2u64][..], &[3], &[4], &[2, 2], &[5], &[6], &[7], &[8], &[2, 4], &[2, 2, 2]].iter().map(|f| abelian(f)).collect();
    let moduli = [2u64, 3, 4, 6, 8, 12];
    let strategy = (0..groups.len(), 1usize..=4, 0..moduli.len(), raw_values(4 * 8));
    runner(50)
        .run(&strategy, |(gi, base, mi, raw)| {
            let v = coboundary_of(&groups[gi], base, moduli[mi], &raw);
            let rep = verify_lem_pointwise(&v).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(rep.pass, "{rep:?}");
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("50 pointwise trivial cocycles, abelian |G| <= 8, |X| <= 4".into())
}

// ---------------------------------------------------------------------------
// 5

/// `w_x = k_x inf(omega) + df_x` with `omega(a, b) = a_0 b_1` on `G_ab`.
fn lifting_roundtrip_on(g: &FiniteGroup, m: u64) -> Result<(), String> {
    let ab = abelianization(g);
    let st = ab.structure.clone();
    let p = st.factors()[0];
    let omega = Cochain::from_fn(&ab.group, 2, 1, m, |_, a| {
        ((st.coords(a[0])[0] * st.coords(a[1])[1]) % p * (m / p)) as i64
    })
    .unwrap()
    .inflate(&ab.hom)
    .unwrap();
    let n = g.order();
    let strategy = (1usize..=3, prop::collection::vec(0u64..p, 3), raw_values(3 * n));
    runner(50)
        .run(&strategy, |(base, ks, raw)| {
            let parts = (0..base).map(|x| omega.power(ks[x] as i64)).collect();
            let w = stack(parts).multiply(&coboundary_of(g, base, m, &raw)).unwrap();
            let lift = lift_to_abelianization(&w).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(lift.u_tilde.is_cocycle());
            let rebuilt = lift.u_tilde.inflate(&lift.abelianization.hom).unwrap().divide(&lift.g.coboundary().unwrap()).unwrap();
            prop_assert!(rebuilt.same_values(&w));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn lifting_roundtrip() -> Outcome {
    lifting_roundtrip_on(&dihedral(4), 4)?;
    lifting_roundtrip_on(&heisenberg(3), 3)?;
    Ok("50 cocycles each on D4 and H(Z3), |X| <= 3".into())
}

// ---------------------------------------------------------------------------
// 6

/// Random `u_x = class c_x + df_x` in the circle model of `H^2(G, T)`.
fn random_cocycle(g: &FiniteGroup, base: usize, coords: &[u64], raw: &[u64]) -> Cochain {
    let h = h2_circle(g).unwrap();
    let k = h.invariants().len();
    let parts = (0..base)
        .map(|x| {
            let c: Vec<u64> = (0..k).map(|i| coords[x * k + i] % h.invariants()[i]).collect();
            h.cocycle_from_coords(&c)
        })
        .collect();
    let m = g.order() as u64;
    stack(parts).multiply(&coboundary_of(g, base, m, raw)).unwrap()
}

fn decomposition_roundtrip() -> Outcome {
    for f in [&[2u64, 2][..], &[2, 4]] {
        let g = abelian(f);
        let r = representation_group_abelian(&g).map_err(|e| e.to_string())?;
        let n = g.order();
        let strategy = (1usize..=3, raw_values(3 * 8), raw_values(3 * n));
        runner(50)
            .run(&strategy, |(base, coords, raw)| {
                let u = random_cocycle(&g, base, &coords, &raw);
                let d = decompose(&u, &r).map_err(|e| TestCaseError::fail(e.to_string()))?;
                let rebuilt = d
                    .g
                    .coboundary()
                    .unwrap()
                    .multiply(&d.v.inflate(&d.abelianization.hom).unwrap())
                    .unwrap()
                    .multiply(&build_u_phi(&d.phi, &r))
                    .unwrap();
                prop_assert!(rebuilt.same_values(&u));
                for x in 0..base {
                    prop_assert_eq!(&r.tg_table[d.phi[x]], &r.h2.class_at(&u, x).unwrap());
                }
                Ok(())
            })
            .map_err(|e| format!("{f:?}: {e}"))?;
    }
    Ok("50 cocycles each on Z2xZ2 and Z2xZ4, |X| <= 3".into())
}

// ---------------------------------------------------------------------------
// 7

fn product_decompositions() -> Outcome {
    for (lf, nf) in [(2u64, 2u64), (2, 4)] {
        let (l, n) = (abelian(&[lf]), abelian(&[nf]));
        let dp = direct_product(&l, &n).group;
        let ng = dp.order();
        let strategy = (1usize..=3, raw_values(3 * 8), raw_values(3 * ng));
        runner(20)
            .run(&strategy, |(base, coords, raw)| {
                let u = random_cocycle(&dp, base, &coords, &raw);
                let rep = verify_prop_decom(&l, &n, &u).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert!(rep.pass, "{rep:?}");
                Ok(())
            })
            .map_err(|e| format!("Z{lf}xZ{nf} decom: {e}"))?;
        let strategy = (1usize..=3, raw_values(6), raw_values(3 * lf as usize), raw_values(3 * nf as usize));
        runner(20)
            .run(&strategy, |(base, coords, raw_l, raw_n)| {
                let u = random_cocycle(&l, base, &coords, &raw_l);
                let v = random_cocycle(&n, base, &coords, &raw_n);
                let rep = verify_prop_decom1(&l, &n, &u, &v).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert!(rep.pass, "{rep:?}");
                Ok(())
            })
            .map_err(|e| format!("Z{lf}xZ{nf} decom1: {e}"))?;
    }
    Ok("20 cocycles each for both decompositions on Z2xZ2 and Z2xZ4".into())
}

// ---------------------------------------------------------------------------
// 8

fn fiber_profiles(ext: &CentralExtension) -> Result<(Vec<Vec<usize>>, Vec<usize>), String> {
    let ea = group_algebra_of_extension(ext).map_err(|e| e.to_string())?;
    let settings = NumericSettings { seed: 0, tol: TOL };
    let space = block_space(&ea.fibered, &settings).map_err(|e| e.to_string())?;
    let fibers = space.fibers.iter().map(|f| f.profile().sizes().to_vec()).collect();
    let whole = block_decomposition(&ea.algebra, &settings).map_err(|e| e.to_string())?.profile().sizes().to_vec();
    Ok((fibers, whole))
}

fn idempotent_decomposition() -> Outcome {
    let klein = abelian(&[2, 2]);
    let kab = klein.abelian_structure().unwrap().clone();
    let d4 = extension_from_cocycle(&GroupCocycle::from_fn(&klein, &AbelianGroup::new(&[2]).unwrap(), |s, t| {
        vec![kab.coords(s)[0] * kab.coords(t)[1]]
    }))
    .unwrap();
    let split33 = extension_from_cocycle(&GroupCocycle::zero(&abelian(&[3, 3]), &AbelianGroup::new(&[3]).unwrap())).unwrap();
    let ones = |k: usize| vec![1usize; k];
    let cases: Vec<(&str, CentralExtension, Vec<Vec<usize>>)> = vec![
        ("Z4/Z2", cyclic_extension(2, 2, true), vec![ones(2), ones(2)]),
        ("D4/Z2^2", d4, vec![ones(4), vec![2]]),
        ("H(Z3)/Z3^2", heisenberg_extension(3, 0), vec![ones(9), vec![3], vec![3]]),
        ("Z2xZ2 split", cyclic_extension(2, 2, false), vec![ones(2), ones(2)]),
        ("Z3xZ3^2 split", split33, vec![ones(9), ones(9), ones(9)]),
    ];
    let mut detail = Vec::new();
    for (name, ext, expected) in cases {
        let (fibers, whole) = fiber_profiles(&ext)?;
        if fibers != expected {
            return Err(format!("{name}: fiber profiles {fibers:?}, expected {expected:?}"));
        }
        let mut union: Vec<usize> = fibers.concat();
        union.sort_unstable();
        if union != whole {
            return Err(format!("{name}: union {union:?} differs from C[E] profile {whole:?}"));
        }
        detail.push(name);
    }
    Ok(format!("exact idempotents and corners; profiles match for {}", detail.join(", ")))
}

// ---------------------------------------------------------------------------
// 9, 10

fn heisenberg_rep() -> (CentralExtension, RepresentationGroup) {
    let h = heisenberg_extension(3, 0);
    let r = RepresentationGroup::from_extension(h.clone()).unwrap();
    (h, r)
}

fn settings() -> NumericSettings {
    NumericSettings { seed: 0, tol: TOL }
}

fn group_extension_theorem() -> Outcome {
    let (h, r) = heisenberg_rep();
    let rep = verify_structure_theorem(&StructureInput::ThmGroupex { ext: h, rep: r }, &settings()).map_err(|e| e.to_string())?;
    if !rep.pass {
        return Err(format!("mismatches {:?}", rep.mismatches));
    }
    let profiles: Vec<_> = rep.fibers.iter().map(|f| f.left_profile.clone()).collect();
    Ok(format!("L = H = H(Z3): {} fibers, profiles {profiles:?}, {} flags", rep.fibers.len(), rep.flags.len()))
}

fn pointwise_trivial_group_corollary() -> Outcome {
    let (h, r) = heisenberg_rep();
    let prime = prime_extension(&h, &r).map_err(|e| e.to_string())?;
    let prime_z3 = prime_extension(&heisenberg_extension(3, 1), &r).map_err(|e| e.to_string())?;
    let cases = [
        ("Z4/Z2", cyclic_extension(2, 2, true)),
        ("Z2xZ2 split", cyclic_extension(2, 2, false)),
        ("L' for L = H(Z3)", prime.ext),
        ("L' for L = H(Z3)xZ3", prime_z3.ext),
    ];
    let mut detail = Vec::new();
    for (name, ext) in cases {
        psi_iso_checked(&ext).map_err(|e| format!("{name}: {e}"))?;
        let rep = verify_structure_theorem(&StructureInput::CorPtGroup { ext: ext.clone() }, &settings())
            .map_err(|e| format!("{name}: {e}"))?;
        if !rep.pass || !rep.profile_asserted {
            return Err(format!("{name}: mismatches {:?}", rep.mismatches));
        }
        detail.push(format!("{name} (|E|={})", ext.total().order()));
    }
    Ok(detail.join(", "))
}

// ---------------------------------------------------------------------------
// 11

fn profile_stability() -> Outcome {
    let twisted = |f: &[u64], p: u64| {
        let g = abelian(f);
        let a = g.abelian_structure().unwrap().clone();
        twisted_group_algebra(
            &Cochain::from_fn(&g, 2, 1, p, |_, s| (a.coords(s[0])[0] * a.coords(s[1])[1] % p) as i64).unwrap(),
        )
        .unwrap()
    };
    let algebras: Vec<(&str, MonomialStarAlgebra)> = vec![
        ("C[D4]", group_algebra(&dihedral(4))),
        ("C[S3]", group_algebra(&symmetric3())),
        ("C[H(Z3)]", group_algebra(&heisenberg(3))),
        ("C[D5]", group_algebra(&dihedral(5))),
        ("C[Z2xZ4]", group_algebra(&abelian(&[2, 4]))),
        ("C[Z2^2, w]", twisted(&[2, 2], 2)),
        ("C[Z3^2, w]", twisted(&[3, 3], 3)),
        ("C[Z2xZ4, w]", twisted(&[2, 4], 2)),
    ];
    let mut detail = Vec::new();
    for (name, a) in &algebras {
        let mut first = None;
        for seed in 0..5 {
            let d = block_decomposition(a, &NumericSettings { seed, tol: TOL }).map_err(|e| format!("{name}: {e}"))?;
            let p = d.profile();
            if p.dim() != a.dim() {
                return Err(format!("{name}: sum of squares {} vs dim {}", p.dim(), a.dim()));
            }
            if p.count() != a.regular_class_count() {
                return Err(format!("{name}: {} blocks vs {} regular classes", p.count(), a.regular_class_count()));
            }
            match &first {
                None => first = Some(p),
                Some(q) if *q != p => return Err(format!("{name}: seed {seed} gives {p:?}, seed 0 gives {q:?}")),
                _ => {}
            }
        }
        detail.push(format!("{name}={:?}", first.unwrap().sizes()));
    }
    Ok(format!("5 seeds, tol {TOL:e}: {}", detail.join(" ")))
}

// ---------------------------------------------------------------------------
// 12

fn cli_golden() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    for name in ["klein", "heisenberg3", "z2z4"] {
        let ws = root.join("workspaces").join(format!("{name}.json"));
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_cohbundle"))
                .args(["verify", "all", "--workspace"])
                .arg(&ws)
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        if a.status.code() != Some(0) {
            return Err(format!("{name}: exit code {:?}", a.status.code()));
        }
        if a.stdout != b.stdout {
            return Err(format!("{name}: two runs differ"));
        }
        let golden = std::fs::read(root.join("tests/golden").join(format!("{name}.json"))).map_err(|e| format!("{name}: {e}"))?;
        if a.stdout != golden {
            return Err(format!("{name}: output differs from the golden report"));
        }
    }
    Ok("klein, heisenberg3, z2z4: deterministic and equal to golden reports".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("coboundary squares to zero", coboundary_squares_to_zero),
        ("H2 against brute force and the gcd formula", h2_matches_oracles),
        ("transgression is bijective", transgression_bijective),
        ("characters of pointwise trivial crossed products", pointwise_lemma),
        ("lifting to the abelianization", lifting_roundtrip),
        ("decomposition u = dg inf(v) u_phi", decomposition_roundtrip),
        ("product decompositions", product_decompositions),
        ("central idempotent fibers", idempotent_decomposition),
        ("group extension structure theorem", group_extension_theorem),
        ("pointwise trivial extensions", pointwise_trivial_group_corollary),
        ("block profiles", profile_stability),
        ("cli verify", cli_golden),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
