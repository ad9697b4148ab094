//! Circle-valued cochains on finite groups with trivial action.
//!
//! A value `e` of a cochain with modulus `M` stands for the root of unity
//! `exp(2 pi i e / M)`, so the group structure of the circle is written
//! additively on exponents. Cochains may be indexed over a finite base space
//! `X`; every operation acts pointwise in `x`.

use std::collections::HashSet;

use thiserror::Error;

use crate::grp::{FiniteGroup, GroupHom};
use crate::zmod::{self, AbelianQuotient, ModKernel, ModMatrix, MAX_MODULUS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohError {
    #[error("coboundary of a degree {0} cochain is not supported")]
    UnsupportedDegree(usize),
    #[error("modulus {modulus} does not divide {target}")]
    ModulusMismatch { modulus: u64, target: u64 },
    #[error("modulus {0} is too large")]
    ModulusOverflow(u128),
    #[error("modulus must be positive")]
    InvalidModulus,
    #[error("cochains live on different groups")]
    GroupMismatch,
    #[error("cochains have different base sizes ({0} and {1})")]
    BaseMismatch(usize, usize),
    #[error("cochains have different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("expected {expected} values, got {len}")]
    WrongLength { len: usize, expected: usize },
    #[error("base point {0} is out of range")]
    BasePointOutOfRange(usize),
    #[error("cochain is not a normalized 2-cocycle")]
    NotACocycle,
    #[error("cocycle is not trivial at base points {0:?}")]
    NotPointwiseTrivial(Vec<usize>),
}

/// A map `X x G^n -> Z_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    group: FiniteGroup,
    degree: usize,
    base_size: usize,
    modulus: u64,
    values: Vec<u64>,
}

fn check_modulus(m: u128) -> Result<u64, CohError> {
    if m == 0 {
        Err(CohError::InvalidModulus)
    } else if m > MAX_MODULUS as u128 {
        Err(CohError::ModulusOverflow(m))
    } else {
        Ok(m as u64)
    }
}

impl Cochain {
    pub fn zero(group: &FiniteGroup, degree: usize, base_size: usize, modulus: u64) -> Result<Self, CohError> {
        let modulus = check_modulus(modulus as u128)?;
        if degree > 3 {
            return Err(CohError::UnsupportedDegree(degree));
        }
        let len = base_size * group.order().pow(degree as u32);
        Ok(Cochain { group: group.clone(), degree, base_size, modulus, values: vec![0; len] })
    }

    /// Flattened values: base point major, then arguments in row-major order.
    pub fn from_values(
        group: &FiniteGroup,
        degree: usize,
        base_size: usize,
        modulus: u64,
        values: Vec<u64>,
    ) -> Result<Self, CohError> {
        let mut c = Cochain::zero(group, degree, base_size, modulus)?;
        if values.len() != c.values.len() {
            return Err(CohError::WrongLength { len: values.len(), expected: c.values.len() });
        }
        c.values = values.into_iter().map(|v| v % c.modulus).collect();
        Ok(c)
    }

    /// Builds a cochain from `f(x, args)`, reducing signed results modulo `M`.
    pub fn from_fn(
        group: &FiniteGroup,
        degree: usize,
        base_size: usize,
        modulus: u64,
        mut f: impl FnMut(usize, &[usize]) -> i64,
    ) -> Result<Self, CohError> {
        let mut c = Cochain::zero(group, degree, base_size, modulus)?;
        let n = group.order();
        let per = c.per_base();
        let mut args = vec![0usize; degree];
        for x in 0..base_size {
            for idx in 0..per {
                let mut rest = idx;
                for slot in args.iter_mut().rev() {
                    *slot = rest % n;
                    rest /= n;
                }
                c.values[x * per + idx] = (f(x, &args) as i128).rem_euclid(c.modulus as i128) as u64;
            }
        }
        Ok(c)
    }

    /// Stacks single-point cochains into one cochain over their index set.
    pub fn stack(parts: &[Cochain]) -> Result<Self, CohError> {
        let first = parts.first().ok_or(CohError::BaseMismatch(0, 0))?;
        let mut modulus = 1u64;
        for p in parts {
            if p.group != first.group {
                return Err(CohError::GroupMismatch);
            }
            if p.degree != first.degree {
                return Err(CohError::DegreeMismatch(first.degree, p.degree));
            }
            if p.base_size != 1 {
                return Err(CohError::BaseMismatch(1, p.base_size));
            }
            modulus = unify(modulus, p.modulus)?;
        }
        let mut values = Vec::with_capacity(parts.len() * first.per_base());
        for p in parts {
            values.extend(p.rescale(modulus)?.values);
        }
        Ok(Cochain { group: first.group.clone(), degree: first.degree, base_size: parts.len(), modulus, values })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Values at one base point.
    pub fn values_at(&self, x: usize) -> &[u64] {
        let per = self.per_base();
        &self.values[x * per..(x + 1) * per]
    }

    fn per_base(&self) -> usize {
        self.group.order().pow(self.degree as u32)
    }

    pub fn get(&self, x: usize, args: &[usize]) -> u64 {
        debug_assert_eq!(args.len(), self.degree);
        let n = self.group.order();
        let idx = args.iter().fold(0usize, |acc, &a| acc * n + a);
        self.values[x * self.per_base() + idx]
    }

    #[inline]
    pub fn get1(&self, x: usize, s: usize) -> u64 {
        self.values[x * self.group.order() + s]
    }

    #[inline]
    pub fn get2(&self, x: usize, s: usize, t: usize) -> u64 {
        let n = self.group.order();
        self.values[(x * n + s) * n + t]
    }

    pub fn set(&mut self, x: usize, args: &[usize], value: i64) {
        let n = self.group.order();
        let idx = args.iter().fold(0usize, |acc, &a| acc * n + a);
        let per = self.per_base();
        self.values[x * per + idx] = (value as i128).rem_euclid(self.modulus as i128) as u64;
    }

    /// Every value with an identity argument is zero.
    pub fn is_normalized(&self) -> bool {
        let n = self.group.order();
        let per = self.per_base();
        (0..self.base_size).all(|x| {
            (0..per).all(|idx| {
                let mut rest = idx;
                let mut has_identity = false;
                for _ in 0..self.degree {
                    has_identity |= rest % n == 0;
                    rest /= n;
                }
                !has_identity || self.values[x * per + idx] == 0
            })
        })
    }

    /// The same cochain with modulus `target`, requiring `M | target`.
    pub fn rescale(&self, target: u64) -> Result<Cochain, CohError> {
        if target == 0 || !target.is_multiple_of(self.modulus) {
            return Err(CohError::ModulusMismatch { modulus: self.modulus, target });
        }
        check_modulus(target as u128)?;
        let k = target / self.modulus;
        Ok(Cochain {
            group: self.group.clone(),
            degree: self.degree,
            base_size: self.base_size,
            modulus: target,
            values: self.values.iter().map(|&v| v * k).collect(),
        })
    }

    /// Reinterprets exponents modulo a divisor of `M` (the values must be
    /// multiples of `M / target`).
    pub fn reduce_to(&self, target: u64) -> Option<Cochain> {
        if target == 0 || !self.modulus.is_multiple_of(target) {
            return None;
        }
        let k = self.modulus / target;
        if self.values.iter().any(|&v| v % k != 0) {
            return None;
        }
        Some(Cochain {
            group: self.group.clone(),
            degree: self.degree,
            base_size: self.base_size,
            modulus: target,
            values: self.values.iter().map(|&v| v / k).collect(),
        })
    }

    fn compatible(&self, other: &Cochain) -> Result<u64, CohError> {
        if self.group != other.group {
            return Err(CohError::GroupMismatch);
        }
        if self.degree != other.degree {
            return Err(CohError::DegreeMismatch(self.degree, other.degree));
        }
        if self.base_size != other.base_size {
            return Err(CohError::BaseMismatch(self.base_size, other.base_size));
        }
        unify(self.modulus, other.modulus)
    }

    /// Pointwise product of circle values (sum of exponents), in the lcm modulus.
    pub fn multiply(&self, other: &Cochain) -> Result<Cochain, CohError> {
        let m = self.compatible(other)?;
        let (a, b) = (self.rescale(m)?, other.rescale(m)?);
        Ok(Cochain {
            values: a.values.iter().zip(&b.values).map(|(&x, &y)| (x + y) % m).collect(),
            ..a
        })
    }

    pub fn invert(&self) -> Cochain {
        let m = self.modulus;
        Cochain { values: self.values.iter().map(|&v| (m - v) % m).collect(), ..self.clone() }
    }

    /// `self * other^{-1}`.
    pub fn divide(&self, other: &Cochain) -> Result<Cochain, CohError> {
        self.multiply(&other.invert())
    }

    /// `k`-th power.
    pub fn power(&self, k: i64) -> Cochain {
        let m = self.modulus as i128;
        Cochain {
            values: self.values.iter().map(|&v| (v as i128 * k as i128).rem_euclid(m) as u64).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Equality of circle values, independent of the moduli used.
    pub fn same_values(&self, other: &Cochain) -> bool {
        match self.divide(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    pub fn evaluate_at(&self, x: usize) -> Result<Cochain, CohError> {
        self.restrict_base(&[x])
    }

    /// Cochain over the listed base points, in the given order.
    pub fn restrict_base(&self, points: &[usize]) -> Result<Cochain, CohError> {
        let mut values = Vec::with_capacity(points.len() * self.per_base());
        for &x in points {
            if x >= self.base_size {
                return Err(CohError::BasePointOutOfRange(x));
            }
            values.extend_from_slice(self.values_at(x));
        }
        Ok(Cochain { base_size: points.len(), values, ..self.clone() })
    }

    /// Repeats a single-point cochain over `base_size` points.
    pub fn constant_over(&self, base_size: usize) -> Result<Cochain, CohError> {
        if self.base_size != 1 {
            return Err(CohError::BaseMismatch(1, self.base_size));
        }
        Ok(Cochain { base_size, values: self.values.repeat(base_size), ..self.clone() })
    }

    pub fn coboundary(&self) -> Result<Cochain, CohError> {
        let g = &self.group;
        let n = g.order();
        let m = self.modulus;
        match self.degree {
            0 => Cochain::zero(g, 1, self.base_size, m),
            1 => Cochain::from_fn(g, 2, self.base_size, m, |x, a| {
                let (s, t) = (a[0], a[1]);
                self.get1(x, s) as i64 + self.get1(x, t) as i64 - self.get1(x, g.mul(s, t)) as i64
            }),
            2 => {
                let mut out = Cochain::zero(g, 3, self.base_size, m)?;
                for x in 0..self.base_size {
                    for r in 0..n {
                        for s in 0..n {
                            let rs = g.mul(r, s);
                            let urs = self.get2(x, r, s) as i64;
                            for t in 0..n {
                                let v = self.get2(x, s, t) as i64 - self.get2(x, rs, t) as i64
                                    + self.get2(x, r, g.mul(s, t)) as i64
                                    - urs;
                                out.values[((x * n + r) * n + s) * n + t] = v.rem_euclid(m as i64) as u64;
                            }
                        }
                    }
                }
                Ok(out)
            }
            d => Err(CohError::UnsupportedDegree(d)),
        }
    }

    /// Normalized degree-2 cochain with vanishing coboundary.
    pub fn is_cocycle(&self) -> bool {
        self.degree == 2 && self.is_normalized() && self.cocycle_defect().is_none()
    }

    /// First `(x, r, s, t)` violating the cocycle identity.
    pub fn cocycle_defect(&self) -> Option<(usize, usize, usize, usize)> {
        let g = &self.group;
        let n = g.order();
        let m = self.modulus;
        for x in 0..self.base_size {
            for r in 0..n {
                for s in 0..n {
                    let rs = g.mul(r, s);
                    for t in 0..n {
                        let lhs = (self.get2(x, s, t) + self.get2(x, r, g.mul(s, t))) % m;
                        let rhs = (self.get2(x, rs, t) + self.get2(x, r, s)) % m;
                        if lhs != rhs {
                            return Some((x, r, s, t));
                        }
                    }
                }
            }
        }
        None
    }

    /// `(inf u)(s, t) = u(q(s), q(t))` for `q: G -> Q` and `u` on `Q`.
    pub fn inflate(&self, q: &GroupHom) -> Result<Cochain, CohError> {
        if *q.target() != self.group {
            return Err(CohError::GroupMismatch);
        }
        Cochain::from_fn(q.source(), self.degree, self.base_size, self.modulus, |x, a| {
            let img: Vec<usize> = a.iter().map(|&s| q.apply(s)).collect();
            self.get(x, &img) as i64
        })
    }

    /// Symmetry `u(s,t) = u(t,s)` at every base point.
    pub fn is_symmetric(&self) -> bool {
        let n = self.group.order();
        self.degree == 2
            && (0..self.base_size).all(|x| (0..n).all(|s| (0..s).all(|t| self.get2(x, s, t) == self.get2(x, t, s))))
    }
}

fn unify(a: u64, b: u64) -> Result<u64, CohError> {
    zmod::lcm(a, b).ok_or(CohError::ModulusOverflow(a as u128 * b as u128))
}

/// Greedy generators and a breadth-first spanning tree `g = gens[r] * p`.
#[derive(Clone, Debug)]
pub(crate) struct Presentation {
    pub gens: Vec<usize>,
    /// `(generator slot, parent)` for every non-identity element.
    pub parent: Vec<Option<(usize, usize)>>,
    /// Elements in breadth-first order, identity first.
    pub order: Vec<usize>,
}

impl Presentation {
    pub fn new(g: &FiniteGroup) -> Self {
        let gens = g.greedy_generators();
        let mut parent = vec![None; g.order()];
        let mut seen = vec![false; g.order()];
        seen[0] = true;
        let mut order = vec![0usize];
        let mut head = 0;
        while head < order.len() {
            let p = order[head];
            head += 1;
            for (ri, &r) in gens.iter().enumerate() {
                let x = g.mul(r, p);
                if !seen[x] {
                    seen[x] = true;
                    parent[x] = Some((ri, p));
                    order.push(x);
                }
            }
        }
        Presentation { gens, parent, order }
    }
}

/// Solves `df = u(x)` over `Z_m` independently at every base point.
fn solve_coboundary(u: &Cochain, m: u64) -> Result<Vec<Option<Vec<u64>>>, CohError> {
    if u.degree != 2 {
        return Err(CohError::DegreeMismatch(2, u.degree));
    }
    let u = u.rescale(m)?;
    let g = &u.group;
    let n = g.order();
    let pres = Presentation::new(g);
    let k = pres.gens.len();
    // f(g) = a_g . y + c_g(x); a_g counts generator letters along the tree
    let mut a = vec![vec![0u64; k]; n];
    for &x in &pres.order[1..] {
        let (ri, p) = pres.parent[x].unwrap();
        let mut v = a[p].clone();
        v[ri] = (v[ri] + 1) % m;
        a[x] = v;
    }
    let consts: Vec<Vec<i64>> = (0..u.base_size)
        .map(|x| {
            let mut c = vec![0i64; n];
            for &h in &pres.order[1..] {
                let (ri, p) = pres.parent[h].unwrap();
                let r = pres.gens[ri];
                c[h] = (c[r] + c[p] - u.get2(x, r, p) as i64).rem_euclid(m as i64);
            }
            c
        })
        .collect();
    let mut mat = ModMatrix::zeros(0, k, m);
    let mut rhs: Vec<Vec<u64>> = vec![Vec::new(); u.base_size];
    for (ri, &r) in pres.gens.iter().enumerate() {
        let _ = ri;
        for t in 0..n {
            let rt = g.mul(r, t);
            let row: Vec<i64> = (0..k).map(|j| a[r][j] as i64 + a[t][j] as i64 - a[rt][j] as i64).collect();
            mat.push_row(&row);
            for x in 0..u.base_size {
                let c = &consts[x];
                let b = u.get2(x, r, t) as i64 - c[r] - c[t] + c[rt];
                rhs[x].push(b.rem_euclid(m as i64) as u64);
            }
        }
    }
    let sols = zmod::solve_mod(&mat, &rhs);
    let mut out = Vec::with_capacity(u.base_size);
    for (x, sol) in sols.into_iter().enumerate() {
        out.push(sol.map(|y| {
            (0..n)
                .map(|h| {
                    let dot = a[h].iter().zip(&y).fold(0u128, |acc, (&p, &q)| acc + p as u128 * q as u128);
                    ((dot + consts[x][h] as u128) % m as u128) as u64
                })
                .collect::<Vec<u64>>()
        }));
    }
    Ok(out)
}

/// Number of solutions of `df = 0` over `Z_m`, i.e. `|Hom(G, Z_m)|`, from
/// the same linear system the coboundary solver uses.
pub fn homomorphism_count(g: &FiniteGroup, m: u64) -> u128 {
    let n = g.order();
    let pres = Presentation::new(g);
    let k = pres.gens.len();
    let mut a = vec![vec![0i64; k]; n];
    for &x in &pres.order[1..] {
        let (ri, p) = pres.parent[x].unwrap();
        let mut v = a[p].clone();
        v[ri] += 1;
        a[x] = v;
    }
    let mut mat = ModMatrix::zeros(0, k, m);
    for &r in &pres.gens {
        for t in 0..n {
            let rt = g.mul(r, t);
            mat.push_row(&(0..k).map(|j| a[r][j] + a[t][j] - a[rt][j]).collect::<Vec<_>>());
        }
    }
    zmod::diagonalize(mat, &mut []).kernel_size()
}

fn witness_cochain(u: &Cochain, m: u64, rows: Vec<Vec<u64>>) -> Result<Cochain, CohError> {
    let f = Cochain::from_values(&u.group, 1, u.base_size, m, rows.concat())?;
    // re-verify df = u exactly; a failure means u was not a cocycle
    if !f.coboundary()?.same_values(u) {
        return Err(CohError::NotACocycle);
    }
    Ok(f)
}

/// A witness `f` over `Z_m` with `df = u` at every base point, or `None`.
pub fn is_coboundary_mod(u: &Cochain, m: u64) -> Result<Option<Cochain>, CohError> {
    if m == 0 || !m.is_multiple_of(u.modulus) {
        return Err(CohError::ModulusMismatch { modulus: u.modulus, target: m });
    }
    let sols = solve_coboundary(u, m)?;
    if sols.iter().any(Option::is_none) {
        return Ok(None);
    }
    witness_cochain(u, m, sols.into_iter().map(Option::unwrap).collect()).map(Some)
}

/// The modulus at which triviality over the full circle is decided.
pub fn circle_modulus(u: &Cochain) -> Result<u64, CohError> {
    check_modulus(u.modulus as u128 * u.group.order() as u128)
}

/// Triviality over the circle, decided over `Z_{M |G|}`.
pub fn is_coboundary_circle(u: &Cochain) -> Result<Option<Cochain>, CohError> {
    is_coboundary_mod(u, circle_modulus(u)?)
}

/// Witnesses `f_x` over `Z_{M |G|}` for every base point; fails with the set
/// of base points where `u(x)` is not a coboundary.
pub fn pointwise_trivial(u: &Cochain) -> Result<Cochain, CohError> {
    let m = circle_modulus(u)?;
    let sols = solve_coboundary(u, m)?;
    let failing: Vec<usize> = sols.iter().enumerate().filter(|(_, s)| s.is_none()).map(|(x, _)| x).collect();
    if !failing.is_empty() {
        return Err(CohError::NotPointwiseTrivial(failing));
    }
    witness_cochain(u, m, sols.into_iter().map(Option::unwrap).collect())
}

/// `H^2(G, Z_M)` with representatives and a coordinate map.
#[derive(Clone, Debug)]
pub struct H2Mod {
    group: FiniteGroup,
    modulus: u64,
    invariants: Vec<u64>,
    basis: Vec<Cochain>,
    pres: Presentation,
    kernel: ModKernel,
    quotient: AbelianQuotient,
}

/// Computes `H^2(G, Z_M)` as cocycles modulo coboundaries.
///
/// A normalized cocycle is determined by its values `u(r, t)` on generators
/// `r`; these are the unknowns, the cocycle identity with first argument a
/// generator is the full set of constraints.
pub fn h2_mod(g: &FiniteGroup, modulus: u64) -> Result<H2Mod, CohError> {
    let m = check_modulus(modulus as u128)?;
    let n = g.order();
    let pres = Presentation::new(g);
    let k = pres.gens.len();
    let nv = k * n.saturating_sub(1);
    let var = |ri: usize, t: usize| ri * (n - 1) + (t - 1);

    // expr[s][t]: coefficients of u(s, t) in the unknowns
    let mut expr = vec![vec![0u64; nv]; n * n];
    for (ri, _) in pres.gens.iter().enumerate() {
        let r = pres.gens[ri];
        for t in 1..n {
            expr[r * n + t][var(ri, t)] = 1 % m;
        }
    }
    for &s in &pres.order[1..] {
        let (ri, p) = pres.parent[s].unwrap();
        if p == 0 {
            continue;
        }
        let r = pres.gens[ri];
        for t in 1..n {
            // u(rp, t) = u(p, t) + u(r, pt) - u(r, p)
            let pt = g.mul(p, t);
            let row: Vec<u64> = (0..nv)
                .map(|j| (expr[p * n + t][j] + expr[r * n + pt][j] + m - expr[r * n + p][j]) % m)
                .collect();
            expr[s * n + t] = row;
        }
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut constraints = ModMatrix::zeros(0, nv, m);
    for &r in &pres.gens {
        for s in 1..n {
            let rs = g.mul(r, s);
            for t in 1..n {
                let st = g.mul(s, t);
                let row: Vec<u64> = (0..nv)
                    .map(|j| {
                        let plus = expr[s * n + t][j] + expr[r * n + st][j];
                        let minus = expr[rs * n + t][j] + expr[r * n + s][j];
                        (plus + 2 * m - minus) % m
                    })
                    .collect();
                if row.iter().any(|&v| v != 0) && seen.insert(row.clone()) {
                    constraints.push_row_mod(&row);
                }
            }
        }
    }
    drop(expr);
    let kernel = zmod::diagonalize(constraints, &mut []).kernel();

    // coboundaries of point indicators, in kernel coordinates
    let mut relations = Vec::new();
    for h in 1..n {
        let mut x = vec![0u64; nv];
        for (ri, &r) in pres.gens.iter().enumerate() {
            for t in 1..n {
                let v = (r == h) as i64 + (t == h) as i64 - (g.mul(r, t) == h) as i64;
                x[var(ri, t)] = v.rem_euclid(m as i64) as u64;
            }
        }
        let coords = kernel.coordinates(&x).expect("coboundaries are cocycles");
        relations.push(coords.into_iter().map(|c| c as i64).collect::<Vec<i64>>());
    }
    let quotient = AbelianQuotient::new(&kernel.orders(), &relations);
    let mut h = H2Mod {
        group: g.clone(),
        modulus: m,
        invariants: quotient.invariants.clone(),
        basis: Vec::new(),
        pres,
        kernel,
        quotient,
    };
    h.basis = (0..h.invariants.len())
        .map(|i| {
            let e: Vec<u64> = (0..h.invariants.len()).map(|j| (i == j) as u64).collect();
            h.cocycle_from_coords(&e)
        })
        .collect();
    Ok(h)
}

impl H2Mod {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    /// Representative cocycles of the generators.
    pub fn basis(&self) -> &[Cochain] {
        &self.basis
    }

    /// Completes the generator values `u(r, t)` to the full cocycle.
    fn cocycle_from_vars(&self, vars: &[u64]) -> Cochain {
        let g = &self.group;
        let n = g.order();
        let m = self.modulus;
        let mut vals = vec![0u64; n * n];
        for (ri, &r) in self.pres.gens.iter().enumerate() {
            for t in 1..n {
                vals[r * n + t] = vars[ri * (n - 1) + t - 1] % m;
            }
        }
        for &s in &self.pres.order[1..] {
            let (ri, p) = self.pres.parent[s].unwrap();
            if p == 0 {
                continue;
            }
            let r = self.pres.gens[ri];
            for t in 1..n {
                let pt = g.mul(p, t);
                vals[s * n + t] = (vals[p * n + t] + vals[r * n + pt] + m - vals[r * n + p]) % m;
            }
        }
        Cochain { group: g.clone(), degree: 2, base_size: 1, modulus: m, values: vals }
    }

    /// A representative cocycle with the given class coordinates.
    pub fn cocycle_from_coords(&self, coords: &[u64]) -> Cochain {
        let m = self.modulus;
        let nv = self.pres.gens.len() * self.group.order().saturating_sub(1);
        let mut vars = vec![0u64; nv];
        for (i, &c) in coords.iter().enumerate() {
            let lift = self.quotient.lift(i);
            for (piece, &l) in lift.iter().enumerate() {
                let coeff = (l * c as i128).rem_euclid(m as i128) as u64;
                if coeff == 0 {
                    continue;
                }
                let gen = self.kernel.generator(piece);
                for (v, &gv) in vars.iter_mut().zip(&gen) {
                    *v = ((*v as u128 + coeff as u128 * gv as u128) % m as u128) as u64;
                }
            }
        }
        self.cocycle_from_vars(&vars)
    }

    /// Class coordinates of a single-point cocycle whose modulus divides `M`.
    pub fn decompose_class(&self, u: &Cochain) -> Result<Vec<u64>, CohError> {
        if u.group != self.group {
            return Err(CohError::GroupMismatch);
        }
        if u.base_size != 1 {
            return Err(CohError::BaseMismatch(1, u.base_size));
        }
        let u = u.rescale(self.modulus)?;
        if !u.is_cocycle() {
            return Err(CohError::NotACocycle);
        }
        let n = self.group.order();
        let mut vars = Vec::with_capacity(self.pres.gens.len() * n.saturating_sub(1));
        for &r in &self.pres.gens {
            for t in 1..n {
                vars.push(u.get2(0, r, t));
            }
        }
        let kc = self.kernel.coordinates(&vars).ok_or(CohError::NotACocycle)?;
        let kc: Vec<i64> = kc.into_iter().map(|c| c as i64).collect();
        Ok(self.quotient.coordinates(&kc))
    }
}

/// `H^2(G, T)` realized on cocycles with values in `Z_{|G|}`.
#[derive(Clone, Debug)]
pub struct H2Circle {
    h2: H2Mod,
    quotient: AbelianQuotient,
    invariants: Vec<u64>,
    basis: Vec<Cochain>,
}

/// `H^2(G, Z_m)` for `m = |G|` modulo the Bockstein images of characters.
pub fn h2_circle(g: &FiniteGroup) -> Result<H2Circle, CohError> {
    let m = g.order() as u64;
    let h2 = h2_mod(g, m)?;
    let ab = crate::grp::abelianization(g);
    let exp = ab.structure.exponent();
    let mut relations = Vec::new();
    for i in 0..ab.structure.rank() {
        let gamma = ab.structure.generator(i);
        // integer exponent of gamma(q(s)) as an m-th root of unity
        let lift: Vec<u64> = g
            .elements()
            .map(|s| ab.structure.pairing(&gamma, &ab.structure.coords(ab.hom.apply(s))) * (m / exp))
            .collect();
        let delta = Cochain::from_fn(g, 2, 1, m, |_, a| {
            let (s, t) = (a[0], a[1]);
            ((lift[s] + lift[t] - lift[g.mul(s, t)]) / m) as i64
        })?;
        let coords = h2.decompose_class(&delta)?;
        relations.push(coords.into_iter().map(|c| c as i64).collect::<Vec<i64>>());
    }
    let quotient = AbelianQuotient::new(h2.invariants(), &relations);
    let invariants = quotient.invariants.clone();
    let mut hc = H2Circle { h2, quotient, invariants, basis: Vec::new() };
    hc.basis = (0..hc.invariants.len())
        .map(|i| {
            let e: Vec<u64> = (0..hc.invariants.len()).map(|j| (i == j) as u64).collect();
            hc.cocycle_from_coords(&e)
        })
        .collect();
    Ok(hc)
}

impl H2Circle {
    pub fn group(&self) -> &FiniteGroup {
        self.h2.group()
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    /// Representative cocycles (modulus `|G|`) of the generators.
    pub fn basis(&self) -> &[Cochain] {
        &self.basis
    }

    pub fn cocycle_from_coords(&self, coords: &[u64]) -> Cochain {
        let mut mod_coords = vec![0u64; self.h2.invariants().len()];
        for (i, &c) in coords.iter().enumerate() {
            for (j, &l) in self.quotient.lift(i).iter().enumerate() {
                let d = self.h2.invariants()[j] as i128;
                mod_coords[j] = ((mod_coords[j] as i128 + l * c as i128).rem_euclid(d)) as u64;
            }
        }
        self.h2.cocycle_from_coords(&mod_coords)
    }

    /// Coordinates of the class of `u` in `H^2(G, T)`.
    pub fn class_of(&self, u: &Cochain) -> Result<Vec<u64>, CohError> {
        let g = self.group();
        if u.group != *g {
            return Err(CohError::GroupMismatch);
        }
        if u.base_size != 1 {
            return Err(CohError::BaseMismatch(1, u.base_size));
        }
        let n = g.order();
        if self.invariants.is_empty() {
            return if u.is_cocycle() { Ok(Vec::new()) } else { Err(CohError::NotACocycle) };
        }
        // |G| u = dF mod M with F(s) = sum_t u(s,t); dividing the M|G| cocycle
        // |G| u - dF by M lands in Z_{|G|}
        let big = circle_modulus(u)?;
        let mm = u.modulus;
        let f: Vec<u64> = (0..n).map(|s| (0..n).map(|t| u.get2(0, s, t)).sum::<u64>() % big).collect();
        let w = Cochain::from_fn(g, 2, 1, n as u64, |_, a| {
            let (s, t) = (a[0], a[1]);
            let v = (n as i128 * u.get2(0, s, t) as i128) - f[s] as i128 - f[t] as i128 + f[g.mul(s, t)] as i128;
            let v = v.rem_euclid(big as i128);
            (v / mm as i128) as i64
        })?;
        let emb_check = (0..n).all(|s| {
            (0..n).all(|t| {
                let v = (n as i128 * u.get2(0, s, t) as i128) - f[s] as i128 - f[t] as i128 + f[g.mul(s, t)] as i128;
                v.rem_euclid(mm as i128) == 0
            })
        });
        if !emb_check {
            return Err(CohError::NotACocycle);
        }
        let c = self.h2.decompose_class(&w)?;
        let c: Vec<i64> = c.into_iter().map(|x| x as i64).collect();
        Ok(self.quotient.coordinates(&c))
    }

    /// Class coordinates at one base point of `u`.
    pub fn class_at(&self, u: &Cochain, x: usize) -> Result<Vec<u64>, CohError> {
        self.class_of(&u.evaluate_at(x)?)
    }

    pub fn class(&self, u: &Cochain) -> Result<CohClass, CohError> {
        Ok(CohClass { representative: u.clone(), circle: true, coords: self.class_of(u)? })
    }
}

/// A cohomology class: a representative plus canonical coordinates.
///
/// Equality compares the group and coordinates, so two classes are equal
/// exactly when their representatives are cohomologous.
#[derive(Clone, Debug)]
pub struct CohClass {
    pub representative: Cochain,
    pub circle: bool,
    pub coords: Vec<u64>,
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.representative.group == other.representative.group
            && self.circle == other.circle
            && self.coords == other.coords
    }
}

impl CohClass {
    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// The bilinear cocycle `(a, b) -> a_i b_j (exp / gcd)` on an abelian group,
/// taking values in `Z_{gcd(d_i, d_j)}`.
pub fn bilinear_cocycle(g: &FiniteGroup, i: usize, j: usize) -> Result<Cochain, CohError> {
    let ab = g.abelian_structure().ok_or(CohError::GroupMismatch)?;
    let (di, dj) = (ab.factors()[i], ab.factors()[j]);
    let m = zmod::gcd(di, dj);
    Cochain::from_fn(g, 2, 1, m, |_, a| {
        let (x, y) = (ab.coords(a[0]), ab.coords(a[1]));
        (x[i] * y[j] % m) as i64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::grp::make_abelian;

    #[test]
    fn h2_circle_of_rank_five() {
        // large presentations keep the Smith transforms bounded
        let h = h2_circle(&make_abelian(&[2, 2, 2, 2, 2]).unwrap()).unwrap();
        assert_eq!(h.invariants(), &[2; 10]);
    }

    fn z(n: &[u64]) -> FiniteGroup {
        make_abelian(n).unwrap()
    }

    #[test]
    fn coboundary_formulas() {
        let g = z(&[2]);
        let f = Cochain::from_values(&g, 1, 1, 4, vec![0, 1]).unwrap();
        let df = f.coboundary().unwrap();
        assert_eq!(df.get2(0, 1, 1), 2);
        assert!(df.is_cocycle());
        let c = Cochain::zero(&g, 3, 1, 2).unwrap();
        assert_eq!(c.coboundary(), Err(CohError::UnsupportedDegree(3)));
    }

    #[test]
    fn bilinear_forms_are_cocycles() {
        for n in 2..=4 {
            let g = z(&[n, n]);
            let w = bilinear_cocycle(&g, 0, 1).unwrap();
            assert!(w.is_cocycle());
            let mut bad = w.clone();
            let (s, t) = (1, 2);
            let v = bad.get2(0, s, t) as i64 + 1;
            bad.set(0, &[s, t], v);
            assert!(!bad.is_cocycle());
        }
    }

    #[test]
    fn order_two_cocycle_needs_bigger_modulus() {
        let g = z(&[2]);
        let u = Cochain::from_values(&g, 2, 1, 2, vec![0, 0, 0, 1]).unwrap();
        assert!(is_coboundary_mod(&u, 2).unwrap().is_none());
        let f = is_coboundary_mod(&u, 4).unwrap().unwrap();
        assert_eq!(f.get1(0, 1) % 2, 1);
        let f = is_coboundary_circle(&u).unwrap().unwrap();
        assert_eq!(f.modulus(), 4);
        assert_eq!(is_coboundary_mod(&u, 3), Err(CohError::ModulusMismatch { modulus: 2, target: 3 }));
    }

    #[test]
    fn klein_generator_is_never_trivial() {
        let g = z(&[2, 2]);
        let w = bilinear_cocycle(&g, 0, 1).unwrap();
        for m in [4, 8] {
            assert!(is_coboundary_mod(&w, m).unwrap().is_none());
        }
        // brute force over all f: G -> Z_4
        let emb = w.rescale(4).unwrap();
        for code in 0..64u64 {
            let vals = vec![0, code % 4, code / 4 % 4, code / 16];
            let f = Cochain::from_values(&g, 1, 1, 4, vals).unwrap();
            assert_ne!(f.coboundary().unwrap(), emb);
        }
        let both = Cochain::stack(&[Cochain::zero(&g, 2, 1, 2).unwrap(), w]).unwrap();
        assert_eq!(pointwise_trivial(&both), Err(CohError::NotPointwiseTrivial(vec![1])));
    }

    #[test]
    fn inflation_to_d4_trivializes_klein_class() {
        let d4 = catalog::dihedral(4);
        let q = crate::grp::quotient(&d4, &d4.center()).unwrap();
        // identify the quotient with Z_2 x Z_2 via a bilinear form on the quotient group
        let qg = &q.group;
        let ab = crate::grp::abelianization(qg);
        let w = bilinear_cocycle(&ab.group, 0, 1).unwrap().inflate(&ab.hom).unwrap();
        assert!(w.is_cocycle());
        assert!(is_coboundary_circle(&w).unwrap().is_none());
        let inflated = w.inflate(&q.hom).unwrap();
        assert!(inflated.is_cocycle());
        assert!(is_coboundary_circle(&inflated).unwrap().is_some());
    }

    #[test]
    fn h2_small_cases() {
        assert!(h2_mod(&z(&[3]), 3).unwrap().invariants().len() == 1);
        assert_eq!(h2_mod(&z(&[2, 2]), 4).unwrap().invariants(), &[2, 2, 2]);
        assert!(h2_circle(&z(&[5])).unwrap().invariants().is_empty());
        assert_eq!(h2_circle(&z(&[2, 2])).unwrap().invariants(), &[2]);
        assert_eq!(h2_circle(&z(&[6, 4])).unwrap().invariants(), &[2]);
        assert!(h2_circle(&catalog::symmetric3()).unwrap().invariants().is_empty());
        assert_eq!(h2_circle(&catalog::dihedral(4)).unwrap().invariants(), &[2]);
        assert!(h2_circle(&FiniteGroup::trivial()).unwrap().invariants().is_empty());
    }

    #[test]
    fn hom_counts() {
        assert_eq!(homomorphism_count(&z(&[2, 4]), 8), 8);
        assert_eq!(homomorphism_count(&z(&[2, 4]), 2), 4);
        assert_eq!(homomorphism_count(&catalog::symmetric3(), 6), 2);
        assert_eq!(homomorphism_count(&catalog::heisenberg(3), 27), 9);
    }

    #[test]
    fn class_of_detects_generator() {
        let g = z(&[2, 2]);
        let hc = h2_circle(&g).unwrap();
        let w = bilinear_cocycle(&g, 0, 1).unwrap();
        assert_eq!(hc.class_of(&w).unwrap(), vec![1]);
        let sym = bilinear_cocycle(&g, 0, 0).unwrap();
        assert_eq!(hc.class_of(&sym).unwrap(), vec![0]);
        for b in hc.basis() {
            assert!(b.is_cocycle());
        }
        assert_eq!(hc.class_of(&hc.basis()[0]).unwrap(), vec![1]);
    }
}
