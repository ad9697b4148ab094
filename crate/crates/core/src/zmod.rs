//! Exact linear algebra over `Z` and `Z/mZ`.
//!
//! Everything the cohomology code needs reduces to two primitives: a
//! diagonalization of a matrix over `Z/mZ` by unimodular row and column
//! operations (which solves linear systems and produces kernels even when
//! `m` is composite), and an integer Smith normal form used to present
//! finite abelian quotients in invariant-factor form.

/// Largest modulus accepted by the modular routines.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `lcm(a, b)`, or `None` when the result would exceed [`MAX_MODULUS`].
pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    let l = (a / gcd(a, b)).checked_mul(b)?;
    (l <= MAX_MODULUS).then_some(l)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a x + b y = g >= 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    (g == 1).then(|| x.rem_euclid(m as i128) as u64)
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
fn to_mod(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Solves `c * a = b (mod m)` given `gcd(a, m) | b`.
fn divide_mod(b: u64, a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    debug_assert_eq!(b % g, 0);
    let mg = m / g;
    if mg == 1 {
        return 0;
    }
    let inv = mod_inv((a / g) % mg, mg).expect("a/g is a unit modulo m/g");
    mulmod(b / g, inv, mg)
}

/// Dense row-major matrix over `Z/mZ`.
#[derive(Clone, Debug)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    m: u64,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, m: u64) -> Self {
        assert!(m >= 1);
        ModMatrix { rows, cols, m, data: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.m;
    }

    /// Adds a signed integer to an entry.
    pub fn add(&mut self, i: usize, j: usize, v: i64) {
        let idx = i * self.cols + j;
        self.data[idx] = to_mod(self.data[idx] as i128 + v as i128, self.m);
    }

    /// Appends a row given as signed integers.
    pub fn push_row(&mut self, row: &[i64]) {
        assert_eq!(row.len(), self.cols);
        let m = self.m;
        self.data.extend(row.iter().map(|&v| to_mod(v as i128, m)));
        self.rows += 1;
    }

    /// Appends a row already reduced modulo `m`.
    pub fn push_row_mod(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols);
        let m = self.m;
        self.data.extend(row.iter().map(|&v| v % m));
        self.rows += 1;
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| (acc + mulmod(a, b, self.m)) % self.m)
            })
            .collect()
    }
}

/// Result of diagonalizing `A` over `Z/mZ`: `U A V = D` with `D` diagonal.
///
/// `U` is not stored; it was applied to any right-hand sides supplied to
/// [`diagonalize`].
#[derive(Clone, Debug)]
pub struct ModDiagonal {
    m: u64,
    rows: usize,
    cols: usize,
    /// Diagonal entries `d_0 .. d_{rank-1}`, all nonzero modulo `m`.
    pub diag: Vec<u64>,
    /// Column transform `V` (cols x cols, row-major).
    v: Vec<u64>,
    /// Its inverse.
    v_inv: Vec<u64>,
}

/// Diagonalizes `a` by unimodular operations, applying the row operations to
/// each column vector in `rhs`.
pub fn diagonalize(mut a: ModMatrix, rhs: &mut [Vec<u64>]) -> ModDiagonal {
    let (r, c, m) = (a.rows, a.cols, a.m);
    for b in rhs.iter_mut() {
        assert_eq!(b.len(), r);
        for v in b.iter_mut() {
            *v %= m;
        }
    }
    let mut v = vec![0u64; c * c];
    let mut v_inv = vec![0u64; c * c];
    for i in 0..c {
        v[i * c + i] = 1 % m;
        v_inv[i * c + i] = 1 % m;
    }
    let mut diag = Vec::new();
    let data = &mut a.data;

    let row_swap = |data: &mut Vec<u64>, rhs: &mut [Vec<u64>], i: usize, j: usize| {
        if i == j {
            return;
        }
        for col in 0..c {
            data.swap(i * c + col, j * c + col);
        }
        for b in rhs.iter_mut() {
            b.swap(i, j);
        }
    };

    for k in 0..r.min(c) {
        // locate a nonzero entry in the trailing submatrix
        let mut pivot = None;
        'search: for j in k..c {
            for i in k..r {
                if data[i * c + j] != 0 {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap(data, rhs, k, pi);
        if pj != k {
            for i in 0..r {
                data.swap(i * c + k, i * c + pj);
            }
            for i in 0..c {
                v.swap(i * c + k, i * c + pj);
            }
            for col in 0..c {
                v_inv.swap(k * c + col, pj * c + col);
            }
        }

        loop {
            // clear column k below the pivot
            for i in k + 1..r {
                let b = data[i * c + k];
                if b == 0 {
                    continue;
                }
                let p = data[k * c + k];
                let gp = gcd(p, m);
                if b.is_multiple_of(gp) {
                    let q = divide_mod(b, p, m);
                    for col in k..c {
                        let t = mulmod(q, data[k * c + col], m);
                        data[i * c + col] = submod(data[i * c + col], t, m);
                    }
                    for rb in rhs.iter_mut() {
                        let t = mulmod(q, rb[k], m);
                        rb[i] = submod(rb[i], t, m);
                    }
                } else {
                    let (d, x, y) = ext_gcd(p as i128, b as i128);
                    let (x, y) = (to_mod(x, m), to_mod(y, m));
                    let pa = to_mod(p as i128 / d, m);
                    let nb = to_mod(-(b as i128 / d), m);
                    for col in k..c {
                        let rk = data[k * c + col];
                        let ri = data[i * c + col];
                        data[k * c + col] = (mulmod(x, rk, m) + mulmod(y, ri, m)) % m;
                        data[i * c + col] = (mulmod(nb, rk, m) + mulmod(pa, ri, m)) % m;
                    }
                    for rb in rhs.iter_mut() {
                        let (rk, ri) = (rb[k], rb[i]);
                        rb[k] = (mulmod(x, rk, m) + mulmod(y, ri, m)) % m;
                        rb[i] = (mulmod(nb, rk, m) + mulmod(pa, ri, m)) % m;
                    }
                }
            }
            // clear row k right of the pivot
            for j in k + 1..c {
                let b = data[k * c + j];
                if b == 0 {
                    continue;
                }
                let p = data[k * c + k];
                let gp = gcd(p, m);
                if b.is_multiple_of(gp) {
                    let q = divide_mod(b, p, m);
                    for i in k..r {
                        let t = mulmod(q, data[i * c + k], m);
                        data[i * c + j] = submod(data[i * c + j], t, m);
                    }
                    for i in 0..c {
                        let t = mulmod(q, v[i * c + k], m);
                        v[i * c + j] = submod(v[i * c + j], t, m);
                    }
                    for col in 0..c {
                        let t = mulmod(q, v_inv[j * c + col], m);
                        v_inv[k * c + col] = (v_inv[k * c + col] + t) % m;
                    }
                } else {
                    let (d, x, y) = ext_gcd(p as i128, b as i128);
                    let (xm, ym) = (to_mod(x, m), to_mod(y, m));
                    let pa = to_mod(p as i128 / d, m);
                    let bd = to_mod(b as i128 / d, m);
                    let nb = to_mod(-(b as i128 / d), m);
                    let ny = to_mod(-y, m);
                    for i in k..r {
                        let ck = data[i * c + k];
                        let cj = data[i * c + j];
                        data[i * c + k] = (mulmod(xm, ck, m) + mulmod(ym, cj, m)) % m;
                        data[i * c + j] = (mulmod(nb, ck, m) + mulmod(pa, cj, m)) % m;
                    }
                    for i in 0..c {
                        let ck = v[i * c + k];
                        let cj = v[i * c + j];
                        v[i * c + k] = (mulmod(xm, ck, m) + mulmod(ym, cj, m)) % m;
                        v[i * c + j] = (mulmod(nb, ck, m) + mulmod(pa, cj, m)) % m;
                    }
                    for col in 0..c {
                        let rk = v_inv[k * c + col];
                        let rj = v_inv[j * c + col];
                        v_inv[k * c + col] = (mulmod(pa, rk, m) + mulmod(bd, rj, m)) % m;
                        v_inv[j * c + col] = (mulmod(ny, rk, m) + mulmod(xm, rj, m)) % m;
                    }
                }
            }
            let col_clear = (k + 1..r).all(|i| data[i * c + k] == 0);
            let row_clear = (k + 1..c).all(|j| data[k * c + j] == 0);
            if col_clear && row_clear {
                break;
            }
        }
        diag.push(data[k * c + k]);
    }
    ModDiagonal { m, rows: r, cols: c, diag, v, v_inv }
}

/// A subgroup of `(Z/mZ)^n` given as a direct sum of cyclic pieces, with a
/// coordinate map back onto those pieces.
#[derive(Clone, Debug)]
pub struct ModKernel {
    m: u64,
    n: usize,
    /// `(index into the diagonal basis, order)` for each nontrivial summand.
    pieces: Vec<(usize, u64)>,
    rank: usize,
    v: Vec<u64>,
    v_inv: Vec<u64>,
}

impl ModDiagonal {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// Back-substitution for one transformed right-hand side `U b`.
    pub fn solve_transformed(&self, ub: &[u64]) -> Option<Vec<u64>> {
        let (m, c) = (self.m, self.cols);
        let mut y = vec![0u64; c];
        for (i, &d) in self.diag.iter().enumerate() {
            let g = gcd(d, m);
            if !ub[i].is_multiple_of(g) {
                return None;
            }
            y[i] = divide_mod(ub[i], d, m);
        }
        if ub[self.rank()..self.rows].iter().any(|&b| b != 0) {
            return None;
        }
        Some(self.apply_v(&y))
    }

    fn apply_v(&self, y: &[u64]) -> Vec<u64> {
        let (m, c) = (self.m, self.cols);
        (0..c)
            .map(|i| (0..c).fold(0u64, |acc, j| (acc + mulmod(self.v[i * c + j], y[j], m)) % m))
            .collect()
    }

    /// Number of solutions of the homogeneous system.
    pub fn kernel_size(&self) -> u128 {
        let m = self.m as u128;
        let mut size = 1u128;
        for &d in &self.diag {
            size *= gcd(d, self.m) as u128;
        }
        for _ in self.rank()..self.cols {
            size *= m;
        }
        size
    }

    pub fn kernel(&self) -> ModKernel {
        let m = self.m;
        let mut pieces = Vec::new();
        for (i, &d) in self.diag.iter().enumerate() {
            let g = gcd(d, m);
            if g > 1 {
                pieces.push((i, g));
            }
        }
        if m > 1 {
            for i in self.rank()..self.cols {
                pieces.push((i, m));
            }
        }
        ModKernel {
            m,
            n: self.cols,
            pieces,
            rank: self.rank(),
            v: self.v.clone(),
            v_inv: self.v_inv.clone(),
        }
    }
}

impl ModKernel {
    pub fn orders(&self) -> Vec<u64> {
        self.pieces.iter().map(|&(_, g)| g).collect()
    }

    /// Generator of summand `k` as a vector in `(Z/mZ)^n`.
    pub fn generator(&self, k: usize) -> Vec<u64> {
        let (i, g) = self.pieces[k];
        let scale = if i < self.rank { self.m / g } else { 1 };
        (0..self.n).map(|row| mulmod(self.v[row * self.n + i], scale, self.m)).collect()
    }

    /// Coordinates of a kernel element; `None` when `x` is not in the kernel.
    pub fn coordinates(&self, x: &[u64]) -> Option<Vec<u64>> {
        let (m, n) = (self.m, self.n);
        let y: Vec<u64> = (0..n)
            .map(|i| (0..n).fold(0u64, |acc, j| (acc + mulmod(self.v_inv[i * n + j], x[j] % m, m)) % m))
            .collect();
        // components of y outside the kernel summands must vanish appropriately
        let mut coords = Vec::with_capacity(self.pieces.len());
        let mut covered = vec![false; n];
        for &(i, g) in &self.pieces {
            covered[i] = true;
            if i < self.rank {
                let scale = m / g;
                if !y[i].is_multiple_of(scale) {
                    return None;
                }
                coords.push(y[i] / scale);
            } else {
                coords.push(y[i]);
            }
        }
        if (0..n).any(|i| !covered[i] && y[i] != 0) {
            return None;
        }
        Some(coords)
    }
}

/// Solves `A x = b_k (mod m)` for each right-hand side column.
pub fn solve_mod(a: &ModMatrix, rhs: &[Vec<u64>]) -> Vec<Option<Vec<u64>>> {
    let mut transformed = rhs.to_vec();
    let diag = diagonalize(a.clone(), &mut transformed);
    transformed.iter().map(|ub| diag.solve_transformed(ub)).collect()
}

/// Smith normal form `U A V = D` of an integer matrix, with `V` and `V^{-1}`.
#[derive(Clone, Debug)]
pub struct IntSmith {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub diag: Vec<i128>,
    pub cols: usize,
    pub v: Vec<Vec<i128>>,
    pub v_inv: Vec<Vec<i128>>,
}

/// With `reduce = Some(l)` the row lattice is taken to contain `l Z^n`: all
/// entries are kept modulo `l`, a clean pivot `p` becomes `gcd(p, l)`, and
/// `V`, `V^{-1}` are only meaningful modulo divisors of `l`.
pub fn int_smith(mut a: Vec<Vec<i128>>, cols: usize, reduce: Option<i128>) -> IntSmith {
    let rows = a.len();
    for row in &a {
        assert_eq!(row.len(), cols);
    }
    let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as i128).collect()).collect();
    let mut v_inv = v.clone();
    let mut diag = Vec::new();
    let red = |x: i128| match reduce {
        Some(l) => {
            let r = x.rem_euclid(l);
            if r > l / 2 {
                r - l
            } else {
                r
            }
        }
        None => x,
    };
    for row in a.iter_mut() {
        row.iter_mut().for_each(|x| *x = red(*x));
    }

    let swap_cols = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, v_inv: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    };
    // col_j -= q * col_t
    let col_sub = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, v_inv: &mut Vec<Vec<i128>>, t: usize, j: usize, q: i128| {
        for row in a.iter_mut() {
            row[j] = red(row[j] - q * row[t]);
        }
        let q = reduce.map_or(q, |l| q.rem_euclid(l));
        for row in v.iter_mut() {
            row[j] -= q * row[t];
            if let Some(l) = reduce {
                row[j] = row[j].rem_euclid(l);
            }
        }
        let rj = v_inv[j].clone();
        for (x, y) in v_inv[t].iter_mut().zip(rj) {
            *x += q * y;
            if let Some(l) = reduce {
                *x = x.rem_euclid(l);
            }
        }
    };

    for t in 0..rows.min(cols) {
        // global minimum nonzero in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, bj);

        loop {
            // bring the smallest entry of row t / column t into the pivot
            let mut min_pos = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[min_pos.0][min_pos.1].abs() {
                    min_pos = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[min_pos.0][min_pos.1].abs() {
                    min_pos = (t, j);
                }
            }
            if min_pos.0 != t {
                a.swap(t, min_pos.0);
            } else if min_pos.1 != t {
                swap_cols(&mut a, &mut v, &mut v_inv, t, min_pos.1);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / p;
                    let pr = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(pr) {
                        *x = red(*x - q * y);
                    }
                    if a[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j] / p;
                    col_sub(&mut a, &mut v, &mut v_inv, t, j, q);
                    if a[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            if let Some(l) = reduce {
                // p e_t and l e_t generate gcd(p, l) e_t
                a[t][t] = gcd(a[t][t].unsigned_abs() as u64, l as u64) as i128;
            }
            let p = a[t][t];
            // divisibility of the remaining block
            let mut offender = None;
            'find: for i in t + 1..rows {
                for j in t + 1..cols {
                    if a[i][j] % p != 0 {
                        offender = Some(i);
                        break 'find;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(ri) {
                        *x = red(*x + y);
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    if let Some(l) = reduce {
        diag.resize(cols, l);
    }
    IntSmith { diag, cols, v, v_inv }
}

/// A finite abelian group `(Z^n / relations)` in invariant-factor form.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    /// Nontrivial invariant factors `q_1 | q_2 | ...`.
    pub invariants: Vec<u64>,
    n: usize,
    /// For each invariant factor: the column of `V` giving its coordinate.
    coord_cols: Vec<usize>,
    smith: IntSmith,
}

impl AbelianQuotient {
    /// Presents `(Z_{a_1} + ... + Z_{a_n}) / <relations>`; an order of `0`
    /// leaves that coordinate free. The quotient must be finite.
    pub fn new(orders: &[u64], relations: &[Vec<i64>]) -> Self {
        let n = orders.len();
        let mut rows: Vec<Vec<i128>> = Vec::new();
        for (i, &a) in orders.iter().enumerate() {
            if a != 0 {
                let mut r = vec![0i128; n];
                r[i] = a as i128;
                rows.push(r);
            }
        }
        for rel in relations {
            assert_eq!(rel.len(), n);
            if rel.iter().any(|&x| x != 0) {
                rows.push(rel.iter().map(|&x| x as i128).collect());
            }
        }
        // l Z^n is in the relation lattice when every coordinate has finite order
        let l = orders.iter().try_fold(1u64, |acc, &a| if a == 0 { None } else { lcm(acc, a) });
        let smith = int_smith(rows, n, l.map(|l| l as i128));
        assert_eq!(smith.diag.len(), n, "abelian quotient is infinite");
        let mut invariants = Vec::new();
        let mut coord_cols = Vec::new();
        for (i, &d) in smith.diag.iter().enumerate() {
            if d > 1 {
                invariants.push(d as u64);
                coord_cols.push(i);
            }
        }
        AbelianQuotient { invariants, n, coord_cols, smith }
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    /// Invariant-factor coordinates of the image of `x`.
    pub fn coordinates(&self, x: &[i64]) -> Vec<u64> {
        assert_eq!(x.len(), self.n);
        self.coord_cols
            .iter()
            .zip(&self.invariants)
            .map(|(&col, &q)| {
                let y: i128 = (0..self.n).map(|i| x[i] as i128 * self.smith.v[i][col]).sum();
                y.rem_euclid(q as i128) as u64
            })
            .collect()
    }

    /// A preimage in `Z^n` of the `k`-th invariant-factor generator.
    pub fn lift(&self, k: usize) -> Vec<i128> {
        self.smith.v_inv[self.coord_cols[k]].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_by_mixed_relation() {
        let q = AbelianQuotient::new(&[4, 6], &[vec![2, 3]]);
        assert_eq!(q.invariants, vec![12]);
        assert_eq!(q.coordinates(&[2, 3]), vec![0]);
        let g = q.lift(0);
        assert_eq!(q.coordinates(&[g[0] as i64, g[1] as i64]), vec![1]);
    }

    #[test]
    fn gcd_lcm_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(lcm(4, 6), Some(12));
        assert_eq!(lcm(1 << 20, 3 << 20), Some(3 << 20));
        assert_eq!(lcm(1 << 30, 3), None);
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
    }

    #[test]
    fn solve_composite_modulus() {
        // 2x = 2 mod 4 has solutions {1, 3}; 2x = 1 mod 4 has none
        let mut a = ModMatrix::zeros(0, 1, 4);
        a.push_row(&[2]);
        let sols = solve_mod(&a, &[vec![2], vec![1]]);
        let x = sols[0].as_ref().unwrap();
        assert_eq!((2 * x[0]) % 4, 2);
        assert!(sols[1].is_none());
    }

    #[test]
    fn solve_needs_bezout_pivoting() {
        // 6x + 4y = 2 (mod 12), 3x + 2y = 1 (mod 12): no naive pivot works
        let mut a = ModMatrix::zeros(0, 2, 12);
        a.push_row(&[6, 4]);
        a.push_row(&[3, 2]);
        let b = vec![2, 1];
        let x = solve_mod(&a, std::slice::from_ref(&b))[0].clone().unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(solve_mod(&a, &[vec![1, 1]])[0].is_none());
    }

    #[test]
    fn kernel_matches_brute_force() {
        let m = 6;
        let mut a = ModMatrix::zeros(0, 3, m);
        a.push_row(&[2, 3, 0]);
        a.push_row(&[0, 4, 1]);
        let diag = diagonalize(a.clone(), &mut []);
        let kernel = diag.kernel();
        let mut brute = 0u128;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let v = [x, y, z];
                    if a.mul_vec(&v).iter().all(|&e| e == 0) {
                        brute += 1;
                        let coords = kernel.coordinates(&v).expect("kernel element");
                        // reconstruct
                        let mut w = vec![0u64; 3];
                        for (k, &c) in coords.iter().enumerate() {
                            let g = kernel.generator(k);
                            for i in 0..3 {
                                w[i] = (w[i] + c * g[i]) % m;
                            }
                        }
                        assert_eq!(w, v.to_vec());
                    } else {
                        assert!(kernel.coordinates(&v).is_none());
                    }
                }
            }
        }
        assert_eq!(diag.kernel_size(), brute);
        assert_eq!(kernel.orders().iter().map(|&g| g as u128).product::<u128>(), brute);
    }

    #[test]
    fn smith_invariant_factors() {
        let q = AbelianQuotient::new(&[6, 4], &[]);
        assert_eq!(q.invariants, vec![2, 12]);
        let q = AbelianQuotient::new(&[0, 0], &[vec![2, 4], vec![6, 8]]);
        assert_eq!(q.invariants, vec![2, 4]);
        let q = AbelianQuotient::new(&[4, 4], &[vec![1, 1]]);
        assert_eq!(q.invariants, vec![4]);
        // coordinates respect the relation
        assert_eq!(q.coordinates(&[1, 1]), vec![0]);
        assert_eq!(q.coordinates(&[1, 0]), q.coordinates(&[0, 3]));
    }

    #[test]
    fn quotient_lifts_hit_generators() {
        let q = AbelianQuotient::new(&[2, 4, 6], &[vec![1, 2, 3]]);
        for k in 0..q.invariants.len() {
            let lift: Vec<i64> = q.lift(k).iter().map(|&x| x as i64).collect();
            let coords = q.coordinates(&lift);
            for (j, &c) in coords.iter().enumerate() {
                assert_eq!(c, (j == k) as u64);
            }
        }
        assert_eq!(q.order(), 2 * 4 * 6 / 2);
    }
}
