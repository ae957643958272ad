//! Exact integer and rational matrix algebra.
//!
//! Matrices are plain row-major `Vec<Vec<_>>`. Everything here is exact;
//! the dimensions we deal with are small (rank at most a few dozen), so
//! the algorithms are the textbook ones.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type ZMat = Vec<Vec<Int>>;
pub type QMat = Vec<Vec<Rat>>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(rat_int).collect()
}

pub fn to_rat_mat(m: &ZMat) -> QMat {
    m.iter().map(|r| to_rat_vec(r)).collect()
}

/// Returns the integer vector if every entry is integral.
pub fn to_int_vec(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                Some(x.to_integer())
            } else {
                None
            }
        })
        .collect()
}

pub fn zero_mat(r: usize, c: usize) -> QMat {
    vec![vec![Rat::zero(); c]; r]
}

pub fn identity_z(n: usize) -> ZMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

pub fn identity_q(n: usize) -> QMat {
    to_rat_mat(&identity_z(n))
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul_q(a: &QMat, b: &QMat) -> QMat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Rat::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul_z(a: &ZMat, b: &ZMat) -> ZMat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Int::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec_q(a: &QMat, v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// Bilinear form `aᵀ G b`.
pub fn bilinear(g: &QMat, a: &[Rat], b: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() || g[i][j].is_zero() {
                continue;
            }
            s += ai * &g[i][j] * bj;
        }
    }
    s
}

/// Gram matrix `Bᵀ G B` of the rows of `basis`.
pub fn gram_of(g: &QMat, basis: &[Vec<Rat>]) -> QMat {
    let k = basis.len();
    let mut out = zero_mat(k, k);
    for i in 0..k {
        for j in i..k {
            let v = bilinear(g, &basis[i], &basis[j]);
            out[j][i] = v.clone();
            out[i][j] = v;
        }
    }
    out
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a Rat>) -> Int {
    it.into_iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a Int>) -> Int {
    it.into_iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

/// Scales a rational vector to the primitive integral vector on the same ray.
pub fn primitive_on_ray(v: &[Rat]) -> Option<Vec<Int>> {
    let den = lcm_denominators(v);
    let ints: Vec<Int> = v.iter().map(|x| (x * rat_int(&den)).to_integer()).collect();
    let g = gcd_all(&ints);
    if g.is_zero() {
        return None;
    }
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(m: &QMat) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

pub fn rank_of_vectors(vs: &[Vec<Rat>]) -> usize {
    rank_q(&vs.to_vec())
}

pub fn det_q(m: &QMat) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

pub fn inverse_q(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `A x = b` for one solution, if any.
pub fn solve_q(a: &QMat, b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: QMat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Expresses `v` in terms of the given (linearly independent) row vectors.
pub fn coordinates_in(basis: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    let a = transpose(basis);
    let x = solve_q(&a, v)?;
    let back: Vec<Rat> = (0..v.len())
        .map(|i| {
            basis
                .iter()
                .zip(&x)
                .fold(Rat::zero(), |acc, (b, c)| acc + &b[i] * c)
        })
        .collect();
    if back.as_slice() == v {
        Some(x)
    } else {
        None
    }
}

/// Rational kernel basis of `A` (vectors x with A x = 0).
pub fn kernel_q(a: &QMat, cols: usize) -> Vec<Vec<Rat>> {
    let mut m = a.clone();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); cols];
            x[f] = Rat::one();
            for (r, &p) in piv.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Smith normal form `U A V = D` with `U`, `V` unimodular.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: ZMat,
    pub v: ZMat,
    /// Diagonal entries `d_0 | d_1 | …`, nonnegative; length `min(rows, cols)`.
    pub diag: Vec<Int>,
    pub rank: usize,
}

pub fn smith(a: &ZMat, cols: usize) -> Smith {
    let rows = a.len();
    let mut m = a.clone();
    let mut u = identity_z(rows);
    let mut v = identity_z(cols);
    let n = rows.min(cols);

    fn row_add(m: &mut ZMat, dst: usize, src: usize, f: &Int) {
        if f.is_zero() {
            return;
        }
        let (d, s) = if dst < src {
            let (lo, hi) = m.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = m.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x += f * y;
            }
        }
    }
    fn col_add(m: &mut ZMat, dst: usize, src: usize, f: &Int) {
        if f.is_zero() {
            return;
        }
        for row in m.iter_mut() {
            if !row[src].is_zero() {
                let t = f * &row[src];
                row[dst] += t;
            }
        }
    }
    fn col_swap(m: &mut ZMat, a: usize, b: usize) {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }

    let mut t = 0;
    while t < n {
        // pivot of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if m[bi][bj].abs() <= m[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut m, t, pj);
        col_swap(&mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                row_add(&mut m, i, t, &-&q);
                row_add(&mut u, i, t, &-&q);
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    u.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                col_add(&mut m, j, t, &-&q);
                col_add(&mut v, j, t, &-&q);
                if !m[t][j].is_zero() {
                    col_swap(&mut m, t, j);
                    col_swap(&mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !m[i][j].is_zero() && !m[i][j].is_multiple_of(&m[t][t]) {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let one = Int::one();
                    row_add(&mut m, t, i, &one);
                    row_add(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diag: Vec<Int> = (0..n).map(|i| m[i][i].clone()).collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    Smith { u, v, diag, rank }
}

/// Splits `ℤ^cols` along the kernel of `A`: returns `(K, C)` where the rows
/// of `K` are a basis of the integer kernel and `K ∪ C` is a basis of `ℤ^cols`.
///
/// Uses LLL on `c·AᵀA + I` for growing `c`, which keeps every vector small
/// (elimination over ℤ blows up on the lattices we meet).
pub fn kernel_split(a: &ZMat, cols: usize) -> (ZMat, ZMat) {
    if a.is_empty() || a.iter().flatten().all(|x| x.is_zero()) {
        return (identity_z(cols), Vec::new());
    }
    let want = cols - rank_q(&to_rat_mat(a));
    let ata: ZMat = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| a.iter().fold(Int::zero(), |s, r| s + &r[i] * &r[j]))
                .collect()
        })
        .collect();
    let mut bits = 2 * cols + 16;
    loop {
        let c = Int::one() << bits;
        let g: QMat = (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| {
                        let d = if i == j { Int::one() } else { Int::zero() };
                        Rat::from_integer(&c * &ata[i][j] + d)
                    })
                    .collect()
            })
            .collect();
        let l = crate::lattice::GramLattice::new(g).expect("symmetric");
        let red = crate::enumerate::lll_reduce(&l).expect("positive definite");
        let (kernel, rest): (ZMat, ZMat) = transpose(&red.transform).into_iter().partition(|v| {
            a.iter().all(|r| {
                r.iter()
                    .zip(v)
                    .fold(Int::zero(), |s, (x, y)| s + x * y)
                    .is_zero()
            })
        });
        if kernel.len() == want {
            return (kernel, rest);
        }
        bits *= 2;
    }
}

/// Saturated integer kernel of `A` (rows × cols), returned as row vectors.
pub fn kernel_z(a: &ZMat, cols: usize) -> Vec<Vec<Int>> {
    kernel_split(a, cols).0
}

/// A basis of the lattice generated by integer vectors of length `dim`.
pub fn span_basis(gens: &[Vec<Int>], dim: usize) -> ZMat {
    let reduce = |gens: &[Vec<Int>]| -> ZMat {
        let (_, comp) = kernel_split(&transpose(gens), gens.len());
        comp.iter()
            .map(|c| {
                (0..dim)
                    .map(|j| {
                        c.iter()
                            .zip(gens)
                            .fold(Int::zero(), |s, (ci, g)| s + ci * &g[j])
                    })
                    .collect()
            })
            .collect()
    };
    // start from an independent subset, then add only generators outside the
    // current lattice, so each reduction stays small
    let mut basis: ZMat = Vec::new();
    for g in gens {
        let mut t = basis.clone();
        t.push(g.clone());
        if independent(&t) {
            basis = t;
        }
    }
    if basis.is_empty() {
        return basis;
    }
    basis = reduce(&basis);
    for g in gens {
        let rows: QMat = basis.iter().map(|r| to_rat_vec(r)).collect();
        let inside =
            coordinates_in(&rows, &to_rat_vec(g)).is_some_and(|c| c.iter().all(|x| x.is_integer()));
        if !inside {
            let mut t = basis.clone();
            t.push(g.clone());
            basis = reduce(&t);
        }
    }
    basis
}

/// Basis (rows) of `{x ∈ ℤ^cols : A x ≡ 0 (mod d)}`.
pub fn kernel_mod(a: &ZMat, cols: usize, d: &Int) -> Vec<Vec<Int>> {
    if d.is_one() || a.is_empty() {
        return identity_z(cols);
    }
    // project the kernel of [A | d·I] to the first block
    let rows = a.len();
    let wide: ZMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut w = r.clone();
            w.extend((0..rows).map(|j| if i == j { d.clone() } else { Int::zero() }));
            w
        })
        .collect();
    let gens: ZMat = kernel_z(&wide, cols + rows)
        .into_iter()
        .map(|v| v[..cols].to_vec())
        .collect();
    span_basis(&gens, cols)
}

/// Primitive closure of the span of the given integer row vectors, as a basis.
pub fn saturate_rows(rows: &[Vec<Int>], dim: usize) -> Vec<Vec<Int>> {
    if rows.is_empty() {
        return Vec::new();
    }
    // The saturation is the kernel of the kernel.
    let k = kernel_z(&rows.to_vec(), dim);
    if k.is_empty() {
        return identity_z(dim);
    }
    kernel_z(&k, dim)
}

/// Integer row-rank check plus independence.
pub fn independent(rows: &[Vec<Int>]) -> bool {
    let q: QMat = rows.iter().map(|r| to_rat_vec(r)).collect();
    rank_q(&q) == rows.len()
}

/// Largest integer `s` with `s*s <= n` (for `n >= 0`).
pub fn isqrt(n: &Int) -> Int {
    n.sqrt()
}

/// Some `c` with `Σ cᵢ rowsᵢ ≡ target (mod p)`, for a prime `p`.
pub fn solve_mod_prime(rows: &[Vec<Int>], target: &[Int], p: i64) -> Option<Vec<i64>> {
    let k = rows.len();
    let n = target.len();
    let red = |x: &Int| -> i64 { (x % p).to_i64().unwrap().rem_euclid(p) };
    let inv = |a: i64| -> i64 {
        let mut r = 1;
        for _ in 0..p - 2 {
            r = r * a % p;
        }
        r
    };
    // augmented system: one equation per coordinate, unknowns c_0..c_{k-1}
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut row: Vec<i64> = rows.iter().map(|r| red(&r[j])).collect();
            row.push(red(&target[j]));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(pr) = (r..n).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let iv = inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..n {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..=k {
                    m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[k] != 0) {
        return None;
    }
    let mut sol = vec![0i64; k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][k];
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(rows: &[&[i64]]) -> ZMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn smith_of_small_matrix() {
        let a = zm(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a, 3);
        assert_eq!(s.diag, vec![int(2), int(6), int(12)]);
        let d = mat_mul_z(&mat_mul_z(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(d[i][j].is_zero());
                } else {
                    assert_eq!(d[i][i], s.diag[i]);
                }
            }
        }
    }

    #[test]
    fn kernel_is_saturated() {
        // x + 2y + 3z = 0
        let a = zm(&[&[1, 2, 3]]);
        let k = kernel_z(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + int(2) * &v[1] + int(3) * &v[2]).is_zero());
        }
        let sat = saturate_rows(&k, 3);
        assert_eq!(sat.len(), 2);
    }

    #[test]
    fn saturate_of_multiple() {
        let s = saturate_rows(&[vec![int(3), int(6)]], 2);
        assert_eq!(s.len(), 1);
        let g = gcd_all(&s[0]);
        assert!(g.is_one());
    }

    #[test]
    fn det_and_inverse() {
        let a = to_rat_mat(&zm(&[&[2, -1], &[-1, 2]]));
        assert_eq!(det_q(&a), rat(3, 1));
        let inv = inverse_q(&a).unwrap();
        assert_eq!(inv[0][0], rat(2, 3));
        assert_eq!(mat_mul_q(&a, &inv), identity_q(2));
    }

    #[test]
    fn kernel_mod_three() {
        // A2 Gram: vectors x with G x ≡ 0 mod 3 form an index-3 sublattice
        let g = zm(&[&[2, -1], &[-1, 2]]);
        let k = kernel_mod(&g, 2, &int(3));
        let q: QMat = k.iter().map(|r| to_rat_vec(r)).collect();
        assert_eq!(det_q(&q).abs(), rat(3, 1));
    }

    #[test]
    fn mod_prime_solutions() {
        let rows = zm(&[&[1, 1, 0], &[0, 1, 1]]);
        let t = vec![int(1), int(2), int(1)];
        let c = solve_mod_prime(&rows, &t, 3).unwrap();
        for j in 0..3 {
            let r = |i: usize| rows[i][j].to_i64().unwrap();
            let v = (c[0] * r(0) + c[1] * r(1) - t[j].to_i64().unwrap()).rem_euclid(3);
            assert_eq!(v, 0);
        }
        assert!(solve_mod_prime(&rows, &[int(1), int(0), int(0)], 3).is_none());
    }
}
