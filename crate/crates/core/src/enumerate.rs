//! Lattice point enumeration: integral LLL and Fincke–Pohst.
//!
//! The tree search runs on `Ratio<i128>` with checked operations. Any overflow
//! surfaces as [`Error::Overflow`]; nothing wraps silently.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::linalg::{self, identity_z, rat_int, transpose, Int, QMat, Rat, ZMat};

/// Default cap on visited search nodes.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

type R = Ratio<i128>;

fn small(x: &Rat) -> Result<R> {
    let n = x
        .numer()
        .to_i128()
        .ok_or(Error::Overflow("rational conversion"))?;
    let d = x
        .denom()
        .to_i128()
        .ok_or(Error::Overflow("rational conversion"))?;
    Ok(R::new(n, d))
}

fn add(a: &R, b: &R) -> Result<R> {
    a.checked_add(b).ok_or(Error::Overflow("enumeration"))
}

fn sub(a: &R, b: &R) -> Result<R> {
    a.checked_sub(b).ok_or(Error::Overflow("enumeration"))
}

fn mul(a: &R, b: &R) -> Result<R> {
    a.checked_mul(b).ok_or(Error::Overflow("enumeration"))
}

fn isqrt_i128(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = n;
    let mut y = (x + 1) / 2;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// Result of LLL reduction: the reduced lattice and the change of basis.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub lattice: GramLattice,
    /// Columns are the reduced basis vectors in old coordinates.
    pub transform: ZMat,
}

/// Integral LLL with `δ = 3/4` on a positive definite Gram matrix.
pub fn lll_reduce(l: &GramLattice) -> Result<Reduced> {
    if !l.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let g = l.scaled_gram();
    let n = l.rank();
    if n == 0 {
        return Ok(Reduced {
            lattice: l.clone(),
            transform: Vec::new(),
        });
    }
    // h[k] is the k-th basis vector (a column of the transform)
    let mut h: ZMat = identity_z(n);
    let dot = |a: &Vec<Int>, b: &Vec<Int>| -> Int {
        let mut s = Int::zero();
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[j].is_zero() && !g[i][j].is_zero() {
                    s += &a[i] * &g[i][j] * &b[j];
                }
            }
        }
        s
    };
    // 1-based indices below, as in the usual presentation
    let mut d = vec![Int::zero(); n + 1];
    let mut lam = vec![vec![Int::zero(); n + 1]; n + 1];
    d[0] = Int::one();
    d[1] = dot(&h[0], &h[0]);
    let mut k = 2;
    let mut kmax = 1;

    fn red(k: usize, l: usize, h: &mut ZMat, lam: &mut [Vec<Int>], d: &[Int]) {
        let two_l: Int = &lam[k][l] * 2;
        if two_l.abs() > d[l] {
            let q = (two_l + &d[l]).div_floor(&(&d[l] * 2));
            let hl = h[l - 1].clone();
            for (x, y) in h[k - 1].iter_mut().zip(&hl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l];
            for i in 1..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&h[k - 1], &h[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::LinearlyDependent);
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut h, &mut lam, &d);
            let lhs: Int = &d[k] * &d[k - 2] * 4;
            let rhs: Int = &d[k - 1] * &d[k - 1] * 3 - &lam[k][k - 1] * &lam[k][k - 1] * 4;
            if lhs < rhs {
                h.swap(k - 1, k - 2);
                for j in 1..k.saturating_sub(1) {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let la = lam[k][k - 1].clone();
                let b = (&d[k - 2] * &d[k] + &la * &la) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &la * &t) / &d[k - 1];
                    lam[i][k - 1] = (&b * &t + &la * &lam[i][k]) / &d[k];
                }
                d[k - 1] = b;
                if k > 2 {
                    k -= 1;
                }
            } else {
                for l in (1..k - 1).rev() {
                    red(k, l, &mut h, &mut lam, &d);
                }
                k += 1;
                break;
            }
        }
    }
    let rows: QMat = h.iter().map(|r| linalg::to_rat_vec(r)).collect();
    let gram = linalg::gram_of(l.gram(), &rows);
    let lattice = GramLattice::new(gram)?;
    Ok(Reduced {
        lattice,
        transform: transpose(&h),
    })
}

/// Whether solutions must hit the target exactly or may lie below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    AtMost,
}

/// Parameters of a single Fincke–Pohst search.
#[derive(Debug, Clone)]
pub struct Search {
    /// Solutions are `x ∈ ℤⁿ` with `Q(x + shift) = target` (or `≤`).
    pub shift: Option<Vec<Rat>>,
    /// Optional lower bound per coordinate of `x`.
    pub lower: Vec<Option<i64>>,
    pub target: Rat,
    pub mode: Mode,
    pub budget: u64,
}

impl Search {
    pub fn new(n: usize, target: Rat, mode: Mode) -> Self {
        Search {
            shift: None,
            lower: vec![None; n],
            target,
            mode,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Fincke–Pohst enumerator for a fixed positive definite quadratic form.
#[derive(Debug, Clone)]
pub struct FinckePohst {
    n: usize,
    d: Vec<R>,
    mu: Vec<Vec<R>>,
    q: Vec<Vec<R>>,
}

impl FinckePohst {
    pub fn new(form: &QMat) -> Result<Self> {
        let n = form.len();
        let mut a = form.clone();
        for i in 0..n {
            if !a[i][i].is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            for j in i + 1..n {
                a[j][i] = a[i][j].clone();
                a[i][j] = &a[i][j] / &a[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    let t = &a[k][i] * &a[i][l];
                    a[k][l] -= t;
                }
            }
        }
        let d = (0..n)
            .map(|i| small(&a[i][i]))
            .collect::<Result<Vec<_>>>()?;
        let mut mu = vec![vec![R::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                mu[i][j] = small(&a[i][j])?;
            }
        }
        let q = form
            .iter()
            .map(|r| r.iter().map(small).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(FinckePohst { n, d, mu, q })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Runs the search, calling `visit` on every solution.
    pub fn search(&self, p: &Search, visit: &mut dyn FnMut(&[i64])) -> Result<()> {
        let n = self.n;
        if p.lower.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.lower.len(),
            });
        }
        let target = small(&p.target)?;
        if target.is_negative() {
            return Ok(());
        }
        if n == 0 {
            if target.is_zero() || p.mode == Mode::AtMost {
                visit(&[]);
            }
            return Ok(());
        }
        let shift = match &p.shift {
            Some(s) => {
                if s.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: s.len(),
                    });
                }
                s.iter().map(small).collect::<Result<Vec<_>>>()?
            }
            None => vec![R::zero(); n],
        };
        // Monotone pruning at level i: if every coordinate is forced
        // nonnegative and the lower ones couple nonnegatively to the fixed
        // ones, then the value with the lower coordinates zeroed is a lower bound.
        let orthant =
            shift.iter().all(|s| s.is_zero()) && p.lower.iter().all(|b| b.is_some_and(|b| b >= 0));
        let monotone: Vec<bool> = (0..n)
            .map(|i| orthant && (0..i).all(|u| (i..n).all(|f| !self.q[u][f].is_negative())))
            .collect();
        let mut st = State {
            fp: self,
            p,
            shift,
            monotone,
            x: vec![0i64; n],
            nodes: 0,
            target,
        };
        st.level(n - 1, &st.target.clone(), &R::zero(), visit)
    }

    /// Collects all solutions.
    pub fn collect(&self, p: &Search) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        self.search(p, &mut |x| out.push(x.to_vec()))?;
        Ok(out)
    }
}

struct State<'a> {
    fp: &'a FinckePohst,
    p: &'a Search,
    shift: Vec<R>,
    monotone: Vec<bool>,
    x: Vec<i64>,
    nodes: u64,
    target: R,
}

impl State<'_> {
    /// `rem` is the target minus the contribution of levels above `i`;
    /// `fixed` is `Q` evaluated on the fixed coordinates alone.
    fn level(&mut self, i: usize, rem: &R, fixed: &R, visit: &mut dyn FnMut(&[i64])) -> Result<()> {
        let fp = self.fp;
        let n = fp.n;
        let mut a = self.shift[i];
        for j in i + 1..n {
            if fp.mu[i][j].is_zero() {
                continue;
            }
            let y = add(&R::from_integer(self.x[j] as i128), &self.shift[j])?;
            a = add(&a, &mul(&fp.mu[i][j], &y)?)?;
        }
        let bound = rem / fp.d[i];
        let Some((mut lo, hi)) = interval(&a, &bound)? else {
            return Ok(());
        };
        if let Some(lb) = self.p.lower[i] {
            lo = lo.max(lb as i128);
        }
        // linear coupling of x_i to the fixed coordinates, for monotone pruning
        let mono = self.monotone[i];
        let mut cross = R::zero();
        if mono {
            for j in i + 1..n {
                if !fp.q[i][j].is_zero() {
                    cross = add(
                        &cross,
                        &mul(&fp.q[i][j], &R::from_integer(self.x[j] as i128))?,
                    )?;
                }
            }
        }
        let mut xi = lo;
        while xi <= hi {
            self.nodes += 1;
            if self.nodes > self.p.budget {
                return Err(Error::ResourceExhausted(format!(
                    "enumeration exceeded {} nodes",
                    self.p.budget
                )));
            }
            let xr = R::from_integer(xi);
            let mut new_fixed = *fixed;
            if mono {
                // fixed + 2 x_i cross + q_ii x_i^2
                let t = add(&mul(&R::from_integer(2), &cross)?, &mul(&fp.q[i][i], &xr)?)?;
                new_fixed = add(fixed, &mul(&xr, &t)?)?;
                if new_fixed > self.target {
                    break;
                }
            }
            let z = add(&xr, &a)?;
            let used = mul(&fp.d[i], &mul(&z, &z)?)?;
            let r = sub(rem, &used)?;
            self.x[i] = i64::try_from(xi).map_err(|_| Error::Overflow("coordinate"))?;
            if i == 0 {
                let ok = match self.p.mode {
                    Mode::Exact => r.is_zero(),
                    Mode::AtMost => !r.is_negative(),
                };
                if ok {
                    visit(&self.x);
                }
            } else if !r.is_negative() {
                self.level(i - 1, &r, &new_fixed, visit)?;
            }
            xi += 1;
        }
        self.x[i] = 0;
        Ok(())
    }
}

/// Integers `x` with `(x + a)² ≤ b`, as an inclusive interval.
fn interval(a: &R, b: &R) -> Result<Option<(i128, i128)>> {
    if b.is_negative() {
        return Ok(None);
    }
    let m = isqrt_i128(b.floor().to_integer());
    let fits = |x: i128| -> Result<bool> {
        let z = add(&R::from_integer(x), a)?;
        Ok(mul(&z, &z)? <= *b)
    };
    let h1 = (R::from_integer(m + 1) - a).floor().to_integer();
    let hi = if R::from_integer(h1) + a <= R::zero() || fits(h1)? {
        h1
    } else {
        h1 - 1
    };
    let l1 = (R::from_integer(-m - 1) - a).ceil().to_integer();
    let lo = if R::from_integer(l1) + a >= R::zero() || fits(l1)? {
        l1
    } else {
        l1 + 1
    };
    Ok((lo <= hi).then_some((lo, hi)))
}

fn check_definite(l: &GramLattice) -> Result<()> {
    if l.is_positive_definite() {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite)
    }
}

fn apply(t: &ZMat, y: &[i64]) -> Vec<Int> {
    t.iter()
        .map(|row| {
            row.iter()
                .zip(y)
                .fold(Int::zero(), |acc, (a, &b)| acc + a * BigInt::from(b))
        })
        .collect()
}

/// All vectors of norm exactly `n`, sorted lexicographically.
pub fn enumerate_norm(l: &GramLattice, n: &Rat) -> Result<Vec<Vec<Int>>> {
    enumerate_norm_budget(l, n, DEFAULT_BUDGET)
}

pub fn enumerate_norm_budget(l: &GramLattice, n: &Rat, budget: u64) -> Result<Vec<Vec<Int>>> {
    check_definite(l)?;
    let red = lll_reduce(l)?;
    let fp = FinckePohst::new(red.lattice.gram())?;
    let mut s = Search::new(l.rank(), n.clone(), Mode::Exact);
    s.budget = budget;
    let mut out: Vec<Vec<Int>> = Vec::new();
    fp.search(&s, &mut |y| out.push(apply(&red.transform, y)))?;
    out.sort();
    Ok(out)
}

/// All vectors of norm at most `n` (including zero), sorted lexicographically.
pub fn enumerate_short(l: &GramLattice, n: &Rat, budget: u64) -> Result<Vec<Vec<Int>>> {
    check_definite(l)?;
    let red = lll_reduce(l)?;
    let fp = FinckePohst::new(red.lattice.gram())?;
    let mut s = Search::new(l.rank(), n.clone(), Mode::AtMost);
    s.budget = budget;
    let mut out: Vec<Vec<Int>> = Vec::new();
    fp.search(&s, &mut |y| out.push(apply(&red.transform, y)))?;
    out.sort();
    Ok(out)
}

/// All `v ∈ shift + L` with `v·v = n`, sorted lexicographically.
pub fn enumerate_affine(l: &GramLattice, shift: &[Rat], n: &Rat) -> Result<Vec<Vec<Rat>>> {
    check_definite(l)?;
    if shift.len() != l.rank() {
        return Err(Error::DimensionMismatch {
            expected: l.rank(),
            got: shift.len(),
        });
    }
    let red = lll_reduce(l)?;
    let tq = linalg::to_rat_mat(&red.transform);
    let tinv = linalg::inverse_q(&tq).expect("unimodular");
    let s_red = linalg::mat_vec_q(&tinv, shift);
    let fp = FinckePohst::new(red.lattice.gram())?;
    let mut s = Search::new(l.rank(), n.clone(), Mode::Exact);
    s.shift = Some(s_red);
    let mut out: Vec<Vec<Rat>> = Vec::new();
    fp.search(&s, &mut |y| {
        let v = apply(&red.transform, y);
        out.push(v.iter().zip(shift).map(|(a, b)| rat_int(a) + b).collect());
    })?;
    out.sort();
    Ok(out)
}

/// Smallest nonzero norm of a positive definite lattice.
pub fn minimum(l: &GramLattice) -> Result<Rat> {
    check_definite(l)?;
    if l.rank() == 0 {
        return Err(Error::InvalidParameter(
            "rank zero lattice has no minimum".into(),
        ));
    }
    let red = lll_reduce(l)?;
    // the first reduced vector bounds the minimum
    let bound = red.lattice.gram()[0][0].clone();
    let fp = FinckePohst::new(red.lattice.gram())?;
    let s = Search::new(l.rank(), bound.clone(), Mode::AtMost);
    let mut best = bound;
    fp.search(&s, &mut |y| {
        if y.iter().any(|&c| c != 0) {
            let v: Vec<Rat> = y
                .iter()
                .map(|&c| Rat::from_integer(BigInt::from(c)))
                .collect();
            let q = linalg::bilinear(red.lattice.gram(), &v, &v);
            if q < best {
                best = q;
            }
        }
    })?;
    Ok(best)
}

/// Exhaustive search over the box `|x_i| ≤ sqrt(n · (G⁻¹)_ii)`: the oracle the
/// enumerator is tested against. Returns every vector of norm at most `n`,
/// sorted. Fails when the box has more than `cap` points.
pub fn box_search(l: &GramLattice, n: &Rat, cap: u64) -> Result<Vec<Vec<Int>>> {
    check_definite(l)?;
    let inv = linalg::inverse_q(l.gram()).ok_or(Error::Degenerate)?;
    let r = l.rank();
    let bounds: Vec<i64> = (0..r)
        .map(|i| {
            let b = n * &inv[i][i];
            let mut s = b.floor().to_integer().sqrt();
            while Rat::from_integer(&s * &s) <= b {
                s += 1;
            }
            s.to_i64().unwrap_or(i64::MAX)
        })
        .collect();
    let size = bounds
        .iter()
        .try_fold(1u64, |a, &b| a.checked_mul(2 * b.unsigned_abs() + 1));
    if size.is_none_or(|s| s > cap) {
        return Err(Error::ResourceExhausted(format!(
            "box with bounds {bounds:?}"
        )));
    }
    let g = l.scaled_gram_i64()?;
    let limit = (n * rat_int(l.scale()))
        .floor()
        .to_i64()
        .ok_or(Error::Overflow("box search"))?;
    let mut out = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let q: i64 = (0..r)
            .map(|i| (0..r).map(|j| g[i][j] * x[i] * x[j]).sum::<i64>())
            .sum();
        if q <= limit {
            out.push(x.iter().map(|&c| Int::from(c)).collect());
        }
        let mut k = 0;
        loop {
            if k == r {
                out.sort();
                return Ok(out);
            }
            if x[k] < bounds[k] {
                x[k] += 1;
                break;
            }
            x[k] = -bounds[k];
            k += 1;
        }
    }
}

/// A random positive definite lattice `BBᵀ` with entries of `B` in `[-2, 2]`.
pub fn random_definite<R: rand::Rng>(rng: &mut R, r: usize) -> GramLattice {
    loop {
        let b: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let g: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| b[i][k] * b[j][k]).sum())
                    .collect()
            })
            .collect();
        let l = GramLattice::from_integer_gram(&g).expect("symmetric");
        if l.is_positive_definite() {
            return l;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_standard;
    use crate::linalg::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn root_counts() {
        let e8 = make_standard("E8", None).unwrap();
        assert_eq!(enumerate_norm(&e8, &rat(2, 1)).unwrap().len(), 240);
        let a2 = make_standard("A2", None).unwrap();
        assert_eq!(enumerate_norm(&a2, &rat(2, 1)).unwrap().len(), 6);
        assert!(enumerate_norm(&a2, &rat(1, 1)).unwrap().is_empty());
        assert_eq!(enumerate_norm(&e8, &rat(4, 1)).unwrap().len(), 2160);
    }

    #[test]
    fn box_oracle_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..12 {
            let r = rng.gen_range(1..=4);
            let l = random_definite(&mut rng, r);
            for n in 1..=6 {
                let n = rat(n, 1);
                let exact: Vec<Vec<Int>> = box_search(&l, &n, 1 << 24)
                    .unwrap()
                    .into_iter()
                    .filter(|v| l.norm_z(v) == n)
                    .collect();
                assert_eq!(enumerate_norm(&l, &n).unwrap(), exact);
            }
        }
    }

    #[test]
    fn negation_closed() {
        let d4 = make_standard("D4", None).unwrap();
        let v = enumerate_norm(&d4, &rat(2, 1)).unwrap();
        assert_eq!(v.len(), 24);
        for x in &v {
            let neg: Vec<Int> = x.iter().map(|c| -c).collect();
            assert!(v.contains(&neg));
        }
    }

    #[test]
    fn lll_scrambled_e8() {
        let e8 = make_standard("E8", None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = identity_z(8);
        for _ in 0..40 {
            let i = rng.gen_range(0..8);
            let j = rng.gen_range(0..8);
            if i != j {
                let c = int(rng.gen_range(-3..=3));
                let row = t[j].clone();
                for (a, b) in t[i].iter_mut().zip(&row) {
                    *a += &c * b;
                }
            }
        }
        let rows: QMat = t.iter().map(|r| linalg::to_rat_vec(r)).collect();
        let scrambled = GramLattice::new(linalg::gram_of(e8.gram(), &rows)).unwrap();
        let red = lll_reduce(&scrambled).unwrap();
        for i in 0..8 {
            assert_eq!(red.lattice.gram()[i][i], rat(2, 1));
        }
        assert_eq!(red.lattice.det().abs(), scrambled.det().abs());
        let a2 = make_standard("A2", None).unwrap();
        assert_eq!(lll_reduce(&a2).unwrap().transform, identity_z(2));
        assert!(lll_reduce(&make_standard("U", None).unwrap()).is_err());
    }

    #[test]
    fn affine_half_shift() {
        let a1 = GramLattice::from_integer_gram(&[vec![2]]).unwrap();
        let sols = enumerate_affine(&a1, &[rat(1, 2)], &rat(1, 2)).unwrap();
        assert_eq!(sols, vec![vec![rat(-1, 2)], vec![rat(1, 2)]]);
        assert!(enumerate_affine(&a1, &[rat(1, 2)], &rat(1, 4))
            .unwrap()
            .is_empty());
        let a2 = make_standard("A2", None).unwrap();
        assert_eq!(
            enumerate_affine(&a2, &[rat(0, 1), rat(0, 1)], &rat(2, 1))
                .unwrap()
                .len(),
            6
        );
    }

    #[test]
    fn budget_is_enforced() {
        let e8 = make_standard("E8", None).unwrap();
        let err = enumerate_norm_budget(&e8, &rat(6, 1), 100).unwrap_err();
        assert_eq!(err.code(), "resource_exhausted");
    }

    #[test]
    fn lower_bounds_restrict() {
        let a2 = make_standard("A2", None).unwrap();
        let fp = FinckePohst::new(a2.gram()).unwrap();
        let mut s = Search::new(2, rat(2, 1), Mode::Exact);
        s.lower = vec![Some(0), Some(0)];
        let sols = fp.collect(&s).unwrap();
        // (1,0), (0,1), (1,1)
        assert_eq!(sols.len(), 3);
    }

    #[test]
    fn minimum_of_lattices() {
        assert_eq!(
            minimum(&make_standard("E8", None).unwrap()).unwrap(),
            rat(2, 1)
        );
        let l = make_standard("A2", None)
            .unwrap()
            .rescale(&rat(2, 1))
            .unwrap();
        assert_eq!(minimum(&l).unwrap(), rat(4, 1));
    }
}
