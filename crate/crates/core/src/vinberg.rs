//! Vinberg's algorithm for the reflection group of a hyperbolic lattice.
//!
//! Roots are produced batch by batch in increasing weight `(r·v0)²/(r·r)`.
//! Inside a batch the candidates are the integral points of a dominant cone:
//! writing `w = (m/v0²)v0 + w'` with `w'` in `v0⊥`, the products `w·s` with the
//! stabilizer base `s` must be nonpositive, and in those coordinates the norm of
//! `w'` is a form with nonnegative cross terms, so Fincke–Pohst can prune by
//! monotonicity. A batch ends with the finite-volume test.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::dynkin::{bit, build_diagram, members, Diagram, Kind, Mask};
use crate::enumerate::{FinckePohst, Mode, Search};
use crate::error::{Error, Result};
use crate::lattice::{int_json, GramLattice, Sublattice};
use crate::linalg::{self, gcd_all, rat_int, to_rat_vec, Int, Rat};
use crate::roots::{candidate_norms, integral_form, need, roots_of, Root};
use crate::rootsys::simple_system;

/// Default weight budget of a run.
pub const DEFAULT_MAX_WEIGHT: i64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    FiniteVolume,
    BudgetExhausted,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Running => "running",
            Status::FiniteVolume => "finite_volume",
            Status::BudgetExhausted => "budget_exhausted",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// State and result of one run.
#[derive(Debug, Clone)]
pub struct VinbergRun {
    pub lattice: GramLattice,
    pub v0: Vec<Int>,
    /// Accepted roots in order of acceptance.
    pub accepted: Vec<Root>,
    /// Weight of each accepted root.
    pub weights: Vec<Rat>,
    /// Number of leading roots that come from the stabilizer of `v0`.
    pub stabilizer_len: usize,
    pub max_weight: Rat,
    pub status: Status,
    /// Largest weight examined so far.
    pub reached: Rat,
}

impl VinbergRun {
    pub fn diagram(&self) -> Result<Diagram> {
        let vs: Vec<Vec<Rat>> = self.accepted.iter().map(|r| r.vector.clone()).collect();
        let names = (0..vs.len()).map(|i| format!("r{i}")).collect();
        Ok(build_diagram(&self.lattice, &vs)?.with_names(names))
    }

    pub fn count_by_norm(&self) -> Vec<(Rat, usize)> {
        let mut out: Vec<(Rat, usize)> = Vec::new();
        for r in &self.accepted {
            match out.iter_mut().find(|c| c.0 == r.norm) {
                Some(c) => c.1 += 1,
                None => out.push((r.norm.clone(), 1)),
            }
        }
        out.sort_by(|a, b| b.0.cmp(&a.0));
        out
    }

    pub fn to_json(&self) -> Value {
        let norms: serde_json::Map<String, Value> = self
            .count_by_norm()
            .into_iter()
            .map(|(n, c)| (n.to_string(), json!(c)))
            .collect();
        json!({
            "v0": self.v0.iter().map(int_json).collect::<Vec<_>>(),
            "roots": self.accepted.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "norms": norms,
            "weights": self.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "stabilizer": self.stabilizer_len,
            "max_weight": self.max_weight.to_string(),
            "reached": self.reached.to_string(),
            "status": self.status.name(),
        })
    }

    pub fn to_dot(&self) -> Result<String> {
        Ok(self.diagram()?.to_dot("vinberg"))
    }
}

fn check_v0(l: &GramLattice, v0: &[Int]) -> Result<()> {
    if v0.len() != l.rank() {
        return Err(Error::DimensionMismatch {
            expected: l.rank(),
            got: v0.len(),
        });
    }
    if !l.norm_z(v0).is_negative() {
        return Err(Error::InvalidParameter("v0 must have negative norm".into()));
    }
    Ok(())
}

/// A base of the roots orthogonal to `v0`, positive for the lexicographic order.
pub fn stabilizer_chamber(l: &GramLattice, v0: &[Int]) -> Result<Vec<Root>> {
    check_v0(l, v0)?;
    let line = Sublattice::new(l, vec![v0.to_vec()])?;
    let perp = l.orthogonal_complement(&line)?;
    let roots = roots_of(l, Some(&perp))?;
    let vs: Vec<Vec<Rat>> = roots.iter().map(|r| r.vector.clone()).collect();
    let simple = simple_system(l, &vs)?;
    Ok(simple
        .into_iter()
        .map(|s| {
            roots
                .iter()
                .find(|r| r.vector == s)
                .cloned()
                .expect("base element is a root")
        })
        .collect())
}

fn weight(l: &GramLattice, r: &Root, v0: &[Rat]) -> Rat {
    let p = l.dot(&r.vector, v0);
    &p * &p / &r.norm
}

/// Coordinates in which the candidates of a batch are enumerated.
struct Frame {
    /// Integral basis of `v0⊥ ⊗ ℚ`: stabilizer directions first.
    basis: Vec<Vec<Int>>,
    /// How many leading basis vectors carry the sign condition.
    signed: usize,
    /// Inverse Gram of `basis` (integral form).
    ginv: Vec<Vec<Rat>>,
    /// Row `l`: the ambient vector with products `δ_{lj}` against `basis`.
    t: Vec<Vec<Rat>>,
    v0: Vec<Int>,
    v0_norm: Rat,
}

impl Frame {
    fn new(sl: &GramLattice, v0: &[Int], stab: &[Root]) -> Result<Frame> {
        let n = sl.rank();
        let mut basis: Vec<Vec<Int>> = stab.iter().map(|r| r.primitive.clone()).collect();
        let signed = basis.len();
        let mut gens = basis.clone();
        gens.push(v0.to_vec());
        let span = Sublattice::new(sl, gens)?;
        let rest = sl.orthogonal_complement(&span)?;
        basis.extend(rest.basis);
        if basis.len() != n - 1 {
            return Err(Error::Verification("v0⊥ frame has the wrong rank".into()));
        }
        let rows: Vec<Vec<Rat>> = basis.iter().map(|b| to_rat_vec(b)).collect();
        let g = linalg::gram_of(sl.gram(), &rows);
        let ginv = linalg::inverse_q(&g).ok_or(Error::Degenerate)?;
        let t: Vec<Vec<Rat>> = (0..basis.len())
            .map(|l| {
                (0..n)
                    .map(|i| {
                        basis
                            .iter()
                            .enumerate()
                            .fold(Rat::zero(), |a, (j, b)| a + &ginv[j][l] * rat_int(&b[i]))
                    })
                    .collect()
            })
            .collect();
        Ok(Frame {
            basis,
            signed,
            ginv,
            t,
            v0: v0.to_vec(),
            v0_norm: sl.norm_z(v0),
        })
    }

    /// All primitive `w` with `w·w = n`, `w·v0 = m`, `w·s ≤ 0` on the stabilizer
    /// base and `w ∈ need(n)·L*`, sorted lexicographically.
    fn candidates(&self, sl: &GramLattice, m: &Int, n: &Int, budget: u64) -> Result<Vec<Vec<Int>>> {
        let k = self.basis.len();
        let nd = need(n);
        let ndr = rat_int(&nd);
        // y_i = w·b_i = sign_i · need · x_i with x_i ≥ 0 on the signed part
        let sign = |i: usize| {
            if i < self.signed {
                -Rat::one()
            } else {
                Rat::one()
            }
        };
        let form: Vec<Vec<Rat>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| &ndr * &ndr * sign(i) * sign(j) * &self.ginv[i][j])
                    .collect()
            })
            .collect();
        let mr = rat_int(m);
        let target = rat_int(n) - &mr * &mr / &self.v0_norm;
        let mut search = Search::new(k, target, Mode::Exact);
        for i in 0..self.signed {
            search.lower[i] = Some(0);
        }
        search.budget = budget;
        let fp = FinckePohst::new(&form)?;
        // w = Σ_l y_l T_l + base, kept as integers over a common denominator
        let base: Vec<Rat> = self
            .v0
            .iter()
            .map(|x| rat_int(x) * &mr / &self.v0_norm)
            .collect();
        let den = linalg::lcm_denominators(self.t.iter().flatten().chain(&base));
        let dr = rat_int(&den);
        let to_i = |x: &Rat| -> Result<i128> {
            (x * &dr)
                .to_integer()
                .to_i128()
                .ok_or(Error::Overflow("candidate"))
        };
        let tcols: Vec<Vec<i128>> = self
            .t
            .iter()
            .map(|row| row.iter().map(|x| to_i(&(x * &ndr))).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let base_i: Vec<i128> = base.iter().map(to_i).collect::<Result<_>>()?;
        let den_i = den.to_i128().ok_or(Error::Overflow("candidate"))?;
        let rank = self.v0.len();
        let mut out = Vec::new();
        let mut bad: Option<Error> = None;
        let mut acc = vec![0i128; rank];
        fp.search(&search, &mut |x| {
            if bad.is_some() {
                return;
            }
            acc.copy_from_slice(&base_i);
            for (l, &xl) in x.iter().enumerate() {
                if xl == 0 {
                    continue;
                }
                let c = if l < self.signed {
                    -(xl as i128)
                } else {
                    xl as i128
                };
                for (a, t) in acc.iter_mut().zip(&tcols[l]) {
                    match t.checked_mul(c).and_then(|p| a.checked_add(p)) {
                        Some(v) => *a = v,
                        None => {
                            bad = Some(Error::Overflow("candidate"));
                            return;
                        }
                    }
                }
            }
            if acc.iter().any(|a| a % den_i != 0) {
                return;
            }
            let w: Vec<Int> = acc.iter().map(|a| Int::from(a / den_i)).collect();
            if !gcd_all(&w).is_one() {
                return;
            }
            match sl.divisor(&w) {
                Ok(d) if d.is_multiple_of(&nd) => out.push(w),
                Ok(_) => {}
                Err(e) => bad = Some(e),
            }
        })?;
        if let Some(e) = bad {
            return Err(e);
        }
        out.sort();
        Ok(out)
    }
}

/// Runs the algorithm until the accepted roots bound a polytope of finite
/// volume or every weight up to `max_weight` has been examined.
pub fn run_vinberg(l: &GramLattice, v0: &[Int], max_weight: &Rat) -> Result<VinbergRun> {
    run_vinberg_budget(l, v0, max_weight, crate::enumerate::DEFAULT_BUDGET)
}

/// As [`run_vinberg`], with a node budget per enumeration.
pub fn run_vinberg_budget(
    l: &GramLattice,
    v0: &[Int],
    max_weight: &Rat,
    budget: u64,
) -> Result<VinbergRun> {
    check_v0(l, v0)?;
    let (p, q, z) = l.signature();
    if q != 1 || z != 0 || p == 0 {
        return Err(Error::InvalidParameter(
            "lattice must have signature (n, 1)".into(),
        ));
    }
    let stab = stabilizer_chamber(l, v0)?;
    let mut run = VinbergRun {
        lattice: l.clone(),
        v0: v0.to_vec(),
        weights: vec![Rat::zero(); stab.len()],
        stabilizer_len: stab.len(),
        accepted: stab,
        max_weight: max_weight.clone(),
        status: Status::Running,
        reached: Rat::zero(),
    };
    if finite_volume_check(&run)? {
        run.status = Status::FiniteVolume;
        return Ok(run);
    }
    let sl = integral_form(l);
    let frame = Frame::new(&sl, v0, &run.accepted)?;
    let v0q = to_rat_vec(v0);
    let scale = rat_int(l.scale());
    // weight of (m, N) in the form of l: m² / (scale · N)
    let mut pairs: Vec<(Rat, Int, Int)> = Vec::new();
    for n in candidate_norms(l)? {
        let nd = need(&n);
        let mut m = nd.clone();
        loop {
            let w = rat_int(&(&m * &m)) / (&scale * rat_int(&n));
            if w > *max_weight {
                break;
            }
            pairs.push((w, -m.clone(), n.clone()));
            m += &nd;
        }
    }
    pairs.sort();
    let mut i = 0;
    while i < pairs.len() {
        let w = pairs[i].0.clone();
        let mut batch: Vec<Vec<Int>> = Vec::new();
        while i < pairs.len() && pairs[i].0 == w {
            batch.extend(frame.candidates(&sl, &pairs[i].1, &pairs[i].2, budget)?);
            i += 1;
        }
        batch.sort();
        run.reached = w.clone();
        let mut added = false;
        for c in batch {
            let ok = run
                .accepted
                .iter()
                .all(|b| !sl.dot_z(&c, &b.primitive).is_positive());
            if ok {
                let r = Root::from_ray(l, &c)?;
                run.weights.push(weight(l, &r, &v0q));
                run.accepted.push(r);
                added = true;
            }
        }
        if added && finite_volume_check(&run)? {
            run.status = Status::FiniteVolume;
            return Ok(run);
        }
    }
    run.reached = max_weight.clone();
    run.status = Status::BudgetExhausted;
    Ok(run)
}

/// Finite-volume test for the polytope cut out by the accepted mirrors.
///
/// Walks the vertex graph from a first vertex: a vertex is an elliptic
/// subdiagram of rank `n − 1` or a parabolic one of rank `n − 2`, an edge an
/// elliptic subdiagram of rank `n − 2`, and every edge must extend to exactly two
/// vertices. In rank 2 the polytope is a segment or a ray ending at a cusp.
pub fn finite_volume_check(run: &VinbergRun) -> Result<bool> {
    let d = run.diagram()?;
    polytope_has_finite_volume(&run.lattice, &d)
}

/// The same test on a diagram of roots of `l`.
pub fn polytope_has_finite_volume(l: &GramLattice, d: &Diagram) -> Result<bool> {
    let n = l.rank();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "hyperbolic lattices have rank at least 2".into(),
        ));
    }
    if n == 2 {
        return Ok(d.len() >= 2 || (d.len() == 1 && is_isotropic(l)?));
    }
    let Some(start) = first_vertex(d, n) else {
        return Ok(false);
    };
    let mut seen_v: HashSet<Mask> = HashSet::from([start]);
    let mut seen_e: HashSet<Mask> = HashSet::new();
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for e in vertex_edges(d, v) {
            if !seen_e.insert(e) {
                continue;
            }
            let ext = extensions(d, e, n);
            if ext.len() != 2 {
                return Ok(false);
            }
            for x in ext {
                if seen_v.insert(x) {
                    queue.push_back(x);
                }
            }
        }
    }
    Ok(true)
}

fn is_isotropic(l: &GramLattice) -> Result<bool> {
    let g = integral_form(l).scaled_gram();
    let disc: Int = &g[0][1] * &g[0][1] - &g[0][0] * &g[1][1];
    if disc.is_negative() {
        return Ok(false);
    }
    let s = disc.sqrt();
    Ok(&s * &s == disc)
}

fn rank_of(d: &Diagram, m: Mask) -> usize {
    m.count_ones() as usize - d.components_of(m).len()
}

/// An elliptic set with `n − 1` vertices or a parabolic set of rank `n − 2`.
fn first_vertex(d: &Diagram, n: usize) -> Option<Mask> {
    fn grow(d: &Diagram, n: usize, m: Mask, from: usize) -> Option<Mask> {
        if m.count_ones() as usize == n - 1 {
            return Some(m);
        }
        for v in from..d.len() {
            let next = m | bit(v);
            if d.is_elliptic(next) {
                if let Some(x) = grow(d, n, next, v + 1) {
                    return Some(x);
                }
            }
        }
        None
    }
    if let Some(x) = grow(d, n, 0, 0) {
        return Some(x);
    }
    d.maximal_pure_affine(None, d.all())
        .into_iter()
        .map(|p| p.vertices.iter().fold(0, |a, &v| a | bit(v)))
        .find(|&m| rank_of(d, m) == n - 2)
}

fn vertex_edges(d: &Diagram, v: Mask) -> Vec<Mask> {
    if d.is_elliptic(v) {
        return members(v).map(|x| v & !bit(x)).collect();
    }
    // drop one vertex from every affine component
    let mut out = vec![v];
    for c in d.components_of(v) {
        out = out
            .into_iter()
            .flat_map(|m| members(c).map(move |x| m & !bit(x)))
            .collect();
    }
    out
}

/// Vertices containing the edge `e`.
fn extensions(d: &Diagram, e: Mask, n: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    let comps = d.components_of(e);
    // for each outside vertex, the components of e it touches
    let mut touch: Vec<(usize, u64)> = Vec::new();
    for y in members(d.all() & !e) {
        let m = e | bit(y);
        if d.is_elliptic(m) {
            out.push(m);
            continue;
        }
        let mut t = 0u64;
        let mut grp = bit(y);
        for (ci, &c) in comps.iter().enumerate() {
            if d.neighbors(y) & c != 0 {
                t |= 1 << ci;
                grp |= c;
            }
        }
        if t != 0 && matches!(d.kind_of(grp), Kind::Affine(_)) {
            touch.push((y, t));
        }
    }
    let all: u64 = if comps.len() == 64 {
        u64::MAX
    } else {
        (1u64 << comps.len()) - 1
    };
    let mut chosen: Vec<usize> = Vec::new();
    cover(d, &touch, all, 0, &mut chosen, &mut |ys| {
        let m = ys.iter().fold(e, |a, &y| a | bit(y));
        debug_assert_eq!(rank_of(d, m), n - 2);
        out.push(m);
    });
    out
}

/// Exact covers of the components by groups `touch`, with pairwise
/// nonadjacent new vertices.
fn cover(
    d: &Diagram,
    touch: &[(usize, u64)],
    all: u64,
    covered: u64,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if covered == all {
        emit(chosen);
        return;
    }
    let first = (!covered & all).trailing_zeros();
    for &(y, t) in touch {
        if t & (1 << first) == 0 || t & covered != 0 {
            continue;
        }
        if chosen.iter().any(|&u| d.neighbors(u) & bit(y) != 0) {
            continue;
        }
        chosen.push(y);
        cover(d, touch, all, covered | t, chosen, emit);
        chosen.pop();
    }
}

/// Type and corank `rank(L) − rank(span)` of each maximal pure-affine subdiagram.
pub fn pure_affine_coranks(run: &VinbergRun) -> Result<Vec<(String, usize)>> {
    let d = run.diagram()?;
    Ok(d.maximal_pure_affine(Some(&run.lattice), d.all())
        .into_iter()
        .map(|p| (p.type_string(), p.corank))
        .collect())
}

/// Parses a vector of integers like `1,-1,0`.
pub fn parse_vector(s: &str) -> Result<Vec<Int>> {
    s.split(',')
        .enumerate()
        .map(|(i, t)| {
            t.trim()
                .replace('−', "-")
                .parse::<Int>()
                .map_err(|_| Error::Parse {
                    pos: i,
                    msg: format!("bad integer {t:?}"),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_standard;
    use crate::linalg::{int, rat};

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn hyperbolic_plane() {
        let u = make_standard("U", None).unwrap();
        let run = run_vinberg(&u, &ints(&[1, -1]), &rat(100, 1)).unwrap();
        assert_eq!(run.status, Status::FiniteVolume);
        assert_eq!(run.accepted.len(), 1);
        assert_eq!(run.accepted[0].primitive, ints(&[1, 1]));
        assert!(finite_volume_check(&run).unwrap());
    }

    #[test]
    fn rejects_bad_v0() {
        let u = make_standard("U", None).unwrap();
        assert!(stabilizer_chamber(&u, &ints(&[1, 1])).is_err());
        assert!(stabilizer_chamber(&u, &ints(&[1, 1, 0])).is_err());
        let e8 = make_standard("E8", None).unwrap();
        assert!(run_vinberg(&e8, &ints(&[1, 0, 0, 0, 0, 0, 0, 0]), &rat(10, 1)).is_err());
    }

    #[test]
    fn no_orthogonal_roots() {
        // <-1> + <1>: v0 = (2, 1) has norm -3 and v0⊥ = <(1, 2)> of norm 3, not a root
        let l = GramLattice::from_integer_gram(&[vec![-1, 0], vec![0, 1]]).unwrap();
        let s = stabilizer_chamber(&l, &ints(&[2, 1])).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn odd_unimodular_small_rank() {
        // I_{n,1} is reflective for small n; the polytope is a simplex
        for n in 2..=5 {
            let mut g = vec![vec![0i64; n + 1]; n + 1];
            g[0][0] = -1;
            for i in 1..=n {
                g[i][i] = 1;
            }
            let l = GramLattice::from_integer_gram(&g).unwrap();
            let mut v0 = vec![int(0); n + 1];
            v0[0] = int(1);
            let run = run_vinberg(&l, &v0, &rat(100, 1)).unwrap();
            assert_eq!(run.status, Status::FiniteVolume, "n = {n}");
            assert_eq!(run.accepted.len(), n + 1, "n = {n}");
            let d = run.diagram().unwrap();
            for i in 0..d.len() {
                for j in 0..i {
                    assert!(!d.products[i][j].is_positive());
                }
            }
        }
    }

    #[test]
    fn even_unimodular_u_plus_e8() {
        // U + E8 gives the 10-vertex diagram T_{2,3,7}
        let l = GramLattice::direct_sum(&[
            make_standard("U", None).unwrap(),
            make_standard("E8", None).unwrap(),
        ]);
        let mut v0 = vec![int(0); 10];
        v0[0] = int(1);
        v0[1] = int(-1);
        let run = run_vinberg(&l, &v0, &rat(100, 1)).unwrap();
        assert_eq!(run.status, Status::FiniteVolume);
        assert_eq!(run.accepted.len(), 10);
        let d = run.diagram().unwrap();
        assert_eq!(d.degrees().iter().filter(|&&x| x == 3).count(), 1);
        let w: Vec<Rat> = run.weights.clone();
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn budget() {
        let l = GramLattice::direct_sum(&[
            make_standard("U", None).unwrap(),
            make_standard("E8", None).unwrap(),
        ]);
        let mut v0 = vec![int(0); 10];
        v0[0] = int(1);
        v0[1] = int(-1);
        let run = run_vinberg(&l, &v0, &rat(0, 1)).unwrap();
        assert_eq!(run.status, Status::BudgetExhausted);
        assert!(!finite_volume_check(&run).unwrap());
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1, −2,3").unwrap(), ints(&[1, -2, 3]));
        assert!(parse_vector("1,x").is_err());
    }
}
