//! The cubic-fourfold lattice `Λ = 2E8 ⊥ 2U ⊥ 3I`, its special vectors, the
//! hyperbolic lattice `Λ₁ = 2E8 ⊥ A2 ⊥ U` with its explicit long roots, and the
//! six isotropic planes of `Λ_o = η⊥`.
//!
//! Coordinates:
//! - `Λ`: `α1..α8, α′1..α′8, e, f, e₂, f₂, ε1, ε2, ε3`
//! - `Λ_o`: `α1..α8, α′1..α′8, e, f, e₂, f₂, β1, β2` with `β1 = ε1−ε2`, `β2 = ε2−ε3`
//! - `Λ₁`: `α1..α8, α′1..α′8, β1, β2, e, f`

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::dynkin::{bit, build_diagram, members, Diagram, Kind, Mask, TypeLabel};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::lattice::{index_in, int_json, make_standard, GramLattice, Sublattice};
use crate::linalg::{self, gcd_all, int, rat, rat_int, to_rat_vec, Int, Rat};
use crate::roots::{roots_of, Root};
use crate::rootsys::{root_system_type, simple_system, RootSystemType};
use crate::vinberg::{self, VinbergRun};

pub const RANK_LAMBDA: usize = 23;
pub const RANK_O: usize = 22;
pub const RANK_1: usize = 20;

// positions in Λ_o
const O_E: usize = 16;
const O_F: usize = 17;
const O_E2: usize = 18;
const O_F2: usize = 19;
const O_B1: usize = 20;
const O_B2: usize = 21;
// positions in Λ₁
const L1_B1: usize = 16;
const L1_B2: usize = 17;
const L1_E: usize = 18;
const L1_F: usize = 19;

/// The three lattices with their distinguished vectors.
#[derive(Debug, Clone)]
pub struct Setup {
    pub lambda: GramLattice,
    /// `η⊥` as a sublattice of `Λ`; its basis is the `Λ_o` coordinate basis.
    pub lambda_o_sub: Sublattice,
    pub lambda_o: GramLattice,
    pub lambda_1: GramLattice,
    /// `ε1+ε2+ε3` in `Λ` coordinates.
    pub eta: Vec<Int>,
    /// Fundamental weights of `E8` in the `α` basis, `ϖ1..ϖ8`.
    pub weights: Vec<Vec<Int>>,
    /// `β0, β1, β2` in `Λ_o` coordinates.
    pub beta: [Vec<Int>; 3],
    /// `hᵢ = η − 3εᵢ` in `Λ_o` coordinates.
    pub h: [Vec<Int>; 3],
}

fn zeros(n: usize) -> Vec<Int> {
    vec![Int::zero(); n]
}

fn unit(n: usize, i: usize) -> Vec<Int> {
    let mut v = zeros(n);
    v[i] = Int::one();
    v
}

fn add(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(c: i64, a: &[Int]) -> Vec<Int> {
    a.iter().map(|x| x * c).collect()
}

fn labelled(parts: &[&str], names: Vec<String>) -> Result<GramLattice> {
    let ls: Vec<GramLattice> = parts
        .iter()
        .map(|p| match *p {
            "E8" => make_standard("E8", None),
            "A2" => make_standard("A2", None),
            "U" => make_standard("U", None),
            "I" => make_standard("I", None),
            _ => unreachable!(),
        })
        .collect::<Result<_>>()?;
    Ok(GramLattice::direct_sum(&ls).with_labels(names))
}

fn e8_names(prime: bool) -> Vec<String> {
    (1..=8)
        .map(|i| {
            if prime {
                format!("a'{i}")
            } else {
                format!("a{i}")
            }
        })
        .collect()
}

/// Builds all three lattices and checks their defining relations.
pub fn build_setup() -> Result<Setup> {
    let mut names = e8_names(false);
    names.extend(e8_names(true));
    let mut n_lambda = names.clone();
    n_lambda.extend(["e", "f", "e2", "f2", "eps1", "eps2", "eps3"].map(String::from));
    let lambda = labelled(&["E8", "E8", "U", "U", "I", "I", "I"], n_lambda)?.with_name("2E8+2U+3I");
    let mut n_o = names.clone();
    n_o.extend(["e", "f", "e2", "f2", "b1", "b2"].map(String::from));
    let lambda_o = labelled(&["E8", "E8", "U", "U", "A2"], n_o)?.with_name("2E8+2U+A2");
    let mut n_1 = names;
    n_1.extend(["b1", "b2", "e", "f"].map(String::from));
    let lambda_1 = labelled(&["E8", "E8", "A2", "U"], n_1)?.with_name("2E8+A2+U");

    let mut eta = zeros(RANK_LAMBDA);
    for i in 20..23 {
        eta[i] = Int::one();
    }
    let basis: Vec<Vec<Int>> = (0..RANK_O).map(|i| o_to_lambda(&unit(RANK_O, i))).collect();
    let lambda_o_sub = Sublattice::new(&lambda, basis)?;

    let e8 = make_standard("E8", None)?;
    let inv = linalg::inverse_q(e8.gram()).ok_or(Error::Degenerate)?;
    let weights: Vec<Vec<Int>> = inv
        .iter()
        .map(|r| {
            linalg::to_int_vec(r)
                .ok_or_else(|| Error::Verification("E8 weights not integral".into()))
        })
        .collect::<Result<_>>()?;

    let b1 = unit(RANK_O, O_B1);
    let b2 = unit(RANK_O, O_B2);
    let b0 = scale(-1, &add(&b1, &b2));
    let h: [Vec<Int>; 3] = [0, 1, 2].map(|i| {
        let mut v = eta.clone();
        v[20 + i] -= 3;
        lambda_to_o(&v).expect("h lies in η⊥")
    });
    let s = Setup {
        lambda,
        lambda_o_sub,
        lambda_o,
        lambda_1,
        eta,
        weights,
        beta: [b0, b1, b2],
        h,
    };
    s.verify()?;
    Ok(s)
}

impl Setup {
    fn verify(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Verification(m.to_string()));
        if self.lambda.norm_z(&self.eta) != rat(3, 1) {
            return fail("η·η ≠ 3");
        }
        if self.lambda_o_sub.gram_lattice().gram() != self.lambda_o.gram() {
            return fail("Λ_o basis does not match its Gram matrix");
        }
        if !self.lambda_o.is_even()? || self.lambda_o.signature() != (20, 2, 0) {
            return fail("Λ_o is not even of signature (20, 2)");
        }
        if self.lambda_1.signature() != (19, 1, 0) {
            return fail("Λ₁ is not hyperbolic");
        }
        let e8 = make_standard("E8", None)?;
        for (i, w) in self.weights.iter().enumerate() {
            for j in 0..8 {
                let p = e8.dot_z(w, &unit(8, j));
                if p != if i == j { Rat::one() } else { Rat::zero() } {
                    return fail("ϖᵢ·αⱼ ≠ δᵢⱼ");
                }
            }
        }
        Ok(())
    }

    /// `ϖᵢ` of the first (`prime = false`) or second `E8` as a `Λ₁` vector.
    pub fn weight_1(&self, i: usize, prime: bool) -> Vec<Int> {
        let mut v = zeros(RANK_1);
        let off = if prime { 8 } else { 0 };
        v[off..off + 8].clone_from_slice(&self.weights[i - 1]);
        v
    }

    pub fn in_lambda(&self, v_o: &[Int]) -> Vec<Int> {
        o_to_lambda(v_o)
    }
}

/// `Λ_o` coordinates to `Λ` coordinates.
pub fn o_to_lambda(v: &[Int]) -> Vec<Int> {
    let mut out = v[..20].to_vec();
    let (p, q) = (&v[O_B1], &v[O_B2]);
    out.push(p.clone());
    out.push(q - p);
    out.push(-q);
    out
}

/// `Λ` coordinates of a vector orthogonal to `η` to `Λ_o` coordinates.
pub fn lambda_to_o(v: &[Int]) -> Result<Vec<Int>> {
    if v.len() != RANK_LAMBDA {
        return Err(Error::DimensionMismatch {
            expected: RANK_LAMBDA,
            got: v.len(),
        });
    }
    if !(&v[20] + &v[21] + &v[22]).is_zero() {
        return Err(Error::NotContained);
    }
    let mut out = v[..20].to_vec();
    out.push(v[20].clone());
    out.push(&v[20] + &v[21]);
    Ok(out)
}

/// `Λ₁` coordinates to `Λ_o` coordinates (the lift into `e₂⊥`).
pub fn one_to_o(v: &[Int]) -> Vec<Int> {
    let mut out = v[..16].to_vec();
    out.push(v[L1_E].clone());
    out.push(v[L1_F].clone());
    out.push(Int::zero());
    out.push(Int::zero());
    out.push(v[L1_B1].clone());
    out.push(v[L1_B2].clone());
    out
}

fn check_o(v: &[Int]) -> Result<()> {
    if v.len() != RANK_O {
        return Err(Error::DimensionMismatch {
            expected: RANK_O,
            got: v.len(),
        });
    }
    Ok(())
}

/// `h·h = 6` and `(η − h)/3 ∈ Λ`, for `h` in `Λ_o` coordinates.
pub fn is_special(s: &Setup, h: &[Int]) -> Result<bool> {
    check_o(h)?;
    if s.lambda_o.norm_z(h) != rat(6, 1) {
        return Ok(false);
    }
    let d: Vec<Int> = s
        .eta
        .iter()
        .zip(o_to_lambda(h))
        .map(|(a, b)| a - b)
        .collect();
    Ok(d.iter().all(|x| (x % 3i64).is_zero()))
}

/// The short root `h/3` of `Λ_o`, with the reflection checked on a basis.
pub fn short_root(s: &Setup, h: &[Int]) -> Result<Root> {
    if !is_special(s, h)? {
        return Err(Error::InvalidParameter("vector is not special".into()));
    }
    let r = Root::from_ray(&s.lambda_o, h)?;
    if !reflection_preserves(&s.lambda_o, &r.vector) {
        return Err(Error::Verification("reflection leaves Λ_o".into()));
    }
    Ok(r)
}

/// Whether the reflection in `r` maps every basis vector of `l` into `l`.
pub fn reflection_preserves(l: &GramLattice, r: &[Rat]) -> bool {
    crate::roots::is_crystallographic(l, r)
}

/// Outcome of [`special_set_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialSetReport {
    pub conforming: bool,
    pub positive_definite: bool,
    pub gram: Vec<Vec<Int>>,
    pub reason: Option<String>,
}

impl SpecialSetReport {
    pub fn to_json(&self) -> Value {
        json!({
            "conforming": self.conforming,
            "positive_definite": self.positive_definite,
            "gram": self.gram.iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "reason": self.reason,
        })
    }
}

/// Checks a set of special vectors against the positive-definite classification:
/// pairwise products `−3`, at most three elements, zero sum for three.
pub fn special_set_check(s: &Setup, set: &[Vec<Int>]) -> Result<SpecialSetReport> {
    for h in set {
        check_o(h)?;
    }
    let gram: Vec<Vec<Int>> = set
        .iter()
        .map(|a| {
            set.iter()
                .map(|b| s.lambda_o.dot_z(a, b).to_integer())
                .collect()
        })
        .collect();
    let report = |ok: bool, pd: bool, why: Option<&str>| SpecialSetReport {
        conforming: ok,
        positive_definite: pd,
        gram: gram.clone(),
        reason: why.map(String::from),
    };
    for h in set {
        if !is_special(s, h)? {
            return Ok(report(false, false, Some("not special")));
        }
    }
    for i in 0..set.len() {
        for j in 0..i {
            let q = vec![to_rat_vec(&set[i]), to_rat_vec(&set[j])];
            if linalg::rank_of_vectors(&q) < 2 {
                return Ok(report(false, false, Some("proportional pair")));
            }
        }
    }
    let span = Sublattice::from_generators(&s.lambda_o, set)?;
    let pd = span.gram_lattice().is_positive_definite();
    if !pd {
        return Ok(report(true, false, None));
    }
    for i in 0..set.len() {
        for j in 0..i {
            if gram[i][j] != int(-3) {
                return Ok(report(false, true, Some("product other than −3")));
            }
        }
    }
    if set.len() > 3 {
        return Ok(report(false, true, Some("more than three elements")));
    }
    if set.len() == 3 {
        let sum = set.iter().fold(zeros(RANK_O), |a, b| add(&a, b));
        if sum.iter().any(|x| !x.is_zero()) {
            return Ok(report(false, true, Some("nonzero sum")));
        }
    }
    Ok(report(true, true, None))
}

/// The 24 long roots of the explicit list, with their vertex labels, in `Λ₁`
/// coordinates.
pub fn explicit_long_roots(s: &Setup) -> Result<Vec<(String, Root)>> {
    check_explicit_long(s, explicit_long_vectors(s))
}

/// The explicit list as plain vectors, unchecked.
pub fn explicit_long_vectors(s: &Setup) -> Vec<(String, Vec<Int>)> {
    let e = unit(RANK_1, L1_E);
    let f = unit(RANK_1, L1_F);
    let b1 = unit(RANK_1, L1_B1);
    let b2 = unit(RANK_1, L1_B2);
    let b0 = scale(-1, &add(&b1, &b2));
    let neg = |v: &[Int]| scale(-1, v);
    let sum = |vs: &[Vec<Int>]| vs.iter().fold(zeros(RANK_1), |a, b| add(&a, b));
    let w = |i: usize, p: bool| s.weight_1(i, p);
    let mut list: Vec<(String, Vec<Int>)> = Vec::new();
    for i in 0..8 {
        list.push((format!("a{}", i + 1), unit(RANK_1, i)));
    }
    list.push(("-w8-e".into(), sum(&[neg(&w(8, false)), neg(&e)])));
    for i in 0..8 {
        list.push((format!("a'{}", i + 1), unit(RANK_1, 8 + i)));
    }
    list.push(("-w'8-e".into(), sum(&[neg(&w(8, true)), neg(&e)])));
    list.push(("u".into(), add(&e, &f)));
    list.push(("ua".into(), add(&neg(&e), &b0)));
    list.push(("au".into(), b1.clone()));
    list.push((
        "a".into(),
        sum(&[
            neg(&w(1, false)),
            neg(&w(1, true)),
            scale(-2, &e),
            scale(2, &f),
            b0.clone(),
        ]),
    ));
    list.push((
        "bv".into(),
        sum(&[
            neg(&w(2, false)),
            neg(&w(7, true)),
            scale(-3, &e),
            scale(3, &f),
            neg(&b1),
            scale(-2, &b2),
        ]),
    ));
    list.push((
        "cw".into(),
        sum(&[
            neg(&w(7, false)),
            neg(&w(2, true)),
            scale(-3, &e),
            scale(3, &f),
            b0.clone(),
            neg(&b2),
        ]),
    ));
    list
}

/// Checks that every vector is a primitive norm 2 root and that all products
/// are `0` or `−1`; errors name the offending vector.
pub fn check_explicit_long(
    s: &Setup,
    list: Vec<(String, Vec<Int>)>,
) -> Result<Vec<(String, Root)>> {
    let mut out = Vec::with_capacity(list.len());
    for (name, v) in list {
        let r = Root::from_ray(&s.lambda_1, &v)
            .map_err(|e| Error::Verification(format!("{name}: {e}")))?;
        if r.norm != rat(2, 1) || r.primitive != v {
            return Err(Error::Verification(format!("{name} is not a norm 2 root")));
        }
        out.push((name, r));
    }
    for i in 0..out.len() {
        for j in 0..i {
            let p = s.lambda_1.dot(&out[i].1.vector, &out[j].1.vector);
            if p != rat(0, 1) && p != rat(-1, 1) {
                return Err(Error::Verification(format!(
                    "{} · {} = {p}",
                    out[i].0, out[j].0
                )));
            }
        }
    }
    Ok(out)
}

/// Diagram of the explicit long roots.
pub fn explicit_long_diagram(s: &Setup) -> Result<Diagram> {
    let roots = explicit_long_roots(s)?;
    let vs: Vec<Vec<Rat>> = roots.iter().map(|r| r.1.vector.clone()).collect();
    Ok(build_diagram(&s.lambda_1, &vs)?.with_names(roots.into_iter().map(|r| r.0).collect()))
}

/// Names of the two parts of the branch set.
pub const PART_1: [&str; 3] = ["a", "b", "c"];
pub const PART_2: [&str; 3] = ["u", "v", "w"];

/// The join of the two parts with every edge subdivided twice; the vertex
/// `xy` sits next to `x` on the edge `{x, y}`. All norms 2, edges product −1.
pub fn subdivided_join_model() -> Diagram {
    let mut names: Vec<String> = PART_1
        .iter()
        .chain(&PART_2)
        .map(|s| s.to_string())
        .collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, x) in PART_1.iter().enumerate() {
        for (j, y) in PART_2.iter().enumerate() {
            let xy = names.len();
            names.push(format!("{x}{y}"));
            let yx = names.len();
            names.push(format!("{y}{x}"));
            edges.extend([(i, xy), (xy, yx), (yx, 3 + j)]);
        }
    }
    let n = names.len();
    let mut p = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        p[i][i] = rat(2, 1);
    }
    for (a, b) in edges {
        p[a][b] = rat(-1, 1);
        p[b][a] = rat(-1, 1);
    }
    Diagram::from_products(vec![rat(2, 1); n], p)
        .expect("valid model")
        .with_names(names)
}

/// A bijection between the two parts of the branch set, with its direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShortRootIndex {
    /// True for a map from `{a,b,c}` to `{u,v,w}`.
    pub forward: bool,
    /// Image of the `i`-th element of the domain, as an index into the other part.
    pub map: [usize; 3],
}

impl ShortRootIndex {
    pub fn all() -> Vec<ShortRootIndex> {
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::new();
        for forward in [true, false] {
            for map in perms {
                out.push(ShortRootIndex { forward, map });
            }
        }
        out
    }

    pub fn inverse(&self) -> ShortRootIndex {
        let mut map = [0; 3];
        for i in 0..3 {
            map[self.map[i]] = i;
        }
        ShortRootIndex {
            forward: !self.forward,
            map,
        }
    }

    /// Pairs `(x, σ(x))` by name.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let (dom, cod) = if self.forward {
            (PART_1, PART_2)
        } else {
            (PART_2, PART_1)
        };
        (0..3)
            .map(|i| (dom[i].to_string(), cod[self.map[i]].to_string()))
            .collect()
    }
}

impl fmt::Display for ShortRootIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(a, b)| format!("{a}{b}"))
            .collect();
        write!(f, "{}", p.join(","))
    }
}

/// Order of `ρ ∘ π⁻¹`-style permutations given as arrays.
fn perm_order(p: [usize; 3]) -> usize {
    let mut q = p;
    let mut k = 1;
    while q != [0, 1, 2] {
        q = [p[q[0]], p[q[1]], p[q[2]]];
        k += 1;
    }
    k
}

/// `σ ∘ τ` as a permutation of the domain of `τ`, when it exists.
fn compose(s: &ShortRootIndex, t: &ShortRootIndex) -> Option<[usize; 3]> {
    (s.forward != t.forward).then(|| [s.map[t.map[0]], s.map[t.map[1]], s.map[t.map[2]]])
}

/// Product `r_σ·r_τ` of two distinct short roots.
pub fn short_pairing(s: &ShortRootIndex, t: &ShortRootIndex) -> Result<Rat> {
    if s == t {
        return Err(Error::InvalidParameter(
            "short_pairing needs distinct bijections".into(),
        ));
    }
    if let Some(p) = compose(s, t) {
        return Ok(match perm_order(p) {
            1 => rat(-2, 3),
            2 => rat(-4, 3),
            _ => rat(-5, 3),
        });
    }
    let p = compose(s, &t.inverse()).expect("same direction");
    Ok(match perm_order(p) {
        2 => rat(-2, 3),
        _ => rat(-4, 3),
    })
}

/// Runs the algorithm on `Λ₁` from `v0` (default `e − f`).
pub fn vinberg_lambda1(s: &Setup, v0: Option<&[Int]>, max_weight: &Rat) -> Result<VinbergRun> {
    let default = add(&unit(RANK_1, L1_E), &scale(-1, &unit(RANK_1, L1_F)));
    vinberg::run_vinberg(&s.lambda_1, v0.unwrap_or(&default), max_weight)
}

/// Short-root labels of a run on `Λ₁` and the comparison with [`short_pairing`].
#[derive(Debug, Clone)]
pub struct ShortLawReport {
    /// Label of each short root, in order of acceptance.
    pub labels: Vec<ShortRootIndex>,
    pub pairs: usize,
    pub matching: usize,
    pub products: BTreeSet<Rat>,
    /// Products between short and long roots that are nonzero.
    pub long_products: BTreeSet<Rat>,
}

impl ShortLawReport {
    pub fn holds(&self) -> bool {
        self.pairs == self.matching && self.pairs == self.labels.len() * (self.labels.len() - 1) / 2
    }

    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "pairs": self.pairs,
            "matching": self.matching,
            "products": self.products.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "holds": self.holds(),
        })
    }
}

/// Indices of the long and short roots of a run.
pub fn split_by_norm(run: &VinbergRun) -> (Vec<usize>, Vec<usize>) {
    let long = (0..run.accepted.len())
        .filter(|&i| run.accepted[i].norm == rat(2, 1))
        .collect();
    let short = (0..run.accepted.len())
        .filter(|&i| run.accepted[i].norm == rat(2, 3))
        .collect();
    (long, short)
}

/// Labels the long roots by an isomorphism onto the model and the short roots
/// by their long neighbours, then compares every pair of short roots.
pub fn short_law_check(run: &VinbergRun) -> Result<ShortLawReport> {
    let d = run.diagram()?;
    let (long, short) = split_by_norm(run);
    let dl = d.induced(&long);
    let model = subdivided_join_model();
    let iso = dl
        .isomorphism(&model)?
        .ok_or_else(|| Error::Verification("long-root diagram differs from the model".into()))?;
    let name_of = |i: usize| -> &str {
        let pos = long.iter().position(|&x| x == i).expect("long root");
        &model.names[iso[pos]]
    };
    let mut labels = Vec::new();
    let mut long_products = BTreeSet::new();
    for &si in &short {
        let mut pairs: Vec<(char, char)> = Vec::new();
        for &li in &long {
            let p = &d.products[si][li];
            if p.is_zero() {
                continue;
            }
            long_products.insert(p.clone());
            let n: Vec<char> = name_of(li).chars().collect();
            if n.len() != 2 {
                return Err(Error::Verification(
                    "short root next to a branch vertex".into(),
                ));
            }
            pairs.push((n[0], n[1]));
        }
        labels.push(label_from_pairs(&pairs)?);
    }
    let mut report = ShortLawReport {
        labels,
        pairs: 0,
        matching: 0,
        products: BTreeSet::new(),
        long_products,
    };
    for a in 0..short.len() {
        for b in 0..a {
            let p = d.products[short[a]][short[b]].clone();
            report.pairs += 1;
            if short_pairing(&report.labels[a], &report.labels[b])? == p {
                report.matching += 1;
            }
            report.products.insert(p);
        }
    }
    Ok(report)
}

fn label_from_pairs(pairs: &[(char, char)]) -> Result<ShortRootIndex> {
    let bad = || Error::Verification("short root neighbours do not form a bijection".into());
    if pairs.len() != 3 {
        return Err(bad());
    }
    let idx = |part: &[&str; 3], c: char| part.iter().position(|x| x.starts_with(c));
    let forward = idx(&PART_1, pairs[0].0).is_some();
    let (dom, cod) = if forward {
        (PART_1, PART_2)
    } else {
        (PART_2, PART_1)
    };
    let mut map = [usize::MAX; 3];
    for &(x, y) in pairs {
        let i = idx(&dom, x).ok_or_else(bad)?;
        let j = idx(&cod, y).ok_or_else(bad)?;
        if map[i] != usize::MAX {
            return Err(bad());
        }
        map[i] = j;
    }
    let mut seen = map;
    seen.sort_unstable();
    if seen != [0, 1, 2] {
        return Err(bad());
    }
    Ok(ShortRootIndex { forward, map })
}

/// The expected full diagram: the model plus one short root per bijection, with
/// product `long_product` against the vertices `xσ(x)`.
pub fn full_model(long_product: &Rat) -> Result<Diagram> {
    let m = subdivided_join_model();
    let idx = ShortRootIndex::all();
    let n = m.len() + idx.len();
    let mut norms = m.norms.clone();
    norms.extend(std::iter::repeat_n(rat(2, 3), idx.len()));
    let mut p = vec![vec![Rat::zero(); n]; n];
    for i in 0..m.len() {
        for j in 0..m.len() {
            p[i][j] = m.products[i][j].clone();
        }
    }
    let mut names = m.names.clone();
    for (a, s) in idx.iter().enumerate() {
        let i = m.len() + a;
        p[i][i] = rat(2, 3);
        names.push(format!("r[{s}]"));
        for (x, y) in s.pairs() {
            let j = m
                .names
                .iter()
                .position(|n| *n == format!("{x}{y}"))
                .expect("model vertex");
            p[i][j] = long_product.clone();
            p[j][i] = long_product.clone();
        }
        for (b, t) in idx.iter().enumerate() {
            if a != b {
                p[i][m.len() + b] = short_pairing(s, t)?;
            }
        }
    }
    Ok(Diagram::from_products(norms, p)?.with_names(names))
}

/// `(div v, [v / div v])` for a primitive vector.
pub fn eichler_invariant(l: &GramLattice, v: &[Int]) -> Result<(Int, Vec<Int>)> {
    if v.len() != l.rank() {
        return Err(Error::DimensionMismatch {
            expected: l.rank(),
            got: v.len(),
        });
    }
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !g.is_one() {
        return Err(Error::NotPrimitive);
    }
    let d = l.divisor(v)?;
    let y: Vec<Rat> = v.iter().map(|x| Rat::new(x.clone(), d.clone())).collect();
    let class = l.discriminant_group()?.class_of(&y)?;
    Ok((d, class))
}

fn random_small<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Int> {
    (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

/// A random vector of `2E8 ⊥ A2` placed in `Λ_o` (zero on both `U`s).
fn random_definite_part<R: Rng>(rng: &mut R, bound: i64) -> Vec<Int> {
    let mut v = random_small(rng, RANK_O, bound);
    for i in O_E..=O_F2 {
        v[i] = Int::zero();
    }
    v
}

/// A random primitive isotropic vector of `Λ_o`.
pub fn random_isotropic<R: Rng>(s: &Setup, rng: &mut R) -> Vec<Int> {
    loop {
        let mut v = random_definite_part(rng, 2);
        let c = int(rng.gen_range(-3..=3));
        let d = int(rng.gen_range(-3..=3));
        let mut a = int(rng.gen_range(1..=3));
        if rng.gen_bool(0.5) {
            a = -a;
        }
        // 2ab + 2cd + x² = 0
        let x2 = s.lambda_o.norm_z(&v).to_integer();
        let cd: Int = &c * &d * 2;
        let num: Int = -(x2 + cd);
        let den: Int = &a * 2;
        if !(&num % &den).is_zero() {
            continue;
        }
        v[O_E] = a;
        v[O_F] = num / den;
        v[O_E2] = c;
        v[O_F2] = d;
        let g = gcd_all(&v);
        if g.is_zero() {
            continue;
        }
        return v.into_iter().map(|x| x / &g).collect();
    }
}

/// An isometry of `Λ_o` that fixes `η` on `Λ`: the reflection in a norm 2
/// vector or minus the reflection in a special vector.
#[derive(Debug, Clone)]
pub enum Generator {
    Long(Vec<Int>),
    NegShort(Vec<Int>),
}

impl Generator {
    pub fn apply(&self, s: &Setup, x: &[Int]) -> Vec<Int> {
        match self {
            Generator::Long(v) => {
                let p = s.lambda_o.dot_z(x, v).to_integer();
                x.iter().zip(v).map(|(a, b)| a - &p * b).collect()
            }
            Generator::NegShort(h) => {
                let p = s.lambda_o.dot_z(x, h).to_integer();
                debug_assert!((&p % 3i64).is_zero());
                let c = p / 3;
                x.iter()
                    .zip(h)
                    .map(|(a, b)| {
                        let t: Int = &c * b;
                        t - a
                    })
                    .collect()
            }
        }
    }
}

/// A random generator: the reflection in a random norm 2 vector, or minus the
/// reflection in one of `h₁, h₂, h₃`.
pub fn random_generator<R: Rng>(s: &Setup, rng: &mut R) -> Generator {
    if rng.gen_ratio(1, 4) {
        return Generator::NegShort(s.h[rng.gen_range(0..3)].clone());
    }
    loop {
        let mut v = random_definite_part(rng, 1);
        let c = int(rng.gen_range(-2..=2));
        let d = int(rng.gen_range(-2..=2));
        // e + b f + c e₂ + d f₂ + x with 2b + 2cd + x² = 2
        let x2 = s.lambda_o.norm_z(&v).to_integer();
        let b = (int(2) - x2 - &c * &d * 2) / 2;
        v[O_E] = Int::one();
        v[O_F] = b;
        v[O_E2] = c;
        v[O_F2] = d;
        if s.lambda_o.norm_z(&v) == rat(2, 1) {
            return Generator::Long(v);
        }
    }
}

/// Applies a random word of length `1..=len` to every vector.
pub fn random_translate<R: Rng>(
    s: &Setup,
    rng: &mut R,
    vs: &[Vec<Int>],
    len: usize,
) -> Vec<Vec<Int>> {
    let k = rng.gen_range(1..=len);
    let word: Vec<Generator> = (0..k).map(|_| random_generator(s, rng)).collect();
    vs.iter()
        .map(|v| word.iter().fold(v.clone(), |x, g| g.apply(s, &x)))
        .collect()
}

/// The six isotropic-plane classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneType {
    TwoE8,
    D16,
    A17,
    E7D10,
    ThreeE6,
    D7A11,
}

impl PlaneType {
    pub const ALL: [PlaneType; 6] = [
        PlaneType::TwoE8,
        PlaneType::D16,
        PlaneType::A17,
        PlaneType::E7D10,
        PlaneType::ThreeE6,
        PlaneType::D7A11,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PlaneType::TwoE8 => "2E8",
            PlaneType::D16 => "D16",
            PlaneType::A17 => "A17",
            PlaneType::E7D10 => "E7+D10",
            PlaneType::ThreeE6 => "3E6",
            PlaneType::D7A11 => "D7+A11",
        }
    }

    fn parts(self) -> Vec<(char, usize)> {
        match self {
            PlaneType::TwoE8 => vec![('E', 8), ('E', 8)],
            PlaneType::D16 => vec![('D', 16)],
            PlaneType::A17 => vec![('A', 17)],
            PlaneType::E7D10 => vec![('E', 7), ('D', 10)],
            PlaneType::ThreeE6 => vec![('E', 6), ('E', 6), ('E', 6)],
            PlaneType::D7A11 => vec![('D', 7), ('A', 11)],
        }
    }

    /// The affine type of the matching pure-affine subdiagram of the long roots.
    pub fn affine_label(self) -> String {
        let ls: Vec<TypeLabel> = self
            .parts()
            .into_iter()
            .map(|(f, r)| TypeLabel::affine(f, r))
            .collect();
        crate::dynkin::format_multiset(&ls)
    }

    pub fn parse(s: &str) -> Result<PlaneType> {
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .replace('⊥', "+");
        PlaneType::ALL
            .into_iter()
            .find(|p| p.label() == t || p.affine_label() == t)
            .ok_or(Error::UnknownLabel(s.to_string()))
    }
}

impl fmt::Display for PlaneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn mask_of_vertices(vs: &[usize]) -> Mask {
    vs.iter().fold(0, |a, &v| a | bit(v))
}

/// The plane spanned by `e₂` and the lift of the isotropic vector of a maximal
/// pure-affine subdiagram of the long roots, saturated in `Λ_o`.
pub fn isotropic_plane_from_affine(s: &Setup, t: PlaneType) -> Result<Sublattice> {
    let d = explicit_long_diagram(s)?;
    let want = t.affine_label();
    let pa = d
        .maximal_pure_affine(Some(&s.lambda_1), d.all())
        .into_iter()
        .find(|p| p.type_string() == want)
        .ok_or_else(|| Error::Verification(format!("no {want} subdiagram")))?;
    let comp = d.components_of(mask_of_vertices(&pa.vertices))[0];
    let nv = d
        .null_vector(comp)
        .ok_or_else(|| Error::Verification("no null vector".into()))?;
    let vecs = d.vectors.as_ref().expect("built from roots");
    let mut v = vec![Rat::zero(); RANK_1];
    for (i, c) in nv {
        for (o, x) in v.iter_mut().zip(&vecs[i]) {
            *o += rat_int(&c) * x;
        }
    }
    let w = linalg::primitive_on_ray(&v).ok_or(Error::ZeroVector)?;
    if !s.lambda_1.norm_z(&w).is_zero() {
        return Err(Error::Verification("null vector is not isotropic".into()));
    }
    let gens = vec![unit(RANK_O, O_E2), one_to_o(&w)];
    let k = Sublattice::from_generators(&s.lambda_o, &gens)?.saturate();
    check_plane(s, &k)?;
    Ok(k)
}

fn check_plane(s: &Setup, k: &Sublattice) -> Result<()> {
    if k.ambient != s.lambda_o {
        return Err(Error::NotContained);
    }
    if k.rank() != 2 {
        return Err(Error::InvalidParameter("plane must have rank 2".into()));
    }
    if k.gram_lattice()
        .gram()
        .iter()
        .flatten()
        .any(|x| !x.is_zero())
    {
        return Err(Error::InvalidParameter("plane is not isotropic".into()));
    }
    if !k.is_saturated() {
        return Err(Error::NotPrimitive);
    }
    Ok(())
}

/// `K⊥/K` for an isotropic plane, with its root system.
#[derive(Debug, Clone)]
pub struct PlaneClass {
    pub quotient: GramLattice,
    pub system: RootSystemType,
}

impl PlaneClass {
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.system.to_string(),
            "stripped": self.system.stripped_label(),
            "components": self.system.to_json(),
            "counts": self.system.counts.iter().map(|(n, c)| json!({"norm": n.to_string(), "count": c})).collect::<Vec<_>>(),
            "det": self.quotient.det().to_string(),
        })
    }
}

fn perp_of(s: &Setup, k: &Sublattice) -> Result<Sublattice> {
    s.lambda_o.orthogonal_complement(k)
}

/// Root system of the positive definite lattice `K⊥/K`.
pub fn classify_isotropic_plane(s: &Setup, k: &Sublattice) -> Result<PlaneClass> {
    check_plane(s, k)?;
    let q = perp_of(s, k)?.radical_quotient().lattice;
    let system = root_system_type(&q)?;
    Ok(PlaneClass {
        quotient: q,
        system,
    })
}

/// Index of the span of the norm 2 roots in `K⊥/K` and whether a generator
/// of the quotient has nonzero image in every component's discriminant group.
pub fn root_span_index(s: &Setup, k: &Sublattice) -> Result<(Int, bool)> {
    check_plane(s, k)?;
    let q = perp_of(s, k)?.radical_quotient().lattice;
    let long: Vec<Root> = roots_of(&q, None)?
        .into_iter()
        .filter(|r| r.norm == rat(2, 1))
        .collect();
    let gens: Vec<Vec<Int>> = long.iter().map(|r| r.primitive.clone()).collect();
    let span = Sublattice::from_generators(&q, &gens)?;
    if span.rank() != q.rank() {
        return Err(Error::Verification("norm 2 roots do not span".into()));
    }
    let index = index_in(&linalg::identity_z(q.rank()), &span.basis)
        .ok_or_else(|| Error::Verification("index".into()))?;
    let vs: Vec<Vec<Rat>> = long.iter().map(|r| r.vector.clone()).collect();
    let simple = simple_system(&q, &vs)?;
    let d = build_diagram(&q, &simple)?;
    let comps = d.components_of(d.all());
    let x = (0..q.rank())
        .map(|i| to_rat_vec(&unit(q.rank(), i)))
        .find(|v| !span.contains(v));
    let diagonal = match x {
        None => false,
        Some(x) => comps.iter().all(|&c| {
            let rows: Vec<Vec<Rat>> = members(c).map(|i| simple[i].clone()).collect();
            let g = linalg::gram_of(q.gram(), &rows);
            let rhs: Vec<Rat> = rows.iter().map(|r| q.dot(r, &x)).collect();
            let c = linalg::solve_q(&g, &rhs).expect("definite component");
            c.iter().any(|t| !t.is_integer())
        }),
    };
    Ok((index, diagonal))
}

/// Answer of [`stratum_meets_arrangement`] with a witness when positive.
#[derive(Debug, Clone)]
pub struct Incidence {
    pub plane: PlaneType,
    pub meets: bool,
    /// A special vector orthogonal to the plane, in `Λ_o` coordinates.
    pub witness: Option<Vec<Int>>,
    /// How the negative answer was obtained.
    pub proof: &'static str,
}

impl Incidence {
    pub fn to_json(&self) -> Value {
        json!({
            "type": self.plane.label(),
            "meets": self.meets,
            "witness": self.witness.as_ref().map(|w| w.iter().map(int_json).collect::<Vec<_>>()),
            "proof": self.proof,
        })
    }
}

/// Whether some special vector is orthogonal to the plane of the given type.
///
/// Special vectors are exactly the norm 6 vectors of `Λ_o` congruent to `h₁`
/// modulo `3Λ_o`. Inside `K⊥` these form, if nonempty, a coset `h_c + 3K⊥`, so
/// the question is whether `(h_c + 3K⊥)/K` has a vector of norm 6, i.e. whether
/// `h̄_c/3 + K⊥/K` has a vector of norm `2/3`. The enumeration is exhaustive.
pub fn stratum_meets_arrangement(s: &Setup, t: PlaneType) -> Result<Incidence> {
    let k = isotropic_plane_from_affine(s, t)?;
    let perp = perp_of(s, &k)?;
    let Some(c) = linalg::solve_mod_prime(&perp.basis, &s.h[0], 3) else {
        return Ok(Incidence {
            plane: t,
            meets: false,
            witness: None,
            proof: "no vector of K⊥ is congruent to h₁ mod 3",
        });
    };
    let hc: Vec<Int> = perp
        .basis
        .iter()
        .zip(&c)
        .fold(zeros(RANK_O), |a, (b, &ci)| add(&a, &scale(ci, b)));
    let rq = perp.radical_quotient();
    let qc = rq.project(&to_rat_vec(&hc)).ok_or(Error::NotContained)?;
    let shift: Vec<Rat> = qc.iter().map(|x| x / rat(3, 1)).collect();
    let found = enumerate::enumerate_affine(&rq.lattice, &shift, &rat(2, 3))?;
    let Some(v) = found.first() else {
        return Ok(Incidence {
            plane: t,
            meets: false,
            witness: None,
            proof: "no norm 2/3 vector in the shifted coset",
        });
    };
    let y: Vec<Rat> = v.iter().zip(&shift).map(|(a, b)| a - b).collect();
    let lift =
        linalg::to_int_vec(&rq.lift(&y)).ok_or_else(|| Error::Verification("lift".into()))?;
    let h = add(&hc, &scale(3, &lift));
    if !is_special(s, &h)? || k.basis.iter().any(|b| !s.lambda_o.dot_z(b, &h).is_zero()) {
        return Err(Error::Verification(
            "witness is not a special vector of K⊥".into(),
        ));
    }
    Ok(Incidence {
        plane: t,
        meets: true,
        witness: Some(h),
        proof: "witness",
    })
}

/// Maximal pure-affine subdiagrams of a diagram of roots of `Λ₁`, as
/// `(type, corank)`, with their stripped finite labels.
pub fn affine_census(s: &Setup, d: &Diagram) -> Vec<(String, usize)> {
    let mut out: Vec<(String, usize)> = d
        .maximal_pure_affine(Some(&s.lambda_1), d.all())
        .into_iter()
        .map(|p| (p.type_string(), p.corank))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// True when every component of the subdiagram is affine and long-root free
/// components are short-root companions.
pub fn is_companion(label: &TypeLabel) -> bool {
    label.family == 'G' || label.short
}

/// Finite-type labels of a pure-affine subdiagram with companions removed.
pub fn stripped_affine(d: &Diagram, vertices: &[usize]) -> String {
    let labels: Vec<TypeLabel> = d
        .classify(mask_of_vertices(vertices))
        .into_iter()
        .filter_map(|c| match c.kind {
            Kind::Affine(l) if !is_companion(&l) => Some(TypeLabel::finite(l.family, l.rank)),
            _ => None,
        })
        .collect();
    crate::dynkin::format_multiset(&labels)
}

/// JSON summary of the setup.
pub fn setup_json(s: &Setup) -> Value {
    json!({
        "lambda": s.lambda.to_json(),
        "lambda_o": s.lambda_o.to_json(),
        "lambda_1": s.lambda_1.to_json(),
        "eta": s.eta.iter().map(int_json).collect::<Vec<_>>(),
        "eta_norm": s.lambda.norm_z(&s.eta).to_string(),
        "h": s.h.iter().map(|h| h.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "weights": s.weights.iter().map(|w| w.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "lambda_o_signature": s.lambda_o.signature(),
        "lambda_o_discriminant": s.lambda_o.discriminant_group().map(|d| d.invariant_factors.iter().map(int_json).collect::<Vec<_>>()).unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn setup_relations() {
        let s = build_setup().unwrap();
        assert_eq!(s.lambda.norm_z(&s.eta), rat(3, 1));
        let sum = s.h.iter().fold(zeros(RANK_O), |a, b| add(&a, b));
        assert!(sum.iter().all(|x| x.is_zero()));
        for i in 0..3 {
            assert_eq!(s.lambda_o.norm_z(&s.h[i]), rat(6, 1));
            for j in 0..i {
                assert_eq!(s.lambda_o.dot_z(&s.h[i], &s.h[j]), rat(-3, 1));
            }
        }
        // the Λ_o coordinates are the η⊥ coordinates
        for i in 0..RANK_O {
            let v = unit(RANK_O, i);
            assert_eq!(lambda_to_o(&o_to_lambda(&v)).unwrap(), v);
        }
        assert_eq!(
            s.lambda_o.discriminant_group().unwrap().invariant_factors,
            vec![int(3)]
        );
        assert_eq!(
            s.weights[7],
            vec![
                int(2),
                int(3),
                int(4),
                int(6),
                int(5),
                int(4),
                int(3),
                int(2)
            ]
        );
    }

    #[test]
    fn special_vectors() {
        let s = build_setup().unwrap();
        assert!(is_special(&s, &s.h[0]).unwrap());
        assert!(!is_special(&s, &s.beta[1]).unwrap());
        assert!(!is_special(&s, &scale(-1, &s.h[0])).unwrap());
        // h₁ + 3α₁ has norm 6 + 18 + 0 = 24
        assert!(!is_special(&s, &add(&s.h[0], &scale(3, &unit(RANK_O, 0)))).unwrap());
        let r = short_root(&s, &s.h[0]).unwrap();
        assert_eq!(r.norm, rat(2, 3));
        assert!(short_root(&s, &s.beta[1]).is_err());
        assert!(is_special(&s, &[int(0)]).is_err());
        assert!(s.lambda.dot_z(&s.eta, &o_to_lambda(&r.primitive)).is_zero());
    }

    #[test]
    fn special_sets() {
        let s = build_setup().unwrap();
        let all = special_set_check(&s, &s.h).unwrap();
        assert!(all.conforming && all.positive_definite);
        let two = special_set_check(&s, &s.h[..2]).unwrap();
        assert_eq!(two.gram, vec![vec![int(6), int(-3)], vec![int(-3), int(6)]]);
        let pm = special_set_check(&s, &[s.h[0].clone(), scale(-1, &s.h[0])]).unwrap();
        assert!(!pm.conforming);
        let dup = special_set_check(&s, &[s.h[0].clone(), s.h[0].clone()]).unwrap();
        assert!(!dup.conforming);
    }

    #[test]
    fn specials_in_the_g2_summand() {
        // the norm 6 vectors of the A2 summand are ±hᵢ; exactly the hᵢ are special
        let s = build_setup().unwrap();
        let a2 = make_standard("A2", None).unwrap();
        let mut specials = Vec::new();
        for v in enumerate::enumerate_norm(&a2, &rat(6, 1)).unwrap() {
            let mut h = zeros(RANK_O);
            h[O_B1] = v[0].clone();
            h[O_B2] = v[1].clone();
            if is_special(&s, &h).unwrap() {
                specials.push(h);
            }
        }
        specials.sort();
        let mut want = s.h.to_vec();
        want.sort();
        assert_eq!(specials, want);
    }

    #[test]
    fn translates_stay_conforming() {
        let s = build_setup().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = random_translate(&s, &mut rng, &s.h, 4);
            let rep = special_set_check(&s, &t).unwrap();
            assert!(rep.conforming, "{rep:?}");
            for h in &t {
                assert_eq!(s.lambda_o.divisor(h).unwrap(), int(3));
            }
        }
    }

    #[test]
    fn eichler() {
        let s = build_setup().unwrap();
        let (d, c) = eichler_invariant(&s.lambda_o, &unit(RANK_O, O_E2)).unwrap();
        assert_eq!(d, int(1));
        assert!(c.iter().all(|x| x.is_zero()));
        assert_eq!(
            eichler_invariant(&s.lambda_o, &unit(RANK_O, O_E)).unwrap(),
            (d, c)
        );
        assert_eq!(
            eichler_invariant(&s.lambda_o, &scale(2, &unit(RANK_O, O_E))),
            Err(Error::NotPrimitive)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let v = random_isotropic(&s, &mut rng);
            assert!(s.lambda_o.norm_z(&v).is_zero());
            assert_eq!(eichler_invariant(&s.lambda_o, &v).unwrap().0, int(1));
        }
    }

    #[test]
    fn explicit_roots() {
        let s = build_setup().unwrap();
        let r = explicit_long_roots(&s).unwrap();
        assert_eq!(r.len(), 24);
        let d = explicit_long_diagram(&s).unwrap();
        assert_eq!(d.degrees().iter().filter(|&&x| x == 3).count(), 6);
        assert_eq!(d.degrees().iter().filter(|&&x| x == 2).count(), 18);
        let model = subdivided_join_model();
        assert!(d.is_isomorphic(&model).unwrap());
        assert_eq!(model.automorphism_order().unwrap(), 72);
    }

    #[test]
    fn corrupted_vector_is_named() {
        let s = build_setup().unwrap();
        let mut list = explicit_long_vectors(&s);
        list[20].1[L1_F] += 1;
        let e = check_explicit_long(&s, list).unwrap_err();
        assert!(e.to_string().contains("au ·"), "{e}");
    }

    #[test]
    fn pairing_law() {
        let all = ShortRootIndex::all();
        assert_eq!(all.len(), 12);
        let s = all[3];
        assert_eq!(short_pairing(&s, &s.inverse()).unwrap(), rat(-2, 3));
        assert!(short_pairing(&s, &s).is_err());
        let mut counts = std::collections::BTreeMap::new();
        for a in 0..12 {
            for b in 0..a {
                let p = short_pairing(&all[a], &all[b]).unwrap();
                assert_eq!(p, short_pairing(&all[b], &all[a]).unwrap());
                *counts.entry(p).or_insert(0) += 1;
            }
        }
        // same direction: 3 transpositions and 2 three-cycles away, twice over six;
        // opposite: one inverse, three of order 2 and two of order 3 per element
        assert_eq!(counts[&rat(-2, 3)], 2 * 9 + 6);
        assert_eq!(counts[&rat(-4, 3)], 2 * 6 + 18);
        assert_eq!(counts[&rat(-5, 3)], 12);
        assert_eq!(counts.values().sum::<i32>(), 66);
    }

    #[test]
    fn plane_parse() {
        assert_eq!(PlaneType::parse("E7⊥D10").unwrap(), PlaneType::E7D10);
        assert_eq!(PlaneType::parse("3E6").unwrap(), PlaneType::ThreeE6);
        assert!(PlaneType::parse("E9").is_err());
    }
}
