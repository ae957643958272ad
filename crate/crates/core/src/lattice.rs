//! Lattices given by an exact Gram matrix, and the structural operations on them.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{
    self, bilinear, gcd_all, int, inverse_q, kernel_z, lcm_denominators, mat_mul_z, rat_int, smith,
    to_rat_vec, transpose, Int, QMat, Rat, ZMat,
};

pub mod spec;

/// A finite-rank lattice with a rational symmetric bilinear form.
#[derive(Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: QMat,
    scale: Int,
    name: Option<String>,
    labels: Vec<String>,
}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GramLattice")
            .field("name", &self.name)
            .field("rank", &self.rank())
            .field("scale", &self.scale)
            .finish()
    }
}

impl GramLattice {
    /// Builds a lattice from a symmetric rational Gram matrix.
    pub fn new(gram: QMat) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidParameter(format!(
                        "gram is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let scale = lcm_denominators(gram.iter().flatten());
        let labels = (0..n).map(|i| format!("b{}", i + 1)).collect();
        Ok(GramLattice {
            gram,
            scale,
            name: None,
            labels,
        })
    }

    pub fn from_integer_gram(rows: &[Vec<i64>]) -> Result<Self> {
        let g = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(int(x))).collect())
            .collect();
        Self::new(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rank());
        self.labels = labels;
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    pub fn scale(&self) -> &Int {
        &self.scale
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_integral(&self) -> bool {
        self.scale.is_one()
    }

    /// `scale · gram` as an integer matrix.
    pub fn scaled_gram(&self) -> ZMat {
        let s = rat_int(&self.scale);
        self.gram
            .iter()
            .map(|r| r.iter().map(|x| (x * &s).to_integer()).collect())
            .collect()
    }

    /// `scale · gram` as machine integers; fails if any entry is too large.
    pub fn scaled_gram_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.scaled_gram()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().ok_or(Error::Overflow("scaled gram")))
                    .collect()
            })
            .collect()
    }

    fn integral_gram(&self) -> Result<ZMat> {
        if !self.is_integral() {
            return Err(Error::NotIntegral(self.scale.to_string()));
        }
        Ok(self.scaled_gram())
    }

    pub fn dot(&self, a: &[Rat], b: &[Rat]) -> Rat {
        bilinear(&self.gram, a, b)
    }

    pub fn norm(&self, v: &[Rat]) -> Rat {
        self.dot(v, v)
    }

    pub fn dot_z(&self, a: &[Int], b: &[Int]) -> Rat {
        self.dot(&to_rat_vec(a), &to_rat_vec(b))
    }

    pub fn norm_z(&self, v: &[Int]) -> Rat {
        self.dot_z(v, v)
    }

    /// The row vector `gram · v`, i.e. the products of `v` with every basis vector.
    pub fn pairings(&self, v: &[Rat]) -> Vec<Rat> {
        linalg::mat_vec_q(&self.gram, v)
    }

    pub fn det(&self) -> Rat {
        linalg::det_q(&self.gram)
    }

    /// Counts `(positive, negative, zero)` directions by exact congruence diagonalization.
    pub fn signature(&self) -> (usize, usize, usize) {
        let n = self.rank();
        let mut a = self.gram.clone();
        let (mut p, mut q, mut r) = (0, 0, 0);
        let mut k = 0;
        while k < n {
            if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
                sym_swap(&mut a, k, i);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // x_i <- x_i + x_j makes the (i,i) entry 2 a_ij != 0
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for rr in 0..n {
                    let t = a[rr][j].clone();
                    a[rr][i] += t;
                }
                sym_swap(&mut a, k, i);
            } else {
                r += n - k;
                break;
            }
            let piv = a[k][k].clone();
            if piv.is_positive() {
                p += 1;
            } else {
                q += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &piv;
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
                for rr in k..n {
                    let t = &f * &a[rr][k];
                    a[rr][i] -= t;
                }
            }
            k += 1;
        }
        (p, q, r)
    }

    pub fn is_positive_definite(&self) -> bool {
        let (p, _, _) = self.signature();
        p == self.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    /// True iff every vector has even norm. Needs an integral form.
    pub fn is_even(&self) -> Result<bool> {
        let g = self.integral_gram()?;
        Ok(g.iter().enumerate().all(|(i, r)| r[i].is_even()))
    }

    /// Scales the form by a nonzero rational.
    pub fn rescale(&self, c: &Rat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidParameter("rescale by zero".into()));
        }
        let g = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x * c).collect())
            .collect();
        let mut out = GramLattice::new(g)?;
        out.labels = self.labels.clone();
        out.name = self.name.as_ref().map(|n| {
            if c.is_one() {
                n.clone()
            } else {
                format!("{n}({c})")
            }
        });
        Ok(out)
    }

    /// `gcd { v·x : x a basis vector }` for a nonzero integral vector of an integral lattice.
    pub fn divisor(&self, v: &[Int]) -> Result<Int> {
        let g = self.integral_gram()?;
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.len(),
            });
        }
        if v.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let prods = mat_mul_z(&g, &v.iter().map(|x| vec![x.clone()]).collect());
        let d = gcd_all(prods.iter().map(|r| &r[0]));
        if d.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(d)
    }

    /// Checks that `v` has integer coordinates.
    pub fn contains(&self, v: &[Rat]) -> bool {
        v.len() == self.rank() && v.iter().all(|x| x.is_integer())
    }

    /// The reflection `x ↦ x − 2(x·r)/(r·r) r`.
    pub fn reflect(&self, r: &[Rat], x: &[Rat]) -> Vec<Rat> {
        let f = self.dot(x, r) * Rat::from_integer(int(2)) / self.norm(r);
        x.iter().zip(r).map(|(a, b)| a - &f * b).collect()
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        let g = self.integral_gram()?;
        let n = self.rank();
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        let s = smith(&g, n);
        let vt = transpose(&s.v);
        let mut factors = Vec::new();
        let mut generators: Vec<Vec<Rat>> = Vec::new();
        let mut class_rows = Vec::new();
        for i in 0..n {
            let d = &s.diag[i];
            if d.is_one() {
                continue;
            }
            factors.push(d.clone());
            generators.push(
                vt[i]
                    .iter()
                    .map(|x| Rat::new(x.clone(), d.clone()))
                    .collect(),
            );
            class_rows.push(s.u[i].clone());
        }
        let k = generators.len();
        let mut pairing = vec![vec![Rat::zero(); k]; k];
        let mut qform = Vec::with_capacity(k);
        for i in 0..k {
            for j in 0..k {
                pairing[i][j] = frac_mod(&self.dot(&generators[i], &generators[j]), 1);
            }
            qform.push(frac_mod(&self.norm(&generators[i]), 2));
        }
        Ok(DiscriminantGroup {
            invariant_factors: factors,
            generators,
            pairing,
            qform,
            gram: g,
            class_rows,
        })
    }

    /// Saturated sublattice of vectors orthogonal to `s`.
    pub fn orthogonal_complement(&self, s: &Sublattice) -> Result<Sublattice> {
        if s.ambient != *self {
            return Err(Error::NotContained);
        }
        let g = self.scaled_gram();
        let rows = mat_mul_z(&s.basis, &g);
        let basis = if rows.is_empty() {
            linalg::identity_z(self.rank())
        } else {
            kernel_z(&rows, self.rank())
        };
        Ok(Sublattice {
            ambient: self.clone(),
            basis,
        })
    }

    /// Block-diagonal sum. Basis labels get the part name as prefix.
    pub fn direct_sum(parts: &[GramLattice]) -> GramLattice {
        let n: usize = parts.iter().map(|p| p.rank()).sum();
        let mut gram = linalg::zero_mat(n, n);
        let mut labels = Vec::with_capacity(n);
        let mut off = 0;
        for (k, p) in parts.iter().enumerate() {
            let pname = p.name.clone().unwrap_or_else(|| format!("L{k}"));
            let dup = parts.iter().filter(|q| q.name == p.name).count() > 1;
            let prefix = if dup {
                let idx = parts[..k].iter().filter(|q| q.name == p.name).count() + 1;
                format!("{pname}_{idx}")
            } else {
                pname
            };
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    gram[off + i][off + j] = p.gram[i][j].clone();
                }
                labels.push(format!("{prefix}.{}", p.labels[i]));
            }
            off += p.rank();
        }
        let name = parts
            .iter()
            .map(|p| p.name.clone().unwrap_or_else(|| "?".into()))
            .collect::<Vec<_>>()
            .join("+");
        GramLattice::new(gram)
            .expect("block sum of symmetric matrices is symmetric")
            .with_name(name)
            .with_labels(labels)
    }

    /// JSON form `{rank, scale, entries}` with entries of `scale · gram`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.scaled_gram().iter().flatten().map(int_json).collect();
        json!({
            "rank": self.rank(),
            "scale": int_json(&self.scale),
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidParameter(format!("gram json: {m}"));
        let rank = v["rank"].as_u64().ok_or_else(|| bad("rank"))? as usize;
        let scale = v["scale"].as_i64().ok_or_else(|| bad("scale"))?;
        if scale <= 0 {
            return Err(bad("scale must be positive"));
        }
        let entries = v["entries"].as_array().ok_or_else(|| bad("entries"))?;
        if entries.len() != rank * rank {
            return Err(Error::DimensionMismatch {
                expected: rank * rank,
                got: entries.len(),
            });
        }
        let mut g = linalg::zero_mat(rank, rank);
        for (k, e) in entries.iter().enumerate() {
            let x = e.as_i64().ok_or_else(|| bad("entry"))?;
            g[k / rank][k % rank] = Rat::new(int(x), int(scale));
        }
        GramLattice::new(g)
    }
}

fn sym_swap(a: &mut QMat, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Representative of `x mod m` in `[0, m)`.
pub fn frac_mod(x: &Rat, m: i64) -> Rat {
    let m = Rat::from_integer(int(m));
    let q = (x / &m).floor();
    x - q * m
}

pub(crate) fn int_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// `L*/L` with generators and fractional forms.
#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<Int>,
    /// Lifts in `L ⊗ ℚ`, in lattice coordinates.
    pub generators: Vec<Vec<Rat>>,
    /// `gᵢ·gⱼ mod 1`.
    pub pairing: QMat,
    /// `gᵢ·gᵢ mod 2`.
    pub qform: Vec<Rat>,
    gram: ZMat,
    class_rows: ZMat,
}

impl DiscriminantGroup {
    pub fn order(&self) -> Int {
        self.invariant_factors.iter().fold(Int::one(), |a, b| a * b)
    }

    pub fn exponent(&self) -> Int {
        self.invariant_factors
            .iter()
            .fold(Int::one(), |a, b| a.lcm(b))
    }

    /// Coordinates of the class of a dual vector `y` with respect to the generators.
    pub fn class_of(&self, y: &[Rat]) -> Result<Vec<Int>> {
        let z: Vec<Rat> = self
            .gram
            .iter()
            .map(|r| {
                r.iter()
                    .zip(y)
                    .fold(Rat::zero(), |a, (g, x)| a + rat_int(g) * x)
            })
            .collect();
        let z = linalg::to_int_vec(&z).ok_or(Error::NotContained)?;
        Ok(self
            .class_rows
            .iter()
            .zip(&self.invariant_factors)
            .map(|(row, d)| {
                let c = row.iter().zip(&z).fold(Int::zero(), |a, (u, x)| a + u * x);
                c.mod_floor(d)
            })
            .collect())
    }
}

/// A sublattice given by an integral basis in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    pub ambient: GramLattice,
    pub basis: ZMat,
}

impl Sublattice {
    pub fn new(ambient: &GramLattice, basis: ZMat) -> Result<Self> {
        for b in &basis {
            if b.len() != ambient.rank() {
                return Err(Error::DimensionMismatch {
                    expected: ambient.rank(),
                    got: b.len(),
                });
            }
        }
        if !linalg::independent(&basis) {
            return Err(Error::LinearlyDependent);
        }
        Ok(Sublattice {
            ambient: ambient.clone(),
            basis,
        })
    }

    /// The sublattice generated by arbitrary integral vectors.
    pub fn from_generators(ambient: &GramLattice, gens: &[Vec<Int>]) -> Result<Self> {
        let n = ambient.rank();
        if gens.is_empty() {
            return Ok(Sublattice {
                ambient: ambient.clone(),
                basis: Vec::new(),
            });
        }
        for g in gens {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
        }
        Ok(Sublattice {
            ambient: ambient.clone(),
            basis: linalg::span_basis(gens, n),
        })
    }

    pub fn whole(ambient: &GramLattice) -> Self {
        Sublattice {
            ambient: ambient.clone(),
            basis: linalg::identity_z(ambient.rank()),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Gram matrix of the basis, as a lattice.
    pub fn gram_lattice(&self) -> GramLattice {
        let rows: Vec<Vec<Rat>> = self.basis.iter().map(|b| to_rat_vec(b)).collect();
        GramLattice::new(linalg::gram_of(self.ambient.gram(), &rows)).expect("symmetric")
    }

    pub fn saturate(&self) -> Sublattice {
        Sublattice {
            ambient: self.ambient.clone(),
            basis: linalg::saturate_rows(&self.basis, self.ambient.rank()),
        }
    }

    pub fn is_saturated(&self) -> bool {
        let sat = self.saturate();
        index_in(&sat.basis, &self.basis)
            .map(|i| i.is_one())
            .unwrap_or(false)
    }

    /// Coordinates of an ambient vector with respect to this basis, if in the rational span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let rows: Vec<Vec<Rat>> = self.basis.iter().map(|b| to_rat_vec(b)).collect();
        linalg::coordinates_in(&rows, v)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v)
            .map(|c| c.iter().all(|x| x.is_integer()))
            .unwrap_or(false)
    }

    /// The nondegenerate lattice `S / rad(S)` together with lifts of its basis.
    pub fn radical_quotient(&self) -> RadicalQuotient {
        let k = self.rank();
        let g = self.gram_lattice();
        let m = g.scaled_gram();
        let (kernel, comp) = linalg::kernel_split(&m, k);
        let r = comp.len();
        let vt: ZMat = comp.into_iter().chain(kernel).collect();
        let v = transpose(&vt);
        let lift = |coeffs: &Vec<Int>| -> Vec<Int> {
            let n = self.ambient.rank();
            let mut out = vec![Int::zero(); n];
            for (c, b) in coeffs.iter().zip(&self.basis) {
                if c.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(b) {
                    *o += c * x;
                }
            }
            out
        };
        let lifts: ZMat = vt[..r].iter().map(lift).collect();
        let radical: ZMat = vt[r..].iter().map(lift).collect();
        let rows: Vec<Vec<Rat>> = vt[..r].iter().map(|c| to_rat_vec(c)).collect();
        let mut lattice = GramLattice::new(linalg::gram_of(g.gram(), &rows)).expect("symmetric");
        if let Some(n) = self.ambient.name() {
            lattice = lattice.with_name(format!("quotient of {n}"));
        }
        let vinv = inverse_q(&linalg::to_rat_mat(&v)).expect("unimodular");
        RadicalQuotient {
            lattice,
            lifts,
            radical,
            sub: self.clone(),
            vinv,
            rank: r,
        }
    }
}

/// `[A : B]` for lattices given by bases spanning the same rational space.
pub fn index_in(a: &ZMat, b: &ZMat) -> Option<Int> {
    if a.len() != b.len() {
        return None;
    }
    let arows: Vec<Vec<Rat>> = a.iter().map(|r| to_rat_vec(r)).collect();
    let mut coords = Vec::new();
    for v in b {
        coords.push(linalg::coordinates_in(&arows, &to_rat_vec(v))?);
    }
    let d = linalg::det_q(&coords);
    if d.is_zero() || !d.is_integer() {
        return None;
    }
    Some(d.to_integer().abs())
}

/// `S/rad(S)` with a section back to ambient coordinates.
#[derive(Debug, Clone)]
pub struct RadicalQuotient {
    pub lattice: GramLattice,
    /// Ambient coordinates of lifts of the quotient basis.
    pub lifts: ZMat,
    /// Ambient coordinates of a basis of the radical.
    pub radical: ZMat,
    sub: Sublattice,
    vinv: QMat,
    rank: usize,
}

impl RadicalQuotient {
    /// Ambient vector of the chosen lift of a quotient vector.
    pub fn lift(&self, q: &[Rat]) -> Vec<Rat> {
        let n = self.sub.ambient.rank();
        let mut out = vec![Rat::zero(); n];
        for (c, l) in q.iter().zip(&self.lifts) {
            for (o, x) in out.iter_mut().zip(l) {
                *o += c * rat_int(x);
            }
        }
        out
    }

    /// Image of an element of `S` (ambient coordinates) in quotient coordinates.
    pub fn project(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let t = self.sub.coordinates(v)?;
        let y = linalg::mat_vec_q(&self.vinv, &t);
        Some(y[..self.rank].to_vec())
    }
}

/// Gram matrix of a standard root lattice or of `U`/`I`.
pub fn make_standard(name: &str, n: Option<usize>) -> Result<GramLattice> {
    let (base, n) = split_label(name, n)?;
    let g: Vec<Vec<i64>> = match base.as_str() {
        "A" => {
            require_rank(n, 1, &base)?;
            chain(n)
        }
        "D" => {
            require_rank(n, 2, &base)?;
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                g[i][i] = 2;
            }
            if n >= 3 {
                for i in 0..n - 2 {
                    g[i][i + 1] = -1;
                    g[i + 1][i] = -1;
                }
                g[n - 3][n - 1] = -1;
                g[n - 1][n - 3] = -1;
            }
            g
        }
        "E" => {
            if !(6..=8).contains(&n) {
                return Err(Error::UnknownLabel(format!("E{n}")));
            }
            let mut g = vec![vec![0i64; n]; n];
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 2;
            }
            // chain 1-3-4-5-..-n, node 2 attached to node 4 (1-based)
            let mut link = |a: usize, b: usize| {
                g[a - 1][b - 1] = -1;
                g[b - 1][a - 1] = -1;
            };
            link(1, 3);
            link(2, 4);
            for k in 3..n {
                link(k, k + 1);
            }
            g
        }
        "U" => vec![vec![0, 1], vec![1, 0]],
        "I" => vec![vec![1]],
        "G2root" => chain(2),
        _ => return Err(Error::UnknownLabel(name.to_string())),
    };
    let label = match base.as_str() {
        "U" | "I" => base.clone(),
        "G2root" => "A2".into(),
        _ => format!("{base}{n}"),
    };
    let labels = match base.as_str() {
        "U" => vec!["e".into(), "f".into()],
        "I" => vec!["eps".into()],
        _ => (1..=g.len()).map(|i| format!("a{i}")).collect(),
    };
    Ok(GramLattice::from_integer_gram(&g)?
        .with_name(label)
        .with_labels(labels))
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = 2;
        if i + 1 < n {
            g[i][i + 1] = -1;
            g[i + 1][i] = -1;
        }
    }
    g
}

fn require_rank(n: usize, min: usize, base: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!(
            "{base}{n}: rank must be at least {min}"
        )));
    }
    if n > spec::MAX_RANK {
        return Err(Error::InvalidParameter(format!(
            "{base}{n}: rank too large"
        )));
    }
    Ok(())
}

fn split_label(name: &str, n: Option<usize>) -> Result<(String, usize)> {
    if name == "G2root" || name == "U" || name == "I" {
        return Ok((name.to_string(), n.unwrap_or(0)));
    }
    let (head, tail) = name.split_at(name.len().min(1));
    if !matches!(head, "A" | "D" | "E") {
        return Err(Error::UnknownLabel(name.to_string()));
    }
    let k = if tail.is_empty() {
        n.ok_or_else(|| Error::InvalidParameter(format!("{name} needs a rank")))?
    } else {
        tail.parse::<usize>()
            .map_err(|_| Error::UnknownLabel(name.to_string()))?
    };
    if k == 0 {
        return Err(Error::InvalidParameter(format!("{name}: nonpositive rank")));
    }
    Ok((head.to_string(), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn standard_lattices() {
        let u = make_standard("U", None).unwrap();
        assert_eq!(u.scaled_gram(), vec![ints(&[0, 1]), ints(&[1, 0])]);
        let a2 = make_standard("A2", None).unwrap();
        assert_eq!(a2.scaled_gram(), vec![ints(&[2, -1]), ints(&[-1, 2])]);
        let e8 = make_standard("E", Some(8)).unwrap();
        assert_eq!(e8.det().abs(), rat(1, 1));
        assert_eq!(make_standard("E6", None).unwrap().det(), rat(3, 1));
        assert_eq!(make_standard("E7", None).unwrap().det(), rat(2, 1));
        assert_eq!(make_standard("D5", None).unwrap().det(), rat(4, 1));
        assert_eq!(make_standard("A11", None).unwrap().det(), rat(12, 1));
        assert!(make_standard("X3", None).is_err());
        assert!(make_standard("A0", None).is_err());
        assert!(make_standard("E9", None).is_err());
    }

    #[test]
    fn sums_and_signatures() {
        let e8 = make_standard("E8", None).unwrap();
        let u = make_standard("U", None).unwrap();
        let i = make_standard("I", None).unwrap();
        let big = GramLattice::direct_sum(&[
            e8.clone(),
            e8.clone(),
            u.clone(),
            u.clone(),
            i.clone(),
            i.clone(),
            i,
        ]);
        assert_eq!(big.rank(), 23);
        assert_eq!(big.signature(), (21, 2, 0));
        assert_eq!(u.signature(), (1, 1, 0));
        assert_eq!(big.labels()[0], "E8_1.a1");
        assert_eq!(big.labels()[8], "E8_2.a1");
        let empty = GramLattice::direct_sum(&[]);
        assert_eq!(empty.rank(), 0);
        let lam1 =
            GramLattice::direct_sum(&[e8.clone(), e8, make_standard("A2", None).unwrap(), u]);
        assert_eq!(lam1.signature(), (19, 1, 0));
    }

    #[test]
    fn signature_with_zero_diagonal_and_radical() {
        let l =
            GramLattice::from_integer_gram(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(l.signature(), (1, 1, 1));
    }

    #[test]
    fn rescale_behaviour() {
        let a2 = make_standard("A2", None).unwrap();
        let s = a2.rescale(&rat(1, 3)).unwrap();
        assert_eq!(s.gram()[0][0], rat(2, 3));
        assert_eq!(s.scale(), &int(3));
        assert_eq!(a2.rescale(&rat(1, 1)).unwrap(), a2);
        let u3 = make_standard("U", None)
            .unwrap()
            .rescale(&rat(3, 1))
            .unwrap();
        assert_eq!(u3.scaled_gram(), vec![ints(&[0, 3]), ints(&[3, 0])]);
        assert!(a2.rescale(&rat(0, 1)).is_err());
        assert!(s.is_even().is_err());
    }

    #[test]
    fn discriminant_groups() {
        let e8 = make_standard("E8", None).unwrap();
        assert!(e8
            .discriminant_group()
            .unwrap()
            .invariant_factors
            .is_empty());
        let e6 = make_standard("E6", None).unwrap();
        let three = GramLattice::direct_sum(&[e6.clone(), e6.clone(), e6]);
        let d = three.discriminant_group().unwrap();
        assert_eq!(d.invariant_factors, ints(&[3, 3, 3]));
        let a2 = make_standard("A2", None).unwrap();
        let d = a2.discriminant_group().unwrap();
        assert_eq!(d.invariant_factors, ints(&[3]));
        assert_eq!(d.qform[0], rat(2, 3));
        let g = d.generators[0].clone();
        assert_eq!(d.class_of(&g).unwrap(), ints(&[1]));
        let u = make_standard("U", None).unwrap();
        let deg =
            GramLattice::direct_sum(&[u, GramLattice::from_integer_gram(&[vec![0]]).unwrap()]);
        assert_eq!(deg.discriminant_group().unwrap_err(), Error::Degenerate);
    }

    #[test]
    fn complement_saturation_quotient() {
        let a2 = make_standard("A2", None).unwrap();
        let u = make_standard("U", None).unwrap();
        let l = GramLattice::direct_sum(&[a2, u]);
        // e in U is isotropic; e^perp / e should be A2
        let e = Sublattice::new(&l, vec![ints(&[0, 0, 1, 0])]).unwrap();
        let perp = l.orthogonal_complement(&e).unwrap();
        assert_eq!(perp.rank(), 3);
        let q = perp.radical_quotient();
        assert_eq!(q.lattice.rank(), 2);
        assert_eq!(q.lattice.det(), rat(3, 1));
        assert!(q.lattice.is_positive_definite());
        let whole = Sublattice::whole(&l);
        assert_eq!(l.orthogonal_complement(&whole).unwrap().rank(), 0);
        let three = Sublattice::new(&l, vec![ints(&[3, 0, 0, 0])]).unwrap();
        assert!(!three.is_saturated());
        let sat = three.saturate();
        assert!(sat.is_saturated());
        assert_eq!(
            sat.basis[0].iter().map(|x| x.abs()).collect::<Vec<_>>(),
            ints(&[1, 0, 0, 0])
        );
        // projection of a lift gives back the quotient vector
        let x = vec![rat(1, 1), rat(-2, 1)];
        assert_eq!(q.project(&q.lift(&x)).unwrap(), x);
    }

    #[test]
    fn divisors() {
        let a2 = make_standard("A2", None).unwrap();
        assert_eq!(a2.divisor(&ints(&[1, 0])).unwrap(), int(1));
        assert_eq!(a2.divisor(&ints(&[1, 2])).unwrap(), int(3));
        assert_eq!(a2.divisor(&ints(&[2, 4])).unwrap(), int(6));
        assert_eq!(a2.divisor(&ints(&[0, 0])).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn generators_to_basis() {
        let a2 = make_standard("A2", None).unwrap();
        let s = Sublattice::from_generators(&a2, &[ints(&[2, 0]), ints(&[0, 2]), ints(&[2, 2])])
            .unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(
            index_in(&Sublattice::whole(&a2).basis, &s.basis).unwrap(),
            int(4)
        );
    }

    #[test]
    fn json_roundtrip() {
        let a = make_standard("A2", None)
            .unwrap()
            .rescale(&rat(1, 3))
            .unwrap();
        let j = a.to_json();
        assert_eq!(j["scale"], 3);
        let b = GramLattice::from_json(&j).unwrap();
        assert_eq!(a.gram(), b.gram());
    }
}
