//! Crystallographic roots of a lattice.
//!
//! A root is normalized as `r = w / need(N)`, where `w` is the primitive integral
//! vector on its ray, `N = w·w`, and `need(N) = N / gcd(N, 2)`. The reflection in
//! `w` preserves `L` exactly when `w ∈ need(N)·L*`. On an even lattice with
//! discriminant `ℤ/3` this gives the two lengths 2 and 2/3.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::enumerate;
use crate::error::{Error, Result};
use crate::lattice::{int_json, GramLattice, Sublattice};
use crate::linalg::{self, gcd_all, int, rat_int, to_rat_vec, Int, Rat, ZMat};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    /// Coordinates in the ambient lattice basis.
    pub vector: Vec<Rat>,
    /// `vector · vector` in the ambient form.
    pub norm: Rat,
    /// The primitive integral vector on the same ray.
    pub primitive: Vec<Int>,
}

impl Root {
    /// Builds the root on the ray of a nonzero integral vector, if its reflection preserves `l`.
    pub fn from_ray(l: &GramLattice, v: &[Int]) -> Result<Root> {
        let g = gcd_all(v);
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        let w: Vec<Int> = v.iter().map(|x| x / &g).collect();
        let sl = integral_form(l);
        let n = sl.norm_z(&w).to_integer();
        if !n.is_positive() {
            return Err(Error::InvalidParameter(
                "root must have positive norm".into(),
            ));
        }
        let need = need(&n);
        let div = sl.divisor(&w)?;
        if !div.is_multiple_of(&need) {
            return Err(Error::Verification(
                "reflection does not preserve the lattice".into(),
            ));
        }
        let vector: Vec<Rat> = w
            .iter()
            .map(|x| Rat::new(x.clone(), need.clone()))
            .collect();
        let norm = l.norm(&vector);
        Ok(Root {
            vector,
            norm,
            primitive: w,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "primitive": self.primitive.iter().map(int_json).collect::<Vec<_>>(),
            "denominator": int_json(&self.denominator()),
            "norm": self.norm.to_string(),
        })
    }

    /// `d` with `vector = primitive / d`.
    pub fn denominator(&self) -> Int {
        let i = self
            .primitive
            .iter()
            .position(|x| !x.is_zero())
            .expect("nonzero root");
        (rat_int(&self.primitive[i]) / &self.vector[i]).to_integer()
    }
}

/// `N / gcd(N, 2)`.
pub fn need(n: &Int) -> Int {
    n / n.gcd(&int(2))
}

/// The lattice with the same basis and form scaled to be integral.
pub(crate) fn integral_form(l: &GramLattice) -> GramLattice {
    if l.is_integral() {
        l.clone()
    } else {
        l.rescale(&rat_int(l.scale())).expect("positive scale")
    }
}

/// Candidate values of `N = w·w` for the primitive vectors of roots, in the
/// integral normalization of `l`: the positive divisors of twice the exponent of
/// the discriminant group.
pub fn candidate_norms(l: &GramLattice) -> Result<Vec<Int>> {
    let sl = integral_form(l);
    let e = sl.discriminant_group()?.exponent();
    let two_e: Int = e * 2;
    let top = two_e
        .to_u64()
        .ok_or(Error::Overflow("discriminant exponent"))?;
    let even = sl.is_even()?;
    Ok((1..=top)
        .filter(|d| top % d == 0 && !(even && d % 2 == 1))
        .map(Int::from)
        .collect())
}

/// True iff the reflection in `v` maps every basis vector of `l` into `l`.
pub fn is_crystallographic(l: &GramLattice, v: &[Rat]) -> bool {
    let n = l.norm(v);
    if !n.is_positive() {
        return false;
    }
    (0..l.rank()).all(|i| {
        let mut e = vec![Rat::zero(); l.rank()];
        e[i] = Rat::one();
        l.contains(&l.reflect(v, &e))
    })
}

/// All roots of `l`, or of `l` lying in the rational span of `within`.
///
/// The searched part must be positive definite, except for isotropic binary
/// lattices which are solved by factoring the form.
pub fn roots_of(l: &GramLattice, within: Option<&Sublattice>) -> Result<Vec<Root>> {
    let sl = integral_form(l);
    let basis: ZMat = match within {
        Some(s) => {
            if s.ambient.gram() != l.gram() {
                return Err(Error::NotContained);
            }
            s.saturate().basis
        }
        None => linalg::identity_z(l.rank()),
    };
    let k = basis.len();
    let rows: Vec<Vec<Rat>> = basis.iter().map(|b| to_rat_vec(b)).collect();
    let sub = GramLattice::new(linalg::gram_of(sl.gram(), &rows))?;
    if !sub.is_positive_definite() {
        if within.is_none() && l.rank() == 2 && sub.signature() == (1, 1, 0) {
            return binary_roots(l);
        }
        return Err(Error::Unbounded(
            "root search needs a positive definite search space".into(),
        ));
    }
    let g = sl.scaled_gram();
    // G · B, columns are the products of basis vectors with ambient basis
    let gb: ZMat = (0..l.rank())
        .map(|i| {
            basis
                .iter()
                .map(|b| g[i].iter().zip(b).fold(Int::zero(), |a, (x, y)| a + x * y))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for n in candidate_norms(l)? {
        let nd = need(&n);
        // coordinates c with w = Σ c_j b_j ∈ need·L*
        let m = linalg::kernel_mod(&gb, k, &nd);
        let mrows: Vec<Vec<Rat>> = m.iter().map(|r| to_rat_vec(r)).collect();
        let mg = GramLattice::new(linalg::gram_of(sub.gram(), &mrows))?;
        for c in enumerate::enumerate_norm(&mg, &rat_int(&n))? {
            let coords: Vec<Int> = (0..k)
                .map(|j| {
                    c.iter()
                        .zip(&m)
                        .fold(Int::zero(), |a, (ci, row)| a + ci * &row[j])
                })
                .collect();
            if !gcd_all(&coords).is_one() {
                continue;
            }
            let w: Vec<Int> = (0..l.rank())
                .map(|i| {
                    coords
                        .iter()
                        .zip(&basis)
                        .fold(Int::zero(), |a, (cj, b)| a + cj * &b[i])
                })
                .collect();
            let vector: Vec<Rat> = w.iter().map(|x| Rat::new(x.clone(), nd.clone())).collect();
            let norm = l.norm(&vector);
            out.push(Root {
                vector,
                norm,
                primitive: w,
            });
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Sorts by decreasing norm, then lexicographically.
pub fn sort_roots(v: &mut [Root]) {
    v.sort_by(|a, b| b.norm.cmp(&a.norm).then_with(|| a.vector.cmp(&b.vector)));
}

/// Roots of an isotropic binary lattice, from the factorization of its form.
fn binary_roots(l: &GramLattice) -> Result<Vec<Root>> {
    let sl = integral_form(l);
    let g = sl.scaled_gram();
    let (a, b, c) = (g[0][0].clone(), g[0][1].clone(), g[1][1].clone());
    let disc: Int = &b * &b - &a * &c;
    let s = disc.sqrt();
    if &s * &s != disc || s.is_zero() {
        return Err(Error::Unbounded(
            "anisotropic indefinite binary form".into(),
        ));
    }
    let mut out = Vec::new();
    for n in candidate_norms(l)? {
        let nd = need(&n);
        for (x, y) in binary_solutions(&a, &b, &c, &s, &n) {
            let w = vec![x, y];
            if !gcd_all(&w).is_one() {
                continue;
            }
            if !sl.divisor(&w)?.is_multiple_of(&nd) {
                continue;
            }
            let vector: Vec<Rat> = w.iter().map(|x| Rat::new(x.clone(), nd.clone())).collect();
            let norm = l.norm(&vector);
            out.push(Root {
                vector,
                norm,
                primitive: w,
            });
        }
    }
    sort_roots(&mut out);
    out.dedup();
    Ok(out)
}

/// Integer solutions of `a x² + 2b xy + c y² = n` when `b² − ac = s²`, `s > 0`.
fn binary_solutions(a: &Int, b: &Int, c: &Int, s: &Int, n: &Int) -> Vec<(Int, Int)> {
    let mut out = Vec::new();
    if a.is_zero() {
        // y (2b x + c y) = n
        for d in signed_divisors(n) {
            let y = d.clone();
            let rest = n / &d;
            let num = rest - c * &y;
            let den: Int = b * 2;
            if num.is_multiple_of(&den) {
                out.push((num / den, y));
            }
        }
    } else {
        // a·n = (a x + (b+s) y)(a x + (b−s) y)
        let an: Int = a * n;
        for d1 in signed_divisors(&an) {
            let d2 = &an / &d1;
            let dy: Int = &d1 - &d2;
            let two_s: Int = s * 2;
            if !dy.is_multiple_of(&two_s) {
                continue;
            }
            let y = dy / two_s;
            let num: Int = &d1 - (b + s) * &y;
            if num.is_multiple_of(a) {
                out.push((num / a, y));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn signed_divisors(n: &Int) -> Vec<Int> {
    let m = n.abs().to_u64().expect("small norm");
    let mut out = Vec::new();
    for d in 1..=m {
        if d * d > m {
            break;
        }
        if m.is_multiple_of(d) {
            for e in [d, m / d] {
                out.push(Int::from(e));
                out.push(-Int::from(e));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// JSON `{scale, vectors}` for a list of rational vectors with a common denominator.
pub fn vectors_json(vs: &[Vec<Rat>]) -> Value {
    let den = linalg::lcm_denominators(vs.iter().flatten());
    let d = rat_int(&den);
    let vectors: Vec<Value> = vs
        .iter()
        .map(|v| Value::Array(v.iter().map(|x| int_json(&(x * &d).to_integer())).collect()))
        .collect();
    json!({ "scale": int_json(&den), "vectors": vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_standard;
    use crate::linalg::rat;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn e8_and_a2() {
        let e8 = make_standard("E8", None).unwrap();
        let r = roots_of(&e8, None).unwrap();
        assert_eq!(r.len(), 240);
        assert!(r.iter().all(|x| x.norm == rat(2, 1)));
        let a2 = make_standard("A2", None).unwrap();
        let r = roots_of(&a2, None).unwrap();
        // long roots of norm 2 and short ones of norm 2/3 (vectors of A2*)
        assert_eq!(r.iter().filter(|x| x.norm == rat(2, 1)).count(), 6);
        assert_eq!(r.iter().filter(|x| x.norm == rat(2, 3)).count(), 6);
        for x in &r {
            assert!(is_crystallographic(&a2, &x.vector));
        }
    }

    #[test]
    fn hyperbolic_plane() {
        let u = make_standard("U", None).unwrap();
        let r = roots_of(&u, None).unwrap();
        let vs: Vec<Vec<Rat>> = r.iter().map(|x| x.vector.clone()).collect();
        assert_eq!(
            vs,
            vec![vec![rat(-1, 1), rat(-1, 1)], vec![rat(1, 1), rat(1, 1)]]
        );
        assert_eq!(r[0].norm, rat(2, 1));
    }

    #[test]
    fn indefinite_needs_restriction() {
        let l = crate::lattice::spec::parse_spec("A2+U").unwrap();
        assert_eq!(roots_of(&l, None).unwrap_err().code(), "unbounded_search");
        let a2 = Sublattice::new(&l, vec![ints(&[1, 0, 0, 0]), ints(&[0, 1, 0, 0])]).unwrap();
        assert_eq!(roots_of(&l, Some(&a2)).unwrap().len(), 12);
    }

    #[test]
    fn odd_lattice_roots() {
        // Z^3: roots ±e_i (norm 1) and ±e_i±e_j (norm 2), a B3 system
        let l = crate::lattice::spec::parse_spec("3I").unwrap();
        let r = roots_of(&l, None).unwrap();
        assert_eq!(r.len(), 18);
    }

    #[test]
    fn ray_constructor() {
        let a2 = make_standard("A2", None).unwrap();
        let r = Root::from_ray(&a2, &ints(&[3, 6])).unwrap();
        assert_eq!(r.norm, rat(2, 3));
        assert_eq!(r.denominator(), int(3));
        assert!(Root::from_ray(&a2, &ints(&[3, 1])).is_err());
        assert!(Root::from_ray(&a2, &ints(&[0, 0])).is_err());
    }

    #[test]
    fn binary_solver_matches_box() {
        let g = GramLattice::from_integer_gram(&[vec![2, 3], vec![3, 4]]).unwrap();
        // 9 - 8 = 1: isotropic
        let (a, b, c) = (int(2), int(3), int(4));
        for n in 1..=12 {
            let sols = binary_solutions(&a, &b, &c, &int(1), &int(n));
            let mut brute = Vec::new();
            for x in -40i64..=40 {
                for y in -40i64..=40 {
                    if 2 * x * x + 6 * x * y + 4 * y * y == n {
                        brute.push((int(x), int(y)));
                    }
                }
            }
            brute.sort();
            assert_eq!(sols, brute, "n = {n}");
        }
        assert!(roots_of(&g, None).is_ok());
    }
}
