//! Truncated intersection rings on the blown-up secant variety and on its
//! exceptional conic bundle.
//!
//! Both rings are generated by a hyperplane class `u` with `u³ = 0` and one
//! more class `g` subject to a monic relation. Classes are kept in normal form,
//! so equality of classes is equality of coefficient maps.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Int;

/// The two rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    /// `ℤ[u, y] / (u³, y³ − 3uy² + 6u²y)`.
    YTilde,
    /// `ℤ[u, x] / (u³, x² − ux + u²)`.
    C,
}

/// A monomial `u^i g^j` as `((i, j), coefficient)`.
type Term = ((u32, u32), i64);

impl Ring {
    pub fn generator(self) -> &'static str {
        match self {
            Ring::YTilde => "y",
            Ring::C => "x",
        }
    }

    /// `k` and the right side of `g^k = Σ c·u^i g^j` with `j < k`.
    fn relation(self) -> (u32, &'static [Term]) {
        match self {
            Ring::YTilde => (3, &[((1, 2), 3), ((2, 1), -6)]),
            Ring::C => (2, &[((1, 1), 1), ((2, 0), -1)]),
        }
    }

    /// Rank of the normal-form basis in each algebraic degree.
    pub fn graded_dims(self) -> Vec<usize> {
        let (k, _) = self.relation();
        let top = 2 + k - 1;
        (0..=top)
            .map(|d| (0..=2u32).filter(|&i| i <= d && d - i < k).count())
            .collect()
    }
}

/// An element of one of the rings, as a map `(i, j) ↦ coefficient of u^i g^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyClass {
    pub ring: Ring,
    pub coeffs: BTreeMap<(u32, u32), Int>,
}

impl PolyClass {
    pub fn zero(ring: Ring) -> Self {
        PolyClass {
            ring,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(ring: Ring, c: i64, i: u32, j: u32) -> Self {
        let mut p = PolyClass::zero(ring);
        p.add_term(i, j, Int::from(c));
        p.reduce()
    }

    pub fn one(ring: Ring) -> Self {
        Self::monomial(ring, 1, 0, 0)
    }

    pub fn u(ring: Ring) -> Self {
        Self::monomial(ring, 1, 1, 0)
    }

    /// The second generator: `y` or `x`.
    pub fn g(ring: Ring) -> Self {
        Self::monomial(ring, 1, 0, 1)
    }

    /// Builds a class from `(coefficient, u-power, g-power)` triples.
    pub fn from_terms(ring: Ring, terms: &[(i64, u32, u32)]) -> Self {
        let mut p = PolyClass::zero(ring);
        for &(c, i, j) in terms {
            p.add_term(i, j, Int::from(c));
        }
        p.reduce()
    }

    fn add_term(&mut self, i: u32, j: u32, c: Int) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((i, j)).or_insert_with(Int::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Int {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Int::zero)
    }

    /// Algebraic degree if homogeneous (`None` for zero or mixed classes).
    pub fn degree(&self) -> Option<u32> {
        let mut ds = self.coeffs.keys().map(|(i, j)| i + j);
        let d = ds.next()?;
        ds.all(|e| e == d).then_some(d)
    }

    /// Normal form: `u`-degree at most 2 and `g`-degree below the relation degree.
    pub fn reduce(&self) -> PolyClass {
        let (k, rel) = self.ring.relation();
        let mut work = self.coeffs.clone();
        let mut out = PolyClass::zero(self.ring);
        // rewriting only lowers the g-degree, so take the highest one first
        while let Some(((i, j), c)) = work
            .iter()
            .max_by_key(|((i, j), _)| (*j, *i))
            .map(|(m, c)| (*m, c.clone()))
        {
            work.remove(&(i, j));
            if i > 2 || c.is_zero() {
                continue;
            }
            if j < k {
                out.add_term(i, j, c);
                continue;
            }
            for &((a, b), r) in rel {
                let key = (i + a, j - k + b);
                let e = work.entry(key).or_insert_with(Int::zero);
                *e += &c * Int::from(r);
                if e.is_zero() {
                    work.remove(&key);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Int) -> PolyClass {
        let mut p = PolyClass::zero(self.ring);
        for (&(i, j), x) in &self.coeffs {
            p.add_term(i, j, x * c);
        }
        p
    }

    pub fn pow(&self, n: u32) -> PolyClass {
        (0..n).fold(PolyClass::one(self.ring), |a, _| &a * self)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": format!("{:?}", self.ring),
            "class": self.to_string(),
            "terms": self.coeffs.iter().map(|((i, j), c)| json!([c.to_string(), i, j])).collect::<Vec<_>>(),
        })
    }
}

fn same_ring(a: &PolyClass, b: &PolyClass) {
    assert_eq!(a.ring, b.ring, "classes from different rings");
}

impl Add for &PolyClass {
    type Output = PolyClass;
    fn add(self, o: &PolyClass) -> PolyClass {
        same_ring(self, o);
        let mut p = self.clone();
        for (&(i, j), c) in &o.coeffs {
            p.add_term(i, j, c.clone());
        }
        p
    }
}

impl Sub for &PolyClass {
    type Output = PolyClass;
    fn sub(self, o: &PolyClass) -> PolyClass {
        self + &-o
    }
}

impl Neg for &PolyClass {
    type Output = PolyClass;
    fn neg(self) -> PolyClass {
        self.scale(&-Int::one())
    }
}

impl Mul for &PolyClass {
    type Output = PolyClass;
    fn mul(self, o: &PolyClass) -> PolyClass {
        same_ring(self, o);
        let mut p = PolyClass::zero(self.ring);
        for (&(i, j), a) in &self.coeffs {
            for (&(k, l), b) in &o.coeffs {
                p.add_term(i + k, j + l, a * b);
            }
        }
        p.reduce()
    }
}

impl fmt::Display for PolyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let g = self.ring.generator();
        let mono = |i: u32, j: u32| -> String {
            let part = |s: &str, e: u32| match e {
                0 => String::new(),
                1 => s.to_string(),
                _ => format!("{s}^{e}"),
            };
            format!("{}{}", part("u", i), part(g, j))
        };
        // by degree, then by decreasing g-power
        let mut terms: Vec<(&(u32, u32), &Int)> = self.coeffs.iter().collect();
        terms.sort_by_key(|((i, j), _)| (i + j, std::cmp::Reverse(*j)));
        for (n, ((i, j), c)) in terms.into_iter().enumerate() {
            let m = mono(*i, *j);
            let a = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (n, sign) {
                (0, "+") => {}
                (0, _) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            if m.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&m)?;
            } else {
                write!(f, "{a}{m}")?;
            }
        }
        Ok(())
    }
}

/// Degree of `u²y²`, the orientation class of the four-dimensional ring.
pub const TOP_DEGREE: u32 = 4;

/// `∫ a·b`: the coefficient of `u²y²` in the product.
pub fn intersection_number(a: &PolyClass, b: &PolyClass) -> Result<Int> {
    if a.ring != Ring::YTilde || b.ring != Ring::YTilde {
        return Err(Error::InvalidParameter(
            "intersection numbers live in the ring of Ỹ".into(),
        ));
    }
    let p = &(a.reduce()) * &(b.reduce());
    if !p.is_zero() && p.degree() != Some(TOP_DEGREE) {
        return Err(Error::InvalidParameter(format!(
            "product has degree other than {TOP_DEGREE}"
        )));
    }
    match (a.degree(), b.degree()) {
        (Some(x), Some(y)) if x + y != TOP_DEGREE => Err(Error::InvalidParameter(format!(
            "degrees {x} + {y} do not add up to {TOP_DEGREE}"
        ))),
        _ => Ok(p.coefficient(2, 2)),
    }
}

/// `(1 + u)^(-n)` truncated at `u³`.
pub fn chern_inverse(ring: Ring, n: u32) -> PolyClass {
    // (-1)^k binom(n+k-1, k)
    let c1 = -(n as i64);
    let c2 = (n as i64) * (n as i64 + 1) / 2;
    PolyClass::from_terms(ring, &[(1, 0, 0), (c1, 1, 0), (c2, 2, 0)])
}

/// `a = y² − 2uy + 4u²`.
pub fn class_a() -> PolyClass {
    PolyClass::from_terms(Ring::YTilde, &[(1, 0, 2), (-2, 1, 1), (4, 2, 0)])
}

/// `h = y² − 3uy + 6u²`, the class with `2h = 3a − y²`.
pub fn class_h() -> PolyClass {
    PolyClass::from_terms(Ring::YTilde, &[(1, 0, 2), (-3, 1, 1), (6, 2, 0)])
}

/// The intersection numbers of the secant case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecantTable {
    pub y4: Int,
    pub a_y2: Int,
    pub a2: Int,
    pub h_y2: Int,
    pub h2: Int,
    /// `3a − y² − 2h`, zero when the identity holds.
    pub identity_defect: PolyClass,
    /// `uy³ − 3u²y²`.
    pub uy3_defect: PolyClass,
}

impl SecantTable {
    pub fn holds(&self) -> bool {
        self.y4 == Int::from(3)
            && self.a_y2.is_one()
            && self.a2 == Int::from(3)
            && self.h_y2.is_zero()
            && self.h2 == Int::from(6)
            && self.identity_defect.is_zero()
            && self.uy3_defect.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "y^4": self.y4.to_string(),
            "a.y^2": self.a_y2.to_string(),
            "a^2": self.a2.to_string(),
            "h.y^2": self.h_y2.to_string(),
            "h^2": self.h2.to_string(),
            "a": class_a().to_string(),
            "h": class_h().to_string(),
            "3a - y^2 - 2h": self.identity_defect.to_string(),
            "uy^3 - 3u^2y^2": self.uy3_defect.to_string(),
            "note": "h is read as y^2 - 3uy + 6u^2, the unique class with 2h = 3a - y^2",
            "holds": self.holds(),
        })
    }
}

/// Computes the table; errors if any of the expected values fails.
pub fn secant_table() -> Result<SecantTable> {
    let r = Ring::YTilde;
    let y2 = PolyClass::g(r).pow(2);
    let (a, h) = (class_a(), class_h());
    let u = PolyClass::u(r);
    let t = SecantTable {
        y4: intersection_number(&y2, &y2)?,
        a_y2: intersection_number(&a, &y2)?,
        a2: intersection_number(&a, &a)?,
        h_y2: intersection_number(&h, &y2)?,
        h2: intersection_number(&h, &h)?,
        identity_defect: &(&a.scale(&Int::from(3)) - &y2) - &h.scale(&Int::from(2)),
        uy3_defect: &(&u * &PolyClass::g(r).pow(3)) - &PolyClass::monomial(r, 3, 2, 2),
    };
    if !t.holds() {
        return Err(Error::Verification(format!(
            "secant table: {}",
            t.to_json()
        )));
    }
    Ok(t)
}

/// The ring map `u ↦ u, y ↦ 2x`.
pub fn restrict(c: &PolyClass) -> Result<PolyClass> {
    if c.ring != Ring::YTilde {
        return Err(Error::InvalidParameter(
            "restriction starts from the ring of Ỹ".into(),
        ));
    }
    let mut p = PolyClass::zero(Ring::C);
    for (&(i, j), a) in &c.coeffs {
        p.add_term(i, j, a << j as usize);
    }
    Ok(p.reduce())
}

/// Whether the relation of `Ỹ` (and `u³`) map to zero, so the map is well defined.
pub fn restriction_check() -> bool {
    let rel = PolyClass {
        ring: Ring::YTilde,
        coeffs: [((0, 3), 1), ((1, 2), -3), ((2, 1), 6)]
            .iter()
            .map(|&(m, c)| (m, Int::from(c)))
            .collect(),
    };
    let u3 = PolyClass {
        ring: Ring::YTilde,
        coeffs: [((3, 0), Int::one())].into_iter().collect(),
    };
    [rel, u3]
        .iter()
        .all(|c| restrict(c).is_ok_and(|r| r.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn y(n: u32) -> PolyClass {
        PolyClass::g(Ring::YTilde).pow(n)
    }

    #[test]
    fn normal_forms() {
        let r = Ring::YTilde;
        assert_eq!(y(3), PolyClass::from_terms(r, &[(3, 1, 2), (-6, 2, 1)]));
        assert_eq!(y(4), PolyClass::monomial(r, 3, 2, 2));
        assert!(PolyClass::monomial(r, 5, 3, 1).is_zero());
        assert_eq!(y(3).to_string(), "3uy^2 - 6u^2y");
        let x2 = PolyClass::g(Ring::C).pow(2);
        assert_eq!(x2.to_string(), "ux - u^2");
    }

    #[test]
    fn pairings() {
        let a = class_a();
        assert_eq!(intersection_number(&a, &a).unwrap(), Int::from(3));
        assert_eq!(intersection_number(&a, &y(2)).unwrap(), Int::from(1));
        assert_eq!(intersection_number(&y(2), &y(2)).unwrap(), Int::from(3));
        assert!(intersection_number(&y(1), &y(2)).is_err());
        assert!(intersection_number(&PolyClass::g(Ring::C), &y(3)).is_err());
    }

    #[test]
    fn chern() {
        let r = Ring::YTilde;
        assert_eq!(chern_inverse(r, 1).to_string(), "1 - u + u^2");
        assert_eq!(chern_inverse(r, 3).to_string(), "1 - 3u + 6u^2");
        assert_eq!(chern_inverse(r, 0), PolyClass::one(r));
        // it really is an inverse
        for n in 0..6 {
            let p = PolyClass::from_terms(r, &[(1, 0, 0), (1, 1, 0)]).pow(n);
            assert_eq!(&p * &chern_inverse(r, n), PolyClass::one(r));
        }
    }

    #[test]
    fn table() {
        let t = secant_table().unwrap();
        assert_eq!(t.h2, Int::from(6));
        assert!(t.h_y2.is_zero());
        assert!(t.identity_defect.is_zero());
    }

    #[test]
    fn restriction() {
        assert!(restriction_check());
        // a lies in the kernel: 4x² − 4ux + 4u² = 4(x² − ux + u²)
        assert!(restrict(&class_a()).unwrap().is_zero());
        assert_eq!(restrict(&y(1)).unwrap().to_string(), "2x");
    }

    #[test]
    fn graded() {
        assert_eq!(Ring::YTilde.graded_dims(), vec![1, 2, 3, 2, 1]);
        assert_eq!(Ring::C.graded_dims(), vec![1, 2, 2, 1]);
    }

    fn class(r: Ring) -> impl Strategy<Value = PolyClass> {
        prop::collection::vec((-9i64..9, 0u32..3, 0u32..3), 0..5)
            .prop_map(move |t| PolyClass::from_terms(r, &t))
    }

    proptest! {
        #[test]
        fn ring_laws(a in class(Ring::YTilde), b in class(Ring::YTilde), c in class(Ring::YTilde)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(a.reduce(), a.clone());
        }

        #[test]
        fn restriction_is_multiplicative(a in class(Ring::YTilde), b in class(Ring::YTilde)) {
            let l = restrict(&(&a * &b)).unwrap();
            let r = &restrict(&a).unwrap() * &restrict(&b).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn pairing_symmetric(a in class(Ring::YTilde), b in class(Ring::YTilde)) {
            let a2: PolyClass = PolyClass { ring: a.ring, coeffs: a.coeffs.into_iter().filter(|((i, j), _)| i + j == 2).collect() };
            let b2: PolyClass = PolyClass { ring: b.ring, coeffs: b.coeffs.into_iter().filter(|((i, j), _)| i + j == 2).collect() };
            prop_assert_eq!(intersection_number(&a2, &b2).ok(), intersection_number(&b2, &a2).ok());
        }

        #[test]
        fn c_ring_laws(a in class(Ring::C), b in class(Ring::C), c in class(Ring::C)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(a.reduce(), a.clone());
        }
    }
}
