//! Root systems of positive definite lattices: simple systems and Cartan types.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::dynkin::{build_diagram, format_multiset, Kind, TypeLabel};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::linalg::{self, Rat};
use crate::roots::{roots_of, Root};

/// The multiset of irreducible components of a root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystemType {
    /// Sorted component labels.
    pub components: Vec<TypeLabel>,
    /// Number of roots of each norm, largest norm first.
    pub counts: Vec<(Rat, usize)>,
}

impl RootSystemType {
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn root_count(&self) -> usize {
        self.counts.iter().map(|c| c.1).sum()
    }

    /// Roots of the largest norm.
    pub fn long_count(&self) -> usize {
        self.counts.first().map(|c| c.1).unwrap_or(0)
    }

    /// The components other than `G2` and short `A1`s.
    pub fn stripped(&self) -> Vec<TypeLabel> {
        self.components
            .iter()
            .filter(|c| c.family != 'G' && !c.short)
            .cloned()
            .collect()
    }

    pub fn stripped_label(&self) -> String {
        format_multiset(&self.stripped())
    }

    /// Sorted list of `{label, rank, count}`.
    pub fn to_json(&self) -> Value {
        let mut groups: Vec<(TypeLabel, usize)> = Vec::new();
        for c in &self.components {
            match groups.iter_mut().find(|g| g.0 == *c) {
                Some(g) => g.1 += 1,
                None => groups.push((c.clone(), 1)),
            }
        }
        groups.sort_by_key(|g| g.0.to_string());
        Value::Array(
            groups
                .iter()
                .map(|(l, n)| json!({ "label": l.to_string(), "rank": l.rank, "count": n }))
                .collect(),
        )
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_multiset(&self.components))
    }
}

fn lex_positive(v: &[Rat]) -> bool {
    v.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_positive())
}

/// A base of the root system: the positive roots (lexicographic chamber) that
/// are not sums of two positive roots. Verified before returning.
pub fn simple_system(l: &GramLattice, roots: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let mut pos: Vec<Vec<Rat>> = roots.iter().filter(|r| lex_positive(r)).cloned().collect();
    pos.sort();
    pos.dedup();
    let set: HashSet<&Vec<Rat>> = pos.iter().collect();
    let mut sums: HashSet<Vec<Rat>> = HashSet::new();
    for i in 0..pos.len() {
        for j in i..pos.len() {
            let s: Vec<Rat> = pos[i].iter().zip(&pos[j]).map(|(a, b)| a + b).collect();
            if set.contains(&s) {
                sums.insert(s);
            }
        }
    }
    let simple: Vec<Vec<Rat>> = pos.iter().filter(|r| !sums.contains(*r)).cloned().collect();
    for i in 0..simple.len() {
        for j in 0..i {
            if l.dot(&simple[i], &simple[j]).is_positive() {
                return Err(Error::Verification(
                    "simple roots with positive product".into(),
                ));
            }
        }
    }
    if linalg::rank_of_vectors(&simple) != simple.len() {
        return Err(Error::Verification("simple roots are dependent".into()));
    }
    for r in &pos {
        let c = linalg::coordinates_in(&simple, r)
            .ok_or_else(|| Error::Verification("root outside the span of the base".into()))?;
        if c.iter().any(|x| !x.is_integer() || x.is_negative()) {
            return Err(Error::Verification(
                "positive root is not a nonnegative combination".into(),
            ));
        }
    }
    Ok(simple)
}

/// Type of a list of roots (all roots of some system), labels by the diagram of a base.
pub fn type_of_roots(l: &GramLattice, roots: &[Root]) -> Result<RootSystemType> {
    let vs: Vec<Vec<Rat>> = roots.iter().map(|r| r.vector.clone()).collect();
    let simple = simple_system(l, &vs)?;
    let mut components = Vec::new();
    if !simple.is_empty() {
        // length marks are relative to the longest root overall
        let max = roots.iter().map(|r| r.norm.clone()).max().unwrap();
        let d = build_diagram(l, &simple)?.with_reference_norm(max);
        for c in d.classify_components() {
            match c.kind {
                Kind::Finite(lab) => components.push(lab),
                _ => {
                    return Err(Error::Verification(
                        "base diagram is not of finite type".into(),
                    ))
                }
            }
        }
    }
    components.sort_by(|a, b| {
        let ka = (a.family == 'G' || a.short, a.rank, a.family, a.short);
        let kb = (b.family == 'G' || b.short, b.rank, b.family, b.short);
        ka.cmp(&kb)
    });
    let mut counts: Vec<(Rat, usize)> = Vec::new();
    for r in roots {
        match counts.iter_mut().find(|c| c.0 == r.norm) {
            Some(c) => c.1 += 1,
            None => counts.push((r.norm.clone(), 1)),
        }
    }
    counts.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(RootSystemType { components, counts })
}

/// Root system of a positive definite lattice.
pub fn root_system_type(l: &GramLattice) -> Result<RootSystemType> {
    if !l.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let roots = roots_of(l, None)?;
    type_of_roots(l, &roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_standard, spec::parse_spec};
    use crate::linalg::rat;

    #[test]
    fn simple_systems() {
        let a2 = make_standard("A2", None).unwrap();
        let r: Vec<Vec<Rat>> = roots_of(&a2, None)
            .unwrap()
            .into_iter()
            .filter(|r| r.norm == rat(2, 1))
            .map(|r| r.vector)
            .collect();
        let s = simple_system(&a2, &r).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(a2.dot(&s[0], &s[1]), rat(-1, 1));
        let e8 = make_standard("E8", None).unwrap();
        let r: Vec<Vec<Rat>> = roots_of(&e8, None)
            .unwrap()
            .into_iter()
            .map(|r| r.vector)
            .collect();
        let s = simple_system(&e8, &r).unwrap();
        assert_eq!(s.len(), 8);
        let d = build_diagram(&e8, &s).unwrap();
        assert_eq!(
            d.classify_components()[0].kind.label().unwrap().to_string(),
            "E8"
        );
    }

    #[test]
    fn g2_from_a2() {
        let a2 = make_standard("A2", None).unwrap();
        let t = root_system_type(&a2).unwrap();
        assert_eq!(t.to_string(), "G2");
        assert_eq!(t.root_count(), 12);
        let all: Vec<Vec<Rat>> = roots_of(&a2, None)
            .unwrap()
            .into_iter()
            .map(|r| r.vector)
            .collect();
        let s = simple_system(&a2, &all).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(a2.dot(&s[0], &s[1]), rat(-1, 1));
        assert_ne!(a2.norm(&s[0]), a2.norm(&s[1]));
    }

    #[test]
    fn types() {
        assert_eq!(
            root_system_type(&make_standard("E8", None).unwrap())
                .unwrap()
                .to_string(),
            "E8"
        );
        let t = root_system_type(&parse_spec("3E6").unwrap()).unwrap();
        assert_eq!(t.to_string(), "3E6");
        assert_eq!(t.long_count(), 216);
        // sign changes preserve D_n, so the full reflective system is larger
        assert_eq!(
            root_system_type(&parse_spec("D5").unwrap())
                .unwrap()
                .to_string(),
            "B5"
        );
        assert_eq!(
            root_system_type(&parse_spec("D4").unwrap())
                .unwrap()
                .to_string(),
            "F4"
        );
        // A1 = <2>: the only roots are ±1 (norm 2) and, since the discriminant has
        // exponent 2, ±1 again for N = 4 is not primitive, so just A1
        assert_eq!(
            root_system_type(&parse_spec("A1").unwrap())
                .unwrap()
                .to_string(),
            "A1"
        );
        let big = make_standard("A2", None)
            .unwrap()
            .rescale(&rat(2, 1))
            .unwrap();
        let t = root_system_type(&big).unwrap();
        assert_eq!(t.long_count(), 6);
        assert!(root_system_type(&make_standard("U", None).unwrap()).is_err());
        // (1,-1) and (1,1) reflect: norms 6 and 10
        let l = GramLattice::from_integer_gram(&[vec![4, 1], vec![1, 4]]).unwrap();
        let t = root_system_type(&l).unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(t.root_count(), 4);
        // a binary form with no reflections at all
        let l = GramLattice::from_integer_gram(&[vec![4, 1], vec![1, 5]]).unwrap();
        let t = root_system_type(&l).unwrap();
        assert_eq!(t.rank(), 0);
        assert_eq!(t.to_string(), "∅");
    }

    #[test]
    fn odd_unimodular() {
        let t = root_system_type(&parse_spec("3I").unwrap()).unwrap();
        assert_eq!(t.to_string(), "B3");
    }
}
