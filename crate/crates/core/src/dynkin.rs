//! Coxeter–Dynkin diagrams of root sets.
//!
//! Vertex sets are handled as `u128` bitmasks, so diagrams are limited to 128
//! vertices. That is far more than any reflection group treated here needs.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::linalg::{self, int, Int, Rat};

pub type Mask = u128;

pub const MAX_VERTICES: usize = 128;

pub fn bit(i: usize) -> Mask {
    1u128 << i
}

pub fn members(m: Mask) -> impl Iterator<Item = usize> {
    let mut m = m;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn mask_of(vs: &[usize]) -> Mask {
    vs.iter().fold(0, |m, &v| m | bit(v))
}

/// Bond between two roots, read off from `cos²θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bond {
    Simple,
    Double,
    Triple,
    Affine,
    Dotted,
}

impl Bond {
    pub fn from_cos2(c: &Rat) -> Result<Bond> {
        let four = c * Rat::from_integer(int(4));
        if !four.is_integer() {
            return Err(Error::Verification(format!(
                "non-crystallographic angle, cos² = {c}"
            )));
        }
        Ok(match four.to_integer().to_string().as_str() {
            "1" => Bond::Simple,
            "2" => Bond::Double,
            "3" => Bond::Triple,
            "4" => Bond::Affine,
            _ => Bond::Dotted,
        })
    }

    fn code(self) -> u8 {
        match self {
            Bond::Simple => 1,
            Bond::Double => 2,
            Bond::Triple => 3,
            Bond::Affine => 4,
            Bond::Dotted => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bond::Simple => "simple",
            Bond::Double => "double",
            Bond::Triple => "triple",
            Bond::Affine => "affine",
            Bond::Dotted => "dotted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub product: Rat,
    pub bond: Bond,
}

/// Diagram of a finite set of roots: norms and all pairwise products.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub norms: Vec<Rat>,
    pub products: Vec<Vec<Rat>>,
    pub names: Vec<String>,
    /// Root vectors, when the diagram was built from a lattice.
    pub vectors: Option<Vec<Vec<Rat>>>,
    bonds: Vec<Vec<u8>>,
    adj: Vec<Mask>,
    max_norm: Rat,
}

/// Family letter, rank, affine flag and short mark of a component type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub family: char,
    pub rank: usize,
    pub affine: bool,
    pub short: bool,
}

impl TypeLabel {
    pub fn finite(family: char, rank: usize) -> Self {
        TypeLabel {
            family,
            rank,
            affine: false,
            short: false,
        }
    }

    pub fn affine(family: char, rank: usize) -> Self {
        TypeLabel {
            family,
            rank,
            affine: true,
            short: false,
        }
    }

    /// Number of vertices of a diagram of this type.
    pub fn vertices(&self) -> usize {
        self.rank + usize::from(self.affine)
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if self.affine {
            write!(f, "\u{302}")?;
        }
        write!(f, "{}", self.rank)?;
        if self.short {
            write!(f, "^s")?;
        }
        Ok(())
    }
}

/// Joins labels as `2E8+G2`, grouping equal labels.
pub fn format_multiset(labels: &[TypeLabel]) -> String {
    let mut counts: BTreeMap<(bool, usize, char, bool, bool), usize> = BTreeMap::new();
    for l in labels {
        let companion = matches!((l.family, l.short), ('G', _) | (_, true));
        *counts
            .entry((companion, l.rank, l.family, l.affine, l.short))
            .or_default() += 1;
    }
    let parts: Vec<String> = counts
        .iter()
        .map(|(&(_, rank, family, affine, short), &c)| {
            let l = TypeLabel {
                family,
                rank,
                affine,
                short,
            };
            if c == 1 {
                l.to_string()
            } else {
                format!("{c}{l}")
            }
        })
        .collect();
    if parts.is_empty() {
        "∅".into()
    } else {
        parts.join("+")
    }
}

/// Classification of a connected diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Finite(TypeLabel),
    Affine(TypeLabel),
    Other,
}

impl Kind {
    pub fn label(&self) -> Option<&TypeLabel> {
        match self {
            Kind::Finite(l) | Kind::Affine(l) => Some(l),
            Kind::Other => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Finite(_) => "finite",
            Kind::Affine(_) => "affine",
            Kind::Other => "hyperbolic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub kind: Kind,
}

/// A maximal subdiagram whose components are all affine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureAffine {
    pub vertices: Vec<usize>,
    pub components: Vec<Component>,
    pub corank: usize,
}

impl PureAffine {
    pub fn labels(&self) -> Vec<TypeLabel> {
        self.components
            .iter()
            .filter_map(|c| c.kind.label().cloned())
            .collect()
    }

    pub fn type_string(&self) -> String {
        format_multiset(&self.labels())
    }
}

impl Diagram {
    /// Builds a diagram from norms and products.
    pub fn from_products(norms: Vec<Rat>, products: Vec<Vec<Rat>>) -> Result<Diagram> {
        let n = norms.len();
        if n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "diagram has more than {MAX_VERTICES} vertices"
            )));
        }
        let mut bonds = vec![vec![0u8; n]; n];
        let mut adj = vec![0 as Mask; n];
        for i in 0..n {
            if !norms[i].is_positive() {
                return Err(Error::InvalidParameter(
                    "vertex norm must be positive".into(),
                ));
            }
            for j in 0..n {
                if i == j || products[i][j].is_zero() {
                    continue;
                }
                if products[i][j] != products[j][i] {
                    return Err(Error::InvalidParameter("products not symmetric".into()));
                }
                let c = &products[i][j] * &products[i][j] / (&norms[i] * &norms[j]);
                bonds[i][j] = Bond::from_cos2(&c)?.code();
                adj[i] |= bit(j);
            }
        }
        let max_norm = norms.iter().max().cloned().unwrap_or_else(Rat::zero);
        let names = (0..n).map(|i| format!("v{i}")).collect();
        Ok(Diagram {
            norms,
            products,
            names,
            vectors: None,
            bonds,
            adj,
            max_norm,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.len());
        self.names = names;
        self
    }

    /// Sets the norm that counts as long (defaults to the largest vertex norm).
    pub fn with_reference_norm(mut self, norm: Rat) -> Self {
        self.max_norm = norm;
        self
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn all(&self) -> Mask {
        if self.len() == 128 {
            Mask::MAX
        } else {
            bit(self.len()) - 1
        }
    }

    pub fn neighbors(&self, v: usize) -> Mask {
        self.adj[v]
    }

    pub fn bond(&self, i: usize, j: usize) -> Option<Bond> {
        match self.bonds[i][j] {
            0 => None,
            1 => Some(Bond::Simple),
            2 => Some(Bond::Double),
            3 => Some(Bond::Triple),
            4 => Some(Bond::Affine),
            _ => Some(Bond::Dotted),
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if let Some(b) = self.bond(i, j) {
                    out.push(Edge {
                        i,
                        j,
                        product: self.products[i][j].clone(),
                        bond: b,
                    });
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Sorted degree sequence (descending).
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.len()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn is_long(&self, v: usize) -> bool {
        self.norms[v] == self.max_norm
    }

    /// The full subdiagram on the given vertices, in the given order.
    pub fn induced(&self, vs: &[usize]) -> Diagram {
        let norms = vs.iter().map(|&v| self.norms[v].clone()).collect();
        let products = vs
            .iter()
            .map(|&i| vs.iter().map(|&j| self.products[i][j].clone()).collect())
            .collect();
        let mut d = Diagram::from_products(norms, products).expect("subdiagram of a valid diagram");
        d.names = vs.iter().map(|&v| self.names[v].clone()).collect();
        d.vectors = self
            .vectors
            .as_ref()
            .map(|vv| vs.iter().map(|&v| vv[v].clone()).collect());
        d
    }

    /// Connected components of the subdiagram on `m`, lowest vertex first.
    pub fn components_of(&self, m: Mask) -> Vec<Mask> {
        let mut rest = m;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for v in members(frontier) {
                    next |= self.adj[v] & m;
                }
                frontier = next & !comp;
                comp |= next;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    /// Classifies a connected vertex set by the shape of its Coxeter graph.
    pub fn kind_of(&self, m: Mask) -> Kind {
        let vs: Vec<usize> = members(m).collect();
        let n = vs.len();
        if n == 0 {
            return Kind::Other;
        }
        let deg = |v: usize| (self.adj[v] & m).count_ones() as usize;
        let mut edges = Vec::new();
        for (a, &i) in vs.iter().enumerate() {
            for &j in &vs[a + 1..] {
                let b = self.bonds[i][j];
                if b != 0 {
                    edges.push((i, j, b));
                }
            }
        }
        if edges.iter().any(|e| e.2 == 5) {
            return Kind::Other;
        }
        let short_rank1 = |v: usize| self.norms[v] < self.max_norm;
        if n == 1 {
            let mut l = TypeLabel::finite('A', 1);
            l.short = short_rank1(vs[0]);
            return Kind::Finite(l);
        }
        if edges.iter().any(|e| e.2 == 4) {
            if n == 2 {
                let mut l = TypeLabel::affine('A', 1);
                l.short = short_rank1(vs[0]) && short_rank1(vs[1]);
                return Kind::Affine(l);
            }
            return Kind::Other;
        }
        if edges.len() >= n {
            if edges.len() == n
                && n >= 3
                && edges.iter().all(|e| e.2 == 1)
                && vs.iter().all(|&v| deg(v) == 2)
            {
                return Kind::Affine(TypeLabel::affine('A', n - 1));
            }
            return Kind::Other;
        }
        // a tree from here on
        let multi: Vec<(usize, usize, u8)> = edges.iter().copied().filter(|e| e.2 > 1).collect();
        let branches: Vec<usize> = vs.iter().copied().filter(|&v| deg(v) >= 3).collect();
        let path_order = || -> Option<Vec<usize>> {
            if !branches.is_empty() {
                return None;
            }
            let start = vs.iter().copied().find(|&v| deg(v) <= 1)?;
            let mut order = vec![start];
            let mut seen = bit(start);
            let mut cur = start;
            while let Some(next) = members(self.adj[cur] & m & !seen).next() {
                order.push(next);
                seen |= bit(next);
                cur = next;
            }
            Some(order)
        };
        match multi.len() {
            0 => {
                if branches.is_empty() {
                    return Kind::Finite(TypeLabel::finite('A', n));
                }
                let legs_at = |b: usize| -> Vec<usize> {
                    let mut legs: Vec<usize> = members(self.adj[b] & m)
                        .map(|s| self.leg_length(m, b, s))
                        .collect();
                    legs.sort_unstable();
                    legs
                };
                if branches.len() == 1 {
                    let b = branches[0];
                    let legs = legs_at(b);
                    return match legs.as_slice() {
                        [1, 1, 1, 1] => Kind::Affine(TypeLabel::affine('D', 4)),
                        [1, 1, k] => Kind::Finite(TypeLabel::finite('D', k + 3)),
                        [1, 2, 2] => Kind::Finite(TypeLabel::finite('E', 6)),
                        [1, 2, 3] => Kind::Finite(TypeLabel::finite('E', 7)),
                        [1, 2, 4] => Kind::Finite(TypeLabel::finite('E', 8)),
                        [2, 2, 2] => Kind::Affine(TypeLabel::affine('E', 6)),
                        [1, 3, 3] => Kind::Affine(TypeLabel::affine('E', 7)),
                        [1, 2, 5] => Kind::Affine(TypeLabel::affine('E', 8)),
                        _ => Kind::Other,
                    };
                }
                if branches.len() == 2 && branches.iter().all(|&b| deg(b) == 3) {
                    // two forks joined by a path: every branch node has two leaves
                    let ok = branches
                        .iter()
                        .all(|&b| members(self.adj[b] & m).filter(|&s| deg(s) == 1).count() == 2);
                    if ok {
                        return Kind::Affine(TypeLabel::affine('D', n - 1));
                    }
                }
                Kind::Other
            }
            1 => {
                let (a, b, code) = multi[0];
                if code == 3 {
                    if n == 2 {
                        return Kind::Finite(TypeLabel::finite('G', 2));
                    }
                    if n == 3 && branches.is_empty() && (deg(a) == 1 || deg(b) == 1) {
                        return Kind::Affine(TypeLabel::affine('G', 2));
                    }
                    return Kind::Other;
                }
                if let Some(order) = path_order() {
                    let pa = order.iter().position(|&v| v == a).unwrap();
                    let pb = order.iter().position(|&v| v == b).unwrap();
                    let left = pa.min(pb) + 1;
                    let right = n - left;
                    let (s, l) = (left.min(right), left.max(right));
                    return match (s, l) {
                        (1, 1) => Kind::Finite(TypeLabel::finite('B', 2)),
                        (1, k) => {
                            // the isolated end decides between B and C
                            let end = if left == 1 { order[0] } else { order[n - 1] };
                            let other = if left == 1 { order[n - 1] } else { order[0] };
                            let fam = if self.norms[end] < self.norms[other] {
                                'B'
                            } else {
                                'C'
                            };
                            Kind::Finite(TypeLabel::finite(fam, k + 1))
                        }
                        (2, 2) => Kind::Finite(TypeLabel::finite('F', 4)),
                        (2, 3) => Kind::Affine(TypeLabel::affine('F', 4)),
                        _ => Kind::Other,
                    };
                }
                // B̂: a fork of two leaves at one end, the double bond at the other
                let end = if deg(a) == 1 {
                    Some(a)
                } else if deg(b) == 1 {
                    Some(b)
                } else {
                    None
                };
                if let (Some(end), [br]) = (end, branches.as_slice()) {
                    if deg(*br) == 3 {
                        let legs: Vec<Vec<usize>> = members(self.adj[*br] & m)
                            .map(|s| self.leg(m, *br, s))
                            .collect();
                        let others_ok = legs
                            .iter()
                            .filter(|leg| !leg.contains(&end))
                            .all(|leg| leg.len() == 1 && self.bonds[*br][leg[0]] == 1);
                        if others_ok && legs.iter().filter(|leg| leg.contains(&end)).count() == 1 {
                            return Kind::Affine(TypeLabel::affine('B', n - 1));
                        }
                    }
                }
                Kind::Other
            }
            2 => {
                if multi.iter().any(|e| e.2 != 2) {
                    return Kind::Other;
                }
                if let Some(order) = path_order() {
                    let ends = [order[0], order[n - 1]];
                    let at_ends = multi
                        .iter()
                        .all(|&(a, b, _)| ends.contains(&a) || ends.contains(&b));
                    let distinct_ends = n >= 3
                        && multi.iter().any(|&(a, b, _)| a == ends[0] || b == ends[0])
                        && multi.iter().any(|&(a, b, _)| a == ends[1] || b == ends[1]);
                    if at_ends && distinct_ends {
                        return Kind::Affine(TypeLabel::affine('C', n - 1));
                    }
                }
                Kind::Other
            }
            _ => Kind::Other,
        }
    }

    /// Number of vertices on the leg starting at `s` away from the branch node `b`.
    fn leg_length(&self, m: Mask, b: usize, s: usize) -> usize {
        let mut len = 1;
        let mut prev = b;
        let mut cur = s;
        loop {
            let next = members(self.adj[cur] & m & !bit(prev)).collect::<Vec<_>>();
            if next.len() != 1 {
                return if next.is_empty() { len } else { usize::MAX / 4 };
            }
            prev = cur;
            cur = next[0];
            len += 1;
        }
    }

    /// Vertices of the leg starting at `s`, walking away from `b`.
    fn leg(&self, m: Mask, b: usize, s: usize) -> Vec<usize> {
        let mut out = vec![s];
        let mut prev = b;
        let mut cur = s;
        loop {
            let next: Vec<usize> = members(self.adj[cur] & m & !bit(prev)).collect();
            if next.len() != 1 {
                return out;
            }
            prev = cur;
            cur = next[0];
            out.push(cur);
        }
    }

    pub fn classify(&self, m: Mask) -> Vec<Component> {
        self.components_of(m)
            .into_iter()
            .map(|c| Component {
                vertices: members(c).collect(),
                kind: self.kind_of(c),
            })
            .collect()
    }

    /// Components of the whole diagram with their types.
    pub fn classify_components(&self) -> Vec<Component> {
        self.classify(self.all())
    }

    /// Every component of finite type.
    pub fn is_elliptic(&self, m: Mask) -> bool {
        self.components_of(m)
            .into_iter()
            .all(|c| matches!(self.kind_of(c), Kind::Finite(_)))
    }

    /// Every component of affine type.
    pub fn is_parabolic(&self, m: Mask) -> bool {
        m != 0
            && self
                .components_of(m)
                .into_iter()
                .all(|c| matches!(self.kind_of(c), Kind::Affine(_)))
    }

    /// The positive primitive integral dependency of an affine component.
    pub fn null_vector(&self, comp: Mask) -> Option<Vec<(usize, Int)>> {
        let vs: Vec<usize> = members(comp).collect();
        let g: Vec<Vec<Rat>> = vs
            .iter()
            .map(|&i| vs.iter().map(|&j| self.products[i][j].clone()).collect())
            .collect();
        let ker = linalg::kernel_q(&g, vs.len());
        if ker.len() != 1 {
            return None;
        }
        let mut p = linalg::primitive_on_ray(&ker[0])?;
        if p.iter().any(|x| x.is_negative()) {
            p = p.into_iter().map(|x| -x).collect();
        }
        if p.iter().any(|x| !x.is_positive()) {
            return None;
        }
        Some(vs.into_iter().zip(p).collect())
    }

    /// Every connected affine subdiagram, as masks, sorted.
    pub fn affine_catalog(&self, within: Mask) -> Vec<Mask> {
        let mut seen: HashSet<Mask> = HashSet::new();
        let mut stack: Vec<Mask> = Vec::new();
        let mut found = Vec::new();
        for v in members(within) {
            let m = bit(v);
            if seen.insert(m) {
                stack.push(m);
            }
        }
        while let Some(m) = stack.pop() {
            match self.kind_of(m) {
                Kind::Affine(_) => {
                    found.push(m);
                    continue;
                }
                Kind::Other => continue,
                Kind::Finite(_) => {}
            }
            let mut nb = 0;
            for v in members(m) {
                nb |= self.adj[v];
            }
            for v in members(nb & within & !m) {
                // no dotted pairs inside affine subdiagrams
                if members(m).any(|u| self.bonds[u][v] == 5) {
                    continue;
                }
                let next = m | bit(v);
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        found.sort_unstable();
        found
    }

    /// All maximal pure-affine subdiagrams (of the subdiagram on `within`).
    pub fn maximal_pure_affine(&self, l: Option<&GramLattice>, within: Mask) -> Vec<PureAffine> {
        let cat = self.affine_catalog(within);
        let k = cat.len();
        let mut nbhd = vec![0 as Mask; k];
        for (i, &c) in cat.iter().enumerate() {
            for v in members(c) {
                nbhd[i] |= self.adj[v];
            }
        }
        let compatible = |i: usize, j: usize| cat[i] & (cat[j] | nbhd[j]) == 0;
        let cliques = maximal_cliques(k, &compatible);
        let mut out: Vec<PureAffine> = cliques
            .into_iter()
            .map(|cl| {
                let m = cl.iter().fold(0, |a, &i| a | cat[i]);
                let vertices: Vec<usize> = members(m).collect();
                let corank = match (l, &self.vectors) {
                    (Some(l), Some(vv)) => {
                        let rows: Vec<Vec<Rat>> = vertices.iter().map(|&v| vv[v].clone()).collect();
                        l.rank() - linalg::rank_of_vectors(&rows)
                    }
                    _ => {
                        let g: Vec<Vec<Rat>> = vertices
                            .iter()
                            .map(|&i| {
                                vertices
                                    .iter()
                                    .map(|&j| self.products[i][j].clone())
                                    .collect()
                            })
                            .collect();
                        // without vectors: rank of the Gram (lower bound on the span)
                        vertices.len() - linalg::kernel_q(&g, vertices.len()).len()
                    }
                };
                PureAffine {
                    components: self.classify(m),
                    vertices,
                    corank,
                }
            })
            .collect();
        out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        out
    }

    /// Key tables and adjacency in key form, used by canonical labeling.
    fn keyed(&self) -> (Vec<Rat>, Vec<Rat>, Vec<u32>, Vec<Vec<u32>>) {
        let mut nvals: Vec<Rat> = self.norms.clone();
        nvals.sort();
        nvals.dedup();
        let mut pvals: Vec<Rat> = self.products.iter().flatten().cloned().collect();
        pvals.push(Rat::zero());
        pvals.sort();
        pvals.dedup();
        let nk = self
            .norms
            .iter()
            .map(|x| nvals.binary_search(x).unwrap() as u32)
            .collect();
        let pk = self
            .products
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, x)| {
                        if i == j {
                            u32::MAX
                        } else {
                            pvals.binary_search(x).unwrap() as u32
                        }
                    })
                    .collect()
            })
            .collect();
        (nvals, pvals, nk, pk)
    }

    /// Canonical certificate and the size of the automorphism group.
    pub fn canonical(&self, budget: u64) -> Result<Canonical> {
        let (nvals, pvals, nk, pk) = self.keyed();
        let zero_key = pvals.binary_search(&Rat::zero()).unwrap() as u32;
        let n = self.len();
        let mut search = CanonSearch {
            n,
            nk: &nk,
            pk: &pk,
            zero: zero_key,
            best: None,
            count: 0,
            nodes: 0,
            budget,
        };
        let start = search.refine(nk.iter().map(|&x| x as usize).collect());
        search.descend(start)?;
        let (cert, perm) = search.best.take().unwrap_or_default();
        Ok(Canonical {
            norms: nvals,
            products: pvals,
            cert,
            automorphisms: search.count,
            labeling: perm,
        })
    }

    /// Order of the norm- and product-preserving permutation group.
    pub fn automorphism_order(&self) -> Result<u64> {
        Ok(self.canonical(50_000_000)?.automorphisms)
    }

    pub fn is_isomorphic(&self, other: &Diagram) -> Result<bool> {
        if self.len() != other.len() || self.degrees() != other.degrees() {
            return Ok(false);
        }
        let a = self.canonical(50_000_000)?;
        let b = other.canonical(50_000_000)?;
        Ok(a.norms == b.norms && a.products == b.products && a.cert == b.cert)
    }

    /// A vertex bijection `self → other` preserving norms and products, if any.
    pub fn isomorphism(&self, other: &Diagram) -> Result<Option<Vec<usize>>> {
        if !self.is_isomorphic(other)? {
            return Ok(None);
        }
        let a = self.canonical(50_000_000)?;
        let b = other.canonical(50_000_000)?;
        // position p holds a.labeling[p] in self and b.labeling[p] in other
        let mut map = vec![0; self.len()];
        for p in 0..self.len() {
            map[a.labeling[p]] = b.labeling[p];
        }
        Ok(Some(map))
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = (0..self.len())
            .map(|i| json!({ "id": i, "name": self.names[i], "norm": self.norms[i].to_string() }))
            .collect();
        let edges: Vec<Value> = self
            .edges()
            .iter()
            .map(|e| json!({ "i": e.i, "j": e.j, "product": e.product.to_string(), "bond": e.bond.name() }))
            .collect();
        json!({ "vertices": vertices, "edges": edges })
    }

    /// Graphviz rendering: long roots filled, short roots open.
    pub fn to_dot(&self, title: &str) -> String {
        let mut s = format!(
            "graph \"{}\" {{\n  node [shape=circle, label=\"\"];\n",
            title.replace('"', "'")
        );
        for i in 0..self.len() {
            let style = if self.is_long(i) { "filled" } else { "solid" };
            s.push_str(&format!(
                "  v{i} [style={style}, xlabel=\"{}\", tooltip=\"norm {}\"];\n",
                self.names[i].replace('"', "'"),
                self.norms[i]
            ));
        }
        for e in self.edges() {
            let attr = match e.bond {
                Bond::Simple => String::new(),
                Bond::Double => " [label=\"2\"]".into(),
                Bond::Triple => " [label=\"3\"]".into(),
                Bond::Affine => " [label=\"∞\", penwidth=2]".into(),
                Bond::Dotted => format!(" [style=dotted, label=\"{}\"]", e.product),
            };
            s.push_str(&format!("  v{} -- v{}{};\n", e.i, e.j, attr));
        }
        s.push_str("}\n");
        s
    }
}

/// Result of canonical labeling.
#[derive(Debug, Clone)]
pub struct Canonical {
    norms: Vec<Rat>,
    products: Vec<Rat>,
    cert: Vec<u32>,
    pub automorphisms: u64,
    /// `labeling[p]` is the vertex placed at canonical position `p`.
    pub labeling: Vec<usize>,
}

struct CanonSearch<'a> {
    n: usize,
    nk: &'a [u32],
    pk: &'a [Vec<u32>],
    zero: u32,
    best: Option<(Vec<u32>, Vec<usize>)>,
    count: u64,
    nodes: u64,
    budget: u64,
}

impl CanonSearch<'_> {
    /// Iterated color refinement; colors are ranks of signatures, so the
    /// result depends only on the isomorphism class.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut classes = count_distinct(&colors);
        colors = renumber(&colors);
        loop {
            let sigs: Vec<(usize, Vec<(u32, usize)>)> = (0..self.n)
                .map(|v| {
                    let mut s: Vec<(u32, usize)> = (0..self.n)
                        .filter(|&u| u != v && self.pk[v][u] != self.zero)
                        .map(|u| (self.pk[v][u], colors[u]))
                        .collect();
                    s.sort_unstable();
                    (colors[v], s)
                })
                .collect();
            let mut sorted = sigs.clone();
            sorted.sort();
            sorted.dedup();
            let next: Vec<usize> = sigs
                .iter()
                .map(|s| sorted.binary_search(s).unwrap())
                .collect();
            let k = sorted.len();
            colors = next;
            if k == classes {
                return colors;
            }
            classes = k;
        }
    }

    fn descend(&mut self, colors: Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceExhausted("canonical labeling search".into()));
        }
        let mut sizes = vec![0usize; self.n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = (0..self.n).find(|&c| sizes[c] > 1);
        let Some(cell) = target else {
            let mut perm = vec![0; self.n];
            for v in 0..self.n {
                perm[colors[v]] = v;
            }
            let mut cert = Vec::with_capacity(self.n * (self.n + 1));
            for &v in &perm {
                cert.push(self.nk[v]);
            }
            for &u in &perm {
                for &v in &perm {
                    cert.push(self.pk[u][v]);
                }
            }
            match &self.best {
                Some((b, _)) if *b < cert => {}
                Some((b, _)) if *b == cert => self.count += 1,
                _ => {
                    self.best = Some((cert, perm));
                    self.count = 1;
                }
            }
            return Ok(());
        };
        for v in (0..self.n).filter(|&v| colors[v] == cell) {
            let split: Vec<usize> = (0..self.n)
                .map(|u| 2 * colors[u] + usize::from(colors[u] == cell && u != v))
                .collect();
            let refined = self.refine(split);
            self.descend(refined)?;
        }
        Ok(())
    }
}

fn count_distinct(v: &[usize]) -> usize {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

fn renumber(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    v.iter().map(|x| s.binary_search(x).unwrap()).collect()
}

/// Bron–Kerbosch with pivoting on an implicit graph with `k` vertices.
fn maximal_cliques(k: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let nb: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| i != j && adjacent(i, j)).collect())
        .collect();
    let mut out = Vec::new();
    fn bk(
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        nb: &[Vec<bool>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| nb[u][v]).count())
            .unwrap();
        let cands: Vec<usize> = p.iter().copied().filter(|&v| !nb[pivot][v]).collect();
        let mut p = p;
        let mut x = x;
        for v in cands {
            r.push(v);
            let np = p.iter().copied().filter(|&u| nb[v][u]).collect();
            let nx = x.iter().copied().filter(|&u| nb[v][u]).collect();
            bk(r, np, nx, nb, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    if k == 0 {
        return out;
    }
    bk(&mut Vec::new(), (0..k).collect(), Vec::new(), &nb, &mut out);
    for c in out.iter_mut() {
        c.sort_unstable();
    }
    out.sort();
    out
}

/// Diagram of a list of roots in `l`; rejects repeated or proportional roots.
pub fn build_diagram(l: &GramLattice, roots: &[Vec<Rat>]) -> Result<Diagram> {
    for i in 0..roots.len() {
        for j in 0..i {
            if linalg::rank_of_vectors(&[roots[i].clone(), roots[j].clone()]) < 2 {
                return Err(Error::InvalidParameter(format!(
                    "roots {j} and {i} are equal or proportional"
                )));
            }
        }
    }
    let norms: Vec<Rat> = roots.iter().map(|r| l.norm(r)).collect();
    let products = linalg::gram_of(l.gram(), roots);
    let mut d = Diagram::from_products(norms, products)?;
    d.vectors = Some(roots.to_vec());
    Ok(d)
}

/// Diagram of a Cartan-type Gram matrix with integer entries.
pub fn diagram_from_gram(g: &[Vec<i64>]) -> Result<Diagram> {
    let norms = (0..g.len())
        .map(|i| Rat::from_integer(int(g[i][i])))
        .collect();
    let products = g
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(int(x))).collect())
        .collect();
    Diagram::from_products(norms, products)
}

/// The Cartan-type check `2(aᵢ·aⱼ)/(aⱼ·aⱼ) ∈ ℤ` for every pair.
pub fn is_crystallographic_set(d: &Diagram) -> bool {
    (0..d.len()).all(|i| {
        (0..d.len()).all(|j| {
            i == j || (Rat::from_integer(int(2)) * &d.products[i][j] / &d.norms[j]).is_integer()
        })
    })
}

impl Diagram {
    /// Gram-based cross-check: PSD with the given corank.
    pub fn gram_corank(&self, m: Mask) -> Option<usize> {
        let vs: Vec<usize> = members(m).collect();
        let g: Vec<Vec<Rat>> = vs
            .iter()
            .map(|&i| vs.iter().map(|&j| self.products[i][j].clone()).collect())
            .collect();
        let l = GramLattice::new(g).ok()?;
        let (_, q, r) = l.signature();
        (q == 0).then_some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_standard;
    use crate::linalg::rat;

    fn cartan_diagram(name: &str) -> Diagram {
        let l = make_standard(name, None).unwrap();
        let rows: Vec<Vec<i64>> = l.scaled_gram_i64().unwrap();
        diagram_from_gram(&rows).unwrap()
    }

    /// A path with the given vertex norms and consecutive products.
    fn path(prods: &[i64], norms: &[i64]) -> Diagram {
        let n = norms.len();
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = norms[i];
        }
        for (i, &p) in prods.iter().enumerate() {
            g[i][i + 1] = p;
            g[i + 1][i] = p;
        }
        diagram_from_gram(&g).unwrap()
    }

    fn kind(d: &Diagram) -> String {
        let c = d.classify_components();
        assert_eq!(c.len(), 1);
        match &c[0].kind {
            Kind::Other => "other".into(),
            k => k.label().unwrap().to_string(),
        }
    }

    #[test]
    fn finite_types() {
        for (name, label) in [
            ("A5", "A5"),
            ("D4", "D4"),
            ("D7", "D7"),
            ("E6", "E6"),
            ("E7", "E7"),
            ("E8", "E8"),
        ] {
            assert_eq!(kind(&cartan_diagram(name)), label);
        }
        assert_eq!(kind(&path(&[-2], &[4, 2])), "B2");
        assert_eq!(kind(&path(&[-2, -2], &[4, 4, 2])), "B3");
        assert_eq!(kind(&path(&[-1, -2], &[2, 2, 4])), "C3");
        assert_eq!(kind(&path(&[-2, -2, -1], &[4, 4, 2, 2])), "F4");
        assert_eq!(kind(&path(&[-3], &[6, 2])), "G2");
    }

    #[test]
    fn affine_types() {
        assert_eq!(kind(&path(&[-3, -3], &[6, 6, 2])), "G\u{302}2");
        assert_eq!(
            kind(&path(&[-2, -2, -2, -1], &[4, 4, 4, 2, 2])),
            "F\u{302}4"
        );
        assert_eq!(kind(&path(&[-2, -2, -2], &[2, 4, 4, 2])), "C\u{302}3");
        assert_eq!(kind(&path(&[-2], &[2, 2])), "A\u{302}1");
        // B̂3: two leaves and a double bond on the third neighbour of the fork
        let g = vec![
            vec![4, 0, -2, 0],
            vec![0, 4, -2, 0],
            vec![-2, -2, 4, -2],
            vec![0, 0, -2, 2],
        ];
        assert_eq!(kind(&diagram_from_gram(&g).unwrap()), "B\u{302}3");
        // cycle of four
        let g = vec![
            vec![2, -1, 0, -1],
            vec![-1, 2, -1, 0],
            vec![0, -1, 2, -1],
            vec![-1, 0, -1, 2],
        ];
        assert_eq!(kind(&diagram_from_gram(&g).unwrap()), "A\u{302}3");
    }

    #[test]
    fn affine_extensions_of_simply_laced() {
        // add minus the highest root to the simple roots
        for (name, label, highest) in [
            ("E8", "E\u{302}8", vec![2, 3, 4, 6, 5, 4, 3, 2]),
            ("E7", "E\u{302}7", vec![2, 2, 3, 4, 3, 2, 1]),
            ("E6", "E\u{302}6", vec![1, 2, 2, 3, 2, 1]),
            ("D6", "D\u{302}6", vec![1, 2, 2, 2, 1, 1]),
            ("D4", "D\u{302}4", vec![1, 2, 1, 1]),
            ("A4", "A\u{302}4", vec![1, 1, 1, 1]),
        ] {
            let l = make_standard(name, None).unwrap();
            let n = l.rank();
            let mut roots: Vec<Vec<Rat>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { rat(1, 1) } else { rat(0, 1) })
                        .collect()
                })
                .collect();
            roots.push(highest.iter().map(|&c| rat(-c, 1)).collect());
            let d = build_diagram(&l, &roots).unwrap();
            assert_eq!(kind(&d), label, "{name}");
            let nv = d.null_vector(d.all()).unwrap();
            assert!(nv.iter().all(|(_, c)| c.is_positive()));
            assert_eq!(d.gram_corank(d.all()), Some(1));
        }
    }

    #[test]
    fn hyperbolic_pair() {
        let d = Diagram::from_products(
            vec![rat(2, 3), rat(2, 3)],
            vec![vec![rat(2, 3), rat(-4, 3)], vec![rat(-4, 3), rat(2, 3)]],
        )
        .unwrap();
        assert_eq!(d.edges()[0].bond, Bond::Dotted);
        assert_eq!(d.classify_components()[0].kind, Kind::Other);
        let single = Diagram::from_products(vec![rat(2, 1)], vec![vec![rat(2, 1)]]).unwrap();
        assert_eq!(kind(&single), "A1");
    }

    #[test]
    fn automorphisms() {
        assert_eq!(cartan_diagram("A2").automorphism_order().unwrap(), 2);
        assert_eq!(cartan_diagram("E8").automorphism_order().unwrap(), 1);
        assert_eq!(cartan_diagram("D4").automorphism_order().unwrap(), 6);
        assert_eq!(cartan_diagram("E6").automorphism_order().unwrap(), 2);
    }

    #[test]
    fn isomorphism_of_relabeled() {
        let d = cartan_diagram("E7");
        let perm = [3, 6, 0, 2, 5, 1, 4];
        let e = d.induced(&perm);
        assert!(d.is_isomorphic(&e).unwrap());
        let map = d.isomorphism(&e).unwrap().unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(d.products[i][j], e.products[map[i]][map[j]]);
            }
        }
        assert!(!d.is_isomorphic(&cartan_diagram("A7")).unwrap());
    }

    #[test]
    fn pure_affine_search() {
        // two disjoint Â2 triangles joined by one edge: maximal pure-affine sets
        // are each triangle alone
        let mut g = vec![vec![0i64; 6]; 6];
        for i in 0..6 {
            g[i][i] = 2;
        }
        for &(a, b) in &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)] {
            g[a][b] = -1;
            g[b][a] = -1;
        }
        let d = diagram_from_gram(&g).unwrap();
        let m = d.maximal_pure_affine(None, d.all());
        let types: Vec<String> = m.iter().map(|p| p.type_string()).collect();
        assert!(types.iter().all(|t| t == "A\u{302}2"), "{types:?}");
        assert_eq!(m.len(), 2);
        assert_eq!(m.iter().filter(|p| p.vertices == vec![0, 1, 2]).count(), 1);
    }

    #[test]
    fn multiset_format() {
        let l = vec![
            TypeLabel::finite('E', 8),
            TypeLabel::finite('G', 2),
            TypeLabel::finite('E', 8),
        ];
        assert_eq!(format_multiset(&l), "2E8+G2");
        let l = vec![TypeLabel::finite('A', 11), TypeLabel::finite('D', 7)];
        assert_eq!(format_multiset(&l), "D7+A11");
    }
}
