//! The reproduction suite: every checked claim about the cubic-fourfold
//! lattices, grouped into the ten acceptance criteria.
//!
//! A failing computation turns into a failed claim carrying the error, so a
//! report is always produced.

use std::cell::OnceCell;
use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cohomring::{chern_inverse, restriction_check, secant_table, Ring};
use crate::cubic4::{self, PlaneType, Setup};
use crate::enumerate::{self, box_search, random_definite};
use crate::error::{Error, Result};
use crate::lattice::{make_standard, Sublattice};
use crate::linalg::{int, rat, Int, Rat};
use crate::roots::roots_of;
use crate::strata::{build_strata, dim_formula_check, IncidenceScheme};
use crate::vinberg::{Status, VinbergRun};

/// Number of acceptance criteria.
pub const CRITERIA: u8 = 10;

#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    /// Random translates in the special-vector sweep.
    pub samples: usize,
    /// Random lattices in the enumeration oracle comparison.
    pub oracle_lattices: usize,
    pub max_weight: Rat,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 1,
            samples: 200,
            oracle_lattices: 20,
            max_weight: rat(crate::vinberg::DEFAULT_MAX_WEIGHT, 1),
        }
    }
}

/// One checked statement.
#[derive(Debug, Clone)]
pub struct Claim {
    pub criterion: u8,
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub detail: Value,
}

impl Claim {
    pub fn to_json(&self) -> Value {
        json!({
            "criterion": self.criterion,
            "id": self.id,
            "statement": self.statement,
            "passed": self.passed,
            "detail": self.detail,
        })
    }
}

/// Shared state: the setup and the (expensive) Vinberg run, computed once.
pub struct Context {
    pub opts: Options,
    setup: OnceCell<std::result::Result<Setup, Error>>,
    run: OnceCell<std::result::Result<VinbergRun, Error>>,
}

impl Context {
    pub fn new(opts: Options) -> Self {
        Context {
            opts,
            setup: OnceCell::new(),
            run: OnceCell::new(),
        }
    }

    pub fn setup(&self) -> Result<&Setup> {
        self.setup
            .get_or_init(cubic4::build_setup)
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn run(&self) -> Result<&VinbergRun> {
        self.run
            .get_or_init(|| {
                let s = self.setup()?;
                cubic4::vinberg_lambda1(s, None, &self.opts.max_weight)
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

struct Claims {
    criterion: u8,
    out: Vec<Claim>,
}

impl Claims {
    fn new(criterion: u8) -> Self {
        Claims {
            criterion,
            out: Vec::new(),
        }
    }

    fn push(&mut self, id: &str, statement: &str, passed: bool, detail: Value) {
        self.out.push(Claim {
            criterion: self.criterion,
            id: format!("{}.{id}", self.criterion),
            statement: statement.to_string(),
            passed,
            detail,
        });
    }

    /// Records `f`'s verdict, or a failure with the error if it could not run.
    fn check(&mut self, id: &str, statement: &str, f: impl FnOnce() -> Result<(bool, Value)>) {
        match f() {
            Ok((ok, d)) => self.push(id, statement, ok, d),
            Err(e) => self.push(
                id,
                statement,
                false,
                json!({ "error": e.to_string(), "code": e.code() }),
            ),
        }
    }
}

fn strings<T: ToString>(it: impl IntoIterator<Item = T>) -> Vec<String> {
    it.into_iter().map(|x| x.to_string()).collect()
}

/// Runs one criterion.
pub fn check_criterion(ctx: &Context, n: u8) -> Vec<Claim> {
    let mut c = Claims::new(n);
    match n {
        1 => vinberg_claims(ctx, &mut c),
        2 => short_law_claims(ctx, &mut c),
        3 => symmetry_claims(ctx, &mut c),
        4 => census_claims(ctx, &mut c),
        5 => plane_claims(ctx, &mut c),
        6 => arrangement_claims(ctx, &mut c),
        7 => special_claims(ctx, &mut c),
        8 => cohomology_claims(&mut c),
        9 => strata_claims(ctx, &mut c),
        10 => oracle_claims(ctx, &mut c),
        _ => c.push(
            "range",
            "criterion number is between 1 and 10",
            false,
            json!(n),
        ),
    }
    c.out
}

fn vinberg_claims(ctx: &Context, c: &mut Claims) {
    c.check(
        "status",
        "Vinberg's algorithm on Λ₁ terminates with a polytope of finite volume",
        || {
            let r = ctx.run()?;
            Ok((
                r.status == Status::FiniteVolume,
                json!({ "status": r.status.name(), "reached": r.reached.to_string() }),
            ))
        },
    );
    c.check("long", "24 roots of norm 2", || {
        let (l, _) = cubic4::split_by_norm(ctx.run()?);
        Ok((l.len() == 24, json!(l.len())))
    });
    c.check("short", "12 roots of norm 2/3", || {
        let (_, s) = cubic4::split_by_norm(ctx.run()?);
        Ok((s.len() == 12, json!(s.len())))
    });
    c.check(
        "model",
        "the long-root diagram is the subdivided join of two triples",
        || {
            let r = ctx.run()?;
            let (l, _) = cubic4::split_by_norm(r);
            let dl = r.diagram()?.induced(&l);
            Ok((
                dl.is_isomorphic(&cubic4::subdivided_join_model())?,
                Value::Null,
            ))
        },
    );
    c.check(
        "degrees",
        "6 vertices of degree 3 and 18 of degree 2",
        || {
            let r = ctx.run()?;
            let (l, _) = cubic4::split_by_norm(r);
            let deg = r.diagram()?.induced(&l).degrees();
            let (d3, d2) = (
                deg.iter().filter(|&&d| d == 3).count(),
                deg.iter().filter(|&&d| d == 2).count(),
            );
            Ok((d3 == 6 && d2 == 18, json!({ "3": d3, "2": d2 })))
        },
    );
    c.check(
        "explicit",
        "the explicit long roots are norm 2 roots with the same diagram as the run",
        || {
            let s = ctx.setup()?;
            let r = ctx.run()?;
            let (l, _) = cubic4::split_by_norm(r);
            let ok = cubic4::explicit_long_diagram(s)?.is_isomorphic(&r.diagram()?.induced(&l))?;
            Ok((ok, Value::Null))
        },
    );
}

fn short_law_claims(ctx: &Context, c: &mut Claims) {
    c.check(
        "pairs",
        "all 66 pairs of short roots follow the pairing law",
        || {
            let rep = cubic4::short_law_check(ctx.run()?)?;
            Ok((rep.holds() && rep.pairs == 66, rep.to_json()))
        },
    );
    c.check(
        "values",
        "short-root products lie in {0, −2/3, −4/3, −5/3}",
        || {
            let rep = cubic4::short_law_check(ctx.run()?)?;
            let allowed = [rat(0, 1), rat(-2, 3), rat(-4, 3), rat(-5, 3)];
            Ok((
                rep.products.iter().all(|p| allowed.contains(p)),
                json!(strings(&rep.products)),
            ))
        },
    );
    c.check(
        "labels",
        "the short roots carry the 12 distinct bijection labels",
        || {
            let rep = cubic4::short_law_check(ctx.run()?)?;
            let distinct: BTreeSet<_> = rep.labels.iter().collect();
            Ok((distinct.len() == 12, json!(strings(&rep.labels))))
        },
    );
}

fn symmetry_claims(ctx: &Context, c: &mut Claims) {
    c.check(
        "model",
        "the subdivided join model has 72 automorphisms",
        || {
            let n = cubic4::subdivided_join_model().automorphism_order()?;
            Ok((n == 72, json!(n)))
        },
    );
    c.check(
        "run",
        "the long-root diagram of the run has 72 automorphisms",
        || {
            let r = ctx.run()?;
            let (l, _) = cubic4::split_by_norm(r);
            let n = r.diagram()?.induced(&l).automorphism_order()?;
            Ok((n == 72, json!(n)))
        },
    );
}

fn census_claims(ctx: &Context, c: &mut Claims) {
    c.check(
        "types",
        "maximal pure-affine subdiagrams of the long roots: the six types",
        || {
            let s = ctx.setup()?;
            let census = cubic4::affine_census(s, &cubic4::explicit_long_diagram(s)?);
            let got: BTreeSet<String> = census.iter().map(|x| x.0.clone()).collect();
            let want: BTreeSet<String> = PlaneType::ALL.iter().map(|t| t.affine_label()).collect();
            Ok((got == want, json!(census)))
        },
    );
    c.check(
        "corank",
        "corank one holds exactly for 3E6 and D7+A11 among the long roots",
        || {
            let s = ctx.setup()?;
            let census = cubic4::affine_census(s, &cubic4::explicit_long_diagram(s)?);
            let one: BTreeSet<String> = census
                .iter()
                .filter(|x| x.1 == 1)
                .map(|x| x.0.clone())
                .collect();
            let want: BTreeSet<String> = [PlaneType::ThreeE6, PlaneType::D7A11]
                .iter()
                .map(|t| t.affine_label())
                .collect();
            Ok((one == want, json!(census)))
        },
    );
    c.check(
        "completed",
        "on the full diagram all six types occur, completed, with corank one",
        || {
            let s = ctx.setup()?;
            let d = ctx.run()?.diagram()?;
            let pa = d.maximal_pure_affine(Some(&s.lambda_1), d.all());
            let rows: Vec<(String, String, usize)> = pa
                .iter()
                .map(|p| {
                    (
                        p.type_string(),
                        cubic4::stripped_affine(&d, &p.vertices),
                        p.corank,
                    )
                })
                .collect();
            let types: BTreeSet<(String, String)> =
                rows.iter().map(|r| (r.0.clone(), r.1.clone())).collect();
            let stripped: BTreeSet<String> = types.iter().map(|r| r.1.clone()).collect();
            let want: BTreeSet<String> = PlaneType::ALL
                .iter()
                .map(|t| t.label().to_string())
                .collect();
            let ok = stripped == want && types.len() == 6 && rows.iter().all(|r| r.2 == 1);
            Ok((ok, json!({ "types": types, "subdiagrams": rows.len() })))
        },
    );
}

fn plane_claims(ctx: &Context, c: &mut Claims) {
    let mut systems = Vec::new();
    for t in PlaneType::ALL {
        let mut sys = None;
        c.check(
            &format!("label.{}", t.label()),
            &format!("K⊥/K of the {} plane has that root system", t.label()),
            || {
                let s = ctx.setup()?;
                let k = cubic4::isotropic_plane_from_affine(s, t)?;
                let cl = cubic4::classify_isotropic_plane(s, &k)?;
                sys = Some(cl.system.to_string());
                Ok((cl.system.stripped_label() == t.label(), cl.to_json()))
            },
        );
        systems.extend(sys);
    }
    let distinct: BTreeSet<&String> = systems.iter().collect();
    c.push(
        "distinct",
        "the six root systems are pairwise distinct",
        distinct.len() == 6,
        json!(systems),
    );
    c.check("3E6", "the 3E6 plane: 216 norm 2 roots, root-span index 3, diagonal discriminant", || {
        let s = ctx.setup()?;
        let k = cubic4::isotropic_plane_from_affine(s, PlaneType::ThreeE6)?;
        let cl = cubic4::classify_isotropic_plane(s, &k)?;
        let (index, diagonal) = cubic4::root_span_index(s, &k)?;
        let ok = cl.system.long_count() == 216 && index == int(3) && diagonal;
        Ok((ok, json!({ "roots": cl.system.long_count(), "index": index.to_string(), "diagonal": diagonal })))
    });
    c.check(
        "D7+A11",
        "the D7+A11 plane: root-span index 4 with diagonal discriminant",
        || {
            let s = ctx.setup()?;
            let k = cubic4::isotropic_plane_from_affine(s, PlaneType::D7A11)?;
            let (index, diagonal) = cubic4::root_span_index(s, &k)?;
            Ok((
                index == int(4) && diagonal,
                json!({ "index": index.to_string(), "diagonal": diagonal }),
            ))
        },
    );
}

fn arrangement_claims(ctx: &Context, c: &mut Claims) {
    for t in PlaneType::ALL {
        let expect = !matches!(t, PlaneType::ThreeE6 | PlaneType::D7A11);
        let st = format!(
            "the {} stratum {} the arrangement",
            t.label(),
            if expect { "meets" } else { "misses" }
        );
        c.check(&format!("meets.{}", t.label()), &st, || {
            let inc = cubic4::stratum_meets_arrangement(ctx.setup()?, t)?;
            Ok((inc.meets == expect, inc.to_json()))
        });
    }
}

fn special_claims(ctx: &Context, c: &mut Claims) {
    c.check("eta", "η·η = 3", || {
        let s = ctx.setup()?;
        let n = s.lambda.norm_z(&s.eta);
        Ok((n == rat(3, 1), json!(n.to_string())))
    });
    c.check(
        "h",
        "hᵢ·hᵢ = 6, hᵢ·hⱼ = −3 and h₁ + h₂ + h₃ = 0",
        || {
            let s = ctx.setup()?;
            let mut ok = true;
            for i in 0..3 {
                ok &= s.lambda_o.norm_z(&s.h[i]) == rat(6, 1);
                for j in 0..i {
                    ok &= s.lambda_o.dot_z(&s.h[i], &s.h[j]) == rat(-3, 1);
                }
            }
            let sum: Vec<Int> = (0..cubic4::RANK_O)
                .map(|k| s.h.iter().map(|h| &h[k]).sum())
                .collect();
            Ok((ok && sum.iter().all(|x| *x == Int::from(0)), Value::Null))
        },
    );
    c.check("divisor", "each hᵢ has divisor 3", || {
        let s = ctx.setup()?;
        let d: Vec<Int> =
            s.h.iter()
                .map(|h| s.lambda_o.divisor(h))
                .collect::<Result<_>>()?;
        Ok((d.iter().all(|x| *x == int(3)), json!(strings(&d))))
    });
    c.check(
        "lambda_o",
        "Λ_o is even of signature (20, 2) with discriminant ℤ/3",
        || {
            let s = ctx.setup()?;
            let inv = s.lambda_o.discriminant_group()?.invariant_factors;
            let sig = s.lambda_o.signature();
            Ok((
                s.lambda_o.is_even()? && inv == vec![int(3)] && sig == (20, 2, 0),
                json!({ "factors": strings(&inv), "signature": sig }),
            ))
        },
    );
    c.check(
        "reflections",
        "reflections in h₁, h₂, h₃ preserve Λ_o",
        || {
            let s = ctx.setup()?;
            for h in &s.h {
                cubic4::short_root(s, h)?;
            }
            Ok((true, Value::Null))
        },
    );
    c.check(
        "g2",
        "the special vectors of the A2 summand are exactly h₁, h₂, h₃",
        || {
            let s = ctx.setup()?;
            let a2 = make_standard("A2", None)?;
            let mut found = Vec::new();
            for v in enumerate::enumerate_norm(&a2, &rat(6, 1))? {
                let mut h = vec![Int::from(0); cubic4::RANK_O];
                h[cubic4::RANK_O - 2] = v[0].clone();
                h[cubic4::RANK_O - 1] = v[1].clone();
                if cubic4::is_special(s, &h)? {
                    found.push(h);
                }
            }
            found.sort();
            let mut want = s.h.to_vec();
            want.sort();
            Ok((found == want, json!(found.len())))
        },
    );
    c.check(
        "translates",
        "random Γ-translates of {h₁, h₂, h₃} are conforming special sets",
        || {
            let s = ctx.setup()?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed);
            let mut bad = Vec::new();
            for i in 0..ctx.opts.samples {
                let t = cubic4::random_translate(s, &mut rng, &s.h, 6);
                let rep = cubic4::special_set_check(s, &t)?;
                let div_ok = t
                    .iter()
                    .map(|h| s.lambda_o.divisor(h))
                    .collect::<Result<Vec<_>>>()?
                    .iter()
                    .all(|d| *d == int(3));
                if !rep.conforming || !rep.positive_definite || !div_ok {
                    bad.push(i);
                }
            }
            Ok((
                bad.is_empty(),
                json!({ "samples": ctx.opts.samples, "seed": ctx.opts.seed, "failed": bad }),
            ))
        },
    );
}

fn cohomology_claims(c: &mut Claims) {
    c.check(
        "table",
        "y⁴ = 3, a·y² = 1, a² = 3, h·y² = 0, h² = 6 and 3a − y² = 2h",
        || {
            let t = secant_table()?;
            Ok((t.holds(), t.to_json()))
        },
    );
    c.check(
        "chern",
        "(1+u)⁻¹ = 1 − u + u² and (1+u)⁻³ = 1 − 3u + 6u²",
        || {
            let a = chern_inverse(Ring::YTilde, 1).to_string();
            let b = chern_inverse(Ring::YTilde, 3).to_string();
            Ok((a == "1 - u + u^2" && b == "1 - 3u + 6u^2", json!([a, b])))
        },
    );
    c.push(
        "restriction",
        "y ↦ 2x is compatible with the relations",
        restriction_check(),
        Value::Null,
    );
}

fn strata_claims(ctx: &Context, c: &mut Claims) {
    let s = build_strata();
    c.push(
        "nodes",
        "eleven strata",
        s.nodes.len() == 11,
        json!(s.nodes.len()),
    );
    let dims: Vec<(String, u32)> = s.nodes.iter().map(|n| (n.label.clone(), n.dim)).collect();
    let want = [0, 1, 1, 1, 2, 2, 3, 3, 0, 1, 2];
    c.push(
        "dims",
        "stratum dimensions",
        dims.iter().map(|d| d.1).eq(want),
        json!(dims),
    );
    c.push(
        "minimal",
        "the minimal strata are I0 and III0",
        s.minimal() == ["I0", "III0"],
        json!(s.minimal()),
    );
    let rows = dim_formula_check(&s);
    c.push(
        "formula",
        "dim II(R) = 1 + (18 − rk R) for all six R",
        rows.len() == 6 && rows.iter().all(|r| r.expected == r.listed),
        json!(rows
            .iter()
            .map(|r| (r.label.clone(), r.root_rank, r.expected, r.listed))
            .collect::<Vec<_>>()),
    );
    c.check(
        "emit",
        "DOT and JSON output are stable and JSON round-trips",
        || {
            let again = build_strata();
            let json_ok = IncidenceScheme::from_json(&s.to_json())? == s;
            Ok((
                json_ok
                    && s.emit("dot")? == again.emit("dot")?
                    && s.emit("json")? == again.emit("json")?,
                Value::Null,
            ))
        },
    );
    c.check(
        "arrangement",
        "the stored arrangement flags agree with the lattice computation",
        || {
            let setup = ctx.setup()?;
            let mut ok = true;
            for t in PlaneType::ALL {
                let stored = s
                    .node(&crate::strata::type_ii_label(t))
                    .and_then(|n| n.meets_arrangement);
                ok &= stored == Some(cubic4::stratum_meets_arrangement(setup, t)?.meets);
            }
            Ok((ok, Value::Null))
        },
    );
}

fn oracle_claims(ctx: &Context, c: &mut Claims) {
    c.check(
        "fincke-pohst",
        "Fincke–Pohst agrees with box search on random lattices",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed);
            let mut compared = 0;
            let mut mismatches = Vec::new();
            while compared < ctx.opts.oracle_lattices {
                let r = rng.gen_range(1..=6);
                let l = random_definite(&mut rng, r);
                // lattices whose box is too large for the oracle are redrawn
                let Ok(all) = box_search(&l, &rat(8, 1), 2_000_000) else {
                    continue;
                };
                for n in 1..=8 {
                    let n = rat(n, 1);
                    let exact: Vec<Vec<Int>> =
                        all.iter().filter(|v| l.norm_z(v) == n).cloned().collect();
                    if enumerate::enumerate_norm(&l, &n)? != exact {
                        mismatches.push(json!({ "gram": l.to_json(), "norm": n.to_string() }));
                    }
                }
                compared += 1;
            }
            Ok((
                mismatches.is_empty(),
                json!({ "lattices": compared, "mismatches": mismatches }),
            ))
        },
    );
    c.check("e8", "E8 has 240 roots", || {
        let n = roots_of(&make_standard("E8", None)?, None)?.len();
        Ok((n == 240, json!(n)))
    });
    c.check("a2", "A2 has 6 vectors of norm 2", || {
        let n = enumerate::enumerate_norm(&make_standard("A2", None)?, &rat(2, 1))?.len();
        Ok((n == 6, json!(n)))
    });
    c.check(
        "g2",
        "the A2 summand of Λ_o carries 12 roots (type G2)",
        || {
            let s = ctx.setup()?;
            let k = cubic4::RANK_O;
            let unit = |i: usize| {
                (0..k)
                    .map(|j| Int::from((i == j) as i64))
                    .collect::<Vec<_>>()
            };
            let sub = Sublattice::new(&s.lambda_o, vec![unit(k - 2), unit(k - 1)])?;
            let n = roots_of(&s.lambda_o, Some(&sub))?.len();
            Ok((n == 12, json!(n)))
        },
    );
}

/// The outcome of the whole suite.
#[derive(Debug, Clone)]
pub struct Report {
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn criterion_passed(&self, n: u8) -> bool {
        self.claims
            .iter()
            .filter(|c| c.criterion == n)
            .all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "criteria": (1..=CRITERIA).map(|n| json!({ "criterion": n, "passed": self.criterion_passed(n) })).collect::<Vec<_>>(),
            "claims": self.claims.iter().map(Claim::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Runs the given criteria (all when empty) in order.
pub fn reproduce(opts: Options, only: &[u8]) -> Report {
    let ctx = Context::new(opts);
    let which: Vec<u8> = if only.is_empty() {
        (1..=CRITERIA).collect()
    } else {
        only.to_vec()
    };
    Report {
        claims: which
            .into_iter()
            .flat_map(|n| check_criterion(&ctx, n))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria() {
        let ctx = Context::new(Options {
            samples: 10,
            oracle_lattices: 3,
            ..Options::default()
        });
        for n in [7, 8, 10] {
            let claims = check_criterion(&ctx, n);
            assert!(!claims.is_empty());
            assert!(
                claims.iter().all(|c| c.passed),
                "{:?}",
                claims.iter().find(|c| !c.passed)
            );
        }
        assert!(!check_criterion(&ctx, 11)[0].passed);
    }
}
