//! Self-checks comparing every procedure with a direct oracle.
//!
//! A suite runs at one `(n, q)` and returns named [`Check`]s. Failures carry
//! the first offending pair (or set) in their detail.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::antiflags::{AntiFlags, RelationKind};
use crate::error::Error;
use crate::group::{self, GroupKind, SemilinearMap};
use crate::hyperbolic::{self, ParallelType, QPoint};
use crate::recovery::{self, Common1Kind, PairLabeling, RecoveryError};
use crate::relgraphs::{Linearity, RelGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    /// Passes when `first_failure` is `None`.
    fn from_failure(name: impl Into<String>, first_failure: Option<String>, ok_detail: impl Into<String>) -> Self {
        match first_failure {
            None => Check::new(name, true, ok_detail),
            Some(f) => Check::new(name, false, f),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status}  {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Counts,
    Recovery,
    Hyperbolic,
    Orbits,
    Involutions,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Counts, Suite::Recovery, Suite::Hyperbolic, Suite::Orbits, Suite::Involutions];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Counts => "counts",
            Suite::Recovery => "recovery",
            Suite::Hyperbolic => "hyperbolic",
            Suite::Orbits => "orbits",
            Suite::Involutions => "involutions",
        }
    }

    /// Configurations run when none is given.
    pub fn default_configs(self) -> &'static [(usize, u32)] {
        match self {
            Suite::Counts | Suite::Recovery => &[(3, 2), (3, 3), (4, 2), (3, 4)],
            Suite::Hyperbolic => &[(3, 2), (4, 2)],
            Suite::Orbits => &[(3, 2), (3, 3)],
            Suite::Involutions => &[(3, 3)],
        }
    }

    /// Whether the suite has anything to check at `(n, q)`.
    pub fn applies(self, n: usize, q: u32) -> bool {
        match self {
            Suite::Hyperbolic => q == 2 && (3..=hyperbolic::MAX_N).contains(&n),
            Suite::Involutions => q % 2 == 1,
            _ => true,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Seed for sampled checks and random group elements.
    pub seed: u64,
    /// Number of sampled coclique pairs where exhaustive checks are too slow.
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, samples: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("suite {suite} does not apply at n = {n}, q = {q}")]
    NotApplicable { suite: Suite, n: usize, q: u32 },
    #[error(transparent)]
    Geometry(#[from] Error),
}

/// Runs `suite` at `(n, q)`.
pub fn run(suite: Suite, n: usize, q: u32, opts: &Options) -> Result<Vec<Check>, VerifyError> {
    if !suite.applies(n, q) {
        return Err(VerifyError::NotApplicable { suite, n, q });
    }
    let ctx = Context::new(n, q)?;
    Ok(match suite {
        Suite::Counts => counts(&ctx),
        Suite::Recovery => recovery(&ctx),
        Suite::Hyperbolic => hyperbolic(&ctx, opts)?,
        Suite::Orbits => orbits(&ctx, opts),
        Suite::Involutions => involutions(&ctx)?,
    })
}

/// Anti-flags, the four graphs and the ground truth at one configuration.
pub struct Context {
    pub n: usize,
    pub q: u32,
    pub flags: AntiFlags,
    pub graphs: [RelGraph; 4],
    pub truth: PairLabeling,
}

impl Context {
    pub fn new(n: usize, q: u32) -> Result<Self, Error> {
        let flags = AntiFlags::enumerate(n, q)?;
        let graphs = RelationKind::RELATIONS.map(|k| RelGraph::build(k, &flags).expect("relations build"));
        let truth = PairLabeling::ground_truth(&flags);
        Ok(Context { n, q, flags, graphs, truth })
    }

    pub fn graph(&self, i: usize) -> &RelGraph {
        &self.graphs[i - 1]
    }

    fn tag(&self) -> String {
        format!("(n={}, q={})", self.n, self.q)
    }

    /// First pair `(a, b)`, `a < b`, for which `bad` returns a message.
    fn first_bad_pair<F>(&self, bad: F) -> Option<String>
    where
        F: Fn(usize, usize, RelationKind) -> Option<String> + Sync,
    {
        let order = self.flags.len();
        (0..order)
            .into_par_iter()
            .filter_map(|a| (a + 1..order).find_map(|b| bad(a, b, self.truth.get(a, b)).map(|m| (a, m))))
            .min_by_key(|(a, _)| *a)
            .map(|(_, m)| m)
    }
}

fn labeling_check(name: String, result: Result<PairLabeling, RecoveryError>, truth: &PairLabeling) -> Check {
    match result {
        Err(e) => Check::new(name, false, e.to_string()),
        Ok(labels) => {
            let bad = labels.mismatches(truth);
            match bad.first() {
                None => Check::new(name, true, format!("{} pairs agree with ground truth", labels.pairs().count())),
                Some(m) => Check::new(name, false, format!("{} mismatches, first {m}", bad.len())),
            }
        }
    }
}

fn counts(ctx: &Context) -> Vec<Check> {
    let tag = ctx.tag();
    let mut checks = Vec::new();

    let partition = ctx.first_bad_pair(|a, b, kind| {
        let hits: Vec<usize> = (1..=4).filter(|&i| ctx.graph(i).is_adjacent(a, b)).collect();
        (hits.len() != 1 || RelationKind::from_index(hits[0] as u8) != Some(kind))
            .then(|| format!("pair ({a}, {b}) is {kind} but adjacent in graphs {hits:?}"))
    });
    let edges: Vec<String> = (1..=4).map(|i| format!("R{i}={}", ctx.graph(i).edge_count())).collect();
    checks.push(Check::from_failure(format!("partition {tag}"), partition, edges.join(" ")));

    let g3 = ctx.graph(3);
    let common3 = ctx.first_bad_pair(|a, b, kind| {
        let expected = match kind {
            RelationKind::R1 => 1,
            RelationKind::R2 => 0,
            RelationKind::R4 => 2,
            _ => return None,
        };
        let found = g3.common_count(a, b);
        (found != expected).then(|| format!("{kind} pair ({a}, {b}) has {found} common Γ3-neighbours"))
    });
    checks.push(Check::from_failure(format!("common Γ3-neighbours {tag}"), common3, "R1→1, R2→0, R4→2"));

    let g1 = ctx.graph(1);
    let values: Vec<(Common1Kind, u64)> = Common1Kind::applicable(ctx.q)
        .iter()
        .map(|&k| (k, recovery::formula_common1(k, ctx.q, ctx.n).expect("applicable")))
        .collect();
    let common1 = ctx.first_bad_pair(|a, b, _| {
        let kind = recovery::common1_kind(&ctx.flags, a, b)?;
        let expected = values.iter().find(|(k, _)| *k == kind).expect("kind occurs only when applicable").1;
        let found = g1.common_count(a, b) as u64;
        (found != expected).then(|| format!("{kind} pair ({a}, {b}): {found} common Γ1-neighbours, formula {expected}"))
    });
    let shown: Vec<String> = values.iter().map(|(k, v)| format!("{k}={v}")).collect();
    checks.push(Check::from_failure(format!("common Γ1-neighbours {tag}"), common1, shown.join(" ")));

    let distinct = recovery::distinct_formula_values(ctx.q, ctx.n);
    checks.push(if ctx.q >= 3 {
        match distinct {
            Ok(_) => Check::new(format!("formula values distinct {tag}"), true, shown.join(" ")),
            Err(e) => Check::new(format!("formula values distinct {tag}"), false, e.to_string()),
        }
    } else {
        let refused = matches!(recovery::recover_from_1_counts(g1), Err(RecoveryError::FormulaCollision { .. }));
        let coincide = matches!(distinct, Err(RecoveryError::FormulaCollision { .. }));
        Check::new(
            format!("formula values coincide {tag}"),
            refused && coincide,
            format!("{}; count-based recovery from Γ1 refuses: {refused}", shown.join(" ")),
        )
    });

    checks.push(outside_three(ctx));
    checks
}

fn outside_three(ctx: &Context) -> Check {
    let space = ctx.flags.space();
    let m = space.num_points();
    let triples: Vec<(usize, usize, usize)> =
        (0..m).flat_map(|a| (a + 1..m).flat_map(move |b| (b + 1..m).map(move |c| (a, b, c)))).collect();
    let results: Vec<_> = triples
        .par_iter()
        .map(|&(a, b, c)| (a, b, c, space.count_outside_three(a, b, c).expect("distinct hyperplanes")))
        .collect();
    let mut generic = BTreeSet::new();
    let mut pencil = BTreeSet::new();
    let mut failure = None;
    for (a, b, c, r) in &results {
        if r.pencil {
            pencil.insert(r.enumerated);
        } else {
            generic.insert(r.enumerated);
        }
        if r.enumerated != r.predicted && failure.is_none() {
            failure =
                Some(format!("hyperplanes ({a}, {b}, {c}): {} points outside, formula {}", r.enumerated, r.predicted));
        }
    }
    Check::from_failure(
        format!("points outside three hyperplanes {}", ctx.tag()),
        failure,
        format!("{} triples; generic {:?}, pencil {:?}", results.len(), generic, pencil),
    )
}

fn recovery(ctx: &Context) -> Vec<Check> {
    let tag = ctx.tag();
    let (n, q) = (ctx.n, ctx.q);
    let mut checks = vec![
        labeling_check(format!("recover from Γ3 {tag}"), recovery::recover_from_3(ctx.graph(3)), &ctx.truth),
    ];

    let g2 = ctx.graph(2);
    let mackey = ctx.first_bad_pair(|a, b, kind| {
        let says = recovery::mackey_3_from_2(a, b, g2);
        (says != (kind == RelationKind::R3)).then(|| format!("pair ({a}, {b}) is {kind}, Mackey criterion says {says}"))
    });
    checks.push(Check::from_failure(format!("Mackey criterion {tag}"), mackey, "double perp test = R3 on every pair"));
    checks.push(labeling_check(format!("recover from Γ2 {tag}"), recovery::recover_from_2(g2), &ctx.truth));

    let g4 = ctx.graph(4);
    if q >= 3 || n >= 4 {
        checks.push(labeling_check(
            format!("poset classification from Γ4 {tag}"),
            recovery::recover_from_4(g4),
            &ctx.truth,
        ));
        let double_perp = ctx.first_bad_pair(|a, b, kind| {
            (kind != RelationKind::R4 && !recovery::double_perp_identity(g4, a, b))
                .then(|| format!("{kind} pair ({a}, {b}): double Γ4-perp is not the pair"))
        });
        checks.push(Check::from_failure(
            format!("double Γ4-perp identity {tag}"),
            double_perp,
            "({A1,A2}^~4)^~4 = {A1,A2} for every non-4-adjacent pair",
        ));
        let cross = ctx.first_bad_pair(|a, b, kind| {
            (kind != RelationKind::R4 && !recovery::double_perp_with_cross(&ctx.flags, g4, a, b))
                .then(|| format!("{kind} pair ({a}, {b}): double Γ4-perp is not the pair plus cross anti-flags"))
        });
        checks.push(Check::from_failure(
            format!("double Γ4-perp is the pair plus cross anti-flags {tag}"),
            cross,
            "holds for every non-4-adjacent pair",
        ));
        let witness = ctx.first_bad_pair(|a, b, kind| {
            (kind != RelationKind::R4 && !recovery::witness_property(&ctx.flags, g4, a, b))
                .then(|| format!("{kind} pair ({a}, {b}) lacks a Γ4 witness"))
        });
        checks.push(Check::from_failure(
            format!("Γ4 witnesses for points and hyperplanes {tag}"),
            witness,
            "every other point and hyperplane is covered",
        ));
    } else {
        let special = ctx.first_bad_pair(|a, b, kind| {
            if kind == RelationKind::R4 {
                return None;
            }
            let size = g4.common_count(a, b);
            let ok = if kind == RelationKind::R2 { size == 1 } else { size == 0 };
            (!ok).then(|| format!("{kind} pair ({a}, {b}) has {size} common Γ4-neighbours"))
        });
        checks.push(Check::from_failure(
            format!("common Γ4-neighbours {tag}"),
            special,
            "nonempty iff R2, and then a single anti-flag",
        ));
        checks.push(labeling_check(
            format!("special recovery from Γ4 {tag}"),
            recovery::recover_from_4_special(g4),
            &ctx.truth,
        ));
    }

    let g1 = ctx.graph(1);
    if q >= 3 {
        checks.push(labeling_check(
            format!("recover from Γ1 by counts {tag}"),
            recovery::recover_from_1_counts(g1),
            &ctx.truth,
        ));
    } else {
        let result = recovery::recover_from_1_counts(g1);
        let refused = matches!(result, Err(RecoveryError::FormulaCollision { .. }));
        let detail = match result {
            Err(e) => e.to_string(),
            Ok(_) => "returned a labeling".into(),
        };
        checks.push(Check::new(format!("recover from Γ1 by counts refuses {tag}"), refused, detail));
    }
    if q >= 4 {
        checks.extend(cocliques(ctx));
    }
    checks
}

/// Linear and dually linear 4-cocliques built from the geometry: a
/// hyperplane with four points of a line outside it, and dually.
pub fn geometric_linear_cocliques(flags: &AntiFlags) -> BTreeSet<[usize; 4]> {
    let space = flags.space();
    let m = space.num_points();
    let mut out = BTreeSet::new();
    let mut add = |ids: Vec<usize>| {
        for (i, &a) in ids.iter().enumerate() {
            for (j, &b) in ids.iter().enumerate().skip(i + 1) {
                for (k, &c) in ids.iter().enumerate().skip(j + 1) {
                    for &d in &ids[k + 1..] {
                        let mut s = [a, b, c, d];
                        s.sort_unstable();
                        out.insert(s);
                    }
                }
            }
        }
    };
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut dual_lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..m {
        for b in a + 1..m {
            let mut l = space.line_through(a, b).expect("distinct").points;
            l.sort_unstable();
            lines.insert(l);
            let mut d = space.dual_line_through(a, b).expect("distinct").points;
            d.sort_unstable();
            dual_lines.insert(d);
        }
    }
    for h in 0..m {
        for l in &lines {
            let off: Vec<usize> = l.iter().copied().filter(|&p| !space.incident(p, h)).collect();
            if off.len() < l.len() - 1 {
                continue;
            }
            add(off.iter().map(|&p| flags.id_of(p, h).expect("off the hyperplane")).collect());
        }
    }
    for p in 0..m {
        for d in &dual_lines {
            let off: Vec<usize> = d.iter().copied().filter(|&h| !space.incident(p, h)).collect();
            if off.len() < d.len() - 1 {
                continue;
            }
            add(off.iter().map(|&h| flags.id_of(p, h).expect("off the point")).collect());
        }
    }
    out
}

fn cocliques(ctx: &Context) -> Vec<Check> {
    let tag = ctx.tag();
    let g1 = ctx.graph(1);
    let mut checks = Vec::new();
    let found: BTreeSet<[usize; 4]> = match g1.property_l_cocliques() {
        Ok(v) => v.into_iter().collect(),
        Err(e) => return vec![Check::new(format!("(L) cocliques {tag}"), false, e.to_string())],
    };
    let expected = geometric_linear_cocliques(&ctx.flags);
    let typed = found.iter().find(|c| linearity(&ctx.flags, &c[..]) == Linearity::Neither);
    let detail = format!("{} cocliques with (L), {} linear or dually linear", found.len(), expected.len());
    let failure = if let Some(c) = found.symmetric_difference(&expected).next() {
        Some(format!("{detail}; first difference {c:?}"))
    } else {
        typed.map(|c| format!("{detail}; {c:?} is neither linear nor dually linear"))
    };
    checks.push(Check::from_failure(format!("(L) cocliques are the linear ones {tag}"), failure, detail));

    let covered = recovery::recover_3_from_1_cocliques(g1);
    checks.push(match covered {
        Err(e) => Check::new(format!("pairs in (L) cocliques are R3 {tag}"), false, e.to_string()),
        Ok(pairs) => {
            let r3: Vec<(usize, usize)> =
                ctx.truth.pairs().filter(|&(_, _, k)| k == RelationKind::R3).map(|(a, b, _)| (a, b)).collect();
            let ok = pairs == r3;
            let detail = format!("{} covered pairs, {} R3 pairs", pairs.len(), r3.len());
            Check::new(format!("pairs in (L) cocliques are R3 {tag}"), ok, detail)
        }
    });
    checks.push(labeling_check(
        format!("recover from Γ1 by cocliques {tag}"),
        recovery::recover_from_1_cocliques(g1),
        &ctx.truth,
    ));
    checks
}

fn linearity(flags: &AntiFlags, c: &[usize]) -> Linearity {
    crate::relgraphs::is_linear_or_dually_linear(flags, c).unwrap_or(Linearity::Neither)
}

fn involutions(ctx: &Context) -> Result<Vec<Check>, Error> {
    let tag = ctx.tag();
    ctx.flags.involution_of(0)?;
    let bad = ctx.first_bad_pair(|a, b, kind| {
        let r = ctx.flags.involution_relation_checks(a, b).expect("odd characteristic");
        let ok = r.commute == (kind == RelationKind::R2) && r.transvection == (kind == RelationKind::R3);
        (!ok).then(|| format!("{kind} pair ({a}, {b}): commute {}, transvection {}", r.commute, r.transvection))
    });
    Ok(vec![Check::from_failure(
        format!("involutions {tag}"),
        bad,
        "commuting iff R2, product a transvection iff R3",
    )])
}

fn orbits(ctx: &Context, opts: &Options) -> Vec<Check> {
    let tag = ctx.tag();
    let flags = &ctx.flags;
    let space = flags.space();
    let mut checks = Vec::new();

    let linear = group::gl_generators(space, GroupKind::Linear).permutations(flags);
    let orbits = group::vertex_orbits(flags.len(), &linear);
    checks.push(Check::new(
        format!("GL transitive on anti-flags {tag}"),
        orbits.len() == 1,
        format!("orbit sizes {:?}", orbits.iter().map(Vec::len).collect::<Vec<_>>()),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let randoms: Vec<SemilinearMap> =
        (0..10).map(|_| SemilinearMap::random(ctx.n, space.field(), &mut rng)).collect();
    let full = group::gl_generators(space, GroupKind::WithDuality).permutations(flags);
    let mut perms: Vec<Vec<u32>> = randoms.iter().map(|m| m.permutation(flags)).collect();
    perms.extend(full.iter().cloned());
    let preserved = ctx.first_bad_pair(|a, b, kind| {
        perms.iter().enumerate().find_map(|(i, p)| {
            let image = flags.classify(p[a] as usize, p[b] as usize);
            (image != kind).then(|| format!("map {i} sends {kind} pair ({a}, {b}) to {image}"))
        })
    });
    checks.push(Check::from_failure(
        format!("relations preserved {tag}"),
        preserved,
        format!("{} maps (10 random semilinear, generators, duality)", perms.len()),
    ));

    let semilinear = group::gl_generators(space, GroupKind::Semilinear).permutations(flags);
    for i in 1..=4 {
        let gens = if i == 3 || i == 4 { &full } else { &semilinear };
        let check = match group::edge_orbits(ctx.graph(i), gens) {
            Err(e) => Check::new(format!("Γ{i} edge orbits {tag}"), false, e.to_string()),
            Ok(o) => {
                let ok = if i == 4 && ctx.q >= 3 { o.count() >= 2 } else { o.count() == 1 };
                let want = if i == 4 && ctx.q >= 3 { "at least 2" } else { "1" };
                Check::new(
                    format!("Γ{i} edge orbits {tag}"),
                    ok,
                    format!("{} orbit(s) of sizes {:?}, expected {want}", o.count(), o.sizes),
                )
            }
        };
        checks.push(check);
    }

    let g3 = ctx.graph(3);
    let cliques = g3.maximal_cliques();
    let pencil_type = |c: &[usize]| -> Option<bool> {
        let f0 = flags.get(c[0]);
        if c.iter().all(|&a| flags.get(a).point == f0.point) {
            Some(true)
        } else if c.iter().all(|&a| flags.get(a).hyperplane == f0.hyperplane) {
            Some(false)
        } else {
            None
        }
    };
    let swapped = cliques.iter().find_map(|c| {
        let image: Vec<usize> = c.iter().map(|&a| flags.duality_transform(a)).collect();
        match (pencil_type(c), pencil_type(&image)) {
            (Some(x), Some(y)) if x != y => None,
            _ => Some(format!("maximal clique {c:?} is not sent to a pencil of the other type")),
        }
    });
    checks.push(Check::from_failure(
        format!("duality swaps pencil types {tag}"),
        swapped,
        format!("{} maximal cliques of Γ3", cliques.len()),
    ));
    checks
}

fn hyperbolic(ctx: &Context, opts: &Options) -> Result<Vec<Check>, Error> {
    let tag = ctx.tag();
    let n = ctx.n;
    let flags = &ctx.flags;
    let g1 = ctx.graph(1);
    let mut checks = Vec::new();

    let (singular, nonsingular) = hyperbolic::partition_points(n)?;
    checks.push(Check::new(
        format!("singular / non-singular split {tag}"),
        nonsingular.len() == flags.len() && singular.len() + nonsingular.len() == (1 << (2 * n)) - 1,
        format!("{} singular, {} non-singular, {} anti-flags", singular.len(), nonsingular.len(), flags.len()),
    ));

    let vecs = hyperbolic::vertex_vectors(flags)?;
    let mut images = vecs.clone();
    images.sort_unstable();
    let round_trip = nonsingular
        .iter()
        .find(|&&v| {
            let id = hyperbolic::f_map(flags, QPoint::new(v, n)).expect("non-singular");
            vecs[id] != v
        })
        .map(|v| format!("vector {v:#b} does not round-trip"));
    let failure = if images != nonsingular { Some("f^-1 is not onto the non-singular points".into()) } else { round_trip };
    checks.push(Check::from_failure(format!("f is a bijection {tag}"), failure, format!("{} points", vecs.len())));

    let agreement = ctx.first_bad_pair(|a, b, kind| {
        let third = hyperbolic::q_value(vecs[a] ^ vecs[b], n);
        let non_orth = hyperbolic::f_bilinear(vecs[a], vecs[b], n);
        let adj = g1.is_adjacent(a, b);
        (third != (kind == RelationKind::R1) || non_orth != adj)
            .then(|| format!("pair ({a}, {b}): {kind}, third point non-singular {third}, F = {non_orth}"))
    });
    checks.push(Check::from_failure(
        format!("third point and F against 1-adjacency {tag}"),
        agreement,
        "non-singular third point iff R1 iff non-orthogonal",
    ));

    let obs = hyperbolic::orthogonality_observations(n)?;
    checks.push(Check::new(
        format!("orthogonality observations {tag}"),
        obs.iter().all(|&b| b),
        format!("singular pairs {}, non-singular pairs {}, mixed pairs {}", obs[0], obs[1], obs[2]),
    ));

    let tns = hyperbolic::tns_lines_from_graph(g1)?;
    let mut recovered = tns.lines().to_vec();
    recovered.sort_unstable();
    let geometric = hyperbolic::geometric_tns_lines(&vecs, n);
    checks.push(Check::new(
        format!("(NS) triangles are the totally non-singular lines {tag}"),
        recovered == geometric,
        format!("{} from Γ1, {} from the quadric", recovered.len(), geometric.len()),
    ));
    let not_maximal = recovered.iter().find(|l| !g1.common_related(&l[..]).is_clear());
    checks.push(Check::from_failure(
        format!("totally non-singular lines are maximal cliques {tag}"),
        not_maximal.map(|l| format!("line {l:?} extends")),
        format!("{} lines", recovered.len()),
    ));

    let cocliques = hyperbolic::two_cocliques(g1);
    let adj = hyperbolic::first_type_adjacency(g1, &tns, &cocliques);
    let pairs = coclique_pairs(&cocliques, &vecs, opts);
    let exhaustive = pairs.len() == cocliques.len() * (cocliques.len().saturating_sub(1)) / 2;
    let scope = if exhaustive { "all" } else { "sampled" };

    let first_bad = pairs.par_iter().find_map_first(|&(i, j)| {
        let (c1, c2) = (cocliques[i], cocliques[j]);
        let literal = hyperbolic::parallel_first_type(c1, c2, g1, &tns);
        let generated = adj[i].binary_search(&(j as u32)).is_ok();
        let geo = hyperbolic::geometric_parallel_type(&vecs, n, c1, c2) == Some(ParallelType::First);
        (literal != geo || generated != geo)
            .then(|| format!("cocliques {c1:?}, {c2:?}: test {literal}, generated {generated}, geometry {geo}"))
    });
    checks.push(Check::from_failure(
        format!("first-type parallelism {tag}"),
        first_bad,
        format!("{scope} {} coclique pairs agree with the quadric", pairs.len()),
    ));

    let second: Vec<(usize, usize, bool, bool)> = pairs
        .par_iter()
        .filter(|&&(i, j)| adj[i].binary_search(&(j as u32)).is_err())
        .map(|&(i, j)| {
            let (c1, c2) = (cocliques[i], cocliques[j]);
            let test = hyperbolic::parallel_second_type(c1, c2, g1, &tns);
            let geo = hyperbolic::geometric_parallel_type(&vecs, n, c1, c2) == Some(ParallelType::Second);
            (i, j, test, geo)
        })
        .collect();
    let disagreements: Vec<_> = second.iter().filter(|(_, _, t, g)| t != g).collect();
    let geo_second = second.iter().filter(|(_, _, _, g)| *g).count();
    checks.push(Check::from_failure(
        format!("second-type parallelism {tag}"),
        disagreements.first().map(|&&(i, j, t, g)| {
            format!(
                "{} of {} pairs disagree ({geo_second} second-type in the quadric); first {:?}, {:?}: test {t}, geometry {g}",
                disagreements.len(),
                second.len(),
                cocliques[i],
                cocliques[j]
            )
        }),
        format!("{scope} {} pairs agree with the quadric ({geo_second} second-type)", second.len()),
    ));

    let geom = hyperbolic::reconstruct_polar_space(g1)?;
    let check_name = format!("polar space reconstruction {tag}");
    checks.push(match hyperbolic::compare_with_quadric(&geom, flags) {
        Err(e) => Check::new(check_name, false, e.to_string()),
        Ok(cmp) => {
            let ok = geom.classes.len() == singular.len() && cmp.bijective && cmp.lines_match;
            Check::new(
                check_name,
                ok,
                format!(
                    "{} classes for {} singular points, bijective {}; {} lines for {} singular lines, match {}",
                    geom.classes.len(),
                    cmp.singular_points,
                    cmp.bijective,
                    geom.lines.len(),
                    cmp.singular_lines,
                    cmp.lines_match
                ),
            )
        }
    });

    let mut by_point: HashMap<u32, BTreeSet<usize>> = HashMap::new();
    for c in &cocliques {
        by_point.entry(vecs[c[0]] ^ vecs[c[1]]).or_default().insert(geom.class_of(c[0], c[1]).expect("indexed"));
    }
    let split = by_point.iter().filter(|(_, classes)| classes.len() > 1).count();
    checks.push(Check::new(
        format!("one class per singular point {tag}"),
        split == 0 && by_point.len() == singular.len(),
        format!("{} singular points reached, {split} split across several classes", by_point.len()),
    ));
    Ok(checks)
}

/// Coclique index pairs `(i, j)`, `i < j`: all of them when there are at
/// most `opts.samples`, else a seeded sample in which about half the pairs
/// share their third point (so parallel pairs are well represented).
fn coclique_pairs(cocliques: &[[usize; 2]], vecs: &[u32], opts: &Options) -> Vec<(usize, usize)> {
    let m = cocliques.len();
    if m * m.saturating_sub(1) / 2 <= opts.samples.max(25_000) {
        return (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    }
    let third = |c: &[usize; 2]| vecs[c[0]] ^ vecs[c[1]];
    let mut by_point: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, c) in cocliques.iter().enumerate() {
        by_point.entry(third(c)).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seen = BTreeSet::new();
    while seen.len() < opts.samples {
        let i = rng.gen_range(0..m);
        let j = if rng.gen_bool(0.5) {
            *by_point[&third(&cocliques[i])].choose(&mut rng).expect("nonempty")
        } else {
            rng.gen_range(0..m)
        };
        if i != j {
            seen.insert((i.min(j), i.max(j)));
        }
    }
    seen.into_iter().collect()
}
