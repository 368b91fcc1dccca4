//! Recovering the full pair classification from a single relation graph.
//!
//! Each entry point sees only one graph Γi (plus the parameters `n`, `q`)
//! and returns a [`PairLabeling`] of every unordered pair of distinct
//! anti-flags. The ground truth to compare against is
//! [`PairLabeling::ground_truth`].

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::antiflags::{AntiFlags, RelationKind};
use crate::error::Error;
use crate::relgraphs::RelGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecoveryError {
    #[error("pair ({a}, {b}) has {count} common Γ3-neighbours, expected 0, 1 or 2")]
    CommonCountOutOfRange { a: usize, b: usize, count: usize },
    #[error("formula values coincide at q = {q}, n = {n}: {}", fmt_values(.values))]
    FormulaCollision { q: u32, n: usize, values: Vec<(Common1Kind, u64)> },
    #[error("pair ({a}, {b}) has {count} common Γ1-neighbours, matching no formula")]
    UnmatchedCount { a: usize, b: usize, count: usize },
    #[error("the Γ4-family member of pair ({a}, {b}) is neither minimal nor maximal")]
    PosetAnomaly { a: usize, b: usize },
    #[error("recovered Γ3 disagrees with the input graph on pair ({a}, {b})")]
    Inconsistent { a: usize, b: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Geometry(#[from] Error),
}

fn fmt_values(values: &[(Common1Kind, u64)]) -> String {
    values.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

pub type Result<T, E = RecoveryError> = std::result::Result<T, E>;

#[inline]
fn pair_index(order: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < order);
    a * order - a * (a + 1) / 2 + (b - a - 1)
}

/// A relation label for every unordered pair of distinct anti-flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairLabeling {
    order: usize,
    labels: Vec<RelationKind>,
}

/// A pair on which two labelings disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub a: usize,
    pub b: usize,
    pub expected: RelationKind,
    pub found: RelationKind,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair ({}, {}): expected {}, found {}", self.a, self.b, self.expected, self.found)
    }
}

impl PairLabeling {
    /// Labels every pair with `label(a, b)`, `a < b`, rows in parallel.
    pub fn try_from_fn<F>(order: usize, label: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<RelationKind> + Sync,
    {
        let rows: Vec<Vec<RelationKind>> = (0..order)
            .into_par_iter()
            .map(|a| (a + 1..order).map(|b| label(a, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(PairLabeling { order, labels: rows.concat() })
    }

    /// The direct geometric classification.
    pub fn ground_truth(flags: &AntiFlags) -> Self {
        Self::try_from_fn(flags.len(), |a, b| Ok(flags.classify(a, b))).expect("infallible")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, a: usize, b: usize) -> RelationKind {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => RelationKind::Eq,
            std::cmp::Ordering::Less => self.labels[pair_index(self.order, a, b)],
            std::cmp::Ordering::Greater => self.labels[pair_index(self.order, b, a)],
        }
    }

    /// `(a, b, label)` with `a < b` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, RelationKind)> + '_ {
        let n = self.order;
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b, self.get(a, b))))
    }

    pub fn count(&self, kind: RelationKind) -> usize {
        self.labels.iter().filter(|&&k| k == kind).count()
    }

    /// Pairs where `self` differs from `expected`.
    pub fn mismatches(&self, expected: &PairLabeling) -> Vec<Mismatch> {
        assert_eq!(self.order, expected.order, "labelings over different anti-flag sets");
        self.pairs()
            .filter_map(|(a, b, found)| {
                let exp = expected.get(a, b);
                (exp != found).then_some(Mismatch { a, b, expected: exp, found })
            })
            .collect()
    }

    /// The graph of pairs labeled `kind`.
    pub fn graph(&self, kind: RelationKind, n: usize, q: u32) -> RelGraph {
        let mut rows = vec![FixedBitSet::with_capacity(self.order); self.order];
        for (a, b, k) in self.pairs() {
            if k == kind {
                rows[a].insert(b);
                rows[b].insert(a);
            }
        }
        RelGraph::from_rows(kind, n, q, rows)
    }
}

fn require(graph: &RelGraph, relation: RelationKind) -> Result<()> {
    if graph.relation() == relation {
        Ok(())
    } else {
        Err(Error::WrongGraph { expected: relation, found: graph.relation() }.into())
    }
}

/// Labels from Γ3: adjacent pairs are R3; otherwise `|{A1, A2}^~3|` is 1
/// for R1, 0 for R2 and 2 for R4.
pub fn recover_from_3(graph3: &RelGraph) -> Result<PairLabeling> {
    require(graph3, RelationKind::R3)?;
    labels_from_gamma3(graph3)
}

fn labels_from_gamma3(graph3: &RelGraph) -> Result<PairLabeling> {
    PairLabeling::try_from_fn(graph3.order(), |a, b| {
        if graph3.is_adjacent(a, b) {
            return Ok(RelationKind::R3);
        }
        match graph3.common_count(a, b) {
            0 => Ok(RelationKind::R2),
            1 => Ok(RelationKind::R1),
            2 => Ok(RelationKind::R4),
            count => Err(RecoveryError::CommonCountOutOfRange { a, b, count }),
        }
    })
}

/// `({a, b}^~2)^~2`.
fn double_perp(graph: &RelGraph, a: usize, b: usize) -> FixedBitSet {
    graph.common_related_set(&graph.common_related(&[a, b]))
}

/// Mackey's criterion: distinct `a`, `b` are 3-adjacent iff every pair of
/// distinct anti-flags in `D = ({a, b}^~2)^~2` has the same double
/// perp `D`.
pub fn mackey_3_from_2(a: usize, b: usize, graph2: &RelGraph) -> bool {
    let d = double_perp(graph2, a, b);
    let members: Vec<usize> = d.ones().collect();
    members
        .iter()
        .enumerate()
        .all(|(i, &x)| members[i + 1..].iter().all(|&y| double_perp(graph2, x, y) == d))
}

/// Labels from Γ2: R2 from adjacency, R3 by Mackey's criterion, then R1 and
/// R4 from common Γ3-neighbour counts on the recovered Γ3.
pub fn recover_from_2(graph2: &RelGraph) -> Result<PairLabeling> {
    require(graph2, RelationKind::R2)?;
    labels_from_gamma2(graph2)
}

fn labels_from_gamma2(graph2: &RelGraph) -> Result<PairLabeling> {
    let partial = PairLabeling::try_from_fn(graph2.order(), |a, b| {
        Ok(if graph2.is_adjacent(a, b) {
            RelationKind::R2
        } else if mackey_3_from_2(a, b, graph2) {
            RelationKind::R3
        } else {
            RelationKind::Eq
        })
    })?;
    let graph3 = partial.graph(RelationKind::R3, graph2.dim(), graph2.q());
    let labels = labels_from_gamma3(&graph3)?;
    if let Some((a, b, _)) =
        labels.pairs().find(|&(a, b, k)| (k == RelationKind::R2) != graph2.is_adjacent(a, b))
    {
        return Err(RecoveryError::Inconsistent { a, b });
    }
    Ok(labels)
}

/// The family of sets `{A1, A2}^~4` over all distinct non-4-adjacent pairs,
/// deduplicated, with minimality and maximality under inclusion.
#[derive(Debug, Clone)]
pub struct FamilyX {
    order: usize,
    members: Vec<FixedBitSet>,
    /// Member id per pair index, `u32::MAX` for 4-adjacent pairs.
    member_of_pair: Vec<u32>,
    minimal: Vec<bool>,
    maximal: Vec<bool>,
}

impl FamilyX {
    pub fn build(graph4: &RelGraph) -> Result<Self> {
        require(graph4, RelationKind::R4)?;
        let order = graph4.order();
        let sets: Vec<Option<FixedBitSet>> = (0..order)
            .into_par_iter()
            .flat_map_iter(|a| {
                (a + 1..order).map(move |b| (!graph4.is_adjacent(a, b)).then(|| graph4.common_related(&[a, b])))
            })
            .collect();

        let mut ids: HashMap<FixedBitSet, u32> = HashMap::new();
        let mut members = Vec::new();
        let member_of_pair = sets
            .into_iter()
            .map(|s| match s {
                None => u32::MAX,
                Some(s) => *ids.entry(s).or_insert_with_key(|s| {
                    members.push(s.clone());
                    members.len() as u32 - 1
                }),
            })
            .collect();

        let (minimal, maximal) = poset_extremes(order, &members);
        Ok(FamilyX { order, members, member_of_pair, minimal, maximal })
    }

    pub fn members(&self) -> &[FixedBitSet] {
        &self.members
    }

    /// The member `{a, b}^~4` for a non-4-adjacent pair.
    pub fn member_of(&self, a: usize, b: usize) -> Option<&FixedBitSet> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        match self.member_of_pair[pair_index(self.order, a, b)] {
            u32::MAX => None,
            id => Some(&self.members[id as usize]),
        }
    }

    /// `(minimal, maximal)` for the member of a non-4-adjacent pair.
    pub fn extremes(&self, a: usize, b: usize) -> Option<(bool, bool)> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        match self.member_of_pair[pair_index(self.order, a, b)] {
            u32::MAX => None,
            id => Some((self.minimal[id as usize], self.maximal[id as usize])),
        }
    }
}

/// Minimal and maximal flags of a family of distinct sets under inclusion.
/// Strict supersets of `X` must contain the element of `X` that lies in the
/// fewest members, so only those members are tested.
fn poset_extremes(universe: usize, members: &[FixedBitSet]) -> (Vec<bool>, Vec<bool>) {
    let m = members.len();
    let mut containing: Vec<Vec<u32>> = vec![Vec::new(); universe];
    for (id, s) in members.iter().enumerate() {
        for e in s.ones() {
            containing[e].push(id as u32);
        }
    }
    let supersets: Vec<Vec<u32>> = members
        .par_iter()
        .enumerate()
        .map(|(x, set)| match set.ones().min_by_key(|&e| containing[e].len()) {
            None => (0..m as u32).filter(|&y| y as usize != x).collect(),
            Some(e) => containing[e]
                .iter()
                .copied()
                .filter(|&y| y as usize != x && set.is_subset(&members[y as usize]))
                .collect(),
        })
        .collect();

    let mut minimal = vec![true; m];
    let mut maximal = vec![true; m];
    for (x, sup) in supersets.iter().enumerate() {
        if !sup.is_empty() {
            maximal[x] = false;
        }
        for &y in sup {
            minimal[y as usize] = false;
        }
    }
    (minimal, maximal)
}

/// Labels from Γ4 when `q >= 3` or `n >= 4`: minimal and non-maximal
/// members come from R1 pairs, minimal and maximal from R2, non-minimal and
/// maximal from R3.
pub fn recover_from_4(graph4: &RelGraph) -> Result<PairLabeling> {
    require(graph4, RelationKind::R4)?;
    if graph4.q() < 3 && graph4.dim() < 4 {
        return Err(RecoveryError::Precondition("the poset method needs q >= 3 or n >= 4".into()));
    }
    let family = FamilyX::build(graph4)?;
    PairLabeling::try_from_fn(graph4.order(), |a, b| match family.extremes(a, b) {
        None => Ok(RelationKind::R4),
        Some((true, false)) => Ok(RelationKind::R1),
        Some((true, true)) => Ok(RelationKind::R2),
        Some((false, true)) => Ok(RelationKind::R3),
        Some((false, false)) => Err(RecoveryError::PosetAnomaly { a, b }),
    })
}

/// Labels from Γ4 at q = 2, n = 3: a non-4-adjacent pair is 2-adjacent iff
/// `{A1, A2}^~4` is nonempty; R3 then follows from Mackey's criterion on the
/// recovered Γ2 and the rest is R1.
pub fn recover_from_4_special(graph4: &RelGraph) -> Result<PairLabeling> {
    require(graph4, RelationKind::R4)?;
    if graph4.q() != 2 || graph4.dim() != 3 {
        return Err(RecoveryError::Precondition("the special method is for q = 2, n = 3 only".into()));
    }
    let with_r2 = PairLabeling::try_from_fn(graph4.order(), |a, b| {
        Ok(if graph4.is_adjacent(a, b) {
            RelationKind::R4
        } else if graph4.common_count(a, b) > 0 {
            RelationKind::R2
        } else {
            RelationKind::Eq
        })
    })?;
    let graph2 = with_r2.graph(RelationKind::R2, graph4.dim(), graph4.q());
    PairLabeling::try_from_fn(graph4.order(), |a, b| {
        Ok(match with_r2.get(a, b) {
            RelationKind::Eq if mackey_3_from_2(a, b, &graph2) => RelationKind::R3,
            RelationKind::Eq => RelationKind::R1,
            known => known,
        })
    })
}

/// The four configurations of a non-1-adjacent pair distinguished by the
/// number of common Γ1-neighbours. `R4a`: the line through the two points
/// meets `H1 ∩ H2`; `R4b`: it meets `H1` and `H2` in distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Common1Kind {
    R2,
    R3,
    R4a,
    R4b,
}

impl Common1Kind {
    pub const ALL: [Common1Kind; 4] = [Common1Kind::R2, Common1Kind::R3, Common1Kind::R4a, Common1Kind::R4b];

    pub fn relation(self) -> RelationKind {
        match self {
            Common1Kind::R2 => RelationKind::R2,
            Common1Kind::R3 => RelationKind::R3,
            Common1Kind::R4a | Common1Kind::R4b => RelationKind::R4,
        }
    }

    /// Kinds that occur over GF(q); `R4b` needs at least four points per line.
    pub fn applicable(q: u32) -> &'static [Common1Kind] {
        if q >= 3 {
            &Self::ALL
        } else {
            &Self::ALL[..3]
        }
    }
}

impl fmt::Display for Common1Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Closed form for `|{A1, A2}^~1|`.
pub fn formula_common1(kind: Common1Kind, q: u32, n: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::Dimension { n, q }.into());
    }
    if kind == Common1Kind::R4b && q < 3 {
        return Err(RecoveryError::Precondition("the R4b configuration needs q >= 3".into()));
    }
    let q = q as i128;
    let e = n as u32;
    let (qn2, qn3) = (q.pow(e - 2), q.pow(e - 3));
    let base = 4 * (qn2 - 1) * (q - 1) * qn3;
    let v = match kind {
        Common1Kind::R2 => base,
        Common1Kind::R3 => q.pow(2 * e - 3) - 2 * qn2,
        Common1Kind::R4a => 4 * qn2 * (qn2 - qn3) - 2 * qn2,
        Common1Kind::R4b => base + 2 * qn2,
    };
    Ok(u64::try_from(v).expect("counts are nonnegative"))
}

/// Formula values for the kinds applicable at `(q, n)`, refusing if two of
/// them coincide.
pub fn distinct_formula_values(q: u32, n: usize) -> Result<Vec<(Common1Kind, u64)>> {
    let values: Vec<(Common1Kind, u64)> = Common1Kind::applicable(q)
        .iter()
        .map(|&k| formula_common1(k, q, n).map(|v| (k, v)))
        .collect::<Result<_>>()?;
    let mut sorted: Vec<u64> = values.iter().map(|&(_, v)| v).collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(RecoveryError::FormulaCollision { q, n, values });
    }
    Ok(values)
}

/// Labels from Γ1 over GF(q) by matching `|{A1, A2}^~1|` against the
/// closed forms. Refuses when the closed forms collide, which they do at
/// q = 2.
pub fn recover_from_1_counts(graph1: &RelGraph) -> Result<PairLabeling> {
    require(graph1, RelationKind::R1)?;
    let values = distinct_formula_values(graph1.q(), graph1.dim())?;
    PairLabeling::try_from_fn(graph1.order(), |a, b| {
        if graph1.is_adjacent(a, b) {
            return Ok(RelationKind::R1);
        }
        let count = graph1.common_count(a, b);
        values
            .iter()
            .find(|&&(_, v)| v == count as u64)
            .map(|&(k, _)| k.relation())
            .ok_or(RecoveryError::UnmatchedCount { a, b, count })
    })
}

/// Pairs `(a, b)`, `a < b`, lying in some 4-element coclique of Γ1 with
/// property (L). For q >= 4 these are exactly the 3-adjacent pairs.
pub fn recover_3_from_1_cocliques(graph1: &RelGraph) -> Result<Vec<(usize, usize)>> {
    require(graph1, RelationKind::R1)?;
    if graph1.q() < 4 {
        return Err(RecoveryError::Precondition("the coclique method needs q >= 4".into()));
    }
    let order = graph1.order();
    let mut covered = vec![false; order * (order - 1) / 2];
    for c in graph1.property_l_cocliques()? {
        for i in 0..4 {
            for j in i + 1..4 {
                covered[pair_index(order, c[i], c[j])] = true;
            }
        }
    }
    Ok((0..order)
        .flat_map(|a| (a + 1..order).map(move |b| (a, b)))
        .filter(|&(a, b)| covered[pair_index(order, a, b)])
        .collect())
}

/// Whether a single pair extends to a 4-coclique of Γ1 with property (L),
/// searching inside the pair's common non-neighbourhood.
pub fn pair_in_property_l_coclique(graph1: &RelGraph, a: usize, b: usize) -> Result<bool> {
    require(graph1, RelationKind::R1)?;
    if a == b || graph1.is_adjacent(a, b) {
        return Ok(false);
    }
    let mut common = graph1.neighbors(a).clone();
    common.union_with(graph1.neighbors(b));
    common.toggle_range(..);
    common.set(a, false);
    common.set(b, false);
    for c in common.ones() {
        let mut rest = common.clone();
        rest.difference_with(graph1.neighbors(c));
        rest.remove_range(..c + 1);
        for d in rest.ones() {
            if graph1.satisfies_property_l(&[a, b, c, d])? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Full labeling from Γ1 for q >= 4: R1 from adjacency, R3 from property-(L)
/// cocliques, then R2 and R4 from common Γ3-neighbour counts.
pub fn recover_from_1_cocliques(graph1: &RelGraph) -> Result<PairLabeling> {
    let r3 = recover_3_from_1_cocliques(graph1)?;
    let order = graph1.order();
    let mut rows = vec![FixedBitSet::with_capacity(order); order];
    for &(a, b) in &r3 {
        rows[a].insert(b);
        rows[b].insert(a);
    }
    let graph3 = RelGraph::from_rows(RelationKind::R3, graph1.dim(), graph1.q(), rows);
    let labels = labels_from_gamma3(&graph3)?;
    if let Some((a, b, _)) = labels.pairs().find(|&(a, b, k)| (k == RelationKind::R1) != graph1.is_adjacent(a, b)) {
        return Err(RecoveryError::Inconsistent { a, b });
    }
    Ok(labels)
}

/// Ground-truth sub-case of a distinct non-1-adjacent pair, or `None` for
/// 1-adjacent pairs.
pub fn common1_kind(flags: &AntiFlags, a: usize, b: usize) -> Option<Common1Kind> {
    match flags.classify(a, b) {
        RelationKind::R2 => Some(Common1Kind::R2),
        RelationKind::R3 => Some(Common1Kind::R3),
        RelationKind::R4 => {
            let space = flags.space();
            let (fa, fb) = (flags.get(a), flags.get(b));
            let line = space.line_through(fa.point, fb.point).expect("4-adjacent points differ");
            let meets = line.points.iter().any(|&p| space.incident(p, fa.hyperplane) && space.incident(p, fb.hyperplane));
            Some(if meets { Common1Kind::R4a } else { Common1Kind::R4b })
        }
        RelationKind::R1 | RelationKind::Eq => None,
    }
}

/// For a non-4-adjacent pair: every point other than `p1`, `p2` lies on the
/// hyperplane of some member of `{A1, A2}^~4`, and every hyperplane other
/// than `H1`, `H2` contains the point of some member.
pub fn witness_property(flags: &AntiFlags, graph4: &RelGraph, a: usize, b: usize) -> bool {
    let space = flags.space();
    let (fa, fb) = (flags.get(a), flags.get(b));
    let common: Vec<_> = graph4.common_related(&[a, b]).ones().map(|x| flags.get(x)).collect();
    let points_ok = (0..space.num_points())
        .filter(|&p| p != fa.point && p != fb.point)
        .all(|p| common.iter().any(|w| space.incident(p, w.hyperplane)));
    let hyps_ok = (0..space.num_points())
        .filter(|&h| h != fa.hyperplane && h != fb.hyperplane)
        .all(|h| common.iter().any(|w| space.incident(w.point, h)));
    points_ok && hyps_ok
}

/// `({A1, A2}^~4)^~4 = {A1, A2}`.
pub fn double_perp_identity(graph4: &RelGraph, a: usize, b: usize) -> bool {
    let dp = graph4.common_related_set(&graph4.common_related(&[a, b]));
    dp.count_ones(..) == 2 && dp.contains(a) && dp.contains(b)
}

/// `({A1, A2}^~4)^~4` is `{A1, A2}` together with whichever of the cross
/// pairs `(p1, H2)`, `(p2, H1)` are anti-flags.
pub fn double_perp_with_cross(flags: &AntiFlags, graph4: &RelGraph, a: usize, b: usize) -> bool {
    let dp = graph4.common_related_set(&graph4.common_related(&[a, b]));
    let (fa, fb) = (flags.get(a), flags.get(b));
    let mut expected = FixedBitSet::with_capacity(flags.len());
    expected.extend([a, b]);
    expected.extend(flags.id_of(fa.point, fb.hyperplane));
    expected.extend(flags.id_of(fb.point, fa.hyperplane));
    dp == expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::Elem;

    fn id(flags: &AntiFlags, p: &[u8], h: &[u8]) -> usize {
        let v = |s: &[u8]| s.iter().map(|&x| Elem(x)).collect::<Vec<_>>();
        flags.id_of_vectors(&v(p), &v(h)).unwrap()
    }

    #[test]
    fn pair_index_is_dense() {
        let n = 7;
        let idx: Vec<usize> = (0..n).flat_map(|a| (a + 1..n).map(move |b| pair_index(n, a, b))).collect();
        assert_eq!(idx, (0..n * (n - 1) / 2).collect::<Vec<_>>());
    }

    #[test]
    fn formula_examples() {
        let v = |k, q, n| formula_common1(k, q, n).unwrap();
        use Common1Kind::*;
        assert_eq!([v(R2, 3, 3), v(R3, 3, 3), v(R4a, 3, 3), v(R4b, 3, 3)], [16, 21, 18, 22]);
        assert_eq!([v(R2, 2, 3), v(R3, 2, 3), v(R4a, 2, 3)], [4, 4, 4]);
        assert_eq!([v(R2, 2, 4), v(R3, 2, 4), v(R4a, 2, 4)], [24, 24, 24]);
        assert!(matches!(formula_common1(R4b, 2, 3), Err(RecoveryError::Precondition(_))));
    }

    #[test]
    fn formula_collision_at_q2() {
        let err = distinct_formula_values(2, 3).unwrap_err();
        assert!(matches!(err, RecoveryError::FormulaCollision { q: 2, n: 3, .. }));
        assert!(err.to_string().contains("formula values coincide"));
    }

    #[test]
    fn prop_3_1_witnesses_at_3_2() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g3 = RelGraph::build(RelationKind::R3, &flags).unwrap();
        let a = id(&flags, &[1, 0, 0], &[1, 0, 0]);
        let r1 = id(&flags, &[0, 1, 0], &[1, 1, 0]);
        let r4 = id(&flags, &[1, 1, 0], &[1, 0, 1]);
        assert_eq!(g3.common_count(a, r1), 1);
        let mut w: Vec<usize> = g3.common_related(&[a, r4]).ones().collect();
        w.sort();
        let mut expected = vec![id(&flags, &[1, 0, 0], &[1, 0, 1]), id(&flags, &[1, 1, 0], &[1, 0, 0])];
        expected.sort();
        assert_eq!(w, expected);
        let labels = recover_from_3(&g3).unwrap();
        assert_eq!(labels.get(a, r1), RelationKind::R1);
        assert_eq!(labels.get(a, r4), RelationKind::R4);
    }

    #[test]
    fn recovery_from_3_at_3_2_is_exact() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g3 = RelGraph::build(RelationKind::R3, &flags).unwrap();
        let labels = recover_from_3(&g3).unwrap();
        assert_eq!(labels.pairs().count(), 378);
        assert!(labels.mismatches(&PairLabeling::ground_truth(&flags)).is_empty());
    }

    #[test]
    fn shared_point_pair_is_mackey() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g2 = RelGraph::build(RelationKind::R2, &flags).unwrap();
        let a = id(&flags, &[1, 0, 0], &[1, 0, 0]);
        let b = id(&flags, &[1, 0, 0], &[1, 1, 0]);
        assert!(mackey_3_from_2(a, b, &g2));
    }

    #[test]
    fn special_case_witnesses_at_3_2() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g4 = RelGraph::build(RelationKind::R4, &flags).unwrap();
        let a = id(&flags, &[1, 0, 0], &[1, 0, 0]);
        let r2 = id(&flags, &[0, 1, 0], &[0, 1, 0]);
        let r3 = id(&flags, &[1, 0, 0], &[1, 1, 0]);
        assert_eq!(g4.common_count(a, r2), 1);
        assert_eq!(g4.common_count(a, r3), 0);
    }

    #[test]
    fn double_perp_of_r1_pair_has_the_cross_anti_flag() {
        let flags = AntiFlags::enumerate(3, 3).unwrap();
        let g4 = RelGraph::build(RelationKind::R4, &flags).unwrap();
        let a = id(&flags, &[0, 0, 1], &[0, 0, 1]);
        let b = id(&flags, &[0, 1, 0], &[0, 1, 1]);
        assert_eq!(flags.classify(a, b), RelationKind::R1);
        assert!(!double_perp_identity(&g4, a, b));
        assert!(double_perp_with_cross(&flags, &g4, a, b));
        let cross = id(&flags, &[0, 0, 1], &[0, 1, 1]);
        assert!(g4.common_related_set(&g4.common_related(&[a, b])).contains(cross));
    }

    #[test]
    fn wrong_graph_and_preconditions() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g1 = RelGraph::build(RelationKind::R1, &flags).unwrap();
        let g4 = RelGraph::build(RelationKind::R4, &flags).unwrap();
        assert!(matches!(recover_from_3(&g1), Err(RecoveryError::Geometry(Error::WrongGraph { .. }))));
        assert!(matches!(recover_from_4(&g4), Err(RecoveryError::Precondition(_))));
        assert!(matches!(recover_3_from_1_cocliques(&g1), Err(RecoveryError::Precondition(_))));
        assert!(matches!(recover_from_1_counts(&g1), Err(RecoveryError::FormulaCollision { .. })));
    }
}
