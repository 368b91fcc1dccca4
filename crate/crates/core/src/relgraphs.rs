//! The relation graphs Γ1..Γ4 on the anti-flag set, stored as dense bitset
//! rows, plus the clique and coclique machinery the recovery procedures use.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::antiflags::{AntiFlags, RelationKind};
use crate::error::{Error, Result};

/// The graph Γi: vertices are anti-flag ids, `a ~ b` iff `classify(a, b)`
/// is the graph's relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelGraph {
    relation: RelationKind,
    n: usize,
    q: u32,
    rows: Vec<FixedBitSet>,
}

impl RelGraph {
    /// Builds Γi for `relation` over all anti-flags.
    pub fn build(relation: RelationKind, flags: &AntiFlags) -> Result<Self> {
        if relation == RelationKind::Eq {
            return Err(Error::NotARelation(relation));
        }
        let order = flags.len();
        let rows = (0..order)
            .into_par_iter()
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(order);
                for b in 0..order {
                    if flags.classify(a, b) == relation {
                        row.insert(b);
                    }
                }
                row
            })
            .collect();
        Ok(RelGraph { relation, n: flags.space().dim(), q: flags.space().q(), rows })
    }

    /// Wraps adjacency rows produced by a recovery procedure.
    pub fn from_rows(relation: RelationKind, n: usize, q: u32, rows: Vec<FixedBitSet>) -> Self {
        debug_assert!(rows.iter().enumerate().all(|(a, r)| !r.contains(a)));
        RelGraph { relation, n, q, rows }
    }

    pub fn relation(&self) -> RelationKind {
        self.relation
    }

    /// Projective dimension parameter `n` of the underlying PG(n-1, q).
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    #[inline]
    pub fn neighbors(&self, a: usize) -> &FixedBitSet {
        &self.rows[a]
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn degree(&self, a: usize) -> usize {
        self.rows[a].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, row)| row.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `X^~i`: vertices adjacent to every member of `xs`. An empty `xs`
    /// yields every vertex.
    pub fn common_related(&self, xs: &[usize]) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.order());
        out.insert_range(..);
        for &x in xs {
            out.intersect_with(&self.rows[x]);
        }
        out
    }

    /// Same as [`common_related`](Self::common_related) for a set given as a
    /// bitset.
    pub fn common_related_set(&self, xs: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.order());
        out.insert_range(..);
        for x in xs.ones() {
            out.intersect_with(&self.rows[x]);
        }
        out
    }

    /// `|{a, b}^~i|`.
    #[inline]
    pub fn common_count(&self, a: usize, b: usize) -> usize {
        self.rows[a].intersection_count(&self.rows[b])
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.is_adjacent(a, b)))
    }

    pub fn is_coclique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| a != b && !self.is_adjacent(a, b)))
    }

    /// All maximal cliques (Bron–Kerbosch with pivoting), each sorted.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut p = FixedBitSet::with_capacity(self.order());
        p.insert_range(..);
        let x = FixedBitSet::with_capacity(self.order());
        self.bron_kerbosch(&mut Vec::new(), p, x, &mut out);
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, mut p: FixedBitSet, mut x: FixedBitSet, out: &mut Vec<Vec<usize>>) {
        if p.is_clear() {
            if x.is_clear() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| self.rows[u].intersection_count(&p))
            .expect("p is nonempty");
        let mut candidates = p.clone();
        candidates.difference_with(&self.rows[pivot]);
        for v in candidates.ones() {
            let mut np = p.clone();
            np.intersect_with(&self.rows[v]);
            let mut nx = x.clone();
            nx.intersect_with(&self.rows[v]);
            r.push(v);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
    }

    fn require(&self, relation: RelationKind) -> Result<()> {
        if self.relation == relation {
            Ok(())
        } else {
            Err(Error::WrongGraph { expected: relation, found: self.relation })
        }
    }

    /// For a coclique `c` of Γ1, the histogram of `|A^~1 ∩ c|` over the
    /// anti-flags `A` outside `c`.
    pub fn intersection_profile(&self, c: &[usize]) -> Result<CocliqueProfile> {
        self.require(RelationKind::R1)?;
        if !self.is_coclique(c) {
            return Err(Error::NotCoclique);
        }
        let mut counts = vec![0usize; c.len() + 1];
        for a in (0..self.order()).filter(|a| !c.contains(a)) {
            counts[c.iter().filter(|&&m| self.is_adjacent(a, m)).count()] += 1;
        }
        Ok(CocliqueProfile { counts })
    }

    /// Property (L) for a 4-element coclique of Γ1: no outside anti-flag is
    /// 1-adjacent to exactly two of its members.
    pub fn satisfies_property_l(&self, c: &[usize]) -> Result<bool> {
        self.require(RelationKind::R1)?;
        let c: [usize; 4] = c.try_into().map_err(|_| Error::SetSize { expected: 4, found: c.len() })?;
        if !self.is_coclique(&c) {
            return Err(Error::NotCoclique);
        }
        Ok(self.property_l_unchecked(&c))
    }

    /// Property (L) without validation. Members of a coclique see none of
    /// the others, so they never count two and need no masking.
    #[inline]
    fn property_l_unchecked(&self, c: &[usize; 4]) -> bool {
        let [r1, r2, r3, r4] = c.map(|v| self.rows[v].as_slice());
        for w in 0..r1.len() {
            let (x1, x2, x3, x4) = (r1[w], r2[w], r3[w], r4[w]);
            let (a, b) = (x1 ^ x2, x1 & x2);
            let (c, d) = (x3 ^ x4, x3 & x4);
            let two = (b & !c & !d) | (d & !a & !b) | (a & c);
            if two != 0 {
                return false;
            }
        }
        true
    }

    /// Every 4-element coclique `{a < b < c < d}` of Γ1 accepted by `keep`,
    /// in lexicographic order. The search only extends within common
    /// non-neighbourhoods.
    pub fn four_cocliques<F>(&self, keep: F) -> Result<Vec<[usize; 4]>>
    where
        F: Fn(&[usize; 4]) -> bool + Sync,
    {
        self.require(RelationKind::R1)?;
        let order = self.order();
        let non: Vec<FixedBitSet> = (0..order)
            .map(|a| {
                let mut r = self.rows[a].clone();
                r.toggle_range(..);
                r.set(a, false);
                r
            })
            .collect();
        let per_root: Vec<Vec<[usize; 4]>> = (0..order)
            .into_par_iter()
            .map(|a| {
                let mut found = Vec::new();
                let mut ca = non[a].clone();
                ca.remove_range(..a + 1);
                for b in ca.ones() {
                    let mut cb = ca.clone();
                    cb.intersect_with(&non[b]);
                    cb.remove_range(..b + 1);
                    for c in cb.ones() {
                        let mut cc = cb.clone();
                        cc.intersect_with(&non[c]);
                        cc.remove_range(..c + 1);
                        for d in cc.ones() {
                            let set = [a, b, c, d];
                            if keep(&set) {
                                found.push(set);
                            }
                        }
                    }
                }
                found
            })
            .collect();
        Ok(per_root.concat())
    }

    /// All 4-cocliques of Γ1 satisfying property (L).
    pub fn property_l_cocliques(&self) -> Result<Vec<[usize; 4]>> {
        self.four_cocliques(|c| self.property_l_unchecked(c))
    }
}

/// Histogram of `|A^~1 ∩ C|` for the anti-flags `A` outside a coclique `C`;
/// `counts[k]` is the number of outside anti-flags meeting `C` in `k`
/// neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocliqueProfile {
    pub counts: Vec<usize>,
}

impl CocliqueProfile {
    /// Sizes that actually occur.
    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, _)| k)
    }

    /// Only the sizes `0, 1, |C|-1, |C|` occur.
    pub fn is_linear_shaped(&self) -> bool {
        let m = self.counts.len() - 1;
        self.sizes().all(|k| k <= 1 || k + 1 >= m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linearity {
    /// Common hyperplane, collinear points.
    Linear,
    /// Common point, hyperplanes on a line of the dual space.
    DuallyLinear,
    Neither,
}

/// Classifies a coclique of Γ1 (at least two anti-flags) as linear, dually
/// linear, or neither.
pub fn is_linear_or_dually_linear(flags: &AntiFlags, c: &[usize]) -> Result<Linearity> {
    if c.len() < 2 {
        return Err(Error::SetSize { expected: 2, found: c.len() });
    }
    let is_coclique = c
        .iter()
        .enumerate()
        .all(|(i, &a)| c[i + 1..].iter().all(|&b| a != b && flags.classify(a, b) != RelationKind::R1));
    if !is_coclique {
        return Err(Error::NotCoclique);
    }
    let space = flags.space();
    let pts: Vec<usize> = c.iter().map(|&a| flags.get(a).point).collect();
    let hyps: Vec<usize> = c.iter().map(|&a| flags.get(a).hyperplane).collect();
    let all_equal = |v: &[usize]| v.iter().all(|&x| x == v[0]);
    if all_equal(&hyps) && space.collinear(&pts) {
        Ok(Linearity::Linear)
    } else if all_equal(&pts) && space.collinear(&hyps) {
        Ok(Linearity::DuallyLinear)
    } else {
        Ok(Linearity::Neither)
    }
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
    fn eq_is_not_a_graph() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        assert_eq!(RelGraph::build(RelationKind::Eq, &flags), Err(Error::NotARelation(RelationKind::Eq)));
    }

    #[test]
    fn gamma3_is_six_regular_at_3_2() {
        // q^(n-1) = 4 anti-flags per point and per hyperplane: 3 + 3 others
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g3 = RelGraph::build(RelationKind::R3, &flags).unwrap();
        assert!((0..flags.len()).all(|a| g3.degree(a) == 6));
    }

    #[test]
    fn graphs_partition_the_complete_graph() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let graphs: Vec<RelGraph> =
            RelationKind::RELATIONS.iter().map(|&r| RelGraph::build(r, &flags).unwrap()).collect();
        let n = flags.len();
        assert_eq!(graphs.iter().map(|g| g.edge_count()).sum::<usize>(), n * (n - 1) / 2);
        for a in 0..n {
            for b in 0..n {
                let hits = graphs.iter().filter(|g| g.is_adjacent(a, b)).count();
                assert_eq!(hits, usize::from(a != b));
            }
        }
    }

    #[test]
    fn common_related_examples() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g3 = RelGraph::build(RelationKind::R3, &flags).unwrap();
        let a = id(&flags, &[1, 0, 0], &[1, 0, 0]);
        assert_eq!(g3.common_related(&[a]), *g3.neighbors(a));

        let r1 = id(&flags, &[0, 1, 0], &[1, 1, 0]);
        let common: Vec<usize> = g3.common_related(&[a, r1]).ones().collect();
        assert_eq!(common, vec![id(&flags, &[1, 0, 0], &[1, 1, 0])]);

        let r2 = id(&flags, &[0, 1, 0], &[0, 1, 0]);
        assert!(g3.common_related(&[a, r2]).is_clear());
    }

    #[test]
    fn linearity_examples() {
        let flags = AntiFlags::enumerate(3, 4).unwrap();
        let space = flags.space();
        // hyperplane x3 = 0 and the line x2 = 0 meet in (1,0,0); the four
        // points (a,0,1) of that line lie off the hyperplane
        let h = space.hyperplane_id(&[Elem(0), Elem(0), Elem(1)]).unwrap();
        let linear: Vec<usize> = (0..4u8)
            .map(|a| flags.id_of(space.point_id(&[Elem(a), Elem(0), Elem(1)]).unwrap(), h).unwrap())
            .collect();
        assert_eq!(is_linear_or_dually_linear(&flags, &linear), Ok(Linearity::Linear));
        let dual: Vec<usize> = linear.iter().map(|&a| flags.duality_transform(a)).collect();
        assert_eq!(is_linear_or_dually_linear(&flags, &dual), Ok(Linearity::DuallyLinear));

        let g1 = RelGraph::build(RelationKind::R1, &flags).unwrap();
        assert_eq!(g1.satisfies_property_l(&linear), Ok(true));
        assert_eq!(g1.satisfies_property_l(&dual), Ok(true));
        assert_eq!(g1.satisfies_property_l(&linear[..3]), Err(Error::SetSize { expected: 4, found: 3 }));

        let a = id(&flags, &[1, 0, 0], &[1, 0, 0]);
        let b = id(&flags, &[0, 1, 0], &[0, 1, 0]);
        assert_eq!(is_linear_or_dually_linear(&flags, &[a, b]), Ok(Linearity::Neither));
        let r1 = id(&flags, &[0, 1, 0], &[1, 1, 0]);
        assert_eq!(is_linear_or_dually_linear(&flags, &[a, r1]), Err(Error::NotCoclique));
    }

    #[test]
    fn property_l_rejects_a_size_two_witness() {
        let flags = AntiFlags::enumerate(3, 4).unwrap();
        let g1 = RelGraph::build(RelationKind::R1, &flags).unwrap();
        let n = flags.len();
        let c = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .flat_map(|(a, b)| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d])))
            .find(|c| g1.is_coclique(c) && is_linear_or_dually_linear(&flags, c) == Ok(Linearity::Neither))
            .unwrap();
        let profile = g1.intersection_profile(&c).unwrap();
        assert!(profile.counts[2] > 0);
        assert_eq!(g1.satisfies_property_l(&c), Ok(false));
    }

    #[test]
    fn coclique_functions_need_gamma1() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g2 = RelGraph::build(RelationKind::R2, &flags).unwrap();
        assert!(matches!(g2.property_l_cocliques(), Err(Error::WrongGraph { .. })));
    }

    #[test]
    fn gamma3_maximal_cliques_are_pencils() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g3 = RelGraph::build(RelationKind::R3, &flags).unwrap();
        let cliques = g3.maximal_cliques();
        // one per point and one per hyperplane
        assert_eq!(cliques.len(), 2 * flags.space().num_points());
        for c in &cliques {
            let pts: Vec<usize> = c.iter().map(|&a| flags.get(a).point).collect();
            let hyps: Vec<usize> = c.iter().map(|&a| flags.get(a).hyperplane).collect();
            assert!(pts.iter().all(|&p| p == pts[0]) || hyps.iter().all(|&h| h == hyps[0]));
        }
    }
}
