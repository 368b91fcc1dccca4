//! The hyperbolic quadric of PG(2n-1, 2) and its reconstruction from Γ1.
//!
//! A vector of `V × V*` over GF(2) is packed into a `u32`: bit `i` is the
//! coordinate `x_i` and bit `n + i` is the coefficient `x*_i`. The form is
//! `Q(x, x*) = x*(x)`; a nonzero vector is its own projective point.
//! Non-singular points are exactly the anti-flags of PG(n-1, 2), and two
//! of them are 1-adjacent iff the third point on their line is
//! non-singular. So Γ1 alone determines the totally non-singular lines,
//! and from those the singular points and singular lines.

use std::collections::{BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use thiserror::Error;

use crate::antiflags::{AntiFlags, RelationKind};
use crate::error::Error;
use crate::gfq::Elem;
use crate::relgraphs::RelGraph;

/// Largest supported `n`; vectors have `2n` bits.
pub const MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperbolicError {
    #[error("the cocliques of parallel class {class} have different third points")]
    InconsistentClass { class: usize },
    #[error(transparent)]
    Geometry(#[from] Error),
}

#[inline]
fn mask(n: usize) -> u32 {
    (1 << n) - 1
}

/// `Q(x, x*) = Σ x_i x*_i`.
#[inline]
pub fn q_value(v: u32, n: usize) -> bool {
    (v & (v >> n) & mask(n)).count_ones() % 2 == 1
}

/// The polar form `F(x, y) = y*(x) + x*(y)`.
#[inline]
pub fn f_bilinear(u: u32, v: u32, n: usize) -> bool {
    let m = mask(n);
    ((u & (v >> n) & m).count_ones() + (v & (u >> n) & m).count_ones()) % 2 == 1
}

/// A point of PG(2n-1, 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoint {
    pub vec: u32,
    pub n: usize,
}

impl QPoint {
    pub fn new(vec: u32, n: usize) -> Self {
        assert!(vec != 0 && vec >> (2 * n) == 0, "not a nonzero vector of length 2n");
        QPoint { vec, n }
    }

    pub fn q_value(self) -> bool {
        q_value(self.vec, self.n)
    }

    pub fn is_singular(self) -> bool {
        !self.q_value()
    }

    /// The `x` half.
    pub fn vector(self) -> Vec<Elem> {
        (0..self.n).map(|i| Elem((self.vec >> i & 1) as u8)).collect()
    }

    /// The `x*` half.
    pub fn covector(self) -> Vec<Elem> {
        (0..self.n).map(|i| Elem((self.vec >> (self.n + i) & 1) as u8)).collect()
    }
}

fn check_n(n: usize) -> Result<(), Error> {
    if (3..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension { n, q: 2 })
    }
}

/// All nonzero vectors split into `(singular, non-singular)`, ascending.
pub fn partition_points(n: usize) -> Result<(Vec<u32>, Vec<u32>), Error> {
    check_n(n)?;
    Ok((1..1u32 << (2 * n)).partition(|&v| !q_value(v, n)))
}

fn pack(x: &[Elem], xs: &[Elem]) -> u32 {
    let n = x.len();
    let bits = |v: &[Elem]| v.iter().enumerate().fold(0u32, |acc, (i, e)| acc | (u32::from(e.0) << i));
    bits(x) | bits(xs) << n
}

fn require_binary(flags: &AntiFlags) -> Result<(), Error> {
    match flags.space().q() {
        2 => check_n(flags.space().dim()),
        found => Err(Error::FieldOrder { required: 2, found }),
    }
}

/// The anti-flag `(<x>, ker x*)` of a non-singular point.
pub fn f_map(flags: &AntiFlags, point: QPoint) -> Result<usize, Error> {
    require_binary(flags)?;
    if point.is_singular() {
        return Err(Error::SingularPoint(point.vec));
    }
    Ok(flags.id_of_vectors(&point.vector(), &point.covector()).expect("non-singular points are anti-flags"))
}

/// The point `(x | x*)` of an anti-flag `(<x>, ker x*)`.
pub fn f_inverse(flags: &AntiFlags, id: usize) -> Result<QPoint, Error> {
    require_binary(flags)?;
    let space = flags.space();
    let a = flags.get(id);
    let v = pack(space.point(a.point).coords(), space.hyperplane(a.hyperplane).coeffs());
    Ok(QPoint::new(v, space.dim()))
}

/// `f^-1` for every anti-flag, indexed by anti-flag id.
pub fn vertex_vectors(flags: &AntiFlags) -> Result<Vec<u32>, Error> {
    (0..flags.len()).map(|id| f_inverse(flags, id).map(|p| p.vec)).collect()
}

/// For distinct non-singular points: whether "the third point on their line
/// is non-singular" agrees with "their anti-flags are 1-adjacent".
pub fn correspondence_check(flags: &AntiFlags, p1: QPoint, p2: QPoint) -> Result<bool, Error> {
    if p1 == p2 {
        return Err(Error::IdenticalPoints);
    }
    let (a, b) = (f_map(flags, p1)?, f_map(flags, p2)?);
    let third_non_singular = q_value(p1.vec ^ p2.vec, p1.n);
    Ok(third_non_singular == (flags.classify(a, b) == RelationKind::R1))
}

/// The three orthogonality facts relating `F` to lines, checked over all
/// pairs of distinct points: singular pairs are orthogonal iff their line is
/// singular; non-singular pairs are non-orthogonal iff their line is totally
/// non-singular; a singular and a non-singular point are orthogonal iff the
/// third point is non-singular.
pub fn orthogonality_observations(n: usize) -> Result<[bool; 3], Error> {
    check_n(n)?;
    let top = 1u32 << (2 * n);
    let mut ok = [true; 3];
    for u in 1..top {
        for v in u + 1..top {
            let (qu, qv, w) = (q_value(u, n), q_value(v, n), u ^ v);
            let perp = !f_bilinear(u, v, n);
            match (qu, qv) {
                (false, false) => ok[0] &= perp == !q_value(w, n),
                (true, true) => ok[1] &= !perp == q_value(w, n),
                _ => ok[2] &= perp == q_value(w, n),
            }
        }
    }
    Ok(ok)
}

fn require_gamma1(graph: &RelGraph) -> Result<(), Error> {
    if graph.relation() != RelationKind::R1 {
        return Err(Error::WrongGraph { expected: RelationKind::R1, found: graph.relation() });
    }
    if graph.q() != 2 {
        return Err(Error::FieldOrder { required: 2, found: graph.q() });
    }
    check_n(graph.dim())
}

/// Condition (NS) for a triangle of Γ1: every other vertex is adjacent to
/// exactly zero or two of its vertices. A vertex sees an odd number of the
/// three iff it lies in the symmetric difference of their rows, and the
/// triangle's own vertices always see exactly two.
pub fn satisfies_ns(graph1: &RelGraph, c: [usize; 3]) -> bool {
    if !graph1.is_clique(&c) {
        return false;
    }
    let mut odd = graph1.neighbors(c[0]).clone();
    odd.symmetric_difference_with(graph1.neighbors(c[1]));
    odd.symmetric_difference_with(graph1.neighbors(c[2]));
    odd.is_clear()
}

/// Triangles of Γ1 satisfying (NS), i.e. the totally non-singular lines.
#[derive(Debug, Clone)]
pub struct TnsLines {
    order: usize,
    lines: Vec<[usize; 3]>,
    /// `third[a * order + b]`: the third vertex of the line through `a, b`.
    third: Vec<u32>,
    through: Vec<Vec<u32>>,
}

impl TnsLines {
    pub fn lines(&self) -> &[[usize; 3]] {
        &self.lines
    }

    pub fn third(&self, a: usize, b: usize) -> Option<usize> {
        match self.third[a * self.order + b] {
            u32::MAX => None,
            c => Some(c as usize),
        }
    }

    /// Lines through vertex `a`.
    pub fn lines_through(&self, a: usize) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.through[a].iter().map(|&l| self.lines[l as usize])
    }
}

pub fn tns_lines_from_graph(graph1: &RelGraph) -> Result<TnsLines, Error> {
    require_gamma1(graph1)?;
    let order = graph1.order();
    let lines: Vec<[usize; 3]> = (0..order)
        .into_par_iter()
        .flat_map_iter(|a| {
            let row_a = graph1.neighbors(a);
            row_a.ones().filter(move |&b| b > a).flat_map(move |b| {
                let mut common = row_a.clone();
                common.intersect_with(graph1.neighbors(b));
                common
                    .ones()
                    .filter(|&c| c > b)
                    .map(|c| [a, b, c])
                    .filter(|&t| satisfies_ns(graph1, t))
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    let mut third = vec![u32::MAX; order * order];
    let mut through = vec![Vec::new(); order];
    for (id, l) in lines.iter().enumerate() {
        for i in 0..3 {
            let (a, b, c) = (l[i], l[(i + 1) % 3], l[(i + 2) % 3]);
            third[a * order + b] = c as u32;
            third[b * order + a] = c as u32;
            through[a].push(id as u32);
        }
    }
    Ok(TnsLines { order, lines, third, through })
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Whether two distinct 2-cocliques are parallel of the first type: there
/// are two distinct lines of `tns`, each meeting both cocliques, that meet
/// each other outside the cocliques.
pub fn parallel_first_type(c1: [usize; 2], c2: [usize; 2], graph1: &RelGraph, tns: &TnsLines) -> bool {
    assert!(graph1.is_coclique(&c1) && graph1.is_coclique(&c2) && c1[0] != c1[1] && c2[0] != c2[1]);
    if sorted_pair(c1[0], c1[1]) == sorted_pair(c2[0], c2[1]) {
        return false;
    }
    let mut meeting: Vec<[usize; 3]> = Vec::new();
    for &x in &c1 {
        for &y in &c2 {
            if x == y {
                meeting.extend(tns.lines_through(x));
            } else if let Some(z) = tns.third(x, y) {
                let mut l = [x, y, z];
                l.sort_unstable();
                meeting.push(l);
            }
        }
    }
    meeting.sort_unstable();
    meeting.dedup();
    let outside = |z: &usize| !c1.contains(z) && !c2.contains(z);
    meeting.iter().enumerate().any(|(i, l)| {
        meeting[i + 1..].iter().any(|m| {
            let common: Vec<usize> = l.iter().copied().filter(|z| m.contains(z)).collect();
            common.len() == 1 && outside(&common[0])
        })
    })
}

/// Whether two distinct 2-cocliques that are not first-type parallel are
/// parallel of the second type: some 2-coclique is first-type parallel to
/// both. Searches every 2-coclique of Γ1.
pub fn parallel_second_type(c1: [usize; 2], c2: [usize; 2], graph1: &RelGraph, tns: &TnsLines) -> bool {
    if parallel_first_type(c1, c2, graph1, tns) {
        return false;
    }
    let order = graph1.order();
    (0..order).any(|a| {
        let mut non = graph1.neighbors(a).clone();
        non.toggle_range(..);
        non.remove_range(..a + 1);
        non.ones().any(|b| {
            let c = [a, b];
            parallel_first_type(c1, c, graph1, tns) && parallel_first_type(c2, c, graph1, tns)
        })
    })
}

/// A class of mutually parallel 2-cocliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelClass {
    pub members: Vec<[usize; 2]>,
}

/// The polar space rebuilt from Γ1: points are parallel classes, lines are
/// triples of classes.
#[derive(Debug, Clone)]
pub struct ReconstructedGeometry {
    pub n: usize,
    pub classes: Vec<ParallelClass>,
    /// Sorted class-id triples.
    pub lines: Vec<[usize; 3]>,
    /// 2-coclique to class id.
    class_of: HashMap<[usize; 2], usize>,
}

impl ReconstructedGeometry {
    pub fn class_of(&self, a: usize, b: usize) -> Option<usize> {
        self.class_of.get(&sorted_pair(a, b)).copied()
    }
}

/// First-type parallel pairs, generated line pair by line pair: for two
/// lines of `tns` meeting in `z`, the cocliques meeting both lines away
/// from `z` are pairwise first-type parallel, and every first-type pair
/// arises this way. Returns sorted neighbour lists over `cocliques`.
pub fn first_type_adjacency(
    graph1: &RelGraph,
    tns: &TnsLines,
    cocliques: &[[usize; 2]],
) -> Vec<Vec<u32>> {
    let index: HashMap<[usize; 2], u32> = cocliques.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
    let order = graph1.order();
    let edges: Vec<(u32, u32)> = (0..order)
        .into_par_iter()
        .flat_map_iter(|z| {
            let through: Vec<[usize; 3]> = tns.lines_through(z).collect();
            let mut out = Vec::new();
            for (i, l) in through.iter().enumerate() {
                for m in &through[i + 1..] {
                    let group: Vec<u32> = l
                        .iter()
                        .filter(|&&u| u != z)
                        .flat_map(|&u| m.iter().filter(|&&w| w != z).map(move |&w| sorted_pair(u, w)))
                        .filter_map(|c| index.get(&c).copied())
                        .collect();
                    for (x, &c) in group.iter().enumerate() {
                        for &d in &group[x + 1..] {
                            out.push((c, d));
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut adj = vec![Vec::new(); cocliques.len()];
    for (c, d) in edges {
        adj[c as usize].push(d);
        adj[d as usize].push(c);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// All 2-cocliques `[a, b]`, `a < b`, in lexicographic order.
pub fn two_cocliques(graph1: &RelGraph) -> Vec<[usize; 2]> {
    let order = graph1.order();
    (0..order)
        .flat_map(|a| (a + 1..order).filter(move |&b| !graph1.is_adjacent(a, b)).map(move |b| [a, b]))
        .collect()
}

/// Rebuilds the polar space from Γ1 over GF(2), using only adjacency.
///
/// Classes are the transitive closure of first- and second-type
/// parallelism; a second-type pair shares a first-type neighbour, so all
/// first-type neighbours of a coclique are merged together. A triple of
/// distinct classes is a line when some three of their members pairwise
/// meet in three distinct vertices, i.e. are the edges of a 3-coclique.
pub fn reconstruct_polar_space(graph1: &RelGraph) -> Result<ReconstructedGeometry, Error> {
    let tns = tns_lines_from_graph(graph1)?;
    let cocliques = two_cocliques(graph1);
    let adj = first_type_adjacency(graph1, &tns, &cocliques);

    let mut uf = UnionFind::<u32>::new(cocliques.len());
    for (c, list) in adj.iter().enumerate() {
        for &d in list {
            uf.union(c as u32, d);
        }
        for w in list.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let labels = uf.into_labeling();
    let mut class_ids: HashMap<u32, usize> = HashMap::new();
    let mut classes: Vec<ParallelClass> = Vec::new();
    let mut class_of = HashMap::with_capacity(cocliques.len());
    for (c, &root) in cocliques.iter().zip(&labels) {
        let id = *class_ids.entry(root).or_insert_with(|| {
            classes.push(ParallelClass { members: Vec::new() });
            classes.len() - 1
        });
        classes[id].members.push(*c);
        class_of.insert(*c, id);
    }

    let order = graph1.order();
    let lines: BTreeSet<[usize; 3]> = (0..order)
        .into_par_iter()
        .flat_map_iter(|a| {
            let class_of = &class_of;
            cocliques
                .iter()
                .filter(move |c| c[0] == a)
                .flat_map(move |&[_, b]| {
                    let mut common = graph1.neighbors(a).clone();
                    common.union_with(graph1.neighbors(b));
                    common.toggle_range(..);
                    common.remove_range(..b + 1);
                    common
                        .ones()
                        .filter_map(|c| {
                            let mut t = [class_of[&[a, b]], class_of[&[b, c]], class_of[&[a, c]]];
                            t.sort_unstable();
                            (t[0] != t[1] && t[1] != t[2]).then_some(t)
                        })
                        .collect::<Vec<_>>()
                })
        })
        .collect();

    Ok(ReconstructedGeometry { n: graph1.dim(), classes, lines: lines.into_iter().collect(), class_of })
}

/// How a reconstruction compares with the quadric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricComparison {
    /// Third point of the members of each class.
    pub class_points: Vec<u32>,
    pub singular_points: usize,
    /// Class to third point is a bijection onto the singular points.
    pub bijective: bool,
    pub singular_lines: usize,
    /// The image of the reconstructed lines is exactly the set of singular lines.
    pub lines_match: bool,
}

/// Lines of PG(2n-1, 2) all of whose points are singular, as sorted triples.
pub fn singular_lines(n: usize) -> Result<BTreeSet<[u32; 3]>, Error> {
    let (singular, _) = partition_points(n)?;
    let mut lines = BTreeSet::new();
    for (i, &u) in singular.iter().enumerate() {
        for &v in &singular[i + 1..] {
            if !q_value(u ^ v, n) {
                let mut l = [u, v, u ^ v];
                l.sort_unstable();
                lines.insert(l);
            }
        }
    }
    Ok(lines)
}

/// Maps each class to the third point of its members' lines (checking that
/// all members agree) and compares points and lines with the quadric.
pub fn compare_with_quadric(
    geom: &ReconstructedGeometry,
    flags: &AntiFlags,
) -> Result<QuadricComparison, HyperbolicError> {
    let vecs = vertex_vectors(flags)?;
    let n = geom.n;
    let mut class_points = Vec::with_capacity(geom.classes.len());
    for (id, class) in geom.classes.iter().enumerate() {
        let mut thirds = class.members.iter().map(|&[a, b]| vecs[a] ^ vecs[b]);
        let first = thirds.next().expect("classes are nonempty");
        if thirds.any(|t| t != first) {
            return Err(HyperbolicError::InconsistentClass { class: id });
        }
        class_points.push(first);
    }
    let (singular, _) = partition_points(n)?;
    let mut image = class_points.clone();
    image.sort_unstable();
    let bijective = image == singular;

    let expected = singular_lines(n)?;
    let mapped: BTreeSet<[u32; 3]> = geom
        .lines
        .iter()
        .map(|l| {
            let mut t = l.map(|c| class_points[c]);
            t.sort_unstable();
            t
        })
        .collect();
    let lines_match = mapped.len() == geom.lines.len() && mapped == expected;
    Ok(QuadricComparison {
        class_points,
        singular_points: singular.len(),
        bijective,
        singular_lines: expected.len(),
        lines_match,
    })
}

/// Parallelism type of two 2-cocliques, read off the quadric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParallelType {
    /// The spanned plane has a single singular point.
    First,
    /// The singular points of the plane form a line.
    Second,
}

/// Geometric parallelism of two 2-cocliques given vertex vectors: the lines
/// are distinct and share their singular point. `None` when not parallel.
pub fn geometric_parallel_type(vecs: &[u32], n: usize, c1: [usize; 2], c2: [usize; 2]) -> Option<ParallelType> {
    let (u1, v1, u2) = (vecs[c1[0]], vecs[c1[1]], vecs[c2[0]]);
    let s = u1 ^ v1;
    if sorted_pair(c1[0], c1[1]) == sorted_pair(c2[0], c2[1]) || s != u2 ^ vecs[c2[1]] {
        return None;
    }
    // The plane is {s, u1, v1, u2, v2, u1+u2, u1+v2}; the last two have
    // equal Q since s is orthogonal to the whole plane.
    if q_value(u1 ^ u2, n) {
        Some(ParallelType::First)
    } else {
        Some(ParallelType::Second)
    }
}

/// Totally non-singular lines read off the quadric, as sorted vertex triples.
pub fn geometric_tns_lines(vecs: &[u32], n: usize) -> Vec<[usize; 3]> {
    let pos: HashMap<u32, usize> = vecs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut lines = BTreeSet::new();
    for a in 0..vecs.len() {
        for b in a + 1..vecs.len() {
            let w = vecs[a] ^ vecs[b];
            if q_value(w, n) {
                let mut l = [a, b, pos[&w]];
                l.sort_unstable();
                lines.insert(l);
            }
        }
    }
    lines.into_iter().collect()
}
