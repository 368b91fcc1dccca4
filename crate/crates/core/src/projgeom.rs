//! Points, hyperplanes and lines of PG(n-1, q).
//!
//! Points and hyperplanes are both stored as normalized vectors (first nonzero
//! entry equal to one) and share the same lexicographic enumeration, so the
//! hyperplane with id `i` is the kernel of the functional whose coefficient
//! vector is the coordinate vector of point `i`. All downstream ids derive
//! from this order.

use crate::error::{Error, Result};
use crate::gfq::{Elem, Field};

/// Largest supported number of vectors in the ambient space, `q^n`.
const MAX_VECTORS: u64 = 1 << 20;

/// A point of PG(n-1, q): a normalized nonzero coordinate vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

/// A hyperplane of PG(n-1, q), given by the normalized functional
/// `x -> sum coeffs[i] * x[i]` whose kernel it is.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    coeffs: Vec<Elem>,
}

/// Scales a nonzero vector so its first nonzero entry is one. Returns `None`
/// for the zero vector.
pub fn normalize(v: &[Elem], f: &Field) -> Option<Vec<Elem>> {
    let lead = v.iter().copied().find(|e| !e.is_zero())?;
    let s = f.inv(lead);
    Some(v.iter().map(|&e| f.mul(e, s)).collect())
}

fn dot(a: &[Elem], b: &[Elem], f: &Field) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

impl ProjPoint {
    pub fn new(v: &[Elem], f: &Field) -> Option<Self> {
        normalize(v, f).map(|coords| ProjPoint { coords })
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }
}

impl Hyperplane {
    pub fn new(v: &[Elem], f: &Field) -> Option<Self> {
        normalize(v, f).map(|coeffs| Hyperplane { coeffs })
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn eval(&self, x: &[Elem], f: &Field) -> Elem {
        dot(&self.coeffs, x, f)
    }
}

/// True iff `p` lies on `h`.
pub fn incident(p: &ProjPoint, h: &Hyperplane, f: &Field) -> bool {
    h.eval(&p.coords, f).is_zero()
}

/// All normalized points of PG(n-1, q) in lexicographic order of their
/// coordinate tuples.
pub fn enumerate_points(n: usize, f: &Field) -> Vec<ProjPoint> {
    let q = f.order() as usize;
    let total = q.pow(n as u32);
    (0..total)
        .map(|code| decode(code, n, q))
        .filter(|v| v.iter().find(|e| !e.is_zero()) == Some(&Elem::ONE))
        .map(|coords| ProjPoint { coords })
        .collect()
}

/// Base-q digits of `code`, most significant first.
fn decode(mut code: usize, n: usize, q: usize) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; n];
    for slot in v.iter_mut().rev() {
        *slot = Elem((code % q) as u8);
        code /= q;
    }
    v
}

fn encode(v: &[Elem], q: usize) -> usize {
    v.iter().fold(0, |acc, e| acc * q + e.index())
}

/// A projective line, materialized as its sorted point ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub base: [usize; 2],
    pub points: Vec<usize>,
}

impl Line {
    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

/// Outcome of [`Space::count_outside_three`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutsideCount {
    /// Points outside the union, by enumeration.
    pub enumerated: u64,
    /// The closed-form prediction for the sub-case.
    pub predicted: u64,
    /// Whether `H1 ∩ H2` is contained in `H3`.
    pub pencil: bool,
}

/// PG(n-1, q) with precomputed enumeration, lookup and incidence tables.
#[derive(Debug, Clone)]
pub struct Space {
    field: Field,
    n: usize,
    points: Vec<ProjPoint>,
    hyperplanes: Vec<Hyperplane>,
    /// Vector code to the id of its projective class; `u32::MAX` for zero.
    lookup: Vec<u32>,
    incidence: Vec<bool>,
}

impl Space {
    pub fn new(n: usize, field: Field) -> Result<Self> {
        let q = field.order();
        if n < 3 || (q as u64).checked_pow(n as u32).is_none_or(|t| t > MAX_VECTORS) {
            return Err(Error::Dimension { n, q });
        }
        let qs = q as usize;
        let points = enumerate_points(n, &field);
        let hyperplanes: Vec<Hyperplane> = points.iter().map(|p| Hyperplane { coeffs: p.coords.clone() }).collect();

        let mut lookup = vec![u32::MAX; qs.pow(n as u32)];
        for (id, p) in points.iter().enumerate() {
            for s in field.nonzero() {
                let scaled: Vec<Elem> = p.coords.iter().map(|&e| field.mul(e, s)).collect();
                lookup[encode(&scaled, qs)] = id as u32;
            }
        }

        let np = points.len();
        let mut incidence = vec![false; np * np];
        for (i, p) in points.iter().enumerate() {
            for (j, h) in hyperplanes.iter().enumerate() {
                incidence[i * np + j] = incident(p, h, &field);
            }
        }
        Ok(Space { field, n, points, hyperplanes, lookup, incidence })
    }

    pub fn with_order(n: usize, q: u32) -> Result<Self> {
        Self::new(n, Field::new(q)?)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    /// Number of points, which is also the number of hyperplanes.
    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn point(&self, id: usize) -> &ProjPoint {
        &self.points[id]
    }

    pub fn hyperplane(&self, id: usize) -> &Hyperplane {
        &self.hyperplanes[id]
    }

    /// Id of the point spanned by a vector, or `None` for the zero vector.
    pub fn point_id(&self, v: &[Elem]) -> Option<usize> {
        debug_assert_eq!(v.len(), self.n);
        match self.lookup[encode(v, self.q() as usize)] {
            u32::MAX => None,
            id => Some(id as usize),
        }
    }

    /// Id of the hyperplane with the given (not necessarily normalized)
    /// functional, or `None` for the zero functional.
    pub fn hyperplane_id(&self, coeffs: &[Elem]) -> Option<usize> {
        self.point_id(coeffs)
    }

    #[inline]
    pub fn incident(&self, point: usize, hyperplane: usize) -> bool {
        self.incidence[point * self.points.len() + hyperplane]
    }

    pub fn hyperplane_points(&self, h: usize) -> Vec<usize> {
        (0..self.num_points()).filter(|&p| self.incident(p, h)).collect()
    }

    pub fn hyperplanes_through(&self, p: usize) -> Vec<usize> {
        (0..self.num_points()).filter(|&h| self.incident(p, h)).collect()
    }

    /// Line through two distinct points: `<p1>`, `<p2>` and `<p1 + b p2>` for
    /// nonzero `b`.
    pub fn line_through(&self, p1: usize, p2: usize) -> Result<Line> {
        if p1 == p2 {
            return Err(Error::IdenticalPoints);
        }
        let f = &self.field;
        let (u, v) = (self.points[p1].coords(), self.points[p2].coords());
        let mut points = vec![p1, p2];
        for b in f.nonzero() {
            let w: Vec<Elem> = u.iter().zip(v).map(|(&x, &y)| f.add(x, f.mul(b, y))).collect();
            points.push(self.point_id(&w).expect("distinct points are independent"));
        }
        points.sort_unstable();
        Ok(Line { base: [p1, p2], points })
    }

    /// The pencil of hyperplanes through the codimension-2 subspace
    /// `h1 ∩ h2`, i.e. the line through `h1` and `h2` in the dual space.
    pub fn dual_line_through(&self, h1: usize, h2: usize) -> Result<Line> {
        self.line_through(h1, h2)
    }

    /// True iff all the given points lie on a common line.
    pub fn collinear(&self, pts: &[usize]) -> bool {
        let mut distinct = pts.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() <= 2 {
            return true;
        }
        let line = self.line_through(distinct[0], distinct[1]).expect("distinct");
        distinct.iter().all(|&p| line.contains(p))
    }

    /// Counts the points outside `h1 ∪ h2 ∪ h3` and the closed-form value
    /// `(q-1)^2 q^(n-3)` (generic position) or `(q-2) q^(n-2)` (when
    /// `h1 ∩ h2 ⊂ h3`).
    pub fn count_outside_three(&self, h1: usize, h2: usize, h3: usize) -> Result<OutsideCount> {
        if h1 == h2 || h1 == h3 || h2 == h3 {
            return Err(Error::RepeatedHyperplanes);
        }
        let np = self.num_points();
        let enumerated = (0..np)
            .filter(|&p| !self.incident(p, h1) && !self.incident(p, h2) && !self.incident(p, h3))
            .count() as u64;
        let pencil = (0..np).all(|p| !(self.incident(p, h1) && self.incident(p, h2)) || self.incident(p, h3));
        let q = self.q() as u64;
        let n = self.n as u32;
        let predicted = if pencil { (q - 2) * q.pow(n - 2) } else { (q - 1) * (q - 1) * q.pow(n - 3) };
        Ok(OutsideCount { enumerated, predicted, pencil })
    }

    /// Exhaustively searches for a hyperplane meeting `set` exactly in
    /// `target`. Returns the first such hyperplane in enumeration order.
    pub fn find_separating_hyperplane(&self, set: &[usize], target: usize) -> Result<Option<usize>> {
        if !set.contains(&target) {
            return Err(Error::TargetNotInSet(target));
        }
        Ok((0..self.num_points())
            .find(|&h| self.incident(target, h) && set.iter().all(|&p| p == target || !self.incident(p, h))))
    }
}
