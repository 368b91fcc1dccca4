//! Point-hyperplane anti-flags and the four relations between them.

use std::fmt;

use crate::error::{Error, Result};
use crate::gfq::Elem;
use crate::matrix::Matrix;
use crate::projgeom::Space;

/// A non-incident (point, hyperplane) pair, by ids into a [`Space`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AntiFlag {
    pub point: usize,
    pub hyperplane: usize,
}

/// How two anti-flags `(p1, H1)`, `(p2, H2)` are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    Eq,
    /// Exactly one cross-incidence: `p_j ∈ H_{3-j}` and `p_{3-j} ∉ H_j`.
    R1,
    /// Both cross-incidences hold.
    R2,
    /// Common point or common hyperplane.
    R3,
    /// Distinct points, distinct hyperplanes, no cross-incidence.
    R4,
}

impl RelationKind {
    pub const RELATIONS: [RelationKind; 4] = [RelationKind::R1, RelationKind::R2, RelationKind::R3, RelationKind::R4];

    /// The relation index 1..=4, or `None` for `Eq`.
    pub fn index(self) -> Option<u8> {
        match self {
            RelationKind::Eq => None,
            RelationKind::R1 => Some(1),
            RelationKind::R2 => Some(2),
            RelationKind::R3 => Some(3),
            RelationKind::R4 => Some(4),
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(RelationKind::R1),
            2 => Some(RelationKind::R2),
            3 => Some(RelationKind::R3),
            4 => Some(RelationKind::R4),
            _ => None,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationKind::Eq => "EQ",
            RelationKind::R1 => "R1",
            RelationKind::R2 => "R2",
            RelationKind::R3 => "R3",
            RelationKind::R4 => "R4",
        };
        f.write_str(s)
    }
}

/// Classifies a pair of anti-flags of `space`.
pub fn classify(space: &Space, a: AntiFlag, b: AntiFlag) -> RelationKind {
    if a == b {
        return RelationKind::Eq;
    }
    if a.point == b.point || a.hyperplane == b.hyperplane {
        return RelationKind::R3;
    }
    let a_on_b = space.incident(a.point, b.hyperplane);
    let b_on_a = space.incident(b.point, a.hyperplane);
    match (a_on_b, b_on_a) {
        (true, true) => RelationKind::R2,
        (false, false) => RelationKind::R4,
        _ => RelationKind::R1,
    }
}

/// The anti-flag set of PG(n-1, q) in (point id, hyperplane id)
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct AntiFlags {
    space: Space,
    flags: Vec<AntiFlag>,
    /// `point * N + hyperplane` to anti-flag id, `u32::MAX` for flags.
    index: Vec<u32>,
}

impl AntiFlags {
    pub fn new(space: Space) -> Self {
        let np = space.num_points();
        let mut flags = Vec::new();
        let mut index = vec![u32::MAX; np * np];
        for p in 0..np {
            for h in 0..np {
                if !space.incident(p, h) {
                    index[p * np + h] = flags.len() as u32;
                    flags.push(AntiFlag { point: p, hyperplane: h });
                }
            }
        }
        AntiFlags { space, flags, index }
    }

    pub fn enumerate(n: usize, q: u32) -> Result<Self> {
        Ok(Self::new(Space::with_order(n, q)?))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn flags(&self) -> &[AntiFlag] {
        &self.flags
    }

    pub fn get(&self, id: usize) -> AntiFlag {
        self.flags[id]
    }

    pub fn id_of(&self, point: usize, hyperplane: usize) -> Option<usize> {
        match self.index[point * self.space.num_points() + hyperplane] {
            u32::MAX => None,
            id => Some(id as usize),
        }
    }

    /// Id of the anti-flag with the given point and hyperplane vectors.
    pub fn id_of_vectors(&self, point: &[Elem], hyperplane: &[Elem]) -> Option<usize> {
        self.id_of(self.space.point_id(point)?, self.space.hyperplane_id(hyperplane)?)
    }

    pub fn classify(&self, a: usize, b: usize) -> RelationKind {
        classify(&self.space, self.flags[a], self.flags[b])
    }

    /// `(p, H) -> (u(H)^0, u(p)^0)` with `u` the coordinate identification
    /// of V with its dual: the new point has the coefficients of `H` as
    /// coordinates and the new hyperplane has the coordinates of `p` as
    /// coefficients.
    pub fn duality_transform(&self, id: usize) -> usize {
        let a = self.flags[id];
        self.id_of(a.hyperplane, a.point).expect("incidence is symmetric under the swap")
    }

    /// The (n-1, 1)-involution of an anti-flag (odd characteristic):
    /// `x -> x - 2 h(x)/h(p) p`, fixing `H` pointwise and negating `<p>`.
    pub fn involution_of(&self, id: usize) -> Result<Matrix> {
        let f = self.space.field();
        if f.characteristic() == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let a = self.flags[id];
        let p = self.space.point(a.point).coords();
        let h = self.space.hyperplane(a.hyperplane);
        let two = f.from_int(2);
        let scale = f.div(two, h.eval(p, f));
        let n = self.space.dim();
        let mut m = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let t = f.mul(scale, f.mul(p[i], h.coeffs()[j]));
                m.set(i, j, f.sub(m.get(i, j), t));
            }
        }
        Ok(m)
    }

    /// Whether the involutions of two distinct anti-flags commute, and
    /// whether their product is a transvection `x -> x + α(x) x0` with
    /// `α(x0) = 0` (tested as: `M1 M2 - I` has rank one and squares to zero).
    pub fn involution_relation_checks(&self, a: usize, b: usize) -> Result<InvolutionRelations> {
        if a == b {
            return Err(Error::IdenticalAntiFlags);
        }
        let f = self.space.field();
        let m1 = self.involution_of(a)?;
        let m2 = self.involution_of(b)?;
        let prod = m1.mul(&m2, f);
        let commute = prod == m2.mul(&m1, f);
        let t = prod.sub(&Matrix::identity(self.space.dim()), f);
        let transvection = t.rank(f) == 1 && t.mul(&t, f).is_zero();
        Ok(InvolutionRelations { commute, transvection })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvolutionRelations {
    pub commute: bool,
    pub transvection: bool,
}
