//! Semilinear maps acting on anti-flags, and orbits of the generated group.

use std::collections::HashMap;

use rand::Rng;

use crate::antiflags::AntiFlags;
use crate::error::{Error, Result};
use crate::gfq::{Elem, Field};
use crate::matrix::Matrix;
use crate::projgeom::Space;
use crate::relgraphs::RelGraph;

/// `x -> M σ(x)` with `σ` a power of the Frobenius automorphism. Hyperplanes
/// go to `σ(h) M^-1`, so incidence is preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    matrix: Matrix,
    inverse: Matrix,
    frob_power: u32,
}

impl SemilinearMap {
    /// Rejects singular matrices; `frob_power` is taken modulo the field degree.
    pub fn new(matrix: Matrix, frob_power: u32, f: &Field) -> Result<Self> {
        let inverse = matrix.inverse(f).ok_or(Error::SingularMatrix)?;
        Ok(SemilinearMap { matrix, inverse, frob_power: frob_power % f.degree() })
    }

    pub fn identity(n: usize) -> Self {
        SemilinearMap { matrix: Matrix::identity(n), inverse: Matrix::identity(n), frob_power: 0 }
    }

    /// A uniformly random invertible matrix with a random Frobenius power.
    pub fn random<R: Rng + ?Sized>(n: usize, f: &Field, rng: &mut R) -> Self {
        loop {
            let rows: Vec<Vec<Elem>> =
                (0..n).map(|_| (0..n).map(|_| Elem(rng.gen_range(0..f.order()) as u8)).collect()).collect();
            if let Ok(m) = Self::new(Matrix::from_rows(&rows), rng.gen_range(0..f.degree()), f) {
                return m;
            }
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn frob_power(&self) -> u32 {
        self.frob_power
    }

    fn frob(&self, v: &[Elem], f: &Field) -> Vec<Elem> {
        v.iter().map(|&e| f.frobenius_pow(e, self.frob_power)).collect()
    }

    pub fn apply_point(&self, space: &Space, p: usize) -> usize {
        let f = space.field();
        let image = self.matrix.apply(&self.frob(space.point(p).coords(), f), f);
        space.point_id(&image).expect("invertible maps send points to points")
    }

    pub fn apply_hyperplane(&self, space: &Space, h: usize) -> usize {
        let f = space.field();
        let image = self.inverse.apply_row(&self.frob(space.hyperplane(h).coeffs(), f), f);
        space.hyperplane_id(&image).expect("invertible maps send hyperplanes to hyperplanes")
    }

    pub fn apply(&self, flags: &AntiFlags, id: usize) -> usize {
        let space = flags.space();
        let a = flags.get(id);
        flags
            .id_of(self.apply_point(space, a.point), self.apply_hyperplane(space, a.hyperplane))
            .expect("incidence is preserved")
    }

    /// The induced permutation of anti-flag ids.
    pub fn permutation(&self, flags: &AntiFlags) -> Vec<u32> {
        (0..flags.len()).map(|id| self.apply(flags, id) as u32).collect()
    }
}

/// Which group to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// GL(n, q).
    Linear,
    /// ΓL(n, q): adds the Frobenius map.
    Semilinear,
    /// ΓL(n, q) extended by the duality transform.
    WithDuality,
}

/// Generators of a group acting on the anti-flags.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub maps: Vec<SemilinearMap>,
    pub duality: bool,
}

impl GeneratorSet {
    /// Permutations of anti-flag ids, one per generator.
    pub fn permutations(&self, flags: &AntiFlags) -> Vec<Vec<u32>> {
        let mut perms: Vec<Vec<u32>> = self.maps.iter().map(|m| m.permutation(flags)).collect();
        if self.duality {
            perms.push((0..flags.len()).map(|id| flags.duality_transform(id) as u32).collect());
        }
        perms
    }
}

/// An elementary transvection `I + E_12`, the cyclic coordinate shift,
/// `diag(ω, 1, ..., 1)` for a primitive `ω`, and, depending on `kind`, the
/// Frobenius map and the duality transform.
pub fn gl_generators(space: &Space, kind: GroupKind) -> GeneratorSet {
    let f = space.field();
    let n = space.dim();
    let mut transvection = Matrix::identity(n);
    transvection.set(0, 1, Elem::ONE);
    let mut shift = Matrix::zero(n);
    for i in 0..n {
        shift.set((i + 1) % n, i, Elem::ONE);
    }
    let mut diag = vec![Elem::ONE; n];
    diag[0] = f.primitive_element();
    let mut maps: Vec<SemilinearMap> = [transvection, shift, Matrix::diagonal(&diag)]
        .into_iter()
        .map(|m| SemilinearMap::new(m, 0, f).expect("generators are invertible"))
        .collect();
    if kind != GroupKind::Linear && f.degree() > 1 {
        maps.push(SemilinearMap::new(Matrix::identity(n), 1, f).expect("identity is invertible"));
    }
    GeneratorSet { maps, duality: kind == GroupKind::WithDuality }
}

/// Orbits of the group generated by `perms` on `0..order`, each sorted,
/// listed by smallest element.
pub fn vertex_orbits(order: usize, perms: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; order];
    let mut orbits = Vec::new();
    for start in 0..order {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let v = orbit[i];
            for p in perms {
                let w = p[v] as usize;
                if !seen[w] {
                    seen[w] = true;
                    orbit.push(w);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Edge orbits of a graph under the group generated by `perms`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrbits {
    /// Orbit sizes, in order of their smallest edge.
    pub sizes: Vec<usize>,
    /// The smallest edge of each orbit.
    pub representatives: Vec<(usize, usize)>,
}

impl EdgeOrbits {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Breadth-first search over edges as sorted id pairs. Every permutation
/// must be an automorphism of `graph`.
pub fn edge_orbits(graph: &RelGraph, perms: &[Vec<u32>]) -> Result<EdgeOrbits> {
    if perms.iter().any(|p| !is_automorphism(graph, p)) {
        return Err(Error::NotAutomorphism);
    }
    let edges: Vec<(usize, usize)> = graph.edges().collect();
    let index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut seen = vec![false; edges.len()];
    let mut sizes = Vec::new();
    let mut representatives = Vec::new();
    for start in 0..edges.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = vec![start];
        let mut i = 0;
        while i < queue.len() {
            let (a, b) = edges[queue[i]];
            for p in perms {
                let (x, y) = (p[a] as usize, p[b] as usize);
                let e = index[&(x.min(y), x.max(y))];
                if !seen[e] {
                    seen[e] = true;
                    queue.push(e);
                }
            }
            i += 1;
        }
        sizes.push(queue.len());
        representatives.push(edges[start]);
    }
    Ok(EdgeOrbits { sizes, representatives })
}

/// Whether a permutation of the vertices preserves adjacency.
pub fn is_automorphism(graph: &RelGraph, perm: &[u32]) -> bool {
    perm.len() == graph.order()
        && graph.edges().all(|(a, b)| graph.is_adjacent(perm[a] as usize, perm[b] as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antiflags::RelationKind;

    fn v(xs: &[u8]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn identity_fixes_everything() {
        let flags = AntiFlags::enumerate(3, 3).unwrap();
        let id = SemilinearMap::identity(3);
        assert!((0..flags.len()).all(|a| id.apply(&flags, a) == a));
    }

    #[test]
    fn coordinate_swap() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let f = flags.space().field();
        let swap = Matrix::from_rows(&[v(&[0, 1, 0]), v(&[1, 0, 0]), v(&[0, 0, 1])]);
        let m = SemilinearMap::new(swap, 0, f).unwrap();
        let a = flags.id_of_vectors(&v(&[1, 0, 0]), &v(&[1, 0, 0])).unwrap();
        let b = flags.id_of_vectors(&v(&[0, 1, 0]), &v(&[0, 1, 0])).unwrap();
        assert_eq!(m.apply(&flags, a), b);
    }

    #[test]
    fn singular_matrix_rejected() {
        let f = Field::new(3).unwrap();
        let m = Matrix::from_rows(&[v(&[1, 1, 0]), v(&[1, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(SemilinearMap::new(m, 0, &f), Err(Error::SingularMatrix));
    }

    #[test]
    fn frobenius_power_reduced() {
        let f = Field::new(4).unwrap();
        let m = SemilinearMap::new(Matrix::identity(3), 3, &f).unwrap();
        assert_eq!(m.frob_power(), 1);
    }

    #[test]
    fn generators_are_automorphisms_at_3_2() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let perms = gl_generators(flags.space(), GroupKind::WithDuality).permutations(&flags);
        for kind in RelationKind::RELATIONS {
            let g = RelGraph::build(kind, &flags).unwrap();
            assert!(perms.iter().all(|p| is_automorphism(&g, p)));
        }
    }

    #[test]
    fn single_edge_orbit_of_gamma4_at_3_2() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let perms = gl_generators(flags.space(), GroupKind::WithDuality).permutations(&flags);
        let g4 = RelGraph::build(RelationKind::R4, &flags).unwrap();
        let orbits = edge_orbits(&g4, &perms).unwrap();
        assert_eq!(orbits.count(), 1);
        assert_eq!(orbits.sizes[0], g4.edge_count());
    }
}
