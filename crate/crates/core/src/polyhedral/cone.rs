use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, dot_int, nullspace, primitive, primitive_int, rank, subsets, to_q, Q};

/// A point of the weight lattice `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticePoint(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticePoint(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.0)
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && primitive_int(&self.0) == self.0
    }

    pub fn primitive(&self) -> LatticePoint {
        LatticePoint(primitive_int(&self.0))
    }

    pub fn coord_sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|c| c.to_i64()).collect()
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A rational polyhedral cone given by its primitive extremal rays, with the
/// inequality description derived on construction.
///
/// Rays are sorted lexicographically. Equality, hashing and ordering only look
/// at the ambient dimension and the ray list; cones order by dimension first.
#[derive(Clone, Debug)]
pub struct RationalCone {
    ambient_dim: usize,
    rays: Vec<LatticePoint>,
    dim: usize,
    equations: Vec<Vec<BigInt>>,
    facets: Vec<Vec<BigInt>>,
    pointed: bool,
}

impl PartialEq for RationalCone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.rays == other.rays
    }
}

impl Eq for RationalCone {}

impl Hash for RationalCone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.rays.hash(state);
    }
}

impl PartialOrd for RationalCone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalCone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_dim, self.dim, &self.rays).cmp(&(other.ambient_dim, other.dim, &other.rays))
    }
}

impl fmt::Display for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

impl RationalCone {
    /// The cone spanned by `generators`. Generators are scaled to primitive
    /// vectors and non-extremal ones are dropped.
    pub fn new(ambient_dim: usize, generators: Vec<LatticePoint>) -> Result<Self> {
        for g in &generators {
            check_dim(ambient_dim, g.dim())?;
        }
        let mut rays: Vec<LatticePoint> = generators.into_iter().filter(|g| !g.is_zero()).map(|g| g.primitive()).collect();
        rays.sort();
        rays.dedup();
        let mut cone = Self::from_sorted_rays(ambient_dim, rays);
        if cone.pointed {
            let before = cone.rays.len();
            let facets = cone.facets.clone();
            let k = cone.dim;
            cone.rays.retain(|r| {
                let tight: Vec<Vec<Q>> = facets.iter().filter(|u| dot_int(u, r.coords()).is_zero()).map(|u| to_q(u)).collect();
                rank(&tight) + 1 >= k
            });
            if cone.rays.len() != before {
                cone = Self::from_sorted_rays(ambient_dim, cone.rays);
            }
        }
        Ok(cone)
    }

    pub fn from_i64(ambient_dim: usize, rays: &[&[i64]]) -> Result<Self> {
        Self::new(ambient_dim, rays.iter().map(|r| LatticePoint::from_i64(r)).collect())
    }

    fn from_sorted_rays(ambient_dim: usize, rays: Vec<LatticePoint>) -> Self {
        let rows: Vec<Vec<Q>> = rays.iter().map(|r| to_q(r.coords())).collect();
        let mut span = rows.clone();
        linalg::rref(&mut span);
        let dim = span.len();
        let equations: Vec<Vec<BigInt>> = nullspace(&rows, ambient_dim).iter().map(|v| primitive(v)).collect();
        let mut facets: Vec<Vec<BigInt>> = Vec::new();
        if dim >= 1 {
            for subset in subsets(rays.len(), dim - 1) {
                let sub: Vec<Vec<Q>> = subset.iter().map(|&i| rows[i].clone()).collect();
                if rank(&sub) != dim - 1 {
                    continue;
                }
                // normal u = Σ c_i b_i inside the span, orthogonal to the chosen rays
                let gram: Vec<Vec<Q>> = sub.iter().map(|t| span.iter().map(|b| linalg::dot(b, t)).collect()).collect();
                let ns = nullspace(&gram, dim);
                let Some(c) = ns.first() else { continue };
                let mut u = vec![Q::zero(); ambient_dim];
                for (ci, b) in c.iter().zip(&span) {
                    for (uj, bj) in u.iter_mut().zip(b) {
                        *uj += ci * bj;
                    }
                }
                let u = primitive(&u);
                let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(&u, r.coords())).collect();
                let u = if vals.iter().all(|v| !v.is_negative()) {
                    u
                } else if vals.iter().all(|v| !v.is_positive()) {
                    u.iter().map(|x| -x).collect()
                } else {
                    continue;
                };
                if !facets.contains(&u) {
                    facets.push(u);
                }
            }
        }
        facets.sort();
        let mut all: Vec<Vec<Q>> = equations.iter().map(|e| to_q(e)).collect();
        all.extend(facets.iter().map(|f| to_q(f)));
        let pointed = rank(&all) == ambient_dim;
        RationalCone { ambient_dim, rays, dim, equations, facets, pointed }
    }

    /// The cone `{x : eq·x = 0 for eq in equations, ineq·x ≥ 0 for ineq in inequalities}`.
    pub fn from_inequalities(ambient_dim: usize, equations: &[Vec<BigInt>], inequalities: &[Vec<BigInt>]) -> Result<Self> {
        let eq_rows: Vec<Vec<Q>> = equations.iter().map(|e| to_q(e)).collect();
        let basis = nullspace(&eq_rows, ambient_dim);
        let k = basis.len();
        if k == 0 {
            return Ok(Self::zero(ambient_dim));
        }
        let local: Vec<Vec<Q>> = inequalities.iter().map(|a| basis.iter().map(|b| linalg::dot(&to_q(a), b)).collect()).collect();
        if rank(&local) < k {
            return Err(Error::NotPointed);
        }
        let mut rays = Vec::new();
        for subset in subsets(local.len(), k - 1) {
            let sub: Vec<Vec<Q>> = subset.iter().map(|&i| local[i].clone()).collect();
            let ns = nullspace(&sub, k);
            if ns.len() != 1 {
                continue;
            }
            let mut v = vec![Q::zero(); ambient_dim];
            for (ci, b) in ns[0].iter().zip(&basis) {
                for (vj, bj) in v.iter_mut().zip(b) {
                    *vj += ci * bj;
                }
            }
            let v = primitive(&v);
            for cand in [v.clone(), v.iter().map(|x| -x).collect::<Vec<_>>()] {
                if inequalities.iter().all(|a| !dot_int(a, &cand).is_negative()) {
                    rays.push(LatticePoint::new(cand));
                }
            }
        }
        Self::new(ambient_dim, rays)
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::from_sorted_rays(ambient_dim, Vec::new())
    }

    /// The closed positive orthant spanned by the standard basis.
    pub fn orthant(ambient_dim: usize) -> Self {
        let rays = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ambient_dim];
                v[i] = BigInt::one();
                LatticePoint::new(v)
            })
            .collect();
        Self::new(ambient_dim, rays).expect("orthant rays have matching dimension")
    }

    pub fn ray(p: &LatticePoint) -> Self {
        Self::new(p.dim(), vec![p.clone()]).expect("single generator")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[LatticePoint] {
        &self.rays
    }

    /// The rays ordered by their reversed coordinate tuples, so the orthant
    /// lists `e_1, e_2, ...` in order. Chart variables follow this order.
    pub fn chart_rays(&self) -> Vec<LatticePoint> {
        let mut rays = self.rays.clone();
        rays.sort_by(|a, b| a.coords().iter().rev().cmp(b.coords().iter().rev()));
        rays
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    /// Inward facet normals (within the linear span).
    pub fn facet_normals(&self) -> &[Vec<BigInt>] {
        &self.facets
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn is_full_dim(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.contains_coords(p.coords())
    }

    pub fn contains_coords(&self, p: &[BigInt]) -> bool {
        self.equations.iter().all(|e| dot_int(e, p).is_zero()) && self.facets.iter().all(|u| !dot_int(u, p).is_negative())
    }

    pub fn contains_rational(&self, p: &[Q]) -> bool {
        self.equations.iter().all(|e| linalg::dot(&to_q(e), p).is_zero())
            && self.facets.iter().all(|u| !linalg::dot(&to_q(u), p).is_negative())
    }

    /// Relative-interior membership.
    pub fn contains_relint(&self, p: &[BigInt]) -> bool {
        self.equations.iter().all(|e| dot_int(e, p).is_zero()) && self.facets.iter().all(|u| dot_int(u, p).is_positive())
    }

    pub fn contains_cone(&self, other: &RationalCone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
    }

    /// A lattice point of the relative interior (the sum of the rays).
    pub fn relint_point(&self) -> LatticePoint {
        let mut acc = vec![BigInt::zero(); self.ambient_dim];
        for r in &self.rays {
            for (a, c) in acc.iter_mut().zip(r.coords()) {
                *a += c;
            }
        }
        LatticePoint(acc)
    }

    pub fn intersect(&self, other: &RationalCone) -> Result<RationalCone> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        RationalCone::from_inequalities(self.ambient_dim, &eqs, &ineqs)
    }

    /// True when the relative interiors of the two cones meet.
    pub fn relints_meet(&self, other: &RationalCone) -> bool {
        let Ok(meet) = self.intersect(other) else { return false };
        let p = meet.relint_point();
        self.contains_relint(p.coords()) && other.contains_relint(p.coords())
    }

    /// All faces, including `{0}` and the cone itself, in canonical order.
    pub fn faces(&self) -> Vec<RationalCone> {
        let n = self.rays.len();
        let mut sets: Vec<Vec<usize>> = vec![(0..n).collect()];
        let facet_sets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|u| (0..n).filter(|&i| dot_int(u, self.rays[i].coords()).is_zero()).collect())
            .collect();
        let mut frontier = sets.clone();
        while let Some(s) = frontier.pop() {
            for f in &facet_sets {
                let meet: Vec<usize> = s.iter().copied().filter(|i| f.contains(i)).collect();
                if !sets.contains(&meet) {
                    sets.push(meet.clone());
                    frontier.push(meet);
                }
            }
        }
        let mut faces: Vec<RationalCone> = sets
            .into_iter()
            .map(|s| RationalCone::from_sorted_rays(self.ambient_dim, s.iter().map(|&i| self.rays[i].clone()).collect()))
            .collect();
        faces.sort();
        faces.dedup();
        faces
    }

    pub fn is_face_of(&self, other: &RationalCone) -> bool {
        if !other.contains_cone(self) {
            return false;
        }
        // a face is cut out by the facets of `other` that vanish on its relative interior
        let p = self.relint_point();
        let tight: Vec<LatticePoint> = other
            .rays
            .iter()
            .filter(|r| {
                other
                    .facets
                    .iter()
                    .filter(|u| dot_int(u, p.coords()).is_zero())
                    .all(|u| dot_int(u, r.coords()).is_zero())
            })
            .cloned()
            .collect();
        tight == self.rays
    }

    /// True iff the rays extend to a basis of the ambient lattice.
    pub fn is_smooth(&self) -> Result<bool> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        if !self.is_simplicial() {
            return Ok(false);
        }
        let rows: Vec<Vec<BigInt>> = self.rays.iter().map(|r| r.coords().to_vec()).collect();
        Ok(linalg::maximal_minor_gcd(&rows).is_one())
    }

    /// Lattice multiplicity of a full-dimensional simplicial cone.
    pub fn multiplicity(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> = self.rays.iter().map(|r| r.coords().to_vec()).collect();
        linalg::maximal_minor_gcd(&rows)
    }

    /// Nonzero lattice points `Σ λ_i r_i` with all `λ_i ∈ [0, 1)` of a
    /// full-dimensional simplicial cone.
    pub fn parallelepiped_points(&self) -> Vec<LatticePoint> {
        assert!(self.is_full_dim() && self.is_simplicial(), "parallelepiped needs a full-dimensional simplicial cone");
        let n = self.ambient_dim;
        // columns of R^{-1}: solve R^T-system via rational inversion
        let mut aug: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut row: Vec<Q> = self.rays.iter().map(|r| Q::from_integer(r.coords()[i].clone())).collect();
                row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        linalg::rref(&mut aug);
        let frac = |x: &Q| x - Q::from_integer(x.floor().to_integer());
        let gens: Vec<Vec<Q>> = (0..n).map(|j| (0..n).map(|i| frac(&aug[i][n + j])).collect()).collect();
        let mut seen: Vec<Vec<Q>> = vec![vec![Q::zero(); n]];
        let mut frontier = seen.clone();
        while let Some(lam) = frontier.pop() {
            for g in &gens {
                let next: Vec<Q> = lam.iter().zip(g).map(|(a, b)| frac(&(a + b))).collect();
                if !seen.contains(&next) {
                    seen.push(next.clone());
                    frontier.push(next);
                }
            }
        }
        let mut out: Vec<LatticePoint> = seen
            .into_iter()
            .filter(|lam| lam.iter().any(|x| !x.is_zero()))
            .map(|lam| {
                let coords = (0..n)
                    .map(|i| {
                        lam.iter()
                            .zip(&self.rays)
                            .fold(Q::zero(), |acc, (l, r)| acc + l * Q::from_integer(r.coords()[i].clone()))
                            .to_integer()
                    })
                    .collect();
                LatticePoint::new(coords)
            })
            .collect();
        out.sort();
        out
    }

    /// Hilbert basis elements of a full-dimensional simplicial cone that are
    /// not rays.
    pub fn interior_hilbert_basis(&self) -> Vec<LatticePoint> {
        let par = self.parallelepiped_points();
        let mut candidates: Vec<LatticePoint> = self.rays.clone();
        candidates.extend(par.iter().cloned());
        par.iter()
            .filter(|p| {
                !candidates.iter().any(|q| {
                    q != *p && {
                        let diff: Vec<BigInt> = p.coords().iter().zip(q.coords()).map(|(a, b)| a - b).collect();
                        self.contains_coords(&diff)
                    }
                })
            })
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(n: usize, rays: &[&[i64]]) -> RationalCone {
        RationalCone::from_i64(n, rays).unwrap()
    }

    #[test]
    fn quadrant_faces() {
        let faces = cone(2, &[&[1, 0], &[0, 1]]).faces();
        assert_eq!(faces.len(), 4);
        assert_eq!(faces[0], RationalCone::zero(2));
        assert!(faces.contains(&cone(2, &[&[1, 0]])));
        assert!(faces.contains(&cone(2, &[&[0, 1]])));
        assert_eq!(faces[3], cone(2, &[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn ray_faces() {
        let r = cone(2, &[&[1, 1]]);
        assert_eq!(r.faces(), vec![RationalCone::zero(2), r.clone()]);
    }

    #[test]
    fn redundant_generators_dropped() {
        let c = cone(2, &[&[1, 0], &[1, 1], &[0, 2]]);
        assert_eq!(c.rays(), &[LatticePoint::from_i64(&[0, 1]), LatticePoint::from_i64(&[1, 0])]);
    }

    #[test]
    fn smoothness() {
        assert!(cone(2, &[&[1, 0], &[0, 1]]).is_smooth().unwrap());
        assert!(!cone(2, &[&[1, 0], &[1, 2]]).is_smooth().unwrap());
        assert!(cone(2, &[&[2, 3]]).is_smooth().unwrap());
        assert_eq!(cone(2, &[&[1, 0], &[-1, 0]]).is_smooth(), Err(Error::NotPointed));
    }

    #[test]
    fn intersection_of_quadrant_and_halfplane_wedge() {
        let a = cone(2, &[&[1, 0], &[0, 1]]);
        let b = cone(2, &[&[1, 1], &[1, -1]]);
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, cone(2, &[&[1, 0], &[1, 1]]));
        assert!(a.relints_meet(&b));
        let r = cone(2, &[&[1, 0]]);
        assert!(!r.relints_meet(&cone(2, &[&[1, 1], &[0, 1]])));
    }

    #[test]
    fn face_relation() {
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        assert!(cone(2, &[&[1, 0]]).is_face_of(&q));
        assert!(!cone(2, &[&[1, 1]]).is_face_of(&q));
        assert!(RationalCone::zero(2).is_face_of(&q));
    }

    #[test]
    fn hilbert_basis_of_index_two_cone() {
        let c = cone(2, &[&[1, 0], &[1, 2]]);
        assert_eq!(c.parallelepiped_points(), vec![LatticePoint::from_i64(&[1, 1])]);
        assert_eq!(c.interior_hilbert_basis(), vec![LatticePoint::from_i64(&[1, 1])]);
        let d = cone(2, &[&[1, 0], &[1, 3]]);
        assert_eq!(d.interior_hilbert_basis(), vec![LatticePoint::from_i64(&[1, 1]), LatticePoint::from_i64(&[1, 2])]);
    }
}
