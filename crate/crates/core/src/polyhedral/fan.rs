use std::collections::BTreeSet;

use crate::error::{check_dim, Error, Result};

use super::cone::{LatticePoint, RationalCone};

/// A face-closed collection of cones on a pointed full-dimensional support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    ambient_dim: usize,
    support: RationalCone,
    cones: Vec<RationalCone>,
}

impl Fan {
    /// Builds a fan from generating cones, closing under faces. Invariants are
    /// not checked here; see [`Fan::validate`].
    pub fn from_cones(support: RationalCone, generators: impl IntoIterator<Item = RationalCone>) -> Self {
        let mut all = BTreeSet::new();
        for c in generators {
            all.extend(c.faces());
        }
        Fan { ambient_dim: support.ambient_dim(), support, cones: all.into_iter().collect() }
    }

    /// The fan of all faces of `support`.
    pub fn of_cone(support: &RationalCone) -> Self {
        Self::from_cones(support.clone(), [support.clone()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn support(&self) -> &RationalCone {
        &self.support
    }

    /// All cones in canonical order (dimension, then sorted ray list).
    pub fn cones(&self) -> &[RationalCone] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> Vec<RationalCone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.dim() > c.dim() && d.contains_cone(c)))
            .cloned()
            .collect()
    }

    pub fn rays(&self) -> Vec<LatticePoint> {
        self.cones.iter().filter(|c| c.dim() == 1).map(|c| c.rays()[0].clone()).collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(|c| c.is_smooth().unwrap_or(false))
    }

    /// The unique cone whose relative interior contains `p`, if `p` lies in the support.
    pub fn carrier(&self, p: &LatticePoint) -> Option<&RationalCone> {
        self.cones.iter().find(|c| c.contains_relint(p.coords()))
    }

    /// Checks every fan invariant: face closure, face-to-face intersections,
    /// and that the full-dimensional cones tile the support.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(format!("not a fan: {m}")));
        if !self.support.is_pointed() || !self.support.is_full_dim() {
            return Err(Error::UnsupportedSupport("support must be pointed and full-dimensional".into()));
        }
        for c in &self.cones {
            if c.ambient_dim() != self.ambient_dim {
                return bad("ambient dimension mismatch");
            }
            if !self.support.contains_cone(c) {
                return bad("cone outside the support");
            }
            for f in c.faces() {
                if self.cones.binary_search(&f).is_err() {
                    return bad("not closed under faces");
                }
            }
        }
        let maxes = self.maximal_cones();
        if maxes.iter().any(|c| !c.is_full_dim()) {
            return bad("maximal cone of lower dimension");
        }
        for (i, a) in maxes.iter().enumerate() {
            for b in &maxes[i + 1..] {
                let m = a.intersect(b)?;
                if !m.is_face_of(a) || !m.is_face_of(b) {
                    return bad("intersection is not a common face");
                }
            }
        }
        let n = self.ambient_dim;
        let support_walls = self.support.facet_normals();
        for w in self.cones.iter().filter(|c| c.dim() + 1 == n) {
            let on_boundary = support_walls.iter().any(|u| w.rays().iter().all(|r| crate::linalg::dot_int(u, r.coords()).sign() == num_bigint::Sign::NoSign));
            let count = maxes.iter().filter(|m| m.contains_cone(w)).count();
            let expect = if on_boundary { 1 } else { 2 };
            if count != expect {
                return bad("maximal cones do not tile the support");
            }
        }
        if n == 1 && maxes.len() != 1 {
            return bad("maximal cones do not tile the support");
        }
        Ok(())
    }

    /// True iff every cone of `self` is contained in some cone of `coarse`.
    pub fn refines_fan(&self, coarse: &Fan) -> bool {
        self.cones.iter().all(|c| coarse.cones.iter().any(|d| d.contains_cone(c)))
    }

    /// Star subdivision at the primitive point `r`.
    pub fn star_subdivision(&self, r: &LatticePoint) -> Result<Fan> {
        check_dim(self.ambient_dim, r.dim())?;
        if !self.support.contains(r) || r.is_zero() {
            return Err(Error::RayOutsideSupport(r.to_string()));
        }
        let r = r.primitive();
        if self.rays().contains(&r) {
            return Ok(self.clone());
        }
        Ok(self.subdivide_at(&r))
    }

    /// Replaces each maximal cone containing `r` by the cones over its facets
    /// avoiding `r`. Works also when `r` is already a ray (pulling refinement).
    pub(crate) fn subdivide_at(&self, r: &LatticePoint) -> Fan {
        let mut out = Vec::new();
        for m in self.maximal_cones() {
            if !m.contains(r) {
                out.push(m);
                continue;
            }
            for f in m.faces().into_iter().filter(|f| f.dim() + 1 == m.dim() && !f.contains(r)) {
                let mut gens = f.rays().to_vec();
                gens.push(r.clone());
                out.push(RationalCone::new(self.ambient_dim, gens).expect("dimensions agree"));
            }
        }
        Fan::from_cones(self.support.clone(), out)
    }

    /// The fan of all pairwise intersections.
    pub fn common_refinement(&self, other: &Fan) -> Result<Fan> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        if self.support != other.support {
            return Err(Error::SupportMismatch);
        }
        let mut out = Vec::new();
        for a in self.maximal_cones() {
            for b in other.maximal_cones() {
                let c = a.intersect(&b)?;
                if c.is_full_dim() {
                    out.push(c);
                }
            }
        }
        Ok(Fan::from_cones(self.support.clone(), out))
    }
}

/// One stratum: a union of relative interiors of `pieces`, labelled by `tag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumCell<T> {
    pub pieces: Vec<RationalCone>,
    pub tag: T,
}

impl<T> StratumCell<T> {
    /// The cone generated by all pieces (the closure when the stratum is convex).
    pub fn hull(&self, ambient_dim: usize) -> RationalCone {
        let gens = self.pieces.iter().flat_map(|p| p.rays().iter().cloned()).collect();
        RationalCone::new(ambient_dim, gens).expect("pieces share the ambient dimension")
    }
}

/// A piecewise-linear stratification of a cone into tagged cells. Each cell
/// is a union of relative interiors of polyhedral pieces; together the pieces
/// form a fan on the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLStratification<T> {
    pub ambient_dim: usize,
    pub support: RationalCone,
    pub cells: Vec<StratumCell<T>>,
}

impl<T: Clone + PartialEq> PLStratification<T> {
    /// The stratification with one cell covering the whole support.
    pub fn single(support: &RationalCone, tag: T) -> Self {
        PLStratification {
            ambient_dim: support.ambient_dim(),
            support: support.clone(),
            cells: vec![StratumCell { pieces: support.faces(), tag }],
        }
    }

    /// Groups tagged pieces into cells: pieces with equal tags related by the
    /// face relation end up in the same cell.
    pub fn from_tagged_pieces(support: &RationalCone, pieces: Vec<(RationalCone, T)>) -> Self {
        let n = pieces.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && pieces[i].1 == pieces[j].1 && pieces[i].0.dim() < pieces[j].0.dim() && pieces[i].0.is_face_of(&pieces[j].0) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut cells: Vec<(usize, StratumCell<T>)> = Vec::new();
        for (i, (cone, tag)) in pieces.into_iter().enumerate() {
            let root = find(&mut parent, i);
            match cells.iter_mut().find(|(r, _)| *r == root) {
                Some((_, cell)) => cell.pieces.push(cone),
                None => cells.push((root, StratumCell { pieces: vec![cone], tag })),
            }
        }
        let mut cells: Vec<StratumCell<T>> = cells.into_iter().map(|(_, c)| c).collect();
        for c in &mut cells {
            c.pieces.sort();
        }
        cells.sort_by(|a, b| a.pieces.cmp(&b.pieces));
        PLStratification { ambient_dim: support.ambient_dim(), support: support.clone(), cells }
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&RationalCone, usize)> {
        self.cells.iter().enumerate().flat_map(|(i, c)| c.pieces.iter().map(move |p| (p, i)))
    }

    /// The fan formed by all pieces.
    pub fn piece_fan(&self) -> Fan {
        Fan::from_cones(self.support.clone(), self.pieces().map(|(p, _)| p.clone()))
    }

    /// Index of the cell whose relative-interior union contains `p`.
    pub fn cell_of(&self, p: &LatticePoint) -> Option<usize> {
        self.pieces().find(|(c, _)| c.contains_relint(p.coords())).map(|(_, i)| i)
    }

    /// Checks that the pieces form a fan on the support (so their relative
    /// interiors partition it).
    pub fn validate(&self) -> Result<()> {
        let fan = self.piece_fan();
        fan.validate()?;
        let count = self.pieces().count();
        if count != fan.cones().len() {
            return Err(Error::InvalidInput("stratification pieces are not face-closed and distinct".into()));
        }
        Ok(())
    }
}

/// True iff every cell of `strat` is a union of relative interiors of cones of `fan`.
pub fn refines<T>(fan: &Fan, strat: &PLStratification<T>) -> Result<bool> {
    check_dim(fan.ambient_dim, strat.ambient_dim)?;
    if fan.support != strat.support {
        return Err(Error::SupportMismatch);
    }
    for tau in fan.cones() {
        let mut cell: Option<usize> = None;
        for (cell_idx, piece) in strat.cells.iter().enumerate().flat_map(|(i, c)| c.pieces.iter().map(move |p| (i, p))) {
            if tau.relints_meet(piece) {
                match cell {
                    None => cell = Some(cell_idx),
                    Some(c) if c != cell_idx => return Ok(false),
                    _ => {}
                }
            }
        }
        if cell.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A smooth fan on the support of `strat` refining it. Deterministic.
///
/// The piece fan is first coarsened by merging adjacent maximal cones while
/// the result remains a fan refining `strat`; non-simplicial cones are then
/// triangulated by pulling and the rest resolved by star subdivisions at
/// Hilbert-basis points of least coordinate sum.
pub fn stratification_to_smooth_fan<T: Clone + PartialEq>(strat: &PLStratification<T>) -> Result<Fan> {
    let coarse = coarsen(strat)?;
    Ok(resolve(coarse))
}

fn coarsen<T: Clone + PartialEq>(strat: &PLStratification<T>) -> Result<Fan> {
    let support = strat.support.clone();
    let mut maxes = strat.piece_fan().maximal_cones();
    'outer: loop {
        maxes.sort();
        for i in 0..maxes.len() {
            for j in i + 1..maxes.len() {
                let (a, b) = (&maxes[i], &maxes[j]);
                let shared = a.intersect(b)?;
                if shared.dim() + 1 != a.ambient_dim() {
                    continue;
                }
                let Some(hull) = convex_union(a, b, &shared) else { continue };
                let mut candidate: Vec<RationalCone> =
                    maxes.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, c)| c.clone()).collect();
                candidate.push(hull);
                let fan = Fan::from_cones(support.clone(), candidate.clone());
                if fan.validate().is_ok() && refines(&fan, strat)? {
                    maxes = candidate;
                    continue 'outer;
                }
            }
        }
        break;
    }
    Ok(Fan::from_cones(support, maxes))
}

/// The hull of `a ∪ b` when that union is convex.
fn convex_union(a: &RationalCone, b: &RationalCone, shared: &RationalCone) -> Option<RationalCone> {
    let n = a.ambient_dim();
    let hull = RationalCone::new(n, a.rays().iter().chain(b.rays()).cloned().collect()).ok()?;
    // the wall normal, oriented positive on `a`
    let normal = shared.equations().first()?.clone();
    let sign_a = a.rays().iter().map(|r| crate::linalg::dot_int(&normal, r.coords())).find(|v| v.sign() != num_bigint::Sign::NoSign)?;
    let normal: Vec<_> = if sign_a.sign() == num_bigint::Sign::Plus { normal } else { normal.iter().map(|x| -x).collect() };
    let neg: Vec<_> = normal.iter().map(|x| -x).collect();
    let eqs = hull.equations().to_vec();
    let side = |dir: &Vec<num_bigint::BigInt>| {
        let mut ineqs = hull.facet_normals().to_vec();
        ineqs.push(dir.clone());
        RationalCone::from_inequalities(n, &eqs, &ineqs).ok()
    };
    if side(&normal)? == *a && side(&neg)? == *b {
        Some(hull)
    } else {
        None
    }
}

fn resolve(mut fan: Fan) -> Fan {
    loop {
        let maxes = fan.maximal_cones();
        let Some(bad) = maxes.iter().find(|c| !c.is_smooth().unwrap_or(false)) else {
            return fan;
        };
        fan = if !bad.is_simplicial() {
            fan.subdivide_at(&bad.rays()[0])
        } else {
            let mut hb = bad.interior_hilbert_basis();
            hb.sort_by(|p, q| p.coord_sum().cmp(&q.coord_sum()).then_with(|| p.cmp(q)));
            fan.subdivide_at(&hb[0])
        };
    }
}
