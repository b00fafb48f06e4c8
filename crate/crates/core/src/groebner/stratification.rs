use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::to_q;
use crate::polyhedral::{Fan, LatticePoint, PLStratification, RationalCone};

use super::gb::{MarkedGB, Submodule};
use super::initial::InitialModuleOracle;
use super::poly::{Exponent, ModuleVector};

/// A Gröbner stratification: cells of the support tagged by the initial module
/// of the submodule at any weight in their relative interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerStratification {
    pub submodule: Submodule,
    pub stratification: PLStratification<MarkedGB>,
}

impl GroebnerStratification {
    pub fn cells(&self) -> &[crate::polyhedral::StratumCell<MarkedGB>] {
        &self.stratification.cells
    }

    /// The tag of the cell whose relative interior contains `w`.
    pub fn tag_at(&self, w: &LatticePoint) -> Option<&MarkedGB> {
        self.stratification.cell_of(w).map(|i| &self.stratification.cells[i].tag)
    }
}

/// The distinct `x`-exponents of a homogenized vector (the leading `t` is dropped).
fn newton_support(v: &ModuleVector) -> BTreeSet<Exponent> {
    v.terms().map(|(e, _, _)| e[1..].to_vec()).collect()
}

/// Full-dimensional pieces of `d` on which a single exponent of `support`
/// minimizes the weight pairing.
fn split_by(d: &RationalCone, support: &BTreeSet<Exponent>) -> Vec<RationalCone> {
    if support.len() < 2 {
        return vec![d.clone()];
    }
    let n = d.ambient_dim();
    let mut pieces = Vec::new();
    for a in support {
        let mut ineqs: Vec<Vec<BigInt>> = d.facet_normals().to_vec();
        for b in support {
            if b != a {
                ineqs.push(b.iter().zip(a).map(|(x, y)| BigInt::from(x - y)).collect());
            }
        }
        let piece = RationalCone::from_inequalities(n, d.equations(), &ineqs).expect("subcone of a pointed cone is pointed");
        if piece.dim() == n {
            pieces.push(piece);
        }
    }
    pieces
}

fn weight_of(cone: &RationalCone) -> Vec<crate::linalg::Q> {
    to_q(cone.relint_point().coords())
}

/// Computes the Gröbner stratification of `g` on a pointed full-dimensional
/// support cone.
///
/// Maximal cones are refined by the normal fans of the Gröbner basis elements
/// met along the way until every maximal cone lies in a single Gröbner cone;
/// every face of the resulting fan is then tagged with its initial module and
/// equal-tagged neighbours are merged.
pub fn groebner_stratification(g: &Submodule, support: &RationalCone) -> Result<GroebnerStratification> {
    let n = g.nvars();
    if support.ambient_dim() != n {
        return Err(Error::UnsupportedSupport(format!("support lives in dimension {}, the torus has rank {n}", support.ambient_dim())));
    }
    if !support.is_pointed() || !support.is_full_dim() {
        return Err(Error::UnsupportedSupport("support must be a pointed full-dimensional cone".into()));
    }
    let oracle = InitialModuleOracle::new(g);
    let mut maxes: Vec<RationalCone> = vec![support.clone()];
    let mut bases: BTreeMap<RationalCone, MarkedGB> = BTreeMap::new();
    let mut walls: BTreeSet<BTreeSet<Exponent>> = BTreeSet::new();
    loop {
        let mut fresh: Vec<BTreeSet<Exponent>> = Vec::new();
        for d in &maxes {
            let basis = bases.entry(d.clone()).or_insert_with(|| oracle.weight_basis(&weight_of(d)));
            for e in basis.elements() {
                let s = newton_support(e);
                if s.len() > 1 && !walls.contains(&s) && !fresh.contains(&s) {
                    fresh.push(s);
                }
            }
        }
        let mut changed = false;
        for s in fresh {
            let mut next = Vec::with_capacity(maxes.len());
            for d in &maxes {
                let pieces = split_by(d, &s);
                changed |= pieces.len() > 1;
                next.extend(pieces);
            }
            maxes = next;
            walls.insert(s);
        }
        if !changed {
            break;
        }
    }
    maxes.sort();
    let fan = Fan::from_cones(support.clone(), maxes.iter().cloned());
    let mut tagged = Vec::with_capacity(fan.cones().len());
    for rho in fan.cones() {
        let d = maxes.iter().find(|d| rho.is_face_of(d) || *d == rho).expect("every cone lies in a maximal cone");
        let basis = &bases[d];
        tagged.push((rho.clone(), oracle.initial_from_basis(basis, &weight_of(rho))));
    }
    Ok(GroebnerStratification {
        submodule: g.clone(),
        stratification: PLStratification::from_tagged_pieces(support, tagged),
    })
}

#[cfg(test)]
mod tests {
    use super::super::gb::laurent_canonical;
    use super::super::poly::Poly;
    use super::*;
    use crate::polyhedral::{refines, stratification_to_smooth_fan};

    fn mv(src: &[&str], vars: &[&str]) -> ModuleVector {
        let polys: Vec<Poly> = src.iter().map(|s| Poly::parse(s, vars).unwrap()).collect();
        ModuleVector::from_polys(&polys)
    }

    #[test]
    fn two_squares_give_three_cells() {
        let vars = ["x", "y"];
        let g = Submodule::new(2, 2, vec![mv(&["y^2", "-x^2"], &vars)]).unwrap();
        let s = groebner_stratification(&g, &RationalCone::orthant(2)).unwrap();
        assert_eq!(s.cells().len(), 3);
        let at = |p: &[i64]| s.tag_at(&LatticePoint::from_i64(p)).unwrap().clone();
        assert_eq!(at(&[2, 1]), laurent_canonical(2, 2, &[mv(&["1", "0"], &vars)]));
        assert_eq!(at(&[1, 2]), laurent_canonical(2, 2, &[mv(&["0", "1"], &vars)]));
        assert_eq!(at(&[1, 1]), laurent_canonical(2, 2, &[mv(&["y^2", "-x^2"], &vars)]));
        let star = Fan::of_cone(&RationalCone::orthant(2)).star_subdivision(&LatticePoint::from_i64(&[1, 1])).unwrap();
        assert!(refines(&star, &s.stratification).unwrap());
        assert_eq!(stratification_to_smooth_fan(&s.stratification).unwrap(), star);
    }

    #[test]
    fn cyclic_triple_gives_octant_blowup() {
        let vars = ["x", "y", "z"];
        let g = Submodule::new(3, 3, vec![mv(&["y", "z", "x"], &vars)]).unwrap();
        let s = groebner_stratification(&g, &RationalCone::orthant(3)).unwrap();
        s.stratification.validate().unwrap();
        let star = Fan::of_cone(&RationalCone::orthant(3)).star_subdivision(&LatticePoint::from_i64(&[1, 1, 1])).unwrap();
        assert_eq!(stratification_to_smooth_fan(&s.stratification).unwrap(), star);
    }

    #[test]
    fn monomial_module_has_one_cell() {
        let g = Submodule::new(2, 1, vec![mv(&["x"], &["x", "y"])]).unwrap();
        let s = groebner_stratification(&g, &RationalCone::orthant(2)).unwrap();
        assert_eq!(s.cells().len(), 1);
    }
}
