use num_traits::Zero;

use crate::error::{check_dim, Error, Result};

use super::gb::{dehomogenize, homogenize, saturate_all_homogeneous, MarkedGB, Submodule};
use super::order::TermOrder;
use super::poly::{ModuleVector, Q};

fn weight(exp: &[i32], w: &[Q]) -> Q {
    exp.iter().zip(w).fold(Q::zero(), |acc, (e, wi)| acc + wi * Q::from_integer((*e).into()))
}

/// The sum of the terms of `f` on which `exp · w` attains its minimum.
pub fn initial_form(f: &ModuleVector, w: &[Q]) -> Result<ModuleVector> {
    check_dim(f.nvars(), w.len())?;
    if f.is_zero() {
        return Err(Error::ZeroVector);
    }
    let min = f.terms().map(|(e, _, _)| weight(e, w)).min().expect("nonzero vector has terms");
    ModuleVector::from_terms(
        f.nvars(),
        f.rank(),
        f.terms().filter(|(e, _, _)| weight(e, w) == min).map(|(e, i, c)| (e.clone(), i, c.clone())),
    )
}

/// Precomputed data for repeated initial-module queries on one submodule: the
/// homogenization of its contraction to the polynomial ring, saturated by all
/// variables.
#[derive(Clone, Debug)]
pub struct InitialModuleOracle {
    nvars: usize,
    rank: usize,
    saturated: Vec<ModuleVector>,
}

impl InitialModuleOracle {
    pub fn new(g: &Submodule) -> Self {
        let hom: Vec<ModuleVector> = g.generators().iter().map(homogenize).collect();
        let saturated = saturate_all_homogeneous(g.nvars() + 1, g.rank(), &hom);
        InitialModuleOracle { nvars: g.nvars(), rank: g.rank(), saturated }
    }

    /// A Gröbner basis of the homogenized module for the order selecting
    /// `w`-minimal terms, over the variables `(t, x)`.
    pub fn weight_basis(&self, w: &[Q]) -> MarkedGB {
        MarkedGB::compute(self.nvars + 1, self.rank, &self.saturated, &TermOrder::min_weight_homogeneous(w))
    }

    /// The canonical initial module `in_w(G)` read off a basis from
    /// [`weight_basis`](Self::weight_basis) at a weight for which it is still a
    /// Gröbner basis.
    pub fn initial_from_basis(&self, basis: &MarkedGB, w: &[Q]) -> MarkedGB {
        let mut tw = Vec::with_capacity(w.len() + 1);
        tw.push(Q::zero());
        tw.extend_from_slice(w);
        let forms: Vec<ModuleVector> =
            basis.elements().iter().map(|g| initial_form(g, &tw).expect("basis elements are nonzero")).collect();
        let sat = saturate_all_homogeneous(self.nvars + 1, self.rank, &forms);
        let deh: Vec<ModuleVector> = sat.iter().map(dehomogenize).collect();
        MarkedGB::compute(self.nvars, self.rank, &deh, &TermOrder::grevlex())
    }

    pub fn initial_module(&self, w: &[Q]) -> Result<MarkedGB> {
        check_dim(self.nvars, w.len())?;
        let basis = self.weight_basis(w);
        Ok(self.initial_from_basis(&basis, w))
    }
}

/// The initial module `in_w(G)` of a Laurent submodule, as the reduced grevlex
/// basis of its contraction to the polynomial ring.
pub fn initial_module(g: &Submodule, w: &[Q]) -> Result<MarkedGB> {
    check_dim(g.nvars(), w.len())?;
    InitialModuleOracle::new(g).initial_module(w)
}

#[cfg(test)]
mod tests {
    use super::super::gb::laurent_canonical;
    use super::super::poly::Poly;
    use super::*;
    use crate::linalg::q;

    fn mv(src: &[&str], vars: &[&str]) -> ModuleVector {
        let polys: Vec<Poly> = src.iter().map(|s| Poly::parse(s, vars).unwrap()).collect();
        ModuleVector::from_polys(&polys)
    }

    #[test]
    fn initial_form_examples() {
        let f = mv(&["y^2", "-x^2"], &["x", "y"]);
        assert_eq!(initial_form(&f, &[q(0), q(0)]).unwrap(), f);
        assert_eq!(initial_form(&f, &[q(1), q(0)]).unwrap(), mv(&["y^2", "0"], &["x", "y"]));
        assert_eq!(initial_form(&f, &[q(1), q(1)]).unwrap(), f);
        assert_eq!(initial_form(&ModuleVector::zero(2, 2), &[q(1), q(1)]), Err(Error::ZeroVector));
    }

    #[test]
    fn initial_module_examples() {
        let vars = ["x", "y"];
        let g = Submodule::new(2, 2, vec![mv(&["y^2", "-x^2"], &vars)]).unwrap();
        let got = initial_module(&g, &[q(2), q(1)]).unwrap();
        assert_eq!(got, laurent_canonical(2, 2, &[mv(&["y^2", "0"], &vars)]));
        let got = initial_module(&g, &[q(1), q(1)]).unwrap();
        assert_eq!(got, laurent_canonical(2, 2, &[mv(&["y^2", "-x^2"], &vars)]));

        let vars = ["x", "y", "z"];
        let g = Submodule::new(3, 3, vec![mv(&["y", "z", "x"], &vars)]).unwrap();
        let got = initial_module(&g, &[q(1), q(2), q(3)]).unwrap();
        assert_eq!(got, laurent_canonical(3, 3, &[mv(&["0", "0", "x"], &vars)]));
    }
}
