use crate::error::{check_dim, Error, Result};

use super::buchberger::Engine;
use super::order::TermOrder;
use super::poly::{Exponent, ModuleVector, Poly, PolyMatrix};

/// A finitely generated submodule, read over `k[x]` by the polynomial
/// operations and over `k[x^±]` by initial modules and stratifications.
/// Generators are nonzero; those with negative exponents are translated by the
/// smallest unit monomial making them polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    nvars: usize,
    rank: usize,
    generators: Vec<ModuleVector>,
}

impl Submodule {
    pub fn new(nvars: usize, rank: usize, generators: Vec<ModuleVector>) -> Result<Self> {
        let mut gens: Vec<ModuleVector> = Vec::new();
        for g in generators {
            check_dim(nvars, g.nvars())?;
            check_dim(rank, g.rank())?;
            if g.is_zero() {
                continue;
            }
            let lift: Vec<i32> = g.min_exponent().iter().map(|&e| (-e).max(0)).collect();
            let g = g.shift(&lift);
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(Submodule { nvars, rank, generators: gens })
    }

    pub fn zero(nvars: usize, rank: usize) -> Self {
        Submodule { nvars, rank, generators: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[ModuleVector] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A reduced Gröbner basis: monic elements, each marked by its leading term,
/// sorted by ascending leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedGB {
    order: TermOrder,
    nvars: usize,
    rank: usize,
    elements: Vec<ModuleVector>,
    leads: Vec<(Exponent, usize)>,
}

impl MarkedGB {
    /// The reduced Gröbner basis of the polynomial submodule generated by `gens`.
    pub fn compute(nvars: usize, rank: usize, gens: &[ModuleVector], order: &TermOrder) -> Self {
        let engine = Engine { order, nvars, rank };
        let basis = engine.groebner_basis(gens);
        let leads = basis.iter().map(|s| engine.lead_of(s)).collect();
        let elements = basis.iter().map(|s| engine.unsorted(s)).collect();
        MarkedGB { order: order.clone(), nvars, rank, elements, leads }
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elements(&self) -> &[ModuleVector] {
        &self.elements
    }

    /// The marked leading term `(exponent, component)` of each element.
    pub fn leads(&self) -> &[(Exponent, usize)] {
        &self.leads
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The unique remainder of `f` on division by the basis.
    pub fn normal_form(&self, f: &ModuleVector) -> ModuleVector {
        let engine = Engine { order: &self.order, nvars: self.nvars, rank: self.rank };
        let basis: Vec<_> = self.elements.iter().map(|g| engine.sorted(g)).collect();
        engine.unsorted(&engine.reduce(engine.sorted(f), &basis))
    }

    /// Membership of a polynomial vector in the polynomial submodule.
    pub fn contains(&self, f: &ModuleVector) -> bool {
        f.is_polynomial() && self.normal_form(f).is_zero()
    }

    pub fn contains_all(&self, fs: &[ModuleVector]) -> bool {
        fs.iter().all(|f| self.contains(f))
    }

    pub fn as_submodule(&self) -> Submodule {
        Submodule { nvars: self.nvars, rank: self.rank, generators: self.elements.clone() }
    }
}

fn require_polynomial(gens: &[ModuleVector]) -> Result<()> {
    if gens.iter().all(ModuleVector::is_polynomial) {
        Ok(())
    } else {
        Err(Error::InvalidInput("expected polynomial (non-negative exponent) entries".into()))
    }
}

/// The reduced Gröbner basis of `g` (generators read as polynomial vectors).
pub fn reduced_gb(g: &Submodule, order: &TermOrder) -> MarkedGB {
    MarkedGB::compute(g.nvars, g.rank, &g.generators, order)
}

/// Generators of the kernel of `k[x]^cols → k[x]^rows`, `v ↦ A·v`, returned as
/// a reduced grevlex basis.
pub fn syzygies(a: &PolyMatrix) -> Result<Submodule> {
    let (rows, cols, nvars) = (a.rows(), a.cols(), a.nvars());
    let columns = a.columns();
    require_polynomial(&columns)?;
    let rank = rows + cols;
    let lifted: Vec<ModuleVector> = columns
        .iter()
        .enumerate()
        .map(|(j, c)| c.embed(rank, 0).add(&ModuleVector::basis(nvars, rank, rows + j)))
        .collect();
    let gb = MarkedGB::compute(nvars, rank, &lifted, &TermOrder::elimination(rows));
    let syz: Vec<ModuleVector> = gb
        .elements
        .iter()
        .zip(&gb.leads)
        .filter(|(_, (_, comp))| *comp >= rows)
        .map(|(v, _)| v.project(rows, cols))
        .collect();
    let canonical = MarkedGB::compute(nvars, cols, &syz, &TermOrder::grevlex());
    Ok(Submodule { nvars, rank: cols, generators: canonical.elements })
}

/// `(K : g) = {v : g·v ∈ K}` for a polynomial `g`, over the polynomial ring.
pub fn colon(k: &Submodule, g: &Poly) -> Result<Submodule> {
    check_dim(k.nvars, g.nvars())?;
    require_polynomial(&k.generators)?;
    if !g.is_polynomial() {
        return Err(Error::InvalidInput("colon needs a polynomial".into()));
    }
    let m = k.rank;
    let mut columns = k.generators.clone();
    columns.extend((0..m).map(|i| ModuleVector::basis(k.nvars, m, i).mul_poly(g)));
    let syz = syzygies(&PolyMatrix::from_columns(k.nvars, m, &columns))?;
    let r = k.generators.len();
    let gens: Vec<ModuleVector> = syz.generators.iter().map(|v| v.project(r, m)).collect();
    let canonical = MarkedGB::compute(k.nvars, m, &gens, &TermOrder::grevlex());
    Ok(Submodule { nvars: k.nvars, rank: m, generators: canonical.elements })
}

/// Membership `f ∈ K` over the polynomial ring, decided by normal form.
pub fn membership(k: &Submodule, f: &ModuleVector) -> Result<bool> {
    check_dim(k.nvars, f.nvars())?;
    check_dim(k.rank, f.rank())?;
    require_polynomial(&k.generators)?;
    Ok(reduced_gb(k, &TermOrder::grevlex()).contains(f))
}

/// Adds a homogenizing variable at index 0.
pub(crate) fn homogenize(v: &ModuleVector) -> ModuleVector {
    let d = v.total_degree();
    v.map_exponents(v.nvars() + 1, |e| {
        let mut h = Vec::with_capacity(e.len() + 1);
        h.push(d - e.iter().sum::<i32>());
        h.extend_from_slice(e);
        h
    })
}

/// Sets the variable at index 0 to one.
pub(crate) fn dehomogenize(v: &ModuleVector) -> ModuleVector {
    v.map_exponents(v.nvars() - 1, |e| e[1..].to_vec())
}

fn swap_var(v: &ModuleVector, a: usize, b: usize) -> ModuleVector {
    v.map_exponents(v.nvars(), |e| {
        let mut e = e.to_vec();
        e.swap(a, b);
        e
    })
}

/// `(M : x_var^∞)` for a module generated by homogeneous polynomial vectors,
/// via the grevlex basis with `x_var` ordered last.
pub(crate) fn saturate_homogeneous(nvars: usize, rank: usize, gens: &[ModuleVector], var: usize) -> Vec<ModuleVector> {
    let last = nvars - 1;
    let permuted: Vec<ModuleVector> = gens.iter().map(|g| swap_var(g, var, last)).collect();
    let gb = MarkedGB::compute(nvars, rank, &permuted, &TermOrder::grevlex());
    gb.elements
        .iter()
        .map(|g| {
            let k = g.min_exponent()[last];
            let mut s = vec![0; nvars];
            s[last] = -k;
            swap_var(&g.shift(&s), var, last)
        })
        .collect()
}

/// Homogeneous generators of the saturation of `gens` (already homogeneous)
/// by every variable.
pub(crate) fn saturate_all_homogeneous(nvars: usize, rank: usize, gens: &[ModuleVector]) -> Vec<ModuleVector> {
    let mut cur = gens.to_vec();
    for var in 0..nvars {
        cur = saturate_homogeneous(nvars, rank, &cur, var);
    }
    cur
}

/// `(K : (x_{v1} ⋯ x_{vk})^∞)` over the polynomial ring.
pub fn saturate(k: &Submodule, vars: &[usize]) -> Result<Submodule> {
    require_polynomial(&k.generators)?;
    let n = k.nvars;
    if let Some(&v) = vars.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidInput(format!("variable index {v} out of range")));
    }
    let mut cur: Vec<ModuleVector> = k.generators.iter().map(homogenize).collect();
    cur = saturate_homogeneous(n + 1, k.rank, &cur, 0);
    for &v in vars {
        cur = saturate_homogeneous(n + 1, k.rank, &cur, v + 1);
    }
    let gens: Vec<ModuleVector> = cur.iter().map(dehomogenize).collect();
    let canonical = MarkedGB::compute(n, k.rank, &gens, &TermOrder::grevlex());
    Ok(Submodule { nvars: n, rank: k.rank, generators: canonical.elements })
}

/// The canonical basis of the Laurent submodule generated by `gens`: the
/// reduced grevlex basis of its contraction to the polynomial ring.
pub fn laurent_canonical(nvars: usize, rank: usize, gens: &[ModuleVector]) -> MarkedGB {
    let hom: Vec<ModuleVector> = gens.iter().filter(|g| !g.is_zero()).map(|g| homogenize(&g.normalized())).collect();
    let sat = saturate_all_homogeneous(nvars + 1, rank, &hom);
    let deh: Vec<ModuleVector> = sat.iter().map(dehomogenize).collect();
    MarkedGB::compute(nvars, rank, &deh, &TermOrder::grevlex())
}
