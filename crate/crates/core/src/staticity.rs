//! Staticity, log flatness and log Tor dimension of modules on smooth affine
//! toric charts, decided by Koszul homology against every face.

use num_traits::One;

use crate::error::{check_dim, Error, Result};
use crate::groebner::{colon, reduced_gb, syzygies, MarkedGB, ModuleVector, Poly, PolyMatrix, Q, Submodule, TermOrder};
use crate::linalg::subsets;
use crate::polyhedral::RationalCone;

/// An affine smooth toric chart `A^n` given by a smooth full-dimensional cone.
/// Chart variable `i` is the monomial of the `i`-th dual basis vector of the
/// rays in `RationalCone::chart_rays` order; every chart variable is a
/// boundary variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmoothChart {
    cone: RationalCone,
}

impl SmoothChart {
    pub fn new(cone: RationalCone) -> Result<Self> {
        if !cone.is_smooth()? {
            return Err(Error::NonSmoothChart);
        }
        if !cone.is_full_dim() {
            return Err(Error::InvalidInput("chart cones must be full-dimensional".into()));
        }
        Ok(SmoothChart { cone })
    }

    pub fn orthant(n: usize) -> Self {
        SmoothChart { cone: RationalCone::orthant(n) }
    }

    pub fn cone(&self) -> &RationalCone {
        &self.cone
    }

    pub fn nvars(&self) -> usize {
        self.cone.ambient_dim()
    }

    pub fn boundary_variables(&self) -> Vec<usize> {
        (0..self.nvars()).collect()
    }
}

/// The cokernel of a polynomial matrix over the chart ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModulePresentation {
    pub chart: SmoothChart,
    pub matrix: PolyMatrix,
}

impl ModulePresentation {
    pub fn new(chart: SmoothChart, matrix: PolyMatrix) -> Result<Self> {
        check_dim(chart.nvars(), matrix.nvars())?;
        if !matrix.is_polynomial() {
            return Err(Error::InvalidInput("presentation entries must be polynomials in the chart variables".into()));
        }
        Ok(ModulePresentation { chart, matrix })
    }

    /// Presentation on the orthant chart `A^n`.
    pub fn on_affine_space(matrix: PolyMatrix) -> Result<Self> {
        Self::new(SmoothChart::orthant(matrix.nvars()), matrix)
    }

    pub fn nvars(&self) -> usize {
        self.matrix.nvars()
    }

    /// The kernel `K` of the presentation matrix.
    pub fn kernel(&self) -> Result<Submodule> {
        syzygies(&self.matrix)
    }
}

/// The outcome of one Koszul homology computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorReport {
    /// The variables generating the face ideal, ascending.
    pub face: Vec<usize>,
    pub degree: usize,
    pub vanishes: bool,
    /// A cycle lifted to `R^{ℓ·C(|face|, degree)}` that is not a boundary.
    pub witness: Option<ModuleVector>,
}

/// Block-diagonal sum of `copies` copies of `a`.
fn block_diagonal(a: &PolyMatrix, copies: usize) -> Vec<ModuleVector> {
    let rows = a.rows();
    let mut cols = Vec::with_capacity(a.cols() * copies);
    for b in 0..copies {
        for c in a.columns() {
            cols.push(c.embed(rows * copies, b * rows));
        }
    }
    cols
}

/// Columns of the lift `R^{ℓ·C(s,i)} → R^{ℓ·C(s,i-1)}` of the Koszul
/// differential on the variables `face`, tensored with `R^ℓ`.
fn koszul_columns(nvars: usize, rows: usize, face: &[usize], i: usize) -> Vec<ModuleVector> {
    let s = face.len();
    let sources = subsets(s, i);
    let targets = subsets(s, i - 1);
    let target_rank = rows * targets.len();
    let mut cols = Vec::with_capacity(rows * sources.len());
    for j in &sources {
        for r in 0..rows {
            let mut v = ModuleVector::zero(nvars, target_rank);
            for (p, &pos) in j.iter().enumerate() {
                let mut rest = j.clone();
                rest.remove(p);
                let t = targets.binary_search(&rest).expect("faces of a subset are subsets");
                let mut e = vec![0; nvars];
                e[face[pos]] = 1;
                let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
                v.add_term(e, t * rows + r, sign);
            }
            cols.push(v);
        }
    }
    cols
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        subsets(n, k).len()
    }
}

/// Cycles and boundaries of `K(face) ⊗ M` in degree `i`, lifted to `F_i`.
struct KoszulStage {
    cycles: Vec<ModuleVector>,
    boundaries: MarkedGB,
}

fn koszul_stage(m: &ModulePresentation, face: &[usize], i: usize) -> Result<KoszulStage> {
    let a = &m.matrix;
    let (n, rows) = (a.nvars(), a.rows());
    let s = face.len();
    let rank = rows * binomial(s, i);
    let cycles = if i == 0 {
        (0..rank).map(|r| ModuleVector::basis(n, rank, r)).collect()
    } else {
        let mut cols = koszul_columns(n, rows, face, i);
        cols.extend(block_diagonal(a, binomial(s, i - 1)));
        let target = rows * binomial(s, i - 1);
        let syz = syzygies(&PolyMatrix::from_columns(n, target, &cols))?;
        syz.generators().iter().map(|v| v.project(0, rank)).filter(|v| !v.is_zero()).collect()
    };
    let mut bounds = block_diagonal(a, binomial(s, i));
    if i < s {
        bounds.extend(koszul_columns(n, rows, face, i + 1));
    }
    let boundaries = MarkedGB::compute(n, rank, &bounds, &TermOrder::grevlex());
    Ok(KoszulStage { cycles, boundaries })
}

fn check_face(m: &ModulePresentation, face: &[usize]) -> Result<()> {
    let n = m.nvars();
    for (k, &v) in face.iter().enumerate() {
        if v >= n {
            return Err(Error::InvalidInput(format!("variable index {v} is not a boundary variable")));
        }
        if face[..k].contains(&v) {
            return Err(Error::InvalidInput(format!("variable index {v} repeated")));
        }
    }
    Ok(())
}

/// Decides whether `H_i` of the Koszul complex on `face` with coefficients in
/// `M` vanishes, i.e. whether `Tor_i(M, R/(face))` vanishes.
pub fn koszul_tor(m: &ModulePresentation, face: &[usize], i: usize) -> Result<TorReport> {
    check_face(m, face)?;
    let mut face = face.to_vec();
    face.sort_unstable();
    if i > face.len() || m.matrix.rows() == 0 {
        return Ok(TorReport { face, degree: i, vanishes: true, witness: None });
    }
    let stage = koszul_stage(m, &face, i)?;
    let witness = stage.cycles.iter().find(|z| !stage.boundaries.contains(z)).cloned();
    Ok(TorReport { face, degree: i, vanishes: witness.is_none(), witness })
}

/// Checks that a report's witness is a cycle and not a boundary.
pub fn verify_witness(m: &ModulePresentation, report: &TorReport) -> Result<bool> {
    let Some(z) = &report.witness else {
        return Ok(report.vanishes);
    };
    let (i, face) = (report.degree, &report.face);
    let a = &m.matrix;
    let (n, rows, s) = (a.nvars(), a.rows(), face.len());
    let stage_rank = rows * binomial(s, i);
    if z.rank() != stage_rank || report.vanishes {
        return Ok(false);
    }
    let is_cycle = if i == 0 {
        true
    } else {
        let d = PolyMatrix::from_columns(n, rows * binomial(s, i - 1), &koszul_columns(n, rows, face, i));
        let rels = MarkedGB::compute(n, rows * binomial(s, i - 1), &block_diagonal(a, binomial(s, i - 1)), &TermOrder::grevlex());
        rels.contains(&d.apply(z))
    };
    let stage = koszul_stage(m, face, i)?;
    Ok(is_cycle && !stage.boundaries.contains(z))
}

/// All faces of the chart in canonical order: by size, then lexicographically.
pub fn chart_faces(nvars: usize) -> Vec<Vec<usize>> {
    (0..=nvars).flat_map(|k| subsets(nvars, k)).collect()
}

/// The verdict of a log Tor dimension check together with every face report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTorDimension {
    pub holds: bool,
    pub reports: Vec<TorReport>,
}

/// Log Tor dimension `≤ d`: `Tor_{d+1}(M, R/(S))` vanishes for every subset
/// `S` of the boundary variables.
pub fn log_tor_dim_at_most(m: &ModulePresentation, d: usize) -> Result<LogTorDimension> {
    let reports = chart_faces(m.nvars()).iter().map(|s| koszul_tor(m, s, d + 1)).collect::<Result<Vec<_>>>()?;
    let holds = reports.iter().all(|r| r.vanishes);
    Ok(LogTorDimension { holds, reports })
}

pub fn is_static(m: &ModulePresentation) -> Result<bool> {
    Ok(log_tor_dim_at_most(m, 1)?.holds)
}

pub fn is_log_flat(m: &ModulePresentation) -> Result<bool> {
    Ok(log_tor_dim_at_most(m, 0)?.holds)
}

/// Whether `seq` is a regular sequence on `R^m / K`: each variable is a
/// nonzerodivisor modulo `K` and the previous variables.
pub fn is_regular_sequence_on(k: &Submodule, seq: &[usize]) -> Result<bool> {
    let (n, m) = (k.nvars(), k.rank());
    if let Some(&v) = seq.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidInput(format!("variable index {v} out of range")));
    }
    let mut gens = k.generators().to_vec();
    for &v in seq {
        let current = Submodule::new(n, m, gens.clone())?;
        let x = Poly::var(n, v);
        let quotient = colon(&current, &x)?;
        let gb = reduced_gb(&current, &TermOrder::grevlex());
        if !gb.contains_all(quotient.generators()) {
            return Ok(false);
        }
        gens.extend((0..m).map(|i| ModuleVector::basis(n, m, i).mul_poly(&x)));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(rows: &[&[&str]]) -> ModulePresentation {
        ModulePresentation::on_affine_space(PolyMatrix::parse(rows, &["x", "y"]).unwrap()).unwrap()
    }

    #[test]
    fn koszul_examples() {
        let m = pres(&[&["x^2", "y^2"]]);
        let r = koszul_tor(&m, &[0, 1], 2).unwrap();
        assert!(!r.vanishes);
        assert!(verify_witness(&m, &r).unwrap());
        assert!(koszul_tor(&pres(&[&["x"]]), &[0, 1], 2).unwrap().vanishes);
        let free = ModulePresentation::on_affine_space(PolyMatrix::empty(2, 1)).unwrap();
        for face in chart_faces(2) {
            for i in 1..3 {
                assert!(koszul_tor(&free, &face, i).unwrap().vanishes);
            }
        }
    }

    #[test]
    fn degree_zero_vanishes_only_for_trivial_quotients() {
        let m = pres(&[&["x"]]);
        assert!(!koszul_tor(&m, &[1], 0).unwrap().vanishes);
        let unit = pres(&[&["1"]]);
        assert!(koszul_tor(&unit, &[0, 1], 0).unwrap().vanishes);
    }

    #[test]
    fn orbit_closures() {
        let point = pres(&[&["x", "y"]]);
        assert!(!is_static(&point).unwrap());
        let line = pres(&[&["x"]]);
        assert!(is_static(&line).unwrap());
        assert!(!is_log_flat(&line).unwrap());
        let free = ModulePresentation::on_affine_space(PolyMatrix::empty(2, 1)).unwrap();
        let report = log_tor_dim_at_most(&free, 0).unwrap();
        assert!(report.holds);
        assert_eq!(report.reports.len(), 4);
    }

    #[test]
    fn blowup_chart_is_static() {
        let ab = ModulePresentation::on_affine_space(PolyMatrix::parse(&[&["a^2*b^2", "b^2"]], &["a", "b"]).unwrap()).unwrap();
        assert!(is_static(&ab).unwrap());
        assert!(!is_static(&pres(&[&["x^2", "y^2"]])).unwrap());
    }

    #[test]
    fn regular_sequence_examples() {
        let xy = ["x", "y"];
        let k = syzygies(&PolyMatrix::parse(&[&["x^2", "y^2"]], &xy).unwrap()).unwrap();
        assert!(!is_regular_sequence_on(&k, &[0, 1]).unwrap());
        let e1 = Submodule::new(2, 1, vec![ModuleVector::basis(2, 1, 0)]).unwrap();
        assert!(is_regular_sequence_on(&e1, &[0, 1]).unwrap());
        let k = syzygies(&PolyMatrix::parse(&[&["a^2*b^2", "b^2"]], &["a", "b"]).unwrap()).unwrap();
        assert!(is_regular_sequence_on(&k, &[0, 1]).unwrap());
    }

    #[test]
    fn non_smooth_chart_rejected() {
        let c = RationalCone::from_i64(2, &[&[1, 0], &[1, 2]]).unwrap();
        assert_eq!(SmoothChart::new(c), Err(Error::NonSmoothChart));
    }
}
