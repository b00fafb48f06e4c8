//! Statification by fan refinement: stratify the kernel of a presentation,
//! resolve to a smooth fan, pull back to every chart and certify staticity.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::groebner::{groebner_stratification, MarkedGB, Poly, PolyMatrix, Q, Submodule};
use crate::linalg::{dot_int, rref};
use crate::polyhedral::{refines, stratification_to_smooth_fan, Fan, LatticePoint, PLStratification, RationalCone, StratumCell};
use crate::staticity::{log_tor_dim_at_most, ModulePresentation, SmoothChart, TorReport};

/// Identifier of the certificate format.
pub const CERTIFICATE_FORMAT: &str = "statikit-cert/1";
/// The resolution used for the primary stratification: the kernel of the presentation matrix.
pub const PRIMARY_RESOLUTION: &str = "kernel";
/// The audit resolution: the presentation augmented by the sum of its columns.
pub const AUDIT_RESOLUTION: &str = "kernel-of-column-sum-augmentation";

/// The dual basis of the chart rays of a smooth full-dimensional cone: row
/// `i` pairs to one with ray `i` and to zero with the others.
pub fn dual_basis(cone: &RationalCone) -> Result<Vec<Vec<BigInt>>> {
    let n = cone.ambient_dim();
    if !cone.is_smooth()? {
        return Err(Error::NonSmoothChart);
    }
    if cone.rays().len() != n {
        return Err(Error::InvalidInput("chart cones must be full-dimensional".into()));
    }
    // solve V · U^T = I, i.e. U · V^T = I
    let mut aug: Vec<Vec<Q>> = cone
        .chart_rays()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Q> = r.coords().iter().map(|x| Q::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    rref(&mut aug);
    // columns n.. of aug now hold U^{-1}; V = (U^{-1})^T
    Ok((0..n).map(|i| (0..n).map(|j| aug[j][n + i].to_integer()).collect()).collect())
}

/// A toric modification given by a smooth fan refining a smooth chart cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricModification {
    pub source: Fan,
    pub target: RationalCone,
}

impl ToricModification {
    pub fn new(source: Fan, target: RationalCone) -> Result<Self> {
        check_dim(target.ambient_dim(), source.ambient_dim())?;
        if source.support() != &target {
            return Err(Error::SupportMismatch);
        }
        Ok(ToricModification { source, target })
    }

    pub fn identity(target: &RationalCone) -> Self {
        ToricModification { source: Fan::of_cone(target), target: target.clone() }
    }

    /// Exponent matrix `E` of the chart map on `sigma`: target chart variable
    /// `i` becomes the monomial `b^{E[i]}` in the chart variables of `sigma`.
    pub fn substitution(&self, sigma: &RationalCone) -> Result<Vec<Vec<BigInt>>> {
        if !self.source.maximal_cones().contains(sigma) {
            return Err(Error::InvalidInput(format!("{sigma} is not a maximal cone of the modification")));
        }
        if !sigma.is_smooth()? {
            return Err(Error::NonSmoothChart);
        }
        let v = dual_basis(&self.target)?;
        Ok(v.iter().map(|vi| sigma.chart_rays().iter().map(|r| dot_int(vi, r.coords())).collect()).collect())
    }
}

/// The presentation of the pullback of `M` to the chart of a maximal cone of the modification.
pub fn pullback_presentation(m: &ModulePresentation, modification: &ToricModification, sigma: &RationalCone) -> Result<ModulePresentation> {
    if m.chart.cone() != &modification.target {
        return Err(Error::SupportMismatch);
    }
    let e = modification.substitution(sigma)?;
    let n = m.nvars();
    let images: Vec<Poly> = e
        .iter()
        .map(|row| {
            let exp: Vec<i32> = row.iter().map(|x| x.to_i32().expect("chart exponents fit in 32 bits")).collect();
            Poly::monomial(exp, Q::one())
        })
        .collect();
    let matrix = m.matrix.map_entries(n, |p| p.substitute(&images));
    ModulePresentation::new(SmoothChart::new(sigma.clone())?, matrix)
}

fn map_cone(cone: &RationalCone, basis: &[LatticePoint]) -> RationalCone {
    let n = cone.ambient_dim();
    let rays = cone
        .rays()
        .iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); n];
            for (c, u) in r.coords().iter().zip(basis) {
                for (vj, uj) in v.iter_mut().zip(u.coords()) {
                    *vj += c * uj;
                }
            }
            LatticePoint::new(v)
        })
        .collect();
    RationalCone::new(n, rays).expect("image of a cone under a unimodular map")
}

/// The Gröbner stratification of `K` on the chart cone, in ambient coordinates.
///
/// Chart variable `i` pairs with a weight `w` through the `i`-th dual basis
/// vector, so the stratification is computed on the orthant in chart
/// coordinates and carried over by the ray basis.
pub fn kernel_stratification(k: &Submodule, chart: &SmoothChart) -> Result<PLStratification<MarkedGB>> {
    let n = chart.nvars();
    let gs = groebner_stratification(k, &RationalCone::orthant(n))?;
    let basis = chart.cone().chart_rays();
    let mut cells: Vec<StratumCell<MarkedGB>> = gs
        .stratification
        .cells
        .into_iter()
        .map(|c| {
            let mut pieces: Vec<RationalCone> = c.pieces.iter().map(|p| map_cone(p, &basis)).collect();
            pieces.sort();
            StratumCell { pieces, tag: c.tag }
        })
        .collect();
    cells.sort_by(|a, b| a.pieces.cmp(&b.pieces));
    Ok(PLStratification { ambient_dim: n, support: chart.cone().clone(), cells })
}

/// Staticity data of one chart of the modification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartCertificate {
    pub cone: RationalCone,
    pub substitution: Vec<Vec<BigInt>>,
    pub pullback: ModulePresentation,
    pub is_static: bool,
    pub reports: Vec<TorReport>,
}

/// Comparison of refinement verdicts under a second presentation of the same module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRecord {
    pub resolution: String,
    pub kernel: Submodule,
    pub refines_primary: bool,
    pub refines_secondary: bool,
}

impl AuditRecord {
    pub fn agree(&self) -> bool {
        self.refines_primary == self.refines_secondary
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatificationCertificate {
    pub input: ModulePresentation,
    pub input_hash: String,
    pub resolution: String,
    pub kernel: Submodule,
    pub stratification: PLStratification<MarkedGB>,
    pub fan: Fan,
    /// The input was already static and the identity modification was returned.
    pub identity: bool,
    pub charts: Vec<ChartCertificate>,
    /// False when fail-fast mode stopped at the first non-static chart.
    pub complete: bool,
    pub audit: Option<AuditRecord>,
}

impl StatificationCertificate {
    pub fn modification(&self) -> ToricModification {
        ToricModification { source: self.fan.clone(), target: self.input.chart.cone().clone() }
    }

    pub fn all_static(&self) -> bool {
        self.charts.iter().all(|c| c.is_static)
    }

    /// The fan refines the stratification and every chart was certified static.
    pub fn is_valid(&self) -> bool {
        self.complete && self.all_static() && refines(&self.fan, &self.stratification).unwrap_or(false)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StatifyOptions {
    pub audit: bool,
    pub fail_fast: bool,
}

fn certify_charts(m: &ModulePresentation, modification: &ToricModification, fail_fast: bool) -> Result<(Vec<ChartCertificate>, bool)> {
    let mut charts = Vec::new();
    for sigma in modification.source.maximal_cones() {
        let substitution = modification.substitution(&sigma)?;
        let pullback = pullback_presentation(m, modification, &sigma)?;
        let report = log_tor_dim_at_most(&pullback, 1)?;
        let ok = report.holds;
        charts.push(ChartCertificate { cone: sigma, substitution, pullback, is_static: ok, reports: report.reports });
        if fail_fast && !ok {
            let complete = modification.source.maximal_cones().len() == charts.len();
            return Ok((charts, complete));
        }
    }
    Ok((charts, true))
}

/// The same module presented with one redundant relation: the sum of all columns.
pub fn augmented_presentation(m: &ModulePresentation) -> ModulePresentation {
    let mut columns = m.matrix.columns();
    if let Some(first) = columns.first().cloned() {
        let sum = columns[1..].iter().fold(first, |acc, c| acc.add(c));
        columns.push(sum);
    }
    let matrix = PolyMatrix::from_columns(m.nvars(), m.matrix.rows(), &columns);
    ModulePresentation { chart: m.chart.clone(), matrix }
}

/// Computes a statification of `M` and certifies it chart by chart.
pub fn compute_statification(m: &ModulePresentation, options: StatifyOptions) -> Result<StatificationCertificate> {
    let kernel = m.kernel()?;
    let stratification = kernel_stratification(&kernel, &m.chart)?;
    let identity = log_tor_dim_at_most(m, 1)?.holds;
    let fan = if identity { Fan::of_cone(m.chart.cone()) } else { stratification_to_smooth_fan(&stratification)? };
    let modification = ToricModification::new(fan.clone(), m.chart.cone().clone())?;
    let (charts, complete) = certify_charts(m, &modification, options.fail_fast)?;
    let audit = if options.audit {
        let secondary = augmented_presentation(m);
        let k2 = secondary.kernel()?;
        let s2 = kernel_stratification(&k2, &m.chart)?;
        Some(AuditRecord {
            resolution: AUDIT_RESOLUTION.to_string(),
            kernel: k2,
            refines_primary: refines(&fan, &stratification)?,
            refines_secondary: refines(&fan, &s2)?,
        })
    } else {
        None
    };
    Ok(StatificationCertificate {
        input: m.clone(),
        input_hash: crate::json::presentation_hash(m),
        resolution: PRIMARY_RESOLUTION.to_string(),
        kernel,
        stratification,
        fan,
        identity,
        charts,
        complete,
        audit,
    })
}

/// Result of re-running every check recorded in a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayOutcome {
    pub hash_matches: bool,
    pub kernel_matches: bool,
    pub stratification_matches: bool,
    pub refines: bool,
    /// Per chart: the recomputed pullback and reports coincide with the stored ones.
    pub charts_match: Vec<bool>,
    pub audit_matches: Option<bool>,
}

impl ReplayOutcome {
    pub fn reproduced(&self) -> bool {
        self.hash_matches
            && self.kernel_matches
            && self.stratification_matches
            && self.charts_match.iter().all(|&b| b)
            && self.audit_matches.unwrap_or(true)
    }
}

/// Recomputes every verdict stored in `cert` from its input.
pub fn replay(cert: &StatificationCertificate) -> Result<ReplayOutcome> {
    let m = &cert.input;
    let kernel = m.kernel()?;
    let stratification = kernel_stratification(&kernel, &m.chart)?;
    let modification = ToricModification::new(cert.fan.clone(), m.chart.cone().clone())?;
    let mut charts_match = Vec::with_capacity(cert.charts.len());
    for chart in &cert.charts {
        let pullback = pullback_presentation(m, &modification, &chart.cone)?;
        let report = log_tor_dim_at_most(&pullback, 1)?;
        charts_match.push(
            pullback == chart.pullback
                && modification.substitution(&chart.cone)? == chart.substitution
                && report.holds == chart.is_static
                && report.reports == chart.reports,
        );
    }
    let audit_matches = match &cert.audit {
        None => None,
        Some(a) => {
            let k2 = augmented_presentation(m).kernel()?;
            let s2 = kernel_stratification(&k2, &m.chart)?;
            Some(k2 == a.kernel && refines(&cert.fan, &stratification)? == a.refines_primary && refines(&cert.fan, &s2)? == a.refines_secondary)
        }
    };
    Ok(ReplayOutcome {
        hash_matches: crate::json::presentation_hash(m) == cert.input_hash,
        kernel_matches: kernel == cert.kernel,
        stratification_matches: stratification == cert.stratification,
        refines: refines(&cert.fan, &cert.stratification)?,
        charts_match,
        audit_matches,
    })
}

/// Both sides of the statification criterion for a smooth fan on the chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremInstance {
    pub refines: bool,
    pub charts: Vec<(RationalCone, bool)>,
}

impl TheoremInstance {
    pub fn all_static(&self) -> bool {
        self.charts.iter().all(|(_, s)| *s)
    }

    pub fn agree(&self) -> bool {
        self.refines == self.all_static()
    }
}

/// Computes independently whether `f` refines the Gröbner stratification of
/// the kernel and whether the pullback of `M` is static on every chart of `f`.
pub fn verify_theorem_instance(m: &ModulePresentation, f: &Fan) -> Result<TheoremInstance> {
    let modification = ToricModification::new(f.clone(), m.chart.cone().clone())?;
    if !f.is_smooth() {
        return Err(Error::NonSmoothChart);
    }
    let kernel = m.kernel()?;
    let stratification = kernel_stratification(&kernel, &m.chart)?;
    let side_a = refines(f, &stratification)?;
    let mut charts = Vec::new();
    for sigma in f.maximal_cones() {
        let pullback = pullback_presentation(m, &modification, &sigma)?;
        charts.push((sigma, log_tor_dim_at_most(&pullback, 1)?.holds));
    }
    Ok(TheoremInstance { refines: side_a, charts })
}
