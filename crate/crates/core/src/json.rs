//! JSON interchange formats. Every integer and rational is written as a
//! decimal string; on input, plain JSON integers are accepted as well.

use std::fmt::{self, Display};
use std::marker::PhantomData;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{check_dim, Error, Result};
use crate::groebner::{fmt_rational, parse_rational, var_name, MarkedGB, ModuleVector, Poly, PolyMatrix, Q, Submodule, TermOrder};
use crate::polyhedral::{Fan, LatticePoint, PLStratification, RationalCone, StratumCell};
use crate::staticity::{ModulePresentation, SmoothChart, TorReport};
use crate::statify::{AuditRecord, ChartCertificate, StatificationCertificate, CERTIFICATE_FORMAT};

/// An integer serialized as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dec<T>(pub T);

impl<T: Display> Serialize for Dec<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct DecVisitor<T>(PhantomData<T>);

impl<T: FromStr> Visitor<'_> for DecVisitor<T> {
    type Value = Dec<T>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
        v.trim().parse().map(Dec).map_err(|_| E::custom(format!("'{v}' is not a valid integer here")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
        self.visit_str(&v.to_string())
    }
}

impl<'de, T: FromStr> Deserialize<'de> for Dec<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(DecVisitor(PhantomData))
    }
}

/// A rational serialized as `"p"` or `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Q);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational number as \"p\" or \"p/q\", or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
        parse_rational(v.trim()).map(Rat).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
        Ok(Rat(Q::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
        Ok(Rat(Q::from_integer(v.into())))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

fn dec_vec<T: Clone>(v: &[T]) -> Vec<Dec<T>> {
    v.iter().cloned().map(Dec).collect()
}

fn undec<T: Clone>(v: &[Dec<T>]) -> Vec<T> {
    v.iter().map(|d| d.0.clone()).collect()
}

// ---------------------------------------------------------------- polyhedral

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<Dec<usize>>,
    pub rays: Vec<Vec<Dec<BigInt>>>,
}

impl ConeJson {
    pub fn from_cone(c: &RationalCone) -> Self {
        ConeJson { ambient_dim: Some(Dec(c.ambient_dim())), rays: c.rays().iter().map(|r| dec_vec(r.coords())).collect() }
    }

    /// Builds the cone; the ambient dimension comes from the field, the rays or `hint`.
    pub fn to_cone(&self, hint: Option<usize>) -> Result<RationalCone> {
        let n = self
            .ambient_dim
            .as_ref()
            .map(|d| d.0)
            .or_else(|| self.rays.first().map(Vec::len))
            .or(hint)
            .ok_or_else(|| Error::InvalidInput("cannot infer the ambient dimension of a cone without rays".into()))?;
        if n == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        let rays = self
            .rays
            .iter()
            .map(|r| {
                check_dim(n, r.len())?;
                let p = LatticePoint::new(undec(r));
                if p.is_zero() {
                    return Err(Error::InvalidInput("rays must be nonzero".into()));
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        RationalCone::new(n, rays)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub ambient_dim: Dec<usize>,
    pub support: ConeJson,
    /// Generating cones; the fan is their face closure. Written as the maximal cones.
    pub cones: Vec<ConeJson>,
}

impl FanJson {
    pub fn from_fan(f: &Fan) -> Self {
        FanJson {
            ambient_dim: Dec(f.ambient_dim()),
            support: ConeJson::from_cone(f.support()),
            cones: f.maximal_cones().iter().map(ConeJson::from_cone).collect(),
        }
    }

    pub fn to_fan(&self) -> Result<Fan> {
        let n = self.ambient_dim.0;
        let support = self.support.to_cone(Some(n))?;
        check_dim(n, support.ambient_dim())?;
        let cones = self.cones.iter().map(|c| c.to_cone(Some(n))).collect::<Result<Vec<_>>>()?;
        let fan = Fan::from_cones(support, cones);
        fan.validate()?;
        Ok(fan)
    }
}

// ------------------------------------------------------------------ groebner

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: Rat,
    pub exp: Vec<Dec<i32>>,
    pub comp: Dec<usize>,
}

pub type VectorJson = Vec<TermJson>;

pub fn vector_to_json(v: &ModuleVector) -> VectorJson {
    // leading (largest) terms first
    let mut terms: Vec<TermJson> = v.terms().map(|(e, i, c)| TermJson { coeff: Rat(c.clone()), exp: dec_vec(e), comp: Dec(i) }).collect();
    terms.reverse();
    terms
}

pub fn vector_from_json(v: &VectorJson, nvars: usize, rank: usize) -> Result<ModuleVector> {
    ModuleVector::from_terms(nvars, rank, v.iter().map(|t| (undec(&t.exp), t.comp.0, t.coeff.0.clone())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmoduleJson {
    pub nvars: Dec<usize>,
    pub rank: Dec<usize>,
    pub generators: Vec<VectorJson>,
}

impl SubmoduleJson {
    pub fn from_submodule(k: &Submodule) -> Self {
        SubmoduleJson { nvars: Dec(k.nvars()), rank: Dec(k.rank()), generators: k.generators().iter().map(vector_to_json).collect() }
    }

    pub fn to_submodule(&self) -> Result<Submodule> {
        let (n, m) = (self.nvars.0, self.rank.0);
        let gens = self.generators.iter().map(|g| vector_from_json(g, n, m)).collect::<Result<Vec<_>>>()?;
        Submodule::new(n, m, gens)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    pub pieces: Vec<ConeJson>,
    pub initial_module: Vec<VectorJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratificationJson {
    pub ambient_dim: Dec<usize>,
    pub nvars: Dec<usize>,
    pub rank: Dec<usize>,
    pub support: ConeJson,
    pub cells: Vec<CellJson>,
}

impl StratificationJson {
    pub fn from_stratification(s: &PLStratification<MarkedGB>, nvars: usize, rank: usize) -> Self {
        StratificationJson {
            ambient_dim: Dec(s.ambient_dim),
            nvars: Dec(nvars),
            rank: Dec(rank),
            support: ConeJson::from_cone(&s.support),
            cells: s
                .cells
                .iter()
                .map(|c| CellJson {
                    pieces: c.pieces.iter().map(ConeJson::from_cone).collect(),
                    initial_module: c.tag.elements().iter().map(vector_to_json).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds the stratification; tags are re-reduced and must already be
    /// reduced grevlex bases.
    pub fn to_stratification(&self) -> Result<PLStratification<MarkedGB>> {
        let (d, n, m) = (self.ambient_dim.0, self.nvars.0, self.rank.0);
        let support = self.support.to_cone(Some(d))?;
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let pieces = c.pieces.iter().map(|p| p.to_cone(Some(d))).collect::<Result<Vec<_>>>()?;
            let elements = c.initial_module.iter().map(|v| vector_from_json(v, n, m)).collect::<Result<Vec<_>>>()?;
            let tag = MarkedGB::compute(n, m, &elements, &TermOrder::grevlex());
            if tag.elements() != elements.as_slice() {
                return Err(Error::InvalidInput("initial module is not a reduced grevlex basis".into()));
            }
            cells.push(StratumCell { pieces, tag });
        }
        Ok(PLStratification { ambient_dim: d, support, cells })
    }
}

// ----------------------------------------------------------------- staticity

/// A polynomial given either as text (`"x^2 - 3/2*y"`) or as a term list.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyJson {
    Text(String),
    Terms(Vec<PolyTermJson>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermJson {
    pub coeff: Rat,
    pub exp: Vec<Dec<i32>>,
}

pub fn poly_to_json(p: &Poly) -> PolyJson {
    let mut terms: Vec<PolyTermJson> = p.terms().map(|(e, c)| PolyTermJson { coeff: Rat(c.clone()), exp: dec_vec(e) }).collect();
    terms.reverse();
    PolyJson::Terms(terms)
}

pub fn poly_from_json(p: &PolyJson, vars: &[String]) -> Result<Poly> {
    match p {
        PolyJson::Text(s) => {
            let names: Vec<&str> = vars.iter().map(String::as_str).collect();
            Poly::parse(s, &names)
        }
        PolyJson::Terms(ts) => Poly::from_terms(vars.len(), ts.iter().map(|t| (undec(&t.exp), t.coeff.0.clone()))),
    }
}

/// Default variable names for `n` chart variables.
pub fn default_vars(n: usize) -> Vec<String> {
    (0..n).map(|i| var_name(i, n)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    /// The chart cone; the orthant when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ConeJson>,
    /// Variable names used by textual polynomials; defaults to x, y, z, ...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Dec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<Dec<usize>>,
    pub matrix: Vec<Vec<PolyJson>>,
}

impl PresentationJson {
    pub fn from_presentation(m: &ModulePresentation) -> Self {
        PresentationJson {
            chart: Some(ConeJson::from_cone(m.chart.cone())),
            vars: None,
            rows: Some(Dec(m.matrix.rows())),
            cols: Some(Dec(m.matrix.cols())),
            matrix: m.matrix.entries().iter().map(|r| r.iter().map(poly_to_json).collect()).collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<ModulePresentation> {
        let n_hint = self.vars.as_ref().map(Vec::len).or_else(|| {
            self.matrix.iter().flatten().find_map(|p| match p {
                PolyJson::Terms(ts) => ts.first().map(|t| t.exp.len()),
                PolyJson::Text(_) => None,
            })
        });
        let chart = match &self.chart {
            Some(c) => SmoothChart::new(c.to_cone(n_hint)?)?,
            None => SmoothChart::orthant(n_hint.ok_or_else(|| Error::InvalidInput("give a chart cone or variable names".into()))?),
        };
        let n = chart.nvars();
        let vars = match &self.vars {
            Some(v) => {
                check_dim(n, v.len())?;
                v.clone()
            }
            None => default_vars(n),
        };
        let rows = self.rows.as_ref().map_or(self.matrix.len(), |r| r.0);
        check_dim(rows, self.matrix.len())?;
        let cols = self.cols.as_ref().map(|c| c.0).or_else(|| self.matrix.first().map(Vec::len)).unwrap_or(0);
        let entries = self
            .matrix
            .iter()
            .map(|r| {
                check_dim(cols, r.len())?;
                r.iter().map(|p| poly_from_json(p, &vars)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let matrix = if rows == 0 { PolyMatrix::from_columns(n, 0, &vec![ModuleVector::zero(n, 0); cols]) } else { PolyMatrix::new(n, entries)? };
        ModulePresentation::new(chart, matrix)
    }
}

/// SHA-256 of the canonical JSON encoding of a presentation.
pub fn presentation_hash(m: &ModulePresentation) -> String {
    let body = serde_json::to_string(&PresentationJson::from_presentation(m)).expect("presentations serialize");
    hex::encode(Sha256::digest(body.as_bytes()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorReportJson {
    pub face: Vec<Dec<usize>>,
    pub degree: Dec<usize>,
    pub vanishes: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub rank: Dec<usize>,
    pub vector: VectorJson,
}

impl TorReportJson {
    pub fn from_report(r: &TorReport) -> Self {
        TorReportJson {
            face: dec_vec(&r.face),
            degree: Dec(r.degree),
            vanishes: r.vanishes,
            witness: r.witness.as_ref().map(|w| WitnessJson { rank: Dec(w.rank()), vector: vector_to_json(w) }),
        }
    }

    pub fn to_report(&self, nvars: usize) -> Result<TorReport> {
        let witness = match &self.witness {
            Some(w) => Some(vector_from_json(&w.vector, nvars, w.rank.0)?),
            None => None,
        };
        Ok(TorReport { face: undec(&self.face), degree: self.degree.0, vanishes: self.vanishes, witness })
    }
}

// ------------------------------------------------------------------- statify

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartJson {
    pub cone: ConeJson,
    pub substitution: Vec<Vec<Dec<BigInt>>>,
    pub pullback: PresentationJson,
    #[serde(rename = "static")]
    pub is_static: bool,
    pub reports: Vec<TorReportJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditJson {
    pub resolution: String,
    pub kernel: SubmoduleJson,
    pub refines_primary: bool,
    pub refines_secondary: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub format: String,
    pub input_hash: String,
    pub input: PresentationJson,
    pub resolution: String,
    pub kernel: SubmoduleJson,
    pub stratification: StratificationJson,
    pub fan: FanJson,
    pub identity: bool,
    pub complete: bool,
    pub valid: bool,
    pub charts: Vec<ChartJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditJson>,
}

impl CertificateJson {
    pub fn from_certificate(c: &StatificationCertificate) -> Self {
        CertificateJson {
            format: CERTIFICATE_FORMAT.to_string(),
            input_hash: c.input_hash.clone(),
            input: PresentationJson::from_presentation(&c.input),
            resolution: c.resolution.clone(),
            kernel: SubmoduleJson::from_submodule(&c.kernel),
            stratification: StratificationJson::from_stratification(&c.stratification, c.kernel.nvars(), c.kernel.rank()),
            fan: FanJson::from_fan(&c.fan),
            identity: c.identity,
            complete: c.complete,
            valid: c.is_valid(),
            charts: c
                .charts
                .iter()
                .map(|ch| ChartJson {
                    cone: ConeJson::from_cone(&ch.cone),
                    substitution: ch.substitution.iter().map(|r| dec_vec(r)).collect(),
                    pullback: PresentationJson::from_presentation(&ch.pullback),
                    is_static: ch.is_static,
                    reports: ch.reports.iter().map(TorReportJson::from_report).collect(),
                })
                .collect(),
            audit: c.audit.as_ref().map(|a| AuditJson {
                resolution: a.resolution.clone(),
                kernel: SubmoduleJson::from_submodule(&a.kernel),
                refines_primary: a.refines_primary,
                refines_secondary: a.refines_secondary,
                agree: a.agree(),
            }),
        }
    }

    pub fn to_certificate(&self) -> Result<StatificationCertificate> {
        if self.format != CERTIFICATE_FORMAT {
            return Err(Error::InvalidInput(format!("unsupported certificate format '{}'", self.format)));
        }
        let input = self.input.to_presentation()?;
        let n = input.nvars();
        let charts = self
            .charts
            .iter()
            .map(|ch| {
                Ok(ChartCertificate {
                    cone: ch.cone.to_cone(Some(n))?,
                    substitution: ch.substitution.iter().map(|r| undec(r)).collect(),
                    pullback: ch.pullback.to_presentation()?,
                    is_static: ch.is_static,
                    reports: ch.reports.iter().map(|r| r.to_report(n)).collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let audit = match &self.audit {
            Some(a) => Some(AuditRecord {
                resolution: a.resolution.clone(),
                kernel: a.kernel.to_submodule()?,
                refines_primary: a.refines_primary,
                refines_secondary: a.refines_secondary,
            }),
            None => None,
        };
        Ok(StatificationCertificate {
            input,
            input_hash: self.input_hash.clone(),
            resolution: self.resolution.clone(),
            kernel: self.kernel.to_submodule()?,
            stratification: self.stratification.to_stratification()?,
            fan: self.fan.to_fan()?,
            identity: self.identity,
            charts,
            complete: self.complete,
            audit,
        })
    }
}

pub fn certificate_to_string(c: &StatificationCertificate) -> String {
    serde_json::to_string_pretty(&CertificateJson::from_certificate(c)).expect("certificates serialize")
}

pub fn certificate_from_str(s: &str) -> Result<StatificationCertificate> {
    let j: CertificateJson = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
    j.to_certificate()
}
