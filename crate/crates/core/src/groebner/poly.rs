use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};

pub type Q = BigRational;
pub type Exponent = Vec<i32>;

/// A Laurent polynomial with rational coefficients, stored as an exponent → coefficient map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn monomial(exp: Exponent, c: Q) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// The `i`-th variable.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Q)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            check_dim(nvars, e.len())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Parses expressions like `x^3*z - 2/3*x*y^2 + 1` over the named variables.
    pub fn parse(src: &str, vars: &[&str]) -> Result<Self> {
        let n = vars.len();
        let mut p = Self::zero(n);
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() || cleaned == "0" {
            return Ok(p);
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                chunks.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        chunks.push((neg, cur));
        for (neg, chunk) in chunks {
            let mut coeff = Q::one();
            let mut exp = vec![0i32; n];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(Error::InvalidInput(format!("malformed polynomial '{src}'")));
                }
                if factor.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    coeff *= parse_rational(factor)?;
                    continue;
                }
                let (name, pow) = match factor.split_once('^') {
                    Some((v, e)) => (v, e.parse::<i32>().map_err(|_| Error::InvalidInput(format!("bad exponent in '{factor}'")))?),
                    None => (factor, 1),
                };
                let idx = vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown variable '{name}'")))?;
                exp[idx] += pow;
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(exp, coeff);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exp: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(add_exp(e1, e2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Replaces variable `i` by `images[i]`; negative exponents need invertible images.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let target_vars = images.first().map_or(self.nvars, |p| p.nvars);
        let mut out = Poly::zero(target_vars);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                assert!(k >= 0, "substitution of a negative power");
                t = t.mul(&images[i].pow(k as u32));
            }
            out = out.add(&t);
        }
        out
    }

    pub fn total_degree(&self) -> i32 {
        self.terms.keys().map(|e| e.iter().sum::<i32>()).max().unwrap_or(0)
    }
}

pub(crate) fn add_exp(a: &[i32], b: &[i32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Parses `p` or `p/q` with arbitrary-precision integers.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::InvalidInput(format!("malformed rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats as `p` or `p/q` in lowest terms.
pub fn fmt_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

const VAR_NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

/// Default name of variable `i`: x, y, z, w, u, v for up to six variables, else x1, x2, ...
pub fn var_name(i: usize, nvars: usize) -> String {
    if nvars <= VAR_NAMES.len() {
        VAR_NAMES[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn fmt_monomial(e: &[i32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| if k == 1 { var_name(i, e.len()) } else { format!("{}^{}", var_name(i, e.len()), k) })
        .collect();
    parts.join("*")
}

fn fmt_terms<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (String, &'a Q)>) -> fmt::Result {
    let mut first = true;
    for (mono, c) in terms {
        let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
        if first {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        match (mono.is_empty(), mag.is_one()) {
            (true, _) => write!(f, "{}", fmt_rational(&mag))?,
            (false, true) => write!(f, "{mono}")?,
            (false, false) => write!(f, "{}*{mono}", fmt_rational(&mag))?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().rev().map(|(e, c)| (fmt_monomial(e), c)))
    }
}

/// An element of the free module `k[x^±]^rank`, stored canonically by
/// `(exponent, component)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleVector {
    nvars: usize,
    rank: usize,
    terms: BTreeMap<(Exponent, usize), Q>,
}

impl ModuleVector {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        ModuleVector { nvars, rank, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, rank: usize, terms: impl IntoIterator<Item = (Exponent, usize, Q)>) -> Result<Self> {
        let mut v = Self::zero(nvars, rank);
        for (e, comp, c) in terms {
            check_dim(nvars, e.len())?;
            if comp >= rank {
                return Err(Error::InvalidInput(format!("component {comp} out of range for rank {rank}")));
            }
            v.add_term(e, comp, c);
        }
        Ok(v)
    }

    /// The vector with entries `polys[i]` in component `i`.
    pub fn from_polys(polys: &[Poly]) -> Self {
        let nvars = polys.first().map_or(0, |p| p.nvars);
        let mut v = Self::zero(nvars, polys.len());
        for (i, p) in polys.iter().enumerate() {
            for (e, c) in p.terms() {
                v.add_term(e.clone(), i, c.clone());
            }
        }
        v
    }

    /// The `i`-th standard basis vector.
    pub fn basis(nvars: usize, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(nvars, rank);
        v.add_term(vec![0; nvars], i, Q::one());
        v
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, usize, &Q)> {
        self.terms.iter().map(|((e, i), c)| (e, *i, c))
    }

    pub fn add_term(&mut self, exp: Exponent, comp: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (exp, comp);
        let entry = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn component(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for ((e, c), v) in &self.terms {
            if *c == i {
                p.add_term(e.clone(), v.clone());
            }
        }
        p
    }

    pub fn components(&self) -> Vec<Poly> {
        (0..self.rank).map(|i| self.component(i)).collect()
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        for ((e, i), c) in &other.terms {
            out.add_term(e.clone(), *i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> ModuleVector {
        if c.is_zero() {
            return Self::zero(self.nvars, self.rank);
        }
        ModuleVector { nvars: self.nvars, rank: self.rank, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Multiplies by the monomial `x^shift` (entries may be negative).
    pub fn shift(&self, shift: &[i32]) -> ModuleVector {
        ModuleVector {
            nvars: self.nvars,
            rank: self.rank,
            terms: self.terms.iter().map(|((e, i), c)| ((add_exp(e, shift), *i), c.clone())).collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> ModuleVector {
        let mut out = Self::zero(self.nvars, self.rank);
        for ((e, i), c) in &self.terms {
            for (pe, pc) in p.terms() {
                out.add_term(add_exp(e, pe), *i, c * pc);
            }
        }
        out
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponent(&self) -> Exponent {
        let mut m: Option<Exponent> = None;
        for (e, _) in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(cur) => cur.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Translates by a unit monomial so that every variable's minimal exponent is zero.
    pub fn normalized(&self) -> ModuleVector {
        let m: Vec<i32> = self.min_exponent().iter().map(|x| -x).collect();
        self.shift(&m)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|(e, _)| e.iter().all(|&x| x >= 0))
    }

    /// Scales so that the coefficient of the largest canonical term is one.
    pub fn monic_canonical(&self) -> ModuleVector {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Embeds into a free module of larger rank, shifting components by `offset`.
    pub fn embed(&self, rank: usize, offset: usize) -> ModuleVector {
        ModuleVector {
            nvars: self.nvars,
            rank,
            terms: self.terms.iter().map(|((e, i), c)| ((e.clone(), i + offset), c.clone())).collect(),
        }
    }

    /// Keeps components `start..start+len`, renumbered from zero.
    pub fn project(&self, start: usize, len: usize) -> ModuleVector {
        ModuleVector {
            nvars: self.nvars,
            rank: len,
            terms: self
                .terms
                .iter()
                .filter(|((_, i), _)| *i >= start && *i < start + len)
                .map(|((e, i), c)| ((e.clone(), i - start), c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every exponent (used for homogenization and variable permutations).
    pub fn map_exponents(&self, nvars: usize, f: impl Fn(&[i32]) -> Exponent) -> ModuleVector {
        let mut out = Self::zero(nvars, self.rank);
        for ((e, i), c) in &self.terms {
            out.add_term(f(e), *i, c.clone());
        }
        out
    }

    pub fn total_degree(&self) -> i32 {
        self.terms.keys().map(|(e, _)| e.iter().sum::<i32>()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|(e, _)| e.iter().sum::<i32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.rank {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.component(i))?;
        }
        write!(f, ")")
    }
}

/// A matrix of polynomials; its columns are vectors in `R^rows`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn new(nvars: usize, entries: Vec<Vec<Poly>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        for r in &entries {
            check_dim(cols, r.len())?;
            for p in r {
                check_dim(nvars, p.nvars)?;
            }
        }
        Ok(PolyMatrix { nvars, rows, cols, entries })
    }

    /// An `rows × 0` matrix (presenting a free module).
    pub fn empty(nvars: usize, rows: usize) -> Self {
        PolyMatrix { nvars, rows, cols: 0, entries: vec![Vec::new(); rows] }
    }

    pub fn from_columns(nvars: usize, rows: usize, columns: &[ModuleVector]) -> Self {
        let entries = (0..rows).map(|r| columns.iter().map(|c| c.component(r)).collect()).collect();
        PolyMatrix { nvars, rows, cols: columns.len(), entries }
    }

    /// Parses a row-major matrix of polynomial strings.
    pub fn parse(rows: &[&[&str]], vars: &[&str]) -> Result<Self> {
        let entries = rows.iter().map(|r| r.iter().map(|s| Poly::parse(s, vars)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Self::new(vars.len(), entries)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r][c]
    }

    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> ModuleVector {
        let polys: Vec<Poly> = (0..self.rows).map(|r| self.entries[r][c].clone()).collect();
        let mut v = ModuleVector::from_polys(&polys);
        v.nvars = self.nvars;
        v
    }

    pub fn columns(&self) -> Vec<ModuleVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.is_polynomial())
    }

    pub fn map_entries(&self, nvars: usize, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix { nvars, rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    /// Image of a vector in `R^cols`.
    pub fn apply(&self, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero(self.nvars, self.rows);
        for c in 0..self.cols {
            let coeff = v.component(c);
            if coeff.is_zero() {
                continue;
            }
            out = out.add(&self.column(c).mul_poly(&coeff));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = Poly::parse("x^3*z - x*y^2*z", &["x", "y", "z"]).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.to_string(), "x^3*z - x*y^2*z");
        let q = Poly::parse("-2/3*x + 1", &["x"]).unwrap();
        assert_eq!(q.to_string(), "-2/3*x + 1");
        assert!(Poly::parse("x + t", &["x"]).is_err());
    }

    #[test]
    fn arithmetic() {
        let v = ["x", "y"];
        let a = Poly::parse("x + y", &v).unwrap();
        let b = Poly::parse("x - y", &v).unwrap();
        assert_eq!(a.mul(&b), Poly::parse("x^2 - y^2", &v).unwrap());
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn substitution_into_blowup_chart() {
        let v = ["x", "y"];
        let p = Poly::parse("x^2", &v).unwrap();
        let images = vec![Poly::parse("x*y", &v).unwrap(), Poly::parse("y", &v).unwrap()];
        assert_eq!(p.substitute(&images), Poly::parse("x^2*y^2", &v).unwrap());
    }

    #[test]
    fn normalization_clears_negative_exponents() {
        let f = ModuleVector::from_terms(2, 2, [(vec![-1, 2], 0, Q::one()), (vec![1, -3], 1, -Q::one())]).unwrap();
        let n = f.normalized();
        assert_eq!(n.min_exponent(), vec![0, 0]);
        assert!(n.is_polynomial());
    }
}
