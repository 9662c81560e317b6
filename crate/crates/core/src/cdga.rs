//! Free graded-commutative differential graded algebras with a global degree
//! truncation.
//!
//! Generators are kept sorted by `(degree, name)`; a [`Monomial`] is the
//! non-decreasing list of generator indices, which is also the ordered product
//! of those generators. Products of monomials are normalized by a merge that
//! counts transpositions of odd factors. Everything above the truncation
//! degree is discarded, so each algebra is really `ΛV / (ΛV)^{>N}`, which is
//! again a CDGA.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{
    self, is_zero_vector, kernel_basis, LinalgError, Quotient, Rational, SparseMatrix,
    SubspaceBasis, Vector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdgaError {
    #[error("generator `{0}` must have positive degree")]
    NonPositiveDegree(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("degree {degree} is outside the computable range (truncation {truncation})")]
    DegreeOutOfRange { degree: u32, truncation: u32 },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is not a cocycle")]
    NotACocycle,
    #[error("element does not belong to this algebra")]
    MixedAlgebras,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Sorted list of generator indices; the empty monomial is the unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(index: usize) -> Self {
        Monomial(vec![index as u16])
    }

    /// Builds a monomial from already sorted generator indices.
    pub fn from_factors(factors: impl IntoIterator<Item = usize>) -> Self {
        Monomial(factors.into_iter().map(|i| i as u16).collect())
    }

    pub fn factors(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(&(index as u16))
    }
}

/// Sparse rational combination of monomials. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::monomial(Monomial::unit(), Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Element::monomial(Monomial::unit(), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::unit())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Keeps only the terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, a)| (m.clone(), a.clone()))
                .collect(),
        }
    }

    pub fn max_generator_index(&self) -> Option<usize> {
        self.terms.keys().flat_map(|m| m.factors()).max()
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (m, a) in &rhs.terms {
            self.add_term(m.clone(), a.clone());
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}

/// Structural problems found by a validator. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            write!(f, "invalid: {}", self.violations.join("; "))
        }
    }
}

#[derive(Debug, Default)]
struct Caches {
    bases: Vec<OnceLock<Arc<Vec<Monomial>>>>,
    differentials: Vec<OnceLock<Arc<SparseMatrix>>>,
    cohomology: Vec<OnceLock<Arc<Cohomology>>>,
}

impl Caches {
    fn new(truncation: u32) -> Self {
        let n = truncation as usize + 2;
        Caches {
            bases: (0..n).map(|_| OnceLock::new()).collect(),
            differentials: (0..n).map(|_| OnceLock::new()).collect(),
            cohomology: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }
}

impl Clone for Caches {
    fn clone(&self) -> Self {
        Caches {
            bases: self.bases.clone(),
            differentials: self.differentials.clone(),
            cohomology: self.cohomology.clone(),
        }
    }
}

/// A free CDGA `(ΛV, d)` truncated above degree `truncation`.
#[derive(Debug, Clone)]
pub struct FreeCDGA {
    generators: Vec<Generator>,
    d_images: Vec<Element>,
    truncation: u32,
    index: HashMap<String, usize>,
    caches: Caches,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl FreeCDGA {
    /// Algebra on the given generators with zero differential.
    pub fn new(generators: Vec<Generator>, truncation: u32) -> Result<Self, CdgaError> {
        let mut generators = generators;
        for g in &generators {
            if g.degree == 0 {
                return Err(CdgaError::NonPositiveDegree(g.name.clone()));
            }
            if !valid_name(&g.name) {
                return Err(CdgaError::InvalidName(g.name.clone()));
            }
        }
        generators.sort_by(|a, b| (a.degree, &a.name).cmp(&(b.degree, &b.name)));
        let mut index = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(CdgaError::DuplicateGenerator(g.name.clone()));
            }
        }
        let n = generators.len();
        Ok(FreeCDGA {
            generators,
            d_images: vec![Element::zero(); n],
            truncation,
            index,
            caches: Caches::new(truncation),
        })
    }

    /// Sets `d(name) = image`. Well-formedness is checked by [`FreeCDGA::validate`].
    pub fn with_differential(mut self, name: &str, image: Element) -> Result<Self, CdgaError> {
        let i = self.generator_index(name)?;
        self.check_element(&image)?;
        self.d_images[i] = image;
        self.caches = Caches::new(self.truncation);
        Ok(self)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, CdgaError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| CdgaError::UnknownGenerator(name.to_string()))
    }

    pub fn has_generator(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn gen(&self, name: &str) -> Result<Element, CdgaError> {
        let i = self.generator_index(name)?;
        Ok(Element::monomial(Monomial::generator(i), Rational::one()))
    }

    pub fn d_image(&self, index: usize) -> &Element {
        &self.d_images[index]
    }

    fn is_odd(&self, index: usize) -> bool {
        self.generators[index].degree % 2 == 1
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.factors().map(|i| self.generators[i].degree).sum()
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree(&self, x: &Element) -> Option<u32> {
        let mut degs = x.terms().map(|(m, _)| self.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, x: &Element, degree: u32) -> bool {
        x.terms().all(|(m, _)| self.monomial_degree(m) == degree)
    }

    /// Checks that every generator index referenced by `x` exists here.
    pub fn check_element(&self, x: &Element) -> Result<(), CdgaError> {
        match x.max_generator_index() {
            Some(i) if i >= self.generators.len() => Err(CdgaError::MixedAlgebras),
            _ => Ok(()),
        }
    }

    /// Product of two monomials with its Koszul sign, or `None` when it
    /// vanishes (repeated odd generator or degree above the truncation).
    pub fn mul_monomials(&self, x: &Monomial, y: &Monomial) -> Option<(Monomial, bool)> {
        if self.monomial_degree(x) + self.monomial_degree(y) > self.truncation {
            return None;
        }
        let mut negative = false;
        for &b in &y.0 {
            if !self.is_odd(b as usize) {
                continue;
            }
            for &a in &x.0 {
                if a == b {
                    return None;
                }
                if a > b && self.is_odd(a as usize) {
                    negative = !negative;
                }
            }
        }
        let mut f = Vec::with_capacity(x.0.len() + y.0.len());
        let (mut i, mut j) = (0, 0);
        while i < x.0.len() || j < y.0.len() {
            if j == y.0.len() || (i < x.0.len() && x.0[i] <= y.0[j]) {
                f.push(x.0[i]);
                i += 1;
            } else {
                f.push(y.0[j]);
                j += 1;
            }
        }
        Some((Monomial(f), negative))
    }

    /// Graded-commutative product, truncated above the top degree.
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for (mx, a) in x.terms() {
            for (my, b) in y.terms() {
                if let Some((m, neg)) = self.mul_monomials(mx, my) {
                    let c = a * b;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Checked product: fails if either factor references foreign generators.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, CdgaError> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.mul(x, y))
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a Element>) -> Element {
        factors
            .into_iter()
            .fold(Element::one(), |acc, f| self.mul(&acc, f))
    }

    /// Power of an element (`x^0 = 1`).
    pub fn pow(&self, x: &Element, k: u32) -> Element {
        (0..k).fold(Element::one(), |acc, _| self.mul(&acc, x))
    }

    /// The derivation extending `g ↦ d_images[g]`.
    pub fn d(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            out.add_scaled(&self.d_monomial(m), c);
        }
        out
    }

    /// Checked differential.
    pub fn differential(&self, x: &Element) -> Result<Element, CdgaError> {
        self.check_element(x)?;
        Ok(self.d(x))
    }

    fn d_monomial(&self, m: &Monomial) -> Element {
        let mut out = Element::zero();
        let mut prefix_degree = 0u32;
        for (pos, g) in m.factors().enumerate() {
            let dg = &self.d_images[g];
            if !dg.is_zero() {
                let prefix = Element::monomial(Monomial(m.0[..pos].to_vec()), Rational::one());
                let suffix = Element::monomial(Monomial(m.0[pos + 1..].to_vec()), Rational::one());
                let term = self.mul(&self.mul(&prefix, dg), &suffix);
                let sign = if prefix_degree % 2 == 1 {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                out.add_scaled(&term, &sign);
            }
            prefix_degree += self.generators[g].degree;
        }
        out
    }

    /// All normalized monomials of total degree `k`, in lexicographic order
    /// of their factor lists.
    pub fn monomial_basis(&self, k: u32) -> Result<Arc<Vec<Monomial>>, CdgaError> {
        if k > self.truncation {
            return Err(CdgaError::DegreeOutOfRange {
                degree: k,
                truncation: self.truncation,
            });
        }
        Ok(self.caches.bases[k as usize]
            .get_or_init(|| {
                let mut out = Vec::new();
                let mut current = Vec::new();
                self.enumerate(0, k, &mut current, &mut out);
                out.sort();
                Arc::new(out)
            })
            .clone())
    }

    fn enumerate(&self, start: usize, remaining: u32, current: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(Monomial(current.clone()));
            return;
        }
        for g in start..self.generators.len() {
            let deg = self.generators[g].degree;
            if deg > remaining {
                continue;
            }
            current.push(g as u16);
            let next = if self.is_odd(g) { g + 1 } else { g };
            self.enumerate(next, remaining - deg, current, out);
            current.pop();
        }
    }

    /// Coordinates of a homogeneous element of degree `k` in the monomial basis.
    pub fn to_vector(&self, x: &Element, k: u32) -> Result<Vector, CdgaError> {
        let basis = self.monomial_basis(k)?;
        let mut v = vec![Rational::zero(); basis.len()];
        for (m, c) in x.terms() {
            let i = basis.binary_search(m).map_err(|_| CdgaError::NotHomogeneous)?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &[Rational], k: u32) -> Result<Element, CdgaError> {
        let basis = self.monomial_basis(k)?;
        let mut e = Element::zero();
        for (m, c) in basis.iter().zip(v) {
            e.add_term(m.clone(), c.clone());
        }
        Ok(e)
    }

    /// Matrix of `d: A^k → A^{k+1}` in the monomial bases.
    pub fn differential_matrix(&self, k: u32) -> Result<Arc<SparseMatrix>, CdgaError> {
        if k + 1 > self.truncation {
            return Err(CdgaError::DegreeOutOfRange {
                degree: k + 1,
                truncation: self.truncation,
            });
        }
        if let Some(m) = self.caches.differentials[k as usize].get() {
            return Ok(m.clone());
        }
        let source = self.monomial_basis(k)?;
        let target = self.monomial_basis(k + 1)?;
        let mut m = SparseMatrix::zeros(target.len(), source.len());
        for (j, mono) in source.iter().enumerate() {
            for (t, c) in self.d_monomial(mono).terms() {
                let i = target.binary_search(t).expect("differential raises degree by one");
                m.add_to(i, j, c);
            }
        }
        Ok(self.caches.differentials[k as usize]
            .get_or_init(|| Arc::new(m))
            .clone())
    }

    /// `H^k`, computed from kernels and images of the differential matrices.
    /// Requires `k + 1 ≤ truncation`.
    pub fn cohomology(&self, k: u32) -> Result<Arc<Cohomology>, CdgaError> {
        if k + 1 > self.truncation {
            return Err(CdgaError::DegreeOutOfRange {
                degree: k,
                truncation: self.truncation,
            });
        }
        if let Some(h) = self.caches.cohomology[k as usize].get() {
            return Ok(h.clone());
        }
        let basis = self.monomial_basis(k)?;
        let cocycles = kernel_basis(&*self.differential_matrix(k)?);
        let boundaries = if k == 0 {
            SubspaceBasis::zero(basis.len())
        } else {
            linalg::image_basis(&*self.differential_matrix(k - 1)?)
        };
        let quotient = Quotient::new(&cocycles, &boundaries)?;
        let h = Cohomology {
            degree: k,
            basis,
            cocycles,
            boundaries,
            quotient,
        };
        Ok(self.caches.cohomology[k as usize]
            .get_or_init(|| Arc::new(h))
            .clone())
    }

    /// Highest degree whose cohomology is computed on complete bases.
    pub fn trustworthy_degree(&self) -> u32 {
        self.truncation.saturating_sub(1)
    }

    /// Class of a cocycle of degree `degree`.
    pub fn reduce_to_class(&self, z: &Element, degree: u32) -> Result<CohomologyClass, CdgaError> {
        self.cohomology(degree)?.class_of(self, z)
    }

    /// Solves `d(w) = target` for `w` of degree `degree − 1`; `None` if `target` is not exact.
    pub fn primitive(&self, target: &Element, degree: u32) -> Result<Option<Element>, CdgaError> {
        if degree == 0 {
            return Ok(if target.is_zero() { Some(Element::zero()) } else { None });
        }
        let m = self.differential_matrix(degree - 1)?;
        let b = self.to_vector(target, degree)?;
        Ok(match linalg::solve(&m, &b)? {
            Some(x) => Some(self.from_vector(&x, degree - 1)?),
            None => None,
        })
    }

    /// True iff the class lies in the span of products of positive-degree classes.
    pub fn is_decomposable(&self, cls: &CohomologyClass) -> Result<bool, CdgaError> {
        if cls.is_zero() {
            return Ok(true);
        }
        let k = cls.degree;
        let h = self.cohomology(k)?;
        let mut products = Vec::new();
        for i in 1..k {
            let left = self.cohomology(i)?.classes(self)?;
            let right = self.cohomology(k - i)?.classes(self)?;
            for a in &left {
                for b in &right {
                    let p = self.mul(&a.representative, &b.representative);
                    products.push(h.class_of(self, &p)?.coordinates);
                }
            }
        }
        let span = SubspaceBasis::span(h.dim(), products);
        Ok(span.contains(&cls.coordinates))
    }

    /// Homogeneity of each `d(g)` and `d²(g) = 0` for every generator.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (i, g) in self.generators.iter().enumerate() {
            let dg = &self.d_images[i];
            if !self.is_homogeneous_of(dg, g.degree + 1) {
                report.push(format!(
                    "d({}) is not homogeneous of degree {}",
                    g.name,
                    g.degree + 1
                ));
                continue;
            }
            let ddg = self.d(dg);
            if !ddg.is_zero() {
                report.push(format!("d(d({})) = {} ≠ 0", g.name, self.format(&ddg)));
            }
        }
        report
    }

    /// Re-expresses an element of `from` in this algebra, matching generators by name.
    pub fn transport(&self, x: &Element, from: &FreeCDGA) -> Result<Element, CdgaError> {
        let mut images = Vec::with_capacity(from.generators.len());
        for g in &from.generators {
            images.push(self.gen(&g.name).ok());
        }
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            let mut term = Element::scalar(c.clone());
            for f in m.factors() {
                let img = images[f]
                    .as_ref()
                    .ok_or_else(|| CdgaError::UnknownGenerator(from.generators[f].name.clone()))?;
                term = self.mul(&term, img);
            }
            out += &term;
        }
        Ok(out)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            return "1".to_string();
        }
        m.factors()
            .map(|i| self.generators[i].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Renders an element in the expression grammar accepted by the parser.
    pub fn format(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in x.terms().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if m.is_unit() {
                out.push_str(&linalg::fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&linalg::fmt_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

/// `H^k` together with the data needed to reduce cocycles to classes.
#[derive(Debug, Clone)]
pub struct Cohomology {
    degree: u32,
    basis: Arc<Vec<Monomial>>,
    cocycles: SubspaceBasis,
    boundaries: SubspaceBasis,
    quotient: Quotient,
}

impl Cohomology {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn cocycles(&self) -> &SubspaceBasis {
        &self.cocycles
    }

    pub fn boundaries(&self) -> &SubspaceBasis {
        &self.boundaries
    }

    pub fn monomial_basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Basis classes with their chosen cocycle representatives.
    pub fn classes(&self, alg: &FreeCDGA) -> Result<Vec<CohomologyClass>, CdgaError> {
        (0..self.dim())
            .map(|i| {
                let mut coords = vec![Rational::zero(); self.dim()];
                coords[i] = Rational::one();
                self.class_from_coordinates(alg, coords)
            })
            .collect()
    }

    pub fn class_from_coordinates(
        &self,
        alg: &FreeCDGA,
        coordinates: Vector,
    ) -> Result<CohomologyClass, CdgaError> {
        let representative = alg.from_vector(&self.quotient.lift(&coordinates), self.degree)?;
        Ok(CohomologyClass {
            degree: self.degree,
            representative,
            coordinates,
        })
    }

    pub fn zero_class(&self) -> CohomologyClass {
        CohomologyClass {
            degree: self.degree,
            representative: Element::zero(),
            coordinates: vec![Rational::zero(); self.dim()],
        }
    }

    pub fn class_of(&self, alg: &FreeCDGA, z: &Element) -> Result<CohomologyClass, CdgaError> {
        let v = alg.to_vector(z, self.degree)?;
        let coordinates = self.quotient.coordinates(&v).map_err(|e| match e {
            LinalgError::NotInSpace => CdgaError::NotACocycle,
            other => other.into(),
        })?;
        Ok(CohomologyClass {
            degree: self.degree,
            representative: z.clone(),
            coordinates,
        })
    }
}

/// A cohomology class with an explicit cocycle representative.
#[derive(Debug, Clone)]
pub struct CohomologyClass {
    pub degree: u32,
    pub representative: Element,
    pub coordinates: Vector,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coordinates)
    }
}

/// Classes compare by degree and coordinates; representatives may differ by a coboundary.
impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.coordinates == other.coordinates
    }
}

impl Eq for CohomologyClass {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::models;

    #[test]
    fn unit_and_odd_square() {
        let h = models::heisenberg(4);
        let a = h.gen("a").unwrap();
        assert_eq!(h.mul(&Element::one(), &a), a);
        assert!(h.mul(&a, &a).is_zero());
    }

    #[test]
    fn koszul_transposition() {
        let h = models::heisenberg(4);
        let (a, b) = (h.gen("a").unwrap(), h.gen("b").unwrap());
        assert_eq!(h.mul(&b, &a), -&h.mul(&a, &b));
        assert_eq!(h.format(&h.mul(&b, &a)), "-a*b");
    }

    #[test]
    fn heisenberg_differential() {
        let h = models::heisenberg(4);
        let (a, b, c) = (h.gen("a").unwrap(), h.gen("b").unwrap(), h.gen("c").unwrap());
        assert!(h.d(&Element::one()).is_zero());
        assert_eq!(h.d(&c), h.mul(&a, &b));
        assert!(h.d(&h.mul(&a, &c)).is_zero());
        assert!(h.validate().is_valid());
    }

    #[test]
    fn bases() {
        let h = models::heisenberg(4);
        assert_eq!(*h.monomial_basis(0).unwrap(), vec![Monomial::unit()]);
        let names: Vec<_> = h
            .monomial_basis(2)
            .unwrap()
            .iter()
            .map(|m| h.format_monomial(m))
            .collect();
        assert_eq!(names, ["a*b", "a*c", "b*c"]);
        let u = FreeCDGA::new(vec![Generator::new("u", 2)], 6).unwrap();
        let names: Vec<_> = u
            .monomial_basis(6)
            .unwrap()
            .iter()
            .map(|m| u.format_monomial(m))
            .collect();
        assert_eq!(names, ["u*u*u"]);
        assert!(matches!(
            u.monomial_basis(7),
            Err(CdgaError::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn heisenberg_cohomology() {
        let h = models::heisenberg(4);
        let h1 = h.cohomology(1).unwrap();
        assert_eq!(h1.dim(), 2);
        let h2 = h.cohomology(2).unwrap();
        assert_eq!(h2.dim(), 2);
        let reps: Vec<_> = h2
            .classes(&h)
            .unwrap()
            .iter()
            .map(|c| h.format(&c.representative))
            .collect();
        assert_eq!(reps, ["a*c", "b*c"]);
        assert!(matches!(
            h.cohomology(4),
            Err(CdgaError::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn koszul_pair_is_acyclic() {
        let a = FreeCDGA::new(vec![Generator::new("u", 2), Generator::new("x", 1)], 6)
            .unwrap();
        let u = a.gen("u").unwrap();
        let a = a.with_differential("x", u).unwrap();
        assert_eq!(a.cohomology(2).unwrap().dim(), 0);
        assert_eq!(a.cohomology(1).unwrap().dim(), 0);
        assert_eq!(a.cohomology(0).unwrap().dim(), 1);
    }

    #[test]
    fn reduce_to_class_examples() {
        let h = models::heisenberg(4);
        let (a, b, c) = (h.gen("a").unwrap(), h.gen("b").unwrap(), h.gen("c").unwrap());
        assert!(h.reduce_to_class(&Element::zero(), 2).unwrap().is_zero());
        assert!(h.reduce_to_class(&h.mul(&a, &b), 2).unwrap().is_zero());
        assert!(!h.reduce_to_class(&h.mul(&a, &c), 2).unwrap().is_zero());
        assert_eq!(h.reduce_to_class(&c, 1), Err(CdgaError::NotACocycle));
    }

    #[test]
    fn decomposability() {
        let h = models::heisenberg(4);
        let h2 = h.cohomology(2).unwrap();
        assert!(h.is_decomposable(&h2.zero_class()).unwrap());
        let ac = h.mul(&h.gen("a").unwrap(), &h.gen("c").unwrap());
        assert!(!h.is_decomposable(&h.reduce_to_class(&ac, 2).unwrap()).unwrap());
        let u = FreeCDGA::new(vec![Generator::new("u", 2)], 6).unwrap();
        let ug = u.gen("u").unwrap();
        let u2 = u.mul(&ug, &ug);
        assert!(u.is_decomposable(&u.reduce_to_class(&u2, 4).unwrap()).unwrap());
        assert!(!u.is_decomposable(&u.reduce_to_class(&ug, 2).unwrap()).unwrap());
    }

    #[test]
    fn validation_failures() {
        let h = FreeCDGA::new(
            vec![Generator::new("a", 1), Generator::new("c", 1)],
            4,
        )
        .unwrap();
        let a = h.gen("a").unwrap();
        let bad = h.clone().with_differential("c", a).unwrap();
        assert!(!bad.validate().is_valid());

        let g = FreeCDGA::new(vec![Generator::new("u", 2), Generator::new("y", 2)], 6).unwrap();
        let (u, y) = (g.gen("u").unwrap(), g.gen("y").unwrap());
        let g = g.with_differential("y", u).unwrap().with_differential("u", y).unwrap();
        assert!(!g.validate().is_valid());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            FreeCDGA::new(vec![Generator::new("a", 0)], 3).unwrap_err(),
            CdgaError::NonPositiveDegree("a".into())
        );
        assert_eq!(
            FreeCDGA::new(vec![Generator::new("a", 1), Generator::new("a", 2)], 3).unwrap_err(),
            CdgaError::DuplicateGenerator("a".into())
        );
        let h = models::heisenberg(4);
        let foreign = Element::monomial(Monomial::generator(7), int(1));
        assert_eq!(h.multiply(&foreign, &foreign), Err(CdgaError::MixedAlgebras));
    }

    #[test]
    fn transport_reorders_with_signs() {
        let h = models::heisenberg(4);
        // In `t`, c sorts before a and b, so a*c becomes -c*a.
        let t = FreeCDGA::new(
            vec![Generator::new("a", 1), Generator::new("b", 1), Generator::new("_c", 1)],
            4,
        )
        .unwrap();
        let renamed = FreeCDGA::new(
            vec![Generator::new("a", 1), Generator::new("b", 1), Generator::new("c", 1)],
            4,
        )
        .unwrap();
        let ac = h.mul(&h.gen("a").unwrap(), &h.gen("c").unwrap());
        assert_eq!(renamed.transport(&ac, &h).unwrap(), renamed.mul(&renamed.gen("a").unwrap(), &renamed.gen("c").unwrap()));
        assert!(t.transport(&ac, &h).is_err());
    }
}
