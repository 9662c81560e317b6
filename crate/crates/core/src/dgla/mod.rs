//! Finite-dimensional differential graded Lie algebras given by structure
//! constants.
//!
//! Brackets are stored for ordered pairs of basis elements; [`FDGLA::set_bracket`]
//! fills in the graded-antisymmetric partner so that callers only specify one
//! order. Elements are sparse vectors over the basis ([`LieVec`]).

mod auxiliary;
mod cochain;
mod mc_data;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cdga::ValidationReport;
use crate::linalg::{self, Rational, SparseMatrix, SubspaceBasis, Vector};

pub use auxiliary::{build_n_tilde, perturb_differential, truncate_at_zero, NTilde, SubDgla};
pub use cochain::LieCochain;
pub use mc_data::{massey_data, massey_window_name, massey_windows, MCProductData, MasseyLabels};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DglaError {
    #[error("duplicate basis element `{0}`")]
    DuplicateBasis(String),
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("invalid MC-product data: {0}")]
    InvalidData(String),
    #[error("element is not closed: {0}")]
    NotClosed(String),
    #[error("x must have odd positive degree, got {0}")]
    EvenDegree(u32),
    #[error("Massey data needs n ≥ 2 positive degrees")]
    BadMasseyInput,
    #[error("Massey data would have positive central degree q = {0}")]
    PositiveCentralDegree(i32),
    #[error("subalgebra is not closed: {0}")]
    NotClosedSubalgebra(String),
}

/// Sparse element of a DGLA in basis coordinates.
pub type LieVec = BTreeMap<usize, Rational>;

pub fn lie_add_scaled(target: &mut LieVec, v: &LieVec, c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (&i, a) in v {
        let e = target.entry(i).or_insert_with(Rational::zero);
        *e += a * c;
        if e.is_zero() {
            target.remove(&i);
        }
    }
}

pub fn lie_basis(i: usize) -> LieVec {
    LieVec::from([(i, Rational::one())])
}

fn sign(negative: bool) -> Rational {
    if negative {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// `(−1)^{a·b}` as a rational.
pub fn koszul(a: i64, b: i64) -> Rational {
    sign((a * b).rem_euclid(2) == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i32,
}

/// Finite-dimensional DGLA. The `auxiliary` flag allows positive degrees.
#[derive(Debug, Clone)]
pub struct FDGLA {
    basis: Vec<BasisElement>,
    brackets: BTreeMap<(usize, usize), LieVec>,
    differential: Vec<LieVec>,
    auxiliary: bool,
    index: HashMap<String, usize>,
}

impl FDGLA {
    pub fn new(basis: Vec<(String, i32)>) -> Result<Self, DglaError> {
        let mut index = HashMap::new();
        let basis: Vec<BasisElement> = basis
            .into_iter()
            .map(|(name, degree)| BasisElement { name, degree })
            .collect();
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.name.clone(), i).is_some() {
                return Err(DglaError::DuplicateBasis(b.name.clone()));
            }
        }
        let n = basis.len();
        Ok(FDGLA {
            basis,
            brackets: BTreeMap::new(),
            differential: vec![LieVec::new(); n],
            auxiliary: false,
            index,
        })
    }

    pub fn auxiliary(mut self, flag: bool) -> Self {
        self.auxiliary = flag;
        self
    }

    pub fn is_auxiliary(&self) -> bool {
        self.auxiliary
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize, DglaError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| DglaError::UnknownBasis(name.to_string()))
    }

    fn check_index(&self, i: usize) -> Result<(), DglaError> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(DglaError::IndexOutOfRange(i))
        }
    }

    fn check_vec(&self, v: &LieVec) -> Result<(), DglaError> {
        match v.keys().next_back() {
            Some(&i) => self.check_index(i),
            None => Ok(()),
        }
    }

    /// Sets `[e_i, e_j] = value` and `[e_j, e_i] = −(−1)^{|i||j|} value`.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: LieVec) -> Result<(), DglaError> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_vec(&value)?;
        let mut partner = LieVec::new();
        let s = -koszul(self.degree(i) as i64, self.degree(j) as i64);
        lie_add_scaled(&mut partner, &value, &s);
        self.set_raw(i, j, value);
        if i != j {
            self.set_raw(j, i, partner);
        }
        Ok(())
    }

    /// Sets one ordered structure constant without touching its partner.
    pub fn set_bracket_raw(&mut self, i: usize, j: usize, value: LieVec) -> Result<(), DglaError> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_vec(&value)?;
        self.set_raw(i, j, value);
        Ok(())
    }

    fn set_raw(&mut self, i: usize, j: usize, value: LieVec) {
        if value.is_empty() {
            self.brackets.remove(&(i, j));
        } else {
            self.brackets.insert((i, j), value);
        }
    }

    pub fn set_differential(&mut self, i: usize, value: LieVec) -> Result<(), DglaError> {
        self.check_index(i)?;
        self.check_vec(&value)?;
        self.differential[i] = value;
        Ok(())
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Option<&LieVec> {
        self.brackets.get(&(i, j))
    }

    /// Nonzero ordered structure constants.
    pub fn structure_constants(&self) -> impl Iterator<Item = (&(usize, usize), &LieVec)> {
        self.brackets.iter()
    }

    pub fn d_basis(&self, i: usize) -> &LieVec {
        &self.differential[i]
    }

    pub fn bracket(&self, x: &LieVec, y: &LieVec) -> LieVec {
        let mut out = LieVec::new();
        for (&i, a) in x {
            for (&j, b) in y {
                if let Some(v) = self.brackets.get(&(i, j)) {
                    lie_add_scaled(&mut out, v, &(a * b));
                }
            }
        }
        out
    }

    pub fn d(&self, x: &LieVec) -> LieVec {
        let mut out = LieVec::new();
        for (&i, a) in x {
            lie_add_scaled(&mut out, &self.differential[i], a);
        }
        out
    }

    /// Degree of a nonzero homogeneous element.
    pub fn vec_degree(&self, x: &LieVec) -> Option<i32> {
        let mut it = x.keys().map(|&i| self.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn to_dense(&self, x: &LieVec) -> Vector {
        let mut v = vec![Rational::zero(); self.dim()];
        for (&i, a) in x {
            v[i] = a.clone();
        }
        v
    }

    pub fn from_dense(v: &[Rational]) -> LieVec {
        v.iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| (i, a.clone()))
            .collect()
    }

    /// Matrix of the differential (columns are images of basis elements).
    pub fn differential_matrix(&self) -> SparseMatrix {
        let cols: Vec<Vector> = self.differential.iter().map(|v| self.to_dense(v)).collect();
        SparseMatrix::from_columns(self.dim(), &cols)
    }

    /// Renders an element in the expression grammar accepted by the parser.
    pub fn format_vec(&self, x: &LieVec) -> String {
        if x.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (&i, a)) in x.iter().enumerate() {
            let negative = a < &Rational::zero();
            let abs = if negative { -a.clone() } else { a.clone() };
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !abs.is_one() {
                out.push_str(&linalg::fmt_rational(&abs));
                out.push('*');
            }
            out.push_str(self.name(i));
        }
        out
    }

    /// Checks homogeneity, graded antisymmetry, Jacobi, `d² = 0`, the Leibniz
    /// rule and (unless auxiliary) nonpositive grading.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim();
        let deg = |i: usize| self.degree(i) as i64;
        if !self.auxiliary {
            for b in &self.basis {
                if b.degree > 0 {
                    report.push(format!("{} has positive degree {}", b.name, b.degree));
                }
            }
        }
        for (&(i, j), v) in &self.brackets {
            if let Some(bad) = v.keys().find(|&&k| deg(k) != deg(i) + deg(j)) {
                report.push(format!(
                    "[{}, {}] has a component {} of the wrong degree",
                    self.name(i),
                    self.name(j),
                    self.name(*bad)
                ));
            }
        }
        for i in 0..n {
            if let Some(bad) = self.differential[i].keys().find(|&&k| deg(k) != deg(i) + 1) {
                report.push(format!(
                    "d({}) has a component {} of the wrong degree",
                    self.name(i),
                    self.name(*bad)
                ));
            }
        }
        if !report.is_valid() {
            return report;
        }
        let e = lie_basis;
        for i in 0..n {
            for j in 0..n {
                let xy = self.bracket(&e(i), &e(j));
                let mut sum = self.bracket(&e(j), &e(i));
                lie_add_scaled(&mut sum, &xy, &koszul(deg(i), deg(j)));
                if !sum.is_empty() {
                    report.push(format!(
                        "antisymmetry fails for ({}, {})",
                        self.name(i),
                        self.name(j)
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let yz: Vec<LieVec> = (0..n).map(|k| self.bracket(&e(j), &e(k))).collect();
                let xy = self.bracket(&e(i), &e(j));
                for k in 0..n {
                    // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
                    let mut lhs = self.bracket(&e(i), &yz[k]);
                    lie_add_scaled(&mut lhs, &self.bracket(&xy, &e(k)), &-Rational::one());
                    let xz = self.bracket(&e(i), &e(k));
                    lie_add_scaled(
                        &mut lhs,
                        &self.bracket(&e(j), &xz),
                        &-koszul(deg(i), deg(j)),
                    );
                    if !lhs.is_empty() {
                        report.push(format!(
                            "Jacobi fails for ({}, {}, {})",
                            self.name(i),
                            self.name(j),
                            self.name(k)
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            if !self.d(&self.differential[i]).is_empty() {
                report.push(format!("d² ≠ 0 on {}", self.name(i)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                // d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
                let mut lhs = self.d(&self.bracket(&e(i), &e(j)));
                lie_add_scaled(
                    &mut lhs,
                    &self.bracket(&self.differential[i], &e(j)),
                    &-Rational::one(),
                );
                lie_add_scaled(
                    &mut lhs,
                    &self.bracket(&e(i), &self.differential[j]),
                    &-koszul(deg(i), 1),
                );
                if !lhs.is_empty() {
                    report.push(format!(
                        "Leibniz fails for ({}, {})",
                        self.name(i),
                        self.name(j)
                    ));
                }
            }
        }
        report
    }

    /// Lower central series `L¹ = L`, `Lⁱ = [L, Lⁱ⁻¹]`, ending with the zero stage.
    pub fn lower_central_series(&self) -> Result<Filtration, DglaError> {
        let n = self.dim();
        let mut stages = vec![SubspaceBasis::full(n)];
        for _ in 0..=n + 1 {
            let last = stages.last().expect("nonempty");
            if last.is_zero() {
                return Ok(Filtration { stages });
            }
            let mut products = Vec::new();
            for b in 0..n {
                for v in last.vectors() {
                    let w = self.bracket(&lie_basis(b), &Self::from_dense(v));
                    if !w.is_empty() {
                        products.push(self.to_dense(&w));
                    }
                }
            }
            let next = SubspaceBasis::span(n, products);
            if next.dim() == last.dim() {
                return Err(DglaError::NotNilpotent);
            }
            stages.push(next);
        }
        Err(DglaError::NotNilpotent)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().is_ok()
    }

    /// Span of the images `d(e_i)`.
    pub fn image_of_differential(&self) -> SubspaceBasis {
        linalg::image_basis(&self.differential_matrix())
    }
}

/// Descending filtration `F¹ ⊇ F² ⊇ …` whose last stage is zero.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub stages: Vec<SubspaceBasis>,
}

impl Filtration {
    /// Number of stages, counting the terminal zero stage.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Checks `[Fⁱ, Fʲ] ⊆ F^{i+j}` against the given algebra.
    pub fn is_compatible(&self, g: &FDGLA) -> bool {
        let stage = |k: usize| {
            self.stages
                .get(k.saturating_sub(1))
                .unwrap_or_else(|| self.stages.last().expect("nonempty"))
        };
        for i in 1..=self.len() {
            for j in 1..=self.len() {
                let target = stage(i + j);
                for x in stage(i).vectors() {
                    for y in stage(j).vectors() {
                        let b = g.bracket(&FDGLA::from_dense(x), &FDGLA::from_dense(y));
                        if !target.contains(&g.to_dense(&b)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn abelian(n: usize) -> FDGLA {
        FDGLA::new((0..n).map(|i| (format!("x{i}"), 0)).collect()).unwrap()
    }

    #[test]
    fn abelian_is_valid_and_nilpotent() {
        let g = abelian(3);
        assert!(g.validate().is_valid());
        let f = g.lower_central_series().unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.stages[1].is_zero());
    }

    #[test]
    fn non_nilpotent_two_dim() {
        let mut g = abelian(2);
        g.set_bracket(0, 1, lie_basis(1)).unwrap();
        assert!(g.validate().is_valid());
        assert_eq!(g.lower_central_series().unwrap_err(), DglaError::NotNilpotent);
    }

    #[test]
    fn degree_violation_is_reported() {
        let mut g = FDGLA::new(vec![("x".into(), 0), ("y".into(), -1)]).unwrap();
        g.set_bracket(0, 0, LieVec::new()).unwrap();
        g.set_bracket(0, 1, lie_basis(0)).unwrap();
        assert!(!g.validate().is_valid());
    }

    #[test]
    fn positive_degree_needs_auxiliary_flag() {
        let g = FDGLA::new(vec![("x".into(), 1)]).unwrap();
        assert!(!g.validate().is_valid());
        assert!(g.auxiliary(true).validate().is_valid());
    }

    #[test]
    fn set_bracket_fills_partner() {
        let mut g = FDGLA::new(vec![("x".into(), -1), ("y".into(), -1), ("z".into(), -2)]).unwrap();
        g.set_bracket(0, 1, lie_basis(2)).unwrap();
        // |x||y| = 1, so [y, x] = [x, y]
        assert_eq!(g.bracket_basis(1, 0), Some(&lie_basis(2)));
        assert!(g.validate().is_valid());
        let mut h = FDGLA::new(vec![("x".into(), 0), ("y".into(), 0), ("z".into(), 0)]).unwrap();
        h.set_bracket(0, 1, LieVec::from([(2, int(3))])).unwrap();
        assert_eq!(h.bracket_basis(1, 0), Some(&LieVec::from([(2, int(-3))])));
    }

    #[test]
    fn filtration_compatibility() {
        let mut g = abelian(3);
        g.set_bracket(0, 1, lie_basis(2)).unwrap();
        let f = g.lower_central_series().unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.is_compatible(&g));
    }
}
