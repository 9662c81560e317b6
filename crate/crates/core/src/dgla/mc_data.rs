use num_traits::{One, Zero};

use super::{lie_add_scaled, lie_basis, DglaError, LieVec, FDGLA};
use crate::cdga::ValidationReport;
use crate::linalg::{Rational, SparseMatrix};

/// Central extension `Z ↪ L̃ ↠ L` with `Z` spanned by the basis element
/// `center` of degree `q`, plus a linear section `s` of the projection.
#[derive(Debug, Clone)]
pub struct MCProductData {
    total: FDGLA,
    center: usize,
    quotient: FDGLA,
    // total index -> quotient index
    quotient_index: Vec<Option<usize>>,
    section: Vec<LieVec>,
}

impl MCProductData {
    /// Builds the quotient `L̃ / ℚ·center` on the remaining basis elements and
    /// the basis-complement section.
    pub fn from_central(total: FDGLA, center: usize) -> Result<Self, DglaError> {
        total.check_index(center)?;
        let mut quotient_index = vec![None; total.dim()];
        let mut names = Vec::new();
        for i in 0..total.dim() {
            if i != center {
                quotient_index[i] = Some(names.len());
                names.push((total.name(i).to_string(), total.degree(i)));
            }
        }
        let project = |v: &LieVec| -> LieVec {
            v.iter()
                .filter_map(|(&i, a)| quotient_index[i].map(|j| (j, a.clone())))
                .collect()
        };
        let mut quotient = FDGLA::new(names)?.auxiliary(total.is_auxiliary());
        for (&(i, j), v) in total.structure_constants() {
            if let (Some(qi), Some(qj)) = (quotient_index[i], quotient_index[j]) {
                quotient.set_bracket_raw(qi, qj, project(v))?;
            }
        }
        for i in 0..total.dim() {
            if let Some(qi) = quotient_index[i] {
                quotient.set_differential(qi, project(total.d_basis(i)))?;
            }
        }
        let section = (0..total.dim())
            .filter(|&i| i != center)
            .map(lie_basis)
            .collect();
        Ok(MCProductData {
            total,
            center,
            quotient,
            quotient_index,
            section,
        })
    }

    /// Replaces the section by `l ↦ s₀(l) + shift(l)·z`. Only quotient basis
    /// elements of degree `q` may receive a nonzero shift.
    pub fn with_center_shift(mut self, shift: &[Rational]) -> Result<Self, DglaError> {
        if shift.len() != self.quotient.dim() {
            return Err(DglaError::InvalidData("section shift has wrong length".into()));
        }
        for (l, c) in shift.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.quotient.degree(l) != self.q() {
                return Err(DglaError::InvalidData(format!(
                    "section would not preserve the degree of {}",
                    self.quotient.name(l)
                )));
            }
            lie_add_scaled(&mut self.section[l], &lie_basis(self.center), c);
        }
        Ok(self)
    }

    /// Uses an arbitrary section, given as images of the quotient basis.
    pub fn with_section(mut self, section: Vec<LieVec>) -> Result<Self, DglaError> {
        if section.len() != self.quotient.dim() {
            return Err(DglaError::InvalidData("section has wrong length".into()));
        }
        for v in &section {
            self.total.check_vec(v)?;
        }
        self.section = section;
        Ok(self)
    }

    pub fn total(&self) -> &FDGLA {
        &self.total
    }

    pub fn quotient(&self) -> &FDGLA {
        &self.quotient
    }

    pub fn center(&self) -> usize {
        self.center
    }

    /// Degree of the center.
    pub fn q(&self) -> i32 {
        self.total.degree(self.center)
    }

    /// `π: L̃ → L`.
    pub fn project(&self, v: &LieVec) -> LieVec {
        v.iter()
            .filter_map(|(&i, a)| self.quotient_index[i].map(|j| (j, a.clone())))
            .collect()
    }

    /// `s: L → L̃`.
    pub fn lift(&self, v: &LieVec) -> LieVec {
        let mut out = LieVec::new();
        for (&l, a) in v {
            lie_add_scaled(&mut out, &self.section[l], a);
        }
        out
    }

    pub fn section_of(&self, l: usize) -> &LieVec {
        &self.section[l]
    }

    /// Coefficient of the center.
    pub fn z_component(&self, v: &LieVec) -> Rational {
        v.get(&self.center).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn projection_matrix(&self) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(self.quotient.dim(), self.total.dim());
        for (i, q) in self.quotient_index.iter().enumerate() {
            if let Some(j) = q {
                m.add_to(*j, i, &Rational::one());
            }
        }
        m
    }

    pub fn section_matrix(&self) -> SparseMatrix {
        let cols: Vec<_> = self.section.iter().map(|v| self.total.to_dense(v)).collect();
        SparseMatrix::from_columns(self.total.dim(), &cols)
    }

    /// Checks every clause of an MC-product datum: both algebras valid,
    /// nilpotent and nonpositively graded; the center is central, closed,
    /// of degree `q ≤ 0` and meets the image of `d̃` trivially; `π` is a
    /// DGLA map and `π∘s = id` with `s` degree-preserving.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (label, g) in [("total", &self.total), ("quotient", &self.quotient)] {
            let r = g.validate();
            for v in r.violations {
                report.push(format!("{label}: {v}"));
            }
            if g.is_auxiliary() {
                report.push(format!("{label}: auxiliary (positively graded) algebra"));
            }
            if !g.is_nilpotent() {
                report.push(format!("{label}: not nilpotent"));
            }
        }
        let z = self.center;
        if self.q() > 0 {
            report.push(format!("center has positive degree {}", self.q()));
        }
        for i in 0..self.total.dim() {
            if self.total.bracket_basis(z, i).is_some() || self.total.bracket_basis(i, z).is_some() {
                report.push(format!("center does not commute with {}", self.total.name(i)));
            }
        }
        if !self.total.d_basis(z).is_empty() {
            report.push("center is not closed");
        }
        let image = self.total.image_of_differential();
        if image.contains(&self.total.to_dense(&lie_basis(z))) {
            report.push("image of the differential meets the center");
        }
        let pi = self.projection_matrix();
        let s = self.section_matrix();
        match pi.mul(&s) {
            Ok(ps) if ps == SparseMatrix::identity(self.quotient.dim()) => {}
            _ => report.push("π∘s is not the identity"),
        }
        for (l, v) in self.section.iter().enumerate() {
            if v.keys().any(|&i| self.total.degree(i) != self.quotient.degree(l)) {
                report.push(format!("section does not preserve the degree of {}", self.quotient.name(l)));
            }
        }
        let n = self.total.dim();
        for i in 0..n {
            let di = self.project(self.total.d_basis(i));
            let pdi = self.quotient.d(&self.project(&lie_basis(i)));
            if di != pdi {
                report.push(format!("π does not commute with d on {}", self.total.name(i)));
            }
            for j in 0..n {
                let lhs = self.project(&self.total.bracket(&lie_basis(i), &lie_basis(j)));
                let rhs = self.quotient.bracket(
                    &self.project(&lie_basis(i)),
                    &self.project(&lie_basis(j)),
                );
                if lhs != rhs {
                    report.push(format!(
                        "π is not a bracket map on ({}, {})",
                        self.total.name(i),
                        self.total.name(j)
                    ));
                }
            }
        }
        report
    }
}

/// Basis name used by [`massey_data`] for the window `(i, j)` (1-based).
pub fn massey_window_name(i: usize, j: usize, n: usize) -> String {
    if i == j {
        format!("e{i}")
    } else if (i, j) == (1, n) {
        "eta".to_string()
    } else {
        format!("b{i}_{j}")
    }
}

/// Windows `(i, j)` of the Massey data in basis order: by length, then by start.
pub fn massey_windows(n: usize) -> Vec<(usize, usize)> {
    let mut w = Vec::new();
    for len in 0..n {
        for i in 1..=n - len {
            w.push((i, i + len));
        }
    }
    w
}

/// MC-product data realizing the `n`-fold Massey product of classes of the
/// given degrees.
///
/// `L̃` has basis `b_(i,j)`, `1 ≤ i ≤ j ≤ n`, with `b_(i,i) = εᵢ` of degree
/// `1 − |aᵢ|`. The bracket is the graded commutator of elementary matrices
/// `b_(i,j) ↦ E_{i,j+1}`, so `[b_(i,j), b_(j+1,l)] = b_(i,l)` and
/// `b_(i,j)` equals the nested bracket `[εᵢ, [εᵢ₊₁, …, εⱼ]]`. The center is
/// `η = b_(1,n)`; the differential is zero.
pub fn massey_data(n: usize, degrees: &[u32]) -> Result<MCProductData, DglaError> {
    MasseyLabels::new(n, degrees).map(|l| l.data)
}

/// Massey data together with the window labelling of its basis.
#[derive(Debug, Clone)]
pub struct MasseyLabels {
    pub n: usize,
    pub data: MCProductData,
    pub windows: Vec<(usize, usize)>,
}

impl MasseyLabels {
    pub fn new(n: usize, degrees: &[u32]) -> Result<Self, DglaError> {
        if n < 2 || degrees.len() != n || degrees.contains(&0) {
            return Err(DglaError::BadMasseyInput);
        }
        let eps: Vec<i32> = degrees.iter().map(|&d| 1 - d as i32).collect();
        let q: i32 = eps.iter().sum();
        if q > 0 {
            return Err(DglaError::PositiveCentralDegree(q));
        }
        let windows = massey_windows(n);
        let window_degree = |(i, j): (usize, usize)| eps[i - 1..j].iter().sum::<i32>();
        let basis = windows
            .iter()
            .map(|&w| (massey_window_name(w.0, w.1, n), window_degree(w)))
            .collect();
        let mut total = FDGLA::new(basis)?;
        let idx = |w: (usize, usize)| windows.iter().position(|&v| v == w).expect("window");
        for &(i, j) in &windows {
            for l in j + 1..=n {
                let (a, b, c) = (idx((i, j)), idx((j + 1, l)), idx((i, l)));
                total.set_bracket(a, b, lie_basis(c))?;
            }
        }
        let center = idx((1, n));
        let data = MCProductData::from_central(total, center)?;
        Ok(MasseyLabels { n, data, windows })
    }

    /// Index of window `(i, j)` in the total algebra.
    pub fn total_index(&self, i: usize, j: usize) -> usize {
        self.windows
            .iter()
            .position(|&w| w == (i, j))
            .expect("window in range")
    }

    /// Index of window `(i, j)` in the quotient; `None` for the center.
    pub fn quotient_index(&self, i: usize, j: usize) -> Option<usize> {
        self.data.quotient_index[self.total_index(i, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn massey_two_is_heisenberg_lie_algebra() {
        let l = MasseyLabels::new(2, &[1, 1]).unwrap();
        let d = &l.data;
        assert_eq!(d.total().dim(), 3);
        assert_eq!(d.q(), 0);
        let (e1, e2) = (l.total_index(1, 1), l.total_index(2, 2));
        assert_eq!(
            d.total().bracket_basis(e1, e2),
            Some(&lie_basis(d.center()))
        );
        assert!(d.validate().is_valid(), "{}", d.validate());
    }

    #[test]
    fn massey_three_shapes() {
        let d = massey_data(3, &[1, 1, 1]).unwrap();
        assert_eq!(d.total().dim(), 6);
        assert_eq!(d.q(), 0);
        assert!(d.total().validate().is_valid());
        assert!(d.validate().is_valid(), "{}", d.validate());
        assert_eq!(d.quotient().lower_central_series().unwrap().len(), 3);

        let d = massey_data(3, &[2, 1, 1]).unwrap();
        assert_eq!(d.q(), -1);
        assert!(d.validate().is_valid(), "{}", d.validate());
    }

    #[test]
    fn massey_rejects_bad_input() {
        assert_eq!(massey_data(1, &[1]).unwrap_err(), DglaError::BadMasseyInput);
        assert_eq!(massey_data(2, &[1, 0]).unwrap_err(), DglaError::BadMasseyInput);
    }

    #[test]
    fn central_series_length_matches_n() {
        for n in 2..=4 {
            let d = massey_data(n, &vec![1; n]).unwrap();
            assert_eq!(d.quotient().lower_central_series().unwrap().len(), n);
            assert!(d.validate().is_valid());
        }
    }

    #[test]
    fn invalid_data_is_reported() {
        // d̃(w) = z
        let mut g = FDGLA::new(vec![("w".into(), -1), ("z".into(), 0)]).unwrap();
        g.set_differential(0, lie_basis(1)).unwrap();
        let d = MCProductData::from_central(g, 1).unwrap();
        assert!(!d.validate().is_valid());

        let g = FDGLA::new(vec![("z".into(), 1)]).unwrap();
        let d = MCProductData::from_central(g, 0).unwrap();
        assert!(!d.validate().is_valid());
    }

    #[test]
    fn center_shift_respects_degree() {
        let d = massey_data(3, &[2, 1, 1]).unwrap();
        let mut shift = vec![Rational::zero(); d.quotient().dim()];
        let e1 = d.quotient().index_of("e1").unwrap();
        shift[e1] = int(3);
        let shifted = d.clone().with_center_shift(&shift).unwrap();
        assert!(shifted.validate().is_valid());
        let e2 = d.quotient().index_of("e2").unwrap();
        shift[e2] = int(1);
        assert!(d.with_center_shift(&shift).is_err());
    }
}
