//! The auxiliary algebras used to descend an MC product along an odd
//! spherical fibration: `Ñ = ℚη ⋉ L̃[ε]`, its perturbation `Ñ′` and the
//! nonpositive truncation `M̃`.

use num_traits::{One, Zero};

use super::{koszul, lie_add_scaled, lie_basis, DglaError, LieVec, MCProductData, FDGLA};
use crate::linalg::{self, Rational, SparseMatrix};

/// `Ñ` with its index layout: `L̃` in `0..m`, `L̃ε` in `m..2m`, `η` at `2m`.
#[derive(Debug, Clone)]
pub struct NTilde {
    pub algebra: FDGLA,
    pub m: usize,
    pub n: u32,
}

impl NTilde {
    pub fn plain(&self, i: usize) -> usize {
        i
    }

    pub fn eps(&self, i: usize) -> usize {
        self.m + i
    }

    pub fn eta(&self) -> usize {
        2 * self.m
    }

    /// `ℓ ↦ ℓε` on vectors of `L̃`.
    pub fn eps_vec(&self, v: &LieVec) -> LieVec {
        v.iter().map(|(&i, a)| (self.eps(i), a.clone())).collect()
    }
}

/// Builds `Ñ = L̃ ⊕ L̃ε ⊕ ℚη` with `|ε| = n`, `|η| = −n`, `η` acting by
/// `d/dε`. The result is flagged auxiliary.
pub fn build_n_tilde(data: &MCProductData, n: u32) -> Result<NTilde, DglaError> {
    if n.is_multiple_of(2) {
        return Err(DglaError::EvenDegree(n));
    }
    let report = data.validate();
    if !report.is_valid() {
        return Err(DglaError::InvalidData(report.to_string()));
    }
    let lt = data.total();
    let m = lt.dim();
    let ni = n as i32;
    let mut basis: Vec<(String, i32)> = Vec::with_capacity(2 * m + 1);
    for b in lt.basis() {
        basis.push((b.name.clone(), b.degree));
    }
    for b in lt.basis() {
        basis.push((format!("{}_eps", b.name), b.degree + ni));
    }
    basis.push(("eta_N".to_string(), -ni));
    let mut g = FDGLA::new(basis)?.auxiliary(true);
    let out = NTilde {
        algebra: FDGLA::new(Vec::new())?,
        m,
        n,
    };
    let shift = |v: &LieVec| out.eps_vec(v);
    for (&(i, j), v) in lt.structure_constants() {
        g.set_bracket_raw(i, j, v.clone())?;
        // [s, tε] = [s, t]ε
        g.set_bracket_raw(i, out.eps(j), shift(v))?;
        // [sε, t] = (−1)^{n|t|} [s, t]ε
        let mut w = LieVec::new();
        lie_add_scaled(&mut w, &shift(v), &koszul(n as i64, lt.degree(j) as i64));
        g.set_bracket_raw(out.eps(i), j, w)?;
    }
    for s in 0..m {
        // [η, sε] = (−1)^{|s|} s and its partner [sε, η] = s
        let sign = koszul(lt.degree(s) as i64, 1);
        g.set_bracket(out.eta(), out.eps(s), LieVec::from([(s, sign)]))?;
        g.set_differential(s, lt.d_basis(s).clone())?;
        g.set_differential(out.eps(s), shift(lt.d_basis(s)))?;
    }
    Ok(NTilde { algebra: g, ..out })
}

/// `Ñ′`: the same graded Lie algebra with differential `d + [ℓ₀ε, ·]`.
/// `ℓ₀` is given in `L̃` coordinates and must be closed.
pub fn perturb_differential(nt: &NTilde, l0: &LieVec) -> Result<NTilde, DglaError> {
    let g = &nt.algebra;
    for &i in l0.keys() {
        if i >= nt.m {
            return Err(DglaError::IndexOutOfRange(i));
        }
    }
    if !g.d(l0).is_empty() {
        return Err(DglaError::NotClosed(g.format_vec(l0)));
    }
    let l0e = nt.eps_vec(l0);
    let mut out = g.clone();
    for i in 0..g.dim() {
        let mut d = g.d_basis(i).clone();
        lie_add_scaled(&mut d, &g.bracket(&l0e, &lie_basis(i)), &Rational::one());
        out.set_differential(i, d)?;
    }
    Ok(NTilde {
        algebra: out,
        m: nt.m,
        n: nt.n,
    })
}

/// A subalgebra given by an inclusion of bases.
#[derive(Debug, Clone)]
pub struct SubDgla {
    pub algebra: FDGLA,
    /// Image of each basis element in the ambient algebra.
    pub inclusion: Vec<LieVec>,
    ambient_dim: usize,
}

impl SubDgla {
    pub fn include(&self, v: &LieVec) -> LieVec {
        let mut out = LieVec::new();
        for (&i, a) in v {
            lie_add_scaled(&mut out, &self.inclusion[i], a);
        }
        out
    }

    fn inclusion_matrix(&self) -> SparseMatrix {
        let cols: Vec<_> = self
            .inclusion
            .iter()
            .map(|v| {
                let mut d = vec![Rational::zero(); self.ambient_dim];
                for (&i, a) in v {
                    d[i] = a.clone();
                }
                d
            })
            .collect();
        SparseMatrix::from_columns(self.ambient_dim, &cols)
    }

    /// Coordinates of an ambient vector in the subalgebra, if it lies there.
    pub fn restrict(&self, v: &LieVec) -> Option<LieVec> {
        let mut b = vec![Rational::zero(); self.ambient_dim];
        for (&i, a) in v {
            b[i] = a.clone();
        }
        linalg::solve(&self.inclusion_matrix(), &b)
            .ok()
            .flatten()
            .map(|x| FDGLA::from_dense(&x))
    }
}

/// `M̃ ⊂ Ñ′`: everything in negative degrees, `ker d` in degree 0, nothing
/// above. Basis elements of negative degree keep their names; degree-0
/// kernel vectors keep the name of a basis element when they are one and
/// are called `k0`, `k1`, … otherwise.
pub fn truncate_at_zero(g: &FDGLA) -> Result<SubDgla, DglaError> {
    let n = g.dim();
    let mut names: Vec<(String, i32)> = Vec::new();
    let mut inclusion: Vec<LieVec> = Vec::new();
    for i in 0..n {
        if g.degree(i) < 0 {
            names.push((g.name(i).to_string(), g.degree(i)));
            inclusion.push(lie_basis(i));
        }
    }
    let zero_part: Vec<usize> = (0..n).filter(|&i| g.degree(i) == 0).collect();
    if !zero_part.is_empty() {
        let targets: Vec<usize> = (0..n).filter(|&i| g.degree(i) == 1).collect();
        let mut dm = SparseMatrix::zeros(targets.len(), zero_part.len());
        for (c, &i) in zero_part.iter().enumerate() {
            for (&k, a) in g.d_basis(i) {
                let r = targets.iter().position(|&t| t == k).expect("degree-1 target");
                dm.set(r, c, a.clone()).expect("in range");
            }
        }
        let kernel = linalg::kernel_basis(&dm);
        for (count, v) in kernel.vectors().iter().enumerate() {
            let vec: LieVec = v
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(c, a)| (zero_part[c], a.clone()))
                .collect();
            let name = match vec.iter().next() {
                Some((&i, a)) if vec.len() == 1 && a.is_one() => g.name(i).to_string(),
                _ => format!("k{count}"),
            };
            names.push((name, 0));
            inclusion.push(vec);
        }
    }
    let mut sub = SubDgla {
        algebra: FDGLA::new(names)?,
        inclusion,
        ambient_dim: n,
    };
    let dim = sub.algebra.dim();
    let mut algebra = sub.algebra.clone();
    for i in 0..dim {
        let d = g.d(&sub.inclusion[i]);
        let r = sub
            .restrict(&d)
            .ok_or_else(|| DglaError::NotClosedSubalgebra(format!("d({})", algebra.name(i))))?;
        algebra.set_differential(i, r)?;
        for j in 0..dim {
            let b = g.bracket(&sub.inclusion[i], &sub.inclusion[j]);
            if b.is_empty() {
                continue;
            }
            let r = sub.restrict(&b).ok_or_else(|| {
                DglaError::NotClosedSubalgebra(format!(
                    "[{}, {}]",
                    algebra.name(i),
                    algebra.name(j)
                ))
            })?;
            algebra.set_bracket_raw(i, j, r)?;
        }
    }
    sub.algebra = algebra;
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::massey_data;
    use crate::linalg::int;

    #[test]
    fn n_tilde_of_abelian_data() {
        let g = FDGLA::new(vec![("s".into(), -1), ("z".into(), -1)]).unwrap();
        let d = MCProductData::from_central(g, 1).unwrap();
        let nt = build_n_tilde(&d, 1).unwrap();
        assert_eq!(nt.algebra.dim(), 5);
        assert!(nt.algebra.validate().is_valid(), "{}", nt.algebra.validate());
        let nonzero: Vec<_> = nt.algebra.structure_constants().map(|(k, _)| *k).collect();
        // only [η, sε] and their partners
        assert!(nonzero
            .iter()
            .all(|&(i, j)| i == nt.eta() || j == nt.eta()));
        assert_eq!(
            nt.algebra.bracket_basis(nt.eta(), nt.eps(0)),
            Some(&LieVec::from([(0, int(-1))]))
        );
    }

    #[test]
    fn n_tilde_rejects_even_n() {
        let d = massey_data(2, &[1, 1]).unwrap();
        assert_eq!(build_n_tilde(&d, 2).unwrap_err(), DglaError::EvenDegree(2));
    }

    #[test]
    fn n_tilde_of_massey_data_is_valid() {
        for (n, degs, x) in [(3, vec![2, 1, 1], 1), (3, vec![1, 1, 1], 3), (2, vec![2, 1], 1)] {
            let d = massey_data(n, &degs).unwrap();
            let nt = build_n_tilde(&d, x).unwrap();
            assert_eq!(nt.algebra.dim(), 2 * d.total().dim() + 1);
            assert!(nt.algebra.validate().is_valid(), "{}", nt.algebra.validate());
            assert!(nt.algebra.is_nilpotent());
        }
    }

    #[test]
    fn perturbation_by_zero_is_identity() {
        let d = massey_data(3, &[2, 1, 1]).unwrap();
        let nt = build_n_tilde(&d, 1).unwrap();
        let p = perturb_differential(&nt, &LieVec::new()).unwrap();
        for i in 0..nt.algebra.dim() {
            assert_eq!(p.algebra.d_basis(i), nt.algebra.d_basis(i));
        }
    }

    #[test]
    fn perturbation_moves_eta_to_l0() {
        // massey_data(2, [1, 2]): ε₁ of degree 0, ε₂ of degree −1; n = 1 so ℓ₀ ∈ L̃⁰
        let d = massey_data(2, &[1, 2]).unwrap();
        let e1 = d.total().index_of("e1").unwrap();
        let nt = build_n_tilde(&d, 1).unwrap();
        let p = perturb_differential(&nt, &lie_basis(e1)).unwrap();
        assert!(p.algebra.validate().is_valid(), "{}", p.algebra.validate());
        // d′η = [ℓ₀ε, η] = ℓ₀
        assert_eq!(p.algebra.d_basis(nt.eta()), &lie_basis(e1));
        let m = truncate_at_zero(&p.algebra).unwrap();
        assert!(m.algebra.validate().is_valid(), "{}", m.algebra.validate());
        assert!(m.algebra.basis().iter().all(|b| b.degree <= 0));
    }

    #[test]
    fn truncation_keeps_nonpositive_closed_part() {
        let mut g = FDGLA::new(vec![("a".into(), 0), ("b".into(), 1), ("c".into(), -1)])
            .unwrap()
            .auxiliary(true);
        g.set_differential(0, lie_basis(1)).unwrap();
        let m = truncate_at_zero(&g).unwrap();
        assert_eq!(m.algebra.dim(), 1);
        assert_eq!(m.algebra.name(0), "c");

        let h = FDGLA::new(vec![("x".into(), 0), ("y".into(), -2)]).unwrap();
        let m = truncate_at_zero(&h).unwrap();
        assert_eq!(m.algebra.dim(), 2);
    }
}
