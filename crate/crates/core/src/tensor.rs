//! The tensor DGLA `A ⊗ L` of a free CDGA and a finite-dimensional DGLA.
//!
//! `[b₁⊗w₁, b₂⊗w₂] = (−1)^{|w₁||b₂|} b₁b₂ ⊗ [w₁, w₂]` and
//! `d(b⊗w) = d_A b ⊗ w + (−1)^{|b|} b ⊗ d_L w`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cdga::{Element, FreeCDGA};
use crate::dgla::{LieCochain, LieVec, FDGLA};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("expected an element of degree {expected}, got {found:?}")]
    WrongDegree { expected: i32, found: Option<i32> },
    #[error("adjoint action did not terminate: host is not nilpotent")]
    NotNilpotent,
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
}

/// `Σ aℓ ⊗ ℓ`, keyed by DGLA basis index. Zero coefficients are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<usize, Element>,
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn pure(a: Element, l: usize) -> Self {
        let mut t = TensorElement::zero();
        t.add_term(l, &a);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Element)> {
        self.terms.iter().map(|(&l, a)| (l, a))
    }

    pub fn coefficient(&self, l: usize) -> Element {
        self.terms.get(&l).cloned().unwrap_or_else(Element::zero)
    }

    pub fn add_term(&mut self, l: usize, a: &Element) {
        let e = self.terms.entry(l).or_default();
        *e += a;
        if e.is_zero() {
            self.terms.remove(&l);
        }
    }

    pub fn add_scaled(&mut self, other: &TensorElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (&l, a) in &other.terms {
            self.add_term(l, &a.scale(c));
        }
    }

    pub fn scale(&self, c: &Rational) -> TensorElement {
        let mut out = TensorElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sum(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn difference(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// Applies a linear map on the DGLA factor, given on basis elements.
    pub fn map_lie(&self, f: impl Fn(usize) -> LieVec) -> TensorElement {
        let mut out = TensorElement::zero();
        for (&l, a) in &self.terms {
            for (k, c) in f(l) {
                out.add_term(k, &a.scale(&c));
            }
        }
        out
    }

    /// Applies a map on the CDGA factor coefficient-wise.
    pub fn map_coefficients(&self, f: impl Fn(&Element) -> Element) -> TensorElement {
        let mut out = TensorElement::zero();
        for (&l, a) in &self.terms {
            out.add_term(l, &f(a));
        }
        out
    }

    /// `Σ ⟨aℓ, φ⟩ ⊗ ℓ`-style contraction: `Σ_ℓ φ(ℓ)·aℓ`.
    pub fn contract(&self, f: impl Fn(usize) -> Rational) -> Element {
        let mut out = Element::zero();
        for (&l, a) in &self.terms {
            out.add_scaled(a, &f(l));
        }
        out
    }
}

/// Splits an element into its even- and odd-degree parts.
fn split_parity(a: &FreeCDGA, x: &Element) -> [Element; 2] {
    [
        x.filter(|m| a.monomial_degree(m).is_multiple_of(2)),
        x.filter(|m| a.monomial_degree(m) % 2 == 1),
    ]
}

fn signed(x: &Element, negative: bool) -> Element {
    if negative {
        -x
    } else {
        x.clone()
    }
}

/// The DGLA `A ⊗ L`.
#[derive(Debug, Clone, Copy)]
pub struct TensorDgla<'a> {
    pub cdga: &'a FreeCDGA,
    pub lie: &'a FDGLA,
}

impl<'a> TensorDgla<'a> {
    pub fn new(cdga: &'a FreeCDGA, lie: &'a FDGLA) -> Self {
        TensorDgla { cdga, lie }
    }

    pub fn check(&self, t: &TensorElement) -> Result<(), TensorError> {
        match t.terms.keys().next_back() {
            Some(&l) if l >= self.lie.dim() => Err(TensorError::IndexOutOfRange(l)),
            _ => Ok(()),
        }
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree(&self, t: &TensorElement) -> Option<i32> {
        let mut degree = None;
        for (&l, a) in &t.terms {
            for (m, _) in a.terms() {
                let d = self.cdga.monomial_degree(m) as i32 + self.lie.degree(l);
                match degree {
                    None => degree = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        degree
    }

    pub fn is_homogeneous_of(&self, t: &TensorElement, degree: i32) -> bool {
        t.is_zero() || self.degree(t) == Some(degree)
    }

    /// True when every coefficient lies in `A⁺`.
    pub fn in_positive_part(&self, t: &TensorElement) -> bool {
        t.terms.values().all(|a| a.constant_term().is_zero())
    }

    pub fn bracket(&self, x: &TensorElement, y: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero();
        let y_parts: BTreeMap<usize, [Element; 2]> = y
            .terms
            .iter()
            .map(|(&j, b)| (j, split_parity(self.cdga, b)))
            .collect();
        for (&i, a) in &x.terms {
            let wi_odd = self.lie.degree(i).rem_euclid(2) == 1;
            for (&j, [even, odd]) in &y_parts {
                let Some(v) = self.lie.bracket_basis(i, j) else {
                    continue;
                };
                let b = if wi_odd { even - odd } else { even + odd };
                let p = self.cdga.mul(a, &b);
                if p.is_zero() {
                    continue;
                }
                for (&k, c) in v {
                    out.add_term(k, &p.scale(c));
                }
            }
        }
        out
    }

    pub fn d(&self, t: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for (&l, a) in &t.terms {
            out.add_term(l, &self.cdga.d(a));
            let [even, odd] = split_parity(self.cdga, a);
            let b = &even - &odd;
            for (&k, c) in self.lie.d_basis(l) {
                out.add_term(k, &b.scale(c));
            }
        }
        out
    }

    /// `F(α) = dα + ½[α, α]`, without a degree check.
    pub fn curvature_unchecked(&self, t: &TensorElement) -> TensorElement {
        let mut out = self.d(t);
        out.add_scaled(&self.bracket(t, t), &Rational::new(1.into(), 2.into()));
        out
    }

    pub fn curvature(&self, t: &TensorElement) -> Result<TensorElement, TensorError> {
        self.expect_degree(t, 1)?;
        Ok(self.curvature_unchecked(t))
    }

    pub fn is_mc(&self, t: &TensorElement) -> Result<bool, TensorError> {
        Ok(self.curvature(t)?.is_zero())
    }

    fn expect_degree(&self, t: &TensorElement, expected: i32) -> Result<(), TensorError> {
        if self.is_homogeneous_of(t, expected) {
            Ok(())
        } else {
            Err(TensorError::WrongDegree {
                expected,
                found: self.degree(t),
            })
        }
    }

    /// Bound on the number of nonzero terms of an `ad`-series.
    fn series_bound(&self) -> usize {
        self.lie.dim() + self.cdga.truncation() as usize + 2
    }

    /// `Σ_{i≥0} cᵢ (ad X)ⁱ y` for coefficients given by `coeff(i)`.
    fn ad_series(
        &self,
        x: &TensorElement,
        y: &TensorElement,
        coeff: impl Fn(usize) -> Rational,
    ) -> Result<TensorElement, TensorError> {
        let mut out = TensorElement::zero();
        let mut term = y.clone();
        for i in 0..=self.series_bound() {
            if term.is_zero() {
                return Ok(out);
            }
            out.add_scaled(&term, &coeff(i));
            term = self.bracket(x, &term);
        }
        Err(TensorError::NotNilpotent)
    }

    /// `e^{ad X} y`.
    pub fn exp_ad(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement, TensorError> {
        self.ad_series(x, y, |i| Rational::one() / factorial(i))
    }

    /// `(exp X)·α = α − Σ (ad X)ⁱ/(i+1)! (dX + [α, X])`.
    pub fn gauge_action(
        &self,
        x: &TensorElement,
        alpha: &TensorElement,
    ) -> Result<TensorElement, TensorError> {
        self.expect_degree(x, 0)?;
        self.expect_degree(alpha, 1)?;
        let mut seed = self.d(x);
        seed.add_scaled(&self.bracket(alpha, x), &Rational::one());
        let series = self.ad_series(x, &seed, |i| Rational::one() / factorial(i + 1))?;
        Ok(alpha.difference(&series))
    }

    /// `η(t₁, …, t_k)` for the extension of a cochain to `A ⊗ L`:
    /// `η(a₁⊗l₁, …, a_k⊗l_k) = (−1)^ε a₁⋯a_k η(l₁, …, l_k)` with
    /// `ε = |η|Σ|aᵢ| + Σ_{i>j} |aᵢ|(|lⱼ|+1)`. Only the arity-`k` part of `η`
    /// contributes.
    pub fn evaluate(&self, eta: &LieCochain, args: &[&TensorElement]) -> Element {
        let k = args.len();
        let parts: Vec<BTreeMap<usize, [Element; 2]>> = args
            .iter()
            .map(|t| {
                t.terms
                    .iter()
                    .map(|(&l, a)| (l, split_parity(self.cdga, a)))
                    .collect()
            })
            .collect();
        let mut out = Element::zero();
        for (tuple, value) in eta.values() {
            if tuple.len() != k {
                continue;
            }
            let eta_odd = LieCochain::tuple_degree(self.lie, tuple).rem_euclid(2) == 1;
            let Some(coeffs) = tuple
                .iter()
                .zip(&parts)
                .map(|(l, p)| p.get(l))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let shifted_odd: Vec<bool> = tuple
                .iter()
                .map(|&l| (self.lie.degree(l) + 1).rem_euclid(2) == 1)
                .collect();
            for mask in 0u32..(1 << k) {
                let odd = |i: usize| mask & (1 << i) != 0;
                let mut negative = false;
                for i in 0..k {
                    if !odd(i) {
                        continue;
                    }
                    negative ^= eta_odd;
                    for &s in &shifted_odd[..i] {
                        negative ^= s;
                    }
                }
                let mut prod = Element::scalar(value.clone());
                for (i, c) in coeffs.iter().enumerate() {
                    let part = &c[usize::from(odd(i))];
                    if part.is_zero() {
                        prod = Element::zero();
                        break;
                    }
                    prod = self.cdga.mul(&prod, part);
                }
                out += &signed(&prod, negative);
            }
        }
        out
    }

    /// `γ_μ(η) = Σ_k (1/k!) η_k(μ, …, μ)`.
    pub fn characteristic(&self, eta: &LieCochain, mu: &TensorElement) -> Element {
        let mut out = Element::zero();
        for k in eta.arities() {
            let args = vec![mu; k];
            let v = self.evaluate(&eta.component(k), &args);
            out.add_scaled(&v, &(Rational::one() / factorial(k)));
        }
        out
    }

    pub fn format(&self, t: &TensorElement) -> String {
        if t.is_zero() {
            return "0".into();
        }
        t.terms
            .iter()
            .map(|(&l, a)| format!("({})⊗{}", self.cdga.format(a), self.lie.name(l)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::massey_data;
    use crate::models;

    #[test]
    fn bracket_sign_rule() {
        let a = models::heisenberg(4);
        let d = massey_data(2, &[1, 1]).unwrap();
        let lt = d.total();
        let t = TensorDgla::new(&a, lt);
        let (e1, e2) = (lt.index_of("e1").unwrap(), lt.index_of("e2").unwrap());
        let x = TensorElement::pure(a.gen("a").unwrap(), e1);
        let y = TensorElement::pure(a.gen("b").unwrap(), e2);
        let ab = a.mul(&a.gen("a").unwrap(), &a.gen("b").unwrap());
        assert_eq!(t.bracket(&x, &y), TensorElement::pure(ab, d.center()));
        assert!(t.bracket(&x, &TensorElement::zero()).is_zero());
    }

    #[test]
    fn bracket_sign_with_odd_lie_factor() {
        // |w₁| = −1 and |b₂| = 1 give a minus sign
        let a = models::heisenberg(4);
        let d = massey_data(2, &[2, 1]).unwrap();
        let lt = d.total();
        let t = TensorDgla::new(&a, lt);
        let (e1, e2) = (lt.index_of("e1").unwrap(), lt.index_of("e2").unwrap());
        let x = TensorElement::pure(a.gen("a").unwrap(), e1);
        let y = TensorElement::pure(a.gen("b").unwrap(), e2);
        let ab = a.mul(&a.gen("a").unwrap(), &a.gen("b").unwrap());
        assert_eq!(t.bracket(&x, &y), TensorElement::pure(-&ab, d.center()));
    }

    #[test]
    fn differential_rule() {
        let a = models::heisenberg(4);
        let d = massey_data(2, &[1, 1]).unwrap();
        let t = TensorDgla::new(&a, d.quotient());
        let c = TensorElement::pure(a.gen("c").unwrap(), 0);
        let ab = a.mul(&a.gen("a").unwrap(), &a.gen("b").unwrap());
        assert_eq!(t.d(&c), TensorElement::pure(ab, 0));
        assert!(t.d(&TensorElement::zero()).is_zero());
    }

    #[test]
    fn heisenberg_massey_system_is_mc() {
        let a = models::heisenberg(4);
        let d = massey_data(3, &[1, 1, 1]).unwrap();
        let l = d.quotient();
        let t = TensorDgla::new(&a, l);
        let g = |n: &str| a.gen(n).unwrap();
        let i = |n: &str| l.index_of(n).unwrap();
        let mut alpha = TensorElement::pure(g("a"), i("e1"));
        alpha.add_term(i("e2"), &g("a"));
        alpha.add_term(i("e3"), &g("b"));
        alpha.add_term(i("b2_3"), &-&g("c"));
        assert!(t.is_mc(&alpha).unwrap());
        let ab = a.mul(&g("a"), &g("b"));
        assert!(t.curvature(&TensorElement::pure(ab, i("b1_2"))).is_err());
    }

    #[test]
    fn gauge_on_abelian_is_translation() {
        let a = models::two_sphere(6);
        let l = FDGLA::new(vec![("w".into(), -1), ("v".into(), -3)]).unwrap();
        let t = TensorDgla::new(&a, &l);
        let y3 = a.gen("y").unwrap();
        let u = a.gen("u").unwrap();
        let x = TensorElement::pure(y3.clone(), 1);
        let alpha = TensorElement::pure(u.clone(), 0);
        let moved = t.gauge_action(&x, &alpha).unwrap();
        assert_eq!(moved, alpha.difference(&t.d(&x)));
        assert_eq!(t.gauge_action(&TensorElement::zero(), &alpha).unwrap(), alpha);
        assert_eq!(t.exp_ad(&x, &alpha).unwrap(), alpha);
    }
}
