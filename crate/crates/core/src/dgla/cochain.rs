//! Chevalley–Eilenberg cochains of a DGLA.
//!
//! A cochain is stored as a multilinear form on ordered tuples of basis
//! elements, graded-symmetric for the shifted parities `|l| + 1` (the form
//! lives on the suspension `L[1]`, where the bracket becomes the symmetric
//! operation `b(sx, sy) = (−1)^{|x|} s[x, y]` and the differential becomes
//! `−s d`). The degree of a cochain supported on `(l₁, …, l_k)` is
//! `Σ (1 − |lᵢ|)`, which is the degree of its image under a characteristic
//! map.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{lie_basis, MCProductData, FDGLA};
use crate::linalg::Rational;

/// Sign of the CE differential relative to `η ∘ Q`. Fixed so that the
/// characteristic map `γ_μ` is a chain map.
const CE_SIGN_NEGATIVE: bool = false;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LieCochain {
    values: BTreeMap<Vec<usize>, Rational>,
}

fn parity(g: &FDGLA, i: usize) -> bool {
    // shifted parity |l| + 1
    (g.degree(i) + 1).rem_euclid(2) == 1
}

fn neg_if(c: Rational, negative: bool) -> Rational {
    if negative {
        -c
    } else {
        c
    }
}

/// All permutations of `0..k` together with the Koszul sign of permuting
/// elements with the given parities into that order.
fn signed_permutations(parities: &[bool]) -> Vec<(Vec<usize>, bool)> {
    fn rec(
        remaining: &mut Vec<usize>,
        current: &mut Vec<usize>,
        parities: &[bool],
        out: &mut Vec<(Vec<usize>, bool)>,
    ) {
        if remaining.is_empty() {
            let mut negative = false;
            for a in 0..current.len() {
                for b in a + 1..current.len() {
                    if current[a] > current[b] && parities[current[a]] && parities[current[b]] {
                        negative = !negative;
                    }
                }
            }
            out.push((current.clone(), negative));
            return;
        }
        for pos in 0..remaining.len() {
            let x = remaining.remove(pos);
            current.push(x);
            rec(remaining, current, parities, out);
            current.pop();
            remaining.insert(pos, x);
        }
    }
    let mut out = Vec::new();
    rec(
        &mut (0..parities.len()).collect(),
        &mut Vec::new(),
        parities,
        &mut out,
    );
    out
}

impl LieCochain {
    pub fn zero() -> Self {
        LieCochain::default()
    }

    /// The constant 0-cochain.
    pub fn constant(c: Rational) -> Self {
        let mut out = LieCochain::zero();
        out.set_raw(Vec::new(), c);
        out
    }

    /// The 1-cochain dual to basis element `i`.
    pub fn dual_basis(i: usize) -> Self {
        let mut out = LieCochain::zero();
        out.set_raw(vec![i], Rational::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, tuple: &[usize]) -> Rational {
        self.values.get(tuple).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.values.iter()
    }

    /// Sets one ordered value without symmetrizing.
    pub fn set_raw(&mut self, tuple: Vec<usize>, value: Rational) {
        if value.is_zero() {
            self.values.remove(&tuple);
        } else {
            self.values.insert(tuple, value);
        }
    }

    /// Sets the value on `tuple` and on every permutation of it, with the
    /// Koszul signs of the shifted parities.
    pub fn set_symmetric(&mut self, g: &FDGLA, tuple: &[usize], value: Rational) {
        let parities: Vec<bool> = tuple.iter().map(|&i| parity(g, i)).collect();
        let mut images: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
        let mut vanishes = false;
        for (perm, negative) in signed_permutations(&parities) {
            let t: Vec<usize> = perm.iter().map(|&p| tuple[p]).collect();
            if let Some(&previous) = images.get(&t) {
                // a repeated odd argument forces the value to vanish
                vanishes |= previous != negative;
            }
            images.insert(t, negative);
        }
        for (t, negative) in images {
            let v = if vanishes { Rational::zero() } else { neg_if(value.clone(), negative) };
            self.set_raw(t, v);
        }
    }

    pub fn add_scaled(&mut self, other: &LieCochain, c: &Rational) {
        for (t, v) in &other.values {
            let new = self.value(t) + v * c;
            self.set_raw(t.clone(), new);
        }
    }

    pub fn scale(&self, c: &Rational) -> LieCochain {
        let mut out = LieCochain::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn arities(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.values.keys().map(Vec::len).collect();
        a.dedup();
        a.sort_unstable();
        a.dedup();
        a
    }

    /// Component of the given arity.
    pub fn component(&self, arity: usize) -> LieCochain {
        LieCochain {
            values: self
                .values
                .iter()
                .filter(|(t, _)| t.len() == arity)
                .map(|(t, v)| (t.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn tuple_degree(g: &FDGLA, tuple: &[usize]) -> i32 {
        tuple.iter().map(|&i| 1 - g.degree(i)).sum()
    }

    /// Degree of a nonzero homogeneous cochain.
    pub fn degree(&self, g: &FDGLA) -> Option<i32> {
        let mut it = self.values.keys().map(|t| Self::tuple_degree(g, t));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_components(&self, g: &FDGLA) -> BTreeMap<i32, LieCochain> {
        let mut out: BTreeMap<i32, LieCochain> = BTreeMap::new();
        for (t, v) in &self.values {
            out.entry(Self::tuple_degree(g, t))
                .or_default()
                .set_raw(t.clone(), v.clone());
        }
        out
    }

    /// Graded symmetry in the shifted parities.
    pub fn is_symmetric(&self, g: &FDGLA) -> bool {
        self.values.iter().all(|(t, v)| {
            let parities: Vec<bool> = t.iter().map(|&i| parity(g, i)).collect();
            signed_permutations(&parities).into_iter().all(|(perm, negative)| {
                let p: Vec<usize> = perm.iter().map(|&k| t[k]).collect();
                self.value(&p) == neg_if(v.clone(), negative)
            })
        })
    }

    /// `(δ_Lie + d_L)η`, computed as `(−1)^{|η|} η∘Q` where `Q` is the
    /// codifferential on the symmetric coalgebra of `L[1]`. Applied to each
    /// homogeneous component separately.
    pub fn ce_differential(&self, g: &FDGLA) -> LieCochain {
        let mut out = LieCochain::zero();
        for (degree, component) in self.homogeneous_components(g) {
            let sign = neg_if(
                Rational::one(),
                (degree.rem_euclid(2) == 1) ^ CE_SIGN_NEGATIVE,
            );
            for arity in component.arities() {
                for target_arity in [arity, arity + 1] {
                    for tuple in tuples(g.dim(), target_arity) {
                        if Self::tuple_degree(g, &tuple) != degree + 1 {
                            continue;
                        }
                        let mut acc = Rational::zero();
                        for (c, word) in apply_codifferential(g, &tuple) {
                            if word.len() == arity {
                                let v = component.value(&word);
                                if !v.is_zero() {
                                    acc += c * v;
                                }
                            }
                        }
                        if !acc.is_zero() {
                            let new = out.value(&tuple) + &sign * acc;
                            out.set_raw(tuple, new);
                        }
                    }
                }
            }
        }
        out
    }

    /// Class of the central extension: `ω₂` measures the failure of the
    /// section to preserve brackets and `ω₁` its failure to commute with the
    /// differentials, both read off on the center. The total degree is `2 − q`.
    pub fn extension_cocycle(data: &MCProductData) -> LieCochain {
        let l = data.quotient();
        let t = data.total();
        let n = l.dim();
        let mut out = LieCochain::zero();
        for x in 0..n {
            let mut defect = t.d(data.section_of(x));
            let sdx = data.lift(&l.d(&lie_basis(x)));
            super::lie_add_scaled(&mut defect, &sdx, &-Rational::one());
            out.set_raw(vec![x], data.z_component(&defect));
            for y in 0..n {
                let mut defect = t.bracket(data.section_of(x), data.section_of(y));
                let sxy = data.lift(&l.bracket(&lie_basis(x), &lie_basis(y)));
                super::lie_add_scaled(&mut defect, &sxy, &-Rational::one());
                let z = data.z_component(&defect);
                // décalage sign (−1)^{|x|}, and the overall sign matching m(μ)
                let negative = l.degree(x).rem_euclid(2) == 0;
                out.set_raw(vec![x, y], neg_if(z, negative));
            }
        }
        out
    }
}

/// All ordered tuples of the given arity over `0..dim`.
fn tuples(dim: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// `Q(sl₁ ⋯ sl_m)` as a list of signed words: the linear part applies
/// `−s d` in each slot, the quadratic part replaces a pair by
/// `b(slᵢ, slⱼ)` moved to the front.
fn apply_codifferential(g: &FDGLA, tuple: &[usize]) -> Vec<(Rational, Vec<usize>)> {
    let shifted = |i: usize| g.degree(i) as i64 - 1;
    let mut out = Vec::new();
    let mut prefix = 0i64;
    for (pos, &l) in tuple.iter().enumerate() {
        let s = neg_if(-Rational::one(), prefix.rem_euclid(2) == 1);
        for (&k, c) in g.d_basis(l) {
            let mut w = tuple.to_vec();
            w[pos] = k;
            out.push((&s * c, w));
        }
        prefix += shifted(l);
    }
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            let before_i: i64 = tuple[..i].iter().map(|&k| shifted(k)).sum();
            let before_j: i64 = tuple[..j]
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != i)
                .map(|(_, &k)| shifted(k))
                .sum();
            let kappa = (shifted(tuple[i]) * before_i + shifted(tuple[j]) * before_j).rem_euclid(2);
            let negative = (kappa == 1) ^ (g.degree(tuple[i]).rem_euclid(2) == 1);
            let rest: Vec<usize> = tuple
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != i && p != j)
                .map(|(_, &k)| k)
                .collect();
            if let Some(br) = g.bracket_basis(tuple[i], tuple[j]) {
                for (&k, c) in br {
                    let mut w = vec![k];
                    w.extend(&rest);
                    out.push((neg_if(c.clone(), negative), w));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::{massey_data, LieVec};
    use crate::linalg::int;

    #[test]
    fn constant_cochain_is_closed() {
        let d = massey_data(3, &[1, 1, 1]).unwrap();
        assert!(LieCochain::constant(int(5))
            .ce_differential(d.quotient())
            .is_zero());
    }

    #[test]
    fn dual_basis_on_abelian_is_closed() {
        let g = FDGLA::new(vec![("x".into(), 0), ("y".into(), -1)]).unwrap();
        for i in 0..2 {
            assert!(LieCochain::dual_basis(i).ce_differential(&g).is_zero());
        }
    }

    /// Heisenberg Lie algebra tensored with `Λ(t)`, `|t| = −1`, `d = d/dt`.
    fn heisenberg_cone() -> FDGLA {
        let mut g = FDGLA::new(vec![
            ("x1".into(), 0),
            ("x2".into(), 0),
            ("x3".into(), 0),
            ("y1".into(), -1),
            ("y2".into(), -1),
            ("y3".into(), -1),
        ])
        .unwrap();
        g.set_bracket(0, 1, LieVec::from([(2, int(1))])).unwrap();
        g.set_bracket(0, 4, LieVec::from([(5, int(1))])).unwrap();
        g.set_bracket(3, 1, LieVec::from([(5, int(1))])).unwrap();
        for i in 0..3 {
            g.set_differential(i + 3, LieVec::from([(i, int(1))])).unwrap();
        }
        g
    }

    #[test]
    fn differential_squares_to_zero() {
        let g = heisenberg_cone();
        assert!(g.validate().is_valid(), "{}", g.validate());
        let mut eta = LieCochain::zero();
        eta.set_symmetric(&g, &[3, 4], int(2));
        eta.set_symmetric(&g, &[0, 4], int(-3));
        eta.set_symmetric(&g, &[0, 1, 5], int(5));
        eta.set_raw(vec![2], int(1));
        eta.set_raw(vec![4], int(7));
        let d1 = eta.ce_differential(&g);
        assert!(!d1.is_zero());
        assert!(d1.is_symmetric(&g));
        assert!(d1.ce_differential(&g).is_zero());
    }

    #[test]
    fn extension_cocycle_of_massey_two() {
        let d = massey_data(2, &[1, 1]).unwrap();
        let l = d.quotient();
        let w = LieCochain::extension_cocycle(&d);
        let (e1, e2) = (l.index_of("e1").unwrap(), l.index_of("e2").unwrap());
        use num_traits::Signed;
        assert_eq!(w.value(&[e1, e2]).abs(), int(1));
        assert!(w.component(1).is_zero());
        assert_eq!(w.degree(l), Some(2));
        assert!(w.is_symmetric(l));
        assert!(w.ce_differential(l).is_zero());
    }

    #[test]
    fn extension_cocycles_are_closed() {
        for (n, degs) in [(3, vec![1, 1, 1]), (3, vec![2, 1, 1]), (4, vec![1, 1, 1, 1]), (2, vec![2, 1])] {
            let d = massey_data(n, &degs).unwrap();
            let w = LieCochain::extension_cocycle(&d);
            assert!(w.is_symmetric(d.quotient()));
            assert!(w.ce_differential(d.quotient()).is_zero(), "n={n} {degs:?}");
        }
    }
}
