//! Seeded random elements for property checks.

use rand::Rng;

use crate::cdga::{Element, FreeCDGA};
use crate::dgla::{LieCochain, FDGLA};
use crate::linalg::{int, Rational};
use crate::tensor::TensorElement;

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let n: i64 = rng.gen_range(-3..=3);
    if rng.gen_bool(0.2) {
        Rational::new(n.into(), 2.into())
    } else {
        int(n)
    }
}

/// Random homogeneous element of degree `degree` with at most `max_terms` terms.
pub fn random_element<R: Rng>(a: &FreeCDGA, degree: u32, max_terms: usize, rng: &mut R) -> Element {
    let mut out = Element::zero();
    let Ok(basis) = a.monomial_basis(degree) else {
        return out;
    };
    if basis.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(0..=max_terms) {
        let m = basis[rng.gen_range(0..basis.len())].clone();
        out.add_term(m, small_rational(rng));
    }
    out
}

/// Random element of `(A⁺ ⊗ L)^degree`.
pub fn random_tensor<R: Rng>(
    a: &FreeCDGA,
    l: &FDGLA,
    degree: i32,
    max_terms: usize,
    rng: &mut R,
) -> TensorElement {
    let mut out = TensorElement::zero();
    for i in 0..l.dim() {
        let d = degree - l.degree(i);
        if d >= 1 && d as u32 <= a.truncation() {
            out.add_term(i, &random_element(a, d as u32, max_terms, rng));
        }
    }
    out
}

/// Random graded-symmetric cochain of the given degree and arities `1..=max_arity`.
pub fn random_cochain<R: Rng>(g: &FDGLA, degree: i32, max_arity: usize, rng: &mut R) -> LieCochain {
    let mut out = LieCochain::zero();
    let n = g.dim();
    for arity in 1..=max_arity {
        // non-decreasing tuples
        let mut tuple = vec![0usize; arity];
        loop {
            if LieCochain::tuple_degree(g, &tuple) == degree && rng.gen_bool(0.5) {
                let v = small_rational(rng);
                out.set_symmetric(g, &tuple, v);
            }
            let mut pos = arity;
            while pos > 0 && tuple[pos - 1] == n - 1 {
                pos -= 1;
            }
            if pos == 0 || n == 0 {
                break;
            }
            tuple[pos - 1] += 1;
            let v = tuple[pos - 1];
            for t in &mut tuple[pos..] {
                *t = v;
            }
        }
    }
    out
}
