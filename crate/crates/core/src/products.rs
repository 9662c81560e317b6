//! Defining systems, MC higher products and classical Massey products.

use num_traits::One;
use thiserror::Error;

use crate::cdga::{CdgaError, CohomologyClass, Element, FreeCDGA};
use crate::dgla::{DglaError, LieCochain, MCProductData, MasseyLabels, FDGLA};
use crate::linalg::{self, Rational, SubspaceBasis};
use crate::tensor::{factorial, TensorDgla, TensorElement, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Dgla(#[from] DglaError),
    #[error("not a defining system: {0}")]
    NotDefiningSystem(String),
    #[error("curvature of the lift has components outside A⁺⊗Z")]
    CurvatureEscapesCenter,
    #[error("input {0} of the Massey product is not a cocycle")]
    NotACocycle(usize),
    #[error("cochain is not homogeneous")]
    InhomogeneousCochain,
}

/// A Maurer–Cartan element of `A⁺ ⊗ L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningSystem {
    element: TensorElement,
}

impl DefiningSystem {
    pub fn new(a: &FreeCDGA, l: &FDGLA, element: TensorElement) -> Result<Self, ProductError> {
        let t = TensorDgla::new(a, l);
        t.check(&element)?;
        if !t.is_homogeneous_of(&element, 1) {
            return Err(ProductError::NotDefiningSystem(format!(
                "degree {:?} instead of 1",
                t.degree(&element)
            )));
        }
        if !t.in_positive_part(&element) {
            return Err(ProductError::NotDefiningSystem(
                "coefficients outside A⁺".into(),
            ));
        }
        let f = t.curvature(&element)?;
        if !f.is_zero() {
            return Err(ProductError::NotDefiningSystem(format!(
                "curvature {}",
                t.format(&f)
            )));
        }
        Ok(DefiningSystem { element })
    }

    pub fn element(&self) -> &TensorElement {
        &self.element
    }

    pub fn into_element(self) -> TensorElement {
        self.element
    }
}

/// `m(α)` together with the lift and the central cocycle it came from.
#[derive(Debug, Clone)]
pub struct MCProduct {
    pub class: CohomologyClass,
    pub cocycle: Element,
    pub witness_lift: TensorElement,
}

/// Degree `2 − q` of the products of the given data.
pub fn product_degree(data: &MCProductData) -> u32 {
    (2 - data.q()) as u32
}

/// Applies the section term-wise.
pub fn lift_system(data: &MCProductData, system: &TensorElement) -> TensorElement {
    system.map_lie(|l| data.section_of(l).clone())
}

/// `m(α) = [F(α̃)]` for the lift `α̃` given by the section of the data.
pub fn mc_product(
    a: &FreeCDGA,
    data: &MCProductData,
    system: &DefiningSystem,
) -> Result<MCProduct, ProductError> {
    let lift = lift_system(data, system.element());
    product_of_lift(a, data, lift)
}

/// `[F(α̃)]` for an arbitrary lift.
pub fn product_of_lift(
    a: &FreeCDGA,
    data: &MCProductData,
    lift: TensorElement,
) -> Result<MCProduct, ProductError> {
    let t = TensorDgla::new(a, data.total());
    let f = t.curvature(&lift)?;
    if f.terms().any(|(l, _)| l != data.center()) {
        return Err(ProductError::CurvatureEscapesCenter);
    }
    let cocycle = f.coefficient(data.center());
    if !a.d(&cocycle).is_zero() {
        return Err(CdgaError::NotACocycle.into());
    }
    let class = a.reduce_to_class(&cocycle, product_degree(data))?;
    Ok(MCProduct {
        class,
        cocycle,
        witness_lift: lift,
    })
}

/// Outcome of a Massey product computation.
#[derive(Debug, Clone)]
pub enum MasseyResult {
    Value {
        system: DefiningSystem,
        product: MCProduct,
        /// Span of value differences over the perturbation family, in class coordinates.
        indeterminacy: SubspaceBasis,
    },
    Obstructed {
        window: (usize, usize),
        class: CohomologyClass,
        /// Number of perturbed searches tried before giving up.
        perturbations_tried: usize,
    },
}

#[derive(Debug, Clone)]
pub struct MasseyOutcome {
    pub labels: MasseyLabels,
    pub result: MasseyResult,
}

type Perturbation<'e> = Option<((usize, usize), &'e Element)>;

/// Result of solving the window equations: a defining system, or the first
/// window whose residue is not exact.
enum Search {
    Found(TensorElement),
    Stuck((usize, usize), Element),
}

fn window_degree(labels: &MasseyLabels, (i, j): (usize, usize)) -> i32 {
    let l = labels.data.total();
    1 - l.degree(labels.total_index(i, j))
}

fn solve_windows(
    a: &FreeCDGA,
    labels: &MasseyLabels,
    reps: &[Element],
    perturbation: Perturbation<'_>,
) -> Result<Search, ProductError> {
    let l = labels.data.quotient();
    let t = TensorDgla::new(a, l);
    let n = labels.n;
    let mut alpha = TensorElement::zero();
    for &(i, j) in &labels.windows {
        if (i, j) == (1, n) {
            continue;
        }
        let q = labels.quotient_index(i, j).expect("non-central window");
        let mut value = if i == j {
            reps[i - 1].clone()
        } else {
            let residue = t.curvature_unchecked(&alpha).coefficient(q);
            let degree = window_degree(labels, (i, j)) as u32 + 1;
            match a.primitive(&-&residue, degree)? {
                Some(w) => w,
                None => return Ok(Search::Stuck((i, j), residue)),
            }
        };
        if let Some((w, h)) = perturbation {
            if w == (i, j) {
                value += h;
            }
        }
        alpha.add_term(q, &value);
    }
    Ok(Search::Found(alpha))
}

/// Cohomology representatives used to perturb the window `w`.
fn perturbations_of(
    a: &FreeCDGA,
    labels: &MasseyLabels,
    w: (usize, usize),
) -> Vec<Element> {
    let degree = window_degree(labels, w);
    if degree < 1 {
        return Vec::new();
    }
    a.cohomology(degree as u32)
        .and_then(|h| h.classes(a))
        .map(|cs| cs.into_iter().map(|c| c.representative).collect())
        .unwrap_or_default()
}

/// The Massey product `⟨a₁, …, a_n⟩` of the given classes, computed as the MC
/// higher product of the Massey data.
///
/// Windows are solved in order of increasing length. When a residue is not
/// exact the search retries with each earlier window perturbed by one
/// cohomology representative; only if all of these fail is the obstruction
/// reported.
pub fn massey_product(
    a: &FreeCDGA,
    classes: &[CohomologyClass],
) -> Result<MasseyOutcome, ProductError> {
    for (i, c) in classes.iter().enumerate() {
        if !a.d(&c.representative).is_zero() {
            return Err(ProductError::NotACocycle(i));
        }
    }
    let degrees: Vec<u32> = classes.iter().map(|c| c.degree).collect();
    let labels = MasseyLabels::new(classes.len(), &degrees)?;
    let reps: Vec<Element> = classes.iter().map(|c| c.representative.clone()).collect();
    let n = labels.n;
    let inner: Vec<(usize, usize)> = labels
        .windows
        .iter()
        .copied()
        .filter(|&(i, j)| i != j && (i, j) != (1, n))
        .collect();

    let alpha = match solve_windows(a, &labels, &reps, None)? {
        Search::Found(alpha) => alpha,
        Search::Stuck(window, residue) => {
            let mut tried = 0;
            let mut found = None;
            'search: for &w in inner.iter().filter(|w| w.1 - w.0 < window.1 - window.0) {
                for h in perturbations_of(a, &labels, w) {
                    tried += 1;
                    if let Search::Found(alpha) = solve_windows(a, &labels, &reps, Some((w, &h)))? {
                        found = Some(alpha);
                        break 'search;
                    }
                }
            }
            match found {
                Some(alpha) => alpha,
                None => {
                    let degree = window_degree(&labels, window) as u32 + 1;
                    let class = a.reduce_to_class(&residue, degree)?;
                    return Ok(MasseyOutcome {
                        labels,
                        result: MasseyResult::Obstructed {
                            window,
                            class,
                            perturbations_tried: tried,
                        },
                    });
                }
            }
        }
    };
    let data = &labels.data;
    let system = DefiningSystem::new(a, data.quotient(), alpha)?;
    let product = mc_product(a, data, &system)?;
    let mut differences = Vec::new();
    for &w in &inner {
        for h in perturbations_of(a, &labels, w) {
            let Search::Found(alt) = solve_windows(a, &labels, &reps, Some((w, &h)))? else {
                continue;
            };
            let alt = DefiningSystem::new(a, data.quotient(), alt)?;
            let value = mc_product(a, data, &alt)?;
            differences.push(linalg::add_vectors(
                &value.class.coordinates,
                &linalg::scale_vector(&product.class.coordinates, &-Rational::one()),
            ));
        }
    }
    let indeterminacy = SubspaceBasis::span(product.class.coordinates.len(), differences);
    Ok(MasseyOutcome {
        labels,
        result: MasseyResult::Value {
            system,
            product,
            indeterminacy,
        },
    })
}

/// `γ_μ(η)` as an element of `A`.
pub fn characteristic_element(
    a: &FreeCDGA,
    l: &FDGLA,
    eta: &LieCochain,
    mu: &TensorElement,
) -> Element {
    TensorDgla::new(a, l).characteristic(eta, mu)
}

/// The class of `γ_μ(η)` for a homogeneous cocycle `η` of nonnegative degree.
pub fn characteristic_map(
    a: &FreeCDGA,
    l: &FDGLA,
    eta: &LieCochain,
    mu: &TensorElement,
) -> Result<CohomologyClass, ProductError> {
    let degree = match eta.degree(l) {
        Some(d) if d >= 0 => d as u32,
        None if eta.is_zero() => 0,
        _ => return Err(ProductError::InhomogeneousCochain),
    };
    let value = characteristic_element(a, l, eta, mu);
    Ok(a.reduce_to_class(&value, degree)?)
}

/// `d_A γ_μ(η) = γ_μ((δ_Lie + d_L)η)`.
pub fn chain_map_holds(a: &FreeCDGA, l: &FDGLA, eta: &LieCochain, mu: &TensorElement) -> bool {
    let lhs = a.d(&characteristic_element(a, l, eta, mu));
    let rhs = characteristic_element(a, l, &eta.ce_differential(l), mu);
    lhs == rhs
}

/// Coefficients `μ₀, μ₁, …` of `μ_t = (exp tX)·μ₀ = Σ tᵖ μₚ`.
pub fn gauge_path(
    t: &TensorDgla<'_>,
    x: &TensorElement,
    mu0: &TensorElement,
) -> Result<Vec<TensorElement>, ProductError> {
    // (exp tX)·μ₀ = μ₀ − Σ_{p≥1} tᵖ/p! (ad X)^{p−1}(dX + [μ₀, X])
    let mut seed = t.d(x);
    seed.add_scaled(&t.bracket(mu0, x), &Rational::one());
    let mut out = vec![mu0.clone()];
    let mut term = seed;
    let bound = t.lie.dim() + t.cdga.truncation() as usize + 2;
    for p in 1..=bound + 1 {
        if term.is_zero() {
            return Ok(out);
        }
        out.push(term.scale(&(-Rational::one() / factorial(p))));
        term = t.bracket(x, &term);
    }
    Err(TensorError::NotNilpotent.into())
}

/// `H(η) = Σ_k 1/(k−1)! ∫₀¹ η_k(X, μ_t, …, μ_t) dt`, integrated exactly.
pub fn homotopy_integral(
    t: &TensorDgla<'_>,
    eta: &LieCochain,
    x: &TensorElement,
    path: &[TensorElement],
) -> Element {
    let mut out = Element::zero();
    for k in eta.arities() {
        if k == 0 {
            continue;
        }
        let component = eta.component(k);
        let weight = Rational::one() / factorial(k - 1);
        // all ways of choosing a t-power for each of the k − 1 path slots
        let mut powers = vec![0usize; k - 1];
        'odometer: loop {
            let mut args: Vec<&TensorElement> = vec![x];
            args.extend(powers.iter().map(|&p| &path[p]));
            let total: usize = powers.iter().sum();
            let v = t.evaluate(&component, &args);
            let integral = Rational::one() / Rational::from_integer((total + 1).into());
            out.add_scaled(&v, &(&weight * integral));
            for slot in powers.iter_mut() {
                *slot += 1;
                if *slot < path.len() {
                    continue 'odometer;
                }
                *slot = 0;
            }
            break;
        }
    }
    out
}

/// Both sides of `γ_{μ₁}(η) − γ_{μ₀}(η) = −(−1)^{|η|}(d_A H(η) − H((δ_Lie + d_L)η))`.
///
/// The overall minus sign is forced by the sign rule used to evaluate `η` on
/// `A ⊗ L` together with `(exp X)·α = α − dX − …`: for abelian `L` and a
/// linear `η` of degree `k` one gets `γ_{μ₁}(η) − γ_{μ₀}(η) = −(−1)^k d_A η(X)`
/// while `H(η) = η(X)`.
#[derive(Debug, Clone)]
pub struct HomotopyReport {
    pub lhs: Element,
    pub rhs: Element,
    pub holds: bool,
}

pub fn gauge_homotopy_check(
    a: &FreeCDGA,
    l: &FDGLA,
    eta: &LieCochain,
    x: &TensorElement,
    mu0: &TensorElement,
) -> Result<HomotopyReport, ProductError> {
    let t = TensorDgla::new(a, l);
    let path = gauge_path(&t, x, mu0)?;
    let mut mu1 = TensorElement::zero();
    for p in &path {
        mu1.add_scaled(p, &Rational::one());
    }
    let lhs = &t.characteristic(eta, &mu1) - &t.characteristic(eta, mu0);
    let mut rhs = Element::zero();
    for (degree, component) in eta.homogeneous_components(l) {
        let h = homotopy_integral(&t, &component, x, &path);
        let hd = homotopy_integral(&t, &component.ce_differential(l), x, &path);
        let mut side = a.d(&h);
        side.add_scaled(&hd, &-Rational::one());
        let sign = if degree.rem_euclid(2) == 1 {
            Rational::one()
        } else {
            -Rational::one()
        };
        rhs.add_scaled(&side, &sign);
    }
    let holds = lhs == rhs;
    Ok(HomotopyReport { lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::dgla::massey_data;
    use crate::models;
    use crate::sampling::{random_cochain, random_tensor};

    fn class(a: &FreeCDGA, expr: &[(&str, i64)], degree: u32) -> CohomologyClass {
        let mut z = Element::zero();
        for (name, c) in expr {
            let mut term = Element::one();
            for g in name.split('*') {
                term = a.mul(&term, &a.gen(g).unwrap());
            }
            z.add_scaled(&term, &linalg::int(*c));
        }
        a.reduce_to_class(&z, degree).unwrap()
    }

    fn value(outcome: &MasseyOutcome) -> (&DefiningSystem, &MCProduct, &SubspaceBasis) {
        match &outcome.result {
            MasseyResult::Value {
                system,
                product,
                indeterminacy,
            } => (system, product, indeterminacy),
            MasseyResult::Obstructed { window, .. } => panic!("obstructed at {window:?}"),
        }
    }

    #[test]
    fn cup_product_is_the_binary_massey_product() {
        let a = models::heisenberg(4);
        let x = class(&a, &[("a", 1)], 1);
        assert!(a.reduce_to_class(&a.gen("c").unwrap(), 1).is_err());
        let y = class(&a, &[("b", 1)], 1);
        let out = massey_product(&a, &[x, y]).unwrap();
        let (_, product, ind) = value(&out);
        assert!(product.class.is_zero(), "ab = dc");
        assert!(ind.is_zero());
    }

    #[test]
    fn heisenberg_triple_product() {
        let a = models::heisenberg(4);
        let x = class(&a, &[("a", 1)], 1);
        let y = class(&a, &[("b", 1)], 1);
        let out = massey_product(&a, &[x.clone(), x, y]).unwrap();
        let (_, product, ind) = value(&out);
        let ac = class(&a, &[("a*c", 1)], 2);
        let minus_ac = class(&a, &[("a*c", -1)], 2);
        assert!(product.class == ac || product.class == minus_ac);
        assert!(!product.class.is_zero());
        assert!(ind.is_zero());
    }

    #[test]
    fn obstruction_is_reported() {
        let a = models::zero_differential(&[("a", 1), ("b", 1)], 4);
        let x = class(&a, &[("a", 1)], 1);
        let y = class(&a, &[("b", 1)], 1);
        let out = massey_product(&a, &[x.clone(), y, x]).unwrap();
        match out.result {
            MasseyResult::Obstructed { window, class, .. } => {
                assert_eq!(window, (1, 2));
                assert!(!class.is_zero());
            }
            MasseyResult::Value { .. } => panic!("expected an obstruction"),
        }
    }

    fn triple_211_system() -> (FreeCDGA, MCProductData, TensorElement) {
        let a = models::triple_211(6);
        let u = class(&a, &[("u", 1)], 2);
        let x = class(&a, &[("a", 1)], 1);
        let y = class(&a, &[("b", 1)], 1);
        let out = massey_product(&a, &[u, x, y]).unwrap();
        let (system, _, _) = value(&out);
        let mu = system.element().clone();
        (a, out.labels.data.clone(), mu)
    }

    #[test]
    fn extension_class_gives_the_product() {
        let a = models::heisenberg(4);
        let x = class(&a, &[("a", 1)], 1);
        let y = class(&a, &[("b", 1)], 1);
        let out = massey_product(&a, &[x.clone(), x, y]).unwrap();
        let (system, product, _) = value(&out);
        let data = &out.labels.data;
        let omega = LieCochain::extension_cocycle(data);
        let gamma = characteristic_map(&a, data.quotient(), &omega, system.element()).unwrap();
        assert_eq!(gamma, product.class);

        let (a, data, mu) = triple_211_system();
        let system = DefiningSystem::new(&a, data.quotient(), mu.clone()).unwrap();
        let product = mc_product(&a, &data, &system).unwrap();
        assert!(!product.class.is_zero());
        let omega = LieCochain::extension_cocycle(&data);
        let gamma = characteristic_map(&a, data.quotient(), &omega, &mu).unwrap();
        assert_eq!(gamma, product.class);
    }

    #[test]
    fn characteristic_map_is_a_chain_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (a, data, mu) = triple_211_system();
        let l = data.quotient();
        for degree in 0..=3 {
            for _ in 0..4 {
                let eta = random_cochain(l, degree, 3, &mut rng);
                assert!(chain_map_holds(&a, l, &eta, &mu), "degree {degree}");
            }
        }
    }

    #[test]
    fn gauge_homotopy_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (a, data, mu) = triple_211_system();
        let l = data.quotient();
        for degree in 0..=3 {
            for _ in 0..3 {
                let eta = random_cochain(l, degree, 3, &mut rng);
                let x = random_tensor(&a, l, 0, 2, &mut rng);
                let r = gauge_homotopy_check(&a, l, &eta, &x, &mu).unwrap();
                assert!(r.holds, "degree {degree}: {:?} vs {:?}", r.lhs, r.rhs);
            }
        }
    }

    #[test]
    fn lift_projects_back() {
        let d = massey_data(2, &[1, 1]).unwrap();
        let a = models::heisenberg(4);
        let mu = TensorElement::pure(a.gen("a").unwrap(), 0);
        let lift = lift_system(&d, &mu);
        assert_eq!(lift.map_lie(|l| d.project(&crate::dgla::lie_basis(l))), mu);
    }

    #[test]
    fn gauge_homotopy_on_abelian_algebra() {
        let a = models::two_sphere(8);
        let l = FDGLA::new(vec![("w".into(), -1), ("v".into(), -3)]).unwrap();
        let mu0 = TensorElement::pure(a.gen("u").unwrap(), 0);
        let x = TensorElement::pure(a.gen("y").unwrap(), 1);
        let t = TensorDgla::new(&a, &l);
        let path = gauge_path(&t, &x, &mu0).unwrap();
        assert_eq!(path.len(), 2);
        assert_eq!(path[1], t.d(&x).scale(&-Rational::one()));
        let eta = LieCochain::dual_basis(1);
        let r = gauge_homotopy_check(&a, &l, &eta, &x, &mu0).unwrap();
        assert!(!r.lhs.is_zero());
        assert!(r.holds);
        let r = gauge_homotopy_check(&a, &l, &eta, &TensorElement::zero(), &mu0).unwrap();
        assert!(r.lhs.is_zero() && r.rhs.is_zero());
    }
}
