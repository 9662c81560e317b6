//! Algebraic fibrations `B ↪ B ⊗ ΛV`, odd spherical steps, the truncated
//! `TA`, annihilation tests and the descent of MC products along `A ↪ A[x]`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cdga::{CdgaError, CohomologyClass, Element, FreeCDGA, Generator, Monomial, ValidationReport};
use crate::dgla::{
    build_n_tilde, lie_add_scaled, perturb_differential, truncate_at_zero, DglaError, LieVec,
    MCProductData,
};
use crate::linalg::{self, Rational, SparseMatrix, SubspaceBasis};
use crate::products::{lift_system, mc_product, product_degree, DefiningSystem, MCProduct, ProductError};
use crate::tensor::{TensorDgla, TensorElement, TensorError};

/// Default bound on the number of generators adjoined by [`build_truncated_ta`].
pub const DEFAULT_MAX_ADJUNCTIONS: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Dgla(#[from] DglaError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error("Euler class is not closed")]
    EulerNotClosed,
    #[error("Euler class has degree {found}, expected {expected}")]
    EulerDegree { expected: u32, found: u32 },
    #[error("fiber generator degree {0} is not odd")]
    EvenFiberDegree(u32),
    #[error("adjunction cap of {0} generators exceeded")]
    CapExceeded(usize),
    #[error("degree {degree} exceeds the computable range (top degree {top})")]
    OutOfRange { degree: u32, top: u32 },
    #[error("class of degree {0} must have odd degree")]
    EvenClass(u32),
    #[error("normalization unsolvable: the system does not produce the pushforward of c")]
    NormalizationUnsolvable,
    #[error("{lemma} fails: {detail}")]
    LemmaFailed { lemma: &'static str, detail: String },
}

/// A new generator of a fibration together with its stage `V(stage)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberGenerator {
    pub generator: Generator,
    pub stage: usize,
}

/// `ι: B ↪ B ⊗ ΛV`. Elements of `B` are carried into the total algebra by
/// generator name.
#[derive(Debug, Clone)]
pub struct AlgebraicFibration {
    base: FreeCDGA,
    total: FreeCDGA,
    fiber: Vec<FiberGenerator>,
}

/// `A ↪ A[x]` with `dx = e`.
#[derive(Debug, Clone)]
pub struct OddSphericalStep {
    pub x: String,
    pub x_degree: u32,
    pub euler: Element,
}

impl AlgebraicFibration {
    /// The identity fibration `B ↪ B`.
    pub fn trivial(base: &FreeCDGA) -> Self {
        AlgebraicFibration {
            base: base.clone(),
            total: base.clone(),
            fiber: Vec::new(),
        }
    }

    pub fn base(&self) -> &FreeCDGA {
        &self.base
    }

    pub fn total(&self) -> &FreeCDGA {
        &self.total
    }

    pub fn fiber(&self) -> &[FiberGenerator] {
        &self.fiber
    }

    pub fn is_odd(&self) -> bool {
        self.fiber.iter().all(|g| g.generator.is_odd())
    }

    fn next_stage(&self) -> usize {
        self.fiber.iter().map(|g| g.stage + 1).max().unwrap_or(0)
    }

    /// `ι` on elements.
    pub fn include(&self, x: &Element) -> Result<Element, CdgaError> {
        self.total.transport(x, &self.base)
    }

    /// Adjoins a new stage of generators, with differentials given in the
    /// current total algebra.
    pub fn adjoin(&self, generators: &[(Generator, Element)]) -> Result<Self, FibrationError> {
        let stage = self.next_stage();
        let mut gens: Vec<Generator> = self.total.generators().to_vec();
        gens.extend(generators.iter().map(|(g, _)| g.clone()));
        let mut total = FreeCDGA::new(gens, self.total.truncation())?;
        for (i, g) in self.total.generators().iter().enumerate() {
            let image = total.transport(self.total.d_image(i), &self.total)?;
            total = total.with_differential(&g.name, image)?;
        }
        for (g, d) in generators {
            let image = total.transport(d, &self.total)?;
            total = total.with_differential(&g.name, image)?;
        }
        let mut fiber = self.fiber.clone();
        fiber.extend(generators.iter().map(|(g, _)| FiberGenerator {
            generator: g.clone(),
            stage,
        }));
        Ok(AlgebraicFibration {
            base: self.base.clone(),
            total,
            fiber,
        })
    }

    /// Class of `ι(representative)` in the total algebra.
    pub fn pushforward(&self, cls: &CohomologyClass) -> Result<CohomologyClass, FibrationError> {
        let top = self.total.trustworthy_degree();
        if cls.degree > top {
            return Err(FibrationError::OutOfRange {
                degree: cls.degree,
                top,
            });
        }
        let z = self.include(&cls.representative)?;
        Ok(self.total.reduce_to_class(&z, cls.degree)?)
    }

    /// Sub-fibration on the given fiber generators (which must be closed
    /// under differential dependency).
    pub fn restrict_to(&self, keep: &BTreeSet<String>) -> Result<Self, FibrationError> {
        let mut out = AlgebraicFibration::trivial(&self.base);
        let stages: BTreeSet<usize> = self.fiber.iter().map(|g| g.stage).collect();
        for stage in stages {
            let gens: Vec<(Generator, Element)> = self
                .fiber
                .iter()
                .filter(|g| g.stage == stage && keep.contains(&g.generator.name))
                .map(|g| {
                    let i = self.total.generator_index(&g.generator.name).expect("fiber generator");
                    (g.generator.clone(), self.total.d_image(i).clone())
                })
                .collect();
            if gens.is_empty() {
                continue;
            }
            let carried: Vec<(Generator, Element)> = gens
                .into_iter()
                .map(|(g, d)| Ok((g, out.total.transport(&d, &self.total)?)))
                .collect::<Result<_, CdgaError>>()?;
            out = out.adjoin(&carried)?;
        }
        Ok(out)
    }
}

/// Checks the total algebra, that base differentials are unchanged, and the
/// staging `d(V(s)) ⊆ B ⊗ ΛV(<s)`. With `spherical`, also that every fiber
/// generator is odd.
pub fn validate_fibration(f: &AlgebraicFibration, spherical: bool) -> ValidationReport {
    let mut report = f.total.validate();
    for (i, g) in f.base.generators().iter().enumerate() {
        match f.total.generator_index(&g.name) {
            Ok(j) => {
                let carried = f.include(f.base.d_image(i));
                if f.total.generators()[j].degree != g.degree
                    || carried.as_ref() != Ok(f.total.d_image(j))
                {
                    report.push(format!("base generator {} changed", g.name));
                }
            }
            Err(_) => report.push(format!("base generator {} missing", g.name)),
        }
    }
    for fg in &f.fiber {
        let Ok(i) = f.total.generator_index(&fg.generator.name) else {
            report.push(format!("fiber generator {} missing", fg.generator.name));
            continue;
        };
        let allowed = |j: usize| {
            let name = &f.total.generators()[j].name;
            f.base.has_generator(name)
                || f.fiber
                    .iter()
                    .any(|h| &h.generator.name == name && h.stage < fg.stage)
        };
        let uses_later = f
            .total
            .d_image(i)
            .terms()
            .any(|(m, _)| m.factors().any(|j| !allowed(j)));
        if uses_later {
            report.push(format!(
                "d({}) leaves B ⊗ ΛV(<{})",
                fg.generator.name, fg.stage
            ));
        }
        if spherical && !fg.generator.is_odd() {
            report.push(format!("fiber generator {} has even degree", fg.generator.name));
        }
    }
    report
}

/// `A ↪ A[x]`, `dx = e`, `|x| = x_degree` odd. `e = 0` is allowed.
pub fn adjoin_odd(
    a: &FreeCDGA,
    euler: &Element,
    x_degree: u32,
    name: &str,
) -> Result<(AlgebraicFibration, OddSphericalStep), FibrationError> {
    if x_degree.is_multiple_of(2) {
        return Err(FibrationError::EvenFiberDegree(x_degree));
    }
    a.check_element(euler)?;
    if !euler.is_zero() {
        match a.degree(euler) {
            Some(d) if d == x_degree + 1 => {}
            Some(d) => {
                return Err(FibrationError::EulerDegree {
                    expected: x_degree + 1,
                    found: d,
                })
            }
            None => return Err(CdgaError::NotHomogeneous.into()),
        }
        if !a.d(euler).is_zero() {
            return Err(FibrationError::EulerNotClosed);
        }
    }
    let fib = AlgebraicFibration::trivial(a).adjoin(&[(Generator::new(name, x_degree), euler.clone())])?;
    Ok((
        fib,
        OddSphericalStep {
            x: name.to_string(),
            x_degree,
            euler: euler.clone(),
        },
    ))
}

/// `ker(ι_*: H^k(A) → H^k(A[x]))` computed directly, next to `e·H^{k−|e|}(A)`.
#[derive(Debug, Clone)]
pub struct GysinKernel {
    pub degree: u32,
    pub kernel: SubspaceBasis,
    pub euler_image: SubspaceBasis,
}

impl GysinKernel {
    pub fn agrees(&self) -> bool {
        self.kernel.same_subspace(&self.euler_image)
    }
}

pub fn gysin_kernel(
    a: &FreeCDGA,
    step: &OddSphericalStep,
    k: u32,
) -> Result<GysinKernel, FibrationError> {
    let top = a.trustworthy_degree();
    if k > top {
        return Err(FibrationError::OutOfRange { degree: k, top });
    }
    let (fib, _) = adjoin_odd(a, &step.euler, step.x_degree, &step.x)?;
    let h = a.cohomology(k)?;
    let classes = h.classes(a)?;
    let images: Vec<Vec<Rational>> = classes
        .iter()
        .map(|c| fib.pushforward(c).map(|p| p.coordinates))
        .collect::<Result<_, _>>()?;
    let target_dim = fib.total().cohomology(k)?.dim();
    let matrix = SparseMatrix::from_columns(target_dim, &images);
    let kernel = linalg::kernel_basis(&matrix);
    let e_degree = step.x_degree + 1;
    let mut products = Vec::new();
    if !step.euler.is_zero() && k >= e_degree {
        for c in a.cohomology(k - e_degree)?.classes(a)? {
            let p = a.mul(&step.euler, &c.representative);
            products.push(h.class_of(a, &p)?.coordinates);
        }
    }
    Ok(GysinKernel {
        degree: k,
        kernel,
        euler_image: SubspaceBasis::span(h.dim(), products),
    })
}

fn fresh_name(a: &FreeCDGA, counter: &mut usize) -> String {
    loop {
        let name = format!("t{counter}");
        *counter += 1;
        if !a.has_generator(&name) {
            return name;
        }
    }
}

/// Degree-truncated `TA`: for `k = 2, 4, …, top`, adjoins one generator of
/// degree `k − 1` per basis class of `H^k` and repeats until `H^k = 0`.
pub fn build_truncated_ta(
    a: &FreeCDGA,
    top: u32,
    max_adjunctions: usize,
) -> Result<AlgebraicFibration, FibrationError> {
    grow_ta(a, top, max_adjunctions, |_| Ok(false))
}

/// The `TA` loop, stopping early once `done` holds after a round.
fn grow_ta(
    a: &FreeCDGA,
    top: u32,
    max_adjunctions: usize,
    mut done: impl FnMut(&AlgebraicFibration) -> Result<bool, FibrationError>,
) -> Result<AlgebraicFibration, FibrationError> {
    let limit = a.trustworthy_degree();
    if top > limit {
        return Err(FibrationError::OutOfRange { degree: top, top: limit });
    }
    let mut fib = AlgebraicFibration::trivial(a);
    if done(&fib)? {
        return Ok(fib);
    }
    let mut counter = 1;
    for k in (2..=top).step_by(2) {
        loop {
            let classes = fib.total().cohomology(k)?.classes(fib.total())?;
            if classes.is_empty() {
                break;
            }
            if fib.fiber().len() + classes.len() > max_adjunctions {
                return Err(FibrationError::CapExceeded(max_adjunctions));
            }
            let new: Vec<(Generator, Element)> = classes
                .into_iter()
                .map(|c| {
                    let name = fresh_name(fib.total(), &mut counter);
                    (Generator::new(name, k - 1), c.representative)
                })
                .collect();
            fib = fib.adjoin(&new)?;
            if done(&fib)? {
                return Ok(fib);
            }
        }
    }
    Ok(fib)
}

/// Outcome of [`annihilates`].
#[derive(Debug, Clone)]
pub struct Annihilation {
    pub annihilated: bool,
    /// Finite odd fibration killing the class, when one exists.
    pub witness: Option<AlgebraicFibration>,
    /// Primitive of the class in the witness total algebra.
    pub primitive: Option<Element>,
}

/// Fiber generators occurring in `w`, closed under "occurs in the differential of".
fn dependency_closure(f: &AlgebraicFibration, w: &Element) -> BTreeSet<String> {
    let total = f.total();
    let is_fiber = |j: usize| f.fiber.iter().any(|g| g.generator.name == total.generators()[j].name);
    let mut todo: Vec<usize> = Vec::new();
    for (m, _) in w.terms() {
        todo.extend(m.factors().filter(|&j| is_fiber(j)));
    }
    let mut seen = BTreeSet::new();
    while let Some(j) = todo.pop() {
        if !seen.insert(j) {
            continue;
        }
        for (m, _) in total.d_image(j).terms() {
            todo.extend(m.factors().filter(|&k| is_fiber(k)));
        }
    }
    seen.into_iter()
        .map(|j| total.generators()[j].name.clone())
        .collect()
}

/// Decides `cls ∈ ann(A)` through the kernel of `τ_*: H(A) → H(TA)`.
///
/// Even positive classes die in the single step `dx = representative`. For
/// odd classes `TA` is grown up to the largest even degree below `|cls|`
/// (generators of higher degree cannot occur in a primitive), stopping as
/// soon as the class dies; a witness is cut out of the partial `TA` from the
/// generators used by the primitive. A negative answer needs the full
/// truncated `TA`, so hitting the cap is an error rather than `false`.
pub fn annihilates(
    a: &FreeCDGA,
    cls: &CohomologyClass,
    top: u32,
    max_adjunctions: usize,
) -> Result<Annihilation, FibrationError> {
    let limit = a.trustworthy_degree().min(top.saturating_sub(1));
    if cls.degree > limit {
        return Err(FibrationError::OutOfRange {
            degree: cls.degree,
            top: limit,
        });
    }
    let k = cls.degree;
    if cls.is_zero() {
        let w = a.primitive(&cls.representative, k)?.unwrap_or_default();
        return Ok(Annihilation {
            annihilated: true,
            witness: Some(AlgebraicFibration::trivial(a)),
            primitive: Some(w),
        });
    }
    if k == 0 {
        return Ok(Annihilation {
            annihilated: false,
            witness: None,
            primitive: None,
        });
    }
    let (fib, w) = if k.is_multiple_of(2) {
        let mut counter = 1;
        let name = fresh_name(a, &mut counter);
        let (fib, _) = adjoin_odd(a, &cls.representative, k - 1, &name)?;
        let z = fib.include(&cls.representative)?;
        let w = fib.total().primitive(&z, k)?;
        (fib, w)
    } else {
        let killed = |f: &AlgebraicFibration| -> Result<bool, FibrationError> {
            let z = f.include(&cls.representative)?;
            Ok(f.total().primitive(&z, k)?.is_some())
        };
        let ta = grow_ta(a, k - 1, max_adjunctions, killed)?;
        let z = ta.include(&cls.representative)?;
        match ta.total().primitive(&z, k)? {
            Some(w) => {
                let keep = dependency_closure(&ta, &w);
                let witness = ta.restrict_to(&keep)?;
                let w = witness.total().transport(&w, ta.total())?;
                (witness, Some(w))
            }
            None => (ta, None),
        }
    };
    Ok(match w {
        Some(w) => Annihilation {
            annihilated: true,
            witness: Some(fib),
            primitive: Some(w),
        },
        None => Annihilation {
            annihilated: false,
            witness: None,
            primitive: None,
        },
    })
}

/// `σ = xω + θ` for an element of `A[x] ⊗ L`; both parts free of `x`.
pub fn split_defining_system(
    total: &FreeCDGA,
    x: &str,
    system: &TensorElement,
) -> Result<(TensorElement, TensorElement), FibrationError> {
    let xi = total.generator_index(x)?;
    let xm = Monomial::generator(xi);
    let mut omega = TensorElement::zero();
    let mut theta = TensorElement::zero();
    for (l, coeff) in system.terms() {
        let mut w = Element::zero();
        let mut t = Element::zero();
        for (m, c) in coeff.terms() {
            if m.contains(xi) {
                let rest = Monomial::from_factors(m.factors().filter(|&j| j != xi));
                let (_, negative) = total.mul_monomials(&xm, &rest).expect("x·rest = ±m");
                w.add_term(rest, if negative { -c.clone() } else { c.clone() });
            } else {
                t.add_term(m.clone(), c.clone());
            }
        }
        omega.add_term(l, &w);
        theta.add_term(l, &t);
    }
    Ok((omega, theta))
}

/// `x·t` coefficient-wise.
fn times(total: &FreeCDGA, x: &Element, t: &TensorElement) -> TensorElement {
    t.map_coefficients(|a| total.mul(x, a))
}

/// Output of [`descend`].
#[derive(Debug, Clone)]
pub struct DescendResult {
    pub zeta: MCProductData,
    pub system: DefiningSystem,
    pub normalized_c: Element,
    pub product: MCProduct,
    /// `ℓ₀` in coordinates of `L̃`.
    pub l0: LieVec,
    /// Names of the in-pipeline assertions that were checked, in order.
    pub checks: Vec<&'static str>,
}

fn lemma(ok: bool, lemma: &'static str, detail: impl FnOnce() -> String) -> Result<(), FibrationError> {
    if ok {
        Ok(())
    } else {
        Err(FibrationError::LemmaFailed {
            lemma,
            detail: detail(),
        })
    }
}

/// Moves an MC product along an odd spherical step `A ↪ A[x]`: given a
/// defining system `σ` over `A[x]` whose product is `ι_*[c]` for an odd
/// cocycle `c` of `A`, builds data `ζ` and a defining system over `A` whose
/// product is `[c]`.
pub fn descend(
    fib: &AlgebraicFibration,
    step: &OddSphericalStep,
    data: &MCProductData,
    system: &DefiningSystem,
    c: &Element,
) -> Result<DescendResult, FibrationError> {
    let a = fib.base();
    let b = fib.total();
    let n = step.x_degree;
    let mut checks = Vec::new();
    let c_degree = product_degree(data);
    if c_degree.is_multiple_of(2) {
        return Err(FibrationError::EvenClass(c_degree));
    }
    if !c.is_zero() && a.degree(c) != Some(c_degree) {
        return Err(FibrationError::EulerDegree {
            expected: c_degree,
            found: a.degree(c).unwrap_or(0),
        });
    }
    if !a.d(c).is_zero() {
        return Err(CdgaError::NotACocycle.into());
    }
    let lt = data.total();
    let z = data.center();
    let tb = TensorDgla::new(b, lt);
    let x = b.gen(&step.x)?;
    let e = fib.include(&step.euler)?;

    // (1) σ = xω + θ, (2) lifts
    let (omega, theta) = split_defining_system(b, &step.x, system.element())?;
    let mut alpha = lift_system(data, &omega);
    let beta = lift_system(data, &theta);
    let mut c_b = fib.include(c)?;

    // (3) F(xα + β) = cz + d(xu + v)
    let f = tb.curvature(&times(b, &x, &alpha).sum(&beta))?;
    lemma(f.terms().all(|(l, _)| l == z), "F(xα + β) ∈ A[x] ⊗ Z", || tb.format(&f))?;
    let defect = &f.coefficient(z) - &c_b;
    let w = b
        .primitive(&defect, c_degree)?
        .ok_or(FibrationError::NormalizationUnsolvable)?;
    let (u, v) = {
        let wt = TensorElement::pure(w, z);
        let (u, v) = split_defining_system(b, &step.x, &wt)?;
        (u.coefficient(z), v.coefficient(z))
    };
    alpha.add_term(z, &-&u);
    c_b += &b.d(&v);
    checks.push("normalization F(xα + β) = cz");

    // (4) −dα + [α, β] = 0 and eα + dβ + ½[β, β] = cz
    let mut e1 = tb.d(&alpha).scale(&-Rational::one());
    e1.add_scaled(&tb.bracket(&alpha, &beta), &Rational::one());
    lemma(e1.is_zero(), "−dα + [α, β] = 0", || tb.format(&e1))?;
    checks.push("−dα + [α, β] = 0");
    let mut e2 = times(b, &e, &alpha).sum(&tb.curvature_unchecked(&beta));
    e2.add_term(z, &-&c_b);
    lemma(e2.is_zero(), "eα + dβ + ½[β, β] = cz", || tb.format(&e2))?;
    checks.push("eα + dβ + ½[β, β] = cz");

    // everything now lives in A
    let to_a = |t: &TensorElement| -> Result<TensorElement, CdgaError> {
        let mut out = TensorElement::zero();
        for (l, coeff) in t.terms() {
            out.add_term(l, &a.transport(coeff, b)?);
        }
        Ok(out)
    };
    let alpha = to_a(&alpha)?;
    let beta = to_a(&beta)?;
    let c_a = a.transport(&c_b, b)?;

    // (5) α = 1⊗ℓ₀ + ᾱ
    let mut l0 = LieVec::new();
    let mut alpha_bar = TensorElement::zero();
    for (l, coeff) in alpha.terms() {
        let k = coeff.constant_term();
        if !k.is_zero() {
            lie_add_scaled(&mut l0, &LieVec::from([(l, Rational::one())]), &k);
        }
        alpha_bar.add_term(l, &coeff.filter(|m| !m.is_unit()));
    }
    lemma(
        l0.keys().all(|&i| lt.degree(i) == 1 - n as i32),
        "ℓ₀ ∈ L̃^{1−n}",
        || lt.format_vec(&l0),
    )?;
    lemma(lt.d(&l0).is_empty(), "d̃_L(ℓ₀) = 0", || lt.format_vec(&lt.d(&l0)))?;
    checks.push("d̃_L(ℓ₀) = 0");

    // (6) Ñ, Ñ′, M̃
    let nt = build_n_tilde(data, n)?;
    let report = nt.algebra.validate();
    lemma(report.is_valid(), "Ñ is a DGLA", || report.to_string())?;
    let ntp = perturb_differential(&nt, &l0)?;
    let report = ntp.algebra.validate();
    lemma(report.is_valid(), "Ñ′ is a DGLA", || report.to_string())?;
    checks.push("Ñ, Ñ′ are DGLAs");
    let m = truncate_at_zero(&ntp.algebra)?;
    let report = m.algebra.validate();
    lemma(report.is_valid(), "M̃ is a DGLA", || report.to_string())?;
    lemma(m.algebra.is_nilpotent(), "M̃ is nilpotent", String::new)?;
    checks.push("M̃ is a nilpotent DGLA");

    // (7) μ̄ = ᾱε + β + e⊗η
    let mut mu = alpha_bar.map_lie(|l| LieVec::from([(nt.eps(l), Rational::one())]));
    mu.add_scaled(&beta, &Rational::one());
    mu.add_term(nt.eta(), &step.euler);
    let tn = TensorDgla::new(a, &ntp.algebra);
    lemma(tn.is_homogeneous_of(&mu, 1), "|μ̄| = 1", || tn.format(&mu))?;
    let f_mu = tn.curvature_unchecked(&mu);
    let expected = TensorElement::pure(c_a.clone(), nt.plain(z));
    lemma(f_mu == expected, "F(μ̄) = cz", || tn.format(&f_mu))?;
    checks.push("F(μ̄) = cz");
    let mu_m = restrict_tensor(&m, &mu).ok_or_else(|| FibrationError::LemmaFailed {
        lemma: "μ̄ ∈ (A⁺ ⊗ M̃)¹",
        detail: tn.format(&mu),
    })?;
    let tm = TensorDgla::new(a, &m.algebra);
    lemma(
        tm.in_positive_part(&mu_m) && tm.is_homogeneous_of(&mu_m, 1),
        "μ̄ ∈ (A⁺ ⊗ M̃)¹",
        || tm.format(&mu_m),
    )?;
    checks.push("μ̄ ∈ (A⁺ ⊗ M̃)¹");

    // (8) ζ = (Z ↪ M̃ ↠ M̃/Z)
    let z_m = m
        .restrict(&LieVec::from([(nt.plain(z), Rational::one())]))
        .and_then(|v| (v.len() == 1).then(|| *v.keys().next().expect("one key")))
        .ok_or_else(|| FibrationError::LemmaFailed {
            lemma: "Z ⊂ M̃",
            detail: "center is not a basis element of M̃".into(),
        })?;
    let zeta = MCProductData::from_central(m.algebra.clone(), z_m)?;
    let report = zeta.validate();
    lemma(report.is_valid(), "ζ is MC-product data", || report.to_string())?;
    checks.push("Z central in M̃, Im(d̃_M) ∩ Z = 0");
    let projected = mu_m.map_lie(|l| zeta.project(&LieVec::from([(l, Rational::one())])));
    let system = DefiningSystem::new(a, zeta.quotient(), projected)?;
    let product = mc_product(a, &zeta, &system)?;
    let c_class = a.reduce_to_class(&c_a, c_degree)?;
    lemma(product.class == c_class, "m(μ̄) = [c]", || {
        format!("{} vs {}", a.format(&product.cocycle), a.format(&c_a))
    })?;
    checks.push("m_ζ(system) = [c]");
    Ok(DescendResult {
        zeta,
        system,
        normalized_c: c_a,
        product,
        l0,
        checks,
    })
}

/// Rewrites `Σ aℓ ⊗ ℓ` over the ambient algebra in the basis of a subalgebra,
/// monomial by monomial.
fn restrict_tensor(sub: &crate::dgla::SubDgla, t: &TensorElement) -> Option<TensorElement> {
    let mut by_monomial: std::collections::BTreeMap<Monomial, LieVec> = Default::default();
    for (l, coeff) in t.terms() {
        for (mono, c) in coeff.terms() {
            lie_add_scaled(
                by_monomial.entry(mono.clone()).or_default(),
                &LieVec::from([(l, Rational::one())]),
                c,
            );
        }
    }
    let mut out = TensorElement::zero();
    for (mono, v) in by_monomial {
        if v.is_empty() {
            continue;
        }
        for (k, c) in sub.restrict(&v)? {
            out.add_term(k, &Element::monomial(mono.clone(), c));
        }
    }
    Some(out)
}

/// Pushes a defining system along the inclusion coefficient-wise.
pub fn pushforward_system(
    fib: &AlgebraicFibration,
    system: &TensorElement,
) -> Result<TensorElement, CdgaError> {
    let mut out = TensorElement::zero();
    for (l, coeff) in system.terms() {
        out.add_term(l, &fib.include(coeff)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::{massey_data, MasseyLabels};
    use crate::linalg::int;
    use crate::models;
    use crate::products::{massey_product, MasseyResult};

    fn elem(a: &FreeCDGA, expr: &[(&str, i64)]) -> Element {
        let mut z = Element::zero();
        for (name, c) in expr {
            let mut term = Element::one();
            for g in name.split('*').filter(|g| !g.is_empty()) {
                term = a.mul(&term, &a.gen(g).unwrap());
            }
            z.add_scaled(&term, &int(*c));
        }
        z
    }

    fn class(a: &FreeCDGA, expr: &[(&str, i64)], degree: u32) -> CohomologyClass {
        a.reduce_to_class(&elem(a, expr), degree).unwrap()
    }

    #[test]
    fn adjoin_odd_checks_the_euler_class() {
        let a = models::heisenberg(5);
        let ac = elem(&a, &[("a*c", 1)]);
        assert!(matches!(
            adjoin_odd(&a, &ac, 2, "x"),
            Err(FibrationError::EvenFiberDegree(2))
        ));
        assert!(matches!(
            adjoin_odd(&a, &ac, 3, "x"),
            Err(FibrationError::EulerDegree { .. })
        ));
        assert!(matches!(
            adjoin_odd(&a, &elem(&a, &[("c", 1), ("a", 1)]).clone(), 0, "x"),
            Err(FibrationError::EvenFiberDegree(0))
        ));
        let (fib, _) = adjoin_odd(&a, &ac, 1, "x").unwrap();
        assert!(validate_fibration(&fib, true).is_valid());
        let (fib, _) = adjoin_odd(&a, &Element::zero(), 3, "x").unwrap();
        assert!(validate_fibration(&fib, true).is_valid());
    }

    #[test]
    fn gysin_kernel_is_euler_multiples() {
        let h = models::heisenberg(6);
        let s = models::two_sphere(8);
        let cases = [
            (h.clone(), elem(&h, &[("a*c", 1)]), 1),
            (h.clone(), Element::zero(), 1),
            (s.clone(), elem(&s, &[("u", 1)]), 1),
            (s.clone(), Element::zero(), 3),
        ];
        for (a, e, n) in cases {
            let (_, step) = adjoin_odd(&a, &e, n, "x").unwrap();
            for k in 0..=a.trustworthy_degree() - 1 {
                let g = gysin_kernel(&a, &step, k).unwrap();
                assert!(g.agrees(), "degree {k}, e = {}", a.format(&e));
            }
        }
        let (_, step) = adjoin_odd(&h, &elem(&h, &[("a*c", 1)]), 1, "x").unwrap();
        assert_eq!(gysin_kernel(&h, &step, 2).unwrap().kernel.dim(), 1);
    }

    #[test]
    fn truncated_ta_kills_even_cohomology() {
        for a in [models::two_sphere(8), models::zero_differential(&[("u", 2), ("w", 4)], 8)] {
            let ta = build_truncated_ta(&a, 6, DEFAULT_MAX_ADJUNCTIONS).unwrap();
            assert!(validate_fibration(&ta, true).is_valid());
            for k in [2, 4, 6] {
                assert_eq!(ta.total().cohomology(k).unwrap().dim(), 0, "H^{k}");
            }
        }
        let a = models::zero_differential(&[("u", 2)], 8);
        let ta = build_truncated_ta(&a, 6, DEFAULT_MAX_ADJUNCTIONS).unwrap();
        assert_eq!(ta.fiber().len(), 1);
    }

    #[test]
    fn heisenberg_ta_outgrows_any_cap() {
        // H² of a nilpotent Lie algebra never vanishes, so degree-one
        // adjunctions keep producing new classes.
        let a = models::heisenberg(4);
        assert!(matches!(
            build_truncated_ta(&a, 2, 20),
            Err(FibrationError::CapExceeded(20))
        ));
    }

    #[test]
    fn annihilation_with_witnesses() {
        let a = models::heisenberg(6);
        let ac = class(&a, &[("a*c", 1)], 2);
        let out = annihilates(&a, &ac, 5, DEFAULT_MAX_ADJUNCTIONS).unwrap();
        assert!(out.annihilated);
        let w = out.witness.unwrap();
        assert!(validate_fibration(&w, true).is_valid());
        assert!(w.pushforward(&ac).unwrap().is_zero());

        let x = class(&a, &[("a", 1)], 1);
        assert!(!annihilates(&a, &x, 5, DEFAULT_MAX_ADJUNCTIONS).unwrap().annihilated);

        // [abc] = [a]·[bc] dies once H² is killed
        let abc = class(&a, &[("a*b*c", 1)], 3);
        let out = annihilates(&a, &abc, 5, DEFAULT_MAX_ADJUNCTIONS).unwrap();
        assert!(out.annihilated);
        let w = out.witness.unwrap();
        assert!(validate_fibration(&w, true).is_valid());
        assert!(w.pushforward(&abc).unwrap().is_zero());
    }

    fn check_descend(
        a: &FreeCDGA,
        euler: &Element,
        n: u32,
        data: &MCProductData,
        sigma: TensorElement,
        c: &Element,
    ) -> DescendResult {
        let (fib, step) = adjoin_odd(a, euler, n, "x").unwrap();
        let system = DefiningSystem::new(fib.total(), data.quotient(), sigma).unwrap();
        let out = descend(&fib, &step, data, &system, c).unwrap();
        assert!(out.zeta.validate().is_valid());
        assert!(out.zeta.total().is_auxiliary() || out.zeta.total().dim() > 0);
        out
    }

    #[test]
    fn descend_pushforward_with_zero_euler_class() {
        let a = models::triple_211(6);
        let u = class(&a, &[("u", 1)], 2);
        let x = class(&a, &[("a", 1)], 1);
        let y = class(&a, &[("b", 1)], 1);
        let out = massey_product(&a, &[u, x, y]).unwrap();
        let MasseyResult::Value { system, product, .. } = out.result else {
            panic!("defined")
        };
        let data = massey_data(3, &[2, 1, 1]).unwrap();
        let (fib, _) = adjoin_odd(&a, &Element::zero(), 1, "x").unwrap();
        let sigma = pushforward_system(&fib, system.element()).unwrap();
        let r = check_descend(&a, &Element::zero(), 1, &data, sigma, &product.cocycle);
        assert!(r.l0.is_empty());
        assert_eq!(r.product.class, product.class);
        assert!(!r.product.class.is_zero());
    }

    #[test]
    fn descend_a_class_killed_by_the_step() {
        // ub = d(xb) in Λ(u, b)[x], dx = u
        let a = models::zero_differential(&[("u", 2), ("b", 1)], 6);
        let data = massey_data(2, &[2, 1]).unwrap();
        let ub = elem(&a, &[("u*b", 1)]);
        let r = check_descend(&a, &elem(&a, &[("u", 1)]), 1, &data, TensorElement::zero(), &ub);
        assert!(r.l0.is_empty());
        assert_eq!(r.product.class, class(&a, &[("u*b", 1)], 3));
        assert!(!r.product.class.is_zero());
    }

    #[test]
    fn descend_with_a_constant_term() {
        let a = models::heisenberg(6);
        let labels = MasseyLabels::new(2, &[1, 2]).unwrap();
        let data = labels.data.clone();
        let (fib, _) = adjoin_odd(&a, &Element::zero(), 1, "x").unwrap();
        let b = fib.total();
        let q = |i, j| labels.quotient_index(i, j).unwrap();
        let mut sigma = TensorElement::zero();
        sigma.add_term(q(1, 1), &elem(b, &[("x", 1)]));
        sigma.add_term(q(2, 2), &elem(b, &[("a*b", 1)]));
        let r = check_descend(&a, &Element::zero(), 1, &data, sigma, &Element::zero());
        assert!(!r.l0.is_empty());
        assert!(r.product.class.is_zero());
    }
}
