use mcprod::cdga::FreeCDGA;
use mcprod::dgla::FDGLA;
use mcprod::files::ModelFile;
use mcprod::linalg::{int, image_basis, kernel_basis, Rational, SparseMatrix};
use mcprod::models::{bundled_data, bundled_model, bundled_system, SYSTEM_FILES};
use mcprod::parse::{parse_element, parse_lie};
use mcprod::products::{mc_product, DefiningSystem};
use mcprod::sampling::{random_element, random_tensor};
use mcprod::tensor::{TensorDgla, TensorElement};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODELS: &[&str] = &["heisenberg", "two_sphere", "triple_211", "exterior_ub", "exterior_abc"];

const HOSTS: &[(&str, &str)] = &[
    ("heisenberg", "massey_3_211"),
    ("triple_211", "massey_3_111"),
    ("two_sphere", "massey_2_21"),
    ("exterior_ub", "massey_2_12"),
];

fn sign(p: u32, q: u32) -> Rational {
    if (p * q).is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn pick<'a, T>(xs: &'a [T], rng: &mut ChaCha8Rng) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

fn gauge(a: &FreeCDGA, l: &FDGLA, rng: &mut ChaCha8Rng) -> TensorElement {
    let mut x = random_tensor(a, l, 0, 2, rng);
    for i in 0..l.dim() {
        if l.degree(i) == 0 && rng.gen_bool(0.5) {
            x.add_term(i, &mcprod::cdga::Element::scalar(int(rng.gen_range(-2..=2))));
        }
    }
    x
}

fn graded_sign(p: i32, q: i32) -> Rational {
    if (p * q).rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cdga_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = bundled_model(pick(MODELS, &mut rng));
        let n = a.truncation();
        let (p, q, r) = (rng.gen_range(0..=n), rng.gen_range(0..=n), rng.gen_range(0..=n));
        let x = random_element(&a, p, 3, &mut rng);
        let y = random_element(&a, q, 3, &mut rng);
        let z = random_element(&a, r, 3, &mut rng);

        prop_assert_eq!(a.mul(&x, &y), a.mul(&y, &x).scale(&sign(p, q)));
        prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
        prop_assert!(a.d(&a.d(&x)).is_zero());

        let mut leibniz = a.mul(&a.d(&x), &y);
        leibniz.add_scaled(&a.mul(&x, &a.d(&y)), &sign(p, 1));
        prop_assert_eq!(a.d(&a.mul(&x, &y)), leibniz);
    }

    #[test]
    fn cohomology_ignores_generator_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = bundled_model(pick(MODELS, &mut rng));
        let mut file = ModelFile::from_cdga(&a);
        file.generators.shuffle(&mut rng);
        let b = file.build().unwrap();
        for k in 0..=a.trustworthy_degree().min(b.trustworthy_degree()) {
            prop_assert_eq!(a.cohomology(k).unwrap().dim(), b.cohomology(k).unwrap().dim());
        }
    }

    #[test]
    fn format_then_parse_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = bundled_model(pick(MODELS, &mut rng));
        let x = random_element(&a, rng.gen_range(0..=a.truncation()), 5, &mut rng);
        prop_assert_eq!(parse_element(&a.format(&x), &a).unwrap(), x);

        let (_, data) = pick(HOSTS, &mut rng);
        let l = bundled_data(data);
        let v = FDGLA::from_dense(
            &(0..l.total().dim()).map(|_| int(rng.gen_range(-2..=2))).collect::<Vec<_>>(),
        );
        prop_assert_eq!(parse_lie(&l.total().format_vec(&v), l.total()).unwrap(), v);
    }

    #[test]
    fn bianchi_and_gauge_covariance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (model, data) = pick(HOSTS, &mut rng);
        let (a, data) = (bundled_model(model), bundled_data(data));
        let t = TensorDgla::new(&a, data.total());
        let alpha = random_tensor(&a, data.total(), 1, 3, &mut rng);
        let f = t.curvature(&alpha).unwrap();
        let mut bianchi = t.d(&f);
        bianchi.add_scaled(&t.bracket(&alpha, &f), &Rational::one());
        prop_assert!(bianchi.is_zero());

        let x = gauge(&a, data.total(), &mut rng);
        let moved = t.gauge_action(&x, &alpha).unwrap();
        prop_assert_eq!(t.curvature(&moved).unwrap(), t.exp_ad(&x, &f).unwrap());
    }

    #[test]
    fn tensor_bracket_is_graded_lie(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (model, data) = pick(HOSTS, &mut rng);
        let (a, data) = (bundled_model(model), bundled_data(data));
        let l = data.total();
        let t = TensorDgla::new(&a, l);
        let (p, q, r) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
        let x = random_tensor(&a, l, p, 2, &mut rng);
        let y = random_tensor(&a, l, q, 2, &mut rng);
        let z = random_tensor(&a, l, r, 2, &mut rng);

        prop_assert_eq!(t.bracket(&x, &y), t.bracket(&y, &x).scale(&-graded_sign(p, q)));

        let lhs = t.bracket(&x, &t.bracket(&y, &z));
        let mut rhs = t.bracket(&t.bracket(&x, &y), &z);
        rhs.add_scaled(&t.bracket(&y, &t.bracket(&x, &z)), &graded_sign(p, q));
        prop_assert_eq!(lhs, rhs);

        let mut leibniz = t.bracket(&t.d(&x), &y);
        leibniz.add_scaled(&t.bracket(&x, &t.d(&y)), &graded_sign(p, 1));
        prop_assert_eq!(t.d(&t.bracket(&x, &y)), leibniz);
    }

    #[test]
    fn rank_nullity(rows in 1usize..7, cols in 1usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dense: Vec<Vec<Rational>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| if rng.gen_bool(0.4) { Rational::zero() } else { int(rng.gen_range(-3..=3)) })
                    .collect()
            })
            .collect();
        let m = SparseMatrix::from_dense(&dense);
        let kernel = kernel_basis(&m);
        prop_assert_eq!(m.rank() + kernel.dim(), cols);
        prop_assert_eq!(image_basis(&m).dim(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
        for v in kernel.vectors() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_ignore_section_and_gauge(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (name, ..) = pick(SYSTEM_FILES, &mut rng);
        let (a, data, system) = bundled_system(name);
        let reference = mc_product(&a, &data, &system).unwrap().class;

        let shift: Vec<Rational> = (0..data.quotient().dim())
            .map(|i| {
                if data.quotient().degree(i) == data.q() {
                    int(rng.gen_range(-3..=3))
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let shifted = data.clone().with_center_shift(&shift).unwrap();
        prop_assert_eq!(&mc_product(&a, &shifted, &system).unwrap().class, &reference);

        let t = TensorDgla::new(&a, data.quotient());
        let x = gauge(&a, data.quotient(), &mut rng);
        let image = t.gauge_action(&x, system.element()).unwrap();
        let image = DefiningSystem::new(&a, data.quotient(), image).unwrap();
        prop_assert_eq!(&mc_product(&a, &data, &image).unwrap().class, &reference);
    }
}
