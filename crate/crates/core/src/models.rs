//! Bundled example algebras used by the tests, the self-test and the CLI.

use crate::cdga::{FreeCDGA, Generator};
use crate::dgla::MCProductData;
use crate::files::{DglaFile, ModelFile, SystemFile};
use crate::products::DefiningSystem;

fn gens(entries: &[(&str, u32)]) -> Vec<Generator> {
    entries.iter().map(|&(n, d)| Generator::new(n, d)).collect()
}

/// `Λ(a, b, c)`, all of degree 1, with `dc = ab`.
pub fn heisenberg(truncation: u32) -> FreeCDGA {
    let alg = FreeCDGA::new(gens(&[("a", 1), ("b", 1), ("c", 1)]), truncation).unwrap();
    let ab = alg.mul(&alg.gen("a").unwrap(), &alg.gen("b").unwrap());
    alg.with_differential("c", ab).unwrap()
}

/// `Λ(u, y)` with `|u| = 2`, `|y| = 3`, `dy = u²` (a model of `S²`).
pub fn two_sphere(truncation: u32) -> FreeCDGA {
    let alg = FreeCDGA::new(gens(&[("u", 2), ("y", 3)]), truncation).unwrap();
    let u = alg.gen("u").unwrap();
    let u2 = alg.mul(&u, &u);
    alg.with_differential("y", u2).unwrap()
}

/// `Λ(u, a, b, p, r)` with `|u| = |p| = 2`, `|a| = |b| = |r| = 1`,
/// `dp = ua` and `dr = ab`. The triple product `⟨u, a, b⟩` is defined here.
pub fn triple_211(truncation: u32) -> FreeCDGA {
    let alg = FreeCDGA::new(
        gens(&[("u", 2), ("a", 1), ("b", 1), ("p", 2), ("r", 1)]),
        truncation,
    )
    .unwrap();
    let (u, a, b) = (
        alg.gen("u").unwrap(),
        alg.gen("a").unwrap(),
        alg.gen("b").unwrap(),
    );
    let ua = alg.mul(&u, &a);
    let ab = alg.mul(&a, &b);
    alg.with_differential("p", ua)
        .unwrap()
        .with_differential("r", ab)
        .unwrap()
}

/// Free algebra on the given generators with zero differential.
pub fn zero_differential(entries: &[(&str, u32)], truncation: u32) -> FreeCDGA {
    FreeCDGA::new(gens(entries), truncation).unwrap()
}

/// Model files shipped in `models/`.
pub const MODEL_FILES: &[(&str, &str)] = &[
    ("heisenberg", include_str!("../models/heisenberg.model")),
    ("two_sphere", include_str!("../models/two_sphere.model")),
    ("triple_211", include_str!("../models/triple_211.model")),
    ("exterior_ub", include_str!("../models/exterior_ub.model")),
    ("exterior_abc", include_str!("../models/exterior_abc.model")),
];

/// MC-product data files shipped in `models/`.
pub const DGLA_FILES: &[(&str, &str)] = &[
    ("massey_2_11", include_str!("../models/massey_2_11.dgla")),
    ("massey_2_12", include_str!("../models/massey_2_12.dgla")),
    ("massey_2_21", include_str!("../models/massey_2_21.dgla")),
    ("massey_3_111", include_str!("../models/massey_3_111.dgla")),
    ("massey_3_211", include_str!("../models/massey_3_211.dgla")),
];

/// Defining systems shipped in `models/`: (name, model, data, file).
pub const SYSTEM_FILES: &[(&str, &str, &str, &str)] = &[
    (
        "heisenberg_triple",
        "heisenberg",
        "massey_3_111",
        include_str!("../models/heisenberg_triple.system"),
    ),
    (
        "triple_211",
        "triple_211",
        "massey_3_211",
        include_str!("../models/triple_211.system"),
    ),
    (
        "ub_cup",
        "exterior_ub",
        "massey_2_21",
        include_str!("../models/ub_cup.system"),
    ),
];

pub fn bundled_model(name: &str) -> FreeCDGA {
    let (_, text) = MODEL_FILES.iter().find(|(n, _)| *n == name).expect("bundled model");
    ModelFile::parse(text).and_then(|f| f.build()).expect("bundled model parses")
}

pub fn bundled_data(name: &str) -> MCProductData {
    let (_, text) = DGLA_FILES.iter().find(|(n, _)| *n == name).expect("bundled data");
    DglaFile::parse(text).and_then(|f| f.build()).expect("bundled data parses")
}

/// A bundled defining system together with its algebra and data.
pub fn bundled_system(name: &str) -> (FreeCDGA, MCProductData, DefiningSystem) {
    let &(_, model, data, text) = SYSTEM_FILES.iter().find(|s| s.0 == name).expect("bundled system");
    let a = bundled_model(model);
    let data = bundled_data(data);
    let t = SystemFile::parse(text)
        .and_then(|f| f.build(&a, data.quotient()))
        .expect("bundled system parses");
    let system = DefiningSystem::new(&a, data.quotient(), t).expect("bundled system is MC");
    (a, data, system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::files::ModelFile;

    #[test]
    fn bundled_files_match_constructors() {
        let pairs = [
            ("heisenberg", heisenberg(6)),
            ("two_sphere", two_sphere(9)),
            ("triple_211", triple_211(7)),
        ];
        for (name, a) in pairs {
            assert_eq!(ModelFile::from_cdga(&bundled_model(name)), ModelFile::from_cdga(&a));
        }
        for (name, ..) in SYSTEM_FILES {
            let _ = bundled_system(name);
        }
    }
}
