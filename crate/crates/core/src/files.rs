//! Model, DGLA and defining-system files (TOML with expression strings).
//!
//! ```toml
//! # heisenberg.model
//! truncation = 6
//! generators = [{ name = "a", degree = 1 }, { name = "b", degree = 1 }, { name = "c", degree = 1 }]
//! [differential]
//! c = "a*b"
//! ```
//!
//! A DGLA file lists `basis`, `brackets` keyed by `"[x,y]"`, `differential`,
//! the `center` name and its degree `q`. A system file is
//! `system = [["e1", "a"], ["e2", "b"]]`, pairs of quotient basis name and
//! coefficient expression.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cdga::{CdgaError, FreeCDGA, Generator};
use crate::dgla::{DglaError, MCProductData, FDGLA};
use crate::parse::{parse_element, parse_lie, ParseError};
use crate::tensor::TensorElement;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed file: {0}")]
    Syntax(String),
    #[error("in `{field}`: {source}")]
    Expression { field: String, source: ParseError },
    #[error("bracket key `{0}` is not of the form [x,y]")]
    BracketKey(String),
    #[error("center `{center}` has degree {degree}, file says q = {q}")]
    CentralDegree { center: String, degree: i32, q: i32 },
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Dgla(#[from] DglaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub truncation: u32,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub differential: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DglaFile {
    pub center: String,
    pub q: i32,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub brackets: BTreeMap<String, String>,
    #[serde(default)]
    pub differential: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(default)]
    pub system: Vec<(String, String)>,
}

fn expression<T>(field: impl Into<String>, r: Result<T, ParseError>) -> Result<T, FileError> {
    r.map_err(|source| FileError::Expression {
        field: field.into(),
        source,
    })
}

pub fn read_text(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn from_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FileError> {
    toml::from_str(text).map_err(|e| FileError::Syntax(e.to_string()))
}

fn to_toml<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("file types serialize")
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        from_toml(text)
    }

    pub fn to_text(&self) -> String {
        to_toml(self)
    }

    pub fn build(&self) -> Result<FreeCDGA, FileError> {
        let gens = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.degree))
            .collect();
        let mut a = FreeCDGA::new(gens, self.truncation)?;
        for (name, src) in &self.differential {
            let image = expression(format!("differential.{name}"), parse_element(src, &a))?;
            a = a.with_differential(name, image)?;
        }
        Ok(a)
    }

    pub fn from_cdga(a: &FreeCDGA) -> Self {
        let generators = a
            .generators()
            .iter()
            .map(|g| GeneratorEntry {
                name: g.name.clone(),
                degree: g.degree,
            })
            .collect();
        let differential = a
            .generators()
            .iter()
            .enumerate()
            .filter(|(i, _)| !a.d_image(*i).is_zero())
            .map(|(i, g)| (g.name.clone(), a.format(a.d_image(i))))
            .collect();
        ModelFile {
            truncation: a.truncation(),
            generators,
            differential,
        }
    }
}

fn bracket_key(key: &str) -> Option<(&str, &str)> {
    let inner = key.trim().strip_prefix('[')?.strip_suffix(']')?;
    let (x, y) = inner.split_once(',')?;
    Some((x.trim(), y.trim()))
}

impl DglaFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        from_toml(text)
    }

    pub fn to_text(&self) -> String {
        to_toml(self)
    }

    pub fn build_algebra(&self) -> Result<FDGLA, FileError> {
        let mut g = FDGLA::new(self.basis.iter().map(|b| (b.name.clone(), b.degree)).collect())?;
        for (key, src) in &self.brackets {
            let (x, y) = bracket_key(key).ok_or_else(|| FileError::BracketKey(key.clone()))?;
            let (i, j) = (g.index_of(x)?, g.index_of(y)?);
            let value = expression(format!("brackets.{key}"), parse_lie(src, &g))?;
            g.set_bracket(i, j, value)?;
        }
        for (name, src) in &self.differential {
            let i = g.index_of(name)?;
            let value = expression(format!("differential.{name}"), parse_lie(src, &g))?;
            g.set_differential(i, value)?;
        }
        Ok(g)
    }

    /// Builds the data with its basis-complement section. Validation is
    /// left to the caller.
    pub fn build(&self) -> Result<MCProductData, FileError> {
        let g = self.build_algebra()?;
        let z = g.index_of(&self.center)?;
        if g.degree(z) != self.q {
            return Err(FileError::CentralDegree {
                center: self.center.clone(),
                degree: g.degree(z),
                q: self.q,
            });
        }
        Ok(MCProductData::from_central(g, z)?)
    }

    pub fn from_data(data: &MCProductData) -> Self {
        let g = data.total();
        let basis = g
            .basis()
            .iter()
            .map(|b| BasisEntry {
                name: b.name.clone(),
                degree: b.degree,
            })
            .collect();
        let brackets = g
            .structure_constants()
            .filter(|((i, j), _)| i <= j)
            .map(|(&(i, j), v)| (format!("[{},{}]", g.name(i), g.name(j)), g.format_vec(v)))
            .collect();
        let differential = (0..g.dim())
            .filter(|&i| !g.d_basis(i).is_empty())
            .map(|i| (g.name(i).to_string(), g.format_vec(g.d_basis(i))))
            .collect();
        DglaFile {
            center: g.name(data.center()).to_string(),
            q: data.q(),
            basis,
            brackets,
            differential,
        }
    }
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        from_toml(text)
    }

    pub fn to_text(&self) -> String {
        to_toml(self)
    }

    /// Coefficients are parsed in `a`, basis names looked up in `l`.
    pub fn build(&self, a: &FreeCDGA, l: &FDGLA) -> Result<TensorElement, FileError> {
        let mut out = TensorElement::zero();
        for (name, src) in &self.system {
            let i = l.index_of(name)?;
            let coeff = expression(format!("system.{name}"), parse_element(src, a))?;
            out.add_term(i, &coeff);
        }
        Ok(out)
    }

    pub fn from_tensor(a: &FreeCDGA, l: &FDGLA, t: &TensorElement) -> Self {
        SystemFile {
            system: t
                .terms()
                .map(|(i, c)| (l.name(i).to_string(), a.format(c)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::massey_data;
    use crate::models;

    #[test]
    fn model_round_trip() {
        for a in [models::heisenberg(6), models::triple_211(7), models::two_sphere(8)] {
            let text = ModelFile::from_cdga(&a).to_text();
            let b = ModelFile::parse(&text).unwrap().build().unwrap();
            assert_eq!(ModelFile::from_cdga(&b).to_text(), text);
            assert!(b.validate().is_valid());
        }
    }

    #[test]
    fn dgla_round_trip() {
        for data in [massey_data(2, &[1, 1]).unwrap(), massey_data(3, &[2, 1, 1]).unwrap()] {
            let file = DglaFile::from_data(&data);
            let back = DglaFile::parse(&file.to_text()).unwrap().build().unwrap();
            assert!(back.validate().is_valid());
            assert_eq!(DglaFile::from_data(&back), file);
        }
    }

    #[test]
    fn bad_files() {
        assert!(matches!(ModelFile::parse("truncation = "), Err(FileError::Syntax(_))));
        let text = "truncation = 4\ngenerators = [{ name = \"a\", degree = 1 }]\n[differential]\na = \"a + q\"\n";
        match ModelFile::parse(text).unwrap().build() {
            Err(FileError::Expression { field, source }) => {
                assert_eq!(field, "differential.a");
                assert_eq!(source.position(), 4);
            }
            other => panic!("{other:?}"),
        }
        let mut file = DglaFile::from_data(&massey_data(2, &[1, 1]).unwrap());
        file.q = -1;
        assert!(matches!(file.build(), Err(FileError::CentralDegree { .. })));
        file.q = 0;
        file.brackets.insert("e1,e2".into(), "eta".into());
        assert!(matches!(file.build(), Err(FileError::BracketKey(_))));
    }

    #[test]
    fn system_round_trip() {
        let a = models::heisenberg(4);
        let data = massey_data(2, &[1, 1]).unwrap();
        let file = SystemFile::parse("system = [[\"e1\", \"a\"], [\"e2\", \"b\"]]").unwrap();
        let t = file.build(&a, data.quotient()).unwrap();
        assert_eq!(SystemFile::from_tensor(&a, data.quotient(), &t), file);
    }
}
