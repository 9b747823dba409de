//! JSON input and output formats.
//!
//! Rationals are written as strings `"p/q"`, or `"p"` when `q = 1`; plain
//! JSON integers are accepted on input. Blade and basis indices are 1-based.

use std::fmt;
use std::path::{Path, PathBuf};

use ksw_core::betti::CatalogEntry;
use ksw_core::clifford::{Blade, CliffordElement};
use ksw_core::hodge::{HKStructure, Weight1Structure};
use ksw_core::qspace::QuadraticSpace;
use ksw_core::{Matrix, Rational};
use num_traits::One;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what}: malformed JSON: {source}")]
    Json { what: String, source: serde_json::Error },
    #[error("{what}: {message}")]
    Invalid { what: String, message: String },
    #[error("{what}: {source}")]
    Core { what: String, source: ksw_core::Error },
}

impl InputError {
    pub fn invalid(what: &str, message: impl Into<String>) -> Self {
        InputError::Invalid {
            what: what.into(),
            message: message.into(),
        }
    }

    pub fn core(what: &str, source: ksw_core::Error) -> Self {
        InputError::Core {
            what: what.into(),
            source,
        }
    }
}

/// A rational in its JSON string form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse().map_err(|e| format!("bad rational {s:?}: {e}"))
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Q, E> {
                parse_rational(s).map(Q).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

fn to_rationals(v: Vec<Q>) -> Vec<Rational> {
    v.into_iter().map(|q| q.0).collect()
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rational_string(x))).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_json(m.row(i))).collect())
}

fn matrix_from(rows: Vec<Vec<Q>>, what: &str) -> Result<Matrix, InputError> {
    Matrix::from_rows(rows.into_iter().map(to_rationals).collect()).map_err(|e| InputError::core(what, e))
}

/// SHA-256 of the bytes, hex encoded.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the compact canonical JSON of a matrix.
pub fn matrix_checksum(m: &Matrix) -> String {
    content_hash(matrix_json(m).to_string().as_bytes())
}

/// Raw input text with its provenance, kept for hashing.
#[derive(Clone, Debug)]
pub struct Input {
    pub name: String,
    pub text: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Input {
            name: path.display().to_string(),
            text,
        })
    }

    pub fn inline(name: &str, text: impl Into<String>) -> Self {
        Input {
            name: name.into(),
            text: text.into(),
        }
    }

    pub fn hash(&self) -> String {
        content_hash(self.text.as_bytes())
    }

    fn parse<T: for<'de> Deserialize<'de>>(&self) -> Result<T, InputError> {
        serde_json::from_str(&self.text).map_err(|source| InputError::Json {
            what: self.name.clone(),
            source,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    dim: Option<usize>,
    gram: Option<Vec<Vec<Q>>>,
    diagonal: Option<Vec<Q>>,
}

/// `{"dim": h, "gram": [[..]]}` or `{"diagonal": [..]}`; `dim` is optional.
pub fn parse_space(input: &Input) -> Result<QuadraticSpace, InputError> {
    let f: SpaceFile = input.parse()?;
    let what = input.name.as_str();
    let found = f.gram.as_ref().map(Vec::len).or(f.diagonal.as_ref().map(Vec::len));
    if let (Some(dim), Some(found)) = (f.dim, found) {
        if dim != found {
            return Err(InputError::invalid(
                what,
                format!("\"dim\" is {dim} but the form has size {found}"),
            ));
        }
    }
    match (f.gram, f.diagonal) {
        (Some(g), None) => QuadraticSpace::new(matrix_from(g, what)?).map_err(|e| InputError::core(what, e)),
        (None, Some(d)) => QuadraticSpace::diagonal(&to_rationals(d)).map_err(|e| InputError::core(what, e)),
        _ => Err(InputError::invalid(
            what,
            "expected exactly one of \"gram\" or \"diagonal\"",
        )),
    }
}

pub fn space_json(space: &QuadraticSpace) -> Value {
    json!({ "dim": space.dim(), "gram": matrix_json(space.gram()) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PeriodFile {
    alpha: Vec<Q>,
    beta: Vec<Q>,
}

/// `{"alpha": [..], "beta": [..]}` in the coordinates of the space.
pub fn parse_period(input: &Input, space: &QuadraticSpace) -> Result<HKStructure, InputError> {
    let f: PeriodFile = input.parse()?;
    HKStructure::new(space.clone(), to_rationals(f.alpha), to_rationals(f.beta))
        .map_err(|e| InputError::core(&input.name, e))
}

pub fn period_json(hk: &HKStructure) -> Value {
    json!({
        "alpha": vector_json(hk.period().alpha()),
        "beta": vector_json(hk.period().beta()),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Weight1File {
    dim: usize,
    #[serde(rename = "J")]
    j: Vec<Vec<Q>>,
}

/// `{"dim": m, "J": [[..]]}`.
pub fn parse_weight1(input: &Input) -> Result<Weight1Structure, InputError> {
    let f: Weight1File = input.parse()?;
    let j = matrix_from(f.j, &input.name)?;
    if j.rows() != f.dim {
        return Err(InputError::invalid(
            &input.name,
            format!("\"dim\" is {} but J has {} rows", f.dim, j.rows()),
        ));
    }
    Weight1Structure::new(j).map_err(|e| InputError::core(&input.name, e))
}

pub fn weight1_json(w: &Weight1Structure) -> Value {
    json!({ "dim": w.dim(), "J": matrix_json(w.j()) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiFile {
    phi: Vec<Vec<Q>>,
}

/// `{"phi": [[..]]}`.
pub fn parse_phi(input: &Input) -> Result<Matrix, InputError> {
    let f: PhiFile = input.parse()?;
    matrix_from(f.phi, &input.name)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    blade: Vec<usize>,
    coefficient: Q,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementFile {
    dim: usize,
    terms: Vec<TermFile>,
}

/// `{"dim": h, "terms": [{"blade": [1, 2], "coefficient": "1/2"}]}`, with
/// 1-based generator indices in increasing order.
pub fn parse_element(input: &Input) -> Result<CliffordElement, InputError> {
    let f: ElementFile = input.parse()?;
    element_from_file(f, &input.name)
}

fn element_from_file(f: ElementFile, what: &str) -> Result<CliffordElement, InputError> {
    let mut terms = Vec::with_capacity(f.terms.len());
    for t in f.terms {
        if t.blade.iter().any(|&i| i == 0 || i > f.dim) || t.blade.windows(2).any(|w| w[0] >= w[1]) {
            return Err(InputError::invalid(
                what,
                format!(
                    "blade {:?} is not an increasing list of indices in 1..={}",
                    t.blade, f.dim
                ),
            ));
        }
        let idx: Vec<usize> = t.blade.iter().map(|i| i - 1).collect();
        terms.push((Blade::from_indices(&idx), t.coefficient.0));
    }
    CliffordElement::from_terms(f.dim, terms).map_err(|e| InputError::core(what, e))
}

pub fn element_json(x: &CliffordElement) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(b, c)| {
            json!({
                "blade": b.indices().iter().map(|i| i + 1).collect::<Vec<_>>(),
                "coefficient": rational_string(c),
            })
        })
        .collect();
    json!({ "dim": x.dim(), "terms": terms })
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntryFile {
    pub name: String,
    pub dim2n: u32,
    pub b2: u64,
    #[serde(default)]
    pub b3: Option<u64>,
    #[serde(default)]
    pub b_odd_first_nonzero: Option<(u32, u64)>,
    #[serde(default)]
    pub h_2n_minus_3_vanishes: Option<bool>,
}

impl From<CatalogEntryFile> for CatalogEntry {
    fn from(f: CatalogEntryFile) -> Self {
        CatalogEntry {
            name: f.name,
            dim2n: f.dim2n,
            b2: f.b2,
            b3: f.b3,
            b_odd_first_nonzero: f.b_odd_first_nonzero,
            h_2n_minus_3_vanishes: f.h_2n_minus_3_vanishes,
        }
    }
}

impl From<&CatalogEntry> for CatalogEntryFile {
    fn from(e: &CatalogEntry) -> Self {
        CatalogEntryFile {
            name: e.name.clone(),
            dim2n: e.dim2n,
            b2: e.b2,
            b3: e.b3,
            b_odd_first_nonzero: e.b_odd_first_nonzero,
            h_2n_minus_3_vanishes: e.h_2n_minus_3_vanishes,
        }
    }
}

/// A JSON list of catalog entries.
pub fn parse_catalog(input: &Input) -> Result<Vec<CatalogEntry>, InputError> {
    let files: Vec<CatalogEntryFile> = input.parse()?;
    files
        .into_iter()
        .map(|f| {
            let e = CatalogEntry::from(f);
            e.validate().map_err(|err| InputError::core(&input.name, err))?;
            Ok(e)
        })
        .collect()
}

pub fn catalog_json(entries: &[CatalogEntry]) -> Value {
    serde_json::to_value(entries.iter().map(CatalogEntryFile::from).collect::<Vec<_>>()).expect("serializable")
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(input: &Input) -> Result<T, InputError> {
    input.parse()
}
