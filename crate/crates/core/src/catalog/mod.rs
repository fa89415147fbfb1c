//! The family catalog: a versioned JSON document holding every family's
//! weights, equation, singular locus, ledger data and stability table.

mod validate;

use std::collections::BTreeMap;
use std::io::Read;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::FamilySpec;

pub use validate::{validate_catalog, validate_family, IR, RE};

pub const FORMAT_VERSION: u32 = 1;

static REFERENCE: &str = include_str!("../../data/catalog.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("empty catalog document")]
    Empty,
    #[error("syntax error at line {line}, column {column} (field `{path}`): {message}")]
    Syntax {
        line: usize,
        column: usize,
        path: String,
        message: String,
    },
    #[error("unknown catalog version {0} (expected {FORMAT_VERSION})")]
    UnknownVersion(u32),
    #[error("duplicate family number {0}")]
    Duplicate(u32),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Where a catalog field comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Paper,
    Reconstructed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub version: u32,
    pub families: BTreeMap<u32, FamilySpec>,
    /// Families whose α-invariant is known to equal one.
    pub alpha_one: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    alpha_one: Vec<u32>,
    families: Vec<FamilySpec>,
}

#[derive(Deserialize)]
struct Header {
    version: u32,
}

impl Catalog {
    pub fn family(&self, no: u32) -> Option<&FamilySpec> {
        self.families.get(&no)
    }

    pub fn family_mut(&mut self, no: u32) -> Option<&mut FamilySpec> {
        self.families.get_mut(&no)
    }

    pub fn families(&self) -> impl Iterator<Item = &FamilySpec> {
        self.families.values()
    }

    /// Paper-stated versus reconstructed, per flagged field.
    pub fn provenance(&self) -> BTreeMap<String, Provenance> {
        let mut out = BTreeMap::new();
        let tag = |r: bool| if r { Provenance::Reconstructed } else { Provenance::Paper };
        for f in self.families() {
            let no = f.no;
            if let Some(eq) = &f.equation {
                out.insert(format!("{no}.equation"), tag(eq.reconstructed));
            }
            let Some(l) = &f.ledger else { continue };
            let mut put = |field: &str, r: bool| {
                out.insert(format!("{no}.ledger.{field}"), tag(r));
            };
            if let Some(x) = &l.hy {
                put("hy", x.reconstructed);
            }
            if let Some(x) = &l.hx {
                put("hx", x.reconstructed);
            }
            if let Some(x) = &l.decomposition {
                put("decomposition", x.reconstructed);
            }
            if let Some(x) = &l.meeting {
                put("meeting", x.reconstructed);
            }
            if let Some(x) = &l.residual {
                put("residual", x.reconstructed);
            }
            if l.complete_intersection.is_some() {
                put("complete_intersection", false);
            }
            if l.contraction.is_some() {
                put("contraction", false);
            }
            if l.dstar.is_some() {
                put("dstar", false);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = Document {
            version: self.version,
            alpha_one: self.alpha_one.clone(),
            families: self.families.values().cloned().collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("catalog serializes");
        s.push('\n');
        s
    }
}

fn syntax(e: serde_path_to_error::Error<serde_json::Error>) -> CatalogError {
    let path = e.path().to_string();
    let inner = e.into_inner();
    CatalogError::Syntax {
        line: inner.line(),
        column: inner.column(),
        path,
        message: inner.to_string(),
    }
}

pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    if text.trim().is_empty() {
        return Err(CatalogError::Empty);
    }
    let header: Header = serde_path_to_error::deserialize(&mut serde_json::Deserializer::from_str(text))
        .map_err(syntax)?;
    if header.version != FORMAT_VERSION {
        return Err(CatalogError::UnknownVersion(header.version));
    }
    let doc: Document = serde_path_to_error::deserialize(&mut serde_json::Deserializer::from_str(text))
        .map_err(syntax)?;
    let mut families = BTreeMap::new();
    for f in doc.families {
        let no = f.no;
        if families.insert(no, f).is_some() {
            return Err(CatalogError::Duplicate(no));
        }
    }
    Ok(Catalog {
        version: doc.version,
        families,
        alpha_one: doc.alpha_one,
    })
}

pub fn load_catalog(mut source: impl Read) -> Result<Catalog, CatalogError> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| CatalogError::Io(e.to_string()))?;
    parse_catalog(&text)
}

/// The shipped reference catalog.
pub fn reference_catalog() -> &'static Catalog {
    static CELL: OnceLock<Catalog> = OnceLock::new();
    CELL.get_or_init(|| parse_catalog(REFERENCE).expect("reference catalog parses"))
}

pub fn reference_json() -> &'static str {
    REFERENCE
}
