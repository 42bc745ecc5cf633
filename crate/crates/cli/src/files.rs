//! JSON input and output formats. Scalars are always strings.

use std::fmt;
use std::path::Path;

use helly_core::set_family::SetFamily;
use helly_core::{FieldSpec, Matrix, NamedOperator, OperatorFamily, Scalar, Subspace};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Input problems, reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<helly_core::Error> for InputError {
    fn from(e: helly_core::Error) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDescriptor {
    Name(String),
    Prime {
        #[serde(rename = "GF")]
        gf: u64,
    },
}

impl FieldDescriptor {
    pub fn resolve(&self) -> Result<FieldSpec, InputError> {
        match self {
            FieldDescriptor::Name(s) => s
                .parse()
                .map_err(|e: helly_core::Error| InputError(e.to_string())),
            FieldDescriptor::Prime { gf } => Ok(FieldSpec::prime(*gf)?),
        }
    }
}

impl From<FieldSpec> for FieldDescriptor {
    fn from(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Rationals => FieldDescriptor::Name("Q".into()),
            FieldSpec::Prime(p) => FieldDescriptor::Prime { gf: p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorEntry {
    pub name: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub field: FieldDescriptor,
    pub dim: usize,
    pub operators: Vec<OperatorEntry>,
}

impl FamilyFile {
    pub fn from_family(fam: &OperatorFamily) -> Self {
        FamilyFile {
            field: fam.field().into(),
            dim: fam.dim(),
            operators: fam
                .operators()
                .iter()
                .map(|op| OperatorEntry {
                    name: op.name.clone(),
                    matrix: op.matrix.to_strings(),
                })
                .collect(),
        }
    }

    pub fn into_family(self) -> Result<OperatorFamily, InputError> {
        let field = self.field.resolve()?;
        let mut ops = Vec::with_capacity(self.operators.len());
        for entry in self.operators {
            if entry.matrix.len() != self.dim || entry.matrix.iter().any(|r| r.len() != self.dim) {
                return Err(InputError(format!(
                    "operator {} is not {d}x{d}",
                    entry.name,
                    d = self.dim
                )));
            }
            let matrix = Matrix::parse(field, &entry.matrix)
                .map_err(|e| InputError(format!("operator {}: {e}", entry.name)))?;
            ops.push(NamedOperator {
                name: entry.name,
                matrix,
            });
        }
        Ok(OperatorFamily::new(field, self.dim, ops)?)
    }

    /// Canonical text: sorted keys, no whitespace, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("family files serialize");
        format!("{}\n", serde_json::to_string(&v).expect("values serialize"))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFamilyFile {
    pub q: usize,
    pub members: Vec<Vec<usize>>,
}

/// One subspace as a list of spanning rows, or several keyed by operator
/// name or listed in order.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SubspaceListFile {
    Named(std::collections::BTreeMap<String, Vec<Vec<String>>>),
    Ordered(Vec<Vec<Vec<String>>>),
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| {
        InputError(format!(
            "{}:{}:{}: {}",
            path.display(),
            e.line(),
            e.column(),
            strip_position(&e.to_string())
        ))
    })
}

fn strip_position(msg: &str) -> &str {
    msg.rfind(" at line ").map_or(msg, |i| &msg[..i])
}

pub fn load_family(path: &Path) -> Result<OperatorFamily, InputError> {
    let text = read(path)?;
    let file: FamilyFile = parse_json(path, &text)?;
    file.into_family()
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn load_set_family(path: &Path) -> Result<SetFamily, InputError> {
    let text = read(path)?;
    let file: SetFamilyFile = parse_json(path, &text)?;
    SetFamily::new(file.q, &file.members)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn subspace_from_rows(
    field: FieldSpec,
    dim: usize,
    rows: &[Vec<String>],
) -> Result<Subspace, InputError> {
    let vectors = rows
        .iter()
        .map(|row| {
            if row.len() != dim {
                return Err(InputError(format!(
                    "basis vector of length {} in dimension {dim}",
                    row.len()
                )));
            }
            row.iter()
                .map(|s| Scalar::parse(s, field).map_err(InputError::from))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subspace::span(field, dim, &vectors)?)
}

/// Loads one subspace per operator other than `a0`, aligned with family
/// order.
pub fn load_subspaces(
    path: &Path,
    fam: &OperatorFamily,
    a0: usize,
) -> Result<Vec<Subspace>, InputError> {
    let text = read(path)?;
    let file: Value = parse_json(path, &text)?;
    let file: SubspaceListFile = serde_json::from_value(file).map_err(|_| {
        InputError(format!(
            "{}: expected an object of operator name -> basis rows, or a list of basis-row lists",
            path.display()
        ))
    })?;
    let others: Vec<usize> = (0..fam.len()).filter(|&j| j != a0).collect();
    let rows: Vec<Vec<Vec<String>>> = match file {
        SubspaceListFile::Ordered(list) => {
            if list.len() != others.len() {
                return Err(InputError(format!(
                    "{}: {} subspaces for {} operators besides {}",
                    path.display(),
                    list.len(),
                    others.len(),
                    fam.name(a0)
                )));
            }
            list
        }
        SubspaceListFile::Named(mut map) => {
            let mut out = Vec::with_capacity(others.len());
            for &j in &others {
                out.push(map.remove(fam.name(j)).ok_or_else(|| {
                    InputError(format!(
                        "{}: no subspace for operator {}",
                        path.display(),
                        fam.name(j)
                    ))
                })?);
            }
            if let Some(extra) = map.keys().next() {
                return Err(InputError(format!(
                    "{}: unexpected entry {extra:?}",
                    path.display()
                )));
            }
            out
        }
    };
    rows.iter()
        .zip(&others)
        .map(|(r, &j)| {
            subspace_from_rows(fam.field(), fam.dim(), r).map_err(|e| {
                InputError(format!(
                    "{}: subspace for {}: {e}",
                    path.display(),
                    fam.name(j)
                ))
            })
        })
        .collect()
}
