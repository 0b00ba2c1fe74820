//! JSON operator descriptors.

use gaplab_core::{ComplexMatrix, Operator, SymbolSpec, Tail, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: u32 = 1;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Matrix,
    Diagonal,
    ShiftedDiagonal,
    Tensor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum TailDescriptor {
    #[serde(rename = "poly")]
    Poly {
        coeffs: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        damping: Option<f64>,
    },
    #[serde(rename = "const")]
    Const { value: Pair },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDescriptor {
    #[serde(default)]
    pub prefix: Vec<Pair>,
    pub tail: TailDescriptor,
}

/// One operator. `schema` is required at the top level of a standalone file
/// and optional when embedded in a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
}

fn complex(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn invalid(at: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{at}: {msg}"))
}

impl Descriptor {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
            .collect();
        Self {
            schema: Some(SCHEMA),
            kind: Kind::Matrix,
            matrix: Some(rows),
            symbol: None,
            k: None,
            adjoint: None,
            multiplicity: None,
        }
    }

    /// Parses a standalone descriptor document.
    pub fn from_json(text: &str, at: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let d: Descriptor = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let loc = if path == "." { at.to_string() } else { format!("{at}.{path}") };
            invalid(&loc, e.inner())
        })?;
        match d.schema {
            Some(SCHEMA) => Ok(d),
            Some(v) => Err(invalid(&format!("{at}.schema"), format!("unsupported schema {v}, expected {SCHEMA}"))),
            None => Err(invalid(&format!("{at}.schema"), "missing field `schema`")),
        }
    }

    /// Builds the operator, reporting the first violated constraint with its location.
    pub fn to_operator(&self, at: &str) -> Result<Operator, CliError> {
        if let Some(v) = self.schema.filter(|&v| v != SCHEMA) {
            return Err(invalid(&format!("{at}.schema"), format!("unsupported schema {v}, expected {SCHEMA}")));
        }
        let allowed: &[&str] = match self.kind {
            Kind::Matrix => &["matrix"],
            Kind::Diagonal => &["symbol"],
            Kind::ShiftedDiagonal => &["symbol", "k", "adjoint"],
            Kind::Tensor => &["matrix", "multiplicity"],
        };
        let present = [
            ("matrix", self.matrix.is_some()),
            ("symbol", self.symbol.is_some()),
            ("k", self.k.is_some()),
            ("adjoint", self.adjoint.is_some()),
            ("multiplicity", self.multiplicity.is_some()),
        ];
        for (name, is_set) in present {
            if is_set && !allowed.contains(&name) {
                return Err(invalid(
                    &format!("{at}.{name}"),
                    format!("not allowed for kind `{}`", self.kind_name()),
                ));
            }
        }
        match self.kind {
            Kind::Matrix => Ok(Operator::Matrix(self.parse_matrix(at)?)),
            Kind::Diagonal => Ok(Operator::Diagonal(self.parse_symbol(at)?)),
            Kind::ShiftedDiagonal => {
                let k = self.k.ok_or_else(|| invalid(at, "missing field `k`"))?;
                Ok(Operator::ShiftedDiagonal {
                    k,
                    symbol: self.parse_symbol(at)?,
                    adjoint: self.adjoint.unwrap_or(false),
                })
            }
            Kind::Tensor => {
                let inner = self.parse_matrix(at)?;
                let multiplicity = self
                    .multiplicity
                    .ok_or_else(|| invalid(at, "missing field `multiplicity`"))?;
                if multiplicity == 0 {
                    return Err(invalid(&format!("{at}.multiplicity"), "must be at least 1"));
                }
                Ok(Operator::TensorExtended {
                    inner,
                    multiplicity,
                })
            }
        }
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Matrix => "matrix",
            Kind::Diagonal => "diagonal",
            Kind::ShiftedDiagonal => "shifted_diagonal",
            Kind::Tensor => "tensor",
        }
    }

    fn parse_matrix(&self, at: &str) -> Result<ComplexMatrix, CliError> {
        let rows = self
            .matrix
            .as_ref()
            .ok_or_else(|| invalid(at, "missing field `matrix`"))?;
        let at = format!("{at}.matrix");
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(invalid(&at, "matrix must have at least one row and one column"));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(invalid(
                    &format!("{at}[{i}]"),
                    format!("row has {} entries, expected {cols}", row.len()),
                ));
            }
            entries.extend(row.iter().map(complex));
        }
        ComplexMatrix::from_row_major(rows.len(), cols, entries).map_err(|e| invalid(&at, e))
    }

    fn parse_symbol(&self, at: &str) -> Result<SymbolSpec, CliError> {
        let s = self
            .symbol
            .as_ref()
            .ok_or_else(|| invalid(at, "missing field `symbol`"))?;
        let at = format!("{at}.symbol");
        let tail_at = format!("{at}.tail");
        let tail = match &s.tail {
            TailDescriptor::Poly { coeffs, damping } => {
                if coeffs.is_empty() {
                    return Err(invalid(&format!("{tail_at}.coeffs"), "needs at least one coefficient"));
                }
                Tail::damped_polynomial(coeffs.clone(), damping.unwrap_or(1.0))
            }
            TailDescriptor::Const { value } => Tail::constant(complex(value)),
        }
        .map_err(|e| invalid(&tail_at, e))?;
        let prefix = s.prefix.iter().map(complex).collect();
        SymbolSpec::new(prefix, tail).map_err(|e| invalid(&format!("{at}.prefix"), e))
    }
}
