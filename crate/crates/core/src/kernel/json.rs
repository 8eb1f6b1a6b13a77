use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::StepKernel;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, rational_from_json, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueMode {
    Rational,
    Float,
}

impl std::str::FromStr for ValueMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" | "exact" => Ok(ValueMode::Rational),
            "float" | "f64" => Ok(ValueMode::Float),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// `{"row_measures": [..], "col_measures": [..], "values": [[..]], "mode": ..}`.
///
/// Numbers and strings (`"p/q"`, decimals, `"2^-k"`) are read exactly.
/// A missing `col_measures` reuses the row measures.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelJson {
    pub row_measures: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_measures: Option<Vec<Value>>,
    pub values: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ValueMode>,
}

impl KernelJson {
    pub fn to_kernel(&self) -> Result<StepKernel<Rational>> {
        let conv = |v: &[Value]| v.iter().map(rational_from_json).collect::<Result<Vec<_>>>();
        let rows = conv(&self.row_measures)?;
        let cols = match &self.col_measures {
            Some(c) => conv(c)?,
            None => rows.clone(),
        };
        let values = self.values.iter().map(|r| conv(r)).collect::<Result<Vec<_>>>()?;
        StepKernel::new(rows, cols, values)
    }

    pub fn from_kernel<S: Scalar>(k: &StepKernel<S>, mode: ValueMode) -> KernelJson {
        let enc = |x: &S| match (mode, x.to_rational()) {
            (ValueMode::Rational, Some(r)) => Value::String(format_rational(&r)),
            _ => serde_json::Number::from_f64(x.to_f64()).map_or(Value::Null, Value::Number),
        };
        KernelJson {
            row_measures: k.row_measures().iter().map(enc).collect(),
            col_measures: Some(k.col_measures().iter().map(enc).collect()),
            values: (0..k.row_count()).map(|i| k.row(i).iter().map(enc).collect()).collect(),
            mode: Some(mode),
        }
    }
}

impl StepKernel<Rational> {
    pub fn from_json_str(s: &str) -> Result<(Self, Option<ValueMode>)> {
        let parsed: KernelJson = serde_json::from_str(s)?;
        Ok((parsed.to_kernel()?, parsed.mode))
    }
}
