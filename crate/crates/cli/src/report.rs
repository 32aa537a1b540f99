//! Stable JSON shapes for `--json` output.

use holorec::holonomic::IndexConvention;
use holorec::{RecurrenceOperator, SequenceTable, VerifyReport};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureJson {
    pub n: i64,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub pass: bool,
    pub n_min_checked: i64,
    pub n_max_checked: i64,
    pub first_failure: Option<FailureJson>,
    pub failures: Vec<i64>,
}

impl From<&VerifyReport> for VerifyJson {
    fn from(r: &VerifyReport) -> Self {
        VerifyJson {
            pass: r.pass,
            n_min_checked: r.n_min_checked,
            n_max_checked: r.n_max_checked,
            first_failure: r.first_failure.as_ref().map(|(n, res)| FailureJson {
                n: *n,
                residual: res.to_string(),
            }),
            failures: r.failures.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceJson {
    pub recurrence: String,
    pub order: usize,
    pub degree: usize,
    pub n_min: i64,
    pub zero_below_offset: bool,
    /// `coefficients[k][j]` is the coefficient of `n^j` in `p_k(n)`.
    pub coefficients: Vec<Vec<String>>,
}

impl From<&RecurrenceOperator> for RecurrenceJson {
    fn from(r: &RecurrenceOperator) -> Self {
        RecurrenceJson {
            recurrence: r.to_string(),
            order: r.order(),
            degree: r.degree(),
            n_min: r.n_min(),
            zero_below_offset: r.convention() == IndexConvention::ZeroBelowOffset,
            coefficients: r
                .coeffs()
                .iter()
                .map(|p| p.coeffs().iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessJson {
    pub max_order: usize,
    pub max_degree: usize,
    pub terms_used: usize,
    pub candidates: Vec<RecurrenceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermsJson {
    pub offset: i64,
    pub terms: Vec<String>,
}

impl From<&SequenceTable> for TermsJson {
    fn from(t: &SequenceTable) -> Self {
        TermsJson {
            offset: t.offset(),
            terms: t.terms().iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeCheckJson {
    pub operator: String,
    pub series_order: usize,
    pub checked_mod: usize,
    pub zero: bool,
    pub first_nonzero: Option<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfCheckJson {
    pub pass: bool,
    pub ode: OdeCheckJson,
    pub recurrence: String,
    pub unrolled: VerifyJson,
    pub against: Option<VerifyJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub x0: String,
    pub order: usize,
    pub series: String,
    /// `n! [t^n]` for `n = 0..=order`.
    pub egf_values: Vec<String>,
}
