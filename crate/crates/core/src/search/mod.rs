//! Exhaustive searches over subsets of `Z_N` for `N <= 128`.

mod bits;
mod canonical;
mod spectrum;
mod survey;
mod tiling;

use serde::Serialize;

pub use bits::MAX_ORDER;
pub use canonical::{canonical_form, enumerate_canonical, OrbitMode};
pub use spectrum::find_spectrum;
pub use survey::{
    fuglede_survey, survey_stream, DualCertificate, RecordVerdict, SizeCount, SurveyDiagnostics,
    SurveyOptions, SurveyRecord, SurveyReport, SurveySummary,
};
pub use tiling::{all_tiling_complements, find_tiling_complement};

/// Result of a budgeted exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum SearchOutcome<T> {
    Found(T),
    /// The whole search space was explored without success.
    Exhausted,
    BudgetExceeded,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn as_ref(&self) -> SearchOutcome<&T> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(t),
            SearchOutcome::Exhausted => SearchOutcome::Exhausted,
            SearchOutcome::BudgetExceeded => SearchOutcome::BudgetExceeded,
        }
    }
}

/// Node counter shared by the backtracking searches.
pub(crate) struct Budget {
    remaining: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Budget {
        Budget { remaining: limit }
    }

    /// Consumes one node; `false` once the limit is reached.
    pub(crate) fn tick(&mut self) -> bool {
        if self.remaining == 0 {
            return false;
        }
        self.remaining -= 1;
        true
    }
}
