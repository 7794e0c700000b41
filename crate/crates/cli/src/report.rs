use qcorr::coherence::BoundsReport;
use serde::{Deserialize, Serialize};

/// What `qcorr classify` was asked to do.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    /// Builtin name or state file path.
    pub state: String,
    pub source: StateSource,
    /// Observable file, when `L` is not the projector onto the input state.
    pub observable: Option<String>,
    pub kappa: Option<f64>,
    pub delta_phi: Option<f64>,
    pub n_max: Option<usize>,
    pub seed: u64,
    pub restarts: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSource {
    Builtin,
    File,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub construction: f64,
    pub null: f64,
    pub solver: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub tolerances: Tolerances,
    /// Probability mass cut off by the Fock truncation, for CV inputs.
    pub truncated_weight: Option<f64>,
}

/// Everything `qcorr classify` prints: inputs, the bounds report and how
/// it was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub inputs: Inputs,
    #[serde(flatten)]
    pub report: BoundsReport,
    pub provenance: Provenance,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
