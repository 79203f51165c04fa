//! The JSON job format.

use std::collections::BTreeMap;
use std::fmt;

use chern_core::sampler::SampleConfig;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::dispatch::FieldChoice;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub ring: RingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ideals: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operations: Vec<Operation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleConfig>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameter_modules: BTreeMap<String, ParameterModuleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub random_parameter_modules: Vec<RandomParameterModules>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Claims::is_empty")]
    pub claims: Claims,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldChoice>,
    pub variables: Vec<String>,
}

/// Exactly one of `ideal`, `relations` or `direct_sum`.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    /// `S / I`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<String>>,
    /// Generator degrees of the cover; zeros when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<i32>>,
    /// Relations as columns with one entry per generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct_sum: Option<Vec<ModuleSpec>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Operation {
    Dimension,
    Length,
    HilbertSeries,
    Resolution,
    Cohomology,
    UnmixedComponent,
    Classify,
    EstimateLambda,
    EstimateXi,
    HilbertSamuel { ideal: String, n: usize },
    HilbertCoefficients { ideal: String },
    Koszul { ideal: String },
    Chi1Recursion { ideal: String },
    Superficial { ideal: String },
    Hdeg { ideal: String },
    DSequence { ideal: String },
    HilbertCharacteristic { ideal: String },
    QuasiDegree { ideal: String },
    BettiBound { ideal: String },
    BuchsbaumRim { module: String },
    BrTable { module: String, n: usize },
}

impl Operation {
    pub fn label(&self) -> &'static str {
        match self {
            Operation::Dimension => "dimension",
            Operation::Length => "length",
            Operation::HilbertSeries => "hilbert-series",
            Operation::Resolution => "resolution",
            Operation::Cohomology => "cohomology",
            Operation::UnmixedComponent => "unmixed-component",
            Operation::Classify => "classify",
            Operation::EstimateLambda => "estimate-lambda",
            Operation::EstimateXi => "estimate-xi",
            Operation::HilbertSamuel { .. } => "hilbert-samuel",
            Operation::HilbertCoefficients { .. } => "hilbert-coefficients",
            Operation::Koszul { .. } => "koszul",
            Operation::Chi1Recursion { .. } => "chi1-recursion",
            Operation::Superficial { .. } => "superficial",
            Operation::Hdeg { .. } => "hdeg",
            Operation::DSequence { .. } => "d-sequence",
            Operation::HilbertCharacteristic { .. } => "hilbert-characteristic",
            Operation::QuasiDegree { .. } => "quasi-degree",
            Operation::BettiBound { .. } => "betti-bound",
            Operation::BuchsbaumRim { .. } => "buchsbaum-rim",
            Operation::BrTable { .. } => "br-table",
        }
    }

    pub fn target(&self) -> Option<&str> {
        match self {
            Operation::HilbertSamuel { ideal, .. }
            | Operation::HilbertCoefficients { ideal }
            | Operation::Koszul { ideal }
            | Operation::Chi1Recursion { ideal }
            | Operation::Superficial { ideal }
            | Operation::Hdeg { ideal }
            | Operation::DSequence { ideal }
            | Operation::HilbertCharacteristic { ideal }
            | Operation::QuasiDegree { ideal }
            | Operation::BettiBound { ideal } => Some(ideal),
            Operation::BuchsbaumRim { module } | Operation::BrTable { module, .. } => Some(module),
            _ => None,
        }
    }
}

/// `E = im(φ) ⊆ R^rank` over `R = S / ideal`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParameterModuleSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ring_ideal: Vec<String>,
    pub rank: usize,
    pub columns: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "BrClaims::is_empty")]
    pub claims: BrClaims,
}

/// Random parameter modules with linear entries over `S / ring_ideal`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RandomParameterModules {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ring_ideal: Vec<String>,
    pub rank: usize,
    pub count: usize,
}

/// `Q = (x_1^ℓ, x_2, ..., x_r)` for each `ℓ`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub sop: Vec<String>,
    pub powers: Vec<u32>,
}

/// Expected properties, compared against computed ones by the check suite.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Claims {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohen_macaulay: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unmixed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generalized_cm: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buchsbaum: Option<bool>,
    /// `h^j` for `j < dim`, `null` for infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Option<u64>>>,
    /// Distinct sampled values of `e_1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    /// `hdeg` with respect to named ideals.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub hdeg: BTreeMap<String, u64>,
    /// Coefficients `e_0..e_r` with respect to named ideals.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coefficients: BTreeMap<String, Vec<i64>>,
}

impl Claims {
    pub fn is_empty(&self) -> bool {
        *self == Claims::default()
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BrClaims {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub br: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub br1: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality_case: Option<bool>,
}

impl BrClaims {
    pub fn is_empty(&self) -> bool {
        *self == BrClaims::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl Serialize for FieldChoice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FieldChoice::Prime(p) => s.serialize_u64(*p),
            FieldChoice::Rationals => s.serialize_str("QQ"),
        }
    }
}

impl<'de> Deserialize<'de> for FieldChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = FieldChoice;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a supported prime or \"QQ\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<FieldChoice, E> {
                FieldChoice::from_prime(v).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<FieldChoice, E> {
                u64::try_from(v).map_err(|_| E::custom("negative characteristic")).and_then(|v| self.visit_u64(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<FieldChoice, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}
