//! File formats shared between the library and the command-line tool.
//!
//! One file holds one object. Matrices are stored as separate row-major
//! real and imaginary parts in the lexicographic mode-assignment basis:
//!
//! - state: `{"M": 2, "N": 2, "re": [[...]], "im": [[...]]}`
//! - unitary: `{"re": [[...]], "im": [[...]]}` (M × M)
//! - purification vector: `{"M": 2, "N": 2, "re": [...], "im": [...]}`
//!   with `M^(2N)` entries on the doubled space
//! - records: `{"M": 2, "N": 2, "records": [{"unitary": ...,
//!   "distribution": [{"m": [2, 0], "p": 0.5}, ...]}]}`
//!
//! Distribution tables are CSV with columns `m_1..m_M, probability` in
//! colexicographic occupation order; bound tables are CSV with columns
//! `N, p2, lower_closed, upper_closed, lower_lp, upper_lp`.

use crate::distinguishability::Certificate;
use crate::error::{Error, Result};
use crate::interferometer::{ModeOccupation, OutcomeDistribution};
use crate::measures::BoundResult;
use crate::operator::{DenseOperator, ModeAssignment, StateVector};
use crate::scalar::to_f64;
use crate::states::InvariantState;
use crate::tensor_rep::SchurBlocks;
use crate::tomography::{MeasurementRecord, ReconstructionReport};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

type C64 = num_complex::Complex<f64>;

/// JSON form of a density operator on (C^M)^⊗N.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateJson {
    pub fn from_state(state: &InvariantState<f64>) -> Self {
        Self::from_operator(state.operator(), state.modes(), state.particles())
    }

    pub fn from_operator(op: &DenseOperator<f64>, m: usize, n: usize) -> Self {
        let dim = op.dim();
        let re = (0..dim)
            .map(|r| (0..dim).map(|c| op.matrix()[(r, c)].re).collect())
            .collect();
        let im = (0..dim)
            .map(|r| (0..dim).map(|c| op.matrix()[(r, c)].im).collect())
            .collect();
        StateJson { m, n, re, im }
    }

    /// Rebuilds the raw operator (no certification).
    pub fn to_operator(&self) -> Result<DenseOperator<f64>> {
        let dim = crate::operator::space_dim(self.m, self.n)?;
        check_matrix_shape(&self.re, dim, "re")?;
        check_matrix_shape(&self.im, dim, "im")?;
        let mat = DMatrix::from_fn(dim, dim, |r, c| C64::new(self.re[r][c], self.im[r][c]));
        DenseOperator::from_matrix(self.m, self.n, mat)
    }

    /// Rebuilds and certifies the state.
    pub fn to_state(&self) -> Result<InvariantState<f64>> {
        InvariantState::certify(self.to_operator()?)
    }
}

fn check_matrix_shape(rows: &[Vec<f64>], dim: usize, what: &str) -> Result<()> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Shape(format!(
            "field '{what}' must be a {dim}x{dim} matrix"
        )));
    }
    Ok(())
}

/// JSON form of a single-particle unitary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitaryJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl UnitaryJson {
    pub fn from_matrix(u: &DMatrix<C64>) -> Self {
        UnitaryJson {
            re: (0..u.nrows())
                .map(|r| (0..u.ncols()).map(|c| u[(r, c)].re).collect())
                .collect(),
            im: (0..u.nrows())
                .map(|r| (0..u.ncols()).map(|c| u[(r, c)].im).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<C64>> {
        let rows = self.re.len();
        if rows == 0 || self.im.len() != rows {
            return Err(Error::Shape("unitary parts have mismatched shapes".into()));
        }
        if self
            .re
            .iter()
            .chain(self.im.iter())
            .any(|r| r.len() != rows)
        {
            return Err(Error::Shape("unitary must be square".into()));
        }
        Ok(DMatrix::from_fn(rows, rows, |r, c| {
            C64::new(self.re[r][c], self.im[r][c])
        }))
    }
}

/// JSON form of a pure state vector on the doubled space
/// (C^M)^⊗N ⊗ (C^M)^⊗N, as produced by the symmetric purification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl VectorJson {
    pub fn from_vector(v: &StateVector<f64>, m: usize, n: usize) -> Self {
        VectorJson {
            m,
            n,
            re: v.iter().map(|x| x.re).collect(),
            im: v.iter().map(|x| x.im).collect(),
        }
    }

    pub fn to_vector(&self) -> Result<StateVector<f64>> {
        if self.re.len() != self.im.len() {
            return Err(Error::Shape("vector parts have mismatched lengths".into()));
        }
        Ok(StateVector::from_iterator(
            self.re.len(),
            self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)),
        ))
    }
}

/// One (occupation, probability) row of a distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionEntryJson {
    pub m: Vec<usize>,
    pub p: f64,
}

/// One tomography record: setting unitary plus recorded distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    pub unitary: UnitaryJson,
    pub distribution: Vec<DistributionEntryJson>,
}

/// A full experiment record file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordsJson {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub records: Vec<RecordJson>,
}

impl RecordsJson {
    pub fn from_records(records: &[MeasurementRecord<f64>], m: usize, n: usize) -> Self {
        RecordsJson {
            m,
            n,
            records: records
                .iter()
                .map(|r| RecordJson {
                    unitary: UnitaryJson::from_matrix(&r.unitary),
                    distribution: r
                        .distribution
                        .entries()
                        .iter()
                        .map(|(occ, p)| DistributionEntryJson {
                            m: occ.counts().to_vec(),
                            p: *p,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_records(&self) -> Result<Vec<MeasurementRecord<f64>>> {
        self.records
            .iter()
            .map(|r| {
                let unitary = r.unitary.to_matrix()?;
                let mut entries = Vec::with_capacity(r.distribution.len());
                for e in &r.distribution {
                    if e.m.len() != self.m {
                        return Err(Error::Shape(format!(
                            "occupation {:?} does not have {} modes",
                            e.m, self.m
                        )));
                    }
                    entries.push((ModeOccupation::new(e.m.clone())?, e.p));
                }
                Ok(MeasurementRecord {
                    unitary,
                    distribution: OutcomeDistribution::from_entries(entries, self.m, self.n)?,
                })
            })
            .collect()
    }
}

/// JSON form of a distinguishability certificate, optionally extended with
/// the canonical-form assignments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: String,
    pub multiplicities: Vec<usize>,
    pub witness_cycle_type: Option<Vec<usize>>,
    pub symmetric_weight: f64,
    pub degenerate: bool,
    pub assignments: Option<Vec<Vec<usize>>>,
}

impl CertificateJson {
    pub fn from_certificate(
        cert: &Certificate<f64>,
        assignments: Option<&[ModeAssignment]>,
    ) -> Self {
        CertificateJson {
            verdict: if cert.distinguishable {
                "perfectly_distinguishable".into()
            } else {
                "not".into()
            },
            multiplicities: cert.multiplicities.clone(),
            witness_cycle_type: cert
                .witness
                .as_ref()
                .map(|(class, _)| class.parts().to_vec()),
            symmetric_weight: cert.symmetric_weight,
            degenerate: cert.degenerate,
            assignments: assignments
                .map(|list| list.iter().map(|a| a.entries().to_vec()).collect()),
        }
    }
}

/// One Schur-Weyl block in a measurement report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchurWeightJson {
    pub partition: Vec<usize>,
    pub weight: f64,
    pub irrep_dim: usize,
    pub multiplicity: usize,
}

/// Report of the `measure` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureReportJson {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    /// p_k for k = 2..=N, keyed "p2", "p3", ...
    pub p: std::collections::BTreeMap<String, f64>,
    pub schur_weights: Vec<SchurWeightJson>,
    /// Trace distance between ρ and its indistinguishable part; equals
    /// 1 - p_N when the state has symmetric support.
    pub trace_distance_to_indistinguishable: Option<f64>,
    pub one_minus_p_n: f64,
}

impl MeasureReportJson {
    pub fn from_blocks(
        blocks: &SchurBlocks<f64>,
        p_values: &[(usize, f64)],
        trace_distance: Option<f64>,
    ) -> Self {
        let p_n = p_values.last().map(|&(_, v)| v).unwrap_or(0.0);
        MeasureReportJson {
            m: blocks.modes,
            n: blocks.particles,
            p: p_values
                .iter()
                .map(|&(k, v)| (format!("p{k}"), v))
                .collect(),
            schur_weights: blocks
                .blocks
                .iter()
                .map(|b| SchurWeightJson {
                    partition: b.partition.parts().to_vec(),
                    weight: b.weight,
                    irrep_dim: b.irrep_dim,
                    multiplicity: b.multiplicity,
                })
                .collect(),
            trace_distance_to_indistinguishable: trace_distance,
            one_minus_p_n: 1.0 - p_n,
        }
    }
}

/// Report of the tomography command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructionReportJson {
    pub residual: f64,
    pub rank: usize,
    pub dimension: usize,
    pub settings: usize,
    pub clipped_mass: f64,
}

impl ReconstructionReportJson {
    pub fn from_report(r: &ReconstructionReport<f64>) -> Self {
        ReconstructionReportJson {
            residual: r.residual,
            rank: r.rank,
            dimension: r.dimension,
            settings: r.settings,
            clipped_mass: r.clipped_mass,
        }
    }
}

/// Machine-readable error emitted by the CLI on stderr.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorJson {
    pub error: String,
    pub message: String,
}

impl ErrorJson {
    pub fn from_error(e: &Error) -> Self {
        let kind = match e {
            Error::Size(_) => "size",
            Error::Shape(_) => "shape",
            Error::Validation(_) => "validation",
            Error::Domain(_) => "domain",
            Error::Invariance(_) => "invariance",
            Error::NotDensity(_) => "not_density",
            Error::NoSymmetricSupport { .. } => "no_symmetric_support",
            Error::Degeneracy(_) => "degeneracy",
            Error::Infeasible(_) => "infeasible",
            Error::NotRegular(_) => "not_regular",
            Error::NotDistinguishable(_) => "not_distinguishable",
            Error::Underdetermined { .. } => "underdetermined",
            Error::Conditioning(_) => "conditioning",
        };
        ErrorJson {
            error: kind.into(),
            message: e.to_string(),
        }
    }
}

/// CSV table of a distribution: columns m_1..m_M, probability, in the
/// stored (colexicographic) order.
pub fn distribution_csv(dist: &OutcomeDistribution<f64>, modes: usize) -> String {
    let mut out = String::new();
    for j in 1..=modes {
        out.push_str(&format!("m_{j},"));
    }
    out.push_str("probability\n");
    for (occ, p) in dist.entries() {
        for c in occ.counts() {
            out.push_str(&format!("{c},"));
        }
        out.push_str(&format!("{p}\n"));
    }
    out
}

/// CSV table of bound rows: N, p2, closed forms and the exact solver.
pub fn bounds_csv(rows: &[BoundResult]) -> String {
    let mut out = String::from("N,p2,lower_closed,upper_closed,lower_lp,upper_lp\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            ratio_to_f64(r.p2),
            ratio_to_f64(r.lower_closed),
            ratio_to_f64(r.upper_closed),
            ratio_to_f64(r.lower_lp),
            ratio_to_f64(r.upper_lp),
        ));
    }
    out
}

fn ratio_to_f64(r: crate::symgroup::Rational) -> f64 {
    to_f64(crate::scalar::from_ratio::<f64>(r))
}

/// Serializes any of the JSON types with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Validation(format!("serialization failed: {e}")))
}

/// Parses a JSON document into one of the schema types.
pub fn from_json_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Validation(format!("malformed JSON: {e}")))
}
