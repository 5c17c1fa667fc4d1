//! Serializable records for state files and reports.
//!
//! A state file is a flat document `{"dim": n, "re": [...], "im": [...]}`
//! so it can be produced from any tool without a complex-number encoding.
//! The embedded `e_plus`/`e_minus` records of a solve report use the same
//! layout and therefore re-parse as state files.

use qbrach_core::{Complex, ComplexMatrix64, StateVector64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateRecord {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StateRecord {
    pub fn from_state(state: &StateVector64) -> Self {
        StateRecord {
            dim: state.dim(),
            re: state.amplitudes().iter().map(|z| z.re).collect(),
            im: state.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &ComplexMatrix64) -> Self {
        let n = m.dim();
        let rows = |pick: fn(Complex<f64>) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| pick(m.get(i, j))).collect())
                .collect()
        };
        MatrixRecord {
            dim: n,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DistanceRecord {
    pub theta_rad: f64,
    pub theta_deg: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveRecord {
    pub theta: f64,
    pub omega: f64,
    pub hbar: f64,
    pub convention: String,
    pub hamiltonian: MatrixRecord,
    pub e_plus: StateRecord,
    pub e_minus: StateRecord,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub delta_h: f64,
    pub tau: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AuditRecord {
    pub tau_star: f64,
    pub spread: f64,
    pub threshold: f64,
    pub trials: usize,
    pub n_arrivals: usize,
    pub n_beaten: usize,
    pub best_competitor_time: Option<f64>,
    pub best_gap_relative: Option<f64>,
    pub hill_history: Vec<f64>,
    pub verdict: String,
}
