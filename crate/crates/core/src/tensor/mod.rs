//! Tucker decomposition of the subject-verb-object tensor, used to propose
//! missing triples.

mod linalg;
mod tensor3;
mod tucker;

use thiserror::Error;

use crate::kg::SceneError;

pub use linalg::{symmetric_eigen, Matrix};
pub use tensor3::{build_tensor, extract_svo, Tensor3};
pub use tucker::{complete, hooi, reconstruct, CompletionCandidate, TuckerFactors};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("rank {rank} for mode {mode} is outside 1..={dim}")]
    RankOutOfRange { mode: usize, rank: usize, dim: usize },
    #[error("no scene yields a subject-verb-object triple")]
    EmptyExtraction,
    #[error(transparent)]
    Scene(#[from] SceneError),
}

impl TensorError {
    pub fn code(&self) -> &'static str {
        match self {
            TensorError::RankOutOfRange { .. } => "RANK_OUT_OF_RANGE",
            TensorError::EmptyExtraction => "EMPTY_EXTRACTION",
            TensorError::Scene(_) => "SCENE_ERROR",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_core_and_factors_reproduce_the_core() {
        let core: Vec<f64> = (0..8).map(|x| x as f64).collect();
        let f = TuckerFactors {
            ranks: [2, 2, 2],
            core: core.clone(),
            factors: std::array::from_fn(|_| Matrix::identity(2)),
            fits: vec![0.0],
        };
        assert_eq!(reconstruct(&f).data, core);
        let zero = TuckerFactors {
            core: vec![0.0; 8],
            ..f
        };
        assert!(reconstruct(&zero).data.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rank_bounds() {
        let t = Tensor3::from_triples(&[("a", "p", "b")]);
        assert_eq!(hooi(&t, [2, 1, 1], 5, 0).unwrap_err().code(), "RANK_OUT_OF_RANGE");
        assert_eq!(hooi(&t, [0, 1, 1], 5, 0).unwrap_err().code(), "RANK_OUT_OF_RANGE");
    }

    #[test]
    fn single_cell_full_rank_scores_zero() {
        let t = Tensor3::from_fn([2, 2, 2], |i, j, k| if (i, j, k) == (0, 0, 0) { 1.0 } else { 0.0 });
        let f = hooi(&t, [2, 2, 2], 10, 1).unwrap();
        let cands = complete(&t, &f, 100);
        assert_eq!(cands.len(), 7);
        assert!(cands.iter().all(|c| c.score.abs() < 1e-9));
    }
}
