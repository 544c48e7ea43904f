//! Error kinds and their exit codes.

use std::fmt;
use wsfbm_core::bench::BenchError;
use wsfbm_core::inference::InferenceError;
use wsfbm_core::kernels::KernelError;
use wsfbm_core::processes::ProcessError;
use wsfbm_core::quadrature::QuadError;
use wsfbm_core::rdkernels::RdKernelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config file or input file.
    #[error("configuration error: {0}")]
    Config(String),
    /// The numerics failed for a valid configuration.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// An optimizer stopped without converging; outputs were still written.
    #[error("not converged: {0}")]
    NotConverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::NotConverged(_) => 4,
        }
    }

    pub fn config(msg: impl fmt::Display) -> Self {
        CliError::Config(msg.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<QuadError> for CliError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::InvalidConfig(_) | QuadError::InvalidDomain(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::InvalidParameter(_) | KernelError::Unsupported(_) | KernelError::Hypothesis(_) => {
                CliError::Config(e.to_string())
            }
            KernelError::Quadrature(q) => q.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ProcessError> for CliError {
    fn from(e: ProcessError) -> Self {
        match e {
            ProcessError::InvalidParameter(_) => CliError::Config(e.to_string()),
            ProcessError::Kernel(k) => k.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<InferenceError> for CliError {
    fn from(e: InferenceError) -> Self {
        match e {
            InferenceError::InvalidInput(_) => CliError::Config(e.to_string()),
            InferenceError::NotConverged(_) => CliError::NotConverged(e.to_string()),
            InferenceError::Kernel(k) => k.into(),
            InferenceError::Process(p) => p.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<RdKernelError> for CliError {
    fn from(e: RdKernelError) -> Self {
        match e {
            RdKernelError::Quadrature(q) => q.into(),
            RdKernelError::SpecFun(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::InvalidConfig(_) | BenchError::Unsupported(_) => CliError::Config(e.to_string()),
            BenchError::Kernel(k) => k.into(),
            BenchError::Inference(i) => i.into(),
            BenchError::ThreadPool(_) => CliError::Numerical(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(KernelError::InvalidParameter("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(KernelError::NotPositiveDefinite { jitter: 1.0, trace: 1.0 }).exit_code(), 3);
        assert_eq!(CliError::from(InferenceError::NotConverged("x".into())).exit_code(), 4);
        assert_eq!(CliError::from(BenchError::Unsupported("m".into())).exit_code(), 2);
        assert_eq!(CliError::from(ProcessError::Factorization("f".into())).exit_code(), 3);
    }
}
