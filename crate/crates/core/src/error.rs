use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("drive too weak to fire: plateau {plateau} V does not exceed threshold {v_th} V")]
    DriveTooWeak { plateau: f64, v_th: f64 },

    #[error("target interval {target} ms is not longer than the refractory period {t_refract} ms")]
    Infeasible { target: f64, t_refract: f64 },

    #[error("non-finite membrane potential on neuron {neuron} at t = {time_ms} ms")]
    NumericFault { neuron: usize, time_ms: f64 },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
