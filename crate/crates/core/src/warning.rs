use core::fmt;

/// Non-fatal diagnostics. The core never logs; callers decide what to do
/// with these.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The integration step is coarse relative to the membrane time constant.
    CoarseTimeStep { dt: f64, tau: f64 },
    /// The graph has more than one connected component.
    DisconnectedGraph { components: usize },
    /// The bin width covers the whole recording, so every code has one bit.
    SingleBin { bin_width: f64, duration: f64 },
    /// A bin width outside the `(active_isi, pulse_width)` window that keeps
    /// consecutive randomly-driven responses apart.
    BinWidthOutsideGuidance { bin_width: f64, lower: f64, upper: f64 },
    /// The heuristic lower firing bound exceeds the upper bound.
    ThresholdsCrossed { f_min: f64, f_max: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::CoarseTimeStep { dt, tau } => {
                write!(f, "time step {dt} ms is larger than tau/50 (tau = {tau} ms)")
            }
            Warning::DisconnectedGraph { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
            Warning::SingleBin { bin_width, duration } => {
                write!(f, "bin width {bin_width} ms covers the whole {duration} ms recording; codes have a single bit")
            }
            Warning::BinWidthOutsideGuidance { bin_width, lower, upper } => {
                write!(f, "bin width {bin_width} ms is outside the separable range ({lower} ms, {upper} ms)")
            }
            Warning::ThresholdsCrossed { f_min, f_max } => {
                write!(f, "bounds crossed: f_min = {f_min} exceeds f_max = {f_max}")
            }
        }
    }
}
