use std::fmt;
use std::sync::Arc;

pub type SignalFn = Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>;

/// Boundary data `(h1(t), h2(t)) = (u(−1, t), u_x(−1, t))`.
#[derive(Clone, Default)]
pub enum BoundarySignal {
    #[default]
    Homogeneous,
    /// Samples at increasing times, linearly interpolated and held
    /// constant outside the table.
    Table {
        times: Vec<f64>,
        h1: Vec<f64>,
        h2: Vec<f64>,
    },
    Function(SignalFn),
}

impl fmt::Debug for BoundarySignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySignal::Homogeneous => write!(f, "Homogeneous"),
            BoundarySignal::Table { times, .. } => write!(f, "Table({} samples)", times.len()),
            BoundarySignal::Function(_) => write!(f, "Function"),
        }
    }
}

impl BoundarySignal {
    pub fn function(f: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static) -> Self {
        BoundarySignal::Function(Arc::new(f))
    }

    pub fn at(&self, t: f64) -> (f64, f64) {
        match self {
            BoundarySignal::Homogeneous => (0.0, 0.0),
            BoundarySignal::Function(f) => f(t),
            BoundarySignal::Table { times, h1, h2 } => {
                if times.is_empty() {
                    return (0.0, 0.0);
                }
                let k = times.partition_point(|&s| s <= t);
                if k == 0 {
                    return (h1[0], h2[0]);
                }
                if k == times.len() {
                    return (h1[k - 1], h2[k - 1]);
                }
                let (t0, t1) = (times[k - 1], times[k]);
                let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
                (
                    h1[k - 1] + w * (h1[k] - h1[k - 1]),
                    h2[k - 1] + w * (h2[k] - h2[k - 1]),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_interpolates_and_holds() {
        let s = BoundarySignal::Table {
            times: vec![0.0, 1.0, 2.0],
            h1: vec![0.0, 2.0, 2.0],
            h2: vec![1.0, 1.0, -1.0],
        };
        assert_eq!(s.at(0.5), (1.0, 1.0));
        assert_eq!(s.at(1.5), (2.0, 0.0));
        assert_eq!(s.at(-1.0), (0.0, 1.0));
        assert_eq!(s.at(5.0), (2.0, -1.0));
        assert_eq!(s.at(1.0), (2.0, 1.0));
    }

    #[test]
    fn function_and_zero() {
        let s = BoundarySignal::function(|t| (t, 2.0 * t));
        assert_eq!(s.at(0.25), (0.25, 0.5));
        assert_eq!(BoundarySignal::Homogeneous.at(3.0), (0.0, 0.0));
    }
}
