/// How data-parallel loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise
    /// behaves like `Sequential`.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Enumeration limits and execution mode shared by all operations.
///
/// Every doubly exponential enumeration checks its size against these
/// limits first and refuses with [`Error::Budget`](crate::Error::Budget)
/// instead of running away.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    /// Largest `|B|^(|A|^n)` accepted when materializing all n-ary functions.
    pub max_functions: u64,
    /// Largest `2^(|A|^m) * 2^(|B|^m)` accepted when materializing `Q_m`.
    pub max_constraints: u64,
    /// Largest indeterminate set a scheme may use during Skolem search.
    pub max_indets: usize,
    /// Largest number of column tuples scanned by trace-constraint filtering.
    pub max_columns: u64,
    /// Maximum number of witnesses kept in a report.
    pub max_witnesses: usize,
    pub execution: Execution,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_functions: 1 << 20,
            max_constraints: 1 << 20,
            max_indets: 2,
            max_columns: 1 << 22,
            max_witnesses: 16,
            execution: Execution::default(),
        }
    }
}

impl Config {
    pub fn sequential() -> Self {
        Config {
            execution: Execution::Sequential,
            ..Config::default()
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}
