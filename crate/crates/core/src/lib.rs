pub mod classifier;
pub mod config;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod harness;
pub mod json;
pub mod linalg;
pub mod newton;
pub mod operator;
pub mod parser;
pub mod poly;

pub use classifier::{classify, ClassifyOptions, Outcome, Verdict};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use exact::{ExactComplex, GaussRational};
pub use fourier::{EmbeddingProblem, TrigPoly};
pub use newton::{build_diagram, AdmissibleLine, NewtonDiagram};
pub use operator::{DiffOperator, MultiIndex};
pub use parser::{parse_operator, parse_operator_list};
