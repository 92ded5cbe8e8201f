//! Job-file schema and dispatch.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use lidstone::detector::{
    classify_periodic, classify_products, classify_sequence, IntegralityConfig, SubsetRule,
};
use lidstone::entire::{expand_periodic, Atom, EntireFunction};
use lidstone::gontcharoff::{expand_gontcharoff, NodeSequence, OmegaTable};
use lidstone::{BasisTable, Error, ExactScalar, KernelSystem, NodeSystem};

use crate::report;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; exit 2.
    Schema(String),
    /// A mathematical precondition failed; exit 3.
    Math(Error),
    /// An internal numerical procedure failed; exit 4.
    Numeric(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Schema(s) => write!(f, "schema: {s}"),
            CliError::Math(e) => write!(f, "precondition: {e}"),
            CliError::Numeric(e) => write!(f, "numerical: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Math(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NearSingular { .. }
            | Error::ContourTooClose { .. }
            | Error::OrderUndetermined { .. }
            | Error::CatalogueInconsistent { .. } => CliError::Numeric(e),
            _ => CliError::Math(e),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub command: String,
    pub nodes: Option<NodesSpec>,
    pub sequence: Option<SequenceSpec>,
    pub function: Option<FunctionSpec>,
    pub config: Option<ConfigSpec>,
    pub n_max: Option<usize>,
    pub search_radius: Option<f64>,
    pub radius: Option<f64>,
    pub s_list: Option<Vec<String>>,
    pub subsets: Option<SubsetsSpec>,
    pub bound: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodesSpec {
    pub s: Vec<String>,
    pub r: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSpec {
    Explicit {
        nodes: Vec<String>,
        tail: String,
        bound: f64,
    },
    Periodic {
        cycle: Vec<String>,
        bound: f64,
    },
    Arithmetic {
        a: String,
        step: String,
    },
}

#[derive(Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl ComplexSpec {
    fn to_c(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn default_weight() -> ComplexSpec {
    ComplexSpec { re: 1.0, im: 0.0 }
}

fn default_zero() -> ComplexSpec {
    ComplexSpec { re: 0.0, im: 0.0 }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Poly {
        coefficients: Vec<ComplexSpec>,
    },
    Exp {
        a: ComplexSpec,
        #[serde(default = "default_zero")]
        b: ComplexSpec,
    },
    Sin {
        a: ComplexSpec,
        #[serde(default = "default_zero")]
        b: ComplexSpec,
    },
    Cos {
        a: ComplexSpec,
        #[serde(default = "default_zero")]
        b: ComplexSpec,
    },
    Sinh {
        a: ComplexSpec,
        #[serde(default = "default_zero")]
        b: ComplexSpec,
    },
    Cosh {
        a: ComplexSpec,
        #[serde(default = "default_zero")]
        b: ComplexSpec,
    },
    Expm1OverAz {
        a: ComplexSpec,
    },
    Sum {
        terms: Vec<TermSpec>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default = "default_weight")]
    pub weight: ComplexSpec,
    pub atom: Box<FunctionSpec>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubsetsSpec {
    Constant { indices: Vec<usize> },
    Cyclic { sets: Vec<Vec<usize>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub n_max: Option<usize>,
    pub int_tol: Option<f64>,
    pub zero_tol: Option<f64>,
}

pub fn parse(text: &str) -> Result<Job, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
}

fn parse_rational(s: &str) -> Result<ExactScalar, CliError> {
    ExactScalar::parse_real(s)
        .ok_or_else(|| CliError::Schema(format!("not a rational: {s:?}")))
}

fn build_nodes(spec: &NodesSpec) -> Result<NodeSystem, CliError> {
    let s = spec
        .s
        .iter()
        .map(|x| parse_rational(x))
        .collect::<Result<Vec<_>, _>>()?;
    NodeSystem::new(s, spec.r.clone()).map_err(CliError::from)
}

fn build_sequence(spec: &SequenceSpec) -> Result<NodeSequence, CliError> {
    let seq = match spec {
        SequenceSpec::Explicit { nodes, tail, bound } => {
            let nodes = nodes
                .iter()
                .map(|x| parse_rational(x))
                .collect::<Result<Vec<_>, _>>()?;
            NodeSequence::explicit(nodes, parse_rational(tail)?, *bound)
        }
        SequenceSpec::Periodic { cycle, bound } => {
            let cycle = cycle
                .iter()
                .map(|x| parse_rational(x))
                .collect::<Result<Vec<_>, _>>()?;
            NodeSequence::periodic(cycle, *bound)
        }
        SequenceSpec::Arithmetic { a, step } => {
            NodeSequence::arithmetic(parse_rational(a)?, parse_rational(step)?)
        }
    };
    seq.map_err(CliError::from)
}

fn build_atom(spec: &FunctionSpec) -> Result<Atom, CliError> {
    Ok(match spec {
        FunctionSpec::Poly { coefficients } => {
            Atom::Poly(coefficients.iter().map(|c| c.to_c()).collect())
        }
        FunctionSpec::Exp { a, b } => Atom::Exp { a: a.to_c(), b: b.to_c() },
        FunctionSpec::Sin { a, b } => Atom::Sin { a: a.to_c(), b: b.to_c() },
        FunctionSpec::Cos { a, b } => Atom::Cos { a: a.to_c(), b: b.to_c() },
        FunctionSpec::Sinh { a, b } => Atom::Sinh { a: a.to_c(), b: b.to_c() },
        FunctionSpec::Cosh { a, b } => Atom::Cosh { a: a.to_c(), b: b.to_c() },
        FunctionSpec::Expm1OverAz { a } => Atom::ExpM1OverAz { a: a.to_c() },
        FunctionSpec::Sum { .. } => {
            return Err(CliError::Schema("sum terms must be simple atoms".into()))
        }
    })
}

fn build_function(spec: &FunctionSpec) -> Result<EntireFunction, CliError> {
    match spec {
        FunctionSpec::Sum { terms } => {
            let terms = terms
                .iter()
                .map(|t| Ok((t.weight.to_c(), build_atom(&t.atom)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(EntireFunction::new(terms))
        }
        atom => Ok(EntireFunction::atom(build_atom(atom)?)),
    }
}

fn build_config(spec: &Option<ConfigSpec>) -> Result<IntegralityConfig, CliError> {
    let d = IntegralityConfig::default();
    match spec {
        None => Ok(d),
        Some(c) => IntegralityConfig::new(
            c.n_max.unwrap_or(d.n_max),
            c.int_tol.unwrap_or(d.int_tol),
            c.zero_tol.unwrap_or(d.zero_tol),
        )
        .map_err(CliError::from),
    }
}

fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    field
        .as_ref()
        .ok_or_else(|| CliError::Schema(format!("command requires field {name:?}")))
}

pub type CsvTables = Vec<(String, String)>;

pub fn execute(job: &Job) -> Result<(Value, CsvTables), CliError> {
    match job.command.as_str() {
        "basis" => run_basis(job),
        "delta" => run_delta(job),
        "expand" => run_expand(job),
        "gontcharoff" => run_gontcharoff(job),
        "classify" => run_classify(job),
        other => Err(CliError::Schema(format!("unknown command {other:?}"))),
    }
}

fn run_basis(job: &Job) -> Result<(Value, CsvTables), CliError> {
    let nodes = build_nodes(require(&job.nodes, "nodes")?)?;
    let n_max = job.n_max.unwrap_or(2);
    let basis = BasisTable::new(&nodes, n_max).map_err(CliError::from)?;
    Ok((report::basis_report(&nodes, &basis), Vec::new()))
}

fn run_delta(job: &Job) -> Result<(Value, CsvTables), CliError> {
    let nodes = build_nodes(require(&job.nodes, "nodes")?)?;
    if !nodes.is_admissible() {
        return Err(CliError::Math(Error::SingularSystem));
    }
    let sys = KernelSystem::new(&nodes);
    let profile = sys
        .zero_free_radius(job.search_radius.unwrap_or(2.0))
        .map_err(CliError::from)?;
    Ok((report::delta_report(&profile), Vec::new()))
}

fn run_expand(job: &Job) -> Result<(Value, CsvTables), CliError> {
    let nodes = build_nodes(require(&job.nodes, "nodes")?)?;
    let f = build_function(require(&job.function, "function")?)?;
    let n_max = job.n_max.unwrap_or(15);
    let exp = expand_periodic(&f, &nodes, n_max).map_err(CliError::from)?;
    let csv = vec![
        (
            "coefficients.csv".to_string(),
            report::coefficients_csv(&exp.coeffs),
        ),
        (
            "partial_sum.csv".to_string(),
            report::polynomial_csv(&exp.partial_sum),
        ),
    ];
    Ok((report::expand_report(&exp), csv))
}

fn run_gontcharoff(job: &Job) -> Result<(Value, CsvTables), CliError> {
    let seq = build_sequence(require(&job.sequence, "sequence")?)?;
    let n_max = job.n_max.unwrap_or(8);
    let table = OmegaTable::new(&seq, n_max);
    let expansion = match &job.function {
        Some(fspec) => {
            let f = build_function(fspec)?;
            let radius = job.radius.ok_or_else(|| {
                CliError::Schema("gontcharoff expansion requires field \"radius\"".into())
            })?;
            Some(expand_gontcharoff(&f, &seq, radius, n_max).map_err(CliError::from)?)
        }
        None => None,
    };
    let mut csv = vec![(
        "omega.csv".to_string(),
        report::omega_csv(&table),
    )];
    if let Some(exp) = &expansion {
        csv.push((
            "partial_sum.csv".to_string(),
            report::polynomial_csv(&exp.partial_sum),
        ));
    }
    Ok((report::gontcharoff_report(&table, expansion.as_ref()), csv))
}

fn run_classify(job: &Job) -> Result<(Value, CsvTables), CliError> {
    let f = build_function(require(&job.function, "function")?)?;
    let cfg = build_config(&job.config)?;
    let verdict = if let Some(nodes) = &job.nodes {
        classify_periodic(&f, &build_nodes(nodes)?, &cfg)
    } else if let Some(seq) = &job.sequence {
        classify_sequence(&f, &build_sequence(seq)?, &cfg)
    } else if let Some(s_list) = &job.s_list {
        let s = s_list
            .iter()
            .map(|x| parse_rational(x))
            .collect::<Result<Vec<_>, _>>()?;
        let rule = match require(&job.subsets, "subsets")? {
            SubsetsSpec::Constant { indices } => SubsetRule::Constant(indices.clone()),
            SubsetsSpec::Cyclic { sets } => SubsetRule::Cyclic(sets.clone()),
        };
        let bound = *require(&job.bound, "bound")?;
        classify_products(&f, &s, &rule, bound, &cfg)
    } else {
        return Err(CliError::Schema(
            "classify requires one of \"nodes\", \"sequence\", or \"s_list\"".into(),
        ));
    };
    Ok((report::classify_report(&verdict), Vec::new()))
}
