//! JSON shapes read and written by the command-line tool.
//!
//! Rationals travel as strings (`"7"`, `"1/3"`); inputs may also use
//! finite decimals such as `"3.1"`. Struct field order is the key order on
//! output.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use windmill_core::counter::{CountEstimate, MarginalRecord, Problem};
use windmill_core::holant::HolantInstance;
use windmill_core::mcmc::TransitionMatrix;
use windmill_core::rational::{parse_rational, to_f64, to_fraction_string, ParseRationalError, Rational};
use windmill_core::symfunc::{make_named, NamedFunction, SymmetricFunction};
use windmill_core::windability::{PartitionMatrix, PinningRecord, Verdict, WindabilityReport};

/// Errors raised while reading inputs.
#[derive(Debug, Error)]
pub enum FormatError {
    /// Malformed JSON.
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    /// A rational field did not parse.
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    /// Rejected by the core library.
    #[error(transparent)]
    Core(#[from] windmill_core::Error),
    /// Structurally valid but inconsistent input.
    #[error("{0}")]
    Invalid(String),
}

/// A symmetric function, either by value list or by family name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    /// `{"arity": d, "values": ["p/q", ...]}`.
    Values {
        /// Number of inputs; `values` has `arity + 1` entries.
        arity: usize,
        /// Values by Hamming weight.
        values: Vec<String>,
    },
    /// `{"kind": "atmost", "k": 7, "arity": 12}`.
    Named {
        /// Family name: zeros, ones, even, odd, exact, atleast, atmost,
        /// range or edge.
        kind: String,
        /// Threshold for exact, atleast and atmost; lower end of range.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
        /// Upper end of range.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<usize>,
        /// Weight of the edge gadget.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w: Option<String>,
        /// Number of inputs; defaults to the vertex degree inside a graph.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        arity: Option<usize>,
    },
}

/// Resolves a family name and parameters.
pub fn named_kind(kind: &str, k: Option<usize>, hi: Option<usize>, w: Option<&str>) -> Result<NamedFunction, FormatError> {
    let need_k = || k.ok_or_else(|| FormatError::Invalid(format!("kind {kind:?} needs k")));
    Ok(match kind.to_ascii_lowercase().as_str() {
        "zeros" => NamedFunction::Zeros,
        "ones" => NamedFunction::Ones,
        "even" => NamedFunction::Even,
        "odd" => NamedFunction::Odd,
        "exact" => NamedFunction::Exact(need_k()?),
        "atleast" => NamedFunction::AtLeast(need_k()?),
        "atmost" => NamedFunction::AtMost(need_k()?),
        "range" => {
            let hi = hi.ok_or_else(|| FormatError::Invalid("kind \"range\" needs k and hi".into()))?;
            NamedFunction::Range(need_k()?, hi)
        }
        "edge" => NamedFunction::EdgeGadget(parse_rational(w.unwrap_or("1"))?),
        other => return Err(FormatError::Invalid(format!("unknown function kind {other:?}"))),
    })
}

impl FunctionSpec {
    /// The function, with `degree` supplying a missing arity.
    pub fn resolve(&self, degree: Option<usize>) -> Result<SymmetricFunction, FormatError> {
        match self {
            FunctionSpec::Values { arity, values } => {
                if values.len() != arity + 1 {
                    return Err(FormatError::Invalid(format!(
                        "arity {arity} needs {} values, got {}",
                        arity + 1,
                        values.len()
                    )));
                }
                let values = values.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>, _>>()?;
                Ok(SymmetricFunction::new(values)?)
            }
            FunctionSpec::Named { kind, k, hi, w, arity } => {
                let arity = arity
                    .or(degree)
                    .or(kind.eq_ignore_ascii_case("edge").then_some(2))
                    .ok_or_else(|| FormatError::Invalid(format!("kind {kind:?} needs an arity")))?;
                Ok(make_named(&named_kind(kind, *k, *hi, w.as_deref())?, arity)?)
            }
        }
    }

    /// The value-list form of a function.
    pub fn from_function(f: &SymmetricFunction) -> Self {
        FunctionSpec::Values { arity: f.arity(), values: fractions(f.values()) }
    }
}

/// Parses a comma-separated list of rationals.
pub fn parse_list(s: &str) -> Result<Vec<Rational>, FormatError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| Ok(parse_rational(t)?)).collect()
}

/// Every entry as a fraction string.
pub fn fractions(v: &[Rational]) -> Vec<String> {
    v.iter().map(to_fraction_string).collect()
}

/// One vertex of a graph file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    /// Identifier referenced by `edges`.
    pub id: usize,
    /// Constraint function; required unless a problem kind is supplied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
}

/// `{"vertices": [...], "edges": [[u, v], ...], "edge_weights": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    /// Vertices, in index order.
    pub vertices: Vec<VertexSpec>,
    /// Edges as pairs of vertex ids.
    pub edges: Vec<[usize; 2]>,
    /// Optional per-edge weights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_weights: Option<Vec<String>>,
}

impl GraphSpec {
    /// Parses a graph file.
    pub fn from_json(s: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(s)?)
    }

    /// A graph without vertex functions.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize)]) -> Self {
        Self {
            vertices: (0..num_vertices).map(|id| VertexSpec { id, function: None }).collect(),
            edges: edges.iter().map(|&(u, v)| [u, v]).collect(),
            edge_weights: None,
        }
    }

    /// Edges with ids mapped to vertex positions.
    pub fn edge_list(&self) -> Result<Vec<(usize, usize)>, FormatError> {
        let position = |id: usize| {
            self.vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| FormatError::Invalid(format!("edge refers to unknown vertex id {id}")))
        };
        self.edges.iter().map(|&[u, v]| Ok((position(u)?, position(v)?))).collect()
    }

    /// Parsed edge weights, if any.
    pub fn weights(&self) -> Result<Option<Vec<Rational>>, FormatError> {
        let Some(w) = &self.edge_weights else { return Ok(None) };
        if w.len() != self.edges.len() {
            return Err(FormatError::Invalid(format!("{} edges but {} edge weights", self.edges.len(), w.len())));
        }
        Ok(Some(w.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?))
    }

    /// Vertex degrees.
    pub fn degrees(&self) -> Result<Vec<usize>, FormatError> {
        let mut d = vec![0; self.vertices.len()];
        for (u, v) in self.edge_list()? {
            d[u] += 1;
            d[v] += 1;
        }
        Ok(d)
    }

    /// The Holant instance. With `problem`, vertex functions come from that
    /// family; otherwise every vertex must carry one. Edge weights, when
    /// present (from `weights` or the file), subdivide every edge.
    pub fn instance(&self, problem: Option<Problem>, weights: Option<&[Rational]>) -> Result<HolantInstance, FormatError> {
        let edges = self.edge_list()?;
        let file_weights = self.weights()?;
        let weights = weights.or(file_weights.as_deref());
        if let Some(p) = problem {
            return Ok(p.instance(self.vertices.len(), &edges, weights)?);
        }
        let degrees = self.degrees()?;
        let functions = self
            .vertices
            .iter()
            .zip(&degrees)
            .map(|(v, &d)| {
                v.function
                    .as_ref()
                    .ok_or_else(|| FormatError::Invalid(format!("vertex {} has no function", v.id)))?
                    .resolve(Some(d))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let base = HolantInstance::new(functions, edges)?;
        Ok(match weights {
            Some(w) => windmill_core::holant::weighted_transform(&base, w)?,
            None => base,
        })
    }
}

/// Matrix dump: rows of fraction strings.
pub fn matrix_json(a: &PartitionMatrix) -> Vec<Vec<String>> {
    a.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// One pinning record.
#[derive(Debug, Clone, Serialize)]
pub struct PinningJson {
    zeros: usize,
    ones: usize,
    h: Vec<String>,
    solution: Vec<String>,
    nonneg: bool,
}

/// Windability report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    function: FunctionSpec,
    verdict: &'static str,
    per_pinning: Vec<PinningJson>,
    counterexample: Option<[usize; 2]>,
}

impl From<&PinningRecord> for PinningJson {
    fn from(r: &PinningRecord) -> Self {
        Self { zeros: r.zeros, ones: r.ones, h: fractions(&r.h), solution: fractions(&r.solution), nonneg: r.nonneg }
    }
}

impl From<&WindabilityReport> for ReportJson {
    fn from(r: &WindabilityReport) -> Self {
        Self {
            function: FunctionSpec::from_function(&r.function),
            verdict: match r.verdict {
                Verdict::Windable => "Windable",
                Verdict::NotWindable => "NotWindable",
            },
            per_pinning: r.per_pinning.iter().map(PinningJson::from).collect(),
            counterexample: r.counterexample.map(|(z, o)| [z, o]),
        }
    }
}

/// One telescoping factor.
#[derive(Debug, Clone, Serialize)]
pub struct MarginalJson {
    edge: usize,
    pinned_value: u8,
    estimated_p: String,
    samples: usize,
    accepted: usize,
}

impl From<&MarginalRecord> for MarginalJson {
    fn from(m: &MarginalRecord) -> Self {
        Self {
            edge: m.edge,
            pinned_value: u8::from(m.pinned_value),
            estimated_p: to_fraction_string(&m.estimated_p),
            samples: m.samples,
            accepted: m.accepted,
        }
    }
}

/// Count estimate.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateJson {
    estimate: String,
    epsilon: String,
    delta: String,
    seed: u64,
    marginals: Vec<MarginalJson>,
    oracle: Option<String>,
    estimate_f64: f64,
    log_estimate: Option<f64>,
    total_steps: u64,
    rejected_omega2_fraction: f64,
}

impl EstimateJson {
    /// Wraps an estimate, attaching the exact value when known.
    pub fn new(e: &CountEstimate, oracle: Option<&Rational>) -> Self {
        Self {
            estimate: to_fraction_string(&e.estimate),
            epsilon: to_fraction_string(&e.epsilon),
            delta: to_fraction_string(&e.delta),
            seed: e.seed,
            marginals: e.per_edge_marginals.iter().map(MarginalJson::from).collect(),
            oracle: oracle.map(to_fraction_string),
            estimate_f64: to_f64(&e.estimate),
            log_estimate: e.log_estimate.is_finite().then_some(e.log_estimate),
            total_steps: e.total_steps,
            rejected_omega2_fraction: e.rejected_omega2_fraction,
        }
    }
}

/// One trajectory record.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    /// Steps taken so far.
    pub step: u64,
    /// Half-edge bits as hex, half-edge 0 in the lowest bit.
    pub assignment: String,
    /// Exact weight.
    pub weight: String,
}

/// One point of the TV curve.
#[derive(Debug, Clone, Serialize)]
pub struct TvPoint {
    /// Step count.
    pub t: usize,
    /// Exact distance, rounded.
    pub tv: f64,
    /// The mixing bound at `t`.
    pub bound: f64,
}

/// Exact kernel diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsJson {
    /// Number of positive-weight states.
    pub states: usize,
    /// `"exact-pass"` or `"exact-fail"`.
    pub stationary_check: &'static str,
    /// `"exact-pass"` or `"exact-fail"`.
    pub detailed_balance_check: &'static str,
    /// Index of the start state in mask order.
    pub start: usize,
    /// `||P^t(start, .) - mu||_TV` for `t = 0..`.
    pub tv_curve: Vec<TvPoint>,
}

/// Diagnostics for one start state and `t = 0..=t_max`.
pub fn diagnostics(p: &TransitionMatrix, start: usize, t_max: usize) -> DiagnosticsJson {
    let mu = p.stationary();
    let verdict = |ok: bool| if ok { "exact-pass" } else { "exact-fail" };
    DiagnosticsJson {
        states: p.len(),
        stationary_check: verdict(p.is_stationary(&mu)),
        detailed_balance_check: verdict(p.detailed_balance_violation(&mu).is_none()),
        start,
        tv_curve: p
            .tv_curve(start, t_max)
            .iter()
            .enumerate()
            .map(|(t, tv)| TvPoint { t, tv: to_f64(tv), bound: p.mixing_bound(start, t) })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use windmill_core::rational::{frac, int};
    use windmill_core::windability::build_a;

    #[test]
    fn function_specs() {
        let named: FunctionSpec = serde_json::from_str(r#"{"kind":"atmost","k":7,"arity":12}"#).unwrap();
        assert_eq!(named.resolve(None).unwrap().arity(), 12);
        let values: FunctionSpec = serde_json::from_str(r#"{"arity":2,"values":["1","0","7/2"]}"#).unwrap();
        assert_eq!(values.resolve(None).unwrap().values(), &[int(1), int(0), frac(7, 2)]);
        let bad: FunctionSpec = serde_json::from_str(r#"{"arity":3,"values":["1"]}"#).unwrap();
        assert!(bad.resolve(None).is_err());
        let no_arity: FunctionSpec = serde_json::from_str(r#"{"kind":"atleast","k":1}"#).unwrap();
        assert!(no_arity.resolve(None).is_err());
        assert_eq!(no_arity.resolve(Some(3)).unwrap().arity(), 3);
        assert!(named_kind("nope", None, None, None).is_err());
    }

    #[test]
    fn graph_roundtrip() {
        let text = r#"{"vertices":[{"id":0,"function":{"kind":"atmost","k":1}},{"id":1,"function":{"kind":"atmost","k":1}}],"edges":[[0,1]],"edge_weights":["5"]}"#;
        let g = GraphSpec::from_json(text).unwrap();
        let inst = g.instance(None, None).unwrap();
        assert_eq!(inst.num_edges(), 2);
        assert_eq!(windmill_core::holant::brute_z(&inst, 0).unwrap(), int(6));
        let unweighted = g.instance(Some(Problem::BEdgeCover(1)), Some(&[int(5)])).unwrap();
        assert_eq!(windmill_core::holant::brute_z(&unweighted, 0).unwrap(), int(5));
        let reparsed = GraphSpec::from_json(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(reparsed, g);
    }

    #[test]
    fn graph_errors() {
        let g = GraphSpec::from_json(r#"{"vertices":[{"id":0}],"edges":[[0,3]]}"#).unwrap();
        assert!(g.instance(None, None).is_err());
        let g = GraphSpec::from_json(r#"{"vertices":[{"id":0},{"id":1}],"edges":[[0,1]],"edge_weights":[]}"#).unwrap();
        assert!(g.weights().is_err());
        assert!(GraphSpec::from_json("{").is_err());
    }

    #[test]
    fn matrix_dump() {
        let json = serde_json::to_string(&matrix_json(&build_a(3).unwrap())).unwrap();
        assert_eq!(json, r#"[["3","0"],["1","2"]]"#);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("3,1, 1/2").unwrap(), [int(3), int(1), frac(1, 2)]);
        assert!(parse_list("3,x").is_err());
    }
}
