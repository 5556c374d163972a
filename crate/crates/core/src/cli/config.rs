use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::eqmap::{build_multiloop, MultiloopAlgebra};
use crate::error::{Error, Result};
use crate::exactnum::{lcm_all, CycloField, ExactMatrix, Scalar};
use crate::laurent::{DegreeCap, Multidegree, TorusAction};
use crate::liealg::{abelian, direct_sum, from_sparse_constants, sl, FiniteAutomorphism, LieAlgebra};

pub const SCHEMA: &str = "loopcocycle/run-config/v1";

/// A scalar written either as an integer or as `"3/2*z^2 - 1*z + 5"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    fn parse(&self, field: CycloField) -> Result<Scalar> {
        match self {
            ScalarText::Int(n) => Ok(Scalar::from_int(field, *n)),
            ScalarText::Text(s) => Scalar::parse(s, field),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConstants {
    pub dim: usize,
    /// `[i, j, k, c]` meaning `[e_i, e_j] = ... + c e_k`; the `(j, i)` entry is implied.
    pub entries: Vec<(usize, usize, usize, ScalarText)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Preset(String),
    Structured(AlgebraForm),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraForm {
    DirectSum(Vec<AlgebraSpec>),
    Abelian(usize),
    StructureConstants(StructureConstants),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerDiag {
    pub root_order: u32,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixAutomorphism {
    pub order: u32,
    /// Row-major; column `j` is the image of basis vector `j`.
    pub rows: Vec<Vec<ScalarText>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutomorphismSpec {
    /// `identity` or `outer_transpose`.
    Preset(String),
    Structured(AutomorphismForm),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AutomorphismForm {
    InnerDiag(InnerDiag),
    Matrix(MatrixAutomorphism),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Scalar(i64),
    Vector(Vec<i64>),
}

impl WeightSpec {
    pub fn to_multidegree(&self) -> Multidegree {
        match self {
            WeightSpec::Scalar(a) => Multidegree(vec![*a]),
            WeightSpec::Vector(v) => Multidegree(v.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_triples")]
    pub triples: usize,
    #[serde(default = "default_max_degree")]
    pub max_degree: i64,
    #[serde(default = "default_terms")]
    pub terms: usize,
}

fn default_triples() -> usize {
    500
}

fn default_max_degree() -> i64 {
    3
}

fn default_terms() -> usize {
    3
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { triples: default_triples(), max_degree: default_max_degree(), terms: default_terms() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    Fourier,
    Weierstrass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    #[serde(default = "default_mode")]
    pub mode: DensityMode,
    /// Torus catalogue name (Fourier mode) or interval catalogue name (Weierstrass mode).
    #[serde(default = "default_function")]
    pub function: String,
    #[serde(default = "default_ladder")]
    pub ladder: Vec<usize>,
    /// Highest derivative order reported.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Derivative order approximated before integrating (Weierstrass mode).
    #[serde(default = "default_mu")]
    pub mu: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_mode() -> DensityMode {
    DensityMode::Fourier
}

fn default_function() -> String {
    "exp-sin".into()
}

fn default_ladder() -> Vec<usize> {
    vec![4, 8, 16, 32, 64]
}

fn default_k() -> usize {
    2
}

fn default_mu() -> usize {
    2
}

fn default_grid() -> usize {
    256
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig {
            mode: default_mode(),
            function: default_function(),
            ladder: default_ladder(),
            k: default_k(),
            mu: default_mu(),
            grid: default_grid(),
        }
    }
}

fn default_schema() -> String {
    SCHEMA.into()
}

fn default_algebra() -> AlgebraSpec {
    AlgebraSpec::Preset("sl2".into())
}

fn default_cap() -> i64 {
    DegreeCap::default().0
}

fn default_cutoff() -> u32 {
    3
}

/// The whole run configuration. Every field has a default, so `{}` is a
/// valid (untwisted `sl2`, `n = 1`) configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(default = "default_algebra")]
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub r: Option<Vec<u32>>,
    #[serde(default)]
    pub automorphisms: Option<Vec<AutomorphismSpec>>,
    /// Order `m` of the coefficient field `Q(ζ_m)`; defaults to the lcm of
    /// all `r_k` and all automorphism orders.
    #[serde(default)]
    pub field_order: Option<u32>,
    #[serde(default = "default_cap")]
    pub degree_cap: i64,
    #[serde(default)]
    pub weights: Vec<WeightSpec>,
    #[serde(default = "default_cutoff")]
    pub cutoff: u32,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub density: DensityConfig,
}

fn config_err(path: &str, reason: impl Into<String>) -> Error {
    Error::Config { path: path.into(), reason: reason.into() }
}

impl RunConfig {
    /// Parse and validate; unknown keys are rejected with their path.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            config_err(&path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg.expanded())
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(config_err("schema", format!("expected `{SCHEMA}`, found `{}`", self.schema)));
        }
        let n = self.n.or(self.r.as_ref().map(Vec::len)).unwrap_or(1);
        if n == 0 {
            return Err(config_err("n", "need at least one torus variable"));
        }
        if let Some(r) = &self.r {
            if r.len() != n {
                return Err(config_err("r", format!("{} orders for n = {n}", r.len())));
            }
            if let Some(i) = r.iter().position(|&x| x == 0) {
                return Err(config_err(&format!("r[{i}]"), "orders must be positive"));
            }
        }
        if let Some(a) = &self.automorphisms {
            if a.len() != n {
                return Err(config_err("automorphisms", format!("{} automorphisms for n = {n}", a.len())));
            }
        }
        if self.degree_cap < 1 {
            return Err(config_err("degree_cap", "must be positive"));
        }
        if self.cutoff < 1 {
            return Err(config_err("cutoff", "must be at least 1"));
        }
        for (i, w) in self.weights.iter().enumerate() {
            if w.to_multidegree().n() != n {
                return Err(config_err(&format!("weights[{i}]"), format!("weight needs {n} entries")));
            }
        }
        if self.density.ladder.is_empty() {
            return Err(config_err("density.ladder", "empty ladder"));
        }
        if self.density.grid < 2 {
            return Err(config_err("density.grid", "need at least two grid points"));
        }
        Ok(())
    }

    /// Fill in the derived defaults so the report echoes the effective config.
    fn expanded(mut self) -> Self {
        let n = self.n.or(self.r.as_ref().map(Vec::len)).unwrap_or(1);
        self.n = Some(n);
        if self.r.is_none() {
            self.r = Some(vec![1; n]);
        }
        if self.automorphisms.is_none() {
            self.automorphisms = Some(vec![AutomorphismSpec::Preset("identity".into()); n]);
        }
        if self.field_order.is_none() {
            self.field_order = Some(self.implied_field_order());
        }
        if self.weights.is_empty() {
            self.weights = unit_box(n).into_iter().map(WeightSpec::Vector).collect();
        }
        self
    }

    fn implied_field_order(&self) -> u32 {
        let mut orders: Vec<u32> = self.r.clone().unwrap_or_default();
        for a in self.automorphisms.iter().flatten() {
            match a {
                AutomorphismSpec::Preset(p) if p == "outer_transpose" => orders.push(2),
                AutomorphismSpec::Structured(AutomorphismForm::InnerDiag(d)) => orders.push(d.root_order),
                AutomorphismSpec::Structured(AutomorphismForm::Matrix(m)) => orders.push(m.order),
                _ => {}
            }
        }
        lcm_all(orders)
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(1)
    }

    pub fn weights(&self) -> Vec<Multidegree> {
        self.weights.iter().map(WeightSpec::to_multidegree).collect()
    }

    pub fn field(&self) -> Result<CycloField> {
        CycloField::new(self.field_order.unwrap_or_else(|| self.implied_field_order()))
            .map_err(|e| config_err("field_order", e.to_string()))
    }

    pub fn build_algebra(&self) -> Result<LieAlgebra> {
        build_algebra(&self.algebra, self.field()?, "algebra")
    }

    pub fn build_multiloop(&self) -> Result<Arc<MultiloopAlgebra>> {
        let g = self.build_algebra()?;
        let action = TorusAction::new(self.r.clone().unwrap_or_else(|| vec![1; self.n()]))?;
        let specs = self.automorphisms.clone().unwrap_or_default();
        let autos = specs
            .iter()
            .enumerate()
            .map(|(k, s)| build_automorphism(&g, s, &format!("automorphisms[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        build_multiloop(g, action, autos, DegreeCap(self.degree_cap))
    }
}

/// Every weight in `{-1, 0, 1}^n`, lexicographically.
fn unit_box(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-1..=1).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

fn build_algebra(spec: &AlgebraSpec, field: CycloField, path: &str) -> Result<LieAlgebra> {
    match spec {
        AlgebraSpec::Preset(name) => match name.as_str() {
            "sl2" => Ok(sl(field, 2)),
            "sl3" => Ok(sl(field, 3)),
            "sl4" => Ok(sl(field, 4)),
            other => Err(Error::UnknownPreset(other.to_string())),
        },
        AlgebraSpec::Structured(AlgebraForm::Abelian(d)) => Ok(abelian(field, *d)),
        AlgebraSpec::Structured(AlgebraForm::DirectSum(parts)) => {
            let algs = parts
                .iter()
                .enumerate()
                .map(|(i, p)| build_algebra(p, field, &format!("{path}.direct_sum[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(direct_sum(&algs))
        }
        AlgebraSpec::Structured(AlgebraForm::StructureConstants(sc)) => {
            let entries = sc
                .entries
                .iter()
                .enumerate()
                .map(|(idx, (i, j, k, c))| {
                    let v = c
                        .parse(field)
                        .map_err(|e| config_err(&format!("{path}.structure_constants.entries[{idx}]"), e.to_string()))?;
                    Ok((*i, *j, *k, v))
                })
                .collect::<Result<Vec<_>>>()?;
            from_sparse_constants("custom", field, sc.dim, &entries, sc.names.clone())
        }
    }
}

fn build_automorphism(g: &LieAlgebra, spec: &AutomorphismSpec, path: &str) -> Result<FiniteAutomorphism> {
    match spec {
        AutomorphismSpec::Preset(name) => match name.as_str() {
            "identity" => Ok(FiniteAutomorphism::identity(g)),
            "outer_transpose" => FiniteAutomorphism::sl_negative_transpose(g),
            other => Err(Error::UnknownPreset(other.to_string())),
        },
        AutomorphismSpec::Structured(AutomorphismForm::InnerDiag(d)) => {
            FiniteAutomorphism::sl_inner_diagonal(g, d.root_order, &d.exponents)
        }
        AutomorphismSpec::Structured(AutomorphismForm::Matrix(m)) => {
            let field = g.field();
            let rows = m
                .rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, c)| c.parse(field).map_err(|e| config_err(&format!("{path}.matrix.rows[{i}][{j}]"), e.to_string())))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let matrix = ExactMatrix::from_rows(field, rows)?;
            FiniteAutomorphism::new(g, matrix, m.order)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_untwisted_sl2() {
        let cfg = RunConfig::from_json_str("{}").unwrap();
        assert_eq!(cfg.n, Some(1));
        assert_eq!(cfg.r, Some(vec![1]));
        let m = cfg.build_multiloop().unwrap();
        assert_eq!(m.slice_dim(&Multidegree(vec![3])), 3);
    }

    #[test]
    fn unknown_key_reports_path() {
        let err = RunConfig::from_json_str(r#"{"verify": {"triples": 3, "bogus": 1}}"#).unwrap_err();
        match err {
            Error::Config { path, .. } => assert!(path.starts_with("verify"), "{path}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn twisted_config() {
        let cfg = RunConfig::from_json_str(r#"{"algebra": "sl3", "r": [2], "automorphisms": ["outer_transpose"]}"#)
            .unwrap();
        assert_eq!(cfg.field_order, Some(2));
        let m = cfg.build_multiloop().unwrap();
        assert_eq!(m.slice_dim(&Multidegree(vec![1])), 5);
    }

    #[test]
    fn structured_specs_parse() {
        let text = r#"{
            "algebra": {"direct_sum": ["sl2", {"abelian": 1}]},
            "n": 1,
            "automorphisms": [{"matrix": {"order": 1, "rows": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}}],
            "weights": [0, 1]
        }"#;
        let cfg = RunConfig::from_json_str(text).unwrap();
        assert_eq!(cfg.build_multiloop().unwrap().algebra().dim(), 4);
        assert_eq!(cfg.weights().len(), 2);
    }

    #[test]
    fn bad_schema_and_lengths() {
        assert!(RunConfig::from_json_str(r#"{"schema": "v0"}"#).is_err());
        assert!(RunConfig::from_json_str(r#"{"n": 2, "r": [2]}"#).is_err());
        assert!(RunConfig::from_json_str(r#"{"weights": [[0, 0]]}"#).is_err());
    }

    #[test]
    fn jacobi_violation_surfaces() {
        let text = r#"{"algebra": {"structure_constants": {"dim": 3, "entries": [[0,1,2,1],[1,2,0,1],[0,2,0,1]]}}}"#;
        let cfg = RunConfig::from_json_str(text).unwrap();
        assert!(matches!(cfg.build_algebra(), Err(Error::JacobiViolation { i: 0, j: 1, k: 2 })));
    }
}
