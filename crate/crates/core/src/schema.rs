//! JSON definition files and the built-in data shipped with the crate.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::VarContext;
use crate::error::{AlgebraError, Result};
use crate::ore::PoissonOreData;
use crate::parse::parse_expr;
use crate::poisson::{PoissonStructure, WeightVector};
use crate::rational::Rational;

pub const ALGEBRA_A_JSON: &str = include_str!("../data/algebra_a.json");
pub const TORUS_M_JSON: &str = include_str!("../data/torus_m.json");
pub const THETA_JSON: &str = include_str!("../data/theta.json");
pub const THETA_TILDE_JSON: &str = include_str!("../data/theta_tilde.json");
pub const IDENTITIES_JSON: &str = include_str!("../data/identities.json");

/// A rational written either as a JSON integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalValue::Int(n) => Ok(Rational::integer(*n)),
            RationalValue::Text(s) => s.parse(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub invertible: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    pub brackets: BTreeMap<String, String>,
    #[serde(default)]
    pub sigma: BTreeMap<String, RationalValue>,
    #[serde(default)]
    pub delta: BTreeMap<String, String>,
    #[serde(default)]
    pub weights: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusFile {
    pub rank: usize,
    pub lambda: Vec<Vec<RationalValue>>,
    #[serde(default)]
    pub images: BTreeMap<String, String>,
}

/// Value of a quotient parameter: `"symbolic"` or a rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParameterValue {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientDerivationFile {
    pub alpha: ParameterValue,
    pub beta: ParameterValue,
    pub images: BTreeMap<String, String>,
}

/// `X_{i,level}` written in the level-`(level+1)` generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFormula {
    pub i: usize,
    pub level: usize,
    pub expr: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderLine {
    pub level: usize,
    pub expr: String,
}

/// Successive rewritings of a torus monomial in the generators of higher levels.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ladder {
    pub name: String,
    pub torus: String,
    pub lines: Vec<LadderLine>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
}

/// Reference identities for the built-in algebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitiesFile {
    pub chain: Vec<ChainFormula>,
    pub ladders: Vec<Ladder>,
    pub casimirs: BTreeMap<String, String>,
    pub rewrite: BTreeMap<String, String>,
    pub relations: Vec<Relation>,
    pub localization: Vec<Relation>,
}

impl IdentitiesFile {
    pub fn builtin() -> Self {
        serde_json::from_str(IDENTITIES_JSON).expect("built-in identities are valid")
    }

    pub fn casimir(&self, name: &str) -> &str {
        self.casimirs.get(name).map(String::as_str).expect("known Casimir")
    }
}

/// A loaded algebra: bracket table plus optional Ore data and grading.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub structure: PoissonStructure,
    pub ore: Option<PoissonOreData>,
    pub weights: Option<WeightVector>,
}

impl Algebra {
    pub fn context(&self) -> &Arc<VarContext> {
        self.structure.context()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| AlgebraError::Input(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn builtin() -> Self {
        Self::from_json(ALGEBRA_A_JSON).expect("built-in algebra is valid")
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        let n = file.variables.len();
        for name in file.invertible.iter().chain(&file.parameters) {
            if !file.variables.contains(name) {
                return Err(AlgebraError::UnknownIdentifier(name.clone()));
            }
        }
        let inv = file.variables.iter().map(|v| file.invertible.contains(v)).collect();
        let par = file.variables.iter().map(|v| file.parameters.contains(v)).collect();
        let ctx = VarContext::new(file.variables.clone(), inv, par)?;

        let mut entries = Vec::new();
        for (key, expr) in &file.brackets {
            let (i, j) = parse_pair(key, n)?;
            entries.push((i, j, parse_expr(expr, &ctx)?));
        }
        let structure = PoissonStructure::new(&ctx, entries)?;

        let ore = if file.sigma.is_empty() && file.delta.is_empty() {
            None
        } else {
            let pos = |v: usize| -> Result<usize> {
                if ctx.is_parameter(v) {
                    return Err(AlgebraError::Input(format!("`{}` is a parameter", ctx.name(v))));
                }
                Ok(ctx.generators().position(|g| g == v).expect("generator"))
            };
            let mut sigma = Vec::new();
            for (key, r) in &file.sigma {
                let (i, j) = parse_pair(key, n)?;
                sigma.push((pos(i)?, pos(j)?, r.to_rational()?));
            }
            let mut delta = Vec::new();
            for (key, expr) in &file.delta {
                let (i, j) = parse_pair(key, n)?;
                delta.push((pos(i)?, pos(j)?, parse_expr(expr, &ctx)?));
            }
            let ore = PoissonOreData::new(&ctx, sigma, delta)?;
            if let Some((i, j)) = ore.check_against(&structure) {
                return Err(AlgebraError::Input(format!(
                    "sigma/delta data disagree with bracket {{{},{}}}",
                    ctx.name(ore.generator(i)),
                    ctx.name(ore.generator(j))
                )));
            }
            Some(ore)
        };

        let weights = match &file.weights {
            Some(w) => {
                if w.len() != n {
                    return Err(AlgebraError::Input(format!("{} weights for {n} variables", w.len())));
                }
                Some(WeightVector::new(w.clone())?)
            }
            None => None,
        };
        Ok(Algebra { structure, ore, weights })
    }
}

/// Parse a 1-based `"i,j"` key into 0-based indices.
fn parse_pair(key: &str, n: usize) -> Result<(usize, usize)> {
    let bad = || AlgebraError::Input(format!("bad index pair `{key}`"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 || a > n || b > n {
        return Err(bad());
    }
    Ok((a - 1, b - 1))
}
