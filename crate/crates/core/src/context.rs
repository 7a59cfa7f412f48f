use std::sync::Arc;

use crate::error::{AlgebraError, Result};

/// Ordered set of variable names with per-variable invertibility and
/// parameter flags.
///
/// Parameters are central symbols (such as `alpha`, `beta`) that never carry
/// negative exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
    invertible: Vec<bool>,
    parameters: Vec<bool>,
}

impl VarContext {
    pub fn new(names: Vec<String>, invertible: Vec<bool>, parameters: Vec<bool>) -> Result<Arc<Self>> {
        let n = names.len();
        if invertible.len() != n || parameters.len() != n {
            return Err(AlgebraError::InvalidContext("mask length differs from variable count".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(AlgebraError::InvalidContext(format!("`{name}` is not an identifier")));
            }
            if names[..i].contains(name) {
                return Err(AlgebraError::InvalidContext(format!("duplicate variable `{name}`")));
            }
            if invertible[i] && parameters[i] {
                return Err(AlgebraError::InvalidContext(format!("parameter `{name}` cannot be invertible")));
            }
        }
        Ok(Arc::new(VarContext { names, invertible, parameters }))
    }

    /// Plain polynomial variables, nothing inverted.
    pub fn polynomial<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        Self::builder().vars(names).build()
    }

    pub fn builder() -> ContextBuilder {
        ContextBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| AlgebraError::UnknownIdentifier(name.to_string()))
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.invertible[i]
    }

    pub fn is_parameter(&self, i: usize) -> bool {
        self.parameters[i]
    }

    /// Indices of the non-parameter variables.
    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.parameters[i])
    }

    /// Same names and flags except that `names` become invertible.
    pub fn with_inverted(&self, names: &[&str]) -> Result<Arc<Self>> {
        let mut invertible = self.invertible.clone();
        for name in names {
            let i = self.require(name)?;
            invertible[i] = true;
        }
        Self::new(self.names.clone(), invertible, self.parameters.clone())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric())
}

#[derive(Default)]
pub struct ContextBuilder {
    names: Vec<String>,
    invertible: Vec<bool>,
    parameters: Vec<bool>,
}

impl ContextBuilder {
    pub fn var(mut self, name: impl Into<String>) -> Self {
        self.names.push(name.into());
        self.invertible.push(false);
        self.parameters.push(false);
        self
    }

    pub fn vars<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        for n in names {
            self = self.var(n.as_ref());
        }
        self
    }

    pub fn invertible(mut self, name: impl Into<String>) -> Self {
        self.names.push(name.into());
        self.invertible.push(true);
        self.parameters.push(false);
        self
    }

    pub fn parameter(mut self, name: impl Into<String>) -> Self {
        self.names.push(name.into());
        self.invertible.push(false);
        self.parameters.push(true);
        self
    }

    pub fn build(self) -> Result<Arc<VarContext>> {
        VarContext::new(self.names, self.invertible, self.parameters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_inverted_parameters() {
        assert!(VarContext::polynomial(&["X1", "X1"]).is_err());
        let err = VarContext::new(vec!["alpha".into()], vec![true], vec![true]);
        assert!(err.is_err());
        assert!(VarContext::polynomial(&["1x"]).is_err());
    }

    #[test]
    fn builder_flags() {
        let ctx = VarContext::builder().var("x1").invertible("x5").parameter("alpha").build().unwrap();
        assert!(ctx.is_invertible(1));
        assert!(ctx.is_parameter(2));
        assert_eq!(ctx.generators().collect::<Vec<_>>(), vec![0, 1]);
        let inv = ctx.with_inverted(&["x1"]).unwrap();
        assert!(inv.is_invertible(0));
    }
}
