use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use crate::logic::{Theory, WitnessScheme};
use crate::model::{enumerate_models, FiniteStructure, Limits, SearchError};

use super::report::CheckError;

/// A checking session over one theory: validates the inputs once and
/// memoizes model enumeration per size, so running several checkers against
/// the same theory does not repeat the search.
pub struct Session<'a> {
    pub theory: &'a Theory,
    pub limits: Limits,
    /// When set, checks run against exactly these structures instead of
    /// enumerated models (used to replay counterexamples).
    given_models: Option<Vec<FiniteStructure>>,
    cache: RefCell<BTreeMap<usize, Rc<Vec<FiniteStructure>>>>,
}

impl<'a> Session<'a> {
    pub fn new(theory: &'a Theory, limits: Limits) -> Result<Self, CheckError> {
        let report = theory.validate();
        if !report.is_clean() {
            return Err(CheckError::Invalid(report));
        }
        Ok(Session { theory, limits, given_models: None, cache: RefCell::new(BTreeMap::new()) })
    }

    /// Replaces enumeration by a fixed list of structures (assumed to be
    /// models; checkers will still report sequent failures against them).
    pub fn with_given_models(mut self, models: Vec<FiniteStructure>) -> Self {
        self.given_models = Some(models);
        self
    }

    pub fn validate_scheme(&self, scheme: &WitnessScheme) -> Result<(), CheckError> {
        let report = scheme.validate(self.theory);
        if !report.is_clean() {
            return Err(CheckError::Invalid(report));
        }
        Ok(())
    }

    /// Models of one exact size, up to isomorphism, memoized.
    pub fn models_of_size(&self, size: usize) -> Result<Rc<Vec<FiniteStructure>>, SearchError> {
        if let Some(given) = &self.given_models {
            let subset: Vec<FiniteStructure> =
                given.iter().filter(|m| m.size == size).cloned().collect();
            return Ok(Rc::new(subset));
        }
        if let Some(models) = self.cache.borrow().get(&size) {
            return Ok(Rc::clone(models));
        }
        let models = Rc::new(enumerate_models(self.theory, size, true, &self.limits)?);
        self.cache.borrow_mut().insert(size, Rc::clone(&models));
        Ok(models)
    }

    /// All models of size up to `max_size` inclusive, ascending by size.
    pub fn models_up_to(
        &self,
        max_size: usize,
    ) -> Result<Vec<Rc<Vec<FiniteStructure>>>, SearchError> {
        if max_size > self.limits.size_cap {
            return Err(SearchError::SizeCapExceeded {
                requested: max_size,
                cap: self.limits.size_cap,
            });
        }
        (0..=max_size).map(|s| self.models_of_size(s)).collect()
    }
}
