use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::WfError;
use super::sequent::Sequent;
use super::signature::Signature;

/// A named axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom {
    pub name: String,
    pub sequent: Sequent,
}

/// A geometric theory: a signature plus a list of axioms, with a little
/// metadata about where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theory {
    pub name: String,
    pub provenance: Option<String>,
    pub signature: Signature,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new(name: impl Into<String>, signature: Signature) -> Self {
        Theory { name: name.into(), provenance: None, signature, axioms: Vec::new() }
    }

    pub fn push_axiom(&mut self, name: impl Into<String>, sequent: Sequent) {
        self.axioms.push(Axiom { name: name.into(), sequent });
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    /// Validates the theory invariants and reports every violation found:
    /// undeclared symbols, arity mismatches, and sequent context violations.
    /// The empty report means the theory is well-formed.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (i, axiom) in self.axioms.iter().enumerate() {
            let site = format!("axiom `{}` (#{i})", axiom.name);
            for v in axiom.sequent.escaping_vars() {
                report.entries.push(ValidationEntry::ContextViolation {
                    site: site.clone(),
                    variable: v,
                });
            }
            let ctx: BTreeSet<String> = axiom.sequent.context.iter().cloned().collect();
            for (side, f) in
                [("antecedent", &axiom.sequent.antecedent), ("consequent", &axiom.sequent.consequent)]
            {
                if let Err(e) = f.check(&self.signature, &ctx) {
                    report.entries.push(ValidationEntry::Formula {
                        site: format!("{site}, {side}"),
                        error: e,
                    });
                }
            }
        }
        report
    }
}

/// One problem found while validating a theory or a witness scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidationEntry {
    Formula { site: String, error: WfError },
    ContextViolation { site: String, variable: String },
    Scheme { site: String, message: String },
}

impl fmt::Display for ValidationEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationEntry::Formula { site, error } => write!(f, "{site}: {error}"),
            ValidationEntry::ContextViolation { site, variable } => {
                write!(f, "{site}: variable `{variable}` escapes the context")
            }
            ValidationEntry::Scheme { site, message } => write!(f, "{site}: {message}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            writeln!(f, "ok")
        } else {
            for e in &self.entries {
                writeln!(f, "{e}")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::Formula;
    use crate::logic::term::Term;

    #[test]
    fn undeclared_symbol_is_reported() {
        let sig = Signature::new();
        let mut t = Theory::new("t", sig);
        t.push_axiom(
            "bad",
            Sequent::closing(Formula::Truth, Formula::rel("R", vec![Term::var("x")])),
        );
        let report = t.validate();
        assert_eq!(report.entries.len(), 1);
        assert!(matches!(
            &report.entries[0],
            ValidationEntry::Formula { error: WfError::UndeclaredSymbol(name), .. } if name == "R"
        ));
    }

    #[test]
    fn consequent_variable_outside_context_is_reported() {
        let mut sig = Signature::new();
        sig.declare_relation("R", 1).unwrap();
        let mut t = Theory::new("t", sig);
        t.push_axiom(
            "bad",
            Sequent::new(vec!["x".into()], Formula::Truth, Formula::rel("R", vec![Term::var("y")])),
        );
        let report = t.validate();
        assert!(report
            .entries
            .iter()
            .any(|e| matches!(e, ValidationEntry::ContextViolation { variable, .. } if variable == "y")));
    }
}
