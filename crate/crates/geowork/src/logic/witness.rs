use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::formula::{Formula, FormulaFamily};
use super::theory::{Theory, ValidationEntry, ValidationReport};

/// A witness scheme: the certificate data for uniform co-ordinatisation.
///
/// For each entry, `formula` is a candidate witnessing formula `psi(xs)` in
/// context `context`, and `thetas` is the family of companion formulas
/// `theta(xs, y)` over the context extended by the single fresh variable
/// `companion_var`.  The scheme is the object the characterisation checkers
/// consume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessScheme {
    pub name: String,
    pub entries: Vec<PsiEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiEntry {
    /// Tag naming this psi inside the scheme (used for tagged tuples).
    pub tag: String,
    pub context: Vec<String>,
    pub formula: Formula,
    /// The fresh variable `y` the theta formulas use for the companion.
    pub companion_var: String,
    /// The companion family; members are formulas over `context + [y]`.
    pub thetas: FormulaFamily,
}

impl WitnessScheme {
    pub fn new(name: impl Into<String>) -> Self {
        WitnessScheme { name: name.into(), entries: Vec::new() }
    }

    pub fn entry(&self, tag: &str) -> Option<&PsiEntry> {
        self.entries.iter().find(|e| e.tag == tag)
    }

    /// Validates the scheme against a theory: non-empty psi family, formulas
    /// well-formed over the signature in their contexts, theta contexts
    /// extending the psi context by exactly the fresh companion variable,
    /// and distinct tags.
    pub fn validate(&self, theory: &Theory) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut push = |site: String, message: String| {
            report.entries.push(ValidationEntry::Scheme { site, message });
        };
        if self.entries.is_empty() {
            push(format!("witness `{}`", self.name), "psi family is empty".into());
        }
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            let site = format!("witness `{}`, psi `{}`", self.name, e.tag);
            if !seen.insert(e.tag.clone()) {
                push(site.clone(), "duplicate psi tag".into());
            }
            let ctx: BTreeSet<String> = e.context.iter().cloned().collect();
            if ctx.len() != e.context.len() {
                push(site.clone(), "context has repeated variables".into());
            }
            if ctx.contains(&e.companion_var) {
                push(site.clone(), "companion variable already occurs in the context".into());
            }
            if let Err(err) = e.formula.check(&theory.signature, &ctx) {
                push(site.clone(), err.to_string());
            }
            if !e.formula.free_vars().is_subset(&ctx) {
                push(site.clone(), "psi formula has variables outside its context".into());
            }
            let mut theta_ctx = ctx.clone();
            theta_ctx.insert(e.companion_var.clone());
            for m in &e.thetas.members {
                let theta_site = format!("{site}, theta `{}`", m.label);
                if let Err(err) = m.formula.check(&theory.signature, &theta_ctx) {
                    push(theta_site.clone(), err.to_string());
                }
                if !m.formula.free_vars().is_subset(&theta_ctx) {
                    push(theta_site, "theta formula has variables outside psi context + companion".into());
                }
            }
        }
        report
    }
}
