use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::formula::Formula;

/// A Gentzen-style sequent `antecedent |- consequent` in an explicit
/// variable context, read "for all context variables, if the antecedent
/// holds then so does the consequent".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequent {
    pub context: Vec<String>,
    pub antecedent: Formula,
    pub consequent: Formula,
}

impl Sequent {
    pub fn new(context: Vec<String>, antecedent: Formula, consequent: Formula) -> Self {
        Sequent { context, antecedent, consequent }
    }

    /// Builds a sequent whose context is the (sorted) set of free variables
    /// of the two sides.
    pub fn closing(antecedent: Formula, consequent: Formula) -> Self {
        let mut vars = antecedent.free_vars();
        vars.extend(consequent.free_vars());
        Sequent { context: vars.into_iter().collect(), antecedent, consequent }
    }

    /// Free variables of either side that escape the context.
    pub fn escaping_vars(&self) -> BTreeSet<String> {
        let ctx: BTreeSet<&String> = self.context.iter().collect();
        let mut out = self.antecedent.free_vars();
        out.extend(self.consequent.free_vars());
        out.retain(|v| !ctx.contains(v));
        out
    }
}
