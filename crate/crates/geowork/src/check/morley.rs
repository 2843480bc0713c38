use std::collections::BTreeSet;

use crate::logic::{Formula, Sequent, Theory, WfError};

/// A formula to Morleyize: the fresh relation will assert its negation over
/// the given context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorleyTarget {
    /// Requested name for the fresh relation symbol; a fresh one is derived
    /// from `neg` when absent.
    pub symbol: Option<String>,
    pub context: Vec<String>,
    pub formula: Formula,
}

impl MorleyTarget {
    pub fn new(context: Vec<String>, formula: Formula) -> Self {
        MorleyTarget { symbol: None, context, formula }
    }

    pub fn named(symbol: impl Into<String>, context: Vec<String>, formula: Formula) -> Self {
        MorleyTarget { symbol: Some(symbol.into()), context, formula }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorleyError {
    #[error("target contains a size-indexed disjunction family and cannot be negated")]
    SizeIndexedFamily,
    #[error("target is not well-formed: {0}")]
    Malformed(#[from] WfError),
    #[error("context is missing free variable `{0}` of the target")]
    ContextMissesVariable(String),
    #[error("requested symbol `{0}` is already declared")]
    SymbolTaken(String),
}

fn coherent(f: &Formula) -> bool {
    match f {
        Formula::Truth | Formula::Falsity | Formula::Eq(..) | Formula::Rel(..) => true,
        Formula::And(fs) | Formula::Or(fs) => fs.iter().all(coherent),
        Formula::FamilyOr(fam) => {
            !fam.is_size_indexed() && fam.members.iter().all(|m| coherent(&m.formula))
        }
        Formula::Exists(_, body) => coherent(body),
    }
}

/// Extends a theory with Morleyized negations: for each target `phi(xs)` a
/// fresh relation `n(xs)` plus the axioms `phi /\ n |- bot` and
/// `top |- phi \/ n`, so that in every model `n` is interpreted as the
/// complement of `phi`.  Targets are processed in order and may use the
/// relations introduced by earlier targets.  Returns the extended theory
/// and the fresh symbol names.
pub fn morleyize(
    theory: &Theory,
    targets: &[MorleyTarget],
) -> Result<(Theory, Vec<String>), MorleyError> {
    let mut out = theory.clone();
    let mut names = Vec::new();
    for target in targets {
        if !coherent(&target.formula) {
            return Err(MorleyError::SizeIndexedFamily);
        }
        let ctx: BTreeSet<String> = target.context.iter().cloned().collect();
        for v in target.formula.free_vars() {
            if !ctx.contains(&v) {
                return Err(MorleyError::ContextMissesVariable(v));
            }
        }
        target.formula.check(&out.signature, &ctx)?;
        let name = match &target.symbol {
            Some(requested) => {
                if out.signature.lookup(requested).is_some() {
                    return Err(MorleyError::SymbolTaken(requested.clone()));
                }
                requested.clone()
            }
            None => out.signature.fresh_symbol_name("neg"),
        };
        out.signature
            .declare_relation(&name, target.context.len())
            .expect("freshness just checked");
        let atom = Formula::rel(
            name.clone(),
            target.context.iter().map(|v| crate::logic::Term::var(v.clone())).collect(),
        );
        out.push_axiom(
            format!("{name}_excl"),
            Sequent::new(
                target.context.clone(),
                Formula::and(vec![target.formula.clone(), atom.clone()]),
                Formula::Falsity,
            ),
        );
        out.push_axiom(
            format!("{name}_cover"),
            Sequent::new(
                target.context.clone(),
                Formula::Truth,
                Formula::or(vec![target.formula.clone(), atom]),
            ),
        );
        names.push(name);
    }
    Ok((out, names))
}

/// Forgets the tables of symbols that are not in `sig` (the reduct of a
/// model of a Morleyized theory back to the base signature).
pub fn reduct(
    m: &crate::model::FiniteStructure,
    sig: &crate::logic::Signature,
) -> crate::model::FiniteStructure {
    let mut out = crate::model::FiniteStructure::new(m.size);
    for (name, table) in &m.functions {
        if sig.function_arity(name).is_some() {
            out.functions.insert(name.clone(), table.clone());
        }
    }
    for (name, table) in &m.relations {
        if sig.relation_arity(name).is_some() {
            out.relations.insert(name.clone(), table.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Signature, Term, Theory};
    use crate::model::{enumerate_models, Limits};

    /// A pointed-set theory: one constant, no axioms.
    fn pointed() -> Theory {
        let mut sig = Signature::new();
        sig.declare_function("c", 0).unwrap();
        Theory::new("pointed", sig)
    }

    #[test]
    fn negation_of_equality_is_the_complement() {
        let theory = pointed();
        let target = MorleyTarget::named(
            "nz",
            vec!["x".into()],
            Formula::eq(Term::var("x"), Term::constant("c")),
        );
        let (extended, names) = morleyize(&theory, &[target]).unwrap();
        assert_eq!(names, vec!["nz".to_string()]);
        assert_eq!(extended.axioms.len(), 2);
        // In every 2-element model, nz holds exactly off the constant.
        let models = enumerate_models(&extended, 2, false, &Limits::default()).unwrap();
        assert_eq!(models.len(), 2);
        for m in &models {
            let c = m.apply_fn("c", &[]).unwrap();
            for e in 0..2 {
                assert_eq!(m.rel_holds("nz", &[e]), Some(e != c));
            }
        }
    }

    #[test]
    fn negation_of_falsity_is_everything() {
        let theory = pointed();
        let target = MorleyTarget::named("nb", vec!["x".into()], Formula::Falsity);
        let (extended, _) = morleyize(&theory, &[target]).unwrap();
        let models = enumerate_models(&extended, 2, false, &Limits::default()).unwrap();
        assert!(!models.is_empty());
        for m in &models {
            for e in 0..2 {
                assert_eq!(m.rel_holds("nb", &[e]), Some(true));
            }
        }
    }

    #[test]
    fn morleyization_is_a_conservative_expansion_semantically() {
        // Every model of the extension reducts to a model of the base, and
        // every base model expands uniquely.
        let theory = pointed();
        let target = MorleyTarget::named(
            "nz",
            vec!["x".into()],
            Formula::eq(Term::var("x"), Term::constant("c")),
        );
        let (extended, _) = morleyize(&theory, &[target]).unwrap();
        let limits = Limits::default();
        for size in 0..=4 {
            let base_models = enumerate_models(&theory, size, false, &limits).unwrap();
            let ext_models = enumerate_models(&extended, size, false, &limits).unwrap();
            // Unique expansion: same count, and reducts biject onto base models.
            assert_eq!(base_models.len(), ext_models.len());
            let mut reducts: Vec<_> =
                ext_models.iter().map(|m| reduct(m, &theory.signature)).collect();
            reducts.sort();
            reducts.dedup();
            let mut base_sorted = base_models.clone();
            base_sorted.sort();
            assert_eq!(reducts, base_sorted);
        }
    }

    #[test]
    fn size_indexed_targets_are_rejected() {
        use crate::logic::{FamilyMember, FormulaFamily};
        let theory = pointed();
        let fam = FormulaFamily::size_capped(
            "n",
            vec![FamilyMember { label: "0".into(), formula: Formula::Truth }],
        );
        let target = MorleyTarget::new(vec![], Formula::FamilyOr(fam));
        assert_eq!(morleyize(&theory, &[target]), Err(MorleyError::SizeIndexedFamily));
    }
}
