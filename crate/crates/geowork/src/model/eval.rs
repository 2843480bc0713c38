
use serde::{Deserialize, Serialize};

use crate::logic::{Formula, Sequent, Term};

use super::structure::{tuples_of, Assignment, FiniteStructure};

/// A contract violation while evaluating a formula in a structure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable `{0}` is not bound by the assignment")]
    UnboundVariable(String),
    #[error("symbol `{0}` has no table in the structure")]
    MissingSymbol(String),
    #[error("assignment maps `{variable}` to {element}, carrier size is {size}")]
    ElementOutOfRange { variable: String, element: usize, size: usize },
}

struct Scope<'a> {
    base: &'a Assignment,
    stack: Vec<(String, usize)>,
}

impl<'a> Scope<'a> {
    fn lookup(&self, var: &str) -> Option<usize> {
        // Innermost binding wins.
        for (name, value) in self.stack.iter().rev() {
            if name == var {
                return Some(*value);
            }
        }
        self.base.get(var).copied()
    }
}

fn eval_term(m: &FiniteStructure, t: &Term, scope: &Scope) -> Result<usize, EvalError> {
    match t {
        Term::Var(v) => scope.lookup(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Term::App(f, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_term(m, a, scope)?);
            }
            m.apply_fn(f, &vals).ok_or_else(|| EvalError::MissingSymbol(f.clone()))
        }
    }
}

fn eval_in_scope(m: &FiniteStructure, f: &Formula, scope: &mut Scope) -> Result<bool, EvalError> {
    match f {
        Formula::Truth => Ok(true),
        Formula::Falsity => Ok(false),
        Formula::Eq(a, b) => Ok(eval_term(m, a, scope)? == eval_term(m, b, scope)?),
        Formula::Rel(r, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_term(m, a, scope)?);
            }
            m.rel_holds(r, &vals).ok_or_else(|| EvalError::MissingSymbol(r.clone()))
        }
        Formula::And(fs) => {
            for g in fs {
                if !eval_in_scope(m, g, scope)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_in_scope(m, g, scope)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::FamilyOr(fam) => {
            // Only the members within size_bound(|M|) participate; the
            // family's soundness obligation covers the rest.
            for member in fam.active_members(m.size) {
                if eval_in_scope(m, &member.formula, scope)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists(vars, body) => {
            let depth = scope.stack.len();
            for tuple in tuples_of(m.size, vars.len()) {
                scope.stack.truncate(depth);
                for (v, &value) in vars.iter().zip(&tuple) {
                    scope.stack.push((v.clone(), value));
                }
                if eval_in_scope(m, body, scope)? {
                    scope.stack.truncate(depth);
                    return Ok(true);
                }
            }
            scope.stack.truncate(depth);
            Ok(false)
        }
    }
}

/// Tarskian satisfaction of `f` in `m` under `assignment`.  The assignment
/// must cover the free variables of `f`; family disjunctions range over
/// their active members at cardinality `m.size`.
pub fn eval(m: &FiniteStructure, f: &Formula, assignment: &Assignment) -> Result<bool, EvalError> {
    for (v, &e) in assignment {
        if e >= m.size {
            return Err(EvalError::ElementOutOfRange { variable: v.clone(), element: e, size: m.size });
        }
    }
    let mut scope = Scope { base: assignment, stack: Vec::new() };
    eval_in_scope(m, f, &mut scope)
}

/// The outcome of checking one sequent in one structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequentVerdict {
    Holds,
    /// The sequent fails: this assignment makes the antecedent true and the
    /// consequent false.
    Fails { assignment: Assignment },
}

impl SequentVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SequentVerdict::Holds)
    }
}

/// Checks a sequent in a structure: true iff every context assignment making
/// the antecedent true also makes the consequent true.  On failure the first
/// witnessing assignment (in lexicographic order) is returned.
pub fn holds_sequent(m: &FiniteStructure, s: &Sequent) -> Result<SequentVerdict, EvalError> {
    for tuple in tuples_of(m.size, s.context.len()) {
        let assignment: Assignment =
            s.context.iter().cloned().zip(tuple.iter().copied()).collect();
        if eval(m, &s.antecedent, &assignment)? && !eval(m, &s.consequent, &assignment)? {
            return Ok(SequentVerdict::Fails { assignment });
        }
    }
    Ok(SequentVerdict::Holds)
}

/// Convenience: checks every axiom of a theory in a structure and returns
/// the first failure, if any.
pub fn satisfies_theory(
    m: &FiniteStructure,
    theory: &crate::logic::Theory,
) -> Result<Option<(String, Assignment)>, EvalError> {
    for axiom in &theory.axioms {
        if let SequentVerdict::Fails { assignment } = holds_sequent(m, &axiom.sequent)? {
            return Ok(Some((axiom.name.clone(), assignment)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{FamilyMember, Formula, FormulaFamily, Term};
    use std::collections::BTreeSet;

    fn assignment(pairs: &[(&str, usize)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    /// The two-element regular action of the order-2 group: e = id, g = swap.
    fn z2_regular() -> FiniteStructure {
        let mut m = FiniteStructure::new(2);
        m.set_function("e", 1, vec![0, 1]);
        m.set_function("g", 1, vec![1, 0]);
        m
    }

    #[test]
    fn truth_holds_everywhere() {
        let m = FiniteStructure::new(3);
        assert_eq!(eval(&m, &Formula::Truth, &Assignment::new()), Ok(true));
    }

    #[test]
    fn unbound_variable_is_a_contract_violation() {
        let m = FiniteStructure::new(2);
        let f = Formula::eq(Term::var("x"), Term::var("x"));
        assert_eq!(
            eval(&m, &f, &Assignment::new()),
            Err(EvalError::UnboundVariable("x".into()))
        );
    }

    #[test]
    fn torsor_family_disjunction_covers_the_orbit() {
        // In the regular z2 action, y = e(x) \/ y = g(x) holds for x=0, y=1.
        let m = z2_regular();
        let fam = FormulaFamily::labels(
            "g",
            vec![
                FamilyMember {
                    label: "e".into(),
                    formula: Formula::eq(Term::var("y"), Term::app("e", vec![Term::var("x")])),
                },
                FamilyMember {
                    label: "g".into(),
                    formula: Formula::eq(Term::var("y"), Term::app("g", vec![Term::var("x")])),
                },
            ],
        );
        let f = Formula::FamilyOr(fam);
        assert_eq!(eval(&m, &f, &assignment(&[("x", 0), ("y", 1)])), Ok(true));
    }

    #[test]
    fn size_capped_family_ignores_inactive_members() {
        let m = FiniteStructure::new(1);
        let fam = FormulaFamily::size_capped(
            "n",
            vec![
                FamilyMember { label: "0".into(), formula: Formula::Falsity },
                FamilyMember { label: "1".into(), formula: Formula::Falsity },
                // Would be true, but only activates at size >= 2.
                FamilyMember { label: "2".into(), formula: Formula::Truth },
            ],
        );
        assert_eq!(eval(&m, &Formula::FamilyOr(fam), &Assignment::new()), Ok(false));
    }

    #[test]
    fn falsity_antecedent_holds_vacuously() {
        let m = z2_regular();
        let s = Sequent::new(
            vec!["x".into()],
            Formula::Falsity,
            Formula::eq(Term::var("x"), Term::app("g", vec![Term::var("x")])),
        );
        assert_eq!(holds_sequent(&m, &s), Ok(SequentVerdict::Holds));
    }

    #[test]
    fn theta_functionality_holds_in_torsor() {
        // theta(x,y) /\ theta(x,y') |- y = y' with theta = (y = g(x)).
        let m = z2_regular();
        let theta = |y: &str| Formula::eq(Term::var(y), Term::app("g", vec![Term::var("x")]));
        let s = Sequent::new(
            vec!["x".into(), "y".into(), "y2".into()],
            Formula::and(vec![theta("y"), theta("y2")]),
            Formula::eq(Term::var("y"), Term::var("y2")),
        );
        assert_eq!(holds_sequent(&m, &s), Ok(SequentVerdict::Holds));
    }

    #[test]
    fn misinterpreted_identity_fails_with_counterexample() {
        // A structure where e is the constant-0 map does not satisfy
        // top |- e(x) = x; the counterexample is x = 1.
        let mut m = FiniteStructure::new(2);
        m.set_function("e", 1, vec![0, 0]);
        let s = Sequent::new(
            vec!["x".into()],
            Formula::Truth,
            Formula::eq(Term::app("e", vec![Term::var("x")]), Term::var("x")),
        );
        assert_eq!(
            holds_sequent(&m, &s),
            Ok(SequentVerdict::Fails { assignment: assignment(&[("x", 1)]) })
        );
    }

    #[test]
    fn exists_respects_shadowing() {
        // exists x. r(x) with outer x bound to a non-r element.
        let mut m = FiniteStructure::new(2);
        m.set_relation("r", 1, BTreeSet::from([vec![1]]));
        let f = Formula::and(vec![
            Formula::rel("r", vec![Term::var("x")]),
            Formula::exists(vec!["x".into()], Formula::rel("r", vec![Term::var("x")])),
        ]);
        assert_eq!(eval(&m, &f, &assignment(&[("x", 0)])), Ok(false));
        assert_eq!(eval(&m, &f, &assignment(&[("x", 1)])), Ok(true));
    }
}
