//! Brute-force model enumeration with early pruning.
//!
//! The search assigns interpretation table cells one at a time (functions
//! first, in declaration order, then relations) and evaluates every axiom
//! that mentions the touched symbol under Kleene three-valued semantics
//! over the partial tables.  A branch is cut as soon as some axiom instance
//! has a definitely-true antecedent and a definitely-false consequent.
//! Axioms are compiled once per run to an index-based form so the hot loop
//! never touches symbol names.

use std::collections::BTreeSet;

use crate::logic::{Formula, Term, Theory};

use super::canonical::{canonical_form, Limits, SearchError};
use super::structure::{tuples_of, FiniteStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    True,
    False,
    Unknown,
}

enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

enum CFormula {
    Truth,
    Falsity,
    Eq(CTerm, CTerm),
    Rel(usize, Vec<CTerm>),
    And(Vec<CFormula>),
    Or(Vec<CFormula>),
    Exists(usize, Box<CFormula>),
}

struct CompiledAxiom {
    context_len: usize,
    antecedent: CFormula,
    consequent: CFormula,
    touches_fn: BTreeSet<usize>,
    touches_rel: BTreeSet<usize>,
}

struct Compiler<'a> {
    theory: &'a Theory,
    size: usize,
    fn_names: Vec<String>,
    rel_names: Vec<String>,
    touched_fn: BTreeSet<usize>,
    touched_rel: BTreeSet<usize>,
}

impl<'a> Compiler<'a> {
    fn fn_slot(&self, name: &str) -> usize {
        self.fn_names.iter().position(|n| n == name).expect("validated theory")
    }

    fn rel_slot(&self, name: &str) -> usize {
        self.rel_names.iter().position(|n| n == name).expect("validated theory")
    }

    fn term(&mut self, t: &Term, scope: &mut Vec<String>) -> CTerm {
        match t {
            Term::Var(v) => {
                let slot = scope.iter().rposition(|s| s == v).expect("validated context");
                CTerm::Var(slot)
            }
            Term::App(f, args) => {
                let slot = self.fn_slot(f);
                self.touched_fn.insert(slot);
                CTerm::App(slot, args.iter().map(|a| self.term(a, scope)).collect())
            }
        }
    }

    fn formula(&mut self, f: &Formula, scope: &mut Vec<String>) -> CFormula {
        match f {
            Formula::Truth => CFormula::Truth,
            Formula::Falsity => CFormula::Falsity,
            Formula::Eq(a, b) => CFormula::Eq(self.term(a, scope), self.term(b, scope)),
            Formula::Rel(r, args) => {
                let slot = self.rel_slot(r);
                self.touched_rel.insert(slot);
                CFormula::Rel(slot, args.iter().map(|a| self.term(a, scope)).collect())
            }
            Formula::And(fs) => CFormula::And(fs.iter().map(|g| self.formula(g, scope)).collect()),
            Formula::Or(fs) => CFormula::Or(fs.iter().map(|g| self.formula(g, scope)).collect()),
            Formula::FamilyOr(fam) => {
                // The enumeration size is fixed, so the active member set is
                // static; families compile to plain disjunctions.
                CFormula::Or(
                    fam.active_members(self.size)
                        .iter()
                        .map(|m| self.formula(&m.formula, scope))
                        .collect(),
                )
            }
            Formula::Exists(vs, body) => {
                let depth = scope.len();
                scope.extend(vs.iter().cloned());
                let body = self.formula(body, scope);
                scope.truncate(depth);
                CFormula::Exists(vs.len(), Box::new(body))
            }
        }
    }

    fn axiom(&mut self, context: &[String], ante: &Formula, cons: &Formula) -> CompiledAxiom {
        self.touched_fn.clear();
        self.touched_rel.clear();
        let mut scope: Vec<String> = context.to_vec();
        let antecedent = self.formula(ante, &mut scope);
        let consequent = self.formula(cons, &mut scope);
        CompiledAxiom {
            context_len: context.len(),
            antecedent,
            consequent,
            touches_fn: std::mem::take(&mut self.touched_fn),
            touches_rel: std::mem::take(&mut self.touched_rel),
        }
    }

    fn compile(theory: &'a Theory, size: usize) -> (Vec<String>, Vec<String>, Vec<CompiledAxiom>) {
        let fn_names: Vec<String> =
            theory.signature.functions().iter().map(|d| d.name.clone()).collect();
        let rel_names: Vec<String> =
            theory.signature.relations().iter().map(|d| d.name.clone()).collect();
        let mut compiler = Compiler {
            theory,
            size,
            fn_names,
            rel_names,
            touched_fn: BTreeSet::new(),
            touched_rel: BTreeSet::new(),
        };
        let axioms = compiler
            .theory
            .axioms
            .iter()
            .map(|a| compiler.axiom(&a.sequent.context, &a.sequent.antecedent, &a.sequent.consequent))
            .collect();
        (compiler.fn_names, compiler.rel_names, axioms)
    }
}

/// Partial tables: `None` cells are not yet decided.
struct Partial {
    size: usize,
    fn_arity: Vec<usize>,
    rel_arity: Vec<usize>,
    fn_cells: Vec<Vec<Option<usize>>>,
    rel_cells: Vec<Vec<Option<bool>>>,
}

impl Partial {
    fn term(&self, t: &CTerm, env: &[usize]) -> Option<usize> {
        match t {
            CTerm::Var(slot) => Some(env[*slot]),
            CTerm::App(f, args) => {
                let mut idx = 0usize;
                for a in args {
                    idx = idx * self.size + self.term(a, env)?;
                }
                self.fn_cells[*f][idx]
            }
        }
    }

    fn eval(&self, f: &CFormula, env: &mut Vec<usize>) -> Tri {
        match f {
            CFormula::Truth => Tri::True,
            CFormula::Falsity => Tri::False,
            CFormula::Eq(a, b) => match (self.term(a, env), self.term(b, env)) {
                (Some(x), Some(y)) => {
                    if x == y {
                        Tri::True
                    } else {
                        Tri::False
                    }
                }
                _ => Tri::Unknown,
            },
            CFormula::Rel(r, args) => {
                let mut idx = 0usize;
                for a in args {
                    match self.term(a, env) {
                        Some(v) => idx = idx * self.size + v,
                        None => return Tri::Unknown,
                    }
                }
                match self.rel_cells[*r][idx] {
                    Some(true) => Tri::True,
                    Some(false) => Tri::False,
                    None => Tri::Unknown,
                }
            }
            CFormula::And(fs) => {
                let mut result = Tri::True;
                for g in fs {
                    match self.eval(g, env) {
                        Tri::False => return Tri::False,
                        Tri::Unknown => result = Tri::Unknown,
                        Tri::True => {}
                    }
                }
                result
            }
            CFormula::Or(fs) => {
                let mut result = Tri::False;
                for g in fs {
                    match self.eval(g, env) {
                        Tri::True => return Tri::True,
                        Tri::Unknown => result = Tri::Unknown,
                        Tri::False => {}
                    }
                }
                result
            }
            CFormula::Exists(nvars, body) => {
                let depth = env.len();
                let mut result = Tri::False;
                for tuple in tuples_of(self.size, *nvars) {
                    env.truncate(depth);
                    env.extend(tuple);
                    match self.eval(body, env) {
                        Tri::True => {
                            env.truncate(depth);
                            return Tri::True;
                        }
                        Tri::Unknown => result = Tri::Unknown,
                        Tri::False => {}
                    }
                }
                env.truncate(depth);
                result
            }
        }
    }

    /// True iff the axiom is definitely violated: some context assignment
    /// with a definitely-true antecedent and definitely-false consequent.
    fn violates(&self, axiom: &CompiledAxiom) -> bool {
        let mut env = Vec::with_capacity(axiom.context_len + 4);
        for tuple in tuples_of(self.size, axiom.context_len) {
            env.clear();
            env.extend(tuple);
            if self.eval(&axiom.antecedent, &mut env) == Tri::True {
                env.truncate(axiom.context_len);
                if self.eval(&axiom.consequent, &mut env) == Tri::False {
                    return true;
                }
            }
        }
        false
    }

    fn to_structure(&self, fn_names: &[String], rel_names: &[String]) -> FiniteStructure {
        let mut m = FiniteStructure::new(self.size);
        for (slot, name) in fn_names.iter().enumerate() {
            let values = self.fn_cells[slot].iter().map(|v| v.expect("leaf")).collect();
            m.set_function(name, self.fn_arity[slot], values);
        }
        for (slot, name) in rel_names.iter().enumerate() {
            let mut tuples = BTreeSet::new();
            for (idx, tuple) in tuples_of(self.size, self.rel_arity[slot]).enumerate() {
                if self.rel_cells[slot][idx] == Some(true) {
                    tuples.insert(tuple);
                }
            }
            m.set_relation(name, self.rel_arity[slot], tuples);
        }
        m
    }
}

#[derive(Clone, Copy)]
enum Cell {
    Fn { slot: usize, idx: usize },
    Rel { slot: usize, idx: usize },
}

struct Enumerator {
    partial: Partial,
    cells: Vec<Cell>,
    axioms: Vec<CompiledAxiom>,
    fn_watchers: Vec<Vec<usize>>,
    rel_watchers: Vec<Vec<usize>>,
    fn_names: Vec<String>,
    rel_names: Vec<String>,
    found: Vec<FiniteStructure>,
}

impl Enumerator {
    fn dfs(&mut self, depth: usize) {
        if depth == self.cells.len() {
            // Safety net: everything is total now, re-check every axiom.
            if self.axioms.iter().all(|a| !self.partial.violates(a)) {
                self.found.push(self.partial.to_structure(&self.fn_names, &self.rel_names));
            }
            return;
        }
        match self.cells[depth] {
            Cell::Fn { slot, idx } => {
                for value in 0..self.partial.size {
                    self.partial.fn_cells[slot][idx] = Some(value);
                    if self.fn_watchers[slot]
                        .iter()
                        .all(|&a| !self.partial.violates(&self.axioms[a]))
                    {
                        self.dfs(depth + 1);
                    }
                }
                self.partial.fn_cells[slot][idx] = None;
            }
            Cell::Rel { slot, idx } => {
                for value in [false, true] {
                    self.partial.rel_cells[slot][idx] = Some(value);
                    if self.rel_watchers[slot]
                        .iter()
                        .all(|&a| !self.partial.violates(&self.axioms[a]))
                    {
                        self.dfs(depth + 1);
                    }
                }
                self.partial.rel_cells[slot][idx] = None;
            }
        }
    }
}

/// Enumerates every structure of the given cardinality satisfying all
/// axioms of the theory.  With `up_to_iso`, returns one canonical
/// representative per isomorphism class (in canonical order); otherwise the
/// raw labelled structures in search order.
pub fn enumerate_models(
    theory: &Theory,
    size: usize,
    up_to_iso: bool,
    limits: &Limits,
) -> Result<Vec<FiniteStructure>, SearchError> {
    if size > limits.size_cap {
        return Err(SearchError::SizeCapExceeded { requested: size, cap: limits.size_cap });
    }
    // A constant cannot be interpreted in an empty carrier.
    if size == 0 && theory.signature.functions().iter().any(|d| d.arity == 0) {
        return Ok(Vec::new());
    }
    let (fn_names, rel_names, axioms) = Compiler::compile(theory, size);

    // Axioms mentioning no symbol at all are decided by the cardinality
    // alone; check them once up front.
    let fn_arity: Vec<usize> = theory.signature.functions().iter().map(|d| d.arity).collect();
    let rel_arity: Vec<usize> = theory.signature.relations().iter().map(|d| d.arity).collect();
    let partial = Partial {
        size,
        fn_cells: fn_arity.iter().map(|&a| vec![None; FiniteStructure::table_len(size, a)]).collect(),
        rel_cells: rel_arity.iter().map(|&a| vec![None; FiniteStructure::table_len(size, a)]).collect(),
        fn_arity,
        rel_arity,
    };
    for axiom in &axioms {
        if axiom.touches_fn.is_empty() && axiom.touches_rel.is_empty() && partial.violates(axiom) {
            return Ok(Vec::new());
        }
    }

    let mut cells = Vec::new();
    for (slot, n) in partial.fn_cells.iter().enumerate() {
        for idx in 0..n.len() {
            cells.push(Cell::Fn { slot, idx });
        }
    }
    for (slot, n) in partial.rel_cells.iter().enumerate() {
        for idx in 0..n.len() {
            cells.push(Cell::Rel { slot, idx });
        }
    }
    let fn_watchers: Vec<Vec<usize>> = (0..partial.fn_cells.len())
        .map(|slot| {
            axioms
                .iter()
                .enumerate()
                .filter(|(_, a)| a.touches_fn.contains(&slot))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let rel_watchers: Vec<Vec<usize>> = (0..partial.rel_cells.len())
        .map(|slot| {
            axioms
                .iter()
                .enumerate()
                .filter(|(_, a)| a.touches_rel.contains(&slot))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut enumerator = Enumerator {
        partial,
        cells,
        axioms,
        fn_watchers,
        rel_watchers,
        fn_names,
        rel_names,
        found: Vec::new(),
    };
    enumerator.dfs(0);
    let raw = enumerator.found;

    if !up_to_iso {
        return Ok(raw);
    }
    let mut classes = BTreeSet::new();
    for m in &raw {
        classes.insert(canonical_form(m, limits)?);
    }
    Ok(classes.into_iter().map(|c| c.0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Sequent, Signature, Theory};
    use crate::logic::{Formula, Term};

    #[test]
    fn empty_theory_over_empty_signature_has_one_model_per_size() {
        let t = Theory::new("empty", Signature::new());
        let limits = Limits::default();
        let models = enumerate_models(&t, 1, false, &limits).unwrap();
        assert_eq!(models.len(), 1);
        assert_eq!(models[0].size, 1);
    }

    #[test]
    fn size_cap_is_enforced() {
        let t = Theory::new("empty", Signature::new());
        assert_eq!(
            enumerate_models(&t, 7, false, &Limits::default()),
            Err(SearchError::SizeCapExceeded { requested: 7, cap: 6 })
        );
    }

    #[test]
    fn involution_theory_counts() {
        // One unary f with f(f(x)) = x: involutions.  On 3 elements there
        // are 4 involutions (identity plus three transpositions), in 2
        // isomorphism classes.
        let mut sig = Signature::new();
        sig.declare_function("f", 1).unwrap();
        let mut t = Theory::new("involution", sig);
        t.push_axiom(
            "sq",
            Sequent::new(
                vec!["x".into()],
                Formula::Truth,
                Formula::eq(
                    Term::app("f", vec![Term::app("f", vec![Term::var("x")])]),
                    Term::var("x"),
                ),
            ),
        );
        let limits = Limits::default();
        let raw = enumerate_models(&t, 3, false, &limits).unwrap();
        assert_eq!(raw.len(), 4);
        let classes = enumerate_models(&t, 3, true, &limits).unwrap();
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn inhabitation_axiom_rules_out_the_empty_model() {
        let mut t = Theory::new("inhabited", Signature::new());
        t.push_axiom(
            "inhabited",
            Sequent::new(
                vec![],
                Formula::Truth,
                Formula::exists(vec!["x".into()], Formula::eq(Term::var("x"), Term::var("x"))),
            ),
        );
        let limits = Limits::default();
        assert_eq!(enumerate_models(&t, 0, false, &limits).unwrap().len(), 0);
        assert_eq!(enumerate_models(&t, 1, false, &limits).unwrap().len(), 1);
    }

    #[test]
    fn every_enumerated_model_satisfies_the_theory() {
        // Cross-check the compiled search evaluator against the public one.
        let mut sig = Signature::new();
        sig.declare_function("f", 1).unwrap();
        sig.declare_relation("r", 1).unwrap();
        let mut t = Theory::new("fix", sig);
        // r marks exactly the fixed points of f.
        t.push_axiom(
            "fixed_marked",
            Sequent::new(
                vec!["x".into()],
                Formula::eq(Term::app("f", vec![Term::var("x")]), Term::var("x")),
                Formula::rel("r", vec![Term::var("x")]),
            ),
        );
        t.push_axiom(
            "marked_fixed",
            Sequent::new(
                vec!["x".into()],
                Formula::rel("r", vec![Term::var("x")]),
                Formula::eq(Term::app("f", vec![Term::var("x")]), Term::var("x")),
            ),
        );
        let limits = Limits::default();
        let models = enumerate_models(&t, 2, false, &limits).unwrap();
        // 4 unary maps on {0,1}, r determined by each: 4 models.
        assert_eq!(models.len(), 4);
        for m in &models {
            assert_eq!(crate::model::satisfies_theory(m, &t).unwrap(), None);
        }
    }
}
