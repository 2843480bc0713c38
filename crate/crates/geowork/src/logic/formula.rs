use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::signature::{Signature, SymbolKind};
use super::term::Term;

/// A geometric formula.  There is deliberately no negation constructor:
/// negations enter only through Morleyized relation symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    Truth,
    Falsity,
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    /// An indexed disjunction over a (possibly large) family of instances,
    /// with a cardinality-aware activation rule.  See [`FormulaFamily`].
    FamilyOr(FormulaFamily),
    Exists(Vec<String>, Box<Formula>),
}

/// An indexed family of formulas.
///
/// This is the finite representation of the indexed disjunctions of
/// geometric logic.  Members are materialized up front; the `domain`
/// determines which members are *active* when the family is evaluated in a
/// structure of a given cardinality.  A `SizeCapped` family stands for a
/// conceptually unbounded index set of which only a size-indexed prefix can
/// ever be satisfied; the family author carries the soundness obligation
/// that, in a structure of cardinality `n`, any member whose instance is
/// satisfiable is among `size_bound(n)`.  Checkers audit this obligation
/// empirically where it matters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormulaFamily {
    /// Display name of the index variable (printing only).
    pub binder: String,
    pub domain: FamilyDomain,
    pub members: Vec<FamilyMember>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyMember {
    pub label: String,
    pub formula: Formula,
}

/// Where a family's indices come from, and which members are active at a
/// given model cardinality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyDomain {
    /// A finite set of labels; every member is always active.
    Labels,
    /// A finite integer range `lo..=hi`; every member is always active.
    Range { lo: i64, hi: i64 },
    /// Member `k` (by position) is active in structures of cardinality
    /// `>= k`.  Represents a `0..size` bound over a conceptually unbounded
    /// index set, truncated at the materialized members.
    SizeCapped,
}

impl FormulaFamily {
    pub fn labels(binder: impl Into<String>, members: Vec<FamilyMember>) -> Self {
        FormulaFamily { binder: binder.into(), domain: FamilyDomain::Labels, members }
    }

    pub fn size_capped(binder: impl Into<String>, members: Vec<FamilyMember>) -> Self {
        FormulaFamily { binder: binder.into(), domain: FamilyDomain::SizeCapped, members }
    }

    /// Indices of the members active in a structure of cardinality `size`.
    /// Finite for every `size` and monotone in `size`.
    pub fn size_bound(&self, size: usize) -> std::ops::Range<usize> {
        match self.domain {
            FamilyDomain::Labels | FamilyDomain::Range { .. } => 0..self.members.len(),
            FamilyDomain::SizeCapped => 0..self.members.len().min(size + 1),
        }
    }

    pub fn active_members(&self, size: usize) -> &[FamilyMember] {
        &self.members[self.size_bound(size)]
    }

    /// Members cut off by `size_bound` at this cardinality; these carry the
    /// soundness obligation (they must be unsatisfiable at this size).
    pub fn inactive_members(&self, size: usize) -> &[FamilyMember] {
        &self.members[self.size_bound(size).end..]
    }

    /// Whether `size_bound` can ever cut members off.
    pub fn is_size_indexed(&self) -> bool {
        matches!(self.domain, FamilyDomain::SizeCapped)
    }

    pub fn map_formulas(&self, f: &mut impl FnMut(&Formula) -> Formula) -> FormulaFamily {
        FormulaFamily {
            binder: self.binder.clone(),
            domain: self.domain.clone(),
            members: self
                .members
                .iter()
                .map(|m| FamilyMember { label: m.label.clone(), formula: f(&m.formula) })
                .collect(),
        }
    }
}

impl Formula {
    pub fn truth() -> Formula {
        Formula::Truth
    }

    pub fn falsity() -> Formula {
        Formula::Falsity
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn rel(symbol: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Rel(symbol.into(), args)
    }

    /// Conjunction; flattens the degenerate cases.
    pub fn and(conjuncts: Vec<Formula>) -> Formula {
        match conjuncts.len() {
            0 => Formula::Truth,
            1 => conjuncts.into_iter().next().unwrap(),
            _ => Formula::And(conjuncts),
        }
    }

    /// Finite disjunction; flattens the degenerate cases.
    pub fn or(disjuncts: Vec<Formula>) -> Formula {
        match disjuncts.len() {
            0 => Formula::Falsity,
            1 => disjuncts.into_iter().next().unwrap(),
            _ => Formula::Or(disjuncts),
        }
    }

    /// Existential quantification; zero binders is the body itself.
    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn family_or(family: FormulaFamily) -> Formula {
        Formula::FamilyOr(family)
    }

    /// The variables occurring free, respecting `Exists` binding.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Truth | Formula::Falsity => {}
            Formula::Eq(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Formula::Rel(_, args) => {
                for a in args {
                    a.vars_into(out);
                }
            }
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.free_vars_into(out);
                }
            }
            Formula::FamilyOr(fam) => {
                for m in &fam.members {
                    m.formula.free_vars_into(out);
                }
            }
            Formula::Exists(vs, body) => {
                let mut inner = BTreeSet::new();
                body.free_vars_into(&mut inner);
                for v in vs {
                    inner.remove(v);
                }
                out.append(&mut inner);
            }
        }
    }

    /// Capture-avoiding simultaneous substitution.  Binders that would
    /// capture a variable of a substituted term are renamed to fresh names.
    pub fn substitute(&self, binding: &BTreeMap<String, Term>) -> Formula {
        if binding.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Truth | Formula::Falsity => self.clone(),
            Formula::Eq(a, b) => Formula::Eq(a.substitute(binding), b.substitute(binding)),
            Formula::Rel(r, args) => {
                Formula::Rel(r.clone(), args.iter().map(|a| a.substitute(binding)).collect())
            }
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(binding)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(binding)).collect()),
            Formula::FamilyOr(fam) => {
                Formula::FamilyOr(fam.map_formulas(&mut |f| f.substitute(binding)))
            }
            Formula::Exists(vs, body) => {
                // Bound variables shadow the binding.
                let mut live: BTreeMap<String, Term> = binding
                    .iter()
                    .filter(|(k, _)| !vs.contains(k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                if live.is_empty() {
                    return self.clone();
                }
                // Rename binders that collide with variables of the
                // substituted terms.
                let mut incoming: BTreeSet<String> = BTreeSet::new();
                for t in live.values() {
                    t.vars_into(&mut incoming);
                }
                let mut avoid: BTreeSet<String> = incoming.clone();
                avoid.extend(body.free_vars());
                avoid.extend(live.keys().cloned());
                let mut new_vs = Vec::with_capacity(vs.len());
                for v in vs {
                    if incoming.contains(v) {
                        let fresh = fresh_var(v, &avoid);
                        avoid.insert(fresh.clone());
                        live.insert(v.clone(), Term::Var(fresh.clone()));
                        new_vs.push(fresh);
                    } else {
                        avoid.insert(v.clone());
                        new_vs.push(v.clone());
                    }
                }
                Formula::Exists(new_vs, Box::new(body.substitute(&live)))
            }
        }
    }

    /// Checks well-formedness over a signature in a variable context:
    /// symbols declared with matching arities and kinds, free variables
    /// inside the context.  Returns the first problem found.
    pub fn check(&self, sig: &Signature, ctx: &BTreeSet<String>) -> Result<(), WfError> {
        match self {
            Formula::Truth | Formula::Falsity => Ok(()),
            Formula::Eq(a, b) => {
                check_term(a, sig, ctx)?;
                check_term(b, sig, ctx)
            }
            Formula::Rel(r, args) => {
                match sig.lookup(r) {
                    None => return Err(WfError::UndeclaredSymbol(r.clone())),
                    Some((SymbolKind::Function, _)) => {
                        return Err(WfError::KindMismatch(r.clone()))
                    }
                    Some((SymbolKind::Relation, decl)) => {
                        if decl.arity != args.len() {
                            return Err(WfError::ArityMismatch {
                                symbol: r.clone(),
                                declared: decl.arity,
                                found: args.len(),
                            });
                        }
                    }
                }
                for a in args {
                    check_term(a, sig, ctx)?;
                }
                Ok(())
            }
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.check(sig, ctx)?;
                }
                Ok(())
            }
            Formula::FamilyOr(fam) => {
                for m in &fam.members {
                    m.formula.check(sig, ctx)?;
                }
                Ok(())
            }
            Formula::Exists(vs, body) => {
                let mut inner = ctx.clone();
                inner.extend(vs.iter().cloned());
                body.check(sig, &inner)
            }
        }
    }
}

fn check_term(t: &Term, sig: &Signature, ctx: &BTreeSet<String>) -> Result<(), WfError> {
    match t {
        Term::Var(v) => {
            if ctx.contains(v) {
                Ok(())
            } else {
                Err(WfError::FreeVariableOutsideContext(v.clone()))
            }
        }
        Term::App(f, args) => {
            match sig.lookup(f) {
                None => return Err(WfError::UndeclaredSymbol(f.clone())),
                Some((SymbolKind::Relation, _)) => return Err(WfError::KindMismatch(f.clone())),
                Some((SymbolKind::Function, decl)) => {
                    if decl.arity != args.len() {
                        return Err(WfError::ArityMismatch {
                            symbol: f.clone(),
                            declared: decl.arity,
                            found: args.len(),
                        });
                    }
                }
            }
            for a in args {
                check_term(a, sig, ctx)?;
            }
            Ok(())
        }
    }
}

/// A well-formedness violation found by [`Formula::check`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum WfError {
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("symbol `{0}` used with the wrong kind (function vs relation)")]
    KindMismatch(String),
    #[error("symbol `{symbol}` declared with arity {declared}, used with {found}")]
    ArityMismatch { symbol: String, declared: usize, found: usize },
    #[error("variable `{0}` is free but not in the context")]
    FreeVariableOutsideContext(String),
}

/// Picks a variable name derived from `base` that is not in `avoid`.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { "v" } else { stem };
    let mut k = 1usize;
    loop {
        let candidate = format!("{stem}_{k}");
        if !avoid.contains(&candidate) {
            return candidate;
        }
        k += 1;
    }
}

/// Alpha-equivalence: structural equality up to renaming of bound variables.
pub fn alpha_eq(lhs: &Formula, rhs: &Formula) -> bool {
    alpha_rec(lhs, rhs, &mut BTreeMap::new(), &mut BTreeMap::new(), &mut 0)
}

fn alpha_rec(
    lhs: &Formula,
    rhs: &Formula,
    lmap: &mut BTreeMap<String, usize>,
    rmap: &mut BTreeMap<String, usize>,
    counter: &mut usize,
) -> bool {
    match (lhs, rhs) {
        (Formula::Truth, Formula::Truth) | (Formula::Falsity, Formula::Falsity) => true,
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => {
            alpha_term(a1, a2, lmap, rmap) && alpha_term(b1, b2, lmap, rmap)
        }
        (Formula::Rel(r1, a1), Formula::Rel(r2, a2)) => {
            r1 == r2
                && a1.len() == a2.len()
                && a1.iter().zip(a2).all(|(x, y)| alpha_term(x, y, lmap, rmap))
        }
        (Formula::And(f1), Formula::And(f2)) | (Formula::Or(f1), Formula::Or(f2)) => {
            f1.len() == f2.len()
                && f1.iter().zip(f2).all(|(x, y)| alpha_rec(x, y, lmap, rmap, counter))
        }
        (Formula::FamilyOr(fam1), Formula::FamilyOr(fam2)) => {
            fam1.domain == fam2.domain
                && fam1.members.len() == fam2.members.len()
                && fam1.members.iter().zip(&fam2.members).all(|(m1, m2)| {
                    m1.label == m2.label && alpha_rec(&m1.formula, &m2.formula, lmap, rmap, counter)
                })
        }
        (Formula::Exists(v1, b1), Formula::Exists(v2, b2)) => {
            if v1.len() != v2.len() {
                return false;
            }
            let saved_l: Vec<Option<usize>> = v1.iter().map(|v| lmap.get(v).copied()).collect();
            let saved_r: Vec<Option<usize>> = v2.iter().map(|v| rmap.get(v).copied()).collect();
            for (x, y) in v1.iter().zip(v2) {
                let id = *counter;
                *counter += 1;
                lmap.insert(x.clone(), id);
                rmap.insert(y.clone(), id);
            }
            let result = alpha_rec(b1, b2, lmap, rmap, counter);
            for (v, saved) in v1.iter().zip(saved_l) {
                match saved {
                    Some(id) => lmap.insert(v.clone(), id),
                    None => lmap.remove(v),
                };
            }
            for (v, saved) in v2.iter().zip(saved_r) {
                match saved {
                    Some(id) => rmap.insert(v.clone(), id),
                    None => rmap.remove(v),
                };
            }
            result
        }
        _ => false,
    }
}

fn alpha_term(
    lhs: &Term,
    rhs: &Term,
    lmap: &BTreeMap<String, usize>,
    rmap: &BTreeMap<String, usize>,
) -> bool {
    match (lhs, rhs) {
        (Term::Var(x), Term::Var(y)) => match (lmap.get(x), rmap.get(y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::App(f, a1), Term::App(g, a2)) => {
            f == g
                && a1.len() == a2.len()
                && a1.iter().zip(a2).all(|(x, y)| alpha_term(x, y, lmap, rmap))
        }
        _ => false,
    }
}

/// Splits a formula into regular disjuncts: formulas built from equality,
/// relation atoms, conjunction and existentials only, whose (finite or
/// family) disjunction is equivalent to the input.  Family members are
/// expanded; a `SizeCapped` family cannot be expanded soundly and is
/// reported as an error.
pub fn regular_disjuncts(f: &Formula) -> Result<Vec<Formula>, RegularSplitError> {
    match f {
        Formula::Truth | Formula::Eq(..) | Formula::Rel(..) => Ok(vec![f.clone()]),
        Formula::Falsity => Ok(vec![]),
        Formula::Or(fs) => {
            let mut out = Vec::new();
            for g in fs {
                out.extend(regular_disjuncts(g)?);
            }
            Ok(out)
        }
        Formula::FamilyOr(fam) => {
            if fam.is_size_indexed() {
                return Err(RegularSplitError::SizeIndexedFamily);
            }
            let mut out = Vec::new();
            for m in &fam.members {
                out.extend(regular_disjuncts(&m.formula)?);
            }
            Ok(out)
        }
        Formula::And(fs) => {
            // Distribute conjunction over the disjunct lists of the parts.
            let mut acc: Vec<Vec<Formula>> = vec![Vec::new()];
            for g in fs {
                let parts = regular_disjuncts(g)?;
                let mut next = Vec::with_capacity(acc.len() * parts.len());
                for prefix in &acc {
                    for p in &parts {
                        let mut row = prefix.clone();
                        row.push(p.clone());
                        next.push(row);
                    }
                }
                acc = next;
            }
            Ok(acc.into_iter().map(Formula::and).collect())
        }
        Formula::Exists(vs, body) => Ok(regular_disjuncts(body)?
            .into_iter()
            .map(|d| Formula::exists(vs.clone(), d))
            .collect()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegularSplitError {
    #[error("cannot expand a size-indexed family into a finite disjunct list")]
    SizeIndexedFamily,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }
    fn y() -> Term {
        Term::var("y")
    }
    fn z() -> Term {
        Term::var("z")
    }

    #[test]
    fn free_vars_of_reflexive_equality() {
        assert_eq!(
            Formula::eq(x(), x()).free_vars(),
            BTreeSet::from(["x".to_string()])
        );
    }

    #[test]
    fn binder_removes_variable() {
        let f = Formula::exists(vec!["y".into()], Formula::rel("R", vec![x(), y()]));
        assert_eq!(f.free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn free_vars_mix_of_bound_and_free() {
        // Conjunction([Eq(x,y), Exists(x, Eq(x,z))]) has free {x, y, z}: the
        // first conjunct's x is free even though the second binds its own x.
        let f = Formula::and(vec![
            Formula::eq(x(), y()),
            Formula::exists(vec!["x".into()], Formula::eq(x(), z())),
        ]);
        assert_eq!(
            f.free_vars(),
            BTreeSet::from(["x".to_string(), "y".to_string(), "z".to_string()])
        );
    }

    #[test]
    fn substitute_variable_for_variable() {
        let f = Formula::eq(x(), Term::constant("c"));
        let binding = BTreeMap::from([("x".to_string(), Term::var("d"))]);
        assert_eq!(f.substitute(&binding), Formula::eq(Term::var("d"), Term::constant("c")));
    }

    #[test]
    fn substitute_avoids_capture() {
        // Exists(y, Eq(x,y)) with x -> y must rename the binder.
        let f = Formula::exists(vec!["y".into()], Formula::eq(x(), y()));
        let binding = BTreeMap::from([("x".to_string(), Term::var("y"))]);
        let g = f.substitute(&binding);
        match &g {
            Formula::Exists(vs, body) => {
                assert_eq!(vs.len(), 1);
                assert_ne!(vs[0], "y", "binder must be renamed");
                assert_eq!(**body, Formula::eq(Term::var("y"), Term::var(vs[0].clone())));
            }
            other => panic!("expected Exists, got {other:?}"),
        }
        // And the result is alpha-equivalent to Exists(y', Eq(y, y')).
        let expected = Formula::exists(vec!["w".into()], Formula::eq(y(), Term::var("w")));
        assert!(alpha_eq(&g, &expected));
    }

    #[test]
    fn substitute_torsor_theta_at_witness() {
        // (y = g(x)) with x -> m  becomes  (y = g(m)).
        let theta = Formula::eq(y(), Term::app("g", vec![x()]));
        let binding = BTreeMap::from([("x".to_string(), Term::var("m"))]);
        assert_eq!(
            theta.substitute(&binding),
            Formula::eq(y(), Term::app("g", vec![Term::var("m")]))
        );
    }

    #[test]
    fn alpha_eq_ignores_binder_names() {
        let f = Formula::exists(vec!["u".into()], Formula::eq(Term::var("u"), x()));
        let g = Formula::exists(vec!["v".into()], Formula::eq(Term::var("v"), x()));
        let h = Formula::exists(vec!["v".into()], Formula::eq(x(), Term::var("v")));
        assert!(alpha_eq(&f, &g));
        assert!(!alpha_eq(&f, &h));
    }

    #[test]
    fn alpha_eq_distinguishes_free_names() {
        assert!(!alpha_eq(&Formula::eq(x(), x()), &Formula::eq(y(), y())));
    }

    #[test]
    fn size_capped_bound_is_monotone_prefix() {
        let fam = FormulaFamily::size_capped(
            "n",
            (0..4)
                .map(|k| FamilyMember { label: k.to_string(), formula: Formula::Truth })
                .collect(),
        );
        assert_eq!(fam.size_bound(0), 0..1);
        assert_eq!(fam.size_bound(2), 0..3);
        assert_eq!(fam.size_bound(9), 0..4);
    }

    #[test]
    fn regular_split_distributes() {
        let f = Formula::and(vec![
            Formula::or(vec![Formula::eq(x(), y()), Formula::eq(x(), z())]),
            Formula::rel("R", vec![x()]),
        ]);
        let parts = regular_disjuncts(&f).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(
            parts[0],
            Formula::and(vec![Formula::eq(x(), y()), Formula::rel("R", vec![x()])])
        );
    }

    #[test]
    fn regular_split_rejects_size_indexed() {
        let fam = FormulaFamily::size_capped(
            "n",
            vec![FamilyMember { label: "0".into(), formula: Formula::Truth }],
        );
        assert_eq!(
            regular_disjuncts(&Formula::FamilyOr(fam)),
            Err(RegularSplitError::SizeIndexedFamily)
        );
    }
}
