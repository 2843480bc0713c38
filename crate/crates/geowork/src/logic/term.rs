use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// A first-order term: a variable or a function application.  Constants are
/// applications of arity-0 symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    /// A constant, i.e. an application of an arity-0 function symbol.
    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for a in args {
                    a.vars_into(out);
                }
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    /// Simultaneous substitution of terms for variables.
    pub fn substitute(&self, binding: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => match binding.get(v) {
                Some(t) => t.clone(),
                None => self.clone(),
            },
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(binding)).collect())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
