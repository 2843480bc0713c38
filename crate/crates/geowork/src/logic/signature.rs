use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Whether a symbol names a function or a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymbolKind {
    Function,
    Relation,
}

/// A declared symbol: a name together with its arity.
///
/// Arity-0 function symbols are constants; arity-0 relation symbols are
/// propositional atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolDecl {
    pub name: String,
    pub arity: usize,
}

/// A single-sorted signature: function symbols and relation symbols with
/// arities.  Names are unique across both symbol lists; declaration order is
/// preserved and is the order used everywhere downstream (table layout,
/// search order, printing).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    functions: Vec<SymbolDecl>,
    relations: Vec<SymbolDecl>,
    #[serde(skip)]
    index: BTreeMap<String, (SymbolKind, usize)>,
}

/// An error raised while declaring symbols.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared twice")]
    Duplicate(String),
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.declare(SymbolKind::Function, name, arity)
    }

    pub fn declare_relation(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.declare(SymbolKind::Relation, name, arity)
    }

    fn declare(&mut self, kind: SymbolKind, name: &str, arity: usize) -> Result<(), SignatureError> {
        if self.index.contains_key(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        let decl = SymbolDecl { name: name.to_string(), arity };
        let pos = match kind {
            SymbolKind::Function => {
                self.functions.push(decl);
                self.functions.len() - 1
            }
            SymbolKind::Relation => {
                self.relations.push(decl);
                self.relations.len() - 1
            }
        };
        self.index.insert(name.to_string(), (kind, pos));
        Ok(())
    }

    pub fn functions(&self) -> &[SymbolDecl] {
        &self.functions
    }

    pub fn relations(&self) -> &[SymbolDecl] {
        &self.relations
    }

    /// Looks a name up in either symbol list.
    pub fn lookup(&self, name: &str) -> Option<(SymbolKind, &SymbolDecl)> {
        let (kind, pos) = *self.index.get(name)?;
        let decl = match kind {
            SymbolKind::Function => &self.functions[pos],
            SymbolKind::Relation => &self.relations[pos],
        };
        Some((kind, decl))
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        match self.lookup(name)? {
            (SymbolKind::Function, decl) => Some(decl.arity),
            _ => None,
        }
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        match self.lookup(name)? {
            (SymbolKind::Relation, decl) => Some(decl.arity),
            _ => None,
        }
    }

    /// Rebuilds the name index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index.clear();
        for (i, d) in self.functions.iter().enumerate() {
            self.index.insert(d.name.clone(), (SymbolKind::Function, i));
        }
        for (i, d) in self.relations.iter().enumerate() {
            self.index.insert(d.name.clone(), (SymbolKind::Relation, i));
        }
    }

    /// Picks a symbol name not yet declared, derived from `base`.
    pub fn fresh_symbol_name(&self, base: &str) -> String {
        if !self.index.contains_key(base) {
            return base.to_string();
        }
        let mut k = 1usize;
        loop {
            let candidate = format!("{base}{k}");
            if !self.index.contains_key(&candidate) {
                return candidate;
            }
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected_across_kinds() {
        let mut sig = Signature::new();
        sig.declare_function("plus", 2).unwrap();
        assert_eq!(sig.declare_relation("plus", 1), Err(SignatureError::Duplicate("plus".into())));
    }

    #[test]
    fn lookup_distinguishes_kinds() {
        let mut sig = Signature::new();
        sig.declare_function("zero", 0).unwrap();
        sig.declare_relation("nz", 1).unwrap();
        assert_eq!(sig.function_arity("zero"), Some(0));
        assert_eq!(sig.function_arity("nz"), None);
        assert_eq!(sig.relation_arity("nz"), Some(1));
    }

    #[test]
    fn fresh_names_avoid_existing() {
        let mut sig = Signature::new();
        sig.declare_relation("n", 1).unwrap();
        sig.declare_relation("n1", 1).unwrap();
        assert_eq!(sig.fresh_symbol_name("n"), "n2");
    }
}
