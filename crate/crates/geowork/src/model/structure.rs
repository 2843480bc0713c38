use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::logic::Signature;

/// A total interpretation table for one function symbol: `values` has one
/// entry per argument tuple, in row-major order (first argument varies
/// slowest).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FnTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

/// The interpretation of one relation symbol, stored as a sorted tuple set
/// so iteration order (and hence every downstream report) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelTable {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite structure with carrier `{0..size-1}`: total function tables and
/// relation tables keyed by symbol name.  Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteStructure {
    pub size: usize,
    pub functions: BTreeMap<String, FnTable>,
    pub relations: BTreeMap<String, RelTable>,
}

/// A variable assignment into a structure's carrier.
pub type Assignment = BTreeMap<String, usize>;

/// A defect found when checking a structure against a signature.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("missing table for symbol `{0}`")]
    MissingTable(String),
    #[error("unexpected table `{0}` not in the signature")]
    UnexpectedTable(String),
    #[error("table for `{symbol}` has arity {found}, signature says {declared}")]
    ArityMismatch { symbol: String, declared: usize, found: usize },
    #[error("table for `{symbol}` is not total: {found} entries, need {needed}")]
    NotTotal { symbol: String, found: usize, needed: usize },
    #[error("table for `{symbol}` mentions element {element}, carrier size is {size}")]
    ElementOutOfRange { symbol: String, element: usize, size: usize },
}

impl FiniteStructure {
    pub fn new(size: usize) -> Self {
        FiniteStructure { size, functions: BTreeMap::new(), relations: BTreeMap::new() }
    }

    /// Number of entries a total table of this arity needs.
    pub fn table_len(size: usize, arity: usize) -> usize {
        size.pow(arity as u32)
    }

    /// Row-major index of an argument tuple.
    pub fn tuple_index(size: usize, args: &[usize]) -> usize {
        let mut idx = 0;
        for &a in args {
            idx = idx * size + a;
        }
        idx
    }

    pub fn set_function(&mut self, name: &str, arity: usize, values: Vec<usize>) {
        self.functions.insert(name.to_string(), FnTable { arity, values });
    }

    pub fn set_relation(&mut self, name: &str, arity: usize, tuples: BTreeSet<Vec<usize>>) {
        self.relations.insert(name.to_string(), RelTable { arity, tuples });
    }

    pub fn add_rel_tuple(&mut self, name: &str, arity: usize, tuple: Vec<usize>) {
        self.relations
            .entry(name.to_string())
            .or_insert_with(|| RelTable { arity, tuples: BTreeSet::new() })
            .tuples
            .insert(tuple);
    }

    pub fn apply_fn(&self, name: &str, args: &[usize]) -> Option<usize> {
        let table = self.functions.get(name)?;
        table.values.get(Self::tuple_index(self.size, args)).copied()
    }

    pub fn rel_holds(&self, name: &str, args: &[usize]) -> Option<bool> {
        let table = self.relations.get(name)?;
        Some(table.tuples.contains(args))
    }

    /// Checks this structure is a total structure for `sig`.
    pub fn validate_against(&self, sig: &Signature) -> Result<(), StructureError> {
        for decl in sig.functions() {
            let table = self
                .functions
                .get(&decl.name)
                .ok_or_else(|| StructureError::MissingTable(decl.name.clone()))?;
            if table.arity != decl.arity {
                return Err(StructureError::ArityMismatch {
                    symbol: decl.name.clone(),
                    declared: decl.arity,
                    found: table.arity,
                });
            }
            let needed = Self::table_len(self.size, decl.arity);
            if table.values.len() != needed {
                return Err(StructureError::NotTotal {
                    symbol: decl.name.clone(),
                    found: table.values.len(),
                    needed,
                });
            }
            if let Some(&bad) = table.values.iter().find(|&&v| v >= self.size) {
                return Err(StructureError::ElementOutOfRange {
                    symbol: decl.name.clone(),
                    element: bad,
                    size: self.size,
                });
            }
        }
        for decl in sig.relations() {
            let table = self
                .relations
                .get(&decl.name)
                .ok_or_else(|| StructureError::MissingTable(decl.name.clone()))?;
            if table.arity != decl.arity {
                return Err(StructureError::ArityMismatch {
                    symbol: decl.name.clone(),
                    declared: decl.arity,
                    found: table.arity,
                });
            }
            for t in &table.tuples {
                if t.len() != decl.arity {
                    return Err(StructureError::ArityMismatch {
                        symbol: decl.name.clone(),
                        declared: decl.arity,
                        found: t.len(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&v| v >= self.size) {
                    return Err(StructureError::ElementOutOfRange {
                        symbol: decl.name.clone(),
                        element: bad,
                        size: self.size,
                    });
                }
            }
        }
        for name in self.functions.keys() {
            if sig.function_arity(name).is_none() {
                return Err(StructureError::UnexpectedTable(name.clone()));
            }
        }
        for name in self.relations.keys() {
            if sig.relation_arity(name).is_none() {
                return Err(StructureError::UnexpectedTable(name.clone()));
            }
        }
        Ok(())
    }

    /// The structure obtained by relabelling the carrier along `perm`
    /// (element `i` becomes `perm[i]`).  The result interprets
    /// `f(perm(a)) = perm(f(a))` and `R(perm(a)) <=> R(a)`.
    pub fn apply_permutation(&self, perm: &[usize]) -> FiniteStructure {
        debug_assert_eq!(perm.len(), self.size);
        let mut out = FiniteStructure::new(self.size);
        for (name, table) in &self.functions {
            let mut values = vec![0usize; table.values.len()];
            for (idx, tuple) in tuples_of(self.size, table.arity).enumerate() {
                let image: Vec<usize> = tuple.iter().map(|&a| perm[a]).collect();
                values[Self::tuple_index(self.size, &image)] = perm[table.values[idx]];
            }
            out.functions.insert(name.clone(), FnTable { arity: table.arity, values });
        }
        for (name, table) in &self.relations {
            let tuples = table
                .tuples
                .iter()
                .map(|t| t.iter().map(|&a| perm[a]).collect())
                .collect();
            out.relations.insert(name.clone(), RelTable { arity: table.arity, tuples });
        }
        out
    }
}

/// Iterates all tuples over `{0..size-1}` of the given arity in row-major
/// (lexicographic) order.  Arity 0 yields exactly one empty tuple, even over
/// the empty carrier.
pub fn tuples_of(size: usize, arity: usize) -> TupleIter {
    TupleIter { size, current: vec![0; arity], done: arity > 0 && size == 0 }
}

pub struct TupleIter {
    size: usize,
    current: Vec<usize>,
    done: bool,
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // Odometer increment; empty tuples terminate after the first yield.
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.size {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_iteration_is_lexicographic() {
        let all: Vec<_> = tuples_of(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn arity_zero_yields_one_empty_tuple() {
        assert_eq!(tuples_of(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(tuples_of(0, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(tuples_of(0, 2).count(), 0);
    }

    #[test]
    fn permutation_relabels_tables() {
        // A single unary function f = successor mod 2 on {0,1}.
        let mut m = FiniteStructure::new(2);
        m.set_function("f", 1, vec![1, 0]);
        m.add_rel_tuple("r", 1, vec![0]);
        let swapped = m.apply_permutation(&[1, 0]);
        assert_eq!(swapped.apply_fn("f", &[0]), Some(1));
        assert_eq!(swapped.apply_fn("f", &[1]), Some(0));
        assert_eq!(swapped.rel_holds("r", &[1]), Some(true));
        assert_eq!(swapped.rel_holds("r", &[0]), Some(false));
    }
}
