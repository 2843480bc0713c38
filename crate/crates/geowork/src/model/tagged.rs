use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::logic::WitnessScheme;

use super::eval::{eval, EvalError};
use super::structure::{tuples_of, Assignment, FiniteStructure};

/// One point of the coproduct of the psi interpretations: a psi tag together
/// with a tuple satisfying that psi.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaggedTuple {
    pub tag: String,
    pub tuple: Vec<usize>,
}

impl TaggedTuple {
    /// The carrier elements mentioned by the tuple.
    pub fn elements(&self) -> BTreeSet<usize> {
        self.tuple.iter().copied().collect()
    }
}

/// The coproduct of the interpretations of a witness scheme's psi formulas
/// in one structure, as tag-indexed tuples.  Ordered by scheme entry order,
/// then tuple order, so reports are stable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedTupleSet {
    pub tuples: Vec<TaggedTuple>,
}

impl TaggedTupleSet {
    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    /// Every carrier element mentioned by any witness tuple.
    pub fn all_elements(&self) -> BTreeSet<usize> {
        self.tuples.iter().flat_map(|t| t.tuple.iter().copied()).collect()
    }
}

/// Computes all tagged witness tuples of `scheme` in `m`: for each psi entry
/// and each tuple over the carrier of the entry's context length, the tuple
/// is included iff psi holds of it.
pub fn psi_elements(m: &FiniteStructure, scheme: &WitnessScheme) -> Result<TaggedTupleSet, EvalError> {
    let mut out = TaggedTupleSet::default();
    for entry in &scheme.entries {
        for tuple in tuples_of(m.size, entry.context.len()) {
            let assignment: Assignment =
                entry.context.iter().cloned().zip(tuple.iter().copied()).collect();
            if eval(m, &entry.formula, &assignment)? {
                out.tuples.push(TaggedTuple { tag: entry.tag.clone(), tuple });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{
        FamilyMember, Formula, FormulaFamily, PsiEntry, Term, WitnessScheme,
    };

    fn trivial_scheme() -> WitnessScheme {
        WitnessScheme {
            name: "w".into(),
            entries: vec![PsiEntry {
                tag: "pt".into(),
                context: vec!["x".into()],
                formula: Formula::eq(Term::var("x"), Term::var("x")),
                companion_var: "y".into(),
                thetas: FormulaFamily::labels(
                    "g",
                    vec![FamilyMember {
                        label: "e".into(),
                        formula: Formula::eq(Term::var("y"), Term::var("x")),
                    }],
                ),
            }],
        }
    }

    #[test]
    fn reflexive_psi_tags_every_element() {
        let mut m = FiniteStructure::new(2);
        m.set_function("e", 1, vec![0, 1]);
        let tagged = psi_elements(&m, &trivial_scheme()).unwrap();
        assert_eq!(
            tagged.tuples,
            vec![
                TaggedTuple { tag: "pt".into(), tuple: vec![0] },
                TaggedTuple { tag: "pt".into(), tuple: vec![1] },
            ]
        );
    }

    #[test]
    fn arity_zero_psi_yields_the_empty_tuple() {
        let m = FiniteStructure::new(1);
        let scheme = WitnessScheme {
            name: "w".into(),
            entries: vec![PsiEntry {
                tag: "unit".into(),
                context: vec![],
                formula: Formula::Truth,
                companion_var: "y".into(),
                thetas: FormulaFamily::labels("t", vec![]),
            }],
        };
        let tagged = psi_elements(&m, &scheme).unwrap();
        assert_eq!(tagged.tuples, vec![TaggedTuple { tag: "unit".into(), tuple: vec![] }]);
    }
}
