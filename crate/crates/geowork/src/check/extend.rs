use std::collections::BTreeMap;

use crate::logic::WitnessScheme;
use crate::model::{eval, find_maps, Assignment, FiniteStructure, MapKind, StructureMap};

use super::report::CheckError;

/// Why a witness-map extension failed, named after the co-ordinatisation
/// sequent whose semantic content broke.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtendError {
    #[error("scheme has no psi tagged `{0}`")]
    UnknownTag(String),
    #[error("tuple arity {found} does not match psi context length {expected}")]
    BadArity { expected: usize, found: usize },
    #[error("the {side} tuple does not satisfy psi (violates the precondition)")]
    WitnessNotSatisfied { side: &'static str },
    #[error(
        "element {element} of the source is covered by no theta \
         (covering sequent `ucoord:{psi}:cover` fails in the source)"
    )]
    CoveringFailed { psi: String, element: usize },
    #[error(
        "theta `{theta}` has no companion for the target witness \
         (covering sequent `ucoord:{psi}:cover` fails in the target)"
    )]
    CompanionMissing { psi: String, theta: String, element: usize },
    #[error(
        "theta `{theta}` relates the target witness to both {y1} and {y2} \
         (functionality sequent `ucoord:{psi}:{theta}:functional` fails in the target)"
    )]
    FunctionalityFailed { psi: String, theta: String, y1: usize, y2: usize },
    #[error("the induced map is not a structure homomorphism")]
    NotHomomorphism,
    #[error("expected exactly one homomorphism extending the pins, found {found}")]
    NotUnique { found: usize },
    #[error("{0}")]
    Check(#[from] CheckError),
}

/// The unique-extension construction: given witness tuples `source_tuple`
/// in `source` and `target_tuple` in `target` for the same psi, sends each
/// source element to the unique target element satisfying the theta that
/// covers it.  The result is verified to be a structure homomorphism and
/// cross-checked to be the *only* homomorphism extending the pinned witness
/// tuples.
pub fn extend_witness_map(
    source: &FiniteStructure,
    target: &FiniteStructure,
    scheme: &WitnessScheme,
    tag: &str,
    source_tuple: &[usize],
    target_tuple: &[usize],
) -> Result<StructureMap, ExtendError> {
    let entry = scheme.entry(tag).ok_or_else(|| ExtendError::UnknownTag(tag.to_string()))?;
    if source_tuple.len() != entry.context.len() || target_tuple.len() != entry.context.len() {
        return Err(ExtendError::BadArity {
            expected: entry.context.len(),
            found: source_tuple.len().max(target_tuple.len()),
        });
    }
    let source_base: Assignment =
        entry.context.iter().cloned().zip(source_tuple.iter().copied()).collect();
    let target_base: Assignment =
        entry.context.iter().cloned().zip(target_tuple.iter().copied()).collect();
    if !eval(source, &entry.formula, &source_base).map_err(CheckError::from)? {
        return Err(ExtendError::WitnessNotSatisfied { side: "source" });
    }
    if !eval(target, &entry.formula, &target_base).map_err(CheckError::from)? {
        return Err(ExtendError::WitnessNotSatisfied { side: "target" });
    }

    let mut map = Vec::with_capacity(source.size);
    for element in 0..source.size {
        // The first theta (in family order) covering this element in the
        // source decides its image.
        let mut chosen = None;
        for member in entry.thetas.active_members(source.size) {
            let mut assignment = source_base.clone();
            assignment.insert(entry.companion_var.clone(), element);
            if eval(source, &member.formula, &assignment).map_err(CheckError::from)? {
                chosen = Some(member);
                break;
            }
        }
        let Some(member) = chosen else {
            return Err(ExtendError::CoveringFailed { psi: tag.to_string(), element });
        };
        let mut companions = Vec::new();
        for candidate in 0..target.size {
            let mut assignment = target_base.clone();
            assignment.insert(entry.companion_var.clone(), candidate);
            if eval(target, &member.formula, &assignment).map_err(CheckError::from)? {
                companions.push(candidate);
            }
        }
        match companions.as_slice() {
            [unique] => map.push(*unique),
            [] => {
                return Err(ExtendError::CompanionMissing {
                    psi: tag.to_string(),
                    theta: member.label.clone(),
                    element,
                })
            }
            [y1, y2, ..] => {
                return Err(ExtendError::FunctionalityFailed {
                    psi: tag.to_string(),
                    theta: member.label.clone(),
                    y1: *y1,
                    y2: *y2,
                })
            }
        }
    }

    let result = StructureMap { kind: MapKind::Hom, map };
    if !result.verify(source, target) {
        return Err(ExtendError::NotHomomorphism);
    }
    // Uniqueness: the pinned witness tuple admits exactly this one
    // homomorphism.
    let pins: BTreeMap<usize, usize> =
        source_tuple.iter().copied().zip(target_tuple.iter().copied()).collect();
    let all = find_maps(source, target, MapKind::Hom, &pins);
    if all.len() != 1 || all[0].map != result.map {
        return Err(ExtendError::NotUnique { found: all.len() });
    }
    Ok(result)
}
