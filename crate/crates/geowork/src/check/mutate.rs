//! Seeded mutations of theories and witness schemes, used to exercise the
//! checkers against broken certificates.

use rand::Rng;

use crate::logic::{Theory, WitnessScheme};

/// A mutated (theory, scheme) pair with a description of what changed.
#[derive(Debug, Clone)]
pub struct Mutant {
    pub theory: Theory,
    pub scheme: WitnessScheme,
    pub description: String,
}

/// Deletes one theta member from one psi entry.
pub fn drop_theta(
    theory: &Theory,
    scheme: &WitnessScheme,
    psi_index: usize,
    theta_index: usize,
) -> Mutant {
    let mut scheme = scheme.clone();
    let entry = &mut scheme.entries[psi_index];
    let removed = entry.thetas.members.remove(theta_index);
    Mutant {
        theory: theory.clone(),
        scheme,
        description: format!(
            "drop theta `{}` from psi `{}`",
            removed.label,
            theory.name
        ),
    }
}

/// Deletes one axiom from the theory.
pub fn drop_axiom(theory: &Theory, scheme: &WitnessScheme, axiom_index: usize) -> Mutant {
    let mut theory = theory.clone();
    let removed = theory.axioms.remove(axiom_index);
    Mutant {
        theory,
        scheme: scheme.clone(),
        description: format!("drop axiom `{}`", removed.name),
    }
}

/// Deletes one psi entry (only when more than one remains).
pub fn drop_psi(theory: &Theory, scheme: &WitnessScheme, psi_index: usize) -> Mutant {
    let mut scheme = scheme.clone();
    let removed = scheme.entries.remove(psi_index);
    Mutant {
        theory: theory.clone(),
        scheme,
        description: format!("drop psi `{}`", removed.tag),
    }
}

/// Draws one random mutation: deleting a theta member, an axiom, or a psi
/// entry.  Callers that need reproducibility pass a seeded RNG.
pub fn random_mutant(theory: &Theory, scheme: &WitnessScheme, rng: &mut impl Rng) -> Mutant {
    // Weight toward scheme mutations; they are the interesting ones for the
    // co-ordinatisation checks.
    let theta_slots: Vec<(usize, usize)> = scheme
        .entries
        .iter()
        .enumerate()
        .flat_map(|(i, e)| (0..e.thetas.members.len()).map(move |j| (i, j)))
        .collect();
    for _ in 0..8 {
        match rng.gen_range(0..3) {
            0 if !theta_slots.is_empty() => {
                let (i, j) = theta_slots[rng.gen_range(0..theta_slots.len())];
                return drop_theta(theory, scheme, i, j);
            }
            1 if !theory.axioms.is_empty() => {
                let k = rng.gen_range(0..theory.axioms.len());
                return drop_axiom(theory, scheme, k);
            }
            2 if scheme.entries.len() > 1 => {
                let i = rng.gen_range(0..scheme.entries.len());
                return drop_psi(theory, scheme, i);
            }
            _ => continue,
        }
    }
    // Nothing mutable: return the inputs unchanged.
    Mutant { theory: theory.clone(), scheme: scheme.clone(), description: "no-op".into() }
}
