use serde::{Deserialize, Serialize};

use super::structure::FiniteStructure;

/// Resource ceilings for the brute-force parts of the workbench.  The
/// default cap keeps permutation scans and table searches at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub size_cap: usize,
}

pub const DEFAULT_SIZE_CAP: usize = 6;

impl Default for Limits {
    fn default() -> Self {
        Limits { size_cap: DEFAULT_SIZE_CAP }
    }
}

/// A resource ceiling was exceeded.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("size {requested} exceeds the configured cap {cap}")]
    SizeCapExceeded { requested: usize, cap: usize },
}

/// The canonical representative of a structure's isomorphism class: the
/// minimum, in the derived table order, of all carrier relabellings.  Two
/// structures have equal canonical forms iff they are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm(pub FiniteStructure);

/// Computes the canonical form by minimizing over all carrier permutations.
/// Quadratic-factorial and proudly so; refinement-based canonicalization is
/// an optimization seam, not a correctness need, at these sizes.
pub fn canonical_form(m: &FiniteStructure, limits: &Limits) -> Result<CanonicalForm, SearchError> {
    if m.size > limits.size_cap {
        return Err(SearchError::SizeCapExceeded { requested: m.size, cap: limits.size_cap });
    }
    let mut best: Option<FiniteStructure> = None;
    for perm in permutations(m.size) {
        let candidate = m.apply_permutation(&perm);
        match &best {
            Some(b) if *b <= candidate => {}
            _ => best = Some(candidate),
        }
    }
    Ok(CanonicalForm(best.unwrap_or_else(|| m.clone())))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, depth: usize, out: &mut Vec<Vec<usize>>) {
        if depth == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current[depth] = v;
                rec(n, current, used, depth + 1, out);
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_of_three() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps[0], vec![0, 1, 2]);
        assert_eq!(ps[5], vec![2, 1, 0]);
    }

    #[test]
    fn permutations_of_zero_is_the_empty_permutation() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn relabelled_structures_share_a_canonical_form() {
        let limits = Limits::default();
        // Two presentations of the regular z2 action differing by a swap.
        let mut a = FiniteStructure::new(2);
        a.set_function("e", 1, vec![0, 1]);
        a.set_function("g", 1, vec![1, 0]);
        let b = a.apply_permutation(&[1, 0]);
        assert_eq!(canonical_form(&a, &limits), canonical_form(&b, &limits));
    }

    #[test]
    fn different_tables_get_different_keys() {
        let limits = Limits::default();
        let mut a = FiniteStructure::new(2);
        a.set_function("f", 1, vec![0, 1]);
        let mut b = FiniteStructure::new(2);
        b.set_function("f", 1, vec![0, 0]);
        assert_ne!(canonical_form(&a, &limits), canonical_form(&b, &limits));
    }

    #[test]
    fn cap_is_enforced() {
        let m = FiniteStructure::new(9);
        assert_eq!(
            canonical_form(&m, &Limits::default()),
            Err(SearchError::SizeCapExceeded { requested: 9, cap: 6 })
        );
    }
}
