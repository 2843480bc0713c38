use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::structure::{tuples_of, FiniteStructure};

/// What kind of structure map to search for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MapKind {
    /// Preserves function tables exactly and relation tuples forward.
    Hom,
    /// A bijection preserving and reflecting all tables.
    Iso,
    /// An isomorphism from a structure to itself.
    Auto,
}

/// An element map between two structures of a declared kind.  The source
/// and target are whatever structures the map was searched between; `map[i]`
/// is the image of source element `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StructureMap {
    pub kind: MapKind,
    pub map: Vec<usize>,
}

impl StructureMap {
    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `other` after `self` (first apply `self`, then `other`).
    pub fn then(&self, other: &StructureMap) -> StructureMap {
        StructureMap { kind: self.kind, map: self.map.iter().map(|&v| other.map[v]).collect() }
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> StructureMap {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        StructureMap { kind: self.kind, map: inv }
    }

    /// Verifies the map really is of its declared kind between `src` and
    /// `dst`.
    pub fn verify(&self, src: &FiniteStructure, dst: &FiniteStructure) -> bool {
        if self.map.len() != src.size || self.map.iter().any(|&v| v >= dst.size) {
            return false;
        }
        let injective_needed = !matches!(self.kind, MapKind::Hom);
        if injective_needed {
            if src.size != dst.size {
                return false;
            }
            let mut seen = vec![false; dst.size];
            for &v in &self.map {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        for (name, table) in &src.functions {
            for (idx, tuple) in tuples_of(src.size, table.arity).enumerate() {
                let image: Vec<usize> = tuple.iter().map(|&a| self.map[a]).collect();
                match dst.apply_fn(name, &image) {
                    Some(w) if w == self.map[table.values[idx]] => {}
                    _ => return false,
                }
            }
        }
        for (name, table) in &src.relations {
            for tuple in tuples_of(src.size, table.arity) {
                let holds_src = table.tuples.contains(&tuple);
                let image: Vec<usize> = tuple.iter().map(|&a| self.map[a]).collect();
                let holds_dst = match dst.rel_holds(name, &image) {
                    Some(b) => b,
                    None => return false,
                };
                let ok = match self.kind {
                    MapKind::Hom => !holds_src || holds_dst,
                    MapKind::Iso | MapKind::Auto => holds_src == holds_dst,
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

struct Search<'a> {
    src: &'a FiniteStructure,
    dst: &'a FiniteStructure,
    kind: MapKind,
    results: Vec<StructureMap>,
}

#[derive(Clone)]
struct State {
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn injective(&self) -> bool {
        !matches!(self.kind, MapKind::Hom)
    }

    /// Forces images implied by function tables until a fixpoint, then
    /// checks relation constraints over the assigned part.  Returns false on
    /// any contradiction.
    fn propagate(&self, state: &mut State) -> bool {
        loop {
            let mut changed = false;
            for (name, table) in &self.src.functions {
                for (idx, tuple) in tuples_of(self.src.size, table.arity).enumerate() {
                    let image: Option<Vec<usize>> =
                        tuple.iter().map(|&a| state.map[a]).collect();
                    let Some(image) = image else { continue };
                    let Some(w) = self.dst.apply_fn(name, &image) else { return false };
                    let v = table.values[idx];
                    match state.map[v] {
                        Some(u) => {
                            if u != w {
                                return false;
                            }
                        }
                        None => {
                            if self.injective() && state.used[w] {
                                return false;
                            }
                            state.map[v] = Some(w);
                            state.used[w] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for (name, table) in &self.src.relations {
            for tuple in tuples_of(self.src.size, table.arity) {
                let image: Option<Vec<usize>> = tuple.iter().map(|&a| state.map[a]).collect();
                let Some(image) = image else { continue };
                let holds_src = table.tuples.contains(&tuple);
                let Some(holds_dst) = self.dst.rel_holds(name, &image) else { return false };
                let ok = match self.kind {
                    MapKind::Hom => !holds_src || holds_dst,
                    MapKind::Iso | MapKind::Auto => holds_src == holds_dst,
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self, state: &State) {
        let next = match state.map.iter().position(|v| v.is_none()) {
            Some(i) => i,
            None => {
                let map =
                    StructureMap { kind: self.kind, map: state.map.iter().map(|v| v.unwrap()).collect() };
                debug_assert!(map.verify(self.src, self.dst));
                self.results.push(map);
                return;
            }
        };
        for candidate in 0..self.dst.size {
            if self.injective() && state.used[candidate] {
                continue;
            }
            let mut child = state.clone();
            child.map[next] = Some(candidate);
            child.used[candidate] = true;
            if self.propagate(&mut child) {
                self.dfs(&child);
            }
        }
    }
}

/// Finds every structure map of the given kind from `src` to `dst` that
/// extends `pins`, by backtracking with forward propagation of function
/// constraints.  Results are in lexicographic order of the element map.
/// Inconsistent pins (out of range, or non-injective for iso/auto kinds)
/// simply yield no maps.
pub fn find_maps(
    src: &FiniteStructure,
    dst: &FiniteStructure,
    kind: MapKind,
    pins: &BTreeMap<usize, usize>,
) -> Vec<StructureMap> {
    if matches!(kind, MapKind::Iso | MapKind::Auto) && src.size != dst.size {
        return Vec::new();
    }
    if matches!(kind, MapKind::Auto) && src != dst {
        return Vec::new();
    }
    let mut state = State { map: vec![None; src.size], used: vec![false; dst.size] };
    for (&a, &b) in pins {
        if a >= src.size || b >= dst.size {
            return Vec::new();
        }
        match state.map[a] {
            Some(prev) if prev != b => return Vec::new(),
            Some(_) => {}
            None => {
                if !matches!(kind, MapKind::Hom) && state.used[b] {
                    return Vec::new();
                }
                state.map[a] = Some(b);
                state.used[b] = true;
            }
        }
    }
    let mut search = Search { src, dst, kind, results: Vec::new() };
    if search.propagate(&mut state) {
        search.dfs(&state);
    }
    search.results
}

/// All automorphisms of `m` extending `pins`.
pub fn automorphisms(m: &FiniteStructure, pins: &BTreeMap<usize, usize>) -> Vec<StructureMap> {
    find_maps(m, m, MapKind::Auto, pins)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_regular() -> FiniteStructure {
        let mut m = FiniteStructure::new(2);
        m.set_function("e", 1, vec![0, 1]);
        m.set_function("g", 1, vec![1, 0]);
        m
    }

    /// The Klein four-group as addition on {0,1,2,3} with 0 = zero,
    /// i.e. x + y = x XOR y: the additive structure of the 2-dimensional
    /// space over the 2-element field.
    fn f2_squared() -> FiniteStructure {
        let mut m = FiniteStructure::new(4);
        let mut add = Vec::with_capacity(16);
        for x in 0..4usize {
            for y in 0..4usize {
                add.push(x ^ y);
            }
        }
        m.set_function("add", 2, add);
        m.set_function("zero", 0, vec![0]);
        m
    }

    #[test]
    fn regular_torsor_has_two_automorphisms() {
        let m = z2_regular();
        let autos = automorphisms(&m, &BTreeMap::new());
        assert_eq!(autos.len(), 2);
        assert!(autos[0].is_identity());
        assert_eq!(autos[1].map, vec![1, 0]);
    }

    #[test]
    fn pinning_a_point_leaves_only_the_identity() {
        let m = z2_regular();
        let autos = automorphisms(&m, &BTreeMap::from([(0, 0)]));
        assert_eq!(autos.len(), 1);
        assert!(autos[0].is_identity());
    }

    #[test]
    fn klein_group_has_six_zero_fixing_automorphisms() {
        // Aut(F2^2) as an additive-group-with-zero structure is GL_2(F2),
        // of order 6 (independently: (4-1)(4-2) ordered bases).
        let m = f2_squared();
        let autos = automorphisms(&m, &BTreeMap::new());
        assert_eq!(autos.len(), 6);
    }

    #[test]
    fn basis_pins_force_a_unique_isomorphism() {
        let m = f2_squared();
        // (1, 2) is an ordered basis; so is (2, 1).  Exactly one
        // automorphism sends the first to the second.
        let maps = find_maps(&m, &m, MapKind::Iso, &BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(maps.len(), 1);
        // It swaps the basis and fixes 0 and 3 = 1+2.
        assert_eq!(maps[0].map, vec![0, 2, 1, 3]);
    }

    #[test]
    fn pinned_search_is_monotone() {
        let m = f2_squared();
        let loose = find_maps(&m, &m, MapKind::Auto, &BTreeMap::from([(1, 1)]));
        let tight = find_maps(&m, &m, MapKind::Auto, &BTreeMap::from([(1, 1), (2, 2)]));
        for t in &tight {
            assert!(loose.contains(t));
        }
        assert!(tight.len() <= loose.len());
    }

    #[test]
    fn automorphisms_form_a_group() {
        let m = f2_squared();
        let autos = automorphisms(&m, &BTreeMap::new());
        assert!(autos.iter().any(|a| a.is_identity()));
        for a in &autos {
            assert!(autos.contains(&a.inverse()));
            for b in &autos {
                assert!(autos.contains(&a.then(b)));
            }
        }
    }

    #[test]
    fn hom_preserves_but_need_not_reflect_relations() {
        let mut a = FiniteStructure::new(1);
        a.set_relation("r", 1, std::collections::BTreeSet::new());
        let mut b = FiniteStructure::new(1);
        b.set_relation("r", 1, std::collections::BTreeSet::from([vec![0]]));
        assert_eq!(find_maps(&a, &b, MapKind::Hom, &BTreeMap::new()).len(), 1);
        assert_eq!(find_maps(&a, &b, MapKind::Iso, &BTreeMap::new()).len(), 0);
        assert_eq!(find_maps(&b, &a, MapKind::Hom, &BTreeMap::new()).len(), 0);
    }
}
