use serde::{Deserialize, Serialize};

/// A finite group given by its multiplication table.  `table[i][j]` is the
/// product `i * j`; element names double as the function-symbol names of
/// the torsor theory built from the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub name: String,
    pub element_names: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("table is not {0}x{0}")]
    Shape(usize),
    #[error("table entry {0} out of range")]
    OutOfRange(usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
}

impl FiniteGroup {
    /// Builds and validates a group from a multiplication table; element
    /// names default to `g0, g1, ...`.
    pub fn from_table(
        name: impl Into<String>,
        table: Vec<Vec<usize>>,
        element_names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        let element_names = element_names
            .unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        if element_names.len() != n {
            return Err(GroupError::Shape(n));
        }
        for (i, a) in element_names.iter().enumerate() {
            if element_names[..i].contains(a) {
                return Err(GroupError::DuplicateName(a.clone()));
            }
        }
        for row in &table {
            if row.len() != n {
                return Err(GroupError::Shape(n));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(GroupError::OutOfRange(bad));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == identity && table[b][a] == identity) {
                return Err(GroupError::NoInverse(a));
            }
        }
        Ok(FiniteGroup { name: name.into(), element_names, table, identity })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_table(format!("z{n}"), table, None).expect("cyclic tables are groups")
    }

    /// The symmetric group on three letters, with elements ordered as the
    /// lexicographic permutations of (0,1,2) and `g0` the identity.
    pub fn symmetric_3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // (p * q)(x) = p(q(x)): apply q first.
                        let composed = [p[q[0]], p[q[1]], p[q[2]]];
                        index_of(&composed)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table("s3", table, None).expect("permutation composition is a group")
    }

    /// Inline presets accepted by the CLI.
    pub fn preset(name: &str) -> Option<FiniteGroup> {
        match name {
            "z1" => Some(FiniteGroup::cyclic(1)),
            "z2" => Some(FiniteGroup::cyclic(2)),
            "z3" => Some(FiniteGroup::cyclic(3)),
            "z4" => Some(FiniteGroup::cyclic(4)),
            "s3" => Some(FiniteGroup::symmetric_3()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_validate() {
        let g = FiniteGroup::cyclic(3);
        assert_eq!(g.order(), 3);
        assert_eq!(g.identity, 0);
        assert_eq!(g.mul(1, 2), 0);
    }

    #[test]
    fn s3_is_the_right_group() {
        let g = FiniteGroup::symmetric_3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity, 0);
        // Non-abelian: some pair with ab != ba.
        assert!((0..6).any(|a| (0..6).any(|b| g.mul(a, b) != g.mul(b, a))));
        // Every element has order dividing 6.
        for a in 0..6 {
            let mut x = a;
            let mut ord = 1;
            while x != g.identity {
                x = g.mul(x, a);
                ord += 1;
            }
            assert!([1, 2, 3, 6].contains(&ord) && 6 % ord == 0);
        }
    }

    #[test]
    fn broken_tables_are_rejected() {
        // Constant rows: no identity.
        let t = vec![vec![0, 0], vec![0, 0]];
        assert_eq!(
            FiniteGroup::from_table("bad", t, None),
            Err(GroupError::NoIdentity)
        );
    }
}
