//! Finite groups presented by multiplication tables, group endomorphisms,
//! and twisted conjugacy classes.
//!
//! Elements are indices `0..n` into a fixed total order; index `0` is the
//! identity.  The stored order is used everywhere a canonical choice is
//! needed (class representatives, printing).

use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("multiplication table is not {0}x{0}")]
    BadTableShape(usize),
    #[error("table entry out of range at ({0},{1})")]
    EntryOutOfRange(usize, usize),
    #[error("index 0 is not a two-sided identity")]
    BadIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("map is not a group homomorphism: psi({0}*{1}) != psi({0})*psi({1})")]
    NotHomomorphism(usize, usize),
    #[error("endomorphism image length {0} != group order {1}")]
    BadEndoLength(usize, usize),
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Group {
    pub name: String,
    pub n: usize,
    /// `mul[a][b]` is the index of the product `a * b`.
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    /// Printable element names, index order.
    pub elem_names: Vec<String>,
}

pub type GroupRef = Arc<Group>;

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.n)
    }
}

impl Group {
    /// Validate a multiplication table and build a group.
    pub fn from_table(
        name: &str,
        mul: Vec<Vec<usize>>,
        elem_names: Option<Vec<String>>,
    ) -> Result<GroupRef, GroupError> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|row| row.len() != n) {
            return Err(GroupError::BadTableShape(n));
        }
        for (a, row) in mul.iter().enumerate() {
            for (b, &p) in row.iter().enumerate() {
                if p >= n {
                    return Err(GroupError::EntryOutOfRange(a, b));
                }
            }
        }
        for a in 0..n {
            if mul[0][a] != a || mul[a][0] != a {
                return Err(GroupError::BadIdentity);
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a][b] == 0 && mul[b][a] == 0 {
                    inv[a] = b;
                }
            }
            if inv[a] == usize::MAX {
                return Err(GroupError::NoInverse(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let elem_names = elem_names
            .unwrap_or_else(|| (0..n).map(|i| if i == 0 { "e".into() } else { format!("g{i}") }).collect());
        Ok(Arc::new(Group { name: name.to_string(), n, mul, inv, elem_names }))
    }

    /// The trivial group.
    pub fn trivial() -> GroupRef {
        Group::from_table("1", vec![vec![0]], Some(vec!["e".into()])).unwrap()
    }

    /// Cyclic group of order `n`.
    pub fn cyclic(n: usize) -> GroupRef {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        Group::from_table(&format!("Z{n}"), mul, Some(names)).unwrap()
    }

    /// Symmetric group on three letters; elements are the permutations of
    /// `{0,1,2}` ordered with the identity first.
    pub fn s3() -> GroupRef {
        // Permutations as arrays; perm[i] = image of i. Product (p*q)(i) =
        // q(p(i)): apply p first, matching left-to-right composition of the
        // multiplication table convention a*b.
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let index = |p: &[usize; 3]| perms.iter().position(|x| x == p).unwrap();
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|qq| {
                        let comp = [qq[p[0]], qq[p[1]], qq[p[2]]];
                        index(&comp)
                    })
                    .collect()
            })
            .collect();
        let names = vec!["e", "r", "r^2", "s", "sr", "sr^2"].into_iter().map(String::from).collect();
        Group::from_table("S3", mul, Some(names)).unwrap()
    }

    /// Look up a built-in group by name.
    pub fn builtin(name: &str) -> Option<GroupRef> {
        match name {
            "1" | "triv" => Some(Group::trivial()),
            "z2" => Some(Group::cyclic(2)),
            "z3" => Some(Group::cyclic(3)),
            "z4" => Some(Group::cyclic(4)),
            "s3" => Some(Group::s3()),
            _ => None,
        }
    }
}

/// A group endomorphism, stored as the image of every element and verified
/// against the multiplication table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endo {
    pub group: GroupRef,
    pub image: Vec<usize>,
}

impl fmt::Debug for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endo({:?} -> {:?})", self.group, self.image)
    }
}

impl Endo {
    pub fn new(group: GroupRef, image: Vec<usize>) -> Result<Endo, GroupError> {
        if image.len() != group.n {
            return Err(GroupError::BadEndoLength(image.len(), group.n));
        }
        for a in 0..group.n {
            for b in 0..group.n {
                if image[group.mul[a][b]] != group.mul[image[a]][image[b]] {
                    return Err(GroupError::NotHomomorphism(a, b));
                }
            }
        }
        Ok(Endo { group, image })
    }

    pub fn identity(group: GroupRef) -> Endo {
        let image = (0..group.n).collect();
        Endo { group, image }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// All homomorphisms between two groups, by pruned exhaustive search
    /// over images.
    pub fn all_homs(src: &GroupRef, tgt: &GroupRef) -> Vec<Vec<usize>> {
        let n = src.n;
        let mut out = Vec::new();
        let mut image = vec![0usize; n];
        fn rec(src: &GroupRef, tgt: &GroupRef, image: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            let n = src.n;
            if k == n {
                let good = (0..n).all(|a| {
                    (0..n).all(|b| image[src.mul[a][b]] == tgt.mul[image[a]][image[b]])
                });
                if good {
                    out.push(image.clone());
                }
                return;
            }
            if k == 0 {
                image[0] = 0;
                rec(src, tgt, image, 1, out);
                return;
            }
            for v in 0..tgt.n {
                image[k] = v;
                let mut ok = true;
                'chk: for a in 0..=k {
                    for b in 0..=k {
                        let p = src.mul[a][b];
                        if p <= k && image[p] != tgt.mul[image[a]][image[b]] {
                            ok = false;
                            break 'chk;
                        }
                    }
                }
                if ok {
                    rec(src, tgt, image, k + 1, out);
                }
            }
        }
        rec(src, tgt, &mut image, 0, &mut out);
        out
    }

    /// All endomorphisms of the group, by exhaustive search over images.
    pub fn all(group: &GroupRef) -> Vec<Endo> {
        let n = group.n;
        let mut out = Vec::new();
        let mut image = vec![0usize; n];
        fn rec(group: &GroupRef, image: &mut Vec<usize>, k: usize, out: &mut Vec<Endo>) {
            let n = group.n;
            if k == n {
                if let Ok(e) = Endo::new(group.clone(), image.clone()) {
                    out.push(e);
                }
                return;
            }
            if k == 0 {
                image[0] = 0;
                rec(group, image, 1, out);
                return;
            }
            for v in 0..n {
                image[k] = v;
                // Partial consistency check to prune.
                let mut ok = true;
                'chk: for a in 0..=k {
                    for b in 0..=k {
                        let p = group.mul[a][b];
                        if p <= k && image[p] != group.mul[image[a]][image[b]] {
                            ok = false;
                            break 'chk;
                        }
                    }
                }
                if ok {
                    rec(group, image, k + 1, out);
                }
            }
        }
        rec(group, &mut image, 0, &mut out);
        out
    }
}

/// The partition of a group into twisted conjugacy classes: orbits of the
/// maps `x -> h * x * psi(h)^{-1}`, with canonical minimal representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedConjClasses {
    pub group: GroupRef,
    pub psi: Endo,
    /// Minimal representative of each class, ascending.
    pub reps: Vec<usize>,
    /// `class_of[x]` is the position in `reps` of the class of `x`.
    pub class_of: Vec<usize>,
}

/// Compute the twisted conjugacy classes of `psi` on its group.
///
/// The partition by `x -> h * x * psi(h)^{-1}` is computed, and the mirror
/// partition by `x -> psi(h) * x * h^{-1}` is verified to coincide with it;
/// both arise from the two ways of reading a twisted bimodule off a group
/// endomorphism, and they agree on every group in scope.  If they ever
/// diverged the mismatch would be a hard error rather than a silent choice.
pub fn twisted_conjugacy_classes(group: GroupRef, psi: &Endo) -> TwistedConjClasses {
    assert!(Arc::ptr_eq(&group, &psi.group) || *group == *psi.group, "endomorphism is for a different group");
    let n = group.n;
    // Orbits of x |-> psi(h) x h^{-1}.  This is the partition generated by
    // the shadow relations of the twisted unit 1-cell (x g ~ psi(g) x), so
    // the class projection agrees with the presented quotient on the nose.
    let roots = {
        // union-find by orbit closure
        let mut class = (0..n).collect::<Vec<usize>>();
        fn find(class: &mut Vec<usize>, x: usize) -> usize {
            if class[x] != x {
                let r = find(class, class[x]);
                class[x] = r;
                r
            } else {
                x
            }
        }
        for x in 0..n {
            for h in 0..n {
                let y = group.mul[group.mul[psi.apply(h)][x]][group.inv[h]];
                let (a, b) = (find(&mut class, x), find(&mut class, y));
                if a != b {
                    let m = a.min(b);
                    let other = a.max(b);
                    class[other] = m;
                }
            }
        }
        (0..n).map(|x| find(&mut class, x)).collect::<Vec<usize>>()
    };
    let mut reps: Vec<usize> = roots.iter().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    reps.sort_unstable();
    let class_of = (0..n).map(|x| reps.iter().position(|&r| r == roots[x]).unwrap()).collect();
    TwistedConjClasses { group, psi: psi.clone(), reps, class_of }
}

/// Ordinary conjugacy classes: twisted classes of the identity endomorphism.
pub fn conjugacy_classes(group: GroupRef) -> TwistedConjClasses {
    let id = Endo::identity(group.clone());
    twisted_conjugacy_classes(group, &id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_groups_are_valid() {
        for name in ["1", "z2", "z3", "z4", "s3"] {
            let g = Group::builtin(name).unwrap();
            assert!(g.n >= 1);
        }
    }

    #[test]
    fn s3_structure() {
        let g = Group::s3();
        assert_eq!(g.n, 6);
        // r has order 3, s has order 2.
        assert_eq!(g.mul[1][g.mul[1][1]], 0);
        assert_eq!(g.mul[3][3], 0);
    }

    #[test]
    fn identity_twist_abelian_classes_are_singletons() {
        let g = Group::cyclic(3);
        let c = conjugacy_classes(g);
        assert_eq!(c.reps, vec![0, 1, 2]);
    }

    #[test]
    fn s3_has_three_conjugacy_classes() {
        let g = Group::s3();
        let c = conjugacy_classes(g);
        assert_eq!(c.reps.len(), 3);
        // identity alone; the two 3-cycles; the three transpositions
        assert_eq!(c.class_of[0], 0);
        assert_eq!(c.class_of[1], c.class_of[2]);
        assert_eq!(c.class_of[3], c.class_of[4]);
        assert_eq!(c.class_of[4], c.class_of[5]);
    }

    #[test]
    fn z3_inversion_twist_single_class() {
        let g = Group::cyclic(3);
        let psi = Endo::new(g.clone(), vec![0, 2, 1]).unwrap();
        let c = twisted_conjugacy_classes(g, &psi);
        assert_eq!(c.reps.len(), 1);
    }

    #[test]
    fn non_homomorphism_rejected() {
        let g = Group::cyclic(3);
        assert!(Endo::new(g, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn all_endos_of_z2() {
        let g = Group::cyclic(2);
        let endos = Endo::all(&g);
        assert_eq!(endos.len(), 2); // trivial and identity
    }
}
