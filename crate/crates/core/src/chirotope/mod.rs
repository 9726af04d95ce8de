//! Abstract (simple) chirotopes stored as one sign per sorted triple.

pub mod format;
pub mod points;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Mul, Neg};

use crate::error::{Error, Result};

/// Dense element label, `0..n` within one chirotope.
pub type Label = usize;

/// A segment between two distinct labels.
pub type Segment = (Label, Label);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn from_positive(pos: bool) -> Sign {
        if pos {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Pos
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_positive(self == rhs)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

fn choose2(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Sorts a triple, returning the sorted labels and the parity of the sorting
/// permutation (`Pos` for even).
#[inline]
pub fn sort_triple(x: Label, y: Label, z: Label) -> ([Label; 3], Sign) {
    let mut t = [x, y, z];
    let mut parity = Sign::Pos;
    if t[0] > t[1] {
        t.swap(0, 1);
        parity = -parity;
    }
    if t[1] > t[2] {
        t.swap(1, 2);
        parity = -parity;
    }
    if t[0] > t[1] {
        t.swap(0, 1);
        parity = -parity;
    }
    (t, parity)
}

/// A simple sign function on the triples of `0..n`.
///
/// Only sorted triples are stored, so the alternation law holds by
/// construction. Whether the interiority and transitivity axioms hold is
/// recorded by [`Chirotope::verify`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chirotope {
    n: usize,
    signs: Vec<Sign>,
    verified: bool,
}

impl fmt::Debug for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.signs.iter().map(|s| s.as_char()).collect();
        f.debug_struct("Chirotope")
            .field("n", &self.n)
            .field("signs", &s)
            .finish()
    }
}

impl Chirotope {
    /// Builds from the lexicographically ordered table of sorted triples.
    pub fn from_signs(n: usize, signs: Vec<Sign>) -> Result<Chirotope> {
        if n < 3 {
            return Err(Error::TooSmall {
                what: "chirotope",
                min: 3,
                got: n,
            });
        }
        if signs.len() != choose3(n) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {} signs for n={n}, got {}", choose3(n), signs.len()),
            });
        }
        Ok(Chirotope {
            n,
            signs,
            verified: false,
        })
    }

    /// Builds by evaluating `f` on every sorted triple `i < j < k`.
    pub fn from_fn<F>(n: usize, mut f: F) -> Result<Chirotope>
    where
        F: FnMut(Label, Label, Label) -> Sign,
    {
        let mut signs = Vec::with_capacity(choose3(n));
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    signs.push(f(i, j, k));
                }
            }
        }
        Chirotope::from_signs(n, signs)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Signs of the sorted triples in lexicographic order.
    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    #[inline]
    fn index(&self, i: Label, j: Label, k: Label) -> usize {
        let n = self.n;
        (choose3(n) - choose3(n - i)) + (choose2(n - i - 1) - choose2(n - j)) + (k - j - 1)
    }

    /// Sign of a sorted triple `i < j < k`.
    #[inline]
    pub fn sorted_sign(&self, i: Label, j: Label, k: Label) -> Sign {
        debug_assert!(i < j && j < k && k < self.n);
        self.signs[self.index(i, j, k)]
    }

    /// Sign lookup without range checks beyond debug assertions.
    #[inline]
    pub fn sign_unchecked(&self, x: Label, y: Label, z: Label) -> Sign {
        debug_assert!(x != y && y != z && x != z);
        let ([i, j, k], parity) = sort_triple(x, y, z);
        self.sorted_sign(i, j, k) * parity
    }

    pub fn sign(&self, x: Label, y: Label, z: Label) -> Result<Sign> {
        if x == y || y == z || x == z || x >= self.n || y >= self.n || z >= self.n {
            return Err(Error::InvalidTriple(x, y, z));
        }
        Ok(self.sign_unchecked(x, y, z))
    }

    /// Replaces the sign of one sorted triple; clears the verified mark.
    pub fn set_sorted_sign(&mut self, i: Label, j: Label, k: Label, s: Sign) {
        let idx = self.index(i, j, k);
        self.signs[idx] = s;
        self.verified = false;
    }

    /// Exhaustive interiority and transitivity scan.
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.n;
        let chi = |a, b, c| self.sign_unchecked(a, b, c).is_positive();
        let mut report = AxiomReport::default();

        // Interiority is invariant under rotating (x, y, z), so only the
        // rotation with x smallest is scanned.
        for x in 0..n {
            for y in x + 1..n {
                for z in x + 1..n {
                    if z == y || chi(x, y, z) {
                        continue;
                    }
                    for t in 0..n {
                        if t == x || t == y || t == z {
                            continue;
                        }
                        if chi(t, y, z) && chi(x, t, z) && chi(x, y, t) {
                            report.interiority.push([t, x, y, z]);
                        }
                    }
                }
            }
        }

        let mut above = Vec::with_capacity(n);
        for t in 0..n {
            for s in 0..n {
                if s == t {
                    continue;
                }
                above.clear();
                above.extend((0..n).filter(|&w| w != s && w != t && chi(t, s, w)));
                for &y in &above {
                    for &x in &above {
                        if x == y || !chi(x, y, t) {
                            continue;
                        }
                        for &z in &above {
                            if z == x || z == y || !chi(y, z, t) {
                                continue;
                            }
                            if !chi(x, z, t) {
                                report.transitivity.push([s, t, x, y, z]);
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Runs [`check_axioms`](Self::check_axioms) and marks the value verified
    /// when the report is empty.
    pub fn verify(mut self) -> Result<Chirotope, (Chirotope, AxiomReport)> {
        let report = self.check_axioms();
        if report.is_empty() {
            self.verified = true;
            Ok(self)
        } else {
            Err((self, report))
        }
    }

    /// Witness `y` making `x` extreme, if any: `sign(x, y, z)` is constant
    /// over all other `z`.
    pub fn extreme_witness(&self, x: Label) -> Option<(Label, Sign)> {
        (0..self.n)
            .filter(|&y| y != x)
            .find_map(|y| self.constant_sign(x, y).map(|s| (y, s)))
    }

    fn constant_sign(&self, x: Label, y: Label) -> Option<Sign> {
        let mut common = None;
        for z in 0..self.n {
            if z == x || z == y {
                continue;
            }
            let s = self.sign_unchecked(x, y, z);
            match common {
                None => common = Some(s),
                Some(c) if c != s => return None,
                _ => {}
            }
        }
        common
    }

    pub fn is_extreme(&self, x: Label) -> bool {
        self.extreme_witness(x).is_some()
    }

    pub fn extreme_elements(&self) -> BTreeSet<Label> {
        (0..self.n).filter(|&x| self.is_extreme(x)).collect()
    }

    /// Crossing test for two segments with four distinct endpoints.
    pub fn segments_cross(&self, a: Segment, b: Segment) -> Result<bool> {
        let (x, y) = a;
        let (z, t) = b;
        let labels = [x, y, z, t];
        if labels.iter().any(|&l| l >= self.n) {
            return Err(Error::InvalidTriple(x, y, z));
        }
        if x == y || z == t {
            return Err(Error::InvalidTriple(x, y, z));
        }
        if x == z || x == t || y == z || y == t {
            return Err(Error::SharedEndpoint);
        }
        Ok(self.cross_unchecked(x, y, z, t))
    }

    #[inline]
    pub fn cross_unchecked(&self, x: Label, y: Label, z: Label, t: Label) -> bool {
        self.sign_unchecked(x, y, z) != self.sign_unchecked(x, y, t)
            && self.sign_unchecked(z, t, x) != self.sign_unchecked(z, t, y)
    }

    /// Restriction to `keep`, relabelled densely in increasing order. The
    /// returned vector maps new labels to old ones.
    pub fn restrict(&self, keep: &[Label]) -> Result<(Chirotope, Vec<Label>)> {
        let set: BTreeSet<Label> = keep.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&l| l >= self.n) {
            return Err(Error::OutOfRange {
                what: "label",
                value: bad.to_string(),
            });
        }
        let map: Vec<Label> = set.into_iter().collect();
        if map.len() < 3 {
            return Err(Error::TooSmall {
                what: "restriction",
                min: 3,
                got: map.len(),
            });
        }
        let chi = Chirotope::from_fn(map.len(), |i, j, k| {
            self.sorted_sign(map[i], map[j], map[k])
        })?;
        Ok((chi, map))
    }

    /// Negates every orientation.
    pub fn flip(&self) -> Chirotope {
        Chirotope {
            n: self.n,
            signs: self.signs.iter().map(|&s| -s).collect(),
            verified: self.verified,
        }
    }

    /// Applies a relabelling: element `l` of `self` becomes `perm[l]`.
    pub fn relabel(&self, perm: &[Label]) -> Result<Chirotope> {
        let n = self.n;
        let mut inverse = vec![usize::MAX; n];
        if perm.len() != n {
            return Err(Error::OutOfRange {
                what: "permutation length",
                value: perm.len().to_string(),
            });
        }
        for (old, &new) in perm.iter().enumerate() {
            if new >= n || inverse[new] != usize::MAX {
                return Err(Error::OutOfRange {
                    what: "permutation",
                    value: format!("{perm:?}"),
                });
            }
            inverse[new] = old;
        }
        Chirotope::from_fn(n, |i, j, k| {
            self.sign_unchecked(inverse[i], inverse[j], inverse[k])
        })
    }
}

/// Violations found by [`Chirotope::check_axioms`].
///
/// Interiority entries are `[t, x, y, z]` (one per cyclic class of
/// `(x, y, z)`); transitivity entries are `[s, t, x, y, z]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub interiority: Vec<[Label; 4]>,
    pub transitivity: Vec<[Label; 5]>,
}

impl AxiomReport {
    pub fn is_empty(&self) -> bool {
        self.interiority.is_empty() && self.transitivity.is_empty()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ok: all axioms hold");
        }
        writeln!(
            f,
            "{} interiority violation(s), {} transitivity violation(s)",
            self.interiority.len(),
            self.transitivity.len()
        )?;
        for [t, x, y, z] in self.interiority.iter().take(20) {
            writeln!(f, "  interiority t={t} (x,y,z)=({x},{y},{z})")?;
        }
        for [s, t, x, y, z] in self.transitivity.iter().take(20) {
            writeln!(f, "  transitivity s={s} t={t} (x,y,z)=({x},{y},{z})")?;
        }
        Ok(())
    }
}

/// A chirotope with a distinguished extreme element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedChirotope {
    chi: Chirotope,
    root: Label,
}

impl RootedChirotope {
    pub fn new(chi: Chirotope, root: Label) -> Result<RootedChirotope> {
        if root >= chi.len() {
            return Err(Error::OutOfRange {
                what: "root",
                value: root.to_string(),
            });
        }
        if !chi.is_extreme(root) {
            return Err(Error::NotARootedChirotope(format!(
                "root {root} is not extreme"
            )));
        }
        Ok(RootedChirotope { chi, root })
    }

    pub(crate) fn new_unchecked(chi: Chirotope, root: Label) -> RootedChirotope {
        debug_assert!(root < chi.len());
        RootedChirotope { chi, root }
    }

    pub fn chi(&self) -> &Chirotope {
        &self.chi
    }

    pub fn root(&self) -> Label {
        self.root
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn into_parts(self) -> (Chirotope, Label) {
        (self.chi, self.root)
    }

    /// `(u⁺, u⁻)`: the unique `y` with `sign(u, y, ·)` constantly positive,
    /// and the unique one with it constantly negative.
    pub fn hull_neighbors(&self) -> Result<(Label, Label)> {
        let u = self.root;
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for y in 0..self.chi.len() {
            if y == u {
                continue;
            }
            match self.chi.constant_sign(u, y) {
                Some(Sign::Pos) => plus.push(y),
                Some(Sign::Neg) => minus.push(y),
                None => {}
            }
        }
        match (plus.as_slice(), minus.as_slice()) {
            ([p], [m]) => Ok((*p, *m)),
            _ => Err(Error::NotARootedChirotope(format!(
                "root {u} has successor candidates {plus:?} and predecessor candidates {minus:?}"
            ))),
        }
    }

    pub fn flip(&self) -> RootedChirotope {
        RootedChirotope {
            chi: self.chi.flip(),
            root: self.root,
        }
    }

    /// Drops the root element; the remaining labels keep their relative order.
    pub fn without_root(&self) -> Result<(Chirotope, Vec<Label>)> {
        let keep: Vec<Label> = (0..self.len()).filter(|&l| l != self.root).collect();
        self.chi.restrict(&keep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn convex(n: usize) -> Chirotope {
        Chirotope::from_fn(n, |_, _, _| Sign::Pos).unwrap()
    }

    #[test]
    fn lexicographic_indexing() {
        let chi = convex(6);
        let mut expected = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                for k in j + 1..6 {
                    assert_eq!(chi.index(i, j, k), expected);
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, chi.signs().len());
    }

    #[test]
    fn parity_semantics() {
        let tri = convex(3);
        assert_eq!(tri.sign(0, 1, 2).unwrap(), Sign::Pos);
        assert_eq!(tri.sign(0, 2, 1).unwrap(), Sign::Neg);
        assert_eq!(tri.sign(1, 2, 0).unwrap(), Sign::Pos);
        assert_eq!(tri.sign(2, 1, 0).unwrap(), Sign::Neg);
        assert!(matches!(tri.sign(0, 0, 1), Err(Error::InvalidTriple(..))));
        assert!(matches!(tri.sign(0, 1, 3), Err(Error::InvalidTriple(..))));
    }

    #[test]
    fn convex_polygons_satisfy_axioms() {
        assert!(convex(6).check_axioms().is_empty());
        assert!(convex(6).verify().unwrap().is_verified());
    }

    #[test]
    fn mutated_convex_pentagon_violates_axioms() {
        // Triangles 024 and 134 are cut by a line through two other points.
        for (i, j, k) in [(0, 2, 4), (1, 3, 4)] {
            let mut chi = convex(5);
            chi.set_sorted_sign(i, j, k, Sign::Neg);
            assert!(!chi.check_axioms().is_empty(), "mutation {i}{j}{k}");
        }
        // An ear can be pushed across its diagonal.
        let mut ear = convex(5);
        ear.set_sorted_sign(0, 1, 2, Sign::Neg);
        assert!(ear.check_axioms().is_empty());
        assert!(!ear.is_extreme(1));
    }

    #[test]
    fn extreme_and_hull_on_convex() {
        let chi = convex(5);
        assert_eq!(chi.extreme_elements().len(), 5);
        let rc = RootedChirotope::new(chi, 0).unwrap();
        assert_eq!(rc.hull_neighbors().unwrap(), (1, 4));
        let tri = RootedChirotope::new(convex(3), 2).unwrap();
        assert_eq!(tri.hull_neighbors().unwrap(), (0, 1));
    }

    #[test]
    fn crossing_on_convex_quadrilateral() {
        let chi = convex(4);
        assert!(chi.segments_cross((0, 2), (1, 3)).unwrap());
        assert!(!chi.segments_cross((0, 1), (2, 3)).unwrap());
        assert_eq!(chi.segments_cross((0, 1), (1, 2)), Err(Error::SharedEndpoint));
        assert!(chi.segments_cross((1, 3), (2, 0)).unwrap());
    }

    #[test]
    fn restrict_and_flip() {
        let (tri, map) = convex(6).restrict(&[0, 1, 2]).unwrap();
        assert_eq!(tri, convex(3));
        assert_eq!(map, vec![0, 1, 2]);
        let (same, _) = convex(6).restrict(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(same, convex(6));
        assert!(matches!(
            convex(6).restrict(&[0, 1]),
            Err(Error::TooSmall { .. })
        ));
        let flipped = convex(3).flip();
        assert_eq!(flipped.sign(0, 1, 2).unwrap(), Sign::Neg);
        assert_eq!(flipped.flip(), convex(3));
    }

    #[test]
    fn non_extreme_root_is_rejected() {
        // 3 lies inside the triangle 0,1,2
        let interior = Chirotope::from_signs(4, vec![Sign::Pos, Sign::Pos, Sign::Neg, Sign::Pos])
            .unwrap();
        assert!(interior.check_axioms().is_empty());
        assert!(!interior.is_extreme(3));
        assert!(RootedChirotope::new(interior, 3).is_err());
    }
}
