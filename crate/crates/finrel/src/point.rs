//! Points and finite multisets.
//!
//! A [`Point`] is a value of a web: an atom of a named base web, a natural
//! number, the anonymous token `*`, a pair, a finite multiset, a tagged
//! injection, a bare index token, or a typed-address path into a recursive
//! datatype. Every other module builds its webs, relations and denotations
//! out of these.
//!
//! Points carry a canonical total order given by a length-prefixed preorder
//! serialization ([`Point::canonical_bytes`]); [`Ord`] is implemented to
//! agree with the lexicographic order on those byte strings, so sorted
//! containers and golden files are stable across runs and versions.

use std::cmp::Ordering;
use std::fmt;

/// Interned-enough name type for webs, indices, sorts and arities.
pub type Name = String;

/// A point of a web.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    /// Atom `token@web` of a named base or finite web.
    Atom(Name, Name),
    /// Natural number of the flat-naturals web.
    Nat(u64),
    /// The anonymous value `*` carried by star-valued paths.
    Star,
    /// Pair of points (tensor and arrow webs).
    Pair(Box<Point>, Box<Point>),
    /// Finite multiset of points (exponential webs).
    MSet(Multiset),
    /// Tagged injection `i:p` (sum and product families).
    Tag(Name, Box<Point>),
    /// Bare index token `i` (lifted sums).
    Idx(Name),
    /// Typed-address path of a lazy datatype web.
    Path(PathPoint),
}

/// A typed-address path `i0 j1 i1 ... jn in` ending in a value.
///
/// The address alternates arity and sort names; the value is either [`Point::Star`]
/// or a point of the label web of the last sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathPoint {
    pub sort: Name,
    /// Sequence of (arity name, next sort name) steps.
    pub addr: Vec<(Name, Name)>,
    pub value: Box<Point>,
}

impl PathPoint {
    pub fn new(sort: impl Into<Name>, addr: Vec<(Name, Name)>, value: Point) -> Self {
        PathPoint {
            sort: sort.into(),
            addr,
            value: Box::new(value),
        }
    }

    /// The sort at the end of the address (`lastType` of the path).
    pub fn last_sort(&self) -> &Name {
        self.addr.last().map(|(_, i)| i).unwrap_or(&self.sort)
    }

    /// Address length (number of arity steps).
    pub fn len(&self) -> usize {
        self.addr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.addr.is_empty()
    }

    /// Prepend one step `sort -j-> self`, keeping the value.
    pub fn prefixed(&self, sort: impl Into<Name>, arity: impl Into<Name>) -> PathPoint {
        let mut addr = Vec::with_capacity(self.addr.len() + 1);
        addr.push((arity.into(), self.sort.clone()));
        addr.extend(self.addr.iter().cloned());
        PathPoint {
            sort: sort.into(),
            addr,
            value: self.value.clone(),
        }
    }

    /// Drop the first step, if any: inverse of [`PathPoint::prefixed`].
    pub fn unprefixed(&self) -> Option<(Name, Name, PathPoint)> {
        let (j, i1) = self.addr.first()?.clone();
        Some((
            self.sort.clone(),
            j,
            PathPoint {
                sort: i1,
                addr: self.addr[1..].to_vec(),
                value: self.value.clone(),
            },
        ))
    }
}

impl Point {
    pub fn atom(web: impl Into<Name>, token: impl Into<Name>) -> Point {
        Point::Atom(web.into(), token.into())
    }

    pub fn pair(p: Point, q: Point) -> Point {
        Point::Pair(Box::new(p), Box::new(q))
    }

    pub fn tag(name: impl Into<Name>, p: Point) -> Point {
        Point::Tag(name.into(), Box::new(p))
    }

    pub fn idx(name: impl Into<Name>) -> Point {
        Point::Idx(name.into())
    }

    pub fn mset<I: IntoIterator<Item = Point>>(items: I) -> Point {
        Point::MSet(Multiset::from_iter(items))
    }

    /// Structural size. Atoms, naturals, `*` and bare indices count 1;
    /// a pair is 1 plus its components; a multiset is 1 plus the sum of
    /// `multiplicity * size(key)`; a tag is 1 plus its payload; a path is
    /// 1 plus its address length plus the size of its value.
    pub fn size(&self) -> u64 {
        match self {
            Point::Atom(..) | Point::Nat(_) | Point::Star | Point::Idx(_) => 1,
            Point::Pair(p, q) => 1 + p.size() + q.size(),
            Point::MSet(m) => 1 + m.weight(),
            Point::Tag(_, p) => 1 + p.size(),
            Point::Path(path) => 1 + path.addr.len() as u64 + path.value.size(),
        }
    }

    fn variant_rank(&self) -> u8 {
        match self {
            Point::Atom(..) => 0,
            Point::Nat(_) => 1,
            Point::Star => 2,
            Point::Pair(..) => 3,
            Point::MSet(_) => 4,
            Point::Tag(..) => 5,
            Point::Idx(_) => 6,
            Point::Path(_) => 7,
        }
    }

    /// Canonical serialization: variant tag, then fields in preorder with
    /// length-prefixed names and big-endian fixed-width integers. The
    /// lexicographic order on these byte strings is the canonical point
    /// order; `Ord` agrees with it.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_bytes(&mut out);
        out
    }

    fn write_bytes(&self, out: &mut Vec<u8>) {
        out.push(self.variant_rank());
        match self {
            Point::Atom(web, token) => {
                write_name(web, out);
                write_name(token, out);
            }
            Point::Nat(n) => out.extend_from_slice(&n.to_be_bytes()),
            Point::Star => {}
            Point::Pair(p, q) => {
                p.write_bytes(out);
                q.write_bytes(out);
            }
            Point::MSet(m) => {
                out.extend_from_slice(&(m.entries().len() as u32).to_be_bytes());
                for (key, mult) in m.entries() {
                    key.write_bytes(out);
                    out.extend_from_slice(&mult.to_be_bytes());
                }
            }
            Point::Tag(name, p) => {
                write_name(name, out);
                p.write_bytes(out);
            }
            Point::Idx(name) => write_name(name, out),
            Point::Path(path) => {
                write_name(&path.sort, out);
                out.extend_from_slice(&(path.addr.len() as u32).to_be_bytes());
                for (j, i) in &path.addr {
                    write_name(j, out);
                    write_name(i, out);
                }
                path.value.write_bytes(out);
            }
        }
    }
}

fn write_name(name: &str, out: &mut Vec<u8>) {
    out.extend_from_slice(&(name.len() as u32).to_be_bytes());
    out.extend_from_slice(name.as_bytes());
}

/// Length-then-bytes comparison, matching the length-prefixed serialization.
fn cmp_name(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.as_bytes().cmp(b.as_bytes()))
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        let rank = self.variant_rank().cmp(&other.variant_rank());
        if rank != Ordering::Equal {
            return rank;
        }
        match (self, other) {
            (Point::Atom(w1, t1), Point::Atom(w2, t2)) => {
                cmp_name(w1, w2).then_with(|| cmp_name(t1, t2))
            }
            (Point::Nat(a), Point::Nat(b)) => a.cmp(b),
            (Point::Star, Point::Star) => Ordering::Equal,
            (Point::Pair(p1, q1), Point::Pair(p2, q2)) => p1.cmp(p2).then_with(|| q1.cmp(q2)),
            (Point::MSet(m1), Point::MSet(m2)) => m1.cmp(m2),
            (Point::Tag(n1, p1), Point::Tag(n2, p2)) => {
                cmp_name(n1, n2).then_with(|| p1.cmp(p2))
            }
            (Point::Idx(n1), Point::Idx(n2)) => cmp_name(n1, n2),
            (Point::Path(p1), Point::Path(p2)) => {
                cmp_name(&p1.sort, &p2.sort)
                    .then_with(|| p1.addr.len().cmp(&p2.addr.len()))
                    .then_with(|| {
                        for ((j1, i1), (j2, i2)) in p1.addr.iter().zip(&p2.addr) {
                            let c = cmp_name(j1, j2).then_with(|| cmp_name(i1, i2));
                            if c != Ordering::Equal {
                                return c;
                            }
                        }
                        Ordering::Equal
                    })
                    .then_with(|| p1.value.cmp(&p2.value))
            }
            _ => unreachable!("variant ranks already compared"),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite multiset of points in canonical form: a sorted association list
/// of keys with strictly positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multiset(Vec<(Point, u32)>);

impl Multiset {
    pub fn empty() -> Multiset {
        Multiset(Vec::new())
    }

    pub fn singleton(p: Point) -> Multiset {
        Multiset(vec![(p, 1)])
    }

    pub fn from_entries(entries: Vec<(Point, u32)>) -> Multiset {
        let mut m = Multiset::empty();
        for (p, k) in entries {
            m.insert_many(p, k);
        }
        m
    }

    pub fn entries(&self) -> &[(Point, u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, p: Point) {
        self.insert_many(p, 1);
    }

    pub fn insert_many(&mut self, p: Point, k: u32) {
        if k == 0 {
            return;
        }
        match self.0.binary_search_by(|(q, _)| q.cmp(&p)) {
            Ok(i) => self.0[i].1 += k,
            Err(i) => self.0.insert(i, (p, k)),
        }
    }

    pub fn multiplicity(&self, p: &Point) -> u32 {
        match self.0.binary_search_by(|(q, _)| q.cmp(p)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.multiplicity(p) > 0
    }

    /// Pointwise sum of multiplicities.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        for (p, k) in other.entries() {
            out.insert_many(p.clone(), *k);
        }
        out
    }

    /// Pointwise difference, if `other` is contained in `self`.
    pub fn checked_sub(&self, other: &Multiset) -> Option<Multiset> {
        let mut out = Vec::new();
        for (p, k) in self.entries() {
            let rem = k.checked_sub(other.multiplicity(p))?;
            if rem > 0 {
                out.push((p.clone(), rem));
            }
        }
        // every key of `other` must appear in `self`
        for (p, k) in other.entries() {
            if self.multiplicity(p) < *k {
                return None;
            }
        }
        Some(Multiset(out))
    }

    /// Number of elements counted with multiplicity.
    pub fn card(&self) -> u64 {
        self.0.iter().map(|(_, k)| *k as u64).sum()
    }

    /// Support: the set of keys.
    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.0.iter().map(|(p, _)| p)
    }

    /// Contribution to structural size: `sum(mult * size(key))`.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|(p, k)| *k as u64 * p.size()).sum()
    }

    /// Elements in canonical order, repeated per multiplicity.
    pub fn expand(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for (p, k) in &self.0 {
            for _ in 0..*k {
                out.push(p.clone());
            }
        }
        out
    }

    /// Scale all multiplicities by `k` (`k = 0` yields the empty multiset).
    pub fn scaled(&self, k: u32) -> Multiset {
        if k == 0 {
            return Multiset::empty();
        }
        Multiset(self.0.iter().map(|(p, m)| (p.clone(), m * k)).collect())
    }
}

impl FromIterator<Point> for Multiset {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        let mut m = Multiset::empty();
        for p in iter {
            m.insert(p);
        }
        m
    }
}

/// Canonical text form.
///
/// `a@A`, `3`, `*`, `(p,q)`, `[p,p,q]`, `i:p`, `i`, `path(i0 j1 i1 ... ; v)`.
impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Atom(web, token) => write!(f, "{token}@{web}"),
            Point::Nat(n) => write!(f, "{n}"),
            Point::Star => write!(f, "*"),
            Point::Pair(p, q) => write!(f, "({p},{q})"),
            Point::MSet(m) => write!(f, "{m}"),
            Point::Tag(name, p) => write!(f, "{name}:{p}"),
            Point::Idx(name) => write!(f, "{name}"),
            Point::Path(path) => {
                write!(f, "path({}", path.sort)?;
                for (j, i) in &path.addr {
                    write!(f, " {j} {i}")?;
                }
                write!(f, " ; {})", path.value)
            }
        }
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut first = true;
        for (p, k) in self.entries() {
            for _ in 0..*k {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
                first = false;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(t: &str) -> Point {
        Point::atom("A", t)
    }

    #[test]
    fn size_of_leaves_and_composites() {
        assert_eq!(Point::idx("lf").size(), 1);
        assert_eq!(Point::Nat(12345).size(), 1);
        assert_eq!(Point::pair(a("a"), Point::Star).size(), 3);
        // [a,a] = 1 + 2*1
        assert_eq!(Point::mset([a("a"), a("a")]).size(), 3);
        let p = Point::Path(PathPoint::new("nd", vec![("G".into(), "lf".into())], Point::Star));
        assert_eq!(p.size(), 3);
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(Point::idx("a").cmp(&Point::idx("a")), Ordering::Equal);
        assert!(Point::Nat(1) < Point::Nat(2));
        assert!(Point::Atom("A".into(), "a".into()) < Point::Nat(0));
    }

    #[test]
    fn multiset_canonical_form() {
        let m = Multiset::from_iter([a("b"), a("a"), a("b")]);
        assert_eq!(m.entries().len(), 2);
        assert_eq!(m.card(), 3);
        assert_eq!(m.multiplicity(&a("b")), 2);
        assert_eq!(m.to_string(), "[a@A,b@A,b@A]");
        // canonical form is unique: rebuilding from expansion is the identity
        assert_eq!(Multiset::from_iter(m.expand()), m);
    }

    #[test]
    fn multiset_sum_and_support() {
        let empty = Multiset::empty();
        let single = Multiset::singleton(a("x"));
        assert_eq!(empty.sum(&single), single);
        let double = single.sum(&single);
        assert_eq!(double.multiplicity(&a("x")), 2);
        let m1 = Multiset::from_iter([a("a"), a("b")]);
        let m2 = Multiset::singleton(a("b"));
        assert_eq!(m1.sum(&m2).card(), 3);
        let sup: Vec<_> = m1.sum(&m2).support().cloned().collect();
        assert_eq!(sup, vec![a("a"), a("b")]);
    }

    #[test]
    fn checked_sub() {
        let m1 = Multiset::from_iter([a("a"), a("b"), a("b")]);
        let m2 = Multiset::from_iter([a("b")]);
        let d = m1.checked_sub(&m2).unwrap();
        assert_eq!(d, Multiset::from_iter([a("a"), a("b")]));
        assert_eq!(m2.checked_sub(&m1), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(a("a").to_string(), "a@A");
        assert_eq!(Point::Star.to_string(), "*");
        assert_eq!(Point::pair(a("a"), Point::Nat(3)).to_string(), "(a@A,3)");
        assert_eq!(Point::tag("t", a("a")).to_string(), "t:a@A");
        let p = Point::Path(PathPoint::new(
            "nd",
            vec![("G".into(), "lf".into())],
            a("a"),
        ));
        assert_eq!(p.to_string(), "path(nd G lf ; a@A)");
    }
}
