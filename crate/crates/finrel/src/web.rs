//! Web expressions: compositional descriptions of the underlying sets of
//! spaces, with bounded enumeration.
//!
//! A web is described by a [`WebExpr`]; the polarity (straight or dual
//! finiteness structure) is carried alongside, in [`crate::finstruct::Space`],
//! never inside the expression. Enumeration is driven by the structural size
//! of points, with one convention for value-infinite leaves: a natural
//! `Nat(n)` and a base-web atom with token index `n` are admitted at bound
//! `k` iff `n <= k`, even though their structural size is always 1.

use crate::point::{Multiset, Name, Point};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// A compositional web description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WebExpr {
    /// Infinite base web of atoms `x0@name, x1@name, ...`.
    Base { name: Name },
    /// Explicit finite web.
    FinEnum { name: Name, points: Vec<Point> },
    /// Flat natural numbers.
    FlatNat,
    Tensor(Box<WebExpr>, Box<WebExpr>),
    /// Product family (web of `&`).
    With(Vec<(Name, WebExpr)>),
    /// Sum family (web of `⊕`; same web as `With`, different structure).
    Plus(Vec<(Name, WebExpr)>),
    /// Lifted sum: bare index tokens plus the tagged disjoint union.
    LPlus(Vec<(Name, WebExpr)>),
    /// Finite multisets.
    Bang(Box<WebExpr>),
    /// `Arrow(a, b)` has the points of `Tensor(Bang(a), b)`.
    Arrow(Box<WebExpr>, Box<WebExpr>),
    /// Paths of a lazy recursive datatype.
    Lazy(Signature),
}

/// A power-series datatype signature: sorts with label webs and arity names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub name: Name,
    pub sorts: Vec<SortDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortDecl {
    pub name: Name,
    pub label: WebExpr,
    pub arities: Vec<Name>,
}

impl Signature {
    pub fn sort(&self, name: &str) -> Option<&SortDecl> {
        self.sorts.iter().find(|s| s.name == name)
    }

    pub fn sort_names(&self) -> Vec<Name> {
        self.sorts.iter().map(|s| s.name.clone()).collect()
    }

    /// All names occurring in the signature (sorts and arities).
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for s in &self.sorts {
            out.insert(s.name.clone());
            for j in &s.arities {
                out.insert(j.clone());
            }
        }
        out
    }

    /// True when some sort reachable through arity steps starts an
    /// unbounded family of addresses, i.e. the sort graph has a cycle.
    /// Every sort with at least one arity points at every sort, so this
    /// holds exactly when some sort has an arity.
    pub fn has_unbounded_addresses(&self) -> bool {
        self.sorts.iter().any(|s| !s.arities.is_empty())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WebError {
    #[error("web not enumerable: {0}")]
    NotEnumerable(String),
    #[error("point {point} is not in web {web}: {reason}")]
    NotMember {
        web: String,
        point: String,
        reason: String,
    },
}

impl WebExpr {
    pub fn base(name: impl Into<Name>) -> WebExpr {
        WebExpr::Base { name: name.into() }
    }

    pub fn fin_enum(name: impl Into<Name>, points: Vec<Point>) -> WebExpr {
        let mut points: Vec<Point> = points;
        points.sort();
        points.dedup();
        WebExpr::FinEnum {
            name: name.into(),
            points,
        }
    }

    pub fn empty() -> WebExpr {
        WebExpr::fin_enum("empty", Vec::new())
    }

    pub fn tensor(a: WebExpr, b: WebExpr) -> WebExpr {
        WebExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn bang(a: WebExpr) -> WebExpr {
        WebExpr::Bang(Box::new(a))
    }

    pub fn arrow(a: WebExpr, b: WebExpr) -> WebExpr {
        WebExpr::Arrow(Box::new(a), Box::new(b))
    }

    /// Membership test, with a diagnostic on failure.
    pub fn check(&self, p: &Point) -> Result<(), WebError> {
        let fail = |reason: &str| {
            Err(WebError::NotMember {
                web: self.to_string(),
                point: p.to_string(),
                reason: reason.to_string(),
            })
        };
        match self {
            WebExpr::Base { name } => match p {
                Point::Atom(w, _) if w == name => Ok(()),
                _ => fail("expected an atom of this base web"),
            },
            WebExpr::FinEnum { points, .. } => {
                if points.binary_search(p).is_ok() {
                    Ok(())
                } else {
                    fail("not among the enumerated points")
                }
            }
            WebExpr::FlatNat => match p {
                Point::Nat(_) => Ok(()),
                _ => fail("expected a natural"),
            },
            WebExpr::Tensor(a, b) => match p {
                Point::Pair(x, y) => {
                    a.check(x)?;
                    b.check(y)
                }
                _ => fail("expected a pair"),
            },
            WebExpr::With(fam) | WebExpr::Plus(fam) => match p {
                Point::Tag(i, q) => match fam.iter().find(|(n, _)| n == i) {
                    Some((_, w)) => w.check(q),
                    None => fail("unknown index"),
                },
                _ => fail("expected a tagged point"),
            },
            WebExpr::LPlus(fam) => match p {
                Point::Idx(i) => {
                    if fam.iter().any(|(n, _)| n == i) {
                        Ok(())
                    } else {
                        fail("unknown index token")
                    }
                }
                Point::Tag(i, q) => match fam.iter().find(|(n, _)| n == i) {
                    Some((_, w)) => w.check(q),
                    None => fail("unknown index"),
                },
                _ => fail("expected an index token or a tagged point"),
            },
            WebExpr::Bang(a) => match p {
                Point::MSet(m) => {
                    for key in m.support() {
                        a.check(key)?;
                    }
                    Ok(())
                }
                _ => fail("expected a finite multiset"),
            },
            WebExpr::Arrow(a, b) => match p {
                Point::Pair(x, y) => {
                    WebExpr::bang((**a).clone()).check(x)?;
                    b.check(y)
                }
                _ => fail("expected a (multiset, point) pair"),
            },
            WebExpr::Lazy(sig) => match p {
                Point::Path(path) => {
                    let mut cur = match sig.sort(&path.sort) {
                        Some(s) => s,
                        None => return fail("unknown sort"),
                    };
                    for (j, i) in &path.addr {
                        if !cur.arities.contains(j) {
                            return fail("address step uses an arity not of the current sort");
                        }
                        cur = match sig.sort(i) {
                            Some(s) => s,
                            None => return fail("unknown sort in address"),
                        };
                    }
                    match &*path.value {
                        Point::Star => Ok(()),
                        v => cur.label.check(v),
                    }
                }
                _ => fail("expected a path"),
            },
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.check(p).is_ok()
    }

    /// Exactly the points of the web with structural size at most `bound`
    /// (value-capped for naturals and base atoms), sorted, without
    /// duplicates.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<Point>, WebError> {
        let mut out = self.enumerate_raw(bound)?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn enumerate_raw(&self, bound: u64) -> Result<Vec<Point>, WebError> {
        if bound == 0 {
            return Ok(Vec::new());
        }
        match self {
            WebExpr::Base { name } => Ok((0..=bound)
                .map(|i| Point::atom(name.clone(), format!("x{i}")))
                .collect()),
            WebExpr::FinEnum { points, .. } => {
                Ok(points.iter().filter(|p| p.size() <= bound).cloned().collect())
            }
            WebExpr::FlatNat => Ok((0..=bound).map(Point::Nat).collect()),
            WebExpr::Tensor(a, b) => {
                let mut out = Vec::new();
                if bound >= 3 {
                    let xs = a.enumerate(bound - 2)?;
                    for x in &xs {
                        let remaining = bound - 1 - x.size();
                        for y in b.enumerate(remaining)? {
                            out.push(Point::pair(x.clone(), y));
                        }
                    }
                }
                Ok(out)
            }
            WebExpr::With(fam) | WebExpr::Plus(fam) => {
                let mut out = Vec::new();
                for (i, w) in fam {
                    for q in w.enumerate(bound - 1)? {
                        out.push(Point::tag(i.clone(), q));
                    }
                }
                Ok(out)
            }
            WebExpr::LPlus(fam) => {
                let mut out = Vec::new();
                for (i, w) in fam {
                    out.push(Point::idx(i.clone()));
                    for q in w.enumerate(bound - 1)? {
                        out.push(Point::tag(i.clone(), q));
                    }
                }
                Ok(out)
            }
            WebExpr::Bang(a) => {
                let keys = a.enumerate(bound - 1)?;
                Ok(enumerate_msets(&keys, bound - 1)
                    .into_iter()
                    .map(Point::MSet)
                    .collect())
            }
            WebExpr::Arrow(a, b) => {
                WebExpr::tensor(WebExpr::bang((**a).clone()), (**b).clone()).enumerate_raw(bound)
            }
            WebExpr::Lazy(sig) => enumerate_paths(sig, bound),
        }
    }

    /// The full point list when the web is finite, `None` otherwise.
    pub fn finite_points(&self) -> Option<Vec<Point>> {
        match self {
            WebExpr::Base { .. } | WebExpr::FlatNat => None,
            WebExpr::FinEnum { points, .. } => Some(points.clone()),
            WebExpr::Tensor(a, b) => {
                let xs = a.finite_points();
                let ys = b.finite_points();
                match (xs, ys) {
                    (Some(xs), _) if xs.is_empty() => Some(Vec::new()),
                    (_, Some(ys)) if ys.is_empty() => Some(Vec::new()),
                    (Some(xs), Some(ys)) => {
                        let mut out = Vec::new();
                        for x in &xs {
                            for y in &ys {
                                out.push(Point::pair(x.clone(), y.clone()));
                            }
                        }
                        Some(out)
                    }
                    _ => None,
                }
            }
            WebExpr::With(fam) | WebExpr::Plus(fam) => {
                let mut out = Vec::new();
                for (i, w) in fam {
                    for q in w.finite_points()? {
                        out.push(Point::tag(i.clone(), q));
                    }
                }
                Some(out)
            }
            WebExpr::LPlus(fam) => {
                let mut out = Vec::new();
                for (i, w) in fam {
                    out.push(Point::idx(i.clone()));
                    for q in w.finite_points()? {
                        out.push(Point::tag(i.clone(), q));
                    }
                }
                Some(out)
            }
            WebExpr::Bang(a) => {
                let keys = a.finite_points()?;
                if keys.is_empty() {
                    Some(vec![Point::MSet(Multiset::empty())])
                } else {
                    None
                }
            }
            WebExpr::Arrow(a, b) => {
                WebExpr::tensor(WebExpr::bang((**a).clone()), (**b).clone()).finite_points()
            }
            WebExpr::Lazy(sig) => {
                if sig.has_unbounded_addresses() {
                    // a single arity step can re-enter any sort, so address
                    // lengths are unbounded as soon as one arity exists
                    return None;
                }
                for s in &sig.sorts {
                    s.label.finite_points()?;
                }
                // no arities at all: only length-0 paths
                let mut out = Vec::new();
                for s in &sig.sorts {
                    out.push(Point::Path(crate::point::PathPoint::new(
                        s.name.clone(),
                        Vec::new(),
                        Point::Star,
                    )));
                    for v in s.label.finite_points()? {
                        out.push(Point::Path(crate::point::PathPoint::new(
                            s.name.clone(),
                            Vec::new(),
                            v,
                        )));
                    }
                }
                Some(out)
            }
        }
    }

    pub fn is_empty_web(&self) -> bool {
        matches!(self.finite_points(), Some(ps) if ps.is_empty())
    }
}

/// All multisets over `keys` with `weight <= budget` where
/// `weight = sum(mult * size(key))`.
pub fn enumerate_msets(keys: &[Point], budget: u64) -> Vec<Multiset> {
    let mut out = Vec::new();
    let mut current: Vec<(Point, u32)> = Vec::new();
    fn go(
        keys: &[Point],
        idx: usize,
        budget: u64,
        current: &mut Vec<(Point, u32)>,
        out: &mut Vec<Multiset>,
    ) {
        if idx == keys.len() {
            out.push(Multiset::from_entries(current.clone()));
            return;
        }
        let size = keys[idx].size();
        let max_mult = budget / size;
        for mult in 0..=max_mult {
            if mult > 0 {
                current.push((keys[idx].clone(), mult as u32));
            }
            go(keys, idx + 1, budget - mult * size, current, out);
            if mult > 0 {
                current.pop();
            }
        }
    }
    go(keys, 0, budget, &mut current, &mut out);
    out
}

fn enumerate_paths(sig: &Signature, bound: u64) -> Result<Vec<Point>, WebError> {
    // size = 1 + addr.len() + value.size(), value >= 1
    let mut out = Vec::new();
    if bound < 2 {
        return Ok(out);
    }
    let max_len = bound - 2;
    // walk addresses breadth-first: (start sort, addr, last sort)
    let mut frontier: Vec<(Name, Vec<(Name, Name)>)> = sig
        .sorts
        .iter()
        .map(|s| (s.name.clone(), Vec::new()))
        .collect();
    let mut len = 0u64;
    while !frontier.is_empty() && len <= max_len {
        for (start, addr) in &frontier {
            let last = addr.last().map(|(_, i)| i.clone()).unwrap_or_else(|| start.clone());
            let decl = sig.sort(&last).expect("walk stays inside the signature");
            let value_budget = bound - 1 - len;
            out.push(Point::Path(crate::point::PathPoint::new(
                start.clone(),
                addr.clone(),
                Point::Star,
            )));
            for v in decl.label.enumerate(value_budget)? {
                out.push(Point::Path(crate::point::PathPoint::new(
                    start.clone(),
                    addr.clone(),
                    v,
                )));
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (start, addr) in frontier {
            let last = addr.last().map(|(_, i)| i.clone()).unwrap_or_else(|| start.clone());
            let decl = sig.sort(&last).expect("walk stays inside the signature");
            for j in &decl.arities {
                for target in &sig.sorts {
                    let mut addr2 = addr.clone();
                    addr2.push((j.clone(), target.name.clone()));
                    next.push((start.clone(), addr2));
                }
            }
        }
        frontier = next;
        len += 1;
    }
    Ok(out)
}

impl fmt::Display for WebExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WebExpr::Base { name } => write!(f, "base {name}"),
            WebExpr::FinEnum { points, .. } => {
                write!(f, "finite {{")?;
                for (k, p) in points.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
            WebExpr::FlatNat => write!(f, "nat"),
            WebExpr::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            WebExpr::With(fam) => write_family(f, "with", fam),
            WebExpr::Plus(fam) => write_family(f, "plus", fam),
            WebExpr::LPlus(fam) => write_family(f, "lsum", fam),
            WebExpr::Bang(a) => write!(f, "bang({a})"),
            WebExpr::Arrow(a, b) => write!(f, "arrow({a},{b})"),
            WebExpr::Lazy(sig) => write!(f, "data {}", sig.name),
        }
    }
}

fn write_family(f: &mut fmt::Formatter<'_>, kw: &str, fam: &[(Name, WebExpr)]) -> fmt::Result {
    write!(f, "{kw} {{")?;
    for (k, (name, w)) in fam.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{name}:{w}")?;
    }
    write!(f, "}}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::PathPoint;

    pub(crate) fn bool_web() -> WebExpr {
        WebExpr::LPlus(vec![
            ("t".into(), WebExpr::empty()),
            ("f".into(), WebExpr::empty()),
        ])
    }

    fn btree_sig() -> Signature {
        Signature {
            name: "Tree".into(),
            sorts: vec![
                SortDecl {
                    name: "lf".into(),
                    label: WebExpr::fin_enum("A", vec![Point::atom("A", "a")]),
                    arities: vec![],
                },
                SortDecl {
                    name: "nd".into(),
                    label: WebExpr::fin_enum("B", vec![Point::atom("B", "b")]),
                    arities: vec!["G".into(), "D".into()],
                },
            ],
        }
    }

    #[test]
    fn lifted_sum_contains_bare_indices() {
        assert!(bool_web().contains(&Point::idx("t")));
        assert!(!bool_web().contains(&Point::idx("x")));
        assert!(bool_web().check(&Point::tag("t", Point::Star)).is_err());
    }

    #[test]
    fn bang_contains_empty_multiset() {
        let w = WebExpr::bang(WebExpr::empty());
        assert!(w.contains(&Point::MSet(Multiset::empty())));
    }

    #[test]
    fn lazy_membership_checks_alternation() {
        let sig = btree_sig();
        let w = WebExpr::Lazy(sig);
        let ok = Point::Path(PathPoint::new(
            "nd",
            vec![("G".into(), "lf".into())],
            Point::Star,
        ));
        assert!(w.contains(&ok));
        // lf has no arities
        let bad = Point::Path(PathPoint::new(
            "lf",
            vec![("G".into(), "lf".into())],
            Point::Star,
        ));
        assert!(!w.contains(&bad));
        // value must be in the label web of the last sort
        let bad_value = Point::Path(PathPoint::new(
            "nd",
            vec![("G".into(), "lf".into())],
            Point::atom("B", "b"),
        ));
        assert!(!w.contains(&bad_value));
    }

    #[test]
    fn flatnat_enumeration_uses_value_cap() {
        assert_eq!(
            WebExpr::FlatNat.enumerate(1).unwrap(),
            vec![Point::Nat(0), Point::Nat(1)]
        );
        assert!(WebExpr::FlatNat.enumerate(0).unwrap().is_empty());
    }

    #[test]
    fn boolean_web_enumeration() {
        assert_eq!(
            bool_web().enumerate(2).unwrap(),
            vec![Point::idx("f"), Point::idx("t")]
        );
    }

    #[test]
    fn enumeration_is_monotone_and_sound() {
        let sig = btree_sig();
        let webs = vec![
            WebExpr::Lazy(sig),
            WebExpr::bang(bool_web()),
            WebExpr::tensor(bool_web(), WebExpr::FlatNat),
            WebExpr::arrow(bool_web(), bool_web()),
        ];
        for w in webs {
            for k in 0..7u64 {
                let small = w.enumerate(k).unwrap();
                let big = w.enumerate(k + 1).unwrap();
                for p in &small {
                    assert!(big.contains(p), "monotone: {p} in {w} at {k}");
                    assert!(w.contains(p), "sound: {p} in {w}");
                    assert!(p.size() <= k || matches!(p, Point::Nat(_) | Point::Atom(..)));
                }
                let dedup: BTreeSet<_> = small.iter().cloned().collect();
                assert_eq!(dedup.len(), small.len(), "no duplicates");
            }
        }
    }

    #[test]
    fn finite_points_detection() {
        assert!(WebExpr::FlatNat.finite_points().is_none());
        assert_eq!(bool_web().finite_points().unwrap().len(), 2);
        assert_eq!(
            WebExpr::bang(WebExpr::empty()).finite_points().unwrap().len(),
            1
        );
        assert!(WebExpr::bang(bool_web()).finite_points().is_none());
        assert!(WebExpr::Lazy(btree_sig()).finite_points().is_none());
    }
}
