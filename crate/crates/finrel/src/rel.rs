//! Relations, multirelations and generators.
//!
//! A [`Rel`] is an explicit finite set of point pairs; an [`MRel`] is an
//! explicit finite set of (finite multiset, point) pairs, the morphisms of
//! the co-Kleisli category. Infinite (multi)relations are represented by
//! [`Generator`]s: a membership test paired with a size-bounded enumerator.
//!
//! # Bound conventions
//!
//! The size of an `MRel` entry `(m, p)` is the size of the pair point
//! `(m, p)`, i.e. `1 + size(m) + size(p)`. A bounded slice at `k` holds
//! exactly the entries of size `<= k`.
//!
//! Composition of multirelations quantifies over an intermediate multiset
//! that can be arbitrarily large even for small outputs, so an exact bounded
//! composite is not computable from slices alone. [`mcompose`] therefore
//! searches intermediates up to a separate `search` bound; the default
//! [`default_search_bound`] (`2k + 6`) is large enough that identity laws
//! hold exactly on slices, and callers that chain compositions (the
//! denotation pipeline) thread one global search bound through instead.

use crate::point::{Multiset, Name, Point};
use crate::web::{enumerate_msets, WebError, WebExpr};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Entry size used by every bounded slice of pair-like data.
pub fn pair_entry_size(m: &Multiset, p: &Point) -> u64 {
    2 + m.weight() + p.size()
}

/// Default intermediate search bound for a requested output bound.
pub fn default_search_bound(bound: u64) -> u64 {
    2 * bound + 6
}

/// An explicit finite relation: a sorted set of point pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Rel {
    pairs: BTreeSet<(Point, Point)>,
}

impl Rel {
    pub fn new() -> Rel {
        Rel::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Point, Point)>>(pairs: I) -> Rel {
        Rel {
            pairs: pairs.into_iter().collect(),
        }
    }

    /// Identity relation on an explicit point set.
    pub fn identity<'a, I: IntoIterator<Item = &'a Point>>(points: I) -> Rel {
        Rel::from_pairs(points.into_iter().map(|p| (p.clone(), p.clone())))
    }

    pub fn insert(&mut self, a: Point, b: Point) {
        self.pairs.insert((a, b));
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(Point, Point)> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: &Point, b: &Point) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    /// Reverse relation; an involution.
    pub fn reverse(&self) -> Rel {
        Rel::from_pairs(self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())))
    }

    /// Direct image of a point set.
    pub fn image(&self, a: &BTreeSet<Point>) -> BTreeSet<Point> {
        self.pairs
            .iter()
            .filter(|(x, _)| a.contains(x))
            .map(|(_, y)| y.clone())
            .collect()
    }

    pub fn image_of_point(&self, p: &Point) -> BTreeSet<Point> {
        let mut set = BTreeSet::new();
        set.insert(p.clone());
        self.image(&set)
    }
}

/// Relational composite `g . f`.
pub fn compose(g: &Rel, f: &Rel) -> Rel {
    let mut by_source: BTreeMap<&Point, Vec<&Point>> = BTreeMap::new();
    for (b, c) in g.pairs() {
        by_source.entry(b).or_default().push(c);
    }
    let mut out = Rel::new();
    for (a, b) in f.pairs() {
        if let Some(cs) = by_source.get(b) {
            for c in cs {
                out.insert(a.clone(), (*c).clone());
            }
        }
    }
    out
}

/// An explicit finite multirelation in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MRel {
    entries: BTreeSet<(Multiset, Point)>,
}

impl MRel {
    pub fn new() -> MRel {
        MRel::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (Multiset, Point)>>(entries: I) -> MRel {
        MRel {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, m: Multiset, p: Point) {
        self.entries.insert((m, p));
    }

    pub fn entries(&self) -> impl Iterator<Item = &(Multiset, Point)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, m: &Multiset, p: &Point) -> bool {
        self.entries.contains(&(m.clone(), p.clone()))
    }

    /// Restrict to entries of size at most `bound`.
    pub fn slice(&self, bound: u64) -> MRel {
        MRel::from_entries(
            self.entries
                .iter()
                .filter(|(m, p)| pair_entry_size(m, p) <= bound)
                .cloned(),
        )
    }

    /// Entries as pair points `(m, p)` of the arrow web.
    pub fn points(&self) -> Vec<Point> {
        self.entries
            .iter()
            .map(|(m, p)| Point::pair(Point::MSet(m.clone()), p.clone()))
            .collect()
    }

    pub fn from_points<'a, I: IntoIterator<Item = &'a Point>>(points: I) -> Option<MRel> {
        let mut out = MRel::new();
        for p in points {
            match p {
                Point::Pair(m, q) => match &**m {
                    Point::MSet(m) => out.insert(m.clone(), (**q).clone()),
                    _ => return None,
                },
                _ => return None,
            }
        }
        Some(out)
    }
}

/// Line-oriented canonical text form: one `(multiset ; point)` pair per
/// line, sorted. Identical bytes across runs.
impl fmt::Display for MRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, p) in &self.entries {
            writeln!(f, "({m} ; {p})")?;
        }
        Ok(())
    }
}

type MemberFn<T> = Arc<dyn Fn(&T) -> bool + Send + Sync>;
type EnumFn<T> = Arc<dyn Fn(u64) -> Vec<T> + Send + Sync>;
type ImageFn = Arc<dyn Fn(&Point) -> Vec<Point> + Send + Sync>;

/// Why a generator is known finitary, when it is.
///
/// The operators of the calculus (dereliction, injections, case, node,
/// match, iter, rec, the n-th fixpoint approximants) are finitary; builders
/// record that fact here so that relation checks can report it. Checks
/// still validate the claim on bounded probes before trusting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitaryNote(pub String);

/// A lazily enumerable (multi)relation: a membership test plus a bounded
/// enumerator, with an optional exact pointwise image for quasi-functional
/// relations.
///
/// Contract: `enumerate(k)` returns exactly the members of size `<= k`,
/// is monotone in `k`, and agrees with `member` on every returned element.
#[derive(Clone)]
pub struct Generator<T> {
    pub name: String,
    member: MemberFn<T>,
    enumerate: EnumFn<T>,
    pub finitary_note: Option<FinitaryNote>,
}

impl<T> fmt::Debug for Generator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generator({})", self.name)
    }
}

impl<T: Ord + Clone> Generator<T> {
    pub fn new(
        name: impl Into<String>,
        member: impl Fn(&T) -> bool + Send + Sync + 'static,
        enumerate: impl Fn(u64) -> Vec<T> + Send + Sync + 'static,
    ) -> Generator<T> {
        Generator {
            name: name.into(),
            member: Arc::new(member),
            enumerate: Arc::new(enumerate),
            finitary_note: None,
        }
    }

    pub fn with_finitary_note(mut self, note: impl Into<String>) -> Self {
        self.finitary_note = Some(FinitaryNote(note.into()));
        self
    }

    pub fn member(&self, x: &T) -> bool {
        (self.member)(x)
    }

    pub fn enumerate(&self, bound: u64) -> Vec<T> {
        let mut out = (self.enumerate)(bound);
        out.sort();
        out.dedup();
        out
    }
}

/// Generator of point pairs (a lazily enumerable `Rel`).
#[derive(Clone)]
pub struct RelGen {
    pub gen: Generator<(Point, Point)>,
    /// Exact pointwise image, when the relation is quasi-functional with a
    /// computable image.
    pub image: Option<ImageFn>,
}

impl fmt::Debug for RelGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RelGen({})", self.gen.name)
    }
}

impl RelGen {
    pub fn new(gen: Generator<(Point, Point)>) -> RelGen {
        RelGen { gen, image: None }
    }

    pub fn with_image(
        mut self,
        image: impl Fn(&Point) -> Vec<Point> + Send + Sync + 'static,
    ) -> RelGen {
        self.image = Some(Arc::new(image));
        self
    }
}

/// Generator of multirelation entries.
pub type MGen = Generator<(Multiset, Point)>;

/// A relation given either explicitly or by a generator.
#[derive(Clone, Debug)]
pub enum RelLike {
    Explicit(Rel),
    Gen(RelGen),
}

impl RelLike {
    pub fn member(&self, a: &Point, b: &Point) -> bool {
        match self {
            RelLike::Explicit(r) => r.contains(a, b),
            RelLike::Gen(g) => g.gen.member(&(a.clone(), b.clone())),
        }
    }

    pub fn enumerate(&self, bound: u64) -> Vec<(Point, Point)> {
        match self {
            RelLike::Explicit(r) => r.pairs().cloned().collect(),
            RelLike::Gen(g) => g.gen.enumerate(bound),
        }
    }

    pub fn name(&self) -> String {
        match self {
            RelLike::Explicit(_) => "explicit".to_string(),
            RelLike::Gen(g) => g.gen.name.clone(),
        }
    }

    /// Pointwise image: exact for explicit relations and for generators
    /// with an image function, slice-approximated otherwise.
    pub fn image_of_point(&self, p: &Point, bound: u64) -> Vec<Point> {
        match self {
            RelLike::Explicit(r) => r.image_of_point(p).into_iter().collect(),
            RelLike::Gen(g) => match &g.image {
                Some(f) => {
                    let mut out = f(p);
                    out.sort();
                    out.dedup();
                    out
                }
                None => g
                    .gen
                    .enumerate(bound)
                    .into_iter()
                    .filter(|(a, _)| a == p)
                    .map(|(_, b)| b)
                    .collect(),
            },
        }
    }
}

/// A multirelation given either explicitly or by a generator.
#[derive(Clone, Debug)]
pub enum MRelLike {
    Explicit(MRel),
    Gen(MGen),
}

impl MRelLike {
    pub fn member(&self, m: &Multiset, p: &Point) -> bool {
        match self {
            MRelLike::Explicit(r) => r.contains(m, p),
            MRelLike::Gen(g) => g.member(&(m.clone(), p.clone())),
        }
    }

    pub fn enumerate(&self, bound: u64) -> Vec<(Multiset, Point)> {
        match self {
            MRelLike::Explicit(r) => r
                .entries()
                .filter(|(m, p)| pair_entry_size(m, p) <= bound)
                .cloned()
                .collect(),
            MRelLike::Gen(g) => g.enumerate(bound),
        }
    }

    pub fn name(&self) -> String {
        match self {
            MRelLike::Explicit(_) => "explicit".to_string(),
            MRelLike::Gen(g) => g.name.clone(),
        }
    }
}

/// Direct image `f[a]`, restricted to the `bound`-slice for generators.
pub fn image(f: &RelLike, a: &BTreeSet<Point>, bound: u64) -> BTreeSet<Point> {
    match f {
        RelLike::Explicit(r) => r.image(a),
        RelLike::Gen(_) => f
            .enumerate(bound)
            .into_iter()
            .filter(|(x, _)| a.contains(x))
            .map(|(_, y)| y)
            .collect(),
    }
}

/// Division `f \ b` on an explicit candidate universe: the points of the
/// universe whose image lies inside `b`.
pub fn division(
    f: &RelLike,
    b: &BTreeSet<Point>,
    universe: &[Point],
    bound: u64,
) -> BTreeSet<Point> {
    universe
        .iter()
        .filter(|alpha| {
            f.image_of_point(alpha, bound)
                .iter()
                .all(|beta| b.contains(beta))
        })
        .cloned()
        .collect()
}

/// Co-Kleisli composition `g .! f` on bounded slices, with an explicit
/// intermediate search bound.
///
/// An output `(sum_i a_i, c)` is produced for every `(b, c)` in `g`'s
/// `search`-slice and every way of covering the occurrence list of `b` with
/// entries `(a_i, b_i)` of `f`'s `search`-slice; outputs are restricted to
/// size `<= bound` and canonicalized.
pub fn mcompose_search(g: &MRelLike, f: &MRelLike, bound: u64, search: u64) -> MRel {
    let g_entries = g.enumerate(search);
    let f_entries = f.enumerate(search);
    let mut by_target: BTreeMap<&Point, Vec<&Multiset>> = BTreeMap::new();
    for (m, p) in &f_entries {
        by_target.entry(p).or_default().push(m);
    }
    let mut out = MRel::new();
    for (b, c) in &g_entries {
        if 2 + c.size() > bound {
            // even the empty sum cannot fit
            continue;
        }
        // choose, for every key of b with multiplicity k, a k-multiset of
        // f-premises with that target; sum all chosen source multisets
        let keys: Vec<(&Point, u32)> = b.entries().iter().map(|(p, k)| (p, *k)).collect();
        let mut acc: Vec<Multiset> = vec![Multiset::empty()];
        let mut dead = false;
        for (key, mult) in keys {
            let Some(cands) = by_target.get(key) else {
                dead = true;
                break;
            };
            let combos = multichoose(cands, mult as usize);
            let mut next: Vec<Multiset> = Vec::new();
            for base in &acc {
                for combo in &combos {
                    let mut sum = base.clone();
                    for m in combo {
                        sum = sum.sum(m);
                    }
                    if pair_entry_size(&sum, c) <= bound {
                        next.push(sum);
                    }
                }
            }
            next.sort();
            next.dedup();
            if next.is_empty() {
                dead = true;
                break;
            }
            acc = next;
        }
        if dead {
            continue;
        }
        for m in acc {
            if pair_entry_size(&m, c) <= bound {
                out.insert(m, c.clone());
            }
        }
    }
    out
}

/// Co-Kleisli composition with the default search bound.
pub fn mcompose(g: &MRelLike, f: &MRelLike, bound: u64) -> MRel {
    mcompose_search(g, f, bound, default_search_bound(bound))
}

/// All multisets of `n` choices from `cands` (order-free, with repetition).
fn multichoose<'a>(cands: &[&'a Multiset], n: usize) -> Vec<Vec<&'a Multiset>> {
    let mut out = Vec::new();
    let mut cur: Vec<&'a Multiset> = Vec::new();
    fn go<'a>(
        cands: &[&'a Multiset],
        start: usize,
        n: usize,
        cur: &mut Vec<&'a Multiset>,
        out: &mut Vec<Vec<&'a Multiset>>,
    ) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..cands.len() {
            cur.push(cands[i]);
            go(cands, i, n - 1, cur, out);
            cur.pop();
        }
    }
    go(cands, 0, n, &mut cur, &mut out);
    out
}

/// The identity multirelation `{([a], a)}` on a web, as a bounded slice.
pub fn dereliction(w: &WebExpr, bound: u64) -> Result<MRel, WebError> {
    let mut out = MRel::new();
    if bound >= 2 {
        // an entry ([a], a) has size 2 + 2|a|
        for p in w.enumerate(bound.saturating_sub(2) / 2)? {
            let m = Multiset::singleton(p.clone());
            if pair_entry_size(&m, &p) <= bound {
                out.insert(m, p);
            }
        }
    }
    Ok(out)
}

/// Dereliction as a generator.
pub fn dereliction_gen(w: WebExpr) -> MGen {
    let w2 = w.clone();
    Generator::new(
        format!("dere({w})"),
        move |(m, p): &(Multiset, Point)| {
            m.card() == 1 && m.contains(p) && w.contains(p)
        },
        move |bound| dereliction(&w2, bound).map(|r| r.entries().cloned().collect()).unwrap_or_default(),
    )
    .with_finitary_note("identity multirelation: finite slices, singleton reverse images")
}

/// Tupling: `(m, (i, p))` for every `(m, p)` in the i-th component.
pub fn mtuple(components: &[(Name, MRel)]) -> MRel {
    let mut out = MRel::new();
    for (i, f) in components {
        for (m, p) in f.entries() {
            out.insert(m.clone(), Point::tag(i.clone(), p.clone()));
        }
    }
    out
}

/// Projection through a product family: keeps the i-th tags.
pub fn mproject(f: &MRel, i: &str) -> MRel {
    let mut out = MRel::new();
    for (m, p) in f.entries() {
        if let Point::Tag(n, q) = p {
            if n == i {
                out.insert(m.clone(), (**q).clone());
            }
        }
    }
    out
}

/// Injection into a lifted sum: `{([], i)} u {([a], i:a)}`.
pub fn inj_gen(family: &[(Name, WebExpr)], i: &str) -> Result<MGen, WebError> {
    let Some((idx, component)) = family
        .iter()
        .find(|(n, _)| n == i)
        .map(|(n, w)| (n.clone(), w.clone()))
    else {
        return Err(WebError::NotEnumerable(format!(
            "unknown index {i} in lifted sum"
        )));
    };
    let idx2 = idx.clone();
    let component2 = component.clone();
    Ok(Generator::new(
        format!("inj_{i}"),
        move |(m, p): &(Multiset, Point)| match p {
            Point::Idx(n) => n == &idx && m.is_empty(),
            Point::Tag(n, q) => {
                n == &idx
                    && m.card() == 1
                    && m.contains(q)
                    && component.contains(q)
            }
            _ => false,
        },
        move |bound| {
            let mut out = Vec::new();
            if bound >= 2 {
                out.push((Multiset::empty(), Point::idx(idx2.clone())));
            }
            if bound >= 4 {
                // ([a], i:a) has size 4 + 2|a|
                for a in component2
                    .enumerate(bound.saturating_sub(4) / 2)
                    .unwrap_or_default()
                {
                    let m = Multiset::singleton(a.clone());
                    let p = Point::tag(idx2.clone(), a);
                    if pair_entry_size(&m, &p) <= bound {
                        out.push((m, p));
                    }
                }
            }
            out
        },
    )
    .with_finitary_note("injections into lifted sums are finitary"))
}

/// Case definition operator of a lifted sum, internalized:
/// entries `([i] + i.a, ([(i,(a,b))], b))`.
pub fn case_gen(family: &[(Name, WebExpr)], target: &WebExpr) -> MGen {
    let fam: Vec<(Name, WebExpr)> = family.to_vec();
    let fam2 = fam.clone();
    let tgt = target.clone();
    let tgt2 = target.clone();
    Generator::new(
        "case",
        move |(m, p): &(Multiset, Point)| {
            // p must be ([(i,(a,b))], b)
            let Point::Pair(phis, beta) = p else {
                return false;
            };
            let Point::MSet(phis) = &**phis else {
                return false;
            };
            if phis.card() != 1 {
                return false;
            }
            let phi = &phis.entries()[0].0;
            let Point::Tag(i, inner) = phi else {
                return false;
            };
            let Point::Pair(abar, b) = &**inner else {
                return false;
            };
            let Point::MSet(abar) = &**abar else {
                return false;
            };
            if b != beta || !tgt.contains(beta) {
                return false;
            }
            let Some((_, component)) = fam.iter().find(|(n, _)| n == i) else {
                return false;
            };
            if !abar.support().all(|a| component.contains(a)) {
                return false;
            }
            // source multiset must be [i] plus i-tagged copies of abar
            let mut expected = Multiset::singleton(Point::idx(i.clone()));
            for (a, k) in abar.entries() {
                expected.insert_many(Point::tag(i.clone(), a.clone()), *k);
            }
            m == &expected
        },
        move |bound| {
            let mut out = Vec::new();
            if bound < 8 {
                return out;
            }
            let betas = tgt2.enumerate(bound.saturating_sub(6) / 2).unwrap_or_default();
            for (i, component) in &fam2 {
                let keys = component
                    .enumerate(bound.saturating_sub(7) / 2)
                    .unwrap_or_default();
                for abar in enumerate_msets(&keys, bound.saturating_sub(7) / 2) {
                    for beta in &betas {
                        let mut src = Multiset::singleton(Point::idx(i.clone()));
                        for (a, k) in abar.entries() {
                            src.insert_many(Point::tag(i.clone(), a.clone()), *k);
                        }
                        let phi = Point::tag(
                            i.clone(),
                            Point::pair(Point::MSet(abar.clone()), beta.clone()),
                        );
                        let p = Point::pair(
                            Point::MSet(Multiset::singleton(phi)),
                            beta.clone(),
                        );
                        if pair_entry_size(&src, &p) <= bound {
                            out.push((src, p));
                        }
                    }
                }
            }
            out
        },
    )
    .with_finitary_note("the case definition operator is finitary")
}

/// Bounded slice of the n-th fixpoint approximant on `(A => A) => A`.
///
/// `fix_0` is empty; `fix_{n+1}` holds `([(abar, a)] + sum_k phis_k, a)`
/// for every expansion `abar = [a_1..a_p]` with `(phis_k, a_k)` in `fix_n`.
pub fn fix_approx(n: u32, w: &WebExpr, bound: u64) -> Result<MRel, WebError> {
    if n == 0 {
        return Ok(MRel::new());
    }
    let prev = fix_approx(n - 1, w, bound)?;
    let points = w.enumerate(bound)?;
    let mut out = MRel::new();
    // group previous entries by target
    let mut by_target: BTreeMap<&Point, Vec<&Multiset>> = BTreeMap::new();
    for (m, p) in prev.entries() {
        by_target.entry(p).or_default().push(m);
    }
    for alpha in &points {
        // choose abar as a multiset over the web; every element must be
        // derivable from fix_{n-1}
        let keys: Vec<Point> = points.clone();
        for abar in enumerate_msets(&keys, bound) {
            let head = Point::pair(Point::MSet(abar.clone()), alpha.clone());
            let head_m = Multiset::singleton(head);
            if pair_entry_size(&head_m, alpha) > bound {
                continue;
            }
            // cover each occurrence of abar with a fix_{n-1} premise
            let mut acc: Vec<Multiset> = vec![head_m];
            let mut dead = false;
            for (key, mult) in abar.entries().iter().map(|(p, k)| (p, *k)) {
                let Some(cands) = by_target.get(key) else {
                    dead = true;
                    break;
                };
                let combos = multichoose(cands, mult as usize);
                let mut next = Vec::new();
                for base in &acc {
                    for combo in &combos {
                        let mut sum = base.clone();
                        for m in combo {
                            sum = sum.sum(m);
                        }
                        if pair_entry_size(&sum, alpha) <= bound {
                            next.push(sum);
                        }
                    }
                }
                next.sort();
                next.dedup();
                if next.is_empty() {
                    dead = true;
                    break;
                }
                acc = next;
            }
            if dead {
                continue;
            }
            for m in acc {
                out.insert(m, alpha.clone());
            }
        }
    }
    Ok(out)
}

/// The full fixpoint operator as a generator; membership is decided by
/// unfolding at most `card + 1` levels, which suffices because every
/// unfolding level consumes one head pair from the multiset.
pub fn fix_gen(w: WebExpr) -> MGen {
    let w2 = w.clone();
    Generator::new(
        format!("fix({w})"),
        move |(m, p): &(Multiset, Point)| fix_member(m, p, &w),
        move |bound| {
            let n = bound.min(64) as u32;
            fix_approx(n, &w2, bound)
                .map(|r| r.entries().cloned().collect())
                .unwrap_or_default()
        },
    )
}

fn fix_member(phi: &Multiset, alpha: &Point, w: &WebExpr) -> bool {
    if !w.contains(alpha) {
        return false;
    }
    // (phi, alpha) in fix iff some head ((abar, alpha)) in phi such that the
    // remainder splits into premises for the occurrences of abar.
    for (head, _) in phi.entries() {
        let Point::Pair(abar, a) = head else { continue };
        if **a != *alpha {
            continue;
        }
        let Point::MSet(abar) = &**abar else { continue };
        let Some(rest) = phi.checked_sub(&Multiset::singleton(head.clone())) else {
            continue;
        };
        if split_premises(&abar.expand(), &rest, &mut |phi_k, a_k| {
            fix_member(phi_k, a_k, w)
        }) {
            return true;
        }
    }
    false
}

/// Does `rest` split as `sum_k phis_k` with `pred(phis_k, occ_k)` for each
/// occurrence? Brute-force partition search over submultisets.
pub fn split_premises(
    occurrences: &[Point],
    rest: &Multiset,
    pred: &mut dyn FnMut(&Multiset, &Point) -> bool,
) -> bool {
    if occurrences.is_empty() {
        return rest.is_empty();
    }
    let occ = &occurrences[0];
    for sub in submultisets(rest) {
        if pred(&sub, occ) {
            let remainder = rest.checked_sub(&sub).expect("sub is a submultiset");
            if split_premises(&occurrences[1..], &remainder, pred) {
                return true;
            }
        }
    }
    false
}

/// All submultisets of `m` (multiplicity-wise), in some canonical order.
pub fn submultisets(m: &Multiset) -> Vec<Multiset> {
    let entries = m.entries();
    let mut out = Vec::new();
    let mut cur: Vec<(Point, u32)> = Vec::new();
    fn go(
        entries: &[(Point, u32)],
        idx: usize,
        cur: &mut Vec<(Point, u32)>,
        out: &mut Vec<Multiset>,
    ) {
        if idx == entries.len() {
            out.push(Multiset::from_entries(cur.clone()));
            return;
        }
        let (p, max) = &entries[idx];
        for k in 0..=*max {
            if k > 0 {
                cur.push((p.clone(), k));
            }
            go(entries, idx + 1, cur, out);
            if k > 0 {
                cur.pop();
            }
        }
    }
    go(entries, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: &str) -> Point {
        Point::atom("A", t)
    }

    fn bool_web() -> WebExpr {
        WebExpr::LPlus(vec![
            ("t".into(), WebExpr::empty()),
            ("f".into(), WebExpr::empty()),
        ])
    }

    #[test]
    fn image_basics() {
        let id = RelLike::Explicit(Rel::identity([pt("a"), pt("b")].iter()));
        let a: BTreeSet<_> = [pt("a"), pt("b")].into_iter().collect();
        assert_eq!(image(&id, &a, 10), a);

        let f = RelLike::Explicit(Rel::from_pairs([
            (pt("a"), pt("b1")),
            (pt("a"), pt("b2")),
        ]));
        let singleton: BTreeSet<_> = [pt("a")].into_iter().collect();
        let img = image(&f, &singleton, 10);
        assert_eq!(img, [pt("b1"), pt("b2")].into_iter().collect());
    }

    #[test]
    fn reverse_involution_and_identity() {
        assert_eq!(Rel::new().reverse(), Rel::new());
        let f = Rel::from_pairs([(pt("a"), pt("b"))]);
        assert_eq!(f.reverse(), Rel::from_pairs([(pt("b"), pt("a"))]));
        assert_eq!(f.reverse().reverse(), f);
        let id = Rel::identity([pt("a"), pt("b")].iter());
        assert_eq!(id.reverse(), id);
    }

    #[test]
    fn compose_basics() {
        let f = Rel::from_pairs([(pt("a"), pt("b"))]);
        let g = Rel::from_pairs([(pt("b"), pt("c"))]);
        assert_eq!(compose(&g, &f), Rel::from_pairs([(pt("a"), pt("c"))]));
        let id = Rel::identity([pt("a"), pt("b"), pt("c")].iter());
        assert_eq!(compose(&g, &id), g);
    }

    #[test]
    fn division_examples() {
        let f = RelLike::Explicit(Rel::from_pairs([
            (pt("a"), pt("b")),
            (pt("a"), pt("b2")),
        ]));
        let b: BTreeSet<_> = [pt("b")].into_iter().collect();
        let universe = vec![pt("a")];
        assert!(division(&f, &b, &universe, 10).is_empty());
        let b2: BTreeSet<_> = [pt("b"), pt("b2")].into_iter().collect();
        assert_eq!(division(&f, &b2, &universe, 10).len(), 1);
    }

    #[test]
    fn mcompose_hand_example() {
        // f = {([a], b1), ([], b2)}, g = {([b1,b2], c)}  =>  {([a], c)}
        let f = MRelLike::Explicit(MRel::from_entries([
            (Multiset::singleton(pt("a")), pt("b1")),
            (Multiset::empty(), pt("b2")),
        ]));
        let g = MRelLike::Explicit(MRel::from_entries([(
            Multiset::from_iter([pt("b1"), pt("b2")]),
            pt("c"),
        )]));
        let comp = mcompose(&g, &f, 12);
        let expected = MRel::from_entries([(Multiset::singleton(pt("a")), pt("c"))]);
        assert_eq!(comp, expected);
    }

    #[test]
    fn mcompose_identity_laws() {
        let dere = MRelLike::Gen(dereliction_gen(bool_web()));
        let g = MRel::from_entries([
            (Multiset::from_iter([Point::idx("t"), Point::idx("t")]), Point::idx("f")),
            (Multiset::empty(), Point::idx("t")),
        ]);
        let gl = MRelLike::Explicit(g.clone());
        for bound in 2..10u64 {
            assert_eq!(mcompose(&gl, &dere, bound), g.slice(bound), "right identity at {bound}");
            assert_eq!(mcompose(&dere, &gl, bound), g.slice(bound), "left identity at {bound}");
        }
    }

    #[test]
    fn dereliction_on_booleans() {
        let d = dereliction(&bool_web(), 6).unwrap();
        let expected = MRel::from_entries([
            (Multiset::singleton(Point::idx("t")), Point::idx("t")),
            (Multiset::singleton(Point::idx("f")), Point::idx("f")),
        ]);
        assert_eq!(d, expected);
        assert!(dereliction(&WebExpr::empty(), 6).unwrap().is_empty());
    }

    #[test]
    fn mtuple_and_projections() {
        assert!(mtuple(&[("1".into(), MRel::new()), ("2".into(), MRel::new())]).is_empty());
        let f1 = MRel::from_entries([(Multiset::singleton(pt("a")), pt("b"))]);
        let t = mtuple(&[("1".into(), f1.clone()), ("2".into(), MRel::new())]);
        assert_eq!(
            t,
            MRel::from_entries([(
                Multiset::singleton(pt("a")),
                Point::tag("1", pt("b"))
            )])
        );
        assert_eq!(mproject(&t, "1"), f1);
        assert_eq!(mproject(&t, "2"), MRel::new());
    }

    #[test]
    fn inj_membership() {
        let fam = vec![
            ("t".into(), WebExpr::empty()),
            ("f".into(), WebExpr::empty()),
        ];
        let inj_t = inj_gen(&fam, "t").unwrap();
        assert!(inj_t.member(&(Multiset::empty(), Point::idx("t"))));
        assert!(!inj_t.member(&(Multiset::empty(), Point::idx("f"))));
        let fam2 = vec![("i".into(), bool_web())];
        let inj_i = inj_gen(&fam2, "i").unwrap();
        let a = Point::idx("t");
        assert!(inj_i.member(&(Multiset::singleton(a.clone()), Point::tag("i", a.clone()))));
        assert!(!inj_i.member(&(
            Multiset::from_iter([a.clone(), a.clone()]),
            Point::tag("i", a)
        )));
        assert!(inj_gen(&fam, "zz").is_err());
    }

    #[test]
    fn case_membership_and_smallest_member() {
        let fam = vec![("i".into(), bool_web())];
        let target = bool_web();
        let case = case_gen(&fam, &target);
        // ([i], ([(i,([],b))], b))
        let beta = Point::idx("t");
        let phi = Point::tag("i", Point::pair(Point::MSet(Multiset::empty()), beta.clone()));
        let p = Point::pair(Point::MSet(Multiset::singleton(phi)), beta.clone());
        let src = Multiset::singleton(Point::idx("i"));
        assert!(case.member(&(src.clone(), p.clone())));
        // missing the bare token
        assert!(!case.member(&(Multiset::empty(), p)));
        // enumerated members agree with membership
        for e in case.enumerate(14) {
            assert!(case.member(&e));
        }
    }

    #[test]
    fn fix_first_approximants() {
        let w = WebExpr::fin_enum("V", vec![pt("v")]);
        let alpha = pt("v");
        assert!(fix_approx(0, &w, 20).unwrap().is_empty());
        let fix1 = fix_approx(1, &w, 20).unwrap();
        let head1 = Multiset::singleton(Point::pair(
            Point::MSet(Multiset::empty()),
            alpha.clone(),
        ));
        assert!(fix1.contains(&head1, &alpha));
        let fix2 = fix_approx(2, &w, 20).unwrap();
        let head2 = head1.sum(&Multiset::singleton(Point::pair(
            Point::MSet(Multiset::singleton(alpha.clone())),
            alpha.clone(),
        )));
        assert!(fix2.contains(&head2, &alpha));
        assert!(!fix1.contains(&head2, &alpha));
        // chain increasing on slices
        for n in 0..4 {
            let small = fix_approx(n, &w, 16).unwrap();
            let big = fix_approx(n + 1, &w, 16).unwrap();
            for (m, p) in small.entries() {
                assert!(big.contains(m, p), "fix_{n} subset of fix_{}", n + 1);
            }
        }
        // generator membership agrees
        let gen = fix_gen(w);
        assert!(gen.member(&(head2.clone(), alpha.clone())));
        assert!(!gen.member(&(Multiset::empty(), alpha)));
    }

    #[test]
    fn generator_contract_on_samples() {
        let gens = vec![dereliction_gen(bool_web()), case_gen(&[("i".into(), bool_web())], &bool_web())];
        for g in gens {
            let k = 10;
            let small = g.enumerate(k);
            let big = g.enumerate(k + 2);
            let filtered: Vec<_> = big
                .iter()
                .filter(|(m, p)| pair_entry_size(m, p) <= k)
                .cloned()
                .collect();
            assert_eq!(small, filtered, "{} slice consistency", g.name);
            for e in &small {
                assert!(g.member(e), "{} member agrees", g.name);
            }
        }
    }
}
