//! Words over smearing 1-simplices, paths, loops and path-frame systems.
//!
//! Words are stored in traversal order: `letters[0]` is the first segment walked, so the
//! group element written `bₙ ⋯ b₁` has `letters == [b₁, …, bₙ]`. Each letter keeps its
//! simplex in a canonical orientation (first vertex key not greater than the second) and
//! an inversion flag, so `b` and `b̄` share one stored simplex and cancellation is an
//! exact comparison.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{DoubleCone, FourVector, PoincareElement, Tri};
use crate::simplex::{AffineSimplex, Point, SupportBall, TestFunctionTag, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Letter {
    simplex: Arc<AffineSimplex>,
    inverted: bool,
}

impl Letter {
    /// The generator `b` for a 1-simplex `b`.
    pub fn new(b: AffineSimplex) -> Result<Self> {
        Self::from_parts(b, false)
    }

    /// `b` if `inverted` is false, `b̄` otherwise.
    pub fn from_parts(b: AffineSimplex, inverted: bool) -> Result<Self> {
        if b.dim() != 1 {
            return Err(Error::UnsupportedDimension(b.dim()));
        }
        if b.vertex(0).key_cmp(b.vertex(1)).is_gt() {
            Ok(Letter {
                simplex: Arc::new(b.opposite()?),
                inverted: !inverted,
            })
        } else {
            Ok(Letter {
                simplex: Arc::new(b),
                inverted,
            })
        }
    }

    pub fn segment(from: FourVector, to: FourVector, tag: TestFunctionTag) -> Result<Self> {
        Self::new(AffineSimplex::new(vec![from, to], tag)?)
    }

    /// The traversed segment, from `start()` to `end()`.
    pub fn oriented(&self) -> AffineSimplex {
        if self.inverted {
            self.simplex.opposite().expect("1-simplex")
        } else {
            (*self.simplex).clone()
        }
    }

    pub fn canonical_simplex(&self) -> &AffineSimplex {
        &self.simplex
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    /// `∂₁` of the oriented segment.
    pub fn start_vertex(&self) -> FourVector {
        *self.simplex.vertex(if self.inverted { 1 } else { 0 })
    }

    /// `∂₀` of the oriented segment.
    pub fn end_vertex(&self) -> FourVector {
        *self.simplex.vertex(if self.inverted { 0 } else { 1 })
    }

    pub fn start(&self) -> Point {
        AffineSimplex::point(self.start_vertex(), self.tag().clone())
    }

    pub fn end(&self) -> Point {
        AffineSimplex::point(self.end_vertex(), self.tag().clone())
    }

    pub fn tag(&self) -> &TestFunctionTag {
        self.simplex.tag()
    }

    /// `e_a`, which is the identity in the group.
    pub fn is_degenerate(&self) -> bool {
        self.simplex.is_degenerate()
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            simplex: self.simplex.clone(),
            inverted: !self.inverted,
        }
    }

    pub fn cancels(&self, other: &Letter) -> bool {
        self.inverted != other.inverted
            && (Arc::ptr_eq(&self.simplex, &other.simplex) || self.simplex == other.simplex)
    }

    pub fn poincare_act(&self, p: &PoincareElement) -> Letter {
        Letter::new(self.oriented().poincare_act(p)).expect("1-simplex")
    }
}

#[derive(Serialize, Deserialize)]
struct LetterRepr {
    simplex: AffineSimplex,
    inverted: bool,
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LetterRepr {
            simplex: (*self.simplex).clone(),
            inverted: self.inverted,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = LetterRepr::deserialize(d)?;
        Letter::from_parts(r.simplex, r.inverted).map_err(serde::de::Error::custom)
    }
}

/// Free reduction with a stack: drop trivial items, cancel adjacent inverse pairs.
pub fn free_reduce<T: Clone>(
    items: &[T],
    is_trivial: impl Fn(&T) -> bool,
    cancels: impl Fn(&T, &T) -> bool,
) -> Vec<T> {
    let mut stack: Vec<T> = Vec::with_capacity(items.len());
    for x in items {
        if is_trivial(x) {
            continue;
        }
        match stack.last() {
            Some(top) if cancels(top, x) => {
                stack.pop();
            }
            _ => stack.push(x.clone()),
        }
    }
    stack
}

/// Element of the free group on smearing 1-simplices modulo `e_a = 𝟙`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Letters in traversal order.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Traverse `self`, then `next`; the group product `next · self`.
    pub fn then(&self, next: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(next.letters.iter().cloned());
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn reduce(&self) -> Word {
        Word {
            letters: free_reduce(&self.letters, Letter::is_degenerate, Letter::cancels),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.reduce().letters.len() == self.letters.len()
    }

    /// Support balls of the letters of the reduced word, without repeats.
    pub fn support(&self) -> Vec<SupportBall> {
        let mut out: Vec<SupportBall> = Vec::new();
        for l in self.reduce().letters {
            let b = l.canonical_simplex().support_ball();
            if !out.contains(&b) {
                out.push(b);
            }
        }
        out
    }

    pub fn poincare_act(&self, p: &PoincareElement) -> Word {
        Word {
            letters: self.letters.iter().map(|l| l.poincare_act(p)).collect(),
        }
    }
}

impl fmt::Display for Word {
    /// Written right to left, as group products are.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "𝟙");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .rev()
            .map(|l| {
                let s = l.oriented();
                format!("[{}→{}]", s.vertex(0), s.vertex(1))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn reduce(w: &Word) -> Word {
    w.reduce()
}

pub fn support(w: &Word) -> Vec<SupportBall> {
    w.support()
}

pub fn poincare_act_word(p: &PoincareElement, w: &Word) -> Word {
    w.poincare_act(p)
}

/// A nonempty composable word with a single test function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    word: Word,
}

impl Path {
    pub fn new(word: Word) -> Result<Self> {
        let letters = word.letters();
        let first = letters.first().ok_or(Error::EmptyPath)?;
        for pair in letters.windows(2) {
            if pair[0].tag() != pair[1].tag() {
                return Err(Error::TagMismatch);
            }
            if pair[0]
                .end_vertex()
                .key_cmp(&pair[1].start_vertex())
                .is_ne()
            {
                return Err(Error::EndpointMismatch);
            }
        }
        debug_assert!(letters.iter().all(|l| l.tag() == first.tag()));
        Ok(Path { word })
    }

    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        Self::new(Word::from_letters(letters))
    }

    /// Straight segment from `from` to `to`.
    pub fn segment(from: FourVector, to: FourVector, tag: TestFunctionTag) -> Result<Self> {
        Self::from_letters(vec![Letter::segment(from, to, tag)?])
    }

    /// Through the listed vertices in order.
    pub fn polyline(points: &[FourVector], tag: &TestFunctionTag) -> Result<Self> {
        let letters = points
            .windows(2)
            .map(|w| Letter::segment(w[0], w[1], tag.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_letters(letters)
    }

    /// `e_a`.
    pub fn trivial(a: &Point) -> Result<Self> {
        if a.dim() != 0 {
            return Err(Error::UnsupportedDimension(a.dim()));
        }
        let v = *a.vertex(0);
        Self::segment(v, v, a.tag().clone())
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn letters(&self) -> &[Letter] {
        self.word.letters()
    }

    pub fn tag(&self) -> &TestFunctionTag {
        self.word.letters[0].tag()
    }

    /// `∂₁p`.
    pub fn start(&self) -> Point {
        self.word.letters[0].start()
    }

    /// `∂₀p`.
    pub fn end(&self) -> Point {
        self.word.letters.last().expect("nonempty").end()
    }

    pub fn is_loop(&self) -> bool {
        self.start() == self.end()
    }

    pub fn inverse(&self) -> Path {
        Path {
            word: self.word.inverse(),
        }
    }

    /// Reduction keeps endpoints; a path that reduces to 𝟙 becomes `e_{∂₁p}`.
    pub fn reduce(&self) -> Path {
        let word = self.word.reduce();
        if word.is_empty() {
            Path::trivial(&self.start()).expect("0-simplex")
        } else {
            Path { word }
        }
    }

    pub fn poincare_act(&self, p: &PoincareElement) -> Path {
        Path {
            word: self.word.poincare_act(p),
        }
    }
}

/// `qp`: first `p`, then `q`. Requires `∂₀p = ∂₁q`.
pub fn compose(q: &Path, p: &Path) -> Result<Path> {
    if q.tag() != p.tag() {
        return Err(Error::TagMismatch);
    }
    if p.end() != q.start() {
        return Err(Error::EndpointMismatch);
    }
    Path::new(p.word.then(&q.word))
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WordRepr {
    Path { letters: Vec<Letter> },
    Loop { factors: Vec<Vec<Letter>> },
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WordRepr::Path {
            letters: self.letters().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match WordRepr::deserialize(d)? {
            WordRepr::Path { letters } => Path::from_letters(letters).map_err(D::Error::custom),
            WordRepr::Loop { .. } => Err(D::Error::custom("expected a path")),
        }
    }
}

/// A product of loops `pₙ ⋯ p₁`, stored with its factorization (traversal order).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopWord {
    factors: Vec<Path>,
}

impl LoopWord {
    pub fn identity() -> Self {
        LoopWord::default()
    }

    pub fn new(factors: Vec<Path>) -> Result<Self> {
        if factors.iter().any(|p| !p.is_loop()) {
            return Err(Error::NotALoop);
        }
        Ok(LoopWord { factors })
    }

    pub fn from_loop(p: Path) -> Result<Self> {
        Self::new(vec![p])
    }

    pub fn factors(&self) -> &[Path] {
        &self.factors
    }

    pub fn word(&self) -> Word {
        self.factors
            .iter()
            .fold(Word::identity(), |acc, p| acc.then(p.word()))
    }

    pub fn then(&self, next: &LoopWord) -> LoopWord {
        let mut factors = self.factors.clone();
        factors.extend(next.factors.iter().cloned());
        LoopWord { factors }
    }

    pub fn inverse(&self) -> LoopWord {
        LoopWord {
            factors: self.factors.iter().rev().map(Path::inverse).collect(),
        }
    }

    pub fn poincare_act(&self, p: &PoincareElement) -> LoopWord {
        LoopWord {
            factors: self.factors.iter().map(|f| f.poincare_act(p)).collect(),
        }
    }
}

impl Serialize for LoopWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WordRepr::Loop {
            factors: self.factors.iter().map(|p| p.letters().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LoopWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match WordRepr::deserialize(d)? {
            WordRepr::Loop { factors } => factors
                .into_iter()
                .map(Path::from_letters)
                .collect::<Result<Vec<_>>>()
                .and_then(LoopWord::new)
                .map_err(D::Error::custom),
            WordRepr::Path { .. } => Err(D::Error::custom("expected a loop")),
        }
    }
}

/// `𝝏c = ∂₁c‾ ∂₀c ∂₂c`: the loop `c₀ → c₁ → c₂ → c₀` over `∂₁∂₂c = c₀`.
pub fn path_boundary(c: &AffineSimplex) -> Result<LoopWord> {
    if c.dim() != 2 {
        return Err(Error::UnsupportedDimension(c.dim()));
    }
    let letters = vec![
        Letter::new(c.face(2)?)?,
        Letter::new(c.face(0)?)?,
        Letter::from_parts(c.face(1)?, true)?,
    ];
    LoopWord::from_loop(Path::from_letters(letters)?)
}

/// Whether `|w| ⊆ o`, certified through ball containment of the inflated hull vertices.
pub fn is_local(w: &Word, o: &DoubleCone) -> Tri {
    w.support()
        .iter()
        .fold(Tri::True, |acc, b| acc.and(b.containment(o)))
}

/// `e_{(a′,a)}`: the straight segment from `a` to `a′`.
pub fn euclidean_frame(a: &Point, a_prime: &Point) -> Result<Path> {
    for p in [a, a_prime] {
        if p.dim() != 0 {
            return Err(Error::UnsupportedDimension(p.dim()));
        }
    }
    if a.tag() != a_prime.tag() {
        return Err(Error::TagMismatch);
    }
    Path::segment(*a.vertex(0), *a_prime.vertex(0), a.tag().clone())
}

type FrameRule = dyn Fn(&Point, &Point) -> Result<Path> + Send + Sync;

/// For each pole `a` and point `a′` of its component, a path `p_{(a,a′)}` from `a′` to `a`.
#[derive(Clone)]
pub enum PathFrameSystem {
    Euclidean,
    Custom { name: String, rule: Arc<FrameRule> },
}

impl fmt::Debug for PathFrameSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PathFrameSystem({})", self.name())
    }
}

impl PathFrameSystem {
    pub fn custom(
        name: impl Into<String>,
        rule: impl Fn(&Point, &Point) -> Result<Path> + Send + Sync + 'static,
    ) -> Self {
        PathFrameSystem::Custom {
            name: name.into(),
            rule: Arc::new(rule),
        }
    }

    /// `a′ → a′ + offset → a`. Covariant under translations only.
    pub fn detour(offset: FourVector) -> Self {
        Self::custom(format!("detour{offset}"), move |pole, target| {
            let (a, b) = (*pole.vertex(0), *target.vertex(0));
            Path::polyline(&[b, b + offset, a], pole.tag())
        })
    }

    pub fn name(&self) -> &str {
        match self {
            PathFrameSystem::Euclidean => "euclidean",
            PathFrameSystem::Custom { name, .. } => name,
        }
    }

    /// `p_{(pole, target)}`, with `p_{(a,a)} = e_a` enforced.
    pub fn frame(&self, pole: &Point, target: &Point) -> Result<Path> {
        if pole.dim() != 0 || target.dim() != 0 {
            return Err(Error::UnsupportedDimension(pole.dim().max(target.dim())));
        }
        if pole.tag() != target.tag() {
            return Err(Error::FrameUndefined(
                "pole and target lie in different components".into(),
            ));
        }
        if pole == target {
            return Path::trivial(pole);
        }
        let p = match self {
            PathFrameSystem::Euclidean => euclidean_frame(target, pole)?,
            PathFrameSystem::Custom { rule, .. } => rule(pole, target)?,
        };
        if p.start() != *target || p.end() != *pole {
            return Err(Error::FrameUndefined(format!(
                "{} returned a path with the wrong endpoints",
                self.name()
            )));
        }
        Ok(p)
    }
}
