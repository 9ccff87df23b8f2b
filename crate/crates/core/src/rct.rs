//! Decorated rooted circle trees, admissible subsets and extractions.
//!
//! A tree `c^i` is stored as its root label `i ∈ 1..=m` together with the
//! word of decorations of its internal vertices, read clockwise from the
//! root. Internal vertices are addressed by 1-based position in that word.
//! A vertex decorated `x_0` is *white*, any other decoration is *black*.

use std::cmp::Ordering;
use std::fmt::{self, Display};

use crate::error::{Error, Result};
use crate::lincomb::Generator;
use crate::words::{Alphabet, Letter, Word};

/// Longest decoration word an [`Rct`] may carry; subsets are bitmasks.
pub const MAX_WORD_LEN: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rct {
    root: u8,
    word: Word,
}

impl Rct {
    pub fn new(root: u8, word: Word) -> Result<Self> {
        if root == 0 {
            return Err(Error::LabelOutOfRange { label: 0, m: 0 });
        }
        if word.len() > MAX_WORD_LEN {
            return Err(Error::DimensionMismatch(format!("word length {} exceeds {MAX_WORD_LEN}", word.len())));
        }
        Ok(Rct { root, word })
    }

    /// Root-labelled tree validated against an alphabet.
    pub fn with_alphabet(root: usize, word: Word, alphabet: Alphabet) -> Result<Self> {
        let root = alphabet.check_label(root)?;
        if !alphabet.contains_word(&word) {
            let bad = word.letters().iter().map(|l| l.index()).max().unwrap_or(0);
            return Err(Error::LetterOutOfRange { index: bad, m: alphabet.m() });
        }
        Rct::new(root, word)
    }

    /// Parses `<root>:<word>`, e.g. `1:0.0.1` or `2:e`.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        let (root, word) =
            s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("expected `<root>:<word>`, got `{s}`")))?;
        let root: usize = root.trim().parse().map_err(|_| Error::Parse(format!("bad root label `{root}`")))?;
        let word = Word::parse(word, alphabet)?;
        Rct::with_alphabet(root, word, alphabet)
    }

    pub(crate) fn from_parts(root: u8, word: Word) -> Self {
        debug_assert!(root >= 1 && word.len() <= MAX_WORD_LEN);
        Rct { root, word }
    }

    pub fn root(&self) -> u8 {
        self.root
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Number of vertices, root included.
    pub fn weight(&self) -> usize {
        self.word.len() + 1
    }

    pub fn degree(&self) -> usize {
        self.word.degree() + 1
    }

    fn letter_at(&self, pos: usize) -> Letter {
        self.word.letters()[pos - 1]
    }

    pub fn white_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.word.letters().iter().enumerate().filter(|(_, l)| l.is_white()).map(|(i, _)| i + 1)
    }

    /// No white vertex means no admissible subset, so the tree is primitive.
    pub fn is_primitive(&self) -> bool {
        self.white_positions().next().is_none()
    }

    pub fn is_admissible(&self, j: &AdmissibleSubset) -> bool {
        j.max_pos() <= self.word.len() && self.letter_at(j.min_pos()).is_white()
    }

    /// All admissible subsets in lexicographic order of their sorted positions.
    pub fn admissible_subsets(&self) -> Vec<AdmissibleSubset> {
        let mut out = Vec::new();
        for p in self.white_positions() {
            out.extend(self.subsets_with_min(p));
        }
        out.sort();
        out
    }

    /// Admissible subsets whose minimum is the white position `p`.
    fn subsets_with_min(&self, p: usize) -> impl Iterator<Item = AdmissibleSubset> {
        let n = self.word.len();
        let rest = n - p;
        let head = 1u32 << (p - 1);
        (0u64..(1u64 << rest)).map(move |bits| AdmissibleSubset(head | ((bits as u32) << p)))
    }

    /// Families of pairwise disjoint admissible subsets. With
    /// `include_trivial` the list also carries `Empty` and `Total`.
    pub fn admissible_extractions(&self, include_trivial: bool) -> Vec<Extraction> {
        let mut families = Vec::new();
        let whites: Vec<usize> = self.white_positions().collect();
        let mut chosen = Vec::new();
        self.disjoint_families(&whites, 0, 0, &mut chosen, &mut families);
        let mut out: Vec<Extraction> =
            families.into_iter().filter(|f: &Vec<AdmissibleSubset>| !f.is_empty()).map(Extraction::Proper).collect();
        out.sort_by(extraction_order);
        if include_trivial {
            out.insert(0, Extraction::Empty);
            out.push(Extraction::Total);
        }
        out
    }

    fn disjoint_families(
        &self,
        whites: &[usize],
        idx: usize,
        used: u32,
        chosen: &mut Vec<AdmissibleSubset>,
        out: &mut Vec<Vec<AdmissibleSubset>>,
    ) {
        if idx == whites.len() {
            out.push(chosen.clone());
            return;
        }
        self.disjoint_families(whites, idx + 1, used, chosen, out);
        let p = whites[idx];
        if used & (1 << (p - 1)) != 0 {
            return;
        }
        for s in self.subsets_with_min(p) {
            if s.0 & used == 0 {
                chosen.push(s);
                self.disjoint_families(whites, idx + 1, used | s.0, chosen, out);
                chosen.pop();
            }
        }
    }

    /// Families of admissible subsets with pairwise distinct minima whose
    /// members are pairwise disjoint or strictly nested. Includes `Empty`,
    /// never `Total`.
    pub fn all_extractions(&self) -> Vec<Extraction> {
        let mut out = Vec::new();
        self.for_each_extraction(|f| {
            out.push(if f.is_empty() { Extraction::Empty } else { Extraction::Proper(f.to_vec()) })
        });
        out.sort_by(extraction_order);
        out
    }

    /// Visits every general extraction (as its list of subsets, sorted by
    /// minimum; the empty list is the empty extraction) without collecting.
    pub fn for_each_extraction(&self, mut visit: impl FnMut(&[AdmissibleSubset])) {
        let whites: Vec<usize> = self.white_positions().collect();
        let mut chosen = Vec::new();
        self.nested_families(&whites, 0, &mut chosen, &mut visit);
    }

    fn nested_families(
        &self,
        whites: &[usize],
        idx: usize,
        chosen: &mut Vec<AdmissibleSubset>,
        visit: &mut impl FnMut(&[AdmissibleSubset]),
    ) {
        if idx == whites.len() {
            visit(chosen);
            return;
        }
        self.nested_families(whites, idx + 1, chosen, visit);
        for s in self.subsets_with_min(whites[idx]) {
            if chosen.iter().all(|c| c.compatible(&s)) {
                chosen.push(s);
                self.nested_families(whites, idx + 1, chosen, visit);
                chosen.pop();
            }
        }
    }

    /// Replaces the minimum of each subset by `x_label` and deletes the other
    /// positions of the subsets.
    pub fn quotient(&self, subsets: &[AdmissibleSubset], labels: &[usize], alphabet: Alphabet) -> Result<Rct> {
        if subsets.len() != labels.len() {
            return Err(Error::LabelCount { subsets: subsets.len(), labels: labels.len() });
        }
        for s in subsets {
            if !self.is_admissible(s) {
                return Err(Error::NotAdmissible(s.to_string()));
            }
        }
        for (a, s) in subsets.iter().enumerate() {
            for t in &subsets[a + 1..] {
                if !s.is_disjoint(t) {
                    return Err(Error::Overlap(s.to_string(), t.to_string()));
                }
            }
        }
        let labels = labels.iter().map(|&l| alphabet.check_label(l)).collect::<Result<Vec<u8>>>()?;
        Ok(self.quotient_unchecked(subsets, &labels))
    }

    pub(crate) fn quotient_unchecked(&self, subsets: &[AdmissibleSubset], labels: &[u8]) -> Rct {
        let mut removed = 0u32;
        let mut relabel = [0u8; MAX_WORD_LEN];
        for (s, &l) in subsets.iter().zip(labels) {
            removed |= s.0 & !(1 << (s.min_pos() - 1));
            relabel[s.min_pos() - 1] = l;
        }
        let word = Word::from_letters(self.word.letters().iter().enumerate().filter_map(|(i, &l)| {
            if removed & (1 << i) != 0 {
                None
            } else if relabel[i] != 0 {
                Some(Letter::new(relabel[i]))
            } else {
                Some(l)
            }
        }));
        Rct::from_parts(self.root, word)
    }

    /// The sub-tree carried by `j`: its minimum becomes the root labelled
    /// `label`, the remaining positions of `j` its internal vertices.
    pub fn restrict(&self, j: &AdmissibleSubset, label: usize, alphabet: Alphabet) -> Result<Rct> {
        if !self.is_admissible(j) {
            return Err(Error::NotAdmissible(j.to_string()));
        }
        let label = alphabet.check_label(label)?;
        Ok(self.restrict_unchecked(j, label))
    }

    pub(crate) fn restrict_unchecked(&self, j: &AdmissibleSubset, label: u8) -> Rct {
        let word = Word::from_letters(j.positions().skip(1).map(|p| self.letter_at(p)));
        Rct::from_parts(label, word)
    }

    /// Same tree with a different root label.
    pub fn relabel_root(&self, root: u8) -> Rct {
        Rct::from_parts(root, self.word.clone())
    }

    /// Multi-line ASCII dump: root, then one line per internal vertex.
    pub fn ascii_dump(&self) -> String {
        let mut s = format!("[root {}]\n", self.root);
        for (i, l) in self.word.letters().iter().enumerate() {
            let colour = if l.is_white() { "o" } else { "*" };
            s.push_str(&format!("  {:>2} {colour} x_{}\n", i + 1, l.index()));
        }
        s
    }
}

impl Display for Rct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.root, self.word)
    }
}

impl Generator for Rct {
    fn degree(&self) -> usize {
        Rct::degree(self)
    }
}

pub fn rct_degree(c: &Rct) -> usize {
    c.degree()
}

pub fn rct_weight(c: &Rct) -> usize {
    c.weight()
}

/// Every tree of degree at most `max_degree`, ordered by degree then root
/// then word.
pub fn rcts_up_to_degree(alphabet: Alphabet, max_degree: usize) -> Vec<Rct> {
    if max_degree == 0 {
        return Vec::new();
    }
    let words = alphabet.words_up_to_degree(max_degree - 1);
    let mut out: Vec<Rct> =
        alphabet.labels().flat_map(|i| words.iter().map(move |w| Rct::from_parts(i, w.clone()))).collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    out
}

/// Nonempty set of internal positions whose minimum is a white vertex,
/// stored as a bitmask (position `p` is bit `p - 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleSubset(u32);

impl AdmissibleSubset {
    /// Builds the subset from positions (any order, duplicates rejected).
    pub fn from_positions(positions: &[usize]) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Parse("admissible subsets are nonempty".into()));
        }
        let mut mask = 0u32;
        for &p in positions {
            if p == 0 || p > MAX_WORD_LEN {
                return Err(Error::Parse(format!("position {p} outside 1..={MAX_WORD_LEN}")));
            }
            let bit = 1u32 << (p - 1);
            if mask & bit != 0 {
                return Err(Error::Parse(format!("duplicate position {p}")));
            }
            mask |= bit;
        }
        Ok(AdmissibleSubset(mask))
    }

    /// Parses `{2,3}`.
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected `{{p,q,...}}`, got `{s}`")))?;
        let positions = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad position `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        AdmissibleSubset::from_positions(&positions)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn positions(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..MAX_WORD_LEN).filter(move |i| mask & (1 << i) != 0).map(|i| i + 1)
    }

    pub fn min_pos(self) -> usize {
        self.0.trailing_zeros() as usize + 1
    }

    pub fn max_pos(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(self, other: &Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_strict_subset_of(self, other: &Self) -> bool {
        self.0 != other.0 && self.0 & other.0 == self.0
    }

    /// Allowed together in a general extraction.
    pub fn compatible(self, other: &Self) -> bool {
        matches!(relation(&self, other), SubsetRelation::Disjoint | SubsetRelation::Nested)
    }

    /// Positions of `self` renumbered inside the sub-tree carried by
    /// `parent`, which must strictly contain `self` with a different minimum.
    pub fn relative_to(self, parent: &AdmissibleSubset) -> AdmissibleSubset {
        debug_assert!(self.is_strict_subset_of(parent) && self.min_pos() != parent.min_pos());
        let mut mask = 0u32;
        for q in self.positions() {
            let t = (parent.0 & ((1u32 << (q - 1)) - 1)).count_ones();
            mask |= 1 << (t - 1);
        }
        AdmissibleSubset(mask)
    }
}

impl Ord for AdmissibleSubset {
    /// Lexicographic on the sorted position lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.positions().cmp(other.positions())
    }
}

impl PartialOrd for AdmissibleSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Display for AdmissibleSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.positions().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetRelation {
    Disjoint,
    /// One strictly inside the other, different minima.
    Nested,
    /// Intersecting but neither contains the other.
    Overlapping,
    SameMinimum,
}

pub fn relation(a: &AdmissibleSubset, b: &AdmissibleSubset) -> SubsetRelation {
    if a.min_pos() == b.min_pos() {
        SubsetRelation::SameMinimum
    } else if a.is_disjoint(b) {
        SubsetRelation::Disjoint
    } else if a.is_strict_subset_of(b) || b.is_strict_subset_of(a) {
        SubsetRelation::Nested
    } else {
        SubsetRelation::Overlapping
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extraction {
    Empty,
    Total,
    /// Nonempty, sorted by minimum.
    Proper(Vec<AdmissibleSubset>),
}

impl Extraction {
    pub fn subsets(&self) -> &[AdmissibleSubset] {
        match self {
            Extraction::Proper(v) => v,
            _ => &[],
        }
    }

    pub fn is_disjoint_family(&self) -> bool {
        let s = self.subsets();
        s.iter().enumerate().all(|(i, a)| s[i + 1..].iter().all(|b| a.is_disjoint(b)))
    }
}

fn extraction_key(e: &Extraction) -> (u8, Vec<usize>, Vec<AdmissibleSubset>) {
    match e {
        Extraction::Empty => (0, Vec::new(), Vec::new()),
        Extraction::Proper(v) => (1, v.iter().map(|s| s.min_pos()).collect(), v.clone()),
        Extraction::Total => (2, Vec::new(), Vec::new()),
    }
}

fn extraction_order(a: &Extraction, b: &Extraction) -> Ordering {
    extraction_key(a).cmp(&extraction_key(b))
}

impl Display for Extraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extraction::Empty => write!(f, "empty"),
            Extraction::Total => write!(f, "total"),
            Extraction::Proper(v) => {
                write!(f, "{{")?;
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Containment hierarchy of a general extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestingForest {
    pub root: u8,
    pub children: Vec<NestingNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestingNode {
    pub subset: AdmissibleSubset,
    pub children: Vec<NestingNode>,
}

impl NestingForest {
    /// Total number of subset nodes.
    pub fn node_count(&self) -> usize {
        fn count(n: &NestingNode) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        self.children.iter().map(count).sum()
    }
}

/// Builds the hierarchy: a node's parent is the smallest subset that
/// strictly contains it.
pub fn build_nesting_forest(c: &Rct, subsets: &[AdmissibleSubset]) -> Result<NestingForest> {
    for s in subsets {
        if !c.is_admissible(s) {
            return Err(Error::NotAdmissible(s.to_string()));
        }
    }
    for (i, a) in subsets.iter().enumerate() {
        for b in &subsets[i + 1..] {
            if !a.compatible(b) {
                return Err(Error::InvalidExtraction(format!("{a} and {b} are {:?}", relation(a, b))));
            }
        }
    }
    Ok(nesting_forest_unchecked(c.root(), subsets))
}

pub(crate) fn nesting_forest_unchecked(root: u8, subsets: &[AdmissibleSubset]) -> NestingForest {
    let parent: Vec<Option<usize>> = subsets
        .iter()
        .map(|s| {
            subsets
                .iter()
                .enumerate()
                .filter(|(_, t)| s.is_strict_subset_of(t))
                .min_by_key(|(_, t)| t.len())
                .map(|(i, _)| i)
        })
        .collect();
    fn build(idx: usize, subsets: &[AdmissibleSubset], parent: &[Option<usize>]) -> NestingNode {
        NestingNode {
            subset: subsets[idx],
            children: (0..subsets.len())
                .filter(|&j| parent[j] == Some(idx))
                .map(|j| build(j, subsets, parent))
                .collect(),
        }
    }
    NestingForest {
        root,
        children: (0..subsets.len()).filter(|&j| parent[j].is_none()).map(|j| build(j, subsets, &parent)).collect(),
    }
}

impl Display for NestingForest {
    /// Grafting notation: `B[i](B[{1}](1),B[{2}](1))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn node(n: &NestingNode, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "B[{}](", n.subset)?;
            children(&n.children, f)?;
            write!(f, ")")
        }
        fn children(c: &[NestingNode], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if c.is_empty() {
                return write!(f, "1");
            }
            for (i, n) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                node(n, f)?;
            }
            Ok(())
        }
        write!(f, "B[{}](", self.root)?;
        children(&self.children, f)?;
        write!(f, ")")
    }
}
