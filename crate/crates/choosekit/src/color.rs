//! Color sets, list assignments and multicolorings.
//!
//! Colors are integers `1..=32` packed into a `u32` bitmask, which keeps set
//! algebra branch-free and makes canonical forms cheap to compare. All public
//! formatting is deterministic: colors print in increasing order.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;

pub const MAX_COLOR: u8 = 32;

/// A set of colors drawn from `1..=32`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorSet(pub u32);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn single(c: u8) -> Self {
        debug_assert!((1..=MAX_COLOR).contains(&c));
        ColorSet(1 << (c - 1))
    }

    pub fn from_colors<I: IntoIterator<Item = u8>>(colors: I) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in colors {
            s = s.with(c);
        }
        s
    }

    /// `{1, 2, ..., k}`.
    pub fn first(k: u8) -> Self {
        debug_assert!(k <= MAX_COLOR);
        if k == 0 {
            ColorSet::EMPTY
        } else {
            ColorSet(u32::MAX >> (32 - k))
        }
    }

    pub fn with(self, c: u8) -> Self {
        debug_assert!((1..=MAX_COLOR).contains(&c));
        ColorSet(self.0 | (1 << (c - 1)))
    }

    pub fn without(self, c: u8) -> Self {
        ColorSet(self.0 & !(1 << (c - 1)))
    }

    pub fn contains(self, c: u8) -> bool {
        c >= 1 && c <= MAX_COLOR && self.0 & (1 << (c - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ColorSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        ColorSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min_color(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as u8 + 1)
        }
    }

    pub fn max_color(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(32 - self.0.leading_zeros() as u8)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros() as u8 + 1;
                bits &= bits - 1;
                Some(c)
            }
        })
    }

    pub fn colors(self) -> Vec<u8> {
        self.iter().collect()
    }

    /// All subsets of `self` with exactly `k` colors, in increasing mask order.
    pub fn subsets(self, k: usize) -> Vec<ColorSet> {
        let colors: Vec<u8> = self.colors();
        if k > colors.len() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(ColorSet::from_colors(idx.iter().map(|&i| colors[i])));
            // next combination
            let mut i = k;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                if idx[i] != i + colors.len() - k {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Apply a color permutation.
    pub fn permuted(self, perm: &ColorPerm) -> ColorSet {
        ColorSet::from_colors(self.iter().map(|c| perm.apply(c)))
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.max_color().unwrap_or(0) <= 9 {
            for c in self.iter() {
                write!(f, "{}", c)?;
            }
            if self.is_empty() {
                write!(f, "{{}}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.iter().map(|c| c.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

/// Parse "134" (digits, colors <= 9) or "{1,3,14}".
pub fn parse_color_set(s: &str) -> Result<ColorSet, Error> {
    let s = s.trim();
    let mut set = ColorSet::EMPTY;
    let push = |set: &mut ColorSet, c: u32| -> Result<(), Error> {
        if !(1..=MAX_COLOR as u32).contains(&c) {
            return Err(Error::Parse(format!("color {} out of range 1..=32", c)));
        }
        *set = set.with(c as u8);
        Ok(())
    };
    if let Some(inner) = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        for tok in inner.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let c: u32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad color token '{}'", tok)))?;
            push(&mut set, c)?;
        }
    } else {
        for ch in s.chars() {
            let c = ch
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("bad color digit '{}'", ch)))?;
            push(&mut set, c)?;
        }
    }
    Ok(set)
}

/// A bijection on a finite set of colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorPerm {
    map: BTreeMap<u8, u8>,
}

impl ColorPerm {
    pub fn identity() -> Self {
        ColorPerm {
            map: BTreeMap::new(),
        }
    }

    /// Build from explicit pairs; must be injective.
    pub fn from_pairs<I: IntoIterator<Item = (u8, u8)>>(pairs: I) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        let mut seen = ColorSet::EMPTY;
        for (a, b) in pairs {
            if !(1..=MAX_COLOR).contains(&a) || !(1..=MAX_COLOR).contains(&b) {
                return Err(Error::Parse(format!("permutation pair {}->{} out of range", a, b)));
            }
            if map.insert(a, b).is_some() {
                return Err(Error::Parse(format!("color {} mapped twice", a)));
            }
            if seen.contains(b) {
                return Err(Error::Parse(format!("color {} is an image twice", b)));
            }
            seen = seen.with(b);
        }
        Ok(ColorPerm { map })
    }

    /// The permutation sending the i-th smallest color of `from` to the i-th
    /// smallest color of `to`. Requires equal sizes.
    pub fn aligning(from: ColorSet, to: ColorSet) -> Result<Self, Error> {
        if from.len() != to.len() {
            return Err(Error::Parse(format!(
                "cannot align {} with {}: different sizes",
                from, to
            )));
        }
        Self::from_pairs(from.iter().zip(to.iter()))
    }

    pub fn apply(&self, c: u8) -> u8 {
        *self.map.get(&c).unwrap_or(&c)
    }

    /// Check the permutation is a bijection on `domain` (maps it onto itself
    /// or onto an equal-sized image; injectivity holds by construction).
    pub fn is_bijection_on(&self, domain: ColorSet) -> bool {
        let image = ColorSet::from_colors(domain.iter().map(|c| self.apply(c)));
        image.len() == domain.len()
    }
}

/// A list assignment: one color list per vertex, all of the same size.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ListAssignment {
    lists: Vec<ColorSet>,
    size: usize,
}

impl ListAssignment {
    pub fn new(lists: Vec<ColorSet>, size: usize) -> Result<Self, Error> {
        for (v, l) in lists.iter().enumerate() {
            if l.len() != size {
                return Err(Error::BadListAssignment(format!(
                    "list of vertex {} has {} colors, expected {}",
                    v,
                    l.len(),
                    size
                )));
            }
        }
        Ok(ListAssignment { lists, size })
    }

    /// Constant assignment `{1..=a}` on `n` vertices.
    pub fn constant(n: usize, a: u8) -> Self {
        ListAssignment {
            lists: vec![ColorSet::first(a); n],
            size: a as usize,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    pub fn list_size(&self) -> usize {
        self.size
    }

    pub fn get(&self, v: usize) -> ColorSet {
        self.lists[v]
    }

    pub fn lists(&self) -> &[ColorSet] {
        &self.lists
    }

    pub fn set(&mut self, v: usize, l: ColorSet) -> Result<(), Error> {
        if l.len() != self.size {
            return Err(Error::BadListAssignment(format!(
                "list {} has {} colors, expected {}",
                l,
                l.len(),
                self.size
            )));
        }
        self.lists[v] = l;
        Ok(())
    }

    pub fn pot(&self) -> ColorSet {
        self.lists
            .iter()
            .fold(ColorSet::EMPTY, |acc, &l| acc.union(l))
    }

    pub fn relabeled(&self, perm: &ColorPerm) -> Result<Self, Error> {
        if !perm.is_bijection_on(self.pot()) {
            return Err(Error::BadListAssignment(
                "color permutation is not a bijection on the pot".into(),
            ));
        }
        Ok(ListAssignment {
            lists: self.lists.iter().map(|l| l.permuted(perm)).collect(),
            size: self.size,
        })
    }
}

impl fmt::Debug for ListAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lists
            .iter()
            .enumerate()
            .map(|(v, l)| format!("{}:{}", v, l))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A b-fold coloring: a set of exactly `b` colors per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiColoring {
    pub sets: Vec<ColorSet>,
    pub fold: usize,
}

impl MultiColoring {
    pub fn get(&self, v: usize) -> ColorSet {
        self.sets[v]
    }
}

/// Parse the line-oriented list format: one `v: c1 c2 c3 c4` line per vertex,
/// `#` comments. Vertex keys are resolved through `resolve` so callers can map
/// names from a parsed graph.
pub fn parse_lists_text(
    text: &str,
    vertex_count: usize,
    mut resolve: impl FnMut(&str) -> Option<usize>,
) -> Result<ListAssignment, Error> {
    let mut lists: Vec<Option<ColorSet>> = vec![None; vertex_count];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| {
            Error::Parse(format!("line {}: expected 'vertex: colors'", lineno + 1))
        })?;
        let v = resolve(key.trim()).ok_or_else(|| {
            Error::Parse(format!("line {}: unknown vertex '{}'", lineno + 1, key.trim()))
        })?;
        let mut set = ColorSet::EMPTY;
        for tok in rest.split_whitespace() {
            let c: u32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad color '{}'", lineno + 1, tok)))?;
            if !(1..=MAX_COLOR as u32).contains(&c) {
                return Err(Error::Parse(format!(
                    "line {}: color {} out of range 1..=32",
                    lineno + 1,
                    c
                )));
            }
            if set.contains(c as u8) {
                return Err(Error::Parse(format!(
                    "line {}: duplicate color {}",
                    lineno + 1,
                    c
                )));
            }
            set = set.with(c as u8);
        }
        if lists[v].is_some() {
            return Err(Error::Parse(format!(
                "line {}: vertex '{}' listed twice",
                lineno + 1,
                key.trim()
            )));
        }
        lists[v] = Some(set);
    }
    let mut out = Vec::with_capacity(vertex_count);
    let mut size = None;
    for (v, l) in lists.into_iter().enumerate() {
        let l = l.ok_or_else(|| Error::Parse(format!("vertex {} has no list", v)))?;
        match size {
            None => size = Some(l.len()),
            Some(s) if s != l.len() => {
                return Err(Error::Parse(format!(
                    "vertex {} has {} colors but earlier lists have {}",
                    v,
                    l.len(),
                    s
                )))
            }
            _ => {}
        }
        out.push(l);
    }
    ListAssignment::new(out, size.unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_basics() {
        let s = ColorSet::from_colors([1, 3, 4]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(1) && s.contains(3) && s.contains(4));
        assert!(!s.contains(2));
        assert_eq!(s.colors(), vec![1, 3, 4]);
        assert_eq!(format!("{}", s), "134");
        assert_eq!(ColorSet::first(4), ColorSet::from_colors([1, 2, 3, 4]));
        assert_eq!(format!("{}", ColorSet::from_colors([2, 14])), "{2,14}");
    }

    #[test]
    fn subsets_of_size_two() {
        let s = ColorSet::from_colors([1, 2, 3, 4]);
        let subs = s.subsets(2);
        assert_eq!(subs.len(), 6);
        assert!(subs.contains(&ColorSet::from_colors([1, 4])));
        // sorted and unique
        let mut sorted = subs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, subs);
    }

    #[test]
    fn parse_set_forms() {
        assert_eq!(
            parse_color_set("134").unwrap(),
            ColorSet::from_colors([1, 3, 4])
        );
        assert_eq!(
            parse_color_set("{2,14}").unwrap(),
            ColorSet::from_colors([2, 14])
        );
        assert!(parse_color_set("0").is_err());
    }

    #[test]
    fn permutation_roundtrip() {
        let p = ColorPerm::from_pairs([(1, 3), (2, 1), (3, 4), (4, 2)]).unwrap();
        let s = ColorSet::from_colors([1, 2]);
        assert_eq!(s.permuted(&p), ColorSet::from_colors([3, 1]));
        assert!(p.is_bijection_on(ColorSet::first(4)));
    }

    #[test]
    fn list_text_roundtrip() {
        let text = "0: 1 2 3 4\n1: 1 2 3 5 # comment\n";
        let l = parse_lists_text(text, 2, |s| s.parse().ok()).unwrap();
        assert_eq!(l.get(1), ColorSet::from_colors([1, 2, 3, 5]));
        assert_eq!(l.pot(), ColorSet::from_colors([1, 2, 3, 4, 5]));
    }
}
