//! Permutations of `{1..n}` with left-to-right composition.
//!
//! All public interfaces are 1-based. Internally images are stored 0-based
//! as `u32` so that the stabilizer-chain and search code can work on raw
//! slices.

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("point {point} appears more than once")]
    RepeatedPoint { point: usize },
    #[error("point {point} outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("malformed cycle notation at byte {offset}: {reason}")]
    Malformed { offset: usize, reason: &'static str },
    #[error("generators do not act transitively")]
    Intransitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(count: usize) -> Self {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Multiset of nontrivial cycle lengths plus the number of fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    /// Lengths >= 2, sorted descending.
    pub lengths: Vec<usize>,
    pub fixed_count: usize,
}

impl CycleType {
    pub fn degree(&self) -> usize {
        self.lengths.iter().sum::<usize>() + self.fixed_count
    }

    /// Number of cycles of exactly `len` (fixed points when `len == 1`).
    pub fn count(&self, len: usize) -> usize {
        if len == 1 {
            self.fixed_count
        } else {
            self.lengths.iter().filter(|&&l| l == len).count()
        }
    }
}

/// A bijection of `{1..n}`, stored as an image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// The identity on `n >= 1` points.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation degree must be at least 1");
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from its 1-based image table.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        let mut raw = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n {
                return Err(PermError::PointOutOfRange { point: img, degree: n });
            }
            if std::mem::replace(&mut seen[img - 1], true) {
                return Err(PermError::RepeatedPoint { point: img });
            }
            raw.push((img - 1) as u32);
        }
        Ok(Permutation { images: raw })
    }

    /// Builds a permutation of degree `n` from disjoint cycles (1-based points).
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(PermError::PointOutOfRange { point: p, degree: n });
                }
                if std::mem::replace(&mut seen[p - 1], true) {
                    return Err(PermError::RepeatedPoint { point: p });
                }
            }
            for (k, &p) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Wraps a 0-based image table that the caller guarantees is a bijection.
    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!(is_bijection(&images));
        Permutation { images }
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 1-based image table.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// "Apply `self`, then `other`": `result(i) = other(self(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Same as [`compose`](Self::compose) but panics on a degree mismatch.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in composition");
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self^k`, computed cycle by cycle.
    pub fn pow(&self, k: u64) -> Permutation {
        let n = self.images.len();
        let mut out = vec![0u32; n];
        let mut seen = vec![false; n];
        let mut cycle = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycle.clear();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            let len = cycle.len();
            let shift = (k % len as u64) as usize;
            for (idx, &p) in cycle.iter().enumerate() {
                out[p as usize] = cycle[(idx + shift) % len];
            }
        }
        Permutation { images: out }
    }

    /// Disjoint cycles in canonical form: each cycle starts at its minimum,
    /// cycles are ordered by first point, fixed points are omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Lengths of all cycles including fixed points, in order of first point.
    pub(crate) fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            out.push(len);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut lengths = Vec::new();
        let mut fixed_count = 0;
        for len in self.cycle_lengths() {
            if len == 1 {
                fixed_count += 1;
            } else {
                lengths.push(len);
            }
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { lengths, fixed_count }
    }

    /// Least `k >= 1` with `self^k = 1`, the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, len| acc.lcm(&(len as u64)))
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycle_lengths().iter().map(|l| l - 1).sum();
        Parity::from_count(transpositions)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i as u32 == x)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// The cycle of `self` through the 1-based point `i`, starting at `i`.
    pub fn cycle_of(&self, i: usize) -> Vec<usize> {
        let mut cycle = vec![i];
        let mut x = self.apply(i);
        while x != i {
            cycle.push(x);
            x = self.apply(x);
        }
        cycle
    }
}

fn is_bijection(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    images
        .iter()
        .all(|&x| (x as usize) < seen.len() && !std::mem::replace(&mut seen[x as usize], true))
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Canonical cycle text, e.g. `(1 2 3)(4 5)`; the identity is `()`.
pub fn format_cycles(p: &Permutation) -> String {
    p.to_string()
}

/// Parses disjoint cycle notation such as `"(1 2 3 4)(5 6)"` on `n` points.
///
/// Whitespace and commas between points are accepted. The empty string and
/// `"()"` both denote the identity.
pub fn parse_cycles(text: &str, n: usize) -> Result<Permutation, PermError> {
    if n == 0 {
        return Err(PermError::ZeroDegree);
    }
    let bytes = text.as_bytes();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        match c {
            b'(' => {
                if current.is_some() {
                    return Err(PermError::Malformed {
                        offset: pos,
                        reason: "nested '('",
                    });
                }
                current = Some(Vec::new());
                pos += 1;
            }
            b')' => match current.take() {
                Some(cycle) => {
                    // 1-cycles are accepted and still checked for range and repeats
                    if !cycle.is_empty() {
                        cycles.push(cycle);
                    }
                    pos += 1;
                }
                None => {
                    return Err(PermError::Malformed {
                        offset: pos,
                        reason: "unmatched ')'",
                    })
                }
            },
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let value: usize = text[start..pos].parse().map_err(|_| PermError::Malformed {
                    offset: start,
                    reason: "point too large",
                })?;
                match current.as_mut() {
                    Some(cycle) => cycle.push(value),
                    None => {
                        return Err(PermError::Malformed {
                            offset: start,
                            reason: "point outside parentheses",
                        })
                    }
                }
            }
            b',' if current.is_some() => pos += 1,
            c if c.is_ascii_whitespace() => pos += 1,
            _ => {
                return Err(PermError::Malformed {
                    offset: pos,
                    reason: "unexpected character",
                })
            }
        }
    }
    if current.is_some() {
        return Err(PermError::Malformed {
            offset: bytes.len(),
            reason: "unclosed '('",
        });
    }
    Permutation::from_cycles(n, &cycles)
}

/// Orbit of the 1-based point `start` under the group generated by `gens`.
pub fn orbit(degree: usize, gens: &[Permutation], start: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[start - 1] = true;
    let mut queue = vec![start - 1];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for g in gens {
            let y = g.images[x] as usize;
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    queue.into_iter().map(|x| x + 1).collect()
}

/// True iff the orbit of point 1 is all of `{1..degree}`.
pub fn is_transitive(degree: usize, gens: &[Permutation]) -> bool {
    if degree <= 1 {
        return true;
    }
    orbit(degree, gens, 1).len() == degree
}

/// A nontrivial system of imprimitivity, or `None` when the group is primitive.
///
/// For each `j` the finest invariant partition joining 1 and `j` is computed
/// by union-find closure; the first one that is not the whole set is returned.
pub fn find_block_system(degree: usize, gens: &[Permutation]) -> Result<Option<Vec<Vec<usize>>>, PermError> {
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    if !is_transitive(degree, gens) {
        return Err(PermError::Intransitive);
    }
    for j in 1..degree {
        if let Some(blocks) = minimal_block_partition(degree, gens, 0, j) {
            return Ok(Some(blocks));
        }
    }
    Ok(None)
}

fn minimal_block_partition(degree: usize, gens: &[Permutation], a: usize, b: usize) -> Option<Vec<Vec<usize>>> {
    let mut parent: Vec<usize> = (0..degree).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut pending = vec![(a, b)];
    parent[b] = a;
    let mut classes = degree - 1;
    while let Some((x, y)) = pending.pop() {
        for g in gens {
            let gx = g.images[x] as usize;
            let gy = g.images[y] as usize;
            let rx = find(&mut parent, gx);
            let ry = find(&mut parent, gy);
            if rx != ry {
                parent[ry] = rx;
                classes -= 1;
                pending.push((gx, gy));
            }
        }
        if classes == 1 {
            return None;
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..degree {
        let r = find(&mut parent, x);
        by_root.entry(r).or_default().push(x + 1);
    }
    let mut blocks: Vec<Vec<usize>> = by_root.into_values().collect();
    blocks.sort();
    Some(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    #[test]
    fn identity_basics() {
        assert_eq!(Permutation::identity(3).images(), vec![1, 2, 3]);
        assert_eq!(Permutation::identity(5).order(), 1);
        assert_eq!(Permutation::identity(1).to_string(), "()");
        assert!(Permutation::identity(1).is_identity());
    }

    #[test]
    fn compose_is_left_to_right() {
        // (1 2) then (2 3): 1->2->3, 2->1->1, 3->3->2
        let c = p("(1 2)", 3).compose(&p("(2 3)", 3)).unwrap();
        assert_eq!(c.images(), vec![3, 1, 2]);
        assert_eq!(c, p("(1 3 2)", 3));
    }

    #[test]
    fn compose_rejects_mismatch() {
        let err = Permutation::identity(3).compose(&Permutation::identity(4)).unwrap_err();
        assert_eq!(err, PermError::DegreeMismatch { left: 3, right: 4 });
    }

    #[test]
    fn inverse_and_order() {
        assert_eq!(p("(1 2 3)", 3).inverse(), p("(1 3 2)", 3));
        assert_eq!(Permutation::identity(7).inverse(), Permutation::identity(7));
        assert_eq!(p("(1 2 3)(4 5)", 5).order(), 6);
    }

    #[test]
    fn parity_counts_transpositions() {
        assert_eq!(p("(1 2)", 2).parity(), Parity::Odd);
        assert_eq!(Permutation::identity(4).parity(), Parity::Even);
        assert_eq!(p("(1 2 3 4)", 4).parity(), Parity::Odd);
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_cycles("(1 1)", 3), Err(PermError::RepeatedPoint { point: 1 }));
        assert_eq!(
            parse_cycles("(1 4)", 3),
            Err(PermError::PointOutOfRange { point: 4, degree: 3 })
        );
        assert!(matches!(parse_cycles("(1 2", 3), Err(PermError::Malformed { .. })));
        assert!(matches!(parse_cycles("1 2)", 3), Err(PermError::Malformed { .. })));
        assert!(matches!(parse_cycles("((1 2))", 3), Err(PermError::Malformed { .. })));
        assert!(matches!(parse_cycles("(1 x)", 3), Err(PermError::Malformed { .. })));
        assert_eq!(parse_cycles("", 4).unwrap(), Permutation::identity(4));
        assert_eq!(parse_cycles("()", 4).unwrap(), Permutation::identity(4));
        assert_eq!(parse_cycles(" ( 1  2 ) (3 4)\n", 5).unwrap(), p("(1 2)(3 4)", 5));
    }

    #[test]
    fn parse_swaps_and_fixes() {
        let q = p("(1 2)(3 4)", 5);
        assert_eq!(q.images(), vec![2, 1, 4, 3, 5]);
        assert_eq!(q.fixed_points(), vec![5]);
    }

    #[test]
    fn canonical_cycles() {
        let q = p("(4 3 2)(9 8)", 9);
        assert_eq!(q.to_string(), "(2 4 3)(8 9)");
        assert_eq!(
            q.cycle_type(),
            CycleType {
                lengths: vec![3, 2],
                fixed_count: 4
            }
        );
    }

    #[test]
    fn transitivity() {
        assert!(is_transitive(3, &[p("(1 2)", 3), p("(1 2 3)", 3)]));
        assert!(!is_transitive(3, &[p("(1 2)", 3)]));
        assert!(!is_transitive(2, &[]));
        assert!(is_transitive(1, &[]));
    }

    #[test]
    fn block_systems() {
        let blocks = find_block_system(4, &[p("(1 2 3 4)", 4)]).unwrap().unwrap();
        assert_eq!(blocks, vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(find_block_system(3, &[p("(1 2)", 3), p("(1 2 3)", 3)]).unwrap(), None);
        assert_eq!(find_block_system(3, &[p("(1 2)", 3)]), Err(PermError::Intransitive));
    }

    #[test]
    fn pow_matches_iteration() {
        let q = p("(1 2 3 4 5)(6 7)", 7);
        let mut acc = Permutation::identity(7);
        for k in 0..12u64 {
            assert_eq!(q.pow(k), acc);
            acc = acc.then(&q);
        }
    }
}
