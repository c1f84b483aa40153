//! Words in `σ, τ`, the seven-condition report, Jordan witnesses and the
//! lift of a generating pair of `Σ_n` to a generating pair of `B_n`.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::perm::{is_transitive, Parity, Permutation};
use crate::signed::{SignBlock, SignedElement};

pub use crate::construct::{construct_246_pair, ConstructError, ConstructOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    T,
}

/// A nonempty word such as `s^3 t s t`, with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupWord {
    items: Vec<(Letter, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word")]
    Empty,
    #[error("unknown token {0:?} at byte {1}")]
    UnknownToken(char, usize),
    #[error("exponent must be at least 1 (byte {0})")]
    BadExponent(usize),
}

impl GroupWord {
    pub fn new(items: Vec<(Letter, u32)>) -> Result<Self, WordError> {
        if items.is_empty() {
            return Err(WordError::Empty);
        }
        if items.iter().any(|&(_, e)| e == 0) {
            return Err(WordError::BadExponent(0));
        }
        Ok(GroupWord { items })
    }

    pub fn items(&self) -> &[(Letter, u32)] {
        &self.items
    }

    /// Concatenation `self·other`.
    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut items = self.items.clone();
        items.extend_from_slice(&other.items);
        GroupWord { items }
    }

    /// Parses `word := item+ ; item := ("s"|"t") ("^" int)?`, whitespace optional.
    pub fn parse(text: &str) -> Result<GroupWord, WordError> {
        let bytes = text.as_bytes();
        let mut items = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let c = bytes[pos] as char;
            let letter = match c {
                's' | 'S' => Letter::S,
                't' | 'T' => Letter::T,
                c if c.is_ascii_whitespace() => {
                    pos += 1;
                    continue;
                }
                other => return Err(WordError::UnknownToken(other, pos)),
            };
            pos += 1;
            let mut exponent = 1u32;
            if pos < bytes.len() && bytes[pos] == b'^' {
                let start = pos;
                pos += 1;
                let digits = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                exponent = text[digits..pos].parse().map_err(|_| WordError::BadExponent(start))?;
                if exponent == 0 {
                    return Err(WordError::BadExponent(start));
                }
            }
            items.push((letter, exponent));
        }
        if items.is_empty() {
            return Err(WordError::Empty);
        }
        Ok(GroupWord { items })
    }

    /// Substitutes `S → σ`, `T → τ` and multiplies left to right.
    pub fn evaluate(&self, sigma: &Permutation, tau: &Permutation) -> Permutation {
        let mut acc = Permutation::identity(sigma.degree());
        for &(letter, e) in &self.items {
            let g = match letter {
                Letter::S => sigma,
                Letter::T => tau,
            };
            acc = acc.then(&g.pow(e as u64));
        }
        acc
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &(letter, e)) in self.items.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(match letter {
                Letter::S => "s",
                Letter::T => "t",
            })?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn evaluate_word(w: &GroupWord, sigma: &Permutation, tau: &Permutation) -> Permutation {
    w.evaluate(sigma, tau)
}

pub fn parse_word(text: &str) -> Result<GroupWord, WordError> {
    GroupWord::parse(text)
}

/// A word whose power is a single `p`-cycle anchored on a `σ`-step and a `τ`-step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanWitness {
    pub word: GroupWord,
    pub power: u64,
    pub prime: u64,
    /// The permuted points, 1-based, starting at the smallest.
    pub cycle: Vec<usize>,
    pub anchor_a: usize,
    pub anchor_b: usize,
}

/// Budget for the witness search: words `S^{a_1} T … S^{a_k} T` (and their
/// `T`-first conjugates) with `k <= max_syllables` and `a_i <= max_exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessBudget {
    pub max_syllables: usize,
    pub max_exponent: u32,
    pub max_words: usize,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget {
            max_syllables: 12,
            max_exponent: 3,
            max_words: 200_000,
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// If some power of `w` is a single prime cycle of length `< degree - 2`
/// whose support carries an anchored `σ`-step and `τ`-step, returns
/// `(power, prime, cycle, anchor_a, anchor_b)`.
fn prime_cycle_power(
    w: &Permutation,
    sigma: &Permutation,
    tau: &Permutation,
) -> Option<(u64, u64, Vec<usize>, usize, usize)> {
    let n = w.degree();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n + 1];
    for start in 1..=n {
        if !seen[start] {
            let c = w.cycle_of(start);
            for &x in &c {
                seen[x] = true;
            }
            cycles.push(c);
        }
    }
    for (idx, c) in cycles.iter().enumerate() {
        let p = c.len() as u64;
        if p + 2 >= n as u64 || !is_prime(p) {
            continue;
        }
        if cycles
            .iter()
            .enumerate()
            .any(|(k, other)| k != idx && (other.len() as u64).is_multiple_of(p))
        {
            continue;
        }
        let mut in_cycle = vec![false; n + 1];
        for &x in c {
            in_cycle[x] = true;
        }
        let anchor = |g: &Permutation| -> Option<usize> {
            let mut sorted = c.clone();
            sorted.sort_unstable();
            sorted
                .iter()
                .copied()
                .find(|&a| g.apply(a) != a && in_cycle[g.apply(a)])
                .or_else(|| sorted.iter().copied().find(|&a| g.apply(a) == a))
        };
        let (Some(a), Some(b)) = (anchor(sigma), anchor(tau)) else {
            continue;
        };
        let power = cycles
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .fold(1u64, |acc, (_, other)| acc.lcm(&(other.len() as u64)));
        let cycle = w.pow(power).cycles().into_iter().next()?;
        return Some((power, p, cycle, a, b));
    }
    None
}

/// A row of the `p`-cycle table for `n = base + 12m`: the listed word has a
/// power that is a `prime`-cycle whenever `m mod modulus` avoids `excluded`
/// and `m >= min_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HintRow {
    pub base: u32,
    pub modulus: u32,
    pub excluded: &'static [u32],
    pub min_m: u32,
    pub word: &'static str,
    pub prime: u32,
}

const fn row(base: u32, modulus: u32, excluded: &'static [u32], min_m: u32, word: &'static str) -> HintRow {
    HintRow {
        base,
        modulus,
        excluded,
        min_m,
        word,
        prime: modulus,
    }
}

/// Words known to give prime cycles on the large recursive diagrams. They are
/// tried first by the witness search and are always re-verified.
pub const WITNESS_HINTS: [HintRow; 24] = [
    row(41, 13, &[0], 0, "s t s t s"),
    row(41, 13, &[8, 9], 0, "s^3 t s t s t s^2 t"),
    row(42, 7, &[1], 0, "s t s^3 t"),
    row(42, 7, &[2, 4], 0, "s^3 t s t s^2 t s t s^2 t s^3 t s^2"),
    row(43, 7, &[4], 0, "t s t s^3"),
    row(43, 7, &[2, 3], 0, "t s^2 t s t s t s^2 t s t s^2 t s t"),
    row(44, 13, &[1], 0, "t s t s^3 t s t s^3 t s"),
    row(44, 13, &[9], 1, "s^2 t s^2 t s t s^3 t s t s t s^3"),
    row(45, 7, &[5, 6], 0, "s^2 t s^2 t s"),
    row(45, 7, &[1, 3], 0, "t s^3 t s t s t s^3 t s^2"),
    row(46, 7, &[0], 0, "t s^3 t s^2 t s t s^2 t s^3 t s^2 t s t s^3 t s t"),
    row(46, 7, &[1, 5], 0, "t s^2 t s^3 t s t s t s^3 t s"),
    row(47, 7, &[5, 6], 0, "s^2 t s t s t s^3 t"),
    row(47, 7, &[1, 3], 0, "s t s^2 t s t s t s^2 t s^3 t"),
    row(48, 13, &[1], 0, "s t s t s"),
    row(48, 13, &[11], 1, "s t s t s^2 t s^3 t"),
    row(49, 7, &[5, 6], 0, "s^2 t s t s t s^3 t"),
    row(49, 7, &[1, 3], 0, "s^2 t s t s^3 t s t s^3 t s t s^2 t s"),
    row(50, 7, &[4], 0, "t s t s t s^2 t s^2 t s t s t"),
    row(50, 7, &[6], 2, "s^2 t s t s^3 t s t s^2 t s^3 t s^3"),
    row(51, 7, &[6], 0, "s^3 t s^2 t s t s t s^2 t s^2 t"),
    row(51, 7, &[3], 0, "s t s^2 t s t s^2 t s t s^3 t s t s^3"),
    row(52, 11, &[6], 0, "t s^2 t s t s^2 t s^3"),
    row(52, 11, &[10], 1, "s^2 t s^2 t s t s t s^2"),
];

impl HintRow {
    /// Whether the row's congruence conditions hold for degree `n`.
    pub fn applies_to(&self, n: usize) -> bool {
        let n = n as u32;
        if n < self.base || !(n - self.base).is_multiple_of(12) {
            return false;
        }
        let m = (n - self.base) / 12;
        m >= self.min_m && !self.excluded.contains(&(m % self.modulus))
    }
}

/// Searches words in `σ, τ` for a Jordan witness within `budget`.
pub fn find_jordan_witness(sigma: &Permutation, tau: &Permutation, budget: WitnessBudget) -> Option<JordanWitness> {
    let n = sigma.degree();
    let mut tried = 0usize;
    let s_pows: Vec<Permutation> = (0..=budget.max_exponent).map(|e| sigma.pow(e as u64)).collect();

    let check = |items: &[(Letter, u32)], w: &Permutation| -> Option<JordanWitness> {
        let (power, prime, cycle, anchor_a, anchor_b) = prime_cycle_power(w, sigma, tau)?;
        Some(JordanWitness {
            word: GroupWord { items: items.to_vec() },
            power,
            prime,
            cycle,
            anchor_a,
            anchor_b,
        })
    };

    for row in &WITNESS_HINTS {
        let word = GroupWord::parse(row.word).expect("hint words parse");
        if let Some(w) = check(&word.items, &word.evaluate(sigma, tau)) {
            return Some(w);
        }
    }
    tried += WITNESS_HINTS.len();

    // single letters first
    for e in 1..=budget.max_exponent {
        if let Some(w) = check(&[(Letter::S, e)], &s_pows[e as usize]) {
            return Some(w);
        }
    }
    if let Some(w) = check(&[(Letter::T, 1)], tau) {
        return Some(w);
    }

    // breadth-first over syllable count, prefix products reused level by level
    let mut frontier: Vec<(Vec<u32>, Permutation)> = vec![(Vec::new(), Permutation::identity(n))];
    for _k in 1..=budget.max_syllables {
        let mut next = Vec::with_capacity(frontier.len() * budget.max_exponent as usize);
        for (exps, prefix) in &frontier {
            for e in 1..=budget.max_exponent {
                let word = prefix.then(&s_pows[e as usize]).then(tau);
                let mut ex = exps.clone();
                ex.push(e);
                let items: Vec<(Letter, u32)> = ex.iter().flat_map(|&a| [(Letter::S, a), (Letter::T, 1)]).collect();
                if let Some(w) = check(&items, &word) {
                    return Some(w);
                }
                let conj = tau.then(&word).then(tau);
                let mut t_first = vec![(Letter::T, 1)];
                t_first.extend_from_slice(&items[..items.len() - 1]);
                if let Some(w) = check(&t_first, &conj) {
                    return Some(w);
                }
                tried += 2;
                if tried >= budget.max_words {
                    return None;
                }
                next.push((ex, word));
            }
        }
        frontier = next;
    }
    None
}

/// Re-checks every witness invariant from scratch, plus transitivity of `⟨σ, τ⟩`.
pub fn verify_jordan(sigma: &Permutation, tau: &Permutation, w: &JordanWitness) -> bool {
    let n = sigma.degree();
    if tau.degree() != n || w.power == 0 {
        return false;
    }
    if !is_prime(w.prime) || w.prime + 2 >= n as u64 || w.cycle.len() as u64 != w.prime {
        return false;
    }
    if w.cycle.iter().any(|&x| x == 0 || x > n) {
        return false;
    }
    let z = w.word.evaluate(sigma, tau).pow(w.power);
    let cycles = z.cycles();
    if cycles.len() != 1 {
        return false;
    }
    let mut got = cycles[0].clone();
    let mut want = w.cycle.clone();
    got.sort_unstable();
    want.sort_unstable();
    if got != want {
        return false;
    }
    let inside = |x: usize| want.binary_search(&x).is_ok();
    if !inside(w.anchor_a) || !inside(sigma.apply(w.anchor_a)) {
        return false;
    }
    if !inside(w.anchor_b) || !inside(tau.apply(w.anchor_b)) {
        return false;
    }
    is_transitive(n, &[sigma.clone(), tau.clone()])
}

/// The seven requirements on `(σ, τ)` before lifting, evaluated independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    /// σ has order 4 and τ has order 2.
    pub orders: bool,
    /// σ fixes a point i.
    pub sigma_fixes_point: bool,
    /// τ fixes at least three points.
    pub tau_fixes_three: bool,
    /// σ·τ is an odd permutation.
    pub product_odd: bool,
    /// some τ-fixed j lies in the σ·τ cycle of a σ-fixed i.
    pub shared_cycle: bool,
    /// ⟨σ, τ⟩ is transitive.
    pub transitive: bool,
    /// an anchored prime cycle was found.
    pub prime_cycle: bool,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub witness: Option<JordanWitness>,
}

impl ConditionReport {
    pub fn flags(&self) -> [bool; 7] {
        [
            self.orders,
            self.sigma_fixes_point,
            self.tau_fixes_three,
            self.product_odd,
            self.shared_cycle,
            self.transitive,
            self.prime_cycle,
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.flags().iter().all(|&f| f)
    }

    /// Conditions 1–6, which suffice together with a chain check.
    pub fn structural_pass(&self) -> bool {
        self.flags()[..6].iter().all(|&f| f)
    }
}

/// Smallest σ-fixed `i` that has a τ-fixed `j` in its σ·τ cycle, with the
/// smallest such `j`.
pub fn choose_lift_points(sigma: &Permutation, tau: &Permutation) -> Option<(usize, usize)> {
    let product = sigma.then(tau);
    for i in sigma.fixed_points() {
        let mut cycle = product.cycle_of(i);
        cycle.sort_unstable();
        if let Some(&j) = cycle.iter().find(|&&j| j != i && tau.apply(j) == j) {
            return Some((i, j));
        }
    }
    None
}

/// Evaluates conditions 1–6 exactly and searches for a witness for condition 7.
pub fn check_conditions(sigma: &Permutation, tau: &Permutation, budget: WitnessBudget) -> ConditionReport {
    let n = sigma.degree();
    assert_eq!(n, tau.degree(), "σ and τ must have equal degree");
    let sigma_fixed = sigma.fixed_points();
    let product = sigma.then(tau);
    let lift_points = choose_lift_points(sigma, tau);
    let transitive = is_transitive(n, &[sigma.clone(), tau.clone()]);
    let witness = if transitive {
        find_jordan_witness(sigma, tau, budget)
    } else {
        None
    };
    ConditionReport {
        orders: sigma.order() == 4 && tau.order() == 2,
        sigma_fixes_point: !sigma_fixed.is_empty(),
        tau_fixes_three: tau.fixed_points().len() >= 3,
        product_odd: product.parity() == Parity::Odd,
        shared_cycle: lift_points.is_some(),
        transitive,
        prime_cycle: witness.is_some(),
        i: lift_points.map(|(i, _)| i).or_else(|| sigma_fixed.first().copied()),
        j: lift_points.map(|(_, j)| j),
        witness,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("σ and τ have different degrees")]
    DegreeMismatch,
    #[error("σ does not fix i = {0}")]
    SigmaMovesI(usize),
    #[error("τ does not fix j = {0}")]
    TauMovesJ(usize),
    #[error("i = {i} and j = {j} lie in different cycles of σ·τ")]
    DifferentCycles { i: usize, j: usize },
    #[error("point out of range")]
    OutOfRange,
    #[error("lifted element orders differ from σ, τ, σ·τ")]
    OrderNotPreserved,
}

/// `([σ, e_i], [τ, e_j])`: single sign bits at the σ-fixed `i` and τ-fixed `j`.
pub fn lift_pair(
    sigma: &Permutation,
    tau: &Permutation,
    i: usize,
    j: usize,
) -> Result<(SignedElement, SignedElement), LiftError> {
    let n = sigma.degree();
    if tau.degree() != n {
        return Err(LiftError::DegreeMismatch);
    }
    if i == 0 || j == 0 || i > n || j > n {
        return Err(LiftError::OutOfRange);
    }
    if sigma.apply(i) != i {
        return Err(LiftError::SigmaMovesI(i));
    }
    if tau.apply(j) != j {
        return Err(LiftError::TauMovesJ(j));
    }
    let product = sigma.then(tau);
    if !product.cycle_of(i).contains(&j) {
        return Err(LiftError::DifferentCycles { i, j });
    }
    let x = SignedElement::new(sigma.clone(), SignBlock::singleton(n, i)).expect("degrees agree");
    let y = SignedElement::new(tau.clone(), SignBlock::singleton(n, j)).expect("degrees agree");
    if x.element_order() != sigma.order()
        || y.element_order() != tau.order()
        || x.then(&y).element_order() != product.order()
    {
        return Err(LiftError::OrderNotPreserved);
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn nineteen_point_pair() -> (Permutation, Permutation) {
        (
            parse_cycles("(1 2 3 4)(5 6 7 8)(9 10 11 12)(13 14)(15 16 17 18)", 19).unwrap(),
            parse_cycles("(1 15)(2 5)(3 4)(7 17)(8 9)(12 13)(14 16)(18 19)", 19).unwrap(),
        )
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("s t s t s").unwrap().to_string(), "s t s t s");
        assert_eq!(
            parse_word("s^3 t s t s t s^2 t").unwrap().items(),
            &[
                (Letter::S, 3),
                (Letter::T, 1),
                (Letter::S, 1),
                (Letter::T, 1),
                (Letter::S, 1),
                (Letter::T, 1),
                (Letter::S, 2),
                (Letter::T, 1)
            ]
        );
        assert_eq!(parse_word("sts^2t").unwrap().to_string(), "s t s^2 t");
        assert_eq!(parse_word("x"), Err(WordError::UnknownToken('x', 0)));
        assert!(matches!(parse_word("s^0"), Err(WordError::BadExponent(_))));
        assert_eq!(parse_word("  "), Err(WordError::Empty));
    }

    #[test]
    fn word_evaluation() {
        let (s, t) = nineteen_point_pair();
        assert_eq!(parse_word("s").unwrap().evaluate(&s, &t), s);
        let w = parse_word("s^2 t").unwrap().evaluate(&s, &t);
        let ct = w.cycle_type();
        assert_eq!(ct.lengths, vec![4, 4, 4, 4, 3]);
        assert!(w.cycles().contains(&vec![10, 13, 12]));
        let id = Permutation::identity(6);
        assert!(parse_word("s t s^3 t").unwrap().evaluate(&id, &id).is_identity());
    }

    #[test]
    fn nineteen_point_conditions() {
        let (s, t) = nineteen_point_pair();
        let report = check_conditions(&s, &t, WitnessBudget::default());
        assert!(report.all_pass(), "{report:?}");
        assert_eq!(report.i, Some(19));
        assert_eq!(report.j, Some(6));
        let w = report.witness.unwrap();
        assert!(verify_jordan(&s, &t, &w));
    }

    #[test]
    fn nineteen_point_three_cycle_lacks_sigma_anchor() {
        let (s, t) = nineteen_point_pair();
        let z = parse_word("s^2 t").unwrap().evaluate(&s, &t).pow(4);
        assert_eq!(z.cycles(), vec![vec![10, 13, 12]]);
        // τ swaps 12 and 13 inside the cycle, but σ sends 10, 12, 13 outside it
        assert!([10, 12, 13].iter().all(|&a| ![10, 12, 13].contains(&s.apply(a))));
        let w = JordanWitness {
            word: parse_word("s^2 t").unwrap(),
            power: 4,
            prime: 3,
            cycle: vec![10, 13, 12],
            anchor_a: 10,
            anchor_b: 12,
        };
        assert!(!verify_jordan(&s, &t, &w));
    }

    #[test]
    fn hint_rows_cover_every_large_degree() {
        for n in 41..=3000 {
            assert!(WITNESS_HINTS.iter().any(|r| r.applies_to(n)), "no row for n = {n}");
        }
        assert!(!WITNESS_HINTS.iter().any(|r| r.applies_to(40)));
        for r in &WITNESS_HINTS {
            assert!(GroupWord::parse(r.word).is_ok(), "{}", r.word);
            assert!(is_prime(r.prime as u64));
        }
        assert!(WITNESS_HINTS[7].applies_to(44 + 12) && !WITNESS_HINTS[7].applies_to(44));
    }

    #[test]
    fn witness_boundaries() {
        let (s, t) = nineteen_point_pair();
        let w = find_jordan_witness(&s, &t, WitnessBudget::default()).unwrap();
        assert!(verify_jordan(&s, &t, &w));
        let mut big = w.clone();
        big.prime = 17;
        assert!(!verify_jordan(&s, &t, &big));
        let mut off = w.clone();
        off.anchor_a = (1..=19).find(|x| !w.cycle.contains(x)).unwrap();
        assert!(!verify_jordan(&s, &t, &off));
    }

    #[test]
    fn trivial_and_disjoint_inputs_fail() {
        let id = Permutation::identity(10);
        let r = check_conditions(&id, &id, WitnessBudget::default());
        assert!(!r.orders && !r.product_odd && !r.transitive);
        let s = parse_cycles("(1 2 3 4)", 8).unwrap();
        let t = parse_cycles("(5 6)", 8).unwrap();
        assert!(!check_conditions(&s, &t, WitnessBudget::default()).transitive);
    }

    #[test]
    fn lift_preconditions() {
        let (s, t) = nineteen_point_pair();
        assert_eq!(lift_pair(&s, &t, 1, 6), Err(LiftError::SigmaMovesI(1)));
        assert_eq!(lift_pair(&s, &t, 19, 1), Err(LiftError::TauMovesJ(1)));
        let (x, y) = lift_pair(&s, &t, 19, 6).unwrap();
        assert_eq!(x.element_order(), 4);
        assert_eq!(y.element_order(), 2);
        assert_eq!(x.then(&y).element_order(), 6);
    }

    #[test]
    fn primes() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
