//! Generator actions on reduced states, the inner product of reduced states,
//! and checks of the defining relations.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Poly, Var};
use crate::report::Report;
use crate::states::{enumerate_all, BoundaryMode, Kind, ReducedState, BLOB_L, BLOB_LR, BLOB_R};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Generator {
    /// e_i acting on sites i and i+1 (1-based)
    E(usize),
    BlobL,
    BlobR,
    Identity,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(i) => write!(f, "e{}", i),
            Generator::BlobL => write!(f, "b_l"),
            Generator::BlobR => write!(f, "b_r"),
            Generator::Identity => write!(f, "1"),
        }
    }
}

/// Weight variable of a closed contractible loop with the given blob bits.
pub fn loop_var(flags: u8) -> Var {
    match flags {
        0 => Var::N,
        BLOB_L => Var::NL,
        BLOB_R => Var::NR,
        _ => Var::NB,
    }
}

/// Result of acting with one generator: annihilated, or a new state and at
/// most one closed loop (its blob bits).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Action<S = ReducedState> {
    Zero,
    Image(S, Option<u8>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedState {
    pub state: ReducedState,
    pub weight: Poly,
}

fn check_generator(g: Generator, n: usize, mode: BoundaryMode) -> Result<()> {
    let ok = match g {
        Generator::E(i) => i >= 1 && i < n,
        Generator::BlobL => mode.has_left(),
        Generator::BlobR => mode.has_right(),
        Generator::Identity => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::GeneratorOutOfRange(g.to_string(), n))
    }
}

/// Diagrammatic action without weight bookkeeping. With `mode.nb` false a
/// doubly blobbed loop or link annihilates the state.
pub fn act(g: Generator, s: &ReducedState, mode: BoundaryMode) -> Result<Action> {
    let n = s.n();
    check_generator(g, n, mode)?;
    let dead = |f: u8| f == BLOB_LR && !mode.allows_double();
    match g {
        Generator::Identity => Ok(Action::Image(s.clone(), None)),
        Generator::BlobL | Generator::BlobR => {
            let (site, bit) = if g == Generator::BlobL { (0, BLOB_L) } else { (n - 1, BLOB_R) };
            let f = s.flag(site) | bit;
            if dead(f) {
                return Ok(Action::Zero);
            }
            let mut t = s.clone();
            t.set_flags(site, f);
            Ok(Action::Image(t, None))
        }
        Generator::E(i1) => {
            let (i, j) = (i1 - 1, i1);
            let mut t = s.clone();
            match (s.partner(i), s.partner(j)) {
                (Some(p), _) if p == j => {
                    let f = s.flag(i);
                    if dead(f) {
                        return Ok(Action::Zero);
                    }
                    t.set_arc(i, j, 0);
                    Ok(Action::Image(t, Some(f)))
                }
                (Some(p), Some(q)) => {
                    let f = s.flag(i) | s.flag(j);
                    if dead(f) {
                        return Ok(Action::Zero);
                    }
                    t.set_arc(p, q, f);
                    t.set_arc(i, j, 0);
                    Ok(Action::Image(t, None))
                }
                (None, Some(q)) => {
                    let f = s.flag(i) | s.flag(j);
                    if dead(f) {
                        return Ok(Action::Zero);
                    }
                    t.set_string(q, f);
                    t.set_arc(i, j, 0);
                    Ok(Action::Image(t, None))
                }
                (Some(p), None) => {
                    let f = s.flag(i) | s.flag(j);
                    if dead(f) {
                        return Ok(Action::Zero);
                    }
                    t.set_string(p, f);
                    t.set_arc(i, j, 0);
                    Ok(Action::Image(t, None))
                }
                (None, None) => {
                    // two strings contract; their decorations leave with the bottom half
                    t.set_arc(i, j, 0);
                    Ok(Action::Image(t, None))
                }
            }
        }
    }
}

/// Apply a generator, accumulating loop weights. An annihilated state comes
/// back with weight zero.
pub fn apply_generator(g: Generator, s: &ReducedState, mode: BoundaryMode) -> Result<WeightedState> {
    Ok(match act(g, s, mode)? {
        Action::Zero => WeightedState { state: s.clone(), weight: Poly::zero() },
        Action::Image(t, lp) => {
            WeightedState { state: t, weight: lp.map(|f| Poly::var(loop_var(f))).unwrap_or_else(Poly::one) }
        }
    })
}

/// Apply a word (rightmost generator first) to a state.
pub fn apply_word(word: &[Generator], s: &ReducedState, mode: BoundaryMode) -> Result<WeightedState> {
    let mut cur = WeightedState { state: s.clone(), weight: Poly::one() };
    for &g in word.iter().rev() {
        if cur.weight.is_zero() {
            break;
        }
        let next = apply_generator(g, &cur.state, mode)?;
        cur = WeightedState { state: next.state, weight: &cur.weight * &next.weight };
    }
    Ok(cur)
}

fn same(a: &WeightedState, b: &WeightedState) -> bool {
    if a.weight.is_zero() || b.weight.is_zero() {
        return a.weight.is_zero() && b.weight.is_zero();
    }
    a == b
}

struct Relation {
    name: String,
    lhs: Vec<Generator>,
    rhs: Vec<Generator>,
    factor: Poly,
}

fn relations(n: usize, mode: BoundaryMode) -> Vec<Relation> {
    use Generator::*;
    let mut out = Vec::new();
    let mut rel = |name: String, lhs: Vec<Generator>, rhs: Vec<Generator>, factor: Poly| {
        out.push(Relation { name, lhs, rhs, factor })
    };
    let one = Poly::one;
    for i in 1..n {
        rel(format!("e{i}^2 = n e{i}"), vec![E(i), E(i)], vec![E(i)], Poly::var(Var::N));
        if i + 1 < n {
            rel(format!("e{i} e{} e{i} = e{i}", i + 1), vec![E(i), E(i + 1), E(i)], vec![E(i)], one());
            rel(format!("e{} e{i} e{} = e{}", i + 1, i + 1, i + 1), vec![E(i + 1), E(i), E(i + 1)], vec![E(i + 1)], one());
        }
        for j in i + 2..n {
            rel(format!("e{i} e{j} = e{j} e{i}"), vec![E(i), E(j)], vec![E(j), E(i)], one());
        }
    }
    if mode.has_left() {
        rel("b_l^2 = b_l".into(), vec![BlobL, BlobL], vec![BlobL], one());
        if n >= 2 {
            rel("e1 b_l e1 = n_l e1".into(), vec![E(1), BlobL, E(1)], vec![E(1)], Poly::var(Var::NL));
        }
        for i in 2..n {
            rel(format!("[b_l, e{i}] = 0"), vec![BlobL, E(i)], vec![E(i), BlobL], one());
        }
    }
    if mode.has_right() {
        rel("b_r^2 = b_r".into(), vec![BlobR, BlobR], vec![BlobR], one());
        if n >= 2 {
            rel(format!("e{} b_r e{} = n_r e{}", n - 1, n - 1, n - 1), vec![E(n - 1), BlobR, E(n - 1)], vec![E(n - 1)], Poly::var(Var::NR));
        }
        for i in 1..n.saturating_sub(1) {
            rel(format!("[b_r, e{i}] = 0"), vec![BlobR, E(i)], vec![E(i), BlobR], one());
        }
        rel("[b_l, b_r] = 0".into(), vec![BlobL, BlobR], vec![BlobR, BlobL], one());
        if n % 2 == 0 {
            let odd: Vec<Generator> = (1..n).step_by(2).map(E).collect();
            let even: Vec<Generator> = (2..n).step_by(2).map(E).collect();
            let mut lhs = odd.clone();
            lhs.push(BlobR);
            lhs.extend(&even);
            lhs.push(BlobL);
            lhs.extend(&odd);
            let nb = if mode.nb { Poly::var(Var::NB) } else { Poly::zero() };
            rel("boundary-to-boundary loop quotient".into(), lhs, odd, nb);
        }
    }
    out
}

/// Every defining relation on the full reduced-state basis (λ flags ignored:
/// the basis is that of the full algebra with the mode's n_b policy).
pub fn verify_relations(n: usize, mode: BoundaryMode) -> Result<Report> {
    let full = BoundaryMode { lambda_l: true, lambda_r: true, ..mode };
    let basis: Vec<ReducedState> = enumerate_all(n, full)?.into_iter().flat_map(|(_, v)| v).collect();
    let mut rep = Report::new();
    for r in relations(n, mode) {
        let mut bad = None;
        for s in &basis {
            let l = apply_word(&r.lhs, s, mode)?;
            let mut rr = apply_word(&r.rhs, s, mode)?;
            rr.weight = &rr.weight * &r.factor;
            if !same(&l, &rr) {
                bad = Some(format!("on {}: {} * {} vs {} * {}", s, l.weight, l.state, rr.weight, rr.state));
                break;
            }
        }
        rep.push(format!("{} N={} {}", mode, n, r.name), bad.is_none(), bad);
    }
    // images stay admissible and never gain strings
    let mut bad = None;
    let gens: Vec<Generator> = (1..n)
        .map(Generator::E)
        .chain(mode.has_left().then_some(Generator::BlobL))
        .chain(mode.has_right().then_some(Generator::BlobR))
        .collect();
    'outer: for s in &basis {
        for &g in &gens {
            if let Action::Image(t, lp) = act(g, s, mode)? {
                if !t.is_valid(full) || t.num_strings() > s.num_strings() || (lp == Some(BLOB_LR) && !mode.nb) {
                    bad = Some(format!("{} on {} gives {}", g, s, t));
                    break 'outer;
                }
            }
        }
    }
    rep.push(format!("{} N={} closure", mode, n), bad.is_none(), bad);
    Ok(rep)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Algebra {
    Full,
    Restricted,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum StringPositions {
    Free,
    Matched,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum StringWeight {
    One,
    /// k-th top string joined to k-th bottom string, n per loop formed
    Semimeander,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum NbPolicy {
    Allowed,
    Forbidden,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GramConventions {
    pub algebra: Algebra,
    pub string_positions: StringPositions,
    pub line_conservation: bool,
    pub string_weight: StringWeight,
    pub nb_policy: NbPolicy,
}

impl Default for GramConventions {
    fn default() -> Self {
        GramConventions {
            algebra: Algebra::Full,
            string_positions: StringPositions::Free,
            line_conservation: true,
            string_weight: StringWeight::One,
            nb_policy: NbPolicy::Allowed,
        }
    }
}

impl GramConventions {
    pub fn semimeander() -> Self {
        GramConventions { line_conservation: false, string_weight: StringWeight::Semimeander, ..Default::default() }
    }

    pub fn restricted() -> Self {
        GramConventions { algebra: Algebra::Restricted, ..Default::default() }
    }

    pub fn forbidden_double() -> Self {
        GramConventions { nb_policy: NbPolicy::Forbidden, ..Default::default() }
    }

    /// The boundary mode whose states form the Gram basis.
    pub fn mode(&self, kind: Kind) -> BoundaryMode {
        let lam = self.algebra == Algebra::Full;
        match kind {
            Kind::ZeroB => BoundaryMode::zero(),
            Kind::OneB => BoundaryMode::one(lam),
            Kind::TwoB => BoundaryMode::two(lam, lam, self.nb_policy == NbPolicy::Allowed),
        }
    }
}

/// Inner product by reflecting `top` onto `bottom` and gluing site by site.
pub fn inner_product(top: &ReducedState, bottom: &ReducedState, mode: BoundaryMode, conv: &GramConventions) -> Poly {
    let n = top.n();
    if bottom.n() != n || top.num_strings() != bottom.num_strings() {
        return Poly::zero();
    }
    if mode.kind != Kind::ZeroB && top.sector(mode) != bottom.sector(mode) {
        return Poly::zero();
    }
    if conv.string_positions == StringPositions::Matched && top.strings() != bottom.strings() {
        return Poly::zero();
    }
    let sides = [top, bottom];
    let mut seen = [vec![false; n], vec![false; n]];
    let mut exps = [0u16; 4];
    // open paths: (side, site) of both ends
    let mut paths: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for side in 0..2 {
        for i in 0..n {
            if seen[side][i] || !sides[side].is_string(i) {
                continue;
            }
            seen[side][i] = true;
            let (mut s, mut k, mut flags) = (side, i, 0u8);
            loop {
                s = 1 - s;
                seen[s][k] = true;
                if sides[s].is_string(k) {
                    break;
                }
                flags |= sides[s].flag(k);
                k = sides[s].partner(k).unwrap();
                seen[s][k] = true;
            }
            let (a, b) = ((side, i), (s, k));
            if conv.line_conservation {
                if a.0 == b.0 {
                    return Poly::zero();
                }
                let ends = sides[a.0].flag(a.1) & sides[b.0].flag(b.1);
                if flags & !ends != 0 {
                    return Poly::zero();
                }
            }
            paths.push((a, b));
        }
    }
    for i in 0..n {
        if seen[0][i] {
            continue;
        }
        // closed loop through top arc at i
        let (mut s, mut k, mut flags) = (0usize, i, 0u8);
        loop {
            seen[s][k] = true;
            flags |= sides[s].flag(k);
            k = sides[s].partner(k).unwrap();
            seen[s][k] = true;
            s = 1 - s;
            if s == 0 && k == i {
                break;
            }
        }
        if flags == BLOB_LR && (conv.nb_policy == NbPolicy::Forbidden || !mode.nb) {
            return Poly::zero();
        }
        exps[flags as usize] += 1;
    }
    if conv.string_weight == StringWeight::Semimeander {
        exps[0] += semimeander_cycles(top, bottom, &paths);
    }
    let vars = [Var::N, Var::NL, Var::NR, Var::NB];
    let powers: Vec<(Var, u16)> = vars.iter().zip(exps).filter(|(_, e)| *e > 0).map(|(v, e)| (*v, e)).collect();
    Poly::monomial(BigInt::from(1), &powers)
}

/// Loops formed once the k-th top string is joined to the k-th bottom string.
fn semimeander_cycles(top: &ReducedState, bottom: &ReducedState, paths: &[((usize, usize), (usize, usize))]) -> u16 {
    let n = top.n();
    let node = |(side, site): (usize, usize)| side * n + site;
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let join = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    };
    for &(a, b) in paths {
        join(&mut parent, node(a), node(b));
    }
    for (t, b) in top.strings().iter().zip(bottom.strings()) {
        join(&mut parent, node((0, t - 1)), node((1, b - 1)));
    }
    let mut roots: Vec<usize> = paths.iter().map(|&(a, _)| find(&mut parent, node(a))).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len() as u16
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{enumerate_reduced, SectorLabel};

    fn st(s: &str) -> ReducedState {
        s.parse().unwrap()
    }

    #[test]
    fn generator_examples() {
        let m0 = BoundaryMode::zero();
        let w = apply_generator(Generator::E(1), &st("()()"), m0).unwrap();
        assert_eq!((w.state, w.weight), (st("()()"), Poly::var(Var::N)));
        let m1 = BoundaryMode::one(true);
        let s = st("()||");
        let once = apply_generator(Generator::BlobL, &s, m1).unwrap();
        let twice = apply_word(&[Generator::BlobL, Generator::BlobL], &s, m1).unwrap();
        assert_eq!(once, twice);
        assert_eq!(once.state, st("o()||"));
    }

    #[test]
    fn e1_blob_e1() {
        let m1 = BoundaryMode::one(true);
        for s in enumerate_all(4, m1).unwrap().into_iter().flat_map(|(_, v)| v) {
            let l = apply_word(&[Generator::E(1), Generator::BlobL, Generator::E(1)], &s, m1).unwrap();
            let r = apply_generator(Generator::E(1), &s, m1).unwrap();
            assert_eq!(l.state, r.state);
            assert_eq!(l.weight, &r.weight * &Poly::var(Var::NL));
        }
    }

    #[test]
    fn relations_small() {
        for mode in BoundaryMode::all_variants() {
            for n in [2, 4, 5, 6] {
                if n % 2 == 1 && mode.kind != Kind::ZeroB {
                    continue;
                }
                let r = verify_relations(n, mode).unwrap();
                assert!(r.all_pass(), "{}", r.summary());
            }
        }
    }

    #[test]
    fn out_of_range() {
        let s = st("()()");
        assert!(apply_generator(Generator::E(4), &s, BoundaryMode::zero()).is_err());
        assert!(apply_generator(Generator::BlobL, &s, BoundaryMode::zero()).is_err());
        assert!(apply_generator(Generator::BlobR, &s, BoundaryMode::one(true)).is_err());
    }

    #[test]
    fn no_nb_without_double_blobs() {
        let mode = BoundaryMode::two(true, true, false);
        let basis: Vec<_> = enumerate_all(4, mode).unwrap().into_iter().flat_map(|(_, v)| v).collect();
        let gens = [Generator::E(1), Generator::E(2), Generator::E(3), Generator::BlobL, Generator::BlobR];
        for s in &basis {
            for a in gens {
                for b in gens {
                    let w = apply_word(&[a, b, Generator::E(1)], s, mode).unwrap();
                    assert!(w.weight.degree_in(Var::NB).unwrap_or(0) == 0);
                }
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let c = GramConventions::default();
        let m0 = BoundaryMode::zero();
        let a = st("()()()");
        assert_eq!(inner_product(&a, &a, m0, &c), Poly::monomial(1, &[(Var::N, 3)]));
        assert!(inner_product(&st("()||"), &st("||()"), m0, &c).is_zero());
        let m1 = BoundaryMode::one(true);
        let b = st("o()o||");
        assert_eq!(inner_product(&b, &b, m1, &c), Poly::var(Var::NL));
    }

    #[test]
    fn inner_product_symmetric() {
        for mode in [BoundaryMode::zero(), BoundaryMode::one(true), BoundaryMode::two(true, true, true)] {
            let c = GramConventions::default();
            for (_, states) in enumerate_all(4, mode).unwrap() {
                for x in &states {
                    for y in &states {
                        assert_eq!(inner_product(x, y, mode, &c), inner_product(y, x, mode, &c));
                    }
                }
            }
        }
        let sm = GramConventions::semimeander();
        let states = enumerate_reduced(6, BoundaryMode::zero(), SectorLabel::zero(2)).unwrap();
        for x in &states {
            for y in &states {
                assert_eq!(inner_product(x, y, BoundaryMode::zero(), &sm), inner_product(y, x, BoundaryMode::zero(), &sm));
            }
        }
    }
}
