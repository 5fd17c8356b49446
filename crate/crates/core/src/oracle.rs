//! Brute-force counterparts that share no code with the state and transfer
//! machinery: direct counting of invariant reduced states for E(j, k), and a
//! lattice loop tracer for annulus partition functions.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::amplitudes::{e_coefficient, Family};
use crate::error::Result;
use crate::poly::{Monomial, Poly, Var};
use crate::report::Report;
use crate::series::SeriesCtx;
use crate::states::{Blob, Kind};

const L: u8 = 1;
const R: u8 = 2;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Sym {
    Open,
    Close,
    Str,
}

/// Every word of arcs and depth-0 strings on `len` sites with `strings` strings.
fn words(len: usize, strings: usize) -> Vec<Vec<Sym>> {
    fn rec(len: usize, strings: usize, depth: usize, cur: &mut Vec<Sym>, out: &mut Vec<Vec<Sym>>) {
        let used_strings = cur.iter().filter(|s| **s == Sym::Str).count();
        if cur.len() == len {
            if depth == 0 && used_strings == strings {
                out.push(cur.clone());
            }
            return;
        }
        let left = len - cur.len();
        if depth + (strings - used_strings) > left {
            return;
        }
        for s in [Sym::Open, Sym::Close, Sym::Str] {
            let ok = match s {
                Sym::Open => true,
                Sym::Close => depth > 0,
                Sym::Str => depth == 0 && used_strings < strings,
            };
            if ok {
                cur.push(s);
                let d = match s {
                    Sym::Open => depth + 1,
                    Sym::Close => depth - 1,
                    Sym::Str => depth,
                };
                rec(len, strings, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(len, strings, 0, &mut Vec::new(), &mut out);
    out
}

/// A link of a word: first and last site, depth-0 or not, string or arc.
struct Link {
    first: usize,
    last: usize,
    outer: bool,
    string: bool,
}

fn links(w: &[Sym]) -> Vec<Link> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for (i, s) in w.iter().enumerate() {
        match s {
            Sym::Open => stack.push(i),
            Sym::Close => {
                let o = stack.pop().unwrap();
                out.push(Link { first: o, last: i, outer: stack.is_empty(), string: false });
            }
            Sym::Str => out.push(Link { first: i, last: i, outer: true, string: true }),
        }
    }
    out.sort_by_key(|l| l.first);
    out
}

/// Number of reduced states on 2j sites with 2k strings whose outer string
/// statuses are (alpha, beta) and whose edge links satisfy (gamma, delta):
/// gamma = b requires the link at site 1 to carry a left blob, delta = b the
/// link at site 2j a right blob.
#[allow(clippy::too_many_arguments)]
pub fn e_brute_force(
    kind: Kind,
    alpha: Blob,
    beta: Blob,
    gamma: Blob,
    delta: Blob,
    j: usize,
    k: usize,
    nb: bool,
) -> u64 {
    let allowed: &[u8] = match kind {
        Kind::ZeroB => &[0],
        Kind::OneB => &[0, L],
        Kind::TwoB => &[0, L, R, L | R],
    };
    let mut total = 0;
    for w in words(2 * j, 2 * k) {
        let ls = links(&w);
        let first_string = w.iter().position(|s| *s == Sym::Str);
        let last_string = w.iter().rposition(|s| *s == Sym::Str);
        let mut flags = vec![0u8; ls.len()];
        total += assign(&ls, 0, &mut flags, allowed, first_string, last_string, &|flags| {
            accept(&ls, flags, 2 * j, k, (alpha, beta, gamma, delta), nb)
        });
    }
    total
}

fn assign(
    ls: &[Link],
    i: usize,
    flags: &mut Vec<u8>,
    allowed: &[u8],
    first_string: Option<usize>,
    last_string: Option<usize>,
    accept: &dyn Fn(&[u8]) -> bool,
) -> u64 {
    if i == ls.len() {
        return accept(flags) as u64;
    }
    let mut count = 0;
    for &f in allowed {
        let l = &ls[i];
        if f != 0 && !l.outer {
            continue;
        }
        if f & L != 0 && first_string.is_some_and(|s| s < l.first) {
            continue;
        }
        if f & R != 0 && last_string.is_some_and(|s| s > l.last) {
            continue;
        }
        flags[i] = f;
        count += assign(ls, i + 1, flags, allowed, first_string, last_string, accept);
    }
    flags[i] = 0;
    count
}

fn accept(ls: &[Link], flags: &[u8], len: usize, k: usize, labels: (Blob, Blob, Blob, Blob), nb: bool) -> bool {
    let (alpha, beta, gamma, delta) = labels;
    let has = |f: u8, bit: u8| f & bit != 0;
    if flags.iter().any(|&f| f == L | R) && !(k == 0 && nb) {
        return false;
    }
    // no right-blobbed exterior link to the left of a left-blobbed one
    for a in 0..ls.len() {
        for b in a + 1..ls.len() {
            if has(flags[a], R) && has(flags[b], L) {
                return false;
            }
        }
    }
    let strings: Vec<usize> = (0..ls.len()).filter(|&i| ls[i].string).collect();
    let (a_got, b_got) = match (strings.first(), strings.last()) {
        (Some(&f), Some(&l)) => (Blob::from_flag(has(flags[f], L)), Blob::from_flag(has(flags[l], R))),
        _ => (Blob::U, Blob::U),
    };
    if a_got != alpha || b_got != beta {
        return false;
    }
    let at = |site: usize| (0..ls.len()).find(|&i| ls[i].first == site || ls[i].last == site);
    if gamma == Blob::B && !at(0).is_some_and(|i| has(flags[i], L)) {
        return false;
    }
    if delta == Blob::B && !at(len - 1).is_some_and(|i| has(flags[i], R)) {
        return false;
    }
    true
}

/// Series coefficients against brute-force counts for every family, label
/// combination and n_b policy, j ≤ j_max.
pub fn verify_e_coefficients(j_max: usize) -> Result<Report> {
    use Blob::*;
    let ctx = SeriesCtx::new(j_max + 2);
    let mut rep = Report::new();
    let both = [U, B];
    for j in 0..=j_max {
        for k in 0..=j {
            let a_opts: &[Blob] = if k == 0 { &[U] } else { &both };
            let mut cases: Vec<(Kind, Blob, Blob, Blob, Blob, bool)> = vec![(Kind::ZeroB, U, U, U, U, false)];
            for &a in a_opts {
                for g in both {
                    cases.push((Kind::OneB, a, U, g, U, false));
                    for &b in a_opts {
                        for d in both {
                            for nb in [false, true] {
                                cases.push((Kind::TwoB, a, b, g, d, nb));
                            }
                        }
                    }
                }
            }
            for (kind, a, b, g, d, nb) in cases {
                if j == 0 && (g == B || d == B) {
                    // no edge link exists on zero sites
                    continue;
                }
                let fam = match kind {
                    Kind::ZeroB => Family::Zero,
                    Kind::OneB => Family::one_b(a, g),
                    Kind::TwoB => Family::two_b(a, b, g, d),
                };
                let series = e_coefficient(&ctx, fam, j, k, nb)?;
                let brute = BigInt::from(e_brute_force(kind, a, b, g, d, j, k, nb));
                let name = match kind {
                    Kind::ZeroB => format!("0b E({},{})", j, k),
                    Kind::OneB => format!("1b E^{}_{}({},{})", a.letter(), g.letter(), j, k),
                    Kind::TwoB => format!(
                        "2b nb={} E^{}{}_{}{}({},{})",
                        nb as u8,
                        a.letter(),
                        b.letter(),
                        g.letter(),
                        d.letter(),
                        j,
                        k
                    ),
                };
                rep.expect_eq(name, &series, &brute);
            }
        }
    }
    Ok(rep)
}

/// One slice of the lattice: a bulk vertex on sites (i, i+1), or a boundary
/// slot on the first or last site. `free` slots may also be left empty.
#[derive(Clone, Copy)]
enum Slice {
    Vertex(usize),
    Boundary { bit: u8, free: bool },
}

/// Slices of one time step, bottom to top.
fn time_step(n: usize, left: Option<bool>, right: Option<bool>) -> Vec<Slice> {
    let mut out = Vec::new();
    if let Some(free) = left {
        out.push(Slice::Boundary { bit: L, free });
    }
    let mut i = 0;
    while i + 1 < n {
        out.push(Slice::Vertex(i));
        i += 2;
    }
    if let Some(free) = right {
        out.push(Slice::Boundary { bit: R, free });
    }
    let mut i = 1;
    while i + 1 < n {
        out.push(Slice::Vertex(i));
        i += 2;
    }
    out
}

/// Annulus partition function by summing over every vertex and boundary
/// choice on an N x M lattice and tracing the loops. `left` / `right` are
/// None for no boundary, Some(true) when the blob is optional (λ = 1) and
/// Some(false) when it is forced (λ = 0). Loops get n, n_l, n_r, n_b when
/// contractible (n_b = 0 unless `nb`), ℓ, ℓ_l, ℓ_r, ℓ_b when winding.
pub fn lattice_partition(n: usize, m: usize, left: Option<bool>, right: Option<bool>, nb: bool) -> Poly {
    let step = time_step(n, left, right);
    let slices: Vec<Slice> = (0..m).flat_map(|_| step.iter().copied()).collect();
    let h = slices.len();
    let free: Vec<usize> = (0..h)
        .filter(|&s| matches!(slices[s], Slice::Vertex(_) | Slice::Boundary { free: true, .. }))
        .collect();
    let mut acc: HashMap<[u16; 8], i64> = HashMap::new();
    // slice t joins layer t to layer t + 1 (mod h); seen_up[t][i] marks the
    // edge leaving node (t, i) upward
    for mask in 0u64..(1u64 << free.len()) {
        let mut on = vec![false; h];
        for (b, &s) in free.iter().enumerate() {
            on[s] = mask >> b & 1 == 1;
        }
        // per slice and site: (goes through, other site, blob bits); a vertex
        // that is on pairs sites as a cap below and an identical cup above
        let straight: Vec<(bool, usize, u8)> = (0..n).map(|i| (true, i, 0)).collect();
        let mut up = vec![straight; h];
        for t in 0..h {
            match slices[t] {
                Slice::Vertex(i) => {
                    if on[t] {
                        up[t][i] = (false, i + 1, 0);
                        up[t][i + 1] = (false, i, 0);
                    }
                }
                Slice::Boundary { bit, free } => {
                    if on[t] || !free {
                        let i = if bit == L { 0 } else { n - 1 };
                        up[t][i].2 = bit;
                    }
                }
            }
        }
        let mut seen_up = vec![vec![false; n]; h];
        let mut exps = [0u16; 8];
        let mut zero = false;
        for t0 in 0..h {
            for i0 in 0..n {
                if seen_up[t0][i0] {
                    continue;
                }
                // walk starting upward from node (t0, i0)
                let (mut t, mut i, mut going_up) = (t0, i0, true);
                let (mut marks, mut wind) = (0u8, 0i32);
                loop {
                    if going_up {
                        seen_up[t][i] = true;
                        let (through, j, mk) = up[t][i];
                        marks |= mk;
                        if through {
                            if t == h - 1 {
                                wind += 1;
                            }
                            t = (t + 1) % h;
                            i = j;
                        } else {
                            // cap on layer t: continue downward from (t, j)
                            seen_up[t][j] = true;
                            i = j;
                            going_up = false;
                        }
                    } else {
                        let ts = (t + h - 1) % h;
                        let (through, j, mk) = up[ts][i];
                        marks |= mk;
                        if through {
                            if ts == h - 1 {
                                wind -= 1;
                            }
                            seen_up[ts][j] = true;
                            t = ts;
                            i = j;
                        } else {
                            // cup in slice ts at layer t: turn and go up
                            i = j;
                            going_up = true;
                        }
                    }
                    if going_up && t == t0 && i == i0 {
                        break;
                    }
                }
                let idx = match (wind != 0, marks) {
                    (false, 0) => 0,
                    (false, L) => 1,
                    (false, R) => 2,
                    (false, _) => {
                        if !nb {
                            zero = true;
                        }
                        3
                    }
                    (true, 0) => 4,
                    (true, L) => 5,
                    (true, R) => 6,
                    (true, _) => 7,
                };
                exps[idx] += 1;
            }
        }
        if !zero {
            *acc.entry(exps).or_insert(0) += 1;
        }
    }
    let vars = [Var::N, Var::NL, Var::NR, Var::NB, Var::Ell, Var::EllL, Var::EllR, Var::EllB];
    Poly::from_terms(acc.into_iter().map(|(e, c)| {
        let mut mono = Monomial::one();
        for (k, v) in vars.iter().enumerate() {
            for _ in 0..e[k] {
                mono = mono.mul(&Monomial::var(*v));
            }
        }
        (mono, BigInt::from(c))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_small() {
        assert_eq!(lattice_partition(2, 1, None, None, false), Poly::parse("ell^2 + n").unwrap());
        assert_eq!(lattice_partition(2, 1, Some(false), None, false), Poly::parse("ell_l*ell + n_l").unwrap());
        // forced blobs on both sides: the single loop of e_1 touches both
        assert_eq!(lattice_partition(2, 1, Some(false), Some(false), true), Poly::parse("ell_l*ell_r + n_b").unwrap());
        assert_eq!(lattice_partition(2, 1, Some(false), Some(false), false), Poly::parse("ell_l*ell_r").unwrap());
    }

    #[test]
    fn word_counts() {
        assert_eq!(words(4, 0).len(), 2);
        assert_eq!(words(4, 2).len(), 3);
        assert_eq!(words(6, 0).len(), 5);
    }

    #[test]
    fn small_brute_force_values() {
        use Blob::*;
        // e^2/f at j = 2 versus 1/(1-4z)
        assert_eq!(e_brute_force(Kind::TwoB, U, U, U, U, 2, 0, false), 11);
        assert_eq!(e_brute_force(Kind::TwoB, U, U, U, U, 2, 0, true), 16);
        assert_eq!(e_brute_force(Kind::TwoB, B, B, B, B, 2, 1, false), 3);
    }

    #[test]
    fn series_match_brute_force_to_j4() {
        let r = verify_e_coefficients(4).unwrap();
        assert!(r.all_pass(), "{}", r.summary());
    }
}
