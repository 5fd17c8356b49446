//! Reduced states (half-slab link patterns with blob decorations), their
//! enumeration per sector, and dimension counting.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::amplitudes::{e_coefficient, Family};
use crate::error::{Error, Result};
use crate::series::SeriesCtx;

pub const BLOB_L: u8 = 1;
pub const BLOB_R: u8 = 2;
pub const BLOB_LR: u8 = BLOB_L | BLOB_R;
pub(crate) const STRING: u8 = u8::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    ZeroB,
    OneB,
    TwoB,
}

/// Boundary type plus the λ and n_b flags. `lambda_*` false means λ = 0:
/// the link at the corresponding edge site is always blobbed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BoundaryMode {
    pub kind: Kind,
    pub lambda_l: bool,
    pub lambda_r: bool,
    pub nb: bool,
}

impl BoundaryMode {
    pub fn zero() -> Self {
        BoundaryMode { kind: Kind::ZeroB, lambda_l: true, lambda_r: true, nb: false }
    }

    pub fn one(lambda_l: bool) -> Self {
        BoundaryMode { kind: Kind::OneB, lambda_l, lambda_r: true, nb: false }
    }

    pub fn two(lambda_l: bool, lambda_r: bool, nb: bool) -> Self {
        BoundaryMode { kind: Kind::TwoB, lambda_l, lambda_r, nb }
    }

    pub fn has_left(&self) -> bool {
        self.kind != Kind::ZeroB
    }

    pub fn has_right(&self) -> bool {
        self.kind == Kind::TwoB
    }

    /// λ_l = 0 with a left boundary present.
    pub fn pinned_left(&self) -> bool {
        self.has_left() && !self.lambda_l
    }

    pub fn pinned_right(&self) -> bool {
        self.has_right() && !self.lambda_r
    }

    /// Whether a doubly blobbed link survives (n_b ≠ 0).
    pub fn allows_double(&self) -> bool {
        self.kind == Kind::TwoB && self.nb
    }

    /// Every mode variant used by the verification suites.
    pub fn all_variants() -> Vec<BoundaryMode> {
        let mut v = vec![BoundaryMode::zero(), BoundaryMode::one(true), BoundaryMode::one(false)];
        for ll in [true, false] {
            for lr in [true, false] {
                for nb in [false, true] {
                    v.push(BoundaryMode::two(ll, lr, nb));
                }
            }
        }
        v
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::ZeroB => write!(f, "0b"),
            Kind::OneB => write!(f, "1b[lambda_l={}]", self.lambda_l as u8),
            Kind::TwoB => write!(
                f,
                "2b[lambda_l={},lambda_r={},nb={}]",
                self.lambda_l as u8, self.lambda_r as u8, self.nb as u8
            ),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Blob {
    U,
    B,
}

impl Blob {
    pub fn from_flag(b: bool) -> Blob {
        if b {
            Blob::B
        } else {
            Blob::U
        }
    }

    pub fn letter(self) -> char {
        match self {
            Blob::U => 'u',
            Blob::B => 'b',
        }
    }
}

/// Sector: string count plus blob status of the outermost strings.
/// Orders as uu < ub < bu < bb for a fixed string count.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SectorLabel {
    pub strings: usize,
    pub left: Option<Blob>,
    pub right: Option<Blob>,
}

impl SectorLabel {
    pub fn zero(strings: usize) -> Self {
        SectorLabel { strings, left: None, right: None }
    }

    pub fn one(strings: usize, left: Blob) -> Self {
        SectorLabel { strings, left: Some(left), right: None }
    }

    pub fn two(strings: usize, left: Blob, right: Blob) -> Self {
        SectorLabel { strings, left: Some(left), right: Some(right) }
    }

    /// Letters such as "u", "ub", or "" for the zero-boundary case.
    pub fn tag(&self) -> String {
        self.left.iter().chain(self.right.iter()).map(|b| b.letter()).collect()
    }

    pub fn validate(&self, n: usize, mode: BoundaryMode) -> Result<()> {
        let bad = || Error::InvalidSector { sector: self.to_string(), mode: mode.to_string(), n };
        if n == 0 || (n % 2 == 1 && mode.kind != Kind::ZeroB) {
            return Err(Error::InvalidMode(format!("N={} not supported for {}", n, mode)));
        }
        if self.strings > n || (n - self.strings) % 2 == 1 {
            return Err(bad());
        }
        if self.left.is_some() != mode.has_left() || self.right.is_some() != mode.has_right() {
            return Err(bad());
        }
        if self.strings == 0 && (self.left == Some(Blob::B) || self.right == Some(Blob::B)) {
            return Err(bad());
        }
        Ok(())
    }

    /// Sort key: descending strings, then the sector letters.
    fn order_key(&self) -> (Reverse<usize>, Option<Blob>, Option<Blob>) {
        (Reverse(self.strings), self.left, self.right)
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = self.tag();
        if tag.is_empty() {
            write!(f, "L={}", self.strings)
        } else {
            write!(f, "L={}:{}", self.strings, tag)
        }
    }
}

/// Every admissible sector label for `mode` on `n` sites, in canonical order.
/// Sectors with zero dimension are included only if `keep_empty`.
pub fn sectors(n: usize, mode: BoundaryMode, keep_empty: bool) -> Vec<SectorLabel> {
    let mut out = Vec::new();
    let ctx = SeriesCtx::new(n / 2 + 2);
    for l in (0..=n).rev().filter(|l| (n - l) % 2 == 0) {
        let labels: Vec<SectorLabel> = match mode.kind {
            Kind::ZeroB => vec![SectorLabel::zero(l)],
            Kind::OneB if l == 0 => vec![SectorLabel::one(0, Blob::U)],
            Kind::OneB => vec![SectorLabel::one(l, Blob::U), SectorLabel::one(l, Blob::B)],
            Kind::TwoB if l == 0 => vec![SectorLabel::two(0, Blob::U, Blob::U)],
            Kind::TwoB => [Blob::U, Blob::B]
                .iter()
                .flat_map(|&a| [Blob::U, Blob::B].map(|b| SectorLabel::two(l, a, b)))
                .collect(),
        };
        for s in labels {
            if keep_empty || closed_form_dimension_with(&ctx, n, mode, s).unwrap_or(0) > 0 {
                out.push(s);
            }
        }
    }
    out
}

/// Half-slab link pattern on sites 0..n (displayed 1-based). `site[i]` is the
/// partner of site i or `STRING`; `flags[i]` holds the blob bits of the link
/// through site i (both ends of an arc carry the same bits).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReducedState {
    pub(crate) site: Vec<u8>,
    pub(crate) flags: Vec<u8>,
}

impl ReducedState {
    pub fn n(&self) -> usize {
        self.site.len()
    }

    pub fn all_strings(n: usize) -> Self {
        ReducedState { site: vec![STRING; n], flags: vec![0; n] }
    }

    pub fn is_string(&self, i: usize) -> bool {
        self.site[i] == STRING
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        (!self.is_string(i)).then(|| self.site[i] as usize)
    }

    pub fn flag(&self, i: usize) -> u8 {
        self.flags[i]
    }

    /// Arcs as 1-based (open, close) pairs in order of their opening site.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .filter(|&i| !self.is_string(i) && (self.site[i] as usize) > i)
            .map(|i| (i + 1, self.site[i] as usize + 1))
            .collect()
    }

    /// String sites, 1-based and increasing.
    pub fn strings(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_string(i)).map(|i| i + 1).collect()
    }

    pub fn num_strings(&self) -> usize {
        self.site.iter().filter(|&&s| s == STRING).count()
    }

    pub fn blob_l(&self, site1: usize) -> bool {
        self.flags[site1 - 1] & BLOB_L != 0
    }

    pub fn blob_r(&self, site1: usize) -> bool {
        self.flags[site1 - 1] & BLOB_R != 0
    }

    /// Whether site i (0-based) lies inside some arc.
    pub(crate) fn nested(&self, i: usize) -> bool {
        let mut depth = 0i32;
        for j in 0..i {
            if !self.is_string(j) {
                if (self.site[j] as usize) > j {
                    depth += 1;
                } else {
                    depth -= 1;
                }
            }
        }
        if !self.is_string(i) && (self.site[i] as usize) < i {
            depth -= 1;
        }
        depth > 0
    }

    /// Left-exposed: exterior, and no string strictly left of the link.
    pub fn left_exposed(&self, site1: usize) -> bool {
        let i = site1 - 1;
        let lo = if self.is_string(i) { i } else { i.min(self.site[i] as usize) };
        !self.nested(lo) && (0..lo).all(|j| !self.is_string(j))
    }

    pub fn right_exposed(&self, site1: usize) -> bool {
        let i = site1 - 1;
        let hi = if self.is_string(i) { i } else { i.max(self.site[i] as usize) };
        !self.nested(hi) && (hi + 1..self.n()).all(|j| !self.is_string(j))
    }

    pub fn sector(&self, mode: BoundaryMode) -> SectorLabel {
        let strings = self.strings();
        let l = strings.len();
        let side = |site: Option<&usize>, bit: u8| match site {
            Some(&s) if l > 0 => Blob::from_flag(self.flags[s - 1] & bit != 0),
            _ => Blob::U,
        };
        SectorLabel {
            strings: l,
            left: mode.has_left().then(|| side(strings.first(), BLOB_L)),
            right: mode.has_right().then(|| side(strings.last(), BLOB_R)),
        }
    }

    /// Checks the noncrossing, exposure, double-blob and λ constraints.
    pub fn is_valid(&self, mode: BoundaryMode) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut stack: Vec<usize> = Vec::new();
        for i in 0..n {
            if self.is_string(i) {
                if !stack.is_empty() {
                    return false;
                }
                continue;
            }
            let p = self.site[i] as usize;
            if p >= n || p == i || self.site[p] as usize != i || self.flags[p] != self.flags[i] {
                return false;
            }
            if p > i {
                stack.push(i);
            } else if stack.pop() != Some(p) {
                return false;
            }
        }
        let strings = self.num_strings();
        for i in 0..n {
            let f = self.flags[i];
            if f & BLOB_L != 0 && (!mode.has_left() || !self.left_exposed(i + 1)) {
                return false;
            }
            if f & BLOB_R != 0 && (!mode.has_right() || !self.right_exposed(i + 1)) {
                return false;
            }
            if f == BLOB_LR && (!mode.allows_double() || strings > 0) {
                return false;
            }
        }
        if strings == 0 && mode.has_right() {
            let ext = self.exterior_links();
            for (a, &x) in ext.iter().enumerate() {
                for &y in &ext[a + 1..] {
                    if self.flags[x] & BLOB_R != 0 && self.flags[y] & BLOB_L != 0 {
                        return false;
                    }
                }
            }
        }
        if mode.pinned_left() && self.flags[0] & BLOB_L == 0 {
            return false;
        }
        if mode.pinned_right() && self.flags[n - 1] & BLOB_R == 0 {
            return false;
        }
        true
    }

    /// First site of each exterior link (strings and outermost arcs), left to right.
    pub(crate) fn exterior_links(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.n() {
            out.push(i);
            i = if self.is_string(i) { i + 1 } else { self.site[i] as usize + 1 };
        }
        out
    }

    /// Per-link blob values, arcs first (in `arcs()` order) then strings.
    fn link_flags(&self) -> Vec<u8> {
        let mut v: Vec<u8> = self.arcs().iter().map(|&(a, _)| self.flags[a - 1]).collect();
        v.extend(self.strings().iter().map(|&s| self.flags[s - 1]));
        v
    }

    /// Canonical order: descending strings, sector (uu < ub < bu < bb),
    /// arc list, then blob decorations with unblobbed first.
    pub fn order_key(&self, mode: BoundaryMode) -> impl Ord {
        (
            self.sector(mode).order_key(),
            self.arcs(),
            self.strings(),
            self.link_flags(),
        )
    }

    pub(crate) fn set_flags(&mut self, i: usize, f: u8) {
        self.flags[i] = f;
        if !self.is_string(i) {
            let p = self.site[i] as usize;
            self.flags[p] = f;
        }
    }

    pub(crate) fn set_arc(&mut self, a: usize, b: usize, f: u8) {
        self.site[a] = b as u8;
        self.site[b] = a as u8;
        self.flags[a] = f;
        self.flags[b] = f;
    }

    pub(crate) fn set_string(&mut self, a: usize, f: u8) {
        self.site[a] = STRING;
        self.flags[a] = f;
    }
}

fn marker(f: u8) -> &'static str {
    match f {
        0 => "",
        BLOB_L => "o",
        BLOB_R => "s",
        _ => "os",
    }
}

/// Text form: `(`/`)` for arcs, `|` for strings; a left blob is written `o`
/// and a right blob `s` immediately before the first site of the link.
/// Example: `o()|()s|`.
impl fmt::Display for ReducedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            if self.is_string(i) {
                write!(f, "{}|", marker(self.flags[i]))?;
            } else if (self.site[i] as usize) > i {
                write!(f, "{}(", marker(self.flags[i]))?;
            } else {
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

/// Serialized as its string form, e.g. "o()||".
impl Serialize for ReducedState {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl FromStr for ReducedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let mut site = Vec::new();
        let mut flags = Vec::new();
        let mut pending = 0u8;
        let mut stack = Vec::new();
        for ch in s.chars() {
            match ch {
                'o' => pending |= BLOB_L,
                's' => pending |= BLOB_R,
                '|' => {
                    site.push(STRING);
                    flags.push(pending);
                    pending = 0;
                }
                '(' => {
                    stack.push(site.len());
                    site.push(0);
                    flags.push(pending);
                    pending = 0;
                }
                ')' => {
                    let a = stack.pop().ok_or_else(bad)?;
                    let b = site.len();
                    site.push(a as u8);
                    site[a] = b as u8;
                    flags.push(flags[a]);
                }
                _ => return Err(bad()),
            }
        }
        if !stack.is_empty() || pending != 0 || site.is_empty() {
            return Err(bad());
        }
        Ok(ReducedState { site, flags })
    }
}

/// All undecorated link patterns on `n` sites with `l` strings and no arc
/// enclosing a string.
pub(crate) fn link_patterns(n: usize, l: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, l: usize, cur: &mut Vec<u8>, stack: &mut Vec<usize>, placed: usize, out: &mut Vec<Vec<u8>>) {
        let i = cur.len();
        if i == n {
            if stack.is_empty() && placed == l {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = n - i;
        let need = stack.len() + (l - placed);
        if need > remaining || (remaining - need) % 2 == 1 {
            return;
        }
        if stack.is_empty() && placed < l {
            cur.push(STRING);
            rec(n, l, cur, stack, placed + 1, out);
            cur.pop();
        }
        if let Some(&open) = stack.last() {
            stack.pop();
            cur[open] = i as u8;
            cur.push(open as u8);
            rec(n, l, cur, stack, placed, out);
            cur.pop();
            stack.push(open);
        }
        stack.push(i);
        cur.push(0);
        rec(n, l, cur, stack, placed, out);
        cur.pop();
        stack.pop();
    }
    let mut out = Vec::new();
    if l <= n && (n - l) % 2 == 0 {
        rec(n, l, &mut Vec::with_capacity(n), &mut Vec::new(), 0, &mut out);
    }
    out
}

/// Blob assignments compatible with the exposure rules of `mode`, restricted
/// to `sector`.
fn decorate(pattern: &[u8], mode: BoundaryMode, sector: SectorLabel, out: &mut Vec<ReducedState>) {
    let base = ReducedState { site: pattern.to_vec(), flags: vec![0; pattern.len()] };
    let ext = base.exterior_links();
    let strings = base.num_strings();
    // candidate flag sets per exterior link
    let mut choices: Vec<Vec<u8>> = Vec::with_capacity(ext.len());
    for &i in &ext {
        let mut c = vec![0u8];
        let le = mode.has_left() && base.left_exposed(i + 1);
        let re = mode.has_right() && base.right_exposed(i + 1);
        if le {
            c.push(BLOB_L);
        }
        if re {
            c.push(BLOB_R);
        }
        if le && re && strings == 0 && mode.allows_double() {
            c.push(BLOB_LR);
        }
        choices.push(c);
    }
    let mut idx = vec![0usize; ext.len()];
    loop {
        let mut s = base.clone();
        for (k, &i) in ext.iter().enumerate() {
            s.set_flags(i, choices[k][idx[k]]);
        }
        if s.is_valid(mode) && s.sector(mode) == sector {
            out.push(s);
        }
        let mut k = 0;
        loop {
            if k == ext.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Complete, duplicate-free list of reduced states of `sector`, in canonical order.
pub fn enumerate_reduced(n: usize, mode: BoundaryMode, sector: SectorLabel) -> Result<Vec<ReducedState>> {
    sector.validate(n, mode)?;
    let mut out = Vec::new();
    for p in link_patterns(n, sector.strings) {
        decorate(&p, mode, sector, &mut out);
    }
    out.sort_by_cached_key(|s| s.order_key(mode));
    Ok(out)
}

/// All reduced states for `mode` on `n` sites, grouped by sector in canonical order.
pub fn enumerate_all(n: usize, mode: BoundaryMode) -> Result<Vec<(SectorLabel, Vec<ReducedState>)>> {
    sectors(n, mode, false)
        .into_iter()
        .map(|s| enumerate_reduced(n, mode, s).map(|v| (s, v)))
        .collect()
}

pub fn binomial(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    num_integer::binomial(n as u128, k as u128)
}

/// Closed-form sector dimension (binomial formulas or E-series coefficients).
pub fn closed_form_dimension(n: usize, mode: BoundaryMode, sector: SectorLabel) -> Result<u128> {
    closed_form_dimension_with(&SeriesCtx::new(n / 2 + 2), n, mode, sector)
}

pub(crate) fn closed_form_dimension_with(ctx: &SeriesCtx, n: usize, mode: BoundaryMode, sector: SectorLabel) -> Result<u128> {
    sector.validate(n, mode)?;
    let (ni, l) = (n as i64, sector.strings as i64);
    Ok(match mode.kind {
        Kind::ZeroB => binomial(ni, (ni + l) / 2) - binomial(ni, 1 + (ni + l) / 2),
        Kind::OneB => {
            let b = sector.left == Some(Blob::B);
            match (mode.lambda_l, b) {
                (true, _) => binomial(ni, (ni - l) / 2),
                (false, false) => binomial(ni - 1, (ni - l) / 2 - 1),
                (false, true) => binomial(ni - 1, (ni - l) / 2),
            }
        }
        Kind::TwoB => {
            let gamma = Blob::from_flag(!mode.lambda_l);
            let delta = Blob::from_flag(!mode.lambda_r);
            let fam = Family::two_b(sector.left.unwrap(), sector.right.unwrap(), gamma, delta);
            let v = e_coefficient(ctx, fam, n / 2, sector.strings / 2, mode.nb)?;
            u128::try_from(v).map_err(|_| Error::Unsupported("negative dimension".into()))?
        }
    })
}

/// Number of dilute states: coefficient of z̃^n in z̃^l f̃^(l+1).
pub fn dilute_dimension(n: usize, l: usize) -> u128 {
    if l > n {
        return 0;
    }
    let ctx = SeriesCtx::new(n + 2);
    let s = ctx.f_dilute.pow(l as u32 + 1);
    u128::try_from(s.coeff(n - l)).unwrap_or(0)
}

/// A slab state: bottom and top reduced states with their strings glued in order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FullState {
    pub bottom: ReducedState,
    pub top: ReducedState,
}

pub fn pair_states(bottom: &ReducedState, top: &ReducedState) -> Result<FullState> {
    let (b, t) = (bottom.num_strings(), top.num_strings());
    if b != t || bottom.n() != top.n() {
        return Err(Error::StringMismatch(b, t));
    }
    Ok(FullState { bottom: bottom.clone(), top: top.clone() })
}

/// Every slab state of a sector: all ordered pairs of its reduced states.
pub fn full_states(n: usize, mode: BoundaryMode, sector: SectorLabel) -> Result<Vec<FullState>> {
    let red = enumerate_reduced(n, mode, sector)?;
    let mut out = Vec::with_capacity(red.len() * red.len());
    for b in &red {
        for t in &red {
            out.push(pair_states(b, t)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> ReducedState {
        s.parse().unwrap()
    }

    #[test]
    fn zero_boundary_n4_sectors() {
        let m = BoundaryMode::zero();
        let counts: Vec<usize> = [0, 2, 4]
            .iter()
            .map(|&l| enumerate_reduced(4, m, SectorLabel::zero(l)).unwrap().len())
            .collect();
        assert_eq!(counts, vec![2, 3, 1]);
        assert_eq!(closed_form_dimension(4, m, SectorLabel::zero(2)).unwrap(), 3);
    }

    #[test]
    fn canonical_order_of_small_sectors() {
        let m = BoundaryMode::zero();
        let names: Vec<String> = enumerate_reduced(4, m, SectorLabel::zero(2))
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names, vec!["()||", "|()|", "||()"]);
        let names: Vec<String> = enumerate_reduced(6, m, SectorLabel::zero(0))
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names, vec!["()()()", "()(())", "(())()", "(()())", "((()))"]);
        let names: Vec<String> = enumerate_reduced(4, BoundaryMode::one(true), SectorLabel::one(2, Blob::B))
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names, vec!["()o||", "o()o||", "o|()|", "o||()"]);
    }

    #[test]
    fn one_boundary_restricted_n4() {
        let m = BoundaryMode::one(false);
        assert_eq!(enumerate_reduced(4, m, SectorLabel::one(2, Blob::B)).unwrap().len(), 3);
        assert_eq!(enumerate_reduced(4, m, SectorLabel::one(2, Blob::U)).unwrap().len(), 1);
        assert_eq!(closed_form_dimension(4, m, SectorLabel::one(2, Blob::B)).unwrap(), 3);
        assert!(enumerate_reduced(4, m, SectorLabel::one(4, Blob::U)).unwrap().is_empty());
    }

    #[test]
    fn two_boundary_restricted_n4() {
        let m = BoundaryMode::two(false, false, true);
        let bb = SectorLabel::two(2, Blob::B, Blob::B);
        assert_eq!(enumerate_reduced(4, m, bb).unwrap().len(), 3);
        assert_eq!(closed_form_dimension(4, m, bb).unwrap(), 3);
        let total: usize = enumerate_all(4, BoundaryMode::two(false, false, false))
            .unwrap()
            .iter()
            .map(|(_, v)| v.len())
            .sum();
        assert_eq!(total, 7);
    }

    #[test]
    fn dilute_counts() {
        let motz: Vec<u128> = (0..=5).map(|n| dilute_dimension(n, 0)).collect();
        assert_eq!(motz, vec![1, 1, 2, 4, 9, 21]);
        assert_eq!(dilute_dimension(2, 0), 2);
        for n in 0..8 {
            assert_eq!(dilute_dimension(n, n), 1);
        }
    }

    #[test]
    fn full_state_counts() {
        let m = BoundaryMode::zero();
        assert_eq!(full_states(4, m, SectorLabel::zero(2)).unwrap().len(), 9);
        assert_eq!(full_states(4, m, SectorLabel::zero(4)).unwrap().len(), 1);
        let total: usize = [0, 2, 4]
            .iter()
            .map(|&l| full_states(4, m, SectorLabel::zero(l)).unwrap().len())
            .sum();
        assert_eq!(total, 14);
        let a = st("()||");
        let b = st("(())");
        assert!(matches!(pair_states(&a, &b), Err(Error::StringMismatch(2, 0))));
    }

    #[test]
    fn text_roundtrip_and_exposure() {
        for s in ["o()|()s|", "os(())", "o(())()s()", "|||"] {
            assert_eq!(st(s).to_string(), s);
        }
        let s = st("(())|()|()");
        assert!(s.left_exposed(1));
        assert!(!s.left_exposed(2));
        assert!(s.left_exposed(5));
        assert!(!s.left_exposed(6));
        assert!(s.right_exposed(9));
        assert!(s.right_exposed(8));
        assert!(!s.right_exposed(5));
    }

    #[test]
    fn invalid_inputs() {
        let m = BoundaryMode::one(true);
        assert!(enumerate_reduced(5, m, SectorLabel::one(1, Blob::U)).is_err());
        assert!(enumerate_reduced(4, m, SectorLabel::one(0, Blob::B)).is_err());
        assert!(enumerate_reduced(4, m, SectorLabel::zero(2)).is_err());
        assert!(enumerate_reduced(4, BoundaryMode::zero(), SectorLabel::zero(3)).is_err());
        assert!(!st("(o())").is_valid(m));
        assert!(!st("|o|").is_valid(m));
        assert!(!st("os()").is_valid(BoundaryMode::two(true, true, false)));
        assert!(st("os()").is_valid(BoundaryMode::two(true, true, true)));
        assert!(!st("s()o()").is_valid(BoundaryMode::two(true, true, true)));
    }
}
