//! Transfer matrices on reduced states, sector blocks and characters, and
//! annulus partition functions from full slab diagrams.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{act, loop_var, Action, Generator};
use crate::amplitudes::{sector_monomial, solve_amplitudes};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Var};
use crate::report::Report;
use crate::states::{enumerate_all, BoundaryMode, Kind, ReducedState, SectorLabel, BLOB_L, BLOB_LR, BLOB_R};

/// One factor of the transfer matrix, in order of application.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Factor {
    /// I + e_i
    Bulk(usize),
    /// λ_l I + b_l with λ_l ∈ {0, 1}
    Left(bool),
    Right(bool),
}

/// Factors of T, first applied first: left boundary, odd e_i, right
/// boundary, even e_i.
pub fn factors(n: usize, mode: BoundaryMode) -> Vec<Factor> {
    let mut out = Vec::new();
    if mode.has_left() {
        out.push(Factor::Left(mode.lambda_l));
    }
    out.extend((1..n).step_by(2).map(Factor::Bulk));
    if mode.has_right() {
        out.push(Factor::Right(mode.lambda_r));
    }
    out.extend((2..n).step_by(2).map(Factor::Bulk));
    out
}

/// Anything the generators act on.
pub trait Acted: Clone + Eq + std::hash::Hash {
    fn act_on(&self, g: Generator, mode: BoundaryMode) -> Result<Action<Self>>;
}

impl Acted for ReducedState {
    fn act_on(&self, g: Generator, mode: BoundaryMode) -> Result<Action<Self>> {
        act(g, self, mode)
    }
}

/// Linear combination of diagrams.
pub type Combo<S> = HashMap<S, Poly>;

fn push<S: Acted>(c: &mut Combo<S>, s: S, w: Poly) {
    let e = c.entry(s).or_insert_with(Poly::zero);
    *e += &w;
}

fn apply_gen<S: Acted>(g: Generator, c: &Combo<S>, mode: BoundaryMode, out: &mut Combo<S>) -> Result<()> {
    for (s, w) in c {
        if let Action::Image(t, lp) = s.act_on(g, mode)? {
            let w = match lp {
                Some(f) => w * &Poly::var(loop_var(f)),
                None => w.clone(),
            };
            push(out, t, w);
        }
    }
    Ok(())
}

/// Apply one factor to a combination.
pub fn apply_factor<S: Acted>(f: Factor, c: Combo<S>, mode: BoundaryMode) -> Result<Combo<S>> {
    let (g, keep) = match f {
        Factor::Bulk(i) => (Generator::E(i), true),
        Factor::Left(lam) => (Generator::BlobL, lam),
        Factor::Right(lam) => (Generator::BlobR, lam),
    };
    let mut out = if keep { c.clone() } else { Combo::new() };
    apply_gen(g, &c, mode, &mut out)?;
    out.retain(|_, w| !w.is_zero());
    Ok(out)
}

/// Apply one full time step T.
pub fn apply_transfer<S: Acted>(c: Combo<S>, n: usize, mode: BoundaryMode) -> Result<Combo<S>> {
    factors(n, mode).into_iter().try_fold(c, |acc, f| apply_factor(f, acc, mode))
}

/// Sparse T on the reduced states of a mode. With λ = 0 the image is
/// projected back by the pinned blobs, i.e. the matrix is P T P.
#[derive(Clone, Debug, Serialize)]
pub struct TransferMatrix {
    pub n: usize,
    pub mode: BoundaryMode,
    pub basis: Vec<ReducedState>,
    pub sectors: Vec<SectorLabel>,
    /// (row, col) -> entry; row is the image state
    pub entries: BTreeMap<(usize, usize), Poly>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorBlock {
    pub label: SectorLabel,
    pub states: Vec<ReducedState>,
    pub matrix: Vec<Vec<Poly>>,
}

fn check_mode(n: usize, mode: BoundaryMode) -> Result<()> {
    if n == 0 || (n % 2 == 1 && mode.kind != Kind::ZeroB) {
        return Err(Error::InvalidMode(format!("N={} not supported for {}", n, mode)));
    }
    Ok(())
}

pub fn build_transfer(n: usize, mode: BoundaryMode) -> Result<TransferMatrix> {
    check_mode(n, mode)?;
    let groups = enumerate_all(n, mode)?;
    let mut basis = Vec::new();
    let mut sectors = Vec::new();
    for (label, states) in groups {
        for s in states {
            basis.push(s);
            sectors.push(label);
        }
    }
    let index: HashMap<&ReducedState, usize> = basis.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut projectors = Vec::new();
    if mode.pinned_left() {
        projectors.push(Factor::Left(false));
    }
    if mode.pinned_right() {
        projectors.push(Factor::Right(false));
    }
    let columns: Vec<Result<Vec<(usize, Poly)>>> = basis
        .par_iter()
        .map(|s| {
            let mut c = Combo::from([(s.clone(), Poly::one())]);
            c = apply_transfer(c, n, mode)?;
            for &p in &projectors {
                c = apply_factor(p, c, mode)?;
            }
            c.into_iter()
                .map(|(t, w)| {
                    let r = *index
                        .get(&t)
                        .ok_or_else(|| Error::Unsupported(format!("image {} outside the basis", t)))?;
                    Ok((r, w))
                })
                .collect()
        })
        .collect();
    let mut entries = BTreeMap::new();
    for (col, c) in columns.into_iter().enumerate() {
        for (row, w) in c? {
            entries.insert((row, col), w);
        }
    }
    Ok(TransferMatrix { n, mode, basis, sectors, entries })
}

impl TransferMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Poly {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Poly::zero)
    }

    /// Every nonzero entry maps a state to one of equal or later sector
    /// (fewer strings, or more blobbed outer strings).
    pub fn is_block_lower_triangular(&self) -> bool {
        self.entries.keys().all(|&(r, c)| {
            let (a, b) = (self.sectors[r], self.sectors[c]);
            a == b || a.strings < b.strings || (a.strings == b.strings && a > b)
        })
    }

    pub fn sector_block(&self, label: SectorLabel) -> Result<SectorBlock> {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.sectors[i] == label).collect();
        if idx.is_empty() {
            return Err(Error::EmptySector(label.to_string()));
        }
        let matrix = idx.iter().map(|&r| idx.iter().map(|&c| self.entry(r, c)).collect()).collect();
        let states = idx.iter().map(|&i| self.basis[i].clone()).collect();
        Ok(SectorBlock { label, states, matrix })
    }

    pub fn sector_labels(&self) -> Vec<SectorLabel> {
        let mut v = self.sectors.clone();
        v.dedup();
        v
    }
}

pub fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Poly::zero(); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += &(aik * &b[k][j]);
                }
            }
        }
    }
    out
}

/// K = Tr(block^M) over the reduced states of the block.
pub fn character(block: &SectorBlock, m: usize) -> Result<Poly> {
    if m == 0 {
        return Err(Error::Unsupported("M must be positive".into()));
    }
    let mut p = block.matrix.clone();
    for _ in 1..m {
        p = mat_mul(&p, &block.matrix);
    }
    Ok((0..p.len()).map(|i| p[i][i].clone()).sum())
}

/// Slab diagram on 2N points: bottom row 0..N, top row N..2N. Each point
/// stores its partner and the blob bits of its link.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FullDiagram {
    partner: Vec<u8>,
    flags: Vec<u8>,
}

impl FullDiagram {
    /// Every bottom point joined to the top point above it.
    pub fn identity(n: usize) -> Self {
        let mut partner = vec![0u8; 2 * n];
        for i in 0..n {
            partner[i] = (n + i) as u8;
            partner[n + i] = i as u8;
        }
        FullDiagram { partner, flags: vec![0; 2 * n] }
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    fn link(&mut self, a: usize, b: usize, f: u8) {
        self.partner[a] = b as u8;
        self.partner[b] = a as u8;
        self.flags[a] = f;
        self.flags[b] = f;
    }

    /// Number of links joining the bottom row to the top row.
    pub fn through_lines(&self) -> usize {
        let n = self.n();
        (0..n).filter(|&i| self.partner[i] as usize >= n).count()
    }

    /// Weight of closing the slab into an annulus: top i glued to bottom i.
    /// A loop is noncontractible iff its signed count of seam crossings is
    /// nonzero.
    pub fn closure_weight(&self, mode: BoundaryMode) -> Poly {
        let n = self.n();
        let mut seen = vec![false; 2 * n];
        let mut powers: BTreeMap<Var, u16> = BTreeMap::new();
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            let (mut p, mut flags, mut wind) = (start, 0u8, 0i32);
            loop {
                seen[p] = true;
                let q = self.partner[p] as usize;
                seen[q] = true;
                flags |= self.flags[p];
                // glue across the seam
                p = if q >= n {
                    wind += 1;
                    q - n
                } else {
                    wind -= 1;
                    q + n
                };
                if p == start {
                    break;
                }
            }
            let v = if wind == 0 {
                if flags == BLOB_LR && !mode.nb {
                    return Poly::zero();
                }
                loop_var(flags)
            } else {
                match flags {
                    0 => Var::Ell,
                    BLOB_L => Var::EllL,
                    BLOB_R => Var::EllR,
                    _ => Var::EllB,
                }
            };
            *powers.entry(v).or_insert(0) += 1;
        }
        let p: Vec<(Var, u16)> = powers.into_iter().collect();
        Poly::monomial(1, &p)
    }
}

impl Acted for FullDiagram {
    fn act_on(&self, g: Generator, mode: BoundaryMode) -> Result<Action<Self>> {
        let n = self.n();
        let dead = |f: u8| f == BLOB_LR && !mode.allows_double();
        let mut t = self.clone();
        match g {
            Generator::Identity => Ok(Action::Image(t, None)),
            Generator::BlobL | Generator::BlobR => {
                let (a, bit) = if g == Generator::BlobL { (n, BLOB_L) } else { (2 * n - 1, BLOB_R) };
                if (bit == BLOB_L && !mode.has_left()) || (bit == BLOB_R && !mode.has_right()) {
                    return Err(Error::GeneratorOutOfRange(g.to_string(), n));
                }
                let f = self.flags[a] | bit;
                if dead(f) {
                    return Ok(Action::Zero);
                }
                t.link(a, self.partner[a] as usize, f);
                Ok(Action::Image(t, None))
            }
            Generator::E(i) => {
                if i == 0 || i >= n {
                    return Err(Error::GeneratorOutOfRange(g.to_string(), n));
                }
                let (a, b) = (n + i - 1, n + i);
                let (pa, pb) = (self.partner[a] as usize, self.partner[b] as usize);
                if pa == b {
                    let f = self.flags[a];
                    if dead(f) {
                        return Ok(Action::Zero);
                    }
                    t.link(a, b, 0);
                    return Ok(Action::Image(t, Some(f)));
                }
                let f = self.flags[a] | self.flags[b];
                if dead(f) {
                    return Ok(Action::Zero);
                }
                t.link(pa, pb, f);
                t.link(a, b, 0);
                Ok(Action::Image(t, None))
            }
        }
    }
}

/// Z = <u| T^M |v> by evolving full diagrams from the identity.
pub fn partition_function(n: usize, m: usize, mode: BoundaryMode) -> Result<Poly> {
    check_mode(n, mode)?;
    if n % 2 == 1 {
        return Err(Error::Unsupported("partition functions need even N".into()));
    }
    let mut c: Combo<FullDiagram> = Combo::from([(FullDiagram::identity(n), Poly::one())]);
    for _ in 0..m {
        c = apply_transfer(c, n, mode)?;
    }
    let mut z = Poly::zero();
    for (d, w) in c {
        z += &(&w * &d.closure_weight(mode));
    }
    Ok(z)
}

/// Noncontractible signature of a monomial: exponents of ℓ, ℓ_l, ℓ_r, ℓ_b.
fn ell_part(m: &Monomial) -> [u16; 4] {
    [m.exp(Var::Ell), m.exp(Var::EllL), m.exp(Var::EllR), m.exp(Var::EllB)]
}

/// Terms of Z whose noncontractible-loop monomial is exactly that of `sector`.
pub fn constrained_partition(z: &Poly, kind: Kind, sector: SectorLabel) -> Poly {
    let sig = sector_monomial(kind, (sector.left, sector.right), sector.strings / 2);
    let want = ell_part(sig.leading().unwrap().0);
    Poly::from_terms(z.terms().filter(|(m, _)| ell_part(m) == want).map(|(m, c)| (*m, c.clone())))
}

/// Z from diagrams against Z = Σ D K, per constrained sector and in total.
pub fn verify_master_identity(n: usize, m: usize, mode: BoundaryMode) -> Result<Report> {
    let mut rep = Report::new();
    let z = partition_function(n, m, mode)?;
    let t = build_transfer(n, mode)?;
    let table = solve_amplitudes(mode.kind, mode.nb, n)?;
    let mut chars: HashMap<SectorLabel, Poly> = HashMap::new();
    for label in t.sector_labels() {
        chars.insert(label, character(&t.sector_block(label)?, m)?);
    }
    let mut parts = Poly::zero();
    for gamma in &table.labels {
        let j = gamma.strings / 2;
        let mono = sector_monomial(mode.kind, (gamma.left, gamma.right), j);
        let mut zj = Poly::zero();
        for (alpha, k) in chars.iter() {
            let d = table.coefficient(*alpha, *gamma);
            if d != BigInt::from(0) {
                zj += &(&mono * k).scale(&d);
            }
        }
        let got = constrained_partition(&z, mode.kind, *gamma);
        parts += &got;
        rep.expect_eq(format!("{} N={} M={} Z[{}]", mode, n, m, gamma), &got, &zj);
    }
    rep.expect_eq(format!("{} N={} M={} sectors sum to Z", mode, n, m), &parts, &z);
    let mut dk = Poly::zero();
    for (alpha, k) in &chars {
        dk += &(table.amplitude(alpha).cloned().unwrap_or_else(Poly::zero) * k);
    }
    rep.expect_eq(format!("{} N={} M={} Z = sum D K", mode, n, m), &dk, &z);
    Ok(rep)
}

/// Diagram evolution against the lattice loop tracer.
pub fn verify_partition_oracle(n: usize, m: usize, mode: BoundaryMode) -> Result<Report> {
    let z = partition_function(n, m, mode)?;
    let side = |has: bool, lam: bool| has.then_some(lam);
    let lat = crate::oracle::lattice_partition(
        n,
        m,
        side(mode.has_left(), mode.lambda_l),
        side(mode.has_right(), mode.lambda_r),
        mode.nb,
    );
    let mut rep = Report::new();
    rep.expect_eq(format!("{} N={} M={} Z diagram vs lattice", mode, n, m), &z, &lat);
    rep.push(
        format!("{} N={} M={} no ell_b", mode, n, m),
        z.degree_in(Var::EllB).unwrap_or(0) == 0,
        None,
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::Blob;

    #[test]
    fn zero_b_n2() {
        let t = build_transfer(2, BoundaryMode::zero()).unwrap();
        let arc = t.basis.iter().position(|s| s.to_string() == "()").unwrap();
        assert_eq!(t.entry(arc, arc), Poly::parse("1 + n").unwrap());
        let k = character(&t.sector_block(SectorLabel::zero(0)).unwrap(), 2).unwrap();
        assert_eq!(k, Poly::parse("n^2 + 2*n + 1").unwrap());
        assert_eq!(character(&t.sector_block(SectorLabel::zero(2)).unwrap(), 5).unwrap(), Poly::one());
        assert_eq!(partition_function(2, 1, BoundaryMode::zero()).unwrap(), Poly::parse("ell^2 + n").unwrap());
    }

    #[test]
    fn one_b_restricted_n2() {
        let mode = BoundaryMode::one(false);
        let t = build_transfer(2, mode).unwrap();
        let arc = t.basis.iter().position(|s| s.to_string() == "o()").unwrap();
        assert_eq!(t.entry(arc, arc), Poly::parse("1 + n_l").unwrap());
    }

    #[test]
    fn block_shapes() {
        let t = build_transfer(4, BoundaryMode::zero()).unwrap();
        assert_eq!(t.sector_block(SectorLabel::zero(2)).unwrap().states.len(), 3);
        assert!(t.is_block_lower_triangular());
        let t = build_transfer(4, BoundaryMode::one(false)).unwrap();
        assert_eq!(t.sector_block(SectorLabel::one(2, Blob::U)).unwrap().states.len(), 1);
        let t = build_transfer(4, BoundaryMode::two(false, false, false)).unwrap();
        assert_eq!(t.sector_block(SectorLabel::two(2, Blob::B, Blob::B)).unwrap().states.len(), 3);
        assert!(t.is_block_lower_triangular());
        assert!(t.sector_block(SectorLabel::two(4, Blob::U, Blob::U)).is_err());
    }

    #[test]
    fn two_b_contains_ell_l_ell_r() {
        let z = partition_function(2, 1, BoundaryMode::two(false, false, false)).unwrap();
        let m = Monomial::one().mul(&Monomial::var(Var::EllL)).mul(&Monomial::var(Var::EllR));
        assert!(z.coeff(&m) != BigInt::from(0), "{}", z);
    }

    #[test]
    fn lattice_agrees() {
        for mode in BoundaryMode::all_variants() {
            for (n, m) in [(2, 1), (2, 3), (4, 1), (4, 2)] {
                let r = verify_partition_oracle(n, m, mode).unwrap();
                assert!(r.all_pass(), "{}", r.summary());
            }
        }
    }

    #[test]
    fn master_identity_small() {
        for mode in BoundaryMode::all_variants() {
            for (n, m) in [(2, 1), (2, 2), (4, 1), (4, 2)] {
                let r = verify_master_identity(n, m, mode).unwrap();
                assert!(r.all_pass(), "{}", r.summary());
            }
        }
    }
}
