//! E-coefficient families, the inversion K -> Z giving the amplitude
//! coefficients D(k, j), Chebyshev closed forms, sum rules, fusion and
//! reduction identities, and the hyperbolic parametrizations.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Poly, Var};
use crate::report::Report;
use crate::series::{Series, SeriesCtx};
use crate::states::{binomial, closed_form_dimension_with, dilute_dimension, sectors, Blob, BoundaryMode, Kind, SectorLabel};

/// Generating-function family for E(j, k).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Family {
    Zero,
    /// σ = 1..3
    One(u8),
    /// σ = 1..6
    Two(u8),
}

impl Family {
    /// E^α_γ for the one-boundary case.
    pub fn one_b(alpha: Blob, gamma: Blob) -> Family {
        match (alpha, gamma) {
            (_, Blob::U) => Family::One(1),
            (Blob::U, Blob::B) => Family::One(2),
            (Blob::B, Blob::B) => Family::One(3),
        }
    }

    /// E^{αβ}_{γδ}; all sixteen label combinations fall into six families.
    pub fn two_b(alpha: Blob, beta: Blob, gamma: Blob, delta: Blob) -> Family {
        use Blob::*;
        let s = match (gamma, delta) {
            (U, U) => 1,
            (U, B) => {
                if beta == U {
                    2
                } else {
                    4
                }
            }
            (B, U) => {
                if alpha == U {
                    2
                } else {
                    4
                }
            }
            (B, B) => match (alpha, beta) {
                (U, U) => 3,
                (B, B) => 6,
                _ => 5,
            },
        };
        Family::Two(s)
    }

    /// Family for a K-sector `alpha` against a Z-sector `gamma`.
    pub fn for_labels(kind: Kind, alpha: (Option<Blob>, Option<Blob>), gamma: (Option<Blob>, Option<Blob>)) -> Family {
        match kind {
            Kind::ZeroB => Family::Zero,
            Kind::OneB => Family::one_b(alpha.0.unwrap(), gamma.0.unwrap()),
            Kind::TwoB => Family::two_b(alpha.0.unwrap(), alpha.1.unwrap(), gamma.0.unwrap(), gamma.1.unwrap()),
        }
    }
}

/// 1 + z e f
fn one_plus_zef(ctx: &SeriesCtx) -> Series {
    Series::one(ctx.order).add(&ctx.e.mul(&ctx.f).shift(1))
}

/// Generating function E^(k)(z) of a family. With `nb` the first three
/// two-boundary families use the doubly-blobbed variants at k = 0.
pub fn e_series(ctx: &SeriesCtx, fam: Family, k: usize, nb: bool) -> Result<Series> {
    let ki = k as i64;
    let e2 = || ctx.e.mul(&ctx.e);
    Ok(match fam {
        Family::Zero => ctx.f_pow(2 * ki + 1).shift(k),
        Family::One(1) => ctx.e.mul(&ctx.f_pow(2 * ki)).shift(k),
        Family::One(2) => ctx.e.mul(&ctx.f_pow(2 * ki + 1)).shift(k + 1),
        Family::One(3) => ctx.f_pow(2 * ki).mul(&one_plus_zef(ctx)).shift(k),
        Family::Two(s @ 1..=3) if k == 0 && nb => match s {
            1 => ctx.geom4.clone(),
            2 => ctx.geom4.shift(1).scale(2),
            _ => ctx.geom4.shift(1),
        },
        Family::Two(1) => e2().mul(&ctx.f_pow(2 * ki - 1)).shift(k),
        Family::Two(2) => e2().mul(&ctx.f_pow(2 * ki)).shift(k + 1),
        Family::Two(3) => e2().mul(&ctx.f_pow(2 * ki + 1)).shift(k + 2),
        Family::Two(s @ 4..=6) if k == 0 => {
            return Err(Error::Unsupported(format!("E{} needs at least one pair of strings", s)))
        }
        Family::Two(4) => ctx.e.mul(&ctx.f_pow(2 * ki - 1)).mul(&one_plus_zef(ctx)).shift(k),
        Family::Two(5) => ctx.e.mul(&ctx.f_pow(2 * ki)).mul(&one_plus_zef(ctx)).shift(k + 1),
        Family::Two(6) => {
            let zef = ctx.e.mul(&ctx.f).shift(1);
            let inner = Series::one(ctx.order).add(&zef.scale(2)).add(&zef.mul(&zef));
            ctx.f_pow(2 * ki - 1).mul(&inner).shift(k)
        }
        other => return Err(Error::Unsupported(format!("no generating function {:?}", other))),
    })
}

/// E(j, k): the z^j coefficient of E^(k)(z).
pub fn e_coefficient(ctx: &SeriesCtx, fam: Family, j: usize, k: usize, nb: bool) -> Result<BigInt> {
    if j < ctx.order {
        Ok(e_series(ctx, fam, k, nb)?.coeff(j))
    } else {
        let big = SeriesCtx::new(j + 1);
        Ok(e_series(&big, fam, k, nb)?.coeff(j))
    }
}

/// Binomial forms of the zero- and one-boundary coefficients.
pub fn e_binomial(fam: Family, j: usize, k: usize) -> Option<u128> {
    let (j, k) = (j as i64, k as i64);
    match fam {
        Family::Zero => Some(binomial(2 * j, j + k) - binomial(2 * j, j + 1 + k)),
        Family::One(1) => Some(binomial(2 * j, j - k)),
        Family::One(2) => Some(binomial(2 * j - 1, j - k - 1)),
        // C(-1, 0) = 1 at j = k = 0
        Family::One(3) if j == k => Some(1),
        Family::One(3) => Some(binomial(2 * j - 1, j - k)),
        _ => None,
    }
}

/// U_l(t/2), via U_n = t U_{n-1} - U_{n-2}. Zero for negative l.
pub fn chebyshev_u_half(l: i64, t: &Poly) -> Poly {
    if l < 0 {
        return Poly::zero();
    }
    let (mut a, mut b) = (Poly::one(), t.clone());
    if l == 0 {
        return a;
    }
    for _ in 1..l {
        let c = t * &b - &a;
        a = b;
        b = c;
    }
    b
}

/// U_l(x) for a polynomial argument.
pub fn chebyshev_u(l: i64, x: &Poly) -> Poly {
    chebyshev_u_half(l, &x.scale(&BigInt::from(2)))
}

pub fn chebyshev_u_f64(l: i64, x: f64) -> f64 {
    if l < 0 {
        return 0.0;
    }
    let (mut a, mut b) = (1.0, 2.0 * x);
    if l == 0 {
        return a;
    }
    for _ in 1..l {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}

fn ell() -> Poly {
    Poly::var(Var::Ell)
}

fn u(l: i64) -> Poly {
    chebyshev_u_half(l, &ell())
}

/// Closed-form amplitude D_L in ℓ, ℓ_l, ℓ_r. `left`/`right` are the sector
/// letters (None where the boundary is absent). Uses U_n = 0 for n < 0.
pub fn closed_form_amplitude(kind: Kind, l: i64, left: Option<Blob>, right: Option<Blob>, nb: bool) -> Poly {
    let ll = Poly::var(Var::EllL);
    let lr = Poly::var(Var::EllR);
    let one = Poly::one();
    match kind {
        Kind::ZeroB => u(l),
        Kind::OneB => match left.unwrap_or(Blob::U) {
            Blob::U => u(l) - &ll * &u(l - 1),
            Blob::B => &ll * &u(l - 1) - u(l - 2),
        },
        Kind::TwoB => {
            use Blob::*;
            let lsum = &ll + &lr;
            let lprod = &ll * &lr;
            match (left.unwrap_or(U), right.unwrap_or(U)) {
                (U, U) => u(l) - &lsum * &u(l - 1) + &lprod * &u(l - 2),
                (U, B) => &lr * &u(l - 1) - (&one + &lprod) * u(l - 2) + &ll * &u(l - 3),
                (B, U) => &ll * &u(l - 1) - (&one + &lprod) * u(l - 2) + &lr * &u(l - 3),
                (B, B) if l == 2 && nb => lprod - one,
                (B, B) => &lprod * &u(l - 2) - &lsum * &u(l - 3) + u(l - 4),
            }
        }
    }
}

/// Noncontractible-loop monomial attached to Z-sector `gamma` with 2j lines.
pub fn sector_monomial(kind: Kind, gamma: (Option<Blob>, Option<Blob>), j: usize) -> Poly {
    use Blob::*;
    let e = 2 * j as u16;
    match (kind, gamma) {
        (Kind::ZeroB, _) | (Kind::OneB, (Some(U), _)) | (Kind::TwoB, (Some(U), Some(U))) => {
            Poly::monomial(1, &[(Var::Ell, e)])
        }
        (Kind::OneB, _) => Poly::monomial(1, &[(Var::EllL, 1), (Var::Ell, e - 1)]),
        (Kind::TwoB, (Some(U), Some(B))) => Poly::monomial(1, &[(Var::Ell, e - 1), (Var::EllR, 1)]),
        (Kind::TwoB, (Some(B), Some(U))) => Poly::monomial(1, &[(Var::EllL, 1), (Var::Ell, e - 1)]),
        (Kind::TwoB, _) => Poly::monomial(1, &[(Var::EllL, 1), (Var::Ell, e - 2), (Var::EllR, 1)]),
    }
}

/// The sector labels carrying amplitudes, k = 0..=n_max/2, in (k, label) order.
pub fn amplitude_labels(kind: Kind, n_max: usize) -> Vec<SectorLabel> {
    let mut out = Vec::new();
    for k in 0..=n_max / 2 {
        let l = 2 * k;
        match kind {
            Kind::ZeroB => out.push(SectorLabel::zero(l)),
            Kind::OneB => {
                out.push(SectorLabel::one(l, Blob::U));
                if k > 0 {
                    out.push(SectorLabel::one(l, Blob::B));
                }
            }
            Kind::TwoB => {
                out.push(SectorLabel::two(l, Blob::U, Blob::U));
                if k > 0 {
                    for (a, b) in [(Blob::U, Blob::B), (Blob::B, Blob::U), (Blob::B, Blob::B)] {
                        out.push(SectorLabel::two(l, a, b));
                    }
                }
            }
        }
    }
    out
}

/// D coefficients and assembled amplitudes for one boundary kind.
#[derive(Clone, Debug, Serialize)]
pub struct AmplitudeTable {
    pub kind: Kind,
    pub nb: bool,
    pub n_max: usize,
    pub labels: Vec<SectorLabel>,
    /// (K-sector α at 2k, Z-sector γ at 2j) -> D^α_γ(k, j); zero entries omitted.
    pub coeffs: BTreeMap<(SectorLabel, SectorLabel), BigInt>,
    pub amplitudes: BTreeMap<SectorLabel, Poly>,
}

impl AmplitudeTable {
    pub fn coefficient(&self, alpha: SectorLabel, gamma: SectorLabel) -> BigInt {
        self.coeffs.get(&(alpha, gamma)).cloned().unwrap_or_default()
    }

    pub fn amplitude(&self, sector: &SectorLabel) -> Option<&Poly> {
        self.amplitudes.get(sector)
    }
}

fn letters(s: &SectorLabel) -> (Option<Blob>, Option<Blob>) {
    (s.left, s.right)
}

/// The E matrix E[(α,k)][(γ,j)] on the given labels.
pub fn e_matrix(ctx: &SeriesCtx, kind: Kind, labels: &[SectorLabel], nb: bool) -> Result<Vec<Vec<BigInt>>> {
    let mut m = vec![vec![BigInt::zero(); labels.len()]; labels.len()];
    for (r, a) in labels.iter().enumerate() {
        for (c, g) in labels.iter().enumerate() {
            let (k, j) = (a.strings / 2, g.strings / 2);
            if j >= k {
                let fam = Family::for_labels(kind, letters(a), letters(g));
                m[r][c] = e_coefficient(ctx, fam, j, k, nb)?;
            }
        }
    }
    Ok(m)
}

/// Invert the K = E ζ system. Ordered by (k ascending, label descending) the
/// E matrix is upper unitriangular, so the inverse follows by back
/// substitution, i.e. by decreasing k.
pub fn solve_amplitudes(kind: Kind, nb: bool, n_max: usize) -> Result<AmplitudeTable> {
    let mut labels = amplitude_labels(kind, n_max);
    let ctx = SeriesCtx::new(n_max / 2 + 2);
    labels.sort_by(|a, b| a.strings.cmp(&b.strings).then(b.cmp(a)));
    let e = e_matrix(&ctx, kind, &labels, nb)?;
    let n = labels.len();
    for r in 0..n {
        if !e[r][r].is_one() || (0..r).any(|c| !e[r][c].is_zero()) {
            return Err(Error::Unsupported(format!("E matrix not unitriangular at {}", labels[r])));
        }
    }
    // W = E^-1, column by column
    let mut w = vec![vec![BigInt::zero(); n]; n];
    for c in 0..n {
        for r in (0..=c).rev() {
            let mut acc = if r == c { BigInt::one() } else { BigInt::zero() };
            for s in r + 1..=c {
                acc -= &e[r][s] * &w[s][c];
            }
            w[r][c] = acc;
        }
    }
    let mut coeffs = BTreeMap::new();
    let mut amplitudes = BTreeMap::new();
    for (c, alpha) in labels.iter().enumerate() {
        let mut amp = Poly::zero();
        for (r, gamma) in labels.iter().enumerate() {
            // ζ_γ(j) = Σ W[(γ,j),(α,k)] K_α(k)
            let d = &w[r][c];
            if d.is_zero() {
                continue;
            }
            amp += &sector_monomial(kind, letters(gamma), gamma.strings / 2).scale(d);
            coeffs.insert((*alpha, *gamma), d.clone());
        }
        amplitudes.insert(*alpha, amp);
    }
    let labels = amplitude_labels(kind, n_max);
    Ok(AmplitudeTable { kind, nb, n_max, labels, coeffs, amplitudes })
}

/// Solved amplitudes against the Chebyshev closed forms for every sector.
pub fn verify_amplitudes(kind: Kind, nb: bool, n_max: usize) -> Result<Report> {
    let table = solve_amplitudes(kind, nb, n_max)?;
    let mut rep = Report::new();
    for s in &table.labels {
        let closed = closed_form_amplitude(kind, s.strings as i64, s.left, s.right, nb);
        let name = format!("{:?} nb={} D[{}]", kind, nb as u8, s);
        rep.expect_eq(name, table.amplitude(s).unwrap(), &closed);
    }
    Ok(rep)
}

/// D(j,k) = (-1)^{j+k} C(j+k, 2k) for the zero-boundary coefficients.
pub fn verify_zero_b_coefficients(j_max: usize) -> Result<Report> {
    let table = solve_amplitudes(Kind::ZeroB, false, 2 * j_max)?;
    let mut rep = Report::new();
    for j in 0..=j_max {
        for k in 0..=j {
            let got = table.coefficient(SectorLabel::zero(2 * j), SectorLabel::zero(2 * k));
            let sign = if (j + k) % 2 == 0 { 1 } else { -1 };
            let want = BigInt::from(binomial((j + k) as i64, 2 * k as i64)) * sign;
            rep.expect_eq(format!("D({},{})", j, k), &got, &want);
        }
    }
    Ok(rep)
}

/// Inclusive summation range of j for a sector letter pair in the sum rule
/// selected by the λ flags.
fn sum_limits(n2: usize, mode: BoundaryMode, s: &SectorLabel) -> (usize, usize) {
    let lo = if s.left == Some(Blob::B) || s.right == Some(Blob::B) { 1 } else { 0 };
    let mut drop = 0;
    if mode.pinned_left() && s.left == Some(Blob::U) {
        drop += 1;
    }
    if mode.pinned_right() && s.right == Some(Blob::U) {
        drop += 1;
    }
    (lo, n2.saturating_sub(drop))
}

/// Σ d·D = (degrees of freedom per site)^N for one mode and size.
/// Also checks that d vanishes outside the summation limits.
pub fn verify_sum_rules(mode: BoundaryMode, n: usize) -> Result<Report> {
    let mut rep = Report::new();
    let ctx = SeriesCtx::new(n / 2 + 2);
    let ni = n as u16;
    let rhs = match mode.kind {
        Kind::ZeroB => Poly::monomial(1, &[(Var::Ell, ni)]),
        Kind::OneB if mode.lambda_l => Poly::monomial(1, &[(Var::Ell, ni)]),
        Kind::OneB => Poly::monomial(1, &[(Var::EllL, 1), (Var::Ell, ni - 1)]),
        Kind::TwoB => {
            let el = u16::from(mode.pinned_left());
            let er = u16::from(mode.pinned_right());
            Poly::monomial(1, &[(Var::EllL, el), (Var::Ell, ni - el - er), (Var::EllR, er)])
        }
    };
    let mut lhs = Poly::zero();
    let n2 = n / 2;
    for s in sectors(n, mode, true) {
        let d = closed_form_dimension_with(&ctx, n, mode, s)?;
        let j = s.strings / 2;
        let (lo, hi) = sum_limits(n2, mode, &s);
        if mode.kind != Kind::ZeroB && (j < lo || j > hi) {
            rep.push(format!("{} N={} d[{}] outside limits", mode, n, s), d == 0, Some(format!("d = {}", d)));
            continue;
        }
        let amp = closed_form_amplitude(mode.kind, s.strings as i64, s.left, s.right, mode.nb);
        lhs += &amp.scale(&BigInt::from(d));
    }
    rep.expect_eq(format!("{} N={} sum rule", mode, n), &lhs, &rhs);
    Ok(rep)
}

/// Σ_L d^dil_L(N) D_L = (ℓ + 1)^N, both parities of L.
pub fn verify_dilute_sum_rule(n: usize) -> Report {
    let mut lhs = Poly::zero();
    for l in 0..=n {
        lhs += &u(l as i64).scale(&BigInt::from(dilute_dimension(n, l)));
    }
    let rhs = (ell() + Poly::one()).pow(n as u32);
    let mut rep = Report::new();
    rep.expect_eq(format!("dilute N={}", n), &lhs, &rhs);
    rep
}

fn sub(p: &Poly, from: Var, to: Var) -> Poly {
    p.substitute(from, &Poly::var(to))
}

/// Recurrences, boundary reductions and the fusion identity for even L up to
/// `l_max`. Each identity is checked from the smallest L at which every
/// Chebyshev index it involves is ≥ -1; below that the U_{n<0} = 0 convention
/// differs from the analytic continuation the identities rely on.
pub fn verify_fusion(l_max: i64) -> Report {
    use Blob::*;
    let mut rep = Report::new();
    let d0 = |l: i64| closed_form_amplitude(Kind::ZeroB, l, None, None, false);
    let d1 = |l: i64, a: Blob| closed_form_amplitude(Kind::OneB, l, Some(a), None, false);
    let d2 = |l: i64, a: Blob, b: Blob| closed_form_amplitude(Kind::TwoB, l, Some(a), Some(b), false);
    let evens = |from: i64| (from..=l_max).step_by(2).filter(|l| l % 2 == 0);
    for l in evens(2) {
        rep.expect_eq(format!("D2*D{} recurrence", l), &(d0(2) * d0(l)), &(d0(l + 2) + d0(l) + d0(l - 2)));
        rep.expect_eq(format!("Du{} at ell_l=ell", l), &sub(&d1(l, U), Var::EllL, Var::Ell), &-d0(l - 2));
        rep.expect_eq(format!("Db{} at ell_l=ell", l), &sub(&d1(l, B), Var::EllL, Var::Ell), &d0(l));
        rep.expect_eq(format!("Dub{} at ell_r=ell", l), &sub(&d2(l, U, B), Var::EllR, Var::Ell), &d1(l, U));
        rep.expect_eq(format!("Duu{} at ell_r=ell", l), &sub(&d2(l, U, U), Var::EllR, Var::Ell), &-d1(l - 2, U));
        let lhs = sub(&d1(2, B), Var::EllL, Var::EllR) * d1(l, B);
        rep.expect_eq(format!("fusion L={}", l), &lhs, &(d2(l + 2, B, B) + d2(l, B, B) + d1(l - 2, B)));
    }
    for l in evens(4) {
        rep.expect_eq(format!("Dbb{} at ell_r=ell", l), &sub(&d2(l, B, B), Var::EllR, Var::Ell), &d1(l, B));
        rep.expect_eq(format!("Dbu{} at ell_r=ell", l), &sub(&d2(l, B, U), Var::EllR, Var::Ell), &-d1(l - 2, B));
    }
    // with n_b ≠ 0 the modified D^bb_2 obeys the reduction at L = 2 as well
    let bb2 = closed_form_amplitude(Kind::TwoB, 2, Some(B), Some(B), true);
    rep.expect_eq("Dbb2 (n_b) at ell_r=ell", &sub(&bb2, Var::EllR, Var::Ell), &d1(2, B));
    rep
}

/// Real parameters of the hyperbolic parametrization.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HyperbolicParams {
    pub alpha: f64,
    pub beta_l: f64,
    pub beta_r: f64,
    pub beta_b: f64,
}

impl HyperbolicParams {
    pub fn ell(&self) -> f64 {
        2.0 * self.alpha.cosh()
    }

    pub fn ell_l(&self) -> f64 {
        (self.alpha + self.beta_l).sinh() / self.beta_l.sinh()
    }

    pub fn ell_r(&self) -> f64 {
        (self.alpha + self.beta_r).sinh() / self.beta_r.sinh()
    }

    /// α in [0.05, 0.8], |β| in [0.3, 1.2] with random signs.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut beta = || {
            let b: f64 = rng.gen_range(0.3..1.2);
            if rng.gen_bool(0.5) {
                b
            } else {
                -b
            }
        };
        let (beta_l, beta_r, beta_b) = (beta(), beta(), beta());
        HyperbolicParams { alpha: rng.gen_range(0.05..0.8), beta_l, beta_r, beta_b }
    }

    pub fn assignment(&self) -> HashMap<Var, f64> {
        HashMap::from([(Var::Ell, self.ell()), (Var::EllL, self.ell_l()), (Var::EllR, self.ell_r())])
    }
}

/// Hyperbolic value of D_L in a sector.
pub fn hyperbolic_amplitude(p: &HyperbolicParams, kind: Kind, l: i64, left: Option<Blob>, right: Option<Blob>) -> f64 {
    use Blob::*;
    let (a, bl, br) = (p.alpha, p.beta_l, p.beta_r);
    let lf = l as f64;
    let den = bl.sinh() * br.sinh();
    match (kind, left, right) {
        (Kind::ZeroB, _, _) => ((lf + 1.0) * a).sinh() / a.sinh(),
        (Kind::OneB, Some(B), _) => (lf * a + bl).sinh() / bl.sinh(),
        (Kind::OneB, _, _) => (lf * a - bl).sinh() / (-bl).sinh(),
        (_, Some(B), Some(B)) => ((lf - 1.0) * a + bl + br).sinh() * a.sinh() / den,
        (_, Some(U), Some(U)) => ((lf - 1.0) * a - bl - br).sinh() * a.sinh() / den,
        (_, Some(U), Some(B)) => -((lf - 1.0) * a - bl + br).sinh() * a.sinh() / den,
        _ => -((lf - 1.0) * a + bl - br).sinh() * a.sinh() / den,
    }
}

/// Smallest L for which the hyperbolic form matches the Chebyshev form with
/// the U_{n<0} = 0 convention.
fn hyperbolic_l_min(kind: Kind, left: Option<Blob>, right: Option<Blob>) -> i64 {
    match (kind, left, right) {
        (Kind::ZeroB, _, _) => 0,
        (Kind::OneB, Some(Blob::B), _) => 1,
        (Kind::OneB, _, _) => 0,
        (_, Some(Blob::B), Some(Blob::B)) => 3,
        (_, Some(Blob::U), Some(Blob::U)) => 1,
        _ => 2,
    }
}

/// |a - b| scaled by max(1, |b|).
pub fn scaled_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Hyperbolic forms against polynomial evaluation at one parameter point.
pub fn hyperbolic_check(p: &HyperbolicParams, l_max: i64, tol: f64) -> Result<Report> {
    use Blob::*;
    let mut rep = Report::new();
    if p.beta_l.sinh().abs() < 1e-6 || p.beta_r.sinh().abs() < 1e-6 || p.alpha.sinh().abs() < 1e-6 {
        return Err(Error::Unsupported(format!("singular hyperbolic parameters {:?}", p)));
    }
    let asg = p.assignment();
    let mut cmp = |name: String, got: f64, want: f64| {
        let d = scaled_diff(got, want);
        rep.push(name, d <= tol, (d > tol).then(|| format!("{} vs {} (diff {:e})", got, want, d)));
    };
    cmp("ell - ell_l".into(), p.ell() - p.ell_l(), (p.beta_l - p.alpha).sinh() / p.beta_l.sinh());
    let cases: Vec<(Kind, Option<Blob>, Option<Blob>)> = vec![
        (Kind::ZeroB, None, None),
        (Kind::OneB, Some(U), None),
        (Kind::OneB, Some(B), None),
        (Kind::TwoB, Some(U), Some(U)),
        (Kind::TwoB, Some(U), Some(B)),
        (Kind::TwoB, Some(B), Some(U)),
        (Kind::TwoB, Some(B), Some(B)),
    ];
    for (kind, a, b) in cases {
        for l in hyperbolic_l_min(kind, a, b)..=l_max {
            let poly = closed_form_amplitude(kind, l, a, b, false).eval_f64(&asg)?;
            let hyp = hyperbolic_amplitude(p, kind, l, a, b);
            let tag: String = a.iter().chain(b.iter()).map(|x| x.letter()).collect();
            cmp(format!("{:?} D{}{}", kind, tag, l), poly, hyp);
        }
    }
    // sector b -> u under β_l -> -β_l, evaluated with the transformed ℓ_l
    let flipped = HyperbolicParams { beta_l: -p.beta_l, ..*p };
    for l in 1..=l_max {
        let via_b = closed_form_amplitude(Kind::OneB, l, Some(B), None, false).eval_f64(&flipped.assignment())?;
        let u_here = hyperbolic_amplitude(p, Kind::OneB, l, Some(U), None);
        cmp(format!("Db{} at -beta_l = Du{}", l, l), via_b, u_here);
    }
    Ok(rep)
}

/// U_L(ℓ/2) = Π_{j=1}^{L/2} (ℓ² - (2cos(πj/(L+1)))²) for even L.
pub fn chebyshev_root_check(ell_value: f64, l_max: i64, tol: f64) -> Report {
    let mut rep = Report::new();
    for l in (2..=l_max).step_by(2) {
        let direct = chebyshev_u_f64(l, ell_value / 2.0);
        let prod: f64 = (1..=l / 2)
            .map(|j| {
                let b = (2.0 * (PI * j as f64 / (l + 1) as f64).cos()).powi(2);
                ell_value * ell_value - b
            })
            .product();
        let d = scaled_diff(prod, direct);
        rep.push(format!("U{} roots at ell={:.4}", l, ell_value), d <= tol, (d > tol).then(|| format!("{} vs {}", prod, direct)));
    }
    rep
}

/// Hyperbolic and Chebyshev-root checks at `points` seeded random points.
pub fn transcendental_checks(points: usize, seed: u64, l_max: i64, tol: f64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new();
    for _ in 0..points {
        let p = HyperbolicParams::random(&mut rng);
        rep.extend(hyperbolic_check(&p, l_max, tol)?);
        let x: f64 = rng.gen_range(-3.0..3.0);
        rep.extend(chebyshev_root_check(x, l_max, tol));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_examples() {
        let ctx = SeriesCtx::new(10);
        assert_eq!(e_coefficient(&ctx, Family::Zero, 2, 1, false).unwrap(), BigInt::from(3));
        assert_eq!(e_coefficient(&ctx, Family::Two(1), 2, 0, true).unwrap(), BigInt::from(16));
        assert_eq!(e_coefficient(&ctx, Family::Two(1), 2, 0, false).unwrap(), BigInt::from(11));
        assert_eq!(e_coefficient(&ctx, Family::Two(6), 2, 1, false).unwrap(), BigInt::from(3));
        assert!(e_series(&ctx, Family::Two(5), 0, false).is_err());
    }

    #[test]
    fn e_series_matches_binomials() {
        let ctx = SeriesCtx::new(16);
        for fam in [Family::Zero, Family::One(1), Family::One(2), Family::One(3)] {
            for j in 0..14 {
                for k in 0..=j {
                    let want = BigInt::from(e_binomial(fam, j, k).unwrap());
                    assert_eq!(e_coefficient(&ctx, fam, j, k, false).unwrap(), want, "{:?} {} {}", fam, j, k);
                }
            }
        }
    }

    #[test]
    fn family_table() {
        use Blob::*;
        let all = [U, B];
        let mut seen = std::collections::HashMap::new();
        for a in all {
            for b in all {
                for g in all {
                    for d in all {
                        *seen.entry(Family::two_b(a, b, g, d)).or_insert(0) += 1;
                    }
                }
            }
        }
        let counts: Vec<_> = (1..=6).map(|s| seen[&Family::Two(s)]).collect();
        assert_eq!(counts, vec![4, 4, 1, 4, 2, 1]);
    }

    #[test]
    fn chebyshev_values() {
        let l = ell();
        assert_eq!(u(2), &l * &l - Poly::one());
        assert!(u(-1).is_zero());
        assert_eq!(chebyshev_u(4, &Poly::one()), Poly::constant(5));
        assert_eq!(u(4).to_string(), "ell^4 - 3*ell^2 + 1");
    }

    #[test]
    fn zero_b_solution() {
        let t = solve_amplitudes(Kind::ZeroB, false, 4).unwrap();
        assert_eq!(t.amplitude(&SectorLabel::zero(4)).unwrap().to_string(), "ell^4 - 3*ell^2 + 1");
        assert_eq!(t.coefficient(SectorLabel::zero(4), SectorLabel::zero(2)), BigInt::from(-3));
        assert!(verify_zero_b_coefficients(7).unwrap().all_pass());
    }

    #[test]
    fn two_b_bb2_depends_on_nb() {
        let bb2 = SectorLabel::two(2, Blob::B, Blob::B);
        let t0 = solve_amplitudes(Kind::TwoB, false, 4).unwrap();
        let t1 = solve_amplitudes(Kind::TwoB, true, 4).unwrap();
        assert_eq!(t0.amplitude(&bb2).unwrap().to_string(), "ell_l*ell_r");
        assert_eq!(t1.amplitude(&bb2).unwrap().to_string(), "ell_l*ell_r - 1");
    }

    #[test]
    fn closed_form_examples() {
        use Blob::*;
        let b2 = closed_form_amplitude(Kind::OneB, 2, Some(B), None, false);
        assert_eq!(b2, Poly::parse("ell*ell_l - 1").unwrap());
        let ub2 = closed_form_amplitude(Kind::TwoB, 2, Some(U), Some(B), false);
        assert_eq!(ub2, Poly::parse("ell*ell_r - 1 - ell_l*ell_r").unwrap());
        let bb3 = closed_form_amplitude(Kind::TwoB, 3, Some(B), Some(B), false);
        assert_eq!(bb3, Poly::parse("ell*ell_l*ell_r - ell_l - ell_r").unwrap());
        let uu1 = closed_form_amplitude(Kind::TwoB, 1, Some(U), Some(U), false);
        assert_eq!(uu1, Poly::parse("ell - ell_l - ell_r").unwrap());
    }

    #[test]
    fn solved_equals_closed_small() {
        for kind in [Kind::ZeroB, Kind::OneB, Kind::TwoB] {
            for nb in [false, true] {
                let r = verify_amplitudes(kind, nb, 8).unwrap();
                assert!(r.all_pass(), "{}", r.summary());
            }
        }
    }

    #[test]
    fn sum_rule_examples() {
        for mode in BoundaryMode::all_variants() {
            for n in [2, 4, 6] {
                let r = verify_sum_rules(mode, n).unwrap();
                assert!(r.all_pass(), "{}", r.summary());
            }
        }
        assert!(verify_sum_rules(BoundaryMode::zero(), 5).unwrap().all_pass());
        assert!(verify_dilute_sum_rule(5).all_pass());
    }

    #[test]
    fn fusion_small() {
        let r = verify_fusion(6);
        assert!(r.all_pass(), "{}", r.summary());
    }

    #[test]
    fn hyperbolic_example_point() {
        let p = HyperbolicParams { alpha: 0.7, beta_l: 0.3, beta_r: 0.5, beta_b: 0.4 };
        let r = hyperbolic_check(&p, 8, 1e-10).unwrap();
        assert!(r.all_pass(), "{}", r.summary());
        assert!(chebyshev_root_check(1.3, 12, 1e-10).all_pass());
    }
}
