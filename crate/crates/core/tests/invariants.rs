use proptest::prelude::*;

use tlblob::algebra::{apply_word, inner_product, Generator, GramConventions};
use tlblob::states::{binomial, enumerate_all, enumerate_reduced, BoundaryMode, Kind};
use tlblob::Var;

fn mode_and_n() -> impl Strategy<Value = (BoundaryMode, usize)> {
    let modes = BoundaryMode::all_variants();
    (0..modes.len(), 1usize..=10).prop_map(move |(i, n)| {
        let m = modes[i];
        let n = if m.kind == Kind::ZeroB { n } else { 2 * n.div_ceil(2) };
        (m, n)
    })
}

fn generators(n: usize, mode: BoundaryMode) -> Vec<Generator> {
    let mut g: Vec<Generator> = (1..n).map(Generator::E).collect();
    if mode.has_left() {
        g.push(Generator::BlobL);
    }
    if mode.has_right() {
        g.push(Generator::BlobR);
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn words_never_create_strings((mode, n) in mode_and_n(), pick in any::<u64>(), word in prop::collection::vec(any::<u16>(), 0..16)) {
        prop_assume!(n >= 2 || mode.kind == Kind::ZeroB);
        let states: Vec<_> = enumerate_all(n, mode).unwrap().into_iter().flat_map(|(_, v)| v).collect();
        let s = &states[(pick % states.len() as u64) as usize];
        let gens = generators(n, mode);
        prop_assume!(!gens.is_empty());
        let w: Vec<Generator> = word.iter().map(|&k| gens[k as usize % gens.len()]).collect();
        let out = apply_word(&w, s, mode).unwrap();
        if !out.weight.is_zero() {
            prop_assert!(out.state.num_strings() <= s.num_strings());
            // λ = 0 spaces are images of the pinned blob, not closed under e_i
            let full = BoundaryMode { lambda_l: true, lambda_r: true, ..mode };
            prop_assert!(out.state.is_valid(full));
        }
        if !mode.nb {
            let vars = out.weight.vars();
            prop_assert!(!vars.contains(&Var::NB) && !vars.contains(&Var::EllB));
        }
    }

    #[test]
    fn inner_product_symmetric(kind in 0usize..3, half in 1usize..=4, conv in 0usize..3, a in any::<u32>(), b in any::<u32>(), l in any::<u8>()) {
        let kind = [Kind::ZeroB, Kind::OneB, Kind::TwoB][kind];
        let conv = match conv {
            0 => GramConventions::default(),
            1 if kind == Kind::ZeroB => GramConventions::semimeander(),
            1 => GramConventions::restricted(),
            _ => GramConventions::forbidden_double(),
        };
        let n = 2 * half;
        let mode = conv.mode(kind);
        let groups = enumerate_all(n, mode).unwrap();
        let (sector, _) = groups[l as usize % groups.len()];
        let states = enumerate_reduced(n, mode, sector).unwrap();
        let x = &states[a as usize % states.len()];
        let y = &states[b as usize % states.len()];
        prop_assert_eq!(inner_product(x, y, mode, &conv), inner_product(y, x, mode, &conv));
    }

    #[test]
    fn totals_and_stable_order(n in 1usize..=12, lam in any::<bool>()) {
        let zero: usize = enumerate_all(n, BoundaryMode::zero()).unwrap().iter().map(|(_, v)| v.len()).sum();
        prop_assert_eq!(zero as u128, binomial(n as i64, (n / 2) as i64));
        if n % 2 == 0 {
            let mode = BoundaryMode::one(lam);
            let first = enumerate_all(n, mode).unwrap();
            let one: usize = first.iter().map(|(_, v)| v.len()).sum();
            prop_assert_eq!(one, if lam { 1 << n } else { 1 << (n - 1) });
            prop_assert_eq!(first, enumerate_all(n, mode).unwrap());
        }
    }
}
