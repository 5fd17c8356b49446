use tlblob::states::{closed_form_dimension, BoundaryMode};
use tlblob::transfer::{build_transfer, verify_master_identity, verify_partition_oracle};

#[test]
fn lattice_oracle_all_modes() {
    for mode in BoundaryMode::all_variants() {
        for (n, m) in [(2, 1), (2, 2), (2, 3), (4, 1), (4, 2), (4, 3), (6, 1), (6, 2)] {
            let r = verify_partition_oracle(n, m, mode).unwrap();
            assert!(r.all_pass(), "{}", r.summary());
        }
    }
}

#[test]
fn master_identity_to_n6_m3() {
    for mode in BoundaryMode::all_variants() {
        for n in [2, 4, 6] {
            for m in 1..=3 {
                let r = verify_master_identity(n, m, mode).unwrap();
                assert!(r.all_pass(), "{}", r.summary());
            }
        }
    }
}

#[test]
fn blocks_match_dimensions_and_are_triangular() {
    for mode in BoundaryMode::all_variants() {
        for n in [2, 4, 6, 8] {
            let t = build_transfer(n, mode).unwrap();
            assert!(t.is_block_lower_triangular(), "{} N={}", mode, n);
            for label in t.sector_labels() {
                let b = t.sector_block(label).unwrap();
                assert_eq!(b.states.len() as u128, closed_form_dimension(n, mode, label).unwrap(), "{} N={} {}", mode, n, label);
            }
        }
    }
}
