use std::hash::Hasher;

use numwall::ff::PrimeField;
use numwall::render::render_ppm;
use numwall::seq::paperfolding_level1;
use numwall::wall::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PF1_F3_MAX_SIDE: usize = 3;
const F2_SIDE_TWO_MIN_LEN: usize = 14;
const F5_RENDER_FNV: u64 = 0xb854_91e9_fad8_1cb7;

fn f3() -> PrimeField {
    PrimeField::new(3).unwrap()
}

#[test]
fn pf1_f3_window_side_is_bounded() {
    let prefix = paperfolding_level1().coded_prefix(&f3(), 1 << 12);
    for e in 10..=12 {
        let wall = generate_wall(&prefix[..1 << e], &f3());
        let q = lc_quality(&wall).unwrap();
        assert_eq!(q.max_side, PF1_F3_MAX_SIDE, "prefix 2^{e}");
        assert!(!q.unbounded);
    }
}

#[test]
fn pf1_f3_prefix_agrees_with_oracle() {
    let prefix = paperfolding_level1().coded_prefix(&f3(), 64);
    assert_eq!(generate_wall(&prefix, &f3()), oracle_wall(&prefix, &f3()));
}

#[test]
fn f2_side_two_threshold() {
    let f2 = PrimeField::new(2).unwrap();
    let scan = scan_window_search(&f2, 24, 2, 1 << 24).unwrap();
    assert_eq!(scan.min_len, Some(F2_SIDE_TWO_MIN_LEN));
    let witness = scan.last_witness.unwrap();
    assert_eq!(witness.len(), F2_SIDE_TWO_MIN_LEN - 1);
    let wall = generate_wall(&witness, &f2);
    assert!(find_windows(&wall).unwrap().iter().all(|w| w.side < 2));
}

#[test]
fn f2_size_three_at_length_56_is_refused() {
    let f2 = PrimeField::new(2).unwrap();
    let err = exhaustive_window_search(&f2, 56, 3, 1 << 40).unwrap_err();
    assert!(matches!(err, WallError::BudgetExceeded { .. }));
}

#[test]
fn render_golden_hash() {
    let f5 = PrimeField::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let s: Vec<u8> = (0..25).map(|_| rng.gen_range(0..5)).collect();
    let mut out = Vec::new();
    render_ppm(&generate_wall(&s, &f5), &mut out).unwrap();
    let mut h = fnv::FnvHasher::default();
    h.write(&out);
    assert_eq!(h.finish(), F5_RENDER_FNV);
}

#[test]
fn random_f5_walls_satisfy_the_frame_identity() {
    let f5 = PrimeField::new(5).unwrap();
    let mut checked = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s: Vec<u8> = (0..48)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    0
                } else {
                    rng.gen_range(0..5)
                }
            })
            .collect();
        let wall = generate_wall(&s, &f5);
        for w in find_windows(&wall).unwrap().iter().filter(|w| !w.clipped) {
            match frame_ratios(&wall, &f5, w) {
                Ok(r) => {
                    assert!(r.identity_holds(&f5, w.side), "seed {seed}: {w:?}");
                    checked += 1;
                }
                Err(WallError::FrameOutsideGrid { .. }) => {}
                Err(e) => panic!("seed {seed}: {e}"),
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn dump_round_trips_a_real_wall() {
    let wall = generate_wall(&paperfolding_level1().coded_prefix(&f3(), 40), &f3());
    assert_eq!(WallGrid::from_dump(&wall.to_dump()).unwrap(), wall);
}
