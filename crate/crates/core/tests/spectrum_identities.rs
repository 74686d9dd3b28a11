use fracwhittle::fracint;
use fracwhittle::simulate::NormalStream;
use fracwhittle::spectrum::{dft_grid, verify_lemma51, DftPlan};
use proptest::prelude::*;

const LEMMA_DS: [f64; 9] = [-4.5, -2.0, -0.5, 0.0, 0.5, 1.0, 1.3, 2.3, 4.5];

#[test]
fn exact_decomposition_grid() {
    for n in [16usize, 128, 512] {
        let x = NormalStream::new(5, n as u64).take(n);
        for d in LEMMA_DS {
            for j in 1..=32.min(n - 1) {
                let r = verify_lemma51(&x, d, j).unwrap();
                assert!(r <= 1e-8, "n={n} d={d} j={j}: {r}");
                if d == 0.0 {
                    assert_eq!(r, 0.0);
                }
            }
        }
    }
}

#[test]
fn exact_decomposition_on_integrated_data() {
    let u = NormalStream::new(77, 0).take(300);
    let x = fracint(&u, 0.7).unwrap();
    for j in 1..=16 {
        assert!(verify_lemma51(&x, 0.7, j).unwrap() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(a in prop::collection::vec(-100.0..100.0f64, 2..600)) {
        let n = a.len();
        let full = DftPlan::new(n).full(&a);
        let lhs: f64 = full.iter().map(|w| w.norm_sqr()).sum();
        let rhs = a.iter().map(|v| v * v).sum::<f64>() / (2.0 * std::f64::consts::PI);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn periodogram_symmetry(a in prop::collection::vec(-100.0..100.0f64, 3..600)) {
        let n = a.len();
        let view = dft_grid(&a, n - 1).unwrap();
        let top = view.pgram.iter().fold(0.0f64, |m, v| m.max(*v));
        for j in 1..n {
            let (p, q) = (view.pgram[j - 1], view.pgram[n - j - 1]);
            prop_assert!((p - q).abs() <= 1e-10 * top.max(f64::MIN_POSITIVE));
            prop_assert!(p >= 0.0);
        }
    }
}
