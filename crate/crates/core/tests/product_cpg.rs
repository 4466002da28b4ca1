use prodec_core::product::{EdaRule, PdaParams, PdaStatus, ProductCode, SoftArray};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_array(code: &ProductCode, rng: &mut ChaCha8Rng) -> prodec_core::ProductArray {
    let payload: Vec<u8> = (0..code.payload_bits()).map(|_| rng.random_range(0..2)).collect();
    code.encode(&payload).unwrap()
}

#[test]
fn cpg_layout_and_invariants() {
    let code = ProductCode::c_pg();
    assert_eq!((code.n1(), code.n2(), code.length()), (31, 1057, 32767));
    assert_eq!((code.n_images(), code.pad_rows().len()), (162, 3));
    assert_eq!(code.payload_bits(), 162 * 5 * 29);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let arr = random_array(&code, &mut rng);
        assert!(code.audit(&arr).is_valid());
        assert!(code.eda(&arr).positions.is_empty());
    }
    let zero = code.encode(&vec![0; code.payload_bits()]).unwrap();
    assert!(zero.as_flat().iter().all(|&b| b == 0));
}

#[test]
fn single_error_is_located_exactly() {
    let code = ProductCode::c_pg();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let clean = random_array(&code, &mut rng);
    for _ in 0..1000 {
        let (r, c) = (rng.random_range(0..code.n2()), rng.random_range(0..code.n1()));
        let mut arr = clean.clone();
        arr.flip(r, c);
        assert_eq!(code.eda(&arr).positions, vec![(r, c)]);
    }
}

#[test]
fn detection_is_sound_with_one_error_per_column() {
    let code = ProductCode::c_pg();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let clean = random_array(&code, &mut rng);
    for _ in 0..200 {
        let mut arr = clean.clone();
        for c in 0..code.n1() {
            if rng.random_bool(0.6) {
                arr.flip(rng.random_range(0..code.n2()), c);
            }
        }
        for rule in [EdaRule::FailedIntersection, EdaRule::ExcludeSatisfied] {
            for (r, c) in code.eda_with_rule(&arr, rule).positions {
                assert_ne!(arr.get(r, c), clean.get(r, c));
            }
        }
    }
}

#[test]
fn scattered_single_errors_are_corrected() {
    let code = ProductCode::c_pg();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let tx = random_array(&code, &mut rng);
    let mut llr: Vec<f64> = tx.as_flat().iter().map(|&b| if b == 0 { 6.0 } else { -6.0 }).collect();
    for c in 0..code.n1() {
        let r = rng.random_range(0..code.n2());
        llr[r * code.n1() + c] *= -1.5;
    }
    let out = code.pda(&SoftArray::new(code.n2(), code.n1(), llr), &PdaParams::default());
    assert_eq!(out.status, PdaStatus::Corrected);
    assert_eq!(out.array, tx);
}

#[test]
fn two_erased_columns_are_recovered() {
    let code = ProductCode::c_pg();
    let (n1, n2) = (code.n1(), code.n2());
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (a, b) in [(0, 1), (5, 30), (12, 13)] {
        let tx = random_array(&code, &mut rng);
        let mut llr: Vec<f64> = tx.as_flat().iter().map(|&x| if x == 0 { 6.3 } else { -6.3 }).collect();
        for r in 0..n2 {
            llr[r * n1 + a] = 0.0;
            llr[r * n1 + b] = 0.0;
        }
        let out = code.pda(&SoftArray::new(n2, n1, llr), &PdaParams::default());
        assert_eq!(out.array.hamming_distance(&tx), 0, "columns {a}, {b}");
        assert_eq!(out.status, PdaStatus::Corrected);
    }
}
