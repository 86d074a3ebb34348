//! Forward semantics of every op against closed forms and loop oracles.

mod common;

use common::{assert_close, naive_causal_attention, naive_conv1d, naive_matmul, TestRng};
use mosa_tensor::{
    causal_attention, chunk_mean, concat_rows, conv1d, conv1d_out_len, embedding_lookup,
    masked_cross_entropy, matmul, matmul_transpose_b, mean_pool, relu, softmax, weighted_sum,
    Tensor, TensorError,
};

fn t64(shape: &[usize], data: Vec<f64>) -> Tensor<f64> {
    Tensor::from_vec(shape, data).unwrap()
}

#[test]
fn matmul_identity_passes_through() {
    let a = t64(&[2, 2], vec![1.0, 0.0, 0.0, 1.0]);
    let b = t64(&[2, 2], vec![3.0, 4.0, 5.0, 6.0]);
    let y = matmul(&a, &b).unwrap();
    assert_eq!(y.to_vec(), vec![3.0, 4.0, 5.0, 6.0]);
}

#[test]
fn matmul_zero_column() {
    let a = t64(&[1, 2], vec![1.0, 2.0]);
    let b = t64(&[2, 1], vec![0.0, 0.0]);
    let y = matmul(&a, &b).unwrap();
    assert_eq!(y.shape(), &[1, 1]);
    assert_eq!(y.to_vec(), vec![0.0]);
}

#[test]
fn matmul_matches_triple_loop_oracle() {
    let mut rng = TestRng::new(11);
    let a = rng.vec(3 * 4, -2.0, 2.0);
    let b = rng.vec(4 * 2, -2.0, 2.0);
    let expected = naive_matmul(&a, &b, 3, 4, 2);
    let y = matmul(&t64(&[3, 4], a), &t64(&[4, 2], b)).unwrap();
    assert_close(&y.to_vec(), &expected, 1e-12, "matmul");
}

#[test]
fn matmul_shape_mismatch_names_both_shapes() {
    let a = t64(&[2, 3], vec![0.0; 6]);
    let b = t64(&[4, 2], vec![0.0; 8]);
    let err = matmul(&a, &b).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("[2, 3]") && msg.contains("[4, 2]"), "got: {msg}");
}

#[test]
fn matmul_transpose_b_matches_oracle() {
    let mut rng = TestRng::new(12);
    let a = rng.vec(3 * 4, -1.0, 1.0);
    let b = rng.vec(5 * 4, -1.0, 1.0);
    // oracle: transpose b explicitly, then plain matmul
    let mut bt = vec![0.0; 4 * 5];
    for r in 0..5 {
        for c in 0..4 {
            bt[c * 5 + r] = b[r * 4 + c];
        }
    }
    let expected = naive_matmul(&a, &bt, 3, 4, 5);
    let y = matmul_transpose_b(&t64(&[3, 4], a), &t64(&[5, 4], b)).unwrap();
    assert_close(&y.to_vec(), &expected, 1e-12, "matmul_transpose_b");
}

#[test]
fn relu_sign_cases() {
    let x = t64(&[3], vec![-1.0, 0.0, 2.0]);
    assert_eq!(relu(&x).unwrap().to_vec(), vec![0.0, 0.0, 2.0]);
}

#[test]
fn relu_identity_on_positive_input() {
    let data = vec![0.5, 1.0, 3.25, 7.0];
    let x = t64(&[2, 2], data.clone());
    assert_eq!(relu(&x).unwrap().to_vec(), data);
}

#[test]
fn softmax_uniform_on_equal_logits() {
    let x = t64(&[4], vec![0.0; 4]);
    let y = softmax(&x, 0).unwrap();
    assert_close(&y.to_vec(), &[0.25; 4], 1e-15, "softmax uniform");
}

#[test]
fn softmax_closed_form_with_shift() {
    // [c, c + ln 3] → [1/4, 3/4] for any constant c
    for c in [0.0, -3.5, 100.0] {
        let x = t64(&[2], vec![c, c + 3.0f64.ln()]);
        let y = softmax(&x, 0).unwrap();
        assert_close(&y.to_vec(), &[0.25, 0.75], 1e-12, "softmax closed form");
    }
}

#[test]
fn softmax_stable_under_large_logits() {
    let x = t64(&[2], vec![1000.0, 1000.0]);
    let y = softmax(&x, 0).unwrap();
    assert_close(&y.to_vec(), &[0.5, 0.5], 1e-12, "softmax stability");
}

#[test]
fn softmax_rows_sum_to_one() {
    let mut rng = TestRng::new(13);
    for _ in 0..100 {
        let x = t64(&[3, 5], rng.vec(15, -8.0, 8.0));
        let y = softmax(&x, 1).unwrap();
        let yd = y.to_vec();
        for r in 0..3 {
            let row = &yd[r * 5..(r + 1) * 5];
            assert!(row.iter().all(|&v| v >= 0.0));
            let s: f64 = row.iter().sum();
            assert!((s - 1.0).abs() < 1e-6, "row sum {s}");
        }
    }
}

#[test]
fn softmax_shift_invariance() {
    let mut rng = TestRng::new(14);
    let base = rng.vec(6, -3.0, 3.0);
    let shifted: Vec<f64> = base.iter().map(|v| v + 17.25).collect();
    let y0 = softmax(&t64(&[6], base), 0).unwrap().to_vec();
    let y1 = softmax(&t64(&[6], shifted), 0).unwrap().to_vec();
    assert_close(&y0, &y1, 1e-9, "softmax shift invariance");
}

#[test]
fn softmax_rejects_non_finite() {
    let x = t64(&[2], vec![f64::NAN, 0.0]);
    assert!(matches!(
        softmax(&x, 0).unwrap_err(),
        TensorError::NonFinite { .. }
    ));
}

#[test]
fn conv_output_length_examples() {
    assert_eq!(conv1d_out_len(100, 3, 2, 1), 50);
    // 60 s at 50 Hz through two stride-2 layers lands at 12.5 Hz
    let once = conv1d_out_len(3000, 3, 2, 1);
    assert_eq!(once, 1500);
    assert_eq!(conv1d_out_len(once, 3, 2, 1), 750);
}

#[test]
fn conv_length_formula_property_sweep() {
    for t in 1..=64usize {
        for k in 1..=5usize {
            for s in 1..=3usize {
                for p in 0..=2usize {
                    if t + 2 * p < k {
                        continue;
                    }
                    let expected = (t + 2 * p - k) / s + 1;
                    let x = Tensor::<f64>::zeros(&[t, 1]);
                    let kernel = Tensor::<f64>::zeros(&[1, 1, k]);
                    let bias = Tensor::<f64>::zeros(&[1]);
                    let y = conv1d(&x, &kernel, &bias, s, p).unwrap();
                    assert_eq!(y.shape()[0], expected, "T={t} k={k} s={s} p={p}");
                }
            }
        }
    }
}

#[test]
fn conv_identity_kernel_passes_input_through() {
    let mut rng = TestRng::new(15);
    let data = rng.vec(6 * 3, -1.0, 1.0);
    let x = t64(&[6, 3], data.clone());
    // k=1, s=1, p=0, kernel = I over channels
    let mut kernel = vec![0.0; 3 * 3];
    for c in 0..3 {
        kernel[c * 3 + c] = 1.0;
    }
    let y = conv1d(&x, &t64(&[3, 3, 1], kernel), &Tensor::zeros(&[3]), 1, 0).unwrap();
    assert_close(&y.to_vec(), &data, 1e-15, "conv identity");
}

#[test]
fn conv_matches_padded_reference() {
    let mut rng = TestRng::new(16);
    let (t, c_in, c_out, k) = (9, 3, 4, 3);
    let x = rng.vec(t * c_in, -1.0, 1.0);
    let kernel = rng.vec(c_out * c_in * k, -1.0, 1.0);
    let bias = rng.vec(c_out, -0.5, 0.5);
    for (stride, padding) in [(1, 0), (2, 1), (3, 2)] {
        let expected = naive_conv1d(&x, t, c_in, &kernel, c_out, k, &bias, stride, padding);
        let y = conv1d(
            &t64(&[t, c_in], x.clone()),
            &t64(&[c_out, c_in, k], kernel.clone()),
            &t64(&[c_out], bias.clone()),
            stride,
            padding,
        )
        .unwrap();
        assert_close(&y.to_vec(), &expected, 1e-12, "conv vs padded reference");
    }
}

#[test]
fn conv_too_short_input_is_a_dimension_error() {
    let x = Tensor::<f64>::zeros(&[1, 2]);
    let kernel = Tensor::<f64>::zeros(&[2, 2, 5]);
    let bias = Tensor::<f64>::zeros(&[2]);
    assert!(matches!(
        conv1d(&x, &kernel, &bias, 1, 1).unwrap_err(),
        TensorError::DimensionMismatch { .. }
    ));
}

#[test]
fn mean_pool_two_point_mean() {
    let x = t64(&[2, 2], vec![1.0, 3.0, 3.0, 5.0]);
    assert_eq!(mean_pool(&x).unwrap().to_vec(), vec![2.0, 4.0]);
}

#[test]
fn mean_pool_single_frame_is_identity() {
    let x = t64(&[1, 3], vec![7.0, -1.0, 0.5]);
    assert_eq!(mean_pool(&x).unwrap().to_vec(), vec![7.0, -1.0, 0.5]);
}

#[test]
fn mean_pool_matches_sum_oracle() {
    let mut rng = TestRng::new(17);
    let data = rng.vec(7 * 5, -4.0, 4.0);
    let mut expected = vec![0.0; 5];
    for r in 0..7 {
        for c in 0..5 {
            expected[c] += data[r * 5 + c];
        }
    }
    for v in expected.iter_mut() {
        *v /= 7.0;
    }
    let y = mean_pool(&t64(&[7, 5], data)).unwrap();
    assert_close(&y.to_vec(), &expected, 1e-12, "mean_pool");
}

#[test]
fn mean_pool_rejects_empty_input() {
    let x = Tensor::<f64>::zeros(&[0, 4]);
    assert!(matches!(
        mean_pool(&x).unwrap_err(),
        TensorError::EmptyInput { .. }
    ));
}

#[test]
fn embedding_first_row_and_repeats() {
    let table = t64(&[3, 2], vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    let y = embedding_lookup(&table, &[0]).unwrap();
    assert_eq!(y.to_vec(), vec![1.0, 2.0]);
    let y = embedding_lookup(&table, &[2, 2]).unwrap();
    assert_eq!(y.to_vec(), vec![5.0, 6.0, 5.0, 6.0]);
}

#[test]
fn embedding_matches_row_copy_oracle() {
    let mut rng = TestRng::new(18);
    let table_data = rng.vec(10 * 4, -1.0, 1.0);
    let ids: Vec<usize> = (0..16).map(|_| rng.index(10)).collect();
    let mut expected = Vec::new();
    for &id in &ids {
        expected.extend_from_slice(&table_data[id * 4..(id + 1) * 4]);
    }
    let y = embedding_lookup(&t64(&[10, 4], table_data), &ids).unwrap();
    assert_close(&y.to_vec(), &expected, 0.0, "embedding gather");
}

#[test]
fn embedding_out_of_range_names_the_id() {
    let table = t64(&[3, 2], vec![0.0; 6]);
    let err = embedding_lookup(&table, &[1, 7]).unwrap_err();
    assert!(err.to_string().contains('7'), "got: {err}");
}

#[test]
fn attention_single_position_returns_v() {
    let q = t64(&[1, 4], vec![0.3, -0.1, 0.9, 0.0]);
    let k = t64(&[1, 4], vec![1.0, 1.0, 1.0, 1.0]);
    let v = t64(&[1, 4], vec![5.0, 6.0, 7.0, 8.0]);
    let y = causal_attention(&q, &k, &v).unwrap();
    assert_eq!(y.to_vec(), vec![5.0, 6.0, 7.0, 8.0]);
}

#[test]
fn attention_zero_queries_average_visible_rows() {
    let mut rng = TestRng::new(19);
    let t = 4;
    let d = 3;
    let q = Tensor::zeros(&[t, d]);
    let k = t64(&[t, d], rng.vec(t * d, -1.0, 1.0));
    let vdata = rng.vec(t * d, -1.0, 1.0);
    let v = t64(&[t, d], vdata.clone());
    let y = causal_attention(&q, &k, &v).unwrap().to_vec();
    for i in 0..t {
        for c in 0..d {
            let mean: f64 = (0..=i).map(|j| vdata[j * d + c]).sum::<f64>() / (i + 1) as f64;
            assert!((y[i * d + c] - mean).abs() < 1e-12);
        }
    }
}

#[test]
fn attention_matches_per_position_loop_oracle() {
    let mut rng = TestRng::new(20);
    let (t, d) = (4, 6);
    let q = rng.vec(t * d, -1.5, 1.5);
    let k = rng.vec(t * d, -1.5, 1.5);
    let v = rng.vec(t * d, -1.5, 1.5);
    let expected = naive_causal_attention(&q, &k, &v, t, d);
    let y = causal_attention(&t64(&[t, d], q), &t64(&[t, d], k), &t64(&[t, d], v)).unwrap();
    assert_close(&y.to_vec(), &expected, 1e-10, "causal attention");
}

#[test]
fn cross_entropy_uniform_logits_give_ln_v() {
    let logits = Tensor::<f64>::zeros(&[3, 4]);
    let loss = masked_cross_entropy(&logits, &[2, 0, 1], &[false, true, false]).unwrap();
    assert!((loss.item().unwrap() - 4.0f64.ln()).abs() < 1e-12);
}

#[test]
fn cross_entropy_confident_logits_vanish() {
    let mut data = vec![0.0; 2 * 5];
    data[3] = 30.0; // row 0 favors target 3
    data[5] = 30.0; // row 1 favors target 0
    let logits = t64(&[2, 5], data);
    let loss = masked_cross_entropy(&logits, &[3, 0], &[true, true]).unwrap();
    assert!(loss.item().unwrap() < 1e-9);
}

#[test]
fn cross_entropy_ignores_masked_out_targets_bit_exactly() {
    let mut rng = TestRng::new(21);
    let data = rng.vec(4 * 6, -2.0, 2.0);
    let logits_a = t64(&[4, 6], data.clone());
    let logits_b = t64(&[4, 6], data);
    let mask = [true, false, true, false];
    let la = masked_cross_entropy(&logits_a, &[1, 2, 3, 4], &mask).unwrap();
    let lb = masked_cross_entropy(&logits_b, &[1, 5, 3, 0], &mask).unwrap();
    assert_eq!(
        la.item().unwrap().to_bits(),
        lb.item().unwrap().to_bits(),
        "loss must not read targets at masked-out positions"
    );
}

#[test]
fn cross_entropy_all_false_mask_is_an_error() {
    let logits = Tensor::<f64>::zeros(&[2, 3]);
    assert!(matches!(
        masked_cross_entropy(&logits, &[0, 0], &[false, false]).unwrap_err(),
        TensorError::EmptySupervision
    ));
}

#[test]
fn weighted_sum_two_expert_mean() {
    let mut rng = TestRng::new(22);
    let a = rng.vec(6, -1.0, 1.0);
    let b = rng.vec(6, -1.0, 1.0);
    let expected: Vec<f64> = a.iter().zip(&b).map(|(&x, &y)| 0.5 * (x + y)).collect();
    let y = weighted_sum(
        &[t64(&[2, 3], a), t64(&[2, 3], b)],
        &t64(&[2], vec![0.5, 0.5]),
    )
    .unwrap();
    assert_close(&y.to_vec(), &expected, 1e-12, "weighted_sum mean");
}

#[test]
fn chunk_mean_averages_ragged_tail() {
    let x = t64(&[5, 1], vec![1.0, 3.0, 5.0, 7.0, 9.0]);
    let y = chunk_mean(&x, 2).unwrap();
    assert_eq!(y.shape(), &[3, 1]);
    assert_eq!(y.to_vec(), vec![2.0, 6.0, 9.0]);
}

#[test]
fn concat_rows_stacks_in_order() {
    let a = t64(&[1, 2], vec![1.0, 2.0]);
    let b = t64(&[2, 2], vec![3.0, 4.0, 5.0, 6.0]);
    let y = concat_rows(&[a, b]).unwrap();
    assert_eq!(y.shape(), &[3, 2]);
    assert_eq!(y.to_vec(), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
}
